//! Loading posets and models, and reading element arguments.

use std::path::Path;

use anyhow::{Context, Result};
use coheyting::fixtures;
use coheyting::kripke::{eval_on_generators, KripkeModel};
use coheyting::poset::text::{parse, PosetFile};
use coheyting::terms::{eval_with, parse_term, Signature};
use coheyting::{Algebra, Element, Error};

/// A file path, or the name of a bundled fixture (`c2`, `a2`, `v3`, `u12`).
pub fn load(path: &str) -> Result<PosetFile> {
    let text = if Path::new(path).exists() {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    } else if let Some(t) = fixtures::by_name(path) {
        t.to_string()
    } else {
        return Err(InputError(format!("no such file or fixture: {path}")).into());
    };
    Ok(parse(&text)?)
}

pub fn load_model(path: &str) -> Result<KripkeModel> {
    let file = load(path)?;
    if file.colors.is_none() {
        return Err(InputError(format!("{path} has no `colors:` directive")).into());
    }
    Ok(KripkeModel::from_file(&file)?)
}

/// An element written as `{p0,p1}`, or as a co-Heyting term whose variables
/// are point names standing for their principal downsets.
pub fn element(alg: &Algebra, text: &str) -> Result<Element> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(alg.parse_point_list(text)?);
    }
    let t = parse_term(text, Some(Signature::CoHeyting))?;
    let spec = alg.spec();
    Ok(eval_with(&t, alg, &|v| {
        spec.index_of(v).map(|p| alg.principal(p))
    })?)
}

/// An element of a free quotient: a point list, or a co-Heyting term in
/// the generator names.
pub fn free_element(alg: &Algebra, gens: &[Element], text: &str) -> Result<Element> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(alg.parse_point_list(text)?);
    }
    let t = parse_term(text, Some(Signature::CoHeyting))?;
    Ok(eval_on_generators(&t, alg, gens)?)
}

/// Bad user input that is not a library error; maps to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// Exit code for an error: 3 for resource caps, 2 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_cap() => 3,
        _ => 2,
    }
}
