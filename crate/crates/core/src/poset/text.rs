//! Line-oriented poset and model files.
//!
//! ```text
//! # a V shape
//! points: p0 p1 p2
//! covers: p0<p1 p0<p2
//! colors: p0:{x,y} p1:{x}
//! ```
//!
//! `covers:` accepts chains such as `a<b<c`. `colors:` is optional and only
//! read by Kripke models; uncoloured points get the empty colour. An
//! optional `vars:` line fixes the variable order, otherwise the variables
//! seen in `colors:` are used in sorted order.

use std::collections::BTreeSet;

use super::Poset;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PosetFile {
    pub poset: Poset,
    pub vars: Vec<String>,
    /// Per point, the variables in its colour; `None` when the file has no
    /// `colors:` directive.
    pub colors: Option<Vec<Vec<String>>>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || "<:{},#".contains(c))
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<PosetFile> {
    let mut points: Vec<String> = Vec::new();
    let mut covers: Vec<(String, String)> = Vec::new();
    let mut colors: Option<Vec<(String, Vec<String>, usize)>> = None;
    let mut vars: Option<Vec<String>> = None;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| err(lineno, "expected `directive: ...`"))?;
        match key.trim() {
            "points" => {
                for tok in rest.split_whitespace() {
                    if !valid_name(tok) {
                        return Err(err(lineno, format!("bad point name `{tok}`")));
                    }
                    points.push(tok.to_string());
                }
            }
            "covers" => {
                for tok in rest.split_whitespace() {
                    let chain: Vec<&str> = tok.split('<').collect();
                    if chain.len() < 2 || chain.iter().any(|s| !valid_name(s)) {
                        return Err(err(lineno, format!("bad cover `{tok}`")));
                    }
                    for w in chain.windows(2) {
                        covers.push((w[0].to_string(), w[1].to_string()));
                    }
                }
            }
            "vars" => {
                let v: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
                if let Some(bad) = v.iter().find(|s| !valid_name(s)) {
                    return Err(err(lineno, format!("bad variable name `{bad}`")));
                }
                vars.get_or_insert_with(Vec::new).extend(v);
            }
            "colors" => {
                let entries = colors.get_or_insert_with(Vec::new);
                let mut rest = rest.trim();
                while !rest.is_empty() {
                    let (name, tail) = rest
                        .split_once(':')
                        .ok_or_else(|| err(lineno, "expected `point:{...}`"))?;
                    let tail = tail.trim_start();
                    let inner_end = tail
                        .strip_prefix('{')
                        .and_then(|t| t.find('}'))
                        .ok_or_else(|| err(lineno, "colour must be written `{x,y}`"))?;
                    let inner = &tail[1..=inner_end];
                    let set: Vec<String> = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect();
                    if let Some(bad) = set.iter().find(|s| !valid_name(s)) {
                        return Err(err(lineno, format!("bad variable name `{bad}`")));
                    }
                    entries.push((name.trim().to_string(), set, lineno));
                    rest = tail[inner_end + 2..].trim_start();
                }
            }
            other => return Err(err(lineno, format!("unknown directive `{other}`"))),
        }
    }

    let poset = Poset::new(&points, &covers)?;
    let seen: BTreeSet<String> = colors
        .iter()
        .flatten()
        .flat_map(|(_, s, _)| s.iter().cloned())
        .collect();
    let vars = match vars {
        Some(v) => {
            if let Some(missing) = seen.iter().find(|s| !v.contains(s)) {
                return Err(Error::UnknownVariable(missing.clone()));
            }
            v
        }
        None => seen.into_iter().collect(),
    };
    let colors = match colors {
        None => None,
        Some(entries) => {
            let mut per_point = vec![Vec::new(); poset.len()];
            let mut assigned = vec![false; poset.len()];
            for (name, set, lineno) in entries {
                let x = poset
                    .index_of(&name)
                    .ok_or_else(|| Error::UnknownPoint(name.clone()))?;
                if assigned[x] {
                    return Err(err(lineno, format!("point `{name}` coloured twice")));
                }
                assigned[x] = true;
                per_point[x] = set;
            }
            Some(per_point)
        }
    };
    Ok(PosetFile {
        poset,
        vars,
        colors,
    })
}

/// Serializes a poset (and optionally a colouring) in the format read by
/// [`parse`].
pub fn write(poset: &Poset, vars: Option<&[String]>, colors: Option<&[Vec<String>]>) -> String {
    let mut out = String::new();
    out.push_str("points:");
    for n in poset.names() {
        out.push(' ');
        out.push_str(n);
    }
    out.push('\n');
    let covers = poset.covers();
    if !covers.is_empty() {
        out.push_str("covers:");
        for (l, h) in covers {
            out.push_str(&format!(" {}<{}", poset.name(l), poset.name(h)));
        }
        out.push('\n');
    }
    if let Some(v) = vars {
        if !v.is_empty() {
            out.push_str("vars: ");
            out.push_str(&v.join(" "));
            out.push('\n');
        }
    }
    if let Some(cs) = colors {
        out.push_str("colors:");
        for (x, c) in cs.iter().enumerate() {
            out.push_str(&format!(" {}:{{{}}}", poset.name(x), c.join(",")));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fixture_with_comments() {
        let f = parse("# V3\npoints: p0 p1 p2\ncovers: p0<p1 p0<p2 # two covers\n").unwrap();
        assert_eq!(f.poset.len(), 3);
        assert_eq!(f.poset.covers(), vec![(0, 1), (0, 2)]);
        assert!(f.colors.is_none());
    }

    #[test]
    fn parses_colors() {
        let f = parse("points: a b\ncovers: a<b\ncolors: a:{x, y} b:{}\n").unwrap();
        assert_eq!(f.vars, vec!["x", "y"]);
        assert_eq!(
            f.colors.unwrap(),
            vec![vec!["x".to_string(), "y".to_string()], vec![]]
        );
    }

    #[test]
    fn round_trip() {
        let text = "points: a b c\ncovers: a<b b<c\nvars: x\ncolors: a:{x} b:{} c:{}\n";
        let f = parse(text).unwrap();
        let again = write(&f.poset, Some(&f.vars), f.colors.as_deref());
        assert_eq!(again, text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("points: a\nbogus: x\n") {
            Err(Error::Format { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("points: a b\ncovers: a<b b<a\n"),
            Err(Error::CycleDetected(_))
        ));
    }
}
