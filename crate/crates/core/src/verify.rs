//! Property suites over enumerated and random finite algebras.
//!
//! A case is a poset plus optional elements, a term and integer
//! parameters. Random cases come from a seeded ChaCha stream, so a run is
//! determined by `(suite, seed, budget, max_points)`. Cases are checked in
//! parallel; results are reported in case order. Failing cases are shrunk
//! by deleting maximal points of the poset, then points of the elements.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::oracle::{kernel_generator, Table};
use crate::algebra::{Algebra, Codim, Dim, Element};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::kripke::{
    enumerate_reduced_models, free_quotient, model_of_algebra, universal_frame, var_names,
};
use crate::metric::{distance, make_tower, TowerSource};
use crate::pointset::PointSet;
use crate::poset::text::{parse, write};
use crate::poset::{canonical_form, enumerate_posets_up_to, Poset};
use crate::terms::{dualize, eval_with, parse_term, random_term, slice_term, Signature, Term};

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    /// Random cases per randomized suite.
    pub budget: usize,
    /// Largest poset used by enumerating suites and random cases.
    pub max_points: usize,
    pub caps: Caps,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            budget: 1000,
            max_points: 5,
            caps: Caps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub poset: Poset,
    pub elements: Vec<PointSet>,
    pub term: Option<Term>,
    pub params: Vec<usize>,
}

impl Case {
    fn of_poset(poset: Poset) -> Case {
        Case {
            poset,
            elements: vec![],
            term: None,
            params: vec![],
        }
    }

    fn of_params(params: Vec<usize>) -> Case {
        Case {
            poset: Poset::antichain(0),
            elements: vec![],
            term: None,
            params,
        }
    }

    /// Line format: the poset directives plus `elements:`, `term:` and
    /// `params:` lines, headed by `suite:`.
    pub fn to_text(&self, suite: &str) -> String {
        let mut out = format!("suite: {suite}\n");
        out.push_str(&write(&self.poset, None, None));
        if !self.elements.is_empty() {
            let sets: Vec<String> = self
                .elements
                .iter()
                .map(|e| self.poset.format_set(e))
                .collect();
            let _ = writeln!(out, "elements: {}", sets.join(" "));
        }
        if let Some(t) = &self.term {
            let _ = writeln!(out, "term: {t}");
        }
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "params: {}", ps.join(" "));
        }
        out
    }

    /// Inverse of [`Case::to_text`]; returns the suite name too.
    pub fn parse(text: &str) -> Result<(String, Case)> {
        let mut suite = None;
        let mut elements = Vec::new();
        let mut term = None;
        let mut params = Vec::new();
        let mut rest = String::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |msg: String| Error::Format { line: i + 1, msg };
            let t = line.trim();
            if let Some(v) = t.strip_prefix("suite:") {
                suite = Some(v.trim().to_string());
            } else if let Some(v) = t.strip_prefix("elements:") {
                elements = v.split_whitespace().map(str::to_string).collect();
            } else if let Some(v) = t.strip_prefix("term:") {
                term = Some(parse_term(v.trim(), None)?);
            } else if let Some(v) = t.strip_prefix("params:") {
                params = v
                    .split_whitespace()
                    .map(|p| p.parse().map_err(|_| bad(format!("bad parameter `{p}`"))))
                    .collect::<Result<_>>()?;
            } else {
                rest.push_str(line);
            }
            rest.push('\n');
        }
        let suite = suite.ok_or(Error::Format {
            line: 1,
            msg: "missing `suite:` line".into(),
        })?;
        let poset = parse(&rest)?.poset;
        let alg = Algebra::new(poset.clone());
        let elements = elements
            .iter()
            .map(|e| alg.parse_point_list(e).map(|x| x.points().clone()))
            .collect::<Result<_>>()?;
        Ok((
            suite,
            Case {
                poset,
                elements,
                term,
                params,
            },
        ))
    }
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub case_id: usize,
    pub message: String,
    pub original: Case,
    pub minimal: Case,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} cases, {} failures ({:.2}s)",
            self.suite,
            self.cases,
            self.failures.len(),
            self.elapsed.as_secs_f64()
        )
    }

    /// Summary plus each failure's message and shrunk case.
    pub fn render(&self) -> String {
        let mut out = self.summary();
        out.push('\n');
        for f in &self.failures {
            let _ = writeln!(out, "case {}: {}", f.case_id, f.message);
            out.push_str(&f.minimal.to_text(&self.suite));
        }
        out
    }
}

type Check = fn(&Case, &Config) -> std::result::Result<(), String>;

enum Gen {
    /// `budget` random cases with this many elements and optionally a
    /// random term over `x, y`.
    Random {
        elements: usize,
        term: Option<Signature>,
    },
    /// Every poset class with `1..=max_points` points.
    Posets,
    /// Fixed parameter tuples.
    Params(fn(&Config) -> Vec<Vec<usize>>),
}

struct Suite {
    name: &'static str,
    about: &'static str,
    gen: Gen,
    check: Check,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "s2-identities",
        about: "difference identities and (a−b)∧b ≪ a",
        gen: Gen::Random {
            elements: 3,
            term: None,
        },
        check: check_identities,
    },
    Suite {
        name: "sym-diff-triangle",
        about: "a△c ≤ (a△b) ∨ (b△c)",
        gen: Gen::Random {
            elements: 3,
            term: None,
        },
        check: check_triangle,
    },
    Suite {
        name: "codim-join",
        about: "codim(a∨b) = min(codim a, codim b)",
        gen: Gen::Random {
            elements: 2,
            term: None,
        },
        check: check_codim_join,
    },
    Suite {
        name: "dim-rank",
        about: "point ranks agree with prime-filter heights and ≪-chains",
        gen: Gen::Posets,
        check: check_dim_rank,
    },
    Suite {
        name: "epsilon-chain",
        about: "ε_{d+1} ≪ ε_d and codim a ≥ d iff a ≤ ε_d",
        gen: Gen::Posets,
        check: check_epsilon_chain,
    },
    Suite {
        name: "min-primes",
        about: "minimal primes of a−b are those of a outside b",
        gen: Gen::Random {
            elements: 2,
            term: None,
        },
        check: check_min_primes,
    },
    Suite {
        name: "join-irr",
        about: "irreducibles, supports and conjugation against definitions",
        gen: Gen::Posets,
        check: check_irreducibles,
    },
    Suite {
        name: "quotient-fiber",
        about: "fiber extrema a−ε, a∨ε and kernels of every quotient",
        gen: Gen::Posets,
        check: check_quotient_fiber,
    },
    Suite {
        name: "slice",
        about: "dim ≤ d iff the slice term P_{d+1} vanishes",
        gen: Gen::Posets,
        check: check_slice,
    },
    Suite {
        name: "ultrametric",
        about: "dist(a,c) ≤ max(dist(a,b), dist(b,c))",
        gen: Gen::Random {
            elements: 3,
            term: None,
        },
        check: check_ultrametric,
    },
    Suite {
        name: "morphism-metric",
        about: "quotient maps contract distances and preserve ε_d",
        gen: Gen::Random {
            elements: 3,
            term: None,
        },
        check: check_morphism_metric,
    },
    Suite {
        name: "term-lipschitz",
        about: "term functions are 1-Lipschitz and commute with quotients",
        gen: Gen::Random {
            elements: 4,
            term: Some(Signature::CoHeyting),
        },
        check: check_term_lipschitz,
    },
    Suite {
        name: "duality",
        about: "forcing t* is the complement of evaluating t",
        gen: Gen::Random {
            elements: 2,
            term: Some(Signature::CoHeyting),
        },
        check: check_duality,
    },
    Suite {
        name: "bisim-truth",
        about: "bisimulation reduction preserves truth sets",
        gen: Gen::Random {
            elements: 2,
            term: Some(Signature::Heyting),
        },
        check: check_bisim_truth,
    },
    Suite {
        name: "universal-census",
        about: "universal frame layer bounds and free quotient sizes",
        gen: Gen::Params(|_| {
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 1],
                vec![1, 2],
                vec![1, 3],
                vec![2, 1],
                vec![2, 2],
            ]
        }),
        check: check_universal_census,
    },
    Suite {
        name: "tower",
        about: "tower maps, ε agreement and level identification",
        gen: Gen::Params(|_| vec![vec![0, 3], vec![1, 3], vec![2, 1]]),
        check: check_tower,
    },
    Suite {
        name: "canonical-form",
        about: "canonical codes are invariant under relabelling",
        gen: Gen::Posets,
        check: check_canonical,
    },
];

/// `(name, description)` of every suite.
pub fn suites() -> Vec<(&'static str, &'static str)> {
    SUITES.iter().map(|s| (s.name, s.about)).collect()
}

fn find(name: &str) -> Result<&'static Suite> {
    SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Invalid(format!("unknown suite `{name}`")))
}

fn suite_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a of the name, mixed with the user seed.
    let h = name.bytes().fold(0xcbf29ce484222325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    });
    h ^ seed.wrapping_mul(0x9e3779b97f4a7c15)
}

fn random_downset<R: Rng>(rng: &mut R, downsets: &[PointSet]) -> PointSet {
    downsets[rng.gen_range(0..downsets.len())].clone()
}

/// The cases a suite runs under `cfg`.
pub fn cases(name: &str, cfg: &Config) -> Result<Vec<Case>> {
    let suite = find(name)?;
    Ok(match &suite.gen {
        Gen::Posets => enumerate_posets_up_to(cfg.max_points, &cfg.caps)?
            .into_iter()
            .map(Case::of_poset)
            .collect(),
        Gen::Params(f) => f(cfg).into_iter().map(Case::of_params).collect(),
        Gen::Random { elements, term } => {
            let mut by_size: Vec<Vec<(Poset, Vec<PointSet>)>> = Vec::new();
            for n in 1..=cfg.max_points {
                let layer = crate::poset::enumerate_posets(n, &cfg.caps)?
                    .into_iter()
                    .map(|p| {
                        let ds = p.downsets(cfg.caps.max_elements)?;
                        Ok((p, ds))
                    })
                    .collect::<Result<Vec<_>>>()?;
                by_size.push(layer);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(cfg.seed, name));
            let vars = var_names(2);
            (0..cfg.budget)
                .map(|_| {
                    let layer = &by_size[rng.gen_range(0..by_size.len())];
                    let (p, ds) = layer.choose(&mut rng).unwrap();
                    let elements = (0..*elements)
                        .map(|_| random_downset(&mut rng, ds))
                        .collect();
                    let term = term.map(|sig| random_term(&mut rng, &vars, 4, sig));
                    Case {
                        poset: p.clone(),
                        elements,
                        term,
                        params: vec![],
                    }
                })
                .collect()
        }
    })
}

/// Runs one suite check on one case.
pub fn check_case(
    name: &str,
    case: &Case,
    cfg: &Config,
) -> Result<std::result::Result<(), String>> {
    let suite = find(name)?;
    Ok((suite.check)(case, cfg))
}

pub fn run_suite(name: &str, cfg: &Config) -> Result<SuiteReport> {
    let suite = find(name)?;
    let start = Instant::now();
    let cases = cases(name, cfg)?;
    let results: Vec<std::result::Result<(), String>> =
        cases.par_iter().map(|c| (suite.check)(c, cfg)).collect();
    let mut failures = Vec::new();
    for (id, r) in results.into_iter().enumerate() {
        if let Err(message) = r {
            let minimal = minimize(&cases[id], suite.check, cfg);
            failures.push(Failure {
                case_id: id,
                message,
                original: cases[id].clone(),
                minimal,
            });
        }
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        cases: cases.len(),
        failures,
        elapsed: start.elapsed(),
    })
}

/// Re-checks a stored case; `Ok(Err(msg))` when it still fails.
pub fn replay(text: &str, cfg: &Config) -> Result<(String, std::result::Result<(), String>)> {
    let (suite, case) = Case::parse(text)?;
    let r = check_case(&suite, &case, cfg)?;
    Ok((suite, r))
}

fn restrict_case(case: &Case, keep: &PointSet) -> Case {
    let (poset, map) = case.poset.restrict(keep);
    let elements = case
        .elements
        .iter()
        .map(|e| e.intersection(keep).remap(poset.len(), &map))
        .collect();
    Case {
        poset,
        elements,
        term: case.term.clone(),
        params: case.params.clone(),
    }
}

/// Greedy shrinking: drop maximal points of the poset while the check
/// still fails, then drop maximal points of each element.
pub fn minimize(case: &Case, check: Check, cfg: &Config) -> Case {
    let mut cur = case.clone();
    'outer: loop {
        let p = &cur.poset;
        for m in &p.maximal_points(&p.full_set()) {
            let mut keep = p.full_set();
            keep.remove(m);
            let smaller = restrict_case(&cur, &keep);
            if check(&smaller, cfg).is_err() {
                cur = smaller;
                continue 'outer;
            }
        }
        for i in 0..cur.elements.len() {
            for m in &cur.poset.maximal_points(&cur.elements[i]) {
                let mut smaller = cur.clone();
                smaller.elements[i].remove(m);
                if check(&smaller, cfg).is_err() {
                    cur = smaller;
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

// --- checks -------------------------------------------------------------

type Outcome = std::result::Result<(), String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn setup(case: &Case) -> std::result::Result<(Algebra, Vec<Element>), String> {
    let a = Algebra::new(case.poset.clone());
    let els = case
        .elements
        .iter()
        .map(|e| a.element(e.clone()))
        .collect::<Result<Vec<_>>>()
        .map_err(fail)?;
    Ok((a, els))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_identities(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let (a, b, c) = (&e[0], &e[1], &e[2]);
    let r = || -> Result<Vec<(&'static str, bool)>> {
        let amb = l.diff(a, b)?;
        Ok(vec![
            ("a = (a−b) ∨ (a∧b)", *a == l.join(&amb, &l.meet(a, b)?)?),
            (
                "(a∨b)−c = (a−c) ∨ (b−c)",
                l.diff(&l.join(a, b)?, c)? == l.join(&l.diff(a, c)?, &l.diff(b, c)?)?,
            ),
            (
                "a−(b∨c) = (a−b)−c",
                l.diff(a, &l.join(b, c)?)? == l.diff(&amb, c)?,
            ),
            (
                "a−(a−b) = (a∧b)−(a−b)",
                l.diff(a, &amb)? == l.diff(&l.meet(a, b)?, &amb)?,
            ),
            ("(a−b)∧b ≪ a", l.strongly_below(&l.meet(&amb, b)?, a)?),
        ])
    };
    for (name, ok) in r().map_err(fail)? {
        ensure(ok, || format!("identity fails: {name}"))?;
    }
    Ok(())
}

fn check_triangle(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let (a, b, c) = (&e[0], &e[1], &e[2]);
    let lhs = l.sym_diff(a, c).map_err(fail)?;
    let rhs = l
        .join(
            &l.sym_diff(a, b).map_err(fail)?,
            &l.sym_diff(b, c).map_err(fail)?,
        )
        .map_err(fail)?;
    ensure(l.leq(&lhs, &rhs).unwrap(), || "a△c ≰ (a△b) ∨ (b△c)".into())
}

fn check_codim_join(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let j = l.join(&e[0], &e[1]).map_err(fail)?;
    ensure(l.codim(&j) == l.codim(&e[0]).min(l.codim(&e[1])), || {
        format!(
            "codim(a∨b) = {} but codims are {} and {}",
            l.codim(&j),
            l.codim(&e[0]),
            l.codim(&e[1])
        )
    })
}

fn check_dim_rank(case: &Case, cfg: &Config) -> Outcome {
    let l = Algebra::new(case.poset.clone());
    let t = Table::new(&l, cfg.caps.max_elements).map_err(fail)?;
    let primes = t.all_by_primes();
    let chains = t.all_by_chains();
    for (i, x) in t.elements.iter().enumerate() {
        let points = (l.codim(x), l.dim(x));
        ensure(points == primes[i] && points == chains[i], || {
            format!(
                "element {}: points {:?}, primes {:?}, chains {:?}",
                l.format(x),
                points,
                primes[i],
                chains[i]
            )
        })?;
    }
    Ok(())
}

fn check_epsilon_chain(case: &Case, cfg: &Config) -> Outcome {
    let l = Algebra::new(case.poset.clone());
    let h = case.poset.height().map_or(0, |h| h + 1);
    ensure(l.epsilon(0) == l.top(), || "ε_0 ≠ 1".into())?;
    let els = l.elements(cfg.caps.max_elements).map_err(fail)?;
    for d in 0..=h + 1 {
        let (e, e1) = (l.epsilon(d), l.epsilon(d + 1));
        ensure(l.strongly_below(&e1, &e).unwrap(), || {
            format!("ε_{} ≪ ε_{d} fails", d + 1)
        })?;
        for a in &els {
            ensure(l.codim(a).at_least(d) == l.leq(a, &e).unwrap(), || {
                format!("codim {} ≥ {d} disagrees with ≤ ε_{d}", l.format(a))
            })?;
        }
    }
    Ok(())
}

fn check_min_primes(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let (a, b) = (&e[0], &e[1]);
    let p = l.spec();
    let lhs = p.maximal_points(l.diff(a, b).unwrap().points());
    let rhs = p.maximal_points(a.points()).difference(b.points());
    ensure(lhs == rhs, || {
        format!(
            "mF(a−b) = {} but mF(a) \\ F(b) = {}",
            p.format_set(&lhs),
            p.format_set(&rhs)
        )
    })
}

fn check_irreducibles(case: &Case, cfg: &Config) -> Outcome {
    let l = Algebra::new(case.poset.clone());
    let t = Table::new(&l, cfg.caps.max_elements).map_err(fail)?;
    let ix = |es: Vec<Element>| -> Vec<usize> {
        let mut v: Vec<usize> = es.iter().map(|e| t.index(e)).collect();
        v.sort();
        v
    };
    ensure(ix(l.join_irreducibles()) == t.join_irreducibles(), || {
        "join irreducibles differ".into()
    })?;
    ensure(ix(l.meet_irreducibles()) == t.meet_irreducibles(), || {
        "meet irreducibles differ".into()
    })?;
    for (i, x) in t.elements.iter().enumerate() {
        let mut js = t.jsupp(i);
        js.sort();
        let mut ms = t.msupp(i);
        ms.sort();
        ensure(ix(l.jsupp(x).unwrap()) == js, || {
            format!("jsupp({}) differs", l.format(x))
        })?;
        ensure(ix(l.msupp(x).unwrap()) == ms, || {
            format!("msupp({}) differs", l.format(x))
        })?;
        ensure(t.index(&l.conj_up(x).unwrap()) == t.conj_up(i), || {
            format!("conj_up({}) differs", l.format(x))
        })?;
        ensure(t.index(&l.conj_down(x).unwrap()) == t.conj_down(i), || {
            format!("conj_down({}) differs", l.format(x))
        })?;
    }
    // Conjugation is a bijection between the two kinds of irreducibles,
    // and coranks in the meet-irreducible order are codimensions.
    let mis = l.meet_irreducibles();
    for j in l.join_irreducibles() {
        let m = l.conj_up(&j).unwrap();
        ensure(mis.contains(&m), || {
            format!("{}^∧ is not meet irreducible", l.format(&j))
        })?;
        ensure(l.conj_down(&m).unwrap() == j, || {
            format!("{}^∧∨ ≠ itself", l.format(&j))
        })?;
    }
    let ranks = longest_above(&mis);
    for (m, r) in mis.iter().zip(ranks) {
        ensure(
            l.codim(&l.conj_down(m).unwrap()) == Codim::Finite(r),
            || {
                format!(
                    "corank of {} is {r} but codim of its conjugate differs",
                    l.format(m)
                )
            },
        )?;
    }
    Ok(())
}

/// Longest strictly increasing chain above each element, under inclusion.
fn longest_above(xs: &[Element]) -> Vec<usize> {
    let n = xs.len();
    let mut len = vec![0; n];
    // Sorted by size, so anything strictly above comes later.
    for i in (0..n).rev() {
        len[i] = (i + 1..n)
            .filter(|&j| xs[i].points().is_subset(xs[j].points()) && xs[i] != xs[j])
            .map(|j| len[j] + 1)
            .max()
            .unwrap_or(0);
    }
    len
}

fn check_quotient_fiber(case: &Case, cfg: &Config) -> Outcome {
    let l = Algebra::new(case.poset.clone());
    let els = l.elements(cfg.caps.max_elements).map_err(fail)?;
    let nji = l.join_irreducibles().len();
    for e in &els {
        let (q, pi) = l.quotient_by(e).map_err(fail)?;
        ensure(pi.kernel().generator() == e, || {
            format!("kernel of /{} differs", l.format(e))
        })?;
        ensure(
            &kernel_generator(&pi, cfg.caps.max_elements).unwrap() == e,
            || format!("scanned kernel of /{} differs", l.format(e)),
        )?;
        ensure(
            q.join_irreducibles().len() + e.points().len() == nji,
            || {
                format!(
                    "join irreducibles of /{} are not those outside",
                    l.format(e)
                )
            },
        )?;
        // Group elements into fibers by image.
        let images: Vec<Element> = els.iter().map(|x| pi.apply(x).unwrap()).collect();
        for (a, ia) in els.iter().zip(&images) {
            let fiber: Vec<&Element> = els
                .iter()
                .zip(&images)
                .filter(|(_, i)| *i == ia)
                .map(|(x, _)| x)
                .collect();
            let lo = fiber
                .iter()
                .find(|x| fiber.iter().all(|y| x.points().is_subset(y.points())));
            let hi = fiber
                .iter()
                .find(|x| fiber.iter().all(|y| y.points().is_subset(x.points())));
            ensure(lo.copied() == Some(&pi.fiber_min(a).unwrap()), || {
                format!("min of fiber of {} in /{}", l.format(a), l.format(e))
            })?;
            ensure(hi.copied() == Some(&pi.fiber_max(a).unwrap()), || {
                format!("max of fiber of {} in /{}", l.format(a), l.format(e))
            })?;
            ensure(pi.lift_min(ia).unwrap() == pi.fiber_min(a).unwrap(), || {
                format!(
                    "least lift of the image of {} in /{}",
                    l.format(a),
                    l.format(e)
                )
            })?;
        }
    }
    Ok(())
}

fn check_slice(case: &Case, cfg: &Config) -> Outcome {
    let l = Algebra::new(case.poset.clone());
    let dim = l.dim_algebra();
    let els = l.elements(cfg.caps.max_elements).map_err(fail)?;
    let exhaustive = els.len() <= 8;
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(cfg.seed, "slice") ^ els.len() as u64);
    for d in 0..=3usize {
        let k = d + 1;
        let t = slice_term(k);
        let eval_at = |xs: &[&Element]| -> Element {
            eval_with(&t, &l, &|v: &str| {
                let i: usize = v[1..].parse().ok()?;
                xs.get(i - 1).map(|e| (*e).clone())
            })
            .unwrap()
        };
        let low = match dim {
            Dim::NegInfinite => true,
            Dim::Finite(m) => m <= d,
        };
        let vanishes = if exhaustive {
            let mut idx = vec![0usize; k];
            let mut all_zero = true;
            'tuples: loop {
                let xs: Vec<&Element> = idx.iter().map(|&i| &els[i]).collect();
                if !eval_at(&xs).is_bottom() {
                    all_zero = false;
                    break;
                }
                for j in (0..k).rev() {
                    idx[j] += 1;
                    if idx[j] < els.len() {
                        continue 'tuples;
                    }
                    idx[j] = 0;
                }
                break;
            }
            all_zero
        } else {
            // A chain p_0 < … < p_m under a point of top rank gives the
            // witness x_i = p_{m−i}↓ with P_m = p_0↓; otherwise sample.
            let witness = match dim {
                Dim::Finite(m) if m >= k => {
                    let chain = top_chain(&case.poset);
                    let xs: Vec<Element> = (1..=k).map(|i| l.principal(chain[k - i])).collect();
                    let refs: Vec<&Element> = xs.iter().collect();
                    !eval_at(&refs).is_bottom()
                }
                _ => false,
            };
            let sampled = (0..64).any(|_| {
                let xs: Vec<&Element> = (0..k).map(|_| &els[rng.gen_range(0..els.len())]).collect();
                !eval_at(&xs).is_bottom()
            });
            !(witness || sampled)
        };
        ensure(low == vanishes, || {
            format!(
                "dim = {dim} but P_{k} {} on all tuples",
                if vanishes {
                    "vanishes"
                } else {
                    "does not vanish"
                }
            )
        })?;
    }
    Ok(())
}

/// A maximal chain ending at a point of maximal rank, bottom first.
fn top_chain(p: &Poset) -> Vec<usize> {
    let mut x = p.points().max_by_key(|&x| p.rank(x)).unwrap();
    let mut chain = vec![x];
    while p.rank(x) > 0 {
        x = *p
            .lower_covers(x)
            .iter()
            .find(|&&y| p.rank(y) + 1 == p.rank(x))
            .unwrap();
        chain.push(x);
    }
    chain.reverse();
    chain
}

fn check_ultrametric(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let d = |x: &Element, y: &Element| distance(&l, x, y).unwrap();
    let (a, b, c) = (&e[0], &e[1], &e[2]);
    ensure(d(a, c) <= d(a, b).max(d(b, c)), || {
        "ultrametric inequality fails".into()
    })?;
    ensure(d(a, b) == d(b, a), || "distance is not symmetric".into())?;
    ensure(
        (d(a, b) == crate::metric::Distance::Zero) == (a == b),
        || "distance 0 iff equal fails".into(),
    )
}

fn check_morphism_metric(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let (_, pi) = l.quotient_by(&e[0]).map_err(fail)?;
    let (a, b) = (&e[1], &e[2]);
    let q = pi.dst();
    let before = distance(&l, a, b).unwrap();
    let after = distance(q, &pi.apply(a).unwrap(), &pi.apply(b).unwrap()).unwrap();
    ensure(after <= before, || {
        format!("distance grows from {before} to {after}")
    })?;
    let h = case.poset.height().map_or(0, |h| h + 1);
    for d in 0..=h + 1 {
        let r = pi.check_dl_preserved(d);
        ensure(r.ok(), || format!("ε_{d} not preserved"))?;
    }
    Ok(())
}

fn lookup2<'a>(names: &'a [String], xs: &'a [Element]) -> impl Fn(&str) -> Option<Element> + 'a {
    move |v: &str| names.iter().position(|n| n == v).map(|i| xs[i].clone())
}

fn check_term_lipschitz(case: &Case, _: &Config) -> Outcome {
    let (l, e) = setup(case)?;
    let t = case.term.as_ref().ok_or("case has no term")?;
    let names = var_names(2);
    let (xa, xb) = (&e[0..2], &e[2..4]);
    let ta = eval_with(t, &l, &lookup2(&names, xa)).map_err(fail)?;
    let tb = eval_with(t, &l, &lookup2(&names, xb)).map_err(fail)?;
    let d = |x: &Element, y: &Element| distance(&l, x, y).unwrap();
    let bound = d(&xa[0], &xb[0]).max(d(&xa[1], &xb[1]));
    ensure(d(&ta, &tb) <= bound, || {
        format!("dist(t(a), t(b)) = {} > {bound}", d(&ta, &tb))
    })?;
    // Evaluation commutes with the quotient by the third element.
    let (q, pi) = l.quotient_by(&e[2]).map_err(fail)?;
    let img: Vec<Element> = xa.iter().map(|x| pi.apply(x).unwrap()).collect();
    let tq = eval_with(t, &q, &lookup2(&names, &img)).map_err(fail)?;
    ensure(pi.apply(&ta).unwrap() == tq, || {
        "evaluation does not commute with the quotient".into()
    })
}

fn check_duality(case: &Case, _: &Config) -> Outcome {
    let (l, gens) = setup(case)?;
    let t = case.term.as_ref().ok_or("case has no term")?;
    let u = model_of_algebra(&l, &gens).map_err(fail)?;
    let forced = u.truth_set(&dualize(t)).map_err(fail)?;
    let value = eval_with(t, &l, &lookup2(&var_names(gens.len()), &gens)).map_err(fail)?;
    ensure(forced == value.points().complement(), || {
        format!(
            "truth set {} is not the complement of {}",
            l.spec().format_set(&forced),
            l.format(&value)
        )
    })
}

fn check_bisim_truth(case: &Case, _: &Config) -> Outcome {
    let (l, gens) = setup(case)?;
    let t = case.term.as_ref().ok_or("case has no term")?;
    let u = model_of_algebra(&l, &gens).map_err(fail)?;
    let (r, map) = u.bisim_reduce();
    ensure(r.is_reduced(), || "reduction is not reduced".into())?;
    let full = u.truth_set(t).map_err(fail)?;
    let small = r.truth_set(t).map_err(fail)?;
    let pulled = PointSet::from_indices(
        u.len(),
        u.frame().points().filter(|&p| small.contains(map[p])),
    );
    ensure(full == pulled, || {
        "truth sets differ after reduction".into()
    })?;
    ensure(u.validates(t).unwrap() == r.validates(t).unwrap(), || {
        "global truth differs".into()
    })
}

fn check_universal_census(case: &Case, cfg: &Config) -> Outcome {
    let (n, d) = (case.params[0], case.params[1]);
    let uf = universal_frame(n, d, &cfg.caps).map_err(fail)?;
    let census = uf.census();
    ensure(census.first() == Some(&(1 << n)), || {
        format!("layer 1 has {:?} points", census.first())
    })?;
    ensure(uf.model.is_reduced(), || {
        "universal frame is not reduced".into()
    })?;
    for (k, layer) in uf.layers.iter().enumerate() {
        for &p in layer {
            ensure(uf.model.frame().rank(p) == k, || {
                format!("point {p} has the wrong rank")
            })?;
        }
    }
    // ν_k: reduced models with at most k layers.
    let mut nu = vec![0usize];
    for k in 1..d {
        let count = enumerate_reduced_models(n, k, usize::MAX, &cfg.caps)
            .map_err(fail)?
            .len();
        nu.push(count);
    }
    for k in 1..census.len() {
        ensure(census[k] <= (1 << n) * nu[k], || {
            format!("layer {} has {} > 2^{n}·{} points", k + 1, census[k], nu[k])
        })?;
    }
    // Every reduced model of depth ≤ d obeys the same per-rank bounds.
    for m in enumerate_reduced_models(n, d, 1 + (1 << n), &cfg.caps).map_err(fail)? {
        let f = m.frame();
        for k in 0..d {
            let at_rank = f.points().filter(|&p| f.rank(p) == k).count();
            let bound = if k == 0 { 1 << n } else { (1 << n) * nu[k] };
            ensure(at_rank <= bound, || {
                format!("model with {at_rank} points of rank {k}")
            })?;
        }
    }
    let fq = free_quotient(n, d, &cfg.caps).map_err(fail)?;
    let by_downsets = fq.algebra.size();
    // Closing the generators is quadratic in the size; only small ones.
    if by_downsets > 4096 {
        return Ok(());
    }
    let by_closure = fq
        .algebra
        .subalgebra_generated(&fq.gens, cfg.caps.max_elements)
        .map_err(fail)?
        .len() as u128;
    ensure(by_downsets == by_closure, || {
        format!("|F({n},{d})|: {by_downsets} downsets but generators give {by_closure}")
    })
}

fn check_tower(case: &Case, cfg: &Config) -> Outcome {
    let (n, depth) = (case.params[0], case.params[1]);
    let t = make_tower(&TowerSource::Free(n), depth, &cfg.caps).map_err(fail)?;
    for d in 0..depth {
        let pi = t.map(d);
        ensure(pi.is_surjective(), || format!("π_{d} is not onto"))?;
        ensure(
            pi.kernel().generator() == &t.level(d + 1).epsilon(d),
            || format!("kernel of π_{d} is not ε_{d}"),
        )?;
        for e in 0..=depth + 1 {
            ensure(pi.check_dl_preserved(e).ok(), || {
                format!("π_{d} does not preserve ε_{e}")
            })?;
        }
    }
    for d in 0..=depth {
        let ok = match t.level(d).dim_algebra() {
            Dim::NegInfinite => true,
            Dim::Finite(k) => k < d,
        };
        ensure(ok, || format!("dim A_{d} ≥ {d}"))?;
    }
    for e in 0..=depth {
        let fam = t.epsilon_family(e);
        for k in 0..=depth {
            ensure(fam.component(k) == &t.level(k).epsilon(e), || {
                format!("lift of ε_{e} differs from ε_{e} at level {k}")
            })?;
        }
    }
    let top = t.top();
    for d in 0..=depth {
        let (q, _) = top.quotient_by(&top.epsilon(d)).map_err(fail)?;
        let same = canonical_form(q.spec(), &vec![(); q.spec().len()], &cfg.caps).map_err(fail)?
            == canonical_form(
                t.level(d).spec(),
                &vec![(); t.level(d).spec().len()],
                &cfg.caps,
            )
            .map_err(fail)?;
        ensure(same, || format!("A_{d} differs from A_D/ε_{d}"))?;
    }
    if let Some(fqs) = t.free_levels() {
        for g in &fqs[depth].gens {
            let fam = t.lift(g).map_err(fail)?;
            for d in 0..=depth {
                let i = fqs[depth].gens.iter().position(|x| x == g).unwrap();
                ensure(fam.component(d) == &fqs[d].gens[i], || {
                    format!("generator lift differs at {d}")
                })?;
            }
        }
    }
    Ok(())
}

fn check_canonical(case: &Case, cfg: &Config) -> Outcome {
    let p = &case.poset;
    let n = p.len();
    let mut rng = ChaCha8Rng::seed_from_u64(suite_seed(cfg.seed, "canonical-form") ^ n as u64);
    let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let code = canonical_form(p, &labels, &cfg.caps).map_err(fail)?;
    for _ in 0..3 {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let pairs: Vec<_> = p
            .covers()
            .into_iter()
            .map(|(a, b)| (perm[a], perm[b]))
            .collect();
        let q = Poset::with_default_names(n, &pairs).map_err(fail)?;
        let mut qlabels = vec![0u8; n];
        for x in 0..n {
            qlabels[perm[x]] = labels[x];
        }
        let qcode = canonical_form(&q, &qlabels, &cfg.caps).map_err(fail)?;
        ensure(code == qcode, || {
            format!("relabelling {perm:?} changes the code")
        })?;
    }
    Ok(())
}

/// Distinct point counts seen across all random cases of a suite; used to
/// confirm coverage.
pub fn case_sizes(cases: &[Case]) -> BTreeSet<usize> {
    cases.iter().map(|c| c.poset.len()).collect()
}
