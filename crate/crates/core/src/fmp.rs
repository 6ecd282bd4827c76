//! Finite model search for quantifier-free formulas: walk the finite
//! co-Heyting algebras `O(P)` by size of `P` and try assignments.

use crate::algebra::{Algebra, Element};
use crate::caps::Caps;
use crate::error::Result;
use crate::poset::text::write;
use crate::poset::{enumerate_posets, Poset};
use crate::terms::{eval_formula, Env, Formula};

#[derive(Debug, Clone)]
pub struct Witness {
    pub algebra: Algebra,
    pub assignment: Vec<(String, Element)>,
}

impl Witness {
    pub fn poset(&self) -> &Poset {
        self.algebra.spec()
    }

    pub fn env(&self) -> Env {
        self.assignment.iter().cloned().collect()
    }

    /// The spectral poset in file format, with the assignment in trailing
    /// comments, e.g. `# x = {p0}`.
    pub fn certificate(&self) -> String {
        let mut out = write(self.poset(), None, None);
        for (v, e) in &self.assignment {
            out.push_str(&format!("# {v} = {}\n", self.algebra.format(e)));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Found(Witness),
    /// No witness on any poset of at most `max_points` points.
    /// `truncated` is set when some algebra had more assignments than the
    /// cap allowed, so the search was not exhaustive.
    NoneUpToCap {
        max_points: usize,
        assignments: usize,
        truncated: bool,
    },
}

/// Searches posets of `1..=max_points` points in enumeration order and,
/// per algebra, up to `max_assignments` assignments in element order. The
/// one-element algebra is skipped, as it satisfies every equation.
pub fn fmp_search(
    theta: &Formula,
    max_points: usize,
    max_assignments: usize,
    caps: &Caps,
) -> Result<Outcome> {
    let vars: Vec<String> = theta.vars().iter().map(|v| v.to_string()).collect();
    let mut tried = 0;
    let mut truncated = false;
    for n in 1..=max_points {
        for p in enumerate_posets(n, caps)? {
            let alg = Algebra::new(p);
            let els = alg.elements(caps.max_elements)?;
            let mut idx = vec![0usize; vars.len()];
            let mut local = 0;
            loop {
                if local == max_assignments {
                    truncated = true;
                    break;
                }
                local += 1;
                tried += 1;
                let env: Env = vars
                    .iter()
                    .zip(&idx)
                    .map(|(v, &i)| (v.clone(), els[i].clone()))
                    .collect();
                if eval_formula(theta, &alg, &env)? {
                    let assignment = vars
                        .iter()
                        .cloned()
                        .zip(idx.iter().map(|&i| els[i].clone()))
                        .collect();
                    return Ok(Outcome::Found(Witness {
                        algebra: alg,
                        assignment,
                    }));
                }
                // Odometer, last variable fastest.
                let mut done = true;
                for k in (0..vars.len()).rev() {
                    idx[k] += 1;
                    if idx[k] < els.len() {
                        done = false;
                        break;
                    }
                    idx[k] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    Ok(Outcome::NoneUpToCap {
        max_points,
        assignments: tried,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::parse_formula;

    #[test]
    fn finds_two_chain_for_positive_dimension() {
        let theta = parse_formula("x & (1\\x) != 0").unwrap();
        match fmp_search(&theta, 3, 100, &Caps::default()).unwrap() {
            Outcome::Found(w) => {
                assert_eq!(w.poset().len(), 2);
                assert_eq!(w.poset().covers(), vec![(0, 1)]);
                assert_eq!(w.algebra.format(&w.assignment[0].1), "{p0}");
                assert!(eval_formula(&theta, &w.algebra, &w.env()).unwrap());
                assert!(w.certificate().ends_with("# x = {p0}\n"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unsatisfiable_formulas_have_no_witness() {
        for (text, pts, cap) in [("x \\ x != 0", 5, 1000), ("1 = 0", 5, 10)] {
            let theta = parse_formula(text).unwrap();
            match fmp_search(&theta, pts, cap, &Caps::default()).unwrap() {
                Outcome::NoneUpToCap { truncated, .. } => assert!(!truncated, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn two_variables() {
        let theta = parse_formula("x & y != 0 && x \\ y != 0 && y \\ x != 0").unwrap();
        match fmp_search(&theta, 3, 1000, &Caps::default()).unwrap() {
            Outcome::Found(w) => assert!(eval_formula(&theta, &w.algebra, &w.env()).unwrap()),
            other => panic!("{other:?}"),
        }
    }
}
