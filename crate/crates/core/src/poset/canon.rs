//! Canonical labelling of labelled posets by colour refinement plus
//! individualization search.

use std::collections::BTreeMap;

use super::Poset;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// Isomorphism-invariant code of a labelled poset. Two labelled posets get
/// equal codes exactly when some label-preserving order isomorphism
/// relates them.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode<L> {
    size: usize,
    labels: Vec<L>,
    /// Row-major `leq` matrix in canonical point order.
    relation: Vec<u64>,
}

impl<L> CanonicalCode<L> {
    pub fn size(&self) -> usize {
        self.size
    }
}

struct Search<'a, L> {
    poset: &'a Poset,
    labels: &'a [L],
    strict_down: Vec<PointSet>,
    strict_up: Vec<PointSet>,
    best: Option<CanonicalCode<L>>,
    leaves: usize,
    max_leaves: usize,
}

pub fn canonical_form<L: Ord + Clone>(
    poset: &Poset,
    labels: &[L],
    caps: &Caps,
) -> Result<CanonicalCode<L>> {
    assert_eq!(labels.len(), poset.len(), "one label per point");
    if poset.len() > caps.max_canon_points {
        return Err(Error::cap("canonical form input", caps.max_canon_points));
    }
    let n = poset.len();
    let strict_down = (0..n)
        .map(|x| {
            let mut s = poset.principal_down(x).clone();
            s.remove(x);
            s
        })
        .collect();
    let strict_up = (0..n)
        .map(|x| {
            let mut s = poset.principal_up(x).clone();
            s.remove(x);
            s
        })
        .collect();
    let mut search = Search {
        poset,
        labels,
        strict_down,
        strict_up,
        best: None,
        leaves: 0,
        max_leaves: caps.max_canon_leaves,
    };
    let initial = rank_keys(&labels.iter().collect::<Vec<_>>());
    search.descend(initial)?;
    Ok(search.best.expect("at least one leaf"))
}

/// Maps each key to the rank of its value among the distinct values.
fn rank_keys<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).unwrap())
        .collect()
}

fn class_count(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

impl<L: Ord + Clone> Search<'_, L> {
    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..colors.len())
                .map(|v| {
                    let mut below: Vec<usize> =
                        self.strict_down[v].iter().map(|u| colors[u]).collect();
                    let mut above: Vec<usize> =
                        self.strict_up[v].iter().map(|u| colors[u]).collect();
                    below.sort_unstable();
                    above.sort_unstable();
                    (colors[v], below, above)
                })
                .collect();
            let next = rank_keys(&sigs);
            if class_count(&next) == class_count(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn descend(&mut self, colors: Vec<usize>) -> Result<()> {
        let colors = self.refine(colors);
        let n = colors.len();
        if class_count(&colors) == n {
            return self.leaf(&colors);
        }
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            cells.entry(c).or_default().push(v);
        }
        let target = cells.into_values().find(|c| c.len() > 1).unwrap();

        // Twins (same strict up- and downsets) are swapped by an automorphism
        // of the current coloured structure, so one branch per twin class.
        let mut reps: Vec<usize> = Vec::new();
        for &v in &target {
            let twin = reps.iter().any(|&r| {
                self.strict_down[r] == self.strict_down[v] && self.strict_up[r] == self.strict_up[v]
            });
            if !twin {
                reps.push(v);
            }
        }
        for v in reps {
            let keys: Vec<(usize, bool)> = (0..n).map(|w| (colors[w], w != v)).collect();
            self.descend(rank_keys(&keys))?;
        }
        Ok(())
    }

    fn leaf(&mut self, colors: &[usize]) -> Result<()> {
        self.leaves += 1;
        if self.leaves > self.max_leaves {
            return Err(Error::cap("canonical labelling search", self.max_leaves));
        }
        let n = colors.len();
        let mut order = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let labels: Vec<L> = order.iter().map(|&v| self.labels[v].clone()).collect();
        let mut relation = vec![0u64; (n * n).div_ceil(64)];
        for (i, &x) in order.iter().enumerate() {
            for (j, &y) in order.iter().enumerate() {
                if self.poset.leq(x, y) {
                    let bit = i * n + j;
                    relation[bit / 64] |= 1 << (bit % 64);
                }
            }
        }
        let code = CanonicalCode {
            size: n,
            labels,
            relation,
        };
        if self.best.as_ref().is_none_or(|b| code < *b) {
            self.best = Some(code);
        }
        Ok(())
    }
}

/// Number of label-preserving automorphisms, by brute force over all
/// permutations. Only meant for tiny posets (test oracles).
pub fn automorphism_count<L: PartialEq>(poset: &Poset, labels: &[L]) -> usize {
    fn go<L: PartialEq>(
        p: &Poset,
        labels: &[L],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> usize {
        let k = perm.len();
        if k == p.len() {
            return 1;
        }
        let mut total = 0;
        for y in 0..p.len() {
            if used[y] || labels[y] != labels[k] {
                continue;
            }
            let ok = (0..k)
                .all(|x| p.leq(x, k) == p.leq(perm[x], y) && p.leq(k, x) == p.leq(y, perm[x]));
            if ok {
                used[y] = true;
                perm.push(y);
                total += go(p, labels, perm, used);
                perm.pop();
                used[y] = false;
            }
        }
        total
    }
    go(
        poset,
        labels,
        &mut Vec::new(),
        &mut vec![false; poset.len()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn relabel(p: &Poset, perm: &[usize]) -> Poset {
        let pairs: Vec<_> = p
            .covers()
            .into_iter()
            .map(|(l, h)| (perm[l], perm[h]))
            .collect();
        Poset::with_default_names(p.len(), &pairs).unwrap()
    }

    #[test]
    fn swapped_antichain_has_same_code() {
        let caps = Caps::default();
        let a = Poset::antichain(2);
        let b = relabel(&a, &[1, 0]);
        assert_eq!(
            canonical_form(&a, &[(), ()], &caps).unwrap(),
            canonical_form(&b, &[(), ()], &caps).unwrap()
        );
    }

    #[test]
    fn chain_and_antichain_differ() {
        let caps = Caps::default();
        assert_ne!(
            canonical_form(&Poset::chain(2), &[(), ()], &caps).unwrap(),
            canonical_form(&Poset::antichain(2), &[(), ()], &caps).unwrap()
        );
    }

    #[test]
    fn labels_matter() {
        let caps = Caps::default();
        let p = Poset::chain(2);
        assert_ne!(
            canonical_form(&p, &[0, 1], &caps).unwrap(),
            canonical_form(&p, &[1, 0], &caps).unwrap()
        );
    }

    #[test]
    fn large_symmetric_antichain_is_cheap() {
        let caps = Caps::default();
        let p = Poset::antichain(40);
        let labels = vec![0u8; 40];
        assert!(canonical_form(&p, &labels, &caps).is_ok());
    }

    #[test]
    fn automorphisms_of_small_posets() {
        assert_eq!(automorphism_count(&Poset::antichain(3), &[(), (), ()]), 6);
        assert_eq!(automorphism_count(&Poset::chain(3), &[(), (), ()]), 1);
    }
}
