use std::collections::BTreeMap;

use super::{canonical_form, Poset};
use crate::caps::Caps;
use crate::error::{Error, Result};

/// One representative per isomorphism class of posets with exactly `n`
/// points, ordered by canonical code.
///
/// Every poset arises from a smaller one by adding a maximal point above
/// some downset, so the classes of size `n` are generated from those of
/// size `n - 1` and deduplicated by canonical form.
pub fn enumerate_posets(n: usize, caps: &Caps) -> Result<Vec<Poset>> {
    if n > caps.max_points {
        return Err(Error::cap("poset enumeration size", caps.max_points));
    }
    let mut layer = vec![Poset::antichain(0)];
    for k in 1..=n {
        layer = extend_all(&layer, k, caps)?;
    }
    Ok(layer)
}

/// All isomorphism classes with `1..=max_points` points, smallest first.
pub fn enumerate_posets_up_to(max_points: usize, caps: &Caps) -> Result<Vec<Poset>> {
    if max_points > caps.max_points {
        return Err(Error::cap("poset enumeration size", caps.max_points));
    }
    let mut out = Vec::new();
    let mut layer = vec![Poset::antichain(0)];
    for k in 1..=max_points {
        layer = extend_all(&layer, k, caps)?;
        out.extend(layer.iter().cloned());
    }
    Ok(out)
}

fn extend_all(smaller: &[Poset], k: usize, caps: &Caps) -> Result<Vec<Poset>> {
    let labels = vec![(); k];
    let mut classes = BTreeMap::new();
    for base in smaller {
        for below in base.downsets(caps.max_elements)? {
            let top = k - 1;
            let mut pairs = base.covers();
            pairs.extend(base.maximal_points(&below).iter().map(|x| (x, top)));
            let p = Poset::with_default_names(k, &pairs)?;
            let code = canonical_form(&p, &labels, caps)?;
            classes.entry(code).or_insert(p);
        }
    }
    Ok(classes.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::automorphism_count;

    /// Labelled posets on `n` points, counted by brute force over all
    /// strict relations.
    fn labelled_posets(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let mut count = 0;
        for mask in 0u32..(1 << pairs.len()) {
            let rel = |i: usize, j: usize| {
                pairs
                    .iter()
                    .position(|&p| p == (i, j))
                    .is_some_and(|k| mask >> k & 1 == 1)
            };
            let antisym = pairs.iter().all(|&(i, j)| !(rel(i, j) && rel(j, i)));
            let trans = (0..n).all(|i| {
                (0..n).all(|j| (0..n).all(|k| !(rel(i, j) && rel(j, k)) || i == k || rel(i, k)))
            });
            if antisym && trans {
                count += 1;
            }
        }
        count
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn class_counts() {
        let caps = Caps::default();
        let counts: Vec<usize> = (0..=5)
            .map(|n| enumerate_posets(n, &caps).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn orbit_sum_matches_labelled_count() {
        let caps = Caps::default();
        for n in 1..=4 {
            let orbit_sum: usize = enumerate_posets(n, &caps)
                .unwrap()
                .iter()
                .map(|p| factorial(n) / automorphism_count(p, &vec![(); n]))
                .sum();
            assert_eq!(orbit_sum, labelled_posets(n), "n = {n}");
        }
    }

    #[test]
    fn size_cap() {
        let caps = Caps::default();
        assert!(enumerate_posets(8, &caps).unwrap_err().is_cap());
    }
}
