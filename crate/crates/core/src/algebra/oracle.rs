//! Reference implementations that only use the lattice structure of the
//! element list: no points, ranks or closures. They are slow (cubic in the
//! number of elements) and exist to check the point-based code.

use super::{Algebra, Codim, Dim, Element, Morphism};
use crate::error::Result;

/// The algebra's elements plus the lattice operations read off by index.
pub struct Table {
    pub elements: Vec<Element>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
}

impl Table {
    pub fn new(a: &Algebra, cap: usize) -> Result<Table> {
        let elements = a.elements(cap)?;
        let n = elements.len();
        let pos = |e: &Element| elements.binary_search(e).expect("closed under join");
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                join[i][j] = pos(&a.join(&elements[i], &elements[j])?);
                meet[i][j] = pos(&a.meet(&elements[i], &elements[j])?);
                leq[i][j] = elements[i].points().is_subset(elements[j].points());
            }
        }
        Ok(Table {
            elements,
            join,
            meet,
            leq,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index(&self, e: &Element) -> usize {
        self.elements
            .binary_search(e)
            .expect("element of this table")
    }

    fn bottom(&self) -> usize {
        0
    }

    /// `a − b` as the least `c` with `a ≤ b ∨ c`.
    pub fn diff(&self, a: usize, b: usize) -> usize {
        let candidates: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq[a][self.join[b][c]])
            .collect();
        *candidates
            .iter()
            .find(|&&c| candidates.iter().all(|&d| self.leq[c][d]))
            .expect("difference exists in a finite distributive lattice")
    }

    /// `b ≪ a`: `b ≤ a` and every `c` with `a ≤ b ∨ c` is above `a`.
    pub fn strongly_below(&self, b: usize, a: usize) -> bool {
        self.leq[b][a] && (0..self.len()).all(|c| !self.leq[a][self.join[b][c]] || self.leq[a][c])
    }

    /// Join-prime elements: `j ≠ 0` and `j ≤ a ∨ b` implies `j ≤ a` or `j ≤ b`.
    pub fn join_primes(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                j != self.bottom()
                    && (0..self.len()).all(|a| {
                        (0..self.len()).all(|b| {
                            !self.leq[j][self.join[a][b]] || self.leq[j][a] || self.leq[j][b]
                        })
                    })
            })
            .collect()
    }

    /// Join-irreducible elements: not `0` and not a join of two strictly
    /// smaller elements.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| {
                j != self.bottom()
                    && !(0..self.len())
                        .any(|a| (0..self.len()).any(|b| a != j && b != j && self.join[a][b] == j))
            })
            .collect()
    }

    /// Meet-irreducible elements: not `1` and not a meet of two strictly
    /// larger elements.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        let top = self.len() - 1;
        (0..self.len())
            .filter(|&m| {
                m != top
                    && !(0..self.len()).any(|a| {
                        (0..self.len()).any(|b| {
                            a != m
                                && b != m
                                && self.leq[m][a]
                                && self.leq[m][b]
                                && self.meet(a, b) == m
                        })
                    })
            })
            .collect()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    /// Prime filters are the principal filters `j↑` of join primes. Returns,
    /// per join prime, its height in the spectrum ordered by inclusion
    /// (longest chain of prime filters strictly below) and its coheight.
    fn spectrum_heights(&self) -> Vec<(usize, usize, usize)> {
        let primes = self.join_primes();
        let filter = |j: usize| -> Vec<bool> { (0..self.len()).map(|a| self.leq[j][a]).collect() };
        let filters: Vec<Vec<bool>> = primes.iter().map(|&j| filter(j)).collect();
        let strictly_inside =
            |f: &Vec<bool>, g: &Vec<bool>| f != g && f.iter().zip(g).all(|(&x, &y)| !x || y);
        let k = primes.len();
        // Longest chains via memoized recursion on the inclusion order.
        fn longest(
            i: usize,
            k: usize,
            rel: &dyn Fn(usize, usize) -> bool,
            memo: &mut Vec<Option<usize>>,
        ) -> usize {
            if let Some(v) = memo[i] {
                return v;
            }
            let v = (0..k)
                .filter(|&j| rel(j, i))
                .map(|j| longest(j, k, rel, memo) + 1)
                .max()
                .unwrap_or(0);
            memo[i] = Some(v);
            v
        }
        let below = |j: usize, i: usize| strictly_inside(&filters[j], &filters[i]);
        let above = |j: usize, i: usize| strictly_inside(&filters[i], &filters[j]);
        let mut m1 = vec![None; k];
        let mut m2 = vec![None; k];
        (0..k)
            .map(|i| {
                (
                    primes[i],
                    longest(i, k, &below, &mut m1),
                    longest(i, k, &above, &mut m2),
                )
            })
            .collect()
    }

    /// `codim a`: least height of a prime filter containing `a`.
    pub fn codim_by_primes(&self, a: usize) -> Codim {
        self.spectrum_heights()
            .into_iter()
            .filter(|&(j, _, _)| self.leq[j][a])
            .map(|(_, h, _)| h)
            .min()
            .map_or(Codim::Infinite, Codim::Finite)
    }

    /// `dim a`: largest coheight of a prime filter containing `a`.
    pub fn dim_by_primes(&self, a: usize) -> Dim {
        self.spectrum_heights()
            .into_iter()
            .filter(|&(j, _, _)| self.leq[j][a])
            .map(|(_, _, h)| h)
            .max()
            .map_or(Dim::NegInfinite, Dim::Finite)
    }

    /// Per nonzero element, the longest `≪`-chain of nonzero elements
    /// starting there and going up (`up = true`) or down.
    fn strong_chain_lengths(&self, up: bool) -> Vec<usize> {
        let n = self.len();
        let sb: Vec<Vec<bool>> = (0..n)
            .map(|b| (0..n).map(|a| self.strongly_below(b, a)).collect())
            .collect();
        // Nonzero ≪ is strict and elements are sorted by size, so a strict
        // step always changes size; process in size order.
        let mut len = vec![0usize; n];
        let order: Vec<usize> = if up {
            (1..n).rev().collect()
        } else {
            (1..n).collect()
        };
        for &x in &order {
            len[x] = (1..n)
                .filter(|&y| y != x && if up { sb[x][y] } else { sb[y][x] })
                .map(|y| len[y] + 1)
                .max()
                .unwrap_or(0);
        }
        len
    }

    /// `codim a ≥ d` iff `a ≤ x_d ≪ … ≪ x_0`; the largest such `d`.
    pub fn codim_by_chains(&self, a: usize) -> Codim {
        if a == self.bottom() {
            return Codim::Infinite;
        }
        let len = self.strong_chain_lengths(true);
        Codim::Finite(
            (1..self.len())
                .filter(|&x| self.leq[a][x])
                .map(|x| len[x])
                .max()
                .unwrap(),
        )
    }

    /// `dim a ≥ d` iff `0 ≠ x_d ≪ … ≪ x_0 ≤ a`; the largest such `d`.
    pub fn dim_by_chains(&self, a: usize) -> Dim {
        if a == self.bottom() {
            return Dim::NegInfinite;
        }
        let len = self.strong_chain_lengths(false);
        Dim::Finite(
            (1..self.len())
                .filter(|&x| self.leq[x][a])
                .map(|x| len[x])
                .max()
                .unwrap(),
        )
    }

    /// `(codim, dim)` of every element from prime filter heights.
    pub fn all_by_primes(&self) -> Vec<(Codim, Dim)> {
        let heights = self.spectrum_heights();
        (0..self.len())
            .map(|a| {
                let inside = heights.iter().filter(|&&(j, _, _)| self.leq[j][a]);
                let codim = inside
                    .clone()
                    .map(|&(_, h, _)| h)
                    .min()
                    .map_or(Codim::Infinite, Codim::Finite);
                let dim = inside
                    .map(|&(_, _, h)| h)
                    .max()
                    .map_or(Dim::NegInfinite, Dim::Finite);
                (codim, dim)
            })
            .collect()
    }

    /// `(codim, dim)` of every element from `≪`-chains.
    pub fn all_by_chains(&self) -> Vec<(Codim, Dim)> {
        let up = self.strong_chain_lengths(true);
        let down = self.strong_chain_lengths(false);
        (0..self.len())
            .map(|a| {
                if a == self.bottom() {
                    return (Codim::Infinite, Dim::NegInfinite);
                }
                let codim = (1..self.len())
                    .filter(|&x| self.leq[a][x])
                    .map(|x| up[x])
                    .max();
                let dim = (1..self.len())
                    .filter(|&x| self.leq[x][a])
                    .map(|x| down[x])
                    .max();
                (Codim::Finite(codim.unwrap()), Dim::Finite(dim.unwrap()))
            })
            .collect()
    }

    /// `x^∧ = ⋁{y | x ≰ y}`.
    pub fn conj_up(&self, x: usize) -> usize {
        (0..self.len())
            .filter(|&y| !self.leq[x][y])
            .fold(self.bottom(), |acc, y| self.join[acc][y])
    }

    /// `x^∨ = ⋀{y | y ≰ x}`.
    pub fn conj_down(&self, x: usize) -> usize {
        (0..self.len())
            .filter(|&y| !self.leq[y][x])
            .fold(self.len() - 1, |acc, y| self.meet(acc, y))
    }

    /// Maximal join irreducibles below `a`.
    pub fn jsupp(&self, a: usize) -> Vec<usize> {
        let below: Vec<usize> = self
            .join_irreducibles()
            .into_iter()
            .filter(|&j| self.leq[j][a])
            .collect();
        below
            .iter()
            .copied()
            .filter(|&j| !below.iter().any(|&k| k != j && self.leq[j][k]))
            .collect()
    }

    /// Minimal meet irreducibles above `a`.
    pub fn msupp(&self, a: usize) -> Vec<usize> {
        let above: Vec<usize> = self
            .meet_irreducibles()
            .into_iter()
            .filter(|&m| self.leq[a][m])
            .collect();
        above
            .iter()
            .copied()
            .filter(|&m| !above.iter().any(|&k| k != m && self.leq[k][m]))
            .collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }
}

/// Least and greatest source elements with the same image as `a`, by
/// scanning the whole source.
pub fn fiber_bounds(phi: &Morphism, a: &Element, cap: usize) -> Result<(Element, Element)> {
    let target = phi.apply(a)?;
    let mut fiber = Vec::new();
    for x in phi.src().elements(cap)? {
        if phi.apply(&x)? == target {
            fiber.push(x);
        }
    }
    let least = fiber
        .iter()
        .find(|x| fiber.iter().all(|y| x.points().is_subset(y.points())))
        .cloned()
        .expect("fibers of a quotient have a least element");
    let greatest = fiber
        .iter()
        .find(|x| fiber.iter().all(|y| y.points().is_subset(x.points())))
        .cloned()
        .expect("fibers of a quotient have a greatest element");
    Ok((least, greatest))
}

/// `φ⁻¹(0)` by scanning; its largest member generates the kernel.
pub fn kernel_generator(phi: &Morphism, cap: usize) -> Result<Element> {
    let mut best = phi.src().bottom();
    for x in phi.src().elements(cap)? {
        if phi.apply(&x)?.is_bottom() {
            best = phi.src().join(&best, &x)?;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poset::enumerate_posets_up_to;
    use crate::Caps;

    const CAP: usize = 1 << 12;

    #[test]
    fn agrees_with_point_computations_on_small_posets() {
        let caps = Caps::default();
        for p in enumerate_posets_up_to(4, &caps).unwrap() {
            let a = Algebra::new(p);
            let t = Table::new(&a, CAP).unwrap();
            let primes = t.all_by_primes();
            let chains = t.all_by_chains();
            for (i, x) in t.elements.iter().enumerate() {
                assert_eq!((a.codim(x), a.dim(x)), primes[i]);
                assert_eq!((a.codim(x), a.dim(x)), chains[i]);
                assert_eq!(a.codim(x), t.codim_by_primes(i));
                assert_eq!(a.codim(x), t.codim_by_chains(i));
                assert_eq!(a.dim(x), t.dim_by_primes(i));
                assert_eq!(a.dim(x), t.dim_by_chains(i));
                assert_eq!(t.index(&a.conj_up(x).unwrap()), t.conj_up(i));
                assert_eq!(t.index(&a.conj_down(x).unwrap()), t.conj_down(i));
                for (j, y) in t.elements.iter().enumerate() {
                    assert_eq!(t.index(&a.diff(x, y).unwrap()), t.diff(i, j));
                    assert_eq!(a.strongly_below(y, x).unwrap(), t.strongly_below(j, i));
                }
            }
            let ji: Vec<Element> = t
                .join_irreducibles()
                .iter()
                .map(|&i| t.elements[i].clone())
                .collect();
            assert_eq!(ji, a.join_irreducibles());
            assert_eq!(t.join_primes(), t.join_irreducibles());
        }
    }

    #[test]
    fn fiber_bounds_on_chain() {
        let a = Algebra::new(fixtures::c2());
        let (_, pi) = a.quotient_by(&a.epsilon(1)).unwrap();
        let (lo, hi) = fiber_bounds(&pi, &a.bottom(), CAP).unwrap();
        assert_eq!(lo, a.bottom());
        assert_eq!(hi, a.epsilon(1));
        assert_eq!(kernel_generator(&pi, CAP).unwrap(), a.epsilon(1));
    }
}
