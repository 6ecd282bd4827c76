//! Finite posets with precomputed reachability, ranks and closures.
//!
//! Points are indexed `0..n` and iteration is always in ascending index
//! order, so everything derived from a poset is reproducible.

mod canon;
mod enumerate;
pub mod text;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;

pub use canon::{automorphism_count, canonical_form, CanonicalCode};
pub use enumerate::{enumerate_posets, enumerate_posets_up_to};

/// A finite partial order.
///
/// Stores the cover relation together with the full reflexive-transitive
/// closure in both directions, which keeps rank, closure and forcing
/// queries at worst quadratic.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    /// `down[x]` is the principal downset of x, x included.
    down: Vec<PointSet>,
    up: Vec<PointSet>,
    rank: Vec<usize>,
    corank: Vec<usize>,
}

impl Poset {
    /// Builds a poset from point names and `(lower, upper)` cover pairs
    /// given by name.
    pub fn new<S: AsRef<str>>(points: &[S], covers: &[(S, S)]) -> Result<Poset> {
        let names: Vec<String> = points.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let l = *index
                .get(lo.as_ref())
                .ok_or_else(|| Error::UnknownPoint(lo.as_ref().to_string()))?;
            let h = *index
                .get(hi.as_ref())
                .ok_or_else(|| Error::UnknownPoint(hi.as_ref().to_string()))?;
            pairs.push((l, h));
        }
        Poset::from_relation(names, &pairs)
    }

    /// Builds a poset from names and any set of strict `(lower, upper)` pairs;
    /// the pairs are closed transitively and reduced to covers.
    pub fn from_relation(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = names.len();
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let mut direct_lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut direct_upper: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(l, h) in pairs {
            if l >= n || h >= n {
                return Err(Error::UnknownPoint(format!("#{}", l.max(h))));
            }
            if l == h {
                return Err(Error::CycleDetected(names[l].clone()));
            }
            direct_lower[h].push(l);
            direct_upper[l].push(h);
        }
        for v in direct_lower.iter_mut().chain(direct_upper.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }

        // Kahn's algorithm, lowest index first.
        let mut indeg: Vec<usize> = direct_lower.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &y in &direct_upper[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap();
            return Err(Error::CycleDetected(names[stuck].clone()));
        }

        let mut down: Vec<PointSet> = (0..n).map(|x| PointSet::singleton(n, x)).collect();
        let mut rank = vec![0usize; n];
        for &x in &topo {
            let mut d = down[x].clone();
            for &l in &direct_lower[x] {
                d.union_with(&down[l]);
                rank[x] = rank[x].max(rank[l] + 1);
            }
            down[x] = d;
        }
        let mut up: Vec<PointSet> = (0..n).map(|x| PointSet::singleton(n, x)).collect();
        let mut corank = vec![0usize; n];
        for &x in topo.iter().rev() {
            let mut u = up[x].clone();
            for &h in &direct_upper[x] {
                u.union_with(&up[h]);
                corank[x] = corank[x].max(corank[h] + 1);
            }
            up[x] = u;
        }

        // A direct pair is a cover unless it passes below another direct lower
        // point.
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for y in 0..n {
            let mut shadow = PointSet::empty(n);
            for &w in &direct_lower[y] {
                let mut s = down[w].clone();
                s.remove(w);
                shadow.union_with(&s);
            }
            for &x in &direct_lower[y] {
                if !shadow.contains(x) {
                    lower_covers[y].push(x);
                    upper_covers[x].push(y);
                }
            }
        }
        for v in upper_covers.iter_mut() {
            v.sort_unstable();
        }

        Ok(Poset {
            names,
            index,
            lower_covers,
            upper_covers,
            down,
            up,
            rank,
            corank,
        })
    }

    /// The poset with points `p0 .. p{n-1}` and the given cover pairs.
    pub fn with_default_names(n: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        Poset::from_relation((0..n).map(|i| format!("p{i}")).collect(), pairs)
    }

    pub fn chain(n: usize) -> Poset {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::with_default_names(n, &pairs).expect("chains are acyclic")
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::with_default_names(n, &[]).expect("no relations")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower_covers[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper_covers[x]
    }

    /// All cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.len())
            .flat_map(|y| self.lower_covers[y].iter().map(move |&x| (x, y)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `x↓`
    pub fn principal_down(&self, x: usize) -> &PointSet {
        &self.down[x]
    }

    /// `x↑`
    pub fn principal_up(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    /// Length of the longest chain strictly below `x`.
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// Length of the longest chain strictly above `x`.
    pub fn corank(&self, x: usize) -> usize {
        self.corank[x]
    }

    /// Longest chain length in the whole poset, `None` when empty.
    pub fn height(&self) -> Option<usize> {
        self.rank.iter().copied().max()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn down_closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.down[x]);
        }
        out
    }

    pub fn up_closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s {
            out.union_with(&self.up[x]);
        }
        out
    }

    pub fn is_down_closed(&self, s: &PointSet) -> bool {
        s.iter().all(|x| self.down[x].is_subset(s))
    }

    pub fn is_up_closed(&self, s: &PointSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// Points of `s` with no point of `s` strictly above.
    pub fn maximal_points(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.len(),
            s.iter().filter(|&x| {
                let mut above = self.up[x].intersection(s);
                above.remove(x);
                above.is_empty()
            }),
        )
    }

    /// Points of `s` with no point of `s` strictly below.
    pub fn minimal_points(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.len(),
            s.iter().filter(|&x| {
                let mut below = self.down[x].intersection(s);
                below.remove(x);
                below.is_empty()
            }),
        )
    }

    pub fn is_antichain(&self, s: &PointSet) -> bool {
        let v = s.to_vec();
        v.iter()
            .enumerate()
            .all(|(i, &x)| v[i + 1..].iter().all(|&y| !self.comparable(x, y)))
    }

    /// The same points with the order reversed.
    pub fn dual(&self) -> Poset {
        let pairs: Vec<_> = self.covers().into_iter().map(|(l, h)| (h, l)).collect();
        Poset::from_relation(self.names.clone(), &pairs).expect("dual of a poset is a poset")
    }

    /// The induced subposet on `keep`, plus the old-to-new index map.
    pub fn restrict(&self, keep: &PointSet) -> (Poset, Vec<Option<usize>>) {
        let mut map = vec![None; self.len()];
        let mut names = Vec::with_capacity(keep.len());
        for (new, old) in keep.iter().enumerate() {
            map[old] = Some(new);
            names.push(self.names[old].clone());
        }
        let mut pairs = Vec::new();
        for y in keep {
            let mut below = self.down[y].intersection(keep);
            below.remove(y);
            for x in &below {
                pairs.push((map[x].unwrap(), map[y].unwrap()));
            }
        }
        let p = Poset::from_relation(names, &pairs).expect("subposet of a poset is a poset");
        (p, map)
    }

    /// Nonempty antichains in order of size, then lexicographic index order.
    pub fn antichains(&self) -> Antichains<'_> {
        Antichains::new(self)
    }

    /// Number of downsets, without materializing them.
    pub fn count_downsets(&self) -> u128 {
        let mut memo = HashMap::new();
        self.count_downsets_in(self.full_set(), &mut memo)
    }

    fn count_downsets_in(&self, avail: PointSet, memo: &mut HashMap<PointSet, u128>) -> u128 {
        let Some(x) = avail.first() else { return 1 };
        if let Some(&c) = memo.get(&avail) {
            return c;
        }
        // Downsets of the subposet `avail` either omit x (and all above it)
        // or contain x (and all below it).
        let without = avail.difference(&self.up[x]);
        let with = avail.difference(&self.down[x]);
        let c = self.count_downsets_in(without, memo) + self.count_downsets_in(with, memo);
        memo.insert(avail, c);
        c
    }

    /// All downsets in (size, lexicographic) order; fails past `cap`.
    pub fn downsets(&self, cap: usize) -> Result<Vec<PointSet>> {
        let mut out = Vec::new();
        self.collect_downsets(self.empty_set(), self.full_set(), &mut out, cap)?;
        out.sort();
        Ok(out)
    }

    fn collect_downsets(
        &self,
        chosen: PointSet,
        avail: PointSet,
        out: &mut Vec<PointSet>,
        cap: usize,
    ) -> Result<()> {
        let Some(x) = avail.first() else {
            if out.len() >= cap {
                return Err(Error::cap("downset listing", cap));
            }
            out.push(chosen);
            return Ok(());
        };
        let without = avail.difference(&self.up[x]);
        self.collect_downsets(chosen.clone(), without, out, cap)?;
        let with = avail.difference(&self.down[x]);
        let mut c = chosen;
        c.union_with(&self.down[x]);
        self.collect_downsets(c, with, out, cap)
    }

    /// A shared handle, for types that hold onto their poset.
    pub fn into_arc(self) -> Arc<Poset> {
        Arc::new(self)
    }

    pub fn format_set(&self, s: &PointSet) -> String {
        let items: Vec<&str> = s.iter().map(|x| self.name(x)).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(l, h)| format!("{}<{}", self.names[l], self.names[h]))
            .collect();
        f.debug_struct("Poset")
            .field("points", &self.names)
            .field("covers", &covers)
            .finish()
    }
}

/// Streaming antichain enumeration, see [`Poset::antichains`].
pub struct Antichains<'a> {
    poset: &'a Poset,
    size: usize,
    buf: VecDeque<PointSet>,
    done: bool,
}

impl<'a> Antichains<'a> {
    fn new(poset: &'a Poset) -> Self {
        Antichains {
            poset,
            size: 0,
            buf: VecDeque::new(),
            done: poset.is_empty(),
        }
    }

    fn fill(&mut self) {
        self.size += 1;
        let mut stack = Vec::with_capacity(self.size);
        Self::extend(self.poset, self.size, 0, &mut stack, &mut self.buf);
        if self.buf.is_empty() {
            self.done = true;
        }
    }

    fn extend(
        p: &Poset,
        k: usize,
        start: usize,
        stack: &mut Vec<usize>,
        out: &mut VecDeque<PointSet>,
    ) {
        if stack.len() == k {
            out.push_back(PointSet::from_indices(p.len(), stack.iter().copied()));
            return;
        }
        let need = k - stack.len();
        for x in start..p.len() {
            if p.len() - x < need {
                break;
            }
            if stack.iter().all(|&y| !p.comparable(x, y)) {
                stack.push(x);
                Self::extend(p, k, x + 1, stack, out);
                stack.pop();
            }
        }
    }
}

impl Iterator for Antichains<'_> {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        while self.buf.is_empty() {
            if self.done {
                return None;
            }
            self.fill();
        }
        self.buf.pop_front()
    }
}
