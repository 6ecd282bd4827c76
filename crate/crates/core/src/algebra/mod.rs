//! Finite co-Heyting algebras, realized as the downset lattice `O(P)` of a
//! spectral poset `P`.
//!
//! The prime filter `F_p = {a | p ∈ a}` of each point `p` satisfies
//! `F_p ⊆ F_q` iff `q ≤ p`, so heights in the spectrum are coranks in `P`
//! and coheights are ranks. Everything here is computed on points; the
//! element-level definitions live in [`oracle`] and are used to check this
//! module.

mod morphism;
pub mod oracle;

use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poset::Poset;

pub use morphism::{DlReport, Morphism};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Codimension of an element. `Infinite` is the codimension of `0`; it is a
/// distinct value, not a large integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Codim {
    Finite(usize),
    Infinite,
}

impl Codim {
    /// The finite value; `Infinite` refuses arithmetic.
    pub fn value(self) -> Result<usize> {
        match self {
            Codim::Finite(d) => Ok(d),
            Codim::Infinite => Err(Error::InfiniteCodim),
        }
    }

    pub fn at_least(self, d: usize) -> bool {
        self >= Codim::Finite(d)
    }
}

impl fmt::Display for Codim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codim::Finite(d) => write!(f, "{d}"),
            Codim::Infinite => f.write_str("+inf"),
        }
    }
}

/// Dimension of an element; `NegInfinite` only for `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dim {
    NegInfinite,
    Finite(usize),
}

impl Dim {
    pub fn value(self) -> Result<usize> {
        match self {
            Dim::Finite(d) => Ok(d),
            Dim::NegInfinite => Err(Error::InfiniteCodim),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(d) => write!(f, "{d}"),
            Dim::NegInfinite => f.write_str("-inf"),
        }
    }
}

/// The co-Heyting algebra of downsets of a finite poset.
#[derive(Clone)]
pub struct Algebra {
    id: u64,
    spec: Arc<Poset>,
}

/// A downset of the owning algebra's spectral poset.
///
/// Ordered by cardinality, then lexicographically on point indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pts: PointSet,
    owner: u64,
}

impl Element {
    pub fn points(&self) -> &PointSet {
        &self.pts
    }

    pub fn is_bottom(&self) -> bool {
        self.pts.is_empty()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.pts)
    }
}

/// The principal ideal `gen↓`. Finite lattices have no other ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    gen: Element,
}

impl Ideal {
    pub fn generator(&self) -> &Element {
        &self.gen
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.owner == self.gen.owner && a.pts.is_subset(&self.gen.pts)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("id", &self.id)
            .field("spec", &*self.spec)
            .finish()
    }
}

impl Algebra {
    pub fn new(spec: Poset) -> Algebra {
        Algebra::from_arc(Arc::new(spec))
    }

    pub fn from_arc(spec: Arc<Poset>) -> Algebra {
        Algebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            spec,
        }
    }

    pub fn spec(&self) -> &Poset {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<Poset> {
        &self.spec
    }

    fn n(&self) -> usize {
        self.spec.len()
    }

    fn wrap(&self, pts: PointSet) -> Element {
        Element {
            pts,
            owner: self.id,
        }
    }

    fn check(&self, a: &Element) -> Result<()> {
        if a.owner == self.id {
            Ok(())
        } else {
            Err(Error::OwnerMismatch)
        }
    }

    pub fn owns(&self, a: &Element) -> bool {
        a.owner == self.id
    }

    /// Wraps a point set, rejecting sets that are not down-closed.
    pub fn element(&self, pts: PointSet) -> Result<Element> {
        if pts.universe() != self.n() {
            return Err(Error::Invalid(format!(
                "point set over {} points used in an algebra over {}",
                pts.universe(),
                self.n()
            )));
        }
        for x in &pts {
            if let Some(y) = self.spec.principal_down(x).difference(&pts).first() {
                return Err(Error::NotDownset(self.spec.name(y).to_string()));
            }
        }
        Ok(self.wrap(pts))
    }

    pub fn element_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Element> {
        let mut pts = PointSet::empty(self.n());
        for n in names {
            let x = self
                .spec
                .index_of(n.as_ref())
                .ok_or_else(|| Error::UnknownPoint(n.as_ref().to_string()))?;
            pts.insert(x);
        }
        self.element(pts)
    }

    /// Parses `{p0,p1}`; the listed points must form a downset.
    pub fn parse_point_list(&self, text: &str) -> Result<Element> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Syntax {
                pos: 0,
                msg: "expected `{p,q,...}`".into(),
            })?;
        let names: Vec<&str> = inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        self.element_from_names(&names)
    }

    pub fn format(&self, a: &Element) -> String {
        self.spec.format_set(&a.pts)
    }

    pub fn bottom(&self) -> Element {
        self.wrap(self.spec.empty_set())
    }

    pub fn top(&self) -> Element {
        self.wrap(self.spec.full_set())
    }

    /// `p↓`, the join irreducible attached to a point.
    pub fn principal(&self, p: usize) -> Element {
        self.wrap(self.spec.principal_down(p).clone())
    }

    /// The complement of `p↑`, the meet irreducible attached to a point.
    pub fn co_principal(&self, p: usize) -> Element {
        self.wrap(self.spec.principal_up(p).complement())
    }

    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.pts.is_subset(&b.pts))
    }

    pub fn join(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(a.pts.union(&b.pts)))
    }

    pub fn meet(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(a.pts.intersection(&b.pts)))
    }

    /// `a − b = min{c | a ≤ b ∨ c}`, which on downsets is the down-closure
    /// of the set difference.
    pub fn diff(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.spec.down_closure(&a.pts.difference(&b.pts))))
    }

    /// `a △ b = (a − b) ∨ (b − a)`.
    pub fn sym_diff(&self, a: &Element, b: &Element) -> Result<Element> {
        let ab = self.diff(a, b)?;
        let ba = self.diff(b, a)?;
        self.join(&ab, &ba)
    }

    /// `b ≪ a` iff `b ≤ a` and `a − b = a`.
    pub fn strongly_below(&self, b: &Element, a: &Element) -> Result<bool> {
        Ok(self.leq(b, a)? && self.diff(a, b)? == *a)
    }

    /// Smallest corank over the element's points.
    pub fn codim(&self, a: &Element) -> Codim {
        a.pts
            .iter()
            .map(|p| self.spec.corank(p))
            .min()
            .map_or(Codim::Infinite, Codim::Finite)
    }

    /// Largest rank over the element's points.
    pub fn dim(&self, a: &Element) -> Dim {
        a.pts
            .iter()
            .map(|p| self.spec.rank(p))
            .max()
            .map_or(Dim::NegInfinite, Dim::Finite)
    }

    /// Dimension of the top element.
    pub fn dim_algebra(&self) -> Dim {
        self.dim(&self.top())
    }

    /// `ε_d`, the generator of `dL = {a | codim a ≥ d}`: all points of
    /// corank at least `d`.
    pub fn epsilon(&self, d: usize) -> Element {
        self.wrap(PointSet::from_indices(
            self.n(),
            self.spec.points().filter(|&p| self.spec.corank(p) >= d),
        ))
    }

    pub fn ideal_dl(&self, d: usize) -> Ideal {
        Ideal {
            gen: self.epsilon(d),
        }
    }

    pub fn principal_ideal(&self, gen: &Element) -> Result<Ideal> {
        self.check(gen)?;
        Ok(Ideal { gen: gen.clone() })
    }

    /// `ωL`, the intersection of all `dL`; always `{0}` for a finite algebra.
    pub fn omega_ideal(&self) -> Ideal {
        let d = match self.dim_algebra() {
            Dim::Finite(d) => d + 1,
            Dim::NegInfinite => 0,
        };
        self.ideal_dl(d)
    }

    /// Points indexing the minimal prime filters containing `a`: the
    /// maximal points of `a`.
    pub fn minimal_primes(&self, a: &Element) -> Result<PointSet> {
        self.check(a)?;
        if a.is_bottom() {
            return Err(Error::EmptyElement);
        }
        Ok(self.spec.maximal_points(&a.pts))
    }

    /// `{p↓}` over all points, sorted.
    pub fn join_irreducibles(&self) -> Vec<Element> {
        let mut v: Vec<_> = self.spec.points().map(|p| self.principal(p)).collect();
        v.sort();
        v
    }

    /// Complements of `p↑` over all points, sorted.
    pub fn meet_irreducibles(&self) -> Vec<Element> {
        let mut v: Vec<_> = self.spec.points().map(|p| self.co_principal(p)).collect();
        v.sort();
        v
    }

    /// Join irreducible components: `p↓` for the maximal points `p` of `a`.
    pub fn jsupp(&self, a: &Element) -> Result<Vec<Element>> {
        self.check(a)?;
        let mut v: Vec<_> = self
            .spec
            .maximal_points(&a.pts)
            .iter()
            .map(|p| self.principal(p))
            .collect();
        v.sort();
        Ok(v)
    }

    /// Meet irreducible components: complements of `p↑` for the minimal
    /// points `p` outside `a`.
    pub fn msupp(&self, a: &Element) -> Result<Vec<Element>> {
        self.check(a)?;
        let mut v: Vec<_> = self
            .spec
            .minimal_points(&a.pts.complement())
            .iter()
            .map(|p| self.co_principal(p))
            .collect();
        v.sort();
        Ok(v)
    }

    /// `x^∧ = ⋁{y | x ≰ y}`: the points `q` with `x ⊄ q↓`.
    pub fn conj_up(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.wrap(PointSet::from_indices(
            self.n(),
            self.spec
                .points()
                .filter(|&q| !x.pts.is_subset(self.spec.principal_down(q))),
        )))
    }

    /// `x^∨ = ⋀{y | y ≰ x}`: the intersection of `p↓` over points `p ∉ x`.
    pub fn conj_down(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        let mut out = self.spec.full_set();
        for p in &x.pts.complement() {
            out.intersect_with(self.spec.principal_down(p));
        }
        Ok(self.wrap(out))
    }

    /// `L/e↓`, realized as the downsets of `P \ e`, with its projection
    /// `a ↦ a \ e`.
    pub fn quotient_by(&self, e: &Element) -> Result<(Algebra, Morphism)> {
        self.check(e)?;
        let keep = e.pts.complement();
        let (sub, map) = self.spec.restrict(&keep);
        let quotient = Algebra::new(sub);
        let mut dual = vec![0; keep.len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                dual[*new] = old;
            }
        }
        let pi = Morphism::new(self.clone(), quotient.clone(), dual)?;
        Ok((quotient, pi))
    }

    /// Every element, in sorted order.
    pub fn elements(&self, cap: usize) -> Result<Vec<Element>> {
        Ok(self
            .spec
            .downsets(cap)?
            .into_iter()
            .map(|s| self.wrap(s))
            .collect())
    }

    pub fn size(&self) -> u128 {
        self.spec.count_downsets()
    }

    /// Closure of `gens ∪ {0, 1}` under `∨`, `∧` and `−`, sorted.
    pub fn subalgebra_generated(&self, gens: &[Element], cap: usize) -> Result<Vec<Element>> {
        for g in gens {
            self.check(g)?;
        }
        let mut seen: HashSet<PointSet> = HashSet::new();
        let mut list: Vec<PointSet> = Vec::new();
        let push = |s: PointSet, seen: &mut HashSet<PointSet>, list: &mut Vec<PointSet>| {
            if seen.insert(s.clone()) {
                list.push(s);
                if list.len() > cap {
                    return Err(Error::cap("subalgebra closure", cap));
                }
            }
            Ok(())
        };
        push(self.spec.empty_set(), &mut seen, &mut list)?;
        push(self.spec.full_set(), &mut seen, &mut list)?;
        for g in gens {
            push(g.pts.clone(), &mut seen, &mut list)?;
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                let (x, y) = (list[i].clone(), list[j].clone());
                push(x.union(&y), &mut seen, &mut list)?;
                push(x.intersection(&y), &mut seen, &mut list)?;
                push(
                    self.spec.down_closure(&x.difference(&y)),
                    &mut seen,
                    &mut list,
                )?;
                push(
                    self.spec.down_closure(&y.difference(&x)),
                    &mut seen,
                    &mut list,
                )?;
            }
            i += 1;
        }
        let mut out: Vec<Element> = list.into_iter().map(|s| self.wrap(s)).collect();
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const CAP: usize = 1 << 16;

    fn c2() -> Algebra {
        Algebra::new(fixtures::c2())
    }

    fn a2() -> Algebra {
        Algebra::new(fixtures::a2())
    }

    fn v3() -> Algebra {
        Algebra::new(fixtures::v3())
    }

    fn el(a: &Algebra, names: &[&str]) -> Element {
        a.element_from_names(names).unwrap()
    }

    #[test]
    fn sizes_of_fixture_algebras() {
        assert_eq!(c2().elements(CAP).unwrap().len(), 3);
        assert_eq!(a2().elements(CAP).unwrap().len(), 4);
        let v = v3();
        let names: Vec<String> = v
            .elements(CAP)
            .unwrap()
            .iter()
            .map(|e| v.format(e))
            .collect();
        assert_eq!(
            names,
            vec!["{}", "{p0}", "{p0,p1}", "{p0,p2}", "{p0,p1,p2}"]
        );
    }

    #[test]
    fn non_downsets_are_rejected() {
        let a = c2();
        assert!(matches!(
            a.element_from_names(&["p1"]),
            Err(Error::NotDownset(_))
        ));
        let b = a2();
        assert_eq!(
            a.join(&a.top(), &b.top()).unwrap_err(),
            Error::OwnerMismatch
        );
    }

    #[test]
    fn lattice_operations() {
        let a = a2();
        assert_eq!(a.join(&el(&a, &["p"]), &el(&a, &["q"])).unwrap(), a.top());
        let x = el(&a, &["p"]);
        assert_eq!(a.meet(&x, &a.top()).unwrap(), x);
        let v = v3();
        assert_eq!(
            v.meet(&el(&v, &["p0", "p1"]), &el(&v, &["p0", "p2"]))
                .unwrap(),
            el(&v, &["p0"])
        );
    }

    #[test]
    fn differences() {
        let c = c2();
        let a = el(&c, &["p0"]);
        assert_eq!(c.diff(&c.top(), &a).unwrap(), c.top());
        assert_eq!(c.diff(&a, &a).unwrap(), c.bottom());
        assert_eq!(c.diff(&a, &c.bottom()).unwrap(), a);
        let v = v3();
        assert_eq!(
            v.diff(&v.top(), &el(&v, &["p0", "p1"])).unwrap(),
            el(&v, &["p0", "p2"])
        );
    }

    #[test]
    fn symmetric_difference() {
        let b = a2();
        assert_eq!(
            b.sym_diff(&el(&b, &["p"]), &el(&b, &["q"])).unwrap(),
            b.top()
        );
        let c = c2();
        let a = el(&c, &["p0"]);
        assert_eq!(c.sym_diff(&a, &a).unwrap(), c.bottom());
        assert_eq!(c.sym_diff(&a, &c.top()).unwrap(), c.top());
    }

    #[test]
    fn strong_order() {
        let c = c2();
        assert!(c.strongly_below(&el(&c, &["p0"]), &c.top()).unwrap());
        assert!(c.strongly_below(&c.bottom(), &c.bottom()).unwrap());
        let b = a2();
        assert!(!b.strongly_below(&el(&b, &["p"]), &b.top()).unwrap());
    }

    #[test]
    fn codim_and_dim() {
        let c = c2();
        let a = el(&c, &["p0"]);
        assert_eq!(c.codim(&a), Codim::Finite(1));
        assert_eq!(c.dim(&a), Dim::Finite(0));
        assert_eq!(c.codim(&c.bottom()), Codim::Infinite);
        assert_eq!(c.dim(&c.bottom()), Dim::NegInfinite);
        assert_eq!(Codim::Infinite.value(), Err(Error::InfiniteCodim));
        let b = a2();
        assert_eq!(b.codim(&el(&b, &["p"])), Codim::Finite(0));
        assert_eq!(c.dim_algebra(), Dim::Finite(1));
        assert_eq!(b.dim_algebra(), Dim::Finite(0));
        assert_eq!(v3().dim_algebra(), Dim::Finite(1));
    }

    #[test]
    fn epsilons() {
        let c = c2();
        assert_eq!(c.epsilon(0), c.top());
        assert_eq!(c.epsilon(1), el(&c, &["p0"]));
        assert_eq!(c.epsilon(2), c.bottom());
        let b = a2();
        assert_eq!(b.epsilon(1), b.bottom());
        assert_eq!(c.omega_ideal().generator(), &c.bottom());
        assert!(c.ideal_dl(1).contains(&el(&c, &["p0"])));
        assert!(!c.ideal_dl(1).contains(&c.top()));
    }

    #[test]
    fn minimal_primes_and_mf_identity() {
        let c = c2();
        assert_eq!(
            c.minimal_primes(&el(&c, &["p0"])).unwrap().to_vec(),
            vec![0]
        );
        assert_eq!(c.minimal_primes(&c.bottom()), Err(Error::EmptyElement));
        let v = v3();
        assert_eq!(v.minimal_primes(&v.top()).unwrap().to_vec(), vec![1, 2]);
        let b = el(&v, &["p0", "p1"]);
        let lhs = v.minimal_primes(&v.diff(&v.top(), &b).unwrap()).unwrap();
        let rhs = v.minimal_primes(&v.top()).unwrap().difference(b.points());
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_vec(), vec![2]);
    }

    #[test]
    fn irreducibles() {
        let b = a2();
        assert_eq!(b.join_irreducibles(), vec![el(&b, &["p"]), el(&b, &["q"])]);
        let c = c2();
        assert_eq!(c.join_irreducibles(), vec![el(&c, &["p0"]), c.top()]);
        assert_eq!(c.meet_irreducibles(), vec![c.bottom(), el(&c, &["p0"])]);
    }

    #[test]
    fn supports() {
        let v = v3();
        assert_eq!(
            v.jsupp(&v.top()).unwrap(),
            vec![el(&v, &["p0", "p1"]), el(&v, &["p0", "p2"])]
        );
        assert!(v.jsupp(&v.bottom()).unwrap().is_empty());
        let b = a2();
        assert_eq!(
            b.msupp(&b.bottom()).unwrap(),
            vec![el(&b, &["p"]), el(&b, &["q"])]
        );
    }

    #[test]
    fn conjugates() {
        let c = c2();
        let a = el(&c, &["p0"]);
        assert_eq!(c.conj_down(&a).unwrap(), c.top());
        assert_eq!(c.conj_up(&c.top()).unwrap(), a);
        let b = a2();
        assert_eq!(b.conj_up(&el(&b, &["p"])).unwrap(), el(&b, &["q"]));
    }

    #[test]
    fn quotients() {
        let c = c2();
        let (q, _) = c.quotient_by(&c.epsilon(1)).unwrap();
        assert_eq!(q.size(), 2);
        let (q, _) = c.quotient_by(&c.bottom()).unwrap();
        assert_eq!(q.size(), 3);
    }

    #[test]
    fn generated_subalgebras() {
        let b = a2();
        assert_eq!(
            b.subalgebra_generated(&[el(&b, &["p"])], CAP)
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            b.subalgebra_generated(&[], CAP).unwrap(),
            vec![b.bottom(), b.top()]
        );
        let chain = Algebra::new(Poset::chain(12));
        let gens = chain.join_irreducibles();
        assert!(chain.subalgebra_generated(&gens, 5).unwrap_err().is_cap());
    }
}
