use super::{Algebra, Element, Ideal};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A homomorphism of co-Heyting algebras, presented by its dual map
/// `f: spec(dst) → spec(src)`; the element map is `a ↦ f⁻¹(a)`.
///
/// `f` must be monotone and send each principal upset onto a principal
/// upset, `f(q↑) = f(q)↑`. Monotonicity alone gives a lattice map; the
/// upset condition is what makes `−` commute with the map.
#[derive(Debug, Clone)]
pub struct Morphism {
    src: Algebra,
    dst: Algebra,
    dual: Vec<usize>,
}

/// Outcome of comparing `φ(ε_d)` against `ε_d` of the target.
#[derive(Debug, Clone)]
pub struct DlReport {
    pub d: usize,
    pub image: Element,
    pub target: Element,
    /// `φ(ε_d) ≤ ε_d`; holds for every morphism.
    pub contained: bool,
    /// `φ(ε_d) = ε_d`; required when `φ` is onto.
    pub equal: bool,
    pub surjective: bool,
}

impl DlReport {
    pub fn ok(&self) -> bool {
        self.contained && (!self.surjective || self.equal)
    }
}

impl Morphism {
    pub fn new(src: Algebra, dst: Algebra, dual: Vec<usize>) -> Result<Morphism> {
        let (p, q) = (src.spec(), dst.spec());
        if dual.len() != q.len() {
            return Err(Error::BadDualMap(format!(
                "dual map has {} entries for {} target points",
                dual.len(),
                q.len()
            )));
        }
        if let Some(&bad) = dual.iter().find(|&&x| x >= p.len()) {
            return Err(Error::BadDualMap(format!("point index {bad} out of range")));
        }
        for x in q.points() {
            for y in q.points() {
                if q.leq(x, y) && !p.leq(dual[x], dual[y]) {
                    return Err(Error::NotMonotone(format!(
                        "{} <= {} but {} !<= {}",
                        q.name(x),
                        q.name(y),
                        p.name(dual[x]),
                        p.name(dual[y])
                    )));
                }
            }
        }
        for x in q.points() {
            let image = PointSet::from_indices(p.len(), q.principal_up(x).iter().map(|y| dual[y]));
            if image != *p.principal_up(dual[x]) {
                return Err(Error::NotOpen(q.name(x).to_string()));
            }
        }
        Ok(Morphism { src, dst, dual })
    }

    pub fn identity(a: &Algebra) -> Morphism {
        Morphism {
            src: a.clone(),
            dst: a.clone(),
            dual: a.spec().points().collect(),
        }
    }

    pub fn src(&self) -> &Algebra {
        &self.src
    }

    pub fn dst(&self) -> &Algebra {
        &self.dst
    }

    pub fn dual_map(&self) -> &[usize] {
        &self.dual
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if next.src != self.dst {
            return Err(Error::OwnerMismatch);
        }
        Ok(Morphism {
            src: self.src.clone(),
            dst: next.dst.clone(),
            dual: next.dual.iter().map(|&y| self.dual[y]).collect(),
        })
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.src.check(a)?;
        Ok(self.dst.wrap(PointSet::from_indices(
            self.dual.len(),
            (0..self.dual.len()).filter(|&q| a.pts.contains(self.dual[q])),
        )))
    }

    /// Onto iff the dual map is injective.
    pub fn is_surjective(&self) -> bool {
        let mut seen = PointSet::empty(self.src.spec().len());
        self.dual.iter().all(|&x| seen.insert(x))
    }

    fn image(&self) -> PointSet {
        PointSet::from_indices(self.src.spec().len(), self.dual.iter().copied())
    }

    /// `φ⁻¹(0)`, generated by the points outside the image of the dual map.
    pub fn kernel(&self) -> Ideal {
        let gen = self.src.spec().up_closure(&self.image()).complement();
        Ideal {
            gen: self.src.wrap(gen),
        }
    }

    pub fn check_dl_preserved(&self, d: usize) -> DlReport {
        let image = self
            .apply(&self.src.epsilon(d))
            .expect("epsilon belongs to the source");
        let target = self.dst.epsilon(d);
        DlReport {
            d,
            contained: image.pts.is_subset(&target.pts),
            equal: image == target,
            surjective: self.is_surjective(),
            image,
            target,
        }
    }

    fn require_quotient(&self) -> Result<Element> {
        if !self.is_surjective() {
            return Err(Error::NotAQuotient);
        }
        Ok(self.kernel().gen)
    }

    /// Least element of the fiber through `a`: `a − ε` for the kernel
    /// generator `ε`.
    pub fn fiber_min(&self, a: &Element) -> Result<Element> {
        let e = self.require_quotient()?;
        self.src.diff(a, &e)
    }

    /// Greatest element of the fiber through `a`: `a ∨ ε`.
    pub fn fiber_max(&self, a: &Element) -> Result<Element> {
        let e = self.require_quotient()?;
        self.src.join(a, &e)
    }

    /// Least preimage of a target element.
    pub fn lift_min(&self, b: &Element) -> Result<Element> {
        self.require_quotient()?;
        self.dst.check(b)?;
        let pts = PointSet::from_indices(self.src.spec().len(), b.pts.iter().map(|q| self.dual[q]));
        Ok(self.src.wrap(self.src.spec().down_closure(&pts)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    #[test]
    fn quotient_projection_is_a_morphism() {
        let a = Algebra::new(Poset::chain(3));
        let (q, pi) = a.quotient_by(&a.epsilon(2)).unwrap();
        assert_eq!(q.spec().len(), 2);
        assert!(pi.is_surjective());
        assert_eq!(pi.kernel().generator(), &a.epsilon(2));
        for d in 0..4 {
            assert!(pi.check_dl_preserved(d).ok(), "d = {d}");
        }
        let top = a.top();
        assert_eq!(pi.fiber_min(&top).unwrap(), top);
        assert_eq!(pi.fiber_max(&a.bottom()).unwrap(), a.epsilon(2));
        assert_eq!(pi.lift_min(&q.top()).unwrap(), top);
    }

    #[test]
    fn down_open_but_not_up_open_is_rejected() {
        // Sending the single target point to the bottom of a 2-chain is
        // monotone, but p0↑ is not hit.
        let src = Algebra::new(Poset::chain(2));
        let dst = Algebra::new(Poset::chain(1));
        assert!(matches!(
            Morphism::new(src.clone(), dst.clone(), vec![0]),
            Err(Error::NotOpen(_))
        ));
        assert!(Morphism::new(src, dst, vec![1]).is_ok());
    }

    #[test]
    fn non_monotone_is_rejected() {
        let src = Algebra::new(Poset::chain(2));
        let dst = Algebra::new(Poset::chain(2));
        assert!(matches!(
            Morphism::new(src, dst, vec![1, 0]),
            Err(Error::NotMonotone(_))
        ));
    }

    #[test]
    fn inclusion_into_a_product_is_not_onto() {
        // Folding two incomparable points onto one: an injective lattice map.
        let src = Algebra::new(Poset::chain(1));
        let dst = Algebra::new(Poset::antichain(2));
        let phi = Morphism::new(src.clone(), dst, vec![0, 0]).unwrap();
        assert!(!phi.is_surjective());
        assert_eq!(phi.kernel().generator(), &src.bottom());
        assert_eq!(phi.fiber_min(&src.top()), Err(Error::NotAQuotient));
        assert!(phi.check_dl_preserved(0).ok());
    }

    #[test]
    fn composition() {
        let a = Algebra::new(Poset::chain(3));
        let (b, p1) = a.quotient_by(&a.epsilon(2)).unwrap();
        let (_, p2) = b.quotient_by(&b.epsilon(1)).unwrap();
        let both = p1.then(&p2).unwrap();
        assert_eq!(both.kernel().generator(), &a.epsilon(1));
        let id = Morphism::identity(&a);
        assert_eq!(id.apply(&a.top()).unwrap(), a.top());
    }
}
