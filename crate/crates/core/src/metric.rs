//! The codimension ultrametric, balls, and the truncated completion: a
//! tower `A_0 ← A_1 ← … ← A_D` of finite-dimensional quotients whose
//! coherent families stand in for points of the completion.
//!
//! Everything is relative to the truncation depth `D`. Families that agree
//! at every level up to `D` are reported as "at most `2^-D`" apart, never
//! as equal.

use std::fmt;

use crate::algebra::{Algebra, Codim, Dim, Element, Morphism};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::kripke::{free_quotient, projection_between, FreeQuotient};

/// A distance `0` or `2^-d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Zero,
    /// `2^-d`.
    Pow(usize),
}

impl Distance {
    pub fn as_f64(self) -> f64 {
        match self {
            Distance::Zero => 0.0,
            Distance::Pow(d) => 0.5f64.powi(d as i32),
        }
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Distance::Zero, Distance::Zero) => std::cmp::Ordering::Equal,
            (Distance::Zero, _) => std::cmp::Ordering::Less,
            (_, Distance::Zero) => std::cmp::Ordering::Greater,
            (Distance::Pow(a), Distance::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Zero => f.write_str("0"),
            Distance::Pow(0) => f.write_str("1"),
            Distance::Pow(d) => write!(f, "2^-{d}"),
        }
    }
}

/// `2^-codim(a △ b)`, or `0` when `a = b`.
pub fn distance(alg: &Algebra, a: &Element, b: &Element) -> Result<Distance> {
    Ok(match alg.codim(&alg.sym_diff(a, b)?) {
        Codim::Infinite => Distance::Zero,
        Codim::Finite(d) => Distance::Pow(d),
    })
}

/// `{y | x △ y ∈ dL}`.
pub fn ball(alg: &Algebra, x: &Element, d: usize, cap: usize) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    for y in alg.elements(cap)? {
        if alg.codim(&alg.sym_diff(x, &y)?).at_least(d) {
            out.push(y);
        }
    }
    Ok(out)
}

/// Elements generated by the join irreducibles, and whether the meet
/// irreducibles generate the same set.
pub fn dense_skeleton(alg: &Algebra, cap: usize) -> Result<(Vec<Element>, bool)> {
    let from_join = alg.subalgebra_generated(&alg.join_irreducibles(), cap)?;
    let from_meet = alg.subalgebra_generated(&alg.meet_irreducibles(), cap)?;
    let agree = from_join == from_meet;
    Ok((from_join, agree))
}

/// What a tower is built from.
#[derive(Debug, Clone)]
pub enum TowerSource {
    /// Levels `A_d = A / ε_d`.
    Finite(Algebra),
    /// Levels `F(n, d)`.
    Free(usize),
}

/// The truncated tower `A_0 ← … ← A_D`.
#[derive(Debug, Clone)]
pub struct Tower {
    levels: Vec<Algebra>,
    /// `maps[d]` is `π_{d,d+1}: A_{d+1} → A_d`.
    maps: Vec<Morphism>,
    /// For a finite source, the projections `A → A_d`.
    base: Option<(Algebra, Vec<Morphism>)>,
    free: Option<Vec<FreeQuotient>>,
}

/// A coherent family `(x_0, …, x_D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentFamily {
    components: Vec<Element>,
}

impl CoherentFamily {
    pub fn components(&self) -> &[Element] {
        &self.components
    }

    pub fn component(&self, d: usize) -> &Element {
        &self.components[d]
    }
}

/// The distance between two families under truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyDistance {
    /// `2^-d`, `d` the deepest level where the families agree.
    Exact(usize),
    /// They agree up to `D`; the true distance is at most `2^-D`.
    AtMost(usize),
}

impl fmt::Display for FamilyDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDistance::Exact(d) => write!(f, "{}", Distance::Pow(*d)),
            FamilyDistance::AtMost(d) => write!(f, "<={}", Distance::Pow(*d)),
        }
    }
}

/// The morphism between two algebras whose spectra share point names,
/// with the dual map matching names.
fn by_names(src: &Algebra, dst: &Algebra) -> Result<Morphism> {
    let dual = dst
        .spec()
        .points()
        .map(|q| {
            src.spec()
                .index_of(dst.spec().name(q))
                .ok_or_else(|| Error::FrameMismatch(dst.spec().name(q).to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(src.clone(), dst.clone(), dual)
}

pub fn make_tower(source: &TowerSource, depth: usize, caps: &Caps) -> Result<Tower> {
    match source {
        TowerSource::Finite(alg) => {
            let mut levels = Vec::new();
            let mut proj = Vec::new();
            for d in 0..=depth {
                let (q, pi) = alg.quotient_by(&alg.epsilon(d))?;
                levels.push(q);
                proj.push(pi);
            }
            let maps = (0..depth)
                .map(|d| by_names(&levels[d + 1], &levels[d]))
                .collect::<Result<_>>()?;
            Ok(Tower {
                levels,
                maps,
                base: Some((alg.clone(), proj)),
                free: None,
            })
        }
        TowerSource::Free(n) => {
            let fqs = (0..=depth)
                .map(|d| free_quotient(*n, d, caps))
                .collect::<Result<Vec<_>>>()?;
            let maps = (0..depth)
                .map(|d| projection_between(&fqs[d + 1], &fqs[d]))
                .collect::<Result<_>>()?;
            Ok(Tower {
                levels: fqs.iter().map(|f| f.algebra.clone()).collect(),
                maps,
                base: None,
                free: Some(fqs),
            })
        }
    }
}

impl Tower {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, d: usize) -> &Algebra {
        &self.levels[d]
    }

    pub fn levels(&self) -> &[Algebra] {
        &self.levels
    }

    /// `π_{d,d+1}`.
    pub fn map(&self, d: usize) -> &Morphism {
        &self.maps[d]
    }

    pub fn top(&self) -> &Algebra {
        &self.levels[self.depth()]
    }

    /// The free quotient at each level, for towers over `F(n, ·)`.
    pub fn free_levels(&self) -> Option<&[FreeQuotient]> {
        self.free.as_deref()
    }

    /// The base algebra and its projections, for finite sources.
    pub fn base(&self) -> Option<(&Algebra, &[Morphism])> {
        self.base.as_ref().map(|(a, p)| (a, p.as_slice()))
    }

    /// Dimension of the source when it is known: finite sources and the
    /// variable-free free algebra. `None` for free algebras on generators.
    pub fn source_dim(&self) -> Option<Dim> {
        match (&self.base, &self.free) {
            (Some((a, _)), _) => Some(a.dim_algebra()),
            (_, Some(f)) if f[0].n == 0 => Some(Dim::Finite(0)),
            _ => None,
        }
    }

    /// Checks coherence `π(x_{d+1}) = x_d`.
    pub fn family(&self, components: Vec<Element>) -> Result<CoherentFamily> {
        if components.len() != self.levels.len() {
            return Err(Error::Invalid(format!(
                "{} components for {} levels",
                components.len(),
                self.levels.len()
            )));
        }
        for (d, (x, a)) in components.iter().zip(&self.levels).enumerate() {
            if !a.owns(x) {
                return Err(Error::NotCoherent(d));
            }
        }
        for d in 0..self.depth() {
            if self.maps[d].apply(&components[d + 1])? != components[d] {
                return Err(Error::NotCoherent(d));
            }
        }
        Ok(CoherentFamily { components })
    }

    /// `(π_d(a))_d` for `a ∈ A_D`.
    pub fn lift(&self, a: &Element) -> Result<CoherentFamily> {
        let mut comps = vec![a.clone()];
        for d in (0..self.depth()).rev() {
            let next = self.maps[d].apply(comps.last().unwrap())?;
            comps.push(next);
        }
        comps.reverse();
        Ok(CoherentFamily { components: comps })
    }

    /// `(π_d(a))_d` for `a` in the base of a finite tower.
    pub fn lift_base(&self, a: &Element) -> Result<CoherentFamily> {
        let (_, proj) = self
            .base
            .as_ref()
            .ok_or_else(|| Error::Invalid("tower has no finite base".into()))?;
        let comps = proj.iter().map(|p| p.apply(a)).collect::<Result<_>>()?;
        Ok(CoherentFamily { components: comps })
    }

    /// `ε̂_e`: the lift of `ε_e(A_D)`.
    pub fn epsilon_family(&self, e: usize) -> CoherentFamily {
        self.lift(&self.top().epsilon(e))
            .expect("element of the top level")
    }

    pub fn bottom_family(&self) -> CoherentFamily {
        self.lift(&self.top().bottom())
            .expect("element of the top level")
    }

    pub fn top_family(&self) -> CoherentFamily {
        self.lift(&self.top().top())
            .expect("element of the top level")
    }

    pub fn leq(&self, f: &CoherentFamily, g: &CoherentFamily) -> bool {
        f.components
            .iter()
            .zip(&g.components)
            .all(|(x, y)| x.points().is_subset(y.points()))
    }

    /// Applies a binary operation level by level.
    pub fn zip_with(
        &self,
        f: &CoherentFamily,
        g: &CoherentFamily,
        op: impl Fn(&Algebra, &Element, &Element) -> Result<Element>,
    ) -> Result<CoherentFamily> {
        let comps = self
            .levels
            .iter()
            .zip(f.components.iter().zip(&g.components))
            .map(|(a, (x, y))| op(a, x, y))
            .collect::<Result<Vec<_>>>()?;
        self.family(comps)
    }

    pub fn family_distance(&self, f: &CoherentFamily, g: &CoherentFamily) -> FamilyDistance {
        match (0..=self.depth()).find(|&d| f.components[d] != g.components[d]) {
            None => FamilyDistance::AtMost(self.depth()),
            // Levels agree below the first disagreement; level 0 always does.
            Some(d) => FamilyDistance::Exact(d.saturating_sub(1)),
        }
    }

    /// Whether `f` is isolated as far as the truncation can tell: some
    /// nonzero `ε̂_d` lies below it, or the source is finite-dimensional
    /// below the truncation depth, so every family comes from the source.
    pub fn is_isolated(&self, f: &CoherentFamily) -> bool {
        if k_below(self.source_dim(), self.depth()) {
            return true;
        }
        (0..=self.depth())
            .any(|d| !self.top().epsilon(d).is_bottom() && self.leq(&self.epsilon_family(d), f))
    }

    /// Componentwise `x_d` of the limit of a finite sequence. The list is
    /// taken as Cauchy when its last two terms agree at every level; the
    /// limit is then its last term.
    pub fn cauchy_limit(&self, seq: &[CoherentFamily]) -> Result<CoherentFamily> {
        let last = seq
            .last()
            .ok_or_else(|| Error::Invalid("empty sequence".into()))?;
        if let Some(prev) = seq.len().checked_sub(2).map(|i| &seq[i]) {
            if let Some(d) = (0..=self.depth()).find(|&d| prev.components[d] != last.components[d])
            {
                return Err(Error::NotCauchyAtDepth(d));
            }
        }
        Ok(last.clone())
    }

    /// The limit of `b` given `c ≤ b ≤ a` with `a` and `c` converging to the
    /// same family.
    pub fn squeeze_limit(
        &self,
        a: &[CoherentFamily],
        b: &[CoherentFamily],
        c: &[CoherentFamily],
    ) -> Result<CoherentFamily> {
        if a.len() != b.len() || b.len() != c.len() {
            return Err(Error::Invalid("sequences differ in length".into()));
        }
        for i in 0..b.len() {
            for d in 0..=self.depth() {
                let (x, y, z) = (
                    c[i].component(d).points(),
                    b[i].component(d).points(),
                    a[i].component(d).points(),
                );
                if !x.is_subset(y) || !y.is_subset(z) {
                    return Err(Error::NotSqueezed { index: i, level: d });
                }
            }
        }
        let la = self.cauchy_limit(a)?;
        let lc = self.cauchy_limit(c)?;
        if la != lc {
            return Err(Error::LimitsDiffer);
        }
        let l = la;
        // u_n = (a_n − l) ∨ (c_n − l) must tend to 0.
        let u = a
            .iter()
            .zip(c)
            .map(|(an, cn)| {
                let x = self.zip_with(an, &l, |alg, p, q| alg.diff(p, q))?;
                let y = self.zip_with(cn, &l, |alg, p, q| alg.diff(p, q))?;
                self.zip_with(&x, &y, |alg, p, q| alg.join(p, q))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.cauchy_limit(&u)? != self.bottom_family() {
            return Err(Error::LimitsDiffer);
        }
        if self.cauchy_limit(b)? != l {
            return Err(Error::LimitsDiffer);
        }
        Ok(l)
    }

    /// The limit of a monotone sequence: it stabilizes at every level, so
    /// this is the last term once monotonicity at the top level is checked.
    pub fn monotone_limit(&self, seq: &[CoherentFamily]) -> Result<CoherentFamily> {
        let last = seq
            .last()
            .ok_or_else(|| Error::Invalid("empty sequence".into()))?;
        let top = self.depth();
        let le = |x: &CoherentFamily, y: &CoherentFamily| {
            x.component(top)
                .points()
                .is_subset(y.component(top).points())
        };
        // The first strict step fixes the direction.
        let mut up = None;
        for (i, w) in seq.windows(2).enumerate() {
            let (fwd, back) = (le(&w[0], &w[1]), le(&w[1], &w[0]));
            match (up, fwd, back) {
                (_, true, true) => {}
                (None, true, false) => up = Some(true),
                (None, false, true) => up = Some(false),
                (Some(true), true, _) | (Some(false), _, true) => {}
                _ => return Err(Error::SequenceNotMonotone(i + 1)),
            }
        }
        Ok(last.clone())
    }

    pub fn format_family(&self, f: &CoherentFamily) -> Vec<String> {
        f.components
            .iter()
            .zip(&self.levels)
            .map(|(x, a)| a.format(x))
            .collect()
    }
}

fn k_below(dim: Option<Dim>, depth: usize) -> bool {
    match dim {
        Some(Dim::Finite(k)) => k < depth,
        Some(Dim::NegInfinite) => true,
        None => false,
    }
}

/// `|F(n, d)|` for `d = 0..=D`; a cap error carries the sizes found so far.
pub fn precompactness_census(n: usize, depth: usize, caps: &Caps) -> Result<Vec<u128>> {
    let mut sizes = Vec::new();
    for d in 0..=depth {
        match free_quotient(n, d, caps) {
            Ok(fq) => sizes.push(fq.algebra.size()),
            Err(Error::SizeCap {
                what,
                limit,
                partial,
            }) => {
                let done: Vec<String> = sizes.iter().map(u128::to_string).collect();
                return Err(Error::SizeCap {
                    what,
                    limit,
                    partial: Some(format!(
                        "sizes so far: [{}]{}",
                        done.join(", "),
                        partial
                            .map(|p| format!("; level {d}: {p}"))
                            .unwrap_or_default()
                    )),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(sizes)
}
