//! Kripke models for intuitionistic propositional logic and their duality
//! with finite co-Heyting algebras.
//!
//! Orientation: a frame has its classical points minimal, and `p` forces
//! `a → b` when every `q ≤ p` forcing `a` forces `b`. Truth sets are
//! therefore frame downsets. The spectral poset of the dual co-Heyting
//! algebra is the order-dual of the frame; always convert with
//! [`frame_to_spec`] and [`spec_to_frame`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{Algebra, Element, Morphism};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::poset::text::PosetFile;
use crate::poset::{canonical_form, enumerate_posets_up_to, Poset};
use crate::terms::{dualize, eval_with, Signature, Term};

pub fn frame_to_spec(frame: &Poset) -> Poset {
    frame.dual()
}

pub fn spec_to_frame(spec: &Poset) -> Poset {
    spec.dual()
}

/// Variable names for `n` generators: `x, y, z` up to three, otherwise
/// `x1 .. xn`.
pub fn var_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

/// A finite frame with a colouring `point → set of variables`, stored as
/// bit masks over `vars`. Colours shrink going up: `q ≤ p` implies
/// `color(q) ⊇ color(p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    frame: Arc<Poset>,
    vars: Vec<String>,
    colors: Vec<u64>,
}

impl KripkeModel {
    pub fn new(frame: Poset, vars: Vec<String>, colors: Vec<u64>) -> Result<KripkeModel> {
        assert!(vars.len() <= 64, "at most 64 variables");
        if colors.len() != frame.len() {
            return Err(Error::Invalid(format!(
                "{} colours for {} points",
                colors.len(),
                frame.len()
            )));
        }
        let all = if vars.len() == 64 {
            u64::MAX
        } else {
            (1u64 << vars.len()) - 1
        };
        if colors.iter().any(|&c| c & !all != 0) {
            return Err(Error::Invalid("colour uses an undeclared variable".into()));
        }
        for (lo, hi) in frame.covers() {
            if colors[hi] & !colors[lo] != 0 {
                return Err(Error::ColoringNotMonotone {
                    lower: frame.name(lo).to_string(),
                    upper: frame.name(hi).to_string(),
                });
            }
        }
        Ok(KripkeModel {
            frame: Arc::new(frame),
            vars,
            colors,
        })
    }

    /// Builds a model from a parsed file; uncoloured files get empty colours.
    pub fn from_file(file: &PosetFile) -> Result<KripkeModel> {
        let colors = match &file.colors {
            None => vec![0; file.poset.len()],
            Some(cs) => cs
                .iter()
                .map(|c| {
                    c.iter().try_fold(0u64, |m, v| {
                        let i = file
                            .vars
                            .iter()
                            .position(|w| w == v)
                            .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                        Ok(m | 1 << i)
                    })
                })
                .collect::<Result<_>>()?,
        };
        KripkeModel::new(file.poset.clone(), file.vars.clone(), colors)
    }

    pub fn frame(&self) -> &Poset {
        &self.frame
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn color(&self, p: usize) -> u64 {
        self.colors[p]
    }

    pub fn colors(&self) -> &[u64] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.frame.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frame.is_empty()
    }

    pub fn color_names(&self, p: usize) -> Vec<String> {
        (0..self.vars.len())
            .filter(|i| self.colors[p] >> i & 1 == 1)
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Text in the model file format.
    pub fn to_text(&self) -> String {
        let colors: Vec<Vec<String>> = self.frame.points().map(|p| self.color_names(p)).collect();
        crate::poset::text::write(&self.frame, Some(&self.vars), Some(&colors))
    }

    fn var_index(&self, v: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))
    }

    /// Points forcing a Heyting term.
    pub fn truth_set(&self, t: &Term) -> Result<PointSet> {
        t.require(Signature::Heyting)?;
        self.truth(t)
    }

    fn truth(&self, t: &Term) -> Result<PointSet> {
        let f = &self.frame;
        Ok(match t {
            Term::Zero => f.empty_set(),
            Term::One => f.full_set(),
            Term::Var(v) => {
                let i = self.var_index(v)?;
                PointSet::from_indices(
                    f.len(),
                    f.points().filter(|&p| self.colors[p] >> i & 1 == 1),
                )
            }
            Term::Join(a, b) => self.truth(a)?.union(&self.truth(b)?),
            Term::Meet(a, b) => self.truth(a)?.intersection(&self.truth(b)?),
            Term::Impl(a, b) => {
                let bad = self.truth(a)?.difference(&self.truth(b)?);
                f.up_closure(&bad).complement()
            }
            Term::Diff(..) => unreachable!("signature checked"),
        })
    }

    pub fn forces(&self, p: usize, t: &Term) -> Result<bool> {
        Ok(self.truth_set(t)?.contains(p))
    }

    /// `u ⊨ t`: forced everywhere.
    pub fn validates(&self, t: &Term) -> Result<bool> {
        Ok(self.truth_set(t)?.len() == self.len())
    }

    /// The submodel on a frame downset.
    pub fn restrict(&self, keep: &PointSet) -> KripkeModel {
        let (frame, _) = self.frame.restrict(keep);
        let colors = keep.iter().map(|p| self.colors[p]).collect();
        KripkeModel {
            frame: Arc::new(frame),
            vars: self.vars.clone(),
            colors,
        }
    }

    /// Block index of every point under the largest bisimulation, blocks
    /// numbered by their least point.
    pub fn bisimulation_classes(&self) -> Vec<usize> {
        let f = &self.frame;
        let mut block: Vec<usize> = renumber(&self.colors);
        loop {
            let sigs: Vec<(usize, BTreeSet<usize>)> = f
                .points()
                .map(|p| {
                    (
                        block[p],
                        f.principal_down(p).iter().map(|q| block[q]).collect(),
                    )
                })
                .collect();
            let next = renumber(&sigs);
            let stable = next.iter().max() == block.iter().max();
            block = next;
            if stable {
                return block;
            }
        }
    }

    /// Quotient by the largest bisimulation, with the point map.
    pub fn bisim_reduce(&self) -> (KripkeModel, Vec<usize>) {
        let block = self.bisimulation_classes();
        let nb = block.iter().max().map_or(0, |m| m + 1);
        let mut names = vec![String::new(); nb];
        let mut colors = vec![0; nb];
        for p in self.frame.points().rev() {
            names[block[p]] = self.frame.name(p).to_string();
            colors[block[p]] = self.colors[p];
        }
        let mut pairs = BTreeSet::new();
        for (lo, hi) in self.frame.covers() {
            if block[lo] != block[hi] {
                pairs.insert((block[lo], block[hi]));
            }
        }
        let pairs: Vec<_> = pairs.into_iter().collect();
        let frame = Poset::from_relation(names, &pairs).expect("bisimulation quotient is a poset");
        let model = KripkeModel {
            frame: Arc::new(frame),
            vars: self.vars.clone(),
            colors,
        };
        (model, block)
    }

    pub fn is_reduced(&self) -> bool {
        let block = self.bisimulation_classes();
        let mut seen = BTreeSet::new();
        block.into_iter().all(|b| seen.insert(b))
    }

    /// The co-Heyting algebra dual to the frame, with one generator per
    /// variable: the points whose colour omits it.
    pub fn dual_algebra(&self) -> (Algebra, Vec<Element>) {
        let alg = Algebra::new(frame_to_spec(&self.frame));
        let gens = (0..self.vars.len())
            .map(|i| {
                let pts = PointSet::from_indices(
                    self.len(),
                    self.frame
                        .points()
                        .filter(|&p| self.colors[p] >> i & 1 == 0),
                );
                alg.element(pts).expect("generators are spectral downsets")
            })
            .collect();
        (alg, gens)
    }

    /// The definable sets `{u[t]}`: closure of the variables' truth sets
    /// under `∩`, `∪`, `→`, computed in the dual algebra and complemented.
    pub fn definable_sets(&self, cap: usize) -> Result<Vec<PointSet>> {
        let (alg, gens) = self.dual_algebra();
        let mut out: Vec<PointSet> = alg
            .subalgebra_generated(&gens, cap)?
            .into_iter()
            .map(|e| e.points().complement())
            .collect();
        out.sort();
        Ok(out)
    }
}

fn renumber<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut ids: BTreeMap<K, usize> = BTreeMap::new();
    // Number blocks in order of their least point.
    keys.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.clone()).or_insert(next)
        })
        .collect()
}

/// `u_{A,G}`: the frame is the order-dual of `A`'s spectrum and a point's
/// colour holds the variables whose generator does not contain it.
pub fn model_of_algebra(alg: &Algebra, gens: &[Element]) -> Result<KripkeModel> {
    for g in gens {
        if !alg.owns(g) {
            return Err(Error::OwnerMismatch);
        }
    }
    let frame = spec_to_frame(alg.spec());
    let colors = frame
        .points()
        .map(|p| {
            gens.iter()
                .enumerate()
                .filter(|(_, g)| !g.points().contains(p))
                .fold(0u64, |m, (i, _)| m | 1 << i)
        })
        .collect();
    KripkeModel::new(frame, var_names(gens.len()), colors)
}

/// Evaluates a co-Heyting term on the generators of [`model_of_algebra`],
/// binding the names from [`var_names`].
pub fn eval_on_generators(t: &Term, alg: &Algebra, gens: &[Element]) -> Result<Element> {
    let names = var_names(gens.len());
    eval_with(t, alg, &|v| {
        names
            .iter()
            .position(|n| n == v)
            .or_else(|| {
                v.strip_prefix('x')
                    .and_then(|i| i.parse::<usize>().ok())
                    .filter(|&i| i >= 1 && i <= gens.len())
                    .map(|i| i - 1)
            })
            .map(|i| gens[i].clone())
    })
}

/// The layered universal model on `n` variables with `d` layers.
#[derive(Debug, Clone)]
pub struct UniversalFrame {
    pub n: usize,
    pub d: usize,
    pub model: KripkeModel,
    /// Point indices of each layer, layer 1 first.
    pub layers: Vec<Vec<usize>>,
}

impl UniversalFrame {
    pub fn census(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.model.len()
    }

    pub fn is_empty(&self) -> bool {
        self.model.is_empty()
    }
}

fn layer_one_name(mask: u64, vars: &[String]) -> String {
    if mask == 0 {
        return "w_0".into();
    }
    let parts: Vec<&str> = (0..vars.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| vars[i].as_str())
        .collect();
    let sep = if vars.iter().all(|v| v.len() == 1) {
        ""
    } else {
        "_"
    };
    format!("w_{}", parts.join(sep))
}

/// `U(n, d)`. Layer 1 holds one point per colour. A point of layer `k + 1`
/// is a pair `(c, A)`: `A` a nonempty antichain meeting layer `k`, `c` a
/// subset of every colour in `A` and, when `A = {w}`, a proper subset of
/// `color(w)`. It covers exactly `A`. Antichains are taken by size then
/// index order, colours by mask.
pub fn universal_frame(n: usize, d: usize, caps: &Caps) -> Result<UniversalFrame> {
    let vars = var_names(n);
    if n >= 32 {
        return Err(Error::cap("universal frame variables", 31));
    }
    let mut names: Vec<String> = Vec::new();
    let mut colors: Vec<u64> = Vec::new();
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let over = |count: usize, layers: &[Vec<usize>]| -> Error {
        let mut sizes: Vec<String> = layers.iter().map(|l| l.len().to_string()).collect();
        sizes.push(format!(">={count}"));
        Error::SizeCap {
            what: "universal frame nodes",
            limit: caps.max_nodes,
            partial: Some(format!("layer sizes so far: [{}]", sizes.join(", "))),
        }
    };
    if d == 0 {
        let frame = Poset::antichain(0);
        return Ok(UniversalFrame {
            n,
            d,
            model: KripkeModel::new(frame, vars, vec![])?,
            layers,
        });
    }
    if 1usize << n > caps.max_nodes {
        return Err(over(1 << n, &layers));
    }
    let first: Vec<usize> = (0..1u64 << n)
        .map(|mask| {
            names.push(layer_one_name(mask, &vars));
            colors.push(mask);
            names.len() - 1
        })
        .collect();
    layers.push(first);
    let mut counter = 0;
    for _ in 1..d {
        let frame = Poset::from_relation(names.clone(), &covers)?;
        let prev = PointSet::from_indices(frame.len(), layers.last().unwrap().iter().copied());
        let mut layer = Vec::new();
        for anti in frame.antichains() {
            if anti.is_disjoint(&prev) {
                continue;
            }
            let common = anti.iter().fold(u64::MAX, |m, w| m & colors[w]);
            let single = (anti.len() == 1).then(|| colors[anti.first().unwrap()]);
            // Submasks of `common` in increasing order.
            let mut subs: Vec<u64> = Vec::new();
            let mut c = common;
            loop {
                subs.push(c);
                if c == 0 {
                    break;
                }
                c = (c - 1) & common;
            }
            subs.reverse();
            for c in subs {
                if single == Some(c) {
                    continue;
                }
                if names.len() >= caps.max_nodes {
                    return Err(over(names.len() + 1, &layers));
                }
                counter += 1;
                names.push(format!("v{counter}"));
                colors.push(c);
                let v = names.len() - 1;
                covers.extend(anti.iter().map(|w| (w, v)));
                layer.push(v);
            }
        }
        if layer.is_empty() {
            break;
        }
        layers.push(layer);
    }
    let frame = Poset::from_relation(names, &covers)?;
    Ok(UniversalFrame {
        n,
        d,
        model: KripkeModel::new(frame, vars, colors)?,
        layers,
    })
}

/// `F_n / dF_n`, realized as the downsets of the order-dual of `U(n, d)`.
#[derive(Debug, Clone)]
pub struct FreeQuotient {
    pub n: usize,
    pub d: usize,
    pub frame: UniversalFrame,
    pub algebra: Algebra,
    pub gens: Vec<Element>,
}

impl FreeQuotient {
    /// Whether the generators produce every element under `∨, ∧, −`.
    /// `None` when the closure exceeds `cap`.
    pub fn generators_complete(&self, cap: usize) -> Option<bool> {
        match self.algebra.subalgebra_generated(&self.gens, cap) {
            Ok(sub) => Some(sub.len() as u128 == self.algebra.size()),
            Err(_) => None,
        }
    }

    pub fn eval(&self, t: &Term) -> Result<Element> {
        t.require(Signature::CoHeyting)?;
        eval_on_generators(t, &self.algebra, &self.gens)
    }
}

pub fn free_quotient(n: usize, d: usize, caps: &Caps) -> Result<FreeQuotient> {
    let frame = universal_frame(n, d, caps)?;
    let (algebra, gens) = frame.model.dual_algebra();
    Ok(FreeQuotient {
        n,
        d,
        frame,
        algebra,
        gens,
    })
}

/// `ε_e` of `F(n, d)`: the points of frame rank at least `e`.
pub fn free_epsilon(n: usize, d: usize, e: usize, caps: &Caps) -> Result<Element> {
    if e > d {
        return Err(Error::Invalid(format!("level {e} above depth {d}")));
    }
    Ok(free_quotient(n, d, caps)?.algebra.epsilon(e))
}

/// `π: F(n, d+1) → F(n, d)`; the dual map includes `U(n, d)` into the
/// lower layers of `U(n, d+1)`.
pub fn projection_between(big: &FreeQuotient, small: &FreeQuotient) -> Result<Morphism> {
    let (bf, sf) = (big.frame.model.frame(), small.frame.model.frame());
    if big.n != small.n || small.d > big.d {
        return Err(Error::FrameMismatch(format!(
            "cannot project F({},{}) onto F({},{})",
            big.n, big.d, small.n, small.d
        )));
    }
    let mut dual = Vec::with_capacity(sf.len());
    for p in sf.points() {
        let q = bf
            .index_of(sf.name(p))
            .ok_or_else(|| Error::FrameMismatch(format!("point {} missing", sf.name(p))))?;
        if big.frame.model.color(q) != small.frame.model.color(p) {
            return Err(Error::FrameMismatch(format!(
                "colour of {} differs",
                sf.name(p)
            )));
        }
        dual.push(q);
    }
    Morphism::new(big.algebra.clone(), small.algebra.clone(), dual)
        .map_err(|e| Error::FrameMismatch(e.to_string()))
}

pub fn projection(n: usize, d: usize, caps: &Caps) -> Result<Morphism> {
    let big = free_quotient(n, d + 1, caps)?;
    let small = free_quotient(n, d, caps)?;
    projection_between(&big, &small)
}

/// Heyting terms `t1`, `t2` hold in the same reduced models with at most
/// `d` layers iff their duals agree in `F(n, d)`.
pub fn d_equivalent(t1: &Term, t2: &Term, n: usize, d: usize, caps: &Caps) -> Result<bool> {
    t1.require(Signature::Heyting)?;
    t2.require(Signature::Heyting)?;
    let fq = free_quotient(n, d, caps)?;
    Ok(fq.eval(&dualize(t1))? == fq.eval(&dualize(t2))?)
}

/// The same relation by brute force: every model on at most `max_points`
/// points with at most `d` layers and every monotone colouring.
pub fn d_equivalent_by_models(
    t1: &Term,
    t2: &Term,
    n: usize,
    d: usize,
    max_points: usize,
    caps: &Caps,
) -> Result<bool> {
    let vars = var_names(n);
    for frame in enumerate_posets_up_to(max_points, caps)? {
        if frame.height().is_some_and(|h| h + 1 > d) {
            continue;
        }
        for colors in monotone_colorings(&frame, n) {
            let u = KripkeModel::new(frame.clone(), vars.clone(), colors)?;
            if u.validates(t1)? != u.validates(t2)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All colourings with `q ≤ p ⇒ color(q) ⊇ color(p)`.
pub fn monotone_colorings(frame: &Poset, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; frame.len()];
    // Assign points in index order; a point's constraints only involve
    // points that are already assigned, so check against those.
    fn go(frame: &Poset, n: usize, i: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == frame.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..1u64 << n {
            let ok = (0..i).all(|j| {
                (!frame.leq(j, i) || c & !cur[j] == 0) && (!frame.leq(i, j) || cur[j] & !c == 0)
            });
            if ok {
                cur[i] = c;
                go(frame, n, i + 1, cur, out);
            }
        }
    }
    go(frame, n, 0, &mut cur, &mut out);
    out
}

/// Reduced models with at most `max_points` points and at most `d`
/// layers, one per isomorphism class: the generated submodels `A↓` of
/// `U(n, d)` for nonempty antichains `A`.
pub fn enumerate_reduced_models(
    n: usize,
    d: usize,
    max_points: usize,
    caps: &Caps,
) -> Result<Vec<KripkeModel>> {
    let uf = universal_frame(n, d, caps)?;
    let u = &uf.model;
    let f = u.frame();
    let mut found: BTreeMap<_, KripkeModel> = BTreeMap::new();
    let mut stack: Vec<usize> = Vec::new();
    fn go(
        u: &KripkeModel,
        start: usize,
        stack: &mut Vec<usize>,
        down: PointSet,
        max_points: usize,
        caps: &Caps,
        found: &mut BTreeMap<crate::poset::CanonicalCode<u64>, KripkeModel>,
    ) -> Result<()> {
        let f = u.frame();
        for x in start..f.len() {
            if stack.iter().any(|&y| f.comparable(x, y)) {
                continue;
            }
            let next = down.union(f.principal_down(x));
            if next.len() > max_points {
                continue;
            }
            let m = u.restrict(&next);
            let code = canonical_form(m.frame(), m.colors(), caps)?;
            found.entry(code).or_insert(m);
            if found.len() > caps.max_elements {
                return Err(Error::cap("reduced model enumeration", caps.max_elements));
            }
            stack.push(x);
            go(u, x + 1, stack, next, max_points, caps, found)?;
            stack.pop();
        }
        Ok(())
    }
    go(
        u,
        0,
        &mut stack,
        f.empty_set(),
        max_points,
        caps,
        &mut found,
    )?;
    let mut models: Vec<KripkeModel> = found.into_values().collect();
    models.sort_by_key(|m| m.len());
    Ok(models)
}

/// DOT rendering of a frame or poset; `labels` become node labels.
pub fn to_dot(poset: &Poset, labels: Option<&[String]>) -> String {
    let mut out = String::from("digraph {\n");
    for p in poset.points() {
        match labels {
            Some(l) => out.push_str(&format!(
                "  \"{}\" [label=\"{} {}\"];\n",
                poset.name(p),
                poset.name(p),
                l[p]
            )),
            None => out.push_str(&format!("  \"{}\";\n", poset.name(p))),
        }
    }
    for (lo, hi) in poset.covers() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            poset.name(lo),
            poset.name(hi)
        ));
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of a model with colours as `{x,y}` labels.
pub fn model_to_dot(u: &KripkeModel) -> String {
    let labels: Vec<String> = u
        .frame()
        .points()
        .map(|p| format!("{{{}}}", u.color_names(p).join(",")))
        .collect();
    to_dot(u.frame(), Some(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::terms::parse_term;

    fn h(s: &str) -> Term {
        parse_term(s, Some(Signature::Heyting)).unwrap()
    }

    fn c2_model() -> KripkeModel {
        KripkeModel::new(fixtures::c2(), vec!["x".into()], vec![1, 0]).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(KripkeModel::new(Poset::chain(1), vec!["x".into()], vec![1]).is_ok());
        c2_model();
        assert!(matches!(
            KripkeModel::new(fixtures::c2(), vec!["x".into()], vec![0, 1]),
            Err(Error::ColoringNotMonotone { .. })
        ));
    }

    #[test]
    fn forcing() {
        let one = KripkeModel::new(Poset::chain(1), vec!["x".into()], vec![1]).unwrap();
        assert!(one.forces(0, &h("x")).unwrap());
        assert!(!one.forces(0, &h("x -> 0")).unwrap());
        let u = c2_model();
        assert_eq!(u.truth_set(&h("x")).unwrap().to_vec(), vec![0]);
        assert!(u.truth_set(&h("x -> 0")).unwrap().is_empty());
        assert_eq!(
            u.truth_set(&h("(x -> 0) -> 0")).unwrap().to_vec(),
            vec![0, 1]
        );
        assert_eq!(u.truth_set(&h("1")).unwrap().len(), 2);
        assert_eq!(
            u.truth_set(&h("y")),
            Err(Error::UnknownVariable("y".into()))
        );
    }

    #[test]
    fn reduction() {
        let two = KripkeModel::new(Poset::antichain(2), vec!["x".into()], vec![1, 1]).unwrap();
        assert_eq!(two.bisim_reduce().0.len(), 1);
        assert!(c2_model().is_reduced());
        let chain = KripkeModel::new(Poset::chain(2), vec!["x".into()], vec![0, 0]).unwrap();
        assert!(!chain.is_reduced());
        assert_eq!(chain.bisim_reduce().0.len(), 1);
    }

    #[test]
    fn model_of_fixture_algebra() {
        let a = Algebra::new(fixtures::a2());
        let g = a.element_from_names(&["p"]).unwrap();
        let u = model_of_algebra(&a, &[g]).unwrap();
        assert_eq!(u.frame().covers(), vec![]);
        assert_eq!(u.color(0), 0);
        assert_eq!(u.color(1), 1);
    }

    #[test]
    fn definable_sets() {
        let one = KripkeModel::new(Poset::chain(1), vec!["x".into()], vec![1]).unwrap();
        assert_eq!(one.definable_sets(64).unwrap().len(), 2);
        assert_eq!(c2_model().definable_sets(64).unwrap().len(), 3);
        let caps = Caps::default();
        let u12 = universal_frame(1, 2, &caps).unwrap();
        assert_eq!(u12.model.definable_sets(64).unwrap().len(), 8);
    }

    #[test]
    fn universal_frames() {
        let caps = Caps::default();
        assert_eq!(universal_frame(1, 1, &caps).unwrap().len(), 2);
        let u = universal_frame(1, 2, &caps).unwrap();
        assert_eq!(u.model.frame().names(), &["w_0", "w_x", "v1", "v2"]);
        let fixture = KripkeModel::from_file(&fixtures::u12()).unwrap();
        assert_eq!(u.model, fixture);
        assert_eq!(universal_frame(2, 1, &caps).unwrap().len(), 4);
        assert_eq!(universal_frame(1, 3, &caps).unwrap().len(), 6);
        assert_eq!(universal_frame(2, 2, &caps).unwrap().census(), vec![4, 18]);
        assert_eq!(universal_frame(0, 4, &caps).unwrap().len(), 1);
        assert!(universal_frame(1, 3, &caps).unwrap().model.is_reduced());
        let small = Caps {
            max_nodes: 10,
            ..Caps::default()
        };
        match universal_frame(2, 2, &small) {
            Err(Error::SizeCap {
                partial: Some(p), ..
            }) => assert!(p.contains("[4, >=11]")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_quotients() {
        let caps = Caps::default();
        assert_eq!(free_quotient(1, 1, &caps).unwrap().algebra.size(), 4);
        let f12 = free_quotient(1, 2, &caps).unwrap();
        assert_eq!(f12.algebra.size(), 8);
        assert_eq!(f12.algebra.format(&f12.gens[0]), "{w_0,v1,v2}");
        assert_eq!(f12.generators_complete(1 << 10), Some(true));
        for d in 1..4 {
            assert_eq!(free_quotient(0, d, &caps).unwrap().algebra.size(), 2);
        }
        assert_eq!(free_quotient(2, 1, &caps).unwrap().algebra.size(), 16);
        assert_eq!(free_quotient(3, 0, &caps).unwrap().algebra.size(), 1);
    }

    #[test]
    fn free_epsilons() {
        let caps = Caps::default();
        let f12 = free_quotient(1, 2, &caps).unwrap();
        let e1 = free_epsilon(1, 2, 1, &caps).unwrap();
        assert_eq!(f12.algebra.format(&e1), "{v1,v2}");
        let e0 = free_epsilon(1, 2, 0, &caps).unwrap();
        assert_eq!(e0.points().len(), 4);
        let t = parse_term("x & (1\\x)", None).unwrap();
        assert_eq!(f12.algebra.format(&f12.eval(&t).unwrap()), "{v1,v2}");
    }

    #[test]
    fn projections() {
        let caps = Caps::default();
        let f11 = free_quotient(1, 1, &caps).unwrap();
        let f12 = free_quotient(1, 2, &caps).unwrap();
        let pi = projection_between(&f12, &f11).unwrap();
        assert_eq!(pi.apply(&f12.gens[0]).unwrap(), f11.gens[0]);
        assert!(pi.apply(&f12.algebra.epsilon(1)).unwrap().is_bottom());
        assert_eq!(pi.kernel().generator(), &f12.algebra.epsilon(1));
        assert!(projection(1, 1, &caps).is_ok());
        let f21 = free_quotient(2, 1, &caps).unwrap();
        assert!(matches!(
            projection_between(&f21, &f12),
            Err(Error::FrameMismatch(_))
        ));
    }

    #[test]
    fn d_equivalence() {
        let caps = Caps::default();
        let lem = h("x | (x -> 0)");
        assert!(d_equivalent(&lem, &h("1"), 1, 1, &caps).unwrap());
        assert!(!d_equivalent(&lem, &h("1"), 1, 2, &caps).unwrap());
        assert!(d_equivalent(&lem, &lem, 1, 3, &caps).unwrap());
        assert!(d_equivalent_by_models(&lem, &h("1"), 1, 1, 4, &caps).unwrap());
        assert!(!d_equivalent_by_models(&lem, &h("1"), 1, 2, 4, &caps).unwrap());
    }

    #[test]
    fn reduced_model_enumeration() {
        let caps = Caps::default();
        let ms = enumerate_reduced_models(1, 1, 8, &caps).unwrap();
        assert_eq!(ms.len(), 3);
        assert!(ms.iter().all(|m| m.len() <= 2 && m.is_reduced()));
        assert_eq!(enumerate_reduced_models(0, 1, 8, &caps).unwrap().len(), 1);
    }

    #[test]
    fn dot_export() {
        let dot = to_dot(&fixtures::c2(), None);
        assert_eq!(dot.matches("->").count(), 1);
        let u = universal_frame(1, 2, &Caps::default()).unwrap();
        let dot = model_to_dot(&u.model);
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("\"w_x\" -> \"v1\""));
        assert_eq!(to_dot(&Poset::antichain(0), None), "digraph {\n}\n");
    }
}
