//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints its own PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use coheyting::caps::Caps;
use coheyting::fixtures;
use coheyting::fmp::{fmp_search, Outcome};
use coheyting::kripke::{enumerate_reduced_models, free_quotient, universal_frame, KripkeModel};
use coheyting::metric::{distance, make_tower, FamilyDistance, Tower, TowerSource};
use coheyting::terms::parse_formula;
use coheyting::verify::{check_case, run_suite, Case, Config};
use coheyting::{Algebra, Morphism, Poset};

type Verdict = Result<String, String>;

fn suite(name: &str, budget: usize, max_points: usize) -> Verdict {
    let cfg = Config {
        seed: 20240501,
        budget,
        max_points,
        ..Config::default()
    };
    let r = run_suite(name, &cfg).map_err(|e| format!("{name}: {e}"))?;
    if r.passed() {
        Ok(r.summary())
    } else {
        Err(r.render())
    }
}

fn all(parts: Vec<Verdict>) -> Verdict {
    let mut ok = Vec::new();
    for p in parts {
        ok.push(p?);
    }
    Ok(ok.join("; "))
}

fn fixture_posets() -> Vec<(&'static str, Poset)> {
    vec![
        ("c2", fixtures::c2()),
        ("a2", fixtures::a2()),
        ("v3", fixtures::v3()),
        (
            "u12",
            KripkeModel::from_file(&fixtures::u12())
                .unwrap()
                .frame()
                .dual(),
        ),
    ]
}

fn caps() -> Caps {
    Caps::default()
}

/// Sizes of F(n, d) by counting downsets of the dual of the universal
/// frame and, independently, by closing the generators under the
/// operations.
fn free_sizes() -> Verdict {
    let expected: &[(usize, usize, u128)] = &[
        (0, 1, 2),
        (0, 2, 2),
        (0, 3, 2),
        (1, 1, 4),
        (1, 2, 8),
        (2, 1, 16),
    ];
    let mut seen = Vec::new();
    for &(n, d, want) in expected {
        let fq = free_quotient(n, d, &caps()).map_err(|e| e.to_string())?;
        let downsets = fq.algebra.size();
        let closure = fq
            .algebra
            .subalgebra_generated(&fq.gens, caps().max_elements)
            .map_err(|e| e.to_string())?
            .len() as u128;
        if downsets != want || closure != want {
            return Err(format!(
                "F({n},{d}): downsets {downsets}, closure {closure}, expected {want}"
            ));
        }
        seen.push(format!("F({n},{d})={want}"));
    }
    Ok(seen.join(" "))
}

fn fibers_on_fixtures() -> Verdict {
    let cfg = Config::default();
    for (name, p) in fixture_posets() {
        let case = Case {
            poset: p,
            elements: vec![],
            term: None,
            params: vec![],
        };
        for s in ["quotient-fiber", "join-irr"] {
            check_case(s, &case, &cfg)
                .unwrap()
                .map_err(|e| format!("{s} on fixture {name}: {e}"))?;
        }
    }
    Ok("fixtures c2 a2 v3 u12".into())
}

/// Contraction on every pair and ε_d preservation for every d.
fn morphism_ok(phi: &Morphism, what: &str) -> Result<usize, String> {
    let src = phi.src();
    let els = src
        .elements(caps().max_elements)
        .map_err(|e| e.to_string())?;
    let imgs: Vec<_> = els.iter().map(|x| phi.apply(x).unwrap()).collect();
    let mut pairs = 0;
    for i in 0..els.len() {
        for j in i..els.len() {
            let before = distance(src, &els[i], &els[j]).unwrap();
            let after = distance(phi.dst(), &imgs[i], &imgs[j]).unwrap();
            if after > before {
                return Err(format!(
                    "{what}: {} , {} at distance {before} map to distance {after}",
                    src.format(&els[i]),
                    src.format(&els[j])
                ));
            }
            pairs += 1;
        }
    }
    let h = src.spec().height().map_or(0, |h| h + 1);
    for d in 0..=h + 1 {
        if !phi.check_dl_preserved(d).ok() {
            return Err(format!("{what}: ε_{d} not preserved"));
        }
    }
    Ok(pairs)
}

fn morphism_metrics() -> Verdict {
    let mut pairs = 0;
    let mut maps = 0;
    let mut towers: Vec<(String, Tower)> = Vec::new();
    for (name, p) in fixture_posets() {
        let alg = Algebra::new(p);
        for e in alg.elements(caps().max_elements).unwrap() {
            let (_, pi) = alg.quotient_by(&e).map_err(|x| x.to_string())?;
            pairs += morphism_ok(&pi, &format!("{name}/{}", alg.format(&e)))?;
            maps += 1;
        }
        let t = make_tower(&TowerSource::Finite(alg), 3, &caps()).map_err(|e| e.to_string())?;
        towers.push((name.to_string(), t));
    }
    let free = make_tower(&TowerSource::Free(1), 3, &caps()).map_err(|e| e.to_string())?;
    towers.push(("F(1,·)".into(), free));
    for (name, t) in &towers {
        for d in 0..t.depth() {
            pairs += morphism_ok(t.map(d), &format!("{name} tower map {d}"))?;
            maps += 1;
        }
    }
    Ok(format!("{maps} maps, {pairs} pairs"))
}

fn tower_completion() -> Verdict {
    const D: usize = 3;
    let t = make_tower(&TowerSource::Free(1), D, &caps()).map_err(|e| e.to_string())?;
    let fqs = t.free_levels().unwrap();
    let top = t.top();
    let els = top.elements(caps().max_elements).unwrap();
    // lift then project equals projecting step by step.
    for a in &els {
        let fam = t.lift(a).map_err(|e| e.to_string())?;
        let mut x = a.clone();
        for d in (0..D).rev() {
            x = t.map(d).apply(&x).unwrap();
            if &x != fam.component(d) {
                return Err(format!(
                    "lift of {} does not commute at level {d}",
                    top.format(a)
                ));
            }
        }
    }
    // ε-families are the level-wise ε's, and ε_d of the top lifts to them.
    for e in 0..=D + 1 {
        let fam = t.epsilon_family(e);
        let lifted = t.lift(&top.epsilon(e)).unwrap();
        for k in 0..=D {
            if fam.component(k) != &t.level(k).epsilon(e) || lifted.component(k) != fam.component(k)
            {
                return Err(format!("ε_{e} differs at level {k}"));
            }
        }
    }
    let g = &fqs[D].gens[0];
    let lg = t.lift(g).unwrap();
    // The sequence g ∨ ε_k; ε_k vanishes from level k on.
    let seq: Vec<_> = (1..=D + 1)
        .map(|k| t.lift(&top.join(g, &top.epsilon(k)).unwrap()).unwrap())
        .collect();
    let lim = t.cauchy_limit(&seq).map_err(|e| e.to_string())?;
    if lim != lg {
        return Err("cauchy_limit of lift(g ∨ ε_k) is not lift(g)".into());
    }
    let moved = seq.iter().filter(|f| **f != lg).count();
    // A sequence that really moves: (g − ε_1) ∨ ε_k converges to g − ε_1.
    let h = top.diff(g, &top.epsilon(1)).unwrap();
    let pert: Vec<_> = (1..=D + 1)
        .map(|k| t.lift(&top.join(&h, &top.epsilon(k)).unwrap()).unwrap())
        .collect();
    let lh = t.lift(&h).unwrap();
    if t.cauchy_limit(&pert).map_err(|e| e.to_string())? != lh || pert[0] == lh {
        return Err("perturbed sequence does not converge to lift(g − ε_1)".into());
    }
    // ε_k vanishes at levels ≤ k, so the k-th term agrees with the limit there.
    for (i, f) in pert.iter().enumerate() {
        let k = i + 1;
        let ok = match t.family_distance(f, &lh) {
            FamilyDistance::Exact(x) => x >= k,
            FamilyDistance::AtMost(_) => true,
        };
        if !ok {
            return Err(format!(
                "term {k} is at distance {}",
                t.family_distance(f, &lh)
            ));
        }
    }
    Ok(format!(
        "D={D}, sizes {:?}, g∨ε_k differs from g in {moved} terms",
        t.levels().iter().map(|l| l.size()).collect::<Vec<_>>()
    ))
}

/// Rank censuses of reduced models against 2^n and 2^n·ν_k, where ν_k
/// counts reduced models with at most k layers.
fn counting_bounds() -> Verdict {
    let mut out = Vec::new();
    for n in 0..=2usize {
        for d in 1..=2usize {
            let uf = universal_frame(n, d, &caps()).map_err(|e| e.to_string())?;
            let census = uf.census();
            let nu1 = enumerate_reduced_models(n, 1, usize::MAX, &caps())
                .unwrap()
                .len();
            if census[0] > 1 << n {
                return Err(format!("U({n},{d}) has {} minimal points", census[0]));
            }
            if census.get(1).is_some_and(|&c| c > (1 << n) * nu1) {
                return Err(format!(
                    "U({n},2) has {} points of rank 1 > 2^{n}·{nu1}",
                    census[1]
                ));
            }
            for m in enumerate_reduced_models(n, d, 1 + (1 << n), &caps()).unwrap() {
                let f = m.frame();
                let r0 = f.points().filter(|&p| f.rank(p) == 0).count();
                let r1 = f.points().filter(|&p| f.rank(p) == 1).count();
                if r0 > 1 << n || r1 > (1 << n) * nu1 {
                    return Err(format!(
                        "a reduced model over {n} variables breaks the bound"
                    ));
                }
            }
            out.push(format!("U({n},{d})={census:?}"));
        }
    }
    Ok(out.join(" "))
}

fn fmp() -> Verdict {
    let limit = Duration::from_secs(10);
    let start = Instant::now();
    let yes = parse_formula("x & (1\\x) != 0").unwrap();
    let found = match fmp_search(&yes, 5, 100_000, &caps()).map_err(|e| e.to_string())? {
        Outcome::Found(w) if w.poset().len() <= 2 => w.poset().len(),
        other => return Err(format!("expected a witness on ≤ 2 points, got {other:?}")),
    };
    let t1 = start.elapsed();
    let start = Instant::now();
    let no = parse_formula("x \\ x != 0").unwrap();
    match fmp_search(&no, 5, 100_000, &caps()).map_err(|e| e.to_string())? {
        Outcome::NoneUpToCap {
            truncated: false, ..
        } => {}
        other => return Err(format!("expected no witness, got {other:?}")),
    }
    let t2 = start.elapsed();
    if t1 > limit || t2 > limit {
        return Err(format!("too slow: {t1:?}, {t2:?}"));
    }
    Ok(format!(
        "witness on {found} points in {t1:.2?}; none up to 5 points in {t2:.2?}"
    ))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("1 free-quotient sizes by two routes", free_sizes),
        ("2 dim = rank, codim = corank on posets ≤ 6", || {
            suite("dim-rank", 0, 6)
        }),
        ("3 slice equivalence, d ≤ 3", || suite("slice", 0, 7)),
        ("4 identities, triangle, ultrametric, codim-join", || {
            all(vec![
                suite("s2-identities", 10_000, 7),
                suite("sym-diff-triangle", 10_000, 7),
                suite("ultrametric", 10_000, 7),
                suite("codim-join", 10_000, 7),
            ])
        }),
        ("5 duality round trip", || suite("duality", 1000, 6)),
        ("6 quotient fibers and irreducible bijections", || {
            all(vec![
                suite("quotient-fiber", 0, 6),
                suite("join-irr", 0, 6),
                fibers_on_fixtures(),
            ])
        }),
        ("7 morphisms contract and preserve ε_d", morphism_metrics),
        ("8 F(1,·) tower at depth 3", tower_completion),
        ("9 counting bounds, n ≤ 2, d ≤ 2", counting_bounds),
        ("10 finite model search", fmp),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        match f() {
            Ok(detail) => println!("PASS criterion {name} ({:.2?}): {detail}", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({:.2?}): {why}", t.elapsed());
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.2?}", start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
