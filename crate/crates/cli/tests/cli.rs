use std::process::Command;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary; returns (exit code, stdout).
fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coheyting"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?}: {out}");
    out
}

#[test]
fn algebra_queries_on_the_two_chain() {
    let c2 = fixture("c2.poset");
    assert_eq!(ok(&["alg", "dim", &c2]), "1\n");
    assert_eq!(ok(&["alg", "epsilon", "1", &c2]), "{p0}\n");
    assert_eq!(ok(&["alg", "codim", "{p0}", &c2]), "1\n");
    assert_eq!(ok(&["alg", "codim", "{}", &c2]), "+inf\n");
    assert_eq!(ok(&["alg", "dim", "{}", &c2]), "-inf\n");
    // Terms over point names denote principal downsets.
    assert_eq!(ok(&["alg", "codim", "p1 \\ p0", &c2]), "0\n");
    assert_eq!(ok(&["alg", "size", "c2"]), "3\n");
}

#[test]
fn irreducibles_and_conjugates() {
    let v3 = fixture("v3.poset");
    let out = ok(&["alg", "irr", &v3]);
    assert!(
        out.contains("join irreducible: {p0} {p0,p1} {p0,p2}"),
        "{out}"
    );
    assert_eq!(ok(&["alg", "conj", "{p0,p1}", &v3]), "{p0,p2}\n");
    assert_eq!(ok(&["alg", "conj", "{p0,p2}", &v3]), "{p0,p1}\n");
    let q = ok(&["alg", "quotient", "{p0,p1}", &v3]);
    assert!(q.contains("points: p2"), "{q}");
}

#[test]
fn free_quotients() {
    assert_eq!(ok(&["free", "size", "1", "2"]), "8\n");
    assert_eq!(ok(&["free", "epsilon", "1", "2", "1"]), "{v1,v2}\n");
    assert_eq!(ok(&["free", "size", "0", "3"]), "2\n");
    assert_eq!(ok(&["free", "size", "2", "1"]), "16\n");
    let p = ok(&["free", "project", "1", "1"]);
    assert_eq!(p, "w_0 -> w_0\nw_x -> w_x\n");
}

#[test]
fn bounded_depth_equivalence() {
    assert_eq!(ok(&["equiv", "x | (x->0)", "1", "1", "1"]), "yes\n");
    assert_eq!(ok(&["equiv", "x | (x->0)", "1", "1", "2"]), "no\n");
    assert_eq!(ok(&["equiv", "x -> y", "x -> y", "2", "2"]), "yes\n");
}

#[test]
fn finite_model_search() {
    let out = ok(&["fmp-search", "x & (1\\x) != 0", "3", "100"]);
    assert_eq!(out, "points: p0 p1\ncovers: p0<p1\n# x = {p0}\n");
    assert!(ok(&["fmp-search", "x \\ x != 0", "5", "1000"]).starts_with("none up to 5 points"));
    assert!(ok(&["fmp-search", "1 = 0", "5", "10"]).starts_with("none up to 5 points"));
}

#[test]
fn kripke_commands() {
    let u = fixture("u12.model");
    assert_eq!(ok(&["kripke", "force", "x", &u]), "{w_x}\n");
    assert_eq!(
        ok(&["kripke", "force", "x | (x -> 0)", &u, "--at", "v2"]),
        "no\n"
    );
    assert_eq!(
        ok(&["kripke", "force", "x | (x -> 0)", &u, "--at", "w_0"]),
        "yes\n"
    );
    assert!(ok(&["kripke", "reduce", &u]).starts_with("# 4 points reduce to 4"));
    let r = ok(&["kripke", "universal", "2", "2", "--format", "records"]);
    assert_eq!(r, "layer 1: size 4\nlayer 2: size 18\n");
    let m = ok(&["kripke", "models", "1", "1", "--format", "records"]);
    assert_eq!(m.lines().count(), 3);
}

#[test]
fn terms() {
    assert_eq!(ok(&["terms", "parse", "(x & y) | z"]), "x & y | z\n");
    assert_eq!(ok(&["terms", "dual", "x \\ y"]), "y -> x\n");
    let c2 = fixture("c2.poset");
    assert_eq!(
        ok(&["terms", "eval", "1 \\ x", &c2, "--let", "x={p0}"]),
        "{p0,p1}\n"
    );
    let (code, _) = run(&["terms", "parse", "x \\ (y -> z)"]);
    assert_eq!(code, 2);
}

#[test]
fn tower_records() {
    let census = ok(&[
        "tower", "census", "--free", "1", "--depth", "2", "--format", "records",
    ]);
    assert_eq!(
        census,
        "level 0: size 1\nlevel 1: size 4\nlevel 2: size 8\n"
    );
    let lift = ok(&[
        "tower",
        "lift",
        "{p0}",
        "--file",
        &fixture("c2.poset"),
        "--depth",
        "2",
        "--format",
        "records",
    ]);
    assert_eq!(
        lift,
        "component 0: {}\ncomponent 1: {}\ncomponent 2: {p0}\n"
    );
    let lim = ok(&[
        "tower", "limit", "x", "x", "--free", "1", "--depth", "2", "--format", "records",
    ]);
    assert_eq!(lim.lines().count(), 3);
    let (code, _) = run(&["tower", "limit", "x", "{}", "--free", "1", "--depth", "2"]);
    assert_eq!(code, 1);
}

#[test]
fn dot_export() {
    let c2 = ok(&["export", "dot", &fixture("c2.poset")]);
    assert_eq!(c2.matches("->").count(), 1);
    let u = ok(&["export", "dot", "--universal", "1", "2"]);
    assert_eq!(u.matches("->").count(), 3);
    assert_eq!(u.matches("label=").count(), 4);
    let dir = std::env::temp_dir().join(format!("coheyting-empty-{}", std::process::id()));
    std::fs::write(&dir, "points:\n").unwrap();
    assert_eq!(
        ok(&["export", "dot", dir.to_str().unwrap()]),
        "digraph {\n}\n"
    );
    std::fs::remove_file(dir).unwrap();
}

#[test]
fn verify_suites() {
    let list = ok(&["verify", "--list", "--format", "records"]);
    assert_eq!(list.lines().count(), 17);
    assert!(list.lines().any(|l| l == "s2-identities"));
    let out = ok(&["verify", "s2-identities", "--seed", "7"]);
    assert!(out.contains("0 failures"), "{out}");
    let out = ok(&["verify", "dim-rank", "--max-points", "6"]);
    assert!(out.starts_with("dim-rank: 405 cases, 0 failures"), "{out}");
    let (code, _) = run(&["verify", "no-such-suite"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_is_deterministic_and_replays() {
    let a = ok(&["verify", "duality", "--seed", "3", "--budget", "50"]);
    let b = ok(&["verify", "duality", "--seed", "3", "--budget", "50"]);
    let strip = |s: &str| s.split(" (").next().unwrap().to_string();
    assert_eq!(strip(&a), strip(&b));
    let path = std::env::temp_dir().join(format!("coheyting-case-{}", std::process::id()));
    std::fs::write(
        &path,
        "suite: ultrametric\npoints: p0 p1\ncovers: p0<p1\nelements: {p0} {} {p0,p1}\n",
    )
    .unwrap();
    assert_eq!(
        ok(&["verify", "--replay", path.to_str().unwrap()]),
        "ultrametric: case holds\n"
    );
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["alg", "dim", "missing.poset"]).0, 2);
    assert_eq!(run(&["alg", "codim", "{p7}", &fixture("c2.poset")]).0, 2);
    assert_eq!(run(&["free", "size", "2", "3", "--max-nodes", "100"]).0, 3);
    assert_eq!(run(&["poset", "check", &fixture("v3.poset")]).0, 0);
}
