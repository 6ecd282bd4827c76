mod input;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coheyting::caps::Caps;
use coheyting::fmp::{fmp_search, Outcome};
use coheyting::kripke::{
    d_equivalent, enumerate_reduced_models, free_epsilon, free_quotient, model_to_dot, projection,
    to_dot, universal_frame, KripkeModel,
};
use coheyting::metric::{make_tower, precompactness_census, Tower, TowerSource};
use coheyting::poset::text::write;
use coheyting::terms::{dualize, parse_formula, parse_term, Signature};
use coheyting::verify::{self, Config};
use coheyting::{Algebra, Error};

use input::{element, free_element, load, load_model, InputError};

#[derive(Parser)]
#[command(
    name = "coheyting",
    version,
    about = "Finite co-Heyting algebras, their dimension theory and completions"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest poset for enumeration (suites and model search).
    #[arg(long, global = true)]
    max_points: Option<usize>,
    /// Largest universal frame, in points.
    #[arg(long, global = true)]
    max_nodes: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

impl Global {
    fn caps(&self) -> Caps {
        let mut caps = Caps::default();
        if let Some(n) = self.max_points {
            caps.max_points = caps.max_points.max(n);
        }
        if let Some(n) = self.max_nodes {
            caps.max_nodes = n;
        }
        caps
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate or describe a poset file.
    #[command(subcommand)]
    Poset(PosetCmd),
    /// Queries on the algebra of downsets of a poset file.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Parse, dualize and evaluate terms.
    #[command(subcommand)]
    Terms(TermsCmd),
    /// Kripke models and universal frames.
    #[command(subcommand)]
    Kripke(KripkeCmd),
    /// The free algebras F(n, d) on n generators, truncated at depth d.
    #[command(subcommand)]
    Free(FreeCmd),
    /// Whether two Heyting terms agree on all models with at most d layers.
    Equiv {
        t1: String,
        t2: String,
        n: usize,
        d: usize,
    },
    /// Towers of quotients by ε_d and coherent families.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Search small algebras for a witness of a quantifier-free formula.
    FmpSearch {
        formula: String,
        max_points: usize,
        max_assignments: usize,
    },
    /// Run property suites.
    Verify {
        /// Suites to run; all when omitted.
        suites: Vec<String>,
        #[arg(long)]
        list: bool,
        /// Random cases per randomized suite.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Re-check a stored counterexample file.
        #[arg(long)]
        replay: Option<String>,
        /// Write each minimized counterexample to this directory.
        #[arg(long)]
        save: Option<String>,
    },
    /// Diagram export.
    #[command(subcommand)]
    Export(ExportCmd),
}

#[derive(Subcommand)]
enum PosetCmd {
    Check { file: String },
    Show { file: String },
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Dimension of the algebra, or of an element: `dim [ELEM] FILE`.
    Dim {
        #[arg(num_args = 1..=2, required = true)]
        args: Vec<String>,
    },
    Codim {
        elem: String,
        file: String,
    },
    /// The generator ε_d of the ideal of codimension ≥ d.
    Epsilon {
        d: usize,
        file: String,
    },
    /// Join and meet irreducibles.
    Irr {
        file: String,
    },
    /// The quotient by the ideal generated by an element, as a poset.
    Quotient {
        elem: String,
        file: String,
    },
    Jsupp {
        elem: String,
        file: String,
    },
    Msupp {
        elem: String,
        file: String,
    },
    /// Conjugate of an irreducible: join irreducibles go up, meet
    /// irreducibles go down.
    Conj {
        elem: String,
        file: String,
    },
    Size {
        file: String,
    },
    Elements {
        file: String,
    },
}

#[derive(Subcommand)]
enum TermsCmd {
    Parse {
        term: String,
        #[arg(long, value_enum)]
        sig: Option<Sig>,
    },
    Dual {
        term: String,
    },
    /// Evaluate a co-Heyting term; unassigned variables are point names.
    Eval {
        term: String,
        file: String,
        /// `var=ELEM`, repeatable.
        #[arg(long = "let", value_name = "VAR=ELEM")]
        assign: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sig {
    Coheyting,
    Heyting,
}

#[derive(Subcommand)]
enum KripkeCmd {
    /// Truth set of a Heyting term, or whether one point forces it.
    Force {
        term: String,
        model: String,
        #[arg(long)]
        at: Option<String>,
    },
    /// The bisimulation quotient.
    Reduce { model: String },
    /// The universal frame U(n, d).
    Universal { n: usize, d: usize },
    /// Reduced models with at most d layers, up to isomorphism.
    Models { n: usize, d: usize },
}

#[derive(Subcommand)]
enum FreeCmd {
    Size {
        n: usize,
        d: usize,
    },
    /// ε_e of F(n, d).
    Epsilon {
        n: usize,
        d: usize,
        e: usize,
    },
    /// The projection F(n, d+1) → F(n, d), as its dual map.
    Project {
        n: usize,
        d: usize,
    },
}

#[derive(Args)]
struct Source {
    /// Tower of F(n, ·).
    #[arg(long, conflicts_with = "file")]
    free: Option<usize>,
    /// Tower of quotients of a finite algebra.
    #[arg(long)]
    file: Option<String>,
    #[arg(long, default_value_t = 3)]
    depth: usize,
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Sizes of the levels.
    Census {
        #[command(flatten)]
        src: Source,
    },
    /// The coherent family of an element of the top level.
    Lift {
        elem: String,
        #[command(flatten)]
        src: Source,
    },
    /// Limit of a sequence of lifted elements.
    Limit {
        elems: Vec<String>,
        #[command(flatten)]
        src: Source,
    },
}

#[derive(Subcommand)]
enum ExportCmd {
    /// A poset or model file, or `--universal N D`.
    Dot {
        file: Option<String>,
        #[arg(long, num_args = 2, value_names = ["N", "D"])]
        universal: Option<Vec<usize>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<Error>() {
                Some(
                    Error::NotCauchyAtDepth(_)
                    | Error::NotSqueezed { .. }
                    | Error::LimitsDiffer
                    | Error::SequenceNotMonotone(_),
                ) => 1,
                _ => input::exit_code(&e),
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    let caps = g.caps();
    match &cli.cmd {
        Cmd::Poset(c) => poset_cmd(c),
        Cmd::Alg(c) => alg_cmd(c, g),
        Cmd::Terms(c) => terms_cmd(c),
        Cmd::Kripke(c) => kripke_cmd(c, g, &caps),
        Cmd::Free(c) => free_cmd(c, &caps),
        Cmd::Equiv { t1, t2, n, d } => {
            let t1 = parse_term(t1, Some(Signature::Heyting))?;
            let t2 = parse_term(t2, Some(Signature::Heyting))?;
            let same = d_equivalent(&t1, &t2, *n, *d, &caps)?;
            println!("{}", if same { "yes" } else { "no" });
            Ok(0)
        }
        Cmd::Tower(c) => tower_cmd(c, g, &caps),
        Cmd::FmpSearch {
            formula,
            max_points,
            max_assignments,
        } => {
            let theta = parse_formula(formula)?;
            match fmp_search(&theta, *max_points, *max_assignments, &caps)? {
                Outcome::Found(w) => print!("{}", w.certificate()),
                Outcome::NoneUpToCap {
                    max_points,
                    assignments,
                    truncated,
                } => {
                    let note = if truncated {
                        ", assignment cap reached"
                    } else {
                        ""
                    };
                    println!("none up to {max_points} points ({assignments} assignments{note})");
                }
            }
            Ok(0)
        }
        Cmd::Verify {
            suites,
            list,
            budget,
            replay,
            save,
        } => verify_cmd(
            g,
            &caps,
            suites,
            *list,
            *budget,
            replay.as_deref(),
            save.as_deref(),
        ),
        Cmd::Export(ExportCmd::Dot { file, universal }) => {
            let dot = match (file, universal) {
                (_, Some(nd)) => model_to_dot(&universal_frame(nd[0], nd[1], &caps)?.model),
                (Some(f), None) => {
                    let pf = load(f)?;
                    if pf.colors.is_some() {
                        model_to_dot(&KripkeModel::from_file(&pf)?)
                    } else {
                        to_dot(&pf.poset, None)
                    }
                }
                (None, None) => bail!(InputError("give a file or --universal N D".into())),
            };
            print!("{dot}");
            Ok(0)
        }
    }
}

fn poset_cmd(c: &PosetCmd) -> Result<u8> {
    match c {
        PosetCmd::Check { file } => {
            let p = load(file)?.poset;
            println!("ok: {} points, {} covers", p.len(), p.covers().len());
        }
        PosetCmd::Show { file } => {
            let pf = load(file)?;
            let p = &pf.poset;
            print!(
                "{}",
                write(
                    p,
                    Some(&pf.vars).filter(|v| !v.is_empty()).map(|v| &v[..]),
                    pf.colors.as_deref()
                )
            );
            for x in p.points() {
                println!(
                    "# {}: rank {}, corank {}",
                    p.name(x),
                    p.rank(x),
                    p.corank(x)
                );
            }
            println!("# downsets: {}", p.count_downsets());
        }
    }
    Ok(0)
}

fn algebra(file: &str) -> Result<Algebra> {
    Ok(Algebra::new(load(file)?.poset))
}

fn list(alg: &Algebra, xs: &[coheyting::Element]) -> String {
    xs.iter()
        .map(|x| alg.format(x))
        .collect::<Vec<_>>()
        .join(" ")
}

fn alg_cmd(c: &AlgCmd, g: &Global) -> Result<u8> {
    match c {
        AlgCmd::Dim { args } => {
            let alg = algebra(args.last().unwrap())?;
            match &args[..] {
                [_] => println!("{}", alg.dim_algebra()),
                [e, _] => println!("{}", alg.dim(&element(&alg, e)?)),
                _ => unreachable!(),
            }
        }
        AlgCmd::Codim { elem, file } => {
            let alg = algebra(file)?;
            println!("{}", alg.codim(&element(&alg, elem)?));
        }
        AlgCmd::Epsilon { d, file } => {
            let alg = algebra(file)?;
            println!("{}", alg.format(&alg.epsilon(*d)));
        }
        AlgCmd::Irr { file } => {
            let alg = algebra(file)?;
            let (j, m) = (alg.join_irreducibles(), alg.meet_irreducibles());
            match g.format {
                Format::Text => {
                    println!("join irreducible: {}", list(&alg, &j));
                    println!("meet irreducible: {}", list(&alg, &m));
                }
                Format::Records => {
                    for x in &j {
                        println!("join: {}", alg.format(x));
                    }
                    for x in &m {
                        println!("meet: {}", alg.format(x));
                    }
                }
            }
        }
        AlgCmd::Quotient { elem, file } => {
            let alg = algebra(file)?;
            let (q, _) = alg.quotient_by(&element(&alg, elem)?)?;
            print!("{}", write(q.spec(), None, None));
        }
        AlgCmd::Jsupp { elem, file } => {
            let alg = algebra(file)?;
            println!("{}", list(&alg, &alg.jsupp(&element(&alg, elem)?)?));
        }
        AlgCmd::Msupp { elem, file } => {
            let alg = algebra(file)?;
            println!("{}", list(&alg, &alg.msupp(&element(&alg, elem)?)?));
        }
        AlgCmd::Conj { elem, file } => {
            let alg = algebra(file)?;
            let x = element(&alg, elem)?;
            let y = if alg.join_irreducibles().contains(&x) {
                alg.conj_up(&x)?
            } else {
                alg.conj_down(&x)?
            };
            println!("{}", alg.format(&y));
        }
        AlgCmd::Size { file } => println!("{}", algebra(file)?.size()),
        AlgCmd::Elements { file } => {
            let alg = algebra(file)?;
            for x in alg.elements(g.caps().max_elements)? {
                match g.format {
                    Format::Text => println!(
                        "{}  codim {}  dim {}",
                        alg.format(&x),
                        alg.codim(&x),
                        alg.dim(&x)
                    ),
                    Format::Records => println!("element: {}", alg.format(&x)),
                }
            }
        }
    }
    Ok(0)
}

fn terms_cmd(c: &TermsCmd) -> Result<u8> {
    match c {
        TermsCmd::Parse { term, sig } => {
            let sig = sig.map(|s| match s {
                Sig::Coheyting => Signature::CoHeyting,
                Sig::Heyting => Signature::Heyting,
            });
            println!("{}", parse_term(term, sig)?);
        }
        TermsCmd::Dual { term } => println!("{}", dualize(&parse_term(term, None)?)),
        TermsCmd::Eval { term, file, assign } => {
            let alg = algebra(file)?;
            let mut env = std::collections::BTreeMap::new();
            for a in assign {
                let Some((v, e)) = a.split_once('=') else {
                    bail!(InputError(format!("expected VAR=ELEM, got `{a}`")));
                };
                env.insert(v.trim().to_string(), element(&alg, e)?);
            }
            let t = parse_term(term, Some(Signature::CoHeyting))?;
            let spec = alg.spec();
            let v = coheyting::terms::eval_with(&t, &alg, &|name| {
                env.get(name)
                    .cloned()
                    .or_else(|| spec.index_of(name).map(|p| alg.principal(p)))
            })?;
            println!("{}", alg.format(&v));
        }
    }
    Ok(0)
}

fn kripke_cmd(c: &KripkeCmd, g: &Global, caps: &Caps) -> Result<u8> {
    match c {
        KripkeCmd::Force { term, model, at } => {
            let u = load_model(model)?;
            let t = parse_term(term, Some(Signature::Heyting))?;
            match at {
                Some(p) => {
                    let Some(i) = u.frame().index_of(p) else {
                        bail!(Error::UnknownPoint(p.clone()));
                    };
                    println!("{}", if u.forces(i, &t)? { "yes" } else { "no" });
                }
                None => println!("{}", u.frame().format_set(&u.truth_set(&t)?)),
            }
        }
        KripkeCmd::Reduce { model } => {
            let u = load_model(model)?;
            let (r, _) = u.bisim_reduce();
            println!("# {} points reduce to {}", u.len(), r.len());
            print!("{}", r.to_text());
        }
        KripkeCmd::Universal { n, d } => {
            let uf = universal_frame(*n, *d, caps)?;
            match g.format {
                Format::Text => {
                    println!("# layer sizes {:?}", uf.census());
                    print!("{}", uf.model.to_text());
                }
                Format::Records => {
                    for (k, s) in uf.census().iter().enumerate() {
                        println!("layer {}: size {s}", k + 1);
                    }
                }
            }
        }
        KripkeCmd::Models { n, d } => {
            let max = g.max_points.unwrap_or(1 + (1 << n));
            let models = enumerate_reduced_models(*n, *d, max, caps)?;
            match g.format {
                Format::Text => {
                    println!(
                        "# {} reduced models with at most {max} points",
                        models.len()
                    );
                    for m in &models {
                        println!("---");
                        print!("{}", m.to_text());
                    }
                }
                Format::Records => {
                    for (i, m) in models.iter().enumerate() {
                        println!("model {i}: points {}", m.len());
                    }
                }
            }
        }
    }
    Ok(0)
}

fn free_cmd(c: &FreeCmd, caps: &Caps) -> Result<u8> {
    match c {
        FreeCmd::Size { n, d } => println!("{}", free_quotient(*n, *d, caps)?.algebra.size()),
        FreeCmd::Epsilon { n, d, e } => {
            let fq = free_quotient(*n, *d, caps)?;
            println!("{}", fq.algebra.format(&free_epsilon(*n, *d, *e, caps)?));
        }
        FreeCmd::Project { n, d } => {
            let pi = projection(*n, *d, caps)?;
            let (src, dst) = (pi.src().spec(), pi.dst().spec());
            for (q, &p) in pi.dual_map().iter().enumerate() {
                println!("{} -> {}", dst.name(q), src.name(p));
            }
        }
    }
    Ok(0)
}

fn tower(src: &Source, caps: &Caps) -> Result<Tower> {
    let source = match (&src.free, &src.file) {
        (Some(n), None) => TowerSource::Free(*n),
        (None, Some(f)) => TowerSource::Finite(algebra(f)?),
        _ => bail!(InputError(
            "give exactly one of --free N or --file FILE".into()
        )),
    };
    Ok(make_tower(&source, src.depth, caps)?)
}

fn top_element(t: &Tower, text: &str) -> Result<coheyting::Element> {
    match (t.free_levels(), t.base()) {
        (Some(fqs), _) => {
            let top = &fqs[t.depth()];
            free_element(&top.algebra, &top.gens, text)
        }
        (None, Some((base, _))) => element(base, text),
        _ => unreachable!("towers have a free or a finite source"),
    }
}

fn lift(t: &Tower, text: &str) -> Result<coheyting::metric::CoherentFamily> {
    let a = top_element(t, text)?;
    Ok(match t.base() {
        Some(_) => t.lift_base(&a)?,
        None => t.lift(&a)?,
    })
}

fn print_family(t: &Tower, f: &coheyting::metric::CoherentFamily, g: &Global) {
    for (d, s) in t.format_family(f).iter().enumerate() {
        match g.format {
            Format::Text => println!("A_{d}: {s}"),
            Format::Records => println!("component {d}: {s}"),
        }
    }
}

fn tower_cmd(c: &TowerCmd, g: &Global, caps: &Caps) -> Result<u8> {
    match c {
        TowerCmd::Census { src } => {
            let sizes: Vec<u128> = match (src.free, &src.file) {
                // The free census reports how far it got when a cap is hit.
                (Some(n), None) => precompactness_census(n, src.depth, caps)?,
                _ => tower(src, caps)?
                    .levels()
                    .iter()
                    .map(|l| l.size())
                    .collect(),
            };
            for (d, s) in sizes.iter().enumerate() {
                match g.format {
                    Format::Text => println!("|A_{d}| = {s}"),
                    Format::Records => println!("level {d}: size {s}"),
                }
            }
        }
        TowerCmd::Lift { elem, src } => {
            let t = tower(src, caps)?;
            let f = lift(&t, elem)?;
            print_family(&t, &f, g);
            if g.format == Format::Text && t.is_isolated(&f) {
                println!("# isolated");
            }
        }
        TowerCmd::Limit { elems, src } => {
            if elems.is_empty() {
                bail!(InputError("give at least one element".into()));
            }
            let t = tower(src, caps)?;
            let seq = elems
                .iter()
                .map(|e| lift(&t, e))
                .collect::<Result<Vec<_>>>()?;
            let l = t.cauchy_limit(&seq)?;
            print_family(&t, &l, g);
            if g.format == Format::Text {
                println!("# limit relative to truncation at depth {}", t.depth());
            }
        }
    }
    Ok(0)
}

fn verify_cmd(
    g: &Global,
    caps: &Caps,
    names: &[String],
    list: bool,
    budget: usize,
    replay: Option<&str>,
    save: Option<&str>,
) -> Result<u8> {
    let cfg = Config {
        seed: g.seed,
        budget,
        max_points: g.max_points.unwrap_or(6),
        caps: *caps,
    };
    if list {
        for (name, about) in verify::suites() {
            match g.format {
                Format::Text => println!("{name:18} {about}"),
                Format::Records => println!("{name}"),
            }
        }
        return Ok(0);
    }
    if let Some(path) = replay {
        let text = std::fs::read_to_string(path)?;
        let (suite, r) = verify::replay(&text, &cfg)?;
        return Ok(match r {
            Ok(()) => {
                println!("{suite}: case holds");
                0
            }
            Err(msg) => {
                println!("{suite}: case fails: {msg}");
                1
            }
        });
    }
    let names: Vec<String> = if names.is_empty() {
        verify::suites()
            .iter()
            .map(|(n, _)| n.to_string())
            .collect()
    } else {
        names.to_vec()
    };
    let mut failed = false;
    for name in &names {
        let r = verify::run_suite(name, &cfg)?;
        print!("{}", r.render());
        if let Some(dir) = save {
            std::fs::create_dir_all(dir)?;
            for f in &r.failures {
                let path = format!("{dir}/{name}-{}.case", f.case_id);
                std::fs::write(&path, f.minimal.to_text(name))?;
            }
        }
        failed |= !r.passed();
    }
    Ok(if failed { 1 } else { 0 })
}
