use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tateindex::check::{run_suite, RunConfig, SUITES};
use tateindex::diagram::{rigidity_check, section_contraction_check, AdmissibleDiagram, Contraction, DiagramError};
use tateindex::dvr::{DvrError, RingConfig, RingKind};
use tateindex::gen::{self, case_rng};
use tateindex::lattice::{index_of_automorphism, Lattice, LatticeError};
use tateindex::linalg::{LinalgError, MatrixF};
use tateindex::poset::{a_poset, admissible_trees, b_poset, glue_b, t_poset, BasedMorphism, BasedPoset, Poset, PosetError};
use tateindex::schain::{index_of_chain, index_of_tuple, l_map, GroupTuple, LatticeChain, LatticeTuple, SChainError};
use tateindex::simplicial::{coskeletal_check, lemma_pre_check, nerve, segal_check, FiniteCategory, SimplicialError, DEFAULT_BUDGET};
use tateindex::torsion::TorsionError;

/// Index maps of lattices over a discrete valuation ring, and the finite
/// checks around them.
#[derive(Parser)]
#[command(name = "tateindex", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Opts {
    /// Residue characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    p: u32,
    /// `series` for F_p[[t]], `padic` for Z_p.
    #[arg(long, global = true, default_value = "series", value_parser = parse_kind)]
    ring: RingKind,
    /// Working precision in uniformizer digits.
    #[arg(long, global = true, default_value_t = 24)]
    prec: u32,
    /// Maximal rank of random instances.
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Exponent bound of random instances.
    #[arg(long, global = true, default_value_t = 3)]
    bound: i64,
    #[arg(long, global = true, default_value_t = 200)]
    cases: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Truncation degree of simplicial objects.
    #[arg(long, global = true, default_value_t = 4)]
    degree: usize,
    /// Write a JSON report to this path (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<String>,
}

fn parse_kind(s: &str) -> Result<RingKind, String> {
    match s {
        "series" => Ok(RingKind::Series),
        "padic" => Ok(RingKind::Padic),
        _ => Err(format!("expected 'series' or 'padic', got '{s}'")),
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Operations on lattices given by bases in matrix text format `a, b; c, d`.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Index of a lattice chain, a lattice tuple or a tuple of automorphisms.
    Index {
        #[command(subcommand)]
        op: IndexOp,
    },
    /// Run a property suite.
    Check {
        /// One of additivity, rigidity, cocycle, simplicial, grassmannian,
        /// oracle, an-compare, appendix, all.
        suite: String,
    },
    /// Print a seeded random instance.
    Generate {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Generated posets and their admissible trees.
    Poset {
        #[command(subcommand)]
        op: PosetOp,
    },
    /// Computations on diagram files.
    Diagram {
        #[command(subcommand)]
        op: DiagramOp,
    },
    /// Finite-level checks on nerves of preset categories.
    Appendix {
        #[command(subcommand)]
        op: AppendixOp,
    },
}

#[derive(Subcommand)]
enum LatticeOp {
    /// Whether L0 ⊆ L1.
    Leq { l0: String, l1: String },
    Sup { l0: String, l1: String },
    Inf { l0: String, l1: String },
    /// Elementary divisors of L1/L0 for L0 ⊆ L1.
    Quotient { l0: String, l1: String },
    /// [L1/L0] as the integer v(det L0) - v(det L1).
    Relindex { l0: String, l1: String },
}

#[derive(Subcommand)]
enum IndexOp {
    /// Successive quotients of an ascending chain L0 ⊆ ... ⊆ Lm.
    Chain { lattices: Vec<String> },
    /// Index vector of an arbitrary tuple of lattices.
    Tuple { lattices: Vec<String> },
    /// Lattice tuple of automorphisms g1, ..., gm acting on a lattice.
    Group {
        elements: Vec<String>,
        /// Lattice the tuple acts on; the standard lattice by default.
        #[arg(long)]
        lattice: Option<String>,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Lattice,
    /// Ascending chain of `len + 1` lattices.
    Chain {
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    GroupTuple {
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
    Poset {
        #[arg(long, default_value_t = 5)]
        size: usize,
        /// One less than the number of basepoints.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Torsion diagram over a random based poset.
    Diagram {
        #[arg(long, default_value_t = 5)]
        size: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum PosetOp {
    /// Named families: `B k`, `T k`, `A n`, `chain n`, `glued k` (B[k] glued
    /// into itself), or `random size k`.
    Gen { family: String, args: Vec<usize> },
    /// Admissible trees of a poset file.
    Trees { file: String },
}

#[derive(Subcommand)]
enum DiagramOp {
    /// Pre-index of a diagram file with a `base:` line.
    Preindex { file: String },
    /// Splitting along a tree, every admissible tree by default.
    Split {
        file: String,
        /// Tree edges as `a<b, c<d`.
        #[arg(long)]
        tree: Option<String>,
    },
    /// Tree invariance, and comparison with an extension whose poset
    /// contains the first one as an initial segment of ids.
    Rigidity {
        file: String,
        #[arg(long)]
        ext: Option<String>,
    },
    /// Section and contraction checks on `--cases` random diagrams over a
    /// contraction file, or over a random contraction.
    Lemma327 { file: Option<String> },
}

#[derive(Subcommand)]
enum AppendixOp {
    /// Rezk nerve, row and column comparisons.
    LemmaPre {
        /// `ordinal:N`, `cyclic:K`, `sym:K`, `walking-iso`, `discrete:N`, `free:N` or `AxB`.
        #[arg(long)]
        cat: String,
    },
    Segal {
        /// `ordinal:N`, `cyclic:K`, `sym:K`, `walking-iso`, `discrete:N`, `free:N` or `AxB`.
        #[arg(long)]
        cat: String,
    },
    Coskeletal {
        /// `ordinal:N`, `cyclic:K`, `sym:K`, `walking-iso`, `discrete:N`, `free:N` or `AxB`.
        #[arg(long)]
        cat: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Precision(String),
    Input(String),
}

macro_rules! lift {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                if e.is_precision() { CliError::Precision(e.to_string()) } else { CliError::Input(e.to_string()) }
            }
        }
    )*};
}
lift!(LinalgError, TorsionError, LatticeError, DiagramError, SChainError);

impl From<DvrError> for CliError {
    fn from(e: DvrError) -> Self {
        match e {
            DvrError::PrecisionExhausted(s) => CliError::Precision(s),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SimplicialError> for CliError {
    fn from(e: SimplicialError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Text for stdout, a JSON value, and whether the computed property holds.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

type Res = Result<Output, CliError>;

fn read_file(path: &str) -> Result<String, CliError> {
    if path == "-" {
        return Ok(std::io::read_to_string(std::io::stdin())?);
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

/// Runs `f` at the configured precision and retries at doubled precision on
/// exhaustion, at most four times.
fn with_retries(opts: &Opts, f: impl Fn(RingConfig) -> Res) -> Res {
    let mut prec = opts.prec;
    let mut last = String::new();
    for _ in 0..=4 {
        let ring = RingConfig::new(opts.p, opts.ring, prec)?;
        match f(ring) {
            Err(CliError::Precision(s)) => {
                last = s;
                prec = prec.saturating_mul(2);
            }
            r => return r,
        }
    }
    Err(CliError::Precision(format!("{last} (last precision {})", prec / 2)))
}

fn lattice_json(l: &Lattice) -> Value {
    json!({ "basis": l.basis().to_string(), "rank": l.rank() })
}

fn lattice_cmd(op: &LatticeOp, ring: RingConfig) -> Res {
    let parse = |s: &str| Lattice::parse(ring, s);
    match op {
        LatticeOp::Leq { l0, l1 } => {
            let (a, b) = (parse(l0)?, parse(l1)?);
            let leq = a.leq(&b)?;
            let rel = a.relation(&b)?;
            Ok(Output::ok(format!("{leq}\nrelation: {rel}"), json!({ "leq": leq, "relation": rel.to_string() })))
        }
        LatticeOp::Sup { l0, l1 } | LatticeOp::Inf { l0, l1 } => {
            let (a, b) = (parse(l0)?, parse(l1)?);
            let c = if matches!(op, LatticeOp::Sup { .. }) { a.sup(&b)? } else { a.inf(&b)? };
            Ok(Output::ok(c.to_string(), lattice_json(&c)))
        }
        LatticeOp::Quotient { l0, l1 } => {
            let (a, b) = (parse(l0)?, parse(l1)?);
            let q = a.quotient(&b)?;
            let text = format!("exponents: {q}\nlength: {}", q.length());
            Ok(Output::ok(text, json!({ "exponents": q.exponents(), "length": q.length() })))
        }
        LatticeOp::Relindex { l0, l1 } => {
            let (a, b) = (parse(l0)?, parse(l1)?);
            let r = a.rel_index(&b)?;
            let sup = a.sup(&b)?;
            let (q0, q1) = (a.quotient(&sup)?, b.quotient(&sup)?);
            let text = format!("{r}\nsup: {sup}\nsup/L0: {q0}\nsup/L1: {q1}");
            Ok(Output::ok(
                text,
                json!({
                    "rel_index": r,
                    "sup": lattice_json(&sup),
                    "sup_over_l0": q0.exponents(),
                    "sup_over_l1": q1.exponents(),
                }),
            ))
        }
    }
}

fn index_cmd(op: &IndexOp, ring: RingConfig) -> Res {
    match op {
        IndexOp::Chain { lattices } => {
            let ls = lattices.iter().map(|s| Lattice::parse(ring, s)).collect::<Result<Vec<_>, _>>()?;
            let c = LatticeChain::new(ls)?;
            let s = index_of_chain(&c)?;
            let inv = s.invariants()?;
            let cv = s.class_vector()?;
            let text = format!(
                "class vector: {cv:?}\nsubquotients: {}",
                inv.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>().join(" ")
            );
            Ok(Output::ok(text, json!({ "class_vector": cv, "subquotient_exponents": inv })))
        }
        IndexOp::Tuple { lattices } => {
            let ls = lattices.iter().map(|s| Lattice::parse(ring, s)).collect::<Result<Vec<_>, _>>()?;
            let v = index_of_tuple(&LatticeTuple::new(ls)?)?;
            Ok(Output::ok(format!("{v:?}"), json!({ "index": v })))
        }
        IndexOp::Group { elements, lattice } => {
            let gs = elements.iter().map(|s| MatrixF::parse(ring, s)).collect::<Result<Vec<_>, _>>()?;
            let n = gs.first().map(MatrixF::rows).ok_or_else(|| CliError::Input("no elements".into()))?;
            let l = match lattice {
                Some(s) => Lattice::parse(ring, s)?,
                None => Lattice::standard(ring, n),
            };
            let per: Vec<i64> = gs.iter().map(index_of_automorphism).collect::<Result<_, _>>()?;
            let t = l_map(&GroupTuple::new(gs)?, &l)?;
            let v = index_of_tuple(&t)?;
            let text = format!(
                "Index(g_i): {per:?}\nlattice tuple index: {v:?}\nlattices: {}",
                t.lattices().iter().map(|x| format!("[{x}]")).collect::<Vec<_>>().join(" ")
            );
            let lats: Vec<String> = t.lattices().iter().map(|x| x.to_string()).collect();
            Ok(Output::ok(text, json!({ "element_index": per, "tuple_index": v, "lattices": lats })))
        }
    }
}

fn generate_cmd(kind: &GenKind, opts: &Opts) -> Res {
    let ring = RingConfig::new(opts.p, opts.ring, opts.prec)?;
    let mut rng = case_rng(opts.seed, 0);
    let text = match kind {
        GenKind::Lattice => gen::random_lattice(&mut rng, ring, opts.n, opts.bound).to_string(),
        GenKind::Chain { len } => {
            let c = gen::random_chain(&mut rng, ring, opts.n, *len, opts.bound);
            LatticeChain::new(c.clone())?;
            c.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("\n")
        }
        GenKind::GroupTuple { len } => (0..*len)
            .map(|_| gen::random_gl(&mut rng, ring, opts.n, opts.bound).to_string())
            .collect::<Vec<_>>()
            .join("\n"),
        GenKind::Poset { size, k } => {
            check_sizes(*size, *k)?;
            gen::random_based_poset(&mut rng, *size, *k).to_string()
        }
        GenKind::Diagram { size, k } => {
            check_sizes(*size, *k)?;
            let b = gen::random_based_poset(&mut rng, *size, *k);
            let d = gen::random_torsion_diagram(&mut rng, ring, b.poset(), opts.n, opts.bound)?;
            diagram_text(&d, &b)
        }
    };
    Ok(Output::ok(text.clone(), json!({ "instance": text })))
}

fn check_sizes(size: usize, k: usize) -> Result<(), CliError> {
    if size < k + 2 || size > 64 {
        return Err(CliError::Input("need k + 2 <= size <= 64".into()));
    }
    Ok(())
}

fn diagram_text(d: &AdmissibleDiagram, b: &BasedPoset) -> String {
    let base: Vec<String> = b.basepoints().iter().map(|x| x.to_string()).collect();
    format!("{d}base: {}", base.join(","))
}

fn poset_cmd(op: &PosetOp, opts: &Opts) -> Res {
    match op {
        PosetOp::Gen { family, args } => {
            let arg = |i: usize| args.get(i).copied().ok_or_else(|| CliError::Input(format!("{family} needs {} argument(s)", i + 1)));
            let text = match family.as_str() {
                "B" | "b" => b_poset(arg(0)?).to_string(),
                "T" | "t" => t_poset(arg(0)?).to_string(),
                "A" | "a" => a_poset(arg(0)?).to_string(),
                "chain" => BasedPoset::new(Poset::chain(arg(0)?), vec![0])?.to_string(),
                "glued" => glue_b(&b_poset(arg(0)?))?.poset.to_string(),
                "random" => {
                    let (size, k) = (arg(0)?, arg(1)?);
                    check_sizes(size, k)?;
                    gen::random_based_poset(&mut case_rng(opts.seed, 0), size, k).to_string()
                }
                f => return Err(CliError::Input(format!("unknown family '{f}'"))),
            };
            Ok(Output::ok(text.clone(), json!({ "poset": text })))
        }
        PosetOp::Trees { file } => {
            let s = read_file(file)?;
            let p = match BasedPoset::parse(&s) {
                Ok(b) => b.poset().clone(),
                Err(_) => Poset::parse(s.lines().next().unwrap_or(""))?,
            };
            let trees = admissible_trees(&p);
            let fmt = |t: &Vec<(usize, usize)>| t.iter().map(|(a, b)| format!("{a}<{b}")).collect::<Vec<_>>().join(", ");
            let lines: Vec<String> = trees.iter().map(fmt).collect();
            Ok(Output::ok(format!("{} admissible trees\n{}", trees.len(), lines.join("\n")), json!({ "trees": lines })))
        }
    }
}

fn parse_based_diagram(ring: RingConfig, path: &str) -> Result<(AdmissibleDiagram, BasedPoset), CliError> {
    let (d, b) = AdmissibleDiagram::parse(ring, &read_file(path)?)?;
    let b = b.ok_or_else(|| CliError::Input(format!("{path}: missing 'base:' line")))?;
    Ok((d, b))
}

fn parse_tree(s: &str) -> Result<Vec<(usize, usize)>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|e| {
            let (a, b) = e.split_once('<').ok_or_else(|| CliError::Input(format!("bad edge '{e}'")))?;
            let num = |w: &str| w.trim().parse::<usize>().map_err(|_| CliError::Input(format!("bad vertex '{w}'")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn diagram_cmd(op: &DiagramOp, opts: &Opts, ring: RingConfig) -> Res {
    match op {
        DiagramOp::Preindex { file } => {
            let (d, b) = parse_based_diagram(ring, file)?;
            let v = d.pre_index(&b)?;
            Ok(Output::ok(format!("{v:?}"), json!({ "pre_index": v })))
        }
        DiagramOp::Split { file, tree } => {
            let (d, b) = parse_based_diagram(ring, file)?;
            let trees = match tree {
                Some(t) => vec![parse_tree(t)?],
                None => admissible_trees(b.poset()),
            };
            let mut text = Vec::new();
            let mut out = Vec::new();
            for t in &trees {
                let edges = t.iter().map(|(a, c)| format!("{a}<{c}")).collect::<Vec<_>>().join(", ");
                let split = d.phi_t(&b, t)?;
                let idx = match d.idx_via_splitting(&b, t) {
                    Ok(v) => Some(v),
                    Err(DiagramError::TreeNotCollapsible) => None,
                    Err(e) => return Err(e.into()),
                };
                let cls: Vec<String> = split.edges.iter().map(|((a, c), l)| format!("{a}<{c}: {l}")).collect();
                let shown = idx.as_ref().map_or("tree does not collapse".to_string(), |v| format!("{v:?}"));
                text.push(format!("tree {edges}\n  base: {:?}\n  edges: {}\n  index: {shown}", split.base, cls.join(", ")));
                out.push(json!({ "tree": edges, "base": split.base, "edges": cls, "index": idx }));
            }
            Ok(Output::ok(text.join("\n"), json!({ "splittings": out })))
        }
        DiagramOp::Rigidity { file, ext } => {
            let (d, b) = parse_based_diagram(ring, file)?;
            let pre = d.pre_index(&b)?;
            let mut ok = true;
            let mut text = vec![format!("pre-index: {pre:?}")];
            let mut trees_checked = 0;
            for t in admissible_trees(b.poset()) {
                match d.idx_via_splitting(&b, &t) {
                    Ok(v) => {
                        trees_checked += 1;
                        if v != pre {
                            ok = false;
                            text.push(format!("tree {t:?} gives {v:?}"));
                        }
                    }
                    Err(DiagramError::TreeNotCollapsible) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            text.push(format!("trees agreeing: {}", if ok { trees_checked.to_string() } else { "no".into() }));
            let mut js = json!({ "pre_index": pre, "trees_checked": trees_checked, "trees_agree": ok });
            if let Some(ext) = ext {
                let (e, eb) = parse_based_diagram(ring, ext)?;
                let n = b.poset().len();
                let iota = BasedMorphism::new(&b, &eb, (0..n).collect(), (0..=b.k()).collect())?;
                let rep = rigidity_check(&d, &b, &iota, &e, &eb)?;
                ok &= rep.holds();
                text.push(format!(
                    "restriction matches: {}\nextended pre-index: {:?}\nrigid: {}",
                    rep.restriction_matches,
                    rep.pre_index_extended,
                    rep.holds()
                ));
                js["extension"] = json!({
                    "restriction_matches": rep.restriction_matches,
                    "pre_index_extended": rep.pre_index_extended,
                    "holds": rep.holds(),
                });
            }
            Ok(Output { text: text.join("\n"), json: js, ok })
        }
        DiagramOp::Lemma327 { file } => {
            let mut rng = case_rng(opts.seed, 0);
            let c = match file {
                Some(f) => parse_contraction(&read_file(f)?)?,
                None => gen::random_contraction(&mut rng, 1 + opts.n.min(3), 2),
            };
            if let Err(e) = c.check_conditions() {
                let msg = e.to_string();
                return Ok(Output { text: format!("rejected: {msg}"), json: json!({ "accepted": false, "reason": msg }), ok: false });
            }
            let mut failures = 0;
            for _ in 0..opts.cases {
                let x = gen::random_torsion_diagram(&mut rng, ring, c.source.poset(), opts.n, opts.bound.min(3))?;
                let y = gen::random_torsion_diagram(&mut rng, ring, c.target.poset(), opts.n, opts.bound.min(3))?;
                if !section_contraction_check(&c, &x, &y)?.holds() {
                    failures += 1;
                }
            }
            Ok(Output {
                text: format!("accepted; {} diagrams, {failures} failures", opts.cases),
                json: json!({ "accepted": true, "cases": opts.cases, "failures": failures }),
                ok: failures == 0,
            })
        }
    }
}

/// Lines `source: <poset>`, `base: <basepoints>`, `target: <poset>`,
/// `phi: <images>`.
fn parse_contraction(s: &str) -> Result<Contraction, CliError> {
    let mut fields = std::collections::BTreeMap::new();
    for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (k, v) = line.split_once(':').ok_or_else(|| CliError::Input(format!("bad line '{line}'")))?;
        fields.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get = |k: &str| fields.get(k).ok_or_else(|| CliError::Input(format!("missing '{k}:' line")));
    let list = |k: &str| -> Result<Vec<usize>, CliError> {
        get(k)?
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| CliError::Input(format!("bad entry '{x}' in {k}"))))
            .collect()
    };
    let source = BasedPoset::new_relaxed(Poset::parse(get("source")?)?, list("base")?)?;
    let phi = list("phi")?;
    let xs = source.basepoints();
    let t = Poset::parse(get("target")?)?;
    let x = phi.get(xs[0]).copied().ok_or_else(|| CliError::Input("phi too short".into()))?;
    let target = BasedPoset::new_relaxed(t, vec![x; xs.len()])?;
    Ok(Contraction { source, target, phi })
}

fn appendix_cmd(op: &AppendixOp, opts: &Opts) -> Res {
    let deg = opts.degree;
    match op {
        AppendixOp::LemmaPre { cat } => {
            let c = FiniteCategory::preset(cat)?;
            let r = lemma_pre_check(&c, deg, DEFAULT_BUDGET)?;
            let text = format!(
                "category {}, degree {}\nidentities: {}\nrezk: {}\nrow: {}\ncolumn: {}",
                r.category, r.degree, r.identities, r.rezk_iso, r.row_iso, r.column_iso
            );
            let js = json!({
                "category": r.category, "degree": r.degree, "identities": r.identities,
                "rezk_iso": r.rezk_iso, "row_iso": r.row_iso, "column_iso": r.column_iso,
                "holds": r.holds(),
            });
            Ok(Output { text, json: js, ok: r.holds() })
        }
        AppendixOp::Segal { cat } => {
            let x = nerve(&FiniteCategory::preset(cat)?, deg)?;
            let r = segal_check(&x, deg);
            let mut text = vec![format!("reduced: {}\nsegal: {}", r.reduced, r.is_segal())];
            let mut lv = Vec::new();
            for l in &r.levels {
                text.push(format!("  level {}: {} simplices, {} in fibre product", l.n, l.simplices, l.fibre_product));
                lv.push(json!({ "n": l.n, "simplices": l.simplices, "fibre_product": l.fibre_product }));
            }
            let js = json!({ "reduced": r.reduced, "segal": r.is_segal(), "levels": lv });
            Ok(Output::ok(text.join("\n"), js))
        }
        AppendixOp::Coskeletal { cat, k } => {
            let x = nerve(&FiniteCategory::preset(cat)?, deg)?;
            let v = coskeletal_check(&x, *k);
            Ok(Output::ok(format!("{k}-coskeletal up to degree {deg}: {v}"), json!({ "k": k, "coskeletal": v, "sizes": x.sizes() })))
        }
    }
}

fn emit_json(opts: &Opts, s: String) -> Result<(), CliError> {
    if let Some(path) = &opts.json {
        if path == "-" {
            println!("{s}");
        } else {
            fs::write(path, s + "\n")?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let opts = &cli.opts;
    let out = match &cli.cmd {
        Cmd::Check { suite } => {
            let cfg = RunConfig {
                p: opts.p,
                ring: opts.ring,
                prec: opts.prec,
                n: opts.n,
                bound: opts.bound,
                cases: opts.cases,
                seed: opts.seed,
                degree: opts.degree,
            };
            let rep = run_suite(suite, &cfg)
                .map_err(|e| CliError::Input(format!("{e}; suites: {}", SUITES.join(", "))))?;
            if opts.json.as_deref() != Some("-") {
                print!("{}", rep.summary());
            }
            emit_json(opts, rep.to_json())?;
            return Ok(rep.passed());
        }
        Cmd::Lattice { op } => with_retries(opts, |r| lattice_cmd(op, r))?,
        Cmd::Index { op } => with_retries(opts, |r| index_cmd(op, r))?,
        Cmd::Generate { kind } => generate_cmd(kind, opts)?,
        Cmd::Poset { op } => poset_cmd(op, opts)?,
        Cmd::Diagram { op } => with_retries(opts, |r| diagram_cmd(op, opts, r))?,
        Cmd::Appendix { op } => appendix_cmd(op, opts)?,
    };
    if opts.json.as_deref() != Some("-") {
        let _ = writeln!(std::io::stdout(), "{}", out.text);
    }
    emit_json(opts, serde_json::to_string_pretty(&out.json).expect("serializable"))?;
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Precision(s)) => {
            eprintln!("precision exhausted: {s}");
            ExitCode::from(3)
        }
        Err(CliError::Input(s)) => {
            eprintln!("error: {s}");
            ExitCode::from(2)
        }
    }
}
