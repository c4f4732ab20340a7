//! Property suites over seeded random instances, and their JSON reports.
//!
//! A suite is a list of parts. A random part runs `config.cases` cases, an
//! exhaustive part a fixed number; with `cases = 0` nothing runs. A case that
//! runs out of precision is retried with doubled precision up to four times.
//! A failing case is replayed with smaller exponent bounds and the smallest
//! failing instance is reported.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{rigidity_check, section_contraction_check, AdmissibleDiagram, Condition, Contraction, DiagramError};
use crate::dvr::{DvrError, FieldElement, RingConfig, RingKind, Valuation};
use crate::gen::{self, case_rng, RNG_ALGORITHM};
use crate::lattice::{index_of_automorphism, Lattice, LatticeError};
use crate::linalg::{smith_over_dvr, LinalgError, MatrixF};
use crate::poset::{admissible_trees, adjoin_top, b_poset, glue_b, BasedMorphism, BasedPoset, Poset, PosetError};
use crate::schain::{
    a_n_comparison, alpha_transport_check, bar_segal_check, cocycle_check, index_of_chain, index_of_product,
    index_of_tuple, l_map, GroupTuple, LatticeChain, SChainError,
};
use crate::simplicial::{
    coskeletal_check, delta_prime, gr_tuples, grothendieck, is_isomorphism, lemma_pre_check, lemma_pre_naturality,
    nerve, nerve_product_check, p_star, segal_check, standard_simplex, codiscrete, iota_star, FiniteCategory, Functor,
    GroupoidAction, SimplicialError, TruncatedSimplicialSet, DEFAULT_BUDGET,
};
use crate::torsion::TorsionError;

pub const SCHEMA_VERSION: u32 = 1;
pub const MAX_PRECISION_RETRIES: u32 = 4;

pub const SUITES: [&str; 9] =
    ["additivity", "rigidity", "cocycle", "simplicial", "grassmannian", "oracle", "an-compare", "appendix", "all"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error(transparent)]
    Config(#[from] DvrError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: u32,
    pub ring: RingKind,
    pub prec: u32,
    pub n: usize,
    pub bound: i64,
    pub cases: u64,
    pub seed: u64,
    pub degree: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { p: 2, ring: RingKind::Series, prec: 24, n: 2, bound: 3, cases: 200, seed: 0, degree: 4 }
    }
}

impl RunConfig {
    pub fn ring_config(&self) -> Result<RingConfig, DvrError> {
        RingConfig::new(self.p, self.ring, self.prec)
    }

    pub fn validate(&self) -> Result<(), DvrError> {
        self.ring_config()?;
        if self.n == 0 || self.bound <= 0 || self.degree == 0 {
            return Err(DvrError::InvalidConfig("rank, bound and degree must be positive".into()));
        }
        Ok(())
    }
}

/// Why a case did not pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseFailure {
    Check { check: String, detail: String, payload: BTreeMap<String, String> },
    Precision(String),
    Error(String),
}

impl fmt::Display for CaseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseFailure::Check { check, detail, .. } => write!(f, "{check}: {detail}"),
            CaseFailure::Precision(s) => write!(f, "precision: {s}"),
            CaseFailure::Error(s) => write!(f, "error: {s}"),
        }
    }
}

macro_rules! lift_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CaseFailure {
            fn from(e: $t) -> Self {
                if e.is_precision() { CaseFailure::Precision(e.to_string()) } else { CaseFailure::Error(e.to_string()) }
            }
        }
    )*};
}
lift_error!(LinalgError, TorsionError, LatticeError, DiagramError, SChainError);

impl From<DvrError> for CaseFailure {
    fn from(e: DvrError) -> Self {
        match e {
            DvrError::PrecisionExhausted(s) => CaseFailure::Precision(s),
            e => CaseFailure::Error(e.to_string()),
        }
    }
}

impl From<PosetError> for CaseFailure {
    fn from(e: PosetError) -> Self {
        CaseFailure::Error(e.to_string())
    }
}

impl From<SimplicialError> for CaseFailure {
    fn from(e: SimplicialError) -> Self {
        CaseFailure::Error(e.to_string())
    }
}

pub type CaseResult = Result<(), CaseFailure>;

fn ensure(cond: bool, check: &str, detail: impl FnOnce() -> String, payload: impl FnOnce() -> Vec<(&'static str, String)>) -> CaseResult {
    if cond {
        return Ok(());
    }
    Err(CaseFailure::Check {
        check: check.to_string(),
        detail: detail(),
        payload: payload().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    /// `config.cases` cases.
    Random,
    /// A fixed number of cases, run whenever `config.cases > 0`.
    Fixed(u64),
}

#[derive(Clone, Copy)]
pub struct Part {
    pub name: &'static str,
    pub count: Count,
    pub run: fn(&RunConfig, u64) -> CaseResult,
}

impl fmt::Debug for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Part").field("name", &self.name).field("count", &self.count).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub part: String,
    pub case: u64,
    pub check: String,
    pub detail: String,
    /// Exponent bound of the smallest failing replay.
    pub bound: i64,
    pub payload: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unresolved {
    pub part: String,
    pub case: u64,
    pub last_precision: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartSummary {
    pub name: String,
    pub cases: u64,
    pub failures: usize,
    pub unresolved: usize,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RngInfo {
    pub algorithm: &'static str,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Precision,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub config: RunConfig,
    pub rng: RngInfo,
    pub cases: u64,
    pub parts: Vec<PartSummary>,
    pub failures: Vec<Failure>,
    pub unresolved_precision: Vec<Unresolved>,
    pub elapsed_ms: u128,
    pub status: Status,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "suite {}: {} cases, {} failures, {} unresolved, {} ms, {:?}\n",
            self.suite,
            self.cases,
            self.failures.len(),
            self.unresolved_precision.len(),
            self.elapsed_ms,
            self.status
        );
        for p in &self.parts {
            s += &format!("  {:<28} {:>6} cases {:>4} failures {:>8} ms\n", p.name, p.cases, p.failures, p.elapsed_ms);
        }
        for f in &self.failures {
            s += &format!("  FAIL {} case {} (bound {}): {}: {}\n", f.part, f.case, f.bound, f.check, f.detail);
            for (k, v) in &f.payload {
                s += &format!("    {k}: {}\n", v.replace('\n', "\n      "));
            }
        }
        for u in &self.unresolved_precision {
            s += &format!("  PRECISION {} case {} at {}: {}\n", u.part, u.case, u.last_precision, u.detail);
        }
        s
    }
}

enum Outcome {
    Pass,
    Fail(Failure),
    Unresolved(Unresolved),
}

fn run_case(part: &Part, cfg: &RunConfig, case: u64) -> Outcome {
    let mut c = cfg.clone();
    let mut attempt = 0;
    loop {
        match (part.run)(&c, case) {
            Ok(()) => return Outcome::Pass,
            Err(CaseFailure::Precision(detail)) => {
                if attempt == MAX_PRECISION_RETRIES {
                    return Outcome::Unresolved(Unresolved { part: part.name.into(), case, last_precision: c.prec, detail });
                }
                attempt += 1;
                c.prec = c.prec.saturating_mul(2);
            }
            Err(first) => return Outcome::Fail(minimize(part, &c, case, first)),
        }
    }
}

/// Replays the case with bounds `1, 2, ...` below the configured one and
/// keeps the first that still fails.
fn minimize(part: &Part, cfg: &RunConfig, case: u64, first: CaseFailure) -> Failure {
    let mut best = (cfg.bound, first);
    for b in 1..cfg.bound {
        let c = RunConfig { bound: b, ..cfg.clone() };
        if let Err(f @ (CaseFailure::Check { .. } | CaseFailure::Error(_))) = (part.run)(&c, case) {
            best = (b, f);
            break;
        }
    }
    let (bound, f) = best;
    let (check, detail, payload) = match f {
        CaseFailure::Check { check, detail, payload } => (check, detail, payload),
        CaseFailure::Error(e) => ("error".into(), e, BTreeMap::new()),
        CaseFailure::Precision(e) => ("precision".into(), e, BTreeMap::new()),
    };
    Failure { part: part.name.into(), case, check, detail, bound, payload }
}

pub fn run_parts(suite: &str, cfg: &RunConfig, parts: &[Part]) -> SuiteReport {
    let start = Instant::now();
    let mut summaries = Vec::new();
    let mut failures = Vec::new();
    let mut unresolved = Vec::new();
    let mut total = 0;
    for part in parts {
        let count = match (cfg.cases, part.count) {
            (0, _) => 0,
            (c, Count::Random) => c,
            (_, Count::Fixed(k)) => k,
        };
        let part_start = Instant::now();
        let outcomes: Vec<(u64, Outcome)> = (0..count).into_par_iter().map(|case| (case, run_case(part, cfg, case))).collect();
        let (mut nf, mut nu) = (0, 0);
        for (_, o) in outcomes {
            match o {
                Outcome::Pass => {}
                Outcome::Fail(f) => {
                    nf += 1;
                    failures.push(f);
                }
                Outcome::Unresolved(u) => {
                    nu += 1;
                    unresolved.push(u);
                }
            }
        }
        total += count;
        summaries.push(PartSummary {
            name: part.name.into(),
            cases: count,
            failures: nf,
            unresolved: nu,
            elapsed_ms: part_start.elapsed().as_millis(),
        });
    }
    let status = if !failures.is_empty() {
        Status::Fail
    } else if !unresolved.is_empty() {
        Status::Precision
    } else {
        Status::Pass
    };
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: suite.to_string(),
        config: cfg.clone(),
        rng: RngInfo { algorithm: RNG_ALGORITHM, seed: cfg.seed },
        cases: total,
        parts: summaries,
        failures,
        unresolved_precision: unresolved,
        elapsed_ms: start.elapsed().as_millis(),
        status,
    }
}

pub fn suite_parts(name: &str) -> Result<Vec<Part>, CheckError> {
    let r = Count::Random;
    let parts = match name {
        "additivity" => vec![
            Part { name: "index-additivity", count: r, run: index_additivity },
            Part { name: "tuple-coherence", count: r, run: tuple_coherence },
            Part { name: "ses-additivity", count: r, run: ses_additivity },
        ],
        "rigidity" => vec![
            Part { name: "tree-invariance", count: r, run: tree_invariance },
            Part { name: "b-embeddings", count: r, run: b_embeddings },
            Part { name: "b2-telescoping", count: r, run: b2_telescoping },
            Part { name: "s-object-on-b", count: r, run: s_object_on_b },
            Part { name: "contraction", count: r, run: contraction },
            Part { name: "contraction-violations", count: Count::Fixed(4), run: contraction_violation },
        ],
        "cocycle" => vec![
            Part { name: "s3-triples", count: Count::Fixed(216), run: s3_triple },
            Part { name: "random-triples", count: r, run: random_triple },
            Part { name: "alpha-transport", count: r, run: alpha_transport },
            Part { name: "l-map-faces", count: r, run: l_map_faces },
        ],
        "simplicial" => vec![
            Part { name: "chain-identities", count: r, run: chain_identities },
            Part { name: "bar-identities", count: r, run: bar_identities },
            Part { name: "index-faces", count: r, run: index_faces },
            Part { name: "gr-coskeletal", count: r, run: gr_coskeletal },
            Part { name: "bar-segal", count: Count::Fixed(1), run: bar_segal },
        ],
        "grassmannian" => vec![
            Part { name: "sup-inf-bounds", count: r, run: sup_inf_bounds },
            Part { name: "duality", count: r, run: duality },
        ],
        "oracle" => vec![
            Part { name: "relindex-det-vs-quotients", count: r, run: relindex_oracle },
            Part { name: "smith-vs-minors", count: r, run: smith_oracle },
            Part { name: "det-vs-cofactors", count: r, run: det_oracle },
        ],
        "an-compare" => vec![Part { name: "a-n-comparison", count: r, run: an_compare }],
        "appendix" => vec![
            Part { name: "lemma-pre", count: Count::Fixed(APPENDIX_CATEGORIES.len() as u64), run: lemma_pre },
            Part { name: "lemma-pre-naturality", count: Count::Fixed(3), run: naturality },
            Part { name: "nerve-products", count: Count::Fixed(3), run: nerve_products },
            Part { name: "delta-prime", count: Count::Fixed(4), run: delta_prime_part },
            Part { name: "segal", count: Count::Fixed(5), run: segal_part },
            Part { name: "coskeletal", count: Count::Fixed(3), run: coskeletal_part },
            Part { name: "grothendieck", count: Count::Fixed(3), run: grothendieck_part },
            Part { name: "restrictions", count: Count::Fixed(2), run: restriction_part },
        ],
        "all" => {
            let mut v = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                v.extend(suite_parts(s)?);
            }
            v
        }
        other => return Err(CheckError::UnknownSuite(other.to_string())),
    };
    Ok(parts)
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport, CheckError> {
    cfg.validate()?;
    let parts = suite_parts(name)?;
    Ok(run_parts(name, cfg, &parts))
}

fn ring(cfg: &RunConfig) -> Result<RingConfig, CaseFailure> {
    Ok(cfg.ring_config()?)
}

fn rank(cfg: &RunConfig, case: u64) -> usize {
    1 + (case as usize) % cfg.n
}

// additivity

fn index_additivity(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let g1 = gen::random_gl_general(&mut rng, r, n, cfg.bound);
    let g2 = gen::random_gl_general(&mut rng, r, n, cfg.bound);
    let (i1, i2) = (index_of_automorphism(&g1)?, index_of_automorphism(&g2)?);
    let i12 = index_of_automorphism(&g1.matmul(&g2)?)?;
    let payload = || vec![("g1", g1.to_string()), ("g2", g2.to_string())];
    ensure(i1 + i2 == i12, "Index(g1)+Index(g2)=Index(g1 g2)", || format!("{i1} + {i2} != {i12}"), payload)?;
    let o = Lattice::standard(r, n);
    let q = o.rel_index_via_quotients(&o.act(&g1)?)?;
    ensure(q == -i1, "quotient form of Index", || format!("[N/O]-[N/gO] = {q}, Index = {i1}"), payload)
}

fn tuple_coherence(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let m = 2 + (case as usize) % 3;
    let gs: Vec<MatrixF> = (0..m).map(|_| gen::random_gl(&mut rng, r, n, cfg.bound)).collect();
    let l = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let g = GroupTuple::new(gs.clone())?;
    let idx = index_of_tuple(&l_map(&g, &l)?)?;
    let total = index_of_product(&g, r, n)?;
    let parts: Vec<i64> = gs.iter().map(index_of_automorphism).collect::<Result<_, _>>()?;
    let expected: Vec<i64> = parts.iter().map(|v| -v).collect();
    let payload = || vec![("tuple", gs.iter().join(" | ")), ("lattice", l.to_string())];
    ensure(idx == expected, "tuple index components", || format!("{idx:?} vs {expected:?}"), payload)?;
    ensure(idx.iter().sum::<i64>() == -total, "telescoping sum", || format!("{idx:?} vs Index {total}"), payload)
}

fn ses_additivity(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let rk = rank(cfg, case);
    let size = rng.gen_range(3..=5);
    let k = rng.gen_range(1..=(size - 2).min(2));
    let based = gen::random_based_poset(&mut rng, size, k);
    let p = based.poset().clone();
    let depth = cfg.bound.min(3);
    let (ls, n0) = gen::random_lattice_family(&mut rng, r, &p, rk, depth);
    let n1 = gen::random_superlattice(&mut rng, &n0, depth);
    let n1 = n1.inf(&Lattice::standard(r, rk))?;
    let inner: Vec<Lattice> = ls.iter().map(|l| l.inf(&n1)).collect::<Result<_, _>>()?;
    let outer: Vec<Lattice> = ls.iter().map(|l| l.sup(&n1)).collect::<Result<_, _>>()?;
    let f = AdmissibleDiagram::from_lattice_family(p.clone(), &ls, &n0)?;
    let f1 = AdmissibleDiagram::from_lattice_family(p.clone(), &inner, &n0)?;
    let f2 = AdmissibleDiagram::from_lattice_family(p.clone(), &outer, &n1)?;
    let (a, b, c) = (f.pre_index(&based)?, f1.pre_index(&based)?, f2.pre_index(&based)?);
    let sum: Vec<i64> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
    let payload = || vec![("poset", based.to_string()), ("diagram", f.to_string())];
    ensure(a == sum, "pre_index(F) = pre_index(F') + pre_index(F'')", || format!("{a:?} vs {b:?} + {c:?}"), payload)?;
    for x in 0..p.len() {
        let lens = [&f, &f1, &f2].map(|d| d.module(x).unwrap().length());
        ensure(lens[0] == lens[1] + lens[2], "object-wise length additivity", || format!("at {x}: {lens:?}"), payload)?;
    }
    Ok(())
}

// rigidity

fn random_diagram_case(cfg: &RunConfig, case: u64, max_size: usize) -> Result<(BasedPoset, AdmissibleDiagram, rand_chacha::ChaCha8Rng), CaseFailure> {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let size = rng.gen_range(3..=max_size);
    let k = rng.gen_range(1..=(size - 2).min(2));
    let based = gen::random_based_poset(&mut rng, size, k);
    let d = gen::random_torsion_diagram(&mut rng, r, based.poset(), rank(cfg, case), cfg.bound.min(3))?;
    Ok((based, d, rng))
}

fn tree_invariance(cfg: &RunConfig, case: u64) -> CaseResult {
    let (based, d, _) = random_diagram_case(cfg, case, 6)?;
    let pre = d.pre_index(&based)?;
    let payload = || vec![("poset", based.to_string()), ("diagram", d.to_string())];
    let diff = d.pre_index_differences(&based)?;
    ensure(pre == diff, "cokernel and difference formulas agree", || format!("{pre:?} vs {diff:?}"), payload)?;
    for tree in admissible_trees(based.poset()) {
        match d.idx_via_splitting(&based, &tree) {
            Ok(v) => ensure(v == pre, "tree invariance", || format!("tree {tree:?}: {v:?} vs {pre:?}"), payload)?,
            Err(DiagramError::TreeNotCollapsible) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn b_embeddings(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let size = rng.gen_range(3..=5);
    let k = rng.gen_range(1..=(size - 2).min(2));
    let based = gen::random_based_poset(&mut rng, size, k);
    let g1 = glue_b(&based)?;
    let g2 = glue_b(&g1.poset)?;
    let (top, _) = adjoin_top(&g2.poset)?;
    let depth = cfg.bound.min(3);
    let rk = rank(cfg, case);
    let big = gen::random_torsion_diagram(&mut rng, r, top.poset(), rk, depth)?;
    let n = based.poset().len();
    let ids = |m: usize| -> Vec<usize> { (0..m).collect() };
    let kk: Vec<usize> = (0..=k).collect();
    let levels = [&based, &g1.poset, &g2.poset];
    let payload = || vec![("poset", based.to_string()), ("extended", big.to_string())];
    for (i, src) in levels.iter().enumerate() {
        let f = big.restrict(src.poset(), &ids(src.poset().len()))?;
        for tgt in levels[i + 1..].iter().copied().chain([&top]) {
            let iota = BasedMorphism::new(src, tgt, ids(src.poset().len()), kk.clone())?;
            let f_ext = big.restrict(tgt.poset(), &ids(tgt.poset().len()))?;
            let rep = rigidity_check(&f, src, &iota, &f_ext, tgt)?;
            ensure(rep.holds(), "rigidity along embedding", || format!("{} -> {} elements: {rep:?}", src.poset().len(), tgt.poset().len()), payload)?;
        }
    }
    let _ = n;
    Ok(())
}

fn b2_telescoping(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let b = b_poset(2);
    let d = gen::random_torsion_diagram(&mut rng, r, b.poset(), rank(cfg, case), cfg.bound.min(3))?;
    let c = |x, y| d.coker_length(x, y).map(|v| v as i64);
    // ids: {0},{1},{2},[0,1],[1,2],[0,2]
    let lhs = c(0, 3)? - c(1, 3)? + c(1, 4)? - c(2, 4)?;
    let rhs = c(0, 5)? - c(2, 5)?;
    let payload = || vec![("diagram", d.to_string())];
    ensure(lhs == rhs, "telescoping on B[2]", || format!("{lhs} vs {rhs}"), payload)?;
    let pre = d.pre_index(&b)?;
    ensure(pre.iter().sum::<i64>() == rhs, "pre-index sum", || format!("{pre:?} vs {rhs}"), payload)
}

fn s_object_on_b(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let m = 1 + (case as usize) % 3;
    let c = LatticeChain::new(gen::random_chain(&mut rng, r, rank(cfg, case), m, cfg.bound))?;
    let s = index_of_chain(&c)?;
    let d = s.b_diagram()?;
    let pre = d.pre_index(&b_poset(m))?;
    let cv = s.class_vector()?;
    ensure(pre == cv, "[i,j] -> X_j on B[m]", || format!("{pre:?} vs {cv:?}"), || {
        vec![("chain", c.lattices().iter().join(" | "))]
    })
}

fn contraction(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = 1 + (case as usize) % 3;
    let extra = rng.gen_range(1..=3);
    let c = gen::random_contraction(&mut rng, n, extra);
    let rk = rank(cfg, case);
    let x = gen::random_torsion_diagram(&mut rng, r, c.source.poset(), rk, cfg.bound.min(3))?;
    let y = gen::random_torsion_diagram(&mut rng, r, c.target.poset(), rk, cfg.bound.min(3))?;
    let rep = section_contraction_check(&c, &x, &y)?;
    ensure(rep.holds(), "section/contraction", || format!("{rep:?}"), || {
        vec![("source", c.source.to_string()), ("target", c.target.to_string()), ("phi", format!("{:?}", c.phi))]
    })
}

/// One designed violation per hypothesis.
pub fn designed_violation(cond: Condition) -> Contraction {
    let relaxed = |p: Poset, b: Vec<usize>| BasedPoset::new_relaxed(p, b).unwrap();
    match cond {
        Condition::A => {
            let b = b_poset(1);
            Contraction { source: b, target: relaxed(Poset::chain(1), vec![0, 0]), phi: vec![0, 0, 1] }
        }
        Condition::B => Contraction {
            source: relaxed(Poset::chain(3), vec![1, 2]),
            target: relaxed(Poset::chain(2), vec![1, 1]),
            phi: vec![0, 1, 1, 2],
        },
        Condition::C => Contraction {
            source: relaxed(Poset::chain(1), vec![0, 1]),
            target: relaxed(Poset::chain(0), vec![0, 0]),
            phi: vec![0, 0],
        },
        Condition::D => Contraction {
            source: relaxed(Poset::chain(2), vec![0, 1]),
            target: relaxed(Poset::chain(2), vec![0, 0]),
            phi: vec![0, 0, 1],
        },
    }
}

fn contraction_violation(_cfg: &RunConfig, case: u64) -> CaseResult {
    let cond = [Condition::A, Condition::B, Condition::C, Condition::D][case as usize];
    let c = designed_violation(cond);
    let got = c.check_conditions();
    ensure(
        matches!(got, Err(DiagramError::ConditionViolated(k, _)) if k == cond),
        "violation detected",
        || format!("condition ({cond}): {got:?}"),
        || vec![("source", c.source.to_string()), ("phi", format!("{:?}", c.phi))],
    )
}

// cocycle

fn permutation_matrix(r: RingConfig, p: &[usize]) -> MatrixF {
    MatrixF::from_fn(r, p.len(), p.len(), |i, j| if p[j] == i { FieldElement::one(r) } else { FieldElement::zero(r) })
}

fn s3_triple(cfg: &RunConfig, case: u64) -> CaseResult {
    let r = ring(cfg)?;
    let perms: Vec<Vec<usize>> = (0..3).permutations(3).collect();
    let c = case as usize;
    let gs = vec![permutation_matrix(r, &perms[c / 36]), permutation_matrix(r, &perms[(c / 6) % 6]), permutation_matrix(r, &perms[c % 6])];
    let g = GroupTuple::new(gs.clone())?;
    ensure(cocycle_check(&g)?, "cocycle on S3", String::new, || vec![("tuple", gs.iter().join(" | "))])
}

fn random_triple(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let gs: Vec<MatrixF> = (0..3).map(|_| gen::random_gl(&mut rng, r, 2, cfg.bound)).collect();
    let g = GroupTuple::new(gs.clone())?;
    ensure(cocycle_check(&g)?, "cocycle on GL2", String::new, || vec![("tuple", gs.iter().join(" | "))])
}

fn alpha_transport(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let m = 1 + (case as usize) % 3;
    let gs: Vec<MatrixF> = (0..m).map(|_| gen::random_gl(&mut rng, r, n, cfg.bound)).collect();
    let l = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let g = GroupTuple::new(gs.clone())?;
    ensure(alpha_transport_check(&g, &l)?, "alpha transport", String::new, || {
        vec![("tuple", gs.iter().join(" | ")), ("lattice", l.to_string())]
    })
}

fn l_map_faces(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let m = 1 + (case as usize) % 3;
    let gs: Vec<MatrixF> = (0..m).map(|_| gen::random_gl(&mut rng, r, n, cfg.bound)).collect();
    let l = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let g = GroupTuple::new(gs.clone())?;
    let img = l_map(&g, &l)?;
    let payload = || vec![("tuple", gs.iter().join(" | ")), ("lattice", l.to_string())];
    for i in 1..=m {
        ensure(img.face(i)? == l_map(&g.face(i)?, &l)?, "faces d_i, i > 0", || format!("i = {i}"), payload)?;
    }
    for i in 0..=m {
        ensure(img.degeneracy(i)? == l_map(&g.degeneracy(i, r, n)?, &l)?, "degeneracies", || format!("i = {i}"), payload)?;
    }
    Ok(())
}

// simplicial

/// Simplicial identities at an object `x` of dimension `m`, and with `recurse`
/// at all of its iterated faces.
fn identities_at<T: PartialEq + Clone>(
    x: &T,
    m: usize,
    recurse: bool,
    face: &dyn Fn(&T, usize) -> Result<T, CaseFailure>,
    degen: &dyn Fn(&T, usize) -> Result<T, CaseFailure>,
) -> Result<Option<String>, CaseFailure> {
    for j in 0..=m {
        let sj = degen(x, j)?;
        for i in 0..=j {
            if degen(&sj, i)? != degen(&degen(x, i)?, j + 1)? {
                return Ok(Some(format!("s{i} s{j} at dim {m}")));
            }
        }
        for i in 0..=m + 1 {
            let lhs = face(&sj, i)?;
            let rhs = if i < j {
                degen(&face(x, i)?, j - 1)?
            } else if i == j || i == j + 1 {
                x.clone()
            } else {
                degen(&face(x, i - 1)?, j)?
            };
            if lhs != rhs {
                return Ok(Some(format!("d{i} s{j} at dim {m}")));
            }
        }
    }
    if m >= 2 {
        for j in 1..=m {
            for i in 0..j {
                if face(&face(x, j)?, i)? != face(&face(x, i)?, j - 1)? {
                    return Ok(Some(format!("d{i} d{j} at dim {m}")));
                }
            }
        }
    }
    if recurse && m >= 1 {
        for i in 0..=m {
            if let Some(e) = identities_at(&face(x, i)?, m - 1, true, face, degen)? {
                return Ok(Some(e));
            }
        }
    }
    Ok(None)
}

fn chain_identities(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let c = LatticeChain::new(gen::random_chain(&mut rng, r, rank(cfg, case), 4, cfg.bound))?;
    let bad = identities_at(&c, 4, true, &|x, i| Ok(x.face(i)?), &|x, i| Ok(x.degeneracy(i)?))?;
    ensure(bad.is_none(), "chain identities", || bad.clone().unwrap_or_default(), || vec![("chain", c.lattices().iter().join(" | "))])
}

fn bar_identities(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let gs: Vec<MatrixF> = (0..4).map(|_| gen::random_gl(&mut rng, r, n, cfg.bound)).collect();
    let g = GroupTuple::new(gs.clone())?;
    let bad = identities_at(&g, 4, true, &|x, i| Ok(x.face(i)?), &|x, i| Ok(x.degeneracy(i, r, n)?))?;
    ensure(bad.is_none(), "bar construction identities", || bad.clone().unwrap_or_default(), || vec![("tuple", gs.iter().join(" | "))])
}

fn index_faces(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let m = 1 + (case as usize) % 4;
    let c = LatticeChain::new(gen::random_chain(&mut rng, r, rank(cfg, case), m, cfg.bound))?;
    let s = index_of_chain(&c)?;
    let payload = || vec![("chain", c.lattices().iter().join(" | "))];
    for i in 0..=m {
        let a = index_of_chain(&c.face(i)?)?.invariants()?;
        let b = s.sface(i)?.invariants()?;
        ensure(a == b, "Index commutes with faces", || format!("d{i}"), payload)?;
        let a = index_of_chain(&c.degeneracy(i)?)?.invariants()?;
        let b = s.sdegeneracy(i)?.invariants()?;
        ensure(a == b, "Index commutes with degeneracies", || format!("s{i}"), payload)?;
    }
    let top = Inv::new(s)?;
    let bad = identities_at(&top, m, false, &|x, i| Inv::new(x.0.sface(i)?), &|x, i| Inv::new(x.0.sdegeneracy(i)?))?;
    ensure(bad.is_none(), "S-chain identities on invariants", || bad.clone().unwrap_or_default(), payload)
}

/// An S-chain compared through its subquotient invariants.
#[derive(Clone)]
struct Inv(crate::schain::SChainObject, Vec<Vec<u32>>);

impl Inv {
    fn new(s: crate::schain::SChainObject) -> Result<Self, CaseFailure> {
        let inv = s.invariants()?;
        Ok(Inv(s, inv))
    }
}

impl PartialEq for Inv {
    fn eq(&self, other: &Self) -> bool {
        self.1 == other.1
    }
}

fn gr_coskeletal(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let k = 2 + (case as usize) % 2;
    let ls: Vec<Lattice> = (0..k).map(|_| gen::random_lattice(&mut rng, r, n, cfg.bound)).collect();
    let x = gr_tuples(&ls, cfg.degree.min(4))?;
    x.check_identities()?;
    ensure(coskeletal_check(&x, 0), "Gr tuples are 0-coskeletal", String::new, || vec![("lattices", ls.iter().join(" | "))])
}

fn bar_segal(cfg: &RunConfig, _case: u64) -> CaseResult {
    let r = ring(cfg)?;
    let perms: Vec<MatrixF> = (0..3).permutations(3).map(|p| permutation_matrix(r, &p)).collect();
    for m in 2..=3 {
        ensure(bar_segal_check(&perms, m)?, "bar construction spine bijection", || format!("level {m}"), Vec::new)?;
    }
    Ok(())
}

// grassmannian

const WITNESSES: usize = 50;

fn sup_inf_bounds(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let l0 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let l1 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let sup = l0.sup(&l1)?;
    let inf = l0.inf(&l1)?;
    let payload = || vec![("l0", l0.to_string()), ("l1", l1.to_string())];
    for l in [&l0, &l1] {
        ensure(inf.leq(l)? && l.leq(&sup)?, "inf <= L_i <= sup", String::new, payload)?;
    }
    let up = MatrixF::diag_pi(r, &vec![-1; n]);
    let down = MatrixF::diag_pi(r, &vec![1; n]);
    for _ in 0..WITNESSES {
        let mut w = gen::random_superlattice(&mut rng, &l0, cfg.bound);
        while !l1.leq(&w)? {
            w = w.act(&up)?;
        }
        ensure(sup.leq(&w)?, "sup below every common over-lattice", || format!("witness {w}"), payload)?;
        let mut v = gen::random_sublattice(&mut rng, &l0, cfg.bound);
        while !v.leq(&l1)? {
            v = v.act(&down)?;
        }
        ensure(v.leq(&inf)?, "inf above every common sublattice", || format!("witness {v}"), payload)?;
    }
    Ok(())
}

fn duality(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let l0 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let l1 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let payload = || vec![("l0", l0.to_string()), ("l1", l1.to_string())];
    ensure(l0.dual()?.dual()? == l0, "double dual", String::new, payload)?;
    ensure(l0.leq(&l1)? == l1.dual()?.leq(&l0.dual()?)?, "duality reverses order", String::new, payload)?;
    let rel = l0.rel_index(&l1)?;
    let drel = l1.dual()?.rel_index(&l0.dual()?)?;
    ensure(rel == drel, "duality preserves relative index", || format!("{rel} vs {drel}"), payload)
}

// oracle

fn relindex_oracle(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rank(cfg, case);
    let l0 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let l1 = gen::random_lattice(&mut rng, r, n, cfg.bound);
    let a = l0.rel_index(&l1)?;
    let b = l0.rel_index_via_quotients(&l1)?;
    ensure(a == b, "det valuation vs quotient lengths", || format!("{a} vs {b}"), || {
        vec![("l0", l0.to_string()), ("l1", l1.to_string())]
    })
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &MatrixF) -> FieldElement {
    let r = m.ring();
    let n = m.rows();
    if n == 0 {
        return FieldElement::one(r);
    }
    let mut acc = FieldElement::zero(r);
    for j in 0..n {
        let minor = m.submatrix(&(1..n).collect::<Vec<_>>(), &(0..n).filter(|&c| c != j).collect::<Vec<_>>());
        let term = m.get(0, j).mul(&cofactor_det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) }.expect("exact arithmetic");
    }
    acc
}

/// Elementary divisor exponents from minimal valuations of `k x k` minors.
pub fn minor_exponents(m: &MatrixF) -> Vec<u32> {
    let r = m.rows().min(m.cols());
    let mut prev = 0i64;
    let mut out = Vec::with_capacity(r);
    for k in 1..=r {
        let mut best = Valuation::Infinity;
        for rows in (0..m.rows()).combinations(k) {
            for cols in (0..m.cols()).combinations(k) {
                best = best.min(cofactor_det(&m.submatrix(&rows, &cols)).valuation());
            }
        }
        let d = best.finite().expect("full rank");
        out.push((d - prev) as u32);
        prev = d;
    }
    out
}

fn smith_oracle(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let rows = rng.gen_range(1..=4);
    let cols = rng.gen_range(1..=4);
    let m = gen::random_full_rank_integral(&mut rng, r, rows, cols, cfg.bound);
    let snf = smith_over_dvr(&m)?;
    let mut got = snf.exponents.clone();
    got.sort_unstable();
    let want = minor_exponents(&m);
    let payload = || vec![("matrix", m.to_string())];
    ensure(got == want, "Smith exponents vs minors", || format!("{got:?} vs {want:?}"), payload)?;
    let lhs = snf.left.matmul(&m)?.matmul(&snf.right)?;
    let diff = lhs.sub(&snf.diagonal(r))?;
    let ok = diff.entries().iter().all(|e| e.valuation() >= Valuation::Finite(snf.modulus as i64));
    ensure(ok, "U M V = D modulo pi^K", String::new, payload)
}

fn det_oracle(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let n = rng.gen_range(1..=4);
    let m = MatrixF::from_fn(r, n, n, |_, _| gen::random_laurent(&mut rng, r, cfg.bound, 2));
    let a = m.det()?;
    let b = cofactor_det(&m);
    ensure(a == b, "Bareiss vs cofactor determinant", || format!("{a} vs {b}"), || vec![("matrix", m.to_string())])
}

// an-compare

fn an_compare(cfg: &RunConfig, case: u64) -> CaseResult {
    let mut rng = case_rng(cfg.seed, case);
    let r = ring(cfg)?;
    let m = 1 + (case as usize) % 3;
    let n = rank(cfg, case);
    let c = LatticeChain::new(gen::random_chain(&mut rng, r, n, m, cfg.bound))?;
    let rep = a_n_comparison(&c)?;
    let payload = || vec![("chain", c.lattices().iter().join(" | "))];
    ensure(rep.holds(), "A[n], B[n] and T[n] routes agree", || format!("{rep:?}"), payload)?;
    let g = gen::random_gl(&mut rng, r, n, cfg.bound);
    let moved = c.act(&g)?.class_vector()?;
    ensure(moved == rep.class_vector, "class vector is GL-invariant", || format!("{moved:?}"), payload)
}

// appendix

pub const APPENDIX_CATEGORIES: [&str; 4] = ["ordinal:1", "ordinal:2", "cyclic:2", "walking-iso"];

fn lemma_pre(cfg: &RunConfig, case: u64) -> CaseResult {
    let c = FiniteCategory::preset(APPENDIX_CATEGORIES[case as usize])?;
    let rep = lemma_pre_check(&c, cfg.degree, DEFAULT_BUDGET)?;
    ensure(rep.holds(), "Rezk nerve, row and column comparisons", || format!("{rep:?}"), || vec![("category", c.name().to_string())])
}

fn naturality(cfg: &RunConfig, case: u64) -> CaseResult {
    let (c, d, phi) = match case {
        0 => {
            // [1] -> [2], 0 -> 0, 1 -> 2
            let (c, d) = (FiniteCategory::ordinal(1), FiniteCategory::ordinal(2));
            let obj = vec![0, 2];
            let mor = (0..c.morphisms()).map(|f| d.unique_hom(obj[c.src(f)], obj[c.tgt(f)]).unwrap()).collect();
            (c, d, Functor { obj, mor })
        }
        1 => {
            // C4 -> C2, reduction mod 2
            let (c, d) = (FiniteCategory::cyclic(4), FiniteCategory::cyclic(2));
            (c, d, Functor { obj: vec![0], mor: vec![0, 1, 0, 1] })
        }
        _ => {
            // walking isomorphism -> [0]
            let (c, d) = (FiniteCategory::walking_iso(), FiniteCategory::ordinal(0));
            (c, d, Functor { obj: vec![0, 0], mor: vec![0; 4] })
        }
    };
    let ok = lemma_pre_naturality(&c, &d, &phi, cfg.degree.min(4))?;
    ensure(ok, "comparison squares commute", || format!("{} -> {}", c.name(), d.name()), Vec::new)
}

fn nerve_products(cfg: &RunConfig, case: u64) -> CaseResult {
    let pairs = [("ordinal:1", "ordinal:1"), ("cyclic:2", "ordinal:1"), ("walking-iso", "cyclic:2")];
    let (a, b) = pairs[case as usize];
    let (c, d) = (FiniteCategory::preset(a)?, FiniteCategory::preset(b)?);
    ensure(nerve_product_check(&c, &d, cfg.degree.min(4))?, "N(C x D) = NC x ND", || format!("{a} x {b}"), Vec::new)
}

fn delta_prime_part(cfg: &RunConfig, case: u64) -> CaseResult {
    let n = case as usize;
    let deg = cfg.degree.min(4);
    let d = delta_prime(n, deg)?;
    d.check_identities()?;
    let want: Vec<usize> = (0..=deg).map(|m| (n + 1).pow(m as u32 + 1)).collect();
    ensure(d.sizes() == want.as_slice(), "level sizes (n+1)^(m+1)", || format!("{:?} vs {want:?}", d.sizes()), Vec::new)?;
    ensure(coskeletal_check(&d, 0), "0-coskeletal", || format!("n = {n}"), Vec::new)
}

fn segal_part(cfg: &RunConfig, case: u64) -> CaseResult {
    let deg = cfg.degree.min(4);
    let (x, name, segal, reduced): (TruncatedSimplicialSet, &str, bool, bool) = match case {
        0 => (nerve(&FiniteCategory::cyclic(3), deg)?, "nerve of C3", true, true),
        1 => (nerve(&FiniteCategory::symmetric(3), deg.min(3))?, "nerve of S3", true, true),
        2 => (nerve(&FiniteCategory::ordinal(2), deg)?, "nerve of [2]", true, false),
        3 => (standard_simplex(2, deg, true), "spine of the 2-simplex", false, false),
        _ => (codiscrete(2, deg), "codiscrete on 2 vertices", true, false),
    };
    x.check_identities()?;
    let rep = segal_check(&x, deg);
    ensure(rep.is_segal() == segal && rep.reduced == reduced, "Segal verdict", || format!("{name}: {rep:?}"), Vec::new)
}

fn coskeletal_part(cfg: &RunConfig, case: u64) -> CaseResult {
    let deg = cfg.degree.min(4);
    let (x, k, want, name) = match case {
        0 => (standard_simplex(1, deg, false), 0, false, "1-simplex, k = 0"),
        1 => (nerve(&FiniteCategory::ordinal(2), deg)?, 1, true, "nerve of [2], k = 1"),
        _ => (nerve(&FiniteCategory::cyclic(2), deg)?, 0, false, "nerve of C2, k = 0"),
    };
    ensure(coskeletal_check(&x, k) == want, "coskeletal verdict", || name.to_string(), Vec::new)
}

fn grothendieck_part(cfg: &RunConfig, case: u64) -> CaseResult {
    let r = ring(cfg)?;
    match case {
        0 => {
            let g = FiniteCategory::walking_iso();
            let x = codiscrete(3, 3);
            let (total, _) = grothendieck(&GroupoidAction::constant(g.clone(), x.clone()))?;
            total.check_identities()?;
            let ng = nerve(&g, 3)?;
            let ok = (0..=3).all(|m| total.size(m) == ng.size(m) * x.size(m));
            ensure(ok, "constant functor gives the product", || format!("{:?}", total.sizes()), Vec::new)
        }
        1 => {
            let g = FiniteCategory::cyclic(2);
            let x = standard_simplex(1, 3, false);
            let (total, _) = grothendieck(&GroupoidAction::constant(g, x.clone()))?;
            total.check_identities()?;
            let ok = (0..=3).all(|m| total.size(m) == (1 << m) * x.size(m));
            ensure(ok, "trivial action on one object", || format!("{:?}", total.sizes()), Vec::new)
        }
        _ => {
            // two lattices at object 0, their images under g at object 1
            let l1 = Lattice::standard(r, 2);
            let l2 = l1.act(&MatrixF::diag_pi(r, &[1, 0]))?;
            let g = MatrixF::from_fn(r, 2, 2, |i, j| match (i, j) {
                (0, 1) => FieldElement::one(r),
                (1, 0) => FieldElement::monomial(r, 1, 1),
                _ => FieldElement::zero(r),
            });
            let a = vec![l1.clone(), l2.clone()];
            let b = vec![l1.act(&g)?, l2.act(&g)?];
            let xa = gr_tuples(&a, 2)?;
            let xb = gr_tuples(&b, 2)?;
            let grp = FiniteCategory::walking_iso();
            // tuples on two vertices are enumerated in the same order for both objects,
            // and g sends vertex i of the first to vertex i of the second
            let id: Vec<Vec<usize>> = (0..=2).map(|m| (0..xa.size(m)).collect()).collect();
            let values = vec![xa, xb];
            let action = vec![id.clone(); grp.morphisms()];
            let (total, _) = grothendieck(&GroupoidAction { groupoid: grp, values, action })?;
            total.check_identities()?;
            ensure(total.sizes() == [4, 16, 64], "hand count 2^(m+1) * 2^(m+1)", || format!("{:?}", total.sizes()), Vec::new)
        }
    }
}

fn restriction_part(cfg: &RunConfig, case: u64) -> CaseResult {
    let deg = cfg.degree.min(4);
    match case {
        0 => {
            let x = nerve(&FiniteCategory::ordinal(1), deg)?;
            let y = p_star(1, &x);
            y.check_identities()?;
            let back = iota_star(1, &y);
            let id: Vec<Vec<usize>> = (0..=deg).map(|m| (0..x.size(m)).collect()).collect();
            ensure(is_isomorphism(&back, &x, &id), "iota_1^* p_1^* X = X", String::new, Vec::new)
        }
        _ => {
            let pt = standard_simplex(0, deg, false);
            let y = p_star(2, &pt);
            y.check_identities()?;
            ensure(y.sizes().values().all(|&s| s == 1), "p_2^* of a point is a point", String::new, Vec::new)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_is_green() {
        let cfg = RunConfig { cases: 0, ..RunConfig::default() };
        let rep = run_suite("all", &cfg).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.cases, 0);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &RunConfig::default()), Err(CheckError::UnknownSuite(_))));
    }

    #[test]
    fn small_runs() {
        let cfg = RunConfig { cases: 3, ..RunConfig::default() };
        for s in ["additivity", "cocycle", "oracle", "an-compare", "grassmannian"] {
            let rep = run_suite(s, &cfg).unwrap();
            assert!(rep.passed(), "{}", rep.summary());
        }
    }
}
