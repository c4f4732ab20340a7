//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tateindex::check::{run_parts, run_suite, suite_parts, Part, RunConfig, SuiteReport};
use tateindex::dvr::RingKind;

fn parts(names: &[&str]) -> Vec<Part> {
    let all = suite_parts("all").expect("suite exists");
    names.iter().map(|n| *all.iter().find(|p| p.name == *n).unwrap_or_else(|| panic!("no part {n}"))).collect()
}

fn run(names: &[&str], cfg: RunConfig) -> SuiteReport {
    run_parts("acceptance", &cfg, &parts(names))
}

fn cfg(cases: u64) -> RunConfig {
    RunConfig { cases, ..RunConfig::default() }
}

struct Line {
    id: &'static str,
    what: &'static str,
    reports: Vec<SuiteReport>,
    limit: Option<Duration>,
    elapsed: Duration,
}

impl Line {
    fn passed(&self) -> bool {
        self.reports.iter().all(SuiteReport::passed) && self.limit.is_none_or(|l| self.elapsed < l)
    }

    fn print(&self) {
        let cases: u64 = self.reports.iter().map(|r| r.cases).sum();
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let limit = self.limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!("{verdict} {:<4} {} [{cases} cases, {:.1} s{limit}]", self.id, self.what, self.elapsed.as_secs_f64());
        for r in self.reports.iter().filter(|r| !r.passed()) {
            print!("{}", r.summary());
        }
    }
}

fn criterion(id: &'static str, what: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Vec<SuiteReport>) -> Line {
    let start = Instant::now();
    let reports = f();
    Line { id, what, reports, limit, elapsed: start.elapsed() }
}

fn main() -> ExitCode {
    let lines = vec![
        criterion("1", "Index(g1) + Index(g2) = Index(g1 g2), n in {1,2,3}, p in {2,5}", Some(Duration::from_secs(10)), || {
            [2, 5]
                .into_iter()
                .map(|p| run(&["index-additivity"], RunConfig { p, n: 3, ..cfg(250) }))
                .collect()
        }),
        criterion("2", "relative index by determinants vs quotients; Smith exponents vs minors", None, || {
            vec![run(&["relindex-det-vs-quotients"], cfg(500)), run(&["smith-vs-minors"], cfg(200))]
        }),
        criterion("3", "inf <= L_i <= sup, sup below 50 common over-lattices", None, || {
            vec![run(&["sup-inf-bounds"], cfg(300))]
        }),
        criterion("4", "pre-index invariant under trees and B-embeddings; telescoping on B[2]", None, || {
            vec![run(&["tree-invariance", "b-embeddings", "b2-telescoping"], cfg(200))]
        }),
        criterion("5", "simplicial identities, Index on faces, alpha-cocycle", None, || {
            vec![
                run(&["chain-identities", "bar-identities", "s3-triples", "index-faces"], cfg(100)),
                run(&["random-triples"], cfg(500)),
            ]
        }),
        criterion("6", "A[n] comparison on random chains", None, || vec![run(&["a-n-comparison"], cfg(100))]),
        criterion("7", "Rezk and row/column bijections, Segal, 0-coskeletal Gr tuples", None, || {
            vec![run(
                &["lemma-pre", "lemma-pre-naturality", "segal", "coskeletal", "delta-prime", "gr-coskeletal"],
                RunConfig { degree: 4, ..cfg(100) },
            )]
        }),
        criterion("8", "section/contraction checks and one rejected violation per condition", None, || {
            vec![run(&["contraction", "contraction-violations"], cfg(100))]
        }),
        criterion("all", "check all with default budgets", Some(Duration::from_secs(300)), || {
            vec![run_suite("all", &RunConfig::default()).expect("suite exists")]
        }),
        criterion("padic", "check all on Z_5 with 20 cases", None, || {
            vec![run_suite("all", &RunConfig { p: 5, ring: RingKind::Padic, ..cfg(20) }).expect("suite exists")]
        }),
    ];
    for l in &lines {
        l.print();
    }
    if lines.iter().all(Line::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
