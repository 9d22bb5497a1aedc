//! Acceptance run: one line per criterion, exact equality throughout.
//!
//! Criteria 1 to 9 run the suites in-process with the default fixtures and
//! seed 42; criterion 10 drives the built binary twice.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use avjet::io::{run_suite, Report, Status, SuiteConfig};

const SEED: u64 = 42;
const CHARTS: [&str; 3] = ["C1", "C2", "C3"];
const ORDERS: [u32; 4] = [1, 2, 3, 4];

struct Outcome {
    problems: Vec<String>,
    checks: usize,
}

impl Outcome {
    fn new() -> Self {
        Outcome { problems: Vec::new(), checks: 0 }
    }

    /// Requires at least `min` checks whose id starts with `prefix`, all passing.
    fn group(&mut self, reports: &[&Report], prefix: &str, min: usize) {
        let hits: Vec<_> = reports.iter().flat_map(|r| &r.checks).filter(|c| c.id.starts_with(prefix)).collect();
        let failed = hits.iter().filter(|c| c.status == Status::Fail).count();
        if hits.len() < min {
            self.problems.push(format!("{prefix}: {} cases, need {min}", hits.len()));
        }
        if failed > 0 {
            let first = hits.iter().find(|c| c.status == Status::Fail).unwrap();
            self.problems.push(format!("{prefix}: {failed} failed, first {}", first.id));
        }
        self.checks += hits.len();
    }

    fn require(&mut self, ok: bool, what: &str) {
        if !ok {
            self.problems.push(what.to_string());
        }
    }

    fn within(&mut self, took: Duration, bound: Option<Duration>) {
        if let Some(b) = bound {
            if took >= b {
                self.problems.push(format!("took {:.1}s, bound {}s", took.as_secs_f64(), b.as_secs()));
            }
        }
    }
}

fn suites(names: &[&str]) -> (Vec<Report>, Duration) {
    let cfg = SuiteConfig::default();
    let start = Instant::now();
    let reports = names.iter().map(|s| run_suite(s, SEED, &cfg).expect("suite runs")).collect();
    (reports, start.elapsed())
}

fn has_param(r: &Report, prefix: &str, key: &str, value: &str) -> bool {
    r.checks.iter().any(|c| c.id.starts_with(prefix) && c.params.get(key).and_then(|v| v.as_str()) == Some(value))
}

fn derivations() -> Outcome {
    let (r, took) = suites(&["derivations"]);
    let mut o = Outcome::new();
    for c in CHARTS {
        o.group(&[&r[0]], &format!("derivations/leibniz/{c}#"), 200);
        o.group(&[&r[0]], &format!("derivations/commute/{c}#"), 200);
    }
    o.group(&[&r[0]], "derivations/relation/C3#", 200);
    o.within(took, Some(Duration::from_secs(30)));
    o
}

fn jet_hom() -> Outcome {
    let (r, took) = suites(&["jet-hom"]);
    let r = &r[0];
    let mut o = Outcome::new();
    for c in CHARTS {
        for k in ORDERS {
            o.group(&[r], &format!("jet-hom/multiplicative/{c}/k={k}#"), 200);
        }
    }
    o.within(took, Some(Duration::from_secs(60)));
    o
}

fn taylor() -> Outcome {
    let (r, took) = suites(&["taylor"]);
    let mut o = Outcome::new();
    for c in CHARTS {
        for k in ORDERS {
            o.group(&[&r[0]], &format!("taylor/identity/{c}/k={k}#"), 100);
            if c != "C1" {
                o.group(&[&r[0]], &format!("taylor/special/{c}/"), 1);
            }
        }
    }
    o.require(has_param(&r[0], "taylor/special/C2/", "f", "1/(x)"), "no case with f = 1/x on C2");
    o.require(has_param(&r[0], "taylor/special/C3/", "f", "y"), "no case with f = y on C3");
    o.within(took, Some(Duration::from_secs(60)));
    o
}

fn delta_leibniz() -> Outcome {
    let (r, _) = suites(&["jet-hom"]);
    let r = &r[0];
    let mut o = Outcome::new();
    for c in CHARTS {
        o.group(&[r], &format!("jet-hom/delta-leibniz/{c}#"), 200);
    }
    o
}

fn smash() -> Outcome {
    let (r, _) = suites(&["smash-bracket"]);
    let mut o = Outcome::new();
    for c in CHARTS {
        for (g, min) in [("oracle", 200), ("antisymmetry", 100), ("jacobi", 100), ("ideal", 200), ("anchor", 200)] {
            o.group(&[&r[0]], &format!("smash-bracket/{g}/{c}#"), min);
        }
    }
    o
}

fn isomorphism() -> Outcome {
    let (r, _) = suites(&["iso-roundtrip", "iso-hom"]);
    let all: Vec<&Report> = r.iter().collect();
    let mut o = Outcome::new();
    for c in CHARTS {
        for k in ORDERS {
            o.group(&all, &format!("iso-roundtrip/psi-phi/{c}/k={k}#"), 200);
            o.group(&all, &format!("iso-roundtrip/phi-psi/{c}/k={k}#"), 200);
        }
        o.group(&all, &format!("iso-hom/bracket/{c}#"), 100);
        o.group(&all, &format!("iso-hom/linear-phi/{c}#"), 100);
        o.group(&all, &format!("iso-hom/linear-psi/{c}#"), 100);
    }
    o.group(&all, "iso-roundtrip/affine/C1/k=6#", 1);
    o
}

fn localization() -> Outcome {
    let (r, _) = suites(&["localization"]);
    let mut o = Outcome::new();
    for (c, g) in [("C2", "x"), ("C3", "y")] {
        for e in 0..5 {
            for k in 0..=4 {
                for m in 0..=k {
                    o.group(&[&r[0]], &format!("localization/{c}/eta{e}/k={k}/m={m}"), 1);
                }
            }
        }
        o.require(has_param(&r[0], &format!("localization/{c}/"), "g", g), &format!("g is not {g} on {c}"));
    }
    o
}

fn av_tensor() -> Outcome {
    let (r, _) = suites(&["av-tensor", "pbw"]);
    let all: Vec<&Report> = r.iter().collect();
    let mut o = Outcome::new();
    for c in CHARTS {
        for rr in 1..=3 {
            o.group(&all, &format!("av-tensor/leibniz/{c}/r={rr}#"), 100);
            o.group(&all, &format!("av-tensor/multiplicative/{c}/r={rr}#"), 100);
        }
    }
    for n in [1, 2] {
        o.group(&all, &format!("pbw/idempotent/N={n}#"), 200);
        o.group(&all, &format!("pbw/associativity/N={n}#"), 200);
    }
    o
}

fn transitions() -> Outcome {
    let (r, took) = suites(&["transition", "cocycle"]);
    let all: Vec<&Report> = r.iter().collect();
    let mut o = Outcome::new();
    let charts = ["U0", "U1", "U2"];
    for a in charts {
        for b in charts.iter().filter(|b| **b != a) {
            for m in 1..=3 {
                o.group(&all, &format!("transition/formula/{a}->{b}/m=[{m}]/p=0"), 1);
                o.group(&all, &format!("transition/filtration/{a}->{b}/m=[{m}]/p=0"), 1);
            }
            o.group(&all, &format!("transition/quotient/{a}->{b}/"), 1);
        }
        o.group(&all, &format!("transition/identity/{a}/"), 3);
    }
    o.group(&all, "transition/values/U0->U1/", 2);
    o.group(&all, "cocycle/", 6 * 3);
    o.group(&all, "transition/setup/", 0);
    o.within(took, Some(Duration::from_secs(120)));
    o
}

fn reproducibility() -> Outcome {
    let mut o = Outcome::new();
    let dir = std::env::temp_dir().join(format!("avjet-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let start = Instant::now();
    let mut outputs = Vec::new();
    for run in ["first", "second"] {
        let out = dir.join(format!("{run}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_avjet"))
            .args(["verify", "all", "--seed", "42", "--out"])
            .arg(&out)
            .stdout(std::process::Stdio::null())
            .status()
            .expect("binary runs");
        o.require(status.success(), &format!("{run} run exited with {status}"));
        outputs.push(std::fs::read(&out).unwrap_or_default());
    }
    o.within(start.elapsed(), Some(Duration::from_secs(600)));
    o.require(!outputs[0].is_empty(), "no report written");
    o.require(outputs[0] == outputs[1], "reports differ");
    if let Ok(report) = Report::from_json(&String::from_utf8_lossy(&outputs[0])) {
        o.require(report.all_passed(), "the combined report has failures");
        o.checks = report.summary.total;
    } else {
        o.require(false, "report does not parse");
    }
    let _ = std::fs::remove_dir_all(&dir);
    o
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut line = |n: u32, title: &str, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        if o.problems.is_empty() {
            println!("PASS criterion {n:>2}: {title} ({} checks, {secs:.1}s)", o.checks);
        } else {
            failures += 1;
            println!("FAIL criterion {n:>2}: {title} ({secs:.1}s): {}", o.problems.join("; "));
        }
    };
    line(1, "derivation soundness", &derivations);
    line(2, "jet homomorphism", &jet_hom);
    line(3, "Taylor identities", &taylor);
    line(4, "delta Leibniz identity", &delta_leibniz);
    line(5, "smash product bracket", &smash);
    line(6, "jet fields and the semidirect product", &isomorphism);
    line(7, "localization partial sums", &localization);
    line(8, "enveloping algebra map and PBW straightening", &av_tensor);
    line(9, "atlas transitions and cocycle", &transitions);
    line(10, "reproducible reports", &reproducibility);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
