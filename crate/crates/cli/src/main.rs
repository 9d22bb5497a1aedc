use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use avjet::atlas::{cocycle_check, transition_l, transition_via_iso, AtlasSpec};
use avjet::chart::Chart;
use avjet::envalg::av_to_tensor;
use avjet::fixtures;
use avjet::io::{self, SuiteConfig};
use avjet::jet::{delta, jet_of};
use avjet::jet_field::{localization_partial_sum, localization_remainder, JetField};
use avjet::lplus::{phi, psi};
use avjet::MultiIndex;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "avjet", version, about = "Exact jets of vector fields on étale charts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Chart definition file, or one of the built-in charts A1, C1, C2, C3.
    #[arg(long, global = true)]
    chart: Vec<String>,
    /// Atlas definition file, or the built-in atlas P1.
    #[arg(long, global = true)]
    atlas: Option<String>,
    /// Jet order k (truncation r for L-valued results).
    #[arg(long, global = true)]
    order: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BracketKind {
    Vf,
    Jetfield,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate chart and atlas files.
    Validate,
    /// The jet f(x+t) of a function.
    Jet { expr: String },
    /// δ(f) = f(x) - f(x+t).
    Delta { expr: String },
    /// Bracket of two vector fields or two jet fields.
    Bracket {
        #[arg(value_enum)]
        kind: BracketKind,
        lhs: String,
        rhs: String,
    },
    /// φ: jet field ↦ element of V ⋉ A⊗L.
    Phi { field: String },
    /// ψ: element of V ⋉ A⊗L ↦ jet field.
    Psi { elem: String },
    /// Partial sums for 1#(1/g)η and their defect.
    Localize {
        #[arg(long)]
        g: String,
        #[arg(long)]
        eta: String,
        /// Number m of terms after the first.
        #[arg(long)]
        terms: u32,
    },
    /// Product of two differential operators.
    DopMul { lhs: String, rhs: String },
    /// Image of a word in AV, e.g. `vf: (x)*D(x); fun: x^2`.
    AvMap { word: String },
    /// Transition of X^m ∂/∂X_p between two charts of the atlas.
    Transition {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Comma-separated exponents of m.
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 0)]
        p: usize,
    },
    /// Cocycle condition on a triple overlap for all 1 <= |m| <= max-degree.
    Cocycle {
        /// Comma-separated chart names i,j,l.
        #[arg(long)]
        triple: String,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Run a verification suite.
    Verify {
        /// Suite id, or `all`.
        suite: String,
        /// Run only the case with this id.
        #[arg(long)]
        case: Option<String>,
        /// Write the JSON report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override every per-group sample count.
        #[arg(long)]
        samples: Option<usize>,
    },
}

/// Result of a command: what to print and whether the checks passed.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

impl Outcome {
    fn value(text: String, json: Value) -> Self {
        Outcome { text, json, ok: true }
    }
}

fn load_chart(spec: &str) -> Result<Arc<Chart>> {
    if Path::new(spec).exists() {
        return io::load_chart(spec).with_context(|| format!("loading chart {spec}"));
    }
    match spec {
        "A1" => Ok(fixtures::affine_line()),
        "C1" => Ok(fixtures::c1()),
        "C2" => Ok(fixtures::c2()),
        "C3" => Ok(fixtures::c3()),
        _ => bail!("no chart file or built-in chart named `{spec}`"),
    }
}

fn load_atlas(spec: &str) -> Result<AtlasSpec> {
    if Path::new(spec).exists() {
        return io::load_atlas(spec).with_context(|| format!("loading atlas {spec}"));
    }
    match spec {
        "P1" => Ok(fixtures::projective_line_atlas()),
        _ => bail!("no atlas file or built-in atlas named `{spec}`"),
    }
}

impl Cli {
    fn chart(&self) -> Result<Arc<Chart>> {
        match self.chart.as_slice() {
            [one] => load_chart(one),
            [] => bail!("--chart is required"),
            _ => bail!("exactly one --chart expected"),
        }
    }

    fn atlas(&self) -> Result<AtlasSpec> {
        load_atlas(self.atlas.as_deref().ok_or_else(|| anyhow!("--atlas is required"))?)
    }

    fn order(&self) -> Result<u32> {
        self.order.ok_or_else(|| anyhow!("--order is required"))
    }
}

fn parse_index(s: &str) -> Result<MultiIndex> {
    let exps = s.split(',').map(|e| e.trim().parse::<u32>()).collect::<Result<Vec<_>, _>>()?;
    Ok(MultiIndex::from_slice(&exps))
}

fn run(cli: &Cli) -> Result<Outcome> {
    Ok(match &cli.command {
        Command::Validate => {
            let mut names = Vec::new();
            for c in &cli.chart {
                names.push(load_chart(c)?.name().to_string());
            }
            if let Some(a) = &cli.atlas {
                let atlas = load_atlas(a)?;
                names.push(format!("atlas:{}", atlas.name));
            }
            if names.is_empty() {
                bail!("nothing to validate: pass --chart and/or --atlas");
            }
            Outcome::value(format!("valid: {}", names.join(", ")), json!({ "valid": names }))
        }
        Command::Jet { expr } => {
            let c = cli.chart()?;
            let j = jet_of(&io::parse_ring_elem(expr, &c)?, cli.order()?)?;
            Outcome::value(j.to_string(), json!({ "jet": j.to_string() }))
        }
        Command::Delta { expr } => {
            let c = cli.chart()?;
            let j = delta(&io::parse_ring_elem(expr, &c)?, cli.order()?)?;
            Outcome::value(j.to_string(), json!({ "delta": j.to_string() }))
        }
        Command::Bracket { kind, lhs, rhs } => {
            let c = cli.chart()?;
            let out = match kind {
                BracketKind::Vf => io::parse_vector_field(lhs, &c)?.bracket(&io::parse_vector_field(rhs, &c)?)?.to_string(),
                BracketKind::Jetfield => {
                    let k = cli.order()?;
                    io::parse_jet_field(lhs, &c, k)?.bracket(&io::parse_jet_field(rhs, &c, k)?)?.to_string()
                }
            };
            Outcome::value(out.clone(), json!({ "bracket": out }))
        }
        Command::Phi { field } => {
            let c = cli.chart()?;
            let p = phi(&io::parse_jet_field(field, &c, cli.order()?)?)?;
            Outcome::value(p.to_string(), json!({ "v": p.v_part.to_string(), "l": p.l_part.to_string() }))
        }
        Command::Psi { elem } => {
            let c = cli.chart()?;
            let k = cli.order()?;
            let u = psi(&io::parse_semidirect(elem, &c, k)?, k)?;
            Outcome::value(u.to_string(), json!({ "jet_field": u.to_string() }))
        }
        Command::Localize { g, eta, terms } => {
            let c = cli.chart()?;
            let k = cli.order()?;
            let g = io::parse_ring_elem(g, &c)?;
            let eta = io::parse_vector_field(eta, &c)?;
            let exact = JetField::from_pair(&avjet::chart::RingElem::one(&c), &eta.scale(&g.inverse()?)?, k)?;
            let partial = localization_partial_sum(&g, &eta, *terms, k)?;
            let defect = exact.try_sub(&partial)?;
            let remainder = localization_remainder(&g, &eta, *terms, k)?;
            let order = defect.filtration_order();
            let ok = order > *terms && defect.try_eq(&remainder)?;
            let text = format!(
                "partial sum: {partial}\ndefect: {defect}\ndefect order: {order}\nremainder matches: {}",
                defect.try_eq(&remainder)?
            );
            Outcome {
                text,
                json: json!({
                    "partial_sum": partial.to_string(),
                    "defect": defect.to_string(),
                    "defect_order": order,
                    "remainder": remainder.to_string(),
                    "pass": ok,
                }),
                ok,
            }
        }
        Command::DopMul { lhs, rhs } => {
            let c = cli.chart()?;
            let d = io::parse_diffop(lhs, &c)?.try_mul(&io::parse_diffop(rhs, &c)?)?;
            Outcome::value(d.to_string(), json!({ "product": d.to_string() }))
        }
        Command::AvMap { word } => {
            let c = cli.chart()?;
            let t = av_to_tensor(&c, &io::parse_av_word(word, &c)?, cli.order()?)?;
            Outcome::value(t.to_string(), json!({ "image": t.to_string() }))
        }
        Command::Transition { from, to, m, p } => {
            let atlas = cli.atlas()?;
            let r = cli.order()?;
            let m = parse_index(m)?;
            let tp = atlas.transition(from, to)?;
            let formula = transition_l(&m, *p, &tp, r)?;
            let via = transition_via_iso(&m, *p, &tp, r)?;
            let ok = formula.try_eq(&via)?;
            Outcome {
                text: format!("{formula}\nagrees with transport through ψ, φ: {ok}"),
                json: json!({ "formula": formula.to_string(), "via_iso": via.to_string(), "pass": ok }),
                ok,
            }
        }
        Command::Cocycle { triple, max_degree } => {
            let atlas = cli.atlas()?;
            let r = cli.order()?;
            let names: Vec<&str> = triple.split(',').map(str::trim).collect();
            let [i, j, l] = names[..] else { bail!("--triple expects three chart names") };
            let n = atlas.chart(i)?.n();
            let mut results = Vec::new();
            let mut ok = true;
            for m in MultiIndex::all_between(n, 1, *max_degree) {
                for p in 0..n {
                    let pass = cocycle_check(&atlas, [i, j, l], &m, p, r)?;
                    ok &= pass;
                    results.push(json!({ "m": m.as_slice(), "p": p, "pass": pass }));
                }
            }
            let text = format!("cocycle {i}->{j}->{l}: {} cases, {}", results.len(), if ok { "all pass" } else { "FAILED" });
            Outcome { text, json: json!({ "checks": results, "pass": ok }), ok }
        }
        Command::Verify { suite, case, out, samples } => {
            let mut cfg = SuiteConfig::default();
            let mut rerun = String::new();
            if !cli.chart.is_empty() {
                cfg.charts = cli.chart.iter().map(|c| load_chart(c)).collect::<Result<_>>()?;
                for c in &cli.chart {
                    rerun.push_str(&format!(" --chart {c}"));
                }
            }
            if let Some(a) = &cli.atlas {
                cfg.atlas = load_atlas(a)?;
                rerun.push_str(&format!(" --atlas {a}"));
            }
            if let Some(k) = cli.order {
                cfg.orders = (1, k.max(1));
                rerun.push_str(&format!(" --order {k}"));
            }
            if let Some(s) = samples {
                cfg.samples = Some(*s);
                rerun.push_str(&format!(" --samples {s}"));
            }
            cfg.rerun_args = rerun;
            let report = match case {
                Some(id) => io::run_single(suite, cli.seed, id, &cfg)?,
                None => io::run_suite(suite, cli.seed, &cfg)?,
            };
            if let Some(path) = out {
                std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
            }
            let json: Value = serde_json::from_str(&report.to_json())?;
            Outcome { text: report.to_text(), ok: report.all_passed(), json }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let body = match cli.format {
                Format::Text => outcome.text.trim_end().to_string(),
                Format::Json => serde_json::to_string_pretty(&outcome.json).expect("json"),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
