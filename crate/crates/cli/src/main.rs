//! `crossfam`: generate point sets, run the dichotomy pipelines, verify
//! certificates and plot them.

mod manifest;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};

use crossfam::bundle::{find_bundle_or_noncrossing, BundleRunConfig};
use crossfam::crossing::{default_line_budget, find_avoiding_pair, find_crossing_or_noncrossing, EXACT_CUTOFF};
use crossfam::families::{crossing_family_defects, Certificate};
use crossfam::geom::vertical_split;
use crossfam::oracles::{max_crossing_family_exact, OracleBudget};
use crossfam::spoke::{build_prop7_auto, check_prop7_crossing_bound, DEFAULT_SNAP};
use crossfam::{generate, io, Error, PointSet};

use manifest::RunManifest;

#[derive(Parser, Serialize)]
#[command(name = "crossfam", version, about = "Crossing and non-crossing families in planar point sets")]
struct Cli {
    /// Input point set (JSON).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for stochastic commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Pretty-print JSON with this many spaces per level.
    #[arg(long, global = true)]
    json_indent: Option<usize>,
    /// Manifest path; defaults to `<out>.manifest.jsonl`, or stderr without `--out`.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Kind {
    RandomDisk,
    Convex,
    GridPerturbed,
    RandomCap,
    Prop7,
    FourCluster,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Write a point set in general position.
    Generate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Cluster size for `four-cluster`.
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Odd parameter for `prop7`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Coordinate radius, half-width, spacing or cluster spread.
        /// Defaults to 2^20, or 20000 for `four-cluster`.
        #[arg(long)]
        scale: Option<i64>,
        #[arg(long, default_value_t = DEFAULT_SNAP)]
        snap: u64,
    },
    /// A convex bundle of size k and width m, or a non-crossing family of size m.
    FindBundle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "32")]
        c_eff: Ratio<u64>,
    },
    /// A crossing family, or a non-crossing family of size m.
    FindCrossing {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "32")]
        c_eff: Ratio<u64>,
        #[arg(long, default_value_t = EXACT_CUTOFF)]
        exact_cutoff: usize,
    },
    /// An epsilon-avoiding pair of m-clusters from the two vertical halves.
    Avoiding {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        epsilon: Ratio<u64>,
        /// Number of decomposition lines; `2 ceil(1/epsilon)` by default.
        #[arg(long)]
        lines: Option<usize>,
    },
    /// The 3k-1 point set with a spoke set of floor(1.5k) lines.
    Prop7 {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SNAP)]
        snap: u64,
        /// Also run the exact crossing-family oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Exact searches.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
    /// Check a certificate against a point set.
    Verify {
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Render a point set and an optional certificate as SVG.
    Plot {
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OracleCommand {
    /// Maximum crossing family by branch and bound.
    MaxCrossing {
        #[arg(long, default_value_t = OracleBudget::default().max_nodes)]
        max_nodes: u64,
        #[arg(long, default_value_t = 120)]
        timeout_secs: u64,
    },
}

/// Failure with its exit code.
struct Fail {
    code: u8,
    message: String,
}

const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::InsufficientPoints { .. } | Error::ReductionExhausted { .. } => 3,
            Error::OracleTimeout { .. } => 4,
            Error::Invariant(_) => VERIFY_FAILED,
            _ => USAGE,
        };
        Fail { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Fail {
    Fail { code: USAGE, message: message.into() }
}

/// What a command produced.
struct Output {
    body: String,
    verified: Option<bool>,
    code: u8,
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn input_text(cli: &Cli) -> Result<String, Fail> {
    read(cli.input.as_deref().ok_or_else(|| usage("--in is required"))?)
}

fn load_points(text: &str) -> Result<PointSet, Fail> {
    Ok(io::parse_points(text)?)
}

fn seed(cli: &Cli) -> Result<u64, Fail> {
    cli.seed.ok_or_else(|| usage("--seed is required for this command"))
}

fn json_out<T: Serialize>(cli: &Cli, value: &T, verified: Option<bool>) -> Result<Output, Fail> {
    let mut body = io::to_json(value, cli.json_indent)?;
    body.push('\n');
    let code = if verified == Some(false) { VERIFY_FAILED } else { 0 };
    Ok(Output { body, verified, code })
}

fn run(cli: &Cli) -> Result<Output, Fail> {
    match &cli.command {
        Command::Generate { kind, n, m, k, scale, snap } => {
            let s = seed(cli)?;
            let scale = scale.unwrap_or(match kind {
                Kind::FourCluster => 20_000,
                _ => 1 << 20,
            });
            let (set, cert) = match kind {
                Kind::RandomDisk => (generate::random_disk(*n, s, scale)?, None),
                Kind::Convex => (generate::convex(*n, s, scale)?, None),
                Kind::GridPerturbed => (generate::grid_perturbed(*n, s, scale)?, None),
                Kind::RandomCap => (generate::random_cap(*n, s, scale)?, None),
                Kind::FourCluster => {
                    let (set, f) = generate::four_cluster(*m, s, scale)?;
                    (set, Some(Certificate::NoncrossingFamily(f)))
                }
                Kind::Prop7 => {
                    let inst = build_prop7_auto(*k, *snap)?;
                    (inst.points, Some(Certificate::SpokeSet(inst.lines)))
                }
            };
            let verified = cert.as_ref().map(|c| c.verify(&set)).transpose()?;
            let value = json!({ "points": set.points(), "certificate": cert });
            json_out(cli, &value, verified)
        }
        Command::FindBundle { k, m, c_eff } => {
            let set = load_points(&input_text(cli)?)?.certified()?;
            let cfg = BundleRunConfig {
                c_effective: *c_eff,
                seed: seed(cli)?,
                ..BundleRunConfig::new(*k, *m)
            };
            let res = find_bundle_or_noncrossing(&set, &cfg)?;
            let verified = res.certificate.verify(&set)?;
            json_out(cli, &json!({ "result": res.certificate.kind(), "certificate": res.certificate, "trace": res.trace, "verified": verified }), Some(verified))
        }
        Command::FindCrossing { m, c_eff, exact_cutoff } => {
            let set = load_points(&input_text(cli)?)?.certified()?;
            let cfg = BundleRunConfig {
                c_effective: *c_eff,
                seed: seed(cli)?,
                ..BundleRunConfig::new(0, *m)
            };
            let res = find_crossing_or_noncrossing(&set, *m, &cfg, *exact_cutoff)?;
            let verified = res.certificate.verify(&set)?;
            json_out(cli, &json!({ "result": res.certificate.kind(), "certificate": res.certificate, "trace": res.trace, "verified": verified }), Some(verified))
        }
        Command::Avoiding { m, epsilon, lines } => {
            let set = load_points(&input_text(cli)?)?.certified()?;
            let n = set.len();
            let halves = vertical_split(&set, &set.ids(), &[n / 2, n - n / 2])?;
            let budget = lines.unwrap_or_else(|| default_line_budget(*epsilon));
            let pair = find_avoiding_pair(&set, &halves[0], &halves[1], *m, *epsilon, budget)?;
            json_out(cli, &json!({ "m": m, "epsilon": epsilon.to_string(), "lines": budget, "pair": pair }), None)
        }
        Command::Prop7 { k, snap, oracle } => {
            let inst = build_prop7_auto(*k, *snap)?;
            let spoke = Certificate::SpokeSet(inst.lines.clone());
            let spoke_ok = spoke.verify(&inst.points)?;
            let bound = oracle
                .then(|| check_prop7_crossing_bound(&inst, &OracleBudget::default()))
                .transpose()?;
            let value = json!({
                "k": inst.k,
                "snap": inst.snap,
                "epsilon": inst.epsilon.to_string(),
                "points": inst.points.points(),
                "certificate": spoke,
                "inner": inst.inner,
                "checks": {
                    "points": inst.points.len(),
                    "lines": inst.lines.lines.len(),
                    "general_position": inst.points.is_certified(),
                    "spoke_set": spoke_ok,
                    "max_crossing_family": bound,
                },
            });
            json_out(cli, &value, Some(spoke_ok))
        }
        Command::Oracle { which: OracleCommand::MaxCrossing { max_nodes, timeout_secs } } => {
            let set = load_points(&input_text(cli)?)?.certified()?;
            let budget = OracleBudget {
                max_nodes: *max_nodes,
                timeout: Duration::from_secs(*timeout_secs),
                ..OracleBudget::default()
            };
            match max_crossing_family_exact(&set, &budget) {
                Ok(r) => json_out(
                    cli,
                    &json!({ "size": r.family.len(), "optimal": true, "nodes": r.nodes, "certificate": Certificate::CrossingFamily(r.family) }),
                    Some(true),
                ),
                Err(Error::OracleTimeout { nodes, best }) => {
                    let mut out = json_out(
                        cli,
                        &json!({ "size": best.len(), "optimal": false, "nodes": nodes, "certificate": Certificate::CrossingFamily(best) }),
                        None,
                    )?;
                    out.code = 4;
                    Ok(out)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { certificate } => {
            let set = load_points(&input_text(cli)?)?;
            let cert = io::parse_certificate(&read(certificate)?)?;
            io::check_ids(&cert, &set)?;
            let verified = cert.verify(&set)?;
            let defects = match &cert {
                Certificate::CrossingFamily(f) => serde_json::to_value(crossing_family_defects(f, &set)).unwrap_or(Value::Null),
                _ => Value::Null,
            };
            json_out(cli, &json!({ "kind": cert.kind(), "verified": verified, "defects": defects }), Some(verified))
        }
        Command::Plot { certificate, size } => {
            let set = load_points(&input_text(cli)?)?;
            let cert = match certificate {
                Some(p) => {
                    let c = io::parse_certificate(&read(p)?)?;
                    io::check_ids(&c, &set)?;
                    Some(c)
                }
                None => None,
            };
            Ok(Output { body: svg::render(&set, cert.as_ref(), *size), verified: None, code: 0 })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Generate { .. } => "generate",
        Command::FindBundle { .. } => "find-bundle",
        Command::FindCrossing { .. } => "find-crossing",
        Command::Avoiding { .. } => "avoiding",
        Command::Prop7 { .. } => "prop7",
        Command::Oracle { .. } => "oracle max-crossing",
        Command::Verify { .. } => "verify",
        Command::Plot { .. } => "plot",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.body).map_err(|e| usage(format!("{}: {e}", path.display())))?,
            None => print!("{}", out.body),
        }
        Ok(out)
    });
    let (code, verified, error) = match &result {
        Ok(out) => (out.code, out.verified, None),
        Err(f) => (f.code, None, Some(f.message.clone())),
    };
    if let Some(msg) = &error {
        eprintln!("error: {msg}");
    }
    let manifest = RunManifest::new(&cli, command_name(&cli.command), start.elapsed(), verified, code, error);
    if let Err(e) = manifest.emit(cli.manifest.as_deref(), cli.out.as_deref()) {
        eprintln!("error: manifest: {e}");
    }
    ExitCode::from(code)
}
