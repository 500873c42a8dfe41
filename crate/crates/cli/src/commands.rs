use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ouh_core::closed_form::{
    abscissae, density_identity_relative_residual, killed_mass, killed_ou_density,
    radial_density, radial_mass, support_upper, survival_probability, Spacing,
};
use ouh_core::format::sig17;
use ouh_core::killed::{
    euler_ou, euler_ou_free, euler_radial, simulate_ou_exact_path, simulate_radial_exact_path,
    KilledOuSampler, SchemeConfig,
};
use ouh_core::measure::local_martingale_curve;
use ouh_core::stream::map_paths;
use ouh_core::{aggregate, run_suite, StreamKey, SuiteConfig, TimeGrid};
use serde::Serialize;

use crate::config::{invalid, CommonArgs, ConfigError, Defaults, Format, RunConfig, Scheme};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    /// OU absorbed at 0.
    OuKilled,
    /// Free OU.
    Ou,
    /// Radial OU (3-d OU norm).
    Radial,
}

impl ProcessKind {
    fn as_str(&self) -> &'static str {
        match self {
            Self::OuKilled => "ou-killed",
            Self::Ou => "ou",
            Self::Radial => "radial",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = ProcessKind::OuKilled)]
    pub process: ProcessKind,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Paths for the Euler-versus-exact checks (default: min(paths, 100000)).
    #[arg(long)]
    pub euler_paths: Option<usize>,
    #[arg(long, hide = true, allow_negative_numbers = true, default_value_t = 0.0)]
    pub inject_weight_bias: f64,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = SpacingArg::Linear)]
    pub spacing: SpacingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct LocalMartingaleArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

fn core_config(e: ouh_core::Error) -> Failure {
    Failure::Config(e.to_string())
}

fn config_err(e: ConfigError) -> Failure {
    Failure::Config(e.to_string())
}

fn io_err(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn build_pool(workers: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure::Config(format!("cannot start {workers} workers: {e}")))
}

/// Writes to `--out` when given, otherwise to stdout.
fn emit(out: Option<&Path>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| io_err(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn header(name: &str, config: &RunConfig, extra: &str) -> String {
    let mut out = format!("# ouh {} {name}\n# {}", env!("CARGO_PKG_VERSION"), config.echo());
    if !extra.is_empty() {
        out.push(' ');
        out.push_str(extra);
    }
    out.push('\n');
    out
}

struct SimulatedPath {
    values: Vec<f64>,
    alive: Option<Vec<bool>>,
    clamps: usize,
}

#[derive(Serialize)]
struct TimeSummary {
    t: f64,
    mean: f64,
    stderr: f64,
    survival: Option<f64>,
    survival_stderr: Option<f64>,
    survival_closed_form: Option<f64>,
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    tool: String,
    process: &'static str,
    gamma: f64,
    a: f64,
    times: &'a [f64],
    paths: usize,
    dt: f64,
    seed: u64,
    scheme: String,
    clamp_count: usize,
    summary: &'a [TimeSummary],
    values: Vec<&'a [f64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alive: Option<Vec<&'a [bool]>>,
}

pub fn simulate(args: SimulateArgs) -> Result<(), Failure> {
    let config = RunConfig::resolve(
        &args.common,
        Defaults {
            gamma: None,
            a: None,
            times: vec![1.0],
            n_paths: 1000,
        },
    )
    .map_err(config_err)?;
    let params = config.params();
    let grid = TimeGrid::from_observations(&config.times).map_err(core_config)?;
    let scheme = SchemeConfig::with_dt(config.dt);
    if config.scheme == Scheme::Euler {
        scheme.validate(&params).map_err(core_config)?;
    }
    let key = StreamKey::new(config.seed).derive("simulate").derive(args.process.as_str());
    let pool = build_pool(config.workers)?;

    let sampler = KilledOuSampler::new(params, &grid).map_err(core_config)?;
    let paths: Vec<SimulatedPath> = pool
        .install(|| {
            map_paths(&key, config.n_paths, |_, rng| -> ouh_core::Result<SimulatedPath> {
                let killed = |p: ouh_core::KilledPath| {
                    let alive = (0..p.values.len()).map(|j| p.alive_at(j)).collect();
                    SimulatedPath {
                        values: p.values,
                        alive: Some(alive),
                        clamps: 0,
                    }
                };
                let free = |p: ouh_core::PathSample| SimulatedPath {
                    values: p.values,
                    alive: None,
                    clamps: p.clamp_count,
                };
                Ok(match (args.process, config.scheme) {
                    (ProcessKind::OuKilled, Scheme::Exact) => killed(sampler.sample(rng)),
                    (ProcessKind::OuKilled, Scheme::Euler) => {
                        killed(euler_ou(&params, &grid, &scheme, rng)?)
                    }
                    (ProcessKind::Ou, Scheme::Exact) => free(simulate_ou_exact_path(&params, &grid, rng)?),
                    (ProcessKind::Ou, Scheme::Euler) => free(euler_ou_free(&params, &grid, &scheme, rng)?),
                    (ProcessKind::Radial, Scheme::Exact) => {
                        free(simulate_radial_exact_path(&params, &grid, rng)?)
                    }
                    (ProcessKind::Radial, Scheme::Euler) => {
                        free(euler_radial(&params, &grid, &scheme, rng)?)
                    }
                })
            })
        })
        .into_iter()
        .collect::<ouh_core::Result<_>>()
        .map_err(core_config)?;

    let summary = summarize(&params, &config, &paths, args.process)?;
    let clamp_count: usize = paths.iter().map(|p| p.clamps).sum();
    let body = match config.format {
        Format::Csv => {
            let mut out = header(
                "simulate",
                &config,
                &format!("process={}", args.process.as_str()),
            );
            let killed = args.process == ProcessKind::OuKilled;
            out.push_str(if killed { "path,t,value,alive\n" } else { "path,t,value\n" });
            for (i, p) in paths.iter().enumerate() {
                for (j, (t, v)) in grid.times().iter().zip(&p.values).enumerate() {
                    let _ = write!(out, "{i},{},{}", sig17(*t), sig17(*v));
                    if let Some(alive) = &p.alive {
                        let _ = write!(out, ",{}", u8::from(alive[j]));
                    }
                    out.push('\n');
                }
            }
            out
        }
        Format::Json => {
            let doc = SimulateJson {
                tool: format!("ouh {}", env!("CARGO_PKG_VERSION")),
                process: args.process.as_str(),
                gamma: config.gamma,
                a: config.a,
                times: grid.times(),
                paths: config.n_paths,
                dt: config.dt,
                seed: config.seed,
                scheme: config.scheme.to_string(),
                clamp_count,
                summary: &summary,
                values: paths.iter().map(|p| p.values.as_slice()).collect(),
                alive: (args.process == ProcessKind::OuKilled)
                    .then(|| paths.iter().filter_map(|p| p.alive.as_deref()).collect()),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    };
    emit(config.out.as_deref(), &body)?;

    let mut report = String::new();
    for s in &summary {
        let _ = write!(report, "t={} mean={} stderr={}", s.t, sig17(s.mean), sig17(s.stderr));
        if let (Some(p), Some(se), Some(cf)) = (s.survival, s.survival_stderr, s.survival_closed_form) {
            let _ = write!(report, " survival={} ± {} closed_form={}", sig17(p), sig17(se), sig17(cf));
        }
        report.push('\n');
    }
    if clamp_count > 0 {
        let _ = writeln!(report, "positivity clamps: {clamp_count}");
    }
    if config.out.is_some() {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    Ok(())
}

fn summarize(
    params: &ouh_core::ProcessParams,
    config: &RunConfig,
    paths: &[SimulatedPath],
    process: ProcessKind,
) -> Result<Vec<TimeSummary>, Failure> {
    let mut summary = Vec::with_capacity(config.times.len());
    for (k, &t) in config.times.iter().enumerate() {
        let j = k + 1;
        let (mean, stderr) = moment(paths.iter().map(|p| p.values[j]));
        let (survival, survival_stderr, survival_closed_form) = if process == ProcessKind::OuKilled {
            let (p, se) = moment(paths.iter().map(|p| {
                f64::from(u8::from(p.alive.as_ref().is_some_and(|a| a[j])))
            }));
            let cf = survival_probability(params, t).map_err(core_config)?;
            (Some(p), Some(se), Some(cf))
        } else {
            (None, None, None)
        };
        summary.push(TimeSummary {
            t,
            mean,
            stderr,
            survival,
            survival_stderr,
            survival_closed_form,
        });
    }
    Ok(summary)
}

/// Mean and standard error; a single path reports a NaN error.
fn moment(samples: impl Iterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = samples.collect();
    match aggregate(values.iter().copied()) {
        Ok(e) => (e.mean, e.stderr),
        Err(_) => (values[0], f64::NAN),
    }
}

pub fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let base = SuiteConfig::default();
    let config = RunConfig::resolve(
        &args.common,
        Defaults {
            gamma: Some(base.gamma),
            a: Some(base.a),
            times: base.times.clone(),
            n_paths: base.n_paths,
        },
    )
    .map_err(config_err)?;
    if config.scheme == Scheme::Euler {
        return Err(config_err(invalid(
            "scheme",
            "verify always compares Euler against the exact scheme; omit --scheme",
        )));
    }
    let suite = SuiteConfig {
        gamma: config.gamma,
        a: config.a,
        times: config.times.clone(),
        n_paths: config.n_paths,
        dt: config.dt,
        seed: config.seed,
        euler_paths: args.euler_paths.unwrap_or(config.n_paths.min(base.euler_paths)),
        weight_bias: args.inject_weight_bias,
    };
    let pool = build_pool(config.workers)?;
    let report = pool.install(|| run_suite(&suite)).map_err(core_config)?;

    let dir = config.out.clone().unwrap_or_else(|| PathBuf::from("verify-out"));
    fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
    let json_path = dir.join("report.json");
    let csv_path = dir.join("report.csv");
    fs::write(&json_path, report.to_json() + "\n").map_err(|e| io_err(&json_path, e))?;
    fs::write(&csv_path, report.to_csv()).map_err(|e| io_err(&csv_path, e))?;

    let s = report.summary;
    let mut text = String::new();
    for c in report.failures() {
        let _ = writeln!(
            text,
            "FAIL {}: value={} reference={} gap={}",
            c.name,
            c.value.map_or("-".into(), sig17),
            c.reference.map_or("-".into(), sig17),
            c.gap.map_or("-".into(), sig17),
        );
    }
    let _ = writeln!(
        text,
        "{} passed, {} failed, {} skipped; report in {}",
        s.passed,
        s.failed,
        s.skipped,
        dir.display()
    );
    if config.format == Format::Json {
        emit(None, &(report.to_json() + "\n"))?;
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} check(s) failed", s.failed)))
    }
}

#[derive(Serialize)]
struct DensityRow {
    t: f64,
    x: f64,
    killed_ou_density: f64,
    radial_density: f64,
    residual_rel: f64,
}

#[derive(Serialize)]
struct DensityFooter {
    t: f64,
    killed_mass: f64,
    survival: f64,
    radial_mass: f64,
    max_residual_rel: f64,
}

pub fn density(args: DensityArgs) -> Result<(), Failure> {
    let config = RunConfig::resolve(
        &args.common,
        Defaults {
            gamma: None,
            a: None,
            times: vec![1.0],
            n_paths: 1,
        },
    )
    .map_err(config_err)?;
    let params = config.params();
    let spacing = match args.spacing {
        SpacingArg::Linear => Spacing::Linear,
        SpacingArg::Log => Spacing::Log,
    };
    let horizon = *config.times.last().expect("non-empty");
    let x_min = args.x_min.unwrap_or(1e-3 * params.a());
    let x_max = match args.x_max {
        Some(x) => x,
        None => support_upper(&params, horizon).map_err(core_config)?,
    };
    let xs = abscissae(x_min, x_max, args.points, spacing).map_err(core_config)?;

    let mut rows = Vec::with_capacity(xs.len() * config.times.len());
    let mut footers = Vec::with_capacity(config.times.len());
    for &t in &config.times {
        let mut max_residual: f64 = 0.0;
        for &x in &xs {
            let row = DensityRow {
                t,
                x,
                killed_ou_density: killed_ou_density(&params, t, x).map_err(core_config)?,
                radial_density: radial_density(&params, t, x).map_err(core_config)?,
                residual_rel: density_identity_relative_residual(&params, t, x).map_err(core_config)?,
            };
            max_residual = max_residual.max(row.residual_rel);
            rows.push(row);
        }
        footers.push(DensityFooter {
            t,
            killed_mass: killed_mass(&params, t).map_err(core_config)?,
            survival: survival_probability(&params, t).map_err(core_config)?,
            radial_mass: radial_mass(&params, t).map_err(core_config)?,
            max_residual_rel: max_residual,
        });
    }

    let body = match config.format {
        Format::Csv => {
            let mut out = header(
                "density",
                &config,
                &format!("x_min={x_min} x_max={x_max} points={}", args.points),
            );
            out.push_str("t,x,killed_ou_density,radial_density,residual_rel\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    sig17(r.t),
                    sig17(r.x),
                    sig17(r.killed_ou_density),
                    sig17(r.radial_density),
                    sig17(r.residual_rel)
                );
            }
            for f in &footers {
                let _ = writeln!(
                    out,
                    "# t={} integral_killed={} survival={} integral_radial={} max_residual_rel={}",
                    f.t,
                    sig17(f.killed_mass),
                    sig17(f.survival),
                    sig17(f.radial_mass),
                    sig17(f.max_residual_rel)
                );
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "tool": format!("ouh {}", env!("CARGO_PKG_VERSION")),
                "config": config.echo(),
                "gamma": config.gamma,
                "a": config.a,
                "rows": rows,
                "integrals": footers,
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    };
    emit(config.out.as_deref(), &body)
}

pub fn local_martingale(args: LocalMartingaleArgs) -> Result<(), Failure> {
    let config = RunConfig::resolve(
        &args.common,
        Defaults {
            gamma: Some(1.0),
            a: Some(1.0),
            times: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            n_paths: 100_000,
        },
    )
    .map_err(config_err)?;
    let params = config.params();
    let key = StreamKey::new(config.seed).derive("local-martingale");
    let pool = build_pool(config.workers)?;
    let curve = pool
        .install(|| local_martingale_curve(&params, &config.times, config.n_paths, &key))
        .map_err(core_config)?;

    let body = match config.format {
        Format::Csv => {
            let mut out = header("local-martingale", &config, "");
            out.push_str("t,mc_mean,mc_stderr,closed_form,gap\n");
            for p in &curve {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    sig17(p.t),
                    sig17(p.estimate.mean),
                    sig17(p.estimate.stderr),
                    sig17(p.closed_form),
                    sig17(p.estimate.mean - p.closed_form)
                );
            }
            out
        }
        Format::Json => {
            let doc = serde_json::json!({
                "tool": format!("ouh {}", env!("CARGO_PKG_VERSION")),
                "config": config.echo(),
                "gamma": config.gamma,
                "a": config.a,
                "start_value": 1.0 / config.a,
                "curve": curve,
            });
            serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
        }
    };
    emit(config.out.as_deref(), &body)
}
