//! Argument parsing and dispatch for the `bvlab` binary.

pub mod battery;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bvlab_beurling as beurling;
use bvlab_el as el;
use bvlab_envelope::{compute_envelope_with, Boundary, EnvelopeConfig, GridShape, Method};
use bvlab_inequality::{verify_aubert_pair, verify_bebu, verify_envelope_majorant, verify_m_pointwise};
use bvlab_kernel::{Exponent, Gradient, IntegrandId, Sign, C64};
use bvlab_probe::{probe_aubert_threshold, probe_rank_one_concavity, transition, Config};
use bvlab_radial::{energy_quadrature, closed_form_energy, RadialProfile};
use bvlab_report::{emit_report, ExperimentReport, Verdict};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const OUT_DIR_ENV: &str = "BVLAB_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "bvlab-out";

#[derive(Debug, Parser)]
#[command(name = "bvlab", version, about = "Numerical experiments around Burkholder-type integrands")]
pub struct Cli {
    /// Worker threads for the parallel parts.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for reports and CSV files.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = battery::SEED)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an integrand at one gradient.
    Eval(EvalArgs),
    /// Check a pointwise inequality on random and boundary samples.
    Verify(VerifyArgs),
    /// Search for rank-one concavity violations.
    Probe(ProbeArgs),
    /// Zig-zag concave envelope of |xi|^p - M^p |zeta|^p on a moduli grid.
    Envelope(EnvelopeArgs),
    /// Energies of radial stretchings and related experiments.
    Radial(RadialArgs),
    /// Euler-Lagrange residuals and the homogeneous reduction.
    El(ElArgs),
    /// Discrete Beurling transform ratio scan.
    Beurling(BeurlingArgs),
    /// Run the verification battery at one exponent.
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum IntegrandName {
    Burkholder,
    BurkholderM,
    BeurlingM,
    Aubert,
    HigherDim,
    Envelope,
}

#[derive(Debug, Args)]
pub struct IntegrandArgs {
    #[arg(long, value_enum, default_value = "burkholder")]
    pub integrand: IntegrandName,
    #[arg(long)]
    pub p: f64,
    /// Constant for the M-families; defaults to p* - 1.
    #[arg(long)]
    pub m: Option<f64>,
    /// `lambda` for the higher-dimensional family (planar case).
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
}

impl IntegrandArgs {
    pub fn resolve(&self) -> Result<(IntegrandId<f64>, Exponent<f64>)> {
        let e = Exponent::new(self.p).context("invalid --p")?;
        let m = self.m.unwrap_or(e.burkholder_norm());
        let id = match self.integrand {
            IntegrandName::Burkholder => IntegrandId::Burkholder,
            IntegrandName::BurkholderM => IntegrandId::BurkholderM(m),
            IntegrandName::BeurlingM => IntegrandId::BeurlingM(m),
            IntegrandName::Aubert => IntegrandId::Aubert(m),
            IntegrandName::HigherDim => IntegrandId::HigherDim { n: 2, lambda: self.lambda, sign: Sign::Plus },
            IntegrandName::Envelope => IntegrandId::EnvelopeClosedForm,
        };
        id.validate(&e).context("invalid integrand parameters")?;
        Ok((id, e))
    }
}

/// Parses `re,im`.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(C64::new(parse(re)?, parse(im)?))
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub integrand: IntegrandArgs,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: C64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub zeta: C64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyCase {
    Bebu,
    MPointwise,
    Aubert,
    EnvelopeMajorant,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub case: VerifyCase,
    #[arg(long, default_value_t = 3.0)]
    pub p: f64,
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub integrand: IntegrandArgs,
    #[arg(long, default_value_t = bvlab_probe::DEFAULT_BASES)]
    pub bases: usize,
    #[arg(long, default_value_t = bvlab_probe::DEFAULT_H)]
    pub h: f64,
    #[arg(long, default_value_t = bvlab_probe::DEFAULT_TOL)]
    pub tol: f64,
    /// Scan Aubert's family over `start,stop,step` instead of probing one integrand.
    #[arg(long)]
    pub aubert_scan: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundaryArg {
    Folded,
    Windowed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Homogeneous,
    Iterative,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    #[arg(long)]
    pub p: f64,
    /// Defaults to p* - 1.
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 129)]
    pub n: usize,
    /// Window side length.
    #[arg(long, default_value_t = 2.0)]
    pub len: f64,
    #[arg(long, default_value_t = bvlab_envelope::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = bvlab_envelope::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value = "folded")]
    pub boundary: BoundaryArg,
    #[arg(long, value_enum, default_value = "homogeneous")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RadialMode {
    /// Quadrature against the closed form over the built-in family.
    Identity,
    /// Energy of the profile given by `--profile`.
    Profile,
    /// The disc map with zero energy.
    ZeroEnergy,
    /// Radially linear maps against their linear extension.
    Comparison,
    /// Perturbations of a radial stretching.
    LocalMax,
}

#[derive(Debug, Args)]
pub struct RadialArgs {
    #[arg(long, value_enum, default_value = "identity")]
    pub mode: RadialMode,
    #[arg(long)]
    pub p: f64,
    /// JSON profile file for `--mode profile`.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
    /// Exponent `s` of the local-maximum experiment.
    #[arg(long, default_value_t = 4.0)]
    pub s: f64,
}

#[derive(Debug, Args)]
pub struct ElArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 61)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub probes: usize,
}

#[derive(Debug, Args)]
pub struct BeurlingArgs {
    #[arg(long)]
    pub p: f64,
    /// Comma-separated; defaults to six values approaching 1 - 2/p.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = beurling::DEFAULT_N)]
    pub n: usize,
    #[arg(long, default_value_t = beurling::DEFAULT_L)]
    pub l: f64,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub p: f64,
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub report: ExperimentReport,
    /// Text for stdout besides the report path.
    pub stdout: Option<String>,
}

impl Outcome {
    fn report(report: ExperimentReport) -> Self {
        Self { report, stdout: None }
    }

    /// Exit status: 0 on pass or refusal, 1 on failure.
    pub fn exit_code(&self) -> i32 {
        match self.report.verdict {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

pub fn out_dir(cli: &Cli) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn csv_file(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((BufWriter::new(f), path))
}

/// Runs the command and writes its report (and CSV files) under `out_dir(cli)`.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let dir = out_dir(cli);
    let mut outcome = dispatch(cli, &dir)?;
    outcome.report.set_param("seed", cli.seed);
    let name = outcome.report.name.replace(['.', ' '], "-");
    let path = dir.join(format!("{name}.json"));
    outcome.report.artifacts.sort();
    emit_report(&outcome.report, &path)?;
    Ok(outcome)
}

fn dispatch(cli: &Cli, dir: &Path) -> Result<Outcome> {
    match &cli.command {
        Command::Eval(a) => {
            let (id, e) = a.integrand.resolve()?;
            let g = Gradient::new(a.xi, a.zeta);
            let v = id.eval(&e, &g);
            let report = ExperimentReport::new("eval")
                .param("integrand", id.to_string())
                .param("p", e.p())
                .point("gradient", vec![a.xi.re, a.xi.im, a.zeta.re, a.zeta.im])
                .metric("value", v);
            Ok(Outcome { report, stdout: Some(format!("{v}")) })
        }
        Command::Verify(a) => {
            let e = Exponent::new(a.p).context("invalid --p")?;
            let r = match a.case {
                VerifyCase::Bebu => verify_bebu(&e, a.samples, cli.seed),
                VerifyCase::MPointwise => {
                    verify_m_pointwise(&e, a.m.unwrap_or(e.burkholder_norm()), a.samples, cli.seed)?
                }
                VerifyCase::Aubert => verify_aubert_pair(a.m.unwrap_or(2.0 + 3f64.sqrt()), a.samples, cli.seed)?,
                VerifyCase::EnvelopeMajorant => verify_envelope_majorant(&e, a.grid)?,
            };
            Ok(Outcome::report(r))
        }
        Command::Probe(a) => probe(a),
        Command::Envelope(a) => envelope(a, dir),
        Command::Radial(a) => radial(a),
        Command::El(a) => {
            let mut r = ExperimentReport::new("el").param("p", a.p);
            r.push_child(el::pde_grid_report(&el::Burk::critical(a.p), a.n));
            r.push_child(el::radial_el_study(a.p));
            r.push_child(el::ode_reduction_check(a.p));
            r.push_child(el::uniqueness_probe(a.p, a.probes, cli.seed, 25));
            let grid = el::log_grid(a.n, el::GRID_LO, el::GRID_HI)?;
            let (w, path) = csv_file(dir, "el-residuals.csv")?;
            el::write_residual_csv(&el::Burk::critical(a.p), &grid, w)?;
            r.artifacts.push(path.display().to_string());
            Ok(Outcome::report(r))
        }
        Command::Beurling(a) => {
            Exponent::new(a.p).context("invalid --p")?;
            let alphas = if a.alpha.is_empty() { beurling::default_alphas(a.p) } else { a.alpha.clone() };
            for &al in &alphas {
                beurling::check_alpha(a.p, al)?;
            }
            let est = beurling::norm_lower_bound_scan(a.p, &alphas, a.n, a.l)?;
            let mut r = beurling::scan_report(a.p, &alphas, a.n, a.l);
            let (mut w, path) = csv_file(dir, "beurling-scan.csv")?;
            beurling::write_scan_csv(&est, &mut w)?;
            r.artifacts.push(path.display().to_string());
            let mut text = Vec::new();
            beurling::write_scan_csv(&est, &mut text)?;
            Ok(Outcome { report: r, stdout: Some(String::from_utf8_lossy(&text).trim_end().to_owned()) })
        }
        Command::Suite(a) => {
            Exponent::new(a.p).context("invalid --p")?;
            Ok(Outcome::report(battery::suite(a.p)))
        }
    }
}

fn probe(a: &ProbeArgs) -> Result<Outcome> {
    let mut cfg = Config::standard(a.bases);
    cfg.h = a.h;
    cfg.tol = a.tol;
    cfg.validate()?;
    if let Some(spec) = &a.aubert_scan {
        let parts: Vec<f64> = spec
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .context("--aubert-scan expects start,stop,step")?;
        let [start, stop, step] = parts[..] else { bail!("--aubert-scan expects start,stop,step") };
        if !(step > 0.0 && stop > start) {
            bail!("--aubert-scan needs step > 0 and stop > start");
        }
        let count = ((stop - start) / step).round() as usize;
        let grid: Vec<f64> = (0..=count).map(|k| start + step * k as f64).collect();
        let res = probe_aubert_threshold(&grid, &cfg)?;
        let mut r = ExperimentReport::new("probe-aubert").param("grid", grid.clone());
        if let Some((bad, good)) = transition(&res) {
            r = r.metric("last_violating_m", bad).metric("first_concave_m", good);
        }
        return Ok(Outcome::report(r));
    }
    let (id, e) = a.integrand.resolve()?;
    let res = probe_rank_one_concavity(&id, &e, &cfg)?;
    let r = bvlab_probe::report(&id, &e, &cfg, &res);
    Ok(Outcome { stdout: Some(res.verdict_name().to_owned()), report: r })
}

fn envelope(a: &EnvelopeArgs, dir: &Path) -> Result<Outcome> {
    let e = Exponent::new(a.p).context("invalid --p")?;
    let id = IntegrandId::BeurlingM(a.m.unwrap_or(e.burkholder_norm()));
    id.validate(&e)?;
    let shape = GridShape::square(a.n, a.len)?;
    let cfg = EnvelopeConfig {
        tol: a.tol,
        max_iter: a.max_iter,
        boundary: match a.boundary {
            BoundaryArg::Folded => Boundary::Folded,
            BoundaryArg::Windowed => Boundary::Windowed,
        },
        method: match a.method {
            MethodArg::Homogeneous => Method::Homogeneous { profile_nodes: None },
            MethodArg::Iterative => Method::Iterative,
        },
    };
    let (grid, run) = compute_envelope_with(&id, &e, shape, &cfg)?;
    let mut r = ExperimentReport::new("envelope")
        .param("integrand", id.to_string())
        .param("p", a.p)
        .param("n", a.n)
        .param("len", a.len)
        .param("tol", a.tol)
        .param("max_iter", a.max_iter)
        .param("boundary", cfg.boundary.as_str())
        .metric("sweeps", run.iterations as f64)
        .metric("last_change", run.last_change());
    if a.m.is_none() {
        let closed = |x: f64, y: f64| IntegrandId::EnvelopeClosedForm.eval_moduli(&e, x, y);
        r.set_metric("inner_half_error", grid.inner_half_distance(closed));
    }
    r.verdict = Verdict::from_check(run.converged);
    let (w, path) = csv_file(dir, "envelope.csv")?;
    grid.write_csv(w)?;
    r.artifacts.push(path.display().to_string());
    Ok(Outcome::report(r))
}

fn radial(a: &RadialArgs) -> Result<Outcome> {
    let e = Exponent::new(a.p).context("invalid --p")?;
    let ps = [a.p];
    let r = match a.mode {
        RadialMode::Identity => bvlab_radial::energy_identity_report(&e)?,
        RadialMode::Profile => {
            let path = a.profile.as_ref().context("--mode profile needs --profile FILE")?;
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let prof = RadialProfile::from_json(&text)?;
            prof.check_energy_admissible(a.p)?;
            let est = energy_quadrature(&IntegrandId::Burkholder, &prof, &e)?;
            let mut r = ExperimentReport::new("radial-profile")
                .param("p", a.p)
                .param("profile", path.display().to_string())
                .metric("energy", est.value)
                .metric("error_estimate", est.error);
            match closed_form_energy(&prof, &e) {
                Ok(c) => {
                    let scaled = (est.value - c).abs() / (1.0 + c.abs());
                    r = r.metric("closed_form", c).metric("scaled_error", scaled);
                    r.verdict = Verdict::from_check(scaled <= bvlab_radial::IDENTITY_TOL);
                }
                Err(_) => r = r.note("no closed form for this orientation and exponent"),
            }
            r
        }
        RadialMode::ZeroEnergy => bvlab_radial::example_11_energy(&e, a.radius, 20.0 * a.radius)?,
        RadialMode::Comparison => battery::radially_linear(&ps, a.count),
        RadialMode::LocalMax => battery::local_max(a.p, a.s, a.count.min(10)),
    };
    Ok(Outcome::report(r))
}
