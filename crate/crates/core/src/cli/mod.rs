//! Batch front-end: JSON configs in, CSV/JSON tables and a run manifest out.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 invalid config or
//! input, 3 numerical singularity.

mod verify;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{equalization_sweep, ChannelModel, ChannelParams};
use crate::convolution::{convolve, weighted_l1_submult_check, ConvolutionKind};
use crate::error::{Error, Result};
use crate::function::{Domain, GroupFunction};
use crate::group::{GroupSpec, HeisSpec};
use crate::inversion::{
    decay_preservation_experiment, grs_experiment, invert_convolver, neumann_inverse, Pattern,
};
use crate::weights::{check_admissible, WeightFn};
use crate::weyl::{compose_check, SpreadingFunction};

pub use verify::{run_suite, SuiteCheck, SuiteReport, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "heislab",
    version,
    about = "Heisenberg-group convolution and Weyl-operator experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config for the subcommand; defaults are used when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "heislab-out")]
    pub out: PathBuf,
    /// Overrides the config's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Run the invariant suite.
    Verify,
    /// Admissibility report for a weight.
    Admissible,
    /// Convolve two functions and check the weighted Young inequalities.
    Convolve,
    /// Check the Weyl composition rule on random spreading pairs.
    WeylCompose,
    /// Invert αδ + f and report the inverse's kernel and decay.
    Invert,
    /// Decay-preservation ladder.
    Decay,
    /// Weighted norms of a geometric inverse against a weight ladder.
    Grs,
    /// Channel equalization by banded inverses.
    ChannelSweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Admissible => "admissible",
            Command::Convolve => "convolve",
            Command::WeylCompose => "weyl-compose",
            Command::Invert => "invert",
            Command::Decay => "decay",
            Command::Grs => "grs",
            Command::ChannelSweep => "channel-sweep",
        }
    }
}

/// Failure of a run, mapped onto an exit code.
#[derive(Debug)]
pub enum RunError {
    Assertion(String),
    Config(String),
    Singular(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Assertion(_) => EXIT_ASSERTION,
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Singular(_) => EXIT_SINGULAR,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Assertion(m) => write!(f, "check failed: {m}"),
            RunError::Config(m) => write!(f, "invalid config: {m}"),
            RunError::Singular(m) => write!(f, "singular: {m}"),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular { .. } => RunError::Singular(e.to_string()),
            Error::Divergence { .. } | Error::NotConverged { .. } => {
                RunError::Assertion(e.to_string())
            }
            other => RunError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config_sha256: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub exit_code: i32,
    pub message: Option<String>,
}

/// Collects output files, each written atomically through a temporary sibling.
struct Outputs {
    dir: PathBuf,
    written: Vec<String>,
}

impl Outputs {
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, contents)?;
        fs::rename(&tmp, &path)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, &(serde_json::to_string_pretty(value)? + "\n"))
    }
}

fn load_config<T: DeserializeOwned + Default>(
    path: Option<&Path>,
    command: Command,
) -> std::result::Result<T, RunError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)
        .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(c) = obj.remove("command") {
            if c.as_str() != Some(command.name()) {
                return Err(RunError::Config(format!(
                    "config is for {c}, not {}",
                    command.name()
                )));
            }
        }
    }
    serde_json::from_value(value).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

fn config_hash<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("configs serialize");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> i32 {
    if let Some(j) = cli.jobs {
        // a pool may already exist when embedded; the setting is then advisory
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    let start = Instant::now();
    if let Err(e) = fs::create_dir_all(&cli.out) {
        eprintln!("cannot create {}: {e}", cli.out.display());
        return EXIT_CONFIG;
    }
    let mut out = Outputs {
        dir: cli.out.clone(),
        written: Vec::new(),
    };
    let result = dispatch(cli, &mut out);
    let (code, message, hash) = match result {
        Ok(hash) => (EXIT_OK, None, hash),
        Err((e, hash)) => {
            eprintln!("{e}");
            (e.exit_code(), Some(e.to_string()), hash)
        }
    };
    let manifest = Manifest {
        command: cli.command.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: hash,
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: out.written.clone(),
        exit_code: code,
        message,
    };
    if let Err(e) = out.json("manifest.json", &manifest) {
        eprintln!("cannot write manifest: {e}");
    }
    code
}

type Dispatch = std::result::Result<String, (RunError, String)>;

fn dispatch(cli: &Cli, out: &mut Outputs) -> Dispatch {
    let path = cli.config.as_deref();
    macro_rules! go {
        ($ty:ty, $f:ident) => {{
            let mut cfg: $ty = load_config(path, cli.command).map_err(|e| (e, String::new()))?;
            if let Some(s) = cli.seed {
                cfg.set_seed(s);
            }
            let hash = config_hash(&cfg);
            match $f(&cfg, out) {
                Ok(()) => Ok(hash),
                Err(e) => Err((e, hash)),
            }
        }};
    }
    match cli.command {
        Command::Verify => go!(VerifyConfig, run_verify),
        Command::Admissible => go!(AdmissibleConfig, run_admissible),
        Command::Convolve => go!(ConvolveConfig, run_convolve),
        Command::WeylCompose => go!(WeylComposeConfig, run_weyl_compose),
        Command::Invert => go!(InvertConfig, run_invert),
        Command::Decay => go!(DecayConfig, run_decay),
        Command::Grs => go!(GrsConfig, run_grs),
        Command::ChannelSweep => go!(ChannelSweepConfig, run_channel_sweep),
    }
}

type Run = std::result::Result<(), RunError>;

trait Seeded {
    fn set_seed(&mut self, _seed: u64) {}
}

impl Seeded for VerifyConfig {
    fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }
}

fn run_verify(cfg: &VerifyConfig, out: &mut Outputs) -> Run {
    let report = run_suite(cfg)?;
    out.json("suite.json", &report)?;
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect();
        Err(RunError::Assertion(format!(
            "failed checks: {}",
            failed.join(", ")
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdmissibleConfig {
    pub weight: WeightFn,
    pub moduli: Vec<usize>,
    pub n_max: u64,
}

impl Default for AdmissibleConfig {
    fn default() -> Self {
        AdmissibleConfig {
            weight: WeightFn::polynomial(2.0),
            moduli: vec![64],
            n_max: 64,
        }
    }
}

impl Seeded for AdmissibleConfig {}

fn run_admissible(cfg: &AdmissibleConfig, out: &mut Outputs) -> Run {
    let g = GroupSpec::new(&cfg.moduli)?;
    let report = check_admissible(&cfg.weight, &g, cfg.n_max)?;
    out.json("admissibility.json", &report)?;
    let mut csv = String::from("axis,n,rate\n");
    for (axis, seq) in &report.grs_rates {
        for (n, r) in seq {
            csv += &format!("{axis},{n},{r:e}\n");
        }
    }
    out.write("grs_rates.csv", &csv)?;
    Ok(())
}

fn domain_for(kind: ConvolutionKind, moduli: &[usize], phase_space: bool) -> Result<Domain> {
    let g = GroupSpec::new(moduli)?;
    Ok(match kind {
        ConvolutionKind::Plain if !phase_space => Domain::Group(g),
        ConvolutionKind::Plain | ConvolutionKind::Twisted => Domain::PhaseSpace(g),
        ConvolutionKind::Heisenberg => Domain::Heisenberg(HeisSpec::new(g)),
    })
}

fn read_function(path: &Path, domain: &Domain) -> Result<GroupFunction> {
    let file =
        fs::File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    GroupFunction::read_csv(domain.clone(), std::io::BufReader::new(file))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvolveConfig {
    pub kind: ConvolutionKind,
    pub moduli: Vec<usize>,
    /// Run the plain kind on `G x Ĝ` instead of `G`.
    pub phase_space: bool,
    pub seed: u64,
    pub f_csv: Option<PathBuf>,
    pub g_csv: Option<PathBuf>,
    pub weight: WeightFn,
}

impl Default for ConvolveConfig {
    fn default() -> Self {
        ConvolveConfig {
            kind: ConvolutionKind::Twisted,
            moduli: vec![8],
            phase_space: false,
            seed: 1,
            f_csv: None,
            g_csv: None,
            weight: WeightFn::polynomial(1.0),
        }
    }
}

impl Seeded for ConvolveConfig {
    fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }
}

fn run_convolve(cfg: &ConvolveConfig, out: &mut Outputs) -> Run {
    let domain = domain_for(cfg.kind, &cfg.moduli, cfg.phase_space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut load = |p: &Option<PathBuf>| match p {
        Some(p) => read_function(p, &domain),
        None => Ok(GroupFunction::random(domain.clone(), &mut rng)),
    };
    let f = load(&cfg.f_csv)?;
    let g = load(&cfg.g_csv)?;
    let h = convolve(cfg.kind, &f, &g)?;
    out.write("f.csv", &f.to_csv_string())?;
    out.write("g.csv", &g.to_csv_string())?;
    out.write("convolution.csv", &h.to_csv_string())?;
    let report = weighted_l1_submult_check(&f, &g, &cfg.weight, cfg.kind)?;
    out.json("submult.json", &report)?;
    if report.holds || report.warning.is_some() {
        Ok(())
    } else {
        Err(RunError::Assertion(format!(
            "weighted Young inequality ratios {} / {}",
            report.l1_ratio, report.sup_ratio
        )))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylComposeConfig {
    pub moduli: Vec<usize>,
    pub pairs: usize,
    pub seed: u64,
}

impl Default for WeylComposeConfig {
    fn default() -> Self {
        WeylComposeConfig {
            moduli: vec![8],
            pairs: 10,
            seed: 1,
        }
    }
}

impl Seeded for WeylComposeConfig {
    fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }
}

fn run_weyl_compose(cfg: &WeylComposeConfig, out: &mut Outputs) -> Run {
    let g = GroupSpec::new(&cfg.moduli)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut reports = Vec::with_capacity(cfg.pairs);
    let mut csv = String::from("pair,defect,tolerance,sigma_l1,tau_l1\n");
    for i in 0..cfg.pairs {
        let s = SpreadingFunction::random(g.clone(), &mut rng);
        let t = SpreadingFunction::random(g.clone(), &mut rng);
        let r = compose_check(&s, &t)?;
        csv += &format!(
            "{i},{:e},{:e},{:e},{:e}\n",
            r.defect, r.tolerance, r.sigma_l1, r.tau_l1
        );
        reports.push(r);
    }
    out.write("compose.csv", &csv)?;
    out.json("compose.json", &reports)?;
    match reports.iter().position(|r| !r.holds) {
        None => Ok(()),
        Some(i) => Err(RunError::Assertion(format!(
            "composition rule fails on pair {i}"
        ))),
    }
}

/// Source of the perturbation `f` in `αδ + f`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSource {
    Zero,
    /// Uniform random entries rescaled to the given ℓ¹ norm.
    Random {
        l1: f64,
    },
    /// `c` at the element with index 1.
    Shift {
        c: f64,
    },
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NeumannConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NeumannConfig {
    fn default() -> Self {
        NeumannConfig {
            tol: 1e-13,
            max_iter: 2000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InvertConfig {
    pub kind: ConvolutionKind,
    pub moduli: Vec<usize>,
    pub phase_space: bool,
    pub alpha: Complex64,
    pub f: FunctionSource,
    pub weight: WeightFn,
    pub seed: u64,
    /// Also run the Neumann series and compare.
    pub neumann: Option<NeumannConfig>,
}

impl Default for InvertConfig {
    fn default() -> Self {
        InvertConfig {
            kind: ConvolutionKind::Plain,
            moduli: vec![16],
            phase_space: false,
            alpha: Complex64::new(1.0, 0.0),
            f: FunctionSource::Shift { c: 0.3 },
            weight: WeightFn::polynomial(1.0),
            seed: 1,
            neumann: None,
        }
    }
}

impl Seeded for InvertConfig {
    fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }
}

fn run_invert(cfg: &InvertConfig, out: &mut Outputs) -> Run {
    let domain = domain_for(cfg.kind, &cfg.moduli, cfg.phase_space)?;
    let f = match &cfg.f {
        FunctionSource::Zero => GroupFunction::zeros(domain),
        FunctionSource::Random { l1 } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let f = GroupFunction::random(domain, &mut rng);
            let s = l1 / f.l1_norm();
            f.scale(Complex64::new(s, 0.0))
        }
        FunctionSource::Shift { c } => {
            let mut f = GroupFunction::zeros(domain);
            f.values_mut()[1] = Complex64::new(*c, 0.0);
            f
        }
        FunctionSource::Csv { path } => read_function(path, &domain)?,
    };
    let report = invert_convolver(cfg.alpha, &f, cfg.kind, &cfg.weight)?;
    out.write("theta.csv", &report.theta.to_csv_string())?;
    out.write("envelope_in.csv", &report.envelope_in.to_csv())?;
    out.write("envelope_out.csv", &report.envelope_out.to_csv())?;
    out.json("inverse.json", &report)?;
    if let Some(n) = &cfg.neumann {
        let series = neumann_inverse(cfg.alpha, &f, cfg.kind, n.tol, n.max_iter)?;
        let gap = series.theta.max_abs_diff(&report.theta)?;
        out.write("theta_neumann.csv", &series.theta.to_csv_string())?;
        out.json(
            "neumann.json",
            &serde_json::json!({ "terms": series.terms, "last_term_norm": series.last_term_norm, "max_abs_gap": gap }),
        )?;
    }
    if report.left_residual > 1e-10
        || report.right_residual > 1e-10
        || report.circulant_defect_rel > 1e-10
    {
        return Err(RunError::Assertion(format!(
            "inverse residuals {:e} / {:e}, circulant defect {:e}",
            report.left_residual, report.right_residual, report.circulant_defect_rel
        )));
    }
    Ok(())
}

/// Regression snapshot of a decay run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayFixture {
    pub tolerance: f64,
    pub rows: Vec<DecayFixtureRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecayFixtureRow {
    pub n: usize,
    pub g_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecayConfig {
    pub pattern: Pattern,
    pub alpha: Complex64,
    pub weight: WeightFn,
    pub ladder: Vec<usize>,
    /// Compare against a stored snapshot.
    pub fixture: Option<PathBuf>,
}

impl Default for DecayConfig {
    fn default() -> Self {
        DecayConfig {
            pattern: Pattern::PowerLaw {
                amplitude: 0.5,
                s: 3.0,
                alternating: true,
            },
            alpha: Complex64::new(1.0, 0.0),
            weight: WeightFn::polynomial(1.0),
            ladder: vec![64, 128, 256, 512],
            fixture: None,
        }
    }
}

impl Seeded for DecayConfig {}

/// Rows of `report` that are missing from or disagree with `fixture` (relative tolerance).
pub fn fixture_mismatches(
    report: &crate::inversion::DecayReport,
    fixture: &DecayFixture,
) -> Vec<String> {
    fixture
        .rows
        .iter()
        .filter_map(|fr| {
            let got = report
                .rows
                .iter()
                .find(|r| r.n == fr.n)
                .and_then(|r| r.g_norm);
            match got {
                Some(g) if (g - fr.g_norm).abs() <= fixture.tolerance * fr.g_norm.abs() => None,
                Some(g) => Some(format!("N = {}: {g} vs fixture {}", fr.n, fr.g_norm)),
                None => Some(format!("N = {}: no value", fr.n)),
            }
        })
        .collect()
}

fn run_decay(cfg: &DecayConfig, out: &mut Outputs) -> Run {
    let report = decay_preservation_experiment(
        cfg.pattern,
        cfg.alpha,
        &cfg.weight,
        &cfg.ladder,
        ConvolutionKind::Plain,
    )?;
    out.write("decay.csv", &report.to_csv())?;
    out.json("decay.json", &report)?;
    if let Some(path) = &cfg.fixture {
        let text = fs::read_to_string(path)
            .map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
        let fixture: DecayFixture =
            serde_json::from_str(&text).map_err(|e| RunError::Config(e.to_string()))?;
        let bad = fixture_mismatches(&report, &fixture);
        if !bad.is_empty() {
            return Err(RunError::Assertion(bad.join("; ")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrsConfig {
    pub c: f64,
    pub weights: Vec<WeightFn>,
    pub ladder: Vec<usize>,
}

impl Default for GrsConfig {
    fn default() -> Self {
        GrsConfig {
            c: 0.3,
            weights: vec![
                WeightFn::polynomial(2.0),
                WeightFn::exponential(1.0),
                WeightFn::exponential(1.5),
            ],
            ladder: vec![64, 128, 256, 512],
        }
    }
}

impl Seeded for GrsConfig {}

fn run_grs(cfg: &GrsConfig, out: &mut Outputs) -> Run {
    let report = grs_experiment(cfg.c, &cfg.weights, &cfg.ladder)?;
    let mut csv = String::from("weight,n,norm,closed_form,kernel_error\n");
    for r in &report.rows {
        let w = serde_json::to_string(&r.weight)
            .map_err(Error::from)?
            .replace(',', ";");
        csv += &format!(
            "{w},{},{:e},{:e},{:e}\n",
            r.n, r.norm, r.closed_form, r.kernel_error
        );
    }
    out.write("grs.csv", &csv)?;
    out.json("grs.json", &report)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelSweepConfig {
    pub channel: ChannelParams,
    pub ks: Vec<usize>,
    pub symbol_seed: u64,
    pub noise_level: f64,
}

impl Default for ChannelSweepConfig {
    fn default() -> Self {
        ChannelSweepConfig {
            channel: ChannelParams::default(),
            ks: vec![0, 1, 2, 4, 8, 16, 32],
            symbol_seed: 11,
            noise_level: 0.0,
        }
    }
}

impl Seeded for ChannelSweepConfig {
    fn set_seed(&mut self, seed: u64) {
        self.channel.seed = seed;
    }
}

fn run_channel_sweep(cfg: &ChannelSweepConfig, out: &mut Outputs) -> Run {
    let model = ChannelModel::from_params(&cfg.channel)?;
    let report = equalization_sweep(&model, &cfg.ks, cfg.symbol_seed, cfg.noise_level)?;
    out.json("channel.json", &model.params)?;
    out.write("spreading.csv", &model.spreading_csv())?;
    out.write("sweep.csv", &report.to_csv())?;
    out.json("sweep.json", &report)?;
    Ok(())
}
