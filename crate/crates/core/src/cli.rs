//! Command-line driver: run configuration, dispatch, and JSON/CSV/SFWF output.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 configuration error,
//! 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::clifford::{
    build_extended_gammas, build_rcqm_gammas, build_so_generators, build_standard_gammas, verify_clifford_relations,
    verify_so_commutations, CliffordError, ExtendedForm, SoTarget,
};
use crate::fields::bessel::bessel_k2;
use crate::fields::kernel::{KernelOptions, OmegaKernel};
use crate::fields::sfwf::{read_sfwf, write_sfwf, SfwfError};
use crate::fields::{
    apply_omega_spectral, convert, energy, evolve, make_gaussian_packet, make_packet, to_position, FieldError,
    MomentumGrid, PacketSpec, StateRep, WaveFunctionK,
};
use crate::linalg::C64;
use crate::observables::poincare::{default_grid, poincare_suite};
use crate::observables::{casimir_check, observables_report, ObservablesError, ObservablesReport, REALITY_TOLERANCE};
use crate::report::RelationReport;
use crate::spin::{verify_spin_algebra, DoubletForm, Spin, SpinError, SpinSystem};
use crate::transforms::{reversed_conjugation_residual, verify_dirac_spinors, verify_fw_relations, TransformError};

pub const REPORT_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "SPINOR_FORGE_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

macro_rules! config_error_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Config(e.to_string())
            }
        }
    )*};
}
config_error_from!(FieldError, SpinError, CliffordError, TransformError, ObservablesError);

impl From<SfwfError> for CliError {
    fn from(e: SfwfError) -> Self {
        CliError::Io(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    Algebra,
    SpinTable,
    TransformRoundtrip,
    Evolve,
    Observables,
    KernelCompare,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Algebra => "algebra",
            CommandName::SpinTable => "spin-table",
            CommandName::TransformRoundtrip => "transform-roundtrip",
            CommandName::Evolve => "evolve",
            CommandName::Observables => "observables",
            CommandName::KernelCompare => "kernel-compare",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub dt: Option<f64>,
    /// Observables checkpoints over `[0, T]`.
    pub checkpoints: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self { t: None, dt: None, checkpoints: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketConfig {
    pub k0: [f64; 3],
    pub x0: [f64; 3],
    /// Momentum width; defaults to the mass.
    pub sigma: Option<f64>,
    /// `[re, im]` per component.
    pub weights: Option<Vec<[f64; 2]>>,
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self { k0: [0.3, -0.2, 0.4], x0: [0.5, -0.3, 0.2], sigma: None, weights: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// JSON report path; defaults to `<dir>/<command>.json`.
    pub report: Option<PathBuf>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("spinor-forge-out"), report: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceConfig {
    pub drift: f64,
    pub norm: f64,
    pub roundtrip: f64,
    pub kernel: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { drift: 1e-8, norm: 1e-10, roundtrip: 1e-12, kernel: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandName>,
    pub spin: Option<Spin>,
    pub representation: StateRep,
    pub mass: f64,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub packet: PacketConfig,
    pub output: OutputConfig,
    pub tolerance: ToleranceConfig,
    /// Random momenta for the transform checks.
    pub samples: usize,
    pub seed: u64,
    /// Injects a wrong generator into the Clifford suite.
    pub corrupt: bool,
    pub poincare: bool,
    /// SFWF manifest to report on instead of the inline packet.
    pub state: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            spin: None,
            representation: StateRep::Rcqm,
            mass: 1.0,
            grid: GridConfig::default(),
            time: TimeConfig::default(),
            packet: PacketConfig::default(),
            output: OutputConfig::default(),
            tolerance: ToleranceConfig::default(),
            samples: 1000,
            seed: 2024,
            corrupt: false,
            poincare: true,
            state: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        Self::from_json(&text)
    }

    pub fn spin_or_default(&self) -> Spin {
        self.spin.unwrap_or_else(|| Spin::from_twice(1).expect("spin 1/2"))
    }

    /// Grid points per axis; the kernel comparison defaults to a finer grid.
    pub fn grid_n(&self) -> usize {
        self.grid.n.unwrap_or(match self.command {
            Some(CommandName::KernelCompare) => 64,
            _ => 32,
        })
    }

    pub fn box_length(&self) -> f64 {
        self.grid.l.unwrap_or(match self.command {
            Some(CommandName::KernelCompare) => 8.0 / self.mass,
            _ => 16.0 / self.mass,
        })
    }

    pub fn total_time(&self) -> f64 {
        self.time.t.unwrap_or(5.0 / self.mass)
    }

    pub fn dt(&self) -> f64 {
        self.time.dt.unwrap_or(0.05 / self.mass)
    }

    pub fn sigma(&self) -> f64 {
        self.packet.sigma.unwrap_or(self.mass)
    }

    pub fn grid(&self) -> Result<MomentumGrid, CliError> {
        Ok(MomentumGrid::cubic(self.grid_n(), self.box_length(), self.mass)?)
    }

    pub fn report_path(&self) -> PathBuf {
        let name = self.command.map_or("report", CommandName::as_str);
        self.output.report.clone().unwrap_or_else(|| self.output.dir.join(format!("{name}.json")))
    }

    pub fn weights(&self, dim: usize) -> Result<Vec<C64>, CliError> {
        match &self.packet.weights {
            Some(w) if w.len() != dim => {
                Err(CliError::Config(format!("packet.weights: {} entries for {dim} components", w.len())))
            }
            Some(w) => Ok(w.iter().map(|p| C64::new(p[0], p[1])).collect()),
            None => Ok((0..dim).map(|c| C64::new(1.0 + 0.3 * c as f64, 0.2 - 0.7 * c as f64)).collect()),
        }
    }

    /// Numeric checks that do not depend on the command.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, why: String| Err(CliError::Config(format!("{field}: {why}")));
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad("mass", format!("must be positive, got {}", self.mass));
        }
        let n = self.grid_n();
        if n < 2 || n % 2 != 0 {
            return bad("grid.n", format!("must be even and at least 2, got {n}"));
        }
        let l = self.box_length();
        if !(l > 0.0 && l.is_finite()) {
            return bad("grid.L", format!("must be positive, got {l}"));
        }
        let t = self.total_time();
        if !(t >= 0.0 && t.is_finite()) {
            return bad("time.T", format!("must be non-negative, got {t}"));
        }
        let dt = self.dt();
        if !(dt > 0.0 && dt.is_finite()) {
            return bad("time.dt", format!("must be positive, got {dt}"));
        }
        if self.time.checkpoints == 0 {
            return bad("time.checkpoints", "must be at least 1".into());
        }
        let sigma = self.sigma();
        if !(sigma > 0.0 && sigma.is_finite()) {
            return bad("packet.sigma", format!("must be positive, got {sigma}"));
        }
        if self.samples == 0 {
            return bad("samples", "must be at least 1".into());
        }
        let tol = &self.tolerance;
        for (name, v) in [("drift", tol.drift), ("norm", tol.norm), ("roundtrip", tol.roundtrip), ("kernel", tol.kernel)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(&format!("tolerance.{name}"), format!("must be positive, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Parser, Debug)]
#[command(name = "spinor-forge", version, about = "Arbitrary-spin RCQM, FW and Dirac-like verification suites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// JSON document with RunConfig fields; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Half-integer spin, e.g. 3/2.
    #[arg(long, global = true)]
    pub spin: Option<String>,
    /// rcqm, fw or dirac.
    #[arg(long, global = true)]
    pub rep: Option<String>,
    /// Grid points per axis.
    #[arg(long = "n", global = true)]
    pub n: Option<usize>,
    /// Box length.
    #[arg(long = "L", global = true)]
    pub l: Option<f64>,
    #[arg(long, global = true)]
    pub mass: Option<f64>,
    /// Total evolution time.
    #[arg(long = "T", global = true)]
    pub t: Option<f64>,
    /// Checkpoint spacing.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Packet centre in momentum space, `kx,ky,kz`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub k0: Option<String>,
    /// Packet centre in position space, `x,y,z`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub drift_tol: Option<f64>,
    #[arg(long, global = true)]
    pub norm_tol: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Clifford-Dirac, SO(8), SU(2) and spin suites.
    Algebra {
        /// Replace one generator by a wrong one (test hook).
        #[arg(long)]
        corrupt: bool,
    },
    /// Spin matrices and doublet projections.
    SpinTable,
    /// V∓ relations, Dirac spinors and state round trips.
    TransformRoundtrip {
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Exact evolution with SFWF snapshots and a norm/energy series.
    Evolve,
    /// Conserved functionals over time, Poincaré and Casimir suites.
    #[command(alias = "report")]
    Observables {
        /// SFWF manifest to start from.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        checkpoints: Option<usize>,
        /// Skip the Poincaré residual suite.
        #[arg(long)]
        no_poincare: bool,
    },
    /// Position-space kernel against the spectral square root.
    KernelCompare,
}

fn parse_triple(field: &str, text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    let bad = || CliError::Config(format!("{field}: expected three comma-separated numbers, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(out)
}

impl Cli {
    /// Config file (if any) overlaid with the command line.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = &self.spin {
            cfg.spin = Some(s.parse()?);
        }
        if let Some(r) = &self.rep {
            cfg.representation = r.parse().map_err(CliError::Config)?;
        }
        if self.n.is_some() {
            cfg.grid.n = self.n;
        }
        if self.l.is_some() {
            cfg.grid.l = self.l;
        }
        if let Some(m) = self.mass {
            cfg.mass = m;
        }
        if self.t.is_some() {
            cfg.time.t = self.t;
        }
        if self.dt.is_some() {
            cfg.time.dt = self.dt;
        }
        if let Some(k) = &self.k0 {
            cfg.packet.k0 = parse_triple("k0", k)?;
        }
        if let Some(x) = &self.x0 {
            cfg.packet.x0 = parse_triple("x0", x)?;
        }
        if self.sigma.is_some() {
            cfg.packet.sigma = self.sigma;
        }
        if let Some(o) = &self.out {
            cfg.output.dir = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.drift_tol {
            cfg.tolerance.drift = t;
        }
        if let Some(t) = self.norm_tol {
            cfg.tolerance.norm = t;
        }
        match &self.command {
            Some(Command::Algebra { corrupt }) => {
                cfg.command = Some(CommandName::Algebra);
                cfg.corrupt |= corrupt;
            }
            Some(Command::SpinTable) => cfg.command = Some(CommandName::SpinTable),
            Some(Command::TransformRoundtrip { samples }) => {
                cfg.command = Some(CommandName::TransformRoundtrip);
                if let Some(s) = samples {
                    cfg.samples = *s;
                }
            }
            Some(Command::Evolve) => cfg.command = Some(CommandName::Evolve),
            Some(Command::Observables { state, checkpoints, no_poincare }) => {
                cfg.command = Some(CommandName::Observables);
                if state.is_some() {
                    cfg.state = state.clone();
                }
                if let Some(c) = checkpoints {
                    cfg.time.checkpoints = *c;
                }
                if *no_poincare {
                    cfg.poincare = false;
                }
            }
            Some(Command::KernelCompare) => cfg.command = Some(CommandName::KernelCompare),
            None => {}
        }
        if cfg.command.is_none() {
            return Err(CliError::Config("no command given (on the command line or as `command` in the config)".into()));
        }
        Ok(cfg)
    }
}

/// Result of one command: overall verdict plus the JSON document.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub suites: Vec<RelationReport>,
    pub data: Value,
}

impl Outcome {
    fn new(suites: Vec<RelationReport>, data: Value) -> Self {
        Self { passed: suites.iter().all(RelationReport::passed), suites, data }
    }

    pub fn to_json(&self, cfg: &RunConfig) -> Value {
        let summary: Vec<Value> = self
            .suites
            .iter()
            .map(|s| {
                json!({
                    "name": s.name,
                    "anchor": s.anchor,
                    "passed": s.pass_count(),
                    "failed": s.fail_count(),
                    "max_residual": s.max_residual(),
                })
            })
            .collect();
        json!({
            "report_version": REPORT_VERSION,
            "command": cfg.command.map(CommandName::as_str),
            "passed": self.passed,
            "config": cfg,
            "summary": summary,
            "suites": self.suites,
            "data": self.data,
        })
    }
}

pub fn set_thread_cap() -> Result<(), CliError> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_ENV}: expected a positive integer, got `{text}`")))?;
    // A pool built earlier in the process keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs a resolved configuration and returns the outcome without writing it.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command.expect("resolved configs carry a command") {
        CommandName::Algebra => cmd_algebra(cfg),
        CommandName::SpinTable => cmd_spin_table(cfg),
        CommandName::TransformRoundtrip => cmd_transform_roundtrip(cfg),
        CommandName::Evolve => cmd_evolve(cfg),
        CommandName::Observables => cmd_report(cfg),
        CommandName::KernelCompare => cmd_kernel_compare(cfg),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

fn write_report(cfg: &RunConfig, outcome: &Outcome) -> Result<PathBuf, CliError> {
    let path = cfg.report_path();
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    let text = serde_json::to_string_pretty(&outcome.to_json(cfg)).expect("report serializes");
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn print_summary(outcome: &Outcome, report: &Path) {
    for s in &outcome.suites {
        println!("{:<40} {:>4}/{:<4} max {:.3e}", s.name, s.pass_count(), s.entries.len(), s.max_residual());
        for f in s.failures().take(5) {
            println!("    FAIL {} [{}] {:.3e}", f.label, f.anchor, f.residual);
        }
    }
    println!("report: {}", report.display());
    println!("{}", if outcome.passed { "PASS" } else { "FAIL" });
}

/// Parses arguments, runs the command, writes the report, and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    let run = || -> Result<bool, CliError> {
        set_thread_cap()?;
        let cfg = cli.resolve()?;
        let outcome = execute(&cfg)?;
        let path = write_report(&cfg, &outcome)?;
        print_summary(&outcome, &path);
        Ok(outcome.passed)
    };
    match run() {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn random_momenta(cfg: &RunConfig, count: usize) -> Vec<[f64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let r = 4.0 * cfg.mass;
    (0..count).map(|_| [0; 3].map(|_| rng.gen_range(-r..r))).collect()
}

fn even_multiplicity(sys: &SpinSystem) -> Result<(), CliError> {
    if sys.n % 2 != 0 {
        return Err(FieldError::OddMultiplicity(sys.n).into());
    }
    Ok(())
}

pub fn cmd_algebra(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = SpinSystem::new(cfg.spin_or_default());
    let n = sys.n;
    let mut suites = vec![verify_spin_algebra(&sys)];
    let mut notes = Vec::new();
    if n % 2 == 0 {
        let mut standard = build_standard_gammas(n)?;
        if cfg.corrupt {
            let wrong = standard.get(1).scale_real(1.5);
            standard = standard.with_replaced(1, wrong);
        }
        suites.push(verify_clifford_relations(&standard));
        let tilde = build_extended_gammas(n, ExtendedForm::Tilde)?;
        suites.push(verify_clifford_relations(&tilde));
        let anti = build_extended_gammas(n, ExtendedForm::AntiHermitian)?;
        suites.push(verify_clifford_relations(&anti));
        let barred = build_rcqm_gammas(n)?;
        suites.push(verify_clifford_relations(&barred));
        for set in [&anti, &barred] {
            for target in [SoTarget::So8, SoTarget::Su2Pair] {
                suites.push(verify_so_commutations(&build_so_generators(set, target)?));
            }
        }
        let ks = random_momenta(cfg, cfg.samples.min(100));
        suites.push(casimir_check(&sys, &ks, cfg.mass)?);
    } else {
        notes.push(format!("N = {n} is odd: only the spin suite applies"));
    }
    Ok(Outcome::new(suites, json!({ "spin": sys.s, "N": n, "notes": notes })))
}

fn diag(m: &crate::linalg::ComplexMatrix) -> Vec<f64> {
    (0..m.rows()).map(|i| m[(i, i)].re).collect()
}

pub fn cmd_spin_table(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = SpinSystem::new(cfg.spin_or_default());
    let matrices: Vec<Vec<Vec<[f64; 2]>>> = sys
        .singlet
        .iter()
        .map(|m| (0..m.rows()).map(|r| (0..m.cols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect())
        .collect();
    let data = json!({
        "spin": sys.s,
        "N": sys.n,
        "casimir": sys.casimir,
        "s3": diag(&sys.singlet[2]),
        "rcqm_s3": diag(&sys.doublet(DoubletForm::Rcqm)[2]),
        "fw_s3": diag(&sys.doublet(DoubletForm::Fw)[2]),
        "charge_sign": diag(&sys.charge_sign),
        "matrices": matrices,
    });
    println!("s = {}  N = {}  s(s+1) = {}", sys.s, sys.n, sys.casimir);
    println!("{:>4} {:>8} {:>8} {:>8} {:>4}", "A", "rcqm s3", "fw s3", "g", "");
    let (r3, f3) = (diag(&sys.doublet_rcqm[2]), diag(&sys.doublet_fw[2]));
    for (a, g) in diag(&sys.charge_sign).iter().enumerate() {
        println!("{:>4} {:>8} {:>8} {:>8}", a + 1, r3[a], f3[a], g);
    }
    Ok(Outcome::new(vec![verify_spin_algebra(&sys)], data))
}

fn random_state(grid: &MomentumGrid, ncomp: usize, seed: u64) -> WaveFunctionK {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut st = WaveFunctionK::zeros(grid, ncomp, StateRep::Rcqm);
    st.data.iter_mut().for_each(|z| *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    st
}

fn max_abs(state: &WaveFunctionK) -> f64 {
    state.data.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn cmd_transform_roundtrip(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = SpinSystem::new(cfg.spin_or_default());
    even_multiplicity(&sys)?;
    let ks = random_momenta(cfg, cfg.samples);
    let mut suites = vec![verify_fw_relations(&ks, cfg.mass, sys.n)?];
    suites.push(verify_dirac_spinors(&ks[..ks.len().min(100)], cfg.mass, sys.n)?);

    let grid = cfg.grid()?;
    let f = random_state(&grid, sys.dim(), cfg.seed);
    let scale = max_abs(&f);
    let mut trip = RelationReport::new("state round trip", "Eq.75", cfg.tolerance.roundtrip);
    let fw = convert(&f, StateRep::Fw)?;
    let dirac = convert(&fw, StateRep::Dirac)?;
    let back = convert(&convert(&dirac, StateRep::Fw)?, StateRep::Rcqm)?;
    trip.push("rcqm→fw→dirac→fw→rcqm", "Eq.75", back.max_abs_diff(&f) / scale);
    let direct = convert(&convert(&f, StateRep::Dirac)?, StateRep::Rcqm)?;
    trip.push("rcqm→dirac→rcqm", "Eq.75", direct.max_abs_diff(&f) / scale);
    trip.push("norm preserved", "Eq.75", (dirac.norm() - f.norm()).abs() / f.norm());
    suites.push(trip);

    let reversed = reversed_conjugation_residual(&ks, cfg.mass, sys.n)?;
    Ok(Outcome::new(suites, json!({ "samples": ks.len(), "reversed_conjugation_residual": reversed })))
}

fn checkpoint_times(total: f64, dt: f64) -> Vec<f64> {
    let steps = (total / dt - 1e-9).ceil().max(0.0) as usize;
    let mut times: Vec<f64> = (0..steps).map(|j| j as f64 * dt).collect();
    if times.last().map_or(true, |&t| t < total) || times.is_empty() {
        times.push(total);
    }
    times
}

fn inline_packet(cfg: &RunConfig, sys: &SpinSystem, rep: StateRep) -> Result<WaveFunctionK, CliError> {
    if rep == StateRep::Dirac {
        even_multiplicity(sys)?;
    }
    let spec = PacketSpec { k0: cfg.packet.k0, sigma: cfg.sigma(), weights: cfg.weights(sys.dim())?, x0: cfg.packet.x0 };
    Ok(make_packet(&cfg.grid()?, sys.dim(), &spec, rep)?)
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sys = SpinSystem::new(cfg.spin_or_default());
    let initial = inline_packet(cfg, &sys, cfg.representation)?;
    let dir = &cfg.output.dir;
    ensure_dir(dir)?;
    write_sfwf(&initial, &dir.join("initial.json"))?;

    let csv_path = dir.join("evolve.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    w.write_record(["time", "norm", "energy"]).map_err(|e| io_err(&csv_path, e))?;
    let (n0, e0) = (initial.norm(), energy(&initial)?);
    let (mut norm_drift, mut energy_drift) = (0.0f64, 0.0f64);
    let times = checkpoint_times(cfg.total_time(), cfg.dt());
    for &t in &times {
        let st = evolve(&initial, t)?;
        let (n, e) = (st.norm(), energy(&st)?);
        norm_drift = norm_drift.max((n - n0).abs());
        energy_drift = energy_drift.max((e - e0).abs());
        w.write_record([format!("{t:.17e}"), format!("{n:.17e}"), format!("{e:.17e}")])
            .map_err(|e| io_err(&csv_path, e))?;
    }
    w.flush().map_err(|e| io_err(&csv_path, e))?;

    let last = evolve(&initial, cfg.total_time())?;
    write_sfwf(&last, &dir.join("final.json"))?;
    let mut r = RelationReport::new(format!("evolution {}", cfg.representation), "Eq.13", cfg.tolerance.norm);
    r.push("norm drift", "Eq.13", norm_drift);
    r.push("energy drift / |E₀|", "Eq.13", energy_drift / e0.abs().max(f64::MIN_POSITIVE));
    Ok(Outcome::new(
        vec![r],
        json!({ "checkpoints": times.len(), "norm0": n0, "energy0": e0, "series": csv_path, "initial": dir.join("initial.json"), "final": dir.join("final.json") }),
    ))
}

fn spin_for_components(ncomp: usize) -> Result<Spin, CliError> {
    if ncomp < 2 || ncomp % 2 != 0 {
        return Err(CliError::Config(format!("state has {ncomp} components; a doublet needs an even count")));
    }
    Ok(Spin::from_twice(ncomp as u32 / 2 - 1)?)
}

pub fn cmd_report(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let (sys, start) = match &cfg.state {
        Some(path) => {
            let st = read_sfwf(path)?;
            let spin = match cfg.spin {
                Some(s) => s,
                None => spin_for_components(st.ncomp)?,
            };
            let sys = SpinSystem::new(spin);
            if st.ncomp != sys.dim() {
                return Err(CliError::Config(format!("state has {} components, spin {} needs {}", st.ncomp, sys.s, sys.dim())));
            }
            let st = convert(&st, StateRep::Rcqm)?;
            (sys, st)
        }
        None => {
            let sys = SpinSystem::new(cfg.spin_or_default());
            let st = inline_packet(cfg, &sys, StateRep::Rcqm)?;
            (sys, st)
        }
    };
    let total = cfg.total_time();
    let steps = cfg.time.checkpoints;
    let mut reports: Vec<ObservablesReport> = Vec::with_capacity(steps + 1);
    for j in 0..=steps {
        let t = total * j as f64 / steps as f64;
        reports.push(observables_report(&evolve(&start, t)?, &sys)?);
    }
    let first = &reports[0];
    let mut drift = vec![0.0f64; first.len()];
    let mut imag = 0.0f64;
    for r in &reports {
        imag = imag.max(r.max_imag());
        for (d, (_, v)) in drift.iter_mut().zip(r.drift_from(first)) {
            *d = d.max(v);
        }
    }
    let mut cons = RelationReport::new(format!("conservation s={}", sys.s), "Eq.55", cfg.tolerance.drift);
    for (f, d) in first.entries().zip(&drift) {
        cons.push(format!("drift {}", f.label), f.anchor.clone(), *d);
    }
    let mut real = RelationReport::new("reality", "Eq.55", REALITY_TOLERANCE);
    real.push("max imaginary residue", "Eq.55", imag);
    let mut suites = vec![cons, real];
    if cfg.poincare {
        suites.extend(poincare_suite(&sys, &default_grid(cfg.mass)?)?);
    }
    if sys.n % 2 == 0 {
        suites.push(casimir_check(&sys, &random_momenta(cfg, cfg.samples.min(100)), cfg.mass)?);
    }

    let dir = &cfg.output.dir;
    ensure_dir(dir)?;
    let csv_path = dir.join("observables.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io_err(&csv_path, e))?;
    let mut header = vec!["time".to_string()];
    header.extend(first.entries().map(|f| f.label.clone()));
    w.write_record(&header).map_err(|e| io_err(&csv_path, e))?;
    for r in &reports {
        let mut row = vec![format!("{:.17e}", r.time)];
        row.extend(r.entries().map(|f| format!("{:.17e}", f.value)));
        w.write_record(&row).map_err(|e| io_err(&csv_path, e))?;
    }
    w.flush().map_err(|e| io_err(&csv_path, e))?;

    let drift_json: Vec<Value> = first
        .entries()
        .zip(&drift)
        .map(|(f, d)| json!({ "label": f.label, "anchor": f.anchor, "drift": d }))
        .collect();
    Ok(Outcome::new(
        suites,
        json!({ "entries": first.len(), "drift": drift_json, "checkpoints": reports, "series": csv_path }),
    ))
}

pub fn cmd_kernel_compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid()?;
    let st = make_gaussian_packet(&grid, 1, [0.0; 3], cfg.sigma(), &[C64::new(1.0, 0.0)])?;
    let kern = OmegaKernel::new(&grid, &KernelOptions::default())?;
    let got = kern.apply(&to_position(&st));
    let want = to_position(&apply_omega_spectral(&st));
    let rel = got.l2_diff(&want) / want.norm_sqr().sqrt();
    let mut r = RelationReport::new("kernel vs spectral", "Eq.6", cfg.tolerance.kernel);
    r.push("relative L2", "Eq.6", rel);
    let k2: Vec<Value> = [0.5, 1.0, 2.0, 5.0].iter().map(|&z| json!({ "z": z, "K2": bessel_k2(z) })).collect();
    Ok(Outcome::new(vec![r], json!({ "n": grid.n[0], "L": cfg.box_length(), "radius": kern.radius, "K2": k2 })))
}
