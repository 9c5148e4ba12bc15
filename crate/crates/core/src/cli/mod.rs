//! Command-line front end.
//!
//! Angles are in radians, frequencies in rad/s, times in seconds. Every
//! subcommand writes one table (CSV with a header row, or a JSON object with
//! `command`, `config`, `columns` and `rows`). Exit codes: 0 success,
//! 1 invalid input, 2 an internal check out of tolerance.

mod output;

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use output::{Cell, Document};

use crate::diagonalization::{
    build_pair_unitary_exponential, build_pair_unitary_polynomial, check_diagonalization,
    diagonalizer, verify_bch_transforms, Construction, Orientation,
};
use crate::entanglement::{concurrence_dynamics, measured_robustness_fidelity, robustness_sweep};
use crate::evolution::{
    analytic_state, overlap_with_target, perturbed_state, time_grid, transfer_schedule,
    InitialState, Propagator, TargetState,
};
use crate::linalg::{basis, PairLabel, DIM, EXACT_TOL, PIPELINE_TOL};
use crate::model::{coupling_strength, GeometricParams, ModelParams};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_CHECK_FAILED: u8 = 2;

const DEFAULT_RATIOS: &[f64] = &[0.0, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5];

#[derive(Debug, Parser)]
#[command(
    name = "dipole-transfer",
    version,
    about = "Entanglement transfer between two dipole-coupled pairs of two-level atoms",
    long_about = "Entanglement transfer between two dipole-coupled pairs of two-level atoms.\n\
                  Angles in radians, frequencies in rad/s, times in seconds."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: RunArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// State amplitudes over a time grid, with closed-form vs propagator residuals.
    Evolve,
    /// Check the diagonalization identities and exit 2 on any failure.
    Verify,
    /// First transfer time, period, transfer and return times.
    TransferTimes,
    /// Transfer fidelity against a coupling mismatch delta_eta/eta.
    Sweep,
    /// Six pairwise concurrences over a time grid.
    Concurrence,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Verify => "verify",
            Command::TransferTimes => "transfer-times",
            Command::Sweep => "sweep",
            Command::Concurrence => "concurrence",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunArgs {
    /// Mixing angle of the initial (A2, A3) state, rad.
    #[arg(long, global = true, default_value_t = FRAC_PI_4, allow_negative_numbers = true)]
    pub theta: f64,
    /// Relative phase of the initial state, rad.
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub phi: f64,
    /// Atomic transition angular frequency, rad/s.
    #[arg(
        long,
        global = true,
        default_value_t = 1.0e9,
        allow_negative_numbers = true
    )]
    pub omega: f64,
    /// Coupling within (1,2), rad/s [default: 1e6].
    #[arg(long, global = true, conflicts_with_all = ["gamma0", "r", "alpha"], allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Coupling mismatch: the (3,4) coupling is eta + delta_eta, rad/s.
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub delta_eta: f64,
    /// End of the time grid, s [default: 2*pi/eta].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long, global = true, default_value_t = 200)]
    pub steps: usize,
    /// Comma-separated delta_eta/eta values for `sweep`.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub ratios: Option<Vec<f64>>,
    /// Number of transfer and return times for `transfer-times`.
    #[arg(long, global = true, default_value_t = 5)]
    pub count: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Geometric mode: spontaneous emission rate, 1/s.
    #[arg(long, global = true, requires_all = ["r", "alpha"], allow_negative_numbers = true)]
    pub gamma0: Option<f64>,
    /// Geometric mode: interatomic distance, m.
    #[arg(long, global = true, requires_all = ["gamma0", "alpha"], allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Geometric mode: angle between pair axis and transition dipole, rad.
    #[arg(long, global = true, requires_all = ["gamma0", "r"], allow_negative_numbers = true)]
    pub alpha: Option<f64>,
}

/// Validated parameters of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
    pub eta: f64,
    pub delta_eta: f64,
    pub t_max: f64,
    pub steps: usize,
    pub ratios: Vec<f64>,
    pub count: usize,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometricParams>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Serialize(String),
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Invalid(msg.into()))
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let a = &cli.args;
        for (name, v) in [
            ("theta", a.theta),
            ("phi", a.phi),
            ("delta-eta", a.delta_eta),
        ] {
            if !v.is_finite() {
                return invalid(format!("--{name} must be finite"));
            }
        }
        if !(a.omega > 0.0) || !a.omega.is_finite() {
            return invalid(format!("--omega must be positive, got {}", a.omega));
        }
        let (eta, geometry) = match (a.gamma0, a.r, a.alpha) {
            (Some(gamma0), Some(r), Some(alpha)) => {
                let g = GeometricParams {
                    gamma0,
                    omega: a.omega,
                    r,
                    alpha,
                };
                (coupling_strength(&g)?, Some(g))
            }
            _ => (a.eta.unwrap_or(1.0e6), None),
        };
        if !eta.is_finite() {
            return invalid("--eta must be finite");
        }
        // `verify` is meaningful for uncoupled atoms too.
        let allow_zero = cli.command == Command::Verify;
        let eta_ok = if allow_zero { eta >= 0.0 } else { eta > 0.0 };
        if !eta_ok {
            return invalid(format!("eta must be positive, got {eta}"));
        }
        let eta34 = eta + a.delta_eta;
        let eta34_ok = if allow_zero {
            eta34 >= 0.0
        } else {
            eta34 > 0.0
        };
        if !eta34_ok {
            return invalid(format!("eta + delta-eta must be positive, got {eta34}"));
        }
        let t_max = match a.t_max {
            Some(t) => t,
            None if eta > 0.0 => 2.0 * PI / eta,
            None => 0.0,
        };
        if !(t_max >= 0.0) || !t_max.is_finite() {
            return invalid(format!(
                "--t-max must be finite and non-negative, got {t_max}"
            ));
        }
        if a.steps < 2 {
            return invalid(format!("--steps must be at least 2, got {}", a.steps));
        }
        let ratios = a.ratios.clone().unwrap_or_else(|| DEFAULT_RATIOS.to_vec());
        if ratios.is_empty() {
            return invalid("--ratios must list at least one value");
        }
        if let Some(bad) = ratios.iter().find(|r| !(**r > -1.0) || !r.is_finite()) {
            return invalid(format!(
                "--ratios values must be finite and exceed -1, got {bad}"
            ));
        }
        Ok(Self {
            command: cli.command.name(),
            theta: a.theta,
            phi: a.phi,
            omega: a.omega,
            eta,
            delta_eta: a.delta_eta,
            t_max,
            steps: a.steps,
            ratios,
            count: a.count,
            format: a.format,
            geometry,
        })
    }

    fn model(&self) -> Result<ModelParams, CliError> {
        Ok(ModelParams::perturbed(
            self.omega,
            self.eta,
            self.delta_eta,
        )?)
    }

    fn init(&self) -> InitialState {
        InitialState::new(self.theta, self.phi)
    }

    fn echo(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Result of a subcommand: the table to emit and whether every internal
/// check stayed within tolerance.
#[derive(Debug)]
pub struct Outcome {
    pub document: Document,
    pub checks_passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.checks_passed {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self
                .document
                .to_csv()
                .map_err(|e| CliError::Serialize(e.to_string())),
            Format::Json => self
                .document
                .to_json()
                .map_err(|e| CliError::Serialize(e.to_string())),
        }
    }
}

pub fn run(cli: &Cli) -> Result<(RunConfig, Outcome), CliError> {
    let cfg = RunConfig::from_cli(cli)?;
    let outcome = match cli.command {
        Command::Evolve => cmd_evolve(&cfg)?,
        Command::Verify => cmd_verify(&cfg)?,
        Command::TransferTimes => cmd_transfer_times(&cfg)?,
        Command::Sweep => cmd_sweep(&cfg)?,
        Command::Concurrence => cmd_concurrence(&cfg)?,
    };
    Ok((cfg, outcome))
}

/// Amplitudes from the propagator, their distance to the closed form and
/// the overlap with the matched target.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.model()?;
    let init = cfg.init();
    let target = TargetState::matched(&init);
    let prop = Propagator::new(&p)?;
    let psi0 = init.state();

    let mut columns = vec!["t".to_owned()];
    for i in 0..DIM {
        let label = basis::label_of(i);
        columns.push(format!("re_{label}"));
        columns.push(format!("im_{label}"));
    }
    columns.extend(["residual".to_owned(), "overlap".to_owned()]);
    let mut doc = Document::new("evolve", cfg.echo(), columns);

    let mut worst = 0.0f64;
    for t in time_grid(cfg.t_max, cfg.steps)? {
        let numeric = prop.evolve(&psi0, t);
        let closed = if p.is_symmetric() {
            analytic_state(&init, &p, t)?
        } else {
            perturbed_state(&init, &p, t)
        };
        let residual = closed.distance(&numeric);
        worst = worst.max(residual);
        let mut row: Vec<Cell> = vec![t.into()];
        for a in numeric.amplitudes() {
            row.push(a.re.into());
            row.push(a.im.into());
        }
        row.push(residual.into());
        row.push(overlap_with_target(&numeric, &target).into());
        doc.push(row);
    }
    Ok(Outcome {
        document: doc,
        checks_passed: worst <= PIPELINE_TOL,
    })
}

/// Diagonalization identities. Hamiltonian-valued residuals are divided by
/// `max(1, max|H|)` so the check is meaningful at rad/s scales.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = cfg.model()?;
    let columns = ["check", "residual", "tolerance", "passed", "detail"];
    let mut doc = Document::new("verify", cfg.echo(), columns.map(String::from).to_vec());
    let mut all_ok = true;
    let mut check = |name: &str, residual: f64, tol: f64, detail: String| {
        let ok = residual <= tol;
        all_ok &= ok;
        doc.push(vec![
            name.into(),
            residual.into(),
            tol.into(),
            ok.into(),
            detail.into(),
        ]);
    };

    let bch = verify_bch_transforms();
    let orientation = match bch.orientation {
        Orientation::U => "U A U^dag",
        Orientation::UDagger => "U^dag A U",
    };
    let detail = format!("orientation: {orientation}; {}", bch.convention);
    check(
        "bch_raise_lower",
        bch.raise_lower_residual,
        EXACT_TOL,
        detail.clone(),
    );
    check(
        "bch_lower_raise",
        bch.lower_raise_residual,
        EXACT_TOL,
        detail.clone(),
    );
    check(
        "bch_exchange_sum",
        bch.exchange_sum_residual,
        EXACT_TOL,
        detail,
    );

    for pair in [PairLabel::P12, PairLabel::P34] {
        let e = build_pair_unitary_exponential(pair)?.matrix;
        let q = build_pair_unitary_polynomial(pair)?.matrix;
        check(
            &format!(
                "polynomial_vs_exponential_{}{}",
                pair.first(),
                pair.second()
            ),
            e.max_abs_diff(&q),
            EXACT_TOL,
            "max |U_poly - U_exp|".into(),
        );
    }
    let u = diagonalizer(Construction::Polynomial);
    check(
        "unitarity",
        u.unitarity_residual(),
        EXACT_TOL,
        "max |U U^dag - I|".into(),
    );

    let d = check_diagonalization(&p, &u)?;
    let scale = d.scale.max(1.0);
    let note = format!("relative to max(1, max|H|) = {scale:e}");
    check(
        "diagonality",
        d.off_diagonal / scale,
        EXACT_TOL,
        note.clone(),
    );
    check("spectrum", d.spectrum_residual / scale, PIPELINE_TOL, note);

    Ok(Outcome {
        document: doc,
        checks_passed: all_ok,
    })
}

pub fn cmd_transfer_times(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.delta_eta != 0.0 {
        return invalid(format!(
            "transfer times are undefined for unequal couplings (delta-eta = {})",
            cfg.delta_eta
        ));
    }
    let s = transfer_schedule(&cfg.model()?, cfg.count)?;
    let columns = ["kind", "index", "time"];
    let mut doc = Document::new(
        "transfer-times",
        cfg.echo(),
        columns.map(String::from).to_vec(),
    );
    doc.push(vec!["t0".into(), 0usize.into(), s.t0.into()]);
    doc.push(vec!["period".into(), 0usize.into(), s.period.into()]);
    for (n, &t) in s.transfer_times.iter().enumerate() {
        doc.push(vec!["transfer".into(), n.into(), t.into()]);
    }
    for (m, &t) in s.return_times.iter().enumerate() {
        doc.push(vec!["return".into(), m.into(), t.into()]);
    }
    Ok(Outcome {
        document: doc,
        checks_passed: true,
    })
}

/// Closed-form and measured transfer fidelity per mismatch ratio, with the
/// quoted `1 − ½ ratio²` bound and the exact leading deficit.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let init = cfg.init();
    let columns = [
        "ratio",
        "fidelity_exact",
        "fidelity_measured",
        "quoted_bound",
        "quadratic_deficit",
        "quoted_bound_holds",
    ];
    let mut doc = Document::new("sweep", cfg.echo(), columns.map(String::from).to_vec());
    let mut ok = true;
    for point in robustness_sweep(cfg.theta, &cfg.ratios) {
        let measured = measured_robustness_fidelity(&init, cfg.omega, cfg.eta, point.ratio)?;
        ok &= (measured - point.fidelity).abs() <= EXACT_TOL;
        doc.push(vec![
            point.ratio.into(),
            point.fidelity.into(),
            measured.into(),
            point.quoted_bound.into(),
            point.quadratic_deficit.into(),
            point.quoted_bound_holds.into(),
        ]);
    }
    Ok(Outcome {
        document: doc,
        checks_passed: ok,
    })
}

pub fn cmd_concurrence(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = time_grid(cfg.t_max, cfg.steps)?;
    let rows = concurrence_dynamics(&cfg.init(), &cfg.model()?, &grid)?;
    let columns = ["t", "c23", "c14", "c12", "c34", "c13", "c24"];
    let mut doc = Document::new(
        "concurrence",
        cfg.echo(),
        columns.map(String::from).to_vec(),
    );
    for r in rows {
        doc.push(
            [r.t, r.c23, r.c14, r.c12, r.c34, r.c13, r.c24]
                .map(Cell::from)
                .to_vec(),
        );
    }
    Ok(Outcome {
        document: doc,
        checks_passed: true,
    })
}

/// Parses, runs and writes. Returns the process exit code; diagnostics go
/// to standard error only.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let (cfg, outcome) = run(cli)?;
    let text = outcome.render(cfg.format)?;
    match &cli.args.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    if !outcome.checks_passed {
        eprintln!("error: {} check out of tolerance", cfg.command);
    }
    Ok(outcome.exit_code())
}
