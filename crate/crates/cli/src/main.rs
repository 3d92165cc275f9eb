//! `sholo`: spectra, eigenfunctions, pole functions, H-fields and convergence
//! tables of the lattice strip and slit-strip, written as CSV, JSON or SVG.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sholo_core::continuum::Extremity;
use sholo_core::geometry::BoundaryPart;
use sholo_core::harness::Rect;
use sholo_core::{Error, ModeIndex, StripKind, StripSpec, Window};

#[derive(Parser, Debug)]
#[command(name = "sholo", version, about = "Discrete complex analysis on lattice strips and slit-strips")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Run the invariant checks of the subcommand instead of emitting data.
    #[arg(long, global = true)]
    pub check: bool,

    /// Tolerance override for every check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Walls at `a < b`, or a width `ℓ` with `a = −⌈ℓ/2⌉`.
#[derive(Args, Debug, Clone)]
pub struct Geometry {
    /// Width ℓ; the walls sit at a = −⌈ℓ/2⌉ and b = a + ℓ.
    #[arg(short = 'l', long = "len")]
    pub len: Option<usize>,

    /// Left wall (with --b instead of --len).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i32>,

    /// Right wall (with --a instead of --len).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i32>,
}

impl Geometry {
    pub fn spec(&self, kind: StripKind) -> Result<StripSpec, Failure> {
        match (self.len, self.a, self.b) {
            (Some(len), None, None) => Ok(StripSpec::centered(len, kind)?),
            (None, Some(a), Some(b)) => Ok(StripSpec::new(a, b, kind)?),
            _ => Err(Failure::invalid("give either --len or both --a and --b")),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    T,
    L,
    R,
}

impl From<Which> for Extremity {
    fn from(w: Which) -> Self {
        match w {
            Which::T => Extremity::Top,
            Which::L => Extremity::Left,
            Which::R => Extremity::Right,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    LeftWall,
    RightWall,
    Slit,
    Top,
    Bottom,
}

impl From<Part> for BoundaryPart {
    fn from(p: Part) -> Self {
        match p {
            Part::LeftWall => BoundaryPart::LeftWall,
            Part::RightWall => BoundaryPart::RightWall,
            Part::Slit => BoundaryPart::Slit,
            Part::Top => BoundaryPart::Top,
            Part::Bottom => BoundaryPart::Bottom,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarrierArg {
    Vertices,
    Faces,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Frequencies and eigenvalues of the propagation operator.
    Spectrum {
        #[command(flatten)]
        geometry: Geometry,
    },
    /// The eigenfunction f_k, on the cross-section or extended to --rows.
    Eigenfunction {
        #[command(flatten)]
        geometry: Geometry,
        /// Mode index in ±(ℤ+½).
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        /// Rows Y0:Y1 of the extension.
        #[arg(long, allow_hyphen_values = true)]
        rows: Option<String>,
    },
    /// Applies the propagation operator to f_k or to a cross-section CSV.
    Propagate {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<f64>,
        /// Cross-section CSV with columns x_prime,re,im.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of rows to move.
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Move downward (the inverse operator).
        #[arg(long)]
        down: bool,
    },
    /// The slit-strip pole function with unit singular part at (which, k).
    Pole {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, value_enum, ignore_case = true)]
        which: Which,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        rows: Option<String>,
    },
    /// H = Im ∫F² of a pole function (with --which) or of a strip eigenfunction.
    Hfield {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, value_enum, ignore_case = true)]
        which: Option<Which>,
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        rows: Option<String>,
    },
    /// Discrete harmonic measure: 0 on --zero parts, 1 on the rest.
    HarmonicMeasure {
        #[command(flatten)]
        geometry: Geometry,
        #[arg(long, allow_hyphen_values = true)]
        rows: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "bottom")]
        zero: Vec<Part>,
        #[arg(long, value_enum, default_value_t = CarrierArg::Vertices)]
        carrier: CarrierArg,
        /// Use the slit-strip.
        #[arg(long)]
        slit: bool,
    },
    /// Continuum pole coefficient tables poleToMix and mixToPole.
    Coeffs {
        #[arg(long, value_enum, ignore_case = true, default_value_t = Which::T)]
        which: Which,
        #[arg(long, default_value_t = 4.5)]
        kmax: f64,
    },
    /// Convergence tables against the continuum.
    Converge {
        #[command(subcommand)]
        table: ConvergeTable,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Ladder {
    /// Smallest width of the doubling sequence.
    #[arg(long, default_value_t = 8)]
    pub lmin: usize,
    /// Largest width of the doubling sequence.
    #[arg(long, default_value_t = 64)]
    pub lmax: usize,
}

#[derive(Subcommand, Debug)]
pub enum ConvergeTable {
    /// Strip eigenfunctions against the continuum modes.
    Strip {
        #[arg(long, default_value_t = 0.5)]
        k: f64,
        #[command(flatten)]
        ladder: Ladder,
    },
    /// Slit-strip pole functions on an interior rectangle.
    Pole {
        #[arg(long, value_enum, ignore_case = true, default_value_t = Which::T)]
        which: Which,
        #[arg(long, default_value_t = 0.5)]
        k: f64,
        /// X0:X1:Y0:Y1 in continuum units; a default per extremity when absent.
        #[arg(long, allow_hyphen_values = true)]
        rect: Option<String>,
        #[command(flatten)]
        ladder: Ladder,
    },
    /// Inner products of the mode and pole family.
    Ip {
        #[arg(long, default_value_t = 1.5)]
        kmax: f64,
        #[command(flatten)]
        ladder: Ladder,
    },
}

/// A failure with its exit status: 2 for bad parameters, 3 for numerics.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: 2, kind: "invalid_parameter", message: message.into() }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self { code: 3, kind: "numerical_failure", message: message.into() }
    }

    pub fn io(e: std::io::Error) -> Self {
        Self { code: 1, kind: "io", message: e.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidGeometry(_)
            | Error::EdgeNotInGraph(_)
            | Error::ModeOutOfRange { .. }
            | Error::InvalidArgument(_)
            | Error::Mismatch(_)
            | Error::OutsideDomain(_) => Failure::invalid(e.to_string()),
            _ => Failure::numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::io(e)
    }
}

pub fn mode_index(k: f64) -> Result<ModeIndex, Failure> {
    ModeIndex::from_f64(k).map_err(|_| Failure::invalid(format!("k = {k} is not in ℤ+½")))
}

pub fn positive_index(k: f64) -> Result<ModeIndex, Failure> {
    let k = mode_index(k)?;
    if !k.is_positive() {
        return Err(Failure::invalid(format!("k = {k} must be positive")));
    }
    Ok(k)
}

/// `Y0:Y1`, which must contain row 0.
pub fn parse_rows(s: &str) -> Result<Window, Failure> {
    let bad = || Failure::invalid(format!("rows must look like Y0:Y1, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.trim().parse::<i32>().map_err(|_| bad())?, b.trim().parse::<i32>().map_err(|_| bad())?);
    if a > 0 || b < 0 {
        return Err(Failure::invalid(format!("rows {a}:{b} must contain row 0")));
    }
    Ok(Window::new(a, b)?)
}

pub fn parse_rect(s: &str) -> Result<Rect, Failure> {
    Rect::parse(s).map_err(|e| Failure::invalid(e.to_string()))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SHOLO_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| Failure::invalid(format!("SHOLO_THREADS = {v:?} is not a count")))?;
    if n == 0 {
        return Err(Failure::invalid("SHOLO_THREADS must be positive"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::numerical(e.to_string()))
}

fn report(f: &Failure) {
    let record = json!({ "error": f.kind, "message": f.message, "exit_code": f.code });
    let _ = writeln!(std::io::stderr(), "{record}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report(&Failure::invalid(e.to_string().trim().to_string()));
            return ExitCode::from(2);
        }
    };
    let result = configure_threads().and_then(|_| commands::dispatch(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            report(&f);
            ExitCode::from(f.code)
        }
    }
}
