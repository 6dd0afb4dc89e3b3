//! Command configuration.
//!
//! Each command has a clap flag struct (every field optional) and a config
//! struct with concrete defaults. Resolution reads the optional JSON file,
//! overlays the flags that were given and deserializes the result, so flags
//! win over the file and unknown keys are rejected either way.

use crate::error::CliError;
use clap::{Args, Parser, Subcommand};
use hadamard_core::diffusion::Placement;
use hadamard_core::Exec;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(name = "hadamard", version, about = "Batch experiments with Hadamard-type fractional operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply one operator to a closed-form operand and compare with its analytic value.
    FracOp(FracOpFlags),
    /// Fuzz the extremum inequalities over a seeded function family.
    VerifyExtremum(ExtremumFlags),
    /// Caputo–Hadamard diffusion: one catalog problem or a seeded suite.
    SolveDiffusion(DiffusionFlags),
    /// Generalized diffusion with a Riemann–Hadamard memory term.
    SolveGeneralized(DiffusionFlags),
    /// Elliptic equation with Hadamard derivatives along each axis.
    SolveElliptic(EllipticFlags),
    /// Error and observed order over a refinement ladder.
    Convergence(ConvergenceFlags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FracOp(_) => "frac-op",
            Command::VerifyExtremum(_) => "verify-extremum",
            Command::SolveDiffusion(_) => "solve-diffusion",
            Command::SolveGeneralized(_) => "solve-generalized",
            Command::SolveElliptic(_) => "solve-elliptic",
            Command::Convergence(_) => "convergence",
        }
    }
}

/// Flags shared by every command.
#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct CommonFlags {
    /// JSON object with any of the command's keys; flags override it.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// CSV destination; relative paths resolve against HADAMARD_OUT_DIR when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = ["serial", "parallel"])]
    pub exec: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    Hadamard,
    CaputoHadamard,
    Integral,
    /// Residual of `I^α D^α f - f`.
    Compose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodKind {
    Split,
    Direct,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct FracOpFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
    #[arg(long, value_parser = ["hadamard", "caputo-hadamard", "integral", "compose"])]
    pub op: Option<String>,
    /// log_power:B | constant:C | log_poly:c0,c1,... | log_trig:freq,amp,phase;...
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of intervals.
    #[arg(long)]
    pub n: Option<usize>,
    /// Interval as a:T.
    #[arg(long)]
    pub grid: Option<String>,
    /// Grading exponent r in u_j = U (j/n)^r; 1 is uniform.
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_parser = ["split", "direct"])]
    pub method: Option<String>,
    /// Fail when the largest absolute error exceeds this.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FracOpConfig {
    pub out: Option<PathBuf>,
    pub exec: Exec,
    pub op: OpKind,
    pub input: String,
    pub alpha: f64,
    pub n: usize,
    pub grid: String,
    pub grading: f64,
    pub method: MethodKind,
    pub tol: Option<f64>,
}

impl Default for FracOpConfig {
    fn default() -> Self {
        Self {
            out: None,
            exec: Exec::default(),
            op: OpKind::Hadamard,
            input: "log_power:2".into(),
            alpha: 0.5,
            n: 1024,
            grid: "1:2.718281828459045".into(),
            grading: 1.0,
            method: MethodKind::Split,
            tol: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    LogPolynomial,
    LogTrig,
    Mixed,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ExtremumFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
    /// Comma-separated orders.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Option<Vec<f64>>,
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_parser = ["log-polynomial", "log-trig", "mixed"])]
    pub family: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtremumConfig {
    pub out: Option<PathBuf>,
    pub exec: Exec,
    pub alpha: Vec<f64>,
    pub count: u64,
    pub seed: u64,
    pub n: usize,
    pub grid: String,
    pub grading: f64,
    pub family: FamilyArg,
}

impl Default for ExtremumConfig {
    fn default() -> Self {
        Self {
            out: None,
            exec: Exec::default(),
            alpha: vec![0.1, 0.25, 0.5, 0.75, 0.9],
            count: 1000,
            seed: 42,
            n: 2048,
            grid: "1:7.38905609893065".into(),
            grading: 1.0,
            family: FamilyArg::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignArg {
    Nonnegative,
    Nonpositive,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlacementArg {
    LaplacianOfHistory,
    FractionalOfField,
}

impl From<PlacementArg> for Placement {
    fn from(p: PlacementArg) -> Self {
        match p {
            PlacementArg::LaplacianOfHistory => Placement::LaplacianOfHistory,
            PlacementArg::FractionalOfField => Placement::FractionalOfField,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct DiffusionFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
    /// Catalog key, or `random` for a seeded suite.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    /// Cells along y; omit for a 1D problem.
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub lx: Option<f64>,
    #[arg(long)]
    pub ly: Option<f64>,
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_parser = ["laplacian-of-history", "fractional-of-field"])]
    pub placement: Option<String>,
    /// Perturbation sizes for the continuous-dependence check.
    #[arg(long, value_delimiter = ',')]
    pub delta: Option<Vec<f64>>,
    /// Shift amplitudes for the auxiliary shift identity (generalized form).
    #[arg(long, value_delimiter = ',')]
    pub shift_mu: Option<Vec<f64>>,
    #[arg(long)]
    pub shift_t_min: Option<f64>,
    #[arg(long)]
    pub shift_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, value_parser = ["nonnegative", "nonpositive", "zero"])]
    pub sign: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub nonnegative_data: Option<bool>,
    #[arg(long)]
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiffusionConfig {
    pub out: Option<PathBuf>,
    pub exec: Exec,
    /// Defaults to the manufactured problem of the command's form.
    pub problem: Option<String>,
    pub alpha: f64,
    pub nu: f64,
    pub nx: usize,
    pub ny: Option<usize>,
    pub lx: f64,
    pub ly: f64,
    pub nt: usize,
    pub t_end: f64,
    pub grading: f64,
    pub placement: PlacementArg,
    pub delta: Vec<f64>,
    pub shift_mu: Vec<f64>,
    pub shift_t_min: f64,
    pub shift_tol: f64,
    pub seed: u64,
    pub count: u64,
    /// Source sign of the random suite; cycles through all three when unset.
    pub sign: Option<SignArg>,
    pub nonnegative_data: bool,
    pub max_error: Option<f64>,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self {
            out: None,
            exec: Exec::default(),
            problem: None,
            alpha: 0.5,
            nu: 1.0,
            nx: 64,
            ny: None,
            lx: 1.0,
            ly: 1.0,
            nt: 64,
            t_end: std::f64::consts::E,
            grading: 1.0,
            placement: PlacementArg::LaplacianOfHistory,
            delta: Vec::new(),
            shift_mu: Vec::new(),
            shift_t_min: 1.1,
            shift_tol: 1e-2,
            seed: 42,
            count: 50,
            sign: None,
            nonnegative_data: false,
            max_error: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessArg {
    Zero,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Max,
    Min,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct EllipticFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
    /// Catalog key, or `random` for a seeded suite.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Upper corner h_j of the box (1, h_j), comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub extents: Option<Vec<f64>>,
    /// Cells per axis, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub cells: Option<Vec<usize>>,
    #[arg(long, value_parser = ["zero", "boundary"])]
    pub guess: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<u64>,
    /// Bound checked by the random suite; both when unset.
    #[arg(long, value_parser = ["max", "min"])]
    pub side: Option<String>,
    #[arg(long)]
    pub max_error: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EllipticConfig {
    pub out: Option<PathBuf>,
    pub exec: Exec,
    pub problem: String,
    pub alpha: f64,
    pub extents: Vec<f64>,
    pub cells: Vec<usize>,
    pub guess: GuessArg,
    pub seed: u64,
    pub count: u64,
    pub side: Option<SideArg>,
    pub max_error: Option<f64>,
}

impl Default for EllipticConfig {
    fn default() -> Self {
        Self {
            out: None,
            exec: Exec::default(),
            problem: "manufactured".into(),
            alpha: 0.5,
            extents: vec![std::f64::consts::E],
            cells: vec![128],
            guess: GuessArg::Zero,
            seed: 42,
            count: 50,
            side: None,
            max_error: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetArg {
    Caputo,
    Generalized,
    Elliptic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineArg {
    Time,
    Space,
    Both,
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct ConvergenceFlags {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: CommonFlags,
    #[arg(long, value_parser = ["caputo", "generalized", "elliptic"])]
    pub target: Option<String>,
    /// Catalog key with a known exact solution.
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Refinement ladder, comma-separated (at least 4 levels).
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    #[arg(long, value_parser = ["time", "space", "both"])]
    pub refine: Option<String>,
    /// Fixed space cells when only time is refined.
    #[arg(long)]
    pub nx: Option<usize>,
    /// Fixed time intervals when only space is refined.
    #[arg(long)]
    pub nt: Option<usize>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub grading: Option<f64>,
    #[arg(long, value_parser = ["laplacian-of-history", "fractional-of-field"])]
    pub placement: Option<String>,
    /// Elliptic box extents, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub extents: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceConfig {
    pub out: Option<PathBuf>,
    pub exec: Exec,
    pub target: TargetArg,
    /// Defaults to the manufactured problem of the target.
    pub problem: Option<String>,
    pub alpha: f64,
    pub nu: f64,
    pub levels: Vec<usize>,
    pub refine: RefineArg,
    pub nx: usize,
    pub nt: usize,
    pub t_end: f64,
    pub grading: f64,
    pub placement: PlacementArg,
    pub extents: Vec<f64>,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            out: None,
            exec: Exec::default(),
            target: TargetArg::Caputo,
            problem: None,
            alpha: 0.5,
            nu: 1.0,
            levels: vec![32, 64, 128, 256],
            refine: RefineArg::Time,
            nx: 1024,
            nt: 1024,
            t_end: std::f64::consts::E,
            grading: 1.0,
            placement: PlacementArg::LaplacianOfHistory,
            extents: vec![std::f64::consts::E],
        }
    }
}

fn read_object(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::Config(format!("{}: expected a JSON object", path.display()))),
        Err(e) => Err(CliError::Config(format!("{}: {e}", path.display()))),
    }
}

/// File values, then given flags, then defaults for the rest.
pub fn resolve<F: Serialize, C: DeserializeOwned>(flags: &F, file: Option<&Path>) -> Result<C, CliError> {
    let mut merged = match file {
        Some(path) => read_object(path)?,
        None => Map::new(),
    };
    let Value::Object(given) = serde_json::to_value(flags).map_err(|e| CliError::Config(e.to_string()))? else {
        return Err(CliError::Config("flags did not serialize to an object".into()));
    };
    for (k, v) in given {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| CliError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_defaults_fill_the_rest() {
        let dir = std::env::temp_dir().join(format!("hadamard-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.json");
        std::fs::write(&path, r#"{"alpha": 0.3, "n": 64, "op": "integral"}"#).unwrap();
        let flags = FracOpFlags { n: Some(128), ..Default::default() };
        let c: FracOpConfig = resolve(&flags, Some(&path)).unwrap();
        assert_eq!((c.alpha, c.n, c.op), (0.3, 128, OpKind::Integral));
        assert_eq!(c.input, "log_power:2");

        std::fs::write(&path, r#"{"alhpa": 0.3}"#).unwrap();
        let err = resolve::<_, FracOpConfig>(&FracOpFlags::default(), Some(&path)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_file_is_a_read_error() {
        let err = resolve::<_, ExtremumConfig>(&ExtremumFlags::default(), Some(Path::new("/nonexistent/x.json"))).unwrap_err();
        assert!(matches!(err, CliError::Read { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn list_and_enum_flags_deserialize() {
        let flags = DiffusionFlags {
            delta: Some(vec![0.01, 0.1]),
            placement: Some("fractional-of-field".into()),
            sign: Some("nonpositive".into()),
            ..Default::default()
        };
        let c: DiffusionConfig = resolve(&flags, None).unwrap();
        assert_eq!(c.delta, vec![0.01, 0.1]);
        assert_eq!(c.placement, PlacementArg::FractionalOfField);
        assert_eq!(c.sign, Some(SignArg::Nonpositive));
    }
}
