//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "cuspenv", version, about = "Exact jets, determinacy, envelopes and bifurcations of plane map germs")]
pub struct Cli {
    /// Working order of all jets [default: 8; 12 for bifurcation sweeps].
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Write the output to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Sampling resolution, e.g. `160x160`.
    #[arg(long, global = true)]
    pub grid: Option<GridSize>,
    /// Plot window `x0,x1,y0,y1`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<WindowArg>,
    /// Assign a formal parameter before computing, e.g. `--set d=1`.
    #[arg(long = "set", global = true, value_name = "NAME=VALUE")]
    pub set: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSize {
    pub width: usize,
    pub height: usize,
}

impl FromStr for GridSize {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s
            .split_once(['x', 'X', '×'])
            .ok_or_else(|| format!("expected WxH, got `{s}`"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("invalid grid size `{s}`"));
        let (width, height) = (parse(w)?, parse(h)?);
        if width < 2 || height < 2 {
            return Err("grid sizes must be at least 2".into());
        }
        Ok(GridSize { width, height })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowArg(pub [f64; 4]);

impl FromStr for WindowArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid window `{s}`")))
            .collect::<Result<_, _>>()?;
        match v.as_slice() {
            [x0, x1, y0, y1] if x1 > x0 && y1 > y0 => Ok(WindowArg([*x0, *x1, *y0, *y1])),
            [_, _, _, _] => Err("window needs x0 < x1 and y0 < y1".into()),
            _ => Err(format!("expected x0,x1,y0,y1, got `{s}`")),
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Jet arithmetic: canonical form, Jacobian, composition, inversion, sum.
    Jet(JetArgs),
    /// Determinacy certificate for a germ.
    Determinacy(DeterminacyArgs),
    /// Extended codimension.
    Codim(CodimArgs),
    /// Miniversality of a family of deformation directions.
    Miniversal(MiniversalArgs),
    /// Genericity, graph singularity and normal form of CTF data.
    CtfClassify(CtfArgs),
    /// Critical set and envelope branches.
    Envelope(EnvelopeArgs),
    /// Branch series, perestroika sweeps and the double-cusp diagram.
    Bifurcate(BifurcateArgs),
    /// SVG from a report, a point cloud, a germ or CTF data.
    Render(RenderArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum JetOp {
    Canonical,
    Jacobian,
    Compose,
    Invert,
    Sum,
}

#[derive(Args, Debug, Clone)]
pub struct JetArgs {
    #[arg(long)]
    pub germ: String,
    #[arg(long, value_enum, default_value_t = JetOp::Canonical)]
    pub op: JetOp,
    /// Second operand for `compose` (inner map) and `sum`.
    #[arg(long = "with")]
    pub other: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct DeterminacyArgs {
    #[arg(long)]
    pub germ: String,
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, default_value_t = 2)]
    pub l: u32,
    /// Also check that degree-`R` terms can be removed.
    #[arg(long, value_name = "R")]
    pub reduce: Option<u32>,
    /// Lower the certified order by repeated reduction checks.
    #[arg(long)]
    pub sharpen: bool,
}

#[derive(Args, Debug, Clone)]
pub struct CodimArgs {
    #[arg(long)]
    pub germ: String,
    /// Truncation degree of the tangent-space computation.
    #[arg(long, default_value_t = crate::orbitspace::DEFAULT_CAP)]
    pub cap: u32,
}

#[derive(Args, Debug, Clone)]
pub struct MiniversalArgs {
    /// A germ, or a family with `deform` clauses supplying the directions.
    #[arg(long)]
    pub germ: String,
    /// Deformation direction such as `y ; 0` (repeatable).
    #[arg(long = "direction")]
    pub directions: Vec<String>,
    #[arg(long, default_value_t = crate::orbitspace::DEFAULT_CAP)]
    pub cap: u32,
}

#[derive(Args, Debug, Clone)]
pub struct CtfArgs {
    /// `alpha: ...; A: ...; B: ...; C: ...; D: ...[; rem: ..., ...]`
    #[arg(long)]
    pub ctf: String,
    /// Half-range of the family parameter in plots.
    #[arg(long, default_value_t = 0.3)]
    pub xi_range: f64,
    /// Number of family curves in plots.
    #[arg(long, default_value_t = 7)]
    pub curves: usize,
}

#[derive(Args, Debug, Clone)]
pub struct EnvelopeArgs {
    #[arg(long)]
    pub germ: String,
    /// Half-range of the branch parameter when sampling branches.
    #[arg(long, default_value_t = 0.5)]
    pub range: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BifurcateMode {
    Sweep,
    Diagram,
    Series,
    Tangential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Psi,
    H,
    K,
}

#[derive(Args, Debug, Clone)]
pub struct BifurcateArgs {
    #[arg(long, value_enum, default_value_t = BifurcateMode::Sweep)]
    pub mode: BifurcateMode,
    /// Built-in family; ignored when `--germ` is given.
    #[arg(long, value_enum, default_value_t = FamilyName::Psi)]
    pub family: FamilyName,
    /// Family with `deform` clauses, e.g. `param d; deform lambda; x^2 + ...`.
    #[arg(long)]
    pub germ: Option<String>,
    /// Modulus; `d` keeps it symbolic (series mode only).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub delta: String,
    /// One parameter for a line sweep, two (comma separated) for a grid.
    #[arg(long, default_value = "lambda")]
    pub sweep: String,
    /// Parameter range `lo,hi`.
    #[arg(long, default_value = "-1/10,1/10", allow_hyphen_values = true)]
    pub range: String,
    #[arg(long, default_value_t = 21)]
    pub samples: usize,
    /// Parameter value for the tangential check.
    #[arg(long, default_value = "1/10", allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug, Clone)]
pub struct RenderArgs {
    /// JSON report with a plot, or CSV point cloud `label,x,y`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub germ: Option<String>,
    #[arg(long)]
    pub ctf: Option<String>,
    /// Half-range of the branch or family parameter.
    #[arg(long, default_value_t = 0.3)]
    pub range: f64,
}
