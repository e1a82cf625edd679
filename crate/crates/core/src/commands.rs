//! Command implementations behind the `magnitude` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::compact::{self, grid_approximate_with, grid_magnitude, ApproximationReport, GridOptions};
use crate::engine::{magnitude_with, MagnitudeResult, SolverOptions, Status, RCOND_SINGULAR, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::function::{
    find_singularities_with, growth_fit, profile_with_singularities, sample_at, FitOptions, GrowthFit,
    MagnitudeFunctionProfile, ScaleGrid, ScanOptions, Singularity,
};
use crate::io::{read_space, tables_to_csv, Cell, InputFormat, Table};
use crate::metric::{FiniteMetricSpace, Norm};
use crate::region::RegionSpec;
use crate::spaces;
use crate::verify::{run_suite, Suite, VerifyReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_STRICT_SINGULAR: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Compute,
    Function,
    Singularities,
    Dimension,
    Approx,
    Verify,
    Plotdata,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Parse(format!("unknown output format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub format: InputFormat,
    pub scale: Option<f64>,
    pub grid: Option<ScaleGrid>,
    /// Norm for point clouds; overrides a region's own `p` when set.
    pub p: Option<Norm>,
    pub resolutions: Vec<f64>,
    pub tol_rcond: f64,
    pub tol_residual: f64,
    pub strict: bool,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
    /// Not echoed: output must not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Verification suite or plot figure name.
    pub target: Option<String>,
    /// Include wall-clock timing in the envelope.
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            inputs: Vec::new(),
            format: InputFormat::Dist,
            scale: None,
            grid: None,
            p: None,
            resolutions: Vec::new(),
            tol_rcond: RCOND_SINGULAR,
            tol_residual: RESIDUAL_TOL,
            strict: false,
            output: OutputFormat::Json,
            out: None,
            threads: None,
            target: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol_rcond > 0.0) || !(self.tol_residual > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if let Some(t) = self.scale {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::NonpositiveScale(t));
            }
        }
        if !self.resolutions.is_empty() {
            compact::check_resolutions(&self.resolutions)?;
        }
        if self.threads == Some(0) {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        Ok(())
    }

    fn solver(&self) -> SolverOptions {
        SolverOptions { rcond_threshold: self.tol_rcond, residual_tol: self.tol_residual, eigenvalues: true }
    }

    fn input(&self) -> Result<&Path> {
        self.inputs.first().map(PathBuf::as_path).ok_or_else(|| Error::Config("--input is required".into()))
    }
}

/// Parses `0.25,0.125,...`.
pub fn parse_resolutions(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad resolution `{x}`"))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    LowConfidence { t: Option<f64>, rcond: f64 },
    SingularNoWeighting { t: Option<f64> },
    SingularConsistent { t: Option<f64>, residual: Option<f64> },
    NearSingularity { t: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputeOutput {
    pub n: usize,
    pub scale: Option<f64>,
    pub labels: Vec<String>,
    pub result: MagnitudeResult,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthSource {
    Space,
    ClosedForm,
    GridApproximation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionOutput {
    pub source: GrowthSource,
    pub delta: Option<f64>,
    pub samples: Vec<(f64, Option<f64>)>,
    pub fit: GrowthFit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Figure {
    pub name: String,
    pub caption: String,
    pub points: Vec<(f64, Option<f64>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Magnitude(ComputeOutput),
    Profile(MagnitudeFunctionProfile),
    Singularities(Vec<Singularity>),
    Growth(DimensionOutput),
    Approximation(ApproximationReport),
    Verify(VerifyReport),
    Plot(Vec<Figure>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    pub payload: Payload,
    pub warnings: Vec<Warning>,
}

/// Rendered output and the exit code it implies.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub envelope: ResultEnvelope,
    pub rendered: String,
    pub exit_code: i32,
    pub elapsed_ms: f64,
}

/// Exit code for an error raised before any output was produced.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::Config(_)
        | Error::NotSquare { .. }
        | Error::NegativeDistance { .. }
        | Error::NonzeroDiagonal { .. }
        | Error::ZeroOffDiagonal { .. }
        | Error::AsymmetricDistance { .. }
        | Error::TriangleViolation { .. }
        | Error::DimensionMismatch { .. }
        | Error::UnknownLabel(_)
        | Error::NonpositiveLength(_)
        | Error::CycleDetected(_)
        | Error::NonpositiveScale(_)
        | Error::MalformedRegion(_)
        | Error::NonNestedResolutions
        | Error::EmptyGrid => EXIT_PARSE,
        _ => EXIT_FAILURE,
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_space(cfg: &RunConfig) -> Result<FiniteMetricSpace> {
    read_space(&read_text(cfg.input()?)?, cfg.format, cfg.p.unwrap_or(Norm::L2))
}

fn load_region(cfg: &RunConfig) -> Result<RegionSpec> {
    let mut r = RegionSpec::from_json(&read_text(cfg.input()?)?)?;
    match cfg.p {
        Some(Norm::L1) => r.p = 1,
        Some(Norm::L2) => r.p = 2,
        Some(Norm::LInf) => return Err(Error::UnsupportedRegion("regions support p = 1 or 2".into())),
        None => {}
    }
    r.validate()?;
    Ok(r)
}

fn result_warnings(r: &MagnitudeResult, t: Option<f64>) -> Vec<Warning> {
    let mut w = Vec::new();
    match r.status {
        Status::SingularNoWeighting => w.push(Warning::SingularNoWeighting { t }),
        Status::SingularConsistent => w.push(Warning::SingularConsistent { t, residual: r.diagnostics.residual }),
        Status::Solved | Status::ClosedForm => {}
    }
    if r.diagnostics.low_confidence {
        w.push(Warning::LowConfidence { t, rcond: r.diagnostics.rcond.unwrap_or(0.0) });
    }
    w
}

struct Produced {
    payload: Payload,
    warnings: Vec<Warning>,
    exit_code: i32,
}

fn produced(payload: Payload, warnings: Vec<Warning>) -> Produced {
    Produced { payload, warnings, exit_code: EXIT_OK }
}

pub fn cmd_compute(cfg: &RunConfig) -> Result<(ComputeOutput, Vec<Warning>)> {
    let mut space = load_space(cfg)?;
    if let Some(t) = cfg.scale {
        space = space.scale(t)?;
    }
    let result = magnitude_with(&space, &cfg.solver());
    let warnings = result_warnings(&result, cfg.scale);
    Ok((ComputeOutput { n: space.len(), scale: cfg.scale, labels: space.labels().to_vec(), result }, warnings))
}

pub fn cmd_function(cfg: &RunConfig) -> Result<(MagnitudeFunctionProfile, Vec<Warning>)> {
    let space = load_space(cfg)?;
    let grid = cfg.grid.ok_or_else(|| Error::Config("--grid is required".into()))?;
    let p = profile_with_singularities(&space, &grid, &cfg.solver(), &ScanOptions::default())?;
    let mut warnings = Vec::new();
    for s in &p.samples {
        match s.status {
            Status::SingularNoWeighting => warnings.push(Warning::SingularNoWeighting { t: Some(s.t) }),
            Status::SingularConsistent => warnings.push(Warning::SingularConsistent { t: Some(s.t), residual: None }),
            _ => {}
        }
    }
    warnings.extend(p.singularities.iter().map(|s| Warning::NearSingularity { t: s.t }));
    Ok((p, warnings))
}

pub fn cmd_singularities(cfg: &RunConfig) -> Result<Vec<Singularity>> {
    let space = load_space(cfg)?;
    let grid = cfg.grid.ok_or_else(|| Error::Config("--grid is required".into()))?;
    Ok(find_singularities_with(&space, grid.t0, grid.t1, &ScanOptions::default()))
}

const DEFAULT_SPACE_GRID: &str = "0.1:100:61:log";
const DEFAULT_REGION_GRID: &str = "1:20:12:log";

pub fn cmd_dimension(cfg: &RunConfig) -> Result<DimensionOutput> {
    let opts = FitOptions::default();
    if cfg.format == InputFormat::Region {
        let region = load_region(cfg)?;
        if compact::closed_form(&region, 1.0).is_some() {
            let grid = cfg.grid.unwrap_or(DEFAULT_SPACE_GRID.parse()?);
            let samples: Vec<(f64, Option<f64>)> = grid.points().iter().map(|t| (*t, compact::closed_form(&region, *t))).collect();
            let fit = growth_fit(&defined(&samples), &opts)?;
            return Ok(DimensionOutput { source: GrowthSource::ClosedForm, delta: None, samples, fit });
        }
        let delta = *cfg.resolutions.last().ok_or_else(|| Error::Config("--resolutions is required for grid growth".into()))?;
        let grid = cfg.grid.unwrap_or(DEFAULT_REGION_GRID.parse()?);
        let gopts = GridOptions { solver: SolverOptions { eigenvalues: false, ..cfg.solver() }, ..GridOptions::default() };
        let samples = grid
            .points()
            .iter()
            .map(|t| grid_magnitude(&region, *t, delta, &gopts).map(|r| (*t, r.magnitude)))
            .collect::<Result<Vec<_>>>()?;
        let fit = growth_fit(&defined(&samples), &opts)?;
        return Ok(DimensionOutput { source: GrowthSource::GridApproximation, delta: Some(delta), samples, fit });
    }
    let space = load_space(cfg)?;
    let grid = cfg.grid.unwrap_or(DEFAULT_SPACE_GRID.parse()?);
    let solver = SolverOptions { eigenvalues: false, ..cfg.solver() };
    let samples: Vec<(f64, Option<f64>)> =
        sample_at(&space, &grid.points(), &solver)?.into_iter().map(|s| (s.t, s.magnitude)).collect();
    let fit = growth_fit(&defined(&samples), &opts)?;
    Ok(DimensionOutput { source: GrowthSource::Space, delta: None, samples, fit })
}

fn defined(samples: &[(f64, Option<f64>)]) -> Vec<(f64, f64)> {
    samples.iter().filter_map(|(t, m)| m.map(|m| (*t, m))).collect()
}

const DEFAULT_RESOLUTIONS: [f64; 4] = [0.25, 0.125, 0.0625, 0.03125];

pub fn cmd_approx(cfg: &RunConfig) -> Result<(ApproximationReport, Vec<Warning>)> {
    let region = load_region(cfg)?;
    let t = cfg.scale.unwrap_or(1.0);
    let res = if cfg.resolutions.is_empty() { DEFAULT_RESOLUTIONS.to_vec() } else { cfg.resolutions.clone() };
    let opts = GridOptions { solver: SolverOptions { eigenvalues: false, ..cfg.solver() }, ..GridOptions::default() };
    let report = grid_approximate_with(&region, t, &res, &opts)?;
    let warnings = report
        .rows
        .iter()
        .filter_map(|r| match r.status {
            Status::SingularNoWeighting => Some(Warning::SingularNoWeighting { t: Some(t) }),
            Status::SingularConsistent => Some(Warning::SingularConsistent { t: Some(t), residual: None }),
            _ => None,
        })
        .collect();
    Ok((report, warnings))
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let suite: Suite = cfg.target.as_deref().unwrap_or("all").parse()?;
    Ok(run_suite(suite))
}

/// Two-column data reproducing the two-point curve (`fig1`) and the
/// magnitude function of `K_{3,2}` (`fig4`).
pub fn cmd_plotdata(cfg: &RunConfig) -> Result<Vec<Figure>> {
    let which = cfg.target.as_deref().unwrap_or("all");
    let opts = SolverOptions { eigenvalues: false, ..cfg.solver() };
    let mut figs = Vec::new();
    if which == "all" || which == "fig1" {
        let grid = cfg.grid.unwrap_or(ScaleGrid::linear(0.01, 5.0, 500)?);
        let two = spaces::uniform(2, 1.0);
        let points = sample_at(&two, &grid.points(), &opts)?.into_iter().map(|s| (s.t, s.magnitude)).collect();
        figs.push(Figure { name: "fig1".into(), caption: "magnitude of a two-point space against d".into(), points });
    }
    if which == "all" || which == "fig4" {
        let grid = cfg.grid.unwrap_or(ScaleGrid::linear(0.01, 4.0, 800)?);
        let k = spaces::complete_bipartite(3, 2, 1.0);
        let points = sample_at(&k, &grid.points(), &opts)?.into_iter().map(|s| (s.t, s.magnitude)).collect();
        figs.push(Figure { name: "fig4".into(), caption: "magnitude function of K_{3,2}".into(), points });
    }
    if figs.is_empty() {
        return Err(Error::Parse(format!("unknown figure `{which}` (fig1, fig4, all)")));
    }
    Ok(figs)
}

/// Formats floats with 17 significant digits.
struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser).expect("serializable");
    let mut s = String::from_utf8(buf).expect("utf-8 json");
    s.push('\n');
    s
}

fn num(x: f64) -> Cell {
    Cell::Num(Some(x))
}

fn text(s: &str) -> Cell {
    Cell::Text(s.to_string())
}

fn payload_tables(p: &Payload) -> Vec<Table> {
    match p {
        Payload::Magnitude(c) => {
            let r = &c.result;
            let mut head = Table::new(&["magnitude", "status", "method", "rcond", "residual", "low_confidence"]);
            head.push(vec![
                Cell::Num(r.magnitude),
                text(r.status.as_str()),
                text(&serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()),
                Cell::Num(r.diagnostics.rcond),
                Cell::Num(r.diagnostics.residual),
                text(if r.diagnostics.low_confidence { "true" } else { "false" }),
            ]);
            let mut w = Table::new(&["label", "weight", "coweight"]);
            for (i, l) in c.labels.iter().enumerate() {
                w.push(vec![
                    text(l),
                    Cell::Num(r.weighting.as_ref().map(|v| v[i])),
                    Cell::Num(r.coweighting.as_ref().map(|v| v[i])),
                ]);
            }
            vec![head, w]
        }
        Payload::Profile(p) => {
            let mut rows = Table::new(&["t", "magnitude", "status", "min_eig"]);
            for s in &p.samples {
                rows.push(vec![num(s.t), Cell::Num(s.magnitude), text(s.status.as_str()), Cell::Num(s.min_eigenvalue)]);
            }
            vec![rows, singularity_table(&p.singularities)]
        }
        Payload::Singularities(s) => vec![singularity_table(s)],
        Payload::Growth(d) => {
            let mut fit = Table::new(&["exponent", "window_lo", "window_hi", "residual", "raw_slope", "samples"]);
            fit.push(vec![
                num(d.fit.exponent),
                num(d.fit.window[0]),
                num(d.fit.window[1]),
                num(d.fit.residual),
                num(d.fit.raw_slope),
                Cell::Int(d.fit.samples as i64),
            ]);
            let mut rows = Table::new(&["t", "magnitude"]);
            for (t, m) in &d.samples {
                rows.push(vec![num(*t), Cell::Num(*m)]);
            }
            vec![fit, rows]
        }
        Payload::Approximation(r) => {
            let mut rows =
                Table::new(&["delta", "n_points", "lower_estimate", "lower_bound", "closed_form", "conjecture_rhs"]);
            for row in &r.rows {
                rows.push(vec![
                    num(row.delta),
                    Cell::Int(row.n_points as i64),
                    Cell::Num(row.magnitude),
                    num(r.lower_bound_vol),
                    Cell::Num(r.closed_form),
                    Cell::Num(r.conjecture_rhs),
                ]);
            }
            let mut ex = Table::new(&["t", "extrapolated_estimate"]);
            ex.push(vec![num(r.t), Cell::Num(r.extrapolated)]);
            vec![rows, ex]
        }
        Payload::Verify(v) => {
            let mut rows = Table::new(&["check", "passed", "detail"]);
            for c in &v.checks {
                rows.push(vec![text(&c.name), text(if c.passed { "pass" } else { "fail" }), text(&c.detail)]);
            }
            vec![rows]
        }
        Payload::Plot(figs) => figs
            .iter()
            .map(|f| {
                let mut t = Table::new(&["t", &f.name]);
                for (x, y) in &f.points {
                    t.push(vec![num(*x), Cell::Num(*y)]);
                }
                t
            })
            .collect(),
    }
}

fn singularity_table(s: &[Singularity]) -> Table {
    let mut t = Table::new(&["singularity", "width", "kind"]);
    for x in s {
        let kind = match x.kind {
            crate::function::SingularityKind::Root => "root",
            crate::function::SingularityKind::Suspect => "suspect",
        };
        t.push(vec![num(x.t), num(x.width), text(kind)]);
    }
    t
}

pub fn render(env: &ResultEnvelope, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(env),
        OutputFormat::Csv => tables_to_csv(&payload_tables(&env.payload)),
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Produced> {
    Ok(match cfg.command {
        Command::Compute => {
            let (out, warnings) = cmd_compute(cfg)?;
            let strict_fail = cfg.strict && out.result.status == Status::SingularNoWeighting;
            let mut p = produced(Payload::Magnitude(out), warnings);
            if strict_fail {
                p.exit_code = EXIT_STRICT_SINGULAR;
            }
            p
        }
        Command::Function => {
            let (profile, warnings) = cmd_function(cfg)?;
            produced(Payload::Profile(profile), warnings)
        }
        Command::Singularities => {
            let s = cmd_singularities(cfg)?;
            let warnings = s.iter().map(|x| Warning::NearSingularity { t: x.t }).collect();
            produced(Payload::Singularities(s), warnings)
        }
        Command::Dimension => produced(Payload::Growth(cmd_dimension(cfg)?), Vec::new()),
        Command::Approx => {
            let (report, warnings) = cmd_approx(cfg)?;
            produced(Payload::Approximation(report), warnings)
        }
        Command::Verify => {
            let report = cmd_verify(cfg)?;
            let ok = report.passed();
            let mut p = produced(Payload::Verify(report), Vec::new());
            if !ok {
                p.exit_code = EXIT_VERIFY;
            }
            p
        }
        Command::Plotdata => produced(Payload::Plot(cmd_plotdata(cfg)?), Vec::new()),
    })
}

/// Runs a command on a pool of `cfg.threads` workers.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let start = Instant::now();
    let p = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| dispatch(cfg))?,
        None => dispatch(cfg)?,
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let envelope = ResultEnvelope {
        tool: "magnitude".into(),
        version: VERSION.into(),
        config: cfg.clone(),
        timing_ms: cfg.timing.then_some(elapsed_ms),
        payload: p.payload,
        warnings: p.warnings,
    };
    let rendered = render(&envelope, cfg.output);
    Ok(Outcome { envelope, rendered, exit_code: p.exit_code, elapsed_ms })
}

/// Writes rendered output to `--out`, or returns it for stdout. A plot run
/// whose `--out` is a directory gets one CSV file per figure.
pub fn write_outcome(cfg: &RunConfig, outcome: &Outcome) -> Result<Option<String>> {
    let Some(path) = &cfg.out else {
        return Ok(Some(outcome.rendered.clone()));
    };
    if let (Payload::Plot(figs), true) = (&outcome.envelope.payload, path.is_dir()) {
        for (fig, table) in figs.iter().zip(payload_tables(&outcome.envelope.payload)) {
            fs::write(path.join(format!("{}.csv", fig.name)), table.to_csv())?;
        }
        return Ok(None);
    }
    fs::write(path, &outcome.rendered)?;
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_file(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("magnitude-cmd-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn json_uses_seventeen_digits() {
        let s = to_json(&vec![1.0 / 3.0, 2.0]);
        assert_eq!(s.trim(), "[3.3333333333333331e-1,2.0000000000000000e0]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![1.0 / 3.0, 2.0]);
    }

    #[test]
    fn compute_two_point() {
        let mut cfg = RunConfig::new(Command::Compute);
        cfg.inputs = vec![temp_file("two.csv", "0,1\n1,0\n")];
        let out = run(&cfg).unwrap();
        let Payload::Magnitude(c) = &out.envelope.payload else { panic!() };
        assert!((c.result.magnitude.unwrap() - (1.0 + 0.5f64.tanh())).abs() < 1e-12);
        assert_eq!(out.exit_code, EXIT_OK);
        assert!(out.rendered.contains("\"version\""));
    }

    #[test]
    fn strict_singular_exit() {
        let mut cfg = RunConfig::new(Command::Compute);
        let edges = "a0 b0\na0 b1\na1 b0\na1 b1\na2 b0\na2 b1\n";
        cfg.inputs = vec![temp_file("k32.txt", edges)];
        cfg.format = InputFormat::Graph;
        cfg.scale = Some(0.346_573_59);
        cfg.strict = true;
        let default = run(&cfg).unwrap();
        let Payload::Magnitude(c) = &default.envelope.payload else { panic!() };
        assert!(c.result.diagnostics.low_confidence);
        assert!(default.envelope.warnings.iter().any(|w| matches!(w, Warning::LowConfidence { .. })));
        cfg.tol_rcond = 1e-10;
        let tight = run(&cfg).unwrap();
        let Payload::Magnitude(c) = &tight.envelope.payload else { panic!() };
        assert_eq!(c.result.status, Status::SingularNoWeighting);
        assert_eq!(tight.exit_code, EXIT_STRICT_SINGULAR);
    }

    #[test]
    fn errors_map_to_exit_codes() {
        let mut cfg = RunConfig::new(Command::Compute);
        cfg.inputs = vec![temp_file("bad.csv", "0,x\n1,0\n")];
        assert_eq!(exit_code(&run(&cfg).unwrap_err()), EXIT_PARSE);
        assert_eq!(exit_code(&Error::InsufficientSamples { needed: 8, found: 1 }), EXIT_FAILURE);
    }
}
