//! End-to-end runs: instance and complex loading, model construction,
//! solving, decoding, verification and reporting. The CLI is a thin layer
//! over this module.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baseline::{build_lifted_mtz, decode_tour, EdgeSet, EdgeSetSource};
use crate::boundary::{
    assemble_tour, boundary_edges, extract_surface, gap_percent, objective_identity_check,
    verify_surface, Surface, Tour, VerificationReport,
};
use crate::complex::{
    complete_complex_with_cap, delaunay_complex, greedy_complex, ComplexError, ComplexSource,
    DualGraph, IncidenceGraph, Triangle, TriangleSet, DEFAULT_COMPLETE_CAP,
};
use crate::instance::{parse_tsplib, InstanceError, RandomMode, TspInstance};
use crate::model::{MilpModel, ModelKind, TreeVariant};
use crate::solve::{self, Backend, MilpSolution, SolveError, SolveLimits, SolveStats, SolveStatus};
use crate::surface_model::{build_general_unchecked, build_planar_unchecked, ModelError};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("bad specification {0}")]
    BadSpec(String),
    #[error("invalid report: {0}")]
    BadReport(String),
}

fn read_file(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Instance source: a TSPLIB file or a generator.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSpec {
    File(PathBuf),
    Random { mode: RandomMode, n: usize, seed: u64 },
    Hexagons,
}

impl FromStr for InstanceSpec {
    type Err = PipelineError;

    /// `gen:euclidean:n=20:seed=3`, `gen:nonmetric:n=10:seed=7`,
    /// `gen:hexagons`, or a file path.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let Some(rest) = s.strip_prefix("gen:") else {
            return Ok(InstanceSpec::File(PathBuf::from(s)));
        };
        let bad = || PipelineError::BadSpec(format!("{s:?}"));
        let mut parts = rest.split(':');
        let mode = match parts.next() {
            Some("hexagons") => {
                return match parts.next() {
                    None => Ok(InstanceSpec::Hexagons),
                    Some(_) => Err(bad()),
                }
            }
            Some("euclidean") => RandomMode::Euclidean,
            Some("nonmetric") => RandomMode::NonMetric,
            _ => return Err(bad()),
        };
        let (mut n, mut seed) = (None, 0);
        for p in parts {
            match p.split_once('=') {
                Some(("n", v)) => n = Some(v.parse().map_err(|_| bad())?),
                Some(("seed", v)) => seed = v.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Ok(InstanceSpec::Random {
            mode,
            n: n.ok_or_else(bad)?,
            seed,
        })
    }
}

impl InstanceSpec {
    pub fn load(&self) -> Result<TspInstance, PipelineError> {
        Ok(match self {
            InstanceSpec::File(p) => parse_tsplib(&read_file(p)?)?,
            InstanceSpec::Random { mode, n, seed } => TspInstance::random(*n, *seed, *mode)?,
            InstanceSpec::Hexagons => TspInstance::nested_hexagons(),
        })
    }
}

pub fn load_instance(spec: &str) -> Result<TspInstance, PipelineError> {
    spec.parse::<InstanceSpec>()?.load()
}

/// Which candidate complex to use.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexSpec {
    Complete,
    Delaunay,
    Greedy,
    Custom(PathBuf),
}

impl FromStr for ComplexSpec {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "complete" => Ok(ComplexSpec::Complete),
            "delaunay" => Ok(ComplexSpec::Delaunay),
            "greedy" => Ok(ComplexSpec::Greedy),
            _ => match s.strip_prefix("custom:") {
                Some(p) if !p.is_empty() => Ok(ComplexSpec::Custom(PathBuf::from(p))),
                _ => Err(PipelineError::BadSpec(format!("complex {s:?}"))),
            },
        }
    }
}

impl fmt::Display for ComplexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexSpec::Complete => f.write_str("complete"),
            ComplexSpec::Delaunay => f.write_str("delaunay"),
            ComplexSpec::Greedy => f.write_str("greedy"),
            ComplexSpec::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

impl ComplexSpec {
    pub fn source(&self) -> ComplexSource {
        match self {
            ComplexSpec::Complete => ComplexSource::Complete,
            ComplexSpec::Delaunay => ComplexSource::Delaunay,
            ComplexSpec::Greedy => ComplexSource::Greedy,
            ComplexSpec::Custom(_) => ComplexSource::Custom,
        }
    }

    pub fn build(&self, inst: &TspInstance, complete_cap: usize) -> Result<TriangleSet, PipelineError> {
        let ts = match self {
            ComplexSpec::Complete => complete_complex_with_cap(inst, complete_cap)?,
            ComplexSpec::Delaunay => delaunay_complex(inst)?,
            ComplexSpec::Greedy => greedy_complex(inst)?,
            ComplexSpec::Custom(p) => TriangleSet::from_json(&read_file(p)?)?,
        };
        if ts.n_cities() != inst.n() {
            return Err(PipelineError::BadSpec(format!(
                "complex is over {} cities, instance has {}",
                ts.n_cities(),
                inst.n()
            )));
        }
        Ok(ts)
    }
}

/// Model family selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelChoice {
    Surface,
    SurfacePlanar,
    MtzBaseline,
}

impl FromStr for ModelChoice {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "surface" => Ok(ModelChoice::Surface),
            "surface-planar" => Ok(ModelChoice::SurfacePlanar),
            "mtz-baseline" => Ok(ModelChoice::MtzBaseline),
            _ => Err(PipelineError::BadSpec(format!("model {s:?}"))),
        }
    }
}

impl fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelChoice::Surface => "surface",
            ModelChoice::SurfacePlanar => "surface-planar",
            ModelChoice::MtzBaseline => "mtz-baseline",
        })
    }
}

pub fn parse_tree(s: &str) -> Result<TreeVariant, PipelineError> {
    match s {
        "flow" => Ok(TreeVariant::Flow),
        "mtz" => Ok(TreeVariant::Mtz),
        _ => Err(PipelineError::BadSpec(format!("tree {s:?}"))),
    }
}

/// Everything needed to build one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub complex: ComplexSpec,
    pub model: ModelChoice,
    pub tree: TreeVariant,
    pub complete_cap: usize,
}

impl ModelSpec {
    pub fn new(complex: ComplexSpec, model: ModelChoice, tree: TreeVariant) -> Self {
        ModelSpec {
            complex,
            model,
            tree,
            complete_cap: DEFAULT_COMPLETE_CAP,
        }
    }

    /// Table-style label such as `Surface-Based-Flow (Del)`.
    pub fn label(&self) -> String {
        let base = match (self.model, self.tree) {
            (ModelChoice::MtzBaseline, _) => "Lifted-MTZ".to_string(),
            (ModelChoice::Surface, TreeVariant::Flow) => "Surface-Based-Flow".into(),
            (ModelChoice::Surface, TreeVariant::Mtz) => "Surface-Based-MTZ".into(),
            (ModelChoice::SurfacePlanar, TreeVariant::Flow) => "Surface-Based-Flow [planar]".into(),
            (ModelChoice::SurfacePlanar, TreeVariant::Mtz) => "Surface-Based-MTZ [planar]".into(),
        };
        let suffix = match &self.complex {
            ComplexSpec::Complete => "K_N",
            ComplexSpec::Delaunay => "Del",
            ComplexSpec::Greedy => "Grd",
            ComplexSpec::Custom(_) => "Custom",
        };
        format!("{base} ({suffix})")
    }
}

impl FromStr for ModelSpec {
    type Err = PipelineError;

    /// `model:tree:complex`, e.g. `surface:flow:delaunay`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.splitn(3, ':');
        let (Some(m), Some(t), Some(c)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(PipelineError::BadSpec(format!("combo {s:?} (want model:tree:complex)")));
        };
        Ok(ModelSpec::new(c.parse()?, m.parse()?, parse_tree(t)?))
    }
}

/// An instance with its complex and model, ready to solve.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub instance: TspInstance,
    pub spec: ModelSpec,
    /// Candidate complex; for the baseline, the complex its edges came from.
    pub complex: Option<TriangleSet>,
    pub model: MilpModel,
}

/// Builds the complex and model. Surface models skip the triangle-count
/// precheck so an undersized complex is reported infeasible by the solver.
pub fn prepare(instance: TspInstance, spec: &ModelSpec) -> Result<Prepared, PipelineError> {
    instance.ensure_buildable()?;
    let (complex, model) = match spec.model {
        ModelChoice::MtzBaseline => match spec.complex {
            ComplexSpec::Complete => (None, build_lifted_mtz(&instance, &EdgeSet::complete(instance.n()))?),
            _ => {
                let ts = spec.complex.build(&instance, spec.complete_cap)?;
                let source = match ts.source() {
                    ComplexSource::Delaunay => EdgeSetSource::DelaunayEdges,
                    _ => EdgeSetSource::Custom,
                };
                let es = EdgeSet::new(ts.edge_universe().iter().copied(), source);
                let m = build_lifted_mtz(&instance, &es)?;
                (Some(ts), m)
            }
        },
        ModelChoice::Surface => {
            let ts = spec.complex.build(&instance, spec.complete_cap)?;
            let m = build_general_unchecked(&IncidenceGraph::build(&instance, &ts), spec.tree)?;
            (Some(ts), m)
        }
        ModelChoice::SurfacePlanar => {
            let ts = spec.complex.build(&instance, spec.complete_cap)?;
            let m = build_planar_unchecked(&DualGraph::build(&instance, &ts)?, spec.tree)?;
            (Some(ts), m)
        }
    };
    Ok(Prepared {
        instance,
        spec: spec.clone(),
        complex,
        model,
    })
}

/// Process exit code of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunExit {
    /// OPTIMAL or FEASIBLE with a verified tour.
    Success,
    /// Time limit without incumbent, solver error, or bad input.
    Failure,
    Infeasible,
    /// A solution was returned but does not decode to a valid tour.
    InvalidDecode,
}

impl RunExit {
    pub fn code(self) -> i32 {
        match self {
            RunExit::Success => 0,
            RunExit::Failure => 1,
            RunExit::Infeasible => 2,
            RunExit::InvalidDecode => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSize {
    pub vars: usize,
    pub cons: usize,
    pub nonzeros: usize,
}

/// Self-contained record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub instance: String,
    pub n: usize,
    pub complex_source: ComplexSource,
    pub candidate_triangles: Option<usize>,
    pub model: ModelKind,
    pub tree: Option<TreeVariant>,
    pub label: String,
    pub model_size: ModelSize,
    pub seed: u64,
    pub time_limit_s: f64,
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub best_bound: Option<f64>,
    pub selected_triangles: Option<Vec<Triangle>>,
    pub tour: Option<Vec<usize>>,
    pub tour_length: Option<f64>,
    pub reference: Option<f64>,
    pub gap_percent: Option<f64>,
    pub verification: Option<VerificationReport>,
    pub objective_identity: Option<bool>,
    pub decode_error: Option<String>,
    pub exit: RunExit,
    pub stats: SolveStats,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let r: RunReport =
            serde_json::from_str(text).map_err(|e| PipelineError::BadReport(e.to_string()))?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(PipelineError::BadReport(format!(
                "schema version {} (expected {REPORT_SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    /// Copy with the timing fields zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.stats.runtime_s = 0.0;
        r.wall_time_s = 0.0;
        r
    }

    /// `NAME length N : c0 c1 ...` when a tour was found.
    pub fn tour_line(&self) -> Option<String> {
        Some(
            Tour {
                order: self.tour.clone()?,
                length: self.tour_length?,
            }
            .to_line(&self.instance),
        )
    }
}

/// Result of one run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub solution: MilpSolution,
    pub surface: Option<Surface>,
}

/// Solves a prepared model and decodes, verifies and reports the result.
pub fn execute(
    p: &Prepared,
    backend: &dyn Backend,
    limits: &SolveLimits,
    reference: Option<f64>,
) -> Result<RunOutcome, PipelineError> {
    let start = Instant::now();
    let solution = solve::solve(&p.model, backend, limits)?;
    let wall_time_s = start.elapsed().as_secs_f64();

    let mut surface = None;
    let mut tour = None;
    let mut verification = None;
    let mut identity = None;
    let mut decode_error = None;
    let exit = match solution.status {
        SolveStatus::Infeasible => RunExit::Infeasible,
        SolveStatus::TimeLimit | SolveStatus::Error => RunExit::Failure,
        SolveStatus::Optimal | SolveStatus::Feasible => {
            let z = solution.objective.unwrap_or(f64::NAN);
            let ok = if p.spec.model == ModelChoice::MtzBaseline {
                match decode_tour(&p.model, &p.instance, &solution) {
                    Ok(t) => {
                        let same = (t.length - z).abs() <= 1e-6 * (1.0 + z.abs());
                        identity = Some(same);
                        tour = Some(t);
                        same
                    }
                    Err(e) => {
                        decode_error = Some(e.to_string());
                        false
                    }
                }
            } else {
                let ts = p.complex.as_ref().expect("surface runs carry a complex");
                match extract_surface(&p.model, ts, &solution) {
                    Ok(s) => {
                        let v = verify_surface(&s);
                        let same = objective_identity_check(&s, &p.instance, z);
                        match assemble_tour(&boundary_edges(&s), &p.instance) {
                            Ok(t) => tour = Some(t),
                            Err(e) => decode_error = Some(e.to_string()),
                        }
                        let ok = v.valid && same && tour.is_some();
                        verification = Some(v);
                        identity = Some(same);
                        surface = Some(s);
                        ok
                    }
                    Err(e) => {
                        decode_error = Some(e.to_string());
                        false
                    }
                }
            };
            if ok {
                RunExit::Success
            } else {
                RunExit::InvalidDecode
            }
        }
    };

    let report = RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        instance: p.instance.name().to_string(),
        n: p.instance.n(),
        complex_source: p.spec.complex.source(),
        candidate_triangles: p.complex.as_ref().map(TriangleSet::len),
        model: p.model.meta.kind,
        tree: p.model.meta.tree,
        label: p.spec.label(),
        model_size: ModelSize {
            vars: p.model.num_vars(),
            cons: p.model.num_cons(),
            nonzeros: p.model.num_nonzeros(),
        },
        seed: limits.random_seed,
        time_limit_s: limits.time_limit_s,
        status: solution.status,
        objective: solution.objective,
        best_bound: solution.best_bound,
        selected_triangles: surface.as_ref().map(|s| s.triangles().to_vec()),
        tour: tour.as_ref().map(|t| t.order.clone()),
        tour_length: tour.as_ref().map(|t| t.length),
        reference,
        gap_percent: match (&tour, reference) {
            (Some(t), Some(r)) if r > 0.0 => Some(gap_percent(t.length, r)),
            _ => None,
        },
        verification,
        objective_identity: identity,
        decode_error,
        exit,
        stats: solution.stats.clone(),
        wall_time_s,
    };
    Ok(RunOutcome {
        report,
        solution,
        surface,
    })
}

/// Re-verifies a saved report against its complex without re-solving.
pub fn validate_report(
    report: &RunReport,
    complex: &TriangleSet,
) -> Result<VerificationReport, PipelineError> {
    if complex.n_cities() != report.n {
        return Err(PipelineError::BadReport(format!(
            "report has {} cities, complex {}",
            report.n,
            complex.n_cities()
        )));
    }
    let tris = report
        .selected_triangles
        .clone()
        .ok_or_else(|| PipelineError::BadReport("report has no selected triangles".into()))?;
    Ok(verify_surface(&Surface::new(report.n, tris, Some(complex))))
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub instance: String,
    pub n: usize,
    pub label: String,
    pub vars: usize,
    pub cons: usize,
    pub runs: usize,
    pub solved: usize,
    pub mean_time_s: f64,
    pub mean_nodes: Option<f64>,
    pub objective: Option<f64>,
    pub statuses: Vec<SolveStatus>,
    /// Set when the model could not be built or a run failed outright.
    pub error: Option<String>,
}

impl CompareRow {
    /// `0.20s [10/10]` or `DNF [0/5]`.
    pub fn time_cell(&self) -> String {
        if self.solved == 0 {
            format!("DNF [0/{}]", self.runs)
        } else if self.mean_time_s < 100.0 {
            format!("{:.2}s [{}/{}]", self.mean_time_s, self.solved, self.runs)
        } else {
            format!("{:.1}s [{}/{}]", self.mean_time_s, self.solved, self.runs)
        }
    }
}

/// Runs every combination `runs` times with backend seeds
/// `base_seed..base_seed + runs`, at most `jobs` solves at a time.
pub fn compare(
    instance: &TspInstance,
    specs: &[ModelSpec],
    runs: usize,
    limits: &SolveLimits,
    jobs: usize,
    backend: &dyn Backend,
) -> Vec<CompareRow> {
    specs
        .iter()
        .map(|spec| {
            let mut row = CompareRow {
                instance: instance.name().to_string(),
                n: instance.n(),
                label: spec.label(),
                vars: 0,
                cons: 0,
                runs,
                solved: 0,
                mean_time_s: 0.0,
                mean_nodes: None,
                objective: None,
                statuses: Vec::new(),
                error: None,
            };
            let p = match prepare(instance.clone(), spec) {
                Ok(p) => p,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return row;
                }
            };
            row.vars = p.model.num_vars();
            row.cons = p.model.num_cons();
            let results: Mutex<Vec<Option<Result<RunReport, String>>>> =
                Mutex::new(vec![None; runs]);
            let next = AtomicUsize::new(0);
            std::thread::scope(|scope| {
                for _ in 0..jobs.clamp(1, runs.max(1)) {
                    scope.spawn(|| loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        if i >= runs {
                            break;
                        }
                        let lim = SolveLimits {
                            random_seed: limits.random_seed + i as u64,
                            ..limits.clone()
                        };
                        let r = execute(&p, backend, &lim, None)
                            .map(|o| o.report)
                            .map_err(|e| e.to_string());
                        results.lock().expect("results lock")[i] = Some(r);
                    });
                }
            });
            let reports: Vec<RunReport> = results
                .into_inner()
                .expect("results lock")
                .into_iter()
                .flatten()
                .filter_map(|r| r.map_err(|e| row.error = Some(e)).ok())
                .collect();
            row.statuses = reports.iter().map(|r| r.status).collect();
            let solved: Vec<&RunReport> = reports
                .iter()
                .filter(|r| r.status == SolveStatus::Optimal && r.exit == RunExit::Success)
                .collect();
            row.solved = solved.len();
            if !reports.is_empty() {
                row.mean_time_s =
                    reports.iter().map(|r| r.stats.runtime_s).sum::<f64>() / reports.len() as f64;
                let nodes: Vec<u64> = reports.iter().filter_map(|r| r.stats.nodes).collect();
                if nodes.len() == reports.len() {
                    row.mean_nodes = Some(nodes.iter().sum::<u64>() as f64 / nodes.len() as f64);
                }
            }
            row.objective = solved
                .iter()
                .filter_map(|r| r.objective)
                .min_by(f64::total_cmp);
            row
        })
        .collect()
}

/// Plain-text table: one row per model, with size, solve rate, time and nodes.
pub fn format_compare_table(rows: &[CompareRow]) -> String {
    let header = [
        "Instance",
        "Model",
        "Vars",
        "Cons",
        "Time (s) [Solved]",
        "Nodes",
        "Objective",
    ];
    let body: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                format!("{} (N={})", r.instance, r.n),
                r.label.clone(),
                r.vars.to_string(),
                r.cons.to_string(),
                match &r.error {
                    Some(_) if r.statuses.is_empty() => "ERROR".to_string(),
                    _ => r.time_cell(),
                },
                match r.mean_nodes {
                    Some(n) if n.fract() == 0.0 => format!("{n}"),
                    Some(n) => format!("{n:.1}"),
                    None => "-".into(),
                },
                r.objective.map_or("-".into(), |z| format!("{z}")),
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join(" | ")
            .trim_end()
            .to_string()
    };
    let mut out = line(&header.map(String::from));
    out.push('\n');
    out.push_str(&width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
    out.push('\n');
    for row in &body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_specs() {
        assert_eq!(
            "gen:nonmetric:n=10:seed=7".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::Random {
                mode: RandomMode::NonMetric,
                n: 10,
                seed: 7
            }
        );
        assert_eq!(
            "gen:euclidean:seed=2:n=30".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::Random {
                mode: RandomMode::Euclidean,
                n: 30,
                seed: 2
            }
        );
        assert_eq!("gen:hexagons".parse::<InstanceSpec>().unwrap(), InstanceSpec::Hexagons);
        assert!("gen:euclidean:seed=2".parse::<InstanceSpec>().is_err());
        assert!("gen:sphere:n=4".parse::<InstanceSpec>().is_err());
        assert_eq!(
            "data/x.tsp".parse::<InstanceSpec>().unwrap(),
            InstanceSpec::File("data/x.tsp".into())
        );
        assert_eq!(load_instance("gen:hexagons").unwrap().n(), 13);
    }

    #[test]
    fn complex_and_combo_specs() {
        assert_eq!("custom:a.json".parse::<ComplexSpec>().unwrap(), ComplexSpec::Custom("a.json".into()));
        assert!("custom:".parse::<ComplexSpec>().is_err());
        let s: ModelSpec = "surface:flow:delaunay".parse().unwrap();
        assert_eq!(s.label(), "Surface-Based-Flow (Del)");
        let s: ModelSpec = "mtz-baseline:flow:complete".parse().unwrap();
        assert_eq!(s.label(), "Lifted-MTZ (K_N)");
        assert!("surface:dfj:delaunay".parse::<ModelSpec>().is_err());
    }

    #[test]
    fn planar_on_complete_is_rejected() {
        let inst = load_instance("gen:euclidean:n=6:seed=1").unwrap();
        let spec = ModelSpec::new(ComplexSpec::Complete, ModelChoice::SurfacePlanar, TreeVariant::Flow);
        assert!(matches!(
            prepare(inst, &spec),
            Err(PipelineError::Complex(ComplexError::NotPlanarCompatible { .. }))
        ));
    }

    #[test]
    fn compare_table_layout() {
        let row = CompareRow {
            instance: "a280".into(),
            n: 280,
            label: "Lifted-MTZ (Del)".into(),
            vars: 10,
            cons: 20,
            runs: 5,
            solved: 0,
            mean_time_s: 60.0,
            mean_nodes: Some(53000.0),
            objective: None,
            statuses: vec![SolveStatus::Feasible; 5],
            error: None,
        };
        let t = format_compare_table(&[row]);
        assert!(t.contains("DNF [0/5]"));
        assert!(t.lines().next().unwrap().starts_with("Instance"));
    }
}
