//! HiGHS adapters: the Python bindings driven through a bundled script, and
//! the `highs` executable. Both exchange CPLEX LP files and raw HiGHS
//! solution files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Deserialize;

use super::{lp::write_lp, Backend, MilpSolution, SolveError, SolveLimits, SolveStats, SolveStatus};
use crate::model::MilpModel;

const DRIVER: &str = include_str!("highs_driver.py");

/// Contents of a HiGHS raw solution file (`write_solution_style = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFile {
    pub model_status: String,
    pub objective: Option<f64>,
    /// Column values; empty when the file holds no primal solution.
    pub columns: BTreeMap<String, f64>,
}

fn parse_err(msg: impl Into<String>) -> SolveError {
    SolveError::BackendParseError(msg.into())
}

pub fn parse_solution_file(text: &str) -> Result<SolutionFile, SolveError> {
    let mut lines = text.lines().map(str::trim_end);
    let mut model_status = None;
    while let Some(line) = lines.next() {
        if line == "Model status" {
            model_status = lines.next().map(str::to_string);
            break;
        }
    }
    let model_status = model_status.ok_or_else(|| parse_err("missing model status"))?;
    let mut objective = None;
    let mut columns = BTreeMap::new();
    while let Some(line) = lines.next() {
        if line != "# Primal solution values" {
            continue;
        }
        match lines.next() {
            Some("None") | None => break,
            Some(_) => {}
        }
        let obj = lines.next().ok_or_else(|| parse_err("missing objective"))?;
        objective = Some(
            obj.strip_prefix("Objective ")
                .and_then(|v| v.trim().parse::<f64>().ok())
                .ok_or_else(|| parse_err(format!("bad objective line {obj:?}")))?,
        );
        let header = lines.next().ok_or_else(|| parse_err("missing column count"))?;
        let count: usize = header
            .strip_prefix("# Columns ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| parse_err(format!("bad column header {header:?}")))?;
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| parse_err("truncated column values"))?;
            let (name, value) = line
                .rsplit_once(' ')
                .ok_or_else(|| parse_err(format!("bad column line {line:?}")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| parse_err(format!("bad value in {line:?}")))?;
            columns.insert(name.to_string(), value);
        }
        break;
    }
    Ok(SolutionFile {
        model_status,
        objective,
        columns,
    })
}

#[derive(Debug, Deserialize)]
struct DriverStats {
    model_status: String,
    primal_solution_status: i64,
    mip_dual_bound: Option<f64>,
    nodes: u64,
    runtime_s: f64,
}

fn assemble(
    sol: SolutionFile,
    status_text: &str,
    has_incumbent: bool,
    best_bound: Option<f64>,
    stats: SolveStats,
) -> MilpSolution {
    let status = SolveStatus::from_highs(status_text, has_incumbent);
    let values = if status.has_solution() {
        sol.columns
    } else {
        BTreeMap::new()
    };
    MilpSolution {
        status,
        objective: sol.objective.filter(|_| status.has_solution()),
        best_bound,
        values,
        stats,
    }
}

fn read(path: &Path) -> Result<String, SolveError> {
    std::fs::read_to_string(path)
        .map_err(|e| parse_err(format!("cannot read {}: {e}", path.display())))
}

fn run(cmd: &mut Command, id: &str) -> Result<(), SolveError> {
    let out = cmd.output().map_err(|e| SolveError::BackendUnavailable {
        id: id.to_string(),
        reason: e.to_string(),
    })?;
    if !out.status.success() {
        return Err(parse_err(format!(
            "{id} exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        )));
    }
    Ok(())
}

/// HiGHS through `highspy`. The interpreter defaults to `python3` and can be
/// overridden with `SURFTSP_PYTHON`.
#[derive(Debug)]
pub struct HighsPy {
    python: PathBuf,
    available: OnceLock<Result<(), String>>,
}

impl HighsPy {
    pub fn new(python: impl Into<PathBuf>) -> Self {
        HighsPy {
            python: python.into(),
            available: OnceLock::new(),
        }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os("SURFTSP_PYTHON").unwrap_or_else(|| "python3".into()))
    }

    fn command(&self, dir: &Path) -> Result<Command, SolveError> {
        self.check_available()?;
        let script = dir.join("highs_driver.py");
        std::fs::write(&script, DRIVER)?;
        let mut cmd = Command::new(&self.python);
        cmd.arg(script);
        Ok(cmd)
    }

    fn limit_args(cmd: &mut Command, limits: &SolveLimits) {
        cmd.arg("--time-limit")
            .arg(limits.time_limit_s.to_string())
            .arg("--threads")
            .arg(limits.threads.to_string())
            .arg("--seed")
            .arg((limits.random_seed % (i32::MAX as u64)).to_string());
    }
}

impl Backend for HighsPy {
    fn id(&self) -> &str {
        "highspy"
    }

    fn check_available(&self) -> Result<(), SolveError> {
        let probe = self.available.get_or_init(|| {
            match Command::new(&self.python).args(["-c", "import highspy"]).output() {
                Ok(o) if o.status.success() => Ok(()),
                Ok(o) => Err(String::from_utf8_lossy(&o.stderr).trim().to_string()),
                Err(e) => Err(format!("{}: {e}", self.python.display())),
            }
        });
        probe.clone().map_err(|reason| SolveError::BackendUnavailable {
            id: self.id().to_string(),
            reason,
        })
    }

    fn solve(&self, model: &MilpModel, limits: &SolveLimits) -> Result<MilpSolution, SolveError> {
        let dir = tempfile::tempdir()?;
        let (lp, sol, stats) = (
            dir.path().join("model.lp"),
            dir.path().join("model.sol"),
            dir.path().join("stats.json"),
        );
        std::fs::write(&lp, write_lp(model))?;
        let mut cmd = self.command(dir.path())?;
        cmd.arg("solve").arg(&lp).arg(&sol).arg(&stats);
        Self::limit_args(&mut cmd, limits);
        cmd.arg("--mip-gap").arg(limits.mip_gap.to_string());
        run(&mut cmd, self.id())?;
        let st: DriverStats = serde_json::from_str(&read(&stats)?)
            .map_err(|e| parse_err(format!("stats: {e}")))?;
        let file = parse_solution_file(&read(&sol)?)?;
        // HiGHS solution status 2 is "feasible".
        let incumbent = st.primal_solution_status == 2;
        let status_text = st.model_status.clone();
        Ok(assemble(
            file,
            &status_text,
            incumbent,
            st.mip_dual_bound,
            SolveStats {
                nodes: Some(st.nodes),
                runtime_s: st.runtime_s,
                backend: self.id().to_string(),
            },
        ))
    }

    /// One interpreter process for the whole batch; each set is solved from
    /// scratch with the model's original bounds restored afterwards.
    fn solve_fixings(
        &self,
        model: &MilpModel,
        fixings: &[Vec<(String, f64)>],
        limits: &SolveLimits,
    ) -> Result<Vec<SolveStatus>, SolveError> {
        limits.validate()?;
        if let Some((name, _)) = fixings.iter().flatten().find(|(n, _)| model.var_index(n).is_none()) {
            return Err(parse_err(format!("fixing names unknown variable {name}")));
        }
        let dir = tempfile::tempdir()?;
        let (lp, fix, out) = (
            dir.path().join("model.lp"),
            dir.path().join("fixings.json"),
            dir.path().join("statuses.json"),
        );
        std::fs::write(&lp, write_lp(model))?;
        std::fs::write(&fix, serde_json::json!({ "fixings": fixings }).to_string())?;
        let mut cmd = self.command(dir.path())?;
        cmd.arg("fixings").arg(&lp).arg(&fix).arg(&out);
        Self::limit_args(&mut cmd, limits);
        run(&mut cmd, self.id())?;
        #[derive(Deserialize)]
        struct Out {
            statuses: Vec<String>,
        }
        let parsed: Out = serde_json::from_str(&read(&out)?)
            .map_err(|e| parse_err(format!("fixing statuses: {e}")))?;
        if parsed.statuses.len() != fixings.len() {
            return Err(parse_err("fixing status count mismatch"));
        }
        Ok(parsed
            .statuses
            .iter()
            .map(|s| SolveStatus::from_highs(s, false))
            .collect())
    }
}

/// Values scraped from the HiGHS console log.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct HighsLog {
    pub dual_bound: Option<f64>,
    pub nodes: Option<u64>,
    pub runtime_s: Option<f64>,
    pub primal_feasible: bool,
}

/// Reads the MIP solving report printed by the `highs` executable.
pub fn parse_highs_log(text: &str) -> HighsLog {
    let mut log = HighsLog::default();
    for line in text.lines() {
        let line = line.trim();
        let field = |key: &str| -> Option<String> {
            line.strip_prefix(key)
                .map(|r| r.split_whitespace().next().unwrap_or("").to_string())
        };
        if let Some(v) = field("Dual bound") {
            log.dual_bound = v.parse().ok().filter(|x: &f64| x.is_finite());
        } else if let Some(v) = field("Nodes") {
            log.nodes = v.parse().ok();
        } else if let Some(v) = field("Timing") {
            log.runtime_s = v.parse().ok();
        } else if let Some(v) = field("Solution status") {
            log.primal_feasible = v == "feasible";
        }
    }
    log
}

/// The `highs` executable, taken from `SURFTSP_HIGHS` or the `PATH`.
#[derive(Debug)]
pub struct HighsCli {
    exe: PathBuf,
}

impl HighsCli {
    pub fn new(exe: impl Into<PathBuf>) -> Self {
        HighsCli { exe: exe.into() }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os("SURFTSP_HIGHS").unwrap_or_else(|| "highs".into()))
    }
}

impl Backend for HighsCli {
    fn id(&self) -> &str {
        "highs"
    }

    fn check_available(&self) -> Result<(), SolveError> {
        match Command::new(&self.exe).arg("--version").output() {
            Ok(o) if o.status.success() => Ok(()),
            Ok(o) => Err(SolveError::BackendUnavailable {
                id: self.id().into(),
                reason: format!("{} --version exited with {}", self.exe.display(), o.status),
            }),
            Err(e) => Err(SolveError::BackendUnavailable {
                id: self.id().into(),
                reason: format!("{}: {e}", self.exe.display()),
            }),
        }
    }

    fn solve(&self, model: &MilpModel, limits: &SolveLimits) -> Result<MilpSolution, SolveError> {
        self.check_available()?;
        let dir = tempfile::tempdir()?;
        let (lp, sol, opts) = (
            dir.path().join("model.lp"),
            dir.path().join("model.sol"),
            dir.path().join("highs.opt"),
        );
        std::fs::write(&lp, write_lp(model))?;
        std::fs::write(
            &opts,
            format!(
                "time_limit = {}\nmip_rel_gap = {}\nthreads = {}\nrandom_seed = {}\nwrite_solution_style = 0\n",
                limits.time_limit_s,
                limits.mip_gap,
                limits.threads,
                limits.random_seed % (i32::MAX as u64)
            ),
        )?;
        let start = Instant::now();
        let out = Command::new(&self.exe)
            .arg("--model_file")
            .arg(&lp)
            .arg("--options_file")
            .arg(&opts)
            .arg("--solution_file")
            .arg(&sol)
            .output()
            .map_err(|e| SolveError::BackendUnavailable {
                id: self.id().into(),
                reason: e.to_string(),
            })?;
        let wall = start.elapsed().as_secs_f64();
        let log = parse_highs_log(&String::from_utf8_lossy(&out.stdout));
        let file = parse_solution_file(&read(&sol)?)?;
        let incumbent = log.primal_feasible || file.objective.is_some();
        let status_text = file.model_status.clone();
        Ok(assemble(
            file,
            &status_text,
            incumbent,
            log.dual_bound,
            SolveStats {
                nodes: log.nodes,
                runtime_s: log.runtime_s.unwrap_or(wall),
                backend: self.id().to_string(),
            },
        ))
    }
}
