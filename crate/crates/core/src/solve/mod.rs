//! Model serialization, MILP backends and exhaustive oracles.

mod highs;
pub mod lp;
pub mod oracle;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{MilpModel, VarKind};

pub use highs::{parse_highs_log, parse_solution_file, HighsCli, HighsPy, SolutionFile};
pub use lp::write_lp;
pub use oracle::{
    brute_force_surface, brute_force_tsp, valid_surface_subsets, OracleError, SurfaceOptimum,
};

/// Tolerance on binary values read back from a backend.
pub const BINARY_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("backend {id} unavailable: {reason}")]
    BackendUnavailable { id: String, reason: String },
    #[error("backend output unreadable: {0}")]
    BackendParseError(String),
    #[error("invalid solve limits: {0}")]
    InvalidLimits(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Optimal,
    Feasible,
    Infeasible,
    TimeLimit,
    Error,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }

    /// Maps a HiGHS model status string. `has_incumbent` distinguishes a
    /// time-limited run with a primal solution from one without.
    pub fn from_highs(status: &str, has_incumbent: bool) -> Self {
        match status.trim() {
            "Optimal" => SolveStatus::Optimal,
            "Infeasible" | "Primal infeasible or unbounded" => SolveStatus::Infeasible,
            "Time limit reached" if has_incumbent => SolveStatus::Feasible,
            "Time limit reached" => SolveStatus::TimeLimit,
            _ => SolveStatus::Error,
        }
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "OPTIMAL",
            SolveStatus::Feasible => "FEASIBLE",
            SolveStatus::Infeasible => "INFEASIBLE",
            SolveStatus::TimeLimit => "TIME_LIMIT",
            SolveStatus::Error => "ERROR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveLimits {
    pub time_limit_s: f64,
    pub mip_gap: f64,
    pub threads: usize,
    pub random_seed: u64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            time_limit_s: 3600.0,
            mip_gap: 0.0,
            threads: 1,
            random_seed: 0,
        }
    }
}

impl SolveLimits {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.time_limit_s > 0.0) {
            return Err(SolveError::InvalidLimits(format!(
                "time limit must be positive, got {}",
                self.time_limit_s
            )));
        }
        if !(self.mip_gap >= 0.0) {
            return Err(SolveError::InvalidLimits(format!(
                "mip gap must be non-negative, got {}",
                self.mip_gap
            )));
        }
        if self.threads == 0 {
            return Err(SolveError::InvalidLimits("threads must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub nodes: Option<u64>,
    pub runtime_s: f64,
    pub backend: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilpSolution {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    pub best_bound: Option<f64>,
    /// Variable values by name, present only with a primal solution.
    pub values: BTreeMap<String, f64>,
    pub stats: SolveStats,
}

impl MilpSolution {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    /// Dense vector in the model's column order, missing names as 0.
    pub fn dense(&self, model: &MilpModel) -> Vec<f64> {
        model
            .vars()
            .iter()
            .map(|v| self.value(&v.name).unwrap_or(0.0))
            .collect()
    }

    /// Checks binaries are within [`BINARY_TOL`] of the unit interval.
    pub(crate) fn check_binaries(&self, model: &MilpModel) -> Result<(), SolveError> {
        for v in model.vars().iter().filter(|v| v.kind == VarKind::Binary) {
            if let Some(x) = self.value(&v.name) {
                if !(-BINARY_TOL..=1.0 + BINARY_TOL).contains(&x) {
                    return Err(SolveError::BackendParseError(format!(
                        "binary {} has value {x}",
                        v.name
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A MILP solver reachable through LP files.
pub trait Backend: Send + Sync {
    fn id(&self) -> &str;

    /// Errors with [`SolveError::BackendUnavailable`] when the solver cannot
    /// be started.
    fn check_available(&self) -> Result<(), SolveError>;

    fn solve(&self, model: &MilpModel, limits: &SolveLimits) -> Result<MilpSolution, SolveError>;

    /// Status of `model` with each listed set of variables fixed, one solve
    /// per set.
    fn solve_fixings(
        &self,
        model: &MilpModel,
        fixings: &[Vec<(String, f64)>],
        limits: &SolveLimits,
    ) -> Result<Vec<SolveStatus>, SolveError> {
        fixings
            .iter()
            .map(|f| {
                let fixed = model.with_fixed(f).ok_or_else(|| {
                    SolveError::BackendParseError("fixing names an unknown variable".into())
                })?;
                Ok(self.solve(&fixed, limits)?.status)
            })
            .collect()
    }
}

/// Ids accepted by [`backend_by_id`].
pub const BACKEND_IDS: &[&str] = &["highspy", "highs"];

/// `highspy` runs HiGHS through its Python bindings; `highs` runs the HiGHS
/// command-line executable.
pub fn backend_by_id(id: &str) -> Result<Box<dyn Backend>, SolveError> {
    match id {
        "highspy" => Ok(Box::new(HighsPy::from_env())),
        "highs" => Ok(Box::new(HighsCli::from_env())),
        other => Err(SolveError::BackendUnavailable {
            id: other.to_string(),
            reason: format!("unknown backend; known: {}", BACKEND_IDS.join(", ")),
        }),
    }
}

/// Solves `model` after validating `limits`.
pub fn solve(
    model: &MilpModel,
    backend: &dyn Backend,
    limits: &SolveLimits,
) -> Result<MilpSolution, SolveError> {
    limits.validate()?;
    let sol = backend.solve(model, limits)?;
    sol.check_binaries(model)?;
    Ok(sol)
}
