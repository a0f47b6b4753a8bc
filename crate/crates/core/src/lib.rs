//! Surface-based MILP formulation of the symmetric TSP: choose `N − 2`
//! triangles forming a disk whose boundary is the tour.
//!
//! Pipeline: [`instance`] → [`complex`] → [`surface_model`] or
//! [`baseline`] → [`solve`] → [`boundary`]. [`pipeline`] strings these
//! together for the command line; [`plot`] draws the results.

pub mod baseline;
pub mod boundary;
pub mod complex;
pub mod geometry;
pub mod instance;
pub mod model;
pub mod pipeline;
pub mod plot;
pub mod solve;
pub mod surface_model;

pub use baseline::{build_lifted_mtz, EdgeSet, EdgeSetSource};
pub use boundary::{Surface, Tour, VerificationReport};
pub use complex::{ComplexSource, DualGraph, Edge, IncidenceGraph, Triangle, TriangleSet};
pub use instance::{EdgeWeightKind, Point, RandomMode, TspInstance};
pub use model::{MilpModel, ModelKind, TreeVariant};
pub use pipeline::{RunExit, RunReport};
pub use solve::{Backend, MilpSolution, SolveLimits, SolveStatus};
