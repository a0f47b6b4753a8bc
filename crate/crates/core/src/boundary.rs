//! Decoding of solver output into surfaces, independent topological
//! verification and boundary tour extraction.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{edge_adjacency_components, Edge, Triangle, TriangleSet};
use crate::instance::TspInstance;
use crate::model::{MilpModel, ModelKind, VarRole};
use crate::solve::MilpSolution;

#[derive(Debug, Error, PartialEq)]
pub enum DecodeError {
    #[error("solution has status {0} and carries no values")]
    NoSolution(String),
    #[error("model has no triangle variables ({0})")]
    NotASurfaceModel(ModelKind),
    #[error("variable {0} missing from the solution")]
    MissingVariable(String),
    #[error("triangle index {index} outside the complex of {len} triangles")]
    UnknownTriangle { index: usize, len: usize },
    #[error("decoded arcs do not form one tour: {0}")]
    BadTour(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TourError {
    #[error("city {city} has boundary degree {degree}")]
    NotACycle { city: usize, degree: usize },
    #[error("boundary splits into {cycles} cycles")]
    MultipleCycles { cycles: usize },
    #[error("boundary cycle visits {visited} of {n} cities")]
    NotHamiltonian { visited: usize, n: usize },
}

/// A selected 2-complex. Edge multiplicities are always recomputed from the
/// selected triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    n: usize,
    triangles: Vec<Triangle>,
    indices: Option<Vec<usize>>,
    outside: Vec<Triangle>,
    multiplicity: BTreeMap<Edge, usize>,
}

impl Surface {
    /// Surface from triangles, checked for membership in `complex` when one
    /// is given.
    pub fn new(n: usize, triangles: Vec<Triangle>, complex: Option<&TriangleSet>) -> Self {
        let mut triangles = triangles;
        triangles.sort();
        let (indices, outside) = match complex {
            Some(ts) => {
                let mut idx = Vec::new();
                let mut outside = Vec::new();
                for t in &triangles {
                    match ts.index_of(t) {
                        Some(i) => idx.push(i),
                        None => outside.push(*t),
                    }
                }
                (outside.is_empty().then_some(idx), outside)
            }
            None => (None, Vec::new()),
        };
        let mut multiplicity = BTreeMap::new();
        for t in &triangles {
            for e in t.edges() {
                *multiplicity.entry(e).or_insert(0) += 1;
            }
        }
        Surface {
            n,
            triangles,
            indices,
            outside,
            multiplicity,
        }
    }

    /// Surface from indices into `ts`.
    pub fn from_indices(ts: &TriangleSet, indices: &[usize]) -> Result<Self, DecodeError> {
        let tris = indices
            .iter()
            .map(|&i| {
                if i < ts.len() {
                    Ok(ts.get(i))
                } else {
                    Err(DecodeError::UnknownTriangle {
                        index: i,
                        len: ts.len(),
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(ts.n_cities(), tris, Some(ts)))
    }

    pub fn n_cities(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    /// Indices into the candidate complex, when every triangle belongs to it.
    pub fn indices(&self) -> Option<&[usize]> {
        self.indices.as_deref()
    }

    /// Active edges with the number of selected triangles containing them.
    pub fn edge_multiplicities(&self) -> &BTreeMap<Edge, usize> {
        &self.multiplicity
    }
}

/// Rebuilds the surface selected by a surface-model solution: triangles with
/// `x_t > 0.5`.
pub fn extract_surface(
    model: &MilpModel,
    ts: &TriangleSet,
    sol: &MilpSolution,
) -> Result<Surface, DecodeError> {
    if !sol.status.has_solution() {
        return Err(DecodeError::NoSolution(sol.status.to_string()));
    }
    if model.meta.kind == ModelKind::LiftedMtz {
        return Err(DecodeError::NotASurfaceModel(model.meta.kind));
    }
    let mut selected = Vec::new();
    let mut seen = 0;
    for v in model.vars() {
        if let VarRole::Triangle { t } = v.role {
            seen += 1;
            let x = sol
                .value(&v.name)
                .ok_or_else(|| DecodeError::MissingVariable(v.name.clone()))?;
            if x > 0.5 {
                selected.push(t);
            }
        }
    }
    if seen != ts.len() {
        return Err(DecodeError::MissingVariable(format!(
            "x_t* ({seen} of {} triangles)",
            ts.len()
        )));
    }
    Surface::from_indices(ts, &selected)
}

/// The admissibility conditions checked by [`verify_surface`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Closure,
    Manifold,
    EulerPerVertex,
    DualConnected,
    BoundaryIsSingleCycle,
    Hamiltonian,
    Cardinality,
}

impl Check {
    /// Order in which failures are reported: local defects before the
    /// global consequences they cause.
    pub const ALL: [Check; 7] = [
        Check::Closure,
        Check::Manifold,
        Check::EulerPerVertex,
        Check::DualConnected,
        Check::BoundaryIsSingleCycle,
        Check::Hamiltonian,
        Check::Cardinality,
    ];
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::Closure => "closure",
            Check::Manifold => "manifold",
            Check::EulerPerVertex => "euler_per_vertex",
            Check::DualConnected => "dual_connected",
            Check::BoundaryIsSingleCycle => "boundary_is_single_cycle",
            Check::Hamiltonian => "hamiltonian",
            Check::Cardinality => "cardinality",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub cardinality: bool,
    pub closure: bool,
    pub manifold: bool,
    pub euler_per_vertex: bool,
    pub dual_connected: bool,
    pub boundary_is_single_cycle: bool,
    pub hamiltonian: bool,
}

impl Flags {
    pub fn get(&self, c: Check) -> bool {
        match c {
            Check::Cardinality => self.cardinality,
            Check::Closure => self.closure,
            Check::Manifold => self.manifold,
            Check::EulerPerVertex => self.euler_per_vertex,
            Check::DualConnected => self.dual_connected,
            Check::BoundaryIsSingleCycle => self.boundary_is_single_cycle,
            Check::Hamiltonian => self.hamiltonian,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub valid: bool,
    pub flags: Flags,
    /// `χ(v) = T(v) + E(v) − I(v)` per city.
    pub chi: Vec<i64>,
    pub num_triangles: usize,
    pub num_edges: usize,
    pub details: Vec<String>,
}

impl VerificationReport {
    pub fn failures(&self) -> Vec<Check> {
        Check::ALL.into_iter().filter(|&c| !self.flags.get(c)).collect()
    }

    pub fn primary_failure(&self) -> Option<Check> {
        self.failures().into_iter().next()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Cycles formed by `edges` when every touched city has degree two, else
/// the first city of another degree.
fn cycle_components(edges: &[Edge], n: usize) -> Result<Vec<Vec<usize>>, TourError> {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.a].push(e.b);
        adj[e.b].push(e.a);
    }
    if let Some(city) = (0..n).find(|&v| !adj[v].is_empty() && adj[v].len() != 2) {
        return Err(TourError::NotACycle {
            city,
            degree: adj[city].len(),
        });
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        let mut order = vec![s];
        seen[s] = true;
        let (mut prev, mut cur) = (s, adj[s][0].min(adj[s][1]));
        while cur != s {
            seen[cur] = true;
            order.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        cycles.push(order);
    }
    Ok(cycles)
}

/// Checks every admissibility condition from the triangle selection alone.
pub fn verify_surface(s: &Surface) -> VerificationReport {
    let n = s.n;
    let mut details = Vec::new();
    let num_triangles = s.triangles.len();
    let num_edges = s.multiplicity.len();

    let cardinality = n >= 2 && num_triangles + 2 == n && num_edges + 3 == 2 * n;
    if !cardinality {
        details.push(format!(
            "cardinality: {num_triangles} triangles and {num_edges} edges, need {} and {}",
            n.saturating_sub(2),
            (2 * n).saturating_sub(3)
        ));
    }

    let closure = s.outside.is_empty();
    for t in &s.outside {
        details.push(format!("closure: triangle {t} is not a candidate"));
    }

    let mut manifold = true;
    for (e, &m) in &s.multiplicity {
        if m > 2 {
            manifold = false;
            details.push(format!("manifold: edge {e} lies in {m} selected triangles"));
        }
    }

    let mut t_at = vec![0i64; n];
    let mut e_at = vec![0i64; n];
    let mut i_at = vec![0i64; n];
    for t in &s.triangles {
        for v in t.vertices() {
            t_at[v] += 1;
        }
        for e in t.edges() {
            i_at[e.a] += 1;
            i_at[e.b] += 1;
        }
    }
    for e in s.multiplicity.keys() {
        e_at[e.a] += 1;
        e_at[e.b] += 1;
    }
    let chi: Vec<i64> = (0..n).map(|v| t_at[v] + e_at[v] - i_at[v]).collect();
    let mut euler_per_vertex = true;
    for (v, &c) in chi.iter().enumerate() {
        if c != 1 {
            euler_per_vertex = false;
            details.push(format!(
                "euler: vertex {v} has chi = {} + {} - {} = {c}",
                t_at[v], e_at[v], i_at[v]
            ));
        }
    }

    let components = edge_adjacency_components(&s.triangles);
    let dual_connected = components == 1;
    if !dual_connected {
        details.push(format!("dual_connected: {components} triangle components"));
    }

    let boundary = boundary_edges(s);
    let (boundary_is_single_cycle, visited) = match cycle_components(&boundary, n) {
        Ok(c) if c.len() == 1 => (true, c[0].len()),
        Ok(c) => {
            details.push(format!("boundary: {} cycles", c.len()));
            (false, c.iter().map(Vec::len).sum())
        }
        Err(e) => {
            details.push(format!("boundary: {e}"));
            let mut touched = vec![false; n];
            for e in &boundary {
                touched[e.a] = true;
                touched[e.b] = true;
            }
            (false, touched.iter().filter(|&&t| t).count())
        }
    };
    let hamiltonian = visited == n;
    if !hamiltonian {
        details.push(format!("hamiltonian: boundary touches {visited} of {n} cities"));
    }

    let flags = Flags {
        cardinality,
        closure,
        manifold,
        euler_per_vertex,
        dual_connected,
        boundary_is_single_cycle,
        hamiltonian,
    };
    VerificationReport {
        valid: Check::ALL.iter().all(|&c| flags.get(c)),
        flags,
        chi,
        num_triangles,
        num_edges,
        details,
    }
}

/// Edges of multiplicity exactly one, ascending.
pub fn boundary_edges(s: &Surface) -> Vec<Edge> {
    s.multiplicity
        .iter()
        .filter(|(_, &m)| m == 1)
        .map(|(e, _)| *e)
        .collect()
}

/// A Hamiltonian cycle: `order` starts at city 0 and continues towards its
/// smaller neighbour.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub length: f64,
}

impl Tour {
    /// Canonical tour from any cyclic order of all cities.
    pub fn from_cycle(order: &[usize], inst: &TspInstance) -> Self {
        let n = order.len();
        let start = order.iter().position(|&c| c == 0).unwrap_or(0);
        let mut canon: Vec<usize> = (0..n).map(|k| order[(start + k) % n]).collect();
        if n > 2 && canon[n - 1] < canon[1] {
            canon[1..].reverse();
        }
        Tour {
            length: inst.tour_length(&canon),
            order: canon,
        }
    }

    /// `NAME length N : c0 c1 ...`
    pub fn to_line(&self, name: &str) -> String {
        let cities: Vec<String> = self.order.iter().map(|c| c.to_string()).collect();
        format!("{name} {} {} : {}", self.length, self.order.len(), cities.join(" "))
    }
}

/// Walks the cycle formed by `edges` from its smallest city toward that
/// city's smaller neighbour.
pub fn assemble_tour(edges: &[Edge], inst: &TspInstance) -> Result<Tour, TourError> {
    let n = inst.n();
    let cycles = cycle_components(edges, n)?;
    match cycles.len() {
        0 => Err(TourError::NotHamiltonian { visited: 0, n }),
        1 if cycles[0].len() == n => {
            let order = cycles.into_iter().next().unwrap_or_default();
            Ok(Tour {
                length: inst.tour_length(&order),
                order,
            })
        }
        1 => Err(TourError::NotHamiltonian {
            visited: cycles[0].len(),
            n,
        }),
        k => Err(TourError::MultipleCycles { cycles: k }),
    }
}

/// Total length of the boundary edges.
pub fn boundary_length(s: &Surface, inst: &TspInstance) -> f64 {
    boundary_edges(s).iter().map(|e| e.length(inst)).sum()
}

/// Whether the solver objective equals the boundary length within
/// `1e-6 · (1 + |Z|)`.
pub fn objective_identity_check(s: &Surface, inst: &TspInstance, objective: f64) -> bool {
    (boundary_length(s, inst) - objective).abs() <= 1e-6 * (1.0 + objective.abs())
}

/// Percentage excess of `tour_length` over `reference`.
pub fn gap_percent(tour_length: f64, reference: f64) -> f64 {
    100.0 * (tour_length - reference) / reference
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{complete_complex, ComplexSource};
    use crate::instance::{EdgeWeightKind, Point, RandomMode};

    fn tri(a: usize, b: usize, c: usize) -> Triangle {
        Triangle::new(a, b, c).unwrap()
    }

    fn square() -> TspInstance {
        TspInstance::from_coords(
            "sq",
            vec![
                Point::new(0., 0.),
                Point::new(1., 0.),
                Point::new(1., 1.),
                Point::new(0., 1.),
            ],
            EdgeWeightKind::Euc2dExact,
        )
        .unwrap()
    }

    #[test]
    fn bowtie_fails_euler_at_shared_vertex() {
        let s = Surface::new(5, vec![tri(0, 1, 2), tri(0, 3, 4)], None);
        let r = verify_surface(&s);
        assert!(!r.flags.euler_per_vertex);
        assert_eq!(r.chi[0], 2);
        assert_eq!(r.primary_failure(), Some(Check::EulerPerVertex));
        assert!(r.details.iter().any(|d| d.contains("vertex 0")));
    }

    #[test]
    fn triple_edge_fails_manifold() {
        let s = Surface::new(5, vec![tri(0, 1, 2), tri(0, 1, 3), tri(0, 1, 4)], None);
        let r = verify_surface(&s);
        assert_eq!(r.failures(), vec![Check::Manifold, Check::BoundaryIsSingleCycle]);
    }

    #[test]
    fn hexagon_fan_minus_one() {
        let tris = (1..=5).map(|k| tri(0, k, k + 1)).collect();
        let s = Surface::new(7, tris, None);
        let r = verify_surface(&s);
        assert!(r.valid, "{:?}", r.details);
        assert_eq!(boundary_edges(&s).len(), 7);
    }

    #[test]
    fn boundary_edge_counts() {
        assert_eq!(boundary_edges(&Surface::new(4, vec![tri(0, 1, 2)], None)).len(), 3);
        let pair = Surface::new(4, vec![tri(0, 1, 2), tri(0, 2, 3)], None);
        assert_eq!(boundary_edges(&pair).len(), 4);
    }

    #[test]
    fn square_tour_and_identity() {
        let inst = square();
        let pair = Surface::new(4, vec![tri(0, 1, 2), tri(0, 2, 3)], None);
        let tour = assemble_tour(&boundary_edges(&pair), &inst).unwrap();
        assert_eq!(tour.order, vec![0, 1, 2, 3]);
        assert_eq!(tour.length, 4.0);
        assert!(objective_identity_check(&pair, &inst, 4.0));
        assert!(!objective_identity_check(&pair, &inst, 5.0));
        assert_eq!(tour.to_line("sq"), "sq 4 4 : 0 1 2 3");
    }

    #[test]
    fn tour_errors() {
        let inst = TspInstance::random(6, 0, RandomMode::Euclidean).unwrap();
        let two = Surface::new(6, vec![tri(0, 1, 2), tri(3, 4, 5)], None);
        assert_eq!(
            assemble_tour(&boundary_edges(&two), &inst),
            Err(TourError::MultipleCycles { cycles: 2 })
        );
        let one = Surface::new(6, vec![tri(0, 1, 2)], None);
        assert_eq!(
            assemble_tour(&boundary_edges(&one), &inst),
            Err(TourError::NotHamiltonian { visited: 3, n: 6 })
        );
        let star = [Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)];
        assert!(matches!(
            assemble_tour(&star, &inst),
            Err(TourError::NotACycle { city: 0, degree: 3 })
        ));
    }

    #[test]
    fn double_cover_has_no_boundary() {
        // Two triangles on the same vertices would be a duplicate, so glue a
        // tetrahedron instead: every edge has multiplicity 2.
        let s = Surface::new(
            4,
            vec![tri(0, 1, 2), tri(0, 1, 3), tri(0, 2, 3), tri(1, 2, 3)],
            None,
        );
        assert!(boundary_edges(&s).is_empty());
        assert!(!verify_surface(&s).flags.boundary_is_single_cycle);
    }

    #[test]
    fn closure_against_complex() {
        let ts = TriangleSet::new(4, vec![tri(0, 1, 2)], ComplexSource::Custom).unwrap();
        let s = Surface::new(4, vec![tri(0, 1, 2), tri(0, 2, 3)], Some(&ts));
        let r = verify_surface(&s);
        assert!(!r.flags.closure);
        assert_eq!(r.primary_failure(), Some(Check::Closure));
        let inst = square();
        let full = complete_complex(&inst).unwrap();
        let s = Surface::new(4, vec![tri(0, 1, 2), tri(0, 2, 3)], Some(&full));
        assert!(verify_surface(&s).valid);
        assert_eq!(s.indices().map(|i| i.len()), Some(2));
    }

    #[test]
    fn gaps() {
        assert!((gap_percent(3_333_452.0, 3_139_778.0) - 6.17).abs() < 0.005);
        assert!((gap_percent(3_197_767.0, 3_139_778.0) - 1.85).abs() < 0.005);
        assert_eq!(gap_percent(7.0, 7.0), 0.0);
    }

    #[test]
    fn canonical_orientation() {
        let inst = TspInstance::random(5, 0, RandomMode::NonMetric).unwrap();
        let t = Tour::from_cycle(&[3, 4, 0, 2, 1], &inst);
        assert_eq!(t.order, vec![0, 2, 1, 3, 4]);
        let t = Tour::from_cycle(&[3, 1, 2, 0, 4], &inst);
        assert_eq!(t.order, vec![0, 2, 1, 3, 4]);
    }
}
