//! Candidate triangle complexes and the graphs derived from them.
//!
//! A [`TriangleSet`] is the pool of triangles a surface model may select. The
//! complete complex makes the surface model exact; Delaunay and greedy
//! triangulations give sparse, heuristic pools. From a set we derive the
//! bipartite triangle–edge [`IncidenceGraph`] (general model) and, when no edge
//! lies in more than two triangles, the triangle adjacency [`DualGraph`]
//! (planar model).

mod delaunay;
mod dual;
mod greedy;
mod incidence;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Point, TspInstance};

pub use delaunay::delaunay_triangles;
pub use dual::{DualEdge, DualGraph};
pub use greedy::{greedy_edges, greedy_triangles};
pub use incidence::{Arc, IncidenceGraph};

/// Default cap on the size of the complete complex.
pub const DEFAULT_COMPLETE_CAP: usize = 200_000;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("complete complex would have {count} triangles, cap is {cap}")]
    ComplexTooLarge { count: u128, cap: usize },
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("instance {0} has no coordinates")]
    MissingCoordinates(String),
    #[error("edge {edge} lies in {count} triangles; use the general incidence model")]
    NotPlanarCompatible { edge: Edge, count: usize },
    #[error("invalid triangle set: {0}")]
    Invalid(String),
}

/// An undirected edge `{a, b}` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        debug_assert_ne!(u, v);
        Edge {
            a: u.min(v),
            b: u.max(v),
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }

    pub fn length(&self, inst: &TspInstance) -> f64 {
        inst.d(self.a, self.b)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// A triangle on three distinct cities, vertices sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct Triangle([usize; 3]);

impl Triangle {
    /// Sorts the vertices; fails if they are not distinct.
    pub fn new(a: usize, b: usize, c: usize) -> Result<Self, ComplexError> {
        let mut v = [a, b, c];
        v.sort_unstable();
        if v[0] == v[1] || v[1] == v[2] {
            return Err(ComplexError::Invalid(format!(
                "triangle ({a},{b},{c}) repeats a vertex"
            )));
        }
        Ok(Triangle(v))
    }

    pub fn vertices(&self) -> [usize; 3] {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    /// The edges `{a,b}, {a,c}, {b,c}`, in that order.
    pub fn edges(&self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge { a, b }, Edge { a, b: c }, Edge { a: b, b: c }]
    }

    pub fn perimeter(&self, inst: &TspInstance) -> f64 {
        self.edges().iter().map(|e| e.length(inst)).sum()
    }
}

impl TryFrom<[usize; 3]> for Triangle {
    type Error = ComplexError;

    fn try_from(v: [usize; 3]) -> Result<Self, Self::Error> {
        Triangle::new(v[0], v[1], v[2])
    }
}

impl From<Triangle> for [usize; 3] {
    fn from(t: Triangle) -> Self {
        t.0
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Where a candidate complex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ComplexSource {
    Complete,
    Delaunay,
    Greedy,
    Custom,
}

impl fmt::Display for ComplexSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComplexSource::Complete => "complete",
            ComplexSource::Delaunay => "delaunay",
            ComplexSource::Greedy => "greedy",
            ComplexSource::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Candidate triangles over `n` cities, in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleSet {
    n: usize,
    triangles: Vec<Triangle>,
    source: ComplexSource,
    edge_universe: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct TriangleSetFile {
    n: usize,
    source: ComplexSource,
    triangles: Vec<Triangle>,
}

impl TriangleSet {
    /// Validates and canonicalizes (sorts) a list of triangles.
    pub fn new(
        n: usize,
        mut triangles: Vec<Triangle>,
        source: ComplexSource,
    ) -> Result<Self, ComplexError> {
        if let Some(t) = triangles.iter().find(|t| t.vertices()[2] >= n) {
            return Err(ComplexError::Invalid(format!(
                "triangle {t} references a city outside 0..{n}"
            )));
        }
        triangles.sort_unstable();
        if let Some(w) = triangles.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::Invalid(format!("duplicate triangle {}", w[0])));
        }
        let edge_universe: BTreeSet<Edge> =
            triangles.iter().flat_map(|t| t.edges()).collect();
        Ok(TriangleSet {
            n,
            triangles,
            source,
            edge_universe: edge_universe.into_iter().collect(),
        })
    }

    /// Number of cities of the underlying instance.
    pub fn n_cities(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn get(&self, idx: usize) -> Triangle {
        self.triangles[idx]
    }

    pub fn index_of(&self, t: &Triangle) -> Option<usize> {
        self.triangles.binary_search(t).ok()
    }

    pub fn source(&self) -> ComplexSource {
        self.source
    }

    /// Every distinct edge of some member triangle, sorted.
    pub fn edge_universe(&self) -> &[Edge] {
        &self.edge_universe
    }

    /// Degree of each city in the edge universe.
    pub fn vertex_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edge_universe {
            deg[e.a] += 1;
            deg[e.b] += 1;
        }
        deg
    }

    /// Largest number of member triangles sharing one edge.
    pub fn max_edge_multiplicity(&self) -> usize {
        let mut counts = std::collections::HashMap::new();
        for t in &self.triangles {
            for e in t.edges() {
                *counts.entry(e).or_insert(0usize) += 1;
            }
        }
        counts.into_values().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TriangleSetFile {
            n: self.n,
            source: self.source,
            triangles: self.triangles.clone(),
        })
        .expect("triangle set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        let file: TriangleSetFile =
            serde_json::from_str(text).map_err(|e| ComplexError::Invalid(e.to_string()))?;
        TriangleSet::new(file.n, file.triangles, file.source)
    }
}

fn coords_of(inst: &TspInstance) -> Result<&[Point], ComplexError> {
    inst.coords()
        .ok_or_else(|| ComplexError::MissingCoordinates(inst.name().to_string()))
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// All `C(N,3)` triangles, refusing to build more than `cap`.
pub fn complete_complex_with_cap(
    inst: &TspInstance,
    cap: usize,
) -> Result<TriangleSet, ComplexError> {
    let n = inst.n();
    let count = binomial(n, 3);
    if count > cap as u128 {
        return Err(ComplexError::ComplexTooLarge { count, cap });
    }
    let mut tris = Vec::with_capacity(count as usize);
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                tris.push(Triangle([a, b, c]));
            }
        }
    }
    TriangleSet::new(n, tris, ComplexSource::Complete)
}

pub fn complete_complex(inst: &TspInstance) -> Result<TriangleSet, ComplexError> {
    complete_complex_with_cap(inst, DEFAULT_COMPLETE_CAP)
}

/// Delaunay triangulation of the instance coordinates.
pub fn delaunay_complex(inst: &TspInstance) -> Result<TriangleSet, ComplexError> {
    let tris = delaunay_triangles(coords_of(inst)?)?;
    TriangleSet::new(inst.n(), tris, ComplexSource::Delaunay)
}

/// Greedy triangulation of the instance coordinates.
pub fn greedy_complex(inst: &TspInstance) -> Result<TriangleSet, ComplexError> {
    let tris = greedy_triangles(coords_of(inst)?)?;
    TriangleSet::new(inst.n(), tris, ComplexSource::Greedy)
}

/// Checks that a set is usable by the planar model without building the dual.
pub fn is_planar_compatible(ts: &TriangleSet) -> bool {
    ts.max_edge_multiplicity() <= 2
}

/// Triangles sharing an edge are adjacent; returns the number of connected
/// components among the given triangles (0 for none).
pub fn edge_adjacency_components(triangles: &[Triangle]) -> usize {
    let mut by_edge: std::collections::HashMap<Edge, Vec<usize>> = Default::default();
    for (i, t) in triangles.iter().enumerate() {
        for e in t.edges() {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut seen = vec![false; triangles.len()];
    let mut components = 0;
    for start in 0..triangles.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for e in triangles[i].edges() {
                for &j in &by_edge[&e] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    components
}

/// Convex hull size of a point set (collinear hull points excluded).
pub fn hull_size(points: &[Point]) -> usize {
    use crate::geometry::orient;
    use std::cmp::Ordering;
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&i, &j| {
        points[i]
            .x
            .total_cmp(&points[j].x)
            .then(points[i].y.total_cmp(&points[j].y))
    });
    let mut hull: Vec<usize> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && orient(
                    &points[hull[hull.len() - 2]],
                    &points[hull[hull.len() - 1]],
                    &points[i],
                ) != Ordering::Greater
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull.iter().collect::<HashSet<_>>().len()
}
