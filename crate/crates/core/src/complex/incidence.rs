use std::collections::HashMap;

use super::{Edge, TriangleSet};
use crate::instance::TspInstance;

/// Containment of edge node `edge` in triangle node `tri`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub tri: usize,
    pub edge: usize,
}

/// Bipartite triangle–edge incidence graph `B = (U ∪ W, A)`.
///
/// Triangle nodes are indices into the [`TriangleSet`], edge nodes are indices
/// into its edge universe. Arcs are listed triangle by triangle, three per
/// triangle in [`super::Triangle::edges`] order.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    name: String,
    n: usize,
    edges: Vec<Edge>,
    edge_len: Vec<f64>,
    arcs: Vec<Arc>,
    tri_arcs: Vec<[usize; 3]>,
    edge_arcs: Vec<Vec<usize>>,
    tris_at: Vec<Vec<usize>>,
    edges_at: Vec<Vec<usize>>,
    conn_at: Vec<Vec<usize>>,
    triangles: TriangleSet,
}

impl IncidenceGraph {
    pub fn build(inst: &TspInstance, ts: &TriangleSet) -> Self {
        let n = ts.n_cities();
        let edges = ts.edge_universe().to_vec();
        let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let edge_len = edges.iter().map(|e| e.length(inst)).collect();

        let mut arcs = Vec::with_capacity(3 * ts.len());
        let mut tri_arcs = Vec::with_capacity(ts.len());
        let mut edge_arcs = vec![Vec::new(); edges.len()];
        let mut tris_at = vec![Vec::new(); n];
        let mut conn_at = vec![Vec::new(); n];
        for (t, tri) in ts.triangles().iter().enumerate() {
            let mut ids = [0; 3];
            for (k, e) in tri.edges().iter().enumerate() {
                let id = arcs.len();
                arcs.push(Arc { tri: t, edge: index[e] });
                edge_arcs[index[e]].push(id);
                // v ∈ t and v ∈ e: both endpoints of e.
                conn_at[e.a].push(id);
                conn_at[e.b].push(id);
                ids[k] = id;
            }
            tri_arcs.push(ids);
            for v in tri.vertices() {
                tris_at[v].push(t);
            }
        }
        let mut edges_at = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            edges_at[e.a].push(i);
            edges_at[e.b].push(i);
        }
        for c in &mut conn_at {
            c.sort_unstable();
        }
        IncidenceGraph {
            name: inst.name().to_string(),
            n,
            edges,
            edge_len,
            arcs,
            tri_arcs,
            edge_arcs,
            tris_at,
            edges_at,
            conn_at,
            triangles: ts.clone(),
        }
    }

    pub fn instance_name(&self) -> &str {
        &self.name
    }

    pub fn n_cities(&self) -> usize {
        self.n
    }

    pub fn triangles(&self) -> &TriangleSet {
        &self.triangles
    }

    pub fn num_triangles(&self) -> usize {
        self.tri_arcs.len()
    }

    /// Edge nodes `W`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_len[e]
    }

    /// Arcs `A`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// The three arcs of triangle `t`.
    pub fn arcs_of_triangle(&self, t: usize) -> [usize; 3] {
        self.tri_arcs[t]
    }

    pub fn arcs_of_edge(&self, e: usize) -> &[usize] {
        &self.edge_arcs[e]
    }

    /// `U(v)`: triangles containing city `v`.
    pub fn triangles_at(&self, v: usize) -> &[usize] {
        &self.tris_at[v]
    }

    /// `W(v)`: edges incident to city `v`.
    pub fn edges_at(&self, v: usize) -> &[usize] {
        &self.edges_at[v]
    }

    /// `Conn(v)`: arcs `(t, e)` with `v ∈ t` and `v ∈ e`.
    pub fn conn_at(&self, v: usize) -> &[usize] {
        &self.conn_at[v]
    }
}
