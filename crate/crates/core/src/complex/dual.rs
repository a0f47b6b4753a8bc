use std::collections::BTreeMap;

use super::{ComplexError, Edge, TriangleSet};
use crate::instance::TspInstance;

/// Two triangles glued along a primal edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualEdge {
    pub t1: usize,
    pub t2: usize,
    pub shared: Edge,
    pub length: f64,
}

/// Triangle adjacency graph of a complex in which every primal edge lies in at
/// most two triangles.
#[derive(Debug, Clone)]
pub struct DualGraph {
    name: String,
    n: usize,
    perimeters: Vec<f64>,
    edges: Vec<DualEdge>,
    tris_at: Vec<Vec<usize>>,
    dual_edges_at: Vec<Vec<usize>>,
    triangles: TriangleSet,
}

impl DualGraph {
    pub fn build(inst: &TspInstance, ts: &TriangleSet) -> Result<Self, ComplexError> {
        let mut owners: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        for (t, tri) in ts.triangles().iter().enumerate() {
            for e in tri.edges() {
                owners.entry(e).or_default().push(t);
            }
        }
        let n = ts.n_cities();
        let mut edges = Vec::new();
        let mut dual_edges_at = vec![Vec::new(); n];
        for (e, ts_of_e) in &owners {
            match ts_of_e.as_slice() {
                [_] => {}
                &[t1, t2] => {
                    let id = edges.len();
                    edges.push(DualEdge {
                        t1,
                        t2,
                        shared: *e,
                        length: e.length(inst),
                    });
                    dual_edges_at[e.a].push(id);
                    dual_edges_at[e.b].push(id);
                }
                more => {
                    return Err(ComplexError::NotPlanarCompatible {
                        edge: *e,
                        count: more.len(),
                    })
                }
            }
        }
        let mut tris_at = vec![Vec::new(); n];
        for (t, tri) in ts.triangles().iter().enumerate() {
            for v in tri.vertices() {
                tris_at[v].push(t);
            }
        }
        Ok(DualGraph {
            name: inst.name().to_string(),
            n,
            perimeters: ts.triangles().iter().map(|t| t.perimeter(inst)).collect(),
            edges,
            tris_at,
            dual_edges_at,
            triangles: ts.clone(),
        })
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

    pub fn num_nodes(&self) -> usize {
        self.perimeters.len()
    }

    pub fn perimeter(&self, t: usize) -> f64 {
        self.perimeters[t]
    }

    pub fn edges(&self) -> &[DualEdge] {
        &self.edges
    }

    /// Triangles containing city `v`.
    pub fn triangles_at(&self, v: usize) -> &[usize] {
        &self.tris_at[v]
    }

    /// Dual edges whose shared primal edge contains city `v`.
    pub fn dual_edges_at(&self, v: usize) -> &[usize] {
        &self.dual_edges_at[v]
    }

    /// Number of connected components of the whole dual graph.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.num_nodes()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut count = self.num_nodes();
        for d in &self.edges {
            let (a, b) = (find(&mut parent, d.t1), find(&mut parent, d.t2));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
        count
    }
}
