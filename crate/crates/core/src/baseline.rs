//! Lifted-MTZ edge formulation (Desrochers–Laporte lifting) on an arbitrary
//! edge set, used as the conventional comparison model.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::boundary::{DecodeError, Tour};
use crate::complex::{Edge, TriangleSet};
use crate::instance::TspInstance;
use crate::model::{MilpModel, ModelKind, ModelMeta, Sense, VarKind, VarRole};
use crate::solve::MilpSolution;
use crate::surface_model::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeSetSource {
    Complete,
    DelaunayEdges,
    Custom,
}

/// Undirected candidate edges, sorted and without duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSet {
    edges: Vec<Edge>,
    source: EdgeSetSource,
}

impl EdgeSet {
    pub fn new(edges: impl IntoIterator<Item = Edge>, source: EdgeSetSource) -> Self {
        let edges: BTreeSet<Edge> = edges.into_iter().collect();
        EdgeSet {
            edges: edges.into_iter().collect(),
            source,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| Edge { a: i, b: j }));
        Self::new(edges, EdgeSetSource::Complete)
    }

    /// The edge universe of a triangle set (Delaunay edges for a Delaunay
    /// complex).
    pub fn from_complex(ts: &TriangleSet) -> Self {
        Self::new(ts.edge_universe().iter().copied(), EdgeSetSource::DelaunayEdges)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn source(&self) -> EdgeSetSource {
        self.source
    }

    /// Every city in `0..n` reachable from city 0.
    pub fn connects(&self, n: usize) -> bool {
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            if e.b >= n {
                return false;
            }
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        if n > 0 {
            seen[0] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Builds the lifted MTZ model with city 0 as depot:
///
/// * binaries `x_i_j`, `x_j_i` per undirected edge, cost `L_ij` each;
/// * out- and in-degree one at every city;
/// * `x_i_j + x_j_i ≤ 1` per edge;
/// * levels `u_i ∈ [1, N−1]` for `i ≠ 0` and, for every arc between
///   non-depot cities, `u_i − u_j + (N−1) x_i_j + (N−3) x_j_i ≤ N − 2`.
pub fn build_lifted_mtz(inst: &TspInstance, es: &EdgeSet) -> Result<MilpModel, ModelError> {
    let n = inst.n();
    if n < 3 {
        return Err(ModelError::TooFewCities { n, min: 3 });
    }
    if !es.connects(n) {
        return Err(ModelError::DisconnectedEdgeSet { n });
    }
    let mut m = MilpModel::new(ModelMeta {
        kind: ModelKind::LiftedMtz,
        tree: None,
        instance: inst.name().to_string(),
        n,
    });
    let mut out_arcs = vec![Vec::new(); n];
    let mut in_arcs = vec![Vec::new(); n];
    let mut pairs = Vec::with_capacity(es.edges().len());
    for e in es.edges() {
        let len = inst.d(e.a, e.b);
        let mut pair = [0; 2];
        for (k, (i, j)) in [(e.a, e.b), (e.b, e.a)].into_iter().enumerate() {
            let v = m.add_binary(format!("x_{i}_{j}"), len, VarRole::TourArc { from: i, to: j });
            out_arcs[i].push(v);
            in_arcs[j].push(v);
            pair[k] = v;
        }
        pairs.push((*e, pair));
    }
    for v in 0..n {
        m.add_con(
            format!("out_{v}"),
            out_arcs[v].iter().map(|&a| (a, 1.0)).collect(),
            Sense::Eq,
            1.0,
        );
        m.add_con(
            format!("in_{v}"),
            in_arcs[v].iter().map(|&a| (a, 1.0)).collect(),
            Sense::Eq,
            1.0,
        );
    }
    let nf = n as f64;
    let levels: Vec<Option<usize>> = (0..n)
        .map(|i| {
            (i != 0).then(|| {
                m.add_var(
                    format!("u_{i}"),
                    VarKind::Continuous,
                    1.0,
                    nf - 1.0,
                    0.0,
                    VarRole::CityLevel { city: i },
                )
            })
        })
        .collect();
    for (e, [ab, ba]) in pairs {
        m.add_con(
            format!("two_cycle_{}_{}", e.a, e.b),
            vec![(ab, 1.0), (ba, 1.0)],
            Sense::Le,
            1.0,
        );
        if let (Some(ua), Some(ub)) = (levels[e.a], levels[e.b]) {
            for (i, j, uij, uji, xij, xji) in [(e.a, e.b, ua, ub, ab, ba), (e.b, e.a, ub, ua, ba, ab)] {
                m.add_con(
                    format!("mtz_{i}_{j}"),
                    vec![(uij, 1.0), (uji, -1.0), (xij, nf - 1.0), (xji, nf - 3.0)],
                    Sense::Le,
                    nf - 2.0,
                );
            }
        }
    }
    Ok(m)
}

/// Follows the selected arcs (`x_i_j > 0.5`) from city 0; the walk must
/// return to 0 after visiting every city once.
pub fn decode_tour(
    model: &MilpModel,
    inst: &TspInstance,
    sol: &MilpSolution,
) -> Result<Tour, DecodeError> {
    if !sol.status.has_solution() {
        return Err(DecodeError::NoSolution(sol.status.to_string()));
    }
    let n = inst.n();
    let mut succ = vec![None; n];
    for v in model.vars() {
        if let VarRole::TourArc { from, to } = v.role {
            let x = sol
                .value(&v.name)
                .ok_or_else(|| DecodeError::MissingVariable(v.name.clone()))?;
            if x > 0.5 {
                if succ[from].is_some() {
                    return Err(DecodeError::BadTour(format!("city {from} has two successors")));
                }
                succ[from] = Some(to);
            }
        }
    }
    let mut order = vec![0];
    let mut cur = 0;
    loop {
        let next = succ[cur]
            .ok_or_else(|| DecodeError::BadTour(format!("city {cur} has no successor")))?;
        if next == 0 {
            break;
        }
        if order.len() == n || order.contains(&next) {
            return Err(DecodeError::BadTour(format!("revisits city {next}")));
        }
        order.push(next);
        cur = next;
    }
    if order.len() != n {
        return Err(DecodeError::BadTour(format!(
            "cycle through 0 has {} of {n} cities",
            order.len()
        )));
    }
    Ok(Tour::from_cycle(&order, inst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::RandomMode;

    #[test]
    fn complete_edge_set_model_size() {
        let inst = TspInstance::random(5, 0, RandomMode::NonMetric).unwrap();
        let m = build_lifted_mtz(&inst, &EdgeSet::complete(5)).unwrap();
        assert_eq!(m.num_vars(), 20 + 4);
        // degrees + two-cycle + lifted arcs among the 4 non-depot cities
        assert_eq!(m.num_cons(), 10 + 10 + 12);
    }

    #[test]
    fn disconnected_edge_set_is_rejected() {
        let inst = TspInstance::random(4, 0, RandomMode::NonMetric).unwrap();
        let es = EdgeSet::new([Edge::new(0, 1), Edge::new(2, 3)], EdgeSetSource::Custom);
        assert_eq!(
            build_lifted_mtz(&inst, &es).unwrap_err(),
            ModelError::DisconnectedEdgeSet { n: 4 }
        );
    }

    #[test]
    fn hand_tour_is_feasible() {
        let inst = TspInstance::random(5, 3, RandomMode::NonMetric).unwrap();
        let m = build_lifted_mtz(&inst, &EdgeSet::complete(5)).unwrap();
        let tour = [0, 2, 4, 1, 3];
        let mut vals = vec![0.0; m.num_vars()];
        for k in 0..5 {
            let (i, j) = (tour[k], tour[(k + 1) % 5]);
            vals[m.var_index(&format!("x_{i}_{j}")).unwrap()] = 1.0;
            if j != 0 {
                vals[m.var_index(&format!("u_{j}")).unwrap()] = (k + 1) as f64;
            }
        }
        assert!(m.violations(&vals, 1e-9).is_empty());
        assert_eq!(m.objective_value(&vals), inst.tour_length(&tour));

        let sol = MilpSolution {
            status: crate::solve::SolveStatus::Optimal,
            objective: Some(m.objective_value(&vals)),
            best_bound: None,
            values: m.vars().iter().zip(&vals).map(|(v, x)| (v.name.clone(), *x)).collect(),
            stats: crate::solve::SolveStats {
                nodes: None,
                runtime_s: 0.0,
                backend: "test".into(),
            },
        };
        let t = decode_tour(&m, &inst, &sol).unwrap();
        assert_eq!(t.order, vec![0, 2, 4, 1, 3]);
    }

    #[test]
    fn subtours_fail_to_decode() {
        let inst = TspInstance::random(6, 3, RandomMode::NonMetric).unwrap();
        let m = build_lifted_mtz(&inst, &EdgeSet::complete(6)).unwrap();
        let mut values: std::collections::BTreeMap<String, f64> =
            m.vars().iter().map(|v| (v.name.clone(), 0.0)).collect();
        for (i, j) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            values.insert(format!("x_{i}_{j}"), 1.0);
        }
        let sol = MilpSolution {
            status: crate::solve::SolveStatus::Feasible,
            objective: None,
            best_bound: None,
            values,
            stats: crate::solve::SolveStats {
                nodes: None,
                runtime_s: 0.0,
                backend: "test".into(),
            },
        };
        assert!(matches!(decode_tour(&m, &inst, &sol), Err(DecodeError::BadTour(_))));
    }
}
