//! Surface-based MILP builders.
//!
//! The general model lives on the triangle–edge incidence graph and works for
//! any candidate complex; the planar model lives on the triangle adjacency
//! graph and needs every primal edge to lie in at most two candidates. Both
//! select `N − 2` triangles forming a disk and minimize the length of its
//! boundary, with the global tree enforced by single-commodity flow or by MTZ
//! ordering on a rooted arborescence.

use thiserror::Error;

use crate::complex::{DualGraph, IncidenceGraph, TriangleSet};
use crate::model::{
    MilpModel, ModelKind, ModelMeta, Sense, TreeNode, TreeVariant, VarKind, VarRole,
};

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("need at least {need} candidate triangles for N={n}, have {have}")]
    TooFewTriangles { have: usize, need: usize, n: usize },
    #[error("instance has {n} cities; models need at least {min}")]
    TooFewCities { n: usize, min: usize },
    #[error("edge set does not connect all {n} cities")]
    DisconnectedEdgeSet { n: usize },
}

/// Triangles allowed to carry the root of the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCandidates {
    /// City of minimum degree in the candidate edge universe.
    pub city: usize,
    /// All candidate triangles containing that city, ascending.
    pub triangles: Vec<usize>,
}

/// Picks the lowest-indexed city of minimum degree in the edge universe and
/// returns the triangles around it.
pub fn root_candidates(ts: &TriangleSet) -> RootCandidates {
    let deg = ts.vertex_degrees();
    let city = (0..deg.len())
        .min_by_key(|&v| (deg[v], v))
        .unwrap_or(0);
    let triangles = ts
        .triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| t.contains(city))
        .map(|(i, _)| i)
        .collect();
    RootCandidates { city, triangles }
}

fn check_sizes(n: usize, have: usize) -> Result<(), ModelError> {
    if n < crate::instance::MIN_CITIES {
        return Err(ModelError::TooFewCities {
            n,
            min: crate::instance::MIN_CITIES,
        });
    }
    if have < n - 2 {
        return Err(ModelError::TooFewTriangles {
            have,
            need: n - 2,
            n,
        });
    }
    Ok(())
}

/// Undirected graph on which a rooted spanning tree of the active nodes is
/// imposed: every `link` variable equals the sum of its two arc directions.
struct TreeGraph {
    /// Node and the column of its activity indicator.
    nodes: Vec<(TreeNode, usize)>,
    /// `(node u, node v, column of the link variable)`.
    links: Vec<(usize, usize, usize)>,
    /// `(node, triangle index)` of every root candidate.
    roots: Vec<(usize, usize)>,
    /// Number of active nodes in any feasible solution.
    active: f64,
}

fn add_tree(m: &mut MilpModel, g: &TreeGraph, variant: TreeVariant) {
    let k = g.active;
    let mut root_of = vec![None; g.nodes.len()];
    let mut root_terms = Vec::with_capacity(g.roots.len());
    for &(node, t) in &g.roots {
        let r = m.add_binary(format!("r_{t}"), 0.0, VarRole::Root { t });
        root_of[node] = Some(r);
        root_terms.push((r, 1.0));
        m.add_con(
            format!("root_le_t{t}"),
            vec![(r, 1.0), (g.nodes[node].1, -1.0)],
            Sense::Le,
            0.0,
        );
    }
    m.add_con("root_one".into(), root_terms, Sense::Eq, 1.0);

    // (arc column, flow column) per incoming / outgoing arc of each node.
    let mut incoming: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); g.nodes.len()];
    let mut outgoing: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); g.nodes.len()];
    let mut arcs = Vec::with_capacity(2 * g.links.len());
    for &(u, v, link) in &g.links {
        let (nu, nv) = (g.nodes[u].0, g.nodes[v].0);
        let mut pair = [0; 2];
        for (slot, (s, d, ns, nd)) in [(u, v, nu, nv), (v, u, nv, nu)].into_iter().enumerate() {
            let a = m.add_binary(
                format!("aF_{ns}_{nd}"),
                0.0,
                VarRole::TreeArc { from: ns, to: nd },
            );
            pair[slot] = a;
            let f = match variant {
                TreeVariant::Flow => {
                    let f = m.add_var(
                        format!("f_{ns}_{nd}"),
                        VarKind::Continuous,
                        0.0,
                        k,
                        0.0,
                        VarRole::Flow { from: ns, to: nd },
                    );
                    m.add_con(
                        format!("cap_{ns}_{nd}"),
                        vec![(f, 1.0), (a, -k)],
                        Sense::Le,
                        0.0,
                    );
                    Some(f)
                }
                TreeVariant::Mtz => None,
            };
            outgoing[s].push((a, f));
            incoming[d].push((a, f));
            arcs.push((s, d, a));
        }
        m.add_con(
            format!("dir_{nu}_{nv}"),
            vec![(pair[0], 1.0), (pair[1], 1.0), (link, -1.0)],
            Sense::Eq,
            0.0,
        );
    }

    for (i, &(node, active)) in g.nodes.iter().enumerate() {
        let mut indeg: Vec<(usize, f64)> = incoming[i].iter().map(|&(a, _)| (a, 1.0)).collect();
        indeg.push((active, -1.0));
        if let Some(r) = root_of[i] {
            indeg.push((r, 1.0));
        }
        m.add_con(format!("indeg_{node}"), indeg, Sense::Eq, 0.0);

        if variant == TreeVariant::Flow {
            let mut cons: Vec<(usize, f64)> = incoming[i]
                .iter()
                .map(|&(_, f)| (f.unwrap(), 1.0))
                .chain(outgoing[i].iter().map(|&(_, f)| (f.unwrap(), -1.0)))
                .collect();
            cons.push((active, -1.0));
            if let Some(r) = root_of[i] {
                cons.push((r, k));
            }
            m.add_con(format!("flow_{node}"), cons, Sense::Eq, 0.0);
        }
    }

    if variant == TreeVariant::Mtz {
        let levels: Vec<usize> = g
            .nodes
            .iter()
            .map(|&(node, _)| {
                m.add_var(
                    format!("u_{node}"),
                    VarKind::Continuous,
                    0.0,
                    k,
                    0.0,
                    VarRole::Level { node },
                )
            })
            .collect();
        // u_child ≥ u_parent + 1 − K (1 − a)
        for (s, d, a) in arcs {
            let (ns, nd) = (g.nodes[s].0, g.nodes[d].0);
            m.add_con(
                format!("mtz_{ns}_{nd}"),
                vec![(levels[d], 1.0), (levels[s], -1.0), (a, -k)],
                Sense::Ge,
                1.0 - k,
            );
        }
        for &(node, t) in &g.roots {
            m.add_con(
                format!("uroot_t{t}"),
                vec![(levels[node], 1.0), (root_of[node].unwrap(), k)],
                Sense::Le,
                k,
            );
        }
    }
}

/// General surface model on the triangle–edge incidence graph.
pub fn build_general(inc: &IncidenceGraph, variant: TreeVariant) -> Result<MilpModel, ModelError> {
    check_sizes(inc.n_cities(), inc.num_triangles())?;
    Ok(assemble_general(inc, variant))
}

/// Like [`build_general`] but without the `|U| ≥ N − 2` precheck, so an
/// undersized complex reaches the solver and is reported as infeasible there.
pub fn build_general_unchecked(
    inc: &IncidenceGraph,
    variant: TreeVariant,
) -> Result<MilpModel, ModelError> {
    check_sizes(inc.n_cities(), usize::MAX)?;
    Ok(assemble_general(inc, variant))
}

fn assemble_general(inc: &IncidenceGraph, variant: TreeVariant) -> MilpModel {
    let n = inc.n_cities();
    let nt = inc.num_triangles();
    let mut m = MilpModel::new(ModelMeta {
        kind: ModelKind::SurfaceGeneral,
        tree: Some(variant),
        instance: inc.instance_name().to_string(),
        n,
    });

    let x: Vec<usize> = (0..nt)
        .map(|t| m.add_binary(format!("x_t{t}"), 0.0, VarRole::Triangle { t }))
        .collect();
    let y: Vec<usize> = inc
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            m.add_binary(
                format!("y_{}_{}", e.a, e.b),
                2.0 * inc.edge_length(i),
                VarRole::Edge { a: e.a, b: e.b },
            )
        })
        .collect();
    let z: Vec<usize> = inc
        .arcs()
        .iter()
        .map(|arc| {
            let e = inc.edges()[arc.edge];
            m.add_binary(
                format!("z_{}_{}_{}", arc.tri, e.a, e.b),
                -inc.edge_length(arc.edge),
                VarRole::Incidence {
                    t: arc.tri,
                    a: e.a,
                    b: e.b,
                },
            )
        })
        .collect();

    let arc_tag = |i: usize| {
        let arc = inc.arcs()[i];
        let e = inc.edges()[arc.edge];
        format!("t{}_{}_{}", arc.tri, e.a, e.b)
    };
    for (i, arc) in inc.arcs().iter().enumerate() {
        let tag = arc_tag(i);
        m.add_con(
            format!("link_x_{tag}"),
            vec![(z[i], 1.0), (x[arc.tri], -1.0)],
            Sense::Le,
            0.0,
        );
        m.add_con(
            format!("link_y_{tag}"),
            vec![(z[i], 1.0), (y[arc.edge], -1.0)],
            Sense::Le,
            0.0,
        );
    }
    for t in 0..nt {
        let mut terms: Vec<(usize, f64)> =
            inc.arcs_of_triangle(t).iter().map(|&a| (z[a], 1.0)).collect();
        terms.push((x[t], -3.0));
        m.add_con(format!("closure_t{t}"), terms, Sense::Eq, 0.0);
    }
    m.add_con(
        "card_tri".into(),
        x.iter().map(|&v| (v, 1.0)).collect(),
        Sense::Eq,
        (n - 2) as f64,
    );
    m.add_con(
        "card_edge".into(),
        y.iter().map(|&v| (v, 1.0)).collect(),
        Sense::Eq,
        (2 * n - 3) as f64,
    );
    for (i, e) in inc.edges().iter().enumerate() {
        let deg: Vec<(usize, f64)> = inc.arcs_of_edge(i).iter().map(|&a| (z[a], 1.0)).collect();
        let mut lo = deg.clone();
        lo.push((y[i], -1.0));
        m.add_con(format!("manifold_lo_{}_{}", e.a, e.b), lo, Sense::Ge, 0.0);
        let mut hi = deg;
        hi.push((y[i], -2.0));
        m.add_con(format!("manifold_hi_{}_{}", e.a, e.b), hi, Sense::Le, 0.0);
    }
    for v in 0..n {
        let terms: Vec<(usize, f64)> = inc
            .triangles_at(v)
            .iter()
            .map(|&t| (x[t], 1.0))
            .chain(inc.edges_at(v).iter().map(|&e| (y[e], 1.0)))
            .chain(inc.conn_at(v).iter().map(|&a| (z[a], -1.0)))
            .collect();
        m.add_con(format!("euler_v{v}"), terms, Sense::Eq, 1.0);
    }

    let roots = root_candidates(inc.triangles());
    let mut nodes: Vec<(TreeNode, usize)> = (0..nt)
        .map(|t| (TreeNode::Triangle { index: t }, x[t]))
        .collect();
    nodes.extend(
        inc.edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (TreeNode::edge(*e), y[i])),
    );
    let tree = TreeGraph {
        nodes,
        links: inc
            .arcs()
            .iter()
            .enumerate()
            .map(|(i, arc)| (arc.tri, nt + arc.edge, z[i]))
            .collect(),
        roots: roots.triangles.iter().map(|&t| (t, t)).collect(),
        active: (3 * n - 5) as f64,
    };
    add_tree(&mut m, &tree, variant);
    m
}

/// Planar surface model on the triangle adjacency graph.
pub fn build_planar(dual: &DualGraph, variant: TreeVariant) -> Result<MilpModel, ModelError> {
    check_sizes(dual.n_cities(), dual.num_nodes())?;
    Ok(assemble_planar(dual, variant))
}

/// Planar counterpart of [`build_general_unchecked`].
pub fn build_planar_unchecked(
    dual: &DualGraph,
    variant: TreeVariant,
) -> Result<MilpModel, ModelError> {
    check_sizes(dual.n_cities(), usize::MAX)?;
    Ok(assemble_planar(dual, variant))
}

fn assemble_planar(dual: &DualGraph, variant: TreeVariant) -> MilpModel {
    let n = dual.n_cities();
    let nt = dual.num_nodes();
    let mut m = MilpModel::new(ModelMeta {
        kind: ModelKind::SurfacePlanar,
        tree: Some(variant),
        instance: dual.instance_name().to_string(),
        n,
    });
    let x: Vec<usize> = (0..nt)
        .map(|t| m.add_binary(format!("x_t{t}"), dual.perimeter(t), VarRole::Triangle { t }))
        .collect();
    let w: Vec<usize> = dual
        .edges()
        .iter()
        .map(|d| {
            m.add_binary(
                format!("wD_{}_{}", d.t1, d.t2),
                -2.0 * d.length,
                VarRole::DualEdge { t1: d.t1, t2: d.t2 },
            )
        })
        .collect();
    for (i, d) in dual.edges().iter().enumerate() {
        for t in [d.t1, d.t2] {
            m.add_con(
                format!("link_wD_{}_{}_t{t}", d.t1, d.t2),
                vec![(w[i], 1.0), (x[t], -1.0)],
                Sense::Le,
                0.0,
            );
        }
    }
    m.add_con(
        "card_tri".into(),
        x.iter().map(|&v| (v, 1.0)).collect(),
        Sense::Eq,
        (n - 2) as f64,
    );
    m.add_con(
        "card_dual".into(),
        w.iter().map(|&v| (v, 1.0)).collect(),
        Sense::Eq,
        (n - 3) as f64,
    );
    for v in 0..n {
        let terms: Vec<(usize, f64)> = dual
            .triangles_at(v)
            .iter()
            .map(|&t| (x[t], 1.0))
            .chain(dual.dual_edges_at(v).iter().map(|&d| (w[d], -1.0)))
            .collect();
        m.add_con(format!("euler_v{v}"), terms, Sense::Eq, 1.0);
    }
    let roots = root_candidates(dual.triangles());
    let tree = TreeGraph {
        nodes: (0..nt)
            .map(|t| (TreeNode::Triangle { index: t }, x[t]))
            .collect(),
        links: dual
            .edges()
            .iter()
            .enumerate()
            .map(|(i, d)| (d.t1, d.t2, w[i]))
            .collect(),
        roots: roots.triangles.iter().map(|&t| (t, t)).collect(),
        active: (n - 2) as f64,
    };
    add_tree(&mut m, &tree, variant);
    m
}
