//! Solver-agnostic MILP container shared by all model builders.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::Edge;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// A node of the graph a tree constraint is imposed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Triangle { index: usize },
    Edge { a: usize, b: usize },
}

impl TreeNode {
    pub fn edge(e: Edge) -> Self {
        TreeNode::Edge { a: e.a, b: e.b }
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeNode::Triangle { index } => write!(f, "t{index}"),
            TreeNode::Edge { a, b } => write!(f, "e{a}_{b}"),
        }
    }
}

/// Semantic meaning of a variable, used to decode solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VarRole {
    /// `x_t`: triangle selected.
    Triangle { t: usize },
    /// `y_e`: primal edge active.
    Edge { a: usize, b: usize },
    /// `z_te`: incidence active.
    Incidence { t: usize, a: usize, b: usize },
    /// `w_d`: dual edge between two selected triangles.
    DualEdge { t1: usize, t2: usize },
    /// `a_uv`: directed tree arc.
    TreeArc { from: TreeNode, to: TreeNode },
    /// `f_uv`: flow on a directed tree arc.
    Flow { from: TreeNode, to: TreeNode },
    /// `r_t`: root indicator.
    Root { t: usize },
    /// `u_i`: ordering level of a tree node.
    Level { node: TreeNode },
    /// Directed tour arc `i → j` of the edge formulation.
    TourArc { from: usize, to: usize },
    /// MTZ position of a city in the edge formulation.
    CityLevel { city: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
    pub obj: f64,
    pub role: VarRole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// Which builder produced a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelKind {
    SurfaceGeneral,
    SurfacePlanar,
    LiftedMtz,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::SurfaceGeneral => "surface",
            ModelKind::SurfacePlanar => "surface-planar",
            ModelKind::LiftedMtz => "mtz-baseline",
        })
    }
}

/// How the surface models enforce the global tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TreeVariant {
    Flow,
    Mtz,
}

impl fmt::Display for TreeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TreeVariant::Flow => "flow",
            TreeVariant::Mtz => "mtz",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub kind: ModelKind,
    pub tree: Option<TreeVariant>,
    pub instance: String,
    pub n: usize,
}

/// A minimization MILP. Variable and constraint names are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct MilpModel {
    pub meta: ModelMeta,
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    index: HashMap<String, usize>,
}

#[derive(Serialize)]
struct DecodeSidecar<'a> {
    meta: &'a ModelMeta,
    variables: BTreeMap<&'a str, &'a VarRole>,
}

impl MilpModel {
    pub fn new(meta: ModelMeta) -> Self {
        MilpModel {
            meta,
            vars: Vec::new(),
            cons: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Declares a variable and returns its column index.
    ///
    /// Panics on a duplicate name: builders generate names from distinct
    /// graph elements, so a clash is a builder bug.
    pub fn add_var(
        &mut self,
        name: String,
        kind: VarKind,
        lower: f64,
        upper: f64,
        obj: f64,
        role: VarRole,
    ) -> usize {
        let id = self.vars.len();
        let prev = self.index.insert(name.clone(), id);
        assert!(prev.is_none(), "duplicate variable name {name}");
        self.vars.push(Variable {
            name,
            kind,
            lower,
            upper,
            obj,
            role,
        });
        id
    }

    pub fn add_binary(&mut self, name: String, obj: f64, role: VarRole) -> usize {
        self.add_var(name, VarKind::Binary, 0.0, 1.0, obj, role)
    }

    pub fn add_con(&mut self, name: String, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        debug_assert!(terms.iter().all(|(v, _)| *v < self.vars.len()));
        self.cons.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_cons(&self) -> usize {
        self.cons.len()
    }

    pub fn num_nonzeros(&self) -> usize {
        self.cons.iter().map(|c| c.terms.len()).sum()
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.cons.iter().find(|c| c.name == name)
    }

    /// Objective value of a full assignment (indexed like [`Self::vars`]).
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.vars.iter().zip(values).map(|(v, x)| v.obj * x).sum()
    }

    /// Names of bounds, integrality and rows violated by `values` beyond `tol`.
    pub fn violations(&self, values: &[f64], tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (v, &x) in self.vars.iter().zip(values) {
            if x < v.lower - tol || x > v.upper + tol {
                out.push(format!("bound {}", v.name));
            }
            if v.kind == VarKind::Binary && (x - x.round()).abs() > tol {
                out.push(format!("integrality {}", v.name));
            }
        }
        for c in &self.cons {
            let lhs: f64 = c.terms.iter().map(|&(v, a)| a * values[v]).sum();
            let ok = match c.sense {
                Sense::Le => lhs <= c.rhs + tol,
                Sense::Ge => lhs >= c.rhs - tol,
                Sense::Eq => (lhs - c.rhs).abs() <= tol,
            };
            if !ok {
                out.push(c.name.clone());
            }
        }
        out
    }

    /// Copy with the named variables fixed to the given values.
    pub fn with_fixed(&self, fixes: &[(String, f64)]) -> Option<Self> {
        let mut m = self.clone();
        for (name, value) in fixes {
            let id = m.var_index(name)?;
            m.vars[id].lower = *value;
            m.vars[id].upper = *value;
        }
        Some(m)
    }

    /// JSON map from variable name to semantic role.
    pub fn decode_map_json(&self) -> String {
        let sidecar = DecodeSidecar {
            meta: &self.meta,
            variables: self.vars.iter().map(|v| (v.name.as_str(), &v.role)).collect(),
        };
        serde_json::to_string_pretty(&sidecar).expect("decode map serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> MilpModel {
        let mut m = MilpModel::new(ModelMeta {
            kind: ModelKind::SurfaceGeneral,
            tree: None,
            instance: "t".into(),
            n: 4,
        });
        let x = m.add_binary("x_t0".into(), 1.0, VarRole::Triangle { t: 0 });
        let y = m.add_var("u_t0".into(), VarKind::Continuous, 0.0, 5.0, 0.0, VarRole::Level {
            node: TreeNode::Triangle { index: 0 },
        });
        m.add_con("c".into(), vec![(x, 1.0), (y, -1.0)], Sense::Le, 0.0);
        m
    }

    #[test]
    fn violations_report_rows_and_integrality() {
        let m = tiny();
        assert!(m.violations(&[1.0, 1.0], 1e-9).is_empty());
        assert_eq!(m.violations(&[1.0, 0.5], 1e-9), vec!["c".to_string()]);
        assert_eq!(m.violations(&[0.5, 1.0], 1e-9), vec!["integrality x_t0".to_string()]);
        assert_eq!(m.objective_value(&[1.0, 3.0]), 1.0);
    }

    #[test]
    #[should_panic(expected = "duplicate variable")]
    fn duplicate_names_panic() {
        let mut m = tiny();
        m.add_binary("x_t0".into(), 0.0, VarRole::Triangle { t: 0 });
    }

    #[test]
    fn fixing_and_decode_map() {
        let m = tiny();
        let f = m.with_fixed(&[("x_t0".into(), 0.0)]).unwrap();
        assert_eq!(f.vars()[0].upper, 0.0);
        assert!(m.with_fixed(&[("nope".into(), 0.0)]).is_none());
        let json = m.decode_map_json();
        assert!(json.contains("\"x_t0\"") && json.contains("\"triangle\""));
    }
}
