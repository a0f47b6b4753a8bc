//! Exhaustive reference solvers for small instances.

use thiserror::Error;

use crate::boundary::{assemble_tour, boundary_edges, boundary_length, verify_surface, Surface, Tour};
use crate::complex::TriangleSet;
use crate::instance::TspInstance;

pub const MAX_TSP_CITIES: usize = 11;
pub const MAX_SURFACE_SUBSETS: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration too large: {what} ({size} > {limit})")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },
}

/// Rearranges `p` into the next permutation in lexicographic order; false
/// after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Minimum tour by enumerating the `(N−1)!/2` undirected tours through
/// city 0. Among equal lengths the lexicographically smallest canonical
/// tour wins.
pub fn brute_force_tsp(inst: &TspInstance) -> Result<Tour, OracleError> {
    let n = inst.n();
    if n > MAX_TSP_CITIES {
        return Err(OracleError::TooLarge {
            what: "cities",
            size: n as u128,
            limit: MAX_TSP_CITIES as u128,
        });
    }
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    loop {
        if rest.len() < 2 || rest[0] < rest[rest.len() - 1] {
            let mut len = inst.d(0, rest[0]);
            for w in rest.windows(2) {
                len += inst.d(w[0], w[1]);
            }
            len += inst.d(rest[rest.len() - 1], 0);
            if best.as_ref().map_or(true, |(b, _)| len < *b) {
                best = Some((len, rest.clone()));
            }
        }
        if !next_permutation(&mut rest) {
            break;
        }
    }
    let (_, rest) = best.expect("at least one tour");
    let mut order = vec![0];
    order.extend(rest);
    Ok(Tour {
        length: inst.tour_length(&order),
        order,
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn check_subset_count(ts: &TriangleSet) -> Result<usize, OracleError> {
    let k = ts.n_cities().saturating_sub(2);
    let size = binomial(ts.len(), k);
    if size > MAX_SURFACE_SUBSETS {
        return Err(OracleError::TooLarge {
            what: "triangle subsets",
            size,
            limit: MAX_SURFACE_SUBSETS,
        });
    }
    Ok(k)
}

/// Every `(N−2)`-subset of the complex that passes [`verify_surface`], as
/// ascending index lists in lexicographic order.
pub fn valid_surface_subsets(ts: &TriangleSet) -> Result<Vec<Vec<usize>>, OracleError> {
    let k = check_subset_count(ts)?;
    let mut out = Vec::new();
    for_each_subset(ts.len(), k, |idx| {
        let s = Surface::from_indices(ts, idx).expect("indices in range");
        if verify_surface(&s).valid {
            out.push(idx.to_vec());
        }
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceOptimum {
    pub indices: Vec<usize>,
    pub surface: Surface,
    pub length: f64,
    pub tour: Tour,
}

/// Shortest boundary over all valid `(N−2)`-subsets, `None` when no subset
/// is a valid disk.
pub fn brute_force_surface(
    inst: &TspInstance,
    ts: &TriangleSet,
) -> Result<Option<SurfaceOptimum>, OracleError> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    for idx in valid_surface_subsets(ts)? {
        let s = Surface::from_indices(ts, &idx).expect("indices in range");
        let len = boundary_length(&s, inst);
        if best.as_ref().map_or(true, |(b, _)| len < *b) {
            best = Some((len, idx));
        }
    }
    Ok(best.map(|(length, indices)| {
        let surface = Surface::from_indices(ts, &indices).expect("indices in range");
        let tour = assemble_tour(&boundary_edges(&surface), inst).expect("valid surface has a tour");
        SurfaceOptimum {
            indices,
            surface,
            length,
            tour,
        }
    }))
}
