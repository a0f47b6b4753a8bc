//! Greedy triangulation: insert edges shortest first, skip any edge that
//! meets an accepted edge anywhere but a shared endpoint (collinear overlap
//! counts), then read the triangles off the faces of the planar graph.

use std::cmp::Ordering;

use super::{ComplexError, Edge, Triangle};
use crate::geometry::{angular_cmp, orient, segments_intersect, strictly_between};
use crate::instance::Point;

fn sq_len(p: &Point, q: &Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

fn conflicts(pts: &[Point], e: Edge, f: Edge) -> bool {
    let (a, b, c, d) = (&pts[e.a], &pts[e.b], &pts[f.a], &pts[f.b]);
    let shared = [e.a, e.b].iter().find(|v| f.contains(**v)).copied();
    match shared {
        // Sharing an endpoint is only a conflict if the segments overlap.
        Some(s) => {
            let (u, w) = (
                if e.a == s { e.b } else { e.a },
                if f.a == s { f.b } else { f.a },
            );
            let (s, u, w) = (&pts[s], &pts[u], &pts[w]);
            orient(s, u, w) == Ordering::Equal
                && (u.x - s.x) * (w.x - s.x) + (u.y - s.y) * (w.y - s.y) > 0.0
        }
        None => segments_intersect(a, b, c, d),
    }
}

/// Edges of the greedy triangulation, in insertion order. Ties in length are
/// broken by `(min endpoint, max endpoint)`.
pub fn greedy_edges(pts: &[Point]) -> Vec<Edge> {
    let n = pts.len();
    let mut candidates: Vec<(f64, Edge)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            candidates.push((sq_len(&pts[i], &pts[j]), Edge { a: i, b: j }));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut accepted: Vec<Edge> = Vec::with_capacity(3 * n);
    for (_, e) in candidates {
        if accepted.iter().any(|&f| conflicts(pts, e, f)) {
            continue;
        }
        let passes_through_point = (0..n).any(|k| {
            k != e.a
                && k != e.b
                && orient(&pts[e.a], &pts[e.b], &pts[k]) == Ordering::Equal
                && strictly_between(&pts[e.a], &pts[e.b], &pts[k])
        });
        if !passes_through_point {
            accepted.push(e);
        }
    }
    accepted
}

/// Bounded triangular faces of the planar straight-line graph `edges`.
pub(crate) fn triangular_faces(pts: &[Point], edges: &[Edge]) -> Vec<Triangle> {
    let n = pts.len();
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in edges {
        around[e.a].push(e.b);
        around[e.b].push(e.a);
    }
    for (v, nbrs) in around.iter_mut().enumerate() {
        nbrs.sort_by(|&p, &q| angular_cmp(&pts[v], &pts[p], &pts[q]));
    }
    // next(u→v) = (v→w) with w the clockwise neighbour of u around v, which
    // walks every bounded face counterclockwise.
    let position = |v: usize, u: usize| around[v].iter().position(|&x| x == u).unwrap();
    let next = |u: usize, v: usize| {
        let k = around[v].len();
        let i = position(v, u);
        (v, around[v][(i + k - 1) % k])
    };
    let mut visited = std::collections::HashSet::new();
    let mut tris = Vec::new();
    for &e in edges {
        for start in [(e.a, e.b), (e.b, e.a)] {
            if visited.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = start;
            loop {
                visited.insert(h);
                cycle.push(h.0);
                h = next(h.0, h.1);
                if h == start || cycle.len() > edges.len() * 2 {
                    break;
                }
            }
            if cycle.len() == 3
                && orient(&pts[cycle[0]], &pts[cycle[1]], &pts[cycle[2]]) == Ordering::Greater
            {
                tris.push(Triangle::new(cycle[0], cycle[1], cycle[2]).expect("distinct"));
            }
        }
    }
    tris.sort_unstable();
    tris
}

pub fn greedy_triangles(pts: &[Point]) -> Result<Vec<Triangle>, ComplexError> {
    if pts.len() < 3 {
        return Err(ComplexError::DegenerateGeometry(format!(
            "{} points cannot be triangulated",
            pts.len()
        )));
    }
    if (2..pts.len()).all(|k| orient(&pts[0], &pts[1], &pts[k]) == Ordering::Equal) {
        return Err(ComplexError::DegenerateGeometry("all points are collinear".into()));
    }
    let mut seen = std::collections::HashSet::new();
    if pts.iter().any(|p| !seen.insert((p.x.to_bits(), p.y.to_bits()))) {
        return Err(ComplexError::DegenerateGeometry("duplicate points".into()));
    }
    let edges = greedy_edges(pts);
    Ok(triangular_faces(pts, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_of_a_fan() {
        let mut pts = vec![Point::new(0., 0.)];
        for k in 0..6 {
            let a = (60.0 * k as f64).to_radians();
            pts.push(Point::new(a.cos(), a.sin()));
        }
        let mut edges = Vec::new();
        for k in 1..=6 {
            edges.push(Edge::new(0, k));
            edges.push(Edge::new(k, k % 6 + 1));
        }
        assert_eq!(triangular_faces(&pts, &edges).len(), 6);
    }

    #[test]
    fn collinear_points_are_not_skipped_over() {
        // Three points on a line plus an apex: 0-2 passes through 1.
        let pts = vec![
            Point::new(0., 0.),
            Point::new(1., 0.),
            Point::new(2., 0.),
            Point::new(1., 3.),
        ];
        let edges = greedy_edges(&pts);
        assert!(!edges.contains(&Edge::new(0, 2)));
        assert_eq!(greedy_triangles(&pts).unwrap().len(), 2);
    }

    #[test]
    fn greedy_is_maximal_on_random_points() {
        let inst = crate::instance::TspInstance::random(40, 3, crate::instance::RandomMode::Euclidean)
            .unwrap();
        let pts = inst.coords().unwrap();
        let tris = greedy_triangles(pts).unwrap();
        let h = crate::complex::hull_size(pts);
        assert_eq!(tris.len(), 2 * pts.len() - 2 - h);
    }
}
