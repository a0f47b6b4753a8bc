//! Incremental Bowyer–Watson triangulation.
//!
//! Instead of a finite super-triangle the triangulation is closed with ghost
//! triangles `(a, b, ∞)`, one per convex hull edge, so the super vertices never
//! need coordinates. A point conflicts with a ghost when it lies strictly
//! outside the hull edge, or on its open segment. Points are inserted in index
//! order and only strictly-inside in-circle tests create conflicts, so
//! cocircular ties are resolved by insertion order.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::{ComplexError, Triangle};
use crate::geometry::{in_circle, orient, strictly_between};
use crate::instance::Point;

const GHOST: usize = usize::MAX;

/// Vertices in counterclockwise order; a ghost stores `GHOST` last and the
/// hull edge `(v[0], v[1])` with the outside on its left.
type Face = [usize; 3];

struct Mesh<'a> {
    pts: &'a [Point],
    faces: Vec<Face>,
}

impl Mesh<'_> {
    fn in_conflict(&self, f: &Face, p: usize) -> bool {
        let q = &self.pts[p];
        if f[2] == GHOST {
            let (a, b) = (&self.pts[f[0]], &self.pts[f[1]]);
            match orient(a, b, q) {
                Ordering::Greater => true,
                Ordering::Equal => strictly_between(a, b, q),
                Ordering::Less => false,
            }
        } else {
            let [a, b, c] = f.map(|i| &self.pts[i]);
            in_circle(a, b, c, q) == Ordering::Greater
        }
    }

    fn insert(&mut self, p: usize) -> Result<(), ComplexError> {
        let (conflict, keep): (Vec<Face>, Vec<Face>) = self
            .faces
            .iter()
            .partition(|f| self.in_conflict(f, p));
        if conflict.is_empty() {
            return Err(ComplexError::DegenerateGeometry(format!(
                "point {p} conflicts with no triangle"
            )));
        }
        let directed: HashSet<(usize, usize)> = conflict
            .iter()
            .flat_map(|f| [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])])
            .collect();
        let mut faces = keep;
        for &(u, v) in &directed {
            if directed.contains(&(v, u)) {
                continue;
            }
            let face = if u == GHOST {
                [v, p, GHOST]
            } else if v == GHOST {
                [p, u, GHOST]
            } else {
                if orient(&self.pts[u], &self.pts[v], &self.pts[p]) != Ordering::Greater {
                    return Err(ComplexError::DegenerateGeometry(format!(
                        "cavity of point {p} is not star-shaped at edge ({u},{v})"
                    )));
                }
                [u, v, p]
            };
            faces.push(face);
        }
        self.faces = faces;
        Ok(())
    }
}

/// Delaunay triangles of `pts` (indices into the slice).
pub fn delaunay_triangles(pts: &[Point]) -> Result<Vec<Triangle>, ComplexError> {
    if pts.len() < 3 {
        return Err(ComplexError::DegenerateGeometry(format!(
            "{} points cannot be triangulated",
            pts.len()
        )));
    }
    {
        let mut seen = HashSet::new();
        for (i, p) in pts.iter().enumerate() {
            if !seen.insert((p.x.to_bits(), p.y.to_bits())) {
                return Err(ComplexError::DegenerateGeometry(format!(
                    "point {i} duplicates an earlier point"
                )));
            }
        }
    }
    let third = (2..pts.len())
        .find(|&k| orient(&pts[0], &pts[1], &pts[k]) != Ordering::Equal)
        .ok_or_else(|| ComplexError::DegenerateGeometry("all points are collinear".into()))?;
    let (a, b) = match orient(&pts[0], &pts[1], &pts[third]) {
        Ordering::Greater => (0, 1),
        _ => (1, 0),
    };
    let mut mesh = Mesh {
        pts,
        faces: vec![
            [a, b, third],
            [b, a, GHOST],
            [third, b, GHOST],
            [a, third, GHOST],
        ],
    };
    for p in (2..pts.len()).filter(|&p| p != third) {
        mesh.insert(p)?;
    }
    let mut tris: Vec<Triangle> = mesh
        .faces
        .iter()
        .filter(|f| f[2] != GHOST)
        .map(|f| Triangle::new(f[0], f[1], f[2]))
        .collect::<Result<_, _>>()?;
    tris.sort_unstable();
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::hull_size;

    fn grid(w: usize, h: usize) -> Vec<Point> {
        (0..h)
            .flat_map(|y| (0..w).map(move |x| Point::new(x as f64, y as f64)))
            .collect()
    }

    #[test]
    fn collinear_input_is_degenerate() {
        let pts: Vec<Point> = (0..5).map(|i| Point::new(i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(
            delaunay_triangles(&pts),
            Err(ComplexError::DegenerateGeometry(_))
        ));
    }

    #[test]
    fn duplicate_points_are_degenerate() {
        let pts = vec![Point::new(0., 0.), Point::new(1., 0.), Point::new(0., 1.), Point::new(1., 0.)];
        assert!(delaunay_triangles(&pts).is_err());
    }

    #[test]
    fn grid_has_euler_count() {
        // Heavily cocircular input; hull has 4 corners, collinear hull points
        // still lie on hull edges, so the count uses all boundary points.
        let pts = grid(5, 4);
        let tris = delaunay_triangles(&pts).unwrap();
        let boundary = 2 * (5 + 4) - 4;
        assert_eq!(tris.len(), 2 * pts.len() - 2 - boundary);
    }

    #[test]
    fn collinear_prefix_then_apex() {
        let mut pts: Vec<Point> = (0..4).map(|i| Point::new(i as f64, 0.0)).collect();
        pts.push(Point::new(1.5, 1.0));
        let tris = delaunay_triangles(&pts).unwrap();
        assert_eq!(tris.len(), 3);
    }

    #[test]
    fn nested_hexagons_count() {
        let inst = crate::instance::TspInstance::nested_hexagons();
        let pts = inst.coords().unwrap();
        let tris = delaunay_triangles(pts).unwrap();
        assert_eq!(tris.len(), 2 * 13 - 2 - hull_size(pts));
    }
}
