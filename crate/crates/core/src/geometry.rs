//! Exact orientation and in-circle predicates over [`Point`]s.

use std::cmp::Ordering;

use robust::Coord;

use crate::instance::Point;

fn coord(p: &Point) -> Coord<f64> {
    Coord { x: p.x, y: p.y }
}

/// Sign of the signed area of `(a, b, c)`: `Greater` for a left turn.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    robust::orient2d(coord(a), coord(b), coord(c))
        .partial_cmp(&0.0)
        .unwrap_or(Ordering::Equal)
}

/// `Greater` when `d` lies strictly inside the circumcircle of the
/// counterclockwise triangle `(a, b, c)`.
pub fn in_circle(a: &Point, b: &Point, c: &Point, d: &Point) -> Ordering {
    robust::incircle(coord(a), coord(b), coord(c), coord(d))
        .partial_cmp(&0.0)
        .unwrap_or(Ordering::Equal)
}

/// `p` lies on the open segment `(a, b)`. Assumes `a, b, p` collinear.
pub fn strictly_between(a: &Point, b: &Point, p: &Point) -> bool {
    let within = |lo: f64, hi: f64, v: f64| lo.min(hi) < v && v < lo.max(hi);
    if a.x != b.x {
        within(a.x, b.x, p.x)
    } else {
        within(a.y, b.y, p.y)
    }
}

/// `p` lies on the closed segment `[a, b]`. Assumes `a, b, p` collinear.
fn on_closed_segment(a: &Point, b: &Point, p: &Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let nonzero = [o1, o2, o3, o4].iter().all(|o| *o != Ordering::Equal);
    if nonzero && o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == Ordering::Equal && on_closed_segment(a, b, c))
        || (o2 == Ordering::Equal && on_closed_segment(a, b, d))
        || (o3 == Ordering::Equal && on_closed_segment(c, d, a))
        || (o4 == Ordering::Equal && on_closed_segment(c, d, b))
}

/// Counterclockwise angular order of directions `p → q1` and `p → q2`,
/// starting from the positive x axis. Exact.
pub fn angular_cmp(p: &Point, q1: &Point, q2: &Point) -> Ordering {
    let upper = |q: &Point| q.y > p.y || (q.y == p.y && q.x > p.x);
    match (upper(q1), upper(q2)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => match orient(p, q1, q2) {
            Ordering::Greater => Ordering::Less,
            Ordering::Less => Ordering::Greater,
            Ordering::Equal => Ordering::Equal,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orient(&p(0., 0.), &p(1., 0.), &p(0., 1.)), Ordering::Greater);
        assert_eq!(orient(&p(0., 0.), &p(0., 1.), &p(1., 0.)), Ordering::Less);
        assert_eq!(orient(&p(0., 0.), &p(1., 1.), &p(2., 2.)), Ordering::Equal);
    }

    #[test]
    fn incircle_square_is_cocircular() {
        let (a, b, c) = (p(0., 0.), p(1., 0.), p(1., 1.));
        assert_eq!(in_circle(&a, &b, &c, &p(0., 1.)), Ordering::Equal);
        assert_eq!(in_circle(&a, &b, &c, &p(0.5, 0.5)), Ordering::Greater);
        assert_eq!(in_circle(&a, &b, &c, &p(3., 3.)), Ordering::Less);
    }

    #[test]
    fn segment_intersections() {
        let o = p(0., 0.);
        // proper crossing
        assert!(segments_intersect(&o, &p(2., 2.), &p(0., 2.), &p(2., 0.)));
        // disjoint
        assert!(!segments_intersect(&o, &p(1., 0.), &p(0., 1.), &p(1., 1.)));
        // T junction
        assert!(segments_intersect(&o, &p(2., 0.), &p(1., 0.), &p(1., 1.)));
        // collinear overlap
        assert!(segments_intersect(&o, &p(2., 0.), &p(1., 0.), &p(3., 0.)));
        // collinear, apart
        assert!(!segments_intersect(&o, &p(1., 0.), &p(2., 0.), &p(3., 0.)));
    }

    #[test]
    fn angular_order_is_ccw_from_x_axis() {
        let c = p(0., 0.);
        let mut dirs = vec![p(0., -1.), p(-1., 0.), p(1., 0.), p(0., 1.), p(1., 1.)];
        dirs.sort_by(|a, b| angular_cmp(&c, a, b));
        assert_eq!(dirs, vec![p(1., 0.), p(1., 1.), p(0., 1.), p(-1., 0.), p(0., -1.)]);
    }
}
