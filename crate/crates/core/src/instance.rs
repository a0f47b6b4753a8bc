//! TSP instances: TSPLIB ingestion, generators and distance queries.
//!
//! Distances are stored as a dense row-major `n × n` matrix of `f64`. For
//! coordinate-based instances the matrix is always recomputed from the
//! coordinates by the declared rule, so two instances with the same points and
//! kind have bit-identical matrices.

use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest instance any model builder accepts (N − 2 ≥ 2 triangles).
pub const MIN_CITIES: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("unsupported TSPLIB format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed section: {0}")]
    MalformedSection(String),
    #[error("city index {index} out of range for instance with {n} cities")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid distance matrix: {0}")]
    InvalidMatrix(String),
    #[error("instance needs at least {min} cities, got {n}")]
    TooFewCities { n: usize, min: usize },
}

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// How the distance matrix relates to the coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EdgeWeightKind {
    /// TSPLIB `EUC_2D`: Euclidean distance rounded to the nearest integer.
    Euc2dRounded,
    /// Unrounded Euclidean distance.
    Euc2dExact,
    /// Explicit symmetric matrix; coordinates, if any, are display-only.
    Explicit,
}

impl EdgeWeightKind {
    fn tsplib_keyword(self) -> &'static str {
        match self {
            EdgeWeightKind::Euc2dRounded => "EUC_2D",
            EdgeWeightKind::Euc2dExact => "EUC_2D_EXACT",
            EdgeWeightKind::Explicit => "EXPLICIT",
        }
    }
}

/// Generator family for [`TspInstance::random`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RandomMode {
    Euclidean,
    NonMetric,
}

/// A symmetric TSP instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TspInstance {
    name: String,
    n: usize,
    coords: Option<Vec<Point>>,
    dist: Vec<f64>,
    kind: EdgeWeightKind,
}

fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

fn euclidean_matrix(coords: &[Point], kind: EdgeWeightKind) -> Vec<f64> {
    let n = coords.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = coords[i].dist(&coords[j]);
            let d = match kind {
                EdgeWeightKind::Euc2dRounded => nint(d),
                _ => d,
            };
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    dist
}

impl TspInstance {
    /// Builds a Euclidean instance from coordinates.
    pub fn from_coords(
        name: impl Into<String>,
        coords: Vec<Point>,
        kind: EdgeWeightKind,
    ) -> Result<Self, InstanceError> {
        if kind == EdgeWeightKind::Explicit {
            return Err(InstanceError::UnsupportedFormat(
                "explicit instances need a matrix".into(),
            ));
        }
        let dist = euclidean_matrix(&coords, kind);
        Ok(TspInstance {
            name: name.into(),
            n: coords.len(),
            coords: Some(coords),
            dist,
            kind,
        })
    }

    /// Builds an explicit instance from a full matrix. Optional coordinates are
    /// kept for drawing only.
    pub fn from_matrix(
        name: impl Into<String>,
        matrix: Vec<Vec<f64>>,
        display: Option<Vec<Point>>,
    ) -> Result<Self, InstanceError> {
        let n = matrix.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(InstanceError::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(InstanceError::InvalidMatrix(format!(
                    "nonzero diagonal at {i}"
                )));
            }
            for j in 0..n {
                let d = dist[i * n + j];
                if !d.is_finite() || d < 0.0 {
                    return Err(InstanceError::InvalidMatrix(format!(
                        "entry ({i},{j}) = {d} is not a non-negative length"
                    )));
                }
                if d != dist[j * n + i] {
                    return Err(InstanceError::InvalidMatrix(format!(
                        "asymmetric entries at ({i},{j})"
                    )));
                }
            }
        }
        if let Some(pts) = &display {
            if pts.len() != n {
                return Err(InstanceError::InvalidMatrix(format!(
                    "{} display points for {n} cities",
                    pts.len()
                )));
            }
        }
        Ok(TspInstance {
            name: name.into(),
            n,
            coords: display,
            dist,
            kind: EdgeWeightKind::Explicit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// Number of cities.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> EdgeWeightKind {
        self.kind
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    /// Coordinates usable for geometric constructions (Euclidean kinds only
    /// would be stricter; display coordinates are accepted as well).
    pub fn has_coords(&self) -> bool {
        self.coords.is_some()
    }

    /// Checked distance lookup.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64, InstanceError> {
        for index in [i, j] {
            if index >= self.n {
                return Err(InstanceError::IndexOutOfRange { index, n: self.n });
            }
        }
        Ok(self.dist[i * self.n + j])
    }

    /// Unchecked distance lookup; panics on out-of-range indices.
    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Length of the closed tour visiting `order` cyclically.
    pub fn tour_length(&self, order: &[usize]) -> f64 {
        if order.is_empty() {
            return 0.0;
        }
        order
            .iter()
            .zip(order.iter().cycle().skip(1))
            .map(|(&a, &b)| self.d(a, b))
            .sum()
    }

    pub fn ensure_buildable(&self) -> Result<(), InstanceError> {
        if self.n < MIN_CITIES {
            return Err(InstanceError::TooFewCities {
                n: self.n,
                min: MIN_CITIES,
            });
        }
        Ok(())
    }

    /// Random instance, deterministic per `(n, seed, mode)`.
    ///
    /// `Euclidean` draws points uniformly in the unit square with exact
    /// distances. `NonMetric` draws i.i.d. integer weights in `1..=100` with no
    /// attempt to satisfy the triangle inequality.
    pub fn random(n: usize, seed: u64, mode: RandomMode) -> Result<Self, InstanceError> {
        if n < MIN_CITIES {
            return Err(InstanceError::TooFewCities { n, min: MIN_CITIES });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match mode {
            RandomMode::Euclidean => {
                let coords = (0..n)
                    .map(|_| Point::new(rng.gen::<f64>(), rng.gen::<f64>()))
                    .collect();
                Self::from_coords(
                    format!("rand_euc_n{n}_s{seed}"),
                    coords,
                    EdgeWeightKind::Euc2dExact,
                )
            }
            RandomMode::NonMetric => {
                let mut m = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let w = rng.gen_range(1..=100) as f64;
                        m[i][j] = w;
                        m[j][i] = w;
                    }
                }
                Self::from_matrix(format!("rand_nonmetric_n{n}_s{seed}"), m, None)
            }
        }
    }

    /// Two concentric, aligned regular hexagons (radii 1 and 2, first vertex at
    /// 90°) around a center city. City 0 is the center, 1..=6 the inner ring and
    /// 7..=12 the outer ring, both counterclockwise.
    pub fn nested_hexagons() -> Self {
        const R_IN: f64 = 1.0;
        const R_OUT: f64 = 2.0;
        let mut coords = vec![Point::new(0.0, 0.0)];
        for r in [R_IN, R_OUT] {
            for k in 0..6 {
                let a = (90.0 + 60.0 * k as f64).to_radians();
                coords.push(Point::new(r * a.cos(), r * a.sin()));
            }
        }
        Self::from_coords("nested_hexagons", coords, EdgeWeightKind::Euc2dExact)
            .expect("coordinate instance")
    }

    /// Serializes to TSPLIB text. Euclidean instances are written as a
    /// `NODE_COORD_SECTION` (exact ones with the `EUC_2D_EXACT` weight type),
    /// explicit ones as a `FULL_MATRIX` plus optional `DISPLAY_DATA_SECTION`.
    /// Reals use the shortest representation that round-trips.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.n);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.kind.tsplib_keyword());
        match self.kind {
            EdgeWeightKind::Euc2dRounded | EdgeWeightKind::Euc2dExact => {
                let _ = writeln!(out, "NODE_COORD_SECTION");
                for (i, p) in self.coords.as_deref().unwrap_or(&[]).iter().enumerate() {
                    let _ = writeln!(out, "{} {:?} {:?}", i + 1, p.x, p.y);
                }
            }
            EdgeWeightKind::Explicit => {
                let _ = writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX");
                if self.coords.is_some() {
                    let _ = writeln!(out, "DISPLAY_DATA_TYPE : TWOD_DISPLAY");
                }
                let _ = writeln!(out, "EDGE_WEIGHT_SECTION");
                for i in 0..self.n {
                    let row: Vec<String> =
                        (0..self.n).map(|j| format!("{:?}", self.d(i, j))).collect();
                    let _ = writeln!(out, "{}", row.join(" "));
                }
                if let Some(pts) = &self.coords {
                    let _ = writeln!(out, "DISPLAY_DATA_SECTION");
                    for (i, p) in pts.iter().enumerate() {
                        let _ = writeln!(out, "{} {:?} {:?}", i + 1, p.x, p.y);
                    }
                }
            }
        }
        out.push_str("EOF\n");
        out
    }
}

impl fmt::Display for TspInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (N={}, {:?})", self.name, self.n, self.kind)
    }
}

#[derive(Default)]
struct Header {
    name: Option<String>,
    dimension: Option<usize>,
    weight_type: Option<String>,
    weight_format: Option<String>,
}

fn parse_real(tok: &str, what: &str) -> Result<f64, InstanceError> {
    tok.parse::<f64>()
        .map_err(|_| InstanceError::MalformedSection(format!("bad number {tok:?} in {what}")))
}

fn read_coord_section<'a>(
    lines: &mut std::iter::Peekable<impl Iterator<Item = &'a str>>,
    n: usize,
    what: &str,
) -> Result<Vec<Point>, InstanceError> {
    let mut pts: Vec<Option<Point>> = vec![None; n];
    let mut count = 0;
    while let Some(&line) = lines.peek() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            lines.next();
            continue;
        }
        if toks[0].parse::<usize>().is_err() {
            break;
        }
        lines.next();
        if toks.len() < 3 {
            return Err(InstanceError::MalformedSection(format!(
                "{what}: expected `id x y`, got {line:?}"
            )));
        }
        let id: usize = toks[0].parse().unwrap();
        if id == 0 || id > n {
            return Err(InstanceError::MalformedSection(format!(
                "{what}: node id {id} outside 1..={n}"
            )));
        }
        if pts[id - 1].is_some() {
            return Err(InstanceError::MalformedSection(format!(
                "{what}: node {id} listed twice"
            )));
        }
        pts[id - 1] = Some(Point::new(parse_real(toks[1], what)?, parse_real(toks[2], what)?));
        count += 1;
    }
    if count != n {
        return Err(InstanceError::MalformedSection(format!(
            "{what}: {count} entries but DIMENSION is {n}"
        )));
    }
    Ok(pts.into_iter().map(Option::unwrap).collect())
}

fn read_matrix_section<'a>(
    lines: &mut std::iter::Peekable<impl Iterator<Item = &'a str>>,
    n: usize,
) -> Result<Vec<Vec<f64>>, InstanceError> {
    let mut values = Vec::with_capacity(n * n);
    while values.len() < n * n {
        let Some(&line) = lines.peek() else { break };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first().is_some_and(|t| t.parse::<f64>().is_err()) {
            break;
        }
        lines.next();
        for t in toks {
            values.push(parse_real(t, "EDGE_WEIGHT_SECTION")?);
        }
    }
    if values.len() != n * n {
        return Err(InstanceError::MalformedSection(format!(
            "EDGE_WEIGHT_SECTION: {} weights but FULL_MATRIX of DIMENSION {n} needs {}",
            values.len(),
            n * n
        )));
    }
    Ok(values.chunks(n).map(<[f64]>::to_vec).collect())
}

/// Parses TSPLIB text with `EUC_2D`, `EUC_2D_EXACT` or `EXPLICIT`/`FULL_MATRIX`
/// edge weights.
pub fn parse_tsplib(text: &str) -> Result<TspInstance, InstanceError> {
    let mut header = Header::default();
    let mut coords = None;
    let mut display = None;
    let mut matrix = None;
    let mut lines = text.lines().map(str::trim).peekable();

    while let Some(line) = lines.next() {
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once(':') {
            Some((k, v)) => (k.trim(), Some(v.trim())),
            None => (line, None),
        };
        match (key, value) {
            ("EOF", _) => break,
            ("NAME", Some(v)) => header.name = Some(v.to_string()),
            ("TYPE", Some(v)) => {
                if v != "TSP" {
                    return Err(InstanceError::UnsupportedFormat(format!("TYPE {v}")));
                }
            }
            ("DIMENSION", Some(v)) => {
                header.dimension = Some(v.parse().map_err(|_| {
                    InstanceError::MalformedSection(format!("bad DIMENSION {v:?}"))
                })?)
            }
            ("EDGE_WEIGHT_TYPE", Some(v)) => {
                if !matches!(v, "EUC_2D" | "EUC_2D_EXACT" | "EXPLICIT") {
                    return Err(InstanceError::UnsupportedFormat(format!(
                        "EDGE_WEIGHT_TYPE {v}"
                    )));
                }
                header.weight_type = Some(v.to_string());
            }
            ("EDGE_WEIGHT_FORMAT", Some(v)) => {
                if v != "FULL_MATRIX" {
                    return Err(InstanceError::UnsupportedFormat(format!(
                        "EDGE_WEIGHT_FORMAT {v}"
                    )));
                }
                header.weight_format = Some(v.to_string());
            }
            ("COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE", _) => {}
            ("NODE_COORD_SECTION", _) => {
                let n = header.dimension.ok_or_else(|| {
                    InstanceError::MalformedSection("NODE_COORD_SECTION before DIMENSION".into())
                })?;
                coords = Some(read_coord_section(&mut lines, n, "NODE_COORD_SECTION")?);
            }
            ("DISPLAY_DATA_SECTION", _) => {
                let n = header.dimension.ok_or_else(|| {
                    InstanceError::MalformedSection("DISPLAY_DATA_SECTION before DIMENSION".into())
                })?;
                display = Some(read_coord_section(&mut lines, n, "DISPLAY_DATA_SECTION")?);
            }
            ("EDGE_WEIGHT_SECTION", _) => {
                let n = header.dimension.ok_or_else(|| {
                    InstanceError::MalformedSection("EDGE_WEIGHT_SECTION before DIMENSION".into())
                })?;
                matrix = Some(read_matrix_section(&mut lines, n)?);
            }
            (other, _) => {
                return Err(InstanceError::UnsupportedFormat(format!(
                    "unknown keyword {other:?}"
                )))
            }
        }
    }

    let name = header.name.unwrap_or_else(|| "unnamed".to_string());
    let weight_type = header
        .weight_type
        .ok_or_else(|| InstanceError::UnsupportedFormat("missing EDGE_WEIGHT_TYPE".into()))?;
    match weight_type.as_str() {
        "EXPLICIT" => {
            if header.weight_format.is_none() {
                return Err(InstanceError::UnsupportedFormat(
                    "EXPLICIT weights need EDGE_WEIGHT_FORMAT : FULL_MATRIX".into(),
                ));
            }
            let m = matrix.ok_or_else(|| {
                InstanceError::MalformedSection("missing EDGE_WEIGHT_SECTION".into())
            })?;
            TspInstance::from_matrix(name, m, display.or(coords))
                .map_err(|e| InstanceError::MalformedSection(e.to_string()))
        }
        t => {
            let pts = coords.ok_or_else(|| {
                InstanceError::MalformedSection("missing NODE_COORD_SECTION".into())
            })?;
            let kind = if t == "EUC_2D" {
                EdgeWeightKind::Euc2dRounded
            } else {
                EdgeWeightKind::Euc2dExact
            };
            TspInstance::from_coords(name, pts, kind)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "NAME : square\nTYPE : TSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 0\n3 1 1\n4 0 1\nEOF\n";

    #[test]
    fn square_rounds_diagonal() {
        let inst = parse_tsplib(SQUARE).unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.kind(), EdgeWeightKind::Euc2dRounded);
        assert_eq!(inst.distance(0, 1).unwrap(), 1.0);
        assert_eq!(inst.distance(0, 2).unwrap(), 1.0);
    }

    #[test]
    fn short_coord_section_is_malformed() {
        let text = SQUARE.replace("DIMENSION : 4", "DIMENSION : 5");
        assert!(matches!(
            parse_tsplib(&text),
            Err(InstanceError::MalformedSection(_))
        ));
    }

    #[test]
    fn rejects_other_weight_types() {
        for t in ["ATT", "GEO", "CEIL_2D"] {
            let text = SQUARE.replace("EUC_2D", t);
            assert!(matches!(
                parse_tsplib(&text),
                Err(InstanceError::UnsupportedFormat(_))
            ));
        }
        let text = "NAME: x\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: UPPER_ROW\n";
        assert!(matches!(
            parse_tsplib(text),
            Err(InstanceError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn three_four_five() {
        let inst = TspInstance::from_coords(
            "t",
            vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)],
            EdgeWeightKind::Euc2dExact,
        )
        .unwrap();
        assert_eq!(inst.distance(0, 1).unwrap(), 5.0);
        assert_eq!(inst.distance(1, 1).unwrap(), 0.0);
        assert!(matches!(
            inst.distance(0, 2),
            Err(InstanceError::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn explicit_matrix_is_symmetric() {
        let text = "NAME: m\nTYPE: TSP\nDIMENSION: 4\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 3 4 5\n3 0 7 6\n4 7 0 2\n5 6 2 0\nEOF\n";
        let inst = parse_tsplib(text).unwrap();
        assert_eq!(inst.distance(1, 2).unwrap(), 7.0);
        assert_eq!(inst.distance(2, 1).unwrap(), 7.0);
        assert_eq!(inst.kind(), EdgeWeightKind::Explicit);

        let asym = text.replace("3 0 7 6", "3 0 8 6");
        assert!(parse_tsplib(&asym).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        for mode in [RandomMode::Euclidean, RandomMode::NonMetric] {
            let a = TspInstance::random(10, 7, mode).unwrap();
            let b = TspInstance::random(10, 7, mode).unwrap();
            assert_eq!(a, b);
            let c = TspInstance::random(10, 8, mode).unwrap();
            assert_ne!(a, c);
        }
        assert!(TspInstance::random(3, 0, RandomMode::Euclidean).is_err());
    }

    #[test]
    fn small_euclidean_has_positive_distances() {
        let inst = TspInstance::random(4, 1, RandomMode::Euclidean).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(inst.d(i, j) > 0.0, i != j);
            }
        }
    }

    #[test]
    fn nonmetric_violates_triangle_inequality_somewhere() {
        // Across a handful of seeds at N=10 violations are the norm.
        let violating = (0..10)
            .filter(|&s| {
                let inst = TspInstance::random(10, s, RandomMode::NonMetric).unwrap();
                (0..10).any(|i| {
                    (0..10).any(|j| (0..10).any(|k| inst.d(i, j) > inst.d(i, k) + inst.d(k, j)))
                })
            })
            .count();
        assert!(violating >= 9, "only {violating} seeds violate");
    }

    #[test]
    fn nested_hexagon_center_has_two_radii() {
        let inst = TspInstance::nested_hexagons();
        assert_eq!(inst.n(), 13);
        let mut radii: Vec<f64> = (1..13).map(|j| inst.d(0, j)).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        assert_eq!(radii.len(), 2);
        assert!((radii[0] - 1.0).abs() < 1e-12 && (radii[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn explicit_round_trip_keeps_display_coords() {
        let m = vec![
            vec![0.0, 1.5, 2.0, 3.0],
            vec![1.5, 0.0, 0.1, 7.0],
            vec![2.0, 0.1, 0.0, 4.0],
            vec![3.0, 7.0, 4.0, 0.0],
        ];
        let pts = (0..4).map(|i| Point::new(i as f64, 0.5)).collect();
        let inst = TspInstance::from_matrix("m", m, Some(pts)).unwrap();
        assert_eq!(parse_tsplib(&inst.to_tsplib()).unwrap(), inst);
    }
}
