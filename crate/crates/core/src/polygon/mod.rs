//! Fano polygons and the invariants of their toric del Pezzo surfaces.

mod report;
mod singularity;
mod symmetry;

pub use report::{polygon_report, PolygonReport};
pub use singularity::{
    edge_singularity, qg_dimension, singularity_multiset, singularity_report, CyclicQuotient2D,
    SingularityRecord,
};
pub use symmetry::{lattice_symmetries, SymmetryGroup};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{fmt_rat, primitive, IntMat, IntVec, LatticeError, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} is not a 2-dimensional lattice point")]
    BadDimension(IntVec),
    #[error("vertex {0} is not primitive")]
    NonPrimitiveVertex(IntVec),
    #[error("the origin is not in the strict interior")]
    OriginNotInterior,
    #[error("the points are not in strictly convex position")]
    NotConvex,
    #[error("the polygon has zero area")]
    Degenerate,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

fn cross(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn cross_rat(a: &[Rat], b: &[Rat]) -> Rat {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Rotates `v` so that its lexicographically least element comes first.
fn rotate_to_min<T: Ord>(v: &mut [T]) {
    if let Some((i, _)) = v.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        v.rotate_left(i);
    }
}

/// Strictly convex hull (collinear points dropped), counterclockwise.
fn convex_hull(points: &[IntVec]) -> Vec<IntVec> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &IntVec, a: &IntVec, b: &IntVec| cross(&a.sub(o), &b.sub(o));
    let mut lower: Vec<IntVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<IntVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Counterclockwise lattice polygon, lexicographically least vertex first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<IntVec>,
}

impl LatticePolygon {
    /// Convex hull of arbitrary lattice points (no Fano conditions).
    pub fn hull(points: &[IntVec]) -> Result<Self, PolygonError> {
        for p in points {
            if p.dim() != 2 {
                return Err(PolygonError::BadDimension(p.clone()));
            }
        }
        let mut hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(PolygonError::Degenerate);
        }
        rotate_to_min(&mut hull);
        Ok(LatticePolygon { vertices: hull })
    }

    pub fn vertices(&self) -> &[IntVec] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (cyclically).
    pub fn edge(&self, i: usize) -> (&IntVec, &IntVec) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (&IntVec, &IntVec)> {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Number of lattice segments on edge `i`.
    pub fn edge_lattice_length(&self, i: usize) -> BigInt {
        let (a, b) = self.edge(i);
        b.sub(a).content()
    }

    /// Primitive outer normal `w` and height `h = <w, edge>` of edge `i`.
    pub fn edge_normal_and_height(&self, i: usize) -> (IntVec, BigInt) {
        let (a, b) = self.edge(i);
        let d = b.sub(a);
        let w = primitive(&IntVec::new(vec![d[1].clone(), -&d[0]])).expect("edge is nonzero");
        let h = w.dot(a);
        (w, h)
    }

    pub fn to_rat(&self) -> RatPolygon {
        RatPolygon {
            vertices: self.vertices.iter().map(IntVec::to_rat).collect(),
        }
    }

    /// Image under a linear map.
    pub fn transform(&self, g: &IntMat) -> Result<LatticePolygon, PolygonError> {
        let pts: Vec<IntVec> = self.vertices.iter().map(|v| g.mul_vec(v)).collect();
        LatticePolygon::hull(&pts)
    }

    /// All lattice points of the polygon, sorted.
    pub fn lattice_points(&self) -> Vec<IntVec> {
        let xs = self.vertices.iter().map(|v| v[0].clone());
        let ys = self.vertices.iter().map(|v| v[1].clone());
        let (x0, x1) = (xs.clone().min().unwrap(), xs.max().unwrap());
        let (y0, y1) = (ys.clone().min().unwrap(), ys.max().unwrap());
        let mut out = Vec::new();
        let mut x = x0;
        while x <= x1 {
            let mut y = y0.clone();
            while y <= y1 {
                let p = IntVec::new(vec![x.clone(), y.clone()]);
                if self.contains(&p) {
                    out.push(p);
                }
                y += 1;
            }
            x += 1;
        }
        out
    }

    pub fn contains(&self, p: &IntVec) -> bool {
        self.edges()
            .all(|(a, b)| !cross(&b.sub(a), &p.sub(a)).is_negative())
    }

    pub fn strictly_contains(&self, p: &IntVec) -> bool {
        self.edges().all(|(a, b)| cross(&b.sub(a), &p.sub(a)).is_positive())
    }

    /// `P = -P`
    pub fn is_centrally_symmetric(&self) -> bool {
        let neg: Vec<IntVec> = self.vertices.iter().map(IntVec::neg).collect();
        LatticePolygon::hull(&neg).is_ok_and(|q| &q == self)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonJson {
    pub vertices: Vec<IntVec>,
}

/// Checks the Fano conditions and returns the canonical polygon.
pub fn validate_fano(points: &[IntVec]) -> Result<LatticePolygon, PolygonError> {
    if points.len() < 3 {
        return Err(PolygonError::TooFewVertices(points.len()));
    }
    for p in points {
        if p.dim() != 2 {
            return Err(PolygonError::BadDimension(p.clone()));
        }
        if !p.content().is_one() {
            return Err(PolygonError::NonPrimitiveVertex(p.clone()));
        }
    }
    let mut distinct = points.to_vec();
    distinct.sort();
    distinct.dedup();
    let hull = convex_hull(&distinct);
    if hull.len() < 3 || hull.len() != distinct.len() {
        return Err(PolygonError::NotConvex);
    }
    let poly = LatticePolygon::hull(&hull)?;
    if !poly.strictly_contains(&IntVec::zeros(2)) {
        return Err(PolygonError::OriginNotInterior);
    }
    Ok(poly)
}

/// Counterclockwise polygon with rational vertices, lexicographically least
/// vertex first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPolygon {
    vertices: Vec<RatVec>,
}

impl RatPolygon {
    /// Takes vertices in convex position in either orientation.
    pub fn new(mut vertices: Vec<RatVec>) -> Result<Self, PolygonError> {
        if vertices.len() < 3 {
            return Err(PolygonError::TooFewVertices(vertices.len()));
        }
        let n = vertices.len();
        let mut sign = 0i8;
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            let c = &vertices[(i + 2) % n];
            let t = cross_rat(&sub_rat(b, a), &sub_rat(c, b));
            let s = if t.is_positive() {
                1
            } else if t.is_negative() {
                -1
            } else {
                return Err(PolygonError::NotConvex);
            };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                return Err(PolygonError::NotConvex);
            }
        }
        if sign < 0 {
            vertices.reverse();
        }
        rotate_to_min(&mut vertices);
        Ok(RatPolygon { vertices })
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `{m : <m, u> >= -1 for all u}`; requires the origin strictly inside.
    pub fn polar(&self) -> Result<RatPolygon, PolygonError> {
        let n = self.vertices.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let p = &self.vertices[i];
            let q = &self.vertices[(i + 1) % n];
            let d = cross_rat(p, q);
            if !d.is_positive() {
                return Err(PolygonError::OriginNotInterior);
            }
            // m with <m,p> = <m,q> = -1
            let m0 = (&p[1] - &q[1]) / &d;
            let m1 = (&q[0] - &p[0]) / &d;
            out.push(vec![m0, m1]);
        }
        RatPolygon::new(out)
    }

    pub fn neg(&self) -> RatPolygon {
        RatPolygon::new(
            self.vertices
                .iter()
                .map(|v| v.iter().map(|x| -x).collect())
                .collect(),
        )
        .expect("negation preserves convexity")
    }

    pub fn is_lattice(&self) -> bool {
        self.vertices.iter().flatten().all(|x| x.is_integer())
    }

    pub fn to_lattice(&self) -> Option<LatticePolygon> {
        if !self.is_lattice() {
            return None;
        }
        let pts: Vec<IntVec> = self
            .vertices
            .iter()
            .map(|v| IntVec::new(v.iter().map(|x| x.to_integer()).collect()))
            .collect();
        LatticePolygon::hull(&pts).ok()
    }
}

impl fmt::Display for RatPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({},{})", fmt_rat(&v[0]), fmt_rat(&v[1]))?;
        }
        write!(f, "}}")
    }
}

fn sub_rat(a: &[Rat], b: &[Rat]) -> RatVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn polar(p: &LatticePolygon) -> RatPolygon {
    p.to_rat()
        .polar()
        .expect("Fano polygons contain the origin in their interior")
}

/// Twice the Euclidean area, by triangulating from the first vertex.
pub fn normalized_volume(q: &RatPolygon) -> Rat {
    let v = q.vertices();
    let base = &v[0];
    (1..v.len() - 1)
        .map(|i| cross_rat(&sub_rat(&v[i], base), &sub_rat(&v[i + 1], base)))
        .sum()
}

/// Normalized volume of the polar, summed over the cones of the normal fan:
/// each vertex of `p` between edges with outer normals `w`, `w'` and
/// heights `h`, `h'` contributes `det(w, w') / (h h')`.
pub fn polar_volume_by_fan(p: &LatticePolygon) -> Rat {
    let n = p.len();
    (0..n)
        .map(|i| {
            let (w, h) = p.edge_normal_and_height(i);
            let (w2, h2) = p.edge_normal_and_height(i + 1);
            Rat::new(cross(&w, &w2), h * h2)
        })
        .sum()
}

/// Exact centroid of the region.
pub fn barycenter(q: &RatPolygon) -> Result<RatVec, PolygonError> {
    let v = q.vertices();
    let base = &v[0];
    let mut area = Rat::zero();
    let mut moment = vec![Rat::zero(), Rat::zero()];
    for i in 1..v.len() - 1 {
        let a = cross_rat(&sub_rat(&v[i], base), &sub_rat(&v[i + 1], base));
        for c in 0..2 {
            moment[c] += &a * (&base[c] + &v[i][c] + &v[i + 1][c]);
        }
        area += a;
    }
    if area.is_zero() {
        return Err(PolygonError::Degenerate);
    }
    let three = Rat::from_integer(BigInt::from(3));
    Ok(moment.into_iter().map(|m| m / (&area * &three)).collect())
}

/// Barycenter criterion: K-polystable iff the polar's centroid is the origin.
pub fn is_k_polystable(p: &LatticePolygon) -> bool {
    barycenter(&polar(p))
        .map(|b| b.iter().all(Zero::is_zero))
        .unwrap_or(false)
}

/// Facets of the polar that contain lattice points in their relative
/// interior, reported as the vertex of `p` dual to that facet.
pub fn polar_facets_with_interior_points(p: &LatticePolygon) -> Vec<IntVec> {
    let dual = polar(p);
    let dv = dual.vertices();
    let n = dv.len();
    let mut out = Vec::new();
    for u in p.vertices() {
        // facet {m : <m,u> = -1}
        let on: Vec<&RatVec> = dv
            .iter()
            .filter(|m| u.dot_rat(m) == Rat::from_integer(-BigInt::one()))
            .collect();
        debug_assert_eq!(on.len(), 2, "facet of a polygon has two endpoints ({n} vertices)");
        let (a, b) = (on[0], on[1]);
        if segment_has_interior_lattice_point(a, b) {
            out.push(u.clone());
        }
    }
    out
}

fn segment_has_interior_lattice_point(a: &[Rat], b: &[Rat]) -> bool {
    let lo: Vec<BigInt> = (0..2).map(|c| a[c].clone().min(b[c].clone()).ceil().to_integer()).collect();
    let hi: Vec<BigInt> = (0..2).map(|c| a[c].clone().max(b[c].clone()).floor().to_integer()).collect();
    let d = sub_rat(b, a);
    let mut x = lo[0].clone();
    while x <= hi[0] {
        let mut y = lo[1].clone();
        while y <= hi[1] {
            let m = vec![Rat::from_integer(x.clone()), Rat::from_integer(y.clone())];
            let rel = sub_rat(&m, a);
            if cross_rat(&d, &rel).is_zero() {
                let c = if d[0].is_zero() { 1 } else { 0 };
                let t = &rel[c] / &d[c];
                if t.is_positive() && t < Rat::one() {
                    return true;
                }
            }
            y += 1;
        }
        x += 1;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivec;
    use crate::lattice::rat;
    use proptest::prelude::*;

    pub(crate) fn hexagon_polygon() -> LatticePolygon {
        validate_fano(&[
            ivec![2, 1],
            ivec![1, 2],
            ivec![-1, 2],
            ivec![-2, -1],
            ivec![-1, -2],
            ivec![1, -2],
        ])
        .unwrap()
    }

    fn p2() -> LatticePolygon {
        validate_fano(&[ivec![1, 0], ivec![0, 1], ivec![-1, -1]]).unwrap()
    }

    #[test]
    fn hexagon_polygon_is_fano() {
        let p = hexagon_polygon();
        assert_eq!(p.len(), 6);
        assert_eq!(p.vertices()[0], ivec![-2, -1]);
        assert!(p.is_centrally_symmetric());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            validate_fano(&[ivec![2, 0], ivec![0, 1], ivec![-1, -1]]),
            Err(PolygonError::NonPrimitiveVertex(ivec![2, 0]))
        );
        assert_eq!(
            validate_fano(&[ivec![1, 0], ivec![0, 1], ivec![1, 1]]),
            Err(PolygonError::OriginNotInterior)
        );
        assert_eq!(
            validate_fano(&[ivec![2, 1], ivec![-1, 1], ivec![-1, -1], ivec![1, -1], ivec![1, 0]]),
            Err(PolygonError::NotConvex)
        );
        assert_eq!(
            validate_fano(&[ivec![1, 0], ivec![0, 1]]),
            Err(PolygonError::TooFewVertices(2))
        );
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = validate_fano(&[ivec![0, 1], ivec![-1, -1], ivec![1, 0]]).unwrap();
        assert_eq!(a, p2());
    }

    #[test]
    fn p2_polar() {
        let expected = RatPolygon::new(vec![
            vec![rat(2, 1), rat(-1, 1)],
            vec![rat(-1, 1), rat(2, 1)],
            vec![rat(-1, 1), rat(-1, 1)],
        ])
        .unwrap();
        assert_eq!(polar(&p2()), expected);
        assert!(is_k_polystable(&p2()));
    }

    /// Polar vertices by intersecting every pair of supporting lines and
    /// keeping the feasible intersection points.
    fn polar_oracle(p: &LatticePolygon) -> std::collections::BTreeSet<RatVec> {
        let us = p.vertices();
        let mut out = std::collections::BTreeSet::new();
        for i in 0..us.len() {
            for j in i + 1..us.len() {
                let (a, b) = (&us[i], &us[j]);
                let d = cross(a, b);
                if d.is_zero() {
                    continue;
                }
                // [a0 a1; b0 b1] m = [-1; -1]
                let m: RatVec = vec![
                    Rat::new(&a[1] - &b[1], d.clone()),
                    Rat::new(&b[0] - &a[0], d),
                ];
                if us.iter().all(|u| u.dot_rat(&m) >= Rat::from_integer(BigInt::from(-1))) {
                    out.insert(m);
                }
            }
        }
        out
    }

    #[test]
    fn hexagon_polar_matches_oracle() {
        let p = hexagon_polygon();
        let q = polar(&p);
        assert_eq!(q.len(), 6);
        let got: std::collections::BTreeSet<RatVec> = q.vertices().iter().cloned().collect();
        assert_eq!(got, polar_oracle(&p));
        assert_eq!(q, q.neg());
    }

    #[test]
    fn volumes() {
        let p = hexagon_polygon();
        assert_eq!(normalized_volume(&polar(&p)), rat(22, 15));
        assert_eq!(polar_volume_by_fan(&p), rat(22, 15));
        let simplex = RatPolygon::new(vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ])
        .unwrap();
        assert_eq!(normalized_volume(&simplex), rat(1, 1));
        let square = LatticePolygon::hull(&[ivec![0, 0], ivec![1, 0], ivec![1, 1], ivec![0, 1]]).unwrap();
        assert_eq!(normalized_volume(&square.to_rat()), rat(2, 1));
    }

    #[test]
    fn barycenters() {
        let p = hexagon_polygon();
        assert_eq!(barycenter(&polar(&p)).unwrap(), vec![rat(0, 1), rat(0, 1)]);
        assert!(is_k_polystable(&p));
        let t = LatticePolygon::hull(&[ivec![0, 0], ivec![3, 0], ivec![0, 3]]).unwrap();
        assert_eq!(barycenter(&t.to_rat()).unwrap(), vec![rat(1, 1), rat(1, 1)]);
    }

    /// Centroid of a polygon by the shoelace moment formula about the
    /// origin, a different decomposition from the implementation's fan from
    /// the first vertex.
    fn centroid_oracle(q: &RatPolygon) -> RatVec {
        let v = q.vertices();
        let n = v.len();
        let mut a = Rat::zero();
        let mut cx = Rat::zero();
        let mut cy = Rat::zero();
        for i in 0..n {
            let p = &v[i];
            let r = &v[(i + 1) % n];
            let c = &p[0] * &r[1] - &r[0] * &p[1];
            cx += (&p[0] + &r[0]) * &c;
            cy += (&p[1] + &r[1]) * &c;
            a += c;
        }
        let three = Rat::from_integer(BigInt::from(3));
        vec![cx / (&a * &three), cy / (&a * &three)]
    }

    #[test]
    fn asymmetric_triangle_polystability() {
        let p = validate_fano(&[ivec![1, 0], ivec![0, 1], ivec![-1, -2]]).unwrap();
        let q = polar(&p);
        let b = barycenter(&q).unwrap();
        assert_eq!(b, centroid_oracle(&q));
        // P(1,1,2): polar centroid is off the origin
        assert_ne!(b, vec![rat(0, 1), rat(0, 1)]);
        assert!(!is_k_polystable(&p));
    }

    #[test]
    fn hexagon_polar_facets_are_free_of_lattice_points() {
        assert!(polar_facets_with_interior_points(&hexagon_polygon()).is_empty());
    }

    #[test]
    fn lattice_points_of_hexagon_polygon() {
        let pts = hexagon_polygon().lattice_points();
        // 6 vertices + 1 extra boundary point on each horizontal edge + 9 interior
        assert_eq!(pts.len(), 17);
        let interior = pts
            .iter()
            .filter(|x| hexagon_polygon().strictly_contains(x))
            .count();
        assert_eq!(interior, 9);
    }

    fn arb_fano() -> impl Strategy<Value = LatticePolygon> {
        proptest::collection::vec((-4i64..=4, -4i64..=4), 3..9).prop_filter_map(
            "not a Fano polygon",
            |pts| {
                let pts: Vec<IntVec> = pts.into_iter().map(|(a, b)| ivec![a, b]).collect();
                let hull = LatticePolygon::hull(&pts).ok()?;
                validate_fano(hull.vertices()).ok()
            },
        )
    }

    proptest! {
        #[test]
        fn polar_is_an_involution(p in arb_fano()) {
            let q = polar(&p);
            prop_assert_eq!(q.polar().unwrap(), p.to_rat());
        }

        #[test]
        fn polar_matches_oracle(p in arb_fano()) {
            let got: std::collections::BTreeSet<RatVec> = polar(&p).vertices().iter().cloned().collect();
            prop_assert_eq!(got, polar_oracle(&p));
        }

        #[test]
        fn fan_and_shoelace_volumes_agree(p in arb_fano()) {
            prop_assert_eq!(normalized_volume(&polar(&p)), polar_volume_by_fan(&p));
        }

        #[test]
        fn centroid_matches_shoelace(p in arb_fano()) {
            let q = polar(&p);
            prop_assert_eq!(barycenter(&q).unwrap(), centroid_oracle(&q));
        }
    }
}
