use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{cross, LatticePolygon};
use crate::lattice::serialize_int;

/// The cyclic quotient singularity `1/r(1, a)`.
///
/// Stored canonically: of `a` and `a^-1 mod r` the smaller is kept, so the
/// two orderings of the cone's rays give equal values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CyclicQuotient2D {
    #[serde(serialize_with = "serialize_int")]
    r: BigInt,
    #[serde(serialize_with = "serialize_int")]
    a: BigInt,
}

impl CyclicQuotient2D {
    /// `r >= 1`; `a` is reduced mod `r` and must be a unit when `r > 1`.
    pub fn new(r: impl Into<BigInt>, a: impl Into<BigInt>) -> Option<Self> {
        let r = r.into();
        if r < BigInt::one() {
            return None;
        }
        if r.is_one() {
            return Some(CyclicQuotient2D {
                r,
                a: BigInt::zero(),
            });
        }
        let a = a.into().mod_floor(&r);
        let inv = mod_inverse(&a, &r)?;
        let a = a.min(inv);
        Some(CyclicQuotient2D { r, a })
    }

    pub fn index(&self) -> &BigInt {
        &self.r
    }

    pub fn weight(&self) -> &BigInt {
        &self.a
    }

    pub fn is_smooth(&self) -> bool {
        self.r.is_one()
    }

    /// `r | gcd(a + 1, r)^2`, the numeric test for T-singularities.
    pub fn satisfies_t_criterion(&self) -> bool {
        let g = (&self.a + 1u32).gcd(&self.r);
        (&g * &g).is_multiple_of(&self.r)
    }
}

impl fmt::Display for CyclicQuotient2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_smooth() {
            write!(f, "smooth")
        } else {
            write!(f, "1/{}(1,{})", self.r, self.a)
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Singularity data of the cone over one edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityRecord {
    pub edge: usize,
    pub quotient: CyclicQuotient2D,
    #[serde(serialize_with = "serialize_int")]
    pub lattice_length: BigInt,
    #[serde(serialize_with = "serialize_int")]
    pub lattice_height: BigInt,
    /// `floor(length / height)`
    #[serde(serialize_with = "serialize_int")]
    pub t_count: BigInt,
    /// `length mod height`
    #[serde(serialize_with = "serialize_int")]
    pub residue: BigInt,
    pub is_t: bool,
    pub is_rigid: bool,
    pub is_smooth: bool,
}

/// Type of the cone over edge `edge` of `p`.
///
/// With `u`, `v` the edge endpoints and `r = det(u, v)`, the matrix
/// `A = [[-u2, u1], [p, q]]` (where `p u1 + q u2 = 1`) sends `u` to `(0, 1)`
/// and `v` to `(r, k)`; the cone is then `1/r(1, -k mod r)`.
pub fn edge_singularity(p: &LatticePolygon, edge: usize) -> SingularityRecord {
    let (u, v) = p.edge(edge);
    let r = cross(u, v);
    debug_assert!(r > BigInt::zero());
    let e = u[0].extended_gcd(&u[1]);
    debug_assert!(e.gcd.is_one());
    let k = &e.x * &v[0] + &e.y * &v[1];
    let a = (-k).mod_floor(&r);
    let quotient = CyclicQuotient2D::new(r.clone(), a).expect("edge endpoints are primitive");

    let length = p.edge_lattice_length(edge);
    let (_, height) = p.edge_normal_and_height(edge);
    debug_assert_eq!(&length * &height, r);
    let (t_count, residue) = length.div_mod_floor(&height);
    let is_smooth = quotient.is_smooth();
    let is_rigid = t_count.is_zero();
    let is_t = residue.is_zero() && !t_count.is_zero() && !is_smooth;
    SingularityRecord {
        edge,
        quotient,
        lattice_length: length,
        lattice_height: height,
        t_count,
        residue,
        is_t,
        is_rigid,
        is_smooth,
    }
}

pub fn singularity_report(p: &LatticePolygon) -> Vec<SingularityRecord> {
    (0..p.len()).map(|i| edge_singularity(p, i)).collect()
}

/// Multiplicities of the singular (non-smooth) points.
pub fn singularity_multiset(report: &[SingularityRecord]) -> BTreeMap<CyclicQuotient2D, usize> {
    let mut out = BTreeMap::new();
    for rec in report.iter().filter(|r| !r.is_smooth) {
        *out.entry(rec.quotient.clone()).or_insert(0) += 1;
    }
    out
}

/// Dimension of the Q-Gorenstein deformation space, assuming no
/// local-to-global obstructions: the sum of `floor(length / height)` over the
/// singular cones. Smooth cones (length = height = 1) contribute nothing.
pub fn qg_dimension(p: &LatticePolygon) -> BigInt {
    singularity_report(p)
        .into_iter()
        .filter(|r| !r.is_smooth)
        .map(|r| r.t_count)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivec;
    use crate::lattice::{det, IntMat, IntVec};
    use crate::polygon::validate_fano;
    use crate::polygon::tests::hexagon_polygon;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn q(r: i64, a: i64) -> CyclicQuotient2D {
        CyclicQuotient2D::new(r, a).unwrap()
    }

    fn edge_index(p: &LatticePolygon, a: IntVec, b: IntVec) -> usize {
        (0..p.len())
            .find(|&i| {
                let (x, y) = p.edge(i);
                (x == &a && y == &b) || (x == &b && y == &a)
            })
            .unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(q(5, 3), q(5, 2));
        assert_eq!(q(5, 2).to_string(), "1/5(1,2)");
        assert_eq!(q(1, 0).to_string(), "smooth");
        assert!(CyclicQuotient2D::new(4, 2).is_none());
    }

    #[test]
    fn horizontal_edge_is_t() {
        let p = hexagon_polygon();
        let rec = edge_singularity(&p, edge_index(&p, ivec![1, 2], ivec![-1, 2]));
        assert_eq!(rec.quotient, q(4, 1));
        assert_eq!(rec.lattice_length, 2.into());
        assert_eq!(rec.lattice_height, 2.into());
        assert_eq!(rec.t_count, 1.into());
        assert!(rec.is_t && !rec.is_rigid);
        assert!(rec.quotient.satisfies_t_criterion());
    }

    #[test]
    fn rigid_edge() {
        let p = hexagon_polygon();
        let rec = edge_singularity(&p, edge_index(&p, ivec![1, -2], ivec![2, 1]));
        assert_eq!(rec.quotient, q(5, 2));
        assert_eq!(rec.lattice_length, 1.into());
        // length * height = 5
        assert_eq!(rec.lattice_height, 5.into());
        assert_eq!(rec.t_count, 0.into());
        assert!(rec.is_rigid && !rec.is_t);
    }

    #[test]
    fn smooth_edge() {
        let p = validate_fano(&[ivec![1, 0], ivec![0, 1], ivec![-1, -1]]).unwrap();
        let rec = edge_singularity(&p, edge_index(&p, ivec![0, 1], ivec![1, 0]));
        assert!(rec.is_smooth);
        assert!(rec.quotient.is_smooth());
    }

    #[test]
    fn hexagon_report() {
        let p = hexagon_polygon();
        let report = singularity_report(&p);
        assert_eq!(report.len(), 6);
        let ms = singularity_multiset(&report);
        let expected: BTreeMap<_, _> = [(q(3, 1), 2), (q(4, 1), 2), (q(5, 2), 2)].into_iter().collect();
        assert_eq!(ms, expected);
        assert_eq!(qg_dimension(&p), 2.into());
        for rec in &report {
            assert_eq!(
                &rec.lattice_length,
                &(&rec.t_count * &rec.lattice_height + &rec.residue)
            );
            assert_eq!(rec.quotient.index(), &(&rec.lattice_length * &rec.lattice_height));
            if rec.residue.is_zero() {
                assert!(rec.quotient.satisfies_t_criterion());
            }
        }
    }

    #[test]
    fn other_reports() {
        let p2 = validate_fano(&[ivec![1, 0], ivec![0, 1], ivec![-1, -1]]).unwrap();
        assert!(singularity_multiset(&singularity_report(&p2)).is_empty());
        assert_eq!(qg_dimension(&p2), 0.into());

        let sq = validate_fano(&[ivec![1, 1], ivec![-1, 1], ivec![-1, -1], ivec![1, -1]]).unwrap();
        let ms = singularity_multiset(&singularity_report(&sq));
        assert_eq!(ms, [(q(2, 1), 4)].into_iter().collect());
        assert_eq!(qg_dimension(&sq), 8.into());
    }

    /// Cone classification by search: in the normal form `cone(e2, r e1 - a e2)`
    /// the vector `(v + a u) / r` is a lattice point, so `a` is the unique
    /// residue with `r | v + a u`.
    fn quotient_oracle(u: &IntVec, v: &IntVec) -> CyclicQuotient2D {
        let r = i64::try_from(cross(u, v)).unwrap();
        let (u, v) = (u.to_i64s(), v.to_i64s());
        for a in 0..r.max(1) {
            if (v[0] + a * u[0]) % r == 0 && (v[1] + a * u[1]) % r == 0 {
                return q(r, a);
            }
        }
        unreachable!()
    }

    fn arb_fano() -> impl Strategy<Value = LatticePolygon> {
        proptest::collection::vec((-5i64..=5, -5i64..=5), 3..9).prop_filter_map("not Fano", |pts| {
            let pts: Vec<IntVec> = pts.into_iter().map(|(a, b)| ivec![a, b]).collect();
            let hull = LatticePolygon::hull(&pts).ok()?;
            validate_fano(hull.vertices()).ok()
        })
    }

    proptest! {
        #[test]
        fn quotient_matches_oracle(p in arb_fano()) {
            for i in 0..p.len() {
                let (u, v) = p.edge(i);
                prop_assert_eq!(edge_singularity(&p, i).quotient, quotient_oracle(u, v));
            }
        }

        #[test]
        fn report_is_invariant_under_gl2(p in arb_fano(), a in -3i64..=3, b in -3i64..=3, flip in any::<bool>()) {
            // shear composed with an optional reflection
            let shear = IntMat::from_i64_rows(&[&[1, a], &[0, 1]]);
            let shear2 = IntMat::from_i64_rows(&[&[1, 0], &[b, 1]]);
            let refl = if flip { IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]) } else { IntMat::identity(2) };
            let g = refl.mul(&shear).mul(&shear2);
            prop_assert!(det(&g).abs() == BigInt::one());
            let image = validate_fano(p.transform(&g).unwrap().vertices()).unwrap();
            prop_assert_eq!(
                singularity_multiset(&singularity_report(&p)),
                singularity_multiset(&singularity_report(&image))
            );
        }
    }
}
