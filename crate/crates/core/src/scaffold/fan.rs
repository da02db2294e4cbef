use serde::Serialize;

use super::{ScaffoldError, Scaffolding};
use crate::lattice::{
    primitive, rank, vertices, Halfspace, HalfspaceSystem, IntMat, IntVec, LatticeError, RatVec,
};

/// `Q_S`: one row `<., -D + chi> >= -1` per strut, then `<., E_i> >= 0` per
/// shape divisor, in the ambient dual of `Div + N_U`.
pub fn build_qs(s: &Scaffolding) -> Result<HalfspaceSystem, ScaffoldError> {
    s.validate()?;
    let dim = s.ambient_rank();
    let mut rows = Vec::new();
    for strut in &s.struts {
        let normal = strut.divisor.neg().concat(&strut.chi);
        if normal.is_zero() {
            return Err(LatticeError::ZeroNormal.into());
        }
        rows.push(Halfspace::new(normal, -1));
    }
    for i in 0..s.shape.div_rank() {
        rows.push(Halfspace::new(IntVec::unit(dim, i), 0));
    }
    Ok(HalfspaceSystem::new(dim, rows)?)
}

/// A complete simplicial fan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fan {
    pub dim: usize,
    /// Primitive ray generators.
    pub rays: Vec<IntVec>,
    /// Index of the halfspace row each ray came from.
    pub facet_rows: Vec<usize>,
    /// Maximal cones as sorted ray-index sets, sorted.
    pub cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn ray_matrix(&self) -> IntMat {
        IntMat::from_rows_with_cols(&self.rays, self.dim).expect("rays share the dimension")
    }

    /// Picks each ray's label from per-row labels of the halfspace system.
    pub fn ray_labels(&self, row_labels: &[String]) -> Vec<String> {
        self.facet_rows.iter().map(|&r| row_labels[r].clone()).collect()
    }

    /// Pairs of maximal cones sharing a codimension-one face, with the
    /// shared ray set.
    pub fn walls(&self) -> Vec<(usize, usize, Vec<usize>)> {
        let mut out = Vec::new();
        for i in 0..self.cones.len() {
            for j in i + 1..self.cones.len() {
                let shared: Vec<usize> = self.cones[i]
                    .iter()
                    .filter(|r| self.cones[j].contains(r))
                    .copied()
                    .collect();
                if shared.len() + 1 == self.dim {
                    out.push((i, j, shared));
                }
            }
        }
        out
    }
}

/// Normal fan of a bounded polytope.
///
/// Rays are the primitive inner normals of the facets, in row order
/// (redundant rows are dropped); each vertex contributes the cone spanned by
/// the facets through it.
pub fn normal_fan(qs: &HalfspaceSystem) -> Result<Fan, ScaffoldError> {
    let dim = qs.dim();
    let verts: Vec<RatVec> = match vertices(qs) {
        Ok(v) => v,
        Err(LatticeError::Unbounded) => return Err(ScaffoldError::Unbounded),
        Err(e) => return Err(e.into()),
    };

    let mut rays: Vec<IntVec> = Vec::new();
    let mut facet_rows = Vec::new();
    // row index -> ray index
    let mut ray_of_row = vec![None; qs.rows().len()];
    for (r, row) in qs.rows().iter().enumerate() {
        let tight: Vec<&RatVec> = verts.iter().filter(|v| row.is_tight_at(v)).collect();
        if tight.is_empty() || affine_rank(&tight) + 1 < dim {
            continue;
        }
        let n = primitive(&row.normal)?;
        match rays.iter().position(|x| x == &n) {
            Some(k) => ray_of_row[r] = Some(k),
            None => {
                ray_of_row[r] = Some(rays.len());
                rays.push(n);
                facet_rows.push(r);
            }
        }
    }

    let mut cones = Vec::new();
    for v in &verts {
        let mut cone: Vec<usize> = qs
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| row.is_tight_at(v))
            .filter_map(|(r, _)| ray_of_row[r])
            .collect();
        cone.sort_unstable();
        cone.dedup();
        if cone.len() > dim {
            return Err(ScaffoldError::NonSimplicial(cone.len()));
        }
        cones.push(cone);
    }
    cones.sort();
    Ok(Fan {
        dim,
        rays,
        facet_rows,
        cones,
    })
}

/// Dimension of the affine hull of a point set.
fn affine_rank(points: &[&RatVec]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let dim = base.len();
    // clear denominators row by row; rank is unaffected
    let rows: Vec<IntVec> = points[1..]
        .iter()
        .map(|p| {
            let diff: RatVec = p.iter().zip(base).map(|(a, b)| a - b).collect();
            let den = diff
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
            IntVec::new(diff.iter().map(|x| (x * &den).to_integer()).collect())
        })
        .collect();
    rank(&IntMat::from_rows_with_cols(&rows, dim).expect("same dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivec;
    use crate::scaffold::tests::hexagon_scaffolding;
    use crate::scaffold::{ShapeVariety, Strut};
    use std::collections::BTreeSet;

    #[test]
    fn hexagon_qs_rows() {
        let qs = build_qs(&hexagon_scaffolding()).unwrap();
        let rows: Vec<(IntVec, i64)> = qs
            .rows()
            .iter()
            .map(|h| (h.normal.clone(), i64::try_from(&h.bound).unwrap()))
            .collect();
        assert_eq!(
            rows,
            vec![
                (ivec![-1, -1, 2], -1),
                (ivec![-1, -1, -2], -1),
                (ivec![1, -2, 1], -1),
                (ivec![-2, 1, -1], -1),
                (ivec![1, 0, 0], 0),
                (ivec![0, 1, 0], 0),
            ]
        );
    }

    /// Vertices by brute force over all row triples.
    fn vertex_oracle(qs: &HalfspaceSystem) -> BTreeSet<RatVec> {
        use itertools::Itertools;
        let mut out = BTreeSet::new();
        for t in (0..qs.rows().len()).combinations(3) {
            let m = IntMat::from_rows(&t.iter().map(|&i| qs.rows()[i].normal.clone()).collect::<Vec<_>>()).unwrap();
            let b: RatVec = t
                .iter()
                .map(|&i| crate::lattice::rat_int(&qs.rows()[i].bound))
                .collect();
            if let Ok(x) = crate::lattice::solve_rational(&m, &b) {
                if qs.rows().iter().all(|h| h.contains_rat(&x)) {
                    out.insert(x);
                }
            }
        }
        out
    }

    #[test]
    fn hexagon_fan() {
        let qs = build_qs(&hexagon_scaffolding()).unwrap();
        let vs: BTreeSet<RatVec> = vertices(&qs).unwrap().into_iter().collect();
        assert_eq!(vs.len(), 8);
        assert_eq!(vs, vertex_oracle(&qs));

        let fan = normal_fan(&qs).unwrap();
        assert_eq!(
            fan.rays,
            vec![
                ivec![-1, -1, 2],
                ivec![-1, -1, -2],
                ivec![1, -2, 1],
                ivec![-2, 1, -1],
                ivec![1, 0, 0],
                ivec![0, 1, 0],
            ]
        );
        // x1 x2 y1 y2 z1 z2 = 0..6
        let expected: BTreeSet<Vec<usize>> = [
            vec![0, 4, 5],
            vec![1, 4, 5],
            vec![0, 3, 5],
            vec![1, 2, 4],
            vec![0, 2, 4],
            vec![1, 3, 5],
            vec![0, 1, 2],
            vec![0, 1, 3],
        ]
        .into_iter()
        .collect();
        assert_eq!(fan.cones.iter().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(fan.walls().len(), 12);
    }

    #[test]
    fn cube_gives_octahedral_fan() {
        let mut rows = Vec::new();
        for i in 0..3 {
            rows.push(Halfspace::new(IntVec::unit(3, i), -1));
            rows.push(Halfspace::new(IntVec::unit(3, i).neg(), -1));
        }
        let fan = normal_fan(&HalfspaceSystem::new(3, rows).unwrap()).unwrap();
        assert_eq!(fan.rays.len(), 6);
        assert_eq!(fan.cones.len(), 8);
        assert!(fan.cones.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn octahedron_is_not_simplicial() {
        let mut rows = Vec::new();
        for s in [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]] {
            rows.push(Halfspace::new(IntVec::from_i64s(&s), -1));
            rows.push(Halfspace::new(IntVec::from_i64s(&s).neg(), -1));
        }
        let err = normal_fan(&HalfspaceSystem::new(3, rows).unwrap()).unwrap_err();
        assert_eq!(err, ScaffoldError::NonSimplicial(4));
    }

    #[test]
    fn redundant_rows_are_not_rays() {
        let rows = vec![
            Halfspace::new(ivec![1, 0], -1),
            Halfspace::new(ivec![-1, 0], -1),
            Halfspace::new(ivec![0, 1], -1),
            Halfspace::new(ivec![0, -1], -1),
            Halfspace::new(ivec![1, 1], -5),
        ];
        let fan = normal_fan(&HalfspaceSystem::new(2, rows).unwrap()).unwrap();
        assert_eq!(fan.rays.len(), 4);
        assert_eq!(fan.cones.len(), 4);
    }

    #[test]
    fn empty_and_unbounded() {
        let s = Scaffolding {
            shape: ShapeVariety::projective_line(),
            n_u_rank: 1,
            struts: vec![],
            target: None,
        };
        assert_eq!(build_qs(&s), Err(ScaffoldError::NoStruts));
        let half = HalfspaceSystem::new(2, vec![Halfspace::new(ivec![1, 0], 0)]).unwrap();
        assert_eq!(normal_fan(&half), Err(ScaffoldError::Unbounded));
    }

    #[test]
    fn square_scaffolding() {
        // conv{(1,1),(-1,1),(-1,-1),(1,-1)}: two horizontal struts over P^1
        let s = Scaffolding {
            shape: ShapeVariety::projective_line(),
            n_u_rank: 1,
            struts: vec![
                Strut {
                    name: "u".into(),
                    divisor: ivec![1, 1],
                    chi: ivec![1],
                },
                Strut {
                    name: "v".into(),
                    divisor: ivec![1, 1],
                    chi: ivec![-1],
                },
            ],
            target: Some(crate::polygon::PolygonJson {
                vertices: vec![ivec![1, 1], ivec![-1, 1], ivec![-1, -1], ivec![1, -1]],
            }),
        };
        assert_eq!(s.hull_matches_target().unwrap(), Some(true));
        let qs = build_qs(&s).unwrap();
        assert_eq!(qs.rows().len(), 4);
        assert_eq!(qs.rows()[0].normal, ivec![-1, -1, 1]);
        assert_eq!(qs.rows()[1].normal, ivec![-1, -1, -1]);
    }
}
