//! Halfspace systems, cones and lattice points in ambient dimension at most 3.
//!
//! The routines enumerate subsets of inequalities directly (pairs for cone
//! rays, triples for vertices). That is quadratic/cubic in the number of
//! inequalities, which is small for every system this crate builds.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::normal_form::{integer_kernel, rank, solve_rational};
use super::{primitive, IntMat, IntVec, LatticeError, Rat, RatVec};

pub const MAX_DIM: usize = 3;

/// `<normal, x> >= bound`
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Halfspace {
    pub normal: IntVec,
    #[serde(serialize_with = "super::serialize_int")]
    pub bound: BigInt,
}

impl Halfspace {
    pub fn new(normal: IntVec, bound: impl Into<BigInt>) -> Self {
        Halfspace {
            normal,
            bound: bound.into(),
        }
    }

    pub fn contains(&self, x: &IntVec) -> bool {
        self.normal.dot(x) >= self.bound
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.normal.dot_rat(x) >= Rat::from_integer(self.bound.clone())
    }

    pub fn is_tight_at(&self, x: &[Rat]) -> bool {
        self.normal.dot_rat(x) == Rat::from_integer(self.bound.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfspaceSystem {
    dim: usize,
    rows: Vec<Halfspace>,
}

impl HalfspaceSystem {
    pub fn new(dim: usize, rows: Vec<Halfspace>) -> Result<Self, LatticeError> {
        for r in &rows {
            if r.normal.dim() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: r.normal.dim(),
                });
            }
            if r.normal.is_zero() {
                return Err(LatticeError::ZeroNormal);
            }
        }
        Ok(HalfspaceSystem { dim, rows })
    }

    /// The cone `{x : <n, x> >= 0}` for each given normal.
    pub fn cone(dim: usize, normals: Vec<IntVec>) -> Result<Self, LatticeError> {
        Self::new(
            dim,
            normals
                .into_iter()
                .map(|n| Halfspace::new(n, 0))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Halfspace] {
        &self.rows
    }

    pub fn push(&mut self, row: Halfspace) -> Result<(), LatticeError> {
        if row.normal.dim() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: row.normal.dim(),
            });
        }
        if row.normal.is_zero() {
            return Err(LatticeError::ZeroNormal);
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn contains(&self, x: &IntVec) -> bool {
        self.rows.iter().all(|r| r.contains(x))
    }

    pub fn contains_rat(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|r| r.contains_rat(x))
    }

    pub fn normals(&self) -> Vec<IntVec> {
        self.rows.iter().map(|r| r.normal.clone()).collect()
    }

    /// The recession cone `{x : <n, x> >= 0}`.
    pub fn recession_cone(&self) -> HalfspaceSystem {
        HalfspaceSystem {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| Halfspace::new(r.normal.clone(), 0))
                .collect(),
        }
    }

    pub fn is_bounded(&self) -> Result<bool, LatticeError> {
        let rec = dual_cone(&self.recession_cone())?;
        Ok(rec.rays.is_empty() && rec.lineality.is_empty())
    }
}

/// A polyhedral cone by generators.
///
/// `rays` are primitive, pairwise non-parallel and sorted. When the cone
/// contains a line, `lineality` holds a lattice basis of its lineality space
/// and `rays` generate the part of the cone orthogonal to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeV {
    pub dim: usize,
    pub rays: Vec<IntVec>,
    pub lineality: Vec<IntVec>,
}

impl ConeV {
    pub fn from_rays(dim: usize, rays: Vec<IntVec>) -> Result<Self, LatticeError> {
        let mut set = BTreeSet::new();
        for r in rays {
            if r.dim() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: r.dim(),
                });
            }
            set.insert(primitive(&r)?);
        }
        Ok(ConeV {
            dim,
            rays: set.into_iter().collect(),
            lineality: Vec::new(),
        })
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// Halfspace description whose normals are this cone's rays.
    pub fn as_halfspaces(&self) -> HalfspaceSystem {
        HalfspaceSystem::cone(self.dim, self.rays.clone()).expect("rays are nonzero")
    }

    pub fn ray_set(&self) -> BTreeSet<IntVec> {
        self.rays.iter().cloned().collect()
    }
}

fn check_dim(dim: usize) -> Result<(), LatticeError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(LatticeError::UnsupportedDimension(dim));
    }
    Ok(())
}

/// Extreme rays of `{x : <n_i, x> >= 0}`. Bounds of the input are ignored.
///
/// Each candidate ray spans the kernel of `dim - 1` independent rows; the
/// lineality basis is added to the candidate rows as equations so that the
/// returned rays lie in its orthogonal complement.
pub fn dual_cone(hs: &HalfspaceSystem) -> Result<ConeV, LatticeError> {
    let dim = hs.dim();
    check_dim(dim)?;
    let normals = hs.normals();
    let a = IntMat::from_rows_with_cols(&normals, dim)?;
    let lineality = integer_kernel(&a);

    let mut rows = normals.clone();
    rows.extend(lineality.iter().cloned());
    let feasible = |x: &IntVec| {
        normals.iter().all(|n| !n.dot(x).is_negative())
            && lineality.iter().all(|l| l.dot(x).is_zero())
    };

    let mut rays = BTreeSet::new();
    for subset in (0..rows.len()).combinations(dim - 1) {
        let sub: Vec<IntVec> = subset.iter().map(|&i| rows[i].clone()).collect();
        let m = IntMat::from_rows_with_cols(&sub, dim)?;
        if rank(&m) != dim - 1 {
            continue;
        }
        let k = integer_kernel(&m);
        debug_assert_eq!(k.len(), 1);
        let k = primitive(&k[0])?;
        for cand in [k.clone(), k.neg()] {
            if feasible(&cand) {
                rays.insert(cand);
            }
        }
    }
    Ok(ConeV {
        dim,
        rays: rays.into_iter().collect(),
        lineality,
    })
}

/// Vertices of a bounded polyhedron, deduplicated and sorted.
pub fn vertices(hs: &HalfspaceSystem) -> Result<Vec<RatVec>, LatticeError> {
    let dim = hs.dim();
    check_dim(dim)?;
    if !hs.is_bounded()? {
        return Err(LatticeError::Unbounded);
    }
    let rows = hs.rows();
    let mut found = BTreeSet::new();
    for subset in (0..rows.len()).combinations(dim) {
        let sub: Vec<IntVec> = subset.iter().map(|&i| rows[i].normal.clone()).collect();
        let m = IntMat::from_rows(&sub)?;
        let rhs: Vec<Rat> = subset
            .iter()
            .map(|&i| Rat::from_integer(rows[i].bound.clone()))
            .collect();
        let Ok(x) = solve_rational(&m, &rhs) else {
            continue;
        };
        if hs.contains_rat(&x) {
            found.insert(x);
        }
    }
    Ok(found.into_iter().collect())
}

/// All lattice points of a bounded polyhedron in lexicographic order.
pub fn integer_points(hs: &HalfspaceSystem) -> Result<Vec<IntVec>, LatticeError> {
    integer_points_with_progress(hs, None)
}

/// Same as [`integer_points`], reporting `(scanned, total)` box points to
/// `progress` after each slice of the first coordinate.
pub fn integer_points_with_progress(
    hs: &HalfspaceSystem,
    progress: Option<&(dyn Fn(u64, u64) + Sync)>,
) -> Result<Vec<IntVec>, LatticeError> {
    let verts = vertices(hs)?;
    if verts.is_empty() {
        return Ok(Vec::new());
    }
    let dim = hs.dim();
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for c in 0..dim {
        let min = verts.iter().map(|v| v[c].clone()).min().unwrap();
        let max = verts.iter().map(|v| v[c].clone()).max().unwrap();
        lo.push(min.ceil().to_integer());
        hi.push(max.floor().to_integer());
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return Ok(Vec::new());
    }
    let total: u64 = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| u64::try_from(h - l + 1).unwrap_or(u64::MAX))
        .fold(1u64, |a, b| a.saturating_mul(b));

    let mut out = Vec::new();
    let mut point = lo.clone();
    let mut scanned = 0u64;
    loop {
        let v = IntVec::new(point.clone());
        if hs.contains(&v) {
            out.push(v);
        }
        scanned += 1;
        // odometer, last coordinate fastest
        let mut c = dim;
        loop {
            if c == 0 {
                if let Some(p) = progress {
                    p(scanned, total);
                }
                return Ok(out);
            }
            c -= 1;
            if point[c] < hi[c] {
                point[c] += 1;
                break;
            }
            point[c] = lo[c].clone();
        }
        if c == 0 {
            if let Some(p) = progress {
                p(scanned, total);
            }
        }
    }
}
