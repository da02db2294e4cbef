use num_traits::{Signed, Zero};
use serde::Serialize;

use super::PeriodsError;
use crate::lattice::{
    dual_cone, integer_kernel, primitive_of_rational, solve_rational, Halfspace, HalfspaceSystem,
    IntVec, Rat, MAX_DIM,
};
use crate::scaffold::{CoxPresentation, VarSet};

/// The torus-invariant curve of a wall and its intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallCurve {
    /// The rays spanning the wall.
    pub wall: VarSet,
    /// The two maximal cones meeting along it.
    pub cones: (VarSet, VarSet),
    /// Primitive class in the dual of the class-group basis.
    pub class: IntVec,
    /// `<class of x_i, class>` for every variable; a positive multiple of
    /// the linear relation among the rays of the two cones.
    pub degrees: IntVec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoriData {
    pub walls: Vec<WallCurve>,
    /// Extreme rays of the cone of curves.
    pub mori_rays: Vec<IntVec>,
    /// Extreme rays of the nef cone, in the class-group basis.
    pub nef: Vec<IntVec>,
}

fn walls(cones: &[VarSet], dim: usize) -> Vec<(VarSet, VarSet, VarSet)> {
    let mut out = Vec::new();
    for (i, a) in cones.iter().enumerate() {
        for b in &cones[i + 1..] {
            let shared: VarSet = a.iter().filter(|r| b.contains(r)).copied().collect();
            if shared.len() + 1 == dim {
                out.push((a.clone(), b.clone(), shared));
            }
        }
    }
    out
}

/// Wall curves, the Mori cone they span and its dual, the nef cone.
///
/// On a wall the `d + 1` rays of the two adjacent cones satisfy one linear
/// relation, signed so the two rays off the wall have positive
/// coefficients; the curve class `l` is the solution of `W^t l = relation`.
pub fn mori_and_nef(cox: &CoxPresentation) -> Result<MoriData, PeriodsError> {
    let r = cox.class_rank();
    if r == 0 || r > MAX_DIM {
        return Err(PeriodsError::ClassRank(r));
    }
    let n = cox.nvars();
    let dim = cox.rays.ncols();
    let w = &cox.weights;
    let gram = w.mul(&w.transpose());

    let mut curves = Vec::new();
    for (a, b, wall) in walls(&cox.cones, dim) {
        let fail = || PeriodsError::RelationSolve(a.clone(), b.clone());
        let mut support: VarSet = a.iter().chain(&b).copied().collect();
        support.sort_unstable();
        support.dedup();
        let cols = cox.rays.select_rows(&support).transpose();
        let kernel = integer_kernel(&cols);
        let [k] = kernel.as_slice() else {
            return Err(fail());
        };
        let off: Vec<usize> = (0..support.len()).filter(|i| !wall.contains(&support[*i])).collect();
        let k = if off.iter().all(|&i| k[i].is_positive()) {
            k.clone()
        } else if off.iter().all(|&i| k[i].is_negative()) {
            k.neg()
        } else {
            return Err(fail());
        };
        let mut relation = IntVec::zeros(n);
        for (i, &v) in support.iter().enumerate() {
            relation[v] = k[i].clone();
        }

        // (W W^t) l = W relation, then check W^t l = relation
        let rhs = w.mul_vec(&relation).to_rat();
        let l = solve_rational(&gram, &rhs).map_err(|_| fail())?;
        let back: Vec<Rat> = (0..n)
            .map(|i| w.column(i).dot_rat(&l))
            .collect();
        if back != relation.to_rat() {
            return Err(fail());
        }
        let class = primitive_of_rational(&l)?;
        let degrees = w.transpose().mul_vec(&class);
        curves.push(WallCurve {
            wall,
            cones: (a, b),
            class,
            degrees,
        });
    }

    let classes: Vec<IntVec> = curves.iter().map(|c| c.class.clone()).collect();
    let nef = dual_cone(&HalfspaceSystem::cone(r, classes)?)?;
    let mori = dual_cone(&HalfspaceSystem::cone(r, nef.rays.clone())?)?;
    Ok(MoriData {
        walls: curves,
        mori_rays: mori.rays,
        nef: nef.rays,
    })
}

/// Curve classes pairing nonnegatively with every nef class and every
/// variable class, graded by a degree functional.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClassCone {
    pub system: HalfspaceSystem,
    pub degree: IntVec,
    pub rays: Vec<IntVec>,
}

impl CurveClassCone {
    pub fn contains(&self, l: &IntVec) -> bool {
        self.system.contains(l)
    }

    /// The bounded slice `{l in cone : <degree, l> <= d}`.
    pub fn truncated(&self, d: usize) -> Result<HalfspaceSystem, PeriodsError> {
        let mut sys = self.system.clone();
        sys.push(Halfspace::new(self.degree.neg(), -(d as i64)))?;
        Ok(sys)
    }
}

/// The cone of curve classes on which every factorial in the quantum
/// period has a nonnegative argument. The degree functional must be
/// positive on all its rays, so that each degree slice is finite.
pub fn lambda_cone(
    cox: &CoxPresentation,
    nef: &[IntVec],
    degree: &IntVec,
) -> Result<CurveClassCone, PeriodsError> {
    let r = cox.class_rank();
    let mut normals: Vec<IntVec> = nef.to_vec();
    normals.extend((0..cox.nvars()).map(|i| cox.class_of_var(i)));
    let system = HalfspaceSystem::cone(r, normals)?;
    let v = dual_cone(&system)?;
    if let Some(l) = v.lineality.first() {
        return Err(PeriodsError::NonPositiveDegree(l.to_string()));
    }
    if let Some(bad) = v.rays.iter().find(|ray| !degree.dot(ray).is_positive()) {
        return Err(PeriodsError::NonPositiveDegree(bad.to_string()));
    }
    Ok(CurveClassCone {
        system,
        degree: degree.clone(),
        rays: v.rays,
    })
}

/// True when `degrees` is a linear relation among the rays.
pub fn relation_annihilates(cox: &CoxPresentation, degrees: &IntVec) -> bool {
    let combo = cox.rays.transpose().mul_vec(degrees);
    combo.iter().all(|x| x.is_zero())
}
