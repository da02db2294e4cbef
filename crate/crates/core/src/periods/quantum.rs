use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{lambda_cone, mori_and_nef, CurveClassCone, PeriodsError, PowerSeries};
use crate::lattice::{factorial, integer_points, IntVec, Rat};
use crate::param::ParamPoly;
use crate::scaffold::CoxPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuantumPeriod {
    pub nef: Vec<IntVec>,
    pub lambda: CurveClassCone,
    /// Number of curve classes in the truncated cone.
    pub classes_summed: usize,
    pub g: PowerSeries,
    pub regularized: PowerSeries,
}

/// Quantum period of a hypersurface of class `x_class` in the toric variety
/// of `cox`:
///
/// `G(t) = sum over l in Lambda of (X.l)! / prod_i (D_i.l)! * t^((-K - X).l)`
///
/// truncated at degree `d`, together with its regularization.
pub fn quantum_period(
    cox: &CoxPresentation,
    x_class: &IntVec,
    d: usize,
) -> Result<QuantumPeriod, PeriodsError> {
    let mori = mori_and_nef(cox)?;
    let degree = cox.anticanonical_class().sub(x_class);
    let lambda = lambda_cone(cox, &mori.nef, &degree)?;
    if let Some(bad) = lambda.rays.iter().find(|r| x_class.dot(r).is_negative()) {
        return Err(PeriodsError::NegativeHypersurfaceDegree(bad.to_string()));
    }

    let points = integer_points(&lambda.truncated(d)?)?;
    let var_classes: Vec<IntVec> = (0..cox.nvars()).map(|i| cox.class_of_var(i)).collect();
    let fact = |x: &BigInt, l: &IntVec| -> BigInt {
        assert!(!x.is_negative(), "negative factorial argument at {l}");
        factorial(x.to_u64().expect("factorial argument fits in u64"))
    };
    let mut coeffs = vec![Rat::zero(); d + 1];
    for l in &points {
        let deg = degree.dot(l).to_usize().expect("degree lies in 0..=d");
        debug_assert!(deg > 0 || l.is_zero());
        let den: BigInt = var_classes.iter().map(|c| fact(&c.dot(l), l)).product();
        coeffs[deg] += Rat::new(fact(&x_class.dot(l), l), den);
    }
    let g = PowerSeries::new(d, coeffs.into_iter().map(ParamPoly::constant).collect());
    Ok(QuantumPeriod {
        nef: mori.nef,
        lambda,
        classes_summed: points.len(),
        regularized: g.regularize(),
        g,
    })
}
