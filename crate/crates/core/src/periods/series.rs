use num_traits::One;

use super::{PeriodsError, PowerSeries};
use crate::lattice::Rat;
use crate::param::ParamPoly;

/// `sqrt(1 + u)` through `u^d`, with coefficients `binomial(1/2, n)`.
pub fn sqrt_series(d: usize) -> PowerSeries {
    let half = Rat::new(1.into(), 2.into());
    let mut c = Rat::one();
    let mut coeffs = Vec::with_capacity(d + 1);
    for n in 0..=d {
        coeffs.push(ParamPoly::constant(c.clone()));
        // binomial(1/2, n + 1) = binomial(1/2, n) * (1/2 - n) / (n + 1)
        c = c * (&half - Rat::from_integer(n.into())) / Rat::from_integer((n + 1).into());
    }
    PowerSeries::new(d, coeffs)
}

/// `g(h(z))` through `z^d`, by Horner's rule. `h` must have zero constant
/// term and both series must be known through order `d`.
pub fn series_substitute(g: &PowerSeries, h: &PowerSeries, d: usize) -> Result<PowerSeries, PeriodsError> {
    if !h.coeff(0).is_zero() {
        return Err(PeriodsError::NonzeroConstant);
    }
    let have = g.order().min(h.order());
    if d > have {
        return Err(PeriodsError::Truncation { needed: d, have });
    }
    let h = h.truncate(d);
    let mut out = PowerSeries::zero(d);
    for k in (0..=d).rev() {
        out = &(&out * &h) + &PowerSeries::monomial(d, 0, g.coeff(k).clone());
    }
    Ok(out)
}
