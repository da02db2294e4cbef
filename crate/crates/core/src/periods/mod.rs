//! Classical and quantum periods as exact truncated power series.

mod cones;
mod laurent;
mod quantum;
mod series;

pub use cones::{lambda_cone, mori_and_nef, relation_annihilates, CurveClassCone, MoriData, WallCurve};
pub use laurent::{classical_period, edge_binomial_skeleton, LaurentPolynomial};
pub use quantum::{quantum_period, QuantumPeriod};
pub use series::{series_substitute, sqrt_series};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{factorial, LatticeError, Rat};
use crate::param::{ParamError, ParamPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodsError {
    #[error("unassigned parameter(s): {0}")]
    Unassigned(String),
    #[error("series known to order {have}, order {needed} requested")]
    Truncation { needed: usize, have: usize },
    #[error("substituted series must have zero constant term")]
    NonzeroConstant,
    #[error("no wall relation for cones {0:?} and {1:?}")]
    RelationSolve(Vec<usize>, Vec<usize>),
    #[error("degree functional is not positive on ray {0}")]
    NonPositiveDegree(String),
    #[error("hypersurface class is negative on ray {0}")]
    NegativeHypersurfaceDegree(String),
    #[error("class group of rank {0} is not supported")]
    ClassRank(usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// `c_0 + c_1 t + ... + c_D t^D + O(t^{D+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    order: usize,
    coeffs: Vec<ParamPoly>,
}

impl PowerSeries {
    /// Pads with zeros or drops terms beyond `order`.
    pub fn new(order: usize, mut coeffs: Vec<ParamPoly>) -> Self {
        coeffs.resize(order + 1, ParamPoly::zero());
        PowerSeries { order, coeffs }
    }

    pub fn from_ints(order: usize, coeffs: &[i64]) -> Self {
        PowerSeries::new(order, coeffs.iter().map(|&c| ParamPoly::int(c)).collect())
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::new(order, Vec::new())
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::new(order, vec![ParamPoly::one()])
    }

    /// `c t^k`, or zero if `k` exceeds the order.
    pub fn monomial(order: usize, k: usize, c: ParamPoly) -> Self {
        let mut s = PowerSeries::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &ParamPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> PowerSeries {
        PowerSeries::new(order.min(self.order), self.coeffs.clone())
    }

    pub fn scale(&self, c: &ParamPoly) -> PowerSeries {
        PowerSeries::new(self.order, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> PowerSeries {
        (0..k).fold(PowerSeries::one(self.order), |acc, _| &acc * self)
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.coeffs.iter().flat_map(|c| c.params()).collect()
    }

    /// Substitutes the assigned parameters, keeping the others.
    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> PowerSeries {
        PowerSeries::new(self.order, self.coeffs.iter().map(|c| c.substitute(values)).collect())
    }

    /// Rational coefficients; every parameter must be assigned.
    pub fn evaluate(&self, values: &BTreeMap<String, Rat>) -> Result<Vec<Rat>, PeriodsError> {
        let left: BTreeSet<String> = self
            .params()
            .into_iter()
            .filter(|p| !values.contains_key(p))
            .collect();
        if !left.is_empty() {
            return Err(PeriodsError::Unassigned(left.into_iter().collect::<Vec<_>>().join(", ")));
        }
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.substitute(values).as_constant().expect("fully assigned"))
            .collect())
    }

    /// `c_d -> d! c_d`.
    pub fn regularize(&self) -> PowerSeries {
        PowerSeries::new(
            self.order,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(d, c)| c.scale(&Rat::from_integer(factorial(d as u64))))
                .collect(),
        )
    }

    /// Displays in the variable `var`, always ending with the `O(.)` term.
    pub fn display_in(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = c.to_string();
            let term = if power.is_empty() {
                if c.len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if *c == ParamPoly::one() {
                power
            } else if c.as_constant().is_some_and(|x| (-x).is_one()) {
                format!("-{power}")
            } else if c.len() > 1 {
                format!("({cs})*{power}")
            } else {
                format!("{cs}*{power}")
            };
            parts.push(term);
        }
        parts.push(format!("O({var}^{})", self.order + 1));
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("t"))
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        PowerSeries::new(order, (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect())
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        PowerSeries::new(order, (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        let mut out = vec![ParamPoly::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        PowerSeries::new(order, out)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    order: usize,
    coeffs: Vec<ParamPoly>,
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            order: self.order,
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        if r.coeffs.len() > r.order + 1 {
            return Err(serde::de::Error::custom("more coefficients than the order allows"));
        }
        Ok(PowerSeries::new(r.order, r.coeffs))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "order", rename_all = "snake_case")]
pub enum SeriesComparison {
    Equal,
    FirstMismatch(usize),
}

/// Compares coefficients `0..=d` exactly.
pub fn compare_series(
    a: &PowerSeries,
    b: &PowerSeries,
    d: usize,
) -> Result<SeriesComparison, PeriodsError> {
    let have = a.order.min(b.order);
    if d > have {
        return Err(PeriodsError::Truncation { needed: d, have });
    }
    Ok((0..=d)
        .find(|&k| a.coeffs[k] != b.coeffs[k])
        .map_or(SeriesComparison::Equal, SeriesComparison::FirstMismatch))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::parse_assignments;
    use proptest::prelude::*;

    #[test]
    fn regularize_and_compare() {
        assert_eq!(PowerSeries::from_ints(1, &[1, 1]).regularize(), PowerSeries::from_ints(1, &[1, 1]));
        assert_eq!(
            PowerSeries::from_ints(3, &[1, 1, 1, 1]).regularize(),
            PowerSeries::from_ints(3, &[1, 1, 2, 6])
        );
        let a = PowerSeries::from_ints(3, &[1, 0, 2]);
        let b = PowerSeries::from_ints(3, &[1, 0, 2, 1]);
        assert_eq!(compare_series(&a, &b, 3).unwrap(), SeriesComparison::FirstMismatch(3));
        assert_eq!(compare_series(&a, &b, 2).unwrap(), SeriesComparison::Equal);
        assert!(matches!(
            compare_series(&a, &b.truncate(2), 3),
            Err(PeriodsError::Truncation { needed: 3, have: 2 })
        ));
    }

    #[test]
    fn display_shows_order() {
        let s = PowerSeries::new(
            4,
            vec![
                ParamPoly::one(),
                ParamPoly::zero(),
                ParamPoly::parse("2*a1 + 14").unwrap(),
                ParamPoly::int(-1),
            ],
        );
        assert_eq!(s.to_string(), "1 + (2*a1 + 14)*t^2 - t^3 + O(t^5)");
        assert_eq!(PowerSeries::zero(0).to_string(), "O(t^1)");
    }

    #[test]
    fn evaluate_needs_all_params() {
        let s = PowerSeries::new(1, vec![ParamPoly::var("a1"), ParamPoly::parse("a1*b1").unwrap()]);
        let err = s.evaluate(&parse_assignments("a1=2").unwrap()).unwrap_err();
        assert_eq!(err, PeriodsError::Unassigned("b1".into()));
        let v = s.evaluate(&parse_assignments("a1=2,b1=1/2").unwrap()).unwrap();
        assert_eq!(v, vec![Rat::from_integer(2.into()), Rat::one()]);
    }

    #[test]
    fn json_round_trip() {
        let s = PowerSeries::new(2, vec![ParamPoly::one(), ParamPoly::parse("1/2*s2").unwrap()]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"order":2,"coeffs":["1","1/2*s2","0"]}"#);
        let back: PowerSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    fn series() -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec(-5i64..5, 1..6).prop_map(|c| PowerSeries::from_ints(5, &c))
    }

    proptest! {
        #[test]
        fn product_is_commutative_and_truncates(a in series(), b in series(), c in series()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!((&a * &b.truncate(3)).order(), 3);
        }
    }
}
