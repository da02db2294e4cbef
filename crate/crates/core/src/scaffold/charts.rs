use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{CoxPolynomial, CoxPresentation, ScaffoldError, VarSet};
use crate::lattice::{det, snf};
use crate::param::ParamPoly;

/// A finite abelian group acting diagonally on affine space, given by
/// cyclic factors `(order, weights mod order)`.
#[derive(Debug, Clone)]
pub struct AbelianQuotient {
    pub dim: usize,
    /// Nontrivial factors only, orders dividing each other in sequence.
    pub factors: Vec<(u64, Vec<u64>)>,
}

impl AbelianQuotient {
    pub fn trivial(dim: usize) -> Self {
        AbelianQuotient {
            dim,
            factors: Vec::new(),
        }
    }

    /// `1/r(a_1, ..., a_n)`.
    pub fn cyclic(r: u64, weights: &[u64]) -> Self {
        assert!(r > 0, "order must be positive");
        let mut q = AbelianQuotient::trivial(weights.len());
        if r > 1 {
            q.factors.push((r, weights.iter().map(|w| w % r).collect()));
        }
        q
    }

    /// Parses `1/r(a,b,c)`.
    pub fn parse(s: &str) -> Option<Self> {
        let rest = s.trim().strip_prefix("1/")?;
        let (r, w) = rest.split_once('(')?;
        let w = w.strip_suffix(')')?;
        let weights: Vec<u64> = w.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
        Some(AbelianQuotient::cyclic(r.trim().parse().ok()?, &weights))
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// The exponent of the group, a common denominator for all elements.
    fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |a, (r, _)| a.lcm(r))
    }

    /// Every group element as a weight vector over the common denominator.
    pub fn elements(&self) -> BTreeSet<Vec<u64>> {
        let n = self.exponent();
        let mut out: BTreeSet<Vec<u64>> = [vec![0; self.dim]].into_iter().collect();
        for (r, w) in &self.factors {
            let step: Vec<u64> = w.iter().map(|x| x * (n / r) % n).collect();
            let mut next = BTreeSet::new();
            for e in &out {
                let mut cur = e.clone();
                for _ in 0..*r {
                    next.insert(cur.clone());
                    cur = cur.iter().zip(&step).map(|(a, b)| (a + b) % n).collect();
                }
            }
            out = next;
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.elements().len() as u64
    }

    /// Canonical form up to coordinate permutation: the least sorted element
    /// list over all permutations.
    fn canonical(&self) -> (u64, Vec<Vec<u64>>) {
        let n = self.exponent();
        let elements = self.elements();
        let best = (0..self.dim)
            .permutations(self.dim)
            .map(|p| {
                let mut v: Vec<Vec<u64>> = elements
                    .iter()
                    .map(|e| p.iter().map(|&i| e[i]).collect())
                    .collect();
                v.sort();
                v
            })
            .min()
            .unwrap_or_default();
        (n, best)
    }

    /// Cyclic weights rescaled by the unit giving the least weight vector.
    fn display_weights(&self) -> Option<(u64, Vec<u64>)> {
        let [(r, w)] = self.factors.as_slice() else {
            return None;
        };
        (1..*r)
            .filter(|u| u.gcd(r) == 1)
            .map(|u| w.iter().map(|x| x * u % r).collect::<Vec<_>>())
            .min()
            .map(|w| (*r, w))
    }
}

/// Same group up to permuting coordinates; rescaling a cyclic generator by a
/// unit does not change the group, so it is covered.
impl PartialEq for AbelianQuotient {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.canonical() == other.canonical()
    }
}

impl Eq for AbelianQuotient {}

impl fmt::Display for AbelianQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[u64]| w.iter().map(|x| x.to_string()).join(",");
        if self.factors.is_empty() {
            return write!(f, "smooth");
        }
        if let Some((r, w)) = self.display_weights() {
            return write!(f, "1/{r}({})", join(&w));
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(r, w)| format!("1/{r}({})", join(w)))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl Serialize for AbelianQuotient {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Factor<'a> {
            order: u64,
            weights: &'a [u64],
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            symbol: String,
            order: u64,
            factors: Vec<Factor<'a>>,
        }
        Repr {
            symbol: self.to_string(),
            order: self.order(),
            factors: self
                .factors
                .iter()
                .map(|(r, w)| Factor { order: *r, weights: w })
                .collect(),
        }
        .serialize(s)
    }
}

/// Local picture of the family on the affine chart of one maximal cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChartReport {
    pub cone: VarSet,
    pub cone_names: Vec<String>,
    pub quotient: AbelianQuotient,
    pub local_equation: CoxPolynomial,
    pub constant_term: ParamPoly,
    /// A chart coordinate occurring only as a bare linear term with a
    /// nonzero numeric coefficient; the equation can be solved for it.
    pub quasi_smooth_linear_variable: Option<String>,
}

impl ChartReport {
    pub fn has_constant_term(&self) -> bool {
        !self.constant_term.is_zero()
    }

    pub fn is_quasi_smooth(&self) -> bool {
        self.quasi_smooth_linear_variable.is_some()
    }
}

/// The group `N / <rays of the cone>` with weights on the chart coordinates.
///
/// With `S = U B V` for the ray-column matrix `B`, the `k`-th factor is
/// generated by `U^-1 e_k`, whose coordinates in the ray basis are
/// `V e_k / s_k`.
fn cone_quotient(cox: &CoxPresentation, cone: &[usize]) -> AbelianQuotient {
    let b = cox.rays.select_rows(cone).transpose();
    let s = snf(&b);
    let d = cone.len();
    let mut q = AbelianQuotient::trivial(d);
    for (k, sk) in s.diagonal().iter().enumerate() {
        let r = sk.to_u64().expect("chart group order fits in u64");
        if r <= 1 {
            continue;
        }
        let weights = (0..d)
            .map(|i| s.v[(i, k)].mod_floor(sk).to_u64().expect("reduced weight"))
            .collect();
        q.factors.push((r, weights));
    }
    q
}

fn linear_variable(local: &CoxPolynomial, cone: &[usize]) -> Option<usize> {
    cone.iter().copied().find(|&v| {
        let mut bare = false;
        for (e, c) in local.terms() {
            if e[v] == 0 {
                continue;
            }
            let is_bare = e[v] == 1 && e.iter().enumerate().all(|(i, &x)| i == v || x == 0);
            if !is_bare {
                return false;
            }
            bare = c.as_constant().is_some_and(|c| !c.is_zero());
        }
        bare
    })
}

/// Dehomogenizes `family` on every maximal cone of `cox`, in sorted cone
/// order.
pub fn chart_analysis(
    cox: &CoxPresentation,
    family: &CoxPolynomial,
) -> Result<Vec<ChartReport>, ScaffoldError> {
    if family.vars != cox.names {
        return Err(ScaffoldError::VariableMismatch(
            "family and presentation use different variables".into(),
        ));
    }
    if family.homogeneous_class(cox).is_none() && !family.is_empty() {
        return Err(ScaffoldError::NotHomogeneous);
    }
    let mut cones = cox.cones.clone();
    cones.sort();
    Ok(cones
        .into_iter()
        .map(|cone| {
            let quotient = cone_quotient(cox, &cone);
            debug_assert_eq!(
                quotient.order(),
                det(&cox.rays.select_rows(&cone)).abs().to_u64().unwrap_or(0)
            );
            let local_equation = family.dehomogenize(&cone);
            let constant_term = local_equation.constant_term();
            let quasi_smooth_linear_variable =
                linear_variable(&local_equation, &cone).map(|v| cox.names[v].clone());
            ChartReport {
                cone_names: cone.iter().map(|&i| cox.names[i].clone()).collect(),
                cone,
                quotient,
                local_equation,
                constant_term,
                quasi_smooth_linear_variable,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "witness", rename_all = "snake_case")]
pub enum FiberVerdict {
    Verified,
    /// A semistable zero pattern on which the scan cannot rule out a point.
    Inconclusive(VarSet),
}

/// Checks that no member of the family meets the locus where `forced_zero`
/// vanishes, one coordinate stratum at a time.
///
/// On the stratum where exactly the variables of `S` vanish, only the terms
/// avoiding `S` survive. A single surviving term with a numeric coefficient
/// is nowhere zero there; no surviving term at all is only acceptable if the
/// stratum is unstable. Anything else is reported.
pub fn fiber_avoidance(
    cox: &CoxPresentation,
    family: &CoxPolynomial,
    forced_zero: &[usize],
) -> Result<FiberVerdict, ScaffoldError> {
    let n = cox.nvars();
    if n > 63 || forced_zero.iter().any(|&i| i >= n) {
        return Err(ScaffoldError::VariableMismatch("forced variables out of range".into()));
    }
    let forced: u64 = forced_zero.iter().fold(0, |m, &i| m | 1 << i);
    let supports: Vec<(u64, &ParamPoly)> = family
        .terms()
        .iter()
        .map(|(e, c)| {
            let mask = e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u64, |m, (i, _)| m | 1 << i);
            (mask, c)
        })
        .collect();
    for s in 0..1u64 << n {
        if s & forced != forced || cox.is_unstable(s) {
            continue;
        }
        let surviving: Vec<&ParamPoly> = supports
            .iter()
            .filter(|(m, _)| m & s == 0)
            .map(|(_, c)| *c)
            .collect();
        let ok = matches!(surviving.as_slice(), [c] if c.as_constant().is_some_and(|c| !c.is_zero()));
        if !ok {
            return Ok(FiberVerdict::Inconclusive((0..n).filter(|i| s >> i & 1 == 1).collect()));
        }
    }
    Ok(FiberVerdict::Verified)
}
