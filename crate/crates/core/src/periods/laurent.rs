use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PowerSeries;
use crate::lattice::{binomial, IntMat, IntVec, Rat};
use crate::param::ParamPoly;
use crate::polygon::LatticePolygon;

/// A Laurent polynomial with parameter-polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, ParamPoly>,
}

impl LaurentPolynomial {
    pub fn zero(nvars: usize) -> Self {
        LaurentPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = LaurentPolynomial::zero(nvars);
        p.add_term(vec![0; nvars], ParamPoly::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, ParamPoly)>>(nvars: usize, terms: I) -> Self {
        let mut p = LaurentPolynomial::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: Vec<i64>, coeff: ParamPoly) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_default();
        *slot += &coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, ParamPoly> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[i64]) -> ParamPoly {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> ParamPoly {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms.values().flat_map(|c| c.params()).collect()
    }

    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = LaurentPolynomial::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> LaurentPolynomial {
        (0..k).fold(LaurentPolynomial::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> LaurentPolynomial {
        self.map_coeffs(|c| c.substitute(values))
    }

    pub fn compose(&self, images: &BTreeMap<String, ParamPoly>) -> LaurentPolynomial {
        self.map_coeffs(|c| c.compose(images))
    }

    fn map_coeffs(&self, f: impl Fn(&ParamPoly) -> ParamPoly) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// The monomial change of variables `x^e -> x^(g e)`.
    pub fn transform(&self, g: &IntMat) -> LaurentPolynomial {
        let map = |e: &Vec<i64>| {
            g.mul_vec(&IntVec::from_i64s(e))
                .iter()
                .map(|x| x.to_i64().expect("exponent fits in i64"))
                .collect()
        };
        LaurentPolynomial::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (map(e), c.clone())))
    }

    /// Newton polygon of a two-variable polynomial with full-dimensional
    /// support.
    pub fn newton_polygon(&self) -> Option<LatticePolygon> {
        if self.nvars != 2 {
            return None;
        }
        let pts: Vec<IntVec> = self.terms.keys().map(|e| IntVec::from_i64s(e)).collect();
        LatticePolygon::hull(&pts).ok()
    }

    fn var_name(&self, i: usize) -> String {
        match (self.nvars, i) {
            (n, 0) if n <= 3 => "x".into(),
            (n, 1) if n <= 3 => "y".into(),
            (3, 2) => "z".into(),
            _ => format!("x{}", i + 1),
        }
    }
}

/// Terms ordered by descending exponent, e.g. `x^2*y + 2*y^2 + a1*x*y + x^-2*y^-1`.
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.var_name(i)
                    } else {
                        format!("{}^{x}", self.var_name(i))
                    }
                })
                .collect();
            let mono = mono.join("*");
            let cs = c.to_string();
            let term = if mono.is_empty() {
                if c.len() > 1 {
                    format!("({cs})")
                } else {
                    cs
                }
            } else if *c == ParamPoly::one() {
                mono
            } else if *c == ParamPoly::int(-1) {
                format!("-{mono}")
            } else if c.len() > 1 {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            match (k, term.strip_prefix('-')) {
                (0, _) => write!(f, "{term}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Vec<i64>,
    coeff: ParamPoly,
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    #[serde(default)]
    params: Vec<String>,
    terms: Vec<TermRepr>,
}

impl Serialize for LaurentPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LaurentRepr {
            params: self.params().into_iter().collect(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermRepr {
                    exp: e.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Reads `{"params": [...], "terms": [{"exp": [...], "coeff": "..."}]}`.
/// Repeated exponents are summed; a declared parameter list must cover
/// every name used.
impl<'de> Deserialize<'de> for LaurentPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = LaurentRepr::deserialize(d)?;
        let nvars = r.terms.first().map_or(2, |t| t.exp.len());
        if r.terms.iter().any(|t| t.exp.len() != nvars) {
            return Err(D::Error::custom("terms have exponents of different lengths"));
        }
        let p = LaurentPolynomial::from_terms(nvars, r.terms.into_iter().map(|t| (t.exp, t.coeff)));
        if !r.params.is_empty() {
            let declared: BTreeSet<String> = r.params.into_iter().collect();
            if let Some(u) = p.params().into_iter().find(|x| !declared.contains(x)) {
                return Err(D::Error::custom(format!("undeclared parameter {u}")));
            }
        }
        Ok(p)
    }
}

/// `c_k` = constant term of `f^k` for `k <= d`.
///
/// For two variables, a term `e` of `f^k` can only feed the constant term
/// of `f^d` if `-e` lies in `(d - k)` times the Newton polygon, so other
/// terms are dropped along the way.
pub fn classical_period(f: &LaurentPolynomial, d: usize) -> PowerSeries {
    let newton: Option<Vec<(IntVec, BigInt)>> = f.newton_polygon().map(|p| {
        (0..p.len()).map(|i| p.edge_normal_and_height(i)).collect()
    });
    let reachable = |e: &[i64], budget: usize| match &newton {
        // <w, -e> <= budget * h for every edge
        Some(edges) => edges.iter().all(|(w, h)| {
            let v = -(&w[0] * e[0] + &w[1] * e[1]);
            v <= h * BigInt::from(budget)
        }),
        None => true,
    };

    let mut coeffs = vec![ParamPoly::one()];
    let mut power = LaurentPolynomial::one(f.nvars());
    for k in 1..=d {
        power = power.mul(f);
        power.terms.retain(|e, _| reachable(e, d - k));
        coeffs.push(power.constant_term());
    }
    PowerSeries::new(d, coeffs)
}

/// The edge-binomial skeleton of a Fano polygon.
///
/// Vertices get coefficient 1 and the `j`-th lattice point along an edge of
/// lattice length `l` gets `binomial(l, j)`. Interior points other than the
/// origin get parameters `p0, p1, ...` in lexicographic order; the origin is
/// left at 0.
pub fn edge_binomial_skeleton(p: &LatticePolygon) -> LaurentPolynomial {
    let to_i64 = |v: &IntVec| -> Vec<i64> { v.to_i64s() };
    let mut f = LaurentPolynomial::zero(2);
    let mut on_boundary = BTreeSet::new();
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let l = p.edge_lattice_length(i);
        let l_u = l.to_u64().expect("edge length fits in u64");
        let step: Vec<BigInt> = b.sub(a).iter().map(|x| x / &l).collect();
        // the end vertex is the start of the next edge
        for j in 0..l_u {
            let pt: Vec<i64> = a
                .iter()
                .zip(&step)
                .map(|(x, s)| (x + s * BigInt::from(j)).to_i64().expect("fits in i64"))
                .collect();
            on_boundary.insert(pt.clone());
            f.add_term(pt, ParamPoly::constant(Rat::from_integer(binomial(l_u, j))));
        }
    }
    let interior = p
        .lattice_points()
        .into_iter()
        .map(|v| to_i64(&v))
        .filter(|v| !on_boundary.contains(v) && v.iter().any(|&x| x != 0));
    for (k, pt) in interior.enumerate() {
        f.add_term(pt, ParamPoly::var(&format!("p{k}")));
    }
    f
}
