use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::{CoxPresentation, ScaffoldError, Scaffolding};
use crate::lattice::{dual_cone, integer_kernel, HalfspaceSystem, IntVec, Rat};
use crate::param::{Monomial, ParamError, ParamPoly};

/// A polynomial in Cox coordinates with parameter-polynomial coefficients.
///
/// Terms keep their insertion order for display; equality ignores order.
#[derive(Debug, Clone)]
pub struct CoxPolynomial {
    pub vars: Vec<String>,
    terms: Vec<(Vec<u32>, ParamPoly)>,
}

impl CoxPolynomial {
    pub fn new(vars: Vec<String>) -> Self {
        CoxPolynomial {
            vars,
            terms: Vec::new(),
        }
    }

    /// Adds `coeff * x^exp`, merging with an existing term.
    pub fn push(&mut self, exp: Vec<u32>, coeff: ParamPoly) {
        assert_eq!(exp.len(), self.vars.len(), "exponent length");
        if let Some(k) = self.terms.iter().position(|(e, _)| e == &exp) {
            let sum = &self.terms[k].1 + &coeff;
            if sum.is_zero() {
                self.terms.remove(k);
            } else {
                self.terms[k].1 = sum;
            }
        } else if !coeff.is_zero() {
            self.terms.push((exp, coeff));
        }
    }

    pub fn terms(&self) -> &[(Vec<u32>, ParamPoly)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common class of all terms, or `None` if they differ.
    pub fn homogeneous_class(&self, cox: &CoxPresentation) -> Option<IntVec> {
        let mut classes = self.terms.iter().map(|(e, _)| cox.class_of(e));
        let first = classes.next()?;
        classes.all(|c| c == first).then_some(first)
    }

    /// Sets every variable outside `keep` to 1.
    pub fn dehomogenize(&self, keep: &[usize]) -> CoxPolynomial {
        let mut out = CoxPolynomial::new(self.vars.clone());
        for (e, c) in &self.terms {
            let e2 = e
                .iter()
                .enumerate()
                .map(|(i, &x)| if keep.contains(&i) { x } else { 0 })
                .collect();
            out.push(e2, c.clone());
        }
        out
    }

    pub fn constant_term(&self) -> ParamPoly {
        self.terms
            .iter()
            .find(|(e, _)| e.iter().all(|&x| x == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn specialize(&self, values: &BTreeMap<String, Rat>) -> CoxPolynomial {
        let mut out = CoxPolynomial::new(self.vars.clone());
        for (e, c) in &self.terms {
            out.push(e.clone(), c.substitute(values));
        }
        out
    }

    /// Parses an expression; names in `vars` are Cox variables, every other
    /// name is a parameter.
    pub fn parse(vars: &[&str], s: &str) -> Result<CoxPolynomial, ParamError> {
        let p = ParamPoly::parse(s)?;
        let mut out = CoxPolynomial::new(vars.iter().map(|v| v.to_string()).collect());
        for (m, c) in p.terms() {
            let mut exp = vec![0u32; vars.len()];
            let mut coeff = ParamPoly::constant(c.clone());
            for (name, e) in m.factors() {
                match vars.iter().position(|v| v == name) {
                    Some(i) => exp[i] += e,
                    None => coeff = &coeff * &ParamPoly::var(name).pow(*e),
                }
            }
            out.push(exp, coeff);
        }
        Ok(out)
    }

    fn monomial_string(&self, exp: &[u32]) -> String {
        let mut idx: Vec<usize> = (0..exp.len()).filter(|&i| exp[i] > 0).collect();
        // lower powers first, as in `y1*y2*x1^2*x2^2`
        idx.sort_by_key(|&i| (exp[i], i));
        idx.iter()
            .map(|&i| {
                if exp[i] == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], exp[i])
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn term_string(coeff: &ParamPoly, mono: &str) -> String {
    if mono.is_empty() {
        return if coeff.len() > 1 {
            format!("({coeff})")
        } else {
            coeff.to_string()
        };
    }
    if let Some(c) = coeff.as_constant() {
        if c.is_one() {
            return mono.to_string();
        }
        if (-&c).is_one() {
            return format!("-{mono}");
        }
    }
    if coeff.len() > 1 {
        format!("({coeff})*{mono}")
    } else {
        format!("{coeff}*{mono}")
    }
}

impl fmt::Display for CoxPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let t = term_string(c, &self.monomial_string(e));
            match (i, t.strip_prefix('-')) {
                (0, _) => write!(f, "{t}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {t}")?,
            }
        }
        Ok(())
    }
}

impl PartialEq for CoxPolynomial {
    fn eq(&self, other: &Self) -> bool {
        let a: BTreeMap<_, _> = self.terms.iter().map(|(e, c)| (e, c)).collect();
        let b: BTreeMap<_, _> = other.terms.iter().map(|(e, c)| (e, c)).collect();
        self.vars == other.vars && a == b
    }
}

impl Eq for CoxPolynomial {}

impl Serialize for CoxPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The hyperplane `h` vanishing on `theta(N)` and the resulting binomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypersurface {
    pub h: IntVec,
    /// `<h, ray>` for every Cox variable.
    pub pairings: IntVec,
    pub equation: CoxPolynomial,
    /// Class of the equation in the class group of `cox`.
    pub class: IntVec,
}

pub fn hypersurface_from_scaffolding(
    s: &Scaffolding,
    cox: &CoxPresentation,
) -> Result<Hypersurface, ScaffoldError> {
    let theta = s.theta();
    let kernel = integer_kernel(&theta.transpose());
    if kernel.len() != 1 {
        return Err(ScaffoldError::Corank(kernel.len()));
    }
    let mut h = kernel.into_iter().next().unwrap();
    let pair = |h: &IntVec, i: usize| h.dot(&cox.rays.row(i));

    let shape_vars: Vec<usize> = s
        .shape
        .names()
        .iter()
        .map(|n| {
            cox.var_index(n)
                .ok_or_else(|| ScaffoldError::VariableMismatch(format!("no ray named {n}")))
        })
        .collect::<Result<_, _>>()?;
    if shape_vars.iter().any(|&i| pair(&h, i).is_negative()) {
        h = h.neg();
    }
    if !shape_vars.iter().all(|&i| pair(&h, i).is_positive()) {
        return Err(ScaffoldError::ShapeSign);
    }

    let n = cox.nvars();
    let pairings = IntVec::new((0..n).map(|i| pair(&h, i)).collect());
    let to_u32 = |x: &BigInt| x.to_u32().expect("pairing fits in u32");
    let pos: Vec<u32> = pairings
        .iter()
        .map(|p| if p.is_positive() { to_u32(p) } else { 0 })
        .collect();
    let neg: Vec<u32> = pairings
        .iter()
        .map(|p| if p.is_negative() { to_u32(&-p) } else { 0 })
        .collect();
    let class = cox.class_of(&pos);
    if class != cox.class_of(&neg) {
        return Err(ScaffoldError::NotHomogeneous);
    }
    let mut equation = CoxPolynomial::new(cox.names.clone());
    equation.push(pos, ParamPoly::one());
    equation.push(neg, ParamPoly::int(-1));
    Ok(Hypersurface {
        h,
        pairings,
        equation,
        class,
    })
}

/// All monomials of the given class, in descending lexicographic order of
/// exponent vectors.
///
/// A functional positive on every variable class bounds the search: it is
/// the sum of the extreme rays of `{l : <l, class_i> >= 0}`.
pub fn section_monomials(cox: &CoxPresentation, class: &IntVec) -> Result<Vec<Vec<u32>>, ScaffoldError> {
    let r = cox.class_rank();
    let n = cox.nvars();
    let classes: Vec<IntVec> = (0..n).map(|i| cox.class_of_var(i)).collect();
    let cone = dual_cone(&HalfspaceSystem::cone(r, classes.clone())?)?;
    if !cone.lineality.is_empty() {
        return Err(ScaffoldError::UnboundedSections);
    }
    let lambda = cone.rays.iter().fold(IntVec::zeros(r), |a, b| a.add(b));
    let weights: Vec<BigInt> = classes.iter().map(|c| lambda.dot(c)).collect();
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(ScaffoldError::UnboundedSections);
    }
    let budget = lambda.dot(class);
    let mut out = Vec::new();
    if budget.is_negative() {
        return Ok(out);
    }
    let mut exp = vec![0u32; n];
    enumerate(0, &budget, &weights, &mut exp, &mut |e| {
        if &cox.class_of(e) == class {
            out.push(e.to_vec());
        }
    });
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

fn enumerate(i: usize, left: &BigInt, w: &[BigInt], exp: &mut [u32], visit: &mut impl FnMut(&[u32])) {
    if i == w.len() {
        if left.is_zero() {
            visit(exp);
        }
        return;
    }
    let mut k = 0u32;
    let mut rest = left.clone();
    while !rest.is_negative() {
        exp[i] = k;
        enumerate(i + 1, &rest, w, exp, visit);
        rest -= &w[i];
        k += 1;
    }
    exp[i] = 0;
}

/// The equation plus `s_k` times each further section of its class, with
/// parameters `s1, s2, ...` assigned in descending lexicographic order of
/// the extra monomials.
pub fn perturbation_family(
    cox: &CoxPresentation,
    hyp: &Hypersurface,
) -> Result<CoxPolynomial, ScaffoldError> {
    let mut family = hyp.equation.clone();
    let present: Vec<&Vec<u32>> = hyp.equation.terms().iter().map(|(e, _)| e).collect();
    let mut k = 0;
    for m in section_monomials(cox, &hyp.class)? {
        if present.contains(&&m) {
            continue;
        }
        k += 1;
        family.push(m, ParamPoly::term(Monomial::var(&format!("s{k}")), Rat::one()));
    }
    Ok(family)
}
