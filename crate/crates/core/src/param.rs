//! Polynomials with exact rational coefficients in named parameters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{fmt_rat, Rat};

/// Product of named parameters, sorted by name, exponents positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// The names with multiplicity, e.g. `a1^2*b` -> `[a1, a1, b]`.
    fn expanded(&self) -> impl Iterator<Item = &str> {
        self.0
            .iter()
            .flat_map(|(n, e)| std::iter::repeat_n(n.as_str(), *e as usize))
    }
}

/// Display order: higher total degree first, then lexicographic on the
/// expanded factor list, so `a1^2 < a1*b1 < b1^2 < a1 < 1`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| self.expanded().cmp(other.expanded()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (n, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("division by a non-constant or zero")]
    BadDivision,
    #[error("unassigned parameter(s): {0}")]
    Unassigned(String),
}

/// A polynomial over the rationals in named parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn int(n: i64) -> Self {
        ParamPoly::constant(Rat::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &str) -> Self {
        ParamPoly::term(Monomial::var(name), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Replaces the assigned parameters by values; others are kept.
    pub fn substitute(&self, values: &BTreeMap<String, Rat>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (n, e) in &m.0 {
                match values.get(n) {
                    Some(v) => coeff *= num_traits::pow(v.clone(), *e as usize),
                    None => rest.push((n.clone(), *e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Replaces parameters by polynomials; others are kept.
    pub fn compose(&self, images: &BTreeMap<String, ParamPoly>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut t = ParamPoly::constant(c.clone());
            for (n, e) in &m.0 {
                let f = match images.get(n) {
                    Some(p) => p.pow(*e),
                    None => ParamPoly::term(Monomial(vec![(n.clone(), *e)]), Rat::one()),
                };
                t = &t * &f;
            }
            out += &t;
        }
        out
    }

    /// Value when every parameter is assigned.
    pub fn evaluate(&self, values: &BTreeMap<String, Rat>) -> Result<Rat, ParamError> {
        let s = self.substitute(values);
        s.as_constant().ok_or_else(|| {
            ParamError::Unassigned(s.params().into_iter().collect::<Vec<_>>().join(", "))
        })
    }

    pub fn parse(s: &str) -> Result<ParamPoly, ParamError> {
        let mut p = Parser { src: s.as_bytes(), pos: 0 };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl From<Rat> for ParamPoly {
    fn from(c: Rat) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<i64> for ParamPoly {
    fn from(n: i64) -> Self {
        ParamPoly::int(n)
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, rhs: ParamPoly) -> ParamPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: ParamPoly) -> ParamPoly {
        &self - &rhs
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: ParamPoly) -> ParamPoly {
        &self * &rhs
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rat(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rat(&a))?;
            }
        }
        Ok(())
    }
}

impl Serialize for ParamPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ParamPoly::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParamError {
        ParamError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<ParamPoly, ParamError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamPoly, ParamError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            if c == b'*' {
                acc = acc * rhs;
            } else {
                let d = rhs.as_constant().filter(|d| !d.is_zero()).ok_or(ParamError::BadDivision)?;
                acc = acc.scale(&d.recip());
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamPoly, ParamError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ParamPoly, ParamError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let k: u32 = digits.parse().map_err(|_| self.error("expected an exponent"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(u8) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && f(self.src[self.pos]) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<ParamPoly, ParamError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(ParamPoly::constant(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == b'_');
                Ok(ParamPoly::var(&name))
            }
            _ => Err(self.error("expected a number, name or '('")),
        }
    }
}

/// Parses `a1=1,b1=0,c2=-1/2` into an assignment map.
pub fn parse_assignments(s: &str) -> Result<BTreeMap<String, Rat>, ParamError> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part.split_once('=').ok_or(ParamError::Parse {
            pos: 0,
            msg: format!("expected name=value, got {part:?}"),
        })?;
        let v = ParamPoly::parse(value)?
            .as_constant()
            .ok_or(ParamError::Parse {
                pos: 0,
                msg: format!("value of {name} is not a number"),
            })?;
        out.insert(name.trim().to_string(), v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;
    use proptest::prelude::*;

    fn p(s: &str) -> ParamPoly {
        ParamPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("2*(a1*a2 + b1*b2 + c1*c2 + 7)").to_string(), "2*a1*a2 + 2*b1*b2 + 2*c1*c2 + 14");
        assert_eq!(p("c2 + c1 + 4*b2 + 4*b1 + 2*a2*c1 + a2*b2 + 2*a1*c2 + a1*b1").to_string(),
            "a1*b1 + 2*a1*c2 + a2*b2 + 2*a2*c1 + 4*b1 + 4*b2 + c1 + c2");
        assert_eq!(p("a1^2 + a1*b1 + 1").to_string(), "a1^2 + a1*b1 + 1");
        assert_eq!(p("-x/2 + 3/4").to_string(), "-1/2*x + 3/4");
        assert_eq!(p("(s1 - s1)").to_string(), "0");
        assert_eq!(p("(x + 1)^2"), p("x^2 + 2*x + 1"));
    }

    #[test]
    fn parse_errors() {
        assert!(ParamPoly::parse("1 +").is_err());
        assert!(ParamPoly::parse("x / y").is_err());
        assert!(ParamPoly::parse("x / 0").is_err());
        assert!(ParamPoly::parse("(x").is_err());
        assert!(ParamPoly::parse("x ) ").is_err());
    }

    #[test]
    fn substitution() {
        let f = p("2*(a1*a2 + b1*b2 + c1*c2 + 7)");
        let vals = parse_assignments("a1=1, a2=1, b1=0, b2=0, c1=0, c2=0").unwrap();
        assert_eq!(f.evaluate(&vals).unwrap(), rat(16, 1));
        let partial = parse_assignments("a1=1/2").unwrap();
        assert_eq!(f.substitute(&partial), p("a2 + 2*b1*b2 + 2*c1*c2 + 14"));
        assert!(matches!(f.evaluate(&partial), Err(ParamError::Unassigned(_))));
    }

    #[test]
    fn serde_round_trip() {
        let f = p("-1/3*s1^2*s2 + 5");
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, "\"-1/3*s1^2*s2 + 5\"");
        let g: ParamPoly = serde_json::from_str(&j).unwrap();
        assert_eq!(f, g);
    }

    fn arb_poly() -> impl Strategy<Value = ParamPoly> {
        proptest::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
            let mut out = ParamPoly::zero();
            for (c, a, b) in ts {
                let m = ParamPoly::var("a").pow(a) * ParamPoly::var("b").pow(b);
                out += &m.scale(&rat(c, 1));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(x in arb_poly(), y in arb_poly(), z in arb_poly()) {
            prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert!((&x - &x).is_zero());
        }

        #[test]
        fn display_parses_back(x in arb_poly()) {
            prop_assert_eq!(ParamPoly::parse(&x.to_string()).unwrap(), x);
        }
    }
}
