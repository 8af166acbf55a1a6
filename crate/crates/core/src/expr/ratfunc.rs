//! Coefficient field: rational functions with rational coefficients in the
//! declared parameters.
//!
//! Numerator and denominator are kept coprime and the denominator is monic
//! with respect to its leading term, so structural equality is equality of
//! rational functions.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Name = Arc<str>;

/// A monomial in parameter symbols, factors sorted by name.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMonomial(Vec<(Name, u32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn var(name: Name) -> Self {
        ParamMonomial(vec![(name, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Name, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: &str) -> u32 {
        self.0
            .iter()
            .find(|(n, _)| &**n == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
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
        ParamMonomial(out)
    }

    fn with_exponent(&self, v: &Name, e: u32) -> ParamMonomial {
        let mut out: Vec<(Name, u32)> = self.0.iter().filter(|(n, _)| n != v).cloned().collect();
        if e > 0 {
            out.push((v.clone(), e));
            out.sort();
        }
        ParamMonomial(out)
    }

    /// Graded comparison used to pick leading terms.
    fn graded_cmp(&self, other: &ParamMonomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// Polynomial in parameters with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMonomial, BigRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        ParamPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamMonomial::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn var(name: Name) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ParamMonomial::var(name), BigRational::one());
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&ParamMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamMonomial, &BigRational)> {
        self.terms.iter()
    }

    /// Terms in display order: leading (graded) term first.
    pub fn sorted_terms(&self) -> Vec<(&ParamMonomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.graded_cmp(a.0));
        v
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.terms
            .iter()
            .max_by(|a, b| a.0.graded_cmp(b.0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn vars(&self) -> BTreeSet<Name> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(n, _)| n.clone()))
            .collect()
    }

    fn insert_add(&mut self, m: ParamMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert_add(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn degree_in(&self, v: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    fn coeffs_in(&self, v: &Name) -> BTreeMap<u32, ParamPoly> {
        let mut out: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            out.entry(e)
                .or_default()
                .insert_add(m.with_exponent(v, 0), c.clone());
        }
        out
    }

    fn coeff_of_degree(&self, v: &Name, d: u32) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            if m.exponent(v) == d {
                out.insert_add(m.with_exponent(v, 0), c.clone());
            }
        }
        out
    }

    fn shift(&self, v: &Name, e: u32) -> ParamPoly {
        if e == 0 {
            return self.clone();
        }
        let factor = ParamMonomial(vec![(v.clone(), e)]);
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(&factor), c.clone())).collect(),
        }
    }

    pub fn monic(&self) -> ParamPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading_coefficient();
        self.scale(&(BigRational::one() / lc))
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &ParamPoly) -> Option<ParamPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(ParamPoly::zero());
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        let v = other.vars().into_iter().next().expect("non-constant");
        let db = other.degree_in(&v);
        let lb = other.coeff_of_degree(&v, db);
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while !rem.is_zero() {
            let dr = rem.degree_in(&v);
            if dr < db {
                return None;
            }
            let lr = rem.coeff_of_degree(&v, dr);
            let t = lr.div_exact(&lb)?.shift(&v, dr - db);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Substitute rational values for some parameters.
    pub fn eval_partial(&self, values: &BTreeMap<Name, BigRational>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (n, e) in &m.0 {
                match values.get(n) {
                    Some(val) => coeff *= num_traits::pow(val.clone(), *e as usize),
                    None => rest.push((n.clone(), *e)),
                }
            }
            out.insert_add(ParamMonomial(rest), coeff);
        }
        out
    }
}

fn content_in(p: &ParamPoly, v: &Name) -> ParamPoly {
    p.coeffs_in(v)
        .values()
        .fold(ParamPoly::zero(), |acc, c| poly_gcd(&acc, c))
}

fn primitive_part(p: &ParamPoly, v: &Name) -> ParamPoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn pseudo_remainder(p: &ParamPoly, q: &ParamPoly, v: &Name) -> ParamPoly {
    let dq = q.degree_in(v);
    let lq = q.coeff_of_degree(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lr = r.coeff_of_degree(v, dr);
        r = r.mul(&lq).sub(&lr.shift(v, dr - dq).mul(q));
    }
    r
}

/// Monic greatest common divisor over Q, by recursive primitive remainder
/// sequences.
pub fn poly_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    let mut vars = a.vars();
    vars.extend(b.vars());
    let v = vars.into_iter().next().expect("non-constant");
    let (da, db) = (a.degree_in(&v), b.degree_in(&v));
    if da == 0 {
        return poly_gcd(a, &content_in(b, &v));
    }
    if db == 0 {
        return poly_gcd(&content_in(a, &v), b);
    }
    let (ca, cb) = (content_in(a, &v), content_in(b, &v));
    let g = poly_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).expect("content divides");
    let mut q = b.div_exact(&cb).expect("content divides");
    if p.degree_in(&v) < q.degree_in(&v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, &v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(&v) == 0 {
            q = ParamPoly::one();
            break;
        }
        p = q;
        q = primitive_part(&r, &v);
    }
    g.mul(&primitive_part(&q, &v)).monic()
}

/// Element of Q(parameters).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatFunc {
    Rational(BigRational),
    Fraction { num: ParamPoly, den: ParamPoly },
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        RatFunc::Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        RatFunc::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        RatFunc::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn param(name: Name) -> Self {
        RatFunc::Fraction {
            num: ParamPoly::var(name),
            den: ParamPoly::one(),
        }
    }

    pub fn from_polys(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let (Some(n), Some(d)) = (num.as_constant(), den.as_constant()) {
            return RatFunc::Rational(n / d);
        }
        let g = poly_gcd(&num, &den);
        let num = num.div_exact(&g).expect("gcd divides");
        let den = den.div_exact(&g).expect("gcd divides");
        let lc = den.leading_coefficient();
        let inv = BigRational::one() / lc;
        let (num, den) = (num.scale(&inv), den.scale(&inv));
        match (num.as_constant(), den.as_constant()) {
            (Some(n), Some(d)) => RatFunc::Rational(n / d),
            _ => RatFunc::Fraction { num, den },
        }
    }

    pub fn numerator(&self) -> ParamPoly {
        match self {
            RatFunc::Rational(q) => ParamPoly::constant(q.clone()),
            RatFunc::Fraction { num, .. } => num.clone(),
        }
    }

    pub fn denominator(&self) -> ParamPoly {
        match self {
            RatFunc::Rational(_) => ParamPoly::one(),
            RatFunc::Fraction { den, .. } => den.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RatFunc::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, RatFunc::Rational(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RatFunc::Rational(q) => Some(q),
            RatFunc::Fraction { .. } => None,
        }
    }

    pub fn params(&self) -> BTreeSet<Name> {
        match self {
            RatFunc::Rational(_) => BTreeSet::new(),
            RatFunc::Fraction { num, den } => {
                let mut v = num.vars();
                v.extend(den.vars());
                v
            }
        }
    }

    /// Sign of the leading numerator coefficient; used for printing.
    pub fn is_negative(&self) -> bool {
        match self {
            RatFunc::Rational(q) => q.is_negative(),
            RatFunc::Fraction { num, .. } => num
                .sorted_terms()
                .first()
                .map(|(_, c)| c.is_negative())
                .unwrap_or(false),
        }
    }

    /// Leading numerator coefficient, so that `self / lead` has a monic
    /// numerator.
    pub fn numerator_lead(&self) -> BigRational {
        match self {
            RatFunc::Rational(q) => q.clone(),
            RatFunc::Fraction { num, .. } => num.leading_coefficient(),
        }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        match (self, other) {
            (RatFunc::Rational(a), RatFunc::Rational(b)) => RatFunc::Rational(a + b),
            _ => {
                let (an, ad) = (self.numerator(), self.denominator());
                let (bn, bd) = (other.numerator(), other.denominator());
                if ad == bd {
                    return RatFunc::from_polys(an.add(&bn), ad);
                }
                RatFunc::from_polys(an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd))
            }
        }
    }

    pub fn neg(&self) -> RatFunc {
        match self {
            RatFunc::Rational(a) => RatFunc::Rational(-a.clone()),
            RatFunc::Fraction { num, den } => RatFunc::Fraction {
                num: num.neg(),
                den: den.clone(),
            },
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        match (self, other) {
            (RatFunc::Rational(a), RatFunc::Rational(b)) => RatFunc::Rational(a * b),
            (RatFunc::Rational(a), RatFunc::Fraction { num, den })
            | (RatFunc::Fraction { num, den }, RatFunc::Rational(a)) => {
                if a.is_zero() {
                    RatFunc::zero()
                } else {
                    RatFunc::Fraction {
                        num: num.scale(a),
                        den: den.clone(),
                    }
                }
            }
            _ => RatFunc::from_polys(
                self.numerator().mul(&other.numerator()),
                self.denominator().mul(&other.denominator()),
            ),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        match self {
            RatFunc::Rational(a) if a.is_zero() => None,
            RatFunc::Rational(a) => Some(RatFunc::Rational(a.recip())),
            RatFunc::Fraction { num, den } => Some(RatFunc::from_polys(den.clone(), num.clone())),
        }
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        Some(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: i64) -> Option<RatFunc> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let e = n.unsigned_abs();
        Some(match &base {
            RatFunc::Rational(a) => RatFunc::Rational(num_traits::pow(a.clone(), e as usize)),
            RatFunc::Fraction { num, den } => RatFunc::Fraction {
                num: num.pow(e as u32),
                den: den.pow(e as u32),
            },
        })
    }

    /// Exact `d`-th root of a rational constant, if it exists.
    pub fn root(&self, d: u32) -> Option<RatFunc> {
        let q = self.as_rational()?;
        if q.is_negative() && d.is_multiple_of(2) {
            return None;
        }
        let root = |n: &BigInt| -> Option<BigInt> {
            let r = n.nth_root(d);
            (num_traits::pow(r.clone(), d as usize) == *n).then_some(r)
        };
        let n = root(q.numer())?;
        let dd = root(q.denom())?;
        Some(RatFunc::Rational(BigRational::new(n, dd)))
    }

    /// Substitute rational values for some parameters; `None` when the
    /// denominator vanishes.
    pub fn eval_partial(&self, values: &BTreeMap<Name, BigRational>) -> Option<RatFunc> {
        match self {
            RatFunc::Rational(_) => Some(self.clone()),
            RatFunc::Fraction { num, den } => {
                let d = den.eval_partial(values);
                if d.is_zero() {
                    return None;
                }
                Some(RatFunc::from_polys(num.eval_partial(values), d))
            }
        }
    }
}

fn fmt_rational_factor(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "({}/{})", q.numer(), q.denom())
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
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

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                if a.is_integer() {
                    write!(f, "{}", a.numer())?;
                } else {
                    write!(f, "{}/{}", a.numer(), a.denom())?;
                }
            } else {
                if !a.is_one() {
                    fmt_rational_factor(&a, f)?;
                    write!(f, "*")?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatFunc::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            RatFunc::Fraction { num, den } => {
                if den.as_constant().is_some_and(|d| d.is_one()) {
                    write!(f, "{num}")
                } else {
                    write!(f, "({num})/({den})")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> ParamPoly {
        ParamPoly::var(Arc::from(name))
    }

    fn c(n: i64) -> ParamPoly {
        ParamPoly::constant(BigRational::from_integer(n.into()))
    }

    #[test]
    fn gcd_of_products() {
        let a = p("a");
        let b = p("b");
        let x = a.add(&b).mul(&a.sub(&c(1)));
        let y = a.add(&b).mul(&b.add(&c(2)));
        assert_eq!(poly_gcd(&x, &y), a.add(&b));
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = p("alpha");
        let x = c(1).sub(&a.scale(&BigRational::from_integer(2.into())));
        let y = c(1).sub(&a.scale(&BigRational::from_integer(4.into())));
        assert_eq!(poly_gcd(&x, &y), ParamPoly::one());
    }

    #[test]
    fn fraction_reduces_to_lowest_terms() {
        let a = p("a");
        let num = a.mul(&a).sub(&c(1));
        let den = a.sub(&c(1));
        let r = RatFunc::from_polys(num, den);
        assert_eq!(r, RatFunc::from_polys(a.add(&c(1)), ParamPoly::one()));
    }

    #[test]
    fn fraction_arithmetic_cancels() {
        let a = RatFunc::param(Arc::from("a"));
        let one = RatFunc::one();
        let x = one.div(&a.add(&one)).unwrap();
        let back = x.inv().unwrap().sub(&a);
        assert!(back.is_one());
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn division_exactness() {
        let a = p("a");
        let b = p("b");
        let prod = a.add(&b).mul(&a.sub(&b));
        assert_eq!(prod.div_exact(&a.sub(&b)), Some(a.add(&b)));
        assert_eq!(prod.div_exact(&a), None);
    }

    #[test]
    fn rational_roots() {
        assert_eq!(RatFunc::from_ratio(9, 4).root(2), Some(RatFunc::from_ratio(3, 2)));
        assert_eq!(RatFunc::from_integer(2).root(2), None);
        assert_eq!(RatFunc::from_integer(-8).root(3), Some(RatFunc::from_integer(-2)));
    }
}
