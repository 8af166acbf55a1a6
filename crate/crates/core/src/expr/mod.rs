//! Canonical expressions over jet coordinates with exact coefficients.
//!
//! An [`Expr`] is a finite sum of terms `c * k1^e1 * ... * kr^er` where the
//! `k` are [`Kernel`]s, the exponents are exact rationals and `c` is a
//! rational function of the declared parameters. Like terms are always
//! merged, so two expressions are equal exactly when their canonical forms
//! coincide.

mod display;
mod kernel;
pub mod ratfunc;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

pub use kernel::{Kernel, KernelKind};
pub use ratfunc::{Name, ParamPoly, RatFunc};

use crate::error::{Error, Result};

pub type Exponent = Rational64;

/// Product of kernel powers, factors sorted by kernel.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(Kernel, Exponent)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn kernel(k: Kernel, e: Exponent) -> Self {
        if e.is_zero() {
            Monomial::one()
        } else {
            Monomial(vec![(k, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Kernel, Exponent)] {
        &self.0
    }

    pub fn exponent(&self, k: &Kernel) -> Exponent {
        self.0
            .binary_search_by(|(x, _)| x.cmp(k))
            .map(|i| self.0[i].1)
            .unwrap_or_else(|_| Exponent::zero())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
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
                    let e = self.0[i].1 + other.0[j].1;
                    if !e.is_zero() {
                        out.push((self.0[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Multiply by `k^e`.
    pub fn times_power(&self, k: &Kernel, e: Exponent) -> Monomial {
        self.mul(&Monomial::kernel(k.clone(), e))
    }

    pub fn pow(&self, q: Exponent) -> Monomial {
        if q.is_zero() {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(k, e)| (k.clone(), e * q)).collect())
    }

    pub fn inverse(&self) -> Monomial {
        self.pow(-Exponent::one())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Lexicographic on kernel print, higher exponent first; a proper prefix
    /// sorts after its extensions, so the constant monomial is last.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                ord => return ord,
            }
            match b.1.cmp(&a.1) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        other.0.len().cmp(&self.0.len())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, RatFunc>,
}

pub(crate) fn exponent_from_big(q: &BigRational) -> Result<Exponent> {
    match (q.numer().to_i64(), q.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Exponent::new(n, d)),
        _ => Err(Error::UnsupportedPower(format!("exponent {q} out of range"))),
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::constant(RatFunc::one())
    }

    pub fn integer(n: i64) -> Self {
        Expr::constant(RatFunc::from_integer(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Expr::constant(RatFunc::from_ratio(n, d))
    }

    pub fn constant(c: RatFunc) -> Self {
        Expr::from_term(Monomial::one(), c)
    }

    pub fn param(name: &str) -> Self {
        Expr::constant(RatFunc::param(Name::from(name)))
    }

    pub fn from_term(m: Monomial, c: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Expr { terms }
    }

    pub fn kernel(k: Kernel) -> Self {
        Expr::from_term(Monomial::kernel(k, Exponent::one()), RatFunc::one())
    }

    pub fn kernel_pow(k: Kernel, e: Exponent) -> Self {
        Expr::from_term(Monomial::kernel(k, e), RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RatFunc)> {
        self.terms.iter()
    }

    /// The coefficient if this expression has no kernels.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn as_single_term(&self) -> Option<(&Monomial, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coefficient(&self, m: &Monomial) -> RatFunc {
        self.terms.get(m).cloned().unwrap_or_else(RatFunc::zero)
    }

    fn add_term(&mut self, m: Monomial, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Expr) -> Expr {
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn add_assign(&mut self, other: &Expr) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect(),
        }
    }

    /// Multiply by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &RatFunc) -> Expr {
        let mut out = Expr::zero();
        if c.is_zero() {
            return out;
        }
        for (mm, cc) in &self.terms {
            out.add_term(mm.mul(m), cc.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    /// Inverse of a single-term expression.
    pub fn inverse(&self) -> Result<Expr> {
        match self.as_single_term() {
            Some((m, c)) => Ok(Expr::from_term(
                m.inverse(),
                c.inv().expect("stored coefficients are nonzero"),
            )),
            None if self.is_zero() => Err(Error::NonMonomialDenominator("0".into())),
            None => Err(Error::NonMonomialDenominator(self.to_string())),
        }
    }

    pub fn div(&self, other: &Expr) -> Result<Expr> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power; negative powers need a single-term base.
    pub fn pow_int(&self, n: i64) -> Result<Expr> {
        if n < 0 {
            return self.inverse()?.pow_int(-n);
        }
        let mut result = Expr::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// Rational power. Fractional powers are defined for single terms whose
    /// coefficient has an exact rational root.
    pub fn pow(&self, q: Exponent) -> Result<Expr> {
        if q.is_integer() {
            return self.pow_int(q.to_integer());
        }
        let (m, c) = self.as_single_term().ok_or_else(|| {
            Error::UnsupportedPower(format!("({self})^({q}) of a sum"))
        })?;
        let d = *q.denom() as u32;
        let root = c.root(d).ok_or_else(|| {
            Error::UnsupportedPower(format!("coefficient {c} has no exact rational root of order {d}"))
        })?;
        let coeff = root.pow(*q.numer()).expect("nonzero root");
        Ok(Expr::from_term(m.pow(q), coeff))
    }

    /// Canonical `exp(arg)`: the argument is split into terms and every
    /// rational multiple becomes an exponent, `exp(2*x - t) = exp(x)^2 *
    /// exp(t)^(-1)`.
    pub fn exp(arg: &Expr) -> Result<Expr> {
        let mut out = Expr::one();
        for (m, c) in &arg.terms {
            let (q, inner) = match c.as_rational() {
                Some(q) => (q.clone(), RatFunc::one()),
                None => {
                    let lead = c.numerator_lead();
                    let inv = RatFunc::Rational(BigRational::one() / lead.clone());
                    (lead, c.mul(&inv))
                }
            };
            let k = Kernel::exp(Expr::from_term(m.clone(), inner));
            out = out.mul_term(&Monomial::kernel(k, exponent_from_big(&q)?), &RatFunc::one());
        }
        Ok(out)
    }

    pub fn cosh(arg: &Expr) -> Result<Expr> {
        let half = RatFunc::from_ratio(1, 2);
        Ok(Expr::exp(arg)?.add(&Expr::exp(&arg.neg())?).scale(&half))
    }

    pub fn sinh(arg: &Expr) -> Result<Expr> {
        let half = RatFunc::from_ratio(1, 2);
        Ok(Expr::exp(arg)?.sub(&Expr::exp(&arg.neg())?).scale(&half))
    }

    /// Kernels occurring at top level (not inside function arguments).
    pub fn kernels(&self) -> BTreeSet<Kernel> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(k, _)| k.clone()))
            .collect()
    }

    /// Kernels occurring anywhere, including inside function arguments.
    pub fn all_kernels(&self) -> BTreeSet<Kernel> {
        let mut out = BTreeSet::new();
        self.collect_kernels(&mut out);
        out
    }

    fn collect_kernels(&self, out: &mut BTreeSet<Kernel>) {
        for m in self.terms.keys() {
            for (k, _) in &m.0 {
                if out.insert(k.clone()) {
                    if let Some(arg) = k.arg() {
                        arg.collect_kernels(out);
                    }
                }
            }
        }
    }

    pub fn contains_kernel(&self, k: &Kernel) -> bool {
        self.all_kernels().contains(k)
    }

    /// Parameters appearing in coefficients, including inside function
    /// arguments.
    pub fn params(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for (m, c) in &self.terms {
            out.extend(c.params());
            for (k, _) in &m.0 {
                if let Some(arg) = k.arg() {
                    out.extend(arg.params());
                }
            }
        }
        out
    }

    /// Formal partial derivative with respect to a kernel, all other kernels
    /// held fixed. No chain rule through function arguments.
    pub fn partial_derivative(&self, k: &Kernel) -> Expr {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(k);
            if e.is_zero() {
                continue;
            }
            let m2 = m.times_power(k, -Exponent::one());
            out.add_term(m2, c.mul(&exponent_coeff(e)));
        }
        out
    }

    /// Simultaneous substitution of kernels, recursing into function and
    /// exponential arguments.
    pub fn substitute(&self, bindings: &HashMap<Kernel, Expr>) -> Result<Expr> {
        let mut cache: HashMap<Kernel, Option<Expr>> = HashMap::new();
        self.substitute_cached(bindings, &mut cache)
    }

    fn substitute_cached(
        &self,
        bindings: &HashMap<Kernel, Expr>,
        cache: &mut HashMap<Kernel, Option<Expr>>,
    ) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let mut kept = Monomial::one();
            let mut replaced = Expr::constant(c.clone());
            for (k, e) in &m.0 {
                match substitute_kernel(k, bindings, cache)? {
                    None => kept = kept.times_power(k, *e),
                    Some(v) => replaced = replaced.mul(&v.pow(*e)?),
                }
            }
            out.add_assign(&replaced.mul_term(&kept, &RatFunc::one()));
        }
        Ok(out)
    }

    /// Apply substitution until nothing changes. Fails with
    /// [`Error::Cycle`] after `max_rounds`.
    pub fn substitute_to_fixpoint(&self, bindings: &HashMap<Kernel, Expr>, max_rounds: usize) -> Result<Expr> {
        let mut cur = self.clone();
        for _ in 0..max_rounds {
            let next = cur.substitute(bindings)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
        Err(Error::Cycle(max_rounds))
    }

    /// Substitute rational values for parameters.
    pub fn eval_params(&self, values: &BTreeMap<Name, BigRational>) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in &self.terms {
            let c2 = c.eval_partial(values).ok_or_else(|| {
                Error::Validation(format!("parameter values make the denominator of {c} vanish"))
            })?;
            let mut t = Expr::constant(c2);
            for (k, e) in &m.0 {
                let base = match k.kind() {
                    KernelKind::Func { name, order, arg } => {
                        Expr::kernel(Kernel::func(name.clone(), *order, arg.eval_params(values)?))
                    }
                    KernelKind::Exp { arg } => Expr::exp(&arg.eval_params(values)?)?,
                    _ => Expr::kernel(k.clone()),
                };
                t = t.mul(&base.pow(*e)?);
            }
            out.add_assign(&t);
        }
        Ok(out)
    }

    /// Sum of the terms where `keep` holds.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial, &RatFunc) -> bool) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .filter(|(m, c)| keep(m, c))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

pub(crate) fn exponent_coeff(e: Exponent) -> RatFunc {
    RatFunc::Rational(BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom())))
}

fn substitute_kernel(
    k: &Kernel,
    bindings: &HashMap<Kernel, Expr>,
    cache: &mut HashMap<Kernel, Option<Expr>>,
) -> Result<Option<Expr>> {
    if let Some(v) = cache.get(k) {
        return Ok(v.clone());
    }
    let result = if let Some(v) = bindings.get(k) {
        Some(v.clone())
    } else {
        match k.kind() {
            KernelKind::Func { name, order, arg } => {
                let new_arg = arg.substitute_cached(bindings, cache)?;
                (new_arg != *arg).then(|| Expr::kernel(Kernel::func(name.clone(), *order, new_arg)))
            }
            KernelKind::Exp { arg } => {
                let new_arg = arg.substitute_cached(bindings, cache)?;
                if new_arg != *arg {
                    Some(Expr::exp(&new_arg)?)
                } else {
                    None
                }
            }
            _ => None,
        }
    };
    cache.insert(k.clone(), result.clone());
    Ok(result)
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::integer(n)
    }
}

impl From<Kernel> for Expr {
    fn from(k: Kernel) -> Self {
        Expr::kernel(k)
    }
}

impl ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(&self, &rhs)
    }
}

impl ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(&self, &rhs)
    }
}

impl ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(&self, &rhs)
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

/// Whether every coefficient is a plain rational number.
pub fn is_parameter_free(e: &Expr) -> bool {
    e.terms().all(|(_, c)| c.as_rational().is_some())
}
