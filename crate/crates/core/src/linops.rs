//! Scalar C-differential operators `sum_sigma a_sigma D_sigma` with
//! expression coefficients: linearization, evolutionary derivative,
//! Jacobi and multi-brackets, Hessian.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{Expr, RatFunc};
use crate::jet::{JetContext, MultiIndex};

/// `sum_sigma coeff_sigma * D_sigma`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CDiffOp {
    coeffs: BTreeMap<MultiIndex, Expr>,
}

impl CDiffOp {
    pub fn zero() -> Self {
        CDiffOp::default()
    }

    pub fn identity(n: usize) -> Self {
        CDiffOp::term(MultiIndex::zero(n), Expr::one())
    }

    /// Total derivative `D_i` in `n` variables.
    pub fn d(n: usize, i: usize) -> Self {
        CDiffOp::term(MultiIndex::unit(n, i), Expr::one())
    }

    /// `coeff * D_sigma`.
    pub fn term(sigma: MultiIndex, coeff: Expr) -> Self {
        let mut op = CDiffOp::zero();
        op.add_term(sigma, &coeff);
        op
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Expr)>) -> Self {
        let mut op = CDiffOp::zero();
        for (s, c) in terms {
            op.add_term(s, &c);
        }
        op
    }

    pub fn add_term(&mut self, sigma: MultiIndex, c: &Expr) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(sigma.clone()).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.coeffs.remove(&sigma);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, sigma: &MultiIndex) -> Expr {
        self.coeffs.get(sigma).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.coeffs.iter()
    }

    /// Highest weighted `|sigma|`, `None` for the zero operator.
    pub fn order(&self, weights: &[u32]) -> Option<u32> {
        self.coeffs.keys().map(|s| s.weighted(weights)).max()
    }

    pub fn add(&self, other: &CDiffOp) -> CDiffOp {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &CDiffOp) -> CDiffOp {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s.clone(), &c.neg());
        }
        out
    }

    /// Left multiplication by a function.
    pub fn scale(&self, f: &Expr) -> CDiffOp {
        CDiffOp::from_terms(self.coeffs.iter().map(|(s, c)| (s.clone(), c.mul(f))))
    }

    /// Part of top weighted order.
    pub fn principal(&self, weights: &[u32]) -> CDiffOp {
        let Some(top) = self.order(weights) else {
            return CDiffOp::zero();
        };
        CDiffOp::from_terms(
            self.coeffs
                .iter()
                .filter(|(s, _)| s.weighted(weights) == top)
                .map(|(s, c)| (s.clone(), c.clone())),
        )
    }

    /// `sum_sigma coeff_sigma * D_sigma(e)`.
    pub fn apply(&self, ctx: &JetContext, e: &Expr) -> Result<Expr> {
        let mut derivs = Derivatives::new(ctx, e.clone());
        let mut out = Expr::zero();
        for (s, c) in &self.coeffs {
            out.add_assign(&c.mul(derivs.get(s)?));
        }
        Ok(out)
    }

    /// `self o other`, expanded with the Leibniz rule
    /// `D_sigma (b D_tau) = sum_rho C(sigma, rho) D_rho(b) D_{sigma - rho + tau}`.
    pub fn compose(&self, ctx: &JetContext, other: &CDiffOp) -> Result<CDiffOp> {
        let n = ctx.n();
        for s in self.coeffs.keys().chain(other.coeffs.keys()) {
            if s.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "operator multi-index of length {} in a context with {n} variables",
                    s.len()
                )));
            }
        }
        let mut out = CDiffOp::zero();
        for (tau, b) in &other.coeffs {
            let mut derivs = Derivatives::new(ctx, b.clone());
            for (sigma, a) in &self.coeffs {
                for rho in sigma.sub_indices() {
                    let binom = sigma.binomial(&rho) as i64;
                    let db = derivs.get(&rho)?;
                    if db.is_zero() {
                        continue;
                    }
                    let coeff = a.mul(db).scale(&RatFunc::from_integer(binom));
                    let idx = sigma.checked_sub(&rho).expect("rho <= sigma").add(tau);
                    out.add_term(idx, &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, ctx: &JetContext, other: &CDiffOp) -> Result<CDiffOp> {
        Ok(self.compose(ctx, other)?.sub(&other.compose(ctx, self)?))
    }

    pub fn display<'a>(&'a self, ctx: &'a JetContext) -> OpDisplay<'a> {
        OpDisplay { op: self, ctx }
    }
}

/// Memoized total derivatives `D_sigma e`.
struct Derivatives<'a> {
    ctx: &'a JetContext,
    memo: HashMap<MultiIndex, Expr>,
}

impl<'a> Derivatives<'a> {
    fn new(ctx: &'a JetContext, e: Expr) -> Self {
        let mut memo = HashMap::new();
        memo.insert(MultiIndex::zero(ctx.n()), e);
        Derivatives { ctx, memo }
    }

    fn get(&mut self, sigma: &MultiIndex) -> Result<&Expr> {
        if !self.memo.contains_key(sigma) {
            let i = sigma.first_nonzero().expect("zero index is memoized");
            let mut prev = sigma.entries().to_vec();
            prev[i] -= 1;
            let prev = MultiIndex::new(prev);
            let base = self.get(&prev)?.clone();
            let d = self.ctx.total_derivative(&base, i)?;
            self.memo.insert(sigma.clone(), d);
        }
        Ok(&self.memo[sigma])
    }
}

pub struct OpDisplay<'a> {
    op: &'a CDiffOp,
    ctx: &'a JetContext,
}

impl fmt::Display for OpDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return write!(f, "0");
        }
        for (i, (sigma, c)) in self.op.coeffs.iter().rev().enumerate() {
            let mut d = String::new();
            for (j, &k) in sigma.entries().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !d.is_empty() {
                    d.push('*');
                }
                d.push_str("D_");
                d.push_str(&self.ctx.independent()[j]);
                if k > 1 {
                    d.push_str(&format!("^{k}"));
                }
            }
            let single = c.len() == 1;
            let neg = single && c.terms().all(|(_, x)| x.is_negative());
            let c_abs = if neg { c.neg() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if d.is_empty() {
                if single {
                    write!(f, "{c_abs}")?;
                } else {
                    write!(f, "({c_abs})")?;
                }
            } else if c_abs == Expr::one() {
                write!(f, "{d}")?;
            } else if single {
                write!(f, "{c_abs}*{d}")?;
            } else {
                write!(f, "({c_abs})*{d}")?;
            }
        }
        Ok(())
    }
}

/// Universal linearization `l_F`, one scalar operator per dependent
/// variable. Jets inside function arguments contribute through the chain
/// rule.
pub fn linearize(ctx: &JetContext, f: &Expr) -> Result<Vec<CDiffOp>> {
    let mut out = vec![CDiffOp::zero(); ctx.m()];
    for k in ctx.jets(f) {
        let (dep, sigma) = k.as_jet().expect("jet kernel");
        let c = ctx.jet_partial(f, &k)?;
        out[dep].add_term(sigma.clone(), &c);
    }
    Ok(out)
}

fn require_scalar(ctx: &JetContext, what: &str) -> Result<()> {
    if ctx.m() != 1 {
        return Err(Error::Unsupported(format!(
            "one dependent variable for {what} (context has {}); use multi_bracket",
            ctx.m()
        )));
    }
    Ok(())
}

/// `l_F` of a scalar operator.
pub fn linearize_scalar(ctx: &JetContext, f: &Expr) -> Result<CDiffOp> {
    require_scalar(ctx, "a scalar linearization")?;
    Ok(linearize(ctx, f)?.remove(0))
}

/// Evolutionary derivative `E_G F = l_F G`; `g` holds one generating
/// function per dependent variable.
pub fn evolutionary_derivative(ctx: &JetContext, g: &[Expr], f: &Expr) -> Result<Expr> {
    if g.len() != ctx.m() {
        return Err(Error::ShapeMismatch(format!(
            "{} generating functions for {} dependent variables",
            g.len(),
            ctx.m()
        )));
    }
    let mut out = Expr::zero();
    for (op, gj) in linearize(ctx, f)?.iter().zip(g) {
        out.add_assign(&op.apply(ctx, gj)?);
    }
    Ok(out)
}

/// Jacobi bracket `{F, G} = l_F(G) - l_G(F)`.
pub fn jacobi_bracket(ctx: &JetContext, f: &Expr, g: &Expr) -> Result<Expr> {
    require_scalar(ctx, "the Jacobi bracket")?;
    let a = linearize_scalar(ctx, f)?.apply(ctx, g)?;
    let b = linearize_scalar(ctx, g)?.apply(ctx, f)?;
    Ok(a.sub(&b))
}

/// Permutations of `0..n` with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut perms = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut perms);
    perms
        .into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            (p, sign)
        })
        .collect()
}

/// Multi-bracket of `m + 1` operators on `m` dependent variables:
///
/// `1/m! sum_{a in S_m, b in S_{m+1}} (-1)^a (-1)^b
///   l_{a(1)}(F_{b(1)}) o ... o l_{a(m)}(F_{b(m)}) (F_{b(m+1)})`,
///
/// evaluated literally.
pub fn multi_bracket(ctx: &JetContext, fs: &[Expr]) -> Result<Expr> {
    let m = ctx.m();
    if fs.len() != m + 1 {
        return Err(Error::ShapeMismatch(format!(
            "multi-bracket needs {} operators for {m} dependent variables, got {}",
            m + 1,
            fs.len()
        )));
    }
    let lins: Vec<Vec<CDiffOp>> = fs.iter().map(|f| linearize(ctx, f)).collect::<Result<_>>()?;
    let mut total = Expr::zero();
    for (beta, sb) in signed_permutations(m + 1) {
        for (alpha, sa) in signed_permutations(m) {
            let mut cur = fs[beta[m]].clone();
            for i in (0..m).rev() {
                cur = lins[beta[i]][alpha[i]].apply(ctx, &cur)?;
                if cur.is_zero() {
                    break;
                }
            }
            total.add_assign(&cur.scale(&RatFunc::from_integer(sa * sb)));
        }
    }
    let factorial: i64 = (1..=m as i64).product();
    Ok(total.scale(&RatFunc::from_ratio(1, factorial)))
}

/// `Hess_F(G, H) = sum_{sigma, tau} F_{p_sigma p_tau} D_sigma(G) D_tau(H)`.
pub fn hessian(ctx: &JetContext, f: &Expr, g: &Expr, h: &Expr) -> Result<Expr> {
    require_scalar(ctx, "the Hessian")?;
    let mut dg = Derivatives::new(ctx, g.clone());
    let mut dh = Derivatives::new(ctx, h.clone());
    let mut out = Expr::zero();
    for k1 in ctx.jets(f) {
        let f1 = ctx.jet_partial(f, &k1)?;
        let (_, s1) = k1.as_jet().expect("jet kernel");
        for k2 in ctx.jets(&f1) {
            let f12 = ctx.jet_partial(&f1, &k2)?;
            if f12.is_zero() {
                continue;
            }
            let (_, s2) = k2.as_jet().expect("jet kernel");
            let a = dg.get(s1)?.clone();
            out.add_assign(&f12.mul(&a).mul(dh.get(s2)?));
        }
    }
    Ok(out)
}
