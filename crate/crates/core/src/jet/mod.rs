//! Jet-space context, total derivatives, prolongation, symbols and ansatz
//! evaluation.

mod multi_index;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use multi_index::MultiIndex;

use crate::error::{Error, Result};
use crate::expr::{Expr, Kernel, KernelKind, Monomial, Name, RatFunc};

/// Declaration of variables, weights, parameters and function symbols.
#[derive(Clone, Debug)]
pub struct JetContext {
    independent: Vec<String>,
    weights: Vec<u32>,
    dependent: Vec<String>,
    parameters: Vec<String>,
    functions: Vec<String>,
    deriv_cap: u32,
    base: Vec<Kernel>,
}

pub const DEFAULT_DERIV_CAP: u32 = 8;

impl JetContext {
    pub fn new(independent: &[&str], dependent: &[&str]) -> Result<Self> {
        let ctx = JetContext {
            independent: independent.iter().map(|s| s.to_string()).collect(),
            weights: vec![1; independent.len()],
            dependent: dependent.iter().map(|s| s.to_string()).collect(),
            parameters: Vec::new(),
            functions: Vec::new(),
            deriv_cap: DEFAULT_DERIV_CAP,
            base: Vec::new(),
        };
        ctx.finish()
    }

    pub fn with_weights(mut self, weights: &[u32]) -> Result<Self> {
        self.weights = weights.to_vec();
        self.finish()
    }

    pub fn with_parameters(mut self, params: &[&str]) -> Result<Self> {
        self.parameters = params.iter().map(|s| s.to_string()).collect();
        self.finish()
    }

    /// Declare unary function symbols such as `f` in `f(u)`.
    pub fn with_functions(mut self, names: &[&str]) -> Result<Self> {
        self.functions = names.iter().map(|s| s.to_string()).collect();
        self.finish()
    }

    pub fn with_deriv_cap(mut self, cap: u32) -> Result<Self> {
        self.deriv_cap = cap;
        self.finish()
    }

    fn finish(mut self) -> Result<Self> {
        if self.independent.is_empty() {
            return Err(Error::Context("at least one independent variable is required".into()));
        }
        if self.dependent.is_empty() {
            return Err(Error::Context("at least one dependent variable is required".into()));
        }
        for x in &self.independent {
            if x.chars().count() != 1 || !x.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(Error::Context(format!(
                    "independent variable `{x}` must be a single letter"
                )));
            }
        }
        if self.weights.len() != self.independent.len() {
            return Err(Error::Context(format!(
                "{} weights given for {} independent variables",
                self.weights.len(),
                self.independent.len()
            )));
        }
        if self.weights.contains(&0) {
            return Err(Error::Context("weights must be positive".into()));
        }
        if self.deriv_cap == 0 {
            return Err(Error::Context("derivative cap must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        let reserved = ["exp", "sqrt", "cosh", "sinh", "D"];
        for name in self
            .independent
            .iter()
            .chain(&self.dependent)
            .chain(&self.parameters)
            .chain(&self.functions)
        {
            let ok = if self.parameters.contains(name) {
                is_identifier(&name.replace('_', ""))
                    && !self.dependent.iter().any(|d| name.starts_with(&format!("{d}_")))
            } else {
                is_identifier(name)
            };
            if !ok {
                return Err(Error::Context(format!("`{name}` is not a valid identifier")));
            }
            if reserved.contains(&name.as_str()) {
                return Err(Error::Context(format!("`{name}` is a reserved name")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Context(format!("name `{name}` declared twice")));
            }
        }
        self.base = self
            .independent
            .iter()
            .enumerate()
            .map(|(i, x)| Kernel::base(x, i))
            .collect();
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.independent.len()
    }

    pub fn m(&self) -> usize {
        self.dependent.len()
    }

    pub fn independent(&self) -> &[String] {
        &self.independent
    }

    pub fn dependent(&self) -> &[String] {
        &self.dependent
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn functions(&self) -> &[String] {
        &self.functions
    }

    pub fn deriv_cap(&self) -> u32 {
        self.deriv_cap
    }

    pub fn independent_index(&self, name: &str) -> Option<usize> {
        self.independent.iter().position(|x| x == name)
    }

    pub fn dependent_index(&self, name: &str) -> Option<usize> {
        self.dependent.iter().position(|x| x == name)
    }

    pub fn is_parameter(&self, name: &str) -> bool {
        self.parameters.iter().any(|p| p == name)
    }

    pub fn is_function(&self, name: &str) -> bool {
        self.functions.iter().any(|p| p == name)
    }

    pub fn base_kernel(&self, i: usize) -> Kernel {
        self.base[i].clone()
    }

    pub fn base_var(&self, i: usize) -> Expr {
        Expr::kernel(self.base[i].clone())
    }

    /// Jet coordinate `p^dep_sigma`, checked against the derivative cap.
    pub fn jet_kernel(&self, dep: usize, sigma: MultiIndex) -> Result<Kernel> {
        let k = Kernel::jet(&self.dependent[dep], dep, sigma, &self.independent);
        if let Some((_, s)) = k.as_jet() {
            if s.weighted(&self.weights) > self.deriv_cap {
                return Err(Error::DerivativeCap {
                    what: k.key().to_string(),
                    cap: self.deriv_cap,
                });
            }
        }
        Ok(k)
    }

    pub fn jet(&self, dep: usize, sigma: MultiIndex) -> Result<Expr> {
        Ok(Expr::kernel(self.jet_kernel(dep, sigma)?))
    }

    /// Jet coordinate from per-variable derivative counts.
    pub fn jet_of(&self, dep: usize, counts: &[u32]) -> Result<Expr> {
        if counts.len() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "multi-index of length {} in a context with {} independent variables",
                counts.len(),
                self.n()
            )));
        }
        self.jet(dep, MultiIndex::new(counts.to_vec()))
    }

    /// `name^(order)(arg)`, checked against the derivative cap.
    pub fn func_kernel(&self, name: &str, order: u32, arg: Expr) -> Result<Kernel> {
        if !self.is_function(name) {
            return Err(Error::UndeclaredIdentifier(name.to_string()));
        }
        let k = Kernel::func(Name::from(name), order, arg);
        if order > self.deriv_cap {
            return Err(Error::DerivativeCap {
                what: k.key().to_string(),
                cap: self.deriv_cap,
            });
        }
        Ok(k)
    }

    pub fn func(&self, name: &str, order: u32, arg: Expr) -> Result<Expr> {
        Ok(Expr::kernel(self.func_kernel(name, order, arg)?))
    }

    /// Weighted order of a jet kernel, `None` for other kernels.
    pub fn kernel_order(&self, k: &Kernel) -> Option<u32> {
        k.as_jet().map(|(_, s)| s.weighted(&self.weights))
    }

    /// Jet kernels occurring anywhere in `e`.
    pub fn jets(&self, e: &Expr) -> Vec<Kernel> {
        e.all_kernels().into_iter().filter(|k| k.is_jet()).collect()
    }

    /// Highest weighted order of a jet occurring in `e` (including inside
    /// function arguments); `None` if `e` has no jets.
    pub fn order(&self, e: &Expr) -> Option<u32> {
        self.jets(e).iter().filter_map(|k| self.kernel_order(k)).max()
    }

    /// `D_i` applied to a single kernel.
    fn kernel_total_derivative(&self, k: &Kernel, i: usize, cache: &mut HashMap<Kernel, Expr>) -> Result<Expr> {
        if let Some(d) = cache.get(k) {
            return Ok(d.clone());
        }
        let d = match k.kind() {
            KernelKind::Base { index } => {
                if *index == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            KernelKind::Jet { dep, sigma } => self.jet(*dep, sigma.incremented(i))?,
            KernelKind::Func { name, order, arg } => {
                let da = self.total_derivative_cached(arg, i, cache)?;
                if da.is_zero() {
                    Expr::zero()
                } else {
                    self.func(name, order + 1, arg.clone())?.mul(&da)
                }
            }
            KernelKind::Exp { arg } => {
                let da = self.total_derivative_cached(arg, i, cache)?;
                Expr::kernel(k.clone()).mul(&da)
            }
        };
        cache.insert(k.clone(), d.clone());
        Ok(d)
    }

    fn total_derivative_cached(&self, e: &Expr, i: usize, cache: &mut HashMap<Kernel, Expr>) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in e.terms() {
            for (k, ex) in m.factors() {
                let dk = self.kernel_total_derivative(k, i, cache)?;
                if dk.is_zero() {
                    continue;
                }
                let rest = m.times_power(k, -crate::expr::Exponent::from_integer(1));
                let coeff = c.mul(&crate::expr::exponent_coeff(*ex));
                out.add_assign(&dk.mul_term(&rest, &coeff));
            }
        }
        Ok(out)
    }

    /// Total derivative `D_i e`.
    pub fn total_derivative(&self, e: &Expr, i: usize) -> Result<Expr> {
        let mut cache = HashMap::new();
        self.total_derivative_cached(e, i, &mut cache)
    }

    /// `D_sigma e = D_1^{s_1} ... D_n^{s_n} e`.
    pub fn total_derivative_multi(&self, e: &Expr, sigma: &MultiIndex) -> Result<Expr> {
        let mut cur = e.clone();
        for (i, &c) in sigma.entries().iter().enumerate() {
            for _ in 0..c {
                cur = self.total_derivative(&cur, i)?;
            }
        }
        Ok(cur)
    }

    /// Partial derivative by a jet coordinate, with the chain rule through
    /// function and exponential arguments (`d f(u) / du = f'(u)`).
    pub fn jet_partial(&self, e: &Expr, jet: &Kernel) -> Result<Expr> {
        let mut out = e.partial_derivative(jet);
        for k in e.kernels() {
            let inner = match k.kind() {
                KernelKind::Func { name, order, arg } => {
                    let da = self.jet_partial(arg, jet)?;
                    if da.is_zero() {
                        continue;
                    }
                    self.func(name, order + 1, arg.clone())?.mul(&da)
                }
                KernelKind::Exp { arg } => {
                    let da = self.jet_partial(arg, jet)?;
                    if da.is_zero() {
                        continue;
                    }
                    Expr::kernel(k.clone()).mul(&da)
                }
                _ => continue,
            };
            out.add_assign(&e.partial_derivative(&k).mul(&inner));
        }
        Ok(out)
    }

    /// All `D_sigma F_i` with weighted `|sigma| <= cap - ord F_i`, equation
    /// by equation. Fails if some equation has order above `cap`.
    pub fn prolong_system(&self, eqs: &[Expr], cap: u32) -> Result<Vec<Expr>> {
        for e in eqs {
            let k = self.order(e).unwrap_or(0);
            if k > cap {
                return Err(Error::CapBelowOrder { cap, order: k });
            }
        }
        self.module_generators(eqs, cap)
    }

    /// Like [`prolong_system`](Self::prolong_system), but equations of order
    /// above `cap` are skipped instead of rejected.
    pub fn module_generators(&self, eqs: &[Expr], cap: u32) -> Result<Vec<Expr>> {
        let mut out = Vec::new();
        for e in eqs {
            let k = self.order(e).unwrap_or(0);
            if k > cap {
                continue;
            }
            let mut memo: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
            memo.insert(MultiIndex::zero(self.n()), e.clone());
            for sigma in MultiIndex::all_up_to(&self.weights, cap - k) {
                if !memo.contains_key(&sigma) {
                    // Build from a predecessor that drops one derivative.
                    let i = sigma.first_nonzero().expect("nonzero multi-index");
                    let mut prev = sigma.entries().to_vec();
                    prev[i] -= 1;
                    let prev = MultiIndex::new(prev);
                    let d = self.total_derivative(&memo[&prev], i)?;
                    memo.insert(sigma.clone(), d);
                }
                out.push(memo[&sigma].clone());
            }
        }
        Ok(out)
    }

    /// Principal symbol of `e`, one homogeneous polynomial per dependent
    /// variable, using weighted order.
    pub fn symbol(&self, e: &Expr) -> Result<Symbol> {
        let jets = self.jets(e);
        let order = jets
            .iter()
            .filter_map(|k| self.kernel_order(k))
            .max()
            .ok_or_else(|| Error::NoJetVariable(e.to_string()))?;
        let mut components = vec![SymbolPoly::zero(); self.m()];
        for k in &jets {
            let (dep, sigma) = k.as_jet().expect("jet kernel");
            if sigma.weighted(&self.weights) != order {
                continue;
            }
            let c = self.jet_partial(e, k)?;
            components[dep].add_term(sigma.clone(), &c);
        }
        Ok(Symbol { order, components })
    }

    /// Replace every jet of a bound dependent variable by the corresponding
    /// derivative of its value.
    pub fn evaluate_on_ansatz(&self, e: &Expr, bindings: &[AnsatzBinding]) -> Result<Expr> {
        let mut values: Vec<Option<&Expr>> = vec![None; self.m()];
        for b in bindings {
            let dep = self
                .dependent_index(&b.dep)
                .ok_or_else(|| Error::UndeclaredIdentifier(b.dep.clone()))?;
            if self.jets(&b.value).iter().any(|k| k.as_jet().map(|(d, _)| d) == Some(dep)) {
                return Err(Error::Validation(format!(
                    "ansatz value for `{}` refers to `{}` itself",
                    b.dep, b.dep
                )));
            }
            values[dep] = Some(&b.value);
        }
        let mut map = HashMap::new();
        for k in self.jets(e) {
            let (dep, sigma) = k.as_jet().expect("jet kernel");
            let v = values[dep].ok_or_else(|| Error::UnboundDependent(self.dependent[dep].clone()))?;
            map.insert(k.clone(), self.total_derivative_multi(v, sigma)?);
        }
        e.substitute(&map)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Value assigned to a dependent variable, written in base variables,
/// parameters and function symbols.
#[derive(Clone, Debug)]
pub struct AnsatzBinding {
    pub dep: String,
    pub value: Expr,
}

impl AnsatzBinding {
    pub fn new(dep: &str, value: Expr) -> Self {
        AnsatzBinding {
            dep: dep.to_string(),
            value,
        }
    }
}

/// Homogeneous polynomial in the covector variables `xi_1..xi_n` with
/// expression coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolPoly {
    terms: BTreeMap<MultiIndex, Expr>,
}

impl SymbolPoly {
    pub fn zero() -> Self {
        SymbolPoly::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, Expr)>) -> Self {
        let mut p = SymbolPoly::zero();
        for (s, c) in terms {
            p.add_term(s, &c);
        }
        p
    }

    pub fn monomial(sigma: MultiIndex, c: Expr) -> Self {
        SymbolPoly::from_terms([(sigma, c)])
    }

    pub fn add_term(&mut self, sigma: MultiIndex, c: &Expr) {
        let entry = self.terms.entry(sigma).or_default();
        entry.add_assign(c);
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sigma: &MultiIndex) -> Expr {
        self.terms.get(sigma).cloned().unwrap_or_default()
    }

    /// Total degree in `xi` (unweighted), `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|s| s.total()).max()
    }

    pub fn mul(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut out = SymbolPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), &ca.mul(cb));
            }
        }
        out
    }

    pub fn sub(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), &c.neg());
        }
        out
    }

    pub fn scale(&self, c: &Expr) -> SymbolPoly {
        SymbolPoly::from_terms(self.terms.iter().map(|(s, x)| (s.clone(), x.mul(c))))
    }

    /// Printable form using `xi_<var>` names.
    pub fn to_expr(&self, ctx: &JetContext) -> Expr {
        let xi: Vec<Kernel> = ctx
            .independent()
            .iter()
            .enumerate()
            .map(|(i, x)| Kernel::base(&format!("xi_{x}"), ctx.n() + i))
            .collect();
        let mut out = Expr::zero();
        for (s, c) in &self.terms {
            let mut m = Monomial::one();
            for (i, &e) in s.entries().iter().enumerate() {
                m = m.times_power(&xi[i], crate::expr::Exponent::from_integer(e as i64));
            }
            out.add_assign(&c.mul_term(&m, &RatFunc::one()));
        }
        out
    }

    pub fn display<'a>(&'a self, ctx: &'a JetContext) -> impl fmt::Display + 'a {
        self.to_expr(ctx)
    }
}

/// Principal symbol: weighted order and one polynomial per dependent
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub order: u32,
    pub components: Vec<SymbolPoly>,
}

impl Symbol {
    /// The single component of a scalar symbol.
    pub fn scalar(&self) -> &SymbolPoly {
        &self.components[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heat() -> JetContext {
        JetContext::new(&["t", "x"], &["u"])
            .unwrap()
            .with_functions(&["f", "g"])
            .unwrap()
    }

    fn u(ctx: &JetContext, c: &[u32]) -> Expr {
        ctx.jet_of(0, c).unwrap()
    }

    #[test]
    fn total_derivative_of_jet() {
        let ctx = heat();
        assert_eq!(ctx.total_derivative(&u(&ctx, &[1, 0]), 1).unwrap(), u(&ctx, &[1, 1]));
    }

    #[test]
    fn chain_rule_through_function() {
        let ctx = heat();
        let fu = ctx.func("f", 0, u(&ctx, &[0, 0])).unwrap();
        let d = ctx.total_derivative(&fu, 1).unwrap();
        assert_eq!(d.to_string(), "f'(u)*u_x");
    }

    #[test]
    fn product_rule_with_base_variable() {
        let ctx = heat();
        let e = ctx.base_var(0).mul(&u(&ctx, &[1, 0]));
        let d = ctx.total_derivative(&e, 0).unwrap();
        assert_eq!(d.to_string(), "t*u_tt + u_t");
    }

    #[test]
    fn prolongation_counts() {
        let ctx = heat();
        let f = u(&ctx, &[1, 0]).sub(&u(&ctx, &[0, 2]));
        assert_eq!(ctx.prolong_system(std::slice::from_ref(&f), 2).unwrap().len(), 1);
        assert_eq!(ctx.prolong_system(std::slice::from_ref(&f), 3).unwrap().len(), 3);
        let g = u(&ctx, &[0, 1]);
        assert_eq!(ctx.prolong_system(&[f.clone(), g], 2).unwrap().len(), 4);
        assert!(matches!(
            ctx.prolong_system(&[f], 1),
            Err(Error::CapBelowOrder { cap: 1, order: 2 })
        ));
    }

    #[test]
    fn symbol_of_heat_operator() {
        let ctx = heat();
        let f = u(&ctx, &[1, 0]).sub(&u(&ctx, &[0, 2]));
        let s = ctx.symbol(&f).unwrap();
        assert_eq!(s.order, 2);
        assert_eq!(s.scalar().to_expr(&ctx).to_string(), "-xi_x^2");

        let weighted = heat().with_weights(&[2, 1]).unwrap();
        let s = weighted.symbol(&f).unwrap();
        assert_eq!(s.scalar().to_expr(&weighted).to_string(), "xi_t - xi_x^2");
    }

    #[test]
    fn symbol_of_quadratic_operator() {
        let ctx = heat();
        let g = u(&ctx, &[0, 0])
            .mul(&u(&ctx, &[1, 1]))
            .sub(&u(&ctx, &[1, 0]).mul(&u(&ctx, &[0, 1])));
        let s = ctx.symbol(&g).unwrap();
        assert_eq!(s.scalar().to_expr(&ctx).to_string(), "u*xi_t*xi_x");
    }

    #[test]
    fn symbol_needs_a_jet() {
        let ctx = heat();
        assert!(matches!(ctx.symbol(&ctx.base_var(0)), Err(Error::NoJetVariable(_))));
    }

    #[test]
    fn additive_ansatz_kills_mixed_derivative() {
        let ctx = heat();
        let value = ctx
            .func("f", 0, ctx.base_var(0))
            .unwrap()
            .add(&ctx.func("g", 0, ctx.base_var(1)).unwrap());
        let r = ctx
            .evaluate_on_ansatz(&u(&ctx, &[1, 1]), &[AnsatzBinding::new("u", value)])
            .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn unbound_dependent_is_reported() {
        let ctx = heat();
        assert!(matches!(
            ctx.evaluate_on_ansatz(&u(&ctx, &[1, 0]), &[]),
            Err(Error::UnboundDependent(_))
        ));
    }

    #[test]
    fn cap_is_enforced() {
        let ctx = heat().with_deriv_cap(2).unwrap();
        let e = u(&ctx, &[0, 2]);
        assert!(matches!(ctx.total_derivative(&e, 0), Err(Error::DerivativeCap { .. })));
    }

    #[test]
    fn context_validation() {
        assert!(JetContext::new(&["tt"], &["u"]).is_err());
        assert!(JetContext::new(&["t"], &["t"]).is_err());
        assert!(JetContext::new(&["t", "x"], &["u"]).unwrap().with_weights(&[1]).is_err());
    }
}
