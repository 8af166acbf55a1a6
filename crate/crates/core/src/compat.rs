//! Compatibility of differential constraints: Mayer brackets, symmetry and
//! Frobenius checks, reduced brackets and intermediate integrals of ODEs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Exponent, Expr, Kernel, KernelKind, Monomial, RatFunc};
use crate::ideal::{symbol_gcd_resultant, Ideal, IdealOptions};
use crate::jet::{JetContext, SymbolPoly};
use crate::linops::{jacobi_bracket, multi_bracket, CDiffOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Compatible,
    Obstruction,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Compatible => "compatible",
            Verdict::Obstruction => "obstruction",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub verdict: Verdict,
    /// Nonzero normal forms.
    pub obstructions: Vec<Expr>,
    pub transversal: bool,
    /// Denominators cleared from equations or brackets; membership is only
    /// certified where these do not vanish.
    pub cleared_denominators: Vec<Expr>,
}

impl CompatReport {
    pub fn new(obstructions: Vec<Expr>, transversal: bool, cleared: Vec<Expr>) -> Self {
        let verdict = if !obstructions.is_empty() {
            Verdict::Obstruction
        } else if transversal {
            Verdict::Compatible
        } else {
            Verdict::Inconclusive
        };
        let cleared_denominators = nonvanishing_factors(&cleared);
        CompatReport {
            verdict,
            obstructions,
            transversal,
            cleared_denominators,
        }
    }

    pub fn is_compatible(&self) -> bool {
        self.verdict == Verdict::Compatible
    }
}

/// An expression reduced modulo an ideal, with every denominator cleared
/// on the way.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub value: Expr,
    pub cleared: Vec<Expr>,
}

impl Reduction {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Highest ranked jet of `e`: weighted order first, then dependent index,
/// then the multi-index with earlier variables differentiated more.
pub fn leading_jet(ctx: &JetContext, e: &Expr) -> Option<Kernel> {
    ctx.jets(e).into_iter().max_by(|a, b| {
        let (da, sa) = a.as_jet().expect("jet kernel");
        let (db, sb) = b.as_jet().expect("jet kernel");
        sa.weighted(ctx.weights())
            .cmp(&sb.weighted(ctx.weights()))
            .then(db.cmp(&da))
            .then(sa.entries().cmp(sb.entries()))
    })
}

/// Derivatives of the equations by their leading jets, leaving out
/// constants.
pub fn separants(ctx: &JetContext, eqs: &[Expr]) -> Result<Vec<Expr>> {
    let mut out: Vec<Expr> = Vec::new();
    for e in eqs {
        if let Some(lead) = leading_jet(ctx, e) {
            let s = ctx.jet_partial(e, &lead)?;
            if s.as_constant().is_none() && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Normal form of `target` modulo the ideal generated by `generators`,
/// localized at the separants of `equations`. Solving for leading
/// derivatives divides by separants, so they are inverted unless that
/// collapses the ideal, in which case they vanish on the system and are
/// dropped again. An inconsistent system reduces everything to the
/// obstruction `1`.
pub fn reduce_modulo(
    ctx: &JetContext,
    target: &Expr,
    generators: &[Expr],
    equations: &[Expr],
    options: IdealOptions,
) -> Result<Reduction> {
    let extra = std::slice::from_ref(target);
    let seps = separants(ctx, equations)?;
    let mut ideal = Ideal::localized(generators, &seps, extra, ctx.weights(), options)?;
    let mut inverted = seps;
    if ideal.is_unit() && !inverted.is_empty() {
        ideal = Ideal::new(generators, extra, ctx.weights(), options)?;
        inverted.clear();
    }
    let mut cleared = ideal.cleared_denominators().to_vec();
    cleared.extend(inverted);
    if ideal.is_unit() {
        return Ok(Reduction {
            value: Expr::one(),
            cleared,
        });
    }
    let nf = ideal.normal_form(target)?;
    cleared.extend(nf.cleared);
    Ok(Reduction {
        value: nf.value,
        cleared: nonvanishing_factors(&cleared),
    })
}

/// `e` times its least monomial denominator, scaled to leading
/// coefficient one. Has the same zeros as `e` where the denominator is
/// defined.
pub fn clear_denominator(e: &Expr) -> Expr {
    let Some(d) = denominator(e) else { return e.clone() };
    let cleared = e.mul(&d);
    let inv = cleared.terms().next().and_then(|(_, c)| c.inv());
    match inv {
        Some(inv) => cleared.scale(&inv),
        None => cleared,
    }
}

/// Split denominators into the factors that must not vanish: single
/// kernels from the monomial content (exponentials never vanish and are
/// skipped) and the remaining part scaled to leading coefficient one.
pub fn nonvanishing_factors(denominators: &[Expr]) -> Vec<Expr> {
    let mut out: Vec<Expr> = Vec::new();
    let mut push = |e: Expr| {
        if !out.contains(&e) {
            out.push(e);
        }
    };
    for d in denominators {
        if d.is_zero() || d.as_constant().is_some() {
            continue;
        }
        let mut content: BTreeMap<Kernel, Exponent> = BTreeMap::new();
        for (i, (m, _)) in d.terms().enumerate() {
            if i == 0 {
                content = m.factors().iter().cloned().collect();
            } else {
                for (k, q) in content.iter_mut() {
                    *q = (*q).min(m.exponent(k));
                }
                for (k, q) in m.factors() {
                    if !content.contains_key(k) {
                        content.insert(k.clone(), (*q).min(Exponent::zero()));
                    }
                }
            }
        }
        content.retain(|_, q| !q.is_zero());
        let mono = Monomial::one();
        let mono = content.iter().fold(mono, |m, (k, q)| m.times_power(k, -*q));
        for k in content.keys() {
            if !matches!(k.kind(), KernelKind::Exp { .. }) {
                push(Expr::kernel(k.clone()));
            }
        }
        let rest = d.mul_term(&mono, &RatFunc::one());
        if rest.as_constant().is_none() {
            let lead = rest.terms().next().map(|(_, c)| c.clone()).expect("nonzero");
            push(rest.scale(&lead.inv().expect("nonzero coefficient")));
        }
    }
    out
}

/// A system `F_1 = 0, ..., F_r = 0`.
#[derive(Clone, Debug)]
pub struct EquationSystem {
    ctx: JetContext,
    equations: Vec<Expr>,
    orders: Vec<u32>,
    cap: Option<u32>,
    options: IdealOptions,
}

impl EquationSystem {
    pub fn new(ctx: &JetContext, equations: Vec<Expr>) -> Result<Self> {
        if equations.is_empty() {
            return Err(Error::Validation("a system needs at least one equation".into()));
        }
        let mut orders = Vec::with_capacity(equations.len());
        for e in &equations {
            if e.is_zero() {
                return Err(Error::Validation("equations must be nonzero".into()));
            }
            orders.push(ctx.order(e).ok_or_else(|| Error::NoJetVariable(e.to_string()))?);
        }
        Ok(EquationSystem {
            ctx: ctx.clone(),
            equations,
            orders,
            cap: None,
            options: IdealOptions::default(),
        })
    }

    /// Override the prolongation cap used for every check.
    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_options(mut self, options: IdealOptions) -> Self {
        self.options = options;
        self
    }

    pub fn ctx(&self) -> &JetContext {
        &self.ctx
    }

    pub fn equations(&self) -> &[Expr] {
        &self.equations
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    fn cap_for(&self, indices: &[usize]) -> u32 {
        self.cap
            .unwrap_or_else(|| indices.iter().map(|&i| self.orders[i]).sum::<u32>().saturating_sub(1))
    }

    fn require_scalar(&self) -> Result<()> {
        if self.ctx.m() != 1 {
            return Err(Error::Unsupported("one dependent variable".into()));
        }
        Ok(())
    }

    /// Jacobi bracket of the two equations reduced modulo the prolongation
    /// of both to order `k + l - 1`.
    pub fn mayer_reduce(&self) -> Result<Reduction> {
        self.mayer_reduce_with(&Expr::one(), &Expr::zero())
    }

    /// Normal form of `scale * {F, G} - shift` in the same ideal as
    /// [`mayer_reduce`](Self::mayer_reduce).
    pub fn mayer_reduce_with(&self, scale: &Expr, shift: &Expr) -> Result<Reduction> {
        self.require_scalar()?;
        if self.equations.len() != 2 {
            return Err(Error::Unsupported("exactly two equations".into()));
        }
        self.pair_reduction(0, 1, scale, shift)
    }

    fn pair_reduction(&self, i: usize, j: usize, scale: &Expr, shift: &Expr) -> Result<Reduction> {
        let (f, g) = (&self.equations[i], &self.equations[j]);
        let bracket = jacobi_bracket(&self.ctx, f, g)?.mul(scale).sub(shift);
        let cap = self.cap_for(&[i, j]);
        let gens = self.ctx.module_generators(&self.equations, cap)?;
        reduce_modulo(&self.ctx, &bracket, &gens, &self.equations, self.options)
    }

    /// Every multi-bracket of `m + 1` equations reduced modulo the whole
    /// system prolonged to the tuple's cap.
    pub fn check_compatibility(&self) -> Result<CompatReport> {
        let (m, n, r) = (self.ctx.m(), self.ctx.n(), self.equations.len());
        if r < m || r >= n + m {
            return Err(Error::Unsupported(format!(
                "between {m} and {} equations, got {r}",
                n + m - 1
            )));
        }
        let mut obstructions = Vec::new();
        let mut cleared = Vec::new();
        for tuple in combinations(r, m + 1) {
            let fs: Vec<Expr> = tuple.iter().map(|&i| self.equations[i].clone()).collect();
            let bracket = multi_bracket(&self.ctx, &fs)?;
            let cap = self.cap_for(&tuple);
            let gens = self.ctx.module_generators(&self.equations, cap)?;
            let red = reduce_modulo(&self.ctx, &bracket, &gens, &self.equations, self.options)?;
            cleared.extend(red.cleared);
            if !red.value.is_zero() {
                obstructions.push(red.value);
            }
        }
        let transversal = complete_intersection_check(&self.ctx, &self.equations)?;
        Ok(CompatReport::new(obstructions, transversal, cleared))
    }

    /// Nonzero Mayer normal forms of all pairs: the equations one projection
    /// step would add.
    pub fn integrability_conditions(&self) -> Result<Vec<Expr>> {
        self.require_scalar()?;
        let mut out = Vec::new();
        for pair in combinations(self.equations.len(), 2) {
            let red = self.pair_reduction(pair[0], pair[1], &Expr::one(), &Expr::zero())?;
            if !red.value.is_zero() {
                out.push(clear_denominator(&red.value));
            }
        }
        Ok(out)
    }
}

/// Increasing `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Mayer bracket verdict for a scalar pair together with the
/// transversality of the symbols.
pub fn is_compatible_pair(ctx: &JetContext, f: &Expr, g: &Expr, options: IdealOptions) -> Result<CompatReport> {
    let sys = EquationSystem::new(ctx, vec![f.clone(), g.clone()])?.with_options(options);
    let red = sys.mayer_reduce()?;
    let transversal = complete_intersection_check(ctx, sys.equations())?;
    let obstructions = if red.value.is_zero() { vec![] } else { vec![red.value] };
    Ok(CompatReport::new(obstructions, transversal, red.cleared))
}

/// Whether `{F, G}` lies in the ideal of `F` prolonged to `cap`, by default
/// `ord F + ord G - 1`. The check passes iff there are no obstructions.
pub fn symmetry_check(
    ctx: &JetContext,
    f: &Expr,
    g: &Expr,
    cap: Option<u32>,
    options: IdealOptions,
) -> Result<CompatReport> {
    if ctx.m() != 1 {
        return Err(Error::Unsupported("one dependent variable".into()));
    }
    let k = ctx.order(f).ok_or_else(|| Error::NoJetVariable(f.to_string()))?;
    let l = ctx.order(g).unwrap_or(0);
    let cap = cap.unwrap_or((k + l).saturating_sub(1).max(k));
    let bracket = jacobi_bracket(ctx, f, g)?;
    let gens = ctx.prolong_system(std::slice::from_ref(f), cap)?;
    let red = reduce_modulo(ctx, &bracket, &gens, std::slice::from_ref(f), options)?;
    let transversal = if ctx.order(g).is_some() {
        complete_intersection_check(ctx, &[f.clone(), g.clone()])?
    } else {
        false
    };
    let obstructions = if red.value.is_zero() { vec![] } else { vec![red.value] };
    Ok(CompatReport::new(obstructions, transversal, red.cleared))
}

/// Pairwise coprimality of the principal symbols. Only certified for one
/// dependent and two independent variables; elsewhere `false`.
pub fn complete_intersection_check(ctx: &JetContext, eqs: &[Expr]) -> Result<bool> {
    if ctx.m() != 1 || ctx.n() != 2 {
        return Ok(false);
    }
    let symbols: Vec<SymbolPoly> = eqs
        .iter()
        .map(|e| ctx.symbol(e).map(|s| s.scalar().clone()))
        .collect::<Result<_>>()?;
    for i in 0..symbols.len() {
        for j in i + 1..symbols.len() {
            if !symbol_gcd_resultant(&symbols[i], &symbols[j], ctx.weights())?.coprime {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exact quotient of symbols, if it exists.
pub fn divide_symbol(p: &SymbolPoly, q: &SymbolPoly) -> Result<SymbolPoly> {
    let (lead_q, cq) = q
        .terms()
        .max_by(|a, b| a.0.entries().cmp(b.0.entries()))
        .map(|(s, c)| (s.clone(), c.clone()))
        .ok_or_else(|| Error::SymbolDivision("division by the zero symbol".into()))?;
    let mut rest = p.clone();
    let mut quotient = SymbolPoly::zero();
    while let Some((s, c)) = rest
        .terms()
        .max_by(|a, b| a.0.entries().cmp(b.0.entries()))
        .map(|(s, c)| (s.clone(), c.clone()))
    {
        let shift = s
            .checked_sub(&lead_q)
            .ok_or_else(|| Error::SymbolDivision("symbol does not divide".into()))?;
        let factor = c.div(&cq).map_err(|_| Error::SymbolDivision("non-monomial leading coefficient".into()))?;
        let step = SymbolPoly::monomial(shift, factor);
        rest = rest.sub(&step.mul(q));
        for (sigma, c) in step.terms() {
            quotient.add_term(sigma.clone(), c);
        }
    }
    Ok(quotient)
}

/// Operator with the given symbol and no lower-order part.
pub fn operator_from_symbol(s: &SymbolPoly) -> CDiffOp {
    CDiffOp::from_terms(s.terms().map(|(sigma, c)| (sigma.clone(), c.clone())))
}

/// `S` and `T` with symbols `sigma(F)/q` and `sigma(G)/q` and zero tails.
pub fn reduced_operators(ctx: &JetContext, f: &Expr, g: &Expr, q: &SymbolPoly) -> Result<(CDiffOp, CDiffOp)> {
    let sf = ctx.symbol(f)?;
    let sg = ctx.symbol(g)?;
    let s = divide_symbol(sf.scalar(), q)?;
    let t = divide_symbol(sg.scalar(), q)?;
    Ok((operator_from_symbol(&s), operator_from_symbol(&t)))
}

/// `T(F) - S(G)` reduced modulo the prolongation of `F, G` to
/// `k + l - deg q - 1`.
pub fn reduced_bracket(
    ctx: &JetContext,
    f: &Expr,
    g: &Expr,
    s: &CDiffOp,
    t: &CDiffOp,
    q: &SymbolPoly,
    options: IdealOptions,
) -> Result<Reduction> {
    if ctx.m() != 1 {
        return Err(Error::Unsupported("one dependent variable".into()));
    }
    let sf = ctx.symbol(f)?;
    let sg = ctx.symbol(g)?;
    let w = ctx.weights();
    let check = |op: &CDiffOp, expected: &SymbolPoly, what: &str| -> Result<()> {
        let principal = op.principal(w);
        let sym = SymbolPoly::from_terms(principal.terms().map(|(s, c)| (s.clone(), c.clone())));
        let prod = sym.mul(q);
        if !prod.sub(expected).is_zero() {
            return Err(Error::Validation(format!("symbol of {what} times q is not the symbol of the equation")));
        }
        Ok(())
    };
    check(s, sf.scalar(), "S")?;
    check(t, sg.scalar(), "T")?;
    let target = t.apply(ctx, f)?.sub(&s.apply(ctx, g)?);
    let qdeg: u32 = q
        .terms()
        .map(|(s, _)| s.weighted(w))
        .max()
        .ok_or_else(|| Error::SymbolDivision("zero symbol".into()))?;
    let cap = (sf.order + sg.order).saturating_sub(qdeg + 1);
    let gens = ctx.module_generators(&[f.clone(), g.clone()], cap)?;
    reduce_modulo(ctx, &target, &gens, &[f.clone(), g.clone()], options)
}

/// A rule `leading jet -> right-hand side` of a solved system.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedRule {
    pub lead: Kernel,
    pub rhs: Expr,
}

impl SolvedRule {
    pub fn new(lead: Kernel, rhs: Expr) -> Result<Self> {
        if lead.as_jet().is_none() {
            return Err(Error::Validation(format!("`{lead}` is not a jet variable")));
        }
        Ok(SolvedRule { lead, rhs })
    }

    /// Rule from an equation `lead = rhs` whose left side is a single jet.
    pub fn from_equation(lhs: &Expr, rhs: Expr) -> Result<Self> {
        let lead = match lhs.as_single_term() {
            Some((m, c)) if c.is_one() && m.factors().len() == 1 && m.factors()[0].1 == Exponent::from_integer(1) => {
                m.factors()[0].0.clone()
            }
            _ => return Err(Error::Validation(format!("left side `{lhs}` is not a single jet variable"))),
        };
        SolvedRule::new(lead, rhs)
    }
}

const FROBENIUS_ROUNDS: usize = 64;

/// Replace every derivative of a leading jet by the derivative of its
/// right-hand side until nothing is reducible.
pub fn substitute_rules(ctx: &JetContext, e: &Expr, rules: &[SolvedRule]) -> Result<Expr> {
    let mut cur = e.clone();
    let mut cache: HashMap<Kernel, Expr> = HashMap::new();
    for _ in 0..FROBENIUS_ROUNDS {
        let mut map: HashMap<Kernel, Expr> = HashMap::new();
        for k in cur.all_kernels() {
            let Some((dep, sigma)) = k.as_jet() else { continue };
            if let Some(v) = cache.get(&k) {
                map.insert(k.clone(), v.clone());
                continue;
            }
            for r in rules {
                let (rdep, rsigma) = r.lead.as_jet().expect("jet rule");
                if rdep != dep {
                    continue;
                }
                if let Some(tau) = sigma.checked_sub(rsigma) {
                    let v = ctx.total_derivative_multi(&r.rhs, &tau)?;
                    cache.insert(k.clone(), v.clone());
                    map.insert(k.clone(), v);
                    break;
                }
            }
        }
        if map.is_empty() {
            return Ok(cur);
        }
        cur = cur.substitute(&map)?;
    }
    Err(Error::Cycle(FROBENIUS_ROUNDS))
}

/// Cross-derivative residuals of a solved system.
pub fn frobenius_check(ctx: &JetContext, rules: &[SolvedRule]) -> Result<CompatReport> {
    for (i, a) in rules.iter().enumerate() {
        if rules[i + 1..].iter().any(|b| b.lead == a.lead) {
            return Err(Error::Validation(format!("leading variable `{}` appears twice", a.lead)));
        }
    }
    let mut obstructions = Vec::new();
    let mut cleared = Vec::new();
    for (i, a) in rules.iter().enumerate() {
        for b in &rules[i + 1..] {
            let (da, sa) = a.lead.as_jet().expect("jet rule");
            let (db, sb) = b.lead.as_jet().expect("jet rule");
            if da != db {
                continue;
            }
            let l = sa.lcm(sb);
            let left = ctx.total_derivative_multi(&a.rhs, &l.checked_sub(sa).expect("lcm"))?;
            let right = ctx.total_derivative_multi(&b.rhs, &l.checked_sub(sb).expect("lcm"))?;
            let residual = substitute_rules(ctx, &left.sub(&right), rules)?;
            cleared.extend(denominator(&residual));
            if !residual.is_zero() {
                obstructions.push(residual);
            }
        }
    }
    Ok(CompatReport::new(obstructions, true, cleared))
}

/// Context and residual `phi_x + phi_u*phi - F(x, u, phi)` of the first
/// order PDE for an intermediate integral `u' = phi(x, u)` of
/// `u'' = F(x, u, u')`. The ODE context has one independent and one
/// dependent variable; the result lives in a context with independents
/// `(x, u)` and dependent `phi`.
pub fn ode_intermediate_pde(ode: &JetContext, rhs: &Expr) -> Result<(JetContext, Expr)> {
    if ode.n() != 1 || ode.m() != 1 {
        return Err(Error::Unsupported("an ODE context with one independent and one dependent variable".into()));
    }
    let x = ode.independent()[0].clone();
    let u = ode.dependent()[0].clone();
    if u.chars().count() != 1 {
        return Err(Error::Unsupported(format!("a single-letter dependent variable, got `{u}`")));
    }
    let params: Vec<&str> = ode.parameters().iter().map(String::as_str).collect();
    let funcs: Vec<&str> = ode.functions().iter().map(String::as_str).collect();
    let pde = JetContext::new(&[x.as_str(), u.as_str()], &["phi"])?
        .with_parameters(&params)?
        .with_functions(&funcs)?
        .with_deriv_cap(ode.deriv_cap())?;
    let phi = pde.jet_of(0, &[0, 0])?;
    let mut map: HashMap<Kernel, Expr> = HashMap::new();
    for k in rhs.all_kernels() {
        match k.kind() {
            KernelKind::Base { .. } => {
                map.insert(k.clone(), pde.base_var(0));
            }
            KernelKind::Jet { sigma, .. } => {
                let v = match sigma.total() {
                    0 => pde.base_var(1),
                    1 => phi.clone(),
                    _ => return Err(Error::Validation(format!("`{k}` is not one of {x}, {u}, {u}_{x}"))),
                };
                map.insert(k.clone(), v);
            }
            _ => {}
        }
    }
    let f = rhs.substitute(&map)?;
    let phi_x = pde.jet_of(0, &[1, 0])?;
    let phi_u = pde.jet_of(0, &[0, 1])?;
    Ok((pde, phi_x.add(&phi_u.mul(&phi)).sub(&f)))
}

/// Least common monomial denominator of `e`, if there is one.
fn denominator(e: &Expr) -> Option<Expr> {
    let mut worst: BTreeMap<Kernel, Exponent> = BTreeMap::new();
    for (m, _) in e.terms() {
        for (k, q) in m.factors() {
            if *q < Exponent::zero() {
                let entry = worst.entry(k.clone()).or_insert_with(Exponent::zero);
                *entry = (*entry).max(-*q);
            }
        }
    }
    if worst.is_empty() {
        return None;
    }
    Some(
        worst
            .into_iter()
            .fold(Expr::one(), |acc, (k, q)| acc.mul(&Expr::kernel_pow(k, q))),
    )
}
