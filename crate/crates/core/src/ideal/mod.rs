//! Polynomial ideals generated by differential expressions, with jets,
//! function kernels, exponentials and base variables as ring variables.

mod convert;
pub mod groebner;
pub mod poly;
mod symbol;

use std::collections::BTreeMap;

pub use convert::{MonomialOrder, Ring, VarId};
pub use groebner::DEFAULT_BUDGET;
pub use symbol::{symbol_gcd_resultant, SymbolGcd};

use convert::{is_trivial_mono, root_degrees, root_relations, variables_of};
use poly::{Mono, Poly};

use crate::error::{Error, Result};
use crate::expr::{Expr, Kernel, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IdealOptions {
    pub order: MonomialOrder,
    /// Maximum number of S-polynomial reductions.
    pub budget: usize,
}

impl Default for IdealOptions {
    fn default() -> Self {
        IdealOptions {
            order: MonomialOrder::default(),
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Result of reducing an expression.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub value: Expr,
    /// Factors cleared on the way: the monomial denominator of the input
    /// and, when inverted polynomials show up in the remainder, a power of
    /// their product by which `value` is scaled.
    pub cleared: Vec<Expr>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// The Rabinowitsch relation `z * mono * poly - 1`.
#[derive(Clone, Debug)]
struct Local {
    z: usize,
    mono: Poly,
    poly: Poly,
}

/// An ideal together with its reduced Groebner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    generators: Vec<Expr>,
    inverted: Vec<Expr>,
    options: IdealOptions,
    roots: BTreeMap<Kernel, u32>,
    ring: Ring,
    basis: Vec<Poly>,
    local: Option<Local>,
    cleared: Vec<Expr>,
    weights: Vec<u32>,
}

impl Ideal {
    /// Ideal generated by `generators`. Kernels of `extra` are added to the
    /// ring up front so later reductions need no extension.
    pub fn new(generators: &[Expr], extra: &[Expr], weights: &[u32], options: IdealOptions) -> Result<Ideal> {
        Ideal::localized(generators, &[], extra, weights, options)
    }

    /// Like [`new`](Self::new), additionally inverting the numerators of
    /// `inverted`. Monomial denominators of the generators are always
    /// inverted.
    pub fn localized(
        generators: &[Expr],
        inverted: &[Expr],
        extra: &[Expr],
        weights: &[u32],
        options: IdealOptions,
    ) -> Result<Ideal> {
        let all: Vec<&Expr> = generators.iter().chain(inverted).chain(extra).collect();
        let roots = root_degrees(all.iter().copied());
        let mut vars = variables_of(all.iter().copied(), &roots);
        vars.extend(roots.keys().map(|k| VarId::Kernel(k.clone())));

        let ring = Ring::new(vars.iter().cloned(), options.order, weights);
        let mut polys = Vec::new();
        let mut den = vec![0u16; ring.spec().nvars];
        let mut cleared = Vec::new();
        for g in generators {
            let (p, d) = ring.expr_to_poly(g, &roots)?;
            if !is_trivial_mono(&d) {
                cleared.push(ring.mono_to_expr(&d, &Expr::one())?);
                for (x, &e) in den.iter_mut().zip(d.exps()) {
                    *x = (*x).max(e.min(1));
                }
            }
            polys.push(p);
        }
        let mut factors: Vec<Poly> = Vec::new();
        for e in inverted {
            let (p, _) = ring.expr_to_poly(e, &roots)?;
            if p.is_zero() {
                return Err(Error::Validation("cannot invert zero".into()));
            }
            if p.len() == 1 {
                for (x, &e) in den.iter_mut().zip(p.lm().exps()) {
                    *x = (*x).max(e.min(1));
                }
            } else if !factors.contains(&p.monic()) {
                factors.push(p.monic());
            }
        }

        let (ring, local) = if den.iter().all(|&e| e == 0) && factors.is_empty() {
            (ring, None)
        } else {
            let (ext, map) = ring.extended([VarId::Local]);
            let spec = ext.spec();
            polys = polys.iter().map(|p| p.remap(&map, spec)).collect();
            let mut exps = vec![0u16; spec.nvars];
            for (i, &e) in den.iter().enumerate() {
                exps[map[i]] = e;
            }
            let mono = Poly::from_terms(vec![(Mono::new(exps, spec), RatFunc::one())]);
            let mut poly = Poly::from_terms(vec![(Mono::one(spec), RatFunc::one())]);
            for f in &factors {
                poly = poly.mul(&f.remap(&map, spec));
            }
            let z = ext.vars().iter().position(|w| *w == VarId::Local).expect("local variable");
            let mut zexps = vec![0u16; spec.nvars];
            zexps[z] = 1;
            let zp = Poly::from_terms(vec![(Mono::new(zexps, spec), RatFunc::one())]);
            let one = Poly::from_terms(vec![(Mono::one(spec), RatFunc::one())]);
            polys.push(zp.mul(&mono).mul(&poly).sub(&one));
            (ext, Some(Local { z, mono, poly }))
        };
        polys.extend(root_relations(&ring, &roots)?);
        let basis = groebner::groebner_basis(&polys, ring.spec(), options.budget)?;
        Ok(Ideal {
            generators: generators.to_vec(),
            inverted: inverted.to_vec(),
            options,
            roots,
            ring,
            basis,
            local,
            cleared,
            weights: weights.to_vec(),
        })
    }

    pub fn generators(&self) -> &[Expr] {
        &self.generators
    }

    pub fn inverted(&self) -> &[Expr] {
        &self.inverted
    }

    pub fn options(&self) -> IdealOptions {
        self.options
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Denominators cleared from the generators.
    pub fn cleared_denominators(&self) -> &[Expr] {
        &self.cleared
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.basis.iter().any(|p| p.lm().is_one())
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Basis elements as expressions, each with the localization variable
    /// cleared.
    pub fn basis(&self) -> Result<Vec<Expr>> {
        self.basis
            .iter()
            .map(|p| Ok(to_expr(&self.ring, self.local.as_ref(), p)?.0))
            .collect()
    }

    /// Normal form of `e`. The denominator of `e` is cleared first and
    /// divided back out afterwards, so a zero result certifies membership of
    /// the numerator.
    pub fn normal_form(&self, e: &Expr) -> Result<NormalForm> {
        let needed = root_degrees([e]);
        let compatible = needed
            .iter()
            .all(|(k, d)| self.roots.get(k).is_some_and(|have| have % d == 0));
        if !compatible {
            let rebuilt = Ideal::localized(
                &self.generators,
                &self.inverted,
                std::slice::from_ref(e),
                &self.weights,
                self.options,
            )?;
            return rebuilt.normal_form(e);
        }
        let extra: Vec<VarId> = variables_of([e], &self.roots)
            .into_iter()
            .filter(|v| !self.ring.contains(v))
            .collect();
        let remapped;
        let (ring, basis, local) = if extra.is_empty() {
            (&self.ring, &self.basis, self.local.clone())
        } else {
            let (ring, map) = self.ring.extended(extra);
            let spec = ring.spec().clone();
            let local = self.local.as_ref().map(|l| Local {
                z: map[l.z],
                mono: l.mono.remap(&map, &spec),
                poly: l.poly.remap(&map, &spec),
            });
            remapped = (
                ring,
                self.basis.iter().map(|p| p.remap(&map, &spec)).collect::<Vec<_>>(),
            );
            (&remapped.0, &remapped.1, local)
        };
        let (num, den) = ring.expr_to_poly(e, &self.roots)?;
        let refs: Vec<&Poly> = basis.iter().collect();
        let rem = groebner::reduce(&num, &refs);
        let (mut value, mut cleared) = to_expr(ring, local.as_ref(), &rem)?;
        if !is_trivial_mono(&den) {
            let d = ring.mono_to_expr(&den, &Expr::one())?;
            value = value.div(&d)?;
            cleared.insert(0, d);
        }
        Ok(NormalForm { value, cleared })
    }

    pub fn contains(&self, e: &Expr) -> Result<bool> {
        Ok(self.normal_form(e)?.is_zero())
    }
}

/// Expression for `p` with `z = 1/(mono*poly)`. A nontrivial power of
/// `poly` cannot be divided out; it is returned as a scaling factor.
fn to_expr(ring: &Ring, local: Option<&Local>, p: &Poly) -> Result<(Expr, Vec<Expr>)> {
    let Some(local) = local else {
        return Ok((ring.poly_to_expr(p, &Expr::one())?, vec![]));
    };
    let spec = ring.spec();
    let k = p.terms().iter().map(|(m, _)| m.exps()[local.z]).max().unwrap_or(0);
    if k == 0 {
        return Ok((ring.poly_to_expr(p, &Expr::one())?, vec![]));
    }
    // sum_j r_j z^j = S^(-k) sum_j r_j S^(k-j) with S = mono*poly.
    let s = local.mono.mul(&local.poly);
    let mut powers = vec![Poly::from_terms(vec![(Mono::one(spec), RatFunc::one())])];
    for _ in 0..k {
        let next = powers.last().expect("nonempty").mul(&s);
        powers.push(next);
    }
    let mut acc = Poly::zero();
    for (m, c) in p.terms() {
        let j = m.exps()[local.z];
        let mut exps = m.exps().to_vec();
        exps[local.z] = 0;
        let term = Poly::from_terms(vec![(Mono::new(exps, spec), c.clone())]);
        acc = acc.add(&term.mul(&powers[(k - j) as usize]));
    }
    let mono = ring.poly_to_expr(&local.mono, &Expr::one())?.pow_int(k as i64)?;
    let value = ring.poly_to_expr(&acc, &Expr::one())?.div(&mono)?;
    let mut scale = Vec::new();
    if !local.poly.lm().is_one() {
        scale.push(ring.poly_to_expr(&local.poly, &Expr::one())?.pow_int(k as i64)?);
    }
    Ok((value, scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetContext;
    use crate::parse::parse;

    fn ctx() -> JetContext {
        JetContext::new(&["t", "x"], &["u"]).unwrap()
    }

    fn ideal(c: &JetContext, gens: &[&str], order: MonomialOrder) -> Ideal {
        let gens: Vec<Expr> = gens.iter().map(|s| parse(s, c).unwrap()).collect();
        Ideal::new(
            &gens,
            &[],
            c.weights(),
            IdealOptions {
                order,
                ..IdealOptions::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn heat_equation_reduces_time_derivative() {
        let c = ctx();
        for order in [MonomialOrder::JetLexBlock, MonomialOrder::BlockGrevlex, MonomialOrder::Grevlex] {
            let i = ideal(&c, &["u_t - u_xx"], order);
            let nf = i.normal_form(&parse("u_xx", &c).unwrap()).unwrap();
            assert_eq!(nf.value, parse("u_t", &c).unwrap());
            assert!(i.contains(&parse("u_t^2 - u_xx*u_t", &c).unwrap()).unwrap());
        }
    }

    #[test]
    fn consequence_of_two_equations() {
        let c = ctx();
        let i = ideal(&c, &["u_t - u", "u_t"], MonomialOrder::JetLexBlock);
        assert!(i.contains(&parse("u", &c).unwrap()).unwrap());
        assert!(!i.is_unit());
    }

    #[test]
    fn empty_ideal_is_identity() {
        let c = ctx();
        let i = ideal(&c, &[], MonomialOrder::JetLexBlock);
        let e = parse("u_x^2 + t", &c).unwrap();
        assert_eq!(i.normal_form(&e).unwrap().value, e);
    }

    #[test]
    fn new_kernels_extend_the_ring() {
        let c = ctx();
        let i = ideal(&c, &["u_t - u_xx"], MonomialOrder::JetLexBlock);
        let nf = i.normal_form(&parse("u_tx - x*u_xx", &c).unwrap()).unwrap();
        assert_eq!(nf.value, parse("u_tx - x*u_t", &c).unwrap());
    }

    #[test]
    fn denominators_are_localized() {
        let c = ctx();
        let i = ideal(&c, &["u_t - u_x^2/u"], MonomialOrder::JetLexBlock);
        assert_eq!(i.cleared_denominators().len(), 1);
        assert!(i.contains(&parse("u*u_t - u_x^2", &c).unwrap()).unwrap());
        assert!(i.contains(&parse("u_t - u_x^2/u", &c).unwrap()).unwrap());
        let nf = i.normal_form(&parse("u_t", &c).unwrap()).unwrap();
        assert!(nf.value.sub(&parse("u_x^2/u", &c).unwrap()).is_zero());
    }

    #[test]
    fn inverting_a_factor() {
        let c = ctx();
        let gens = vec![parse("(u_x + u)*(u_t - u)", &c).unwrap()];
        let target = parse("u_t - u", &c).unwrap();
        let plain = Ideal::new(&gens, &[], c.weights(), IdealOptions::default()).unwrap();
        assert!(!plain.contains(&target).unwrap());
        let inv = [parse("u_x + u", &c).unwrap()];
        let i = Ideal::localized(&gens, &inv, &[], c.weights(), IdealOptions::default()).unwrap();
        assert!(i.contains(&target).unwrap());
        assert!(!i.contains(&parse("u_x", &c).unwrap()).unwrap());
    }

    #[test]
    fn square_roots_get_relations() {
        let c = ctx();
        let i = ideal(&c, &["u_t - sqrt(u)"], MonomialOrder::JetLexBlock);
        assert!(i.contains(&parse("u_t^2 - u", &c).unwrap()).unwrap());
    }

    #[test]
    fn constants_give_the_unit_ideal() {
        let c = ctx();
        let i = ideal(&c, &["u_x - 1", "u_x"], MonomialOrder::JetLexBlock);
        assert!(i.is_unit());
    }
}
