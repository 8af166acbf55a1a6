//! Variable layout of a polynomial ring built from kernels, and conversion
//! between expressions and polynomials.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::poly::{BlockKind, Mono, OrderSpec, Poly};
use crate::error::{Error, Result};
use crate::expr::{Exponent, Expr, Kernel, KernelKind, RatFunc};

/// Named monomial orders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Jets lexicographically (higher weighted order first), then auxiliary
    /// roots, function kernels, exponentials and base variables, each block
    /// graded reverse lexicographic.
    #[default]
    JetLexBlock,
    /// Same blocks, every block graded reverse lexicographic.
    BlockGrevlex,
    /// One graded reverse lexicographic block over all variables.
    Grevlex,
}

/// A ring variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    Kernel(Kernel),
    /// `w` with `w^d = kernel`.
    Root(Kernel, u32),
    /// Rabinowitsch variable inverting the generator denominators.
    Local,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Block {
    Jet,
    Root,
    Func,
    Exp,
    Base,
    Local,
}

type SortKey = (Block, Reverse<u32>, usize, Reverse<Vec<u32>>, String);

fn sort_key(v: &VarId, weights: &[u32]) -> SortKey {
    match v {
        VarId::Kernel(k) => match k.kind() {
            KernelKind::Jet { dep, sigma } => (
                Block::Jet,
                Reverse(sigma.weighted(weights)),
                *dep,
                Reverse(sigma.entries().to_vec()),
                String::new(),
            ),
            KernelKind::Func { .. } => (Block::Func, Reverse(0), 0, Reverse(vec![]), k.key().to_string()),
            KernelKind::Exp { .. } => (Block::Exp, Reverse(0), 0, Reverse(vec![]), k.key().to_string()),
            KernelKind::Base { index } => (Block::Base, Reverse(0), *index, Reverse(vec![]), String::new()),
        },
        VarId::Root(k, d) => (Block::Root, Reverse(0), *d as usize, Reverse(vec![]), k.key().to_string()),
        VarId::Local => (Block::Local, Reverse(0), 0, Reverse(vec![]), String::new()),
    }
}

fn block_of(v: &VarId) -> Block {
    match v {
        VarId::Kernel(k) => match k.kind() {
            KernelKind::Jet { .. } => Block::Jet,
            KernelKind::Func { .. } => Block::Func,
            KernelKind::Exp { .. } => Block::Exp,
            KernelKind::Base { .. } => Block::Base,
        },
        VarId::Root(..) => Block::Root,
        VarId::Local => Block::Local,
    }
}

/// Ordered ring variables with the induced monomial order.
#[derive(Clone, Debug)]
pub struct Ring {
    vars: Vec<VarId>,
    index: HashMap<VarId, usize>,
    spec: OrderSpec,
    order: MonomialOrder,
    weights: Vec<u32>,
}

impl Ring {
    pub fn new(vars: impl IntoIterator<Item = VarId>, order: MonomialOrder, weights: &[u32]) -> Ring {
        let set: BTreeSet<VarId> = vars.into_iter().collect();
        let mut vars: Vec<VarId> = set.into_iter().collect();
        vars.sort_by_cached_key(|v| sort_key(v, weights));
        let index = vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut blocks: Vec<(usize, usize, BlockKind)> = Vec::new();
        match order {
            MonomialOrder::Grevlex => {
                if !vars.is_empty() {
                    blocks.push((0, vars.len(), BlockKind::Grevlex));
                }
            }
            _ => {
                let mut start = 0;
                for i in 1..=vars.len() {
                    if i == vars.len() || block_of(&vars[i]) != block_of(&vars[start]) {
                        let kind = if order == MonomialOrder::JetLexBlock && block_of(&vars[start]) == Block::Jet {
                            BlockKind::Lex
                        } else {
                            BlockKind::Grevlex
                        };
                        blocks.push((start, i, kind));
                        start = i;
                    }
                }
            }
        }
        Ring {
            spec: OrderSpec {
                nvars: vars.len(),
                blocks,
            },
            vars,
            index,
            order,
            weights: weights.to_vec(),
        }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn spec(&self) -> &OrderSpec {
        &self.spec
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn contains(&self, v: &VarId) -> bool {
        self.index.contains_key(v)
    }

    /// Ring with additional variables and the index map from this ring.
    pub fn extended(&self, extra: impl IntoIterator<Item = VarId>) -> (Ring, Vec<usize>) {
        let ring = Ring::new(self.vars.iter().cloned().chain(extra), self.order, &self.weights);
        let map = self.vars.iter().map(|v| ring.index[v]).collect();
        (ring, map)
    }

    fn var_expr(&self, i: usize, local_inverse: &Expr) -> Expr {
        match &self.vars[i] {
            VarId::Kernel(k) => Expr::kernel(k.clone()),
            VarId::Root(k, d) => Expr::kernel_pow(k.clone(), Exponent::new(1, *d as i64)),
            VarId::Local => local_inverse.clone(),
        }
    }

    /// Expression for a monomial, with the Rabinowitsch variable replaced
    /// by `local_inverse`.
    pub fn mono_to_expr(&self, m: &Mono, local_inverse: &Expr) -> Result<Expr> {
        let mut out = Expr::one();
        for (i, &e) in m.exps().iter().enumerate() {
            if e > 0 {
                out = out.mul(&self.var_expr(i, local_inverse).pow_int(e as i64)?);
            }
        }
        Ok(out)
    }

    pub fn poly_to_expr(&self, p: &Poly, local_inverse: &Expr) -> Result<Expr> {
        let mut out = Expr::zero();
        for (m, c) in p.terms() {
            out.add_assign(&self.mono_to_expr(m, local_inverse)?.scale(c));
        }
        Ok(out)
    }

    /// Numerator polynomial of `e` and the cleared denominator monomial.
    pub fn expr_to_poly(&self, e: &Expr, roots: &BTreeMap<Kernel, u32>) -> Result<(Poly, Mono)> {
        let n = self.vars.len();
        let mut rows: Vec<(Vec<i64>, RatFunc)> = Vec::with_capacity(e.len());
        for (m, c) in e.terms() {
            let mut exps = vec![0i64; n];
            for (k, q) in m.factors() {
                let (var, power) = match roots.get(k) {
                    Some(&d) => (VarId::Root(k.clone(), d), *q * Exponent::from_integer(d as i64)),
                    None => (VarId::Kernel(k.clone()), *q),
                };
                if !power.is_integer() {
                    return Err(Error::UnsupportedPower(format!("{k}^({q}) without a root variable")));
                }
                let i = *self
                    .index
                    .get(&var)
                    .ok_or_else(|| Error::Validation(format!("kernel `{k}` is not a ring variable")))?;
                exps[i] += power.to_integer();
            }
            rows.push((exps, c.clone()));
        }
        let mut shift = vec![0i64; n];
        for (exps, _) in &rows {
            for (s, &x) in shift.iter_mut().zip(exps) {
                *s = (*s).min(x);
            }
        }
        let to_u16 = |x: i64| -> Result<u16> {
            u16::try_from(x).map_err(|_| Error::UnsupportedPower(format!("exponent {x} out of range")))
        };
        let mut terms = Vec::with_capacity(rows.len());
        for (exps, c) in rows {
            let shifted: Vec<u16> = exps
                .iter()
                .zip(&shift)
                .map(|(x, s)| to_u16(x - s))
                .collect::<Result<_>>()?;
            terms.push((Mono::new(shifted, &self.spec), c));
        }
        let den: Vec<u16> = shift.iter().map(|s| to_u16(-s)).collect::<Result<_>>()?;
        Ok((Poly::from_terms(terms), Mono::new(den, &self.spec)))
    }
}

/// Root degrees needed so that every kernel exponent becomes an integer.
pub fn root_degrees<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> BTreeMap<Kernel, u32> {
    let mut out: BTreeMap<Kernel, u32> = BTreeMap::new();
    for e in exprs {
        for (m, _) in e.terms() {
            for (k, q) in m.factors() {
                let d = *q.denom() as u32;
                if d > 1 {
                    let entry = out.entry(k.clone()).or_insert(1);
                    *entry = num_integer::lcm(*entry, d);
                }
            }
        }
    }
    out
}

/// Ring variables needed for the given expressions.
pub fn variables_of<'a>(exprs: impl IntoIterator<Item = &'a Expr>, roots: &BTreeMap<Kernel, u32>) -> BTreeSet<VarId> {
    let mut out = BTreeSet::new();
    for e in exprs {
        for k in e.kernels() {
            match roots.get(&k) {
                Some(&d) => {
                    out.insert(VarId::Root(k, d));
                }
                None => {
                    out.insert(VarId::Kernel(k));
                }
            }
        }
    }
    out
}

/// `w^d - k` for every root variable.
pub fn root_relations(ring: &Ring, roots: &BTreeMap<Kernel, u32>) -> Result<Vec<Poly>> {
    let spec = ring.spec();
    let mut out = Vec::new();
    for (k, &d) in roots {
        let w = ring.index[&VarId::Root(k.clone(), d)];
        let kv = ring
            .index
            .get(&VarId::Kernel(k.clone()))
            .copied()
            .ok_or_else(|| Error::Validation(format!("kernel `{k}` missing from ring")))?;
        let mut a = vec![0u16; spec.nvars];
        a[w] = d as u16;
        let mut b = vec![0u16; spec.nvars];
        b[kv] = 1;
        out.push(Poly::from_terms(vec![
            (Mono::new(a, spec), RatFunc::one()),
            (Mono::new(b, spec), RatFunc::one().neg()),
        ]));
    }
    Ok(out)
}

pub(crate) fn is_trivial_mono(m: &Mono) -> bool {
    m.exps().iter().all(|e| e.is_zero())
}
