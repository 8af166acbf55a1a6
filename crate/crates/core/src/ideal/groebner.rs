//! Buchberger completion with the Gebauer-Moeller criteria and the normal
//! selection strategy.

use super::poly::{sub_mul_terms, Mono, OrderSpec, Poly};
use crate::error::{Error, Result};
use crate::expr::RatFunc;

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

/// Reduce `p` completely modulo `basis` (leading coefficients 1).
pub fn reduce(p: &Poly, basis: &[&Poly]) -> Poly {
    let mut rest = p.clone().into_terms();
    let mut pos = 0;
    let mut out: Vec<(Mono, RatFunc)> = Vec::new();
    while pos < rest.len() {
        let lm = &rest[pos].0;
        match basis.iter().find(|g| g.lm().divides(lm)) {
            Some(g) => {
                let q = lm.div(g.lm());
                let c = rest[pos].1.div(g.lc()).expect("nonzero reducer");
                rest = sub_mul_terms(&rest[pos..], &c, &q, g.terms());
                pos = 0;
            }
            None => {
                out.push(rest[pos].clone());
                pos += 1;
            }
        }
    }
    Poly::from_sorted(out)
}

fn spoly(f: &Poly, g: &Poly, lcm: &Mono) -> Poly {
    let a = lcm.div(f.lm());
    let b = lcm.div(g.lm());
    // f and g are monic
    let fa = Poly::zero().sub_mul(&RatFunc::one().neg(), &a, f);
    fa.sub_mul(&RatFunc::one(), &b, g)
}

struct State<'a> {
    order: &'a OrderSpec,
    polys: Vec<Poly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl State<'_> {
    fn update(&mut self, h: Poly) {
        let hi = self.polys.len();
        let hlm = h.lm().clone();
        self.polys.push(h);
        self.active.push(true);

        let candidates: Vec<Pair> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| Pair {
                i: g,
                j: hi,
                lcm: self.polys[g].lm().lcm(&hlm, self.order),
            })
            .collect();

        // Chain criterion among the new pairs; coprime pairs are kept for
        // the moment so that they can shadow others.
        let mut kept: Vec<Pair> = Vec::new();
        for (idx, p) in candidates.iter().enumerate() {
            let coprime = self.polys[p.i].lm().coprime(&hlm);
            let shadowed = candidates[idx + 1..].iter().any(|q| q.lcm.divides(&p.lcm))
                || kept.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime || !shadowed {
                kept.push(p.clone());
            }
        }
        let kept: Vec<Pair> = kept
            .into_iter()
            .filter(|p| !self.polys[p.i].lm().coprime(&hlm))
            .collect();

        let polys = &self.polys;
        let order = self.order;
        self.pairs.retain(|p| {
            !(hlm.divides(&p.lcm)
                && polys[p.i].lm().lcm(&hlm, order) != p.lcm
                && polys[p.j].lm().lcm(&hlm, order) != p.lcm)
        });
        self.pairs.extend(kept);

        for g in 0..hi {
            if self.active[g] && hlm.divides(self.polys[g].lm()) {
                self.active[g] = false;
            }
        }
    }

    fn active_polys(&self) -> Vec<&Poly> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, a)| **a)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Reduced Groebner basis of the given polynomials, sorted by increasing
/// leading monomial. Fails when more than `budget` S-polynomials are
/// reduced.
pub fn groebner_basis(gens: &[Poly], order: &OrderSpec, budget: usize) -> Result<Vec<Poly>> {
    let mut input: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).map(|p| p.monic()).collect();
    input.sort_by(|a, b| a.lm().cmp(b.lm()));
    let mut st = State {
        order,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for p in input {
        let h = reduce(&p, &st.active_polys());
        if !h.is_zero() {
            st.update(h.monic());
        }
    }
    let mut processed = 0usize;
    while !st.pairs.is_empty() {
        let (idx, _) = st
            .pairs
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.lcm.cmp(&b.1.lcm).then((a.1.i, a.1.j).cmp(&(b.1.i, b.1.j))))
            .expect("nonempty");
        let pair = st.pairs.swap_remove(idx);
        processed += 1;
        if processed > budget {
            return Err(Error::Budget(budget));
        }
        let s = spoly(&st.polys[pair.i], &st.polys[pair.j], &pair.lcm);
        let h = reduce(&s, &st.active_polys());
        if !h.is_zero() {
            st.update(h.monic());
        }
    }
    Ok(interreduce(st.active_polys().into_iter().cloned().collect()))
}

/// Make every polynomial monic and fully reduced by the others.
fn interreduce(mut polys: Vec<Poly>) -> Vec<Poly> {
    polys.sort_by(|a, b| a.lm().cmp(b.lm()));
    // Drop polynomials whose leading monomial is divisible by another's.
    let mut minimal: Vec<Poly> = Vec::new();
    for p in polys {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<&Poly> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| p).collect();
        out.push(reduce(&minimal[i], &others).monic());
    }
    out.sort_by(|a, b| a.lm().cmp(b.lm()));
    out
}
