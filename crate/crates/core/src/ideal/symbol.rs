//! Common factors of two-variable symbols.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{MultiIndex, SymbolPoly};

/// Greatest common divisor of two symbols and their resultant.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolGcd {
    /// Defined up to a factor from the coefficient field.
    pub gcd: SymbolPoly,
    /// Resultant of the two symbols with `xi_2 = 1` and common `xi_2`
    /// powers removed.
    pub resultant: Expr,
    /// True when the symbols share no factor.
    pub coprime: bool,
}

/// Univariate polynomial in `xi_1`; `c[i]` multiplies `xi_1^i`.
type Uni = Vec<Expr>;

fn trim(mut a: Uni) -> Uni {
    while a.last().is_some_and(Expr::is_zero) {
        a.pop();
    }
    a
}

fn degree(a: &Uni) -> Option<usize> {
    a.len().checked_sub(1)
}

/// Pseudo-remainder of `a` by `b`.
fn prem(a: &Uni, b: &Uni) -> Uni {
    let db = degree(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut a = a.clone();
    while let Some(da) = degree(&a) {
        if da < db {
            break;
        }
        let la = a[da].clone();
        let shift = da - db;
        let mut next: Uni = a.iter().map(|c| c.mul(lb)).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + shift] = next[i + shift].sub(&c.mul(&la));
        }
        a = trim(next);
    }
    a
}

fn determinant(m: &[Vec<Expr>]) -> Expr {
    fn go(m: &[Vec<Expr>], row: usize, used: u64, memo: &mut HashMap<u64, Expr>) -> Expr {
        if row == m.len() {
            return Expr::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut out = Expr::zero();
        let mut sign = 1i64;
        for col in 0..m.len() {
            if used & (1 << col) != 0 {
                continue;
            }
            if !m[row][col].is_zero() {
                let minor = go(m, row + 1, used | (1 << col), memo);
                out.add_assign(&m[row][col].mul(&minor).scale(&crate::expr::RatFunc::from_integer(sign)));
            }
            sign = -sign;
        }
        memo.insert(used, out.clone());
        out
    }
    go(m, 0, 0, &mut HashMap::new())
}

fn resultant(a: &Uni, b: &Uni) -> Expr {
    let (Some(da), Some(db)) = (degree(a), degree(b)) else {
        return Expr::zero();
    };
    if da == 0 && db == 0 {
        return Expr::one();
    }
    let n = da + db;
    let mut m = vec![vec![Expr::zero(); n]; n];
    for r in 0..db {
        for (i, c) in a.iter().enumerate() {
            m[r][r + da - i] = c.clone();
        }
    }
    for r in 0..da {
        for (i, c) in b.iter().enumerate() {
            m[db + r][r + db - i] = c.clone();
        }
    }
    determinant(&m)
}

/// Split off the common power of `xi_2` and dehomogenize at `xi_2 = 1`.
fn dehomogenize(p: &SymbolPoly) -> (u32, Uni) {
    let low = p.terms().map(|(s, _)| s.entries()[1]).min().unwrap_or(0);
    let mut out: Uni = Vec::new();
    for (s, c) in p.terms() {
        let i = s.entries()[0] as usize;
        if out.len() <= i {
            out.resize(i + 1, Expr::zero());
        }
        out[i] = out[i].add(c);
    }
    (low, trim(out))
}

/// Gcd and resultant of two symbols in two covector variables. Symbols
/// are homogeneous for the weights `w`.
pub fn symbol_gcd_resultant(p: &SymbolPoly, q: &SymbolPoly, w: &[u32]) -> Result<SymbolGcd> {
    if w.len() != 2 {
        return Err(Error::Unsupported("symbol gcd needs exactly two independent variables".into()));
    }
    if p.is_zero() || q.is_zero() {
        return Err(Error::Validation("zero symbol".into()));
    }
    let (lp, up) = dehomogenize(p);
    let (lq, uq) = dehomogenize(q);
    let common = lp.min(lq);
    let res = resultant(&up, &uq);

    let (mut a, mut b) = if degree(&up) >= degree(&uq) { (up, uq) } else { (uq, up) };
    while !b.is_empty() {
        let r = prem(&a, &b);
        a = b;
        b = r;
    }
    let d = degree(&a).unwrap_or(0);
    // Rehomogenize: xi_1^i xi_2^j with w1*i + w2*j = w1*d.
    let mut gcd = SymbolPoly::zero();
    if d == 0 {
        gcd.add_term(MultiIndex::new(vec![0, common]), &Expr::one());
    } else {
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let gap = w[0] * (d - i) as u32;
            if !gap.is_multiple_of(w[1]) {
                return Err(Error::Validation("symbol is not weighted homogeneous".into()));
            }
            gcd.add_term(MultiIndex::new(vec![i as u32, gap / w[1] + common]), c);
        }
    }
    let coprime = common == 0 && !res.is_zero();
    Ok(SymbolGcd {
        gcd,
        resultant: res,
        coprime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetContext;
    use crate::parse::parse_symbol;

    fn sym(s: &str) -> SymbolPoly {
        let c = JetContext::new(&["t", "x"], &["u"]).unwrap();
        parse_symbol(s, &c).unwrap()
    }

    #[test]
    fn shared_time_covector() {
        let g = symbol_gcd_resultant(&sym("xi_t*xi_x"), &sym("xi_t"), &[1, 1]).unwrap();
        assert_eq!(g.gcd, sym("xi_t"));
        assert!(!g.coprime);
    }

    #[test]
    fn elliptic_against_time() {
        let g = symbol_gcd_resultant(&sym("xi_t^2 + xi_x^2"), &sym("xi_t"), &[1, 1]).unwrap();
        assert_eq!(g.gcd, sym("1"));
        assert!(g.coprime);
        assert!(!g.resultant.is_zero());
    }

    #[test]
    fn equal_symbols_are_not_coprime() {
        let p = sym("xi_t^2 - xi_x^2");
        let g = symbol_gcd_resultant(&p, &p, &[1, 1]).unwrap();
        assert!(!g.coprime);
        assert_eq!(g.gcd.degree(), Some(2));
    }

    #[test]
    fn common_x_power() {
        let g = symbol_gcd_resultant(&sym("xi_x^2"), &sym("xi_t*xi_x"), &[1, 1]).unwrap();
        assert_eq!(g.gcd, sym("xi_x"));
        assert!(!g.coprime);
    }

    #[test]
    fn weighted_heat_symbol() {
        let heat = SymbolPoly::from_terms([
            (MultiIndex::new(vec![1, 0]), Expr::one()),
            (MultiIndex::new(vec![0, 2]), Expr::integer(-1)),
        ]);
        let g = symbol_gcd_resultant(&heat, &sym("xi_x^2"), &[2, 1]).unwrap();
        assert!(g.coprime);
    }
}
