//! Sparse polynomials with dense exponent vectors over Q(parameters).

use std::cmp::Ordering;

use crate::expr::RatFunc;

/// How a block of consecutive variables is ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Lex,
    Grevlex,
}

/// Product of blocks; earlier blocks dominate. Variable 0 is the largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderSpec {
    pub nvars: usize,
    /// `(start, end, kind)` covering `0..nvars` in order.
    pub blocks: Vec<(usize, usize, BlockKind)>,
}

impl OrderSpec {
    fn key_len(&self) -> usize {
        self.blocks
            .iter()
            .map(|&(s, e, k)| match k {
                BlockKind::Lex => e - s,
                BlockKind::Grevlex => e - s + 1,
            })
            .sum()
    }

    /// Order key; comparing keys lexicographically compares monomials.
    /// The key is linear in the exponents.
    fn key(&self, exps: &[u16]) -> Vec<i32> {
        let mut key = Vec::with_capacity(self.key_len());
        for &(s, e, kind) in &self.blocks {
            match kind {
                BlockKind::Lex => key.extend(exps[s..e].iter().map(|&x| x as i32)),
                BlockKind::Grevlex => {
                    key.push(exps[s..e].iter().map(|&x| x as i32).sum());
                    key.extend(exps[s..e].iter().rev().map(|&x| -(x as i32)));
                }
            }
        }
        key
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    exps: Box<[u16]>,
    key: Box<[i32]>,
    mask: u64,
}

fn mask_of(exps: &[u16]) -> u64 {
    let mut m = 0u64;
    for (i, &e) in exps.iter().enumerate() {
        if e > 0 {
            m |= 1 << (i % 64);
        }
    }
    m
}

impl Mono {
    pub fn new(exps: Vec<u16>, order: &OrderSpec) -> Mono {
        let key = order.key(&exps).into_boxed_slice();
        Mono {
            mask: mask_of(&exps),
            exps: exps.into_boxed_slice(),
            key,
        }
    }

    pub fn one(order: &OrderSpec) -> Mono {
        Mono::new(vec![0; order.nvars], order)
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.mask == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
            key: self.key.iter().zip(other.key.iter()).map(|(a, b)| a + b).collect(),
            mask: self.mask | other.mask,
        }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.mask & !other.mask == 0 && self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `self / d`; caller guarantees `d | self`.
    pub fn div(&self, d: &Mono) -> Mono {
        let exps: Box<[u16]> = self.exps.iter().zip(d.exps.iter()).map(|(a, b)| a - b).collect();
        Mono {
            mask: mask_of(&exps),
            key: self.key.iter().zip(d.key.iter()).map(|(a, b)| a - b).collect(),
            exps,
        }
    }

    pub fn lcm(&self, other: &Mono, order: &OrderSpec) -> Mono {
        Mono::new(
            self.exps.iter().zip(other.exps.iter()).map(|(a, b)| *a.max(b)).collect(),
            order,
        )
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.mask & other.mask == 0
            || self.exps.iter().zip(other.exps.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

/// Terms sorted by decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: Vec<(Mono, RatFunc)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    /// Build from unsorted terms, merging duplicates.
    pub fn from_terms(mut terms: Vec<(Mono, RatFunc)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, RatFunc)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Mono, RatFunc)] {
        &self.terms
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

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &RatFunc {
        &self.terms[0].1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().inv().expect("nonzero");
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(&inv))).collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect(),
        }
    }

    /// `self - c * m * other`.
    pub fn sub_mul(&self, c: &RatFunc, m: &Mono, other: &Poly) -> Poly {
        Poly {
            terms: sub_mul_terms(&self.terms, c, m, &other.terms),
        }
    }

    /// Terms already sorted in decreasing order without duplicates or
    /// zero coefficients.
    pub(crate) fn from_sorted(terms: Vec<(Mono, RatFunc)>) -> Poly {
        Poly { terms }
    }

    pub(crate) fn into_terms(self) -> Vec<(Mono, RatFunc)> {
        self.terms
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let one = Mono {
            exps: vec![0; self.nvars_hint(other)].into_boxed_slice(),
            key: vec![0; self.key_hint(other)].into_boxed_slice(),
            mask: 0,
        };
        self.sub_mul(&RatFunc::one().neg(), &one, other)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let one = Mono {
            exps: vec![0; self.nvars_hint(other)].into_boxed_slice(),
            key: vec![0; self.key_hint(other)].into_boxed_slice(),
            mask: 0,
        };
        self.sub_mul(&RatFunc::one(), &one, other)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(terms)
    }

    fn nvars_hint(&self, other: &Poly) -> usize {
        self.terms
            .first()
            .or(other.terms.first())
            .map(|(m, _)| m.exps.len())
            .unwrap_or(0)
    }

    fn key_hint(&self, other: &Poly) -> usize {
        self.terms
            .first()
            .or(other.terms.first())
            .map(|(m, _)| m.key.len())
            .unwrap_or(0)
    }

    /// Re-express in another variable layout; `map[i]` is the new index of
    /// old variable `i`. The caller guarantees the new order restricts to
    /// the old one, so term order is preserved.
    pub fn remap(&self, map: &[usize], order: &OrderSpec) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = vec![0u16; order.nvars];
                    for (i, &e) in m.exps.iter().enumerate() {
                        exps[map[i]] = e;
                    }
                    (Mono::new(exps, order), c.clone())
                })
                .collect(),
        }
    }
}

/// `a - c * m * b` on sorted term lists.
pub(crate) fn sub_mul_terms(
    a: &[(Mono, RatFunc)],
    c: &RatFunc,
    m: &Mono,
    b: &[(Mono, RatFunc)],
) -> Vec<(Mono, RatFunc)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bj: Option<Mono> = b.first().map(|t| t.0.mul(m));
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), &bj) {
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (Some((am, _)), Some(bm)) => am.cmp(bm),
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let bm = bj.take().expect("present");
                out.push((bm, b[j].1.mul(c).neg()));
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(m));
            }
            Ordering::Equal => {
                let s = a[i].1.sub(&b[j].1.mul(c));
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
                bj = b.get(j).map(|t| t.0.mul(m));
            }
        }
    }
    out
}
