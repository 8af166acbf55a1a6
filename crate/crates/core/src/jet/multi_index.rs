use std::cmp::Ordering;
use std::fmt;

/// Multi-index `sigma = (i_1, ..., i_n)`, one entry per independent variable.
///
/// Ordered graded-lexicographically: by total order, then with earlier
/// variables counting first (`(1,0)` before `(0,1)`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted(&self, weights: &[u32]) -> u32 {
        self.0.iter().zip(weights).map(|(c, w)| c * w).sum()
    }

    pub fn incremented(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise maximum.
    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// Product of binomial coefficients `prod_i C(sigma_i, rho_i)`.
    pub fn binomial(&self, rho: &MultiIndex) -> u64 {
        self.0
            .iter()
            .zip(&rho.0)
            .map(|(&s, &r)| binom(s as u64, r as u64))
            .product()
    }

    /// All `rho` with `rho <= self` componentwise, in canonical order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &c in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=c).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(k);
                        p
                    })
                })
                .collect();
        }
        let mut v: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        v.sort();
        v
    }

    /// All multi-indices of weighted order at most `bound`, in canonical order.
    pub fn all_up_to(weights: &[u32], bound: u32) -> Vec<MultiIndex> {
        fn rec(weights: &[u32], left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() == weights.len() {
                out.push(MultiIndex(prefix.clone()));
                return;
            }
            let w = weights[prefix.len()].max(1);
            for k in 0..=(left / w) {
                prefix.push(k);
                rec(weights, left - k * w, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(weights, bound, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Index of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let mut v = MultiIndex::all_up_to(&[1, 1], 2);
        v.sort();
        let got: Vec<_> = v.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]
        );
    }

    #[test]
    fn weighted_enumeration_respects_weights() {
        let v = MultiIndex::all_up_to(&[2, 1], 2);
        assert_eq!(v.len(), 4); // 0, t, x, xx
        assert!(v.iter().all(|m| m.weighted(&[2, 1]) <= 2));
    }

    #[test]
    fn binomials() {
        let s = MultiIndex::new(vec![2, 3]);
        assert_eq!(s.binomial(&MultiIndex::new(vec![1, 2])), 2 * 3);
        assert_eq!(s.sub_indices().len(), 12);
    }
}
