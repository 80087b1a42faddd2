//! Multi-indices and monomial orders.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// Unit vector `e_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self - other`, or `None` when `other` does not divide `self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn lcm(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bitmask of variables with a nonzero exponent.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << i))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// A term order on multi-indices of a fixed length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Weighted degree, ties broken by degrevlex. Weights are non-negative.
    Weighted(Vec<u32>),
    /// Elimination order: degrevlex on the first `first` variables, then
    /// degrevlex on the rest.
    Block { first: usize },
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    /// Weight 0 on the first `n` (position) variables and 1 on the next `n`
    /// (derivative) variables.
    pub fn order_filtration(n: usize) -> Self {
        let mut w = vec![0; n];
        w.extend(std::iter::repeat_n(1, n));
        MonomialOrder::Weighted(w)
    }

    pub fn cmp(&self, a: &MultiIndex, b: &MultiIndex) -> Ordering {
        let (a, b) = (a.as_slice(), b.as_slice());
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Weighted(w) => {
                let wa: u64 = a.iter().zip(w).map(|(e, w)| *e as u64 * *w as u64).sum();
                let wb: u64 = b.iter().zip(w).map(|(e, w)| *e as u64 * *w as u64).sum();
                wa.cmp(&wb).then_with(|| degrevlex(a, b))
            }
            MonomialOrder::Block { first } => {
                let k = (*first).min(a.len());
                degrevlex(&a[..k], &b[..k]).then_with(|| degrevlex(&a[k..], &b[k..]))
            }
        }
    }

    /// True when the order refines total degree (needed for the Krull
    /// dimension shortcut and for Weyl-algebra termination).
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::DegRevLex)
    }

    /// True when the order first compares the weight `(0,..,0,1,..,1)` of an
    /// `n + n` variable ring.
    pub fn is_order_filtration(&self, n: usize) -> bool {
        match self {
            MonomialOrder::Weighted(w) => {
                w.len() == 2 * n && w[..n].iter().all(|&x| x == 0) && w[n..].iter().all(|&x| x == 1)
            }
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::DegRevLex => "degrevlex",
            MonomialOrder::Weighted(_) => "weighted",
            MonomialOrder::Block { .. } => "block",
        }
    }
}
