//! Normally ordered elements of the Weyl algebra `Q[x_1..x_n, d_1..d_n]`
//! with `[d_i, x_j] = delta_ij`.
//!
//! A term `c x^a d^b` is keyed by the concatenated exponent vector
//! `(a, b)` of length `2n`, the same layout used by the symplectic
//! polynomial ring `Q[z, xi]` so that symbols are read off without
//! re-indexing.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::monomial::MultiIndex;
use crate::poly::{join_terms, Poly};
use crate::scalar::{binomial, falling, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// An element `sum c_{ab} x^a d^b` of the Weyl algebra in normal order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylOp {
    n: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl WeylOp {
    pub fn zero(n: usize) -> Self {
        WeylOp { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        Self::term(n, &vec![0; n], &vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Scalar::one())
    }

    /// Multiplication operator `x_i` (0-based).
    pub fn x(n: usize, i: usize) -> Self {
        WeylOp::from_key(n, MultiIndex::unit(2 * n, i), Scalar::one())
    }

    /// Derivation `d_i` (0-based).
    pub fn d(n: usize, i: usize) -> Self {
        WeylOp::from_key(n, MultiIndex::unit(2 * n, n + i), Scalar::one())
    }

    /// `c x^a d^b`.
    pub fn term(n: usize, a: &[u32], b: &[u32], c: Scalar) -> Self {
        assert!(a.len() == n && b.len() == n, "exponent length");
        let mut key = a.to_vec();
        key.extend_from_slice(b);
        WeylOp::from_key(n, MultiIndex(key), c)
    }

    pub(crate) fn from_key(n: usize, key: MultiIndex, c: Scalar) -> Self {
        let mut w = WeylOp::zero(n);
        w.add_term(key, c);
        w
    }

    /// Reads a polynomial in the `(z, xi)` layout as a normally ordered
    /// operator (`z -> x`, `xi -> d`).
    pub fn from_poly(n: usize, p: &Poly) -> Self {
        assert_eq!(p.nvars(), 2 * n);
        let mut w = WeylOp::zero(n);
        for (m, c) in p.terms() {
            w.add_term(m.clone(), c.clone());
        }
        w
    }

    /// The same normally ordered terms as a commutative polynomial.
    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(2 * self.n, self.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn dim(&self) -> usize {
        self.n
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

    /// Terms as `((a, b) key, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &[u32], b: &[u32]) -> Scalar {
        let mut key = a.to_vec();
        key.extend_from_slice(b);
        self.terms.get(&MultiIndex(key)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, key: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &WeylOp) -> Result<(), DimensionMismatch> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(DimensionMismatch { left: self.n, right: other.n })
        }
    }

    pub fn add(&self, other: &WeylOp) -> Result<WeylOp, DimensionMismatch> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &WeylOp) -> Result<WeylOp, DimensionMismatch> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> WeylOp {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero(self.n);
        }
        WeylOp { n: self.n, terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// Normally ordered product `self * other`.
    pub fn multiply(&self, other: &WeylOp) -> Result<WeylOp, DimensionMismatch> {
        self.check(other)?;
        let mut out = WeylOp::zero(self.n);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let c = c1 * c2;
                mul_monomials(self.n, k1, k2, |k, f| out.add_term(k, &c * Scalar::from_integer(f)));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp, DimensionMismatch> {
        self.multiply(other)?.sub(&other.multiply(self)?)
    }

    pub fn pow(&self, e: u32) -> WeylOp {
        (0..e).fold(WeylOp::one(self.n), |acc, _| acc.multiply(self).expect("same dimension"))
    }

    /// Order in the derivation filtration; `None` encodes the order of the
    /// zero operator (minus infinity).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0[self.n..].iter().sum()).max()
    }

    /// The order-`m` symbol in `Q[z, xi]`: terms with `|b| = m`, `d -> xi`.
    /// Zero when `m` exceeds the order.
    pub fn symbol(&self, m: u32) -> Poly {
        Poly::from_terms(
            2 * self.n,
            self.terms
                .iter()
                .filter(|(k, _)| k.0[self.n..].iter().sum::<u32>() == m)
                .map(|(k, c)| (k.clone(), c.clone())),
        )
    }

    /// Principal symbol; the zero polynomial for the zero operator.
    pub fn principal_symbol(&self) -> Poly {
        match self.order() {
            Some(m) => self.symbol(m),
            None => Poly::zero(2 * self.n),
        }
    }

    /// The anti-automorphism fixing `x_i` and sending `d_i -> -d_i`.
    pub fn formal_adjoint(&self) -> WeylOp {
        let n = self.n;
        let mut out = WeylOp::zero(n);
        for (k, c) in &self.terms {
            let (a, b) = k.0.split_at(n);
            let sign = if b.iter().sum::<u32>() % 2 == 0 { c.clone() } else { -c.clone() };
            // (x^a d^b)* = (-d)^b x^a
            let db = WeylOp::term(n, &vec![0; n], b, sign);
            let xa = WeylOp::term(n, a, &vec![0; n], Scalar::one());
            for (k2, c2) in db.multiply(&xa).expect("same dimension").terms {
                out.add_term(k2, c2);
            }
        }
        out
    }

    /// Image under `x_i -> -d_i`, `d_i -> x_i`, re-normal-ordered.
    pub fn fourier_transform(&self) -> WeylOp {
        let n = self.n;
        let mut out = WeylOp::zero(n);
        for (k, c) in &self.terms {
            let (a, b) = k.0.split_at(n);
            let sign = if a.iter().sum::<u32>() % 2 == 0 { c.clone() } else { -c.clone() };
            // x^a d^b -> (-d)^a x^b
            let da = WeylOp::term(n, &vec![0; n], a, sign);
            let xb = WeylOp::term(n, b, &vec![0; n], Scalar::one());
            for (k2, c2) in da.multiply(&xb).expect("same dimension").terms {
                out.add_term(k2, c2);
            }
        }
        out
    }

    /// The automorphism `x -> -x`, `d -> -d`.
    pub fn antipode(&self) -> WeylOp {
        let mut out = WeylOp::zero(self.n);
        for (k, c) in &self.terms {
            let c = if k.degree() % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term(k.clone(), c);
        }
        out
    }

    /// Common value of `|b| - |a|` over all terms (`deg d = 1`,
    /// `deg x = -1`), or `None` when the operator is inhomogeneous. The zero
    /// operator has degree 0.
    pub fn grading_degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|k| {
            let (a, b) = k.0.split_at(self.n);
            b.iter().sum::<u32>() as i64 - a.iter().sum::<u32>() as i64
        });
        let first = match degs.next() {
            Some(d) => d,
            None => return Some(0),
        };
        degs.all(|d| d == first).then_some(first)
    }

    /// True when no term contains an `x`.
    pub fn is_constant_coefficient(&self) -> bool {
        self.terms.keys().all(|k| k.0[..self.n].iter().all(|&e| e == 0))
    }

    /// Formal action on `c x^e` (exponents may be any rationals), with like
    /// exponents collected.
    pub fn apply_twisted(&self, t: &TwistedPower) -> Vec<TwistedPower> {
        let n = self.n;
        assert_eq!(t.exponents.len(), n, "exponent length");
        let mut acc: BTreeMap<Vec<Scalar>, Scalar> = BTreeMap::new();
        for (k, c) in &self.terms {
            let (a, b) = k.0.split_at(n);
            let mut coeff = c * &t.coeff;
            let mut exps = t.exponents.clone();
            for i in 0..n {
                for s in 0..b[i] {
                    coeff *= &exps[i] - Scalar::from_integer(BigInt::from(s));
                }
                exps[i] = &exps[i] - Scalar::from_integer(BigInt::from(b[i]))
                    + Scalar::from_integer(BigInt::from(a[i]));
            }
            if coeff.is_zero() {
                continue;
            }
            let e = acc.entry(exps).or_insert_with(Scalar::zero);
            *e += coeff;
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coeff)| TwistedPower { coeff, exponents })
            .collect()
    }

    /// Renders with `pos` as the position-variable prefix (`x` or `z`) and
    /// `d` for derivations; principal part first.
    pub fn display_with(&self, pos: &str) -> String {
        let n = self.n;
        let mut names: Vec<String> = (1..=n).map(|i| format!("{pos}{i}")).collect();
        names.extend((1..=n).map(|i| format!("d{i}")));
        // derivation order, then total degree, then lex
        let key = |k: &MultiIndex| (k.0[n..].iter().sum::<u32>(), k.degree());
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| key(b.0).cmp(&key(a.0)).then_with(|| b.0.cmp(a.0)));
        join_terms(terms.into_iter().map(|(k, c)| (c.clone(), crate::poly::monomial_text(&names, k.as_slice()))))
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("x"))
    }
}

/// Calls `emit(key, factor)` for each term of `(x^a d^b)(x^c d^e)`, using
/// `d^b x^c = sum_v prod_i C(b_i, v_i) c_i!/(c_i - v_i)! x^(c-v) d^(b-v)`.
pub(crate) fn mul_monomials(n: usize, k1: &MultiIndex, k2: &MultiIndex, mut emit: impl FnMut(MultiIndex, BigInt)) {
    let (a, b) = k1.0.split_at(n);
    let (c, e) = k2.0.split_at(n);
    // per-variable choices of v_i
    let mut v = vec![0u32; n];
    loop {
        let mut factor = BigInt::one();
        for i in 0..n {
            factor *= binomial(b[i], v[i]) * falling(c[i], v[i]);
        }
        if !factor.is_zero() {
            let mut key = Vec::with_capacity(2 * n);
            key.extend((0..n).map(|i| a[i] + c[i] - v[i]));
            key.extend((0..n).map(|i| b[i] + e[i] - v[i]));
            emit(MultiIndex(key), factor);
        }
        // odometer over v_i in 0..=min(b_i, c_i)
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if v[i] < b[i].min(c[i]) {
                v[i] += 1;
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// `coeff * x_1^{e_1} ... x_n^{e_n}` with rational exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPower {
    pub coeff: Scalar,
    pub exponents: Vec<Scalar>,
}

impl TwistedPower {
    pub fn new(coeff: Scalar, exponents: Vec<Scalar>) -> Self {
        TwistedPower { coeff, exponents }
    }
}

impl fmt::Display for TwistedPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| {
                if e.is_one() {
                    format!("x{}", i + 1)
                } else if crate::scalar::is_integer(e) && *e > Scalar::zero() {
                    format!("x{}^{}", i + 1, crate::scalar::format_scalar(e))
                } else {
                    format!("x{}^({})", i + 1, crate::scalar::format_scalar(e))
                }
            })
            .collect();
        f.write_str(&join_terms([(self.coeff.clone(), mono.join("*"))]))
    }
}
