//! Sparse commutative polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::monomial::{MonomialOrder, MultiIndex};
use crate::scalar::{format_scalar, Scalar};

/// Variable names of a polynomial ring, optionally paired symplectically as
/// `(z_1..z_n, xi_1..xi_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
    symplectic: Option<usize>,
}

impl Ring {
    pub fn new(names: Vec<String>) -> Self {
        Ring { names, symplectic: None }
    }

    /// The ring `Q[z_1..z_n, xi_1..xi_n]` (the graded Weyl algebra).
    pub fn symplectic(n: usize) -> Self {
        let mut names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
        names.extend((1..=n).map(|i| format!("xi{i}")));
        Ring { names, symplectic: Some(n) }
    }

    /// `Q[xi_1..xi_n]`.
    pub fn momenta(n: usize) -> Self {
        Ring::new((1..=n).map(|i| format!("xi{i}")).collect())
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Half-dimension `n` when the ring is symplectic.
    pub fn symplectic_dim(&self) -> Option<usize> {
        self.symplectic
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The same ring with one more variable `name` in front.
    pub fn with_leading(&self, name: &str) -> Ring {
        let mut names = vec![name.to_string()];
        names.extend(self.names.iter().cloned());
        Ring::new(names)
    }

    pub fn display<'a>(&'a self, p: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: p }
    }
}

/// Polynomial in a fixed number of variables. No stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(nvars, MultiIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, MultiIndex::unit(nvars, i), Scalar::one())
    }

    pub fn monomial(nvars: usize, m: MultiIndex, c: Scalar) -> Self {
        assert_eq!(m.len(), nvars, "monomial length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (MultiIndex, Scalar)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading(&self, order: &MonomialOrder) -> Option<(&MultiIndex, &Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Multiplies by `c * x^m`.
    pub fn mul_term(&self, m: &MultiIndex, c: &Scalar) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, x)| (k + m, x * c)).collect(),
        }
    }

    pub fn monic(&self, order: &MonomialOrder) -> Poly {
        match self.leading(order) {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut k = m.clone();
                k.0[i] -= 1;
                out.add_term(k, c * Scalar::from_integer(e.into()));
            }
        }
        out
    }

    /// Variables occurring with nonzero exponent.
    pub fn support_mask(&self) -> u64 {
        self.terms.keys().fold(0, |acc, m| acc | m.support_mask())
    }

    /// Embeds into a ring with `extra` new leading variables.
    pub fn shift_vars(&self, extra: usize) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut v = vec![0; extra];
            v.extend_from_slice(m.as_slice());
            (MultiIndex(v), c.clone())
        });
        Poly::from_terms(self.nvars + extra, terms)
    }

    /// Drops the first `count` variables, which must not occur.
    pub fn drop_leading_vars(&self, count: usize) -> Option<Poly> {
        let mut out = Poly::zero(self.nvars - count);
        for (m, c) in &self.terms {
            if m.0[..count].iter().any(|&e| e > 0) {
                return None;
            }
            out.add_term(MultiIndex(m.0[count..].to_vec()), c.clone());
        }
        Some(out)
    }

    /// Reorders or embeds variables: variable `i` goes to `map[i]` in a ring
    /// with `nvars` variables.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut v = vec![0; nvars];
            for (i, e) in m.0.iter().enumerate() {
                v[map[i]] += e;
            }
            (MultiIndex(v), c.clone())
        });
        Poly::from_terms(nvars, terms)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Scalar::one())
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

/// Joins signed terms as `a + b - c`. Each term is `(coeff, monomial text)`
/// with an empty monomial text for constants.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = (Scalar, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&format_scalar(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_scalar(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn monomial_text(names: &[String], m: &[u32]) -> String {
    m.iter()
        .enumerate()
        .filter(|(_, e)| **e > 0)
        .map(|(i, e)| if *e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Renders a polynomial with the ring's names, terms in descending deglex.
pub struct PolyDisplay<'a> {
    ring: &'a Ring,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.poly.terms().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| b.0.cmp(a.0)));
        let s = join_terms(
            terms.into_iter().map(|(m, c)| (c.clone(), monomial_text(self.ring.names(), m.as_slice()))),
        );
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    #[test]
    fn arithmetic_and_display() {
        let r = Ring::symplectic(1);
        let z = Poly::var(2, 0);
        let xi = Poly::var(2, 1);
        let p = &(&z * &xi) - &Poly::constant(2, int(3));
        assert_eq!(r.display(&p).to_string(), "z1*xi1 - 3");
        assert_eq!(r.display(&p.derivative(1)).to_string(), "z1");
        assert_eq!(r.display(&(&p - &p)).to_string(), "0");
        assert_eq!(r.display(&xi.pow(3).scale(&int(-2))).to_string(), "-2*xi1^3");
    }

    #[test]
    fn shifting_variables() {
        let p = &Poly::var(2, 0) + &Poly::var(2, 1);
        let q = p.shift_vars(1);
        assert_eq!(q.nvars(), 3);
        assert_eq!(q.drop_leading_vars(1).unwrap(), p);
        assert!(Poly::var(3, 0).drop_leading_vars(1).is_none());
    }
}
