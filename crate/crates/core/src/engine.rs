//! Buchberger engine shared by the commutative ring `Q[v]` and the Weyl
//! algebra (left ideals). Polynomials are term vectors sorted by the active
//! order, largest first.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::monomial::{MonomialOrder, MultiIndex};
use crate::scalar::Scalar;
use crate::weyl::mul_monomials;

pub(crate) type Terms = Vec<(MultiIndex, Scalar)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Algebra {
    Commutative,
    /// Weyl algebra in `n` variables; keys are `(x-exponents, d-exponents)`.
    Weyl { n: usize },
}

pub(crate) struct Engine<'a> {
    pub order: &'a MonomialOrder,
    pub algebra: Algebra,
}

impl Engine<'_> {
    pub fn sort(&self, mut t: Terms) -> Terms {
        t.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        t
    }

    fn collect(&self, map: BTreeMap<MultiIndex, Scalar>) -> Terms {
        self.sort(map.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// `c * m * g` (left multiplication in the Weyl case).
    pub fn mul_term(&self, m: &MultiIndex, c: &Scalar, g: &Terms) -> Terms {
        match self.algebra {
            Algebra::Commutative => g.iter().map(|(k, x)| (m + k, x * c)).collect(),
            Algebra::Weyl { n } => {
                let mut acc: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
                for (k, x) in g {
                    let base = x * c;
                    mul_monomials(n, m, k, |key, f| {
                        *acc.entry(key).or_insert_with(Scalar::zero) += &base * Scalar::from_integer(f);
                    });
                }
                self.collect(acc)
            }
        }
    }

    /// `a - b`, both sorted.
    pub fn sub(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), -b[j].1.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].1 - &b[j].1;
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), -c.clone())));
        out
    }

    pub fn monic(&self, mut t: Terms) -> Terms {
        if let Some((_, lc)) = t.first() {
            let inv = lc.recip();
            if !inv.is_one() {
                for (_, c) in t.iter_mut() {
                    *c *= &inv;
                }
            }
        }
        t
    }

    /// Full (left) reduction of `f` by `basis`.
    pub fn reduce(&self, f: &Terms, basis: &[Terms]) -> Terms {
        let mut rem: Terms = Vec::new();
        let mut f = f.clone();
        while let Some((m, c)) = f.first().cloned() {
            let divisor = basis.iter().find(|g| g[0].0.divides(&m));
            match divisor {
                Some(g) => {
                    let q = m.checked_sub(&g[0].0).expect("divides");
                    let coeff = &c / &g[0].1;
                    let prod = self.mul_term(&q, &coeff, g);
                    f = self.sub(&f, &prod);
                }
                None => {
                    rem.push((m, c));
                    f.remove(0);
                }
            }
        }
        rem
    }

    pub fn spoly(&self, f: &Terms, g: &Terms) -> Terms {
        let l = f[0].0.lcm(&g[0].0);
        let a = self.mul_term(&l.checked_sub(&f[0].0).unwrap(), &f[0].1.recip(), f);
        let b = self.mul_term(&l.checked_sub(&g[0].0).unwrap(), &g[0].1.recip(), g);
        self.sub(&a, &b)
    }

    fn pair_key(&self, basis: &[Terms], i: usize, j: usize) -> (u32, MultiIndex, usize, usize) {
        let l = basis[i][0].0.lcm(&basis[j][0].0);
        (l.degree(), l, i, j)
    }

    /// Buchberger with the normal selection strategy (smallest lcm degree,
    /// then smallest lcm, then pair index). Returns a reduced basis sorted by
    /// increasing leading monomial; empty for the zero ideal.
    pub fn groebner(&self, gens: &[Terms]) -> Vec<Terms> {
        let mut basis: Vec<Terms> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let add = |basis: &mut Vec<Terms>, pairs: &mut Vec<(usize, usize)>, p: Terms| {
            let k = basis.len();
            basis.push(p);
            pairs.extend((0..k).map(|i| (i, k)));
        };
        for g in gens {
            let r = self.reduce(g, &basis);
            if !r.is_empty() {
                add(&mut basis, &mut pairs, self.monic(r));
            }
        }
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    let ka = self.pair_key(&basis, pairs[a].0, pairs[a].1);
                    let kb = self.pair_key(&basis, pairs[b].0, pairs[b].1);
                    ka.0.cmp(&kb.0)
                        .then_with(|| self.order.cmp(&ka.1, &kb.1))
                        .then_with(|| (ka.2, ka.3).cmp(&(kb.2, kb.3)))
                })
                .expect("nonempty");
            let (i, j) = pairs.remove(best);
            if self.skip_pair(&basis, &pairs, i, j) {
                continue;
            }
            let s = self.spoly(&basis[i], &basis[j]);
            let r = self.reduce(&s, &basis);
            if !r.is_empty() {
                add(&mut basis, &mut pairs, self.monic(r));
            }
        }
        self.interreduce(basis)
    }

    fn skip_pair(&self, basis: &[Terms], pending: &[(usize, usize)], i: usize, j: usize) -> bool {
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        // product criterion is only valid when leading terms commute
        if self.algebra == Algebra::Commutative && li.coprime(lj) {
            return true;
        }
        let l = li.lcm(lj);
        let is_pending = |a: usize, b: usize| pending.contains(&(a.min(b), a.max(b)));
        (0..basis.len()).any(|k| {
            k != i && k != j && basis[k][0].0.divides(&l) && !is_pending(i, k) && !is_pending(j, k)
        })
    }

    /// Minimalizes, tail-reduces and sorts a Groebner basis.
    pub fn interreduce(&self, basis: Vec<Terms>) -> Vec<Terms> {
        let mut minimal: Vec<Terms> = Vec::new();
        for (idx, g) in basis.iter().enumerate() {
            let lm = &g[0].0;
            let redundant = basis.iter().enumerate().any(|(k, h)| {
                k != idx && h[0].0.divides(lm) && (h[0].0 != *lm || k < idx)
            });
            if !redundant {
                minimal.push(g.clone());
            }
        }
        let mut out: Vec<Terms> = Vec::with_capacity(minimal.len());
        for idx in 0..minimal.len() {
            let others: Vec<Terms> =
                minimal.iter().enumerate().filter(|(k, _)| *k != idx).map(|(_, g)| g.clone()).collect();
            let head = vec![minimal[idx][0].clone()];
            let tail: Terms = minimal[idx][1..].to_vec();
            let tail = self.reduce(&tail, &others);
            let mut full = self.sub(&head, &tail.iter().map(|(m, c)| (m.clone(), -c.clone())).collect());
            full = self.monic(full);
            out.push(full);
        }
        out.sort_by(|a, b| self.order.cmp(&a[0].0, &b[0].0));
        out
    }

    /// True when every S-polynomial of `basis` reduces to zero.
    pub fn certify(&self, basis: &[Terms]) -> bool {
        (0..basis.len()).all(|i| {
            (i + 1..basis.len()).all(|j| self.reduce(&self.spoly(&basis[i], &basis[j]), basis).is_empty())
        })
    }
}
