//! Ideals of `Q[v]`: reduced Groebner bases, membership, saturation, Krull
//! dimension, and the Poisson-bracket involutivity certificate for ideals
//! of the symplectic ring `Q[z, xi]`.

use num_traits::One;

use crate::engine::{Algebra, Engine, Terms};
use crate::monomial::{MonomialOrder, MultiIndex};
use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;

/// A reduced Groebner basis together with the order it was computed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    /// Monic, sorted by increasing leading monomial. `[1]` for the unit
    /// ideal, empty for the zero ideal.
    pub polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<MultiIndex> {
        self.polys.iter().map(|p| p.leading(&self.order).expect("nonzero").0.clone()).collect()
    }

    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.total_degree() == Some(0))
    }
}

/// Ideal of a commutative polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIdeal {
    ring: Ring,
    generators: Vec<Poly>,
    basis: Option<GroebnerBasis>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ring has no symplectic pairing")]
pub struct NotSymplectic;

fn to_terms(p: &Poly, e: &Engine) -> Terms {
    e.sort(p.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
}

fn from_terms(nvars: usize, t: Terms) -> Poly {
    Poly::from_terms(nvars, t)
}

/// Reduced Groebner basis of the given generators.
pub fn groebner_basis(nvars: usize, gens: &[Poly], order: &MonomialOrder) -> GroebnerBasis {
    let e = Engine { order, algebra: Algebra::Commutative };
    let terms: Vec<Terms> = gens.iter().filter(|g| !g.is_zero()).map(|g| to_terms(g, &e)).collect();
    let polys = e.groebner(&terms).into_iter().map(|t| from_terms(nvars, t)).collect();
    GroebnerBasis { order: order.clone(), polys }
}

/// Normal form of `f` modulo a Groebner basis.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Poly {
    let e = Engine { order: &gb.order, algebra: Algebra::Commutative };
    let basis: Vec<Terms> = gb.polys.iter().map(|g| to_terms(g, &e)).collect();
    from_terms(f.nvars(), e.reduce(&to_terms(f, &e), &basis))
}

/// Checks that every S-polynomial of the basis reduces to zero.
pub fn certify_basis(gb: &GroebnerBasis) -> bool {
    let e = Engine { order: &gb.order, algebra: Algebra::Commutative };
    let basis: Vec<Terms> = gb.polys.iter().map(|g| to_terms(g, &e)).collect();
    e.certify(&basis)
}

/// `{f, g} = sum_i (df/dxi_i dg/dz_i - dg/dxi_i df/dz_i)` in `Q[z, xi]`.
pub fn poisson_bracket(ring: &Ring, f: &Poly, g: &Poly) -> Result<Poly, NotSymplectic> {
    let n = ring.symplectic_dim().ok_or(NotSymplectic)?;
    let mut out = Poly::zero(2 * n);
    for i in 0..n {
        let a = &f.derivative(n + i) * &g.derivative(i);
        let b = &g.derivative(n + i) * &f.derivative(i);
        out = &out + &(&a - &b);
    }
    Ok(out)
}

/// One checked pair of the involutivity certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketCheck {
    pub left: usize,
    pub right: usize,
    pub bracket: Poly,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutivityReport {
    pub checks: Vec<BracketCheck>,
}

impl InvolutivityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.member)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.member).count()
    }
}

impl CIdeal {
    pub fn new(ring: Ring, generators: Vec<Poly>) -> Self {
        for g in &generators {
            assert_eq!(g.nvars(), ring.nvars(), "generator lives in a different ring");
        }
        CIdeal { ring, generators, basis: None }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Cached basis, when one has been computed.
    pub fn basis(&self) -> Option<&GroebnerBasis> {
        self.basis.as_ref()
    }

    /// The same ideal carrying its reduced basis under `order`.
    pub fn groebner(&self, order: &MonomialOrder) -> CIdeal {
        if self.basis.as_ref().is_some_and(|b| &b.order == order) {
            return self.clone();
        }
        let gb = groebner_basis(self.ring.nvars(), &self.generators, order);
        CIdeal { ring: self.ring.clone(), generators: self.generators.clone(), basis: Some(gb) }
    }

    /// Reduced basis under `order`, reusing the cache when it matches.
    pub fn basis_for(&self, order: &MonomialOrder) -> GroebnerBasis {
        match &self.basis {
            Some(b) if &b.order == order => b.clone(),
            _ => groebner_basis(self.ring.nvars(), &self.generators, order),
        }
    }

    fn default_basis(&self) -> GroebnerBasis {
        match &self.basis {
            Some(b) => b.clone(),
            None => self.basis_for(&MonomialOrder::DegRevLex),
        }
    }

    pub fn normal_form(&self, f: &Poly, order: &MonomialOrder) -> Poly {
        normal_form(f, &self.basis_for(order))
    }

    pub fn membership(&self, f: &Poly, order: &MonomialOrder) -> bool {
        self.normal_form(f, order).is_zero()
    }

    /// Membership under the cached order (degrevlex when nothing is cached).
    pub fn contains(&self, f: &Poly) -> bool {
        normal_form(f, &self.default_basis()).is_zero()
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &CIdeal) -> bool {
        let gb = self.default_basis();
        other.generators.iter().all(|g| normal_form(g, &gb).is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.default_basis().is_unit()
    }

    /// Krull dimension of the quotient ring: the largest set of variables
    /// on which no leading monomial of the basis is supported. `None` for the
    /// unit ideal (empty variety).
    ///
    /// Exhaustive over variable subsets, so cost grows as `2^nvars`.
    pub fn krull_dimension(&self) -> Option<usize> {
        let gb = self.default_basis();
        if gb.is_unit() {
            return None;
        }
        let masks: Vec<u64> = gb.leading_monomials().iter().map(MultiIndex::support_mask).collect();
        Some(max_independent_set(self.ring.nvars(), &masks))
    }

    /// `(self : f^inf)`, by eliminating `t` from `self + (1 - t f)`.
    pub fn saturate(&self, f: &Poly) -> CIdeal {
        let n = self.ring.nvars();
        let ext = n + 1;
        let t = Poly::var(ext, 0);
        let mut gens: Vec<Poly> = self.generators.iter().map(|g| g.shift_vars(1)).collect();
        gens.push(&Poly::one(ext) - &(&t * &f.shift_vars(1)));
        let gb = groebner_basis(ext, &gens, &MonomialOrder::Block { first: 1 });
        let contracted: Vec<Poly> = gb.polys.iter().filter_map(|p| p.drop_leading_vars(1)).collect();
        CIdeal::new(self.ring.clone(), contracted).groebner(&MonomialOrder::DegRevLex)
    }

    /// `self ∩ other`, by eliminating `t` from `t self + (1 - t) other`.
    pub fn intersect(&self, other: &CIdeal) -> CIdeal {
        let n = self.ring.nvars();
        let ext = n + 1;
        let t = Poly::var(ext, 0);
        let one_minus_t = &Poly::one(ext) - &t;
        let mut gens: Vec<Poly> = self.generators.iter().map(|g| &t * &g.shift_vars(1)).collect();
        gens.extend(other.generators.iter().map(|g| &one_minus_t * &g.shift_vars(1)));
        let gb = groebner_basis(ext, &gens, &MonomialOrder::Block { first: 1 });
        let contracted: Vec<Poly> = gb.polys.iter().filter_map(|p| p.drop_leading_vars(1)).collect();
        CIdeal::new(self.ring.clone(), contracted).groebner(&MonomialOrder::DegRevLex)
    }

    /// Sum of ideals.
    pub fn sum(&self, other: &CIdeal) -> CIdeal {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        CIdeal::new(self.ring.clone(), gens)
    }

    /// Checks `{g_a, g_b} ∈ self` for every pair `a <= b` of the reduced
    /// basis.
    pub fn involutivity_certificate(&self) -> Result<InvolutivityReport, NotSymplectic> {
        self.ring.symplectic_dim().ok_or(NotSymplectic)?;
        let gb = self.default_basis();
        let mut checks = Vec::new();
        for a in 0..gb.polys.len() {
            for b in a..gb.polys.len() {
                let bracket = poisson_bracket(&self.ring, &gb.polys[a], &gb.polys[b])?;
                let member = normal_form(&bracket, &gb).is_zero();
                checks.push(BracketCheck { left: a, right: b, bracket, member });
            }
        }
        Ok(InvolutivityReport { checks })
    }

    /// Generators rendered with the ring's variable names.
    pub fn display_generators(&self) -> Vec<String> {
        self.generators.iter().map(|g| self.ring.display(g).to_string()).collect()
    }

    /// Reduced basis rendered with the ring's variable names.
    pub fn display_basis(&self) -> Vec<String> {
        self.default_basis().polys.iter().map(|g| self.ring.display(g).to_string()).collect()
    }
}

/// Largest subset of `0..nvars` containing no mask as a subset.
pub(crate) fn max_independent_set(nvars: usize, masks: &[u64]) -> usize {
    assert!(nvars < 64, "too many variables for subset enumeration");
    let full: u64 = if nvars == 0 { 0 } else { (1u64 << nvars) - 1 };
    let independent = |s: u64| masks.iter().all(|&m| m & !s != 0);
    let mut best = 0;
    // walk subsets of full; prune by popcount
    let mut s = full;
    loop {
        let size = s.count_ones() as usize;
        if size > best && independent(s) {
            best = size;
            if best == nvars {
                break;
            }
        }
        if s == 0 {
            break;
        }
        s = (s - 1) & full;
    }
    best
}

/// Binomial `x^u - x^v` in `nvars` variables.
pub fn binomial(nvars: usize, u: &[u32], v: &[u32]) -> Poly {
    let mut p = Poly::monomial(nvars, MultiIndex(u.to_vec()), Scalar::one());
    p.add_term(MultiIndex(v.to_vec()), -Scalar::one());
    p
}

/// Product of all variables in `nvars` variables.
pub fn variable_product(nvars: usize) -> Poly {
    Poly::monomial(nvars, MultiIndex(vec![1; nvars]), Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::int;

    fn ideal(ring: &Ring, gens: &[&str]) -> CIdeal {
        CIdeal::new(ring.clone(), gens.iter().map(|g| parse_poly(g, ring).unwrap()).collect())
    }

    #[test]
    fn principal_and_monomial_bases() {
        let r = Ring::new(vec!["x".into()]);
        let i = ideal(&r, &["x"]).groebner(&MonomialOrder::DegRevLex);
        assert_eq!(i.display_basis(), vec!["x"]);
        let s = Ring::symplectic(1);
        let j = ideal(&s, &["2*z1*xi1"]).groebner(&MonomialOrder::DegRevLex);
        assert_eq!(j.display_basis(), vec!["z1*xi1"]);
    }

    #[test]
    fn membership_basics() {
        let r = Ring::new(vec!["x".into()]);
        let i = ideal(&r, &["x"]);
        let o = MonomialOrder::DegRevLex;
        assert!(i.membership(&parse_poly("x^2", &r).unwrap(), &o));
        assert!(!i.membership(&Poly::one(1), &o));
    }

    #[test]
    fn self_certifying_box_basis() {
        let r = Ring::momenta(4);
        let i = ideal(&r, &["xi1*xi4 - xi2*xi3", "xi2^2 - xi1*xi3"]);
        for o in [MonomialOrder::DegRevLex, MonomialOrder::Lex] {
            let gb = i.basis_for(&o);
            assert!(certify_basis(&gb));
            for g in i.generators() {
                assert!(normal_form(g, &gb).is_zero());
            }
        }
    }

    #[test]
    fn krull_dimensions() {
        let s = Ring::symplectic(1);
        assert_eq!(ideal(&s, &["z1*xi1"]).krull_dimension(), Some(1));
        let r4 = Ring::momenta(4);
        assert_eq!(CIdeal::new(r4.clone(), vec![]).krull_dimension(), Some(4));
        assert_eq!(ideal(&r4, &["xi1", "xi2", "xi3", "xi4"]).krull_dimension(), Some(0));
        assert_eq!(ideal(&r4, &["xi1 + 1", "xi1"]).krull_dimension(), None);
    }

    #[test]
    fn saturation_examples() {
        let s = Ring::symplectic(1);
        let i = ideal(&s, &["z1*xi1"]);
        let sat = i.saturate(&parse_poly("z1", &s).unwrap());
        assert_eq!(sat.display_basis(), vec!["xi1"]);
        let same = i.saturate(&Poly::one(2));
        assert_eq!(same.display_basis(), i.display_basis());
    }

    #[test]
    fn poisson_examples() {
        let s = Ring::symplectic(1);
        let p = |t: &str| parse_poly(t, &s).unwrap();
        assert_eq!(poisson_bracket(&s, &p("xi1"), &p("z1")).unwrap(), Poly::one(2));
        assert!(poisson_bracket(&s, &p("z1"), &p("z1")).unwrap().is_zero());
        assert_eq!(poisson_bracket(&s, &p("z1*xi1"), &p("z1")).unwrap(), p("z1"));
        let plain = Ring::new(vec!["a".into()]);
        assert_eq!(poisson_bracket(&plain, &Poly::one(1), &Poly::one(1)), Err(NotSymplectic));
    }

    #[test]
    fn involutive_cross() {
        let s = Ring::symplectic(1);
        let rep = ideal(&s, &["z1*xi1"]).involutivity_certificate().unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checks.len(), 1);
        // (z1, xi1) is the origin: {xi1, z1} = 1 is not in a proper ideal... but
        // the origin of T*C is not involutive
        let bad = ideal(&s, &["z1", "xi1"]).involutivity_certificate().unwrap();
        assert!(!bad.passed());
    }

    #[test]
    fn intersection_of_axes() {
        let r = Ring::new(vec!["x".into(), "y".into()]);
        let i = ideal(&r, &["x"]).intersect(&ideal(&r, &["y"]));
        assert_eq!(i.display_basis(), vec!["x*y"]);
    }

    #[test]
    fn independent_sets() {
        assert_eq!(max_independent_set(3, &[0b011]), 2);
        assert_eq!(max_independent_set(2, &[0b01, 0b10]), 0);
        assert_eq!(max_independent_set(0, &[]), 0);
        let _ = int(0);
    }
}
