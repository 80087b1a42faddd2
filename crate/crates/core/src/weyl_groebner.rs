//! Left ideals of the Weyl algebra: Groebner bases, the graded ideal
//! `gr I`, and characteristic-variety verdicts.

use crate::engine::{Algebra, Engine, Terms};
use crate::groebner::{CIdeal, InvolutivityReport};
use crate::monomial::MonomialOrder;
use crate::poly::Ring;
use crate::weyl::WeylOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeylGbError {
    #[error("order `{0}` does not refine the derivation-order filtration")]
    OrderNotFiltered(&'static str),
    #[error("generator has dimension {found}, ideal has {expected}")]
    Dimension { expected: usize, found: usize },
}

/// Left ideal `sum D P_i` of the Weyl algebra in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WIdeal {
    n: usize,
    generators: Vec<WeylOp>,
    basis: Option<(MonomialOrder, Vec<WeylOp>)>,
}

/// Output of [`WIdeal::characteristic_report`].
#[derive(Clone, Debug)]
pub struct CharReport {
    /// `gr I` in `Q[z, xi]`, carrying its reduced degrevlex basis.
    pub graded: CIdeal,
    /// Krull dimension of `Q[z, xi] / gr I`; `None` for the unit ideal.
    pub dimension: Option<usize>,
    pub bernstein_ok: bool,
    pub holonomic: bool,
    pub involutivity: InvolutivityReport,
}

impl CharReport {
    pub fn involutive(&self) -> bool {
        self.involutivity.passed()
    }

    pub fn is_zero_module(&self) -> bool {
        self.dimension.is_none()
    }
}

fn to_terms(p: &WeylOp, e: &Engine) -> Terms {
    e.sort(p.terms().map(|(m, c)| (m.clone(), c.clone())).collect())
}

fn from_terms(n: usize, t: Terms) -> WeylOp {
    let mut w = WeylOp::zero(n);
    for (k, c) in t {
        w.add_term(k, c);
    }
    w
}

impl WIdeal {
    pub fn new(n: usize, generators: Vec<WeylOp>) -> Result<Self, WeylGbError> {
        if let Some(g) = generators.iter().find(|g| g.dim() != n) {
            return Err(WeylGbError::Dimension { expected: n, found: g.dim() });
        }
        Ok(WIdeal { n, generators, basis: None })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[WeylOp] {
        &self.generators
    }

    /// Cached basis, if computed.
    pub fn basis(&self) -> Option<&[WeylOp]> {
        self.basis.as_ref().map(|(_, b)| b.as_slice())
    }

    /// Left Groebner basis under the order-filtration order (weight 0 on x,
    /// 1 on d, ties by degrevlex).
    pub fn weyl_groebner(&self) -> WIdeal {
        self.weyl_groebner_with(&MonomialOrder::order_filtration(self.n))
    }

    /// Left Groebner basis under an arbitrary term order on the `(x, d)`
    /// exponents. Only filtration orders support [`WIdeal::gr_ideal`].
    pub fn weyl_groebner_with(&self, order: &MonomialOrder) -> WIdeal {
        if self.basis.as_ref().is_some_and(|(o, _)| o == order) {
            return self.clone();
        }
        let e = Engine { order, algebra: Algebra::Weyl { n: self.n } };
        let gens: Vec<Terms> =
            self.generators.iter().filter(|g| !g.is_zero()).map(|g| to_terms(g, &e)).collect();
        let basis = e.groebner(&gens).into_iter().map(|t| from_terms(self.n, t)).collect();
        WIdeal { n: self.n, generators: self.generators.clone(), basis: Some((order.clone(), basis)) }
    }

    fn filtered(&self) -> (MonomialOrder, Vec<WeylOp>) {
        let order = MonomialOrder::order_filtration(self.n);
        match &self.basis {
            Some((o, b)) if *o == order => (order, b.clone()),
            _ => {
                let w = self.weyl_groebner_with(&order);
                w.basis.expect("computed")
            }
        }
    }

    /// True when every S-pair of the cached basis left-reduces to zero.
    pub fn certify(&self) -> bool {
        let Some((order, basis)) = &self.basis else { return false };
        let e = Engine { order, algebra: Algebra::Weyl { n: self.n } };
        let terms: Vec<Terms> = basis.iter().map(|g| to_terms(g, &e)).collect();
        e.certify(&terms)
    }

    /// Left normal form of `p`.
    pub fn normal_form(&self, p: &WeylOp) -> WeylOp {
        let (order, basis) = self.filtered();
        let e = Engine { order: &order, algebra: Algebra::Weyl { n: self.n } };
        let terms: Vec<Terms> = basis.iter().map(|g| to_terms(g, &e)).collect();
        from_terms(self.n, e.reduce(&to_terms(p, &e), &terms))
    }

    pub fn contains(&self, p: &WeylOp) -> bool {
        self.normal_form(p).is_zero()
    }

    /// `gr I`, generated by the principal symbols of the filtered Groebner
    /// basis.
    pub fn gr_ideal(&self) -> Result<CIdeal, WeylGbError> {
        if let Some((o, _)) = &self.basis {
            if !o.is_order_filtration(self.n) {
                return Err(WeylGbError::OrderNotFiltered(o.name()));
            }
        }
        let (_, basis) = self.filtered();
        let symbols = basis.iter().map(WeylOp::principal_symbol).collect();
        Ok(CIdeal::new(Ring::symplectic(self.n), symbols).groebner(&MonomialOrder::DegRevLex))
    }

    /// Ideal generated by the principal symbols of the original generators;
    /// contained in `gr I`, sometimes strictly.
    pub fn symbol_ideal(&self) -> CIdeal {
        let symbols = self.generators.iter().map(WeylOp::principal_symbol).collect();
        CIdeal::new(Ring::symplectic(self.n), symbols).groebner(&MonomialOrder::DegRevLex)
    }

    pub fn characteristic_report(&self) -> CharReport {
        let graded = self.gr_ideal().expect("filtration order");
        let dimension = graded.krull_dimension();
        let involutivity = graded.involutivity_certificate().expect("symplectic ring");
        let (bernstein_ok, holonomic) = match dimension {
            None => (true, true),
            Some(d) => (d >= self.n, d == self.n),
        };
        CharReport { graded, dimension, bernstein_ok, holonomic, involutivity }
    }
}
