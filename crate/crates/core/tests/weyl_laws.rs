use std::collections::BTreeMap;

use dmod_core::scalar::{int, ratio};
use dmod_core::{Poly, Scalar, TwistedPower, WeylOp};
use num_traits::Zero;
use proptest::prelude::*;

const N: usize = 2;

fn op_strategy(n: usize) -> impl Strategy<Value = WeylOp> {
    let term = (
        prop::collection::vec(0u32..=2, n),
        prop::collection::vec(0u32..=2, n),
        -4i64..=4,
        1i64..=3,
    );
    prop::collection::vec(term, 0..=4).prop_map(move |ts| {
        ts.into_iter().fold(WeylOp::zero(n), |acc, (a, b, p, q)| acc.add(&WeylOp::term(n, &a, &b, ratio(p, q))).unwrap())
    })
}

type Dense = BTreeMap<Vec<u32>, Scalar>;

/// Applies `x^a d^b` terms to a polynomial by differentiating and multiplying.
fn act(p: &WeylOp, f: &Dense) -> Dense {
    let n = p.dim();
    let mut out = Dense::new();
    for (k, c) in p.terms() {
        let (a, b) = k.0.split_at(n);
        for (e, fc) in f {
            if (0..n).any(|i| e[i] < b[i]) {
                continue;
            }
            let mut coeff = c * fc;
            let mut e2 = e.clone();
            for i in 0..n {
                for s in 0..b[i] {
                    coeff *= int((e[i] - s) as i64);
                }
                e2[i] = e[i] - b[i] + a[i];
            }
            *out.entry(e2).or_insert_with(Scalar::zero) += coeff;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn test_poly() -> Dense {
    let mut f = Dense::new();
    for (e, c) in [(vec![3, 1], 2), (vec![0, 4], -1), (vec![2, 2], 5), (vec![1, 0], 7), (vec![0, 0], 1)] {
        f.insert(e, int(c));
    }
    f
}

#[test]
fn heisenberg_relations() {
    for n in 1..=4 {
        for i in 0..n {
            for j in 0..n {
                let (xi, xj, di, dj) = (WeylOp::x(n, i), WeylOp::x(n, j), WeylOp::d(n, i), WeylOp::d(n, j));
                let delta = WeylOp::constant(n, int((i == j) as i64));
                assert_eq!(di.commutator(&xj).unwrap(), delta);
                assert!(xi.commutator(&xj).unwrap().is_zero());
                assert!(di.commutator(&dj).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn normal_ordering_example() {
    let d = WeylOp::d(1, 0);
    let x = WeylOp::x(1, 0);
    // d^2 x^2 = x^2 d^2 + 4 x d + 2
    assert_eq!(d.pow(2).multiply(&x.pow(2)).unwrap().to_string(), "x1^2*d1^2 + 4*x1*d1 + 2");
}

fn symbol_of(p: &WeylOp) -> Option<Poly> {
    p.order().map(|m| p.symbol(m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn associative(p in op_strategy(N), q in op_strategy(N), r in op_strategy(N)) {
        let left = p.multiply(&q).unwrap().multiply(&r).unwrap();
        let right = p.multiply(&q.multiply(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_acts_as_composition(p in op_strategy(N), q in op_strategy(N)) {
        let f = test_poly();
        prop_assert_eq!(act(&p.multiply(&q).unwrap(), &f), act(&p, &act(&q, &f)));
    }

    #[test]
    fn symbol_multiplicative(p in op_strategy(N), q in op_strategy(N)) {
        let pq = p.multiply(&q).unwrap();
        match (symbol_of(&p), symbol_of(&q)) {
            (Some(sp), Some(sq)) => {
                let m = p.order().unwrap() + q.order().unwrap();
                prop_assert_eq!(pq.order(), Some(m));
                prop_assert_eq!(pq.symbol(m), &sp * &sq);
            }
            _ => prop_assert!(pq.is_zero()),
        }
    }

    #[test]
    fn commutator_drops_order(p in op_strategy(N), q in op_strategy(N)) {
        let c = p.commutator(&q).unwrap();
        if let (Some(m), Some(l), Some(k)) = (p.order(), q.order(), c.order()) {
            prop_assert!(m + l >= 1 && k < m + l);
        }
    }

    #[test]
    fn adjoint_anti_involution(p in op_strategy(N), q in op_strategy(N)) {
        prop_assert_eq!(p.formal_adjoint().formal_adjoint(), p.clone());
        let lhs = p.multiply(&q).unwrap().formal_adjoint();
        let rhs = q.formal_adjoint().multiply(&p.formal_adjoint()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fourier_homomorphism(p in op_strategy(N), q in op_strategy(N)) {
        let lhs = p.multiply(&q).unwrap().fourier_transform();
        let rhs = p.fourier_transform().multiply(&q.fourier_transform()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(p.fourier_transform().fourier_transform(), p.antipode());
        prop_assert_eq!(p.antipode().antipode(), p);
    }

    #[test]
    fn twisted_action_matches_composition(p in op_strategy(N), q in op_strategy(N), e0 in -3i64..=3, e1 in 1i64..=4) {
        let t = TwistedPower::new(int(1), vec![ratio(e0, 2), ratio(e1, 3)]);
        let direct = p.multiply(&q).unwrap().apply_twisted(&t);
        let mut acc: BTreeMap<Vec<Scalar>, Scalar> = BTreeMap::new();
        for s in q.apply_twisted(&t) {
            for u in p.apply_twisted(&s) {
                *acc.entry(u.exponents).or_insert_with(Scalar::zero) += u.coeff;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        let composed: Vec<TwistedPower> = acc.into_iter().map(|(e, c)| TwistedPower::new(c, e)).collect();
        prop_assert_eq!(direct, composed);
    }
}
