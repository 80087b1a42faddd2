use dmod_core::equivariant::{
    assemble, fields_from_action, homogeneity_report, stability_check, LinearAction, OrbitCertificate,
};
use dmod_core::gkz::{build_gkz, lattice_binomial, orbit_strata, GkzSystem};
use dmod_core::groebner::poisson_bracket;
use dmod_core::linalg::integer_kernel;
use dmod_core::parse::{parse_op, parse_poly};
use dmod_core::reduction::{fuchsian_l1, reduce, series_recurrence};
use dmod_core::scalar::{int, ratio};
use dmod_core::{CIdeal, IntMatrix, MultiIndex, Poly, Ring, Scalar, TwistedPower, WIdeal, WeylOp};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn gauss() -> IntMatrix {
    mat(&[&[1, 1, 1, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]])
}

fn cubic() -> IntMatrix {
    mat(&[&[1, 1, 1, 1], &[0, 1, 2, 3]])
}

fn gauss_lambda() -> Vec<Scalar> {
    vec![ratio(-7, 12), ratio(-1, 4), ratio(-1, 12)]
}

fn corpus() -> Vec<GkzSystem> {
    vec![
        build_gkz(gauss(), gauss_lambda()).unwrap(),
        build_gkz(cubic(), vec![ratio(1, 2), ratio(-1, 3)]).unwrap(),
        build_gkz(IntMatrix::identity(2), vec![int(1), ratio(2, 5)]).unwrap(),
    ]
}

#[test]
fn euler_fixture() {
    let p = parse_op("x1*d1 - 3/2", 1).unwrap();
    let rep = WIdeal::new(1, vec![p.clone()]).unwrap().characteristic_report();
    assert_eq!(rep.graded.display_basis(), vec!["z1*xi1"]);
    assert_eq!(rep.dimension, Some(1));
    assert!(rep.holonomic && rep.bernstein_ok && rep.involutive());
    assert!(p.apply_twisted(&TwistedPower::new(int(1), vec![ratio(3, 2)])).is_empty());
}

#[test]
fn second_order_ode() {
    let p = parse_op("(x1^2 - 1)*d1^2 + x1*d1 - 4", 1).unwrap();
    let rep = WIdeal::new(1, vec![p]).unwrap().characteristic_report();
    assert_eq!(rep.graded.display_basis(), vec!["z1^2*xi1^2 - xi1^2"]);
    assert_eq!(rep.dimension, Some(1));
    assert!(rep.holonomic && rep.involutive());
}

#[test]
fn symbol_ideal_strictly_smaller() {
    let i = WIdeal::new(2, vec![parse_op("d1", 2).unwrap(), parse_op("x1*d2", 2).unwrap()]).unwrap();
    let gr = i.weyl_groebner().gr_ideal().unwrap();
    let sym = i.symbol_ideal();
    let witness = parse_poly("xi2", &Ring::symplectic(2)).unwrap();
    assert!(gr.contains(&witness));
    assert!(!sym.contains(&witness));
    assert!(gr.contains_ideal(&sym));
}

#[test]
fn gauss_pipeline() {
    let sys = build_gkz(gauss(), vec![ratio(-5, 6), ratio(1, 4), ratio(5, 12)]).unwrap();
    assert_eq!(sys.data.lattice_vectors(), vec![vec![1, -1, -1, 1]]);
    assert_eq!(sys.boxes.len(), 1);
    assert_eq!(sys.boxes[0].op.to_string(), "d1*d4 - d2*d3");
    let v = sys.verdicts(false);
    assert_eq!(v.strata_count, 10);
    let expected: Vec<Vec<usize>> = vec![
        vec![],
        vec![0],
        vec![1],
        vec![2],
        vec![3],
        vec![0, 1],
        vec![0, 2],
        vec![1, 3],
        vec![2, 3],
        vec![0, 1, 2, 3],
    ];
    assert_eq!(v.strata.supports(), expected);
    assert_eq!(v.dim_bound, Some(4));
    assert!(v.strata_dims_ok && v.homogeneous && v.holonomic && v.regular_holonomic);
    assert!(v.strata.inside(&sys.bound_ideal()));
    assert!(sys.bound_ideal().involutivity_certificate().unwrap().passed());
}

#[test]
fn twisted_cubic_saturation() {
    let sys = build_gkz(cubic(), vec![int(1), int(0)]).unwrap();
    let toric = &sys.toric;
    let basis: Vec<String> = toric.display_basis();
    assert_eq!(basis.len(), 3);
    let target = lattice_binomial(&[1, -1, -1, 1]);
    assert!(toric.contains(&target));
    // before saturation the two quadrics do not contain it
    let ring = Ring::momenta(4);
    let raw = CIdeal::new(ring.clone(), vec![lattice_binomial(&[1, -2, 1, 0]), lattice_binomial(&[0, 1, -2, 1])]);
    assert!(!raw.contains(&target));
    // bounded oracle: every lattice binomial with |a_j| <= 4
    let chi = cubic();
    let mut oracle = Vec::new();
    for a0 in -4i64..=4 {
        for a1 in -4i64..=4 {
            for a2 in -4i64..=4 {
                for a3 in -4i64..=4 {
                    let a = [a0, a1, a2, a3];
                    let zero = chi.to_rows().iter().all(|r| {
                        r.iter().zip(&a).map(|(c, x)| c * num_bigint::BigInt::from(*x)).sum::<num_bigint::BigInt>().is_zero()
                    });
                    if zero && a.iter().any(|&x| x != 0) {
                        oracle.push(lattice_binomial(&a));
                    }
                }
            }
        }
    }
    assert!(oracle.iter().all(|b| toric.contains(b)));
    let oracle_ideal = CIdeal::new(ring, oracle);
    assert!(oracle_ideal.contains_ideal(toric));
    let v = sys.verdicts(false);
    assert_eq!(v.dim_bound, Some(4));
    assert!(v.holonomic && v.homogeneous);
}

#[test]
fn identity_chi() {
    let sys = build_gkz(IntMatrix::identity(2), vec![int(0), int(0)]).unwrap();
    assert!(sys.boxes.is_empty());
    let v = sys.verdicts(true);
    assert_eq!(v.strata_count, 4);
    assert_eq!(v.graded_equals_bound, Some(true));
    assert_eq!(sys.bound_ideal().display_basis(), vec!["z2*xi2", "z1*xi1"]);
}

#[test]
fn euler_box_commutators() {
    for sys in corpus() {
        for b in &sys.boxes {
            for (i, e) in sys.eulers.iter().enumerate() {
                let mu = sys.euler_box_eigenvalue(i, &b.lattice_vector);
                assert_eq!(e.commutator(&b.op).unwrap(), b.op.scale(&mu));
            }
        }
    }
}

#[test]
fn corpus_involutive_and_bernstein() {
    let mut ideals: Vec<CIdeal> = corpus().iter().map(GkzSystem::bound_ideal).collect();
    for ops in [vec!["x1*d1 - 3/2"], vec!["(x1^2 - 1)*d1^2 + x1*d1 - 4"], vec!["d1", "x1*d2"]] {
        let n = ops.iter().map(|s| dmod_core::parse::infer_dim(s)).max().unwrap();
        let gens = ops.iter().map(|s| parse_op(s, n).unwrap()).collect();
        ideals.push(WIdeal::new(n, gens).unwrap().characteristic_report().graded);
    }
    for ideal in &ideals {
        let n = ideal.ring().symplectic_dim().unwrap();
        assert!(ideal.involutivity_certificate().unwrap().passed());
        if let Some(d) = ideal.krull_dimension() {
            assert!(d >= n);
        }
    }
}

#[test]
fn gkz_equals_equivariant_assembly() {
    for sys in corpus() {
        let weights: Vec<Vec<Scalar>> =
            sys.data.chi.to_rows().iter().map(|r| r.iter().map(|x| Scalar::from_integer(x.clone())).collect()).collect();
        let fields = fields_from_action(&LinearAction::diagonal(&weights));
        let boxes: Vec<WeylOp> = sys.boxes.iter().map(|b| b.op.clone()).collect();
        assert!(stability_check(&fields, &boxes).unwrap().passed());
        let eq = assemble(fields, sys.data.lambda.clone(), boxes).unwrap();
        assert_eq!(eq.generators(), sys.generators());
        let strata = orbit_strata(&sys.data.chi).unwrap().strata.len();
        let rep = homogeneity_report(&eq, Some(OrbitCertificate::TorusStrata(strata)));
        assert!(rep.homogeneous && rep.regular_holonomic);
        let twice = eq.fourier_system().fourier_system();
        let anti: Vec<WeylOp> = eq.generators().iter().map(WeylOp::antipode).collect();
        assert_eq!(twice.generators(), anti);
    }
}

fn sl2() -> LinearAction {
    let m = |rows: [[i64; 3]; 3]| rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<Vec<_>>>();
    let e = m([[0, -2, 0], [0, 0, 1], [0, 0, 0]]);
    let h = m([[2, 0, 0], [0, 0, 0], [0, 0, -2]]);
    let f = m([[0, 0, 0], [-1, 0, 0], [0, 2, 0]]);
    LinearAction::new(vec!["e".into(), "h".into(), "f".into()], vec![e, h, f], None).unwrap()
}

#[test]
fn vector_fields_reverse_brackets() {
    let a = sl2();
    let fields = fields_from_action(&a);
    for s in 0..3 {
        for t in 0..3 {
            let lhs = fields[s].commutator(&fields[t]).unwrap();
            let mut rhs = WeylOp::zero(3);
            for (r, c) in a.structure[s][t].iter().enumerate() {
                rhs = rhs.sub(&fields[r].scale(c)).unwrap();
            }
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn casimir_stability() {
    let fields = fields_from_action(&sl2());
    let ef = parse_op("d1*d3", 3).unwrap();
    assert!(fields[1].commutator(&ef).unwrap().is_zero());
    let cas = parse_op("1/2*d2^2 + 2*d1*d3", 3).unwrap();
    assert!(stability_check(&fields, &[cas]).unwrap().passed());
}

#[test]
fn gauss_reduction() {
    let (a, b, c) = (ratio(1, 2), ratio(1, 3), ratio(5, 4));
    let lattice = integer_kernel(&gauss()).columns();
    let lattice: Vec<Vec<i64>> = lattice.iter().map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
    let r = reduce(&gauss(), &gauss_lambda(), &lattice).unwrap();
    assert_eq!(r.shift, vec![int(0), -a.clone(), -b.clone(), &c - int(1)]);
    assert!(r.euler_pullbacks().iter().all(|f| f.is_zero()));
    assert_eq!(r.operators[0].to_string(), "(th + 0)*(th + 1/4) - x*(th + 1/2)*(th + 1/3)");
    let f = fuchsian_l1(&r).unwrap();
    assert_eq!(f.p, 2);
    assert_eq!(f.upper, vec![a.clone(), b.clone()]);
    assert_eq!(f.lower, vec![c.clone()]);
    assert!(f.normalized && f.scale.is_one());
    let coeffs = series_recurrence(&r.operators[0].op).unwrap().coefficients(21).unwrap();
    let mut expected = Scalar::one();
    for (m, got) in coeffs.iter().enumerate() {
        assert_eq!(*got, expected, "m = {m}");
        let m = int(m as i64);
        expected = expected * (&a + &m) * (&b + &m) / ((&c + &m) * (&m + int(1)));
    }
}

#[test]
fn twisted_cubic_reduction() {
    let sys = build_gkz(cubic(), vec![ratio(1, 2), ratio(-1, 3)]).unwrap();
    let lattice: Vec<Vec<i64>> = sys.boxes.iter().map(|b| b.lattice_vector.clone()).collect();
    let r = reduce(&cubic(), &sys.data.lambda, &lattice).unwrap();
    assert_eq!(r.quotient_dim(), 2);
    assert_eq!(r.operators.len(), 3);
    for op in &r.operators {
        assert_eq!(op.lattice_vector.iter().sum::<i64>(), 0);
        assert_eq!(op.lhs.len(), op.rhs.len());
    }
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0u32..=2, 4), -3i64..=3);
    prop::collection::vec(term, 0..=4)
        .prop_map(|ts| Poly::from_terms(4, ts.into_iter().map(|(m, c)| (MultiIndex(m), int(c)))))
}

fn chi_strategy() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(0i64..=3, 4)
        .prop_filter("rank 2", |r| r.iter().any(|&x| x != r[0]))
        .prop_map(|r| IntMatrix::from_rows(&[vec![1, 1, 1, 1], r]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn poisson_identities(f in poly_strategy(), g in poly_strategy(), h in poly_strategy()) {
        let ring = Ring::symplectic(2);
        let br = |a: &Poly, b: &Poly| poisson_bracket(&ring, a, b).unwrap();
        prop_assert_eq!(br(&f, &g), -&br(&g, &f));
        let jacobi = &(&br(&f, &br(&g, &h)) + &br(&g, &br(&h, &f))) + &br(&h, &br(&f, &g));
        prop_assert!(jacobi.is_zero());
        prop_assert_eq!(br(&f, &(&g * &h)), &(&br(&f, &g) * &h) + &(&g * &br(&f, &h)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn torus_systems_are_stable(chi in chi_strategy()) {
        let sys = build_gkz(chi, vec![int(0), int(0)]).unwrap();
        let weights: Vec<Vec<Scalar>> =
            sys.data.chi.to_rows().iter().map(|r| r.iter().map(|x| Scalar::from_integer(x.clone())).collect()).collect();
        let fields = fields_from_action(&LinearAction::diagonal(&weights));
        let boxes: Vec<WeylOp> = sys.boxes.iter().map(|b| b.op.clone()).collect();
        prop_assert!(stability_check(&fields, &boxes).unwrap().passed());
        prop_assert!(sys.generators().iter().all(|g| g.grading_degree().is_some()));
    }
}
