//! One PASS/FAIL line per acceptance criterion. All comparisons are exact;
//! the only tolerances are the wall-clock limits below.

use std::time::{Duration, Instant};

use dmod_cli::run;
use dmod_core::equivariant::{fields_from_action, stability_check, LinearAction};
use dmod_core::gkz::{build_gkz, lattice_binomial, GkzSystem};
use dmod_core::linalg::integer_kernel;
use dmod_core::parse::{parse_op, parse_poly};
use dmod_core::reduction::{fuchsian_l1, reduce, series_recurrence, ThetaOp};
use dmod_core::scalar::{int, ratio};
use dmod_core::{CIdeal, IntMatrix, Poly, Ring, Scalar, TwistedPower, WIdeal, WeylOp};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const LAW_CASES: usize = 500;
const LAW_LIMIT: Duration = Duration::from_secs(10);
const EULER_LIMIT: Duration = Duration::from_secs(1);
const GAUSS_LIMIT: Duration = Duration::from_secs(30);
const SERIES_TERMS: usize = 21;

const FIX: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))?;
    Ok(format!("{:.3}s", t.as_secs_f64()))
}

fn mat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn gauss_chi() -> IntMatrix {
    mat(&[&[1, 1, 1, 1], &[0, 1, 0, 1], &[0, 0, 1, 1]])
}

fn cubic_chi() -> IntMatrix {
    mat(&[&[1, 1, 1, 1], &[0, 1, 2, 3]])
}

fn corpus_gkz() -> Vec<GkzSystem> {
    vec![
        build_gkz(gauss_chi(), vec![ratio(-5, 6), ratio(1, 4), ratio(5, 12)]).unwrap(),
        build_gkz(cubic_chi(), vec![ratio(1, 2), ratio(-1, 3)]).unwrap(),
        build_gkz(IntMatrix::identity(2), vec![int(1), ratio(2, 5)]).unwrap(),
    ]
}

fn random_op(rng: &mut StdRng, n: usize) -> WeylOp {
    let mut p = WeylOp::zero(n);
    for _ in 0..rng.gen_range(0..=4) {
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=2)).collect();
        let c = ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        p = p.add(&WeylOp::term(n, &a, &b, c)).unwrap();
    }
    p
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 1..=4 {
        for i in 0..n {
            for j in 0..n {
                let delta = WeylOp::constant(n, int((i == j) as i64));
                ensure(WeylOp::d(n, i).commutator(&WeylOp::x(n, j)).unwrap() == delta, "[d_i, x_j]")?;
                ensure(WeylOp::x(n, i).commutator(&WeylOp::x(n, j)).unwrap().is_zero(), "[x_i, x_j]")?;
                ensure(WeylOp::d(n, i).commutator(&WeylOp::d(n, j)).unwrap().is_zero(), "[d_i, d_j]")?;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut counts = [0usize; 5];
    for case in 0..LAW_CASES {
        let n = 1 + case % 3;
        let (p, q, r) = (random_op(&mut rng, n), random_op(&mut rng, n), random_op(&mut rng, n));
        let pq = p.multiply(&q).unwrap();
        ensure(pq.multiply(&r).unwrap() == p.multiply(&q.multiply(&r).unwrap()).unwrap(), format!("associativity, case {case}"))?;
        counts[0] += 1;
        if let (Some(m), Some(l)) = (p.order(), q.order()) {
            ensure(pq.order() == Some(m + l) && pq.symbol(m + l) == &p.symbol(m) * &q.symbol(l), format!("symbol, case {case}"))?;
            let c = p.commutator(&q).unwrap();
            ensure(c.order().is_none_or(|k| k < m + l), format!("commutator order, case {case}"))?;
        } else {
            ensure(pq.is_zero(), format!("zero product, case {case}"))?;
        }
        counts[1] += 1;
        counts[2] += 1;
        ensure(p.formal_adjoint().formal_adjoint() == p, format!("adjoint involution, case {case}"))?;
        ensure(pq.formal_adjoint() == q.formal_adjoint().multiply(&p.formal_adjoint()).unwrap(), format!("adjoint anti, case {case}"))?;
        counts[3] += 1;
        ensure(pq.fourier_transform() == p.fourier_transform().multiply(&q.fourier_transform()).unwrap(), format!("fourier, case {case}"))?;
        ensure(p.fourier_transform().fourier_transform() == p.antipode(), format!("fourier squared, case {case}"))?;
        ensure(p.antipode().antipode() == p, format!("antipode squared, case {case}"))?;
        counts[4] += 1;
    }
    let t = within(start, LAW_LIMIT)?;
    Ok(format!("heisenberg N<=4 exhaustive; {} cases per law; {t}", counts.iter().min().unwrap()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let p = parse_op("x1*d1 - 3/2", 1).unwrap();
    let rep = WIdeal::new(1, vec![p.clone()]).unwrap().characteristic_report();
    ensure(rep.graded.display_basis() == ["z1*xi1"], format!("gr I = {:?}", rep.graded.display_basis()))?;
    ensure(rep.dimension == Some(1), "dimension")?;
    ensure(rep.holonomic, "holonomic")?;
    ensure(rep.involutive(), "involutivity")?;
    ensure(p.apply_twisted(&TwistedPower::new(int(1), vec![ratio(3, 2)])).is_empty(), "x^(3/2) not annihilated")?;
    let t = within(start, EULER_LIMIT)?;
    Ok(format!("gr I = (z1*xi1), dim 1; {t}"))
}

/// Characteristic and bound ideals of the corpus.
fn corpus_ideals() -> Vec<(String, CIdeal)> {
    let mut out = Vec::new();
    for (name, ops) in [
        ("euler", vec!["x1*d1 - 3/2"]),
        ("ode a2 = x^2 - 1", vec!["(x1^2 - 1)*d1^2 + x1*d1 - 4"]),
        ("d1, x1*d2", vec!["d1", "x1*d2"]),
    ] {
        let n = ops.iter().map(|s| dmod_core::parse::infer_dim(s)).max().unwrap();
        let gens = ops.iter().map(|s| parse_op(s, n).unwrap()).collect();
        out.push((name.to_string(), WIdeal::new(n, gens).unwrap().characteristic_report().graded));
    }
    for (name, sys) in ["gauss", "twisted cubic", "identity"].iter().zip(corpus_gkz()) {
        out.push((format!("{name} bound"), sys.bound_ideal()));
    }
    out
}

fn criterion_3() -> Outcome {
    let ideals = corpus_ideals();
    let mut pairs = 0;
    for (name, ideal) in &ideals {
        let rep = ideal.involutivity_certificate().map_err(|e| format!("{name}: {e}"))?;
        ensure(rep.passed(), format!("{name}: {} failures", rep.failures()))?;
        pairs += rep.checks.len();
    }
    Ok(format!("{} ideals, {pairs} brackets, 0 failures", ideals.len()))
}

fn criterion_4() -> Outcome {
    let ideals = corpus_ideals();
    let mut checked = 0;
    for (name, ideal) in &ideals {
        let n = ideal.ring().symplectic_dim().unwrap();
        if let Some(d) = ideal.krull_dimension() {
            ensure(d >= n, format!("{name}: dim {d} < {n}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} non-unit ideals, 0 violations"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let sys = build_gkz(gauss_chi(), vec![ratio(-5, 6), ratio(1, 4), ratio(5, 12)]).map_err(|e| e.to_string())?;
    ensure(sys.data.lattice_vectors() == [vec![1, -1, -1, 1]], "lattice")?;
    ensure(sys.boxes.len() == 1 && sys.boxes[0].op == parse_op("d1*d4 - d2*d3", 4).unwrap(), "box")?;
    let v = sys.verdicts(false);
    ensure(v.strata_count == 10, format!("{} strata", v.strata_count))?;
    ensure(v.dim_bound == Some(4), format!("dim A = {:?}", v.dim_bound))?;
    ensure(v.strata.strata.iter().all(|s| s.dimension == Some(4)), "stratum dimension")?;
    ensure(v.homogeneous, "homogeneity")?;
    ensure(v.regular_holonomic, "regular holonomic")?;
    let t = within(start, GAUSS_LIMIT)?;
    Ok(format!("10 strata, dim A = 4, regular holonomic; {t}"))
}

fn criterion_6() -> Outcome {
    let sys = build_gkz(cubic_chi(), vec![int(0), int(0)]).map_err(|e| e.to_string())?;
    let toric = &sys.toric;
    let gens = toric.basis().unwrap().polys.len();
    ensure(gens == 3, format!("{gens} generators"))?;
    let target = lattice_binomial(&[1, -1, -1, 1]);
    ensure(toric.basis().unwrap().polys.iter().any(|p| *p == target || *p == -&target), "xi1*xi4 - xi2*xi3 missing")?;
    let chi = cubic_chi();
    let mut oracle: Vec<Poly> = Vec::new();
    let r = 4i64;
    let span = (2 * r + 1) as usize;
    for idx in 0..span.pow(4) {
        let a: Vec<i64> = (0..4).map(|k| (idx / span.pow(k as u32) % span) as i64 - r).collect();
        let in_kernel = chi.to_rows().iter().all(|row| {
            row.iter().zip(&a).map(|(c, x)| c * BigInt::from(*x)).sum::<BigInt>().is_zero()
        });
        if in_kernel && a.iter().any(|&x| x != 0) {
            oracle.push(lattice_binomial(&a));
        }
    }
    ensure(oracle.iter().all(|b| toric.contains(b)), "oracle binomial outside")?;
    let oracle_ideal = CIdeal::new(Ring::momenta(4), oracle.clone());
    ensure(oracle_ideal.contains_ideal(toric), "generator outside oracle ideal")?;
    Ok(format!("3 generators; {} oracle binomials agree", oracle.len()))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for sys in corpus_gkz() {
        let chi = &sys.data.chi;
        for b in &sys.boxes {
            for i in 0..chi.rows() {
                let theta = dmod_core::gkz::euler_operator(chi, i);
                let mu: BigInt = (0..chi.cols()).map(|j| &chi[(i, j)] * BigInt::from(b.lattice_vector[j].max(0))).sum();
                let expected = b.op.scale(&-Scalar::from_integer(mu));
                ensure(theta.commutator(&b.op).unwrap() == expected, format!("box {:?}, row {i}", b.lattice_vector))?;
                checked += 1;
            }
        }
    }
    let m = |rows: [[i64; 3]; 3]| rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<Vec<_>>>();
    let action = LinearAction::new(
        vec!["e".into(), "h".into(), "f".into()],
        vec![
            m([[0, -2, 0], [0, 0, 1], [0, 0, 0]]),
            m([[2, 0, 0], [0, 0, 0], [0, 0, -2]]),
            m([[0, 0, 0], [-1, 0, 0], [0, 2, 0]]),
        ],
        None,
    )
    .map_err(|e| e.to_string())?;
    let fields = fields_from_action(&action);
    ensure(fields[1].commutator(&parse_op("d1*d3", 3).unwrap()).unwrap().is_zero(), "[L_h, d_e d_f] != 0")?;
    let cas = parse_op("1/2*d2^2 + 2*d1*d3", 3).unwrap();
    ensure(stability_check(&fields, &[cas]).map_err(|e| e.to_string())?.passed(), "casimir unstable")?;
    Ok(format!("{checked} euler/box commutators exact; casimir stable"))
}

fn criterion_8() -> Outcome {
    let (a, b, c) = (ratio(1, 2), ratio(1, 3), ratio(5, 4));
    let chi = gauss_chi();
    let lambda = chi.mul_vec(&[int(0), -a.clone(), -b.clone(), &c - int(1)]).unwrap();
    let lattice: Vec<Vec<i64>> =
        integer_kernel(&chi).columns().iter().map(|v| v.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
    let r = reduce(&chi, &lambda, &lattice).map_err(|e| e.to_string())?;
    ensure(r.shift == [int(0), -a.clone(), -b.clone(), &c - int(1)], "shift")?;
    let op = &r.operators[0].op;
    // th (th + c - 1) - x (th + a)(th + b)
    let mut expected = ThetaOp::zero(1);
    expected.add_term(vec![0], vec![2], int(1));
    expected.add_term(vec![0], vec![1], &c - int(1));
    expected.add_term(vec![1], vec![2], int(-1));
    expected.add_term(vec![1], vec![1], -(&a + &b));
    expected.add_term(vec![1], vec![0], -(&a * &b));
    let lead = op.terms().find(|((x, t), _)| x == &[0] && t == &[2]).map(|(_, s)| s.clone()).ok_or("no th^2 term")?;
    ensure(op.scale(&(Scalar::one() / lead)) == expected, format!("operator {op}"))?;
    let f = fuchsian_l1(&r).map_err(|e| e.to_string())?;
    ensure(f.p == 2, format!("p = {}", f.p))?;
    let coeffs = series_recurrence(op).map_err(|e| e.to_string())?.coefficients(SERIES_TERMS).map_err(|o| format!("obstruction at {}", o.0))?;
    let mut poch = Scalar::one();
    for (m, got) in coeffs.iter().enumerate() {
        ensure(*got == poch, format!("coefficient {m}: {got} != {poch}"))?;
        let m = int(m as i64);
        poch = poch * (&a + &m) * (&b + &m) / ((&c + &m) * (&m + int(1)));
    }
    Ok(format!("operator matches; {} coefficients exact; p = 2", coeffs.len()))
}

fn criterion_9() -> Outcome {
    let ideal = WIdeal::new(2, vec![parse_op("d1", 2).unwrap(), parse_op("x1*d2", 2).unwrap()]).unwrap();
    let gr = ideal.weyl_groebner().gr_ideal().map_err(|e| e.to_string())?;
    let sym = ideal.symbol_ideal();
    let w = parse_poly("xi2", &Ring::symplectic(2)).unwrap();
    ensure(gr.contains(&w), "witness not in gr I")?;
    ensure(!sym.contains(&w), "witness in symbol ideal")?;
    ensure(gr.contains_ideal(&sym), "symbol ideal not inside gr I")?;
    Ok("(d1, x1*d2): xi2 in gr I, not in (xi1, z1*xi2)".into())
}

fn criterion_10() -> Outcome {
    let f = |name: &str| format!("{FIX}/{name}");
    let jobs: Vec<Vec<String>> = vec![
        vec!["gkz".into(), "--chi".into(), f("2f1.json"), "--lambda".into(), "-5/6,1/4,5/12".into(), "report".into()],
        vec!["gkz".into(), "--chi".into(), f("twisted_cubic.json")],
        vec!["gkz".into(), "--chi".into(), f("identity.json"), "--compare-graded".into()],
        vec!["reduce".into(), "--chi".into(), f("2f1.json"), "--l1".into()],
        vec!["reduce".into(), "--chi".into(), f("twisted_cubic.json")],
        vec!["check-equivariance".into(), "--action".into(), f("sl2_casimir.json")],
        vec!["check-equivariance".into(), "--action".into(), f("torus_2f1.json")],
        vec!["charvar".into(), "--ops".into(), "d1; x1*d2".into()],
        vec!["charvar".into(), "--ops".into(), "(x1^2 - 1)*d1^2 + x1*d1 - 4".into()],
        vec!["gb".into(), "--ops".into(), "xi1*xi3 - xi2^2; xi2*xi4 - xi3^2".into(), "--order".into(), "lex".into()],
        vec!["wgb".into(), "--ops".into(), "d1^2; x1*d1 - 1".into()],
    ];
    for job in &jobs {
        let go = |threads: &str| {
            let mut argv = vec!["dmod".to_string(), "--json".into(), "--threads".into(), threads.into()];
            argv.extend(job.iter().cloned());
            run(argv)
        };
        let (c1, a) = go("1");
        let (_, b) = go("1");
        let (c4, d) = go("4");
        ensure(c1 == 0 && c4 == 0, format!("{job:?} failed: {a}"))?;
        ensure(a == b, format!("{job:?} differs between runs"))?;
        ensure(a == d, format!("{job:?} differs between 1 and 4 threads"))?;
    }
    Ok(format!("{} fixtures byte-identical (2 runs, 1 vs 4 threads)", jobs.len()))
}

fn main() {
    let criteria: [Check; 10] = [
        ("weyl algebra laws", criterion_1),
        ("euler fixture", criterion_2),
        ("involutivity", criterion_3),
        ("bernstein inequality", criterion_4),
        ("gauss gkz pipeline", criterion_5),
        ("toric saturation", criterion_6),
        ("infinitesimal equivariance", criterion_7),
        ("classical reduction", criterion_8),
        ("gr strictness", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
