//! GKZ hypergeometric systems from an integer matrix: Euler and box
//! operators, the toric ideal, the bound ideal `A`, torus-orbit strata and
//! holonomicity verdicts.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::feasibility::strict_feasible;
use crate::groebner::{binomial, variable_product, CIdeal};
use crate::linalg::{integer_kernel, solve_integer_left, IntMatrix};
use crate::monomial::{MonomialOrder, MultiIndex};
use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;
use crate::weyl::WeylOp;
use crate::weyl_groebner::WIdeal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GkzError {
    #[error("matrix has rank {rank} but {rows} rows; row {row} depends on the rows above it")]
    RankDeficient { rank: usize, rows: usize, row: usize },
    #[error("no integer row combination of the matrix equals (1, ..., 1)")]
    NoHomogeneity,
    #[error("parameter vector has length {found}, expected {expected}")]
    ParameterLength { expected: usize, found: usize },
}

/// Validated input of a GKZ system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkzData {
    pub chi: IntMatrix,
    pub lambda: Vec<Scalar>,
    /// Kernel lattice basis, columns in Hermite normal form.
    pub lattice: IntMatrix,
    /// Integer `c` with `c chi = (1, ..., 1)`.
    pub homogeneity: Vec<BigInt>,
}

/// Checks rank and the homogeneity condition and returns a witness `c`.
fn homogeneity_witness(chi: &IntMatrix) -> Result<Vec<BigInt>, GkzError> {
    let rank = chi.rank();
    if rank != chi.rows() {
        // first row (1-based) that does not raise the rank
        let row = (1..=chi.rows())
            .find(|&k| IntMatrix::from_rows(&chi.to_rows()[..k]).expect("rectangular").rank() < k)
            .unwrap_or(chi.rows());
        return Err(GkzError::RankDeficient { rank, rows: chi.rows(), row });
    }
    solve_integer_left(chi, &vec![BigInt::one(); chi.cols()]).ok_or(GkzError::NoHomogeneity)
}

impl GkzData {
    pub fn new(chi: IntMatrix, lambda: Vec<Scalar>) -> Result<Self, GkzError> {
        let homogeneity = homogeneity_witness(&chi)?;
        if lambda.len() != chi.rows() {
            return Err(GkzError::ParameterLength { expected: chi.rows(), found: lambda.len() });
        }
        let lattice = integer_kernel(&chi);
        Ok(GkzData { chi, lambda, lattice, homogeneity })
    }

    /// Ambient dimension `N` (number of columns).
    pub fn n_vars(&self) -> usize {
        self.chi.cols()
    }

    pub fn lattice_vectors(&self) -> Vec<Vec<i64>> {
        self.lattice.columns().iter().map(|c| to_i64(c)).collect()
    }
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().expect("small entries")).collect()
}

fn split_signs(a: &[i64]) -> (Vec<u32>, Vec<u32>) {
    let plus = a.iter().map(|&x| x.max(0) as u32).collect();
    let minus = a.iter().map(|&x| (-x).max(0) as u32).collect();
    (plus, minus)
}

/// `xi^{a+} - xi^{a-}` in `Q[xi_1..xi_N]`.
pub fn lattice_binomial(a: &[i64]) -> Poly {
    let (p, m) = split_signs(a);
    binomial(a.len(), &p, &m)
}

/// `d^{a+} - d^{a-}`.
pub fn box_operator(a: &[i64]) -> WeylOp {
    let n = a.len();
    let (p, m) = split_signs(a);
    let zero = vec![0; n];
    WeylOp::term(n, &zero, &p, Scalar::one())
        .sub(&WeylOp::term(n, &zero, &m, Scalar::one()))
        .expect("same dimension")
}

/// `theta_i = sum_j chi_ij z_j d_j`.
pub fn euler_operator(chi: &IntMatrix, i: usize) -> WeylOp {
    let n = chi.cols();
    let mut op = WeylOp::zero(n);
    for j in 0..n {
        let c = Scalar::from_integer(chi[(i, j)].clone());
        op = op.add(&WeylOp::x(n, j).multiply(&WeylOp::d(n, j)).unwrap().scale(&c)).unwrap();
    }
    op
}

/// The toric ideal of the orbit closure: lattice-basis binomials saturated
/// by the product of all coordinates.
pub fn toric_ideal(n: usize, lattice: &[Vec<i64>]) -> CIdeal {
    let ring = Ring::momenta(n);
    let gens: Vec<Poly> = lattice.iter().map(|a| lattice_binomial(a)).collect();
    CIdeal::new(ring, gens).saturate(&variable_product(n))
}

/// Exponent difference of a binomial `xi^u - xi^v`, oriented so its first
/// nonzero entry is positive.
fn binomial_exponent(p: &Poly) -> Vec<i64> {
    let terms: Vec<(&MultiIndex, &Scalar)> = p.terms().collect();
    assert_eq!(terms.len(), 2, "toric basis element is not a binomial");
    let (pos, neg) = if terms[0].1.is_positive() { (terms[0].0, terms[1].0) } else { (terms[1].0, terms[0].0) };
    let a: Vec<i64> = pos.0.iter().zip(&neg.0).map(|(u, v)| *u as i64 - *v as i64).collect();
    match a.iter().find(|x| **x != 0) {
        Some(x) if *x < 0 => a.iter().map(|x| -x).collect(),
        _ => a,
    }
}

/// One box operator with its lattice vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxOp {
    pub lattice_vector: Vec<i64>,
    pub op: WeylOp,
}

/// The system `(theta_i - lambda_i) u = 0`, `box_a u = 0`.
#[derive(Clone, Debug)]
pub struct GkzSystem {
    pub data: GkzData,
    /// `theta_i - lambda_i`.
    pub eulers: Vec<WeylOp>,
    /// One box per element of the reduced toric basis.
    pub boxes: Vec<BoxOp>,
    /// Toric ideal in `Q[xi_1..xi_N]` with its degrevlex basis.
    pub toric: CIdeal,
}

pub fn build_gkz(chi: IntMatrix, lambda: Vec<Scalar>) -> Result<GkzSystem, GkzError> {
    let data = GkzData::new(chi, lambda)?;
    let n = data.n_vars();
    let eulers = (0..data.chi.rows())
        .map(|i| euler_operator(&data.chi, i).sub(&WeylOp::constant(n, data.lambda[i].clone())).unwrap())
        .collect();
    let toric = toric_ideal(n, &data.lattice_vectors());
    let boxes = toric
        .basis()
        .expect("saturate caches a basis")
        .polys
        .iter()
        .map(|p| {
            let a = binomial_exponent(p);
            BoxOp { op: box_operator(&a), lattice_vector: a }
        })
        .collect();
    Ok(GkzSystem { data, eulers, boxes, toric })
}

impl GkzSystem {
    pub fn n_vars(&self) -> usize {
        self.data.n_vars()
    }

    /// All generators: Euler operators first, then boxes.
    pub fn generators(&self) -> Vec<WeylOp> {
        self.eulers.iter().cloned().chain(self.boxes.iter().map(|b| b.op.clone())).collect()
    }

    pub fn left_ideal(&self) -> WIdeal {
        WIdeal::new(self.n_vars(), self.generators()).expect("consistent dimension")
    }

    /// `(theta_bar_i, toric binomials)` in `Q[z, xi]`.
    pub fn bound_ideal(&self) -> CIdeal {
        let n = self.n_vars();
        let ring = Ring::symplectic(n);
        let mut gens: Vec<Poly> = (0..self.data.chi.rows()).map(|i| euler_symbol(&self.data.chi, i, None)).collect();
        let map: Vec<usize> = (n..2 * n).collect();
        gens.extend(self.toric.basis().expect("cached").polys.iter().map(|p| p.remap(2 * n, &map)));
        CIdeal::new(ring, gens).groebner(&MonomialOrder::DegRevLex)
    }

    /// `-sum_j chi_ij max(a_j, 0)`: the eigenvalue in `[theta_i, box_a] = mu box_a`.
    pub fn euler_box_eigenvalue(&self, i: usize, a: &[i64]) -> Scalar {
        let s: BigInt = a.iter().enumerate().map(|(j, x)| &self.data.chi[(i, j)] * BigInt::from((*x).max(0))).sum();
        -Scalar::from_integer(s)
    }

    pub fn verdicts(&self, compare_graded: bool) -> GkzVerdicts {
        let n = self.n_vars();
        let bound = self.bound_ideal();
        let dim_bound = bound.krull_dimension();
        let strata = orbit_strata(&self.data.chi).expect("validated matrix");
        let homogeneous = self.generators().iter().all(|g| g.grading_degree().is_some());
        let strata_dims_ok = strata.strata.iter().all(|s| s.dimension == Some(n));
        let holonomic = dim_bound == Some(n);
        let graded_equals_bound = compare_graded.then(|| {
            let gr = self.left_ideal().gr_ideal().expect("filtration order");
            gr.contains_ideal(&bound) && bound.contains_ideal(&gr)
        });
        GkzVerdicts {
            dim_bound,
            holonomic,
            homogeneous,
            strata_count: strata.strata.len(),
            strata_dims_ok,
            regular_holonomic: holonomic && homogeneous && strata_dims_ok,
            graded_equals_bound,
            strata,
        }
    }
}

/// `sum_{j in F} chi_ij z_j xi_j` in `Q[z, xi]`; all columns when `F` is `None`.
fn euler_symbol(chi: &IntMatrix, i: usize, support: Option<u64>) -> Poly {
    let n = chi.cols();
    let mut p = Poly::zero(2 * n);
    for j in 0..n {
        if support.is_some_and(|s| s & (1 << j) == 0) {
            continue;
        }
        let mut m = vec![0; 2 * n];
        m[j] = 1;
        m[n + j] = 1;
        p.add_term(MultiIndex(m), Scalar::from_integer(chi[(i, j)].clone()));
    }
    p
}

/// A torus orbit in the orbit closure, labelled by the columns supported on it.
#[derive(Clone, Debug)]
pub struct Stratum {
    /// 0-based column indices.
    pub support: Vec<usize>,
    /// `w` with `w . chi_j = 0` on the support and `> 0` off it.
    pub witness: Vec<Scalar>,
    /// Ideal of the closure of the conormal bundle of the orbit, in `Q[z, xi]`.
    pub conormal: CIdeal,
    pub dimension: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct StrataReport {
    /// Sorted by size, then lexicographically.
    pub strata: Vec<Stratum>,
}

impl StrataReport {
    pub fn supports(&self) -> Vec<Vec<usize>> {
        self.strata.iter().map(|s| s.support.clone()).collect()
    }

    /// Every conormal ideal contains `bound`, i.e. each conormal closure lies
    /// in the support of `A`.
    pub fn inside(&self, bound: &CIdeal) -> bool {
        self.strata.iter().all(|s| s.conormal.contains_ideal(bound))
    }
}

fn subset_columns(chi: &IntMatrix, mask: u64, inside: bool) -> Vec<Vec<BigInt>> {
    (0..chi.cols())
        .filter(|j| (mask & (1 << j) != 0) == inside)
        .map(|j| chi.column(j))
        .collect()
}

/// Conormal ideal of the orbit with column support `mask`.
fn conormal_ideal(chi: &IntMatrix, mask: u64) -> CIdeal {
    let n = chi.cols();
    let ring = Ring::symplectic(n);
    let cols: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
    let mut gens: Vec<Poly> = (0..n).filter(|j| mask & (1 << j) == 0).map(|j| Poly::var(2 * n, n + j)).collect();
    gens.extend((0..chi.rows()).map(|i| euler_symbol(chi, i, Some(mask))));
    if cols.is_empty() {
        return CIdeal::new(ring, gens).groebner(&MonomialOrder::DegRevLex);
    }
    let sub = IntMatrix::from_columns(chi.rows(), &cols.iter().map(|&j| chi.column(j)).collect::<Vec<_>>());
    for a in integer_kernel(&sub).columns() {
        let mut full = vec![0i64; n];
        for (k, &j) in cols.iter().enumerate() {
            full[j] = a[k].to_i64().expect("small entries");
        }
        let map: Vec<usize> = (n..2 * n).collect();
        gens.push(lattice_binomial(&full).remap(2 * n, &map));
    }
    let mut prod = vec![0; 2 * n];
    for &j in &cols {
        prod[n + j] = 1;
    }
    CIdeal::new(ring, gens).saturate(&Poly::monomial(2 * n, MultiIndex(prod), Scalar::one()))
}

/// Faces of the cone over the columns of `chi`, each with its conormal ideal.
pub fn orbit_strata(chi: &IntMatrix) -> Result<StrataReport, GkzError> {
    homogeneity_witness(chi)?;
    let n = chi.cols();
    assert!(n < 64);
    let mut strata: Vec<Stratum> = (0..(1u64 << n))
        .into_par_iter()
        .filter_map(|mask| {
            let eq = subset_columns(chi, mask, true);
            let pos = subset_columns(chi, mask, false);
            let witness = strict_feasible(&eq, &pos)?;
            let conormal = conormal_ideal(chi, mask);
            let dimension = conormal.krull_dimension();
            let support = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            Some(Stratum { support, witness, conormal, dimension })
        })
        .collect();
    strata.sort_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)));
    Ok(StrataReport { strata })
}

/// Verdicts on a GKZ system.
#[derive(Clone, Debug)]
pub struct GkzVerdicts {
    /// Krull dimension of `Q[z, xi] / A`.
    pub dim_bound: Option<usize>,
    pub holonomic: bool,
    pub homogeneous: bool,
    pub strata_count: usize,
    /// Every conormal component has dimension `N`.
    pub strata_dims_ok: bool,
    /// Homogeneous, holonomic, finitely many orbits.
    pub regular_holonomic: bool,
    /// `gr I == A`, when the comparison was requested.
    pub graded_equals_bound: Option<bool>,
    pub strata: StrataReport,
}
