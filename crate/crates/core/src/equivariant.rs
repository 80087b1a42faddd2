//! Equivariant systems from a linear Lie-algebra action: vector fields,
//! infinitesimal stability of constant-coefficient ideals, characters,
//! Fourier transform and the homogeneity criterion.

use num_traits::Zero;

use crate::groebner::CIdeal;
use crate::linalg::rref;
use crate::monomial::MultiIndex;
use crate::poly::{Poly, Ring};
use crate::scalar::Scalar;
use crate::weyl::WeylOp;
use crate::weyl_groebner::WIdeal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquivariantError {
    #[error("matrix {index} is not {n}x{n}")]
    MatrixSize { index: usize, n: usize },
    #[error("{names} names for {matrices} matrices")]
    NameCount { names: usize, matrices: usize },
    #[error("structure constants do not match [{s}, {t}]")]
    StructureMismatch { s: usize, t: usize },
    #[error("[{s}, {t}] is not in the span of the basis")]
    NotClosed { s: usize, t: usize },
    #[error("{count} character values for {basis} basis elements")]
    CharacterLength { count: usize, basis: usize },
    #[error("generator {0} has non-constant coefficients")]
    NotConstantCoefficient(usize),
    #[error("bracket of field {field} with generator {generator} has non-constant coefficients")]
    NonConstantBracket { field: usize, generator: usize },
    #[error("operator dimension {found} does not match {expected}")]
    Dimension { expected: usize, found: usize },
}

type Matrix = Vec<Vec<Scalar>>;

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Scalar::zero(), |acc, k| acc + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn mat_bracket(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect()).collect()
}

/// A Lie algebra acting linearly on `Q^n`, one matrix per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAction {
    pub names: Vec<String>,
    pub matrices: Vec<Matrix>,
    /// `structure[s][t][r]`: `[A_s, A_t] = sum_r structure[s][t][r] A_r`.
    pub structure: Vec<Vec<Vec<Scalar>>>,
}

impl LinearAction {
    /// Validates sizes and structure constants. Missing structure constants
    /// are solved for from the matrices.
    pub fn new(
        names: Vec<String>,
        matrices: Vec<Matrix>,
        structure: Option<Vec<Vec<Vec<Scalar>>>>,
    ) -> Result<Self, EquivariantError> {
        if names.len() != matrices.len() {
            return Err(EquivariantError::NameCount { names: names.len(), matrices: matrices.len() });
        }
        let n = matrices.first().map_or(0, Vec::len);
        for (index, m) in matrices.iter().enumerate() {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(EquivariantError::MatrixSize { index, n });
            }
        }
        let dim = matrices.len();
        let structure = match structure {
            Some(c) => {
                for s in 0..dim {
                    for t in 0..dim {
                        let lhs = mat_bracket(&matrices[s], &matrices[t]);
                        let coeffs = c.get(s).and_then(|r| r.get(t)).filter(|v| v.len() == dim);
                        let Some(coeffs) = coeffs else {
                            return Err(EquivariantError::StructureMismatch { s, t });
                        };
                        let rhs = combine(&matrices, coeffs, n);
                        if lhs != rhs {
                            return Err(EquivariantError::StructureMismatch { s, t });
                        }
                    }
                }
                c
            }
            None => derive_structure(&matrices, n)?,
        };
        Ok(LinearAction { names, matrices, structure })
    }

    /// Abelian action by diagonal matrices, one per row of weights.
    pub fn diagonal(weights: &[Vec<Scalar>]) -> Self {
        let n = weights.first().map_or(0, Vec::len);
        let matrices: Vec<Matrix> = weights
            .iter()
            .map(|w| {
                (0..n)
                    .map(|i| (0..n).map(|j| if i == j { w[i].clone() } else { Scalar::zero() }).collect())
                    .collect()
            })
            .collect();
        let names = (1..=weights.len()).map(|i| format!("t{i}")).collect();
        LinearAction::new(names, matrices, None).expect("diagonal matrices commute")
    }

    pub fn space_dim(&self) -> usize {
        self.matrices.first().map_or(0, Vec::len)
    }

    pub fn algebra_dim(&self) -> usize {
        self.matrices.len()
    }
}

fn combine(matrices: &[Matrix], coeffs: &[Scalar], n: usize) -> Matrix {
    let mut out = vec![vec![Scalar::zero(); n]; n];
    for (m, c) in matrices.iter().zip(coeffs) {
        for i in 0..n {
            for j in 0..n {
                out[i][j] += &m[i][j] * c;
            }
        }
    }
    out
}

fn derive_structure(matrices: &[Matrix], n: usize) -> Result<Vec<Vec<Vec<Scalar>>>, EquivariantError> {
    let dim = matrices.len();
    let mut out = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
    for s in 0..dim {
        for t in 0..dim {
            let target = mat_bracket(&matrices[s], &matrices[t]);
            // rows: one per matrix entry, columns: basis elements + rhs
            let rows: Vec<Vec<Scalar>> = (0..n * n)
                .map(|e| {
                    let (i, j) = (e / n, e % n);
                    let mut r: Vec<Scalar> = matrices.iter().map(|m| m[i][j].clone()).collect();
                    r.push(target[i][j].clone());
                    r
                })
                .collect();
            let (red, pivots) = rref(rows, dim);
            if red.iter().skip(pivots.len()).any(|r| !r[dim].is_zero()) {
                return Err(EquivariantError::NotClosed { s, t });
            }
            for (row, &p) in pivots.iter().enumerate() {
                out[s][t][p] = red[row][dim].clone();
            }
        }
    }
    Ok(out)
}

/// `L_s = sum_{j,k} (A_s)_{jk} x_k d_j`.
pub fn fields_from_action(a: &LinearAction) -> Vec<WeylOp> {
    let n = a.space_dim();
    a.matrices
        .iter()
        .map(|m| {
            let mut op = WeylOp::zero(n);
            for (j, row) in m.iter().enumerate() {
                for (k, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        let t = WeylOp::x(n, k).multiply(&WeylOp::d(n, j)).unwrap().scale(c);
                        op = op.add(&t).unwrap();
                    }
                }
            }
            op
        })
        .collect()
}

/// `lambda([theta_s, theta_t]) = 0` for every pair.
pub fn character_check(a: &LinearAction, lambda: &[Scalar]) -> Result<bool, EquivariantError> {
    if lambda.len() != a.algebra_dim() {
        return Err(EquivariantError::CharacterLength { count: lambda.len(), basis: a.algebra_dim() });
    }
    Ok(a.structure.iter().flatten().all(|c| {
        c.iter().zip(lambda).fold(Scalar::zero(), |acc, (x, y)| acc + x * y).is_zero()
    }))
}

/// A constant-coefficient operator as a polynomial in `xi`.
fn momentum_poly(p: &WeylOp) -> Poly {
    let n = p.dim();
    Poly::from_terms(n, p.terms().map(|(k, c)| (MultiIndex(k.0[n..].to_vec()), c.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityEntry {
    pub field: usize,
    pub generator: usize,
    pub bracket: WeylOp,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub entries: Vec<StabilityEntry>,
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.member)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StabilityEntry> {
        self.entries.iter().filter(|e| !e.member)
    }
}

/// Tests `[L_s, P_k] ∈ (P_1, ..., P_m)` for every field and generator.
pub fn stability_check(fields: &[WeylOp], constgens: &[WeylOp]) -> Result<StabilityReport, EquivariantError> {
    let n = fields.first().or(constgens.first()).map_or(0, WeylOp::dim);
    for (i, g) in constgens.iter().enumerate() {
        if g.dim() != n {
            return Err(EquivariantError::Dimension { expected: n, found: g.dim() });
        }
        if !g.is_constant_coefficient() {
            return Err(EquivariantError::NotConstantCoefficient(i));
        }
    }
    let ideal = CIdeal::new(Ring::momenta(n), constgens.iter().map(momentum_poly).collect());
    let mut entries = Vec::new();
    for (s, l) in fields.iter().enumerate() {
        if l.dim() != n {
            return Err(EquivariantError::Dimension { expected: n, found: l.dim() });
        }
        for (k, p) in constgens.iter().enumerate() {
            let bracket = l.commutator(p).expect("same dimension");
            if !bracket.is_constant_coefficient() {
                return Err(EquivariantError::NonConstantBracket { field: s, generator: k });
            }
            let member = ideal.contains(&momentum_poly(&bracket));
            entries.push(StabilityEntry { field: s, generator: k, bracket, member });
        }
    }
    Ok(StabilityReport { entries })
}

/// `(L_s - lambda_s) u = 0`, `P_k u = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantSystem {
    pub fields: Vec<WeylOp>,
    pub lambda: Vec<Scalar>,
    pub constgens: Vec<WeylOp>,
}

pub fn assemble(fields: Vec<WeylOp>, lambda: Vec<Scalar>, constgens: Vec<WeylOp>) -> Result<EquivariantSystem, EquivariantError> {
    if fields.len() != lambda.len() {
        return Err(EquivariantError::CharacterLength { count: lambda.len(), basis: fields.len() });
    }
    for (i, g) in constgens.iter().enumerate() {
        if !g.is_constant_coefficient() {
            return Err(EquivariantError::NotConstantCoefficient(i));
        }
    }
    Ok(EquivariantSystem { fields, lambda, constgens })
}

impl EquivariantSystem {
    pub fn dim(&self) -> usize {
        self.fields.first().or(self.constgens.first()).map_or(0, WeylOp::dim)
    }

    /// Field equations first, then the constant-coefficient generators.
    pub fn generators(&self) -> Vec<WeylOp> {
        let n = self.dim();
        self.fields
            .iter()
            .zip(&self.lambda)
            .map(|(l, c)| l.sub(&WeylOp::constant(n, c.clone())).expect("same dimension"))
            .chain(self.constgens.iter().cloned())
            .collect()
    }

    pub fn left_ideal(&self) -> WIdeal {
        WIdeal::new(self.dim(), self.generators()).expect("same dimension")
    }

    /// Every operator sent through the Fourier transform; characters unchanged.
    pub fn fourier_system(&self) -> EquivariantSystem {
        EquivariantSystem {
            fields: self.fields.iter().map(WeylOp::fourier_transform).collect(),
            lambda: self.lambda.clone(),
            constgens: self.constgens.iter().map(WeylOp::fourier_transform).collect(),
        }
    }
}

/// Where the finite-orbit hypothesis comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitCertificate {
    /// Number of torus-orbit strata computed from the weight matrix.
    TorusStrata(usize),
    /// Asserted by the caller.
    Asserted(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityReport {
    /// Grading degree (`deg d = 1`, `deg x = -1`) of every generator.
    pub degrees: Vec<Option<i64>>,
    pub homogeneous: bool,
    pub orbits: Option<OrbitCertificate>,
    /// Homogeneous with finitely many orbits.
    pub regular_holonomic: bool,
}

pub fn homogeneity_report(sys: &EquivariantSystem, orbits: Option<OrbitCertificate>) -> HomogeneityReport {
    let degrees: Vec<Option<i64>> = sys.generators().iter().map(WeylOp::grading_degree).collect();
    let homogeneous = degrees.iter().all(Option::is_some);
    let regular_holonomic = homogeneous && orbits.is_some();
    HomogeneityReport { degrees, homogeneous, orbits, regular_holonomic }
}
