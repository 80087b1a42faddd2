//! Reduction of a torus-equivariant GKZ system to the quotient torus:
//! operators in the Euler symbols `th_k = x_k d_{x_k}`, the one-variable
//! Fuchsian case and its hypergeometric parameters.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{integer_kernel, solve_rational, IntMatrix, LinalgError};
use crate::poly::join_terms;
use crate::scalar::{format_scalar, is_integer, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("lattice vector {0:?} is not an integer combination of the kernel basis")]
    NotInLattice(Vec<i64>),
    #[error("shift vector does not satisfy chi * shift = lambda")]
    BadShift,
    #[error("expected one quotient variable, found {0}")]
    NotOneVariable(usize),
    #[error("operator is not of the form A(th) - x B(th)")]
    NotTwoSlack,
}

/// A linear form `sum_k c_k th_k + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Scalar>,
    pub constant: Scalar,
}

impl LinearForm {
    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.iter().all(Zero::is_zero)
    }

    /// Splits off the first nonzero coefficient: `(lead, self / lead)`.
    /// Constant forms return `(constant, 1)`.
    pub fn normalized(&self) -> (Scalar, LinearForm) {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(lead) => (
                lead.clone(),
                LinearForm {
                    coeffs: self.coeffs.iter().map(|c| c / lead).collect(),
                    constant: &self.constant / lead,
                },
            ),
            None => (
                self.constant.clone(),
                LinearForm { coeffs: vec![Scalar::zero(); self.coeffs.len()], constant: Scalar::one() },
            ),
        }
    }

    fn to_theta(&self) -> ThetaOp {
        let l = self.coeffs.len();
        let mut op = ThetaOp::zero(l);
        op.add_term(vec![0; l], vec![0; l], self.constant.clone());
        for (k, c) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; l];
            e[k] = 1;
            op.add_term(vec![0; l], e, c.clone());
        }
        op
    }
}

fn theta_name(l: usize, k: usize) -> String {
    if l == 1 {
        "th".to_string()
    } else {
        format!("th{}", k + 1)
    }
}

fn x_name(l: usize, k: usize) -> String {
    if l == 1 {
        "x".to_string()
    } else {
        format!("x{}", k + 1)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.coeffs.len();
        let mut s = join_terms(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (c.clone(), theta_name(l, k))),
        );
        if s == "0" {
            s = format_scalar(&self.constant);
        } else if self.constant.is_negative() {
            s.push_str(&format!(" - {}", format_scalar(&-self.constant.clone())));
        } else {
            s.push_str(&format!(" + {}", format_scalar(&self.constant)));
        }
        f.write_str(&s)
    }
}

fn x_power_text(m: &[i64]) -> String {
    let l = m.len();
    m.iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(k, e)| match e {
            1 => x_name(l, k),
            e if *e > 0 => format!("{}^{}", x_name(l, k), e),
            e => format!("{}^({})", x_name(l, k), e),
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Sum of terms `c x^m th^e` (`m` may be negative), kept in the order
/// "monomial prefactor left of the theta polynomial".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOp {
    l: usize,
    terms: BTreeMap<(Vec<i64>, Vec<u32>), Scalar>,
}

impl ThetaOp {
    pub fn zero(l: usize) -> Self {
        ThetaOp { l, terms: BTreeMap::new() }
    }

    pub fn one(l: usize) -> Self {
        let mut op = ThetaOp::zero(l);
        op.add_term(vec![0; l], vec![0; l], Scalar::one());
        op
    }

    pub fn vars(&self) -> usize {
        self.l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `((x exponents, theta exponents), coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<i64>, Vec<u32>), &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, x: Vec<i64>, theta: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((x, theta)) {
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

    pub fn add(&self, other: &ThetaOp) -> ThetaOp {
        let mut out = self.clone();
        for ((x, t), c) in &other.terms {
            out.add_term(x.clone(), t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> ThetaOp {
        let mut out = ThetaOp::zero(self.l);
        for ((x, t), v) in &self.terms {
            out.add_term(x.clone(), t.clone(), v * c);
        }
        out
    }

    /// Left multiplication by `x^m`.
    pub fn shift_x(&self, m: &[i64]) -> ThetaOp {
        let mut out = ThetaOp::zero(self.l);
        for ((x, t), c) in &self.terms {
            let x2 = x.iter().zip(m).map(|(a, b)| a + b).collect();
            out.add_term(x2, t.clone(), c.clone());
        }
        out
    }

    /// Product, normal-ordered with `th_k x^m = x^m (th_k + m_k)`.
    pub fn multiply(&self, other: &ThetaOp) -> ThetaOp {
        let mut out = ThetaOp::zero(self.l);
        for ((x1, t1), c1) in &self.terms {
            for ((x2, t2), c2) in &other.terms {
                // th^t1 x^x2 = x^x2 (th + x2)^t1
                let shifted = shifted_power(t1, x2);
                for (e, c) in shifted {
                    let theta: Vec<u32> = e.iter().zip(t2).map(|(a, b)| a + b).collect();
                    let x: Vec<i64> = x1.iter().zip(x2).map(|(a, b)| a + b).collect();
                    out.add_term(x, theta, &c * c1 * c2);
                }
            }
        }
        out
    }

    /// Formal action on `x^s` for integer exponents `s`: every term maps
    /// `x^s` to `c * s^e * x^(s+m)`.
    pub fn apply_monomial(&self, s: &[i64]) -> BTreeMap<Vec<i64>, Scalar> {
        let mut out: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
        for ((x, t), c) in &self.terms {
            let mut v = c.clone();
            for (k, e) in t.iter().enumerate() {
                v *= Scalar::from_integer(BigInt::from(s[k])).pow(*e as i32);
            }
            let key: Vec<i64> = s.iter().zip(x).map(|(a, b)| a + b).collect();
            *out.entry(key).or_insert_with(Scalar::zero) += v;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Coefficients of the theta polynomial multiplying `x^m`.
    fn slice(&self, m: &[i64]) -> BTreeMap<Vec<u32>, Scalar> {
        self.terms.iter().filter(|((x, _), _)| x == m).map(|((_, t), c)| (t.clone(), c.clone())).collect()
    }
}

/// `(th + shift)^e` expanded as `{exponent: coefficient}`.
fn shifted_power(e: &[u32], shift: &[i64]) -> Vec<(Vec<u32>, Scalar)> {
    let mut acc: Vec<(Vec<u32>, Scalar)> = vec![(vec![0; e.len()], Scalar::one())];
    for (k, (&ek, &sk)) in e.iter().zip(shift).enumerate() {
        let mut next = Vec::new();
        for (mono, c) in &acc {
            for i in 0..=ek {
                let binom = Scalar::from_integer(crate::scalar::binomial(ek, i));
                let pw = Scalar::from_integer(BigInt::from(sk)).pow((ek - i) as i32);
                let mut m = mono.clone();
                m[k] += i;
                next.push((m, c * binom * pw));
            }
        }
        acc = next;
    }
    acc
}

impl fmt::Display for ThetaOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.l;
        // by x power, then descending theta degree
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by(|a, b| {
            let deg = |t: &Vec<u32>| t.iter().sum::<u32>();
            a.0 .0.cmp(&b.0 .0).then_with(|| deg(&b.0 .1).cmp(&deg(&a.0 .1))).then_with(|| b.0 .1.cmp(&a.0 .1))
        });
        let terms = sorted.into_iter().map(|((x, t), c)| {
            let mut parts = Vec::new();
            let xp = x_power_text(x);
            if !xp.is_empty() {
                parts.push(xp);
            }
            for (k, e) in t.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(theta_name(l, k)),
                    e => parts.push(format!("{}^{}", theta_name(l, k), e)),
                }
            }
            (c.clone(), parts.join("*"))
        });
        f.write_str(&join_terms(terms))
    }
}

/// `prod lhs - x^m prod rhs` for one lattice vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedOperator {
    pub lattice_vector: Vec<i64>,
    /// `a = sum_k m_k pi_k`.
    pub x_power: Vec<i64>,
    /// Linear factors of the Pochhammer products over `a_j > 0`.
    pub lhs: Vec<LinearForm>,
    /// Linear factors of the Pochhammer products over `a_j < 0`.
    pub rhs: Vec<LinearForm>,
    pub op: ThetaOp,
}

fn product(l: usize, factors: &[LinearForm]) -> ThetaOp {
    factors.iter().fold(ThetaOp::one(l), |acc, f| acc.multiply(&f.to_theta()))
}

/// Normalizes each factor to leading coefficient 1 and returns the
/// collected scalar.
fn normalize_factors(factors: &[LinearForm]) -> (Scalar, Vec<LinearForm>) {
    let mut scale = Scalar::one();
    let mut out = Vec::with_capacity(factors.len());
    for f in factors {
        let (c, g) = f.normalized();
        scale *= c;
        out.push(g);
    }
    (scale, out)
}

impl fmt::Display for ReducedOperator {
    /// Factored form with monic linear factors, e.g.
    /// `(th + 0)*(th + 1/4) - x*(th + 1/2)*(th + 1/3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (alpha, lhs) = normalize_factors(&self.lhs);
        let (beta, rhs) = normalize_factors(&self.rhs);
        let text = |pre: String, fs: &[LinearForm]| {
            let mut parts: Vec<String> = Vec::new();
            if !pre.is_empty() {
                parts.push(pre);
            }
            parts.extend(fs.iter().map(|g| format!("({g})")));
            parts.join("*")
        };
        f.write_str(&join_terms([
            (alpha, text(String::new(), &lhs)),
            (-beta, text(x_power_text(&self.x_power), &rhs)),
        ]))
    }
}

/// Output of [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionData {
    pub chi: IntMatrix,
    pub lambda: Vec<Scalar>,
    /// `shift` with `chi * shift = lambda`.
    pub shift: Vec<Scalar>,
    /// `N x l` kernel matrix.
    pub kernel: IntMatrix,
    pub operators: Vec<ReducedOperator>,
}

/// `(base)_count` as a list of linear factors `base + i`.
fn pochhammer(base: &LinearForm, count: u32) -> impl Iterator<Item = LinearForm> + '_ {
    (0..count).map(move |i| LinearForm {
        coeffs: base.coeffs.clone(),
        constant: &base.constant + Scalar::from_integer(BigInt::from(i)),
    })
}

/// Reduces with the particular solution of `chi shift = lambda` whose free
/// coordinates are zero.
pub fn reduce(chi: &IntMatrix, lambda: &[Scalar], lattice: &[Vec<i64>]) -> Result<ReductionData, ReductionError> {
    let shift = solve_rational(chi, lambda)?;
    reduce_with_shift(chi, lambda, shift, lattice)
}

/// Reduces with a caller-chosen shift vector.
pub fn reduce_with_shift(
    chi: &IntMatrix,
    lambda: &[Scalar],
    shift: Vec<Scalar>,
    lattice: &[Vec<i64>],
) -> Result<ReductionData, ReductionError> {
    if chi.mul_vec(&shift)? != lambda {
        return Err(ReductionError::BadShift);
    }
    let kernel = integer_kernel(chi);
    let l = kernel.cols();
    let n = chi.cols();
    // D_j = sum_k pi_jk th_k
    let d_forms: Vec<Vec<Scalar>> =
        (0..n).map(|j| (0..l).map(|k| Scalar::from_integer(kernel[(j, k)].clone())).collect()).collect();
    let mut operators = Vec::with_capacity(lattice.len());
    for a in lattice {
        let target: Vec<Scalar> = a.iter().map(|&x| Scalar::from_integer(BigInt::from(x))).collect();
        let m = solve_rational(&kernel, &target).map_err(|_| ReductionError::NotInLattice(a.clone()))?;
        if !m.iter().all(is_integer) {
            return Err(ReductionError::NotInLattice(a.clone()));
        }
        let x_power: Vec<i64> = m.iter().map(|q| q.numer().to_i64().expect("small")).collect();
        let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
        for (j, &aj) in a.iter().enumerate() {
            if aj == 0 {
                continue;
            }
            let offset = if aj > 0 { -aj + 1 } else { aj + 1 };
            let base = LinearForm {
                coeffs: d_forms[j].clone(),
                constant: &shift[j] + Scalar::from_integer(BigInt::from(offset)),
            };
            let target = if aj > 0 { &mut lhs } else { &mut rhs };
            target.extend(pochhammer(&base, aj.unsigned_abs() as u32));
        }
        let op = product(l, &lhs).add(&product(l, &rhs).shift_x(&x_power).scale(&-Scalar::one()));
        operators.push(ReducedOperator { lattice_vector: a.clone(), x_power, lhs, rhs, op });
    }
    Ok(ReductionData { chi: chi.clone(), lambda: lambda.to_vec(), shift, kernel, operators })
}

impl ReductionData {
    pub fn quotient_dim(&self) -> usize {
        self.kernel.cols()
    }

    /// `sum_j chi_ij (D_j + shift_j) - lambda_i` for each row `i`; all zero
    /// for a consistent reduction.
    pub fn euler_pullbacks(&self) -> Vec<LinearForm> {
        let l = self.quotient_dim();
        (0..self.chi.rows())
            .map(|i| {
                let mut coeffs = vec![Scalar::zero(); l];
                let mut constant = -self.lambda[i].clone();
                for j in 0..self.chi.cols() {
                    let c = Scalar::from_integer(self.chi[(i, j)].clone());
                    for (k, slot) in coeffs.iter_mut().enumerate() {
                        *slot += &c * Scalar::from_integer(self.kernel[(j, k)].clone());
                    }
                    constant += &c * &self.shift[j];
                }
                LinearForm { coeffs, constant }
            })
            .collect()
    }
}

/// Parameters of the one-variable reduction read as a generalized
/// hypergeometric series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsianReport {
    pub operator: ReducedOperator,
    /// `sum_{pi_j > 0} pi_j`.
    pub p: u32,
    pub upper: Vec<Scalar>,
    pub lower: Vec<Scalar>,
    /// Series argument is `scale * x`.
    pub scale: Scalar,
    /// False when no factor `th + 0` was found; `lower` then lists the raw
    /// shifts `1 + s` of every constant-side factor.
    pub normalized: bool,
}

impl FuchsianReport {
    pub fn note(&self) -> Option<&'static str> {
        (!self.normalized).then_some("no factor (th + 0); parameters reported raw")
    }
}

/// The single operator of a one-dimensional quotient and its `pFq` data.
pub fn fuchsian_l1(r: &ReductionData) -> Result<FuchsianReport, ReductionError> {
    if r.quotient_dim() != 1 {
        return Err(ReductionError::NotOneVariable(r.quotient_dim()));
    }
    let operator = r.operators.first().cloned().ok_or(ReductionError::NotOneVariable(0))?;
    let p: u32 = r.kernel.column(0).iter().filter(|v| v.is_positive()).map(|v| v.to_u32().expect("small")).sum();
    let (alpha, lhs) = normalize_factors(&operator.lhs);
    let (beta, rhs) = normalize_factors(&operator.rhs);
    let mut shifts: Vec<Scalar> = lhs.iter().map(|f| f.constant.clone()).collect();
    let normalized = match shifts.iter().position(Zero::is_zero) {
        Some(i) => {
            shifts.remove(i);
            true
        }
        None => false,
    };
    Ok(FuchsianReport {
        p,
        upper: rhs.iter().map(|f| f.constant.clone()).collect(),
        lower: shifts.into_iter().map(|s| s + Scalar::one()).collect(),
        scale: beta / alpha,
        normalized,
        operator,
    })
}

/// Coefficient recurrence of `sum c_m x^m` annihilated by `A(th) - x B(th)`:
/// `c_{m+1} = B(m) / A(m+1) c_m`, `c_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRecurrence {
    /// Coefficients of `A`, lowest degree first.
    pub a: Vec<Scalar>,
    /// Coefficients of `B`, lowest degree first.
    pub b: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("A(m + 1) vanishes at m = {0}")]
pub struct Obstruction(pub u64);

fn eval(coeffs: &[Scalar], t: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * t + c)
}

fn dense(slice: &BTreeMap<Vec<u32>, Scalar>) -> Vec<Scalar> {
    let deg = slice.keys().map(|k| k[0] as usize).max().unwrap_or(0);
    let mut v = vec![Scalar::zero(); deg + 1];
    for (k, c) in slice {
        v[k[0] as usize] = c.clone();
    }
    v
}

pub fn series_recurrence(op: &ThetaOp) -> Result<SeriesRecurrence, ReductionError> {
    if op.vars() != 1 {
        return Err(ReductionError::NotOneVariable(op.vars()));
    }
    if op.terms().any(|((x, _), _)| x[0] != 0 && x[0] != 1) {
        return Err(ReductionError::NotTwoSlack);
    }
    let a = dense(&op.slice(&[0]));
    let b: Vec<Scalar> = dense(&op.slice(&[1])).into_iter().map(|c| -c).collect();
    Ok(SeriesRecurrence { a, b })
}

impl SeriesRecurrence {
    /// `c_{m+1} / c_m`.
    pub fn ratio(&self, m: u64) -> Result<Scalar, Obstruction> {
        let mq = Scalar::from_integer(BigInt::from(m));
        let den = eval(&self.a, &(&mq + Scalar::one()));
        if den.is_zero() {
            return Err(Obstruction(m));
        }
        Ok(eval(&self.b, &mq) / den)
    }

    /// `c_0 .. c_{count-1}`.
    pub fn coefficients(&self, count: usize) -> Result<Vec<Scalar>, Obstruction> {
        let mut out = Vec::with_capacity(count);
        let mut c = Scalar::one();
        for m in 0..count as u64 {
            out.push(c.clone());
            if (m as usize) + 1 < count {
                c *= self.ratio(m)?;
            }
        }
        Ok(out)
    }

    /// `A(0) = 0`, so the series starting at `x^0` is a formal solution.
    pub fn starts_at_zero(&self) -> bool {
        eval(&self.a, &Scalar::zero()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn zero_lattice_has_no_operators() {
        let r = reduce(&IntMatrix::identity(2), &[int(1), int(2)], &[]).unwrap();
        assert!(r.operators.is_empty());
        assert_eq!(r.quotient_dim(), 0);
        assert_eq!(fuchsian_l1(&r).unwrap_err(), ReductionError::NotOneVariable(0));
    }

    #[test]
    fn binomial_case() {
        // chi = (1 1), pi = (1, -1): (th + L1) - x(-th + L2)
        let chi = mat(&[&[1, 1]]);
        let r = reduce(&chi, &[ratio(2, 3)], &[vec![1, -1]]).unwrap();
        assert_eq!(r.shift, vec![int(0), ratio(2, 3)]);
        let op = &r.operators[0];
        assert_eq!(op.to_string(), "(th + 0) + x*(th - 2/3)");
        let f = fuchsian_l1(&r).unwrap();
        assert_eq!(f.p, 1);
        assert_eq!(f.upper, vec![ratio(-2, 3)]);
        assert!(f.lower.is_empty());
        assert_eq!(f.scale, int(-1));
        // (1 + x)^(2/3)
        let rec = series_recurrence(&op.op).unwrap();
        let coeffs = rec.coefficients(6).unwrap();
        let mut binom = Scalar::one();
        for (m, c) in coeffs.iter().enumerate() {
            assert_eq!(*c, binom);
            binom = binom * (ratio(2, 3) - int(m as i64)) / int(m as i64 + 1);
        }
    }

    #[test]
    fn raw_parameters_without_zero_factor() {
        let chi = mat(&[&[1, 1]]);
        let r = reduce_with_shift(&chi, &[int(1)], vec![int(1), int(0)], &[vec![1, -1]]).unwrap();
        let f = fuchsian_l1(&r).unwrap();
        assert!(!f.normalized);
        assert_eq!(f.lower, vec![int(2)]);
        assert!(f.note().is_some());
    }

    #[test]
    fn bad_shift_rejected() {
        let chi = mat(&[&[1, 1]]);
        assert_eq!(
            reduce_with_shift(&chi, &[int(1)], vec![int(0), int(0)], &[]).unwrap_err(),
            ReductionError::BadShift
        );
    }

    #[test]
    fn theta_commutation() {
        let th = LinearForm { coeffs: vec![int(1)], constant: int(0) }.to_theta();
        let x = ThetaOp::one(1).shift_x(&[1]);
        // th x = x (th + 1)
        assert_eq!(th.multiply(&x).to_string(), "x*th + x");
        // action on x^3: th x^3 = 3 x^3
        assert_eq!(th.apply_monomial(&[3]).get(&vec![3]), Some(&int(3)));
    }

    #[test]
    fn resonance_obstruction() {
        // A = th + 2: A(m + 1) never vanishes for m >= 0
        let mut op = ThetaOp::zero(1);
        op.add_term(vec![0], vec![1], int(1));
        op.add_term(vec![0], vec![0], int(2));
        op.add_term(vec![1], vec![0], int(-1));
        let rec = series_recurrence(&op).unwrap();
        assert!(rec.coefficients(10).is_ok());
        assert!(!rec.starts_at_zero());
        // A = th - 3: obstruction at m = 2
        let mut op = ThetaOp::zero(1);
        op.add_term(vec![0], vec![1], int(1));
        op.add_term(vec![0], vec![0], int(-3));
        op.add_term(vec![1], vec![0], int(-1));
        assert_eq!(series_recurrence(&op).unwrap().coefficients(10), Err(Obstruction(2)));
        let mut bad = ThetaOp::zero(1);
        bad.add_term(vec![2], vec![0], int(1));
        assert_eq!(series_recurrence(&bad), Err(ReductionError::NotTwoSlack));
    }
}
