//! Exact strict feasibility of homogeneous linear systems by
//! Fourier–Motzkin elimination.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::rational_nullspace;
use crate::scalar::Scalar;

/// Finds `w` with `w . v = 0` for every `eq` row and `w . v > 0` for every
/// `pos` row, or returns `None` when no such `w` exists.
pub fn strict_feasible(eq_rows: &[Vec<BigInt>], pos_rows: &[Vec<BigInt>]) -> Option<Vec<Scalar>> {
    let n = eq_rows.first().or(pos_rows.first()).map_or(0, Vec::len);
    let to_q = |v: &Vec<BigInt>| v.iter().cloned().map(Scalar::from_integer).collect::<Vec<_>>();

    // parametrize the equality subspace: w = B u
    let basis = rational_nullspace(eq_rows.iter().map(to_q).collect(), n);
    let dim = basis.len();
    let system: Vec<Vec<Scalar>> = pos_rows
        .iter()
        .map(|v| {
            let vq = to_q(v);
            basis
                .iter()
                .map(|b| b.iter().zip(&vq).fold(Scalar::zero(), |acc, (x, y)| acc + x * y))
                .collect()
        })
        .collect();

    let u = solve_strict(system, dim)?;
    let w: Vec<Scalar> = (0..n)
        .map(|i| basis.iter().zip(&u).fold(Scalar::zero(), |acc, (b, x)| acc + &b[i] * x))
        .collect();
    debug_assert!(check(&w, eq_rows, pos_rows));
    Some(w)
}

fn dot(a: &[Scalar], b: &[BigInt]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * Scalar::from_integer(y.clone()))
}

pub(crate) fn check(w: &[Scalar], eq_rows: &[Vec<BigInt>], pos_rows: &[Vec<BigInt>]) -> bool {
    eq_rows.iter().all(|v| dot(w, v).is_zero()) && pos_rows.iter().all(|v| dot(w, v).is_positive())
}

/// Scales a row to a primitive integer-like representative so duplicates
/// collapse.
fn normalize(row: Vec<Scalar>) -> Vec<Scalar> {
    let Some(first) = row.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else { return row };
    row.into_iter().map(|x| x / &first).collect()
}

/// Solves `A u > 0` (componentwise, strict) for `u` of length `dim`.
fn solve_strict(system: Vec<Vec<Scalar>>, dim: usize) -> Option<Vec<Scalar>> {
    // stages[k] holds the constraints still involving variables 0..dim-k
    let mut stages: Vec<Vec<Vec<Scalar>>> = Vec::with_capacity(dim + 1);
    let mut current: Vec<Vec<Scalar>> = system.into_iter().map(normalize).collect();
    current.sort();
    current.dedup();
    for var in (0..dim).rev() {
        stages.push(current.clone());
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in current {
            if row[var].is_positive() {
                pos.push(row);
            } else if row[var].is_negative() {
                neg.push(row);
            } else {
                rest.push(row);
            }
        }
        for p in &pos {
            for q in &neg {
                let (a, b) = (-q[var].clone(), p[var].clone());
                let combined: Vec<Scalar> = p.iter().zip(q).map(|(x, y)| x * &a + y * &b).collect();
                rest.push(normalize(combined));
            }
        }
        rest.sort();
        rest.dedup();
        current = rest;
    }
    // all variables gone: any remaining row reads 0 > 0
    if current.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return None;
    }

    // back substitution, variable 0 first
    let mut u = vec![Scalar::zero(); dim];
    for (var, rows) in (0..dim).zip(stages.iter().rev()) {
        let mut lower: Option<Scalar> = None;
        let mut upper: Option<Scalar> = None;
        for row in rows {
            let coeff = &row[var];
            if coeff.is_zero() {
                continue;
            }
            let partial = (0..var).fold(Scalar::zero(), |acc, k| acc + &row[k] * &u[k]);
            let bound = -partial / coeff;
            if coeff.is_positive() {
                lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                upper = Some(upper.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        u[var] = match (lower, upper) {
            (Some(l), Some(h)) => (l + h) / Scalar::from_integer(BigInt::from(2)),
            (Some(l), None) => l + Scalar::one(),
            (None, Some(h)) => h - Scalar::one(),
            (None, None) => Scalar::zero(),
        };
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    #[test]
    fn simple_witness() {
        let w = strict_feasible(&[v(&[1, 0])], &[v(&[0, 1])]).unwrap();
        assert_eq!(w, vec![int(0), int(1)]);
    }

    #[test]
    fn forced_zero_is_infeasible() {
        assert!(strict_feasible(&[v(&[1, 0]), v(&[0, 1])], &[v(&[1, 1])]).is_none());
    }

    #[test]
    fn witness_orthogonal_to_all_ones() {
        let eq = [v(&[1, 1, 1])];
        let pos = [v(&[1, 0, 0]), v(&[0, 1, 0])];
        let w = strict_feasible(&eq, &pos).unwrap();
        assert!(check(&w, &eq, &pos));
    }

    #[test]
    fn opposite_rays_infeasible() {
        assert!(strict_feasible(&[], &[v(&[1, 0]), v(&[-1, 0])]).is_none());
        assert!(strict_feasible(&[], &[v(&[1, 2]), v(&[-1, -1]), v(&[0, -1])]).is_none());
        assert!(strict_feasible(&[], &[v(&[1, 2]), v(&[-1, -1])]).is_some());
    }

    #[test]
    fn empty_system_is_feasible() {
        assert!(strict_feasible(&[v(&[1, 1])], &[]).is_some());
    }
}
