//! Exact positive semidefiniteness via symmetric Gaussian elimination.

use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::rational::{dot, Rational, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdCertificate {
    /// `M = L·diag(d)·Lᵀ` with `L` unit lower triangular and `d >= 0`.
    Factors { lower: Matrix, diag: Vector },
    /// `xᵀ·M·x < 0`.
    Negative { x: Vector, value: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsdDecision {
    pub psd: bool,
    pub certificate: PsdCertificate,
}

pub fn quadratic_form(m: &Matrix, x: &[Rational]) -> Rational {
    let mx = m.mul_vec(x).expect("square matrix of matching size");
    dot(x, &mx)
}

impl PsdDecision {
    /// Re-checks the certificate against `m` by substitution.
    pub fn verify(&self, m: &Matrix) -> bool {
        match (&self.certificate, self.psd) {
            (PsdCertificate::Factors { lower, diag }, true) => {
                let n = m.rows();
                if lower.rows() != n || lower.cols() != n || diag.len() != n {
                    return false;
                }
                if diag.iter().any(|d| d.is_negative()) {
                    return false;
                }
                for i in 0..n {
                    if !lower[(i, i)].is_one() || (i + 1..n).any(|j| !lower[(i, j)].is_zero()) {
                        return false;
                    }
                }
                let mut d = Matrix::zeros(n, n);
                for i in 0..n {
                    d[(i, i)] = diag[i].clone();
                }
                let rebuilt = lower
                    .mul(&d)
                    .and_then(|ld| ld.mul(&lower.transpose()))
                    .expect("square");
                rebuilt == *m
            }
            (PsdCertificate::Negative { x, value }, false) => {
                let v = quadratic_form(m, x);
                v == *value && v.is_negative()
            }
            _ => false,
        }
    }
}

/// Decides `m ⪰ 0` exactly, returning either factors or a negative direction.
pub fn ldlt_psd(m: &Matrix) -> Result<PsdDecision> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows();
    let mut s = m.clone();
    let mut lower = Matrix::identity(n);
    let mut diag = vec![Rational::zero(); n];
    let mut pivots: Vec<usize> = Vec::new();
    for k in 0..n {
        let pivot = s[(k, k)].clone();
        if pivot.is_negative() {
            let mut y = vec![Rational::zero(); n];
            y[k] = Rational::one();
            return Ok(negative(m, &pivots, y));
        }
        if pivot.is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !s[(k, j)].is_zero()) {
                let skj = s[(k, j)].clone();
                let sjj = s[(j, j)].clone();
                let mut y = vec![Rational::zero(); n];
                if sjj.is_negative() {
                    y[j] = Rational::one();
                } else if sjj.is_zero() {
                    // (e_k - sign·e_j)ᵀ S (e_k - sign·e_j) = -2|s_kj|
                    y[k] = Rational::one();
                    y[j] = if skj.is_positive() { -Rational::one() } else { Rational::one() };
                } else {
                    // value = -s_jj·s_kj²
                    y[k] = sjj;
                    y[j] = -skj;
                }
                return Ok(negative(m, &pivots, y));
            }
            continue;
        }
        diag[k] = pivot.clone();
        pivots.push(k);
        for i in k + 1..n {
            if s[(i, k)].is_zero() {
                continue;
            }
            let l = &s[(i, k)] / &pivot;
            for j in k + 1..=i {
                let x = &l * &s[(k, j)];
                s[(i, j)] -= x;
                if i != j {
                    s[(j, i)] = s[(i, j)].clone();
                }
            }
            lower[(i, k)] = l;
        }
        for i in k + 1..n {
            s[(i, k)] = Rational::zero();
            s[(k, i)] = Rational::zero();
        }
    }
    Ok(PsdDecision {
        psd: true,
        certificate: PsdCertificate::Factors { lower, diag },
    })
}

/// Lifts a direction `y` in the Schur complement of the positive pivots to a
/// direction for `m` with the same quadratic value.
fn negative(m: &Matrix, pivots: &[usize], y: Vector) -> PsdDecision {
    let n = m.rows();
    let mut x = y;
    let k = pivots.len();
    if k > 0 {
        // x_P = -A⁻¹·B·y with A the positive definite block on the pivots.
        let mut a = Matrix::zeros(k, k);
        for (r, &i) in pivots.iter().enumerate() {
            for (c, &j) in pivots.iter().enumerate() {
                a[(r, c)] = m[(i, j)].clone();
            }
        }
        let rhs: Vector = pivots
            .iter()
            .map(|&i| {
                -(0..n)
                    .filter(|j| !pivots.contains(j))
                    .map(|j| &m[(i, j)] * &x[j])
                    .sum::<Rational>()
            })
            .collect();
        if let Ok(Some(head)) = a.solve(&rhs) {
            for (r, &i) in pivots.iter().enumerate() {
                x[i] = head[r].clone();
            }
        }
    }
    let value = quadratic_form(m, &x);
    PsdDecision {
        psd: false,
        certificate: PsdCertificate::Negative { x, value },
    }
}
