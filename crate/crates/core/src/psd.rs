//! Oracles for tensor cones of real symmetric matrix spaces `M_a ⊗ M_b`,
//! with elements written as `ab × ab` matrices indexed by `i·b + k`.
//!
//! The ε-cone is block positivity, `(x⊗y)ᵀ Z (x⊗y) >= 0`; the π-cone is
//! generated by `A⊗B` with `A, B ⪰ 0`. Neither has a finite description, so
//! membership is three-valued: sound certificates either way, else undecided.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::ldlt::{ldlt_psd, quadratic_form, PsdCertificate, PsdDecision};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{kron, Rational, Vector};

/// Grid radius for product-vector counterexample search.
pub const GRID_RADIUS: i64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    CertifiedMember,
    CertifiedNonMember,
    Undecided,
}

impl Membership {
    pub fn name(self) -> &'static str {
        match self {
            Membership::CertifiedMember => "certified_member",
            Membership::CertifiedNonMember => "certified_non_member",
            Membership::Undecided => "undecided",
        }
    }
}

/// `Z^Γ[(i,k),(j,l)] = Z[(i,l),(j,k)]`, transposing the right factor.
pub fn partial_transpose(z: &Matrix, a: usize, b: usize) -> Result<Matrix> {
    check_shape(z, a, b)?;
    let mut out = Matrix::zeros(a * b, a * b);
    for i in 0..a {
        for k in 0..b {
            for j in 0..a {
                for l in 0..b {
                    out[(i * b + k, j * b + l)] = z[(i * b + l, j * b + k)].clone();
                }
            }
        }
    }
    Ok(out)
}

fn check_shape(z: &Matrix, a: usize, b: usize) -> Result<()> {
    if z.rows() != a * b || z.cols() != a * b {
        return Err(Error::DimensionMismatch {
            expected: a * b,
            found: z.rows(),
        });
    }
    if !z.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// Monomial `x_i x_j y_k y_l` with `i <= j`, `k <= l`.
pub type Monomial = (usize, usize, usize, usize);

/// Coefficients of the biquadratic form `(x⊗y)ᵀ Z (x⊗y)`.
pub fn biquadratic(z: &Matrix, a: usize, b: usize) -> BTreeMap<Monomial, Rational> {
    let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for i in 0..a {
        for k in 0..b {
            for j in 0..a {
                for l in 0..b {
                    let c = &z[(i * b + k, j * b + l)];
                    if c.is_zero() {
                        continue;
                    }
                    let key = (i.min(j), i.max(j), k.min(l), k.max(l));
                    *out.entry(key).or_insert_with(Rational::zero) += c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Coefficients of `(xᵀy)² = Σ_ij x_i y_i x_j y_j`.
pub fn inner_product_square(n: usize) -> BTreeMap<Monomial, Rational> {
    let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let key = (i.min(j), i.max(j), i.min(j), i.max(j));
            *out.entry(key).or_insert_with(Rational::zero) += Rational::from_integer(1.into());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsEvidence {
    /// The form equals `(xᵀy)²` coefficient by coefficient.
    SquareIdentity,
    /// A matrix with the same form on product vectors is PSD.
    PsdRepresentative { which: &'static str, decision: PsdDecision },
    /// `(x⊗y)ᵀ Z (x⊗y) = value < 0`.
    ProductPoint { x: Vector, y: Vector, value: Rational },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsCheck {
    pub verdict: Membership,
    pub evidence: EpsEvidence,
}

impl EpsCheck {
    pub fn verify(&self, z: &Matrix, a: usize, b: usize) -> Result<bool> {
        Ok(match (&self.evidence, self.verdict) {
            (EpsEvidence::SquareIdentity, Membership::CertifiedMember) => {
                a == b && biquadratic(z, a, b) == inner_product_square(a)
            }
            (EpsEvidence::PsdRepresentative { which, decision }, Membership::CertifiedMember) => {
                decision.psd && decision.verify(&representative(z, a, b, which)?)
            }
            (EpsEvidence::ProductPoint { x, y, value }, Membership::CertifiedNonMember) => {
                let p = kron(x, y);
                value.is_negative() && quadratic_form(z, &p) == *value
            }
            (EpsEvidence::None, Membership::Undecided) => true,
            _ => false,
        })
    }
}

fn representative(z: &Matrix, a: usize, b: usize, which: &str) -> Result<Matrix> {
    match which {
        "matrix" => Ok(z.clone()),
        "partial_transpose" => partial_transpose(z, a, b),
        "symmetrized" => {
            let g = partial_transpose(z, a, b)?;
            Ok(z.add(&g)?.scale(&Rational::new(1.into(), 2.into())))
        }
        _ => Err(Error::invariant("unknown representative")),
    }
}

/// Block positivity of `Z`: the square identity, then PSD representatives of
/// the form on real product vectors, then a grid search for a negative value.
pub fn block_positivity(z: &Matrix, a: usize, b: usize) -> Result<EpsCheck> {
    check_shape(z, a, b)?;
    if a == b && biquadratic(z, a, b) == inner_product_square(a) {
        return Ok(EpsCheck {
            verdict: Membership::CertifiedMember,
            evidence: EpsEvidence::SquareIdentity,
        });
    }
    for which in ["matrix", "partial_transpose", "symmetrized"] {
        let decision = ldlt_psd(&representative(z, a, b, which)?)?;
        if decision.psd {
            return Ok(EpsCheck {
                verdict: Membership::CertifiedMember,
                evidence: EpsEvidence::PsdRepresentative { which, decision },
            });
        }
    }
    let xs = grid(a);
    let ys = grid(b);
    for x in &xs {
        for y in &ys {
            let value = quadratic_form(z, &kron(x, y));
            if value.is_negative() {
                return Ok(EpsCheck {
                    verdict: Membership::CertifiedNonMember,
                    evidence: EpsEvidence::ProductPoint {
                        x: x.clone(),
                        y: y.clone(),
                        value,
                    },
                });
            }
        }
    }
    Ok(EpsCheck {
        verdict: Membership::Undecided,
        evidence: EpsEvidence::None,
    })
}

/// Nonzero integer vectors with entries in `[-GRID_RADIUS, GRID_RADIUS]`.
fn grid(n: usize) -> Vec<Vector> {
    let side = (2 * GRID_RADIUS + 1) as usize;
    let mut out = Vec::new();
    for mut code in 0..side.pow(n as u32) {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(Rational::from_integer(((code % side) as i64 - GRID_RADIUS).into()));
            code /= side;
        }
        if v.iter().any(|c| !c.is_zero()) {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiEvidence {
    /// `Z = Σ d_(i,k) (e_i e_iᵀ)⊗(e_k e_kᵀ)` with `d >= 0`.
    Diagonal(Vector),
    /// `Z` itself is not PSD, and every `A⊗B` is.
    NotPsd { x: Vector, value: Rational },
    /// `W = (xxᵀ)^Γ` is nonnegative on every `A⊗B`, since
    /// `⟨W, A⊗B⟩ = xᵀ(A⊗Bᵀ)x`, while `⟨W, Z⟩ = xᵀ Z^Γ x = value < 0`.
    PartialTranspose { transposed: Matrix, x: Vector, functional: Matrix, value: Rational },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiCheck {
    pub verdict: Membership,
    pub evidence: PiEvidence,
}

impl PiCheck {
    pub fn verify(&self, z: &Matrix, a: usize, b: usize) -> Result<bool> {
        Ok(match (&self.evidence, self.verdict) {
            (PiEvidence::Diagonal(d), Membership::CertifiedMember) => {
                let n = a * b;
                let mut rebuilt = Matrix::zeros(n, n);
                for (i, c) in d.iter().enumerate() {
                    rebuilt[(i, i)] = c.clone();
                }
                d.len() == n && d.iter().all(|c| !c.is_negative()) && rebuilt == *z
            }
            (PiEvidence::NotPsd { x, value }, Membership::CertifiedNonMember) => {
                value.is_negative() && quadratic_form(z, x) == *value
            }
            (
                PiEvidence::PartialTranspose {
                    transposed,
                    x,
                    functional,
                    value,
                },
                Membership::CertifiedNonMember,
            ) => {
                let xx = outer(x);
                *transposed == partial_transpose(z, a, b)?
                    && *functional == partial_transpose(&xx, a, b)?
                    && value.is_negative()
                    && frobenius(functional, z) == *value
                    && quadratic_form(transposed, x) == *value
            }
            (PiEvidence::None, Membership::Undecided) => true,
            _ => false,
        })
    }
}

fn outer(x: &[Rational]) -> Matrix {
    let n = x.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = &x[i] * &x[j];
        }
    }
    m
}

/// `⟨A, B⟩ = Σ a_ij b_ij`.
pub fn frobenius(a: &Matrix, b: &Matrix) -> Rational {
    a.entries().iter().zip(b.entries()).map(|(x, y)| x * y).sum()
}

/// Projective-cone membership of `Z`.
pub fn pi_membership(z: &Matrix, a: usize, b: usize) -> Result<PiCheck> {
    check_shape(z, a, b)?;
    let n = a * b;
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || z[(i, j)].is_zero()));
    if diagonal && (0..n).all(|i| !z[(i, i)].is_negative()) {
        return Ok(PiCheck {
            verdict: Membership::CertifiedMember,
            evidence: PiEvidence::Diagonal((0..n).map(|i| z[(i, i)].clone()).collect()),
        });
    }
    if let PsdCertificate::Negative { x, value } = ldlt_psd(z)?.certificate {
        return Ok(PiCheck {
            verdict: Membership::CertifiedNonMember,
            evidence: PiEvidence::NotPsd { x, value },
        });
    }
    let transposed = partial_transpose(z, a, b)?;
    if let PsdCertificate::Negative { x, value } = ldlt_psd(&transposed)?.certificate {
        let functional = partial_transpose(&outer(&x), a, b)?;
        return Ok(PiCheck {
            verdict: Membership::CertifiedNonMember,
            evidence: PiEvidence::PartialTranspose {
                transposed,
                x,
                functional,
                value,
            },
        });
    }
    Ok(PiCheck {
        verdict: Membership::Undecided,
        evidence: PiEvidence::None,
    })
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub name: &'static str,
    pub element: Matrix,
    pub psd: PsdDecision,
    pub pi: PiCheck,
    pub epsilon: EpsCheck,
}

impl WitnessReport {
    pub fn verify(&self) -> Result<bool> {
        Ok(self.psd.verify(&self.element)
            && self.pi.verify(&self.element, 2, 2)?
            && self.epsilon.verify(&self.element, 2, 2)?)
    }
}

pub fn bell() -> Matrix {
    Matrix::from_i64(4, 4, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1])
}

pub fn swap() -> Matrix {
    Matrix::from_i64(4, 4, &[1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1])
}

pub fn witness_report(name: &'static str, z: &Matrix) -> Result<WitnessReport> {
    Ok(WitnessReport {
        name,
        element: z.clone(),
        psd: ldlt_psd(z)?,
        pi: pi_membership(z, 2, 2)?,
        epsilon: block_positivity(z, 2, 2)?,
    })
}

/// Bell, Swap and the identity in `M₂ ⊗ M₂`.
pub fn psd_example_suite() -> Result<Vec<WitnessReport>> {
    let reports = vec![
        witness_report("bell", &bell())?,
        witness_report("swap", &swap())?,
        witness_report("identity", &Matrix::identity(4))?,
    ];
    for r in &reports {
        if !r.verify()? {
            return Err(Error::invariant(format!("certificate for {} does not re-verify", r.name)));
        }
    }
    Ok(reports)
}
