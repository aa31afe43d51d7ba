//! Injective and projective tensor cones of polyhedral spaces, tensor maps and
//! nuclearity.

use num_traits::{Signed, Zero};

use crate::cone::{Certificate, Cone, ConeRep};
use crate::error::{Error, Result};
use crate::kernel::dd::polytope_facets_through_unit;
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{dot, kron, Rational, Vector};
use crate::maps::AouMap;
use crate::space::{lin_space, linf, AouSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TensorKind {
    /// Cut out by the products `f⊗g` of extreme states.
    Epsilon,
    /// Generated by the products `v⊗w` of extreme rays.
    Pi,
}

impl TensorKind {
    pub fn name(self) -> &'static str {
        match self {
            TensorKind::Epsilon => "epsilon",
            TensorKind::Pi => "pi",
        }
    }
}

/// `z = Σ c_ij e_i⊗f_j`, stored as a `dim(left) × dim(right)` matrix.
#[derive(Clone, Debug)]
pub struct TensorElement {
    pub left: AouSpace,
    pub right: AouSpace,
    pub coeffs: Matrix,
}

impl TensorElement {
    pub fn new(left: AouSpace, right: AouSpace, coeffs: Matrix) -> Result<Self> {
        if coeffs.rows() != left.dim {
            return Err(Error::DimensionMismatch {
                expected: left.dim,
                found: coeffs.rows(),
            });
        }
        if coeffs.cols() != right.dim {
            return Err(Error::DimensionMismatch {
                expected: right.dim,
                found: coeffs.cols(),
            });
        }
        Ok(TensorElement { left, right, coeffs })
    }

    pub fn simple(left: AouSpace, right: AouSpace, v: &[Rational], w: &[Rational]) -> Result<Self> {
        let coeffs = Matrix::new(left.dim, right.dim, kron(v, w))?;
        TensorElement::new(left, right, coeffs)
    }

    pub fn from_flat(left: AouSpace, right: AouSpace, flat: Vector) -> Result<Self> {
        let coeffs = Matrix::new(left.dim, right.dim, flat)?;
        TensorElement::new(left, right, coeffs)
    }

    /// Coordinates in the product basis, index `i·dim(right) + j`.
    pub fn flat(&self) -> Vector {
        self.coeffs.entries().to_vec()
    }

    /// `⟨f⊗g, z⟩ = fᵀ·Z·g`.
    pub fn pair(&self, f: &[Rational], g: &[Rational]) -> Result<Rational> {
        Ok(dot(f, &self.coeffs.mul_vec(g)?))
    }
}

#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub left: AouSpace,
    pub right: AouSpace,
    pub kind: TensorKind,
    pub realized: AouSpace,
}

impl TensorSpace {
    pub fn element(&self, flat: Vector) -> Result<TensorElement> {
        TensorElement::from_flat(self.left.clone(), self.right.clone(), flat)
    }
}

fn require_polyhedral(space: &AouSpace, what: &'static str) -> Result<()> {
    match space.cone.rep() {
        ConeRep::SymPsd { .. } => Err(Error::NonPolyhedral(what)),
        _ => Ok(()),
    }
}

/// The injective or projective tensor product with unit `e_V⊗e_W`.
pub fn tensor_space(v: &AouSpace, w: &AouSpace, kind: TensorKind) -> Result<TensorSpace> {
    require_polyhedral(v, "tensor_space")?;
    require_polyhedral(w, "tensor_space")?;
    let dim = v.dim * w.dim;
    let cone = match kind {
        TensorKind::Epsilon => {
            let fs = v.extreme_states()?;
            let gs = w.extreme_states()?;
            let mut rows = Vec::with_capacity(fs.len() * gs.len());
            for f in &fs {
                for g in &gs {
                    rows.push(kron(f, g));
                }
            }
            Cone::from_inequalities(dim, rows)?
        }
        TensorKind::Pi => {
            let rs = v.cone.extreme_rays()?;
            let ss = w.cone.extreme_rays()?;
            let mut gens = Vec::with_capacity(rs.len() * ss.len());
            for r in &rs {
                for s in &ss {
                    gens.push(kron(r, s));
                }
            }
            Cone::from_generators(dim, gens)?
        }
    };
    let label = format!("{} ⊗_{} {}", v.label, kind.name(), w.label);
    let realized = AouSpace::new(label, cone, kron(&v.unit, &w.unit))?;
    Ok(TensorSpace {
        left: v.clone(),
        right: w.clone(),
        kind,
        realized,
    })
}

/// Membership of `z` in the realized tensor cone.
pub fn member_tensor(ts: &TensorSpace, z: &TensorElement) -> Result<Certificate> {
    if z.left.dim != ts.left.dim {
        return Err(Error::DimensionMismatch {
            expected: ts.left.dim,
            found: z.left.dim,
        });
    }
    if z.right.dim != ts.right.dim {
        return Err(Error::DimensionMismatch {
            expected: ts.right.dim,
            found: z.right.dim,
        });
    }
    ts.realized.cone.member(&z.flat())
}

/// `S⊗T` between tensor spaces of the same kind. Positivity is re-checked on
/// the realized cones.
pub fn tensor_map(s: &AouMap, t: &AouMap, kind: TensorKind) -> Result<AouMap> {
    for m in [s, t] {
        if !m.is_unital() {
            return Err(Error::NotUnital);
        }
        if !m.is_positive()? {
            return Err(Error::NotPositive);
        }
    }
    let source = tensor_space(&s.source, &t.source, kind)?;
    let target = tensor_space(&s.target, &t.target, kind)?;
    let map = AouMap::new(source.realized, target.realized, s.matrix.kron(&t.matrix))?;
    if !map.is_unital() || !map.is_positive()? {
        return Err(Error::invariant("tensor product of unital positive maps is not unital positive"));
    }
    Ok(map)
}

/// Extreme points of the dual unit ball: normals of the facets of `[-e, e]`.
pub fn dual_ball_extreme_points(space: &AouSpace) -> Result<Vec<Vector>> {
    polytope_facets_through_unit(&space.unit_ball_vertices()?, space.dim)
}

/// `max |⟨φ⊗ψ, z⟩|` over extreme points of the two dual unit balls.
pub fn injective_banach_norm(z: &TensorElement) -> Result<Rational> {
    let fs = dual_ball_extreme_points(&z.left)?;
    let gs = dual_ball_extreme_points(&z.right)?;
    let mut best = Rational::zero();
    for g in &gs {
        let zg = z.coeffs.mul_vec(g)?;
        for f in &fs {
            let x = dot(f, &zg).abs();
            if x > best {
                best = x;
            }
        }
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct NuclearPairReport {
    pub nuclear: bool,
    /// Extreme ray of the ε-cone outside the π-cone.
    pub witness: Option<TensorElement>,
    /// Its π non-membership certificate.
    pub certificate: Option<Certificate>,
}

impl NuclearPairReport {
    pub fn verify(&self) -> Result<bool> {
        match (&self.witness, &self.certificate) {
            (None, None) => Ok(self.nuclear),
            (Some(z), Some(c)) => {
                let eps = tensor_space(&z.left, &z.right, TensorKind::Epsilon)?;
                let pi = tensor_space(&z.left, &z.right, TensorKind::Pi)?;
                let flat = z.flat();
                Ok(!self.nuclear
                    && !c.is_member()
                    && c.verify(&pi.realized.cone, &flat)
                    && eps.realized.cone.member(&flat)?.is_member())
            }
            _ => Ok(false),
        }
    }
}

/// Decides `(V⊗_εW)⁺ = (V⊗_πW)⁺` by testing every extreme ray of the
/// ε-cone for π-membership.
pub fn is_nuclear_pairwise(v: &AouSpace, w: &AouSpace) -> Result<NuclearPairReport> {
    let eps = tensor_space(v, w, TensorKind::Epsilon)?;
    let pi = tensor_space(v, w, TensorKind::Pi)?;
    if !eps.realized.cone.contains_cone(&pi.realized.cone)? {
        return Err(Error::invariant("projective cone escapes the injective cone"));
    }
    for z in eps.realized.cone.extreme_rays()? {
        let cert = pi.realized.cone.member(&z)?;
        if !cert.is_member() {
            return Ok(NuclearPairReport {
                nuclear: false,
                witness: Some(eps.element(z)?),
                certificate: Some(cert),
            });
        }
    }
    Ok(NuclearPairReport {
        nuclear: true,
        witness: None,
        certificate: None,
    })
}

/// Partner spaces used to cross-check [`is_nuclear_fd`].
pub fn nuclear_battery() -> Vec<AouSpace> {
    let mut out: Vec<AouSpace> = (1..=3).map(linf).collect();
    out.extend((1..=2).map(|n| lin_space(n).expect("small lin space")));
    out
}

#[derive(Clone, Debug)]
pub struct NuclearReport {
    pub nuclear: bool,
    pub simplicial: bool,
    /// `(partner label, pairwise verdict)` over [`nuclear_battery`].
    pub battery: Vec<(String, bool)>,
    /// First failing pair, when any.
    pub witness: Option<NuclearPairReport>,
}

/// Nuclearity of a finite-dimensional space as simpliciality of its cone,
/// checked against the pairwise oracle on every battery partner.
pub fn is_nuclear_fd(v: &AouSpace) -> Result<NuclearReport> {
    require_polyhedral(v, "is_nuclear_fd")?;
    let simplicial = v.cone.is_simplicial()?;
    let mut battery = Vec::new();
    let mut witness = None;
    for partner in nuclear_battery() {
        let r = is_nuclear_pairwise(v, &partner)?;
        battery.push((partner.label.clone(), r.nuclear));
        if !r.nuclear && witness.is_none() {
            witness = Some(r);
        }
    }
    let pairwise = witness.is_none();
    if pairwise != simplicial {
        return Err(Error::invariant(format!(
            "simpliciality ({simplicial}) disagrees with the pairwise oracle ({pairwise}) for {}",
            v.label
        )));
    }
    Ok(NuclearReport {
        nuclear: simplicial,
        simplicial,
        battery,
        witness,
    })
}

/// Largest `|z_ij|`; the ε order norm on `ℓ∞_m ⊗ ℓ∞_n`.
pub fn max_entry(z: &TensorElement) -> Rational {
    z.coeffs.max_abs_entry()
}
