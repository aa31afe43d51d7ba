//! Convex cones in generator or inequality form, plus the PSD cone.
//!
//! Coordinates of the PSD cone on symmetric `n×n` matrices are the upper
//! triangle in row-major order: `(0,0), (0,1), …, (0,n-1), (1,1), …`.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::dd::{self, Facets, Generators};
use crate::kernel::ldlt::{ldlt_psd, PsdCertificate};
use crate::kernel::lp::{LinearProgram, LpStatus, RowSense, VarBound};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{dot, is_zero_vec, neg, primitive, same_ray, Rational, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vector,
    pub strict: bool,
}

impl Halfspace {
    pub fn closed(normal: Vector) -> Self {
        Halfspace { normal, strict: false }
    }

    pub fn strict(normal: Vector) -> Self {
        Halfspace { normal, strict: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeRep {
    /// `cone(generators)`.
    Generators(Vec<Vector>),
    /// `{0} ∪ {x : n·x >= 0 for closed rows, n·x > 0 for strict rows}`.
    Inequalities(Vec<Halfspace>),
    /// Positive semidefinite symmetric `n×n` matrices.
    SymPsd { n: usize },
}

#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    rep: ConeRep,
    generators: OnceLock<Generators>,
    facets: OnceLock<Facets>,
    minimal_facets: OnceLock<Vec<Vector>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rep == other.rep
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub index: usize,
    pub coeff: Rational,
    pub generator: Vector,
}

/// Evidence attached to a membership verdict.
///
/// A member carries a nonnegative decomposition over cone generators (absent
/// for inequality cones, whose rows are the evidence). A non-member carries a
/// functional that is nonnegative on the cone and negative on the query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub decomposition: Option<Vec<Term>>,
    pub witness: Option<Vector>,
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        self.verdict == Verdict::Member
    }

    /// Re-checks the certificate for `v` against `cone` by substitution.
    pub fn verify(&self, cone: &Cone, v: &[Rational]) -> bool {
        if v.len() != cone.dim {
            return false;
        }
        match self.verdict {
            Verdict::Member => match &self.decomposition {
                Some(terms) => {
                    let mut sum = vec![Rational::zero(); cone.dim];
                    for t in terms {
                        if t.coeff.is_negative() || t.generator.len() != cone.dim {
                            return false;
                        }
                        if !cone.is_named_generator(t.index, &t.generator) {
                            return false;
                        }
                        for (s, g) in sum.iter_mut().zip(&t.generator) {
                            *s += &t.coeff * g;
                        }
                    }
                    sum.as_slice() == v
                }
                None => match &cone.rep {
                    ConeRep::Inequalities(rows) => rows.iter().all(|h| {
                        let x = dot(&h.normal, v);
                        if h.strict {
                            x.is_positive() || is_zero_vec(v)
                        } else {
                            !x.is_negative()
                        }
                    }),
                    _ => false,
                },
            },
            Verdict::NonMember => {
                let Some(f) = &self.witness else { return false };
                if f.len() != cone.dim || !dot(f, v).is_negative() {
                    return false;
                }
                cone.is_nonnegative_functional(f)
            }
        }
    }
}

impl Cone {
    /// Zero generators are dropped.
    pub fn from_generators(dim: usize, gens: Vec<Vector>) -> Result<Self> {
        for g in &gens {
            check_len(dim, g)?;
        }
        let gens = gens.into_iter().filter(|g| !is_zero_vec(g)).collect();
        Ok(Self::raw(dim, ConeRep::Generators(gens)))
    }

    pub fn from_halfspaces(dim: usize, rows: Vec<Halfspace>) -> Result<Self> {
        for h in &rows {
            check_len(dim, &h.normal)?;
        }
        Ok(Self::raw(dim, ConeRep::Inequalities(rows)))
    }

    /// Closed cone `{x : row·x >= 0}`.
    pub fn from_inequalities(dim: usize, rows: Vec<Vector>) -> Result<Self> {
        Self::from_halfspaces(dim, rows.into_iter().map(Halfspace::closed).collect())
    }

    pub fn sym_psd(n: usize) -> Self {
        Self::raw(n * (n + 1) / 2, ConeRep::SymPsd { n })
    }

    pub fn orthant(dim: usize) -> Self {
        let gens = (0..dim).map(|i| crate::kernel::rational::unit_vector(dim, i)).collect();
        Self::raw(dim, ConeRep::Generators(gens))
    }

    fn raw(dim: usize, rep: ConeRep) -> Self {
        Cone {
            dim,
            rep,
            generators: OnceLock::new(),
            facets: OnceLock::new(),
            minimal_facets: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rep(&self) -> &ConeRep {
        &self.rep
    }

    pub fn is_polyhedral(&self) -> bool {
        !matches!(self.rep, ConeRep::SymPsd { .. })
    }

    pub fn has_strict(&self) -> bool {
        matches!(&self.rep, ConeRep::Inequalities(rows) if rows.iter().any(|h| h.strict))
    }

    fn require_polyhedral(&self, what: &'static str) -> Result<()> {
        if self.is_polyhedral() {
            Ok(())
        } else {
            Err(Error::NonPolyhedral(what))
        }
    }

    /// Generators of the closure: extreme rays plus a lineality basis.
    /// For a generator cone these are the stored generators as given.
    pub fn generating_set(&self) -> Result<Generators> {
        match &self.rep {
            ConeRep::Generators(g) => Ok(Generators {
                rays: g.clone(),
                lineality: Vec::new(),
            }),
            ConeRep::Inequalities(_) => self.h_generators().cloned(),
            ConeRep::SymPsd { .. } => Err(Error::NonPolyhedral("generating_set")),
        }
    }

    /// All generators of the closure with lineality directions in both signs.
    pub fn spanning_generators(&self) -> Result<Vec<Vector>> {
        let g = self.generating_set()?;
        let mut out = g.rays;
        for l in g.lineality {
            out.push(neg(&l));
            out.push(l);
        }
        Ok(out)
    }

    fn h_generators(&self) -> Result<&Generators> {
        if let Some(g) = self.generators.get() {
            return Ok(g);
        }
        let ConeRep::Inequalities(rows) = &self.rep else {
            return Err(Error::invariant("h_generators on a non-inequality cone"));
        };
        let normals: Vec<Vector> = rows.iter().map(|h| h.normal.clone()).collect();
        let g = dd::generators_from_inequalities(&normals, &[], self.dim)?;
        Ok(self.generators.get_or_init(|| g))
    }

    /// Inequality description of the closure: `facets·x >= 0`, `equalities·x = 0`.
    pub fn facets(&self) -> Result<Facets> {
        match &self.rep {
            ConeRep::Inequalities(rows) => Ok(Facets {
                facets: rows.iter().map(|h| h.normal.clone()).collect(),
                equalities: Vec::new(),
            }),
            ConeRep::Generators(_) => self.v_facets().cloned(),
            ConeRep::SymPsd { .. } => Err(Error::NonPolyhedral("facets")),
        }
    }

    fn v_facets(&self) -> Result<&Facets> {
        if let Some(f) = self.facets.get() {
            return Ok(f);
        }
        let ConeRep::Generators(gens) = &self.rep else {
            return Err(Error::invariant("v_facets on a non-generator cone"));
        };
        let f = dd::inequalities_from_generators(gens, self.dim)?;
        Ok(self.facets.get_or_init(|| f))
    }

    /// Facet rows `h·x >= 0` with equalities expanded into `±` pairs.
    pub fn inequality_rows(&self) -> Result<Vec<Vector>> {
        let f = self.facets()?;
        let mut rows = f.facets;
        for e in f.equalities {
            rows.push(neg(&e));
            rows.push(e);
        }
        Ok(rows)
    }

    /// Extreme rays, primitive integer and sorted descending-lex.
    pub fn extreme_rays(&self) -> Result<Vec<Vector>> {
        match &self.rep {
            ConeRep::Inequalities(_) => {
                let g = self.h_generators()?;
                if !g.lineality.is_empty() {
                    return Err(Error::NonPointed {
                        lineality: g.lineality.clone(),
                    });
                }
                Ok(g.rays.clone())
            }
            ConeRep::Generators(_) => {
                let f = self.v_facets()?;
                let g = dd::generators_from_inequalities(&f.facets, &f.equalities, self.dim)?;
                if !g.lineality.is_empty() {
                    return Err(Error::NonPointed { lineality: g.lineality });
                }
                Ok(g.rays)
            }
            ConeRep::SymPsd { .. } => Err(Error::NonPolyhedral("extreme_rays")),
        }
    }

    /// Irredundant facet normals of the closure, sorted descending-lex.
    /// These are the extreme rays of the dual cone.
    pub fn minimal_facets(&self) -> Result<Vec<Vector>> {
        if let Some(f) = self.minimal_facets.get() {
            return Ok(f.clone());
        }
        let f = self.dual()?.extreme_rays()?;
        Ok(self.minimal_facets.get_or_init(|| f).clone())
    }

    /// Basis of `closure ∩ -closure`.
    pub fn lineality(&self) -> Result<Vec<Vector>> {
        let rows = self.inequality_rows()?;
        if rows.is_empty() {
            return Ok((0..self.dim)
                .map(|i| crate::kernel::rational::unit_vector(self.dim, i))
                .collect());
        }
        Ok(Matrix::from_rows(&rows, self.dim)?
            .nullspace()
            .iter()
            .map(|v| primitive(v))
            .collect())
    }

    /// The closure (strict flags dropped) and a basis of its lineality space.
    pub fn close_and_lineality(&self) -> Result<(Cone, Vec<Vector>)> {
        self.require_polyhedral("close_and_lineality")?;
        let closed = match &self.rep {
            ConeRep::Inequalities(rows) => Cone::from_inequalities(
                self.dim,
                rows.iter().map(|h| h.normal.clone()).collect(),
            )?,
            _ => self.clone(),
        };
        let lin = closed.lineality()?;
        Ok((closed, lin))
    }

    /// Dual cone `{f : f·x >= 0 for x in cone}` with representations swapped.
    pub fn dual(&self) -> Result<Cone> {
        match &self.rep {
            ConeRep::Generators(g) => Cone::from_inequalities(self.dim, g.clone()),
            ConeRep::Inequalities(rows) => {
                Cone::from_generators(self.dim, rows.iter().map(|h| h.normal.clone()).collect())
            }
            ConeRep::SymPsd { n } => Err(Error::SelfDualPsd(*n)),
        }
    }

    /// Exactly `dim` extreme rays that are linearly independent.
    pub fn is_simplicial(&self) -> Result<bool> {
        self.require_polyhedral("is_simplicial")?;
        let rays = self.extreme_rays()?;
        if rays.len() != self.dim {
            return Ok(false);
        }
        Ok(Matrix::from_rows(&rays, self.dim)?.rank() == self.dim)
    }

    /// `map(cone)` as a generator cone; zero images are dropped.
    pub fn image_cone(&self, map: &Matrix) -> Result<Cone> {
        self.require_polyhedral("image_cone")?;
        if map.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: map.cols(),
            });
        }
        let gens = self
            .spanning_generators()?
            .iter()
            .map(|g| map.mul_vec(g))
            .collect::<Result<Vec<_>>>()?;
        Cone::from_generators(map.rows(), gens)
    }

    /// Every generator of `other` lies in `self`.
    pub fn contains_cone(&self, other: &Cone) -> Result<bool> {
        for g in other.spanning_generators()? {
            if !self.member(&g)?.is_member() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of closures by mutual generator membership.
    pub fn same_cone(&self, other: &Cone) -> Result<bool> {
        if self.dim != other.dim {
            return Ok(false);
        }
        let a = self.close_and_lineality()?.0;
        let b = other.close_and_lineality()?.0;
        Ok(a.contains_cone(&b)? && b.contains_cone(&a)?)
    }

    /// Decides `v ∈ cone` with a certificate.
    pub fn member(&self, v: &[Rational]) -> Result<Certificate> {
        check_len(self.dim, v)?;
        match &self.rep {
            ConeRep::Inequalities(rows) => {
                if rows.iter().any(|h| h.strict) {
                    return Err(Error::StrictCone);
                }
                for h in rows {
                    if dot(&h.normal, v).is_negative() {
                        return Ok(Certificate {
                            verdict: Verdict::NonMember,
                            decomposition: None,
                            witness: Some(h.normal.clone()),
                        });
                    }
                }
                Ok(Certificate {
                    verdict: Verdict::Member,
                    decomposition: None,
                    witness: None,
                })
            }
            ConeRep::Generators(gens) => member_by_lp(gens, v),
            ConeRep::SymPsd { n } => member_psd(*n, v),
        }
    }

    fn is_named_generator(&self, index: usize, g: &[Rational]) -> bool {
        match &self.rep {
            ConeRep::Generators(gens) => gens.get(index).is_some_and(|x| x.as_slice() == g),
            ConeRep::Inequalities(rows) => rows
                .iter()
                .all(|h| !dot(&h.normal, g).is_negative() && (!h.strict || dot(&h.normal, g).is_positive())),
            ConeRep::SymPsd { n } => {
                let m = sym_to_matrix(*n, g);
                ldlt_psd(&m).map(|d| d.psd).unwrap_or(false)
            }
        }
    }

    fn is_nonnegative_functional(&self, f: &[Rational]) -> bool {
        match &self.rep {
            ConeRep::Generators(gens) => gens.iter().all(|g| !dot(f, g).is_negative()),
            ConeRep::Inequalities(rows) => rows.iter().any(|h| same_ray(&h.normal, f)),
            ConeRep::SymPsd { n } => {
                let m = functional_to_matrix(*n, f);
                ldlt_psd(&m).map(|d| d.psd).unwrap_or(false)
            }
        }
    }

    /// The PSD order `n` when this is the PSD cone.
    pub fn psd_size(&self) -> Option<usize> {
        match self.rep {
            ConeRep::SymPsd { n } => Some(n),
            _ => None,
        }
    }
}

fn check_len(dim: usize, v: &[Rational]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.len(),
        });
    }
    Ok(())
}

/// Feasibility of `Σ λ_i g_i = v, λ >= 0`; Farkas multipliers separate.
fn member_by_lp(gens: &[Vector], v: &[Rational]) -> Result<Certificate> {
    let d = v.len();
    let mut lp = LinearProgram::new(gens.len());
    lp.bounds = vec![VarBound::nonneg(); gens.len()];
    for j in 0..d {
        let row: Vector = gens.iter().map(|g| g[j].clone()).collect();
        lp.add_row(row, RowSense::Eq, v[j].clone());
    }
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => {
            let lambda = out.primal.unwrap_or_default();
            let terms = lambda
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(index, coeff)| Term {
                    index,
                    coeff,
                    generator: gens[index].clone(),
                })
                .collect();
            Ok(Certificate {
                verdict: Verdict::Member,
                decomposition: Some(terms),
                witness: None,
            })
        }
        LpStatus::Infeasible => Ok(Certificate {
            verdict: Verdict::NonMember,
            decomposition: None,
            witness: Some(primitive(&out.dual)),
        }),
        LpStatus::Unbounded => Err(Error::invariant("feasibility problem reported unbounded")),
    }
}

fn member_psd(n: usize, v: &[Rational]) -> Result<Certificate> {
    let m = sym_to_matrix(n, v);
    let d = ldlt_psd(&m)?;
    match d.certificate {
        PsdCertificate::Factors { lower, diag } => {
            let mut terms = Vec::new();
            for (k, dk) in diag.iter().enumerate() {
                if dk.is_zero() {
                    continue;
                }
                let l = lower.col(k);
                let mut outer = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        outer[(i, j)] = &l[i] * &l[j];
                    }
                }
                terms.push(Term {
                    index: k,
                    coeff: dk.clone(),
                    generator: matrix_to_sym(&outer),
                });
            }
            Ok(Certificate {
                verdict: Verdict::Member,
                decomposition: Some(terms),
                witness: None,
            })
        }
        PsdCertificate::Negative { x, .. } => Ok(Certificate {
            verdict: Verdict::NonMember,
            decomposition: None,
            witness: Some(rank_one_functional(&x)),
        }),
    }
}

/// Coordinates of `Z ↦ xᵀ·Z·x` on upper-triangle coordinates.
pub fn rank_one_functional(x: &[Rational]) -> Vector {
    let n = x.len();
    let two = Rational::from_integer(2.into());
    let mut f = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let p = &x[i] * &x[j];
            f.push(if i == j { p } else { p * &two });
        }
    }
    f
}

pub fn sym_to_matrix(n: usize, v: &[Rational]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = v[k].clone();
            m[(j, i)] = v[k].clone();
            k += 1;
        }
    }
    m
}

/// Upper triangle of `m`, row-major.
pub fn matrix_to_sym(m: &Matrix) -> Vector {
    let n = m.rows();
    let mut v = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            v.push(m[(i, j)].clone());
        }
    }
    v
}

/// Symmetric `F` with `f·v = trace(F·Z)` for `Z` given by `v`.
pub fn functional_to_matrix(n: usize, f: &[Rational]) -> Matrix {
    let half = Rational::new(1.into(), 2.into());
    let mut m = Matrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            if i == j {
                m[(i, i)] = f[k].clone();
            } else {
                let x = &f[k] * &half;
                m[(i, j)] = x.clone();
                m[(j, i)] = x;
            }
            k += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, vector};
    use proptest::prelude::*;

    fn orthant2() -> Cone {
        Cone::orthant(2)
    }

    #[test]
    fn orthant_member_decomposes() {
        let v = vector(&[1, 2]);
        let c = orthant2().member(&v).unwrap();
        assert!(c.is_member());
        let terms = c.decomposition.clone().unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!((terms[0].index, terms[0].coeff.clone()), (0, int(1)));
        assert_eq!((terms[1].index, terms[1].coeff.clone()), (1, int(2)));
        assert!(c.verify(&orthant2(), &v));
    }

    #[test]
    fn orthant_non_member_witness() {
        let v = vector(&[1, -1]);
        let c = orthant2().member(&v).unwrap();
        assert!(!c.is_member());
        assert_eq!(c.witness, Some(vector(&[0, 1])));
        assert!(c.verify(&orthant2(), &v));
        let h = Cone::from_inequalities(2, vec![vector(&[1, 0]), vector(&[0, 1])]).unwrap();
        let c = h.member(&v).unwrap();
        assert_eq!(c.witness, Some(vector(&[0, 1])));
        assert!(c.verify(&h, &v));
    }

    #[test]
    fn rotated_cone_separates() {
        let c = Cone::from_generators(2, vec![vector(&[1, 1]), vector(&[1, -1])]).unwrap();
        let v = vector(&[0, 1]);
        let cert = c.member(&v).unwrap();
        assert!(!cert.is_member());
        let f = cert.witness.clone().unwrap();
        assert!(!dot(&f, &vector(&[1, 1])).is_negative());
        assert!(!dot(&f, &vector(&[1, -1])).is_negative());
        assert!(dot(&f, &v).is_negative());
        assert!(cert.verify(&c, &v));
    }

    #[test]
    fn dual_examples() {
        let o = orthant2();
        assert!(o.dual().unwrap().same_cone(&o).unwrap());
        let c = Cone::from_generators(2, vec![vector(&[1, 1]), vector(&[1, -1])]).unwrap();
        let d = c.dual().unwrap();
        assert_eq!(d.minimal_facets().unwrap(), vec![vector(&[1, 1]), vector(&[1, -1])]);
        let ray = Cone::from_generators(2, vec![vector(&[1, 0])]).unwrap();
        let half = Cone::from_inequalities(2, vec![vector(&[1, 0])]).unwrap();
        assert!(ray.dual().unwrap().same_cone(&half).unwrap());
    }

    #[test]
    fn dual_of_psd_is_refused() {
        assert!(matches!(Cone::sym_psd(2).dual(), Err(Error::SelfDualPsd(2))));
    }

    #[test]
    fn closure_and_lineality() {
        let c = Cone::from_halfspaces(2, vec![Halfspace::strict(vector(&[1, 0]))]).unwrap();
        assert!(matches!(c.member(&vector(&[1, 0])), Err(Error::StrictCone)));
        let (closed, lin) = c.close_and_lineality().unwrap();
        assert!(!closed.has_strict());
        assert_eq!(lin, vec![vector(&[0, 1])]);
        let (again, lin2) = closed.close_and_lineality().unwrap();
        assert_eq!(again, closed);
        assert_eq!(lin2, lin);

        let (_, lin) = orthant2().close_and_lineality().unwrap();
        assert!(lin.is_empty());
        let full = Cone::from_inequalities(2, vec![]).unwrap();
        assert_eq!(full.close_and_lineality().unwrap().1.len(), 2);
    }

    #[test]
    fn simpliciality() {
        assert!(Cone::orthant(3).is_simplicial().unwrap());
        let l1 = Cone::from_inequalities(
            3,
            vec![vector(&[1, 1, 1]), vector(&[1, 1, -1]), vector(&[1, -1, 1]), vector(&[1, -1, -1])],
        )
        .unwrap();
        assert_eq!(l1.extreme_rays().unwrap().len(), 4);
        assert!(!l1.is_simplicial().unwrap());
        let l0 = Cone::from_inequalities(2, vec![vector(&[1, 1]), vector(&[1, -1])]).unwrap();
        assert!(l0.is_simplicial().unwrap());
        let half = Cone::from_inequalities(2, vec![vector(&[1, 0])]).unwrap();
        assert!(matches!(half.is_simplicial(), Err(Error::NonPointed { .. })));
    }

    #[test]
    fn images() {
        let proj = Matrix::from_i64(2, 3, &[1, 0, 0, 0, 1, 0]);
        let img = Cone::orthant(3).image_cone(&proj).unwrap();
        assert!(img.same_cone(&Cone::orthant(2)).unwrap());

        let c = Cone::from_generators(2, vec![vector(&[1, 1]), vector(&[1, -1])]).unwrap();
        let img = c.image_cone(&Matrix::from_i64(1, 2, &[1, 0])).unwrap();
        assert_eq!(img.extreme_rays().unwrap(), vec![vector(&[1])]);

        let m = Matrix::from_i64(2, 3, &[1, -1, 0, 0, 0, 1]);
        let img = Cone::orthant(3).image_cone(&m).unwrap();
        let half = Cone::from_inequalities(2, vec![vector(&[0, 1])]).unwrap();
        assert!(img.same_cone(&half).unwrap());
        assert_eq!(img.close_and_lineality().unwrap().1, vec![vector(&[1, 0])]);
    }

    #[test]
    fn psd_membership() {
        let psd = Cone::sym_psd(2);
        // [[1,1],[1,1]]
        let v = vector(&[1, 1, 1]);
        let c = psd.member(&v).unwrap();
        assert!(c.is_member());
        assert!(c.verify(&psd, &v));
        // [[1,2],[2,1]]
        let v = vector(&[1, 2, 1]);
        let c = psd.member(&v).unwrap();
        assert!(!c.is_member());
        assert!(c.verify(&psd, &v));
    }

    fn small_vec(d: usize) -> impl Strategy<Value = Vector> {
        prop::collection::vec(-4i64..=4, d).prop_map(|v| vector(&v))
    }

    proptest! {
        #[test]
        fn membership_matches_dual_rays(
            gens in prop::collection::vec(small_vec(3), 3..6),
            v in small_vec(3),
        ) {
            let cone = Cone::from_generators(3, gens).unwrap();
            let (_, lin) = cone.close_and_lineality().unwrap();
            prop_assume!(lin.is_empty());
            let cert = cone.member(&v).unwrap();
            prop_assert!(cert.verify(&cone, &v));
            let by_facets = cone
                .inequality_rows()
                .unwrap()
                .iter()
                .all(|f| !dot(f, &v).is_negative());
            prop_assert_eq!(cert.is_member(), by_facets);
        }

        #[test]
        fn identity_image_is_same_cone(gens in prop::collection::vec(small_vec(3), 1..5)) {
            let cone = Cone::from_generators(3, gens).unwrap();
            let img = cone.image_cone(&Matrix::identity(3)).unwrap();
            prop_assert!(img.same_cone(&cone).unwrap());
        }

        #[test]
        fn closure_is_idempotent(rows in prop::collection::vec(small_vec(3), 0..5), strict in any::<bool>()) {
            let hs = rows.into_iter().map(|n| Halfspace { normal: n, strict }).collect();
            let cone = Cone::from_halfspaces(3, hs).unwrap();
            let (c1, l1) = cone.close_and_lineality().unwrap();
            let (c2, l2) = c1.close_and_lineality().unwrap();
            prop_assert_eq!(c1, c2);
            prop_assert_eq!(l1, l2);
        }
    }
}
