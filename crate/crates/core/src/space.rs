//! Ordered vector spaces with a distinguished order unit.

use num_traits::{One, Signed, Zero};

use crate::cone::{functional_to_matrix, rank_one_functional, sym_to_matrix, Cone, ConeRep, Halfspace};
use crate::error::{Error, Result};
use crate::kernel::dd::{polytope_vertices, sort_desc};
use crate::kernel::ldlt::{ldlt_psd, PsdCertificate};
use crate::kernel::lp::{LinearProgram, LpStatus, RowSense, VarBound};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{
    dot, int, is_zero_vec, max_abs, neg, primitive, unit_vector, Rational, Vector,
};
use crate::maps::AouMap;

/// Largest `n` accepted by [`lin_space`]; its cone has `2^n` rows.
pub const LIN_SPACE_MAX: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct AouSpace {
    pub dim: usize,
    pub cone: Cone,
    pub unit: Vector,
    pub label: String,
}

/// A state `f` with `f(e) = 1`, nonnegative on the cone.
pub type StateVector = Vector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub order_unit: bool,
    pub archimedean: bool,
    pub pointed: bool,
    /// Nonzero functional, nonnegative on the cone, with value `<= 0` at the unit.
    pub order_unit_witness: Option<Vector>,
    /// A point of the closure that is not in the cone.
    pub archimedean_witness: Option<Vector>,
    pub lineality: Vec<Vector>,
}

impl ValidationReport {
    pub fn is_aou(&self) -> bool {
        self.order_unit && self.archimedean && self.pointed
    }

    /// Re-checks the failure witnesses against `space`.
    pub fn verify(&self, space: &AouSpace) -> bool {
        if let Some(f) = &self.order_unit_witness {
            if self.order_unit || is_zero_vec(f) || dot(f, &space.unit).is_positive() {
                return false;
            }
            let nonneg = match space.cone.rep() {
                ConeRep::Generators(g) => g.iter().all(|x| !dot(f, x).is_negative()),
                ConeRep::Inequalities(rows)
                    if rows.iter().any(|h| h.strict && is_zero_vec(&h.normal)) =>
                {
                    true
                }
                ConeRep::Inequalities(_) => match space.cone.dual() {
                    Ok(d) => d.member(f).map(|c| c.is_member()).unwrap_or(false),
                    Err(_) => false,
                },
                ConeRep::SymPsd { n } => {
                    ldlt_psd(&functional_to_matrix(*n, f)).map(|d| d.psd).unwrap_or(false)
                }
            };
            if !nonneg {
                return false;
            }
        }
        if let Some(x) = &self.archimedean_witness {
            if self.archimedean || is_zero_vec(x) {
                return false;
            }
            let ConeRep::Inequalities(rows) = space.cone.rep() else {
                return false;
            };
            let in_closure = rows.iter().all(|h| !dot(&h.normal, x).is_negative());
            let fails_strict = rows.iter().any(|h| h.strict && !dot(&h.normal, x).is_positive());
            if !(in_closure && fails_strict) {
                return false;
            }
        }
        for l in &self.lineality {
            match space.cone.inequality_rows() {
                Ok(rows) => {
                    if rows.iter().any(|h| !dot(h, l).is_zero()) {
                        return false;
                    }
                }
                Err(_) => return false,
            }
        }
        self.pointed == self.lineality.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Archimedeanization {
    pub space: AouSpace,
    /// Quotient map `V → V/N` in the coordinates of `space`.
    pub quotient: Matrix,
}

impl AouSpace {
    pub fn new(label: impl Into<String>, cone: Cone, unit: Vector) -> Result<Self> {
        if unit.len() != cone.dim() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim(),
                found: unit.len(),
            });
        }
        Ok(AouSpace {
            dim: cone.dim(),
            cone,
            unit,
            label: label.into(),
        })
    }

    fn check_vec(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        if is_zero_vec(&self.unit) {
            return Err(Error::ZeroUnit);
        }
        match self.cone.rep() {
            ConeRep::SymPsd { n } => self.validate_psd(*n),
            ConeRep::Inequalities(rows) => {
                let mut report = ValidationReport {
                    order_unit: true,
                    archimedean: true,
                    pointed: true,
                    order_unit_witness: None,
                    archimedean_witness: None,
                    lineality: Vec::new(),
                };
                for h in rows {
                    let he = dot(&h.normal, &self.unit);
                    if is_zero_vec(&h.normal) {
                        if h.strict {
                            // The cone is {0}; any nonzero functional separates.
                            report.order_unit = false;
                            report.order_unit_witness = Some(neg(&self.unit));
                            break;
                        }
                        continue;
                    }
                    if !he.is_positive() {
                        report.order_unit = false;
                        report.order_unit_witness = Some(h.normal.clone());
                        break;
                    }
                }
                report.lineality = self.cone.lineality()?;
                report.pointed = report.lineality.is_empty();
                if let Some(x) = self.closure_gap(rows, &report.lineality)? {
                    report.archimedean = false;
                    report.archimedean_witness = Some(x);
                }
                Ok(report)
            }
            ConeRep::Generators(gens) => {
                let mut report = ValidationReport {
                    order_unit: true,
                    archimedean: true,
                    pointed: true,
                    order_unit_witness: None,
                    archimedean_witness: None,
                    lineality: Vec::new(),
                };
                'basis: for j in 0..self.dim {
                    for sign in [1i64, -1] {
                        if let Some(f) = self.order_unit_lp(gens, j, sign)? {
                            report.order_unit = false;
                            report.order_unit_witness = Some(f);
                            break 'basis;
                        }
                    }
                }
                report.lineality = self.cone.lineality()?;
                report.pointed = report.lineality.is_empty();
                Ok(report)
            }
        }
    }

    /// Feasibility of `r·e - Σ λ_i g_i = -sign·b_j`, `r, λ >= 0`; returns the
    /// Farkas functional when infeasible.
    fn order_unit_lp(&self, gens: &[Vector], j: usize, sign: i64) -> Result<Option<Vector>> {
        let mut lp = LinearProgram::new(gens.len() + 1);
        lp.bounds = vec![VarBound::nonneg(); gens.len() + 1];
        for i in 0..self.dim {
            let mut row: Vector = gens.iter().map(|g| g[i].clone()).collect();
            row.push(-self.unit[i].clone());
            let rhs = if i == j { int(sign) } else { Rational::zero() };
            lp.add_row(row, RowSense::Eq, rhs);
        }
        let out = lp.solve()?;
        match out.status {
            LpStatus::Optimal => Ok(None),
            LpStatus::Infeasible => Ok(Some(primitive(&out.dual))),
            LpStatus::Unbounded => Err(Error::invariant("feasibility problem reported unbounded")),
        }
    }

    /// A point of the closure violating some strict row, if any.
    fn closure_gap(&self, rows: &[Halfspace], lineality: &[Vector]) -> Result<Option<Vector>> {
        let strict: Vec<&Halfspace> = rows.iter().filter(|h| h.strict).collect();
        if strict.is_empty() {
            return Ok(None);
        }
        if let Some(l) = lineality.first() {
            return Ok(Some(l.clone()));
        }
        let mut total = vec![Rational::zero(); self.dim];
        for h in rows {
            for (t, x) in total.iter_mut().zip(&h.normal) {
                *t += x;
            }
        }
        for s in strict {
            let mut lp = LinearProgram::new(self.dim);
            for h in rows {
                lp.add_row(h.normal.clone(), RowSense::Ge, Rational::zero());
            }
            lp.add_row(s.normal.clone(), RowSense::Eq, Rational::zero());
            lp.add_row(total.clone(), RowSense::Eq, Rational::one());
            let out = lp.solve()?;
            if out.status == LpStatus::Optimal {
                return Ok(out.primal.map(|x| primitive(&x)));
            }
        }
        Ok(None)
    }

    fn validate_psd(&self, n: usize) -> Result<ValidationReport> {
        let m = sym_to_matrix(n, &self.unit);
        let d = ldlt_psd(&m)?;
        let witness = match d.certificate {
            PsdCertificate::Negative { x, .. } => Some(rank_one_functional(&x)),
            PsdCertificate::Factors { lower, diag } => match diag.iter().position(|p| p.is_zero()) {
                None => None,
                Some(k) => {
                    // Lᵀ·x = e_k gives xᵀ·M·x = d_k = 0.
                    let x = lower
                        .transpose()
                        .solve(&unit_vector(n, k))?
                        .ok_or_else(|| Error::invariant("unit triangular system is singular"))?;
                    Some(rank_one_functional(&x))
                }
            },
        };
        Ok(ValidationReport {
            order_unit: witness.is_none(),
            archimedean: true,
            pointed: true,
            order_unit_witness: witness,
            archimedean_witness: None,
            lineality: Vec::new(),
        })
    }

    /// Closure of the cone modulo its lineality space.
    ///
    /// The ε-fattened cone `{v : εe + v ∈ V⁺ for all ε > 0}` is taken to be
    /// the topological closure, which holds whenever `e` is interior.
    pub fn archimedeanize(&self) -> Result<Archimedeanization> {
        if !self.cone.is_polyhedral() {
            return Ok(Archimedeanization {
                space: self.clone(),
                quotient: Matrix::identity(self.dim),
            });
        }
        let (closed, lineality) = self.cone.close_and_lineality()?;
        if lineality.is_empty() {
            let mut space = self.clone();
            space.cone = closed;
            return Ok(Archimedeanization {
                space,
                quotient: Matrix::identity(self.dim),
            });
        }
        let q = quotient_by(&lineality, self.dim)?;
        let unit = q.mul_vec(&self.unit)?;
        let cone = match closed.rep() {
            ConeRep::Inequalities(rows) => {
                let qt = q.transpose();
                let mut out = Vec::with_capacity(rows.len());
                for h in rows {
                    let c = qt
                        .solve(&h.normal)?
                        .ok_or_else(|| Error::invariant("facet not orthogonal to lineality"))?;
                    out.push(c);
                }
                Cone::from_inequalities(q.rows(), out)?
            }
            _ => closed.image_cone(&q)?,
        };
        let space = AouSpace::new(format!("{}/N", self.label), cone, unit)?;
        Ok(Archimedeanization { space, quotient: q })
    }

    /// `min { r : r·e ± v ∈ cone }` by linear programming.
    pub fn order_norm(&self, v: &[Rational]) -> Result<Rational> {
        self.check_vec(v)?;
        if !self.cone.is_polyhedral() {
            return Err(Error::NonPolyhedral("order_norm"));
        }
        let rows = self.cone.inequality_rows()?;
        let mut lp = LinearProgram::new(1);
        for h in &rows {
            let he = dot(h, &self.unit);
            let hv = dot(h, v);
            // r·(h·e) >= ∓ h·v
            lp.add_row(vec![he.clone()], RowSense::Ge, -hv.clone());
            lp.add_row(vec![he], RowSense::Ge, hv);
        }
        lp.minimize(vec![Rational::one()]);
        let out = lp.solve()?;
        match out.status {
            LpStatus::Optimal => Ok(out.objective_value.unwrap_or_default()),
            LpStatus::Infeasible => Err(Error::NotOrderUnit),
            LpStatus::Unbounded => Err(Error::invariant("order norm unbounded below")),
        }
    }

    /// `max_f |f(v)|` over the extreme states.
    pub fn order_norm_via_states(&self, v: &[Rational]) -> Result<Rational> {
        self.check_vec(v)?;
        let states = self.extreme_states()?;
        Ok(states
            .iter()
            .map(|f| dot(f, v).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Extreme rays of the dual cone normalized at the unit, descending-lex.
    pub fn extreme_states(&self) -> Result<Vec<StateVector>> {
        if let ConeRep::SymPsd { .. } = self.cone.rep() {
            return Err(Error::NonPolyhedral("extreme_states"));
        }
        let mut states = Vec::new();
        for f in self.cone.minimal_facets()? {
            let fe = dot(&f, &self.unit);
            if !fe.is_positive() {
                return Err(Error::NotOrderUnit);
            }
            states.push(f.iter().map(|x| x / &fe).collect::<Vector>());
        }
        sort_desc(&mut states);
        Ok(states)
    }

    /// `v ↦ (f_1(v), …, f_k(v))` into `ℓ∞_k` over the extreme states.
    pub fn kadison_embed(&self) -> Result<AouMap> {
        let states = self.extreme_states()?;
        let k = states.len();
        let matrix = Matrix::from_rows(&states, self.dim)?;
        AouMap::new(self.clone(), linf(k), matrix)
    }

    /// Vertices of the order interval `[0, e]`.
    pub fn order_interval_vertices(&self) -> Result<Vec<Vector>> {
        let rows = self.cone.inequality_rows()?;
        let mut poly = Vec::with_capacity(2 * rows.len());
        for h in &rows {
            poly.push((h.clone(), Rational::zero()));
            poly.push((neg(h), dot(h, &self.unit)));
        }
        polytope_vertices(&poly, self.dim)
    }

    /// Vertices of the order-norm unit ball `[-e, e]`.
    pub fn unit_ball_vertices(&self) -> Result<Vec<Vector>> {
        let rows = self.cone.inequality_rows()?;
        let mut poly = Vec::with_capacity(2 * rows.len());
        for h in &rows {
            let he = dot(h, &self.unit);
            poly.push((h.clone(), he.clone()));
            poly.push((neg(h), he));
        }
        polytope_vertices(&poly, self.dim)
    }

    /// Dual norm `max_{‖u‖ <= 1} |f(u)|` over the unit-ball vertices.
    pub fn dual_norm(&self, f: &[Rational]) -> Result<Rational> {
        self.check_vec(f)?;
        Ok(self
            .unit_ball_vertices()?
            .iter()
            .map(|u| dot(f, u).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// `v ∈ V⁺`.
    pub fn is_positive(&self, v: &[Rational]) -> Result<bool> {
        let (closed, _) = match self.cone.rep() {
            ConeRep::SymPsd { .. } => (self.cone.clone(), Vec::new()),
            _ => self.cone.close_and_lineality()?,
        };
        Ok(closed.member(v)?.is_member())
    }
}

/// Rows form a basis of the orthogonal complement of `span(kernel)`.
pub fn quotient_by(kernel: &[Vector], dim: usize) -> Result<Matrix> {
    if kernel.is_empty() {
        return Ok(Matrix::identity(dim));
    }
    let comp = Matrix::from_rows(kernel, dim)?.nullspace();
    Matrix::from_rows(&comp, dim)
}

/// Solves `ψ·q = φ` for `ψ`; `None` if `φ` does not vanish on `ker q`.
pub fn factor_through(q: &Matrix, phi: &Matrix) -> Result<Option<Matrix>> {
    if phi.cols() != q.cols() {
        return Err(Error::DimensionMismatch {
            expected: q.cols(),
            found: phi.cols(),
        });
    }
    // Row by row: qᵀ·ψ_iᵀ = φ_iᵀ.
    let qt = q.transpose();
    let mut rows = Vec::with_capacity(phi.rows());
    for i in 0..phi.rows() {
        match qt.solve(phi.row(i))? {
            Some(r) => rows.push(r),
            None => return Ok(None),
        }
    }
    let psi = Matrix::from_rows(&rows, q.rows())?;
    if psi.mul(q)? != *phi {
        return Ok(None);
    }
    Ok(Some(psi))
}

/// `ℓ∞_n`: the positive orthant with unit `(1, …, 1)`.
pub fn linf(n: usize) -> AouSpace {
    AouSpace {
        dim: n,
        cone: Cone::orthant(n),
        unit: vec![Rational::one(); n],
        label: format!("linf({n})"),
    }
}

/// `span{1, t_1, …, t_n}` in `C([-1,1]^n)`, coordinates `(a_0, …, a_n)`,
/// with cone `a_0 >= Σ |a_i|` written as `2^n` rows.
pub fn lin_space(n: usize) -> Result<AouSpace> {
    if n == 0 || n > LIN_SPACE_MAX {
        return Err(Error::LimitExceeded {
            what: "lin_space order",
            limit: LIN_SPACE_MAX,
        });
    }
    let mut rows = Vec::with_capacity(1 << n);
    for mask in 0..(1usize << n) {
        let mut r = vec![Rational::one()];
        for i in 0..n {
            // Bit i (from the top) set means sign -1.
            let minus = mask >> (n - 1 - i) & 1 == 1;
            r.push(if minus { -Rational::one() } else { Rational::one() });
        }
        rows.push(r);
    }
    let cone = Cone::from_inequalities(n + 1, rows)?;
    AouSpace::new(format!("lin_space({n})"), cone, unit_vector(n + 1, 0))
}

/// Real symmetric `n×n` matrices with the PSD cone and unit `I`.
pub fn sym_space(n: usize) -> AouSpace {
    let mut unit = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            unit.push(if i == j { Rational::one() } else { Rational::zero() });
        }
    }
    AouSpace {
        dim: n * (n + 1) / 2,
        cone: Cone::sym_psd(n),
        unit,
        label: format!("sym_space({n})"),
    }
}

/// `V* ⊕ ℝ` with cone `{(f, λ) : f(u) + λ >= 0 for 0 <= u <= e}` and unit `(0, …, 0, 1)`.
pub fn dual_augmented(space: &AouSpace) -> Result<AouSpace> {
    let verts = space.order_interval_vertices()?;
    let rows: Vec<Vector> = verts
        .into_iter()
        .map(|mut u| {
            u.push(Rational::one());
            u
        })
        .collect();
    let d = space.dim + 1;
    let cone = Cone::from_inequalities(d, rows)?;
    AouSpace::new(format!("dual_augmented({})", space.label), cone, unit_vector(d, space.dim))
}

/// Largest coordinate magnitude; the order norm of `ℓ∞_n`.
pub fn sup_norm(v: &[Rational]) -> Rational {
    max_abs(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{ratio, vector};
    use proptest::prelude::*;

    #[test]
    fn linf_validates() {
        let r = linf(2).validate().unwrap();
        assert!(r.is_aou());
        assert!(r.verify(&linf(2)));
    }

    #[test]
    fn bad_unit_is_detected() {
        let mut s = linf(2);
        s.unit = vector(&[1, 0]);
        let r = s.validate().unwrap();
        assert!(!r.order_unit);
        let f = r.order_unit_witness.clone().unwrap();
        assert!(!dot(&f, &s.unit).is_positive());
        assert!(r.verify(&s));
        assert!(matches!(s.order_norm(&vector(&[0, 1])), Err(Error::NotOrderUnit)));
    }

    #[test]
    fn zero_unit_is_an_error() {
        let mut s = linf(2);
        s.unit = vector(&[0, 0]);
        assert!(matches!(s.validate(), Err(Error::ZeroUnit)));
    }

    fn open_halfplane() -> AouSpace {
        let cone = Cone::from_halfspaces(2, vec![Halfspace::strict(vector(&[1, 0]))]).unwrap();
        AouSpace::new("open", cone, vector(&[1, 0])).unwrap()
    }

    #[test]
    fn strict_cone_is_not_archimedean() {
        let s = open_halfplane();
        let r = s.validate().unwrap();
        assert!(r.order_unit);
        assert!(!r.archimedean);
        assert!(!r.pointed);
        assert!(r.verify(&s));
    }

    #[test]
    fn strict_row_can_leave_the_cone_closed() {
        // {x > 0} ∪ {0} is the closed ray in one dimension.
        let cone = Cone::from_halfspaces(1, vec![Halfspace::strict(vector(&[1]))]).unwrap();
        let s = AouSpace::new("ray", cone, vector(&[1])).unwrap();
        assert!(s.validate().unwrap().archimedean);
        // {x >= 0, y > 0} ∪ {0} misses the ray through (1, 0).
        let cone = Cone::from_halfspaces(
            2,
            vec![Halfspace::closed(vector(&[1, 0])), Halfspace::strict(vector(&[0, 1]))],
        )
        .unwrap();
        let s = AouSpace::new("wedge", cone, vector(&[1, 1])).unwrap();
        let r = s.validate().unwrap();
        assert!(!r.archimedean);
        assert_eq!(r.archimedean_witness, Some(vector(&[1, 0])));
        assert!(r.verify(&s));
    }

    /// `D = {v : εe + v ∈ V⁺ for all ε > 0}` sampled on integer directions.
    fn sampled_d(space: &AouSpace, v: &Vector) -> bool {
        let ConeRep::Inequalities(rows) = space.cone.rep() else { unreachable!() };
        (1..=64).all(|k| {
            let eps = ratio(1, k);
            let w: Vector = v.iter().zip(&space.unit).map(|(a, e)| a + &eps * e).collect();
            rows.iter().all(|h| {
                let x = dot(&h.normal, &w);
                if h.strict {
                    x.is_positive() || is_zero_vec(&w)
                } else {
                    !x.is_negative()
                }
            })
        })
    }

    #[test]
    fn archimedeanize_open_halfplane() {
        let s = open_halfplane();
        let a = s.archimedeanize().unwrap();
        assert_eq!(a.quotient, Matrix::from_i64(1, 2, &[1, 0]));
        assert_eq!(a.space.dim, 1);
        assert_eq!(a.space.unit, vector(&[1]));
        assert!(a.space.cone.same_cone(&Cone::orthant(1)).unwrap());
        assert!(a.space.validate().unwrap().is_aou());
        // D agrees with the closure on sampled directions; N = D ∩ -D is the y-axis.
        for x in -3..=3 {
            for y in -3..=3 {
                let v = vector(&[x, y]);
                assert_eq!(sampled_d(&s, &v), x >= 0);
                let in_n = sampled_d(&s, &v) && sampled_d(&s, &neg(&v));
                assert_eq!(in_n, x == 0);
            }
        }
    }

    #[test]
    fn archimedeanize_is_identity_when_archimedean() {
        let s = linf(2);
        let a = s.archimedeanize().unwrap();
        assert_eq!(a.quotient, Matrix::identity(2));
        assert_eq!(a.space, s);
        let ray = linf(1);
        assert_eq!(ray.archimedeanize().unwrap().space, ray);
    }

    #[test]
    fn archimedeanization_factors_positive_maps() {
        let s = open_halfplane();
        let a = s.archimedeanize().unwrap();
        // A unital positive functional on the open half-plane: (x, y) ↦ x.
        let phi = Matrix::from_i64(1, 2, &[1, 0]);
        let psi = factor_through(&a.quotient, &phi).unwrap().unwrap();
        assert_eq!(psi.mul(&a.quotient).unwrap(), phi);
        // Anything nonzero on N cannot factor.
        let bad = Matrix::from_i64(1, 2, &[1, 1]);
        assert!(factor_through(&a.quotient, &bad).unwrap().is_none());
    }

    #[test]
    fn order_norm_examples() {
        let l = linf(2);
        assert_eq!(l.order_norm(&vector(&[1, -1])).unwrap(), int(1));
        assert_eq!(l.order_norm(&vector(&[3, -2])).unwrap(), int(3));
        assert_eq!(l.order_norm(&l.unit).unwrap(), int(1));
        let lin2 = lin_space(2).unwrap();
        assert_eq!(lin2.order_norm(&vector(&[0, 1, 1])).unwrap(), int(2));
        assert_eq!(lin2.order_norm(&lin2.unit).unwrap(), int(1));
        assert_eq!(lin2.order_norm_via_states(&vector(&[0, 1, 1])).unwrap(), int(2));
    }

    #[test]
    fn states_examples() {
        assert_eq!(linf(3).extreme_states().unwrap(), vec![vector(&[1, 0, 0]), vector(&[0, 1, 0]), vector(&[0, 0, 1])]);
        let lin1 = lin_space(1).unwrap();
        assert_eq!(lin1.extreme_states().unwrap(), vec![vector(&[1, 1]), vector(&[1, -1])]);
        let lin2 = lin_space(2).unwrap();
        assert_eq!(
            lin2.extreme_states().unwrap(),
            vec![vector(&[1, 1, 1]), vector(&[1, 1, -1]), vector(&[1, -1, 1]), vector(&[1, -1, -1])]
        );
        assert!(matches!(sym_space(2).extreme_states(), Err(Error::NonPolyhedral(_))));
    }

    #[test]
    fn kadison_examples() {
        let k = linf(3).kadison_embed().unwrap();
        assert_eq!(k.matrix, Matrix::identity(3));
        let k = lin_space(1).unwrap().kadison_embed().unwrap();
        assert_eq!(k.matrix, Matrix::from_i64(2, 2, &[1, 1, 1, -1]));
        let img = k.source.cone.image_cone(&k.matrix).unwrap();
        assert!(img.same_cone(&Cone::orthant(2)).unwrap());
        let lin2 = lin_space(2).unwrap();
        let k = lin2.kadison_embed().unwrap();
        let v = vector(&[0, 1, 1]);
        let img = k.matrix.mul_vec(&v).unwrap();
        assert_eq!(img, vector(&[2, 0, 0, -2]));
        assert_eq!(sup_norm(&img), lin2.order_norm(&v).unwrap());
    }

    #[test]
    fn builders() {
        let l = linf(2);
        assert!(l.cone.same_cone(&Cone::orthant(2)).unwrap());
        let lin2 = lin_space(2).unwrap();
        assert_eq!(lin2.dim, 3);
        assert_eq!(lin2.unit, vector(&[1, 0, 0]));
        let ConeRep::Inequalities(rows) = lin2.cone.rep() else { panic!() };
        let normals: Vec<Vector> = rows.iter().map(|h| h.normal.clone()).collect();
        assert_eq!(
            normals,
            vec![vector(&[1, 1, 1]), vector(&[1, 1, -1]), vector(&[1, -1, 1]), vector(&[1, -1, -1])]
        );
        assert!(lin2.validate().unwrap().is_aou());
        assert!(matches!(lin_space(13), Err(Error::LimitExceeded { .. })));
        let s = sym_space(2);
        assert_eq!(s.unit, vector(&[1, 0, 1]));
        assert!(s.validate().unwrap().is_aou());

        let aug = dual_augmented(&linf(1)).unwrap();
        assert_eq!(aug.dim, 2);
        assert_eq!(aug.unit, vector(&[0, 1]));
        let expected = Cone::from_inequalities(2, vec![vector(&[0, 1]), vector(&[1, 1])]).unwrap();
        assert!(aug.cone.same_cone(&expected).unwrap());
        assert!(aug.validate().unwrap().is_aou());
    }

    #[test]
    fn psd_unit_must_be_definite() {
        let mut s = sym_space(2);
        s.unit = vector(&[1, 0, 0]);
        let r = s.validate().unwrap();
        assert!(!r.order_unit);
        assert!(r.verify(&s));
    }

    fn battery() -> Vec<AouSpace> {
        vec![linf(2), linf(3), lin_space(1).unwrap(), lin_space(2).unwrap()]
    }

    fn small_vec(d: usize) -> impl Strategy<Value = Vector> {
        prop::collection::vec((-6i64..=6, 1i64..=4), d)
            .prop_map(|v| v.into_iter().map(|(p, q)| ratio(p, q)).collect())
    }

    proptest! {
        #[test]
        fn norm_routes_agree(which in 0usize..4, seed in small_vec(4)) {
            let s = &battery()[which];
            let v: Vector = seed[..s.dim].to_vec();
            prop_assert_eq!(s.order_norm(&v).unwrap(), s.order_norm_via_states(&v).unwrap());
        }

        #[test]
        fn kadison_preserves_norm_and_order(which in 0usize..4, seed in small_vec(4)) {
            let s = &battery()[which];
            let v: Vector = seed[..s.dim].to_vec();
            let k = s.kadison_embed().unwrap();
            let img = k.matrix.mul_vec(&v).unwrap();
            prop_assert_eq!(sup_norm(&img), s.order_norm(&v).unwrap());
            prop_assert_eq!(s.is_positive(&v).unwrap(), img.iter().all(|x| !x.is_negative()));
        }

        #[test]
        fn dual_augmented_embeds_functionals(which in 0usize..4, seed in small_vec(5)) {
            let s = &battery()[which];
            let aug = dual_augmented(s).unwrap();
            let f: Vector = seed[..s.dim].to_vec();
            let lambda = seed[4].clone();
            let mut fl = f.clone();
            fl.push(lambda.clone());
            if aug.is_positive(&fl).unwrap() {
                prop_assert!(!lambda.is_negative());
            }
            let mut f0 = f.clone();
            f0.push(Rational::zero());
            let dual = s.cone.dual().unwrap();
            prop_assert_eq!(aug.is_positive(&f0).unwrap(), dual.member(&f).unwrap().is_member());
        }
    }
}
