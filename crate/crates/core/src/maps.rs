//! Linear maps between AOU spaces, order ideals and quotients, extensions.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::cone::{Certificate, Cone};
use crate::error::{Error, Result};
use crate::kernel::lp::{LinearProgram, LpStatus, RowSense, VarBound};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{dot, is_zero_vec, primitive, Rational, Vector};
use crate::space::{factor_through, quotient_by, AouSpace};

/// A linear map between AOU spaces given by its matrix in the standard bases.
#[derive(Clone, Debug)]
pub struct AouMap {
    pub source: AouSpace,
    pub target: AouSpace,
    pub matrix: Matrix,
    positive: OnceLock<bool>,
}

impl PartialEq for AouMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

/// The first source generator whose image leaves the target cone.
#[derive(Clone, Debug)]
pub struct PositivityFailure {
    pub generator: Vector,
    pub image: Vector,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub unital: bool,
    pub positive: bool,
    pub order_embedding: bool,
    pub isometry: bool,
}

impl AouMap {
    pub fn new(source: AouSpace, target: AouSpace, matrix: Matrix) -> Result<Self> {
        if matrix.cols() != source.dim {
            return Err(Error::DimensionMismatch {
                expected: source.dim,
                found: matrix.cols(),
            });
        }
        if matrix.rows() != target.dim {
            return Err(Error::DimensionMismatch {
                expected: target.dim,
                found: matrix.rows(),
            });
        }
        Ok(AouMap {
            source,
            target,
            matrix,
            positive: OnceLock::new(),
        })
    }

    pub fn identity(space: &AouSpace) -> Self {
        AouMap {
            source: space.clone(),
            target: space.clone(),
            matrix: Matrix::identity(space.dim),
            positive: OnceLock::new(),
        }
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vector> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AouMap) -> Result<AouMap> {
        AouMap::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix)?)
    }

    pub fn is_unital(&self) -> bool {
        self.matrix
            .mul_vec(&self.source.unit)
            .is_ok_and(|img| img == self.target.unit)
    }

    pub fn positivity_failure(&self) -> Result<Option<PositivityFailure>> {
        let (target_cone, _) = self.target.cone.close_and_lineality()?;
        for g in self.source.cone.spanning_generators()? {
            let image = self.matrix.mul_vec(&g)?;
            let certificate = target_cone.member(&image)?;
            if !certificate.is_member() {
                return Ok(Some(PositivityFailure {
                    generator: g,
                    image,
                    certificate,
                }));
            }
        }
        Ok(None)
    }

    /// Every generator of the source cone maps into the target cone.
    pub fn is_positive(&self) -> Result<bool> {
        if let Some(p) = self.positive.get() {
            return Ok(*p);
        }
        let p = self.positivity_failure()?.is_none();
        Ok(*self.positive.get_or_init(|| p))
    }

    /// `max ‖T u‖` over the vertices `u` of the source unit ball.
    pub fn operator_norm(&self) -> Result<Rational> {
        let mut best = Rational::zero();
        for u in self.source.unit_ball_vertices()? {
            let n = self.target.order_norm_via_states(&self.matrix.mul_vec(&u)?)?;
            if n > best {
                best = n;
            }
        }
        Ok(best)
    }

    /// `max_g ‖g ∘ T‖` over extreme target states `g`, each dual norm taken
    /// as a minimal ℓ¹ extension over the source states.
    pub fn operator_norm_dual(&self) -> Result<Rational> {
        let source_states = self.source.extreme_states()?;
        let mut best = Rational::zero();
        for g in self.target.extreme_states()? {
            let f = self.matrix.vec_mul(&g)?;
            let mu = min_l1_extension(&source_states, &f)?;
            let n: Rational = mu.iter().map(|x| x.abs()).sum();
            if n > best {
                best = n;
            }
        }
        Ok(best)
    }
}

/// `μ` minimizing `‖μ‖₁` subject to `Σ μ_k s_k = f`.
///
/// With `s_k` the extreme states this is a norm-preserving extension of `f`
/// to `ℓ∞` over the states, so `‖μ‖₁` is the dual norm of `f`.
pub fn min_l1_extension(states: &[Vector], f: &[Rational]) -> Result<Vector> {
    let m = states.len();
    let n = f.len();
    let mut lp = LinearProgram::new(2 * m);
    lp.bounds = vec![VarBound::nonneg(); 2 * m];
    for j in 0..n {
        let mut row = Vec::with_capacity(2 * m);
        for s in states {
            row.push(s[j].clone());
        }
        for s in states {
            row.push(-s[j].clone());
        }
        lp.add_row(row, RowSense::Eq, f[j].clone());
    }
    lp.minimize(vec![Rational::one(); 2 * m]);
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => {
            let x = out.primal.unwrap_or_default();
            Ok((0..m).map(|k| &x[k] - &x[m + k]).collect())
        }
        LpStatus::Infeasible => Err(Error::Infeasible { farkas: out.dual }),
        LpStatus::Unbounded => Err(Error::invariant("l1 minimization unbounded")),
    }
}

/// Unital, positive, order embedding (pullback cone equals the source cone)
/// and isometry (pullback unit ball equals the source unit ball).
pub fn check_map(m: &AouMap) -> Result<MapReport> {
    let unital = m.is_unital();
    let positive = m.is_positive()?;
    let order_embedding = positive && is_pullback_inside(m)?;
    let isometry = is_isometry(m)?;
    if unital && positive && order_embedding != isometry {
        return Err(Error::invariant(
            "order embedding and isometry verdicts differ for a unital positive map",
        ));
    }
    Ok(MapReport {
        unital,
        positive,
        order_embedding,
        isometry,
    })
}

fn pullback_cone(m: &AouMap) -> Result<Cone> {
    let rows = m
        .target
        .cone
        .inequality_rows()?
        .iter()
        .map(|h| m.matrix.vec_mul(h))
        .collect::<Result<Vec<_>>>()?;
    Cone::from_inequalities(m.source.dim, rows)
}

fn is_pullback_inside(m: &AouMap) -> Result<bool> {
    let (source, _) = m.source.cone.close_and_lineality()?;
    source.contains_cone(&pullback_cone(m)?)
}

fn is_isometry(m: &AouMap) -> Result<bool> {
    let one = Rational::one();
    let mut rows = Vec::new();
    for h in m.target.cone.inequality_rows()? {
        let he = dot(&h, &m.target.unit);
        let hm = m.matrix.vec_mul(&h)?;
        rows.push((hm.iter().map(|x| -x).collect::<Vector>(), he.clone()));
        rows.push((hm, he));
    }
    let pulled = match crate::kernel::dd::polytope_vertices(&rows, m.source.dim) {
        Ok(v) => v,
        Err(Error::Unbounded) => return Ok(false),
        Err(e) => return Err(e),
    };
    for u in &pulled {
        if m.source.order_norm_via_states(u)? > one {
            return Ok(false);
        }
    }
    for u in m.source.unit_ball_vertices()? {
        if m.target.order_norm_via_states(&m.matrix.mul_vec(&u)?)? > one {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderIdealReport {
    pub ideal: bool,
    /// `(q, p)` with `0 <= q <= p`, `p ∈ J` and `q ∉ J`.
    pub witness: Option<(Vector, Vector)>,
}

/// Decides whether `span(basis)` is an order ideal through the generators of
/// `V⁺ ∩ (J - V⁺)`.
pub fn is_order_ideal(space: &AouSpace, basis: &[Vector]) -> Result<OrderIdealReport> {
    let d = space.dim;
    let k = basis.len();
    if k == 0 {
        return Ok(OrderIdealReport {
            ideal: true,
            witness: None,
        });
    }
    for b in basis {
        if b.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.len(),
            });
        }
    }
    let jm = Matrix::from_cols(basis, d)?;
    // Lift to (x, t): x ∈ V⁺ and J·t - x ∈ V⁺.
    let mut rows = Vec::new();
    for h in space.cone.inequality_rows()? {
        let mut a = h.clone();
        a.extend(std::iter::repeat_n(Rational::zero(), k));
        rows.push(a);
        let mut b: Vector = h.iter().map(|x| -x).collect();
        b.extend(jm.vec_mul(&h)?);
        rows.push(b);
    }
    let lifted = Cone::from_inequalities(d + k, rows)?;
    for g in lifted.spanning_generators()? {
        let x: Vector = g[..d].to_vec();
        if is_zero_vec(&x) {
            continue;
        }
        if jm.solve(&x)?.is_none() {
            let p = jm.mul_vec(&g[d..])?;
            return Ok(OrderIdealReport {
                ideal: false,
                witness: Some((primitive(&x), p)),
            });
        }
    }
    Ok(OrderIdealReport {
        ideal: true,
        witness: None,
    })
}

/// `V/J` with the image cone, made Archimedean; returns the space and `q`.
pub fn archimedean_quotient(space: &AouSpace, basis: &[Vector]) -> Result<(AouSpace, AouMap)> {
    let report = is_order_ideal(space, basis)?;
    if let Some((q, p)) = report.witness {
        return Err(Error::NotOrderIdeal { q, p });
    }
    let proj = quotient_by(basis, space.dim)?;
    let cone = space.cone.image_cone(&proj)?;
    let unit = proj.mul_vec(&space.unit)?;
    let image = AouSpace::new(format!("{}/J", space.label), cone, unit)?;
    let arch = image.archimedeanize()?;
    let matrix = arch.quotient.mul(&proj)?;
    let mut quotient = arch.space;
    quotient.label = format!("{}/J", space.label);
    let map = AouMap::new(space.clone(), quotient.clone(), matrix)?;
    Ok((quotient, map))
}

/// A preimage of a target generator inside the `ε`-fattened source cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lifting {
    pub target: Vector,
    pub epsilon: Rational,
    pub lift: Vector,
}

#[derive(Clone, Debug)]
pub struct OrderQuotientReport {
    pub order_quotient: bool,
    pub liftings: Vec<Lifting>,
    /// A target generator outside the image cone, with its separating certificate.
    pub failure: Option<(Vector, Certificate)>,
}

impl OrderQuotientReport {
    pub fn verify(&self, m: &AouMap) -> bool {
        if let Some((w, cert)) = &self.failure {
            let Ok(img) = m.source.cone.image_cone(&m.matrix) else {
                return false;
            };
            return !self.order_quotient && !cert.is_member() && cert.verify(&img, w);
        }
        if !self.order_quotient {
            return false;
        }
        let Ok((source, _)) = m.source.cone.close_and_lineality() else {
            return false;
        };
        self.liftings.iter().all(|l| {
            let fattened: Vector = l
                .lift
                .iter()
                .zip(&m.source.unit)
                .map(|(v, e)| v + &l.epsilon * e)
                .collect();
            m.matrix.mul_vec(&l.lift).is_ok_and(|w| w == l.target)
                && source.member(&fattened).is_ok_and(|c| c.is_member())
        })
    }
}

/// Number of `ε = 1/2^k` steps emitted per target generator.
pub const LIFTING_SCHEDULE: u32 = 3;

/// Decides whether a unital positive surjection is an order quotient map.
///
/// The verdict compares the quotient of the source by `ker m`, pushed forward
/// along the induced map, with the target cone; the direct image cone is
/// checked as a second route and must agree.
pub fn is_order_quotient(m: &AouMap) -> Result<OrderQuotientReport> {
    if !m.is_unital() {
        return Err(Error::NotUnital);
    }
    if !m.is_positive()? {
        return Err(Error::NotPositive);
    }
    if m.matrix.rank() != m.target.dim {
        return Err(Error::NotSurjective);
    }
    let kernel = m.matrix.nullspace();
    let (quotient, q) = archimedean_quotient(&m.source, &kernel)?;
    let induced = factor_through(&q.matrix, &m.matrix)?
        .ok_or_else(|| Error::invariant("map does not factor through its kernel quotient"))?;
    let by_quotient = induced.rows() == induced.cols()
        && induced.rank() == induced.rows()
        && quotient.cone.image_cone(&induced)?.same_cone(&m.target.cone)?;

    let image = m.source.cone.image_cone(&m.matrix)?;
    let by_image = image.same_cone(&m.target.cone)?;
    if by_quotient != by_image {
        return Err(Error::invariant("order quotient routes disagree"));
    }
    if !by_image {
        for w in m.target.cone.spanning_generators()? {
            let cert = image.member(&w)?;
            if !cert.is_member() {
                return Ok(OrderQuotientReport {
                    order_quotient: false,
                    liftings: Vec::new(),
                    failure: Some((w, cert)),
                });
            }
        }
        return Err(Error::invariant("image cone differs but contains every target generator"));
    }
    let rows = m.source.cone.inequality_rows()?;
    let mut liftings = Vec::new();
    for w in m.target.cone.spanning_generators()? {
        for k in 1..=LIFTING_SCHEDULE {
            let epsilon = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << k));
            let lift = lift_with_slack(m, &rows, &w, &epsilon)?;
            liftings.push(Lifting {
                target: w.clone(),
                epsilon,
                lift,
            });
        }
    }
    Ok(OrderQuotientReport {
        order_quotient: true,
        liftings,
        failure: None,
    })
}

/// Finds `v` with `m(v) = w` and `v + εe ∈ V⁺`.
fn lift_with_slack(m: &AouMap, rows: &[Vector], w: &[Rational], eps: &Rational) -> Result<Vector> {
    let d = m.source.dim;
    let mut lp = LinearProgram::new(d);
    for i in 0..m.matrix.rows() {
        lp.add_row(m.matrix.row(i).to_vec(), RowSense::Eq, w[i].clone());
    }
    for h in rows {
        lp.add_row(h.clone(), RowSense::Ge, -(eps * dot(h, &m.source.unit)));
    }
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => Ok(out.primal.unwrap_or_default()),
        LpStatus::Infeasible => Err(Error::Infeasible { farkas: out.dual }),
        LpStatus::Unbounded => Err(Error::invariant("feasibility problem reported unbounded")),
    }
}

/// Extends `T: span(w1_basis) → V`, given by its values on the basis, to a
/// unital positive map on all of `w2`.
///
/// Unknowns are the matrix entries; constraints are agreement on the basis,
/// `T̃(e) = e_V`, and every generator of `w2` mapped into `V⁺`.
pub fn extend_unital_positive(
    w2: &AouSpace,
    w1_basis: &[Vector],
    values: &[Vector],
    target: &AouSpace,
) -> Result<AouMap> {
    if w1_basis.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: w1_basis.len(),
            found: values.len(),
        });
    }
    let (dv, dw) = (target.dim, w2.dim);
    let var = |i: usize, j: usize| i * dw + j;
    let mut lp = LinearProgram::new(dv * dw);
    let fix = |b: &[Rational], val: &[Rational], lp: &mut LinearProgram| -> Result<()> {
        if b.len() != dw || val.len() != dv {
            return Err(Error::DimensionMismatch {
                expected: dw,
                found: b.len(),
            });
        }
        for i in 0..dv {
            let mut row = vec![Rational::zero(); dv * dw];
            for j in 0..dw {
                row[var(i, j)] = b[j].clone();
            }
            lp.add_row(row, RowSense::Eq, val[i].clone());
        }
        Ok(())
    };
    for (b, val) in w1_basis.iter().zip(values) {
        fix(b, val, &mut lp)?;
    }
    fix(&w2.unit, &target.unit, &mut lp)?;
    let facets = target.cone.inequality_rows()?;
    for g in w2.cone.spanning_generators()? {
        for h in &facets {
            let mut row = vec![Rational::zero(); dv * dw];
            for i in 0..dv {
                if h[i].is_zero() {
                    continue;
                }
                for j in 0..dw {
                    row[var(i, j)] = &h[i] * &g[j];
                }
            }
            lp.add_row(row, RowSense::Ge, Rational::zero());
        }
    }
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => {
            let x = out.primal.unwrap_or_default();
            let matrix = Matrix::new(dv, dw, x)?;
            AouMap::new(w2.clone(), target.clone(), matrix)
        }
        LpStatus::Infeasible => Err(Error::Infeasible { farkas: out.dual }),
        LpStatus::Unbounded => Err(Error::invariant("feasibility problem reported unbounded")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, ratio, vector};
    use crate::space::{lin_space, linf};
    use proptest::prelude::*;

    fn averaging() -> AouMap {
        let m = Matrix::new(1, 2, vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        AouMap::new(linf(2), linf(1), m).unwrap()
    }

    #[test]
    fn identity_passes_everything() {
        let r = check_map(&AouMap::identity(&linf(2))).unwrap();
        assert_eq!(
            r,
            MapReport {
                unital: true,
                positive: true,
                order_embedding: true,
                isometry: true
            }
        );
    }

    #[test]
    fn kadison_embedding_is_an_order_embedding() {
        let k = lin_space(1).unwrap().kadison_embed().unwrap();
        let r = check_map(&k).unwrap();
        assert!(r.unital && r.positive && r.order_embedding && r.isometry);
        let k = lin_space(2).unwrap().kadison_embed().unwrap();
        let r = check_map(&k).unwrap();
        assert!(r.unital && r.positive && r.order_embedding && r.isometry);
    }

    #[test]
    fn averaging_is_not_an_embedding() {
        let r = check_map(&averaging()).unwrap();
        assert!(r.unital && r.positive);
        assert!(!r.order_embedding && !r.isometry);
        // (1, -1) maps to 0 but is not positive.
        let p = pullback_cone(&averaging()).unwrap();
        assert!(p.member(&vector(&[1, -1])).unwrap().is_member());
    }

    #[test]
    fn non_positive_map_is_reported() {
        let m = AouMap::new(linf(2), linf(2), Matrix::from_i64(2, 2, &[1, 0, 2, -1])).unwrap();
        assert!(m.is_unital());
        let fail = m.positivity_failure().unwrap().unwrap();
        assert!(fail.certificate.verify(&Cone::orthant(2), &fail.image));
        assert!(!check_map(&m).unwrap().positive);
    }

    #[test]
    fn order_ideal_examples() {
        let l3 = linf(3);
        assert!(is_order_ideal(&l3, &[]).unwrap().ideal);
        assert!(is_order_ideal(&l3, &[vector(&[1, -1, 0])]).unwrap().ideal);
        let l2 = linf(2);
        assert!(is_order_ideal(&l2, &[vector(&[1, 0])]).unwrap().ideal);
        let r = is_order_ideal(&l2, &[vector(&[1, 1])]).unwrap();
        assert!(!r.ideal);
        let (q, p) = r.witness.unwrap();
        assert_eq!(q, vector(&[1, 0]));
        assert_eq!(p, vector(&[1, 1]));
    }

    /// Brute-force oracle: every integer `q` with `0 <= q <= p` for `p ∈ J`
    /// on a grid must lie in `J`.
    fn brute_ideal(space: &AouSpace, basis: &[Vector]) -> bool {
        let jm = Matrix::from_cols(basis, space.dim).unwrap();
        for t in -3..=3 {
            let p = jm.mul_vec(&[int(t)]).unwrap();
            for a in -3..=3 {
                for b in -3..=3 {
                    let q = vector(&[a, b]);
                    let pq: Vector = p.iter().zip(&q).map(|(x, y)| x - y).collect();
                    if space.is_positive(&q).unwrap() && space.is_positive(&pq).unwrap() && jm.solve(&q).unwrap().is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn order_ideal_matches_brute_force() {
        let l2 = linf(2);
        for dir in [[1, 0], [0, 1], [1, 1], [1, -1], [2, 1], [1, -2]] {
            let b = vec![vector(&dir)];
            assert_eq!(is_order_ideal(&l2, &b).unwrap().ideal, brute_ideal(&l2, &b), "{dir:?}");
        }
    }

    #[test]
    fn quotients() {
        let (q, map) = archimedean_quotient(&linf(2), &[]).unwrap();
        assert_eq!(q.dim, 2);
        assert_eq!(map.matrix, Matrix::identity(2));

        let (q, map) = archimedean_quotient(&linf(3), &[vector(&[1, -1, 0])]).unwrap();
        assert_eq!(q.dim, 2);
        assert!(q.validate().unwrap().is_aou());
        assert!(map.is_unital() && map.is_positive().unwrap());
        let img = Cone::orthant(3).image_cone(&map.matrix).unwrap();
        assert!(img.same_cone(&q.cone).unwrap());

        let (q, map) = archimedean_quotient(&linf(2), &[vector(&[1, 0])]).unwrap();
        assert_eq!(q.dim, 1);
        assert_eq!(map.matrix, Matrix::from_i64(1, 2, &[0, 1]));
        assert!(q.cone.same_cone(&Cone::orthant(1)).unwrap());
        assert_eq!(q.unit, vector(&[1]));

        assert!(matches!(
            archimedean_quotient(&linf(2), &[vector(&[1, 1])]),
            Err(Error::NotOrderIdeal { .. })
        ));
    }

    #[test]
    fn order_quotient_examples() {
        let r = is_order_quotient(&AouMap::identity(&linf(2))).unwrap();
        assert!(r.order_quotient);
        let r = is_order_quotient(&averaging()).unwrap();
        assert!(r.order_quotient);
        assert_eq!(r.liftings.len(), LIFTING_SCHEDULE as usize);
        assert!(r.verify(&averaging()));
    }

    #[test]
    fn non_quotient_is_certified() {
        // Unital, positive and onto, but the image cone {a₀ >= 2|a₁|} is too narrow.
        let m = Matrix::new(2, 2, vec![ratio(1, 2), ratio(1, 2), ratio(1, 4), ratio(-1, 4)]).unwrap();
        let map = AouMap::new(linf(2), lin_space(1).unwrap(), m).unwrap();
        assert!(map.is_unital() && map.is_positive().unwrap());
        let r = is_order_quotient(&map).unwrap();
        assert!(!r.order_quotient);
        assert!(r.verify(&map));
    }

    #[test]
    fn surjectivity_is_required() {
        let m = Matrix::from_i64(2, 1, &[1, 1]);
        let map = AouMap::new(linf(1), linf(2), m).unwrap();
        assert!(matches!(is_order_quotient(&map), Err(Error::NotSurjective)));
    }

    #[test]
    fn extension_examples() {
        let e = extend_unital_positive(&linf(2), &[], &[], &linf(1)).unwrap();
        assert!(e.is_unital() && e.is_positive().unwrap());

        let id = extend_unital_positive(
            &linf(2),
            &[vector(&[1, 1]), vector(&[1, -1])],
            &[vector(&[1, 1]), vector(&[1, -1])],
            &linf(2),
        )
        .unwrap();
        assert_eq!(id.matrix, Matrix::identity(2));

        let lin2 = lin_space(2).unwrap();
        let ext = extend_unital_positive(
            &lin2,
            &[vector(&[1, 0, 0]), vector(&[0, 1, 1])],
            &[vector(&[1, 1]), vector(&[2, -2])],
            &linf(2),
        )
        .unwrap();
        assert!(ext.is_unital() && ext.is_positive().unwrap());
        let t1 = ext.apply(&vector(&[0, 1, 0])).unwrap();
        let t2 = ext.apply(&vector(&[0, 0, 1])).unwrap();
        assert_eq!(&t1[0] + &t2[0], int(2));
        assert_eq!(&t1[1] + &t2[1], int(-2));
        // Each coordinate of T̃ is a state: |T̃(t_i)_k| <= 1.
        for x in t1.iter().chain(&t2) {
            assert!(x.abs() <= int(1));
        }
    }

    #[test]
    fn infeasible_extension_has_farkas() {
        // T(t_1 + t_2) = (3, 0) exceeds every state.
        let lin2 = lin_space(2).unwrap();
        let r = extend_unital_positive(
            &lin2,
            &[vector(&[0, 1, 1])],
            &[vector(&[3, 0])],
            &linf(2),
        );
        assert!(matches!(r, Err(Error::Infeasible { .. })));
    }

    #[test]
    fn operator_norm_routes() {
        let t = Matrix::new(2, 2, vec![ratio(3, 2), ratio(-1, 2), ratio(-1, 2), ratio(3, 2)]).unwrap();
        let m = AouMap::new(linf(2), linf(2), t).unwrap();
        assert_eq!(m.operator_norm().unwrap(), int(2));
        assert_eq!(m.operator_norm_dual().unwrap(), int(2));
    }

    fn unital_map_strategy() -> impl Strategy<Value = (usize, usize, Vec<(i64, i64)>)> {
        (0usize..4, 0usize..4, prop::collection::vec((-4i64..=4, 1i64..=3), 16))
    }

    fn battery() -> Vec<AouSpace> {
        vec![linf(2), linf(3), lin_space(1).unwrap(), lin_space(2).unwrap()]
    }

    /// A unital map whose columns outside the unit are random.
    fn random_unital(src: &AouSpace, dst: &AouSpace, seed: &[(i64, i64)]) -> AouMap {
        // Columns in a basis starting with the unit, then mapped back.
        let n = src.dim;
        let mut basis = vec![src.unit.clone()];
        for i in 0..n {
            let e = crate::kernel::rational::unit_vector(n, i);
            let mut cand = basis.clone();
            cand.push(e);
            if Matrix::from_cols(&cand, n).unwrap().rank() == cand.len() {
                basis = cand;
            }
        }
        let b = Matrix::from_cols(&basis, n).unwrap();
        let mut images = vec![dst.unit.clone()];
        for c in 1..n {
            images.push((0..dst.dim).map(|r| ratio(seed[c * 4 + r].0, seed[c * 4 + r].1)).collect());
        }
        let img = Matrix::from_cols(&images, dst.dim).unwrap();
        let matrix = img.mul(&b.inverse().unwrap()).unwrap();
        AouMap::new(src.clone(), dst.clone(), matrix).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn embedding_iff_isometry((a, b, seed) in unital_map_strategy()) {
            let bat = battery();
            let m = random_unital(&bat[a], &bat[b], &seed);
            let r = check_map(&m).unwrap();
            if r.unital && r.positive {
                prop_assert_eq!(r.order_embedding, r.isometry);
            }
        }

        #[test]
        fn operator_norm_routes_agree((a, b, seed) in unital_map_strategy()) {
            let bat = battery();
            let m = random_unital(&bat[a], &bat[b], &seed);
            prop_assert_eq!(m.operator_norm().unwrap(), m.operator_norm_dual().unwrap());
        }
    }
}
