//! Interval bounds for functionals, Jordan-split perturbation into `ℓ∞`,
//! Auerbach bases and the dimension-scaled positive perturbation.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::lp::{LinearProgram, LpStatus, RowSense};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{dot, neg, Rational, Vector};
use crate::maps::{min_l1_extension, AouMap};
use crate::space::AouSpace;

/// Combinations of unit-ball vertices examined by [`auerbach_basis`].
pub const AUERBACH_SEARCH_CAP: usize = 200_000;

/// `min f(x)` over the order interval `0 <= x <= e`.
pub fn interval_min(space: &AouSpace, f: &[Rational]) -> Result<Rational> {
    if f.len() != space.dim {
        return Err(Error::DimensionMismatch {
            expected: space.dim,
            found: f.len(),
        });
    }
    let mut lp = LinearProgram::new(space.dim);
    for h in space.cone.inequality_rows()? {
        let he = dot(&h, &space.unit);
        lp.add_row(h.clone(), RowSense::Ge, Rational::zero());
        lp.add_row(h, RowSense::Le, he);
    }
    lp.minimize(f.to_vec());
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => Ok(out.objective_value.unwrap_or_default()),
        _ => Err(Error::invariant("order interval LP is not optimal")),
    }
}

/// Both sides of `f >= -ε on [0, e]  ⟺  ‖f‖ <= 2ε + f(e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormBound {
    pub epsilon: Rational,
    pub interval_min: Rational,
    pub norm: Rational,
    pub value_at_unit: Rational,
    pub interval_side: bool,
    pub norm_side: bool,
}

impl NormBound {
    pub fn agrees(&self) -> bool {
        self.interval_side == self.norm_side
    }
}

pub fn norm_bound_equiv(space: &AouSpace, f: &[Rational], epsilon: &Rational) -> Result<NormBound> {
    let imin = interval_min(space, f)?;
    let norm = space.dual_norm(f)?;
    let fe = dot(f, &space.unit);
    let two = Rational::from_integer(2.into());
    Ok(NormBound {
        epsilon: epsilon.clone(),
        interval_side: imin >= -epsilon.clone(),
        norm_side: norm <= &two * epsilon + &fe,
        interval_min: imin,
        norm,
        value_at_unit: fe,
    })
}

#[derive(Clone, Debug)]
pub struct PertResult {
    /// Unital positive `S`.
    pub map: AouMap,
    /// `‖T‖`.
    pub norm: Rational,
    /// `‖T - S‖`.
    pub distance: Rational,
}

/// True if `space` is `ℓ∞_k` with its standard cone and unit.
pub fn is_linf(space: &AouSpace) -> Result<bool> {
    if space.unit.iter().any(|x| !x.is_one()) || !space.cone.is_polyhedral() {
        return Ok(false);
    }
    space.cone.same_cone(&crate::cone::Cone::orthant(space.dim))
}

/// Replaces each coordinate functional of a unital `T: V → ℓ∞_k` by the
/// normalized positive part of a minimal-norm extension over the states of `V`.
pub fn pert(t: &AouMap) -> Result<PertResult> {
    if !is_linf(&t.target)? {
        return Err(Error::NotLinf);
    }
    if !t.is_unital() {
        return Err(Error::NotUnital);
    }
    let states = t.source.extreme_states()?;
    let n = t.source.dim;
    let mut rows = Vec::with_capacity(t.matrix.rows());
    let mut norm = Rational::zero();
    for i in 0..t.matrix.rows() {
        let mu = min_l1_extension(&states, t.matrix.row(i))?;
        let l1: Rational = mu.iter().map(|x| x.abs()).sum();
        if l1 > norm {
            norm = l1;
        }
        let plus: Vector = mu.iter().map(|x| if x.is_positive() { x.clone() } else { Rational::zero() }).collect();
        let mass: Rational = plus.iter().sum();
        if !mass.is_positive() {
            return Err(Error::invariant("positive part of a unital functional vanishes"));
        }
        let mut row = vec![Rational::zero(); n];
        for (nu, s) in plus.iter().zip(&states) {
            if nu.is_zero() {
                continue;
            }
            let w = nu / &mass;
            for (r, x) in row.iter_mut().zip(s) {
                *r += &w * x;
            }
        }
        rows.push(row);
    }
    let s = Matrix::from_rows(&rows, n)?;
    let diff = AouMap::new(t.source.clone(), t.target.clone(), t.matrix.sub(&s)?)?;
    let distance = diff.operator_norm_dual()?;
    let map = AouMap::new(t.source.clone(), t.target.clone(), s)?;
    Ok(PertResult { map, norm, distance })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuerbachBasis {
    pub basis: Vec<Vector>,
    pub duals: Vec<Vector>,
}

impl AuerbachBasis {
    /// Biorthogonality and the four unit-norm identities, exactly.
    pub fn verify(&self, space: &AouSpace) -> Result<bool> {
        let n = space.dim;
        if self.basis.len() != n || self.duals.len() != n {
            return Ok(false);
        }
        for (i, f) in self.duals.iter().enumerate() {
            for (j, x) in self.basis.iter().enumerate() {
                let expect = if i == j { Rational::one() } else { Rational::zero() };
                if dot(f, x) != expect {
                    return Ok(false);
                }
            }
        }
        for x in &self.basis {
            if !space.order_norm(x)?.is_one() {
                return Ok(false);
            }
        }
        for f in &self.duals {
            if !space.dual_norm(f)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Unit-ball vertices maximizing `|det|`; their biorthogonal functionals have
/// norm one. Simplicial spaces past the search cap use their normalized rays.
pub fn auerbach_basis(space: &AouSpace) -> Result<AuerbachBasis> {
    let n = space.dim;
    let mut reps: Vec<Vector> = space
        .unit_ball_vertices()?
        .into_iter()
        .filter(|v| *v > neg(v))
        .collect();
    reps.dedup();
    if binomial_exceeds(reps.len(), n, AUERBACH_SEARCH_CAP) {
        if space.cone.is_simplicial()? {
            return simplex_basis(space);
        }
        return Err(Error::LimitExceeded {
            what: "Auerbach vertex combinations",
            limit: AUERBACH_SEARCH_CAP,
        });
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    if reps.len() < n {
        return Err(Error::invariant("unit ball has too few vertices"));
    }
    loop {
        let cols: Vec<Vector> = idx.iter().map(|&i| reps[i].clone()).collect();
        let det = Matrix::from_cols(&cols, n)?.determinant().abs();
        if best.as_ref().is_none_or(|(b, _)| det > *b) {
            best = Some((det, idx.clone()));
        }
        if !next_combination(&mut idx, reps.len()) {
            break;
        }
    }
    let (det, idx) = best.ok_or_else(|| Error::invariant("no vertex combination"))?;
    if det.is_zero() {
        return Err(Error::invariant("unit ball vertices do not span"));
    }
    let basis: Vec<Vector> = idx.iter().map(|&i| reps[i].clone()).collect();
    let inv = Matrix::from_cols(&basis, n)?
        .inverse()
        .ok_or_else(|| Error::invariant("maximal determinant basis is singular"))?;
    Ok(AuerbachBasis {
        basis,
        duals: inv.row_vecs(),
    })
}

/// Rays scaled to `f_i(x_i) = 1` with the extreme states as duals.
fn simplex_basis(space: &AouSpace) -> Result<AuerbachBasis> {
    let states = space.extreme_states()?;
    let mut basis = Vec::new();
    let mut duals = Vec::new();
    for r in space.cone.extreme_rays()? {
        let f = states
            .iter()
            .find(|f| dot(f, &r).is_positive())
            .ok_or_else(|| Error::invariant("ray vanishes on every state"))?;
        let fr = dot(f, &r);
        basis.push(r.iter().map(|x| x / &fr).collect());
        duals.push(f.clone());
    }
    Ok(AuerbachBasis { basis, duals })
}

fn binomial_exceeds(n: usize, k: usize, cap: usize) -> bool {
    if k > n {
        return false;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > cap as u128 {
            return true;
        }
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct PerturbResult {
    /// Positive `S: E → V`.
    pub map: AouMap,
    /// `‖T‖`.
    pub norm: Rational,
    /// `‖S' - ι∘T‖` for the unital positive `S'` into the states of `V`.
    pub delta: Rational,
    /// `‖T - S‖`.
    pub distance: Rational,
    /// `dim(E)·(‖T‖ - 1)`.
    pub bound: Rational,
}

/// `S = T + δ·e_V·Σ|x̂_i|` for an Auerbach basis `x_i` of `E`, where `|x̂_i|`
/// is the total variation of a minimal-norm extension of `x̂_i` over the
/// states of `E` and `δ` is the distance achieved by [`pert`] on `ι∘T`.
pub fn perturb(t: &AouMap) -> Result<PerturbResult> {
    if !t.is_unital() {
        return Err(Error::NotUnital);
    }
    let e = &t.source;
    let iota = t.target.kadison_embed()?;
    let lifted = AouMap::new(e.clone(), iota.target.clone(), iota.matrix.mul(&t.matrix)?)?;
    let p = pert(&lifted)?;
    let delta = p.distance;

    let states = e.extreme_states()?;
    let auerbach = auerbach_basis(e)?;
    let mut total = vec![Rational::zero(); e.dim];
    for f in &auerbach.duals {
        let mu = min_l1_extension(&states, f)?;
        for (m, s) in mu.iter().zip(&states) {
            let w = m.abs();
            if w.is_zero() {
                continue;
            }
            for (t, x) in total.iter_mut().zip(s) {
                *t += &w * x;
            }
        }
    }
    let mut correction = Matrix::zeros(t.target.dim, e.dim);
    for i in 0..t.target.dim {
        for j in 0..e.dim {
            correction[(i, j)] = &delta * &t.target.unit[i] * &total[j];
        }
    }
    let s = t.matrix.add(&correction)?;
    let map = AouMap::new(e.clone(), t.target.clone(), s)?;
    if !map.is_positive()? {
        return Err(Error::invariant("perturbed map is not positive"));
    }
    let diff = AouMap::new(e.clone(), t.target.clone(), correction)?;
    let distance = diff.operator_norm_dual()?;
    let norm = t.operator_norm_dual()?;
    let bound = Rational::from_integer(e.dim.into()) * (&norm - Rational::one());
    Ok(PerturbResult {
        map,
        norm,
        delta,
        distance,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, ratio, vector};
    use crate::space::{lin_space, linf};
    use proptest::prelude::*;

    #[test]
    fn interval_examples() {
        let l2 = linf(2);
        assert_eq!(interval_min(&l2, &vector(&[1, 0])).unwrap(), int(0));
        let b = norm_bound_equiv(&l2, &vector(&[1, 0]), &int(0)).unwrap();
        assert_eq!(b.norm, int(1));
        assert!(b.interval_side && b.norm_side);

        let b = norm_bound_equiv(&l2, &vector(&[1, -1]), &int(1)).unwrap();
        assert_eq!(b.interval_min, int(-1));
        assert_eq!(b.norm, int(2));
        assert!(b.interval_side && b.norm_side);

        let b = norm_bound_equiv(&l2, &vector(&[1, -2]), &int(1)).unwrap();
        assert_eq!(b.interval_min, int(-2));
        assert_eq!(b.norm, int(3));
        assert!(!b.interval_side && !b.norm_side);
    }

    #[test]
    fn pert_examples() {
        let id = AouMap::identity(&linf(2));
        let p = pert(&id).unwrap();
        assert_eq!(p.map.matrix, Matrix::identity(2));
        assert_eq!(p.distance, int(0));

        let row = Matrix::new(1, 2, vec![ratio(3, 2), ratio(-1, 2)]).unwrap();
        let t = AouMap::new(linf(2), linf(1), row).unwrap();
        let p = pert(&t).unwrap();
        assert_eq!(p.map.matrix, Matrix::from_i64(1, 2, &[1, 0]));
        assert_eq!(p.distance, int(1));
        assert_eq!(p.norm, int(2));

        let m = Matrix::new(2, 2, vec![ratio(3, 2), ratio(-1, 2), ratio(-1, 2), ratio(3, 2)]).unwrap();
        let t = AouMap::new(linf(2), linf(2), m).unwrap();
        let p = pert(&t).unwrap();
        assert_eq!(p.map.matrix, Matrix::identity(2));
        assert_eq!(p.distance, int(1));
        assert_eq!(p.norm, int(2));
    }

    #[test]
    fn pert_rejects_bad_input() {
        let lin1 = lin_space(1).unwrap();
        assert!(matches!(pert(&AouMap::identity(&lin1)), Err(Error::NotLinf)));
        let t = AouMap::new(linf(2), linf(1), Matrix::from_i64(1, 2, &[1, 1])).unwrap();
        assert!(matches!(pert(&t), Err(Error::NotUnital)));
    }

    #[test]
    fn auerbach_examples() {
        let a = auerbach_basis(&linf(1)).unwrap();
        assert_eq!(a.basis, vec![vector(&[1])]);
        assert_eq!(a.duals, vec![vector(&[1])]);

        let l2 = linf(2);
        let a = auerbach_basis(&l2).unwrap();
        assert_eq!(a.basis, vec![vector(&[1, 1]), vector(&[1, -1])]);
        assert_eq!(
            a.duals,
            vec![vec![ratio(1, 2), ratio(1, 2)], vec![ratio(1, 2), ratio(-1, 2)]]
        );
        assert!(a.verify(&l2).unwrap());

        for s in [lin_space(1).unwrap(), lin_space(2).unwrap(), linf(3), linf(4)] {
            let a = auerbach_basis(&s).unwrap();
            assert!(a.verify(&s).unwrap(), "{}", s.label);
        }
    }

    #[test]
    fn simplex_fallback_is_auerbach() {
        for s in [linf(3), lin_space(1).unwrap()] {
            let a = simplex_basis(&s).unwrap();
            assert!(a.verify(&s).unwrap(), "{}", s.label);
        }
    }

    #[test]
    fn perturb_examples() {
        let id = AouMap::identity(&linf(2));
        let r = perturb(&id).unwrap();
        assert_eq!(r.map.matrix, Matrix::identity(2));

        let m = Matrix::new(2, 2, vec![ratio(3, 2), ratio(-1, 2), ratio(-1, 2), ratio(3, 2)]).unwrap();
        let t = AouMap::new(linf(2), linf(2), m).unwrap();
        let r = perturb(&t).unwrap();
        assert_eq!(r.norm, int(2));
        assert_eq!(r.bound, int(2));
        assert!(r.distance <= r.bound);
        assert!(r.map.is_positive().unwrap());
        assert_eq!(r.distance, r.map.matrix.sub(&t.matrix).map(|d| {
            AouMap::new(linf(2), linf(2), d).unwrap().operator_norm().unwrap()
        }).unwrap());

        // lin_space(1) → ℓ∞₂ with ‖T‖ = 5/4.
        let m = Matrix::new(2, 2, vec![int(1), ratio(5, 4), int(1), int(0)]).unwrap();
        let t = AouMap::new(lin_space(1).unwrap(), linf(2), m).unwrap();
        assert!(t.is_unital());
        let r = perturb(&t).unwrap();
        assert_eq!(r.norm, ratio(5, 4));
        assert_eq!(r.bound, ratio(1, 2));
        assert!(r.distance <= ratio(1, 2));
        assert!(r.map.is_positive().unwrap());
    }

    fn battery() -> Vec<AouSpace> {
        vec![linf(2), linf(3), lin_space(1).unwrap(), lin_space(2).unwrap()]
    }

    proptest! {
        #[test]
        fn interval_norm_biconditional(which in 0usize..4, f in prop::collection::vec((-6i64..=6, 1i64..=3), 4), eps in (0i64..=6, 1i64..=3)) {
            let s = &battery()[which];
            let f: Vector = f[..s.dim].iter().map(|&(p, q)| ratio(p, q)).collect();
            let b = norm_bound_equiv(s, &f, &ratio(eps.0, eps.1)).unwrap();
            prop_assert!(b.agrees());
            // The tie value ε = -min is always on the boundary of both sides.
            let tie = -b.interval_min.clone();
            if !tie.is_negative() {
                let t = norm_bound_equiv(s, &f, &tie).unwrap();
                prop_assert!(t.interval_side && t.norm_side);
            }
        }
    }
}
