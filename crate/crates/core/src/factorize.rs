//! Approximate factorization of the identity through `ℓ∞_k` by unital
//! positive maps.
//!
//! For a set of extreme states `f_1, …, f_k` that separates points,
//! `Φ = (f_1, …, f_k): V → ℓ∞_k` is unital positive and injective. A left
//! inverse `T₀: ℓ∞_k → V` of minimal norm is found by LP, pushed to a positive
//! map with [`perturb`], rescaled and corrected back to unitality:
//!
//! `Ψ(x) = S(x)/‖S‖ + ω(x)·(e − S(1)/‖S‖)`
//!
//! with `ω` the uniform state on `ℓ∞_k`. States are added greedily until the
//! defect `max ‖ΨΦv − v‖` over the query vectors meets the tolerance.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::lp::{LinearProgram, LpStatus, RowSense, VarBound};
use crate::kernel::matrix::Matrix;
use crate::kernel::rational::{dot, sub, Rational, Vector};
use crate::maps::AouMap;
use crate::perturb::perturb;
use crate::space::{linf, AouSpace};

/// Upper bound on the number of states fed into `Φ`.
pub const STATE_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct Factorization {
    pub phi: AouMap,
    pub psi: AouMap,
    pub defect: Rational,
    /// Indices into the descending-lex extreme states of `V`.
    pub states: Vec<usize>,
}

impl Factorization {
    pub fn k(&self) -> usize {
        self.states.len()
    }

    /// `Ψ∘Φ` as a matrix on `V`.
    pub fn composite(&self) -> Result<Matrix> {
        self.psi.matrix.mul(&self.phi.matrix)
    }
}

#[derive(Clone, Debug)]
pub struct FactorizationRun {
    pub requested: Rational,
    /// Factorization with the smallest defect seen (latest on ties).
    pub best: Factorization,
    /// `(k, defect)` at every step of the schedule.
    pub history: Vec<(usize, Rational)>,
    pub cap: usize,
}

impl FactorizationRun {
    pub fn met(&self) -> bool {
        self.best.defect <= self.requested
    }
}

/// Runs the full greedy schedule and reports the best factorization found.
pub fn factorize_run(space: &AouSpace, vectors: &[Vector], epsilon: &Rational) -> Result<FactorizationRun> {
    for v in vectors {
        if v.len() != space.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim,
                found: v.len(),
            });
        }
    }
    let states = space.extreme_states()?;
    let cap = STATE_CAP.min(states.len());
    let mut chosen = initial_states(&states, space.dim)?;
    let mut history = Vec::new();
    let mut best: Option<Factorization> = None;
    loop {
        let f = build(space, &states, &chosen, vectors)?;
        history.push((chosen.len(), f.defect.clone()));
        let done = f.defect <= *epsilon || chosen.len() >= cap;
        let next = if done { None } else { next_state(space, &states, &chosen, &f, vectors)? };
        if best.as_ref().is_none_or(|b| f.defect <= b.defect) {
            best = Some(f);
        }
        match next {
            Some(i) => chosen.push(i),
            None => break,
        }
    }
    Ok(FactorizationRun {
        requested: epsilon.clone(),
        best: best.expect("at least one step"),
        history,
        cap,
    })
}

/// A factorization with defect at most `epsilon`, or the best defect reached.
pub fn factorize(space: &AouSpace, vectors: &[Vector], epsilon: &Rational) -> Result<Factorization> {
    let run = factorize_run(space, vectors, epsilon)?;
    if run.met() {
        Ok(run.best)
    } else {
        Err(Error::ToleranceNotMet {
            requested: Box::new(epsilon.clone()),
            best: Box::new(run.best.defect),
        })
    }
}

/// Leading states in order, skipping those that do not raise the rank.
fn initial_states(states: &[Vector], dim: usize) -> Result<Vec<usize>> {
    let mut chosen = Vec::new();
    let mut rows: Vec<Vector> = Vec::new();
    for (i, s) in states.iter().enumerate() {
        rows.push(s.clone());
        if Matrix::from_rows(&rows, dim)?.rank() == rows.len() {
            chosen.push(i);
            if chosen.len() == dim {
                return Ok(chosen);
            }
        } else {
            rows.pop();
        }
    }
    Err(Error::invariant("extreme states do not separate points"))
}

fn next_state(
    space: &AouSpace,
    states: &[Vector],
    chosen: &[usize],
    f: &Factorization,
    vectors: &[Vector],
) -> Result<Option<usize>> {
    let composite = f.composite()?;
    let mut worst: Option<(Rational, Vector)> = None;
    for v in vectors {
        let d = sub(&composite.mul_vec(v)?, v);
        let n = space.order_norm(&d)?;
        if worst.as_ref().is_none_or(|(w, _)| n > *w) {
            worst = Some((n, d));
        }
    }
    let d = worst.map(|(_, d)| d).unwrap_or_else(|| vec![Rational::zero(); space.dim]);
    let mut pick: Option<(Rational, usize)> = None;
    for (i, s) in states.iter().enumerate() {
        if chosen.contains(&i) {
            continue;
        }
        let score = dot(s, &d).abs();
        if pick.as_ref().is_none_or(|(b, _)| score > *b) {
            pick = Some((score, i));
        }
    }
    Ok(pick.map(|(_, i)| i))
}

fn build(space: &AouSpace, states: &[Vector], chosen: &[usize], vectors: &[Vector]) -> Result<Factorization> {
    let n = space.dim;
    let k = chosen.len();
    let rows: Vec<Vector> = chosen.iter().map(|&i| states[i].clone()).collect();
    let phi = AouMap::new(space.clone(), linf(k), Matrix::from_rows(&rows, n)?)?;
    let t0 = min_norm_left_inverse(space, states, &phi.matrix)?;
    let t0 = AouMap::new(linf(k), space.clone(), t0)?;
    let s = if t0.is_positive()? { t0.matrix.clone() } else { perturb(&t0)?.map.matrix };
    let s_map = AouMap::new(linf(k), space.clone(), s.clone())?;
    let norm = s_map.operator_norm_dual()?;
    if !norm.is_positive() {
        return Err(Error::invariant("perturbed map vanishes"));
    }
    let scaled = s.scale(&(Rational::one() / &norm));
    let s1 = scaled.mul_vec(&vec![Rational::one(); k])?;
    let gap = sub(&space.unit, &s1);
    let omega = Rational::one() / Rational::from_integer(k.into());
    let mut psi = scaled;
    for i in 0..n {
        for j in 0..k {
            psi[(i, j)] += &gap[i] * &omega;
        }
    }
    let psi = AouMap::new(linf(k), space.clone(), psi)?;
    if !psi.is_unital() || !psi.is_positive()? {
        return Err(Error::invariant("corrected map is not unital positive"));
    }
    let composite = psi.matrix.mul(&phi.matrix)?;
    let mut defect = Rational::zero();
    for v in vectors {
        let d = space.order_norm(&sub(&composite.mul_vec(v)?, v))?;
        if d > defect {
            defect = d;
        }
    }
    Ok(Factorization {
        phi,
        psi,
        defect,
        states: chosen.to_vec(),
    })
}

/// `X: ℓ∞_k → V` with `X·Φ = id` minimizing `max_g ‖g∘X‖₁` over the extreme
/// states `g`, which is the operator norm of `X`.
fn min_norm_left_inverse(space: &AouSpace, states: &[Vector], phi: &Matrix) -> Result<Matrix> {
    let n = space.dim;
    let k = phi.rows();
    let m = states.len();
    // x[i*k + j] = X_ij, then u[g*k + j] >= |(gX)_j|, then t.
    let nx = n * k;
    let nu = m * k;
    let mut lp = LinearProgram::new(nx + nu + 1);
    for b in lp.bounds.iter_mut().skip(nx) {
        *b = VarBound::nonneg();
    }
    for i in 0..n {
        for c in 0..n {
            let mut row = vec![Rational::zero(); nx + nu + 1];
            for j in 0..k {
                row[i * k + j] = phi[(j, c)].clone();
            }
            let rhs = if i == c { Rational::one() } else { Rational::zero() };
            lp.add_row(row, RowSense::Eq, rhs);
        }
    }
    for (gi, g) in states.iter().enumerate() {
        for j in 0..k {
            let mut plus = vec![Rational::zero(); nx + nu + 1];
            for i in 0..n {
                plus[i * k + j] = g[i].clone();
            }
            let mut minus: Vector = plus.iter().map(|x| -x).collect();
            plus[nx + gi * k + j] = -Rational::one();
            minus[nx + gi * k + j] = -Rational::one();
            lp.add_row(plus, RowSense::Le, Rational::zero());
            lp.add_row(minus, RowSense::Le, Rational::zero());
        }
        let mut sum = vec![Rational::zero(); nx + nu + 1];
        for j in 0..k {
            sum[nx + gi * k + j] = Rational::one();
        }
        sum[nx + nu] = -Rational::one();
        lp.add_row(sum, RowSense::Le, Rational::zero());
    }
    let mut obj = vec![Rational::zero(); nx + nu + 1];
    obj[nx + nu] = Rational::one();
    lp.minimize(obj);
    let out = lp.solve()?;
    match out.status {
        LpStatus::Optimal => {
            let x = out.primal.unwrap_or_default();
            Matrix::new(n, k, x[..nx].to_vec())
        }
        LpStatus::Infeasible => Err(Error::Infeasible { farkas: out.dual }),
        LpStatus::Unbounded => Err(Error::invariant("left inverse norm unbounded below")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rational::{int, ratio, unit_vector, vector};
    use crate::space::lin_space;

    fn probes(dim: usize) -> Vec<Vector> {
        let mut out: Vec<Vector> = (0..dim).map(|i| unit_vector(dim, i)).collect();
        out.push(vec![int(1); dim]);
        out.push((0..dim as i64).map(|i| int(2 * i - 1)).collect());
        out
    }

    #[test]
    fn linf_factors_through_itself() {
        for n in 1..=4 {
            let v = linf(n);
            let f = factorize(&v, &probes(n), &int(0)).unwrap();
            assert_eq!(f.defect, int(0));
            assert_eq!(f.phi.matrix, Matrix::identity(n));
            assert_eq!(f.psi.matrix, Matrix::identity(n));
        }
    }

    #[test]
    fn lin1_is_exact() {
        let v = lin_space(1).unwrap();
        let f = factorize(&v, &probes(2), &int(0)).unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(f.defect, int(0));
        assert_eq!(f.composite().unwrap(), Matrix::identity(2));
        assert!(f.phi.is_positive().unwrap() && f.psi.is_positive().unwrap());
    }

    #[test]
    fn lin2_does_not_factor() {
        let v = lin_space(2).unwrap();
        let vs = vec![vector(&[0, 1, 0]), vector(&[0, 0, 1]), vector(&[0, 1, 1])];
        let run = factorize_run(&v, &vs, &ratio(1, 10)).unwrap();
        assert!(!run.met());
        assert_eq!(run.cap, 4);
        assert!(run.history.iter().all(|(_, d)| d.is_positive()));
        assert_eq!(run.history.last().unwrap().0, 4);
        match factorize(&v, &vs, &ratio(1, 10)) {
            Err(Error::ToleranceNotMet { requested, best }) => {
                assert_eq!(*requested, ratio(1, 10));
                assert!(*best > ratio(1, 10));
            }
            other => panic!("expected tolerance failure, got {other:?}"),
        }
        let f = run.best;
        assert!(f.phi.is_unital() && f.psi.is_unital());
        assert!(f.phi.is_positive().unwrap() && f.psi.is_positive().unwrap());
    }

    #[test]
    fn dimension_checked() {
        let v = linf(2);
        assert!(matches!(
            factorize(&v, &[vector(&[1])], &int(0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
