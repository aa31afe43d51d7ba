//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Every outcome carries a certificate that [`LpOutcome::verify`] re-checks by
//! substitution:
//!
//! * optimal: a primal point plus dual multipliers whose combination of the
//!   rows reproduces the objective with equal value (strong duality);
//! * infeasible: a Farkas combination of the rows reading `0 <= -1`;
//! * unbounded: a feasible point plus an improving recession direction.
//!
//! Multipliers refer to each row written in `<=` form: a `>=` row `a·x >= b`
//! is read as `-a·x <= -b`. Inequality multipliers are nonnegative, equality
//! multipliers are free. Variable bounds get their own multipliers
//! (`bound_lower`, `bound_upper`), both nonnegative.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::Matrix;
use super::rational::{dot, Rational, Vector};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RowSense {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarBound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl VarBound {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn nonneg() -> Self {
        Self {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }
}

/// A linear program in general form. Variables default to free.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub direction: Direction,
    pub objective: Vector,
    pub rows: Vec<Vector>,
    pub senses: Vec<RowSense>,
    pub rhs: Vector,
    pub bounds: Vec<VarBound>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            direction: Direction::Minimize,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
            senses: Vec::new(),
            rhs: Vec::new(),
            bounds: vec![VarBound::free(); num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, bound: VarBound) -> usize {
        self.objective.push(Rational::zero());
        for r in &mut self.rows {
            r.push(Rational::zero());
        }
        self.bounds.push(bound);
        self.objective.len() - 1
    }

    pub fn add_row(&mut self, coeffs: Vector, sense: RowSense, rhs: Rational) -> usize {
        assert_eq!(coeffs.len(), self.num_vars(), "row length must match variable count");
        self.rows.push(coeffs);
        self.senses.push(sense);
        self.rhs.push(rhs);
        self.rows.len() - 1
    }

    pub fn minimize(&mut self, objective: Vector) {
        self.direction = Direction::Minimize;
        self.objective = objective;
    }

    pub fn maximize(&mut self, objective: Vector) {
        self.direction = Direction::Maximize;
        self.objective = objective;
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Simplex::build(self)?.solve(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded.
    pub primal: Option<Vector>,
    pub objective_value: Option<Rational>,
    /// Row multipliers: dual optimal when optimal, Farkas combination when infeasible.
    pub dual: Vector,
    pub bound_lower: Vector,
    pub bound_upper: Vector,
    /// Improving direction when unbounded.
    pub ray: Option<Vector>,
}

/// Solves a general-form LP; `bounds = None` leaves every variable free.
pub fn solve_lp(
    direction: Direction,
    objective: &[Rational],
    constraints: &Matrix,
    senses: &[RowSense],
    rhs: &[Rational],
    bounds: Option<&[VarBound]>,
) -> Result<LpOutcome> {
    let n = objective.len();
    if constraints.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: constraints.cols(),
        });
    }
    let m = constraints.rows();
    if senses.len() != m || rhs.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: senses.len().min(rhs.len()),
        });
    }
    let mut lp = LinearProgram::new(n);
    lp.direction = direction;
    lp.objective = objective.to_vec();
    for i in 0..m {
        lp.add_row(constraints.row(i).to_vec(), senses[i], rhs[i].clone());
    }
    if let Some(b) = bounds {
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        lp.bounds = b.to_vec();
    }
    lp.solve()
}

impl LpOutcome {
    /// Re-checks the certificate against `lp` by exact substitution.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        let n = lp.num_vars();
        let m = lp.num_rows();
        if self.dual.len() != m || self.bound_lower.len() != n || self.bound_upper.len() != n {
            return false;
        }
        match self.status {
            LpStatus::Optimal => {
                let Some(x) = &self.primal else { return false };
                if !primal_feasible(lp, x) {
                    return false;
                }
                let goal: Vector = match lp.direction {
                    Direction::Maximize => lp.objective.clone(),
                    Direction::Minimize => lp.objective.iter().map(|c| -c).collect(),
                };
                let Some(dual_value) = self.combination_value(lp, &goal) else {
                    return false;
                };
                let primal_value = dot(&goal, x);
                if dual_value != primal_value {
                    return false;
                }
                self.objective_value.as_ref() == Some(&dot(&lp.objective, x))
            }
            LpStatus::Infeasible => {
                let zero = vec![Rational::zero(); n];
                matches!(self.combination_value(lp, &zero), Some(v) if v == -Rational::one())
            }
            LpStatus::Unbounded => {
                let (Some(x), Some(d)) = (&self.primal, &self.ray) else {
                    return false;
                };
                if !primal_feasible(lp, x) || d.len() != n {
                    return false;
                }
                for i in 0..m {
                    let ad = dot(&lp.rows[i], d);
                    let ok = match lp.senses[i] {
                        RowSense::Le => !ad.is_positive(),
                        RowSense::Ge => !ad.is_negative(),
                        RowSense::Eq => ad.is_zero(),
                    };
                    if !ok {
                        return false;
                    }
                }
                for (b, dj) in lp.bounds.iter().zip(d) {
                    if (b.lower.is_some() && dj.is_negative()) || (b.upper.is_some() && dj.is_positive()) {
                        return false;
                    }
                }
                let slope = dot(&lp.objective, d);
                match lp.direction {
                    Direction::Minimize => slope.is_negative(),
                    Direction::Maximize => slope.is_positive(),
                }
            }
        }
    }

    /// Checks multiplier signs and `Σ λ·ã + upper - lower = goal`; returns the
    /// matching combination of right-hand sides.
    fn combination_value(&self, lp: &LinearProgram, goal: &[Rational]) -> Option<Rational> {
        let n = lp.num_vars();
        let mut combo = vec![Rational::zero(); n];
        let mut value = Rational::zero();
        for i in 0..lp.num_rows() {
            let y = &self.dual[i];
            let sign = match lp.senses[i] {
                RowSense::Le => Rational::one(),
                RowSense::Ge => -Rational::one(),
                RowSense::Eq => Rational::one(),
            };
            if lp.senses[i] != RowSense::Eq && y.is_negative() {
                return None;
            }
            if y.is_zero() {
                continue;
            }
            let ys = y * &sign;
            for (c, a) in combo.iter_mut().zip(&lp.rows[i]) {
                *c += &ys * a;
            }
            value += &ys * &lp.rhs[i];
        }
        for j in 0..n {
            let lo = &self.bound_lower[j];
            let up = &self.bound_upper[j];
            if lo.is_negative() || up.is_negative() {
                return None;
            }
            if !lo.is_zero() {
                let l = lp.bounds[j].lower.as_ref()?;
                combo[j] -= lo;
                value -= lo * l;
            }
            if !up.is_zero() {
                let u = lp.bounds[j].upper.as_ref()?;
                combo[j] += up;
                value += up * u;
            }
        }
        if combo.as_slice() != goal {
            return None;
        }
        Some(value)
    }
}

fn primal_feasible(lp: &LinearProgram, x: &[Rational]) -> bool {
    if x.len() != lp.num_vars() {
        return false;
    }
    for i in 0..lp.num_rows() {
        let ax = dot(&lp.rows[i], x);
        let ok = match lp.senses[i] {
            RowSense::Le => ax <= lp.rhs[i],
            RowSense::Ge => ax >= lp.rhs[i],
            RowSense::Eq => ax == lp.rhs[i],
        };
        if !ok {
            return false;
        }
    }
    lp.bounds.iter().zip(x).all(|(b, xj)| {
        b.lower.as_ref().is_none_or(|l| xj >= l) && b.upper.as_ref().is_none_or(|u| xj <= u)
    })
}

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Debug)]
enum VarMap {
    /// `x = lower + s`
    Shift { col: usize, lower: Rational },
    /// `x = upper - s`
    Flip { col: usize, upper: Rational },
    /// `x = s⁺ - s⁻`
    Split { pos: usize, neg: usize },
}

struct Simplex {
    maps: Vec<VarMap>,
    /// Standard-form rows (after the sign flip making rhs >= 0).
    tab: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// +1 or -1 per standard row.
    flip: Vec<bool>,
    /// Number of user rows; further rows encode finite upper bounds.
    user_rows: usize,
    num_cols: usize,
    art_start: usize,
    basis: Vec<usize>,
    cost: Vec<Rational>,
    reduced: Vec<Rational>,
}

enum Phase {
    Optimal,
    Unbounded(usize),
}

impl Simplex {
    fn build(lp: &LinearProgram) -> Result<Self> {
        let n = lp.num_vars();
        for (i, r) in lp.rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: lp.rows[i].len(),
                });
            }
        }
        if lp.bounds.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: lp.bounds.len(),
            });
        }

        let mut maps = Vec::with_capacity(n);
        let mut num_struct = 0;
        // (column, upper - lower) for doubly bounded variables.
        let mut box_rows = Vec::new();
        for b in &lp.bounds {
            match (&b.lower, &b.upper) {
                (Some(l), u) => {
                    maps.push(VarMap::Shift {
                        col: num_struct,
                        lower: l.clone(),
                    });
                    if let Some(u) = u {
                        box_rows.push((num_struct, u - l));
                    }
                    num_struct += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Flip {
                        col: num_struct,
                        upper: u.clone(),
                    });
                    num_struct += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split {
                        pos: num_struct,
                        neg: num_struct + 1,
                    });
                    num_struct += 2;
                }
            }
        }

        // Rows in <= / = form over structural columns.
        let mut rows: Vec<(Vec<Rational>, bool, Rational)> = Vec::new();
        for i in 0..lp.num_rows() {
            let (sign, is_eq) = match lp.senses[i] {
                RowSense::Le => (Rational::one(), false),
                RowSense::Ge => (-Rational::one(), false),
                RowSense::Eq => (Rational::one(), true),
            };
            let mut coeffs = vec![Rational::zero(); num_struct];
            let mut rhs = &lp.rhs[i] * &sign;
            for (j, a) in lp.rows[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a * &sign;
                match &maps[j] {
                    VarMap::Shift { col, lower } => {
                        rhs -= &a * lower;
                        coeffs[*col] += &a;
                    }
                    VarMap::Flip { col, upper } => {
                        rhs -= &a * upper;
                        coeffs[*col] -= &a;
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs[*pos] += &a;
                        coeffs[*neg] -= &a;
                    }
                }
            }
            rows.push((coeffs, is_eq, rhs));
        }
        for (col, width) in box_rows {
            let mut coeffs = vec![Rational::zero(); num_struct];
            coeffs[col] = Rational::one();
            rows.push((coeffs, false, width));
        }

        let num_slack = rows.iter().filter(|r| !r.1).count();
        let mr = rows.len();
        let art_start = num_struct + num_slack;
        let num_cols = art_start + mr;
        let mut tab = Vec::with_capacity(mr);
        let mut rhs = Vec::with_capacity(mr);
        let mut flip = Vec::with_capacity(mr);
        let mut slack = num_struct;
        for (i, (coeffs, is_eq, b)) in rows.into_iter().enumerate() {
            let mut row = coeffs;
            row.resize(num_cols, Rational::zero());
            if !is_eq {
                row[slack] = Rational::one();
                slack += 1;
            }
            let negate = b.is_negative();
            if negate {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            row[art_start + i] = Rational::one();
            tab.push(row);
            rhs.push(if negate { -b } else { b });
            flip.push(negate);
        }
        Ok(Self {
            maps,
            tab,
            rhs,
            flip,
            user_rows: lp.num_rows(),
            num_cols,
            art_start,
            basis: (art_start..art_start + mr).collect(),
            cost: Vec::new(),
            reduced: Vec::new(),
        })
    }

    fn set_costs(&mut self, cost: Vec<Rational>) {
        let mut reduced = cost.clone();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (r, t) in reduced.iter_mut().zip(&self.tab[i]) {
                if !t.is_zero() {
                    *r -= cb * t;
                }
            }
        }
        self.cost = cost;
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.tab[r][c].recip();
        if !inv.is_one() {
            for x in self.tab[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = std::mem::take(&mut self.tab[r]);
        let prhs = self.rhs[r].clone();
        for i in 0..self.tab.len() {
            if i == r {
                continue;
            }
            let f = self.tab[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in self.tab[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        let f = self.reduced[c].clone();
        if !f.is_zero() {
            for (x, p) in self.reduced.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.tab[r] = prow;
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< limit`.
    fn iterate(&mut self, limit: usize) -> Phase {
        loop {
            let Some(c) = (0..limit).find(|&j| self.reduced[j].is_negative()) else {
                return Phase::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.tab.len() {
                let a = &self.tab[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Phase::Unbounded(c),
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    /// `c_B·B⁻¹` read from the artificial block, mapped back to unflipped rows.
    fn row_duals(&self) -> Vec<Rational> {
        let mr = self.tab.len();
        let mut y = vec![Rational::zero(); mr];
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &self.cost[b];
            if cb.is_zero() {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                let t = &self.tab[i][self.art_start + k];
                if !t.is_zero() {
                    *yk += cb * t;
                }
            }
        }
        for (k, yk) in y.iter_mut().enumerate() {
            if self.flip[k] {
                *yk = -&*yk;
            }
        }
        y
    }

    fn structural_values(&self) -> Vec<Rational> {
        let mut s = vec![Rational::zero(); self.num_cols];
        for (i, &b) in self.basis.iter().enumerate() {
            s[b] = self.rhs[i].clone();
        }
        s
    }

    fn primal(&self) -> Vector {
        let s = self.structural_values();
        self.maps
            .iter()
            .map(|m| match m {
                VarMap::Shift { col, lower } => lower + &s[*col],
                VarMap::Flip { col, upper } => upper - &s[*col],
                VarMap::Split { pos, neg } => &s[*pos] - &s[*neg],
            })
            .collect()
    }

    /// Turns std-form row duals into user multipliers; bound multipliers absorb the residual.
    fn certificate(&self, lp: &LinearProgram, y: &[Rational], goal: &[Rational]) -> (Vector, Vector, Vector) {
        let dual: Vector = y[..self.user_rows].iter().map(|v| -v).collect();
        let n = lp.num_vars();
        let mut residual = goal.to_vec();
        for (i, lam) in dual.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            let sign = if lp.senses[i] == RowSense::Ge {
                -Rational::one()
            } else {
                Rational::one()
            };
            let s = lam * sign;
            for (r, a) in residual.iter_mut().zip(&lp.rows[i]) {
                *r -= &s * a;
            }
        }
        let mut lower = vec![Rational::zero(); n];
        let mut upper = vec![Rational::zero(); n];
        for j in 0..n {
            if residual[j].is_positive() {
                upper[j] = residual[j].clone();
            } else if residual[j].is_negative() {
                lower[j] = -residual[j].clone();
            }
        }
        (dual, lower, upper)
    }

    fn solve(mut self, lp: &LinearProgram) -> Result<LpOutcome> {
        let n = lp.num_vars();
        let m = lp.num_rows();
        // Crossed bounds are infeasible on their own.
        for (j, b) in lp.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if l > u {
                    let w = (l - u).recip();
                    let mut lower = vec![Rational::zero(); n];
                    let mut upper = vec![Rational::zero(); n];
                    lower[j] = w.clone();
                    upper[j] = w;
                    return Ok(LpOutcome {
                        status: LpStatus::Infeasible,
                        primal: None,
                        objective_value: None,
                        dual: vec![Rational::zero(); m],
                        bound_lower: lower,
                        bound_upper: upper,
                        ray: None,
                    });
                }
            }
        }

        let mut phase1 = vec![Rational::zero(); self.num_cols];
        for c in phase1.iter_mut().skip(self.art_start) {
            *c = Rational::one();
        }
        self.set_costs(phase1);
        let _ = self.iterate(self.num_cols);
        let infeasibility: Rational = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| **b >= self.art_start)
            .map(|(_, r)| r.clone())
            .sum();
        if infeasibility.is_positive() {
            let y = self.row_duals();
            let zero = vec![Rational::zero(); n];
            let (mut dual, mut lower, mut upper) = self.certificate(lp, &y, &zero);
            // Normalize so the combination reads 0 <= -1.
            let mut value = Rational::zero();
            for i in 0..m {
                let s = if lp.senses[i] == RowSense::Ge {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                value += &dual[i] * s * &lp.rhs[i];
            }
            for j in 0..n {
                if let Some(u) = &lp.bounds[j].upper {
                    value += &upper[j] * u;
                }
                if let Some(l) = &lp.bounds[j].lower {
                    value -= &lower[j] * l;
                }
            }
            if !value.is_negative() {
                return Err(Error::invariant("phase-one dual does not certify infeasibility"));
            }
            let s = -value.recip();
            for v in dual.iter_mut().chain(lower.iter_mut()).chain(upper.iter_mut()) {
                *v *= &s;
            }
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                primal: None,
                objective_value: None,
                dual,
                bound_lower: lower,
                bound_upper: upper,
                ray: None,
            });
        }

        // Drive remaining (zero-level) artificials out of the basis where possible.
        for r in 0..self.basis.len() {
            if self.basis[r] < self.art_start {
                continue;
            }
            if let Some(c) = (0..self.art_start).find(|&j| !self.tab[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }

        let sign = match lp.direction {
            Direction::Minimize => Rational::one(),
            Direction::Maximize => -Rational::one(),
        };
        let mut cost = vec![Rational::zero(); self.num_cols];
        for (j, m) in self.maps.iter().enumerate() {
            let c = &lp.objective[j] * &sign;
            match m {
                VarMap::Shift { col, .. } => cost[*col] = c,
                VarMap::Flip { col, .. } => cost[*col] = -c,
                VarMap::Split { pos, neg } => {
                    cost[*pos] = c.clone();
                    cost[*neg] = -c;
                }
            }
        }
        self.set_costs(cost);
        match self.iterate(self.art_start) {
            Phase::Optimal => {
                let x = self.primal();
                let y = self.row_duals();
                let goal: Vector = lp.objective.iter().map(|c| -(c * &sign)).collect();
                let (dual, lower, upper) = self.certificate(lp, &y, &goal);
                let value = dot(&lp.objective, &x);
                Ok(LpOutcome {
                    status: LpStatus::Optimal,
                    primal: Some(x),
                    objective_value: Some(value),
                    dual,
                    bound_lower: lower,
                    bound_upper: upper,
                    ray: None,
                })
            }
            Phase::Unbounded(c) => {
                let x = self.primal();
                let mut ds = vec![Rational::zero(); self.num_cols];
                ds[c] = Rational::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    ds[b] = -self.tab[i][c].clone();
                }
                let ray = self
                    .maps
                    .iter()
                    .map(|m| match m {
                        VarMap::Shift { col, .. } => ds[*col].clone(),
                        VarMap::Flip { col, .. } => -ds[*col].clone(),
                        VarMap::Split { pos, neg } => &ds[*pos] - &ds[*neg],
                    })
                    .collect();
                Ok(LpOutcome {
                    status: LpStatus::Unbounded,
                    primal: Some(x),
                    objective_value: None,
                    dual: vec![Rational::zero(); m],
                    bound_lower: vec![Rational::zero(); n],
                    bound_upper: vec![Rational::zero(); n],
                    ray: Some(ray),
                })
            }
        }
    }
}
