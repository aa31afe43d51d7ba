//! Fixtures shared by the benchmarks.

use aoukit::kernel::lp::{LinearProgram, RowSense, VarBound};
use aoukit::{Rational, Vector};

/// Integer generators of the cone over a regular-ish polygon with `k`
/// vertices, lifted to height one.
pub fn polygon_cone(k: usize) -> Vec<Vector> {
    let pts: [(i64, i64); 8] = [(4, 0), (3, 3), (0, 4), (-3, 3), (-4, 0), (-3, -3), (0, -4), (3, -3)];
    pts.iter()
        .take(k.min(8))
        .map(|&(x, y)| vec![Rational::from_integer(4.into()), Rational::from_integer(x.into()), Rational::from_integer(y.into())])
        .collect()
}

/// `max Σx` over `{x >= 0, A·x <= b}` with a dense integer `A` of size `m × n`.
pub fn dense_lp(m: usize, n: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(n);
    lp.bounds = vec![VarBound::nonneg(); n];
    for i in 0..m {
        let row: Vector = (0..n)
            .map(|j| Rational::from_integer((((i * 7 + j * 3) % 5) as i64 + 1).into()))
            .collect();
        lp.add_row(row, RowSense::Le, Rational::from_integer(((i % 4) as i64 + 3).into()));
    }
    lp.maximize(vec![Rational::from_integer(1.into()); n]);
    lp
}
