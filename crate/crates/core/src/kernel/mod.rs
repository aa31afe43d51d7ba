//! Exact arithmetic, linear programming and polyhedral conversion.

pub mod dd;
pub mod ldlt;
pub mod lp;
pub mod matrix;
pub mod rational;
