//! Double description conversion between inequality and generator form.
//!
//! The core routine enumerates extreme rays of a pointed cone `{u : B·u >= 0}`
//! with integer arithmetic, inserting rows in index order and testing
//! adjacency combinatorially. General cones are reduced to that case by
//! parametrizing the equality subspace and splitting off the lineality space.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::Matrix;
use super::rational::{normalize_integers, primitive, primitive_integers, Rational, Vector};
use crate::error::{Error, Result};

/// Generator form of a polyhedral cone: `cone(rays) + span(lineality)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generators {
    pub rays: Vec<Vector>,
    pub lineality: Vec<Vector>,
}

/// Inequality form: `{x : f·x >= 0 for f in facets, g·x = 0 for g in equalities}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Facets {
    pub facets: Vec<Vector>,
    pub equalities: Vec<Vector>,
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

struct Ray {
    coords: Vec<BigInt>,
    zeros: Bits,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Extreme rays of `{u : rows·u >= 0}` where the integer matrix `rows` has
/// full column rank `dim` (so the cone is pointed). Rays are primitive.
fn pointed_rays(rows: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if dim == 0 {
        return Vec::new();
    }
    let m = rows.len();
    // First `dim` linearly independent rows in index order.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let rv: Vector = r.iter().cloned().map(Rational::from_integer).collect();
        let mut trial = basis.clone();
        trial.push(rv);
        let rank = Matrix::from_rows(&trial, dim).expect("row width").rank();
        if rank == trial.len() {
            basis = trial;
            chosen.push(i);
            if chosen.len() == dim {
                break;
            }
        }
    }
    debug_assert_eq!(chosen.len(), dim, "caller guarantees full column rank");
    let b = Matrix::from_rows(&basis, dim).expect("square");
    let inv = b.inverse().expect("independent rows");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|k| {
            let col = inv.col(k);
            let coords = primitive_integers(&col);
            let mut zeros = Bits::new(m);
            for (t, &i) in chosen.iter().enumerate() {
                if t != k {
                    zeros.set(i);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    for i in 0..m {
        if chosen.contains(&i) {
            continue;
        }
        let row = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| int_dot(row, &r.coords)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < dim {
                    continue;
                }
                let adjacent = (0..rays.len())
                    .all(|t| t == p || t == q || !common.subset_of(&rays[t].zeros));
                if !adjacent {
                    continue;
                }
                let a = &vals[p];
                let c = -&vals[q];
                let mut coords: Vec<BigInt> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(x, y)| a * x + &c * y)
                    .collect();
                normalize_integers(&mut coords);
                let mut zeros = common;
                zeros.set(i);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(vals) {
            if v.is_negative() {
                continue;
            }
            if v.is_zero() {
                r.zeros.set(i);
            }
            next.push(r);
        }
        next.extend(fresh);
        rays = next;
    }
    rays.into_iter().map(|r| r.coords).collect()
}

fn to_integer_rows(rows: &[Vector]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| primitive_integers(r)).collect()
}

/// Converts `{x : ineqs·x >= 0, eqs·x = 0}` in `R^dim` to generator form.
/// Rays are primitive integer vectors in descending lexicographic order.
pub fn generators_from_inequalities(ineqs: &[Vector], eqs: &[Vector], dim: usize) -> Result<Generators> {
    for r in ineqs.iter().chain(eqs) {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
    }
    // x = S·t parametrizes the equality subspace.
    let subspace: Vec<Vector> = if eqs.is_empty() {
        (0..dim).map(|i| super::rational::unit_vector(dim, i)).collect()
    } else {
        Matrix::from_rows(eqs, dim)?.nullspace()
    };
    let k = subspace.len();
    if k == 0 {
        return Ok(Generators::default());
    }
    let s = Matrix::from_cols(&subspace, dim)?;
    // Constraints in t-coordinates.
    let m_t: Vec<Vector> = ineqs
        .iter()
        .map(|r| s.vec_mul(r))
        .collect::<Result<Vec<_>>>()?;
    let mt = Matrix::from_rows(&m_t, k)?;
    let lineality_t = mt.nullspace();
    let rowspace = mt.row_space();
    let r = rowspace.len();
    let lineality: Vec<Vector> = lineality_t
        .iter()
        .map(|l| s.mul_vec(l).map(|x| primitive(&x)))
        .collect::<Result<Vec<_>>>()?;
    if r == 0 {
        return Ok(Generators {
            rays: Vec::new(),
            lineality,
        });
    }
    // t = Rᵀ·u restricted to the row space, where the cone is pointed.
    let rt = Matrix::from_cols(&rowspace, k)?;
    let b = mt.mul(&rt)?;
    let int_rows = to_integer_rows(&b.row_vecs());
    let u_rays = pointed_rays(&int_rows, r);
    let back = s.mul(&rt)?;
    let mut rays: Vec<Vector> = u_rays
        .into_iter()
        .map(|u| {
            let uv: Vector = u.into_iter().map(Rational::from_integer).collect();
            back.mul_vec(&uv).map(|x| primitive(&x))
        })
        .collect::<Result<Vec<_>>>()?;
    sort_desc(&mut rays);
    rays.dedup();
    Ok(Generators { rays, lineality })
}

/// Converts `cone(gens)` to a minimal inequality description.
pub fn inequalities_from_generators(gens: &[Vector], dim: usize) -> Result<Facets> {
    let dual = generators_from_inequalities(gens, &[], dim)?;
    Ok(Facets {
        facets: dual.rays,
        equalities: dual.lineality,
    })
}

/// Extreme rays of a pointed cone given by inequalities; lineality is an error.
pub fn extreme_rays_h(ineqs: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let g = generators_from_inequalities(ineqs, &[], dim)?;
    if !g.lineality.is_empty() {
        return Err(Error::NonPointed { lineality: g.lineality });
    }
    Ok(g.rays)
}

/// Extreme rays of `cone(gens)`; lineality is an error.
pub fn extreme_rays_v(gens: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let h = inequalities_from_generators(gens, dim)?;
    let g = generators_from_inequalities(&h.facets, &h.equalities, dim)?;
    if !g.lineality.is_empty() {
        return Err(Error::NonPointed { lineality: g.lineality });
    }
    Ok(g.rays)
}

/// Vertices of the polytope `{x : a·x + c >= 0 for (a, c) in rows}`.
pub fn polytope_vertices(rows: &[(Vector, Rational)], dim: usize) -> Result<Vec<Vector>> {
    let mut hom: Vec<Vector> = rows
        .iter()
        .map(|(a, c)| {
            let mut r = a.clone();
            r.push(c.clone());
            r
        })
        .collect();
    let mut t = vec![Rational::zero(); dim + 1];
    t[dim] = Rational::from_integer(1.into());
    hom.push(t);
    let g = generators_from_inequalities(&hom, &[], dim + 1)?;
    if !g.lineality.is_empty() {
        return Err(Error::Unbounded);
    }
    let mut verts = Vec::with_capacity(g.rays.len());
    for r in g.rays {
        let last = r[dim].clone();
        if last.is_zero() {
            return Err(Error::Unbounded);
        }
        verts.push(r[..dim].iter().map(|x| x / &last).collect::<Vector>());
    }
    sort_desc(&mut verts);
    Ok(verts)
}

/// Facets `a·x <= 1` of the convex hull of `points`, assumed to contain the
/// origin in its interior.
pub fn polytope_facets_through_unit(points: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    // (a, b) with a·p <= b for all p, i.e. (-a, b)·(p, 1) >= 0.
    let hom: Vec<Vector> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(Rational::from_integer(1.into()));
            r
        })
        .collect();
    let g = generators_from_inequalities(&hom, &[], dim + 1)?;
    if !g.lineality.is_empty() {
        return Err(Error::invariant("point set is not full-dimensional"));
    }
    let mut out = Vec::new();
    for r in g.rays {
        // ray (w, b) means w·p + b >= 0, i.e. (-w)·p <= b.
        let b = r[dim].clone();
        if !b.is_positive() {
            return Err(Error::invariant("origin is not interior to the point set"));
        }
        out.push(r[..dim].iter().map(|x| -x / &b).collect::<Vector>());
    }
    sort_desc(&mut out);
    Ok(out)
}

pub(crate) fn sort_desc(v: &mut [Vector]) {
    v.sort_by(|a, b| b.cmp(a));
}
