//! Independent convex hull oracle.
//!
//! Enumerates hyperplanes through d-subsets of the input and keeps the
//! supporting ones. Works on homogeneous integer points with its own
//! fraction-free arithmetic; side tests go through a floating point filter
//! with a static error bound and fall back to exact integers when the sign is
//! not certain. Shares nothing with the main pipeline beyond the output types.

use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};
use twofloat::TwoFloat;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::geometry::incidence::IncidenceStructure;
use crate::geometry::polytope::{HPolytope, Halfspace, VPolytope};
use crate::rational::{self, Point, Rational};

pub const ORACLE_LIMIT_VAR: &str = "POLYFORGE_ORACLE_LIMIT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_dim: usize,
    pub max_points: usize,
}

impl Default for OracleBounds {
    fn default() -> Self {
        OracleBounds { max_dim: 5, max_points: 200 }
    }
}

impl OracleBounds {
    /// Defaults, overridden by `POLYFORGE_ORACLE_LIMIT` as `points` or
    /// `dim:points`.
    pub fn from_env() -> Self {
        let mut b = OracleBounds::default();
        if let Ok(s) = std::env::var(ORACLE_LIMIT_VAR) {
            match s.split_once(':') {
                Some((d, p)) => {
                    if let (Ok(d), Ok(p)) = (d.trim().parse(), p.trim().parse()) {
                        b = OracleBounds { max_dim: d, max_points: p };
                    }
                }
                None => {
                    if let Ok(p) = s.trim().parse() {
                        b.max_points = p;
                    }
                }
            }
        }
        b
    }
}

pub type OracleHull = (VPolytope, HPolytope, IncidenceStructure);

/// Exact hull of `points`: vertices in input order (duplicates dropped),
/// facets sorted, and vertex-facet incidence between them.
pub fn brute_force_hull(points: &[Point], bounds: OracleBounds) -> Result<OracleHull> {
    let d = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::Input("points of mixed dimension".into()));
    }
    if d > bounds.max_dim.min(20) || points.len() > bounds.max_points {
        return Err(Error::OracleBoundsExceeded {
            dim: d,
            points: points.len(),
            max_dim: bounds.max_dim,
            max_points: bounds.max_points,
        });
    }
    let mut uniq: Vec<Point> = Vec::new();
    for p in points {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    if d == 0 || uniq.len() < d + 1 {
        return Err(Error::Degenerate);
    }
    let homs: Vec<Vec<BigInt>> = uniq.iter().map(|p| homogeneous(p)).collect();
    let hom_floats: Vec<Vec<f64>> = homs.iter().map(|h| scaled_floats(h)).collect();
    let n = uniq.len();

    let mut facets: Vec<(Vec<BigInt>, BigInt, VertexSet)> = Vec::new();
    let mut seen: BTreeSet<(Vec<BigInt>, BigInt)> = BTreeSet::new();
    // facets_at[i]: found facets containing point i, as a bitset
    let mut facets_at: Vec<Vec<u64>> = vec![Vec::new(); n];
    let filter = FloatFilter::new(d);
    let mut minors = Minors::new(d);
    let mut refiner = Refiner::new(&homs);

    for i0 in 0..n {
        let diffs: Vec<Vec<f64>> = (0..n).map(|k| difference_f64(&homs[k], &homs[i0])).collect();
        refiner.reset(i0);
        for rest in (i0 + 1..n).combinations(d - 1) {
            let mut subset = Vec::with_capacity(d);
            subset.push(i0);
            subset.extend(rest);
            if share_found_facet(&subset, &facets_at) {
                continue;
            }
            let mut h = Hyperplane::through(&subset, &diffs, &mut minors);
            let Some((tight, side)) = h.supporting_side(&homs, &hom_floats, &diffs, &filter, &mut refiner) else {
                continue;
            };
            if tight.len() == n {
                return Err(Error::Degenerate);
            }
            let (normal, offset) = h.oriented(&homs, side);
            if !seen.insert((normal.clone(), offset.clone())) {
                continue;
            }
            let fi = facets.len();
            for i in tight.iter() {
                let w = fi / 64;
                if facets_at[i].len() <= w {
                    facets_at[i].resize(w + 1, 0);
                }
                facets_at[i][w] |= 1 << (fi % 64);
            }
            facets.push((normal, offset, tight));
        }
    }
    if facets.is_empty() {
        return Err(Error::Degenerate);
    }
    // keep only facet-defining hyperplanes: tight sets spanning dimension d-1
    facets.retain(|(_, _, tight)| rank_int(tight.iter().map(|i| homs[i].clone()).collect()) == d);
    facets.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));

    let vertex_ids: Vec<usize> = (0..n)
        .filter(|&i| {
            let normals: Vec<Vec<BigInt>> = facets
                .iter()
                .filter(|f| f.2.contains(i))
                .map(|f| f.0.clone())
                .collect();
            rank_int(normals) == d
        })
        .collect();
    let renumber: HashMap<usize, usize> = vertex_ids.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let rows: Vec<Halfspace> = facets
        .iter()
        .map(|(nrm, off, _)| {
            Halfspace::new(
                nrm.iter().map(|x| Rational::from_integer(x.clone())).collect(),
                Rational::from_integer(off.clone()),
            )
        })
        .collect();
    let sets: Vec<VertexSet> = facets
        .iter()
        .map(|f| VertexSet::from_indices(vertex_ids.len(), f.2.iter().filter_map(|i| renumber.get(&i).copied())))
        .collect();
    Ok((
        VPolytope {
            dim: d,
            vertices: vertex_ids.iter().map(|&i| uniq[i].clone()).collect(),
        },
        HPolytope { dim: d, rows },
        IncidenceStructure::new(d, vertex_ids.len(), sets),
    ))
}

/// `(D p, D)` with `D > 0` the lcm of the denominators of `p`.
fn homogeneous(p: &Point) -> Vec<BigInt> {
    let den = p.iter().fold(BigInt::one(), |acc, x| rational::lcm(&acc, x.denom()));
    let mut v: Vec<BigInt> = p.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    v.push(den);
    v
}

/// Float image of an integer vector times a common power of two that brings
/// the largest entry near 1. Each entry keeps a relative error of about one
/// unit roundoff; entries that underflow are covered by the filter's
/// absolute term.
fn scaled_floats(v: &[BigInt]) -> Vec<f64> {
    let top = v.iter().map(BigInt::bits).max().unwrap_or(0) as i64;
    v.iter()
        .map(|x| {
            let shift = (x.bits() as i64 - 60).max(0);
            let mantissa = (x >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let e = (shift - top).clamp(-2000, 0) as i32;
            mantissa * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
        })
        .collect()
}

/// `p - q` in floating point from homogeneous integers, each coordinate
/// with a relative error of a few units of roundoff.
fn difference_f64(p: &[BigInt], q: &[BigInt]) -> Vec<f64> {
    let d = p.len() - 1;
    let den = &p[d] * &q[d];
    (0..d).map(|j| ratio_f64(&(&p[j] * &q[d] - &q[j] * &p[d]), &den)).collect()
}

/// `num / den` for `den > 0`, without overflow for large operands.
fn ratio_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let top = |x: &BigInt| {
        let shift = (x.bits() as i64 - 60).max(0);
        ((x >> shift as usize).to_f64().unwrap_or(f64::NAN), shift)
    };
    let (a, sa) = top(num);
    let (b, sb) = top(den);
    let e = (sa - sb).clamp(-2000, 2000) as i32;
    let q = a / b;
    if e.abs() > 1000 {
        q * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    } else {
        q * 2f64.powi(e)
    }
}

/// `num / den` for `den > 0` as a double-double, to about 105 bits.
fn ratio_dd(num: &BigInt, den: &BigInt) -> TwoFloat {
    if num.is_zero() {
        return TwoFloat::from(0.0);
    }
    let s = 110 + den.bits() as i64 - num.bits() as i64;
    let q = if s >= 0 { (num << s as usize) / den } else { num / (den << (-s) as usize) };
    let hi = q.to_f64().unwrap_or(f64::NAN);
    let lo = BigInt::from_f64(hi).map_or(f64::NAN, |h| (&q - h).to_f64().unwrap_or(f64::NAN));
    let e = (-s).clamp(-2000, 2000) as i32;
    let scale = |x: f64| x * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
    TwoFloat::new_add(scale(hi), scale(lo))
}

fn difference_dd(p: &[BigInt], q: &[BigInt]) -> Vec<TwoFloat> {
    let d = p.len() - 1;
    let den = &p[d] * &q[d];
    (0..d).map(|j| ratio_dd(&(&p[j] * &q[d] - &q[j] * &p[d]), &den)).collect()
}

/// Second filter stage in double-double arithmetic for the points the
/// `f64` pass leaves open. Differences to the base point are computed on
/// first use.
struct Refiner<'h> {
    homs: &'h [Vec<BigInt>],
    base: usize,
    diffs: Vec<Vec<TwoFloat>>,
    minors: Minors<TwoFloat>,
    filter: FloatFilter,
}

impl<'h> Refiner<'h> {
    fn new(homs: &'h [Vec<BigInt>]) -> Self {
        let d = homs[0].len() - 1;
        Refiner { homs, base: 0, diffs: Vec::new(), minors: Minors::new(d), filter: FloatFilter::double_double(d) }
    }

    fn reset(&mut self, base: usize) {
        self.base = base;
        self.diffs.clear();
    }

    /// Decides what it can of `pending` against the hyperplane through
    /// `subset` (whose first point is the base). `None` on opposite sides;
    /// otherwise the points still open.
    fn refine(&mut self, subset: &[usize], pending: Vec<usize>, side: &mut i8) -> Option<Vec<usize>> {
        if self.diffs.is_empty() {
            let b = &self.homs[self.base];
            self.diffs = self.homs.iter().map(|h| difference_dd(h, b)).collect();
        }
        let d = self.homs[0].len() - 1;
        let rows: Vec<&[TwoFloat]> = subset[1..].iter().map(|&i| self.diffs[i].as_slice()).collect();
        self.minors.fill(&rows);
        let all = (1usize << d) - 1;
        let (hf, habs): (Vec<TwoFloat>, Vec<f64>) = (0..d)
            .map(|j| {
                let m = all & !(1 << j);
                let v = self.minors.val[m];
                (if j % 2 == 0 { v } else { -v }, self.minors.mag[m])
            })
            .unzip();
        let mut open = Vec::new();
        for k in pending {
            let mut v = TwoFloat::from(0.0);
            let mut a = 0.0;
            for (j, x) in self.diffs[k].iter().enumerate() {
                v = v + hf[j] * *x;
                a += (habs[j] + hf[j].approx().abs()) * x.approx().abs();
            }
            match self.filter.sign(v.approx(), a) {
                Some(s) if *side == 0 => *side = s,
                Some(s) if s != *side => return None,
                Some(_) => {}
                None => open.push(k),
            }
        }
        Some(open)
    }
}

fn share_found_facet(subset: &[usize], facets_at: &[Vec<u64>]) -> bool {
    let first = &facets_at[subset[0]];
    (0..first.len()).any(|w| {
        subset
            .iter()
            .fold(first[w], |acc, &i| acc & facets_at[i].get(w).copied().unwrap_or(0))
            != 0
    })
}

struct FloatFilter {
    /// Relative error factor times the unit roundoff.
    eps: f64,
}

impl FloatFilter {
    fn new(d: usize) -> Self {
        let fact: f64 = (1..=d + 1).map(|k| k as f64).product();
        FloatFilter { eps: (8.0 * fact + 16.0) * f64::EPSILON }
    }

    /// The same bound for double-double arithmetic, whose operations keep a
    /// relative error of a few `2^-106`.
    fn double_double(d: usize) -> Self {
        let fact: f64 = (1..=d + 1).map(|k| k as f64).product();
        FloatFilter { eps: (8.0 * fact + 16.0) * 2f64.powi(-100) }
    }

    /// Sign of `value` if it is certain given the magnitude bound.
    fn sign(&self, value: f64, magnitude: f64) -> Option<i8> {
        if !value.is_finite() || !magnitude.is_finite() {
            return None;
        }
        let bound = self.eps * magnitude + 1e-300;
        if value > bound {
            Some(1)
        } else if value < -bound {
            Some(-1)
        } else {
            None
        }
    }
}

/// Hyperplane through `d` points. The float normal comes from the
/// differences to the first point; the exact one is the homogeneous
/// cofactor vector `h` with `h . P = det[P; P_1; ...; P_d]`, whose sign on a
/// point is `(-1)^(d+1)` times the float side.
struct Hyperplane<'a> {
    subset: &'a [usize],
    hf: Vec<f64>,
    habs: Vec<f64>,
    exact: Option<Vec<BigInt>>,
    exact_f: Vec<f64>,
}

impl<'a> Hyperplane<'a> {
    fn through(subset: &'a [usize], diffs: &[Vec<f64>], minors: &mut Minors<f64>) -> Self {
        let d = diffs[0].len();
        let rows: Vec<&[f64]> = subset[1..].iter().map(|&i| diffs[i].as_slice()).collect();
        minors.fill(&rows);
        let all = (1usize << d) - 1;
        let mut hf = Vec::with_capacity(d);
        let mut habs = Vec::with_capacity(d);
        for j in 0..d {
            let m = all & !(1 << j);
            let v = minors.val[m];
            hf.push(if j % 2 == 0 { v } else { -v });
            habs.push(minors.mag[m]);
        }
        Hyperplane { subset, hf, habs, exact: None, exact_f: Vec::new() }
    }

    fn exact_normal(&mut self, homs: &[Vec<BigInt>]) -> &Vec<BigInt> {
        if self.exact.is_none() {
            let w = homs[0].len();
            let n: Vec<BigInt> = (0..w)
                .map(|j| {
                    let m: Vec<Vec<BigInt>> = self
                        .subset
                        .iter()
                        .map(|&i| homs[i].iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                        .collect();
                    let det = det_int(m);
                    if j % 2 == 0 {
                        det
                    } else {
                        -det
                    }
                })
                .collect();
            self.exact_f = scaled_floats(&n);
            self.exact = Some(n);
        }
        self.exact.as_ref().unwrap()
    }

    /// Side of point `k` against the exact normal: first through a float
    /// filter on the rounded normal, then exactly.
    fn exact_side(&mut self, homs: &[Vec<BigInt>], hom_floats: &[Vec<f64>], k: usize, filter: &FloatFilter) -> i8 {
        let flip = if homs[k].len() % 2 == 0 { 1 } else { -1 };
        self.exact_normal(homs);
        let (mut v, mut a) = (0.0, 0.0);
        for (x, y) in self.exact_f.iter().zip(&hom_floats[k]) {
            v += x * y;
            a += (x * y).abs();
        }
        if let Some(s) = filter.sign(v, a) {
            return flip * s;
        }
        let h = self.exact.as_ref().unwrap();
        let s: BigInt = h.iter().zip(&homs[k]).map(|(a, x)| a * x).sum();
        flip * match s.sign() {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::NoSign => 0,
        }
    }

    /// Tight set and the strict side if all points are weakly on one side
    /// and the subset spans a hyperplane. Points the filter cannot decide are
    /// resolved exactly only after the decided ones agree.
    fn supporting_side(
        &mut self,
        homs: &[Vec<BigInt>],
        hom_floats: &[Vec<f64>],
        diffs: &[Vec<f64>],
        filter: &FloatFilter,
        refiner: &mut Refiner,
    ) -> Option<(VertexSet, i8)> {
        let n = homs.len();
        let mut side = 0i8;
        let mut pending = Vec::new();
        for k in 0..n {
            if self.subset.contains(&k) {
                continue;
            }
            let (mut v, mut a) = (0.0, 0.0);
            for (j, x) in diffs[k].iter().enumerate() {
                v += self.hf[j] * x;
                a += (self.habs[j] + self.hf[j].abs()) * x.abs();
            }
            match filter.sign(v, a) {
                Some(s) if side == 0 => side = s,
                Some(s) if s != side => return None,
                Some(_) => {}
                None => pending.push(k),
            }
        }
        if !pending.is_empty() {
            pending = refiner.refine(self.subset, pending, &mut side)?;
        }
        if !pending.is_empty() && self.exact_normal(homs).iter().all(Zero::is_zero) {
            return None;
        }
        let mut tight = VertexSet::from_indices(n, self.subset.iter().copied());
        for k in pending {
            match self.exact_side(homs, hom_floats, k, filter) {
                0 => tight.insert(k),
                s if side == 0 => side = s,
                s if s != side => return None,
                _ => {}
            }
        }
        Some((tight, side))
    }

    /// Primitive `(normal, offset)` with `normal . x <= offset` on all points,
    /// given the float-convention side of the other points.
    fn oriented(&mut self, homs: &[Vec<BigInt>], side: i8) -> (Vec<BigInt>, BigInt) {
        let mut h = self.exact_normal(homs).clone();
        let exact_side = if homs[0].len() % 2 == 0 { side } else { -side };
        if exact_side > 0 {
            h.iter_mut().for_each(|x| *x = -&*x);
        }
        let g = h.iter().fold(BigInt::zero(), |acc, x| if acc.is_one() { acc } else { rational::gcd(&acc, x) });
        let offset = -h.pop().unwrap() / &g;
        (h.iter().map(|x| x / &g).collect(), offset)
    }
}

/// Minors of the trailing rows of `rows` (each of length `w`), indexed by
/// column bitmask: `val[m]` is the determinant of the last `popcount(m)`
/// rows on the columns of `m`, expanded along its first row, and `mag[m]`
/// the same expansion over absolute values.
struct Minors<T> {
    val: Vec<T>,
    mag: Vec<f64>,
}

impl<T: Scalar> Minors<T> {
    fn new(w: usize) -> Self {
        Minors { val: vec![T::zero(); 1 << w], mag: vec![0.0; 1 << w] }
    }

    fn fill(&mut self, rows: &[&[T]]) {
        let r = rows.len();
        self.val[0] = T::one();
        self.mag[0] = 1.0;
        for mask in 1..self.val.len() {
            let p = mask.count_ones() as usize;
            if p > r {
                continue;
            }
            let row = rows[r - p];
            let (mut v, mut a) = (T::zero(), 0.0);
            let mut rest = mask;
            let mut k = 0;
            while rest != 0 {
                let c = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let x = row[c];
                if x.approx() != 0.0 {
                    let sub = mask & !(1 << c);
                    v = if k % 2 == 0 { v + x * self.val[sub] } else { v - x * self.val[sub] };
                    a += x.approx().abs() * self.mag[sub];
                }
                k += 1;
            }
            self.val[mask] = v;
            self.mag[mask] = a;
        }
    }
}

/// Float arithmetic the filters run in: plain `f64` or double-double.
trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn zero() -> Self;
    fn one() -> Self;
    /// Nearest `f64`.
    fn approx(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn approx(self) -> f64 {
        self
    }
}

impl Scalar for TwoFloat {
    fn zero() -> Self {
        TwoFloat::from(0.0)
    }
    fn one() -> Self {
        TwoFloat::from(1.0)
    }
    fn approx(self) -> f64 {
        self.hi() + self.lo()
    }
}

/// Fraction-free (Bareiss) determinant.
fn det_int(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank by fraction-free elimination.
fn rank_int(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            for j in c..cols {
                m[i][j] = &m[i][j] * &a - &m[r][j] * &b;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ipoint, rat};

    #[test]
    fn cube_and_cross_polytope() {
        let cube: Vec<Point> = (0..8)
            .map(|v: i64| ipoint(&[(v & 1) * 2 - 1, ((v >> 1) & 1) * 2 - 1, ((v >> 2) & 1) * 2 - 1]))
            .collect();
        let (v, h, inc) = brute_force_hull(&cube, OracleBounds::default()).unwrap();
        assert_eq!(v.vertices.len(), 8);
        assert_eq!(h.rows.len(), 6);
        assert!(inc.facet_sets().iter().all(|s| s.len() == 4));

        let mut cross = Vec::new();
        for k in 0..4 {
            let mut e = vec![0i64; 4];
            e[k] = 1;
            cross.push(ipoint(&e));
            e[k] = -1;
            cross.push(ipoint(&e));
        }
        let (_, h, _) = brute_force_hull(&cross, OracleBounds::default()).unwrap();
        assert_eq!(h.rows.len(), 16);
    }

    #[test]
    fn interior_and_boundary_points_are_not_vertices() {
        let pts = vec![
            ipoint(&[0, 0]),
            ipoint(&[2, 0]),
            ipoint(&[0, 2]),
            ipoint(&[1, 1]),
            vec![rat(1, 3), rat(1, 3)],
        ];
        let (v, h, _) = brute_force_hull(&pts, OracleBounds::default()).unwrap();
        assert_eq!(v.vertices.len(), 3);
        assert_eq!(h.rows.len(), 3);
    }

    #[test]
    fn bounds_and_degeneracy() {
        let flat = vec![ipoint(&[0, 0]), ipoint(&[1, 1]), ipoint(&[2, 2])];
        assert_eq!(brute_force_hull(&flat, OracleBounds::default()).unwrap_err(), Error::Degenerate);
        let many: Vec<Point> = (0..10).map(|i| ipoint(&[i, i * i])).collect();
        let small = OracleBounds { max_dim: 5, max_points: 5 };
        assert!(matches!(brute_force_hull(&many, small), Err(Error::OracleBoundsExceeded { .. })));
    }

    #[test]
    fn integer_kernels() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(4)],
        ];
        assert_eq!(det_int(m.clone()), BigInt::from(18));
        assert_eq!(rank_int(m), 3);
        let rows: [&[f64]; 2] = [&[0.0, 1.0, 2.0], &[1.0, 0.0, -3.0]];
        let mut minors = Minors::new(3);
        minors.fill(&rows);
        assert_eq!((minors.val[0b011], minors.mag[0b011]), (-1.0, 1.0));
        assert_eq!((minors.val[0b110], minors.mag[0b110]), (-3.0, 3.0));
        assert_eq!((minors.val[0b101], minors.mag[0b101]), (-2.0, 2.0));
    }

    #[test]
    fn double_double_ratio() {
        let third = ratio_dd(&BigInt::from(1), &BigInt::from(3));
        let want = TwoFloat::new_div(1.0, 3.0);
        assert!((third - want).approx().abs() < 1e-31);
        let big = BigInt::from(7) << 3000usize;
        let x = ratio_dd(&-(&big), &(big.clone() * 2));
        assert_eq!((x.hi(), x.lo()), (-0.5, 0.0));
    }

}
