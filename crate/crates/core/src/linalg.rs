//! Dense exact linear algebra over [`Rational`].

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Point, Rational};

/// Row-major dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    #[serde(with = "rational::serde_rat_mat")]
    rows: Vec<Vec<Rational>>,
    #[serde(skip)]
    ncols_hint: usize,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let ncols_hint = rows.first().map_or(0, Vec::len);
        debug_assert!(rows.iter().all(|r| r.len() == ncols_hint));
        Matrix { rows, ncols_hint }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix::from_rows(vec![vec![Rational::zero(); ncols]; nrows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(self.ncols_hint, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.rows[i][j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let (r, c) = (self.nrows(), self.ncols());
        let mut t = Matrix::zeros(c, r);
        for i in 0..r {
            for j in 0..c {
                t.rows[j][i] = self.rows[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols(), other.nrows());
        let (r, k, c) = (self.nrows(), self.ncols(), other.ncols());
        let mut out = Matrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = Rational::zero();
                for l in 0..k {
                    if !self.rows[i][l].is_zero() && !other.rows[l][j].is_zero() {
                        acc += &self.rows[i][l] * &other.rows[l][j];
                    }
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Point {
        self.rows.iter().map(|r| rational::dot(r, v)).collect()
    }

    /// Row vector times matrix: `v^T M`.
    pub fn vec_mul(&self, v: &[Rational]) -> Point {
        let c = self.ncols();
        (0..c)
            .map(|j| {
                self.rows
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (r, x)| acc + x * &r[j])
            })
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix::from_rows(
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x * s).collect())
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.ncols()
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    /// Fraction-free row echelon form of the rows scaled to integers.
    fn echelon(&self) -> Echelon {
        let mut scale = BigInt::one();
        let m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| {
                let den = r.iter().fold(BigInt::one(), |acc, x| if x.denom().is_one() { acc } else { rational::lcm(&acc, x.denom()) });
                let ints = r.iter().map(|x| if den.is_one() { x.numer().clone() } else { x.numer() * (&den / x.denom()) }).collect();
                scale *= den;
                ints
            })
            .collect();
        let mut e = bareiss(m, self.ncols());
        e.scale = Rational::from_integer(scale);
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.nrows(), self.ncols());
        let n = self.nrows();
        if n == 0 {
            return Rational::one();
        }
        let e = self.echelon();
        if e.pivots.len() < n {
            return Rational::zero();
        }
        // The last Bareiss pivot is the determinant of the scaled matrix.
        let d = Rational::from_integer(e.rows[n - 1][n - 1].clone()) / e.scale;
        if e.odd {
            -d
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.nrows();
        if n != self.ncols() {
            return Err(Error::Singular);
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.rows[i][j] = self.rows[i][j].clone();
            }
            aug.rows[i][n + i] = Rational::one();
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for k in 0..n {
            let x = e.back_substitute(n, n + k);
            for i in 0..n {
                inv.rows[i][k] = x[i].clone();
            }
        }
        Ok(inv)
    }

    /// Solves `M x = b` for square nonsingular `M`.
    pub fn solve(&self, b: &[Rational]) -> Result<Point> {
        let n = self.nrows();
        if n != self.ncols() || b.len() != n {
            return Err(Error::Singular);
        }
        let mut aug = Matrix::zeros(n, n + 1);
        for i in 0..n {
            for j in 0..n {
                aug.rows[i][j] = self.rows[i][j].clone();
            }
            aug.rows[i][n] = b[i].clone();
        }
        let e = aug.echelon();
        if e.pivots.len() < n || e.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(e.back_substitute(n, n))
    }

    /// A basis of the right null space `{x : M x = 0}`.
    pub fn null_space(&self) -> Vec<Point> {
        let c = self.ncols();
        let e = self.echelon();
        (0..c)
            .filter(|j| !e.pivots.contains(j))
            .map(|f| {
                let mut x = rational::zero_point(c);
                x[f] = Rational::one();
                for (row, &p) in e.pivots.iter().enumerate().rev() {
                    let r = &e.rows[row];
                    let mut acc = Rational::zero();
                    for j in p + 1..c {
                        if !x[j].is_zero() && !r[j].is_zero() {
                            acc += &x[j] * Rational::from_integer(r[j].clone());
                        }
                    }
                    x[p] = -acc / Rational::from_integer(r[p].clone());
                }
                x
            })
            .collect()
    }
}

/// Fraction-free (Bareiss) forward elimination. Every intermediate entry
/// is a minor of the input, so all divisions are exact.
fn bareiss(mut m: Vec<Vec<BigInt>>, c: usize) -> Echelon {
    let r = m.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    let mut odd = false;
    let mut prev = BigInt::one();
    for col in 0..c {
        if row == r {
            break;
        }
        let Some(p) = (row..r).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].bits()) else {
            continue;
        };
        if p != row {
            m.swap(p, row);
            odd = !odd;
        }
        let (head, tail) = m.split_at_mut(row + 1);
        let pr = &head[row];
        for ri in tail.iter_mut() {
            if ri[col].is_zero() {
                for j in col + 1..c {
                    if !ri[j].is_zero() {
                        ri[j] = &ri[j] * &pr[col] / &prev;
                    }
                }
                continue;
            }
            for j in col + 1..c {
                ri[j] = (&pr[col] * &ri[j] - &ri[col] * &pr[j]) / &prev;
            }
            ri[col] = BigInt::zero();
        }
        prev = pr[col].clone();
        pivots.push(col);
        row += 1;
    }
    Echelon { rows: m, pivots, odd, scale: Rational::one() }
}

/// Rank of an integer matrix.
pub fn integer_rank(rows: Vec<Vec<BigInt>>) -> usize {
    let c = rows.first().map_or(0, Vec::len);
    bareiss(rows, c).pivots.len()
}

/// Null space of an integer matrix with `c` columns, as primitive integer
/// vectors.
pub fn integer_null_space(rows: Vec<Vec<BigInt>>, c: usize) -> Vec<Vec<BigInt>> {
    let e = bareiss(rows, c);
    (0..c)
        .filter(|j| !e.pivots.contains(j))
        .map(|f| {
            // The last pivot is the pivot minor, so by Cramer's rule the
            // solution with this free value is integral.
            let mut x = vec![BigInt::zero(); c];
            x[f] = e.pivots.len().checked_sub(1).map_or(BigInt::one(), |i| e.rows[i][e.pivots[i]].clone());
            for (row, &p) in e.pivots.iter().enumerate().rev() {
                let r = &e.rows[row];
                let mut acc = BigInt::zero();
                for j in p + 1..c {
                    if !x[j].is_zero() && !r[j].is_zero() {
                        acc += &x[j] * &r[j];
                    }
                }
                x[p] = -acc / &r[p];
            }
            primitive(x)
        })
        .collect()
}

fn primitive(x: Vec<BigInt>) -> Vec<BigInt> {
    let g = x.iter().fold(BigInt::zero(), |acc, v| if acc.is_one() { acc } else { rational::gcd(&acc, v) });
    if g.is_zero() || g.is_one() {
        return x;
    }
    x.into_iter().map(|v| v / &g).collect()
}

/// Homogeneous primitive integer coordinates `(D p, D)` with `D > 0`.
pub fn homogenize(p: &[Rational]) -> Vec<BigInt> {
    let den = p.iter().fold(BigInt::one(), |acc, x| rational::lcm(&acc, x.denom()));
    let mut v: Vec<BigInt> = p.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    v.push(den);
    v
}

/// Integer dot product.
pub fn integer_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    odd: bool,
    scale: Rational,
}

impl Echelon {
    /// Back substitution for a square system with pivots `0..n` and the
    /// right-hand side in column `rhs`.
    fn back_substitute(&self, n: usize, rhs: usize) -> Point {
        // `y = det * x` is integral by Cramer's rule.
        let det = &self.rows[n - 1][n - 1];
        let mut y = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            let r = &self.rows[i];
            let mut acc = det * &r[rhs];
            for j in i + 1..n {
                if !r[j].is_zero() && !y[j].is_zero() {
                    acc -= &r[j] * &y[j];
                }
            }
            y[i] = acc / &r[i];
        }
        y.into_iter().map(|v| rational::ratio(v, det.clone())).collect()
    }
}

/// Affine rank of a point set: dimension of its affine hull plus one
/// (zero for the empty set).
pub fn affine_rank(points: &[&Point]) -> usize {
    if points.is_empty() {
        return 0;
    }
    integer_rank(points.iter().map(|p| homogenize(p)).collect())
}
