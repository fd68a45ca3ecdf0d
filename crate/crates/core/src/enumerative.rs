//! Cubical f-, h- and g-vector calculus, connected-sum identities and the
//! density schedule in g^c-space.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

/// Polynomial with rational coefficients in ascending degree, trailing
/// zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatPolynomial {
    #[serde(with = "rational::serde_rat_vec")]
    coefficients: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        RatPolynomial { coefficients }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        RatPolynomial::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        RatPolynomial { coefficients: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        RatPolynomial::new(vec![c])
    }

    /// `c t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        RatPolynomial::new(v)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coefficients.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn add(&self, o: &RatPolynomial) -> RatPolynomial {
        let n = self.coefficients.len().max(o.coefficients.len());
        RatPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &RatPolynomial) -> RatPolynomial {
        let n = self.coefficients.len().max(o.coefficients.len());
        RatPolynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &RatPolynomial) -> RatPolynomial {
        if self.is_zero() || o.is_zero() {
            return RatPolynomial::zero();
        }
        let mut v = vec![Rational::zero(); self.coefficients.len() + o.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in o.coefficients.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RatPolynomial::new(v)
    }

    pub fn scale(&self, s: &Rational) -> RatPolynomial {
        RatPolynomial::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, k: usize) -> RatPolynomial {
        (0..k).fold(RatPolynomial::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Exact quotient by `1 + t`; fails when the remainder is nonzero.
    pub fn div_one_plus_t(&self) -> Result<RatPolynomial> {
        let Some(n) = self.degree() else {
            return Ok(RatPolynomial::zero());
        };
        if n == 0 {
            return Err(Error::NonExactDivision("constant is not divisible by 1+t".into()));
        }
        // synthetic division by t - (-1), from the top coefficient down
        let mut q = vec![Rational::zero(); n];
        let mut carry = Rational::zero();
        for i in (1..=n).rev() {
            let c = &self.coefficients[i] - &carry;
            q[i - 1] = c.clone();
            carry = c;
        }
        if self.coefficients[0] != carry {
            return Err(Error::NonExactDivision(format!("remainder {}", &self.coefficients[0] - &carry)));
        }
        Ok(RatPolynomial::new(q))
    }

    /// Coefficients `0..=n`, zero-padded.
    pub fn padded(&self, n: usize) -> Vec<Rational> {
        (0..=n).map(|i| self.coeff(i)).collect()
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coefficients.iter().map(rational::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Face numbers `f_0..f_{d-1}` of a d-polytope.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FVector {
    d: usize,
    entries: Vec<u64>,
}

#[derive(Deserialize)]
struct RawFVector {
    d: usize,
    entries: Vec<u64>,
}

impl<'de> Deserialize<'de> for FVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = RawFVector::deserialize(de)?;
        FVector::new(r.d, r.entries).map_err(serde::de::Error::custom)
    }
}

impl FVector {
    /// Checks the length and the Euler relation.
    pub fn new(d: usize, entries: Vec<u64>) -> Result<Self> {
        if d == 0 || entries.len() != d {
            return Err(Error::InvalidFVector(format!("expected {d} entries, found {}", entries.len())));
        }
        let alt: i128 = entries
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i128 } else { -(f as i128) })
            .sum();
        let expect = if d % 2 == 0 { 0 } else { 2 };
        if alt != expect {
            return Err(Error::InvalidFVector(format!("Euler sum {alt}, expected {expect}")));
        }
        Ok(FVector { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `f(Q, t) = sum f_i t^i`.
    pub fn polynomial(&self) -> RatPolynomial {
        RatPolynomial::new(self.entries.iter().map(|&f| Rational::from_integer(BigInt::from(f))).collect())
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `g^c_0..g^c_{floor(d/2)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GcVector {
    d: usize,
    entries: Vec<i64>,
}

#[derive(Deserialize)]
struct RawGcVector {
    d: usize,
    entries: Vec<i64>,
}

impl<'de> Deserialize<'de> for GcVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = RawGcVector::deserialize(de)?;
        GcVector::new(r.d, r.entries).map_err(serde::de::Error::custom)
    }
}

impl GcVector {
    pub fn new(d: usize, entries: Vec<i64>) -> Result<Self> {
        if d == 0 || entries.len() != d / 2 + 1 {
            return Err(Error::Input(format!("g^c vector of a {d}-polytope has {} entries", d / 2 + 1)));
        }
        if entries[0] != 1i64 << (d - 1) {
            return Err(Error::Input(format!("g^c_0 must be 2^{}", d - 1)));
        }
        Ok(GcVector { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }
}

impl fmt::Display for GcVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn pow2_int(k: usize) -> Rational {
    rational::pow2(k as i64)
}

fn to_integer_coeffs(p: &RatPolynomial, n: usize, what: &str) -> Result<Vec<i64>> {
    p.padded(n)
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::Input(format!("{what} has non-integer coefficient {c}")));
            }
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::Input(format!("{what} coefficient out of range")))
        })
        .collect()
}

/// `h^sc(t) = sum f_i (2t)^i (1-t)^(d-1-i)`.
pub fn short_cubical_h(f: &FVector) -> RatPolynomial {
    let d = f.dim();
    let two_t = RatPolynomial::from_ints(&[0, 2]);
    let one_minus_t = RatPolynomial::from_ints(&[1, -1]);
    f.entries()
        .iter()
        .enumerate()
        .fold(RatPolynomial::zero(), |acc, (i, &fi)| {
            let term = two_t.pow(i).mul(&one_minus_t.pow(d - 1 - i));
            acc.add(&term.scale(&Rational::from_integer(BigInt::from(fi))))
        })
}

/// Solves `(1+t) h^c = t h^sc + 2^(d-1) (1 + t^(d+1))`.
pub fn cubical_h_from_short(hsc: &RatPolynomial, d: usize) -> Result<RatPolynomial> {
    let c = pow2_int(d - 1);
    let rhs = hsc
        .mul(&RatPolynomial::monomial(Rational::one(), 1))
        .add(&RatPolynomial::constant(c.clone()))
        .add(&RatPolynomial::monomial(c, d + 1));
    rhs.div_one_plus_t()
}

pub fn cubical_h(f: &FVector) -> Result<RatPolynomial> {
    cubical_h_from_short(&short_cubical_h(f), f.dim())
}

/// True iff the coefficients `h_0..h_d` form a palindrome.
pub fn check_dehn_sommerville(h: &RatPolynomial, d: usize) -> bool {
    if h.degree().is_some_and(|k| k > d) {
        return false;
    }
    let c = h.padded(d);
    (0..=d).all(|i| c[i] == c[d - i])
}

pub fn gc_vector(h: &RatPolynomial, d: usize) -> Result<GcVector> {
    if !check_dehn_sommerville(h, d) {
        return Err(Error::DehnSommervilleViolated);
    }
    let c = to_integer_coeffs(h, d, "h^c")?;
    let mut g = vec![1i64 << (d - 1)];
    g.extend((1..=d / 2).map(|i| c[i] - c[i - 1]));
    GcVector::new(d, g)
}

pub fn gc_of_fvector(f: &FVector) -> Result<GcVector> {
    gc_vector(&cubical_h(f)?, f.dim())
}

/// `f_i(cube) = 2^(d-i) C(d,i)`.
pub fn cube_f(d: usize) -> FVector {
    let entries = (0..d).map(|i| (1u64 << (d - i)) * binomial(d as u64, i as u64)).collect();
    FVector::new(d, entries).expect("cube face numbers satisfy Euler")
}

/// `f(P # Q, t) = f(P, t) + f(Q, t) - f(cube^(d-1), t) - t^(d-1)`, where
/// the (d-1)-cube polynomial includes the facet itself.
pub fn connected_sum_f(fp: &FVector, fq: &FVector) -> Result<FVector> {
    let d = fp.dim();
    if fq.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: fq.dim() });
    }
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let facet = cube_f(d - 1);
    let entries = (0..d)
        .map(|i| {
            let mut x = fp.entries()[i] as i128 + fq.entries()[i] as i128;
            if i < d - 1 {
                x -= facet.entries()[i] as i128;
            } else {
                x -= 2;
            }
            u64::try_from(x).map_err(|_| Error::InvalidFVector("negative face count".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    FVector::new(d, entries)
}

/// f-vector of a d-tower of `m` cubes.
pub fn tower_f(d: usize, m: usize) -> Result<FVector> {
    if m == 0 {
        return Err(Error::Input("a tower has at least one cube".into()));
    }
    let cube = cube_f(d);
    (1..m).try_fold(cube.clone(), |acc, _| connected_sum_f(&acc, &cube))
}

fn combine_gc(g1: &[Rational], g2: &[Rational], d: usize, connector_cubes: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = g1.iter().zip(g2).map(|(a, b)| a + b).collect();
    out[0] = pow2_int(d - 1);
    if out.len() > 1 {
        out[1] += Rational::from_integer(BigInt::from(connector_cubes + 1)) * pow2_int(d - 1);
    }
    out
}

/// g^c of `Q1 # C # Q2` with a connector of `connector_cubes` cubes.
pub fn gc_of_c_connected_sum(g1: &GcVector, g2: &GcVector, connector_cubes: usize) -> Result<GcVector> {
    let d = g1.dim();
    if g2.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: g2.dim() });
    }
    let mut out: Vec<i64> = g1.entries().iter().zip(g2.entries()).map(|(a, b)| a + b).collect();
    out[0] = 1i64 << (d - 1);
    if out.len() > 1 {
        out[1] += (connector_cubes as i64 + 1) << (d - 1);
    }
    GcVector::new(d, out)
}

/// Rational inverse of the f -> g^c map: `g^c -> h^c -> h^sc -> f`, with
/// `f(u) = sum h^sc_i u^i (2+u)^(d-1-i) / 2^(d-1)`.
pub fn f_from_gc(d: usize, g: &[Rational]) -> Result<Vec<Rational>> {
    if g.len() != d / 2 + 1 {
        return Err(Error::DimensionMismatch { expected: d / 2 + 1, found: g.len() });
    }
    let mut h = vec![Rational::zero(); d + 1];
    let mut acc = Rational::zero();
    for i in 0..=d / 2 {
        acc += &g[i];
        h[i] = acc.clone();
        h[d - i] = acc.clone();
    }
    let hc = RatPolynomial::new(h);
    let c = pow2_int(d - 1);
    // t h^sc = (1+t) h^c - 2^(d-1) (1 + t^(d+1))
    let t_hsc = hc
        .mul(&RatPolynomial::from_ints(&[1, 1]))
        .sub(&RatPolynomial::constant(c.clone()))
        .sub(&RatPolynomial::monomial(c.clone(), d + 1));
    if !t_hsc.coeff(0).is_zero() {
        return Err(Error::Input("g^c_0 must be 2^(d-1)".into()));
    }
    let hsc = RatPolynomial::new(t_hsc.coefficients().iter().skip(1).cloned().collect());
    let u = RatPolynomial::from_ints(&[0, 1]);
    let two_u = RatPolynomial::from_ints(&[2, 1]);
    let f = (0..d).fold(RatPolynomial::zero(), |acc, i| {
        acc.add(&u.pow(i).mul(&two_u.pow(d - 1 - i)).scale(&hsc.coeff(i)))
    });
    Ok(f.scale(&(Rational::one() / c)).padded(d - 1))
}

/// Squared cosine of the angle between two nonzero vectors.
pub fn squared_cosine(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    let na = rational::dot(a, a);
    let nb = rational::dot(b, b);
    if na.is_zero() || nb.is_zero() {
        return Err(Error::Input("angle with a zero vector".into()));
    }
    let ab = rational::dot(a, b);
    Ok(&ab * &ab / (na * nb))
}

/// Symbolic leading term `coefficient * base^n * n^poly_exponent` of the
/// g^c coordinate `coordinate` of the n-th member of an input sequence. All
/// other coordinates above 0 are taken to be zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub coordinate: usize,
    #[serde(with = "rational::serde_rat")]
    pub coefficient: Rational,
    pub base: u32,
    pub poly_exponent: u32,
}

impl Generator {
    /// The sequence `2^n n^(k-1)` for coordinate `k`.
    pub fn standard(k: usize) -> Self {
        Generator { coordinate: k, coefficient: Rational::one(), base: 2, poly_exponent: k as u32 - 1 }
    }

    pub fn value(&self, n: i64) -> Rational {
        let base = Rational::from_integer(BigInt::from(self.base));
        let b = if n >= 0 {
            num_traits::pow(base, n as usize)
        } else {
            Rational::one() / num_traits::pow(base, n.unsigned_abs() as usize)
        };
        &self.coefficient * b * num_traits::pow(int(n), self.poly_exponent as usize)
    }

    /// Smallest `l` with `base^l >= x`.
    fn ceil_log(&self, x: &Rational) -> Result<i64> {
        if self.base == 2 {
            return rational::ceil_log2(x);
        }
        let base = Rational::from_integer(BigInt::from(self.base));
        let mut l = 0i64;
        let mut p = Rational::one();
        while &p < x {
            p *= &base;
            l += 1;
        }
        while &(&p / &base) >= x {
            p /= &base;
            l -= 1;
        }
        Ok(l)
    }

    fn gc(&self, d: usize, n: i64) -> Vec<Rational> {
        let mut g = vec![Rational::zero(); d / 2 + 1];
        g[0] = pow2_int(d - 1);
        g[self.coordinate] = self.value(n);
        g
    }
}

/// One pairing choice of the schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub coordinate: usize,
    /// Index from the ceiling rule.
    pub ceiling_index: i64,
    /// Sequence members actually summed in, as `(index, copies)`, largest
    /// index first.
    pub members: Vec<(i64, u64)>,
    #[serde(with = "rational::serde_rat")]
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub m: i64,
    /// Extra first members of the top generator joined in.
    pub top_extra: u64,
    pub pairings: Vec<Pairing>,
    #[serde(with = "rational::serde_rat_vec")]
    pub combined_gc: Vec<Rational>,
    #[serde(with = "rational::serde_rat")]
    pub cos2_gc: Rational,
    #[serde(with = "rational::serde_rat")]
    pub cos2_f: Rational,
    /// Squared cosine obtained with the bare ceiling rule (one copy per
    /// coordinate at the ceiling index).
    #[serde(with = "rational::serde_rat")]
    pub cos2_gc_ceiling: Rational,
    pub angle_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleReport {
    pub d: usize,
    #[serde(with = "rational::serde_rat_vec")]
    pub target: Vec<Rational>,
    pub connector_cubes: usize,
    pub steps: Vec<ScheduleStep>,
    pub monotone_gc: bool,
    pub monotone_f: bool,
}

fn find_generator(generators: &[Generator], k: usize) -> Result<&Generator> {
    generators
        .iter()
        .find(|g| g.coordinate == k)
        .ok_or_else(|| Error::Input(format!("no generator for coordinate {k}")))
}

/// Values `v(1), v(2), ...` of a generator up to the first one above `cap`.
fn generator_values(gen: &Generator, cap: &Rational) -> Vec<Rational> {
    let mut vals = vec![gen.value(1)];
    while vals.last().is_some_and(|v| v <= cap) {
        vals.push(gen.value(vals.len() as i64 + 1));
    }
    vals
}

/// Largest `i` (1-based) with `vals[i-1] <= x`, or 1.
fn largest_at_most(vals: &[Rational], x: &Rational) -> usize {
    vals.partition_point(|v| v <= x).max(1)
}

/// Up to this many copies are tried when matching a gap.
const MAX_COPIES: u64 = 64;

/// Up to this many extra first members of the top generator are tried per
/// step; the candidate with the largest squared cosine is kept.
const MAX_TOP_EXTRA: u64 = 8;

/// Multiset of sequence members whose values plus `corr` per copy come
/// closest to `gap`. For each copy count the members are chosen greedily,
/// keeping room for the copies still to place, and the last one is rounded
/// to the nearest value.
fn match_gap(gen: &Generator, corr: &Rational, gap: &Rational) -> Vec<(i64, u64)> {
    let vals = generator_values(gen, gap);
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for k in 1..=MAX_COPIES {
        let target = gap - corr * int(k as i64);
        if k > 1 && target < &vals[0] * int(k as i64) {
            break;
        }
        let mut rest = target.clone();
        let mut picks = Vec::with_capacity(k as usize);
        for j in 0..k {
            let left = k - 1 - j;
            let i = if left > 0 {
                largest_at_most(&vals, &(&rest - &vals[0] * int(left as i64)))
            } else {
                let i = largest_at_most(&vals, &rest);
                if i < vals.len() && (&vals[i] - &rest) < (&rest - &vals[i - 1]) {
                    i + 1
                } else {
                    i
                }
            };
            rest -= &vals[i - 1];
            picks.push(i);
        }
        let err = rest.abs();
        if best.as_ref().is_none_or(|(e, _)| &err < e) {
            let exact = err.is_zero();
            best = Some((err, picks));
            if exact {
                break;
            }
        }
    }
    let mut picks = best.map(|(_, p)| p).unwrap_or_default();
    picks.sort_unstable_by(|a, b| b.cmp(a));
    picks.into_iter().dedup_with_count().map(|(n, i)| (i as i64, n as u64)).collect()
}

/// Combined g^c at index `m`: the top generator at `m`, then for each lower
/// coordinate `k` with `s_k != 0` a multiset of members of the k-th
/// generator matching `s_k / s_(k+1)` times coordinate `k+1`, each copy
/// joined through its own connector. `top_extra` first members of the top
/// generator are joined in as well, which lets the divisibility of the top
/// coordinate be adjusted. Also returns the bare ceiling-rule vector (one
/// copy per coordinate at the ceiling index).
fn schedule_step(
    d: usize,
    s: &[Rational],
    generators: &[Generator],
    m: i64,
    top_extra: u64,
    connector_cubes: usize,
) -> Result<(Vec<Rational>, Vec<Rational>, Vec<Pairing>)> {
    let big_k = d / 2;
    let top = find_generator(generators, big_k)?;
    let mut g = top.gc(d, m);
    let mut g_ceiling = g.clone();
    for _ in 0..top_extra {
        g = combine_gc(&g, &top.gc(d, 1), d, connector_cubes);
    }
    let mut pairings = Vec::new();
    let corr_1 = Rational::from_integer(BigInt::from(connector_cubes + 1)) * pow2_int(d - 1);
    for k in (1..big_k).rev() {
        if s[k - 1].is_zero() {
            continue;
        }
        if s[k].is_zero() {
            return Err(Error::ZeroTarget(k + 1));
        }
        let ratio = &s[k - 1] / &s[k];
        let mut c = ratio.clone();
        if k == 1 {
            c += rational::pow2(d as i64 - m) * (Rational::one() - Rational::new(BigInt::one(), BigInt::from(m)));
        }
        let gen = find_generator(generators, k)?;
        let want_ceiling = &c * &g_ceiling[k + 1];
        let scale = num_traits::pow(int(m), gen.poly_exponent as usize) * &gen.coefficient;
        let l = gen.ceil_log(&(&c * &g[k + 1] / &scale))?;
        let l_ceiling = gen.ceil_log(&(&want_ceiling / &scale))?;
        let corr = if k == 1 { corr_1.clone() } else { Rational::zero() };
        let gap = &ratio * &g[k + 1] - &g[k];
        let members = match_gap(gen, &corr, &gap);
        for &(index, copies) in &members {
            for _ in 0..copies {
                g = combine_gc(&g, &gen.gc(d, index), d, connector_cubes);
            }
        }
        g_ceiling = combine_gc(&g_ceiling, &gen.gc(d, l_ceiling), d, connector_cubes);
        pairings.push(Pairing { coordinate: k, ceiling_index: l, members, ratio: c });
    }
    Ok((g, g_ceiling, pairings))
}

/// Schedule for `m = d, d+1, ...` (`steps` values). The dominant coordinate
/// `K = floor(d/2)` comes from the K-th generator at index `m`; each lower
/// coordinate `k` with `s_k != 0` is matched to `c_k` times the current
/// coordinate `k+1` using the k-th generator, where `c_k = s_k / s_(k+1)`
/// and `c_1` carries the extra `2^(d-m) (1 - 1/m)` in the ceiling rule.
pub fn density_schedule(d: usize, target: &[Rational], generators: &[Generator], steps: usize) -> Result<ScheduleReport> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(d));
    }
    let big_k = d / 2;
    if target.len() != big_k {
        return Err(Error::DimensionMismatch { expected: big_k, found: target.len() });
    }
    if target.iter().any(Signed::is_negative) {
        return Err(Error::Input("target ray must lie in the nonnegative orthant".into()));
    }
    if target[big_k - 1].is_zero() {
        return Err(Error::ZeroTarget(big_k));
    }
    for g in generators {
        if g.coordinate == 0 || g.coordinate > big_k || g.base < 2 || !g.coefficient.is_positive() {
            return Err(Error::Input(format!("invalid generator for coordinate {}", g.coordinate)));
        }
    }
    let connector_cubes = 4 * d;
    let s = target;
    let f_apex = f_from_gc(d, &{
        let mut g = vec![Rational::zero(); big_k + 1];
        g[0] = pow2_int(d - 1);
        g
    })?;
    let f_dir: Vec<Rational> = {
        let mut g = vec![pow2_int(d - 1)];
        g.extend(s.iter().cloned());
        rational::sub(&f_from_gc(d, &g)?, &f_apex)
    };

    let mut out = Vec::with_capacity(steps);
    for step in 0..steps {
        let m = (d + step) as i64;
        let mut best: Option<(Rational, u64, (Vec<Rational>, Vec<Rational>, Vec<Pairing>))> = None;
        for top_extra in 0..=MAX_TOP_EXTRA {
            let cand = schedule_step(d, s, generators, m, top_extra, connector_cubes)?;
            let cos2 = squared_cosine(&cand.0[1..], s)?;
            if best.as_ref().is_none_or(|(b, _, _)| &cos2 > b) {
                let exact = cos2.is_one();
                best = Some((cos2, top_extra, cand));
                if exact {
                    break;
                }
            }
        }
        let (_, top_extra, (g, g_ceiling, pairings)) = best.expect("at least one candidate");
        let cos2_gc = squared_cosine(&g[1..], s)?;
        let cos2_gc_ceiling = squared_cosine(&g_ceiling[1..], s)?;
        let f = f_from_gc(d, &g)?;
        let cos2_f = squared_cosine(&rational::sub(&f, &f_apex), &f_dir)?;
        let angle_deg = rational::to_f64(&cos2_gc).sqrt().min(1.0).acos().to_degrees();
        out.push(ScheduleStep { m, top_extra, pairings, combined_gc: g, cos2_gc, cos2_f, cos2_gc_ceiling, angle_deg });
    }
    let monotone_gc = out.windows(2).all(|w| w[1].cos2_gc >= w[0].cos2_gc);
    let monotone_f = out.windows(2).all(|w| w[1].cos2_f >= w[0].cos2_f);
    Ok(ScheduleReport {
        d,
        target: target.to_vec(),
        connector_cubes,
        steps: out,
        monotone_gc,
        monotone_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(d: usize, e: &[u64]) -> FVector {
        FVector::new(d, e.to_vec()).unwrap()
    }

    fn ints(p: &RatPolynomial, n: usize) -> Vec<i64> {
        to_integer_coeffs(p, n, "test").unwrap()
    }

    /// Direct evaluation of `(1-t)^(d-1) f(2t/(1-t))` at many points,
    /// interpolated back to coefficients.
    fn substitution_oracle(f: &FVector) -> Vec<Rational> {
        let d = f.dim();
        let xs: Vec<Rational> = (0..d).map(|i| Rational::new(BigInt::from(1), BigInt::from(i as i64 + 3))).collect();
        let ys: Vec<Rational> = xs
            .iter()
            .map(|t| {
                let one = Rational::one();
                let u = int(2) * t / (&one - t);
                num_traits::pow(&one - t, d - 1) * f.polynomial().eval(&u)
            })
            .collect();
        // Lagrange interpolation
        let mut coeffs = RatPolynomial::zero();
        for i in 0..d {
            let mut basis = RatPolynomial::constant(ys[i].clone());
            for j in 0..d {
                if i != j {
                    let denom = &xs[i] - &xs[j];
                    basis = basis.mul(&RatPolynomial::new(vec![-&xs[j] / &denom, Rational::one() / denom]));
                }
            }
            coeffs = coeffs.add(&basis);
        }
        coeffs.padded(d - 1)
    }

    #[test]
    fn polynomial_division() {
        let p = RatPolynomial::from_ints(&[1, 2, 1]);
        assert_eq!(p.div_one_plus_t().unwrap(), RatPolynomial::from_ints(&[1, 1]));
        assert!(RatPolynomial::from_ints(&[1, 0, 1]).div_one_plus_t().is_err());
        assert_eq!(RatPolynomial::from_ints(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn euler_is_checked() {
        assert!(FVector::new(3, vec![8, 12, 6]).is_ok());
        assert!(FVector::new(3, vec![8, 12, 5]).is_err());
        assert!(FVector::new(2, vec![4, 4]).is_ok());
    }

    #[test]
    fn short_h_of_cubes() {
        assert_eq!(ints(&short_cubical_h(&fv(3, &[8, 12, 6])), 2), vec![8, 8, 8]);
        assert_eq!(ints(&short_cubical_h(&fv(2, &[4, 4])), 1), vec![4, 4]);
        for d in 2..=6 {
            let f = cube_f(d);
            let h = short_cubical_h(&f);
            assert_eq!(h.padded(d - 1), substitution_oracle(&f));
            assert!(h.padded(d - 1).iter().all(|c| *c == pow2_int(d)));
        }
        let stacked = fv(3, &[12, 20, 10]);
        assert_eq!(short_cubical_h(&stacked).padded(2), substitution_oracle(&stacked));
    }

    #[test]
    fn cubical_h_and_gc() {
        assert_eq!(ints(&cubical_h(&cube_f(3)).unwrap(), 3), vec![4, 4, 4, 4]);
        assert_eq!(ints(&cubical_h(&cube_f(2)).unwrap(), 2), vec![2, 2, 2]);
        assert_eq!(ints(&cubical_h(&cube_f(4)).unwrap(), 4), vec![8, 8, 8, 8, 8]);
        assert_eq!(gc_of_fvector(&cube_f(3)).unwrap().entries(), &[4, 0]);
        assert_eq!(gc_of_fvector(&cube_f(4)).unwrap().entries(), &[8, 0, 0]);
        let stacked = gc_of_fvector(&fv(3, &[12, 20, 10])).unwrap();
        assert_eq!(stacked.entries()[1], 12 - 8);
    }

    #[test]
    fn dehn_sommerville_examples() {
        assert!(check_dehn_sommerville(&RatPolynomial::from_ints(&[4, 4, 4, 4]), 3));
        assert!(check_dehn_sommerville(&RatPolynomial::from_ints(&[2, 3, 2]), 2));
        assert!(!check_dehn_sommerville(&RatPolynomial::from_ints(&[1, 2, 3]), 2));
        assert_eq!(
            gc_vector(&RatPolynomial::from_ints(&[1, 2, 3]), 2).unwrap_err(),
            Error::DehnSommervilleViolated
        );
    }

    #[test]
    fn connected_sums_and_towers() {
        let two = connected_sum_f(&cube_f(3), &cube_f(3)).unwrap();
        assert_eq!(two.entries(), &[12, 20, 10]);
        assert_eq!(connected_sum_f(&two, &cube_f(3)).unwrap().entries(), &[16, 28, 14]);
        assert_eq!(tower_f(3, 2).unwrap(), two);
        assert_eq!(tower_f(3, 12).unwrap().entries()[0], 8 + 11 * 4);
        for d in 2..=6 {
            for m in 1..=4 * d {
                let t = tower_f(d, m).unwrap();
                assert_eq!(t.entries()[0], (1u64 << d) + (m as u64 - 1) * (1u64 << (d - 1)));
                let h = cubical_h(&t).unwrap();
                assert!(check_dehn_sommerville(&h, d));
                let g = gc_vector(&h, d).unwrap();
                assert!(g.entries()[2.min(g.entries().len() - 1)..].iter().skip(1).all(|&x| x == 0) || d < 4);
            }
        }
    }

    #[test]
    fn short_h_connected_sum_identity() {
        for d in 3..=6 {
            let q = tower_f(d, 2).unwrap();
            let r = tower_f(d, 3).unwrap();
            let sum = connected_sum_f(&q, &r).unwrap();
            let lhs = short_cubical_h(&sum);
            // exact form: h(Q) + h(Q') + (t-1) h(cube^(d-1)) - 2^d t^(d-1)
            let rhs = short_cubical_h(&q)
                .add(&short_cubical_h(&r))
                .add(&short_cubical_h(&cube_f(d - 1)).mul(&RatPolynomial::from_ints(&[-1, 1])))
                .sub(&RatPolynomial::monomial(pow2_int(d), d - 1));
            assert_eq!(lhs, rhs);
            // middle coefficients simply add
            for i in 1..=d - 2 {
                assert_eq!(lhs.coeff(i), short_cubical_h(&q).coeff(i) + short_cubical_h(&r).coeff(i));
            }
            // and so do the inner h^c coefficients
            let (hs, hq, hr) = (cubical_h(&sum).unwrap(), cubical_h(&q).unwrap(), cubical_h(&r).unwrap());
            for i in 1..d {
                assert_eq!(hs.coeff(i), hq.coeff(i) + hr.coeff(i));
            }
        }
    }

    #[test]
    fn c_connected_sum_constants() {
        let c3 = gc_of_fvector(&cube_f(3)).unwrap();
        assert_eq!(gc_of_c_connected_sum(&c3, &c3, 12).unwrap().entries(), &[4, 52]);
        let c4 = gc_of_fvector(&cube_f(4)).unwrap();
        assert_eq!(gc_of_c_connected_sum(&c4, &c4, 16).unwrap().entries(), &[8, 136, 0]);
        // geometry-free cross-check through face counts: two connected sums
        // with a tower of 12 cubes in between
        let f = connected_sum_f(&connected_sum_f(&cube_f(3), &tower_f(3, 12).unwrap()).unwrap(), &cube_f(3)).unwrap();
        assert_eq!(f.entries()[0], 60);
        assert_eq!(gc_of_fvector(&f).unwrap().entries(), &[4, 52]);
    }

    #[test]
    fn gc_to_f_inverts() {
        for d in 2..=6 {
            for m in 1..=4 {
                let f = tower_f(d, m).unwrap();
                let g = gc_of_fvector(&f).unwrap();
                let gr: Vec<Rational> = g.entries().iter().map(|&x| int(x)).collect();
                let back: Vec<Rational> = f.entries().iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
                assert_eq!(f_from_gc(d, &gr).unwrap(), back);
            }
        }
    }

    #[test]
    fn schedule_single_generator() {
        let gens = vec![Generator::standard(1), Generator::standard(2)];
        let r = density_schedule(4, &[int(0), int(1)], &gens, 5).unwrap();
        assert!(r.steps.iter().all(|s| s.cos2_gc.is_one()));
        assert!(r.steps.iter().all(|s| s.pairings.is_empty()));
        assert_eq!(density_schedule(4, &[int(1), int(0)], &gens, 1).unwrap_err(), Error::ZeroTarget(2));
    }

    #[test]
    fn schedule_ratio_tends_to_target() {
        let gens = vec![Generator::standard(1), Generator::standard(2)];
        let r = density_schedule(4, &[int(1), int(1)], &gens, 10).unwrap();
        let errs: Vec<f64> = r
            .steps
            .iter()
            .map(|s| (rational::to_f64(&(&s.combined_gc[1] / &s.combined_gc[2])) - 1.0).abs())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{errs:?}");
        assert!(errs.last().unwrap() < &0.1, "{errs:?}");
        assert!(r.monotone_gc);
    }

    #[test]
    fn gap_matching_mixes_members() {
        let gen = Generator::standard(1);
        assert_eq!(match_gap(&gen, &int(136), &int(480)), vec![(6, 1), (2, 2)]);
        assert_eq!(match_gap(&gen, &int(0), &int(1)), vec![(1, 1)]);
        // 10240/3 is not reachable with g^c_2 = 10240, one extra top member fixes it
        let gens = [Generator::standard(1), Generator::standard(2)];
        let r = density_schedule(5, &[int(1), int(3)], &gens, 6).unwrap();
        assert_eq!(r.steps[5].m, 10);
        assert_eq!(r.steps[5].top_extra, 1);
        assert!(r.steps[5].cos2_gc.is_one());
        assert!(r.monotone_gc);
    }

}
