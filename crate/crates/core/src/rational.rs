//! Exact rational scalars and small vector helpers.
//!
//! Everything in this crate runs over [`Rational`], an arbitrary precision
//! fraction kept in lowest terms with a positive denominator.

use malachite_base::num::arithmetic::traits::Gcd;
use malachite_nz::natural::Natural;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// A point (or direction) in rational coordinates.
pub type Point = Vec<Rational>;

/// `n / d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. Zero denominators are rejected.
pub fn parse(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Input(format!("malformed rational {s:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p/q"`, or `"p"` when the denominator is one.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn point(coords: &[(i64, i64)]) -> Point {
    coords.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ipoint(coords: &[i64]) -> Point {
    coords.iter().map(|&n| int(n)).collect()
}

pub fn zero_point(dim: usize) -> Point {
    vec![Rational::zero(); dim]
}

pub fn unit(dim: usize, k: usize) -> Point {
    let mut p = zero_point(dim);
    p[k] = Rational::one();
    p
}

/// Nonnegative gcd; large operands go through a subquadratic gcd.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let (small, large) = if a.bits() <= b.bits() { (a, b) } else { (b, a) };
    if let Some(s) = small.magnitude().to_u64() {
        let r = (large.magnitude() % s).to_u64().expect("remainder fits");
        return BigInt::from(Integer::gcd(&s, &r));
    }
    let g = Gcd::gcd(natural(a), natural(b));
    BigInt::from(BigUint::from_slice(&to_u32_digits(&g.into_limbs_asc())))
}

fn natural(x: &BigInt) -> Natural {
    Natural::from_owned_limbs_asc(x.magnitude().to_u64_digits())
}

fn to_u32_digits(limbs: &[u64]) -> Vec<u32> {
    limbs.iter().flat_map(|l| [*l as u32, (*l >> 32) as u32]).collect()
}

/// Nonnegative lcm.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    if a.is_one() {
        return b.abs();
    }
    if b.is_one() {
        return a.abs();
    }
    (a / gcd(a, b) * b).abs()
}

/// `n / d` in lowest terms.
pub fn ratio(n: BigInt, d: BigInt) -> Rational {
    assert!(!d.is_zero(), "zero denominator");
    let g = gcd(&n, &d);
    let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        Rational::new_raw(-n, -d)
    } else {
        Rational::new_raw(n, d)
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    // Accumulate over a common denominator and reduce once.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let n = x.numer() * y.numer();
        if x.denom().is_one() && y.denom().is_one() {
            if den.is_one() {
                num += n;
            } else {
                num += n * &den;
            }
            continue;
        }
        let d = x.denom() * y.denom();
        if d == den {
            num += n;
        } else {
            num = num * &d + n * &den;
            den *= d;
        }
    }
    ratio(num, den)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Point {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Rational]) -> Point {
    a.iter().map(|x| -x).collect()
}

pub fn is_zero(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn centroid(points: &[Point]) -> Point {
    let dim = points[0].len();
    let n = Rational::from_integer(BigInt::from(points.len()));
    let mut acc = zero_point(dim);
    for p in points {
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x;
        }
    }
    acc.iter().map(|a| a / &n).collect()
}

pub fn midpoint(a: &[Rational], b: &[Rational]) -> Point {
    let two = int(2);
    a.iter().zip(b).map(|(x, y)| (x + y) / &two).collect()
}

/// `2^k` as a rational, for possibly negative `k`.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Exact `ceil(log2(x))` for positive `x`.
pub fn ceil_log2(x: &Rational) -> Result<i64> {
    if !x.is_positive() {
        return Err(Error::Input(format!("log2 of non-positive value {x}")));
    }
    // floor(log2(x)) from bit lengths, then correct by at most one step.
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    while pow2(k) < *x {
        k += 1;
    }
    while pow2(k - 1) >= *x {
        k -= 1;
    }
    Ok(k)
}

/// Scales a rational vector by a positive factor so that it becomes a
/// primitive integer vector (coprime entries). The zero vector is returned
/// unchanged. Returns the scaled vector and the factor used.
pub fn primitive_scaling(v: &[Rational]) -> (Vec<BigInt>, Rational) {
    let den = v.iter().fold(BigInt::one(), |acc, x| lcm(&acc, x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| if acc.is_one() { acc } else { gcd(&acc, x) });
    if g.is_zero() {
        return (ints, Rational::one());
    }
    let scaled = ints.iter().map(|x| x / &g).collect();
    (scaled, ratio(den, g))
}

/// Lossy conversion for filters and viewing; never used in predicates
/// without an exact fallback.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with exactly `digits` fractional digits, rounding half
/// away from zero. Deterministic and exact up to the requested precision.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let half = rat(1, 2);
    let rounded = if scaled.is_negative() {
        -((-scaled + half).floor())
    } else {
        (scaled + half).floor()
    };
    let n = rounded.to_integer();
    let neg = n.is_negative();
    let digits_str = n.abs().to_string();
    let body = if digits == 0 {
        digits_str
    } else {
        let padded = format!("{digits_str:0>width$}", width = digits + 1);
        let (int_part, frac) = padded.split_at(padded.len() - digits);
        format!("{int_part}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(de::Error::custom)
    }
}

pub mod serde_rat_vec {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse(s).map_err(de::Error::custom)).collect()
    }
}

pub mod serde_rat_mat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| row.iter().map(format).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let m = Vec::<Vec<String>>::deserialize(d)?;
        m.iter()
            .map(|row| row.iter().map(|s| parse(s).map_err(de::Error::custom)).collect())
            .collect()
    }
}

pub mod serde_rat_opt {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rational>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse(&s).map_err(de::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_reduce() {
        assert_eq!(format(&parse("6/4").unwrap()), "3/2");
        assert_eq!(format(&parse("-8/4").unwrap()), "-2");
        assert_eq!(format(&parse("3/-6").unwrap()), "-1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn ceil_log2_exact() {
        assert_eq!(ceil_log2(&int(1)).unwrap(), 0);
        assert_eq!(ceil_log2(&int(8)).unwrap(), 3);
        assert_eq!(ceil_log2(&int(9)).unwrap(), 4);
        assert_eq!(ceil_log2(&rat(1, 2)).unwrap(), -1);
        assert_eq!(ceil_log2(&rat(1, 3)).unwrap(), -1);
        assert_eq!(ceil_log2(&rat(3, 1024)).unwrap(), -8);
        assert!(ceil_log2(&int(0)).is_err());
    }

    #[test]
    fn primitive_scaling_is_coprime_and_positive() {
        let (v, f) = primitive_scaling(&[rat(2, 3), rat(-4, 9), int(0)]);
        assert_eq!(v, vec![BigInt::from(3), BigInt::from(-2), BigInt::from(0)]);
        assert_eq!(f, rat(9, 2));
    }

    #[test]
    fn fast_gcd_matches_euclid() {
        let big = |e: u32, k: i64| BigInt::from(3).pow(e) * BigInt::from(k);
        let cases = [
            (big(200, 14), big(150, -21)),
            (big(90, 1), BigInt::from(-6)),
            (BigInt::zero(), BigInt::from(-5)),
            (big(300, 7) + 1, big(250, 2)),
        ];
        for (a, b) in cases {
            assert_eq!(gcd(&a, &b), a.gcd(&b));
            assert_eq!(lcm(&a, &b), a.lcm(&b));
        }
        assert_eq!(ratio(big(80, -4), big(81, -6)), Rational::new(big(80, -4), big(81, -6)));
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&rat(2, 3), 2), "0.67");
        assert_eq!(to_decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&int(5), 0), "5");
        assert_eq!(to_decimal(&rat(-1, 1000), 1), "0.0");
    }
}
