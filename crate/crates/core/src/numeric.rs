//! Exact arithmetic: arbitrary-precision rationals and real quadratic surds.
//!
//! Every quantity in the crate is an exact [`Rational`]. Square roots only
//! ever appear as the intersection of a line with the parabola `w = b²/2`,
//! and those are carried as [`Surd`]s whose comparisons reduce to sign tests
//! of rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal such as `"-1.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let v = Rational::new(mag, scale);
        return Ok(if negative { -v } else { v });
    }
    let p: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Exact `"p/q"` rendering (`"p"` for integers).
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Fixed-point rendering with `precision` digits after the point, rounded
/// half away from zero. Computed by integer long division.
pub fn to_decimal(r: &Rational, precision: usize) -> String {
    let scale = BigInt::from(10u32).pow(precision as u32);
    let num = r.numer().abs() * &scale;
    let den = r.denom().clone();
    // round(num / den) = floor((2 num + den) / (2 den))
    let rounded = (num * 2 + &den) / (den * 2);
    render_scaled(&rounded, r.is_negative(), precision)
}

fn render_scaled(mag: &BigInt, negative: bool, precision: usize) -> String {
    let digits = mag.to_string();
    let (int_part, frac_part) = if precision == 0 {
        (digits, String::new())
    } else if digits.len() > precision {
        let (i, f) = digits.split_at(digits.len() - precision);
        (i.to_string(), f.to_string())
    } else {
        (
            "0".to_string(),
            format!("{:0>width$}", digits, width = precision),
        )
    };
    let sign = if negative && !mag.is_zero() { "-" } else { "" };
    if precision == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Largest integer `≤ r`.
pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

/// Exact square root if `r` is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// `r` as an integer, if it is one.
pub fn as_integer(r: &Rational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// `r` as an `i64`, if it is an integer in range.
pub fn as_i64(r: &Rational) -> Option<i64> {
    as_integer(r).and_then(|i| i.to_i64())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Reduces `r` into `[0, 1)`.
pub fn frac_part(r: &Rational) -> Rational {
    r - r.floor()
}

/// Serde adapter storing a [`Rational`] as its exact `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Like [`serde_rational`] for `Option<Rational>` (absent serializes as `null`).
pub mod serde_rational_opt {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        r: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Like [`serde_rational`] for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// The real number `a + b·√d` with `a, b, d` rational and `d ≥ 0`.
///
/// Normalized on construction: when `√d` is rational the value collapses to
/// `a' + 0·√0`, and `b = 0` forces `d = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Surd {
    #[serde(with = "serde_rational")]
    a: Rational,
    #[serde(with = "serde_rational")]
    b: Rational,
    #[serde(with = "serde_rational")]
    d: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        Ok(Self::normalized(a, b, d))
    }

    pub fn from_rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    fn normalized(a: Rational, b: Rational, d: Rational) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::from_rational(a);
        }
        match rational_sqrt(&d) {
            Some(root) => Self::from_rational(a + b * root),
            None => Surd { a, b, d },
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    /// The rational value, iff the normalized form has no radical part.
    pub fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Sign of the real number represented.
    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.d)
    }

    /// Rewrites `self` over radicand `d`, if `√(self.d)/√d` is rational.
    fn over_radicand(&self, d: &Rational) -> Option<(Rational, Rational)> {
        if self.b.is_zero() {
            return Some((self.a.clone(), Rational::zero()));
        }
        if &self.d == d {
            return Some((self.a.clone(), self.b.clone()));
        }
        if d.is_zero() {
            return None;
        }
        // √D₁ = √(D₁D₂)/D₂ · √D₂
        let root = rational_sqrt(&(&self.d * d))?;
        Some((self.a.clone(), &self.b * root / d))
    }

    /// Common radicand representation of `self` and `other`.
    fn align(&self, other: &Surd) -> Result<(Rational, Rational, Rational, Rational, Rational)> {
        let d = if self.b.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        };
        let (a1, b1) = self.over_radicand(&d).ok_or(Error::IncomparableRadicands)?;
        let (a2, b2) = other
            .over_radicand(&d)
            .ok_or(Error::IncomparableRadicands)?;
        Ok((a1, b1, a2, b2, d))
    }

    /// Exact ordering of the two real numbers.
    pub fn try_cmp(&self, other: &Surd) -> Result<Ordering> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        Ok(sign_of(&(a1 - a2), &(b1 - b2), &d))
    }

    pub fn try_add(&self, other: &Surd) -> Result<Surd> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        Ok(Self::normalized(a1 + a2, b1 + b2, d))
    }

    pub fn try_mul(&self, other: &Surd) -> Result<Surd> {
        let (a1, b1, a2, b2, d) = self.align(other)?;
        let a = &a1 * &a2 + &b1 * &b2 * &d;
        let b = a1 * b2 + b1 * a2;
        Ok(Self::normalized(a, b, d))
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        Self::normalized(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn add_rational(&self, k: &Rational) -> Surd {
        Self::normalized(&self.a + k, self.b.clone(), self.d.clone())
    }

    /// Exact comparison against a rational.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_of(&(&self.a - r), &self.b, &self.d)
    }

    /// Fixed-point rendering, rounded half away from zero.
    pub fn to_decimal(&self, precision: usize) -> String {
        if self.b.is_zero() {
            return to_decimal(&self.a, precision);
        }
        // √d floored at `guard` extra digits
        let guard = 8usize;
        let digits = precision + guard;
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled_d = &self.d * Rational::from_integer(&scale * &scale);
        let root = floor(&scaled_d).sqrt();
        let approx = &self.a + &self.b * Rational::new(root, scale);
        to_decimal(&approx, precision)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&self.d).sqrt()
    }
}

/// Sign of `a + b√d` for `d ≥ 0`, by isolating the radical and squaring.
fn sign_of(a: &Rational, b: &Rational, d: &Rational) -> Ordering {
    let sa = a.cmp(&Rational::zero());
    let sb = if d.is_zero() {
        Ordering::Equal
    } else {
        b.cmp(&Rational::zero())
    };
    match (sa, sb) {
        (x, Ordering::Equal) => x,
        (Ordering::Equal, y) => y,
        (x, y) if x == y => x,
        // opposite signs: compare a² with b²d
        (x, _) => {
            let lhs = a * a;
            let rhs = b * b * d;
            match lhs.cmp(&rhs) {
                Ordering::Equal => Ordering::Equal,
                Ordering::Greater => x,
                Ordering::Less => x.reverse(),
            }
        }
    }
}

/// Exact ordering of two surds; fails only for irrational values over
/// radicands whose ratio is not a rational square.
pub fn surd_cmp(x: &Surd, y: &Surd) -> Result<Ordering> {
    x.try_cmp(y)
}

/// The normalized rational value of `x`, if any.
pub fn surd_is_rational(x: &Surd) -> Option<Rational> {
    x.as_rational()
}

/// Real roots of `p·x² + q·x + r = 0` in increasing order (a double root is
/// returned once).
pub fn solve_quadratic(p: &Rational, q: &Rational, r: &Rational) -> Result<Vec<Surd>> {
    if p.is_zero() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let disc = q * q - int(4) * p * r;
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    let centre = -q / (int(2) * p);
    if disc.is_zero() {
        return Ok(vec![Surd::from_rational(centre)]);
    }
    let d = disc / (int(4) * p * p);
    let lo = Surd::normalized(centre.clone(), -Rational::one(), d.clone());
    let hi = Surd::normalized(centre, Rational::one(), d);
    Ok(vec![lo, hi])
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            let (op, mag) = if self.b.is_negative() {
                ("-", -self.b.clone())
            } else {
                ("+", self.b.clone())
            };
            write!(f, "{} {} {}*sqrt({})", self.a, op, mag, self.d)
        }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd::normalized(-self.a.clone(), -self.b.clone(), self.d.clone())
    }
}

impl Add<&Rational> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Rational) -> Surd {
        self.add_rational(rhs)
    }
}

impl Sub<&Rational> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Rational) -> Surd {
        self.add_rational(&-rhs.clone())
    }
}

impl Mul<&Rational> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Rational) -> Surd {
        self.scale(rhs)
    }
}

/// `-1`, `0` or `1` as an `i32`, for sign bookkeeping.
pub fn sign_i32(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// True iff `x` is an even integer.
pub fn is_even(x: &BigInt) -> bool {
    x.is_even()
}
