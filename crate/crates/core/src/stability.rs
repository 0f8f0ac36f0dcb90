//! Slope functions on the tilted hearts `A(b)` and the `(b, w)`-plane.
//!
//! Parameters range over `U = {w > b²/2}`. The rescaled slope
//! `ν_{b,w} = (ch₂.H - w·ch₀H³)/ch₁^{bH}.H²` is linear in `w` and has a
//! denominator linear in `b`, which is what makes walls straight lines.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::charges::{twist_by_bh, Charge, CurveCharge, ThreefoldData};
use crate::numeric::{fmt_rational, int, serde_rational, Rational};
use crate::{Error, Result};

/// A point `(b, w)` of the plane. Only points of `U` are weak stability
/// conditions; `σ = √(6(w - b²/2))` is never materialized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilityParam {
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub w: Rational,
}

impl StabilityParam {
    pub fn new(b: Rational, w: Rational) -> Self {
        StabilityParam { b, w }
    }

    pub fn in_u(&self) -> bool {
        self.w > &self.b * &self.b / int(2)
    }

    pub fn require_u(&self) -> Result<()> {
        if self.in_u() {
            Ok(())
        } else {
            Err(Error::OutsideU {
                b: fmt_rational(&self.b),
                w: fmt_rational(&self.w),
            })
        }
    }
}

/// A slope: finite, or `+∞` (strictly above every finite value).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlopeValue {
    Finite(Rational),
    PlusInfinity,
}

impl SlopeValue {
    pub fn ratio(num: Rational, den: &Rational) -> Self {
        if den.is_zero() {
            SlopeValue::PlusInfinity
        } else {
            SlopeValue::Finite(num / den)
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SlopeValue::Finite(r) => Some(r),
            SlopeValue::PlusInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SlopeValue::PlusInfinity)
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(r) => write!(f, "{r}"),
            SlopeValue::PlusInfinity => f.write_str("+inf"),
        }
    }
}

impl Serialize for SlopeValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SlopeValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "+inf" {
            Ok(SlopeValue::PlusInfinity)
        } else {
            crate::numeric::parse_rational(&s)
                .map(SlopeValue::Finite)
                .map_err(serde::de::Error::custom)
        }
    }
}

/// `μ_H = ch₁.H²/(ch₀H³)`, `+∞` in rank zero.
pub fn mu_h(c: &Charge, x: &ThreefoldData) -> SlopeValue {
    SlopeValue::ratio(c.c1h2.clone(), &(&c.r * x.h3_q()))
}

/// `ν_H = ch₂.H/ch₁.H²` for rank-zero charges.
pub fn nu_h(c: &Charge) -> Result<SlopeValue> {
    if !c.is_rank_zero() {
        return Err(Error::NonzeroRank);
    }
    Ok(SlopeValue::ratio(c.c2h.clone(), &c.c1h2))
}

/// `ν_{b,w} = (ch₂.H - w·ch₀H³)/ch₁^{bH}.H²`.
pub fn nu_bw(c: &Charge, p: &StabilityParam, x: &ThreefoldData) -> Result<SlopeValue> {
    p.require_u()?;
    Ok(nu_bw_unchecked(c, p, x))
}

/// [`nu_bw`] without the membership test for `U`.
pub fn nu_bw_unchecked(c: &Charge, p: &StabilityParam, x: &ThreefoldData) -> SlopeValue {
    let h3 = x.h3_q();
    let num = &c.c2h - &p.w * &c.r * &h3;
    let den = &c.c1h2 - &p.b * &c.r * &h3;
    SlopeValue::ratio(num, &den)
}

/// The unrescaled slope
/// `N_{b,w} = (w·ch₂^{bH}.H - w³/6·ch₀H³)/(w²·ch₁^{bH}.H²)`.
pub fn n_bw(c: &Charge, b: &Rational, w: &Rational, x: &ThreefoldData) -> Result<SlopeValue> {
    if w.is_zero() {
        return Err(Error::ZeroW);
    }
    let t = twist_by_bh(c, b, x);
    let num = w * &t.c2h - w * w * w / int(6) * &c.r * x.h3_q();
    let den = w * w * &t.c1h2;
    Ok(SlopeValue::ratio(num, &den))
}

/// Necessary numerical condition for a `ν_{b,w}`-semistable object of `A(b)`:
/// `ch₁^{bH}.H² ≥ 0`, and `ch₂.H - w·ch₀H³ ≥ 0` when that vanishes.
pub fn heart_positive(c: &Charge, p: &StabilityParam, x: &ThreefoldData) -> Result<bool> {
    p.require_u()?;
    let h3 = x.h3_q();
    let den = &c.c1h2 - &p.b * &c.r * &h3;
    Ok(match den.cmp(&Rational::zero()) {
        Ordering::Less => false,
        Ordering::Greater => true,
        Ordering::Equal => &c.c2h - &p.w * &c.r * &h3 >= Rational::zero(),
    })
}

/// `Π(E) = (ch₁.H²/ch₀H³, ch₂.H/ch₀H³)`, defined in nonzero rank.
pub fn pi_projection(c: &Charge, x: &ThreefoldData) -> Result<(Rational, Rational)> {
    if c.is_rank_zero() {
        return Err(Error::RankZero);
    }
    let rh = &c.r * x.h3_q();
    Ok((&c.c1h2 / &rh, &c.c2h / &rh))
}

/// Large-volume attractor slope `ch₂.H/ch₁.H² - (1/n)·ch₁.β/ch₁.H²`.
///
/// `ch₁.β` is taken from `ch1_beta` when given, else computed as
/// `(ch₁.H²/H³)·β.H` on a Picard-rank-one threefold.
pub fn attractor_slope(
    c: &Charge,
    cc: &CurveCharge,
    x: &ThreefoldData,
    ch1_beta: Option<&Rational>,
) -> Result<SlopeValue> {
    if !c.is_rank_zero() {
        return Err(Error::NonzeroRank);
    }
    cc.check_n()?;
    let pairing = match ch1_beta {
        Some(v) => v.clone(),
        None if x.pic_rank1 => &c.c1h2 / x.h3_q() * &cc.beta_h,
        None => return Err(Error::MissingPairing),
    };
    if c.c1h2.is_zero() {
        return Ok(SlopeValue::PlusInfinity);
    }
    Ok(SlopeValue::Finite((&c.c2h - pairing / cc.n_q()) / &c.c1h2))
}
