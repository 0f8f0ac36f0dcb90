//! The numerical shadow of a polarised threefold `(X, O(1))` and reduced
//! Chern characters on it.
//!
//! A [`Charge`] stores only `ch_i.H^{3-i}`; every slope and wall formula
//! depends on nothing else. The optional refinements `ch₁².H` and `ch₁.c₂(X)`
//! are carried when known and recomputed from `ch₁.H²` when `Pic X = ℤ·H`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numeric::{int, serde_rational, serde_rational_opt, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldData {
    /// `H³`
    pub h3: i64,
    /// `c₂(X).H`
    pub c2h: i64,
    /// `b₂(X)`
    pub b2: u32,
    /// `#H²(X, ℤ)_tors`
    pub n_tors: u64,
    /// Treat every divisor class as a rational multiple of `H`.
    pub pic_rank1: bool,
}

impl ThreefoldData {
    pub fn new(h3: i64, c2h: i64, b2: u32, n_tors: u64, pic_rank1: bool) -> Result<Self> {
        if h3 < 1 {
            return Err(Error::InvalidThreefold(format!(
                "H^3 = {h3} must be positive"
            )));
        }
        if n_tors < 1 {
            return Err(Error::InvalidThreefold(
                "torsion count must be at least 1".into(),
            ));
        }
        if b2 < 1 {
            return Err(Error::InvalidThreefold("b2 must be at least 1".into()));
        }
        Ok(ThreefoldData {
            h3,
            c2h,
            b2,
            n_tors,
            pic_rank1,
        })
    }

    /// The quintic threefold: `H³ = 5`, `c₂.H = 50`, `Pic = ℤ·H`.
    pub fn quintic() -> Self {
        ThreefoldData {
            h3: 5,
            c2h: 50,
            b2: 1,
            n_tors: 1,
            pic_rank1: true,
        }
    }

    pub fn h3_q(&self) -> Rational {
        int(self.h3)
    }

    pub fn c2h_q(&self) -> Rational {
        int(self.c2h)
    }
}

/// Reduced Chern character `(ch₀, ch₁.H², ch₂.H, ch₃)` with optional
/// refinements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Charge {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub c1h2: Rational,
    #[serde(with = "serde_rational")]
    pub c2h: Rational,
    #[serde(with = "serde_rational")]
    pub c3: Rational,
    /// `ch₁².H`
    #[serde(with = "serde_rational_opt", default)]
    pub c1sq_h: Option<Rational>,
    /// `ch₁.c₂(X)`
    #[serde(with = "serde_rational_opt", default)]
    pub c1c2: Option<Rational>,
}

impl Charge {
    pub fn new(r: Rational, c1h2: Rational, c2h: Rational, c3: Rational) -> Self {
        Charge {
            r,
            c1h2,
            c2h,
            c3,
            c1sq_h: None,
            c1c2: None,
        }
    }

    pub fn zero() -> Self {
        Self::new(
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        )
    }

    /// `ch(O_X(k))`, with both refinements.
    pub fn line_bundle(k: &Rational, x: &ThreefoldData) -> Self {
        let h3 = x.h3_q();
        Charge {
            r: Rational::one(),
            c1h2: k * &h3,
            c2h: k * k * &h3 / int(2),
            c3: k * k * k * &h3 / int(6),
            c1sq_h: Some(k * k * &h3),
            c1c2: Some(k * x.c2h_q()),
        }
    }

    /// `ch(O_X)`.
    pub fn structure_sheaf(x: &ThreefoldData) -> Self {
        Self::line_bundle(&Rational::zero(), x)
    }

    pub fn with_c1sq_h(mut self, v: Rational) -> Self {
        self.c1sq_h = Some(v);
        self
    }

    pub fn with_c1c2(mut self, v: Rational) -> Self {
        self.c1c2 = Some(v);
        self
    }

    /// The four entries used by every slope formula.
    pub fn core(&self) -> [&Rational; 4] {
        [&self.r, &self.c1h2, &self.c2h, &self.c3]
    }

    /// `ch₁ = k·H` with `k = ch₁.H²/H³`, valid when `Pic X = ℤ·H`.
    fn pic_rank1_multiple(&self, x: &ThreefoldData) -> Option<Rational> {
        x.pic_rank1.then(|| &self.c1h2 / x.h3_q())
    }

    /// `ch₁.c₂(X)`: stored value, else the Picard-rank-one value.
    pub fn resolve_c1c2(&self, x: &ThreefoldData) -> Result<Rational> {
        if let Some(v) = &self.c1c2 {
            return Ok(v.clone());
        }
        self.pic_rank1_multiple(x)
            .map(|k| k * x.c2h_q())
            .ok_or(Error::MissingC1c2)
    }

    /// `ch₁².H`: stored value, else the Picard-rank-one value.
    pub fn resolve_c1sq_h(&self, x: &ThreefoldData) -> Result<Rational> {
        if let Some(v) = &self.c1sq_h {
            return Ok(v.clone());
        }
        self.pic_rank1_multiple(x)
            .map(|k| &k * &k * x.h3_q())
            .ok_or(Error::MissingC1sqH)
    }

    /// Fills both refinements from `ch₁.H²` when `Pic X = ℤ·H`.
    pub fn refined(mut self, x: &ThreefoldData) -> Self {
        if let Some(k) = self.pic_rank1_multiple(x) {
            self.c1sq_h = Some(&k * &k * x.h3_q());
            self.c1c2 = Some(k * x.c2h_q());
        }
        self
    }

    pub fn is_rank_zero(&self) -> bool {
        self.r.is_zero()
    }
}

/// Curve-type charge `(β.H, m)` together with the divisor multiple `n` and
/// the self-pairing `Q = ∫(β/nH)∪β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCharge {
    #[serde(with = "serde_rational")]
    pub beta_h: Rational,
    #[serde(with = "serde_rational")]
    pub m: Rational,
    /// `None` means "derive it": `(β.H)²/(nH³)` when `Pic X = ℤ·H`.
    #[serde(with = "serde_rational_opt", default)]
    pub q: Option<Rational>,
    pub n: u64,
}

impl CurveCharge {
    pub fn new(beta_h: Rational, m: Rational, n: u64) -> Self {
        CurveCharge {
            beta_h,
            m,
            q: None,
            n,
        }
    }

    pub fn with_q(mut self, q: Rational) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n = n;
        self
    }

    pub fn n_q(&self) -> Rational {
        int(self.n as i64)
    }

    pub fn check_n(&self) -> Result<()> {
        if self.n == 0 {
            Err(Error::InvalidN)
        } else {
            Ok(())
        }
    }

    /// `Q`, either as supplied or derived as `(β.H)²/(nH³)` on a
    /// Picard-rank-one threefold.
    pub fn resolve_q(&self, x: &ThreefoldData) -> Result<Rational> {
        if let Some(q) = &self.q {
            return Ok(q.clone());
        }
        if !x.pic_rank1 {
            return Err(Error::MissingQ);
        }
        self.check_n()?;
        Ok(&self.beta_h * &self.beta_h / (self.n_q() * x.h3_q()))
    }
}

/// `v = (1, 0, -β.H, -m)`, the class of an ideal sheaf of curves.
pub fn class_v(cc: &CurveCharge) -> Charge {
    Charge::new(
        Rational::one(),
        Rational::zero(),
        -cc.beta_h.clone(),
        -cc.m.clone(),
    )
    .with_c1sq_h(Rational::zero())
    .with_c1c2(Rational::zero())
}

/// `v_n = v - ch(O(-n)) = (0, nH³, -β.H - n²H³/2, -m + n³H³/6)`.
pub fn class_vn(cc: &CurveCharge, x: &ThreefoldData) -> Result<Charge> {
    cc.check_n()?;
    let n = cc.n_q();
    let h3 = x.h3_q();
    Ok(Charge {
        r: Rational::zero(),
        c1h2: &n * &h3,
        c2h: -cc.beta_h.clone() - &n * &n * &h3 / int(2),
        c3: -cc.m.clone() + &n * &n * &n * &h3 / int(6),
        c1sq_h: Some(&n * &n * &h3),
        c1c2: Some(&n * x.c2h_q()),
    })
}

/// `ch^{bH} = ch·e^{-bH}`. Optional refinements are dropped.
pub fn twist_by_bh(c: &Charge, b: &Rational, x: &ThreefoldData) -> Charge {
    let h3 = x.h3_q();
    let rh = &c.r * &h3;
    let b2 = b * b;
    let b3 = &b2 * b;
    Charge::new(
        c.r.clone(),
        &c.c1h2 - b * &rh,
        &c.c2h - b * &c.c1h2 + &b2 / int(2) * &rh,
        &c.c3 - b * &c.c2h + &b2 / int(2) * &c.c1h2 - &b3 / int(6) * &rh,
    )
}

/// `ch·e^{aH}`, i.e. tensoring by `O(a)`.
pub fn twist_by_o(c: &Charge, a: &Rational, x: &ThreefoldData) -> Charge {
    twist_by_bh(c, &-a.clone(), x)
}

/// `Δ_H = (ch₁.H²)² - 2(ch₀H³)(ch₂.H)`.
pub fn delta_h(c: &Charge, x: &ThreefoldData) -> Rational {
    &c.c1h2 * &c.c1h2 - int(2) * &c.r * x.h3_q() * &c.c2h
}

/// Riemann–Roch `χ = ch₃ + ch₁.c₂/12` on a Calabi–Yau threefold.
pub fn chi_euler(c: &Charge, x: &ThreefoldData) -> Result<Rational> {
    let c1c2 = c.resolve_c1c2(x)?;
    Ok(&c.c3 + c1c2 / int(12))
}

/// Componentwise `total - sub`. `ch₁.c₂` is linear and is subtracted when
/// both sides carry it; `ch₁².H` is quadratic and is dropped.
pub fn complement(total: &Charge, sub: &Charge) -> Charge {
    Charge {
        r: &total.r - &sub.r,
        c1h2: &total.c1h2 - &sub.c1h2,
        c2h: &total.c2h - &sub.c2h,
        c3: &total.c3 - &sub.c3,
        c1sq_h: None,
        c1c2: match (&total.c1c2, &sub.c1c2) {
            (Some(a), Some(b)) => Some(a - b),
            _ => None,
        },
    }
}

/// Hodge index: `ch₁².H ≤ (ch₁.H²)²/H³`.
pub fn hodge_index_check(c: &Charge, x: &ThreefoldData) -> Result<bool> {
    let sq = c.c1sq_h.as_ref().ok_or(Error::MissingC1sqH)?;
    Ok(sq <= &(&c.c1h2 * &c.c1h2 / x.h3_q()))
}

/// Bogomolov for slope-semistable sheaves: `ch₁².H - 2ch₀(ch₂.H) ≥ 0`.
pub fn strong_bogomolov_check(c: &Charge) -> Result<bool> {
    let sq = c.c1sq_h.as_ref().ok_or(Error::MissingC1sqH)?;
    Ok(sq - int(2) * &c.r * &c.c2h >= Rational::zero())
}
