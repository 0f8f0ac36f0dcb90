//! Walls in the `(b, w)`-plane and the Bogomolov–Gieseker checks used to
//! locate them.
//!
//! Setting `ν_{b,w}(u) = ν_{b,w}(v)` and cross-multiplying gives an equation
//! affine in `(b, w)`: the `b·w` terms cancel, so every wall is (a segment
//! of) a line. For a rank-zero class all its walls are parallel of slope
//! `ν_H`; for nonzero rank they all pass through `Π`.

mod first_wall;
mod svg;

use std::cmp::Ordering;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charges::{twist_by_bh, Charge, ThreefoldData};
use crate::numeric::{floor, int, serde_rational, solve_quadratic, Rational, Surd};
use crate::stability::StabilityParam;
use crate::{Error, Result};

pub use first_wall::{
    first_wall, first_wall_scene, first_wall_with, min_n_unique, min_n_unique_with, Candidate,
    FilterOutcome, FilterStatus, FirstWallOptions, FirstWallReport, Regime,
};
pub use svg::{render_bw_plane, SceneItem, Viewport};

/// The line `w = slope·b + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WallLine {
    #[serde(with = "serde_rational")]
    pub slope: Rational,
    #[serde(with = "serde_rational")]
    pub intercept: Rational,
}

impl WallLine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        WallLine { slope, intercept }
    }

    /// Line of the given slope through `(b, w)`.
    pub fn through(slope: Rational, b: &Rational, w: &Rational) -> Self {
        let intercept = w - &slope * b;
        WallLine { slope, intercept }
    }

    pub fn w_at(&self, b: &Rational) -> Rational {
        &self.slope * b + &self.intercept
    }

    pub fn contains(&self, b: &Rational, w: &Rational) -> bool {
        &self.w_at(b) == w
    }
}

/// A wall: a non-vertical line, or a vertical line `b = const`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Wall {
    Line(WallLine),
    Vertical {
        #[serde(with = "serde_rational")]
        b: Rational,
    },
}

impl Wall {
    pub fn line(&self) -> Option<&WallLine> {
        match self {
            Wall::Line(l) => Some(l),
            Wall::Vertical { .. } => None,
        }
    }

    pub fn contains(&self, b: &Rational, w: &Rational) -> bool {
        match self {
            Wall::Line(l) => l.contains(b, w),
            Wall::Vertical { b: b0 } => b0 == b,
        }
    }
}

/// The locus `{ν_{b,w}(u) = ν_{b,w}(v)}`:
/// `A + B·b + C·w = 0` with
/// `A = c2u·c1v - c2v·c1u`, `B = H³(c2v·ru - c2u·rv)`, `C = H³(rv·c1u - ru·c1v)`.
pub fn wall_between(u: &Charge, v: &Charge, x: &ThreefoldData) -> Result<Wall> {
    let h3 = x.h3_q();
    let a = &u.c2h * &v.c1h2 - &v.c2h * &u.c1h2;
    let b = &h3 * (&v.c2h * &u.r - &u.c2h * &v.r);
    let c = &h3 * (&v.r * &u.c1h2 - &u.r * &v.c1h2);
    if !c.is_zero() {
        return Ok(Wall::Line(WallLine::new(-&b / &c, -&a / &c)));
    }
    if !b.is_zero() {
        return Ok(Wall::Vertical { b: -a / b });
    }
    if a.is_zero() {
        Err(Error::ProportionalCharges)
    } else {
        Err(Error::NoWall)
    }
}

/// Values of `b` where the line meets `∂U = {w = b²/2}`, as `(b₂, b₁)` with
/// `b₂ ≤ b₁`; a tangent line gives a repeated root.
pub fn parabola_intersections(l: &WallLine) -> Option<(Surd, Surd)> {
    // b²/2 = s·b + x  ⇔  b² - 2s·b - 2x = 0
    let roots = solve_quadratic(
        &Rational::one(),
        &(int(-2) * &l.slope),
        &(int(-2) * &l.intercept),
    )
    .expect("leading coefficient is 1");
    match roots.len() {
        0 => None,
        1 => Some((roots[0].clone(), roots[0].clone())),
        _ => Some((roots[0].clone(), roots[1].clone())),
    }
}

/// The Li region for the quintic:
/// `w > b²/2 + ½(b - ⌊b⌋)(⌊b⌋ + 1 - b)`.
pub fn li_region_contains(p: &StabilityParam) -> bool {
    p.w > li_region_bound(&p.b)
}

/// Right-hand side of [`li_region_contains`].
pub fn li_region_bound(b: &Rational) -> Rational {
    let fl = Rational::from_integer(floor(b));
    let t = b - &fl;
    b * b / int(2) + &t * (Rational::one() - &t) / int(2)
}

/// `ch₂^{bH}.H - (w - b²/2)·ch₀H³`; zero exactly on the locus where the
/// Bogomolov–Gieseker inequality applies.
fn bg_hypothesis_defect(c: &Charge, p: &StabilityParam, x: &ThreefoldData) -> Rational {
    let t = twist_by_bh(c, &p.b, x);
    t.c2h - (&p.w - &p.b * &p.b / int(2)) * &c.r * x.h3_q()
}

/// A point of `l ∩ U` where `ch₂^{bH}.H = (w - b²/2)·ch₀H³` holds for `c`.
///
/// Along `w = s·b + x` the condition reads
/// `r·H³·b² - (ch₁.H² + r·H³·s)·b + (ch₂.H - r·H³·x) = 0`. Among the rational
/// solutions inside `U`, the one with smallest `b` is returned.
pub fn bg_hypothesis_locus(c: &Charge, l: &WallLine, x: &ThreefoldData) -> Result<StabilityParam> {
    let rh = &c.r * x.h3_q();
    let lin = -(&c.c1h2 + &rh * &l.slope);
    let cst = &c.c2h - &rh * &l.intercept;
    let roots: Vec<Rational> = if rh.is_zero() {
        if lin.is_zero() {
            Vec::new()
        } else {
            vec![-cst / lin]
        }
    } else {
        solve_quadratic(&rh, &lin, &cst)?
            .into_iter()
            .filter_map(|s| s.as_rational())
            .collect()
    };
    roots
        .into_iter()
        .map(|b| {
            let w = l.w_at(&b);
            StabilityParam::new(b, w)
        })
        .find(|p| p.in_u())
        .ok_or(Error::NoIntersectionInU)
}

/// The line `ℓ₁` through `Π(F₁) = (0, c/H³)` and `(b', b'²/2)`, `b' = -1/H³`,
/// for a rank-one class with `ch₁.H² = 0` and `ch₂.H = c`.
pub fn ell1_line(c: &Rational, x: &ThreefoldData) -> WallLine {
    let h3 = x.h3_q();
    let bp = -Rational::one() / &h3;
    let wp = &bp * &bp / int(2);
    let pi_w = c / &h3;
    let slope = (&pi_w - &wp) / (Rational::zero() - &bp);
    WallLine::new(slope, pi_w)
}

/// Closed form `(b*, w*) = (c - 1/(2H³), (b*)² + c/H³)`.
pub fn bstar_wstar(c: &Rational, x: &ThreefoldData) -> StabilityParam {
    let h3 = x.h3_q();
    let b = c - Rational::one() / (int(2) * &h3);
    let w = &b * &b + c / &h3;
    StabilityParam::new(b, w)
}

/// The conjectural inequality `ch₃^{bH} ≤ (w/3 - b²/6)·ch₁^{bH}.H²`, checked
/// only where its hypothesis holds.
pub fn bg_inequality_check(c: &Charge, p: &StabilityParam, x: &ThreefoldData) -> Result<bool> {
    p.require_u()?;
    if !bg_hypothesis_defect(c, p, x).is_zero() {
        return Err(Error::HypothesisNotMet);
    }
    let t = twist_by_bh(c, &p.b, x);
    let rhs = (&p.w / int(3) - &p.b * &p.b / int(6)) * &t.c1h2;
    Ok(t.c3.cmp(&rhs) != Ordering::Greater)
}

/// `ch₃(F₁) ≤ ⅔·c·(c - 1/(2H³))` for the rank-one destabiliser with
/// `ch₂(F₁).H = c`.
pub fn ch3_bound_f1(c: &Rational, x: &ThreefoldData) -> Rational {
    int(2) / int(3) * c * (c - Rational::one() / (int(2) * x.h3_q()))
}

/// `ch₃(F₂(n)) ≤ ⅔·c₂·(c₂ + 1/(2H³))` with `c₂ = ch₂(F₂(n)).H`.
pub fn ch3_bound_f2n(c2: &Rational, x: &ThreefoldData) -> Rational {
    int(2) / int(3) * c2 * (c2 + Rational::one() / (int(2) * x.h3_q()))
}
