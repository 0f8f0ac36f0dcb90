//! The first wall for the class `v_n` and the enumeration of its rank-one
//! destabilisers `F₁ ↪ F ↠ F₂`, indexed by `c = ch₂(F₁).H`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ch3_bound_f1, ch3_bound_f2n, parabola_intersections, SceneItem, WallLine};
use crate::charges::{class_v, CurveCharge, ThreefoldData};
use crate::numeric::{int, serde_rational, serde_rational_vec, Rational, Surd};
use crate::stability::pi_projection;
use crate::{Charge, Result};

pub const FILTER_W_RANGE: &str = "w-range";
pub const FILTER_B_RANGE: &str = "b-range";
pub const FILTER_COMBINED: &str = "combined";
pub const FILTER_F2_CH3: &str = "f2-ch3";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FilterStatus {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterOutcome {
    pub name: String,
    pub status: FilterStatus,
}

/// Whether the `m`-dependent lower bound on `c` is already at least `-2β.H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Asymptotic,
    FiniteN,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    #[serde(with = "serde_rational")]
    pub c: Rational,
    /// Intercept `c/H³` of the wall line `w = b₀·b + x`.
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub w0: Rational,
    pub b1: Option<Surd>,
    pub b2: Option<Surd>,
    pub filters: Vec<FilterOutcome>,
    pub eliminated_by: Option<String>,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstWallReport {
    pub n: u64,
    #[serde(with = "serde_rational")]
    pub beta_h: Rational,
    #[serde(with = "serde_rational")]
    pub m: Rational,
    #[serde(with = "serde_rational")]
    pub b0: Rational,
    #[serde(with = "serde_rational")]
    pub w_f: Rational,
    #[serde(with = "serde_rational")]
    pub w_js: Rational,
    /// `w_f > w_JS`: no admissible `w₀` on `b = b₀`.
    pub w_window_empty: bool,
    /// `-2β.H - 3m/n - 2(β.H)²/(n²H³)`, the lower end of `c` forced by
    /// `w₀ ≥ w_f`.
    #[serde(with = "serde_rational")]
    pub c_lower_exact: Rational,
    pub regime: Regime,
    pub denominator: u64,
    pub candidates: Vec<Candidate>,
    #[serde(with = "serde_rational_vec")]
    pub survivors: Vec<Rational>,
    pub unique: bool,
    pub empty_moduli: bool,
    /// The combined inequality evaluated at `c = -β.H`, where it is not used
    /// to eliminate.
    pub js_combined_holds: Option<bool>,
}

impl FirstWallReport {
    pub fn wall_line(&self, c: &Rational, x: &ThreefoldData) -> WallLine {
        WallLine::new(self.b0.clone(), c / x.h3_q())
    }

    pub fn survivor_lines(&self, x: &ThreefoldData) -> Vec<WallLine> {
        self.survivors
            .iter()
            .map(|c| self.wall_line(c, x))
            .collect()
    }

    /// Names of the filters applied, in order, with the count of candidates
    /// each one eliminated first.
    pub fn transcript(&self) -> Vec<(String, usize)> {
        [
            FILTER_W_RANGE,
            FILTER_B_RANGE,
            FILTER_COMBINED,
            FILTER_F2_CH3,
        ]
        .iter()
        .map(|name| {
            let k = self
                .candidates
                .iter()
                .filter(|c| c.eliminated_by.as_deref() == Some(*name))
                .count();
            (name.to_string(), k)
        })
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstWallOptions {
    /// Candidates range over `(1/denominator)·ℤ`.
    pub denominator: u64,
}

impl Default for FirstWallOptions {
    fn default() -> Self {
        FirstWallOptions { denominator: 1 }
    }
}

pub fn first_wall(cc: &CurveCharge, x: &ThreefoldData) -> Result<FirstWallReport> {
    first_wall_with(cc, x, &FirstWallOptions::default())
}

pub fn first_wall_with(
    cc: &CurveCharge,
    x: &ThreefoldData,
    opts: &FirstWallOptions,
) -> Result<FirstWallReport> {
    cc.check_n()?;
    let h3 = x.h3_q();
    let n = cc.n_q();
    let bh = &cc.beta_h;
    let m = &cc.m;
    let t = bh / (&n * &h3);
    let b0 = -&n / int(2) - &t;
    let w_f = &n * &n / int(4) - bh / &h3 - int(3) * m / (&n * &h3) - &t * &t;
    let w_js = &n * &n / int(4) + &t * &t;
    let c_lower_exact = int(-2) * bh - int(3) * m / &n - int(2) * bh * bh / (&n * &n * &h3);
    let regime = if c_lower_exact >= int(-2) * bh {
        Regime::Asymptotic
    } else {
        Regime::FiniteN
    };
    let denominator = opts.denominator.max(1);

    let empty_moduli = bh.is_negative();
    let candidates: Vec<Candidate> = if empty_moduli {
        Vec::new()
    } else {
        candidate_grid(bh, denominator)
            .into_par_iter()
            .map(|c| examine(c, cc, x, &b0, &w_f, &w_js))
            .collect()
    };

    let survivors: Vec<Rational> = candidates
        .iter()
        .filter(|c| c.survives)
        .map(|c| c.c.clone())
        .collect();
    let unique = survivors.len() == 1 && survivors[0] == -bh.clone();
    let js_combined_holds = candidates
        .iter()
        .find(|c| c.c == -bh.clone())
        .map(|c| combined_holds(&c.c, cc, x));

    Ok(FirstWallReport {
        n: cc.n,
        beta_h: bh.clone(),
        m: m.clone(),
        w_window_empty: w_f > w_js,
        b0,
        w_f,
        w_js,
        c_lower_exact,
        regime,
        denominator,
        candidates,
        survivors,
        unique,
        empty_moduli,
        js_combined_holds,
    })
}

/// `(1/k)ℤ ∩ [-2β.H, -β.H]`, increasing.
fn candidate_grid(bh: &Rational, k: u64) -> Vec<Rational> {
    let k = BigInt::from(k);
    let kq = Rational::from_integer(k.clone());
    let lo = (int(-2) * bh * &kq).ceil().to_integer();
    let hi = (-bh * &kq).floor().to_integer();
    let mut out = Vec::new();
    let mut i = lo;
    while i <= hi {
        out.push(Rational::new(i.clone(), k.clone()));
        i += 1;
    }
    out
}

fn combined_holds(c: &Rational, cc: &CurveCharge, x: &ThreefoldData) -> bool {
    let s = &cc.beta_h + c;
    let lhs = -&cc.m - ch3_bound_f1(c, x) - cc.n_q() * &s;
    lhs <= ch3_bound_f2n(&-s, x)
}

fn examine(
    c: Rational,
    cc: &CurveCharge,
    x: &ThreefoldData,
    b0: &Rational,
    w_f: &Rational,
    w_js: &Rational,
) -> Candidate {
    let h3 = x.h3_q();
    let xi = &c / &h3;
    let w0 = b0 * b0 + &xi;
    let roots = parabola_intersections(&WallLine::new(b0.clone(), xi.clone()));
    let is_js = c == -cc.beta_h.clone();

    let w_range = pass_if(w_f <= &w0 && &w0 <= w_js);

    let half = Rational::one() / (int(2) * &h3);
    let b_range = match &roots {
        Some((b2, b1)) => pass_if(
            b1.cmp_rational(&-half.clone()) == Ordering::Greater
                && b2.cmp_rational(&(-cc.n_q() + &half)) == Ordering::Less,
        ),
        None => FilterStatus::Fail,
    };

    let combined = if is_js {
        FilterStatus::NotApplicable
    } else {
        pass_if(combined_holds(&c, cc, x))
    };

    // ch₃(F₂) = ch₃(F₂(n)) + n(β.H + c) + n³H³/6 with ch₃(F₂(n)) at its bound
    let s = &cc.beta_h + &c;
    let f2 = pass_if(ch3_bound_f2n(&-s.clone(), x) + cc.n_q() * &s <= Rational::zero());

    let filters = vec![
        outcome(FILTER_W_RANGE, w_range),
        outcome(FILTER_B_RANGE, b_range),
        outcome(FILTER_COMBINED, combined),
        outcome(FILTER_F2_CH3, f2),
    ];
    let eliminated_by = filters
        .iter()
        .find(|f| f.status == FilterStatus::Fail)
        .map(|f| f.name.clone());
    let (b2, b1) = match roots {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    Candidate {
        c,
        x: xi,
        w0,
        b1,
        b2,
        filters,
        survives: eliminated_by.is_none(),
        eliminated_by,
    }
}

fn pass_if(ok: bool) -> FilterStatus {
    if ok {
        FilterStatus::Pass
    } else {
        FilterStatus::Fail
    }
}

fn outcome(name: &str, status: FilterStatus) -> FilterOutcome {
    FilterOutcome {
        name: name.to_string(),
        status,
    }
}

/// Smallest `n ≤ n_max` with `unique` for every `n' ∈ [n, n_max]`.
pub fn min_n_unique(cc: &CurveCharge, x: &ThreefoldData, n_max: u64) -> Option<u64> {
    min_n_unique_with(cc, x, n_max, &FirstWallOptions::default())
}

pub fn min_n_unique_with(
    cc: &CurveCharge,
    x: &ThreefoldData,
    n_max: u64,
    opts: &FirstWallOptions,
) -> Option<u64> {
    let flags: Vec<bool> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            first_wall_with(&cc.clone().with_n(n), x, opts)
                .map(|r| r.unique)
                .unwrap_or(false)
        })
        .collect();
    let tail = flags.iter().rev().take_while(|u| **u).count() as u64;
    if tail == 0 {
        None
    } else {
        Some(n_max - tail + 1)
    }
}

/// Diagram of a report: `∂U`, the surviving walls, `Π(O(-n))`, `Π(v)`, the
/// point `(b₀, w_f)` and the endpoints of each surviving wall.
pub fn first_wall_scene(
    report: &FirstWallReport,
    cc: &CurveCharge,
    x: &ThreefoldData,
) -> Vec<SceneItem> {
    let mut scene = vec![SceneItem::Parabola];
    for l in report.survivor_lines(x) {
        scene.push(SceneItem::Line(l));
    }
    let n = cc.n_q();
    let o = Charge::line_bundle(&-n.clone(), x);
    if let Ok((b, w)) = pi_projection(&o, x) {
        scene.push(SceneItem::point(b, w, Some(format!("O(-{})", cc.n))));
    }
    if let Ok((b, w)) = pi_projection(&class_v(cc), x) {
        scene.push(SceneItem::point(b, w, Some("v".to_string())));
    }
    scene.push(SceneItem::point(
        report.b0.clone(),
        report.w_f.clone(),
        Some("w_f".to_string()),
    ));
    for cand in report.candidates.iter().filter(|c| c.survives) {
        let l = WallLine::new(report.b0.clone(), cand.x.clone());
        for b in [&cand.b1, &cand.b2].into_iter().flatten() {
            let w = b.scale(&l.slope).add_rational(&l.intercept);
            scene.push(SceneItem::Point {
                b: b.clone(),
                w,
                label: None,
            });
        }
    }
    scene
}
