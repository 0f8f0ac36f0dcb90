//! Deterministic SVG diagrams of the `(b, w)`-plane.
//!
//! Model coordinates are used directly with `y = -w`, so the `viewBox` is the
//! viewport itself. Only walls are emitted as `<line>` elements.

use std::fmt::Write;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::WallLine;
use crate::numeric::{int, serde_rational, to_decimal, Rational, Surd};
use crate::{Error, Result};

const PRECISION: usize = 6;
const PARABOLA_SAMPLES: i64 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Viewport {
    #[serde(with = "serde_rational")]
    pub b_min: Rational,
    #[serde(with = "serde_rational")]
    pub b_max: Rational,
    #[serde(with = "serde_rational")]
    pub w_min: Rational,
    #[serde(with = "serde_rational")]
    pub w_max: Rational,
}

impl Viewport {
    pub fn new(b_min: Rational, b_max: Rational, w_min: Rational, w_max: Rational) -> Self {
        Viewport {
            b_min,
            b_max,
            w_min,
            w_max,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.b_min >= self.b_max || self.w_min >= self.w_max
    }

    /// Integer box containing every point of the scene and the vertex of
    /// `∂U`, padded by one unit.
    pub fn fit(scene: &[SceneItem]) -> Self {
        let mut bs = vec![0.0f64];
        let mut ws = vec![0.0f64];
        for item in scene {
            match item {
                SceneItem::Point { b, w, .. } => {
                    bs.push(b.to_f64());
                    ws.push(w.to_f64());
                }
                SceneItem::Label { b, w, .. } => {
                    bs.push(crate::numeric::to_f64(b));
                    ws.push(crate::numeric::to_f64(w));
                }
                _ => {}
            }
        }
        let lo = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min).floor() as i64 - 1;
        let hi = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max).ceil() as i64 + 1;
        Viewport::new(int(lo(&bs)), int(hi(&bs)), int(lo(&ws)), int(hi(&ws)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
#[allow(clippy::large_enum_variant)]
pub enum SceneItem {
    Parabola,
    Line(WallLine),
    Vertical {
        #[serde(with = "serde_rational")]
        b: Rational,
    },
    Point {
        b: Surd,
        w: Surd,
        label: Option<String>,
    },
    Label {
        #[serde(with = "serde_rational")]
        b: Rational,
        #[serde(with = "serde_rational")]
        w: Rational,
        text: String,
    },
}

impl SceneItem {
    pub fn point(b: Rational, w: Rational, label: Option<String>) -> Self {
        SceneItem::Point {
            b: Surd::from_rational(b),
            w: Surd::from_rational(w),
            label,
        }
    }
}

fn d(r: &Rational) -> String {
    to_decimal(r, PRECISION)
}

fn y(w: &Rational) -> String {
    to_decimal(&-w, PRECISION)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// The `b`-range of `l` inside the viewport, if it has positive length.
fn clip(l: &WallLine, v: &Viewport) -> Option<(Rational, Rational)> {
    let (mut lo, mut hi) = (v.b_min.clone(), v.b_max.clone());
    if l.slope.is_zero() {
        if l.intercept < v.w_min || l.intercept > v.w_max {
            return None;
        }
    } else {
        let p = (&v.w_min - &l.intercept) / &l.slope;
        let q = (&v.w_max - &l.intercept) / &l.slope;
        let (p, q) = if p <= q { (p, q) } else { (q, p) };
        lo = lo.max(p);
        hi = hi.min(q);
    }
    (lo < hi).then_some((lo, hi))
}

pub fn render_bw_plane(scene: &[SceneItem], v: &Viewport) -> Result<String> {
    if v.is_empty() {
        return Err(Error::EmptyViewport);
    }
    let width = &v.b_max - &v.b_min;
    let height = &v.w_max - &v.w_min;
    let unit = std::cmp::max(width.clone(), height.clone()) / int(150);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="600" height="600" preserveAspectRatio="xMidYMid meet">"#,
        d(&v.b_min),
        y(&v.w_max),
        d(&width),
        d(&height)
    );
    let _ = writeln!(
        s,
        r#"<g fill="none" stroke="black" vector-effect="non-scaling-stroke" stroke-width="1">"#
    );

    // axes
    let zero = Rational::zero();
    if v.b_min <= zero && zero <= v.b_max {
        let _ = writeln!(
            s,
            r#"<path class="axis" stroke="gray" vector-effect="non-scaling-stroke" d="M {} {} L {} {}"/>"#,
            d(&zero),
            y(&v.w_min),
            d(&zero),
            y(&v.w_max)
        );
    }
    if v.w_min <= zero && zero <= v.w_max {
        let _ = writeln!(
            s,
            r#"<path class="axis" stroke="gray" vector-effect="non-scaling-stroke" d="M {} {} L {} {}"/>"#,
            d(&v.b_min),
            y(&zero),
            d(&v.b_max),
            y(&zero)
        );
    }

    for item in scene {
        match item {
            SceneItem::Parabola => {
                let step = &width / int(PARABOLA_SAMPLES);
                let mut path = String::new();
                for i in 0..=PARABOLA_SAMPLES {
                    let b = &v.b_min + &step * int(i);
                    let w = &b * &b / int(2);
                    let cmd = if i == 0 { "M" } else { " L" };
                    let _ = write!(path, "{} {} {}", cmd, d(&b), y(&w));
                }
                let _ = writeln!(
                    s,
                    r#"<path class="parabola" stroke="blue" vector-effect="non-scaling-stroke" d="{path}"/>"#
                );
            }
            SceneItem::Line(l) => {
                if let Some((lo, hi)) = clip(l, v) {
                    let _ = writeln!(
                        s,
                        r#"<line class="wall" stroke="red" vector-effect="non-scaling-stroke" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        d(&lo),
                        y(&l.w_at(&lo)),
                        d(&hi),
                        y(&l.w_at(&hi))
                    );
                }
            }
            SceneItem::Vertical { b } => {
                if &v.b_min <= b && b <= &v.b_max {
                    let _ = writeln!(
                        s,
                        r#"<path class="guide" stroke="black" stroke-dasharray="4 4" vector-effect="non-scaling-stroke" d="M {} {} L {} {}"/>"#,
                        d(b),
                        y(&v.w_min),
                        d(b),
                        y(&v.w_max)
                    );
                }
            }
            SceneItem::Point { b, w, label } => {
                let _ = writeln!(
                    s,
                    r#"<circle class="point" fill="black" stroke="none" cx="{}" cy="{}" r="{}"/>"#,
                    b.to_decimal(PRECISION),
                    (-w).to_decimal(PRECISION),
                    d(&unit)
                );
                if let Some(text) = label {
                    let tb = b.to_decimal(PRECISION);
                    let tw = (-w).add_rational(&(-&unit * int(2))).to_decimal(PRECISION);
                    text_element(&mut s, &tb, &tw, &unit, text);
                }
            }
            SceneItem::Label { b, w, text } => {
                text_element(&mut s, &d(b), &y(w), &unit, text);
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn text_element(s: &mut String, x: &str, y: &str, unit: &Rational, text: &str) {
    let size = unit * int(4);
    let _ = writeln!(
        s,
        r#"<text class="label" fill="black" stroke="none" x="{}" y="{}" font-size="{}" font-family="sans-serif">{}</text>"#,
        x,
        y,
        d(&size),
        escape(text)
    );
}
