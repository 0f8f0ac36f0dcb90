//! Formal q-series with rational exponents and the data of the expected
//! modular behaviour of D4-D2-D0 generating series: eta powers, Göttsche
//! series, Noether–Lefschetz assembly over `Γ = ℤ/nH³`, the `T`-phase and
//! the Weil-type `S`-matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charges::{CurveCharge, ThreefoldData};
use crate::numeric::{as_integer, fmt_rational, frac_part, int, serde_rational, Rational};
use crate::{Error, Result};

/// `Σ_{k=0}^{order} coeffs[k]·q^{offset+k}`; terms beyond `order` are
/// unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeries {
    #[serde(with = "serde_rational")]
    pub offset: Rational,
    #[serde(with = "crate::numeric::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
    pub order: u64,
}

impl QSeries {
    pub fn new(offset: Rational, mut coeffs: Vec<Rational>, order: u64) -> Self {
        coeffs.resize(order as usize + 1, Rational::zero());
        QSeries {
            offset,
            coeffs,
            order,
        }
    }

    pub fn zero(order: u64) -> Self {
        Self::new(Rational::zero(), Vec::new(), order)
    }

    /// `q^offset`.
    pub fn monomial(offset: Rational, order: u64) -> Self {
        Self::new(offset, vec![Rational::one()], order)
    }

    pub fn coeff(&self, k: u64) -> Option<&Rational> {
        self.coeffs.get(k as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exponents carrying a nonzero coefficient.
    pub fn support(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| &self.offset + int(k as i64))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QSeries {
            offset: self.offset.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
            order: self.order,
        }
    }

    /// Multiplication by `q^delta`.
    pub fn shift(&self, delta: &Rational) -> Self {
        QSeries {
            offset: &self.offset + delta,
            ..self.clone()
        }
    }

    /// The same series at a smaller order.
    pub fn truncate(&self, order: u64) -> Self {
        let order = order.min(self.order);
        Self::new(
            self.offset.clone(),
            self.coeffs[..=order as usize].to_vec(),
            order,
        )
    }

    fn step_gap(&self, other: &QSeries) -> Result<BigInt> {
        as_integer(&(&other.offset - &self.offset)).ok_or_else(|| {
            Error::IncompatibleOffsets(fmt_rational(&self.offset), fmt_rational(&other.offset))
        })
    }

    /// Sum over the smaller offset, known up to the smaller absolute order.
    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        let gap = self.step_gap(other)?;
        let (lo, hi, s) = if gap.is_negative() {
            (other, self, -gap)
        } else {
            (self, other, gap)
        };
        let s = s.to_u64().ok_or(Error::Overflow("series offset gap"))?;
        let order = lo.order.min(hi.order.saturating_add(s));
        let mut coeffs = lo.coeffs[..=order as usize].to_vec();
        for k in s..=order {
            coeffs[k as usize] += &hi.coeffs[(k - s) as usize];
        }
        Ok(QSeries::new(lo.offset.clone(), coeffs, order))
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = self.order.min(other.order) as usize;
        let mut coeffs = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        QSeries::new(&self.offset + &other.offset, coeffs, order as u64)
    }
}

/// `σ(j)` for `j = 0..=k` (with `σ(0) = 0`).
fn divisor_sums(k: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); k + 1];
    for d in 1..=k {
        for m in (d..=k).step_by(d) {
            s[m] += d;
        }
    }
    s
}

/// `η(q)^e = q^{e/24}∏(1-q^k)^e` for any integer `e`.
pub fn eta_power(e: i64, order: u64) -> QSeries {
    let k_max = order as usize;
    let sigma = divisor_sums(k_max);
    let e_big = BigInt::from(e);
    let mut a: Vec<BigInt> = Vec::with_capacity(k_max + 1);
    a.push(BigInt::one());
    // k·a_k = -e·Σ_{j=1}^k σ(j)·a_{k-j}
    for k in 1..=k_max {
        let mut acc = BigInt::zero();
        for j in 1..=k {
            acc += &sigma[j] * &a[k - j];
        }
        let num = -&e_big * acc;
        let (q, r) = num.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        a.push(q);
    }
    QSeries::new(
        int(e) / int(24),
        a.into_iter().map(Rational::from_integer).collect(),
        order,
    )
}

/// `η^{-e}`: offset `-e/24`, coefficients the `e`-coloured partition numbers.
pub fn eta_inverse_power(e: u64, order: u64) -> QSeries {
    eta_power(-(e as i64), order)
}

fn require_untwisted(x: &ThreefoldData) -> Result<()> {
    if x.n_tors > 1 {
        Err(Error::TorsionUnsupported(x.n_tors))
    } else {
        Ok(())
    }
}

/// `e(D) = n·c₂.H + n³H³` for a smooth `D ∈ |O(n)|`.
pub fn euler_char_divisor(cc: &CurveCharge, x: &ThreefoldData) -> Rational {
    let n = cc.n_q();
    &n * x.c2h_q() + &n * &n * &n * x.h3_q()
}

/// `(n³H³ + n·c₂.H)/24`.
pub fn pole_order(cc: &CurveCharge, x: &ThreefoldData) -> Rational {
    euler_char_divisor(cc, x) / int(24)
}

/// Weight `-b₂/2 - 1` of the expected transformation law.
pub fn weight(x: &ThreefoldData) -> Rational {
    -int(i64::from(x.b2)) / int(2) - int(1)
}

/// `c = n·β.H - (β.H)²/(2nH³) + Q/2`.
pub fn c_offset(cc: &CurveCharge, x: &ThreefoldData) -> Result<Rational> {
    let q = cc.resolve_q(x)?;
    let big_n = cc.n_q() * x.h3_q();
    Ok(cc.n_q() * &cc.beta_h - &cc.beta_h * &cc.beta_h / (int(2) * big_n) + q / int(2))
}

/// `q^{c - d/(2nH³)}·η^{-e(D)}`.
pub fn goettsche_series(
    cc: &CurveCharge,
    x: &ThreefoldData,
    d: &Rational,
    order: u64,
) -> Result<QSeries> {
    require_untwisted(x)?;
    cc.check_n()?;
    let c = c_offset(cc, x)?;
    let e = euler_char_divisor(cc, x);
    let e = as_integer(&e)
        .and_then(|v| v.to_u64())
        .ok_or_else(|| Error::NonIntegral("e(D)".into()))?;
    let big_n = cc.n_q() * x.h3_q();
    Ok(eta_inverse_power(e, order).shift(&(c - d / (int(2) * big_n))))
}

/// `d = h²ℓ² - (h.ℓ)²`.
pub fn discriminant(h2: &Rational, l2: &Rational, hl: &Rational) -> Rational {
    h2 * l2 - hl * hl
}

fn parity_ok(l2: &Rational, nbh: &Rational) -> Result<()> {
    let a = as_integer(l2).ok_or_else(|| Error::NonIntegral("l^2".into()))?;
    let b = as_integer(nbh).ok_or_else(|| Error::NonIntegral("n*beta.H".into()))?;
    if (a - b).is_even() {
        Ok(())
    } else {
        Err(Error::ParityViolation {
            l2: fmt_rational(l2),
            nbh: fmt_rational(nbh),
        })
    }
}

/// `m = k + ½(β.nH - ℓ²)`, after checking `ℓ² ≡ n·β.H (mod 2)`.
pub fn charge_from_nl(
    k: i64,
    cc: &CurveCharge,
    _x: &ThreefoldData,
    l2: &Rational,
) -> Result<Rational> {
    let nbh = cc.n_q() * &cc.beta_h;
    parity_ok(l2, &nbh)?;
    Ok(int(k) + (nbh - l2) / int(2))
}

/// `Γ = ℤ/N` with `N = nH³`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantGroup {
    pub modulus: u64,
}

impl DiscriminantGroup {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidN);
        }
        Ok(DiscriminantGroup { modulus })
    }

    pub fn for_charge(cc: &CurveCharge, x: &ThreefoldData) -> Result<Self> {
        cc.check_n()?;
        if x.h3 <= 0 {
            return Err(Error::InvalidThreefold("H^3 must be positive".into()));
        }
        Self::new(cc.n * x.h3 as u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.modulus
    }

    /// `∫_γ β/(nH) = γ·β.H/N mod 1`.
    pub fn pairing(&self, gamma: u64, beta_h: &Rational) -> Rational {
        frac_part(&(int(gamma as i64) * beta_h / int(self.modulus as i64)))
    }

    /// The representative of `β.H` in the class `γ mod N` nearest above
    /// `base`.
    pub fn representative(&self, gamma: u64, base: &Rational) -> Result<Rational> {
        let b = as_integer(base).ok_or_else(|| Error::NonIntegral("beta.H".into()))?;
        let n = BigInt::from(self.modulus);
        let shift = (BigInt::from(gamma) - &b).mod_floor(&n);
        Ok(Rational::from_integer(b + shift))
    }
}

/// `M[γ, γ'] = exp(-2πi·γγ'/N)/√N`.
pub fn s_matrix(g: &DiscriminantGroup) -> Vec<Vec<Complex64>> {
    let n = g.modulus;
    let norm = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let k = (a * b) % n;
                    let theta = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
                    Complex64::from_polar(norm, theta)
                })
                .collect()
        })
        .collect()
}

/// `max |(M·M^*)_{ij} - δ_{ij}|`.
pub fn unitarity_deviation(m: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (i, ri) in m.iter().enumerate() {
        for (j, rj) in m.iter().enumerate() {
            let dot: Complex64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `φ = n·c₂.H/24 + Q/2 + n·β.H/2 + n³H³/8 mod 1`.
pub fn t_phase(cc: &CurveCharge, x: &ThreefoldData) -> Result<Rational> {
    require_untwisted(x)?;
    let q = cc.resolve_q(x)?;
    let n = cc.n_q();
    let phi = &n * x.c2h_q() / int(24)
        + q / int(2)
        + &n * &cc.beta_h / int(2)
        + &n * &n * &n * x.h3_q() / int(8);
    Ok(frac_part(&phi))
}

/// Every supported exponent is `≡ phi (mod 1)`.
pub fn t_check(s: &QSeries, phi: &Rational) -> bool {
    s.support().iter().all(|e| frac_part(&(e - phi)).is_zero())
}

/// Noether–Lefschetz numbers keyed by `(d, γ)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NlTable {
    entries: BTreeMap<(Rational, u64), i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NlEntry {
    #[serde(with = "serde_rational")]
    pub d: Rational,
    pub gamma: u64,
    pub value: i64,
}

impl NlTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, d: Rational, gamma: u64, value: i64) {
        *self.entries.entry((d, gamma)).or_insert(0) += value;
    }

    pub fn from_entries(entries: impl IntoIterator<Item = NlEntry>) -> Self {
        let mut t = Self::new();
        for e in entries {
            t.insert(e.d, e.gamma, e.value);
        }
        t
    }

    pub fn entries(&self) -> Vec<NlEntry> {
        self.entries
            .iter()
            .map(|((d, g), v)| NlEntry {
                d: d.clone(),
                gamma: *g,
                value: *v,
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The curve charge used for component `γ`: `β.H` moved into the class of
/// `γ`, with `Q` kept when `β.H` is unchanged and derived otherwise.
pub fn component_charge(
    cc: &CurveCharge,
    x: &ThreefoldData,
    g: &DiscriminantGroup,
    gamma: u64,
) -> Result<CurveCharge> {
    let bh = g.representative(gamma, &cc.beta_h)?;
    if bh == cc.beta_h {
        let q = cc.resolve_q(x)?;
        return Ok(cc.clone().with_q(q));
    }
    let q = &bh * &bh / (cc.n_q() * x.h3_q());
    Ok(CurveCharge {
        beta_h: bh,
        m: cc.m.clone(),
        q: Some(q),
        n: cc.n,
    })
}

/// `t_phase` of every component charge, indexed by `γ`.
pub fn component_phases(cc: &CurveCharge, x: &ThreefoldData) -> Result<Vec<Rational>> {
    let g = DiscriminantGroup::for_charge(cc, x)?;
    g.elements()
        .map(|gamma| t_phase(&component_charge(cc, x, &g, gamma)?, x))
        .collect()
}

/// Component `γ` is `q^c·η^{-e(D)}·Σ_d NL[d, γ]·q^{-d/(2nH³)}` at the
/// smallest exponent present, known to `order` steps beyond it.
pub fn assemble_nl_series(
    nl: &NlTable,
    cc: &CurveCharge,
    x: &ThreefoldData,
    order: u64,
) -> Result<Vec<QSeries>> {
    require_untwisted(x)?;
    if !x.pic_rank1 {
        return Err(Error::NotPicRank1);
    }
    let g = DiscriminantGroup::for_charge(cc, x)?;
    let big_n = int(g.modulus as i64);

    let mut by_gamma: BTreeMap<u64, Vec<(Rational, i64)>> = BTreeMap::new();
    for ((d, gamma), v) in &nl.entries {
        if *gamma >= g.modulus {
            return Err(Error::InconsistentCoset {
                d: fmt_rational(d),
                gamma: *gamma,
                modulus: g.modulus,
            });
        }
        by_gamma.entry(*gamma).or_default().push((d.clone(), *v));
    }

    g.elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|gamma| -> Result<QSeries> {
            let Some(entries) = by_gamma.get(&gamma) else {
                return Ok(QSeries::zero(order));
            };
            let ccg = component_charge(cc, x, &g, gamma)?;
            let bh = &ccg.beta_h;
            let mut parts = Vec::with_capacity(entries.len());
            for (d, v) in entries {
                let l2 = (d + bh * bh) / &big_n;
                if !l2.is_integer() {
                    return Err(Error::InconsistentCoset {
                        d: fmt_rational(d),
                        gamma,
                        modulus: g.modulus,
                    });
                }
                parity_ok(&l2, &(ccg.n_q() * bh))?;
                parts.push((d, *v));
            }
            let c = c_offset(&ccg, x)?;
            let eta_off = -euler_char_divisor(&ccg, x) / int(24);
            let offsets: Vec<Rational> = parts
                .iter()
                .map(|(d, _)| &c - *d / (int(2) * &big_n) + &eta_off)
                .collect();
            let base = offsets.iter().min().cloned().unwrap_or_default();
            let mut coeffs = vec![Rational::zero(); order as usize + 1];
            for ((d, v), off) in parts.iter().zip(&offsets) {
                let s = as_integer(&(off - &base))
                    .and_then(|s| s.to_u64())
                    .ok_or_else(|| {
                        Error::IncompatibleOffsets(fmt_rational(off), fmt_rational(&base))
                    })?;
                if s > order {
                    continue;
                }
                let term = goettsche_series(&ccg, x, d, order - s)?;
                for (k, a) in term.coeffs.iter().enumerate() {
                    coeffs[k + s as usize] += a * int(*v);
                }
            }
            Ok(QSeries::new(base, coeffs, order))
        })
        .collect()
}
