//! Multiplicities relating D4-D2-D0 counts to curve counts, Toda's cone sum
//! and the twist-invariant normalisation `m̂`.
//!
//! Invariants `I`, `P` are inputs. Integers that the formulas produce are
//! carried as `i128` with checked arithmetic.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charges::{CurveCharge, ThreefoldData};
use crate::numeric::{as_integer, fmt_rational, int, Rational};
use crate::{Error, Result};

/// Integer invariants keyed by `(β.H, m)`, zero when absent.
///
/// A threshold `(degree, below)` declares every charge `< below` in that
/// degree to vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTable {
    values: BTreeMap<(i64, i64), i128>,
    thresholds: BTreeMap<i64, i64>,
}

impl InvariantTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `{(0, 0) ↦ 1}`.
    pub fn origin() -> Self {
        let mut t = Self::new();
        t.values.insert((0, 0), 1);
        t
    }

    pub fn insert(&mut self, degree: i64, charge: i64, value: i128) -> Result<()> {
        if value != 0 && self.below_threshold(degree, charge) {
            return Err(Error::InconsistentTable(format!(
                "nonzero value at degree {degree}, charge {charge} below the declared threshold"
            )));
        }
        if value == 0 {
            self.values.remove(&(degree, charge));
        } else {
            self.values.insert((degree, charge), value);
        }
        Ok(())
    }

    pub fn set_threshold(&mut self, degree: i64, below: i64) -> Result<()> {
        if let Some(((_, k), _)) = self
            .values
            .range((degree, i64::MIN)..(degree, below))
            .next()
        {
            return Err(Error::InconsistentTable(format!(
                "threshold {below} at degree {degree} conflicts with the entry at charge {k}"
            )));
        }
        self.thresholds.insert(degree, below);
        Ok(())
    }

    fn below_threshold(&self, degree: i64, charge: i64) -> bool {
        self.thresholds
            .get(&degree)
            .is_some_and(|below| charge < *below)
    }

    pub fn get(&self, degree: i64, charge: i64) -> i128 {
        self.values.get(&(degree, charge)).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), i128)> + '_ {
        self.values.iter().map(|(k, v)| (*k, *v))
    }

    pub fn thresholds(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.thresholds.iter().map(|(k, v)| (*k, *v))
    }
}

fn small_int(r: &Rational, what: &str) -> Result<i64> {
    as_integer(r)
        .and_then(|i| i.to_i64())
        .ok_or_else(|| Error::NonIntegral(what.to_string()))
}

/// `χ(v(n)) = n³H³/6 - n·β.H - m + n·c₂.H/12`.
pub fn chi_vn(cc: &CurveCharge, x: &ThreefoldData) -> Rational {
    let n = cc.n_q();
    &n * &n * &n * x.h3_q() / int(6) - &n * &cc.beta_h - &cc.m + &n * x.c2h_q() / int(12)
}

fn chi_vn_integral(cc: &CurveCharge, x: &ThreefoldData) -> Result<i128> {
    cc.check_n()?;
    let chi = chi_vn(cc, x);
    as_integer(&chi)
        .ok_or_else(|| Error::NonIntegerChi(fmt_rational(&chi)))?
        .to_i128()
        .ok_or(Error::Overflow("chi"))
}

/// `(-1)^{k-1}·k`.
fn signed(k: i128) -> i128 {
    if k.rem_euclid(2) == 1 {
        k
    } else {
        -k
    }
}

/// `e_n = (-1)^{χ(v(n))-1}·χ(v(n))·|H²(X,ℤ)_tors|²`.
pub fn e_n(cc: &CurveCharge, x: &ThreefoldData) -> Result<i128> {
    let chi = chi_vn_integral(cc, x)?;
    let t = i128::from(x.n_tors);
    signed(chi)
        .checked_mul(t)
        .and_then(|v| v.checked_mul(t))
        .ok_or(Error::Overflow("e_n"))
}

/// `Ω_{v_n} = e_n · I_{m,β}`.
pub fn dt_from_mnop(i_value: i128, cc: &CurveCharge, x: &ThreefoldData) -> Result<i128> {
    e_n(cc, x)?
        .checked_mul(i_value)
        .ok_or(Error::Overflow("dt_from_mnop"))
}

/// One nonzero summand of [`toda_sum`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TodaTerm {
    pub b1: i64,
    pub m1: i64,
    pub b2: i64,
    pub m2: i64,
    /// `(-1)^{χ - n·β₁.H - 1}(χ - n·β₁.H)`.
    pub multiplicity: i128,
    pub i_value: i128,
    pub p_value: i128,
    pub contribution: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TodaResult {
    pub value: i128,
    pub terms: Vec<TodaTerm>,
}

/// `M = (6β.H + 1)·n`; the cone is `0 ≤ β_i.H ≤ 6β.H`, `|m_i| < M`.
pub fn cone_bound(beta_h: i64, n: u64) -> i64 {
    (6 * beta_h + 1) * n as i64
}

/// Number of `((β₁, m₁), (β₂, m₂))` in the cone satisfying both index
/// constraints.
pub fn cone_size(cc: &CurveCharge) -> Result<u64> {
    let (bh, m) = (small_int(&cc.beta_h, "beta.H")?, small_int(&cc.m, "m")?);
    let n = cc.n as i64;
    let big = cone_bound(bh, cc.n);
    let mut count = 0u64;
    for b1 in 0..=(6 * bh).max(-1) {
        let b2 = b1 + bh;
        if !(0..=6 * bh).contains(&b2) {
            continue;
        }
        for m1 in (1 - big)..big {
            let m2 = m1 - n * b1 - m;
            if m2.abs() < big {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Toda's sum
/// `Σ (-1)^{χ - nβ₁.H - 1}(χ - nβ₁.H)·I[β₂, m₂]·P[β₁, -m₁]`
/// over the cone with `β₂ - β₁ = β` and `m₁ - m₂ - nβ₁.H = m`.
pub fn toda_sum(
    cc: &CurveCharge,
    x: &ThreefoldData,
    i_tab: &InvariantTable,
    p_tab: &InvariantTable,
) -> Result<TodaResult> {
    if !x.pic_rank1 {
        return Err(Error::NotPicRank1);
    }
    let chi = chi_vn_integral(cc, x)?;
    let bh = small_int(&cc.beta_h, "beta.H")?;
    let m = small_int(&cc.m, "m")?;
    let n = cc.n as i64;
    let big = cone_bound(bh, cc.n);
    let top = 6 * bh;

    let per_degree: Vec<Result<Vec<TodaTerm>>> = (0..=top.max(-1))
        .into_par_iter()
        .map(|b1| -> Result<Vec<TodaTerm>> {
            let mut out = Vec::new();
            let b2 = b1 + bh;
            if !(0..=top).contains(&b2) {
                return Ok(out);
            }
            let k = i128::from(n)
                .checked_mul(i128::from(b1))
                .and_then(|nb| chi.checked_sub(nb))
                .ok_or(Error::Overflow("toda multiplicity"))?;
            let mult = signed(k);
            for m1 in (1 - big)..big {
                let m2 = m1 - n * b1 - m;
                if m2.abs() >= big {
                    continue;
                }
                let p = p_tab.get(b1, -m1);
                if p == 0 {
                    continue;
                }
                let i = i_tab.get(b2, m2);
                if i == 0 {
                    continue;
                }
                let contribution = mult
                    .checked_mul(i)
                    .and_then(|v| v.checked_mul(p))
                    .ok_or(Error::Overflow("toda term"))?;
                out.push(TodaTerm {
                    b1,
                    m1,
                    b2,
                    m2,
                    multiplicity: mult,
                    i_value: i,
                    p_value: p,
                    contribution,
                });
            }
            Ok(out)
        })
        .collect();

    let mut terms = Vec::new();
    for chunk in per_degree {
        terms.extend(chunk?);
    }
    let value = terms
        .iter()
        .try_fold(0i128, |acc, t| acc.checked_add(t.contribution))
        .ok_or(Error::Overflow("toda sum"))?;
    Ok(TodaResult { value, terms })
}

/// Toda's sum next to `e_n·I` read at `(β.H, m)` and at `(β.H, -m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TodaComparison {
    pub toda: TodaResult,
    pub dt_with_m: i128,
    pub dt_with_minus_m: i128,
}

pub fn toda_comparison(
    cc: &CurveCharge,
    x: &ThreefoldData,
    i_tab: &InvariantTable,
    p_tab: &InvariantTable,
) -> Result<TodaComparison> {
    let toda = toda_sum(cc, x, i_tab, p_tab)?;
    let bh = small_int(&cc.beta_h, "beta.H")?;
    let m = small_int(&cc.m, "m")?;
    Ok(TodaComparison {
        toda,
        dt_with_m: dt_from_mnop(i_tab.get(bh, m), cc, x)?,
        dt_with_minus_m: dt_from_mnop(i_tab.get(bh, -m), cc, x)?,
    })
}

/// `m̂ = m + ½n·β.H - n·c₂.H/24 - n³H³/24 + ½Q`.
pub fn mhat(cc: &CurveCharge, x: &ThreefoldData) -> Result<Rational> {
    let q = cc.resolve_q(x)?;
    let n = cc.n_q();
    let half = Rational::one() / int(2);
    Ok(&cc.m + &half * &n * &cc.beta_h
        - &n * x.c2h_q() / int(24)
        - &n * &n * &n * x.h3_q() / int(24)
        + &half * q)
}

/// The charge of `v_n ⊗ O(a)`, read as a curve charge with the same `n`.
pub fn twist_curve_charge(cc: &CurveCharge, a: i64, x: &ThreefoldData) -> CurveCharge {
    let a = int(a);
    let n = cc.n_q();
    let h3 = x.h3_q();
    let bh = &cc.beta_h;
    CurveCharge {
        beta_h: bh - &a * &n * &h3,
        m: &cc.m + &a * bh + &a * &n * &n * &h3 / int(2) - &a * &a * &n * &h3 / int(2),
        q: cc
            .q
            .as_ref()
            .map(|q| q - int(2) * &a * bh + &a * &a * &n * &h3),
        n: cc.n,
    }
}

/// Expected depth of mock modularity for divisors in `|O(n)|`: at most `n`
/// pieces, so depth `n - 1`.
pub fn mock_depth(n: u64, x: &ThreefoldData) -> Result<u64> {
    if !x.pic_rank1 {
        return Err(Error::NotPicRank1);
    }
    if n == 0 {
        return Err(Error::InvalidN);
    }
    Ok(n - 1)
}
