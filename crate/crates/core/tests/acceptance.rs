//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line; the
//! process exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tiltwall_core::charges::{chi_euler, twist_by_o};
use tiltwall_core::counting::{e_n, mhat, toda_sum, twist_curve_charge, InvariantTable};
use tiltwall_core::modular::{
    assemble_nl_series, component_phases, discriminant, eta_inverse_power, goettsche_series,
    pole_order, s_matrix, t_check, t_phase, unitarity_deviation, DiscriminantGroup, NlTable,
};
use tiltwall_core::numeric::frac_part;
use tiltwall_core::stability::{n_bw, nu_bw, nu_h};
use tiltwall_core::walls::{
    bstar_wstar, first_wall, first_wall_scene, li_region_bound, li_region_contains, min_n_unique,
    render_bw_plane, Viewport,
};
use tiltwall_core::{
    int, rat, Charge, CurveCharge, Rational, SlopeValue, StabilityParam, ThreefoldData,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_rat(r: &mut ChaCha8Rng, span: i64, den: i64) -> Rational {
    rat(r.gen_range(-span..=span), r.gen_range(1..=den))
}

fn quintic() -> ThreefoldData {
    ThreefoldData::quintic()
}

fn c1_wall_geometry() -> Outcome {
    let start = Instant::now();
    let x = ThreefoldData::new(1, 10, 1, 1, true).unwrap();
    let r = first_wall(&CurveCharge::new(int(2), int(3), 10), &x).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.b0 == rat(-26, 5), format!("b0 = {}", r.b0))?;
    ensure(r.w_f == rat(1103, 50), format!("w_f = {}", r.w_f))?;
    ensure(r.w_js == rat(626, 25), format!("w_JS = {}", r.w_js))?;
    let cand = r
        .candidates
        .iter()
        .find(|c| c.c == int(-2))
        .ok_or("candidate c = -2 missing")?;
    let b2 = cand.b2.as_ref().and_then(|s| s.as_rational());
    let b1 = cand.b1.as_ref().and_then(|s| s.as_rational());
    ensure(
        b2 == Some(int(-10)) && b1 == Some(rat(-2, 5)),
        "parabola intersections",
    )?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("exact values reproduced in {elapsed:?}"))
}

fn c2_first_wall_uniqueness() -> Outcome {
    let start = Instant::now();
    let x = quintic();
    let mut worst = 0;
    for bh in 1..=5 {
        for m in -5..=10 {
            let cc = CurveCharge::new(int(bh), int(m), 1);
            let nstar = min_n_unique(&cc, &x, 220)
                .ok_or_else(|| format!("no threshold for beta.H = {bh}, m = {m}"))?;
            ensure(
                nstar <= 200,
                format!("threshold {nstar} > 200 at ({bh}, {m})"),
            )?;
            for n in nstar..nstar + 20 {
                let r = first_wall(&cc.clone().with_n(n), &x).unwrap();
                ensure(
                    r.survivors == vec![int(-bh)],
                    format!("survivors at ({bh}, {m}, n = {n}): {:?}", r.survivors),
                )?;
            }
            worst = worst.max(nstar);
        }
    }
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(120),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!(
        "80 charges, largest threshold n* = {worst}, {elapsed:?}"
    ))
}

fn c3_emptiness() -> Outcome {
    let x = quintic();
    for n in 1..=200 {
        for m in [-3, 0, 4] {
            let r = first_wall(&CurveCharge::new(int(-1), int(m), n), &x).unwrap();
            ensure(
                r.empty_moduli && r.candidates.is_empty(),
                format!("n = {n}"),
            )?;
        }
    }
    Ok("beta.H = -1 empty for n = 1..200".into())
}

fn c4_rescaling() -> Outcome {
    let mut r = rng(4);
    let mut infinite = 0;
    for i in 0..1000 {
        let h3 = r.gen_range(1..=10);
        let x = ThreefoldData::new(h3, 0, 1, 1, true).unwrap();
        let b = rand_rat(&mut r, 20, 7);
        let sigma = rat(r.gen_range(1..=40), r.gen_range(1..=9));
        let rank = rand_rat(&mut r, 4, 3);
        // every fifth sample sits on ch₁^{bH}.H² = 0
        let c1 = if i % 5 == 0 {
            &b * &rank * int(h3)
        } else {
            rand_rat(&mut r, 30, 5)
        };
        let c = Charge::new(rank, c1, rand_rat(&mut r, 30, 6), rand_rat(&mut r, 30, 6));
        let w = &sigma * &sigma / int(6) + &b * &b / int(2);
        let lhs = nu_bw(&c, &StabilityParam::new(b.clone(), w), &x).unwrap();
        let rhs = match n_bw(&c, &b, &sigma, &x).unwrap() {
            SlopeValue::Finite(v) => SlopeValue::Finite(&sigma * v + &b),
            SlopeValue::PlusInfinity => SlopeValue::PlusInfinity,
        };
        if lhs.is_infinite() {
            infinite += 1;
        }
        ensure(lhs == rhs, format!("sample {i}: {lhs} vs {rhs}"))?;
    }
    ensure(infinite > 0, "no +inf samples")?;
    Ok(format!("1000 samples, {infinite} at +inf"))
}

fn c5_rank_zero_constancy() -> Outcome {
    let mut r = rng(5);
    for i in 0..1000 {
        let x = ThreefoldData::new(r.gen_range(1..=10), 0, 1, 1, true).unwrap();
        let c1 = if i % 10 == 0 {
            int(0)
        } else {
            rand_rat(&mut r, 20, 4)
        };
        let c = Charge::new(int(0), c1, rand_rat(&mut r, 20, 6), rand_rat(&mut r, 20, 6));
        let b = rand_rat(&mut r, 15, 8);
        let w = &b * &b / int(2) + rat(r.gen_range(1..=50), r.gen_range(1..=9));
        let p = StabilityParam::new(b, w);
        ensure(
            nu_bw(&c, &p, &x).unwrap() == nu_h(&c).unwrap(),
            format!("sample {i}"),
        )?;
    }
    Ok("1000 rank-zero samples".into())
}

/// `∫ ch(E)·e^{nH}·td(X)` with `td = 1 + c₂/12` on a Picard-rank-one
/// Calabi–Yau threefold, expanded degree by degree.
fn chi_oracle(c: &Charge, n: &Rational, x: &ThreefoldData) -> Rational {
    let h3 = x.h3_q();
    let a = &c.c1h2 / &h3; // ch₁ = a·H
    let deg3 = &c.c3 + n * &c.c2h + n * n / int(2) * &c.c1h2 + n * n * n / int(6) * &c.r * &h3;
    let ch1_twisted_c2 = (&a + n * &c.r) * x.c2h_q();
    deg3 + ch1_twisted_c2 / int(12)
}

fn c6_euler_characteristic() -> Outcome {
    let x = quintic();
    let chi1 = chi_euler(&Charge::line_bundle(&int(1), &x), &x).unwrap();
    ensure(chi1 == int(5), format!("chi(O(1)) = {chi1}"))?;
    let mut r = rng(6);
    for i in 0..100 {
        let h3 = r.gen_range(1..=12);
        let x = ThreefoldData::new(h3, r.gen_range(0..=120), 1, 1, true).unwrap();
        let rank = int(r.gen_range(-3..=3));
        let a = rand_rat(&mut r, 6, 2);
        let c = Charge::new(
            rank.clone(),
            &a * int(h3),
            rand_rat(&mut r, 20, 6),
            rand_rat(&mut r, 20, 6),
        )
        .with_c1c2(&a * x.c2h_q());
        let n = int(r.gen_range(-5..=5));
        let twisted = twist_by_o(&c, &n, &x).with_c1c2((&a + &n * &rank) * x.c2h_q());
        let lib = chi_euler(&twisted, &x).unwrap();
        ensure(lib == chi_oracle(&c, &n, &x), format!("sample {i}"))?;
    }
    Ok("chi(O(1)) = 5; 100 termwise expansions agree".into())
}

fn c7_mhat_invariance() -> Outcome {
    let x1 = ThreefoldData::new(1, 10, 1, 1, true).unwrap();
    let cc = CurveCharge::new(int(3), int(0), 2).with_q(int(0));
    let t = twist_curve_charge(&cc, 1, &x1);
    ensure(
        t.beta_h == int(1) && t.m == int(4) && t.q == Some(int(-4)),
        "worked twist",
    )?;
    let mut r = rng(7);
    for i in 0..500 {
        let x = ThreefoldData::new(r.gen_range(1..=10), r.gen_range(0..=100), 1, 1, true).unwrap();
        let cc = CurveCharge::new(
            int(r.gen_range(-30..=30)),
            int(r.gen_range(-50..=50)),
            r.gen_range(1..=12),
        )
        .with_q(rand_rat(&mut r, 40, 6));
        let a = r.gen_range(-8..=8);
        let before = mhat(&cc, &x).unwrap();
        let after = mhat(&twist_curve_charge(&cc, a, &x), &x).unwrap();
        ensure(before == after, format!("sample {i}: a = {a}"))?;
    }
    Ok("worked case (1, 4, -4); 500 random twists invariant".into())
}

fn partitions_oracle(k_max: usize) -> Vec<i64> {
    let mut p = vec![0i64; k_max + 1];
    p[0] = 1;
    for k in 1..=k_max {
        let mut acc = 0i64;
        let mut j = 1i64;
        loop {
            let g1 = (j * (3 * j - 1) / 2) as usize;
            if g1 > k {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc += sign * p[k - g1];
            let g2 = (j * (3 * j + 1) / 2) as usize;
            if g2 <= k {
                acc += sign * p[k - g2];
            }
            j += 1;
        }
        p[k] = acc;
    }
    p
}

fn convolve(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum())
        .collect()
}

fn c8_eta_goettsche() -> Outcome {
    let p = partitions_oracle(30);
    let s = eta_inverse_power(1, 30);
    for (k, (got, want)) in s.coeffs.iter().zip(&p).enumerate() {
        ensure(*got == int(*want), format!("p({k})"))?;
    }
    let base: Vec<i128> = p[..=10].iter().map(|v| *v as i128).collect();
    let mut acc = base.clone();
    for _ in 1..55 {
        acc = convolve(&acc, &base);
    }
    let s55 = eta_inverse_power(55, 10);
    for (k, (c, want)) in s55.coeffs.iter().zip(&acc).enumerate() {
        let got = c.to_integer().to_i128().ok_or("overflow")?;
        ensure(got == *want, format!("55-colour coefficient {k}"))?;
    }
    let cc = CurveCharge::new(int(0), int(0), 1).with_q(int(0));
    let g = goettsche_series(&cc, &quintic(), &int(0), 4).unwrap();
    ensure(g.offset == rat(-55, 24), "offset")?;
    ensure(g.offset == -pole_order(&cc, &quintic()), "pole order")?;
    Ok("p(0..30), 55-fold convolution to order 10, offset -55/24".into())
}

fn c9_t_covariance() -> Outcome {
    let x = quintic();
    let cc = CurveCharge::new(int(0), int(0), 1).with_q(int(0));
    let g = DiscriminantGroup::for_charge(&cc, &x).unwrap();
    let mut nl = NlTable::new();
    for gamma in g.elements() {
        let bh = g.representative(gamma, &cc.beta_h).unwrap();
        let bhi = bh.to_integer().to_i64().unwrap();
        for l2 in -8i64..8 {
            if (l2 - bhi).rem_euclid(2) == 0 {
                nl.insert(discriminant(&int(5), &int(l2), &bh), gamma, 3 * l2 + 1);
            }
        }
    }
    let comps = assemble_nl_series(&nl, &cc, &x, 8).map_err(|e| e.to_string())?;
    let phases = component_phases(&cc, &x).unwrap();
    for (gamma, (s, phi)) in comps.iter().zip(&phases).enumerate() {
        ensure(
            !s.is_zero() && t_check(s, phi),
            format!("component {gamma}"),
        )?;
    }
    // ℓ² = 1 against n·β.H = 0 violates parity
    let bad = goettsche_series(&cc, &x, &int(5), 6).unwrap();
    ensure(!t_check(&bad, &phases[0]), "parity-violating series passed")?;
    let phi = t_phase(&cc, &x).unwrap();
    ensure(
        phi == frac_part(&rat(65, 24)) && frac_part(&rat(-55, 24)) == phi,
        "-55/24 = 65/24 mod 1",
    )?;
    Ok("5 components pass, parity violation detected, -55/24 = 65/24 (mod 1)".into())
}

fn c10_s_matrix() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=50 {
        worst = worst.max(unitarity_deviation(&s_matrix(
            &DiscriminantGroup::new(n).unwrap(),
        )));
    }
    ensure(worst < 1e-10, format!("deviation {worst:e}"))?;
    let m = s_matrix(&DiscriminantGroup::new(2).unwrap());
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let want = [[h, h], [h, -h]];
    for i in 0..2 {
        for j in 0..2 {
            ensure(
                (m[i][j] - Complex64::new(want[i][j], 0.0)).norm() < 1e-12,
                "N = 2",
            )?;
        }
    }
    Ok(format!("max unitarity deviation {worst:.2e}"))
}

fn c11_toda_reduction() -> Outcome {
    let x = quintic();
    let mut r = rng(11);
    let p = InvariantTable::origin();
    for i in 0..50 {
        let bh = r.gen_range(0..=4i64);
        let m = r.gen_range(-10..=10i64);
        // n large enough that (0, -m) lies in the cone
        let n_min = (m.unsigned_abs() / (6 * bh as u64 + 1)) + 1;
        let n = r.gen_range(n_min..=n_min + 10);
        let cc = CurveCharge::new(int(bh), int(m), n);
        let mut itab = InvariantTable::new();
        for _ in 0..6 {
            let _ = itab.insert(
                r.gen_range(0..=6 * bh),
                r.gen_range(-20..=20),
                r.gen_range(-9..=9),
            );
        }
        let target = r.gen_range(1..=9i128);
        itab.insert(bh, -m, target).unwrap();
        let res = toda_sum(&cc, &x, &itab, &p).map_err(|e| e.to_string())?;
        ensure(
            res.terms.len() == 1,
            format!("sample {i}: {} terms", res.terms.len()),
        )?;
        let t = &res.terms[0];
        let en = e_n(&cc, &x).unwrap();
        let tors2 = i128::from(x.n_tors * x.n_tors);
        ensure(
            t.multiplicity == en / tors2,
            format!("sample {i}: multiplicity"),
        )?;
        ensure(
            res.value == t.multiplicity * target,
            format!("sample {i}: value"),
        )?;
    }
    Ok("50 single-term reductions match e_n".into())
}

fn c12_li_region() -> Outcome {
    let x = quintic();
    let h3 = x.h3_q();
    let mut thresholds = Vec::new();
    for bh in 1..=5i64 {
        for m in -5..=10i64 {
            let mut n0 = None;
            for n in (1..=200u64).rev() {
                let cc = CurveCharge::new(int(bh), int(m), n);
                let r = first_wall(&cc, &x).unwrap();
                let gap = &r.w_f - &r.b0 * &r.b0 / int(2);
                let t = int(bh) / (cc.n_q() * &h3);
                let closed = cc.n_q() * cc.n_q() / int(8)
                    - int(3 * bh) / (int(2) * &h3)
                    - int(3 * m) / (cc.n_q() * &h3)
                    - rat(3, 2) * &t * &t;
                ensure(gap == closed, format!("w_f - b0^2/2 at ({bh}, {m}, {n})"))?;
                if gap > rat(1, 2) {
                    n0 = Some(n);
                } else {
                    break;
                }
            }
            let n0 = n0.ok_or_else(|| format!("no n with gap > 1/2 at ({bh}, {m})"))?;
            for n in n0..=200 {
                let r = first_wall(&CurveCharge::new(int(bh), int(m), n), &x).unwrap();
                let bump = li_region_bound(&r.b0) - &r.b0 * &r.b0 / int(2);
                ensure(bump <= rat(1, 2), "bump exceeds 1/2")?;
                let w = (&r.w_f + li_region_bound(&r.b0)) / int(2);
                ensure(w < r.w_f, "w not below w_f")?;
                ensure(
                    li_region_contains(&StabilityParam::new(r.b0.clone(), w)),
                    format!("(b0, w) outside at ({bh}, {m}, {n})"),
                )?;
            }
            thresholds.push(n0);
        }
        for c in (-2 * bh)..=-1 {
            let p = bstar_wstar(&int(c), &x);
            let bump = rat(1, 2) * (int(1) - int(1) / (int(2) * &h3)) / (int(2) * &h3);
            ensure(
                li_region_bound(&p.b) - &p.b * &p.b / int(2) == bump,
                format!("bump at c = {c}"),
            )?;
            ensure(
                &p.w - &p.b * &p.b / int(2) > bump,
                format!("inequality at c = {c}"),
            )?;
            ensure(
                li_region_contains(&p),
                format!("(b*, w*) outside at c = {c}"),
            )?;
        }
    }
    let max = thresholds.iter().max().copied().unwrap_or(0);
    Ok(format!(
        "(b0, w < w_f) inside for n >= n0 (max n0 = {max}); (b*, w*) inside for all c"
    ))
}

fn c13_svg() -> Outcome {
    let x = ThreefoldData::new(1, 10, 1, 1, true).unwrap();
    let cc = CurveCharge::new(int(2), int(3), 10);
    let r = first_wall(&cc, &x).unwrap();
    let scene = first_wall_scene(&r, &cc, &x);
    let svg = render_bw_plane(&scene, &Viewport::fit(&scene)).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| e.to_string())?;
    ensure(
        doc.root_element().tag_name().name() == "svg",
        "root element",
    )?;
    let lines: Vec<_> = doc
        .descendants()
        .filter(|n| n.tag_name().name() == "line")
        .collect();
    ensure(!lines.is_empty(), "no wall segments")?;
    let target = -26.0 / 5.0;
    for l in &lines {
        let get = |k: &str| -> f64 { l.attribute(k).unwrap().parse().unwrap() };
        let (x1, y1, x2, y2) = (get("x1"), get("y1"), get("x2"), get("y2"));
        // y = -w
        let slope = -(y2 - y1) / (x2 - x1);
        ensure(
            (slope - target).abs() < 1e-5,
            format!("rendered slope {slope}"),
        )?;
    }
    for w in r.survivor_lines(&x) {
        ensure(w.slope == rat(-26, 5), "model slope")?;
    }
    Ok(format!("{} wall segment(s) at slope -26/5", lines.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("wall geometry", c1_wall_geometry),
        ("first-wall uniqueness", c2_first_wall_uniqueness),
        ("emptiness", c3_emptiness),
        ("rescaling identity", c4_rescaling),
        ("rank-zero constancy", c5_rank_zero_constancy),
        ("Euler characteristic", c6_euler_characteristic),
        ("m-hat twist invariance", c7_mhat_invariance),
        ("eta / Goettsche", c8_eta_goettsche),
        ("T-covariance support", c9_t_covariance),
        ("S-matrix", c10_s_matrix),
        ("Toda reduction", c11_toda_reduction),
        ("Li region", c12_li_region),
        ("SVG", c13_svg),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}
