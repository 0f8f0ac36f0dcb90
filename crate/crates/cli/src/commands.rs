//! Subcommand dispatch. Every command returns the text written to stdout.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use tiltwall_core::charges::chi_euler;
use tiltwall_core::counting::{
    chi_vn, dt_from_mnop, e_n, mhat, toda_comparison, twist_curve_charge,
};
use tiltwall_core::modular::{
    assemble_nl_series, c_offset, component_phases, euler_char_divisor, goettsche_series,
    pole_order, s_matrix, t_check, weight, DiscriminantGroup,
};
use tiltwall_core::walls::{
    bg_inequality_check, first_wall_scene, first_wall_with, li_region_bound, li_region_contains,
    min_n_unique_with, parabola_intersections, render_bw_plane, wall_between, FirstWallOptions,
    Viewport,
};
use tiltwall_core::{StabilityParam, Wall};

use crate::config::{load_invariant_table, load_nl_table, RunConfig};
use crate::{output, parse_list, Cli, CliError, Command};

const DEFAULT_ORDER: u64 = 10;
const DEFAULT_N_MAX: u64 = 200;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

/// Config hash, crate version and, when the config names a charge, the
/// first-wall filter transcript.
fn provenance(cfg: Option<&RunConfig>) -> Value {
    let transcript = cfg
        .and_then(|c| {
            let cc = c.charge.as_ref()?;
            first_wall_with(cc, &c.threefold, &wall_options(c, None)).ok()
        })
        .map(|r| {
            r.transcript()
                .into_iter()
                .map(|(name, eliminated)| json!({"filter": name, "eliminated": eliminated}))
                .collect::<Vec<_>>()
        });
    json!({
        "config_sha256": cfg.map(|c| c.sha256.clone()),
        "version": env!("CARGO_PKG_VERSION"),
        "filter_transcript": transcript,
    })
}

fn wall_options(cfg: &RunConfig, denominator: Option<u64>) -> FirstWallOptions {
    FirstWallOptions {
        denominator: denominator.or(cfg.options.denominator).unwrap_or(1),
    }
}

fn check_denominator(k: u64) -> Result<(), CliError> {
    if k == 0 {
        Err(CliError::Config("denominator must be positive".into()))
    } else {
        Ok(())
    }
}

/// Attaches the provenance block to an object, or wraps a bare value.
fn report(command: &str, body: Value, cfg: Option<&RunConfig>, decimal: Option<usize>) -> String {
    let mut obj = match body {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    obj.insert("command".into(), json!(command));
    obj.insert("provenance".into(), provenance(cfg));
    let decimal = decimal.or(cfg.and_then(|c| c.options.precision));
    output::render(&Value::Object(obj), decimal)
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    RunConfig::load(path)
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let dec = cli.decimal;
    match &cli.command {
        Command::FirstWall { cfg, denominator } => {
            let c = load(&cfg.config)?;
            let opts = wall_options(&c, *denominator);
            check_denominator(opts.denominator)?;
            let r = first_wall_with(c.charge()?, &c.threefold, &opts)?;
            Ok(report("first-wall", to_value(&r), Some(&c), dec))
        }
        Command::MinN {
            cfg,
            n_max,
            denominator,
        } => {
            let c = load(&cfg.config)?;
            let opts = wall_options(&c, *denominator);
            check_denominator(opts.denominator)?;
            let n_max = n_max.or(c.options.n_max).unwrap_or(DEFAULT_N_MAX);
            let cc = c.charge()?;
            cc.check_n()?;
            let found = min_n_unique_with(cc, &c.threefold, n_max, &opts);
            let body = json!({
                "min_n": found.map_or(json!("none"), |n| json!(n)),
                "n_max": n_max,
            });
            Ok(report("min-n", body, Some(&c), dec))
        }
        Command::Wall { cfg, u, v } => {
            let c = load(&cfg.config)?;
            let wall = wall_between(u, v, &c.threefold)?;
            let mut body = Map::new();
            body.insert("wall".into(), to_value(&wall));
            if let Wall::Line(l) = &wall {
                let hits = parabola_intersections(l).map(|(b2, b1)| json!({"b1": b1, "b2": b2}));
                body.insert("parabola_intersections".into(), to_value(&hits));
            }
            Ok(report("wall", Value::Object(body), Some(&c), dec))
        }
        Command::BgCheck { cfg, charge, b, w } => {
            let c = load(&cfg.config)?;
            let p = StabilityParam::new(b.clone(), w.clone());
            let holds = bg_inequality_check(charge, &p, &c.threefold)?;
            let body = json!({"point": to_value(&p), "inequality_holds": holds});
            Ok(report("bg-check", body, Some(&c), dec))
        }
        Command::LiRegion { b, w } => {
            let p = StabilityParam::new(b.clone(), w.clone());
            let body = json!({
                "point": to_value(&p),
                "bound": tiltwall_core::numeric::fmt_rational(&li_region_bound(b)),
                "contains": li_region_contains(&p),
            });
            Ok(report("li-region", body, None, dec))
        }
        Command::Chi { cfg, charge } => {
            let c = load(&cfg.config)?;
            let chi = match charge {
                Some(ch) => chi_euler(ch, &c.threefold)?,
                None => chi_vn(c.charge()?, &c.threefold),
            };
            let body = json!({
                "chi": tiltwall_core::numeric::fmt_rational(&chi),
                "integral": chi.is_integer(),
            });
            Ok(report("chi", body, Some(&c), dec))
        }
        Command::En { cfg } => {
            let c = load(&cfg.config)?;
            let v = e_n(c.charge()?, &c.threefold)?;
            Ok(report("en", json!({"e_n": to_value(&v)}), Some(&c), dec))
        }
        Command::Dt { cfg, i_value } => {
            let c = load(&cfg.config)?;
            let v = dt_from_mnop((*i_value).into(), c.charge()?, &c.threefold)?;
            Ok(report("dt", json!({"dt": to_value(&v)}), Some(&c), dec))
        }
        Command::Toda {
            cfg,
            i_table,
            p_table,
        } => {
            let c = load(&cfg.config)?;
            let i = load_invariant_table(i_table)?;
            let p = load_invariant_table(p_table)?;
            let r = toda_comparison(c.charge()?, &c.threefold, &i, &p)?;
            Ok(report("toda", to_value(&r), Some(&c), dec))
        }
        Command::Mhat { cfg } => {
            let c = load(&cfg.config)?;
            let v = mhat(c.charge()?, &c.threefold)?;
            let body = json!({"mhat": tiltwall_core::numeric::fmt_rational(&v)});
            Ok(report("mhat", body, Some(&c), dec))
        }
        Command::Twist { cfg, a } => {
            let c = load(&cfg.config)?;
            let cc = c.charge()?;
            let t = twist_curve_charge(cc, *a, &c.threefold);
            let body = json!({
                "a": a,
                "charge": to_value(&t),
                "mhat_before": mhat(cc, &c.threefold).ok().map(|v| v.to_string()),
                "mhat_after": mhat(&t, &c.threefold).ok().map(|v| v.to_string()),
            });
            Ok(report("twist", body, Some(&c), dec))
        }
        Command::Goettsche { cfg, d, order } => {
            let c = load(&cfg.config)?;
            let cc = c.charge()?;
            let x = &c.threefold;
            let order = order.or(c.options.order).unwrap_or(DEFAULT_ORDER);
            let s = goettsche_series(cc, x, d, order)?;
            let body = json!({
                "series": to_value(&s),
                "c": c_offset(cc, x)?.to_string(),
                "euler_char_divisor": euler_char_divisor(cc, x).to_string(),
                "pole_order": pole_order(cc, x).to_string(),
                "weight": weight(x).to_string(),
            });
            Ok(report("goettsche", body, Some(&c), dec))
        }
        Command::NlSeries {
            cfg,
            nl_table,
            order,
        }
        | Command::TCheck {
            cfg,
            nl_table,
            order,
        } => {
            let c = load(&cfg.config)?;
            let cc = c.charge()?;
            let x = &c.threefold;
            let nl = load_nl_table(nl_table)?;
            let order = order.or(c.options.order).unwrap_or(DEFAULT_ORDER);
            let series = assemble_nl_series(&nl, cc, x, order)?;
            let phases = component_phases(cc, x)?;
            let full = matches!(cli.command, Command::NlSeries { .. });
            let mut all = true;
            let components: Vec<Value> = series
                .iter()
                .zip(&phases)
                .enumerate()
                .map(|(gamma, (s, phi))| {
                    let ok = t_check(s, phi);
                    all &= ok;
                    let mut v = json!({"gamma": gamma, "phase": phi.to_string(), "t_check": ok});
                    if full {
                        v["series"] = to_value(s);
                    }
                    v
                })
                .collect();
            let name = if full { "nl-series" } else { "t-check" };
            let body = json!({
                "components": components,
                "t_check": all,
                "weight": weight(x).to_string(),
            });
            Ok(report(name, body, Some(&c), dec))
        }
        Command::SMatrix { config, modulus } => {
            let c = config.as_deref().map(load).transpose()?;
            let g = match (&c, modulus) {
                (_, Some(n)) => DiscriminantGroup::new(*n)?,
                (Some(c), None) => DiscriminantGroup::for_charge(c.charge()?, &c.threefold)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let m = s_matrix(&g);
            let rows: Vec<Vec<[f64; 2]>> = m
                .iter()
                .map(|row| row.iter().map(|z| [z.re + 0.0, z.im + 0.0]).collect())
                .collect();
            let body = json!({
                "modulus": g.modulus,
                "matrix": rows,
                "unitarity_deviation": tiltwall_core::modular::unitarity_deviation(&m),
            });
            Ok(report("s-matrix", body, c.as_ref(), dec))
        }
        Command::Plot { cfg, out, viewport } => {
            let c = load(&cfg.config)?;
            let cc = c.charge()?;
            let r = first_wall_with(cc, &c.threefold, &wall_options(&c, None))?;
            let scene = first_wall_scene(&r, cc, &c.threefold);
            let vp = match viewport {
                Some(s) => {
                    let v = parse_list(s, 4).map_err(CliError::Config)?;
                    Viewport::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())
                }
                None => Viewport::fit(&scene),
            };
            let svg = render_bw_plane(&scene, &vp)?;
            match out.as_ref().or(c.options.out.as_ref()) {
                None => Ok(svg),
                Some(path) => {
                    std::fs::write(path, &svg)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    let body = json!({
                        "out": path.display().to_string(),
                        "walls": r.survivors.len(),
                        "viewport": to_value(&vp),
                    });
                    Ok(report("plot", body, Some(&c), dec))
                }
            }
        }
    }
}
