use std::sync::Arc;

use serde_json::{json, Value};
use veechmix::exactnum::RealBasis;
use veechmix::iet::FloatIet;
use veechmix::spectral::{
    hv_classify, hv_eigenvalues, mixing_report, verify_hv_eigenfunction, weyl_sum, Dynamics, MixingReport, Observable,
    SpecialFlow, HEURISTIC_NOTE,
};
use veechmix::surface::build_hv_surface;

use super::{direction, direction_from_angle, load_iet, load_iet_with_times};
use crate::output::{cesaro_svg, pretty, Ctx};
use crate::{parse, CliError, Dyn, HvArgs, SpectrumCmd};

fn observable(text: &str) -> Result<Observable, CliError> {
    text.parse().map_err(|e: veechmix::spectral::SpectralError| CliError::Usage(e.to_string()))
}

/// The base map in float form, and the roof when `--times` is given.
fn base(d: &Dyn, basis: &Arc<RealBasis>) -> Result<(FloatIet, Option<Vec<f64>>), CliError> {
    match &d.times {
        Some(t) => {
            let (iet, times) = load_iet_with_times(&d.iet, t, basis)?;
            Ok((iet.to_float(), Some(times.iter().map(|x| x.to_f64()).collect())))
        }
        None => Ok((load_iet(&d.iet, basis)?.to_float(), None)),
    }
}

/// `M(N)` at `N = 1, 10, 100, ..` up to the last lag.
pub fn decades(r: &MixingReport) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut n = 1;
    while n <= r.cesaro.len() {
        out.push((n, r.cesaro_at(n)));
        n *= 10;
    }
    if out.last().map(|&(k, _)| k) != Some(r.cesaro.len()) {
        out.push((r.cesaro.len(), r.cesaro_at(r.cesaro.len())));
    }
    out
}

pub fn report_json(r: &MixingReport) -> Value {
    json!({
        "seed": r.seed,
        "samples": r.sample_count,
        "restarts": r.restarts,
        "lags": r.correlations.len() - 1,
        "mean_f": [r.mean_f.re, r.mean_f.im],
        "mean_g": [r.mean_g.re, r.mean_g.im],
        "cesaro_decades": decades(r).iter().map(|&(n, m)| json!({"n": n, "m": m})).collect::<Vec<_>>(),
        "first_below_third": r.drops_below(3.0),
        "note": r.note,
    })
}

pub fn print_report(r: &MixingReport) {
    println!("seed {}, {} samples x {} restarts", r.seed, r.sample_count, r.restarts);
    for (n, m) in decades(r) {
        println!("  M({n}) = {m:.6}");
    }
    match r.drops_below(3.0) {
        Some(n) => println!("M falls below M(1)/3 at N = {n}"),
        None => println!("M stays above M(1)/3"),
    }
    println!("{}", r.note);
}

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, cmd: SpectrumCmd) -> Result<u8, CliError> {
    match cmd {
        SpectrumCmd::Correlate { dynamics, f, g, lags, samples, restarts, csv, svg } => {
            let (t, roof) = base(&dynamics, basis)?;
            let f = observable(&f)?;
            let g = match g {
                Some(g) => observable(&g)?,
                None => f.clone(),
            };
            ctx.log_seed();
            let flow;
            let dynamic = match roof {
                Some(roof) => {
                    flow = SpecialFlow::new(t, roof)?;
                    Dynamics::Flow { flow: &flow, dt: dynamics.dt }
                }
                None => Dynamics::Map(&t),
            };
            let r = mixing_report(dynamic, &f, &g, lags, samples, restarts, ctx.seed)?;
            let mut v = report_json(&r);
            if let Some(p) = &csv {
                v["csv_file"] = json!(ctx.write(p, &r.to_csv())?.display().to_string());
            }
            if let Some(p) = &svg {
                v["svg_file"] = json!(ctx.write(p, &cesaro_svg(&r.cesaro))?.display().to_string());
            }
            if ctx.json {
                print!("{}", pretty(&v));
            } else {
                print_report(&r);
            }
        }
        SpectrumCmd::Weyl { dynamics, f, alpha_grid, n, samples, csv } => {
            let (t, roof) = base(&dynamics, basis)?;
            let f = observable(&f)?;
            let alphas = parse::grid(&alpha_grid)?;
            ctx.log_seed();
            let mut rows = Vec::new();
            for a in alphas {
                rows.push((a, weyl_sum(&t, &f, a, n, samples, ctx.seed, roof.as_deref())?));
            }
            let mut table = String::from("alpha,weyl\n");
            for (a, w) in &rows {
                table += &format!("{a:.12e},{w:.12e}\n");
            }
            let mut v = json!({
                "seed": ctx.seed,
                "n": n,
                "samples": samples,
                "twisted_by_roof": roof.is_some(),
                "rows": rows.iter().map(|&(a, w)| json!({"alpha": a, "weyl": w})).collect::<Vec<_>>(),
                "note": HEURISTIC_NOTE,
            });
            if let Some(p) = &csv {
                v["csv_file"] = json!(ctx.write(p, &table)?.display().to_string());
            }
            if ctx.json {
                print!("{}", pretty(&v));
            } else {
                print!("{table}");
            }
        }
        SpectrumCmd::Hv(a) => {
            let v = hv_report(ctx, basis, &a)?;
            if ctx.json {
                print!("{}", pretty(&v));
            } else {
                print_hv(&v);
            }
        }
    }
    Ok(0)
}

/// Classification, the table of `alpha_jk` and the eigenfunction residual
/// of each `e(jx + ky)` on the L-shaped surface.
pub fn hv_report(ctx: &Ctx, basis: &Arc<RealBasis>, a: &HvArgs) -> Result<Value, CliError> {
    let (x, y) = (parse::element(&a.a, basis)?, parse::element(&a.b, basis)?);
    let class = hv_classify(&x, &y)?;
    let s = build_hv_surface(&x, &y)?;
    let d = match &a.dir {
        Some(text) => direction(text, basis)?,
        None => direction_from_angle(a.theta)?,
    };
    let theta = d.angle();
    ctx.log_seed();
    let mut rows = Vec::new();
    for ev in hv_eigenvalues(&d, -a.jk..=a.jk, -a.jk..=a.jk) {
        let res = verify_hv_eigenfunction(&s, ev.j, ev.k, theta, a.samples, a.tmax, ctx.seed)?;
        rows.push(json!({
            "j": ev.j,
            "k": ev.k,
            "alpha": ev.alpha,
            "exact": ev.exact.as_ref().map(ToString::to_string),
            "residual": res,
        }));
    }
    Ok(json!({
        "a": x.to_string(),
        "b": y.to_string(),
        "class": class.to_string(),
        "theta": theta,
        "seed": ctx.seed,
        "samples": a.samples,
        "tmax": a.tmax,
        "eigenvalues": rows,
        "note": "residuals certify e(jx + ky) only when the gluing translations are integers, as for a = 1, b = 2",
    }))
}

pub fn print_hv(v: &Value) {
    println!("a = {}, b = {}: {}", v["a"].as_str().unwrap_or("?"), v["b"].as_str().unwrap_or("?"), v["class"].as_str().unwrap_or("?"));
    println!("theta = {:.12}", v["theta"].as_f64().unwrap_or(f64::NAN));
    println!("{:>4} {:>4} {:>18} {:>12}", "j", "k", "alpha_jk", "residual");
    for r in v["eigenvalues"].as_array().into_iter().flatten() {
        println!(
            "{:>4} {:>4} {:>18.12} {:>12.3e}",
            r["j"].as_i64().unwrap_or_default(),
            r["k"].as_i64().unwrap_or_default(),
            r["alpha"].as_f64().unwrap_or(f64::NAN),
            r["residual"].as_f64().unwrap_or(f64::NAN)
        );
    }
    println!("{}", v["note"].as_str().unwrap_or(""));
}
