//! The three-step construction: a permutation with at least three `sigma`
//! cycles, a surface realizing it as a return map, and the certificate.

use std::path::Path;
use std::sync::Arc;

use serde_json::json;
use veechmix::exactnum::{FieldElement, RealBasis};
use veechmix::flow::{first_return_map, Direction};
use veechmix::iet::{FloatIet, Permutation};
use veechmix::spectral::{mixing_report, Dynamics, Observable, SpecialFlow};
use veechmix::surface::io::{surface_svg, SvgLayers};
use veechmix::surface::{build_hv_surface, fig1_default, fig1_from_json};
use veechmix::weakmix::{check_weak_mixing, veech_obstruction_set};

use super::spectrum::{hv_report, print_hv, print_report, report_json};
use super::surface::summary;
use crate::output::{pretty, read, Ctx};
use crate::{parse, CliError, DemoArgs};

/// Square roots of these weight the perturbed lengths.
const PRIMES: [f64; 8] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0];

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, args: DemoArgs) -> Result<u8, CliError> {
    if args.hv {
        return hv(ctx, basis, &args);
    }
    let perm = Permutation::new(vec![4, 2, 3, 1]).expect("valid permutation");
    let dec = veech_obstruction_set(&perm)?;
    if dec.cycles.len() < 3 {
        return Err(CliError::Internal("the demo permutation has fewer than three cycles".into()));
    }

    let torus = match &args.slits {
        Some(p) => fig1_from_json(&read(p)?)?,
        None => fig1_default()?,
    };
    let up = Direction::vertical(torus.surface.basis());
    let r = first_return_map(&torus.surface, &up, &torus.section)?;
    if r.iet.perm() != &perm {
        return Err(CliError::Data(format!("the surface returns with permutation {}, not {perm}", r.iet.perm())));
    }

    let times = if args.times_equal {
        vec![FieldElement::from_int(r.iet.basis(), 1); r.iet.m()]
    } else {
        r.times.clone()
    };
    let mut verdict = check_weak_mixing(&r.iet, &times)?;
    verdict.return_map = Some(r.clone());

    ctx.log_seed();
    let roof: Vec<f64> = times.iter().map(FieldElement::to_f64).collect();
    // The certificate speaks about almost every length vector. Section
    // lengths with a rational relation (lambda_1 = lambda_4 here) make every
    // orbit periodic, so the numerics run on a fixed generic perturbation.
    let generic = r.iet.lengths_rationally_independent();
    let lengths: Vec<f64> = r
        .iet
        .lengths()
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let w = if generic { 1.0 } else { PRIMES[j % PRIMES.len()].sqrt() };
            l.to_f64() * w
        })
        .collect();
    let flow = SpecialFlow::new(FloatIet::new(lengths.clone(), r.iet.perm().clone()), roof)?;
    let f = Observable::Character { j: 1 };
    let report = mixing_report(Dynamics::Flow { flow: &flow, dt: 1.0 }, &f, &f, args.lags, args.lags, 1, ctx.seed)?;

    let mut v = json!({
        "permutation": {
            "perm": perm.images(),
            "cycles": dec.cycles,
            "b_vectors": dec.b_vectors,
            "r": dec.cycles.len(),
        },
        "surface": summary(&torus.surface)?,
        "times_override": args.times_equal,
        "certificate": verdict.to_json(),
        "spectral": report_json(&report),
        "spectral_lengths": lengths,
        "spectral_lengths_perturbed": !generic,
    });
    if ctx.out_dir.is_some() {
        let files = [
            ("demo-certificate.json", pretty(&v["certificate"])),
            ("demo-mixing.csv", report.to_csv()),
            ("demo-surface.svg", surface_svg(&torus.surface, &SvgLayers { section: Some(&torus.section), trajectory: None })),
        ];
        let mut written = Vec::new();
        for (name, body) in files {
            written.push(ctx.write(Path::new(name), &body)?.display().to_string());
        }
        v["files"] = json!(written);
    }

    if ctx.json {
        print!("{}", pretty(&v));
    } else {
        println!("step 1: permutation {perm}, r = {} cycles {:?}", dec.cycles.len(), dec.cycles);
        for (c, b) in dec.cycles.iter().zip(&dec.b_vectors) {
            println!("  S = {c:?}  b_S = {b:?}");
        }
        println!("step 2: slitted torus, genus {}, vertical return map {}", torus.surface.genus()?, r.iet.perm());
        if args.times_equal {
            println!("  return times replaced by (1,1,1,1)");
        }
        println!("step 3: certificate");
        for line in verdict.to_string().lines() {
            println!("  {line}");
        }
        println!("spectral report (special flow over the return map, f = e(x)):");
        if !generic {
            println!("  the section lengths satisfy a rational relation and every orbit is periodic;");
            println!("  sampling the flow with generically perturbed lengths {lengths:.6?}");
        }
        print_report(&report);
        for f in v["files"].as_array().into_iter().flatten() {
            println!("wrote {}", f.as_str().unwrap_or("?"));
        }
    }
    Ok(0)
}

fn hv(ctx: &Ctx, basis: &Arc<RealBasis>, args: &DemoArgs) -> Result<u8, CliError> {
    let a = &args.hv_args;
    let s = build_hv_surface(&parse::element(&a.a, basis)?, &parse::element(&a.b, basis)?)?;
    let mut v = hv_report(ctx, basis, a)?;
    v["surface"] = summary(&s)?;
    if ctx.json {
        print!("{}", pretty(&v));
    } else {
        println!("L-shaped surface: genus {}, cone points {}", v["surface"]["genus"], v["surface"]["cone_angles_over_pi"]);
        print_hv(&v);
    }
    Ok(0)
}
