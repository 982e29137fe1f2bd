use std::sync::Arc;

use serde_json::{json, Value};
use veechmix::exactnum::RealBasis;
use veechmix::flow::Section;
use veechmix::spectral::hv_classify;
use veechmix::surface::io::{polygon_from_json, surface_svg, surface_to_json, SlitsJson, SurfaceJson, SvgLayers};
use veechmix::surface::{
    build_hv_surface, build_slitted_torus, fig1_default, fig1_from_json, search_fig1, suspend, unfold, RationalPolygon,
    TranslationSurface,
};

use super::{load_elements, load_iet, to_value};
use crate::output::{pretty, read, Ctx};
use crate::{parse, CliError, SurfaceCmd, SurfaceOut};

pub fn summary(s: &TranslationSurface) -> Result<Value, CliError> {
    let cones: Vec<usize> = s.cone_points().iter().map(|c| c.angle_over_pi()).collect();
    Ok(json!({
        "polygons": s.polygons().len(),
        "genus": s.genus()?,
        "cone_angles_over_pi": cones,
        // exact area needs products of side lengths, which may leave the basis
        "area": s.area().map_or_else(|_| format!("{:.12}", s.area_f()), |a| a.to_string()),
        "provenance": s.provenance(),
    }))
}

fn print_summary(v: &Value) {
    println!("polygons: {}", v["polygons"]);
    println!("genus: {}", v["genus"]);
    let cones: Vec<String> = v["cone_angles_over_pi"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|k| format!("{k}pi"))
        .collect();
    println!("cone points: {}", if cones.is_empty() { "none".into() } else { cones.join(", ") });
    println!("area: {}", v["area"].as_str().unwrap_or("?"));
    if let Some(p) = v["provenance"].as_str() {
        println!("provenance: {p}");
    }
}

fn emit(ctx: &Ctx, s: &TranslationSurface, section: Option<&Section>, out: &SurfaceOut, mut extra: Value) -> Result<(), CliError> {
    let mut v = summary(s)?;
    if let (Value::Object(m), Value::Object(e)) = (&mut v, extra.take()) {
        m.extend(e);
    }
    if let Some(p) = &out.out {
        let at = ctx.write(p, &surface_to_json(s))?;
        v["surface_file"] = json!(at.display().to_string());
    }
    if let Some(p) = &out.svg {
        let at = ctx.write(p, &surface_svg(s, &SvgLayers { section, trajectory: None }))?;
        v["svg_file"] = json!(at.display().to_string());
    }
    if ctx.json {
        if out.out.is_none() {
            v["surface"] = to_value(&SurfaceJson::from_surface(s));
        }
        print!("{}", pretty(&v));
    } else {
        print_summary(&v);
        for (k, x) in v.as_object().into_iter().flatten() {
            if !["polygons", "genus", "cone_angles_over_pi", "area", "provenance"].contains(&k.as_str()) {
                println!("{}: {}", k.replace('_', " "), x.as_str().map_or_else(|| x.to_string(), String::from));
            }
        }
    }
    Ok(())
}

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, cmd: SurfaceCmd) -> Result<u8, CliError> {
    match cmd {
        SurfaceCmd::Unfold { polygon, preset, out } => {
            let p = match (polygon, preset.as_deref()) {
                (Some(path), _) => polygon_from_json(&read(&path)?)?,
                (None, Some("square")) => RationalPolygon::from_fractions(&[(1, 2); 4], &[(1, 1); 4])?,
                (None, Some("triangle")) => RationalPolygon::from_fractions(&[(1, 3); 3], &[(1, 1); 3])?,
                _ => return Err(CliError::Usage("give --polygon or --preset".into())),
            };
            let s = unfold(&p)?;
            emit(ctx, &s, None, &out, json!({ "group_order": p.group().order() }))?;
        }
        SurfaceCmd::Suspend { iet, heights, section_out, out } => {
            let t = load_iet(&iet, basis)?;
            let hs = load_elements(&heights, basis)?;
            let mut all = t.lengths().to_vec();
            all.extend(hs);
            let (_, mut all) = veechmix::exactnum::merge_bases(all)?;
            let hs = all.split_off(t.m());
            let t = veechmix::iet::Iet::new(all, t.perm().clone())?;
            let s = suspend(&t, &hs)?;
            let mut extra = json!({});
            if let Some(p) = &section_out {
                extra["section_file"] = json!(ctx.write(p, &pretty(&to_value(&s.section.to_json())))?.display().to_string());
            }
            emit(ctx, &s.surface, Some(&s.section), &out, extra)?;
        }
        SurfaceCmd::Fig1 { preset, slits, search, slits_out, section_out, out } => {
            if let Some(name) = preset.as_deref().filter(|&n| n != "fig1-default") {
                return Err(CliError::Usage(format!("unknown preset {name:?}; the only preset is fig1-default")));
            }
            let (t, slit_json) = match (slits, search) {
                (Some(path), _) => {
                    let text = read(&path)?;
                    let t = fig1_from_json(&text)?;
                    let js = SlitsJson::from_pairs(t.surface.basis(), &t.pairs, t.surface.provenance().map(String::from));
                    (t, js)
                }
                (None, Some(seed)) => {
                    let found = search_fig1(seed)?;
                    let js = found.to_json();
                    let t = build_slitted_torus(&found.pairs)?;
                    let t = veechmix::surface::SlittedTorus { surface: t.surface.with_provenance(found.provenance), ..t };
                    (t, js)
                }
                (None, None) => {
                    let t = fig1_default()?;
                    let js = SlitsJson::from_pairs(t.surface.basis(), &t.pairs, t.surface.provenance().map(String::from));
                    (t, js)
                }
            };
            let mut extra = json!({ "slit_pairs": t.pairs.len(), "seam": t.shift.to_string() });
            if let Some(p) = &slits_out {
                extra["slits_file"] = json!(ctx.write(p, &pretty(&to_value(&slit_json)))?.display().to_string());
            }
            if let Some(p) = &section_out {
                extra["section_file"] = json!(ctx.write(p, &pretty(&to_value(&t.section.to_json())))?.display().to_string());
            }
            emit(ctx, &t.surface, Some(&t.section), &out, extra)?;
        }
        SurfaceCmd::Hv { a, b, out } => {
            let (a, b) = (parse::element(&a, basis)?, parse::element(&b, basis)?);
            let class = hv_classify(&a, &b)?;
            let s = build_hv_surface(&a, &b)?;
            emit(ctx, &s, None, &out, json!({ "class": class.to_string() }))?;
        }
    }
    Ok(0)
}
