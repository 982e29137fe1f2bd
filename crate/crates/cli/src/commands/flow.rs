use std::sync::Arc;

use serde_json::{json, Value};
use veechmix::exactnum::RealBasis;
use veechmix::flow::{first_return_map, first_return_map_float, trace, Mode};
use veechmix::iet::IetJson;
use veechmix::surface::io::{surface_svg, SvgLayers};

use super::{direction, load_section, load_surface, to_value};
use crate::output::{pretty, Ctx};
use crate::{parse, CliError, FlowCmd};

pub fn run(ctx: &Ctx, basis: &Arc<RealBasis>, cmd: FlowCmd) -> Result<u8, CliError> {
    match cmd {
        FlowCmd::Trace { surface, dir, start, poly, tmax, svg } => {
            let s = load_surface(&surface)?;
            let d = direction(&dir, basis)?;
            let p0 = parse::vec2(&start, basis)?;
            if !(tmax >= 0.0) {
                return Err(CliError::Usage("--tmax must be non-negative".into()));
            }
            let mode = if ctx.float { Mode::Float } else { Mode::Exact };
            let tr = trace(&s, poly, &p0, &d, tmax, mode)?;
            let crossings: Vec<Value> = tr
                .crossings
                .iter()
                .map(|c| {
                    json!({
                        "time": c.time,
                        "exact_time": c.exact_time.as_ref().map(ToString::to_string),
                        "edge": c.edge.map(|e| [e.poly, e.edge]),
                        "vertex": c.vertex.map(|v| [v.poly, v.point]),
                        "point": c.point,
                        "exact_point": c.exact_point.as_ref().map(ToString::to_string),
                    })
                })
                .collect();
            let mut v = json!({
                "mode": tr.mode.to_string(),
                "time": tr.time,
                "crossings": crossings,
                "end_poly": tr.end_poly,
                "end_point": tr.end_point,
                "end_exact": tr.end_exact.as_ref().map(ToString::to_string),
            });
            if let Some(p) = &svg {
                let layers = SvgLayers { section: None, trajectory: Some(&tr.segments) };
                v["svg_file"] = json!(ctx.write(p, &surface_svg(&s, &layers))?.display().to_string());
            }
            if ctx.json {
                print!("{}", pretty(&v));
            } else {
                println!("mode: {}", tr.mode);
                println!("crossings: {}", tr.crossings.len());
                for c in tr.crossings.iter().take(20) {
                    let at = c.exact_time.as_ref().map_or_else(|| format!("{:.12}", c.time), ToString::to_string);
                    let what = match (c.edge, c.vertex) {
                        (Some(e), _) => format!("edge {} of polygon {}", e.edge, e.poly),
                        (_, Some(k)) => format!("vertex {} of polygon {}", k.point, k.poly),
                        _ => "?".into(),
                    };
                    println!("  t = {at}: {what} at ({:.9}, {:.9})", c.point[0], c.point[1]);
                }
                if tr.crossings.len() > 20 {
                    println!("  ... {} more", tr.crossings.len() - 20);
                }
                let end = tr.end_exact.as_ref().map_or_else(
                    || format!("({:.12}, {:.12})", tr.end_point[0], tr.end_point[1]),
                    ToString::to_string,
                );
                println!("end: polygon {} at {end} after time {}", tr.end_poly, tr.time);
            }
        }
        FlowCmd::ReturnMap { surface, dir, section } => {
            let s = load_surface(&surface)?;
            let d = direction(&dir, basis)?;
            let sec = load_section(&section)?;
            let v = if ctx.float {
                let r = first_return_map_float(&s, d.to_f64(), &sec)?;
                json!({
                    "mode": r.mode.to_string(),
                    "perm": r.iet.perm().images(),
                    "lengths": r.iet.lengths(),
                    "times": r.times,
                })
            } else {
                let r = first_return_map(&s, &d, &sec)?;
                json!({
                    "mode": r.mode.to_string(),
                    "iet": to_value(&IetJson::from_iet(&r.iet)),
                    "times": to_value(&r.times),
                    "lengths_text": r.iet.lengths().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "times_text": r.times.iter().map(ToString::to_string).collect::<Vec<_>>(),
                })
            };
            if ctx.json {
                print!("{}", pretty(&v));
            } else {
                println!("mode: {}", v["mode"].as_str().unwrap_or("?"));
                let perm = v.get("perm").or_else(|| v["iet"].get("perm")).cloned().unwrap_or_default();
                println!("permutation: {perm}");
                let show = |key: &str, alt: &str| -> String {
                    let xs = v.get(key).or_else(|| v.get(alt)).and_then(Value::as_array).cloned().unwrap_or_default();
                    xs.iter().map(|x| x.as_str().map_or_else(|| x.to_string(), String::from)).collect::<Vec<_>>().join(", ")
                };
                println!("lengths: ({})", show("lengths_text", "lengths"));
                println!("return times: ({})", show("times_text", "times"));
            }
        }
    }
    Ok(0)
}
