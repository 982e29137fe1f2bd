//! JSON forms of surfaces, slit lists and polygons, and a small SVG writer.
//!
//! A surface file stores one basis block and bare coordinate lists:
//! `{ "basis": [..], "hints": [..], "polygons": [{"vertices": [[x, y], ..],
//! "slits": [[p, q], ..]}], "pairings": [[poly, edge, poly, edge], ..],
//! "provenance": ".." }`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exactnum::json::{
    coords_from_json, coords_to_json, rational_from_json, rational_to_json, vec2_from_json, vec2_to_json, BasisJson,
    CoordsJson, RationalJson,
};
use crate::exactnum::RealBasis;
use crate::flow::{Section, TrajectorySegment};

use super::{EdgeRef, Polygon, RationalPolygon, SlitPair, SurfaceError, TranslationSurface};

type PointJson = [CoordsJson; 2];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PolygonJson {
    pub vertices: Vec<PointJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub slits: Vec<[PointJson; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SurfaceJson {
    #[serde(flatten)]
    pub basis: BasisJson,
    pub polygons: Vec<PolygonJson>,
    pub pairings: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl SurfaceJson {
    pub fn from_surface(s: &TranslationSurface) -> Self {
        SurfaceJson {
            basis: BasisJson::from_basis(s.basis()),
            polygons: s
                .polygons()
                .iter()
                .map(|p| PolygonJson {
                    vertices: p.vertices().iter().map(vec2_to_json).collect(),
                    slits: p.slits().iter().map(|(a, b)| [vec2_to_json(a), vec2_to_json(b)]).collect(),
                })
                .collect(),
            pairings: s.pairings().iter().map(|(a, b)| [a.poly, a.edge, b.poly, b.edge]).collect(),
            provenance: s.provenance().map(str::to_owned),
        }
    }

    pub fn to_surface(&self) -> Result<TranslationSurface, SurfaceError> {
        let basis = self.basis.to_basis()?;
        let polygons = self
            .polygons
            .iter()
            .map(|p| {
                let vs = p.vertices.iter().map(|v| vec2_from_json(&basis, v)).collect::<Result<_, _>>()?;
                let ss = p
                    .slits
                    .iter()
                    .map(|[a, b]| Ok((vec2_from_json(&basis, a)?, vec2_from_json(&basis, b)?)))
                    .collect::<Result<_, crate::exactnum::ExactError>>()?;
                Polygon::new(vs, ss)
            })
            .collect::<Result<Vec<_>, SurfaceError>>()?;
        let pairings = self
            .pairings
            .iter()
            .map(|&[a, e, b, f]| (EdgeRef::new(a, e), EdgeRef::new(b, f)))
            .collect();
        let s = TranslationSurface::new(polygons, pairings)?;
        Ok(match &self.provenance {
            Some(p) => s.with_provenance(p.clone()),
            None => s,
        })
    }
}

pub fn surface_to_json(s: &TranslationSurface) -> String {
    serde_json::to_string_pretty(&SurfaceJson::from_surface(s)).expect("surface JSON serializes")
}

pub fn surface_from_json(text: &str) -> Result<TranslationSurface, SurfaceError> {
    serde_json::from_str::<SurfaceJson>(text)
        .map_err(|e| SurfaceError::Format(e.to_string()))?
        .to_surface()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SlitJson {
    pub a: PointJson,
    pub b: PointJson,
    pub v: PointJson,
}

/// `{ "basis": .., "hints": .., "slits": [{"a": [x, y], "b": [x, y], "v": [x, y]}], "provenance": .. }`
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SlitsJson {
    #[serde(flatten)]
    pub basis: BasisJson,
    pub slits: Vec<SlitJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl SlitsJson {
    pub fn from_pairs(basis: &RealBasis, pairs: &[SlitPair], provenance: Option<String>) -> Self {
        SlitsJson {
            basis: BasisJson::from_basis(basis),
            slits: pairs
                .iter()
                .map(|p| SlitJson {
                    a: vec2_to_json(&p.anchor_a),
                    b: vec2_to_json(&p.anchor_b),
                    v: vec2_to_json(&p.vector),
                })
                .collect(),
            provenance,
        }
    }

    pub fn to_pairs(&self) -> Result<Vec<SlitPair>, SurfaceError> {
        let basis = self.basis.to_basis()?;
        self.slits
            .iter()
            .map(|s| {
                Ok(SlitPair {
                    anchor_a: vec2_from_json(&basis, &s.a)?,
                    anchor_b: vec2_from_json(&basis, &s.b)?,
                    vector: vec2_from_json(&basis, &s.v)?,
                })
            })
            .collect()
    }
}

pub fn slits_from_json(text: &str) -> Result<SlitsJson, SurfaceError> {
    serde_json::from_str(text).map_err(|e| SurfaceError::Format(e.to_string()))
}

/// Interior angles in units of `pi` and side lengths over one basis:
/// `{ "basis": .., "hints": .., "angles": [["1","2"], ..], "lengths": [[["1","1"]], ..] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RationalPolygonJson {
    #[serde(flatten)]
    pub basis: BasisJson,
    pub angles: Vec<RationalJson>,
    pub lengths: Vec<CoordsJson>,
}

impl RationalPolygonJson {
    pub fn from_polygon(p: &RationalPolygon) -> Self {
        let basis = p.lengths()[0].basis();
        RationalPolygonJson {
            basis: BasisJson::from_basis(basis),
            angles: p.angles().iter().map(rational_to_json).collect(),
            lengths: p.lengths().iter().map(coords_to_json).collect(),
        }
    }

    pub fn to_polygon(&self) -> Result<RationalPolygon, SurfaceError> {
        let basis = self.basis.to_basis()?;
        let angles = self.angles.iter().map(rational_from_json).collect::<Result<_, _>>()?;
        let lengths = self.lengths.iter().map(|c| coords_from_json(&basis, c)).collect::<Result<_, _>>()?;
        RationalPolygon::new(angles, lengths)
    }
}

pub fn polygon_from_json(text: &str) -> Result<RationalPolygon, SurfaceError> {
    serde_json::from_str::<RationalPolygonJson>(text)
        .map_err(|e| SurfaceError::Format(e.to_string()))?
        .to_polygon()
}

/// Extra layers for [`surface_svg`].
#[derive(Default)]
pub struct SvgLayers<'a> {
    pub section: Option<&'a Section>,
    pub trajectory: Option<&'a [TrajectorySegment]>,
}

fn hue(i: usize, n: usize) -> String {
    // spread hues by the golden angle so neighbours differ
    let h = (i as f64 * 137.507_764) % 360.0;
    let l = if n > 12 && i % 2 == 1 { 35 } else { 45 };
    format!("hsl({h:.1},70%,{l}%)")
}

/// Polygons with paired edges in matching colours, cone points as dots.
pub fn surface_svg(s: &TranslationSurface, layers: &SvgLayers<'_>) -> String {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in s.polygons() {
        for i in 0..p.edge_count() {
            let q = p.point_f(i);
            for k in 0..2 {
                lo[k] = lo[k].min(q[k]);
                hi[k] = hi[k].max(q[k]);
            }
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    let scale = 600.0 / span;
    let pad = 20.0;
    let w = (hi[0] - lo[0]) * scale + 2.0 * pad;
    let h = (hi[1] - lo[1]) * scale + 2.0 * pad;
    let tx = |q: [f64; 2]| (pad + (q[0] - lo[0]) * scale, pad + (hi[1] - q[1]) * scale);
    let stroke = (span * scale / 300.0).clamp(1.0, 3.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    if let Some(p) = s.provenance() {
        let _ = writeln!(out, "<title>{}</title>", p.replace('&', "&amp;").replace('<', "&lt;"));
    }
    for p in s.polygons() {
        let pts: Vec<String> = p
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = tx(v.to_f64());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(out, r##"<polygon points="{}" fill="#f4f4f0" stroke="none"/>"##, pts.join(" "));
    }
    let n = s.pairings().len();
    for (i, (a, b)) in s.pairings().iter().enumerate() {
        let colour = hue(i, n);
        for e in [a, b] {
            let poly = &s.polygons()[e.poly];
            let (p, q) = poly.edge_f(e.edge);
            let (x1, y1) = tx(p);
            let (x2, y2) = tx(q);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{colour}" stroke-width="{stroke:.2}"/>"#
            );
        }
    }
    if let Some(section) = layers.section {
        for piece in section.pieces() {
            let (x1, y1) = tx(piece.start.to_f64());
            let (x2, y2) = tx(piece.end.to_f64());
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="black" stroke-width="{:.2}" stroke-dasharray="6 4"/>"#,
                stroke * 1.5
            );
        }
    }
    if let Some(traj) = layers.trajectory {
        let mut d = String::new();
        for seg in traj {
            let (x1, y1) = tx(seg.from);
            let (x2, y2) = tx(seg.to);
            let _ = write!(d, "M{x1:.2},{y1:.2}L{x2:.2},{y2:.2}");
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="black" stroke-opacity="0.6" stroke-width="{:.2}"/>"#,
            stroke * 0.5
        );
    }
    for (ci, class) in s.vertex_classes().iter().enumerate() {
        if !class.is_cone_point() {
            continue;
        }
        for c in &class.corners {
            let (x, y) = tx(s.polygons()[c.poly].point_f(c.point));
            let _ = writeln!(
                out,
                r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="{}"><title>cone point {ci}, angle {}pi</title></circle>"#,
                stroke * 2.5,
                hue(ci + 7, n),
                class.angle_over_pi()
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{FieldElement, Vec2};
    use crate::surface::{build_hv_surface, unfold};

    #[test]
    fn surface_json_round_trip() {
        let b = RealBasis::new([("beta", 0.4142135623730951)]).unwrap();
        let one = FieldElement::from_int(&b, 1);
        let s = build_hv_surface(&one, &(&one + &FieldElement::named(&b, "beta").unwrap())).unwrap();
        let text = surface_to_json(&s);
        let back = surface_from_json(&text).unwrap();
        assert_eq!(surface_to_json(&back), text);
        assert_eq!(back.genus().unwrap(), 2);
    }

    #[test]
    fn slitted_surface_round_trip_keeps_slits() {
        let b = RealBasis::rational();
        let pair = SlitPair {
            anchor_a: Vec2::from_rationals(&b, crate::exactnum::rat(1, 4), crate::exactnum::rat(1, 4)),
            anchor_b: Vec2::from_rationals(&b, crate::exactnum::rat(1, 4), crate::exactnum::rat(3, 4)),
            vector: Vec2::from_rationals(&b, crate::exactnum::rat(1, 2), crate::exactnum::rat(0, 1)),
        };
        let t = crate::surface::build_slitted_torus(&[pair.clone()]).unwrap();
        let back = surface_from_json(&surface_to_json(&t.surface)).unwrap();
        assert_eq!(back.polygons()[0].slits().len(), 2);
        let js = SlitsJson::from_pairs(&b, &[pair.clone()], None);
        let text = serde_json::to_string(&js).unwrap();
        assert_eq!(slits_from_json(&text).unwrap().to_pairs().unwrap(), vec![pair]);
    }

    #[test]
    fn polygon_json_round_trip() {
        let text = r#"{"basis":["1"],"hints":[1.0],"angles":[["1","3"],["1","3"],["1","3"]],"lengths":[[["1","1"]],[["1","1"]],[["1","1"]]]}"#;
        let p = polygon_from_json(text).unwrap();
        assert_eq!(unfold(&p).unwrap().polygons().len(), 6);
        let again = serde_json::to_string(&RationalPolygonJson::from_polygon(&p)).unwrap();
        assert_eq!(again, text);
    }

    #[test]
    fn malformed_input_is_a_format_error() {
        assert!(matches!(surface_from_json("{"), Err(SurfaceError::Format(_))));
    }

    #[test]
    fn svg_has_one_line_per_edge() {
        let b = RealBasis::rational();
        let s = build_hv_surface(&FieldElement::from_int(&b, 1), &FieldElement::from_int(&b, 2)).unwrap();
        let svg = surface_svg(&s, &SvgLayers::default());
        assert_eq!(svg.matches("<line").count(), 8);
        assert_eq!(svg.matches("<circle").count(), 8);
    }
}
