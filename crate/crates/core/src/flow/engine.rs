use std::collections::HashMap;

use num_traits::FromPrimitive;

use crate::exactnum::{FieldElement, Rational, Vec2};
use crate::surface::{Corner, EdgeRef, TranslationSurface};

use super::{working_basis, Direction, FlowError, Mode, Section, MAX_EVENTS, SNAP_TOLERANCE};

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

fn axpy(a: [f64; 2], t: f64, d: [f64; 2]) -> [f64; 2] {
    [a[0] + t * d[0], a[1] + t * d[1]]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn norm(a: [f64; 2]) -> f64 {
    a[0].hypot(a[1])
}

struct EdgeF {
    a: [f64; 2],
    b: [f64; 2],
    end: usize,
    partner: EdgeRef,
    shift: [f64; 2],
    twin: Option<usize>,
}

struct PolyF {
    edges: Vec<EdgeF>,
    points: Vec<[f64; 2]>,
    base: usize,
}

/// A section piece in float form: points `a + u e` for `0 <= u < len`.
pub(crate) struct PieceF {
    pub poly: usize,
    pub a: [f64; 2],
    pub e: [f64; 2],
    pub len: f64,
    pub offset: f64,
}

impl PieceF {
    pub(crate) fn point(&self, u: f64) -> [f64; 2] {
        axpy(self.a, u, self.e)
    }
}

/// Float geometry of a surface plus an optional section.
pub(crate) struct Engine<'a> {
    pub surface: &'a TranslationSurface,
    polys: Vec<PolyF>,
    pub vtol: f64,
    pub pieces: Vec<PieceF>,
    pub total: f64,
    is_loop: bool,
    on_edge: HashMap<(usize, usize), Vec<usize>>,
    interior: Vec<Vec<usize>>,
    at_point: HashMap<(usize, usize), Vec<(usize, f64)>>,
    point_count: usize,
}

/// Where a run stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Stop {
    Section { piece: usize, u: f64 },
    TimeUp,
}

/// Things a run reports while moving.
pub(crate) enum Event<'w> {
    Segment { poly: usize, from: [f64; 2], to: [f64; 2] },
    Edge { edge: EdgeRef, at: [f64; 2], walker: &'w Walker },
    Vertex { corner: Corner, walker: &'w Walker },
}

/// Moving state. `counts[i]` is the multiplicity of surface point `i` in the
/// accumulated translation.
#[derive(Debug, Clone)]
pub(crate) struct Walker {
    pub poly: usize,
    pub pos: [f64; 2],
    pub time: f64,
    pub counts: Vec<i64>,
    excl: [usize; 2],
    track: bool,
}

impl<'a> Engine<'a> {
    pub(crate) fn new(surface: &'a TranslationSurface) -> Self {
        let mut polys = Vec::with_capacity(surface.polygons().len());
        let mut base = 0;
        let mut diam: f64 = 1.0;
        for (pi, p) in surface.polygons().iter().enumerate() {
            let points: Vec<[f64; 2]> = (0..p.edge_count()).map(|i| p.point_f(i)).collect();
            for q in &points {
                diam = diam.max(q[0].abs()).max(q[1].abs());
            }
            let edges = (0..p.edge_count())
                .map(|e| {
                    let r = EdgeRef::new(pi, e);
                    EdgeF {
                        a: points[e],
                        b: points[p.edge_end(e)],
                        end: p.edge_end(e),
                        partner: surface.partner(r),
                        shift: surface.translation_f(r),
                        twin: p.slit_twin(e),
                    }
                })
                .collect();
            polys.push(PolyF { edges, points, base });
            base += p.edge_count();
        }
        Engine {
            surface,
            polys,
            vtol: SNAP_TOLERANCE * diam,
            pieces: Vec::new(),
            total: 0.0,
            is_loop: false,
            on_edge: HashMap::new(),
            interior: vec![Vec::new(); surface.polygons().len()],
            at_point: HashMap::new(),
            point_count: base,
        }
    }

    /// Registers a section: pieces along an edge are detected when the flow
    /// crosses that edge, other pieces by segment intersection.
    pub(crate) fn with_section(mut self, section: &Section) -> Result<Self, FlowError> {
        let mut offset = 0.0;
        for (k, piece) in section.pieces().iter().enumerate() {
            if piece.poly >= self.polys.len() {
                return Err(FlowError::NotOnSurface(format!("section piece {k} names polygon {}", piece.poly)));
            }
            let a = piece.start.to_f64();
            let b = piece.end.to_f64();
            let len = norm(sub(b, a));
            if len <= self.vtol {
                return Err(FlowError::SingularSection(format!("piece {k} has zero length")));
            }
            let e = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
            let poly = &self.polys[piece.poly];
            let mut on_any = false;
            for (ei, edge) in poly.edges.iter().enumerate() {
                let w = sub(edge.b, edge.a);
                let collinear = cross(e, w).abs() <= self.vtol * norm(w) && cross(e, sub(edge.a, a)).abs() <= self.vtol;
                if !collinear {
                    continue;
                }
                let (u0, u1) = (dot(sub(edge.a, a), e), dot(sub(edge.b, a), e));
                let overlap = u0.max(u1).min(len) - u0.min(u1).max(0.0);
                if overlap > self.vtol {
                    self.on_edge.entry((piece.poly, ei)).or_default().push(k);
                    on_any = true;
                }
            }
            if !on_any {
                self.interior[piece.poly].push(k);
            }
            for (pt, q) in poly.points.iter().enumerate() {
                let r = sub(*q, a);
                let u = dot(r, e);
                if cross(e, r).abs() <= self.vtol && u >= -self.vtol && u <= len + self.vtol {
                    self.at_point.entry((piece.poly, pt)).or_default().push((k, u.clamp(0.0, len)));
                }
            }
            self.pieces.push(PieceF {
                poly: piece.poly,
                a,
                e,
                len,
                offset,
            });
            offset += len;
        }
        self.total = offset;
        self.is_loop = section.is_loop();
        Ok(self)
    }

    pub(crate) fn flat_index(&self, poly: usize, point: usize) -> usize {
        self.polys[poly].base + point
    }

    /// Section coordinate of a hit, folding the loop end onto `0`.
    pub(crate) fn coordinate(&self, piece: usize, u: f64) -> f64 {
        let x = self.pieces[piece].offset + u;
        if self.is_loop && x >= self.total - self.vtol {
            0.0
        } else {
            x
        }
    }

    /// Piece containing coordinate `x`, with the local parameter.
    pub(crate) fn locate_coordinate(&self, x: f64) -> (usize, f64) {
        let k = self
            .pieces
            .iter()
            .rposition(|p| p.offset <= x)
            .unwrap_or(0);
        (k, x - self.pieces[k].offset)
    }

    /// A walker at `pos` in `poly`, about to move along `d`. Points on an edge
    /// pointing out of the polygon are carried across first; a start at a
    /// polygon point picks the corner containing `d`, or `corner` if given.
    pub(crate) fn start(
        &self,
        poly: usize,
        pos: [f64; 2],
        d: [f64; 2],
        corner: Option<usize>,
        track: bool,
    ) -> Result<Walker, FlowError> {
        let mut w = Walker {
            poly,
            pos,
            time: 0.0,
            counts: if track { vec![0; self.point_count] } else { Vec::new() },
            excl: [usize::MAX; 2],
            track,
        };
        if poly >= self.polys.len() {
            return Err(FlowError::NotOnSurface(format!("no polygon {poly}")));
        }
        let p = &self.polys[poly];
        if !self.inside(poly, pos) {
            return Err(FlowError::NotOnSurface(format!("{pos:?} lies outside polygon {poly}")));
        }
        let point = corner.or_else(|| p.points.iter().position(|q| norm(sub(*q, pos)) <= self.vtol));
        if let Some(pt) = point {
            let c = Corner { poly, point: pt };
            if corner.is_none() {
                let class = &self.surface.vertex_classes()[self.surface.class_of(c)];
                if class.is_cone_point() {
                    return Err(FlowError::SingularOrbit(0.0));
                }
                let next = self.corner_for(c, d)?;
                self.jump(&mut w, c, next);
            } else {
                w.pos = p.points[pt];
                w.excl = self.corner_edges(c);
            }
            return Ok(w);
        }
        for (ei, e) in p.edges.iter().enumerate() {
            let v = sub(e.b, e.a);
            let l = norm(v);
            let r = sub(pos, e.a);
            let s = dot(r, v) / (l * l);
            if cross(v, r).abs() <= self.vtol * l && s > 0.0 && s < 1.0 {
                if cross(v, d) < 0.0 {
                    self.teleport(&mut w, ei, pos);
                } else {
                    w.excl = [ei, e.twin.unwrap_or(usize::MAX)];
                }
                return Ok(w);
            }
        }
        Ok(w)
    }

    /// Closed containment: boundary points count as inside. Slit edges come
    /// in coincident twins, so they cancel in the even-odd count.
    fn inside(&self, poly: usize, pos: [f64; 2]) -> bool {
        let mut odd = false;
        for e in &self.polys[poly].edges {
            let v = sub(e.b, e.a);
            let r = sub(pos, e.a);
            let l = norm(v);
            let s = dot(r, v) / (l * l);
            if cross(v, r).abs() <= self.vtol * l && (-1e-12..=1.0 + 1e-12).contains(&s) {
                return true;
            }
            if (e.a[1] > pos[1]) != (e.b[1] > pos[1]) && pos[0] < e.a[0] + (pos[1] - e.a[1]) * v[0] / v[1] {
                odd = !odd;
            }
        }
        odd
    }

    fn corner_edges(&self, c: Corner) -> [usize; 2] {
        let poly = &self.surface.polygons()[c.poly];
        [c.point, poly.incoming_edge(c.point)]
    }

    /// The corner of `c`'s vertex class whose sweep contains `d`.
    fn corner_for(&self, c: Corner, d: [f64; 2]) -> Result<Corner, FlowError> {
        let class = &self.surface.vertex_classes()[self.surface.class_of(c)];
        class
            .corners
            .iter()
            .copied()
            .find(|&k| self.surface.corner_contains_f(k, d))
            .ok_or_else(|| FlowError::NotOnSurface(format!("no corner at {c:?} contains the direction")))
    }

    fn jump(&self, w: &mut Walker, from: Corner, to: Corner) {
        if w.track && from != to {
            w.counts[self.flat_index(to.poly, to.point)] += 1;
            w.counts[self.flat_index(from.poly, from.point)] -= 1;
        }
        w.poly = to.poly;
        w.pos = self.polys[to.poly].points[to.point];
        w.excl = self.corner_edges(to);
    }

    fn teleport(&self, w: &mut Walker, edge: usize, at: [f64; 2]) {
        let e = &self.polys[w.poly].edges[edge];
        let f = e.partner;
        if w.track {
            w.counts[self.flat_index(f.poly, f.edge)] += 1;
            w.counts[self.flat_index(w.poly, e.end)] -= 1;
        }
        w.pos = add(at, e.shift);
        w.poly = f.poly;
        w.excl = [f.edge, self.polys[f.poly].edges[f.edge].twin.unwrap_or(usize::MAX)];
    }

    /// Best piece on `(poly, edge)` containing `h`.
    fn piece_on_edge(&self, poly: usize, edge: usize, h: [f64; 2]) -> Option<(usize, f64)> {
        let ks = self.on_edge.get(&(poly, edge))?;
        let mut best: Option<(usize, f64, f64)> = None;
        for &k in ks {
            let p = &self.pieces[k];
            let u = dot(sub(h, p.a), p.e);
            if u < -self.vtol || u > p.len + self.vtol {
                continue;
            }
            let depth = u.min(p.len - u);
            if best.map_or(true, |(_, _, d)| depth > d) {
                best = Some((k, u.clamp(0.0, p.len), depth));
            }
        }
        best.map(|(k, u, _)| (k, u))
    }

    /// Follows `w` along `d` until the section (when `section` is set and the
    /// time is at least `ignore_before`), `max_time`, or a cone point.
    pub(crate) fn run(
        &self,
        w: &mut Walker,
        d: [f64; 2],
        max_time: f64,
        section: bool,
        ignore_before: f64,
        rec: &mut dyn FnMut(Event<'_>),
    ) -> Result<Stop, FlowError> {
        let dn = norm(d);
        let tiny = 1e-14 * (1.0 + self.vtol / SNAP_TOLERANCE) / dn;
        for _ in 0..MAX_EVENTS {
            let poly = &self.polys[w.poly];
            let mut best: Option<(f64, usize)> = None;
            for (ei, e) in poly.edges.iter().enumerate() {
                if w.excl.contains(&ei) {
                    continue;
                }
                let v = sub(e.b, e.a);
                let lv = norm(v);
                let cdv = cross(d, v);
                if cdv <= 1e-15 * lv * dn {
                    continue;
                }
                let r = sub(e.a, w.pos);
                let tau = cross(r, v) / cdv;
                let sigma = cross(r, d) / cdv;
                let tol = self.vtol / lv;
                if tau <= tiny || sigma < -tol || sigma > 1.0 + tol {
                    continue;
                }
                if best.map_or(true, |(bt, _)| tau < bt) {
                    best = Some((tau, ei));
                }
            }
            let (tau, ei) =
                best.ok_or_else(|| FlowError::NotOnSurface(format!("no exit from polygon {} at {:?}", w.poly, w.pos)))?;

            if section {
                let mut hit: Option<(f64, usize, f64)> = None;
                for &k in &self.interior[w.poly] {
                    let p = &self.pieces[k];
                    let c = cross(d, p.e);
                    if c.abs() <= 1e-15 * dn {
                        continue;
                    }
                    let r = sub(p.a, w.pos);
                    let s = cross(r, p.e) / c;
                    let u = cross(r, d) / c;
                    if s > tiny
                        && s <= tau + self.vtol / dn
                        && w.time + s >= ignore_before
                        && u >= -self.vtol
                        && u <= p.len + self.vtol
                        && hit.map_or(true, |(hs, _, _)| s < hs)
                    {
                        hit = Some((s, k, u.clamp(0.0, p.len)));
                    }
                }
                if let Some((s, k, u)) = hit {
                    if w.time + s <= max_time {
                        let to = axpy(w.pos, s, d);
                        rec(Event::Segment { poly: w.poly, from: w.pos, to });
                        w.pos = to;
                        w.time += s;
                        return Ok(Stop::Section { piece: k, u });
                    }
                }
            }

            if w.time + tau > max_time {
                let to = axpy(w.pos, max_time - w.time, d);
                rec(Event::Segment { poly: w.poly, from: w.pos, to });
                w.pos = to;
                w.time = max_time;
                return Ok(Stop::TimeUp);
            }
            let h = axpy(w.pos, tau, d);
            rec(Event::Segment { poly: w.poly, from: w.pos, to: h });
            w.time += tau;
            w.pos = h;
            let e = &poly.edges[ei];
            let vertex = if norm(sub(h, e.a)) <= self.vtol {
                Some(ei)
            } else if norm(sub(h, e.b)) <= self.vtol {
                Some(e.end)
            } else {
                None
            };
            if let Some(pt) = vertex {
                let here = Corner { poly: w.poly, point: pt };
                let class = &self.surface.vertex_classes()[self.surface.class_of(here)];
                w.pos = poly.points[pt];
                if class.is_cone_point() {
                    return Err(FlowError::SingularOrbit(w.time));
                }
                if section && w.time >= ignore_before {
                    for &c in &class.corners {
                        if let Some(&(k, u)) = self.at_point.get(&(c.poly, c.point)).and_then(|v| v.first()) {
                            self.jump(w, here, c);
                            return Ok(Stop::Section { piece: k, u });
                        }
                    }
                }
                let next = self.corner_for(here, d)?;
                self.jump(w, here, next);
                rec(Event::Vertex { corner: here, walker: w });
                continue;
            }
            if section && w.time >= ignore_before {
                if let Some((k, u)) = self.piece_on_edge(w.poly, ei, h) {
                    return Ok(Stop::Section { piece: k, u });
                }
            }
            rec(Event::Edge {
                edge: EdgeRef::new(w.poly, ei),
                at: h,
                walker: w,
            });
            self.teleport(w, ei, h);
            if section && w.time >= ignore_before {
                if let Some((k, u)) = self.piece_on_edge(w.poly, w.excl[0], w.pos) {
                    return Ok(Stop::Section { piece: k, u });
                }
            }
        }
        Err(FlowError::TimeBudgetExceeded(MAX_EVENTS))
    }

    /// Advances a float state by `t` without bookkeeping.
    pub(crate) fn advance(&self, poly: usize, pos: [f64; 2], d: [f64; 2], t: f64) -> Result<(usize, [f64; 2]), FlowError> {
        let mut w = self.start(poly, pos, d, None, false)?;
        self.run(&mut w, d, t, false, 0.0, &mut |_| {})?;
        Ok((w.poly, w.pos))
    }
}

/// Developed exact position `start + sum(counts * points)`.
pub(crate) fn developed(surface: &TranslationSurface, engine: &Engine<'_>, start: &Vec2, counts: &[i64]) -> Vec2 {
    let mut acc = start.clone();
    for (pi, p) in surface.polygons().iter().enumerate() {
        for pt in 0..p.edge_count() {
            let c = counts[engine.flat_index(pi, pt)];
            if c != 0 {
                let q = p.point(pt).rebase(start.basis()).expect("working basis contains the surface basis");
                acc = &acc + &q.scale(&Rational::from_integer(c.into()));
            }
        }
    }
    acc
}

/// One straight piece of a trajectory inside polygon `poly`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySegment {
    pub poly: usize,
    pub from: [f64; 2],
    pub to: [f64; 2],
}

/// Passage through an edge or a regular vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossing {
    pub time: f64,
    pub exact_time: Option<FieldElement>,
    pub edge: Option<EdgeRef>,
    pub vertex: Option<Corner>,
    pub point: [f64; 2],
    /// Exact crossing point in the coordinates of the polygon being left, when
    /// the crossing time is representable.
    pub exact_point: Option<Vec2>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub mode: Mode,
    pub segments: Vec<TrajectorySegment>,
    pub crossings: Vec<Crossing>,
    pub end_poly: usize,
    pub end_point: [f64; 2],
    pub end_exact: Option<Vec2>,
    pub time: f64,
}

/// Flows from `start` in polygon `poly` for `max_time`. In exact mode each
/// crossing also carries its exact time and point.
pub fn trace(
    surface: &TranslationSurface,
    poly: usize,
    start: &Vec2,
    direction: &Direction,
    max_time: f64,
    mode: Mode,
) -> Result<Trajectory, FlowError> {
    let engine = Engine::new(surface);
    let d = direction.to_f64();
    let exact = mode == Mode::Exact;
    let basis = working_basis(surface, direction, None)?;
    let start_x = start.rebase(&basis)?;
    let dir_x = direction.vector().rebase(&basis)?;
    let mut w = engine.start(poly, start.to_f64(), d, None, exact)?;
    let mut segments = Vec::new();
    let mut crossings = Vec::new();
    let stop = engine.run(&mut w, d, max_time, false, 0.0, &mut |ev| match ev {
        Event::Segment { poly, from, to } => segments.push(TrajectorySegment { poly, from, to }),
        Event::Edge { edge, at, walker } => {
            // crossing times leave the field when edge and direction are both irrational
            let (exact_time, exact_point) = match exact.then(|| exact_edge_time(surface, &engine, &start_x, &dir_x, walker, edge)) {
                Some(Ok((t, p))) => (Some(t), Some(p)),
                _ => (None, None),
            };
            crossings.push(Crossing {
                time: walker.time,
                exact_time,
                edge: Some(edge),
                vertex: None,
                point: at,
                exact_point,
            });
        }
        Event::Vertex { corner, walker } => {
            let p = surface.polygons()[corner.poly].point(corner.point).clone();
            crossings.push(Crossing {
                time: walker.time,
                exact_time: None,
                edge: None,
                vertex: Some(corner),
                point: p.to_f64(),
                exact_point: exact.then_some(p),
            });
        }
    });
    stop?;
    let end_exact = if exact {
        let t = Rational::from_f64(max_time).ok_or_else(|| FlowError::Unrepresentable("a finite time".into()))?;
        let base = developed(surface, &engine, &start_x, &w.counts);
        Some(&base + &dir_x.scale(&t))
    } else {
        None
    };
    Ok(Trajectory {
        mode,
        segments,
        crossings,
        end_poly: w.poly,
        end_point: w.pos,
        end_exact,
        time: w.time,
    })
}

/// Exact time at which the developed line meets edge `edge`.
fn exact_edge_time(
    surface: &TranslationSurface,
    engine: &Engine<'_>,
    start: &Vec2,
    dir: &Vec2,
    walker: &Walker,
    edge: EdgeRef,
) -> Result<(FieldElement, Vec2), FlowError> {
    let poly = &surface.polygons()[edge.poly];
    let b = start.basis();
    let a = poly.point(edge.edge).rebase(b)?;
    let v = poly.edge_vector(edge.edge).rebase(b)?;
    let base = developed(surface, engine, start, &walker.counts);
    let r = &a - &base;
    let num = r.try_cross(&v).map_err(|_| FlowError::Unrepresentable("rational edge or direction data".into()))?;
    let den = dir.try_cross(&v).map_err(|_| FlowError::Unrepresentable("rational edge or direction data".into()))?;
    let t = num.try_div(&den).map_err(|_| FlowError::Unrepresentable("a rational ratio of crossings".into()))?;
    let p = &base + &Vec2::new(t.try_mul(&dir.x)?, t.try_mul(&dir.y)?);
    Ok((t, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat, RealBasis};
    use crate::surface::unit_torus;

    #[test]
    fn vertical_torus_orbit() {
        let b = RealBasis::rational();
        let t = unit_torus(&b);
        let start = Vec2::from_rationals(&b, rat(1, 3), int(0));
        let tr = trace(&t, 0, &start, &Direction::vertical(&b), 2.0, Mode::Exact).unwrap();
        let times: Vec<_> = tr.crossings.iter().map(|c| c.exact_time.clone().unwrap()).collect();
        assert_eq!(times, vec![FieldElement::from_int(&b, 1), FieldElement::from_int(&b, 2)]);
        assert_eq!(tr.end_exact.unwrap(), start);
        assert_eq!(tr.end_poly, 0);
    }

    #[test]
    fn irrational_slope_never_closes() {
        let b = RealBasis::new([("beta", 2f64.sqrt() - 1.0)]).unwrap();
        let t = unit_torus(&b);
        let beta = FieldElement::named(&b, "beta").unwrap();
        let dir = Direction::new(Vec2::new(FieldElement::from_int(&b, 1), beta.clone())).unwrap();
        let origin = Vec2::from_rationals(&b, int(0), int(0));
        let tr = trace(&t, 0, &origin, &dir, 10_000.0, Mode::Exact).unwrap();
        assert!(tr.crossings.len() >= 10_000);
        let mut k = 0;
        for c in &tr.crossings {
            let Some(p) = c.exact_point.as_ref() else { continue };
            // vertical sides are met at integer times k with height k * beta mod 1
            k += 1;
            assert_eq!(p.x, FieldElement::from_int(&b, 1));
            assert_eq!(p.y.coords()[1], int(k));
            assert!(!p.y.is_rational(), "closed at {p}");
            assert!((p.y.to_f64() - (k as f64 * beta.to_f64()).rem_euclid(1.0)).abs() < 1e-9);
        }
        assert_eq!(k, 10_000);
    }

    #[test]
    fn cone_point_start_is_singular() {
        let b = RealBasis::rational();
        let s = crate::surface::build_hv_surface(&FieldElement::from_int(&b, 1), &FieldElement::from_int(&b, 2)).unwrap();
        // (1, 1) is the reflex corner of the L, the only cone point
        let p = Vec2::from_rationals(&b, int(1), int(1));
        let err = trace(&s, 0, &p, &Direction::vertical(&b), 1.0, Mode::Float);
        assert!(matches!(err, Err(FlowError::SingularOrbit(_))));
    }

    #[test]
    fn starts_outside_the_polygon_are_refused() {
        let b = RealBasis::rational();
        let s = crate::surface::build_hv_surface(&FieldElement::from_int(&b, 1), &FieldElement::from_int(&b, 2)).unwrap();
        let up = Direction::vertical(&b);
        let at = |x, y| Vec2::from_rationals(&b, rat(x, 2), rat(y, 2));
        // the missing square of the L, and a point beyond it
        for p in [at(3, 3), at(5, 1)] {
            assert!(matches!(trace(&s, 0, &p, &up, 1.0, Mode::Float), Err(FlowError::NotOnSurface(_))), "{p}");
        }
        // interior points of both arms and a boundary point
        for p in [at(3, 1), at(1, 3), at(1, 0)] {
            assert!(trace(&s, 0, &p, &up, 1.0, Mode::Float).is_ok(), "{p}");
        }
    }

    #[test]
    fn float_advance_matches_torus_oracle() {
        let b = RealBasis::rational();
        let t = unit_torus(&b);
        let e = Engine::new(&t);
        let d = [0.3819660112501051, 1.0];
        let (_, p) = e.advance(0, [0.1, 0.2], d, 37.25).unwrap();
        let expect = [(0.1 + 37.25 * d[0]).rem_euclid(1.0), (0.2f64 + 37.25).rem_euclid(1.0)];
        assert!((p[0] - expect[0]).abs() < 1e-9 && (p[1] - expect[1]).abs() < 1e-9, "{p:?} vs {expect:?}");
    }
}
