use std::cmp::Ordering;
use std::sync::Arc;

use crate::exactnum::{FieldElement, RealBasis, Vec2};
use crate::iet::{FloatIet, Iet, Permutation};
use crate::surface::{cross_sign, Corner, TranslationSurface};

use super::engine::{developed, Engine, Stop};
use super::{working_basis, Direction, FlowError, Mode, Section, MAX_EVENTS};

/// Section IET with its return times.
#[derive(Debug, Clone)]
pub struct ReturnMapResult {
    pub iet: Iet,
    pub times: Vec<FieldElement>,
    pub section: Section,
    pub direction: Direction,
    pub mode: Mode,
}

/// The return times `t`, exact.
pub fn return_times_vector(result: &ReturnMapResult) -> Vec<FieldElement> {
    result.times.clone()
}

/// Float first return map, for directions or sections outside exact reach.
#[derive(Debug, Clone)]
pub struct FloatReturnMap {
    pub iet: FloatIet,
    pub times: Vec<f64>,
    pub mode: Mode,
}

/// Hits closer than this to the start of a run are the start itself.
const START_GUARD: f64 = 1e-9;

/// Exact form of an axis-parallel piece.
struct PieceX {
    start: Vec2,
    horizontal: bool,
    sign: i64,
    offset: FieldElement,
}

struct ExactSection {
    pieces: Vec<PieceX>,
    total: FieldElement,
    is_loop: bool,
}

fn along(v: &Vec2, horizontal: bool) -> &FieldElement {
    if horizontal {
        &v.x
    } else {
        &v.y
    }
}

fn across(v: &Vec2, horizontal: bool) -> &FieldElement {
    if horizontal {
        &v.y
    } else {
        &v.x
    }
}

impl ExactSection {
    fn new(section: &Section, dir: &Vec2) -> Result<Self, FlowError> {
        let lengths = section.lengths()?;
        let mut pieces = Vec::new();
        let mut offset = FieldElement::zero(dir.basis());
        let mut axis = None;
        for (k, (p, len)) in section.pieces().iter().zip(&lengths).enumerate() {
            let delta = &p.end - &p.start;
            let horizontal = delta.y.is_zero();
            if *axis.get_or_insert(horizontal) != horizontal {
                return Err(FlowError::Unrepresentable("all section pieces parallel to one axis".into()));
            }
            if cross_sign(&delta, dir)? != Ordering::Greater {
                return Err(FlowError::NotTransversal(k));
            }
            let sign = if along(&delta, horizontal).is_positive()? { 1 } else { -1 };
            pieces.push(PieceX {
                start: p.start.clone(),
                horizontal,
                sign,
                offset: offset.clone(),
            });
            offset = &offset + len;
        }
        Ok(ExactSection {
            pieces,
            total: offset,
            is_loop: section.is_loop(),
        })
    }

    /// Coordinate and time at which the line `base + t dir` meets piece `k`.
    fn land(&self, base: &Vec2, dir: &Vec2, k: usize) -> Result<(FieldElement, FieldElement), FlowError> {
        let p = &self.pieces[k];
        let h = p.horizontal;
        let gap = across(&p.start, h) - across(base, h);
        let t = gap
            .try_div(across(dir, h))
            .map_err(|_| FlowError::Unrepresentable("return times in the field (divide by the direction)".into()))?;
        let moved = t
            .try_mul(along(dir, h))
            .map_err(|_| FlowError::Unrepresentable("return times in the field (times the direction)".into()))?;
        let x = &(along(base, h) + &moved) - along(&p.start, h);
        let mut coord = &p.offset + &x.scale_int(p.sign);
        if self.is_loop && coord == self.total {
            coord = FieldElement::zero(coord.basis());
        }
        Ok((coord, t))
    }

    /// The point at coordinate `x` of piece `k`.
    fn point(&self, k: usize, x: &FieldElement) -> Vec2 {
        let p = &self.pieces[k];
        let u = (x - &p.offset).scale_int(p.sign);
        let zero = FieldElement::zero(x.basis());
        if p.horizontal {
            &p.start + &Vec2::new(u, zero)
        } else {
            &p.start + &Vec2::new(zero, u)
        }
    }

    fn piece_of(&self, x: &FieldElement) -> Result<usize, FlowError> {
        let mut k = 0;
        for (i, p) in self.pieces.iter().enumerate() {
            if p.offset.cmp_exact(x)? != Ordering::Greater {
                k = i;
            }
        }
        Ok(k)
    }
}

fn neg(d: [f64; 2]) -> [f64; 2] {
    [-d[0], -d[1]]
}

/// Starting states of the backward rays: every corner of a cone point that
/// contains `-d`, and every piece endpoint that is not a cone point.
fn ray_starts(surface: &TranslationSurface, section: &Section, d: [f64; 2]) -> Vec<(usize, Vec2, Option<usize>)> {
    let mut out = Vec::new();
    for class in surface.cone_points() {
        for &c in &class.corners {
            if surface.corner_contains_f(c, neg(d)) {
                out.push((c.poly, surface.polygons()[c.poly].point(c.point).clone(), Some(c.point)));
            }
        }
    }
    for p in section.pieces() {
        out.push((p.poly, p.start.clone(), None));
        out.push((p.poly, p.end.clone(), None));
    }
    out
}

/// Cone points lying on the section are cut points themselves.
fn cone_points_on_section(surface: &TranslationSurface, engine: &Engine<'_>) -> Vec<(usize, Corner)> {
    let mut out = Vec::new();
    for class in surface.cone_points() {
        for &c in &class.corners {
            for (k, p) in engine.pieces.iter().enumerate() {
                if p.poly != c.poly {
                    continue;
                }
                let q = surface.polygons()[c.poly].point_f(c.point);
                let r = [q[0] - p.a[0], q[1] - p.a[1]];
                let u = r[0] * p.e[0] + r[1] * p.e[1];
                let off = r[0] * p.e[1] - r[1] * p.e[0];
                if off.abs() <= engine.vtol && u >= -engine.vtol && u <= p.len + engine.vtol {
                    out.push((k, c));
                }
            }
        }
    }
    out
}

fn sort_exact(xs: &mut [FieldElement]) -> Result<(), FlowError> {
    let mut err = None;
    xs.sort_by(|a, b| {
        a.cmp_exact(b).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), |e| Err(e.into()))
}

fn check_close(what: &str, exact: f64, float: f64, scale: f64) -> Result<(), FlowError> {
    if (exact - float).abs() > 1e-7 * scale.max(1.0) {
        return Err(FlowError::SingularSection(format!("{what}: exact {exact} vs traced {float}")));
    }
    Ok(())
}

/// First return map of the flow in `direction` to `section`, in exact
/// arithmetic. The section must consist of horizontal pieces or of vertical
/// pieces, each crossed from right to left by the flow.
///
/// Cut points are the section endpoints, cone points on the section, and the
/// first hits of backward rays from cone points and endpoints. Each gap
/// between cuts is traced once from its midpoint; neighbours with equal
/// shift and equal time are merged.
pub fn first_return_map(
    surface: &TranslationSurface,
    direction: &Direction,
    section: &Section,
) -> Result<ReturnMapResult, FlowError> {
    let basis = working_basis(surface, direction, Some(section))?;
    let section = section.rebase(&basis)?;
    let dir = direction.vector().rebase(&basis)?;
    let back = -&dir;
    let xs = ExactSection::new(&section, &dir)?;
    let engine = Engine::new(surface).with_section(&section)?;
    let d = direction.to_f64();
    let total_f = engine.total;

    let mut cuts: Vec<FieldElement> = xs.pieces.iter().map(|p| p.offset.clone()).collect();
    for (k, c) in cone_points_on_section(surface, &engine) {
        let q = rebased_point(surface, c, &basis)?;
        let (x, t) = xs.land(&q, &dir, k)?;
        if t.is_zero() {
            cuts.push(x);
        }
    }
    for (poly, point, corner) in ray_starts(surface, &section, d) {
        let point = point.rebase(&basis)?;
        let mut w = match engine.start(poly, point.to_f64(), neg(d), corner, true) {
            Ok(w) => w,
            Err(FlowError::SingularOrbit(_)) => continue,
            Err(e) => return Err(e),
        };
        match engine.run(&mut w, neg(d), f64::INFINITY, true, START_GUARD, &mut |_| {}) {
            Ok(Stop::Section { piece, u }) => {
                let base = developed(surface, &engine, &point, &w.counts);
                let (x, _) = xs.land(&base, &back, piece)?;
                check_close("backward ray", x.to_f64(), engine.coordinate(piece, u), total_f)?;
                cuts.push(x);
            }
            Ok(Stop::TimeUp) => unreachable!("no time limit"),
            Err(FlowError::SingularOrbit(_)) => {}
            Err(FlowError::TimeBudgetExceeded(n)) => return Err(FlowError::NoReturn(n)),
            Err(e) => return Err(e),
        }
    }
    sort_exact(&mut cuts)?;
    cuts.dedup();
    // the far end is the last bound, or the seam again on a loop
    if cuts.last() == Some(&xs.total) {
        cuts.pop();
    }
    let mut bounds = cuts;
    bounds.push(xs.total.clone());

    // (start, length, shift, time) per gap
    let mut intervals: Vec<(FieldElement, FieldElement, FieldElement, FieldElement)> = Vec::new();
    for win in bounds.windows(2) {
        let (a, b) = (&win[0], &win[1]);
        let (af, bf) = (a.to_f64(), b.to_f64());
        let mid = 0.5 * (af + bf);
        let k = xs.piece_of(a)?;
        let pf = &engine.pieces[k];
        let mut w = engine.start(pf.poly, pf.point(mid - pf.offset), d, None, true)?;
        let stop = match engine.run(&mut w, d, f64::INFINITY, true, START_GUARD, &mut |_| {}) {
            Err(FlowError::TimeBudgetExceeded(n)) => return Err(FlowError::NoReturn(n)),
            Err(FlowError::SingularOrbit(t)) => {
                return Err(FlowError::SingularSection(format!("orbit of {mid} hits a cone point at time {t}")))
            }
            other => other?,
        };
        let Stop::Section { piece, u } = stop else { unreachable!("no time limit") };
        let base = developed(surface, &engine, &xs.point(k, a), &w.counts);
        let (image, time) = xs.land(&base, &dir, piece)?;
        let landed = engine.coordinate(piece, u);
        let mut expect = image.to_f64() + (mid - af);
        if section.is_loop() && expect >= total_f {
            expect -= total_f;
        }
        check_close("return of a gap midpoint", expect, landed, total_f)?;
        check_close("return time", time.to_f64(), w.time, w.time)?;
        if !time.is_positive()? {
            return Err(FlowError::SingularSection(format!("non-positive return time {time}")));
        }
        let shift = &image - a;
        let len = b - a;
        match intervals.last_mut() {
            Some(last) if last.2 == shift && last.3 == time => last.1 = &last.1 + &len,
            _ => intervals.push((a.clone(), len, shift, time)),
        }
    }

    let mut images: Vec<(FieldElement, FieldElement, usize)> =
        intervals.iter().enumerate().map(|(j, iv)| (&iv.0 + &iv.2, iv.1.clone(), j)).collect();
    let mut err = None;
    images.sort_by(|x, y| {
        x.0.cmp_exact(&y.0).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let mut edge = FieldElement::zero(&basis);
    for (start, len, _) in &images {
        if *start != edge {
            return Err(FlowError::SingularSection(format!("image intervals do not tile: gap at {edge}")));
        }
        edge = &edge + len;
    }
    if edge != xs.total {
        return Err(FlowError::SingularSection("image intervals do not cover the section".into()));
    }
    let mut perm = vec![0; intervals.len()];
    for (rank, (_, _, j)) in images.iter().enumerate() {
        perm[*j] = rank + 1;
    }
    let lengths = intervals.iter().map(|iv| iv.1.clone()).collect();
    let times = intervals.iter().map(|iv| iv.3.clone()).collect();
    Ok(ReturnMapResult {
        iet: Iet::new(lengths, Permutation::new(perm)?)?,
        times,
        section,
        direction: Direction::new(dir)?,
        mode: Mode::Exact,
    })
}

fn rebased_point(surface: &TranslationSurface, c: Corner, basis: &Arc<RealBasis>) -> Result<Vec2, FlowError> {
    Ok(surface.polygons()[c.poly].point(c.point).rebase(basis)?)
}

/// Float first return map for any direction and any transversal section.
/// Cut points and merges use a relative tolerance of `1e-9`.
pub fn first_return_map_float(
    surface: &TranslationSurface,
    direction: [f64; 2],
    section: &Section,
) -> Result<FloatReturnMap, FlowError> {
    let d = direction;
    if d == [0.0, 0.0] {
        return Err(FlowError::ZeroDirection);
    }
    let engine = Engine::new(surface).with_section(section)?;
    for (k, p) in engine.pieces.iter().enumerate() {
        if p.e[0] * d[1] - p.e[1] * d[0] <= 1e-12 {
            return Err(FlowError::NotTransversal(k));
        }
    }
    let total = engine.total;
    let tol = 1e-9 * total.max(1.0);
    let mut cuts: Vec<f64> = engine.pieces.iter().map(|p| p.offset).collect();
    for (k, c) in cone_points_on_section(surface, &engine) {
        let q = surface.polygons()[c.poly].point_f(c.point);
        let p = &engine.pieces[k];
        cuts.push(engine.coordinate(k, (q[0] - p.a[0]) * p.e[0] + (q[1] - p.a[1]) * p.e[1]));
    }
    for (poly, point, corner) in ray_starts(surface, section, d) {
        let mut w = match engine.start(poly, point.to_f64(), neg(d), corner, false) {
            Ok(w) => w,
            Err(FlowError::SingularOrbit(_)) => continue,
            Err(e) => return Err(e),
        };
        match engine.run(&mut w, neg(d), f64::INFINITY, true, START_GUARD, &mut |_| {}) {
            Ok(Stop::Section { piece, u }) => cuts.push(engine.coordinate(piece, u)),
            Ok(Stop::TimeUp) | Err(FlowError::SingularOrbit(_)) => {}
            Err(FlowError::TimeBudgetExceeded(_)) => return Err(FlowError::NoReturn(MAX_EVENTS)),
            Err(e) => return Err(e),
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| (*b - *a).abs() <= tol);
    cuts.retain(|&c| c < total - tol);
    cuts.push(total);

    let mut intervals: Vec<(f64, f64, f64, f64)> = Vec::new();
    for win in cuts.windows(2) {
        let (a, b) = (win[0], win[1]);
        let mid = 0.5 * (a + b);
        let (k, u) = engine.locate_coordinate(mid);
        let pf = &engine.pieces[k];
        let mut w = engine.start(pf.poly, pf.point(u), d, None, false)?;
        let stop = match engine.run(&mut w, d, f64::INFINITY, true, START_GUARD, &mut |_| {}) {
            Err(FlowError::TimeBudgetExceeded(n)) => return Err(FlowError::NoReturn(n)),
            Err(FlowError::SingularOrbit(t)) => {
                return Err(FlowError::SingularSection(format!("orbit of {mid} hits a cone point at time {t}")))
            }
            other => other?,
        };
        let Stop::Section { piece, u } = stop else { unreachable!("no time limit") };
        let mut shift = engine.coordinate(piece, u) - mid;
        if section.is_loop() && a + shift < -tol {
            shift += total;
        }
        match intervals.last_mut() {
            Some(last) if (last.2 - shift).abs() <= tol && (last.3 - w.time).abs() <= tol => last.1 += b - a,
            _ => intervals.push((a, b - a, shift, w.time)),
        }
    }
    let mut order: Vec<usize> = (0..intervals.len()).collect();
    order.sort_by(|&i, &j| (intervals[i].0 + intervals[i].2).total_cmp(&(intervals[j].0 + intervals[j].2)));
    let mut perm = vec![0; intervals.len()];
    let mut edge = 0.0;
    for (rank, &j) in order.iter().enumerate() {
        let start = intervals[j].0 + intervals[j].2;
        if (start - edge).abs() > 1e-7 * total.max(1.0) {
            return Err(FlowError::SingularSection(format!("image intervals do not tile near {edge}")));
        }
        edge = start + intervals[j].1;
        perm[j] = rank + 1;
    }
    Ok(FloatReturnMap {
        iet: FloatIet::new(intervals.iter().map(|iv| iv.1).collect(), Permutation::new(perm)?),
        times: intervals.iter().map(|iv| iv.3).collect(),
        mode: Mode::Float,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::surface::{suspend, unit_torus};

    fn x_axis(b: &Arc<RealBasis>) -> Section {
        Section::horizontal(
            0,
            FieldElement::zero(b),
            FieldElement::from_int(b, 1),
            FieldElement::zero(b),
            true,
        )
    }

    #[test]
    fn vertical_torus_is_the_identity() {
        let b = RealBasis::rational();
        let r = first_return_map(&unit_torus(&b), &Direction::vertical(&b), &x_axis(&b)).unwrap();
        assert_eq!(r.iet.perm().images(), &[1]);
        assert_eq!(r.iet.lengths(), &[FieldElement::from_int(&b, 1)]);
        assert_eq!(return_times_vector(&r), vec![FieldElement::from_int(&b, 1)]);
    }

    #[test]
    fn drifting_torus_flow_is_a_rotation() {
        let b = RealBasis::new([("beta", 0.5f64.sqrt() - 0.5)]).unwrap();
        let beta = FieldElement::named(&b, "beta").unwrap();
        let one = FieldElement::from_int(&b, 1);
        for speed in [int(1), rat(1, 2)] {
            let dir = Direction::new(Vec2::new(beta.scale(&speed), FieldElement::from_rational(&b, speed.clone()))).unwrap();
            let r = first_return_map(&unit_torus(&RealBasis::rational()), &dir, &x_axis(&RealBasis::rational())).unwrap();
            assert_eq!(r.iet.perm().images(), &[2, 1]);
            assert_eq!(r.iet.lengths(), &[&one - &beta, beta.clone()]);
            let t = FieldElement::from_rational(&b, speed.recip());
            assert_eq!(r.times, vec![t.clone(), t]);
        }
    }

    #[test]
    fn suspension_round_trip() {
        let iet = Iet::rational(&[(1, 5), (1, 3), (2, 7), (1, 6)], &[4, 2, 3, 1]).unwrap();
        let b = iet.basis().clone();
        let hs: Vec<FieldElement> = [(1, 1), (3, 2), (2, 3), (5, 4)]
            .iter()
            .map(|&(n, d)| FieldElement::from_rational(&b, rat(n, d)))
            .collect();
        let s = suspend(&iet, &hs).unwrap();
        let r = first_return_map(&s.surface, &Direction::vertical(&b), &s.section).unwrap();
        assert_eq!(r.iet.perm(), iet.perm());
        assert_eq!(r.iet.lengths(), iet.lengths());
        assert_eq!(r.times, hs);
    }

    #[test]
    fn float_map_agrees_on_a_slanted_torus_flow() {
        let b = RealBasis::rational();
        let slope = 0.6180339887498949;
        let r = first_return_map_float(&unit_torus(&b), [slope, 1.0], &x_axis(&b)).unwrap();
        assert_eq!(r.iet.perm().images(), &[2, 1]);
        assert!((r.iet.lengths()[0] - (1.0 - slope)).abs() < 1e-12);
        assert!(r.times.iter().all(|t| (t - 1.0).abs() < 1e-12));
    }

    #[test]
    fn tangent_sections_are_rejected() {
        let b = RealBasis::rational();
        let east = Direction::new(Vec2::from_rationals(&b, int(1), int(0))).unwrap();
        let err = first_return_map(&unit_torus(&b), &east, &x_axis(&b));
        assert!(matches!(err, Err(FlowError::NotTransversal(0))));
    }

    mod props {
        use super::*;
        use crate::iet::Permutation;
        use proptest::prelude::*;

        fn rational_iet() -> impl Strategy<Value = (Vec<(i64, i64)>, Vec<usize>, Vec<(i64, i64)>)> {
            (2usize..=6).prop_flat_map(|m| {
                (
                    proptest::collection::vec((1i64..30, 1i64..13), m),
                    Just((1..=m).collect::<Vec<_>>()).prop_shuffle(),
                    proptest::collection::vec((1i64..40, 1i64..9), m),
                )
                    .prop_filter("irreducible", |(_, p, _)| Permutation::new(p.clone()).unwrap().is_irreducible())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn base_return_recovers_the_suspended_iet((ls, p, hs) in rational_iet()) {
                let iet = Iet::rational(&ls, &p).unwrap();
                let b = iet.basis().clone();
                // distinct heights keep neighbours with equal shifts apart
                let hs: Vec<FieldElement> = hs
                    .iter()
                    .enumerate()
                    .map(|(j, &(n, d))| FieldElement::from_rational(&b, rat(n, d) + rat(j as i64, 1009)))
                    .collect();
                let s = suspend(&iet, &hs).unwrap();
                let r = first_return_map(&s.surface, &Direction::vertical(&b), &s.section).unwrap();
                prop_assert_eq!(r.iet.perm(), iet.perm());
                prop_assert_eq!(r.iet.lengths(), iet.lengths());
                prop_assert_eq!(r.times, hs);
            }
        }
    }
}
