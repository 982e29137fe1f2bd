use std::cmp::Ordering;
use std::sync::Arc;

use crate::exactnum::{int, merge_bases, rat, FieldElement, RealBasis, Vec2};
use crate::flow::{Section, SectionPiece};
use crate::iet::Iet;

use super::model::{cross_sign, EdgeRef, Polygon, TranslationSurface};
use super::SurfaceError;

fn pt(b: &Arc<RealBasis>, x: i64, y: i64) -> Vec2 {
    Vec2::from_rationals(b, int(x), int(y))
}

/// The unit square with opposite sides glued.
pub fn unit_torus(basis: &Arc<RealBasis>) -> TranslationSurface {
    let square = Polygon::new(vec![pt(basis, 0, 0), pt(basis, 1, 0), pt(basis, 1, 1), pt(basis, 0, 1)], vec![])
        .expect("unit square is a polygon");
    TranslationSurface::new(
        vec![square],
        vec![(EdgeRef::new(0, 0), EdgeRef::new(0, 2)), (EdgeRef::new(0, 1), EdgeRef::new(0, 3))],
    )
    .expect("torus gluing is valid")
    .with_provenance("unit torus")
}

/// A surface built over an IET together with its base section.
#[derive(Debug, Clone)]
pub struct Suspension {
    pub surface: TranslationSurface,
    pub section: Section,
}

/// Rectangle `j` stands on `I_j` with height `t_j` and its top is glued to
/// `T(I_j)` on the base, so the vertical flow returns to the base by `T`
/// after time `t_j` on `I_j`. The right side of rectangle `j` meets the left
/// side of rectangle `j + 1` (cyclically) up to the smaller height; the
/// parts of the sides sticking out above are glued to each other in order.
/// Every rectangle touches its neighbour, so the surface is connected.
pub fn suspend(iet: &Iet, heights: &[FieldElement]) -> Result<Suspension, SurfaceError> {
    let m = iet.m();
    if !iet.perm().is_irreducible() {
        return Err(SurfaceError::ReducibleInput);
    }
    if heights.len() != m {
        return Err(SurfaceError::BadParameters(format!("{} heights for {m} intervals", heights.len())));
    }
    let mut all = iet.lengths().to_vec();
    all.extend_from_slice(heights);
    let (basis, all) = merge_bases(all)?;
    let (lengths, heights) = all.split_at(m);
    for (j, h) in heights.iter().enumerate() {
        if !h.is_positive()? {
            return Err(SurfaceError::NonPositiveHeight(j));
        }
    }
    let zero = FieldElement::zero(&basis);
    let mut starts = Vec::with_capacity(m);
    let mut acc = zero.clone();
    for l in lengths {
        starts.push(acc.clone());
        acc = &acc + l;
    }
    // image of I_j starts after every interval placed before it
    let perm = iet.perm();
    let image_starts: Vec<FieldElement> = (0..m)
        .map(|j| {
            (0..m)
                .filter(|&k| perm.image(k + 1) < perm.image(j + 1))
                .fold(zero.clone(), |a, k| &a + &lengths[k])
        })
        .collect();

    let lt = |a: &FieldElement, b: &FieldElement| -> Result<bool, SurfaceError> { Ok(a.cmp_exact(b)? == Ordering::Less) };
    let inside = |x: &FieldElement, lo: &FieldElement, hi: &FieldElement| -> Result<bool, SurfaceError> {
        Ok(lt(lo, x)? && lt(x, hi)?)
    };
    let sort = |xs: &mut Vec<FieldElement>| -> Result<(), SurfaceError> {
        let mut err = None;
        xs.sort_by(|a, b| {
            a.cmp_exact(b).unwrap_or_else(|e| {
                err = Some(e);
                Ordering::Equal
            })
        });
        xs.dedup();
        err.map_or(Ok(()), |e| Err(e.into()))
    };

    // common height of the side shared by rectangles j and j + 1
    let mut common = Vec::with_capacity(m);
    for j in 0..m {
        let (a, b) = (&heights[j], &heights[(j + 1) % m]);
        common.push(if lt(a, b)? { a.clone() } else { b.clone() });
    }
    let prev = |j: usize| (j + m - 1) % m;
    // leftover side parts (rectangle, lowest y, length) laid end to end
    let mut right_over = Vec::new();
    let mut left_over = Vec::new();
    for j in 0..m {
        if lt(&common[j], &heights[j])? {
            right_over.push((j, common[j].clone(), &heights[j] - &common[j]));
        }
        if lt(&common[prev(j)], &heights[j])? {
            left_over.push((j, common[prev(j)].clone(), &heights[j] - &common[prev(j)]));
        }
    }
    let offsets = |parts: &[(usize, FieldElement, FieldElement)]| {
        let mut acc = zero.clone();
        parts
            .iter()
            .map(|(_, _, len)| {
                let o = acc.clone();
                acc = &acc + len;
                o
            })
            .collect::<Vec<_>>()
    };
    let (right_off, left_off) = (offsets(&right_over), offsets(&left_over));
    let mut breaks: Vec<FieldElement> = right_off.iter().chain(&left_off).cloned().collect();
    sort(&mut breaks)?;

    // side cut heights, ascending, for every rectangle
    let mut right_cuts: Vec<Vec<FieldElement>> = (0..m).map(|j| vec![zero.clone(), common[j].clone(), heights[j].clone()]).collect();
    let mut left_cuts: Vec<Vec<FieldElement>> =
        (0..m).map(|j| vec![zero.clone(), common[prev(j)].clone(), heights[j].clone()]).collect();
    for (parts, offs, cuts) in [(&right_over, &right_off, &mut right_cuts), (&left_over, &left_off, &mut left_cuts)] {
        for ((j, y0, len), o) in parts.iter().zip(offs.iter()) {
            let end = o + len;
            for c in &breaks {
                if inside(c, o, &end)? {
                    cuts[*j].push(&(y0 + c) - o);
                }
            }
        }
    }
    for c in right_cuts.iter_mut().chain(left_cuts.iter_mut()) {
        sort(c)?;
    }

    let mut polygons = Vec::with_capacity(m);
    // (base start of the piece, edge) for bottom and top pieces
    let mut bottoms: Vec<(FieldElement, EdgeRef)> = Vec::new();
    let mut tops: Vec<(FieldElement, EdgeRef)> = Vec::new();
    // (lowest y, edge) of every side edge
    let mut right_edges: Vec<Vec<(FieldElement, usize)>> = vec![Vec::new(); m];
    let mut left_edges: Vec<Vec<(FieldElement, usize)>> = vec![Vec::new(); m];
    for j in 0..m {
        let lo = &starts[j];
        let hi = lo + &lengths[j];
        let shift = &image_starts[j] - lo;
        let mut bottom_cuts = vec![lo.clone()];
        for c in &image_starts {
            if inside(c, lo, &hi)? {
                bottom_cuts.push(c.clone());
            }
        }
        sort(&mut bottom_cuts)?;
        // top points in the rectangle's own x coordinate
        let mut top_cuts = Vec::new();
        for s in &starts {
            let x = s - &shift;
            if inside(&x, lo, &hi)? {
                top_cuts.push(x);
            }
        }
        sort(&mut top_cuts)?;
        top_cuts.reverse();

        let top = heights[j].clone();
        let mut verts = Vec::new();
        for (k, x) in bottom_cuts.iter().enumerate() {
            bottoms.push((x.clone(), EdgeRef::new(j, k)));
            verts.push(Vec2::new(x.clone(), zero.clone()));
        }
        let rc = &right_cuts[j];
        for (i, y) in rc.iter().enumerate() {
            if i + 1 < rc.len() {
                right_edges[j].push((y.clone(), verts.len()));
            }
            verts.push(Vec2::new(hi.clone(), y.clone()));
        }
        // top edge from x runs west; its base range starts at (next cut) + shift
        let mut top_edges = Vec::new();
        for x in &top_cuts {
            top_edges.push(verts.len() - 1);
            verts.push(Vec2::new(x.clone(), top.clone()));
        }
        top_edges.push(verts.len() - 1);
        verts.push(Vec2::new(lo.clone(), top.clone()));
        for (k, &e) in top_edges.iter().enumerate() {
            let west_end = top_cuts.get(k).cloned().unwrap_or_else(|| lo.clone());
            tops.push((&west_end + &shift, EdgeRef::new(j, e)));
        }
        let lc = &left_cuts[j];
        for i in (1..lc.len()).rev() {
            left_edges[j].push((lc[i - 1].clone(), verts.len() - 1));
            if i > 1 {
                verts.push(Vec2::new(lo.clone(), lc[i - 1].clone()));
            }
        }
        polygons.push(Polygon::new(verts, vec![])?);
    }

    let find = |edges: &[(FieldElement, usize)], y: &FieldElement| {
        edges.iter().find(|(lo, _)| lo == y).map(|&(_, e)| e).expect("side cut exists")
    };
    let mut pairings = Vec::new();
    for j in 0..m {
        let k = (j + 1) % m;
        pairings.push((EdgeRef::new(j, find(&right_edges[j], &zero)), EdgeRef::new(k, find(&left_edges[k], &zero))));
    }
    let locate = |parts: &[(usize, FieldElement, FieldElement)], offs: &[FieldElement], c: &FieldElement| {
        parts
            .iter()
            .zip(offs)
            .rev()
            .find(|(_, o)| !lt(c, o).unwrap_or(true))
            .map(|((j, y0, _), o)| (*j, &(y0 + c) - o))
            .expect("break lies in a leftover part")
    };
    for c in &breaks {
        let (jr, yr) = locate(&right_over, &right_off, c);
        let (jl, yl) = locate(&left_over, &left_off, c);
        pairings.push((EdgeRef::new(jr, find(&right_edges[jr], &yr)), EdgeRef::new(jl, find(&left_edges[jl], &yl))));
    }
    for (x, bottom) in &bottoms {
        let top = tops
            .iter()
            .find(|(y, _)| y == x)
            .map(|&(_, e)| e)
            .expect("every base piece is covered by exactly one top piece");
        pairings.push((*bottom, top));
    }
    let surface = TranslationSurface::new(polygons, pairings)?
        .with_provenance(format!("suspension of an IET with permutation {:?}", iet.perm().images()));
    let pieces = (0..m)
        .map(|j| SectionPiece {
            poly: j,
            start: Vec2::new(starts[j].clone(), zero.clone()),
            end: Vec2::new(&starts[j] + &lengths[j], zero.clone()),
        })
        .collect();
    Ok(Suspension {
        surface,
        section: Section::new(pieces, false),
    })
}

/// A pair of parallel slits `A -> A + v` and `B -> B + v` in the unit torus.
/// Crossing one slit from either side continues from the matching side of
/// the other.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitPair {
    pub anchor_a: Vec2,
    pub anchor_b: Vec2,
    pub vector: Vec2,
}

/// A slitted torus drawn on the fundamental domain `[s, s+1] x [0, 1]`, where
/// `s` avoids the horizontal shadow of every slit. `section` is the loop
/// `y = 0`, parametrized from `x = 0`.
#[derive(Debug, Clone)]
pub struct SlittedTorus {
    pub surface: TranslationSurface,
    pub section: Section,
    pub shift: FieldElement,
    pub pairs: Vec<SlitPair>,
}

/// Slits live in the torus `[0,1)^2`: endpoints need `0 <= x <= 1` and
/// `0 < y < 1`, and no two slits may meet, not even at endpoints.
pub fn build_slitted_torus(pairs: &[SlitPair]) -> Result<SlittedTorus, SurfaceError> {
    let mut coords = vec![FieldElement::zero(&RealBasis::rational())];
    for p in pairs {
        for v in [&p.anchor_a, &p.anchor_b, &p.vector] {
            coords.push(v.x.clone());
            coords.push(v.y.clone());
        }
    }
    let (basis, coords) = merge_bases(coords)?;
    let pairs: Vec<SlitPair> = coords[1..]
        .chunks(6)
        .map(|c| SlitPair {
            anchor_a: Vec2::new(c[0].clone(), c[1].clone()),
            anchor_b: Vec2::new(c[2].clone(), c[3].clone()),
            vector: Vec2::new(c[4].clone(), c[5].clone()),
        })
        .collect();
    let zero = FieldElement::zero(&basis);
    let one = FieldElement::from_int(&basis, 1);

    // segments in torus coordinates, slit 2k from A and 2k+1 from B
    let mut segments = Vec::with_capacity(2 * pairs.len());
    for (k, p) in pairs.iter().enumerate() {
        if p.vector.is_zero() {
            return Err(SurfaceError::DegenerateEdge(k));
        }
        for a in [&p.anchor_a, &p.anchor_b] {
            let b = a + &p.vector;
            for q in [a, &b] {
                let ok = q.x.cmp_exact(&zero)? != Ordering::Less
                    && q.x.cmp_exact(&one)? != Ordering::Greater
                    && q.y.cmp_exact(&zero)? == Ordering::Greater
                    && q.y.cmp_exact(&one)? == Ordering::Less;
                if !ok {
                    return Err(SurfaceError::SlitOutsideSquare(k));
                }
            }
            segments.push((a.clone(), b));
        }
    }
    let shadows: Vec<(FieldElement, FieldElement)> = segments
        .iter()
        .map(|(p, q)| match p.x.cmp_exact(&q.x)? {
            Ordering::Greater => Ok((q.x.clone(), p.x.clone())),
            _ => Ok((p.x.clone(), q.x.clone())),
        })
        .collect::<Result<_, SurfaceError>>()?;
    let shift = seam_position(&basis, &shadows)?;

    let moved: Vec<(Vec2, Vec2)> = segments
        .iter()
        .zip(&shadows)
        .map(|((p, q), (_, hi))| {
            if hi.cmp_exact(&shift)? == Ordering::Less {
                let d = Vec2::new(one.clone(), zero.clone());
                Ok((p + &d, q + &d))
            } else {
                Ok((p.clone(), q.clone()))
            }
        })
        .collect::<Result<_, SurfaceError>>()?;
    for i in 0..moved.len() {
        for j in i + 1..moved.len() {
            if segments_meet(&moved[i], &moved[j])? {
                return Err(SurfaceError::OverlappingSlits(i / 2, j / 2));
            }
        }
    }

    let s1 = &shift + &one;
    let corner = |x: &FieldElement, y: &FieldElement| Vec2::new(x.clone(), y.clone());
    let square = vec![corner(&shift, &zero), corner(&s1, &zero), corner(&s1, &one), corner(&shift, &one)];
    let polygon = Polygon::new(square, moved)?;
    let mut pairings = vec![(EdgeRef::new(0, 0), EdgeRef::new(0, 2)), (EdgeRef::new(0, 1), EdgeRef::new(0, 3))];
    for k in 0..pairs.len() {
        let a = 4 + 4 * k;
        let b = a + 2;
        // upper side of A to lower side of B and vice versa
        pairings.push((EdgeRef::new(0, a), EdgeRef::new(0, b + 1)));
        pairings.push((EdgeRef::new(0, a + 1), EdgeRef::new(0, b)));
    }
    let surface = TranslationSurface::new(vec![polygon], pairings)?
        .with_provenance(format!("unit torus with {} slit pairs", pairs.len()));

    let pieces = if shift.is_zero() {
        vec![SectionPiece {
            poly: 0,
            start: corner(&zero, &zero),
            end: corner(&one, &zero),
        }]
    } else {
        vec![
            SectionPiece {
                poly: 0,
                start: corner(&one, &zero),
                end: corner(&s1, &zero),
            },
            SectionPiece {
                poly: 0,
                start: corner(&shift, &zero),
                end: corner(&one, &zero),
            },
        ]
    };
    Ok(SlittedTorus {
        surface,
        section: Section::new(pieces, true),
        shift,
        pairs,
    })
}

/// A rational `s` in `[0, 1)` outside every shadow (with `0` and `1`
/// identified). Prefers `0`, then the simplest fraction in the first gap.
fn seam_position(basis: &Arc<RealBasis>, shadows: &[(FieldElement, FieldElement)]) -> Result<FieldElement, SurfaceError> {
    let covered = |x: &FieldElement| -> Result<bool, SurfaceError> {
        for (lo, hi) in shadows {
            if x.cmp_exact(lo)? != Ordering::Less && x.cmp_exact(hi)? != Ordering::Greater {
                return Ok(true);
            }
        }
        Ok(false)
    };
    let zero = FieldElement::zero(basis);
    if !covered(&zero)? && !covered(&FieldElement::from_int(basis, 1))? {
        return Ok(zero);
    }
    for d in 2..=4096i64 {
        for n in 1..d {
            if num_integer::gcd(n, d) != 1 {
                continue;
            }
            let x = FieldElement::from_rational(basis, rat(n, d));
            if !covered(&x)? {
                return Ok(x);
            }
        }
    }
    Err(SurfaceError::BadParameters("slit shadows leave no room for a vertical seam".into()))
}

/// Closed segments intersect (touching counts).
fn segments_meet(s: &(Vec2, Vec2), t: &(Vec2, Vec2)) -> Result<bool, SurfaceError> {
    let (p, q) = s;
    let (a, b) = t;
    let d = q - p;
    let e = b - a;
    let o1 = cross_sign(&d, &(a - p))?;
    let o2 = cross_sign(&d, &(b - p))?;
    let o3 = cross_sign(&e, &(p - a))?;
    let o4 = cross_sign(&e, &(q - a))?;
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal && o3 != Ordering::Equal && o4 != Ordering::Equal {
        return Ok(true);
    }
    let on = |u: &Vec2, v: &Vec2, x: &Vec2, o: Ordering| -> Result<bool, SurfaceError> {
        if o != Ordering::Equal {
            return Ok(false);
        }
        let within = |c: fn(&Vec2) -> &FieldElement| -> Result<bool, SurfaceError> {
            let (lo, hi) = match c(u).cmp_exact(c(v))? {
                Ordering::Greater => (c(v), c(u)),
                _ => (c(u), c(v)),
            };
            Ok(c(x).cmp_exact(lo)? != Ordering::Less && c(x).cmp_exact(hi)? != Ordering::Greater)
        };
        Ok(within(|w| &w.x)? && within(|w| &w.y)?)
    };
    Ok(on(p, q, a, o1)? || on(p, q, b, o2)? || on(a, b, p, o3)? || on(a, b, q, o4)?)
}

/// The horizontal-vertical surface: an L-shape with outer side `b` and notch
/// `a`, each horizontal or vertical side glued to the opposite one.
pub fn build_hv_surface(a: &FieldElement, b: &FieldElement) -> Result<TranslationSurface, SurfaceError> {
    let (basis, ab) = merge_bases(vec![a.clone(), b.clone()])?;
    let (a, b) = (&ab[0], &ab[1]);
    if !a.is_positive()? || a.cmp_exact(b)? != Ordering::Less {
        return Err(SurfaceError::BadParameters(format!("need 0 < a < b, got a = {a}, b = {b}")));
    }
    let z = FieldElement::zero(&basis);
    let c = b - a;
    let p = |x: &FieldElement, y: &FieldElement| Vec2::new(x.clone(), y.clone());
    let verts = vec![
        p(&z, &z),
        p(&c, &z),
        p(b, &z),
        p(b, &c),
        p(&c, &c),
        p(&c, b),
        p(&z, b),
        p(&z, &c),
    ];
    let polygon = Polygon::new(verts, vec![])?;
    let e = |i| EdgeRef::new(0, i);
    TranslationSurface::new(vec![polygon], vec![(e(0), e(5)), (e(1), e(3)), (e(2), e(7)), (e(4), e(6))])
        .map(|s| s.with_provenance(format!("horizontal-vertical L-shape, a = {a}, b = {b}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::iet::Iet;

    fn q(b: &Arc<RealBasis>, n: i64, d: i64) -> FieldElement {
        FieldElement::from_rational(b, rat(n, d))
    }

    fn v(b: &Arc<RealBasis>, x: (i64, i64), y: (i64, i64)) -> Vec2 {
        Vec2::from_rationals(b, rat(x.0, x.1), rat(y.0, y.1))
    }

    #[test]
    fn torus_has_genus_one() {
        let t = unit_torus(&RealBasis::rational());
        assert_eq!(t.genus().unwrap(), 1);
        assert!(t.cone_points().is_empty());
    }

    #[test]
    fn rotation_suspension_is_a_torus() {
        let iet = Iet::rational(&[(2, 5), (3, 5)], &[2, 1]).unwrap();
        let b = iet.basis().clone();
        let s = suspend(&iet, &[q(&b, 1, 1), q(&b, 1, 1)]).unwrap();
        assert_eq!(s.surface.genus().unwrap(), 1);
        assert_eq!(s.surface.area().unwrap(), q(&b, 1, 1));
    }

    #[test]
    fn suspension_area_and_rejections() {
        let iet = Iet::rational(&[(1, 4), (1, 4), (1, 4), (1, 4)], &[4, 2, 3, 1]).unwrap();
        let b = iet.basis().clone();
        let hs = [q(&b, 1, 1), q(&b, 2, 1), q(&b, 1, 2), q(&b, 3, 2)];
        let s = suspend(&iet, &hs).unwrap();
        assert_eq!(s.surface.area().unwrap(), q(&b, 5, 4));
        assert!(s.surface.genus().is_ok());
        let id = Iet::rational(&[(1, 2), (1, 2)], &[1, 2]).unwrap();
        assert!(matches!(suspend(&id, &hs[..2]), Err(SurfaceError::ReducibleInput)));
        let bad = [q(&b, 1, 1), q(&b, 0, 1), q(&b, 1, 1), q(&b, 1, 1)];
        assert!(matches!(suspend(&iet, &bad), Err(SurfaceError::NonPositiveHeight(1))));
    }

    #[test]
    fn suspension_accepts_heights_over_a_larger_basis() {
        let iet = Iet::rational(&[(1, 3), (2, 3)], &[2, 1]).unwrap();
        let hb = RealBasis::new([("beta", 0.618)]).unwrap();
        let beta = FieldElement::named(&hb, "beta").unwrap();
        let s = suspend(&iet, &[beta.clone(), &beta + &FieldElement::from_int(&hb, 1)]).unwrap();
        assert_eq!(s.surface.basis().labels(), ["1", "beta"]);
    }

    #[test]
    fn empty_slit_list_is_the_torus() {
        let t = build_slitted_torus(&[]).unwrap();
        assert_eq!(t.surface.genus().unwrap(), 1);
        assert!(t.shift.is_zero());
        assert_eq!(t.section.pieces().len(), 1);
    }

    #[test]
    fn one_horizontal_pair_gives_genus_two() {
        let b = RealBasis::rational();
        let pair = SlitPair {
            anchor_a: v(&b, (1, 4), (1, 4)),
            anchor_b: v(&b, (1, 4), (3, 4)),
            vector: v(&b, (1, 3), (0, 1)),
        };
        let t = build_slitted_torus(&[pair]).unwrap();
        assert_eq!(t.surface.genus().unwrap(), 2);
        assert_eq!(t.surface.cone_points().len(), 2);
        assert!(t.surface.cone_points().iter().all(|c| c.angle_over_pi() == 4));
    }

    #[test]
    fn slits_touching_the_vertical_sides_move_the_seam() {
        let b = RealBasis::rational();
        let pair = SlitPair {
            anchor_a: v(&b, (0, 1), (1, 4)),
            anchor_b: v(&b, (3, 4), (1, 2)),
            vector: v(&b, (1, 4), (0, 1)),
        };
        let t = build_slitted_torus(&[pair]).unwrap();
        assert_eq!(t.shift, q(&b, 1, 2));
        assert_eq!(t.surface.genus().unwrap(), 2);
        assert_eq!(t.section.pieces().len(), 2);
    }

    #[test]
    fn slit_validation() {
        let b = RealBasis::rational();
        let out = SlitPair {
            anchor_a: v(&b, (1, 4), (0, 1)),
            anchor_b: v(&b, (1, 4), (1, 2)),
            vector: v(&b, (1, 4), (0, 1)),
        };
        assert!(matches!(build_slitted_torus(&[out]), Err(SurfaceError::SlitOutsideSquare(0))));
        let crossing = SlitPair {
            anchor_a: v(&b, (1, 4), (1, 4)),
            anchor_b: v(&b, (1, 2), (1, 8)),
            vector: v(&b, (0, 1), (1, 4)),
        };
        let flat = SlitPair {
            anchor_a: v(&b, (1, 8), (1, 3)),
            anchor_b: v(&b, (1, 8), (2, 3)),
            vector: v(&b, (1, 2), (0, 1)),
        };
        assert!(matches!(build_slitted_torus(&[crossing, flat]), Err(SurfaceError::OverlappingSlits(0, 1))));
    }

    #[test]
    fn hv_surface_is_genus_two() {
        let b = RealBasis::new([("beta", 2f64.sqrt())]).unwrap();
        let one = FieldElement::from_int(&b, 1);
        for bb in [FieldElement::from_int(&b, 2), &one + &FieldElement::named(&b, "beta").unwrap()] {
            let s = build_hv_surface(&one, &bb).unwrap();
            assert_eq!(s.genus().unwrap(), 2);
            assert_eq!(s.cone_points().len(), 1);
            assert_eq!(s.cone_points()[0].angle_over_pi(), 6);
        }
        assert!(matches!(build_hv_surface(&one, &one), Err(SurfaceError::BadParameters(_))));
    }
}
