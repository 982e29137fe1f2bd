//! Rational polygons, their reflection groups and the unfolded translation
//! surface.
//!
//! Angles and directions are carried as rationals in units of `pi`, reduced
//! mod 2. A group element acts on directions either as `theta -> theta + c`
//! or as `theta -> s - theta`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{int, ExactError, FieldElement, Rational, RealBasis, Vec2};

use super::cyclotomic::CosTable;
use super::{EdgeRef, Polygon, SurfaceError, TranslationSurface};

fn mod2(r: &Rational) -> Rational {
    let two = int(2);
    r - &two * (r / &two).floor()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupElement {
    /// `theta -> theta + c`
    Rotation(Rational),
    /// `theta -> s - theta`, the reflection in the line at angle `s/2`
    Reflection(Rational),
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::Rotation(Rational::zero())
    }

    pub fn apply(&self, theta: &Rational) -> Rational {
        match self {
            GroupElement::Rotation(c) => mod2(&(theta + c)),
            GroupElement::Reflection(s) => mod2(&(s - theta)),
        }
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, other) {
            (Rotation(a), Rotation(b)) => Rotation(mod2(&(a + b))),
            (Rotation(a), Reflection(s)) => Reflection(mod2(&(s + a))),
            (Reflection(s), Rotation(b)) => Reflection(mod2(&(s - b))),
            (Reflection(s), Reflection(t)) => Rotation(mod2(&(s - t))),
        }
    }

    pub fn preserves_orientation(&self) -> bool {
        matches!(self, GroupElement::Rotation(_))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Rotation(c) => write!(f, "rot({c}pi)"),
            GroupElement::Reflection(s) => write!(f, "refl({s}pi - .)"),
        }
    }
}

/// The group generated by the reflections in the sides of a polygon, acting
/// on directions. Elements are listed in breadth-first order from the
/// identity.
#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    pub generators: Vec<GroupElement>,
    pub elements: Vec<GroupElement>,
}

impl CoxeterGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|h| h == g)
    }
}

/// A polygon given by its interior angles (as fractions of `pi`) and side
/// lengths, traversed counterclockwise with side `i` leaving vertex `i` and
/// the first side pointing east.
#[derive(Debug, Clone)]
pub struct RationalPolygon {
    angles: Vec<Rational>,
    lengths: Vec<FieldElement>,
    directions: Vec<Rational>,
    group: CoxeterGroup,
    /// `edge_vectors[g][i]`: side `i` under group element `g`, as a linear image
    edge_vectors: Vec<Vec<Vec2>>,
    basis: Arc<RealBasis>,
}

impl RationalPolygon {
    pub fn new(angles: Vec<Rational>, lengths: Vec<FieldElement>) -> Result<Self, SurfaceError> {
        let n = angles.len();
        if n < 3 || lengths.len() != n {
            return Err(SurfaceError::BadPolygon(format!("{n} angles and {} lengths", lengths.len())));
        }
        for a in &angles {
            if !a.is_positive() || *a >= int(2) {
                return Err(SurfaceError::NonRationalAngle(a.to_string()));
            }
        }
        let sum: Rational = angles.iter().sum();
        if sum != int(n as i64 - 2) {
            return Err(SurfaceError::BadPolygon(format!("angles sum to {sum}pi, expected {}pi", n - 2)));
        }
        let len_basis = lengths[0].basis().clone();
        for (i, l) in lengths.iter().enumerate() {
            if **l.basis() != *len_basis {
                return Err(ExactError::BasisMismatch.into());
            }
            if !l.is_positive()? {
                return Err(SurfaceError::BadPolygon(format!("side {i} has non-positive length")));
            }
        }
        let mut directions = vec![Rational::zero()];
        for a in &angles[1..] {
            let prev = directions.last().expect("nonempty").clone();
            directions.push(mod2(&(prev + Rational::one() - a)));
        }
        let group = coxeter_from_directions(&directions);

        let denom_lcm = angles.iter().fold(num_bigint::BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let m = 4 * denom_lcm.to_usize().ok_or_else(|| SurfaceError::NonRationalAngle("denominator too large".into()))?;
        let mut table = CosTable::new(m)?;
        let trig: Vec<Vec<(FieldElement, FieldElement)>> = group
            .elements
            .iter()
            .map(|g| directions.iter().map(|phi| table.cos_sin_pi(&g.apply(phi))).collect())
            .collect();
        let trig_rational = trig.iter().flatten().all(|(c, s)| c.is_rational() && s.is_rational());
        let lengths_rational = lengths.iter().all(FieldElement::is_rational);
        let edge_vectors_raw: Vec<Vec<Vec2>> = if trig_rational {
            trig.iter()
                .map(|row| {
                    row.iter()
                        .zip(&lengths)
                        .map(|((c, s), l)| {
                            let (c, s) = (c.as_rational().expect("rational"), s.as_rational().expect("rational"));
                            Vec2::new(l.scale(c), l.scale(s))
                        })
                        .collect()
                })
                .collect()
        } else if lengths_rational {
            trig.iter()
                .map(|row| {
                    row.iter()
                        .zip(&lengths)
                        .map(|((c, s), l)| {
                            let q = l.as_rational().expect("rational");
                            Vec2::new(c.scale(q), s.scale(q))
                        })
                        .collect()
                })
                .collect()
        } else {
            return Err(SurfaceError::Unrepresentable(
                "irrational side lengths combined with irrational direction cosines".into(),
            ));
        };
        let basis = prune_basis(edge_vectors_raw.iter().flatten())?;
        let edge_vectors: Vec<Vec<Vec2>> = edge_vectors_raw
            .iter()
            .map(|row| row.iter().map(|v| v.rebase(&basis)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;

        let closure = edge_vectors[0].iter().fold(Vec2::zero(&basis), |acc, v| &acc + v);
        if !closure.is_zero() {
            return Err(SurfaceError::BadPolygon(format!("sides do not close up (gap {closure})")));
        }
        let poly = RationalPolygon {
            angles,
            lengths,
            directions,
            group,
            edge_vectors,
            basis,
        };
        poly.check_simple()?;
        Ok(poly)
    }

    /// Convenience constructor from `(p, q)` angle fractions and rational
    /// lengths.
    pub fn from_fractions(angles: &[(i64, i64)], lengths: &[(i64, i64)]) -> Result<Self, SurfaceError> {
        for &(p, q) in angles {
            if q <= 0 || p <= 0 {
                return Err(SurfaceError::NonRationalAngle(format!("{p}/{q}")));
            }
        }
        let b = RealBasis::rational();
        Self::new(
            angles.iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect(),
            lengths
                .iter()
                .map(|&(p, q)| FieldElement::from_rational(&b, Rational::new(p.into(), q.into())))
                .collect(),
        )
    }

    pub fn angles(&self) -> &[Rational] {
        &self.angles
    }

    pub fn lengths(&self) -> &[FieldElement] {
        &self.lengths
    }

    /// Side directions in units of `pi`.
    pub fn directions(&self) -> &[Rational] {
        &self.directions
    }

    pub fn group(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        &self.basis
    }

    /// Vertices of the image of the polygon under the linear part of group
    /// element `g`, in the original vertex order.
    fn image_vertices(&self, g: usize) -> Vec<Vec2> {
        let mut out = vec![Vec2::zero(&self.basis)];
        for v in &self.edge_vectors[g][..self.angles.len() - 1] {
            let next = out.last().expect("nonempty") + v;
            out.push(next);
        }
        out
    }

    pub fn vertices(&self) -> Vec<Vec2> {
        self.image_vertices(0)
    }

    pub fn area(&self) -> Result<FieldElement, ExactError> {
        Polygon::new(self.vertices(), vec![])
            .map_err(|e| ExactError::InvalidBasis(e.to_string()))?
            .area()
    }

    fn check_simple(&self) -> Result<(), SurfaceError> {
        let pts: Vec<[f64; 2]> = self.vertices().iter().map(Vec2::to_f64).collect();
        let n = pts.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                    return Err(SurfaceError::BadPolygon(format!("sides {i} and {j} intersect")));
                }
            }
        }
        Ok(())
    }
}

fn segments_intersect(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let (d1, d2) = (orient(a, b, c), orient(a, b, d));
    let (d3, d4) = (orient(c, d, a), orient(c, d, b));
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Drops basis elements that no coordinate uses.
fn prune_basis<'a>(vs: impl Iterator<Item = &'a Vec2> + Clone) -> Result<Arc<RealBasis>, ExactError> {
    let first = vs.clone().next().ok_or(ExactError::EmptyInput)?;
    let full = first.basis().clone();
    let mut used = vec![false; full.len()];
    used[0] = true;
    for v in vs {
        for x in [&v.x, &v.y] {
            for (i, c) in x.coords().iter().enumerate() {
                used[i] |= !c.is_zero();
            }
        }
    }
    let labels = (0..full.len()).filter(|&i| used[i]).map(|i| full.labels()[i].clone()).collect();
    let hints = (0..full.len()).filter(|&i| used[i]).map(|i| full.hints()[i]).collect();
    RealBasis::from_parts(labels, hints)
}

fn coxeter_from_directions(directions: &[Rational]) -> CoxeterGroup {
    let generators: Vec<GroupElement> = directions
        .iter()
        .map(|phi| GroupElement::Reflection(mod2(&(phi * int(2)))))
        .collect();
    let mut elements = vec![GroupElement::identity()];
    let mut seen: HashMap<GroupElement, usize> = HashMap::from([(GroupElement::identity(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for r in &generators {
            let h = elements[i].compose(r);
            if !seen.contains_key(&h) {
                seen.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
            }
        }
    }
    CoxeterGroup { generators, elements }
}

pub fn coxeter_group(polygon: &RationalPolygon) -> CoxeterGroup {
    polygon.group.clone()
}

/// One copy of the polygon per group element; side `j` of copy `g` is glued
/// to side `j` of copy `g r_j`, where `r_j` is the reflection in side `j`.
/// Copies are laid out left to right.
pub fn unfold(polygon: &RationalPolygon) -> Result<TranslationSurface, SurfaceError> {
    let n = polygon.angles.len();
    let group = &polygon.group;
    let basis = &polygon.basis;
    let width = (0..group.order())
        .flat_map(|g| polygon.image_vertices(g))
        .map(|v| v.x.to_f64())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let step = int((width.1 - width.0).ceil() as i64 + 1);

    // copy side index of polygon side j
    let side = |g: &GroupElement, j: usize| if g.preserves_orientation() { j } else { n - 1 - j };
    let mut polygons = Vec::with_capacity(group.order());
    for (k, g) in group.elements.iter().enumerate() {
        let offset = Vec2::new(FieldElement::from_rational(basis, &step * int(k as i64)), FieldElement::zero(basis));
        let w: Vec<Vec2> = polygon.image_vertices(k).iter().map(|v| v + &offset).collect();
        let ccw = if g.preserves_orientation() {
            w
        } else {
            (0..n).map(|i| w[(n - i) % n].clone()).collect()
        };
        polygons.push(Polygon::new(ccw, vec![])?);
    }
    let mut pairings = Vec::new();
    for (a, g) in group.elements.iter().enumerate() {
        for (j, r) in group.generators.iter().enumerate() {
            let h = g.compose(r);
            let b = group.index_of(&h).expect("group is closed");
            if (a, j) < (b, j) {
                pairings.push((EdgeRef::new(a, side(g, j)), EdgeRef::new(b, side(&h, j))));
            }
        }
    }
    Ok(TranslationSurface::new(polygons, pairings)?.with_provenance(format!(
        "unfolding of a rational polygon with angles {:?} (units of pi)",
        polygon.angles.iter().map(ToString::to_string).collect::<Vec<_>>()
    )))
}
