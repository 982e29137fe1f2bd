use std::cmp::Ordering;
use std::sync::Arc;

use crate::exactnum::{ExactError, FieldElement, Rational, RealBasis, Vec2, HINT_TIE_TOLERANCE};

use super::SurfaceError;

/// A planar piece of a translation surface.
///
/// The boundary is a counterclockwise closed walk. It may revisit points, so
/// an inlet cut in from the boundary is two consecutive edges along the same
/// segment. Interior slits are segments `p -> q` strictly inside; each
/// contributes the half-edges `p -> q` and `q -> p`, with the region on the
/// left of both.
///
/// Edge and point indices: `0..n` are boundary edges and vertices, edge `i`
/// running from vertex `i` to vertex `i+1`; slit `k` owns edges and points
/// `n+2k` (`p -> q`, point `p`) and `n+2k+1` (`q -> p`, point `q`). Every edge
/// starts at the point with its own index.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Vec2>,
    slits: Vec<(Vec2, Vec2)>,
    points_f: Vec<[f64; 2]>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>, slits: Vec<(Vec2, Vec2)>) -> Result<Self, SurfaceError> {
        if vertices.len() < 3 {
            return Err(SurfaceError::BadPolygon(format!("{} vertices", vertices.len())));
        }
        let mut points_f: Vec<[f64; 2]> = vertices.iter().map(Vec2::to_f64).collect();
        for (p, q) in &slits {
            points_f.push(p.to_f64());
            points_f.push(q.to_f64());
        }
        let poly = Polygon { vertices, slits, points_f };
        for e in 0..poly.edge_count() {
            if poly.edge_vector(e).is_zero() {
                return Err(SurfaceError::DegenerateEdge(e));
            }
        }
        Ok(poly)
    }

    pub fn boundary_len(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn slits(&self) -> &[(Vec2, Vec2)] {
        &self.slits
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len() + 2 * self.slits.len()
    }

    pub fn point(&self, id: usize) -> &Vec2 {
        let n = self.vertices.len();
        if id < n {
            &self.vertices[id]
        } else {
            let (p, q) = &self.slits[(id - n) / 2];
            if (id - n) % 2 == 0 {
                p
            } else {
                q
            }
        }
    }

    pub fn point_f(&self, id: usize) -> [f64; 2] {
        self.points_f[id]
    }

    pub fn edge_start(&self, e: usize) -> usize {
        e
    }

    pub fn edge_end(&self, e: usize) -> usize {
        let n = self.vertices.len();
        if e < n {
            (e + 1) % n
        } else {
            n + ((e - n) ^ 1)
        }
    }

    /// The edge ending at point `id`.
    pub fn incoming_edge(&self, id: usize) -> usize {
        let n = self.vertices.len();
        if id < n {
            (id + n - 1) % n
        } else {
            self.edge_end(id)
        }
    }

    /// The other half-edge along the same slit, if `e` is a slit edge.
    pub fn slit_twin(&self, e: usize) -> Option<usize> {
        (e >= self.vertices.len()).then(|| self.edge_end(e))
    }

    pub fn edge_vector(&self, e: usize) -> Vec2 {
        self.point(self.edge_end(e)) - self.point(self.edge_start(e))
    }

    pub fn edge_f(&self, e: usize) -> ([f64; 2], [f64; 2]) {
        (self.points_f[self.edge_start(e)], self.points_f[self.edge_end(e)])
    }

    /// Signed area of the boundary walk (slits have none).
    pub fn area(&self) -> Result<FieldElement, ExactError> {
        let b = self.vertices[0].basis().clone();
        let n = self.vertices.len();
        let mut acc = FieldElement::zero(&b);
        // shoelace relative to vertex 0 keeps one factor an edge difference
        for i in 1..n - 1 {
            let u = &self.vertices[i] - &self.vertices[0];
            let v = &self.vertices[i + 1] - &self.vertices[0];
            acc = &acc + &u.try_cross(&v)?;
        }
        Ok(acc.scale(&crate::exactnum::rat(1, 2)))
    }

    pub fn area_f(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.points_f[i];
            let b = self.points_f[(i + 1) % n];
            acc += a[0] * b[1] - a[1] * b[0];
        }
        acc / 2.0
    }

    pub fn rebase(&self, target: &Arc<RealBasis>) -> Result<Polygon, SurfaceError> {
        let vs = self.vertices.iter().map(|v| v.rebase(target)).collect::<Result<_, _>>()?;
        let ss = self
            .slits
            .iter()
            .map(|(p, q)| Ok((p.rebase(target)?, q.rebase(target)?)))
            .collect::<Result<_, ExactError>>()?;
        Polygon::new(vs, ss)
    }
}

/// A half-edge: polygon index and edge index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub poly: usize,
    pub edge: usize,
}

impl EdgeRef {
    pub fn new(poly: usize, edge: usize) -> Self {
        EdgeRef { poly, edge }
    }
}

/// A corner: the wedge at point `point` of polygon `poly`, swept
/// counterclockwise from the outgoing edge to the reversed incoming edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Corner {
    pub poly: usize,
    pub point: usize,
}

/// A class of identified corners with total angle `2 pi * multiplicity`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub corners: Vec<Corner>,
    pub multiplicity: usize,
}

impl VertexClass {
    /// Total angle as a multiple of `pi`.
    pub fn angle_over_pi(&self) -> usize {
        2 * self.multiplicity
    }

    pub fn is_cone_point(&self) -> bool {
        self.multiplicity > 1
    }
}

/// Polygons glued along edges by translations.
#[derive(Debug, Clone)]
pub struct TranslationSurface {
    basis: Arc<RealBasis>,
    polygons: Vec<Polygon>,
    pairings: Vec<(EdgeRef, EdgeRef)>,
    partner: Vec<Vec<EdgeRef>>,
    classes: Vec<VertexClass>,
    class_of: Vec<Vec<usize>>,
    provenance: Option<String>,
}

impl TranslationSurface {
    /// Validates the gluing and computes vertex classes.
    pub fn new(polygons: Vec<Polygon>, pairings: Vec<(EdgeRef, EdgeRef)>) -> Result<Self, SurfaceError> {
        let basis = polygons
            .first()
            .ok_or_else(|| SurfaceError::BadPolygon("no polygons".into()))?
            .vertices[0]
            .basis()
            .clone();
        for poly in &polygons {
            for id in 0..poly.edge_count() {
                if **poly.point(id).basis() != *basis {
                    return Err(ExactError::BasisMismatch.into());
                }
            }
        }
        let mut partner: Vec<Vec<Option<EdgeRef>>> = polygons.iter().map(|p| vec![None; p.edge_count()]).collect();
        for &(a, b) in &pairings {
            for r in [a, b] {
                if r.poly >= polygons.len() || r.edge >= polygons[r.poly].edge_count() {
                    return Err(SurfaceError::NoSuchEdge(r.poly, r.edge));
                }
            }
            if a == b {
                return Err(SurfaceError::EdgePairedTwice(a.poly, a.edge));
            }
            for (x, y) in [(a, b), (b, a)] {
                if partner[x.poly][x.edge].replace(y).is_some() {
                    return Err(SurfaceError::EdgePairedTwice(x.poly, x.edge));
                }
            }
            let va = polygons[a.poly].edge_vector(a.edge);
            let vb = polygons[b.poly].edge_vector(b.edge);
            if !(&va + &vb).is_zero() {
                return Err(SurfaceError::NonTranslationPairing(a.poly, a.edge, b.poly, b.edge));
            }
        }
        let partner: Vec<Vec<EdgeRef>> = partner
            .into_iter()
            .enumerate()
            .map(|(p, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(e, x)| x.ok_or(SurfaceError::UnpairedEdge(p, e)))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        check_connected(&polygons, &partner)?;
        let mut surface = TranslationSurface {
            basis,
            polygons,
            pairings,
            partner,
            classes: Vec::new(),
            class_of: Vec::new(),
            provenance: None,
        };
        surface.compute_classes()?;
        Ok(surface)
    }

    pub fn with_provenance(mut self, text: impl Into<String>) -> Self {
        self.provenance = Some(text.into());
        self
    }

    pub fn provenance(&self) -> Option<&str> {
        self.provenance.as_deref()
    }

    pub fn basis(&self) -> &Arc<RealBasis> {
        &self.basis
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn pairings(&self) -> &[(EdgeRef, EdgeRef)] {
        &self.pairings
    }

    pub fn partner(&self, e: EdgeRef) -> EdgeRef {
        self.partner[e.poly][e.edge]
    }

    /// Translation carrying edge `e` onto its partner (points leaving through
    /// `e` reappear at `x + translation(e)`).
    pub fn translation(&self, e: EdgeRef) -> Vec2 {
        let f = self.partner(e);
        let pf = &self.polygons[f.poly];
        let pe = &self.polygons[e.poly];
        pf.point(pf.edge_start(f.edge)) - pe.point(pe.edge_end(e.edge))
    }

    pub fn translation_f(&self, e: EdgeRef) -> [f64; 2] {
        let f = self.partner(e);
        let a = self.polygons[f.poly].point_f(f.edge);
        let pe = &self.polygons[e.poly];
        let b = pe.point_f(pe.edge_end(e.edge));
        [a[0] - b[0], a[1] - b[1]]
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn class_of(&self, c: Corner) -> usize {
        self.class_of[c.poly][c.point]
    }

    pub fn cone_points(&self) -> Vec<&VertexClass> {
        self.classes.iter().filter(|c| c.is_cone_point()).collect()
    }

    /// From `2 pi (2g - 2) = sum (angle - 2 pi)`.
    pub fn genus(&self) -> Result<usize, SurfaceError> {
        let excess: usize = self.classes.iter().map(|c| c.multiplicity - 1).sum();
        if excess % 2 != 0 {
            return Err(SurfaceError::NonIntegerGenus(excess));
        }
        Ok(1 + excess / 2)
    }

    pub fn area(&self) -> Result<FieldElement, ExactError> {
        let mut acc = FieldElement::zero(&self.basis);
        for p in &self.polygons {
            acc = &acc + &p.area()?;
        }
        Ok(acc)
    }

    pub fn area_f(&self) -> f64 {
        self.polygons.iter().map(Polygon::area_f).sum()
    }

    /// The corner following `c` counterclockwise around its vertex.
    pub fn next_corner(&self, c: Corner) -> Corner {
        let poly = &self.polygons[c.poly];
        let f = self.partner(EdgeRef::new(c.poly, poly.incoming_edge(c.point)));
        Corner {
            poly: f.poly,
            point: self.polygons[f.poly].edge_start(f.edge),
        }
    }

    /// Outgoing edge vector and reversed incoming edge vector bounding `c`.
    pub fn corner_rays(&self, c: Corner) -> (Vec2, Vec2) {
        let poly = &self.polygons[c.poly];
        let u = poly.edge_vector(c.point);
        let w = poly.edge_vector(poly.incoming_edge(c.point));
        (u, -&w)
    }

    /// Whether the half-open sweep of corner `c` contains direction `d`.
    pub fn corner_contains(&self, c: Corner, d: &Vec2) -> Result<bool, ExactError> {
        let (u, v) = self.corner_rays(c);
        sweep_contains(&u, &v, d)
    }

    pub fn corner_contains_f(&self, c: Corner, d: [f64; 2]) -> bool {
        let poly = &self.polygons[c.poly];
        let (a, b) = poly.edge_f(c.point);
        let (p, q) = poly.edge_f(poly.incoming_edge(c.point));
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [p[0] - q[0], p[1] - q[1]];
        sweep_contains_f(u, v, d)
    }

    fn compute_classes(&mut self) -> Result<(), SurfaceError> {
        let east = Vec2::from_rationals(&self.basis, crate::exactnum::int(1), crate::exactnum::int(0));
        let mut class_of: Vec<Vec<usize>> = self.polygons.iter().map(|p| vec![usize::MAX; p.edge_count()]).collect();
        let mut classes = Vec::new();
        for (pi, poly) in self.polygons.iter().enumerate() {
            for point in 0..poly.edge_count() {
                if class_of[pi][point] != usize::MAX {
                    continue;
                }
                let start = Corner { poly: pi, point };
                let mut corners = Vec::new();
                let mut c = start;
                loop {
                    class_of[c.poly][c.point] = classes.len();
                    corners.push(c);
                    c = self.next_corner(c);
                    if c == start {
                        break;
                    }
                }
                let mut multiplicity = 0;
                for &c in &corners {
                    if self.corner_contains(c, &east)? {
                        multiplicity += 1;
                    }
                }
                if multiplicity == 0 {
                    return Err(SurfaceError::BadPolygon(format!("vertex class at {start:?} has no angle")));
                }
                corners.sort();
                classes.push(VertexClass { corners, multiplicity });
            }
        }
        self.classes = classes;
        self.class_of = class_of;
        Ok(())
    }
}

fn check_connected(polygons: &[Polygon], partner: &[Vec<EdgeRef>]) -> Result<(), SurfaceError> {
    let mut parent: Vec<usize> = (0..polygons.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (p, row) in partner.iter().enumerate() {
        for f in row {
            let (a, b) = (find(&mut parent, p), find(&mut parent, f.poly));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    if (0..polygons.len()).all(|i| find(&mut parent, i) == root) {
        Ok(())
    } else {
        Err(SurfaceError::Disconnected)
    }
}

/// If `a = r * b` for rational `r`, returns `r`.
pub(crate) fn parallel_ratio(a: &Vec2, b: &Vec2) -> Option<Rational> {
    let r = if !b.x.is_zero() {
        a.x.rational_ratio(&b.x)?
    } else if a.x.is_zero() {
        a.y.rational_ratio(&b.y)?
    } else {
        return None;
    };
    (b.y.scale(&r) == a.y).then_some(r)
}

/// Sign of `a x b`. Exact when the product is representable or the vectors
/// are rational multiples of each other; otherwise from float hints, refusing
/// near-ties.
pub fn cross_sign(a: &Vec2, b: &Vec2) -> Result<Ordering, ExactError> {
    match a.try_cross(b) {
        Ok(c) => c.sign(),
        Err(ExactError::UnrepresentableProduct(_)) => {
            if parallel_ratio(a, b).is_some() {
                return Ok(Ordering::Equal);
            }
            let [ax, ay] = a.to_f64();
            let [bx, by] = b.to_f64();
            let c = ax * by - ay * bx;
            let scale = (ax * by).abs() + (ay * bx).abs();
            if c.abs() > HINT_TIE_TOLERANCE * scale {
                Ok(c.partial_cmp(&0.0).unwrap_or(Ordering::Equal))
            } else {
                Err(ExactError::AmbiguousComparison(c))
            }
        }
        Err(e) => Err(e),
    }
}

/// `0` when `x` lies in `[0, pi)` measured counterclockwise from `u`.
fn half(u: &Vec2, x: &Vec2) -> Result<u8, ExactError> {
    Ok(match cross_sign(u, x)? {
        Ordering::Greater => 0,
        Ordering::Less => 1,
        Ordering::Equal => {
            // parallel: compare signs on a coordinate where `u` is nonzero
            let (xu, uu) = if u.x.is_zero() { (&x.y, &u.y) } else { (&x.x, &u.x) };
            u8::from(xu.sign()? != uu.sign()?)
        }
    })
}

fn angle_is_zero(u: &Vec2, x: &Vec2) -> Result<bool, ExactError> {
    Ok(cross_sign(u, x)? == Ordering::Equal && half(u, x)? == 0)
}

/// Whether `d` lies in the half-open counterclockwise sweep `[u, v)`. When
/// `v` points along `u` the sweep is the full turn.
pub fn sweep_contains(u: &Vec2, v: &Vec2, d: &Vec2) -> Result<bool, ExactError> {
    if angle_is_zero(u, v)? || angle_is_zero(u, d)? {
        return Ok(true);
    }
    let (hd, hv) = (half(u, d)?, half(u, v)?);
    if hd != hv {
        return Ok(hd < hv);
    }
    Ok(cross_sign(d, v)? == Ordering::Greater)
}

/// Float twin of [`sweep_contains`].
pub fn sweep_contains_f(u: [f64; 2], v: [f64; 2], d: [f64; 2]) -> bool {
    let ang = |x: [f64; 2]| {
        let a = (u[0] * x[1] - u[1] * x[0]).atan2(u[0] * x[0] + u[1] * x[1]);
        if a < -1e-12 {
            a + std::f64::consts::TAU
        } else {
            a.max(0.0)
        }
    };
    let av = ang(v);
    let ad = ang(d);
    av < 1e-12 || ad < 1e-12 || ad < av - 1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn v(b: &Arc<RealBasis>, x: i64, y: i64) -> Vec2 {
        Vec2::from_rationals(b, int(x), int(y))
    }

    #[test]
    fn sweep_quadrants() {
        let b = RealBasis::rational();
        let (e, n, w, s) = (v(&b, 1, 0), v(&b, 0, 1), v(&b, -1, 0), v(&b, 0, -1));
        assert!(sweep_contains(&e, &n, &e).unwrap());
        assert!(!sweep_contains(&e, &n, &n).unwrap());
        assert!(sweep_contains(&e, &n, &v(&b, 1, 1)).unwrap());
        assert!(!sweep_contains(&e, &n, &s).unwrap());
        // reflex wedge from north around to east
        assert!(sweep_contains(&n, &e, &w).unwrap());
        assert!(sweep_contains(&n, &e, &s).unwrap());
        assert!(!sweep_contains(&n, &e, &e).unwrap());
        // full turn
        for d in [&e, &n, &w, &s] {
            assert!(sweep_contains(&e, &e, d).unwrap());
        }
    }

    #[test]
    fn sweep_float_agrees() {
        let b = RealBasis::rational();
        let dirs: Vec<Vec2> = [(1, 0), (1, 2), (0, 1), (-3, 1), (-1, 0), (-1, -1), (0, -1), (2, -1)]
            .iter()
            .map(|&(x, y)| v(&b, x, y))
            .collect();
        for u in &dirs {
            for w in &dirs {
                for d in &dirs {
                    assert_eq!(
                        sweep_contains(u, w, d).unwrap(),
                        sweep_contains_f(u.to_f64(), w.to_f64(), d.to_f64()),
                        "{u} {w} {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn irrational_cross_signs() {
        let b = RealBasis::new([("s2", 2f64.sqrt()), ("s3", 3f64.sqrt())]).unwrap();
        let s2 = FieldElement::named(&b, "s2").unwrap();
        let s3 = FieldElement::named(&b, "s3").unwrap();
        let a = Vec2::new(s2.clone(), s3.clone());
        let c = Vec2::new(s2.scale(&rat(2, 1)), s3.scale(&rat(2, 1)));
        assert_eq!(cross_sign(&a, &c).unwrap(), Ordering::Equal);
        let d = Vec2::new(s3.clone(), s2.clone());
        assert_eq!(cross_sign(&a, &d).unwrap(), Ordering::Less);
    }

    fn unit_square(b: &Arc<RealBasis>) -> Polygon {
        Polygon::new(vec![v(b, 0, 0), v(b, 1, 0), v(b, 1, 1), v(b, 0, 1)], vec![]).unwrap()
    }

    #[test]
    fn torus_classes() {
        let b = RealBasis::rational();
        let s = TranslationSurface::new(
            vec![unit_square(&b)],
            vec![(EdgeRef::new(0, 0), EdgeRef::new(0, 2)), (EdgeRef::new(0, 1), EdgeRef::new(0, 3))],
        )
        .unwrap();
        assert_eq!(s.vertex_classes().len(), 1);
        assert_eq!(s.vertex_classes()[0].angle_over_pi(), 2);
        assert_eq!(s.genus().unwrap(), 1);
        assert_eq!(s.area().unwrap(), FieldElement::from_int(&b, 1));
        assert_eq!(s.translation(EdgeRef::new(0, 0)), v(&b, 0, 1));
    }

    #[test]
    fn slit_edges_and_points() {
        let b = RealBasis::rational();
        let p = Polygon::new(
            vec![v(&b, 0, 0), v(&b, 4, 0), v(&b, 4, 4), v(&b, 0, 4)],
            vec![(v(&b, 1, 1), v(&b, 2, 1))],
        )
        .unwrap();
        assert_eq!(p.edge_count(), 6);
        assert_eq!(p.edge_vector(4), v(&b, 1, 0));
        assert_eq!(p.edge_vector(5), v(&b, -1, 0));
        assert_eq!(p.incoming_edge(4), 5);
        assert_eq!(p.incoming_edge(5), 4);
        assert_eq!(p.slit_twin(4), Some(5));
        assert_eq!(p.slit_twin(1), None);
    }

    #[test]
    fn invalid_gluings() {
        let b = RealBasis::rational();
        let sq = || unit_square(&b);
        let err = TranslationSurface::new(vec![sq()], vec![(EdgeRef::new(0, 0), EdgeRef::new(0, 2))]);
        assert!(matches!(err, Err(SurfaceError::UnpairedEdge(0, 1))));
        let err = TranslationSurface::new(
            vec![sq()],
            vec![(EdgeRef::new(0, 0), EdgeRef::new(0, 1)), (EdgeRef::new(0, 2), EdgeRef::new(0, 3))],
        );
        assert!(matches!(err, Err(SurfaceError::NonTranslationPairing(..))));
        let err = TranslationSurface::new(
            vec![sq(), sq()],
            vec![
                (EdgeRef::new(0, 0), EdgeRef::new(0, 2)),
                (EdgeRef::new(0, 1), EdgeRef::new(0, 3)),
                (EdgeRef::new(1, 0), EdgeRef::new(1, 2)),
                (EdgeRef::new(1, 1), EdgeRef::new(1, 3)),
            ],
        );
        assert!(matches!(err, Err(SurfaceError::Disconnected)));
    }
}
