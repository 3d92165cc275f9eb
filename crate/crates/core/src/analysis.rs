//! Pointwise checks on edge fields and the `H = Im ∫ F²` field.
//!
//! Residuals come in two flavours: absolute, and relative to the largest `|F|`
//! on the surrounding face row (`δ|F|²` for `H`). Extensions grow
//! geometrically with the row, so only the relative numbers are comparable
//! across a window.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{relative, EdgeField, RowScales};
use crate::geometry::{
    classify_edge, BoundaryFace, BoundaryPart, Corner, CornerPos, EdgeId, Face, StripSpec, Vertex, Window,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Residual {
    pub abs: f64,
    pub rel: f64,
}

impl Residual {
    pub fn record(&mut self, abs: f64, scale: f64) {
        self.abs = self.abs.max(abs);
        self.rel = self.rel.max(relative(abs, scale));
    }

    pub fn merge(&mut self, other: Residual) {
        self.abs = self.abs.max(other.abs);
        self.rel = self.rel.max(other.rel);
    }
}

fn projection(value: Complex64, pos: CornerPos) -> Complex64 {
    0.5 * (value + pos.coefficient() * value.conj())
}

fn corner_projections(field: &EdgeField, c: &Corner) -> Option<(Complex64, Complex64)> {
    let [h, v] = c.edges(field.spec());
    Some((projection(field.get(&h)?, c.pos), projection(field.get(&v)?, c.pos)))
}

/// `F(c)`, the common projection of the two edges at `c`.
pub fn corner_value(field: &EdgeField, c: &Corner) -> Result<Complex64> {
    let [h, v] = c.edges(field.spec());
    let (fh, fv) = match (field.get(&h), field.get(&v)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::InvalidArgument(format!("corner {c:?} is outside the window"))),
    };
    let (ph, pv) = (projection(fh, c.pos), projection(fv, c.pos));
    let diff = (ph - pv).norm();
    let scale = fh.norm().max(fv.norm());
    if diff > 1e-9 * scale {
        return Err(Error::ProjectionMismatch { corner: format!("{c:?}"), residual: diff });
    }
    Ok(0.5 * (ph + pv))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SholoReport {
    /// Mismatch of the two projections at each corner.
    pub projection: Residual,
    /// Discrete Cauchy–Riemann residual around faces and interior vertices.
    pub cauchy_riemann: Residual,
    pub corners: usize,
}

fn interior_vertex(spec: &StripSpec, window: Window, v: Vertex) -> bool {
    v.x2 > 2 * spec.a()
        && v.x2 < 2 * spec.b()
        && v.y2 > 2 * window.y_min
        && v.y2 < 2 * window.y_max
        && !(spec.is_slit() && v.x2 == 0 && v.y2 <= 0)
}

pub fn check_sholomorphic(field: &EdgeField) -> SholoReport {
    let spec = *field.spec();
    let window = field.window();
    let scales = field.scales();
    let mut rep = SholoReport::default();
    let i = Complex64::i();
    for face in window.faces(&spec) {
        let s = scales.at(face.x2, face.y2);
        for c in face.corners() {
            let (a, b) = corner_projections(field, &c).expect("window corner");
            rep.projection.record((a - b).norm(), s);
            rep.corners += 1;
        }
        let [n, e, so, w] = face.edges(&spec).map(|e| field.get(&e).expect("window edge"));
        rep.cauchy_riemann.record((e - w + i * (n - so)).norm(), s);
    }
    for v in window.vertices(&spec) {
        if !interior_vertex(&spec, window, v) {
            continue;
        }
        let get = |e: EdgeId| field.get(&e).expect("edge around interior vertex");
        let east = get(EdgeId::horizontal(v.x2 + 1, v.y2 / 2));
        let west = get(EdgeId::horizontal(v.x2 - 1, v.y2 / 2));
        let north = get(EdgeId::vertical(v.x2 / 2, v.y2 + 1));
        let south = get(EdgeId::vertical(v.x2 / 2, v.y2 - 1));
        rep.cauchy_riemann.record((east - west + i * (north - south)).norm(), scales.around_vertex(v.x2, v.y2));
    }
    rep
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RbvReport {
    pub components: Vec<(crate::geometry::BoundaryComponent, Residual)>,
}

impl RbvReport {
    pub fn max(&self) -> Residual {
        let mut out = Residual::default();
        for (_, r) in &self.components {
            out.merge(*r);
        }
        out
    }
}

/// Distance of each boundary value from its Riemann line, per component.
pub fn check_riemann_bv(field: &EdgeField) -> RbvReport {
    let spec = *field.spec();
    let scales = field.scales();
    let mut rep = RbvReport::default();
    for bf in field.window().boundary_faces(&spec) {
        let value = field.get(&bf.edge).expect("window edge");
        let u = bf.component.class().riemann_line().expect("boundary edge");
        let dist = (value * u.conj()).im.abs();
        let inner = bf.inner_face();
        let s = scales.at(inner.x2, inner.y2);
        match rep.components.iter_mut().find(|(c, _)| *c == bf.component) {
            Some((_, r)) => r.record(dist, s),
            None => {
                let mut r = Residual::default();
                r.record(dist, s);
                rep.components.push((bf.component, r));
            }
        }
    }
    rep.components.sort_by_key(|(c, _)| *c);
    rep
}

/// Real values on vertices, faces and boundary faces of a window.
#[derive(Debug, Clone)]
pub struct HField {
    spec: StripSpec,
    window: Window,
    mesh: f64,
    anchor: Vertex,
    vertices: Vec<f64>,
    faces: Vec<f64>,
    boundary: Vec<(BoundaryFace, f64)>,
    scales: RowScales,
    /// Disagreement between the stored values and the corner increments.
    pub loop_residual: Residual,
    /// Disagreement with the edge increments `Im(F(z)²(u′−u))` between
    /// neighbouring vertices and between neighbouring faces.
    pub edge_residual: Residual,
    /// Spread of `H` over the vertices of each boundary arc.
    pub boundary_spread: Vec<(BoundaryPart, Residual)>,
}

fn vertex_slot(spec: &StripSpec, window: Window, v: Vertex) -> Option<usize> {
    let (x, y) = (v.x2 / 2, v.y2 / 2);
    if v.x2 % 2 != 0 || v.y2 % 2 != 0 || x < spec.a() || x > spec.b() || !window.contains_row(y) {
        return None;
    }
    Some((y - window.y_min) as usize * (spec.width() + 1) + (x - spec.a()) as usize)
}

fn face_slot(spec: &StripSpec, window: Window, p: Face) -> Option<usize> {
    let j = spec.slot(p.x2)?;
    let r = (p.y2 - 1) / 2 - window.y_min;
    if p.y2 % 2 == 0 || r < 0 || r >= window.height() as i32 {
        return None;
    }
    Some(r as usize * spec.width() + j)
}

fn corner_increment(field: &EdgeField, c: &Corner) -> Complex64 {
    let (a, b) = corner_projections(field, c).expect("window corner");
    let fc = 0.5 * (a + b);
    fc * fc * c.displacement() * field.mesh()
}

/// The wall vertex with the smallest surrounding scale, where `H` is anchored
/// by default. The quiet zone need not sit at the window's end: roundoff along
/// growing modes can make both ends loud.
pub fn quiet_anchor(field: &EdgeField) -> Vertex {
    let spec = field.spec();
    let scales = field.scales();
    let mut best = (f64::INFINITY, Vertex::new(spec.a(), field.window().y_min));
    for y in field.window().rows() {
        for x in [spec.a(), spec.b()] {
            let v = Vertex::new(x, y);
            let s = scales.around_vertex(v.x2, v.y2);
            if s < best.0 {
                best = (s, v);
            }
        }
    }
    best.1
}

/// Pending assignment in the traversal of [`compute_h`], ordered so the heap
/// pops the smallest increment scale first, then by position.
struct Step {
    key: f64,
    is_vertex: bool,
    x2: i32,
    y2: i32,
    value: f64,
}

impl Step {
    fn rank(&self) -> (bool, i32, i32) {
        (self.is_vertex, self.x2, self.y2)
    }
}

impl PartialEq for Step {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Step {}

impl PartialOrd for Step {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Step {
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.total_cmp(&self.key).then_with(|| other.rank().cmp(&self.rank()))
    }
}

/// Integrates the corner increments `H(v) − H(p) = Im(2F(c)²(v−p))` outward
/// from `anchor` and then measures every other increment against the result.
pub fn compute_h(field: &EdgeField, anchor: Vertex) -> Result<HField> {
    let spec = *field.spec();
    let window = field.window();
    if window.height() == 0 {
        return Err(Error::InvalidArgument("H needs at least one face row".into()));
    }
    let sholo = check_sholomorphic(field);
    if sholo.projection.rel > 1e-9 {
        return Err(Error::ProjectionMismatch { corner: "window".into(), residual: sholo.projection.rel });
    }
    let nv = (spec.width() + 1) * (window.height() + 1);
    let nf = spec.width() * window.height();
    vertex_slot(&spec, window, anchor)
        .ok_or_else(|| Error::InvalidArgument(format!("anchor {anchor:?} is outside the window")))?;
    let scales = field.scales();
    // Prim order on face scales: the quietest frontier increment goes first, so
    // each quiet region is filled from a single entry and the roundoff picked
    // up crossing a loud band is a common offset there.
    let mut vertices = vec![f64::NAN; nv];
    let mut faces = vec![f64::NAN; nf];
    let mut heap = BinaryHeap::new();
    heap.push(Step { key: 0.0, is_vertex: true, x2: anchor.x2, y2: anchor.y2, value: 0.0 });
    while let Some(Step { key, is_vertex, x2, y2, value }) = heap.pop() {
        if is_vertex {
            let j = vertex_slot(&spec, window, Vertex { x2, y2 }).unwrap();
            if !vertices[j].is_nan() {
                continue;
            }
            vertices[j] = value;
            for (dx, dy) in [(-1, -1), (1, -1), (-1, 1), (1, 1)] {
                let p = Face { x2: x2 + dx, y2: y2 + dy };
                let Some(i) = face_slot(&spec, window, p) else { continue };
                if !faces[i].is_nan() {
                    continue;
                }
                let pos = match (-dx, -dy) {
                    (-1, 1) => CornerPos::NW,
                    (1, 1) => CornerPos::NE,
                    (1, -1) => CornerPos::SE,
                    _ => CornerPos::SW,
                };
                let hp = value - 2.0 * corner_increment(field, &Corner { face: p, pos }).im;
                let key = scales.at(p.x2, p.y2);
                heap.push(Step { key, is_vertex: false, x2: p.x2, y2: p.y2, value: hp });
            }
        } else {
            let p = Face { x2, y2 };
            let i = face_slot(&spec, window, p).unwrap();
            if !faces[i].is_nan() {
                continue;
            }
            faces[i] = value;
            for c in p.corners() {
                let v = c.vertex();
                if vertices[vertex_slot(&spec, window, v).unwrap()].is_nan() {
                    let hv = value + 2.0 * corner_increment(field, &c).im;
                    heap.push(Step { key, is_vertex: true, x2: v.x2, y2: v.y2, value: hv });
                }
            }
        }
    }

    let delta = field.mesh();
    let mut loop_residual = Residual::default();
    for p in window.faces(&spec) {
        let hp = faces[face_slot(&spec, window, p).unwrap()];
        let s = delta * scales.at(p.x2, p.y2).powi(2);
        for c in p.corners() {
            let hv = vertices[vertex_slot(&spec, window, c.vertex()).unwrap()];
            let inc = 2.0 * corner_increment(field, &c).im;
            loop_residual.record((hv - hp - inc).abs(), s);
        }
    }

    let mut edge_residual = Residual::default();
    for (e, z) in field.iter() {
        let [u, u2] = e.endpoints();
        let s = delta * scales.around_vertex(u.x2, u.y2).max(scales.around_vertex(u2.x2, u2.y2)).powi(2);
        let step = (u2.point() - u.point()) * delta;
        let hu = vertices[vertex_slot(&spec, window, u).unwrap()];
        let hu2 = vertices[vertex_slot(&spec, window, u2).unwrap()];
        edge_residual.record((hu2 - hu - (z * z * step).im).abs(), s);
        // faces on either side of the edge, skipping boundary edges
        if classify_edge(&spec, &e).map(|c| c.is_boundary()).unwrap_or(true) {
            continue;
        }
        let m = Complex64::new(e.x2 as f64, e.y2 as f64);
        let normal = step * Complex64::new(0.0, -1.0);
        let (dx, dy) = ((normal.re / delta).round() as i32, (normal.im / delta).round() as i32);
        let p = Face { x2: m.re as i32 - dx, y2: m.im as i32 - dy };
        let p2 = Face { x2: m.re as i32 + dx, y2: m.im as i32 + dy };
        if let (Some(a), Some(b)) = (face_slot(&spec, window, p), face_slot(&spec, window, p2)) {
            let fstep = (p2.center() - p.center()) * delta;
            edge_residual.record((faces[b] - faces[a] - (z * z * fstep).im).abs(), s);
        }
    }

    let mut boundary_spread = Vec::new();
    let mut parts = vec![(BoundaryPart::LeftWall, spec.a()), (BoundaryPart::RightWall, spec.b())];
    if spec.is_slit() && window.y_min < 0 {
        parts.push((BoundaryPart::Slit, 0));
    }
    for (part, x) in parts {
        let y_top = if part == BoundaryPart::Slit { 0.min(window.y_max) } else { window.y_max };
        let (mut lo, mut hi, mut s) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
        for y in window.y_min..=y_top {
            let v = Vertex::new(x, y);
            let h = vertices[vertex_slot(&spec, window, v).unwrap()];
            lo = lo.min(h);
            hi = hi.max(h);
            s = s.max(delta * scales.around_vertex(v.x2, v.y2).powi(2));
        }
        let mut r = Residual::default();
        r.record(hi - lo, s);
        boundary_spread.push((part, r));
    }

    let boundary = window
        .boundary_faces(&spec)
        .into_iter()
        .map(|bf| {
            let [u, u2] = bf.edge.endpoints();
            let hu = vertices[vertex_slot(&spec, window, u).unwrap()];
            let hu2 = vertices[vertex_slot(&spec, window, u2).unwrap()];
            (bf, 0.5 * (hu + hu2))
        })
        .collect();

    let h = HField {
        spec,
        window,
        mesh: delta,
        anchor,
        vertices,
        faces,
        boundary,
        scales,
        loop_residual,
        edge_residual,
        boundary_spread,
    };
    if h.loop_residual.rel > 1e-9 {
        return Err(Error::LoopClosure(h.loop_residual.rel));
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MeanValueReport {
    /// `max(H(v) − mean of the four neighbours)` over interior vertices.
    pub vertex: Residual,
    /// `max(weighted mean of the neighbours − H(p))` over interior faces.
    pub face: Residual,
    /// `max(H(p) − H(v))` over corners.
    pub domination: Residual,
}

/// Weight of an imagined face across a boundary edge in face averages.
pub fn boundary_face_weight() -> f64 {
    2.0 * (std::f64::consts::SQRT_2 - 1.0)
}

impl HField {
    pub fn anchor(&self) -> Vertex {
        self.anchor
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn vertex(&self, v: Vertex) -> Option<f64> {
        vertex_slot(&self.spec, self.window, v).map(|j| self.vertices[j])
    }

    pub fn face(&self, p: Face) -> Option<f64> {
        face_slot(&self.spec, self.window, p).map(|j| self.faces[j])
    }

    pub fn boundary_face(&self, edge: &EdgeId) -> Option<f64> {
        self.boundary.iter().find(|(bf, _)| bf.edge == *edge).map(|(_, h)| *h)
    }

    pub fn boundary_faces(&self) -> &[(BoundaryFace, f64)] {
        &self.boundary
    }

    pub fn max_abs(&self) -> f64 {
        self.vertices.iter().chain(&self.faces).map(|h| h.abs()).fold(0.0, f64::max)
    }

    /// Every vertex with its value.
    pub fn vertex_values(&self) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.window.vertices(&self.spec).into_iter().zip(self.vertices.iter().copied())
    }

    /// Every face with its value.
    pub fn face_values(&self) -> impl Iterator<Item = (Face, f64)> + '_ {
        self.window.faces(&self.spec).into_iter().zip(self.faces.iter().copied())
    }

    /// Columns `carrier,x2,y2,value`; boundary faces are placed at their
    /// imagined centre.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "carrier,x2,y2,value")?;
        for (v, h) in self.vertex_values() {
            writeln!(w, "vertex,{},{},{:.17e}", v.x2, v.y2, h)?;
        }
        for (p, h) in self.face_values() {
            writeln!(w, "face,{},{},{:.17e}", p.x2, p.y2, h)?;
        }
        for (bf, h) in &self.boundary {
            let c = bf.center();
            writeln!(w, "boundary_face,{},{},{:.17e}", (2.0 * c.re) as i32, (2.0 * c.im) as i32, h)?;
        }
        Ok(())
    }

    fn face_scale(&self, p: Face) -> f64 {
        let mut s = 0.0f64;
        for dy in [-2, 0, 2] {
            let q = Face { x2: p.x2, y2: p.y2 + dy };
            if face_slot(&self.spec, self.window, q).is_some() {
                s = s.max(self.scales.at(q.x2, q.y2));
            }
        }
        self.mesh * s * s
    }
}

/// Sub-mean-value on vertices and weighted super-mean-value on faces.
pub fn verify_mean_value(h: &HField) -> MeanValueReport {
    let spec = h.spec;
    let window = h.window;
    let mut rep = MeanValueReport::default();
    for v in window.vertices(&spec) {
        if !interior_vertex(&spec, window, v) {
            continue;
        }
        let nb: f64 = [(2, 0), (-2, 0), (0, 2), (0, -2)]
            .iter()
            .map(|(dx, dy)| h.vertex(Vertex { x2: v.x2 + dx, y2: v.y2 + dy }).unwrap())
            .sum();
        let excess = h.vertex(v).unwrap() - nb / 4.0;
        let s = h.mesh * h.scales.around_vertex(v.x2, v.y2).powi(2);
        rep.vertex.record(excess.max(0.0), s);
    }
    let wb = boundary_face_weight();
    for p in window.faces(&spec) {
        let north = h.face(Face { x2: p.x2, y2: p.y2 + 2 });
        let south = h.face(Face { x2: p.x2, y2: p.y2 - 2 });
        let (Some(north), Some(south)) = (north, south) else { continue };
        let [_, east, _, west] = p.edges(&spec);
        let (mut num, mut den) = (north + south, 2.0);
        for (edge, dx) in [(east, 2), (west, -2)] {
            match h.boundary_face(&edge) {
                Some(hb) if classify_edge(&spec, &edge).map(|c| c.is_boundary()).unwrap_or(false) => {
                    num += wb * hb;
                    den += wb;
                }
                _ => {
                    num += h.face(Face { x2: p.x2 + dx, y2: p.y2 }).unwrap();
                    den += 1.0;
                }
            }
        }
        let deficit = num / den - h.face(p).unwrap();
        rep.face.record(deficit.max(0.0), h.face_scale(p));
    }
    for p in window.faces(&spec) {
        let hp = h.face(p).unwrap();
        let s = h.mesh * h.scales.at(p.x2, p.y2).powi(2);
        for c in p.corners() {
            let gap = h.vertex(c.vertex()).unwrap() - hp;
            rep.domination.record((-gap).max(0.0), s);
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{StripKind, Window};
    use crate::index::ModeIndex;
    use crate::space::CrossSectionFn;
    use crate::strip::SpectralBasis;

    fn eigen_extension(len: usize, k: f64, window: Window) -> EdgeField {
        let s = StripSpec::centered(len, StripKind::Strip).unwrap();
        let basis = SpectralBasis::new(s).unwrap();
        let f = basis.eigenfunction(ModeIndex::from_f64(k).unwrap()).unwrap().clone();
        basis.extend(&f, window).unwrap()
    }

    #[test]
    fn zero_field_is_trivially_fine() {
        let s = StripSpec::centered(4, StripKind::SlitStrip).unwrap();
        let w = Window::new(-3, 3).unwrap();
        let f = EdgeField::zeros(s, w);
        let rep = check_sholomorphic(&f);
        assert_eq!(rep.projection.abs, 0.0);
        assert_eq!(check_riemann_bv(&f).max().abs, 0.0);
        let h = compute_h(&f, Vertex::new(-2, -3)).unwrap();
        assert_eq!(h.max_abs(), 0.0);
        let mv = verify_mean_value(&h);
        assert_eq!((mv.vertex.abs, mv.face.abs, mv.domination.abs), (0.0, 0.0, 0.0));
    }

    #[test]
    fn corner_value_on_projection_line_is_itself() {
        let s = StripSpec::centered(2, StripKind::Strip).unwrap();
        let w = Window::new(0, 1).unwrap();
        let mut f = EdgeField::zeros(s, w);
        let c = Corner { face: Face { x2: -1, y2: 1 }, pos: CornerPos::NE };
        let line = c.pos.coefficient().sqrt();
        for e in c.edges(&s) {
            f.set(&e, line * 0.7).unwrap();
        }
        assert!((corner_value(&f, &c).unwrap() - line * 0.7).norm() < 1e-15);
        f.set(&c.edges(&s)[0], line * 0.7 + 1e-3).unwrap();
        assert!(corner_value(&f, &c).is_err());
    }

    #[test]
    fn constant_one_left_wall_distance() {
        let s = StripSpec::centered(3, StripKind::Strip).unwrap();
        let w = Window::new(0, 2).unwrap();
        let rows = (0..3).map(|_| CrossSectionFn::constant(s, Complex64::new(1.0, 0.0))).collect();
        let mut f = EdgeField::from_rows(s, w, rows).unwrap();
        for y2 in [1, 3] {
            f.set(&EdgeId::vertical(s.a(), y2), Complex64::new(1.0, 0.0)).unwrap();
        }
        let rep = check_riemann_bv(&f);
        let left = rep.components.iter().find(|(c, _)| *c == crate::geometry::BoundaryComponent::LeftWall).unwrap().1;
        assert!((left.abs - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn eigen_extension_is_sholomorphic_with_boundary_values() {
        for len in [2, 5, 8] {
            for k in [0.5f64, -0.5, 1.5] {
                if k.abs() > len as f64 {
                    continue;
                }
                let f = eigen_extension(len, k, Window::new(-2 * len as i32, 2 * len as i32).unwrap());
                let rep = check_sholomorphic(&f);
                assert!(rep.projection.rel < 1e-12, "ℓ={len} k={k}: {rep:?}");
                assert!(rep.cauchy_riemann.rel < 1e-12, "ℓ={len} k={k}: {rep:?}");
                assert!(check_riemann_bv(&f).max().rel < 1e-12);
                for e in f.window().edges(f.spec()) {
                    for c in f.window().corners(f.spec()) {
                        if c.edges(f.spec()).contains(&e) {
                            assert!(corner_value(&f, &c).is_ok());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn perturbed_edge_is_detected() {
        let mut f = eigen_extension(4, 0.5, Window::new(-2, 2).unwrap());
        let e = EdgeId::horizontal(1, 0);
        let v = f.get(&e).unwrap();
        f.set(&e, v + 1e-3).unwrap();
        assert!(check_sholomorphic(&f).projection.abs >= 1e-4);
    }

    #[test]
    fn h_of_eigen_extension() {
        let f = eigen_extension(6, 1.5, Window::new(-12, 12).unwrap());
        let h = compute_h(&f, quiet_anchor(&f)).unwrap();
        assert!(h.loop_residual.rel < 1e-12, "{:?}", h.loop_residual);
        assert!(h.edge_residual.rel < 1e-11, "{:?}", h.edge_residual);
        for (part, r) in &h.boundary_spread {
            assert!(r.rel < 1e-11, "{part:?}: {r:?}");
        }
        let mv = verify_mean_value(&h);
        assert!(mv.vertex.rel < 1e-10 && mv.face.rel < 1e-10 && mv.domination.rel < 1e-12, "{mv:?}");
        assert_eq!(h.vertex(h.anchor()), Some(0.0));
    }

    #[test]
    fn boundary_increments_vanish() {
        let f = eigen_extension(4, -0.5, Window::new(-3, 3).unwrap());
        let h = compute_h(&f, Vertex::new(f.spec().a(), 0)).unwrap();
        let spec = *f.spec();
        for y in -3..3 {
            let a = h.vertex(Vertex::new(spec.a(), y)).unwrap();
            let b = h.vertex(Vertex::new(spec.a(), y + 1)).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
