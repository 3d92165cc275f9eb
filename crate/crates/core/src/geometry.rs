//! Square-lattice strips and slit-strips.
//!
//! All coordinates are stored doubled (`x2 = 2x`, `y2 = 2y`), so vertices have
//! two even coordinates, faces two odd ones, and edge midpoints one of each.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StripKind {
    Strip,
    SlitStrip,
}

/// Walls at `x = a` and `x = b`; for a slit-strip the slit is the ray `x = 0, y ≤ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StripSpec {
    a: i32,
    b: i32,
    kind: StripKind,
}

impl StripSpec {
    /// A strip needs only `a < b`; leg sub-strips of a slit-strip have a wall at 0.
    pub fn strip(a: i32, b: i32) -> Result<Self> {
        if a >= b {
            return Err(Error::InvalidGeometry(format!("need a < b, got a={a}, b={b}")));
        }
        Ok(Self { a, b, kind: StripKind::Strip })
    }

    pub fn slit_strip(a: i32, b: i32) -> Result<Self> {
        if !(a < 0 && 0 < b) {
            return Err(Error::InvalidGeometry(format!("need a < 0 < b, got a={a}, b={b}")));
        }
        Ok(Self { a, b, kind: StripKind::SlitStrip })
    }

    pub fn new(a: i32, b: i32, kind: StripKind) -> Result<Self> {
        match kind {
            StripKind::Strip => Self::strip(a, b),
            StripKind::SlitStrip => Self::slit_strip(a, b),
        }
    }

    /// Width `len` with `a = −⌈len/2⌉`, `b = len + a`.
    pub fn centered(len: usize, kind: StripKind) -> Result<Self> {
        let len = len as i32;
        let a = -((len + 1) / 2);
        Self::new(a, len + a, kind)
    }

    pub fn a(&self) -> i32 {
        self.a
    }

    pub fn b(&self) -> i32 {
        self.b
    }

    pub fn kind(&self) -> StripKind {
        self.kind
    }

    pub fn is_slit(&self) -> bool {
        self.kind == StripKind::SlitStrip
    }

    pub fn width(&self) -> usize {
        (self.b - self.a) as usize
    }

    pub fn left_width(&self) -> usize {
        (-self.a).max(0) as usize
    }

    pub fn right_width(&self) -> usize {
        self.b.max(0) as usize
    }

    /// Same walls, no slit.
    pub fn without_slit(&self) -> Self {
        Self { kind: StripKind::Strip, ..*self }
    }

    pub fn left_leg(&self) -> Result<Self> {
        self.require_slit()?;
        Self::strip(self.a, 0)
    }

    pub fn right_leg(&self) -> Result<Self> {
        self.require_slit()?;
        Self::strip(0, self.b)
    }

    fn require_slit(&self) -> Result<()> {
        if self.is_slit() {
            Ok(())
        } else {
            Err(Error::InvalidGeometry("operation needs a slit-strip".into()))
        }
    }

    /// Doubled positions `2a+1, 2a+3, …, 2b−1`.
    pub fn cross_section_x2(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.width() as i32).map(move |j| 2 * (self.a + j) + 1)
    }

    /// Cross-section slot of the doubled position `x2`, if it is one.
    pub fn slot(&self, x2: i32) -> Option<usize> {
        if x2 % 2 == 0 || x2 < 2 * self.a || x2 > 2 * self.b {
            return None;
        }
        Some(((x2 - 2 * self.a - 1) / 2) as usize)
    }

    /// True if the vertical position at height `y2` (odd) is on the slit.
    pub fn slit_at(&self, x2: i32, y2: i32) -> bool {
        self.is_slit() && x2 == 0 && y2 < 0
    }
}

/// `(a+½, a+3/2, …, b−½)`.
pub fn cross_section(spec: &StripSpec) -> Vec<f64> {
    spec.cross_section_x2().map(|x2| x2 as f64 / 2.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// Which copy of a doubled slit edge: `Left` is the `0⁻` side bounding the left leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlitSide {
    None,
    Left,
    Right,
}

impl SlitSide {
    pub fn as_str(self) -> &'static str {
        match self {
            SlitSide::None => "none",
            SlitSide::Left => "left",
            SlitSide::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub orientation: Orientation,
    pub x2: i32,
    pub y2: i32,
    pub side: SlitSide,
}

impl EdgeId {
    /// Horizontal edge with midpoint `(x2/2, y)`.
    pub fn horizontal(x2: i32, y: i32) -> Self {
        Self { orientation: Orientation::Horizontal, x2, y2: 2 * y, side: SlitSide::None }
    }

    /// Vertical edge at `x` with midpoint height `y2/2`.
    pub fn vertical(x: i32, y2: i32) -> Self {
        Self { orientation: Orientation::Vertical, x2: 2 * x, y2, side: SlitSide::None }
    }

    pub fn slit(y2: i32, side: SlitSide) -> Self {
        Self { orientation: Orientation::Vertical, x2: 0, y2, side }
    }

    /// Midpoint in lattice units.
    pub fn midpoint(&self) -> Complex64 {
        Complex64::new(self.x2 as f64 / 2.0, self.y2 as f64 / 2.0)
    }

    /// The two endpoints (doubled coordinates).
    pub fn endpoints(&self) -> [Vertex; 2] {
        match self.orientation {
            Orientation::Horizontal => {
                [Vertex { x2: self.x2 - 1, y2: self.y2 }, Vertex { x2: self.x2 + 1, y2: self.y2 }]
            }
            Orientation::Vertical => [Vertex { x2: self.x2, y2: self.y2 - 1 }, Vertex { x2: self.x2, y2: self.y2 + 1 }],
        }
    }

    /// Whether `e` belongs to the (infinite) graph of `spec`.
    pub fn in_graph(&self, spec: &StripSpec) -> bool {
        let (lo, hi) = (2 * spec.a, 2 * spec.b);
        match self.orientation {
            Orientation::Horizontal => {
                self.side == SlitSide::None && self.x2 % 2 != 0 && self.y2 % 2 == 0 && self.x2 > lo && self.x2 < hi
            }
            Orientation::Vertical => {
                if self.x2 % 2 != 0 || self.y2 % 2 == 0 || self.x2 < lo || self.x2 > hi {
                    return false;
                }
                let doubled = spec.slit_at(self.x2, self.y2);
                doubled == (self.side != SlitSide::None)
            }
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Horizontal => 'h',
            Orientation::Vertical => 'v',
        };
        write!(f, "{o}({}/2, {}/2", self.x2, self.y2)?;
        if self.side != SlitSide::None {
            write!(f, ", {}", self.side.as_str())?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Interior,
    LeftWall,
    RightWall,
    SlitLeft,
    SlitRight,
}

impl EdgeClass {
    pub fn is_boundary(self) -> bool {
        self != EdgeClass::Interior
    }

    /// Counterclockwise tangent of a boundary edge.
    pub fn tangent(self) -> Option<Complex64> {
        let i = Complex64::i();
        match self {
            EdgeClass::Interior => None,
            EdgeClass::LeftWall | EdgeClass::SlitRight => Some(-i),
            EdgeClass::RightWall | EdgeClass::SlitLeft => Some(i),
        }
    }

    /// Unit direction `u` of the line `uℝ` that boundary values must lie on.
    /// It is `i·τ^{−1/2}`, reduced to `e^{±iπ/4}`.
    pub fn riemann_line(self) -> Option<Complex64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            EdgeClass::Interior => None,
            EdgeClass::LeftWall | EdgeClass::SlitRight => Some(Complex64::new(h, -h)),
            EdgeClass::RightWall | EdgeClass::SlitLeft => Some(Complex64::new(h, h)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::Interior => "interior",
            EdgeClass::LeftWall => "left_wall",
            EdgeClass::RightWall => "right_wall",
            EdgeClass::SlitLeft => "slit_left",
            EdgeClass::SlitRight => "slit_right",
        }
    }
}

pub fn classify_edge(spec: &StripSpec, e: &EdgeId) -> Result<EdgeClass> {
    if !e.in_graph(spec) {
        return Err(Error::EdgeNotInGraph(e.to_string()));
    }
    Ok(match (e.orientation, e.side) {
        (Orientation::Horizontal, _) => EdgeClass::Interior,
        (Orientation::Vertical, SlitSide::Left) => EdgeClass::SlitLeft,
        (Orientation::Vertical, SlitSide::Right) => EdgeClass::SlitRight,
        (Orientation::Vertical, SlitSide::None) => {
            if e.x2 == 2 * spec.a {
                EdgeClass::LeftWall
            } else if e.x2 == 2 * spec.b {
                EdgeClass::RightWall
            } else {
                EdgeClass::Interior
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub x2: i32,
    pub y2: i32,
}

impl Vertex {
    pub fn new(x: i32, y: i32) -> Self {
        Self { x2: 2 * x, y2: 2 * y }
    }

    pub fn point(&self) -> Complex64 {
        Complex64::new(self.x2 as f64 / 2.0, self.y2 as f64 / 2.0)
    }
}

/// A face, addressed by its center `(x2/2, y2/2)` with both coordinates odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub x2: i32,
    pub y2: i32,
}

impl Face {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.x2 as f64 / 2.0, self.y2 as f64 / 2.0)
    }

    /// North, east, south, west edges, with slit sides resolved for `spec`.
    pub fn edges(&self, spec: &StripSpec) -> [EdgeId; 4] {
        let north = EdgeId { orientation: Orientation::Horizontal, x2: self.x2, y2: self.y2 + 1, side: SlitSide::None };
        let south = EdgeId { orientation: Orientation::Horizontal, x2: self.x2, y2: self.y2 - 1, side: SlitSide::None };
        let mut east =
            EdgeId { orientation: Orientation::Vertical, x2: self.x2 + 1, y2: self.y2, side: SlitSide::None };
        let mut west =
            EdgeId { orientation: Orientation::Vertical, x2: self.x2 - 1, y2: self.y2, side: SlitSide::None };
        if spec.slit_at(east.x2, east.y2) {
            east.side = SlitSide::Left;
        }
        if spec.slit_at(west.x2, west.y2) {
            west.side = SlitSide::Right;
        }
        [north, east, south, west]
    }

    pub fn corners(&self) -> [Corner; 4] {
        [CornerPos::NW, CornerPos::NE, CornerPos::SE, CornerPos::SW].map(|pos| Corner { face: *self, pos })
    }
}

/// Position of a corner's vertex relative to its face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CornerPos {
    NW,
    NE,
    SE,
    SW,
}

impl CornerPos {
    /// Doubled offset of the vertex from the face center.
    pub fn offset(self) -> (i32, i32) {
        match self {
            CornerPos::NW => (-1, 1),
            CornerPos::NE => (1, 1),
            CornerPos::SE => (1, -1),
            CornerPos::SW => (-1, -1),
        }
    }

    /// `i|v−p|/(v−p)`; the corner projection is `½(F + coef·F̄)`.
    pub fn coefficient(self) -> Complex64 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            CornerPos::NW => Complex64::new(h, -h),
            CornerPos::NE => Complex64::new(h, h),
            CornerPos::SE => Complex64::new(-h, h),
            CornerPos::SW => Complex64::new(-h, -h),
        }
    }
}

/// A vertex–face pair at distance `1/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub face: Face,
    pub pos: CornerPos,
}

impl Corner {
    pub fn vertex(&self) -> Vertex {
        let (dx, dy) = self.pos.offset();
        Vertex { x2: self.face.x2 + dx, y2: self.face.y2 + dy }
    }

    /// `v − p` in lattice units.
    pub fn displacement(&self) -> Complex64 {
        let (dx, dy) = self.pos.offset();
        Complex64::new(dx as f64 / 2.0, dy as f64 / 2.0)
    }

    /// The horizontal and the vertical edge shared by the vertex and the face.
    pub fn edges(&self, spec: &StripSpec) -> [EdgeId; 2] {
        let [n, e, s, w] = self.face.edges(spec);
        match self.pos {
            CornerPos::NW => [n, w],
            CornerPos::NE => [n, e],
            CornerPos::SE => [s, e],
            CornerPos::SW => [s, w],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryComponent {
    LeftWall,
    RightWall,
    SlitLeft,
    SlitRight,
}

impl BoundaryComponent {
    pub fn from_class(class: EdgeClass) -> Option<Self> {
        match class {
            EdgeClass::Interior => None,
            EdgeClass::LeftWall => Some(Self::LeftWall),
            EdgeClass::RightWall => Some(Self::RightWall),
            EdgeClass::SlitLeft => Some(Self::SlitLeft),
            EdgeClass::SlitRight => Some(Self::SlitRight),
        }
    }

    pub fn class(self) -> EdgeClass {
        match self {
            Self::LeftWall => EdgeClass::LeftWall,
            Self::RightWall => EdgeClass::RightWall,
            Self::SlitLeft => EdgeClass::SlitLeft,
            Self::SlitRight => EdgeClass::SlitRight,
        }
    }

    pub fn as_str(self) -> &'static str {
        self.class().as_str()
    }
}

/// Boundary arcs of a truncated window; both slit sides form one arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryPart {
    LeftWall,
    RightWall,
    Slit,
    Top,
    Bottom,
}

impl BoundaryPart {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundaryPart::LeftWall => "left_wall",
            BoundaryPart::RightWall => "right_wall",
            BoundaryPart::Slit => "slit",
            BoundaryPart::Top => "top",
            BoundaryPart::Bottom => "bottom",
        }
    }
}

impl From<BoundaryComponent> for BoundaryPart {
    fn from(c: BoundaryComponent) -> Self {
        match c {
            BoundaryComponent::LeftWall => BoundaryPart::LeftWall,
            BoundaryComponent::RightWall => BoundaryPart::RightWall,
            BoundaryComponent::SlitLeft | BoundaryComponent::SlitRight => BoundaryPart::Slit,
        }
    }
}

/// The imagined face across a boundary edge, one per boundary edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryFace {
    pub edge: EdgeId,
    pub component: BoundaryComponent,
}

impl BoundaryFace {
    pub fn from_edge(spec: &StripSpec, edge: EdgeId) -> Result<Option<Self>> {
        Ok(BoundaryComponent::from_class(classify_edge(spec, &edge)?).map(|component| Self { edge, component }))
    }

    /// Center of the imagined face, outside the domain across `edge`.
    pub fn center(&self) -> Complex64 {
        let dx = match self.component {
            BoundaryComponent::LeftWall | BoundaryComponent::SlitRight => -0.5,
            BoundaryComponent::RightWall | BoundaryComponent::SlitLeft => 0.5,
        };
        self.edge.midpoint() + dx
    }

    /// The real face on the inside of `edge`.
    pub fn inner_face(&self) -> Face {
        let dx = match self.component {
            BoundaryComponent::LeftWall | BoundaryComponent::SlitRight => 1,
            BoundaryComponent::RightWall | BoundaryComponent::SlitLeft => -1,
        };
        Face { x2: self.edge.x2 + dx, y2: self.edge.y2 }
    }
}

/// Rows `y_min ≤ y ≤ y_max` of a strip; face rows lie strictly between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub y_min: i32,
    pub y_max: i32,
}

impl Window {
    pub fn new(y_min: i32, y_max: i32) -> Result<Self> {
        if y_min > y_max {
            return Err(Error::InvalidArgument(format!("empty window {y_min}:{y_max}")));
        }
        Ok(Self { y_min, y_max })
    }

    /// Number of face rows.
    pub fn height(&self) -> usize {
        (self.y_max - self.y_min) as usize
    }

    pub fn rows(&self) -> impl Iterator<Item = i32> {
        self.y_min..=self.y_max
    }

    pub fn contains_row(&self, y: i32) -> bool {
        self.y_min <= y && y <= self.y_max
    }

    pub fn vertices(&self, spec: &StripSpec) -> Vec<Vertex> {
        let mut out = Vec::with_capacity((spec.width() + 1) * (self.height() + 1));
        for y in self.rows() {
            for x in spec.a..=spec.b {
                out.push(Vertex::new(x, y));
            }
        }
        out
    }

    pub fn faces(&self, spec: &StripSpec) -> Vec<Face> {
        let mut out = Vec::with_capacity(spec.width() * self.height());
        for y in self.y_min..self.y_max {
            for x2 in spec.cross_section_x2() {
                out.push(Face { x2, y2: 2 * y + 1 });
            }
        }
        out
    }

    pub fn horizontal_edges(&self, spec: &StripSpec) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(spec.width() * (self.height() + 1));
        for y in self.rows() {
            for x2 in spec.cross_section_x2() {
                out.push(EdgeId::horizontal(x2, y));
            }
        }
        out
    }

    pub fn vertical_edges(&self, spec: &StripSpec) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for y in self.y_min..self.y_max {
            let y2 = 2 * y + 1;
            for x in spec.a..=spec.b {
                if spec.slit_at(2 * x, y2) {
                    out.push(EdgeId::slit(y2, SlitSide::Left));
                    out.push(EdgeId::slit(y2, SlitSide::Right));
                } else {
                    out.push(EdgeId::vertical(x, y2));
                }
            }
        }
        out
    }

    pub fn edges(&self, spec: &StripSpec) -> Vec<EdgeId> {
        let mut out = self.horizontal_edges(spec);
        out.extend(self.vertical_edges(spec));
        out
    }

    pub fn boundary_faces(&self, spec: &StripSpec) -> Vec<BoundaryFace> {
        self.vertical_edges(spec)
            .into_iter()
            .filter_map(|e| BoundaryFace::from_edge(spec, e).expect("window edges are in the graph"))
            .collect()
    }

    pub fn corners(&self, spec: &StripSpec) -> Vec<Corner> {
        self.faces(spec).iter().flat_map(|f| f.corners()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cross_section_enumerates_half_integers() {
        let s = StripSpec::strip(-1, 1).unwrap();
        assert_eq!(cross_section(&s), vec![-0.5, 0.5]);
        let s = StripSpec::strip(-2, 2).unwrap();
        assert_eq!(cross_section(&s), vec![-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(StripSpec::strip(1, 1).is_err());
        assert!(StripSpec::slit_strip(0, 3).is_err());
        assert!(StripSpec::slit_strip(-3, 0).is_err());
        assert!(StripSpec::slit_strip(-1, 1).is_ok());
    }

    #[test]
    fn classify_walls_and_slit() {
        let s = StripSpec::slit_strip(-2, 3).unwrap();
        let c = classify_edge(&s, &EdgeId::vertical(-2, 1)).unwrap();
        assert_eq!(c, EdgeClass::LeftWall);
        assert_eq!(c.tangent(), Some(-Complex64::i()));
        let c = classify_edge(&s, &EdgeId::vertical(3, -3)).unwrap();
        assert_eq!(c, EdgeClass::RightWall);
        assert_eq!(c.tangent(), Some(Complex64::i()));
        assert_eq!(classify_edge(&s, &EdgeId::horizontal(1, 0)).unwrap(), EdgeClass::Interior);
        assert_eq!(classify_edge(&s, &EdgeId::slit(-1, SlitSide::Left)).unwrap(), EdgeClass::SlitLeft);
        assert_eq!(classify_edge(&s, &EdgeId::slit(-1, SlitSide::Right)).unwrap(), EdgeClass::SlitRight);
        assert_eq!(classify_edge(&s, &EdgeId::vertical(0, 1)).unwrap(), EdgeClass::Interior);
    }

    #[test]
    fn riemann_line_matches_tangent() {
        for c in [EdgeClass::LeftWall, EdgeClass::RightWall, EdgeClass::SlitLeft, EdgeClass::SlitRight] {
            let tau = c.tangent().unwrap();
            let line = Complex64::i() / tau.sqrt();
            let u = c.riemann_line().unwrap();
            // same line through the origin: u·conj(line) is real
            assert!((u * line.conj()).im.abs() < 1e-15, "{c:?}");
        }
    }

    #[test]
    fn edges_outside_graph_are_rejected() {
        let s = StripSpec::slit_strip(-2, 2).unwrap();
        assert!(classify_edge(&s, &EdgeId::vertical(3, 1)).is_err());
        assert!(classify_edge(&s, &EdgeId::horizontal(5, 0)).is_err());
        // the slit position needs a side, and only below the tip
        assert!(classify_edge(&s, &EdgeId::vertical(0, -1)).is_err());
        assert!(classify_edge(&s, &EdgeId::slit(1, SlitSide::Left)).is_err());
        let strip = s.without_slit();
        assert!(classify_edge(&strip, &EdgeId::slit(-1, SlitSide::Left)).is_err());
    }

    #[test]
    fn doubled_slit_edges() {
        let s = StripSpec::slit_strip(-3, 2).unwrap();
        let w = Window::new(-4, 4).unwrap();
        let edges = w.vertical_edges(&s);
        for y in -4..4 {
            let y2 = 2 * y + 1;
            let n = edges.iter().filter(|e| e.x2 == 0 && e.y2 == y2).count();
            assert_eq!(n, if y2 < 0 { 2 } else { 1 });
        }
    }

    #[test]
    fn window_counts() {
        let s = StripSpec::strip(-3, 4).unwrap();
        let w = Window::new(-2, 5).unwrap();
        let (l, h) = (s.width(), w.height());
        assert_eq!(w.vertices(&s).len(), (l + 1) * (h + 1));
        assert_eq!(w.horizontal_edges(&s).len(), l * (h + 1));
        assert_eq!(w.vertical_edges(&s).len(), (l + 1) * h);
        assert_eq!(w.faces(&s).len(), l * h);
        assert_eq!(w.boundary_faces(&s).len(), 2 * h);
        let slit = StripSpec::slit_strip(-3, 4).unwrap();
        assert_eq!(w.boundary_faces(&slit).len(), 2 * h + 2 * 2);
    }

    #[test]
    fn corner_edges_share_vertex_and_face() {
        let s = StripSpec::slit_strip(-2, 2).unwrap();
        let w = Window::new(-3, 3).unwrap();
        for c in w.corners(&s) {
            let d = c.vertex().point() - c.face.center();
            assert!((d.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            for e in c.edges(&s) {
                assert!(e.in_graph(&s));
                assert!(e.endpoints().contains(&c.vertex()));
                let m = e.midpoint() - c.face.center();
                assert!((m.norm() - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn faces_next_to_slit_see_their_own_side() {
        let s = StripSpec::slit_strip(-2, 2).unwrap();
        let west_of_slit = Face { x2: -1, y2: -1 };
        assert_eq!(west_of_slit.edges(&s)[1].side, SlitSide::Left);
        let east_of_slit = Face { x2: 1, y2: -1 };
        assert_eq!(east_of_slit.edges(&s)[3].side, SlitSide::Right);
        let above = Face { x2: 1, y2: 1 };
        assert_eq!(above.edges(&s)[3].side, SlitSide::None);
    }

    #[test]
    fn boundary_faces_sit_across_their_edge() {
        let s = StripSpec::slit_strip(-2, 3).unwrap();
        let w = Window::new(-2, 2).unwrap();
        for bf in w.boundary_faces(&s) {
            let inner = bf.inner_face();
            let mid = bf.edge.midpoint();
            assert!((bf.center() + inner.center() - mid * 2.0).norm() < 1e-15);
            assert!(inner.edges(&s).contains(&bf.edge));
        }
    }

    proptest! {
        #[test]
        fn cross_section_length_is_width(a in -40i32..0, b in 1i32..40) {
            let s = StripSpec::slit_strip(a, b).unwrap();
            let xs = cross_section(&s);
            prop_assert_eq!(xs.len(), (b - a) as usize);
            prop_assert!(xs.windows(2).all(|w| w[0] < w[1]));
            for (j, x2) in s.cross_section_x2().enumerate() {
                prop_assert_eq!(s.slot(x2), Some(j));
            }
        }

        #[test]
        fn interior_faces_have_four_edges_in_graph(a in -6i32..0, b in 1i32..6, y in -6i32..6) {
            let s = StripSpec::slit_strip(a, b).unwrap();
            for x2 in s.cross_section_x2() {
                let f = Face { x2, y2: 2 * y + 1 };
                let edges = f.edges(&s);
                prop_assert!(edges.iter().all(|e| e.in_graph(&s)));
            }
        }
    }
}
