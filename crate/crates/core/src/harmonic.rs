//! Discrete harmonic measure on a truncated window.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::analysis::boundary_face_weight;
use crate::error::{Error, Result};
use crate::geometry::{classify_edge, BoundaryPart, Face, StripSpec, Vertex, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Vertices,
    Faces,
}

pub const MAX_SWEEPS: usize = 1_000_000;
pub const TOLERANCE: f64 = 1e-10;

/// Solution of the Dirichlet problem with data 0 on the chosen boundary
/// parts and 1 on the rest.
#[derive(Debug, Clone)]
pub struct HarmonicMeasure {
    pub carrier: Carrier,
    spec: StripSpec,
    window: Window,
    values: Vec<f64>,
    pub sweeps: usize,
    pub residual: f64,
}

struct Node {
    neighbours: Vec<(usize, f64)>,
    fixed: f64,
    weight: f64,
    colour: bool,
}

fn vertex_part(spec: &StripSpec, window: Window, v: Vertex) -> Option<BoundaryPart> {
    let (x, y) = (v.x2 / 2, v.y2 / 2);
    if spec.is_slit() && x == 0 && y <= 0 {
        Some(BoundaryPart::Slit)
    } else if x == spec.a() {
        Some(BoundaryPart::LeftWall)
    } else if x == spec.b() {
        Some(BoundaryPart::RightWall)
    } else if y == window.y_min {
        Some(BoundaryPart::Bottom)
    } else if y == window.y_max {
        Some(BoundaryPart::Top)
    } else {
        None
    }
}

pub fn harmonic_measure(
    spec: &StripSpec,
    window: Window,
    subset: &[BoundaryPart],
    carrier: Carrier,
) -> Result<HarmonicMeasure> {
    let data = |p: BoundaryPart| if subset.contains(&p) { 0.0 } else { 1.0 };
    let l = spec.width();
    let h = window.height();
    // Unknown nodes with their neighbours; boundary contributions folded into `fixed`.
    let mut nodes: Vec<Node> = Vec::new();
    let mut index = Vec::new();
    let mut values;
    match carrier {
        Carrier::Vertices => {
            let verts = window.vertices(spec);
            values = vec![0.0; verts.len()];
            let slot = |x: i32, y: i32| (y - window.y_min) as usize * (l + 1) + (x - spec.a()) as usize;
            let mut unknown = vec![usize::MAX; verts.len()];
            for (j, v) in verts.iter().enumerate() {
                match vertex_part(spec, window, *v) {
                    Some(p) => values[j] = data(p),
                    None => {
                        unknown[j] = nodes.len();
                        index.push(j);
                        nodes.push(Node {
                            neighbours: vec![],
                            fixed: 0.0,
                            weight: 4.0,
                            colour: (v.x2 / 2 + v.y2 / 2) % 2 == 0,
                        });
                    }
                }
            }
            for (n, &j) in index.iter().enumerate() {
                let v = verts[j];
                let (x, y) = (v.x2 / 2, v.y2 / 2);
                for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    let k = slot(x + dx, y + dy);
                    if unknown[k] == usize::MAX {
                        nodes[n].fixed += values[k];
                    } else {
                        nodes[n].neighbours.push((unknown[k], 1.0));
                    }
                }
            }
        }
        Carrier::Faces => {
            let faces = window.faces(spec);
            values = vec![0.0; faces.len()];
            let wb = boundary_face_weight();
            for (j, p) in faces.iter().enumerate() {
                index.push(j);
                let r = j / l;
                let mut node = Node { neighbours: vec![], fixed: 0.0, weight: 0.0, colour: (j % l + r).is_multiple_of(2) };
                if r + 1 < h {
                    node.neighbours.push((j + l, 1.0));
                } else {
                    node.fixed += data(BoundaryPart::Top);
                }
                if r > 0 {
                    node.neighbours.push((j - l, 1.0));
                } else {
                    node.fixed += data(BoundaryPart::Bottom);
                }
                node.weight += 2.0;
                let [_, east, _, west] = p.edges(spec);
                for (edge, dj) in [(east, 1isize), (west, -1)] {
                    let class = classify_edge(spec, &edge)?;
                    if class.is_boundary() {
                        let part = BoundaryPart::from(crate::geometry::BoundaryComponent::from_class(class).unwrap());
                        node.fixed += wb * data(part);
                        node.weight += wb;
                    } else {
                        node.neighbours.push(((j as isize + dj) as usize, 1.0));
                        node.weight += 1.0;
                    }
                }
                nodes.push(node);
            }
        }
    }

    let mut u = vec![0.5; nodes.len()];
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut change = 0.0f64;
        for colour in [true, false] {
            for (n, node) in nodes.iter().enumerate() {
                if node.colour != colour {
                    continue;
                }
                let s: f64 = node.neighbours.iter().map(|(m, w)| w * u[*m]).sum();
                let new = (s + node.fixed) / node.weight;
                change = change.max((new - u[n]).abs());
                u[n] = new;
            }
        }
        residual = change;
        if change <= TOLERANCE {
            break;
        }
    }
    if residual > TOLERANCE {
        return Err(Error::NoConvergence { iterations: sweeps, residual });
    }
    for (n, &j) in index.iter().enumerate() {
        values[j] = u[n];
    }
    Ok(HarmonicMeasure { carrier, spec: *spec, window, values, sweeps, residual })
}

impl HarmonicMeasure {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vertex(&self, v: Vertex) -> Option<f64> {
        if self.carrier != Carrier::Vertices {
            return None;
        }
        let (x, y) = (v.x2 / 2, v.y2 / 2);
        if x < self.spec.a() || x > self.spec.b() || !self.window.contains_row(y) {
            return None;
        }
        Some(self.values[(y - self.window.y_min) as usize * (self.spec.width() + 1) + (x - self.spec.a()) as usize])
    }

    pub fn face(&self, p: Face) -> Option<f64> {
        if self.carrier != Carrier::Faces {
            return None;
        }
        let j = self.spec.slot(p.x2)?;
        let r = (p.y2 - 1) / 2 - self.window.y_min;
        if r < 0 || r >= self.window.height() as i32 {
            return None;
        }
        Some(self.values[r as usize * self.spec.width() + j])
    }

    /// Columns `carrier,x2,y2,value`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "carrier,x2,y2,value")?;
        match self.carrier {
            Carrier::Vertices => {
                for (v, h) in self.window.vertices(&self.spec).iter().zip(&self.values) {
                    writeln!(w, "vertex,{},{},{:.17e}", v.x2, v.y2, h)?;
                }
            }
            Carrier::Faces => {
                for (p, h) in self.window.faces(&self.spec).iter().zip(&self.values) {
                    writeln!(w, "face,{},{},{:.17e}", p.x2, p.y2, h)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StripKind;

    const ALL: [BoundaryPart; 5] =
        [BoundaryPart::LeftWall, BoundaryPart::RightWall, BoundaryPart::Slit, BoundaryPart::Top, BoundaryPart::Bottom];

    #[test]
    fn trivial_data() {
        let s = StripSpec::centered(6, StripKind::SlitStrip).unwrap();
        let w = Window::new(-4, 4).unwrap();
        for carrier in [Carrier::Vertices, Carrier::Faces] {
            let zero = harmonic_measure(&s, w, &ALL, carrier).unwrap();
            assert!(zero.values().iter().all(|v| v.abs() < 1e-9));
            let one = harmonic_measure(&s, w, &[], carrier).unwrap();
            assert!(one.values().iter().all(|v| (v - 1.0).abs() < 1e-9));
        }
    }

    #[test]
    fn values_in_unit_interval() {
        let s = StripSpec::centered(8, StripKind::SlitStrip).unwrap();
        let w = Window::new(-8, 8).unwrap();
        for carrier in [Carrier::Vertices, Carrier::Faces] {
            let m = harmonic_measure(&s, w, &[BoundaryPart::Slit, BoundaryPart::Top], carrier).unwrap();
            assert!(m.values().iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
        }
    }

    #[test]
    fn decays_towards_the_zero_arc() {
        // Zero on the left wall: the value grows with the distance from it.
        let s = StripSpec::centered(16, StripKind::Strip).unwrap();
        let w = Window::new(-16, 16).unwrap();
        let m = harmonic_measure(&s, w, &[BoundaryPart::LeftWall], Carrier::Vertices).unwrap();
        let row: Vec<f64> = (s.a()..=s.a() + 6).map(|x| m.vertex(Vertex::new(x, 0)).unwrap()).collect();
        assert!(row.windows(2).all(|p| p[0] < p[1]), "{row:?}");
        let f = harmonic_measure(&s, w, &[BoundaryPart::LeftWall], Carrier::Faces).unwrap();
        let row: Vec<f64> = s.cross_section_x2().take(6).map(|x2| f.face(Face { x2, y2: 1 }).unwrap()).collect();
        assert!(row.windows(2).all(|p| p[0] < p[1]), "{row:?}");
    }

    #[test]
    fn converges_on_small_windows() {
        let s = StripSpec::centered(4, StripKind::Strip).unwrap();
        let m = harmonic_measure(&s, Window::new(0, 3).unwrap(), &[BoundaryPart::Top], Carrier::Faces).unwrap();
        assert!(m.residual <= TOLERANCE && m.sweeps < MAX_SWEEPS);
    }
}
