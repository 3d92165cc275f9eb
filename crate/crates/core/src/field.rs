//! Edge functions on a truncated strip or slit-strip window.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{CornerPos, EdgeId, Orientation, SlitSide, StripSpec, Window};
use crate::space::CrossSectionFn;

/// The value whose corner projections are `c1` (coefficient `coef1`) and `c2` (`coef2`).
pub fn reconstruct_with(c1: Complex64, coef1: Complex64, c2: Complex64, coef2: Complex64) -> Complex64 {
    (2.0 * (c1 - c2) / (coef1 - coef2)).conj()
}

/// Edge value sharing the projection of `a.0` at corner `a.1` and of `b.0` at `b.1`.
pub fn reconstruct(a: (Complex64, CornerPos), b: (Complex64, CornerPos)) -> Complex64 {
    let (ca, cb) = (a.1.coefficient(), b.1.coefficient());
    reconstruct_with(0.5 * (a.0 + ca * a.0.conj()), ca, 0.5 * (b.0 + cb * b.0.conj()), cb)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    spec: StripSpec,
    window: Window,
    mesh: f64,
    /// Rows `y_min..=y_max`, `ℓ` values each.
    horizontal: Vec<Complex64>,
    /// Face rows `y_min..y_max`, `ℓ+1` values each; at the slit this holds the `0⁻` copy.
    vertical: Vec<Complex64>,
    /// `0⁺` copy of the slit edge per face row (unused above the tip).
    slit_right: Vec<Complex64>,
}

impl EdgeField {
    pub fn zeros(spec: StripSpec, window: Window) -> Self {
        let (l, h) = (spec.width(), window.height());
        let z = Complex64::new(0.0, 0.0);
        Self {
            spec,
            window,
            mesh: 1.0,
            horizontal: vec![z; l * (h + 1)],
            vertical: vec![z; (l + 1) * h],
            slit_right: vec![z; h],
        }
    }

    /// Takes the horizontal rows and fills every vertical edge from the corner
    /// projections of one adjacent face. Slit edges use the face on their own side.
    pub fn from_rows(spec: StripSpec, window: Window, rows: Vec<CrossSectionFn>) -> Result<Self> {
        if rows.len() != window.height() + 1 {
            return Err(Error::Mismatch(format!("{} rows for a window of height {}", rows.len(), window.height())));
        }
        let mut field = Self::zeros(spec, window);
        let l = spec.width();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != l {
                return Err(Error::Mismatch("row width differs from strip width".into()));
            }
            field.horizontal[r * l..(r + 1) * l].copy_from_slice(row.values());
        }
        field.fill_vertical();
        Ok(field)
    }

    fn fill_vertical(&mut self) {
        let l = self.spec.width();
        let a = self.spec.a();
        for r in 0..self.window.height() {
            let y2 = 2 * (self.window.y_min + r as i32) + 1;
            let south = &self.horizontal[r * l..(r + 1) * l];
            let north = &self.horizontal[(r + 1) * l..(r + 2) * l];
            let from_east = |j: usize| reconstruct((south[j], CornerPos::SW), (north[j], CornerPos::NW));
            let from_west = |j: usize| reconstruct((south[j], CornerPos::SE), (north[j], CornerPos::NE));
            for i in 0..=l {
                let x = a + i as i32;
                let v = if self.spec.slit_at(2 * x, y2) {
                    self.slit_right[r] = from_east(i);
                    from_west(i - 1)
                } else if i < l {
                    from_east(i)
                } else {
                    from_west(i - 1)
                };
                self.vertical[r * (l + 1) + i] = v;
            }
        }
    }

    pub fn spec(&self) -> &StripSpec {
        &self.spec
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Edge length `δ` of the coordinates the values refer to.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    /// Values multiplied by `value_scale`, mesh set to `mesh`.
    pub fn rescaled(&self, value_scale: f64, mesh: f64) -> Self {
        let s = |v: &Vec<Complex64>| v.iter().map(|z| z * value_scale).collect();
        Self {
            spec: self.spec,
            window: self.window,
            mesh,
            horizontal: s(&self.horizontal),
            vertical: s(&self.vertical),
            slit_right: s(&self.slit_right),
        }
    }

    fn slot(&self, e: &EdgeId) -> Option<(bool, usize)> {
        if !e.in_graph(&self.spec) {
            return None;
        }
        let l = self.spec.width();
        match e.orientation {
            Orientation::Horizontal => {
                let y = e.y2 / 2;
                if !self.window.contains_row(y) {
                    return None;
                }
                let r = (y - self.window.y_min) as usize;
                Some((false, r * l + self.spec.slot(e.x2)?))
            }
            Orientation::Vertical => {
                let yl = (e.y2 - 1) / 2;
                if yl < self.window.y_min || yl >= self.window.y_max {
                    return None;
                }
                let r = (yl - self.window.y_min) as usize;
                if e.side == SlitSide::Right {
                    return Some((true, r));
                }
                let i = ((e.x2 / 2) - self.spec.a()) as usize;
                Some((false, self.horizontal.len() + r * (l + 1) + i))
            }
        }
    }

    pub fn get(&self, e: &EdgeId) -> Option<Complex64> {
        match self.slot(e)? {
            (true, r) => Some(self.slit_right[r]),
            (false, j) if j < self.horizontal.len() => Some(self.horizontal[j]),
            (false, j) => Some(self.vertical[j - self.horizontal.len()]),
        }
    }

    pub fn set(&mut self, e: &EdgeId, value: Complex64) -> Result<()> {
        let n = self.horizontal.len();
        match self.slot(e).ok_or_else(|| Error::EdgeNotInGraph(e.to_string()))? {
            (true, r) => self.slit_right[r] = value,
            (false, j) if j < n => self.horizontal[j] = value,
            (false, j) => self.vertical[j - n] = value,
        }
        Ok(())
    }

    /// Horizontal row `y` as a cross-section function.
    pub fn row(&self, y: i32) -> Option<CrossSectionFn> {
        if !self.window.contains_row(y) {
            return None;
        }
        let l = self.spec.width();
        let r = (y - self.window.y_min) as usize;
        CrossSectionFn::new(self.spec, self.horizontal[r * l..(r + 1) * l].to_vec()).ok()
    }

    /// All edges of the window with their values.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, Complex64)> + '_ {
        self.window.edges(&self.spec).into_iter().map(move |e| {
            let v = self.get(&e).expect("window edge");
            (e, v)
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.horizontal.iter().chain(&self.vertical).chain(&self.slit_right).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Position of an edge midpoint in the field's own units (`δ` per lattice step).
    pub fn position(&self, e: &EdgeId) -> Complex64 {
        e.midpoint() * self.mesh
    }

    /// Largest `|F|` over the edges of each face row, split at the slit into the
    /// two legs. Residual checks are measured against these.
    pub fn scales(&self) -> RowScales {
        let l = self.spec.width();
        let h = self.window.height();
        let split = |x2: i32, y2: i32| self.spec.is_slit() && y2 < 0 && x2 > 0;
        let mut out = vec![[0.0f64; 2]; h];
        for (r, scale) in out.iter_mut().enumerate() {
            let y2 = 2 * (self.window.y_min + r as i32) + 1;
            for rr in [r, r + 1] {
                for (j, x2) in self.spec.cross_section_x2().enumerate() {
                    let side = split(x2, y2) as usize;
                    scale[side] = scale[side].max(self.horizontal[rr * l + j].norm());
                }
            }
            for i in 0..=l {
                let x2 = 2 * (self.spec.a() + i as i32);
                let side = split(x2, y2) as usize;
                scale[side] = scale[side].max(self.vertical[r * (l + 1) + i].norm());
            }
            if self.spec.slit_at(0, y2) {
                scale[1] = scale[1].max(self.slit_right[r].norm());
            }
            if !(self.spec.is_slit() && y2 < 0) {
                scale[1] = scale[0];
            }
        }
        RowScales { y_min: self.window.y_min, slit: self.spec.is_slit(), scales: out }
    }

    /// Columns `orientation,x2,y2,slit_side,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "orientation,x2,y2,slit_side,re,im")?;
        for (e, z) in self.iter() {
            let o = match e.orientation {
                Orientation::Horizontal => "horizontal",
                Orientation::Vertical => "vertical",
            };
            writeln!(w, "{o},{},{},{},{:.17e},{:.17e}", e.x2, e.y2, e.side.as_str(), z.re, z.im)?;
        }
        Ok(())
    }
}

/// Per face row magnitude of a field, used to make residuals relative.
#[derive(Debug, Clone)]
pub struct RowScales {
    y_min: i32,
    slit: bool,
    scales: Vec<[f64; 2]>,
}

impl RowScales {
    /// Scale of the face row with centre height `y2` (odd) on the side of `x2`.
    pub fn at(&self, x2: i32, y2: i32) -> f64 {
        let r = ((y2 - 1) / 2 - self.y_min) as usize;
        let side = (self.slit && y2 < 0 && x2 > 0) as usize;
        self.scales[r][side]
    }

    /// Scale around a vertex: the largest of its adjacent face rows on both sides.
    pub fn around_vertex(&self, x2: i32, y2: i32) -> f64 {
        let rows = self.scales.len() as i32;
        let mut s = 0.0f64;
        for dy in [-1, 1] {
            let r = (y2 + dy - 1) / 2 - self.y_min;
            if r < 0 || r >= rows {
                continue;
            }
            for dx in [-1, 1] {
                s = s.max(self.at(x2 + dx, y2 + dy));
            }
        }
        s
    }

    pub fn max(&self) -> f64 {
        self.scales.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// `residual / scale`, with zero over zero read as zero.
pub fn relative(residual: f64, scale: f64) -> f64 {
    if residual == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        residual / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::StripKind;

    #[test]
    fn reconstruct_inverts_projections() {
        let f = Complex64::new(0.3, -1.7);
        for (p, q) in [(CornerPos::SW, CornerPos::NW), (CornerPos::SE, CornerPos::NE), (CornerPos::NW, CornerPos::NE)] {
            assert!((reconstruct((f, p), (f, q)) - f).norm() < 1e-15);
        }
    }

    #[test]
    fn get_set_roundtrip_with_slit_copies() {
        let s = StripSpec::slit_strip(-2, 2).unwrap();
        let w = Window::new(-2, 2).unwrap();
        let mut f = EdgeField::zeros(s, w);
        for (n, e) in w.edges(&s).iter().enumerate() {
            f.set(e, Complex64::new(n as f64, 1.0)).unwrap();
        }
        for (n, e) in w.edges(&s).iter().enumerate() {
            assert_eq!(f.get(e), Some(Complex64::new(n as f64, 1.0)));
        }
        assert!(f.get(&EdgeId::horizontal(1, 3)).is_none());
        assert!(f.set(&EdgeId::vertical(0, -1), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn csv_lists_every_edge() {
        let s = StripSpec::centered(3, StripKind::SlitStrip).unwrap();
        let w = Window::new(-1, 1).unwrap();
        let f = EdgeField::zeros(s, w);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + w.edges(&s).len());
        assert!(text.contains(",left,"));
        assert!(text.contains(",right,"));
    }
}
