//! Complex functions on a cross-section, as a real inner-product space.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::StripSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionFn {
    spec: StripSpec,
    values: Vec<Complex64>,
}

impl CrossSectionFn {
    pub fn new(spec: StripSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.width() {
            return Err(Error::Mismatch(format!(
                "{} values for a cross-section of width {}",
                values.len(),
                spec.width()
            )));
        }
        Ok(Self { spec, values })
    }

    pub fn zeros(spec: StripSpec) -> Self {
        Self { spec, values: vec![Complex64::new(0.0, 0.0); spec.width()] }
    }

    pub fn constant(spec: StripSpec, c: Complex64) -> Self {
        Self { spec, values: vec![c; spec.width()] }
    }

    pub fn from_fn(spec: StripSpec, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = spec.cross_section_x2().map(|x2| f(x2 as f64 / 2.0)).collect();
        Self { spec, values }
    }

    /// Inverse of [`Self::to_real_vec`].
    pub fn from_real_vec(spec: StripSpec, v: &[f64]) -> Result<Self> {
        if v.len() != 2 * spec.width() {
            return Err(Error::Mismatch(format!("real vector of length {} for width {}", v.len(), spec.width())));
        }
        let values = v.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Ok(Self { spec, values })
    }

    /// The real basis vector with a single 1 at interleaved position `j`.
    pub fn real_basis(spec: StripSpec, j: usize) -> Self {
        let mut f = Self::zeros(spec);
        f.values[j / 2] = if j.is_multiple_of(2) { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 1.0) };
        f
    }

    pub fn spec(&self) -> &StripSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the doubled position `x2`.
    pub fn at(&self, x2: i32) -> Option<Complex64> {
        self.spec.slot(x2).map(|j| self.values[j])
    }

    /// `(Re f(x′₁), Im f(x′₁), Re f(x′₂), …)`.
    pub fn to_real_vec(&self) -> Vec<f64> {
        self.values.iter().flat_map(|z| [z.re, z.im]).collect()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { spec: self.spec, values: self.values.iter().map(|z| z * s).collect() }
    }

    /// `self += s·other`.
    pub fn axpy(&mut self, s: f64, other: &Self) -> Result<()> {
        check_same(self, other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += b * s;
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.axpy(-1.0, other)?;
        Ok(out)
    }

    /// Moves the values onto another spec covering the same positions, zero elsewhere.
    pub fn embed(&self, target: StripSpec) -> Result<Self> {
        let mut out = Self::zeros(target);
        for (x2, v) in self.spec.cross_section_x2().zip(&self.values) {
            let j = target
                .slot(x2)
                .ok_or_else(|| Error::Mismatch(format!("position {} not in target cross-section", x2 as f64 / 2.0)))?;
            out.values[j] = *v;
        }
        Ok(out)
    }

    /// Restriction to a sub-interval `source` of the cross-section.
    pub fn restrict(&self, source: StripSpec) -> Result<Self> {
        let values = source
            .cross_section_x2()
            .map(|x2| {
                self.at(x2).ok_or_else(|| Error::Mismatch(format!("position {} not in cross-section", x2 as f64 / 2.0)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { spec: source, values })
    }

    /// Columns `x_prime,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x_prime,re,im")?;
        for (x2, z) in self.spec.cross_section_x2().zip(&self.values) {
            writeln!(w, "{},{:.17e},{:.17e}", x2 as f64 / 2.0, z.re, z.im)?;
        }
        Ok(())
    }
}

fn check_same(f: &CrossSectionFn, g: &CrossSectionFn) -> Result<()> {
    // Strip and slit-strip with the same walls share a cross-section.
    if f.spec.a() != g.spec.a() || f.spec.b() != g.spec.b() {
        return Err(Error::Mismatch(format!(
            "walls ({}, {}) vs ({}, {})",
            f.spec.a(),
            f.spec.b(),
            g.spec.a(),
            g.spec.b()
        )));
    }
    Ok(())
}

/// `Σ Re(f·ḡ)` over the cross-section.
pub fn inner_product(f: &CrossSectionFn, g: &CrossSectionFn) -> Result<f64> {
    check_same(f, g)?;
    Ok(f.values.iter().zip(&g.values).map(|(a, b)| a.re * b.re + a.im * b.im).sum())
}

/// `x′ ↦ −i·conj f(x′)`.
pub fn reflect(f: &CrossSectionFn) -> CrossSectionFn {
    let values = f.values.iter().map(|z| Complex64::new(-z.im, -z.re)).collect();
    CrossSectionFn { spec: f.spec, values }
}
