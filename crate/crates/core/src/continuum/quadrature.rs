//! Gauss–Legendre panels on `[−½, ½]` with a quartic substitution at the
//! break points `−½, 0, ½`, where the integrands may blow up like `|x − c|^{−½}`.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

const BREAKS: [f64; 3] = [-0.5, 0.0, 0.5];

#[derive(Debug, Clone)]
pub struct Quadrature {
    rule: GaussLegendre,
    pub tolerance: f64,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self::new(16, 1e-8, 1 << 10)
    }
}

impl Quadrature {
    pub fn new(degree: usize, tolerance: f64, max_panels: usize) -> Self {
        let degree = NonZeroUsize::new(degree.max(1)).expect("nonzero degree");
        Self { rule: GaussLegendre::new(degree), tolerance, max_panels }
    }

    /// `∫` over `x = c + (d − c)t⁴`, `t ∈ [0, 1]`, split into `panels` pieces.
    fn half_interval<F>(&self, c: f64, d: f64, panels: usize, h: &F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let scale = d - c;
        let width = 1.0 / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let (t0, t1) = (p as f64 * width, (p + 1) as f64 * width);
            let half = 0.5 * (t1 - t0);
            let mid = 0.5 * (t1 + t0);
            for &(node, weight) in self.rule.as_node_weight_pairs() {
                let t = mid + half * node;
                let t2 = t * t;
                let x = c + scale * t2 * t2;
                total += weight * half * 4.0 * scale * t2 * t * h(x)?;
            }
        }
        Ok(total)
    }

    fn estimate<F>(&self, panels: usize, h: &F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut total = 0.0;
        for pair in BREAKS.windows(2) {
            let mid = 0.5 * (pair[0] + pair[1]);
            total += self.half_interval(pair[0], mid, panels, h)?;
            total -= self.half_interval(pair[1], mid, panels, h)?;
        }
        Ok(total)
    }

    /// `∫_{−½}^{½} h`, doubling the panel count until successive estimates agree.
    pub fn integrate<F>(&self, h: F) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut panels = 1;
        let mut prev = self.estimate(panels, &h)?;
        let mut diff = f64::INFINITY;
        while panels < self.max_panels {
            panels *= 2;
            let next = self.estimate(panels, &h)?;
            diff = (next - prev).abs();
            prev = next;
            if diff < self.tolerance {
                return Ok(prev);
            }
        }
        Err(Error::Quadrature(diff))
    }
}

/// Free-function form of [`Quadrature::integrate`] with default settings.
pub fn integrate<F>(h: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Quadrature::default().integrate(h)
}

/// `⟨f, g⟩ = ∫_{−½}^{½} Re(f(x) conj(g(x))) dx`.
pub fn continuum_inner_product<F, G>(q: &Quadrature, f: F, g: G) -> Result<f64>
where
    F: Fn(f64) -> Result<Complex64>,
    G: Fn(f64) -> Result<Complex64>,
{
    q.integrate(|x| Ok((f(x)? * g(x)?.conj()).re))
}
