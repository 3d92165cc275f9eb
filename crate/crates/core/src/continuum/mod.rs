//! Continuum counterparts on the unit strip `[−½, ½] × ℝ` and the
//! slit-strip obtained by removing `{0} × (−∞, 0]`.

mod conformal;
mod poles;
mod quadrature;

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::ModeIndex;
pub use crate::slit::Extremity;

pub use conformal::{conformal_map, pulled_back_monomial, Conformal};
pub use poles::{
    binomial, mix_to_pole_t_closed, mix_to_pole_t_normalized, pole_to_mix_t_closed, pure_pole, PurePole, PurePoleTable,
};
pub use quadrature::{continuum_inner_product, integrate, Quadrature};

const EDGE_SLACK: f64 = 1e-12;

/// Quarter-integer Fourier mode of the strip (`Top`) or of one leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuumMode {
    pub region: Extremity,
    pub k: ModeIndex,
}

impl ContinuumMode {
    pub fn new(region: Extremity, k: ModeIndex) -> Self {
        Self { region, k }
    }

    pub fn constant(&self) -> Complex64 {
        let k = self.k.value();
        match self.region {
            Extremity::Top => Complex64::from_polar(1.0, PI * (-k / 2.0 - 0.25)),
            Extremity::Left => Complex64::from_polar(SQRT_2, PI * (-k - 0.25)),
            Extremity::Right => Complex64::from_polar(SQRT_2, -PI / 4.0),
        }
    }

    /// Real interval carrying the restriction.
    pub fn support(&self) -> (f64, f64) {
        match self.region {
            Extremity::Top => (-0.5, 0.5),
            Extremity::Left => (-0.5, 0.0),
            Extremity::Right => (0.0, 0.5),
        }
    }

    fn frequency(&self) -> f64 {
        match self.region {
            Extremity::Top => PI * self.k.value(),
            _ => 2.0 * PI * self.k.value(),
        }
    }

    /// Full-plane value `C e^{−iωz}` at a point of the closed (half-)strip.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (lo, hi) = self.support();
        if !z.re.is_finite() || !z.im.is_finite() || z.re < lo - EDGE_SLACK || z.re > hi + EDGE_SLACK {
            return Err(Error::OutsideDomain(format!("{z} for mode {} {}", self.region.letter(), self.k)));
        }
        Ok(self.constant() * (Complex64::new(0.0, -self.frequency()) * z).exp())
    }

    /// Restriction to the cross-section, extended by zero off the support.
    pub fn restriction(&self, x: f64) -> Complex64 {
        let (lo, hi) = self.support();
        if x < lo - EDGE_SLACK || x > hi + EDGE_SLACK {
            return Complex64::new(0.0, 0.0);
        }
        self.constant() * Complex64::from_polar(1.0, -self.frequency() * x)
    }
}

/// Free-function form of [`ContinuumMode::eval`].
pub fn mode(region: Extremity, k: ModeIndex, z: Complex64) -> Result<Complex64> {
    ContinuumMode::new(region, k).eval(z)
}
