//! The uniformizing map `φ(z) = ½√(1 − e^{−2πiz})` of the slit-strip onto the
//! upper half-plane, with `φ(−½) = −1/√2`, top `↦ ∞`, left leg `↦ −½`,
//! right leg `↦ +½` and the slit tip `↦ 0`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{Extremity, EDGE_SLACK};
use crate::error::{Error, Result};
use crate::geometry::SlitSide;
use crate::index::ModeIndex;

/// `φ`, `√φ′` and the two leg-centred shifts, each computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conformal {
    pub phi: Complex64,
    pub sqrt_derivative: Complex64,
    pub phi_plus_half: Complex64,
    pub phi_minus_half: Complex64,
}

impl Conformal {
    pub fn derivative(&self) -> Complex64 {
        self.sqrt_derivative * self.sqrt_derivative
    }
}

/// `side` selects the prime end for points on the slit `x = 0, y < 0`;
/// `SlitSide::Left` is the `0⁻` side bounding the left leg.
pub fn conformal_map(z: Complex64, side: SlitSide) -> Result<Conformal> {
    if !z.re.is_finite() || !z.im.is_finite() || z.re.abs() > 0.5 + EDGE_SLACK {
        return Err(Error::OutsideDomain(format!("{z} is outside the slit-strip")));
    }
    let on_slit_line = z.re == 0.0 && z.im <= 0.0;
    if on_slit_line && z.im == 0.0 {
        return Err(Error::OutsideDomain("the slit tip has no conformal derivative".into()));
    }
    let sign = if on_slit_line {
        match side {
            SlitSide::Left => -1.0,
            SlitSide::Right => 1.0,
            SlitSide::None => {
                return Err(Error::OutsideDomain(format!("{z} lies on the slit; a side is required")));
            }
        }
    } else {
        z.re.signum()
    };

    let w = Complex64::from_polar((2.0 * PI * z.im).exp(), -2.0 * PI * z.re);
    let mut phi = 0.5 * (Complex64::new(1.0, 0.0) - w).sqrt();
    if phi.im.abs() <= 1e-14 * phi.norm() {
        // boundary point: the sign of Re φ follows the side of the strip
        if phi.re * sign < 0.0 {
            phi = -phi;
        }
        phi.im = 0.0;
    } else if phi.im < 0.0 {
        phi = -phi;
    }

    let (phi_plus_half, phi_minus_half) = if phi.re <= 0.0 {
        let m = phi - 0.5;
        (-w / (4.0 * m), m)
    } else {
        let p = phi + 0.5;
        (p, -w / (4.0 * p))
    };

    // (√π/2) e^{iπ/4} e^{−iπz} / √φ squares to φ′ = πi e^{−2πiz}/(4φ) and is
    // continuous on the closed upper half-plane minus the tip.
    let e = Complex64::from_polar((PI * z.im).exp(), -PI * z.re);
    let sqrt_derivative = Complex64::from_polar(0.5 * PI.sqrt(), FRAC_PI_4) * e / phi.sqrt();
    Ok(Conformal { phi, sqrt_derivative, phi_plus_half, phi_minus_half })
}

/// `q_{T;k} = iφ^{k−½}√φ′`, `q_{L;k} = i(φ+½)^{−k−½}√φ′`, `q_{R;k} = i(φ−½)^{−k−½}√φ′`.
pub fn pulled_back_monomial(which: Extremity, k: ModeIndex, z: Complex64, side: SlitSide) -> Result<Complex64> {
    if !k.is_positive() {
        return Err(Error::InvalidArgument(format!("monomial index {k} must be positive")));
    }
    let c = conformal_map(z, side)?;
    let n = k.ordinal() as i32;
    let power = match which {
        Extremity::Top => c.phi.powi(n),
        Extremity::Left => c.phi_plus_half.powi(-n - 1),
        Extremity::Right => c.phi_minus_half.powi(-n - 1),
    };
    Ok(Complex64::i() * power * c.sqrt_derivative)
}
