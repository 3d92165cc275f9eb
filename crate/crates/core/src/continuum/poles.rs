//! Pure pole functions as triangular combinations of pulled-back monomials.
//!
//! `A(k, k′) = ⟨e_{k′}, q_k|_I⟩` (leg modes `e^{L/R}_{−k′}` for the legs) is
//! lower triangular, so subtracting the already built poles from `q_k / A(k, k)`
//! removes the lower singular modes one at a time.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{pulled_back_monomial, ContinuumMode, Extremity, Quadrature};
use crate::error::{Error, Result};
use crate::geometry::SlitSide;
use crate::index::ModeIndex;
use crate::linalg::Matrix;

/// `binom(α, n) = α(α−1)⋯(α−n+1)/n!`, zero for negative `n`.
pub fn binomial(alpha: f64, n: i64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    (0..n).fold(1.0, |acc, j| acc * (alpha - j as f64) / (j + 1) as f64)
}

/// `n = (k − k′)/2` when it is a nonnegative integer.
fn half_gap(k: ModeIndex, kp: ModeIndex) -> Option<i64> {
    let d = (k.doubled() - kp.doubled()) as i64;
    (d >= 0 && d % 4 == 0).then_some(d / 4)
}

fn parity(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `poleToMixT(k, k′) = (√π/2^k)(−1)^{k′+½} binom((k−1)/2, (k−k′)/2)`.
pub fn pole_to_mix_t_closed(k: ModeIndex, kp: ModeIndex) -> f64 {
    match half_gap(k, kp) {
        Some(n) => {
            let sign = parity((kp.doubled() as i64 + 1) / 2);
            PI.sqrt() / 2f64.powf(k.value()) * sign * binomial((k.value() - 1.0) / 2.0, n)
        }
        None => 0.0,
    }
}

/// Row-normalized table `(−¼)^n binom((k−1)/2, n)`, equal to one on the diagonal.
pub fn mix_to_pole_t_normalized(k: ModeIndex, kp: ModeIndex) -> f64 {
    match half_gap(k, kp) {
        Some(n) => (-0.25f64).powi(n as i32) * binomial((k.value() - 1.0) / 2.0, n),
        None => 0.0,
    }
}

/// Exact inverse of [`pole_to_mix_t_closed`]:
/// `(−1)^{k+½}(2^k/√π)(−¼)^n binom((k−1)/2, n)`.
pub fn mix_to_pole_t_closed(k: ModeIndex, kp: ModeIndex) -> f64 {
    let lead = parity((k.doubled() as i64 + 1) / 2) * 2f64.powf(k.value()) / PI.sqrt();
    lead * mix_to_pole_t_normalized(k, kp)
}

/// Mode whose coefficient defines the singular part in extremity `which`.
pub fn singular_mode(which: Extremity, k: ModeIndex) -> ContinuumMode {
    match which {
        Extremity::Top => ContinuumMode::new(which, k),
        _ => ContinuumMode::new(which, -k),
    }
}

fn monomial_on_cross_section(which: Extremity, k: ModeIndex, x: f64) -> Result<Complex64> {
    pulled_back_monomial(which, k, Complex64::new(x, 0.0), SlitSide::None)
}

/// Triangular coefficient tables of one extremity up to `k_max`.
#[derive(Debug, Clone)]
pub struct PurePoleTable {
    which: Extremity,
    k_max: ModeIndex,
    pole_to_mix: Matrix,
    mix_to_pole: Matrix,
}

impl PurePoleTable {
    pub fn new(which: Extremity, k_max: ModeIndex, q: &Quadrature) -> Result<Self> {
        if !k_max.is_positive() {
            return Err(Error::InvalidArgument(format!("k_max = {k_max} must be positive")));
        }
        let n = k_max.ordinal() + 1;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
        let entries: Vec<Result<f64>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let ki = ModeIndex::positive(i);
                let e = singular_mode(which, ModeIndex::positive(j));
                super::continuum_inner_product(q, |x| Ok(e.restriction(x)), |x| monomial_on_cross_section(which, ki, x))
            })
            .collect();
        let mut a = Matrix::zeros(n);
        for (&(i, j), v) in pairs.iter().zip(entries) {
            a[(i, j)] = v?;
        }

        let mut m = Matrix::zeros(n);
        for i in 0..n {
            let d = a[(i, i)];
            if d.abs() < 1e-300 {
                return Err(Error::SingularMatrix(i));
            }
            let c = 1.0 / d;
            m[(i, i)] = c;
            for j in 0..i {
                let s = c * a[(i, j)];
                for col in 0..=j {
                    m[(i, col)] -= s * m[(j, col)];
                }
            }
        }
        Ok(Self { which, k_max, pole_to_mix: a, mix_to_pole: m })
    }

    pub fn which(&self) -> Extremity {
        self.which
    }

    pub fn k_max(&self) -> ModeIndex {
        self.k_max
    }

    pub fn size(&self) -> usize {
        self.k_max.ordinal() + 1
    }

    /// `q_k = Σ poleToMix(k, k′) q^P_{k′}`.
    pub fn pole_to_mix(&self) -> &Matrix {
        &self.pole_to_mix
    }

    /// `q^P_k = Σ mixToPole(k, k′) q_{k′}`.
    pub fn mix_to_pole(&self) -> &Matrix {
        &self.mix_to_pole
    }

    /// Distance of `mixToPole · poleToMix` from the identity.
    pub fn inverse_defect(&self) -> f64 {
        self.mix_to_pole.mul(&self.pole_to_mix).max_abs_diff(&Matrix::identity(self.size()))
    }

    pub fn pole(&self, k: ModeIndex) -> Result<PurePole> {
        if !k.is_positive() || k > self.k_max {
            return Err(Error::InvalidArgument(format!("pole index {k} outside ½..{}", self.k_max)));
        }
        let i = k.ordinal();
        Ok(PurePole { which: self.which, k, coefficients: (0..=i).map(|j| self.mix_to_pole[(i, j)]).collect() })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "which,k,k_prime,mix_to_pole,pole_to_mix")?;
        for i in 0..self.size() {
            for j in 0..=i {
                writeln!(
                    w,
                    "{},{},{},{:.17e},{:.17e}",
                    self.which.letter(),
                    ModeIndex::positive(i),
                    ModeIndex::positive(j),
                    self.mix_to_pole[(i, j)],
                    self.pole_to_mix[(i, j)]
                )?;
            }
        }
        Ok(())
    }
}

/// `q^P_{which;k}` in the slit-strip.
#[derive(Debug, Clone, PartialEq)]
pub struct PurePole {
    pub which: Extremity,
    pub k: ModeIndex,
    /// Coefficients on `q_{which;½}, …, q_{which;k}`.
    pub coefficients: Vec<f64>,
}

impl PurePole {
    pub fn eval(&self, z: Complex64, side: SlitSide) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (j, c) in self.coefficients.iter().enumerate() {
            total += *c * pulled_back_monomial(self.which, ModeIndex::positive(j), z, side)?;
        }
        Ok(total)
    }

    pub fn restriction(&self, x: f64) -> Result<Complex64> {
        self.eval(Complex64::new(x, 0.0), SlitSide::None)
    }

    /// `⟨e, q^P|_I⟩` for the first `count` singular modes of extremity `region`.
    pub fn singular_coefficients(&self, region: Extremity, count: usize, q: &Quadrature) -> Result<Vec<f64>> {
        (0..count)
            .into_par_iter()
            .map(|j| {
                let e = singular_mode(region, ModeIndex::positive(j));
                super::continuum_inner_product(q, |x| Ok(e.restriction(x)), |x| self.restriction(x))
            })
            .collect()
    }
}

/// Builds the table up to `k` and returns `q^P_{which;k}`.
pub fn pure_pole(which: Extremity, k: ModeIndex) -> Result<PurePole> {
    PurePoleTable::new(which, k, &Quadrature::default())?.pole(k)
}
