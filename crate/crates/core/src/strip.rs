//! Propagation on the lattice strip and its explicit eigenbasis.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::EdgeField;
use crate::geometry::{CornerPos, StripSpec, Window};
use crate::index::ModeIndex;
use crate::space::{inner_product, reflect, CrossSectionFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

fn lambda() -> Complex64 {
    Complex64::from_polar(1.0, PI / 4.0)
}

fn lambda3() -> Complex64 {
    Complex64::from_polar(1.0, 3.0 * PI / 4.0)
}

fn require_propagatable(spec: &StripSpec) -> Result<()> {
    if spec.is_slit() {
        return Err(Error::InvalidGeometry("propagation acts on strips; use the leg sub-strips".into()));
    }
    if spec.width() < 2 {
        return Err(Error::InvalidGeometry("propagation needs width at least 2".into()));
    }
    Ok(())
}

fn propagate_up(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let l3 = lambda3();
    let l3c = l3.conj();
    let h = FRAC_1_SQRT_2;
    (0..n)
        .map(|j| {
            let f = values[j];
            if j == 0 {
                let r = values[1];
                f * (1.0 + h) + l3 * h * r + (l3 + l3c * h) * f.conj() + r.conj() * h
            } else if j == n - 1 {
                let l = values[n - 2];
                f * (1.0 + h) + l3c * h * l + (l3c + l3 * h) * f.conj() + l.conj() * h
            } else {
                let (l, r) = (values[j - 1], values[j + 1]);
                f * 2.0 + l3 * h * r + l3c * h * l - f.conj() * SQRT_2 + (r.conj() + l.conj()) * h
            }
        })
        .collect()
}

/// One row of s-holomorphic continuation with Riemann boundary values.
///
/// `Down` is `J ∘ Up ∘ J` with `J` the reflection.
pub fn propagate(spec: &StripSpec, f: &CrossSectionFn, direction: Direction) -> Result<CrossSectionFn> {
    require_propagatable(spec)?;
    if f.spec().a() != spec.a() || f.spec().b() != spec.b() {
        return Err(Error::Mismatch("function lives on a different cross-section".into()));
    }
    match direction {
        Direction::Up => CrossSectionFn::new(*spec, propagate_up(f.values())),
        Direction::Down => {
            let up = propagate_up(reflect(f).values());
            Ok(reflect(&CrossSectionFn::new(*spec, up)?))
        }
    }
}

/// `g(ω) = tan(ω/2)·tan(ℓω) − 1/√2`.
fn frequency_residual(len: usize, omega: f64) -> f64 {
    (omega / 2.0).tan() * (len as f64 * omega).tan() - FRAC_1_SQRT_2
}

/// `cos((ℓ+½)ω)/cos((ℓ−½)ω) − (3 − 2√2)`.
pub fn frequency_equation_residual(len: usize, omega: f64) -> f64 {
    let l = len as f64;
    ((l + 0.5) * omega).cos() / ((l - 0.5) * omega).cos() - (3.0 - 2.0 * SQRT_2)
}

/// The allowed frequency in `((k−½)π/ℓ, kπ/ℓ)`, by bisection.
pub fn solve_frequency(len: usize, k: ModeIndex) -> Result<f64> {
    if len == 0 {
        return Err(Error::InvalidGeometry("width must be positive".into()));
    }
    let k = k.abs();
    k.check_width(len)?;
    let l = len as f64;
    let mut lo = (k.value() - 0.5) * PI / l;
    let mut hi = k.value() * PI / l - 1e-9 * PI / l;
    let (glo, ghi) = (frequency_residual(len, lo), frequency_residual(len, hi));
    if !(glo < 0.0 && ghi > 0.0) {
        return Err(Error::Bracketing { width: len, k: k.value() });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let g = frequency_residual(len, mid);
        if g.abs() <= 1e-14 || mid <= lo || mid >= hi {
            break;
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Larger root of `Λ² + (2cos ω − 4)Λ + 1 = 0`.
pub fn eigenvalue(omega: f64) -> f64 {
    let c = omega.cos();
    2.0 - c + ((3.0 - c) * (1.0 - c)).sqrt()
}

pub fn dispersion_residual(omega: f64, lambda: f64) -> f64 {
    lambda * lambda + (2.0 * omega.cos() - 4.0) * lambda + 1.0
}

/// Ratio of the `e^{−iωx′}` and `e^{iωx′}` coefficients.
pub fn ratio(omega: f64, lambda: f64) -> f64 {
    (2.0 + SQRT_2 * (3.0 * PI / 4.0 + omega).cos() - lambda) / (SQRT_2 * (1.0 - omega.cos()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralMode {
    pub k: ModeIndex,
    pub omega: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub ratio_plus: f64,
    pub ratio_minus: f64,
}

impl SpectralMode {
    pub fn eigenvalue(&self, sign_positive: bool) -> f64 {
        if sign_positive {
            self.lambda_plus
        } else {
            self.lambda_minus
        }
    }
}

pub fn solve_mode(len: usize, k: ModeIndex) -> Result<SpectralMode> {
    let omega = solve_frequency(len, k)?;
    let lambda_plus = eigenvalue(omega);
    let lambda_minus = 1.0 / lambda_plus;
    Ok(SpectralMode {
        k: k.abs(),
        omega,
        lambda_plus,
        lambda_minus,
        ratio_plus: ratio(omega, lambda_plus),
        ratio_minus: ratio(omega, lambda_minus),
    })
}

/// Left-wall value between rows 0 and 1 of an eigenfunction extension whose
/// first cross-section value is `f0` and whose row ratio is `lambda`.
fn left_wall_value(f0: Complex64, lambda: f64) -> Complex64 {
    super::field::reconstruct((f0, CornerPos::SW), (f0 * lambda, CornerPos::NW))
}

fn positive_eigenfunction(spec: &StripSpec, mode: &SpectralMode) -> CrossSectionFn {
    let (w, lam, r) = (mode.omega, mode.lambda_plus, mode.ratio_plus);
    let l3 = lambda3();
    let l3c = l3.conj();
    let h = FRAC_1_SQRT_2;
    let ep = Complex64::from_polar(1.0, w);
    let em = ep.conj();
    let a_p = 1.0 + h + l3 * h * ep - lam;
    let a_m = 1.0 + h + l3 * h * em - lam;
    let b_p = l3 + l3c * h + ep * h;
    let b_m = l3 + l3c * h + em * h;
    let x_left = spec.a() as f64 + 0.5;
    let phase = -Complex64::from_polar(1.0, -2.0 * w * x_left) * (b_m + a_m * r) / (a_p + b_p * r);
    // C/C̄ = phase, so C = √phase up to a real factor.
    let c = (phase / phase.norm()).sqrt();
    let f = CrossSectionFn::from_fn(*spec, |x| {
        c * Complex64::from_polar(1.0, w * x) + c.conj() * r * Complex64::from_polar(1.0, -w * x)
    });
    let mut f = f.scale(1.0 / f.norm());
    let wall = left_wall_value(f.values()[0], lam);
    if (wall * lambda()).re < 0.0 {
        f = f.scale(-1.0);
    }
    f
}

/// The normalized eigenfunction `f_k` of the strip, `k` of either sign.
pub fn eigenfunction(spec: &StripSpec, k: ModeIndex) -> Result<CrossSectionFn> {
    let mode = solve_mode(spec.width(), k)?;
    let f = positive_eigenfunction(&spec.without_slit(), &mode);
    Ok(if k.is_positive() { f } else { reflect(&f) })
}

/// Which half of the spectrum a projection keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TopPart {
    /// Modes growing upward, `k > 0`.
    Pole,
    /// Modes decaying upward, `k < 0`.
    Zero,
}

/// Eigenvalues, frequencies and eigenfunctions `f_{±k}` of one strip.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    spec: StripSpec,
    modes: Vec<SpectralMode>,
    positive: Vec<CrossSectionFn>,
    negative: Vec<CrossSectionFn>,
}

impl SpectralBasis {
    pub fn new(spec: StripSpec) -> Result<Self> {
        let spec = spec.without_slit();
        let len = spec.width();
        let modes = ModeIndex::positives(len)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|k| solve_mode(len, k))
            .collect::<Result<Vec<_>>>()?;
        let positive: Vec<_> = modes.par_iter().map(|m| positive_eigenfunction(&spec, m)).collect();
        let negative = positive.iter().map(reflect).collect();
        Ok(Self { spec, modes, positive, negative })
    }

    pub fn spec(&self) -> &StripSpec {
        &self.spec
    }

    pub fn width(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[SpectralMode] {
        &self.modes
    }

    pub fn mode(&self, k: ModeIndex) -> Result<&SpectralMode> {
        k.check_width(self.width())?;
        Ok(&self.modes[k.ordinal()])
    }

    pub fn eigenfunction(&self, k: ModeIndex) -> Result<&CrossSectionFn> {
        k.check_width(self.width())?;
        Ok(if k.is_positive() { &self.positive[k.ordinal()] } else { &self.negative[k.ordinal()] })
    }

    pub fn eigenvalue(&self, k: ModeIndex) -> Result<f64> {
        Ok(self.mode(k)?.eigenvalue(k.is_positive()))
    }

    /// `f_½, f_{3/2}, …`.
    pub fn positive(&self) -> &[CrossSectionFn] {
        &self.positive
    }

    /// `f_{−½}, f_{−3/2}, …`.
    pub fn negative(&self) -> &[CrossSectionFn] {
        &self.negative
    }

    /// `(⟨f, f_k⟩)_{k>0}` and `(⟨f, f_{−k}⟩)_{k>0}`.
    pub fn coefficients(&self, f: &CrossSectionFn) -> Result<(Vec<f64>, Vec<f64>)> {
        let pos = self.positive.iter().map(|e| inner_product(f, e)).collect::<Result<_>>()?;
        let neg = self.negative.iter().map(|e| inner_product(f, e)).collect::<Result<_>>()?;
        Ok((pos, neg))
    }

    pub fn project(&self, f: &CrossSectionFn, part: TopPart) -> Result<CrossSectionFn> {
        let basis = match part {
            TopPart::Pole => &self.positive,
            TopPart::Zero => &self.negative,
        };
        let mut out = CrossSectionFn::zeros(*f.spec());
        for e in basis {
            out.axpy(inner_product(f, e)?, &e.embed(*f.spec())?)?;
        }
        Ok(out)
    }

    /// `Σ_k (p_k Λ_k^y f_k + n_k Λ_k^{−y} f_{−k})`.
    pub fn synthesize(&self, pos: &[f64], neg: &[f64], y: i32) -> CrossSectionFn {
        let mut out = CrossSectionFn::zeros(self.spec);
        for (j, m) in self.modes.iter().enumerate() {
            let (gp, gn) = (m.lambda_plus.powi(y), m.lambda_minus.powi(y));
            if pos[j] != 0.0 {
                out.axpy(pos[j] * gp, &self.positive[j]).expect("same spec");
            }
            if neg[j] != 0.0 {
                out.axpy(neg[j] * gn, &self.negative[j]).expect("same spec");
            }
        }
        out
    }

    /// Extension of `f` to the window, each row synthesized from the eigenexpansion.
    pub fn extend(&self, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
        if !window.contains_row(0) {
            return Err(Error::InvalidArgument("window must contain row 0".into()));
        }
        let (pos, neg) = self.coefficients(f)?;
        let rows = window
            .rows()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|y| if y == 0 { f.embed(self.spec).expect("same walls") } else { self.synthesize(&pos, &neg, y) })
            .collect();
        EdgeField::from_rows(self.spec, window, rows)
    }

    /// Extension of `f_k` itself, `Λ_k^y f_k` row by row. Unlike `extend`, no
    /// roundoff leaks into the other modes to be amplified by `Λ^|y|`.
    pub fn extend_mode(&self, k: ModeIndex, window: Window) -> Result<EdgeField> {
        if !window.contains_row(0) {
            return Err(Error::InvalidArgument("window must contain row 0".into()));
        }
        k.check_width(self.width())?;
        let j = k.ordinal();
        let n = self.modes.len();
        let (mut pos, mut neg) = (vec![0.0; n], vec![0.0; n]);
        if k.is_positive() {
            pos[j] = 1.0;
        } else {
            neg[j] = 1.0;
        }
        let rows = window.rows().collect::<Vec<_>>().into_par_iter().map(|y| self.synthesize(&pos, &neg, y)).collect();
        EdgeField::from_rows(self.spec, window, rows)
    }

    /// Columns `k,omega,lambda_plus,lambda_minus`.
    pub fn write_spectrum_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,omega,lambda_plus,lambda_minus")?;
        for m in &self.modes {
            writeln!(w, "{},{:.17e},{:.17e},{:.17e}", m.k.value(), m.omega, m.lambda_plus, m.lambda_minus)?;
        }
        Ok(())
    }
}

/// Extension to the strip window, rows from spectral synthesis.
pub fn extend_strip(spec: &StripSpec, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
    require_propagatable(&spec.without_slit())?;
    SpectralBasis::new(*spec)?.extend(f, window)
}

/// Extension by repeated application of `P` and `P⁻¹`.
///
/// Roundoff in the fast modes grows by up to `3+2√2` per row, so this is only
/// useful on short windows.
pub fn extend_strip_iterated(spec: &StripSpec, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
    let spec = spec.without_slit();
    require_propagatable(&spec)?;
    if !window.contains_row(0) {
        return Err(Error::InvalidArgument("window must contain row 0".into()));
    }
    let f = f.embed(spec)?;
    let mut up = vec![f.clone()];
    for _ in 0..window.y_max {
        let next = propagate(&spec, up.last().unwrap(), Direction::Up)?;
        up.push(next);
    }
    let mut down = Vec::new();
    let mut cur = f;
    for _ in window.y_min..0 {
        cur = propagate(&spec, &cur, Direction::Down)?;
        down.push(cur.clone());
    }
    down.reverse();
    down.extend(up);
    EdgeField::from_rows(spec, window, down)
}

/// Top pole or zero projection, building the basis on the fly.
pub fn project_top(spec: &StripSpec, f: &CrossSectionFn, part: TopPart) -> Result<CrossSectionFn> {
    SpectralBasis::new(*spec)?.project(f, part)
}
