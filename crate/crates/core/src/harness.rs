//! Discrete-versus-continuum error tables along sequences of widths `ℓ_n`.
//!
//! Arguments are rescaled by `ℓ^{−1}` and values by `ℓ^{½}` throughout, so
//! `‖1‖² = ℓ` on the lattice corresponds to `∫ 1 = 1` in the continuum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{compute_h, quiet_anchor};
use crate::continuum::{continuum_inner_product, ContinuumMode, Extremity, PurePole, PurePoleTable, Quadrature};
use crate::error::{Error, Result};
use crate::geometry::{StripKind, StripSpec, Window};
use crate::index::ModeIndex;
use crate::slit::{SingularSystem, SINGULAR_TOL};
use crate::space::{inner_product, CrossSectionFn};
use crate::strip::SpectralBasis;

/// Errors at or below this are treated as exact.
pub const EXACT: f64 = 1e-10;

/// Largest allowed step up between consecutive errors of a decreasing trend.
pub const TREND_SLACK: f64 = 1.1;

/// Widths `ℓ_n` with their placement `a_n < 0 < b_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingSequence {
    pub bounds: Vec<(i32, i32)>,
}

impl ScalingSequence {
    /// `a = −ℓ/2`, `b = ℓ/2`; every `ℓ` must be even.
    pub fn symmetric(lens: &[usize]) -> Result<Self> {
        if let Some(l) = lens.iter().find(|l| **l % 2 == 1) {
            return Err(Error::InvalidArgument(format!("symmetric placement needs even widths, got {l}")));
        }
        Self::from_bounds(lens.iter().map(|&l| (-(l as i32) / 2, l as i32 / 2)).collect())
    }

    /// `a = −⌈ℓ/2⌉`, `b = ℓ + a`.
    pub fn asymmetric(lens: &[usize]) -> Result<Self> {
        Self::from_bounds(
            lens.iter()
                .map(|&l| {
                    let a = -(l as i32 + 1) / 2;
                    (a, l as i32 + a)
                })
                .collect(),
        )
    }

    /// `8, 16, …` up to `l_max`, symmetric.
    pub fn doubling(l_min: usize, l_max: usize) -> Result<Self> {
        let mut lens = Vec::new();
        let mut l = l_min.max(2);
        while l <= l_max {
            lens.push(l);
            l *= 2;
        }
        Self::symmetric(&lens)
    }

    pub fn from_bounds(bounds: Vec<(i32, i32)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidArgument("empty scaling sequence".into()));
        }
        for w in bounds.windows(2) {
            if w[1].1 - w[1].0 <= w[0].1 - w[0].0 {
                return Err(Error::InvalidArgument("widths must increase".into()));
            }
        }
        if let Some(&(a, b)) = bounds.iter().find(|(a, b)| !(*a < 0 && 0 < *b)) {
            return Err(Error::InvalidArgument(format!("need a < 0 < b, got ({a}, {b})")));
        }
        Ok(Self { bounds })
    }

    pub fn lens(&self) -> Vec<usize> {
        self.bounds.iter().map(|(a, b)| (b - a) as usize).collect()
    }

    pub fn min_len(&self) -> usize {
        self.lens().into_iter().min().unwrap_or(0)
    }

    fn spec(&self, i: usize, kind: StripKind) -> Result<StripSpec> {
        let (a, b) = self.bounds[i];
        StripSpec::new(a, b, kind)
    }
}

/// Axis-parallel rectangle `[x0, x1] × [y0, y1]` in continuum coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 <= x1 && y0 <= y1) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!("bad rectangle [{x0},{x1}]×[{y0},{y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    /// Parses `X0:X1:Y0:Y1`.
    pub fn parse(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(':')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad rectangle {s:?}"))))
            .collect::<Result<_>>()?;
        match v[..] {
            [x0, x1, y0, y1] => Self::new(x0, x1, y0, y1),
            _ => Err(Error::InvalidArgument(format!("rectangle {s:?} needs four fields"))),
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.x0 <= z.re && z.re <= self.x1 && self.y0 <= z.im && z.im <= self.y1
    }

    /// Distance to the walls `x = ±½` and to the slit `{0} × (−∞, 0]`.
    pub fn boundary_distance(&self) -> f64 {
        let walls = (self.x0 + 0.5).min(0.5 - self.x1);
        let slit = if self.x0 <= 0.0 && 0.0 <= self.x1 {
            self.y0
        } else {
            let dx = self.x0.abs().min(self.x1.abs());
            if self.y0 <= 0.0 {
                dx
            } else {
                dx.hypot(self.y0)
            }
        };
        walls.min(slit)
    }

    pub fn describe(&self) -> String {
        format!("[{}, {}] x [{}, {}]", self.x0, self.x1, self.y0, self.y1)
    }

    /// Lattice rows covering the rectangle at width `ℓ`, always including row 0.
    fn window(&self, len: usize) -> Result<Window> {
        let l = len as f64;
        let lo = ((self.y0 * l).floor() as i32 - 1).min(0);
        let hi = ((self.y1 * l).ceil() as i32 + 1).max(0);
        Window::new(lo, hi.max(lo + 1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableMeta {
    pub table: String,
    pub region: Option<Extremity>,
    pub k: Option<ModeIndex>,
    pub k_max: Option<ModeIndex>,
    pub subset: String,
    pub lens: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRow {
    pub len: usize,
    pub quantity: String,
    pub error: f64,
    /// Lattice and continuum values for scalar quantities.
    pub discrete: Option<f64>,
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub quantity: String,
    pub errors: Vec<f64>,
    pub exact: bool,
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTable {
    pub meta: TableMeta,
    pub rows: Vec<ErrorRow>,
    pub trends: Vec<Trend>,
}

impl ErrorTable {
    fn assemble(meta: TableMeta, rows: Vec<ErrorRow>) -> Self {
        let mut order: Vec<String> = Vec::new();
        for r in &rows {
            if !order.contains(&r.quantity) && !BOUNDED.contains(&r.quantity.as_str()) {
                order.push(r.quantity.clone());
            }
        }
        let trends = order
            .into_iter()
            .map(|q| {
                let errors: Vec<f64> = rows.iter().filter(|r| r.quantity == q).map(|r| r.error).collect();
                let exact = errors.iter().all(|e| *e <= EXACT);
                Trend { decreasing: decreasing_trend(&errors), exact, errors, quantity: q }
            })
            .collect();
        Self { meta, rows, trends }
    }

    pub fn errors(&self, quantity: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.quantity == quantity).map(|r| r.error).collect()
    }

    pub fn trend(&self, quantity: &str) -> Option<&Trend> {
        self.trends.iter().find(|t| t.quantity == quantity)
    }

    pub fn all_decreasing(&self) -> bool {
        self.trends.iter().all(|t| t.decreasing)
    }
}

/// Last below first and no step up by more than 10%; sequences that are exact
/// throughout also pass.
pub fn decreasing_trend(errors: &[f64]) -> bool {
    if errors.is_empty() || errors.iter().any(|e| !e.is_finite() || *e < 0.0) {
        return false;
    }
    if errors.iter().all(|e| *e <= EXACT) {
        return true;
    }
    let (first, last) = (errors[0], errors[errors.len() - 1]);
    last < first && errors.windows(2).all(|w| w[1] <= TREND_SLACK * w[0])
}

/// Strictly decreasing at every step.
pub fn strictly_decreasing(errors: &[f64]) -> bool {
    errors.windows(2).all(|w| w[1] < w[0])
}

fn strip_point(spec: &StripSpec, mid: Complex64) -> Complex64 {
    let c = 0.5 * (spec.a() + spec.b()) as f64;
    (mid - c) / spec.width() as f64
}

/// `e(ℓ) = max |√ℓ f_k(x′) − e_k(x′/ℓ)|` on the cross-section, and the same
/// against `E_k` on all edges of the window `|y| ≤ ½`.
pub fn strip_convergence_table(k: ModeIndex, seq: &ScalingSequence) -> Result<ErrorTable> {
    if k.ordinal() >= seq.min_len() {
        return Err(Error::ModeOutOfRange { index: k.value(), width: seq.min_len() });
    }
    let mode = ContinuumMode::new(Extremity::Top, k);
    let rows = (0..seq.bounds.len())
        .into_par_iter()
        .map(|i| -> Result<Vec<ErrorRow>> {
            let spec = seq.spec(i, StripKind::Strip)?;
            let len = spec.width();
            let scale = (len as f64).sqrt();
            let basis = SpectralBasis::new(spec)?;
            let f = basis.eigenfunction(k)?;
            let mut cross = 0.0f64;
            for (x2, v) in spec.cross_section_x2().zip(f.values()) {
                let z = strip_point(&spec, Complex64::new(x2 as f64 / 2.0, 0.0));
                cross = cross.max((scale * v - mode.eval(z)?).norm());
            }
            let half = (len / 2) as i32;
            let field = basis.extend_mode(k, Window::new(-half, half)?)?;
            let mut window = 0.0f64;
            for (e, v) in field.iter() {
                let z = strip_point(&spec, e.midpoint());
                window = window.max((scale * v - mode.eval(z)?).norm());
            }
            Ok(vec![
                ErrorRow { len, quantity: "cross_section".into(), error: cross, discrete: None, reference: None },
                ErrorRow { len, quantity: "window".into(), error: window, discrete: None, reference: None },
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let meta = TableMeta {
        table: "strip".into(),
        region: Some(Extremity::Top),
        k: Some(k),
        k_max: None,
        subset: "cross-section; window [-0.5, 0.5] x [-0.5, 0.5]".into(),
        lens: seq.lens(),
    };
    Ok(ErrorTable::assemble(meta, rows.into_iter().flatten().collect()))
}

/// Default interior rectangles for the three extremities.
pub fn default_rect(which: Extremity) -> Rect {
    match which {
        Extremity::Top => Rect { x0: -0.3, x1: 0.3, y0: 0.2, y1: 0.6 },
        Extremity::Left => Rect { x0: -0.4, x1: -0.1, y0: -0.6, y1: -0.2 },
        Extremity::Right => Rect { x0: 0.1, x1: 0.4, y0: -0.6, y1: -0.2 },
    }
}

/// `sup |√ℓ P_k(zℓ) − q^P_k(z)|` over lattice edges with `z` in `rect`, plus
/// `max |H|` of the rescaled extension over the same points.
pub fn pole_convergence_table(which: Extremity, k: ModeIndex, seq: &ScalingSequence, rect: Rect) -> Result<ErrorTable> {
    if rect.boundary_distance() < 0.05 - 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "rectangle {} is closer than 0.05 to the boundary",
            rect.describe()
        )));
    }
    if !k.is_positive() {
        return Err(Error::InvalidArgument("pole index must be positive".into()));
    }
    let limit = PurePoleTable::new(which, k, &Quadrature::default())?.pole(k)?;
    let rows = (0..seq.bounds.len())
        .into_par_iter()
        .map(|i| pole_errors(seq.spec(i, StripKind::SlitStrip)?, which, k, &limit, rect))
        .collect::<Result<Vec<_>>>()?;
    let meta = TableMeta {
        table: "pole".into(),
        region: Some(which),
        k: Some(k),
        k_max: None,
        subset: rect.describe(),
        lens: seq.lens(),
    };
    Ok(ErrorTable::assemble(meta, rows.into_iter().flatten().collect()))
}

fn pole_errors(spec: StripSpec, which: Extremity, k: ModeIndex, limit: &PurePole, rect: Rect) -> Result<Vec<ErrorRow>> {
    let len = spec.width();
    let l = len as f64;
    let system = SingularSystem::new(spec)?;
    let pole = system.pole_function(which, k)?;
    let field = system.extend_pole(&pole, rect.window(len)?)?;
    let mut err = 0.0f64;
    let mut count = 0usize;
    for (e, v) in field.iter() {
        let z = e.midpoint() / l;
        if rect.contains(z) {
            err = err.max((l.sqrt() * v - limit.eval(z, e.side)?).norm());
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InvalidArgument(format!("no lattice points of width {len} in {}", rect.describe())));
    }
    let rescaled = field.rescaled(l.sqrt(), 1.0 / l);
    let h = compute_h(&rescaled, quiet_anchor(&rescaled))?;
    let h_max = h
        .vertex_values()
        .filter(|(v, _)| rect.contains(v.point() / l))
        .map(|(_, x)| x.abs())
        .chain(h.face_values().filter(|(p, _)| rect.contains(p.center() / l)).map(|(_, x)| x.abs()))
        .fold(0.0, f64::max);
    Ok(vec![
        ErrorRow { len, quantity: "sup_error".into(), error: err, discrete: None, reference: None },
        ErrorRow { len, quantity: "h_max".into(), error: h_max, discrete: None, reference: None },
    ])
}

/// Largest over smallest `max |H|` across the sequence; the pole table's
/// `h_max` counts as bounded when this stays below [`H_BOUND_RATIO`].
pub fn h_spread(table: &ErrorTable) -> f64 {
    let v = table.errors("h_max");
    let hi = v.iter().cloned().fold(0.0, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi / lo
}

pub const H_BOUND_RATIO: f64 = 10.0;

/// Quantities that should stay bounded rather than decrease; they get no trend.
pub const BOUNDED: &[&str] = &["h_max"];

/// Members of the inner-product family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Member {
    /// `f_k` of the strip or `f^{L/R}_k` of a leg, any sign of `k`.
    Mode(Extremity, ModeIndex),
    /// `p^{T/L/R}_k`.
    Pole(Extremity, ModeIndex),
}

impl Member {
    pub fn label(&self) -> String {
        match self {
            Member::Mode(r, k) => format!("f{}({})", r.letter(), k),
            Member::Pole(r, k) => format!("p{}({})", r.letter(), k),
        }
    }

    /// Whether `self` is one of the modes read off by the singular part of `region`.
    fn singular_mode_of(&self, region: Extremity) -> Option<ModeIndex> {
        match *self {
            Member::Mode(Extremity::Top, k) if region == Extremity::Top && k.is_positive() => Some(k),
            Member::Mode(r, k) if r == region && r != Extremity::Top && !k.is_positive() => Some(-k),
            _ => None,
        }
    }
}

/// The family `{f_{±k}, f^L_{±k}, f^R_{±k}, p^T_k, p^L_k, p^R_k}` for `k ≤ k_max`.
pub fn family(k_max: ModeIndex) -> Vec<Member> {
    let ks: Vec<ModeIndex> = ModeIndex::positives(k_max.ordinal() + 1).collect();
    let mut out = Vec::new();
    for r in [Extremity::Top, Extremity::Left, Extremity::Right] {
        for &k in &ks {
            out.push(Member::Mode(r, k));
            out.push(Member::Mode(r, -k));
        }
    }
    for r in [Extremity::Top, Extremity::Left, Extremity::Right] {
        for &k in &ks {
            out.push(Member::Pole(r, k));
        }
    }
    out
}

/// Value of `⟨u, v⟩` known in closed form at every width: orthonormality within
/// one basis, disjoint leg supports, and singular parts of pole functions.
pub fn exact_pairing(u: Member, v: Member) -> Option<f64> {
    use Member::*;
    match (u, v) {
        (Mode(r, k), Mode(s, m)) if r == s => Some(if k == m { 1.0 } else { 0.0 }),
        (Mode(r, _), Mode(s, _)) if r != Extremity::Top && s != Extremity::Top => Some(0.0),
        (Pole(w, k), m @ Mode(..)) | (m @ Mode(..), Pole(w, k)) => {
            let region = match m {
                Mode(r, _) => r,
                Pole(..) => unreachable!(),
            };
            m.singular_mode_of(region).map(|j| if region == w && j == k { 1.0 } else { 0.0 })
        }
        _ => None,
    }
}

fn discrete_member(system: &SingularSystem, m: Member) -> Result<CrossSectionFn> {
    match m {
        Member::Mode(Extremity::Top, k) => system.top().eigenfunction(k)?.embed(*system.spec()),
        Member::Mode(side, k) => system.leg(side).eigenfunction(k)?.embed(*system.spec()),
        Member::Pole(which, k) => Ok(system.pole_function(which, k)?.cross_section),
    }
}

enum Limit {
    Mode(ContinuumMode),
    Pole(PurePole),
}

impl Limit {
    fn at(&self, x: f64) -> Result<Complex64> {
        match self {
            Limit::Mode(m) => Ok(m.restriction(x)),
            Limit::Pole(p) => p.restriction(x),
        }
    }
}

/// `|⟨u^{(ℓ)}, v^{(ℓ)}⟩ − ⟨u_∞, v_∞⟩|` for every pair of [`family`] members.
pub fn inner_product_table(seq: &ScalingSequence, k_max: ModeIndex) -> Result<ErrorTable> {
    if !k_max.is_positive() || 2 * (k_max.ordinal() + 1) > seq.min_len() {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} needs legs of width at least {} (smallest width {})",
            k_max.ordinal() + 1,
            seq.min_len()
        )));
    }
    let members = family(k_max);
    let q = Quadrature::default();
    let mut tables = std::collections::HashMap::new();
    for r in [Extremity::Top, Extremity::Left, Extremity::Right] {
        tables.insert(r.letter(), PurePoleTable::new(r, k_max, &q)?);
    }
    let limits: Vec<Limit> = members
        .iter()
        .map(|m| -> Result<Limit> {
            Ok(match *m {
                Member::Mode(r, k) => Limit::Mode(ContinuumMode::new(r, k)),
                Member::Pole(r, k) => Limit::Pole(tables[r.letter()].pole(k)?),
            })
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..members.len()).flat_map(|i| (i..members.len()).map(move |j| (i, j))).collect();
    let reference: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| match exact_pairing(members[i], members[j]) {
            Some(v) => Ok(v),
            None => continuum_inner_product(&q, |x| limits[i].at(x), |x| limits[j].at(x)),
        })
        .collect::<Result<_>>()?;

    let per_len = (0..seq.bounds.len())
        .into_par_iter()
        .map(|n| -> Result<Vec<ErrorRow>> {
            let system = SingularSystem::new(seq.spec(n, StripKind::SlitStrip)?)?;
            let len = system.spec().width();
            let vectors: Vec<CrossSectionFn> =
                members.iter().map(|m| discrete_member(&system, *m)).collect::<Result<_>>()?;
            pairs
                .iter()
                .zip(&reference)
                .map(|(&(i, j), &r)| {
                    let d = inner_product(&vectors[i], &vectors[j])?;
                    Ok(ErrorRow {
                        len,
                        quantity: format!("<{},{}>", members[i].label(), members[j].label()),
                        error: (d - r).abs(),
                        discrete: Some(d),
                        reference: Some(r),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<ErrorRow> = per_len.into_iter().flatten().collect();
    // group by pair, widths ascending within each pair
    let index =
        |q: &str| pairs.iter().position(|&(i, j)| format!("<{},{}>", members[i].label(), members[j].label()) == q);
    rows.sort_by_key(|r| (index(&r.quantity), r.len));
    let meta = TableMeta {
        table: "inner_product".into(),
        region: None,
        k: None,
        k_max: Some(k_max),
        subset: "cross-section".into(),
        lens: seq.lens(),
    };
    Ok(ErrorTable::assemble(meta, rows))
}

/// Least-squares decay rate of `r(y)` per row into an extremity, next to the
/// rate of the dominant expected mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateFit {
    pub extremity: Extremity,
    pub fitted: f64,
    pub predicted: f64,
    /// Depths (in rows) used by the fit.
    pub depths: (usize, usize),
}

impl RateFit {
    pub fn deviation(&self) -> f64 {
        (self.fitted - self.predicted).abs()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleAsymptotics {
    pub which: Extremity,
    pub k: ModeIndex,
    pub len: usize,
    /// Residual against the target eigenfunction in the singular extremity.
    pub singular: RateFit,
    /// Row norms in the two regular extremities.
    pub regular: Vec<RateFit>,
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Decay of a pole function toward all three extremities, fitted over the
/// deepest quarter of `depth` rows.
///
/// In each extremity the row is expanded in that extremity's eigenbasis. The
/// singular coefficients must equal the unit data within `1e−8` and are then
/// taken exactly, so roundoff along the growing modes does not swamp the deep
/// rows. The residual against the target mode is the regular part, synthesized
/// row by row.
pub fn pole_asymptotics(
    system: &SingularSystem,
    which: Extremity,
    k: ModeIndex,
    depth: usize,
) -> Result<PoleAsymptotics> {
    if depth < 8 {
        return Err(Error::InvalidArgument("asymptotic fits need at least 8 rows".into()));
    }
    let spec = *system.spec();
    let pole = system.pole_function(which, k)?;
    let mut regular = Vec::new();
    let mut singular = None;
    for region in [Extremity::Top, Extremity::Left, Extremity::Right] {
        let basis = system.leg(region);
        let sub = *basis.spec();
        let up = region == Extremity::Top;
        let row0 = if up { pole.cross_section.embed(sub)? } else { pole.cross_section.restrict(sub)? };
        let (mut pos, mut neg) = basis.coefficients(&row0)?;
        let (sing, reg) = if up { (&mut pos, &mut neg) } else { (&mut neg, &mut pos) };
        for (j, c) in sing.iter_mut().enumerate() {
            let want = if region == which && j == k.ordinal() { 1.0 } else { 0.0 };
            if (*c - want).abs() > SINGULAR_TOL {
                return Err(Error::Mismatch(format!(
                    "singular coefficient {j} in {} is {c}, expected {want}",
                    region.letter()
                )));
            }
            *c = 0.0;
        }
        let zeros = vec![0.0; reg.len()];
        let reg = reg.clone();
        let samples: Vec<(usize, f64)> = (1..=depth)
            .map(|step| {
                let y = if up { step as i32 } else { -(step as i32) };
                let (p, n) = if up { (&zeros, &reg) } else { (&reg, &zeros) };
                (step, basis.synthesize(p, n, y).norm())
            })
            .collect();
        let start = depth - depth / 4;
        let pts: Vec<(f64, f64)> =
            samples[start - 1..].iter().filter(|(_, r)| *r > 1e-300).map(|(d, r)| (*d as f64, -r.ln())).collect();
        if pts.len() < 2 {
            return Err(Error::NoConvergence { iterations: pts.len(), residual: 0.0 });
        }
        // dominant term at the far end of the fit
        let rate = |j: usize| {
            let m = &basis.modes()[j];
            if up {
                -m.lambda_minus.ln()
            } else {
                m.lambda_plus.ln()
            }
        };
        let dominant = (0..reg.len())
            .max_by(|&a, &b| {
                let wa = reg[a].abs().ln() - rate(a) * depth as f64;
                let wb = reg[b].abs().ln() - rate(b) * depth as f64;
                wa.partial_cmp(&wb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0);
        let fit = RateFit { extremity: region, fitted: slope(&pts), predicted: rate(dominant), depths: (start, depth) };
        if region == which {
            singular = Some(fit);
        } else {
            regular.push(fit);
        }
    }
    Ok(PoleAsymptotics { which, k, len: spec.width(), singular: singular.expect("one singular extremity"), regular })
}
