//! Leg bases, singular parts and pole functions of the lattice slit-strip.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::EdgeField;
use crate::geometry::{StripSpec, Window};
use crate::index::ModeIndex;
use crate::linalg::{Lu, Matrix};
use crate::space::{inner_product, CrossSectionFn};
use crate::strip::{propagate, Direction, SpectralBasis};

/// One of the three infinite ends of the slit-strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Extremity {
    #[serde(rename = "T")]
    Top,
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Extremity {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "T" | "t" | "top" => Ok(Self::Top),
            "L" | "l" | "left" => Ok(Self::Left),
            "R" | "r" | "right" => Ok(Self::Right),
            _ => Err(Error::InvalidArgument(format!("unknown extremity {s:?}; use T, L or R"))),
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Self::Top => "T",
            Self::Left => "L",
            Self::Right => "R",
        }
    }
}

/// Basis of the leg sub-strip on one side of the slit.
pub fn leg_basis(spec: &StripSpec, side: Extremity) -> Result<SpectralBasis> {
    match side {
        Extremity::Left => SpectralBasis::new(spec.left_leg()?),
        Extremity::Right => SpectralBasis::new(spec.right_leg()?),
        Extremity::Top => Err(Error::InvalidArgument("the top is not a leg".into())),
    }
}

/// Coordinates of the three singular parts.
///
/// `top[i]` is the coefficient of `f_{i+½}`, `left[i]` that of `f^L_{−(i+½)}`,
/// `right[i]` that of `f^R_{−(i+½)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularParts {
    pub top: Vec<f64>,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl SingularParts {
    pub fn zeros(spec: &StripSpec) -> Self {
        Self { top: vec![0.0; spec.width()], left: vec![0.0; spec.left_width()], right: vec![0.0; spec.right_width()] }
    }

    /// Unit data in one extremity.
    pub fn unit(spec: &StripSpec, which: Extremity, k: ModeIndex) -> Result<Self> {
        let mut g = Self::zeros(spec);
        let slot = match which {
            Extremity::Top => &mut g.top,
            Extremity::Left => &mut g.left,
            Extremity::Right => &mut g.right,
        };
        if !k.is_positive() {
            return Err(Error::InvalidArgument("pole index must be positive".into()));
        }
        k.check_width(slot.len())?;
        slot[k.ordinal()] = 1.0;
        Ok(g)
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.top.iter().chain(&self.left).chain(&self.right).copied().collect()
    }

    pub fn from_vec(spec: &StripSpec, v: &[f64]) -> Result<Self> {
        let (l, ll) = (spec.width(), spec.left_width());
        if v.len() != 2 * l {
            return Err(Error::Mismatch(format!("{} coordinates for width {l}", v.len())));
        }
        Ok(Self { top: v[..l].to_vec(), left: v[l..l + ll].to_vec(), right: v[l + ll..].to_vec() })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.to_vec().iter().zip(other.to_vec()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// The bases of a slit-strip and the factored singular-part map.
#[derive(Debug, Clone)]
pub struct SingularSystem {
    spec: StripSpec,
    top: SpectralBasis,
    left: SpectralBasis,
    right: SpectralBasis,
    matrix: Matrix,
    lu: Lu,
    condition: f64,
}

impl SingularSystem {
    pub fn new(spec: StripSpec) -> Result<Self> {
        if !spec.is_slit() {
            return Err(Error::InvalidGeometry("singular parts need a slit-strip".into()));
        }
        let (top, (left, right)) = rayon::join(
            || SpectralBasis::new(spec.without_slit()),
            || rayon::join(|| leg_basis(&spec, Extremity::Left), || leg_basis(&spec, Extremity::Right)),
        );
        let (top, left, right) = (top?, left?, right?);
        // Row i is the functional ⟨·, g_i⟩, whose entries are the real coordinates of g_i.
        let mut rows: Vec<Vec<f64>> = top.positive().iter().map(|f| f.to_real_vec()).collect();
        for leg in [&left, &right] {
            for f in leg.negative() {
                rows.push(f.embed(spec)?.to_real_vec());
            }
        }
        let n = 2 * spec.width();
        let mut matrix = Matrix::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                matrix[(i, j)] = *v;
            }
        }
        let lu = Lu::factor(&matrix)?;
        let condition = lu.condition_estimate();
        Ok(Self { spec, top, left, right, matrix, lu, condition })
    }

    pub fn spec(&self) -> &StripSpec {
        &self.spec
    }

    pub fn top(&self) -> &SpectralBasis {
        &self.top
    }

    pub fn leg(&self, side: Extremity) -> &SpectralBasis {
        match side {
            Extremity::Left => &self.left,
            Extremity::Right => &self.right,
            Extremity::Top => &self.top,
        }
    }

    /// The `2ℓ×2ℓ` matrix of `f ↦ (Π_T f, Π_L f, Π_R f)` in interleaved real coordinates.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// One-norm condition estimate of [`Self::matrix`].
    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    /// The eigenfunction whose coefficient is prescribed by a singular part.
    pub fn target(&self, which: Extremity, k: ModeIndex) -> Result<CrossSectionFn> {
        match which {
            Extremity::Top => self.top.eigenfunction(k)?.embed(self.spec),
            side => self.leg(side).eigenfunction(-k.abs())?.embed(self.spec),
        }
    }

    pub fn singular_parts(&self, f: &CrossSectionFn) -> Result<SingularParts> {
        let top = self.top.positive().iter().map(|e| inner_product(f, e)).collect::<Result<_>>()?;
        let leg = |b: &SpectralBasis| -> Result<Vec<f64>> {
            b.negative().iter().map(|e| inner_product(f, &e.embed(self.spec)?)).collect()
        };
        Ok(SingularParts { top, left: leg(&self.left)?, right: leg(&self.right)? })
    }

    /// The unique `f` with the prescribed singular parts.
    pub fn solve(&self, g: &SingularParts) -> Result<CrossSectionFn> {
        let v = g.to_vec();
        if v.len() != self.matrix.dim() {
            return Err(Error::Mismatch("singular data has the wrong shape".into()));
        }
        CrossSectionFn::from_real_vec(self.spec, &self.lu.solve(&v))
    }

    pub fn pole_function(&self, which: Extremity, k: ModeIndex) -> Result<PoleFunction> {
        let g = SingularParts::unit(&self.spec, which, k)?;
        Ok(PoleFunction { which, k, cross_section: self.solve(&g)?, extension: None })
    }

    /// Extension to a window: the full strip above the cross-section, each leg
    /// separately below it.
    pub fn extend(&self, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
        self.extend_snapped(f, None, window)
    }

    /// Extension of an `f` whose singular part is known to be `g`.
    ///
    /// The computed singular coefficients must agree with `g` within
    /// [`SINGULAR_TOL`] and are then replaced by `g`, so roundoff along the
    /// growing modes is not amplified into the deep rows.
    pub fn extend_with_singular(&self, f: &CrossSectionFn, g: &SingularParts, window: Window) -> Result<EdgeField> {
        self.extend_snapped(f, Some(g), window)
    }

    /// [`Self::extend_with_singular`] with the pole's unit data.
    pub fn extend_pole(&self, pole: &PoleFunction, window: Window) -> Result<EdgeField> {
        let g = SingularParts::unit(&self.spec, pole.which, pole.k)?;
        self.extend_with_singular(&pole.cross_section, &g, window)
    }

    fn extend_snapped(&self, f: &CrossSectionFn, g: Option<&SingularParts>, window: Window) -> Result<EdgeField> {
        if !window.contains_row(0) {
            return Err(Error::InvalidArgument("window must contain row 0".into()));
        }
        let f = f.embed(self.spec)?;
        let (mut tp, tn) = self.top.coefficients(&f)?;
        let fl = f.restrict(*self.left.spec())?;
        let fr = f.restrict(*self.right.spec())?;
        let (lp, mut ln) = self.left.coefficients(&fl)?;
        let (rp, mut rn) = self.right.coefficients(&fr)?;
        if let Some(g) = g {
            for (name, got, want) in [("T", &mut tp, &g.top), ("L", &mut ln, &g.left), ("R", &mut rn, &g.right)] {
                if got.len() != want.len() {
                    return Err(Error::Mismatch("singular data has the wrong shape".into()));
                }
                for (j, (c, w)) in got.iter_mut().zip(want).enumerate() {
                    if (*c - w).abs() > SINGULAR_TOL {
                        return Err(Error::Mismatch(format!(
                            "singular coefficient {j} in {name} is {c}, expected {w}"
                        )));
                    }
                    *c = *w;
                }
            }
        }
        let rows = window
            .rows()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|y| -> Result<CrossSectionFn> {
                match y.cmp(&0) {
                    std::cmp::Ordering::Equal => Ok(f.clone()),
                    std::cmp::Ordering::Greater => self.top.synthesize(&tp, &tn, y).embed(self.spec),
                    std::cmp::Ordering::Less => {
                        let mut row = self.left.synthesize(&lp, &ln, y).embed(self.spec)?;
                        row.axpy(1.0, &self.right.synthesize(&rp, &rn, y).embed(self.spec)?)?;
                        Ok(row)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeField::from_rows(self.spec, window, rows)
    }
}

/// Tolerance on computed singular coefficients before they are replaced by
/// their known values.
pub const SINGULAR_TOL: f64 = 1e-8;

/// Unique function with unit singular part in one extremity, regular in the others.
#[derive(Debug, Clone)]
pub struct PoleFunction {
    pub which: Extremity,
    pub k: ModeIndex,
    pub cross_section: CrossSectionFn,
    pub extension: Option<EdgeField>,
}

impl PoleFunction {
    pub fn with_extension(mut self, system: &SingularSystem, window: Window) -> Result<Self> {
        self.extension = Some(system.extend_pole(&self, window)?);
        Ok(self)
    }
}

pub fn singular_parts(system: &SingularSystem, f: &CrossSectionFn) -> Result<SingularParts> {
    system.singular_parts(f)
}

pub fn solve_prescribed_singular(system: &SingularSystem, g: &SingularParts) -> Result<CrossSectionFn> {
    system.solve(g)
}

pub fn pole_function(spec: &StripSpec, which: Extremity, k: ModeIndex) -> Result<PoleFunction> {
    SingularSystem::new(*spec)?.pole_function(which, k)
}

pub fn extend_slit_strip(spec: &StripSpec, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
    SingularSystem::new(*spec)?.extend(f, window)
}

/// Extension by iterating `P` in the strip and `P⁻¹` in each leg; short windows only.
pub fn extend_slit_strip_iterated(spec: &StripSpec, f: &CrossSectionFn, window: Window) -> Result<EdgeField> {
    if !window.contains_row(0) {
        return Err(Error::InvalidArgument("window must contain row 0".into()));
    }
    let f = f.embed(*spec)?;
    let full = spec.without_slit();
    let (left, right) = (spec.left_leg()?, spec.right_leg()?);
    let mut rows = vec![f.clone()];
    let mut cur = f.embed(full)?;
    for _ in 0..window.y_max {
        cur = propagate(&full, &cur, Direction::Up)?;
        rows.push(cur.embed(*spec)?);
    }
    let mut below = Vec::new();
    let (mut l, mut r) = (f.restrict(left)?, f.restrict(right)?);
    for _ in window.y_min..0 {
        if left.width() >= 2 {
            l = propagate(&left, &l, Direction::Down)?;
        } else {
            l = leg_step_down(&left, &l)?;
        }
        if right.width() >= 2 {
            r = propagate(&right, &r, Direction::Down)?;
        } else {
            r = leg_step_down(&right, &r)?;
        }
        let mut row = l.embed(*spec)?;
        row.axpy(1.0, &r.embed(*spec)?)?;
        below.push(row);
    }
    below.reverse();
    below.extend(rows);
    EdgeField::from_rows(*spec, window, below)
}

/// Width-one legs: expand in the two-element basis and scale.
fn leg_step_down(leg: &StripSpec, f: &CrossSectionFn) -> Result<CrossSectionFn> {
    let basis = SpectralBasis::new(*leg)?;
    let (p, n) = basis.coefficients(f)?;
    Ok(basis.synthesize(&p, &n, -1))
}

/// Zero function on a spec, handy for linearity checks.
pub fn zero(spec: &StripSpec) -> CrossSectionFn {
    CrossSectionFn::constant(*spec, Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{check_riemann_bv, check_sholomorphic};
    use crate::geometry::StripKind;
    use proptest::prelude::*;

    fn k(v: f64) -> ModeIndex {
        ModeIndex::from_f64(v).unwrap()
    }

    #[test]
    fn width_one_legs() {
        let s = StripSpec::slit_strip(-1, 1).unwrap();
        let left = leg_basis(&s, Extremity::Left).unwrap();
        assert_eq!(left.width(), 1);
        let f = left.eigenfunction(k(0.5)).unwrap().embed(s).unwrap();
        assert_eq!(f.values()[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn combined_leg_gram_is_identity() {
        let s = StripSpec::slit_strip(-3, 4).unwrap();
        let mut all = Vec::new();
        for side in [Extremity::Left, Extremity::Right] {
            let b = leg_basis(&s, side).unwrap();
            for f in b.positive().iter().chain(b.negative()) {
                all.push(f.embed(s).unwrap());
            }
        }
        assert_eq!(all.len(), 2 * s.width());
        for (i, f) in all.iter().enumerate() {
            for (j, g) in all.iter().enumerate() {
                let ip = inner_product(f, g).unwrap();
                assert!((ip - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_parts_of_basis_functions() {
        let s = StripSpec::centered(6, StripKind::SlitStrip).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        let f = sys.top().eigenfunction(k(0.5)).unwrap().embed(s).unwrap();
        let g = sys.singular_parts(&f).unwrap();
        assert!((g.top[0] - 1.0).abs() < 1e-13);
        assert!(g.top[1..].iter().all(|v| v.abs() < 1e-13));
        assert!(g.left.iter().any(|v| v.abs() > 1e-3));
        let f = sys.top().eigenfunction(k(-2.5)).unwrap().embed(s).unwrap();
        assert!(sys.singular_parts(&f).unwrap().top.iter().all(|v| v.abs() < 1e-13));
        assert!(sys.singular_parts(&zero(&s)).unwrap().to_vec().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn smallest_singular_value_is_positive() {
        for len in [2, 3, 8, 17] {
            let s = StripSpec::centered(len, StripKind::SlitStrip).unwrap();
            let sys = SingularSystem::new(s).unwrap();
            let m = sys.matrix();
            let n = m.dim();
            let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
            let sv = dm.singular_values();
            let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
            let smax = sv.iter().copied().fold(0.0, f64::max);
            assert!(smin > 1e-6, "ℓ={len}: σ_min={smin}");
            let exact = smax / smin;
            // the one-norm estimate is within a factor n of the 2-norm condition
            assert!(sys.condition_estimate() < exact * n as f64 * 10.0);
        }
    }

    #[test]
    fn pole_functions_have_unit_singular_parts() {
        let s = StripSpec::slit_strip(-3, 2).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        for (which, n) in [(Extremity::Top, 5), (Extremity::Left, 3), (Extremity::Right, 2)] {
            for kk in ModeIndex::positives(n) {
                let p = sys.pole_function(which, kk).unwrap();
                let g = sys.singular_parts(&p.cross_section).unwrap();
                let expected = SingularParts::unit(&s, which, kk).unwrap();
                assert!(g.max_abs_diff(&expected) < 1e-12, "{which:?} {kk}");
            }
        }
        assert!(sys.pole_function(Extremity::Right, k(2.5)).is_err());
    }

    #[test]
    fn extension_matches_iteration_on_short_windows() {
        let s = StripSpec::slit_strip(-2, 3).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        let p = sys.pole_function(Extremity::Left, k(0.5)).unwrap();
        let w = Window::new(-4, 4).unwrap();
        let a = sys.extend(&p.cross_section, w).unwrap();
        let b = extend_slit_strip_iterated(&s, &p.cross_section, w).unwrap();
        for (e, v) in a.iter() {
            let u = b.get(&e).unwrap();
            assert!((v - u).norm() < 1e-9 * (1.0 + v.norm()), "{e}: {v} vs {u}");
        }
        let s1 = StripSpec::slit_strip(-1, 1).unwrap();
        let sys1 = SingularSystem::new(s1).unwrap();
        let p = sys1.pole_function(Extremity::Top, k(0.5)).unwrap();
        let a = sys1.extend(&p.cross_section, w).unwrap();
        let b = extend_slit_strip_iterated(&s1, &p.cross_section, Window::new(-4, 0).unwrap()).unwrap();
        for (e, v) in b.iter() {
            assert!((v - a.get(&e).unwrap()).norm() < 1e-9 * (1.0 + v.norm()));
        }
    }

    #[test]
    fn pole_extensions_are_sholomorphic() {
        let s = StripSpec::centered(6, StripKind::SlitStrip).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        let w = Window::new(-12, 12).unwrap();
        for which in [Extremity::Top, Extremity::Left, Extremity::Right] {
            let p = sys.pole_function(which, k(0.5)).unwrap().with_extension(&sys, w).unwrap();
            let f = p.extension.unwrap();
            let rep = check_sholomorphic(&f);
            assert!(rep.projection.rel < 1e-12 && rep.cauchy_riemann.rel < 1e-12, "{which:?}: {rep:?}");
            let rbv = check_riemann_bv(&f);
            assert_eq!(rbv.components.len(), 4);
            assert!(rbv.max().rel < 1e-12, "{which:?}: {rbv:?}");
        }
    }

    #[test]
    fn leg_mode_scales_down_the_leg() {
        let s = StripSpec::slit_strip(-3, 2).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        let f = sys.target(Extremity::Left, k(1.5)).unwrap();
        let ext = sys.extend(&f, Window::new(-5, 0).unwrap()).unwrap();
        let lam = sys.leg(Extremity::Left).eigenvalue(k(1.5)).unwrap();
        for y in -5..0 {
            let row = ext.row(y).unwrap();
            let expected = f.scale(lam.powi(-y));
            assert!(row.sub(&expected).unwrap().max_abs() < 1e-12 * lam.powi(-y));
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let s = StripSpec::centered(5, StripKind::SlitStrip).unwrap();
        let sys = SingularSystem::new(s).unwrap();
        let f = sys.solve(&SingularParts::zeros(&s)).unwrap();
        assert_eq!(f.max_abs(), 0.0);
        let ext = sys.extend(&f, Window::new(-3, 3).unwrap()).unwrap();
        assert_eq!(ext.max_abs(), 0.0);
    }

    proptest! {
        #[test]
        fn solve_is_linear_and_roundtrips(
            g in prop::collection::vec(-1.0f64..1.0, 14),
            h in prop::collection::vec(-1.0f64..1.0, 14),
            alpha in -2.0f64..2.0,
        ) {
            let s = StripSpec::slit_strip(-3, 4).unwrap();
            let sys = SingularSystem::new(s).unwrap();
            let gg = SingularParts::from_vec(&s, &g).unwrap();
            let hh = SingularParts::from_vec(&s, &h).unwrap();
            let fg = sys.solve(&gg).unwrap();
            prop_assert!(sys.singular_parts(&fg).unwrap().max_abs_diff(&gg) < 1e-10);
            let comb: Vec<f64> = g.iter().zip(&h).map(|(a, b)| alpha * a + b).collect();
            let fc = sys.solve(&SingularParts::from_vec(&s, &comb).unwrap()).unwrap();
            let mut lin = fg.scale(alpha);
            lin.axpy(1.0, &sys.solve(&hh).unwrap()).unwrap();
            prop_assert!(fc.sub(&lin).unwrap().max_abs() < 1e-10);
        }
    }
}
