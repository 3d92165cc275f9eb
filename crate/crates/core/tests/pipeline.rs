use proptest::prelude::*;

use sholo_core::analysis::{check_riemann_bv, check_sholomorphic, compute_h, quiet_anchor, verify_mean_value};
use sholo_core::continuum::Extremity;
use sholo_core::slit::{SingularParts, SingularSystem};
use sholo_core::{ModeIndex, SpectralBasis, StripSpec, Window};

fn pick(count: usize, j: usize) -> ModeIndex {
    ModeIndex::positive(j % count)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pole_functions_on_off_centre_slits(a in -7i32..=-1, b in 1i32..=7, w in 0usize..3, j in 0usize..8) {
        let spec = StripSpec::slit_strip(a, b).unwrap();
        let system = SingularSystem::new(spec).unwrap();
        let (which, count) = [
            (Extremity::Top, spec.width()),
            (Extremity::Left, spec.left_width()),
            (Extremity::Right, spec.right_width()),
        ][w];
        let k = pick(count, j);
        let p = system.pole_function(which, k).unwrap();
        let unit = SingularParts::unit(&spec, which, k).unwrap();
        prop_assert!(system.singular_parts(&p.cross_section).unwrap().max_abs_diff(&unit) < 1e-8);

        let d = 2 * spec.width() as i32;
        let field = system.extend_pole(&p, Window::new(-d, d).unwrap()).unwrap();
        let s = check_sholomorphic(&field);
        prop_assert!(s.projection.rel < 1e-10 && s.cauchy_riemann.rel < 1e-10);
        prop_assert!(check_riemann_bv(&field).max().rel < 1e-10);

        let h = compute_h(&field, quiet_anchor(&field)).unwrap();
        prop_assert!(h.loop_residual.rel < 1e-9);
        let mv = verify_mean_value(&h);
        prop_assert!(mv.domination.rel < 1e-12 && mv.vertex.rel < 1e-10 && mv.face.rel < 1e-10);
    }

    #[test]
    fn strip_modes_on_off_centre_strips(a in -9i32..=-1, b in 1i32..=9, j in 0usize..18, neg: bool) {
        let spec = StripSpec::strip(a, b).unwrap();
        let basis = SpectralBasis::new(spec).unwrap();
        let k = pick(spec.width(), j);
        let k = if neg { -k } else { k };
        let d = spec.width() as i32;
        let field = basis.extend_mode(k, Window::new(-d, d).unwrap()).unwrap();
        prop_assert!(check_sholomorphic(&field).projection.rel < 1e-10);
        let h = compute_h(&field, quiet_anchor(&field)).unwrap();
        for (_, r) in &h.boundary_spread {
            prop_assert!(r.rel < 1e-9);
        }
    }
}
