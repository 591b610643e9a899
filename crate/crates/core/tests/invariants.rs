use fracdyn_core::frac::{rl_integral, FracOrder, SampledPath, StateVec, TimeGrid};
use fracdyn_core::kamke::{comparison_family, KamkeSpec};
use fracdyn_core::mnc::{hausdorff_c0, CoeffRule, SetFamily};
use proptest::prelude::*;

fn grid() -> TimeGrid {
    TimeGrid::new(0.0, 0.01, 100).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_is_linear(alpha in 0.05f64..1.0, a in -3.0f64..3.0, b in -3.0f64..3.0, w in 0.5f64..4.0) {
        let g = grid();
        let al = FracOrder::new(alpha).unwrap();
        let f = SampledPath::from_fn(g, |t| (w * t).sin());
        let k = SampledPath::from_fn(g, |t| t * t - 0.3);
        let mix = SampledPath::from_fn(g, |t| a * (w * t).sin() + b * (t * t - 0.3));
        let lhs = rl_integral(&mix, al).scalar_values();
        let (jf, jk) = (rl_integral(&f, al).scalar_values(), rl_integral(&k, al).scalar_values());
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - a * jf[i] - b * jk[i]).abs() <= 1e-12 * (1.0 + lhs[i].abs()));
        }
    }

    #[test]
    fn integral_preserves_sign_and_norm_bound(alpha in 0.05f64..1.0, c in 0.1f64..5.0) {
        let g = grid();
        let al = FracOrder::new(alpha).unwrap();
        let f = SampledPath::from_fn(g, |t| c * (1.0 + (7.0 * t).cos()) / 2.0);
        let j = rl_integral(&f, al).scalar_values();
        let gam = fracdyn_core::frac::gamma(alpha + 1.0).unwrap();
        for (i, t) in g.nodes().enumerate() {
            prop_assert!(j[i] >= -1e-14);
            prop_assert!(j[i] <= c * t.powf(alpha) / gam * (1.0 + 1e-12) + 1e-14);
        }
    }

    #[test]
    fn hausdorff_scales_and_ignores_translation(s in -4.0f64..4.0, c in 0.1f64..3.0, shift in -2.0f64..2.0) {
        let base = SetFamily::scaled_basis(CoeffRule::Constant(c)).unwrap();
        let chi = hausdorff_c0(&base).unwrap().value;
        let scaled = hausdorff_c0(&base.clone().scale(s)).unwrap().value;
        prop_assert!((scaled - s.abs() * chi).abs() <= 1e-12 * (1.0 + chi));
        let off = StateVec::new(vec![shift, 1.0, -shift]);
        let moved = hausdorff_c0(&base.translate(off)).unwrap().value;
        prop_assert!((moved - chi).abs() <= 1e-12 * (1.0 + chi));
    }
}

#[test]
fn comparison_paths_are_ordered_in_eps() {
    let al = FracOrder::new(0.6).unwrap();
    let spec = KamkeSpec::constant(1.0, 2.0, al, 0.0, 1.0).unwrap();
    let fam = comparison_family(&spec, &[1e-2, 1e-3, 1e-4, 0.0], grid(), 1e-10, 200).unwrap();
    for w in fam.paths.windows(2) {
        let (hi, lo) = (w[0].scalar_values(), w[1].scalar_values());
        for (x, y) in hi.iter().zip(&lo) {
            assert!(x >= y, "{x} < {y}");
        }
    }
    assert!(fam.paths[3].scalar_values().iter().all(|v| *v == 0.0));
}
