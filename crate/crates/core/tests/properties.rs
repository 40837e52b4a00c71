use flatnorm::cochain::Cochain;
use flatnorm::norm;
use flatnorm::saddle::{self, Options};
use flatnorm::{delaunay, gallery};
use num_complex::Complex64;
use proptest::prelude::*;

fn torus(ux: f64, vx: f64, vy: f64) -> flatnorm::Surface {
    gallery::parallelogram_torus(Complex64::new(ux, 0.0), Complex64::new(vx, vy))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn delaunay_is_idempotent(ux in 0.5f64..2.0, vx in -3.0f64..3.0, vy in 0.3f64..2.0) {
        let (d, rep) = delaunay::delaunayize(&torus(ux, vx, vy)).unwrap();
        prop_assert!(rep.all_delaunay);
        let (d2, rep2) = delaunay::delaunayize(&d).unwrap();
        prop_assert_eq!(rep2.flips_performed, 0);
        prop_assert_eq!(d2.vectors(), d.vectors());
    }

    #[test]
    fn systole_scales_linearly(ux in 0.5f64..2.0, vx in -1.0f64..1.0, vy in 0.3f64..2.0, k in 0.2f64..5.0, th in 0.0f64..std::f64::consts::TAU) {
        let s = torus(ux, vx, vy);
        let t = s.transform(Complex64::from_polar(k, th)).unwrap();
        let (a, b) = (delaunay::systole(&s).unwrap(), delaunay::systole(&t).unwrap());
        prop_assert!((b - k * a).abs() < 1e-9 * b);
    }

    #[test]
    fn counts_are_monotone(vx in -0.5f64..0.5, vy in 0.6f64..1.5, l1 in 1.0f64..2.5, dl in 0.0f64..1.0) {
        let s = torus(1.0, vx, vy);
        let opts = Options::default();
        let a = saddle::enumerate(&s, l1, &opts).unwrap().len();
        let b = saddle::enumerate(&s, l1 + dl, &opts).unwrap().len();
        prop_assert!(a <= b);
    }

    #[test]
    fn agy_is_a_norm(seed in 0u64..1000, k in -3.0f64..3.0) {
        let s = gallery::regular_octagon();
        let opts = Options::default();
        let x = Cochain::random(&s, seed, 0.3);
        let y = Cochain::random(&s, seed + 7919, 0.3);
        let nx = norm::agy_norm(&s, &x, None, &opts).unwrap().value;
        let ny = norm::agy_norm(&s, &y, None, &opts).unwrap().value;
        let nkx = norm::agy_norm(&s, &x.scaled(Complex64::new(k, 0.0)), None, &opts).unwrap().value;
        prop_assert!((nkx - k.abs() * nx).abs() < 1e-9 * (1.0 + nkx));
        let nsum = norm::agy_norm(&s, &x.add(&y).unwrap(), None, &opts).unwrap().value;
        prop_assert!(nsum <= nx + ny + 1e-9);
    }

    #[test]
    fn lower_estimate_below_upper(seed in 0u64..1000) {
        let s = gallery::regular_octagon();
        let eta = Cochain::random(&s, seed, 0.5);
        let lo = norm::teich_lower(&s, &eta).unwrap();
        let hi = norm::teich_upper(&s, &eta).unwrap();
        prop_assert!(lo <= hi + 1e-12);
    }
}

#[test]
fn twisted_spectrum_matches_to_longer_lengths() {
    for eps in [0.1, 0.05] {
        let kw = gallery::kw_surface(eps).unwrap();
        let twist = gallery::dehn_twist_cochain(&kw, 0).unwrap();
        let t = norm::deform(&kw.surface, &twist, 1.0).unwrap();
        let opts = Options::default();
        let a = saddle::length_spectrum(&kw.surface, 1.5, &opts).unwrap();
        let b = saddle::length_spectrum(&t, 1.5, &opts).unwrap();
        assert_eq!(a.len(), b.len(), "eps {eps}");
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9, "eps {eps}: {x} vs {y}");
        }
    }
}
