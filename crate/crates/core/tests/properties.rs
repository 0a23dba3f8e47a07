use proptest::prelude::*;

use altns::diagnostics::entropy::{shuffle_gap, shuffle_scale};
use altns::flux::convective_flux;
use altns::means::log_mean;
use altns::thermo::primitives_from_conserved;
use altns::verify::{random_field, reference_gas, VARIANTS};
use altns::{Axis, Grid, PrimitiveState, Scheme};
use rand::SeedableRng;

fn positive() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn state() -> impl Strategy<Value = PrimitiveState> {
    (positive(), prop::array::uniform3(-10.0f64..10.0), positive())
        .prop_map(|(rho, vel, t)| PrimitiveState::from_rho_vel_t(rho, vel, t, &reference_gas()))
}

fn axis() -> impl Strategy<Value = Axis> {
    prop::sample::select(Axis::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn log_mean_is_symmetric_and_homogeneous(a in positive(), b in positive(), k in positive()) {
        let m = log_mean(a, b).unwrap();
        prop_assert_eq!(m, log_mean(b, a).unwrap());
        let mk = log_mean(k * a, k * b).unwrap();
        prop_assert!((mk - k * m).abs() <= 1e-14 * k * m);
    }

    #[test]
    fn log_mean_is_continuous_across_branches(a in positive(), e in -12.0f64..-0.5) {
        let b = a * (1.0 + 10f64.powf(e));
        let m = log_mean(a, b).unwrap();
        // the Taylor expansion of the log mean about the arithmetic mean
        let z = (b - a) / (a + b);
        let series = 0.5 * (a + b) * (1.0 - z * z / 3.0 - 4.0 * z.powi(4) / 45.0);
        let rel = (m - series).abs() / m;
        prop_assert!(rel <= 1e-15 + 0.1 * z.powi(6), "rel {rel:e} at z {z:e}");
    }

    #[test]
    fn conserved_roundtrip(q in state()) {
        let gas = reference_gas();
        let back = primitives_from_conserved(&q.to_conserved(&gas), &gas, [0; 3]).unwrap();
        prop_assert!((back.rho - q.rho).abs() <= 1e-15 * q.rho);
        prop_assert!((back.t - q.t).abs() <= 1e-9 * q.t.max(q.speed_sq()));
    }

    #[test]
    fn convective_flux_is_symmetric(l in state(), r in state(), ax in axis()) {
        let gas = reference_gas();
        let f = convective_flux(ax, &l, &r, &gas);
        let g = convective_flux(ax, &r, &l, &gas);
        for c in 0..5 {
            prop_assert!((f[c] - g[c]).abs() <= 1e-13 * f[c].abs().max(1.0));
        }
    }

    #[test]
    fn shuffle_gap_is_nonnegative(l in state(), r in state(), ax in axis()) {
        let gas = reference_gas();
        for v in VARIANTS {
            let gap = shuffle_gap(ax, &l, &r, v, &gas);
            prop_assert!(gap >= -1e-12 * shuffle_scale(ax, &l, &r, v, &gas), "{gap:e}");
        }
    }

    #[test]
    fn semi_discrete_totals_conserved(seed in any::<u64>(), n in 4usize..12, v in 0usize..2) {
        let gas = reference_gas();
        let grid = Grid::new([n, n / 2 + 2, 0], [1.0, 0.7, 1.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let u = random_field(&grid, &gas, &mut rng);
        let du = Scheme::new(grid.clone(), gas, VARIANTS[v]).rhs(&u, 0.0).unwrap();
        for c in [0, 4] {
            let total: f64 = (0..grid.len()).map(|i| grid.volume(i) * du.component(c)[i]).sum();
            let scale: f64 = (0..grid.len()).map(|i| grid.volume(i) * du.component(c)[i].abs()).sum();
            prop_assert!(total.abs() <= 1e-12 * scale.max(1.0), "component {c}: {total:e} of {scale:e}");
        }
    }
}
