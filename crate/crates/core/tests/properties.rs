mod common;

use common::*;
use lqss_reduce::generators::{random_cp_system, random_pr_system};
use lqss_reduce::io::{read_response_csv, response_csv_string};
use lqss_reduce::lqss::{
    build_from_slh, check_physical_realizability, interconnect_partial, series, slh_from_model,
    symplectic_similarity, truncate_subsystem,
};
use lqss_reduce::network::{build_network, frequency_response, log_grid, CavityNetworkSpec};
use lqss_reduce::numerics::solve_lyapunov;
use lqss_reduce::reduction::gramians;
use lqss_reduce::symplectic::{random_symplectic, symplectic_eigenvalues, SymplecticTransform};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn truncation_preserves_realizability(seed in any::<u64>(), n in 2usize..=4, m in 1usize..=3, r in 1usize..4) {
        let (_, g) = random_pr_system(n, m, seed, false).unwrap();
        let r = 1 + r % (n - 1);
        let t = truncate_subsystem(&g, r).unwrap();
        let res = pr_residuals(&t.a, &t.b, &t.c, &t.d);
        prop_assert!(res.iter().all(|&x| x <= 1e-9), "{res:?}");
    }

    #[test]
    fn slh_round_trip(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let (p, g) = random_cp_system(n, m, seed, false).unwrap();
        let back = slh_from_model(&g).unwrap();
        prop_assert!((&back.s - &p.s).norm() <= 1e-10);
        prop_assert!((&back.k - &p.k).norm() <= 1e-10 * p.k.norm().max(1.0));
        prop_assert!((&back.r - &p.r).norm() <= 1e-10 * p.r.norm().max(1.0));
    }

    #[test]
    fn similarity_preserves_realizability(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let (_, g) = random_pr_system(n, m, seed, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let t = SymplecticTransform::new(random_symplectic(n, 0.4, &mut rng)).unwrap();
        let h = symplectic_similarity(&g, &t).unwrap();
        prop_assert!(check_physical_realizability(&h, 1e-8).passed);
    }

    #[test]
    fn symplectic_eigenvalues_invariant_under_congruence(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gaussian(2 * n, 2 * n, &mut rng);
        let p = &g * g.transpose() + M::identity(2 * n, 2 * n) * 0.2;
        let s = random_symplectic(n, 0.4, &mut rng);
        let a = symplectic_eigenvalues(&p).unwrap();
        let b = symplectic_eigenvalues(&(s.transpose() * &p * &s)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * x.max(1.0));
        }
    }

    #[test]
    fn lyapunov_residual(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_stable(n, &mut rng);
        let g = gaussian(n, n, &mut rng);
        let w = &g * g.transpose();
        let x = solve_lyapunov(&a, &w).unwrap();
        let res = (&a * &x + &x * a.transpose() + &w).norm();
        prop_assert!(res <= 1e-10 * (a.norm() * x.norm() + w.norm()));
        prop_assert_eq!(&x, &x.transpose());
    }

    #[test]
    fn series_product_is_realizable(s1 in any::<u64>(), s2 in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3, m in 1usize..=3) {
        let (p1, _) = random_pr_system(n1, m, s1, false).unwrap();
        let (p2, _) = random_pr_system(n2, m, s2, false).unwrap();
        let g = build_from_slh(&series(&p2, &p1).unwrap()).unwrap();
        prop_assert_eq!(g.n, n1 + n2);
        prop_assert!(check_physical_realizability(&g, 1e-8).passed);
    }

    #[test]
    fn partial_interconnection_is_realizable(s1 in any::<u64>(), s2 in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let (_, up) = random_pr_system(n1, 2, s1, false).unwrap();
        let (_, down) = random_pr_system(n2, 3, s2, false).unwrap();
        let g = interconnect_partial(&up, &[1], &down, &[2]).unwrap();
        prop_assert_eq!((g.n, g.m, g.n_y), (n1 + n2, 4, 8));
        prop_assert!(check_physical_realizability(&g, 1e-8).passed);
    }

    #[test]
    fn network_channels_identical(n in 1usize..=6, log_gamma in -2.0f64..8.0) {
        let gamma = 10f64.powf(log_gamma);
        let g = build_network(&CavityNetworkSpec::new(n, gamma).unwrap()).unwrap();
        let resp = frequency_response(&g, &log_grid(1e-2 * gamma, 1e2 * gamma, 60)).unwrap();
        for k in 0..resp.omegas.len() {
            prop_assert!((resp.magnitude[0][k] - resp.magnitude[1][k]).abs() <= 1e-9);
            prop_assert!((resp.phase[0][k] - resp.phase[1][k]).abs() <= 1e-9);
        }
    }

    #[test]
    fn hankel_values_scale_free(n in 1usize..=5, log_gamma in -3.0f64..9.0) {
        let h1 = gramians(&build_network(&CavityNetworkSpec::new(n, 1.0).unwrap()).unwrap()).unwrap().hankel;
        let h2 = gramians(&build_network(&CavityNetworkSpec::new(n, 10f64.powf(log_gamma)).unwrap()).unwrap()).unwrap().hankel;
        for (a, b) in h1.iter().zip(&h2) {
            prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-3));
        }
    }

    #[test]
    fn csv_round_trip(n in 1usize..=5, points in 1usize..=40, log_gamma in -2.0f64..8.0) {
        let gamma = 10f64.powf(log_gamma);
        let g = build_network(&CavityNetworkSpec::new(n, gamma).unwrap()).unwrap();
        let resp = frequency_response(&g, &log_grid(1e-2 * gamma, 1e2 * gamma, points)).unwrap();
        let text = response_csv_string(&resp).unwrap();
        let back = read_response_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(back, resp);
    }
}
