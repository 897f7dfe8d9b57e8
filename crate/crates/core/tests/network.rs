mod common;

use common::*;
use lqss_reduce::io::read_response_csv;
use lqss_reduce::lqss::{build_from_slh, check_physical_realizability, is_completely_passive, slh_from_model};
use lqss_reduce::network::{
    build_cavity, build_network, reference_grid, run_example, CavityNetworkSpec, REFERENCE_GAMMA,
};
use lqss_reduce::reduction::gramians;

#[test]
fn cavity_quadrature_model() {
    let g = build_from_slh(&build_cavity(REFERENCE_GAMMA).unwrap()).unwrap();
    assert!((&g.a + M::identity(2, 2) * REFERENCE_GAMMA).amax() <= 1e-6);
    assert!(check_physical_realizability(&g, 1e-12).passed);
}

#[test]
fn network_is_stable_and_passive() {
    for n in 1..=6 {
        let g = build_network(&CavityNetworkSpec::new(n, REFERENCE_GAMMA).unwrap()).unwrap();
        assert_eq!((g.n, g.m, g.n_y), (n, n + 1, 2));
        assert!(max_real_eig(&g.a) < 0.0);
        assert!(is_completely_passive(&slh_from_model(&g).unwrap(), 1e-9).0);
    }
}

#[test]
fn hankel_values_do_not_depend_on_gamma() {
    let h = |gamma| gramians(&build_network(&CavityNetworkSpec::new(5, gamma).unwrap()).unwrap()).unwrap().hankel;
    let (a, b) = (h(1.0), h(REFERENCE_GAMMA));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-9 * x, "{x} vs {y}");
    }
}

#[test]
fn reduced_response_shape() {
    let bundle = run_example(&CavityNetworkSpec::new(5, REFERENCE_GAMMA).unwrap(), 3, None).unwrap();
    let gamma = REFERENCE_GAMMA;
    for k in 0..bundle.full.omegas.len() {
        let w = bundle.full.omegas[k];
        let (full, red) = (bundle.full.magnitude[0][k], bundle.reduced.magnitude[0][k]);
        if w <= 0.05 * gamma {
            assert!((red - full).abs() <= 0.05, "ω = {w}: {red} vs {full}");
        }
        if w >= 2.0 * gamma {
            assert!(red >= full - 1e-6, "ω = {w}: {red} vs {full}");
        }
        assert!((bundle.full.magnitude[0][k] - bundle.full.magnitude[1][k]).abs() <= 1e-9);
        assert!((bundle.reduced.phase[0][k] - bundle.reduced.phase[1][k]).abs() <= 1e-9);
    }
}

#[test]
fn example_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = run_example(&CavityNetworkSpec::new(5, REFERENCE_GAMMA).unwrap(), 3, Some(dir.path())).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!((report["bound"].as_f64().unwrap() - 0.1932).abs() <= 1e-4);
    assert_eq!(report["kept"], 3);
    let full = read_response_csv(std::fs::File::open(dir.path().join("response_full.csv")).unwrap()).unwrap();
    let reduced = read_response_csv(std::fs::File::open(dir.path().join("response_reduced.csv")).unwrap()).unwrap();
    assert_eq!(full, bundle.full);
    assert_eq!(reduced, bundle.reduced);
    assert_eq!(full.omegas, reference_grid(REFERENCE_GAMMA));
}
