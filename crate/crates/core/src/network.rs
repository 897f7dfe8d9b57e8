//! The N-cavity optical low-pass filter and its frequency responses.
//!
//! Each cavity has two mirrors M1, M2 with equal decay rate `γ`. Mirror M1 of
//! cavity `j − 1` drives mirror M2 of cavity `j`; the network output is M1 of
//! the last cavity. Inputs are ordered `[M1₁, …, M1_N, M2₁]`, so the driven
//! input is the last pair.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io;
use crate::lqss::{build_from_slh, interconnect_partial, permute_inputs, select_outputs, QuadratureModel, SlhParams};
use crate::numerics::{Complex64, ComplexMatrix, RealMatrix};
use crate::reduction::{reduce, ReductionTarget, TruncationReport};

/// Mirror decay rate used in the reference example (Hz).
pub const REFERENCE_GAMMA: f64 = 12e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityNetworkSpec {
    pub cavities: usize,
    pub gamma: f64,
}

impl CavityNetworkSpec {
    pub fn new(cavities: usize, gamma: f64) -> Result<Self> {
        if cavities == 0 || !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need N >= 1 and gamma > 0, got N = {cavities}, gamma = {gamma}"
            )));
        }
        Ok(CavityNetworkSpec { cavities, gamma })
    }
}

/// One cavity: `S = I₂`, `R = 0`, `K = ½√γ·[[1, i], [1, i]]`.
pub fn build_cavity(gamma: f64) -> Result<SlhParams> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput(format!("gamma must be positive, got {gamma}")));
    }
    let h = 0.5 * gamma.sqrt();
    let k = ComplexMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(h, 0.0), Complex64::new(0.0, h), Complex64::new(h, 0.0), Complex64::new(0.0, h)],
    );
    SlhParams::new(ComplexMatrix::identity(2, 2), k, RealMatrix::zeros(2, 2))
}

/// `N` modes, `2(N+1)` input quadratures, 2 output quadratures.
pub fn build_network(spec: &CavityNetworkSpec) -> Result<QuadratureModel> {
    let cavity = build_from_slh(&build_cavity(spec.gamma)?)?;
    let mut net = select_outputs(&cavity, &[0])?;
    for _ in 1..spec.cavities {
        let joined = interconnect_partial(&net, &[0], &cavity, &[1])?;
        net = select_outputs(&joined, &[0])?;
    }
    // Inputs are now [M1₁, M2₁, M1₂, …, M1_N].
    let n = spec.cavities;
    let perm: Vec<usize> = std::iter::once(0).chain(2..=n).chain(std::iter::once(1)).collect();
    permute_inputs(&net, &perm)
}

/// Responses from the two quadratures of the driven input to the two output quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    /// rad/s.
    pub omegas: Vec<f64>,
    pub magnitude: [Vec<f64>; 2],
    /// Unwrapped, rad.
    pub phase: [Vec<f64>; 2],
}

/// `n` points log-spaced over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n).map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64)).collect()
}

/// The 400-point grid over `ω/γ ∈ [10⁻², 10²]`.
pub fn reference_grid(gamma: f64) -> Vec<f64> {
    log_grid(1e-2 * gamma, 1e2 * gamma, 400)
}

fn unwrap(phases: &mut [f64]) {
    for k in 1..phases.len() {
        let mut d = phases[k] - phases[k - 1];
        while d > PI {
            phases[k] -= 2.0 * PI;
            d -= 2.0 * PI;
        }
        while d < -PI {
            phases[k] += 2.0 * PI;
            d += 2.0 * PI;
        }
    }
}

/// Entries `Ξ(iω)[0, 2m−2]` and `Ξ(iω)[1, 2m−1]` (driven input = last pair).
pub fn frequency_response(g: &QuadratureModel, omegas: &[f64]) -> Result<FrequencyResponse> {
    if g.n_y < 2 || g.m < 1 {
        return Err(Error::DimensionMismatch("need at least one input and output pair".into()));
    }
    let col = 2 * g.m - 2;
    let mut magnitude = [Vec::with_capacity(omegas.len()), Vec::with_capacity(omegas.len())];
    let mut phase = [Vec::with_capacity(omegas.len()), Vec::with_capacity(omegas.len())];
    for &w in omegas {
        let t = g.lti().transfer_at(Complex64::new(0.0, w))?;
        for ch in 0..2 {
            let z = t[(ch, col + ch)];
            magnitude[ch].push(z.norm());
            phase[ch].push(z.arg());
        }
    }
    for p in phase.iter_mut() {
        unwrap(p);
    }
    Ok(FrequencyResponse { omegas: omegas.to_vec(), magnitude, phase })
}

/// Everything produced by [`run_example`].
#[derive(Debug, Clone)]
pub struct ExampleBundle {
    pub network: QuadratureModel,
    pub report: TruncationReport,
    pub full: FrequencyResponse,
    pub reduced: FrequencyResponse,
}

/// Builds the network, reduces it to `keep` modes and evaluates both responses.
/// With `out_dir`, writes `report.json`, `response_full.csv` and `response_reduced.csv`.
pub fn run_example(spec: &CavityNetworkSpec, keep: usize, out_dir: Option<&Path>) -> Result<ExampleBundle> {
    let network = build_network(spec)?;
    let report = reduce(&network, ReductionTarget::Keep(keep))?;
    let grid = reference_grid(spec.gamma);
    let full = frequency_response(&network, &grid)?;
    let reduced = frequency_response(&report.reduced, &grid)?;
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::InvalidInput(format!("{}: {e}", dir.display())))?;
        let json = serde_json::to_string_pretty(&io::report_to_json(&report))
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        std::fs::write(dir.join("report.json"), json + "\n")
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
        io::write_response_csv(&dir.join("response_full.csv"), &full)?;
        io::write_response_csv(&dir.join("response_reduced.csv"), &reduced)?;
    }
    Ok(ExampleBundle { network, report, full, reduced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lqss::check_physical_realizability;

    #[test]
    fn single_cavity_network() {
        let g = build_network(&CavityNetworkSpec::new(1, 2.0).unwrap()).unwrap();
        assert_eq!((g.n, g.m, g.n_y), (1, 2, 2));
        let s = 2f64.sqrt();
        assert!((&g.c - RealMatrix::identity(2, 2) * s).norm() < 1e-12);
        let mut d = RealMatrix::zeros(2, 4);
        d[(0, 0)] = 1.0;
        d[(1, 1)] = 1.0;
        assert_eq!(g.d, d);
    }

    #[test]
    fn five_cavity_shape() {
        let g = build_network(&CavityNetworkSpec::new(5, REFERENCE_GAMMA).unwrap()).unwrap();
        assert_eq!((g.n, g.m, g.n_y), (5, 6, 2));
        assert!(check_physical_realizability(&g, 1e-12).passed);
    }

    #[test]
    fn phase_unwrapping() {
        let mut p = vec![3.0, -3.0, 3.0];
        unwrap(&mut p);
        assert!((p[1] - (2.0 * PI - 3.0)).abs() < 1e-12);
        assert!((p[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_spec() {
        assert!(CavityNetworkSpec::new(0, 1.0).is_err());
        assert!(CavityNetworkSpec::new(2, -1.0).is_err());
    }
}
