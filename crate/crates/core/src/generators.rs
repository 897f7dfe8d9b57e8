//! Seeded random systems for tests, examples and the `random-system` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lqss::{build_from_slh, sigma_map, slh_from_passive, PassiveParams, QuadratureModel, SlhParams};
use crate::symplectic::j_form;
use crate::numerics::{default_hurwitz_tol, is_hurwitz, Complex64, ComplexMatrix, RealMatrix};

/// Draws per seed before giving up on a Hurwitz `A`.
pub const MAX_DRAWS: usize = 100;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rows: usize, cols: usize, scale: f64, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(normal(rng), normal(rng)) * (scale * std::f64::consts::FRAC_1_SQRT_2)
    })
}

/// Haar-like random unitary from the QR factor of a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_normal(m, m, 1.0, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..m {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..m {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn draw_until_stable<F>(seed: u64, stable: bool, mut draw: F) -> Result<(SlhParams, QuadratureModel)>
where
    F: FnMut(&mut ChaCha8Rng) -> Result<SlhParams>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let slh = draw(&mut rng)?;
        let g = build_from_slh(&slh)?;
        if !stable || is_hurwitz(&g.a, default_hurwitz_tol(&g.a)) {
            return Ok((slh, g));
        }
    }
    Err(Error::StabilityRetryExhausted(MAX_DRAWS))
}

/// Weight of the active (squeezing) parts of random `R` and `K`.
pub const SQUEEZE_SCALE: f64 = 0.2;

/// Random physically realizable system with `S = I`. `R` is symmetric
/// Gaussian with its `Jn`-anticommuting part weighted by [`SQUEEZE_SCALE`];
/// `K = K_a·Σ + SQUEEZE_SCALE·K_c·Σ#` is dense complex. With `stable`,
/// non-Hurwitz draws are rejected.
pub fn random_pr_system(n: usize, m: usize, seed: u64, stable: bool) -> Result<(SlhParams, QuadratureModel)> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("n and m must be at least 1".into()));
    }
    draw_until_stable(seed, stable, |rng| {
        let g = RealMatrix::from_fn(2 * n, 2 * n, |_, _| normal(rng));
        let r0 = (&g + g.transpose()) * 0.5;
        let jr = j_form(n) * &r0 * j_form(n).transpose();
        let r = (&r0 + &jr) * 0.5 + (&r0 - &jr) * (0.5 * SQUEEZE_SCALE);
        let sig = sigma_map(n);
        let k = complex_normal(m, n, 1.0, rng) * &sig
            + complex_normal(m, n, SQUEEZE_SCALE, rng) * sig.map(|z| z.conj());
        SlhParams::new(ComplexMatrix::identity(m, m), k, r)
    })
}

/// Random completely passive system: `R̃` Hermitian Gaussian, `K̃` complex
/// Gaussian of unit scale, `S` a random unitary.
pub fn random_cp_system(n: usize, m: usize, seed: u64, stable: bool) -> Result<(SlhParams, QuadratureModel)> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidInput("n and m must be at least 1".into()));
    }
    draw_until_stable(seed, stable, |rng| {
        let h = complex_normal(n, n, 1.0, rng);
        let r_tilde = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let k_tilde = complex_normal(m, n, 1.0, rng);
        let s = random_unitary(m, rng);
        slh_from_passive(&PassiveParams { r_tilde, k_tilde }, s)
    })
}
