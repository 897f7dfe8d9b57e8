//! Symplectic diagonalization of a positive definite matrix, including a case
//! with repeated symplectic eigenvalues.
//!
//! ```bash
//! cargo run -p lqss-reduce --example williamson_diagonalization
//! ```

use lqss_reduce::numerics::RealMatrix;
use lqss_reduce::symplectic::{random_symplectic, symplectic_residual, williamson};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn show(label: &str, p: &RealMatrix) -> lqss_reduce::Result<()> {
    let w = williamson(p)?;
    let t = &w.transform.matrix;
    let off = (t * p * t.transpose() - &w.sigma_matrix).norm();
    println!("{label}");
    println!("  σ = {:?}", w.sigma);
    println!("  ‖T·J·Tᵀ − J‖ = {:.1e}", symplectic_residual(t)?);
    println!("  ‖T·P·Tᵀ − Σ‖ = {off:.1e}");
    Ok(())
}

fn main() -> lqss_reduce::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let g = RealMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
    show("generic P", &(&g * g.transpose() + RealMatrix::identity(6, 6)))?;

    // P = Sᵀ·diag(2, 2, 2, 2, 0.5, 0.5)·S has σ = (2, 2, 0.5).
    let s = random_symplectic(3, 0.6, &mut rng);
    let d = RealMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 2.0, 2.0, 2.0, 0.5, 0.5]));
    show("degenerate P", &(s.transpose() * d * &s))?;
    Ok(())
}
