//! Checking a weak co-diagonalization certificate `(T_P, T_Q, D_P, D_Q)`.
//!
//! ```bash
//! cargo run -p lqss-reduce --example point3_certificate
//! ```

use lqss_reduce::numerics::RealMatrix;
use lqss_reduce::reduction::verify_point3_certificate;
use lqss_reduce::symplectic::{paired_diagonal, random_symplectic, SymplecticTransform};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> lqss_reduce::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = random_symplectic(2, 0.5, &mut rng);
    let diag = |v: &[f64]| RealMatrix::from_diagonal(&DVector::from_column_slice(v));
    let dp = diag(&[2.0, 0.5, 1.0, 1.0]);
    let dq = diag(&[1.0, 1.0, 3.0, 1.0 / 3.0]);
    let dp_inv = diag(&[0.5, 2.0, 1.0, 1.0]);
    let dq_inv = diag(&[1.0, 1.0, 1.0 / 3.0, 3.0]);

    // T = D_P⁻¹·T_P = D_Q·T_Q, with T_P, T_Q Williamson transforms of P, Q.
    let t = &dp_inv * &w;
    let tp = w.clone();
    let tq = &dq_inv * &t;
    let w_inv = SymplecticTransform::new(w.clone())?.inverse_matrix();
    let p = &w_inv * paired_diagonal(&[1.5, 0.8]) * w_inv.transpose();
    let q = tq.transpose() * paired_diagonal(&[0.9, 0.2]) * &tq;

    let cert = verify_point3_certificate(&p, &q, &tp, &tq, &dp, &dq)?;
    let tm = &cert.matrix;
    println!("certificate accepted");
    println!("T·P·Tᵀ diagonal: {:.4?}", (tm * &p * tm.transpose()).diagonal().as_slice());

    let mut forged = dq.clone();
    forged[(2, 2)] = 2.0;
    forged[(3, 3)] = 0.5;
    match verify_point3_certificate(&p, &q, &tp, &tq, &dp, &forged) {
        Ok(_) => println!("forged certificate accepted (unexpected)"),
        Err(e) => println!("forged certificate rejected: {e}"),
    }
    Ok(())
}
