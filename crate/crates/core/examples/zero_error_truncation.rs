//! A mode that never reaches the kept output is removed with zero error.
//!
//! ```bash
//! cargo run -p lqss-reduce --example zero_error_truncation
//! ```

use lqss_reduce::lqss::{build_from_slh, select_outputs, slh_from_passive, PassiveParams};
use lqss_reduce::numerics::{Complex64, ComplexMatrix};
use lqss_reduce::reduction::{reduce, ReductionTarget};

fn main() -> lqss_reduce::Result<()> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    // Modes 1 and 2 talk to channel 1; mode 3 only to channel 2.
    let r_tilde = ComplexMatrix::from_row_slice(
        3,
        3,
        &[c(0.3, 0.0), c(0.4, -0.2), c(0.0, 0.0), c(0.4, 0.2), c(-0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.7, 0.0)],
    );
    let k_tilde = ComplexMatrix::from_row_slice(
        2,
        3,
        &[c(1.0, 0.2), c(0.6, -0.5), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.9, 0.3)],
    );
    let slh = slh_from_passive(&PassiveParams { r_tilde, k_tilde }, ComplexMatrix::identity(2, 2))?;
    let g = select_outputs(&build_from_slh(&slh)?, &[0])?;

    let r = reduce(&g, ReductionTarget::Keep(2))?;
    println!("σ_P·σ_Q nonzero for ν = {} of {} modes", r.nu, g.n);
    println!("σ_Q = {:?}", r.realization.sigma_q);
    println!("‖Ξ − Ξ₂‖∞ = {:.2e}", r.exact_error);
    Ok(())
}
