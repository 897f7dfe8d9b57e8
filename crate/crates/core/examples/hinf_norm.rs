//! H∞ norm of a lightly damped oscillator.
//!
//! ```bash
//! cargo run -p lqss-reduce --example hinf_norm
//! ```

use lqss_reduce::numerics::{hinf_norm, Lti, RealMatrix};

fn main() -> lqss_reduce::Result<()> {
    let (wn, zeta) = (3.0, 0.05);
    let a = RealMatrix::from_row_slice(2, 2, &[0.0, 1.0, -wn * wn, -2.0 * zeta * wn]);
    let b = RealMatrix::from_row_slice(2, 1, &[0.0, wn * wn]);
    let c = RealMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    let d = RealMatrix::zeros(1, 1);

    let h = hinf_norm(&Lti::new(&a, &b, &c, &d)?, 1e-9)?;
    let peak = 1.0 / (2.0 * zeta * (1.0 - zeta * zeta).sqrt());
    let w_peak = wn * (1.0 - 2.0 * zeta * zeta).sqrt();
    println!("‖G‖∞ = {:.9} at ω = {:.6} ({:?})", h.value, h.peak_frequency, h.method);
    println!("closed form {peak:.9} at ω = {w_peak:.6}");
    Ok(())
}
