//! From SLH parameters to a quadrature model, its physical-realizability
//! residuals, and back.
//!
//! ```bash
//! cargo run -p lqss-reduce --example physical_realizability
//! ```

use lqss_reduce::generators::random_pr_system;
use lqss_reduce::lqss::{
    check_physical_realizability, select_outputs, slh_from_model, with_completed_outputs,
};

fn main() -> lqss_reduce::Result<()> {
    let (slh, g) = random_pr_system(2, 2, 11, true)?;
    let pr = check_physical_realizability(&g, 1e-10);
    println!("model: n = {}, inputs = {}, outputs = {}", g.n, 2 * g.m, g.n_y);
    println!("residuals: state {:.1e}, cross {:.1e}, output {:.1e}", pr.state, pr.cross, pr.output);

    let back = slh_from_model(&g)?;
    println!("round trip |ΔK| = {:.1e}, |ΔR| = {:.1e}", (&back.k - &slh.k).norm(), (&back.r - &slh.r).norm());

    // Dropping an output pair keeps the model realizable; completion restores a square D.
    let partial = select_outputs(&g, &[1])?;
    let completed = with_completed_outputs(&partial)?;
    println!(
        "after dropping an output: {} outputs, completed back to {} (PR: {})",
        partial.n_y,
        completed.n_y,
        check_physical_realizability(&completed, 1e-8).passed
    );
    Ok(())
}
