//! The five-cavity optical low-pass filter, reduced to three modes.
//!
//! ```bash
//! cargo run -p lqss-reduce --example cavity_low_pass -- [OUT_DIR]
//! ```
//!
//! With `OUT_DIR`, writes `report.json`, `response_full.csv` and
//! `response_reduced.csv` there.

use std::path::PathBuf;

use lqss_reduce::network::{run_example, CavityNetworkSpec, REFERENCE_GAMMA};

fn main() -> lqss_reduce::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let spec = CavityNetworkSpec::new(5, REFERENCE_GAMMA)?;
    let bundle = run_example(&spec, 3, out.as_deref())?;
    let report = &bundle.report;

    println!("Hankel singular values:");
    for pair in report.hankel.chunks(2) {
        println!("  {:.4}  {:.4}", pair[0], pair[1]);
    }
    println!("kept {} of {} modes", report.kept, bundle.network.n);
    println!("a-priori bound  {:.4}", report.bound);
    println!("actual H∞ error {:.4} at ω = {:.3e} rad/s", report.exact_error, report.exact_error_omega);

    println!("\n  ω/γ        |Ξ_full|   |Ξ_red|");
    for k in (0..bundle.full.omegas.len()).step_by(50) {
        println!(
            "  {:<10.3e} {:.5}    {:.5}",
            bundle.full.omegas[k] / spec.gamma,
            bundle.full.magnitude[0][k],
            bundle.reduced.magnitude[0][k]
        );
    }
    if let Some(dir) = out {
        println!("\nartifacts written to {}", dir.display());
    }
    Ok(())
}
