//! Seeded random systems: generic physically realizable and completely passive.
//!
//! ```bash
//! cargo run -p lqss-reduce --example random_systems
//! ```

use lqss_reduce::generators::{random_cp_system, random_pr_system};
use lqss_reduce::io::system_to_json;
use lqss_reduce::lqss::is_completely_passive;
use lqss_reduce::numerics::spectral_abscissa;

fn main() -> lqss_reduce::Result<()> {
    for seed in 0..3 {
        let (slh, g) = random_pr_system(3, 2, seed, true)?;
        println!(
            "seed {seed}: PR system, abscissa {:.3}, passive {}",
            spectral_abscissa(&g.a)?,
            is_completely_passive(&slh, 1e-9).0
        );
    }
    let (_, g) = random_cp_system(1, 1, 0, true)?;
    println!("{}", serde_json::to_string_pretty(&system_to_json(&g)).unwrap());
    Ok(())
}
