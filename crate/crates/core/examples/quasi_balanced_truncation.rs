//! Quasi-balancing a completely passive system and truncating to a budget.
//!
//! ```bash
//! cargo run -p lqss-reduce --example quasi_balanced_truncation
//! ```

use lqss_reduce::generators::random_cp_system;
use lqss_reduce::lqss::{is_completely_passive, select_outputs, slh_from_model};
use lqss_reduce::reduction::{classify_codiagonalizability, gramians, quasi_balance, reduce, ReductionTarget};

fn main() -> lqss_reduce::Result<()> {
    let (_, full) = random_cp_system(4, 2, 3, true)?;
    let g = select_outputs(&full, &[0])?;

    let gp = gramians(&g)?;
    println!("co-diagonalizability: {:?}", classify_codiagonalizability(&gp, 1e-8));

    let qb = quasi_balance(&g)?;
    println!("σ_P = {:.4?}", qb.sigma_p);
    println!("σ_Q = {:.4?}", qb.sigma_q);
    println!("σ_b = {:.4?}", qb.sigma_b);
    println!("T orthogonal: {}", qb.transform.is_orthogonal(1e-9));

    for budget in [4.0, 2.0, 0.5, 0.1] {
        match reduce(&g, ReductionTarget::Budget(budget)) {
            Ok(r) => {
                let passive = is_completely_passive(&slh_from_model(&r.reduced)?, 1e-8).0;
                println!(
                    "budget {budget}: keep {} modes, bound {:.4}, error {:.4}, passive {passive}",
                    r.kept, r.bound, r.exact_error
                );
            }
            Err(e) => println!("budget {budget}: {e}"),
        }
    }
    Ok(())
}
