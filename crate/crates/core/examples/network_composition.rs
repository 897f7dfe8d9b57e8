//! Concatenation, series products and partial interconnections.
//!
//! ```bash
//! cargo run -p lqss-reduce --example network_composition
//! ```

use lqss_reduce::lqss::{
    build_from_slh, check_physical_realizability, concatenate, interconnect_partial, series,
};
use lqss_reduce::network::build_cavity;

fn main() -> lqss_reduce::Result<()> {
    let a = build_cavity(1.0)?;
    let b = build_cavity(2.0)?;

    let side_by_side = build_from_slh(&concatenate(&a, &b))?;
    println!("concatenation: {} modes, {} channels", side_by_side.n, side_by_side.m);

    let cascade = build_from_slh(&series(&b, &a)?)?;
    println!("series b ◁ a: {} modes, {} channels", cascade.n, cascade.m);
    println!("A =\n{:.3}", cascade.a);

    // Output 0 of the first cavity drives input 1 of the second.
    let up = build_from_slh(&a)?;
    let down = build_from_slh(&b)?;
    let joined = interconnect_partial(&up, &[0], &down, &[1])?;
    println!(
        "partial interconnection: {} modes, {} inputs, {} outputs, PR residual {:.1e}",
        joined.n,
        2 * joined.m,
        joined.n_y,
        check_physical_realizability(&joined, 1e-10).max_residual()
    );
    Ok(())
}
