//! Magnitude and phase of a two-cavity chain, printed as CSV.
//!
//! ```bash
//! cargo run -p lqss-reduce --example frequency_response > response.csv
//! ```

use lqss_reduce::io::response_csv_string;
use lqss_reduce::network::{build_network, frequency_response, log_grid, CavityNetworkSpec};

fn main() -> lqss_reduce::Result<()> {
    let g = build_network(&CavityNetworkSpec::new(2, 1.0)?)?;
    let resp = frequency_response(&g, &log_grid(0.01, 100.0, 25))?;
    print!("{}", response_csv_string(&resp)?);
    Ok(())
}
