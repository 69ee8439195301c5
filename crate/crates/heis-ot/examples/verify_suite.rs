//! Run every diagnostic suite programmatically and print one summary table.
//! The same suites back `hcli verify`.
//!
//! ```bash
//! cargo run --example verify_suite
//! ```

use heis_ot::diagnostics::{
    check_ball_scaling, verify_density, verify_geometry, verify_transport, DensitySuiteConfig,
};
use heis_ot::io::write_check_summary_csv;

fn main() {
    let seed = 41;
    let mut reports = verify_geometry(seed);
    reports.push(check_ball_scaling(1, 200_000, seed));
    reports.extend(verify_transport(seed));
    // A lighter pipeline instance than the acceptance scale keeps the
    // example quick; pass DensitySuiteConfig::default() for the full run.
    let cfg = DensitySuiteConfig {
        n_samples: 500,
        epsilons: vec![0.5, 0.1, 0.02],
        mcp_samples: 40_000,
        lower_density_samples: 30_000,
        ..DensitySuiteConfig::default()
    };
    reports.extend(verify_density(seed, &cfg));

    let mut table = Vec::new();
    write_check_summary_csv(&mut table, &reports).unwrap();
    print!("{}", String::from_utf8_lossy(&table));

    let gated_failures = reports
        .iter()
        .filter(|r| !r.pass && !r.name.contains("negative_control"))
        .count();
    println!(
        "\n{} checks, {gated_failures} gated failures",
        reports.len()
    );
}
