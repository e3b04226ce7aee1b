//! Consistency/robustness curves for every hint class as one CSV on stdout.

use hinted_search::bounds::{build_frontiers, write_frontier_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rs: Vec<f64> = (0..=20).map(|i| 9.0 + i as f64 * 0.5).collect();
    let curves = build_frontiers(&rs, &[2, 3])?;
    write_frontier_csv(&curves, std::io::stdout().lock())?;
    Ok(())
}
