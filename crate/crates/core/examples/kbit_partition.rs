//! k-bit hints: the hint picks one of `2^k` staggered geometric strategies.
//! Prints which member is cheapest on each stretch of the line, then the
//! measured consistency against its closed-form upper bound.

use hinted_search::bounds::kbit_consistency_upper;
use hinted_search::hints::{preferred_partition, EvalOptions};
use hinted_search::{Branch, Family, HintedStrategy};

fn main() -> hinted_search::Result<()> {
    let (r, k) = (9.0, 2);
    let p = preferred_partition(r, k, 64.0, 64)?;
    for b in Branch::BOTH {
        println!("branch {b}:");
        for iv in p.branch(b) {
            println!("  ({:>9.4}, {:>9.4}] -> member {}", iv.lo, iv.hi, iv.label);
        }
    }

    println!();
    for k in 1..=4 {
        let m = HintedStrategy::new(Family::KBit { r, k }, 64)?.evaluate(&EvalOptions::default())?;
        println!(
            "k={k}: consistency {:.6} (upper {:.6}), robustness {:.6}",
            m.consistency,
            kbit_consistency_upper(r, k)?,
            m.robustness
        );
    }
    Ok(())
}
