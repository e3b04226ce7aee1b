//! Competitive ratio of geometric strategies `b^i`, closed form against a
//! brute-force sweep of targets. Base 2 is optimal with ratio 9.

use hinted_search::model::make_geometric;
use hinted_search::ratio::{competitive_ratio_measured, competitive_ratio_sup, TargetGrid};
use hinted_search::Branch;

fn main() -> hinted_search::Result<()> {
    println!("{:>6} {:>12} {:>12} {:>10}", "base", "closed", "measured", "converged");
    for base in [1.5, 1.8, 2.0, 2.2, 2.5, 3.0, 4.0] {
        let s = make_geometric(base, 64, Branch::Zero, 1.0)?;
        let sup = competitive_ratio_sup(&s);
        let measured = competitive_ratio_measured(&s, &TargetGrid::for_strategy(&s))?;
        println!("{base:>6.2} {:>12.6} {measured:>12.6} {:>10}", sup.value, sup.converged);
    }
    Ok(())
}
