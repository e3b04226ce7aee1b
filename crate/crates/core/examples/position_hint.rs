//! Hints that name the target's exact position. For each robustness level the
//! family is measured over trusted and adversarial hints and compared with
//! the closed-form consistency `(b+1)/(b-1)`.

use hinted_search::bounds::position_consistency_bound;
use hinted_search::hints::{position_hint_strategy, EvalOptions};
use hinted_search::model::{base_for_robustness, search_cost};
use hinted_search::{Branch, Family, HintedStrategy, Target};

fn main() -> hinted_search::Result<()> {
    for r in [9.0, 10.0, 15.0, 30.0] {
        let hs = HintedStrategy::new(Family::Position { r }, 64)?;
        let p = hs.evaluate(&EvalOptions::default())?;
        println!(
            "r={r:>4}: base {:.4}, consistency {:.6} (bound {:.6}), robustness {:.6}",
            base_for_robustness(r)?,
            p.consistency,
            position_consistency_bound(r)?,
            p.robustness
        );
    }

    // one member in detail: the walk for a hint at distance 100 on branch 1
    let s = position_hint_strategy(9.0, 100.0, Branch::One, 12)?;
    println!("\nmember for hint (100, branch 1):");
    for seg in s.segments() {
        println!("  {:>10.3} on branch {}", seg.length, seg.branch);
    }
    let t = Target::new(100.0, Branch::One)?;
    println!("cost to reach the hinted target: {:.3}", search_cost(&s, &t).unwrap());
    Ok(())
}
