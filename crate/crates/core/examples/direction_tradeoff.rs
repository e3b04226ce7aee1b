//! Hints that name only the target's branch. The strategy goes `b^i` on the
//! hinted branch and `delta * b^i` on the other; this prints the closed-form
//! tradeoff, a measured check, and the best consistency for a few
//! robustness budgets.

use hinted_search::bounds::{direction_optimum, direction_tradeoff};
use hinted_search::hints::EvalOptions;
use hinted_search::{Family, HintedStrategy};

fn main() -> hinted_search::Result<()> {
    println!("{:>5} {:>6} {:>12} {:>12} {:>12} {:>12}", "b", "delta", "c", "r", "c measured", "r measured");
    for b in [1.5, 2.0, 3.0] {
        for delta in [0.25, 0.5, 1.0] {
            let closed = direction_tradeoff(b, delta)?;
            let measured = HintedStrategy::new(Family::Direction { b, delta }, 64)?.evaluate(&EvalOptions::default())?;
            println!(
                "{b:>5} {delta:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                closed.consistency, closed.robustness, measured.consistency, measured.robustness
            );
        }
    }

    println!("\nbest consistency per robustness budget:");
    for r in [9.0, 10.0, 15.0, 25.0, 50.0, 100.0] {
        let opt = direction_optimum(r)?;
        println!("  r={r:>5}: c={:.6} at b={:.4}, delta={:.4}", opt.consistency, opt.b, opt.delta);
    }
    Ok(())
}
