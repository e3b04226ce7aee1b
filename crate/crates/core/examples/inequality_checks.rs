//! The growth and prefix-sum inequalities every r-robust strategy obeys,
//! checked across the robust base interval, plus a strategy that breaks them.

use hinted_search::bounds::{check_prefix_sum_bound, check_segment_growth_lemma};
use hinted_search::model::{make_geometric, robust_base_interval};
use hinted_search::{verify, Branch, Strategy};

fn main() -> hinted_search::Result<()> {
    for r in verify::DEFAULT_R_VALUES {
        let (lo, hi) = robust_base_interval(r)?;
        println!("r={r}: robust bases [{lo:.6}, {hi:.6}]");
    }
    println!("{}", verify::lemma_suite(1e-9)?.summary());
    println!("{}", verify::corollary_suite(1e-9)?.summary());

    let s = make_geometric(3.0, 30, Branch::Zero, 1.0)?;
    let rep = check_prefix_sum_bound(&s, 13.0)?;
    println!("\nbase 3 at r=13: holds={}, tail bound from i > {:?}", rep.holds(), rep.tail_from);

    let bad = Strategy::alternating(&[1.0, 100.0], Branch::Zero)?;
    let rep = check_segment_growth_lemma(&bad, 9.0)?;
    println!("(1, 100) at r=9: holds={}, violated at {:?}, worst {:?}", rep.holds(), rep.violated_at, rep.worst());
    Ok(())
}
