//! Any strategy can be written down as JSON and evaluated. This one mixes
//! growth rates; the walk's cost is traced for a few targets.

use hinted_search::model::search_cost;
use hinted_search::ratio::{competitive_ratio_measured, competitive_ratio_sup, TargetGrid};
use hinted_search::{Branch, Strategy, Target};

const JSON: &str = r#"{"segments": [
    {"length": 1.0, "branch": 0}, {"length": 3.0, "branch": 1},
    {"length": 4.0, "branch": 0}, {"length": 8.0, "branch": 1},
    {"length": 12.0, "branch": 0}, {"length": 30.0, "branch": 1},
    {"length": 50.0, "branch": 0}, {"length": 90.0, "branch": 1}
]}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s: Strategy = serde_json::from_str(JSON)?;
    for (d, b) in [(1.0, Branch::Zero), (2.0, Branch::One), (10.0, Branch::Zero), (40.0, Branch::One)] {
        let cost = search_cost(&s, &Target::new(d, b)?).expect("within reach");
        println!("target {d:>5} on branch {b}: cost {cost:>7.2}, ratio {:.3}", cost / d);
    }
    let sup = competitive_ratio_sup(&s);
    println!("closed-form ratio {:.6} (worst turn {})", sup.value, sup.argmax);
    println!("measured ratio    {:.6}", competitive_ratio_measured(&s, &TargetGrid::for_strategy(&s))?);
    Ok(())
}
