//! Numerical verification suites over default parameter grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{check_prefix_sum_bound, check_segment_growth_lemma, InequalityReport};
use crate::error::Result;
use crate::model::{make_geometric, robust_base_interval, Branch, Strategy};
use crate::ratio::{competitive_ratio, competitive_ratio_measured, TargetGrid};

/// Robustness levels the inequality suites run at.
pub const DEFAULT_R_VALUES: [f64; 4] = [9.0, 10.0, 13.0, 25.0];
/// Bases sampled per robustness level, spanning the r-robust base interval.
pub const BASES_PER_R: usize = 20;
/// Indices checked per strategy: `0..=100`.
pub const INDEX_COUNT: usize = 101;

/// Worst outcome of one suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub holds: bool,
    /// Largest margin (or gap) seen, and where.
    pub worst: f64,
    pub location: String,
    pub checked: usize,
}

impl SuiteOutcome {
    pub fn summary(&self) -> String {
        format!(
            "{}: {}; worst margin {:e} at {} ({} checks)",
            self.name,
            if self.holds { "holds" } else { "VIOLATED" },
            self.worst,
            self.location,
            self.checked
        )
    }
}

/// `count` evenly spaced bases across the r-robust base interval.
pub fn robust_bases(r: f64, count: usize) -> Result<Vec<f64>> {
    let (lo, hi) = robust_base_interval(r)?;
    Ok((0..count)
        .map(|i| {
            if count == 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (count - 1) as f64
            }
        })
        .collect())
}

fn inequality_suite(
    name: &'static str,
    tolerance: f64,
    check: impl Fn(&Strategy, f64) -> Result<InequalityReport>,
) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome {
        name,
        holds: true,
        worst: f64::NEG_INFINITY,
        location: String::new(),
        checked: 0,
    };
    for r in DEFAULT_R_VALUES {
        for b in robust_bases(r, BASES_PER_R)? {
            let s = make_geometric(b, INDEX_COUNT, Branch::Zero, 1.0)?;
            let rep = check(&s, r)?;
            for (i, m) in rep.margins.iter().enumerate() {
                let Some(m) = *m else { continue };
                out.checked += 1;
                if m > tolerance {
                    out.holds = false;
                }
                if m > out.worst {
                    out.worst = m;
                    out.location = format!("r={r},b={b:.6},i={i}");
                }
            }
        }
    }
    Ok(out)
}

/// Segment-growth inequality on geometric strategies across the robust base interval.
pub fn lemma_suite(tolerance: f64) -> Result<SuiteOutcome> {
    inequality_suite("lemma", tolerance, check_segment_growth_lemma)
}

/// Prefix-sum inequality on the same strategies.
pub fn corollary_suite(tolerance: f64) -> Result<SuiteOutcome> {
    inequality_suite("corollary", tolerance, check_prefix_sum_bound)
}

/// A random alternating geometric strategy: base in `(1.5, 4]`, scale in
/// `[1, 10)`, random first branch.
pub fn random_alternating_strategy(rng: &mut impl Rng, horizon: usize) -> Result<Strategy> {
    let base = 4.0 - rng.gen::<f64>() * 2.5;
    let scale = rng.gen_range(1.0..10.0);
    let first = if rng.gen::<bool>() { Branch::Zero } else { Branch::One };
    make_geometric(base, horizon, first, scale)
}

/// Closed-form versus brute-force competitive ratio on seeded random strategies.
pub fn oracle_suite(seed: u64, count: usize, horizon: usize, tolerance: f64) -> Result<SuiteOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteOutcome {
        name: "oracle",
        holds: true,
        worst: 0.0,
        location: "none".into(),
        checked: 0,
    };
    for n in 0..count {
        let s = random_alternating_strategy(&mut rng, horizon)?;
        let gap = (competitive_ratio(&s) - competitive_ratio_measured(&s, &TargetGrid::for_strategy(&s))?).abs();
        out.checked += 1;
        if gap > tolerance {
            out.holds = false;
        }
        if gap > out.worst {
            out.worst = gap;
            out.location = format!("strategy #{n} (base {:.6})", s.length(1) / s.length(0));
        }
    }
    Ok(out)
}
