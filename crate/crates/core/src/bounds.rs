//! Closed-form consistency curves, the segment-growth and prefix-sum
//! inequality checkers for r-robust strategies, and frontier assembly.

use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hints::kbit_base;
use crate::model::{self, Strategy};
use crate::ratio::{Method, TradeoffPoint};

/// Absolute tolerance on inequality margins.
pub const MARGIN_TOLERANCE: f64 = 1e-9;

/// `(b_r + 1) / (b_r - 1)`: the best consistency of an r-robust strategy that
/// is told the exact target position. Upper and lower curve coincide.
pub fn position_consistency_bound(r: f64) -> Result<f64> {
    let b = model::base_for_robustness(r)?;
    Ok((b + 1.0) / (b - 1.0))
}

/// Consistency and robustness of the direction-biased strategy with
/// parameters `(b, delta)`.
pub fn direction_tradeoff(b: f64, delta: f64) -> Result<TradeoffPoint> {
    if !(b.is_finite() && b > 1.0) {
        return Err(Error::invalid("b", format!("must be > 1, got {b}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta", format!("must be in (0, 1], got {delta}")));
    }
    let (even, odd) = direction_terms(b);
    Ok(TradeoffPoint {
        consistency: 1.0 + 2.0 * (even + delta * odd),
        robustness: 1.0 + 2.0 * (even + odd / delta),
        method: Method::ClosedForm,
        converged: true,
    })
}

// (b^2 / (b^2 - 1), b^3 / (b^2 - 1))
fn direction_terms(b: f64) -> (f64, f64) {
    let d = b * b - 1.0;
    (b * b / d, b * b * b / d)
}

/// Minimizer of `f` on `[lo, hi]` by golden-section search.
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Coarse grid seed followed by golden-section refinement around the best
/// grid point. The objective is not known to be unimodal.
fn seeded_minimize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    const SEEDS: usize = 32;
    if hi - lo <= 1e-12 {
        let x = 0.5 * (lo + hi);
        return (x, f(x));
    }
    let xs: Vec<f64> = (0..SEEDS)
        .map(|i| lo + (hi - lo) * i as f64 / (SEEDS - 1) as f64)
        .collect();
    let best = (0..SEEDS)
        .min_by(|&a, &b| f(xs[a]).total_cmp(&f(xs[b])))
        .expect("nonempty grid");
    let a = xs[best.saturating_sub(1)];
    let b = xs[(best + 1).min(SEEDS - 1)];
    let refined = golden_section(&f, a, b, 1e-9);
    let seed = (xs[best], f(xs[best]));
    if refined.1 <= seed.1 {
        refined
    } else {
        seed
    }
}

/// Optimal parameters of the direction-biased strategy under a constraint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionOptimum {
    pub consistency: f64,
    pub robustness: f64,
    pub b: f64,
    pub delta: f64,
}

const B_MIN: f64 = 1.0 + 1e-6;
const B_MAX: f64 = 50.0;
const DELTA_MIN: f64 = 1e-9;

/// Smallest consistency of the direction-biased strategy with robustness at
/// most `r`.
///
/// For fixed `b`, consistency grows and robustness shrinks with `delta`, so
/// the best feasible `delta` makes the robustness constraint tight. The outer
/// search over `b` runs on the bases where that `delta` is at most 1.
pub fn direction_optimum(r: f64) -> Result<DirectionOptimum> {
    if !(r.is_finite() && r >= 9.0) {
        return Err(Error::Infeasible(format!(
            "no direction strategy has robustness {r} < 9"
        )));
    }
    let rho = (r - 1.0) / 2.0;
    let (b_lo, b_hi) = model::robust_base_interval(r)?;
    let lo = b_lo.max(B_MIN);
    let hi = b_hi.min(B_MAX);
    let delta_for = |b: f64| {
        let (even, odd) = direction_terms(b);
        (odd / (rho - even)).clamp(DELTA_MIN, 1.0)
    };
    let consistency = |b: f64| {
        let (even, odd) = direction_terms(b);
        1.0 + 2.0 * (even + delta_for(b) * odd)
    };
    let (b, _) = seeded_minimize(consistency, lo, hi);
    let delta = delta_for(b);
    let p = direction_tradeoff(b, delta)?;
    Ok(DirectionOptimum {
        consistency: p.consistency,
        robustness: p.robustness,
        b,
        delta,
    })
}

/// Smallest robustness of the direction-biased strategy with consistency at
/// most `c_max`, the dual of [`direction_optimum`].
pub fn direction_min_robustness(c_max: f64) -> Result<DirectionOptimum> {
    let zeta = (c_max - 1.0) / 2.0;
    // consistency >= 1 + 2 b^2/(b^2-1) > 3 for every parameter choice
    if !(zeta > 1.0) {
        return Err(Error::Infeasible(format!(
            "no direction strategy has consistency {c_max} <= 3"
        )));
    }
    let delta_for = |b: f64| {
        let (even, odd) = direction_terms(b);
        ((zeta - even) / odd).min(1.0)
    };
    let robustness = |b: f64| {
        let delta = delta_for(b);
        if delta < DELTA_MIN {
            return f64::INFINITY;
        }
        let (even, odd) = direction_terms(b);
        1.0 + 2.0 * (even + odd / delta)
    };
    let (b, r) = seeded_minimize(robustness, B_MIN, B_MAX);
    if !r.is_finite() {
        return Err(Error::Infeasible(format!(
            "no base in ({B_MIN}, {B_MAX}] reaches consistency {c_max}"
        )));
    }
    let delta = delta_for(b);
    let p = direction_tradeoff(b, delta)?;
    Ok(DirectionOptimum {
        consistency: p.consistency,
        robustness: p.robustness,
        b,
        delta,
    })
}

/// Which kind of hint a frontier describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HintClass {
    Position,
    Direction,
    Onebit,
    Kbit(u32),
}

impl HintClass {
    pub fn name(&self) -> &'static str {
        match self {
            HintClass::Position => "position",
            HintClass::Direction => "direction",
            HintClass::Onebit => "onebit",
            HintClass::Kbit(_) => "kbit",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match self {
            HintClass::Onebit => Some(1),
            HintClass::Kbit(k) => Some(*k),
            _ => None,
        }
    }
}

impl fmt::Display for HintClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HintClass::Kbit(k) => write!(f, "kbit(k={k})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Who a lower bound applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundScope {
    AllStrategies,
    /// Only strategies built from r-robust asymptotic members.
    AsymptoticStrategiesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub r: f64,
    pub c_upper: f64,
    pub c_lower: f64,
    pub lower_scope: BoundScope,
    pub b_star: Option<f64>,
    pub delta_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierCurve {
    pub hint_class: HintClass,
    pub points: Vec<FrontierPoint>,
    /// Description of the parameter grid used.
    pub metadata: String,
}

impl FrontierCurve {
    /// True if `c_upper` never increases along `r`.
    pub fn upper_is_non_increasing(&self, tol: f64) -> bool {
        self.points
            .windows(2)
            .all(|w| w[1].c_upper <= w[0].c_upper + tol)
    }
}

fn sorted_grid(r_values: &[f64]) -> Result<Vec<f64>> {
    if let Some(r) = r_values.iter().find(|r| !(r.is_finite() && **r >= 9.0)) {
        return Err(Error::Infeasible(format!("robustness {r} is below 9")));
    }
    let mut rs = r_values.to_vec();
    rs.sort_by(f64::total_cmp);
    Ok(rs)
}

/// Best consistency for each robustness budget under direction hints; the
/// lower curve equals the upper one.
pub fn direction_frontier(r_values: &[f64]) -> Result<FrontierCurve> {
    let points = sorted_grid(r_values)?
        .into_iter()
        .map(|r| {
            let opt = direction_optimum(r)?;
            Ok(FrontierPoint {
                r,
                c_upper: opt.consistency,
                c_lower: opt.consistency,
                lower_scope: BoundScope::AllStrategies,
                b_star: Some(opt.b),
                delta_star: Some(opt.delta),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrontierCurve {
        hint_class: HintClass::Direction,
        points,
        metadata: "32-point seed grid on the feasible base interval (capped at 50), golden-section to 1e-9; delta on the active robustness constraint".into(),
    })
}

/// `1 + 2 a^(1 + 1/2^k) / (a - 1)` with `a = kbit_base(r, k)`.
pub fn kbit_consistency_upper(r: f64, k: u32) -> Result<f64> {
    let a = kbit_base(r, k)?;
    let m = (1u64 << k) as f64;
    Ok(1.0 + 2.0 * a.powf(1.0 + 1.0 / m) / (a - 1.0))
}

pub fn onebit_consistency_upper(r: f64) -> Result<f64> {
    kbit_consistency_upper(r, 1)
}

/// A lower bound together with the class of strategies it holds for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub scope: BoundScope,
}

/// Lower bound on the consistency of r-robust one-bit strategies: 5 at
/// `r = 9` for every strategy, `1 + 2 b_r / (b_r - 1)` beyond that for
/// asymptotic strategies only.
pub fn onebit_lower(r: f64) -> Result<LowerBound> {
    let b = model::base_for_robustness(r)?;
    if r == 9.0 {
        return Ok(LowerBound {
            value: 5.0,
            scope: BoundScope::AllStrategies,
        });
    }
    Ok(LowerBound {
        value: 1.0 + 2.0 * b / (b - 1.0),
        scope: BoundScope::AsymptoticStrategiesOnly,
    })
}

/// No 9-robust strategy beats consistency 3, whatever the hint size.
pub fn kbit_floor() -> f64 {
    3.0
}

/// Result of checking an inequality at every index of a strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub strategy_id: String,
    /// `lhs - rhs` for `<=` inequalities, per index. `None` marks an index
    /// where the inequality holds trivially.
    pub margins: Vec<Option<f64>>,
    /// First index whose margin exceeds the tolerance.
    pub violated_at: Option<usize>,
    /// Smallest `i0` such that the tail bound holds for every `i > i0`
    /// (prefix-sum check only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_from: Option<usize>,
}

impl InequalityReport {
    fn from_margins(strategy_id: String, margins: Vec<Option<f64>>) -> Self {
        let violated_at = margins
            .iter()
            .position(|m| m.is_some_and(|m| m > MARGIN_TOLERANCE));
        InequalityReport {
            strategy_id,
            margins,
            violated_at,
            tail_from: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.violated_at.is_none()
    }

    /// Largest margin and its index.
    pub fn worst(&self) -> Option<(usize, f64)> {
        self.margins
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.map(|m| (i, m)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

fn strategy_id(s: &Strategy, r: f64) -> String {
    format!("{} segments, x0={}, r={}", s.len(), s.length(0), r)
}

/// Checks `x[i] <= (b_r + b_r / (i + 1)) * x[i-1]` (with `x[-1] = 1`) at every
/// index. Every r-robust strategy satisfies it.
pub fn check_segment_growth_lemma(s: &Strategy, r: f64) -> Result<InequalityReport> {
    let b = model::base_for_robustness(r)?;
    let margins = (0..s.len())
        .map(|i| Some(s.length(i) - (b + b / (i as f64 + 1.0)) * s.previous_length(i)))
        .collect();
    Ok(InequalityReport::from_margins(strategy_id(s, r), margins))
}

/// Checks `sum(x[0..i]) >= x[i] / (1 + 1/(i+1)) * (b_r/(b_r-1) - (i+2)/(i+1))`
/// at every index, and finds where `sum(x[0..i]) >= (1/(b_r-1) - 0.01) x[i]`
/// starts to hold for good. Index 0 (empty sum) holds trivially.
pub fn check_prefix_sum_bound(s: &Strategy, r: f64) -> Result<InequalityReport> {
    const TAIL_EPS: f64 = 1e-2;
    let b = model::base_for_robustness(r)?;
    let margins = (0..s.len())
        .map(|i| {
            if i == 0 {
                return None;
            }
            let n = i as f64;
            let rhs = s.length(i) / (1.0 + 1.0 / (n + 1.0)) * (b / (b - 1.0) - (n + 2.0) / (n + 1.0));
            Some(rhs - s.prefix_sum(i))
        })
        .collect();
    let mut report = InequalityReport::from_margins(strategy_id(s, r), margins);

    let tail_ok = |i: usize| s.prefix_sum(i) >= (1.0 / (b - 1.0) - TAIL_EPS) * s.length(i);
    report.tail_from = match (1..s.len()).rev().find(|&i| !tail_ok(i)) {
        None => Some(0),
        Some(last_bad) if last_bad + 1 < s.len() => Some(last_bad),
        Some(_) => None,
    };
    Ok(report)
}

/// All frontier curves on `r_grid`: position, direction, one-bit, and one
/// k-bit curve per entry of `ks`.
pub fn build_frontiers(r_grid: &[f64], ks: &[u32]) -> Result<Vec<FrontierCurve>> {
    let rs = sorted_grid(r_grid)?;
    let closed = |class: HintClass, f: &dyn Fn(f64) -> Result<FrontierPoint>| -> Result<FrontierCurve> {
        Ok(FrontierCurve {
            hint_class: class,
            points: rs.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?,
            metadata: "closed form".into(),
        })
    };
    let mut curves = vec![
        closed(HintClass::Position, &|r| {
            let c = position_consistency_bound(r)?;
            Ok(FrontierPoint {
                r,
                c_upper: c,
                c_lower: c,
                lower_scope: BoundScope::AllStrategies,
                b_star: Some(model::base_for_robustness(r)?),
                delta_star: None,
            })
        })?,
        direction_frontier(&rs)?,
        closed(HintClass::Onebit, &|r| {
            let lower = onebit_lower(r)?;
            Ok(FrontierPoint {
                r,
                c_upper: onebit_consistency_upper(r)?,
                c_lower: lower.value,
                lower_scope: lower.scope,
                b_star: Some(kbit_base(r, 1)?),
                delta_star: None,
            })
        })?,
    ];
    for &k in ks {
        curves.push(closed(HintClass::Kbit(k), &|r| {
            Ok(FrontierPoint {
                r,
                c_upper: kbit_consistency_upper(r, k)?,
                c_lower: kbit_floor(),
                lower_scope: BoundScope::AllStrategies,
                b_star: Some(kbit_base(r, k)?),
                delta_star: None,
            })
        })?);
    }
    Ok(curves)
}

/// Formats with 9 significant digits; infinity becomes `inf`.
pub fn format_sig(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v.is_nan() {
        return "nan".into();
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub const FRONTIER_CSV_HEADER: &str = "hint_class,k,r,c_upper,c_lower,b_star,delta_star";

/// Writes `hint_class,k,r,c_upper,c_lower,b_star,delta_star` rows; fields that
/// do not apply to a class are left empty.
pub fn write_frontier_csv<W: Write>(curves: &[FrontierCurve], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{FRONTIER_CSV_HEADER}")?;
    let opt = |v: Option<f64>| v.map(format_sig).unwrap_or_default();
    for curve in curves {
        let k = curve.hint_class.k().map(|k| k.to_string()).unwrap_or_default();
        for p in &curve.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                curve.hint_class.name(),
                k,
                format_sig(p.r),
                format_sig(p.c_upper),
                format_sig(p.c_lower),
                opt(p.b_star),
                opt(p.delta_star)
            )?;
        }
    }
    Ok(())
}
