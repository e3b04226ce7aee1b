//! Competitive ratio, consistency and robustness: closed forms over the
//! turn-point terms, and brute-force measurement over grids of targets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hints::HintedStrategy;
use crate::model::{search_cost, Branch, Hint, Strategy, Target};

/// A supremum is reported as converged when its last terms sit this close to it.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;
const CLOSED_FORM_TAIL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Measured,
}

/// A (consistency, robustness) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TradeoffPoint {
    pub consistency: f64,
    #[serde(with = "inf_number")]
    pub robustness: f64,
    pub method: Method,
    pub converged: bool,
}

/// Serializes non-finite positive values as the string `"inf"`.
pub(crate) mod inf_number {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum NumOrStr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(v) => Ok(v),
            NumOrStr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            NumOrStr::Str(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// A supremum over a finite sequence of terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supremum {
    pub value: f64,
    /// Index of the maximizing term.
    pub argmax: usize,
    /// True when the tail of the sequence is within [`CONVERGENCE_TOLERANCE`]
    /// of the maximum, i.e. the supremum is a limit rather than attained early.
    pub converged: bool,
}

impl Supremum {
    /// Closed-form sequences converge when every one of the last `tail` terms
    /// is close to the maximum; measured sequences mix turn-point targets with
    /// filler, so any close term in the tail is enough.
    fn of(terms: &[f64], tail: usize, every: bool) -> Option<Supremum> {
        let (argmax, value) = terms
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, v)| match best {
                Some((_, bv)) if bv >= v => best,
                _ => Some((i, v)),
            })?;
        let start = terms.len().saturating_sub(tail.max(1));
        let close = |v: &f64| value - v <= CONVERGENCE_TOLERANCE;
        let converged = if every {
            terms[start..].iter().all(close)
        } else {
            terms[start..].iter().any(close)
        };
        Some(Supremum {
            value,
            argmax,
            converged,
        })
    }

    fn of_measured(terms: &[f64]) -> Option<Supremum> {
        Supremum::of(terms, (terms.len() / 10).max(CLOSED_FORM_TAIL), false)
    }
}

/// Distances at which targets are placed, on both branches.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetGrid {
    distances: Vec<f64>,
    epsilon: f64,
}

impl TargetGrid {
    pub const DEFAULT_EPSILON: f64 = 1e-9;

    /// Sorts and deduplicates `distances`; all must be finite and `>= 1`.
    pub fn new(mut distances: Vec<f64>, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1e-3) {
            return Err(Error::invalid("epsilon", format!("must be in (0, 1e-3], got {epsilon}")));
        }
        if let Some(d) = distances.iter().find(|d| !(d.is_finite() && **d >= 1.0)) {
            return Err(Error::invalid("distances", format!("must be finite and >= 1, got {d}")));
        }
        distances.sort_by(f64::total_cmp);
        distances.dedup();
        Ok(TargetGrid { distances, epsilon })
    }

    /// `points` log-spaced distances on `[1, max]`.
    pub fn log_spaced(max: f64, points: usize) -> Result<Self> {
        Self::new(log_points(max, points)?, Self::DEFAULT_EPSILON)
    }

    /// Log-spaced distances on `[1, max]` with `per_decade` points per factor of ten.
    pub fn per_decade(max: f64, per_decade: usize) -> Result<Self> {
        if per_decade == 0 {
            return Err(Error::invalid("per_decade", "must be at least 1"));
        }
        let points = (max.log10() * per_decade as f64).ceil() as usize + 1;
        Self::log_spaced(max, points.max(2))
    }

    /// The default grid for one strategy: a 64-point log grid up to its last
    /// turn point. Turn points themselves are added by the evaluators.
    pub fn for_strategy(s: &Strategy) -> Self {
        let last = s.lengths().fold(1.0, f64::max);
        Self::log_spaced(last, 64).expect("turn points are finite")
    }

    /// Adds every turn point of `strategies` that lands in `[1, max]`, offset by epsilon.
    pub fn with_turn_points<'a>(
        self,
        strategies: impl IntoIterator<Item = &'a Strategy>,
        max: f64,
    ) -> Result<Self> {
        let eps = self.epsilon;
        let mut distances = self.distances;
        for s in strategies {
            distances.extend(
                s.lengths()
                    .map(|x| x * (1.0 + eps))
                    .filter(|&d| d >= 1.0 && d <= max),
            );
        }
        Self::new(distances, eps)
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn max_distance(&self) -> Option<f64> {
        self.distances.last().copied()
    }
}

fn log_points(max: f64, points: usize) -> Result<Vec<f64>> {
    if !(max.is_finite() && max >= 1.0) {
        return Err(Error::invalid("max_distance", format!("must be finite and >= 1, got {max}")));
    }
    if max == 1.0 || points < 2 {
        return Ok(vec![1.0]);
    }
    let top = max.ln();
    let mut v: Vec<f64> = (0..points)
        .map(|i| (top * i as f64 / (points - 1) as f64).exp())
        .collect();
    v[0] = 1.0;
    v[points - 1] = max;
    Ok(v)
}

/// `2 * sum(x[0..=i]) + x[i-1]`: the cost of a target just past the turn
/// point of iteration `i - 1`, with `x[-1] = 1`.
pub fn worst_case_cost_at_turn(s: &Strategy, i: usize) -> Result<f64> {
    if i >= s.len() {
        return Err(Error::IndexOutOfRange { index: i, len: s.len() });
    }
    Ok(2.0 * s.prefix_sum(i + 1) + s.previous_length(i))
}

fn turn_terms(s: &Strategy) -> Vec<f64> {
    (0..s.len())
        .map(|i| 1.0 + 2.0 * s.prefix_sum(i + 1) / s.previous_length(i))
        .collect()
}

/// Closed-form competitive ratio of the prefix:
/// `1 + 2 * max_i sum(x[0..=i]) / x[i-1]`.
pub fn competitive_ratio(s: &Strategy) -> f64 {
    competitive_ratio_sup(s).value
}

/// [`competitive_ratio`] together with the maximizing index and convergence flag.
pub fn competitive_ratio_sup(s: &Strategy) -> Supremum {
    Supremum::of(&turn_terms(s), CLOSED_FORM_TAIL, true).expect("strategies are nonempty")
}

fn measured_targets(s: &Strategy, grid: &TargetGrid) -> Vec<f64> {
    let eps = grid.epsilon();
    let mut d: Vec<f64> = grid
        .distances()
        .iter()
        .copied()
        .chain(s.lengths().map(|x| x * (1.0 + eps)).filter(|&x| x >= 1.0))
        .collect();
    d.sort_by(f64::total_cmp);
    d.dedup();
    d
}

/// Brute-force competitive ratio: the worst cost ratio over the grid targets
/// and the strategy's own turn points (offset by epsilon), on both branches.
/// Targets the prefix never reaches are skipped.
pub fn competitive_ratio_measured(s: &Strategy, grid: &TargetGrid) -> Result<f64> {
    Ok(competitive_ratio_measured_sup(s, grid)?.value)
}

pub fn competitive_ratio_measured_sup(s: &Strategy, grid: &TargetGrid) -> Result<Supremum> {
    let mut ratios = Vec::new();
    for d in measured_targets(s, grid) {
        let worst = Branch::BOTH
            .iter()
            .filter_map(|&b| {
                let t = Target::new(d, b).ok()?;
                search_cost(s, &t).map(|c| c / d)
            })
            .reduce(f64::max);
        if let Some(w) = worst {
            ratios.push(w);
        }
    }
    Supremum::of_measured(&ratios)
        .ok_or_else(|| Error::invalid("grid", "no grid target is reached by the strategy"))
}

/// Measured consistency and robustness of a hinted family.
///
/// Consistency is the worst, over grid targets on both branches, of the cost
/// ratio of the strategy selected by the correct hint `true_hint_of(t)`.
/// Robustness is the worst measured competitive ratio over `hint_space`.
pub fn evaluate_hinted(
    hs: &HintedStrategy,
    true_hint_of: impl Fn(&Target) -> Result<Hint>,
    hint_space: &[Hint],
    grid: &TargetGrid,
) -> Result<TradeoffPoint> {
    if hint_space.is_empty() {
        return Err(Error::invalid("hint_space", "must not be empty"));
    }
    let members = hint_space
        .iter()
        .map(|h| hs.select(h))
        .collect::<Result<Vec<_>>>()?;

    let mut trusted_ratios = Vec::with_capacity(grid.distances().len());
    for &d in grid.distances() {
        let mut worst: f64 = 0.0;
        for b in Branch::BOTH {
            let t = Target::new(d, b)?;
            let trusted = hs.select(&true_hint_of(&t)?)?;
            let cost = search_cost(&trusted, &t)
                .ok_or(Error::HorizonTooShort { distance: d, branch: b })?;
            worst = worst.max(cost / d);
        }
        trusted_ratios.push(worst);
    }
    let consistency = Supremum::of_measured(&trusted_ratios)
        .ok_or_else(|| Error::invalid("grid", "empty target grid"))?;

    let mut robustness: Option<Supremum> = None;
    for s in &members {
        let sup = competitive_ratio_measured_sup(s, grid)?;
        robustness = match robustness {
            Some(r) if r.value >= sup.value => Some(r),
            _ => Some(sup),
        };
    }
    let robustness = robustness.expect("hint space is nonempty");

    Ok(TradeoffPoint {
        consistency: consistency.value,
        robustness: robustness.value,
        method: Method::Measured,
        converged: consistency.converged && robustness.converged,
    })
}

/// Consistency and robustness of an alternating strategy whose first segment
/// is on the hinted branch:
/// `c = 1 + 2 sup_k sum(x[0..=2k+1]) / x[2k]`,
/// `r = 1 + 2 sup_k sum(x[0..=2k]) / x[2k-1]` with `x[-1] = 1`.
pub fn alternating_profile(s: &Strategy) -> Result<TradeoffPoint> {
    if !s.is_alternating() {
        return Err(Error::invalid("segments", "strategy does not alternate branches"));
    }
    if s.len() < 2 {
        return Err(Error::invalid("segments", "need at least 2 segments"));
    }
    let c_terms: Vec<f64> = (0..)
        .map(|k| 2 * k)
        .take_while(|&i| i + 1 < s.len())
        .map(|i| 1.0 + 2.0 * s.prefix_sum(i + 2) / s.length(i))
        .collect();
    let r_terms: Vec<f64> = (0..)
        .map(|k| 2 * k)
        .take_while(|&i| i < s.len())
        .map(|i| 1.0 + 2.0 * s.prefix_sum(i + 1) / s.previous_length(i))
        .collect();
    let c = Supremum::of(&c_terms, CLOSED_FORM_TAIL, true).expect("at least one term");
    let r = Supremum::of(&r_terms, CLOSED_FORM_TAIL, true).expect("at least one term");
    Ok(TradeoffPoint {
        consistency: c.value,
        robustness: r.value,
        method: Method::ClosedForm,
        converged: c.converged && r.converged,
    })
}
