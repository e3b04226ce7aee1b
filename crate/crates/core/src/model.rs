//! Strategies, targets and hints on the two-branch line, plus the cost-of-search
//! simulation every evaluator is built on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One of the two half-lines meeting at the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Branch {
    Zero,
    One,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Zero, Branch::One];

    pub fn complement(self) -> Branch {
        match self {
            Branch::Zero => Branch::One,
            Branch::One => Branch::Zero,
        }
    }

    /// The branch searched in iteration `i` by an alternating strategy that
    /// starts on `self`.
    pub fn at_parity(self, i: usize) -> Branch {
        if i % 2 == 0 {
            self
        } else {
            self.complement()
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Branch::Zero => 0,
            Branch::One => 1,
        }
    }
}

impl TryFrom<u8> for Branch {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        match value {
            0 => Ok(Branch::Zero),
            1 => Ok(Branch::One),
            other => Err(Error::invalid("branch", format!("expected 0 or 1, got {other}"))),
        }
    }
}

impl From<Branch> for u8 {
    fn from(b: Branch) -> u8 {
        b.index()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// An excursion from the root to distance `length` on `branch` and back.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub length: f64,
    pub branch: Branch,
}

/// A finite prefix of a search strategy.
///
/// Lengths are strictly positive and finite, and satisfy `x[i+2] >= x[i]`.
/// Lengths below 1 are allowed: scaled-down strategies need them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy", into = "RawStrategy")]
pub struct Strategy {
    segments: Vec<Segment>,
    // prefix[i] = sum of lengths[0..i]
    prefix: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawStrategy {
    segments: Vec<Segment>,
}

impl TryFrom<RawStrategy> for Strategy {
    type Error = Error;

    fn try_from(raw: RawStrategy) -> Result<Self> {
        Strategy::new(raw.segments)
    }
}

impl From<Strategy> for RawStrategy {
    fn from(s: Strategy) -> Self {
        RawStrategy {
            segments: s.segments,
        }
    }
}

impl Strategy {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyStrategy);
        }
        for (i, seg) in segments.iter().enumerate() {
            if !(seg.length.is_finite() && seg.length > 0.0) {
                return Err(Error::invalid(
                    "length",
                    format!("segment {i} has non-positive or non-finite length {}", seg.length),
                ));
            }
        }
        for i in 0..segments.len().saturating_sub(2) {
            if segments[i + 2].length < segments[i].length {
                return Err(Error::invalid(
                    "length",
                    format!(
                        "segment {} ({}) is shorter than segment {} ({})",
                        i + 2,
                        segments[i + 2].length,
                        i,
                        segments[i].length
                    ),
                ));
            }
        }
        let mut prefix = Vec::with_capacity(segments.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for seg in &segments {
            acc += seg.length;
            prefix.push(acc);
        }
        Ok(Strategy { segments, prefix })
    }

    /// Builds an alternating strategy from lengths, starting on `first`.
    pub fn alternating(lengths: &[f64], first: Branch) -> Result<Self> {
        Strategy::new(
            lengths
                .iter()
                .enumerate()
                .map(|(i, &length)| Segment {
                    length,
                    branch: first.at_parity(i),
                })
                .collect(),
        )
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().map(|s| s.length)
    }

    pub fn length(&self, i: usize) -> f64 {
        self.segments[i].length
    }

    /// Length of segment `i - 1`, with the convention that the length before
    /// the first segment is 1.
    pub fn previous_length(&self, i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            self.segments[i - 1].length
        }
    }

    /// Sum of the lengths of segments `0..end`.
    pub fn prefix_sum(&self, end: usize) -> f64 {
        self.prefix[end]
    }

    /// True when consecutive segments always switch branch.
    pub fn is_alternating(&self) -> bool {
        self.segments
            .windows(2)
            .all(|w| w[0].branch != w[1].branch)
    }

    /// Multiplies every length by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Strategy> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::invalid("scale", format!("must be positive, got {factor}")));
        }
        Strategy::new(
            self.segments
                .iter()
                .map(|s| Segment {
                    length: s.length * factor,
                    branch: s.branch,
                })
                .collect(),
        )
    }

    /// The farthest point reached on `branch`, if the branch is ever searched.
    pub fn reach(&self, branch: Branch) -> Option<f64> {
        self.segments
            .iter()
            .filter(|s| s.branch == branch)
            .map(|s| s.length)
            .reduce(f64::max)
    }

    /// The farthest distance that is covered on both branches.
    pub fn two_sided_reach(&self) -> f64 {
        Branch::BOTH
            .iter()
            .map(|&b| self.reach(b).unwrap_or(0.0))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A hiding position: distance from the root (at least 1) and branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTarget")]
pub struct Target {
    distance: f64,
    branch: Branch,
}

#[derive(Deserialize)]
struct RawTarget {
    distance: f64,
    branch: Branch,
}

impl TryFrom<RawTarget> for Target {
    type Error = Error;

    fn try_from(raw: RawTarget) -> Result<Self> {
        Target::new(raw.distance, raw.branch)
    }
}

impl Target {
    pub fn new(distance: f64, branch: Branch) -> Result<Self> {
        if !(distance.is_finite() && distance >= 1.0) {
            return Err(Error::invalid(
                "distance",
                format!("target distance must be finite and >= 1, got {distance}"),
            ));
        }
        Ok(Target { distance, branch })
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }
}

/// Side information handed to the searcher, possibly adversarial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Hint {
    Position { distance: f64, branch: Branch },
    Direction { branch: Branch },
    BitString { index: u64, k: u32 },
}

impl Hint {
    pub fn position(distance: f64, branch: Branch) -> Result<Hint> {
        if !(distance.is_finite() && distance >= 1.0) {
            return Err(Error::invalid(
                "distance",
                format!("position hint must be finite and >= 1, got {distance}"),
            ));
        }
        Ok(Hint::Position { distance, branch })
    }

    pub fn bit_string(index: u64, k: u32) -> Result<Hint> {
        if k == 0 || k >= 64 {
            return Err(Error::invalid("k", format!("hint size must be in 1..64, got {k}")));
        }
        if index >= 1u64 << k {
            return Err(Error::invalid(
                "index",
                format!("index {index} does not fit in {k} bits"),
            ));
        }
        Ok(Hint::BitString { index, k })
    }
}

fn check_base(base: f64) -> Result<()> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::invalid("base", format!("must be > 1, got {base}")));
    }
    Ok(())
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    Ok(())
}

/// `scale * base^i` for `i < count`, alternating branches from `first_branch`.
pub fn make_geometric(base: f64, count: usize, first_branch: Branch, scale: f64) -> Result<Strategy> {
    check_base(base)?;
    check_count(count)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::invalid("scale", format!("must be > 0, got {scale}")));
    }
    let lengths: Vec<f64> = (0..count).map(|i| scale * base.powi(i as i32)).collect();
    Strategy::alternating(&lengths, first_branch)
}

/// Geometric strategy with a periodic multiplier: `gammas[i mod p] * base^i`.
pub fn make_periodic_geometric(
    base: f64,
    gammas: &[f64],
    count: usize,
    first_branch: Branch,
) -> Result<Strategy> {
    check_base(base)?;
    check_count(count)?;
    if gammas.is_empty() {
        return Err(Error::invalid("gammas", "must not be empty"));
    }
    if let Some(g) = gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::invalid("gammas", format!("must all be > 0, got {g}")));
    }
    let lengths: Vec<f64> = (0..count)
        .map(|i| gammas[i % gammas.len()] * base.powi(i as i32))
        .collect();
    Strategy::alternating(&lengths, first_branch)
}

/// Total distance walked before the target is located, or `None` when no
/// segment of the finite prefix reaches it.
pub fn search_cost(s: &Strategy, t: &Target) -> Option<f64> {
    s.segments()
        .iter()
        .position(|seg| seg.branch == t.branch && seg.length >= t.distance)
        .map(|i| 2.0 * s.prefix_sum(i) + t.distance)
}

/// `(r - 1) / 2`.
pub fn rho(r: f64) -> Result<f64> {
    check_robustness(r)?;
    Ok((r - 1.0) / 2.0)
}

pub(crate) fn check_robustness(r: f64) -> Result<()> {
    if !(r.is_finite() && r >= 9.0) {
        return Err(Error::invalid("r", format!("robustness must be >= 9, got {r}")));
    }
    Ok(())
}

/// The largest geometric base whose strategy is still `r`-robust: the larger
/// root of `b^2 / (b - 1) = rho(r)`.
pub fn base_for_robustness(r: f64) -> Result<f64> {
    Ok(robust_base_interval(r)?.1)
}

/// Both roots of `b^2 / (b - 1) = rho(r)`; every geometric base in between
/// gives an `r`-robust strategy.
pub fn robust_base_interval(r: f64) -> Result<(f64, f64)> {
    let p = rho(r)?;
    let disc = (p * p - 4.0 * p).max(0.0).sqrt();
    Ok(((p - disc) / 2.0, (p + disc) / 2.0))
}

/// Finite-prefix estimate of `limsup x_n^(1/n)`.
pub fn growth_rate_estimate(s: &Strategy) -> Result<f64> {
    let n = s.len();
    if n < 2 {
        return Err(Error::invalid("segments", "need at least 2 segments"));
    }
    let start = (n / 2).max(1);
    Ok((start..n)
        .map(|i| s.length(i).powf(1.0 / i as f64))
        .fold(f64::NEG_INFINITY, f64::max))
}
