//! Hint-aware strategy families: position hints, direction hints and k-bit
//! hints, together with the rule that maps each hint to a member strategy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, search_cost, Branch, Hint, Strategy, Target};
use crate::ratio::{self, TargetGrid, TradeoffPoint};

/// Default number of segments in a strategy prefix.
pub const DEFAULT_HORIZON: usize = 64;

/// The three families of hint-aware strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Geometric search with base `b_r`, shrunk so a correct position hint
    /// lands exactly on a turn point.
    Position { r: f64 },
    /// Alternating search biased toward the hinted branch.
    Direction { b: f64, delta: f64 },
    /// `2^k` phase-shifted geometric strategies; the hint picks one.
    KBit { r: f64, k: u32 },
}

impl Family {
    fn validate(&self) -> Result<()> {
        match *self {
            Family::Position { r } => model::check_robustness(r),
            Family::Direction { b, delta } => check_direction(b, delta),
            Family::KBit { r, k } => {
                model::check_robustness(r)?;
                check_k(k)
            }
        }
    }
}

/// JSON descriptor of a family:
/// `{"family":"position"|"direction"|"kbit", "r":.., "b":.., "delta":.., "k":..}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

impl FamilyDescriptor {
    pub fn to_family(&self) -> Result<Family> {
        let need = |v: Option<f64>, field: &'static str| {
            v.ok_or_else(|| Error::invalid(field, format!("required by the {} family", self.family)))
        };
        let family = match self.family.as_str() {
            "position" => Family::Position { r: need(self.r, "r")? },
            "direction" => Family::Direction {
                b: need(self.b, "b")?,
                delta: need(self.delta, "delta")?,
            },
            "kbit" => Family::KBit {
                r: need(self.r, "r")?,
                k: self.k.ok_or_else(|| Error::invalid("k", "required by the kbit family"))?,
            },
            other => {
                return Err(Error::invalid(
                    "family",
                    format!("expected position, direction or kbit, got {other:?}"),
                ))
            }
        };
        family.validate()?;
        Ok(family)
    }
}

impl From<Family> for FamilyDescriptor {
    fn from(f: Family) -> Self {
        match f {
            Family::Position { r } => FamilyDescriptor {
                family: "position".into(),
                r: Some(r),
                ..Default::default()
            },
            Family::Direction { b, delta } => FamilyDescriptor {
                family: "direction".into(),
                b: Some(b),
                delta: Some(delta),
                ..Default::default()
            },
            Family::KBit { r, k } => FamilyDescriptor {
                family: "kbit".into(),
                r: Some(r),
                k: Some(k),
                ..Default::default()
            },
        }
    }
}

/// Grid choices for measuring a family.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    /// Largest hint distance in the position-hint grid.
    pub hint_max_distance: f64,
    pub hints_per_decade: usize,
    /// Largest target distance; defaults to what every member reaches.
    pub target_max_distance: Option<f64>,
    pub targets_per_decade: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            hint_max_distance: 2f64.powi(40),
            hints_per_decade: 128,
            target_max_distance: None,
            targets_per_decade: 16,
        }
    }
}

/// A family of strategies plus the rule that picks a member for each hint.
#[derive(Debug, Clone, PartialEq)]
pub struct HintedStrategy {
    family: Family,
    horizon: usize,
}

impl HintedStrategy {
    pub fn new(family: Family, horizon: usize) -> Result<Self> {
        family.validate()?;
        if horizon == 0 {
            return Err(Error::invalid("horizon", "must be at least 1"));
        }
        Ok(HintedStrategy { family, horizon })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// The member strategy for `hint`.
    pub fn select(&self, hint: &Hint) -> Result<Strategy> {
        match (self.family, *hint) {
            (Family::Position { r }, Hint::Position { distance, branch }) => {
                position_hint_strategy(r, distance, branch, self.horizon)
            }
            (Family::Direction { b, delta }, Hint::Direction { branch }) => {
                direction_hint_strategy(b, delta, branch, self.horizon)
            }
            (Family::KBit { r, k }, Hint::BitString { index, k: hk }) => {
                if hk != k {
                    return Err(Error::invalid(
                        "k",
                        format!("hint has {hk} bits but the family uses {k}"),
                    ));
                }
                kbit_hint_strategy(r, k, index, self.horizon)
            }
            (family, hint) => Err(Error::invalid(
                "hint",
                format!("{hint:?} does not apply to {family:?}"),
            )),
        }
    }

    /// The correct hint for a target: its position, its branch, or the index
    /// of the member that finds it fastest.
    pub fn true_hint(&self, t: &Target) -> Result<Hint> {
        match self.family {
            Family::Position { .. } => Hint::position(t.distance(), t.branch()),
            Family::Direction { .. } => Ok(Hint::Direction { branch: t.branch() }),
            Family::KBit { r, k } => best_hint_index(r, k, t, self.horizon),
        }
    }

    /// All hints the adversary may choose from. Position hints are continuous;
    /// they are sampled on a log grid of distances on `[1, max_distance]`, on
    /// both branches.
    pub fn hint_space(&self, max_distance: f64, per_decade: usize) -> Result<Vec<Hint>> {
        match self.family {
            Family::Position { .. } => {
                let grid = TargetGrid::per_decade(max_distance, per_decade)?;
                let mut hints = Vec::with_capacity(2 * grid.distances().len());
                for &d in grid.distances() {
                    for b in Branch::BOTH {
                        hints.push(Hint::position(d, b)?);
                    }
                }
                Ok(hints)
            }
            Family::Direction { .. } => Ok(Branch::BOTH
                .iter()
                .map(|&branch| Hint::Direction { branch })
                .collect()),
            Family::KBit { k, .. } => (0..1u64 << k).map(|j| Hint::bit_string(j, k)).collect(),
        }
    }

    /// Measures consistency (correct hints) and robustness (every hint in the
    /// sampled hint space) over a log grid of targets plus the members' turn
    /// points.
    pub fn evaluate(&self, opts: &EvalOptions) -> Result<TradeoffPoint> {
        let hints = self.hint_space(opts.hint_max_distance, opts.hints_per_decade)?;
        let grid = match self.family {
            Family::Position { .. } => {
                let max = opts.target_max_distance.unwrap_or(opts.hint_max_distance);
                TargetGrid::per_decade(max, opts.targets_per_decade)?
            }
            Family::Direction { .. } | Family::KBit { .. } => {
                let members = hints
                    .iter()
                    .map(|h| self.select(h))
                    .collect::<Result<Vec<_>>>()?;
                let reach = members
                    .iter()
                    .map(Strategy::two_sided_reach)
                    .fold(f64::INFINITY, f64::min);
                let max = opts.target_max_distance.unwrap_or(reach);
                if max < 1.0 {
                    return Err(Error::HorizonTooShort {
                        distance: 1.0,
                        branch: Branch::Zero,
                    });
                }
                TargetGrid::per_decade(max, opts.targets_per_decade)?
                    .with_turn_points(&members, max)?
            }
        };
        ratio::evaluate_hinted(self, |t| self.true_hint(t), &hints, &grid)
    }
}

fn check_direction(b: f64, delta: f64) -> Result<()> {
    if !(b.is_finite() && b > 1.0) {
        return Err(Error::invalid("b", format!("must be > 1, got {b}")));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta", format!("must be in (0, 1], got {delta}")));
    }
    Ok(())
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 || k > 16 {
        return Err(Error::invalid("k", format!("must be in 1..=16, got {k}")));
    }
    Ok(())
}

/// Index of the first turn point of `base^i` at or beyond `distance`.
fn covering_index(base: f64, distance: f64) -> usize {
    let mut j = (distance.ln() / base.ln()).ceil().max(0.0) as i32;
    while base.powi(j) < distance {
        j += 1;
    }
    while j > 0 && base.powi(j - 1) >= distance {
        j -= 1;
    }
    j as usize
}

/// The geometric strategy of base `b_r`, scaled so that segment `j` (the first
/// geometric turn point at or beyond the hinted distance) ends exactly at the
/// hinted distance, on the hinted branch.
pub fn position_hint_strategy(r: f64, distance: f64, branch: Branch, horizon: usize) -> Result<Strategy> {
    let base = model::base_for_robustness(r)?;
    let hint = Hint::position(distance, branch)?;
    let Hint::Position { distance, branch } = hint else {
        unreachable!()
    };
    let j = covering_index(base, distance);
    if horizon <= j {
        return Err(Error::invalid(
            "horizon",
            format!("{horizon} segments do not reach the hinted iteration {j}"),
        ));
    }
    // branch[i] = hinted branch iff i and j have the same parity
    let first = branch.at_parity(j);
    let lengths: Vec<f64> = (0..horizon)
        .map(|i| distance * base.powi(i as i32 - j as i32))
        .collect();
    Strategy::alternating(&lengths, first)
}

/// `b^i` on the hinted branch for even `i`, `delta * b^i` on the other branch
/// for odd `i`.
pub fn direction_hint_strategy(b: f64, delta: f64, branch: Branch, horizon: usize) -> Result<Strategy> {
    check_direction(b, delta)?;
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    let lengths: Vec<f64> = (0..horizon)
        .map(|i| {
            let x = b.powi(i as i32);
            if i % 2 == 0 {
                x
            } else {
                delta * x
            }
        })
        .collect();
    Strategy::alternating(&lengths, branch)
}

/// The base shared by the `2^k` members: `b_r` while `rho_r <= (1 + 2^k)^2 / 2^k`,
/// otherwise `1 + 2^k`.
pub fn kbit_base(r: f64, k: u32) -> Result<f64> {
    check_k(k)?;
    let rho = model::rho(r)?;
    let m = (1u64 << k) as f64;
    if rho <= (1.0 + m) * (1.0 + m) / m {
        model::base_for_robustness(r)
    } else {
        Ok(1.0 + m)
    }
}

/// Member `index` of the k-bit family: lengths `a^(i + index / 2^k)`, first
/// segment on branch 0.
pub fn kbit_hint_strategy(r: f64, k: u32, index: u64, horizon: usize) -> Result<Strategy> {
    let a = kbit_base(r, k)?;
    let Hint::BitString { index, k } = Hint::bit_string(index, k)? else {
        unreachable!()
    };
    if horizon == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    let phase = index as f64 / (1u64 << k) as f64;
    let lengths: Vec<f64> = (0..horizon).map(|i| a.powf(i as f64 + phase)).collect();
    Strategy::alternating(&lengths, Branch::Zero)
}

fn kbit_members(r: f64, k: u32, horizon: usize) -> Result<Vec<Strategy>> {
    check_k(k)?;
    (0..1u64 << k)
        .map(|j| kbit_hint_strategy(r, k, j, horizon))
        .collect()
}

/// Index of the cheapest member for `t`; ties go to the smallest index.
fn cheapest(members: &[Strategy], t: &Target) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (j, s) in members.iter().enumerate() {
        let cost = search_cost(s, t).ok_or(Error::HorizonTooShort {
            distance: t.distance(),
            branch: t.branch(),
        })?;
        if best.is_none_or(|(_, c)| cost < c) {
            best = Some((j, cost));
        }
    }
    best.map(|(j, _)| j)
        .ok_or_else(|| Error::invalid("members", "empty family"))
}

/// The k-bit hint a trusted source would give for `t`: the member that finds
/// it with the least travel.
pub fn best_hint_index(r: f64, k: u32, t: &Target, horizon: usize) -> Result<Hint> {
    let members = kbit_members(r, k, horizon)?;
    Hint::bit_string(cheapest(&members, t)? as u64, k)
}

/// A half-open interval `(lo, hi]` of distances labeled with the preferred member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledInterval {
    pub lo: f64,
    pub hi: f64,
    pub label: u64,
}

/// Per-branch labeling of the line by the member a trusted hint would pick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinePartition {
    pub branch0: Vec<LabeledInterval>,
    pub branch1: Vec<LabeledInterval>,
}

impl LinePartition {
    pub fn branch(&self, b: Branch) -> &[LabeledInterval] {
        match b {
            Branch::Zero => &self.branch0,
            Branch::One => &self.branch1,
        }
    }

    /// The label of the interval containing `distance` on `branch`.
    pub fn label_at(&self, branch: Branch, distance: f64) -> Option<u64> {
        let intervals = self.branch(branch);
        if let Some(first) = intervals.first() {
            if distance == first.lo {
                return Some(first.label);
            }
        }
        intervals
            .iter()
            .find(|iv| distance > iv.lo && distance <= iv.hi)
            .map(|iv| iv.label)
    }

    /// Flat `branch,lo,hi,label` rows for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("branch,lo,hi,label\n");
        for b in Branch::BOTH {
            for iv in self.branch(b) {
                out.push_str(&format!("{},{},{},{}\n", b, iv.lo, iv.hi, iv.label));
            }
        }
        out
    }
}

/// Labels `[1, max_distance]` on each branch with the cheapest member.
///
/// Between two consecutive turn points every member's cost is `C + d` for a
/// fixed `C`, so the midpoint decides the label of the whole interval.
pub fn preferred_partition_among(members: &[Strategy], max_distance: f64) -> Result<LinePartition> {
    if members.is_empty() {
        return Err(Error::invalid("members", "empty family"));
    }
    if !(max_distance.is_finite() && max_distance >= 1.0) {
        return Err(Error::invalid(
            "max_distance",
            format!("must be finite and >= 1, got {max_distance}"),
        ));
    }
    let label_branch = |branch: Branch| -> Result<Vec<LabeledInterval>> {
        for s in members {
            if s.reach(branch).is_none_or(|x| x < max_distance) {
                return Err(Error::HorizonTooShort {
                    distance: max_distance,
                    branch,
                });
            }
        }
        let mut cuts: Vec<f64> = members
            .iter()
            .flat_map(|s| s.segments().iter())
            .filter(|seg| seg.branch == branch && seg.length > 1.0 && seg.length < max_distance)
            .map(|seg| seg.length)
            .collect();
        cuts.push(1.0);
        cuts.push(max_distance);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        if cuts.len() == 1 {
            let label = cheapest(members, &Target::new(1.0, branch)?)? as u64;
            return Ok(vec![LabeledInterval { lo: 1.0, hi: 1.0, label }]);
        }
        let mut out: Vec<LabeledInterval> = Vec::new();
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let label = cheapest(members, &Target::new(mid, branch)?)? as u64;
            match out.last_mut() {
                Some(prev) if prev.label == label => prev.hi = w[1],
                _ => out.push(LabeledInterval { lo: w[0], hi: w[1], label }),
            }
        }
        Ok(out)
    };
    Ok(LinePartition {
        branch0: label_branch(Branch::Zero)?,
        branch1: label_branch(Branch::One)?,
    })
}

/// The partition of the line induced by the k-bit family.
pub fn preferred_partition(r: f64, k: u32, max_distance: f64, horizon: usize) -> Result<LinePartition> {
    preferred_partition_among(&kbit_members(r, k, horizon)?, max_distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{alternating_profile, competitive_ratio};
    use approx::assert_relative_eq;

    fn target(d: f64, b: Branch) -> Target {
        Target::new(d, b).unwrap()
    }

    #[test]
    fn position_strategy_examples() {
        let s = position_hint_strategy(9.0, 5.0, Branch::Zero, 8).unwrap();
        for (got, want) in s.lengths().zip([0.625, 1.25, 2.5, 5.0]) {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
        let branches: Vec<u8> = s.segments().iter().take(4).map(|x| x.branch.index()).collect();
        assert_eq!(branches, vec![1, 0, 1, 0]);
        let cost = search_cost(&s, &target(5.0, Branch::Zero)).unwrap();
        assert_relative_eq!(cost, 13.75, max_relative = 1e-12);
        assert_relative_eq!(cost / 5.0, 1.0 + 14.0 / 8.0, max_relative = 1e-12);

        let s = position_hint_strategy(9.0, 1.0, Branch::Zero, 8).unwrap();
        assert_eq!(s.segments()[0].length, 1.0);
        assert_eq!(s.segments()[0].branch, Branch::Zero);
        assert_eq!(search_cost(&s, &target(1.0, Branch::Zero)), Some(1.0));

        let d = 2f64.powi(20);
        let s = position_hint_strategy(9.0, d, Branch::One, 64).unwrap();
        let ratio = search_cost(&s, &target(d, Branch::One)).unwrap() / d;
        assert_relative_eq!(ratio, 3.0 - 2f64.powi(-19), max_relative = 1e-12);
    }

    #[test]
    fn position_strategy_errors() {
        assert!(position_hint_strategy(9.0, 0.5, Branch::Zero, 8).is_err());
        // d = 5 needs iteration 3
        assert!(position_hint_strategy(9.0, 5.0, Branch::Zero, 3).is_err());
        assert!(position_hint_strategy(9.0, 5.0, Branch::Zero, 4).is_ok());
        assert!(position_hint_strategy(8.0, 5.0, Branch::Zero, 8).is_err());
    }

    #[test]
    fn position_members_stay_robust() {
        for &d in &[1.0, 1.3, 5.0, 77.7, 1e6] {
            for b in Branch::BOTH {
                let s = position_hint_strategy(9.0, d, b, 64).unwrap();
                assert!(competitive_ratio(&s) <= 9.0 + 1e-6);
            }
        }
    }

    #[test]
    fn direction_strategy_examples() {
        let s = direction_hint_strategy(2.0, 1.0, Branch::One, 64).unwrap();
        assert_eq!(s.segments()[0].branch, Branch::One);
        let p = alternating_profile(&s).unwrap();
        assert!((p.consistency - 9.0).abs() < 1e-6 && (p.robustness - 9.0).abs() < 1e-6);

        let s = direction_hint_strategy(2.0, 0.5, Branch::Zero, 64).unwrap();
        assert_eq!(s.lengths().take(6).collect::<Vec<_>>(), vec![1.0, 1.0, 4.0, 4.0, 16.0, 16.0]);
        let p = alternating_profile(&s).unwrap();
        assert!((p.consistency - (1.0 + 2.0 * (4.0 / 3.0 + 0.5 * 8.0 / 3.0))).abs() < 1e-6);

        let s = direction_hint_strategy(2.0, 1e-3, Branch::Zero, 64).unwrap();
        let p = alternating_profile(&s).unwrap();
        let c = 1.0 + 2.0 * (4.0 / 3.0 + 1e-3 * 8.0 / 3.0);
        let r = 1.0 + 2.0 * (4.0 / 3.0 + 1e3 * 8.0 / 3.0);
        assert!((p.consistency - c).abs() < 1e-6);
        assert!((p.robustness - r).abs() < 1e-6 * r);

        assert!(direction_hint_strategy(1.0, 0.5, Branch::Zero, 8).is_err());
        assert!(direction_hint_strategy(2.0, 0.0, Branch::Zero, 8).is_err());
        assert!(direction_hint_strategy(2.0, 1.5, Branch::Zero, 8).is_err());
    }

    #[test]
    fn kbit_base_cases() {
        assert_eq!(kbit_base(9.0, 1).unwrap(), 2.0);
        assert_eq!(kbit_base(16.0, 1).unwrap(), 3.0);
        assert_eq!(kbit_base(9.0, 2).unwrap(), 2.0);
        // at the switch point both branches agree
        assert_relative_eq!(kbit_base(10.0, 1).unwrap(), 3.0, max_relative = 1e-12);
        assert_relative_eq!(kbit_base(10.0 + 1e-9, 1).unwrap(), 3.0, max_relative = 1e-6);
        assert!(kbit_base(9.0, 0).is_err());
    }

    #[test]
    fn kbit_members() {
        let x0 = kbit_hint_strategy(9.0, 1, 0, 4).unwrap();
        assert_eq!(x0.lengths().collect::<Vec<_>>(), vec![1.0, 2.0, 4.0, 8.0]);
        let x1 = kbit_hint_strategy(9.0, 1, 1, 3).unwrap();
        let s2 = 2f64.sqrt();
        for (got, want) in x1.lengths().zip([s2, 2.0 * s2, 4.0 * s2]) {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
        let x3 = kbit_hint_strategy(9.0, 2, 3, 2).unwrap();
        assert_relative_eq!(x3.length(0), 1.681_792_830_507_429, max_relative = 1e-12);
        assert_relative_eq!(x3.length(1), 3.363_585_661_014_858, max_relative = 1e-12);
        assert_eq!(x3.segments()[0].branch, Branch::Zero);
        assert!(kbit_hint_strategy(9.0, 1, 2, 4).is_err());

        let g = crate::model::make_geometric(kbit_base(13.0, 2).unwrap(), 10, Branch::Zero, 1.0).unwrap();
        let x = kbit_hint_strategy(13.0, 2, 0, 10).unwrap();
        for (got, want) in x.lengths().zip(g.lengths()) {
            assert_relative_eq!(got, want, max_relative = 1e-12);
        }
        assert_eq!(x.segments()[1].branch, g.segments()[1].branch);
    }

    #[test]
    fn best_hint_examples() {
        let idx = |d: f64| match best_hint_index(9.0, 1, &target(d, Branch::Zero), 64).unwrap() {
            Hint::BitString { index, .. } => index,
            _ => unreachable!(),
        };
        assert_eq!(idx(1.0), 0);
        assert_eq!(idx(1.2), 1);
        assert_eq!(idx(3.0), 0);

        let x1 = kbit_hint_strategy(9.0, 1, 1, 64).unwrap();
        let c1 = search_cost(&x1, &target(3.0, Branch::Zero)).unwrap();
        assert_relative_eq!(c1, 6.0 * 2f64.sqrt() + 3.0, max_relative = 1e-12);

        assert!(matches!(
            best_hint_index(9.0, 1, &target(100.0, Branch::Zero), 3),
            Err(Error::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn one_bit_partition() {
        let p = preferred_partition(9.0, 1, 16.0, 64).unwrap();
        let s2 = 2f64.sqrt();
        let b0: Vec<(f64, f64, u64)> = p.branch0.iter().map(|iv| (iv.lo, iv.hi, iv.label)).collect();
        assert_eq!(b0.len(), 4);
        assert_eq!(b0[0].0, 1.0);
        assert_relative_eq!(b0[0].1, s2, max_relative = 1e-12);
        assert_eq!(b0[0].2, 1);
        assert_eq!((b0[1].1, b0[1].2), (4.0, 0));
        assert_relative_eq!(b0[2].1, 4.0 * s2, max_relative = 1e-12);
        assert_eq!(b0[2].2, 1);
        assert_eq!((b0[3].1, b0[3].2), (16.0, 0));

        let b1: Vec<(f64, f64, u64)> = p.branch1.iter().map(|iv| (iv.lo, iv.hi, iv.label)).collect();
        assert_eq!((b1[0].1, b1[0].2), (2.0, 0));
        assert_relative_eq!(b1[1].1, 2.0 * s2, max_relative = 1e-12);
        assert_eq!(b1[1].2, 1);
        assert_eq!((b1[2].1, b1[2].2), (8.0, 0));
    }

    #[test]
    fn degenerate_partitions() {
        let p = preferred_partition(9.0, 1, 1.0, 64).unwrap();
        assert_eq!(p.branch0.len(), 1);
        assert_eq!(p.branch1.len(), 1);

        let single = vec![crate::model::make_geometric(2.0, 64, Branch::Zero, 1.0).unwrap()];
        let p = preferred_partition_among(&single, 1000.0).unwrap();
        assert_eq!(p.branch0, vec![LabeledInterval { lo: 1.0, hi: 1000.0, label: 0 }]);
        assert_eq!(p.branch1, vec![LabeledInterval { lo: 1.0, hi: 1000.0, label: 0 }]);

        assert!(matches!(
            preferred_partition(9.0, 1, 1e6, 8),
            Err(Error::HorizonTooShort { .. })
        ));
    }

    #[test]
    fn descriptor_round_trip() {
        let d: FamilyDescriptor =
            serde_json::from_str(r#"{"family":"direction","b":2,"delta":0.5}"#).unwrap();
        assert_eq!(d.to_family().unwrap(), Family::Direction { b: 2.0, delta: 0.5 });
        let k: FamilyDescriptor = serde_json::from_str(r#"{"family":"kbit","r":9,"k":2}"#).unwrap();
        assert_eq!(FamilyDescriptor::from(k.to_family().unwrap()), k);

        let missing: FamilyDescriptor = serde_json::from_str(r#"{"family":"position"}"#).unwrap();
        assert!(matches!(
            missing.to_family(),
            Err(Error::InvalidParameter { field: "r", .. })
        ));
        let unknown: FamilyDescriptor = serde_json::from_str(r#"{"family":"spiral","r":9}"#).unwrap();
        assert!(unknown.to_family().is_err());
    }

    #[test]
    fn select_rejects_mismatched_hints() {
        let hs = HintedStrategy::new(Family::Direction { b: 2.0, delta: 1.0 }, 16).unwrap();
        assert!(hs.select(&Hint::bit_string(0, 1).unwrap()).is_err());
        let hs = HintedStrategy::new(Family::KBit { r: 9.0, k: 2 }, 16).unwrap();
        assert!(hs.select(&Hint::bit_string(0, 1).unwrap()).is_err());
        assert!(hs.select(&Hint::bit_string(3, 2).unwrap()).is_ok());
    }

    #[test]
    fn singleton_hint_space_matches_measured_ratio() {
        let hs = HintedStrategy::new(Family::Direction { b: 2.0, delta: 0.5 }, 40).unwrap();
        let h = Hint::Direction { branch: Branch::Zero };
        let member = hs.select(&h).unwrap();
        let reach = member.two_sided_reach();
        let grid = TargetGrid::per_decade(reach, 16).unwrap().with_turn_points([&member], reach).unwrap();
        let p = ratio::evaluate_hinted(&hs, |_| Ok(h), &[h], &grid).unwrap();
        let measured = ratio::competitive_ratio_measured(&member, &grid).unwrap();
        assert_eq!(p.consistency, measured);
        assert_eq!(p.robustness, measured);
    }

    #[test]
    fn hint_space_sizes() {
        let hs = HintedStrategy::new(Family::KBit { r: 9.0, k: 3 }, 16).unwrap();
        assert_eq!(hs.hint_space(1.0, 1).unwrap().len(), 8);
        let hs = HintedStrategy::new(Family::Position { r: 9.0 }, 64).unwrap();
        // 1..1e3 at 4 per decade: 13 distances, two branches each
        assert_eq!(hs.hint_space(1e3, 4).unwrap().len(), 26);
    }
}
