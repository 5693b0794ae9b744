//! Two-store dynamic cross-channel fulfilment.
//!
//! Each week a store looks at its partner. If the partner carried leftover
//! stock out of last week, the store fulfils BOPS orders from it and runs the
//! pickup-only regime (`B`: `μ̄ = 0`, `q = 0`); otherwise it stocks for
//! walk-in customers (`S`: `μ̄ = M`, `q = c_o`). Both stores start in `S`.
//!
//! Randomness comes from ChaCha20 used as a counter-based generator: the
//! replication seed selects the key and each `(week, store)` pair addresses
//! its own position in the keystream, so adding draws elsewhere never shifts
//! an existing one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{ModelError, Result};

pub const STORES: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Walk-in stocking: `μ̄ = M`, `q = c_o`.
    S,
    /// Pickup only, fulfilled from the partner's leftover: `μ̄ = 0`, `q = 0`.
    B,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::S => "S",
            Regime::B => "B",
        })
    }
}

/// When a store ends a week with stock it can hand over to its partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LeftoverRule {
    /// Only a stocking (`S`) store can have leftover, with probability `r`.
    #[default]
    LeftoverFromStore,
    /// Every store has leftover with probability `r`, whatever its regime.
    IndependentWeekly,
}

impl LeftoverRule {
    pub fn name(self) -> &'static str {
        match self {
            LeftoverRule::LeftoverFromStore => "leftover-from-store",
            LeftoverRule::IndependentWeekly => "independent-weekly",
        }
    }
}

impl FromStr for LeftoverRule {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leftover-from-store" => Ok(LeftoverRule::LeftoverFromStore),
            "independent-weekly" => Ok(LeftoverRule::IndependentWeekly),
            other => Err(ModelError::InvalidConfig(format!(
                "unknown rule `{other}` (expected leftover-from-store or independent-weekly)"
            ))),
        }
    }
}

impl fmt::Display for LeftoverRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    /// Probability that unsold stock can serve the partner next week.
    pub r: f64,
    pub weeks: usize,
    pub seed: u64,
    pub rule: LeftoverRule,
    pub replications: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            r: 0.0,
            weeks: 20,
            seed: 0,
            rule: LeftoverRule::default(),
            replications: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(ModelError::InvalidConfig(format!("r must lie in [0, 1], got {}", self.r)));
        }
        if self.weeks == 0 {
            return Err(ModelError::InvalidConfig("weeks must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(ModelError::InvalidConfig("replications must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeekRecord {
    pub week: usize,
    pub regime: [Regime; STORES],
    pub leftover: [bool; STORES],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTimeline {
    pub records: Vec<WeekRecord>,
    /// Share of weeks `1..W` each store spends in `B`.
    pub b_fraction: [f64; STORES],
}

impl SimTimeline {
    /// Header `week,store0,store1`, one `S`/`B` row per week, LF endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("week,store0,store1\n");
        for rec in &self.records {
            out.push_str(&format!("{},{},{}\n", rec.week, rec.regime[0], rec.regime[1]));
        }
        out
    }

    /// Mean of the two stores' B-fractions.
    pub fn pooled_b_fraction(&self) -> f64 {
        self.b_fraction.iter().sum::<f64>() / STORES as f64
    }
}

/// Uniform draw for one `(week, store)` cell of a replication's stream.
fn cell_draw(rng: &mut ChaCha20Rng, week: usize, store: usize) -> f64 {
    // each f64 consumes one u64, i.e. two 32-bit words
    let index = (week * STORES + store) as u128;
    rng.set_word_pos(index * 2);
    rng.gen::<f64>()
}

pub fn simulate(config: &SimConfig) -> Result<SimTimeline> {
    config.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(config.weeks);
    let mut regime = [Regime::S; STORES];

    for week in 0..config.weeks {
        let mut leftover = [false; STORES];
        for (store, flag) in leftover.iter_mut().enumerate() {
            let eligible = match config.rule {
                LeftoverRule::LeftoverFromStore => regime[store] == Regime::S,
                LeftoverRule::IndependentWeekly => true,
            };
            *flag = eligible && cell_draw(&mut rng, week, store) < config.r;
        }
        records.push(WeekRecord { week, regime, leftover });

        for store in 0..STORES {
            let partner = STORES - 1 - store;
            regime[store] = if leftover[partner] { Regime::B } else { Regime::S };
        }
    }

    let scored = config.weeks.saturating_sub(1);
    let mut b_fraction = [0.0; STORES];
    if scored > 0 {
        for (store, frac) in b_fraction.iter_mut().enumerate() {
            let count = records[1..]
                .iter()
                .filter(|rec| rec.regime[store] == Regime::B)
                .count();
            *frac = count as f64 / scored as f64;
        }
    }

    Ok(SimTimeline { records, b_fraction })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicationStats {
    pub r: f64,
    pub rule: LeftoverRule,
    pub replications: usize,
    /// Mean over replications of the store-pooled B-fraction.
    pub mean_b_fraction: f64,
    /// Standard error of that mean.
    pub std_error: f64,
}

impl ReplicationStats {
    /// Symmetric normal confidence interval, e.g. `z = 2.576` for 99%.
    pub fn confidence_interval(&self, z: f64) -> (f64, f64) {
        (self.mean_b_fraction - z * self.std_error, self.mean_b_fraction + z * self.std_error)
    }
}

/// Runs replications `0..R` with seeds `seed + i` and summarises the pooled
/// B-fraction.
pub fn replicate_stats(config: &SimConfig) -> Result<ReplicationStats> {
    config.validate()?;
    if config.replications < 2 {
        return Err(ModelError::InvalidConfig(
            "replicate_stats needs at least 2 replications".into(),
        ));
    }
    let samples = (0..config.replications)
        .map(|i| {
            let run = SimConfig {
                seed: config.seed.wrapping_add(i as u64),
                ..*config
            };
            simulate(&run).map(|t| t.pooled_b_fraction())
        })
        .collect::<Result<Vec<_>>>()?;

    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);

    Ok(ReplicationStats {
        r: config.r,
        rule: config.rule,
        replications: config.replications,
        mean_b_fraction: mean,
        std_error: (var / n).sqrt(),
    })
}

/// One [`ReplicationStats`] row per leftover probability, all other settings
/// shared.
pub fn r_table(config: &SimConfig, rs: &[f64]) -> Result<Vec<ReplicationStats>> {
    rs.iter()
        .map(|&r| replicate_stats(&SimConfig { r, ..*config }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Regime::{B, S};

    fn config(r: f64, weeks: usize, rule: LeftoverRule) -> SimConfig {
        SimConfig { r, weeks, seed: 7, rule, replications: 1 }
    }

    #[test]
    fn zero_leftover_never_switches() {
        for rule in [LeftoverRule::LeftoverFromStore, LeftoverRule::IndependentWeekly] {
            let timeline = simulate(&config(0.0, 20, rule)).unwrap();
            assert!(timeline.records.iter().all(|r| r.regime == [S, S]));
            assert_eq!(timeline.b_fraction, [0.0, 0.0]);
        }
    }

    #[test]
    fn certain_leftover_alternates() {
        let timeline = simulate(&config(1.0, 4, LeftoverRule::LeftoverFromStore)).unwrap();
        let regimes: Vec<_> = timeline.records.iter().map(|r| r.regime).collect();
        assert_eq!(regimes, vec![[S, S], [B, B], [S, S], [B, B]]);
        assert_eq!(timeline.b_fraction, [2.0 / 3.0, 2.0 / 3.0]);

        let timeline = simulate(&config(1.0, 4, LeftoverRule::IndependentWeekly)).unwrap();
        assert!(timeline.records[1..].iter().all(|r| r.regime == [B, B]));
    }

    #[test]
    fn pickup_store_has_no_leftover() {
        let timeline = simulate(&config(0.6, 200, LeftoverRule::LeftoverFromStore)).unwrap();
        for rec in &timeline.records {
            for store in 0..STORES {
                if rec.regime[store] == B {
                    assert!(!rec.leftover[store]);
                }
            }
        }
    }

    #[test]
    fn single_week_scores_nothing() {
        let timeline = simulate(&config(1.0, 1, LeftoverRule::LeftoverFromStore)).unwrap();
        assert_eq!(timeline.records.len(), 1);
        assert_eq!(timeline.b_fraction, [0.0, 0.0]);
    }

    #[test]
    fn csv_layout() {
        let timeline = simulate(&config(1.0, 3, LeftoverRule::LeftoverFromStore)).unwrap();
        assert_eq!(timeline.to_csv(), "week,store0,store1\n0,S,S\n1,B,B\n2,S,S\n");
    }

    #[test]
    fn config_validation() {
        assert!(simulate(&config(1.5, 4, LeftoverRule::default())).is_err());
        assert!(simulate(&config(-0.1, 4, LeftoverRule::default())).is_err());
        assert!(simulate(&config(0.5, 0, LeftoverRule::default())).is_err());
        let one = SimConfig { replications: 1, ..config(0.5, 4, LeftoverRule::default()) };
        assert!(replicate_stats(&one).is_err());
        assert!("sometimes".parse::<LeftoverRule>().is_err());
        assert_eq!(
            "independent-weekly".parse::<LeftoverRule>().unwrap(),
            LeftoverRule::IndependentWeekly
        );
    }

    #[test]
    fn zero_r_stats_are_exact() {
        let cfg = SimConfig { replications: 100, ..config(0.0, 20, LeftoverRule::default()) };
        let stats = replicate_stats(&cfg).unwrap();
        assert_eq!((stats.mean_b_fraction, stats.std_error), (0.0, 0.0));
    }

    #[test]
    fn draws_are_addressed_by_cell() {
        let mut a = ChaCha20Rng::seed_from_u64(3);
        let mut b = ChaCha20Rng::seed_from_u64(3);
        let late = cell_draw(&mut a, 5, 1);
        let _ = cell_draw(&mut b, 0, 0);
        let _ = cell_draw(&mut b, 9, 0);
        assert_eq!(cell_draw(&mut b, 5, 1), late);
    }
}
