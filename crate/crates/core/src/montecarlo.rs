//! Monte Carlo outage estimation.
//!
//! Trials are cut into fixed blocks of [`TRIAL_BLOCK`]; block `b` draws its
//! channels from the stream `(seed, Channels, b)` and its policy randomness
//! from `(seed, Policy, b)`. Shards only decide which worker runs which
//! blocks, so counts are identical for any shard count, and two schemes run
//! with the same seed see the same channels.

use rayon::prelude::*;

use crate::analytic::analytic_outage;
use crate::error::{Error, Result};
use crate::model::{ChannelRealization, SystemConfig, compute_thresholds, db_to_linear, sample_channels_into};
use crate::rng::{RandomStream, StreamPurpose};
use crate::schedule::{ScheduleDecision, Scheduler, Scheme};

/// Trials per random-stream block.
pub const TRIAL_BLOCK: u64 = 4096;

/// How per-rank outage is attributed when `m > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankAccounting {
    /// Order-statistic ranks for greedy scheduling, scheduled-only ranks for
    /// every other scheme.
    #[default]
    Auto,
    /// Rank `i` is the `i`-th strongest received SNR among the scheduled
    /// destinations; ranks beyond the number scheduled are in outage.
    ScheduledOnly,
    /// Rank `i` is the destination with the `i`-th strongest relay link,
    /// served with the common power share even when fewer than `i` pairs
    /// were scheduled. Only meaningful for pooled equal-share schemes.
    OrderStatistic,
}

impl RankAccounting {
    fn resolve(self, scheme: Scheme) -> RankAccounting {
        match self {
            RankAccounting::Auto if scheme == Scheme::Greedy => RankAccounting::OrderStatistic,
            RankAccounting::Auto => RankAccounting::ScheduledOnly,
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub shards: usize,
    pub scheme: Scheme,
    pub rank_accounting: RankAccounting,
}

impl McConfig {
    pub fn new(scheme: Scheme, trials: u64, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            shards: rayon::current_num_threads().max(1),
            scheme,
            rank_accounting: RankAccounting::Auto,
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_rank_accounting(mut self, accounting: RankAccounting) -> Self {
        self.rank_accounting = accounting;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trial count must be positive"));
        }
        if self.shards == 0 || self.shards as u64 > self.trials {
            return Err(Error::config(format!(
                "shard count {} must lie in 1..={}",
                self.shards, self.trials
            )));
        }
        Ok(())
    }
}

/// Outage probability estimate with its binomial standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    pub stderr: f64,
    pub trials: u64,
    /// Trials in which at least one nominally scheduled destination failed.
    pub outage_count: u64,
    /// `(p_hat, stderr)` for ranks `1..=m`, present only when `m > 1`.
    pub per_rank: Option<Vec<(f64, f64)>>,
    /// Outage counts per rank, always of length `m`.
    pub rank_counts: Vec<u64>,
    /// Histogram of the decode-set size, indices `0..=M`.
    pub decode_set_counts: Vec<u64>,
}

/// `(p_hat, stderr)` of a binomial proportion.
pub fn proportion(count: u64, trials: u64) -> (f64, f64) {
    let p = count as f64 / trials as f64;
    (p, (p * (1.0 - p) / trials as f64).sqrt())
}

impl OutageEstimate {
    fn from_counts(counts: Counts, trials: u64, m: usize) -> Self {
        let (p_hat, stderr) = proportion(counts.outage, trials);
        let per_rank = (m > 1).then(|| counts.ranks.iter().map(|&c| proportion(c, trials)).collect());
        OutageEstimate {
            p_hat,
            stderr,
            trials,
            outage_count: counts.outage,
            per_rank,
            rank_counts: counts.ranks,
            decode_set_counts: counts.decode_sets,
        }
    }

    /// `(p_hat, stderr)` of rank `rank` (1-based); rank 1 is the overall
    /// estimate when `m = 1`.
    pub fn rank(&self, rank: usize) -> Option<(f64, f64)> {
        match &self.per_rank {
            Some(v) => v.get(rank.checked_sub(1)?).copied(),
            None if rank == 1 => Some((self.p_hat, self.stderr)),
            None => None,
        }
    }

    /// Empirical `P(|S| = n)` with its standard error.
    pub fn decode_set_frequency(&self, n: usize) -> (f64, f64) {
        proportion(self.decode_set_counts.get(n).copied().unwrap_or(0), self.trials)
    }
}

#[derive(Debug, Clone)]
struct Counts {
    outage: u64,
    ranks: Vec<u64>,
    decode_sets: Vec<u64>,
}

impl Counts {
    fn new(m: usize, big_m: usize) -> Self {
        Counts {
            outage: 0,
            ranks: vec![0; m],
            decode_sets: vec![0; big_m + 1],
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        self.outage += other.outage;
        for (a, b) in self.ranks.iter_mut().zip(other.ranks) {
            *a += b;
        }
        for (a, b) in self.decode_sets.iter_mut().zip(other.decode_sets) {
            *a += b;
        }
        self
    }
}

/// Per-worker state: scheduler plus reusable buffers.
struct Worker {
    cfg: SystemConfig,
    scheduler: Scheduler,
    accounting: RankAccounting,
    channels: ChannelRealization,
    decision: ScheduleDecision,
    snr: Vec<f64>,
    gains: Vec<f64>,
}

impl Worker {
    fn new(cfg: &SystemConfig, mc: &McConfig) -> Result<Self> {
        let thr = compute_thresholds(cfg);
        Ok(Worker {
            cfg: *cfg,
            scheduler: Scheduler::new(mc.scheme, cfg, &thr)?,
            accounting: mc.rank_accounting.resolve(mc.scheme),
            channels: ChannelRealization::zeroed(cfg.num_pairs),
            decision: ScheduleDecision::default(),
            snr: Vec::with_capacity(cfg.num_scheduled),
            gains: Vec::with_capacity(cfg.num_pairs),
        })
    }

    fn run_block(&mut self, seed: u64, block: u64, trials: u64, counts: &mut Counts) -> Result<()> {
        let mut channel_rng = RandomStream::derive(seed, StreamPurpose::Channels, block);
        let mut policy_rng = RandomStream::derive(seed, StreamPurpose::Policy, block);
        for _ in 0..trials {
            sample_channels_into(&self.cfg, &mut channel_rng, &mut self.channels);
            self.scheduler.schedule(&self.channels, &mut policy_rng, &mut self.decision)?;
            counts.decode_sets[self.decision.decode_set_size] += 1;
            self.tally(counts);
        }
        Ok(())
    }

    fn tally(&mut self, counts: &mut Counts) {
        let target = self.cfg.snr_target();
        let m = self.cfg.num_scheduled;
        let d = &self.decision;
        self.snr.clear();
        if self.accounting == RankAccounting::OrderStatistic && !d.is_empty() && d.len() < m {
            // every rank is served the common share at its order-statistic gain
            let share = d.dest_power[0];
            self.gains.clear();
            self.gains.extend_from_slice(&self.channels.relay_dst);
            self.gains.sort_unstable_by(|a, b| b.total_cmp(a));
            self.snr.extend(self.gains[..m].iter().map(|g| share * g));
        } else {
            self.snr
                .extend(d.destinations.iter().zip(&d.dest_power).map(|(&j, &p)| p * self.channels.relay_dst[j]));
            self.snr.sort_unstable_by(|a, b| b.total_cmp(a));
        }
        let mut any = false;
        for (rank, count) in counts.ranks.iter_mut().enumerate() {
            // strict `<` as in destination_outage; missing ranks fail
            let failed = self.snr.get(rank).is_none_or(|&s| s < target);
            if failed {
                *count += 1;
                any = true;
            }
        }
        if any {
            counts.outage += 1;
        }
    }
}

/// Runs `mc.trials` realizations of `mc.scheme` on `cfg`.
pub fn estimate_outage(cfg: &SystemConfig, mc: &McConfig) -> Result<OutageEstimate> {
    cfg.validate()?;
    mc.validate()?;
    let blocks = mc.trials.div_ceil(TRIAL_BLOCK);
    let shards = (mc.shards as u64).min(blocks);
    let per_shard = blocks.div_ceil(shards);
    let (m, big_m) = (cfg.num_scheduled, cfg.num_pairs);
    // fail fast on configuration errors before spawning work
    Worker::new(cfg, mc)?;

    let counts = (0..shards)
        .into_par_iter()
        .map(|shard| -> Result<Counts> {
            let mut worker = Worker::new(cfg, mc)?;
            let mut counts = Counts::new(m, big_m);
            let first = shard * per_shard;
            for block in first..(first + per_shard).min(blocks) {
                let start = block * TRIAL_BLOCK;
                let len = TRIAL_BLOCK.min(mc.trials - start);
                worker.run_block(mc.seed, block, len, &mut counts)?;
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Counts::new(m, big_m), Counts::merge);
    Ok(OutageEstimate::from_counts(counts, mc.trials, m))
}

/// One output row: a scheme at one SNR point and one user rank.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub scheme: String,
    pub num_pairs: usize,
    pub num_scheduled: usize,
    pub rate: f64,
    pub eta: f64,
    pub snr_db: f64,
    pub user_rank: usize,
    pub analytic_po: Option<f64>,
    pub mc_po: f64,
    pub mc_stderr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Evaluates every scheme at every SNR point of `snr_db_grid`, pairing the
/// Monte Carlo estimate with the closed form where one exists.
pub fn sweep(cfg_base: &SystemConfig, snr_db_grid: &[f64], schemes: &[Scheme], mc: &McConfig) -> Result<Vec<SweepRecord>> {
    if snr_db_grid.is_empty() {
        return Err(Error::config("SNR grid is empty"));
    }
    if snr_db_grid.windows(2).any(|w| !(w[1] > w[0])) || snr_db_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::config("SNR grid must be finite and strictly increasing"));
    }
    let mut records = Vec::new();
    for &scheme in schemes {
        for &snr_db in snr_db_grid {
            let cfg = SystemConfig {
                tx_power: db_to_linear(snr_db),
                ..*cfg_base
            };
            let est = estimate_outage(&cfg, &mc.with_scheme(scheme))?;
            for rank in 1..=cfg.num_scheduled {
                let (mc_po, mc_stderr) = est.rank(rank).expect("rank within 1..=m");
                let analytic_po = analytic_outage(scheme, &cfg, rank).transpose()?;
                records.push(SweepRecord {
                    scheme: scheme.name().to_string(),
                    num_pairs: cfg.num_pairs,
                    num_scheduled: cfg.num_scheduled,
                    rate: cfg.rate,
                    eta: cfg.eta,
                    snr_db,
                    user_rank: rank,
                    analytic_po,
                    mc_po,
                    mc_stderr,
                    trials: mc.trials,
                    seed: mc.seed,
                });
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Placement;

    fn cfg(big_m: usize, m: usize, rate: f64, snr_db: f64) -> SystemConfig {
        SystemConfig::new(big_m, m, rate, 1.0, 1.0).with_power_db(snr_db)
    }

    #[test]
    fn certain_outage_at_huge_rate() {
        let est = estimate_outage(&cfg(3, 1, 40.0, 10.0), &McConfig::new(Scheme::Approach1, 5000, 1)).unwrap();
        assert_eq!(est.p_hat, 1.0);
        assert_eq!(est.outage_count, 5000);
        assert_eq!(est.stderr, 0.0);
        assert!(est.per_rank.is_none());
    }

    #[test]
    fn counts_do_not_depend_on_shards() {
        let c = cfg(4, 2, 1.0, 15.0);
        for scheme in [Scheme::Greedy, Scheme::Random, Scheme::Exhaustive] {
            let base = estimate_outage(&c, &McConfig::new(scheme, 30_001, 9).with_shards(1)).unwrap();
            for shards in [4, 16] {
                let other = estimate_outage(&c, &McConfig::new(scheme, 30_001, 9).with_shards(shards)).unwrap();
                assert_eq!(base, other);
            }
        }
    }

    #[test]
    fn dominance_under_common_numbers() {
        let c = cfg(4, 1, 2.0, 20.0);
        let count = |s| estimate_outage(&c, &McConfig::new(s, 50_000, 3)).unwrap().outage_count;
        let (greedy, a1, maxmin) = (count(Scheme::Greedy), count(Scheme::Approach1), count(Scheme::MaxMin));
        assert!(greedy <= a1 && a1 <= maxmin, "{greedy} {a1} {maxmin}");
        assert_eq!(count(Scheme::Exhaustive), a1);
    }

    #[test]
    fn rank_counts_are_ordered() {
        let c = cfg(6, 3, 2.0, 15.0);
        for acc in [RankAccounting::ScheduledOnly, RankAccounting::OrderStatistic] {
            let est = estimate_outage(&c, &McConfig::new(Scheme::Greedy, 20_000, 5).with_rank_accounting(acc)).unwrap();
            let r = &est.rank_counts;
            assert!(r[0] <= r[1] && r[1] <= r[2]);
            // any-rank outage is the weakest rank under equal shares
            assert_eq!(est.outage_count, r[2]);
            assert_eq!(est.per_rank.as_ref().unwrap().len(), 3);
            assert_eq!(est.decode_set_counts.iter().sum::<u64>(), 20_000);
        }
    }

    #[test]
    fn order_statistic_accounting_is_never_worse() {
        let c = cfg(6, 3, 2.0, 10.0);
        let run = |acc| estimate_outage(&c, &McConfig::new(Scheme::Greedy, 20_000, 5).with_rank_accounting(acc)).unwrap();
        let scheduled = run(RankAccounting::ScheduledOnly);
        let order = run(RankAccounting::OrderStatistic);
        assert_eq!(scheduled.rank_counts[0], order.rank_counts[0]);
        for (a, b) in order.rank_counts.iter().zip(&scheduled.rank_counts) {
            assert!(a <= b);
        }
    }

    #[test]
    fn stderr_halves_with_four_times_the_trials() {
        let c = cfg(2, 1, 2.0, 10.0);
        let small = estimate_outage(&c, &McConfig::new(Scheme::MaxMin, 100_000, 11)).unwrap();
        let big = estimate_outage(&c, &McConfig::new(Scheme::MaxMin, 400_000, 12)).unwrap();
        let ratio = small.stderr / big.stderr;
        assert!((ratio - 2.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn rejects_bad_configs() {
        let c = cfg(3, 1, 1.0, 10.0);
        assert!(estimate_outage(&c, &McConfig::new(Scheme::MaxMin, 0, 1)).is_err());
        assert!(estimate_outage(&c, &McConfig::new(Scheme::MaxMin, 10, 1).with_shards(11)).is_err());
        assert!(estimate_outage(&cfg(3, 2, 1.0, 10.0), &McConfig::new(Scheme::MaxMin, 10, 1)).is_err());
    }

    #[test]
    fn budget_errors_propagate() {
        let c = cfg(30, 15, 0.1, 40.0);
        let res = estimate_outage(&c, &McConfig::new(Scheme::Exhaustive, 10, 1));
        assert!(matches!(res, Err(Error::EnumerationLimit { .. })));
    }

    #[test]
    fn sweep_shape() {
        let c = cfg(3, 1, 2.0, 0.0);
        let mc = McConfig::new(Scheme::MaxMin, 2000, 1);
        let rows = sweep(&c, &[20.0], &[Scheme::MaxMin], &mc).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].analytic_po.is_some());
        let rows = sweep(&c, &[10.0, 20.0], &[Scheme::Exhaustive, Scheme::Random], &mc).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].analytic_po.is_none() && rows[2].analytic_po.is_some());
        let c3 = cfg(5, 3, 2.0, 0.0);
        let rows = sweep(&c3, &[15.0], &[Scheme::Greedy], &mc).unwrap();
        assert_eq!(rows.iter().map(|r| r.user_rank).collect::<Vec<_>>(), vec![1, 2, 3]);
        let disk = c.with_placement(Placement::DiskPathLoss { radius: 2.0, exponent: 2.0 });
        let rows = sweep(&disk, &[20.0], &[Scheme::Greedy], &mc).unwrap();
        assert!(rows[0].analytic_po.is_none());
        assert!(sweep(&c, &[], &[Scheme::MaxMin], &mc).is_err());
        assert!(sweep(&c, &[20.0, 10.0], &[Scheme::MaxMin], &mc).is_err());
    }

    #[test]
    fn maxmin_agrees_with_closed_form() {
        let c = cfg(3, 1, 4.0, 30.0);
        let est = estimate_outage(&c, &McConfig::new(Scheme::MaxMin, 400_000, 21)).unwrap();
        let exact = analytic_outage(Scheme::MaxMin, &c, 1).unwrap().unwrap();
        assert!((est.p_hat - exact).abs() <= 4.0 * est.stderr, "{} vs {exact}", est.p_hat);
    }
}
