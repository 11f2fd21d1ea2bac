//! Per-realization user scheduling policies.
//!
//! Every policy maps a [`ChannelRealization`] to a [`ScheduleDecision`]. Ties
//! in any argmax break toward the lowest pair index.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{harvested_power, ChannelRealization, SystemConfig, Thresholds};
use crate::rng::RandomStream;

/// Default cap on the number of subsets the exhaustive search may visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Strongest worst hop, single pair, harvested power.
    MaxMin,
    /// Best harvested-power SNR within the decode set, single pair.
    Approach1,
    /// Exhaustive search over subsets of the decode set with pooled power.
    Exhaustive,
    /// Strongest sources in the decode set, strongest destinations overall.
    Greedy,
    /// Pairs drawn uniformly at random, ignoring channel state.
    Random,
    /// Max-min selection in a conventional network where the relay transmits
    /// with the source power `P`.
    ConventionalMaxMin,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::MaxMin,
        Scheme::Approach1,
        Scheme::Exhaustive,
        Scheme::Greedy,
        Scheme::Random,
        Scheme::ConventionalMaxMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::MaxMin => "maxmin",
            Scheme::Approach1 => "approach1",
            Scheme::Exhaustive => "exhaustive",
            Scheme::Greedy => "greedy",
            Scheme::Random => "random",
            Scheme::ConventionalMaxMin => "conventional",
        }
    }

    /// Policies that are only defined for a single scheduled pair.
    pub fn single_pair_only(self) -> bool {
        matches!(
            self,
            Scheme::MaxMin | Scheme::Approach1 | Scheme::ConventionalMaxMin
        )
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Scheme::ALL
            .iter()
            .copied()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| {
                format!("unknown scheme `{s}` (expected maxmin, approach1, exhaustive, greedy, random or conventional)")
            })
    }
}

/// Scheduled pairs for one realization. `destinations[j]` is served with
/// relay power `dest_power[j]`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScheduleDecision {
    pub sources: Vec<usize>,
    pub destinations: Vec<usize>,
    pub dest_power: Vec<f64>,
    /// Size of the decode set `|S|` in this realization.
    pub decode_set_size: usize,
}

impl ScheduleDecision {
    pub fn is_empty(&self) -> bool {
        self.destinations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.destinations.len()
    }

    fn clear(&mut self) {
        self.sources.clear();
        self.destinations.clear();
        self.dest_power.clear();
        self.decode_set_size = 0;
    }
}

/// Indices whose source message the relay can decode, `|h_i|^2 >= eps`.
pub fn decode_set(ch: &ChannelRealization, thr: &Thresholds) -> Vec<usize> {
    let mut out = Vec::with_capacity(ch.num_pairs());
    fill_decode_set(ch, thr, &mut out);
    out
}

fn fill_decode_set(ch: &ChannelRealization, thr: &Thresholds, out: &mut Vec<usize>) {
    out.clear();
    out.extend(
        ch.src_relay
            .iter()
            .enumerate()
            .filter(|(_, &h)| h >= thr.eps)
            .map(|(i, _)| i),
    );
}

fn require_single_pair(cfg: &SystemConfig, scheme: Scheme) -> Result<()> {
    if cfg.num_scheduled != 1 {
        return Err(Error::config(format!(
            "{scheme} scheduling is defined for m = 1 only, got m = {}",
            cfg.num_scheduled
        )));
    }
    Ok(())
}

/// `C(n, k)` without overflow for the sizes the budget check needs.
pub(crate) fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Reusable scheduler for one configuration. Holds scratch buffers so the Monte
/// Carlo loop does not allocate per realization.
#[derive(Debug, Clone)]
pub struct Scheduler {
    scheme: Scheme,
    cfg: SystemConfig,
    thr: Thresholds,
    budget: u64,
    decodable: Vec<usize>,
    picked: Vec<usize>,
    combo: Vec<usize>,
    best: Vec<usize>,
}

impl Scheduler {
    pub fn new(scheme: Scheme, cfg: &SystemConfig, thr: &Thresholds) -> Result<Self> {
        cfg.validate()?;
        if scheme.single_pair_only() {
            require_single_pair(cfg, scheme)?;
        }
        Ok(Scheduler {
            scheme,
            cfg: *cfg,
            thr: *thr,
            budget: DEFAULT_ENUMERATION_BUDGET,
            decodable: Vec::with_capacity(cfg.num_pairs),
            picked: Vec::with_capacity(cfg.num_pairs),
            combo: Vec::with_capacity(cfg.num_scheduled),
            best: Vec::with_capacity(cfg.num_scheduled),
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Schedules one realization into `out`. `rng` is only consumed by the
    /// random baseline.
    pub fn schedule(
        &mut self,
        ch: &ChannelRealization,
        rng: &mut RandomStream,
        out: &mut ScheduleDecision,
    ) -> Result<()> {
        out.clear();
        fill_decode_set(ch, &self.thr, &mut self.decodable);
        out.decode_set_size = self.decodable.len();
        match self.scheme {
            Scheme::MaxMin => self.max_min(ch, out, false),
            Scheme::ConventionalMaxMin => self.max_min(ch, out, true),
            Scheme::Approach1 => self.approach1(ch, out),
            Scheme::Exhaustive => return self.exhaustive(ch, out),
            Scheme::Greedy => self.greedy(ch, out),
            Scheme::Random => self.random(ch, rng, out),
        }
        Ok(())
    }

    fn harvest(&self, i: usize, ch: &ChannelRealization) -> f64 {
        harvested_power(ch.src_relay[i], &self.cfg, &self.thr)
    }

    fn max_min(&self, ch: &ChannelRealization, out: &mut ScheduleDecision, conventional: bool) {
        let mut best = 0;
        let mut best_z = f64::NEG_INFINITY;
        for (i, (&h, &g)) in ch.src_relay.iter().zip(&ch.relay_dst).enumerate() {
            let z = h.min(g);
            if z > best_z {
                best = i;
                best_z = z;
            }
        }
        let power = if conventional {
            // the relay forwards with the source power once it has decoded
            if ch.src_relay[best] >= self.thr.eps {
                self.cfg.tx_power
            } else {
                0.0
            }
        } else {
            self.harvest(best, ch)
        };
        out.sources.push(best);
        out.destinations.push(best);
        out.dest_power.push(power);
    }

    fn approach1(&self, ch: &ChannelRealization, out: &mut ScheduleDecision) {
        let mut best: Option<(usize, f64, f64)> = None;
        for &i in &self.decodable {
            let power = self.harvest(i, ch);
            let snr = power * ch.relay_dst[i];
            if best.is_none_or(|(_, _, s)| snr > s) {
                best = Some((i, power, snr));
            }
        }
        if let Some((i, power, _)) = best {
            out.sources.push(i);
            out.destinations.push(i);
            out.dest_power.push(power);
        }
    }

    fn exhaustive(&mut self, ch: &ChannelRealization, out: &mut ScheduleDecision) -> Result<()> {
        let n = self.decodable.len();
        let k = self.cfg.num_scheduled.min(n);
        if k == 0 {
            return Ok(());
        }
        let needed = binomial_u128(n, k);
        if needed > self.budget as u128 {
            return Err(Error::EnumerationLimit {
                needed,
                budget: self.budget,
            });
        }
        // positions into `decodable`, visited in lexicographic order
        self.combo.clear();
        self.combo.extend(0..k);
        self.best.clear();
        let mut best_snr = f64::NEG_INFINITY;
        loop {
            let mut pooled = 0.0;
            let mut weakest = f64::INFINITY;
            for &pos in &self.combo {
                let i = self.decodable[pos];
                pooled += self.harvest(i, ch);
                weakest = weakest.min(ch.relay_dst[i]);
            }
            let snr = pooled / k as f64 * weakest;
            if snr > best_snr {
                best_snr = snr;
                self.best.clear();
                self.best.extend(self.combo.iter().map(|&p| self.decodable[p]));
            }
            // advance to the next combination
            let mut j = k;
            while j > 0 && self.combo[j - 1] == n - k + j - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            self.combo[j - 1] += 1;
            for t in j..k {
                self.combo[t] = self.combo[t - 1] + 1;
            }
        }
        let pooled: f64 = self.best.iter().map(|&i| self.harvest(i, ch)).sum();
        let share = pooled / k as f64;
        out.sources.extend_from_slice(&self.best);
        out.destinations.extend_from_slice(&self.best);
        out.dest_power.resize(k, share);
        Ok(())
    }

    fn greedy(&mut self, ch: &ChannelRealization, out: &mut ScheduleDecision) {
        let s = self.cfg.num_scheduled.min(self.decodable.len());
        if s == 0 {
            return;
        }
        top_k_into(&ch.src_relay, &self.decodable, s, &mut self.picked);
        out.sources.extend_from_slice(&self.picked);
        let pooled: f64 = out.sources.iter().map(|&i| self.harvest(i, ch)).sum();
        let share = pooled / s as f64;
        self.decodable.clear();
        self.decodable.extend(0..ch.num_pairs());
        top_k_into(&ch.relay_dst, &self.decodable, s, &mut self.picked);
        out.destinations.extend_from_slice(&self.picked);
        out.dest_power.resize(s, share);
        // restore the decode set for callers that inspect it afterwards
        fill_decode_set(ch, &self.thr, &mut self.decodable);
    }

    fn random(&mut self, ch: &ChannelRealization, rng: &mut RandomStream, out: &mut ScheduleDecision) {
        let m = self.cfg.num_scheduled;
        let total = ch.num_pairs();
        self.picked.clear();
        self.picked.extend(0..total);
        // partial Fisher-Yates
        for j in 0..m {
            let r = j + rng.below(total - j);
            self.picked.swap(j, r);
        }
        out.sources.extend_from_slice(&self.picked[..m]);
        out.destinations.extend_from_slice(&self.picked[..m]);
        if m == 1 {
            let power = self.harvest(self.picked[0], ch);
            out.dest_power.push(power);
        } else {
            let pooled: f64 = self.picked[..m].iter().map(|&i| self.harvest(i, ch)).sum();
            out.dest_power.resize(m, pooled / m as f64);
        }
    }
}

/// Writes the indices of the `k` largest `values[c]` for `c` in `candidates`
/// into `out`, strongest first, lowest index first among equals.
fn top_k_into(values: &[f64], candidates: &[usize], k: usize, out: &mut Vec<usize>) {
    out.clear();
    out.extend_from_slice(candidates);
    for r in 0..k {
        let mut best = r;
        for j in r + 1..out.len() {
            let (a, b) = (values[out[j]], values[out[best]]);
            if a > b || (a == b && out[j] < out[best]) {
                best = j;
            }
        }
        out.swap(r, best);
    }
    out.truncate(k);
}

fn run_once(
    scheme: Scheme,
    ch: &ChannelRealization,
    cfg: &SystemConfig,
    thr: &Thresholds,
    rng: Option<&mut RandomStream>,
) -> Result<ScheduleDecision> {
    let mut scheduler = Scheduler::new(scheme, cfg, thr)?;
    let mut out = ScheduleDecision::default();
    match rng {
        Some(rng) => scheduler.schedule(ch, rng, &mut out)?,
        None => scheduler.schedule(ch, &mut RandomStream::new(0), &mut out)?,
    }
    Ok(out)
}

/// Max-min pair selection (m = 1): `argmax_i min{|h_i|^2, |g_i|^2}`. The
/// chosen pair is kept even when its source cannot be decoded.
pub fn select_max_min(ch: &ChannelRealization, cfg: &SystemConfig, thr: &Thresholds) -> Result<ScheduleDecision> {
    run_once(Scheme::MaxMin, ch, cfg, thr, None)
}

/// Single-pair selection within the decode set maximizing
/// `(|h_i|^2 - eps) |g_i|^2`. Empty when nothing is decodable.
pub fn select_approach1(ch: &ChannelRealization, cfg: &SystemConfig, thr: &Thresholds) -> Result<ScheduleDecision> {
    run_once(Scheme::Approach1, ch, cfg, thr, None)
}

/// Exhaustive search over all `min{m, |S|}`-subsets of the decode set; the
/// pooled harvested power is split equally and the subset with the largest
/// worst-destination SNR wins.
pub fn select_exhaustive(ch: &ChannelRealization, cfg: &SystemConfig, thr: &Thresholds) -> Result<ScheduleDecision> {
    run_once(Scheme::Exhaustive, ch, cfg, thr, None)
}

/// Like [`select_exhaustive`] with an explicit enumeration budget.
pub fn select_exhaustive_with_budget(
    ch: &ChannelRealization,
    cfg: &SystemConfig,
    thr: &Thresholds,
    budget: u64,
) -> Result<ScheduleDecision> {
    let mut scheduler = Scheduler::new(Scheme::Exhaustive, cfg, thr)?.with_budget(budget);
    let mut out = ScheduleDecision::default();
    scheduler.schedule(ch, &mut RandomStream::new(0), &mut out)?;
    Ok(out)
}

/// Greedy scheduling: the strongest decodable sources feed a shared power pool
/// that serves the strongest destinations overall, strongest first.
pub fn select_greedy(ch: &ChannelRealization, cfg: &SystemConfig, thr: &Thresholds) -> Result<ScheduleDecision> {
    run_once(Scheme::Greedy, ch, cfg, thr, None)
}

/// Random baseline: `m` pairs uniformly without replacement.
pub fn select_random(
    ch: &ChannelRealization,
    cfg: &SystemConfig,
    thr: &Thresholds,
    rng: &mut RandomStream,
) -> Result<ScheduleDecision> {
    run_once(Scheme::Random, ch, cfg, thr, Some(rng))
}
