//! Network configuration, channel draws and the power-splitting relay physics.
//!
//! Noise variance is normalized to one throughout, so the source transmit
//! power `P` doubles as the transmit SNR.

use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};
use crate::rng::RandomStream;

/// How channel power gains are generated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Every gain is an independent unit-mean exponential (Rayleigh fading).
    UnitExponential,
    /// Sources and destinations are dropped uniformly on a disk centred on the
    /// relay; gain = fading / (1 + d^exponent).
    DiskPathLoss { radius: f64, exponent: f64 },
}

/// Network and protocol parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Number of source-destination pairs, `M`.
    pub num_pairs: usize,
    /// Number of pairs the relay schedules, `m`.
    pub num_scheduled: usize,
    /// Target rate in bits per channel use.
    pub rate: f64,
    /// Energy harvesting coefficient in (0, 1].
    pub eta: f64,
    /// Linear transmit SNR.
    pub tx_power: f64,
    pub placement: Placement,
}

impl SystemConfig {
    pub fn new(num_pairs: usize, num_scheduled: usize, rate: f64, eta: f64, tx_power: f64) -> Self {
        SystemConfig {
            num_pairs,
            num_scheduled,
            rate,
            eta,
            tx_power,
            placement: Placement::UnitExponential,
        }
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.placement = placement;
        self
    }

    pub fn with_power_db(mut self, snr_db: f64) -> Self {
        self.tx_power = db_to_linear(snr_db);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_pairs == 0 {
            return Err(Error::config("number of pairs M must be at least 1"));
        }
        if self.num_scheduled == 0 || self.num_scheduled > self.num_pairs {
            return Err(Error::config(format!(
                "scheduled pairs m = {} must lie in [1, M = {}]",
                self.num_scheduled, self.num_pairs
            )));
        }
        if !(self.rate > 0.0 && self.rate.is_finite()) {
            return Err(Error::config(format!("rate must be positive, got {}", self.rate)));
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::config(format!("eta must lie in (0, 1], got {}", self.eta)));
        }
        if !(self.tx_power > 0.0 && self.tx_power.is_finite()) {
            return Err(Error::config(format!(
                "transmit power must be positive, got {}",
                self.tx_power
            )));
        }
        if let Placement::DiskPathLoss { radius, exponent } = self.placement {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::config(format!("disk radius must be positive, got {radius}")));
            }
            if !(exponent >= 0.0 && exponent.is_finite()) {
                return Err(Error::config(format!(
                    "path-loss exponent must be non-negative, got {exponent}"
                )));
            }
        }
        Ok(())
    }

    /// SNR a destination needs to support the target rate, `2^{2R} - 1`.
    pub fn snr_target(&self) -> f64 {
        (2.0 * self.rate).exp2() - 1.0
    }

    pub fn snr_db(&self) -> f64 {
        linear_to_db(self.tx_power)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Decoding thresholds derived from a configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `(2^{2R} - 1) / P`: the smallest source-relay gain the relay can decode.
    pub eps: f64,
    /// `eps / eta`: effective threshold on the product `(|h|^2 - eps) |g|^2`.
    pub eps1: f64,
    /// Positive root of `y^2 - eps*y - eps1 = 0`.
    pub eps0: f64,
}

impl Thresholds {
    /// Builds the triple from `eps` and `eps1` directly. Also covers limiting
    /// cases (e.g. `eps = 0`) that no valid configuration produces.
    pub fn from_eps(eps: f64, eps1: f64) -> Self {
        let eps0 = 0.5 * (eps + (eps * eps + 4.0 * eps1).sqrt());
        Thresholds { eps, eps1, eps0 }
    }
}

pub fn compute_thresholds(cfg: &SystemConfig) -> Thresholds {
    let eps = cfg.snr_target() / cfg.tx_power;
    Thresholds::from_eps(eps, eps / cfg.eta)
}

/// One draw of every source-relay (`|h_i|^2`) and relay-destination
/// (`|g_i|^2`) channel power gain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub src_relay: Vec<f64>,
    pub relay_dst: Vec<f64>,
}

impl ChannelRealization {
    pub fn new(src_relay: Vec<f64>, relay_dst: Vec<f64>) -> Result<Self> {
        if src_relay.len() != relay_dst.len() || src_relay.is_empty() {
            return Err(Error::config(format!(
                "channel vectors must be non-empty and equally long ({} vs {})",
                src_relay.len(),
                relay_dst.len()
            )));
        }
        if src_relay
            .iter()
            .chain(&relay_dst)
            .any(|g| !(g.is_finite() && *g >= 0.0))
        {
            return Err(Error::config("channel gains must be finite and non-negative"));
        }
        Ok(ChannelRealization {
            src_relay,
            relay_dst,
        })
    }

    pub(crate) fn zeroed(num_pairs: usize) -> Self {
        ChannelRealization {
            src_relay: vec![0.0; num_pairs],
            relay_dst: vec![0.0; num_pairs],
        }
    }

    pub fn num_pairs(&self) -> usize {
        self.src_relay.len()
    }
}

pub fn sample_channels(cfg: &SystemConfig, rng: &mut RandomStream) -> ChannelRealization {
    let mut ch = ChannelRealization::zeroed(cfg.num_pairs);
    sample_channels_into(cfg, rng, &mut ch);
    ch
}

/// Refills `ch` in place; the Monte Carlo hot loop reuses one buffer.
/// Fading is drawn first (`h_0, g_0, h_1, g_1, ...`), node radii after, so a
/// disk-placement draw attenuates exactly the fading an i.i.d. draw would see.
pub fn sample_channels_into(cfg: &SystemConfig, rng: &mut RandomStream, ch: &mut ChannelRealization) {
    ch.src_relay.resize(cfg.num_pairs, 0.0);
    ch.relay_dst.resize(cfg.num_pairs, 0.0);
    for i in 0..cfg.num_pairs {
        ch.src_relay[i] = Exp1.sample(rng);
        ch.relay_dst[i] = Exp1.sample(rng);
    }
    if let Placement::DiskPathLoss { radius, exponent } = cfg.placement {
        for i in 0..cfg.num_pairs {
            // uniform on the disk: radius * sqrt(U) is the distance to the centre
            let d_src = radius * rng.uniform().sqrt();
            let d_dst = radius * rng.uniform().sqrt();
            ch.src_relay[i] /= 1.0 + d_src.powf(exponent);
            ch.relay_dst[i] /= 1.0 + d_dst.powf(exponent);
        }
    }
}

/// Largest power-splitting ratio that still lets the relay decode.
pub fn optimal_theta(gain_h: f64, thr: &Thresholds) -> f64 {
    if gain_h <= 0.0 {
        return 0.0;
    }
    (1.0 - thr.eps / gain_h).max(0.0)
}

/// Power harvested from one source: `eta * P * [|h|^2 - eps]^+`.
#[inline]
pub fn harvested_power(gain_h: f64, cfg: &SystemConfig, thr: &Thresholds) -> f64 {
    cfg.eta * cfg.tx_power * (gain_h - thr.eps).max(0.0)
}

/// A destination is in outage when its received SNR is strictly below the
/// rate target.
#[inline]
pub fn destination_outage(relay_power: f64, gain_g: f64, cfg: &SystemConfig) -> bool {
    relay_power * gain_g < cfg.snr_target()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamPurpose;

    fn cfg(rate: f64, power: f64, eta: f64) -> SystemConfig {
        SystemConfig::new(1, 1, rate, eta, power)
    }

    #[test]
    fn thresholds_unit_case() {
        let thr = compute_thresholds(&cfg(0.5, 1.0, 1.0));
        assert_eq!(thr.eps, 1.0);
        assert_eq!(thr.eps1, 1.0);
        assert!((thr.eps0 - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn thresholds_rate_two() {
        let thr = compute_thresholds(&cfg(2.0, 15.0, 1.0));
        assert_eq!(thr.eps, 1.0);
        assert_eq!(thr.eps1, 1.0);
        let thr = compute_thresholds(&cfg(2.0, 15.0, 0.5));
        assert_eq!(thr.eps1, 2.0);
    }

    #[test]
    fn thresholds_zero_eps_limit() {
        assert_eq!(Thresholds::from_eps(0.0, 1.0).eps0, 1.0);
    }

    #[test]
    fn eps0_is_a_root() {
        for &(r, p, eta) in &[(0.5, 1.0, 1.0), (4.0, 1e4, 0.3), (1.0, 1e6, 1.0), (2.0, 3.0, 0.9)] {
            let thr = compute_thresholds(&cfg(r, p, eta));
            let y = thr.eps0;
            let residual = y * y - thr.eps * y - thr.eps1;
            assert!(residual.abs() <= 1e-12 * y * y, "residual {residual}");
            assert!(thr.eps0 > thr.eps && thr.eps1 >= thr.eps);
        }
    }

    #[test]
    fn theta_examples() {
        let thr = Thresholds::from_eps(0.5, 0.5);
        assert_eq!(optimal_theta(0.5, &thr), 0.0);
        assert_eq!(optimal_theta(1.0, &thr), 0.5);
        assert_eq!(optimal_theta(0.25, &thr), 0.0);
        assert_eq!(optimal_theta(0.0, &thr), 0.0);
    }

    #[test]
    fn harvested_power_examples() {
        let thr = Thresholds::from_eps(0.5, 0.5);
        let c = cfg(1.0, 10.0, 1.0);
        assert_eq!(harvested_power(2.5, &c, &thr), 20.0);
        assert_eq!(harvested_power(0.5, &c, &thr), 0.0);
        assert_eq!(harvested_power(0.1, &c, &thr), 0.0);
        let c = cfg(1.0, 10.0, 0.5);
        assert_eq!(harvested_power(2.5, &c, &thr), 10.0);
    }

    #[test]
    fn outage_examples() {
        let c = cfg(2.0, 15.0, 1.0);
        let thr = compute_thresholds(&c);
        assert!(destination_outage(0.0, 100.0, &c));
        // (2 - 1) * 2 = 2 >= 1
        let p = harvested_power(2.0, &c, &thr);
        assert!(!destination_outage(p, 2.0, &c));
        // exact boundary: target 1, power 1, gain 1
        let c = cfg(0.5, 1.0, 1.0);
        let thr = compute_thresholds(&c);
        let p = harvested_power(2.0, &c, &thr);
        assert_eq!(p * 1.0, c.snr_target());
        assert!(!destination_outage(p, 1.0, &c));
    }

    #[test]
    fn validation_rejects_bad_configs() {
        assert!(SystemConfig::new(3, 4, 1.0, 1.0, 1.0).validate().is_err());
        assert!(SystemConfig::new(3, 0, 1.0, 1.0, 1.0).validate().is_err());
        assert!(SystemConfig::new(3, 1, 0.0, 1.0, 1.0).validate().is_err());
        assert!(SystemConfig::new(3, 1, 1.0, 1.5, 1.0).validate().is_err());
        assert!(SystemConfig::new(3, 1, 1.0, 1.0, -1.0).validate().is_err());
        let disk = Placement::DiskPathLoss { radius: 0.0, exponent: 2.0 };
        assert!(SystemConfig::new(3, 1, 1.0, 1.0, 1.0)
            .with_placement(disk)
            .validate()
            .is_err());
        assert!(SystemConfig::new(3, 3, 1.0, 1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn exponential_mean_is_one() {
        let c = SystemConfig::new(10, 1, 1.0, 1.0, 1.0);
        let mut rng = RandomStream::derive(11, StreamPurpose::Channels, 0);
        let mut ch = ChannelRealization::zeroed(10);
        let (mut sum, mut n) = (0.0, 0usize);
        for _ in 0..50_000 {
            sample_channels_into(&c, &mut rng, &mut ch);
            sum += ch.src_relay.iter().chain(&ch.relay_dst).sum::<f64>();
            n += 20;
        }
        let mean = sum / n as f64;
        assert!((0.997..=1.003).contains(&mean), "mean {mean}");
    }

    #[test]
    fn path_loss_only_attenuates() {
        let base = SystemConfig::new(4, 1, 1.0, 1.0, 1.0);
        let disk = base.with_placement(Placement::DiskPathLoss { radius: 2.0, exponent: 2.0 });
        for k in 0..1000 {
            let raw = sample_channels(&base, &mut RandomStream::derive(5, StreamPurpose::Channels, k));
            let lossy = sample_channels(&disk, &mut RandomStream::derive(5, StreamPurpose::Channels, k));
            for i in 0..4 {
                assert!(lossy.src_relay[i] <= raw.src_relay[i]);
                assert!(lossy.relay_dst[i] <= raw.relay_dst[i]);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = SystemConfig::new(6, 2, 1.0, 1.0, 1.0)
            .with_placement(Placement::DiskPathLoss { radius: 2.0, exponent: 2.0 });
        let draw = || {
            let mut rng = RandomStream::derive(42, StreamPurpose::Channels, 9);
            (0..10).map(|_| sample_channels(&c, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(), draw());
    }
}
