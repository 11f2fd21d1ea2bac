//! Closed-form outage probabilities and the distributions behind them.
//!
//! Every function here is pure. Alternating binomial sums are accumulated
//! with [`CompensatedSum`] and refuse to run for `M` above
//! [`AnalyticParams::max_pairs_exact`].

use crate::error::{Error, Result};
use crate::model::{SystemConfig, Thresholds, compute_thresholds};
use crate::quad::{Tolerance, integrate};
use crate::schedule::Scheme;
use crate::special::{BESSEL_MAX_ORDER, CompensatedSum, binomial, factorial, one_minus_scaled_bessel_k};

/// Default cap on `M` for the alternating-sum formulas.
pub const DEFAULT_MAX_PAIRS_EXACT: usize = 20;

/// Absolute tolerance of the beta quadrature.
pub const BETA_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams {
    pub num_pairs: usize,
    pub num_scheduled: usize,
    pub thr: Thresholds,
    pub max_pairs_exact: usize,
}

impl AnalyticParams {
    pub fn new(num_pairs: usize, num_scheduled: usize, thr: Thresholds) -> Self {
        AnalyticParams {
            num_pairs,
            num_scheduled,
            thr,
            max_pairs_exact: DEFAULT_MAX_PAIRS_EXACT,
        }
    }

    pub fn from_config(cfg: &SystemConfig) -> Self {
        Self::new(cfg.num_pairs, cfg.num_scheduled, compute_thresholds(cfg))
    }

    fn check(&self) -> Result<()> {
        let (big_m, m) = (self.num_pairs, self.num_scheduled);
        if big_m == 0 || m == 0 || m > big_m {
            return Err(Error::config(format!("need 1 <= m <= M, got M = {big_m}, m = {m}")));
        }
        if big_m > self.max_pairs_exact {
            return Err(Error::CancellationGuard {
                pairs: big_m,
                cap: self.max_pairs_exact,
            });
        }
        Ok(())
    }

    fn check_single(&self, what: &str) -> Result<()> {
        self.check()?;
        if self.num_scheduled != 1 {
            return Err(Error::config(format!("{what} is defined for m = 1 only")));
        }
        Ok(())
    }
}

/// `int_0^upper exp(-(2i+1) y - eps1 / y) dy`.
pub fn beta_integral(upper: f64, i: usize, eps1: f64) -> Result<f64> {
    if !(upper > 0.0) || !upper.is_finite() {
        return Err(Error::domain("beta_integral", format!("upper limit {upper} must be finite and > 0")));
    }
    if !(eps1 > 0.0) || !eps1.is_finite() {
        return Err(Error::domain("beta_integral", format!("eps1 = {eps1} must be finite and > 0")));
    }
    let rate = (2 * i + 1) as f64;
    let est = integrate(
        |y| {
            if y <= 0.0 {
                0.0
            } else {
                (-rate * y - eps1 / y).exp()
            }
        },
        0.0,
        upper,
        Tolerance::absolute(BETA_TOLERANCE),
    )?;
    Ok(est.value.clamp(0.0, upper))
}

/// Density and CDF of `max_i min(h_i, g_i)` over `M` pairs of unit
/// exponentials.
pub fn minpair_max_pdf_cdf(z: f64, num_pairs: usize) -> (f64, f64) {
    if !(z > 0.0) {
        let pdf = if z == 0.0 && num_pairs == 1 { 2.0 } else { 0.0 };
        return (pdf, 0.0);
    }
    let big_m = num_pairs as i32;
    let below = -(-2.0 * z).exp_m1();
    let pdf = 2.0 * num_pairs as f64 * (-2.0 * z).exp() * below.powi(big_m - 1);
    (pdf, below.powi(big_m))
}

/// `P(|S| = n)`: binomial law of the decode-set size.
pub fn prob_decode_set_size(n: usize, params: &AnalyticParams) -> f64 {
    let big_m = params.num_pairs;
    if n > big_m {
        return 0.0;
    }
    let eps = params.thr.eps;
    let miss = -(-eps).exp_m1();
    binomial(big_m, n) * miss.powi((big_m - n) as i32) * (-(n as f64) * eps).exp()
}

/// Outage of max-min scheduling with harvested relay power.
pub fn theorem1_maxmin_outage(params: &AnalyticParams) -> Result<f64> {
    params.check_single("max-min outage")?;
    let big_m = params.num_pairs;
    let Thresholds { eps, eps1, eps0 } = params.thr;
    let e = (-eps).exp();
    // exp(-a x) - exp(-a y) for x < y without cancellation
    let gap = |a: f64, x: f64, y: f64| -(-a * x).exp() * (-a * (y - x)).exp_m1();

    let mut first = CompensatedSum::new();
    for i in 0..=big_m {
        let r = 2.0 * i as f64 - 1.0;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        first.add(binomial(big_m, i) * sign / r * -(-r * eps).exp_m1());
    }

    let mut second = CompensatedSum::new();
    let mut fourth = CompensatedSum::new();
    for i in 0..big_m {
        let c = binomial(big_m - 1, i) * if i % 2 == 0 { 1.0 } else { -1.0 };
        let two_i = 2.0 * i as f64;
        let a = two_i + 2.0;
        let b_full = beta_integral(eps0, i, eps1)?;
        let b_tail = beta_integral(eps0 - eps, i, eps1)?;
        second.add(c * gap(two_i + 1.0, 0.0, eps) * e / (two_i + 1.0));
        second.add(c * gap(a, eps, eps0) / a);
        second.add(-c * e * b_full);
        fourth.add(c * gap(a, eps, eps0) / a);
        fourth.add(-c * (-(two_i + 1.0) * eps).exp() * b_tail);
    }

    let mut total = CompensatedSum::new();
    total.add(0.5 * e * first.value());
    total.add(big_m as f64 * second.value());
    total.add(0.5 * (-(-2.0 * eps).exp_m1()).powi(big_m as i32));
    total.add(big_m as f64 * fourth.value());
    Ok(total.value().clamp(0.0, 1.0))
}

/// Outage of max-min scheduling when the relay transmits with the source
/// power `P`: `(1 - exp(-2 eps))^M`.
pub fn conventional_maxmin_outage(params: &AnalyticParams) -> Result<f64> {
    params.check_single("conventional max-min outage")?;
    Ok(minpair_max_pdf_cdf(params.thr.eps, params.num_pairs).1)
}

/// `1 - 2 sqrt(eps1) K_1(2 sqrt(eps1))`: outage of a single decoded pair
/// with dedicated harvested power.
pub fn single_pair_relay_outage(eps1: f64) -> Result<f64> {
    one_minus_scaled_bessel_k(1, eps1)
}

/// Outage of Approach I (best pair within the decode set), exact.
pub fn approach1_outage_exact(params: &AnalyticParams) -> Result<f64> {
    params.check_single("approach I outage")?;
    let base = single_pair_relay_outage(params.thr.eps1)?;
    let mut total = CompensatedSum::new();
    total.add(prob_decode_set_size(0, params));
    for n in 1..=params.num_pairs {
        total.add(base.powi(n as i32) * prob_decode_set_size(n, params));
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// High-SNR approximation of Approach I: `eps^M + sum_n C(M,n) eps^M ln(1/eps)^n`.
pub fn approach1_outage_asymptotic(params: &AnalyticParams) -> Result<f64> {
    params.check_single("approach I asymptotic outage")?;
    let eps = params.thr.eps;
    if !(eps < (-1.0f64).exp()) {
        return Err(Error::domain("approach1_outage_asymptotic", format!("eps = {eps} must be below 1/e")));
    }
    let big_m = params.num_pairs;
    let log_inv = -eps.ln();
    let mut total = eps.powi(big_m as i32);
    for n in 1..=big_m {
        total += eps.powi(n as i32) * log_inv.powi(n as i32) * binomial(big_m, n) * eps.powi((big_m - n) as i32);
    }
    Ok(total)
}

/// One summand of the density of the sum of the `m` largest of `n` unit
/// exponentials: `d [sum_j a_j e^{-w} w^{j-1}/(j-1)! + b e^{-lambda w}]`.
#[derive(Debug, Clone, PartialEq)]
struct LargestSumTerm {
    d: f64,
    a: Vec<f64>,
    b: f64,
    lambda: f64,
}

/// Density of the sum of the `m` largest of `n` i.i.d. unit exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct LargestSumDensity {
    n: usize,
    m: usize,
    terms: Vec<LargestSumTerm>,
}

impl LargestSumDensity {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::config(format!("need 1 <= m < n, got n = {n}, m = {m}")));
        }
        let mf = m as f64;
        let lead = factorial(n) / (factorial(n - m - 1) * factorial(m) * mf);
        let sign = |p: usize| if p.is_multiple_of(2) { 1.0 } else { -1.0 };
        let terms = (0..n - m)
            .map(|k| {
                let k1 = (k + 1) as f64;
                LargestSumTerm {
                    d: lead * binomial(n - m - 1, k) * sign(k),
                    a: (1..=m)
                        .map(|j| sign(m - j) * (mf / k1).powi((m - j) as i32) * mf / k1)
                        .collect(),
                    b: sign(m) * (mf / k1).powi(m as i32),
                    lambda: 1.0 + k1 / mf,
                }
            })
            .collect();
        Ok(LargestSumDensity { n, m, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pdf(&self, w: f64) -> f64 {
        if !(w >= 0.0) {
            return 0.0;
        }
        let decay = (-w).exp();
        self.terms
            .iter()
            .map(|t| {
                let mut gamma_part = 0.0;
                let mut power = 1.0; // w^{j-1} / (j-1)!
                for (j, a) in t.a.iter().enumerate() {
                    if j > 0 {
                        power *= w / j as f64;
                    }
                    gamma_part += a * power;
                }
                t.d * (gamma_part * decay + t.b * (-t.lambda * w).exp())
            })
            .collect::<CompensatedSum>()
            .value()
    }

    /// `1 - E[exp(-c / W)]`, expanded term by term so that every Bessel
    /// factor enters as `1 - 2 a^{j/2} K_j(2 sqrt a)/(j-1)!`.
    pub fn one_minus_laplace_inverse(&self, c: f64) -> Result<f64> {
        let mut acc = CompensatedSum::new();
        for t in &self.terms {
            for (j, a) in t.a.iter().enumerate() {
                acc.add(t.d * a * one_minus_scaled_bessel_k(j + 1, c)?);
            }
            acc.add(t.d * t.b / t.lambda * one_minus_scaled_bessel_k(1, c * t.lambda)?);
        }
        Ok(acc.value())
    }
}

/// Density of the sum of the `m` largest of `n` unit exponentials.
pub fn sum_largest_exponentials_pdf(w: f64, n: usize, m: usize) -> Result<f64> {
    Ok(LargestSumDensity::new(n, m)?.pdf(w))
}

/// `P(g_(i) < x)` weights for the `i`-th strongest of `M` unit exponentials:
/// `i C(M,i) sum_k C(M-i,k) (-1)^k/(k+i) (1 - exp(-(k+i) x))`.
fn rank_cdf_weights(big_m: usize, i: usize) -> impl Iterator<Item = (usize, f64)> {
    let lead = i as f64 * binomial(big_m, i);
    (0..=big_m - i).map(move |k| {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (k + i, lead * binomial(big_m - i, k) * sign / (k + i) as f64)
    })
}

/// Outage of the `i`-th strongest destination under greedy scheduling
/// with `m` pooled pairs.
pub fn greedy_outage_lemma2(rank: usize, params: &AnalyticParams) -> Result<f64> {
    params.check()?;
    let (big_m, m) = (params.num_pairs, params.num_scheduled);
    if rank == 0 || rank > m {
        return Err(Error::config(format!("user rank {rank} outside 1..={m}")));
    }
    if m > BESSEL_MAX_ORDER {
        return Err(Error::config(format!("greedy closed form supports m <= {BESSEL_MAX_ORDER}, got {m}")));
    }
    let eps1 = params.thr.eps1;
    let mut total = CompensatedSum::new();
    total.add(prob_decode_set_size(0, params));

    // n <= m: the pooled power is a Gamma(n) variable shared n ways
    for n in 1..=m {
        let mut t2 = CompensatedSum::new();
        for (q, w) in rank_cdf_weights(big_m, rank) {
            t2.add(w * one_minus_scaled_bessel_k(n, (q * n) as f64 * eps1)?);
        }
        total.add(t2.value() * prob_decode_set_size(n, params));
    }

    // n > m: the pooled power is the sum of the m largest of n
    for n in m + 1..=big_m {
        let density = LargestSumDensity::new(n, m)?;
        let mut t3 = CompensatedSum::new();
        for (q, w) in rank_cdf_weights(big_m, rank) {
            t3.add(w * density.one_minus_laplace_inverse(m as f64 * eps1 * q as f64)?);
        }
        total.add(t3.value() * prob_decode_set_size(n, params));
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// Conditional outage of single-pair greedy scheduling given `n` decodable
/// sources, as a double alternating sum over Bessel products.
pub fn greedy_single_pair_t3(n: usize, params: &AnalyticParams) -> Result<f64> {
    params.check_single("single-pair greedy outage")?;
    let big_m = params.num_pairs;
    if n == 0 || n > big_m {
        return Err(Error::config(format!("decode-set size {n} outside 1..={big_m}")));
    }
    let eps1 = params.thr.eps1;
    let mut acc = CompensatedSum::new();
    for k in 0..=big_m {
        let sk = if k % 2 == 0 { 1.0 } else { -1.0 };
        for i in 0..n {
            let si = if i % 2 == 0 { 1.0 } else { -1.0 };
            let i1 = (i + 1) as f64;
            // 2 sqrt(k eps1/(i+1)) K_1(2 sqrt((i+1) k eps1)), limit 1/(i+1) at k = 0
            let product = if k == 0 {
                1.0 / i1
            } else {
                (1.0 - one_minus_scaled_bessel_k(1, i1 * k as f64 * eps1)?) / i1
            };
            acc.add(binomial(big_m, k) * sk * binomial(n - 1, i) * si * product);
        }
    }
    Ok(n as f64 * acc.value())
}

/// Single-pair greedy outage assembled from [`greedy_single_pair_t3`].
pub fn greedy_single_pair_outage(params: &AnalyticParams) -> Result<f64> {
    let mut total = CompensatedSum::new();
    total.add(prob_decode_set_size(0, params));
    for n in 1..=params.num_pairs {
        total.add(greedy_single_pair_t3(n, params)? * prob_decode_set_size(n, params));
    }
    Ok(total.value().clamp(0.0, 1.0))
}

/// Closed-form outage of `scheme` for destination `rank`, if one exists.
///
/// Returns `None` for exhaustive search, for random scheduling with
/// `m > 1`, for max-min with `m > 1` and for path-loss placement.
pub fn analytic_outage(scheme: Scheme, cfg: &SystemConfig, rank: usize) -> Option<Result<f64>> {
    use crate::model::Placement;
    if cfg.placement != Placement::UnitExponential {
        return None;
    }
    let params = AnalyticParams::from_config(cfg);
    let single = cfg.num_scheduled == 1;
    match scheme {
        Scheme::MaxMin if single => Some(theorem1_maxmin_outage(&params)),
        Scheme::ConventionalMaxMin if single => Some(conventional_maxmin_outage(&params)),
        Scheme::Approach1 if single => Some(approach1_outage_exact(&params)),
        Scheme::Greedy => Some(greedy_outage_lemma2(rank, &params)),
        // one uniformly chosen pair behaves like a network of one pair
        Scheme::Random if single => Some(approach1_outage_exact(&AnalyticParams { num_pairs: 1, ..params })),
        _ => None,
    }
}

/// Closed-form outage of `scheme` at every point of `snr_db_grid`, as
/// `(P_linear, outage)` pairs ready for [`fit_diversity_slope`].
pub fn analytic_curve(scheme: Scheme, cfg: &SystemConfig, rank: usize, snr_db_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    snr_db_grid
        .iter()
        .map(|&db| {
            let c = cfg.with_power_db(db);
            let po = analytic_outage(scheme, &c, rank)
                .ok_or_else(|| Error::config(format!("no closed form for {scheme} with m = {}", cfg.num_scheduled)))??;
            Ok((c.tx_power, po))
        })
        .collect()
}

/// Least-squares slope of `log10(outage)` against `log10(P)`, negated.
pub fn fit_diversity_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(Error::config("transmit powers must be strictly increasing"));
    }
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(p, o)| *p > 0.0 && p.is_finite() && *o > 0.0 && *o < 1.0)
        .map(|(p, o)| (p.log10(), o.log10()))
        .collect();
    if usable.len() < 4 {
        return Err(Error::Fit(usable.len()));
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|u| u.0).sum::<f64>() / n;
    let my = usable.iter().map(|u| u.1).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|u| (u.0 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|u| (u.0 - mx) * (u.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit(usable.len()));
    }
    Ok(-sxy / sxx)
}

/// Fits the slope using only the points whose outage lies in `[lo, hi]`.
pub fn fit_diversity_in_window(points: &[(f64, f64)], lo: f64, hi: f64) -> Result<f64> {
    if !(lo > 0.0 && lo < hi && hi < 1.0) {
        return Err(Error::config(format!("window [{lo}, {hi}] must satisfy 0 < lo < hi < 1")));
    }
    let inside: Vec<(f64, f64)> = points.iter().copied().filter(|&(_, o)| o >= lo && o <= hi).collect();
    fit_diversity_slope(&inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::db_to_linear;

    fn params(big_m: usize, m: usize, rate: f64, snr_db: f64, eta: f64) -> AnalyticParams {
        let cfg = SystemConfig::new(big_m, m, rate, eta, db_to_linear(snr_db));
        AnalyticParams::from_config(&cfg)
    }

    fn close(got: f64, want: f64, rel: f64) {
        assert!(
            ((got - want) / want).abs() <= rel,
            "got {got:e}, want {want:e}, rel err {:e}",
            ((got - want) / want).abs()
        );
    }

    #[test]
    fn beta_reference_values() {
        close(beta_integral(1.0, 0, 1.0).unwrap(), 0.072198240198216081338, 1e-11);
        close(beta_integral(0.7, 2, 0.3).unwrap(), 0.03427165607523742151, 1e-11);
        assert!(beta_integral(1.0, 0, 1e6).unwrap() <= 1e-6);
        assert!(beta_integral(0.0, 0, 1.0).is_err());
        assert!(beta_integral(1.0, 0, 0.0).is_err());
    }

    #[test]
    fn minpair_density_limits() {
        assert_eq!(minpair_max_pdf_cdf(0.0, 3).1, 0.0);
        assert_eq!(minpair_max_pdf_cdf(f64::INFINITY, 3).1, 1.0);
        for z in [0.1, 0.7, 3.0] {
            close(minpair_max_pdf_cdf(z, 1).0, 2.0 * (-2.0 * z).exp(), 1e-15);
        }
        for big_m in [2, 5] {
            let mass = crate::quad::integrate_to_infinity(
                |z| minpair_max_pdf_cdf(z, big_m).0,
                0.0,
                Tolerance::absolute(1e-13),
            )
            .unwrap();
            assert!((mass.value - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn decode_set_law() {
        let thr = Thresholds::from_eps(std::f64::consts::LN_2, std::f64::consts::LN_2);
        let p = AnalyticParams::new(2, 1, thr);
        close(prob_decode_set_size(0, &p), 0.25, 1e-15);
        close(prob_decode_set_size(1, &p), 0.5, 1e-15);
        close(prob_decode_set_size(2, &p), 0.25, 1e-15);
        for big_m in 1..=20 {
            let p = params(big_m, 1, 2.0, 17.0, 0.6);
            let total: f64 = (0..=big_m).map(|n| prob_decode_set_size(n, &p)).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    // reference values from a 40-digit evaluation of the printed sums
    #[test]
    fn theorem1_reference_values() {
        close(theorem1_maxmin_outage(&params(1, 1, 4.0, 40.0, 1.0)).unwrap(), 0.11414180866329124, 1e-9);
        close(theorem1_maxmin_outage(&params(2, 1, 4.0, 40.0, 1.0)).unwrap(), 0.018028540297357973, 1e-9);
        close(theorem1_maxmin_outage(&params(3, 1, 4.0, 40.0, 1.0)).unwrap(), 0.0034599275310851184, 1e-9);
        close(theorem1_maxmin_outage(&params(6, 1, 2.0, 30.0, 0.5)).unwrap(), 5.3965991221213964e-5, 1e-8);
        close(theorem1_maxmin_outage(&params(3, 1, 2.0, 60.0, 1.0)).unwrap(), 1.3472359026443758e-9, 1e-6);
    }

    #[test]
    fn approach1_reference_values() {
        close(approach1_outage_exact(&params(1, 1, 4.0, 40.0, 1.0)).unwrap(), 0.11414180866329124, 1e-11);
        close(approach1_outage_exact(&params(3, 1, 4.0, 40.0, 1.0)).unwrap(), 0.0014870797165324968, 1e-11);
        close(approach1_outage_exact(&params(6, 1, 2.0, 30.0, 0.5)).unwrap(), 2.4513354754798512e-6, 1e-10);
    }

    #[test]
    fn approach1_exact_is_a_binomial_power() {
        for (big_m, db) in [(1, 10.0), (3, 25.0), (7, 40.0)] {
            let p = params(big_m, 1, 1.5, db, 0.7);
            let base = single_pair_relay_outage(p.thr.eps1).unwrap();
            let e = (-p.thr.eps).exp();
            let closed = (1.0 - e * (1.0 - base)).powi(big_m as i32);
            close(approach1_outage_exact(&p).unwrap(), closed, 1e-13);
        }
    }

    #[test]
    fn single_pair_formulas_collapse() {
        for (rate, db, eta) in [(4.0, 40.0, 1.0), (0.5, 5.0, 0.3), (2.0, 22.0, 0.8)] {
            let p = params(1, 1, rate, db, eta);
            let a1 = approach1_outage_exact(&p).unwrap();
            assert!((theorem1_maxmin_outage(&p).unwrap() - a1).abs() < 1e-9);
            assert!((greedy_outage_lemma2(1, &p).unwrap() - a1).abs() < 1e-9);
            assert!((greedy_single_pair_outage(&p).unwrap() - a1).abs() < 1e-9);
        }
    }

    #[test]
    fn conventional_benchmark() {
        let thr = Thresholds::from_eps(std::f64::consts::LN_2, std::f64::consts::LN_2);
        close(conventional_maxmin_outage(&AnalyticParams::new(1, 1, thr)).unwrap(), 0.75, 1e-15);
        close(conventional_maxmin_outage(&AnalyticParams::new(2, 1, thr)).unwrap(), 0.5625, 1e-15);
        let small = Thresholds::from_eps(1e-4, 1e-4);
        let ratio = conventional_maxmin_outage(&AnalyticParams::new(3, 1, small)).unwrap() / (2e-4f64).powi(3);
        assert!((0.99..=1.01).contains(&ratio));
    }

    #[test]
    fn asymptotic_form() {
        let p = params(1, 1, 1.0, 50.0, 1.0);
        let eps = p.thr.eps;
        close(approach1_outage_asymptotic(&p).unwrap(), eps + eps * (1.0 / eps).ln(), 1e-14);
        let p = params(2, 1, 1.0, 60.0, 1.0);
        let ratio = approach1_outage_exact(&p).unwrap() / approach1_outage_asymptotic(&p).unwrap();
        assert!((0.3..=3.0).contains(&ratio), "{ratio}");
        assert!(approach1_outage_asymptotic(&params(2, 1, 4.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn largest_sum_density() {
        // m = 1 is the density of the maximum: n e^{-w} (1 - e^{-w})^{n-1}
        let d = LargestSumDensity::new(4, 1).unwrap();
        for w in [0.0f64, 0.3, 1.0, 4.0] {
            let want = 4.0 * (-w).exp() * (1.0 - (-w).exp()).powi(3);
            assert!((d.pdf(w) - want).abs() < 1e-13);
        }
        for (n, m) in [(3, 1), (4, 2), (5, 3), (10, 2)] {
            let d = LargestSumDensity::new(n, m).unwrap();
            let mass = crate::quad::integrate_to_infinity(|w| d.pdf(w), 0.0, Tolerance::absolute(1e-13)).unwrap();
            assert!((mass.value - 1.0).abs() < 1e-8, "({n},{m}) mass {}", mass.value);
            let mean = crate::quad::integrate_to_infinity(|w| w * d.pdf(w), 0.0, Tolerance::absolute(1e-12)).unwrap();
            // E[sum of m largest] = m + m (H_n - H_m)
            let want = m as f64 + m as f64 * (m + 1..=n).map(|k| 1.0 / k as f64).sum::<f64>();
            assert!((mean.value - want).abs() < 1e-8);
            for k in 0..=300 {
                assert!(d.pdf(0.1 * k as f64) >= -1e-12);
            }
        }
        assert!(LargestSumDensity::new(3, 3).is_err());
        assert!(LargestSumDensity::new(3, 0).is_err());
    }

    #[test]
    fn laplace_block_matches_quadrature() {
        for (n, m, c) in [(5, 2, 0.01), (6, 3, 0.3), (10, 2, 2.0)] {
            let d = LargestSumDensity::new(n, m).unwrap();
            let quad = crate::quad::integrate_to_infinity(
                |w| if w > 0.0 { d.pdf(w) * -(-c / w).exp_m1() } else { d.pdf(0.0) },
                0.0,
                Tolerance::absolute(1e-12),
            )
            .unwrap();
            close(d.one_minus_laplace_inverse(c).unwrap(), quad.value, 1e-8);
        }
    }

    #[test]
    fn lemma2_reference_values() {
        let p = params(6, 3, 2.0, 15.0, 1.0);
        close(greedy_outage_lemma2(1, &p).unwrap(), 0.042862815419381346, 1e-9);
        close(greedy_outage_lemma2(2, &p).unwrap(), 0.10929150933066917, 1e-9);
        close(greedy_outage_lemma2(3, &p).unwrap(), 0.23033878163878876, 1e-9);
        let p = params(10, 2, 2.0, 15.0, 1.0);
        close(greedy_outage_lemma2(1, &p).unwrap(), 0.0017873335934220926, 1e-8);
        close(greedy_outage_lemma2(2, &p).unwrap(), 0.0049880610125904108, 1e-8);
        let p = params(10, 2, 2.0, 20.0, 1.0);
        // cancellation leaves roughly 1e-10 absolute accuracy at M = 10
        assert!((greedy_outage_lemma2(2, &p).unwrap() - 1.39057827609436e-6).abs() < 1e-10);
        assert!(greedy_outage_lemma2(0, &p).is_err());
        assert!(greedy_outage_lemma2(3, &p).is_err());
    }

    #[test]
    fn lemma2_empty_tail_when_all_pairs_scheduled() {
        let p = params(3, 3, 2.0, 20.0, 1.0);
        for i in 1..=3 {
            let v = greedy_outage_lemma2(i, &p).unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn single_pair_t3_limits() {
        // with eps1 huge every Bessel term vanishes and only k = 0 remains: n * 1/n
        let p = AnalyticParams::new(4, 1, Thresholds::from_eps(1.0, 1e5));
        for n in 1..=4 {
            close(greedy_single_pair_t3(n, &p).unwrap(), 1.0, 1e-12);
        }
        let p = params(5, 1, 2.0, 25.0, 0.5);
        for n in 1..=5 {
            let v = greedy_single_pair_t3(n, &p).unwrap();
            assert!((0.0..=1.0).contains(&v));
        }
        let assembled = greedy_single_pair_outage(&p).unwrap();
        assert!((assembled - greedy_outage_lemma2(1, &p).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn outages_fall_with_power() {
        for big_m in [1, 2, 3, 6] {
            let mut prev = [f64::INFINITY; 4];
            for k in 0..40 {
                let p = params(big_m, 1, 2.0, 10.0 + 50.0 * k as f64 / 39.0, 1.0);
                let now = [
                    theorem1_maxmin_outage(&p).unwrap(),
                    conventional_maxmin_outage(&p).unwrap(),
                    approach1_outage_exact(&p).unwrap(),
                    greedy_outage_lemma2(1, &p).unwrap(),
                ];
                for (a, b) in now.iter().zip(prev) {
                    // alternating sums carry an absolute floor near 1e-14
                    assert!(*a <= b * (1.0 + 1e-9) + 1e-13 && (0.0..=1.0).contains(a), "M={big_m} k={k} {now:?} {prev:?}");
                }
                prev = now;
            }
        }
    }

    #[test]
    fn cancellation_guard() {
        let p = params(21, 1, 2.0, 30.0, 1.0);
        assert!(matches!(theorem1_maxmin_outage(&p), Err(Error::CancellationGuard { pairs: 21, cap: 20 })));
        assert!(matches!(theorem1_maxmin_outage(&params(3, 2, 2.0, 30.0, 1.0)), Err(Error::Config(_))));
    }

    #[test]
    fn slope_fits() {
        let pts: Vec<(f64, f64)> = (0..10).map(|k| 10f64.powf(2.0 + 0.3 * k as f64)).map(|p| (p, 3.0 * p.powf(-2.5))).collect();
        assert!((fit_diversity_slope(&pts).unwrap() - 2.5).abs() < 1e-9);
        let pts: Vec<(f64, f64)> = (0..21)
            .map(|k| 10f64.powf(4.0 + 0.1 * k as f64))
            .map(|p| (p, 1e3 * p.powf(-2.0) * p.ln()))
            .collect();
        // a growing log factor flattens the curve, a decaying one steepens it
        let d = fit_diversity_slope(&pts).unwrap();
        assert!(d > 2.0 - 0.5 && d < 2.0, "{d}");
        let steeper: Vec<(f64, f64)> = pts.iter().map(|&(p, _)| (p, 1e3 * p.powf(-2.0) / p.ln())).collect();
        let d = fit_diversity_slope(&steeper).unwrap();
        assert!(d > 2.0 && d < 2.0 + 0.5, "{d}");
        assert!(matches!(fit_diversity_slope(&pts[..3]), Err(Error::Fit(3))));
        assert!(fit_diversity_slope(&[(2.0, 0.1), (1.0, 0.2), (3.0, 0.01), (4.0, 0.001)]).is_err());
    }

    #[test]
    fn theorem1_slope_window() {
        for (big_m, want, tol) in [(2, 1.5, 0.2), (3, 2.0, 0.25)] {
            let pts: Vec<(f64, f64)> = (0..=80)
                .map(|k| 10.0 + k as f64)
                .map(|db| (db_to_linear(db), theorem1_maxmin_outage(&params(big_m, 1, 2.0, db, 1.0)).unwrap()))
                .collect();
            let d = fit_diversity_in_window(&pts, 1e-6, 1e-3).unwrap();
            assert!((d - want).abs() <= tol, "M={big_m}: {d}");
        }
    }
}
