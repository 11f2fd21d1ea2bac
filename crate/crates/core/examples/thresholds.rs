//! Decoding and harvesting thresholds, and the power split a relay applies to
//! one incoming signal.

use swipt_sched::model::{SystemConfig, compute_thresholds, harvested_power, optimal_theta};

fn main() {
    let cfg = SystemConfig::new(1, 1, 2.0, 0.5, 1.0).with_power_db(30.0);
    let thr = compute_thresholds(&cfg);
    println!("target SNR {:.1}, P = {:.0}", cfg.snr_target(), cfg.tx_power);
    println!("eps = {:.4e}  eps1 = {:.4e}  eps0 = {:.4e}", thr.eps, thr.eps1, thr.eps0);

    println!("{:>10} {:>8} {:>12}", "|h|^2", "theta", "harvested");
    for h in [0.5 * thr.eps, thr.eps, 2.0 * thr.eps, 0.1, 1.0, 3.0] {
        println!(
            "{h:>10.4e} {:>8.4} {:>12.4e}",
            optimal_theta(h, &thr),
            harvested_power(h, &cfg, &thr)
        );
    }
}
