//! Fits high-SNR diversity orders to the closed-form curves.

use swipt_sched::analytic::{analytic_curve, fit_diversity_in_window};
use swipt_sched::model::SystemConfig;
use swipt_sched::schedule::Scheme;

fn main() -> swipt_sched::Result<()> {
    let grid: Vec<f64> = (10..=90).map(f64::from).collect();
    println!("{:>3} {:>9} {:>10} {:>8} {:>13}", "M", "max-min", "approach1", "greedy", "conventional");
    for big_m in 1..=4 {
        let cfg = SystemConfig::new(big_m, 1, 2.0, 1.0, 1.0);
        let mut slopes = Vec::new();
        for scheme in [Scheme::MaxMin, Scheme::Approach1, Scheme::Greedy, Scheme::ConventionalMaxMin] {
            let curve = analytic_curve(scheme, &cfg, 1, &grid)?;
            slopes.push(fit_diversity_in_window(&curve, 1e-6, 1e-3)?);
        }
        println!(
            "{big_m:>3} {:>9.3} {:>10.3} {:>8.3} {:>13.3}",
            slopes[0], slopes[1], slopes[2], slopes[3]
        );
    }
    Ok(())
}
