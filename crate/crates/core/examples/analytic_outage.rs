//! Closed-form outage probabilities across SNR.

use swipt_sched::analytic::{
    AnalyticParams, approach1_outage_asymptotic, approach1_outage_exact, conventional_maxmin_outage,
    greedy_outage_lemma2, theorem1_maxmin_outage,
};
use swipt_sched::model::SystemConfig;

fn main() -> swipt_sched::Result<()> {
    println!(
        "{:>6} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "dB", "max-min", "approach1", "asymptotic", "greedy", "conventional"
    );
    for db in (20..=50).step_by(5) {
        let cfg = SystemConfig::new(3, 1, 2.0, 1.0, 1.0).with_power_db(db as f64);
        let p = AnalyticParams::from_config(&cfg);
        println!(
            "{db:>6} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
            theorem1_maxmin_outage(&p)?,
            approach1_outage_exact(&p)?,
            approach1_outage_asymptotic(&p)?,
            greedy_outage_lemma2(1, &p)?,
            conventional_maxmin_outage(&p)?,
        );
    }

    println!("\ngreedy with M = 6, m = 3 at 15 dB:");
    let cfg = SystemConfig::new(6, 3, 2.0, 1.0, 1.0).with_power_db(15.0);
    let p = AnalyticParams::from_config(&cfg);
    for rank in 1..=3 {
        println!("  rank {rank}: {:.6e}", greedy_outage_lemma2(rank, &p)?);
    }
    Ok(())
}
