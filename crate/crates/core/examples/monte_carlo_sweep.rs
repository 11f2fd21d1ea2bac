//! Simulated outage over an SNR grid, written as CSV to stdout.

use swipt_sched::cli::write_records;
use swipt_sched::model::SystemConfig;
use swipt_sched::montecarlo::{McConfig, estimate_outage, sweep};
use swipt_sched::schedule::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SystemConfig::new(4, 1, 2.0, 1.0, 1.0).with_power_db(25.0);
    let mc = McConfig::new(Scheme::Approach1, 200_000, 1);
    let est = estimate_outage(&cfg, &mc)?;
    eprintln!(
        "approach1 at 25 dB: {:.4e} +/- {:.1e} ({} outages)",
        est.p_hat, est.stderr, est.outage_count
    );

    let grid = [20.0, 25.0, 30.0, 35.0];
    let schemes = [Scheme::MaxMin, Scheme::Approach1, Scheme::Greedy, Scheme::Random];
    let rows = sweep(&cfg, &grid, &schemes, &McConfig::new(Scheme::MaxMin, 100_000, 1))?;
    write_records(std::io::stdout().lock(), &rows)?;
    Ok(())
}
