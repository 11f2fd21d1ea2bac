//! Compares i.i.d. Rayleigh fading with users dropped on a disk around the relay.

use swipt_sched::figures::PAPER_DISK;
use swipt_sched::model::SystemConfig;
use swipt_sched::montecarlo::{McConfig, estimate_outage};
use swipt_sched::schedule::Scheme;

fn main() -> swipt_sched::Result<()> {
    let base = SystemConfig::new(6, 1, 2.0, 0.5, 1.0);
    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "dB", "iid maxmin", "disk maxmin", "iid greedy", "disk greedy");
    for db in [20.0, 25.0, 30.0, 35.0] {
        let iid = base.with_power_db(db);
        let disk = iid.with_placement(PAPER_DISK);
        let mut row = Vec::new();
        for scheme in [Scheme::MaxMin, Scheme::Greedy] {
            let mc = McConfig::new(scheme, 200_000, 3);
            row.push(estimate_outage(&iid, &mc)?.p_hat);
            row.push(estimate_outage(&disk, &mc)?.p_hat);
        }
        println!("{db:>5} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}", row[0], row[1], row[2], row[3]);
    }
    Ok(())
}
