//! Runs every scheduling policy on the same channel draw.

use swipt_sched::model::{SystemConfig, compute_thresholds, destination_outage, sample_channels};
use swipt_sched::rng::{RandomStream, StreamPurpose};
use swipt_sched::schedule::{ScheduleDecision, Scheduler, Scheme, decode_set};

fn main() -> swipt_sched::Result<()> {
    let single = SystemConfig::new(6, 1, 2.0, 1.0, 1.0).with_power_db(20.0);
    let multi = SystemConfig { num_scheduled: 3, ..single };
    let thr = compute_thresholds(&single);

    let mut rng = RandomStream::derive(42, StreamPurpose::Channels, 0);
    let ch = sample_channels(&single, &mut rng);
    for (i, (h, g)) in ch.src_relay.iter().zip(&ch.relay_dst).enumerate() {
        println!("pair {i}: |h|^2 = {h:.4}, |g|^2 = {g:.4}");
    }
    println!("decode set: {:?}\n", decode_set(&ch, &thr));

    let runs = [
        (Scheme::MaxMin, single),
        (Scheme::Approach1, single),
        (Scheme::ConventionalMaxMin, single),
        (Scheme::Exhaustive, multi),
        (Scheme::Greedy, multi),
        (Scheme::Random, multi),
    ];
    for (scheme, cfg) in runs {
        let mut sched = Scheduler::new(scheme, &cfg, &thr)?;
        let mut out = ScheduleDecision::default();
        let mut policy_rng = RandomStream::derive(42, StreamPurpose::Policy, 0);
        sched.schedule(&ch, &mut policy_rng, &mut out)?;
        let served = out
            .destinations
            .iter()
            .zip(&out.dest_power)
            .filter(|&(&j, &p)| !destination_outage(p, ch.relay_dst[j], &cfg))
            .count();
        println!(
            "{scheme:<12} m={} sources {:?} destinations {:?} served {served}/{}",
            cfg.num_scheduled,
            out.sources,
            out.destinations,
            cfg.num_scheduled
        );
    }
    Ok(())
}
