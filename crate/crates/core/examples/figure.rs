//! Regenerates one evaluation figure as CSV plus a gnuplot script.
//!
//! Usage: `cargo run --release --example figure -- [id] [trials]`

use swipt_sched::cli::write_records;
use swipt_sched::figures::{figure, gnuplot_script, run_figure};
use swipt_sched::montecarlo::McConfig;
use swipt_sched::schedule::Scheme;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id: u8 = args.next().map_or(Ok(2), |s| s.parse())?;
    let trials: u64 = args.next().map_or(Ok(200_000), |s| s.parse())?;

    let spec = figure(id)?;
    let grid: Vec<f64> = (0..=12).map(|k| 20.0 + 2.5 * k as f64).collect();
    let rows = run_figure(&spec, &grid, &McConfig::new(Scheme::MaxMin, trials, 2017))?;

    let dir = std::env::temp_dir();
    let csv_path = dir.join(format!("fig{id}.csv"));
    write_records(std::fs::File::create(&csv_path)?, &rows)?;
    let gp_path = csv_path.with_extension("gp");
    std::fs::write(&gp_path, gnuplot_script(&spec, &rows, csv_path.to_str().unwrap()))?;
    println!("{}: {} rows", spec.title, rows.len());
    println!("wrote {} and {}", csv_path.display(), gp_path.display());
    Ok(())
}
