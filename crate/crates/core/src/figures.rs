//! Desk-scale configurations for the seven evaluation figures, and gnuplot
//! scripts that draw them from the CSV output.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{Placement, SystemConfig};
use crate::montecarlo::{McConfig, SweepRecord, sweep};
use crate::schedule::Scheme;

pub const DEFAULT_GRID: (f64, f64, f64) = (20.0, 50.0, 2.5);

/// Radius 2 m (a 4 m diameter disk), path-loss exponent 2.
pub const PAPER_DISK: Placement = Placement::DiskPathLoss {
    radius: 2.0,
    exponent: 2.0,
};

/// One group of curves sharing a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub cfg: SystemConfig,
    pub schemes: Vec<Scheme>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub title: &'static str,
    pub series: Vec<Series>,
    /// Draw `c P^{-(M+1)/2}` guide lines next to each max-min curve.
    pub reference_slopes: bool,
}

fn cfg(big_m: usize, m: usize, rate: f64, eta: f64) -> SystemConfig {
    SystemConfig::new(big_m, m, rate, eta, 1.0)
}

fn series(cfg: SystemConfig, schemes: &[Scheme]) -> Series {
    Series {
        cfg,
        schemes: schemes.to_vec(),
    }
}

/// Configuration of figure `id` (1 to 7).
pub fn figure(id: u8) -> Result<FigureSpec> {
    use Scheme::*;
    let spec = match id {
        1 => FigureSpec {
            id,
            title: "Closed forms vs simulation, m = 1, R = 4, eta = 1",
            series: (1..=3).map(|big_m| series(cfg(big_m, 1, 4.0, 1.0), &[MaxMin, Approach1, Greedy])).collect(),
            reference_slopes: false,
        },
        2 => FigureSpec {
            id,
            title: "Scheduling schemes, M = 4, m = 1, R = 2, eta = 1",
            series: vec![series(cfg(4, 1, 2.0, 1.0), &[MaxMin, Approach1, Greedy, Random])],
            reference_slopes: false,
        },
        3 => FigureSpec {
            id,
            title: "Max-min diversity, m = 1, R = 2, eta = 1",
            series: (2..=5).map(|big_m| series(cfg(big_m, 1, 2.0, 1.0), &[MaxMin])).collect(),
            reference_slopes: true,
        },
        4 => FigureSpec {
            id,
            title: "Multi-pair scheduling, M = 10, m = 2, R = 2, eta = 1",
            series: vec![
                series(cfg(10, 2, 2.0, 1.0), &[Greedy, Exhaustive]),
                series(cfg(10, 1, 2.0, 1.0), &[MaxMin]),
            ],
            reference_slopes: false,
        },
        5 => FigureSpec {
            id,
            title: "Greedy per-rank outage, M = 6, m = 3, R = 2, eta = 1",
            series: vec![series(cfg(6, 3, 2.0, 1.0), &[Greedy])],
            reference_slopes: false,
        },
        6 => FigureSpec {
            id,
            title: "Disk placement, M = 6, m = 1, R = 2, eta = 0.5",
            series: vec![series(
                cfg(6, 1, 2.0, 0.5).with_placement(PAPER_DISK),
                &[MaxMin, Approach1, Greedy, Random],
            )],
            reference_slopes: false,
        },
        7 => FigureSpec {
            id,
            title: "Disk placement, M = 6, m = 3, R = 2, eta = 0.5",
            series: vec![
                series(cfg(6, 3, 2.0, 0.5).with_placement(PAPER_DISK), &[Greedy, Exhaustive, Random]),
                series(cfg(6, 1, 2.0, 0.5).with_placement(PAPER_DISK), &[MaxMin]),
            ],
            reference_slopes: false,
        },
        _ => return Err(Error::config(format!("figure id {id} outside 1..=7"))),
    };
    Ok(spec)
}

/// Runs every series of `spec` over `grid`.
pub fn run_figure(spec: &FigureSpec, grid: &[f64], mc: &McConfig) -> Result<Vec<SweepRecord>> {
    let mut rows = Vec::new();
    for s in &spec.series {
        rows.extend(sweep(&s.cfg, grid, &s.schemes, mc)?);
    }
    Ok(rows)
}

/// Gnuplot script plotting the CSV at `csv_path`.
pub fn gnuplot_script(spec: &FigureSpec, rows: &[SweepRecord], csv_path: &str) -> String {
    let mut keys: Vec<(String, usize, usize, usize)> = Vec::new();
    for r in rows {
        let key = (r.scheme.clone(), r.num_pairs, r.num_scheduled, r.user_rank);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "# Figure {}: {}", spec.id, spec.title);
    out.push_str("set datafile separator ','\nset logscale y\nset format y '10^{%L}'\n");
    out.push_str("set xlabel 'SNR (dB)'\nset ylabel 'Outage probability'\nset key bottom left\n");
    let _ = writeln!(out, "set title '{}'", spec.title);

    let mut plots = Vec::new();
    for (idx, (scheme, big_m, m, rank)) in keys.iter().enumerate() {
        let filter = format!("(strcol(1) eq '{scheme}' && $2 == {big_m} && $3 == {m} && $7 == {rank}");
        let label = if *m > 1 {
            format!("{scheme} M={big_m} rank {rank}")
        } else {
            format!("{scheme} M={big_m}")
        };
        let color = idx + 1;
        plots.push(format!(
            "'{csv_path}' skip 1 using 6:({filter}) ? $9 : 1/0) with points lc {color} pt {pt} title '{label} (sim)'",
            pt = 1 + idx % 12,
        ));
        let has_analytic = rows.iter().any(|r| {
            &r.scheme == scheme && r.num_pairs == *big_m && r.user_rank == *rank && r.analytic_po.is_some()
        });
        if has_analytic {
            plots.push(format!(
                "'{csv_path}' skip 1 using 6:({filter}) ? $8 : 1/0) with lines lc {color} title '{label} (analysis)'"
            ));
        }
    }
    if spec.reference_slopes {
        for s in &spec.series {
            if let Some((snr_db, c)) = reference_anchor(s, rows) {
                let big_m = s.cfg.num_pairs;
                let d = (big_m + 1) as f64 / 2.0;
                plots.push(format!(
                    "{c:e} * 10**(-{d} * (x - {snr_db}) / 10) with lines dt 2 lc rgb 'gray' title 'slope (M+1)/2, M={big_m}'"
                ));
            }
        }
    }
    let _ = writeln!(out, "plot \\\n    {}", plots.join(", \\\n    "));
    out
}

/// Anchors a reference line on the last analytic point of a max-min series.
fn reference_anchor(s: &Series, rows: &[SweepRecord]) -> Option<(f64, f64)> {
    let last = rows
        .iter()
        .filter(|r| r.scheme == Scheme::MaxMin.name() && r.num_pairs == s.cfg.num_pairs)
        .rfind(|r| r.analytic_po.is_some_and(|p| p > 0.0))?;
    Some((last.snr_db, last.analytic_po?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ids_resolve() {
        for id in 1..=7 {
            let spec = figure(id).unwrap();
            for s in &spec.series {
                s.cfg.validate().unwrap();
            }
        }
        assert!(figure(0).is_err());
        assert!(figure(8).is_err());
    }

    #[test]
    fn script_mentions_every_curve() {
        let spec = figure(3).unwrap();
        let rows = run_figure(&spec, &[20.0, 30.0], &McConfig::new(Scheme::MaxMin, 2000, 1)).unwrap();
        let script = gnuplot_script(&spec, &rows, "fig3.csv");
        for big_m in 2..=5 {
            assert!(script.contains(&format!("maxmin M={big_m} (analysis)")));
            assert!(script.contains(&format!("slope (M+1)/2, M={big_m}")));
        }
    }
}
