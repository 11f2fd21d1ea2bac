//! Runs the cheap deterministic checks of the validation suite.
//!
//! The statistical checks take minutes at full size; `swipt validate --quick`
//! runs all of them with fewer trials.

use swipt_sched::validation::{CRITERIA, ValidationOptions, run_criterion};

fn main() {
    let opts = ValidationOptions::quick();
    for (id, title) in CRITERIA {
        if matches!(id, 4 | 6 | 8 | 9) {
            println!("{}", run_criterion(id, &opts));
        } else {
            println!("skip [{id:>2}] {title}");
        }
    }
}
