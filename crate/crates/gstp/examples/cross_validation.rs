//! Seeded agreement table between the solvers and the DP table-size sweep.

use gstp::bench::{fit_scaling, run_bench, scaling_report, scaling_sweep, BenchConfig};

fn main() {
    let report = run_bench(&BenchConfig { count: 40, seed: 7, ..BenchConfig::default() }).unwrap();
    print!("{report}");
    let points = scaling_sweep(&[1, 2], &[1, 2, 3], 7, 1);
    print!("{}", scaling_report(&points, &fit_scaling(&points)));
}
