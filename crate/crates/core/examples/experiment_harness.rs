//! The experiment harness from code: configure a spec the way the CLI does,
//! run the chains in parallel and write per-chain CSVs, the aggregate CSV and
//! the manifest.
//!
//! `cargo run --release --example experiment_harness -- [out_dir]`

use std::path::{Path, PathBuf};

use frustrated_anneal::harness::{run_experiment, ExperimentResult, ExperimentSpec};
use frustrated_anneal::Result;

pub fn run_example(out: &Path) -> Result<ExperimentResult> {
    let mut spec = ExperimentSpec::from_config_str(
        "method = sqa\nn_cuts = 2\nchains = 4\nsteps_per_window = 20\nseed = 11\n",
    )?;
    spec.set("points_per_decade", "20")?;
    spec.out = out.to_path_buf();
    run_experiment(&spec)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("frustrated-anneal-example"));
    let r = run_example(&out)?;
    let last = r.aggregate.last().expect("non-empty aggregate");
    println!(
        "{} chains of {} wrote {} ({} MCS each); final mean E {:.3} ± {:.3}",
        r.chains.len(),
        r.method,
        out.display(),
        r.total_mcs,
        last.mean_energy,
        last.stderr_energy
    );
    Ok(())
}
