//! A cohort of synthetic pairs: fraction converged per step, plus CSV/JSON.
//!
//!     cargo run --release --example cohort_convergence [out_dir]

use entlab::labs::{self, CohortSpec};

fn main() -> entlab::Result<()> {
    let spec = CohortSpec {
        pair_count: 40,
        ..CohortSpec::default()
    };
    let result = labs::run_cohort(&spec)?;
    println!("step  converged  middle band");
    for s in &result.summary.steps {
        println!("{:>4}  {:>9.3}  {:>11.3}", s.step, s.converged, s.middle_band);
    }
    if let Some(dir) = std::env::args().nth(1).map(std::path::PathBuf::from) {
        std::fs::create_dir_all(&dir)?;
        result.write_csv(std::fs::File::create(dir.join("trajectories.csv"))?)?;
        std::fs::write(dir.join("summary.json"), result.summary_json())?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
