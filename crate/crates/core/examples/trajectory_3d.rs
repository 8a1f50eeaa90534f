//! k = 3 trajectories, small enough to plot on the unit sphere.
//!
//!     cargo run --release --example trajectory_3d > traj.csv

fn main() -> entlab::Result<()> {
    let w = [0.9, -0.2, 0.4];
    let wp = [-0.3, 0.8, 0.5];
    let rows = entlab::labs::export_3d(&w, &wp, 5000, 60, 17)?;
    entlab::labs::write_3d_csv(&rows, std::io::stdout().lock())?;
    let last = rows.last().expect("t >= 1");
    eprintln!("final min ‖ĉ ∓ ĉ'‖² = {:.3e}", last.min_euclid_sq());
    Ok(())
}
