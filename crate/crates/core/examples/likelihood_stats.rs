//! Binomial likelihood, the MLE, minimum NLL, and the NLL = KL + H split.
//!
//!     cargo run --release --example likelihood_stats

use entlab::lshstats::{self, BinomialModel};

fn main() -> entlab::Result<()> {
    let (n, k) = (2000, 500);
    let mle = lshstats::mle_theta(n, k)?;
    println!("mle θ = {mle}, min NLL = {:.4} bits", lshstats::min_nll(n, k)?);

    println!("\n  θ      -log2 f'(k; θ)");
    for theta in [0.15, 0.2, 0.25, 0.3, 0.35] {
        let m = BinomialModel::new(n, theta)?;
        let bits = -lshstats::ln_sequence_likelihood(&m, k)? / std::f64::consts::LN_2;
        println!("  {theta:<5}  {bits:10.3}");
    }

    // Ratio of the binomial pmf to one sequence's likelihood: C(n, k) at θ = θ0.
    println!("\nC(10, 4) via the density ratio: {}", lshstats::density_ratio(10, 4, 0.3, 0.3)?);

    println!("\nexpected NLL under a misspecified θ (n = 50, θ0 = 0.25):");
    for theta in [0.25, 0.3, 0.4] {
        let c = lshstats::nll_decomposition_check(50, 0.25, theta, 20_000, 1)?;
        println!(
            "  θ = {theta}: empirical {:.4}  KL {:.4} + H {:.4} = {:.4}",
            c.empirical, c.kl, c.entropy, c.analytic
        );
    }
    Ok(())
}
