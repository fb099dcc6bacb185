//! Annealing schedule, gauge coefficients and the counter-diabatic field
//! along a p-spin anneal, followed by the large-N scaling of κ.
//!
//! `cargo run --example schedule_and_coefficients -- [N] [tau]`

use cdqa::gauge::{cd_y_coefficient, pspin_coefficients};
use cdqa::{GammaMode, Model, ScheduleSpec};

fn main() -> cdqa::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(20, |s| s.parse().expect("N must be an integer"));
    let tau: f64 = args.next().map_or(10.0, |s| s.parse().expect("tau must be a number"));
    let model = Model::PSpin { n };
    let spec = ScheduleSpec::new(tau, GammaMode::LinkedPSpin, 0.1)?;

    println!("N = {n}, tau = {tau}, linked gamma");
    println!("{:>6} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12}", "t/tau", "lambda", "dlambda", "gamma", "alpha", "beta", "Y");
    for k in 0..=10 {
        let t = tau * k as f64 / 10.0;
        let s = spec.evaluate(t)?;
        let c = pspin_coefficients(s.lambda, s.gamma, n)?;
        let y = cd_y_coefficient(t, &spec, model)?;
        println!(
            "{:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>12.5e} {:>12.5e} {:>12.5e}",
            k as f64 / 10.0,
            s.lambda,
            s.lambda_dot,
            s.gamma,
            c.alpha,
            c.beta,
            y
        );
    }

    println!("\nkappa(lambda = 0.5, gamma = 0.6) against N");
    let mut previous: Option<f64> = None;
    for n in [25, 50, 100, 200, 400] {
        let kappa = pspin_coefficients(0.5, 0.6, n)?.kappa;
        match previous {
            Some(p) => println!("N = {n:>3}: kappa = {kappa:.6e}, ratio to N/2 = {:.4}", kappa / p),
            None => println!("N = {n:>3}: kappa = {kappa:.6e}"),
        }
        previous = Some(kappa);
    }
    Ok(())
}
