//! Variational adiabatic-gauge-potential coefficients.
//!
//! Both gauge potentials are uniform single-site σʸ terms, `A_λ = α Σσʸ` and
//! `A_γ = β Σσʸ`. Minimising the two-parameter action gives closed forms for
//! α and β; the combined counter-diabatic field is `Y = λ̇α + γ̇β`.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::schedules::{ScheduleSpec, ScheduleValues};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeCoefficients {
    pub alpha: f64,
    pub beta: f64,
    /// Common prefactor (p-spin only; `NaN` for Landau–Zener).
    pub kappa: f64,
}

/// Time derivatives of α and β along a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeRates {
    pub alpha_dot: f64,
    pub beta_dot: f64,
}

/// `27N² − 66N + 40`, the three-body weight in the κ denominator.
fn three_body_weight(n: f64) -> f64 {
    27.0 * n * n - 66.0 * n + 40.0
}

/// p-spin (p = 3) optimum: `α = −κγ`, `β = κ(1−λ)λ` with
/// `κ = ½ N²(3N−2) / [(1−λ)²γ²N⁴ + λ²(27N²−66N+40)]`.
pub fn pspin_coefficients(lambda: f64, gamma: f64, n: usize) -> Result<GaugeCoefficients> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "p-spin gauge coefficients need N >= 2, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in [0, 1], got {lambda}"
        )));
    }
    let nf = n as f64;
    let n2 = nf * nf;
    let one_minus = 1.0 - lambda;
    let denom = one_minus * one_minus * gamma * gamma * n2 * n2 + lambda * lambda * three_body_weight(nf);
    if denom <= 0.0 {
        return Err(Error::Degenerate(format!(
            "p-spin gauge denominator vanishes at lambda={lambda}, gamma={gamma}"
        )));
    }
    let kappa = 0.5 * n2 * (3.0 * nf - 2.0) / denom;
    Ok(GaugeCoefficients {
        alpha: -kappa * gamma,
        beta: kappa * one_minus * lambda,
        kappa,
    })
}

/// Landau–Zener optimum for `H = −(1−λ)γσˣ − λhσᶻ`.
pub fn lz_coefficients(lambda: f64, gamma: f64, h: f64) -> Result<GaugeCoefficients> {
    let one_minus = 1.0 - lambda;
    let denom = lambda * lambda * h * h + gamma * gamma * one_minus * one_minus;
    if !(denom > 0.0) {
        return Err(Error::Degenerate(format!(
            "Landau-Zener gauge denominator vanishes at lambda={lambda}, gamma={gamma}, h={h}"
        )));
    }
    Ok(GaugeCoefficients {
        alpha: -0.5 * h * gamma / denom,
        beta: 0.5 * one_minus * lambda * h / denom,
        kappa: f64::NAN,
    })
}

pub fn coefficients(model: Model, lambda: f64, gamma: f64) -> Result<GaugeCoefficients> {
    match model {
        Model::PSpin { n } => pspin_coefficients(lambda, gamma, n),
        Model::LandauZener { h } => lz_coefficients(lambda, gamma, h),
    }
}

/// α̇ and β̇ by the chain rule through (λ, γ).
pub fn coefficient_rates(model: Model, s: &ScheduleValues) -> Result<GaugeRates> {
    let c = coefficients(model, s.lambda, s.gamma)?;
    let (l, ld, g, gd) = (s.lambda, s.lambda_dot, s.gamma, s.gamma_dot);
    let om = s.one_minus_lambda;
    match model {
        Model::PSpin { n } => {
            let nf = n as f64;
            let n4 = nf.powi(4);
            let denom = om * om * g * g * n4 + l * l * three_body_weight(nf);
            let denom_dot =
                n4 * (-2.0 * om * ld * g * g + 2.0 * om * om * g * gd) + 2.0 * l * ld * three_body_weight(nf);
            let kappa_dot = -c.kappa * denom_dot / denom;
            Ok(GaugeRates {
                alpha_dot: -kappa_dot * g - c.kappa * gd,
                beta_dot: kappa_dot * om * l + c.kappa * (1.0 - 2.0 * l) * ld,
            })
        }
        Model::LandauZener { h } => {
            let denom = l * l * h * h + g * g * om * om;
            let denom_dot = 2.0 * l * ld * h * h + 2.0 * g * gd * om * om - 2.0 * g * g * om * ld;
            Ok(GaugeRates {
                alpha_dot: -0.5 * h * (gd * denom - g * denom_dot) / (denom * denom),
                beta_dot: 0.5 * h * ((1.0 - 2.0 * l) * ld * denom - om * l * denom_dot) / (denom * denom),
            })
        }
    }
}

/// `Y(t) = λ̇α + γ̇β`, the coefficient of Σσʸ in the lab-frame CD Hamiltonian.
pub fn cd_y_coefficient(t: f64, spec: &ScheduleSpec, model: Model) -> Result<f64> {
    let s = spec.evaluate(t)?;
    y_from_values(model, &s)
}

pub(crate) fn y_from_values(model: Model, s: &ScheduleValues) -> Result<f64> {
    if s.lambda_dot == 0.0 && s.gamma_dot == 0.0 {
        return Ok(0.0);
    }
    let c = coefficients(model, s.lambda, s.gamma)?;
    Ok(s.lambda_dot * c.alpha + s.gamma_dot * c.beta)
}

/// `Ẏ = λ̈α + λ̇α̇ + γ̈β + γ̇β̇` from the analytic rates.
pub fn cd_y_rate(t: f64, spec: &ScheduleSpec, model: Model) -> Result<f64> {
    let s = spec.evaluate(t)?;
    y_rate_from_values(model, &s)
}

pub(crate) fn y_rate_from_values(model: Model, s: &ScheduleValues) -> Result<f64> {
    if s.lambda_dot == 0.0 && s.gamma_dot == 0.0 && s.lambda_ddot == 0.0 && s.gamma_ddot == 0.0 {
        return Ok(0.0);
    }
    let c = coefficients(model, s.lambda, s.gamma)?;
    let r = coefficient_rates(model, s)?;
    Ok(s.lambda_ddot * c.alpha + s.lambda_dot * r.alpha_dot + s.gamma_ddot * c.beta + s.gamma_dot * r.beta_dot)
}

/// Ẏ by Richardson-extrapolated central differences of Y(t), steps
/// `1e-5 τ` and `0.5e-5 τ`. Needs `t` at least `1e-5 τ` away from both ends.
pub fn cd_y_rate_finite_difference(t: f64, spec: &ScheduleSpec, model: Model) -> Result<f64> {
    let tau = spec.total_time();
    let h = 1e-5 * tau;
    if t - h < 0.0 || t + h > tau {
        return Err(Error::InvalidParameter(format!(
            "finite-difference rate needs an interior time, got t={t}"
        )));
    }
    let central = |step: f64| -> Result<f64> {
        Ok((cd_y_coefficient(t + step, spec, model)? - cd_y_coefficient(t - step, spec, model)?) / (2.0 * step))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pspin_at_lambda_zero() {
        // κ = 0.5·16·10 / (0.01·256)
        let c = pspin_coefficients(0.0, 0.1, 4).unwrap();
        assert_relative_eq!(c.kappa, 31.25, max_relative = 1e-13);
        assert_relative_eq!(c.alpha, -3.125, max_relative = 1e-13);
        assert_eq!(c.beta, 0.0);
    }

    #[test]
    fn pspin_at_lambda_one() {
        for gamma in [0.1, 0.7, 3.0] {
            let c = pspin_coefficients(1.0, gamma, 2).unwrap();
            assert_relative_eq!(c.kappa, 0.5, max_relative = 1e-14);
            assert_eq!(c.beta, 0.0);
        }
    }

    #[test]
    fn pspin_rejects_small_n() {
        assert!(pspin_coefficients(0.5, 0.5, 1).is_err());
        assert!(pspin_coefficients(1.5, 0.5, 3).is_err());
    }

    #[test]
    fn lz_values() {
        let c = lz_coefficients(0.0, 1.0, 0.1).unwrap();
        assert_relative_eq!(c.alpha, -0.05, max_relative = 1e-14);
        assert_eq!(c.beta, 0.0);

        let c = lz_coefficients(0.5, 0.5, 0.1).unwrap();
        assert_relative_eq!(c.alpha, -0.025 / 0.065, max_relative = 1e-13);
        assert_relative_eq!(c.beta, 0.0125 / 0.065, max_relative = 1e-13);

        assert_eq!(lz_coefficients(1.0, 0.4, 0.1).unwrap().beta, 0.0);
        assert!(matches!(lz_coefficients(1.0, 0.4, 0.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn y_vanishes_at_ends() {
        let spec = ScheduleSpec::linked_pspin(5.0, 0.1).unwrap();
        let m = Model::PSpin { n: 6 };
        assert_eq!(cd_y_coefficient(0.0, &spec, m).unwrap(), 0.0);
        assert_eq!(cd_y_coefficient(5.0, &spec, m).unwrap(), 0.0);
    }

    #[test]
    fn constant_gamma_y_is_lambda_dot_alpha() {
        let spec = ScheduleSpec::constant(3.0, 0.1).unwrap();
        let m = Model::PSpin { n: 5 };
        for t in [0.3, 1.1, 2.9] {
            let s = spec.evaluate(t).unwrap();
            let c = pspin_coefficients(s.lambda, s.gamma, 5).unwrap();
            assert_eq!(cd_y_coefficient(t, &spec, m).unwrap(), s.lambda_dot * c.alpha);
        }
    }

    #[test]
    fn analytic_rate_matches_richardson() {
        let cases = [
            (ScheduleSpec::linked_pspin(10.0, 0.1).unwrap(), Model::PSpin { n: 30 }),
            (ScheduleSpec::constant(10.0, 0.1).unwrap(), Model::PSpin { n: 4 }),
            (ScheduleSpec::linked_lz(1.0).unwrap(), Model::LandauZener { h: 0.1 }),
            (ScheduleSpec::constant(1.0, 1.0).unwrap(), Model::LandauZener { h: 0.1 }),
        ];
        for (spec, model) in cases {
            let tau = spec.total_time();
            for k in 1..20 {
                let t = tau * k as f64 / 20.0;
                let exact = cd_y_rate(t, &spec, model).unwrap();
                let fd = cd_y_rate_finite_difference(t, &spec, model).unwrap();
                let scale = exact.abs().max(1e-3 / tau);
                assert!(
                    (exact - fd).abs() < 1e-6 * scale,
                    "{model:?} t={t}: analytic {exact} vs fd {fd}"
                );
            }
        }
    }

    #[test]
    fn kappa_is_positive() {
        for n in [2, 3, 10, 100] {
            for k in 0..=10 {
                let l = k as f64 / 10.0;
                assert!(pspin_coefficients(l, 0.3, n).unwrap().kappa > 0.0);
            }
        }
    }
}
