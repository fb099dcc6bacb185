//! Annealing driving functions λ(t) and γ(t).
//!
//! λ(t) = sin²[(π/2) sin²(πt/2τ)] runs from 0 to 1 with vanishing first
//! derivative at both ends. The transverse-field strength γ(t) is either
//! constant, linked to λ as γ_init + λ (p-spin), or 1 − λ (Landau–Zener).
//! All derivatives are closed-form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack accepted beyond `[0, τ]` before a time is rejected.
pub const TIME_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMode {
    /// γ(t) = γ_init.
    Constant,
    /// γ(t) = γ_init + λ(t).
    LinkedPSpin,
    /// γ(t) = 1 − λ(t).
    LinkedLz,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleSpec {
    total_time: f64,
    gamma_mode: GammaMode,
    gamma_init: f64,
}

/// λ, γ and their first two time derivatives at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleValues {
    pub lambda: f64,
    /// `1 − λ`, evaluated without cancellation near t = τ.
    pub one_minus_lambda: f64,
    pub lambda_dot: f64,
    pub lambda_ddot: f64,
    pub gamma: f64,
    pub gamma_dot: f64,
    pub gamma_ddot: f64,
}

impl ScheduleSpec {
    pub fn new(total_time: f64, gamma_mode: GammaMode, gamma_init: f64) -> Result<Self> {
        if !(total_time.is_finite() && total_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "total time must be positive and finite, got {total_time}"
            )));
        }
        if !gamma_init.is_finite() {
            return Err(Error::InvalidParameter("gamma_init must be finite".into()));
        }
        if matches!(gamma_mode, GammaMode::Constant | GammaMode::LinkedPSpin) && gamma_init == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma_init must be nonzero for {gamma_mode:?}"
            )));
        }
        Ok(Self {
            total_time,
            gamma_mode,
            gamma_init,
        })
    }

    pub fn constant(total_time: f64, gamma_init: f64) -> Result<Self> {
        Self::new(total_time, GammaMode::Constant, gamma_init)
    }

    pub fn linked_pspin(total_time: f64, gamma_init: f64) -> Result<Self> {
        Self::new(total_time, GammaMode::LinkedPSpin, gamma_init)
    }

    pub fn linked_lz(total_time: f64) -> Result<Self> {
        Self::new(total_time, GammaMode::LinkedLz, 1.0)
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn gamma_mode(&self) -> GammaMode {
        self.gamma_mode
    }

    pub fn gamma_init(&self) -> f64 {
        self.gamma_init
    }

    /// Same schedule with a different γ mode (γ_init kept).
    pub fn with_gamma_mode(&self, mode: GammaMode) -> Result<Self> {
        Self::new(self.total_time, mode, self.gamma_init)
    }

    /// Validates `t` and clamps round-off overshoot back into `[0, τ]`.
    pub fn clamp_time(&self, t: f64) -> Result<f64> {
        let slack = TIME_SLACK * self.total_time;
        if !t.is_finite() || t < -slack || t > self.total_time + slack {
            return Err(Error::TimeOutOfRange {
                t,
                tau: self.total_time,
            });
        }
        Ok(t.clamp(0.0, self.total_time))
    }

    pub fn lambda(&self, t: f64) -> Result<f64> {
        Ok(self.nested_angles(self.clamp_time(t)?).lambda)
    }

    pub fn lambda_dot(&self, t: f64) -> Result<f64> {
        Ok(self.nested_angles(self.clamp_time(t)?).lambda_dot)
    }

    pub fn lambda_ddot(&self, t: f64) -> Result<f64> {
        Ok(self.nested_angles(self.clamp_time(t)?).lambda_ddot)
    }

    pub fn gamma(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)?.gamma)
    }

    pub fn gamma_dot(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)?.gamma_dot)
    }

    pub fn gamma_ddot(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)?.gamma_ddot)
    }

    /// Everything at once; this is what the Hamiltonian builders use.
    pub fn evaluate(&self, t: f64) -> Result<ScheduleValues> {
        let l = self.nested_angles(self.clamp_time(t)?);
        let (gamma, gamma_dot, gamma_ddot) = match self.gamma_mode {
            GammaMode::Constant => (self.gamma_init, 0.0, 0.0),
            GammaMode::LinkedPSpin => (self.gamma_init + l.lambda, l.lambda_dot, l.lambda_ddot),
            GammaMode::LinkedLz => (l.one_minus_lambda, -l.lambda_dot, -l.lambda_ddot),
        };
        Ok(ScheduleValues {
            lambda: l.lambda,
            one_minus_lambda: l.one_minus_lambda,
            lambda_dot: l.lambda_dot,
            lambda_ddot: l.lambda_ddot,
            gamma,
            gamma_dot,
            gamma_ddot,
        })
    }

    /// Past τ/2 the mirror identity `λ(t) = 1 − λ(τ − t)` keeps the small
    /// quantities near the end (1 − λ, λ̇, λ̈) accurate to full relative precision.
    fn nested_angles(&self, t: f64) -> LambdaParts {
        let tau = self.total_time;
        if t > 0.5 * tau {
            let m = self.half_range_angles(tau - t);
            return LambdaParts {
                lambda: 1.0 - m.lambda,
                one_minus_lambda: m.lambda,
                lambda_dot: m.lambda_dot,
                lambda_ddot: -m.lambda_ddot,
            };
        }
        self.half_range_angles(t)
    }

    fn half_range_angles(&self, t: f64) -> LambdaParts {
        let tau = self.total_time;
        // v = πt/2τ, u = (π/2) sin²v, λ = sin²u
        let v = PI * t / (2.0 * tau);
        let v_dot = PI / (2.0 * tau);
        let (sv, cv) = v.sin_cos();
        let u = 0.5 * PI * sv * sv;
        let (su, cu) = u.sin_cos();
        let lambda = su * su;

        // λ is quartic in t at the start, so both derivatives vanish
        if t == 0.0 {
            return LambdaParts {
                lambda,
                one_minus_lambda: 1.0 - lambda,
                lambda_dot: 0.0,
                lambda_ddot: 0.0,
            };
        }

        let sin2v = 2.0 * sv * cv;
        let cos2v = cv * cv - sv * sv;
        let sin2u = 2.0 * su * cu;
        let cos2u = cu * cu - su * su;
        let u_dot = 0.5 * PI * sin2v * v_dot;
        let u_ddot = PI * cos2v * v_dot * v_dot;
        let lambda_dot = sin2u * u_dot;
        let lambda_ddot = 2.0 * cos2u * u_dot * u_dot + sin2u * u_ddot;
        LambdaParts {
            lambda,
            one_minus_lambda: 1.0 - lambda,
            lambda_dot,
            lambda_ddot,
        }
    }
}

struct LambdaParts {
    lambda: f64,
    one_minus_lambda: f64,
    lambda_dot: f64,
    lambda_ddot: f64,
}
