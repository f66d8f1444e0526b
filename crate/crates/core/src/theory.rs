//! Closed-form results for the fully connected model and the 1-D continuum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig9;

/// Mean of `log(1 + eps)` for `eps ~ U[0, 1]`.
pub const LOG_STEP_NOISE_MEAN: f64 = 2.0 * std::f64::consts::LN_2 - 1.0;

/// Critical conviction `e / 4`, where `log(lambda (1 + eps))` has zero mean.
pub fn lambda_critical() -> f64 {
    std::f64::consts::E / 4.0
}

/// Mean step `log(lambda) + 2 log 2 - 1` of the log-order random walk.
pub fn log_drift(lambda: f64) -> f64 {
    lambda.ln() + LOG_STEP_NOISE_MEAN
}

/// Mean number of steps between consecutive bounces of the log-order walk
/// off its reflecting boundary, `-log(lambda) / (log(lambda) - log(lambda_c))`.
pub fn return_time(lambda: f64) -> Result<f64> {
    let lc = lambda_critical();
    if !lambda.is_finite() || lambda <= lc || lambda >= 1.0 {
        return Err(Error::invalid(
            "lambda",
            format!("return time needs lambda in ({lc}, 1), got {lambda}"),
        ));
    }
    Ok(-lambda.ln() / (lambda.ln() - lc.ln()))
}

/// Which power of `lambda - lambda_c` enters the predicted order curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderCurve {
    /// `exp(-k |log lambda|^(3/2) (lambda - lambda_c)^(1/2))`, the form fitted
    /// against simulation data.
    #[default]
    Printed,
    /// `exp(-k |log lambda|^(3/2) (lambda - lambda_c)^(-1/2))`, what
    /// `S_a = k sqrt(T) log(lambda)` with `T ~ -log(lambda) / (lambda - lambda_c)` gives.
    Derived,
}

/// Predicted steady-state `|O_a|`; zero at or below the critical conviction.
pub fn predicted_order(lambda: f64, k: f64) -> Result<f64> {
    predicted_order_with(lambda, k, OrderCurve::Printed)
}

pub fn predicted_order_with(lambda: f64, k: f64, curve: OrderCurve) -> Result<f64> {
    if !k.is_finite() || k < 0.0 {
        return Err(Error::invalid("k", format!("{k} must be a non-negative number")));
    }
    if !lambda.is_finite() {
        return Err(Error::NonFinite(lambda));
    }
    let lc = lambda_critical();
    if lambda <= lc {
        return Ok(0.0);
    }
    let gap = match curve {
        OrderCurve::Printed => (lambda - lc).sqrt(),
        OrderCurve::Derived => 1.0 / (lambda - lc).sqrt(),
    };
    Ok((-k * lambda.ln().abs().powf(1.5) * gap).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVariant {
    /// `1 / (1 + lambda)`.
    #[default]
    Printed,
    /// `max(0, (1 - lambda) / lambda)`, solving `lambda (1 + r) > 1` for `r`.
    Derived,
}

/// Smallest interaction radius (relative to the half-width of a 1-D
/// continuum population) for which global consensus at an extreme is stable.
pub fn stability_min_range(lambda: f64, variant: StabilityVariant) -> Result<f64> {
    if !lambda.is_finite() || lambda <= 0.0 || lambda > 1.0 {
        return Err(Error::invalid("lambda", format!("{lambda} outside (0, 1]")));
    }
    Ok(match variant {
        StabilityVariant::Printed => 1.0 / (1.0 + lambda),
        StabilityVariant::Derived => ((1.0 - lambda) / lambda).max(0.0),
    })
}

/// `lambda,predicted_abs_O` rows over `lambdas`, which must be finite and
/// strictly increasing.
pub fn theory_csv(lambdas: &[f64], k: f64) -> Result<String> {
    if lambdas.is_empty() {
        return Err(Error::invalid("lambdas", "empty grid"));
    }
    if lambdas.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::invalid("lambdas", "values must be strictly increasing"));
    }
    let mut out = String::from("lambda,predicted_abs_O\n");
    for &l in lambdas {
        out.push_str(&format!("{},{}\n", sig9(l), sig9(predicted_order(l, k)?)));
    }
    Ok(out)
}
