//! Scalar opinion arithmetic.
//!
//! Every exchange produces a raw value that is clamped back into `[-1, 1]`.
//! The typed wrappers ([`Opinion`], [`Conviction`], [`NoiseDraw`]) check
//! their domain on construction; the engine uses the unchecked `f64`
//! kernels in this module directly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An opinion in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Opinion(f64);

impl Opinion {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite(value));
        }
        if !(-1.0..=1.0).contains(&value) {
            return Err(Error::invalid("opinion", format!("{value} outside [-1, 1]")));
        }
        Ok(Opinion(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::ops::Neg for Opinion {
    type Output = Opinion;

    fn neg(self) -> Opinion {
        Opinion(-self.0)
    }
}

/// Conviction `lambda` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Conviction(f64);

impl Conviction {
    pub fn new(lambda: f64) -> Result<Self> {
        unit_interval("lambda", lambda).map(Conviction)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// One annealed noise draw `epsilon` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseDraw(f64);

impl NoiseDraw {
    pub fn new(epsilon: f64) -> Result<Self> {
        unit_interval("epsilon", epsilon).map(NoiseDraw)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn unit_interval(key: &str, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(key, format!("{x} outside [0, 1]")));
    }
    Ok(x)
}

/// Which form of the mean-field map to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanFieldVariant {
    /// `box(lambda * (1 + eps) * O)`; the form whose logarithm is a random
    /// walk with step `log(lambda * (1 + eps))`.
    #[default]
    Multiplicative,
    /// `box(lambda * (1 + eps * O))`, kept for comparison.
    Printed,
}

/// Clamp a finite real into `[-1, 1]`.
pub fn box_opinion(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(clamp_unit(x))
}

#[inline]
pub(crate) fn clamp_unit(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

#[inline]
pub(crate) fn exchange(o_i: f64, o_j: f64, lambda: f64, eps: f64) -> f64 {
    clamp_unit(lambda * (o_i + eps * o_j))
}

#[inline]
pub(crate) fn exchange_pair(
    o_i: f64,
    o_j: f64,
    lambda_i: f64,
    lambda_j: f64,
    eps: f64,
    eps2: f64,
) -> (f64, f64) {
    (
        clamp_unit(lambda_i * o_i + lambda_j * eps * o_j),
        clamp_unit(lambda_j * o_j + lambda_i * eps2 * o_i),
    )
}

#[inline]
pub(crate) fn meanfield_raw(o: f64, lambda: f64, eps: f64, variant: MeanFieldVariant) -> f64 {
    match variant {
        MeanFieldVariant::Multiplicative => clamp_unit(lambda * (1.0 + eps) * o),
        MeanFieldVariant::Printed => clamp_unit(lambda * (1.0 + eps * o)),
    }
}

/// One-sided exchange: `o_i` moves toward `o_j`, `o_j` is left untouched.
pub fn interact_asymmetric(o_i: Opinion, o_j: Opinion, lambda: Conviction, eps: NoiseDraw) -> Opinion {
    Opinion(exchange(o_i.0, o_j.0, lambda.0, eps.0))
}

/// Two-sided exchange, both results computed from the pre-exchange values.
pub fn interact_symmetric(
    o_i: Opinion,
    o_j: Opinion,
    lambda_i: Conviction,
    lambda_j: Conviction,
    eps: NoiseDraw,
    eps2: NoiseDraw,
) -> (Opinion, Opinion) {
    let (a, b) = exchange_pair(o_i.0, o_j.0, lambda_i.0, lambda_j.0, eps.0, eps2.0);
    (Opinion(a), Opinion(b))
}

/// One step of the multiplicative mean-field map of the order parameter.
pub fn meanfield_step(o: Opinion, lambda: Conviction, eps: NoiseDraw) -> Opinion {
    meanfield_step_with(o, lambda, eps, MeanFieldVariant::Multiplicative)
}

pub fn meanfield_step_with(
    o: Opinion,
    lambda: Conviction,
    eps: NoiseDraw,
    variant: MeanFieldVariant,
) -> Opinion {
    Opinion(meanfield_raw(o.0, lambda.0, eps.0, variant))
}
