//! Young-type functions `phi_m(u) = u (1 + log+ u)^m (1 + log+ log+ log+ u)`
//! (logs base 2), Orlicz integrals, truncations and approximation by
//! bounded functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::LevelFunction;

/// `max(0, log2 u)`, with `log+ 0 = 0`.
pub fn log_plus(u: f64) -> Result<f64> {
    check_argument(u)?;
    Ok(log_plus_unchecked(u))
}

#[inline]
fn log_plus_unchecked(u: f64) -> f64 {
    if u > 1.0 {
        u.log2()
    } else {
        0.0
    }
}

fn check_argument(u: f64) -> Result<()> {
    if u >= 0.0 && u.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("phi argument must be finite and non-negative, got {u}")))
    }
}

/// A member of the class `Phi` used for Orlicz classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhiFunction {
    /// `phi(u) = u`.
    Linear,
    /// `phi(u) = u (1 + log+ u)^m (1 + log+ log+ log+ u)`.
    LogLog { m: f64 },
}

impl PhiFunction {
    pub fn new(m: f64) -> Result<Self> {
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::InvalidArgument(format!("phi exponent m must be finite and >= 0, got {m}")));
        }
        Ok(Self::LogLog { m })
    }

    pub fn linear() -> Self {
        Self::Linear
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        check_argument(u)?;
        Ok(self.eval_unchecked(u))
    }

    /// Evaluation without argument validation; `u` must be finite and `>= 0`.
    #[inline]
    pub fn eval_unchecked(&self, u: f64) -> f64 {
        match *self {
            Self::Linear => u,
            Self::LogLog { m } => {
                let l1 = log_plus_unchecked(u);
                let l3 = log_plus_unchecked(log_plus_unchecked(l1));
                u * (1.0 + l1).powf(m) * (1.0 + l3)
            }
        }
    }
}

/// `phi_m(u)`.
pub fn phi(m: f64, u: f64) -> Result<f64> {
    PhiFunction::new(m)?.eval(u)
}

/// `int phi(|f|) dmu`.
pub fn orlicz_integral(f: &LevelFunction, phi: PhiFunction) -> f64 {
    let sum: f64 = f.values().iter().map(|v| phi.eval_unchecked(v.norm())).sum();
    sum / f.len() as f64
}

/// `max phi(2u) / phi(u)` over `samples` geometrically spaced `u` in `[1, u_max]`.
pub fn delta2_estimate(phi: PhiFunction, u_max: f64, samples: usize) -> Result<f64> {
    if !(u_max > 1.0 && u_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("u_max must exceed 1, got {u_max}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let ratio = |u: f64| phi.eval_unchecked(2.0 * u) / phi.eval_unchecked(u);
    if samples == 1 {
        return Ok(ratio(1.0));
    }
    let log_max = u_max.ln();
    Ok((0..samples)
        .map(|i| {
            let u = (log_max * i as f64 / (samples - 1) as f64).exp();
            ratio(u)
        })
        .fold(f64::MIN, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TruncationSide {
    /// `f_t = f chi_{|f| < t}`.
    Below,
    /// `f^t = f chi_{|f| >= t}`.
    Above,
}

pub fn truncate(f: &LevelFunction, t: f64, side: TruncationSide) -> Result<LevelFunction> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("truncation level must be positive, got {t}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    Ok(f.map(|v| {
        let keep = match side {
            TruncationSide::Below => v.norm() < t,
            TruncationSide::Above => v.norm() >= t,
        };
        if keep {
            v
        } else {
            zero
        }
    }))
}

/// Bounded approximant returned by [`phi_dense_approx`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseApprox {
    pub h: LevelFunction,
    /// Truncation level `t` with `h = f_t`.
    pub level: f64,
    /// `int phi(|f - h|) dmu`, strictly below the requested epsilon.
    pub residual: f64,
}

/// Smallest `t` in `1, 2, 4, ...` with `int phi(|f - f_t|) dmu < eps`.
pub fn phi_dense_approx(f: &LevelFunction, phi: PhiFunction, eps: f64) -> Result<DenseApprox> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let mut t = 1.0f64;
    loop {
        let tail = truncate(f, t, TruncationSide::Above)?;
        let residual = orlicz_integral(&tail, phi);
        if residual < eps {
            return Ok(DenseApprox {
                h: truncate(f, t, TruncationSide::Below)?,
                level: t,
                residual,
            });
        }
        // Once t exceeds max|f| the tail vanishes, so this terminates.
        t *= 2.0;
    }
}
