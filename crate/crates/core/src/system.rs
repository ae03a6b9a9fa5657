//! Generalized Rademacher functions, Vilenkin characters and Dirichlet kernels.
//!
//! `r_j(x) = exp(2 pi i x_j / m_j)` and `xi_n = prod_j r_j^{n_j}` where
//! `(n_j)` are the mixed-radix digits of `n`. With all `m_j = 2` this is the
//! Walsh-Paley system.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::{GroupPoint, RadixSequence};

/// `exp(2 pi i num / den)`, exact at quarter turns.
pub fn unit_root(num: usize, den: usize) -> Complex64 {
    let num = num % den;
    if num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * num % den == 0 {
        return match 4 * num / den {
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = TAU * num as f64 / den as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// `r_j(x)` for a 1-based coordinate `j`.
pub fn rademacher(radix: &RadixSequence, j: usize, x: &GroupPoint) -> Result<Complex64> {
    if j == 0 || j > radix.levels() {
        return Err(Error::CoordinateOutOfRange {
            coordinate: j,
            levels: radix.levels(),
        });
    }
    check_point(radix, x)?;
    Ok(unit_root(x.digits()[j - 1], radix.radices()[j - 1]))
}

fn check_point(radix: &RadixSequence, x: &GroupPoint) -> Result<()> {
    // Re-validates digits so that points built for another group are rejected.
    radix.digits_index(x.digits()).map(|_| ())
}

/// Phase numerator of `xi_n(x)` over the denominator `radix.lcm()`.
#[inline]
pub(crate) fn phase_numerator(radix: &RadixSequence, n: usize, x: usize) -> usize {
    let lcm = radix.lcm();
    let mut acc = 0usize;
    for (axis, &m) in radix.radices().iter().enumerate() {
        let product = radix.digit(n, axis) * radix.digit(x, axis) % m;
        acc = (acc + product * (lcm / m)) % lcm;
    }
    acc
}

/// `xi_n(x)`; the phase `sum_j n_j x_j / m_j` is reduced mod 1 exactly
/// before a single exponential.
pub fn character(radix: &RadixSequence, n: usize, x: &GroupPoint) -> Result<Complex64> {
    if n >= radix.order() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: radix.order(),
        });
    }
    let x = radix.digits_index(x.digits())?;
    Ok(character_at(radix, n, x))
}

/// `xi_n` at the point with enumeration index `x`. Both indices must be in range.
pub fn character_at(radix: &RadixSequence, n: usize, x: usize) -> Complex64 {
    unit_root(phase_numerator(radix, n, x), radix.lcm())
}

/// The character `xi_n` sampled on all of `G_N`.
pub fn sample_character(radix: &Arc<RadixSequence>, n: usize) -> Result<LevelFunction> {
    if n >= radix.order() {
        return Err(Error::IndexOutOfRange {
            index: n,
            bound: radix.order(),
        });
    }
    Ok(LevelFunction::from_fn(radix.clone(), |x| {
        character_at(radix, n, x)
    }))
}

/// `D_j = sum_{i<j} xi_i` by direct summation.
pub fn dirichlet_kernel(radix: &Arc<RadixSequence>, j: usize) -> Result<LevelFunction> {
    if j == 0 || j > radix.order() {
        return Err(Error::InvalidArgument(format!(
            "Dirichlet index {j} outside 1..={}",
            radix.order()
        )));
    }
    Ok(LevelFunction::from_fn(radix.clone(), |x| {
        (0..j).map(|i| character_at(radix, i, x)).sum()
    }))
}
