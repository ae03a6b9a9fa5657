//! Approximation of a non-negative `f` by a simple function
//! `h = sum_n a_n chi_{E_n}` such that `int M(f - h) dmu` is small for the
//! maximal operator of a convolution family.
//!
//! Levels `0 = a_0 < a_1 < ... < a_nu` cut `f` into bands
//! `G_n = {a_{n-1} < f <= a_n}`. In each band a subset `E_n` is chosen whose
//! mass `a_n mu(E_n)` matches `int_{G_n} f dmu`. On a finite group exact
//! matching is impossible in general, so the match is made up to less than one
//! atom per band. Matching is done separately inside each coset of the coarsest
//! subgroup `G_k` on which every kernel is constant, so that `(f - h) * k_j`
//! only sees the per-coset mass discrepancies.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{LevelFunction, PointSet};
use crate::group::RadixSequence;
use crate::operators::OperatorFamily;

/// Relative tolerance used to snap mass ratios onto integers.
const SNAP: f64 = 1e-12;

/// Output of [`lemma1_construct`].
#[derive(Debug, Clone, PartialEq)]
pub struct BandDecomposition {
    /// `a_0 = 0, a_1, ..., a_nu`.
    pub levels: Vec<f64>,
    /// `bands[n - 1] = G_n`.
    pub bands: Vec<PointSet>,
    /// `matched_sets[n - 1] = E_n`.
    pub matched_sets: Vec<PointSet>,
    /// `int_{G_n} f dmu - a_n mu(E_n)`, in `[0, a_n / M_N)`.
    pub residuals: Vec<f64>,
    /// Sum over bands and cells of the absolute per-cell mass discrepancy.
    pub discrepancy: f64,
    /// Matching cells are the cosets of `G_k` for this `k`.
    pub cell_level: usize,
    pub h: LevelFunction,
}

impl BandDecomposition {
    pub fn nu(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Verification summary of a construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub nu: usize,
    pub levels: Vec<f64>,
    pub residuals: Vec<f64>,
    pub measured_integral: f64,
    pub epsilon: f64,
    pub slack: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Outcome {
    pub decomposition: BandDecomposition,
    pub report: Lemma1Report,
}

/// Result of [`choose_cutoff`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    /// 1-based position in the level sequence.
    pub nu: usize,
    pub level: f64,
    /// `sum_j ||f^{a_nu}||_1 ||k_j||_1`.
    pub bound: f64,
}

fn nonnegative_values(f: &LevelFunction) -> Result<Vec<f64>> {
    f.values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.im == 0.0 && v.re >= 0.0 {
                Ok(v.re)
            } else {
                Err(Error::InvalidArgument(format!("f must be real and non-negative, f[{i}] = {v}")))
            }
        })
        .collect()
}

fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::InvalidArgument("level sequence is empty".into()));
    }
    if !(levels[0] > 0.0) || levels.iter().any(|a| !a.is_finite()) || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "levels must be finite, positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn kernel_norms(kernels: &[LevelFunction]) -> f64 {
    kernels.iter().map(|k| k.lp_norm(1.0)).sum()
}

/// `a_n = 2^{n-1} a_1` with `a_1 = min {f > 0}`, up to the first level `>= max f`.
///
/// Empty when `f = 0`.
pub fn default_levels(f: &LevelFunction) -> Result<Vec<f64>> {
    let values = nonnegative_values(f)?;
    let a1 = values.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
    if a1.is_infinite() {
        return Ok(Vec::new());
    }
    let top = values.iter().copied().fold(0.0, f64::max);
    let mut levels = vec![a1];
    while *levels.last().unwrap() < top {
        levels.push(levels.last().unwrap() * 2.0);
    }
    Ok(levels)
}

/// Smallest `nu` with `sum_j ||f^{a_nu}||_1 ||k_j||_1 < eps / 2`, where
/// `f^t = f chi_{f > t}`.
pub fn choose_cutoff(f: &LevelFunction, kernels: &[LevelFunction], levels: &[f64], eps: f64) -> Result<Cutoff> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    check_levels(levels)?;
    let values = nonnegative_values(f)?;
    let norms = kernel_norms(kernels);
    let m = values.len() as f64;
    let mut bound = f64::INFINITY;
    for (i, &a) in levels.iter().enumerate() {
        let tail: f64 = values.iter().filter(|&&v| v > a).sum::<f64>() / m;
        bound = tail * norms;
        if bound < eps / 2.0 {
            return Ok(Cutoff { nu: i + 1, level: a, bound });
        }
    }
    Err(Error::LevelsExhausted {
        bound,
        last_level: *levels.last().unwrap(),
    })
}

/// Greedy mass matching inside one band.
///
/// Picks the atoms of `band` with the largest values of `f` until one more
/// would make `a_n mu(E_n)` exceed `int_{G_n} f dmu`. Returns `E_n` and the
/// residual `int_{G_n} f dmu - a_n mu(E_n)`, which lies in `[0, a_n / M_N)`.
pub fn mass_match(f: &LevelFunction, band: &PointSet, a_n: f64) -> Result<(PointSet, f64)> {
    if !(a_n > 0.0 && a_n.is_finite()) {
        return Err(Error::InvalidArgument(format!("level must be positive, got {a_n}")));
    }
    if band.order() != f.len() {
        return Err(Error::LengthMismatch {
            expected: f.len(),
            found: band.order(),
        });
    }
    let values = nonnegative_values(f)?;
    let matched = match_cells(&values, band.members(), a_n, |_| 0);
    Ok((PointSet::new(f.len(), matched.members)?, matched.residual))
}

struct Matched {
    members: Vec<usize>,
    residual: f64,
    discrepancy: f64,
}

/// Mass ratio snapped to a nearby integer when within rounding distance.
fn snap(t: f64) -> f64 {
    let r = t.round();
    if (t - r).abs() <= SNAP * t.max(1.0) {
        r
    } else {
        t
    }
}

/// Matches band mass cell by cell with largest-remainder rounding: every cell
/// is off by less than one atom and the band total by less than one atom.
fn match_cells(values: &[f64], band: &[usize], a_n: f64, cell_of: impl Fn(usize) -> usize) -> Matched {
    let atom = 1.0 / values.len() as f64;
    // Atoms of each cell, largest value first.
    let mut cells: Vec<(usize, Vec<usize>)> = Vec::new();
    {
        let mut keyed: Vec<(usize, usize)> = band.iter().map(|&x| (cell_of(x), x)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(values[b.1].total_cmp(&values[a.1])).then(a.1.cmp(&b.1)));
        for (c, x) in keyed {
            match cells.last_mut() {
                Some((id, xs)) if *id == c => xs.push(x),
                _ => cells.push((c, vec![x])),
            }
        }
    }
    let ratios: Vec<f64> = cells
        .iter()
        .map(|(_, xs)| snap(xs.iter().map(|&x| values[x]).sum::<f64>() / a_n))
        .collect();
    let mut counts: Vec<usize> = cells
        .iter()
        .zip(&ratios)
        .map(|((_, xs), &t)| (t.floor() as usize).min(xs.len()))
        .collect();
    let total = snap(ratios.iter().sum()).floor() as usize;
    let mut extra = total.saturating_sub(counts.iter().sum());
    if extra > 0 {
        let mut order: Vec<usize> = (0..cells.len()).filter(|&c| counts[c] < cells[c].1.len()).collect();
        let frac = |c: usize| ratios[c] - counts[c] as f64;
        order.sort_by(|&a, &b| frac(b).total_cmp(&frac(a)).then(a.cmp(&b)));
        for c in order {
            if extra == 0 {
                break;
            }
            counts[c] += 1;
            extra -= 1;
        }
    }
    let mut members = Vec::new();
    let mut residual = 0.0;
    let mut discrepancy = 0.0;
    for ((_, xs), &count) in cells.iter().zip(&counts) {
        members.extend_from_slice(&xs[..count]);
        let d = (xs.iter().map(|&x| values[x]).sum::<f64>() - a_n * count as f64) * atom;
        residual += d;
        discrepancy += d.abs();
    }
    members.sort_unstable();
    Matched {
        members,
        // Exact matches may come out a few ulps negative.
        residual: residual.max(0.0),
        discrepancy,
    }
}

/// Smallest `k` such that every kernel is constant on each coset of `G_k`,
/// i.e. `k(x)` depends only on `x mod M_k`.
pub fn invariance_level(kernels: &[LevelFunction]) -> Result<usize> {
    let first = kernels.first().ok_or(Error::EmptyFamily)?;
    for k in kernels {
        first.ensure_same_group(k)?;
    }
    let radix = first.radix();
    let scale = kernels.iter().map(|k| k.max_abs()).fold(0.0, f64::max).max(1.0);
    let tol = 1e-9 * scale;
    let level = (0..=radix.levels())
        .find(|&k| {
            let block = radix.block(k);
            kernels
                .iter()
                .all(|ker| ker.values().iter().enumerate().all(|(x, v)| (v - ker.values()[x % block]).norm() <= tol))
        })
        .expect("k = N always qualifies");
    Ok(level)
}

/// Builds `h` for non-negative `f`, the convolution family with `kernels` and
/// tolerance `eps`, and measures `int M(f - h) dmu` directly.
///
/// `levels` are `a_1 < a_2 < ...`; [`default_levels`] is used when `None`.
/// The report passes when the measured integral is below `eps + slack`, where
/// `slack = (sum of per-cell mass discrepancies) * sum_j ||k_j||_1` accounts
/// for matching in whole atoms.
pub fn lemma1_construct(
    f: &LevelFunction,
    kernels: &[LevelFunction],
    levels: Option<&[f64]>,
    eps: f64,
) -> Result<Lemma1Outcome> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
    }
    let family = OperatorFamily::convolutions(kernels.to_vec())?;
    if f.radix().as_ref() != family.radix().as_ref() {
        return Err(Error::RadixMismatch);
    }
    let values = nonnegative_values(f)?;
    let radix: Arc<RadixSequence> = f.radix().clone();
    let cell_level = invariance_level(kernels)?;
    let block = radix.block(cell_level);

    let defaults;
    let levels = match levels {
        Some(l) => l,
        None => {
            defaults = default_levels(f)?;
            &defaults
        }
    };
    let nu = if values.iter().all(|&v| v == 0.0) {
        0
    } else {
        choose_cutoff(f, kernels, levels, eps)?.nu
    };
    let mut all_levels = vec![0.0];
    all_levels.extend_from_slice(&levels[..nu]);

    let bands: Vec<PointSet> = all_levels
        .windows(2)
        .map(|w| {
            let members = (0..values.len()).filter(|&x| values[x] > w[0] && values[x] <= w[1]).collect();
            PointSet::new(values.len(), members)
        })
        .collect::<Result<_>>()?;
    let matched: Vec<Matched> = bands
        .par_iter()
        .zip(&all_levels[1..])
        .map(|(band, &a)| match_cells(&values, band.members(), a, |x| x % block))
        .collect();

    let mut h = vec![Complex64::new(0.0, 0.0); values.len()];
    for (m, &a) in matched.iter().zip(&all_levels[1..]) {
        for &x in &m.members {
            h[x] = Complex64::new(a, 0.0);
        }
    }
    let h = LevelFunction::new(radix, h)?;
    let discrepancy: f64 = matched.iter().map(|m| m.discrepancy).sum();
    let slack = discrepancy * kernel_norms(kernels);
    let diff = f.sub(&h)?;
    let maximal = family.maximal_values(&diff)?;
    let measured_integral = maximal.iter().sum::<f64>() / maximal.len() as f64;
    let residuals: Vec<f64> = matched.iter().map(|m| m.residual).collect();

    let report = Lemma1Report {
        nu,
        levels: all_levels.clone(),
        residuals: residuals.clone(),
        measured_integral,
        epsilon: eps,
        slack,
        pass: measured_integral < eps + slack,
    };
    let decomposition = BandDecomposition {
        levels: all_levels,
        bands,
        matched_sets: matched
            .into_iter()
            .map(|m| PointSet::new(values.len(), m.members))
            .collect::<Result<_>>()?,
        residuals,
        discrepancy,
        cell_level,
        h,
    };
    Ok(Lemma1Outcome { decomposition, report })
}
