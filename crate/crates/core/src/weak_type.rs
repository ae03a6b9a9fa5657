//! Restricted weak-type constants, the `H_m` growth fit, the generalized
//! weak-type harness and strong-type norm estimates.
//!
//! For `phi(u) = u^p` the restricted weak-type constant of a family on a set
//! `E` is `sup_lambda lambda^p mu({M chi_E > lambda}) / mu(E)`. The maximal
//! function takes finitely many values and `lambda -> mu({M chi_E > lambda})`
//! is a left-continuous step function, so the supremum is the maximum over
//! the distinct values `v` of `v^p mu({M chi_E >= v}) / mu(E)`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{LevelFunction, PointSet};
use crate::operators::{distribution_of, OperatorFamily};
use crate::orlicz::PhiFunction;
use crate::seeding;

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent must be finite and >= 1, got {p}")))
    }
}

/// Restricted weak-type constant of `family` on `set` at exponent `p`.
pub fn restricted_constant(family: &OperatorFamily, set: &PointSet, p: f64) -> Result<f64> {
    Ok(restricted_constants(family, set, &[p])?[0])
}

/// [`restricted_constant`] for several exponents from one maximal-function evaluation.
pub fn restricted_constants(family: &OperatorFamily, set: &PointSet, p_grid: &[f64]) -> Result<Vec<f64>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if set.order() != family.radix().order() {
        return Err(Error::RadixMismatch);
    }
    for &p in p_grid {
        check_exponent(p)?;
    }
    let chi = LevelFunction::indicator(family.radix().clone(), set);
    let values = family.maximal_values(&chi)?;
    Ok(constants_from_values(&values, set.len(), p_grid))
}

fn constants_from_values(values: &[f64], set_size: usize, p_grid: &[f64]) -> Vec<f64> {
    let dist = distribution_of(values);
    p_grid
        .iter()
        .map(|&p| {
            dist.thresholds()
                .iter()
                .zip(dist.counts())
                .filter(|(v, _)| **v > 0.0)
                .map(|(v, &c)| v.powf(p) * c as f64 / set_size as f64)
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Best set found for one exponent.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub p: f64,
    pub set: PointSet,
    pub constant: f64,
}

/// Exact maximum of the restricted constant over all non-empty subsets.
/// Only feasible for groups of order at most 24.
pub fn exhaustive_restricted_constants(family: &OperatorFamily, p_grid: &[f64]) -> Result<Vec<SearchResult>> {
    let order = family.radix().order();
    if order > 24 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive enumeration needs order <= 24, got {order}"
        )));
    }
    for &p in p_grid {
        check_exponent(p)?;
    }
    let identity = || vec![(f64::MIN, u64::MAX); p_grid.len()];
    let best = (1u64..1u64 << order)
        .into_par_iter()
        .map(|bits| {
            let set = PointSet::from_bits(order, bits);
            let chi = LevelFunction::indicator(family.radix().clone(), &set);
            let values = family.maximal_values(&chi).expect("same group");
            let c = constants_from_values(&values, set.len(), p_grid);
            c.into_iter().map(|v| (v, bits)).collect::<Vec<_>>()
        })
        .reduce(identity, |a, b| a.into_iter().zip(b).map(|(x, y)| better(x, y)).collect());
    Ok(best
        .into_iter()
        .zip(p_grid)
        .map(|((constant, bits), &p)| SearchResult {
            p,
            set: PointSet::from_bits(order, bits),
            constant,
        })
        .collect())
}

/// Larger constant wins; ties go to the smaller key so reductions are order independent.
fn better(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    if a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1) {
        a
    } else {
        b
    }
}

/// Candidate set number `index` of a randomized search.
///
/// Candidate 0 is the whole group. The rest cycle through random subsets of
/// a dyadic density `2^-r`, translated cosets of `{y_1 = ... = y_k = 0}`, and
/// singletons.
pub fn search_candidate(order: usize, blocks: &[usize], seed: u64, index: u64) -> PointSet {
    if index == 0 {
        return PointSet::whole(order);
    }
    let mut rng = seeding::stream(seed, index);
    match (index - 1) % 3 {
        0 => {
            let max_r = usize::BITS - (order - 1).leading_zeros();
            let r = rng.gen_range(1..=max_r.max(1));
            let count = ((order as f64) / 2f64.powi(r as i32)).round().max(1.0) as usize;
            let members = sample(&mut rng, order, count).into_vec();
            PointSet::new(order, members).expect("sampled below order")
        }
        1 => {
            let k = rng.gen_range(0..blocks.len());
            let step = blocks[k];
            let offset = rng.gen_range(0..step);
            PointSet::new(order, (offset..order).step_by(step).collect()).expect("in range")
        }
        _ => PointSet::new(order, vec![rng.gen_range(0..order)]).expect("in range"),
    }
}

/// Randomized lower bounds for several exponents, sharing one candidate stream.
/// Deterministic in `seed`; each returned constant is attained by its set.
pub fn search_restricted_constants(
    family: &OperatorFamily,
    p_grid: &[f64],
    budget: usize,
    seed: u64,
) -> Result<Vec<SearchResult>> {
    if budget == 0 {
        return Err(Error::InvalidArgument("search budget must be at least 1".into()));
    }
    for &p in p_grid {
        check_exponent(p)?;
    }
    let radix = family.radix().clone();
    let order = radix.order();
    let identity = || vec![(f64::MIN, u64::MAX); p_grid.len()];
    let best = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let set = search_candidate(order, radix.blocks(), seed, i);
            let chi = LevelFunction::indicator(radix.clone(), &set);
            let values = family.maximal_values(&chi).expect("same group");
            constants_from_values(&values, set.len(), p_grid)
                .into_iter()
                .map(|c| (c, i))
                .collect::<Vec<_>>()
        })
        .reduce(identity, |a, b| a.into_iter().zip(b).map(|(x, y)| better(x, y)).collect());
    Ok(best
        .into_iter()
        .zip(p_grid)
        .map(|((constant, i), &p)| SearchResult {
            p,
            set: search_candidate(order, radix.blocks(), seed, i),
            constant,
        })
        .collect())
}

pub fn restricted_constant_search(family: &OperatorFamily, p: f64, budget: usize, seed: u64) -> Result<SearchResult> {
    Ok(search_restricted_constants(family, &[p], budget, seed)?.remove(0))
}

/// Least-squares fit of `C_p <= (C / (p - 1))^{m p}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakTypeFit {
    pub p_grid: Vec<f64>,
    pub constants: Vec<f64>,
    pub fitted_c: f64,
    pub fitted_m: f64,
    /// Upper end of the exponent range the fit was made on.
    pub r: f64,
    /// Root-mean-square residual of `ln C_p`.
    pub residual: f64,
    /// Set when no growth is detected (`m` not positive); `fitted_c` is then 1.
    pub degenerate: bool,
}

/// Fits `ln C_p = m p ln C - m p ln(p - 1)` with both `C` and `m` free.
pub fn fit_hm(p_grid: &[f64], constants: &[f64]) -> Result<WeakTypeFit> {
    if p_grid.len() != constants.len() {
        return Err(Error::InvalidArgument("p grid and constants differ in length".into()));
    }
    if p_grid.len() < 3 {
        return Err(Error::InvalidArgument("fit needs at least 3 grid points".into()));
    }
    if let Some(p) = p_grid.iter().find(|&&p| !(p > 1.0 && p.is_finite())) {
        return Err(Error::InvalidArgument(format!("fit exponents must exceed 1, got {p}")));
    }
    if let Some(c) = constants.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
        return Err(Error::InvalidArgument(format!("constants must be positive and finite, got {c}")));
    }
    // Columns: u = p (coefficient a = m ln C), w = -p ln(p - 1) (coefficient m).
    let rows: Vec<(f64, f64, f64)> = p_grid
        .iter()
        .zip(constants)
        .map(|(&p, &c)| (p, -p * (p - 1.0).ln(), c.ln()))
        .collect();
    let (mut uu, mut uw, mut ww, mut uy, mut wy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(u, w, y) in &rows {
        uu += u * u;
        uw += u * w;
        ww += w * w;
        uy += u * y;
        wy += w * y;
    }
    let det = uu * ww - uw * uw;
    if det.abs() <= 1e-12 * uu * ww {
        return Err(Error::InvalidArgument("degenerate exponent grid".into()));
    }
    let mut a = (uy * ww - wy * uw) / det;
    let mut m = (uu * wy - uw * uy) / det;
    let degenerate = m <= 1e-9;
    if degenerate {
        m = 0.0;
        a = uy / uu;
    }
    let sse: f64 = rows.iter().map(|&(u, w, y)| (y - a * u - m * w).powi(2)).sum();
    let fitted_c = if degenerate { 1.0 } else { (a / m).exp() };
    Ok(WeakTypeFit {
        p_grid: p_grid.to_vec(),
        constants: constants.to_vec(),
        fitted_c,
        fitted_m: m,
        r: p_grid.iter().copied().fold(f64::MIN, f64::max),
        residual: (sse / rows.len() as f64).sqrt(),
        degenerate,
    })
}

/// One row of the generalized weak-type table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedRow {
    pub epsilon: f64,
    /// Smallest `C` with `mu({M f > lambda}) <= eps + C int phi(|f| / lambda)` over the battery.
    pub c: f64,
    /// Function attaining the smallest margin.
    pub worst_f_id: String,
    /// `min (eps + C int phi(|f|/lambda) - mu({M f > lambda}))` over the battery.
    pub margin: f64,
}

#[derive(Debug, Clone)]
struct Pair {
    f_index: usize,
    lambda: f64,
    exceedance: f64,
    integral: f64,
}

/// Empirical `C_{Y, eps}` with `Y = G_N` over a battery of `(id, f)` pairs.
///
/// `C(eps)` is the maximum over pairs of `(mu({Mf > lambda}) - eps)^+ / int phi(|f|/lambda)`,
/// nudged up by whole ulps until every margin evaluates non-negative.
pub fn generalized_weak_check(
    family: &OperatorFamily,
    phi: PhiFunction,
    battery: &[(String, LevelFunction)],
    eps_grid: &[f64],
    lambda_grid: &[f64],
) -> Result<Vec<GeneralizedRow>> {
    if let Some(e) = eps_grid.iter().find(|&&e| !(e >= 0.0 && e.is_finite())) {
        return Err(Error::InvalidArgument(format!("epsilon must be finite and >= 0, got {e}")));
    }
    if let Some(l) = lambda_grid.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {l}")));
    }
    if battery.is_empty() {
        return Err(Error::InvalidArgument("empty test battery".into()));
    }
    let per_f: Vec<Vec<Pair>> = battery
        .par_iter()
        .enumerate()
        .map(|(f_index, (_, f))| {
            let maximal = family.maximal_values(f)?;
            let moduli = f.moduli();
            let n = moduli.len() as f64;
            Ok(lambda_grid
                .iter()
                .map(|&lambda| Pair {
                    f_index,
                    lambda,
                    exceedance: maximal.iter().filter(|&&v| v > lambda).count() as f64 / n,
                    integral: moduli.iter().map(|&u| phi.eval_unchecked(u / lambda)).sum::<f64>() / n,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let pairs: Vec<&Pair> = per_f.iter().flatten().collect();
    let margin = |eps: f64, c: f64, pair: &Pair| eps + c * pair.integral - pair.exceedance;
    eps_grid
        .iter()
        .map(|&eps| {
            if let Some(pair) = pairs.iter().find(|pair| pair.integral == 0.0 && pair.exceedance > eps) {
                return Err(Error::UnboundedWitness {
                    f_id: battery[pair.f_index].0.clone(),
                    lambda: pair.lambda,
                });
            }
            let mut c = pairs
                .iter()
                .filter(|pair| pair.integral > 0.0)
                .map(|pair| (pair.exceedance - eps).max(0.0) / pair.integral)
                .fold(0.0, f64::max);
            while pairs.iter().any(|pair| margin(eps, c, pair) < 0.0) {
                c = c.next_up();
            }
            let (worst, min_margin) = pairs
                .iter()
                .map(|pair| (pair.f_index, margin(eps, c, pair)))
                .fold((0, f64::MAX), |acc, x| if x.1 < acc.1 { x } else { acc });
            Ok(GeneralizedRow {
                epsilon: eps,
                c,
                worst_f_id: battery[worst].0.clone(),
                margin: min_margin,
            })
        })
        .collect()
}

/// `max_f ||M f||_p / ||f||_p` over the battery; an empirical lower bound on the norm.
pub fn strong_type_estimate(family: &OperatorFamily, p: f64, battery: &[(String, LevelFunction)]) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("strong-type exponent must exceed 1, got {p}")));
    }
    battery.iter().try_fold(0.0f64, |best, (id, f)| {
        let denom = f.lp_norm(p);
        if denom == 0.0 {
            return Err(Error::ZeroFunction(id.clone()));
        }
        let mf = family.maximal_values(f)?;
        Ok(best.max(crate::function::lp_norm(&mf, p) / denom))
    })
}
