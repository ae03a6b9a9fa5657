//! Fixed, versioned test-function batteries.
//!
//! Version `v1` contains, in this order:
//! - `ind-d{D}-r{R}`: indicators of random sets with exactly `max(1, round(M_N / D))`
//!   points, for `D` in `{M_N, 16, 4}` and replicates `R` in `{0, 1}`;
//! - `coset-k{k}`: indicators of a random translate of `G_k`, `k = 0..N-1`;
//! - `lacunary`: `sum_{k<N} xi_{M_k}`;
//! - `spike-t{t}`: `t chi_{x}` for one random atom `x` and `t = 4^i`, `i = 0..5`.
//!
//! Randomness depends only on the seed and the element position.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::function::{LevelFunction, PointSet};
use crate::group::RadixSequence;
use crate::seeding::stream;
use crate::system::sample_character;

pub const VERSION: &str = "v1";

/// A named test function.
pub type Entry = (String, LevelFunction);

fn random_set(radix: &RadixSequence, size: usize, rng: &mut impl Rng) -> PointSet {
    let m = radix.order();
    let members = sample(rng, m, size.clamp(1, m)).into_vec();
    PointSet::new(m, members).expect("sampled indices are in range")
}

fn coset(radix: &RadixSequence, k: usize, rng: &mut impl Rng) -> PointSet {
    let block = radix.block(k);
    let offset = rng.gen_range(0..block);
    PointSet::new(radix.order(), (offset..radix.order()).step_by(block).collect()).expect("coset in range")
}

/// The `v1` battery on `radix`.
pub fn battery_v1(radix: &Arc<RadixSequence>, seed: u64) -> Vec<Entry> {
    let m = radix.order();
    let mut out = Vec::new();
    let mut index = 0u64;
    let mut next_rng = || {
        index += 1;
        stream(seed, index)
    };
    for density in [m, 16, 4] {
        for rep in 0..2 {
            let size = ((m as f64 / density as f64).round() as usize).max(1);
            let set = random_set(radix, size, &mut next_rng());
            out.push((format!("ind-d{density}-r{rep}"), LevelFunction::indicator(radix.clone(), &set)));
        }
    }
    for k in 0..radix.levels() {
        let set = coset(radix, k, &mut next_rng());
        out.push((format!("coset-k{k}"), LevelFunction::indicator(radix.clone(), &set)));
    }
    let mut lacunary = vec![Complex64::new(0.0, 0.0); m];
    for &b in &radix.blocks()[..radix.levels()] {
        let xi = sample_character(radix, b).expect("M_k < M_N");
        for (acc, v) in lacunary.iter_mut().zip(xi.values()) {
            *acc += v;
        }
    }
    out.push((
        "lacunary".into(),
        LevelFunction::new(radix.clone(), lacunary).expect("finite"),
    ));
    let atom = next_rng().gen_range(0..m);
    for i in 0..6 {
        let t = 4f64.powi(i);
        out.push((
            format!("spike-t{t}"),
            LevelFunction::spike(radix.clone(), atom, t).expect("atom in range"),
        ));
    }
    out
}

/// Exactly `count` functions: the `v1` elements (truncated if `count` is
/// smaller), then `rand-{i}` heavy-tailed random functions.
///
/// `rand-{i}` vanishes on about a third of the atoms; elsewhere it takes values
/// `U^{-1/1.2}` with `U` uniform on `(0, 1]`.
pub fn battery(radix: &Arc<RadixSequence>, count: usize, seed: u64) -> Vec<Entry> {
    let mut out = battery_v1(radix, seed);
    out.truncate(count);
    let mut i = 0u64;
    while out.len() < count {
        let mut rng = stream(seed ^ 0x5eed_0000_0000_0000, i);
        let values = (0..radix.order())
            .map(|_| {
                if rng.gen_bool(1.0 / 3.0) {
                    0.0
                } else {
                    (1.0 - rng.gen::<f64>()).powf(-1.0 / 1.2)
                }
            })
            .collect();
        out.push((
            format!("rand-{i}"),
            LevelFunction::from_real(radix.clone(), values).expect("finite"),
        ));
        i += 1;
    }
    out
}

/// [`battery`] with every element replaced by its modulus.
pub fn nonnegative_battery(radix: &Arc<RadixSequence>, count: usize, seed: u64) -> Vec<Entry> {
    battery(radix, count, seed)
        .into_iter()
        .map(|(id, f)| {
            let moduli = f.moduli();
            (id, LevelFunction::from_real(radix.clone(), moduli).expect("finite"))
        })
        .collect()
}

/// Rejects batteries containing an identically zero function.
pub fn ensure_nonzero(battery: &[Entry]) -> Result<()> {
    match battery.iter().find(|(_, f)| f.max_abs() == 0.0) {
        Some((id, _)) => Err(Error::ZeroFunction(id.clone())),
        None => Ok(()),
    }
}
