//! Partial-sum operators, convolution families and their maximal operator.
//!
//! For a family `(T_j)` the maximal operator is `M f(x) = max_j |T_j f(x)|`.
//! Partial sums `S_j f = sum_{i<j} f^(i) xi_i = f * D_j` are evaluated for all
//! `j` at once: one forward transform, then a running prefix sum of
//! `f^(i) xi_i(x)` at every point. The character phase is advanced with an
//! integer mixed-radix counter, so each step costs one table lookup and one
//! complex multiply-add.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::function::{LevelFunction, PointSet};
use crate::group::RadixSequence;
use crate::system::unit_root;
use crate::transform::TransformPlan;

#[derive(Debug, Clone)]
enum FamilyKind {
    /// Sorted distinct indices `j` in `1..=M_N`.
    PartialSums(Vec<usize>),
    Convolutions {
        kernels: Vec<LevelFunction>,
        spectra: Vec<Vec<Complex64>>,
    },
}

/// A finite sequence of operators `T = (T_j)` sharing one group.
#[derive(Debug, Clone)]
pub struct OperatorFamily {
    radix: Arc<RadixSequence>,
    plan: TransformPlan,
    walker: Option<Arc<PrefixWalker>>,
    kind: FamilyKind,
}

impl OperatorFamily {
    /// Partial sums `S_j` for `j` in `indices`.
    pub fn partial_sums(radix: Arc<RadixSequence>, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if indices[0] == 0 || *indices.last().unwrap() > radix.order() {
            let bad = if indices[0] == 0 { 0 } else { *indices.last().unwrap() };
            return Err(Error::InvalidArgument(format!(
                "partial-sum index {bad} outside 1..={}",
                radix.order()
            )));
        }
        Ok(Self {
            plan: TransformPlan::new(radix.clone()),
            walker: Some(Arc::new(PrefixWalker::new(&radix))),
            radix,
            kind: FamilyKind::PartialSums(indices),
        })
    }

    /// The full Carleson-type family `S_1, ..., S_{M_N}`.
    pub fn all_partial_sums(radix: Arc<RadixSequence>) -> Self {
        let m = radix.order();
        Self::partial_sums(radix, 1..=m).expect("non-empty range")
    }

    /// `{S_{M_N}}`, i.e. the identity operator.
    pub fn identity(radix: Arc<RadixSequence>) -> Self {
        let m = radix.order();
        Self::partial_sums(radix, [m]).expect("valid index")
    }

    /// Convolution operators `T_k f = f * k`.
    pub fn convolutions(kernels: Vec<LevelFunction>) -> Result<Self> {
        let first = kernels.first().ok_or(Error::EmptyFamily)?;
        let radix = first.radix().clone();
        for k in &kernels {
            first.ensure_same_group(k)?;
        }
        let plan = TransformPlan::new(radix.clone());
        let spectra = kernels
            .iter()
            .map(|k| {
                let mut v = k.values().to_vec();
                plan.forward_in_place(&mut v);
                v
            })
            .collect();
        Ok(Self {
            radix,
            plan,
            walker: None,
            kind: FamilyKind::Convolutions { kernels, spectra },
        })
    }

    pub fn radix(&self) -> &Arc<RadixSequence> {
        &self.radix
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            FamilyKind::PartialSums(j) => j.len(),
            FamilyKind::Convolutions { kernels, .. } => kernels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Partial-sum indices, if this is a partial-sum family.
    pub fn indices(&self) -> Option<&[usize]> {
        match &self.kind {
            FamilyKind::PartialSums(j) => Some(j),
            FamilyKind::Convolutions { .. } => None,
        }
    }

    pub fn kernels(&self) -> Option<&[LevelFunction]> {
        match &self.kind {
            FamilyKind::PartialSums(_) => None,
            FamilyKind::Convolutions { kernels, .. } => Some(kernels),
        }
    }

    /// `max_j |T_j f(x)|` at every point.
    pub fn maximal_values(&self, f: &LevelFunction) -> Result<Vec<f64>> {
        if f.radix().as_ref() != self.radix.as_ref() {
            return Err(Error::RadixMismatch);
        }
        let mut coeffs = f.values().to_vec();
        self.plan.forward_in_place(&mut coeffs);
        Ok(match &self.kind {
            FamilyKind::PartialSums(indices) => {
                let walker = self.walker.as_ref().expect("partial sums carry a walker");
                let m = self.radix.order();
                let upto = *indices.last().unwrap();
                // S_{M_N} f = f exactly, so that term is taken from f itself.
                let includes_full = upto == m;
                let inner = if includes_full { m - 1 } else { upto };
                let contiguous = indices.len() == upto;
                let mask = index_mask(m, indices);
                (0..m)
                    .map(|x| {
                        let mut best_sq = 0.0f64;
                        if contiguous {
                            best_sq = walker.max_norm_sqr(&coeffs, x, inner);
                        } else {
                            walker.walk(&coeffs, x, inner, |j, acc| {
                                if mask[j] {
                                    best_sq = best_sq.max(acc.norm_sqr());
                                }
                            });
                        }
                        let exact = if includes_full { f.values()[x].norm() } else { 0.0 };
                        exact.max(best_sq.sqrt())
                    })
                    .collect()
            }
            FamilyKind::Convolutions { spectra, .. } => {
                let mut best = vec![0.0f64; self.radix.order()];
                let mut buf = vec![Complex64::new(0.0, 0.0); self.radix.order()];
                for spectrum in spectra {
                    for ((b, c), k) in buf.iter_mut().zip(&coeffs).zip(spectrum) {
                        *b = c * k;
                    }
                    self.plan.inverse_in_place(&mut buf);
                    for (m, v) in best.iter_mut().zip(&buf) {
                        *m = m.max(v.norm());
                    }
                }
                best
            }
        })
    }
}

fn index_mask(order: usize, indices: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; order + 1];
    for &j in indices {
        mask[j] = true;
    }
    mask
}

/// Walks `S_j f(x)` for `j = 1, 2, ...` at a fixed point `x`.
#[derive(Debug)]
pub(crate) struct PrefixWalker {
    radices: Vec<usize>,
    lcm: usize,
    /// Axis whose digit increments when going from `i` to `i + 1`.
    carry: Vec<u8>,
    /// `exp(2 pi i k / lcm)`.
    roots: Vec<Complex64>,
}

impl PrefixWalker {
    pub(crate) fn new(radix: &RadixSequence) -> Self {
        let m = radix.order();
        let carry = (0..m.saturating_sub(1))
            .map(|i| {
                let mut axis = 0;
                while radix.digit(i, axis) == radix.radices()[axis] - 1 {
                    axis += 1;
                }
                axis as u8
            })
            .collect();
        let lcm = radix.lcm();
        Self {
            radices: radix.radices().to_vec(),
            lcm,
            carry,
            roots: (0..lcm).map(|k| unit_root(k, lcm)).collect(),
        }
    }

    #[inline]
    fn deltas(&self, x: usize) -> [usize; 64] {
        let lcm = self.lcm;
        let mut deltas = [0usize; 64];
        let mut rest = x;
        let mut lower = 0usize;
        for (axis, &m) in self.radices.iter().enumerate() {
            let w = (rest % m) * (lcm / m);
            rest /= m;
            deltas[axis] = (w + lcm - lower) % lcm;
            lower = (lower + (m - 1) * w) % lcm;
        }
        deltas
    }

    /// `max_{1 <= j <= upto} |S_j f(x)|^2`.
    pub(crate) fn max_norm_sqr(&self, coeffs: &[Complex64], x: usize, upto: usize) -> f64 {
        let lcm = self.lcm;
        let deltas = self.deltas(x);
        let mut phase = 0usize;
        let (mut re, mut im) = (0.0f64, 0.0f64);
        let mut best = 0.0f64;
        for (i, c) in coeffs[..upto].iter().enumerate() {
            let w = self.roots[phase];
            re += c.re * w.re - c.im * w.im;
            im += c.re * w.im + c.im * w.re;
            best = best.max(re * re + im * im);
            if let Some(&axis) = self.carry.get(i) {
                phase += deltas[axis as usize];
                if phase >= lcm {
                    phase -= lcm;
                }
            }
        }
        best
    }

    /// Calls `visit(j, S_j f(x))` for `j = 1..=upto`, given the spectrum of `f`.
    #[inline]
    pub(crate) fn walk(&self, coeffs: &[Complex64], x: usize, upto: usize, mut visit: impl FnMut(usize, Complex64)) {
        let lcm = self.lcm;
        let deltas = self.deltas(x);
        let mut phase = 0usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..upto {
            acc += coeffs[i] * self.roots[phase];
            visit(i + 1, acc);
            if i + 1 < upto {
                phase += deltas[self.carry[i] as usize];
                if phase >= lcm {
                    phase -= lcm;
                }
            }
        }
    }
}

/// `S_j f = sum_{i<j} f^(i) xi_i`; returns `f` itself for `j = M_N`.
pub fn partial_sum(f: &LevelFunction, j: usize) -> Result<LevelFunction> {
    let m = f.radix().order();
    if j == 0 || j > m {
        return Err(Error::InvalidArgument(format!("partial-sum index {j} outside 1..={m}")));
    }
    if j == m {
        return Ok(f.clone());
    }
    let plan = TransformPlan::new(f.radix().clone());
    let mut data = f.values().to_vec();
    plan.forward_in_place(&mut data);
    for c in &mut data[j..] {
        *c = Complex64::new(0.0, 0.0);
    }
    plan.inverse_in_place(&mut data);
    LevelFunction::new(f.radix().clone(), data)
}

/// The maximal function of `f` with respect to `family`, as a real-valued function.
pub fn maximal(f: &LevelFunction, family: &OperatorFamily) -> Result<LevelFunction> {
    let values = family.maximal_values(f)?;
    LevelFunction::from_real(f.radix().clone(), values)
}

/// `max_{j in J} |S_j f(x) - f(x)|` at every point.
pub fn deviation_values(f: &LevelFunction, indices: &[usize]) -> Result<Vec<f64>> {
    let family = OperatorFamily::partial_sums(f.radix().clone(), indices.iter().copied())?;
    let indices = family.indices().expect("partial sums");
    let m = f.radix().order();
    let mask = index_mask(m, indices);
    let upto = *indices.last().unwrap();
    let walker = family.walker.as_ref().expect("walker");
    let mut coeffs = f.values().to_vec();
    family.plan.forward_in_place(&mut coeffs);
    Ok((0..m)
        .map(|x| {
            let exact = f.values()[x];
            let mut worst = 0.0f64;
            walker.walk(&coeffs, x, upto, |j, acc| {
                // S_{M_N} f = f exactly.
                if mask[j] && j < m {
                    worst = worst.max((acc - exact).norm());
                }
            });
            worst
        })
        .collect())
}

/// Finite surrogate of `{limsup_j |S_j f - f| > lambda}`: the points where
/// `max_{j in J} |S_j f - f|` exceeds `lambda`, with its Haar measure.
pub fn exceptional_set(f: &LevelFunction, lambda: f64, indices: &[usize]) -> Result<(PointSet, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let dev = deviation_values(f, indices)?;
    let mask: Vec<bool> = dev.iter().map(|&d| d > lambda).collect();
    let set = PointSet::from_mask(&mask);
    let measure = set.measure();
    Ok((set, measure))
}

/// Tail deviations `max_{J <= j <= M_N} |S_j f(x) - f(x)|` for each start `J`
/// in `starts`; row `x` of the result holds one value per start.
pub fn tail_deviations(f: &LevelFunction, starts: &[usize]) -> Result<Vec<Vec<f64>>> {
    let radix = f.radix().clone();
    let m = radix.order();
    if let Some(&bad) = starts.iter().find(|&&j| j == 0 || j > m) {
        return Err(Error::InvalidArgument(format!("start index {bad} outside 1..={m}")));
    }
    let walker = PrefixWalker::new(&radix);
    let plan = TransformPlan::new(radix);
    let mut coeffs = f.values().to_vec();
    plan.forward_in_place(&mut coeffs);
    Ok((0..m)
        .into_par_iter()
        .map(|x| {
            let exact = f.values()[x];
            let mut dev = vec![0.0f64; m + 2];
            walker.walk(&coeffs, x, m, |j, acc| {
                if j < m {
                    dev[j] = (acc - exact).norm();
                }
            });
            for j in (1..m).rev() {
                dev[j] = dev[j].max(dev[j + 1]);
            }
            starts.iter().map(|&j| dev[j]).collect()
        })
        .collect())
}

/// `||S_{M_k} f - f||_1` for `k = 0..=N`.
pub fn martingale_l1_profile(f: &LevelFunction) -> Result<Vec<f64>> {
    let radix = f.radix();
    (0..=radix.levels())
        .map(|k| Ok(partial_sum(f, radix.block(k))?.sub(f)?.lp_norm(1.0)))
        .collect()
}

/// Exact distribution function of `|g|` at its distinct values.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    order: usize,
    thresholds: Vec<f64>,
    counts: Vec<usize>,
}

impl MeasureReport {
    /// Distinct values `v` of `|g|`, ascending.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// `#{x : |g(x)| >= v}` for each threshold.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `mu({|g| >= v})` for each threshold.
    pub fn measures(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.order as f64)
            .collect()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,measure\n");
        for (v, m) in self.thresholds.iter().zip(self.measures()) {
            out.push_str(&crate::format::real(*v));
            out.push(',');
            out.push_str(&crate::format::real(m));
            out.push('\n');
        }
        out
    }
}

pub fn distribution(g: &LevelFunction) -> MeasureReport {
    distribution_of(&g.moduli())
}

/// Distribution function of a list of non-negative values.
pub fn distribution_of(values: &[f64]) -> MeasureReport {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut thresholds = Vec::new();
    let mut counts = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        while i < sorted.len() && sorted[i] == v {
            i += 1;
        }
        thresholds.push(v);
        counts.push(i);
    }
    thresholds.reverse();
    counts.reverse();
    MeasureReport {
        order: values.len(),
        thresholds,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{character_at, dirichlet_kernel, sample_character};
    use crate::transform::{convolve, naive_forward};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_function(radix: &Arc<RadixSequence>, rng: &mut ChaCha8Rng) -> LevelFunction {
        LevelFunction::from_fn(radix.clone(), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    // S_j f(x) from the naive spectrum and direct character evaluation.
    fn naive_partial_sums(f: &LevelFunction) -> Vec<Vec<Complex64>> {
        let r = f.radix();
        let m = r.order();
        let spectrum = naive_forward(f);
        (0..m)
            .map(|x| {
                let mut acc = Complex64::new(0.0, 0.0);
                (0..m)
                    .map(|i| {
                        acc += spectrum.coeffs()[i] * character_at(r, i, x);
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn partial_sum_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = Arc::new(RadixSequence::new(vec![2, 3, 2]).unwrap());
        let f = random_function(&r, &mut rng);
        assert_eq!(partial_sum(&f, 12).unwrap(), f);
        for i in [0, 3, 11] {
            let xi = sample_character(&r, i).unwrap();
            for j in 1..=12 {
                let s = partial_sum(&xi, j).unwrap();
                let expected = if i < j { xi.clone() } else { LevelFunction::zeros(r.clone()) };
                assert!(max_diff(s.values(), expected.values()) < 1e-12);
            }
        }
        assert!(partial_sum(&f, 0).is_err());
        assert!(partial_sum(&f, 13).is_err());
    }

    #[test]
    fn partial_sums_are_block_averages_at_mk() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = Arc::new(RadixSequence::new(vec![3, 2, 4]).unwrap());
        let f = random_function(&r, &mut rng);
        for k in 0..=3 {
            let mk = r.block(k);
            let s = partial_sum(&f, mk).unwrap();
            for x in 0..r.order() {
                // Coset x + {y_1 = ... = y_k = 0}: same residue mod M_k.
                let coset: Vec<_> = (0..r.order()).filter(|y| y % mk == x % mk).collect();
                let avg = coset.iter().map(|&y| f.values()[y]).sum::<Complex64>() / coset.len() as f64;
                assert!((s.values()[x] - avg).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_and_truncation_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for radices in [vec![2, 3, 2], vec![5, 3], vec![2; 5]] {
            let r = Arc::new(RadixSequence::new(radices).unwrap());
            let f = random_function(&r, &mut rng);
            for j in 1..=r.order() {
                let via_kernel = convolve(&f, &dirichlet_kernel(&r, j).unwrap()).unwrap();
                let via_truncation = partial_sum(&f, j).unwrap();
                assert!(max_diff(via_kernel.values(), via_truncation.values()) < 1e-10);
            }
        }
    }

    #[test]
    fn walker_matches_naive_partial_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for radices in [vec![2, 3, 4], vec![5, 2, 2], vec![3, 3, 7]] {
            let r = Arc::new(RadixSequence::new(radices).unwrap());
            let f = random_function(&r, &mut rng);
            let naive = naive_partial_sums(&f);
            let walker = PrefixWalker::new(&r);
            let plan = TransformPlan::new(r.clone());
            let mut coeffs = f.values().to_vec();
            plan.forward_in_place(&mut coeffs);
            for x in 0..r.order() {
                walker.walk(&coeffs, x, r.order(), |j, acc| {
                    assert!((acc - naive[x][j - 1]).norm() < 1e-10, "x={x} j={j}");
                });
            }
        }
    }

    #[test]
    fn maximal_examples() {
        let r = Arc::new(RadixSequence::dyadic(3).unwrap());
        let all = OperatorFamily::all_partial_sums(r.clone());
        let one = sample_character(&r, 0).unwrap();
        let m1 = maximal(&one, &all).unwrap();
        assert!(m1.values().iter().all(|v| (v.re - 1.0).abs() < 1e-14 && v.im == 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_function(&r, &mut rng);
        let mf = all.maximal_values(&f).unwrap();
        assert!(mf.iter().zip(f.moduli()).all(|(a, b)| *a >= b));

        // chi_E against per-point maxima of naive partial sums.
        for bits in [0b1u64, 0b1011_0010, 0b1111_0000, 0b0110_1001] {
            let e = PointSet::from_bits(8, bits);
            let chi = LevelFunction::indicator(r.clone(), &e);
            let naive = naive_partial_sums(&chi);
            let got = all.maximal_values(&chi).unwrap();
            for x in 0..8 {
                let expected = naive[x].iter().map(|v| v.norm()).fold(0.0, f64::max);
                assert!((got[x] - expected).abs() < 1e-12);
            }
        }
        assert_eq!(
            OperatorFamily::partial_sums(r.clone(), []).unwrap_err(),
            Error::EmptyFamily
        );
        assert!(OperatorFamily::partial_sums(r.clone(), [9]).is_err());
        assert_eq!(OperatorFamily::convolutions(vec![]).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn identity_family_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let r = Arc::new(RadixSequence::new(vec![3, 4]).unwrap());
        let f = random_function(&r, &mut rng);
        let id = OperatorFamily::identity(r.clone());
        assert_eq!(id.maximal_values(&f).unwrap(), f.moduli());
    }

    #[test]
    fn convolution_family_matches_partial_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = Arc::new(RadixSequence::new(vec![2, 3, 2]).unwrap());
        let js = [1, 2, 5, 6, 11];
        let ps = OperatorFamily::partial_sums(r.clone(), js).unwrap();
        let kernels = js.iter().map(|&j| dirichlet_kernel(&r, j).unwrap()).collect();
        let conv = OperatorFamily::convolutions(kernels).unwrap();
        let f = random_function(&r, &mut rng);
        let a = ps.maximal_values(&f).unwrap();
        let b = conv.maximal_values(&f).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn exceptional_set_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let r = Arc::new(RadixSequence::new(vec![2, 2, 3]).unwrap());
        let m = r.order();
        let f = random_function(&r, &mut rng);
        let (set, measure) = exceptional_set(&f, 1e-300, &[m]).unwrap();
        assert!(set.is_empty() && measure == 0.0);

        let all: Vec<usize> = (1..=m).collect();
        let sup_s = (1..=m)
            .map(|j| partial_sum(&f, j).unwrap().max_abs())
            .fold(0.0, f64::max);
        let (set, _) = exceptional_set(&f, 2.0 * sup_s + f.max_abs() + 1e-9, &all).unwrap();
        assert!(set.is_empty());

        // Brute force: evaluate every partial sum and compare pointwise.
        let sums: Vec<_> = (1..=m).map(|j| partial_sum(&f, j).unwrap()).collect();
        for lambda in [0.1, 0.4, 0.9] {
            let count = (0..m)
                .filter(|&x| {
                    sums.iter()
                        .map(|s| (s.values()[x] - f.values()[x]).norm())
                        .fold(0.0, f64::max)
                        > lambda
                })
                .count();
            let (set, measure) = exceptional_set(&f, lambda, &all).unwrap();
            assert_eq!(set.len(), count);
            assert_eq!(measure, count as f64 / m as f64);
        }
        assert!(exceptional_set(&f, 0.0, &all).is_err());
    }

    #[test]
    fn tail_deviation_matches_exceptional_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let r = Arc::new(RadixSequence::dyadic(5).unwrap());
        let f = random_function(&r, &mut rng);
        let starts = [1, 4, 17, 32];
        let tails = tail_deviations(&f, &starts).unwrap();
        for (col, &start) in starts.iter().enumerate() {
            let indices: Vec<_> = (start..=32).collect();
            let dev = deviation_values(&f, &indices).unwrap();
            for x in 0..32 {
                assert_eq!(tails[x][col], dev[x]);
            }
        }
        assert!(tails.iter().all(|row| row[3] == 0.0));
    }

    #[test]
    fn distribution_examples() {
        let r = Arc::new(RadixSequence::new(vec![2, 3]).unwrap());
        let c = LevelFunction::constant(r.clone(), Complex64::new(0.0, -2.0));
        let d = distribution(&c);
        assert_eq!(d.thresholds(), &[2.0]);
        assert_eq!(d.measures(), vec![1.0]);
        let e = PointSet::new(6, vec![0, 2]).unwrap();
        let d = distribution(&LevelFunction::indicator(r.clone(), &e));
        assert_eq!(d.thresholds(), &[0.0, 1.0]);
        assert_eq!(d.counts(), &[6, 2]);
        assert_eq!(d.to_csv(), "lambda,measure\n0,1\n1,0.33333333333333331\n");
    }

    #[test]
    fn distribution_matches_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let values: Vec<f64> = (0..200).map(|_| rng.gen_range(0..7) as f64 * 0.5).collect();
        let d = distribution_of(&values);
        for (v, c) in d.thresholds().iter().zip(d.counts()) {
            assert_eq!(*c, values.iter().filter(|&&u| u >= *v).count());
        }
        assert!(d.counts().windows(2).all(|w| w[0] >= w[1]));
    }
}
