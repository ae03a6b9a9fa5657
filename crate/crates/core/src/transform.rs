//! Forward and inverse Vilenkin transforms.
//!
//! `G_N` is a direct product, so the character matrix is the Kronecker
//! product of the `m_j`-point DFT matrices. The fast transform runs one
//! stage per coordinate, each stage an `m_j`-point DFT over every fibre of
//! that coordinate, for `O(M_N * sum_j m_j)` work. Radices 2, 3 and 4 have
//! dedicated butterflies.
//!
//! Normalization: `f^(n) = (1/M_N) sum_x f(x) conj(xi_n(x))`, and
//! `f(x) = sum_n f^(n) xi_n(x)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::function::LevelFunction;
use crate::group::RadixSequence;
use crate::system::{character, unit_root};

/// Vilenkin-Fourier coefficients indexed by spectral index `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumVector {
    radix: Arc<RadixSequence>,
    coeffs: Vec<Complex64>,
}

impl SpectrumVector {
    pub fn new(radix: Arc<RadixSequence>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != radix.order() {
            return Err(Error::LengthMismatch {
                expected: radix.order(),
                found: coeffs.len(),
            });
        }
        if let Some(index) = coeffs.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { radix, coeffs })
    }

    /// The spectrum with a single unit coefficient at `n`.
    pub fn unit(radix: Arc<RadixSequence>, n: usize) -> Result<Self> {
        if n >= radix.order() {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: radix.order(),
            });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); radix.order()];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Ok(Self { radix, coeffs })
    }

    pub fn radix(&self) -> &Arc<RadixSequence> {
        &self.radix
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `sum_n |f^(n)|^2`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
struct Stage {
    radix: usize,
    stride: usize,
    /// `exp(-2 pi i k / m)` for `k < m`; conjugated for the inverse.
    roots: Vec<Complex64>,
}

/// Precomputed stage layout and twiddles for one radix sequence.
#[derive(Debug, Clone)]
pub struct TransformPlan {
    radix: Arc<RadixSequence>,
    stages: Vec<Stage>,
}

impl TransformPlan {
    pub fn new(radix: Arc<RadixSequence>) -> Self {
        let stages = radix
            .radices()
            .iter()
            .enumerate()
            .map(|(axis, &m)| Stage {
                radix: m,
                stride: radix.block(axis),
                roots: (0..m).map(|k| unit_root(k, m).conj()).collect(),
            })
            .collect();
        Self { radix, stages }
    }

    pub fn radix(&self) -> &Arc<RadixSequence> {
        &self.radix
    }

    pub fn forward(&self, f: &LevelFunction) -> Result<SpectrumVector> {
        if f.radix().as_ref() != self.radix.as_ref() {
            return Err(Error::RadixMismatch);
        }
        let mut data = f.values().to_vec();
        self.forward_in_place(&mut data);
        Ok(SpectrumVector {
            radix: self.radix.clone(),
            coeffs: data,
        })
    }

    pub fn inverse(&self, s: &SpectrumVector) -> Result<LevelFunction> {
        if s.radix().as_ref() != self.radix.as_ref() {
            return Err(Error::RadixMismatch);
        }
        let mut data = s.coeffs().to_vec();
        self.inverse_in_place(&mut data);
        LevelFunction::new(self.radix.clone(), data)
    }

    /// Forward transform of raw values in place (length `M_N`).
    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.radix.order());
        let mut scratch = Vec::with_capacity(self.radix.bound());
        for stage in &self.stages {
            run_stage(data, stage, Direction::Forward, &mut scratch);
        }
        let scale = 1.0 / data.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.radix.order());
        let mut scratch = Vec::with_capacity(self.radix.bound());
        for stage in &self.stages {
            run_stage(data, stage, Direction::Inverse, &mut scratch);
        }
    }
}

fn run_stage(data: &mut [Complex64], stage: &Stage, dir: Direction, scratch: &mut Vec<Complex64>) {
    let s = stage.stride;
    let span = s * stage.radix;
    for outer in (0..data.len()).step_by(span) {
        let block = &mut data[outer..outer + span];
        match stage.radix {
            2 => (0..s).for_each(|lo| butterfly2(block, lo, s)),
            3 => (0..s).for_each(|lo| butterfly3(block, lo, s, dir)),
            4 => (0..s).for_each(|lo| butterfly4(block, lo, s, dir)),
            _ => (0..s).for_each(|lo| butterfly_generic(block, lo, s, &stage.roots, dir, scratch)),
        }
    }
}

#[inline]
fn butterfly2(d: &mut [Complex64], i: usize, s: usize) {
    let a = d[i];
    let b = d[i + s];
    d[i] = a + b;
    d[i + s] = a - b;
}

#[inline]
fn butterfly3(d: &mut [Complex64], i: usize, s: usize, dir: Direction) {
    const HALF_SQRT3: f64 = 0.866_025_403_784_438_6;
    let (a, b, c) = (d[i], d[i + s], d[i + 2 * s]);
    let sum = b + c;
    let diff = b - c;
    let t = a - sum * 0.5;
    // -i * sqrt(3)/2 * (b - c) for the forward kernel exp(-2 pi i / 3).
    let mut rot = Complex64::new(diff.im * HALF_SQRT3, -diff.re * HALF_SQRT3);
    if dir == Direction::Inverse {
        rot = -rot;
    }
    d[i] = a + sum;
    d[i + s] = t + rot;
    d[i + 2 * s] = t - rot;
}

#[inline]
fn butterfly4(d: &mut [Complex64], i: usize, s: usize, dir: Direction) {
    let (a, b, c, e) = (d[i], d[i + s], d[i + 2 * s], d[i + 3 * s]);
    let ac_sum = a + c;
    let ac_diff = a - c;
    let be_sum = b + e;
    let be_diff = b - e;
    // -i * (b - e) for the forward kernel exp(-2 pi i / 4) = -i.
    let mut rot = Complex64::new(be_diff.im, -be_diff.re);
    if dir == Direction::Inverse {
        rot = -rot;
    }
    d[i] = ac_sum + be_sum;
    d[i + s] = ac_diff + rot;
    d[i + 2 * s] = ac_sum - be_sum;
    d[i + 3 * s] = ac_diff - rot;
}

fn butterfly_generic(
    d: &mut [Complex64],
    i: usize,
    s: usize,
    roots: &[Complex64],
    dir: Direction,
    scratch: &mut Vec<Complex64>,
) {
    let m = roots.len();
    scratch.clear();
    scratch.extend((0..m).map(|t| d[i + t * s]));
    for n in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, &x) in scratch.iter().enumerate() {
            let w = roots[n * t % m];
            acc += x * if dir == Direction::Forward { w } else { w.conj() };
        }
        d[i + n * s] = acc;
    }
}

pub fn forward(f: &LevelFunction) -> SpectrumVector {
    TransformPlan::new(f.radix().clone())
        .forward(f)
        .expect("plan built from the same radix")
}

pub fn inverse(s: &SpectrumVector) -> LevelFunction {
    TransformPlan::new(s.radix().clone())
        .inverse(s)
        .expect("plan built from the same radix")
}

/// Direct `O(M_N^2)` evaluation of the defining sums from a tabulated
/// character matrix; ground truth for the fast transform.
#[derive(Debug, Clone)]
pub struct NaiveTransform {
    radix: Arc<RadixSequence>,
    /// `table[n * M_N + x] = xi_n(x)`.
    table: Vec<Complex64>,
}

impl NaiveTransform {
    pub fn new(radix: Arc<RadixSequence>) -> Self {
        let m = radix.order();
        let points: Vec<_> = (0..m).map(|x| radix.point_at(x).expect("in range")).collect();
        let mut table = Vec::with_capacity(m * m);
        for n in 0..m {
            table.extend(points.iter().map(|p| character(&radix, n, p).expect("in range")));
        }
        Self { radix, table }
    }

    pub fn radix(&self) -> &Arc<RadixSequence> {
        &self.radix
    }

    /// `f^(n) = (1/M_N) sum_x f(x) conj(xi_n(x))`.
    pub fn forward(&self, f: &LevelFunction) -> Result<SpectrumVector> {
        if f.radix().as_ref() != self.radix.as_ref() {
            return Err(Error::RadixMismatch);
        }
        let m = self.radix.order();
        let coeffs = self
            .table
            .chunks_exact(m)
            .map(|row| row.iter().zip(f.values()).map(|(w, &v)| v * w.conj()).sum::<Complex64>() / m as f64)
            .collect();
        Ok(SpectrumVector {
            radix: self.radix.clone(),
            coeffs,
        })
    }

    /// `f(x) = sum_n c_n xi_n(x)`.
    pub fn inverse(&self, s: &SpectrumVector) -> Result<LevelFunction> {
        if s.radix().as_ref() != self.radix.as_ref() {
            return Err(Error::RadixMismatch);
        }
        let m = self.radix.order();
        let mut values = vec![Complex64::new(0.0, 0.0); m];
        for (row, &c) in self.table.chunks_exact(m).zip(s.coeffs()) {
            for (v, w) in values.iter_mut().zip(row) {
                *v += c * w;
            }
        }
        LevelFunction::new(self.radix.clone(), values)
    }
}

pub fn naive_forward(f: &LevelFunction) -> SpectrumVector {
    NaiveTransform::new(f.radix().clone())
        .forward(f)
        .expect("table built from the same radix")
}

pub fn naive_inverse(s: &SpectrumVector) -> LevelFunction {
    NaiveTransform::new(s.radix().clone())
        .inverse(s)
        .expect("table built from the same radix")
}

/// `(f * k)(x) = (1/M_N) sum_y f(y) k(x - y)`, via the convolution theorem.
pub fn convolve(f: &LevelFunction, k: &LevelFunction) -> Result<LevelFunction> {
    f.ensure_same_group(k)?;
    let plan = TransformPlan::new(f.radix().clone());
    let mut a = f.values().to_vec();
    let mut b = k.values().to_vec();
    plan.forward_in_place(&mut a);
    plan.forward_in_place(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    plan.inverse_in_place(&mut a);
    LevelFunction::new(f.radix().clone(), a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::sample_character;
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

    // Direct double sum, independent of the transform.
    fn direct_convolution(f: &LevelFunction, k: &LevelFunction) -> Vec<Complex64> {
        let r = f.radix();
        let m = r.order();
        (0..m)
            .map(|x| {
                (0..m)
                    .map(|y| f.values()[y] * k.values()[r.sub_index(x, y)])
                    .sum::<Complex64>()
                    / m as f64
            })
            .collect()
    }

    #[test]
    fn constant_and_characters() {
        let r = Arc::new(RadixSequence::new(vec![2, 3, 4, 5]).unwrap());
        let one = LevelFunction::constant(r.clone(), Complex64::new(1.0, 0.0));
        let s = forward(&one);
        assert!((s.coeffs()[0] - 1.0).norm() < 1e-14);
        assert!(s.coeffs()[1..].iter().all(|c| c.norm() < 1e-14));
        for n in [0, 1, 7, 59, 119] {
            let xi = sample_character(&r, n).unwrap();
            let s = forward(&xi);
            let unit = SpectrumVector::unit(r.clone(), n).unwrap();
            assert!(max_diff(s.coeffs(), unit.coeffs()) < 1e-12);
            assert!(max_diff(inverse(&unit).values(), xi.values()) < 1e-12);
        }
    }

    #[test]
    fn naive_examples() {
        let r = Arc::new(RadixSequence::new(vec![3, 2, 2]).unwrap());
        let zero = LevelFunction::zeros(r.clone());
        assert!(naive_forward(&zero).coeffs().iter().all(|c| c.norm() == 0.0));
        let delta = LevelFunction::spike(r.clone(), 0, r.order() as f64).unwrap();
        assert!(naive_forward(&delta)
            .coeffs()
            .iter()
            .all(|c| (c - 1.0).norm() < 1e-14));
        let back = naive_inverse(&naive_forward(&delta));
        assert!(max_diff(back.values(), delta.values()) < 1e-12);
        let other = Arc::new(RadixSequence::dyadic(2).unwrap());
        assert!(NaiveTransform::new(other).forward(&zero).is_err());
    }

    #[test]
    fn fast_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut cases: Vec<Vec<usize>> = (1..=10).map(|k| vec![2; k]).collect();
        cases.extend((1..=6).map(|k| vec![3; k]));
        cases.extend([vec![2, 3, 4, 5], vec![5, 4, 3, 2], vec![3, 5, 2, 4], vec![7, 6], vec![4, 4, 4]]);
        for radices in cases {
            let r = Arc::new(RadixSequence::new(radices).unwrap());
            let plan = TransformPlan::new(r.clone());
            let naive = NaiveTransform::new(r.clone());
            for _ in 0..3 {
                let f = random_function(&r, &mut rng);
                let fast = plan.forward(&f).unwrap();
                let slow = naive.forward(&f).unwrap();
                let scale = f.max_abs();
                assert!(max_diff(fast.coeffs(), slow.coeffs()) <= 1e-10 * scale);
                let back = plan.inverse(&fast).unwrap();
                assert!(max_diff(back.values(), f.values()) <= 1e-10 * scale);
                let slow_back = naive.inverse(&fast).unwrap();
                assert!(max_diff(back.values(), slow_back.values()) <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = Arc::new(RadixSequence::new(vec![2, 3]).unwrap());
        let f = random_function(&r, &mut rng);
        let one = LevelFunction::constant(r.clone(), Complex64::new(1.0, 0.0));
        let mean = f.integral();
        let smoothed = convolve(&f, &one).unwrap();
        assert!(smoothed.values().iter().all(|v| (v - mean).norm() < 1e-14));
        let delta = LevelFunction::spike(r.clone(), 0, 6.0).unwrap();
        assert!(max_diff(convolve(&f, &delta).unwrap().values(), f.values()) < 1e-14);
        let k = random_function(&r, &mut rng);
        let fk = convolve(&f, &k).unwrap();
        assert!(max_diff(fk.values(), &direct_convolution(&f, &k)) < 1e-12);
        let other = Arc::new(RadixSequence::new(vec![3, 2]).unwrap());
        assert_eq!(
            convolve(&f, &LevelFunction::zeros(other)),
            Err(Error::RadixMismatch)
        );
    }

    #[test]
    fn structural_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for radices in [vec![2, 3, 2], vec![4, 3, 5], vec![2; 7]] {
            let r = Arc::new(RadixSequence::new(radices).unwrap());
            let f = random_function(&r, &mut rng);
            let g = random_function(&r, &mut rng);
            let (sf, sg) = (forward(&f), forward(&g));
            // Parseval with probability Haar measure.
            let lhs = sf.energy();
            let rhs = f.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / r.order() as f64;
            assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            // Convolution theorem.
            let sfg = forward(&convolve(&f, &g).unwrap());
            let product: Vec<_> = sf.coeffs().iter().zip(sg.coeffs()).map(|(a, b)| a * b).collect();
            assert!(max_diff(sfg.coeffs(), &product) < 1e-10);
            // Linearity.
            let (alpha, beta) = (Complex64::new(0.3, -2.0), Complex64::new(-1.5, 0.25));
            let combo = f.scale(alpha).add(&g.scale(beta)).unwrap();
            let expected: Vec<_> = sf
                .coeffs()
                .iter()
                .zip(sg.coeffs())
                .map(|(a, b)| alpha * a + beta * b)
                .collect();
            assert!(max_diff(forward(&combo).coeffs(), &expected) < 1e-10);
        }
    }

    #[test]
    fn plan_rejects_other_group() {
        let plan = TransformPlan::new(Arc::new(RadixSequence::dyadic(3).unwrap()));
        let f = LevelFunction::zeros(Arc::new(RadixSequence::new(vec![2, 4]).unwrap()));
        assert_eq!(plan.forward(&f).unwrap_err(), Error::RadixMismatch);
    }
}
