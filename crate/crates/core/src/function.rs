use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::format;
use crate::group::RadixSequence;

/// A complex-valued cylinder function of level `N`, stored by point index.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelFunction {
    radix: Arc<RadixSequence>,
    values: Vec<Complex64>,
}

impl LevelFunction {
    pub fn new(radix: Arc<RadixSequence>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != radix.order() {
            return Err(Error::LengthMismatch {
                expected: radix.order(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { radix, values })
    }

    pub fn from_real(radix: Arc<RadixSequence>, values: Vec<f64>) -> Result<Self> {
        Self::new(radix, values.into_iter().map(Complex64::from).collect())
    }

    /// Samples `f` at every point index. Panics on non-finite output.
    pub fn from_fn(radix: Arc<RadixSequence>, f: impl FnMut(usize) -> Complex64) -> Self {
        let values: Vec<_> = (0..radix.order()).map(f).collect();
        Self::new(radix, values).expect("sampled function must be finite")
    }

    pub fn zeros(radix: Arc<RadixSequence>) -> Self {
        let n = radix.order();
        Self {
            radix,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(radix: Arc<RadixSequence>, c: Complex64) -> Self {
        Self::from_fn(radix, |_| c)
    }

    pub fn indicator(radix: Arc<RadixSequence>, set: &PointSet) -> Self {
        let mut f = Self::zeros(radix);
        for &x in set.members() {
            f.values[x] = Complex64::new(1.0, 0.0);
        }
        f
    }

    /// `scale * chi_{x}` for a single atom `x`.
    pub fn spike(radix: Arc<RadixSequence>, x: usize, scale: f64) -> Result<Self> {
        if x >= radix.order() {
            return Err(Error::IndexOutOfRange {
                index: x,
                bound: radix.order(),
            });
        }
        let mut f = Self::zeros(radix);
        f.values[x] = Complex64::new(scale, 0.0);
        Ok(f)
    }

    pub fn radix(&self) -> &Arc<RadixSequence> {
        &self.radix
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn same_group(&self, other: &LevelFunction) -> bool {
        Arc::ptr_eq(&self.radix, &other.radix) || self.radix == other.radix
    }

    pub(crate) fn ensure_same_group(&self, other: &LevelFunction) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(Error::RadixMismatch)
        }
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Real parts; the imaginary parts are discarded.
    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_fn(self.radix.clone(), |x| f(self.values[x]))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn add(&self, other: &LevelFunction) -> Result<Self> {
        self.ensure_same_group(other)?;
        Ok(Self::from_fn(self.radix.clone(), |x| {
            self.values[x] + other.values[x]
        }))
    }

    pub fn sub(&self, other: &LevelFunction) -> Result<Self> {
        self.ensure_same_group(other)?;
        Ok(Self::from_fn(self.radix.clone(), |x| {
            self.values[x] - other.values[x]
        }))
    }

    /// `x -> f(x - s)` for a translation index `s`.
    pub fn translate(&self, s: usize) -> Self {
        Self::from_fn(self.radix.clone(), |x| {
            self.values[self.radix.sub_index(x, s)]
        })
    }

    /// Haar integral `(1/M_N) sum_x f(x)`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// `(int |f|^p dmu)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.moduli(), p)
    }

    /// Rows `index,re,im` with a header line; reals use 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,re,im\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{}", format::real(v.re), format::real(v.im));
        }
        out
    }

    pub fn from_csv(radix: Arc<RadixSequence>, text: &str) -> Result<Self> {
        let mut values = vec![None; radix.order()];
        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line == "index,re,im" {
                continue;
            }
            let bad = |reason: &str| Error::Csv {
                line: line_no,
                reason: reason.to_string(),
            };
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 3 {
                return Err(bad("expected 3 cells"));
            }
            let index: usize = cells[0].parse().map_err(|_| bad("bad index"))?;
            let re: f64 = cells[1].parse().map_err(|_| bad("bad real part"))?;
            let im: f64 = cells[2].parse().map_err(|_| bad("bad imaginary part"))?;
            let slot = values.get_mut(index).ok_or_else(|| bad("index out of range"))?;
            if slot.is_some() {
                return Err(bad("duplicate index"));
            }
            *slot = Some(Complex64::new(re, im));
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or(Error::Csv {
                    line: 0,
                    reason: format!("missing index {i}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(radix, values)
    }
}

pub(crate) fn lp_norm(moduli: &[f64], p: f64) -> f64 {
    let n = moduli.len() as f64;
    let s: f64 = moduli.iter().map(|v| v.powf(p)).sum();
    (s / n).powf(1.0 / p)
}

/// A subset of `G_N`, kept as sorted distinct point indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    order: usize,
    members: Vec<usize>,
}

impl PointSet {
    pub fn new(order: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&last) = members.last() {
            if last >= order {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    bound: order,
                });
            }
        }
        Ok(Self { order, members })
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        Self {
            order: mask.len(),
            members,
        }
    }

    /// Points whose index has bit `i` set in `bits` (groups of order <= 64).
    pub fn from_bits(order: usize, bits: u64) -> Self {
        debug_assert!(order <= 64);
        let members = (0..order).filter(|&i| bits >> i & 1 == 1).collect();
        Self { order, members }
    }

    pub fn whole(order: usize) -> Self {
        Self {
            order,
            members: (0..order).collect(),
        }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    /// Normalized Haar measure.
    pub fn measure(&self) -> f64 {
        self.members.len() as f64 / self.order as f64
    }
}
