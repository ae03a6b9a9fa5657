//! Finite truncations `G_N = Z_{m_1} x ... x Z_{m_N}` of a Vilenkin group.
//!
//! Points are enumerated in mixed radix with the first coordinate varying
//! fastest: `n = sum_j n_j * M_{j-1}` where `M_0 = 1` and `M_j = m_1 * ... * m_j`.
//! The same enumeration is used for group points and for spectral indices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Radices `(m_1, ..., m_N)` of a level-`N` truncation together with the
/// block sizes `M_0, ..., M_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RadixSequence {
    radices: Vec<usize>,
    blocks: Vec<usize>,
    bound: usize,
    lcm: usize,
}

impl RadixSequence {
    pub fn new(radices: Vec<usize>) -> Result<Self> {
        if radices.is_empty() {
            return Err(Error::EmptyRadices);
        }
        let mut blocks = Vec::with_capacity(radices.len() + 1);
        blocks.push(1usize);
        for (index, &value) in radices.iter().enumerate() {
            if value < 2 {
                return Err(Error::RadixTooSmall {
                    index: index + 1,
                    value,
                });
            }
            let next = blocks[index]
                .checked_mul(value)
                .ok_or(Error::OrderOverflow)?;
            blocks.push(next);
        }
        let bound = *radices.iter().max().expect("non-empty");
        // lcm divides the group order, so it cannot overflow once the order fits.
        let lcm = radices.iter().fold(1usize, |acc, &m| acc / gcd(acc, m) * m);
        Ok(Self {
            radices,
            blocks,
            bound,
            lcm,
        })
    }

    /// The dyadic sequence `[2; levels]`.
    pub fn dyadic(levels: usize) -> Result<Self> {
        Self::new(vec![2; levels])
    }

    /// Concatenates `times` copies of this sequence.
    pub fn repeat(&self, times: usize) -> Result<Self> {
        Self::new(self.radices.repeat(times))
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Number of coordinates `N`.
    pub fn levels(&self) -> usize {
        self.radices.len()
    }

    /// `B = max_j m_j`.
    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Group order `M_N`.
    pub fn order(&self) -> usize {
        self.blocks[self.radices.len()]
    }

    /// `M_k = m_1 * ... * m_k` for `0 <= k <= N`.
    pub fn block(&self, k: usize) -> usize {
        self.blocks[k]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Least common multiple of the radices; every character value is a
    /// power of a primitive root of unity of this order.
    pub fn lcm(&self) -> usize {
        self.lcm
    }

    pub fn haar(&self) -> HaarLevel {
        HaarLevel {
            level_size: self.order(),
        }
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n >= self.order() {
            return Err(Error::IndexOutOfRange {
                index: n,
                bound: self.order(),
            });
        }
        Ok(())
    }

    /// Mixed-radix digits of `n`, least significant first.
    pub fn index_digits(&self, n: usize) -> Result<Vec<usize>> {
        self.check_index(n)?;
        Ok(self.digits_unchecked(n))
    }

    pub(crate) fn digits_unchecked(&self, mut n: usize) -> Vec<usize> {
        self.radices
            .iter()
            .map(|&m| {
                let d = n % m;
                n /= m;
                d
            })
            .collect()
    }

    /// `j`-th digit (0-based axis) of index `n`.
    #[inline]
    pub fn digit(&self, n: usize, axis: usize) -> usize {
        (n / self.blocks[axis]) % self.radices[axis]
    }

    /// Inverse of [`index_digits`](Self::index_digits).
    pub fn digits_index(&self, digits: &[usize]) -> Result<usize> {
        self.check_digits(digits)?;
        Ok(digits
            .iter()
            .zip(&self.blocks)
            .map(|(&d, &b)| d * b)
            .sum())
    }

    fn check_digits(&self, digits: &[usize]) -> Result<()> {
        if digits.len() != self.levels() {
            return Err(Error::LengthMismatch {
                expected: self.levels(),
                found: digits.len(),
            });
        }
        for (j, (&d, &m)) in digits.iter().zip(&self.radices).enumerate() {
            if d >= m {
                return Err(Error::DigitOutOfRange {
                    coordinate: j + 1,
                    value: d,
                    radix: m,
                });
            }
        }
        Ok(())
    }

    pub fn point(&self, digits: Vec<usize>) -> Result<GroupPoint> {
        self.check_digits(&digits)?;
        Ok(GroupPoint { digits })
    }

    pub fn point_at(&self, n: usize) -> Result<GroupPoint> {
        Ok(GroupPoint {
            digits: self.index_digits(n)?,
        })
    }

    pub fn zero(&self) -> GroupPoint {
        GroupPoint {
            digits: vec![0; self.levels()],
        }
    }

    /// Digit-wise addition modulo `m_j`, on enumeration indices.
    pub fn add_index(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        for (axis, &m) in self.radices.iter().enumerate() {
            let d = (self.digit(x, axis) + self.digit(y, axis)) % m;
            out += d * self.blocks[axis];
        }
        out
    }

    pub fn neg_index(&self, x: usize) -> usize {
        let mut out = 0;
        for (axis, &m) in self.radices.iter().enumerate() {
            let d = (m - self.digit(x, axis)) % m;
            out += d * self.blocks[axis];
        }
        out
    }

    pub fn sub_index(&self, x: usize, y: usize) -> usize {
        let mut out = 0;
        for (axis, &m) in self.radices.iter().enumerate() {
            let d = (self.digit(x, axis) + m - self.digit(y, axis)) % m;
            out += d * self.blocks[axis];
        }
        out
    }

    pub fn group_add(&self, x: &GroupPoint, y: &GroupPoint) -> Result<GroupPoint> {
        self.check_digits(&x.digits)?;
        self.check_digits(&y.digits)?;
        let digits = x
            .digits
            .iter()
            .zip(&y.digits)
            .zip(&self.radices)
            .map(|((&a, &b), &m)| (a + b) % m)
            .collect();
        Ok(GroupPoint { digits })
    }

    pub fn group_neg(&self, x: &GroupPoint) -> Result<GroupPoint> {
        self.check_digits(&x.digits)?;
        let digits = x
            .digits
            .iter()
            .zip(&self.radices)
            .map(|(&a, &m)| (m - a) % m)
            .collect();
        Ok(GroupPoint { digits })
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for RadixSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.radices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for RadixSequence {
    type Err = Error;

    /// Parses the comma-separated form, e.g. `"2,3,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyRadices);
        }
        let radices = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidArgument(format!("radix {part:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(radices)
    }
}

/// A point of `G_N` given by its digits `(x_1, ..., x_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupPoint {
    digits: Vec<usize>,
}

impl GroupPoint {
    pub fn digits(&self) -> &[usize] {
        &self.digits
    }
}

/// Normalized Haar measure on `G_N`: every atom has mass `1 / M_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HaarLevel {
    level_size: usize,
}

impl HaarLevel {
    pub fn level_size(&self) -> usize {
        self.level_size
    }

    pub fn atom_mass(&self) -> f64 {
        1.0 / self.level_size as f64
    }

    /// Measure of a set with `count` points.
    pub fn measure(&self, count: usize) -> f64 {
        count as f64 / self.level_size as f64
    }
}
