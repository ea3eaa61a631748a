//! Packed binary words and incremental GF(2) elimination.

use std::fmt;

use crate::error::{Error, Result};

/// A binary word packed into 64-bit limbs, most significant bit first, so the
/// derived ordering is lexicographic for words of equal length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord {
    limbs: Vec<u64>,
    len: usize,
}

impl BinaryWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            limbs: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            w.set(i, true);
        }
        w
    }

    /// Builds a word from `0|1` bytes; nonzero bytes count as one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.set(i, true);
            }
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range");
        self.limbs[i / 64] >> (63 - i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range");
        let mask = 1u64 << (63 - i % 64);
        if value {
            self.limbs[i / 64] |= mask;
        } else {
            self.limbs[i / 64] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    pub(crate) fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= b;
        }
    }

    pub fn distance(&self, other: &Self) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch(self.len, other.len));
        }
        Ok(self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Index of the first set bit.
    pub fn leading_one(&self) -> Option<usize> {
        self.limbs
            .iter()
            .position(|&l| l != 0)
            .map(|p| p * 64 + self.limbs[p].leading_zeros() as usize)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// Sub-word made of the listed bit positions, in the given order.
    pub fn select(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(j, true);
            }
        }
        out
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Hamming weight.
pub fn weight(w: &BinaryWord) -> usize {
    w.weight()
}

/// Hamming distance; errors on unequal lengths.
pub fn distance(a: &BinaryWord, b: &BinaryWord) -> Result<usize> {
    a.distance(b)
}

/// Row-echelon basis of a GF(2) subspace, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    // Reduced rows, each with a distinct leading one.
    rows: Vec<(usize, BinaryWord)>,
    // The inserted vectors that enlarged the span, in insertion order.
    accepted: Vec<BinaryWord>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    fn reduce(&self, w: &BinaryWord) -> BinaryWord {
        let mut v = w.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Adds `w`; returns whether it enlarged the span.
    pub fn insert(&mut self, w: &BinaryWord) -> bool {
        let v = self.reduce(w);
        match v.leading_one() {
            None => false,
            Some(pivot) => {
                for (_, row) in self.rows.iter_mut() {
                    if row.get(pivot) {
                        row.xor_assign(&v);
                    }
                }
                self.rows.push((pivot, v));
                self.accepted.push(w.clone());
                true
            }
        }
    }

    pub fn contains(&self, w: &BinaryWord) -> bool {
        self.reduce(w).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The inserted words that were independent, in insertion order.
    pub fn basis(&self) -> &[BinaryWord] {
        &self.accepted
    }
}
