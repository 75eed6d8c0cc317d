//! Dense Boolean and min-plus matrices.
//!
//! Products split output rows across the current rayon pool. Every row is
//! computed independently, so results do not depend on the worker count.

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::VertexSubset;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemiringError {
    #[error("dimension mismatch: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("row index {index} out of range for matrix with {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },
    #[error("{0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("approximation parameter must be positive and finite, got {0}")]
    InvalidXi(f64),
}

const WORD: usize = 64;

/// Row-major bit-packed matrix over ({0,1}, or, and).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                m.set(i, j, b);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.words_per_row + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let word = &mut self.bits[i * self.words_per_row + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Column indices set in row `i`, ascending.
    pub fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i)
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| BitIter(word).map(move |b| w * WORD + b))
    }

    pub fn row_to_vec(&self, i: usize) -> Vec<bool> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Entrywise OR with `other`.
    pub fn or_assign(&mut self, other: &BoolMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= b;
        }
    }

    /// Rows listed in `rows`, in order.
    pub fn rows_restrict(&self, rows: &VertexSubset) -> Result<BoolMatrix, SemiringError> {
        let mut out = Self::zeros(rows.len(), self.cols);
        for (dst, src) in rows.iter().enumerate() {
            if src >= self.rows {
                return Err(SemiringError::RowOutOfRange {
                    index: src,
                    rows: self.rows,
                });
            }
            let w = self.words_per_row;
            out.bits[dst * w..(dst + 1) * w].copy_from_slice(self.row_words(src));
        }
        Ok(out)
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Boolean product `C[i,j] = OR_k (B[i,k] AND A[k,j])`.
pub fn bool_matmul(b: &BoolMatrix, a: &BoolMatrix) -> Result<BoolMatrix, SemiringError> {
    if b.cols != a.rows {
        return Err(SemiringError::DimensionMismatch {
            left_rows: b.rows,
            left_cols: b.cols,
            right_rows: a.rows,
            right_cols: a.cols,
        });
    }
    let mut out = BoolMatrix::zeros(b.rows, a.cols);
    let w = out.words_per_row;
    if w > 0 {
        out.bits
            .par_chunks_mut(w)
            .enumerate()
            .for_each(|(i, row)| {
                for k in b.row_ones(i) {
                    for (dst, src) in row.iter_mut().zip(a.row_words(k)) {
                        *dst |= src;
                    }
                }
            });
    }
    Ok(out)
}

/// Sentinel for an absent path. Saturating addition keeps it closed under `min`.
pub const INF: u64 = u64::MAX;

#[inline]
pub fn add_dist(a: u64, b: u64) -> u64 {
    if a == INF || b == INF {
        INF
    } else {
        a.saturating_add(b)
    }
}

/// Row-major matrix over (N ∪ {∞}, min, +).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DistMatrix {
    pub fn filled(rows: usize, cols: usize, value: u64) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn infinite(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, INF)
    }

    /// Min-plus identity: zeros on the diagonal, ∞ elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::infinite(n, n);
        for i in 0..n {
            m.set(i, i, 0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    /// Largest finite entry, if any.
    pub fn max_finite(&self) -> Option<u64> {
        self.data.iter().copied().filter(|&x| x != INF).max()
    }

    /// Entrywise minimum with `other`.
    pub fn min_assign(&mut self, other: &DistMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = (*a).min(b);
        }
    }

    pub fn rows_restrict(&self, rows: &VertexSubset) -> Result<DistMatrix, SemiringError> {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for src in rows.iter() {
            if src >= self.rows {
                return Err(SemiringError::RowOutOfRange {
                    index: src,
                    rows: self.rows,
                });
            }
            data.extend_from_slice(self.row(src));
        }
        Ok(Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        })
    }
}

/// Exact distance product `C[i,j] = min_k (B[i,k] + A[k,j])`.
pub fn minplus_product(b: &DistMatrix, a: &DistMatrix) -> Result<DistMatrix, SemiringError> {
    if b.cols != a.rows {
        return Err(SemiringError::DimensionMismatch {
            left_rows: b.rows,
            left_cols: b.cols,
            right_rows: a.rows,
            right_cols: a.cols,
        });
    }
    let mut out = DistMatrix::infinite(b.rows, a.cols);
    if a.cols > 0 {
        out.data
            .par_chunks_mut(a.cols)
            .enumerate()
            .for_each(|(i, row)| {
                for (k, &bik) in b.row(i).iter().enumerate() {
                    if bik == INF {
                        continue;
                    }
                    for (dst, &akj) in row.iter_mut().zip(a.row(k)) {
                        if akj != INF {
                            let cand = bik.saturating_add(akj);
                            if cand < *dst {
                                *dst = cand;
                            }
                        }
                    }
                }
            });
    }
    Ok(out)
}

/// Drops entries above `radix · 2^level` to ∞ and divides the rest by
/// `2^level`, rounding up.
pub fn scale_clamp(m: &DistMatrix, level: u32, radix: u64) -> Result<DistMatrix, SemiringError> {
    if !radix.is_power_of_two() {
        return Err(SemiringError::NotPowerOfTwo(radix));
    }
    let threshold = radix.checked_shl(level).unwrap_or(INF);
    let step = 1u64.checked_shl(level).unwrap_or(INF);
    let data = m
        .data
        .iter()
        .map(|&e| {
            if e == INF || e > threshold {
                INF
            } else {
                e.div_ceil(step)
            }
        })
        .collect();
    Ok(DistMatrix {
        rows: m.rows,
        cols: m.cols,
        data,
    })
}

/// `(1 + 4ξ)`-approximate distance product by bit-level scaling.
///
/// For `k = 0..=m-r` both inputs are clamped and scaled by [`scale_clamp`],
/// multiplied exactly, scaled back by `2^k` and min-combined. `2^m` bounds the
/// finite inputs and `2^r ≥ 1/ξ`. Falls back to the exact product when
/// `ξ ≥ 1` or `2^m ≤ 2^r`. Every output entry `x` satisfies
/// `exact ≤ x ≤ (1 + 4ξ)·exact`.
pub fn approx_distance_product(
    b: &DistMatrix,
    a: &DistMatrix,
    xi: f64,
) -> Result<DistMatrix, SemiringError> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(SemiringError::InvalidXi(xi));
    }
    if b.cols != a.rows {
        return Err(SemiringError::DimensionMismatch {
            left_rows: b.rows,
            left_cols: b.cols,
            right_rows: a.rows,
            right_cols: a.cols,
        });
    }
    let levels = match scaling_levels(b, a, xi) {
        Some(levels) => levels,
        None => return minplus_product(b, a),
    };
    let mut out = DistMatrix::infinite(b.rows, a.cols);
    for k in 0..=levels.top {
        let bk = scale_clamp(b, k, levels.radix)?;
        let ak = scale_clamp(a, k, levels.radix)?;
        let ck = minplus_product(&bk, &ak)?;
        for (dst, &c) in out.data.iter_mut().zip(&ck.data) {
            if c != INF {
                *dst = (*dst).min(c << k);
            }
        }
    }
    Ok(out)
}

struct ScalingLevels {
    radix: u64,
    top: u32,
}

fn scaling_levels(b: &DistMatrix, a: &DistMatrix, xi: f64) -> Option<ScalingLevels> {
    if xi >= 1.0 {
        return None;
    }
    let radix = ((1.0 / xi).ceil() as u64).max(1).next_power_of_two();
    let bound = b.max_finite().into_iter().chain(a.max_finite()).max()?;
    let bound = bound.max(1).checked_next_power_of_two()?;
    if bound <= radix {
        return None;
    }
    Some(ScalingLevels {
        radix,
        top: bound.trailing_zeros() - radix.trailing_zeros(),
    })
}
