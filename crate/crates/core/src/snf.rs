//! Smith normal form of sparse integer matrices.
//!
//! Elimination works on sparse rows and always pivots on an entry of minimal
//! absolute value, breaking ties by Markowitz cost `(row_nnz - 1) * (col_nnz - 1)`
//! and then by position. Boundary matrices of cell complexes are dominated by
//! unit entries, so most pivots isolate after a single round of row
//! operations. The diagonal produced this way is then brought into divisor
//! chain form by pairwise gcd/lcm exchange.
//!
//! Arithmetic is checked: fixed-width coefficient types report
//! [`SnfError::Overflow`] instead of wrapping, and every new entry is compared
//! against a configurable bit bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matrix::SparseMatrix;
use crate::scalar::Coefficient;

/// Default cap on the bit length of any intermediate entry.
pub const DEFAULT_MAX_ENTRY_BITS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnfConfig {
    pub max_entry_bits: u64,
}

impl Default for SnfConfig {
    fn default() -> Self {
        SnfConfig {
            max_entry_bits: DEFAULT_MAX_ENTRY_BITS,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("coefficient overflow in fixed-width arithmetic")]
    Overflow,
    #[error("entry of {bits} bits exceeds the bound of {bound} bits ({rows}x{cols} matrix, {eliminated} pivots done)")]
    EntryGrowth {
        bits: u64,
        bound: u64,
        rows: usize,
        cols: usize,
        eliminated: usize,
    },
}

/// Invariant factors `d_1 | d_2 | ... | d_r`, all positive; `r` is the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub invariants: Vec<T>,
}

impl<T: Coefficient> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// The invariant factors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &T> {
        self.invariants.iter().filter(|t| !t.is_one())
    }
}

pub fn smith_normal_form<T: Coefficient>(m: &SparseMatrix<T>, config: &SnfConfig) -> Result<SmithForm<T>, SnfError> {
    let mut work = Elimination::new(m, config.max_entry_bits);
    let diagonal = work.diagonalize()?;
    Ok(SmithForm {
        invariants: divisor_chain(diagonal)?,
    })
}

struct Elimination<T> {
    rows: Vec<Vec<(usize, T)>>,
    col_rows: Vec<BTreeSet<usize>>,
    bound: u64,
    shape: (usize, usize),
    eliminated: usize,
}

impl<T: Coefficient> Elimination<T> {
    fn new(m: &SparseMatrix<T>, bound: u64) -> Self {
        let mut rows = vec![Vec::new(); m.rows()];
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.triplets() {
            rows[r].push((c, v.clone()));
            col_rows[c].insert(r);
        }
        for row in &mut rows {
            row.sort_by_key(|(c, _)| *c);
        }
        Elimination {
            rows,
            col_rows,
            bound,
            shape: (m.rows(), m.cols()),
            eliminated: 0,
        }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&T> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |(col, _)| *col).ok().map(|i| &row[i].1)
    }

    fn check(&self, v: &T) -> Result<(), SnfError> {
        let bits = v.bit_len();
        if bits > self.bound {
            return Err(SnfError::EntryGrowth {
                bits,
                bound: self.bound,
                rows: self.shape.0,
                cols: self.shape.1,
                eliminated: self.eliminated,
            });
        }
        Ok(())
    }

    fn select_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            let row_cost = row.len().saturating_sub(1);
            for (c, v) in row {
                let abs = v.abs();
                let cost = row_cost * self.col_rows[*c].len().saturating_sub(1);
                let better = match &best {
                    None => true,
                    Some((b, bc, _, _)) => abs < *b || (abs == *b && cost < *bc),
                };
                if better {
                    if abs.is_one() && cost == 0 {
                        return Some((r, *c));
                    }
                    best = Some((abs, cost, r, *c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    /// `row[target] -= factor * row[source]`, keeping column occupancy in sync.
    fn row_axpy(&mut self, target: usize, source: usize, factor: &T) -> Result<(), SnfError> {
        let src = std::mem::take(&mut self.rows[source]);
        let dst = std::mem::take(&mut self.rows[target]);
        let mut out = Vec::with_capacity(dst.len() + src.len());
        let (mut i, mut j) = (0, 0);
        while i < dst.len() || j < src.len() {
            let take_dst = j == src.len() || (i < dst.len() && dst[i].0 < src[j].0);
            let take_src = i == dst.len() || (j < src.len() && src[j].0 < dst[i].0);
            if take_dst {
                out.push(dst[i].clone());
                i += 1;
            } else {
                let col = src[j].0;
                let prod = src[j].1.checked_mul(factor).ok_or(SnfError::Overflow)?;
                let base = if take_src { T::zero() } else { dst[i].1.clone() };
                let value = base.checked_sub(&prod).ok_or(SnfError::Overflow)?;
                self.check(&value)?;
                if value.is_zero() {
                    self.col_rows[col].remove(&target);
                } else {
                    if take_src {
                        self.col_rows[col].insert(target);
                    }
                    out.push((col, value));
                }
                if !take_src {
                    i += 1;
                }
                j += 1;
            }
        }
        self.rows[source] = src;
        self.rows[target] = out;
        Ok(())
    }

    fn diagonalize(&mut self) -> Result<Vec<T>, SnfError> {
        let mut diagonal = Vec::new();
        while let Some((mut r, mut c)) = self.select_pivot() {
            loop {
                // Clear column c with row operations against the pivot row.
                let pivot = self.entry(r, c).cloned().expect("pivot is nonzero");
                let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&i| i != r).collect();
                let mut smaller: Option<(T, usize)> = None;
                for i in others {
                    let a = self.entry(i, c).cloned().expect("occupancy is in sync");
                    let q = a.div_floor(&pivot);
                    if !q.is_zero() {
                        self.row_axpy(i, r, &q)?;
                    }
                    if let Some(rem) = self.entry(i, c) {
                        let abs = rem.abs();
                        if smaller.as_ref().is_none_or(|(b, _)| abs < *b) {
                            smaller = Some((abs, i));
                        }
                    }
                }
                if let Some((_, i)) = smaller {
                    r = i;
                    continue;
                }
                // Column c is clear; column operations now only touch row r.
                let mut smaller: Option<(T, usize)> = None;
                let row = std::mem::take(&mut self.rows[r]);
                let mut reduced = Vec::with_capacity(row.len());
                for (j, b) in row {
                    if j == c {
                        reduced.push((j, b));
                        continue;
                    }
                    let rem = b.mod_floor(&pivot);
                    if rem.is_zero() {
                        self.col_rows[j].remove(&r);
                    } else {
                        let abs = rem.abs();
                        if smaller.as_ref().is_none_or(|(best, _)| abs < *best) {
                            smaller = Some((abs, j));
                        }
                        reduced.push((j, rem));
                    }
                }
                self.rows[r] = reduced;
                if let Some((_, j)) = smaller {
                    c = j;
                    continue;
                }
                // Isolated pivot.
                self.col_rows[c].remove(&r);
                self.rows[r].clear();
                diagonal.push(pivot.abs());
                self.eliminated += 1;
                break;
            }
        }
        Ok(diagonal)
    }
}

/// Rearranges a diagonal into a divisibility chain with the same product of
/// prime powers.
fn divisor_chain<T: Coefficient>(mut d: Vec<T>) -> Result<Vec<T>, SnfError> {
    let n = d.len();
    for i in 0..n {
        if d[i].is_one() {
            continue;
        }
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = (d[i].clone() / g.clone()).checked_mul(&d[j]).ok_or(SnfError::Overflow)?;
            d[i] = g;
            d[j] = l;
        }
    }
    d.sort();
    Ok(d)
}
