//! Sparse Gaussian elimination restricted to unit pivots.
//!
//! A unit pivot at `(r, c)` splits the matrix as `[u] ⊕ M'` by unimodular
//! operations: clear column `c` with row operations, after which row `r` can
//! be cleared by column operations that touch nothing else. So the pivot row
//! and column are simply dropped. Over a field every nonzero entry is a
//! unit and this computes the rank; over `Z` it peels off all the `1`s of the
//! Smith normal form and leaves a small remainder for the dense solver.
//!
//! Pivots are chosen to keep fill-in low: singleton lines first, then the
//! sparsest column, and within it the shortest row holding a unit.
//!
//! The eliminator works on the *columns* of the input as its rows. Rank and
//! Smith invariants do not see the transpose.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;

pub(crate) trait Ring: Sync {
    type E: Clone + PartialEq + Send + Sync;

    fn lift(&self, v: i64) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn is_unit(&self, a: &Self::E) -> bool;
    /// `a − f·b`, `None` on overflow.
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Option<Self::E>;
    /// `a / u` for a unit `u`, `None` on overflow.
    fn div_unit(&self, a: &Self::E, u: &Self::E) -> Option<Self::E>;
    fn to_big(&self, a: &Self::E) -> BigInt;
}

/// Machine integers with overflow detection.
pub(crate) struct CheckedI64;

impl Ring for CheckedI64 {
    type E = i64;
    fn lift(&self, v: i64) -> i64 {
        v
    }
    fn is_zero(&self, a: &i64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &i64) -> bool {
        *a == 1 || *a == -1
    }
    fn sub_mul(&self, a: &i64, f: &i64, b: &i64) -> Option<i64> {
        a.checked_sub(f.checked_mul(*b)?)
    }
    fn div_unit(&self, a: &i64, u: &i64) -> Option<i64> {
        a.checked_mul(*u)
    }
    fn to_big(&self, a: &i64) -> BigInt {
        BigInt::from(*a)
    }
}

pub(crate) struct BigIntegers;

impl Ring for BigIntegers {
    type E = BigInt;
    fn lift(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.abs().is_one()
    }
    fn sub_mul(&self, a: &BigInt, f: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(a - f * b)
    }
    fn div_unit(&self, a: &BigInt, u: &BigInt) -> Option<BigInt> {
        Some(a * u)
    }
    fn to_big(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// The prime field `F_p`, `p < 2^32`.
pub(crate) struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn inverse(&self, a: u64) -> u64 {
        // Fermat
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }
}

impl Ring for PrimeField {
    type E = u64;
    fn lift(&self, v: i64) -> u64 {
        self.reduce(v)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> Option<u64> {
        Some((a + self.p - f * b % self.p) % self.p)
    }
    fn div_unit(&self, a: &u64, u: &u64) -> Option<u64> {
        Some(a * self.inverse(*u) % self.p)
    }
    fn to_big(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
}

#[derive(Debug)]
pub(crate) struct Overflow;

pub(crate) struct Eliminator<'a, R: Ring> {
    ring: &'a R,
    rows: Vec<Vec<(u32, R::E)>>,
    alive: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    col_done: Vec<bool>,
    stuck: Vec<bool>,
    pivots: Vec<(u32, u32)>,
}

/// What is left after unit elimination: rows (as `(col, value)` lists) over
/// the surviving columns, renumbered from 0. `row_ids` and `col_ids` give the
/// original indices.
pub(crate) struct Remainder {
    pub rows: Vec<Vec<(u32, BigInt)>>,
    pub ncols: usize,
    pub row_ids: Vec<u32>,
    pub col_ids: Vec<u32>,
}

impl Remainder {
    /// Drop the given original columns.
    pub fn without_cols(self, dead: &[bool]) -> Remainder {
        let keep: Vec<bool> = self.col_ids.iter().map(|&c| !dead[c as usize]).collect();
        let mut remap = vec![u32::MAX; self.ncols];
        let mut col_ids = Vec::new();
        for (j, &k) in keep.iter().enumerate() {
            if k {
                remap[j] = col_ids.len() as u32;
                col_ids.push(self.col_ids[j]);
            }
        }
        let mut rows = Vec::new();
        let mut row_ids = Vec::new();
        for (row, id) in self.rows.into_iter().zip(self.row_ids) {
            let row: Vec<(u32, BigInt)> = row
                .into_iter()
                .filter(|(c, _)| keep[*c as usize])
                .map(|(c, v)| (remap[c as usize], v))
                .collect();
            if !row.is_empty() {
                rows.push(row);
                row_ids.push(id);
            }
        }
        Remainder {
            rows,
            ncols: col_ids.len(),
            row_ids,
            col_ids,
        }
    }
}

impl<'a, R: Ring> Eliminator<'a, R> {
    /// Rows of the eliminator are the columns of `m`.
    pub fn new(ring: &'a R, m: &SparseMatrix) -> Self {
        let nlines = m.nrows();
        let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); nlines];
        let mut col_count = vec![0u32; nlines];
        let mut rows = Vec::with_capacity(m.ncols());
        for (r, c) in m.columns().iter().enumerate() {
            let row: Vec<(u32, R::E)> = c
                .iter()
                .map(|&(i, v)| (i, ring.lift(v)))
                .filter(|(_, v)| !ring.is_zero(v))
                .collect();
            for (i, _) in &row {
                col_rows[*i as usize].push(r as u32);
                col_count[*i as usize] += 1;
            }
            rows.push(row);
        }
        Self {
            ring,
            alive: vec![true; rows.len()],
            rows,
            col_rows,
            col_count,
            col_done: vec![false; nlines],
            stuck: vec![false; nlines],
            pivots: Vec::new(),
        }
    }

    fn entry(&self, r: usize, c: u32) -> Option<&R::E> {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| &row[i].1)
    }

    /// Run unit elimination to exhaustion; returns the number of pivots.
    pub fn run(&mut self) -> Result<usize, Overflow> {
        let mut heap: BinaryHeap<Reverse<(u32, u32)>> = BinaryHeap::new();
        for c in 0..self.col_count.len() {
            if self.col_count[c] > 0 {
                heap.push(Reverse((self.col_count[c], c as u32)));
            }
        }
        let mut singles: Vec<u32> = (0..self.rows.len() as u32)
            .filter(|&r| self.is_unit_singleton(r as usize))
            .collect();

        loop {
            if let Some(r) = singles.pop() {
                let r = r as usize;
                if self.alive[r] && self.is_unit_singleton(r) {
                    let c = self.rows[r][0].0;
                    self.eliminate(r, c, &mut heap, &mut singles)?;
                }
                continue;
            }
            let Some(Reverse((count, c))) = heap.pop() else {
                break;
            };
            let cu = c as usize;
            if self.col_done[cu] || self.col_count[cu] != count || count == 0 || self.stuck[cu] {
                continue;
            }
            let candidates = self.live_rows(c);
            let best = candidates
                .iter()
                .copied()
                .filter(|&r| self.entry(r as usize, c).is_some_and(|v| self.ring.is_unit(v)))
                .min_by_key(|&r| (self.rows[r as usize].len(), r));
            match best {
                Some(r) => self.eliminate(r as usize, c, &mut heap, &mut singles)?,
                None => self.stuck[cu] = true,
            }
        }
        Ok(self.pivots.len())
    }

    /// `(row, column)` of each pivot, in elimination order.
    pub fn pivots(&self) -> &[(u32, u32)] {
        &self.pivots
    }

    fn is_unit_singleton(&self, r: usize) -> bool {
        self.rows[r].len() == 1 && self.ring.is_unit(&self.rows[r][0].1)
    }

    /// Alive rows with a nonzero entry in column `c`; compacts the list.
    fn live_rows(&mut self, c: u32) -> Vec<u32> {
        let mut list = std::mem::take(&mut self.col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.alive[r as usize] && self.entry(r as usize, c).is_some());
        self.col_rows[c as usize] = list.clone();
        list
    }

    fn eliminate(
        &mut self,
        r: usize,
        c: u32,
        heap: &mut BinaryHeap<Reverse<(u32, u32)>>,
        singles: &mut Vec<u32>,
    ) -> Result<(), Overflow> {
        let ring = self.ring;
        let pivot = self.entry(r, c).expect("pivot present").clone();
        let others: Vec<u32> = self.live_rows(c).into_iter().filter(|&k| k as usize != r).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        self.alive[r] = false;
        self.col_done[c as usize] = true;
        self.pivots.push((r as u32, c));

        let mut touched: Vec<u32> = Vec::new();
        for &(l, _) in &pivot_row {
            self.col_count[l as usize] -= 1;
            touched.push(l);
        }

        for k in others {
            let k = k as usize;
            let a = self.entry(k, c).expect("listed").clone();
            let f = ring.div_unit(&a, &pivot).ok_or(Overflow)?;
            let old = std::mem::take(&mut self.rows[k]);
            let mut merged: Vec<(u32, R::E)> = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let take_old = j >= pivot_row.len() || (i < old.len() && old[i].0 < pivot_row[j].0);
                let take_piv = i >= old.len() || (j < pivot_row.len() && pivot_row[j].0 < old[i].0);
                if take_old {
                    merged.push(old[i].clone());
                    i += 1;
                } else if take_piv {
                    let (l, ref b) = pivot_row[j];
                    let v = ring.sub_mul(&ring.lift(0), &f, b).ok_or(Overflow)?;
                    if l != c && !ring.is_zero(&v) {
                        self.col_count[l as usize] += 1;
                        self.col_rows[l as usize].push(k as u32);
                        self.stuck[l as usize] = false;
                        touched.push(l);
                        merged.push((l, v));
                    }
                    j += 1;
                } else {
                    let l = old[i].0;
                    let v = ring.sub_mul(&old[i].1, &f, &pivot_row[j].1).ok_or(Overflow)?;
                    if l == c || ring.is_zero(&v) {
                        self.col_count[l as usize] -= 1;
                    } else {
                        merged.push((l, v));
                    }
                    self.stuck[l as usize] = false;
                    touched.push(l);
                    i += 1;
                    j += 1;
                }
            }
            self.rows[k] = merged;
            if self.is_unit_singleton(k) {
                singles.push(k as u32);
            }
        }
        self.col_rows[c as usize].clear();

        touched.sort_unstable();
        touched.dedup();
        for l in touched {
            let lu = l as usize;
            if !self.col_done[lu] && self.col_count[lu] > 0 {
                heap.push(Reverse((self.col_count[lu], l)));
            }
        }
        Ok(())
    }

    pub fn remainder(&self) -> Remainder {
        let live_cols: Vec<usize> = (0..self.col_count.len())
            .filter(|&c| !self.col_done[c] && self.col_count[c] > 0)
            .collect();
        let mut remap = vec![u32::MAX; self.col_count.len()];
        for (i, &c) in live_cols.iter().enumerate() {
            remap[c] = i as u32;
        }
        let mut rows = Vec::new();
        let mut row_ids = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            if self.alive[r] && !row.is_empty() {
                rows.push(
                    row.iter()
                        .map(|(c, v)| (remap[*c as usize], self.ring.to_big(v)))
                        .collect(),
                );
                row_ids.push(r as u32);
            }
        }
        Remainder {
            rows,
            ncols: live_cols.len(),
            row_ids,
            col_ids: live_cols.into_iter().map(|c| c as u32).collect(),
        }
    }
}

/// Rank over `F_p`.
#[cfg(test)]
fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let field = PrimeField { p };
    let mut e = Eliminator::new(&field, m);
    e.run().expect("field arithmetic cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_pivots_over_integers() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![1, -1, 0], vec![0, 0, 3]]);
        let mut e = Eliminator::new(&CheckedI64, &m);
        assert_eq!(e.run().unwrap(), 1);
        let rem = e.remainder();
        assert_eq!(rem.rows.len(), 2);
        assert_eq!(rem.ncols, 2);
    }

    #[test]
    fn field_rank() {
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(rank_mod_p(&m, 2), 1);
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
        let singular = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]);
        assert_eq!(rank_mod_p(&singular, 7919), 2);
    }

    #[test]
    fn overflow_detected() {
        let big = i64::MAX / 2 + 7;
        let m = SparseMatrix::from_dense(&[vec![1, big], vec![-big, 1]]);
        let mut e = Eliminator::new(&CheckedI64, &m);
        assert!(e.run().is_err());
        let mut e = Eliminator::new(&BigIntegers, &m);
        assert_eq!(e.run().unwrap(), 1);
        let rem = e.remainder();
        let b = BigInt::from(big);
        assert_eq!(rem.rows, vec![vec![(0, &b * &b + 1)]]);
    }
}
