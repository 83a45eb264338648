use std::io::{self, Write};

use num_bigint::BigInt;

/// Column-compressed integer matrix. Each column is sorted by row with no
/// explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            cols: vec![Vec::new(); ncols],
        }
    }

    /// Build from columns of `(row, value)` pairs in any order; duplicate
    /// rows are summed and zeros dropped.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(u32, i64)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    assert!((r as usize) < nrows, "row {r} out of range");
                    match out.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|e| e.1 != 0);
                out
            })
            .collect::<Vec<_>>();
        Self {
            nrows,
            ncols: cols.len(),
            cols,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| {
                (0..nrows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        Self { nrows, ncols, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn columns(&self) -> &[Vec<(u32, i64)>] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.ncols]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                out[i as usize][j] = v;
            }
        }
        out
    }

    pub fn to_big_dense(&self) -> Vec<Vec<BigInt>> {
        self.to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    /// `self · rhs`, or `None` if an entry overflows.
    pub fn checked_mul(&self, rhs: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.ncols, rhs.nrows, "dimension mismatch");
        let mut cols = Vec::with_capacity(rhs.ncols);
        let mut acc: Vec<i64> = vec![0; self.nrows];
        let mut touched: Vec<u32> = Vec::new();
        for c in &rhs.cols {
            for &(k, b) in c {
                for &(i, a) in &self.cols[k as usize] {
                    let slot = &mut acc[i as usize];
                    if *slot == 0 {
                        touched.push(i);
                    }
                    *slot = slot.checked_add(a.checked_mul(b)?)?;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let col: Vec<(u32, i64)> = touched
                .iter()
                .filter(|&&i| acc[i as usize] != 0)
                .map(|&i| (i, acc[i as usize]))
                .collect();
            for &i in &touched {
                acc[i as usize] = 0;
            }
            touched.clear();
            cols.push(col);
        }
        Some(SparseMatrix {
            nrows: self.nrows,
            ncols: rhs.ncols,
            cols,
        })
    }

    /// Coordinate triplets `row col value`, 0-based, one per line.
    pub fn write_triplets<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                writeln!(out, "{i} {j} {v}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_summed() {
        let m = SparseMatrix::from_columns(2, vec![vec![(1, 1), (0, 2), (1, -1)]]);
        assert_eq!(m.columns()[0], vec![(0, 2)]);
        assert_eq!(m.to_dense(), vec![vec![2], vec![0]]);
    }

    #[test]
    fn product() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1, 0], vec![-1, 1]]);
        let c = a.checked_mul(&b).unwrap();
        assert_eq!(c.to_dense(), vec![vec![-1, 2], vec![-1, 1]]);
        let big = SparseMatrix::from_dense(&[vec![i64::MAX]]);
        assert!(big.checked_mul(&SparseMatrix::from_dense(&[vec![2]])).is_none());
    }

    #[test]
    fn triplets() {
        let a = SparseMatrix::from_dense(&[vec![0, -1], vec![3, 0]]);
        let mut buf = Vec::new();
        a.write_triplets(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1 0 3\n0 1 -1\n");
    }
}
