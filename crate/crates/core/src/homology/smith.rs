//! Smith normal form over `Z`.
//!
//! Two routes: [`smith_dense`] is the textbook algorithm on a dense
//! `BigInt` matrix and can return the unimodular transforms; [`smith_sparse`]
//! peels off unit pivots with sparse elimination first and hands only the
//! remainder to the dense routine. Homology always uses the sparse route.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::eliminate::{BigIntegers, CheckedI64, Eliminator, Remainder};
use super::matrix::SparseMatrix;

pub type BigMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero invariant factors `d_1 | d_2 | ⋯ | d_r`, all positive.
    pub divisors: Vec<BigInt>,
    /// `U` (rows × rows) and `V` (cols × cols), unimodular, with
    /// `U · M · V = diag(d_1, …, d_r, 0, …)`.
    pub transforms: Option<(BigMatrix, BigMatrix)>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors greater than one.
    pub fn torsion(&self) -> impl Iterator<Item = &BigInt> {
        self.divisors.iter().filter(|d| !d.is_one())
    }
}

fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// `dst ← dst − q·src` on rows.
fn sub_row(m: &mut BigMatrix, dst: usize, src: usize, q: &BigInt) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn sub_col(m: &mut BigMatrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let y = q * &row[src];
            row[dst] -= y;
        }
    }
}

fn swap_cols(m: &mut BigMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Dense Smith normal form. Transforms are tracked only when asked for.
///
/// Each step moves the smallest nonzero entry of the trailing block to the
/// pivot and reduces its row and column by Euclidean division, so entries
/// stay close to the size of the minors they encode.
pub fn smith_dense(m: &BigMatrix, want_transforms: bool) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut u = want_transforms.then(|| identity(rows));
    let mut v = want_transforms.then(|| identity(cols));
    let mut divisors = Vec::new();

    let mut t = 0;
    while t < rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap(t, pi);
            }
            swap_cols(&mut a, t, pj);
            if let Some(v) = v.as_mut() {
                swap_cols(v, t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                sub_row(&mut a, i, t, &q);
                if let Some(u) = u.as_mut() {
                    sub_row(u, i, t, &q);
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                sub_col(&mut a, j, t, &q);
                if let Some(v) = v.as_mut() {
                    sub_col(v, j, t, &q);
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole trailing block
            let p = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &p).is_zero()));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_row(&mut a, t, i, &minus_one);
                    if let Some(u) = u.as_mut() {
                        sub_row(u, t, i, &minus_one);
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_zero() {
            break;
        }

        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(u) = u.as_mut() {
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        divisors.push(a[t][t].clone());
        t += 1;
    }

    SmithForm {
        divisors,
        transforms: u.zip(v),
    }
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &BigMatrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return sign;
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn remainder_to_dense(rem: &Remainder) -> BigMatrix {
    let mut out = vec![vec![BigInt::zero(); rem.ncols]; rem.rows.len()];
    for (i, row) in rem.rows.iter().enumerate() {
        for (j, val) in row {
            out[i][*j as usize] = val.clone();
        }
    }
    out
}

/// Invariant factors of a sparse integer matrix. Unit pivots run in checked
/// `i64` arithmetic; on overflow the elimination restarts over `BigInt`.
pub fn smith_sparse(m: &SparseMatrix) -> SmithForm {
    let (units, rem) = {
        let mut e = Eliminator::new(&CheckedI64, m);
        match e.run() {
            Ok(r) => (r, e.remainder()),
            Err(_) => {
                let mut e = Eliminator::new(&BigIntegers, m);
                let r = e.run().expect("bigint elimination cannot overflow");
                (r, e.remainder())
            }
        }
    };
    let mut divisors = vec![BigInt::one(); units];
    if !rem.rows.is_empty() {
        divisors.extend(smith_dense(&remainder_to_dense(&rem), false).divisors);
    }
    SmithForm {
        divisors,
        transforms: None,
    }
}

/// Smith normal form of a sparse matrix; with transforms the dense route is
/// used on the whole matrix.
pub fn smith_normal_form(m: &SparseMatrix, want_transforms: bool) -> SmithForm {
    if want_transforms {
        smith_dense(&m.to_big_dense(), true)
    } else {
        smith_sparse(m)
    }
}

pub fn mat_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let n = a.len();
    let k = b.len();
    let p = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![BigInt::zero(); p]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..p {
                out[i][j] += &a[i][l] * &b[l][j];
            }
        }
    }
    out
}

/// Check `U · M · V = diag(divisors)`, with `U`, `V` of determinant ±1.
pub fn verify_transforms(m: &BigMatrix, form: &SmithForm) -> bool {
    let Some((u, v)) = &form.transforms else {
        return false;
    };
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if u.len() != rows || v.len() != cols {
        return false;
    }
    let d = mat_mul(&mat_mul(u, m), v);
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let on_diagonal = i == j && i < form.divisors.len();
            if (on_diagonal && *x != form.divisors[i]) || (!on_diagonal && !x.is_zero()) {
                return false;
            }
        }
    }
    let unimodular = |x: &BigMatrix| determinant(x).magnitude().is_one();
    unimodular(u) && unimodular(v)
}

pub fn divisor_chain_holds(divisors: &[BigInt]) -> bool {
    divisors.iter().all(|d| d.is_positive()) && divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}
