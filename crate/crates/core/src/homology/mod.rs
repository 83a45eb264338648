//! Chain complexes and their exact integral homology.

mod eliminate;
pub mod group;
pub mod matrix;
mod reduce;
pub mod smith;

use std::io::{self, Write};

pub use group::{AbelianGroup, GradedAbelianGroup};
pub use matrix::SparseMatrix;
pub use reduce::reduce;
pub use smith::{smith_normal_form, SmithForm};

use crate::error::{Error, Result};
use crate::par;
use eliminate::{BigIntegers, CheckedI64, Eliminator, PrimeField, Remainder, Ring};

/// A bounded chain complex of free abelian groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    /// `boundaries[n]` is `∂_n : C_n → C_{n-1}`; `boundaries[0]` is `C_0 → 0`.
    boundaries: Vec<SparseMatrix>,
    certified_through: usize,
    complete: bool,
}

impl ChainComplex {
    /// `boundaries[n-1]` is `∂_n` for `n = 1..`; homology is certified through
    /// `certified_through` (at most one below the top chain degree unless
    /// `complete`).
    pub fn new(
        ranks: Vec<usize>,
        boundaries_from_1: Vec<SparseMatrix>,
        certified_through: usize,
        complete: bool,
    ) -> Result<Self> {
        if boundaries_from_1.len() + 1 != ranks.len() {
            return Err(Error::InvalidInput("one boundary matrix per positive degree".into()));
        }
        let mut boundaries = vec![SparseMatrix::zeros(0, ranks[0])];
        for (i, b) in boundaries_from_1.into_iter().enumerate() {
            let n = i + 1;
            if b.ncols() != ranks[n] || b.nrows() != ranks[n - 1] {
                return Err(Error::InvalidInput(format!(
                    "boundary in degree {n} is {}x{}, expected {}x{}",
                    b.nrows(),
                    b.ncols(),
                    ranks[n - 1],
                    ranks[n]
                )));
            }
            boundaries.push(b);
        }
        let top = ranks.len() - 1;
        let certified_through = if complete {
            certified_through
        } else {
            certified_through.min(top.saturating_sub(1))
        };
        Ok(Self {
            ranks,
            boundaries,
            certified_through,
            complete,
        })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn certified_through(&self) -> usize {
        self.certified_through
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rank(&self, n: usize) -> usize {
        self.ranks.get(n).copied().unwrap_or(0)
    }

    /// `∂_n`, or `None` above the top degree.
    pub fn boundary(&self, n: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(n)
    }

    /// `∂_{n-1} ∘ ∂_n = 0` for all `n ≥ 2`.
    pub fn check_boundary_squared(&self) -> Result<()> {
        let failures = par::map_range(self.boundaries.len(), |n| {
            if n < 2 {
                return None;
            }
            match self.boundaries[n - 1].checked_mul(&self.boundaries[n]) {
                Some(p) if p.is_zero() => None,
                _ => Some(n),
            }
        });
        match failures.into_iter().flatten().next() {
            Some(degree) => Err(Error::BoundaryViolation { degree }),
            None => Ok(()),
        }
    }

    /// `Σ (-1)^n rank C_n`; `None` for a truncated complex.
    pub fn euler_characteristic(&self) -> Option<i128> {
        self.complete.then(|| {
            self.ranks
                .iter()
                .enumerate()
                .map(|(n, &r)| if n % 2 == 0 { r as i128 } else { -(r as i128) })
                .sum()
        })
    }

    /// Degree-tagged coordinate triplets for external cross-checks.
    pub fn write_triplets<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for n in 1..self.boundaries.len() {
            let b = &self.boundaries[n];
            writeln!(
                out,
                "# degree {n} rows {} cols {} nnz {}",
                b.nrows(),
                b.ncols(),
                b.nnz()
            )?;
            b.write_triplets(out)?;
        }
        Ok(())
    }
}

/// Unit elimination of one matrix: pivots and what is left. Over `Z` the
/// checked `i64` run restarts in `BigInt` on overflow.
fn eliminate_matrix(m: &SparseMatrix, p: Option<u64>) -> (Vec<(u32, u32)>, Remainder) {
    fn run<R: Ring>(ring: &R, m: &SparseMatrix) -> Option<(Vec<(u32, u32)>, Remainder)> {
        let mut e = Eliminator::new(ring, m);
        e.run().ok()?;
        Some((e.pivots().to_vec(), e.remainder()))
    }
    match p {
        Some(p) => run(&PrimeField { p }, m).expect("field arithmetic cannot overflow"),
        None => run(&CheckedI64, m).unwrap_or_else(|| run(&BigIntegers, m).expect("bigint arithmetic cannot overflow")),
    }
}

/// Ranks of the cells left over and remainders of their boundary maps after
/// cancelling unit pivots, degrees `0..=hi`.
struct Sweep {
    dims: Vec<usize>,
    remainders: Vec<Remainder>,
}

/// Eliminate `∂_hi, ∂_{hi-1}, …, ∂_1` in turn. Each unit pivot `(a, b)`
/// of `∂_n` cancels the cells `a ∈ C_n`, `b ∈ C_{n-1}` without changing
/// homology: column `b` leaves `∂_{n-1}` before that matrix is touched, and
/// row `a` leaves what remains of `∂_{n+1}`. Skipping the cancelled columns
/// keeps kernel vectors, the main source of fill, out of the elimination.
fn sweep(c: &ChainComplex, hi: usize, p: Option<u64>) -> Sweep {
    let mut dims: Vec<usize> = c.ranks[..=hi].to_vec();
    let mut remainders: Vec<Option<Remainder>> = (0..=hi).map(|_| None).collect();
    let mut cleared = vec![false; c.rank(hi)];
    for n in (1..=hi).rev() {
        let b = &c.boundaries[n];
        let m = if cleared.iter().any(|&x| x) {
            let cols = b
                .columns()
                .iter()
                .zip(&cleared)
                .map(|(col, &gone)| if gone { Vec::new() } else { col.clone() })
                .collect();
            SparseMatrix::from_columns(b.nrows(), cols)
        } else {
            b.clone()
        };
        let (pivots, rem) = eliminate_matrix(&m, p);
        drop(m);
        let mut paired = vec![false; c.rank(n)];
        let mut next_cleared = vec![false; c.rank(n - 1)];
        for &(a, b) in &pivots {
            paired[a as usize] = true;
            next_cleared[b as usize] = true;
        }
        dims[n] -= pivots.len();
        dims[n - 1] -= pivots.len();
        if n < hi {
            let above = remainders[n + 1].take().expect("processed");
            remainders[n + 1] = Some(above.without_cols(&paired));
        }
        remainders[n] = Some(rem);
        cleared = next_cleared;
    }
    Sweep {
        dims,
        remainders: remainders
            .into_iter()
            .map(|r| {
                r.unwrap_or(Remainder {
                    rows: Vec::new(),
                    ncols: 0,
                    row_ids: Vec::new(),
                    col_ids: Vec::new(),
                })
            })
            .collect(),
    }
}

/// Integral homology through the certified degree.
///
/// The complex is first shrunk by [`reduce`], then unit pivots are
/// cancelled degree by degree from the top; Smith forms are taken of the
/// small dense remainders.
pub fn homology(c: &ChainComplex) -> Result<GradedAbelianGroup> {
    c.check_boundary_squared()?;
    let c = &reduce(c);
    let through = c.certified_through.min(c.top_degree());
    let hi = (through + 1).min(c.top_degree());
    let sw = sweep(c, hi, None);
    let forms: Vec<SmithForm> = par::map(&sw.remainders, |r| {
        smith::smith_dense(&smith::remainder_to_dense(r), false)
    });
    let rank_of = |n: usize| forms.get(n).map_or(0, |f| f.rank());
    let mut out = GradedAbelianGroup::zero();
    for n in 0..=through {
        let free = sw.dims[n] - rank_of(n) - rank_of(n + 1);
        let mut torsion = Vec::new();
        if let Some(f) = forms.get(n + 1) {
            for d in f.torsion() {
                torsion.push(u64::try_from(d).map_err(|_| Error::Overflow("torsion coefficient"))?);
            }
        }
        out.set(n, AbelianGroup::new(free, torsion));
    }
    Ok(out)
}

/// Reduced integral homology; errors unless the complex is connected.
pub fn reduced_homology(c: &ChainComplex) -> Result<GradedAbelianGroup> {
    let h = homology(c)?;
    let rank = h.get(0).free;
    if rank != 1 {
        return Err(Error::Disconnected { rank });
    }
    Ok(h.reduced())
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Betti numbers with `F_p` coefficients, or rational ones for `p = 0`.
pub fn betti(c: &ChainComplex, p: u64) -> Result<Vec<usize>> {
    if p != 0 && (!is_prime(p) || p >= 1 << 32) {
        return Err(Error::NotPrime(p));
    }
    c.check_boundary_squared()?;
    let c = &reduce(c);
    let through = c.certified_through.min(c.top_degree());
    let hi = (through + 1).min(c.top_degree());
    let sw = sweep(c, hi, (p != 0).then_some(p));
    let ranks: Vec<usize> = par::map(&sw.remainders, |r| {
        if r.rows.is_empty() {
            0
        } else {
            smith::smith_dense(&smith::remainder_to_dense(r), false).rank()
        }
    });
    let rank_of = |n: usize| ranks.get(n).copied().unwrap_or(0);
    Ok((0..=through)
        .map(|n| sw.dims[n] - rank_of(n) - rank_of(n + 1))
        .collect())
}

/// `dim H_n(C; F_p)` from the integral answer by universal coefficients.
pub fn betti_from_integral(h: &GradedAbelianGroup, p: u64, through: usize) -> Vec<usize> {
    (0..=through)
        .map(|n| {
            let g = h.get(n);
            if p == 0 {
                return g.free;
            }
            let below = if n == 0 { 0 } else { h.get(n - 1).p_torsion_count(p) };
            g.free + g.p_torsion_count(p) + below
        })
        .collect()
}
