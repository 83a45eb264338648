use super::{GenId, SSet};
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, SparseMatrix};
use crate::par;

/// Normalized chains: `C_n` is free on the nondegenerate n-simplices and
/// `∂ = Σ (-1)^i d_i` with degenerate faces dropped.
///
/// Degrees `0..=maxdim + 1` are emitted so that `H_maxdim` is exact. A
/// complete simplicial set is emitted in full up to its top dimension.
pub fn normalized_chains(x: &SSet, maxdim: usize) -> Result<ChainComplex> {
    chains(x, maxdim, false)
}

/// Normalized chains of the pair `(X, *)`: the basepoint generator is
/// dropped, so homology is the reduced homology of `X`.
pub fn reduced_chains(x: &SSet, maxdim: usize) -> Result<ChainComplex> {
    chains(x, maxdim, true)
}

fn chains(x: &SSet, maxdim: usize, relative: bool) -> Result<ChainComplex> {
    let need = maxdim + 1;
    if !x.is_complete() && x.materialized_through() < need {
        return Err(Error::Truncated {
            have: x.materialized_through(),
            need,
        });
    }
    let top = if x.is_complete() { need.min(x.top_dim()) } else { need };
    let base = x.basepoint();
    let skip = |n: usize| relative && n == 0;
    // Row index of generator `g` of dimension `n`, `None` for the basepoint.
    let row = |n: usize, g: GenId| -> Option<u32> {
        let i = g - x.generators(n).start;
        if !skip(n) {
            Some(i)
        } else if g == base {
            None
        } else {
            Some(if g > base { i - 1 } else { i })
        }
    };
    let ranks: Vec<usize> = (0..=top)
        .map(|n| x.generators(n).len() - usize::from(skip(n)))
        .collect();
    let boundaries = par::map_range(top, |i| {
        let n = i + 1;
        let columns = x
            .generators(n)
            .map(|g| {
                x.gen_faces(g)
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.mask == 0)
                    .filter_map(|(i, f)| row(n - 1, f.gen).map(|r| (r, if i % 2 == 0 { 1 } else { -1 })))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(ranks[n - 1], columns)
    });
    let complete = x.is_complete();
    ChainComplex::new(
        ranks,
        boundaries,
        if complete { maxdim.max(top) } else { maxdim },
        complete,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, AbelianGroup};
    use crate::sset::{minimal_sphere, models, point};

    #[test]
    fn point_chains() {
        let c = normalized_chains(&point(), 3).unwrap();
        assert_eq!(c.ranks(), &[1]);
    }

    #[test]
    fn minimal_circle_has_zero_boundary() {
        let c = normalized_chains(&minimal_sphere(1).unwrap(), 1).unwrap();
        assert_eq!(c.ranks(), &[1, 1]);
        assert!(c.boundary(1).unwrap().is_zero());
    }

    #[test]
    fn hollow_triangle_boundary_rank() {
        let c = normalized_chains(&models::hollow_triangle(), 1).unwrap();
        assert_eq!(c.ranks(), &[3, 3]);
        let f = crate::homology::smith_normal_form(c.boundary(1).unwrap(), false);
        assert_eq!(f.rank(), 2);
        let h = homology(&c).unwrap();
        assert_eq!(h.get(1), AbelianGroup::free(1));
    }

    #[test]
    fn rp2_homology() {
        let c = normalized_chains(&models::rp2(), 2).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.get(0), AbelianGroup::free(1));
        assert_eq!(h.get(1), AbelianGroup::cyclic(2));
        assert!(h.get(2).is_zero());
    }

    #[test]
    fn reduced_chains_drop_basepoint() {
        let x = models::rp2();
        let c = reduced_chains(&x, 2).unwrap();
        assert_eq!(c.ranks(), &[5, 15, 10]);
        let h = homology(&c).unwrap();
        assert_eq!(h, homology(&normalized_chains(&x, 2).unwrap()).unwrap().reduced());
    }

    #[test]
    fn sphere_homology() {
        let c = normalized_chains(&minimal_sphere(2).unwrap(), 3).unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.get(0), AbelianGroup::free(1));
        assert!(h.get(1).is_zero());
        assert_eq!(h.get(2), AbelianGroup::free(1));
    }
}
