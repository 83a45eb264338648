//! Predicted reduced homology from the wedge decompositions.
//!
//! Everything here is a statement about reduced integral homology with the
//! suspension stripped; the homotopy equivalences themselves are not built.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::GradedAbelianGroup;

/// Where a wedge summand comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandSource {
    /// A simplex `σ ∈ K`, 1-based, possibly empty.
    Simplex(Vec<usize>),
    Base,
    Fiber,
    Mixed,
}

impl fmt::Display for SummandSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SummandSource::Simplex(s) if s.is_empty() => write!(f, "∅"),
            SummandSource::Simplex(s) => {
                let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                write!(f, "{{{}}}", v.join(","))
            }
            SummandSource::Base => write!(f, "base"),
            SummandSource::Fiber => write!(f, "fiber"),
            SummandSource::Mixed => write!(f, "mixed"),
        }
    }
}

/// One row of a decomposition: `(σ, k, H̃(X̂^k))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummand {
    pub source: SummandSource,
    /// Smash exponent; `None` for the fibration tags.
    pub k: Option<usize>,
    pub contribution: GradedAbelianGroup,
}

fn require_reduced(g: &GradedAbelianGroup, what: &str) -> Result<()> {
    if g.get(0).is_zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "{what} has a nonzero degree-0 part; pass reduced homology"
        )))
    }
}

fn kunneth(a: &GradedAbelianGroup, b: &GradedAbelianGroup) -> GradedAbelianGroup {
    let mut items = Vec::new();
    for (i, x) in a.iter() {
        for (j, y) in b.iter() {
            items.push((i + j, x.tensor(y)));
            items.push((i + j + 1, x.tor(y)));
        }
    }
    GradedAbelianGroup::from_degrees(items)
}

/// `H̃(A ∧ B)` from `H̃A` and `H̃B`, Tor terms included.
pub fn reduced_kunneth(a: &GradedAbelianGroup, b: &GradedAbelianGroup) -> Result<GradedAbelianGroup> {
    require_reduced(a, "left factor")?;
    require_reduced(b, "right factor")?;
    Ok(kunneth(a, b))
}

/// `H̃(X̂^k)`; the zero group for `k = 0`.
pub fn smash_power_homology(hx: &GradedAbelianGroup, k: usize) -> Result<GradedAbelianGroup> {
    Ok(smash_powers(hx, k)?.pop().expect("k + 1 entries"))
}

/// `H̃(X̂^j)` for `j = 0..=k`.
fn smash_powers(hx: &GradedAbelianGroup, k: usize) -> Result<Vec<GradedAbelianGroup>> {
    require_reduced(hx, "H̃X")?;
    let mut out = vec![GradedAbelianGroup::zero()];
    if k >= 1 {
        out.push(hx.clone());
    }
    for _ in 2..=k {
        let next = kunneth(out.last().unwrap(), hx);
        out.push(next);
    }
    Ok(out)
}

fn total(rows: &[DecompositionSummand]) -> GradedAbelianGroup {
    rows.iter()
        .fold(GradedAbelianGroup::zero(), |acc, r| acc.direct_sum(&r.contribution))
}

/// Rows `X̂^{|σ|}` and `X̂^{|σ|+1}` for every `σ ∈ K`, without the gate check.
pub fn arrangement_summands(hx: &GradedAbelianGroup, k: &SimplicialComplex) -> Result<Vec<DecompositionSummand>> {
    let powers = smash_powers(hx, k.max_simplex_size() + 1)?;
    let mut rows = Vec::with_capacity(2 * k.simplices().len());
    for sigma in k.simplices() {
        for e in [sigma.len(), sigma.len() + 1] {
            rows.push(DecompositionSummand {
                source: SummandSource::Simplex(sigma.clone()),
                k: Some(e),
                contribution: powers[e].clone(),
            });
        }
    }
    Ok(rows)
}

/// `H̃(Δ_K(X)) = ⊕_{σ∈K} H̃(X̂^{|σ|}) ⊕ H̃(X̂^{|σ|+1})`.
///
/// Refused with [`Error::OutOfScope`] unless `2(dim K + 1) < m`; see
/// [`predict_arrangement_homology_unchecked`] to evaluate the formula anyway.
pub fn predict_arrangement_homology(hx: &GradedAbelianGroup, k: &SimplicialComplex) -> Result<GradedAbelianGroup> {
    k.require_gate()?;
    predict_arrangement_homology_unchecked(hx, k)
}

/// The same formula with the gate check skipped. The result is not a
/// prediction outside the gate.
pub fn predict_arrangement_homology_unchecked(
    hx: &GradedAbelianGroup,
    k: &SimplicialComplex,
) -> Result<GradedAbelianGroup> {
    Ok(total(&arrangement_summands(hx, k)?))
}

/// Rows `X̂^{|σ|}` for every nonempty `σ ∈ K`.
pub fn polyhedral_summands(hx: &GradedAbelianGroup, k: &SimplicialComplex) -> Result<Vec<DecompositionSummand>> {
    let powers = smash_powers(hx, k.max_simplex_size())?;
    Ok(k.simplices()
        .iter()
        .filter(|s| !s.is_empty())
        .map(|sigma| DecompositionSummand {
            source: SummandSource::Simplex(sigma.clone()),
            k: Some(sigma.len()),
            contribution: powers[sigma.len()].clone(),
        })
        .collect())
}

/// `H̃(X^K) = ⊕_{∅≠σ∈K} H̃(X̂^{|σ|})`. Holds for every `K`.
pub fn predict_polyhedral_homology(hx: &GradedAbelianGroup, k: &SimplicialComplex) -> Result<GradedAbelianGroup> {
    Ok(total(&polyhedral_summands(hx, k)?))
}

/// Base, fiber and mixed rows of `ΣE ≃ ΣB ∨ ΣF ∨ Σ(B ∧ F)`.
pub fn split_fibration_summands(hb: &GradedAbelianGroup, hf: &GradedAbelianGroup) -> Result<Vec<DecompositionSummand>> {
    let mixed = reduced_kunneth(hb, hf)?;
    Ok(vec![
        DecompositionSummand {
            source: SummandSource::Base,
            k: None,
            contribution: hb.clone(),
        },
        DecompositionSummand {
            source: SummandSource::Fiber,
            k: None,
            contribution: hf.clone(),
        },
        DecompositionSummand {
            source: SummandSource::Mixed,
            k: None,
            contribution: mixed,
        },
    ])
}

/// `H̃B ⊕ H̃F ⊕ H̃(B ∧ F)`.
pub fn predict_split_fibration(hb: &GradedAbelianGroup, hf: &GradedAbelianGroup) -> Result<GradedAbelianGroup> {
    Ok(total(&split_fibration_summands(hb, hf)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::AbelianGroup;
    use proptest::prelude::*;

    fn z(d: usize) -> GradedAbelianGroup {
        GradedAbelianGroup::concentrated(d, AbelianGroup::free(1))
    }

    fn g(items: &[(usize, usize, &[u64])]) -> GradedAbelianGroup {
        GradedAbelianGroup::from_degrees(
            items
                .iter()
                .map(|&(d, free, tors)| (d, AbelianGroup::new(free, tors.to_vec()))),
        )
    }

    fn k(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::new(m, &f).unwrap()
    }

    fn rp2() -> GradedAbelianGroup {
        GradedAbelianGroup::concentrated(1, AbelianGroup::cyclic(2))
    }

    #[test]
    fn kunneth_examples() {
        assert_eq!(reduced_kunneth(&z(1), &z(1)).unwrap(), z(2));
        assert_eq!(
            reduced_kunneth(&rp2(), &rp2()).unwrap(),
            g(&[(2, 0, &[2]), (3, 0, &[2])])
        );
        assert!(reduced_kunneth(&rp2(), &GradedAbelianGroup::zero()).unwrap().is_zero());
        assert!(reduced_kunneth(&z(0), &z(1)).is_err());
    }

    #[test]
    fn kunneth_mixed_torsion() {
        // Z/4(1) with Z/6(2) ⊕ Z(1)
        let a = g(&[(1, 0, &[4])]);
        let b = g(&[(1, 1, &[]), (2, 0, &[6])]);
        let expect = g(&[(2, 0, &[4]), (3, 0, &[2]), (4, 0, &[2])]);
        assert_eq!(reduced_kunneth(&a, &b).unwrap(), expect);
    }

    #[test]
    fn smash_power_examples() {
        assert_eq!(smash_power_homology(&z(1), 3).unwrap(), z(3));
        assert!(smash_power_homology(&z(1), 0).unwrap().is_zero());
        assert_eq!(smash_power_homology(&z(2), 2).unwrap(), z(4));
        assert_eq!(smash_power_homology(&rp2(), 1).unwrap(), rp2());
        // (Z/2)(1)^∧3: Z/2 in degrees 3, 4 (twice), 5 collapses to 3,4,5 with
        // two copies in degree 4.
        assert_eq!(
            smash_power_homology(&rp2(), 3).unwrap(),
            g(&[(3, 0, &[2]), (4, 0, &[2, 2]), (5, 0, &[2])])
        );
    }

    #[test]
    fn arrangement_examples() {
        let s1 = z(1);
        assert_eq!(predict_arrangement_homology(&s1, &k(3, &[])).unwrap(), s1);
        assert_eq!(
            predict_arrangement_homology(&s1, &k(3, &[&[1]])).unwrap(),
            g(&[(1, 2, &[]), (2, 1, &[])])
        );
        assert_eq!(
            predict_arrangement_homology(&s1, &k(4, &[&[1], &[2]])).unwrap(),
            g(&[(1, 3, &[]), (2, 2, &[])])
        );
    }

    #[test]
    fn arrangement_gate() {
        let full = k(4, &[&[1, 2]]);
        assert!(matches!(
            predict_arrangement_homology(&z(1), &full),
            Err(Error::OutOfScope { dim: 1, m: 4 })
        ));
        assert!(predict_arrangement_homology_unchecked(&z(1), &full).is_ok());
    }

    #[test]
    fn polyhedral_examples() {
        let s1 = z(1);
        assert!(predict_polyhedral_homology(&s1, &k(3, &[])).unwrap().is_zero());
        assert_eq!(
            predict_polyhedral_homology(&rp2(), &k(3, &[&[1], &[2]])).unwrap(),
            rp2().direct_sum(&rp2())
        );
        assert_eq!(
            predict_polyhedral_homology(&s1, &k(5, &[&[1, 2], &[2, 3], &[1, 3]])).unwrap(),
            g(&[(1, 3, &[]), (2, 3, &[])])
        );
    }

    #[test]
    fn split_fibration_examples() {
        assert_eq!(
            predict_split_fibration(&z(1), &GradedAbelianGroup::zero()).unwrap(),
            z(1)
        );
        assert_eq!(
            predict_split_fibration(&z(1), &z(1)).unwrap(),
            g(&[(1, 2, &[]), (2, 1, &[])])
        );
    }

    #[test]
    fn summand_rows_serialize() {
        let rows = arrangement_summands(&z(1), &k(3, &[&[1]])).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3].source, SummandSource::Simplex(vec![1]));
        assert_eq!(rows[3].k, Some(2));
        let json = serde_json::to_string(&rows[3]).unwrap();
        assert_eq!(
            json,
            r#"{"source":{"simplex":[1]},"k":2,"contribution":{"2":{"free":1,"torsion":[]}}}"#
        );
    }

    fn reduced_group() -> impl Strategy<Value = GradedAbelianGroup> {
        let group = (
            0usize..3,
            prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 6]), 0..3),
        )
            .prop_map(|(f, t)| AbelianGroup::new(f, t));
        prop::collection::vec((1usize..4, group), 0..3).prop_map(GradedAbelianGroup::from_degrees)
    }

    fn gated_complex() -> impl Strategy<Value = SimplicialComplex> {
        (3usize..8).prop_flat_map(|m| {
            let max_size = (m - 1) / 2;
            let facet =
                prop::collection::btree_set(1..=m, 1..=max_size.max(1)).prop_map(|s| s.into_iter().collect::<Vec<_>>());
            prop::collection::vec(facet, 0..4).prop_map(move |fs| SimplicialComplex::new(m, &fs).unwrap())
        })
    }

    proptest! {
        #[test]
        fn assembly_identity(hx in reduced_group(), kc in gated_complex()) {
            prop_assume!(kc.gate_condition());
            let direct = predict_arrangement_homology(&hx, &kc).unwrap();
            let fibre = predict_polyhedral_homology(&hx, &kc).unwrap();
            prop_assert_eq!(direct, predict_split_fibration(&hx, &fibre).unwrap());
        }

        #[test]
        fn kunneth_symmetric(a in reduced_group(), b in reduced_group()) {
            prop_assert_eq!(reduced_kunneth(&a, &b).unwrap(), reduced_kunneth(&b, &a).unwrap());
        }

        #[test]
        fn kunneth_associative(a in reduced_group(), b in reduced_group(), c in reduced_group()) {
            let left = reduced_kunneth(&reduced_kunneth(&a, &b).unwrap(), &c).unwrap();
            let right = reduced_kunneth(&a, &reduced_kunneth(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn euler_multiplicative(hx in reduced_group(), k in 1usize..4) {
            let chi = hx.euler_characteristic();
            let got = smash_power_homology(&hx, k).unwrap().euler_characteristic();
            prop_assert_eq!(got, chi.pow(k as u32));
        }
    }
}
