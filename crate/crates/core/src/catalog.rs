//! Built-in spaces.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sset::{hollow_triangle, interval, minimal_sphere, power, rp2, BuildOptions, SSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub dim: usize,
    pub chi: i64,
    pub closed_manifold: bool,
    /// Manifold dimension, when `closed_manifold`.
    pub n: Option<u32>,
    pub model: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "S1",
        dim: 1,
        chi: 0,
        closed_manifold: true,
        n: Some(1),
        model: "one vertex, one 1-cell",
    },
    CatalogEntry {
        name: "S2",
        dim: 2,
        chi: 2,
        closed_manifold: true,
        n: Some(2),
        model: "one vertex, one 2-cell",
    },
    CatalogEntry {
        name: "T2",
        dim: 2,
        chi: 0,
        closed_manifold: true,
        n: Some(2),
        model: "product S1 x S1",
    },
    CatalogEntry {
        name: "RP2",
        dim: 2,
        chi: 1,
        closed_manifold: true,
        n: Some(2),
        model: "6-vertex triangulation",
    },
    CatalogEntry {
        name: "interval",
        dim: 1,
        chi: 1,
        closed_manifold: false,
        n: None,
        model: "two vertices, one edge",
    },
    CatalogEntry {
        name: "S1tri",
        dim: 1,
        chi: 0,
        closed_manifold: true,
        n: Some(1),
        model: "hollow triangle",
    },
];

pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name).ok_or_else(|| {
        let names: Vec<&str> = CATALOG.iter().map(|e| e.name).collect();
        Error::InvalidInput(format!("unknown space {name:?}; known: {}", names.join(", ")))
    })
}

/// The simplicial-set model of a catalog space.
pub fn build(name: &str) -> Result<Arc<SSet>> {
    let e = entry(name)?;
    let x = match e.name {
        "S1" => minimal_sphere(1)?,
        "S2" => minimal_sphere(2)?,
        "T2" => {
            let s1 = Arc::new(minimal_sphere(1)?);
            power(&s1, 2, BuildOptions::new(2))?.with_name("T2")
        }
        "RP2" => rp2(),
        "interval" => interval(),
        "S1tri" => hollow_triangle(),
        _ => unreachable!("catalog entry without a model"),
    };
    Ok(Arc::new(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{homology, AbelianGroup, GradedAbelianGroup};
    use crate::sset::normalized_chains;

    #[test]
    fn entries_match_models() {
        for e in CATALOG {
            let x = build(e.name).unwrap();
            assert!(x.is_complete(), "{}", e.name);
            assert_eq!(x.top_dim(), e.dim, "{}", e.name);
            let c = normalized_chains(&x, e.dim).unwrap();
            assert_eq!(c.euler_characteristic(), Some(e.chi as i128), "{}", e.name);
            assert_eq!(e.closed_manifold, e.n.is_some());
        }
    }

    #[test]
    fn torus_homology() {
        let x = build("T2").unwrap();
        assert_eq!(x.cell_counts(), vec![1, 3, 2]);
        let h = homology(&normalized_chains(&x, 2).unwrap()).unwrap();
        let expect = GradedAbelianGroup::from_degrees([
            (0, AbelianGroup::free(1)),
            (1, AbelianGroup::free(2)),
            (2, AbelianGroup::free(1)),
        ]);
        assert_eq!(h, expect);
    }

    #[test]
    fn unknown_name() {
        assert!(build("K3").is_err());
    }
}
