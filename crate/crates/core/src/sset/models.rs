//! Concrete simplicial-set models of small spaces.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SSet, SSetBuilder, Simplex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexLabel {
    Int(i64),
    Name(String),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Int(i) => write!(f, "{i}"),
            VertexLabel::Name(s) => write!(f, "{s}"),
        }
    }
}

impl From<i64> for VertexLabel {
    fn from(v: i64) -> Self {
        VertexLabel::Int(v)
    }
}

/// JSON form `{"vertices": [...], "faces": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedComplex {
    pub vertices: Vec<VertexLabel>,
    pub faces: Vec<Vec<VertexLabel>>,
}

impl OrderedComplex {
    pub fn from_ints(vertices: &[i64], faces: &[&[i64]]) -> Self {
        Self {
            vertices: vertices.iter().map(|&v| v.into()).collect(),
            faces: faces.iter().map(|f| f.iter().map(|&v| v.into()).collect()).collect(),
        }
    }
}

/// The simplicial set of an ordered simplicial complex: nondegenerate
/// n-simplices are the n-faces, with vertices listed in the given order.
///
/// Vertices are implicit faces. Every other listed face must have all of
/// its codimension-one faces of dimension ≥ 1 listed too.
pub fn from_ordered_complex(name: &str, complex: &OrderedComplex) -> Result<SSet> {
    if complex.vertices.is_empty() {
        return Err(Error::InvalidInput("no vertices".into()));
    }
    let mut order: HashMap<&VertexLabel, usize> = HashMap::new();
    for (i, v) in complex.vertices.iter().enumerate() {
        if order.insert(v, i).is_some() {
            return Err(Error::InvalidInput(format!("vertex {v} listed twice")));
        }
    }

    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in &complex.faces {
        let mut idx = Vec::with_capacity(f.len());
        for v in f {
            let i = *order
                .get(v)
                .ok_or_else(|| Error::InvalidInput(format!("unknown vertex {v}")))?;
            idx.push(i);
        }
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("repeated vertex in face {f:?}")));
        }
        if idx.is_empty() {
            continue;
        }
        faces.insert(idx);
    }
    for i in 0..complex.vertices.len() {
        faces.insert(vec![i]);
    }
    for f in &faces {
        if f.len() <= 2 {
            continue;
        }
        for skip in 0..f.len() {
            let mut g = f.clone();
            g.remove(skip);
            if !faces.contains(&g) {
                return Err(Error::InvalidInput(format!(
                    "faces not downward closed: missing a face of {:?}",
                    f.iter().map(|&i| complex.vertices[i].to_string()).collect::<Vec<_>>()
                )));
            }
        }
    }

    let mut sorted: Vec<Vec<usize>> = faces.into_iter().collect();
    sorted.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let ids: HashMap<Vec<usize>, u32> = sorted.iter().enumerate().map(|(i, f)| (f.clone(), i as u32)).collect();

    let mut b = SSetBuilder::new(name);
    for f in &sorted {
        let dim = f.len() - 1;
        let fs: Vec<Simplex> = if dim == 0 {
            Vec::new()
        } else {
            (0..=dim)
                .map(|i| {
                    let mut g = f.clone();
                    g.remove(i);
                    Simplex::nondegenerate(ids[&g], dim - 1)
                })
                .collect()
        };
        b.add(dim, fs);
    }
    Ok(b.finish(ids[&vec![0]], None))
}

/// `S^n` with one vertex and one nondegenerate n-cell.
pub fn minimal_sphere(n: usize) -> Result<SSet> {
    if n < 1 {
        return Err(Error::InvalidInput("sphere dimension must be at least 1".into()));
    }
    if n > super::MAX_LEVEL {
        return Err(Error::InvalidInput(format!("sphere dimension {n} too large")));
    }
    let mut b = SSetBuilder::new(format!("S{n}"));
    let v = b.add(0, Vec::new());
    b.add(n, vec![Simplex::vertex_at(v, n - 1); n + 1]);
    Ok(b.finish(v, None))
}

pub fn point() -> SSet {
    let mut b = SSetBuilder::new("pt");
    let v = b.add(0, Vec::new());
    b.finish(v, None)
}

pub fn interval() -> SSet {
    from_ordered_complex("interval", &OrderedComplex::from_ints(&[0, 1], &[&[0, 1]])).expect("valid model")
}

/// Hollow triangle, a three-vertex circle.
pub fn hollow_triangle() -> SSet {
    from_ordered_complex(
        "S1tri",
        &OrderedComplex::from_ints(&[0, 1, 2], &[&[0, 1], &[1, 2], &[0, 2]]),
    )
    .expect("valid model")
}

pub(crate) const RP2_TRIANGLES: [[i64; 3]; 10] = [
    [1, 2, 4],
    [1, 2, 6],
    [1, 3, 5],
    [1, 3, 6],
    [1, 4, 5],
    [2, 3, 4],
    [2, 3, 5],
    [2, 5, 6],
    [3, 4, 6],
    [4, 5, 6],
];

pub fn rp2_complex() -> OrderedComplex {
    let mut faces: BTreeSet<Vec<i64>> = BTreeSet::new();
    for t in RP2_TRIANGLES {
        faces.insert(t.to_vec());
        for skip in 0..3 {
            let mut e = t.to_vec();
            e.remove(skip);
            faces.insert(e);
        }
    }
    OrderedComplex {
        vertices: (1..=6).map(VertexLabel::Int).collect(),
        faces: faces
            .into_iter()
            .map(|f| f.into_iter().map(VertexLabel::Int).collect())
            .collect(),
    }
}

/// The 6-vertex triangulation of the real projective plane.
pub fn rp2() -> SSet {
    from_ordered_complex("RP2", &rp2_complex()).expect("valid model")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn interval_cells() {
        let x = interval();
        assert_eq!(x.cell_counts(), vec![2, 1]);
        x.check_simplicial_identities().unwrap();
    }

    #[test]
    fn rp2_cells() {
        let x = rp2();
        assert_eq!(x.cell_counts(), vec![6, 15, 10]);
        x.check_simplicial_identities().unwrap();
    }

    #[test]
    fn hollow_triangle_cells() {
        assert_eq!(hollow_triangle().cell_counts(), vec![3, 3]);
    }

    #[test]
    fn sphere_level_counts() {
        let s1 = minimal_sphere(1).unwrap();
        let s2 = minimal_sphere(2).unwrap();
        for k in 0..8 {
            assert_eq!(s1.simplices_at_level(k).len(), k + 1);
            assert_eq!(s2.simplices_at_level(k).len(), 1 + binom(k, 2));
        }
        s2.check_simplicial_identities().unwrap();
        assert!(minimal_sphere(0).is_err());
    }

    #[test]
    fn ordered_complex_errors() {
        let missing = OrderedComplex::from_ints(&[0, 1, 2], &[&[0, 1, 2]]);
        assert!(from_ordered_complex("x", &missing).is_err());
        let repeated = OrderedComplex::from_ints(&[0, 1], &[&[0, 0]]);
        assert!(from_ordered_complex("x", &repeated).is_err());
        let unknown = OrderedComplex::from_ints(&[0, 1], &[&[0, 5]]);
        assert!(from_ordered_complex("x", &unknown).is_err());
    }

    #[test]
    fn json_labels() {
        let c: OrderedComplex =
            serde_json::from_str(r#"{"vertices": ["a", "b", 3], "faces": [["a", "b"], ["b", 3], ["a", 3]]}"#).unwrap();
        let x = from_ordered_complex("c", &c).unwrap();
        assert_eq!(x.cell_counts(), vec![3, 3]);
    }
}
