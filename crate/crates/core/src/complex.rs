//! Abstract simplicial complexes `K` on the index set `[m] = {1, ..., m}`.
//!
//! Ghost vertices (indices of `[m]` lying in no simplex) are allowed, and the
//! empty simplex is always a member.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// JSON form of a complex: `{"m": 5, "facets": [[1,2],[2,3],[1,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub m: usize,
    #[serde(default)]
    pub facets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    m: usize,
    /// Maximal simplices, each sorted, the list sorted by (size, lex).
    facets: Vec<Vec<usize>>,
    /// Every simplex including the empty one, sorted by (size, lex).
    simplices: Vec<Vec<usize>>,
}

fn size_lex(a: &Vec<usize>, b: &Vec<usize>) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl SimplicialComplex {
    /// Build the downward closure of `facets` on `[m]`, dropping dominated
    /// facets. An empty facet list gives `K = {∅}`.
    pub fn new(m: usize, facets: &[Vec<usize>]) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("repeated vertex in {f:?}")));
            }
            if let Some(&v) = s.iter().find(|&&v| v < 1 || v > m) {
                return Err(Error::IndexOutOfRange { vertex: v, m });
            }
            sets.insert(s);
        }
        if sets.is_empty() {
            sets.insert(Vec::new());
        }

        let candidates: Vec<Vec<usize>> = sets.into_iter().collect();
        let mut maximal: Vec<Vec<usize>> = candidates
            .iter()
            .filter(|f| !candidates.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        maximal.sort_by(size_lex);

        let mut closed: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &maximal {
            let k = f.len();
            if k >= usize::BITS as usize - 1 {
                return Err(Error::InvalidInput(format!(
                    "facet of size {k} is too large to enumerate"
                )));
            }
            for bits in 0u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|i| bits >> i & 1 == 1).map(|i| f[i]).collect();
                closed.insert(face);
            }
        }
        let mut simplices: Vec<Vec<usize>> = closed.into_iter().collect();
        simplices.sort_by(size_lex);

        Ok(Self {
            m,
            facets: maximal,
            simplices,
        })
    }

    pub fn from_spec(spec: &ComplexSpec) -> Result<Self> {
        Self::new(spec.m, &spec.facets)
    }

    pub fn to_spec(&self) -> ComplexSpec {
        ComplexSpec {
            m: self.m,
            facets: self.facets.iter().filter(|f| !f.is_empty()).cloned().collect(),
        }
    }

    /// The full simplex on `vertices` (all subsets).
    pub fn full_simplex(m: usize, vertices: &[usize]) -> Result<Self> {
        Self::new(m, &[vertices.to_vec()])
    }

    /// The `k`-skeleton of the simplex on all of `[m]`.
    pub fn skeleton_of_simplex(m: usize, k: isize) -> Result<Self> {
        let size = (k + 1).max(0) as usize;
        let all: Vec<usize> = (1..=m).collect();
        let facets = combinations(&all, size.min(m));
        Self::new(m, &facets)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn contains(&self, sigma: &[usize]) -> bool {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        self.simplices.binary_search_by(|t| size_lex(t, &s)).is_ok()
    }

    /// `max |σ| - 1`; `-1` for `K = {∅}`.
    pub fn dim(&self) -> isize {
        self.simplices.last().map_or(0, |s| s.len()) as isize - 1
    }

    /// Largest simplex cardinality.
    pub fn max_simplex_size(&self) -> usize {
        (self.dim() + 1) as usize
    }

    /// Vertices of `[m]` lying in no simplex.
    pub fn ghost_vertices(&self) -> Vec<usize> {
        (1..=self.m)
            .filter(|v| !self.simplices.iter().any(|s| s.contains(v)))
            .collect()
    }

    /// `2(dim K + 1) < m`.
    pub fn gate_condition(&self) -> bool {
        2 * (self.dim() + 1) < self.m as isize
    }

    /// Entry `k` counts simplices with `k` elements, `k = 0..=dim+1`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0usize; self.max_simplex_size() + 1];
        for s in &self.simplices {
            f[s.len()] += 1;
        }
        f
    }

    /// Error unless the gate condition holds.
    pub fn require_gate(&self) -> Result<()> {
        if self.gate_condition() {
            Ok(())
        } else {
            Err(Error::OutOfScope {
                dim: self.dim(),
                m: self.m,
            })
        }
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K on [{}] with facets ", self.m)?;
        let parts: Vec<String> = self
            .facets
            .iter()
            .map(|s| {
                let inner: Vec<String> = s.iter().map(|v| v.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}
