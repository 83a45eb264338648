//! Finite simplicial sets.
//!
//! A simplicial set is stored through its nondegenerate simplices
//! ("generators"), each with its list of faces. Every simplex is then a pair
//! `(generator, degeneracy)` by the Eilenberg-Zilber lemma; see [`Simplex`].
//!
//! Generators are numbered consecutively in order of dimension, so the
//! generators of dimension `d` form a contiguous id range.

mod chains;
mod models;
mod product;
mod quotient;

use std::fmt;
use std::sync::Arc;

pub use chains::{normalized_chains, reduced_chains};
pub use models::{
    from_ordered_complex, hollow_triangle, interval, minimal_sphere, point, rp2, rp2_complex, OrderedComplex,
    VertexLabel,
};
pub use product::{
    arrangement, diagonal_sub, polyhedral_product, power, smash_power, BuildOptions, Pattern, Slot, TupleSimplex,
    DEFAULT_BUDGET,
};
pub use quotient::collapse;

use crate::error::{Error, Result};

pub type GenId = u32;

/// A simplex `g · η` where `g` is a nondegenerate generator and `η` is a
/// degeneracy operator, i.e. a monotone surjection `[level] → [dim g]`.
///
/// `η` is stored as the set of positions `i < level` with `η(i) = η(i+1)`.
/// That set is exactly the index set of the canonical degeneracy word
/// `s_{i_1} ⋯ s_{i_k}` (`i_1 > ⋯ > i_k`), so two simplices are equal iff
/// their `(generator, mask)` pairs are.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub gen: GenId,
    pub level: u8,
    pub mask: u32,
}

/// Highest supported simplicial level (masks are 32-bit).
pub const MAX_LEVEL: usize = 31;

impl Simplex {
    pub fn nondegenerate(gen: GenId, dim: usize) -> Self {
        Self {
            gen,
            level: dim as u8,
            mask: 0,
        }
    }

    /// The `level`-dimensional total degeneracy of a vertex.
    pub fn vertex_at(gen: GenId, level: usize) -> Self {
        Self {
            gen,
            level: level as u8,
            mask: full_mask(level),
        }
    }

    pub fn level(&self) -> usize {
        self.level as usize
    }

    pub fn dim(&self) -> usize {
        self.level as usize - self.mask.count_ones() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.mask != 0
    }

    /// Canonical degeneracy word, indices strictly decreasing.
    pub fn degeneracy_word(&self) -> Vec<usize> {
        (0..self.level as usize)
            .rev()
            .filter(|&i| self.mask >> i & 1 == 1)
            .collect()
    }

    /// `s_i` applied to this simplex.
    pub fn degeneracy(&self, i: usize) -> Self {
        assert!(i <= self.level as usize);
        Self {
            gen: self.gen,
            level: self.level + 1,
            mask: insert_bit(self.mask, i, true),
        }
    }

    pub(crate) fn pack(&self) -> u64 {
        (self.gen as u64) << 32 | self.mask as u64
    }

    pub(crate) fn unpack(key: u64, level: usize) -> Self {
        Self {
            gen: (key >> 32) as u32,
            level: level as u8,
            mask: key as u32,
        }
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.degeneracy_word();
        if word.is_empty() {
            write!(f, "g{}", self.gen)
        } else {
            let w: Vec<String> = word.iter().map(|i| format!("s{i}")).collect();
            write!(f, "{}·g{}", w.join(""), self.gen)
        }
    }
}

pub(crate) fn full_mask(level: usize) -> u32 {
    if level == 0 {
        0
    } else {
        u32::MAX >> (32 - level)
    }
}

/// Delete bit `k`, shifting higher bits down.
pub(crate) fn remove_bit(mask: u32, k: usize) -> u32 {
    let low = mask & ((1u32 << k) - 1);
    let high = if k + 1 >= 32 { 0 } else { (mask >> (k + 1)) << k };
    low | high
}

/// Insert bit `k` with the given value, shifting bits `>= k` up.
pub(crate) fn insert_bit(mask: u32, k: usize, value: bool) -> u32 {
    let low = mask & ((1u32 << k) - 1);
    let high = (mask >> k) << (k + 1);
    low | high | (value as u32) << k
}

/// Drop every position in `r` from `mask` (both are masks on the same level).
pub(crate) fn compress(mask: u32, r: u32, level: usize) -> u32 {
    let mut out = 0u32;
    let mut j = 0;
    for k in 0..level {
        if r >> k & 1 == 1 {
            continue;
        }
        if mask >> k & 1 == 1 {
            out |= 1 << j;
        }
        j += 1;
    }
    out
}

/// Mask of `μ ∘ η` where `η` has mask `outer` on `level` and `μ` has mask
/// `inner` on `η`'s codomain.
pub(crate) fn compose(inner: u32, outer: u32, level: usize) -> u32 {
    let mut out = 0u32;
    let mut c = 0;
    for k in 0..level {
        if outer >> k & 1 == 1 {
            out |= 1 << k;
        } else {
            if inner >> c & 1 == 1 {
                out |= 1 << k;
            }
            c += 1;
        }
    }
    out
}

/// Provenance of generators that are nondegenerate tuples in a power `F^m`.
#[derive(Clone)]
pub struct TupleCoords {
    pub factor: Arc<SSet>,
    pub m: usize,
    /// `m` packed coordinates per generator.
    pub(crate) data: Vec<u64>,
}

impl TupleCoords {
    pub fn coords(&self, sset: &SSet, gen: GenId) -> TupleSimplex {
        let level = sset.gen_dim(gen);
        let start = gen as usize * self.m;
        TupleSimplex {
            coords: self.data[start..start + self.m]
                .iter()
                .map(|&k| Simplex::unpack(k, level))
                .collect(),
        }
    }
}

#[derive(Clone)]
pub struct SSet {
    name: String,
    gen_dims: Vec<u8>,
    /// `dim_start[d]..dim_start[d+1]` are the generators of dimension `d`.
    dim_start: Vec<u32>,
    face_offset: Vec<usize>,
    faces: Vec<Simplex>,
    basepoint: GenId,
    /// `None` when every nondegenerate simplex is present.
    truncated_at: Option<usize>,
    tuples: Option<TupleCoords>,
}

impl fmt::Debug for SSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSet")
            .field("name", &self.name)
            .field("cells", &self.cell_counts())
            .field("truncated_at", &self.truncated_at)
            .finish()
    }
}

impl SSet {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn basepoint(&self) -> GenId {
        self.basepoint
    }

    pub fn num_generators(&self) -> usize {
        self.gen_dims.len()
    }

    /// Highest dimension with a generator.
    pub fn top_dim(&self) -> usize {
        self.dim_start.len().saturating_sub(2)
    }

    /// Level through which every nondegenerate simplex is materialized.
    pub fn materialized_through(&self) -> usize {
        self.truncated_at.unwrap_or(usize::MAX)
    }

    pub fn is_complete(&self) -> bool {
        self.truncated_at.is_none()
    }

    pub fn gen_dim(&self, g: GenId) -> usize {
        self.gen_dims[g as usize] as usize
    }

    pub fn generators(&self, dim: usize) -> std::ops::Range<GenId> {
        if dim + 1 >= self.dim_start.len() {
            let end = *self.dim_start.last().unwrap_or(&0);
            return end..end;
        }
        self.dim_start[dim]..self.dim_start[dim + 1]
    }

    /// Nondegenerate cell count per dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        (0..=self.top_dim()).map(|d| self.generators(d).len()).collect()
    }

    pub fn tuple_coords(&self) -> Option<&TupleCoords> {
        self.tuples.as_ref()
    }

    pub fn tuple(&self, g: GenId) -> Option<TupleSimplex> {
        self.tuples.as_ref().map(|t| t.coords(self, g))
    }

    /// Faces `d_0 .. d_n` of a generator of dimension `n ≥ 1`.
    pub fn gen_faces(&self, g: GenId) -> &[Simplex] {
        let g = g as usize;
        &self.faces[self.face_offset[g]..self.face_offset[g + 1]]
    }

    /// `d_i` of an arbitrary simplex.
    pub fn face(&self, s: Simplex, i: usize) -> Simplex {
        let n = s.level as usize;
        assert!(n >= 1 && i <= n, "face d_{i} of a level-{n} simplex");
        let bit = |k: usize| k < n && s.mask >> k & 1 == 1;
        if bit(i) {
            return Simplex {
                gen: s.gen,
                level: s.level - 1,
                mask: remove_bit(s.mask, i),
            };
        }
        if i > 0 && bit(i - 1) {
            return Simplex {
                gen: s.gen,
                level: s.level - 1,
                mask: remove_bit(s.mask, i - 1),
            };
        }
        // Vertex i is the only preimage of j = η(i), so η∘δ_i = δ_j∘η'.
        let j = i - (s.mask & ((1u32 << i) - 1)).count_ones() as usize;
        let rest = remove_bit(s.mask, if i < n { i } else { i - 1 });
        let inner = self.gen_faces(s.gen)[j];
        Simplex {
            gen: inner.gen,
            level: s.level - 1,
            mask: compose(inner.mask, rest, n - 1),
        }
    }

    /// Every simplex (degenerate or not) at the given level.
    pub fn simplices_at_level(&self, level: usize) -> Vec<Simplex> {
        let mut out = Vec::new();
        for d in 0..=self.top_dim().min(level) {
            let masks = masks_with_ones(level, level - d);
            for g in self.generators(d) {
                for &mask in &masks {
                    out.push(Simplex {
                        gen: g,
                        level: level as u8,
                        mask,
                    });
                }
            }
        }
        out
    }

    /// Verify `d_i d_j = d_{j-1} d_i` (i < j) on every generator of dimension ≥ 2,
    /// and that faces have the right level.
    pub fn check_simplicial_identities(&self) -> Result<()> {
        for g in 0..self.num_generators() as GenId {
            let n = self.gen_dim(g);
            if n == 0 {
                continue;
            }
            let faces = self.gen_faces(g);
            if faces.len() != n + 1 || faces.iter().any(|f| f.level() != n - 1) {
                return Err(Error::InvalidInput(format!("generator {g} has malformed faces")));
            }
            if n < 2 {
                continue;
            }
            for j in 0..=n {
                for i in 0..j {
                    let lhs = self.face(faces[j], i);
                    let rhs = self.face(faces[i], j - 1);
                    if lhs != rhs {
                        return Err(Error::InvalidInput(format!(
                            "simplicial identity d_{i} d_{j} fails on generator {g}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A copy with generators renumbered by `perm` within each dimension
    /// (`perm[d][k]` is the new position of the k-th generator of dimension d).
    pub fn permuted(&self, perm: &[Vec<usize>]) -> SSet {
        let mut new_id = vec![0 as GenId; self.num_generators()];
        for (d, p) in perm.iter().enumerate().take(self.top_dim() + 1) {
            let range = self.generators(d);
            for (k, g) in range.clone().enumerate() {
                new_id[g as usize] = range.start + p[k] as GenId;
            }
        }
        let mut old_of = vec![0 as GenId; self.num_generators()];
        for (old, &new) in new_id.iter().enumerate() {
            old_of[new as usize] = old as GenId;
        }
        let mut b = SSetBuilder::new(self.name.clone());
        for &old in &old_of {
            let faces: Vec<Simplex> = self
                .gen_faces(old)
                .iter()
                .map(|f| Simplex {
                    gen: new_id[f.gen as usize],
                    ..*f
                })
                .collect();
            b.add(self.gen_dim(old), faces);
        }
        b.finish(new_id[self.basepoint as usize], self.truncated_at)
    }
}

/// All masks on `level` positions with exactly `ones` bits set, ascending.
pub(crate) fn masks_with_ones(level: usize, ones: usize) -> Vec<u32> {
    let mut out = Vec::new();
    if ones > level {
        return out;
    }
    if ones == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack
    let mut v: u64 = (1u64 << ones) - 1;
    let limit = 1u64 << level;
    while v < limit {
        out.push(v as u32);
        let t = v | (v - 1);
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Incremental constructor; generators must be added in nondecreasing dimension.
pub struct SSetBuilder {
    name: String,
    gen_dims: Vec<u8>,
    face_offset: Vec<usize>,
    faces: Vec<Simplex>,
}

impl SSetBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            gen_dims: Vec::new(),
            face_offset: vec![0],
            faces: Vec::new(),
        }
    }

    pub fn add(&mut self, dim: usize, faces: Vec<Simplex>) -> GenId {
        assert!(dim <= MAX_LEVEL);
        if let Some(&last) = self.gen_dims.last() {
            assert!(dim >= last as usize, "generators must be added by dimension");
        }
        debug_assert!(dim == 0 && faces.is_empty() || faces.len() == dim + 1);
        let id = self.gen_dims.len() as GenId;
        self.gen_dims.push(dim as u8);
        self.faces.extend(faces);
        self.face_offset.push(self.faces.len());
        id
    }

    pub fn finish(self, basepoint: GenId, truncated_at: Option<usize>) -> SSet {
        self.finish_with_tuples(basepoint, truncated_at, None)
    }

    pub(crate) fn finish_with_tuples(
        self,
        basepoint: GenId,
        truncated_at: Option<usize>,
        tuples: Option<TupleCoords>,
    ) -> SSet {
        let top = self.gen_dims.iter().copied().max().unwrap_or(0) as usize;
        let mut dim_start = vec![0u32; top + 2];
        for &d in &self.gen_dims {
            dim_start[d as usize + 1] += 1;
        }
        for d in 0..=top {
            dim_start[d + 1] += dim_start[d];
        }
        SSet {
            name: self.name,
            gen_dims: self.gen_dims,
            dim_start,
            face_offset: self.face_offset,
            faces: self.faces,
            basepoint,
            truncated_at,
            tuples,
        }
    }
}
