//! Sub-simplicial-sets of a power `X^m`: the power itself, diagonal
//! subspaces and their unions, polyhedral products and smash powers.
//!
//! Every space here is a union of images of embeddings `X^b → X^m` (a
//! [`Pattern`]). Each image is enumerated directly as the nondegenerate
//! tuples of `X^b`, pushed into `X^m`, and the images are merged and
//! deduplicated level by level. Nothing ever walks all of `X^m`.

use std::sync::Arc;

use super::{collapse, compress, full_mask, point, GenId, SSet, SSetBuilder, Simplex, TupleCoords};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::par;

/// Default cap on nondegenerate simplices per level.
pub const DEFAULT_BUDGET: usize = 40_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Materialize nondegenerate simplices through this level.
    pub max_level: usize,
    pub budget: usize,
}

impl BuildOptions {
    pub fn new(max_level: usize) -> Self {
        Self {
            max_level,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

/// A level-`n` simplex of `X^m`: `m` level-`n` simplices of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleSimplex {
    pub coords: Vec<Simplex>,
}

impl TupleSimplex {
    pub fn new(coords: Vec<Simplex>) -> Self {
        debug_assert!(coords.windows(2).all(|w| w[0].level == w[1].level));
        Self { coords }
    }

    pub fn level(&self) -> usize {
        self.coords.first().map_or(0, |s| s.level())
    }

    /// Positions `i` with `tuple = s_i(y)` for some `y`.
    pub fn common_degeneracies(&self) -> u32 {
        self.coords.iter().fold(full_mask(self.level()), |acc, s| acc & s.mask)
    }

    pub fn is_degenerate(&self) -> bool {
        self.common_degeneracies() != 0
    }

    /// Degeneracy test through the simplicial operators:
    /// degenerate iff some `i` has `tuple = s_i(d_{i+1}(tuple))`.
    pub fn is_degenerate_by_operators(&self, x: &SSet) -> bool {
        let n = self.level();
        (0..n).any(|i| self.face(x, i + 1).degeneracy(i) == *self)
    }

    pub fn face(&self, x: &SSet, i: usize) -> TupleSimplex {
        TupleSimplex {
            coords: self.coords.iter().map(|&s| x.face(s, i)).collect(),
        }
    }

    pub fn degeneracy(&self, i: usize) -> TupleSimplex {
        TupleSimplex {
            coords: self.coords.iter().map(|s| s.degeneracy(i)).collect(),
        }
    }

    /// Split as `s_R(y)` with `y` nondegenerate; returns `(y, R)`.
    pub fn normalize(&self) -> (TupleSimplex, u32) {
        let r = self.common_degeneracies();
        if r == 0 {
            return (self.clone(), 0);
        }
        let level = self.level();
        let new_level = level - r.count_ones() as usize;
        let coords = self
            .coords
            .iter()
            .map(|s| Simplex {
                gen: s.gen,
                level: new_level as u8,
                mask: compress(s.mask, r, level),
            })
            .collect();
        (TupleSimplex { coords }, r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// Coordinate taken from block `j` of `X^b`.
    Block(usize),
    /// Coordinate pinned to the basepoint.
    Base,
}

/// An embedding `X^b → X^m`, one slot per coordinate of `X^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub slots: Vec<Slot>,
    pub blocks: usize,
}

impl Pattern {
    pub fn new(slots: Vec<Slot>) -> Self {
        let blocks = slots
            .iter()
            .filter_map(|s| match s {
                Slot::Block(j) => Some(j + 1),
                Slot::Base => None,
            })
            .max()
            .unwrap_or(0);
        Self { slots, blocks }
    }

    /// `Δ_σ(X)`: free coordinates on `σ`, one shared block on `[m] − σ`.
    pub fn diagonal(m: usize, sigma: &[usize]) -> Self {
        let mut slots = vec![Slot::Base; m];
        for (j, &v) in sigma.iter().enumerate() {
            slots[v - 1] = Slot::Block(j);
        }
        let shared = sigma.len();
        for s in slots.iter_mut() {
            if *s == Slot::Base {
                *s = Slot::Block(shared);
            }
        }
        Self::new(slots)
    }

    /// `X^σ`: free coordinates on `σ`, basepoint elsewhere.
    pub fn coordinate(m: usize, sigma: &[usize]) -> Self {
        let mut slots = vec![Slot::Base; m];
        for (j, &v) in sigma.iter().enumerate() {
            slots[v - 1] = Slot::Block(j);
        }
        Self::new(slots)
    }

    pub fn identity(m: usize) -> Self {
        Self::new((0..m).map(Slot::Block).collect())
    }
}

/// Membership test for the partially diagonal subspace `Δ_σ(X) ⊆ X^m`:
/// all coordinates indexed by `[m] − σ` coincide.
#[derive(Debug, Clone)]
pub struct DiagonalPredicate {
    outside: Vec<usize>,
}

impl DiagonalPredicate {
    pub fn contains(&self, t: &TupleSimplex) -> bool {
        let mut it = self.outside.iter().map(|&i| t.coords[i]);
        match it.next() {
            None => true,
            Some(first) => it.all(|s| s == first),
        }
    }
}

/// `σ` uses the 1-based indices of `[m]`.
pub fn diagonal_sub(m: usize, sigma: &[usize]) -> Result<DiagonalPredicate> {
    if let Some(&v) = sigma.iter().find(|&&v| v < 1 || v > m) {
        return Err(Error::IndexOutOfRange { vertex: v, m });
    }
    Ok(DiagonalPredicate {
        outside: (1..=m).filter(|v| !sigma.contains(v)).map(|v| v - 1).collect(),
    })
}

/// Nondegenerate tuples of `X^b` at `level`, packed, `b` words per tuple.
fn nondegenerate_tuples(level_simplices: &[Simplex], b: usize, level: usize, top_dim: usize) -> Vec<u64> {
    let full = full_mask(level);
    debug_assert!(b > 0);

    fn dfs(
        simplices: &[Simplex],
        b: usize,
        top_dim: usize,
        full: u32,
        covered: u32,
        stack: &mut Vec<u64>,
        out: &mut Vec<u64>,
    ) {
        let depth = stack.len();
        if depth == b {
            if covered == full {
                out.extend_from_slice(stack);
            }
            return;
        }
        let remaining = b - depth;
        for s in simplices {
            let c = covered | (!s.mask & full);
            let missing = (full & !c).count_ones() as usize;
            if missing > (remaining - 1) * top_dim {
                continue;
            }
            stack.push(s.pack());
            dfs(simplices, b, top_dim, full, c, stack, out);
            stack.pop();
        }
    }

    let chunks = par::map(level_simplices, |first| {
        let mut out = Vec::new();
        let covered = !first.mask & full;
        if ((full & !covered).count_ones() as usize) <= (b - 1) * top_dim {
            let mut stack = vec![first.pack()];
            dfs(level_simplices, b, top_dim, full, covered, &mut stack, &mut out);
        }
        out
    });
    chunks.concat()
}

/// Sorted, deduplicated tuples of one level, `m` words each.
struct TupleTable {
    m: usize,
    data: Vec<u64>,
}

impl TupleTable {
    fn from_unsorted(m: usize, data: Vec<u64>) -> Self {
        let n = data.len() / m;
        let mut order: Vec<u32> = (0..n as u32).collect();
        sort_chunks(&mut order, &data, m);
        order.dedup_by(|a, b| chunk(&data, m, *a as usize) == chunk(&data, m, *b as usize));
        let mut out = Vec::with_capacity(order.len() * m);
        for &i in &order {
            out.extend_from_slice(chunk(&data, m, i as usize));
        }
        Self { m, data: out }
    }

    fn len(&self) -> usize {
        self.data.len() / self.m
    }

    fn get(&self, i: usize) -> &[u64] {
        chunk(&self.data, self.m, i)
    }

    fn find(&self, key: &[u64]) -> Option<usize> {
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

fn chunk(data: &[u64], m: usize, i: usize) -> &[u64] {
    &data[i * m..(i + 1) * m]
}

fn sort_chunks(order: &mut [u32], data: &[u64], m: usize) {
    let cmp = |a: &u32, b: &u32| chunk(data, m, *a as usize).cmp(chunk(data, m, *b as usize));
    #[cfg(feature = "parallel")]
    {
        use rayon::slice::ParallelSliceMut;
        order.par_sort_unstable_by(cmp);
    }
    #[cfg(not(feature = "parallel"))]
    {
        order.sort_unstable_by(cmp);
    }
}

/// Union of the images of `patterns` in `X^m`, materialized as a simplicial
/// set whose generators are the nondegenerate tuples.
pub fn build_union(name: &str, x: &Arc<SSet>, m: usize, patterns: &[Pattern], opts: BuildOptions) -> Result<SSet> {
    assert!(m >= 1, "power of at least one factor");
    assert!(patterns.iter().all(|p| p.slots.len() == m));
    let top = x.top_dim();
    let natural_top = patterns.iter().map(|p| p.blocks * top).max().unwrap_or(0);
    let x_limit = x.materialized_through();
    let max_level = opts.max_level.min(natural_top).min(x_limit);
    if max_level > super::MAX_LEVEL {
        return Err(Error::InvalidInput(format!(
            "level {max_level} exceeds the supported maximum {}",
            super::MAX_LEVEL
        )));
    }
    let complete = x.is_complete() && opts.max_level >= natural_top;
    let base = x.basepoint();

    let mut tables: Vec<TupleTable> = Vec::with_capacity(max_level + 1);
    for level in 0..=max_level {
        let simplices = x.simplices_at_level(level);
        let base_key = Simplex::vertex_at(base, level).pack();
        let mut merged: Vec<u64> = Vec::new();
        for p in patterns {
            let blocks = if p.blocks == 0 {
                if level == 0 {
                    vec![]
                } else {
                    continue;
                }
            } else {
                nondegenerate_tuples(&simplices, p.blocks, level, top)
            };
            let count = blocks.len().checked_div(p.blocks).unwrap_or(1);
            if count > opts.budget {
                return Err(Error::Budget {
                    level,
                    size: count,
                    budget: opts.budget,
                });
            }
            merged.reserve(count * m);
            for t in 0..count {
                for slot in &p.slots {
                    merged.push(match *slot {
                        Slot::Block(j) => blocks[t * p.blocks + j],
                        Slot::Base => base_key,
                    });
                }
            }
        }
        let table = TupleTable::from_unsorted(m, merged);
        if table.len() > opts.budget {
            return Err(Error::Budget {
                level,
                size: table.len(),
                budget: opts.budget,
            });
        }
        tables.push(table);
    }

    let mut offsets = vec![0usize; tables.len() + 1];
    for (l, t) in tables.iter().enumerate() {
        offsets[l + 1] = offsets[l] + t.len();
    }

    let mut builder = SSetBuilder::new(name);
    let mut coords: Vec<u64> = Vec::with_capacity(offsets[tables.len()] * m);
    for (level, table) in tables.iter().enumerate() {
        let faces_per_tuple: Vec<Vec<Simplex>> = if level == 0 {
            vec![Vec::new(); table.len()]
        } else {
            par::map_range(table.len(), |t| {
                let tuple = TupleSimplex {
                    coords: table.get(t).iter().map(|&k| Simplex::unpack(k, level)).collect(),
                };
                (0..=level)
                    .map(|i| {
                        let (root, r) = tuple.face(x, i).normalize();
                        let root_level = root.level();
                        let key: Vec<u64> = root.coords.iter().map(|s| s.pack()).collect();
                        let idx = tables[root_level]
                            .find(&key)
                            .expect("face of a union simplex lies in the union");
                        Simplex {
                            gen: (offsets[root_level] + idx) as GenId,
                            level: (level - 1) as u8,
                            mask: r,
                        }
                    })
                    .collect()
            })
        };
        for faces in faces_per_tuple {
            builder.add(level, faces);
        }
        coords.extend_from_slice(&table.data);
    }

    let base_key: Vec<u64> = vec![Simplex::vertex_at(base, 0).pack(); m];
    let basepoint = tables
        .first()
        .and_then(|t| t.find(&base_key))
        .map(|i| i as GenId)
        .unwrap_or(0);
    let truncated_at = if complete { None } else { Some(max_level) };
    Ok(builder.finish_with_tuples(
        basepoint,
        truncated_at,
        Some(TupleCoords {
            factor: x.clone(),
            m,
            data: coords,
        }),
    ))
}

/// The power `X^k`.
pub fn power(x: &Arc<SSet>, k: usize, opts: BuildOptions) -> Result<SSet> {
    if k == 0 {
        return Ok(point());
    }
    build_union(&format!("{}^{k}", x.name()), x, k, &[Pattern::identity(k)], opts)
}

/// The diagonal arrangement `Δ_K(X) = ⋃_{σ∈K} Δ_σ(X)`, built facet by facet.
pub fn arrangement(x: &Arc<SSet>, k: &SimplicialComplex, opts: BuildOptions) -> Result<SSet> {
    let patterns: Vec<Pattern> = k.facets().iter().map(|f| Pattern::diagonal(k.m(), f)).collect();
    build_union(&format!("Δ_K({})", x.name()), x, k.m(), &patterns, opts)
}

/// The polyhedral product `X^K = ⋃_{σ∈K} X^σ` for the pair `(X, *)`.
pub fn polyhedral_product(x: &Arc<SSet>, k: &SimplicialComplex, opts: BuildOptions) -> Result<SSet> {
    let patterns: Vec<Pattern> = k.facets().iter().map(|f| Pattern::coordinate(k.m(), f)).collect();
    build_union(&format!("{}^K", x.name()), x, k.m(), &patterns, opts)
}

/// `X^{∧k}`: `X^k` with the fat wedge collapsed; a point for `k = 0`.
pub fn smash_power(x: &Arc<SSet>, k: usize, opts: BuildOptions) -> Result<SSet> {
    if k == 0 {
        return Ok(point());
    }
    let p = power(x, k, opts)?;
    let base = x.basepoint();
    let coords = p.tuple_coords().expect("power carries coordinates").clone();
    let in_fat_wedge: Vec<bool> = (0..p.num_generators() as GenId)
        .map(|g| coords.coords(&p, g).coords.iter().any(|s| s.gen == base))
        .collect();
    Ok(collapse(&p, &in_fat_wedge)?.with_name(format!("{}^∧{k}", x.name())))
}
