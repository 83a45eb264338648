//! Fill-free shrinking of a chain complex by unit pairs.
//!
//! A pair `(a, b)` with `b ∈ C_{n-1}`, `⟨∂a, b⟩ = ±1` can be cancelled
//! without changing homology. In general that costs fill-in: every other
//! `x` with `⟨∂x, b⟩ ≠ 0` picks up a multiple of `∂a`. Two special cases
//! cost nothing and are taken here until none remain:
//!
//! * collapse: `a` is the only live coface of `b`;
//! * coreduction: `b` is the only live face of `a`.
//!
//! Entries are never rewritten, only hidden, so the work is linear in the
//! number of nonzeros.

use std::collections::VecDeque;

use super::matrix::SparseMatrix;
use super::ChainComplex;

/// Cofaces of every cell of one degree, as flat row-compressed storage.
struct Cofaces {
    offsets: Vec<usize>,
    entries: Vec<(u32, i64)>,
}

impl Cofaces {
    fn of(boundary: &SparseMatrix) -> Self {
        let mut offsets = vec![0usize; boundary.nrows() + 1];
        for col in boundary.columns() {
            for &(r, _) in col {
                offsets[r as usize + 1] += 1;
            }
        }
        for i in 0..boundary.nrows() {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut entries = vec![(0u32, 0i64); offsets[boundary.nrows()]];
        for (c, col) in boundary.columns().iter().enumerate() {
            for &(r, v) in col {
                entries[fill[r as usize]] = (c as u32, v);
                fill[r as usize] += 1;
            }
        }
        Self { offsets, entries }
    }

    fn get(&self, i: usize) -> &[(u32, i64)] {
        &self.entries[self.offsets[i]..self.offsets[i + 1]]
    }
}

#[derive(Clone, Copy)]
enum Task {
    Collapse(usize, u32),
    Coreduce(usize, u32),
}

struct State<'a> {
    c: &'a ChainComplex,
    cofaces: Vec<Cofaces>,
    live: Vec<Vec<bool>>,
    faces_left: Vec<Vec<u32>>,
    cofaces_left: Vec<Vec<u32>>,
    queue: VecDeque<Task>,
}

impl<'a> State<'a> {
    fn new(c: &'a ChainComplex) -> Self {
        let top = c.top_degree();
        let cofaces: Vec<Cofaces> = (0..top).map(|n| Cofaces::of(&c.boundaries[n + 1])).collect();
        let faces_left: Vec<Vec<u32>> = (0..=top)
            .map(|n| c.boundaries[n].columns().iter().map(|col| col.len() as u32).collect())
            .collect();
        let cofaces_left: Vec<Vec<u32>> = (0..=top)
            .map(|n| match cofaces.get(n) {
                Some(cf) => (0..c.rank(n)).map(|i| cf.get(i).len() as u32).collect(),
                None => vec![0; c.rank(n)],
            })
            .collect();
        let mut queue = VecDeque::new();
        for n in 0..=top {
            for i in 0..c.rank(n) {
                if faces_left[n][i] == 1 {
                    queue.push_back(Task::Coreduce(n, i as u32));
                }
                if cofaces_left[n][i] == 1 {
                    queue.push_back(Task::Collapse(n, i as u32));
                }
            }
        }
        Self {
            c,
            cofaces,
            live: (0..=top).map(|n| vec![true; c.rank(n)]).collect(),
            faces_left,
            cofaces_left,
            queue,
        }
    }

    fn kill(&mut self, n: usize, z: usize) {
        self.live[n][z] = false;
        if n > 0 {
            for &(f, _) in &self.c.boundaries[n].columns()[z] {
                let f = f as usize;
                if self.live[n - 1][f] {
                    self.cofaces_left[n - 1][f] -= 1;
                    if self.cofaces_left[n - 1][f] == 1 {
                        self.queue.push_back(Task::Collapse(n - 1, f as u32));
                    }
                }
            }
        }
        if n < self.cofaces.len() {
            for &(g, _) in self.cofaces[n].get(z) {
                let g = g as usize;
                if self.live[n + 1][g] {
                    self.faces_left[n + 1][g] -= 1;
                    if self.faces_left[n + 1][g] == 1 {
                        self.queue.push_back(Task::Coreduce(n + 1, g as u32));
                    }
                }
            }
        }
    }

    fn run(&mut self) {
        while let Some(task) = self.queue.pop_front() {
            let pair = match task {
                Task::Coreduce(n, a) => {
                    let a = a as usize;
                    if !self.live[n][a] || self.faces_left[n][a] != 1 {
                        continue;
                    }
                    let live = &self.live[n - 1];
                    let &(b, v) = self.c.boundaries[n].columns()[a]
                        .iter()
                        .find(|&&(b, _)| live[b as usize])
                        .expect("one live face");
                    (v.abs() == 1).then_some((n, a, b as usize))
                }
                Task::Collapse(n, b) => {
                    let b = b as usize;
                    if !self.live[n][b] || self.cofaces_left[n][b] != 1 {
                        continue;
                    }
                    let live = &self.live[n + 1];
                    let &(a, v) = self.cofaces[n]
                        .get(b)
                        .iter()
                        .find(|&&(a, _)| live[a as usize])
                        .expect("one live coface");
                    (v.abs() == 1).then_some((n + 1, a as usize, b))
                }
            };
            if let Some((n, a, b)) = pair {
                self.kill(n, a);
                self.kill(n - 1, b);
            }
        }
    }

    fn finish(self) -> ChainComplex {
        let c = self.c;
        let top = c.top_degree();
        let new_index: Vec<Vec<u32>> = self
            .live
            .iter()
            .map(|live| {
                let mut next = 0u32;
                live.iter()
                    .map(|&l| {
                        let i = next;
                        next += l as u32;
                        if l {
                            i
                        } else {
                            u32::MAX
                        }
                    })
                    .collect()
            })
            .collect();
        let ranks: Vec<usize> = self.live.iter().map(|l| l.iter().filter(|&&x| x).count()).collect();
        let boundaries: Vec<SparseMatrix> = (1..=top)
            .map(|n| {
                let cols: Vec<Vec<(u32, i64)>> = c.boundaries[n]
                    .columns()
                    .iter()
                    .zip(&self.live[n])
                    .filter(|(_, &l)| l)
                    .map(|(col, _)| {
                        col.iter()
                            .filter(|&&(r, _)| self.live[n - 1][r as usize])
                            .map(|&(r, v)| (new_index[n - 1][r as usize], v))
                            .collect()
                    })
                    .collect();
                SparseMatrix::from_columns(ranks[n - 1], cols)
            })
            .collect();
        ChainComplex::new(ranks, boundaries, c.certified_through(), c.is_complete()).expect("shapes preserved")
    }
}

/// A chain complex with the same homology in every degree, obtained by
/// cancelling fill-free unit pairs.
pub fn reduce(c: &ChainComplex) -> ChainComplex {
    let mut state = State::new(c);
    state.run();
    state.finish()
}
