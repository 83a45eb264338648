//! Finitely generated abelian groups and graded groups of them.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `Z^free ⊕ Z/d_1 ⊕ ⋯ ⊕ Z/d_k` with `1 < d_1 | d_2 | ⋯ | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free: usize,
    pub torsion: Vec<u64>,
}

/// Rewrite a list of cyclic orders as invariant factors, dropping trivial ones.
pub fn invariant_factors(mut orders: Vec<u64>) -> Vec<u64> {
    assert!(orders.iter().all(|&d| d > 0), "cyclic orders must be positive");
    orders.retain(|&d| d != 1);
    orders.sort_unstable();
    let n = orders.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (orders[i], orders[j]);
            let g = a.gcd(&b);
            orders[i] = g;
            orders[j] = a / g * b;
        }
    }
    orders.retain(|&d| d != 1);
    orders
}

impl AbelianGroup {
    pub fn new(free: usize, torsion: Vec<u64>) -> Self {
        Self {
            free,
            torsion: invariant_factors(torsion),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, Vec::new())
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, vec![order])
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut t = self.torsion.clone();
        t.extend_from_slice(&other.torsion);
        Self::new(self.free + other.free, t)
    }

    /// `n` copies of `self`.
    pub fn times(&self, n: usize) -> Self {
        let mut t = Vec::with_capacity(self.torsion.len() * n);
        for _ in 0..n {
            t.extend_from_slice(&self.torsion);
        }
        Self::new(self.free * n, t)
    }

    /// `self ⊗ other`, using `Z ⊗ G = G` and `Z/a ⊗ Z/b = Z/gcd(a,b)`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut t = Vec::new();
        for _ in 0..self.free {
            t.extend_from_slice(&other.torsion);
        }
        for _ in 0..other.free {
            t.extend_from_slice(&self.torsion);
        }
        for &a in &self.torsion {
            for &b in &other.torsion {
                t.push(a.gcd(&b));
            }
        }
        Self::new(self.free * other.free, t)
    }

    /// `Tor(self, other)`: only torsion pairs contribute, `Z/gcd(a,b)` each.
    pub fn tor(&self, other: &Self) -> Self {
        let mut t = Vec::new();
        for &a in &self.torsion {
            for &b in &other.torsion {
                t.push(a.gcd(&b));
            }
        }
        Self::new(0, t)
    }

    /// Number of torsion factors divisible by `p`.
    pub fn p_torsion_count(&self, p: u64) -> usize {
        self.torsion.iter().filter(|&&d| d % p == 0).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && self.torsion[j] == d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Degree-indexed groups; zero groups are never stored, so equality is
/// isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedAbelianGroup {
    groups: BTreeMap<usize, AbelianGroup>,
}

impl GradedAbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single group concentrated in one degree.
    pub fn concentrated(degree: usize, g: AbelianGroup) -> Self {
        let mut out = Self::zero();
        out.set(degree, g);
        out
    }

    pub fn from_degrees(items: impl IntoIterator<Item = (usize, AbelianGroup)>) -> Self {
        let mut out = Self::zero();
        for (d, g) in items {
            let sum = out.get(d).direct_sum(&g);
            out.set(d, sum);
        }
        out
    }

    pub fn get(&self, degree: usize) -> AbelianGroup {
        self.groups.get(&degree).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, degree: usize, g: AbelianGroup) {
        if g.is_zero() {
            self.groups.remove(&degree);
        } else {
            self.groups.insert(degree, g);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &AbelianGroup)> {
        self.groups.iter().map(|(&d, g)| (d, g))
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.groups.keys().next_back().copied()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, g) in other.iter() {
            out.set(d, out.get(d).direct_sum(g));
        }
        out
    }

    /// Degrees `≤ max` only.
    pub fn truncated(&self, max: usize) -> Self {
        Self {
            groups: self.groups.range(..=max).map(|(&d, g)| (d, g.clone())).collect(),
        }
    }

    /// Reduced homology from unreduced: one copy of `Z` removed in degree 0.
    pub fn reduced(&self) -> Self {
        let mut out = self.clone();
        let h0 = out.get(0);
        assert!(h0.free >= 1, "reduced homology of an empty space");
        out.set(0, AbelianGroup::new(h0.free - 1, h0.torsion));
        out
    }

    /// `Σ (-1)^n rank H_n`.
    pub fn euler_characteristic(&self) -> i128 {
        self.iter()
            .map(|(d, g)| if d % 2 == 0 { g.free as i128 } else { -(g.free as i128) })
            .sum()
    }
}

impl fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(d, g)| format!("H{d}: {g}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    /// Elementary divisors (prime powers) as an independent canonical form.
    fn elementary(orders: &[u64]) -> BTreeMap<(u64, u32), usize> {
        let mut out = BTreeMap::new();
        for &d in orders {
            let mut n = d;
            let mut p = 2;
            while n > 1 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                if e > 0 {
                    *out.entry((p, e)).or_insert(0) += 1;
                }
                p += 1;
            }
        }
        out
    }

    #[test]
    fn gcd_lcm_normalization() {
        assert_eq!(invariant_factors(vec![2, 3]), vec![6]);
        assert_eq!(invariant_factors(vec![4, 2]), vec![2, 4]);
        assert_eq!(invariant_factors(vec![1, 1]), Vec::<u64>::new());
        assert_eq!(invariant_factors(vec![6, 10, 15]), vec![30, 30]);
    }

    #[test]
    fn tensor_and_tor() {
        let z2 = AbelianGroup::cyclic(2);
        assert_eq!(z2.tensor(&z2), z2);
        assert_eq!(z2.tor(&z2), z2);
        let z = AbelianGroup::free(1);
        assert_eq!(z.tensor(&z2), z2);
        assert!(z.tor(&z2).is_zero());
        assert_eq!(
            AbelianGroup::cyclic(4).tensor(&AbelianGroup::cyclic(6)),
            AbelianGroup::cyclic(2)
        );
        assert!(AbelianGroup::cyclic(2).tensor(&AbelianGroup::cyclic(3)).is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::new(2, vec![2, 2, 6]).to_string(), "Z^2 + (Z/2)^2 + Z/6");
        let g = GradedAbelianGroup::from_degrees([(1, AbelianGroup::free(1)), (2, AbelianGroup::zero())]);
        assert_eq!(g.to_string(), "H1: Z");
    }

    #[test]
    fn zero_degrees_not_stored() {
        let g = GradedAbelianGroup::from_degrees([(3, AbelianGroup::zero())]);
        assert!(g.is_zero());
        assert_eq!(g, GradedAbelianGroup::zero());
    }

    proptest! {
        #[test]
        fn invariant_factors_form_a_chain(orders in prop::collection::vec(1u64..200, 0..8)) {
            let f = invariant_factors(orders.clone());
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert!(f.iter().all(|&d| d > 1));
            prop_assert_eq!(elementary(&f), elementary(&orders));
        }

        #[test]
        fn tensor_is_symmetric(a in 0usize..3, ta in prop::collection::vec(2u64..30, 0..3),
                               b in 0usize..3, tb in prop::collection::vec(2u64..30, 0..3)) {
            let x = AbelianGroup::new(a, ta);
            let y = AbelianGroup::new(b, tb);
            prop_assert_eq!(x.tensor(&y), y.tensor(&x));
            prop_assert_eq!(x.tor(&y), y.tor(&x));
        }
    }
}
