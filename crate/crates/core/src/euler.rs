//! Exact Euler characteristics of diagonal arrangements and their complements.
//!
//! The complement formula needs `X` to be a closed connected `n`-manifold.
//! That is a contract on the caller; nothing here can check it. It really
//! does fail without compactness. For `X = ℝ` and `K = {∅}` the complement
//! is the off-diagonal subset of `ℝ^m`, homotopy equivalent to `S^{m-2}`:
//!
//! ```
//! use diagarr::euler::{complement_euler, EulerInput};
//!
//! for m in 3..8usize {
//!     let input = EulerInput { chi_x: 1, n: 1, m, facets: vec![] };
//!     let formula = complement_euler(&input).unwrap();
//!     let actual = 1 + (-1i128).pow(m as u32);
//!     assert_ne!(formula, actual);
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// Inclusion–exclusion enumerates every subset of the facets.
const MAX_FACETS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerInput {
    #[serde(rename = "chiX")]
    pub chi_x: i64,
    /// Manifold dimension of `X`; only the complement formula uses it.
    #[serde(default)]
    pub n: u32,
    pub m: usize,
    #[serde(default)]
    pub facets: Vec<Vec<usize>>,
}

impl EulerInput {
    pub fn complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::new(self.m, &self.facets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerOutput {
    pub chi_complement: i128,
    pub chi_arrangement: i128,
    pub oracles_agree: bool,
}

const OVERFLOW: Error = Error::Overflow("Euler characteristic");

fn pow(base: i128, e: usize) -> Result<i128> {
    let e = u32::try_from(e).map_err(|_| OVERFLOW)?;
    base.checked_pow(e).ok_or(OVERFLOW)
}

fn sign(e: usize) -> i128 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `χ(Δ_K(X)) = χ(X)·(1 + Σ_{∅≠σ∈K} (χ(X) − 1)^{|σ|})`.
pub fn arrangement_euler_closed_form(chi_x: i64, k: &SimplicialComplex) -> Result<i128> {
    k.require_gate()?;
    let chi = chi_x as i128;
    let mut sum: i128 = 1;
    for sigma in k.simplices().iter().filter(|s| !s.is_empty()) {
        sum = sum.checked_add(pow(chi - 1, sigma.len())?).ok_or(OVERFLOW)?;
    }
    chi.checked_mul(sum).ok_or(OVERFLOW)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|v| b.contains(v)).copied().collect()
}

/// `Σ_S (−1)^{|S|+1} χ(X)^{|∩S|+1}` over nonempty sets `S` of facets, using
/// `χ(Δ_σ) = χ(X)^{|σ|+1}` and `Δ_σ ∩ Δ_τ = Δ_{σ∩τ}` under the gate.
pub fn arrangement_euler_inclusion_exclusion(chi_x: i64, k: &SimplicialComplex) -> Result<i128> {
    k.require_gate()?;
    let facets = k.facets();
    if facets.len() > MAX_FACETS {
        return Err(Error::InvalidInput(format!(
            "{} facets is too many for inclusion-exclusion (limit {MAX_FACETS})",
            facets.len()
        )));
    }
    let chi = chi_x as i128;
    let mut total: i128 = 0;
    for subset in 1u32..(1 << facets.len()) {
        let mut members = (0..facets.len()).filter(|i| subset >> i & 1 == 1);
        let first = members.next().expect("nonempty subset");
        let common = members.fold(facets[first].clone(), |acc, i| intersect(&acc, &facets[i]));
        let term = pow(chi, common.len() + 1)?;
        let term = if subset.count_ones() % 2 == 1 { term } else { -term };
        total = total.checked_add(term).ok_or(OVERFLOW)?;
    }
    Ok(total)
}

/// `χ(M_K(X)) = χ(X)^m − (−1)^{mn} χ(Δ_K(X))` for a closed connected
/// `n`-manifold `X`.
pub fn complement_euler(input: &EulerInput) -> Result<i128> {
    let k = input.complex()?;
    let arrangement = arrangement_euler_closed_form(input.chi_x, &k)?;
    let power = pow(input.chi_x as i128, input.m)?;
    let dual = sign(input.m * input.n as usize) * arrangement;
    power.checked_sub(dual).ok_or(OVERFLOW)
}

/// `χ(Δ_K(X)) = χ(X)·χ(X^K)`.
pub fn fibration_chi_check(chi_delta: i128, chi_x: i128, chi_xk: i128) -> bool {
    chi_x.checked_mul(chi_xk) == Some(chi_delta)
}

/// Complement and arrangement values, with both arrangement formulas compared.
pub fn evaluate(input: &EulerInput) -> Result<EulerOutput> {
    let k = input.complex()?;
    let closed = arrangement_euler_closed_form(input.chi_x, &k)?;
    let ie = arrangement_euler_inclusion_exclusion(input.chi_x, &k)?;
    Ok(EulerOutput {
        chi_complement: complement_euler(input)?,
        chi_arrangement: closed,
        oracles_agree: closed == ie,
    })
}
