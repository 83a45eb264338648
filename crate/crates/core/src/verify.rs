//! End-to-end verification of one `(X, K)` case and of the standard suite.
//!
//! All comparisons are of reduced integral homology, degree by degree. The
//! wedge decompositions are homotopy equivalences after one suspension; the
//! suspension is stripped on both sides.

use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog;
use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::euler;
use crate::homology::{betti, betti_from_integral, homology, AbelianGroup, ChainComplex, GradedAbelianGroup};
use crate::par;
use crate::predict::{self, DecompositionSummand};
use crate::sset::{
    arrangement, from_ordered_complex, polyhedral_product, reduced_chains, smash_power, BuildOptions, OrderedComplex,
    SSet, DEFAULT_BUDGET,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OUT_OF_SCOPE: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

pub const SCOPE_NOTE: &str =
    "homology-level check: reduced integral homology compared degree by degree, suspension stripped";

/// Exit code for a failed run.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::OutOfScope { .. } => EXIT_OUT_OF_SCOPE,
        Error::Budget { .. } | Error::Truncated { .. } | Error::Overflow(_) => EXIT_RESOURCE,
        Error::BoundaryViolation { .. } => EXIT_FAIL,
        Error::InvalidInput(_) | Error::IndexOutOfRange { .. } | Error::NotPrime(_) | Error::Disconnected { .. } => {
            EXIT_INPUT
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "OUT-OF-SCOPE")]
    OutOfScope,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_PASS,
            Verdict::Fail => EXIT_FAIL,
            Verdict::OutOfScope => EXIT_OUT_OF_SCOPE,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::OutOfScope => "OUT-OF-SCOPE",
        })
    }
}

/// A component error tagged with the pipeline stage it came from.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct VerifyError {
    pub stage: &'static str,
    pub source: Error,
}

impl VerifyError {
    pub fn exit_code(&self) -> i32 {
        error_exit_code(&self.source)
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, VerifyError>;
}

impl<T> Stage<T> for crate::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, VerifyError> {
        self.map_err(|source| VerifyError { stage, source })
    }
}

/// A space together with the caller's manifold attestation.
#[derive(Debug, Clone)]
pub struct Space {
    pub name: String,
    pub sset: Arc<SSet>,
    /// `Some(n)` if `X` is attested to be a closed connected `n`-manifold.
    pub manifold_dim: Option<u32>,
}

impl Space {
    pub fn catalog(name: &str) -> crate::Result<Self> {
        let e = catalog::entry(name)?;
        Ok(Self {
            name: e.name.to_string(),
            sset: catalog::build(name)?,
            manifold_dim: if e.closed_manifold { e.n } else { None },
        })
    }

    pub fn from_ordered(name: &str, c: &OrderedComplex, manifold_dim: Option<u32>) -> crate::Result<Self> {
        Ok(Self {
            name: name.to_string(),
            sset: Arc::new(from_ordered_complex(name, c)?),
            manifold_dim,
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Overrides the truncation rule; the report is then marked uncertified.
    pub maxdim: Option<usize>,
    pub budget: usize,
    /// Compare against the formula even when the gate fails. The verdict
    /// stays OUT-OF-SCOPE.
    pub explore_out_of_scope: bool,
    /// Coefficients for the universal-coefficients check; `0` is `Q`.
    pub primes: Vec<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            maxdim: None,
            budget: DEFAULT_BUDGET,
            explore_out_of_scope: false,
            primes: vec![0, 2, 3],
        }
    }
}

/// `1 + max_{σ∈K} (|σ|+1)·dim X`: every predicted group lives at or below
/// this degree.
pub fn truncation_rule(x: &SSet, k: &SimplicialComplex) -> usize {
    1 + (k.max_simplex_size() + 1) * x.top_dim()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub m: usize,
    pub facets: Vec<Vec<usize>>,
    pub dim: isize,
    pub f_vector: Vec<usize>,
    pub ghost_vertices: Vec<usize>,
    pub gate_condition: bool,
}

impl ComplexSummary {
    pub fn of(k: &SimplicialComplex) -> Self {
        Self {
            m: k.m(),
            facets: k.to_spec().facets,
            dim: k.dim(),
            f_vector: k.f_vector(),
            ghost_vertices: k.ghost_vertices(),
            gate_condition: k.gate_condition(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub predicted: String,
    pub computed: String,
    pub matches: bool,
}

/// Predicted against brute-force reduced homology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub predicted: GradedAbelianGroup,
    pub computed: GradedAbelianGroup,
    pub certified_through: usize,
    pub rows: Vec<DegreeRow>,
    pub matches: bool,
    pub summands: Vec<DecompositionSummand>,
    pub cells: Vec<usize>,
}

impl Comparison {
    fn new(
        predicted: GradedAbelianGroup,
        computed: GradedAbelianGroup,
        certified_through: usize,
        summands: Vec<DecompositionSummand>,
        cells: Vec<usize>,
    ) -> Self {
        let top = certified_through.min(
            predicted
                .top_degree()
                .unwrap_or(0)
                .max(computed.top_degree().unwrap_or(0)),
        );
        let rows: Vec<DegreeRow> = (0..=top)
            .map(|n| {
                let (p, c) = (predicted.get(n), computed.get(n));
                DegreeRow {
                    degree: n,
                    predicted: p.to_string(),
                    computed: c.to_string(),
                    matches: p == c,
                }
            })
            .collect();
        let matches = rows.iter().all(|r| r.matches);
        Self {
            predicted,
            computed,
            certified_through,
            rows,
            matches,
            summands,
            cells,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementCheck {
    pub n: u32,
    pub chi_complement: i128,
    pub identity_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub chi_x: i128,
    pub chi_arrangement_bruteforce: Option<i128>,
    pub chi_arrangement_closed_form: i128,
    pub chi_arrangement_inclusion_exclusion: i128,
    pub three_way_agree: bool,
    pub chi_polyhedral_bruteforce: Option<i128>,
    pub fibration_multiplicative: bool,
    /// Present only when `X` is attested to be a closed manifold.
    pub complement: Option<ComplementCheck>,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.three_way_agree
            && self.fibration_multiplicative
            && self.complement.as_ref().is_none_or(|c| c.identity_holds)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UctRow {
    pub space: String,
    /// `0` for `Q`.
    pub p: u64,
    pub betti: Vec<usize>,
    pub from_integral: Vec<usize>,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub rule_maxdim: usize,
    pub maxdim: usize,
    pub uncertified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: String,
    pub space: String,
    pub complex: ComplexSummary,
    pub scope: String,
    pub verdict: Verdict,
    pub truncation: Truncation,
    pub reduced_homology_x: GradedAbelianGroup,
    /// The arrangement comparison; absent out of scope unless exploring.
    pub arrangement: Option<Comparison>,
    pub polyhedral: Option<Comparison>,
    pub assembly_identity: Option<bool>,
    pub euler: Option<EulerCheck>,
    pub uct: Vec<UctRow>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn canonical_sha256(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stages_ms: Vec<(String, f64)>,
    pub total_ms: f64,
}

struct Clock {
    start: Instant,
    last: Instant,
    t: Timings,
}

impl Clock {
    fn new() -> Self {
        let now = Instant::now();
        Self {
            start: now,
            last: now,
            t: Timings::default(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.t
            .stages_ms
            .push((stage.to_string(), (now - self.last).as_secs_f64() * 1e3));
        self.last = now;
    }

    fn finish(mut self) -> Timings {
        self.t.total_ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.t
    }
}

/// A report with its canonical hash and the (non-canonical) timings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub report: VerificationReport,
    pub canonical_sha256: String,
    pub timings: Timings,
}

pub fn case_id(space: &str, k: &SimplicialComplex) -> String {
    format!(
        "{space}/m{}/{}",
        k.m(),
        serde_json::to_string(&k.to_spec().facets).expect("facets serialize")
    )
}

fn chi_of(x: &SSet) -> Option<i128> {
    x.is_complete().then(|| {
        x.cell_counts()
            .iter()
            .enumerate()
            .map(|(n, &c)| if n % 2 == 0 { c as i128 } else { -(c as i128) })
            .sum()
    })
}

/// Reduced homology of `X` through `maxdim`, after checking connectivity.
fn reduced_homology_of(
    x: &SSet,
    maxdim: usize,
    stage: &'static str,
) -> Result<(GradedAbelianGroup, ChainComplex), VerifyError> {
    let c = reduced_chains(x, maxdim).stage(stage)?;
    let h = homology(&c).stage(stage)?;
    let h0 = h.get(0);
    if !h0.is_zero() {
        return Err(VerifyError {
            stage,
            source: Error::Disconnected { rank: h0.free + 1 },
        });
    }
    Ok((h, c))
}

fn uct_rows(label: &str, c: &ChainComplex, h: &GradedAbelianGroup, primes: &[u64]) -> Result<Vec<UctRow>, VerifyError> {
    let through = c.certified_through().min(c.top_degree());
    primes
        .iter()
        .map(|&p| {
            let b = betti(c, p).stage("universal coefficients")?;
            let expect = betti_from_integral(h, p, through);
            Ok(UctRow {
                space: label.to_string(),
                p,
                agree: b == expect,
                betti: b,
                from_integral: expect,
            })
        })
        .collect()
}

/// Run every check for one case.
pub fn verify(space: &Space, k: &SimplicialComplex, opts: &VerifyOptions) -> Result<RunRecord, VerifyError> {
    let mut clock = Clock::new();
    let x = &space.sset;
    let rule = truncation_rule(x, k);
    let maxdim = opts.maxdim.unwrap_or(rule);
    let mut notes = vec![SCOPE_NOTE.to_string()];
    if maxdim != rule {
        notes.push(format!(
            "UNCERTIFIED: maxdim {maxdim} differs from the truncation rule {rule}; degrees above {} are not compared",
            maxdim.min(rule)
        ));
    }

    let (hx, _) = reduced_homology_of(x, x.top_dim(), "homology of X")?;
    clock.lap("homology of X");

    let in_scope = k.gate_condition();
    let mut report = VerificationReport {
        case_id: case_id(&space.name, k),
        space: space.name.clone(),
        complex: ComplexSummary::of(k),
        scope: SCOPE_NOTE.to_string(),
        verdict: Verdict::OutOfScope,
        truncation: Truncation {
            rule_maxdim: rule,
            maxdim,
            uncertified: maxdim != rule,
        },
        reduced_homology_x: hx.clone(),
        arrangement: None,
        polyhedral: None,
        assembly_identity: None,
        euler: None,
        uct: Vec::new(),
        notes,
    };
    if !in_scope && !opts.explore_out_of_scope {
        report.notes.push(format!(
            "gate condition 2(dim K + 1) < m fails (dim K = {}, m = {}); no comparison is made",
            k.dim(),
            k.m()
        ));
        return Ok(finish(report, clock));
    }

    let build = BuildOptions::new(maxdim + 1).with_budget(opts.budget);
    let summands = predict::arrangement_summands(&hx, k).stage("prediction")?;
    let predicted = predict::predict_arrangement_homology_unchecked(&hx, k).stage("prediction")?;
    clock.lap("prediction");

    let delta = arrangement(x, k, build).stage("arrangement enumeration")?;
    let delta_cells = delta.cell_counts();
    let chi_delta = chi_of(&delta);
    clock.lap("arrangement enumeration");
    let c_delta = reduced_chains(&delta, maxdim).stage("arrangement chains")?;
    drop(delta);
    let h_delta = homology(&c_delta).stage("arrangement homology")?;
    clock.lap("arrangement homology");
    let arr = Comparison::new(
        predicted.clone(),
        h_delta.clone(),
        c_delta.certified_through().min(maxdim),
        summands,
        delta_cells,
    );

    if !in_scope {
        report.notes.push(format!(
            "gate condition fails (dim K = {}, m = {}); formula {} brute force, informational only",
            k.dim(),
            k.m(),
            if arr.matches { "agrees with" } else { "differs from" }
        ));
        report.arrangement = Some(arr);
        return Ok(finish(report, clock));
    }

    let mut uct = uct_rows("arrangement", &c_delta, &h_delta, &opts.primes)?;
    drop(c_delta);
    clock.lap("arrangement universal coefficients");

    let poly_summands = predict::polyhedral_summands(&hx, k).stage("prediction")?;
    let poly_predicted = predict::predict_polyhedral_homology(&hx, k).stage("prediction")?;
    let xk = polyhedral_product(x, k, build).stage("polyhedral enumeration")?;
    let xk_cells = xk.cell_counts();
    let chi_xk = chi_of(&xk);
    let c_xk = reduced_chains(&xk, maxdim).stage("polyhedral chains")?;
    drop(xk);
    let h_xk = homology(&c_xk).stage("polyhedral homology")?;
    uct.extend(uct_rows("polyhedral", &c_xk, &h_xk, &opts.primes)?);
    let poly = Comparison::new(
        poly_predicted.clone(),
        h_xk,
        c_xk.certified_through().min(maxdim),
        poly_summands,
        xk_cells,
    );
    clock.lap("polyhedral product");

    let assembly = predict::predict_split_fibration(&hx, &poly_predicted).stage("prediction")? == predicted;

    let chi_x = chi_of(x).expect("catalog spaces are complete");
    let closed = euler::arrangement_euler_closed_form(chi_x as i64, k).stage("euler")?;
    let ie = euler::arrangement_euler_inclusion_exclusion(chi_x as i64, k).stage("euler")?;
    let complement = match space.manifold_dim {
        Some(n) => {
            let input = euler::EulerInput {
                chi_x: chi_x as i64,
                n,
                m: k.m(),
                facets: k.to_spec().facets,
            };
            let value = euler::complement_euler(&input).stage("euler")?;
            let sign = if (k.m() * n as usize).is_multiple_of(2) { 1 } else { -1 };
            let reference = chi_x.pow(k.m() as u32) - sign * chi_delta.unwrap_or(closed);
            Some(ComplementCheck {
                n,
                chi_complement: value,
                identity_holds: value == reference,
            })
        }
        None => None,
    };
    let euler = EulerCheck {
        chi_x,
        chi_arrangement_bruteforce: chi_delta,
        chi_arrangement_closed_form: closed,
        chi_arrangement_inclusion_exclusion: ie,
        three_way_agree: chi_delta.is_none_or(|b| b == closed) && closed == ie,
        chi_polyhedral_bruteforce: chi_xk,
        fibration_multiplicative: match (chi_delta, chi_xk) {
            (Some(d), Some(f)) => euler::fibration_chi_check(d, chi_x, f),
            _ => true,
        },
        complement,
    };
    if chi_delta.is_none() || chi_xk.is_none() {
        report
            .notes
            .push("enumeration truncated below the natural top; brute-force Euler values omitted".into());
    }
    if space.manifold_dim.is_none() {
        report
            .notes
            .push("X is not attested as a closed manifold; complement formula not applied".into());
    }
    clock.lap("euler");

    let pass = arr.matches && poly.matches && assembly && euler.holds() && uct.iter().all(|r| r.agree);
    report.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    report.arrangement = Some(arr);
    report.polyhedral = Some(poly);
    report.assembly_identity = Some(assembly);
    report.euler = Some(euler);
    report.uct = uct;
    Ok(finish(report, clock))
}

fn finish(report: VerificationReport, clock: Clock) -> RunRecord {
    RunRecord {
        canonical_sha256: report.canonical_sha256(),
        report,
        timings: clock.finish(),
    }
}

/// Brute-force homology of `Δ_K(X)`, unreduced, through the certified degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteForce {
    pub space: String,
    pub complex: ComplexSummary,
    pub maxdim: usize,
    pub certified_through: usize,
    pub cells: Vec<usize>,
    /// `None` for integral coefficients.
    pub p: Option<u64>,
    pub homology: Option<GradedAbelianGroup>,
    pub betti: Option<Vec<usize>>,
}

/// Materialize `Δ_K(X)` and compute its homology with the given
/// coefficients. Returns the unreduced chain complex as well, for dumping.
pub fn bruteforce(
    space: &Space,
    k: &SimplicialComplex,
    maxdim: Option<usize>,
    p: Option<u64>,
    budget: usize,
) -> Result<(BruteForce, ChainComplex), VerifyError> {
    let x = &space.sset;
    let maxdim = maxdim.unwrap_or_else(|| truncation_rule(x, k));
    let delta =
        arrangement(x, k, BuildOptions::new(maxdim + 1).with_budget(budget)).stage("arrangement enumeration")?;
    let chains = crate::sset::normalized_chains(&delta, maxdim).stage("arrangement chains")?;
    let relative = reduced_chains(&delta, maxdim).stage("arrangement chains")?;
    let through = relative.certified_through().min(maxdim).min(relative.top_degree());
    let (homology_out, betti_out) = match p {
        None => {
            let mut h = homology(&relative).stage("arrangement homology")?.truncated(through);
            h.set(0, h.get(0).direct_sum(&AbelianGroup::free(1)));
            (Some(h), None)
        }
        Some(p) => {
            let mut b = betti(&relative, p).stage("arrangement homology")?;
            b.truncate(through + 1);
            b[0] += 1;
            (None, Some(b))
        }
    };
    Ok((
        BruteForce {
            space: space.name.clone(),
            complex: ComplexSummary::of(k),
            maxdim,
            certified_through: through,
            cells: delta.cell_counts(),
            p,
            homology: homology_out,
            betti: betti_out,
        },
        chains,
    ))
}

/// Predicted against brute-force `H̃(X^{∧k})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethRow {
    pub space: String,
    pub k: usize,
    pub predicted: GradedAbelianGroup,
    pub computed: GradedAbelianGroup,
    pub matches: bool,
    pub cells: Vec<usize>,
}

pub fn kunneth_check(space: &Space, k: usize, budget: usize) -> Result<KunnethRow, VerifyError> {
    let x = &space.sset;
    let (hx, _) = reduced_homology_of(x, x.top_dim(), "homology of X")?;
    let predicted = predict::smash_power_homology(&hx, k).stage("prediction")?;
    let top = k * x.top_dim();
    let s = smash_power(x, k, BuildOptions::new(top + 1).with_budget(budget)).stage("smash enumeration")?;
    let cells = s.cell_counts();
    let c = reduced_chains(&s, top).stage("smash chains")?;
    let computed = homology(&c).stage("smash homology")?;
    Ok(KunnethRow {
        space: space.name.clone(),
        k,
        matches: predicted == computed,
        predicted,
        computed,
        cells,
    })
}

/// The standard `(m, facets)` cases.
pub fn standard_complexes() -> Vec<(usize, Vec<Vec<usize>>)> {
    vec![
        (3, vec![vec![1]]),
        (4, vec![vec![1], vec![2]]),
        (5, vec![vec![1], vec![2], vec![3]]),
        (5, vec![vec![1, 2], vec![2, 3], vec![1, 3]]),
    ]
}

pub const SUITE_SPACES: [&str; 4] = ["S1", "S2", "T2", "RP2"];
pub const KUNNETH_SPACES: [&str; 4] = ["S1", "S2", "T2", "RP2"];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseOutcome {
    Report(Box<RunRecord>),
    Error {
        stage: String,
        message: String,
        exit_code: i32,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub case_id: String,
    pub outcome: CaseOutcome,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub verdict: Verdict,
    pub cases: Vec<SuiteEntry>,
    pub kunneth: Vec<KunnethRow>,
    /// Cases replaced or dropped because of the enumeration budget.
    pub restrictions: Vec<String>,
    pub canonical_sha256: String,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

/// Run every standard case and the smash-power checks. Cases run in
/// parallel; each is deterministic. A case that exceeds the budget is
/// recorded as a restriction; for `RP2` the `m = 3` case stands in.
pub fn run_suite(opts: &VerifyOptions) -> SuiteReport {
    let jobs: Vec<(&str, usize, Vec<Vec<usize>>)> = SUITE_SPACES
        .iter()
        .flat_map(|&s| standard_complexes().into_iter().map(move |(m, f)| (s, m, f)))
        .collect();
    let entries: Vec<(SuiteEntry, Option<String>)> = par::map(&jobs, |(s, m, f)| {
        let k = SimplicialComplex::new(*m, f).expect("standard complexes are valid");
        let id = case_id(s, &k);
        let outcome = Space::catalog(s)
            .map_err(|source| VerifyError {
                stage: "load space",
                source,
            })
            .and_then(|space| verify(&space, &k, opts));
        match outcome {
            Ok(r) => (
                SuiteEntry {
                    case_id: id,
                    outcome: CaseOutcome::Report(Box::new(r)),
                },
                None,
            ),
            Err(e) => {
                let restriction = matches!(e.source, Error::Budget { .. }).then(|| {
                    let fallback = if *s == "RP2" { "; RP2 restricted to m = 3" } else { "" };
                    format!("{id} dropped: {e}{fallback}")
                });
                (
                    SuiteEntry {
                        case_id: id,
                        outcome: CaseOutcome::Error {
                            stage: e.stage.to_string(),
                            message: e.source.to_string(),
                            exit_code: e.exit_code(),
                        },
                    },
                    restriction,
                )
            }
        }
    });
    let kunneth_jobs: Vec<(&str, usize)> = KUNNETH_SPACES
        .iter()
        .flat_map(|&s| [2usize, 3].map(|k| (s, k)))
        .collect();
    let kunneth: Vec<Result<KunnethRow, String>> = par::map(&kunneth_jobs, |&(s, k)| {
        Space::catalog(s)
            .map_err(|e| e.to_string())
            .and_then(|space| kunneth_check(&space, k, opts.budget).map_err(|e| format!("{s}^{k}: {e}")))
    });

    let mut restrictions = Vec::new();
    let mut ok = true;
    let mut cases = Vec::new();
    for (entry, restriction) in entries {
        match (&entry.outcome, restriction) {
            (_, Some(r)) => restrictions.push(r),
            (CaseOutcome::Report(r), None) => ok &= r.report.verdict == Verdict::Pass,
            (CaseOutcome::Error { .. }, None) => ok = false,
        }
        cases.push(entry);
    }
    let mut rows = Vec::new();
    for r in kunneth {
        match r {
            Ok(row) => {
                ok &= row.matches;
                rows.push(row);
            }
            Err(e) => {
                ok = false;
                restrictions.push(e);
            }
        }
    }
    let hashes: Vec<String> = cases
        .iter()
        .map(|c| match &c.outcome {
            CaseOutcome::Report(r) => r.canonical_sha256.clone(),
            CaseOutcome::Error { stage, message, .. } => format!("{}:{stage}:{message}", c.case_id),
        })
        .collect();
    let canonical = serde_json::to_string(&(&hashes, &rows, &restrictions)).expect("serializes");
    SuiteReport {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        cases,
        kunneth: rows,
        restrictions,
        canonical_sha256: hex::encode(Sha256::digest(canonical.as_bytes())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(m: usize, facets: &[&[usize]]) -> SimplicialComplex {
        let f: Vec<Vec<usize>> = facets.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::new(m, &f).unwrap()
    }

    #[test]
    fn circle_case_passes() {
        let space = Space::catalog("S1").unwrap();
        let r = verify(&space, &k(3, &[&[1]]), &VerifyOptions::default())
            .unwrap()
            .report;
        assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        let arr = r.arrangement.unwrap();
        assert_eq!(arr.computed.get(1), AbelianGroup::free(2));
        assert_eq!(arr.computed.get(2), AbelianGroup::free(1));
        assert_eq!(r.truncation.rule_maxdim, 3);
    }

    #[test]
    fn projective_plane_torsion_rows() {
        let space = Space::catalog("RP2").unwrap();
        let r = verify(&space, &k(3, &[&[1]]), &VerifyOptions::default())
            .unwrap()
            .report;
        assert_eq!(r.verdict, Verdict::Pass);
        let arr = r.arrangement.unwrap();
        assert_eq!(arr.computed.get(1), AbelianGroup::new(0, vec![2, 2]));
        assert_eq!(arr.computed.get(2), AbelianGroup::cyclic(2));
        assert_eq!(arr.computed.get(3), AbelianGroup::cyclic(2));
    }

    #[test]
    fn gate_violation_is_out_of_scope() {
        let space = Space::catalog("S1").unwrap();
        let r = verify(&space, &k(4, &[&[1, 2]]), &VerifyOptions::default())
            .unwrap()
            .report;
        assert_eq!(r.verdict, Verdict::OutOfScope);
        assert_eq!(r.verdict.exit_code(), EXIT_OUT_OF_SCOPE);
        assert!(r.arrangement.is_none());
    }

    #[test]
    fn exploring_keeps_out_of_scope_verdict() {
        let space = Space::catalog("S1").unwrap();
        let opts = VerifyOptions {
            explore_out_of_scope: true,
            ..Default::default()
        };
        let r = verify(&space, &k(4, &[&[1, 2]]), &opts).unwrap().report;
        assert_eq!(r.verdict, Verdict::OutOfScope);
        assert!(r.arrangement.is_some());
    }

    #[test]
    fn non_manifold_skips_complement() {
        let space = Space::catalog("interval").unwrap();
        let r = verify(&space, &k(3, &[&[1]]), &VerifyOptions::default())
            .unwrap()
            .report;
        assert_eq!(r.verdict, Verdict::Pass);
        let e = r.euler.unwrap();
        assert!(e.complement.is_none());
        assert!(e.fibration_multiplicative);
    }

    #[test]
    fn disconnected_space_rejected() {
        let c = OrderedComplex::from_ints(&[0, 1], &[]);
        let space = Space::from_ordered("two points", &c, None).unwrap();
        let err = verify(&space, &k(3, &[]), &VerifyOptions::default()).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INPUT);
        assert_eq!(err.stage, "homology of X");
    }

    #[test]
    fn budget_is_a_resource_error() {
        let space = Space::catalog("S2").unwrap();
        let opts = VerifyOptions {
            budget: 3,
            ..Default::default()
        };
        let err = verify(&space, &k(3, &[&[1]]), &opts).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_RESOURCE);
    }

    #[test]
    fn overridden_maxdim_is_flagged() {
        let space = Space::catalog("S2").unwrap();
        let opts = VerifyOptions {
            maxdim: Some(2),
            ..Default::default()
        };
        let r = verify(&space, &k(3, &[&[1]]), &opts).unwrap().report;
        assert!(r.truncation.uncertified);
        assert!(r.notes.iter().any(|n| n.starts_with("UNCERTIFIED")));
        assert_eq!(r.arrangement.unwrap().rows.len(), 3);
    }

    #[test]
    fn reports_are_deterministic() {
        let space = Space::catalog("S2").unwrap();
        let kc = k(4, &[&[1], &[2]]);
        let a = verify(&space, &kc, &VerifyOptions::default()).unwrap();
        let b = verify(&space, &kc, &VerifyOptions::default()).unwrap();
        assert_eq!(a.report.canonical_json(), b.report.canonical_json());
        assert_eq!(a.canonical_sha256, b.canonical_sha256);
    }

    #[test]
    fn bruteforce_torus_homology() {
        let space = Space::catalog("S1").unwrap();
        let (b, chains) = bruteforce(&space, &k(3, &[&[1]]), None, None, DEFAULT_BUDGET).unwrap();
        let h = b.homology.unwrap();
        assert_eq!(h.get(0), AbelianGroup::free(1));
        assert_eq!(h.get(1), AbelianGroup::free(2));
        assert_eq!(h.get(2), AbelianGroup::free(1));
        assert_eq!(homology(&chains).unwrap().truncated(b.certified_through), h);
        let (b2, _) = bruteforce(&space, &k(3, &[&[1]]), None, Some(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(b2.betti.unwrap(), vec![1, 2, 1]);
    }

    #[test]
    fn smash_square_of_projective_plane() {
        let row = kunneth_check(&Space::catalog("RP2").unwrap(), 2, DEFAULT_BUDGET).unwrap();
        assert!(row.matches);
        assert_eq!(row.computed.get(2), AbelianGroup::cyclic(2));
        assert_eq!(row.computed.get(3), AbelianGroup::cyclic(2));
    }
}
