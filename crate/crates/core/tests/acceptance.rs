//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use diagarr::euler::{self, EulerInput};
use diagarr::homology::group::invariant_factors;
use diagarr::homology::smith::{divisor_chain_holds, smith_normal_form, verify_transforms};
use diagarr::homology::{AbelianGroup, SparseMatrix};
use diagarr::predict;
use diagarr::sset::{arrangement, polyhedral_product, reduced_chains, smash_power, BuildOptions};
use diagarr::verify::{
    run_suite, truncation_rule, verify, CaseOutcome, RunRecord, Space, SuiteReport, Verdict, VerifyOptions,
    EXIT_OUT_OF_SCOPE,
};
use diagarr::{Error, GradedAbelianGroup, SimplicialComplex};

const SEED: u64 = 0x5eed_d1a6;

/// Per-level cell budget for rebuilding complexes in the boundary recheck.
const RECHECK_BUDGET: usize = 200_000;

/// Wall-clock ceilings per matrix case, in seconds.
fn time_limit(space: &str) -> f64 {
    match space {
        "S1" | "S2" => 30.0,
        _ => 300.0,
    }
}

struct Line {
    pass: bool,
    name: &'static str,
    detail: String,
}

fn records(suite: &SuiteReport) -> Result<Vec<&RunRecord>, String> {
    suite
        .cases
        .iter()
        .map(|c| match &c.outcome {
            CaseOutcome::Report(r) => Ok(r.as_ref()),
            CaseOutcome::Error { stage, message, .. } => Err(format!("{}: {stage}: {message}", c.case_id)),
        })
        .collect()
}

fn matrix_arrangement(suite: &SuiteReport) -> Line {
    let name = "1 arrangement homology matches prediction";
    let recs = match records(suite) {
        Ok(r) => r,
        Err(e) => {
            return Line {
                pass: false,
                name,
                detail: e,
            }
        }
    };
    let mut bad = Vec::new();
    let mut slowest = (String::new(), 0.0f64);
    for r in &recs {
        let secs = r.timings.total_ms / 1e3;
        if secs > slowest.1 {
            slowest = (r.report.case_id.clone(), secs);
        }
        let matches = r.report.arrangement.as_ref().is_some_and(|c| c.matches);
        if !matches || r.report.truncation.uncertified {
            bad.push(format!("{} mismatch", r.report.case_id));
        }
        if secs > time_limit(&r.report.space) {
            bad.push(format!("{} took {secs:.1}s", r.report.case_id));
        }
    }
    if !suite.restrictions.is_empty() {
        bad.extend(suite.restrictions.iter().map(|r| format!("restriction: {r}")));
    }
    Line {
        pass: bad.is_empty() && recs.len() == 16,
        name,
        detail: if bad.is_empty() {
            format!("{} cases, slowest {} {:.1}s", recs.len(), slowest.0, slowest.1)
        } else {
            bad.join("; ")
        },
    }
}

fn matrix_polyhedral(suite: &SuiteReport) -> Line {
    let name = "2 polyhedral product homology matches prediction";
    let recs = match records(suite) {
        Ok(r) => r,
        Err(e) => {
            return Line {
                pass: false,
                name,
                detail: e,
            }
        }
    };
    let bad: Vec<String> = recs
        .iter()
        .filter(|r| !r.report.polyhedral.as_ref().is_some_and(|c| c.matches))
        .map(|r| r.report.case_id.clone())
        .collect();
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            format!("{} cases", recs.len())
        } else {
            format!("mismatch: {}", bad.join(", "))
        },
    }
}

fn fibration(suite: &SuiteReport) -> Line {
    let name = "3 Euler characteristic multiplicative over X^K -> Delta_K(X) -> X";
    let recs = match records(suite) {
        Ok(r) => r,
        Err(e) => {
            return Line {
                pass: false,
                name,
                detail: e,
            }
        }
    };
    let mut bad = Vec::new();
    for r in &recs {
        let Some(e) = &r.report.euler else {
            bad.push(format!("{} no euler block", r.report.case_id));
            continue;
        };
        match (e.chi_arrangement_bruteforce, e.chi_polyhedral_bruteforce) {
            (Some(d), Some(f)) if d == e.chi_x * f && e.fibration_multiplicative => {}
            (d, f) => bad.push(format!("{} chi {d:?} vs {} * {f:?}", r.report.case_id, e.chi_x)),
        }
    }
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            format!("{} cases, both sides brute force", recs.len())
        } else {
            bad.join("; ")
        },
    }
}

fn euler_three_way(suite: &SuiteReport) -> Line {
    let name = "4 Euler characteristic: brute force = closed form = inclusion-exclusion";
    let recs = match records(suite) {
        Ok(r) => r,
        Err(e) => {
            return Line {
                pass: false,
                name,
                detail: e,
            }
        }
    };
    let mut bad = Vec::new();
    for r in &recs {
        let Some(e) = &r.report.euler else {
            bad.push(format!("{} no euler block", r.report.case_id));
            continue;
        };
        if e.chi_arrangement_bruteforce != Some(e.chi_arrangement_closed_form)
            || e.chi_arrangement_closed_form != e.chi_arrangement_inclusion_exclusion
        {
            bad.push(format!(
                "{} {:?}/{}/{}",
                r.report.case_id,
                e.chi_arrangement_bruteforce,
                e.chi_arrangement_closed_form,
                e.chi_arrangement_inclusion_exclusion
            ));
        }
        match (&e.complement, r.report.space.as_str()) {
            (Some(c), _) if c.identity_holds => {}
            (None, "interval") => {}
            _ => bad.push(format!("{} complement identity", r.report.case_id)),
        }
    }
    let spot = |m: usize, facets: Vec<Vec<usize>>| {
        euler::evaluate(&EulerInput {
            chi_x: 2,
            n: 2,
            m,
            facets,
        })
        .map(|o| o.chi_complement)
    };
    let a = spot(3, vec![vec![1]]);
    let b = spot(5, vec![vec![1, 2], vec![2, 3], vec![1, 3]]);
    if a.as_ref().ok() != Some(&4) {
        bad.push(format!("S2 m=3 K={{1}}: {a:?}, want 4"));
    }
    if b.as_ref().ok() != Some(&18) {
        bad.push(format!("S2 m=5 boundary triangle: {b:?}, want 18"));
    }
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            format!("{} cases; complements 4 and 18", recs.len())
        } else {
            bad.join("; ")
        },
    }
}

fn kunneth(suite: &SuiteReport) -> Line {
    let name = "5 smash powers match the Kunneth prediction";
    let mut bad = Vec::new();
    for s in ["S1", "S2", "RP2"] {
        for k in [2, 3] {
            match suite.kunneth.iter().find(|r| r.space == s && r.k == k) {
                Some(r) if r.matches => {}
                Some(r) => bad.push(format!("{s}^{k}: {} vs {}", r.predicted, r.computed)),
                None => bad.push(format!("{s}^{k} missing")),
            }
        }
    }
    let z2 = AbelianGroup::cyclic(2);
    let rp2_sq = suite.kunneth.iter().find(|r| r.space == "RP2" && r.k == 2);
    let torsion = rp2_sq.is_some_and(|r| r.computed.get(2) == z2 && r.computed.get(3) == z2);
    if !torsion {
        bad.push("RP2^2 lacks Z/2 in degrees 2 and 3".into());
    }
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            format!(
                "{} rows; RP2^2 = {}",
                suite.kunneth.len(),
                rp2_sq.map_or(String::new(), |r| r.computed.to_string())
            )
        } else {
            bad.join("; ")
        },
    }
}

fn random_group(rng: &mut StdRng) -> GradedAbelianGroup {
    let mut h = GradedAbelianGroup::zero();
    for d in 1..=3 {
        if rng.gen_bool(0.4) {
            continue;
        }
        let torsion: Vec<u64> = (0..rng.gen_range(0..=2))
            .map(|_| [2u64, 3, 4, 6][rng.gen_range(0..4)])
            .collect();
        h.set(d, AbelianGroup::new(rng.gen_range(0..=2), invariant_factors(torsion)));
    }
    h
}

fn random_gated_complex(rng: &mut StdRng) -> SimplicialComplex {
    let m = rng.gen_range(3..=8);
    let max_size = (m - 1) / 2;
    let facets: Vec<Vec<usize>> = (0..rng.gen_range(0..=4))
        .map(|_| {
            let size = rng.gen_range(1..=max_size);
            let mut verts: Vec<usize> = (1..=m).collect();
            for i in 0..size {
                let j = rng.gen_range(i..m);
                verts.swap(i, j);
            }
            verts.truncate(size);
            verts
        })
        .collect();
    SimplicialComplex::new(m, &facets).expect("valid facets")
}

fn assembly() -> Line {
    let name = "6 arrangement prediction = split fibration of polyhedral prediction";
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    for i in 0..100 {
        let hx = random_group(&mut rng);
        let k = random_gated_complex(&mut rng);
        assert!(k.gate_condition());
        let lhs = predict::predict_arrangement_homology(&hx, &k);
        let rhs = predict::predict_polyhedral_homology(&hx, &k).and_then(|p| predict::predict_split_fibration(&hx, &p));
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => bad.push(format!("#{i} {k}: {a:?} vs {b:?}")),
        }
    }
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            "100 random inputs".into()
        } else {
            bad.join("; ")
        },
    }
}

fn random_sparse(rng: &mut StdRng) -> SparseMatrix {
    let rows = rng.gen_range(1..=60);
    let cols = rng.gen_range(1..=60);
    let density = rng.gen_range(0.02..0.3);
    let dense: Vec<Vec<i64>> = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| {
                    if rng.gen_bool(density) {
                        rng.gen_range(-1000..=1000)
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    SparseMatrix::from_dense(&dense)
}

/// Recheck `∂∂ = 0` on every chain complex small enough to rebuild quickly.
/// The remaining ones are checked inside `homology` during the suite run.
fn boundary_squared() -> Result<usize, String> {
    let mut checked = 0;
    let cases = diagarr::verify::standard_complexes();
    for s in ["S1", "S2", "T2", "RP2", "interval", "S1tri"] {
        let space = Space::catalog(s).map_err(|e| e.to_string())?;
        let x = &space.sset;
        let mut complexes = vec![reduced_chains(x, x.top_dim()).map_err(|e| e.to_string())?];
        for k in 2..=3 {
            let sp = smash_power(x, k, BuildOptions::new(k * x.top_dim() + 1)).map_err(|e| e.to_string())?;
            complexes.push(reduced_chains(&sp, k * x.top_dim()).map_err(|e| e.to_string())?);
        }
        for (m, f) in &cases {
            let k = SimplicialComplex::new(*m, f).map_err(|e| e.to_string())?;
            let maxdim = truncation_rule(x, &k);
            let opts = BuildOptions::new(maxdim + 1).with_budget(RECHECK_BUDGET);
            let delta = match arrangement(x, &k, opts) {
                Err(Error::Budget { .. }) => continue,
                r => r.map_err(|e| e.to_string())?,
            };
            complexes.push(reduced_chains(&delta, maxdim).map_err(|e| e.to_string())?);
            let xk = polyhedral_product(x, &k, opts).map_err(|e| e.to_string())?;
            complexes.push(reduced_chains(&xk, maxdim).map_err(|e| e.to_string())?);
        }
        for c in &complexes {
            c.check_boundary_squared().map_err(|e| format!("{s}: {e}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

fn infrastructure(suite: &SuiteReport) -> Line {
    let name = "7 boundary squared, divisor chains, U*M*V = D, universal coefficients";
    let mut bad = Vec::new();

    let recs = records(suite);
    match boundary_squared() {
        Ok(_) if recs.is_ok() => {}
        Ok(_) => bad.push("a suite case failed before its homology check".into()),
        Err(e) => bad.push(format!("boundary squared: {e}")),
    }

    let mut rng = StdRng::seed_from_u64(SEED ^ 0xa11);
    for i in 0..50 {
        let m = random_sparse(&mut rng);
        let form = smith_normal_form(&m, true);
        if !divisor_chain_holds(&form.divisors) {
            bad.push(format!("matrix #{i}: divisors {:?}", form.divisors));
        }
        if !verify_transforms(&m.to_big_dense(), &form) {
            bad.push(format!("matrix #{i} ({}x{}): U*M*V != D", m.nrows(), m.ncols()));
        }
    }

    let mut uct_rows = 0;
    if let Ok(recs) = &recs {
        for r in recs {
            for row in &r.report.uct {
                uct_rows += 1;
                if !row.agree {
                    bad.push(format!(
                        "{} {} p={}: {:?} vs {:?}",
                        r.report.case_id, row.space, row.p, row.betti, row.from_integral
                    ));
                }
            }
            let torsion = [&r.report.arrangement, &r.report.polyhedral]
                .into_iter()
                .flatten()
                .flat_map(|c| c.computed.iter().map(|(_, g)| g.torsion.clone()).collect::<Vec<_>>());
            for t in torsion {
                let t: Vec<BigInt> = t.into_iter().map(BigInt::from).collect();
                if !divisor_chain_holds(&t) {
                    bad.push(format!("{} torsion {t:?}", r.report.case_id));
                }
            }
        }
        if recs.iter().any(|r| r.report.uct.len() != 6) {
            bad.push("a case lacks Q/F2/F3 rows for both spaces".into());
        }
    }
    Line {
        pass: bad.is_empty(),
        name,
        detail: if bad.is_empty() {
            format!("50 random matrices, {uct_rows} coefficient rows")
        } else {
            bad.join("; ")
        },
    }
}

fn gate() -> Line {
    let name = "8 gate violation is reported OUT-OF-SCOPE";
    let outcome = Space::catalog("S2").and_then(|s| Ok((s, SimplicialComplex::full_simplex(4, &[1, 2])?)));
    let detail;
    let pass = match outcome {
        Ok((space, k)) => match verify(&space, &k, &VerifyOptions::default()) {
            Ok(r) => {
                detail = format!("verdict {} exit {}", r.report.verdict, r.report.verdict.exit_code());
                r.report.verdict == Verdict::OutOfScope
                    && r.report.verdict.exit_code() == EXIT_OUT_OF_SCOPE
                    && r.report.arrangement.is_none()
            }
            Err(e) => {
                detail = e.to_string();
                false
            }
        },
        Err(e) => {
            detail = e.to_string();
            false
        }
    };
    Line { pass, name, detail }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let suite = run_suite(&VerifyOptions::default());
    let suite_secs = start.elapsed().as_secs_f64();
    let lines = [
        matrix_arrangement(&suite),
        matrix_polyhedral(&suite),
        fibration(&suite),
        euler_three_way(&suite),
        kunneth(&suite),
        assembly(),
        infrastructure(&suite),
        gate(),
    ];
    for l in &lines {
        println!("{} {}  ({})", if l.pass { "PASS" } else { "FAIL" }, l.name, l.detail);
    }
    println!("suite {suite_secs:.1}s, sha256 {}", suite.canonical_sha256);
    if lines.iter().all(|l| l.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
