use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use diagarr::catalog::CATALOG;
use diagarr::euler::{self, EulerInput};
use diagarr::predict;
use diagarr::sset::{OrderedComplex, DEFAULT_BUDGET};
use diagarr::verify::{self, Space, VerifyError, VerifyOptions, EXIT_FAIL, EXIT_INPUT, EXIT_OUT_OF_SCOPE, EXIT_PASS};
use diagarr::{Error, SimplicialComplex};

/// Diagonal arrangements: predicted against brute-force homology.
///
/// Exit codes: 0 PASS, 1 FAIL, 2 input error, 3 out of the theorem's scope,
/// 4 resource limit.
#[derive(Parser, Debug)]
#[command(name = "diagarr", version)]
struct Cli {
    /// Run the full standard matrix and print one aggregated report.
    #[arg(long)]
    suite: bool,

    /// Write JSON output to this file (`-` for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Predicted reduced homology of the arrangement.
    Predict(CaseArgs),
    /// Brute-force homology of the arrangement.
    Bruteforce {
        #[command(flatten)]
        case: CaseArgs,
        /// `Z` for integral homology, or a prime `p` for `F_p` Betti numbers (`0` for `Q`).
        #[arg(long, default_value = "Z")]
        coeff: String,
        /// Dump the boundary matrices as degree-tagged triplets.
        #[arg(long)]
        triplets: Option<PathBuf>,
    },
    /// Every check for one case.
    Verify {
        #[command(flatten)]
        case: CaseArgs,
        /// Compare against the formula even when the gate condition fails.
        #[arg(long)]
        explore: bool,
    },
    /// Built-in spaces.
    Catalog,
    /// Euler characteristics from `{"chiX", "n", "m", "facets"}`.
    Euler {
        /// JSON input file, `-` for stdin.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "chi", allow_hyphen_values = true)]
        chi_x: Option<i64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        facets: Option<String>,
    },
    /// Same as `--suite`.
    Suite,
}

#[derive(Args, Debug)]
struct CaseArgs {
    /// Catalog space name.
    #[arg(long, conflicts_with = "space_file")]
    space: Option<String>,
    /// JSON ordered complex `{"vertices": [...], "faces": [[...], ...]}`.
    #[arg(long)]
    space_file: Option<PathBuf>,
    /// Attest that the space file is a closed connected manifold of this dimension.
    #[arg(long, requires = "space_file")]
    manifold_dim: Option<u32>,
    /// Size of the index set `[m]`.
    #[arg(long)]
    m: usize,
    /// Facets of `K` as JSON, 1-based, e.g. `[[1,2],[2,3]]`.
    #[arg(long, default_value = "[]")]
    facets: String,
    /// Override the truncation rule (marks the report uncertified).
    #[arg(long)]
    maxdim: Option<usize>,
    /// Per-level enumeration budget.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: verify::error_exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type Outcome = Result<i32, Failure>;

fn parse_facets(s: &str) -> Result<Vec<Vec<usize>>, Failure> {
    serde_json::from_str(s).map_err(|e| input_error(format!("--facets is not a JSON list of lists: {e}")))
}

impl CaseArgs {
    fn space(&self) -> Result<Space, Failure> {
        match (&self.space, &self.space_file) {
            (Some(name), None) => Ok(Space::catalog(name)?),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
                let c: OrderedComplex =
                    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
                let name = path.file_stem().map_or("space".into(), |s| s.to_string_lossy());
                Ok(Space::from_ordered(&name, &c, self.manifold_dim)?)
            }
            _ => Err(input_error("give exactly one of --space or --space-file")),
        }
    }

    fn complex(&self) -> Result<SimplicialComplex, Failure> {
        Ok(SimplicialComplex::new(self.m, &parse_facets(&self.facets)?)?)
    }
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let Some(path) = path else {
        return Ok(());
    };
    let text = serde_json::to_string_pretty(value).expect("serializable");
    if path == Path::new("-") {
        println!("{text}");
        return Ok(());
    }
    fs::write(path, text + "\n").map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn cmd_predict(case: &CaseArgs, json: &Option<PathBuf>) -> Outcome {
    let space = case.space()?;
    let k = case.complex()?;
    if !k.gate_condition() {
        return Err(Failure {
            code: EXIT_OUT_OF_SCOPE,
            message: format!(
                "refused: the decomposition needs 2(dim K + 1) < m, but dim K = {} and m = {}",
                k.dim(),
                k.m()
            ),
        });
    }
    let x = &space.sset;
    let c = diagarr::sset::reduced_chains(x, x.top_dim())?;
    let hx = diagarr::homology::homology(&c)?;
    let summands = predict::arrangement_summands(&hx, &k)?;
    let total = predict::predict_arrangement_homology(&hx, &k)?;
    println!("space {}  {k}", space.name);
    println!("reduced homology of X: {hx}");
    for s in &summands {
        if !s.contribution.is_zero() {
            println!(
                "  σ = {:<8} k = {}  {}",
                s.source.to_string(),
                s.k.unwrap_or(0),
                s.contribution
            );
        }
    }
    println!("predicted reduced homology of the arrangement:");
    print_table(&total);
    #[derive(Serialize)]
    struct Out<'a> {
        space: &'a str,
        complex: verify::ComplexSummary,
        reduced_homology_x: &'a diagarr::GradedAbelianGroup,
        summands: &'a [predict::DecompositionSummand],
        predicted: &'a diagarr::GradedAbelianGroup,
    }
    write_json(
        json,
        &Out {
            space: &space.name,
            complex: verify::ComplexSummary::of(&k),
            reduced_homology_x: &hx,
            summands: &summands,
            predicted: &total,
        },
    )?;
    Ok(EXIT_PASS)
}

fn print_table(h: &diagarr::GradedAbelianGroup) {
    if h.is_zero() {
        println!("  0");
    }
    for (d, g) in h.iter() {
        println!("  degree {d}: {g}");
    }
}

fn cmd_bruteforce(case: &CaseArgs, coeff: &str, triplets: &Option<PathBuf>, json: &Option<PathBuf>) -> Outcome {
    let p = match coeff {
        "Z" | "z" => None,
        s => Some(
            s.parse::<u64>()
                .map_err(|_| input_error(format!("--coeff must be Z or a prime, got {s:?}")))?,
        ),
    };
    let space = case.space()?;
    let k = case.complex()?;
    let (b, chains) = verify::bruteforce(&space, &k, case.maxdim, p, case.budget)?;
    println!("space {}  {k}", space.name);
    println!("cells per dimension: {:?}", b.cells);
    println!("certified through degree {}", b.certified_through);
    if let Some(h) = &b.homology {
        println!("integral homology:");
        print_table(h);
    }
    if let Some(betti) = &b.betti {
        let field = if p == Some(0) {
            "Q".to_string()
        } else {
            format!("F_{}", p.unwrap())
        };
        println!("Betti numbers over {field}: {betti:?}");
    }
    if let Some(path) = triplets {
        let mut f = io::BufWriter::new(
            fs::File::create(path).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?,
        );
        chains
            .write_triplets(&mut f)
            .and_then(|_| f.flush())
            .map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))?;
    }
    write_json(json, &b)?;
    Ok(EXIT_PASS)
}

fn cmd_verify(case: &CaseArgs, explore: bool, json: &Option<PathBuf>) -> Outcome {
    let space = case.space()?;
    let k = case.complex()?;
    let opts = VerifyOptions {
        maxdim: case.maxdim,
        budget: case.budget,
        explore_out_of_scope: explore,
        ..Default::default()
    };
    let run = verify::verify(&space, &k, &opts)?;
    let r = &run.report;
    println!("case {}", r.case_id);
    for note in &r.notes {
        println!("  note: {note}");
    }
    println!("  reduced homology of X: {}", r.reduced_homology_x);
    if let Some(a) = &r.arrangement {
        println!("  arrangement, cells {:?}", a.cells);
        for row in &a.rows {
            let mark = if row.matches { "ok" } else { "MISMATCH" };
            println!(
                "    H~{}: predicted {}  computed {}  {mark}",
                row.degree, row.predicted, row.computed
            );
        }
    }
    if let Some(p) = &r.polyhedral {
        println!("  polyhedral product: {}", if p.matches { "ok" } else { "MISMATCH" });
    }
    if let Some(e) = &r.euler {
        println!(
            "  euler: X {}  arrangement {} / {} / {}  fibre {}  multiplicative {}",
            e.chi_x,
            or_dash(e.chi_arrangement_bruteforce),
            e.chi_arrangement_closed_form,
            e.chi_arrangement_inclusion_exclusion,
            or_dash(e.chi_polyhedral_bruteforce),
            e.fibration_multiplicative
        );
        if let Some(c) = &e.complement {
            println!("  complement: {} (identity {})", c.chi_complement, c.identity_holds);
        }
    }
    if !r.uct.is_empty() {
        println!(
            "  universal coefficients: {}",
            if r.uct.iter().all(|u| u.agree) {
                "ok"
            } else {
                "MISMATCH"
            }
        );
    }
    println!("  total {:.1} ms", run.timings.total_ms);
    println!("{}", r.verdict);
    write_json(json, &run)?;
    Ok(r.verdict.exit_code())
}

fn or_dash(v: Option<i128>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

fn cmd_catalog(json: &Option<PathBuf>) -> Outcome {
    println!(
        "{:<10} {:>3} {:>4} {:>9} {:>3}  model",
        "name", "dim", "chi", "manifold", "n"
    );
    for e in CATALOG {
        println!(
            "{:<10} {:>3} {:>4} {:>9} {:>3}  {}",
            e.name,
            e.dim,
            e.chi,
            if e.closed_manifold { "closed" } else { "no" },
            e.n.map_or("-".to_string(), |n| n.to_string()),
            e.model
        );
    }
    write_json(json, &CATALOG)?;
    Ok(EXIT_PASS)
}

fn cmd_euler(
    input: &Option<PathBuf>,
    chi_x: Option<i64>,
    n: Option<u32>,
    m: Option<usize>,
    facets: &Option<String>,
    json: &Option<PathBuf>,
) -> Outcome {
    let parsed: EulerInput = match input {
        Some(path) => {
            let mut text = String::new();
            if path == Path::new("-") {
                io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| input_error(format!("cannot read stdin: {e}")))?;
            } else {
                text = fs::read_to_string(path)
                    .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            }
            serde_json::from_str(&text).map_err(|e| input_error(format!("bad Euler input: {e}")))?
        }
        None => EulerInput {
            chi_x: chi_x.ok_or_else(|| input_error("give --input or --chi/--m"))?,
            n: n.unwrap_or(0),
            m: m.ok_or_else(|| input_error("give --input or --chi/--m"))?,
            facets: parse_facets(facets.as_deref().unwrap_or("[]"))?,
        },
    };
    let out = euler::evaluate(&parsed)?;
    println!("{}", serde_json::to_string(&out).expect("serializable"));
    write_json(json, &out)?;
    Ok(if out.oracles_agree { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_suite(json: &Option<PathBuf>) -> Outcome {
    let report = verify::run_suite(&VerifyOptions::default());
    for c in &report.cases {
        match &c.outcome {
            verify::CaseOutcome::Report(r) => {
                println!(
                    "{:<40} {:<12} {:>10.1} ms",
                    c.case_id, r.report.verdict, r.timings.total_ms
                )
            }
            verify::CaseOutcome::Error { stage, message, .. } => {
                println!("{:<40} ERROR        {stage}: {message}", c.case_id)
            }
        }
    }
    for k in &report.kunneth {
        println!(
            "{:<40} {}",
            format!("smash {}^{}", k.space, k.k),
            if k.matches { "PASS" } else { "FAIL" }
        );
    }
    for r in &report.restrictions {
        println!("restriction: {r}");
    }
    println!("suite {}  sha256 {}", report.verdict, report.canonical_sha256);
    write_json(json, &report)?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = &cli.json;
    let outcome = match (&cli.command, cli.suite) {
        (None, true) | (Some(Command::Suite), _) => cmd_suite(json),
        (Some(_), true) => Err(input_error("--suite takes no subcommand")),
        (None, false) => Err(input_error("no subcommand; see --help")),
        (Some(Command::Predict(case)), _) => cmd_predict(case, json),
        (Some(Command::Bruteforce { case, coeff, triplets }), _) => cmd_bruteforce(case, coeff, triplets, json),
        (Some(Command::Verify { case, explore }), _) => cmd_verify(case, *explore, json),
        (Some(Command::Catalog), _) => cmd_catalog(json),
        (
            Some(Command::Euler {
                input,
                chi_x,
                n,
                m,
                facets,
            }),
            _,
        ) => cmd_euler(input, *chi_x, *n, *m, facets, json),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
