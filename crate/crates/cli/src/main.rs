use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hnc_core::acceptance::{run_all, AcceptanceConfig};
use hnc_core::algebra::{eval_at_angle, AlgebraElement, GroupElement, MatrixJson, RationalAngle};
use hnc_core::derivations::{decompose, Derivation};
use hnc_core::fredholm::{
    bott_projector, dirac_even_pairing, even_pairing_trace, lattice_chern, odd_pairing, parse_algebra_matrix,
    ModuleName, Parity,
};
use hnc_core::group_structure::{
    classify_element, cyclic_cohomology_dim, group_cohomology, periodic_cyclic_dims, NgType,
};
use hnc_core::kk::{
    check_duality, check_exactness, check_faithfulness, check_phi_pullback, khomology_sequence, pairing_tables,
    pv_ktheory_sequence, run_mutations, verify_tables, VerifyConfig,
};
use hnc_core::HncError;

mod render;

const DEFAULT_SEED: u64 = 20240917;

#[derive(Parser, Debug)]
#[command(name = "hnc", version, about = "Computations in the group ring and C*-algebra of the discrete Heisenberg group")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Truncation size N for operator computations
    #[arg(long, global = true, default_value_t = 64)]
    truncation: usize,
    /// Singular-value threshold for kernel dimensions
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Torus sampling grid for projector fields
    #[arg(long, global = true, default_value_t = 64)]
    grid: usize,
    /// Number of commutators in the even trace formula
    #[arg(long = "n-commutators", global = true, default_value_t = 4)]
    n_commutators: usize,
    /// Seed for randomized suites (HNC_SEED takes precedence)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON (default)
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit a human-readable table
    #[arg(long, global = true)]
    table: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Group-ring arithmetic
    Alg {
        #[command(subcommand)]
        op: AlgOp,
    },
    /// Derivations given by their values on U and V
    Deriv {
        #[command(subcommand)]
        op: DerivOp,
    },
    /// Centralizers, group cohomology and cyclic-cohomology dimensions
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// K-theory / K-homology pairing tables
    Pairing {
        #[command(subcommand)]
        op: PairingOp,
    },
    /// Pairing of a Fredholm module with a unitary (odd) or projection (even)
    Index {
        #[arg(long)]
        module: String,
        /// Class label (U, V, V_a, ...), element JSON or matrix JSON
        #[arg(long, required_unless_present = "projection")]
        unitary: Option<String>,
        #[arg(long, conflicts_with = "unitary")]
        projection: Option<String>,
    },
    /// Lattice Chern number of the two-band Bott projector
    Chern {
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        mass: f64,
        /// Also evaluate the Dirac trace pairing at --truncation
        #[arg(long)]
        dirac: bool,
    },
    /// Six-term exact sequences as integer maps
    Sequence {
        which: SequenceKind,
        /// Verify exactness and run the mutation suite
        #[arg(long)]
        check: bool,
    },
    /// Acceptance suite
    Report {
        which: ReportKind,
        /// Include per-criterion wall-clock times
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AlgOp {
    Mul { a: String, b: String },
    Star { a: String },
    Central { a: String },
    Eval {
        a: String,
        /// Rational angle s/t
        #[arg(long)]
        theta: String,
    },
}

#[derive(Subcommand, Debug)]
enum DerivOp {
    Check { d: String },
    Decompose { d: String },
    Apply { d: String, x: String },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    /// Element as `p,q,r` or `{"p":..,"q":..,"r":..}`
    Classify {
        #[arg(allow_hyphen_values = true)]
        element: String,
    },
    /// N_g descriptor (Z, Z2, ZxZ3, CentralExtension(2), H3) or an element
    Cohomology {
        #[arg(allow_hyphen_values = true)]
        target: String,
    },
    HcDim {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum PairingOp {
    Table,
    Verify,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SequenceKind {
    Ktheory,
    Khomology,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportKind {
    All,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<HncError> for Failure {
    fn from(e: HncError) -> Self {
        match e {
            HncError::Parse(_) | HncError::InvalidArgument(_) | HncError::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

/// Output document plus whether every check in it passed.
struct Outcome {
    result: Value,
    ok: bool,
    failing: Vec<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { result, ok: true, failing: Vec::new() }
    }

    fn checked(result: Value, failing: Vec<String>) -> Self {
        Outcome { result, ok: failing.is_empty(), failing }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = resolve_seed(cli.opts.seed);
    let config = json!({
        "command": command_name(&cli.command),
        "truncation": cli.opts.truncation,
        "tol": cli.opts.tol,
        "grid": cli.opts.grid,
        "n_commutators": cli.opts.n_commutators,
        "seed": seed,
    });
    match execute(&cli, seed) {
        Ok(out) => {
            let mut doc = json!({ "config": config, "result": out.result, "pass": out.ok });
            if !out.ok {
                doc["failing"] = json!(out.failing);
            }
            if cli.opts.table {
                print!("{}", render::table(&doc));
            } else {
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: {}", out.failing.join("; "));
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    std::env::var("HNC_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .or(flag)
        .unwrap_or(DEFAULT_SEED)
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Alg { op } => format!("alg {}", match op {
            AlgOp::Mul { .. } => "mul",
            AlgOp::Star { .. } => "star",
            AlgOp::Central { .. } => "central",
            AlgOp::Eval { .. } => "eval",
        }),
        Command::Deriv { op } => format!("deriv {}", match op {
            DerivOp::Check { .. } => "check",
            DerivOp::Decompose { .. } => "decompose",
            DerivOp::Apply { .. } => "apply",
        }),
        Command::Group { op } => format!("group {}", match op {
            GroupOp::Classify { .. } => "classify",
            GroupOp::Cohomology { .. } => "cohomology",
            GroupOp::HcDim { .. } => "hc-dim",
        }),
        Command::Pairing { op } => format!("pairing {}", match op {
            PairingOp::Table => "table",
            PairingOp::Verify => "verify",
        }),
        Command::Index { .. } => "index".into(),
        Command::Chern { .. } => "chern".into(),
        Command::Sequence { which, .. } => format!("sequence {}", match which {
            SequenceKind::Ktheory => "ktheory",
            SequenceKind::Khomology => "khomology",
        }),
        Command::Report { .. } => "report all".into(),
    }
}

/// Inline JSON, a path to a JSON file, or `-` for stdin.
fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    let t = arg.trim_start();
    if !t.starts_with('{') && !t.starts_with('[') && Path::new(arg).is_file() {
        return std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = read_input(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed {what} JSON: {e}")))
}

/// Element JSON, or one of the shorthands `1`, `U`, `V`, `W`, `U*`, `V*`, `W*`.
fn element(arg: &str) -> Result<AlgebraElement, Failure> {
    let gen = match arg.trim() {
        "1" => Some(AlgebraElement::one()),
        "U" => Some(AlgebraElement::u()),
        "V" => Some(AlgebraElement::v()),
        "W" => Some(AlgebraElement::w()),
        "U*" => Some(AlgebraElement::u().star()),
        "V*" => Some(AlgebraElement::v().star()),
        "W*" => Some(AlgebraElement::w().star()),
        _ => None,
    };
    match gen {
        Some(x) => Ok(x),
        None => parse_json(arg, "element"),
    }
}

fn derivation(arg: &str) -> Result<Derivation, Failure> {
    parse_json(arg, "derivation")
}

fn group_element(arg: &str) -> Result<GroupElement, Failure> {
    let t = arg.trim();
    if t.starts_with('{') {
        return parse_json(t, "group element");
    }
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [p, q, r] => {
            let n = |s: &str| s.parse::<i64>().map_err(|_| Failure::Usage(format!("bad coordinate `{s}`")));
            Ok(GroupElement::new(n(p)?, n(q)?, n(r)?))
        }
        _ => Err(Failure::Usage(format!("expected p,q,r or JSON, got `{arg}`"))),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn execute(cli: &Cli, seed: u64) -> Result<Outcome, Failure> {
    let o = &cli.opts;
    match &cli.command {
        Command::Alg { op } => alg(op),
        Command::Deriv { op } => deriv(op),
        Command::Group { op } => group(op),
        Command::Pairing { op } => pairing(op, o),
        Command::Index { module, unitary, projection } => index(o, module, unitary.as_deref(), projection.as_deref()),
        Command::Chern { mass, dirac } => chern(o, *mass, *dirac),
        Command::Sequence { which, check } => sequence(*which, *check),
        Command::Report { timings, .. } => report(o, seed, *timings),
    }
}

fn alg(op: &AlgOp) -> Result<Outcome, Failure> {
    Ok(Outcome::ok(match op {
        AlgOp::Mul { a, b } => to_value(&element(a)?.mul(&element(b)?)),
        AlgOp::Star { a } => to_value(&element(a)?.star()),
        AlgOp::Central { a } => json!({ "central": element(a)?.is_central() }),
        AlgOp::Eval { a, theta } => {
            let theta: RationalAngle = theta.parse()?;
            let m = eval_at_angle(&element(a)?, theta);
            json!({ "theta": theta.to_string(), "matrix": MatrixJson::from(&m) })
        }
    }))
}

fn deriv(op: &DerivOp) -> Result<Outcome, Failure> {
    match op {
        DerivOp::Check { d } => {
            let report = derivation(d)?.check_consistency();
            let failing = if report.pass {
                Vec::new()
            } else {
                vec![format!("{} consistency violation(s)", report.violations.len())]
            };
            Ok(Outcome::checked(to_value(&report), failing))
        }
        DerivOp::Decompose { d } => Ok(Outcome::ok(to_value(&decompose(&derivation(d)?)?))),
        DerivOp::Apply { d, x } => Ok(Outcome::ok(to_value(&derivation(d)?.apply(&element(x)?)?))),
    }
}

fn group(op: &GroupOp) -> Result<Outcome, Failure> {
    Ok(Outcome::ok(match op {
        GroupOp::Classify { element } => to_value(&classify_element(group_element(element)?)),
        GroupOp::Cohomology { target } => {
            let ty = match target.parse::<NgType>() {
                Ok(t) => t,
                Err(_) => classify_element(group_element(target)?).ng_type,
            };
            json!({ "group": ty.to_string(), "dims": group_cohomology(ty).dims })
        }
        GroupOp::HcDim { n } => {
            let r = cyclic_cohomology_dim(*n);
            let (even, odd) = periodic_cyclic_dims();
            json!({
                "degree": r.degree,
                "finite_rank": r.finite_rank,
                "countable": r.countable_factor,
                "periodic": { "even": even, "odd": odd },
            })
        }
    }))
}

fn stabilization(truncation: usize) -> Vec<usize> {
    vec![(truncation / 2).max(2), truncation, truncation * 2]
}

fn pairing(op: &PairingOp, o: &GlobalOpts) -> Result<Outcome, Failure> {
    match op {
        PairingOp::Table => {
            let (even, odd) = pairing_tables();
            Ok(Outcome::ok(json!({ "even": to_value(&even), "odd": to_value(&odd) })))
        }
        PairingOp::Verify => {
            let cfg = VerifyConfig {
                odd_truncations: stabilization(o.truncation),
                n_commutators: o.n_commutators,
                tol: o.tol,
                ..VerifyConfig::default()
            };
            let v = verify_tables(&cfg)?;
            let failing = v
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("pairing table entry <{}, {}>", c.col, c.row))
                .collect();
            Ok(Outcome::checked(json!({ "verify_config": to_value(&cfg), "report": to_value(&v) }), failing))
        }
    }
}

fn index(o: &GlobalOpts, module: &str, unitary: Option<&str>, projection: Option<&str>) -> Result<Outcome, Failure> {
    let module: ModuleName = module.parse()?;
    match (module.parity(), unitary, projection) {
        (Parity::Odd, Some(u), _) => {
            let u = parse_algebra_matrix(&read_input(u)?)?;
            let r = odd_pairing(module, &u, &stabilization(o.truncation), o.tol)?;
            Ok(Outcome::ok(to_value(&r)))
        }
        (Parity::Even, _, Some(p)) => {
            let p = parse_algebra_matrix(&read_input(p)?)?;
            let r = even_pairing_trace(module, &p, o.n_commutators, o.truncation, 0.1)?;
            Ok(Outcome::ok(to_value(&r)))
        }
        (Parity::Odd, None, _) => Err(Failure::Usage(format!("{module} is odd: pass --unitary"))),
        (Parity::Even, _, None) => Err(Failure::Usage(format!("{module} is even: pass --projection"))),
    }
}

fn chern(o: &GlobalOpts, mass: f64, dirac: bool) -> Result<Outcome, Failure> {
    let field = bott_projector(o.grid, mass)?;
    let report = lattice_chern(&field)?;
    let mut result = json!({ "mass": mass, "field": to_value(&field.summary()), "chern": to_value(&report) });
    if dirac {
        let d = dirac_even_pairing(&field, o.truncation, o.n_commutators, 0.1)?;
        let agree = d.value == report.value;
        result["dirac"] = to_value(&d);
        result["agree"] = json!(agree);
        let failing = if agree {
            Vec::new()
        } else {
            vec![format!("Dirac pairing {} differs from Chern number {}", d.value, report.value)]
        };
        return Ok(Outcome::checked(result, failing));
    }
    Ok(Outcome::ok(result))
}

fn sequence(which: SequenceKind, check: bool) -> Result<Outcome, Failure> {
    let (name, maps) = match which {
        SequenceKind::Ktheory => ("ktheory", pv_ktheory_sequence()),
        SequenceKind::Khomology => ("khomology", khomology_sequence()),
    };
    let mut result = json!({ "maps": to_value(&maps) });
    if !check {
        return Ok(Outcome::ok(result));
    }
    let exact = check_exactness(&maps)?;
    let mutations: Vec<_> = run_mutations()?.into_iter().filter(|m| m.mutation.sequence == name).collect();
    let mut failing: Vec<String> =
        exact.failing_nodes().iter().map(|n| format!("{name} sequence not exact at node {n}")).collect();
    failing.extend(
        mutations
            .iter()
            .filter(|m| !m.pass)
            .map(|m| format!("mutation of map {} [{},{}] failed at {:?}", m.mutation.map, m.mutation.row, m.mutation.col, m.failing_nodes)),
    );
    result["exactness"] = to_value(&exact);
    result["mutations"] = to_value(&mutations);
    Ok(Outcome::checked(result, failing))
}

fn report(o: &GlobalOpts, seed: u64, timings: bool) -> Result<Outcome, Failure> {
    let cfg = AcceptanceConfig { seed, tol: o.tol, ..AcceptanceConfig::default() };
    let results = run_all(&cfg);
    let criteria: Vec<Value> = results
        .iter()
        .map(|r| {
            let mut v = json!({ "id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail });
            if timings {
                v["seconds"] = json!(r.seconds);
            }
            v
        })
        .collect();
    let failing = results.iter().filter(|r| !r.pass).map(|r| format!("criterion {} ({})", r.id, r.name)).collect();
    let extras = json!({
        "duality": to_value(&check_duality()),
        "faithfulness": to_value(&check_faithfulness()),
        "pullback": to_value(&check_phi_pullback()),
    });
    Ok(Outcome::checked(
        json!({ "acceptance_config": to_value(&cfg), "criteria": criteria, "supporting": extras }),
        failing,
    ))
}
