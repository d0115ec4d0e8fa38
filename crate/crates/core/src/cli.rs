//! Command-line front end: one subcommand per operation, JSON in and out.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arf::{
    arf, boundary_q0_to_formation, boundary_q1_to_L0, boundary_q3_to_L2, classical_arf,
    generalized_arf_Zx, generalized_arf_form, linking_arf_Zx, mu_values_of,
    symplectic_complete, GF2Form,
};
use crate::error::{Error, Result};
use crate::forms::{EpsForm, LagrangianWitness, Sign, SplitForm};
use crate::json;
use crate::linking::{eval_lambda, eval_mu};
use crate::oracle::{self, Group, Preimages, Report};
use crate::qnormal::{
    lgroups_table, reduce_q1_Zx, reduce_qn_Z, unil_table, QClass, Ring, XMatrix, UNIL3_SPLITTING,
};
use crate::ring::{Modulus, TateClass};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "lquad", version, about = "Arf invariants and hyperquadratic L-groups of Z and Z[x]")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum RingArg {
    Z,
    Zx,
}

impl RingArg {
    fn x(self) -> XMatrix {
        match self {
            RingArg::Z => XMatrix::Z,
            RingArg::Zx => XMatrix::Zx,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupArg {
    Q0zx,
    Q1zx,
    Q3zx,
    Q0z,
    Q1z,
    Q2z,
    Q3z,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ArfMode {
    Classical,
    Generalized,
    Linking,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Suite {
    Arf,
    Q0zx,
    Q3zx,
    Q0z,
    Q3z,
    Hirzebruch,
    ExhaustiveQ3,
    Surjectivity,
    SurjectivityNaive,
    Boundary,
    GeneralizedCanonical,
    LinkingCanonical,
    GeneralizedH,
    LinkingLift,
    Refinement,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the hyperquadratic L-groups, or the UNil groups with --unil.
    Lgroups {
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
        #[arg(long)]
        unil: bool,
    },
    /// Reduce a Q-group element to its normal form.
    Reduce {
        #[arg(long, value_enum)]
        group: GroupArg,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Classical, generalized or linking Arf invariant.
    Arf {
        #[arg(long, value_enum)]
        mode: ArfMode,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Boundary of a Q-group element as a form (n = 1, 3) or formation (n = 0).
    Boundary {
        #[arg(long)]
        n: u8,
        #[arg(long, value_enum, default_value = "z")]
        ring: RingArg,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
    /// Run an oracle suite; exits 4 if a counterexample is found. The arf
    /// suite always adds 200 random forms of dimension 6.
    Oracle {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long = "max-dim", default_value_t = 4)]
        max_dim: usize,
        /// Degree bound for exhaustive-q3 and surjectivity.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        hi: i64,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate μ(x) and, if y is given, λ(x, y) on a linking form resolution.
    EvalLinking {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
}

/// Result of a command: text for standard output and an exit code.
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

fn ok(v: Value) -> Outcome {
    Outcome {
        stdout: format!("{}\n", v),
        code: 0,
    }
}

fn read(path: &PathBuf) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    json::parse_value(&text)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_PARSE,
        _ => EXIT_PRECONDITION,
    }
}

/// One-line JSON diagnostic for standard error.
pub fn diagnostic(e: &Error) -> String {
    let kind = match e {
        Error::Parse(_) => "parse",
        Error::Numerator { .. } => "membership",
        Error::Shape(_) => "shape",
        Error::GroupMismatch(..) => "group",
        _ => "precondition",
    };
    json!({"error": kind, "message": e.to_string()}).to_string()
}

pub fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Lgroups { ring, unil } => Ok(lgroups(ring, unil)),
        Command::Reduce { group, input } => reduce(group, &read(&input)?).map(ok),
        Command::Arf { mode, input } => arf_cmd(mode, &read(&input)?).map(ok),
        Command::Boundary { n, ring, input } => boundary(n, ring, &read(&input)?).map(ok),
        Command::Oracle {
            suite,
            trials,
            seed,
            max_dim,
            degree,
            lo,
            hi,
            json,
        } => {
            let r = run_suite(suite, trials, seed, max_dim, degree, lo, hi)?;
            let stdout = if json {
                format!("{}\n", r.to_json())
            } else {
                format!("{}\n", r)
            };
            Ok(Outcome {
                stdout,
                code: if r.passed() { 0 } else { EXIT_COUNTEREXAMPLE },
            })
        }
        Command::EvalLinking { input } => eval_linking(&read(&input)?).map(ok),
    }
}

fn lgroups(ring: RingArg, unil: bool) -> Outcome {
    let mut out = String::new();
    if unil {
        out.push_str("n  UNil_n(Z)\n");
        for (n, g) in unil_table().iter().enumerate() {
            out.push_str(&format!("{}  {}\n", n, g));
        }
        out.push_str(&format!("{}\n", UNIL3_SPLITTING));
    } else {
        let (name, table) = match ring {
            RingArg::Z => ("Z", lgroups_table(Ring::Z)),
            RingArg::Zx => ("Z[x]", lgroups_table(Ring::Zx)),
        };
        out.push_str(&format!("n  L^n({}) hyperquadratic\n", name));
        for (n, g) in table.iter().enumerate() {
            out.push_str(&format!("{}  {}\n", n, g));
        }
    }
    Outcome { stdout: out, code: 0 }
}

fn scalar_input(v: &Value) -> Result<num_bigint::BigInt> {
    let m = json::matrix_input(v)?;
    if m.rows() != 1 || m.cols() != 1 || !m.get(0, 0).is_constant() {
        return Err(Error::shape("expected an integer or a constant 1x1 matrix"));
    }
    Ok(m.get(0, 0).coeff(0).clone())
}

fn reduce(group: GroupArg, v: &Value) -> Result<Value> {
    let class = match group {
        GroupArg::Q0zx => oracle::reduce_in(Group::Q0Zx, &json::matrix_input(v)?)?,
        GroupArg::Q3zx => oracle::reduce_in(Group::Q3Zx, &json::matrix_input(v)?)?,
        GroupArg::Q1zx => QClass::Q1Zx(reduce_q1_Zx(&json::matrix_input(v)?)?),
        GroupArg::Q0z => QClass::Z(reduce_qn_Z(0, &scalar_input(v)?)),
        GroupArg::Q1z => QClass::Z(reduce_qn_Z(1, &scalar_input(v)?)),
        GroupArg::Q2z => QClass::Z(reduce_qn_Z(2, &scalar_input(v)?)),
        GroupArg::Q3z => QClass::Z(reduce_qn_Z(3, &scalar_input(v)?)),
    };
    Ok(json::class_value(&class))
}

fn arf_cmd(mode: ArfMode, v: &Value) -> Result<Value> {
    match mode {
        ArfMode::Classical => {
            let f = GF2Form::new(json::bits_mat(json::field(v, "psi")?)?)?;
            let value = match v.get("lagrangian") {
                Some(l) => {
                    let e = json::bits_mat(l)?;
                    let e_star = match v.get("complement") {
                        Some(c) => json::bits_mat(c)?,
                        None => symplectic_complete(&f, &e)?,
                    };
                    classical_arf(&f, &e, &e_star)?
                }
                None => arf(&f)?,
            };
            Ok(json!({"arf": value}))
        }
        ArfMode::Generalized => {
            let class = if v.get("mu").is_some() {
                let s = SplitForm::new(Sign::Minus, json::mat(json::field(v, "mu")?)?, json::mat(json::field(v, "nu")?)?)?;
                generalized_arf_Zx(&s)?
            } else {
                let psi = json::mat(json::field(v, "psi")?)?;
                let f = EpsForm::new(Sign::Minus, psi)?;
                let w = match v.get("witness") {
                    Some(w) => json::witness(w)?,
                    None => {
                        if f.dim() % 2 != 0 {
                            return Err(Error::shape("form of odd dimension has no standard lagrangian"));
                        }
                        LagrangianWitness::standard(f.dim() / 2)
                    }
                };
                generalized_arf_form(&f, &w)?
            };
            Ok(json::q3_value(&class))
        }
        ArfMode::Linking => {
            let res = json::resolution(v)?;
            let mu: Vec<TateClass> = match v.get("mu_values") {
                Some(m) => json::poly_vec(m)?.iter().map(|p| p.reduce_mod(Modulus::Two)).collect(),
                None => mu_values_of(&res),
            };
            Ok(json::q0_value(&linking_arf_Zx(&res, &mu)?))
        }
    }
}

fn boundary(n: u8, ring: RingArg, v: &Value) -> Result<Value> {
    let m = json::matrix_input(v)?;
    let x = ring.x();
    match n % 4 {
        3 => Ok(json::form_value(&boundary_q3_to_L2(&m, x)?)),
        1 => Ok(json::form_value(&boundary_q1_to_L0(&m, x)?)),
        0 => Ok(json::formation_value(&boundary_q0_to_formation(&m, x)?)),
        _ => Err(Error::pre("the boundary is defined for n = 0, 1, 3 (L^2 vanishes)")),
    }
}

fn eval_linking(v: &Value) -> Result<Value> {
    let res = json::resolution(v)?;
    let x = json::vec_pair(json::field(v, "x")?)?;
    let mut out = vec![("mu", json::dyadic_value(&eval_mu(&res, &x)?))];
    if let Some(y) = v.get("y") {
        let y = json::vec_pair(y)?;
        out.push(("lambda", json::dyadic_value(&eval_lambda(&res, &x, &y)?)));
    }
    Ok(json::object(out))
}

pub fn run_suite(
    suite: Suite,
    trials: usize,
    seed: u64,
    max_dim: usize,
    degree: usize,
    lo: i64,
    hi: i64,
) -> Result<Report> {
    Ok(match suite {
        Suite::Arf => oracle::arf_suite(max_dim, 200, seed)?,
        Suite::Q0zx => oracle::verify_reduction(Group::Q0Zx, trials, seed),
        Suite::Q3zx => oracle::verify_reduction(Group::Q3Zx, trials, seed),
        Suite::Q0z => oracle::verify_reduction(Group::Q0Z, trials, seed),
        Suite::Q3z => oracle::verify_reduction(Group::Q3Z, trials, seed),
        Suite::Hirzebruch => oracle::hirzebruch_suite(trials, seed),
        Suite::ExhaustiveQ3 => oracle::exhaustive_q3_truncated(degree, lo, hi)?,
        Suite::Surjectivity => oracle::surjectivity(Preimages::Section, degree),
        Suite::SurjectivityNaive => oracle::surjectivity(Preimages::Naive, degree),
        Suite::Boundary => oracle::boundary_suite(),
        Suite::GeneralizedCanonical => oracle::generalized_canonical_suite(trials, seed),
        Suite::LinkingCanonical => oracle::linking_canonical_suite(trials, seed),
        Suite::GeneralizedH => oracle::generalized_h_suite(trials, seed),
        Suite::LinkingLift => oracle::linking_lift_suite(trials, seed),
        Suite::Refinement => oracle::refinement_suite(trials, seed),
    })
}
