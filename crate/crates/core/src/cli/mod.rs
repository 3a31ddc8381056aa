//! Command-line front end: `validate`, `compute`, `check` and `oracle`.
//!
//! Each command returns an [`Outcome`] holding the printed text and the exit
//! code: 0 success, 1 validation or match failure, 2 arithmetic failure,
//! 3 parse failure.

pub mod doc;
pub mod expr;

use crate::arith::fmt_q;
use crate::error::Error;
use crate::etale::QuadraticEtale;
use crate::factor::{build_charpoly_pack, compute_c, compute_delta, formula_text, FactorTrace};
use crate::localfield::BaseField;
use crate::params::{
    check_regularity, match_stable_classes, validate_instance, FormulaCase, GroupCase, Instance, Violation,
};
use crate::verify;
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;

pub use doc::{load_instance, to_document, to_json, InstanceDocument};

#[derive(Debug, Parser)]
#[command(name = "tfactor", version, about = "Transfer factors for classical groups over local fields")]
pub struct Cli {
    /// Print a machine-readable JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Valuation window for p-adic arithmetic (at least 8).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every validation rule on an instance document.
    Validate { path: PathBuf },
    /// Compute the transfer factor.
    Compute {
        path: PathBuf,
        /// Show every C_i, norm-test verdict and prefactor.
        #[arg(long)]
        trace: bool,
    },
    /// Run the identity checks on an instance.
    Check { path: PathBuf },
    /// Compare the Hilbert-symbol norm test with brute force over Q_p.
    Oracle {
        p: u64,
        delta: String,
        value: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 3,
        Error::PrecisionExhausted { .. }
        | Error::DepthTooSmall { .. }
        | Error::ZeroValuation
        | Error::DivisionByZero
        | Error::NotInFixedField(_)
        | Error::PoleAtMinusOne
        | Error::PoleAtOne
        | Error::Degenerate
        | Error::NonSymmetric => 2,
        _ => 1,
    }
}

fn failure(e: &Error, json: bool) -> Outcome {
    let text = if json {
        serde_json::json!({ "error": e.to_string(), "exit": exit_code(e) }).to_string() + "\n"
    } else {
        format!("error: {e}\n")
    };
    Outcome {
        code: exit_code(e),
        text,
    }
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize") + "\n"
}

#[derive(Serialize)]
struct ValidationReport {
    case: String,
    valid: bool,
    violations: Vec<String>,
}

fn all_violations(inst: &Instance) -> crate::Result<Vec<Violation>> {
    let mut v = validate_instance(inst)?;
    if v.is_empty() && !check_regularity(&inst.group, &inst.param)? {
        v.push(Violation {
            rule: "regularity",
            detail: "characteristic polynomial is not squarefree or has a root ±1".into(),
        });
    }
    Ok(v)
}

/// Validate the document text.
pub fn cmd_validate(src: &str, precision: Option<u32>, json: bool) -> Outcome {
    let run = || -> crate::Result<Outcome> {
        let inst = load_instance(src, precision)?;
        let v = all_violations(&inst)?;
        let code = if v.is_empty() { 0 } else { 1 };
        let text = if json {
            json_line(&ValidationReport {
                case: FormulaCase::of(inst.group.case, inst.group.d).name().into(),
                valid: v.is_empty(),
                violations: v.iter().map(ToString::to_string).collect(),
            })
        } else if v.is_empty() {
            "valid\n".to_string()
        } else {
            v.iter().map(|x| format!("violation {x}\n")).collect()
        };
        Ok(Outcome { code, text })
    };
    run().unwrap_or_else(|e| failure(&e, json))
}

#[derive(Serialize)]
struct ComputeReport<'a> {
    case: &'a str,
    formula: &'a str,
    delta: String,
    angle: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a FactorTrace>,
}

fn render_trace(out: &mut String, t: &FactorTrace) {
    let _ = writeln!(out, "index set: {}", t.index_set);
    let _ = writeln!(out, "polynomial: {}", t.polynomial);
    for i in &t.indices {
        let _ = writeln!(
            out,
            "C_{} ({}) = {}  [{}]  fixed: {}  sgn: {:+}",
            i.id, i.side, i.c_value, i.formula, i.fixed_by_tau, i.norm_test
        );
    }
    for p in &t.prefactors {
        let _ = writeln!(out, "{}({}) = {}  angle {}", p.label, p.argument, p.value, p.angle);
    }
}

/// Compute Δ for the document text.
pub fn cmd_compute(src: &str, precision: Option<u32>, trace: bool, json: bool) -> Outcome {
    let run = || -> crate::Result<Outcome> {
        let inst = load_instance(src, precision)?;
        let v = all_violations(&inst)?;
        if let Some(first) = v.first() {
            return Err(Error::Invalid(format!("instance is not valid: {first}")));
        }
        if !match_stable_classes(&inst.group, &inst.param)? {
            return Err(Error::MatchFailure(
                "x_i/τ(x_i) must equal (−1)^{d+1} y_i ν/τ(ν), or x_i = y_i when untwisted".into(),
            ));
        }
        let (delta, tr) = compute_delta(&inst)?;
        let fc = FormulaCase::of(inst.group.case, inst.group.d);
        let text = if json {
            json_line(&ComputeReport {
                case: fc.name(),
                formula: formula_text(fc),
                delta: delta.to_string(),
                angle: fmt_q(delta.angle()),
                trace: trace.then_some(&tr),
            })
        } else {
            let mut out = String::new();
            let _ = writeln!(out, "case: {}", fc.name());
            if trace {
                let _ = writeln!(out, "formula: {}", formula_text(fc));
                render_trace(&mut out, &tr);
            }
            let _ = writeln!(out, "delta: {delta}");
            let _ = writeln!(out, "angle: {}", fmt_q(delta.angle()));
            out
        };
        Ok(Outcome { code: 0, text })
    };
    run().unwrap_or_else(|e| failure(&e, json))
}

#[derive(Serialize)]
struct CheckReport {
    case: String,
    notice: Option<String>,
    checks: Vec<verify::CheckResult>,
    passed: bool,
}

fn reduced_checks(inst: &Instance) -> crate::Result<Vec<verify::CheckResult>> {
    let mut out = Vec::new();
    let pack = build_charpoly_pack(inst)?;
    for ip in &inst.param.indices {
        if let Ok(x) = verify::cayley(&ip.y) {
            out.push(verify::CheckResult {
                name: format!("cayley round trip [{}]", ip.id),
                passed: verify::cayley_inv(&x)? == ip.y,
            });
        }
        out.push(verify::CheckResult {
            name: format!("C_i is fixed by τ [{}]", ip.id),
            passed: compute_c(inst, &pack, ip).is_ok(),
        });
    }
    Ok(out)
}

/// Run the identity checks for the document text.
pub fn cmd_check(src: &str, precision: Option<u32>, json: bool) -> Outcome {
    let run = || -> crate::Result<Outcome> {
        let inst = load_instance(src, precision)?;
        let v = all_violations(&inst)?;
        if let Some(first) = v.first() {
            return Err(Error::Invalid(format!("instance is not valid: {first}")));
        }
        let (notice, checks) = if inst.group.case == GroupCase::TwistedGlOdd {
            (None, verify::run_all(&verify::auxiliary_data(&inst)?)?)
        } else {
            (
                Some(format!(
                    "{} is not twisted_gl_odd: only Cayley round trips and C_i checks apply",
                    inst.group.case.name()
                )),
                reduced_checks(&inst)?,
            )
        };
        let passed = checks.iter().all(|c| c.passed);
        let text = if json {
            json_line(&CheckReport {
                case: FormulaCase::of(inst.group.case, inst.group.d).name().into(),
                notice,
                checks,
                passed,
            })
        } else {
            let mut out = String::new();
            if let Some(n) = notice {
                let _ = writeln!(out, "notice: {n}");
            }
            for c in &checks {
                let _ = writeln!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            }
            out
        };
        Ok(Outcome {
            code: if passed { 0 } else { 1 },
            text,
        })
    };
    run().unwrap_or_else(|e| failure(&e, json))
}

#[derive(Serialize)]
struct OracleReport {
    formula: i8,
    oracle: i8,
    agree: bool,
}

/// Norm test of `value` for Q_p(√delta)/Q_p by formula and by brute force.
pub fn cmd_oracle(p: u64, delta: &str, value: &str, depth: u32, precision: Option<u32>, json: bool) -> Outcome {
    let run = || -> crate::Result<Outcome> {
        let t = BaseField::padic_with_precision(p, precision.unwrap_or(64))?.trivial_tower();
        let d = expr::field(delta, &t)?;
        let c = expr::field(value, &t)?;
        let ext = QuadraticEtale::new(&t, d)?;
        let formula = crate::etale::norm_test(&c, &ext)?;
        let oracle = if ext.is_field() {
            crate::etale::brute_force_norm_oracle(&c, &ext, depth)?
        } else {
            1
        };
        let agree = formula == oracle;
        let text = if json {
            json_line(&OracleReport { formula, oracle, agree })
        } else {
            format!("formula: {formula:+}\noracle: {oracle:+}\nagree: {agree}\n")
        };
        Ok(Outcome {
            code: if agree { 0 } else { 1 },
            text,
        })
    };
    run().unwrap_or_else(|e| failure(&e, json))
}

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Outcome {
    let read = |path: &PathBuf| {
        std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
    };
    let with_file = |path: &PathBuf, f: &dyn Fn(&str) -> Outcome| match read(path) {
        Ok(src) => f(&src),
        Err(e) => failure(&e, cli.json),
    };
    match &cli.command {
        Command::Validate { path } => with_file(path, &|s| cmd_validate(s, cli.precision, cli.json)),
        Command::Compute { path, trace } => with_file(path, &|s| cmd_compute(s, cli.precision, *trace, cli.json)),
        Command::Check { path } => with_file(path, &|s| cmd_check(s, cli.precision, cli.json)),
        Command::Oracle { p, delta, value, depth } => cmd_oracle(*p, delta, value, *depth, cli.precision, cli.json),
    }
}
