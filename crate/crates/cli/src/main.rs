//! `stabint`: stability deciders, integrability tests, Ore-operator
//! calculator and D-finite certificates over exact rational arithmetic.
//!
//! Every command prints a single JSON record on stdout (batch mode: one per
//! line). Exit codes: 0 for a computed verdict (including negative ones),
//! 1 when the input is outside the decidable fragments, 2 for input errors.

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use stabint_core::dfinite::{
    self, default_truncation, diff_to_rec, eventual_stability_bound,
    eventual_stability_certificate, guess_min_annihilator, rec_to_diff, SequenceRule, TruncSeries,
};
use stabint_core::dynsys::{analyze, check_godelle, godelle_truncation, FiniteDynSys};
use stabint_core::integrate::{
    integrable_in_field, is_differential_reduced, liouville_hardy, risch_de_poly, skolem_scan,
    IntegrateError, RischOutcome,
};
use stabint_core::ore::OpKind;
use stabint_core::parse::{parse_elem_expr, parse_operator, parse_poly, parse_ratfunc, ParseError};
use stabint_core::poly::Q;
use stabint_core::stability::{
    check_chain, moment_obstruction, stable_elementary, stable_in_ratfield, witness_chain,
    ChainError, ChainGenerator, ElemExpr, Obstruction, StabilityVerdict,
};
use stabint_core::{Derivation, OreOperator};
use std::collections::HashMap;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "stabint",
    about = "Deciders for stability of iterated antiderivatives, with exact witnesses",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DerivationArg {
    Ddx,
    Euler,
}

impl DerivationArg {
    fn to_core(self) -> Derivation {
        match self {
            DerivationArg::Ddx => Derivation::DDx,
            DerivationArg::Euler => Derivation::EulerXDDx,
        }
    }

    fn name(self) -> &'static str {
        match self {
            DerivationArg::Ddx => "ddx",
            DerivationArg::Euler => "euler",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide stability of an expression f*log(x)^m*exp(g)
    Stable {
        #[arg(long, value_enum, default_value = "ddx")]
        derivation: DerivationArg,
        /// Expression, e.g. "x^3*exp(2*x)" or "log(x)/(x-1)"
        expr: String,
    },
    /// Produce and verify a depth-k witness chain of antiderivatives
    Witness {
        #[arg(long, value_enum, default_value = "ddx")]
        derivation: DerivationArg,
        /// Chain depth
        #[arg(long, default_value_t = 5)]
        depth: usize,
        expr: String,
    },
    /// First moment index i <= N with x^i*f not integrable in Q(x)
    Moments {
        #[arg(short = 'N', long = "max", default_value_t = 10)]
        max: usize,
        /// Rational function
        f: String,
    },
    /// Is f integrable inside Q(x) itself (f = delta(g) with rational g)?
    Integrable {
        #[arg(long, value_enum, default_value = "ddx")]
        derivation: DerivationArg,
        f: String,
    },
    /// Liouville-Hardy test: is f*log(x) elementary integrable?
    Lh { f: String },
    /// Differential-reduced predicate: gcd(b, a - i*b') = 1 for all integers i
    Dred { f: String },
    /// Solve P = b*Q' + (a + (m+1)*b')*Q for polynomial Q
    Risch {
        #[arg(long)]
        p: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(short, long, default_value_t = 0)]
        m: usize,
    },
    /// Indices i in [0, max] with x^i*f*exp(g) elementary integrable
    Skolem {
        #[arg(long, default_value_t = 10)]
        max: usize,
        /// Expression of the shape f*exp(g)
        expr: String,
    },
    /// Noncommutative operator arithmetic in `Q(x)<D>` and `Q(n)<S>`
    Ore {
        #[command(subcommand)]
        op: OreCommand,
    },
    /// D-finite series: guessing, conversions and stability certificates
    Dfinite {
        #[command(subcommand)]
        op: DfiniteCommand,
    },
    /// Finite dynamical systems: Fix/Per/Stab/Attrac
    Dynsys {
        #[command(subcommand)]
        op: DynsysCommand,
    },
    /// Run the stability decider on every line of a file
    Batch {
        #[arg(long, value_enum, default_value = "ddx")]
        derivation: DerivationArg,
        file: String,
    },
}

#[derive(Subcommand)]
enum OreCommand {
    /// Noncommutative product A*B
    Mul { a: String, b: String },
    /// Right division: A = Q*B + R
    Divmod { a: String, b: String },
    /// Greatest common right divisor
    Gcrd { a: String, b: String },
    /// Least common left multiple
    Lclm { a: String, b: String },
    /// Apply a differential operator to a rational function
    Apply {
        l: String,
        #[arg(long)]
        to: String,
    },
}

#[derive(Subcommand)]
enum DfiniteCommand {
    /// Guess a minimal annihilator within (order, degree) bounds
    Guess {
        #[arg(long, default_value_t = 3)]
        max_ord: usize,
        #[arg(long, default_value_t = 3)]
        max_deg: usize,
        #[arg(long)]
        trunc: Option<usize>,
        /// Series: "exp", "geom", "poly:p" or comma-separated rationals
        series: String,
    },
    /// Certify eventual stability: smallest m with constant annihilator order
    Certify {
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 2)]
        window: usize,
        /// Recurrence annihilator (inferred for named generators)
        #[arg(long)]
        rec: Option<String>,
        #[arg(long)]
        trunc: Option<usize>,
        series: String,
    },
    /// Convert annihilators between the differential and shift pictures
    Convert {
        #[command(subcommand)]
        dir: ConvertDir,
    },
}

#[derive(Subcommand)]
enum ConvertDir {
    /// Differential operator to coefficient recurrence
    D2s { op: String },
    /// Recurrence to differential operator (guessed from series data)
    S2d {
        op: String,
        #[arg(long, default_value = "exp")]
        series: String,
        #[arg(long)]
        trunc: Option<usize>,
    },
}

#[derive(Subcommand)]
enum DynsysCommand {
    /// Analyze a system given as {"elements": [...], "map": {...}}
    Analyze { file: String },
    /// Check the classical Stab/Attrac facts on a system file
    Check { file: String },
    /// Build and analyze the truncated tower example
    Godelle {
        #[arg(short = 'n', long, default_value_t = 3)]
        n: i64,
        #[arg(short = 'm', long, default_value_t = 3)]
        m: i64,
    },
}

/// A record plus the exit code it implies.
struct Outcome {
    record: Value,
    code: u8,
}

fn decided(record: Value) -> Outcome {
    Outcome { record, code: 0 }
}

fn undecidable(record: Value) -> Outcome {
    Outcome { record, code: 1 }
}

fn input_error(record: Value) -> Outcome {
    Outcome { record, code: 2 }
}

fn error_record(command: &str, kind: &str, message: String, position: Option<usize>) -> Value {
    let mut err = json!({ "kind": kind, "message": message });
    if let Some(p) = position {
        err["position"] = json!(p);
    }
    json!({ "command": command, "status": "error", "error": err })
}

fn from_parse_error(command: &str, e: ParseError) -> Outcome {
    match e {
        ParseError::Syntax { pos, msg } => {
            input_error(error_record(command, "syntax", msg, Some(pos)))
        }
        ParseError::Reject { reason } => {
            undecidable(error_record(command, "out_of_fragment", reason, None))
        }
    }
}

fn obstruction_json(o: &Obstruction) -> Value {
    match o {
        Obstruction::MomentIndex(i) => json!({ "kind": "moment_index", "index": i }),
        Obstruction::Residue { pole, order } => {
            json!({ "kind": "residue", "pole": pole.to_string(), "order": order })
        }
        Obstruction::DegreeDrop => json!({ "kind": "degree_drop" }),
        Obstruction::ConstantTerm => json!({ "kind": "constant_term" }),
    }
}

fn generator_name(g: ChainGenerator) -> &'static str {
    match g {
        ChainGenerator::LaurentLog => "laurent_log",
        ChainGenerator::PolyExp => "poly_exp",
        ChainGenerator::EulerLaurent => "euler_laurent",
        ChainGenerator::LogExtension => "log_extension",
    }
}

fn qstr(q: &Q) -> String {
    stabint_core::RatFunc::constant(q.clone()).to_string()
}

/// The stability verdict for one expression under one derivation.
fn stable_verdict(e: &ElemExpr, d: Derivation) -> StabilityVerdict {
    match d {
        Derivation::DDx => stable_elementary(e),
        Derivation::EulerXDDx => {
            if e.logpow != 0 || e.expo.is_some() {
                StabilityVerdict::OutOfFragment(
                    "the Eulerian decider covers rational functions only".into(),
                )
            } else {
                stable_in_ratfield(&e.coef, d)
            }
        }
    }
}

fn verdict_record(command: &str, input: &str, d: DerivationArg, v: &StabilityVerdict) -> Value {
    let mut rec = json!({
        "command": command,
        "input": input,
        "derivation": d.name(),
    });
    match v {
        StabilityVerdict::Stable(g) => {
            rec["verdict"] = json!("stable");
            rec["generator"] = json!(generator_name(*g));
        }
        StabilityVerdict::NotStable(o) => {
            rec["verdict"] = json!("not_stable");
            rec["obstruction"] = obstruction_json(o);
        }
        StabilityVerdict::OutOfFragment(reason) => {
            rec["verdict"] = json!("out_of_fragment");
            rec["reason"] = json!(reason);
        }
    }
    rec
}

fn run_stable(expr: &str, d: DerivationArg) -> Outcome {
    let e = match parse_elem_expr(expr) {
        Ok(e) => e,
        Err(err) => return from_parse_error("stable", err),
    };
    let v = stable_verdict(&e, d.to_core());
    let rec = verdict_record("stable", expr, d, &v);
    match v {
        StabilityVerdict::OutOfFragment(_) => undecidable(rec),
        _ => decided(rec),
    }
}

fn run_witness(expr: &str, d: DerivationArg, depth: usize) -> Outcome {
    if depth == 0 {
        return input_error(error_record(
            "witness",
            "usage",
            "depth must be at least 1".into(),
            None,
        ));
    }
    let e = match parse_elem_expr(expr) {
        Ok(e) => e,
        Err(err) => return from_parse_error("witness", err),
    };
    let v = stable_verdict(&e, d.to_core());
    let mut rec = verdict_record("witness", expr, d, &v);
    match &v {
        StabilityVerdict::OutOfFragment(_) => return undecidable(rec),
        StabilityVerdict::NotStable(_) => return decided(rec),
        StabilityVerdict::Stable(_) => {}
    }
    match witness_chain(&e, depth, d.to_core()) {
        Ok(chain) => {
            let verified = check_chain(&e, &chain);
            rec["witness_chain"] = json!(chain
                .links
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>());
            rec["chain_verified"] = json!(verified);
            decided(rec)
        }
        Err(ChainError::UnrepresentableChain(reason)) => {
            rec["witness_chain_unavailable"] = json!(reason);
            decided(rec)
        }
        Err(ChainError::NotStableInput) => decided(rec),
    }
}

fn run_moments(f: &str, max: usize) -> Outcome {
    let f_parsed = match parse_ratfunc(f) {
        Ok(v) => v,
        Err(err) => return from_parse_error("moments", err),
    };
    let idx = moment_obstruction(&f_parsed, max);
    decided(json!({
        "command": "moments",
        "input": f,
        "max": max,
        "first_failing_index": idx,
    }))
}

fn run_integrable(f: &str, d: DerivationArg) -> Outcome {
    let f_parsed = match parse_ratfunc(f) {
        Ok(v) => v,
        Err(err) => return from_parse_error("integrable", err),
    };
    let rec = match integrable_in_field(&f_parsed, d.to_core()) {
        Some(g) => json!({
            "command": "integrable",
            "input": f,
            "derivation": d.name(),
            "status": "integrable",
            "witness": g.to_string(),
        }),
        None => json!({
            "command": "integrable",
            "input": f,
            "derivation": d.name(),
            "status": "not_integrable",
        }),
    };
    decided(rec)
}

fn run_lh(f: &str) -> Outcome {
    let f_parsed = match parse_ratfunc(f) {
        Ok(v) => v,
        Err(err) => return from_parse_error("lh", err),
    };
    let rec = match liouville_hardy(&f_parsed) {
        Some((c, g)) => json!({
            "command": "lh",
            "input": f,
            "status": "of_form",
            "c": qstr(&c),
            "g": g.to_string(),
        }),
        None => json!({ "command": "lh", "input": f, "status": "not_of_form" }),
    };
    decided(rec)
}

fn run_dred(f: &str) -> Outcome {
    let f_parsed = match parse_ratfunc(f) {
        Ok(v) => v,
        Err(err) => return from_parse_error("dred", err),
    };
    decided(json!({
        "command": "dred",
        "input": f,
        "status": if is_differential_reduced(&f_parsed) { "reduced" } else { "not_reduced" },
    }))
}

fn run_risch(p: &str, a: &str, b: &str, m: usize) -> Outcome {
    let parsed = (parse_poly(p), parse_poly(a), parse_poly(b));
    let (p_poly, a_poly, b_poly) = match parsed {
        (Ok(p), Ok(a), Ok(b)) => (p, a, b),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return from_parse_error("risch", e),
    };
    match risch_de_poly(&p_poly, &a_poly, &b_poly, m) {
        Ok(RischOutcome::Solution(sol)) => decided(json!({
            "command": "risch",
            "status": "solution",
            "q": sol.q.to_string(),
            "m": sol.m,
            "identity_checked": sol.verify(),
        })),
        Ok(RischOutcome::NoSolution) => {
            decided(json!({ "command": "risch", "status": "no_solution" }))
        }
        Err(IntegrateError::PreconditionViolated(msg)) => {
            input_error(error_record("risch", "precondition", msg, None))
        }
        Err(e) => undecidable(error_record("risch", "unsupported", e.to_string(), None)),
    }
}

fn run_skolem(expr: &str, max: usize) -> Outcome {
    let e = match parse_elem_expr(expr) {
        Ok(e) => e,
        Err(err) => return from_parse_error("skolem", err),
    };
    if e.logpow != 0 {
        return undecidable(error_record(
            "skolem",
            "out_of_fragment",
            "the scan covers f*exp(g) inputs only".into(),
            None,
        ));
    }
    let g = e.expo.clone().unwrap_or_else(stabint_core::RatFunc::zero);
    match skolem_scan(&e.coef, &g, max) {
        Ok(set) => decided(json!({
            "command": "skolem",
            "input": expr,
            "max": max,
            "integrable_indices": set.into_iter().collect::<Vec<_>>(),
        })),
        Err(IntegrateError::Unsupported(reason)) => {
            undecidable(error_record("skolem", "unsupported", reason, None))
        }
        Err(e) => input_error(error_record("skolem", "precondition", e.to_string(), None)),
    }
}

fn run_ore(op: &OreCommand) -> Outcome {
    let parse2 = |a: &str, b: &str| -> Result<(OreOperator, OreOperator), Box<Outcome>> {
        let pa =
            parse_operator(a, OpKind::Diff).map_err(|e| Box::new(from_parse_error("ore", e)))?;
        let pb = parse_operator(b, pa.kind()).map_err(|e| Box::new(from_parse_error("ore", e)))?;
        if pa.kind() != pb.kind() {
            return Err(Box::new(input_error(error_record(
                "ore",
                "kind_mismatch",
                "operands live in different operator rings".into(),
                None,
            ))));
        }
        Ok((pa, pb))
    };
    match op {
        OreCommand::Mul { a, b } => {
            let (pa, pb) = match parse2(a, b) {
                Ok(v) => v,
                Err(o) => return *o,
            };
            match pa.multiply(&pb) {
                Ok(prod) => decided(json!({
                    "command": "ore", "op": "mul", "a": a, "b": b,
                    "result": prod.to_string(),
                })),
                Err(e) => input_error(error_record("ore", "kind_mismatch", e.to_string(), None)),
            }
        }
        OreCommand::Divmod { a, b } => {
            let (pa, pb) = match parse2(a, b) {
                Ok(v) => v,
                Err(o) => return *o,
            };
            match pa.right_divmod(&pb) {
                Ok((q, r)) => decided(json!({
                    "command": "ore", "op": "divmod", "a": a, "b": b,
                    "quotient": q.to_string(),
                    "remainder": r.to_string(),
                })),
                Err(e) => input_error(error_record("ore", "invalid", e.to_string(), None)),
            }
        }
        OreCommand::Gcrd { a, b } => {
            let (pa, pb) = match parse2(a, b) {
                Ok(v) => v,
                Err(o) => return *o,
            };
            match pa.gcrd(&pb) {
                Ok(g) => decided(json!({
                    "command": "ore", "op": "gcrd", "a": a, "b": b,
                    "result": g.to_string(),
                })),
                Err(e) => input_error(error_record("ore", "invalid", e.to_string(), None)),
            }
        }
        OreCommand::Lclm { a, b } => {
            let (pa, pb) = match parse2(a, b) {
                Ok(v) => v,
                Err(o) => return *o,
            };
            match pa.lclm(&pb) {
                Ok(l) => decided(json!({
                    "command": "ore", "op": "lclm", "a": a, "b": b,
                    "result": l.to_string(),
                })),
                Err(e) => input_error(error_record("ore", "invalid", e.to_string(), None)),
            }
        }
        OreCommand::Apply { l, to } => {
            let pl = match parse_operator(l, OpKind::Diff) {
                Ok(v) => v,
                Err(e) => return from_parse_error("ore", e),
            };
            let f = match parse_ratfunc(to) {
                Ok(v) => v,
                Err(e) => return from_parse_error("ore", e),
            };
            match pl.apply_rat(&f) {
                Ok(out) => decided(json!({
                    "command": "ore", "op": "apply", "a": l, "b": to,
                    "result": out.to_string(),
                })),
                Err(e) => input_error(error_record("ore", "invalid", e.to_string(), None)),
            }
        }
    }
}

/// Series specs: `exp`, `geom`, `poly:<p>` or comma-separated rationals.
fn parse_series_spec(spec: &str, trunc: usize) -> Result<TruncSeries, ParseError> {
    match spec {
        "exp" => Ok(dfinite::exp_series(trunc)),
        "geom" => Ok(dfinite::geom_series(trunc)),
        _ => {
            if let Some(p) = spec.strip_prefix("poly:") {
                let p = parse_poly(p)?;
                return Ok(dfinite::poly_series(&p, trunc));
            }
            let mut coeffs = Vec::new();
            for part in spec.split(',') {
                let f = parse_ratfunc(part.trim())?;
                let c = f.as_constant().ok_or(ParseError::Reject {
                    reason: "series coefficients must be rational constants".into(),
                })?;
                coeffs.push(c);
            }
            if coeffs.is_empty() {
                return Err(ParseError::Reject {
                    reason: "empty series".into(),
                });
            }
            Ok(TruncSeries::new(coeffs))
        }
    }
}

/// The implied recurrence for named generators.
fn implied_rule(spec: &str) -> Option<SequenceRule> {
    match spec {
        "exp" => Some(dfinite::exp_rule()),
        "geom" => Some(dfinite::geom_rule()),
        _ => spec.strip_prefix("poly:").and_then(|p| {
            let p = parse_poly(p).ok()?;
            Some(dfinite::poly_rule(p.degree().unwrap_or(0)))
        }),
    }
}

fn run_dfinite(op: &DfiniteCommand) -> Outcome {
    match op {
        DfiniteCommand::Guess {
            max_ord,
            max_deg,
            trunc,
            series,
        } => {
            let t = trunc.unwrap_or((max_ord + 1) * (max_deg + 2) + 24 + max_ord);
            let s = match parse_series_spec(series, t) {
                Ok(s) => s,
                Err(e) => return from_parse_error("dfinite", e),
            };
            match guess_min_annihilator(&s, *max_ord, *max_deg) {
                Ok(Some(opr)) => decided(json!({
                    "command": "dfinite", "op": "guess", "series": series,
                    "status": "found",
                    "annihilator": opr.to_string(),
                    "order": opr.ord(),
                    "degree": opr.degree(),
                })),
                Ok(None) => decided(json!({
                    "command": "dfinite", "op": "guess", "series": series,
                    "status": "none",
                })),
                Err(e) => input_error(error_record("dfinite", "truncation", e.to_string(), None)),
            }
        }
        DfiniteCommand::Certify {
            max_m,
            window,
            rec,
            trunc,
            series,
        } => {
            let rule = match rec {
                Some(text) => match parse_operator(text, OpKind::Shift) {
                    Ok(opr) => match SequenceRule::new(opr) {
                        Ok(r) => r,
                        Err(e) => {
                            return input_error(error_record(
                                "dfinite",
                                "invalid",
                                e.to_string(),
                                None,
                            ))
                        }
                    },
                    Err(e) => return from_parse_error("dfinite", e),
                },
                None => match implied_rule(series) {
                    Some(r) => r,
                    None => {
                        return input_error(error_record(
                            "dfinite",
                            "usage",
                            "--rec is required for explicit coefficient series".into(),
                            None,
                        ))
                    }
                },
            };
            let (_, order_bound) = eventual_stability_bound(&rule);
            let t = trunc.unwrap_or_else(|| default_truncation(order_bound));
            let s = match parse_series_spec(series, t) {
                Ok(s) => s,
                Err(e) => return from_parse_error("dfinite", e),
            };
            match eventual_stability_certificate(&s, &rule, *max_m, *window) {
                Ok(cert) => decided(json!({
                    "command": "dfinite", "op": "certify", "series": series,
                    "status": "certified",
                    "m": cert.m,
                    "stable_order": cert.stable_order,
                    "bound": cert.bound_used,
                    "truncation": cert.truncation_used,
                    "annihilators": cert.annihilators.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                })),
                Err(dfinite::DfiniteError::NoCertificateWithinLimits { order_profile }) => {
                    decided(json!({
                        "command": "dfinite", "op": "certify", "series": series,
                        "status": "no_certificate",
                        "order_profile": order_profile,
                    }))
                }
                Err(e) => input_error(error_record("dfinite", "invalid", e.to_string(), None)),
            }
        }
        DfiniteCommand::Convert { dir } => match dir {
            ConvertDir::D2s { op } => {
                let l = match parse_operator(op, OpKind::Diff) {
                    Ok(v) => v,
                    Err(e) => return from_parse_error("dfinite", e),
                };
                match diff_to_rec(&l) {
                    Ok(rule) => decided(json!({
                        "command": "dfinite", "op": "convert", "direction": "d2s",
                        "input": op, "result": rule.to_string(),
                    })),
                    Err(e) => input_error(error_record("dfinite", "invalid", e.to_string(), None)),
                }
            }
            ConvertDir::S2d { op, series, trunc } => {
                let p = match parse_operator(op, OpKind::Shift) {
                    Ok(v) => v,
                    Err(e) => return from_parse_error("dfinite", e),
                };
                let rule = match SequenceRule::new(p) {
                    Ok(r) => r,
                    Err(e) => {
                        return input_error(error_record("dfinite", "invalid", e.to_string(), None))
                    }
                };
                let t =
                    trunc.unwrap_or((rule.degree() + 2) * (rule.order() + rule.degree() + 3) + 24);
                let s = match parse_series_spec(series, t) {
                    Ok(s) => s,
                    Err(e) => return from_parse_error("dfinite", e),
                };
                match rec_to_diff(&rule, &s) {
                    Ok(l) => decided(json!({
                        "command": "dfinite", "op": "convert", "direction": "s2d",
                        "input": op, "series": series, "result": l.to_string(),
                    })),
                    Err(e) => input_error(error_record("dfinite", "invalid", e.to_string(), None)),
                }
            }
        },
    }
}

fn load_system(file: &str) -> Result<FiniteDynSys, Box<Outcome>> {
    let text = std::fs::read_to_string(file).map_err(|e| {
        Box::new(input_error(error_record(
            "dynsys",
            "io",
            format!("{}: {}", file, e),
            None,
        )))
    })?;
    let parsed: Value = serde_json::from_str(&text).map_err(|e| {
        Box::new(input_error(error_record(
            "dynsys",
            "json",
            e.to_string(),
            None,
        )))
    })?;
    let elements: Vec<String> = match parsed.get("elements").and_then(|v| v.as_array()) {
        Some(arr) => arr
            .iter()
            .filter_map(|v| v.as_str().map(str::to_string))
            .collect(),
        None => {
            return Err(Box::new(input_error(error_record(
                "dynsys",
                "json",
                "missing \"elements\" array".into(),
                None,
            ))))
        }
    };
    let map: HashMap<String, String> = match parsed.get("map").and_then(|v| v.as_object()) {
        Some(obj) => obj
            .iter()
            .filter_map(|(k, v)| v.as_str().map(|s| (k.clone(), s.to_string())))
            .collect(),
        None => {
            return Err(Box::new(input_error(error_record(
                "dynsys",
                "json",
                "missing \"map\" object".into(),
                None,
            ))))
        }
    };
    FiniteDynSys::new(elements, &map).map_err(|e| {
        Box::new(input_error(error_record(
            "dynsys",
            "invalid",
            e.to_string(),
            None,
        )))
    })
}

fn subset_json(sys: &FiniteDynSys, set: &std::collections::BTreeSet<usize>) -> Value {
    json!(set
        .iter()
        .map(|&i| sys.labels()[i].clone())
        .collect::<Vec<_>>())
}

fn analyze_record(command_op: &str, sys: &FiniteDynSys) -> Value {
    let r = analyze(sys);
    json!({
        "command": "dynsys", "op": command_op,
        "elements": sys.len(),
        "fix": subset_json(sys, &r.fix),
        "per": subset_json(sys, &r.per),
        "stab": subset_json(sys, &r.stab),
        "attrac": subset_json(sys, &r.attrac),
    })
}

fn run_dynsys(op: &DynsysCommand) -> Outcome {
    match op {
        DynsysCommand::Analyze { file } => match load_system(file) {
            Ok(sys) => decided(analyze_record("analyze", &sys)),
            Err(o) => *o,
        },
        DynsysCommand::Check { file } => match load_system(file) {
            Ok(sys) => {
                let g = check_godelle(&sys);
                decided(json!({
                    "command": "dynsys", "op": "check",
                    "elements": sys.len(),
                    "inclusions_hold": g.inclusions_hold,
                    "stab_invariant": g.stab_invariant,
                    "surjective": g.surjective,
                    "stab_equals_attrac": g.stab_equals_attrac,
                    "passes": g.passes(),
                }))
            }
            Err(o) => *o,
        },
        DynsysCommand::Godelle { n, m } => match godelle_truncation(*n, *m) {
            Ok(sys) => decided(analyze_record("godelle", &sys)),
            Err(e) => input_error(error_record("dynsys", "invalid", e.to_string(), None)),
        },
    }
}

fn run_batch(file: &str, d: DerivationArg) -> Outcome {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            return input_error(error_record(
                "batch",
                "io",
                format!("{}: {}", file, e),
                None,
            ))
        }
    };
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    // lines are independent pure computations; evaluate in parallel and emit
    // in input order
    let records: Vec<Value> = lines
        .par_iter()
        .map(|line| run_stable(line.trim(), d).record)
        .collect();
    Outcome {
        record: Value::Array(records),
        code: 0,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Stable { derivation, expr } => run_stable(expr, *derivation),
        Command::Witness {
            derivation,
            depth,
            expr,
        } => run_witness(expr, *derivation, *depth),
        Command::Moments { max, f } => run_moments(f, *max),
        Command::Integrable { derivation, f } => run_integrable(f, *derivation),
        Command::Lh { f } => run_lh(f),
        Command::Dred { f } => run_dred(f),
        Command::Risch { p, a, b, m } => run_risch(p, a, b, *m),
        Command::Skolem { max, expr } => run_skolem(expr, *max),
        Command::Ore { op } => run_ore(op),
        Command::Dfinite { op } => run_dfinite(op),
        Command::Dynsys { op } => run_dynsys(op),
        Command::Batch { derivation, file } => run_batch(file, *derivation),
    };
    match &outcome.record {
        Value::Array(records) => {
            for r in records {
                println!("{}", r);
            }
        }
        record => println!("{}", record),
    }
    ExitCode::from(outcome.code)
}
