//! The `popmax` command line.
//!
//! Exit codes: 0 success, 1 verification rejected, 2 malformed input,
//! 3 size bound exceeded.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Parser, Subcommand};
use popmax_core::certificate::CertificateError;
use popmax_core::gstar::reserved_name;
use popmax_core::hardness::{check_reduction, reduce, HardnessError};
use popmax_core::oracle::{self, OracleError, Unpopularity, DEFAULT_BOUND};
use popmax_core::popularity::PopularityError;
use popmax_core::{
    build_gstar, certify_popular_max, is_pareto_optimal, matching_cost, min_cost_popular_max,
    popular_max_matching, verify_certificate, verify_popular_max, DualCertificate, Instance,
    Matching, Node, Violation, Witness, WitnessKind,
};
use serde_json::{json, Value};

use crate::format::{
    format_witness, matching_pairs, parse_certificate, parse_dimacs, parse_instance,
    parse_matching, serialize_certificate, serialize_instance, serialize_matching, FormatError,
};
use crate::gen::random_instance;
use crate::lp::emit_lp;

#[derive(Parser, Debug)]
#[command(name = "popmax", version, about = "Popular max-matchings in bipartite preference instances")]
pub struct Cli {
    /// Print a JSON envelope {status, result, witness?} instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A popular max-matching.
    Solve { file: String },
    /// A min-cost popular max-matching with its cost and certificate.
    Mincost { file: String },
    /// Is the matching a popular max-matching? Prints a witness if not.
    Verify { file: String, matching: String },
    /// A dual certificate for the matching, or checks a given one.
    Certify {
        file: String,
        matching: String,
        /// Certificate file to check instead of computing one.
        #[arg(long)]
        check: Option<String>,
    },
    /// Is the matching Pareto-optimal? Prints a witness if not.
    Pareto { file: String, matching: String },
    /// The extended formulation as a CPLEX-LP file.
    EmitLp { file: String },
    /// The auxiliary instance G*.
    Gstar { file: String },
    /// A random instance.
    GenRandom {
        #[arg(long)]
        na: usize,
        #[arg(long)]
        nb: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw edge costs uniformly from 0..=MAX_COST.
        #[arg(long)]
        max_cost: Option<i64>,
    },
    /// The gadget instance of a DIMACS CNF formula.
    GenHardness { cnf: String },
    /// Checks the reduction on a tiny DIMACS CNF formula.
    CheckReduction { cnf: String },
    /// Exhaustive ground truth (exponential time).
    Oracle {
        /// Largest edge count to enumerate.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// All matchings.
    Matchings { file: String },
    /// All popular max-matchings.
    PopularMax { file: String },
    /// A cheapest popular max-matching.
    MinCost { file: String },
    /// The unpopularity factor of a matching.
    Unpopularity { file: String, matching: String },
    /// All stable matchings.
    Stable { file: String },
    /// Pareto-optimality by enumeration.
    Pareto { file: String, matching: String },
    /// Satisfiability of a DIMACS CNF formula by enumeration.
    Sat { cnf: String },
}

enum Failure {
    Malformed(String),
    Bound(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Malformed(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Bound(e.to_string())
    }
}

struct Outcome {
    accepted: bool,
    text: String,
    result: Value,
    witness: Option<Value>,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Self {
        Outcome {
            accepted: true,
            text,
            result,
            witness: None,
        }
    }

    fn rejected(text: String, result: Value, witness: Option<Value>) -> Self {
        Outcome {
            accepted: false,
            text,
            result,
            witness,
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(msg.as_bytes());
            } else {
                let _ = out.write_all(msg.as_bytes());
            }
            return code;
        }
    };
    let json = cli.json;
    match execute(cli.command, stdin) {
        Ok(o) => {
            if json {
                let mut env = json!({
                    "status": if o.accepted { "ok" } else { "rejected" },
                    "result": o.result,
                });
                if let Some(w) = o.witness {
                    env["witness"] = w;
                }
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&env).expect("json"));
            } else {
                let _ = out.write_all(o.text.as_bytes());
            }
            if o.accepted {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let (code, msg) = match f {
                Failure::Malformed(m) => (2, m),
                Failure::Bound(m) => (3, m),
            };
            let _ = writeln!(err, "popmax: {msg}");
            if json {
                let env = json!({ "status": "error", "result": { "message": msg } });
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&env).expect("json"));
            }
            code
        }
    }
}

fn read(path: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut s = String::new();
    let res = if path == "-" {
        stdin.read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Failure::Malformed(format!("{path}: {e}")))?;
    Ok(s)
}

fn load(path: &str, stdin: &mut dyn Read) -> Result<Instance, Failure> {
    let text = read(path, stdin)?;
    parse_instance(&text).map_err(|e| Failure::Malformed(format!("{path}: {e}")))
}

fn load_matching(inst: &Instance, path: &str, stdin: &mut dyn Read) -> Result<Matching, Failure> {
    let text = read(path, stdin)?;
    parse_matching(inst, &text).map_err(|e| Failure::Malformed(format!("{path}: {e}")))
}

fn pairs_json(inst: &Instance, m: &Matching) -> Value {
    json!(matching_pairs(inst, m)
        .into_iter()
        .map(|(a, b)| vec![a, b])
        .collect::<Vec<_>>())
}

fn matching_json(inst: &Instance, m: &Matching) -> Value {
    json!({ "pairs": pairs_json(inst, m), "cost": matching_cost(inst, m) })
}

fn certificate_json(inst: &Instance, c: &DualCertificate) -> Value {
    let map: serde_json::Map<String, Value> = c
        .alpha()
        .iter()
        .map(|(&n, &v)| (inst.name(n).to_string(), json!(v)))
        .collect();
    Value::Object(map)
}

fn witness_json(inst: &Instance, w: &Witness) -> Value {
    json!({
        "kind": match w.kind { WitnessKind::Cycle => "cycle", WitnessKind::Path => "path" },
        "weight": w.weight,
        "nodes": w.nodes.iter().map(|&n| inst.name(n)).collect::<Vec<_>>(),
        "edges": w.edges().iter()
            .map(|e| vec![inst.name_a(e.a), inst.name_b(e.b)])
            .collect::<Vec<_>>(),
    })
}

fn augmenting(inst: &Instance, path: &[Node]) -> Outcome {
    let names: Vec<&str> = path.iter().map(|&n| inst.name(n)).collect();
    Outcome::rejected(
        format!("not maximum: augmenting path {}\n", names.join(" ")),
        json!({ "maximum": false }),
        Some(json!({ "kind": "augmenting", "nodes": names })),
    )
}

fn violation_text(inst: &Instance, v: &Violation) -> String {
    let e = |e: &popmax_core::Edge| format!("({},{})", inst.name_a(e.a), inst.name_b(e.b));
    match v {
        Violation::Feasibility { edge, sum, wt } => {
            format!("F {}: alpha sum {sum} < wt {wt}", e(edge))
        }
        Violation::Slackness { edge, sum } => format!("CS {}: alpha sum {sum} != 0", e(edge)),
        Violation::Sum(s) => format!("Z: total {s} != 0"),
        Violation::Range { node, value } => format!("R {}: {value} out of range", inst.name(*node)),
        Violation::P1 { node, value } => format!("P1 {}: {value} != 0", inst.name(*node)),
        Violation::P2 { node, value } => format!("P2 {}: {value}", inst.name(*node)),
    }
}

fn matchings_text(inst: &Instance, ms: &[Matching]) -> String {
    let mut s = String::new();
    for m in ms {
        let pairs: Vec<String> = matching_pairs(inst, m)
            .into_iter()
            .map(|(a, b)| format!("{a} {b}"))
            .collect();
        let _ = writeln!(s, "{{{}}}", pairs.join(", "));
    }
    s
}

fn execute(cmd: Command, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match cmd {
        Command::Solve { file } => {
            let inst = load(&file, stdin)?;
            let m = popular_max_matching(&inst);
            Ok(Outcome::ok(serialize_matching(&inst, &m), matching_json(&inst, &m)))
        }
        Command::Mincost { file } => {
            let inst = load(&file, stdin)?;
            let sol = min_cost_popular_max(&inst);
            let text = format!(
                "{}cost {}\n{}",
                serialize_matching(&inst, &sol.matching),
                sol.cost,
                serialize_certificate(&inst, &sol.certificate)
            );
            Ok(Outcome::ok(
                text,
                json!({
                    "pairs": pairs_json(&inst, &sol.matching),
                    "cost": sol.cost,
                    "certificate": certificate_json(&inst, &sol.certificate),
                }),
            ))
        }
        Command::Verify { file, matching } => {
            let inst = load(&file, stdin)?;
            let m = load_matching(&inst, &matching, stdin)?;
            match verify_popular_max(&inst, &m) {
                Err(PopularityError::NotMaximum(path)) => Ok(augmenting(&inst, &path)),
                Err(e) => Err(Failure::Malformed(e.to_string())),
                Ok(v) => match v.witness {
                    None => Ok(Outcome::ok("popular\n".into(), json!({ "popular": true }))),
                    Some(w) => Ok(Outcome::rejected(
                        format_witness(&inst, &w),
                        json!({ "popular": false }),
                        Some(witness_json(&inst, &w)),
                    )),
                },
            }
        }
        Command::Certify {
            file,
            matching,
            check,
        } => {
            let inst = load(&file, stdin)?;
            let m = load_matching(&inst, &matching, stdin)?;
            if let Some(path) = check {
                let text = read(&path, stdin)?;
                let cert = parse_certificate(&inst, &text)
                    .map_err(|e| Failure::Malformed(format!("{path}: {e}")))?;
                return match verify_certificate(&inst, &m, &cert) {
                    Ok(vs) if vs.is_empty() => {
                        Ok(Outcome::ok("valid\n".into(), json!({ "valid": true })))
                    }
                    Ok(vs) => {
                        let lines: Vec<String> = vs.iter().map(|v| violation_text(&inst, v)).collect();
                        Ok(Outcome::rejected(
                            lines.iter().map(|l| format!("{l}\n")).collect(),
                            json!({ "valid": false, "violations": lines }),
                            None,
                        ))
                    }
                    Err(CertificateError::DomainMismatch(n)) => Ok(Outcome::rejected(
                        format!("domain mismatch at {}\n", inst.name(n)),
                        json!({ "valid": false, "domain_mismatch": inst.name(n) }),
                        None,
                    )),
                    Err(CertificateError::NotMaximum) => Ok(Outcome::rejected(
                        "not maximum\n".into(),
                        json!({ "valid": false, "maximum": false }),
                        None,
                    )),
                    Err(e) => Err(Failure::Malformed(e.to_string())),
                };
            }
            match certify_popular_max(&inst, &m) {
                Ok(c) => Ok(Outcome::ok(
                    serialize_certificate(&inst, &c),
                    json!({ "certificate": certificate_json(&inst, &c) }),
                )),
                Err(CertificateError::NotPopularMax) | Err(CertificateError::NotMaximum) => {
                    match verify_popular_max(&inst, &m) {
                        Err(PopularityError::NotMaximum(path)) => Ok(augmenting(&inst, &path)),
                        Ok(Popular { witness: Some(w), .. }) => Ok(Outcome::rejected(
                            format_witness(&inst, &w),
                            json!({ "popular": false }),
                            Some(witness_json(&inst, &w)),
                        )),
                        _ => Err(Failure::Malformed("inconsistent verdicts".into())),
                    }
                }
                Err(e) => Ok(Outcome::rejected(
                    format!("{e}\n"),
                    json!({ "error": e.to_string() }),
                    None,
                )),
            }
        }
        Command::Pareto { file, matching } => {
            let inst = load(&file, stdin)?;
            let m = load_matching(&inst, &matching, stdin)?;
            let v = is_pareto_optimal(&inst, &m);
            match v.witness {
                None => Ok(Outcome::ok(
                    "pareto-optimal\n".into(),
                    json!({ "pareto_optimal": true }),
                )),
                Some(w) => Ok(Outcome::rejected(
                    format_witness(&inst, &w),
                    json!({ "pareto_optimal": false }),
                    Some(witness_json(&inst, &w)),
                )),
            }
        }
        Command::EmitLp { file } => {
            let inst = load(&file, stdin)?;
            let lp = emit_lp(&inst);
            Ok(Outcome::ok(lp.clone(), json!({ "lp": lp })))
        }
        Command::Gstar { file } => {
            let inst = load(&file, stdin)?;
            if let Some(n) = reserved_name(&inst) {
                return Err(Failure::Malformed(format!(
                    "identifier `{n}` uses a character reserved for G* names (# ! ~)"
                )));
            }
            let gs = build_gstar(&inst);
            let text = serialize_instance(gs.inner());
            Ok(Outcome::ok(text.clone(), json!({ "instance": text })))
        }
        Command::GenRandom {
            na,
            nb,
            density,
            seed,
            max_cost,
        } => {
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::Malformed("density must lie in [0, 1]".into()));
            }
            let inst = random_instance(na, nb, density, seed, max_cost);
            let text = serialize_instance(&inst);
            Ok(Outcome::ok(text.clone(), json!({ "instance": text })))
        }
        Command::GenHardness { cnf } => {
            let psi = parse_dimacs(&read(&cnf, stdin)?)?;
            let g = reduce(&psi).map_err(|e| Failure::Malformed(e.to_string()))?;
            let text = serialize_instance(&g.instance);
            Ok(Outcome::ok(text.clone(), json!({ "instance": text })))
        }
        Command::CheckReduction { cnf } => {
            let psi = parse_dimacs(&read(&cnf, stdin)?)?;
            let r = match check_reduction(&psi) {
                Ok(r) => r,
                Err(e @ HardnessError::SizeBound { .. }) => return Err(Failure::Bound(e.to_string())),
                Err(e) => return Err(Failure::Malformed(e.to_string())),
            };
            let holds = r.equivalence_holds();
            let result = json!({
                "satisfiable": r.satisfiable,
                "transformed_satisfiable": r.transformed_satisfiable,
                "nodes": r.nodes,
                "edges": r.edges,
                "candidates": r.candidates,
                "pruned": r.pruned,
                "prune_failures": r.prune_failures,
                "pareto_cost0": r.pareto_cost0,
                "all_perfect": r.all_perfect,
                "consistency_holds": r.consistency_holds,
                "decodes_satisfy": r.decodes_satisfy,
                "constructive_ok": r.constructive_ok,
                "equivalence_holds": holds,
            });
            let mut text = String::new();
            for (k, v) in result.as_object().expect("object") {
                let _ = writeln!(text, "{k}: {v}");
            }
            Ok(if holds {
                Outcome::ok(text, result)
            } else {
                Outcome::rejected(text, result, None)
            })
        }
        Command::Oracle { bound, command } => oracle_cmd(bound, command, stdin),
    }
}

use popmax_core::PopularityVerdict as Popular;

fn oracle_cmd(bound: usize, cmd: OracleCommand, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    let list = |inst: &Instance, ms: Vec<Matching>| {
        let js: Vec<Value> = ms.iter().map(|m| pairs_json(inst, m)).collect();
        Outcome::ok(matchings_text(inst, &ms), json!({ "count": ms.len(), "matchings": js }))
    };
    match cmd {
        OracleCommand::Matchings { file } => {
            let inst = load(&file, stdin)?;
            Ok(list(&inst, oracle::enum_matchings(&inst, bound)?))
        }
        OracleCommand::PopularMax { file } => {
            let inst = load(&file, stdin)?;
            Ok(list(&inst, oracle::brute_popular_max(&inst, bound)?))
        }
        OracleCommand::Stable { file } => {
            let inst = load(&file, stdin)?;
            Ok(list(&inst, oracle::brute_stable(&inst, bound)?))
        }
        OracleCommand::MinCost { file } => {
            let inst = load(&file, stdin)?;
            let (m, c) = oracle::brute_min_cost_popular_max(&inst, bound)?;
            Ok(Outcome::ok(
                format!("{}cost {c}\n", serialize_matching(&inst, &m)),
                matching_json(&inst, &m),
            ))
        }
        OracleCommand::Unpopularity { file, matching } => {
            let inst = load(&file, stdin)?;
            let m = load_matching(&inst, &matching, stdin)?;
            let (text, v) = match oracle::brute_unpopularity_factor(&inst, &m, bound)? {
                Unpopularity::Finite { num, den } => (format!("{num}/{den}"), json!([num, den])),
                Unpopularity::Infinite => ("inf".to_string(), json!("inf")),
            };
            Ok(Outcome::ok(format!("u = {text}\n"), json!({ "unpopularity": v })))
        }
        OracleCommand::Pareto { file, matching } => {
            let inst = load(&file, stdin)?;
            let m = load_matching(&inst, &matching, stdin)?;
            Ok(if oracle::brute_is_pareto_optimal(&inst, &m, bound)? {
                Outcome::ok("pareto-optimal\n".into(), json!({ "pareto_optimal": true }))
            } else {
                Outcome::rejected("dominated\n".into(), json!({ "pareto_optimal": false }), None)
            })
        }
        OracleCommand::Sat { cnf } => {
            let psi = parse_dimacs(&read(&cnf, stdin)?)?;
            if psi.num_vars() > 20 {
                return Err(Failure::Bound("more than 20 variables".into()));
            }
            Ok(match oracle::brute_sat(&psi) {
                Some(x) => {
                    let lits: Vec<String> = x
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| format!("{}{}", if v { "" } else { "-" }, i + 1))
                        .collect();
                    Outcome::ok(
                        format!("sat {}\n", lits.join(" ")),
                        json!({ "satisfiable": true, "assignment": x }),
                    )
                }
                None => Outcome::rejected("unsat\n".into(), json!({ "satisfiable": false }), None),
            })
        }
    }
}
