//! `mzv` — exact and numeric calculus of multiple zeta values on the
//! command line.
//!
//! Structured output is JSON on stdout; diagnostics and progress go to
//! stderr. Exit codes: 0 on success or a verified relation, 1 when a
//! verification ran and failed, 2 on usage or input errors.

use std::io::Read as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mzv::families::{kmt_derivation, verify_bradley_zhou, verify_ohno, KmtShape};
use mzv::finite::{duality_lhs, harmonic_sum, zigzag_integral_exact};
use mzv::numeric::{combination_eval, mzv_eval, ApproxValue};
use mzv::poset::{chain_poset, zigzag_poset, LabeledPoset};
use mzv::symbolic::{
    decompose, decompose_words, derive_star_relation, refinement_identity_check, ZetaCombination,
};
use mzv::Index;
use num::integer::binomial;
use num::{BigInt, BigRational, BigUint};
use serde_json::{json, Value};

/// Exact calculus of multiple zeta values via 2-labeled posets.
#[derive(Parser)]
#[command(name = "mzv", version, max_term_width = 100)]
struct Cli {
    /// Worker threads for numeric series evaluation (default 1).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the transpose k* of a nonempty index.
    Transpose {
        /// Index as comma-separated positive integers, e.g. "2,3".
        index: String,
    },
    /// Print the finite multiple harmonic sum s_k(N) as an exact rational.
    Fsum {
        /// Index as comma-separated positive integers.
        index: String,
        /// Pinned first entry N (at least 1).
        n: u32,
    },
    /// Verify binomial duality: the alternating binomial transform of
    /// s_k at N equals s_{k*}(N), exactly, for all |k| <= kmax, N <= nmax.
    DualityCheck {
        /// Largest index weight to test (1..=8).
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Largest pinned entry to test (1..=20).
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Also print one PASS/FAIL line per case to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Verify the zig-zag integral expression of s_k(N) against the sum,
    /// exactly, for all |k| <= kmax, N <= nmax.
    ZigzagCheck {
        /// Largest index weight to test (1..=6).
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Largest pinned entry to test (1..=12).
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        /// Also print one PASS/FAIL line per case to stderr.
        #[arg(long)]
        verbose: bool,
    },
    /// Decompose the integral of an admissible 2-labeled poset into a
    /// combination of multiple zeta values (JSON on stdout).
    Decompose(PosetSource),
    /// Derive the relation obtained by expanding the star value of an
    /// admissible index in two ways; prints a combination that is zero.
    StarRelation {
        /// Admissible index, e.g. "3,1".
        index: String,
    },
    /// Numerically evaluate a zeta value or a combination JSON file with
    /// a rigorous error bound (double-double arithmetic).
    Eval {
        /// Index ("2,1") or a combination JSON file path ("-" = stdin).
        #[arg(value_name = "INDEX|COMBINATION_JSON")]
        target: String,
        /// Truncation: sum indices up to this bound.
        #[arg(long, default_value_t = 100_000)]
        trunc: u64,
        /// Decimal digits printed after the point (1..=100).
        #[arg(long, default_value_t = 30)]
        digits: usize,
    },
    /// Verify a structured relation family; prints a JSON report
    /// {cases, passed, failed, first_failure}.
    Verify {
        #[command(subcommand)]
        family: VerifyCommand,
    },
    /// Print a Graphviz DOT rendering of a poset; the first line embeds
    /// the canonical poset JSON so the drawing can be parsed back.
    ExportDot(PosetSource),
}

/// Exactly one way of naming a 2-labeled poset.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct PosetSource {
    /// Path of a poset JSON file ("-" = stdin).
    #[arg(value_name = "POSET_JSON")]
    file: Option<String>,
    /// Use the zig-zag poset of this index (star-value shape).
    #[arg(long, value_name = "INDEX")]
    zigzag: Option<String>,
    /// Use the descending chain of this admissible index (zeta shape).
    #[arg(long, value_name = "INDEX")]
    chain: Option<String>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Ohno-type relation: the integral of A(k,n) equals (n-1)! times
    /// the star value of (k+1, 1^{n-1}).
    Ak {
        /// Chain length parameter (at least 1).
        #[arg(long)]
        k: u32,
        /// Number of branch vertices plus one (at least 1).
        #[arg(long)]
        n: u32,
    },
    /// Mordell-Tornheim value: the poset decomposition equals the
    /// defining multiple series (Bradley-Zhou decomposition).
    Mt {
        /// Branch exponents as an index, e.g. "1,1".
        #[arg(long)]
        ks: String,
        /// Junction exponent (at least 2 for the series check).
        #[arg(long)]
        k: u32,
    },
    /// Komori-Matsumoto-Tsumura relation for a Y-shape (p; q; r):
    /// refine the junction step by step and balance both sides.
    Kmt {
        /// Trunk index (omit for an empty trunk).
        #[arg(long)]
        p: Option<String>,
        /// First branch index (nonempty).
        #[arg(long)]
        q: String,
        /// Second branch index (nonempty).
        #[arg(long)]
        r: String,
        /// Print every refinement step and cascade term as JSON lines
        /// (poset plus its decomposition) before the report.
        #[arg(long)]
        show_steps: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        std::env::set_var("MZV_WORKERS", jobs.to_string());
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Transpose { index } => {
            let k = parse_index(&index)?;
            println!("{}", k.transpose().map_err(text)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Fsum { index, n } => {
            let k = parse_index(&index)?;
            println!("{}", harmonic_sum(&k, n).map_err(text)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::DualityCheck {
            kmax,
            nmax,
            verbose,
        } => run_battery(
            "binomial duality",
            kmax,
            nmax,
            8,
            20,
            verbose,
            &|k, n| {
                let lhs = duality_lhs(k, n).map_err(text)?;
                let rhs = harmonic_sum(&k.transpose().map_err(text)?, n).map_err(text)?;
                Ok(lhs == rhs)
            },
        ),
        Command::ZigzagCheck {
            kmax,
            nmax,
            verbose,
        } => run_battery(
            "zig-zag integral",
            kmax,
            nmax,
            6,
            12,
            verbose,
            &|k, n| {
                let lhs = zigzag_integral_exact(k, n).map_err(text)?;
                let rhs = harmonic_sum(k, n).map_err(text)?;
                Ok(lhs == rhs)
            },
        ),
        Command::Decompose(source) => {
            let poset = load_poset(&source)?;
            println!("{}", decompose(&poset).map_err(text)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::StarRelation { index } => {
            let k = parse_index(&index)?;
            println!("{}", derive_star_relation(&k).map_err(text)?.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            target,
            trunc,
            digits,
        } => run_eval(&target, trunc, digits),
        Command::Verify { family } => run_verify(family),
        Command::ExportDot(source) => {
            let poset = load_poset(&source)?;
            let dot = poset.to_dot();
            print!("{dot}");
            if !dot.ends_with('\n') {
                println!();
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn text(e: mzv::Error) -> String {
    e.to_string()
}

fn parse_index(s: &str) -> Result<Index, String> {
    s.parse::<Index>().map_err(text)
}

/// Emit the machine-readable verification report and map it to an exit
/// code: 0 when everything passed, 1 otherwise.
fn print_report(cases: u64, failed: u64, first_failure: Option<&str>) -> ExitCode {
    let passed = cases - failed;
    let first = match first_failure {
        Some(description) => Value::String(description.to_string()).to_string(),
        None => "null".to_string(),
    };
    println!(
        "{{\"cases\":{cases},\"passed\":{passed},\"failed\":{failed},\"first_failure\":{first}}}"
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

/// All nonempty compositions of weight at most `max_weight`, in a fixed
/// lexicographic generation order.
fn compositions(max_weight: u32) -> Vec<Index> {
    fn grow(prefix: &mut Vec<u32>, remaining: u32, out: &mut Vec<Index>) {
        for part in 1..=remaining {
            prefix.push(part);
            out.push(Index::new(prefix.clone()).expect("parts are positive"));
            grow(prefix, remaining - part, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), max_weight, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn run_battery(
    what: &str,
    kmax: u32,
    nmax: u32,
    kmax_limit: u32,
    nmax_limit: u32,
    verbose: bool,
    check: &dyn Fn(&Index, u32) -> Result<bool, String>,
) -> Result<ExitCode, String> {
    if kmax == 0 || kmax > kmax_limit {
        return Err(format!("--kmax must be between 1 and {kmax_limit}"));
    }
    if nmax == 0 || nmax > nmax_limit {
        return Err(format!("--nmax must be between 1 and {nmax_limit}"));
    }
    let mut cases = 0u64;
    let mut failed = 0u64;
    let mut first = None;
    for k in compositions(kmax) {
        for n in 1..=nmax {
            cases += 1;
            let ok = check(&k, n)?;
            if verbose {
                let outcome = if ok { "PASS" } else { "FAIL" };
                eprintln!("{outcome} k=({k}) N={n}");
            }
            if !ok {
                failed += 1;
                if first.is_none() {
                    first = Some(format!("{what} fails at k=({k}), N={n}"));
                }
            }
        }
    }
    Ok(print_report(cases, failed, first.as_deref()))
}

fn load_poset(source: &PosetSource) -> Result<LabeledPoset, String> {
    if let Some(index_text) = &source.zigzag {
        return zigzag_poset(&parse_index(index_text)?).map_err(text);
    }
    if let Some(index_text) = &source.chain {
        return chain_poset(&parse_index(index_text)?).map_err(text);
    }
    let path = source
        .file
        .as_deref()
        .expect("clap guarantees exactly one poset source");
    let json = read_text(path)?;
    LabeledPoset::from_json(&json).map_err(text)
}

fn read_text(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buffer = String::new();
        std::io::stdin()
            .read_to_string(&mut buffer)
            .map_err(|e| format!("cannot read stdin: {e}"))?;
        return Ok(buffer);
    }
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))
}

fn run_eval(target: &str, trunc: u64, digits: usize) -> Result<ExitCode, String> {
    if digits == 0 || digits > 100 {
        return Err("--digits must be between 1 and 100".to_string());
    }
    let looks_like_file =
        target == "-" || target.contains('/') || target.ends_with(".json");
    let value = if looks_like_file {
        let combination = ZetaCombination::from_json(&read_text(target)?).map_err(text)?;
        combination_eval(&combination, trunc).map_err(text)?
    } else {
        let k = parse_index(target)?;
        mzv_eval(&k, trunc).map_err(text)?
    };
    print_eval(target, trunc, &value, digits);
    Ok(ExitCode::SUCCESS)
}

fn print_eval(target: &str, trunc: u64, value: &ApproxValue, digits: usize) {
    let target_json = Value::String(target.to_string()).to_string();
    println!(
        "{{\"target\":{target_json},\"truncation\":{trunc},\"value\":\"{}\",\"error_bound\":\"{:e}\"}}",
        value.decimal(digits),
        value.error_bound()
    );
}

fn run_verify(family: VerifyCommand) -> Result<ExitCode, String> {
    match family {
        VerifyCommand::Ak { k, n } => {
            let ok = verify_ohno(k, n).map_err(text)?;
            let first = (!ok).then(|| {
                format!("A({k},{n}): decomposition differs from (n-1)! times the star value")
            });
            Ok(print_report(1, u64::from(!ok), first.as_deref()))
        }
        VerifyCommand::Mt { ks, k } => {
            let branch_index = parse_index(&ks)?;
            let ok = verify_bradley_zhou(&branch_index, k).map_err(text)?;
            let first = (!ok).then(|| {
                format!("MT({branch_index}; {k}): decomposition disagrees with the series")
            });
            Ok(print_report(1, u64::from(!ok), first.as_deref()))
        }
        VerifyCommand::Kmt {
            p,
            q,
            r,
            show_steps,
        } => run_verify_kmt(p.as_deref(), &q, &r, show_steps),
    }
}

fn run_verify_kmt(
    p: Option<&str>,
    q: &str,
    r: &str,
    show_steps: bool,
) -> Result<ExitCode, String> {
    let trunk = match p {
        Some(index_text) => parse_index(index_text)?,
        None => Index::empty(),
    };
    let shape = KmtShape::new(trunk, parse_index(q)?, parse_index(r)?);
    let derivation = kmt_derivation(&shape).map_err(text)?;

    if show_steps {
        for (step, split) in derivation.splits.iter().enumerate() {
            let (a, b) = (&split.pair.0, &split.pair.1);
            let lower = split.poset.refine(a, b).map_err(text)?;
            let upper = split.poset.refine(b, a).map_err(text)?;
            let line = json!({
                "step": step + 1,
                "pair": [a, b],
                "poset": poset_value(&split.poset),
                "decomposition": decomposition_value(&split.poset),
                "with_first_below": {
                    "poset": poset_value(&lower),
                    "decomposition": decomposition_value(&lower),
                },
                "with_second_below": {
                    "poset": poset_value(&upper),
                    "decomposition": decomposition_value(&upper),
                },
            });
            println!("{line}");
        }
        for (sum, terms) in [(1, &derivation.first_terms), (2, &derivation.second_terms)] {
            for term in terms {
                let line = json!({
                    "sum": sum,
                    "j": term.j,
                    "multiplicity": term.multiplicity.to_string(),
                    "reduced_shape": term.reduced.to_string(),
                    "poset": poset_value(&term.cascade_poset),
                    "decomposition": decomposition_value(&term.cascade_poset),
                    "reduced_poset": poset_value(&term.reduced_poset),
                    "reduced_decomposition": decomposition_value(&term.reduced_poset),
                });
                println!("{line}");
            }
        }
    }

    let mut cases = 0u64;
    let mut failed = 0u64;
    let mut first: Option<String> = None;
    let mut record = |ok: bool, describe: &dyn Fn() -> String| {
        cases += 1;
        if !ok {
            failed += 1;
            if first.is_none() {
                first = Some(describe());
            }
        }
    };

    for (step, split) in derivation.splits.iter().enumerate() {
        let ok =
            refinement_identity_check(&split.poset, &split.pair.0, &split.pair.1).map_err(text)?;
        record(ok, &|| {
            format!(
                "refinement step {} at pair ({}, {}) does not split the integral",
                step + 1,
                split.pair.0,
                split.pair.1
            )
        });
    }

    let leading_first = *shape.r.parts().first().expect("branch r is nonempty");
    let leading_second = *shape.q.parts().first().expect("branch q is nonempty");
    for (sum, terms, leading) in [
        (1, &derivation.first_terms, leading_first),
        (2, &derivation.second_terms, leading_second),
    ] {
        for term in terms {
            let expected = binomial(BigUint::from(leading - 1 + term.j), BigUint::from(term.j));
            record(term.multiplicity == expected, &|| {
                format!("sum {sum}, term j={}: interleaving count is not binomial", term.j)
            });
            let scale = BigRational::from(BigInt::from(term.multiplicity.clone()));
            let reduced_words = decompose_words(&term.reduced_poset).scale(&scale);
            let ok = decompose_words(&term.cascade_poset) == reduced_words;
            record(ok, &|| {
                format!(
                    "sum {sum}, term j={}: cascade poset does not reduce to {} with multiplicity {}",
                    term.j, term.reduced, term.multiplicity
                )
            });
        }
    }

    let balanced = if derivation.poset.is_admissible() {
        let lhs = derivation.lhs_words.to_zeta_combination().map_err(text)?;
        let rhs = derivation.rhs_words.to_zeta_combination().map_err(text)?;
        lhs == rhs
    } else {
        derivation.lhs_words == derivation.rhs_words
    };
    record(balanced, &|| {
        format!("relation for {} does not balance", derivation.shape)
    });

    drop(record);
    Ok(print_report(cases, failed, first.as_deref()))
}

fn poset_value(x: &LabeledPoset) -> Value {
    serde_json::from_str(&x.to_json()).expect("poset JSON is canonical")
}

/// Decomposition as JSON: zeta-value terms when the poset is admissible,
/// otherwise the word-level terms (which are always defined).
fn decomposition_value(x: &LabeledPoset) -> Value {
    if x.is_admissible() {
        let zeta = decompose(x).expect("admissible poset decomposes");
        serde_json::from_str(&zeta.to_json()).expect("combination JSON is canonical")
    } else {
        let terms: Vec<Value> = decompose_words(x)
            .terms()
            .map(|(word, coeff)| {
                json!({
                    "word": word.to_string(),
                    "coeff": format!("{}/{}", coeff.numer(), coeff.denom()),
                })
            })
            .collect();
        Value::Array(terms)
    }
}
