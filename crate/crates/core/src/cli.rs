//! `cayleymc` command-line front end. Every subcommand prints one JSON
//! [`CommandReport`]; the exit code is 0 when all verdicts pass, 1 on a failed
//! verdict or a computation error, 2 on a usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cayley::{
    canonical_cubic, cayley_solution, cubic_residual, match_cayley, trace_field, CayleyParams, CAYLEY_CUBIC,
};
use crate::convolution::{induced_pushforward, middle_convolve, ConvolutionScalar, CoverCharacter};
use crate::elliptic::{check_flow, check_torsion_roots, psi_p_map, torsion_x_poly, LegendreCurve};
use crate::exactalg::arith::euler_phi;
use crate::exactalg::{CycNum, Field, Fp, Fp2, Poly, Rat};
use crate::linalg::JordanType;
use crate::mcg::{orbit, OrbitSize};
use crate::monodromy::{is_irreducible, star_check, trace_coordinates, MonodromyTuple};
use crate::{Error, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "CAYLEYMC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cayleymc", version, about = "Exact checks for rank-2 local systems on the four-punctured sphere")]
pub struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build the Cayley tuple for parameters (α, β).
    Cayley {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Induced rank-2 tuple of the character (a, b) of order dividing m.
    Pushforward {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
    },
    /// Middle convolution of a tuple read from a JSON file.
    Convolve {
        #[arg(long)]
        tuple: PathBuf,
        /// Scalar ζ_n^k written as k/n; the default 1/2 is −1.
        #[arg(long, default_value = "1/2")]
        scalar: String,
    },
    /// Local monodromy types and irreducibility of a tuple.
    StarCheck {
        #[arg(long)]
        tuple: PathBuf,
    },
    /// Degree and conductor of the trace field of a rank-2 tuple.
    TraceField {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long)]
        expect_degree: Option<u64>,
    },
    /// Pure braid orbit of the trace coordinates of a rank-2 tuple.
    Orbit {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
        /// Also write the visited points as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// The stored Cayley cubic, optionally evaluated on a tuple.
    Cubic {
        #[arg(long)]
        tuple: Option<PathBuf>,
    },
    /// Compare g_p ∘ x with x ∘ [p] on sampled points over 𝔽_{q²}.
    FlowCheck {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        field: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Torsion x-polynomial over ℚ, optionally lifted and checked over 𝔽_{q²}.
    TorsionX {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        field: Option<u64>,
    },
    /// pushforward → convolve → star-check → match → trace-field.
    Roundtrip {
        #[arg(long)]
        m: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        /// Largest parameter denominator searched by the matcher.
        #[arg(long, default_value_t = 40)]
        bound: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Cayley { .. } => "cayley",
            Command::Pushforward { .. } => "pushforward",
            Command::Convolve { .. } => "convolve",
            Command::StarCheck { .. } => "star-check",
            Command::TraceField { .. } => "trace-field",
            Command::Orbit { .. } => "orbit",
            Command::Cubic { .. } => "cubic",
            Command::FlowCheck { .. } => "flow-check",
            Command::TorsionX { .. } => "torsion-x",
            Command::Roundtrip { .. } => "roundtrip",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub value: Value,
    pub pass: bool,
}

fn verdict(name: &str, value: impl Serialize, pass: bool) -> Verdict {
    Verdict { name: name.into(), value: serde_json::to_value(value).expect("plain data"), pass }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandReport {
    pub command: String,
    pub inputs: Value,
    pub verdicts: Vec<Verdict>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub timing_ms: f64,
}

impl CommandReport {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Parses, executes and prints; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let report = execute(&cli.command);
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    };
    // A closed stdout (e.g. piped into `head`) is not an error worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("report serializes"));
    report.exit_code()
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn execute(cmd: &Command) -> CommandReport {
    let start = Instant::now();
    let inputs = serde_json::to_value(cmd).expect("plain data");
    let inputs = inputs.as_object().and_then(|o| o.values().next().cloned()).unwrap_or(Value::Null);
    let (verdicts, result, error) = match dispatch(cmd) {
        Ok((v, r)) => (v, r, None),
        Err(e) => (Vec::new(), Value::Null, Some(e.to_string())),
    };
    CommandReport {
        command: cmd.name().into(),
        inputs,
        verdicts,
        result,
        error,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

type Outcome = Result<(Vec<Verdict>, Value)>;

fn dispatch(cmd: &Command) -> Outcome {
    match cmd {
        Command::Cayley { alpha, beta } => cmd_cayley(alpha, beta),
        Command::Pushforward { m, a, b } => cmd_pushforward(*m, *a, *b),
        Command::Convolve { tuple, scalar } => cmd_convolve(tuple, scalar),
        Command::StarCheck { tuple } => cmd_star_check(&load_tuple(tuple)?),
        Command::TraceField { tuple, expect_degree } => cmd_trace_field(&load_tuple(tuple)?, *expect_degree),
        Command::Orbit { tuple, bound, csv } => cmd_orbit(&load_tuple(tuple)?, *bound, csv.as_deref()),
        Command::Cubic { tuple } => cmd_cubic(tuple.as_deref()),
        Command::FlowCheck { lambda, p, field, samples, seed } => cmd_flow(lambda, *p, *field, *samples, *seed),
        Command::TorsionX { lambda, m, field } => cmd_torsion(lambda, *m, *field),
        Command::Roundtrip { m, a, b, bound } => cmd_roundtrip(*m, *a, *b, *bound),
    }
}

/// Reads a tuple from `{"M0", "M1", "Mlambda"}` or from the `result.tuple`
/// field of an earlier report.
pub fn load_tuple(path: &Path) -> Result<MonodromyTuple> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let v = if v.get("M0").is_some() { v } else { v.pointer("/result/tuple").cloned().unwrap_or(v) };
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn strings(xs: &[&CycNum]) -> Vec<String> {
    xs.iter().map(|x| x.descend().to_string()).collect()
}

fn traces_json(t: &MonodromyTuple) -> Result<Value> {
    let tc = trace_coordinates(t)?;
    Ok(json!({
        "boundary": strings(&tc.boundary()),
        "xyz": strings(&tc.xyz()),
    }))
}

fn cmd_cayley(alpha: &str, beta: &str) -> Outcome {
    let p = CayleyParams::parse(alpha, beta)?;
    let t = cayley_solution(&p)?.descended();
    let residual = cubic_residual(&trace_coordinates(&t)?)?;
    let verdicts = vec![
        verdict("star", star_check(&t), star_check(&t)),
        verdict("irreducible", is_irreducible(&t), is_irreducible(&t)),
        verdict("cubic_residual", residual.to_string(), residual.is_zero()),
    ];
    Ok((verdicts, json!({ "params": p, "tuple": t, "traces": traces_json(&t)? })))
}

fn cmd_pushforward(m: u64, a: i64, b: i64) -> Outcome {
    let chi = CoverCharacter::new(m, a, b)?;
    let t = induced_pushforward(&chi)?;
    let rank = t.rank();
    Ok((vec![verdict("rank", rank, rank == 2)], json!({ "character": chi, "exact_order": chi.exact_order(), "tuple": t })))
}

fn parse_scalar(s: &str) -> Result<ConvolutionScalar> {
    let r = Rat::from_str(s)?;
    let n: u64 = r.denom().try_into().map_err(|_| Error::Parse(format!("scalar {s}")))?;
    let k: i64 = r.numer().try_into().map_err(|_| Error::Parse(format!("scalar {s}")))?;
    ConvolutionScalar::new(CycNum::root_of_unity(n, k))
}

fn cmd_convolve(path: &Path, scalar: &str) -> Outcome {
    let t = load_tuple(path)?;
    let c = parse_scalar(scalar)?;
    let out = middle_convolve(&t, &c)?.descended();
    let rank = out.rank();
    Ok((vec![verdict("rank", rank, rank > 0)], json!({ "rank": rank, "star": star_check(&out), "tuple": out })))
}

fn jordan_strings(j: &JordanType<CycNum>) -> Vec<(String, usize)> {
    j.blocks().iter().map(|(c, k)| (c.descend().to_string(), *k)).collect()
}

fn cmd_star_check(t: &MonodromyTuple) -> Outcome {
    let one = CycNum::from_int(1);
    let candidates = [one.clone(), one.neg()];
    let jordan = t
        .all()
        .iter()
        .map(|m| m.jordan_type(&candidates).map(|j| json!(jordan_strings(&j))))
        .map(|r| r.unwrap_or_else(|e| Value::String(e.to_string())))
        .collect::<Vec<_>>();
    let star = star_check(t);
    let irreducible = is_irreducible(t);
    Ok((
        vec![verdict("star", star, star)],
        json!({ "rank": t.rank(), "irreducible": irreducible, "jordan": { "0": jordan[0], "1": jordan[1], "lambda": jordan[2], "inf": jordan[3] } }),
    ))
}

fn cmd_trace_field(t: &MonodromyTuple, expect: Option<u64>) -> Outcome {
    let tf = trace_field(t)?;
    let verdicts = expect.map(|d| vec![verdict("degree", tf.degree, tf.degree == d)]).unwrap_or_default();
    Ok((verdicts, json!({ "degree": tf.degree, "conductor": tf.conductor, "traces": traces_json(t)? })))
}

fn cmd_orbit(t: &MonodromyTuple, bound: usize, csv: Option<&Path>) -> Outcome {
    let r = orbit(t, bound)?;
    if let Some(path) = csv {
        std::fs::write(path, r.to_csv()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    let size = match r.size {
        OrbitSize::Finite(n) => json!(n),
        OrbitSize::Exceeded => json!("exceeded"),
    };
    let points: Vec<Value> = r.points.iter().take(50).map(|p| json!([p.x.to_string(), p.y.to_string(), p.z.to_string(), p.word])).collect();
    Ok((
        vec![verdict("finite", size.clone(), r.is_finite())],
        json!({ "size": size, "bound": bound, "seed": strings(&r.seed.xyz()), "first_points": points }),
    ))
}

fn cmd_cubic(tuple: Option<&Path>) -> Outcome {
    let mut result = json!({ "terms": canonical_cubic(&CAYLEY_CUBIC), "variables": ["x", "y", "z"] });
    let mut verdicts = Vec::new();
    if let Some(path) = tuple {
        let t = load_tuple(path)?;
        let r = cubic_residual(&trace_coordinates(&t)?)?;
        verdicts.push(verdict("residual", r.to_string(), r.is_zero()));
        result["traces"] = traces_json(&t)?;
    }
    Ok((verdicts, result))
}

fn poly_strings<F: Field>(p: &Poly<F>) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn cmd_flow(lambda: &str, p: u32, q: u64, samples: usize, seed: u64) -> Outcome {
    let lam = Rat::from_str(lambda)?;
    let e = LegendreCurve::new(Fp2::from_base(Fp::from_rat(&lam, q)?))?;
    let (g, check) = check_flow(&e, p, samples, seed)?;
    let expected = (p * p) as usize;
    let over_q = psi_p_map(&LegendreCurve::new(lam)?, p)?;
    let verdicts = vec![
        verdict("diagram", format!("{}/{}", check.agreeing, check.samples), check.agreeing == check.samples),
        verdict("fixes_branch_points", check.fixes_branch_points, check.fixes_branch_points),
        verdict("degree_over_q", over_q.degree(), over_q.degree() == expected),
        verdict("degree_over_field", check.degree, check.degree == expected),
    ];
    Ok((
        verdicts,
        json!({ "check": check, "map_over_field": g.map, "map_over_q": over_q.map, "field": format!("F_{q}^2") }),
    ))
}

fn cmd_torsion(lambda: &str, m: u32, field: Option<u64>) -> Outcome {
    let lam = Rat::from_str(lambda)?;
    let e = LegendreCurve::new(lam.clone())?;
    let f = torsion_x_poly(&e, m)?;
    let squarefree = f.gcd(&f.derivative()).degree() == Some(0);
    let mut verdicts = vec![verdict("squarefree", squarefree, squarefree)];
    let mut result = json!({ "m": m, "polynomial": poly_strings(&f), "degree": f.degree() });
    if let Some(q) = field {
        let eq = LegendreCurve::new(Fp2::from_base(Fp::from_rat(&lam, q)?))?;
        let check = check_torsion_roots(&eq, m, 0)?;
        verdicts.push(verdict("killed", format!("{}/{}", check.killed, check.lifted), check.passed() && check.lifted > 0));
        result["field_check"] = serde_json::to_value(check).expect("plain data");
    }
    Ok((verdicts, result))
}

/// `[ℚ(ζ_m + ζ_m⁻¹) : ℚ]`.
fn real_cyclotomic_degree(m: u64) -> u64 {
    if m <= 2 {
        1
    } else {
        euler_phi(m) / 2
    }
}

fn cmd_roundtrip(m: u64, a: i64, b: i64, bound: u64) -> Outcome {
    let chi = CoverCharacter::new(m, a, b)?;
    let induced = induced_pushforward(&chi)?;
    let out = middle_convolve(&induced, &ConvolutionScalar::minus_one())?.descended();
    let rank = out.rank();
    let star = star_check(&out);
    let mut verdicts = vec![verdict("rank", rank, rank == 2), verdict("star", star, star)];
    let mut result = json!({ "character": chi, "exact_order": chi.exact_order(), "tuple": out });
    if star {
        let matched = match_cayley(&out, bound)?;
        verdicts.push(verdict("matched", &matched, matched.is_some()));
        result["matched"] = serde_json::to_value(&matched).expect("plain data");
    } else {
        verdicts.push(verdict("matched", Value::Null, false));
        result["matched"] = Value::Null;
    }
    if rank == 2 {
        let tf = trace_field(&out)?;
        let expected = real_cyclotomic_degree(chi.exact_order());
        verdicts.push(verdict("trace_field_degree", tf.degree, tf.degree == expected));
        result["trace_field"] = serde_json::to_value(tf).expect("plain data");
        result["traces"] = traces_json(&out)?;
    }
    Ok((verdicts, result))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(std::iter::once("cayleymc").chain(args.iter().copied())).unwrap().command
    }

    #[test]
    fn cayley_third_passes() {
        let r = execute(&parse(&["cayley", "--alpha", "1/3", "--beta", "1/3"]));
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.result["traces"]["xyz"], json!(["1", "1", "1"]));
    }

    #[test]
    fn forbidden_params_are_computation_errors() {
        let r = execute(&parse(&["cayley", "--alpha", "1/2", "--beta", "1/2"]));
        assert_eq!(r.exit_code(), 1);
        assert!(r.error.is_some());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run(["cayleymc", "no-such-command"]), 2);
        assert_eq!(run(["cayleymc", "cayley", "--alpha", "1/3"]), 2);
    }

    #[test]
    fn roundtrip_order_three() {
        let r = execute(&parse(&["roundtrip", "--m", "3", "--a", "1", "--b", "2"]));
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.result["traces"]["xyz"], json!(["1", "1", "1"]));
    }

    #[test]
    fn roundtrip_order_two_fails_star() {
        let r = execute(&parse(&["roundtrip", "--m", "2", "--a", "1", "--b", "0"]));
        assert!(r.error.is_none());
        let names: Vec<(&str, bool)> = r.verdicts.iter().map(|v| (v.name.as_str(), v.pass)).collect();
        assert_eq!(names, vec![("rank", true), ("star", false), ("matched", false), ("trace_field_degree", true)]);
    }

    #[test]
    fn flow_check_example() {
        let r = execute(&parse(&["flow-check", "--lambda", "6", "--p", "5", "--field", "13", "--samples", "100"]));
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("1/2").unwrap(), ConvolutionScalar::minus_one());
        assert!(parse_scalar("0/1").is_err());
    }
}
