//! Acceptance suite: one PASS/FAIL line per criterion. Criteria with a
//! documented failure set exit successfully only when the observed failures
//! are exactly that set.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::Instant;

use cayleymc::cayley::{
    canonical_cubic, cayley_solution, cubic_residual, is_scalar_product, match_cayley, parameter_grid, trace_field,
    CayleyParams, CAYLEY_CUBIC,
};
use cayleymc::convolution::{induced_pushforward, middle_convolve, ConvolutionScalar, CoverCharacter};
use cayleymc::elliptic::{check_flow, check_torsion_roots, psi_p_map, LegendreCurve};
use cayleymc::exactalg::{galois_apply, CycNum, Field, Fp, Fp2, GaloisElement, Rat};
use cayleymc::linalg::ExactMatrix;
use cayleymc::mcg::{apply_move, orbit, BraidMove, OrbitSize};
use cayleymc::monodromy::{
    is_conjugate, is_irreducible, make_tuple, star_check, trace_coordinates, Matrix, MonodromyTuple, TraceCoordinates,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

struct Outcome {
    pass: bool,
    detail: String,
    /// Labels of failing cases.
    failures: Vec<String>,
}

impl Outcome {
    fn from_failures(total: usize, failures: Vec<String>, what: &str) -> Self {
        let pass = failures.is_empty();
        let detail = format!("{}/{} {what}", total - failures.len(), total);
        Outcome { pass, detail, failures }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    /// Failing cases that are documented as mathematically expected.
    expected_failures: Vec<String>,
    outcome: Outcome,
    seconds: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn phi(n: u64) -> u64 {
    (1..=n).filter(|k| gcd(*k, n) == 1).count() as u64
}

/// Characters `(a, b)` of exact order `m`.
fn characters(m: u64) -> Vec<CoverCharacter> {
    let mut out = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if gcd(gcd(a, b), m) == 1 {
                out.push(CoverCharacter::new(m, a as i64, b as i64).unwrap());
            }
        }
    }
    out
}

fn label(c: &CoverCharacter) -> String {
    format!("chi(m={},a={},b={})", c.m, c.a, c.b)
}

fn order_two_labels() -> Vec<String> {
    characters(2).iter().map(label).collect()
}

/// Characters of even order m >= 4 with b - a = m/2 (mod m). Their outputs
/// lie on the line y = 2 of the cubic, which needs x1 = 0 in the Cayley
/// formulas.
fn y_line_labels(max_m: u64) -> Vec<String> {
    (4..=max_m)
        .step_by(2)
        .flat_map(characters)
        .filter(|c| (c.b + c.m - c.a) % c.m == c.m / 2)
        .map(|c| label(&c))
        .collect()
}

/// Whether a single σ1^{±1} or σ2^{±1} moves `t` onto a Cayley solution.
fn one_move_from_cayley(t: &MonodromyTuple) -> bool {
    BraidMove::all().into_iter().filter(|mv| mv.index <= 2).any(|mv| {
        let moved = apply_move(t, mv).unwrap();
        star_check(&moved)
            && match_cayley(&moved, 40)
                .unwrap()
                .is_some_and(|p| is_conjugate(&cayley_solution(&p).unwrap(), &moved).unwrap())
    })
}

struct Convolved {
    chi: CoverCharacter,
    out: MonodromyTuple,
}

fn convolve_all(max_m: u64) -> Vec<Convolved> {
    let chars: Vec<CoverCharacter> = (2..=max_m).flat_map(characters).collect();
    chars
        .par_iter()
        .map(|chi| {
            let induced = induced_pushforward(chi).unwrap();
            let out = middle_convolve(&induced, &ConvolutionScalar::minus_one()).unwrap().descended();
            Convolved { chi: *chi, out }
        })
        .collect()
}

/// Product ±I or a trivial local monodromy: outside the (★) locus, and
/// star_check has to say so.
fn is_degenerate(t: &MonodromyTuple) -> bool {
    is_scalar_product(t) || t.all().iter().any(|m| m.is_identity())
}

fn criterion_1() -> Outcome {
    let grid: Vec<CayleyParams> = parameter_grid(15);
    let results: Vec<(bool, Option<String>)> = grid
        .par_iter()
        .filter_map(|p| {
            let t = cayley_solution(p).ok()?;
            if is_degenerate(&t) {
                return Some((true, star_check(&t).then(|| format!("{p} degenerate but accepted"))));
            }
            let tc = trace_coordinates(&t).unwrap();
            let ok = star_check(&t) && is_irreducible(&t) && cubic_residual(&tc).unwrap().is_zero();
            Some((false, (!ok).then(|| p.to_string())))
        })
        .collect();
    let degenerate = results.iter().filter(|(d, _)| *d).count();
    let failures: Vec<String> = results.iter().filter_map(|(_, f)| f.clone()).collect();
    let what = format!(
        "parameter pairs in [0,2)^2 with denominators <= 15 pass (star, irreducible and R = 0) or are degenerate and rejected by star_check ({degenerate} degenerate)"
    );
    Outcome::from_failures(results.len(), failures, &what)
}

fn criterion_2(data: &[Convolved]) -> Outcome {
    let failures = data.iter().filter(|c| c.out.rank() != 2).map(|c| label(&c.chi)).collect();
    Outcome::from_failures(data.len(), failures, "nontrivial characters with m <= 15 give rank 2")
}

fn criterion_3(data: &[Convolved]) -> Outcome {
    let failures = data.par_iter().filter(|c| !star_check(&c.out)).map(|c| label(&c.chi)).collect();
    Outcome::from_failures(data.len(), failures, "outputs have J(1,2) at 0, 1, lambda and J(-1,2) at infinity")
}

fn criterion_4(data: &[Convolved]) -> Outcome {
    let mut seeds: Vec<(String, MonodromyTuple)> = parameter_grid(6)
        .into_iter()
        .filter_map(|p| {
            let t = cayley_solution(&p).ok()?;
            (!is_scalar_product(&t)).then(|| (format!("cayley{p}"), t))
        })
        .step_by(7)
        .collect();
    seeds.extend(data.iter().filter(|c| c.chi.m <= 6 && star_check(&c.out)).map(|c| (label(&c.chi), c.out.clone())));
    let minus = ConvolutionScalar::minus_one();
    let failures = seeds
        .par_iter()
        .filter(|(_, t)| {
            let back = middle_convolve(&middle_convolve(t, &minus).unwrap(), &minus).unwrap();
            back.rank() != 2 || trace_coordinates(&back).unwrap() != trace_coordinates(t).unwrap()
        })
        .map(|(l, _)| l.clone())
        .collect();
    Outcome::from_failures(seeds.len(), failures, "(star) tuples keep all seven traces under MC_{-1} twice")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ObservedMatch {
    m: u64,
    a: u64,
    b: u64,
    alpha: String,
    beta: String,
    xyz: [String; 3],
}

fn matches_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/observed_matches.json")
}

fn criterion_5(data: &[Convolved]) -> Outcome {
    let data: Vec<&Convolved> = data.iter().filter(|c| c.chi.m <= 10).collect();
    let mut failures = Vec::new();
    let mut off_family = 0;
    let found: Vec<(String, Option<ObservedMatch>)> = data
        .par_iter()
        .map(|c| {
            if !star_check(&c.out) {
                return (label(&c.chi), None);
            }
            let p = match_cayley(&c.out, 40).unwrap();
            let ok = p.as_ref().is_some_and(|p| is_conjugate(&cayley_solution(p).unwrap(), &c.out).unwrap());
            let tc = trace_coordinates(&c.out).unwrap();
            let m = p.filter(|_| ok).map(|p| ObservedMatch {
                m: c.chi.m,
                a: c.chi.a,
                b: c.chi.b,
                alpha: p.alpha.to_string(),
                beta: p.beta.to_string(),
                xyz: [tc.x.descend().to_string(), tc.y.descend().to_string(), tc.z.descend().to_string()],
            });
            if m.is_none() {
                let two = CycNum::from_int(2);
                if tc.y != two || !one_move_from_cayley(&c.out) {
                    return (format!("{} (not on y = 2 one braid move from a Cayley point)", label(&c.chi)), None);
                }
            }
            (label(&c.chi), m)
        })
        .collect();
    let order_two: HashSet<String> = order_two_labels().into_iter().collect();
    let mut observed = Vec::new();
    for (l, m) in &found {
        match m {
            Some(m) => observed.push(m.clone()),
            None => {
                if !order_two.contains(l) {
                    off_family += 1;
                }
                failures.push(l.clone())
            }
        }
    }
    let mut extra = Vec::new();
    // distinct points per exact order, against |chars of order m| / 2
    for m in 3..=10u64 {
        let pts: HashSet<_> = data
            .iter()
            .filter(|c| c.chi.m == m)
            .map(|c| {
                let tc = trace_coordinates(&c.out).unwrap();
                [tc.x.key(), tc.y.key(), tc.z.key()]
            })
            .collect();
        let expected = characters(m).len() / 2;
        if pts.len() != expected {
            extra.push(format!("m={m}: {} points, expected {expected}", pts.len()));
        }
    }
    // Galois compatibility: sigma_p(point(chi)) = point(chi^p)
    let by_char: BTreeMap<(u64, u64, u64), &Convolved> = data.iter().map(|c| ((c.chi.m, c.chi.a, c.chi.b), *c)).collect();
    for c in &data {
        let tc = trace_coordinates(&c.out).unwrap();
        let n = CycNum::unify_all(&[tc.x.clone(), tc.y.clone(), tc.z.clone(), CycNum::one(c.chi.m)])[0].order();
        for p in 1..n {
            if gcd(p, n) != 1 {
                continue;
            }
            let sigma = GaloisElement::new(n, p as i64).unwrap();
            let img = c.chi.scaled(p % c.chi.m);
            let target = trace_coordinates(&by_char[&(img.m, img.a, img.b)].out).unwrap();
            let moved: Vec<CycNum> = tc.xyz().iter().map(|v| galois_apply(&sigma, v).unwrap()).collect();
            if moved != [target.x.clone(), target.y.clone(), target.z.clone()] {
                extra.push(format!("{} under sigma_{p}", label(&c.chi)));
            }
        }
    }
    if std::env::var("CAYLEYMC_WRITE_MATCHES").is_ok() {
        std::fs::write(matches_path(), serde_json::to_string_pretty(&observed).unwrap() + "\n").unwrap();
    }
    let stored: Vec<ObservedMatch> = std::fs::read_to_string(matches_path())
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok())
        .unwrap_or_default();
    if stored != observed {
        extra.push("observed matches differ from data/observed_matches.json".into());
    }
    let total = data.len();
    let mut out = Outcome::from_failures(total, failures.clone(), "characters with m <= 10 matched to Cayley parameters");
    if !extra.is_empty() {
        out.pass = false;
        out.detail.push_str(&format!("; point-count/Galois/data problems: {}", extra.join(", ")));
        out.failures.extend(extra);
    } else {
        out.detail.push_str(&format!(
            "; {off_family} unmatched outputs lie on y = 2, one braid move from a Cayley point; point counts = #chars/2 for m = 3..10; Galois-equivariant; data file agrees"
        ));
    }
    out
}

fn criterion_6(data: &[Convolved]) -> Outcome {
    let failures = data
        .par_iter()
        .filter(|c| {
            let m = c.chi.exact_order();
            let expected = if m <= 2 { 1 } else { phi(m) / 2 };
            trace_field(&c.out).unwrap().degree != expected
        })
        .map(|c| label(&c.chi))
        .collect();
    Outcome::from_failures(data.len(), failures, "trace fields have degree [Q(zeta_m + zeta_m^-1) : Q]")
}

fn rat_matrix(rows: [[(i64, i64); 2]; 2]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| CycNum::from_rat(&Rat::new(n, d))).collect()).collect())
        .unwrap()
}

fn criterion_7() -> Outcome {
    let key = |tc: &TraceCoordinates| [tc.x.descend().key(), tc.y.descend().key(), tc.z.descend().key()];
    let mut seen = HashSet::new();
    let mut seeds = Vec::new();
    for p in parameter_grid(10) {
        let Ok(t) = cayley_solution(&p) else { continue };
        if is_scalar_product(&t) {
            continue;
        }
        if seen.insert(key(&trace_coordinates(&t).unwrap())) {
            seeds.push((p, t));
        }
    }
    // Finiteness is a property of the orbit, so one search per orbit covers
    // every seed it contains.
    let mut covered = HashSet::new();
    let mut failures = Vec::new();
    let (mut orbits, mut largest) = (0, 0);
    for (p, t) in &seeds {
        if covered.contains(&key(&trace_coordinates(t).unwrap())) {
            continue;
        }
        let r = orbit(t, 10_000).unwrap();
        orbits += 1;
        match r.size {
            OrbitSize::Finite(n) => largest = largest.max(n),
            OrbitSize::Exceeded => failures.push(p.to_string()),
        }
        covered.extend(r.points.iter().map(|pt| [pt.x.key(), pt.y.key(), pt.z.key()]));
    }
    if let Some((p, _)) = seeds.iter().find(|(_, t)| !covered.contains(&key(&trace_coordinates(t).unwrap()))) {
        failures.push(format!("{p} not covered"));
    }
    // (x, y, z) = (1/2, 1/2, 7/4) on the cubic, off the Cayley family
    let m0 = rat_matrix([[(3, 2), (-1, 4)], [(1, 1), (1, 2)]]);
    let m1 = rat_matrix([[(1, 1), (-3, 2)], [(0, 1), (1, 1)]]);
    let ml = rat_matrix([[(1, 1), (0, 1)], [(1, 1), (1, 1)]]);
    let wild = make_tuple(m0, m1, ml).unwrap();
    let wild_exceeds = star_check(&wild) && orbit(&wild, 10_000).unwrap().size == OrbitSize::Exceeded;
    let mut out = Outcome::from_failures(seeds.len(), failures, "distinct Cayley points (denominators <= 10) have finite orbits within 10^4");
    out.detail.push_str(&format!("; {orbits} orbits, largest {largest}; (1/2, 1/2, 7/4) exceeds the bound: {wild_exceeds}"));
    if !wild_exceeds {
        out.pass = false;
        out.failures.push("non-classified point stayed within the bound".into());
    }
    out
}

fn criterion_8() -> Outcome {
    let lambdas = [Rat::from_int(2), Rat::from_int(6), Rat::new(-1, 3), Rat::new(5, 7)];
    let fields = [13u64, 101];
    let mut cases = Vec::new();
    for p in [3u32, 5, 7] {
        for l in &lambdas {
            for &q in &fields {
                cases.push((p, l.clone(), q));
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(p, l, q)| {
            let e = LegendreCurve::new(Fp2::from_base(Fp::from_rat(l, *q).unwrap())).unwrap();
            let (_, check) = check_flow(&e, *p, 100, 17).unwrap();
            let over_q = psi_p_map(&LegendreCurve::new(l.clone()).unwrap(), *p).unwrap();
            let ok = check.passed()
                && check.samples == 100
                && over_q.degree() == (*p * *p) as usize
                && over_q.fixes_branch_points(&LegendreCurve::new(l.clone()).unwrap());
            (!ok).then(|| format!("p={p},lambda={l},q={q}"))
        })
        .collect();
    Outcome::from_failures(cases.len(), failures, "(p, lambda, F_q^2) combinations: g_p(x(P)) = x([p]P) on 100 samples, branch points fixed, degree over Q = p^2")
}

fn criterion_9() -> Outcome {
    let lambdas = [2i64, 4, -3];
    let primes = [29u64, 31, 37, 41, 43, 53, 59, 61, 67, 71];
    let mut failures = Vec::new();
    let mut lifted_total = 0;
    for m in 2..=9u32 {
        let checks: Vec<_> = lambdas
            .iter()
            .flat_map(|&l| primes.iter().map(move |&q| (l, q)))
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&(l, q)| (l, q, check_torsion_roots(&LegendreCurve::new(Fp2::from_base(Fp::new(l, q))).unwrap(), m, 1).unwrap()))
            .collect();
        let lifted: usize = checks.iter().map(|c| c.2.lifted).sum();
        lifted_total += lifted;
        for (l, q, c) in &checks {
            if !c.passed() {
                failures.push(format!("m={m},lambda={l},q={q}: {}/{}", c.killed, c.lifted));
            }
        }
        if lifted == 0 {
            failures.push(format!("m={m}: no root lifted"));
        }
    }
    let mut out = Outcome::from_failures(8, failures.clone(), "orders m = 2..9 fully killed");
    out.detail.push_str(&format!("; {lifted_total} lifted roots over F_q^2 tested"));
    out
}

/// Independent derivation of the relation among `(tr M_0M_1, tr M_1M_λ,
/// tr M_0M_λ)` from a parametrized family of unipotent triples.
fn fricke_cubic() -> Result<Vec<(i64, [u32; 3])>, String> {
    type M2 = [[Rat; 2]; 2];
    let mul = |a: &M2, b: &M2| -> M2 {
        let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let tr = |a: &M2| a[0][0].add(&a[1][1]);
    let r = |n: i64| Rat::from_int(n);
    let mut monomials = Vec::new();
    for d in 0..=3u32 {
        for i in 0..=d {
            for j in 0..=d - i {
                monomials.push([i, j, d - i - j]);
            }
        }
    }
    let mut rows = Vec::new();
    'samples: for a in 1..=4i64 {
        for b in 1..=4i64 {
            for v in [1i64, 2, 3] {
                let (a, b, v) = (Rat::new(a, 2), Rat::new(b, 3), r(v));
                let den = v.mul(&r(1).add(&a.mul(&b))).add(&b.square());
                if den.is_zero() {
                    continue;
                }
                let u = r(4).sub(&a.square().mul(&v)).div(&den).unwrap();
                let m0: M2 = [[r(1).add(&a.mul(&b)), a.square().neg()], [b.square(), r(1).sub(&a.mul(&b))]];
                let m1: M2 = [[r(1), u.neg()], [r(0), r(1)]];
                let ml: M2 = [[r(1), r(0)], [v.clone(), r(1)]];
                let boundary = [tr(&m0), tr(&m1), tr(&ml), tr(&mul(&mul(&m0, &m1), &ml))];
                if boundary != [r(2), r(2), r(2), r(-2)] {
                    return Err(format!("family left the boundary (2, 2, 2, -2): {boundary:?}"));
                }
                let xyz = [tr(&mul(&m0, &m1)), tr(&mul(&m1, &ml)), tr(&mul(&m0, &ml))];
                rows.push(monomials.iter().map(|e| (0..3).fold(r(1), |acc, k| acc.mul(&xyz[k].pow(e[k] as u64)))).collect::<Vec<_>>());
                if rows.len() == 40 {
                    break 'samples;
                }
            }
        }
    }
    let kernel = ExactMatrix::from_rows(rows).unwrap().kernel_basis();
    if kernel.len() != 1 {
        return Err(format!("relation space has dimension {}", kernel.len()));
    }
    let coeffs = &kernel[0];
    let lcm_den = coeffs.iter().fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<num_bigint::BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm_den / c.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, c| num_integer::Integer::gcd(&acc, c));
    let mut terms: Vec<(i64, [u32; 3])> = ints
        .iter()
        .zip(&monomials)
        .filter(|(c, _)| c.sign() != num_bigint::Sign::NoSign)
        .map(|(c, e)| (i64::try_from(c / &g).unwrap(), *e))
        .collect();
    terms.sort_by(|x, y| y.1.cmp(&x.1));
    if terms[0].0 < 0 {
        terms.iter_mut().for_each(|t| t.0 = -t.0);
    }
    Ok(terms)
}

fn criterion_10() -> Outcome {
    let stored = canonical_cubic(&CAYLEY_CUBIC);
    match fricke_cubic() {
        Ok(terms) => {
            let derived = canonical_cubic(&terms);
            let pass = derived == stored;
            Outcome {
                pass,
                detail: format!("derived {derived} vs stored {stored}"),
                failures: if pass { vec![] } else { vec![derived] },
            }
        }
        Err(e) => Outcome { pass: false, detail: e.clone(), failures: vec![e] },
    }
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn run(id: u32, title: &'static str, expected_failures: Vec<String>, f: impl FnOnce() -> Outcome) -> Criterion {
    let start = Instant::now();
    let outcome = f();
    Criterion { id, title, expected_failures, outcome, seconds: start.elapsed().as_secs_f64() }
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let start = Instant::now();
    let data = convolve_all(15);
    let convolve_secs = start.elapsed().as_secs_f64();
    println!("convolved {} characters with m <= 15 in {convolve_secs:.1}s", data.len());
    let m2 = order_two_labels();
    let mut unexpected = Vec::new();
    let criteria: Vec<(u32, &'static str, Vec<String>, Check<'_>)> = vec![
        (1, "Cayley generator correctness", vec![], Box::new(criterion_1)),
        (2, "Convolution rank law", vec![], Box::new(|| criterion_2(&data))),
        (3, "Convolution Jordan law", m2.clone(), Box::new(|| criterion_3(&data))),
        (4, "Involutivity", vec![], Box::new(|| criterion_4(&data))),
        (5, "Classification round-trip", [m2, y_line_labels(10)].concat(), Box::new(|| criterion_5(&data))),
        (6, "Trace fields", vec![], Box::new(|| criterion_6(&data))),
        (7, "MCG finiteness", vec![], Box::new(criterion_7)),
        (8, "Flow diagram", vec![], Box::new(criterion_8)),
        (9, "Torsion layer", vec![], Box::new(criterion_9)),
        (10, "Fricke cross-oracle", vec![], Box::new(criterion_10)),
    ];
    for (id, title, expected, f) in criteria {
        let c = run(id, title, expected, f);
        let status = if c.outcome.pass { "PASS" } else { "FAIL" };
        println!("[{status}] criterion {:>2} {}: {} ({:.1}s)", c.id, c.title, c.outcome.detail, c.seconds);
        let got: BTreeSet<&String> = c.outcome.failures.iter().collect();
        let want: BTreeSet<&String> = c.expected_failures.iter().collect();
        if !c.outcome.failures.is_empty() {
            println!("       failing: {}", c.outcome.failures.join(", "));
        }
        if got != want {
            unexpected.push(c.id);
        } else if !want.is_empty() {
            println!("       failures are exactly the documented set");
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("unexpected outcome in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
