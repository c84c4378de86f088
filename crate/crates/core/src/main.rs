use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_traits::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use polydual::coupling::{
    default_bound, is_coupled, is_strongly_coupled, is_weighted_magic_square, magic_squares,
    MagicSquare, WeightSystem3,
};
use polydual::dual_search::{enumerate_with_stats, verify_case, CaseReport};
use polydual::intlinalg::{kernel_basis, LatticeBasis, Vec4};
use polydual::io::{
    matrix_json, num, point_json, points_from_json, polynomial_from_json, polytope_json,
    rational_point_json, rational_polytope_json,
};
use polydual::lattice_iso::find_unimodular_map;
use polydual::polytope::LatticePolytope;
use polydual::registry::{load_registry, CaseRecord};
use polydual::wps::{ambient_polytope, newton_polytope, WeightSystem4};
use polydual::{Int, Scalar};

#[derive(Parser)]
#[command(
    name = "polydual",
    version,
    about = "Exact lattice polytopes and coupled weight systems"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the polar dual.
    Dual {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Reflexivity test; exit 1 when not reflexive.
    Reflexive {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Unimodular map carrying A onto B; exit 1 when none exists.
    Iso {
        #[arg(short)]
        a: PathBuf,
        #[arg(short)]
        b: PathBuf,
    },
    /// Polytope of all degree-d monomials of a weight system "a0,a1,a2,a3:d".
    Ambient {
        #[arg(short, long)]
        w: String,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Newton polytope of a polynomial file.
    Newton {
        #[arg(short, long)]
        input: PathBuf,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Reflexive polytopes between two nested polytopes.
    Between {
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
    },
    /// Magic squares for a pair of 3-variable weight systems "w1,w2,w3:d".
    Coupling {
        #[arg(long)]
        w: String,
        #[arg(long)]
        wp: String,
        /// Check one square, entries row by row.
        #[arg(long)]
        square: Option<String>,
    },
    /// Re-run registry cases.
    VerifyCase {
        /// Case number.
        case: Option<u32>,
        #[arg(long, conflicts_with = "case")]
        all: bool,
        #[arg(long)]
        registry: Option<PathBuf>,
        /// Include wall-clock times (reports are no longer byte-stable).
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Args)]
struct BasisArg {
    /// Three lattice vectors "b1;b2;b3", each "x,y,z,w". Defaults to an HNF basis.
    #[arg(long, allow_hyphen_values = true)]
    basis: Option<String>,
}

/// Input could not be understood; exit 2.
#[derive(Debug)]
struct Malformed(anyhow::Error);

impl std::fmt::Display for Malformed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for Malformed {}

fn malformed(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(Malformed(e.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Malformed>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(4)
            }
        }
    }
}

fn emit(json: bool, v: &Value, text: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(v).expect("values serialize")
        );
    } else {
        println!("{}", text());
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let s = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(malformed)?;
    serde_json::from_str(&s)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(malformed)
}

fn read_polytope(path: &Path) -> Result<LatticePolytope<Int>> {
    let v = read_json(path)?;
    let pts = points_from_json::<Int>(&v)
        .with_context(|| path.display().to_string())
        .map_err(malformed)?;
    LatticePolytope::hull(&pts)
        .with_context(|| path.display().to_string())
        .map_err(malformed)
}

fn ints(s: &str) -> Result<Vec<Int>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<Int>()
                .map_err(|_| malformed(anyhow!("`{x}` is not an integer")))
        })
        .collect()
}

/// "a,b,c:d"
fn weights(s: &str, n: usize) -> Result<(Vec<Int>, Int)> {
    let (w, d) = s
        .split_once(':')
        .ok_or_else(|| malformed(anyhow!("expected weights as `w1,...:d`, got `{s}`")))?;
    let w = ints(w)?;
    if w.len() != n {
        return Err(malformed(anyhow!("expected {n} weights, got {}", w.len())));
    }
    let d = ints(d)?;
    if d.len() != 1 {
        return Err(malformed(anyhow!("expected one degree after `:`")));
    }
    Ok((w, d[0].clone()))
}

fn weight4(s: &str) -> Result<WeightSystem4<Int>> {
    let (w, d) = weights(s, 4)?;
    WeightSystem4::new([w[0].clone(), w[1].clone(), w[2].clone(), w[3].clone()], d)
        .map_err(malformed)
}

fn weight3(s: &str) -> Result<WeightSystem3<Int>> {
    let (w, d) = weights(s, 3)?;
    WeightSystem3::new([w[0].clone(), w[1].clone(), w[2].clone()], d).map_err(malformed)
}

fn basis_for(arg: &BasisArg, a: &Vec4<Int>) -> Result<LatticeBasis<Int>> {
    let Some(s) = &arg.basis else {
        return kernel_basis(a).map_err(malformed);
    };
    let vs: Vec<Vec<Int>> = s.split(';').map(ints).collect::<Result<_>>()?;
    if vs.len() != 3 || vs.iter().any(|v| v.len() != 4) {
        return Err(malformed(anyhow!(
            "basis must be three vectors of length 4"
        )));
    }
    let v4 =
        |v: &Vec<Int>| -> Vec4<Int> { [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()] };
    let b = LatticeBasis::new([v4(&vs[0]), v4(&vs[1]), v4(&vs[2])]).map_err(malformed)?;
    if !b.annihilates(a) {
        return Err(malformed(anyhow!("basis does not annihilate the weights")));
    }
    if !b.weight_and_index().1.is_one() {
        return Err(malformed(anyhow!("basis spans a proper sublattice")));
    }
    Ok(b)
}

fn fmt_point<T: Scalar>(p: &[T; 3]) -> String {
    format!("({},{},{})", p[0], p[1], p[2])
}

fn fmt_vertices<T: Scalar>(p: &LatticePolytope<T>) -> String {
    p.vertices()
        .iter()
        .map(fmt_point)
        .collect::<Vec<_>>()
        .join(" ")
}

fn run(cli: &Cli) -> Result<u8> {
    let js = cli.json;
    match &cli.cmd {
        Cmd::Dual { input } => {
            let p = read_polytope(input)?;
            let d = p.polar_dual().map_err(malformed)?;
            emit(js, &rational_polytope_json(&d), || {
                d.vertices()
                    .iter()
                    .map(|v| format!("({},{},{})", v[0], v[1], v[2]))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(0)
        }
        Cmd::Reflexive { input } => {
            let p = read_polytope(input)?;
            if !p.origin_interior() {
                emit(
                    js,
                    &json!({"reflexive": false, "reason": "origin is not interior"}),
                    || "false: origin is not an interior point".into(),
                );
                return Ok(1);
            }
            let bad = (0..p.facets().len()).find(|&i| !p.facets()[i].offset.is_one());
            match bad {
                None => {
                    emit(js, &json!({"reflexive": true}), || "true".into());
                    Ok(0)
                }
                Some(i) => {
                    let y = p.facet_dual_vertex(i).map_err(malformed)?;
                    let f = &p.facets()[i];
                    emit(
                        js,
                        &json!({"reflexive": false, "facet_normal": point_json(&f.normal), "dual_vertex": rational_point_json(&y)}),
                        || {
                            format!(
                                "false: facet with normal {} has dual vertex ({},{},{})",
                                fmt_point(&f.normal),
                                y[0],
                                y[1],
                                y[2]
                            )
                        },
                    );
                    Ok(1)
                }
            }
        }
        Cmd::Iso { a, b } => {
            let (p, q) = (read_polytope(a)?, read_polytope(b)?);
            match find_unimodular_map(&p, &q) {
                Some(m) => {
                    emit(
                        js,
                        &json!({"isomorphic": true, "matrix": matrix_json(m.matrix())}),
                        || {
                            m.matrix()
                                .iter()
                                .map(fmt_point)
                                .collect::<Vec<_>>()
                                .join("\n")
                        },
                    );
                    Ok(0)
                }
                None => {
                    emit(js, &json!({"isomorphic": false}), || "none".into());
                    Ok(1)
                }
            }
        }
        Cmd::Ambient { w, basis } => {
            let w = weight4(w)?;
            let b = basis_for(basis, w.weights())?;
            let a = ambient_polytope(&w, &b)?;
            print_polytope(js, &a);
            Ok(0)
        }
        Cmd::Newton { input, basis } => {
            let v = read_json(input)?;
            let f = polynomial_from_json::<Int>(&v)
                .with_context(|| input.display().to_string())
                .map_err(malformed)?;
            let b = basis_for(basis, f.weight().weights())?;
            let n = newton_polytope(&f, &b).map_err(malformed)?;
            print_polytope(js, &n);
            Ok(0)
        }
        Cmd::Between { inner, outer } => {
            let (p, q) = (read_polytope(inner)?, read_polytope(outer)?);
            let e = enumerate_with_stats(&p, &q).map_err(malformed)?;
            let v = json!({
                "hulls_visited": e.hulls_visited,
                "reflexive": e.reflexive.iter().map(polytope_json).collect::<Vec<_>>(),
            });
            emit(js, &v, || {
                let mut s = format!(
                    "{} reflexive ({} hulls visited)",
                    e.reflexive.len(),
                    e.hulls_visited
                );
                for r in &e.reflexive {
                    s.push('\n');
                    s.push_str(&fmt_vertices(r));
                }
                s
            });
            Ok(0)
        }
        Cmd::Coupling { w, wp, square } => {
            coupling(js, &weight3(w)?, &weight3(wp)?, square.as_deref())
        }
        Cmd::VerifyCase {
            case,
            all,
            registry,
            timing,
        } => {
            if case.is_none() && !all {
                return Err(malformed(anyhow!("give a case number or --all")));
            }
            let path = registry.clone().unwrap_or_else(|| {
                Path::new(env!("CARGO_MANIFEST_DIR")).join("data/registry.json")
            });
            // Registry coordinates are tiny; fall back to big integers only if needed.
            match load_registry::<i64>(&path) {
                Ok(recs) => verify(js, &recs, *case, *timing),
                Err(_) => {
                    let recs = load_registry::<Int>(&path).map_err(malformed)?;
                    verify(js, &recs, *case, *timing)
                }
            }
        }
    }
}

fn print_polytope(js: bool, p: &LatticePolytope<Int>) {
    emit(js, &polytope_json(p), || fmt_vertices(p));
}

fn square_json(c: &MagicSquare<Int>, w: &WeightSystem3<Int>, w2: &WeightSystem3<Int>) -> Value {
    let coupled = is_coupled(c, w, w2).unwrap_or(false);
    let strongly = coupled && is_strongly_coupled(c, w, w2).unwrap_or(false);
    json!({
        "square": matrix_json(c.entries()),
        "magic": is_weighted_magic_square(c, w, w2),
        "det": num(&c.det()),
        "coupled": coupled,
        "strongly_coupled": strongly,
    })
}

fn square_line(v: &Value) -> String {
    format!(
        "{}  det {}  magic {}  coupled {}  strongly {}",
        v["square"], v["det"], v["magic"], v["coupled"], v["strongly_coupled"]
    )
}

fn coupling(
    js: bool,
    w: &WeightSystem3<Int>,
    w2: &WeightSystem3<Int>,
    square: Option<&str>,
) -> Result<u8> {
    if let Some(s) = square {
        let e = ints(s)?;
        if e.len() != 9 {
            bail!(malformed(anyhow!(
                "square needs 9 entries, got {}",
                e.len()
            )));
        }
        let c = MagicSquare::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| e[3 * i + j].clone())
        }))
        .map_err(malformed)?;
        let v = square_json(&c, w, w2);
        emit(js, &v, || square_line(&v));
        return Ok(0);
    }
    let all: Vec<Value> = magic_squares(w, w2, default_bound(w, w2))
        .iter()
        .map(|c| square_json(c, w, w2))
        .collect();
    emit(js, &Value::Array(all.clone()), || {
        let mut s = format!("{} magic squares", all.len());
        for v in &all {
            s.push('\n');
            s.push_str(&square_line(v));
        }
        s
    });
    Ok(0)
}

fn report_json<T: Scalar>(rec: &CaseRecord<T>, r: &CaseReport<T>, ms: Option<u128>) -> Value {
    let mut v = json!({
        "case_no": r.case_no,
        "yonemura": [rec.side_a.yonemura_no, rec.side_b.yonemura_no],
        "self_coupled": r.self_coupled,
        "reflexive_counts": [r.reflexive_counts.0, r.reflexive_counts.1],
        "hulls_visited": [r.hulls_visited.0, r.hulls_visited.1],
        "pair_count": r.pairs.len(),
        "expected_count": r.expected_count,
        "expected": r.expected.iter().map(|e| json!({"delta": e.delta, "delta_prime": e.delta_prime, "found": e.found})).collect::<Vec<_>>(),
        "expected_found": r.expected_found(),
        "extra": r.extra,
        "fingerprint_classes": r.fingerprint_classes,
        "matches_expectation": r.matches_expectation(),
        "pairs": r.pairs.iter().map(|p| json!({
            "delta": polytope_json(&p.delta),
            "delta_prime": polytope_json(&p.delta_prime),
            "witness": matrix_json(p.witness.matrix()),
        })).collect::<Vec<_>>(),
    });
    if let Some(ms) = ms {
        v["elapsed_ms"] = json!(ms);
    }
    v
}

fn report_text<T: Scalar>(r: &CaseReport<T>, ms: Option<u128>) -> String {
    let found = r.expected.iter().filter(|e| e.found).count();
    let mut s = format!(
        "case {}: {} pair(s){}, expected {}, listed pairs found {}/{}, extra {} -> {}",
        r.case_no,
        r.pairs.len(),
        if r.self_coupled { " (unordered)" } else { "" },
        r.expected_count,
        found,
        r.expected.len(),
        r.extra.len(),
        if r.matches_expectation() {
            "ok"
        } else {
            "MISMATCH"
        },
    );
    if let Some(ms) = ms {
        s.push_str(&format!(" [{ms} ms]"));
    }
    for e in r.expected.iter().filter(|e| !e.found) {
        s.push_str(&format!("\n  missing ({}, {})", e.delta, e.delta_prime));
    }
    for &i in &r.extra {
        let p = &r.pairs[i];
        s.push_str(&format!(
            "\n  extra {} | {}",
            fmt_vertices(&p.delta),
            fmt_vertices(&p.delta_prime)
        ));
    }
    s
}

fn verify<T: Scalar>(
    js: bool,
    recs: &[CaseRecord<T>],
    case: Option<u32>,
    timing: bool,
) -> Result<u8> {
    let chosen: Vec<&CaseRecord<T>> = match case {
        Some(n) => vec![recs
            .iter()
            .find(|r| r.case_no == n)
            .ok_or_else(|| malformed(anyhow!("no case {n} in the registry")))?],
        None => recs.iter().collect(),
    };
    let results: Vec<(CaseReport<T>, u128)> = chosen
        .par_iter()
        .map(|rec| {
            let t = Instant::now();
            let r = verify_case(rec).with_context(|| format!("case {}", rec.case_no))?;
            Ok((r, t.elapsed().as_millis()))
        })
        .collect::<Result<_>>()?;
    let ok = results.iter().all(|(r, _)| r.matches_expectation());
    let ms = |m: u128| timing.then_some(m);
    if js {
        let v: Vec<Value> = chosen
            .iter()
            .zip(&results)
            .map(|(rec, (r, m))| report_json(rec, r, ms(*m)))
            .collect();
        let doc = if case.is_some() {
            v[0].clone()
        } else {
            Value::Array(v)
        };
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for (r, m) in &results {
            println!("{}", report_text(r, ms(*m)));
        }
        if case.is_none() {
            let empty: Vec<String> = results
                .iter()
                .filter(|(r, _)| r.pairs.is_empty())
                .map(|(r, _)| r.case_no.to_string())
                .collect();
            let bad = results
                .iter()
                .filter(|(r, _)| !r.matches_expectation())
                .count();
            println!(
                "{} cases, {} mismatched, cases without pairs: {{{}}}",
                results.len(),
                bad,
                empty.join(", ")
            );
        }
    }
    Ok(if ok { 0 } else { 3 })
}
