//! Command implementations for the `gfm` binary: catalog listing, full
//! pipeline builds with canonical JSON reports, golden verification, and
//! numeric period series.
//!
//! Exit-code contract: 0 success, 1 verification failure, 2 input or
//! validation error, 3 no pencil solution, 4 chart or base-point failure.

use clap::{Parser, Subcommand};
use gfm_core::arith::Coeff;
use gfm_core::catalog::{catalog, find_case, CaseManifest, ChartPolicy};
use gfm_core::error::Error;
use gfm_core::periods::{decimal_string, period_series, residual_check};
use gfm_core::report::{run_case, to_report, CaseRun, ManifoldReport};
use gfm_core::rootsys::Family;
use gfm_core::textform::{parse_ratfn, ratfn_string, VarSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(name = "gfm", about = "Generalized Frobenius manifolds on affine Weyl orbit spaces", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// List built-in cases (optionally filtered by substring).
    Catalog {
        filter: Option<String>,
    },
    /// Run the full pipeline and write a canonical JSON report.
    Build {
        /// Built-in case id (see `gfm catalog`).
        #[arg(long, conflicts_with_all = ["family", "rank", "marks", "manifest"])]
        case: Option<String>,
        /// Plain-text manifest file with key = value lines.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
        /// Comma-separated nonnegative marks, e.g. 0,1.
        #[arg(long)]
        marks: Option<String>,
        /// Pin the pencil ansatz coefficients, e.g. 6,-12.
        #[arg(long)]
        pencil_coeffs: Option<String>,
        /// Chart policy: paper (catalog cases only) or solve.
        #[arg(long)]
        chart: Option<String>,
        /// Output path; defaults to <id>.json in the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the heavyweight identity suite into the report.
        #[arg(long)]
        properties: bool,
        /// Worker threads for multi-branch builds (default GFM_THREADS or 1).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Rebuild a case and compare against its golden report.
    Verify {
        /// Case id, or --all.
        case: Option<String>,
        #[arg(long)]
        all: bool,
        /// Golden directory override (defaults to the embedded goldens).
        #[arg(long)]
        goldens: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Period series and flatness residuals at a base point.
    Periods {
        case: String,
        /// Truncation order K.
        #[arg(long, default_value_t = 8)]
        order: usize,
        /// Base point in z-coordinates as comma-separated rationals.
        #[arg(long)]
        point: Option<String>,
        /// Decimal digits for the series output.
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub fn threads_default(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("GFM_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1)
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Catalog { filter } => cmd_catalog(filter.as_deref()),
        Command::Build {
            case,
            manifest,
            family,
            rank,
            marks,
            pencil_coeffs,
            chart,
            out,
            properties,
            threads,
        } => cmd_build(BuildArgs {
            case,
            manifest,
            family,
            rank,
            marks,
            pencil_coeffs,
            chart,
            out,
            properties,
            threads: threads_default(threads),
        }),
        Command::Verify { case, all, goldens, threads } => {
            cmd_verify(case.as_deref(), all, goldens.as_deref(), threads_default(threads))
        }
        Command::Periods { case, order, point, digits, out } => {
            cmd_periods(&case, order, point.as_deref(), digits, out.as_deref())
        }
    }
}

pub fn cmd_catalog(filter: Option<&str>) -> i32 {
    for case in catalog() {
        if let Some(f) = filter {
            if !case.id.contains(f) {
                continue;
            }
        }
        let marks: Vec<String> = case.marks.iter().map(|m| m.to_string()).collect();
        println!("{}  {}{} marks=({})", case.id, case.family, case.rank, marks.join(","));
    }
    0
}

pub struct BuildArgs {
    pub case: Option<String>,
    pub manifest: Option<PathBuf>,
    pub family: Option<String>,
    pub rank: Option<usize>,
    pub marks: Option<String>,
    pub pencil_coeffs: Option<String>,
    pub chart: Option<String>,
    pub out: Option<PathBuf>,
    pub properties: bool,
    pub threads: usize,
}

fn parse_marks(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Other(format!("bad mark {x:?}"))))
        .collect()
}

fn parse_coeffs(s: &str) -> Result<Vec<Coeff>, Error> {
    s.split(',').map(|x| Coeff::parse(x.trim())).collect()
}

/// Builds a manifest from CLI arguments or a key = value file.
pub fn resolve_manifest(args: &BuildArgs) -> Result<CaseManifest, Error> {
    if let Some(id) = &args.case {
        let mut m =
            find_case(id).ok_or_else(|| Error::Other(format!("unknown case id {id:?}")))?;
        if let Some(c) = &args.pencil_coeffs {
            m.pencil_coefficients = Some(parse_coeffs(c)?);
        }
        if let Some(ch) = &args.chart {
            m.chart_policy = parse_chart_policy(ch)?;
        }
        return Ok(m);
    }
    let mut family = args.family.clone();
    let mut rank = args.rank;
    let mut marks = args.marks.clone();
    let mut pencil = args.pencil_coeffs.clone();
    let mut chart = args.chart.clone();
    let mut id = None;
    if let Some(path) = &args.manifest {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Other(format!("cannot read manifest: {e}")))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Other(format!("bad manifest line {line:?}")))?;
            let (k, v) = (k.trim(), v.trim().to_string());
            match k {
                "id" => id = Some(v),
                "family" => family = Some(v),
                "rank" => {
                    rank = Some(v.parse().map_err(|_| Error::Other("bad rank".into()))?)
                }
                "marks" => marks = Some(v),
                "pencil_coeffs" => pencil = Some(v),
                "chart" => chart = Some(v),
                other => return Err(Error::Other(format!("unknown manifest key {other:?}"))),
            }
        }
    }
    let family = family.ok_or_else(|| Error::Other("missing family".into()))?;
    let rank = rank.ok_or_else(|| Error::Other("missing rank".into()))?;
    let marks = parse_marks(&marks.ok_or_else(|| Error::Other("missing marks".into()))?)?;
    let fam = Family::parse(&family)?;
    let id = id.unwrap_or_else(|| {
        let ms: Vec<String> = marks.iter().map(|m| m.to_string()).collect();
        format!("{}{}-m{}", family.to_lowercase(), rank, ms.join(""))
    });
    let chart_policy = match &chart {
        Some(c) => parse_chart_policy(c)?,
        None => ChartPolicy::Solve,
    };
    Ok(CaseManifest {
        id,
        family: fam,
        rank,
        marks,
        pencil_coefficients: match &pencil {
            Some(c) => Some(parse_coeffs(c)?),
            None => None,
        },
        chart_policy,
        expected: None,
    })
}

fn parse_chart_policy(s: &str) -> Result<ChartPolicy, Error> {
    match s {
        "paper" => Ok(ChartPolicy::Paper),
        "solve" => Ok(ChartPolicy::Solve),
        other => Err(Error::Other(format!("chart policy must be paper or solve, got {other:?}"))),
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoSolution => 3,
        Error::NoChartInField(_)
        | Error::SingularChartJacobian
        | Error::UnderdeterminedNormalization(_)
        | Error::BadBasePoint(_)
        | Error::ResonantShift(_) => 4,
        _ => 2,
    }
}

pub fn cmd_build(args: BuildArgs) -> i32 {
    let manifest = match resolve_manifest(&args) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let started = std::time::Instant::now();
    let runs = match run_case(&manifest) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let multi = runs.len() > 1;
    for (i, run) in runs.iter().enumerate() {
        let mut rep = to_report(run, args.properties);
        if multi {
            rep.id = format!("{}-k{}", rep.id, i + 1);
        }
        let path = match &args.out {
            Some(p) if multi => {
                let stem = p.with_extension("");
                PathBuf::from(format!("{}-k{}.json", stem.display(), i + 1))
            }
            Some(p) => p.clone(),
            None => PathBuf::from(format!("{}.json", rep.id)),
        };
        if let Err(e) = std::fs::write(&path, rep.to_json() + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
        eprintln!("wrote {}", path.display());
    }
    eprintln!("built {} report(s) in {:.2?}", runs.len(), started.elapsed());
    0
}

/// Embedded golden reports, keyed by case id.
pub fn embedded_golden(id: &str) -> Option<&'static str> {
    match id {
        "a1-w1" => Some(include_str!("../goldens/v1/a1-w1.json")),
        "a2-w2" => Some(include_str!("../goldens/v1/a2-w2.json")),
        "c3-w3" => Some(include_str!("../goldens/v1/c3-w3.json")),
        "b3-w1-k1" => Some(include_str!("../goldens/v1/b3-w1-k1.json")),
        "b3-w1-k2" => Some(include_str!("../goldens/v1/b3-w1-k2.json")),
        "b3-w1-k3" => Some(include_str!("../goldens/v1/b3-w1-k3.json")),
        "g2-w2" => Some(include_str!("../goldens/v1/g2-w2.json")),
        "a3-w1w3" => Some(include_str!("../goldens/v1/a3-w1w3.json")),
        _ => None,
    }
}

/// Compares a freshly built report with the paper display data stored in
/// the manifest. Returns the first mismatch.
pub fn compare_with_expected(run: &CaseRun, rep: &ManifoldReport) -> Option<String> {
    let Some(exp) = &run.manifest.expected else { return None };
    let l = run.rs.rank;
    let canon = |src: &str, vars: VarSet| -> String {
        let r = parse_ratfn(src, vars, l).expect("expected-value string parses");
        ratfn_string(&r, vars)
    };
    if let Some(eta) = &exp.eta {
        for i in 0..l {
            for j in 0..l {
                let want = canon(eta[i][j], VarSet::Z);
                if rep.eta_matrix[i][j] != want {
                    return Some(format!(
                        "eta[{i}][{j}]: got {}, paper {}",
                        rep.eta_matrix[i][j], want
                    ));
                }
            }
        }
    }
    if let Some(g) = &exp.g {
        for i in 0..l {
            for j in 0..l {
                let want = canon(g[i][j], VarSet::Z);
                if rep.g_matrix[i][j] != want {
                    return Some(format!(
                        "g[{i}][{j}]: got {}, paper {}",
                        rep.g_matrix[i][j], want
                    ));
                }
            }
        }
    }
    if let Some(f) = exp.potential {
        let want = canon(f, VarSet::T);
        if rep.potential != want {
            return Some(format!("potential: got {}, paper {}", rep.potential, want));
        }
    }
    if let Some(unit) = &exp.unit {
        for (a, u) in unit.iter().enumerate() {
            let want = canon(u, VarSet::T);
            if rep.unit[a] != want {
                return Some(format!("unit[{a}]: got {}, paper {}", rep.unit[a], want));
            }
        }
    }
    if let Some(ds) = &exp.degrees {
        let want: Vec<String> = ds.iter().map(|s| s.to_string()).collect();
        if rep.degree_spectrum != want {
            return Some(format!(
                "degree spectrum: got {:?}, paper {:?}",
                rep.degree_spectrum, want
            ));
        }
    }
    if let Some(e) = exp.eflat {
        if rep.eflat != e {
            return Some(format!("eflat: got {}, paper {}", rep.eflat, e));
        }
    }
    if let Some(n) = exp.stab_order {
        if rep.monodromy.stab_order != n {
            return Some(format!(
                "stab order: got {}, paper {}",
                rep.monodromy.stab_order, n
            ));
        }
    }
    if let Some(gens) = &exp.stab_generators {
        if &rep.monodromy.stab_generators != gens {
            return Some(format!(
                "stab generators: got {:?}, paper {:?}",
                rep.monodromy.stab_generators, gens
            ));
        }
    }
    if let Some(t) = exp.triviality {
        if !rep.monodromy.triviality.starts_with(t) {
            return Some(format!(
                "triviality: got {}, expected {}",
                rep.monodromy.triviality, t
            ));
        }
    }
    None
}

fn first_diff(a: &str, b: &str) -> String {
    for (n, (la, lb)) in a.lines().zip(b.lines()).enumerate() {
        if la != lb {
            return format!("line {}: got {:?}, golden {:?}", n + 1, la, lb);
        }
    }
    format!("length differs: got {} lines, golden {} lines", a.lines().count(), b.lines().count())
}

/// Verifies one case: rebuild, run the identity suite, compare with the
/// paper data and the golden file. Returns (pass, messages).
pub fn verify_case(id: &str, goldens: Option<&Path>) -> (bool, Vec<String>) {
    let mut msgs = Vec::new();
    let Some(case) = find_case(id) else {
        return (false, vec![format!("unknown case id {id:?}")]);
    };
    let runs = match run_case(&case) {
        Ok(r) => r,
        Err(e) => return (false, vec![format!("pipeline error: {e}")]),
    };
    let run = &runs[0];
    let rep = to_report(run, true);
    let mut pass = true;
    for check in &rep.verification {
        if !check.pass {
            pass = false;
            msgs.push(format!("identity failed: {}", check.name));
        }
    }
    if let Some(diff) = compare_with_expected(run, &rep) {
        pass = false;
        msgs.push(format!("paper comparison failed: {diff}"));
    }
    let golden = match goldens {
        Some(dir) => std::fs::read_to_string(dir.join(format!("{id}.json"))).ok(),
        None => embedded_golden(id).map(|s| s.to_string()),
    };
    match golden {
        Some(text) => {
            let fresh = rep.to_json() + "\n";
            if fresh != text {
                pass = false;
                msgs.push(format!("golden mismatch: {}", first_diff(&fresh, &text)));
            } else if ManifoldReport::from_json(&text).is_err() {
                pass = false;
                msgs.push("golden file does not parse back".to_string());
            }
        }
        None => {
            pass = false;
            msgs.push("no golden report found".to_string());
        }
    }
    (pass, msgs)
}

pub fn cmd_verify(case: Option<&str>, all: bool, goldens: Option<&Path>, threads: usize) -> i32 {
    let ids: Vec<String> = if all {
        catalog().into_iter().map(|c| c.id).collect()
    } else {
        match case {
            Some(id) => vec![id.to_string()],
            None => {
                eprintln!("error: give a case id or --all");
                return 2;
            }
        }
    };
    let results: Vec<(String, bool, Vec<String>)> = if threads > 1 && ids.len() > 1 {
        let goldens = goldens.map(|p| p.to_path_buf());
        let chunks: Vec<Vec<String>> = ids
            .chunks(ids.len().div_ceil(threads))
            .map(|c| c.to_vec())
            .collect();
        let mut results = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    let goldens = goldens.clone();
                    scope.spawn(move || {
                        chunk
                            .into_iter()
                            .map(|id| {
                                let (ok, msgs) = verify_case(&id, goldens.as_deref());
                                (id, ok, msgs)
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                results.extend(h.join().expect("verify worker"));
            }
        });
        // Deterministic output order regardless of scheduling.
        results.sort_by(|a, b| {
            let pa = ids.iter().position(|i| *i == a.0).unwrap();
            let pb = ids.iter().position(|i| *i == b.0).unwrap();
            pa.cmp(&pb)
        });
        results
    } else {
        ids.iter()
            .map(|id| {
                let (ok, msgs) = verify_case(id, goldens);
                (id.clone(), ok, msgs)
            })
            .collect()
    };
    let mut all_ok = true;
    for (id, ok, msgs) in results {
        println!("{id}: {}", if ok { "PASS" } else { "FAIL" });
        for m in msgs {
            println!("  {m}");
        }
        all_ok &= ok;
    }
    if all_ok {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct PeriodsOut {
    case: String,
    base_point: Vec<String>,
    order: usize,
    digits: u32,
    series: Vec<SeriesOut>,
    residuals: Vec<ResidualOut>,
}

#[derive(Serialize)]
struct SeriesOut {
    alpha: usize,
    degree: String,
    xi: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ResidualOut {
    rho: String,
    flatness: f64,
    homogeneity: f64,
}

pub fn cmd_periods(
    id: &str,
    order: usize,
    point: Option<&str>,
    digits: u32,
    out: Option<&Path>,
) -> i32 {
    let Some(case) = find_case(id) else {
        eprintln!("error: unknown case id {id:?}");
        return 2;
    };
    let runs = match run_case(&case) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let run = &runs[0];
    let explicit = point.is_some();
    let points: Vec<Vec<BigRational>> = match point {
        Some(csv) => {
            let parsed: Result<Vec<BigRational>, _> =
                csv.split(',').map(|x| BigRational::from_str(x.trim())).collect();
            match parsed {
                Ok(p) if p.len() == run.rs.rank => vec![p],
                Ok(_) => {
                    eprintln!("error: point must have {} components", run.rs.rank);
                    return 2;
                }
                Err(e) => {
                    eprintln!("error: bad point: {e}");
                    return 2;
                }
            }
        }
        None => {
            // Deterministic retry sequence of prime points.
            (0..10)
                .map(|attempt| {
                    (0..run.rs.rank)
                        .map(|i| {
                            BigRational::from_integer(BigInt::from(nth_prime(
                                attempt * run.rs.rank + i,
                            )))
                        })
                        .collect()
                })
                .collect()
        }
    };
    let mut data = None;
    let mut last_err = None;
    for z0 in &points {
        match period_series(&run.set.g, &run.set.eta, &run.chart, &run.wc, z0, order) {
            Ok(d) => {
                data = Some(d);
                break;
            }
            Err(e) => last_err = Some(e),
        }
    }
    let Some(data) = data else {
        let e = last_err.unwrap();
        eprintln!("error: {e}");
        if explicit {
            eprintln!("hint: retry with a different --point (deterministic defaults work)");
        }
        return 4;
    };
    let samples = vec![BigRational::new(1.into(), 10.into()), BigRational::new(1.into(), 100.into())];
    let residuals = residual_check(&data, &samples);
    let out_json = PeriodsOut {
        case: id.to_string(),
        base_point: data.series[0].base_point.iter().map(|x| x.to_string()).collect(),
        order,
        digits,
        series: data
            .series
            .iter()
            .map(|s| SeriesOut {
                alpha: s.alpha + 1,
                degree: s.degree.to_string(),
                xi: s
                    .xi
                    .iter()
                    .map(|v| v.iter().map(|c| decimal_string(c, digits)).collect())
                    .collect(),
            })
            .collect(),
        residuals: residuals
            .iter()
            .map(|r| ResidualOut {
                rho: r.rho.to_string(),
                flatness: r.flatness,
                homogeneity: r.homogeneity,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&out_json).expect("periods serialize") + "\n";
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return 2;
            }
            eprintln!("wrote {}", p.display());
        }
        None => {
            let mut stdout = std::io::stdout();
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    0
}

fn nth_prime(n: usize) -> i64 {
    let mut count = 0;
    let mut cand = 1i64;
    loop {
        cand += 1;
        if (2..cand).take_while(|p| p * p <= cand).all(|p| cand % p != 0) {
            count += 1;
            if count > n {
                return cand;
            }
        }
    }
}
