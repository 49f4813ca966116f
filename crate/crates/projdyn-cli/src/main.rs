//! Command-line front end: map-file ingestion, experiment execution, and
//! reproducibility manifests.
//!
//! Exit codes: 0 success, 1 domain error (structured JSON on stderr),
//! 2 usage error.

mod manifest;
mod repro;

use clap::{Parser, Subcommand};
use manifest::ManifestBuilder;
use num_complex::Complex64;
use projdyn::measures::{backward_tree, backward_walk, green_estimate, square_grid};
use projdyn::projcore::{fs_point, ProjPoint};
use projdyn::proximity::{exceptional_scan, m1_estimate, mpoint_estimate, Target};
use projdyn::ratmap::{parse_map_file, RationalMap};
use projdyn::rng::Stream;
use projdyn::solve::fiber;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "projdyn", version, about = "Degree growth, equidistribution and proximity experiments for rational self-maps of projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact degree table (delta_1, delta_2, lambda, q) for the iterates.
    Degrees {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Symbolic iterates with reduction; components rendered in the grammar.
    Iterate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve P^{-1}(target) with multiplicities.
    Fiber {
        #[arg(long)]
        map: PathBuf,
        /// `random`, comma-separated affine coordinates like `1.2+0.5i,-0.3`,
        /// or a file holding one such line.
        #[arg(long, default_value = "random")]
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Chordal residual every reported point must satisfy.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Backward-orbit sampling of the equidistribution measure.
    Sample {
        #[arg(long)]
        map: PathBuf,
        /// `tree` (full solution tree) or `walk` (random backward orbit).
        #[arg(long, default_value = "tree")]
        method: String,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: u32,
        #[arg(long, default_value_t = 50)]
        burnin: u32,
        #[arg(long, default_value = "random")]
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Green-function values G_k on an affine grid.
    Green {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        /// Normalizer base; defaults to the map degree.
        #[arg(long)]
        base: Option<f64>,
        /// Grid as `lo:hi:steps` per axis.
        #[arg(long, default_value = "-3:3:20")]
        grid: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Monte-Carlo proximity estimate m^l(P, target).
    Proximity {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value = "random")]
        target: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Exceptional-set growth scan over iterates.
    Scan {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// Number of random targets (the coordinate pencils are always included).
        #[arg(long, default_value_t = 10)]
        targets: usize,
        #[arg(long, default_value_t = 4_000)]
        samples: usize,
        #[arg(long)]
        abase: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Rerun the bundled example-reproduction suite.
    Repro {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("{}", json!({ "error": msg }));
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn load_map(path: &Path) -> Result<(RationalMap, Vec<u8>), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Usage(format!("cannot read map file {}: {e}", path.display())))?;
    let text = String::from_utf8_lossy(&bytes);
    let map = parse_map_file(&text).map_err(|e| Failure::Domain(e.to_string()))?;
    Ok((map, bytes))
}

fn ensure_out(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Usage(format!("cannot create output dir {}: {e}", dir.display())))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    std::fs::write(&path, contents)
        .map_err(|e| Failure::Domain(format!("write {}: {e}", path.display())))?;
    Ok(path)
}

fn parse_complex(s: &str) -> Result<Complex64, Failure> {
    let t = s.trim().replace(' ', "");
    if t.is_empty() {
        return Err(Failure::Usage("empty coordinate".into()));
    }
    // Forms: a, bi, a+bi, a-bi (decimal floats allowed).
    let fail = || Failure::Usage(format!("cannot parse complex number `{s}`"));
    if let Some(im) = t.strip_suffix('i') {
        // Split at the last +/- that is not a leading sign or exponent sign.
        let bytes = im.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-')
                && bytes[i - 1] != b'e'
                && bytes[i - 1] != b'E'
            {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = im[..i].parse().map_err(|_| fail())?;
                let imag_str = &im[i..];
                let imag: f64 = if imag_str == "+" {
                    1.0
                } else if imag_str == "-" {
                    -1.0
                } else {
                    imag_str.parse().map_err(|_| fail())?
                };
                Ok(Complex64::new(re, imag))
            }
            None => {
                let imag: f64 = if im.is_empty() {
                    1.0
                } else if im == "-" {
                    -1.0
                } else {
                    im.parse().map_err(|_| fail())?
                };
                Ok(Complex64::new(0.0, imag))
            }
        }
    } else {
        Ok(Complex64::new(t.parse().map_err(|_| fail())?, 0.0))
    }
}

/// Parse `--target`: `random`, inline affine coordinates, or a file.
fn parse_target(spec: &str, n: usize, seed: u64) -> Result<ProjPoint, Failure> {
    if spec == "random" {
        return Ok(fs_point(&Stream::new(seed ^ 0x7a26e7), 0, n));
    }
    let text = if spec.contains(',') || spec.parse::<f64>().is_ok() || spec.ends_with('i') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec)
            .map_err(|e| Failure::Usage(format!("cannot read target file {spec}: {e}")))?
    };
    let coords: Result<Vec<Complex64>, Failure> =
        text.trim().split(',').map(parse_complex).collect();
    let coords = coords?;
    if coords.len() != n {
        return Err(Failure::Usage(format!(
            "expected {n} affine coordinates, found {}",
            coords.len()
        )));
    }
    Ok(ProjPoint::from_affine(&coords))
}

fn point_json(p: &ProjPoint) -> serde_json::Value {
    json!(p
        .coords()
        .iter()
        .map(|c| vec![c.re, c.im])
        .collect::<Vec<_>>())
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Degrees { map, kmax, seed, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let mut mf = ManifestBuilder::new("degrees");
            mf.map_bytes(&bytes).seed(seed).param("kmax", kmax);
            let table = projdyn::degrees::degree_table(&m, kmax, seed)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            let report = json!({
                "delta1": table.iter().map(|r| r.d).collect::<Vec<_>>(),
                "delta2": table.iter().map(|r| r.lambda).collect::<Vec<_>>(),
                "rows": table,
            });
            let p = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&p);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Iterate { map, kmax, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let mut mf = ManifestBuilder::new("iterate");
            mf.map_bytes(&bytes).param("kmax", kmax);
            let mut rows = Vec::new();
            for k in 1..=kmax {
                let it = m.iterate(k).map_err(|e| Failure::Domain(e.to_string()))?;
                rows.push(json!({
                    "k": k,
                    "degree": it.degree(),
                    "components": it.render_components(),
                }));
            }
            let report = json!({ "iterates": rows });
            let p = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&p);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Fiber { map, target, seed, tolerance, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let w = parse_target(&target, m.target_dim(), seed)?;
            let mut mf = ManifestBuilder::new("fiber");
            mf.map_bytes(&bytes).seed(seed).param("target", &target).param("tolerance", tolerance);
            let f = fiber(&m, &w, seed).map_err(|e| Failure::Domain(e.to_string()))?;
            // Verify every reported point against the requested tolerance.
            let comps: Vec<projdyn::polyalg::FloatPoly> = m
                .components()
                .iter()
                .map(|c| projdyn::polyalg::FloatPoly::compile(c.as_mpoly()))
                .collect();
            let mut worst = 0.0f64;
            for (p, _) in &f.points {
                let image: Vec<num_complex::Complex64> =
                    comps.iter().map(|fp| fp.eval(p.coords())).collect();
                if let Ok(ip) = projdyn::projcore::ProjPoint::normalize(&image) {
                    worst = worst.max(projdyn::projcore::fs_distance(&ip, &w));
                }
            }
            if worst > tolerance {
                return Err(Failure::Domain(format!(
                    "fiber residual {worst:.3e} exceeds tolerance {tolerance:.3e}"
                )));
            }
            let report = json!({
                "target": point_json(&w),
                "count_with_multiplicity": f.count_with_multiplicity(),
                "complete": f.complete,
                "max_residual": worst,
                "points": f.points.iter().map(|(p, mult)| json!({
                    "point": point_json(p), "multiplicity": mult,
                })).collect::<Vec<_>>(),
                "excluded_indeterminate": f.excluded_indeterminate.iter().map(|(p, mult)| json!({
                    "point": point_json(p), "multiplicity": mult,
                })).collect::<Vec<_>>(),
            });
            let p = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&p);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Sample { map, method, depth, samples, burnin, target, seed, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let w = parse_target(&target, m.target_dim(), seed)?;
            let mut mf = ManifestBuilder::new("sample");
            mf.map_bytes(&bytes)
                .seed(seed)
                .param("method", &method)
                .param("depth", depth)
                .param("samples", samples)
                .param("burnin", burnin)
                .param("target", &target);
            let (measure, summary) = match method.as_str() {
                "tree" => {
                    let t = backward_tree(&m, &w, depth, seed)
                        .map_err(|e| Failure::Domain(e.to_string()))?;
                    let shortfall = t.shortfall;
                    (t.measure, json!({ "method": "tree", "depth": depth, "shortfall": shortfall }))
                }
                "walk" => {
                    let t = backward_walk(&m, &w, burnin, samples, seed)
                        .map_err(|e| Failure::Domain(e.to_string()))?;
                    let restarts = t.restarts;
                    (t.measure, json!({ "method": "walk", "samples": samples, "restarts": restarts }))
                }
                other => return Err(Failure::Usage(format!("unknown method `{other}`"))),
            };
            let report = json!({
                "target": point_json(&w),
                "atoms": measure.len(),
                "total_weight": measure.total_weight(),
                "summary": summary,
            });
            let pj = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            let pc = write_file(&out, "atoms.csv", &measure.to_csv())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&pj).output(&pc);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Green { map, kmax, base, grid, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            if m.source_dim() != 2 {
                return Err(Failure::Usage("green grids are 2-dimensional".into()));
            }
            let parts: Vec<&str> = grid.split(':').collect();
            if parts.len() != 3 {
                return Err(Failure::Usage("grid must be lo:hi:steps".into()));
            }
            let lo: f64 = parts[0].parse().map_err(|_| Failure::Usage("bad grid lo".into()))?;
            let hi: f64 = parts[1].parse().map_err(|_| Failure::Usage("bad grid hi".into()))?;
            let steps: usize = parts[2].parse().map_err(|_| Failure::Usage("bad grid steps".into()))?;
            let base = base.unwrap_or(m.degree() as f64);
            let mut mf = ManifestBuilder::new("green");
            mf.map_bytes(&bytes).param("kmax", kmax).param("base", base).param("grid", &grid);
            let g = green_estimate(&m, kmax, base, &square_grid(lo, hi, steps))
                .map_err(|e| Failure::Domain(e.to_string()))?;
            let mut csv = String::from("re_z,im_z,re_w,im_w,green\n");
            for (p, v) in &g.values {
                let val = v.map(|x| x.to_string()).unwrap_or_else(|| "indeterminate".into());
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p[0].re, p[0].im, p[1].re, p[1].im, val
                ));
            }
            let pc = write_file(&out, "green.csv", &csv)?;
            let report = json!({ "k": kmax, "base": base, "grid": grid, "points": g.values.len() });
            let pj = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&pj).output(&pc);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Proximity { map, l, target, samples, seed, threads, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let mut mf = ManifestBuilder::new("proximity");
            mf.map_bytes(&bytes).seed(seed).param("l", l).param("samples", samples).param("target", &target);
            let est = match l {
                1 => {
                    let t = if target == "random" {
                        Target::hyperplane(fs_point(&Stream::new(seed ^ 0x7a26e7), 0, m.target_dim()).coords())
                    } else {
                        Target::hyperplane(parse_target(&target, m.target_dim(), seed)?.coords())
                    };
                    m1_estimate(&m, &t, samples, seed, threads)
                }
                _ => {
                    let t = Target::point(parse_target(&target, m.target_dim(), seed)?);
                    mpoint_estimate(&m, &t, samples, seed, threads)
                }
            }
            .map_err(|e| Failure::Domain(e.to_string()))?;
            let report = json!({
                "l": l,
                "value": est.value,
                "std_error": est.std_error,
                "samples": est.samples,
                "rejected": est.rejected,
            });
            let p = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&p);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Scan { map, l, kmax, targets, samples, abase, seed, threads, out } => {
            let (m, bytes) = load_map(&map)?;
            ensure_out(&out)?;
            let n = m.target_dim();
            let mut mf = ManifestBuilder::new("scan");
            mf.map_bytes(&bytes).seed(seed).param("l", l).param("kmax", kmax).param("samples", samples);
            let mut list: Vec<Target> = Vec::new();
            if l == 1 {
                for i in 0..=n {
                    let mut v = vec![Complex64::new(0.0, 0.0); n + 1];
                    v[i] = Complex64::new(1.0, 0.0);
                    list.push(Target::hyperplane(&v));
                }
                for t in 0..targets {
                    list.push(Target::hyperplane(
                        fs_point(&Stream::new(seed ^ 0x5ca2), t as u64, n).coords(),
                    ));
                }
            } else {
                for t in 0..targets {
                    list.push(Target::point(fs_point(&Stream::new(seed ^ 0x5ca3), t as u64, n)));
                }
            }
            let rows = exceptional_scan(&m, l, &list, kmax, abase, samples, seed, threads)
                .map_err(|e| Failure::Domain(e.to_string()))?;
            let csv = projdyn::proximity::scan_rows_to_csv(&rows);
            let pc = write_file(&out, "scan.csv", &csv)?;
            let flagged = rows
                .iter()
                .filter(|r| r.flag == projdyn::proximity::ScanFlag::ExceptionalCandidate)
                .count();
            let report = json!({ "rows": rows.len(), "flagged": flagged });
            let pj = write_file(&out, "report.json", &serde_json::to_string_pretty(&report).unwrap())?;
            println!("{}", serde_json::to_string(&report).unwrap());
            mf.output(&pj).output(&pc);
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            Ok(())
        }
        Command::Repro { seed, out } => {
            ensure_out(&out)?;
            let mut mf = ManifestBuilder::new("repro");
            mf.seed(seed);
            let result = repro::run(seed);
            let table = repro::render_table(&result.rows);
            print!("{table}");
            let pj = write_file(
                &out,
                "repro_report.json",
                &serde_json::to_string_pretty(&json!({ "rows": result.rows })).unwrap(),
            )?;
            let pt = write_file(&out, "repro_table.txt", &table)?;
            mf.output(&pj).output(&pt);
            for (name, contents) in &result.files {
                let p = write_file(&out, name, contents)?;
                mf.output(&p);
            }
            mf.write(&out).map_err(|e| Failure::Domain(e.to_string()))?;
            let all_pass = result.rows.iter().all(|r| r.pass);
            if all_pass {
                Ok(())
            } else {
                Err(Failure::Domain("repro suite has failing rows".into()))
            }
        }
    }
}
