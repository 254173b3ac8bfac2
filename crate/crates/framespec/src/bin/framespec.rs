//! Command-line front end: frame generation, multiplier spectra, spectral
//! enclosures, and the verification suite.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use framespec::enclosures::{self, BoundingBox, OnbUnionData, Region, RieszSplitData};
use framespec::error::{Error, Result};
use framespec::frames::{self, Frame};
use framespec::multipliers::{self, Symbol};
use framespec::numerics::{self, C64};
use framespec::verify::{self, fmt17};

#[derive(Parser)]
#[command(name = "framespec", version, about = "Frames, multipliers, and spectral enclosures")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a frame and write it as JSON
    Gen(GenArgs),
    /// Eigenvalues of a multiplier as CSV/JSON
    Spectrum(SpectrumArgs),
    /// Compute a spectral enclosure region
    Enclose(EncloseArgs),
    /// Run named experiments and the randomized soundness harness
    Verify(VerifyArgs),
}

/// Optional JSON config; flags override file values, unknown keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileCfg {
    family: Option<String>,
    dim: Option<usize>,
    seed: Option<u64>,
    bounds: Option<String>,
    alphas: Option<String>,
    gabor: Option<String>,
    frame: Option<PathBuf>,
    dual: Option<String>,
    symbol: Option<String>,
    repeat: Option<bool>,
    n: Option<usize>,
    method: Option<String>,
    mu: Option<String>,
    radius: Option<f64>,
    indices: Option<String>,
    scan_box: Option<String>,
    resolution: Option<String>,
    out: Option<PathBuf>,
    experiment: Option<String>,
    trials: Option<usize>,
}

fn load_cfg(path: &Option<PathBuf>) -> Result<FileCfg> {
    match path {
        None => Ok(FileCfg::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

/// Seed resolution order: flag, config file, FRAMESPEC_SEED, then 0.
fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(s) = flag.or(file) {
        return Ok(s);
    }
    match std::env::var("FRAMESPEC_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| Error::Validation(format!("FRAMESPEC_SEED is not an integer: {v}"))),
        Err(_) => Ok(0),
    }
}

fn parse_f64_list(s: &str, expect: Option<usize>, what: &str) -> Result<Vec<f64>> {
    let vals: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("bad {what} entry '{t}'")))
        })
        .collect::<Result<_>>()?;
    if let Some(n) = expect {
        if vals.len() != n {
            return Err(Error::Validation(format!(
                "{what} needs {n} comma-separated values, got {}",
                vals.len()
            )));
        }
    }
    Ok(vals)
}

fn parse_c64(s: &str) -> Result<C64> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(C64::new(x, 0.0));
    }
    t.parse::<C64>()
        .map_err(|_| Error::Validation(format!("bad complex value '{t}' (use forms like 0.5, 1+2i)")))
}

/// Resolves a symbol spec against a frame of `count` vectors. Inline
/// lists (`0,0.333,0.667,1`) are used verbatim or tiled with `repeat`;
/// `paper:ex5_2` and `paper:rem5_4` name the built-in patterns.
fn resolve_symbol(spec: &str, repeat: bool, n: Option<usize>, count: usize) -> Result<Symbol> {
    match spec {
        "paper:ex5_2" => Ok(verify::example_5_2_symbol(count)),
        "paper:rem5_4" => {
            let pairs = n.unwrap_or(count / 2);
            if 2 * pairs != count {
                return Err(Error::Dimension(format!(
                    "paper:rem5_4 with {pairs} pairs gives length {} but the frame has {count} vectors",
                    2 * pairs
                )));
            }
            Ok(verify::remark_5_4_symbol(pairs))
        }
        other if other.starts_with("paper:") => Err(Error::Validation(format!(
            "unknown named symbol '{other}'; known: paper:ex5_2, paper:rem5_4"
        ))),
        inline => {
            let values: Vec<C64> = inline
                .split(',')
                .map(parse_c64)
                .collect::<Result<_>>()?;
            if repeat {
                Ok(Symbol::periodic(&values, count))
            } else if values.len() == count {
                Ok(Symbol::new(values))
            } else {
                Err(Error::Dimension(format!(
                    "symbol has {} values but the frame has {count} vectors (use --repeat to tile)",
                    values.len()
                )))
            }
        }
    }
}

fn load_frame(path: &Path) -> Result<Frame> {
    let text = std::fs::read_to_string(path)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    Frame::from_json(&v)
}

fn parse_indices(spec: &str, count: usize) -> Result<Vec<usize>> {
    let indices: Vec<usize> = match spec {
        "even" => (0..count).step_by(2).collect(),
        "odd" => (1..count).step_by(2).collect(),
        list => list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Validation(format!("bad index '{t}'")))
            })
            .collect::<Result<_>>()?,
    };
    if indices.iter().any(|&i| i >= count) {
        return Err(Error::Validation(format!(
            "index out of range for {count} vectors"
        )));
    }
    Ok(indices)
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, contents)?;
        }
        None => print!("{contents}"),
    }
    Ok(())
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// onb | riesz | onb-union | gabor
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// riesz: frame bounds "A,B"
    #[arg(long)]
    bounds: Option<String>,
    /// onb-union: branch weights "a1,a2,..."
    #[arg(long)]
    alphas: Option<String>,
    /// gabor: "a,b" time/frequency steps
    #[arg(long)]
    gabor: Option<String>,
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_gen(args: GenArgs) -> Result<()> {
    let cfg = load_cfg(&args.config)?;
    let family = args
        .family
        .or(cfg.family)
        .ok_or_else(|| Error::Validation("--family is required".into()))?;
    let dim = args
        .dim
        .or(cfg.dim)
        .ok_or_else(|| Error::Validation("--dim is required".into()))?;
    let seed = resolve_seed(args.seed, cfg.seed)?;
    let frame = match family.as_str() {
        "onb" => frames::onb(dim),
        "riesz" => {
            let b = parse_f64_list(
                args.bounds
                    .or(cfg.bounds)
                    .ok_or_else(|| Error::Validation("riesz family needs --bounds A,B".into()))?
                    .as_str(),
                Some(2),
                "--bounds",
            )?;
            frames::random_riesz(dim, b[0], b[1], seed)?
        }
        "onb-union" => {
            let alphas = parse_f64_list(
                args.alphas
                    .or(cfg.alphas)
                    .ok_or_else(|| Error::Validation("onb-union family needs --alphas".into()))?
                    .as_str(),
                None,
                "--alphas",
            )?;
            use rand_chacha::rand_core::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let unitaries: Vec<_> = (0..alphas.len())
                .map(|_| frames::random_unitary(dim, &mut rng))
                .collect();
            let alphas_c: Vec<C64> = alphas.iter().map(|&a| C64::new(a, 0.0)).collect();
            frames::scaled_onb_union(dim, &alphas_c, &unitaries)?
        }
        "gabor" => {
            let ab = parse_f64_list(
                args.gabor
                    .or(cfg.gabor)
                    .ok_or_else(|| Error::Validation("gabor family needs --gabor a,b".into()))?
                    .as_str(),
                Some(2),
                "--gabor",
            )?;
            let p = frames::GaborParams::with_default_window(dim, ab[0] as usize, ab[1] as usize);
            frames::gabor_frame(&p)?
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown family '{other}'; known: onb, riesz, onb-union, gabor"
            )))
        }
    };
    let json = serde_json::to_string_pretty(&frame.to_json())?;
    emit(args.out.or(cfg.out).as_deref(), &(json + "\n"))
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// frame JSON file (synthesis side φ)
    #[arg(long)]
    frame: Option<PathBuf>,
    /// "canonical" (default) or a path to the analysis-side frame ψ
    #[arg(long)]
    dual: Option<String>,
    /// inline values, or paper:ex5_2 / paper:rem5_4
    #[arg(long)]
    symbol: Option<String>,
    /// tile an inline symbol to the frame length
    #[arg(long)]
    repeat: bool,
    /// truncation length parameter for paper:rem5_4
    #[arg(long)]
    n: Option<usize>,
    /// output prefix; writes <prefix>.csv and <prefix>.json
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<()> {
    let cfg = load_cfg(&args.config)?;
    let frame_path = args
        .frame
        .or(cfg.frame)
        .ok_or_else(|| Error::Validation("--frame is required".into()))?;
    let phi = load_frame(&frame_path)?;
    let dual_spec = args.dual.or(cfg.dual).unwrap_or_else(|| "canonical".into());
    let psi = match dual_spec.as_str() {
        "canonical" => frames::canonical_dual(&phi)?.psi,
        path => load_frame(Path::new(path))?,
    };
    let symbol_spec = args
        .symbol
        .or(cfg.symbol)
        .ok_or_else(|| Error::Validation("--symbol is required".into()))?;
    let repeat = args.repeat || cfg.repeat.unwrap_or(false);
    let m = resolve_symbol(&symbol_spec, repeat, args.n.or(cfg.n), phi.count)?;
    let mult = multipliers::assemble(&m, &phi, &psi)?;
    let spec = multipliers::spectrum_of(&mult)?;

    let mut csv = String::from("re,im\n");
    for z in spec.values() {
        csv.push_str(&format!("{},{}\n", fmt17(z.re), fmt17(z.im)));
    }
    match args.out.or(cfg.out) {
        Some(prefix) => {
            emit(Some(&prefix.with_extension("csv")), &csv)?;
            let json = serde_json::json!({
                "frame": phi.label,
                "dual": psi.label,
                "dual_pair": mult.dual,
                "eigenvalues": spec,
            });
            emit(
                Some(&prefix.with_extension("json")),
                &(serde_json::to_string_pretty(&json)? + "\n"),
            )?;
        }
        None => print!("{csv}"),
    }
    Ok(())
}

#[derive(Args)]
struct EncloseArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// bessel-disk | hull | dual-disk | riesz-split | onb-union | scan
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    frame: Option<PathBuf>,
    /// "canonical" (default) or path to ψ; bessel-disk and dual-disk only
    #[arg(long)]
    dual: Option<String>,
    #[arg(long)]
    symbol: Option<String>,
    #[arg(long)]
    repeat: bool,
    #[arg(long)]
    n: Option<usize>,
    /// dual-disk: center, e.g. "0.5" or "0.5+0.1i" (defaults to the
    /// smallest enclosing disk of the symbol)
    #[arg(long)]
    mu: Option<String>,
    /// dual-disk: radius around mu
    #[arg(long)]
    radius: Option<f64>,
    /// riesz-split / scan: index set ("even", "odd", or a comma list)
    #[arg(long)]
    indices: Option<String>,
    /// onb-union: branch weights
    #[arg(long)]
    alphas: Option<String>,
    /// scan window "re_lo,re_hi,im_lo,im_hi" (defaults to the Bessel disk
    /// box inflated 10%)
    #[arg(long)]
    scan_box: Option<String>,
    /// scan grid "nx,ny" (default 401,401)
    #[arg(long)]
    resolution: Option<String>,
    /// output prefix; writes <prefix>.json and <prefix>.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_enclose(args: EncloseArgs) -> Result<()> {
    let cfg = load_cfg(&args.config)?;
    let method = args
        .method
        .or(cfg.method)
        .ok_or_else(|| Error::Validation("--method is required".into()))?;
    let phi = load_frame(
        &args
            .frame
            .or(cfg.frame)
            .ok_or_else(|| Error::Validation("--frame is required".into()))?,
    )?;
    let symbol_spec = args
        .symbol
        .or(cfg.symbol)
        .ok_or_else(|| Error::Validation("--symbol is required".into()))?;
    let repeat = args.repeat || cfg.repeat.unwrap_or(false);
    let m = resolve_symbol(&symbol_spec, repeat, args.n.or(cfg.n), phi.count)?;
    let dual_spec = args.dual.or(cfg.dual).unwrap_or_else(|| "canonical".into());
    let psi = || -> Result<Frame> {
        match dual_spec.as_str() {
            "canonical" => Ok(frames::canonical_dual(&phi)?.psi),
            path => load_frame(Path::new(path)),
        }
    };

    let region: Region = match method.as_str() {
        "bessel-disk" => enclosures::bessel_disk(&m, &phi, &psi()?)?,
        "hull" => enclosures::hull_enclosure(&m, &phi)?,
        "dual-disk" => {
            let psi = psi()?;
            match (&args.mu.or(cfg.mu), args.radius.or(cfg.radius)) {
                (Some(mu), Some(r)) => {
                    enclosures::dual_disk_item1(&m, &phi, &psi, parse_c64(mu)?, r)?
                }
                (None, None) => {
                    let (mu, r) = numerics::min_enclosing_disk(&m.values)?;
                    enclosures::dual_disk_item1(&m, &phi, &psi, mu, r)?
                }
                _ => {
                    return Err(Error::Validation(
                        "dual-disk needs both --mu and --radius, or neither".into(),
                    ))
                }
            }
        }
        "riesz-split" | "scan" => {
            let psi = psi()?;
            let resolution = match args.resolution.or(cfg.resolution) {
                Some(r) => {
                    let v = parse_f64_list(&r, Some(2), "--resolution")?;
                    (v[0] as usize, v[1] as usize)
                }
                None => enclosures::DEFAULT_SCAN_RESOLUTION,
            };
            let bbox = match args.scan_box.or(cfg.scan_box) {
                Some(b) => {
                    let v = parse_f64_list(&b, Some(4), "--scan-box")?;
                    BoundingBox {
                        re_lo: v[0],
                        re_hi: v[1],
                        im_lo: v[2],
                        im_hi: v[3],
                    }
                }
                None => enclosures::default_scan_box(&m, &phi, &psi)?,
            };
            match args.indices.or(cfg.indices) {
                Some(idx) => {
                    let indices = parse_indices(&idx, phi.count)?;
                    let data = RieszSplitData::compute(&phi, &psi, &indices)?;
                    // validate duality once, then scan the pure predicate
                    enclosures::riesz_split_resolvent_checked(
                        C64::new(0.0, 0.0),
                        &m,
                        &phi,
                        &psi,
                        &indices,
                        &data,
                    )?;
                    enclosures::region_scan(
                        |z| enclosures::riesz_split_resolvent(z, &m, &indices, &data),
                        bbox,
                        resolution,
                        &format!("scan(riesz-split, phi={})", phi.label),
                    )?
                }
                None => {
                    let (mu, _) = numerics::min_enclosing_disk(&m.values)?;
                    enclosures::pert_ii_resolvent_predicate(
                        C64::new(0.0, 0.0),
                        mu,
                        &m,
                        &phi,
                        &psi,
                    )?;
                    let b_phi = frames::frame_bounds(&phi)?.upper;
                    let b_psi = frames::frame_bounds(&psi)?.upper;
                    let dev = m
                        .values
                        .iter()
                        .map(|v| (v - mu).norm())
                        .fold(0.0, f64::max);
                    let reach = dev * (b_phi * b_psi).sqrt();
                    enclosures::region_scan(
                        |z| reach < (mu - z).norm() - enclosures::STRICT_MARGIN,
                        bbox,
                        resolution,
                        &format!("scan(dual-disk, phi={})", phi.label),
                    )?
                }
            }
        }
        "onb-union" => {
            let alphas = parse_f64_list(
                args.alphas
                    .or(cfg.alphas)
                    .ok_or_else(|| Error::Validation("onb-union needs --alphas".into()))?
                    .as_str(),
                None,
                "--alphas",
            )?;
            let data = OnbUnionData::from_symbol(&m, &alphas, None)?;
            enclosures::onb_union_interval(&data)?
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown method '{other}'; known: bessel-disk, hull, dual-disk, riesz-split, onb-union, scan"
            )))
        }
    };

    let json = serde_json::to_string_pretty(&region)? + "\n";
    match args.out.or(cfg.out) {
        Some(prefix) => {
            emit(Some(&prefix.with_extension("json")), &json)?;
            let res = verify::ExperimentResult {
                name: "enclose".into(),
                dim: phi.dim,
                eigenvalues: framespec::numerics::Spectrum::new(vec![]),
                regions: vec![verify::RegionReport {
                    region,
                    verdict: true,
                    worst_margin: f64::NEG_INFINITY,
                }],
                checks: vec![],
                notes: vec![],
                pass: true,
            };
            // reuse the verify plot emitter for the CSV
            let dir = prefix
                .parent()
                .map(Path::to_path_buf)
                .unwrap_or_else(|| PathBuf::from("."));
            verify::write_artifacts(&dir, &res)?;
            std::fs::rename(
                dir.join("enclose_region.csv"),
                prefix.with_extension("csv"),
            )?;
            let _ = std::fs::remove_file(dir.join("enclose.json"));
            let _ = std::fs::remove_file(dir.join("enclose_spectrum.csv"));
        }
        None => print!("{json}"),
    }
    Ok(())
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// experiment name or "all"
    #[arg(long)]
    experiment: Option<String>,
    /// artifact directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// extra randomized soundness trials (0 to skip)
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let cfg = load_cfg(&args.config)?;
    let experiment = args
        .experiment
        .or(cfg.experiment)
        .unwrap_or_else(|| "all".into());
    let out_dir = args
        .out
        .or(cfg.out)
        .unwrap_or_else(|| PathBuf::from("verify-out"));
    let seed = resolve_seed(args.seed, cfg.seed)?;
    let trials = args.trials.or(cfg.trials).unwrap_or(0);

    let mut passed = 0usize;
    let mut total = 0usize;
    let names: Vec<&str> = if experiment == "all" {
        verify::EXPERIMENT_NAMES.to_vec()
    } else {
        vec![experiment.as_str()]
    };
    for name in names {
        let res = verify::run_named(name, seed)?;
        verify::write_artifacts(&out_dir, &res)?;
        for check in &res.checks {
            println!(
                "{} {}: {} ({})",
                if check.pass { "ok " } else { "FAIL" },
                res.name,
                check.name,
                check.detail
            );
        }
        for report in &res.regions {
            println!(
                "{} {}: eigenvalues within {} (worst margin {:.3e})",
                if report.verdict { "ok " } else { "FAIL" },
                res.name,
                report.region.provenance,
                report.worst_margin
            );
        }
        total += 1;
        passed += res.pass as usize;
    }
    if trials > 0 {
        let cfg = verify::TrialConfig {
            seed,
            dim_lo: 2,
            dim_hi: 24,
            frame_family: verify::FrameFamily::Parseval,
            symbol_family: verify::SymbolFamily::ComplexDisk,
            trials,
        };
        let results = verify::run_random_soundness(&cfg)?;
        let bad = results.iter().filter(|r| !r.pass).count();
        println!(
            "{} random_soundness: {} trials, {} violations",
            if bad == 0 { "ok " } else { "FAIL" },
            trials,
            bad
        );
        total += 1;
        passed += (bad == 0) as usize;
    }
    if passed == total {
        println!("PASS {passed}/{total}");
        Ok(())
    } else {
        println!("FAIL {}/{total}", total - passed);
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Spectrum(a) => cmd_spectrum(a),
        Cmd::Enclose(a) => cmd_enclose(a),
        Cmd::Verify(a) => cmd_verify(a),
    }
}

fn main() {
    if let Err(e) = run() {
        let msg = e.to_string().replace('\n', " ");
        eprintln!("ERROR:{}:{}", e.kind(), msg);
        // exit 2 when a mathematical hypothesis is unmet, 1 otherwise
        let code = match e.kind() {
            "duality" | "not-a-frame" | "not-a-riesz-basis" | "criterion-void" => 2,
            _ => 1,
        };
        std::process::exit(code);
    }
}
