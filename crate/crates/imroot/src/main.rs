//! Command-line interface for exact Kac-Moody computations: root tables,
//! bracket arithmetic, so(2,1) triples attached to roots, adjoint and
//! highest-weight decompositions, the complementary-series scan, numerical
//! unitary-action matrices, and the built-in regression suite.

mod checks;
mod config;
mod svg;

use clap::{Parser, Subcommand};
use config::{OutputFormat, Overrides, RunConfig};
use kmlie::cartan::{NormClass, RootVector, Weight};
use kmlie::parse::parse_element;
use kmlie::ratio::{fmt_q, parse_q};
use kmlie::so21::{self, So21Triple};
use kmlie::weights;
use kmlie::{Algebra, LieElement};
use num_complex::Complex64;
use num_traits::Signed;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "imroot",
    about = "Exact Kac-Moody algebra toolkit: roots, brackets, so(2,1) subalgebras attached to imaginary roots, unitary decompositions, and numerical group actions",
    version
)]
struct Cli {
    /// Cartan matrix, rows ';'-separated, entries ','-separated
    #[arg(long, global = true)]
    cartan: Option<String>,
    /// JSON config file (same keys as the flags; flags override)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format: text | json | csv | svg
    #[arg(long, global = true)]
    format: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Height cutoff for decompositions
    #[arg(long, global = true)]
    cutoff: Option<i64>,
    /// Verified-window half-width for principal strings
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Numeric tolerance for the floating-point module
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Bound on the exact Gram computations; the Peterson backend covers
    /// larger heights
    #[arg(long, global = true)]
    max_exact_height: Option<i64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positive roots with multiplicities up to the height bound
    Roots {
        #[arg(long, default_value_t = 8)]
        max_height: i64,
    },
    /// Bracket of two element expressions, in canonical form
    Bracket { x: String, y: String },
    /// Contravariant form of two element expressions (--bilinear for the
    /// invariant bilinear form)
    Form {
        x: String,
        y: String,
        #[arg(long)]
        bilinear: bool,
    },
    /// Build and verify a triple attached to a root (or the principal one)
    So21 {
        /// Root in comma coordinates, e.g. 1,1
        #[arg(long)]
        alpha: Option<String>,
        /// Word letters, e.g. 1,2 (defaults to the canonical basis word)
        #[arg(long)]
        word: Option<String>,
        /// Build the real-root sl(2) instead
        #[arg(long)]
        real: bool,
        /// Build the principal so(2,1)
        #[arg(long)]
        principal: bool,
    },
    /// Decompositions of the adjoint or a highest-weight module
    Decompose {
        #[command(subcommand)]
        what: DecomposeCmd,
    },
    /// Scan timelike roots for complementary-series labels
    Conjecture {
        /// Roots to scan (repeatable); defaults to all timelike roots up to
        /// --max-alpha-height
        #[arg(long)]
        alpha: Vec<String>,
        #[arg(long, default_value_t = 6)]
        max_alpha_height: i64,
    },
    /// Floating-point unitary-representation module
    Unirep {
        #[command(subcommand)]
        what: UnirepCmd,
    },
    /// Run the built-in regression suite
    Verify {
        /// Restrict to one suite (see --list)
        #[arg(long)]
        suite: Option<String>,
        /// List available suites
        #[arg(long)]
        list: bool,
    },
    /// Emit the root and weight diagrams as SVG files
    Figures {
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_height: i64,
        #[arg(long, default_value_t = 10)]
        depth: i64,
    },
}

#[derive(Subcommand)]
enum DecomposeCmd {
    /// Adjoint representation under an imaginary-root or principal triple
    Adjoint {
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        principal: bool,
    },
    /// Highest-weight module under an imaginary-root triple
    Hw {
        /// fund1 | fund2 | ... | rho | comma rationals
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        word: Option<String>,
        /// Depth in alpha-steps down each column
        #[arg(long, default_value_t = 7)]
        depth: i64,
    },
    /// Adjoint under a real-root sl(2), into finite modules
    Real {
        /// Simple-root index (1-based)
        #[arg(long)]
        simple: usize,
        #[arg(long)]
        word: Option<String>,
    },
}

#[derive(Subcommand)]
enum UnirepCmd {
    /// Truncated matrix of a group element on a model
    Matrix {
        /// disk | line
        #[arg(long, default_value = "disk")]
        model: String,
        /// Discrete-series parameter (disk model)
        #[arg(long)]
        s: Option<f64>,
        /// Principal-series parameter q with s = (1+iq)/2 (line model)
        #[arg(long)]
        q: Option<f64>,
        /// Minimal J3 eigenvalue offset p (line model)
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Exponential coordinates, e.g. "w=0.1+0.2i,r=0.3"
        #[arg(long)]
        params: String,
        #[arg(long, default_value_t = 32)]
        range: usize,
        /// Cover index and sheet for fractional s
        #[arg(long, default_value_t = 1)]
        cover: u32,
        #[arg(long, default_value_t = 0)]
        sheet: u32,
    },
    /// Differential-operator and norm residual checks
    Check {
        /// disk | line
        #[arg(long, default_value = "disk")]
        model: String,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_root(s: &str, rank: usize) -> Result<RootVector, String> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|e| format!("cannot parse root '{s}': {e}"))?;
    if coords.len() != rank {
        return Err(format!(
            "root '{s}' has {} coordinates; rank is {rank}",
            coords.len()
        ));
    }
    Ok(RootVector::new(coords))
}

fn parse_word(alg: &Algebra, s: &str) -> Result<LieElement, String> {
    if s.contains('[') {
        return parse_element(alg, s).map_err(|e| e.to_string());
    }
    let letters: Result<Vec<usize>, _> = s.split(',').map(|x| x.trim().parse::<usize>()).collect();
    let letters = letters.map_err(|e| format!("cannot parse word '{s}': {e}"))?;
    alg.e(&letters).map_err(|e| e.to_string())
}

fn parse_lambda(alg: &Algebra, s: &str) -> Result<Weight, String> {
    if let Some(rest) = s.strip_prefix("fund") {
        let i: usize = rest
            .parse()
            .map_err(|_| format!("cannot parse fundamental-weight name '{s}'"))?;
        let fw = alg.cartan().fundamental_weights();
        return fw
            .get(i.wrapping_sub(1))
            .cloned()
            .ok_or(format!("fundamental index {i} out of range"));
    }
    if s == "rho" {
        return Ok(alg.cartan().weyl_vector());
    }
    let coords: Result<Vec<_>, String> = s
        .split(',')
        .map(|x| parse_q(x.trim()).ok_or(format!("cannot parse rational '{x}'")))
        .collect();
    let coords = coords?;
    if coords.len() != alg.rank() {
        return Err(format!("weight '{s}' does not match rank {}", alg.rank()));
    }
    Ok(Weight::new(coords))
}

fn parse_group_params(s: &str) -> Result<unirep::GroupParams, String> {
    let mut w = Complex64::new(0.0, 0.0);
    let mut r = 0.0f64;
    for part in s.split(',') {
        let (key, val) = part
            .split_once('=')
            .ok_or(format!("expected key=value in '{part}'"))?;
        match key.trim() {
            "w" => w = parse_complex(val.trim())?,
            "r" => {
                r = val
                    .trim()
                    .parse()
                    .map_err(|e| format!("cannot parse r '{val}': {e}"))?
            }
            other => return Err(format!("unknown parameter '{other}'")),
        }
    }
    unirep::GroupParams::new(w, r).map_err(|e| e.to_string())
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    // forms: "a", "bi", "a+bi", "a-bi"
    let s = s.trim();
    if let Some(body) = s.strip_suffix('i') {
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'e' {
                split = Some(i);
                break;
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i]
                    .parse()
                    .map_err(|e| format!("bad real part '{}': {e}", &body[..i]))?;
                let im_str = &body[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|e| format!("bad imaginary part '{im_str}': {e}"))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else {
                    body.parse()
                        .map_err(|e| format!("bad imaginary part '{body}': {e}"))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|e| format!("bad number '{s}': {e}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn emit(cfg: &RunConfig, content: &str) -> Result<(), String> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn with_hash(cfg: &RunConfig, mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.insert("config_hash".into(), json!(cfg.hash()));
    }
    v
}

fn triple_for(
    alg: &Algebra,
    cfg_alpha: Option<&str>,
    word: Option<&str>,
    real: bool,
    principal: bool,
) -> Result<So21Triple, String> {
    if principal {
        return So21Triple::build_principal(alg).map_err(|e| e.to_string());
    }
    let alpha_str = cfg_alpha.ok_or("--alpha is required unless --principal is given")?;
    let alpha = parse_root(alpha_str, alg.rank())?;
    let witness = match word {
        Some(wstr) => parse_word(alg, wstr)?,
        None => so21::canonical_witness(alg, &alpha).map_err(|e| e.to_string())?,
    };
    if real {
        So21Triple::build_real(alg, &alpha, &witness).map_err(|e| e.to_string())
    } else {
        So21Triple::build_imaginary(alg, &alpha, &witness).map_err(|e| e.to_string())
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let cfg = RunConfig::build(&Overrides {
        cartan: cli.cartan,
        config: cli.config,
        cutoff: cli.cutoff,
        window: cli.window,
        tol: cli.tol,
        format: cli.format,
        out: cli.out,
        max_exact_height: cli.max_exact_height,
    })
    .map_err(|e| e.to_string())?;
    let alg = cfg.algebra();

    match cli.cmd {
        Cmd::Roots { max_height } => {
            let roots = alg.enumerate_roots(max_height);
            match cfg.format {
                OutputFormat::Svg => {
                    emit(&cfg, &svg::roots_diagram(alg.cartan(), &roots))?;
                }
                OutputFormat::Json => {
                    let v = json!({
                        "version": 1,
                        "max_height": max_height,
                        "roots": roots.iter().map(|(r, m)| json!({
                            "root": r.0,
                            "mult": m.to_string(),
                            "norm": fmt_q(&alg.cartan().inner_root(r, r).unwrap()),
                        })).collect::<Vec<_>>(),
                    });
                    emit(
                        &cfg,
                        &serde_json::to_string_pretty(&with_hash(&cfg, v)).unwrap(),
                    )?;
                }
                OutputFormat::Csv => {
                    let mut s = String::from("root,mult,norm\n");
                    for (r, m) in &roots {
                        s.push_str(&format!(
                            "\"{}\",{},{}\n",
                            r,
                            m,
                            fmt_q(&alg.cartan().inner_root(r, r).unwrap())
                        ));
                    }
                    emit(&cfg, &s)?;
                }
                OutputFormat::Text => {
                    let mut s = format!("positive roots up to height {max_height}\n");
                    for (r, m) in &roots {
                        let norm = alg.cartan().inner_root(r, r).unwrap();
                        let kind = if norm.is_positive() { "real" } else { "imaginary" };
                        s.push_str(&format!(
                            "  {r}  mult {m:>6}  norm {:>5}  {kind}\n",
                            fmt_q(&norm)
                        ));
                    }
                    emit(&cfg, s.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bracket { x, y } => {
            let ex = parse_element(&alg, &x).map_err(|e| e.to_string())?;
            let ey = parse_element(&alg, &y).map_err(|e| e.to_string())?;
            let v = alg.bracket(&ex, &ey).map_err(|e| e.to_string())?;
            match cfg.format {
                OutputFormat::Json => {
                    let out = json!({"version": 1, "bracket": v.to_string()});
                    emit(
                        &cfg,
                        &serde_json::to_string_pretty(&with_hash(&cfg, out)).unwrap(),
                    )?;
                }
                _ => emit(&cfg, &v.to_string())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Form { x, y, bilinear } => {
            let ex = parse_element(&alg, &x).map_err(|e| e.to_string())?;
            let ey = parse_element(&alg, &y).map_err(|e| e.to_string())?;
            let v = if bilinear {
                alg.bilinear_form(&ex, &ey)
            } else {
                alg.contravariant_form(&ex, &ey)
            };
            emit(&cfg, &fmt_q(&v))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::So21 {
            alpha,
            word,
            real,
            principal,
        } => {
            let t = triple_for(&alg, alpha.as_deref(), word.as_deref(), real, principal)?;
            let (ladder, j3n) = t.norms_sq(&alg);
            let v = json!({
                "version": 1,
                "kind": match t.kind {
                    kmlie::TripleKind::ImaginaryRoot => "imaginary-root",
                    kmlie::TripleKind::RealRoot => "real-root",
                    kmlie::TripleKind::Principal => "principal",
                },
                "alpha": t.alpha.as_ref().map(|a| a.0.clone()),
                "witness": t.e_raw.to_string(),
                "n": fmt_q(&t.n_value),
                "alpha_sq": t.alpha_sq.as_ref().map(fmt_q),
                "c_sq": fmt_q(&t.kappa),
                "j3": t.j3.to_string(),
                "ladder_norm_sq": fmt_q(&ladder),
                "j3_norm_sq": fmt_q(&j3n),
            });
            match cfg.format {
                OutputFormat::Json => emit(
                    &cfg,
                    &serde_json::to_string_pretty(&with_hash(&cfg, v)).unwrap(),
                )?,
                _ => {
                    let mut s = String::new();
                    s.push_str(&format!("kind     : {}\n", v["kind"].as_str().unwrap()));
                    if let Some(a) = &t.alpha {
                        s.push_str(&format!("alpha    : {a}\n"));
                    }
                    s.push_str(&format!("witness  : {}\n", t.e_raw));
                    s.push_str(&format!("N        : {}\n", fmt_q(&t.n_value)));
                    if let Some(a2) = &t.alpha_sq {
                        s.push_str(&format!("alpha^2  : {}\n", fmt_q(a2)));
                    }
                    s.push_str(&format!("c^2      : {}\n", fmt_q(&t.kappa)));
                    s.push_str(&format!("J3       : {}\n", t.j3));
                    s.push_str(&format!(
                        "norms    : |J+-|^2 = {}, |J3|^2 = {}",
                        fmt_q(&ladder),
                        fmt_q(&j3n)
                    ));
                    emit(&cfg, &s)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decompose { what } => run_decompose(&cfg, &alg, what),
        Cmd::Conjecture {
            alpha,
            max_alpha_height,
        } => {
            let mut list = Vec::new();
            if alpha.is_empty() {
                for (root, _) in alg.enumerate_roots(max_alpha_height) {
                    if matches!(alg.cartan().classify_norm(&root), Ok(NormClass::Timelike)) {
                        let w = so21::canonical_witness(&alg, &root).map_err(|e| e.to_string())?;
                        list.push((root, w));
                    }
                }
            } else {
                for a in &alpha {
                    let root = parse_root(a, alg.rank())?;
                    let w = so21::canonical_witness(&alg, &root).map_err(|e| e.to_string())?;
                    list.push((root, w));
                }
            }
            let rep = so21::conjecture_scan(&alg, &list, cfg.cutoff, cfg.window)
                .map_err(|e| e.to_string())?;
            match cfg.format {
                OutputFormat::Json => emit(
                    &cfg,
                    &serde_json::to_string_pretty(&with_hash(&cfg, rep.to_json())).unwrap(),
                )?,
                _ => {
                    let mut s = format!(
                        "conjecture scan: {} roots, cutoff {}, window {}\n",
                        rep.entries.len(),
                        rep.cutoff,
                        rep.window
                    );
                    for e in &rep.entries {
                        s.push_str(&format!(
                            "  alpha {}  witness {}  continuous {}  complementary: {}\n",
                            e.alpha,
                            e.witness,
                            e.continuous
                                .iter()
                                .map(|(p, o, _)| format!(
                                    "(p={}, Omega={})",
                                    fmt_q(p),
                                    o.as_ref().map(fmt_q).unwrap_or("block".into())
                                ))
                                .collect::<Vec<_>>()
                                .join(" "),
                            e.complementary_found
                        ));
                    }
                    s.push_str(&format!(
                        "verdict: {}",
                        if rep.verdict_no_complementary {
                            "no complementary series within the verified windows"
                        } else {
                            "complementary series FOUND"
                        }
                    ));
                    emit(&cfg, &s)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Unirep { what } => run_unirep(&cfg, what),
        Cmd::Verify { suite, list } => {
            if list {
                emit(&cfg, &checks::all_suites().join("\n"))?;
                return Ok(ExitCode::SUCCESS);
            }
            if let Some(s) = &suite {
                if !checks::all_suites().contains(&s.as_str()) {
                    return Err(format!(
                        "unknown suite '{s}'; available: {}",
                        checks::all_suites().join(", ")
                    ));
                }
            }
            let results = checks::run(&alg, suite.as_deref());
            let failed = results.iter().filter(|r| !r.ok).count();
            match cfg.format {
                OutputFormat::Json => emit(
                    &cfg,
                    &serde_json::to_string_pretty(&with_hash(
                        &cfg,
                        checks::summary_json(&results),
                    ))
                    .unwrap(),
                )?,
                _ => {
                    let mut s = String::new();
                    for r in &results {
                        s.push_str(&format!(
                            "{} {:14} {:28} {}\n",
                            if r.ok { "PASS" } else { "FAIL" },
                            r.suite,
                            r.name,
                            r.detail
                        ));
                    }
                    s.push_str(&format!(
                        "{} passed, {} failed",
                        results.len() - failed,
                        failed
                    ));
                    emit(&cfg, &s)?;
                }
            }
            Ok(if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Figures {
            out_dir,
            max_height,
            depth,
        } => {
            std::fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
            let roots = alg.enumerate_roots(max_height);
            std::fs::write(
                out_dir.join("roots.svg"),
                svg::roots_diagram(alg.cartan(), &roots),
            )
            .map_err(|e| e.to_string())?;
            for (name, lam) in [
                ("weights_rho.svg", alg.cartan().weyl_vector()),
                (
                    "weights_fund1.svg",
                    alg.cartan().fundamental_weights()[0].clone(),
                ),
            ] {
                let table = weights::weight_table(&alg, &lam, depth).map_err(|e| e.to_string())?;
                std::fs::write(out_dir.join(name), svg::weight_diagram(&table))
                    .map_err(|e| e.to_string())?;
            }
            println!("wrote {}", out_dir.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_decompose(cfg: &RunConfig, alg: &Algebra, what: DecomposeCmd) -> Result<ExitCode, String> {
    match what {
        DecomposeCmd::Adjoint {
            alpha,
            word,
            principal,
        } => {
            let t = triple_for(alg, alpha.as_deref(), word.as_deref(), false, principal)?;
            let rep = so21::decompose_adjoint(alg, &t, cfg.cutoff, cfg.window)
                .map_err(|e| e.to_string())?;
            let diagnostics = !rep.diagnostics.is_empty() || !rep.accounting_ok;
            match cfg.format {
                OutputFormat::Json => emit(
                    cfg,
                    &serde_json::to_string_pretty(&with_hash(cfg, rep.to_json())).unwrap(),
                )?,
                _ => {
                    let mut s = String::new();
                    s.push_str(&format!(
                        "adjoint decomposition, cutoff {}, window {}\n",
                        rep.cutoff, rep.window
                    ));
                    s.push_str(&format!("J3 = {}\n", rep.j3));
                    s.push_str(&format!(
                        "singlets: {} {:?}\n",
                        rep.singlets, rep.singlet_witnesses
                    ));
                    s.push_str("discrete lowest-weight heads (mirrored on the highest side):\n");
                    for d in &rep.discrete {
                        s.push_str(&format!(
                            "  at {}  s = {}  mult {}\n",
                            d.root,
                            fmt_q(&d.s),
                            d.mult
                        ));
                    }
                    s.push_str("principal strips:\n");
                    for p in &rep.principal {
                        s.push_str(&format!(
                            "  rep {:?}  p = {}  Omega = {}  mult {}  window {}  unbroken {}\n",
                            p.rep,
                            fmt_q(&p.p),
                            p.omega.as_ref().map(fmt_q).unwrap_or("block".into()),
                            p.mult,
                            p.window,
                            p.unbroken
                        ));
                    }
                    if !rep.trivial.is_empty() {
                        s.push_str(&format!("trivial blocks: {}\n", rep.trivial.len()));
                    }
                    for d in &rep.diagnostics {
                        s.push_str(&format!("diagnostic: {d}\n"));
                    }
                    s.push_str(&format!(
                        "accounting: {}",
                        if rep.accounting_ok { "balanced" } else { "FAILED" }
                    ));
                    emit(cfg, &s)?;
                }
            }
            Ok(if diagnostics {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        DecomposeCmd::Hw {
            lambda,
            alpha,
            word,
            depth,
        } => {
            let lam = parse_lambda(alg, &lambda)?;
            let t = triple_for(alg, Some(&alpha), word.as_deref(), false, false)?;
            let step_height = t.alpha.as_ref().expect("imaginary triple").height();
            let table_depth = depth.checked_mul(step_height).ok_or("depth overflow")?;
            let table =
                weights::weight_table(alg, &lam, table_depth).map_err(|e| e.to_string())?;
            let dec = weights::decompose_hw(alg, &t, &table).map_err(|e| e.to_string())?;
            match cfg.format {
                OutputFormat::Json => emit(
                    cfg,
                    &serde_json::to_string_pretty(&with_hash(cfg, dec.to_json())).unwrap(),
                )?,
                OutputFormat::Csv => emit(cfg, &table.to_csv())?,
                OutputFormat::Svg => emit(cfg, &svg::weight_diagram(&table))?,
                OutputFormat::Text => {
                    let mut s = format!(
                        "highest-weight decomposition, lambda = {}, depth {} steps\n",
                        lam, depth
                    );
                    for c in &dec.columns {
                        s.push_str(&format!(
                            "  column top offset {:?}: s_top = {}, mults {:?}, new copies {:?}\n",
                            c.top_offset,
                            fmt_q(&c.s_top),
                            c.mults.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                            c.counts.iter().map(|m| m.to_string()).collect::<Vec<_>>()
                        ));
                    }
                    s.push_str("aggregated highest-weight discrete series:\n");
                    for (sv, count) in &dec.by_s {
                        s.push_str(&format!("  s = {sv}: {count}\n"));
                    }
                    emit(cfg, s.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        DecomposeCmd::Real { simple, word } => {
            if simple == 0 || simple > alg.rank() {
                return Err(format!("--simple {simple} out of range 1..={}", alg.rank()));
            }
            let alpha = RootVector::simple(simple - 1, alg.rank());
            let witness = match word {
                Some(w) => parse_word(alg, &w)?,
                None => alg.e(&[simple]).map_err(|e| e.to_string())?,
            };
            let t = So21Triple::build_real(alg, &alpha, &witness).map_err(|e| e.to_string())?;
            let rep = so21::decompose_real_root(alg, &t, cfg.cutoff).map_err(|e| e.to_string())?;
            match cfg.format {
                OutputFormat::Json => emit(
                    cfg,
                    &serde_json::to_string_pretty(&with_hash(cfg, rep.to_json())).unwrap(),
                )?,
                _ => {
                    let mut s = format!("real-root decomposition along {}\n", rep.alpha);
                    s.push_str(&format!(
                        "Cartan string: {}  trivial witnesses {:?}\n",
                        rep.cartan_modules
                            .iter()
                            .map(|(m, c)| format!("{c} x V({m})"))
                            .collect::<Vec<_>>()
                            .join(" + "),
                        rep.cartan_trivial_witnesses
                    ));
                    for st in &rep.strings {
                        s.push_str(&format!(
                            "  string at {}: mults {:?} -> {}{}\n",
                            st.cells[0].0,
                            st.cells.iter().map(|(_, m)| *m).collect::<Vec<_>>(),
                            st.modules
                                .iter()
                                .rev()
                                .map(|(m, c)| format!("{c} x V({m})"))
                                .collect::<Vec<_>>()
                                .join(" + "),
                            if st.beyond_cutoff {
                                " (extends beyond cutoff)"
                            } else {
                                ""
                            }
                        ));
                    }
                    emit(cfg, s.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_unirep(cfg: &RunConfig, what: UnirepCmd) -> Result<ExitCode, String> {
    match what {
        UnirepCmd::Matrix {
            model,
            s,
            q,
            p,
            params,
            range,
            cover,
            sheet,
        } => {
            let gp = parse_group_params(&params)?;
            let mut g = unirep::sl2_from_params(&gp);
            g.n_cover = cover.max(1);
            g.sheet = sheet % cover.max(1);
            let model = match model.as_str() {
                "disk" => unirep::Model::Disk {
                    s: s.ok_or("--s is required for the disk model")?,
                },
                "line" => unirep::Model::Line {
                    q: q.ok_or("--q is required for the line model")?,
                    p,
                },
                other => return Err(format!("unknown model '{other}' (disk|line)")),
            };
            let m = unirep::group_matrix(model, &g, range, cfg.tol).map_err(|e| e.to_string())?;
            let summary = format!(
                "matrix computed: range {}, margin {}, interior unitarity defect {:.3e}",
                m.range, m.margin, m.defect
            );
            let json = serde_json::to_string_pretty(&with_hash(cfg, m.to_json())).unwrap();
            match (&cfg.out, cfg.format) {
                // an output path always receives the matrix itself
                (Some(_), _) => {
                    emit(cfg, &json)?;
                    println!("{summary}");
                }
                (None, OutputFormat::Text) => println!("{summary}"),
                (None, _) => println!("{json}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        UnirepCmd::Check { model, s, q } => {
            let report = match model.as_str() {
                "disk" => {
                    let s = s.unwrap_or(2.0);
                    let rep = unirep::diffops::check_discrete(s, 3);
                    let m = unirep::models::DiscreteModel::new(s).map_err(|e| e.to_string())?;
                    json!({
                        "version": 1,
                        "model": "disk",
                        "s": s,
                        "norm_integral_direct": m.norm_integral_direct(),
                        "eigen_residual": rep.eigen,
                        "ladder_residual": rep.ladder,
                        "casimir_residual": rep.casimir,
                        "bracket_residual": rep.bracket,
                        "points": rep.points,
                    })
                }
                "line" => {
                    let q = q.unwrap_or(12f64.sqrt());
                    let rep = unirep::diffops::check_principal(q, &[0.0, 1.0, -1.0, 0.5]);
                    json!({
                        "version": 1,
                        "model": "line",
                        "q": q,
                        "eigen_residual": rep.eigen,
                        "ladder_residual": rep.ladder,
                        "points": rep.points,
                    })
                }
                other => return Err(format!("unknown model '{other}' (disk|line)")),
            };
            match cfg.format {
                OutputFormat::Json => emit(
                    cfg,
                    &serde_json::to_string_pretty(&with_hash(cfg, report)).unwrap(),
                )?,
                _ => {
                    let mut s = String::new();
                    for (k, v) in report.as_object().unwrap() {
                        s.push_str(&format!("{k}: {v}\n"));
                    }
                    emit(cfg, s.trim_end())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
