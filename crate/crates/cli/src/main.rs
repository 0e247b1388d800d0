//! `stringtop`: parse algebra presentations, run string-topology
//! computations, print aligned tables and optionally a machine-readable
//! document.
//!
//! Exit codes: 0 success or verdict-pass, 1 verdict-fail, 2 usage or parse
//! error, 3 insufficient truncation.

mod report;

use clap::{Parser, Subcommand};
use report::ResultDocument;
use std::path::PathBuf;
use std::process::ExitCode;
use stringtop::graded::{Degree, DegreeRange};
use stringtop::ops;
use stringtop::parse::{parse_algebra, AlgebraFile};

#[derive(Parser)]
#[command(name = "stringtop", version, about = "string topology workbench over the rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, clap::Args)]
struct CommonArgs {
    /// Algebra presentation file.
    algebra: PathBuf,
    /// Truncation degree; required for anything touching an infinite model.
    #[arg(long)]
    max_degree: Option<Degree>,
    /// Write a structured document to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Poincaré duality axioms of a finite algebra.
    CheckPd(CommonArgs),
    /// Betti numbers of the algebra itself.
    Betti(CommonArgs),
    /// Betti numbers of the free loop space.
    LoopBetti(CommonArgs),
    /// Loop product table through the given total degree.
    LoopProduct(CommonArgs),
    /// Loop coproduct model and its Euler-characteristic criterion.
    LoopCoproduct(CommonArgs),
    /// Intersection-with-the-fiber ranks; optionally cross-checked against a
    /// Sullivan model.
    FiberIntersection {
        #[command(flatten)]
        common: CommonArgs,
        /// Sullivan model file for the rank cross-check.
        #[arg(long)]
        sullivan: Option<PathBuf>,
    },
    /// Diagonal class of a duality algebra.
    DiagonalClass(CommonArgs),
    /// Exhaustive module-property check of the loop product.
    ModuleProperty(CommonArgs),
    /// Loop product triviality for a classifying-space presentation.
    BgLoopProduct(CommonArgs),
    /// Dual-coproduct surjectivity for a classifying-space presentation.
    BgLoopCoproduct(CommonArgs),
    /// Diagonal Ext dimensions and the shifted-cohomology pattern match.
    ExtDiagonal {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of copies in the tensor power.
        #[arg(long, default_value_t = 2)]
        copies: usize,
        /// Expected formal dimension; inferred when omitted.
        #[arg(long)]
        formal_dimension: Option<Degree>,
    },
}

const EXIT_OK: u8 = 0;
const EXIT_VERDICT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TRUNCATION: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.contains("insufficient truncation") {
                EXIT_TRUNCATION
            } else {
                EXIT_USAGE
            }
        }
    };
    eprintln!("elapsed: {} ms", started.elapsed().as_millis());
    ExitCode::from(code)
}

fn load(path: &PathBuf) -> Result<(AlgebraFile, String), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("parse: cannot read {}: {e}", path.display()))?;
    let parsed = parse_algebra(&text).map_err(|e| format!("parse: {e}"))?;
    Ok((parsed, text))
}

/// Required truncation for infinite models; the file-level default applies
/// when the flag is absent.
fn need_truncation(common: &CommonArgs, file: &AlgebraFile) -> Result<Degree, String> {
    common
        .max_degree
        .or_else(|| file.truncation())
        .ok_or_else(|| "usage: --max-degree is required for this computation".to_string())
}

/// Like [`need_truncation`], but a finite algebra supplies its own default:
/// its top degree plus the operation's degree shift.
fn truncation_with_finite_default(
    common: &CommonArgs,
    file: &AlgebraFile,
    shift: Degree,
) -> Result<Degree, String> {
    if let Some(n) = common.max_degree.or_else(|| file.truncation()) {
        return Ok(n);
    }
    match file {
        AlgebraFile::FinitePd { algebra, .. } => {
            Ok(algebra.basis().max_degree().unwrap_or(0) + shift)
        }
        _ => Err("usage: --max-degree is required for this computation".to_string()),
    }
}

fn thread_cap() -> usize {
    std::env::var("STRINGTOP_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0)
}

/// Degreewise homology fan-out, capped by STRINGTOP_THREADS.
fn betti_by_degree(
    complex: &stringtop::graded::ChainComplex<stringtop::Rat>,
    max_degree: Degree,
) -> Result<Vec<usize>, String> {
    let threads = thread_cap();
    let degrees: Vec<Degree> = (0..=max_degree).collect();
    if threads < 2 {
        let h = complex
            .homology(DegreeRange::new(0, max_degree))
            .map_err(|e| format!("{e}"))?;
        return Ok(degrees.iter().map(|&p| h.betti(p)).collect());
    }
    let chunk = degrees.len().div_ceil(threads);
    let mut out = vec![0usize; degrees.len()];
    std::thread::scope(|scope| -> Result<(), String> {
        let mut handles = Vec::new();
        for slab in degrees.chunks(chunk) {
            let slab = slab.to_vec();
            handles.push(scope.spawn(move || -> Result<Vec<(Degree, usize)>, String> {
                let mut res = Vec::new();
                for p in slab {
                    let h = complex
                        .homology(DegreeRange::new(p, p))
                        .map_err(|e| format!("{e}"))?;
                    res.push((p, h.betti(p)));
                }
                Ok(res)
            }));
        }
        for h in handles {
            for (p, b) in h.join().expect("worker panicked")? {
                out[p as usize] = b;
            }
        }
        Ok(())
    })?;
    Ok(out)
}

fn print_betti_table(degrees: &[Degree], betti: &[usize]) {
    println!("{:>8} {:>8}", "degree", "betti");
    for (d, b) in degrees.iter().zip(betti) {
        println!("{d:>8} {b:>8}");
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::CheckPd(common) => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => return Err(format!("usage: check-pd needs a finite-pd file, got {}", other.kind())),
            };
            let verdict = algebra.check_poincare_duality().map_err(|e| format!("{e}"))?;
            let mut doc = ResultDocument::new("check-pd", &text, None);
            match &verdict {
                stringtop::pd::PdVerdict::Pass => {
                    println!("duality axioms: pass");
                    doc.verdict("duality", "pass");
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_OK)
                }
                stringtop::pd::PdVerdict::FailAxiomI { reason } => {
                    println!("duality axioms: FAIL — {reason}");
                    doc.verdict("duality", &format!("fail: {reason}"));
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_VERDICT_FAIL)
                }
                stringtop::pd::PdVerdict::FailAxiomII { degree, rank_defect } => {
                    println!(
                        "duality axioms: FAIL — axiom (ii): pairing degenerates in degree {degree} (rank defect {rank_defect})"
                    );
                    doc.verdict(
                        "duality",
                        &format!("fail: axiom (ii) at degree {degree}, rank defect {rank_defect}"),
                    );
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_VERDICT_FAIL)
                }
            }
        }
        Command::Betti(common) => {
            let (file, text) = load(&common.algebra)?;
            let (complex, max) = match &file {
                AlgebraFile::Sullivan { algebra, .. } => {
                    let n = need_truncation(&common, &file)?;
                    let (cx, _) = algebra.cochain_complex(n + 1).map_err(|e| format!("{e}"))?;
                    (cx, n)
                }
                AlgebraFile::FinitePd { algebra, .. } => {
                    let n = common
                        .max_degree
                        .or_else(|| file.truncation())
                        .unwrap_or_else(|| algebra.basis().max_degree().unwrap_or(0));
                    (algebra.complex(), n)
                }
                AlgebraFile::Bg { presentation, .. } => {
                    let n = need_truncation(&common, &file)?;
                    let (cx, _) =
                        presentation.model().cochain_complex(n + 1).map_err(|e| format!("{e}"))?;
                    (cx, n)
                }
            };
            let betti = betti_by_degree(&complex, max)?;
            let degrees: Vec<Degree> = (0..=max).collect();
            print_betti_table(&degrees, &betti);
            let mut doc = ResultDocument::new("betti", &text, Some(max));
            doc.betti(&degrees, &betti);
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::LoopBetti(common) => {
            let (file, text) = load(&common.algebra)?;
            let n = truncation_with_finite_default(&common, &file, 0)?;
            let table = match &file {
                AlgebraFile::Sullivan { algebra, .. } => {
                    ops::loop_betti_sullivan(algebra, n).map_err(|e| format!("{e}"))?
                }
                AlgebraFile::FinitePd { algebra, .. } => {
                    ops::loop_betti_hochschild(algebra, n).map_err(|e| format!("{e}"))?
                }
                AlgebraFile::Bg { presentation, .. } => {
                    ops::loop_betti_sullivan(&presentation.model(), n)
                        .map_err(|e| format!("{e}"))?
                }
            };
            let degrees: Vec<Degree> = (0..=n).collect();
            let betti = table.betti_vec();
            print_betti_table(&degrees, &betti);
            for (d, reps) in &table.representatives {
                for (i, r) in reps.iter().enumerate() {
                    println!("  h{d}_{i} = [{r}]");
                }
            }
            let mut doc = ResultDocument::new("loop-betti", &text, Some(n));
            doc.betti(&degrees, &betti);
            for (d, reps) in &table.representatives {
                for (i, r) in reps.iter().enumerate() {
                    doc.table_entry("classes", &format!("h{d}_{i}"), r);
                }
            }
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::LoopProduct(common) => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => {
                    return Err(format!(
                        "usage: loop-product needs a finite-pd file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = truncation_with_finite_default(&common, &file, algebra.dimension())?;
            let dlp = ops::dual_loop_product(algebra, n).map_err(|e| format!("{e}"))?;
            println!("loop product on H_*(L·), degree shift -{} (classes through degree {n}):", dlp.m);
            let mut doc = ResultDocument::new("loop-product", &text, Some(n));
            let mut any = false;
            for ((b, c), value) in &dlp.table.entries {
                let lhs = format!(
                    "{} • {}",
                    ops::ProductTable::label(*b),
                    ops::ProductTable::label(*c)
                );
                let rhs: Vec<String> = value
                    .iter()
                    .map(|(g, coeff)| {
                        if coeff == &stringtop::rat(1) {
                            ops::ProductTable::label(*g)
                        } else {
                            format!("{coeff}*{}", ops::ProductTable::label(*g))
                        }
                    })
                    .collect();
                println!("{:>20} = {}", lhs, rhs.join(" + "));
                doc.table_entry("product", &lhs, &rhs.join(" + "));
                any = true;
            }
            if !any {
                println!("  (all products vanish through this truncation)");
            }
            doc.verdict(
                "nontrivial",
                if dlp.table.is_trivial() { "no" } else { "yes" },
            );
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::LoopCoproduct(common) => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => {
                    return Err(format!(
                        "usage: loop-coproduct needs a finite-pd file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = truncation_with_finite_default(&common, &file, algebra.dimension())?;
            let report = ops::loop_coproduct_psi(algebra, n).map_err(|e| format!("{e}"))?;
            let mut doc = ResultDocument::new("loop-coproduct", &text, Some(n));
            println!("Euler characteristic: {}", report.euler_characteristic);
            println!("ψ(1⊗1⊗c) = {}·Ω⊗c on every fiber monomial c", report.omega_coefficient);
            doc.verdict("euler-characteristic", &report.euler_characteristic.to_string());
            doc.verdict("omega-coefficient", &report.omega_coefficient.to_string());
            if report.trivial {
                println!("verdict: trivial (χ = 0)");
                doc.verdict("coproduct", "trivial");
            } else {
                println!("verdict: nontrivial (χ = {})", report.euler_characteristic);
                doc.verdict("coproduct", "nontrivial");
            }
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::FiberIntersection { common, sullivan } => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => {
                    return Err(format!(
                        "usage: fiber-intersection needs a finite-pd file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = truncation_with_finite_default(&common, &file, algebra.dimension())?;
            let report = ops::intersection_with_fiber(algebra, n).map_err(|e| format!("{e}"))?;
            println!("{:>8} {:>8} {:>8}", "degree", "rank", "source");
            for p in 0..=n {
                println!(
                    "{p:>8} {:>8} {:>8}",
                    report.ranks.get(&p).unwrap_or(&0),
                    report.source_betti.get(&p).unwrap_or(&0)
                );
            }
            match report.injective_through {
                Some(d) => println!("injective through degree {d}"),
                None => println!("not injective in degree 0"),
            }
            let mut doc = ResultDocument::new("fiber-intersection", &text, Some(n));
            for p in 0..=n {
                doc.table_entry(
                    "ranks",
                    &p.to_string(),
                    &report.ranks.get(&p).unwrap_or(&0).to_string(),
                );
            }
            let mut code = EXIT_OK;
            if let Some(model_path) = sullivan {
                let (model_file, _) = load(&model_path)?;
                let model = match &model_file {
                    AlgebraFile::Sullivan { algebra, .. } => algebra.clone(),
                    other => {
                        return Err(format!(
                            "usage: --sullivan needs a sullivan file, got {}",
                            other.kind()
                        ))
                    }
                };
                let sull =
                    ops::sullivan_fiber_ranks(&model, algebra, n).map_err(|e| format!("{e}"))?;
                if sull.ranks == report.ranks {
                    println!("Sullivan-side ranks agree degreewise");
                    doc.verdict("cross-check", "ranks agree");
                } else {
                    println!("Sullivan-side ranks DISAGREE");
                    doc.verdict("cross-check", "ranks disagree");
                    code = EXIT_VERDICT_FAIL;
                }
            }
            doc.write(common.json.as_deref())?;
            Ok(code)
        }
        Command::DiagonalClass(common) => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => {
                    return Err(format!(
                        "usage: diagonal-class needs a finite-pd file, got {}",
                        other.kind()
                    ))
                }
            };
            let data = algebra.diagonal_class().map_err(|e| format!("{e}"))?;
            let basis = &data.tensor.table.basis;
            let parts: Vec<String> = data
                .class
                .coords
                .iter()
                .map(|(i, c)| {
                    let label = basis.label(data.class.degree, *i);
                    if c == &stringtop::rat(1) {
                        label.to_string()
                    } else {
                        format!("{c}*{label}")
                    }
                })
                .collect();
            let rendered = parts.join(" + ");
            println!("D = {rendered}");
            println!("cocycle and centrality (a⊗1)D = (1⊗a)D verified on every basis element");
            let mut doc = ResultDocument::new("diagonal-class", &text, None);
            doc.table_entry("diagonal", "D", &rendered);
            doc.verdict("central-cocycle", "verified");
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::ModuleProperty(common) => {
            let (file, text) = load(&common.algebra)?;
            let algebra = match &file {
                AlgebraFile::FinitePd { algebra, .. } => algebra,
                other => {
                    return Err(format!(
                        "usage: module-property needs a finite-pd file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = truncation_with_finite_default(&common, &file, algebra.dimension())?;
            let report = ops::check_module_property(algebra, n).map_err(|e| format!("{e}"))?;
            let mut doc = ResultDocument::new("module-property", &text, Some(n));
            match &report {
                ops::ModulePropertyReport::Pass { quadruples_checked } => {
                    println!("module property holds on all {quadruples_checked} quadruples of total degree ≤ {n}");
                    doc.verdict("module-property", &format!("pass ({quadruples_checked} quadruples)"));
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_OK)
                }
                ops::ModulePropertyReport::Counterexample { description } => {
                    println!("module property FAILS: {description}");
                    doc.verdict("module-property", &format!("fail: {description}"));
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_VERDICT_FAIL)
                }
            }
        }
        Command::BgLoopProduct(common) => {
            let (file, text) = load(&common.algebra)?;
            let g = match &file {
                AlgebraFile::Bg { presentation, .. } => presentation,
                other => {
                    return Err(format!(
                        "usage: bg-loop-product needs a bg file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = need_truncation(&common, &file)?;
            ops::bg_loop_product(g, n).map_err(|e| format!("{e}"))?;
            println!("loop product trivial up to degree {n}");
            let mut doc = ResultDocument::new("bg-loop-product", &text, Some(n));
            doc.verdict("loop-product", &format!("trivial up to degree {n}"));
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::BgLoopCoproduct(common) => {
            let (file, text) = load(&common.algebra)?;
            let g = match &file {
                AlgebraFile::Bg { presentation, .. } => presentation,
                other => {
                    return Err(format!(
                        "usage: bg-loop-coproduct needs a bg file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = need_truncation(&common, &file)?;
            ops::bg_loop_coproduct(g, n).map_err(|e| format!("{e}"))?;
            println!("dual coproduct surjective up to degree {n}; loop coproduct injective");
            let mut doc = ResultDocument::new("bg-loop-coproduct", &text, Some(n));
            doc.verdict(
                "dual-coproduct",
                &format!("surjective up to degree {n} (coproduct injective)"),
            );
            doc.write(common.json.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::ExtDiagonal { common, copies, formal_dimension } => {
            let (file, text) = load(&common.algebra)?;
            let model = match &file {
                AlgebraFile::Sullivan { algebra, .. } => algebra.clone(),
                AlgebraFile::Bg { presentation, .. } => presentation.model(),
                other => {
                    return Err(format!(
                        "usage: ext-diagonal needs a sullivan or bg file, got {}",
                        other.kind()
                    ))
                }
            };
            let n = need_truncation(&common, &file)?;
            let report = ops::ext_diagonal(&model, copies, n, formal_dimension)
                .map_err(|e| format!("{e}"))?;
            println!("{:>8} {:>8}", "degree", "dim");
            for (d, v) in &report.dims {
                println!("{d:>8} {v:>8}");
            }
            let mut doc = ResultDocument::new("ext-diagonal", &text, Some(n));
            let degrees: Vec<Degree> = report.dims.keys().copied().collect();
            let dims: Vec<usize> = report.dims.values().copied().collect();
            doc.betti(&degrees, &dims);
            match (&report.shift, &report.failure) {
                (Some(d), None) => {
                    println!("pattern: shifted model cohomology with formal dimension {d}");
                    doc.verdict("pattern", &format!("matched with formal dimension {d}"));
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_OK)
                }
                (_, Some(msg)) => {
                    println!("pattern: FALSIFIED — {msg}");
                    doc.verdict("pattern", &format!("falsified: {msg}"));
                    doc.write(common.json.as_deref())?;
                    Ok(EXIT_VERDICT_FAIL)
                }
                (None, None) => unreachable!("report without verdict"),
            }
        }
    }
}
