use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nilgrade::algebra::{Algebra, Nilpotency};
use nilgrade::check::{all_pass, Check};
use nilgrade::factory::{self, Family, MatrixShape, RandomParams};
use nilgrade::grading::{GradedHypotheses, Grading};
use nilgrade::group::FiniteGroup;
use nilgrade::instance::Instance;
use nilgrade::io::{self, Input, InstanceDocument, ReportDocument};
use nilgrade::linalg::{PrimeField, Subspace};
use nilgrade::par;
use nilgrade::pipeline::{self, InvariantHypotheses};
use nilgrade::tower::{self, TowerConfig, TowerError};

#[derive(Parser)]
#[command(name = "nilgrade", version, about = "Nilpotent ideals of graded algebras and algebras with group actions")]
struct Cli {
    /// Worker threads (default: NILGRADE_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every validator that applies to the document.
    Validate { file: PathBuf },
    /// Print the nilpotency index of a subspace, or NOT_NILPOTENT.
    Nilindex {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "algebra")]
        subspace: Target,
    },
    /// Print every bound constant for group order n and ideal index d.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
    },
    /// Build the centralizer tower and the graded ideal Z.
    Theorem2 {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        dump_tower: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recursive construction over a prime series of the acting group.
    Theorem1 {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare span-based levels with literal tuple enumeration.
    TowerOracle {
        file: PathBuf,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
        max_w: u64,
        #[arg(long, default_value_t = 2)]
        levels: usize,
    },
    /// Generate an instance.
    Gen {
        family: GenFamily,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// c<n> or s3.
        #[arg(long, default_value = "c2")]
        group: String,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 40)]
        max_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        max_arrows: usize,
        #[arg(long, default_value_t = 4)]
        truncation: usize,
        #[arg(long)]
        no_idempotents: bool,
        /// Minimum path length of the ideal; random when omitted.
        #[arg(long)]
        ideal_len: Option<usize>,
        /// Matrix size for the triangular family.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        strict: bool,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compare index(A) with h^d, d the index of the fixed subalgebra.
    BiCheck { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Algebra,
    Ideal,
    Identity,
    Fixed,
    Result,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Graded,
    Scaling,
    Orbit,
    Triangular,
}

/// Exit status: checks failed (1) or unusable input (2).
enum Failure {
    Checks(Value),
    Invalid(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli
        .threads
        .or_else(|| std::env::var("NILGRADE_THREADS").ok().and_then(|s| s.parse().ok()));
    let command = cli.command;
    let name = command_name(&command);
    let result = match threads {
        Some(t) => par::with_threads(t, move || run(command)),
        None => run(command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(block)) => {
            println!("{}", io::to_pretty(&json!({"status": "fail", "command": name, "failures": block})).trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Invalid(e)) => {
            let block = json!({"status": "error", "command": name, "kind": "invalid_input", "message": format!("{e:#}")});
            println!("{}", io::to_pretty(&block).trim_end());
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Nilindex { .. } => "nilindex",
        Command::Bounds { .. } => "bounds",
        Command::Theorem2 { .. } => "theorem2",
        Command::Theorem1 { .. } => "theorem1",
        Command::TowerOracle { .. } => "tower-oracle",
        Command::Gen { .. } => "gen",
        Command::BiCheck { .. } => "bi-check",
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Nilindex { file, subspace } => nilindex(&file, subspace),
        Command::Bounds { n, d } => {
            if n == 0 || d == 0 {
                return Err(Failure::Invalid(anyhow!("n and d must be positive")));
            }
            println!("{}", io::to_pretty(&tower::bounds_for(n, d)).trim_end());
            Ok(())
        }
        Command::Theorem2 {
            file,
            output,
            dump_tower,
            samples,
            seed,
        } => theorem2(&file, output.as_deref(), dump_tower.as_deref(), samples, seed),
        Command::Theorem1 {
            file,
            output,
            samples,
            seed,
        } => theorem1(&file, output.as_deref(), samples, seed),
        Command::TowerOracle { file, max_w, levels } => oracle(&file, max_w as usize, levels),
        Command::Gen {
            family,
            seed,
            group,
            p,
            max_dim,
            max_vertices,
            max_arrows,
            truncation,
            no_idempotents,
            ideal_len,
            k,
            strict,
            output,
        } => {
            let group = parse_group(&group)?;
            let field = p.map(PrimeField::new).transpose().map_err(|e| anyhow!("--p: {e}"))?;
            let inst = match family {
                GenFamily::Triangular => triangular(field.unwrap_or(PrimeField::new(5).expect("prime")), k, strict),
                _ => {
                    let params = RandomParams {
                        family: match family {
                            GenFamily::Graded => Family::Graded,
                            GenFamily::Scaling => Family::Scaling,
                            _ => Family::Orbit,
                        },
                        max_vertices,
                        max_arrows,
                        truncation,
                        idempotents: !no_idempotents,
                        max_dim,
                        ideal_min_len: ideal_len,
                    };
                    factory::gen_random(seed, &params, &group, field)?
                }
            };
            let text = io::emit_instance(&inst)?;
            io::write_atomic(&output, text.as_bytes()).with_context(|| format!("writing {}", output.display()))?;
            println!("wrote {} (dim {})", output.display(), inst.algebra.dim());
            Ok(())
        }
        Command::BiCheck { file } => {
            let (_, doc) = read_instance(&file)?;
            let inst = doc.to_instance()?;
            let action = inst.action.ok_or_else(|| anyhow!("bi-check needs an action block"))?;
            let report = pipeline::bergman_isaacs_check(&inst.algebra, &action)?;
            println!("{}", io::to_pretty(&report).trim_end());
            if report.holds {
                Ok(())
            } else {
                Err(Failure::Checks(json!([{"name": "index(A) ≤ h^d", "witness": report}])))
            }
        }
    }
}

fn parse_group(s: &str) -> anyhow::Result<FiniteGroup> {
    let s = s.to_ascii_lowercase();
    if let Some(k) = s.strip_prefix('s') {
        let k: usize = k.parse().context("group: expected s<k>")?;
        if !(1..=4).contains(&k) {
            bail!("symmetric groups up to s4 are supported");
        }
        return Ok(FiniteGroup::symmetric(k));
    }
    let n: usize = s.strip_prefix('c').unwrap_or(&s).parse().context("group: expected c<n> or s<k>")?;
    if n == 0 {
        bail!("group order must be positive");
    }
    Ok(FiniteGroup::cyclic(n))
}

/// Upper-triangular `k × k` matrices, `C2`-graded by parity of `j − i`, with
/// `I_e` the strictly upper part of `A_e`.
fn triangular(field: PrimeField, k: usize, strict: bool) -> Instance {
    let shape = if strict {
        MatrixShape::StrictUpper
    } else {
        MatrixShape::Upper
    };
    let a = factory::triangular(field, k, strict);
    let gr = factory::parity_grading(&a, k, shape);
    let units = factory::matrix_units(k, shape);
    let off_diagonal: Vec<usize> = (0..units.len()).filter(|&i| units[i].0 < units[i].1).collect();
    let strict_part = Subspace::coordinate(field, a.dim(), &off_diagonal);
    let ideal = gr.identity_component().intersect(&strict_part).expect("same ambient");
    Instance::graded(a, gr, ideal)
}

fn read(file: &Path) -> anyhow::Result<(Vec<u8>, String)> {
    let bytes = std::fs::read(file).with_context(|| format!("reading {}", file.display()))?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    Ok((bytes, text))
}

fn read_instance(file: &Path) -> anyhow::Result<(Vec<u8>, InstanceDocument)> {
    let (bytes, text) = read(file)?;
    Ok((bytes, io::parse_document(&text)?))
}

fn checks_outcome(checks: &[Check]) -> Outcome {
    for c in checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    if all_pass(checks) {
        Ok(())
    } else {
        let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
        Err(Failure::Checks(json!(failed)))
    }
}

fn validate(file: &Path) -> Outcome {
    let (_, text) = read(file)?;
    match io::parse_input(&text)? {
        Input::Instance(doc) => checks_outcome(&io::validate_document(&doc)?),
        Input::Report(report) => {
            let mut checks = io::validate_document(&report.instance)?;
            checks.extend(io::reverify_report(&report)?);
            checks_outcome(&checks)
        }
    }
}

fn print_index(n: Nilpotency) {
    match n {
        Nilpotency::Index(d) => println!("{d}"),
        Nilpotency::NotNilpotent { .. } => println!("NOT_NILPOTENT"),
    }
}

fn nilindex(file: &Path, target: Target) -> Outcome {
    let (_, text) = read(file)?;
    let (doc, result) = match io::parse_input(&text)? {
        Input::Instance(doc) => (doc, None),
        Input::Report(r) => {
            let r = *r;
            (r.instance, Some(r.report.ideal))
        }
    };
    let inst = doc.to_instance()?;
    let a = &inst.algebra;
    let s = match target {
        Target::Algebra => a.whole(),
        Target::Ideal => inst.ideal.clone().ok_or_else(|| anyhow!("document has no ideal"))?,
        Target::Identity => inst
            .grading
            .as_ref()
            .ok_or_else(|| anyhow!("document has no grading"))?
            .identity_component()
            .clone(),
        Target::Fixed => inst
            .action
            .as_ref()
            .ok_or_else(|| anyhow!("document has no action"))?
            .fixed_subalgebra(a),
        Target::Result => {
            let rows = result.ok_or_else(|| anyhow!("--subspace result needs a report document"))?;
            a.span(rows)?
        }
    };
    match a.nilpotency_index(&s) {
        Ok(n) => {
            print_index(n);
            Ok(())
        }
        Err(nilgrade::algebra::AlgebraError::NotMultiplicativelyClosed) => {
            println!("NOT_NILPOTENT");
            Ok(())
        }
        Err(e) => Err(e.into()),
    }
}

fn graded_hypotheses(inst: &Instance) -> anyhow::Result<(Grading, GradedHypotheses)> {
    let grading = inst
        .grading
        .clone()
        .ok_or_else(|| anyhow!("this command needs a grading block"))?;
    let ideal = inst.ideal.clone().unwrap_or_else(|| inst.algebra.zero_subspace());
    let hyp = GradedHypotheses::new(&inst.algebra, grading.clone(), ideal)?;
    Ok((grading, hyp))
}

fn emit_report(output: Option<&Path>, doc: &ReportDocument) -> anyhow::Result<()> {
    let text = io::to_pretty(doc);
    match output {
        Some(path) => {
            io::write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
            let r = &doc.report;
            println!(
                "wrote {}: ideal dim {}, codim {}, index {}, bound {}",
                path.display(),
                r.ideal_dim,
                r.achieved_codim,
                match r.achieved_index {
                    Nilpotency::Index(d) => d.to_string(),
                    Nilpotency::NotNilpotent { .. } => "NOT_NILPOTENT".into(),
                },
                r.index_bound
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn report_outcome(doc: &ReportDocument) -> Outcome {
    if doc.report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks(json!(doc.report.failed_checks().collect::<Vec<_>>())))
    }
}

fn theorem2(file: &Path, output: Option<&Path>, dump: Option<&Path>, samples: usize, seed: u64) -> Outcome {
    let (bytes, doc) = read_instance(file)?;
    let inst = doc.to_instance()?;
    let (_, hyp) = graded_hypotheses(&inst)?;
    let config = TowerConfig {
        samples,
        seed,
        ..TowerConfig::default()
    };
    let out = pipeline::theorem2_construct(&inst.algebra, &hyp, &config)?;
    if let Some(path) = dump {
        let text = io::to_pretty(&out.tower.dump(&inst.algebra));
        io::write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
    }
    let report = ReportDocument::new("theorem2", &bytes, doc, out.report);
    emit_report(output, &report)?;
    report_outcome(&report)
}

fn theorem1(file: &Path, output: Option<&Path>, samples: usize, seed: u64) -> Outcome {
    let (bytes, doc) = read_instance(file)?;
    let inst = doc.to_instance()?;
    let action = inst.action.clone().ok_or_else(|| anyhow!("theorem1 needs an action block"))?;
    let ideal = inst.ideal.clone().unwrap_or_else(|| inst.algebra.zero_subspace());
    let series = match inst.series.clone() {
        Some(s) => s,
        None => action.group().find_prime_series(256)?,
    };
    let hyp = InvariantHypotheses::new(&inst.algebra, action, ideal)?;
    let config = TowerConfig {
        samples,
        seed,
        ..TowerConfig::default()
    };
    let report = pipeline::theorem1_construct(&inst.algebra, &hyp, &series, &config)?;
    let report = ReportDocument::new("theorem1", &bytes, doc, report);
    emit_report(output, &report)?;
    report_outcome(&report)
}

fn oracle(file: &Path, max_w: usize, levels: usize) -> Outcome {
    let (_, doc) = read_instance(file)?;
    let inst = doc.to_instance()?;
    let (_, hyp) = graded_hypotheses(&inst)?;
    let a: &Algebra = &inst.algebra;
    let mut mismatches = Vec::new();
    for w in 1..=max_w {
        let config = TowerConfig {
            levels: Some(levels),
            width: Some(w as u64),
            ..TowerConfig::default()
        };
        let t = tower::build_tower(a, &hyp, &config)?;
        for s in 1..=levels {
            let brute = match tower::brute_force_level(a, &t, s, w, tower::DEFAULT_BUDGET) {
                Ok(b) => b,
                Err(e @ TowerError::Budget { .. }) => return Err(Failure::Invalid(e.into())),
                Err(e) => return Err(e.into()),
            };
            let same = brute == t.levels[s].components;
            println!("{} W={w} level={s}", if same { "MATCH" } else { "MISMATCH" });
            if !same {
                let grades: Vec<usize> = (0..brute.len()).filter(|&g| brute[g] != t.levels[s].components[g]).collect();
                mismatches.push(json!({"width": w, "level": s, "grades": grades}));
            }
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(json!(mismatches)))
    }
}
