//! `cinorm`: tables, reports and verification suites from the command line.
//!
//! Exit codes: 0 pass, 1 check failure, 2 usage error, 3 resource guard.

use cinorm::cache::{Cache, CacheOutcome};
use cinorm::displacement::{packing_number, verify_master_inequalities};
use cinorm::fcomm::{seven_fcommutators, two_commutator_witness, FCommEnvironment};
use cinorm::group::{Element, FiniteGroup, GroupDescriptor, SubgroupSpec, DEFAULT_LIMIT};
use cinorm::norms::{
    commutator_length, coset_extension_qnorm, qk_norm, quasinorm_to_norm, stabilization_upper, verify_norm_axioms,
    Norm, NormTable, SupportNorm, TrivialNorm, WreathSupportNorm,
};
use cinorm::quasimorphism::{counting_qm, defect, homogenize, scl_bounds, DefectMode, QuasiMorphism};
use cinorm::suites::{run_suite, SuiteConfig, SuiteRun, SUITES};
use cinorm::{par, rational, Error, Rational};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cinorm", version, about = "Conjugation-invariant norms on concrete groups")]
struct Cli {
    /// Worker threads; 0 uses RAYON_NUM_THREADS or the number of CPUs.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args, Clone)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Group descriptor, e.g. `an:5`, `wreath:sn:3:zn:3`, `bar:free:2`.
    #[arg(long)]
    group: String,
    /// Enumeration guard.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Conjugation-generated norm q_K as a table.
    Qk {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated element literals.
        #[arg(long)]
        k: String,
        #[arg(long)]
        no_cache: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Commutator length on the derived subgroup as a table.
    Cl {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        no_cache: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Commutator length diameter.
    Cld {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Exhaustive check of the five norm axioms.
    NormVerify {
        #[command(flatten)]
        group: GroupArgs,
        /// trivial, support, wreath-support, qk, cl or normalized-qnorm.
        #[arg(long)]
        norm: String,
        /// Conjugation generators for `--norm qk`.
        #[arg(long)]
        k: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Algebraic packing number p(G, H).
    Packing {
        #[command(flatten)]
        group: GroupArgs,
        /// Generators of H.
        #[arg(long)]
        h: String,
        /// Largest clique size searched.
        #[arg(long, default_value_t = 8)]
        m: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Displacement energies e_1..e_m and the displacement inequalities.
    Energy {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// trivial, support or wreath-support.
        #[arg(long, default_value = "support")]
        norm: String,
        #[command(flatten)]
        output: Output,
    },
    /// F-commutator decomposition of ∏_{i=m}^{1} [f_i, g_i] in a wreath product.
    Fcomm {
        #[command(flatten)]
        group: GroupArgs,
        /// f_1, …, f_m in the base group.
        #[arg(long)]
        f: String,
        /// g_1, …, g_m in the base group.
        #[arg(long)]
        g: String,
        #[command(flatten)]
        output: Output,
    },
    /// Quasi-morphism defects, homogenization and scl bounds.
    Qm {
        #[command(subcommand)]
        action: QmAction,
    },
    /// Upper bound for the stabilization lim ν(fⁿ)/n.
    Stabilize {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "support")]
        norm: String,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run a verification suite, or `all`.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        budget: Option<usize>,
        /// JSON file with `seed` and `budget`; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report file, or a directory when `--suite all`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write per-check wall-clock times here instead of stderr.
        #[arg(long)]
        timings: Option<PathBuf>,
    },
    /// Inspect or clear the norm-table cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Clone)]
struct QmArgs {
    /// A free group, e.g. `free:2`.
    #[arg(long, default_value = "free:2")]
    group: String,
    /// Counting pattern, e.g. `a b`.
    #[arg(long)]
    pattern: String,
}

#[derive(Subcommand)]
enum QmAction {
    Defect {
        #[command(flatten)]
        qm: QmArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Word length bound for samples.
        #[arg(long, default_value_t = 8)]
        size: usize,
        #[command(flatten)]
        output: Output,
    },
    Homogenize {
        #[command(flatten)]
        qm: QmArgs,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 64)]
        n: u64,
        /// Declared defect upper bound, as `p/q`.
        #[arg(long)]
        defect: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    SclBounds {
        #[command(flatten)]
        qm: QmArgs,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = 64)]
        n: u64,
        #[arg(long)]
        defect: String,
        /// Known values `k:cl(w^k)`, comma-separated.
        #[arg(long, default_value = "")]
        cl: String,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Dir,
    List,
    Clear,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    budget: Option<usize>,
}

enum Failure {
    Usage(String),
    Check(String),
    Guard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            Error::InvalidDescriptor(_)
            | Error::InvalidElement { .. }
            | Error::InvalidInput(_)
            | Error::DescriptorMismatch { .. }
            | Error::InfiniteGroup(_)
            | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            Error::Io(_) => Failure::Check(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

type CliResult = std::result::Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = par::with_threads(cli.threads, || run(cli.command));
    match outcome {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Check(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Guard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn descriptor(s: &str) -> Result<GroupDescriptor, Failure> {
    Ok(s.parse::<GroupDescriptor>()?)
}

fn write(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Check(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(output: &Output, value: &Value) -> Result<(), Failure> {
    if output.format == Format::Tsv {
        return Err(Failure::Usage("this subcommand only emits json".into()));
    }
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    write(output, &s)
}

fn emit_table(output: &Output, table: &NormTable) -> Result<(), Failure> {
    let text = match output.format {
        Format::Json => table.to_json(),
        Format::Tsv => table.to_tsv(),
    };
    write(output, &text)
}

fn cached(no_cache: bool, d: &GroupDescriptor, norm: &str, gens: &[Element], compute: impl FnOnce() -> cinorm::Result<NormTable>) -> Result<NormTable, Failure> {
    if no_cache {
        return Ok(compute()?);
    }
    let cache = Cache::from_env();
    let key = cache.key(d, norm, gens);
    let (table, outcome) = cache.get_or_compute(&key, compute)?;
    if outcome == CacheOutcome::Evicted {
        eprintln!("cache: evicted corrupt entry {}", key.as_str());
    }
    Ok(table)
}

fn named_norm(d: &GroupDescriptor, name: &str) -> Result<Box<dyn Norm>, Failure> {
    Ok(match name {
        "trivial" => Box::new(TrivialNorm),
        "support" => Box::new(SupportNorm),
        "wreath-support" => match d {
            GroupDescriptor::WreathZn(_, n) => Box::new(WreathSupportNorm { modulus: *n }),
            _ => return Err(Failure::Usage(format!("wreath-support needs a wreath:<base>:zn:<N> group, got {d}"))),
        },
        other => return Err(Failure::Usage(format!("unknown norm {other:?}"))),
    })
}

fn counting(args: &QmArgs) -> Result<(GroupDescriptor, QuasiMorphism), Failure> {
    let d = descriptor(&args.group)?;
    let pattern = d.parse_element(&args.pattern)?;
    let word = pattern.as_word().ok_or_else(|| Failure::Usage(format!("{d} is not a free group")))?;
    Ok((d.clone(), counting_qm(&d, word)?))
}

fn rational_arg(s: &str) -> Result<Rational, Failure> {
    rational::parse(s).ok_or_else(|| Failure::Usage(format!("not a rational: {s:?}")))
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Qk { group, k, no_cache, output } => {
            let d = descriptor(&group.group)?;
            let ks = d.parse_elements(&k)?;
            let table = cached(no_cache, &d, "qk", &ks, || qk_norm(&d, &ks, group.limit))?;
            emit_table(&output, &table)?;
            Ok(true)
        }
        Command::Cl { group, no_cache, output } => {
            let d = descriptor(&group.group)?;
            let table = cached(no_cache, &d, "cl", &[], || commutator_length(&d, group.limit).map(|c| c.table))?;
            emit_table(&output, &table)?;
            Ok(true)
        }
        Command::Cld { group, output } => {
            let d = descriptor(&group.group)?;
            let cl = commutator_length(&d, group.limit)?;
            let value = json!({
                "group": d.to_string(),
                "cld": rational::to_string(&cl.cld()),
                "derived_order": cl.table.len(),
                "simple_commutators": cl.commutator_count(),
            });
            emit_json(&output, &value)?;
            Ok(true)
        }
        Command::NormVerify { group, norm, k, output } => {
            let d = descriptor(&group.group)?;
            let table = match norm.as_str() {
                "qk" => {
                    let k = k.ok_or_else(|| Failure::Usage("--norm qk needs --k".into()))?;
                    qk_norm(&d, &d.parse_elements(&k)?, group.limit)?
                }
                "cl" => commutator_length(&d, group.limit)?.table,
                "normalized-qnorm" => quasinorm_to_norm(&coset_extension_qnorm(&d, None, group.limit)?.spec, group.limit)?,
                other => {
                    let g = FiniteGroup::enumerate(&d, group.limit)?;
                    NormTable::from_norm(&g, &named_norm(&d, other)?)?
                }
            };
            let report = verify_norm_axioms(&table);
            let value = json!({ "group": d.to_string(), "norm": table.name(), "report": report });
            emit_json(&output, &value)?;
            Ok(report.passed)
        }
        Command::Packing { group, h, m, output } => {
            let d = descriptor(&group.group)?;
            let g = FiniteGroup::enumerate(&d, group.limit)?;
            let res = packing_number(&g, &SubgroupSpec::new(d.parse_elements(&h)?), m, group.limit)?;
            emit_json(&output, &serde_json::to_value(&res).expect("serializable"))?;
            Ok(true)
        }
        Command::Energy { group, h, m, norm, output } => {
            let d = descriptor(&group.group)?;
            let g = FiniteGroup::enumerate(&d, group.limit)?;
            let norm = named_norm(&d, &norm)?;
            let report = verify_master_inequalities(&g, &SubgroupSpec::new(d.parse_elements(&h)?), m, &norm, group.limit)?;
            emit_json(&output, &serde_json::to_value(&report).expect("serializable"))?;
            Ok(report.passed)
        }
        Command::Fcomm { group, f, g, output } => {
            let d = descriptor(&group.group)?;
            let env = FCommEnvironment::wreath(&d)?;
            let fs = env.base().parse_elements(&f)?;
            let gs = env.base().parse_elements(&g)?;
            if fs.len() != gs.len() {
                return Err(Failure::Usage("--f and --g need the same number of elements".into()));
            }
            let pairs: Vec<(Element, Element)> = fs.into_iter().zip(gs).collect();
            let dec = seven_fcommutators(&env, &pairs)?;
            let mut value = serde_json::to_value(dec.to_json(&env)).expect("serializable");
            let ok = dec.verify(&env);
            if !pairs.is_empty() {
                let ((a1, b1), (a2, b2)) = two_commutator_witness(&env, &pairs)?;
                value["two_commutator_witness"] = json!([[a1.to_string(), b1.to_string()], [a2.to_string(), b2.to_string()]]);
            }
            emit_json(&output, &value)?;
            Ok(ok)
        }
        Command::Qm { action } => run_qm(action),
        Command::Stabilize { group, element, norm, n_max, output } => {
            let d = descriptor(&group.group)?;
            let f = d.parse_element(&element)?;
            let est = stabilization_upper(&d, &named_norm(&d, &norm)?, &f, n_max)?;
            emit_json(&output, &serde_json::to_value(&est).expect("serializable"))?;
            Ok(true)
        }
        Command::Verify { suite, seed, budget, config, out, timings } => {
            let mut cfg = SuiteConfig::default();
            if let Some(path) = config {
                let text = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                let file: ConfigFile =
                    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                cfg = SuiteConfig { seed: file.seed, budget: file.budget };
            }
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.budget = budget.or(cfg.budget);
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            if !SUITES.contains(&names[0]) {
                return Err(Failure::Usage(format!("unknown suite {suite:?}; known: {}, all", SUITES.join(", "))));
            }
            let mut all_passed = true;
            let mut all_timings = Vec::new();
            for name in names {
                let run = run_suite(name, &cfg)?;
                all_passed &= run.report.passed;
                report_failures(&run);
                let target = match &out {
                    Some(p) if suite == "all" => {
                        std::fs::create_dir_all(p).map_err(|e| Failure::Check(format!("{}: {e}", p.display())))?;
                        Some(p.join(format!("{name}.json")))
                    }
                    other => other.clone(),
                };
                let output = Output { out: target, format: Format::Json };
                write(&output, &run.report.to_json())?;
                all_timings.extend(run.timings.iter().map(|t| json!({ "suite": name, "check": t.check, "seconds": t.seconds })));
            }
            emit_timings(timings.as_deref(), &all_timings)?;
            Ok(all_passed)
        }
        Command::Cache { action } => {
            let cache = Cache::from_env();
            match action {
                CacheAction::Dir => println!("{}", cache.dir().display()),
                CacheAction::List => {
                    for e in cache.entries()? {
                        println!("{e}");
                    }
                }
                CacheAction::Clear => println!("removed {}", cache.clear()?),
            }
            Ok(true)
        }
    }
}

fn report_failures(run: &SuiteRun) {
    for c in run.report.failed_checks() {
        eprintln!("FAIL {}/{}: {}", run.report.suite, c.name, c.detail);
    }
}

fn emit_timings(path: Option<&Path>, timings: &[Value]) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let mut s = serde_json::to_string_pretty(timings).expect("serializable");
            s.push('\n');
            std::fs::write(p, s).map_err(|e| Failure::Check(format!("{}: {e}", p.display())))
        }
        None => {
            for t in timings {
                eprintln!("timing {}/{}: {:.3}s", t["suite"].as_str().unwrap_or(""), t["check"].as_str().unwrap_or(""), t["seconds"].as_f64().unwrap_or(0.0));
            }
            Ok(())
        }
    }
}

fn run_qm(action: QmAction) -> CliResult {
    match action {
        QmAction::Defect { qm, seed, budget, size, output } => {
            let (d, q) = counting(&qm)?;
            let mode = if d.is_finite() {
                DefectMode::Exact { limit: DEFAULT_LIMIT }
            } else {
                DefectMode::Sampled { seed, budget, size }
            };
            let est = defect(&q, mode)?;
            let mut value = serde_json::to_value(&est).expect("serializable");
            let sampled = matches!(mode, DefectMode::Sampled { .. });
            value["seed"] = if sampled { json!(seed) } else { Value::Null };
            value["budget"] = if sampled { json!(budget) } else { Value::Null };
            value["quasimorphism"] = json!(q.name);
            emit_json(&output, &value)?;
            Ok(true)
        }
        QmAction::Homogenize { qm, element, n, defect, output } => {
            let (d, q) = counting(&qm)?;
            let g = d.parse_element(&element)?;
            let defect = defect.as_deref().map(rational_arg).transpose()?;
            let iv = homogenize(&q, &g, n, defect)?;
            let mut value = serde_json::to_value(&iv).expect("serializable");
            value["convention"] = json!(q.convention);
            value["certified"] = json!(if iv.certified { "declared_upper_bound" } else { "none" });
            emit_json(&output, &value)?;
            Ok(true)
        }
        QmAction::SclBounds { qm, element, n, defect, cl, output } => {
            let (d, q) = counting(&qm)?;
            let w = d.parse_element(&element)?;
            let pairs = cl
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let (k, c) = s.split_once(':').ok_or_else(|| Failure::Usage(format!("expected k:c, got {s:?}")))?;
                    let parse = |x: &str| x.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("bad integer {x:?}")));
                    Ok((parse(k)?, parse(c)?))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let b = scl_bounds(&q, &w, rational_arg(&defect)?, n, &pairs)?;
            let mut value = serde_json::to_value(&b).expect("serializable");
            value["convention"] = json!(q.convention);
            value["certified"] = json!("declared_upper_bound");
            emit_json(&output, &value)?;
            Ok(true)
        }
    }
}
