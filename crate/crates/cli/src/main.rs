//! `matroid-lab`: analyze matroid files, build single-element extensions and
//! amalgams, and run the construction pipelines from the library.
//!
//! Reports are printed human-readably by default; `--json` switches to a
//! structured report that is byte-identical across runs with the same
//! arguments, input files, and seed (timings are only included on request).

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matroid_lab::amalgam::{self, AmalgamStatus};
use matroid_lab::constructions;
use matroid_lab::cuts::{self, ChainStatus, CutError};
use matroid_lab::ground::Subset;
use matroid_lab::matroid::Matroid;
use matroid_lab::modularity;

use report::{chain_log_json, matroid_summary, subset_labels, InputFile, Outcome, ReportEnv};

#[derive(Parser)]
#[command(
    name = "matroid-lab",
    version,
    about = "finite matroid computations: modular cuts, extensions, amalgams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Clone)]
struct Config {
    /// Seed for every randomized check (sampled axiom checks etc.)
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for the amalgam sweep
    /// [default: MATROID_LAB_THREADS or machine parallelism]
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit a JSON report instead of human-readable text
    #[arg(long, global = true)]
    json: bool,
    /// Add wall-clock timings to the JSON report (breaks byte-for-byte
    /// reproducibility of reports)
    #[arg(long, global = true)]
    timings: bool,
    /// Cap on candidate quadruples in the bundle-condition scan
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap_pairs: u64,
    /// Ground-set bound for the isomorphism search
    #[arg(long, global = true, default_value_t = 20)]
    iso_bound: usize,
    /// Flat-count bound for modular cut enumeration
    #[arg(long, global = true, default_value_t = 18)]
    cuts_bound: usize,
    /// Sample count for randomized checks above the exhaustive limit
    #[arg(long, global = true, default_value_t = 100_000)]
    samples: usize,
}

impl Config {
    fn resolved_threads(&self) -> usize {
        self.threads
            .or_else(|| {
                std::env::var("MATROID_LAB_THREADS")
                    .ok()
                    .and_then(|v| v.parse().ok())
            })
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            })
            .max(1)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named matroid (uniform R N | free N | vamos | pg3 Q |
    /// figure1-erection) and write its file
    Gen {
        family: String,
        params: Vec<usize>,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rank, flat counts, modularity, hypermodularity, bundle condition,
    /// disjoint coplanar lines, and Escher violations of a matroid file
    Analyze { file: PathBuf },
    /// Extend by the modular cut generated by the given flats, or run the
    /// full defect-reduction chain with --to-modular
    Extend {
        file: PathBuf,
        /// Seed flats, semicolon-separated label lists: "a b c; d e f"
        #[arg(long)]
        flats: String,
        /// Reduce the pair's modular defect to zero (needs exactly two flats)
        #[arg(long)]
        to_modular: bool,
        /// Label for the new element (auto-generated when omitted)
        #[arg(long)]
        label: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate all modular cuts of a tiny matroid
    Cuts {
        file: PathBuf,
        /// List every modular cut (the only mode)
        #[arg(long)]
        enumerate: bool,
    },
    /// Proper amalgam of two extension files along their shared labels
    Amalgam {
        file1: PathBuf,
        file2: PathBuf,
        /// Escalate to exhaustive subset-pair verification (small ground sets)
        #[arg(long)]
        brute_check: bool,
        /// Exit 1 unless the status matches
        #[arg(long)]
        expect: Option<Expectation>,
        /// Write the amalgam matroid file when it exists
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Erect the non-stickiness witness over a flat and a hyperplane
    Witness {
        file: PathBuf,
        /// The flat F, as space-separated labels
        #[arg(long)]
        flat: String,
        /// The hyperplane H, as space-separated labels
        #[arg(long)]
        hyperplane: String,
        /// Write the witness matroid
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write a JSON construction log
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Build the full non-stickiness certificate (chain + witness + failed
    /// amalgam)
    CertifyNonsticky {
        file: PathBuf,
        /// Pick the pair via the minimum-defect scan
        #[arg(long, conflicts_with_all = ["flat", "hyperplane"])]
        auto_pair: bool,
        #[arg(long, requires = "hyperplane")]
        flat: Option<String>,
        #[arg(long, requires = "flat")]
        hyperplane: Option<String>,
        /// Write the defect-reduction extension N1
        #[arg(long)]
        out_n1: Option<PathBuf>,
        /// Write the witness extension N2
        #[arg(long)]
        out_n2: Option<PathBuf>,
        /// Write a JSON pipeline log
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Embed into an OTE matroid: single-pass rank-4 embedding (--rank4) or
    /// the budget-bounded general chain
    EmbedOte {
        file: PathBuf,
        /// Single pass over the disjoint coplanar line pairs of the input
        /// (hypermodular rank-4 inputs only)
        #[arg(long, conflicts_with = "budget")]
        rank4: bool,
        /// Extension budget for the general chain
        #[arg(long)]
        budget: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Drive all non-modular hyperplane pairs toward modularity within a
    /// budget
    HypermodularComplete {
        file: PathBuf,
        #[arg(long)]
        budget: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Search for a flat-preserving ground-set bijection
    Isomorphic { file1: PathBuf, file2: PathBuf },
    /// Run the acceptance criteria
    Selftest {
        /// Run a single criterion (1..=11)
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expectation {
    Exists,
    Fails,
}

struct Failure {
    exit: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            exit: 2,
            message: message.into(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let result = dispatch(&cli.command, &cli.config);
    match result {
        Ok(outcome) => {
            if cli.config.json {
                let env = ReportEnv {
                    command: command_name(&cli.command),
                    inputs: outcome.inputs.clone(),
                    config: config_json(&cli.config),
                    results: outcome.results.clone(),
                    timings: cli
                        .config
                        .timings
                        .then(|| json!({"total_seconds": start.elapsed().as_secs_f64()})),
                };
                println!("{}", serde_json::to_string_pretty(&env).unwrap());
            } else {
                print!("{}", outcome.human);
            }
            ExitCode::from(outcome.exit)
        }
        Err(failure) => {
            if cli.config.json {
                let env = ReportEnv {
                    command: command_name(&cli.command),
                    inputs: Vec::new(),
                    config: config_json(&cli.config),
                    results: json!({ "error": failure.message }),
                    timings: None,
                };
                println!("{}", serde_json::to_string_pretty(&env).unwrap());
            } else {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.exit)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen { .. } => "gen",
        Command::Analyze { .. } => "analyze",
        Command::Extend { .. } => "extend",
        Command::Cuts { .. } => "cuts",
        Command::Amalgam { .. } => "amalgam",
        Command::Witness { .. } => "witness",
        Command::CertifyNonsticky { .. } => "certify-nonsticky",
        Command::EmbedOte { .. } => "embed-ote",
        Command::HypermodularComplete { .. } => "hypermodular-complete",
        Command::Isomorphic { .. } => "isomorphic",
        Command::Selftest { .. } => "selftest",
    }
}

fn config_json(c: &Config) -> Value {
    json!({
        "seed": c.seed,
        "threads": c.threads,
        "cap_pairs": c.cap_pairs,
        "iso_bound": c.iso_bound,
        "cuts_bound": c.cuts_bound,
        "samples": c.samples,
    })
}

fn read_input(path: &PathBuf) -> Result<(String, InputFile), Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let digest = InputFile::digest(path, &bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::usage(format!("{} is not UTF-8", path.display())))?;
    Ok((text, digest))
}

fn read_matroid(path: &PathBuf, seed: u64) -> Result<(Matroid, InputFile), Failure> {
    let (text, digest) = read_input(path)?;
    let m = matroid_lab::io::parse_matroid_seeded(&text, seed)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok((m, digest))
}

fn parse_label_set(m: &Matroid, arg: &str) -> Result<Subset, Failure> {
    m.ground_set()
        .subset_from_labels(arg.split_whitespace())
        .map_err(|e| Failure::usage(e.to_string()))
}

fn parse_flat(m: &Matroid, arg: &str) -> Result<Subset, Failure> {
    let s = parse_label_set(m, arg)?;
    if !m.is_flat(&s) {
        return Err(Failure::usage(format!(
            "`{arg}` is not a flat (its closure is {})",
            m.ground_set().format_subset(&m.closure(&s))
        )));
    }
    Ok(s)
}

fn write_or_print(path: &Option<PathBuf>, content: &str, human: &mut String) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, content)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?;
            human.push_str(&format!("wrote {}\n", p.display()));
            Ok(())
        }
        None => {
            human.push_str(content);
            Ok(())
        }
    }
}

fn write_log(path: &Option<PathBuf>, value: &Value, human: &mut String) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, serde_json::to_string_pretty(value).unwrap())
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display())))?;
        human.push_str(&format!("wrote log {}\n", p.display()));
    }
    Ok(())
}

fn dispatch(command: &Command, config: &Config) -> CmdResult {
    match command {
        Command::Gen {
            family,
            params,
            output,
        } => cmd_gen(family, params, output),
        Command::Analyze { file } => cmd_analyze(file, config),
        Command::Extend {
            file,
            flats,
            to_modular,
            label,
            output,
        } => cmd_extend(file, flats, *to_modular, label, output, config),
        Command::Cuts { file, enumerate } => cmd_cuts(file, *enumerate, config),
        Command::Amalgam {
            file1,
            file2,
            brute_check,
            expect,
            output,
        } => cmd_amalgam(file1, file2, *brute_check, *expect, output, config),
        Command::Witness {
            file,
            flat,
            hyperplane,
            output,
            log,
        } => cmd_witness(file, flat, hyperplane, output, log, config),
        Command::CertifyNonsticky {
            file,
            auto_pair,
            flat,
            hyperplane,
            out_n1,
            out_n2,
            log,
        } => cmd_certify(file, *auto_pair, flat, hyperplane, out_n1, out_n2, log, config),
        Command::EmbedOte {
            file,
            rank4,
            budget,
            output,
            log,
        } => cmd_embed(file, *rank4, *budget, output, log, config),
        Command::HypermodularComplete {
            file,
            budget,
            output,
            log,
        } => cmd_hypermodular(file, *budget, output, log, config),
        Command::Isomorphic { file1, file2 } => cmd_isomorphic(file1, file2, config),
        Command::Selftest { criterion } => cmd_selftest(*criterion, config),
    }
}

fn cmd_gen(family: &str, params: &[usize], output: &Option<PathBuf>) -> CmdResult {
    let m = matroid_lab::generators::gen_named(family, params)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let text = matroid_lab::io::serialize_matroid(&m);
    let mut human = String::new();
    write_or_print(output, &text, &mut human)?;
    Ok(Outcome {
        results: json!({
            "matroid": matroid_summary(&m),
            "written": output.as_ref().map(|p| p.display().to_string()),
        }),
        human,
        inputs: Vec::new(),
        exit: 0,
    })
}

fn cmd_analyze(file: &PathBuf, config: &Config) -> CmdResult {
    let (text, digest) = read_input(file)?;
    match matroid_lab::io::parse_matroid_seeded(&text, config.seed) {
        Ok(m) => analyze_matroid(&m, digest, config),
        Err(matroid_lab::io::ParseError::NotAMatroid(reason)) => {
            // would-be matroids given as raw rank tables still get diagnostics
            match matroid_lab::io::parse_rank_table(&text) {
                Ok((table, name)) => analyze_raw_table(&table, name, reason, digest, config),
                Err(_) => Err(Failure::usage(format!("{}: not a matroid: {reason}", file.display()))),
            }
        }
        Err(e) => Err(Failure::usage(format!("{}: {e}", file.display()))),
    }
}

fn flat_pair_json(m: &Matroid, p: &modularity::FlatPair) -> Value {
    json!({
        "x": subset_labels(m, &p.x),
        "y": subset_labels(m, &p.y),
        "defect": p.defect,
    })
}

fn analyze_matroid(m: &Matroid, digest: InputFile, config: &Config) -> CmdResult {
    let modular = modularity::modularity_witness(m);
    let hypermodular = modularity::hypermodularity_witness(m);
    let bundle = modularity::bundle_violations(m, config.cap_pairs)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let pairs = modularity::coplanar_disjoint_line_pairs(m);
    let escher = modularity::check_escher(m);

    let flats_per_rank: Vec<usize> = (0..=m.rank()).map(|k| m.flats_of_rank(k).len()).collect();
    let mut human = String::new();
    if let Some(name) = m.name() {
        human.push_str(&format!("name: {name}\n"));
    }
    human.push_str(&format!("elements: {}   rank: {}\n", m.size(), m.rank()));
    human.push_str(&format!(
        "flats per rank: {}\n",
        flats_per_rank
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    ));
    match &modular {
        None => human.push_str("modular: yes\n"),
        Some(w) => human.push_str(&format!(
            "modular: no (witness {} | {}, defect {})\n",
            m.ground_set().format_subset(&w.x),
            m.ground_set().format_subset(&w.y),
            w.defect
        )),
    }
    match &hypermodular {
        None => human.push_str("hypermodular: yes\n"),
        Some(w) => human.push_str(&format!(
            "hypermodular: no (witness {} | {})\n",
            m.ground_set().format_subset(&w.x),
            m.ground_set().format_subset(&w.y)
        )),
    }
    if bundle.is_empty() {
        human.push_str("bundle condition: holds\n");
    } else {
        let q = &bundle[0];
        human.push_str(&format!(
            "bundle condition: violated ({} quadruples; first: {} | {} | {} | {})\n",
            bundle.len(),
            m.ground_set().format_subset(&q[0]),
            m.ground_set().format_subset(&q[1]),
            m.ground_set().format_subset(&q[2]),
            m.ground_set().format_subset(&q[3]),
        ));
    }
    match pairs.first() {
        None => human.push_str("disjoint coplanar line pair: none\n"),
        Some(p) => human.push_str(&format!(
            "disjoint coplanar line pair: {} | {} ({} pairs total)\n",
            m.ground_set().format_subset(&p.x),
            m.ground_set().format_subset(&p.y),
            pairs.len()
        )),
    }
    human.push_str(&format!("escher violations: {}\n", escher.len()));

    Ok(Outcome {
        results: json!({
            "matroid": matroid_summary(m),
            "flats_per_rank": flats_per_rank,
            "modular": modular.is_none(),
            "modular_witness": modular.map(|w| flat_pair_json(m, &w)),
            "hypermodular": hypermodular.is_none(),
            "hypermodular_witness": hypermodular.map(|w| flat_pair_json(m, &w)),
            "bundle_condition_holds": bundle.is_empty(),
            "bundle_violations": bundle.len(),
            "first_bundle_violation": bundle.first().map(|q| {
                q.iter().map(|l| subset_labels(m, l)).collect::<Vec<_>>()
            }),
            "disjoint_coplanar_line_pairs": pairs.len(),
            "first_disjoint_coplanar_pair": pairs.first().map(|p| flat_pair_json(m, p)),
            "escher_violations": escher.len(),
        }),
        human,
        inputs: vec![digest],
        exit: 0,
    })
}

fn analyze_raw_table(
    table: &matroid_lab::ranktable::RankTable,
    name: Option<String>,
    reason: String,
    digest: InputFile,
    config: &Config,
) -> CmdResult {
    use matroid_lab::matroid::RankOracle;
    let mode = matroid_lab::axioms::AxiomCheckMode::auto(
        table.ground().len(),
        config.samples,
        config.seed,
    );
    let axioms = matroid_lab::axioms::check_rank_axioms(table, mode);
    let escher = modularity::check_escher(table);
    let g = table.ground();
    let mut human = String::new();
    if let Some(n) = &name {
        human.push_str(&format!("name: {n}\n"));
    }
    human.push_str(&format!("NOT A MATROID: {reason}\n"));
    human.push_str(&format!(
        "axiom violations found: {}\n",
        axioms.violations.len()
    ));
    human.push_str(&format!("escher violations: {}\n", escher.len()));
    for v in &escher {
        human.push_str(&format!(
            "  lines {} | {} meet in {} which misses line {}\n",
            g.format_subset(&v.l1),
            g.format_subset(&v.l2),
            g.format_subset(&v.meeting_point),
            g.format_subset(&v.l3),
        ));
    }
    let escher_json: Vec<Value> = escher
        .iter()
        .map(|v| {
            json!({
                "l1": g.labels_of(&v.l1),
                "l2": g.labels_of(&v.l2),
                "l3": g.labels_of(&v.l3),
                "meeting_point": g.labels_of(&v.meeting_point),
                "planes": [g.labels_of(&v.planes.0), g.labels_of(&v.planes.1)],
            })
        })
        .collect();
    Ok(Outcome {
        results: json!({
            "name": name,
            "not_a_matroid": reason,
            "axiom_violations": axioms.violations.len(),
            "escher_violations": escher.len(),
            "escher": escher_json,
        }),
        human,
        inputs: vec![digest],
        exit: 0,
    })
}

fn cmd_extend(
    file: &PathBuf,
    flats_arg: &str,
    to_modular: bool,
    label: &Option<String>,
    output: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m, digest) = read_matroid(file, config.seed)?;
    let seeds: Vec<Subset> = flats_arg
        .split(';')
        .map(|part| parse_flat(&m, part.trim()))
        .collect::<Result<_, _>>()?;
    if seeds.is_empty() {
        return Err(Failure::usage("--flats needs at least one flat"));
    }
    let mut human = String::new();
    if to_modular {
        if seeds.len() != 2 {
            return Err(Failure::usage("--to-modular needs exactly two flats"));
        }
        let chain = cuts::reduce_defect_chain(&m, &seeds[0], &seeds[1], "p").map_err(|e| {
            match e {
                CutError::NotIntersectable => Failure {
                    exit: 1,
                    message: "the pair is not intersectable; no defect-reducing extension exists"
                        .into(),
                },
                other => Failure::usage(other.to_string()),
            }
        })?;
        human.push_str(&format!(
            "chain of {} extension(s), status {:?}\n",
            chain.len(),
            chain.status
        ));
        let text = matroid_lab::io::serialize_matroid(&chain.result);
        write_or_print(output, &text, &mut human)?;
        Ok(Outcome {
            results: json!({
                "chain": chain_log_json(&chain),
                "written": output.as_ref().map(|p| p.display().to_string()),
            }),
            human,
            inputs: vec![digest],
            exit: 0,
        })
    } else {
        let cut = cuts::generate_cut(&m, &seeds);
        let label = match label {
            Some(l) => l.clone(),
            None => cuts::fresh_label(&m, "p", 1).0,
        };
        let ext = cuts::crapo_extend(&m, &cut, &label).map_err(|e| Failure::usage(e.to_string()))?;
        human.push_str(&format!(
            "generated cut has {} members; added `{label}`\n",
            cut.len()
        ));
        let text = matroid_lab::io::serialize_matroid(&ext);
        write_or_print(output, &text, &mut human)?;
        Ok(Outcome {
            results: json!({
                "cut_size": cut.len(),
                "cut_minimal_members": cut
                    .minimal_members()
                    .iter()
                    .map(|f| subset_labels(&m, f))
                    .collect::<Vec<_>>(),
                "label": label,
                "result": matroid_summary(&ext),
                "written": output.as_ref().map(|p| p.display().to_string()),
            }),
            human,
            inputs: vec![digest],
            exit: 0,
        })
    }
}

fn cmd_cuts(file: &PathBuf, enumerate: bool, config: &Config) -> CmdResult {
    if !enumerate {
        return Err(Failure::usage("nothing to do: pass --enumerate"));
    }
    let (m, digest) = read_matroid(file, config.seed)?;
    let all = cuts::enumerate_modular_cuts(&m, config.cuts_bound)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let mut human = format!("{} modular cuts\n", all.len());
    let mut cuts_json = Vec::new();
    for (i, cut) in all.iter().enumerate() {
        let kind = if cut.is_empty() {
            "empty (adds a coloop)".to_string()
        } else if cut.len() == m.flat_count() {
            "trivial (adds a loop)".to_string()
        } else {
            match cuts::is_principal(&m, cut) {
                Some(f) => format!("principal at {}", m.ground_set().format_subset(&f)),
                None => "non-principal".to_string(),
            }
        };
        human.push_str(&format!("cut {i}: {} members — {kind}\n", cut.len()));
        for f in cut.members() {
            human.push_str(&format!("  {}\n", m.ground_set().format_subset(f)));
        }
        cuts_json.push(json!({
            "members": cut.members().iter().map(|f| subset_labels(&m, f)).collect::<Vec<_>>(),
            "kind": kind,
        }));
    }
    Ok(Outcome {
        results: json!({
            "matroid": matroid_summary(&m),
            "count": all.len(),
            "cuts": cuts_json,
        }),
        human,
        inputs: vec![digest],
        exit: 0,
    })
}

fn cmd_amalgam(
    file1: &PathBuf,
    file2: &PathBuf,
    brute_check: bool,
    expect: Option<Expectation>,
    output: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m1, d1) = read_matroid(file1, config.seed)?;
    let (m2, d2) = read_matroid(file2, config.seed)?;
    let ctx = amalgam::AmalgamContext::build(&m1, &m2).map_err(|e| Failure::usage(e.to_string()))?;
    let report = amalgam::proper_amalgam_threaded(&ctx, config.resolved_threads())
        .map_err(|e| Failure::usage(e.to_string()))?;

    let mut human = String::new();
    human.push_str(&format!(
        "common restriction: {} elements, rank {}\n",
        ctx.common().size(),
        ctx.common().rank()
    ));
    human.push_str(&format!("lattice size |L|: {}\n", report.lattice_size));
    human.push_str(&format!(
        "eta failures repaired by xi: {}\n",
        report.eta_failures_repaired
    ));
    let status_str = match report.status {
        AmalgamStatus::Exists => "exists",
        AmalgamStatus::Fails => "fails",
        AmalgamStatus::Inconclusive => "inconclusive",
    };
    human.push_str(&format!("proper amalgam: {status_str}\n"));

    let mut violation_json = None;
    if let Some(v) = &report.violation {
        human.push_str(&format!(
            "violating pair:\n  X = {}\n  Y = {}\n  xi(X)={} xi(Y)={} xi(X∩Y)={} xi(X∪Y)={}  ({}+{} < {}+{})\n",
            ctx.ground().format_subset(&v.x),
            ctx.ground().format_subset(&v.y),
            v.xi_x,
            v.xi_y,
            v.xi_intersection,
            v.xi_union,
            v.xi_x,
            v.xi_y,
            v.xi_intersection,
            v.xi_union,
        ));
        violation_json = Some(json!({
            "x": ctx.ground().labels_of(&v.x),
            "y": ctx.ground().labels_of(&v.y),
            "xi_x": v.xi_x,
            "xi_y": v.xi_y,
            "xi_intersection": v.xi_intersection,
            "xi_union": v.xi_union,
        }));
    }

    let mut brute_json = json!({"performed": false});
    if brute_check {
        let n = ctx.ground().len();
        if n <= 13 {
            match (&report.status, &report.amalgam) {
                (AmalgamStatus::Exists, Some(a)) => {
                    let violations = matroid_lab::oracle::submodularity_violations(a);
                    human.push_str(&format!(
                        "brute check: {} subset-pair violations\n",
                        violations.len()
                    ));
                    brute_json = json!({"performed": true, "ok": violations.is_empty()});
                }
                _ => {
                    let brute = matroid_lab::oracle::xi_bruteforce(n, |x| ctx.eta(x));
                    let v = report.violation.as_ref().unwrap();
                    let look = |s: &Subset| {
                        brute[matroid_lab::ranktable::RankTable::subset_to_mask(s) as usize]
                    };
                    let ok = look(&v.x) == v.xi_x as i64
                        && look(&v.y) == v.xi_y as i64
                        && look(&v.x.intersection(&v.y)) == v.xi_intersection as i64
                        && look(&v.x.union(&v.y)) == v.xi_union as i64;
                    human.push_str(&format!(
                        "brute check: reported xi values {} the all-supersets minima\n",
                        if ok { "match" } else { "DO NOT match" }
                    ));
                    brute_json = json!({"performed": true, "ok": ok});
                }
            }
        } else {
            human.push_str("brute check: skipped (ground set too large for exhaustive pairs)\n");
            brute_json = json!({"performed": false, "note": "ground set too large"});
        }
    }

    if let (Some(_), Some(a)) = (output.as_ref(), report.amalgam.as_ref()) {
        let text = matroid_lab::io::serialize_matroid(a);
        write_or_print(output, &text, &mut human)?;
    }

    let exit = match expect {
        None => 0,
        Some(Expectation::Exists) if report.status == AmalgamStatus::Exists => 0,
        Some(Expectation::Fails) if report.status == AmalgamStatus::Fails => 0,
        Some(_) => 1,
    };
    if exit != 0 {
        human.push_str("expectation NOT met\n");
    }

    Ok(Outcome {
        results: json!({
            "status": status_str,
            "lattice_size": report.lattice_size,
            "eta_failures_repaired": report.eta_failures_repaired,
            "violation": violation_json,
            "amalgam": report.amalgam.as_ref().map(matroid_summary),
            "brute_check": brute_json,
            "written": output.as_ref()
                .filter(|_| report.amalgam.is_some())
                .map(|p| p.display().to_string()),
        }),
        human,
        inputs: vec![d1, d2],
        exit,
    })
}

fn witness_json(b: &constructions::WitnessBundle) -> Value {
    let g0 = b.n0.ground_set();
    json!({
        "a_labels": b.a_labels,
        "coloop_label": b.coloop_label,
        "free_label": b.free_label,
        "t1": g0.labels_of(&b.t1),
        "t2": g0.labels_of(&b.t2),
        "b1": g0.labels_of(&b.b1),
        "b2": g0.labels_of(&b.b2),
        "p_labels": b.p_labels,
        "q_labels": b.q_labels,
        "defect_t": b.checks.defect_t,
        "defect_b": b.checks.defect_b,
        "expected_defect": b.checks.expected_defect,
        "all_checks_hold": b.checks.all_hold(),
        "n0": matroid_summary(&b.n0),
        "result": matroid_summary(&b.result),
    })
}

fn cmd_witness(
    file: &PathBuf,
    flat: &str,
    hyperplane: &str,
    output: &Option<PathBuf>,
    log: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m, digest) = read_matroid(file, config.seed)?;
    let f = parse_flat(&m, flat)?;
    let h = parse_flat(&m, hyperplane)?;
    let bundle =
        constructions::nonsticky_witness(&m, &f, &h).map_err(|e| Failure::usage(e.to_string()))?;
    let mut human = format!(
        "witness erected: {} elements, rank {} (A={}, e, f, |P|={}, |Q|={})\n\
         defect of (T1,T2) and (B1,B2) in the scaffold: {} (expected {})\n\
         all invariants hold: {}\n",
        bundle.result.size(),
        bundle.result.rank(),
        bundle.a_labels.len(),
        bundle.p_labels.len(),
        bundle.q_labels.len(),
        bundle.checks.defect_t,
        bundle.checks.expected_defect,
        bundle.checks.all_hold(),
    );
    if output.is_some() {
        let text = matroid_lab::io::serialize_matroid(&bundle.result);
        write_or_print(output, &text, &mut human)?;
    }
    let results = witness_json(&bundle);
    write_log(log, &results, &mut human)?;
    Ok(Outcome {
        results,
        human,
        inputs: vec![digest],
        exit: 0,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(
    file: &PathBuf,
    auto_pair: bool,
    flat: &Option<String>,
    hyperplane: &Option<String>,
    out_n1: &Option<PathBuf>,
    out_n2: &Option<PathBuf>,
    log: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m, digest) = read_matroid(file, config.seed)?;
    let pair = if auto_pair {
        match cuts::min_max_pair(&m) {
            Ok(p) => p,
            Err(CutError::IsOTE) => {
                let human = "no intersectable non-modular pair: the matroid is only trivially \
                             extendable; no certificate\n"
                    .to_string();
                return Ok(Outcome {
                    results: json!({"status": "no_intersectable_pair"}),
                    human,
                    inputs: vec![digest],
                    exit: 1,
                });
            }
            Err(e) => return Err(Failure::usage(e.to_string())),
        }
    } else {
        match (flat, hyperplane) {
            (Some(f), Some(h)) => (parse_flat(&m, f)?, parse_flat(&m, h)?),
            _ => {
                return Err(Failure::usage(
                    "pass --auto-pair or both --flat and --hyperplane",
                ))
            }
        }
    };

    let cert = match constructions::nonsticky_certificate(&m, &pair.0, &pair.1) {
        Ok(c) => c,
        Err(constructions::ConstructError::Cut(CutError::NotIntersectable)) => {
            let human = "the chosen pair is not intersectable; no certificate\n".to_string();
            return Ok(Outcome {
                results: json!({"status": "pair_not_intersectable"}),
                human,
                inputs: vec![digest],
                exit: 1,
            });
        }
        Err(e) => return Err(Failure::usage(e.to_string())),
    };

    let fails = cert.amalgam.status == AmalgamStatus::Fails;
    let mut human = format!(
        "pair: F = {}  H = {}\n",
        cert.base.ground_set().format_subset(&cert.flat),
        cert.base.ground_set().format_subset(&cert.hyperplane),
    );
    if let Some(z) = &cert.contracted {
        human.push_str(&format!(
            "contracted F∩H = {} first\n",
            m.ground_set().format_subset(z)
        ));
    }
    human.push_str(&format!(
        "N1: defect chain of {} step(s); N2: witness with {} elements\n",
        cert.chain.len(),
        cert.witness.result.size()
    ));
    human.push_str(&format!(
        "proper amalgam of N1 and N2: {}\n",
        if fails { "fails" } else { "EXISTS (unexpected)" }
    ));
    if fails {
        human.push_str("certificate of non-stickiness produced\n");
    }

    if out_n1.is_some() {
        write_or_print(
            out_n1,
            &matroid_lab::io::serialize_matroid(&cert.chain.result),
            &mut human,
        )?;
    }
    if out_n2.is_some() {
        write_or_print(
            out_n2,
            &matroid_lab::io::serialize_matroid(&cert.witness.result),
            &mut human,
        )?;
    }

    let results = json!({
        "status": if fails { "fails" } else { "exists" },
        "contracted": cert.contracted.as_ref().map(|z| subset_labels(&m, z)),
        "flat": subset_labels(&cert.base, &cert.flat),
        "hyperplane": subset_labels(&cert.base, &cert.hyperplane),
        "chain": chain_log_json(&cert.chain),
        "witness": witness_json(&cert.witness),
        "violation": cert.amalgam.violation.as_ref().map(|v| json!({
            "xi_x": v.xi_x, "xi_y": v.xi_y,
            "xi_intersection": v.xi_intersection, "xi_union": v.xi_union,
        })),
    });
    write_log(log, &results, &mut human)?;
    Ok(Outcome {
        results,
        human,
        inputs: vec![digest],
        // a produced certificate is the expected outcome
        exit: if fails { 0 } else { 1 },
    })
}

fn chain_outcome(
    chain: &cuts::ExtensionChain,
    extra: Value,
    output: &Option<PathBuf>,
    log: &Option<PathBuf>,
    digest: InputFile,
) -> CmdResult {
    let mut human = format!(
        "{} extension step(s); status: {}\n",
        chain.len(),
        match &chain.status {
            ChainStatus::Complete => "complete".to_string(),
            ChainStatus::Partial { remaining } =>
                format!("partial ({remaining} open pairs remain)"),
            ChainStatus::StoppedEarly { reason } => format!("stopped early: {reason}"),
        }
    );
    human.push_str(&format!(
        "result: {} elements, rank {}\n",
        chain.result.size(),
        chain.result.rank()
    ));
    if output.is_some() {
        write_or_print(
            output,
            &matroid_lab::io::serialize_matroid(&chain.result),
            &mut human,
        )?;
    }
    let mut results = chain_log_json(chain);
    if let Value::Object(map) = &mut results {
        if let Value::Object(extra_map) = extra {
            for (k, v) in extra_map {
                map.insert(k, v);
            }
        }
    }
    write_log(log, &results, &mut human)?;
    Ok(Outcome {
        results,
        human,
        inputs: vec![digest],
        exit: 0,
    })
}

fn cmd_embed(
    file: &PathBuf,
    rank4: bool,
    budget: Option<usize>,
    output: &Option<PathBuf>,
    log: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m, digest) = read_matroid(file, config.seed)?;
    if rank4 {
        let report = constructions::embed_ote_rank4(&m).map_err(|e| Failure::usage(e.to_string()))?;
        let extra = json!({
            "pairs_processed": report.pairs_processed,
            "pairs_skipped": report.pairs_skipped,
            "checks": {
                "hypermodular": report.checks.hypermodular,
                "ote": report.checks.ote,
                "lines_restrict_to_lines": report.checks.lines_restrict_to_lines,
                "modular_given_bundle": report.checks.modular_given_bundle,
            },
        });
        chain_outcome(&report.chain, extra, output, log, digest)
    } else {
        let budget = budget.ok_or_else(|| Failure::usage("pass --rank4 or --budget N"))?;
        let chain =
            constructions::embed_ote_general(&m, budget).map_err(|e| Failure::usage(e.to_string()))?;
        chain_outcome(&chain, json!({"budget": budget}), output, log, digest)
    }
}

fn cmd_hypermodular(
    file: &PathBuf,
    budget: usize,
    output: &Option<PathBuf>,
    log: &Option<PathBuf>,
    config: &Config,
) -> CmdResult {
    let (m, digest) = read_matroid(file, config.seed)?;
    let chain = constructions::hypermodular_completion(&m, budget)
        .map_err(|e| Failure::usage(e.to_string()))?;
    chain_outcome(&chain, json!({"budget": budget}), output, log, digest)
}

fn cmd_isomorphic(file1: &PathBuf, file2: &PathBuf, config: &Config) -> CmdResult {
    let (m1, d1) = read_matroid(file1, config.seed)?;
    let (m2, d2) = read_matroid(file2, config.seed)?;
    let result = matroid_lab::iso::are_isomorphic(&m1, &m2, config.iso_bound)
        .map_err(|e| Failure::usage(e.to_string()))?;
    match result {
        Some(bijection) => {
            let mut human = String::from("isomorphic\n");
            let mapping: Vec<[String; 2]> = bijection
                .iter()
                .enumerate()
                .map(|(i, &j)| {
                    [
                        m1.ground_set().label(i).to_string(),
                        m2.ground_set().label(j).to_string(),
                    ]
                })
                .collect();
            for [a, b] in &mapping {
                human.push_str(&format!("  {a} -> {b}\n"));
            }
            Ok(Outcome {
                results: json!({"isomorphic": true, "bijection": mapping}),
                human,
                inputs: vec![d1, d2],
                exit: 0,
            })
        }
        None => Ok(Outcome {
            results: json!({"isomorphic": false}),
            human: "not isomorphic\n".to_string(),
            inputs: vec![d1, d2],
            exit: 1,
        }),
    }
}

fn cmd_selftest(criterion: Option<usize>, config: &Config) -> CmdResult {
    let results = match criterion {
        Some(id) => {
            if !(1..=11).contains(&id) {
                return Err(Failure::usage("criterion must be in 1..=11"));
            }
            vec![matroid_lab::acceptance::run_criterion(id, config.seed)]
        }
        None => matroid_lab::acceptance::run_all(config.seed),
    };
    let mut human = String::new();
    for r in &results {
        human.push_str(&r.line());
        human.push('\n');
    }
    let all_pass = results.iter().all(|r| r.passed);
    human.push_str(if all_pass {
        "all criteria passed\n"
    } else {
        "SOME CRITERIA FAILED\n"
    });
    let json_results: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": r.name,
                "passed": r.passed,
                "detail": r.detail,
            })
        })
        .collect();
    Ok(Outcome {
        results: json!({"criteria": json_results, "all_passed": all_pass}),
        human,
        inputs: Vec::new(),
        exit: if all_pass { 0 } else { 1 },
    })
}
