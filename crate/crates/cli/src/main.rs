mod session;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use revasm::harness::{
    faithfulness_check, function_check_pair, lemma_checks_with, random_module, roundtrip_pair,
};
use revasm::interp::state_json;
use revasm::syntax::{parse_seeds, parse_value, parse_values, validate};
use revasm::{
    parse_module, print_module, reversify_with, run, Binding, CheckConfig, CheckReport, Module, Options,
    Oracle, Reversification, Seed, SizeBounds, StopReason, DEFAULT_BUDGET,
};

/// Reversible abstract state machines: run, reversify and check modules.
#[derive(Parser)]
#[command(name = "revasm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a module.
    Parse { file: PathBuf },
    /// Run a module and report its final state.
    Run {
        file: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        /// Write the full trace as JSON.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Build the instrumented machine B and its inverse C.
    Reversify {
        file: PathBuf,
        #[command(flatten)]
        rev: RevFlags,
        #[command(flatten)]
        load: LoadFlags,
        /// Directory for B, C and the catalog; printed to stdout if absent.
        #[arg(short = 'o', value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Run B forward and C back, comparing every state.
    Roundtrip {
        file: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        rev: RevFlags,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Check that B simulates A on the vocabulary of A.
    Faithcheck {
        file: PathBuf,
        /// An expansion to check instead of the reversifier's B.
        expansion: Option<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        rev: RevFlags,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Check the green-light, counter and default lemmas along B's run.
    Lemmacheck {
        file: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        rev: RevFlags,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Check that A and B compute the same function on given inputs.
    Funcheck {
        file: PathBuf,
        /// Comma-separated input values, one per declared input; repeatable.
        #[arg(long = "input", value_name = "VALUES", required = true)]
        inputs: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        max_steps: usize,
        #[command(flatten)]
        rev: RevFlags,
        #[command(flatten)]
        load: LoadFlags,
        #[command(flatten)]
        report: ReportFlags,
    },
    /// Write a random valid module.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 5)]
        symbols: usize,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Use external choosers in the generated terms.
        #[arg(long)]
        externals: bool,
        /// Output file; stdout if absent.
        #[arg(short = 'o', value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Step through B and C interactively: f, b, p <term>, q.
    Step {
        file: PathBuf,
        #[command(flatten)]
        run: RunFlags,
        #[command(flatten)]
        rev: RevFlags,
    },
}

#[derive(Args)]
struct LoadFlags {
    /// Rebind a static symbol: `NAME=@builtin` or `NAME=value`; repeatable.
    #[arg(long = "bind", value_name = "NAME=BINDING")]
    binds: Vec<String>,
}

#[derive(Args)]
struct RunFlags {
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    max_steps: usize,
    /// Seed for external choosers; without it they pick least candidates.
    #[arg(long)]
    seed: Option<u64>,
    /// Initial-state overrides such as `f(0)=3,x=1`.
    #[arg(long, value_name = "SEEDS")]
    init: Option<String>,
    #[command(flatten)]
    load: LoadFlags,
}

#[derive(Args)]
struct RevFlags {
    #[arg(long)]
    optimize_counter: bool,
    /// Treat assignment occurrence N as firing only at the last step.
    #[arg(long = "assert-final-assignment", value_name = "N")]
    final_assignments: Vec<usize>,
}

#[derive(Args)]
struct ReportFlags {
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

/// A failure that ends the command with exit status 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<bool, Fatal>;

fn load(path: &Path, flags: &LoadFlags) -> Result<Module, Fatal> {
    let text = fs::read_to_string(path).map_err(|e| Fatal(format!("{}: {e}", path.display())))?;
    let file = path.display().to_string();
    let mut m = parse_module(&text)
        .map_err(|ds| Fatal(ds.iter().map(|d| d.render(&file)).collect::<Vec<_>>().join("\n")))?;
    for b in &flags.binds {
        let (name, rhs) = b
            .split_once('=')
            .ok_or_else(|| Fatal(format!("--bind `{b}`: expected NAME=BINDING")))?;
        let rhs = rhs.trim();
        let binding = match rhs.strip_prefix('@') {
            Some(builtin) => Binding::Builtin(builtin.to_string()),
            None => Binding::Const(parse_value(rhs).map_err(|d| Fatal(format!("--bind `{b}`: {d}")))?),
        };
        m.bind(name.trim(), binding);
    }
    if !flags.binds.is_empty() {
        let ds = validate(&m);
        if !ds.is_empty() {
            let lines: Vec<String> = ds.iter().map(|d| format!("{file}: {}", d.message)).collect();
            return Err(Fatal(lines.join("\n")));
        }
    }
    Ok(m)
}

fn overrides(init: &Option<String>) -> Result<Vec<Seed>, Fatal> {
    match init {
        Some(text) => parse_seeds(text).map_err(|d| Fatal(format!("--init: {d}"))),
        None => Ok(Vec::new()),
    }
}

fn config(run: &RunFlags) -> Result<CheckConfig, Fatal> {
    Ok(CheckConfig {
        overrides: overrides(&run.init)?,
        seed: run.seed,
        budget: run.max_steps,
    })
}

fn options(rev: &RevFlags) -> Options {
    Options {
        optimize_counter: rev.optimize_counter,
        final_assignments: rev.final_assignments.clone(),
    }
}

fn reversified(m: &Module, rev: &RevFlags) -> Result<Reversification, Fatal> {
    Ok(reversify_with(m, &options(rev))?)
}

fn show(report: &CheckReport, flags: &ReportFlags) -> Outcome {
    if flags.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    } else {
        println!("{report}");
    }
    Ok(report.passed())
}

fn write_file(path: &Path, text: &str) -> Result<(), Fatal> {
    fs::write(path, text).map_err(|e| Fatal(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { file } => {
            let m = load(&file, &LoadFlags { binds: Vec::new() })?;
            println!(
                "{}: module {} ok ({} symbols, {} assignments)",
                file.display(),
                m.name,
                m.vocab.len(),
                m.program.assignment_count()
            );
            Ok(true)
        }
        Command::Run {
            file,
            run: flags,
            trace,
        } => {
            let m = load(&file, &flags.load)?;
            let seeds = overrides(&flags.init)?;
            let t = run(&m, &seeds, &mut Oracle::live(flags.seed), flags.max_steps)?;
            match t.stop {
                StopReason::Terminal => println!("{}: terminal after {} steps", m.name, t.steps()),
                StopReason::Budget => println!("{}: stopped by the budget after {} steps", m.name, t.steps()),
                StopReason::Contradictory => {
                    let c = t
                        .conflict
                        .as_ref()
                        .expect("contradictory runs record their clash");
                    println!("{}: contradictory at step {}: {c}", m.name, t.steps());
                }
            }
            println!("{}", serde_json::to_string_pretty(&state_json(t.last()))?);
            if let Some(path) = trace {
                write_file(&path, &serde_json::to_string_pretty(&t.to_json())?)?;
            }
            Ok(true)
        }
        Command::Reversify {
            file,
            rev,
            load: lf,
            out,
        } => {
            let m = load(&file, &lf)?;
            let arts = reversified(&m, &rev)?;
            let (b, c) = (print_module(&arts.b), print_module(&arts.c));
            let catalog = serde_json::to_string_pretty(&arts.catalog.to_json())?;
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
                    let files = [
                        (format!("{}.asm", arts.b.name), b),
                        (format!("{}.asm", arts.c.name), c),
                        (format!("{}.catalog.json", m.name), catalog),
                    ];
                    for (name, text) in files {
                        let path = dir.join(name);
                        write_file(&path, &text)?;
                        println!("wrote {}", path.display());
                    }
                }
                None => print!("{b}\n{c}\n{catalog}\n"),
            }
            Ok(true)
        }
        Command::Roundtrip {
            file,
            run,
            rev,
            report,
        } => {
            let m = load(&file, &run.load)?;
            let arts = reversified(&m, &rev)?;
            show(&roundtrip_pair(&arts.b, &arts.c, &config(&run)?)?, &report)
        }
        Command::Faithcheck {
            file,
            expansion,
            run,
            rev,
            report,
        } => {
            let a = load(&file, &run.load)?;
            let b = match expansion {
                Some(path) => load(&path, &run.load)?,
                None => reversified(&a, &rev)?.b,
            };
            show(&faithfulness_check(&a, &b, &config(&run)?)?, &report)
        }
        Command::Lemmacheck {
            file,
            run,
            rev,
            report,
        } => {
            let m = load(&file, &run.load)?;
            let arts = reversified(&m, &rev)?;
            show(&lemma_checks_with(&arts, &config(&run)?)?, &report)
        }
        Command::Funcheck {
            file,
            inputs,
            max_steps,
            rev,
            load: lf,
            report,
        } => {
            let m = load(&file, &lf)?;
            let b = reversified(&m, &rev)?.b;
            let inputs = inputs
                .iter()
                .map(|s| parse_values(s).map_err(|d| Fatal(format!("--input `{s}`: {d}"))))
                .collect::<Result<Vec<_>, _>>()?;
            show(&function_check_pair(&m, &b, &inputs, max_steps)?, &report)
        }
        Command::Gen {
            seed,
            depth,
            symbols,
            arity,
            externals,
            out,
        } => {
            if depth == 0 || symbols == 0 {
                return Err(Fatal("--depth and --symbols must be positive".into()));
            }
            let bounds = SizeBounds {
                max_depth: depth,
                max_symbols: symbols,
                max_arity: arity,
                externals,
            };
            let text = print_module(&random_module(seed, bounds));
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Step { file, run, rev } => {
            let m = load(&file, &run.load)?;
            let arts = reversified(&m, &rev)?;
            let stdin = io::stdin();
            let mut s = session::Session::new(&arts, &overrides(&run.init)?, run.seed)?;
            s.drive(stdin.lock(), io::stdout().lock())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fatal(msg)) => {
            let _ = io::stdout().flush();
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
