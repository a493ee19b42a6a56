//! `bench`: sweep generator families over an MNIST-format corpus, verify
//! the operator stack, or write a synthetic corpus for offline runs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use genloss_bench::config::{
    parse_config_file, parse_lambdas, parse_quantifier, resolve, ConfigOverlay, FamilyChoice,
};
use genloss_bench::{
    emit_csv, emit_plot_script, load_mnist_dir, run_all, run_sweep, subsample, summary_table,
    write_synthetic_corpus, BenchError,
};

#[derive(Parser)]
#[command(name = "bench", about = "Generated-loss training benchmark")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a family sweep and write the results CSV plus a gnuplot script.
    Run(RunArgs),
    /// Run the oracle and property suites.
    Verify,
    /// Write a deterministic synthetic IDX corpus.
    Synth(SynthArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Generator family: ss, frank, lukasiewicz, product or godel.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated lambda grid; `inf` is accepted.
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    train_size: Option<usize>,
    #[arg(long)]
    test_size: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Universal quantifier handling: generator or minmax.
    #[arg(long)]
    quantifier: Option<String>,
    /// Clamp floor for strict generators.
    #[arg(long)]
    eps: Option<f64>,
    /// Directory holding the four IDX files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Results CSV path; the plot script lands next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat key = value config file, overridden by explicit flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory to create the IDX files in.
    #[arg(long, default_value = "data")]
    dir: PathBuf,
    #[arg(long, default_value_t = 6000)]
    train_size: usize,
    #[arg(long, default_value_t = 1000)]
    test_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn overlay_from_flags(args: &RunArgs) -> Result<ConfigOverlay, BenchError> {
    Ok(ConfigOverlay {
        family: args.family.as_deref().map(FamilyChoice::parse).transpose()?,
        lambdas: args.lambdas.as_deref().map(parse_lambdas).transpose()?,
        quantifier: args
            .quantifier
            .as_deref()
            .map(parse_quantifier)
            .transpose()?,
        epochs: args.epochs,
        batch: args.batch,
        lr: args.lr,
        train_size: args.train_size,
        test_size: args.test_size,
        seed: args.seed,
        eps: args.eps,
        data_dir: args.data_dir.clone(),
        out: args.out.clone(),
    })
}

fn cmd_run(args: &RunArgs) -> Result<(), BenchError> {
    let file = args
        .config
        .as_deref()
        .map(parse_config_file)
        .transpose()?;
    let cfg = resolve(file, overlay_from_flags(args)?)?;

    let (train_full, test_full) = load_mnist_dir(&cfg.data_dir)?;
    let train = subsample(&train_full, cfg.train_size, cfg.seed)?;
    let test = subsample(&test_full, cfg.test_size, cfg.seed.wrapping_add(1))?;

    let results = run_sweep(&cfg, &train, &test)?;
    emit_csv(&results, &cfg.out)?;
    let script = cfg.out.with_extension("gp");
    emit_plot_script(&results, &cfg.out, &script)?;

    print!("{}", summary_table(&results));
    println!("wrote {}", cfg.out.display());
    println!("wrote {}", script.display());
    Ok(())
}

fn cmd_verify() -> ExitCode {
    let mut failures = 0;
    for report in run_all() {
        if report.passed {
            println!("ok   {}", report.name);
        } else {
            println!("FAIL {}: {}", report.name, report.detail);
            failures += 1;
        }
    }
    if failures == 0 {
        return ExitCode::SUCCESS;
    }
    eprintln!(
        "error: kind=verify-failed message={:?}",
        format!("{failures} checks failed")
    );
    ExitCode::FAILURE
}

fn cmd_synth(args: &SynthArgs) -> Result<(), BenchError> {
    write_synthetic_corpus(&args.dir, args.train_size, args.test_size, args.seed)?;
    println!(
        "wrote {} ({} train / {} test)",
        args.dir.display(),
        args.train_size,
        args.test_size
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Run(args) => cmd_run(args),
        Cmd::Verify => return cmd_verify(),
        Cmd::Synth(args) => cmd_synth(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: kind={} message={:?}", e.kind(), e.to_string());
            ExitCode::FAILURE
        }
    }
}
