//! `mediatorless` command-line front end.
//!
//! Exit codes: 0 success, 1 failed assertion, 2 error, 3 equilibrium
//! check failed (certificate on stdout).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mediatorless::{
    load_game, load_mu, load_profile, load_script, run_batch, run_plan, Assertion, Batch, ExperimentPlan,
    HarnessError, Report, Scenario, SchedulerSpec, REPORT_SCHEMA,
};
use mediatorless_beliefs::{async_belief_check, verify_k_paranoid, ParanoidOptions, Protocol, Toy2, Toy3};
use mediatorless_equilibrium::{
    build_sampler, check_k_bayesian_nash, check_k_comm, check_k_correlated, check_k_nash, ResilienceMode, Verdict,
};
use mediatorless_game::{GameFile, MuFile};
use mediatorless_mpc::Transcript;
use mediatorless_net::race::race_game_demo;
use mediatorless_net::AdversaryScript;
use mediatorless_protocol::{joint_uniform_sample, run_cheap_talk, ProtocolConfig};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mediatorless", version, about = "Mediator and cheap-talk game experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a profile for k-resilience under an equilibrium concept.
    Check(CheckArgs),
    /// Print the sampler table of a correlated profile.
    Sampler {
        #[arg(long)]
        game: String,
        #[arg(long)]
        mu: String,
    },
    /// Play the synchronous mediator game.
    RunMediator(RunArgs),
    /// Play the cheap-talk protocol.
    #[command(name = "run-cheaptalk")]
    RunCheapTalk(RunArgs),
    /// Play the asynchronous mediator game.
    RunAsync(RunArgs),
    /// Jointly sample a uniform value in [1, N] over broadcast.
    SampleR(SampleArgs),
    /// Belief-system checks on toy protocols.
    Beliefs {
        #[command(subcommand)]
        command: BeliefsCommand,
    },
    /// Run an experiment plan file.
    RunPlan {
        plan: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// The race game under the example scheduler.
    Race {
        #[arg(long, default_value_t = 4)]
        players: usize,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, env = "MEDIATORLESS_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Write a corpus game and profile to files.
    Export {
        #[arg(long)]
        game: String,
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        game_out: PathBuf,
        #[arg(long)]
        mu_out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Concept {
    Nash,
    Correlated,
    Comm,
    BayesianNash,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Resilient,
    Strong,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    game: String,
    /// Strategy profile (nash, bayesian-nash).
    #[arg(long)]
    profile: Option<String>,
    /// Correlated profile (correlated, comm).
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum)]
    concept: Concept,
    #[arg(long, value_enum, default_value = "resilient")]
    mode: Mode,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    game: String,
    #[arg(long)]
    mu: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, env = "MEDIATORLESS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Type profile such as `1,0,1`; repeat for several. Defaults to all.
    #[arg(long = "types", value_delimiter = ';')]
    types: Vec<String>,
    #[arg(long)]
    adversary: Option<String>,
    /// fifo, random, race-example or custom:<file> (asynchronous runs).
    #[arg(long, default_value = "fifo")]
    scheduler: String,
    /// Punishment strategy profile for the asynchronous mediator.
    #[arg(long)]
    punishment: Option<String>,
    /// Fail unless the honest action distribution is within this distance.
    #[arg(long)]
    max_tv: Option<f64>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for per-run message transcripts (cheap talk only).
    #[arg(long)]
    dump_transcript: Option<PathBuf>,
    /// Omit per-run records from the report.
    #[arg(long)]
    summary_only: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    modulus: u64,
    #[arg(long, env = "MEDIATORLESS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    runs: u64,
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BeliefsCommand {
    /// Check that belief limits blame only coalitions, exhaustively.
    Verify {
        #[arg(long, default_value = "toy3")]
        protocol: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Use asynchronous delivery into the coalition.
        #[arg(long = "async")]
        asynchronous: bool,
        /// List every view, not only failing ones.
        #[arg(long)]
        detailed: bool,
        #[arg(long, env = "MEDIATORLESS_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| HarnessError::file(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_types(list: &[String]) -> Result<Vec<Vec<usize>>, HarnessError> {
    list.iter()
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| HarnessError::Plan(format!("bad type profile `{s}`"))))
                .collect()
        })
        .collect()
}

fn here() -> &'static Path {
    Path::new(".")
}

fn check(args: CheckArgs) -> Result<ExitCode, HarnessError> {
    let game = load_game(&args.game, here())?;
    let mode = match args.mode {
        Mode::Resilient => ResilienceMode::Resilient,
        Mode::Strong => ResilienceMode::Strong,
    };
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| HarnessError::Plan(format!("--{flag} is required")));
    let verdict = match args.concept {
        Concept::Nash => check_k_nash(&game, &load_profile(&need(&args.profile, "profile")?, &game, here())?, args.k, mode)?,
        Concept::BayesianNash => {
            check_k_bayesian_nash(&game, &load_profile(&need(&args.profile, "profile")?, &game, here())?, args.k, mode)?
        }
        Concept::Correlated => {
            let mu = load_mu(&need(&args.mu, "mu")?, &game, here())?;
            check_k_correlated(&game, mu.dist(0), args.k, mode)?
        }
        Concept::Comm => check_k_comm(&game, &load_mu(&need(&args.mu, "mu")?, &game, here())?, args.k, mode)?,
    };
    Ok(match verdict {
        Verdict::Pass => {
            println!("pass");
            ExitCode::SUCCESS
        }
        Verdict::Fail(cert) => {
            emit(&cert, None)?;
            ExitCode::from(3)
        }
    })
}

fn run(scenario: Scenario, args: RunArgs) -> Result<ExitCode, HarnessError> {
    let game = load_game(&args.game, here())?;
    let mu = load_mu(&args.mu, &game, here())?;
    let n = game.players();
    let mut batch = Batch::new(scenario, game, mu, args.k);
    batch.name = format!("{scenario:?}").to_lowercase();
    batch.game_ref = args.game.clone();
    batch.mu_ref = args.mu.clone();
    batch.seed = args.seed;
    batch.runs = args.runs;
    batch.record_runs = !args.summary_only;
    if !args.types.is_empty() {
        batch.types = parse_types(&args.types)?;
    }
    if let Some(a) = &args.adversary {
        batch.script = load_script(a, if scenario == Scenario::CheapTalk { n } else { n + 1 }, here())?;
    }
    batch.scheduler = SchedulerSpec::parse(&args.scheduler, here())?;
    if let Some(p) = &args.punishment {
        batch.punishment = Some(load_profile(p, &batch.game, here())?);
    }
    let mut assertions = vec![Assertion::HonestActed];
    if let Some(t) = args.max_tv {
        assertions.push(Assertion::TvAtMost { tolerance: Some(t) });
    }
    if scenario == Scenario::CheapTalk {
        assertions.push(Assertion::NoWrongReconstructions);
    }
    let report = run_batch(&batch, &assertions)?;
    if let Some(dir) = &args.dump_transcript {
        dump_transcripts(&batch, &report, dir)?;
    }
    finish(&report, args.report.as_deref())
}

/// Replays the cheap-talk runs of `report` with history recording on.
fn dump_transcripts(batch: &Batch, report: &Report, dir: &Path) -> Result<(), HarnessError> {
    if batch.scenario != Scenario::CheapTalk {
        return Err(HarnessError::Plan("transcripts are recorded for cheap-talk runs only".into()));
    }
    fs::create_dir_all(dir).map_err(|e| HarnessError::file(dir, e))?;
    let cfg = ProtocolConfig::new(batch.game.clone(), batch.mu.clone(), batch.k)?.with_history(true);
    for r in &report.runs {
        let run = run_cheap_talk(&cfg, &batch.script, &r.types, r.seed)?;
        let mut t = Transcript::from_records(batch.game.players(), &run.history);
        t.label_from_records(&run.history);
        emit(&t, Some(&dir.join(format!("run-{}.json", r.seed))))?;
    }
    Ok(())
}

fn finish(report: &Report, out: Option<&Path>) -> Result<ExitCode, HarnessError> {
    emit(report, out)?;
    for a in report.assertions.iter().filter(|a| !a.passed) {
        eprintln!("assertion failed: {}", a.detail);
    }
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct SampleReport {
    schema: &'static str,
    scenario: &'static str,
    n: usize,
    k: usize,
    modulus: u64,
    seed: u64,
    runs: u64,
    adversary: AdversaryScript,
    samples: Vec<u64>,
    counts: Vec<u64>,
    tv_to_uniform: f64,
}

fn sample(args: SampleArgs) -> Result<ExitCode, HarnessError> {
    let script = match &args.adversary {
        Some(a) => load_script(a, args.n, here())?,
        None => AdversaryScript::none(),
    };
    if args.modulus == 0 || args.modulus > 1 << 20 {
        return Err(HarnessError::Plan("modulus must be in [1, 2^20]".into()));
    }
    let samples: Vec<u64> = (0..args.runs)
        .map(|r| joint_uniform_sample(args.n, args.k, args.modulus, &script, args.seed.wrapping_add(r)))
        .collect::<Result<_, _>>()?;
    let mut counts = vec![0u64; args.modulus as usize];
    for &s in &samples {
        counts[s as usize - 1] += 1;
    }
    let uniform = vec![mediatorless_game::rational::ratio(1, args.modulus as i64); args.modulus as usize];
    let report = SampleReport {
        schema: REPORT_SCHEMA,
        scenario: "sample-r",
        n: args.n,
        k: args.k,
        modulus: args.modulus,
        seed: args.seed,
        runs: args.runs,
        adversary: script,
        tv_to_uniform: mediatorless::tv_distance(&counts, &uniform)?,
        samples,
        counts,
    };
    emit(&report, args.report.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn beliefs(cmd: BeliefsCommand) -> Result<ExitCode, HarnessError> {
    let BeliefsCommand::Verify { protocol, n, k, asynchronous, detailed, seed, report } = cmd;
    let p: Box<dyn Protocol> = match protocol.as_str() {
        "toy3" => Box::new(Toy3 { n }),
        "toy2" => Box::new(Toy2 { n }),
        other => return Err(HarnessError::Plan(format!("unknown protocol `{other}` (toy2, toy3)"))),
    };
    let opts = ParanoidOptions { detailed, seed, ..Default::default() };
    let out = if asynchronous { async_belief_check(p.as_ref(), k, &opts)? } else { verify_k_paranoid(p.as_ref(), k, &opts)? };
    eprintln!("{} views, {} failing", out.views, out.failing);
    emit(&out, report.as_deref())?;
    Ok(if out.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn export(game_ref: &str, mu_ref: Option<&str>, game_out: &Path, mu_out: Option<&Path>) -> Result<ExitCode, HarnessError> {
    let game = load_game(game_ref, here())?;
    emit(&GameFile::from_game(&game), Some(game_out))?;
    if let (Some(m), Some(out)) = (mu_ref, mu_out) {
        let mu = load_mu(m, &game, here())?;
        emit(&MuFile::from_profile(&game, &mu), Some(out))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Check(args) => check(args),
        Command::Sampler { game, mu } => {
            let g = load_game(&game, here())?;
            emit(&build_sampler(&load_mu(&mu, &g, here())?)?, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::RunMediator(args) => run(Scenario::Mediator, args),
        Command::RunCheapTalk(args) => run(Scenario::CheapTalk, args),
        Command::RunAsync(args) => run(Scenario::Async, args),
        Command::SampleR(args) => sample(args),
        Command::Beliefs { command } => beliefs(command),
        Command::RunPlan { plan, report } => {
            let text = fs::read_to_string(&plan).map_err(|e| HarnessError::file(&plan, e))?;
            let parsed: ExperimentPlan = serde_json::from_str(&text).map_err(|e| HarnessError::file(&plan, e))?;
            let base = plan.parent().unwrap_or(here());
            finish(&run_plan(&parsed, base)?, report.as_deref())
        }
        Command::Race { players, runs, seed } => {
            emit(&race_game_demo(players, runs, seed)?, None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { game, mu, game_out, mu_out } => export(&game, mu.as_deref(), &game_out, mu_out.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
