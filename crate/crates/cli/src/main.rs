use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use indexcode_core::bersim::{compare_worst_case, Channel};
use indexcode_core::enumerate::{brute_force_census, enumerate_optimal_codes};
use indexcode_core::minmax::select_minmax;
use indexcode_core::transfer::{s_prime_size, verify_optimality_by_theorem1};
use indexcode_core::{analyze, BerConfig, Error, IndexCode, IndexCodingProblem, Limits, OptimalityVerdict};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "indexcode", version, about = "Optimal linear index codes over GF(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    run: RunConfig,
}

#[derive(Args, Debug)]
struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,

    /// Largest S'(c) dimension the optimality oracle will walk.
    #[arg(long, default_value_t = Limits::default().sprime_dim as u64, value_parser = clap::value_parser!(u64).range(1..=40), global = true)]
    cap_sprime: u64,

    /// Most codes materialized by enumerate, minmax and ber.
    #[arg(long, default_value_t = Limits::default().codes, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    cap_codes: u64,

    /// Largest number of side-information bits for the fitting-matrix search.
    #[arg(long, default_value_t = Limits::default().fitting_bits as u64, value_parser = clap::value_parser!(u64).range(1..=40), global = true)]
    cap_fitting: u64,

    /// Largest n*c for the brute-force code census.
    #[arg(long, default_value_t = Limits::default().brute_force_bits as u64, value_parser = clap::value_parser!(u64).range(1..=40), global = true)]
    cap_brute: u64,

    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
}

impl RunConfig {
    fn limits(&self) -> Limits {
        Limits {
            sprime_dim: self.cap_sprime as usize,
            fitting_bits: self.cap_fitting as usize,
            codes: self.cap_codes,
            brute_force_bits: self.cap_brute as usize,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Problem class, optimal length and the method that found it.
    Analyze { problem: PathBuf },
    /// Every optimal-length code.
    Enumerate { problem: PathBuf },
    /// Worst-receiver transmission usage of every optimal code.
    Minmax {
        problem: PathBuf,
        /// Print only the first winning code.
        #[arg(long)]
        first: bool,
    },
    /// Monte Carlo worst-case BER of selected codes.
    Ber(BerArgs),
    /// Brute-force code count and transfer-matrix optimality check at one length.
    Oracle {
        problem: PathBuf,
        /// Code length to check.
        #[arg(long = "c", value_parser = clap::value_parser!(u64).range(1..=64))]
        c: u64,
    },
}

#[derive(Args, Debug)]
struct BerArgs {
    problem: PathBuf,
    /// Code given by its codewords, e.g. "x1+x2, x2+x3" (repeatable).
    #[arg(long)]
    code: Vec<String>,
    /// Code given by its id in the enumerate listing (repeatable).
    #[arg(long)]
    id: Vec<usize>,
    /// SNR grid in dB: "start:stop:step" or a comma-separated list.
    #[arg(long, default_value = "0:40:2")]
    snr: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// "rayleigh" or "fixed:<p>".
    #[arg(long, default_value = "rayleigh")]
    channel: String,
    /// Write a gnuplot script that plots the CSV written to --csv-out.
    #[arg(long)]
    plot_script: Option<PathBuf>,
    /// Also write the CSV table to this file.
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

/// Nonzero exit codes.
const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => EXIT_CAP,
        Some(Error::Inconsistent(_)) => EXIT_INCONSISTENT,
        Some(Error::NoSolution(_)) => EXIT_NO_SOLUTION,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.run.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new().filter_level(level).init();

    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn load(path: &PathBuf) -> anyhow::Result<IndexCodingProblem> {
    let p = IndexCodingProblem::load(path).with_context(|| format!("reading {}", path.display()))?;
    for w in p.warnings() {
        log::warn!("{w}");
    }
    Ok(p)
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_line(fields: &[String]) -> String {
    let quoted: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let limits = cli.run.limits();
    let format = cli.run.format;
    match &cli.command {
        Command::Analyze { problem } => cmd_analyze(&load(problem)?, &limits, format),
        Command::Enumerate { problem } => cmd_enumerate(&load(problem)?, &limits, format),
        Command::Minmax { problem, first } => cmd_minmax(&load(problem)?, &limits, format, *first),
        Command::Ber(args) => cmd_ber(&load(&args.problem)?, &limits, format, args),
        Command::Oracle { problem, c } => cmd_oracle(&load(problem)?, &limits, format, *c as usize),
    }
}

fn cmd_analyze(p: &IndexCodingProblem, limits: &Limits, format: Format) -> anyhow::Result<Output> {
    let r = analyze(p, limits)?;
    let mu = r.mu.map_or("-".to_string(), |m| m.to_string());
    let text = match format {
        Format::Json => json(&r)?,
        Format::Csv => {
            csv_line(&["class".into(), "c_opt".into(), "mu".into(), "method".into()])
                + &csv_line(&[r.class.to_string(), r.c_opt.to_string(), mu, r.method.to_string()])
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "messages   {}", r.messages)?;
            writeln!(s, "receivers  {}", r.receivers)?;
            writeln!(s, "class      {}", r.class)?;
            writeln!(s, "c_opt      {}", r.c_opt)?;
            writeln!(s, "mu         {mu}")?;
            writeln!(s, "method     {}", r.method)?;
            let checks: Vec<String> = r
                .cross_checks
                .iter()
                .map(|(m, c)| format!("{m}={c}"))
                .collect();
            writeln!(s, "checks     {}", checks.join(" "))?;
            if let Some(cd) = &r.cycles {
                let cycles: Vec<String> = cd
                    .cycles
                    .iter()
                    .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")))
                    .collect();
                writeln!(s, "cycles     {}", cycles.join(""))?;
            }
            if let Some(t) = &r.trace {
                for (i, stage) in t.stages.iter().enumerate() {
                    let xs: Vec<String> = stage.uncoded.iter().map(|x| format!("x{x}")).collect();
                    writeln!(s, "stage {:<4} lambda={} uncoded {}", i + 1, stage.lambda, xs.join(","))?;
                }
                if !t.stages.is_empty() {
                    writeln!(s, "core       {} receivers, length {}", t.core.len(), t.core_length)?;
                }
            }
            if !r.dropped_messages.is_empty() {
                let xs: Vec<String> = r.dropped_messages.iter().map(|x| format!("x{x}")).collect();
                writeln!(s, "dropped    {}", xs.join(","))?;
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn cmd_enumerate(p: &IndexCodingProblem, limits: &Limits, format: Format) -> anyhow::Result<Output> {
    let census = enumerate_optimal_codes(p, limits)?;
    let text = match format {
        Format::Json => json(&census)?,
        Format::Csv => {
            let mut s = csv_line(&["id".into(), "code".into()]);
            for (i, code) in census.codes.iter().flatten().enumerate() {
                s += &csv_line(&[(i + 1).to_string(), code.to_string()]);
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "c_opt {}  mu {}  codes {}", census.c_opt, census.mu, census.total)?;
            match &census.codes {
                Some(codes) => {
                    for (i, code) in codes.iter().enumerate() {
                        writeln!(s, "C{:<6} {}", i + 1, code.codeword_strings().join("   "))?;
                    }
                }
                None => writeln!(s, "(more than {} codes; listing skipped)", limits.codes)?,
            }
            s
        }
    };
    if census.codes.is_none() {
        eprintln!("error: {}", Error::cap("optimal code listing", census.total.to_string(), limits.codes));
        return Ok(Output { text, code: EXIT_CAP });
    }
    Ok(Output::ok(text))
}

fn cmd_minmax(p: &IndexCodingProblem, limits: &Limits, format: Format, first: bool) -> anyhow::Result<Output> {
    let mut report = select_minmax(p, limits)?;
    if first {
        report.winners.truncate(1);
    }
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            let mut header = vec!["id".to_string(), "code".to_string()];
            header.extend((1..=p.receivers().len()).map(|r| format!("t_use_R{r}")));
            header.push("t_max".into());
            let mut s = csv_line(&header);
            for u in &report.per_code {
                if first && !report.winners.contains(&u.id) {
                    continue;
                }
                let mut row = vec![u.id.to_string(), u.code.to_string()];
                row.extend(u.t_use.iter().map(|t| t.to_string()));
                row.push(u.t_max.to_string());
                s += &csv_line(&row);
            }
            s
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "c_opt {}  t_minmax {}", report.c_opt, report.t_minmax)?;
            let ids: Vec<String> = report.winners.iter().map(|i| format!("C{i}")).collect();
            writeln!(s, "winners {}", ids.join(" "))?;
            if !first {
                writeln!(s)?;
                for u in &report.per_code {
                    let uses: Vec<String> = u.t_use.iter().map(|t| t.to_string()).collect();
                    writeln!(
                        s,
                        "C{:<6} {:<48} t_use {}  t_max {}",
                        u.id,
                        u.code.codeword_strings().join("   "),
                        uses.join(" "),
                        u.t_max
                    )?;
                }
            } else if let Some(u) = report.winner_codes().next() {
                writeln!(s, "C{:<6} {}", u.id, u.code.codeword_strings().join("   "))?;
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn parse_snr(text: &str) -> anyhow::Result<Vec<f64>> {
    if let Some((start, rest)) = text.split_once(':') {
        let (stop, step) = rest.split_once(':').unwrap_or((rest, "1"));
        let (start, stop, step): (f64, f64, f64) = (start.trim().parse()?, stop.trim().parse()?, step.trim().parse()?);
        if step <= 0.0 || stop < start {
            bail!("SNR range {text:?} is empty or has a nonpositive step");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad SNR value {s:?}")))
        .collect()
}

fn parse_channel(text: &str) -> anyhow::Result<Channel> {
    match text.split_once(':') {
        None if text == "rayleigh" => Ok(Channel::RayleighBpsk),
        Some(("fixed", p)) => Ok(Channel::FixedP(p.trim().parse().with_context(|| format!("bad flip probability {p:?}"))?)),
        _ => bail!("unknown channel {text:?}; use \"rayleigh\" or \"fixed:<p>\""),
    }
}

fn cmd_ber(p: &IndexCodingProblem, limits: &Limits, format: Format, args: &BerArgs) -> anyhow::Result<Output> {
    let cfg = BerConfig {
        snr_grid_db: parse_snr(&args.snr).map_err(|e| Error::Config(format!("{e:#}")))?,
        trials: args.trials,
        seed: args.seed,
        channel: parse_channel(&args.channel).map_err(|e| Error::Config(format!("{e:#}")))?,
    };
    cfg.validate()?;

    let mut codes: Vec<(String, IndexCode)> = Vec::new();
    for text in &args.code {
        codes.push((text.clone(), IndexCode::parse(p.messages(), text)?));
    }
    if !args.id.is_empty() || codes.is_empty() {
        let census = enumerate_optimal_codes(p, limits)?;
        let listed = census.codes.ok_or_else(|| {
            Error::cap("optimal code listing", census.total.to_string(), limits.codes)
        })?;
        if args.id.is_empty() {
            for (i, code) in listed.into_iter().enumerate() {
                codes.push((format!("C{}", i + 1), code));
            }
        } else {
            for &id in &args.id {
                let code = listed
                    .get(id.wrapping_sub(1))
                    .ok_or_else(|| Error::Index(format!("code id {id} outside 1..={}", listed.len())))?;
                codes.push((format!("C{id}"), code.clone()));
            }
        }
    }

    let cmp = compare_worst_case(p, &codes, &cfg)?;
    let csv = cmp.to_csv()?;
    if let Some(path) = &args.csv_out {
        fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.plot_script {
        let data = args
            .csv_out
            .as_ref()
            .map_or("ber.csv".to_string(), |p| p.display().to_string());
        fs::write(path, cmp.plot_script(&data)).with_context(|| format!("writing {}", path.display()))?;
    }

    let text = match format {
        Format::Json => json(&cmp)?,
        Format::Csv => csv,
        Format::Table => {
            let mut s = String::new();
            write!(s, "{:>8}", "snr_db")?;
            for curve in &cmp.curves {
                write!(s, " {:>22}", truncate(&curve.label, 22))?;
            }
            writeln!(s)?;
            for k in 0..cfg.snr_grid_db.len() {
                write!(s, "{:>8}", cfg.snr_grid_db[k])?;
                for curve in &cmp.curves {
                    let r = &curve.result;
                    write!(s, " {:>22}", format!("{:.3e} ±{:.1e}", r.worst_case[k], r.worst_ci[k]))?;
                }
                writeln!(s)?;
            }
            writeln!(s)?;
            writeln!(s, "ranking by mean worst-case BER:")?;
            for (rank, &i) in cmp.ranking.iter().enumerate() {
                writeln!(s, "{:>3}. {:<24} {:.4e}", rank + 1, cmp.curves[i].label, cmp.mean_worst(i))?;
            }
            s
        }
    };
    Ok(Output::ok(text))
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.to_string()
    } else {
        s.chars().take(n - 1).collect::<String>() + "~"
    }
}

#[derive(Serialize)]
struct OracleReport {
    c: usize,
    s_prime_size: String,
    verdict: OptimalityVerdict,
    /// Length-c codes found by exhaustive search; `None` above the cap.
    brute_force_codes: Option<u64>,
}

fn cmd_oracle(p: &IndexCodingProblem, limits: &Limits, format: Format, c: usize) -> anyhow::Result<Output> {
    let su = p.normalize()?;
    let verdict = verify_optimality_by_theorem1(&su, c, limits)?;
    let brute_force_codes = match brute_force_census(p, c, limits) {
        Ok(n) => Some(n),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let no_solution = matches!(verdict, OptimalityVerdict::NoSolution { .. });
    if let Some(n) = brute_force_codes {
        if no_solution != (n == 0) {
            return Err(Error::Inconsistent(format!(
                "transfer-matrix check says {} but brute force finds {n} codes of length {c}",
                verdict.name()
            ))
            .into());
        }
    }
    let report = OracleReport {
        c,
        s_prime_size: s_prime_size(&su, c).to_string(),
        verdict,
        brute_force_codes,
    };
    let bf = report.brute_force_codes.map_or("-".to_string(), |n| n.to_string());
    let text = match format {
        Format::Json => json(&report)?,
        Format::Csv => {
            csv_line(&["c".into(), "s_prime_size".into(), "verdict".into(), "lambda".into(), "brute_force_codes".into()])
                + &csv_line(&[
                    c.to_string(),
                    report.s_prime_size.clone(),
                    report.verdict.name().into(),
                    lambda_of(&report.verdict),
                    bf,
                ])
        }
        Format::Table => {
            let mut s = String::new();
            writeln!(s, "c                  {c}")?;
            writeln!(s, "|S'(c)|            {}", report.s_prime_size)?;
            writeln!(s, "verdict            {}", report.verdict.name())?;
            match &report.verdict {
                OptimalityVerdict::Optimal { s_size, .. } => writeln!(s, "|S(c)|             {s_size}")?,
                OptimalityVerdict::NotOptimal { lambda, witness, .. } => {
                    writeln!(s, "lambda             {lambda}")?;
                    writeln!(s, "witness T")?;
                    for row in witness.row_strings() {
                        writeln!(s, "  {row}")?;
                    }
                }
                OptimalityVerdict::NoSolution { .. } => {}
            }
            writeln!(s, "brute-force codes  {bf}")?;
            s
        }
    };
    Ok(Output {
        text,
        code: if no_solution { EXIT_NO_SOLUTION } else { 0 },
    })
}

fn lambda_of(v: &OptimalityVerdict) -> String {
    match v {
        OptimalityVerdict::NotOptimal { lambda, .. } => lambda.to_string(),
        _ => "0".into(),
    }
}
