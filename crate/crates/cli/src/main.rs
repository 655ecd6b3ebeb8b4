mod args;

use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use cbrsp_core::analysis::{compare_report, parse_range, sweep, SweepGrid};
use cbrsp_core::channels::{
    enumerate_five_qubit_specs, enumerate_seven_qubit_specs, CharlieBasis, FiveQubitChannelSpec,
    GhzFamily, SevenQubitChannelSpec,
};
use cbrsp_core::noise::NoiseModel;
use cbrsp_core::protocols::{
    run_cjbrsp, run_deterministic_cbrsp, run_probabilistic_cbrsp, Directional, KnowledgeSplit,
    OutcomePolicy, TargetState,
};
use cbrsp_core::verify::{run_suite, Suite};
use clap::Parser;

use args::{Cli, Command, EnumerateArgs, Family, Format, ProtocolArg, RunArgs, SweepArgs, VerifyArgs};

enum Failure {
    Usage(String),
    Mismatch,
    /// The reader went away (e.g. piped into `head`); not an error.
    ClosedOutput,
}

impl From<cbrsp_core::Error> for Failure {
    fn from(e: cbrsp_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::ClosedOutput
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::EnumerateChannels(a) => enumerate(a),
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(()) | Err(Failure::ClosedOutput) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch) => ExitCode::from(2),
    }
}

fn enumerate(a: EnumerateArgs) -> Outcome {
    let basis: CharlieBasis = a.basis.parse()?;
    let lines: Vec<String> = match a.seven {
        None => enumerate_five_qubit_specs(basis).iter().map(|s| s.canonical()).collect(),
        Some(f) => {
            let family = match f {
                Family::Low => GhzFamily::LowAncilla,
                Family::High => GhzFamily::HighAncilla,
            };
            enumerate_seven_qubit_specs(family, basis).iter().map(|s| s.canonical()).collect()
        }
    };
    let mut out = io::stdout().lock();
    writeln!(out, "count={}", lines.len())?;
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn parse_target(text: &str) -> Result<TargetState, Failure> {
    let parts: Vec<&str> = text.split(',').collect();
    let [theta, phi] = parts[..] else {
        return Err(Failure::Usage(format!("target must be theta,phi; got {text:?}")));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("not a number: {s:?}")))
    };
    Ok(TargetState::new(num(theta)?, num(phi)?)?)
}

fn five_qubit_channel(name: &str) -> Result<FiveQubitChannelSpec, Failure> {
    Ok(match name {
        "standard" => FiveQubitChannelSpec::standard(),
        "noise-study" => FiveQubitChannelSpec::noise_study(),
        spec => spec.parse()?,
    })
}

fn seven_qubit_channel(name: &str, ancillas: &str) -> Result<SevenQubitChannelSpec, Failure> {
    if name.contains("ghz") {
        return Ok(name.parse()?);
    }
    let bits: Vec<u8> = ancillas
        .split(',')
        .map(|s| match s.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(Failure::Usage(format!("ancilla must be 0 or 1, got {other:?}"))),
        })
        .collect::<Result<_, _>>()?;
    let [s1, s2] = bits[..] else {
        return Err(Failure::Usage("--ancillas takes two values".into()));
    };
    Ok(SevenQubitChannelSpec::from_five(&five_qubit_channel(name)?, (s1, s2))?)
}

fn run(a: RunArgs) -> Outcome {
    let targets = Directional {
        a_to_b: parse_target(&a.t1)?,
        b_to_a: parse_target(&a.t2)?,
    };
    let policy = match (&a.force, a.seed, a.all) {
        (Some(f), _, _) => OutcomePolicy::forced_from_labels(f)?,
        (None, _, true) => OutcomePolicy::EnumerateAll,
        (None, seed, false) => OutcomePolicy::Sampled(seed.unwrap_or(0)),
    };
    let transcripts = match a.protocol {
        ProtocolArg::Prob => run_probabilistic_cbrsp(&five_qubit_channel(&a.channel)?, targets, &policy)?,
        ProtocolArg::Det => run_deterministic_cbrsp(&five_qubit_channel(&a.channel)?, targets, &policy)?,
        ProtocolArg::Joint => run_cjbrsp(
            &seven_qubit_channel(&a.channel, &a.ancillas)?,
            targets,
            &KnowledgeSplit::default(),
            &policy,
        )?,
    };
    let json = if a.all {
        serde_json::to_string_pretty(&transcripts)
    } else {
        serde_json::to_string_pretty(&transcripts[0])
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(io::stdout().lock(), "{json}")?;
    Ok(())
}

fn sweep_cmd(a: SweepArgs) -> Outcome {
    let models = a
        .noise
        .split(',')
        .map(|m| m.parse::<NoiseModel>())
        .collect::<Result<Vec<_>, _>>()?;
    let grid = SweepGrid {
        models,
        etas: parse_range(&a.eta)?,
        theta1: parse_range(&a.theta1)?,
        theta2: parse_range(&a.theta2)?,
        phi1: parse_range(&a.phi1)?,
        phi2: parse_range(&a.phi2)?,
    };
    let records = sweep(&grid)?;

    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for r in &records {
                w.serialize(r).map_err(csv_failure)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, &records).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(sink)?;
        }
    }

    // The comparison is informational; a mismatch does not change the status.
    let report = compare_report(&records);
    eprintln!(
        "closed-form comparison: {:?} over {} points, max diff {:.3e}, {} above {:.0e}",
        report.verdict,
        report.points,
        report.max_diff,
        report.exceeding.len(),
        report.tolerance
    );
    Ok(())
}

fn csv_failure(e: csv::Error) -> Failure {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => Failure::Usage(format!("{other:?}")),
    }
}

fn verify(a: VerifyArgs) -> Outcome {
    let suite: Suite = a.suite.parse()?;
    let report = run_suite(suite)?;
    if a.json {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Failure::Usage(e.to_string()))?;
        println!("{json}");
    } else {
        for c in &report.criteria {
            println!("{c}");
            if !c.passed || c.passed_with_report {
                for d in &c.details {
                    println!("    {d}");
                }
            }
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}
