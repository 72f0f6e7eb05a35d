//! Command-line front end.
//!
//! Exit codes: 0 ok or base, 1 not a base, 2 usage or parse error,
//! 3 undefined base size, 4 search ran out of budget.

pub mod format;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::certificate::Status;
use crate::constructions::Dispatcher;
use crate::domain::{codeset_to_partitions, Params, PointPerm, RegularPartition};
use crate::error::Error;
use crate::formulas::{base_size_alt, base_size_sym, Group};
use crate::search::{default_workers, SearchConfig};
use crate::verifier::is_base;

use format::{looks_like_witness, parse_codeset, WitnessFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_BASE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNDEFINED: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

const DEFAULT_BUDGET: u64 = 1 << 20;

#[derive(Parser, Debug)]
#[command(name = "partition-base", version, about = "Base sizes of Sym(ab) and Alt(ab) on (a,b)-regular partitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the base size and the rule that gives it.
    Size {
        a: usize,
        b: usize,
        #[arg(long)]
        alt: bool,
    },
    /// Build, verify and write a minimal base.
    Witness {
        a: usize,
        b: usize,
        #[arg(long)]
        alt: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Candidate tuples the search may verify, rounded up to whole trials of 64.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, env = "PARTITION_BASE_WORKERS")]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether a witness file or bare code set is a base.
    Verify {
        file: PathBuf,
        #[arg(long)]
        alt: bool,
        /// Number of the first point in the file (0 or 1).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        index_base: u8,
    },
    /// Print base sizes for 2 <= a <= amax and 2 <= b <= bmax, one row per b.
    Table {
        #[arg(long, default_value_t = 20)]
        amax: usize,
        #[arg(long, default_value_t = 10)]
        bmax: usize,
        #[arg(long)]
        alt: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Run the built-in checks.
    Selftest {
        #[arg(long, value_enum, default_value_t = selftest::Level::Quick)]
        level: selftest::Level,
        /// Witness file for the explicit (8,3) triple, points numbered from 1.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Tsv,
}

fn group_of(alt: bool) -> Group {
    if alt {
        Group::Alt
    } else {
        Group::Sym
    }
}

/// Runs the command line from the process arguments.
pub fn run() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line on explicit arguments and streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Size { a, b, alt } => cmd_size(a, b, group_of(alt), out),
        Command::Witness {
            a,
            b,
            alt,
            seed,
            budget,
            workers,
            out: path,
        } => {
            let cfg = SearchConfig {
                seed,
                budget,
                workers: workers.unwrap_or_else(default_workers).max(1),
                ..SearchConfig::default()
            };
            cmd_witness(a, b, group_of(alt), &cfg, path, out, err)
        }
        Command::Verify { file, alt, index_base } => cmd_verify(&file, group_of(alt), index_base as usize, out),
        Command::Table { amax, bmax, alt, format } => cmd_table(amax, bmax, group_of(alt), format, out),
        Command::Selftest { level, fixture } => selftest::cmd_selftest(level, fixture.as_deref(), out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Parse { .. } | Error::Domain(_) | Error::Shape(_) | Error::Regularity(_) => EXIT_USAGE,
                Error::Guard(_) => EXIT_USAGE,
            }
        }
    }
}

type CmdResult = crate::Result<i32>;

fn io(e: std::io::Error) -> Error {
    Error::Domain(format!("i/o error: {e}"))
}

fn cmd_size(a: usize, b: usize, group: Group, out: &mut dyn Write) -> CmdResult {
    let answer = match group {
        Group::Sym => base_size_sym(a, b)?,
        Group::Alt => base_size_alt(a, b)?,
    };
    writeln!(out, "{answer}").map_err(io)?;
    Ok(if answer.is_undefined() { EXIT_UNDEFINED } else { EXIT_OK })
}

fn cmd_witness(
    a: usize,
    b: usize,
    group: Group,
    cfg: &SearchConfig,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let params = Params::new(a, b)?;
    if !params.is_faithful() {
        writeln!(out, "undefined (action unfaithful)").map_err(io)?;
        return Ok(EXIT_UNDEFINED);
    }
    let cert = Dispatcher::new(cfg.clone()).witness(a, b, group)?;
    match &cert.status {
        Status::Unavailable { candidates } => {
            writeln!(
                err,
                "witness unavailable: search for a {group} base of ({a},{b}) stopped after {candidates} candidates (seed {}, budget {}); try a larger --budget or another --seed",
                cfg.seed, cfg.budget
            )
            .map_err(io)?;
            return Ok(EXIT_EXHAUSTED);
        }
        Status::Refuted(w) => {
            writeln!(err, "internal error: {} is not a base, witness {w}", cert.provenance).map_err(io)?;
            return Ok(EXIT_NOT_BASE);
        }
        Status::Unverified | Status::VerifiedBase => {}
    }
    let text = WitnessFile::from_certificate(&cert).serialize();
    match path {
        Some(p) => {
            std::fs::write(&p, text).map_err(io)?;
            writeln!(out, "provenance: {}", cert.provenance).map_err(io)?;
            writeln!(out, "size: {}", cert.size()).map_err(io)?;
            writeln!(out, "wrote {}", p.display()).map_err(io)?;
        }
        None => write!(out, "{text}").map_err(io)?,
    }
    Ok(EXIT_OK)
}

/// Cycle notation with points numbered from `base`.
pub fn cycles_from(perm: &PointPerm, base: usize) -> String {
    let cycles = perm.cycles();
    if cycles.is_empty() {
        return "()".to_string();
    }
    cycles
        .iter()
        .map(|c| {
            let pts: Vec<String> = c.iter().map(|p| (p + base).to_string()).collect();
            format!("({})", pts.join(" "))
        })
        .collect()
}

/// Partitions from a witness file or a bare code set.
pub fn load_partitions(text: &str, index_base: usize) -> crate::Result<Vec<RegularPartition>> {
    if looks_like_witness(text) {
        let file = WitnessFile::parse(text, index_base)?;
        if file.partitions.is_empty() {
            if let Some(set) = &file.codeset {
                return codeset_to_partitions(set);
            }
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "the file lists no partitions".into(),
            });
        }
        Ok(file.partitions)
    } else {
        codeset_to_partitions(&parse_codeset(text)?)
    }
}

fn cmd_verify(file: &std::path::Path, group: Group, index_base: usize, out: &mut dyn Write) -> CmdResult {
    let text = std::fs::read_to_string(file).map_err(io)?;
    let partitions = load_partitions(&text, index_base)?;
    let verdict = is_base(&partitions, group)?;
    if verdict.is_base {
        writeln!(out, "BASE").map_err(io)?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "NOT A BASE").map_err(io)?;
        if let Some(w) = verdict.witness {
            writeln!(out, "witness: {}", cycles_from(&w, index_base)).map_err(io)?;
        }
        Ok(EXIT_NOT_BASE)
    }
}

/// The table as text; rows are `b`, columns are `a`.
pub fn table_text(amax: usize, bmax: usize, group: Group, sep: char) -> String {
    let mut s = String::from("b\\a");
    for a in 2..=amax {
        s.push(sep);
        s.push_str(&a.to_string());
    }
    s.push('\n');
    for b in 2..=bmax {
        if amax < 2 {
            break;
        }
        s.push_str(&b.to_string());
        for a in 2..=amax {
            s.push(sep);
            let answer = match group {
                Group::Sym => base_size_sym(a, b),
                Group::Alt => base_size_alt(a, b),
            }
            .expect("a, b >= 2");
            match answer.value {
                Some(v) => s.push_str(&v.to_string()),
                None => s.push('-'),
            }
        }
        s.push('\n');
    }
    s
}

fn cmd_table(amax: usize, bmax: usize, group: Group, format: TableFormat, out: &mut dyn Write) -> CmdResult {
    let sep = match format {
        TableFormat::Csv => ',',
        TableFormat::Tsv => '\t',
    };
    write!(out, "{}", table_text(amax, bmax, group, sep)).map_err(io)?;
    Ok(EXIT_OK)
}
