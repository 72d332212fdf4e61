//! `derived-hall`: list objects, multiply basis elements, run identity checks
//! and write constant tables.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage, parse or I/O
//! error, 3 an enumeration bound was hit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use derived_hall::config::QuiverConfig;
use derived_hall::element::fraction_string;
use derived_hall::graded::{graded_aut_order, graded_objects, GradedObject};
use derived_hall::hall_derived::DerivedHall;
use derived_hall::heart::Limits;
use derived_hall::label::{graded_label, heart_label, parse_graded_label, parse_heart_label};
use derived_hall::table::{self, parse_degrees, ConstantTable, Mode, TableHeader};
use derived_hall::verify::{self, Suite, VerifyOptions};
use derived_hall::Error;

#[derive(Parser, Debug)]
#[command(name = "derived-hall", version, about = "Exact classical and derived Hall algebras of Dynkin quivers")]
struct Cli {
    /// Quiver config file, or a builtin name (A1..A9, D4, E6).
    #[arg(long, global = true, default_value = "A1")]
    quiver: String,

    /// Characteristic of the field; overrides the config file.
    #[arg(long = "q", global = true)]
    p: Option<u32>,

    /// Dimension bound for enumerated objects.
    #[arg(long, global = true)]
    max_dim: Option<usize>,

    /// Shift degrees to cover, as a..b (inclusive).
    #[arg(long, global = true)]
    degrees: Option<String>,

    /// Product engine: classical, derived or oracle.
    #[arg(long, global = true, default_value = "derived")]
    mode: String,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest space any single step may enumerate.
    #[arg(long, global = true, default_value_t = Limits::default().max_enumeration)]
    max_enumeration: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List isomorphism classes with their automorphism group orders.
    Objects,
    /// Print the structure constants of a product of two basis elements.
    Multiply { a: String, b: String },
    /// Run an identity check suite: assoc, unit, heart, oracle-eq, shift, homotopy or all.
    Verify {
        suite: String,
        /// Random instances for the homotopy suite; pair cap for oracle-eq.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Write the constant table for every basis pair within the bounds.
    Table,
}

/// A verification ran to completion and found counterexamples.
#[derive(Debug)]
struct VerificationFailed;

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for VerificationFailed {}

fn engine(cli: &Cli) -> Result<DerivedHall> {
    let cfg = QuiverConfig::resolve(&cli.quiver)?;
    let limits = Limits {
        max_enumeration: cli.max_enumeration,
        ..Limits::default()
    };
    let heart = cfg.heart(cli.p, limits).with_context(|| format!("quiver {}", cfg.name))?;
    Ok(DerivedHall::new(Arc::new(heart)))
}

fn degrees(cli: &Cli, default: &str) -> Result<std::ops::RangeInclusive<i64>> {
    Ok(parse_degrees(cli.degrees.as_deref().unwrap_or(default))?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn objects(cli: &Cli) -> Result<()> {
    let e = engine(cli)?;
    let h = e.heart();
    let max_dim = cli.max_dim.unwrap_or(2);
    let range = degrees(cli, "0..0")?;
    let mut text = String::new();
    if range == (0..=0) {
        for x in h.classes_up_to(max_dim) {
            text.push_str(&format!("{}\t{}\n", heart_label(h, &x), h.aut_order(&x)));
        }
    } else {
        for x in graded_objects(h, range, max_dim) {
            text.push_str(&format!("{}\t{}\n", graded_label(h, &x), graded_aut_order(h, &x)));
        }
    }
    emit(cli.out.as_deref(), &text)
}

fn multiply(cli: &Cli, a: &str, b: &str) -> Result<()> {
    let e = engine(cli)?;
    let h = e.heart();
    let mode: Mode = cli.mode.parse()?;
    let parse = |s: &str| -> Result<GradedObject> {
        Ok(match mode {
            Mode::Classical => GradedObject::heart(parse_heart_label(h, s)?),
            _ => parse_graded_label(h, s)?,
        })
    };
    let (x, y) = (parse(a)?, parse(b)?);
    let product = table::product(&e, mode, &x, &y)?;
    let (lx, ly) = (table::label(&e, mode, &x), table::label(&e, mode, &y));
    let mut rows: Vec<(String, String)> = product
        .iter()
        .map(|(z, c)| (table::label(&e, mode, z), fraction_string(c)))
        .collect();
    rows.sort();
    let text: String = rows.iter().map(|(z, v)| format!("{lx}\t{ly}\t{z}\t{v}\n")).collect();
    emit(cli.out.as_deref(), &text)
}

fn run_verify(cli: &Cli, suite: &str, samples: usize) -> Result<()> {
    let e = engine(cli)?;
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let opts = VerifyOptions {
        max_dim: cli.max_dim.unwrap_or(1),
        degrees: degrees(cli, "0..1")?,
        seed: cli.seed,
        samples,
    };
    let mut text = format!("quiver {} over F_{}\n", e.heart().name(), e.heart().p());
    let mut ok = true;
    for s in suites {
        let report = verify::run(&e, s, &opts)?;
        ok &= report.passed();
        text.push_str(&report.to_string());
    }
    emit(cli.out.as_deref(), &text)?;
    if ok {
        Ok(())
    } else {
        Err(VerificationFailed.into())
    }
}

fn run_table(cli: &Cli) -> Result<()> {
    let e = engine(cli)?;
    let mode: Mode = cli.mode.parse()?;
    let header = TableHeader::new(
        e.heart().name(),
        e.heart().p(),
        mode,
        cli.max_dim.unwrap_or(2),
        degrees(cli, "0..0")?,
    );
    // An existing table at the output path is a cache; an unreadable one is ignored.
    let cache = cli
        .out
        .as_deref()
        .filter(|p| p.exists())
        .and_then(|p| ConstantTable::load(p).ok());
    let t = table::build(&e, header, cache.as_ref())?;
    match cli.out.as_deref() {
        Some(path) => t.write(path)?,
        None => emit(None, &t.render())?,
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_resource() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Objects => objects(&cli),
        Command::Multiply { a, b } => multiply(&cli, a, b),
        Command::Verify { suite, samples } => run_verify(&cli, suite, *samples),
        Command::Table => run_table(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
