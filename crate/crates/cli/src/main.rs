//! `iposet`: command-line front end for the iposet library.
//!
//! Exit status: 0 on success or when a checked property holds, 1 when it
//! fails (or a law is violated), 2 on malformed input or usage errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use iposet::doc::{parse_iposet, print_iposet, to_dot};
use iposet::enumerate::{all_iposets, all_posets, counts_table, gp_closure, CountsRow, TableOptions};
use iposet::gp::{forbidden_filter, gp_decompose, level_membership, Tower};
use iposet::interval::{c2_decompose, canonical_trace, is_interval_order, order_of_sequence, IntervalSeq};
use iposet::laws::{run_laws, Op};
use iposet::patterns::{find_induced, two_two};
use iposet::sp::{n_witness, sp_decompose};
use iposet::{Embedding, Iposet};

#[derive(Parser)]
#[command(
    name = "iposet",
    version,
    about = "Posets with interfaces: composition, recognition and enumeration"
)]
struct Cli {
    /// Worker threads for parallel enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a property of the poset underlying a document.
    Check {
        file: PathBuf,
        #[arg(long)]
        property: Property,
    },
    /// Glue or juxtapose two documents.
    Compose {
        #[arg(long)]
        op: OpArg,
        left: PathBuf,
        right: PathBuf,
    },
    /// Print a gluing-parallel term, or NOT-GP.
    Decompose {
        file: PathBuf,
        /// Only accept terms within this alternation level.
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value = "C", requires = "level")]
        side: Tower,
    },
    /// Canonical interval sequence of an interval order.
    Trace { file: PathBuf },
    /// The interval order of an event sequence such as "b0 b1 e0 e1".
    Untrace {
        /// Reads standard input when absent.
        sequence: Option<String>,
    },
    /// List canonical forms on exactly N points.
    Enumerate {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        kind: Kind,
        #[arg(long, value_enum, default_value_t = EnumFormat::Hex)]
        format: EnumFormat,
    },
    /// Count table for 0..=max points.
    Table {
        #[arg(long)]
        max: usize,
        /// Also compute the expensive IP(5), SIP(6) and IP(6) cells.
        #[arg(long)]
        stretch: bool,
        #[arg(long, value_enum, default_value_t = TableFormat::Text)]
        format: TableFormat,
    },
    /// Convert a document to DOT or normalized JSON.
    Export {
        #[arg(long, value_enum)]
        format: ExportFormat,
        file: PathBuf,
    },
    /// Check the composition laws on all iposets up to N points.
    Laws {
        #[arg(long)]
        points: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    Sp,
    Interval,
    Gp,
    Forbidden,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    Glue,
    Par,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Poset,
    Iposet,
    Sip,
    Gp,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumFormat {
    Hex,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Json,
}

const HOLDS: u8 = 0;
const FAILS: u8 = 1;
const INPUT_ERROR: u8 = 2;

type Outcome = Result<u8, String>;

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| e.to_string())?
    };
}

macro_rules! put {
    ($out:expr, $($arg:tt)*) => {
        write!($out, $($arg)*).map_err(|e| e.to_string())?
    };
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(execute(&args, &mut io::stdout().lock(), &mut io::stderr().lock()))
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
fn execute(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return INPUT_ERROR;
            }
            let _ = write!(out, "{e}");
            return HOLDS;
        }
    };
    if let Some(jobs) = cli.jobs {
        // A second in-process call finds the pool already built; that only
        // matters to tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli.command, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            INPUT_ERROR
        }
    }
}

fn load(path: &Path) -> Result<Iposet, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_iposet(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn points(e: &Embedding) -> String {
    e.map.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn run(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Check { file, property } => check(&load(&file)?, property, out),
        Command::Compose { op, left, right } => {
            let (a, b) = (load(&left)?, load(&right)?);
            let op = match op {
                OpArg::Glue => Op::Glue,
                OpArg::Par => Op::Par,
            };
            let c = op.apply(&a, &b).map_err(|e| e.to_string())?;
            say!(out, "{}", print_iposet(&c));
            Ok(HOLDS)
        }
        Command::Decompose { file, level, side } => decompose(&load(&file)?, level, side, out),
        Command::Trace { file } => {
            let p = load(&file)?;
            match canonical_trace(p.poset()) {
                Ok(seq) => {
                    say!(out, "{seq}");
                    Ok(HOLDS)
                }
                Err(e) => {
                    say!(out, "{e}");
                    Ok(FAILS)
                }
            }
        }
        Command::Untrace { sequence } => {
            let text = match sequence {
                Some(s) => s,
                None => {
                    let mut s = String::new();
                    io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
                    s
                }
            };
            let seq: IntervalSeq = text.parse().map_err(|e: iposet::Error| e.to_string())?;
            let p = order_of_sequence(&seq).map_err(|e| e.to_string())?;
            say!(out, "{}", print_iposet(&Iposet::embed(&p)));
            Ok(HOLDS)
        }
        Command::Enumerate { points, kind, format } => {
            let forms = match kind {
                Kind::Poset => all_posets(points),
                Kind::Iposet => all_iposets(points, true),
                Kind::Sip => all_iposets(points, false),
                Kind::Gp => gp_closure(points).map(|v| v.into_iter().filter(|c| c.size() == points).collect()),
            }
            .map_err(|e| e.to_string())?;
            for c in &forms {
                match format {
                    EnumFormat::Hex => say!(out, "{}", c.to_hex()),
                    EnumFormat::Json => say!(out, "{}", print_iposet(&c.to_iposet())),
                }
            }
            Ok(HOLDS)
        }
        Command::Table { max, stretch, format } => {
            let opts = TableOptions {
                stretch,
                ..TableOptions::default()
            };
            let rows = counts_table(max, opts);
            let fresh = |row: &CountsRow, col: usize| -> bool {
                let defaults = TableOptions::default();
                (col == 4 && row.n > defaults.sip_limit) || (col == 5 && row.n > defaults.ip_limit)
            };
            match format {
                TableFormat::Text => put!(out, "{}", table_text(&rows, &fresh)),
                TableFormat::Json => {
                    for row in &rows {
                        say!(out, "{}", table_json(row, &fresh));
                    }
                }
            }
            Ok(HOLDS)
        }
        Command::Export { format, file } => {
            let p = load(&file)?;
            match format {
                ExportFormat::Dot => put!(out, "{}", to_dot(&p)),
                ExportFormat::Json => say!(out, "{}", print_iposet(&p)),
            }
            Ok(HOLDS)
        }
        Command::Laws { points } => {
            let reports = run_laws(points).map_err(|e| e.to_string())?;
            let mut code = HOLDS;
            for r in &reports {
                say!(out, "{r}");
                for v in &r.violations {
                    say!(out, "  {v}");
                }
                if !r.passed() {
                    code = FAILS;
                }
            }
            Ok(code)
        }
    }
}

fn verdict(holds: bool, witness: String, out: &mut dyn Write) -> Outcome {
    say!(out, "{}: {witness}", if holds { "yes" } else { "no" });
    Ok(if holds { HOLDS } else { FAILS })
}

fn check(p: &Iposet, property: Property, out: &mut dyn Write) -> Outcome {
    let q = p.poset();
    match property {
        Property::Sp => match n_witness(q) {
            Some(e) => verdict(false, format!("induced N at {}", points(&e)), out),
            None => verdict(true, sp_decompose(q).expect("N-free posets decompose").to_string(), out),
        },
        Property::Interval => {
            if is_interval_order(q) {
                let seq = canonical_trace(q).map_err(|e| e.to_string())?;
                verdict(true, seq.to_string(), out)
            } else {
                let e = find_induced(q, &two_two()).expect("non-interval orders contain 2+2");
                verdict(false, format!("induced 2+2 at {}", points(&e)), out)
            }
        }
        Property::Gp => match gp_decompose(p) {
            Some(t) => verdict(true, t.to_string(), out),
            None => verdict(false, "NOT-GP".to_string(), out),
        },
        Property::Forbidden => match forbidden_filter(q) {
            Some(f) => {
                let e = find_induced(q, &f.poset()).expect("filter hit has an embedding");
                verdict(true, format!("induced {} at {}", f.name(), points(&e)), out)
            }
            None => verdict(false, "no forbidden subposet".to_string(), out),
        },
    }
}

fn decompose(p: &Iposet, level: Option<usize>, side: Tower, out: &mut dyn Write) -> Outcome {
    let Some(level) = level else {
        return Ok(match gp_decompose(p) {
            Some(t) => {
                say!(out, "{t}");
                HOLDS
            }
            None => {
                say!(out, "NOT-GP");
                FAILS
            }
        });
    };
    if !level_membership(p, level, side) {
        say!(out, "NOT-IN-{side:?}{level}");
        return Ok(FAILS);
    }
    let term = match (side, level) {
        (Tower::C, 2) => c2_decompose(p).ok(),
        _ => None,
    }
    .or_else(|| gp_decompose(p))
    .expect("level members are gp");
    say!(out, "{term}");
    Ok(HOLDS)
}

fn cell(value: Option<u64>, fresh: bool) -> String {
    match value {
        Some(v) if fresh => format!("{v}*"),
        Some(v) => v.to_string(),
        None => "n.a.".to_string(),
    }
}

fn table_text(rows: &[CountsRow], fresh: &dyn Fn(&CountsRow, usize) -> bool) -> String {
    let mut lines = vec![std::iter::once("n".to_string())
        .chain(CountsRow::COLUMNS.iter().map(|c| c.to_string()))
        .collect::<Vec<_>>()];
    for row in rows {
        let mut line = vec![row.n.to_string()];
        line.extend(row.cells().iter().enumerate().map(|(i, &v)| cell(v, fresh(row, i))));
        lines.push(line);
    }
    let widths: Vec<usize> = (0..lines[0].len())
        .map(|i| lines.iter().map(|l| l[i].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &lines {
        let cells: Vec<String> = line.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    if rows
        .iter()
        .any(|r| (0..7).any(|i| fresh(r, i) && r.cells()[i].is_some()))
    {
        out.push_str("* new, not cross-checked against published values\n");
    }
    out
}

fn table_json(row: &CountsRow, fresh: &dyn Fn(&CountsRow, usize) -> bool) -> String {
    let mut fields = vec![format!("\"n\":{}", row.n)];
    let mut unverified = Vec::new();
    for (i, (name, v)) in CountsRow::COLUMNS.iter().zip(row.cells()).enumerate() {
        fields.push(match v {
            Some(v) => format!("\"{name}\":{v}"),
            None => format!("\"{name}\":null"),
        });
        if v.is_some() && fresh(row, i) {
            unverified.push(format!("\"{name}\""));
        }
    }
    fields.push(format!("\"unverified\":[{}]", unverified.join(",")));
    format!("{{{}}}", fields.join(","))
}
