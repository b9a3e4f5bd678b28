//! The `wpvol` command line. [`run`] does all the work and returns the exit
//! code with the captured output, so it can be tested without a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache_file::{self, CACHE_ENV};
use crate::error::{Error, Result};
use crate::intersection::{closed_volume, correlator, psi_kappa};
use crate::poly::{render_symmetric, PolyRecord, VolumePolynomial};
use crate::recursion::{compute_volume, is_stable, level, VolumeCache};
use crate::reference::reference_keys;
use crate::report::{Report, Status};
use crate::ribbon::{census_csv, enumerate_trivalent};
use crate::verify::{Suite, Verifier};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wpvol", version, about = "Exact Weil-Petersson volumes and intersection numbers")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,

    /// Volume cache file, read before and written after the command.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print V_{g,n}; n = 0 gives the closed volume (g >= 2).
    Compute {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        boundaries: usize,
    },
    /// Print every V_{g,n} with 3g-3+n up to --max-level, then the rows of the
    /// reference table.
    Table {
        #[arg(long, default_value_t = 4)]
        max_level: u32,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Level of the correlator table for the kdv, virasoro and kontsevich suites.
        #[arg(long, default_value_t = crate::kdv::DEFAULT_TABLE_LEVEL)]
        max_level: u32,
    },
    /// Print int psi^alpha kappa_1^m over M_{g,n}.
    Intersections {
        #[arg(long)]
        genus: u32,
        /// Comma-separated psi exponents, one per marked point.
        #[arg(long, value_delimiter = ',', required = true)]
        psi: Vec<u32>,
        /// Power of kappa_1; defaults to 0.
        #[arg(long)]
        kappa: Option<u32>,
    },
    /// List trivalent ribbon graphs of type (g, n) with automorphism counts.
    Census {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        boundaries: usize,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget(_) => EXIT_BUDGET,
        Error::Unstable { .. } | Error::InvalidArgument(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => {
            EXIT_USAGE
        }
        _ => EXIT_VERIFY_FAILED,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<(i32, String)> {
    let cache = VolumeCache::new();
    if let Some(path) = &cli.cache {
        if path.exists() {
            cache_file::load(path, &cache)?;
        }
    }
    let result = match &cli.command {
        Command::Compute { genus, boundaries } => cmd_compute(*genus, *boundaries, cli.format, &cache).map(|s| (EXIT_OK, s)),
        Command::Table { max_level } => cmd_table(*max_level, cli.format, &cache).map(|s| (EXIT_OK, s)),
        Command::Verify { suite, max_level } => cmd_verify(suite, *max_level, cli.format, &cache),
        Command::Intersections { genus, psi, kappa } => {
            cmd_intersections(*genus, psi, *kappa, cli.format, &cache).map(|s| (EXIT_OK, s))
        }
        Command::Census { genus, boundaries } => cmd_census(*genus, *boundaries, cli.format).map(|s| (EXIT_OK, s)),
    };
    if let Some(path) = &cli.cache {
        cache_file::save(path, &cache)?;
    }
    result
}

fn volume_for(g: u32, n: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    if n == 0 && g >= 2 {
        return closed_volume(g, cache);
    }
    if !is_stable(g, n) || n == 0 {
        return Err(Error::InvalidArgument(format!(
            "(g, n) = ({g}, {n}) is unstable: need 2g - 2 + n > 0, and n = 0 only for g >= 2"
        )));
    }
    Ok((*compute_volume(g, n, cache)?).clone())
}

fn render_one(v: &VolumePolynomial) -> Result<String> {
    Ok(render_symmetric(&v.to_monomial_symmetric()?))
}

/// `V_{g,n}` in the requested format.
pub fn cmd_compute(g: u32, n: usize, format: Format, cache: &VolumeCache) -> Result<String> {
    let v = volume_for(g, n, cache)?;
    Ok(match format {
        Format::Human => format!("{}\n", render_one(&v)?),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&v.to_record())?),
        Format::Csv => v.to_csv(),
    })
}

/// Rows for every stable `(g, n)` with `n >= 1` and level at most
/// `max_level`, the closed volumes in that range, and the reference rows.
pub fn table_keys(max_level: u32) -> Vec<(u32, usize)> {
    let mut keys = Vec::new();
    for g in 0..=(max_level + 3) / 3 {
        for n in 0..=(max_level as usize + 3).saturating_sub(3 * g as usize) {
            let ok = if n == 0 { g >= 2 } else { is_stable(g, n) };
            if ok && level(g, n) <= max_level as i64 {
                keys.push((g, n));
            }
        }
    }
    keys.extend(reference_keys());
    keys.sort_unstable();
    keys.dedup();
    keys
}

pub fn cmd_table(max_level: u32, format: Format, cache: &VolumeCache) -> Result<String> {
    let keys = table_keys(max_level);
    let mut rows = Vec::new();
    for (g, n) in keys {
        match volume_for(g, n, cache) {
            Ok(v) => rows.push(v),
            Err(Error::Budget(msg)) => {
                return Err(Error::Budget(format!("table stopped at V_({g},{n}): {msg}")));
            }
            Err(e) => return Err(e),
        }
    }
    let mut out = String::new();
    match format {
        Format::Human => {
            for v in &rows {
                let _ = writeln!(out, "V_({},{}) = {}", v.g(), v.n(), render_one(v)?);
            }
        }
        Format::Json => {
            let records: Vec<PolyRecord> = rows.iter().map(|v| v.to_record()).collect();
            out = format!("{}\n", serde_json::to_string_pretty(&records)?);
        }
        Format::Csv => {
            out.push_str("g,n,p,x,num,den\n");
            for v in &rows {
                out.extend(v.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    suite: &'a str,
    passed: usize,
    failed: usize,
    inconclusive: usize,
    skipped: usize,
    #[serde(flatten)]
    report: &'a Report,
}

pub fn cmd_verify(suite: &str, max_level: u32, format: Format, cache: &VolumeCache) -> Result<(i32, String)> {
    let s: Suite = suite.parse()?;
    let report = Verifier::new(cache, max_level).run(s)?;
    let counts = [Status::Pass, Status::Fail, Status::Inconclusive, Status::Skipped].map(|st| report.count(st));
    let mut out = String::new();
    match format {
        Format::Human => {
            for c in &report.checks {
                let _ = writeln!(out, "{c}");
            }
            for n in &report.notes {
                let _ = writeln!(out, "NOTE {n}");
            }
            let _ = writeln!(
                out,
                "{s}: {} passed, {} failed, {} inconclusive, {} skipped",
                counts[0], counts[1], counts[2], counts[3]
            );
        }
        Format::Json => {
            let j = VerifyJson {
                suite: s.name(),
                passed: counts[0],
                failed: counts[1],
                inconclusive: counts[2],
                skipped: counts[3],
                report: &report,
            };
            out = format!("{}\n", serde_json::to_string_pretty(&j)?);
        }
        Format::Csv => {
            out.push_str("identity,status,detail\n");
            for c in &report.checks {
                let status = serde_json::to_value(c.status)?;
                let _ = writeln!(out, "{},{},{}", csv_field(&c.identity), status.as_str().unwrap_or(""), csv_field(&c.detail));
            }
        }
    }
    let code = if report.count(Status::Fail) > 0 { EXIT_VERIFY_FAILED } else { EXIT_OK };
    Ok((code, out))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn cmd_intersections(g: u32, psi: &[u32], kappa: Option<u32>, format: Format, cache: &VolumeCache) -> Result<String> {
    let n = psi.len();
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let m = kappa.unwrap_or(0);
    let total = psi.iter().sum::<u32>() as i64 + m as i64;
    let dim = level(g, n);
    if total != dim {
        return Err(Error::InvalidArgument(format!(
            "degrees add up to {total} but M_({g},{n}) has dimension {dim}"
        )));
    }
    let value = if m == 0 { correlator(g, psi, cache)? } else { psi_kappa(g, psi, m, cache)? };
    let psi_str: Vec<String> = psi.iter().map(u32::to_string).collect();
    Ok(match format {
        Format::Human => format!("{value}\n"),
        Format::Json => format!(
            "{}\n",
            serde_json::json!({"g": g, "psi": psi, "kappa": m, "value": value.to_string()})
        ),
        Format::Csv => format!("g,psi,kappa,value\n{g},{},{m},{value}\n", psi_str.join(";")),
    })
}

#[derive(Serialize)]
struct CensusRow {
    edges: usize,
    vertices: usize,
    faces: usize,
    genus: u32,
    aut: usize,
}

pub fn cmd_census(g: u32, n: usize, format: Format) -> Result<String> {
    let classes = enumerate_trivalent(g, n)?;
    Ok(match format {
        Format::Json => {
            let rows: Vec<CensusRow> = classes
                .iter()
                .map(|c| CensusRow {
                    edges: c.graph.num_edges(),
                    vertices: c.graph.num_vertices(),
                    faces: c.graph.num_faces(),
                    genus: g,
                    aut: c.aut,
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows)?)
        }
        Format::Human | Format::Csv => census_csv(&classes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp(args: &[&str]) -> Outcome {
        run(std::iter::once("wpvol").chain(args.iter().copied()))
    }

    #[test]
    fn compute_examples() {
        let o = wp(&["compute", "--genus", "1", "--boundaries", "2", "--format", "human"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "1/192 m_(2) + 1/96 m_(1,1) + π²/12 m_(1) + π⁴/4\n"));
        assert_eq!(wp(&["compute", "--genus", "0", "--boundaries", "3"]).stdout, "1\n");
        assert_eq!(wp(&["compute", "--genus", "2", "--boundaries", "0"]).stdout, "43π⁶/2160\n");
        let bad = wp(&["compute", "--genus", "0", "--boundaries", "2"]);
        assert_eq!(bad.code, EXIT_USAGE);
        assert!(bad.stderr.contains("unstable"));
    }

    #[test]
    fn intersections_examples() {
        assert_eq!(wp(&["intersections", "--genus", "1", "--psi", "1"]).stdout, "1/24\n");
        assert_eq!(wp(&["intersections", "--genus", "0", "--psi", "0,0,0"]).stdout, "1\n");
        assert_eq!(wp(&["intersections", "--genus", "2", "--psi", "1", "--kappa", "3"]).stdout, "169/1920\n");
        assert_eq!(wp(&["intersections", "--genus", "2", "--psi", "1"]).code, EXIT_USAGE);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(wp(&["verify", "--suite", "bogus"]).code, EXIT_USAGE);
        assert_eq!(wp(&["frobnicate"]).code, EXIT_USAGE);
        assert_eq!(wp(&["compute", "--genus", "x", "--boundaries", "1"]).code, EXIT_USAGE);
        assert_eq!(wp(&["--help"]).code, EXIT_OK);
    }

    #[test]
    fn table_keys_cover_reference() {
        let keys = table_keys(2);
        assert!(keys.contains(&(0, 5)) && keys.contains(&(1, 2)) && keys.contains(&(5, 1)));
        assert!(!keys.contains(&(0, 6)) || reference_keys().contains(&(0, 6)));
    }

    #[test]
    fn census_output() {
        let o = wp(&["census", "--genus", "1", "--boundaries", "1", "--format", "csv"]);
        assert_eq!(o.stdout, "E,V,n,g,aut\n3,2,1,1,6\n");
        assert_eq!(wp(&["census", "--genus", "3", "--boundaries", "1"]).code, EXIT_BUDGET);
    }
}
