//! Batch command-line frontend.
//!
//! Verbs map one-to-one onto library operations: `build-ts` and
//! `build-hda` construct models from system description files, `tensor` /
//! `interleave` / `coproduct` / `compose` combine artifacts, `check`
//! verifies model properties, `iso` constructs the canonical isomorphism,
//! `stats` prints counts, and `export` emits DOT. Results go to stdout or
//! `--out`; `--json` switches reports to machine-readable form.
//!
//! Exit codes: 0 success (for `check`: all checks pass; for `iso`: the
//! isomorphism exists), 1 failed verification verdict, 2 usage error,
//! 3 I/O error, 4 parse or format error, 5 invalid system or semantic
//! error, 6 termination guard, 7 internal hypothesis violation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::format;
use crate::hda::{self, Hda};
use crate::lts::{self, LtsSystem};
use crate::model::{self, ModelError};
use crate::progg::{self, SharedVariableSystem};

#[derive(Debug, Parser)]
#[command(name = "hdamodel", version, about = "Build and check higher-dimensional automata models of shared-variable programs")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// Emit machine-readable JSON reports instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the primary artifact to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Build the transition-system model of a system description file.
    BuildTs { system: PathBuf },
    /// Build the cube-filled model from a system description or a
    /// transition-system file.
    BuildHda {
        input: PathBuf,
        /// Stop filling at this dimension (mandatory for systems whose
        /// effective relation is not irreflexive).
        #[arg(long)]
        max_dim: Option<usize>,
        /// Print cells added per dimension to stderr.
        #[arg(long)]
        log: bool,
    },
    /// Tensor product of two automaton files.
    Tensor { a: PathBuf, b: PathBuf },
    /// Interleaving of two transition-system files.
    Interleave { a: PathBuf, b: PathBuf },
    /// Coproduct of two transition-system files.
    Coproduct { a: PathBuf, b: PathBuf },
    /// Parallel composition of two system description files.
    Compose { a: PathBuf, b: PathBuf },
    /// Check HM1–HM4, extensionality, determinism, and asymmetry of an
    /// automaton against a transition-system file.
    Check {
        automaton: PathBuf,
        system: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Verify that two automata are models of the same system related by
    /// the canonical isomorphism.
    Iso {
        a: PathBuf,
        b: PathBuf,
        system: PathBuf,
        #[arg(long)]
        max_dim: Option<usize>,
    },
    /// Print the f-vector, Euler characteristic, and relation size.
    Stats { input: PathBuf },
    /// Export the 1-skeleton of an automaton file as DOT.
    Export { input: PathBuf },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_SEMANTIC: i32 = 5;
pub const EXIT_TERMINATION: i32 = 6;
pub const EXIT_HYPOTHESIS: i32 = 7;

#[derive(Debug)]
struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CmdError { code, message: message.into() }
    }
}

impl From<format::FormatError> for CmdError {
    fn from(e: format::FormatError) -> Self {
        let code = match &e {
            format::FormatError::Progg(p) => semantic_code(p),
            _ => EXIT_PARSE,
        };
        CmdError::new(code, e.to_string())
    }
}

impl From<progg::ProggError> for CmdError {
    fn from(e: progg::ProggError) -> Self {
        CmdError::new(semantic_code(&e), e.to_string())
    }
}

impl From<ModelError> for CmdError {
    fn from(e: ModelError) -> Self {
        let code = match &e {
            ModelError::TerminationGuard(_) => EXIT_TERMINATION,
            _ => EXIT_HYPOTHESIS,
        };
        CmdError::new(code, e.to_string())
    }
}

fn semantic_code(e: &progg::ProggError) -> i32 {
    match e {
        progg::ProggError::Parse(_) => EXIT_PARSE,
        _ => EXIT_SEMANTIC,
    }
}

/// Parses arguments and runs them, returning the process exit code.
/// Reports and artifacts are appended to `out` (stderr-style diagnostics
/// included), which lets tests drive the CLI in-process.
pub fn run_from<I, S>(args: I, out: &mut String) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return EXIT_USAGE;
        }
    };
    match run(&cli) {
        Ok((code, text)) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &text) {
                        let _ = writeln!(out, "error: cannot write {}: {e}", path.display());
                        return EXIT_IO;
                    }
                }
                None => out.push_str(&text),
            }
            code
        }
        Err(e) => {
            let _ = writeln!(out, "error: {}", e.message);
            e.code
        }
    }
}

fn read(path: &Path) -> Result<String, CmdError> {
    fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path) -> Result<SharedVariableSystem, CmdError> {
    Ok(format::system_from_json(&read(path)?)?)
}

fn load_lts(path: &Path) -> Result<LtsSystem, CmdError> {
    Ok(format::lts_from_json(&read(path)?)?)
}

fn load_hda(path: &Path) -> Result<Hda, CmdError> {
    Ok(format::hda_from_json(&read(path)?)?)
}

/// A transition system from either a system description file or a
/// transition-system file, distinguished by their top-level keys.
fn load_ts_flexible(path: &Path) -> Result<LtsSystem, CmdError> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    if value.get("variables").is_some() {
        let sys = format::system_from_json(&text)?;
        Ok(progg::lts_model(&sys)?.system)
    } else {
        Ok(format::lts_from_json(&text)?)
    }
}

#[derive(Serialize)]
struct CheckDoc {
    hm1: bool,
    hm2: bool,
    hm3: bool,
    hm4: bool,
    extensional: bool,
    deterministic: bool,
    asymmetric: bool,
    witnesses: Vec<String>,
}

#[derive(Serialize)]
struct StatsDoc {
    f_vector: Vec<usize>,
    euler_characteristic: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    relation_size: Option<usize>,
}

fn euler(f: &[usize]) -> i64 {
    f.iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

fn run(cli: &Cli) -> Result<(i32, String), CmdError> {
    match &cli.cmd {
        Cmd::BuildTs { system } => {
            let sys = load_system(system)?;
            let m = progg::lts_model(&sys)?;
            Ok((EXIT_OK, format::lts_to_json(&m.system)))
        }
        Cmd::BuildHda { input, max_dim, log } => {
            let t = load_ts_flexible(input)?;
            let a = model::hda_model(&t, *max_dim)?;
            if *log {
                for n in 0..a.cells.dims() {
                    eprintln!("dimension {n}: {} cells", a.cells.count(n));
                }
            }
            Ok((EXIT_OK, format::hda_to_json(&a)))
        }
        Cmd::Tensor { a, b } => {
            let (t, _) = hda::tensor_hda(&load_hda(a)?, &load_hda(b)?);
            Ok((EXIT_OK, format::hda_to_json(&t)))
        }
        Cmd::Interleave { a, b } => {
            let (t, _) = lts::interleave(&load_lts(a)?, &load_lts(b)?);
            Ok((EXIT_OK, format::lts_to_json(&t)))
        }
        Cmd::Coproduct { a, b } => {
            let (t, _) = lts::coproduct_lts(&load_lts(a)?, &load_lts(b)?);
            Ok((EXIT_OK, format::lts_to_json(&t)))
        }
        Cmd::Compose { a, b } => {
            let sys = progg::parallel_compose(&load_system(a)?, &load_system(b)?)?;
            Ok((EXIT_OK, format::system_to_json(&sys)))
        }
        Cmd::Check { automaton, system, max_dim } => {
            let a = load_hda(automaton)?;
            let t = load_ts_flexible(system)?;
            let report = model::check_hm(&a, &t, *max_dim);
            let mut witnesses = Vec::new();
            if let Err(w) = &report.hm1 {
                witnesses.push(format!("HM1: {w}"));
            }
            if let Err(w) = &report.hm2 {
                witnesses.push(format!("HM2: 2-cell {w:?} has an unrelated label pair"));
            }
            if let Err((x, y)) = &report.hm3 {
                witnesses.push(format!("HM3: cells {x:?} and {y:?} share their face tuple"));
            }
            if let Err(w) = &report.hm4 {
                witnesses.push(format!("HM4: addable filler of dimension {}: {w:?}", w.m));
            }
            let extensional = hda::is_extensional(&a);
            if let Err((x, y)) = &extensional {
                witnesses.push(format!("extensionality: parallel edges {x:?}, {y:?}"));
            }
            let deterministic = hda::is_deterministic(&a);
            if let Err((x, y)) = &deterministic {
                witnesses.push(format!("determinism: edges {x:?}, {y:?}"));
            }
            let asymmetric = lts::is_asymmetric(&t.relation);
            if let Err((x, y)) = &asymmetric {
                witnesses.push(format!("asymmetry: {x} ⋉ {y} and {y} ⋉ {x}"));
            }
            let doc = CheckDoc {
                hm1: report.hm1.is_ok(),
                hm2: report.hm2.is_ok(),
                hm3: report.hm3.is_ok(),
                hm4: report.hm4.is_ok(),
                extensional: extensional.is_ok(),
                deterministic: deterministic.is_ok(),
                asymmetric: asymmetric.is_ok(),
                witnesses,
            };
            let all = doc.hm1 && doc.hm2 && doc.hm3 && doc.hm4;
            let text = if cli.json {
                serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
            } else {
                let mut s = String::new();
                let verdict = |b: bool| if b { "pass" } else { "FAIL" };
                let _ = writeln!(s, "HM1 (1-skeleton equals system): {}", verdict(doc.hm1));
                let _ = writeln!(s, "HM2 (square labels related):    {}", verdict(doc.hm2));
                let _ = writeln!(s, "HM3 (cells determined by faces): {}", verdict(doc.hm3));
                let _ = writeln!(s, "HM4 (maximal filling):          {}", verdict(doc.hm4));
                let _ = writeln!(s, "extensional: {}", verdict(doc.extensional));
                let _ = writeln!(s, "deterministic: {}", verdict(doc.deterministic));
                let _ = writeln!(s, "asymmetric relation: {}", verdict(doc.asymmetric));
                for w in &doc.witnesses {
                    let _ = writeln!(s, "  witness: {w}");
                }
                s
            };
            Ok((if all { EXIT_OK } else { EXIT_VERDICT }, text))
        }
        Cmd::Iso { a, b, system, max_dim } => {
            let a = load_hda(a)?;
            let b = load_hda(b)?;
            let t = load_ts_flexible(system)?;
            match model::canonical_iso(&a, &b, &t, *max_dim) {
                Ok(_) => {
                    let text = if cli.json {
                        "{\"isomorphic\": true}\n".to_string()
                    } else {
                        "isomorphic (canonical)\n".to_string()
                    };
                    Ok((EXIT_OK, text))
                }
                Err(e @ (ModelError::MissingFiller { .. } | ModelError::NotBijective(_))) => {
                    let text = if cli.json {
                        format!("{{\"isomorphic\": false, \"reason\": {:?}}}\n", e.to_string())
                    } else {
                        format!("not isomorphic: {e}\n")
                    };
                    Ok((EXIT_VERDICT, text))
                }
                Err(e) => Err(e.into()),
            }
        }
        Cmd::Stats { input } => {
            let text = read(input)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {e}", input.display())))?;
            let (f_vector, relation_size) = if value.get("relation").is_some() {
                let t = format::lts_from_json(&text)?;
                (t.hda.cells.f_vector(), Some(t.relation.len()))
            } else if value.get("variables").is_some() {
                let m = progg::lts_model(&format::system_from_json(&text)?)?;
                (m.system.hda.cells.f_vector(), Some(m.system.relation.len()))
            } else if value.get("labels").is_some() {
                (format::hda_from_json(&text)?.cells.f_vector(), None)
            } else {
                (format::pcs_from_json(&text)?.f_vector(), None)
            };
            let doc = StatsDoc { euler_characteristic: euler(&f_vector), f_vector, relation_size };
            let text = if cli.json {
                serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "f-vector: {:?}", doc.f_vector);
                let _ = writeln!(s, "Euler characteristic: {}", doc.euler_characteristic);
                if let Some(r) = doc.relation_size {
                    let _ = writeln!(s, "relation size: {r}");
                }
                s
            };
            Ok((EXIT_OK, text))
        }
        Cmd::Export { input } => {
            let a = load_hda(input)?;
            Ok((EXIT_OK, format::hda_to_dot(&a)))
        }
    }
}
