//! Command-line driver. Exit codes: 0 success, 1 usage or input error,
//! 2 no reduction (or no certificate), 3 search budget exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::analysis::{parachute_check, phi_over_components, two_maxima_check};
use crate::complex::{eval_word, Automorphism, Vertex3};
use crate::forms::deg_dwedge;
use crate::io::autfile::{print_automorphism, read_automorphism};
use crate::io::gen::{gen_tame, GeneratorSpec};
use crate::io::json::path_record;
use crate::io::parse::{parse_in, PHI_VARS};
use crate::reduction::{nontame_certificate, reduce_once, reduction_path, PathError, ReduceOutcome, ReductionStep, SearchBudget};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NON_REDUCIBLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tame3", version, about = "Degrees and reductions of automorphisms of affine 3-space over Q")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Stratified and total degrees of the vertex.
    Deg { file: PathBuf },
    /// The composite `f ∘ g`.
    Compose { f: PathBuf, g: PathBuf },
    /// Degrees of the pairwise wedges `dfi ∧ dfj`.
    Wedge { file: PathBuf },
    /// Checks the parachute inequality for `φ(y, z, w)` at `(f1, f2, f3)`.
    Parachute {
        file: PathBuf,
        #[arg(long)]
        phi: String,
    },
    /// Checks that the maximum of `deg fi + deg dfj ∧ dfk` is attained twice.
    TwoMaxima { file: PathBuf },
    /// One reduction step.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u32>,
    },
    /// Reduction path to the identity vertex.
    Path {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Whether two automorphisms define the same vertex.
    VertexEq { f: PathBuf, g: PathBuf },
    /// Degree certificate that the automorphism is not tame.
    CertifyNontame { file: PathBuf },
    /// Random tame word, printed as an automorphism file.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        #[arg(long, default_value_t = 3)]
        coeff_bound: i64,
        #[arg(long, default_value_t = 24)]
        max_total_degree: u32,
    },
}

fn budget(flag: Option<u32>) -> SearchBudget {
    match flag {
        Some(n) => SearchBudget::with_scale(n),
        None => SearchBudget::from_env(),
    }
}

fn load(path: &PathBuf) -> Result<Automorphism, String> {
    read_automorphism(path)
}

fn vertex(f: &Automorphism) -> Result<Vertex3, String> {
    f.vertex().map_err(|e| e.to_string())
}

fn print_step(out: &mut impl Write, s: &ReductionStep) -> std::io::Result<()> {
    writeln!(out, "kind: {}", s.kind)?;
    writeln!(out, "center: {}", s.center)?;
    writeln!(out, "pivot: {}", s.pivot)?;
    writeln!(out, "P(y, z): {}", s.data)?;
    if let Some(w) = &s.auxiliary {
        writeln!(out, "auxiliary: {}", w)?;
    }
    writeln!(out, "target: {}", s.target)?;
    writeln!(out, "degrees: {} -> {}", s.source.degrees(), s.target.degrees())
}

fn run_cmd(cmd: Cmd, out: &mut impl Write) -> Result<i32, String> {
    let io = |e: std::io::Error| e.to_string();
    match cmd {
        Cmd::Deg { file } => {
            let f = load(&file)?;
            let v = vertex(&f)?;
            let d = v.degrees();
            for (i, c) in f.components.iter().enumerate() {
                writeln!(out, "deg f{} = {}", i + 1, c.deg()).map_err(io)?;
            }
            let s: Vec<String> = d.stratified.iter().map(|x| x.to_string()).collect();
            writeln!(out, "stratified: {}", s.join(" ")).map_err(io)?;
            writeln!(out, "total: {}", d.total).map_err(io)?;
            writeln!(out, "top: {}", d.top).map_err(io)?;
        }
        Cmd::Compose { f, g } => {
            let h = load(&f)?.compose(&load(&g)?);
            write!(out, "{}", print_automorphism(&h)).map_err(io)?;
        }
        Cmd::Wedge { file } => {
            let f = load(&file)?;
            let c = &f.components;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                writeln!(out, "deg df{}^df{} = {}", i + 1, j + 1, deg_dwedge(&c[i], &c[j])).map_err(io)?;
            }
        }
        Cmd::Parachute { file, phi } => {
            let f = load(&file)?;
            let p = parse_in(&phi, PHI_VARS, 1, 1).map_err(|e| format!("--phi: {}", e))?;
            let r = parachute_check(&f.components, &phi_over_components(&p, &f.components)).map_err(|e| e.to_string())?;
            writeln!(out, "deg phi(f1) = {}", r.lhs).map_err(io)?;
            writeln!(out, "virtual degree = {}", r.virtual_degree).map_err(io)?;
            writeln!(out, "multiplicity = {}", r.multiplicity).map_err(io)?;
            writeln!(out, "lower bound = {}", r.rhs).map_err(io)?;
            writeln!(out, "holds: {}", r.holds).map_err(io)?;
        }
        Cmd::TwoMaxima { file } => {
            let f = load(&file)?;
            let r = two_maxima_check(&f.components);
            for (i, v) in r.values.iter().enumerate() {
                writeln!(out, "deg f{} + deg d(others) = {}", i + 1, v).map_err(io)?;
            }
            writeln!(out, "maximum attained {} times; holds: {}", r.max_count, r.holds).map_err(io)?;
        }
        Cmd::Reduce { file, budget: b } => {
            let v = vertex(&load(&file)?)?;
            match reduce_once(&v, &budget(b)).map_err(|e| e.to_string())? {
                ReduceOutcome::Step(s) => print_step(out, &s).map_err(io)?,
                ReduceOutcome::NonReducible(r) => {
                    writeln!(out, "{}", r).map_err(io)?;
                    return Ok(EXIT_NON_REDUCIBLE);
                }
            }
        }
        Cmd::Path { file, budget: b, json } => {
            let f = load(&file)?;
            let v = vertex(&f)?;
            let r = reduction_path(&f, &budget(b));
            if json {
                let rec = path_record(&v, &r);
                writeln!(out, "{}", serde_json::to_string_pretty(&rec).unwrap()).map_err(io)?;
            }
            return match r {
                Ok(p) => {
                    if !json {
                        for (k, s) in p.steps.iter().enumerate() {
                            writeln!(out, "step {}", k + 1).map_err(io)?;
                            print_step(out, s).map_err(io)?;
                        }
                        writeln!(out, "terminal: {} ({} steps)", p.terminal, p.steps.len()).map_err(io)?;
                    }
                    Ok(EXIT_OK)
                }
                Err(PathError::Invalid(e)) => Err(e.to_string()),
                Err(e) => {
                    if !json {
                        writeln!(out, "{}", e).map_err(io)?;
                    }
                    Ok(if matches!(e, PathError::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_NON_REDUCIBLE })
                }
            };
        }
        Cmd::VertexEq { f, g } => {
            let eq = vertex(&load(&f)?)? == vertex(&load(&g)?)?;
            writeln!(out, "{}", if eq { "equal" } else { "different" }).map_err(io)?;
        }
        Cmd::CertifyNontame { file } => {
            let f = load(&file)?;
            match nontame_certificate(&f).map_err(|e| e.to_string())? {
                Some(c) => {
                    let d: Vec<String> = c.degrees.iter().map(|e| format!("({},{},{})", e.0[0], e.0[1], e.0[2])).collect();
                    writeln!(out, "not tame").map_err(io)?;
                    writeln!(out, "degrees: {}", d.join(" ")).map_err(io)?;
                    writeln!(out, "pairwise Z-independent: {:?}", c.pairwise_independent).map_err(io)?;
                    writeln!(out, "no N-combination: {:?}", c.no_combination).map_err(io)?;
                    writeln!(out, "no 2δ pairing: {}", c.no_two_delta).map_err(io)?;
                    for (l, found) in &c.searched_centers {
                        writeln!(out, "center {}: {}", l, if *found { "reduction found" } else { "no reduction" }).map_err(io)?;
                    }
                }
                None => {
                    writeln!(out, "no certificate: the degree criterion does not apply").map_err(io)?;
                    return Ok(EXIT_NON_REDUCIBLE);
                }
            }
        }
        Cmd::Gen { seed, len, max_degree, coeff_bound, max_total_degree } => {
            let spec = GeneratorSpec { seed, length: len, max_elem_degree: max_degree, coeff_bound, max_total_degree };
            let f = eval_word(&gen_tame(&spec)).map_err(|e| e.to_string())?;
            write!(out, "# seed {} length {}\n{}", seed, len, print_automorphism(&f)).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(if e.use_stderr() { err as &mut dyn Write } else { out as &mut dyn Write }, "{}", e.render());
            return code;
        }
    };
    match run_cmd(cli.cmd, out) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {}", msg);
            EXIT_USAGE
        }
    }
}
