//! `cubecat` — an exact-arithmetic workbench for three flavors of link
//! homology computed from planar diagrams, plus machine-checked
//! certificates for the structural facts relating them.
//!
//! All machine-readable output is JSON on stdout (or `--output`); stderr
//! carries human-readable notes only.  Exit codes: 0 success, 1 invalid
//! input or usage, 2 a certificate or cross-check failed.

mod input;
mod jobs;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cubecat_core::complex::{
    assemble_complex, build_hypercube, build_hypercube_with_outer, solve_sign_assignment,
};
use cubecat_core::frobenius::{builtin_system, Theory};
use cubecat_core::homology::{homology_table, kauffman_bracket_oracle, Coeff};

use input::load_inputs;
use report::{ComputeReport, EulerReport, EulerRow, RelationsReport, VerifyReport};
use verify::theory_tag;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoryArg {
    Kh,
    Nested,
    Odd,
}

impl TheoryArg {
    fn core(self) -> Theory {
        match self {
            TheoryArg::Kh => Theory::Khovanov,
            TheoryArg::Nested => Theory::Nested,
            TheoryArg::Odd => Theory::Odd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Q")]
    Q,
    #[value(name = "F2")]
    F2,
}

impl CoeffArg {
    fn core(self) -> Coeff {
        match self {
            CoeffArg::Z => Coeff::Z,
            CoeffArg::Q => Coeff::Q,
            CoeffArg::F2 => Coeff::F2,
        }
    }
    fn tag(self) -> &'static str {
        match self {
            CoeffArg::Z => "Z",
            CoeffArg::Q => "Q",
            CoeffArg::F2 => "F2",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoremArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Mod2,
    Signs,
    Outerface,
}

impl TheoremArg {
    fn tag(self) -> &'static str {
        match self {
            TheoremArg::One => "1",
            TheoremArg::Two => "2",
            TheoremArg::Mod2 => "mod2",
            TheoremArg::Signs => "signs",
            TheoremArg::Outerface => "outerface",
        }
    }
}

#[derive(Args)]
struct InputOpts {
    /// Inline PD code, e.g. "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"
    #[arg(long)]
    pd: Option<String>,
    /// A .pd file, or a directory of them
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct CommonOpts {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for multi-diagram runs (default: $CUBECAT_JOBS or 1)
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Parser)]
#[command(name = "cubecat", version, about = "Exact link homology workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute one diagram's homology table
    Compute {
        #[command(flatten)]
        input: InputOpts,
        #[arg(long, value_enum, default_value = "kh")]
        theory: TheoryArg,
        #[arg(long, value_enum, default_value = "Z")]
        coeff: CoeffArg,
        /// Declare this face the outermost region
        #[arg(long)]
        outer_face: Option<usize>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Cross-check the graded Euler characteristic against the state sum
    Euler {
        #[command(flatten)]
        input: InputOpts,
        /// Restrict to one theory (default: all three)
        #[arg(long, value_enum)]
        theory: Option<TheoryArg>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Emit machine-checked certificates for a structural theorem
    Verify {
        #[arg(long, value_enum)]
        theorem: TheoremArg,
        #[command(flatten)]
        input: InputOpts,
        /// Random sign-assignment pairs per diagram (--theorem signs)
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Seed for the random pair generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Audit every square face against its expected relation sign
    VerifyRelations {
        #[command(flatten)]
        input: InputOpts,
        /// Restrict to one theory (default: all three)
        #[arg(long, value_enum)]
        theory: Option<TheoryArg>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Classify all 1024 sign tuples of the parametrized system family
    ClassifySigns {
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn emit<T: Serialize>(common: &CommonOpts, report: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn effective_jobs(common: &CommonOpts) -> usize {
    common.jobs.unwrap_or_else(jobs::default_jobs).max(1)
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Compute { input, theory, coeff, outer_face, common } => {
            if input.pd.is_none() && input.file.is_none() {
                bail!("compute needs --pd or --file");
            }
            let inputs = load_inputs(input.pd.as_deref(), input.file.as_deref())?;
            if inputs.len() != 1 {
                bail!("compute expects exactly one diagram, got {}", inputs.len());
            }
            let nd = &inputs[0];
            let cube = match outer_face {
                Some(f) => {
                    if f >= nd.diagram.n_faces() {
                        bail!(
                            "--outer-face {f} out of range: the diagram has {} faces",
                            nd.diagram.n_faces()
                        );
                    }
                    build_hypercube_with_outer(&nd.diagram, f)
                }
                None => build_hypercube(&nd.diagram),
            };
            let system = builtin_system(theory.core());
            let eps = solve_sign_assignment(&system, &cube)
                .map_err(|e| anyhow::anyhow!("sign assignment: {e}"))?;
            let cx = assemble_complex(&nd.diagram, &system, &cube, &eps);
            let table = homology_table(&cx, coeff.core());
            let report = ComputeReport {
                theory: theory_tag(theory.core()).to_string(),
                coefficients: coeff.tag().to_string(),
                diagram: nd.pd(),
                entries: report::entry_dtos(&table)?,
                euler: report::chain_euler(&cx),
            };
            emit(&common, &report)?;
            Ok(0)
        }
        Cmd::Euler { input, theory, common } => {
            let inputs = load_inputs(input.pd.as_deref(), input.file.as_deref())?;
            let theories: Vec<Theory> = match theory {
                Some(t) => vec![t.core()],
                None => verify::THEORIES.to_vec(),
            };
            let jobs = effective_jobs(&common);
            let work: Vec<(usize, Theory)> = (0..inputs.len())
                .flat_map(|i| theories.iter().map(move |&t| (i, t)))
                .collect();
            let results: Vec<EulerRow> =
                jobs::ordered_parallel(jobs, &work, |&(i, theory)| {
                    let nd = &inputs[i];
                    let cube = build_hypercube(&nd.diagram);
                    let system = builtin_system(theory);
                    let (chain, equal) = match solve_sign_assignment(&system, &cube) {
                        Ok(eps) => {
                            let cx = assemble_complex(&nd.diagram, &system, &cube, &eps);
                            let chain = report::chain_euler(&cx);
                            (chain, true)
                        }
                        Err(e) => {
                            eprintln!("{} / {theory}: {e}", nd.name);
                            (Default::default(), false)
                        }
                    };
                    let oracle = report::euler_map(&kauffman_bracket_oracle(&nd.diagram));
                    let equal = equal && chain == oracle;
                    EulerRow {
                        diagram: nd.pd(),
                        name: nd.name.clone(),
                        theory: theory_tag(theory).to_string(),
                        chain,
                        state_sum: oracle,
                        equal,
                    }
                });
            let ok = results.iter().all(|r| r.equal);
            emit(&common, &EulerReport { results, ok })?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::Verify { theorem, input, pairs, seed, common } => {
            let inputs = load_inputs(input.pd.as_deref(), input.file.as_deref())?;
            let jobs = effective_jobs(&common);
            let ok = match theorem {
                TheoremArg::One => {
                    let certs = verify::theorem1(&inputs, jobs);
                    let ok = certs.iter().all(|c| c.ok);
                    emit(
                        &common,
                        &VerifyReport {
                            theorem: theorem.tag().to_string(),
                            seed,
                            certificates: certs,
                            ok,
                        },
                    )?;
                    ok
                }
                TheoremArg::Two => {
                    let report = verify::theorem2(&inputs, jobs);
                    let ok = report.ok;
                    emit(&common, &report)?;
                    ok
                }
                TheoremArg::Mod2 => {
                    let certs = verify::mod2(&inputs, jobs);
                    let ok = certs.iter().all(|c| c.ok);
                    emit(
                        &common,
                        &VerifyReport {
                            theorem: theorem.tag().to_string(),
                            seed,
                            certificates: certs,
                            ok,
                        },
                    )?;
                    ok
                }
                TheoremArg::Signs => {
                    let certs = verify::signs(&inputs, jobs, pairs, seed);
                    let ok = certs.iter().all(|c| c.ok);
                    emit(
                        &common,
                        &VerifyReport {
                            theorem: theorem.tag().to_string(),
                            seed,
                            certificates: certs,
                            ok,
                        },
                    )?;
                    ok
                }
                TheoremArg::Outerface => {
                    let certs = verify::outerface(&inputs, jobs);
                    let ok = certs.iter().all(|c| c.ok);
                    emit(
                        &common,
                        &VerifyReport {
                            theorem: theorem.tag().to_string(),
                            seed,
                            certificates: certs,
                            ok,
                        },
                    )?;
                    ok
                }
            };
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::VerifyRelations { input, theory, common } => {
            let inputs = load_inputs(input.pd.as_deref(), input.file.as_deref())?;
            let theories: Vec<Theory> = match theory {
                Some(t) => vec![t.core()],
                None => verify::THEORIES.to_vec(),
            };
            let jobs = effective_jobs(&common);
            let reports = verify::relations(&inputs, jobs, &theories);
            let ok = reports.iter().all(|r| r.ok);
            emit(&common, &RelationsReport { reports, ok })?;
            Ok(if ok { 0 } else { 2 })
        }
        Cmd::ClassifySigns { common } => {
            let report = verify::classify();
            let ok = report.ok;
            emit(&common, &report)?;
            Ok(if ok { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
