mod args;

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;

use blockheat::convergence::{error_norm, run_study, ReportFormat, StudyConfig};
use blockheat::grid::BlockGrid;
use blockheat::manufactured::{problem_by_name, project, ManufacturedProblem};
use blockheat::operator::{BoundaryKind, DiscreteOperator, SchemeSpec, StencilOrder};
use blockheat::symbol::{assemble_modal_basis, n6_symbol_table, symbol_table, ModalBasis, Split, SymbolRecord};
use blockheat::time::{integrate, StepPolicy};
use blockheat::Error;

use args::{AnalyzeArgs, Cli, Command, ConvergeArgs, Format, SchemeArgs, SolveArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Converge(a) => converge(a),
        Command::Analyze(a) => analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Instability { .. } | Error::NonFinite { .. } => 3,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => 1,
        _ => 2,
    }
}

fn problem_for(common: &SchemeArgs) -> blockheat::Result<Box<dyn ManufacturedProblem>> {
    let name = match (&common.problem, common.bc.into()) {
        (Some(p), _) => p.as_str(),
        (None, BoundaryKind::Periodic) => "exp-cos-periodic",
        (None, _) => "exp-cos-ibvp",
    };
    problem_by_name(name)
}

fn policy_for(common: &SchemeArgs) -> blockheat::Result<StepPolicy> {
    let stencil: StencilOrder = common.scheme.into();
    match common.kappa {
        Some(k) => StepPolicy::new(k),
        None => Ok(StepPolicy::default_for(stencil)),
    }
}

fn grid_for(bc: BoundaryKind, n: usize, length: f64) -> blockheat::Result<BlockGrid> {
    match bc {
        BoundaryKind::Periodic => BlockGrid::periodic(n, length),
        _ => BlockGrid::ibvp(n, length),
    }
}

fn sink(out: Option<&Path>) -> blockheat::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn solve(a: SolveArgs) -> blockheat::Result<()> {
    let common = &a.common;
    let spec = SchemeSpec::new(common.scheme.into(), common.bc.into(), a.c)?;
    warn_advisories(&spec);
    let problem = problem_for(common)?;
    let grid = grid_for(spec.bc, a.n, common.length)?;
    let op = DiscreteOperator::new(&grid, spec)?;
    let sol = integrate(&op, problem.as_ref(), common.t_end, policy_for(common)?)?;
    let exact = project(problem.as_ref(), &grid, common.t_end);
    let norm = error_norm(&sol.state, &exact, grid.s())?;

    #[derive(Serialize)]
    struct Snapshot<'a> {
        scheme: &'a str,
        bc: &'a str,
        c: f64,
        n: usize,
        problem: String,
        t_end: f64,
        dt: f64,
        steps: usize,
        error: f64,
        x: &'a [f64],
        numerical: &'a [f64],
        exact: &'a [f64],
    }

    let mut out = sink(common.out.as_deref())?;
    match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["x", "numerical", "exact", "error"])?;
            for ((x, v), u) in grid.points().iter().zip(&sol.state).zip(&exact) {
                w.write_record([x, v, u, &(v - u)].map(|z| format!("{z:e}")))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let snap = Snapshot {
                scheme: spec.stencil.name(),
                bc: spec.bc.name(),
                c: spec.c,
                n: a.n,
                problem: problem.name(),
                t_end: common.t_end,
                dt: sol.dt,
                steps: sol.steps,
                error: norm,
                x: grid.points(),
                numerical: &sol.state,
                exact: &exact,
            };
            serde_json::to_writer_pretty(&mut out, &snap)?;
            writeln!(out)?;
        }
    }
    if common.out.is_some() {
        println!("error = {norm:e} after {} steps (dt = {:e})", sol.steps, sol.dt);
    }
    Ok(())
}

fn converge(a: ConvergeArgs) -> blockheat::Result<()> {
    let common = &a.common;
    let stencil: StencilOrder = common.scheme.into();
    let cs = if a.c.is_empty() {
        match stencil {
            StencilOrder::SecondBlock => vec![-0.25, 0.0, 1.0 / 6.0, -1.0 / 6.0],
            StencilOrder::FourthBlock => vec![4.0 / 13.0, 0.0, 1.0 / 6.0, -1.0 / 6.0],
        }
    } else {
        a.c.clone()
    };
    let problem = problem_for(common)?;
    let config = StudyConfig {
        stencil,
        bc: common.bc.into(),
        cs,
        blocks: a.n.clone(),
        problem: problem.name(),
        length: common.length,
        t_end: common.t_end,
        kappa: policy_for(common)?.kappa,
    };
    for &c in &config.cs {
        warn_advisories(&SchemeSpec::new(stencil, config.bc, c)?);
    }
    let report = run_study(&config, problem.as_ref())?;
    let format = match common.format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
    };
    let summary = |w: &mut dyn Write| -> io::Result<()> {
        for f in &report.fits {
            writeln!(w, "{} {} c={:<10.6} order {:.3}", stencil.name(), config.bc.name(), f.c, f.fitted_order)?;
        }
        Ok(())
    };
    match &common.out {
        Some(path) => {
            report.save(path, format)?;
            summary(&mut io::stdout().lock())?;
        }
        None => {
            match format {
                ReportFormat::Csv => report.write_csv(io::stdout().lock())?,
                ReportFormat::Json => println!("{}", report.to_json()?),
            }
            summary(&mut io::stderr().lock())?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Analysis {
    scheme: &'static str,
    n: usize,
    c: f64,
    length: f64,
    verdict: String,
    advisories: Vec<&'static str>,
    norm_psi: f64,
    norm_psi_bound: f64,
    norm_psi_inverse: f64,
    norm_psi_inverse_bound: f64,
    min_determinant: f64,
    records: Vec<SymbolRecord>,
}

fn analyze(a: AnalyzeArgs) -> blockheat::Result<()> {
    let stencil: StencilOrder = a.scheme.into();
    let mut out = sink(a.out.as_deref())?;
    if a.table {
        let table = if stencil == StencilOrder::SecondBlock && a.n == 6 {
            n6_symbol_table(a.c)
        } else {
            symbol_table(stencil, a.n, a.length.unwrap_or(std::f64::consts::PI), a.c)?
        };
        match a.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &table)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(["omega", "bc", "value"])?;
                for row in &table.rows {
                    for (bc, values) in [("dirichlet", &row.dirichlet), ("neumann", &row.neumann)] {
                        for v in values {
                            w.write_record([row.omega.to_string(), bc.to_string(), format!("{v:.6}")])?;
                        }
                    }
                }
                w.flush()?;
            }
        }
        return Ok(());
    }

    let length = a.length.unwrap_or(2.0 * std::f64::consts::PI);
    let spec = SchemeSpec::new(stencil, BoundaryKind::Periodic, a.c)?;
    let basis = assemble_modal_basis(stencil, a.n, length, a.c, Split::PeriodicHalf)?;
    let advisories: Vec<&'static str> = spec.advisories().iter().map(|v| v.message()).collect();
    let verdict = if von_neumann_stable(&basis) {
        "stable".to_string()
    } else {
        "c ≥ 1/2: von Neumann condition violated".to_string()
    };
    let analysis = Analysis {
        scheme: stencil.name(),
        n: a.n,
        c: a.c,
        length,
        verdict,
        advisories,
        norm_psi: basis.norm_psi,
        norm_psi_bound: ModalBasis::norm_psi_bound(),
        norm_psi_inverse: basis.norm_psi_inverse,
        norm_psi_inverse_bound: basis.norm_psi_inverse_bound(),
        min_determinant: basis.min_determinant,
        records: basis.records.clone(),
    };
    match a.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &analysis)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["omega", "q1", "q2", "delta", "determinant"])?;
            for r in &analysis.records {
                w.write_record([r.omega, r.q1, r.q2, r.delta, r.determinant().norm()].map(|v| format!("{v:e}")))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn von_neumann_stable(basis: &ModalBasis) -> bool {
    let scale = 1.0 / (basis.s * basis.s);
    basis
        .records
        .iter()
        .all(|r| r.q1 <= 1e-10 * scale && r.q2 <= 1e-10 * scale)
}

fn warn_advisories(spec: &SchemeSpec) {
    for a in spec.advisories() {
        eprintln!("warning: c = {}: {}", spec.c, a.message());
    }
}
