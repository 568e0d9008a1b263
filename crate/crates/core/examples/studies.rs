//! Runs the convergence experiments and prints one fitted order per `c`.
//!
//! `cargo run --release --example studies -- [second-block|fourth-block] [periodic|dirichlet|neumann]`

use blockheat::convergence::{run_study, StudyConfig};
use blockheat::manufactured::problem_by_name;
use blockheat::operator::{BoundaryKind, StencilOrder};

fn main() -> blockheat::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stencil = match args.first().map(String::as_str) {
        Some("fourth-block") => StencilOrder::FourthBlock,
        _ => StencilOrder::SecondBlock,
    };
    let bc = match args.get(1).map(String::as_str) {
        Some("dirichlet") => BoundaryKind::Dirichlet,
        Some("neumann") => BoundaryKind::Neumann,
        _ => BoundaryKind::Periodic,
    };
    let eis = match stencil {
        StencilOrder::SecondBlock => -0.25,
        StencilOrder::FourthBlock => 4.0 / 13.0,
    };
    let config = StudyConfig::standard(stencil, bc, &[eis, 0.0, 1.0 / 6.0, -1.0 / 6.0]);
    let problem = problem_by_name(&config.problem)?;
    let report = run_study(&config, problem.as_ref())?;
    report.write_csv(std::io::stdout())?;
    for fit in &report.fits {
        println!("c = {:+.4}  order {:.3}", fit.c, fit.fitted_order);
    }
    Ok(())
}
