//! Error-inhibiting two-point block finite differences for the 1-D heat
//! equation `u_t = u_xx + F`.
//!
//! ```
//! use blockheat::prelude::*;
//!
//! let grid = BlockGrid::periodic(32, 1.0)?;
//! let spec = SchemeSpec::new(StencilOrder::SecondBlock, BoundaryKind::Periodic, -0.25)?;
//! let op = DiscreteOperator::new(&grid, spec)?;
//! let problem = ExpCos::periodic_default();
//! let sol = integrate(&op, &problem, 0.01, StepPolicy::default_for(spec.stencil))?;
//! let exact = project(&problem, &grid, 0.01);
//! assert!(error_norm(&sol.state, &exact, grid.s())? < 1e-4);
//! # Ok::<(), blockheat::Error>(())
//! ```

pub mod boundary;
pub mod convergence;
pub mod error;
pub mod grid;
pub mod manufactured;
pub mod operator;
pub mod symbol;
pub mod time;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/boundaries.md")]
    mod boundaries {}
    #[doc = include_str!("../../../book/src/symbols.md")]
    mod symbols {}
    #[doc = include_str!("../../../book/src/error-inhibition.md")]
    mod error_inhibition {}
    #[doc = include_str!("../../../book/src/time-stepping.md")]
    mod time_stepping {}
    #[doc = include_str!("../../../book/src/convergence-lab.md")]
    mod convergence_lab {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub mod prelude {
    pub use crate::boundary::{BoundaryData, DataTrace, FnBoundary, Homogeneous, Side};
    pub use crate::convergence::{error_norm, observed_order, run_study, truncation_vector, StudyConfig};
    pub use crate::grid::BlockGrid;
    pub use crate::manufactured::{project, ExpCos, ManufacturedProblem, Polynomial, ProblemBoundary};
    pub use crate::operator::{BoundaryKind, DiscreteOperator, SchemeSpec, StencilOrder};
    pub use crate::time::{integrate, StepPolicy};
}
