//! Boundary data and the PDE trace identities used by the ghost closures.
//!
//! Ghost values need derivatives of the solution at the boundary that the
//! boundary condition does not prescribe. They are recovered from the PDE
//! `u_t = u_xx + F` evaluated at the endpoint:
//!
//! | closure   | trace      | identity                              |
//! |-----------|------------|---------------------------------------|
//! | Dirichlet | `u_xx`     | `g' - F`                              |
//! | Dirichlet | `u_xxxx`   | `g'' - F_t - F_xx`                    |
//! | Neumann   | `u_xxx`    | `g' - F_x`      (`g = u_x`)           |
//! | Neumann   | `u_xxxxx`  | `g'' - F_tx - F_xxx`                  |

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// Raw quantities a [`BoundaryData`] source can supply at an endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DataTrace {
    /// `g(t)`: the prescribed value (`u` for Dirichlet, `u_x` for Neumann).
    Value,
    /// `dg/dt`
    ValueRate,
    /// `d²g/dt²`
    ValueAccel,
    Forcing,
    ForcingX,
    ForcingXx,
    ForcingXxx,
    ForcingT,
    ForcingTx,
}

/// Source of boundary values and forcing traces. Accessors a closure does
/// not use may return `None`.
pub trait BoundaryData {
    fn trace(&self, side: Side, trace: DataTrace, t: f64) -> Option<f64>;

    fn require(&self, side: Side, trace: DataTrace, t: f64) -> Result<f64> {
        self.trace(side, trace, t)
            .ok_or(Error::MissingBoundaryTrace { side, trace })
    }
}

/// Zero boundary values and zero forcing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Homogeneous;

impl BoundaryData for Homogeneous {
    fn trace(&self, _: Side, _: DataTrace, _: f64) -> Option<f64> {
        Some(0.0)
    }
}

type TraceFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// Boundary data assembled from individual closures.
#[derive(Default)]
pub struct FnBoundary {
    traces: HashMap<(Side, DataTrace), TraceFn>,
}

impl FnBoundary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(
        mut self,
        side: Side,
        trace: DataTrace,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.traces.insert((side, trace), Box::new(f));
        self
    }
}

impl BoundaryData for FnBoundary {
    fn trace(&self, side: Side, trace: DataTrace, t: f64) -> Option<f64> {
        self.traces.get(&(side, trace)).map(|f| f(t))
    }
}

/// Quantities that appear in the affine part of a ghost relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClosureTrace {
    /// The boundary value `g` itself.
    Value,
    Uxx,
    Uxxx,
    Uxxxx,
    Uxxxxx,
}

impl ClosureTrace {
    /// Evaluate the trace at `side`, using the PDE to trade spatial
    /// derivatives for time derivatives of `g` and forcing traces.
    pub fn resolve(self, data: &dyn BoundaryData, side: Side, t: f64) -> Result<f64> {
        use DataTrace::*;
        let get = |trace| data.require(side, trace, t);
        Ok(match self {
            ClosureTrace::Value => get(Value)?,
            ClosureTrace::Uxx => get(ValueRate)? - get(Forcing)?,
            ClosureTrace::Uxxx => get(ValueRate)? - get(ForcingX)?,
            ClosureTrace::Uxxxx => get(ValueAccel)? - get(ForcingT)? - get(ForcingXx)?,
            ClosureTrace::Uxxxxx => get(ValueAccel)? - get(ForcingTx)? - get(ForcingXxx)?,
        })
    }
}
