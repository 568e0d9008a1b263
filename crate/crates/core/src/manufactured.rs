//! Manufactured solutions with the forcing `F = u_t − u_xx` they imply.

use std::fmt;

use serde::Serialize;

use crate::boundary::{BoundaryData, DataTrace, Side};
use crate::error::{Error, Result};
use crate::grid::BlockGrid;
use crate::operator::BoundaryKind;

/// Highest total derivative order a problem must provide.
pub const MAX_DERIVATIVE: usize = 5;

pub trait ManufacturedProblem: Send + Sync {
    fn name(&self) -> String;

    /// `∂ₜᵃ ∂ₓᵇ u(x, t)` for `a + b ≤ MAX_DERIVATIVE`.
    fn derivative(&self, x: f64, t: f64, a: usize, b: usize) -> f64;

    fn u(&self, x: f64, t: f64) -> f64 {
        self.derivative(x, t, 0, 0)
    }

    /// `∂ₜᵃ ∂ₓᵇ F` with `F = u_t − u_xx`.
    fn forcing_derivative(&self, x: f64, t: f64, a: usize, b: usize) -> f64 {
        self.derivative(x, t, a + 1, b) - self.derivative(x, t, a, b + 2)
    }

    fn forcing(&self, x: f64, t: f64) -> f64 {
        self.forcing_derivative(x, t, 0, 0)
    }

    /// A reusable evaluator of `F(·, t)` on fixed points.
    fn forcing_sampler<'a>(&'a self, points: &'a [f64]) -> Box<dyn ForcingSampler + 'a> {
        Box::new(PointwiseForcing {
            problem: self,
            points,
        })
    }
}

pub trait ForcingSampler {
    fn fill(&mut self, t: f64, out: &mut [f64]);
}

struct PointwiseForcing<'a, P: ?Sized> {
    problem: &'a P,
    points: &'a [f64],
}

impl<P: ManufacturedProblem + ?Sized> ForcingSampler for PointwiseForcing<'_, P> {
    fn fill(&mut self, t: f64, out: &mut [f64]) {
        for (o, &x) in out.iter_mut().zip(self.points) {
            *o = self.problem.forcing(x, t);
        }
    }
}

/// Pointwise values of `u(·, t)` on the grid.
pub fn project(problem: &dyn ManufacturedProblem, grid: &BlockGrid, t: f64) -> Vec<f64> {
    grid.points().iter().map(|&x| problem.u(x, t)).collect()
}

/// Which domain an exp-cos problem is meant for; only affects defaults and naming.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Periodic,
    Ibvp,
}

/// `u = exp(cos(k(x − t)))`, a travelling wave.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpCos {
    pub kind: ProblemKind,
    pub k: f64,
}

impl ExpCos {
    pub fn new(kind: ProblemKind, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter(format!("wavenumber must be positive, got {k}")));
        }
        Ok(ExpCos { kind, k })
    }

    /// `k = 2π`, one period on `[0, 1]`.
    pub fn periodic_default() -> Self {
        ExpCos {
            kind: ProblemKind::Periodic,
            k: 2.0 * std::f64::consts::PI,
        }
    }

    /// `k = π` on `[0, 1]`.
    pub fn ibvp_default() -> Self {
        ExpCos {
            kind: ProblemKind::Ibvp,
            k: std::f64::consts::PI,
        }
    }
}

/// `dⁿ/dξⁿ e^{cos ξ} = Pₙ(sin ξ, cos ξ) e^{cos ξ}`, with `Pₙ₊₁ = Pₙ' − sin ξ · Pₙ`.
fn exp_cos_factor(n: usize, s: f64, c: f64) -> f64 {
    let s2 = s * s;
    match n {
        0 => 1.0,
        1 => -s,
        2 => s2 - c,
        3 => s * (-s2 + 3.0 * c + 1.0),
        4 => s2 * s2 - 6.0 * s2 * c - 4.0 * s2 + 3.0 * c * c + c,
        5 => s * (-s2 * s2 + 10.0 * s2 * c + 10.0 * s2 - 15.0 * c * c - 15.0 * c - 1.0),
        _ => panic!("derivative order {n} exceeds {MAX_DERIVATIVE}"),
    }
}

impl ManufacturedProblem for ExpCos {
    fn name(&self) -> String {
        match self.kind {
            ProblemKind::Periodic => "exp-cos-periodic".into(),
            ProblemKind::Ibvp => "exp-cos-ibvp".into(),
        }
    }

    fn derivative(&self, x: f64, t: f64, a: usize, b: usize) -> f64 {
        let n = a + b;
        let xi = self.k * (x - t);
        let (s, c) = xi.sin_cos();
        let sign = if a % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.k.powi(n as i32) * exp_cos_factor(n, s, c) * c.exp()
    }

    fn forcing_sampler<'a>(&'a self, points: &'a [f64]) -> Box<dyn ForcingSampler + 'a> {
        let (sin_kx, cos_kx) = points.iter().map(|&x| (self.k * x).sin_cos()).unzip();
        Box::new(ExpCosForcing {
            k: self.k,
            sin_kx,
            cos_kx,
        })
    }
}

struct ExpCosForcing {
    k: f64,
    sin_kx: Vec<f64>,
    cos_kx: Vec<f64>,
}

impl ForcingSampler for ExpCosForcing {
    // F = u (k sin ξ − k² (sin² ξ − cos ξ)), angle addition for ξ = kx − kt
    fn fill(&mut self, t: f64, out: &mut [f64]) {
        let k = self.k;
        let (st, ct) = (k * t).sin_cos();
        for ((o, &sx), &cx) in out.iter_mut().zip(&self.sin_kx).zip(&self.cos_kx) {
            let c = cx * ct + sx * st;
            let s = sx * ct - cx * st;
            *o = c.exp() * (k * s - k * k * (s * s - c));
        }
    }
}

/// Steady polynomial `u = Σ aᵢ xⁱ`, degree at most 5, with `F = −u_xx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Coefficients in ascending order; trailing zeros are dropped.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        let mut coeffs = coeffs.to_vec();
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.len() > MAX_DERIVATIVE + 1 {
            return Err(Error::DegreeTooHigh(coeffs.len() - 1));
        }
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("polynomial coefficients must be finite".into()));
        }
        Ok(Polynomial { coeffs })
    }

    /// Parse `"a0,a1,..."`.
    pub fn parse(spec: &str) -> Result<Self> {
        let coeffs = spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("bad polynomial coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::new(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "poly:{}", parts.join(","))
    }
}

impl ManufacturedProblem for Polynomial {
    fn name(&self) -> String {
        self.to_string()
    }

    fn derivative(&self, x: f64, _t: f64, a: usize, b: usize) -> f64 {
        if a > 0 {
            return 0.0;
        }
        let mut acc = 0.0;
        for (i, &ai) in self.coeffs.iter().enumerate().skip(b).rev() {
            let falling: f64 = (i - b + 1..=i).map(|m| m as f64).product();
            acc = acc * x + ai * falling;
        }
        acc
    }
}

/// Boundary data of a manufactured problem on `[0, length]`.
pub struct ProblemBoundary<'a> {
    problem: &'a dyn ManufacturedProblem,
    bc: BoundaryKind,
    length: f64,
}

impl<'a> ProblemBoundary<'a> {
    pub fn new(problem: &'a dyn ManufacturedProblem, bc: BoundaryKind, length: f64) -> Self {
        ProblemBoundary {
            problem,
            bc,
            length,
        }
    }
}

impl BoundaryData for ProblemBoundary<'_> {
    fn trace(&self, side: Side, trace: DataTrace, t: f64) -> Option<f64> {
        let x = match side {
            Side::Left => 0.0,
            Side::Right => self.length,
        };
        let g = match self.bc {
            BoundaryKind::Dirichlet => 0,
            BoundaryKind::Neumann => 1,
            BoundaryKind::Periodic => return None,
        };
        let p = self.problem;
        Some(match trace {
            DataTrace::Value => p.derivative(x, t, 0, g),
            DataTrace::ValueRate => p.derivative(x, t, 1, g),
            DataTrace::ValueAccel => p.derivative(x, t, 2, g),
            DataTrace::Forcing => p.forcing_derivative(x, t, 0, 0),
            DataTrace::ForcingX => p.forcing_derivative(x, t, 0, 1),
            DataTrace::ForcingXx => p.forcing_derivative(x, t, 0, 2),
            DataTrace::ForcingXxx => p.forcing_derivative(x, t, 0, 3),
            DataTrace::ForcingT => p.forcing_derivative(x, t, 1, 0),
            DataTrace::ForcingTx => p.forcing_derivative(x, t, 1, 1),
        })
    }
}

/// Resolve a CLI problem name.
pub fn problem_by_name(name: &str) -> Result<Box<dyn ManufacturedProblem>> {
    match name {
        "exp-cos-periodic" => Ok(Box::new(ExpCos::periodic_default())),
        "exp-cos-ibvp" => Ok(Box::new(ExpCos::ibvp_default())),
        _ => match name.strip_prefix("poly:") {
            Some(spec) => Ok(Box::new(Polynomial::parse(spec)?)),
            None => Err(Error::InvalidParameter(format!("unknown problem {name:?}"))),
        },
    }
}
