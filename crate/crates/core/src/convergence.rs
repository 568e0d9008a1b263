//! Error norms, truncation errors, order fits and convergence studies.

use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::BlockGrid;
use crate::manufactured::{project, ExpCos, ManufacturedProblem, ProblemBoundary};
use crate::operator::{BoundaryKind, DiscreteOperator, SchemeSpec, StencilOrder};
use crate::symbol::{ModalBasis, C64};
use crate::time::{integrate, StepPolicy};

/// `sqrt(s Σ (v − u)²)`.
pub fn error_norm(v: &[f64], u: &[f64], s: f64) -> Result<f64> {
    if v.len() != u.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok((s * v.iter().zip(u).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).sqrt())
}

/// Least-squares slope of `log(error)` against `log(spacing)`.
///
/// ```
/// use blockheat::convergence::observed_order;
///
/// let p = observed_order(&[0.1, 0.05, 0.025], &[1e-2, 1.25e-3, 1.5625e-4]).unwrap();
/// assert!((p - 3.0).abs() < 1e-12);
/// ```
pub fn observed_order(spacings: &[f64], errors: &[f64]) -> Result<f64> {
    if spacings.len() != errors.len() {
        return Err(Error::DimensionMismatch {
            expected: spacings.len(),
            got: errors.len(),
        });
    }
    if spacings.len() < 2 {
        return Err(Error::InvalidParameter("order fit needs at least two rows".into()));
    }
    if spacings.iter().chain(errors).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidParameter("order fit needs positive finite values".into()));
    }
    let x: Vec<f64> = spacings.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|v| v.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("order fit needs distinct spacings".into()));
    }
    Ok(sxy / sxx)
}

/// Truncation errors of an operator on a smooth problem at time `t`.
#[derive(Clone, Debug, Serialize)]
pub struct TruncationProfile {
    /// `T_e = u_xx − (Q u + B)`.
    pub full: Vec<f64>,
    /// The interior stencil applied with exact values beyond the boundary.
    pub interior: Vec<f64>,
    /// `T_B = T_e − T_I`; zero away from the closure rows.
    pub boundary: Vec<f64>,
    pub interior_max: f64,
    pub boundary_max: f64,
    pub s: f64,
}

pub fn truncation_vector(
    op: &DiscreteOperator,
    problem: &dyn ManufacturedProblem,
    t: f64,
) -> Result<TruncationProfile> {
    let grid = op.grid();
    let spec = op.spec();
    let x = grid.points();
    let s = grid.s();
    let u = project(problem, grid, t);
    let uxx: Vec<f64> = x.iter().map(|&xi| problem.derivative(xi, t, 0, 2)).collect();
    let data = ProblemBoundary::new(problem, spec.bc, grid.length());
    let mut qu = op.apply(&u)?;
    op.add_boundary(t, &data, &mut qu)?;
    let full: Vec<f64> = uxx.iter().zip(&qu).map(|(a, b)| a - b).collect();

    let scale = spec.stencil.weight_scale() / (s * s);
    let weights = [
        spec.stencil.interior_weights(spec.c, true),
        spec.stencil.interior_weights(spec.c, false),
    ];
    let interior: Vec<f64> = (0..x.len())
        .map(|i| {
            let applied: f64 = weights[i % 2]
                .iter()
                .map(|&(o, w)| w * problem.u(x[i] + o as f64 * s, t))
                .sum();
            uxx[i] - scale * applied
        })
        .collect();
    let boundary: Vec<f64> = if spec.bc == BoundaryKind::Periodic {
        vec![0.0; x.len()]
    } else {
        full.iter().zip(&interior).map(|(a, b)| a - b).collect()
    };
    let max = |v: &[f64]| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    Ok(TruncationProfile {
        interior_max: max(&interior),
        boundary_max: max(&boundary),
        full,
        interior,
        boundary,
        s,
    })
}

/// Slopes of `max |T_I|` and `max |T_B|` over a sequence of block counts.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TruncationSlopes {
    pub interior: f64,
    pub boundary: Option<f64>,
}

pub fn truncation_slopes(
    spec: SchemeSpec,
    blocks: &[usize],
    length: f64,
    problem: &dyn ManufacturedProblem,
    t: f64,
) -> Result<TruncationSlopes> {
    let mut s = Vec::new();
    let mut ti = Vec::new();
    let mut tb = Vec::new();
    for &n in blocks {
        let op = build(spec, n, length)?;
        let p = truncation_vector(&op, problem, t)?;
        s.push(p.s);
        ti.push(p.interior_max);
        tb.push(p.boundary_max);
    }
    let boundary = if spec.bc == BoundaryKind::Periodic {
        None
    } else {
        Some(observed_order(&s, &tb)?)
    };
    Ok(TruncationSlopes {
        interior: observed_order(&s, &ti)?,
        boundary,
    })
}

fn build(spec: SchemeSpec, blocks: usize, length: f64) -> Result<DiscreteOperator> {
    let grid = match spec.bc {
        BoundaryKind::Periodic => BlockGrid::periodic(blocks, length)?,
        _ => BlockGrid::ibvp(blocks, length)?,
    };
    DiscreteOperator::new(&grid, spec)
}

/// Coefficients of a periodic error vector in the eigenbasis: `(ω, |ê₁|, |ê₂|)`.
pub fn modal_error_spectrum(basis: &ModalBasis, error: &[f64]) -> Result<Vec<(i64, f64, f64)>> {
    let n = basis.psi.nrows();
    if error.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: error.len(),
        });
    }
    let e = DMatrix::from_iterator(n, 1, error.iter().map(|&v| C64::new(v, 0.0)));
    let lu = basis.psi.clone().lu();
    let coeffs = lu
        .solve(&e)
        .ok_or_else(|| Error::InvalidParameter("eigenvector matrix is singular".into()))?;
    Ok(basis
        .frequencies
        .iter()
        .enumerate()
        .map(|(j, f)| (f.omega, coeffs[2 * j].norm(), coeffs[2 * j + 1].norm()))
        .collect())
}

/// One convergence experiment: a scheme, a set of `c` values and block counts.
#[derive(Clone, Debug, Serialize)]
pub struct StudyConfig {
    pub stencil: StencilOrder,
    pub bc: BoundaryKind,
    pub cs: Vec<f64>,
    pub blocks: Vec<usize>,
    pub problem: String,
    pub length: f64,
    pub t_end: f64,
    pub kappa: f64,
}

impl StudyConfig {
    /// The standard protocol: `N = 32, 64, 128`, `t = 1` on `[0, 1]`, with the
    /// exp-cos problem matching the boundary condition.
    pub fn standard(stencil: StencilOrder, bc: BoundaryKind, cs: &[f64]) -> Self {
        let problem = match bc {
            BoundaryKind::Periodic => ExpCos::periodic_default(),
            _ => ExpCos::ibvp_default(),
        };
        StudyConfig {
            stencil,
            bc,
            cs: cs.to_vec(),
            blocks: vec![32, 64, 128],
            problem: problem.name(),
            length: 1.0,
            t_end: 1.0,
            kappa: StepPolicy::default_for(stencil).kappa,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub scheme: String,
    pub bc: String,
    pub c: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub s: f64,
    pub error: f64,
    /// Pairwise order against the previous row of the same group.
    pub observed_order: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupFit {
    pub c: f64,
    /// Least-squares slope over all rows of the group.
    pub fitted_order: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportMetadata {
    pub problem: String,
    pub length: f64,
    pub t_end: f64,
    pub kappa: f64,
    pub version: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<ReportRow>,
    pub fits: Vec<GroupFit>,
}

pub const CSV_COLUMNS: [&str; 7] = ["scheme", "bc", "c", "N", "s", "error", "observed_order"];

impl ConvergenceReport {
    pub fn fit_for(&self, c: f64) -> Option<f64> {
        self.fits.iter().find(|f| f.c == c).map(|f| f.fitted_order)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_COLUMNS)?;
        for r in &self.rows {
            w.write_record([
                r.scheme.clone(),
                r.bc.clone(),
                format!("{}", r.c),
                r.n.to_string(),
                format!("{:e}", r.s),
                format!("{:e}", r.error),
                r.observed_order.map(|p| format!("{p:.6}")).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn save(&self, path: &Path, format: ReportFormat) -> Result<()> {
        let file = std::fs::File::create(path)?;
        match format {
            ReportFormat::Csv => self.write_csv(file),
            ReportFormat::Json => {
                let mut file = file;
                file.write_all(self.to_json()?.as_bytes())?;
                file.write_all(b"\n")?;
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// Error of one `(c, N)` configuration at `t_end`.
pub fn run_row(
    spec: SchemeSpec,
    blocks: usize,
    problem: &dyn ManufacturedProblem,
    length: f64,
    t_end: f64,
    policy: StepPolicy,
) -> Result<(f64, f64)> {
    let op = build(spec, blocks, length)?;
    let sol = integrate(&op, problem, t_end, policy)?;
    let exact = project(problem, op.grid(), t_end);
    let s = op.grid().s();
    Ok((s, error_norm(&sol.state, &exact, s)?))
}

pub fn run_study(config: &StudyConfig, problem: &dyn ManufacturedProblem) -> Result<ConvergenceReport> {
    let policy = StepPolicy::new(config.kappa)?;
    let mut blocks = config.blocks.clone();
    blocks.sort_unstable();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &c in &config.cs {
        let spec = SchemeSpec::new(config.stencil, config.bc, c)?;
        let mut spacings: Vec<f64> = Vec::new();
        let mut errors: Vec<f64> = Vec::new();
        for &n in &blocks {
            let (s, e) = run_row(spec, n, problem, config.length, config.t_end, policy)?;
            let observed_order = match (spacings.last(), errors.last()) {
                (Some(&sp), Some(&ep)) if e > 0.0 && ep > 0.0 => Some((ep / e).ln() / (sp / s).ln()),
                _ => None,
            };
            rows.push(ReportRow {
                scheme: config.stencil.name().into(),
                bc: config.bc.name().into(),
                c,
                n,
                s,
                error: e,
                observed_order,
            });
            spacings.push(s);
            errors.push(e);
        }
        if errors.len() >= 2 && errors.iter().all(|&e| e > 0.0) {
            fits.push(GroupFit {
                c,
                fitted_order: observed_order(&spacings, &errors)?,
            });
        }
    }
    Ok(ConvergenceReport {
        metadata: ReportMetadata {
            problem: config.problem.clone(),
            length: config.length,
            t_end: config.t_end,
            kappa: config.kappa,
            version: env!("CARGO_PKG_VERSION").into(),
        },
        rows,
        fits,
    })
}
