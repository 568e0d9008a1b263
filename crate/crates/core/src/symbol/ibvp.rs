//! Eigenpairs of the homogeneous IBVP operators.
//!
//! An IBVP on `[0, L]` with homogeneous data is the restriction of a periodic
//! problem on `[0, 2L)` to odd (Dirichlet) or even (Neumann) grid functions.
//! For `ω = 1..N−1` both branches give `φ_k(x) = ψ_k(x) ∓ ψ_k(−x)`. The
//! remaining two eigenvectors per condition are `sin(2Nπx/L)`, `sin(Nπx/L)`
//! (Dirichlet) and `1`, `cos(Nπx/L)` (Neumann).

use std::f64::consts::PI;

use nalgebra::{DVector, Vector2};
use serde::Serialize;

use super::{block_coefficients, symbol_matrix, Split, C64};
use crate::error::{Error, Result};
use crate::grid::BlockGrid;
use crate::operator::{BoundaryKind, StencilOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IbvpMode {
    Branch1,
    Branch2,
    /// Neumann `ω = 0`.
    Constant,
    /// Dirichlet `ω = 0`: `sin(2Nπx/L)`, alternating on the grid.
    Alternating,
    /// Dirichlet `ω = N`.
    SinHalf,
    /// Neumann `ω = N`.
    CosHalf,
}

#[derive(Clone, Debug, Serialize)]
pub struct IbvpEigenpair {
    pub omega: i64,
    pub mode: IbvpMode,
    pub value: f64,
    /// Real eigenvector, unit s-weighted norm.
    #[serde(skip)]
    pub vector: DVector<f64>,
}

/// All `2N` eigenpairs, ordered by `ω` and branch.
pub fn ibvp_eigenpairs(
    stencil: StencilOrder,
    blocks: usize,
    length: f64,
    c: f64,
    bc: BoundaryKind,
) -> Result<Vec<IbvpEigenpair>> {
    let parity = match bc {
        BoundaryKind::Dirichlet => -1.0,
        BoundaryKind::Neumann => 1.0,
        BoundaryKind::Periodic => {
            return Err(Error::InvalidParameter(
                "ibvp eigenpairs need a dirichlet or neumann condition".into(),
            ))
        }
    };
    let grid = BlockGrid::ibvp(blocks, length)?;
    let s = grid.s();
    let x = grid.points();
    let k0 = PI / length;
    let n = blocks as i64;
    let scale = stencil.weight_scale() / (s * s);
    let mut out = Vec::with_capacity(2 * blocks);

    let special = |omega: i64, mode, theta: f64, ab: Vector2<C64>, f: &dyn Fn(f64) -> f64| {
        let m = symbol_matrix(stencil, c, theta);
        let value = if mode == IbvpMode::Constant {
            // interior rows sum to zero
            0.0
        } else {
            ((ab.adjoint() * m * ab)[(0, 0)] / ab.norm_squared()).re * scale
        };
        IbvpEigenpair {
            omega,
            mode,
            value,
            vector: normalized(x.iter().map(|&xi| f(xi)).collect(), s),
        }
    };

    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    out.push(match bc {
        BoundaryKind::Dirichlet => special(0, IbvpMode::Alternating, 0.0, Vector2::new(one, -one), &|xi| {
            (2.0 * n as f64 * k0 * xi).sin()
        }),
        _ => special(0, IbvpMode::Constant, 0.0, Vector2::new(one, one), &|_| 1.0),
    });

    for w in 1..n {
        let omega = w as f64 * k0;
        let nu = (w - 2 * n) as f64 * k0;
        let rec = block_coefficients(stencil, c, omega, s, Split::Ibvp);
        for (mode, alpha, beta, value) in [
            (IbvpMode::Branch1, rec.alpha1, rec.beta1, rec.q1),
            (IbvpMode::Branch2, rec.alpha2, rec.beta2, rec.q2),
        ] {
            let psi = |xi: f64| alpha * C64::from_polar(1.0, omega * xi) + beta * C64::from_polar(1.0, nu * xi);
            let phi: Vec<C64> = x.iter().map(|&xi| psi(xi) + psi(-xi) * parity).collect();
            out.push(IbvpEigenpair {
                omega: w,
                mode,
                value,
                vector: normalized(realify(&phi), s),
            });
        }
    }

    let half = n as f64 * k0;
    out.push(match bc {
        BoundaryKind::Dirichlet => special(n, IbvpMode::SinHalf, 0.5 * PI, Vector2::new(one, -i), &|xi| {
            (half * xi).sin()
        }),
        _ => special(n, IbvpMode::CosHalf, 0.5 * PI, Vector2::new(one, i), &|xi| (half * xi).cos()),
    });
    Ok(out)
}

// Rotate a vector that is real up to a global phase onto the real axis.
fn realify(v: &[C64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(C64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    v.iter().map(|z| (z * phase).re).collect()
}

fn normalized(v: Vec<f64>, s: f64) -> DVector<f64> {
    let v = DVector::from_vec(v);
    let norm = (s * v.norm_squared()).sqrt();
    v / norm
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolTableRow {
    pub omega: i64,
    pub dirichlet: Vec<f64>,
    pub neumann: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolTable {
    pub c: f64,
    pub blocks: usize,
    pub length: f64,
    /// Symbols of the reflected periodic operator, ascending.
    pub periodic: Vec<f64>,
    pub rows: Vec<SymbolTableRow>,
}

/// Dirichlet and Neumann symbols by frequency on `[0, length]`.
pub fn symbol_table(stencil: StencilOrder, blocks: usize, length: f64, c: f64) -> Result<SymbolTable> {
    let d = ibvp_eigenpairs(stencil, blocks, length, c, BoundaryKind::Dirichlet)?;
    let nm = ibvp_eigenpairs(stencil, blocks, length, c, BoundaryKind::Neumann)?;
    let rows = (0..=blocks as i64)
        .map(|w| SymbolTableRow {
            omega: w,
            dirichlet: d.iter().filter(|p| p.omega == w).map(|p| p.value).collect(),
            neumann: nm.iter().filter(|p| p.omega == w).map(|p| p.value).collect(),
        })
        .collect();
    let s = length / (2 * blocks) as f64;
    let mut periodic: Vec<f64> = (-(blocks as i64) + 1..=blocks as i64)
        .flat_map(|w| {
            let (a, b) = super::block_symbols(stencil, c, w as f64 * PI / length, s);
            [a, b]
        })
        .collect();
    periodic.sort_by(f64::total_cmp);
    Ok(SymbolTable {
        c,
        blocks,
        length,
        periodic,
        rows,
    })
}

/// The `N = 6`, `[0, π]` second-block table.
pub fn n6_symbol_table(c: f64) -> SymbolTable {
    symbol_table(StencilOrder::SecondBlock, 6, PI, c).expect("fixed valid configuration")
}
