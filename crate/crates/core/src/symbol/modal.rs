use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use super::{block_coefficients, FrequencyPair, Split, SymbolRecord, C64};
use crate::error::{Error, Result};
use crate::operator::StencilOrder;

/// Eigenvector matrix of a periodic block operator and its conditioning.
#[derive(Clone, Debug, Serialize)]
pub struct ModalBasis {
    pub split: Split,
    pub blocks: usize,
    pub s: f64,
    pub points: Vec<f64>,
    pub frequencies: Vec<FrequencyPair>,
    pub records: Vec<SymbolRecord>,
    /// Columns `ψ_k(ω)` ordered by frequency, branch 1 before branch 2.
    #[serde(skip)]
    pub psi: DMatrix<C64>,
    /// Unit Fourier columns `e^{iωx}/√P`, `e^{iνx}/√P` in the same order.
    #[serde(skip)]
    pub fourier: DMatrix<C64>,
    /// Block-diagonal coefficients with `Ψ = F⁻¹ A`.
    #[serde(skip)]
    pub a: DMatrix<C64>,
    /// `‖Ψ‖` in the s-weighted norm.
    pub norm_psi: f64,
    /// Euclidean `‖Ψ⁻¹‖`.
    pub norm_psi_inverse: f64,
    pub min_determinant: f64,
}

impl ModalBasis {
    pub fn norm_psi_bound() -> f64 {
        2f64.sqrt()
    }

    pub fn norm_psi_inverse_bound(&self) -> f64 {
        10.0 * 2f64.sqrt() / 9.0 * self.s.sqrt()
    }

    /// Diagonal of `Λ` in column order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.records.iter().flat_map(|r| [r.q1, r.q2]).collect()
    }
}

/// Build `Ψ`, `A` and the Fourier matrix for a periodic operator of period
/// `length`. For [`Split::Ibvp`] the grid is the `4N`-point reflection of an
/// IBVP on `[0, length]`, so the period is `2·length`.
pub fn assemble_modal_basis(
    stencil: StencilOrder,
    blocks: usize,
    length: f64,
    c: f64,
    split: Split,
) -> Result<ModalBasis> {
    if blocks < 2 || blocks % 2 != 0 {
        return Err(Error::InvalidBlockCount { got: blocks, min: 2 });
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidLength(length));
    }
    let (n, s, period, offset) = match split {
        Split::PeriodicHalf => {
            let n = 2 * (blocks + 1);
            (n, length / n as f64, length, 0.0)
        }
        Split::Ibvp => {
            let s = length / (2 * blocks) as f64;
            (4 * blocks, s, 2.0 * length, 0.5 * s)
        }
    };
    let k0 = 2.0 * PI / period;
    let points: Vec<f64> = (0..n).map(|i| offset + i as f64 * s).collect();
    let frequencies = FrequencyPair::all(blocks, split);
    debug_assert_eq!(2 * frequencies.len(), n);

    let norm = 1.0 / period.sqrt();
    let mut psi = DMatrix::zeros(n, n);
    let mut fourier = DMatrix::zeros(n, n);
    let mut a = DMatrix::zeros(n, n);
    let mut records = Vec::with_capacity(frequencies.len());
    for (j, f) in frequencies.iter().enumerate() {
        let omega = f.omega as f64 * k0;
        let nu = f.nu as f64 * k0;
        let rec = block_coefficients(stencil, c, omega, s, split);
        for (i, &x) in points.iter().enumerate() {
            let ew = C64::from_polar(norm, omega * x);
            let en = C64::from_polar(norm, nu * x);
            fourier[(i, 2 * j)] = ew;
            fourier[(i, 2 * j + 1)] = en;
            psi[(i, 2 * j)] = rec.alpha1 * ew + rec.beta1 * en;
            psi[(i, 2 * j + 1)] = rec.alpha2 * ew + rec.beta2 * en;
        }
        a[(2 * j, 2 * j)] = rec.alpha1;
        a[(2 * j + 1, 2 * j)] = rec.beta1;
        a[(2 * j, 2 * j + 1)] = rec.alpha2;
        a[(2 * j + 1, 2 * j + 1)] = rec.beta2;
        records.push(rec);
    }

    let sv = psi.clone().singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let min_determinant = records
        .iter()
        .map(|r| r.determinant().norm())
        .fold(f64::INFINITY, f64::min);

    Ok(ModalBasis {
        split,
        blocks,
        s,
        points,
        frequencies,
        records,
        psi,
        fourier,
        a,
        norm_psi: s.sqrt() * smax,
        norm_psi_inverse: 1.0 / smin,
        min_determinant,
    })
}

/// `|α₁β₂ − α₂β₁|` at `samples − 1` interior phases of `θ = ωs ∈ (0, π/2)`,
/// the range a periodic-half grid resolves.
pub fn determinant_profile(stencil: StencilOrder, c: f64, samples: usize) -> Vec<(f64, f64)> {
    (1..samples)
        .map(|k| {
            let theta = 0.5 * PI * k as f64 / samples as f64;
            let rec = block_coefficients(stencil, c, theta, 1.0, Split::PeriodicHalf);
            (theta, rec.determinant().norm())
        })
        .collect()
}
