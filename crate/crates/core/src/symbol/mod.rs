//! Fourier symbols of the block operators.
//!
//! A block operator does not map `e^{iωx}` to a multiple of itself: it couples
//! `e^{iωx}` with its alias `e^{iνx}`, which on the grid equals `e^{iωx}`
//! at leading points and `-e^{iωx}` at trailing points. Each frequency
//! therefore carries a 2×2 symbol matrix acting on the (leading, trailing)
//! amplitudes, and its two eigenvalues `Q̂₁`, `Q̂₂` are the symbols.
//!
//! ```
//! use blockheat::symbol::interior_symbols;
//! use std::f64::consts::PI;
//!
//! let (q1, q2) = interior_symbols(6.0, PI / 6.0, -0.25);
//! assert!((q1 + 29.1805).abs() < 5e-5);
//! assert!((q2 + 43.7708).abs() < 5e-5);
//! ```

mod expansion;
mod ibvp;
mod modal;

pub use expansion::{error_model_coefficient, expansion_residuals, ExpansionResiduals};
pub use ibvp::{
    ibvp_eigenpairs, n6_symbol_table, symbol_table, IbvpEigenpair, IbvpMode, SymbolTable,
    SymbolTableRow,
};
pub use modal::{assemble_modal_basis, determinant_profile, ModalBasis};

use nalgebra::{Complex, Matrix2};
use serde::Serialize;

use crate::operator::StencilOrder;

pub type C64 = Complex<f64>;

/// Real-axis extent of the RK4 stability region.
pub const RK4_REAL_STABILITY: f64 = 2.78;

/// How the companion frequency `ν` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    /// `2(N+1)` points on one period, `ν = ω ∓ (N+1)`.
    PeriodicHalf,
    /// The `4N`-point reflected grid of an IBVP, `ν = ω ∓ 2N`.
    Ibvp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FrequencyPair {
    pub omega: i64,
    pub nu: i64,
}

impl FrequencyPair {
    pub fn new(omega: i64, blocks: usize, split: Split) -> Self {
        let shift = match split {
            Split::PeriodicHalf => blocks as i64 + 1,
            Split::Ibvp => 2 * blocks as i64,
        };
        let nu = if omega > 0 { omega - shift } else { omega + shift };
        FrequencyPair { omega, nu }
    }

    /// All resolved frequencies: `-N/2..=N/2` for the periodic split,
    /// `-N+1..=N` for the IBVP split.
    pub fn all(blocks: usize, split: Split) -> Vec<Self> {
        let n = blocks as i64;
        let range = match split {
            Split::PeriodicHalf => -n / 2..=n / 2,
            Split::Ibvp => -n + 1..=n,
        };
        range.map(|w| FrequencyPair::new(w, blocks, split)).collect()
    }
}

/// The 2×2 symbol matrix at phase `θ = ωs`, in units of the stencil weights
/// (multiply by `weight_scale / s²` for the operator's symbol).
///
/// Row/column 0 is the leading point, 1 the trailing point. Entries are the
/// per-sublattice symbols `μ₁ = M₀₀`, `σ₁ = M₀₁`, `σ₂ = M₁₀`, `μ₂ = M₁₁`.
pub fn symbol_matrix(stencil: StencilOrder, c: f64, theta: f64) -> Matrix2<C64> {
    let mut m = Matrix2::zeros();
    for (row, leading) in [(0, true), (1, false)] {
        for (offset, w) in stencil.interior_weights(c, leading) {
            let col = (row as isize + offset).rem_euclid(2) as usize;
            m[(row, col)] += C64::from_polar(w, theta * offset as f64);
        }
    }
    m
}

/// `tr² − 4 det` of the symbol matrix. Non-negative exactly when both
/// symbols are real.
pub fn symbol_discriminant(stencil: StencilOrder, c: f64, theta: f64) -> f64 {
    let m = symbol_matrix(stencil, c, theta);
    // tr is 2 Re μ₁ and det is |μ₁|² − σ₁σ₂ with σ₂ = conj(σ₁)
    4.0 * ((m[(0, 1)] * m[(1, 0)]).re - m[(0, 0)].im.powi(2))
}

/// Closed-form second-block discriminant `Δ(θ)`, `θ = ωs`.
pub fn discriminant(theta: f64, c: f64) -> f64 {
    let arg = 2.0 * c * c * (4.0 * theta).cos() + 38.0 * c * c
        + 8.0 * (c - 1.0) * (3.0 * c - 1.0) * (2.0 * theta).cos()
        - 32.0 * c
        + 8.0;
    arg.max(0.0).sqrt()
}

/// Closed-form second-block symbols `(Q̂₁, Q̂₂)` at wavenumber `ω`, block width `h`.
pub fn interior_symbols(omega: f64, h: f64, c: f64) -> (f64, f64) {
    let s = 0.5 * h;
    if omega == 0.0 {
        return (0.0, (-4.0 + 8.0 * c) / (s * s));
    }
    let theta = omega * s;
    let base = -4.0 + 2.0 * c * ((2.0 * theta).cos() + 3.0);
    let delta = discriminant(theta, c);
    let sign = branch_sign(StencilOrder::SecondBlock, c);
    (
        (base + sign * delta) / (2.0 * s * s),
        (base - sign * delta) / (2.0 * s * s),
    )
}

// Branch 1 is the one through Q̂ = 0 at ω = 0, which is the `+Δ` root while
// the ω = 0 companion eigenvalue is negative.
fn branch_sign(stencil: StencilOrder, c: f64) -> f64 {
    if symbol_matrix(stencil, c, 0.0).trace().re <= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Both symbols for either stencil at wavenumber `ω` and spacing `s`, from the
/// 2×2 symbol matrix. Real parts only; see [`symbol_discriminant`].
pub fn block_symbols(stencil: StencilOrder, c: f64, omega: f64, s: f64) -> (f64, f64) {
    let (l1, l2) = unit_eigenvalues(stencil, c, omega * s);
    let scale = stencil.weight_scale() / (s * s);
    (l1.re * scale, l2.re * scale)
}

fn unit_eigenvalues(stencil: StencilOrder, c: f64, theta: f64) -> (C64, C64) {
    let m = symbol_matrix(stencil, c, theta);
    let tr = m.trace();
    let det = m.determinant();
    let root = (tr * tr - 4.0 * det).sqrt();
    let sign = branch_sign(stencil, c);
    ((tr + root * sign) / 2.0, (tr - root * sign) / 2.0)
}

/// Largest symbol magnitude over all phases, scaled by `1/s²`.
pub fn spectral_radius_bound(stencil: StencilOrder, c: f64, s: f64) -> f64 {
    const SAMPLES: usize = 2048;
    let mut rho: f64 = 0.0;
    for k in 0..=SAMPLES {
        let theta = std::f64::consts::PI * k as f64 / SAMPLES as f64;
        let (a, b) = unit_eigenvalues(stencil, c, theta);
        rho = rho.max(a.norm()).max(b.norm());
    }
    rho * stencil.weight_scale() / (s * s)
}

/// Eigen-data of one frequency.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolRecord {
    pub omega: f64,
    pub q1: f64,
    pub q2: f64,
    #[serde(with = "complex_pair")]
    pub r1: C64,
    #[serde(with = "complex_pair")]
    pub r2: C64,
    #[serde(with = "complex_pair")]
    pub alpha1: C64,
    #[serde(with = "complex_pair")]
    pub beta1: C64,
    #[serde(with = "complex_pair")]
    pub alpha2: C64,
    #[serde(with = "complex_pair")]
    pub beta2: C64,
    pub delta: f64,
}

impl SymbolRecord {
    pub fn determinant(&self) -> C64 {
        self.alpha1 * self.beta2 - self.alpha2 * self.beta1
    }

    fn from_ratios(omega: f64, q: (f64, f64), r1: C64, r2: C64, delta: f64) -> Self {
        let n1 = (1.0 + r1.norm_sqr()).sqrt();
        let n2 = (1.0 + r2.norm_sqr()).sqrt();
        let alpha2 = if r2.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(r2.norm(), 0.0) / r2 / n2
        };
        SymbolRecord {
            omega,
            q1: q.0,
            q2: q.1,
            r1,
            r2,
            alpha1: C64::new(1.0 / n1, 0.0),
            beta1: r1 / n1,
            alpha2,
            beta2: C64::new(r2.norm() / n2, 0.0),
            delta,
        }
    }

    /// The pure Fourier pair: `ψ₁ = e^{iωx}`, `ψ₂ = e^{iνx}`.
    fn fourier(omega: f64, q: (f64, f64), delta: f64) -> Self {
        SymbolRecord {
            omega,
            q1: q.0,
            q2: q.1,
            r1: C64::new(0.0, 0.0),
            r2: C64::new(f64::INFINITY, 0.0),
            alpha1: C64::new(1.0, 0.0),
            beta1: C64::new(0.0, 0.0),
            alpha2: C64::new(0.0, 0.0),
            beta2: C64::new(1.0, 0.0),
            delta,
        }
    }
}

/// Phase of `e^{iνx}` relative to `e^{iωx}` at a leading point: the trailing
/// point carries the opposite sign.
pub(crate) fn alias_phase(split: Split, omega: f64) -> C64 {
    match split {
        Split::PeriodicHalf => C64::new(1.0, 0.0),
        Split::Ibvp if omega > 0.0 => C64::new(0.0, -1.0),
        Split::Ibvp => C64::new(0.0, 1.0),
    }
}

/// Closed-form second-block coefficients.
///
/// Periodic split: `r = i((4−8c)cos θ ∓ Δ) / (2c(2 sin θ + sin 2θ))`, purely
/// imaginary. IBVP split: the real ratio `r̃` of `e^{iωx} + r̃ e^{iνx}`,
/// `r̃ = ((−4+8c)cos θ ± Δ) / (2c(2 sin θ + sin 2θ))`, even in `ω`.
///
/// `ω = 0` and `c = 0` return the Fourier pair.
pub fn eigvec_coefficients(omega: f64, h: f64, c: f64, split: Split) -> SymbolRecord {
    let s = 0.5 * h;
    let theta = omega * s;
    let q = interior_symbols(omega, h, c);
    let delta = discriminant(theta, c);
    if omega == 0.0 || c == 0.0 {
        return SymbolRecord::fourier(omega, q, delta);
    }
    let sign = branch_sign(StencilOrder::SecondBlock, c);
    match split {
        Split::PeriodicHalf => {
            let den = 2.0 * c * (2.0 * theta.sin() + (2.0 * theta).sin());
            let lead = (4.0 - 8.0 * c) * theta.cos();
            let r1 = C64::new(0.0, (lead - sign * delta) / den);
            let r2 = C64::new(0.0, (lead + sign * delta) / den);
            SymbolRecord::from_ratios(omega, q, r1, r2, delta)
        }
        Split::Ibvp => {
            let t = theta.abs();
            let den = 2.0 * c * (2.0 * t.sin() + (2.0 * t).sin());
            let lead = (-4.0 + 8.0 * c) * t.cos();
            let r1 = C64::new((lead + sign * delta) / den, 0.0);
            let r2 = C64::new((lead - sign * delta) / den, 0.0);
            SymbolRecord::from_ratios(omega, q, r1, r2, delta)
        }
    }
}

/// Coefficients for either stencil from the eigenvectors of the symbol
/// matrix. Matches [`eigvec_coefficients`] for the second-block stencil.
pub fn block_coefficients(
    stencil: StencilOrder,
    c: f64,
    omega: f64,
    s: f64,
    split: Split,
) -> SymbolRecord {
    let theta = omega * s;
    let m = symbol_matrix(stencil, c, theta);
    let (l1, l2) = unit_eigenvalues(stencil, c, theta);
    let scale = stencil.weight_scale() / (s * s);
    let q = (l1.re * scale, l2.re * scale);
    let delta = (l1 - l2).norm();
    let eps = alias_phase(split, omega);
    let ratio = |lambda: C64| {
        let (a, b) = eigenvector(&m, lambda);
        // (a, b) = (α + βε, α − βε) up to a common factor
        let alpha = (a + b) / 2.0;
        let beta = (a - b) / (2.0 * eps);
        (alpha, beta)
    };
    let (a1, b1) = ratio(l1);
    let (a2, b2) = ratio(l2);
    let tol = 1e-12 * (a1.norm() + b1.norm());
    if b1.norm() <= tol || a2.norm() <= 1e-12 * (a2.norm() + b2.norm()) {
        return SymbolRecord::fourier(omega, q, delta);
    }
    SymbolRecord::from_ratios(omega, q, b1 / a1, b2 / a2, delta)
}

fn eigenvector(m: &Matrix2<C64>, lambda: C64) -> (C64, C64) {
    let u = (m[(0, 1)], lambda - m[(0, 0)]);
    let v = (lambda - m[(1, 1)], m[(1, 0)]);
    if u.0.norm() + u.1.norm() >= v.0.norm() + v.1.norm() {
        u
    } else {
        v
    }
}

mod complex_pair {
    use super::C64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn omega_zero_symbols() {
        let h = 0.1;
        let (q1, q2) = interior_symbols(0.0, h, 0.2);
        assert_eq!(q1, 0.0);
        assert!((q2 - (-4.0 + 1.6) / 0.0025).abs() < 1e-9);
    }

    #[test]
    fn c_zero_reduces_to_three_point() {
        let h = 2.0 * PI / 17.0;
        let s = h / 2.0;
        for w in 1..8 {
            let (q1, q2) = interior_symbols(w as f64, h, 0.0);
            let half = w as f64 * s / 2.0;
            assert!((q1 + 4.0 * half.sin().powi(2) / (s * s)).abs() < 1e-10);
            assert!((q2 + 4.0 * half.cos().powi(2) / (s * s)).abs() < 1e-10);
        }
    }

    #[test]
    fn closed_form_matches_symbol_matrix() {
        let s = 0.05;
        for c in [-1.0, -0.25, 0.0, 1.0 / 6.0, 0.3, 0.45] {
            for w in [0.5, 3.0, 11.0, 25.0] {
                let (a, b) = interior_symbols(w, 2.0 * s, c);
                let (x, y) = block_symbols(StencilOrder::SecondBlock, c, w, s);
                assert!((a - x).abs() < 1e-9 * a.abs().max(1.0), "c={c} w={w}");
                assert!((b - y).abs() < 1e-9 * b.abs().max(1.0), "c={c} w={w}");
            }
        }
    }

    #[test]
    fn closed_form_discriminant_matches_matrix() {
        for c in [-2.0, -0.25, 0.1, 0.4, 0.9] {
            for k in 0..20 {
                let theta = 0.15 * k as f64;
                let d = discriminant(theta, c);
                let disc = symbol_discriminant(StencilOrder::SecondBlock, c, theta);
                assert!((d * d - disc).abs() < 1e-9, "c={c} θ={theta}");
            }
        }
    }

    #[test]
    fn frequency_split() {
        let p = FrequencyPair::all(6, Split::PeriodicHalf);
        assert_eq!(p.len(), 7);
        assert_eq!(p[0], FrequencyPair { omega: -3, nu: 4 });
        assert_eq!(p[6], FrequencyPair { omega: 3, nu: -4 });
        let q = FrequencyPair::all(6, Split::Ibvp);
        assert_eq!(q.len(), 12);
        assert_eq!(q[11], FrequencyPair { omega: 6, nu: -6 });
        assert_eq!(FrequencyPair::new(0, 6, Split::Ibvp).nu, 12);
    }

    #[test]
    fn split_relations_on_grid() {
        let blocks = 8;
        let s = PI / (blocks + 1) as f64;
        for f in FrequencyPair::all(blocks, Split::PeriodicHalf) {
            for i in 0..2 * (blocks + 1) {
                let x = i as f64 * s;
                let a = C64::from_polar(1.0, f.omega as f64 * x);
                let b = C64::from_polar(1.0, f.nu as f64 * x);
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                assert!((a - b * sign).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn coefficients_are_normalized() {
        for (w, h, c) in [(3.0, 0.2, -0.25), (1.0, 0.05, 0.3), (7.0, 0.1, -1.5)] {
            let r = eigvec_coefficients(w, h, c, Split::PeriodicHalf);
            assert!((r.alpha1.norm_sqr() + r.beta1.norm_sqr() - 1.0).abs() < 1e-14);
            assert!((r.alpha2.norm_sqr() + r.beta2.norm_sqr() - 1.0).abs() < 1e-14);
            assert!(r.r1.re.abs() < 1e-15 && r.r2.re.abs() < 1e-15);
        }
    }

    #[test]
    fn generic_coefficients_match_closed_form() {
        for split in [Split::PeriodicHalf, Split::Ibvp] {
            for c in [-0.25, 1.0 / 6.0, -1.0 / 6.0, 0.3] {
                for w in [1.0, 4.0, -3.0] {
                    let a = eigvec_coefficients(w, 0.2, c, split);
                    let b = block_coefficients(StencilOrder::SecondBlock, c, w, 0.1, split);
                    for (x, y) in [
                        (a.r1, b.r1),
                        (a.r2, b.r2),
                        (a.alpha1, b.alpha1),
                        (a.beta1, b.beta1),
                        (a.alpha2, b.alpha2),
                        (a.beta2, b.beta2),
                    ] {
                        assert!((x - y).norm() < 1e-10 * x.norm().max(1.0), "{split:?} c={c} w={w}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn c_zero_is_fourier_basis() {
        let r = eigvec_coefficients(2.0, 0.3, 0.0, Split::PeriodicHalf);
        assert_eq!(r.alpha1, C64::new(1.0, 0.0));
        assert_eq!(r.beta1, C64::new(0.0, 0.0));
        assert_eq!(r.alpha2, C64::new(0.0, 0.0));
        assert_eq!(r.beta2, C64::new(1.0, 0.0));
        let g = block_coefficients(StencilOrder::SecondBlock, 0.0, 2.0, 0.15, Split::PeriodicHalf);
        assert!((g.beta1.norm()) < 1e-14 && g.alpha2.norm() < 1e-14);
    }

    #[test]
    fn rk4_radius_for_default_steps() {
        for (stencil, kappa) in [(StencilOrder::SecondBlock, 0.1), (StencilOrder::FourthBlock, 0.05)] {
            for c in [0.0, -0.25, 1.0 / 6.0, -1.0 / 6.0, 4.0 / 13.0] {
                let s = 0.01;
                let rho = spectral_radius_bound(stencil, c, s);
                assert!(kappa * s * s * rho <= RK4_REAL_STABILITY);
            }
        }
    }
}
