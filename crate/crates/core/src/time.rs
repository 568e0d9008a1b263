//! Classical RK4 with `dt = κ s²`.

use serde::Serialize;

use crate::boundary::{BoundaryData, Homogeneous};
use crate::convergence::observed_order;
use crate::error::{Error, Result};
use crate::manufactured::{project, ForcingSampler, ManufacturedProblem, ProblemBoundary};
use crate::operator::{DiscreteOperator, StencilOrder};
use crate::symbol::{spectral_radius_bound, RK4_REAL_STABILITY};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepPolicy {
    pub kappa: f64,
    /// Reject steps whose `dt·ρ` leaves the RK4 real stability interval.
    pub enforce_stability: bool,
}

impl StepPolicy {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
        }
        Ok(StepPolicy {
            kappa,
            enforce_stability: true,
        })
    }

    /// 0.1 for the second-block stencil, 0.05 for the fourth-block stencil.
    pub fn default_for(stencil: StencilOrder) -> Self {
        let kappa = match stencil {
            StencilOrder::SecondBlock => 0.1,
            StencilOrder::FourthBlock => 0.05,
        };
        StepPolicy {
            kappa,
            enforce_stability: true,
        }
    }

    pub fn dt(&self, s: f64) -> f64 {
        self.kappa * s * s
    }

    pub fn unchecked(mut self) -> Self {
        self.enforce_stability = false;
        self
    }
}

/// One classical RK4 step of `y' = f(t, y)`.
pub fn rk4_step<F>(mut f: F, state: &[f64], t: f64, dt: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64]) -> Vec<f64>,
{
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let axpy = |k: &[f64], a: f64| -> Vec<f64> { state.iter().zip(k).map(|(y, k)| y + a * k).collect() };
    let k1 = f(t, state);
    let k2 = f(t + 0.5 * dt, &axpy(&k1, 0.5 * dt));
    let k3 = f(t + 0.5 * dt, &axpy(&k2, 0.5 * dt));
    let k4 = f(t + dt, &axpy(&k3, dt));
    let out: Vec<f64> = (0..state.len())
        .map(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t + dt });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub state: Vec<f64>,
    pub t: f64,
    pub steps: usize,
    pub dt: f64,
}

/// Integrate a manufactured problem from its projection at `t = 0` to `t_end`.
pub fn integrate(
    op: &DiscreteOperator,
    problem: &dyn ManufacturedProblem,
    t_end: f64,
    policy: StepPolicy,
) -> Result<Solution> {
    let initial = project(problem, op.grid(), 0.0);
    let data = ProblemBoundary::new(problem, op.spec().bc, op.grid().length());
    let mut sampler = problem.forcing_sampler(op.grid().points());
    run(op, initial, &data, Some(sampler.as_mut()), t_end, policy)
}

/// Integrate `v' = Q v` with homogeneous boundary data.
pub fn integrate_homogeneous(
    op: &DiscreteOperator,
    initial: Vec<f64>,
    t_end: f64,
    policy: StepPolicy,
) -> Result<Solution> {
    run(op, initial, &Homogeneous, None, t_end, policy)
}

fn run(
    op: &DiscreteOperator,
    mut state: Vec<f64>,
    data: &dyn BoundaryData,
    mut forcing: Option<&mut dyn ForcingSampler>,
    t_end: f64,
    policy: StepPolicy,
) -> Result<Solution> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!("t_end must be non-negative, got {t_end}")));
    }
    if state.len() != op.len() {
        return Err(Error::DimensionMismatch {
            expected: op.len(),
            got: state.len(),
        });
    }
    let spec = op.spec();
    let s = op.grid().s();
    let dt = policy.dt(s);
    if policy.enforce_stability {
        let z = dt * spectral_radius_bound(spec.stencil, spec.c, s);
        if z > RK4_REAL_STABILITY {
            return Err(Error::InvalidParameter(format!(
                "dt·ρ = {z:.3} exceeds the RK4 stability limit {RK4_REAL_STABILITY}; lower kappa"
            )));
        }
    }

    let n = state.len();
    // affine part G(t) = B(t) + F(t), cached by time
    let mut affine = |t: f64, out: &mut Vec<f64>| -> Result<()> {
        match forcing.as_deref_mut() {
            Some(f) => f.fill(t, out),
            None => out.iter_mut().for_each(|v| *v = 0.0),
        }
        op.add_boundary(t, data, out)
    };
    let mut g0 = vec![0.0; n];
    let mut g_half = vec![0.0; n];
    let mut g1 = vec![0.0; n];
    let (mut k1, mut k2, mut k3, mut k4) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut tmp = vec![0.0; n];

    let mut t = 0.0;
    let mut steps = 0;
    let mut g0_time = f64::NAN;
    while t < t_end {
        let last = t + dt >= t_end * (1.0 - 1e-12);
        let (h, t_next) = if last { (t_end - t, t_end) } else { (dt, t + dt) };
        if g0_time != t {
            affine(t, &mut g0)?;
        }
        affine(t + 0.5 * h, &mut g_half)?;
        affine(t_next, &mut g1)?;

        op.apply_into(&state, &mut k1);
        add(&mut k1, &g0);
        stage(&state, &k1, 0.5 * h, &mut tmp);
        op.apply_into(&tmp, &mut k2);
        add(&mut k2, &g_half);
        stage(&state, &k2, 0.5 * h, &mut tmp);
        op.apply_into(&tmp, &mut k3);
        add(&mut k3, &g_half);
        stage(&state, &k3, h, &mut tmp);
        op.apply_into(&tmp, &mut k4);
        add(&mut k4, &g1);
        let w = h / 6.0;
        for i in 0..n {
            state[i] += w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        }

        t = t_next;
        steps += 1;
        std::mem::swap(&mut g0, &mut g1);
        g0_time = t;
        if !state.iter().sum::<f64>().is_finite() {
            return Err(Error::Instability {
                c: spec.c,
                n: op.grid().blocks(),
                dt,
                t,
            });
        }
    }
    Ok(Solution { state, t, steps, dt })
}

fn add(a: &mut [f64], b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn stage(y: &[f64], k: &[f64], a: f64, out: &mut [f64]) {
    for ((o, y), k) in out.iter_mut().zip(y).zip(k) {
        *o = y + a * k;
    }
}

/// Fitted temporal order of RK4 on `y' = f(t, y)` against an exact solution,
/// over the given step sizes.
pub fn temporal_order<F, E>(f: F, exact: E, y0: f64, t_end: f64, dts: &[f64]) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    E: Fn(f64) -> f64,
{
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let steps = (t_end / dt).round() as usize;
        let mut y = vec![y0];
        let mut t = 0.0;
        for _ in 0..steps {
            y = rk4_step(|t, v| vec![f(t, v[0])], &y, t, dt)?;
            t += dt;
        }
        errors.push((y[0] - exact(t_end)).abs());
    }
    observed_order(dts, &errors)
}

/// RK4 on `y' = −y` over `[0, 1]` at `dt = 0.2, 0.1, 0.05`.
pub fn rk4_order_check() -> Result<f64> {
    temporal_order(|_, y| -y, |t| (-t).exp(), 1.0, 1.0, &[0.2, 0.1, 0.05])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_decay_step() {
        let y = rk4_step(|_, v| vec![-v[0]], &[1.0], 0.0, 0.1).unwrap();
        assert!((y[0] - 0.904_837_5).abs() < 1e-12);
        assert!((y[0] - (-0.1f64).exp()).abs() < 8.3e-8);
    }

    #[test]
    fn zero_rhs_is_identity() {
        let y = rk4_step(|_, v| vec![0.0; v.len()], &[1.5, -2.0], 3.0, 0.5).unwrap();
        assert_eq!(y, vec![1.5, -2.0]);
    }

    #[test]
    fn diagonal_system_decouples() {
        let lambda = [-1.0, -3.0, 0.5];
        let y = rk4_step(|_, v| v.iter().zip(lambda).map(|(a, l)| a * l).collect(), &[1.0; 3], 0.0, 0.1).unwrap();
        for (yi, l) in y.iter().zip(lambda) {
            let single = rk4_step(|_, v| vec![l * v[0]], &[1.0], 0.0, 0.1).unwrap()[0];
            assert_eq!(*yi, single);
        }
    }

    #[test]
    fn non_finite_is_reported() {
        let err = rk4_step(|_, _| vec![f64::INFINITY], &[0.0], 0.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
        assert!(rk4_step(|_, v| v.to_vec(), &[1.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn order_checks() {
        assert!((rk4_order_check().unwrap() - 4.0).abs() < 0.1);
        let p = temporal_order(|t, _| t.cos(), |t| t.sin(), 0.0, 1.0, &[0.2, 0.1, 0.05]).unwrap();
        assert!((p - 4.0).abs() < 0.1);
    }

    #[test]
    fn policy_defaults() {
        assert_eq!(StepPolicy::default_for(StencilOrder::SecondBlock).kappa, 0.1);
        assert_eq!(StepPolicy::default_for(StencilOrder::FourthBlock).kappa, 0.05);
        assert!(StepPolicy::new(0.0).is_err());
        assert!((StepPolicy::new(0.2).unwrap().dt(0.1) - 0.002).abs() < 1e-17);
    }
}
