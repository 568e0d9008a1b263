//! Semi-discrete spatial operators.
//!
//! Every operator is a sparse matrix plus an affine boundary term,
//! `dv/dt = Q v + B(t) + F(t)`. Periodic operators wrap indices. IBVP
//! operators replace every out-of-range stencil entry by its ghost relation
//! (a mirrored interior value plus boundary traces) and collect the result:
//! the mirrored part lands in the matrix, the traces in `B(t)`, each term
//! keeping the `1/s²` (or `1/(12 s²)`) factor of the stencil entry it came
//! from.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryData, ClosureTrace, Side};
use crate::error::{Error, Result};
use crate::grid::{BlockGrid, GridKind};

/// Interior stencil family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StencilOrder {
    /// Three-point second difference plus `c` times a third difference.
    SecondBlock,
    /// Five-point fourth-order difference plus `c` times a fifth difference.
    FourthBlock,
}

impl StencilOrder {
    pub fn name(self) -> &'static str {
        match self {
            StencilOrder::SecondBlock => "second-block",
            StencilOrder::FourthBlock => "fourth-block",
        }
    }

    /// Multiplier applied to the integer stencil weights, as a factor of `1/s²`.
    pub fn weight_scale(self) -> f64 {
        match self {
            StencilOrder::SecondBlock => 1.0,
            StencilOrder::FourthBlock => 1.0 / 12.0,
        }
    }

    /// Number of points a single interior row touches.
    pub fn width(self) -> usize {
        match self {
            StencilOrder::SecondBlock => 4,
            StencilOrder::FourthBlock => 6,
        }
    }

    /// Unscaled interior weights `(offset, weight)` for a row.
    ///
    /// `leading` selects the first point of a block. The trailing point uses
    /// the mirror image of the leading pattern.
    pub fn interior_weights(self, c: f64, leading: bool) -> Vec<(isize, f64)> {
        let lead: Vec<(isize, f64)> = match self {
            // (u_{-1} - 2u_0 + u_1) + c(-u_{-1} + 3u_0 - 3u_1 + u_2)
            StencilOrder::SecondBlock => vec![
                (-1, 1.0 - c),
                (0, -2.0 + 3.0 * c),
                (1, 1.0 - 3.0 * c),
                (2, c),
            ],
            // (-u_{-2} + 16u_{-1} - 30u_0 + 16u_1 - u_2)
            //   + c(-u_{-2} + 5u_{-1} - 10u_0 + 10u_1 - 5u_2 + u_3)
            StencilOrder::FourthBlock => vec![
                (-2, -1.0 - c),
                (-1, 16.0 + 5.0 * c),
                (0, -30.0 - 10.0 * c),
                (1, 16.0 + 10.0 * c),
                (2, -1.0 - 5.0 * c),
                (3, c),
            ],
        };
        if leading {
            lead
        } else {
            let mut trail: Vec<(isize, f64)> = lead.into_iter().map(|(o, w)| (-o, w)).collect();
            trail.sort_by_key(|&(o, _)| o);
            trail
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Periodic,
    Dirichlet,
    Neumann,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Periodic => "periodic",
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
        }
    }

    pub fn grid_kind(self) -> GridKind {
        match self {
            BoundaryKind::Periodic => GridKind::PeriodicHalf,
            _ => GridKind::IbvpQuarter,
        }
    }
}

/// Warnings attached to a scheme whose `c` lies outside the analysed range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityAdvisory {
    /// `c ≥ 1/2`: the symbols are no longer all non-positive.
    VonNeumann,
    /// `c ≥ 3/8`: outside the range where the eigenvector determinant is bounded.
    DeterminantBound,
}

impl StabilityAdvisory {
    pub fn message(self) -> &'static str {
        match self {
            StabilityAdvisory::VonNeumann => "c ≥ 1/2: von Neumann condition violated",
            StabilityAdvisory::DeterminantBound => {
                "c ≥ 3/8: eigenvector determinant bound not guaranteed"
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub stencil: StencilOrder,
    pub bc: BoundaryKind,
    pub c: f64,
}

impl SchemeSpec {
    pub fn new(stencil: StencilOrder, bc: BoundaryKind, c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("c must be finite, got {c}")));
        }
        Ok(SchemeSpec { stencil, bc, c })
    }

    pub fn advisories(&self) -> Vec<StabilityAdvisory> {
        let mut out = Vec::new();
        if self.c >= 0.5 {
            out.push(StabilityAdvisory::VonNeumann);
        }
        if self.c >= 0.375 {
            out.push(StabilityAdvisory::DeterminantBound);
        }
        out
    }
}

/// One affine entry of the boundary vector: `B[row] += weight * trace(side, t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryTerm {
    pub row: usize,
    pub side: Side,
    pub trace: ClosureTrace,
    pub weight: f64,
}

/// A ghost value written as `sign * u[mirror] + Σ coeff * trace`.
#[derive(Clone, Debug, PartialEq)]
pub struct GhostRelation {
    pub side: Side,
    pub mirror: usize,
    pub sign: f64,
    pub affine: Vec<(ClosureTrace, f64)>,
}

/// Taylor ghost relation for the node at distance `d` outside `side`, mirror
/// of node `mirror`. Expansions are truncated at the order each stencil needs.
pub fn ghost_relation(
    bc: BoundaryKind,
    stencil: StencilOrder,
    side: Side,
    mirror: usize,
    d: f64,
) -> GhostRelation {
    let fourth = stencil == StencilOrder::FourthBlock;
    match bc {
        // u(∓d) = -u(±d) + 2g + d² u_xx + d⁴/12 u_xxxx
        BoundaryKind::Dirichlet => {
            let mut affine = vec![(ClosureTrace::Value, 2.0), (ClosureTrace::Uxx, d * d)];
            if fourth {
                affine.push((ClosureTrace::Uxxxx, d.powi(4) / 12.0));
            }
            GhostRelation {
                side,
                mirror,
                sign: -1.0,
                affine,
            }
        }
        // u(∓d) = u(±d) ∓ (2d g + d³/3 u_xxx + d⁵/60 u_xxxxx)
        BoundaryKind::Neumann => {
            let dir = match side {
                Side::Left => -1.0,
                Side::Right => 1.0,
            };
            let mut affine = vec![
                (ClosureTrace::Value, dir * 2.0 * d),
                (ClosureTrace::Uxxx, dir * d.powi(3) / 3.0),
            ];
            if fourth {
                affine.push((ClosureTrace::Uxxxxx, dir * d.powi(5) / 60.0));
            }
            GhostRelation {
                side,
                mirror,
                sign: 1.0,
                affine,
            }
        }
        BoundaryKind::Periodic => unreachable!("periodic operators have no ghosts"),
    }
}

#[derive(Clone, Debug)]
pub struct DiscreteOperator {
    grid: BlockGrid,
    spec: SchemeSpec,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    boundary: Vec<BoundaryTerm>,
}

impl DiscreteOperator {
    /// Build the operator matching `spec.bc`.
    pub fn new(grid: &BlockGrid, spec: SchemeSpec) -> Result<Self> {
        match spec.bc {
            BoundaryKind::Periodic => Self::periodic(grid, spec),
            BoundaryKind::Dirichlet => Self::dirichlet(grid, spec),
            BoundaryKind::Neumann => Self::neumann(grid, spec),
        }
    }

    pub fn periodic(grid: &BlockGrid, spec: SchemeSpec) -> Result<Self> {
        check(grid, spec, BoundaryKind::Periodic)?;
        Ok(assemble(grid, spec))
    }

    pub fn dirichlet(grid: &BlockGrid, spec: SchemeSpec) -> Result<Self> {
        check(grid, spec, BoundaryKind::Dirichlet)?;
        Ok(assemble(grid, spec))
    }

    pub fn neumann(grid: &BlockGrid, spec: SchemeSpec) -> Result<Self> {
        check(grid, spec, BoundaryKind::Neumann)?;
        Ok(assemble(grid, spec))
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn spec(&self) -> SchemeSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.row_start.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nonzero `(column, value)` pairs of row `i`, sorted by column.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_start[i]..self.row_start[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.vals[range].iter().copied())
    }

    pub fn boundary_terms(&self) -> &[BoundaryTerm] {
        &self.boundary
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for (j, v) in self.row(i) {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// `out = Q v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * v[self.cols[k]];
            }
            *o = acc;
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    /// Add `B(t)` into `out`.
    pub fn add_boundary(&self, t: f64, data: &dyn BoundaryData, out: &mut [f64]) -> Result<()> {
        if self.boundary.is_empty() {
            return Ok(());
        }
        let mut cache: Vec<((Side, ClosureTrace), f64)> = Vec::with_capacity(6);
        for term in &self.boundary {
            let key = (term.side, term.trace);
            let value = match cache.iter().find(|(k, _)| *k == key) {
                Some(&(_, v)) => v,
                None => {
                    let v = term.trace.resolve(data, term.side, t)?;
                    cache.push((key, v));
                    v
                }
            };
            out[term.row] += term.weight * value;
        }
        Ok(())
    }

    /// The boundary vector `B(t)` on its own; zero for periodic operators.
    pub fn boundary_vector(&self, t: f64, data: &dyn BoundaryData) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.len()];
        self.add_boundary(t, data, &mut out)?;
        Ok(out)
    }

    /// `Q v + B(t) + F`, with `forcing` the grid samples of `F(·, t)`.
    pub fn evaluate_rhs(
        &self,
        state: &[f64],
        t: f64,
        data: &dyn BoundaryData,
        forcing: &[f64],
    ) -> Result<Vec<f64>> {
        self.check_len(state.len())?;
        self.check_len(forcing.len())?;
        let mut out = vec![0.0; state.len()];
        self.apply_into(state, &mut out);
        self.add_boundary(t, data, &mut out)?;
        for (o, f) in out.iter_mut().zip(forcing) {
            *o += f;
        }
        Ok(out)
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }
}

fn check(grid: &BlockGrid, spec: SchemeSpec, bc: BoundaryKind) -> Result<()> {
    if spec.bc != bc || grid.kind() != bc.grid_kind() {
        return Err(Error::GridMismatch {
            grid: grid.kind().name(),
            bc: spec.bc.name(),
        });
    }
    let min_points = match (bc, spec.stencil) {
        (BoundaryKind::Periodic, _) => 8,
        (_, StencilOrder::SecondBlock) => 8,
        (_, StencilOrder::FourthBlock) => 10,
    };
    if grid.len() < min_points {
        return Err(Error::GridTooSmall {
            points: grid.len(),
            stencil: spec.stencil.name(),
        });
    }
    Ok(())
}

fn assemble(grid: &BlockGrid, spec: SchemeSpec) -> DiscreteOperator {
    let n = grid.len();
    let s = grid.s();
    let scale = spec.stencil.weight_scale() / (s * s);
    let mut row_start = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(n * spec.stencil.width());
    let mut vals = Vec::with_capacity(n * spec.stencil.width());
    let mut boundary: BTreeMap<(usize, Side, ClosureTrace), f64> = BTreeMap::new();

    let weights = [
        spec.stencil.interior_weights(spec.c, true),
        spec.stencil.interior_weights(spec.c, false),
    ];
    row_start.push(0);
    for i in 0..n {
        let pattern = &weights[usize::from(!BlockGrid::is_leading(i))];
        let mut row: BTreeMap<usize, f64> = BTreeMap::new();
        for &(offset, w) in pattern {
            let j = i as isize + offset;
            let coeff = w * scale;
            if spec.bc == BoundaryKind::Periodic {
                let col = j.rem_euclid(n as isize) as usize;
                *row.entry(col).or_insert(0.0) += coeff;
            } else if (0..n as isize).contains(&j) {
                *row.entry(j as usize).or_insert(0.0) += coeff;
            } else {
                let (side, mirror, k) = if j < 0 {
                    (Side::Left, (-j - 1) as usize, -j - 1)
                } else {
                    (Side::Right, (2 * n as isize - 1 - j) as usize, j - n as isize)
                };
                // distance of the ghost from the boundary: (k + 1/2)·s
                let d = (k as f64 + 0.5) * s;
                let ghost = ghost_relation(spec.bc, spec.stencil, side, mirror, d);
                *row.entry(ghost.mirror).or_insert(0.0) += ghost.sign * coeff;
                for (trace, a) in ghost.affine {
                    *boundary.entry((i, side, trace)).or_insert(0.0) += a * coeff;
                }
            }
        }
        for (col, v) in row {
            cols.push(col);
            vals.push(v);
        }
        row_start.push(cols.len());
    }

    let boundary = boundary
        .into_iter()
        .map(|((row, side, trace), weight)| BoundaryTerm {
            row,
            side,
            trace,
            weight,
        })
        .collect();

    DiscreteOperator {
        grid: grid.clone(),
        spec,
        row_start,
        cols,
        vals,
        boundary,
    }
}
