//! Two-point block grids.
//!
//! A block of width `h` carries two unknowns spaced `s = h/2` apart. The
//! periodic family places them at `j·h` and `j·h + h/2`; the IBVP family
//! shifts both by a quarter block so that no unknown sits on a boundary and
//! ghost values mirror interior ones exactly.

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest block count accepted by either grid constructor.
pub const MIN_BLOCKS: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// `2(N+1)` points on `[0, L)`, spacing `h/2`, first point at 0.
    PeriodicHalf,
    /// `2N` points on `(0, L)`, first point at `h/4`.
    IbvpQuarter,
}

impl GridKind {
    pub fn name(self) -> &'static str {
        match self {
            GridKind::PeriodicHalf => "periodic-half",
            GridKind::IbvpQuarter => "ibvp-quarter",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockGrid {
    kind: GridKind,
    blocks: usize,
    length: f64,
    h: f64,
    points: Vec<f64>,
}

fn validate(blocks: usize, length: f64) -> Result<()> {
    if blocks % 2 != 0 || blocks < MIN_BLOCKS {
        return Err(Error::InvalidBlockCount {
            got: blocks,
            min: MIN_BLOCKS,
        });
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidLength(length));
    }
    Ok(())
}

impl BlockGrid {
    /// Half-offset periodic grid with `N+1` blocks of width `L/(N+1)`.
    pub fn periodic(blocks: usize, length: f64) -> Result<Self> {
        validate(blocks, length)?;
        let h = length / (blocks + 1) as f64;
        let s = 0.5 * h;
        let points = (0..2 * (blocks + 1)).map(|i| i as f64 * s).collect();
        Ok(BlockGrid {
            kind: GridKind::PeriodicHalf,
            blocks,
            length,
            h,
            points,
        })
    }

    /// Quarter-offset grid with `N` blocks of width `L/N` and no boundary nodes.
    pub fn ibvp(blocks: usize, length: f64) -> Result<Self> {
        validate(blocks, length)?;
        let h = length / blocks as f64;
        let s = 0.5 * h;
        let points = (0..2 * blocks).map(|i| (i as f64 + 0.5) * s).collect();
        Ok(BlockGrid {
            kind: GridKind::IbvpQuarter,
            blocks,
            length,
            h,
            points,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// The block count `N` the grid was built from.
    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Block width.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Distance between consecutive unknowns, `h/2`.
    pub fn s(&self) -> f64 {
        0.5 * self.h
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True for the first unknown of each block (`x_j` or `x_{j+1/4}`).
    pub fn is_leading(i: usize) -> bool {
        i % 2 == 0
    }

    /// Largest and smallest gap between neighbours, wrapping for periodic grids.
    pub fn spacing_extremes(&self) -> (f64, f64) {
        let mut gaps: Vec<f64> = self.points.windows(2).map(|w| w[1] - w[0]).collect();
        if self.kind == GridKind::PeriodicHalf {
            if let (Some(first), Some(last)) = (self.points.first(), self.points.last()) {
                gaps.push(self.length - last + first);
            }
        }
        let max = gaps.iter().copied().fold(f64::MIN, f64::max);
        let min = gaps.iter().copied().fold(f64::MAX, f64::min);
        (max, min)
    }

    /// For an IBVP grid: the points together with their mirror images about
    /// both endpoints, reduced modulo `2L` and sorted. These are the `4N`
    /// nodes of the quarter-offset periodic grid on `[0, 2L)`.
    pub fn reflected_points(&self) -> Vec<f64> {
        let period = 2.0 * self.length;
        let mut all: Vec<f64> = self
            .points
            .iter()
            .flat_map(|&x| [x, (-x).rem_euclid(period), (2.0 * self.length - x).rem_euclid(period)])
            .collect();
        all.sort_by(f64::total_cmp);
        all.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * period);
        all
    }
}
