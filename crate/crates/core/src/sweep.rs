//! Penetration-rate grids.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Requires a nonempty, strictly ascending grid inside `[0, 1]`.
pub fn validate_grid<T: Scalar>(grid: &[T]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    for &p in grid {
        if !p.is_finite_value() || p < T::zero() || p > T::one() {
            return Err(Error::InvalidGrid(format!("{p} outside [0, 1]")));
        }
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "not strictly ascending at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `start, start + step, ...` up to and including `stop` when it is hit
/// within rounding.
pub fn penetration_grid<T: Scalar>(start: T, stop: T, step: T) -> Result<Vec<T>> {
    if !(step > T::zero()) || stop < start {
        return Err(Error::InvalidGrid(format!(
            "start {start}, stop {stop}, step {step}"
        )));
    }
    let steps = ((stop - start) / step).as_f64();
    let n = (steps + 1e-9).floor();
    if !n.is_finite() || n > 1e7 {
        return Err(Error::InvalidGrid(format!("{steps} steps")));
    }
    let n = n as usize;
    let mut grid: Vec<T> = (0..=n)
        .map(|i| start + T::from_usize_lossy(i) * step)
        .collect();
    if (steps - n as f64).abs() <= 1e-9 {
        grid[n] = stop;
    }
    validate_grid(&grid)?;
    Ok(grid)
}
