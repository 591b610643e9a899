//! Domain carriers for the fractional operators: the order, the uniform time
//! grid, truncated `c₀` states and sampled paths.

use serde::{Deserialize, Serialize};

use crate::error::{FracError, Result};

/// Fractional order `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(FracError::Domain(format!(
                "alpha must lie in (0,1], got {alpha}"
            )))
        }
    }

    pub const ONE: FracOrder = FracOrder(1.0);

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 − α`, or `None` when `α = 1` (the complementary order is zero).
    pub fn complement(self) -> Option<FracOrder> {
        let c = 1.0 - self.0;
        if c > 0.0 {
            Some(FracOrder(c))
        } else {
            None
        }
    }
}

impl TryFrom<f64> for FracOrder {
    type Error = FracError;

    fn try_from(value: f64) -> Result<Self> {
        FracOrder::new(value)
    }
}

impl From<FracOrder> for f64 {
    fn from(value: FracOrder) -> Self {
        value.0
    }
}

/// Uniform grid `t_j = a + j·h`, `j = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    a: f64,
    h: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(a: f64, h: f64, n_steps: usize) -> Result<Self> {
        if !a.is_finite() {
            return Err(FracError::Domain("grid start must be finite".into()));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(FracError::Domain(format!("grid step must be positive, got {h}")));
        }
        if n_steps == 0 {
            return Err(FracError::Domain("grid needs at least one step".into()));
        }
        Ok(Self { a, h, n_steps })
    }

    /// Grid over `[a, b]` with the step closest to `h_target` that divides the
    /// interval evenly.
    pub fn spanning(a: f64, b: f64, h_target: f64) -> Result<Self> {
        if !(b > a) {
            return Err(FracError::Domain(format!("empty interval [{a}, {b}]")));
        }
        if !(h_target.is_finite() && h_target > 0.0) {
            return Err(FracError::Domain(format!(
                "grid step must be positive, got {h_target}"
            )));
        }
        let n = ((b - a) / h_target).round().max(1.0) as usize;
        Self::new(a, (b - a) / n as f64, n)
    }

    #[inline]
    pub fn start(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.a + j as f64 * self.h
    }

    #[inline]
    pub fn end(&self) -> f64 {
        self.node(self.n_steps)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |j| self.node(j))
    }

    /// Same start, half the step, twice the steps.
    pub fn refined(&self) -> TimeGrid {
        TimeGrid {
            a: self.a,
            h: self.h / 2.0,
            n_steps: self.n_steps * 2,
        }
    }

    /// Leading part of the grid with `n_steps` steps.
    pub fn truncated(&self, n_steps: usize) -> Result<TimeGrid> {
        if n_steps > self.n_steps {
            return Err(FracError::Contract(format!(
                "cannot truncate a {}-step grid to {n_steps} steps",
                self.n_steps
            )));
        }
        TimeGrid::new(self.a, self.h, n_steps)
    }
}

/// Truncated element of `c₀`: explicit components `u_1..u_N` plus a declared
/// envelope bounding every component beyond `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVec {
    entries: Vec<f64>,
    tail_env: f64,
    tail_vanishes: bool,
}

impl StateVec {
    /// A finitely supported vector (zero tail).
    pub fn new(entries: Vec<f64>) -> Self {
        Self {
            entries,
            tail_env: 0.0,
            tail_vanishes: true,
        }
    }

    pub fn with_tail(entries: Vec<f64>, tail_env: f64, tail_vanishes: bool) -> Result<Self> {
        if !(tail_env.is_finite() && tail_env >= 0.0) {
            return Err(FracError::Domain(format!(
                "tail envelope must be finite and non-negative, got {tail_env}"
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(FracError::Domain("state entries must be finite".into()));
        }
        Ok(Self {
            entries,
            tail_env,
            tail_vanishes,
        })
    }

    pub fn scalar(value: f64) -> Self {
        Self::new(vec![value])
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    /// The basis vector `e_j` (1-based) truncated to length `max(j, n)`.
    pub fn basis(j: usize, n: usize) -> Self {
        assert!(j >= 1, "basis index is 1-based");
        let mut entries = vec![0.0; n.max(j)];
        entries[j - 1] = 1.0;
        Self::new(entries)
    }

    #[inline]
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn tail_env(&self) -> f64 {
        self.tail_env
    }

    #[inline]
    pub fn tail_vanishes(&self) -> bool {
        self.tail_vanishes
    }

    /// Component `u_l` (1-based); components past the truncation are reported
    /// as zero.
    pub fn component(&self, l: usize) -> f64 {
        if l >= 1 && l <= self.entries.len() {
            self.entries[l - 1]
        } else {
            0.0
        }
    }

    /// First entry; used for scalar states.
    #[inline]
    pub fn first(&self) -> f64 {
        self.entries.first().copied().unwrap_or(0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries
            .iter()
            .fold(self.tail_env, |acc, v| acc.max(v.abs()))
    }

    /// `sup_l |u_l − v_l|` over the explicit entries plus both tail envelopes.
    pub fn dist(&self, other: &StateVec) -> f64 {
        let n = self.len().max(other.len());
        let mut d: f64 = 0.0;
        for l in 1..=n {
            d = d.max((self.component(l) - other.component(l)).abs());
        }
        d.max(self.tail_env + other.tail_env)
    }

    /// Structural equality on the sequence: trailing zeros do not matter.
    pub fn same_sequence(&self, other: &StateVec) -> bool {
        if self.tail_env != other.tail_env || self.tail_vanishes != other.tail_vanishes {
            return false;
        }
        let n = self.len().max(other.len());
        (1..=n).all(|l| self.component(l) == other.component(l))
    }

    pub fn scaled(&self, factor: f64) -> StateVec {
        StateVec {
            entries: self.entries.iter().map(|v| v * factor).collect(),
            tail_env: self.tail_env * factor.abs(),
            tail_vanishes: self.tail_vanishes,
        }
    }

    /// Component-wise `self + other` (tails add as envelopes).
    pub fn plus(&self, other: &StateVec) -> StateVec {
        let n = self.len().max(other.len());
        StateVec {
            entries: (1..=n)
                .map(|l| self.component(l) + other.component(l))
                .collect(),
            tail_env: self.tail_env + other.tail_env,
            tail_vanishes: self.tail_vanishes && other.tail_vanishes,
        }
    }

    pub fn minus(&self, other: &StateVec) -> StateVec {
        self.plus(&other.scaled(-1.0))
    }
}

/// Values of a path on a [`TimeGrid`]; one [`StateVec`] per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledPath {
    grid: TimeGrid,
    values: Vec<StateVec>,
}

impl SampledPath {
    pub fn new(grid: TimeGrid, values: Vec<StateVec>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(FracError::Contract(format!(
                "path has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let dim = values[0].len();
        if values.iter().any(|v| v.len() != dim) {
            return Err(FracError::Contract(
                "all states of a path must share one truncation length".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn scalar(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(StateVec::scalar).collect())
    }

    /// Samples a scalar function at every node.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(|t| StateVec::scalar(f(t))).collect();
        Self { grid, values }
    }

    pub fn constant(grid: TimeGrid, value: StateVec) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[StateVec] {
        &self.values
    }

    pub fn into_values(self) -> Vec<StateVec> {
        self.values
    }

    /// Truncation length shared by every state.
    #[inline]
    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    /// First component at every node.
    pub fn scalar_values(&self) -> Vec<f64> {
        self.values.iter().map(StateVec::first).collect()
    }

    /// Component `l` (1-based) at every node.
    pub fn component(&self, l: usize) -> Vec<f64> {
        self.values.iter().map(|v| v.component(l)).collect()
    }

    /// Path of `‖u(t)‖` (sup-norm of each state).
    pub fn norm_path(&self) -> SampledPath {
        SampledPath {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|v| StateVec::scalar(v.sup_norm()))
                .collect(),
        }
    }

    /// Node-wise map of the states.
    pub fn map(&self, f: impl Fn(f64, &StateVec) -> StateVec) -> SampledPath {
        SampledPath {
            grid: self.grid,
            values: self
                .grid
                .nodes()
                .zip(&self.values)
                .map(|(t, v)| f(t, v))
                .collect(),
        }
    }

    /// `sup_t ‖self(t) − other(t)‖`.
    pub fn sup_dist(&self, other: &SampledPath) -> Result<f64> {
        self.ensure_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max(a.dist(b))))
    }

    pub fn ensure_same_grid(&self, other: &SampledPath) -> Result<()> {
        if self.grid != other.grid {
            return Err(FracError::Contract("paths live on different grids".into()));
        }
        Ok(())
    }

    /// Linear interpolation of the first component at `t` (clamped to the grid).
    pub fn interpolate_scalar(&self, t: f64) -> f64 {
        let s = ((t - self.grid.start()) / self.grid.step()).max(0.0);
        let j = (s.floor() as usize).min(self.grid.n_steps() - 1);
        let w = (s - j as f64).clamp(0.0, 1.0);
        let lo = self.values[j].first();
        let hi = self.values[j + 1].first();
        lo + w * (hi - lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_rejects_outside_unit_interval() {
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(1.5).is_err());
        assert!(FracOrder::new(f64::NAN).is_err());
        assert_eq!(FracOrder::new(1.0).unwrap().complement(), None);
        assert_eq!(FracOrder::new(0.25).unwrap().complement().unwrap().value(), 0.75);
    }

    #[test]
    fn grid_spacing_is_uniform() {
        let g = TimeGrid::new(0.5, 0.25, 8).unwrap();
        assert_eq!(g.len(), 9);
        assert_eq!(g.end(), 0.5 + 0.25 * 8.0);
        let nodes: Vec<f64> = g.nodes().collect();
        for w in nodes.windows(2) {
            assert_eq!(w[1] - w[0], 0.25);
        }
    }

    #[test]
    fn sup_norm_includes_tail_envelope() {
        let x = StateVec::with_tail(vec![0.5, -2.0], 3.0, true).unwrap();
        assert_eq!(x.sup_norm(), 3.0);
        assert_eq!(StateVec::new(vec![0.5, -2.0]).sup_norm(), 2.0);
    }

    #[test]
    fn path_rejects_mixed_truncation() {
        let g = TimeGrid::new(0.0, 1.0, 1).unwrap();
        let err = SampledPath::new(g, vec![StateVec::zeros(2), StateVec::zeros(3)]);
        assert!(err.is_err());
        let err = SampledPath::new(g, vec![StateVec::zeros(2)]);
        assert!(err.is_err());
    }

    #[test]
    fn trailing_zeros_do_not_change_the_sequence() {
        assert!(StateVec::new(vec![1.0, 0.0]).same_sequence(&StateVec::new(vec![1.0])));
        assert!(!StateVec::new(vec![1.0, 2.0]).same_sequence(&StateVec::new(vec![1.0])));
    }
}
