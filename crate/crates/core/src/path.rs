//! Piecewise-constant càdlàg paths on a finite time grid and the three path
//! operations everything else is built on: the stopped path `ω(t ∧ ·)`, the
//! predictable stop `ω^{t−}` and the terminal splice `ω ⊕_t y`.
//!
//! A path holds one value per knot; the value at knot `k` rules the segment
//! `[t_k, t_{k+1})` and the last value is the value at the horizon. Jumps
//! therefore happen only at knots, which turns every stochastic integral in
//! this crate into a finite sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing knots `0 = t_0 < t_1 < … < t_N = T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeGrid {
    knots: Vec<f64>,
}

impl TimeGrid {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("a time grid needs at least two knots"));
        }
        if knots[0] != 0.0 {
            return Err(Error::domain("the first knot must be 0"));
        }
        if !knots.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::domain("knots must be strictly increasing"));
        }
        if !knots.iter().all(|t| t.is_finite()) {
            return Err(Error::domain("knots must be finite"));
        }
        Ok(TimeGrid { knots })
    }

    /// `N` equal segments on `[0, horizon]`.
    pub fn uniform(horizon: f64, segments: usize) -> Result<Self> {
        if horizon <= 0.0 || segments == 0 {
            return Err(Error::domain("horizon must be positive, segments >= 1"));
        }
        let knots = (0..=segments)
            .map(|k| horizon * k as f64 / segments as f64)
            .collect();
        TimeGrid::new(knots)
    }

    pub fn horizon(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    /// Number of segments `N`.
    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn knot(&self, k: usize) -> f64 {
        self.knots[k]
    }

    /// Length of segment `k`.
    pub fn segment_length(&self, k: usize) -> f64 {
        self.knots[k + 1] - self.knots[k]
    }

    /// Index of the segment whose value rules at time `t`; `N` at the horizon.
    pub fn segment_index(&self, t: f64) -> Result<usize> {
        if !(0.0..=self.horizon()).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside [0, {}]",
                self.horizon()
            )));
        }
        if t == self.horizon() {
            return Ok(self.segments());
        }
        // last knot <= t
        let mut lo = 0usize;
        let mut hi = self.knots.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if self.knots[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Index of `t` among the knots, if it is one.
    pub fn knot_index(&self, t: f64) -> Option<usize> {
        let k = self.segment_index(t).ok()?;
        if self.knots[k] == t {
            Some(k)
        } else if k + 1 < self.knots.len() && self.knots[k + 1] == t {
            Some(k + 1)
        } else {
            None
        }
    }
}

/// State space `E`: all of `ℝ^d` or the non-negative orthant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    Full,
    NonnegativeOrthant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub kind: DomainKind,
    pub dim: usize,
}

impl Domain {
    pub fn full(dim: usize) -> Self {
        Domain {
            kind: DomainKind::Full,
            dim,
        }
    }

    pub fn nonnegative(dim: usize) -> Self {
        Domain {
            kind: DomainKind::NonnegativeOrthant,
            dim,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|v| v.is_finite())
            && match self.kind {
                DomainKind::Full => true,
                DomainKind::NonnegativeOrthant => x.iter().all(|v| *v >= 0.0),
            }
    }
}

/// A càdlàg path: one `E`-valued point per knot, flat storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CadlagPath {
    grid: TimeGrid,
    domain: Domain,
    values: Vec<f64>,
}

impl CadlagPath {
    pub fn new(grid: TimeGrid, domain: Domain, values: Vec<f64>) -> Result<Self> {
        let n = grid.knots().len();
        if values.len() != n * domain.dim {
            return Err(Error::domain(format!(
                "expected {} values ({} knots x dim {}), got {}",
                n * domain.dim,
                n,
                domain.dim,
                values.len()
            )));
        }
        for k in 0..n {
            let v = &values[k * domain.dim..(k + 1) * domain.dim];
            if !domain.contains(v) {
                return Err(Error::domain(format!("value {v:?} at knot {k} outside E")));
            }
        }
        Ok(CadlagPath {
            grid,
            domain,
            values,
        })
    }

    /// One-dimensional path.
    pub fn scalar(grid: TimeGrid, domain: Domain, values: Vec<f64>) -> Result<Self> {
        if domain.dim != 1 {
            return Err(Error::Unsupported("scalar path requires dim 1".into()));
        }
        CadlagPath::new(grid, domain, values)
    }

    /// Constant path at `x`.
    pub fn constant(grid: TimeGrid, domain: Domain, x: &[f64]) -> Result<Self> {
        let n = grid.knots().len();
        let mut values = Vec::with_capacity(n * x.len());
        for _ in 0..n {
            values.extend_from_slice(x);
        }
        CadlagPath::new(grid, domain, values)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn value_at_knot(&self, k: usize) -> &[f64] {
        &self.values[k * self.domain.dim..(k + 1) * self.domain.dim]
    }

    /// Value at knot `k` of a one-dimensional path.
    pub fn scalar_at_knot(&self, k: usize) -> f64 {
        debug_assert_eq!(self.domain.dim, 1);
        self.values[k]
    }

    pub fn scalar_values(&self) -> &[f64] {
        debug_assert_eq!(self.domain.dim, 1);
        &self.values
    }

    pub fn terminal(&self) -> &[f64] {
        self.value_at_knot(self.grid.segments())
    }

    /// Right-continuous evaluation at any `t ∈ [0, T]`.
    pub fn eval(&self, t: f64) -> Result<&[f64]> {
        let k = self.grid.segment_index(t)?;
        Ok(self.value_at_knot(k))
    }

    /// The stopped path `s ↦ ω(t ∧ s)`.
    pub fn stop(&self, t: f64) -> Result<CadlagPath> {
        let j = self.grid.segment_index(t)?;
        let d = self.domain.dim;
        let mut values = self.values.clone();
        let frozen = self.value_at_knot(j).to_vec();
        for k in j + 1..self.grid.knots().len() {
            values[k * d..(k + 1) * d].copy_from_slice(&frozen);
        }
        Ok(CadlagPath {
            grid: self.grid.clone(),
            domain: self.domain,
            values,
        })
    }

    /// The predictable stop `ω^{t−}`: the path before `t`, frozen at the left
    /// limit `ω(t−)` from `t` on. Undefined at `t = 0`.
    pub fn predictable_stop(&self, t: f64) -> Result<CadlagPath> {
        if t <= 0.0 {
            return Err(Error::domain("predictable stop needs t > 0"));
        }
        let j = self.grid.segment_index(t)?;
        let d = self.domain.dim;
        // Left limit: the previous segment's value when t is exactly a jump
        // knot, otherwise the current segment's value (the path is flat there).
        let (freeze_from, left) = if self.grid.knot(j) == t {
            (j, self.value_at_knot(j - 1).to_vec())
        } else {
            (j + 1, self.value_at_knot(j).to_vec())
        };
        let mut values = self.values.clone();
        for k in freeze_from..self.grid.knots().len() {
            values[k * d..(k + 1) * d].copy_from_slice(&left);
        }
        Ok(CadlagPath {
            grid: self.grid.clone(),
            domain: self.domain,
            values,
        })
    }

    /// The splice `ω ⊕_t y`: the path before `t`, constant `y` from `t` on.
    /// `t` must be a grid knot; off-knot splices are refused rather than
    /// snapped.
    pub fn splice(&self, t: f64, y: &[f64]) -> Result<CadlagPath> {
        if !self.domain.contains(y) {
            return Err(Error::domain(format!("splice value {y:?} outside E")));
        }
        let j = self
            .grid
            .knot_index(t)
            .ok_or_else(|| Error::domain(format!("splice time {t} is not a grid knot")))?;
        let d = self.domain.dim;
        let mut values = self.values.clone();
        for k in j..self.grid.knots().len() {
            values[k * d..(k + 1) * d].copy_from_slice(y);
        }
        Ok(CadlagPath {
            grid: self.grid.clone(),
            domain: self.domain,
            values,
        })
    }

    /// Sup distance `max_k |ω_k − ω'_k|_∞`; grids must match.
    pub fn sup_distance(&self, other: &CadlagPath) -> Result<f64> {
        if self.grid != other.grid || self.domain.dim != other.domain.dim {
            return Err(Error::GridMismatch(
                "sup distance needs identical grids and dimensions".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Pointwise convex combination `θ ω¹ + (1−θ) ω²` on a shared grid.
    pub fn convex_combination(theta: f64, a: &CadlagPath, b: &CadlagPath) -> Result<CadlagPath> {
        if a.grid != b.grid || a.domain != b.domain {
            return Err(Error::GridMismatch(
                "convex combination needs identical grids and domains".into(),
            ));
        }
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::domain("theta must lie in [0, 1]"));
        }
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| theta * x + (1.0 - theta) * y)
            .collect();
        CadlagPath::new(a.grid.clone(), a.domain, values)
    }

    /// CSV dump with columns `t,value...`.
    pub fn to_csv(&self) -> String {
        let d = self.domain.dim;
        let mut out = String::from("t");
        if d == 1 {
            out.push_str(",value");
        } else {
            for i in 0..d {
                out.push_str(&format!(",value{i}"));
            }
        }
        out.push('\n');
        for (k, t) in self.grid.knots().iter().enumerate() {
            out.push_str(&format!("{t}"));
            for v in self.value_at_knot(k) {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// JSON wire form: `{grid: [t_0..t_N], values: [v_0..v_N]}` with scalar
/// entries for one-dimensional paths and per-knot arrays otherwise.
#[derive(Serialize, Deserialize)]
struct PathWire {
    grid: Vec<f64>,
    values: Vec<PathValue>,
    #[serde(default)]
    domain: Option<DomainKind>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PathValue {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Serialize for CadlagPath {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.domain.dim;
        let values = (0..self.grid.knots().len())
            .map(|k| {
                let v = self.value_at_knot(k);
                if d == 1 {
                    PathValue::Scalar(v[0])
                } else {
                    PathValue::Vector(v.to_vec())
                }
            })
            .collect();
        PathWire {
            grid: self.grid.knots().to_vec(),
            values,
            domain: Some(self.domain.kind),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CadlagPath {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let wire = PathWire::deserialize(de)?;
        let grid = TimeGrid::new(wire.grid).map_err(DeError::custom)?;
        let mut dim = None;
        let mut flat = Vec::new();
        for v in &wire.values {
            match v {
                PathValue::Scalar(x) => {
                    if *dim.get_or_insert(1) != 1 {
                        return Err(DeError::custom("mixed scalar/vector path values"));
                    }
                    flat.push(*x);
                }
                PathValue::Vector(xs) => {
                    if *dim.get_or_insert(xs.len()) != xs.len() {
                        return Err(DeError::custom("inconsistent path value dimensions"));
                    }
                    flat.extend_from_slice(xs);
                }
            }
        }
        let domain = Domain {
            kind: wire.domain.unwrap_or(DomainKind::Full),
            dim: dim.unwrap_or(1),
        };
        CadlagPath::new(grid, domain, flat).map_err(DeError::custom)
    }
}
