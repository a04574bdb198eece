//! Payoffs of the form `Φ(ω) = ψ(M_T, m_T, A_T, ω_T)`: running max, running
//! min, a weighted running integral and the terminal value. The measure `μ`
//! behind `A` lives on grid segments only — it never charges the terminal
//! point, so splicing the terminal value leaves `A` untouched and the
//! terminal concavification is a function of `(M, m, a)` and the spliced
//! value alone.

use serde::{Deserialize, Serialize};

use crate::envelope::{upper_concave_envelope, UpperEnvelope};
use crate::error::{Error, Result};
use crate::path::CadlagPath;

/// Finite signed measure on `[0, T]` carried by grid segments (atomless by
/// construction: one weight per `[t_k, t_{k+1})`, none at `T`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignedMeasure {
    weights: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::domain("measure weights must be finite"));
        }
        Ok(SignedMeasure { weights })
    }

    pub fn zero(segments: usize) -> Self {
        SignedMeasure {
            weights: vec![0.0; segments],
        }
    }

    pub fn segments(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, k: usize) -> f64 {
        self.weights[k]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total variation `|μ|([0, T])`.
    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    /// Tail variation `|μ|([t_k, T])`.
    pub fn tail_variation(&self, k: usize) -> f64 {
        self.weights[k.min(self.weights.len())..]
            .iter()
            .map(|w| w.abs())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(|w| *w == 0.0)
    }
}

/// Path summary the payoff class sees: `m ≤ w ≤ M` always.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSummary {
    pub max: f64,
    pub min: f64,
    pub integral: f64,
    pub spot: f64,
}

/// Which summary coordinates a kernel actually reads. Axes unused by the
/// kernel are collapsed in the dynamic programme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateDeps {
    pub uses_max: bool,
    pub uses_min: bool,
    pub uses_integral: bool,
}

/// Lookup table over `(M, m, a, w)` with multilinear interpolation, clamped
/// to the table box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub max_grid: Vec<f64>,
    pub min_grid: Vec<f64>,
    pub integral_grid: Vec<f64>,
    pub spot_grid: Vec<f64>,
    /// Row-major over `(max, min, integral, spot)`.
    pub values: Vec<f64>,
}

impl KernelTable {
    pub fn from_fn(
        max_grid: Vec<f64>,
        min_grid: Vec<f64>,
        integral_grid: Vec<f64>,
        spot_grid: Vec<f64>,
        f: impl Fn(f64, f64, f64, f64) -> f64,
    ) -> Result<Self> {
        let mut values =
            Vec::with_capacity(max_grid.len() * min_grid.len() * integral_grid.len() * spot_grid.len());
        for m in &max_grid {
            for n in &min_grid {
                for a in &integral_grid {
                    for w in &spot_grid {
                        values.push(f(*m, *n, *a, *w));
                    }
                }
            }
        }
        let t = KernelTable {
            max_grid,
            min_grid,
            integral_grid,
            spot_grid,
            values,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for g in [
            &self.max_grid,
            &self.min_grid,
            &self.integral_grid,
            &self.spot_grid,
        ] {
            if g.is_empty() || !g.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::domain(
                    "kernel table grids must be non-empty and strictly increasing",
                ));
            }
        }
        let n = self.max_grid.len() * self.min_grid.len() * self.integral_grid.len()
            * self.spot_grid.len();
        if self.values.len() != n {
            return Err(Error::domain(format!(
                "kernel table has {} values, expected {n}",
                self.values.len()
            )));
        }
        if !self.values.iter().all(|v| v.is_finite()) {
            return Err(Error::domain("kernel table values must be finite"));
        }
        Ok(())
    }

    fn bracket(grid: &[f64], x: f64) -> (usize, usize, f64) {
        if grid.len() == 1 || x <= grid[0] {
            return (0, 0, 0.0);
        }
        let last = grid.len() - 1;
        if x >= grid[last] {
            return (last, last, 0.0);
        }
        let mut lo = 0;
        let mut hi = last;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            if grid[mid] <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (x - grid[lo]) / (grid[hi] - grid[lo]);
        (lo, hi, t)
    }

    pub fn eval(&self, s: &StateSummary) -> f64 {
        let (mi0, mi1, tm) = Self::bracket(&self.max_grid, s.max);
        let (ni0, ni1, tn) = Self::bracket(&self.min_grid, s.min);
        let (ai0, ai1, ta) = Self::bracket(&self.integral_grid, s.integral);
        let (wi0, wi1, tw) = Self::bracket(&self.spot_grid, s.spot);
        let idx = |mi: usize, ni: usize, ai: usize, wi: usize| {
            self.values[((mi * self.min_grid.len() + ni) * self.integral_grid.len() + ai)
                * self.spot_grid.len()
                + wi]
        };
        // When a bracket collapses (lo == hi) its t is 0, so the duplicate
        // visit carries zero weight and adds nothing.
        let mut acc = 0.0;
        for (mi, cm) in [(mi0, 1.0 - tm), (mi1, tm)] {
            for (ni, cn) in [(ni0, 1.0 - tn), (ni1, tn)] {
                for (ai, ca) in [(ai0, 1.0 - ta), (ai1, ta)] {
                    for (wi, cw) in [(wi0, 1.0 - tw), (wi1, tw)] {
                        let c = cm * cn * ca * cw;
                        if c != 0.0 {
                            acc += c * idx(mi, ni, ai, wi);
                        }
                    }
                }
            }
        }
        acc
    }
}

/// Payoff kernel catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum PayoffKernel {
    /// `(w − strike)₊`
    TerminalCall { strike: f64 },
    /// `(strike − w)₊`
    TerminalPut { strike: f64 },
    /// `f(a) + (w − g(M))₊` with affine `f` and `g = (g_slope·M + g_intercept)₊`.
    LookbackBarrier {
        f_slope: f64,
        f_intercept: f64,
        g_slope: f64,
        g_intercept: f64,
    },
    /// Tabulated custom kernel; the regularity checkers are the guardrail.
    Tabulated { table: KernelTable },
}

impl PayoffKernel {
    pub fn eval(&self, s: &StateSummary) -> f64 {
        match self {
            PayoffKernel::TerminalCall { strike } => (s.spot - strike).max(0.0),
            PayoffKernel::TerminalPut { strike } => (strike - s.spot).max(0.0),
            PayoffKernel::LookbackBarrier {
                f_slope,
                f_intercept,
                g_slope,
                g_intercept,
            } => {
                let barrier = (g_slope * s.max + g_intercept).max(0.0);
                f_slope * s.integral + f_intercept + (s.spot - barrier).max(0.0)
            }
            PayoffKernel::Tabulated { table } => table.eval(s),
        }
    }

    pub fn dependencies(&self) -> StateDeps {
        match self {
            PayoffKernel::TerminalCall { .. } | PayoffKernel::TerminalPut { .. } => StateDeps {
                uses_max: false,
                uses_min: false,
                uses_integral: false,
            },
            PayoffKernel::LookbackBarrier {
                f_slope, g_slope, ..
            } => StateDeps {
                uses_max: *g_slope != 0.0,
                uses_min: false,
                uses_integral: *f_slope != 0.0,
            },
            PayoffKernel::Tabulated { table } => StateDeps {
                uses_max: table.max_grid.len() > 1,
                uses_min: table.min_grid.len() > 1,
                uses_integral: table.integral_grid.len() > 1,
            },
        }
    }
}

/// The full payoff: kernel, measure, growth constant `K` and the near-zero
/// Lipschitz threshold.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PayoffSpec {
    pub kernel: PayoffKernel,
    #[serde(rename = "mu")]
    pub measure: SignedMeasure,
    #[serde(rename = "K")]
    pub growth_k: f64,
    pub eps_lip: f64,
}

impl PayoffSpec {
    pub fn new(kernel: PayoffKernel, measure: SignedMeasure, growth_k: f64, eps_lip: f64) -> Result<Self> {
        if growth_k <= 0.0 || eps_lip <= 0.0 {
            return Err(Error::domain("K and eps_lip must be positive"));
        }
        Ok(PayoffSpec {
            kernel,
            measure,
            growth_k,
            eps_lip,
        })
    }

    /// `(M, m, a, w)` of a one-dimensional path: `a = Σ_{k<N} v_k μ_k`
    /// (left-endpoint convention, matching the piecewise-constant model).
    pub fn summarize(&self, path: &CadlagPath) -> Result<StateSummary> {
        if path.dim() != 1 {
            return Err(Error::Unsupported(
                "payoff summaries require one-dimensional paths".into(),
            ));
        }
        let n = path.grid().segments();
        if self.measure.segments() != n {
            return Err(Error::domain(format!(
                "measure has {} segments, grid has {n}",
                self.measure.segments()
            )));
        }
        let vs = path.scalar_values();
        let max = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = vs.iter().cloned().fold(f64::INFINITY, f64::min);
        let integral = (0..n).map(|k| vs[k] * self.measure.weight(k)).sum();
        Ok(StateSummary {
            max,
            min,
            integral,
            spot: vs[n],
        })
    }

    pub fn evaluate(&self, path: &CadlagPath) -> Result<f64> {
        Ok(self.kernel.eval(&self.summarize(path)?))
    }

    /// Growth bound `|Φ(ω)| ≤ K (1 + ω_T + Σ v_k |μ_k|)` over sample paths.
    pub fn check_growth(&self, samples: &[CadlagPath]) -> Result<GrowthReport> {
        let mut worst_ratio: f64 = 0.0;
        let mut violations = Vec::new();
        for (i, path) in samples.iter().enumerate() {
            let s = self.summarize(path)?;
            let vs = path.scalar_values();
            let abs_integral: f64 = (0..path.grid().segments())
                .map(|k| vs[k].abs() * self.measure.weight(k).abs())
                .sum();
            let bound = self.growth_k * (1.0 + s.spot + abs_integral);
            let value = self.kernel.eval(&s).abs();
            let ratio = value / bound;
            worst_ratio = worst_ratio.max(ratio);
            if value > bound {
                violations.push(GrowthViolation {
                    sample: i,
                    value,
                    bound,
                    path: vs.to_vec(),
                });
            }
        }
        Ok(GrowthReport {
            passed: violations.is_empty(),
            worst_ratio,
            violations,
        })
    }

    /// Near-zero Lipschitz bound
    /// `|ψ(M₁,m₁,a₁,w₁) − ψ(M₀,0,a₀,0)| ≤ K (|a₁−a₀| + w₁)` over probe pairs
    /// with `0 ≤ m₁ ≤ w₁ ∧ eps_lip` and `M₀ ≤ M₁`.
    pub fn check_lipschitz_near_zero(&self, probes: &[LipschitzProbe]) -> Result<LipschitzReport> {
        let mut worst_ratio: f64 = 0.0;
        let mut violations = Vec::new();
        for (i, p) in probes.iter().enumerate() {
            if p.base_max > p.state.max {
                return Err(Error::domain("probe needs M0 <= M1"));
            }
            if !(0.0 <= p.state.min && p.state.min <= p.state.spot.min(self.eps_lip)) {
                return Err(Error::domain("probe needs 0 <= m1 <= w1 and m1 <= eps_lip"));
            }
            let upper = self.kernel.eval(&p.state);
            let base = self.kernel.eval(&StateSummary {
                max: p.base_max,
                min: 0.0,
                integral: p.base_integral,
                spot: 0.0,
            });
            let diff = (upper - base).abs();
            let bound =
                self.growth_k * ((p.state.integral - p.base_integral).abs() + p.state.spot);
            let ratio = if bound > 0.0 {
                diff / bound
            } else if diff > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            worst_ratio = worst_ratio.max(ratio);
            if diff > bound {
                violations.push(LipschitzViolation {
                    probe: i,
                    diff,
                    bound,
                });
            }
        }
        Ok(LipschitzReport {
            passed: violations.is_empty(),
            worst_ratio,
            violations,
        })
    }

    /// Upper concave envelope over `y ∈ w_grid` of the terminal splice map
    /// `y ↦ ψ(M ∨ y, m ∧ y, a, y)`; `a` is untouched because `μ` never
    /// charges the terminal point.
    pub fn terminal_concavify(
        &self,
        s: &StateSummary,
        w_grid: &[f64],
    ) -> Result<UpperEnvelope<f64>> {
        if w_grid.is_empty() {
            return Err(Error::domain("terminal concavification needs a grid"));
        }
        let ys: Vec<f64> = w_grid
            .iter()
            .map(|y| {
                self.kernel.eval(&StateSummary {
                    max: s.max.max(*y),
                    min: s.min.min(*y),
                    integral: s.integral,
                    spot: *y,
                })
            })
            .collect();
        upper_concave_envelope(w_grid, &ys)
    }

    /// `hat-Φ(ω)`: the terminal concavification evaluated at `ω_T`, based at
    /// the predictable (pre-terminal) summaries.
    pub fn concavified_value(&self, path: &CadlagPath, w_grid: &[f64]) -> Result<f64> {
        let pre = path.predictable_stop(path.grid().horizon())?;
        let s = self.summarize(&pre)?;
        let terminal = path.terminal()[0];
        Ok(self.terminal_concavify(&s, w_grid)?.value(&terminal))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthViolation {
    pub sample: usize,
    pub value: f64,
    pub bound: f64,
    pub path: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub passed: bool,
    pub worst_ratio: f64,
    pub violations: Vec<GrowthViolation>,
}

/// A probe pair for the near-zero Lipschitz check: the `(M₁, m₁, a₁, w₁)`
/// state and the `(M₀, 0, a₀, 0)` base.
#[derive(Clone, Copy, Debug)]
pub struct LipschitzProbe {
    pub state: StateSummary,
    pub base_max: f64,
    pub base_integral: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzViolation {
    pub probe: usize,
    pub diff: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub passed: bool,
    pub worst_ratio: f64,
    pub violations: Vec<LipschitzViolation>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::{Domain, TimeGrid};

    fn path_132() -> CadlagPath {
        // values 1,3,2 on segments of length 1, terminal value 2 at T=3
        CadlagPath::scalar(
            TimeGrid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap(),
            Domain::nonnegative(1),
            vec![1.0, 3.0, 2.0, 2.0],
        )
        .unwrap()
    }

    fn call_spec(segments: usize) -> PayoffSpec {
        PayoffSpec::new(
            PayoffKernel::TerminalCall { strike: 1.0 },
            SignedMeasure::zero(segments),
            1.0,
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn summarize_direct_sum() {
        let spec = PayoffSpec::new(
            PayoffKernel::TerminalCall { strike: 1.0 },
            SignedMeasure::new(vec![1.0, 1.0, 1.0]).unwrap(),
            1.0,
            0.5,
        )
        .unwrap();
        let s = spec.summarize(&path_132()).unwrap();
        assert_eq!((s.max, s.min, s.integral, s.spot), (3.0, 1.0, 6.0, 2.0));
    }

    #[test]
    fn summarize_constant_path_unit_mass() {
        let grid = TimeGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let spec = PayoffSpec::new(
            PayoffKernel::TerminalCall { strike: 0.0 },
            SignedMeasure::new(vec![0.5, 0.5]).unwrap(),
            1.0,
            0.5,
        )
        .unwrap();
        let c = CadlagPath::constant(grid, Domain::nonnegative(1), &[4.0]).unwrap();
        let s = spec.summarize(&c).unwrap();
        assert_eq!((s.max, s.min, s.integral, s.spot), (4.0, 4.0, 4.0, 4.0));
    }

    #[test]
    fn zero_measure_kills_integral() {
        let s = call_spec(3).summarize(&path_132()).unwrap();
        assert_eq!(s.integral, 0.0);
    }

    #[test]
    fn summarize_invariant_under_terminal_stop() {
        let spec = PayoffSpec::new(
            PayoffKernel::TerminalCall { strike: 1.0 },
            SignedMeasure::new(vec![0.3, -0.2, 0.7]).unwrap(),
            1.0,
            0.5,
        )
        .unwrap();
        let p = path_132();
        let stopped = p.stop(p.grid().horizon()).unwrap();
        assert_eq!(spec.summarize(&p).unwrap(), spec.summarize(&stopped).unwrap());
    }

    #[test]
    fn evaluate_catalog() {
        let p = path_132();
        assert_eq!(call_spec(3).evaluate(&p).unwrap(), 1.0);
        // Barrier kernel with f ≡ 0, g ≡ 0 degenerates to w₊ = w on ℝ₊
        let plain = PayoffSpec::new(
            PayoffKernel::LookbackBarrier {
                f_slope: 0.0,
                f_intercept: 0.0,
                g_slope: 0.0,
                g_intercept: 0.0,
            },
            SignedMeasure::zero(3),
            1.0,
            0.5,
        )
        .unwrap();
        assert_eq!(plain.evaluate(&p).unwrap(), 2.0);
        // pure lookback via a table that is linear in M (multilinear interp is exact)
        let lookback = PayoffSpec::new(
            PayoffKernel::Tabulated {
                table: KernelTable::from_fn(
                    vec![0.0, 5.0],
                    vec![0.0],
                    vec![0.0],
                    vec![0.0, 5.0],
                    |m, _, _, _| m,
                )
                .unwrap(),
            },
            SignedMeasure::zero(3),
            10.0,
            0.5,
        )
        .unwrap();
        assert_eq!(lookback.evaluate(&p).unwrap(), 3.0);
    }

    #[test]
    fn evaluate_ignores_zero_weight_segments() {
        let with_zeros = PayoffSpec::new(
            PayoffKernel::LookbackBarrier {
                f_slope: 2.0,
                f_intercept: 0.0,
                g_slope: 0.0,
                g_intercept: 1.0,
            },
            SignedMeasure::new(vec![1.0, 0.0, 0.0]).unwrap(),
            2.0,
            0.5,
        )
        .unwrap();
        // only the first segment carries mass: a = 1
        let s = with_zeros.summarize(&path_132()).unwrap();
        assert_eq!(s.integral, 1.0);
    }

    fn sample_paths() -> Vec<CadlagPath> {
        let grid = TimeGrid::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let dom = Domain::nonnegative(1);
        [
            vec![1.0, 3.0, 2.0, 2.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![5.0, 10.0, 50.0, 50.0],
            vec![2.0, 1.0, 4.0, 4.0],
        ]
        .into_iter()
        .map(|v| CadlagPath::scalar(grid.clone(), dom, v).unwrap())
        .collect()
    }

    #[test]
    fn growth_passes_for_call() {
        let report = call_spec(3).check_growth(&sample_paths()).unwrap();
        assert!(report.passed);
        assert!(report.worst_ratio <= 1.0);
    }

    #[test]
    fn growth_fails_for_quadratic() {
        // tabulated w^2 on a fine spot grid; superlinear growth must break the bound
        let quad = PayoffSpec::new(
            PayoffKernel::Tabulated {
                table: KernelTable::from_fn(
                    vec![0.0],
                    vec![0.0],
                    vec![0.0],
                    (0..=60).map(|i| i as f64).collect(),
                    |_, _, _, w| w * w,
                )
                .unwrap(),
            },
            SignedMeasure::zero(3),
            1.0,
            0.5,
        )
        .unwrap();
        let report = quad.check_growth(&sample_paths()).unwrap();
        assert!(!report.passed);
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn growth_passes_for_barrier_example() {
        let spec = PayoffSpec::new(
            PayoffKernel::LookbackBarrier {
                f_slope: 0.5,
                f_intercept: 0.0,
                g_slope: 1.0,
                g_intercept: 0.0,
            },
            SignedMeasure::new(vec![1.0, 1.0, 1.0]).unwrap(),
            1.0, // K = Lip(f) ∨ 1
            0.5,
        )
        .unwrap();
        assert!(spec.check_growth(&sample_paths()).unwrap().passed);
    }

    #[test]
    fn lipschitz_barrier_passes() {
        let spec = PayoffSpec::new(
            PayoffKernel::LookbackBarrier {
                f_slope: 0.0,
                f_intercept: 0.0,
                g_slope: 1.0,
                g_intercept: 0.5,
            },
            SignedMeasure::zero(3),
            1.0,
            0.5,
        )
        .unwrap();
        let probes = vec![
            LipschitzProbe {
                state: StateSummary {
                    max: 3.0,
                    min: 0.1,
                    integral: 1.0,
                    spot: 0.4,
                },
                base_max: 2.0,
                base_integral: 0.5,
            },
            LipschitzProbe {
                state: StateSummary {
                    max: 10.0,
                    min: 0.0,
                    integral: -2.0,
                    spot: 0.2,
                },
                base_max: 10.0,
                base_integral: 2.0,
            },
        ];
        assert!(spec.check_lipschitz_near_zero(&probes).unwrap().passed);
    }

    #[test]
    fn lipschitz_affine_integral_passes_with_its_slope() {
        let spec = PayoffSpec::new(
            PayoffKernel::LookbackBarrier {
                f_slope: 3.0,
                f_intercept: 1.0,
                g_slope: 0.0,
                g_intercept: 100.0, // barrier never hit near zero
            },
            SignedMeasure::zero(3),
            3.0, // K = L
            0.5,
        )
        .unwrap();
        let probes = vec![LipschitzProbe {
            state: StateSummary {
                max: 1.0,
                min: 0.0,
                integral: 5.0,
                spot: 0.3,
            },
            base_max: 1.0,
            base_integral: -1.0,
        }];
        assert!(spec.check_lipschitz_near_zero(&probes).unwrap().passed);
    }

    #[test]
    fn lipschitz_pure_lookback_fails() {
        // ψ = M: |M1 − M0| is not controlled by w1
        let spec = PayoffSpec::new(
            PayoffKernel::Tabulated {
                table: KernelTable::from_fn(
                    vec![0.0, 100.0],
                    vec![0.0],
                    vec![0.0],
                    vec![0.0, 100.0],
                    |m, _, _, _| m,
                )
                .unwrap(),
            },
            SignedMeasure::zero(3),
            1.0,
            0.5,
        )
        .unwrap();
        let probes = vec![LipschitzProbe {
            state: StateSummary {
                max: 50.0,
                min: 0.0,
                integral: 0.0,
                spot: 0.01,
            },
            base_max: 1.0,
            base_integral: 0.0,
        }];
        let report = spec.check_lipschitz_near_zero(&probes).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn terminal_concavify_call_chord() {
        let spec = call_spec(3);
        let s = StateSummary {
            max: 2.0,
            min: 0.0,
            integral: 0.0,
            spot: 2.0,
        };
        let grid = [0.0, 1.0, 2.0, 3.0, 4.0];
        let env = spec.terminal_concavify(&s, &grid).unwrap();
        assert_eq!(env.vertices(), &[(0.0, 0.0), (4.0, 3.0)]);
        assert_eq!(env.value(&2.0), 1.5);
    }

    #[test]
    fn terminal_concavify_concave_fixed_point() {
        let spec = PayoffSpec::new(
            PayoffKernel::Tabulated {
                table: KernelTable::from_fn(
                    vec![0.0],
                    vec![0.0],
                    vec![0.0],
                    (0..=8).map(|i| i as f64 * 0.5).collect(),
                    |_, _, _, w| -(w - 2.0) * (w - 2.0),
                )
                .unwrap(),
            },
            SignedMeasure::zero(3),
            20.0,
            0.5,
        )
        .unwrap();
        let s = StateSummary {
            max: 4.0,
            min: 0.0,
            integral: 0.0,
            spot: 2.0,
        };
        let grid: Vec<f64> = (0..=8).map(|i| i as f64 * 0.5).collect();
        let env = spec.terminal_concavify(&s, &grid).unwrap();
        for y in &grid {
            let direct = -(y - 2.0) * (y - 2.0);
            assert!((env.value(y) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn terminal_concavify_lookback_chord() {
        // ψ = M via exact-in-M table, at M = 2 over {0, 2, 4}
        let spec = PayoffSpec::new(
            PayoffKernel::Tabulated {
                table: KernelTable::from_fn(
                    vec![0.0, 10.0],
                    vec![0.0],
                    vec![0.0],
                    vec![0.0, 10.0],
                    |m, _, _, _| m,
                )
                .unwrap(),
            },
            SignedMeasure::zero(1),
            10.0,
            0.5,
        )
        .unwrap();
        let s = StateSummary {
            max: 2.0,
            min: 0.0,
            integral: 0.0,
            spot: 2.0,
        };
        let env = spec.terminal_concavify(&s, &[0.0, 2.0, 4.0]).unwrap();
        assert_eq!(env.value(&2.0), 3.0);
        assert!(spec.terminal_concavify(&s, &[]).is_err());
    }
}
