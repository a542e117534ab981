//! Efficient frontiers and optimal policies.
//!
//! The linear case has closed forms. The two-bracket case is solved by
//! exhaustive search over a `(β1, β2, y1)` grid: every cell is a pure
//! evaluation, and the reduction picks the largest `V` with ties broken by
//! the smallest grid index, so the result does not depend on how cells are
//! scheduled across threads.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::distribution::SkillDistribution;
use crate::error::{invalid, Error, Result};
use crate::schedule::TaxPolicy;
use crate::welfare::{
    check_weight, welfare_linear_moments, welfare_two_bracket, LinearMoments, PolicyEvaluation,
    WelfarePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontierKind {
    LinearBetaSweep,
    TwoBracketCSweep,
    LogBetaSweep,
}

impl fmt::Display for FrontierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrontierKind::LinearBetaSweep => "linear-beta-sweep",
            FrontierKind::TwoBracketCSweep => "two-bracket-c-sweep",
            FrontierKind::LogBetaSweep => "log-beta-sweep",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierSample {
    /// The swept quantity: `β` for beta sweeps, `c` for weight sweeps.
    pub sweep: f64,
    pub policy: TaxPolicy,
    pub welfare: WelfarePoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierCurve {
    pub kind: FrontierKind,
    pub samples: Vec<FrontierSample>,
}

impl FrontierCurve {
    /// True when `U` never decreases as `σ_u` increases along the samples
    /// (after ordering them by `σ_u`), up to `tol`.
    pub fn is_efficient(&self, tol: f64) -> bool {
        let mut pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .map(|s| (s.welfare.sigma_u, s.welfare.mean_utility))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts.windows(2).all(|w| w[1].1 >= w[0].1 - tol)
    }
}

/// `2σ̃ − (σ̃ + Ũ)²` in units normalized by `σ(N²)` and `E[N²]`; zero on the
/// linear-tax frontier.
pub fn normalized_frontier_residual(w: &WelfarePoint, m: &LinearMoments) -> f64 {
    let s = w.sigma_u / m.sd_of_square;
    let u = w.mean_utility / m.second;
    2.0 * s - (s + u).powi(2)
}

/// Optimal linear retained share for weight `c`.
///
/// Stationarity of `V(β) = β(1−β/2)·E[N²] − c·β²·σ(N²)/2` gives
/// `β* = E[N²] / (E[N²] + c·σ(N²))`, which is `1/(1+c)` in normalized units.
pub fn optimal_linear_closed_form(c: f64, m: &LinearMoments) -> Result<(f64, WelfarePoint)> {
    check_weight(c)?;
    let denom = m.second + c * m.sd_of_square;
    let beta = if denom > 0.0 { (m.second / denom).clamp(0.0, 1.0) } else { 1.0 };
    Ok((beta, welfare_linear_moments(beta, m, c)?))
}

/// Maximizes `V` over `β ∈ {0, 1/steps, …, 1}`; ties go to the smaller `β`.
pub fn optimize_linear_on_grid(c: f64, m: &LinearMoments, steps: usize) -> Result<(f64, WelfarePoint)> {
    check_weight(c)?;
    if steps < 1 {
        return Err(invalid("need at least one grid step"));
    }
    let mut best: Option<(f64, WelfarePoint)> = None;
    for i in 0..=steps {
        let beta = i as f64 / steps as f64;
        let w = welfare_linear_moments(beta, m, c)?;
        if best.is_none_or(|(_, b)| w.v > b.v) {
            best = Some((beta, w));
        }
    }
    Ok(best.expect("grid is nonempty"))
}

/// `(β, U, σ_u)` along `β ∈ [0, 1]` with `beta_steps` uniformly spaced samples.
pub fn frontier_linear(dist: &SkillDistribution, beta_steps: usize) -> Result<FrontierCurve> {
    let m = LinearMoments::of(dist)?;
    let curve = frontier_linear_moments(&m, beta_steps)?;
    let e2 = m.second;
    Ok(FrontierCurve {
        kind: curve.kind,
        samples: curve
            .samples
            .into_iter()
            .map(|s| {
                let b = s.sweep;
                FrontierSample {
                    policy: s.policy.with_alpha((1.0 - b) * b * e2),
                    ..s
                }
            })
            .collect(),
    })
}

/// As [`frontier_linear`], from the moments alone (demogrants are left at 0).
pub fn frontier_linear_moments(m: &LinearMoments, beta_steps: usize) -> Result<FrontierCurve> {
    if beta_steps < 2 {
        return Err(invalid(format!("beta_steps must be >= 2, got {beta_steps}")));
    }
    let samples = (0..beta_steps)
        .map(|i| {
            let beta = i as f64 / (beta_steps - 1) as f64;
            Ok(FrontierSample {
                sweep: beta,
                policy: TaxPolicy::linear(0.0, beta)?,
                welfare: welfare_linear_moments(beta, m, 0.0)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrontierCurve {
        kind: FrontierKind::LinearBetaSweep,
        samples,
    })
}

/// Inclusive, uniformly spaced parameter axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl AxisRange {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let r = Self { lo, hi, step };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.lo.is_finite() || !self.hi.is_finite() || self.hi < self.lo {
            return Err(invalid(format!(
                "range {}:{}:{} needs lo <= hi and step > 0",
                self.lo, self.hi, self.step
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `i`-th grid value, computed from the end points so that the last
    /// value lands exactly on `hi` when the step divides the range.
    pub fn value(&self, i: usize) -> f64 {
        let n = self.len();
        if n == 1 {
            return self.lo;
        }
        let span = (n - 1) as f64 * self.step;
        if ((self.lo + span) - self.hi).abs() <= 1e-9 * self.step {
            self.lo + (self.hi - self.lo) * (i as f64 / (n - 1) as f64)
        } else {
            self.lo + i as f64 * self.step
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

impl FromStr for AxisRange {
    type Err = Error;

    /// Parses `lo:hi:step`.
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(':')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| invalid(format!("bad range {s:?}, expected lo:hi:step")))?;
        match v.as_slice() {
            [lo, hi, step] => Self::new(*lo, *hi, *step),
            _ => Err(invalid(format!("bad range {s:?}, expected lo:hi:step"))),
        }
    }
}

/// Search grid over `(β1, β2, y1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub beta1: AxisRange,
    pub beta2: AxisRange,
    pub y1: AxisRange,
}

impl Default for GridSpec {
    /// `β1, β2 ∈ {0.01, …, 1.00}`, `y1 ∈ {0.01, …, 0.10}`: 100 × 100 × 10 cells.
    fn default() -> Self {
        Self {
            beta1: AxisRange { lo: 0.01, hi: 1.0, step: 0.01 },
            beta2: AxisRange { lo: 0.01, hi: 1.0, step: 0.01 },
            y1: AxisRange { lo: 0.01, hi: 0.1, step: 0.01 },
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, r, lo_min, hi_max) in [
            ("beta1", &self.beta1, 0.0, 1.0),
            ("beta2", &self.beta2, 0.0, 1.0),
            ("y1", &self.y1, f64::MIN_POSITIVE, f64::INFINITY),
        ] {
            r.validate()?;
            if r.lo < lo_min || r.hi > hi_max {
                return Err(invalid(format!("{name} range {r} leaves its valid domain")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.beta1.len() * self.beta2.len() * self.y1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameters of the cell with flat index `idx` (`y1` fastest).
    pub fn cell(&self, idx: usize) -> (f64, f64, f64) {
        let ny = self.y1.len();
        let nb2 = self.beta2.len();
        let k = idx % ny;
        let j = (idx / ny) % nb2;
        let i = idx / (ny * nb2);
        (self.beta1.value(i), self.beta2.value(j), self.y1.value(k))
    }
}

/// Worker count for grid evaluation; `0` uses the global rayon pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Parallelism(pub usize);

impl Parallelism {
    /// Reads `TAXFRONTIER_THREADS` (`0` or unset means automatic).
    pub fn from_env() -> Result<Self> {
        match std::env::var("TAXFRONTIER_THREADS") {
            Ok(v) if !v.trim().is_empty() => v
                .trim()
                .parse::<usize>()
                .map(Parallelism)
                .map_err(|_| invalid(format!("TAXFRONTIER_THREADS={v:?} is not a count"))),
            _ => Ok(Parallelism(0)),
        }
    }

    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> Result<R> {
        if self.0 == 0 {
            return Ok(op());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.0)
            .build()
            .map_err(|e| invalid(format!("cannot start {} workers: {e}", self.0)))?;
        Ok(pool.install(op))
    }
}

/// `(U, σ_u)` for every grid cell, independent of the weight `c`.
#[derive(Debug, Clone)]
pub struct GridEvaluation {
    pub grid: GridSpec,
    cells: Vec<PolicyEvaluation>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub index: usize,
    pub evaluation: PolicyEvaluation,
}

impl GridEvaluation {
    pub fn evaluate(dist: &SkillDistribution, grid: &GridSpec, workers: Parallelism) -> Result<Self> {
        grid.validate()?;
        if grid.is_empty() {
            return Err(invalid("empty grid"));
        }
        let cells = workers.install(|| {
            (0..grid.len())
                .into_par_iter()
                .map(|idx| {
                    let (b1, b2, y1) = grid.cell(idx);
                    welfare_two_bracket(b1, b2, y1, dist, 0.0)
                })
                .collect::<Result<Vec<_>>>()
        })??;
        Ok(Self { grid: *grid, cells })
    }

    pub fn cells(&self) -> &[PolicyEvaluation] {
        &self.cells
    }

    /// Cell maximizing `V = U − c·σ_u`; equal `V` goes to the lower index.
    pub fn argmax(&self, c: f64, workers: Parallelism) -> Result<GridOptimum> {
        check_weight(c)?;
        let score = |i: usize| self.cells[i].welfare.with_weight(c).v;
        let better = |a: usize, b: usize| -> usize {
            let (va, vb) = (score(a), score(b));
            match va.total_cmp(&vb) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Less => b,
                std::cmp::Ordering::Equal => a.min(b),
            }
        };
        let best = workers.install(|| {
            (0..self.cells.len())
                .into_par_iter()
                .reduce_with(better)
        })?;
        let index = best.ok_or_else(|| invalid("empty grid"))?;
        let cell = self.cells[index];
        Ok(GridOptimum {
            index,
            evaluation: PolicyEvaluation {
                policy: cell.policy,
                welfare: cell.welfare.with_weight(c),
            },
        })
    }

    /// A cell with strictly higher `U` and strictly lower `σ_u` than cell
    /// `index`, if any.
    pub fn dominating(&self, index: usize) -> Option<usize> {
        let w = self.cells[index].welfare;
        self.cells.iter().position(|o| {
            o.welfare.mean_utility > w.mean_utility && o.welfare.sigma_u < w.sigma_u
        })
    }
}

/// Best grid cell for weight `c`.
pub fn optimize_two_bracket(
    c: f64,
    dist: &SkillDistribution,
    grid: &GridSpec,
    workers: Parallelism,
) -> Result<GridOptimum> {
    check_weight(c)?;
    GridEvaluation::evaluate(dist, grid, workers)?.argmax(c, workers)
}

/// Optimal two-bracket policies for each weight, in the order given.
pub fn frontier_two_bracket(
    c_values: &[f64],
    dist: &SkillDistribution,
    grid: &GridSpec,
    workers: Parallelism,
) -> Result<FrontierCurve> {
    if c_values.is_empty() {
        return Err(invalid("need at least one weight c"));
    }
    for &c in c_values {
        check_weight(c)?;
    }
    let eval = GridEvaluation::evaluate(dist, grid, workers)?;
    let samples = c_values
        .iter()
        .map(|&c| {
            let opt = eval.argmax(c, workers)?;
            Ok(FrontierSample {
                sweep: c,
                policy: opt.evaluation.policy,
                welfare: opt.evaluation.welfare,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FrontierCurve {
        kind: FrontierKind::TwoBracketCSweep,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalized_closed_form_examples() {
        let m = LinearMoments::normalized();
        let (b, w) = optimal_linear_closed_form(0.0, &m).unwrap();
        assert_eq!(b, 1.0);
        assert_abs_diff_eq!(w.mean_utility, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.sigma_u, 0.5, epsilon = 1e-15);
        let (b, w) = optimal_linear_closed_form(1.0, &m).unwrap();
        assert_abs_diff_eq!(b, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.sigma_u, 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(w.mean_utility, 0.375, epsilon = 1e-15);
        assert!(optimal_linear_closed_form(-1.0, &m).is_err());
    }

    #[test]
    fn general_closed_form_matches_dense_grid() {
        let d = SkillDistribution::uniform(0.0, 10.0).unwrap();
        let m = LinearMoments::of(&d).unwrap();
        let (b, _) = optimal_linear_closed_form(0.5, &m).unwrap();
        assert_abs_diff_eq!(b, 0.690983, epsilon = 1e-6);
        let (g, _) = optimize_linear_on_grid(0.5, &m, 100_000).unwrap();
        assert!((g - b).abs() <= 1e-5);
    }

    #[test]
    fn normalized_frontier_samples() {
        let m = LinearMoments::normalized();
        let curve = frontier_linear_moments(&m, 11).unwrap();
        let last = curve.samples.last().unwrap();
        assert_eq!(last.sweep, 1.0);
        assert_abs_diff_eq!(last.welfare.sigma_u, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(last.welfare.mean_utility, 0.5, epsilon = 1e-15);
        assert_eq!(normalized_frontier_residual(&curve.samples[0].welfare, &m), 0.0);
        let s6 = curve.samples[6].welfare;
        assert_abs_diff_eq!(s6.sigma_u, 0.18, epsilon = 1e-12);
        assert_abs_diff_eq!(s6.mean_utility, 0.42, epsilon = 1e-12);
        assert!(normalized_frontier_residual(&s6, &m).abs() <= 1e-12);
        assert!(curve.is_efficient(0.0));
        assert!(frontier_linear_moments(&m, 1).is_err());
    }

    #[test]
    fn axis_values_hit_end_points() {
        let r = AxisRange::new(0.01, 1.0, 0.01).unwrap();
        assert_eq!(r.len(), 100);
        assert_eq!(r.value(0), 0.01);
        assert_eq!(r.value(99), 1.0);
        let r = AxisRange::new(0.01, 0.1, 0.01).unwrap();
        assert_eq!(r.len(), 10);
        assert_eq!(r.value(9), 0.1);
        let r: AxisRange = "0.2:0.2:0.1".parse().unwrap();
        assert_eq!(r.values(), vec![0.2]);
        let r = AxisRange::new(0.0, 1.0, 0.3).unwrap();
        assert_eq!(r.len(), 4);
        assert_abs_diff_eq!(r.value(3), 0.9, epsilon = 1e-15);
        assert!(AxisRange::new(1.0, 0.0, 0.1).is_err());
        assert!(AxisRange::new(0.0, 1.0, 0.0).is_err());
        assert!("0:1".parse::<AxisRange>().is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = GridSpec::default();
        assert_eq!(g.len(), 100 * 100 * 10);
        assert_eq!(g.cell(0), (0.01, 0.01, 0.01));
        assert_eq!(g.cell(g.len() - 1), (1.0, 1.0, 0.1));
        assert_eq!(g.cell(10), (0.01, 0.02, 0.01));
    }

    #[test]
    fn grid_rejects_out_of_domain_ranges() {
        let mut g = GridSpec::default();
        g.beta2 = AxisRange::new(0.5, 1.5, 0.1).unwrap();
        let d = SkillDistribution::uniform(0.0, 10.0).unwrap();
        assert!(optimize_two_bracket(0.1, &d, &g, Parallelism(1)).is_err());
        let mut g = GridSpec::default();
        g.y1 = AxisRange::new(0.0, 0.1, 0.05).unwrap();
        assert!(optimize_two_bracket(0.1, &d, &g, Parallelism(1)).is_err());
    }

    #[test]
    fn no_tax_wins_without_inequality_weight() {
        let d = SkillDistribution::uniform(0.0, 10.0).unwrap();
        let g = GridSpec {
            beta1: AxisRange::new(0.5, 1.0, 0.1).unwrap(),
            beta2: AxisRange::new(0.5, 1.0, 0.1).unwrap(),
            y1: AxisRange::new(0.05, 1.0, 0.05).unwrap(),
        };
        let opt = optimize_two_bracket(0.0, &d, &g, Parallelism(2)).unwrap();
        let p = opt.evaluation.policy;
        assert_eq!((p.beta1, p.beta2), (1.0, 1.0));
        assert_abs_diff_eq!(opt.evaluation.welfare.mean_utility, 50.0 / 3.0, epsilon = 1e-9);
        let curve = frontier_two_bracket(&[0.0], &d, &g, Parallelism(2)).unwrap();
        let s = curve.samples[0].welfare;
        assert_abs_diff_eq!(s.sigma_u, 0.5 * (8000.0f64 / 9.0).sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn empty_weight_list() {
        let d = SkillDistribution::uniform(0.0, 10.0).unwrap();
        assert!(frontier_two_bracket(&[], &d, &GridSpec::default(), Parallelism(1)).is_err());
    }
}
