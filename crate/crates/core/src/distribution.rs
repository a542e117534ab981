//! Skill densities with bounded support.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Uniform { lower: f64, upper: f64 },
    Tabulated { name: String, density: DensityFn, lower: f64, upper: f64 },
}

/// Density `f(n)` of the skill variable `N` on a bounded subset of `[0, ∞)`.
#[derive(Clone)]
pub struct SkillDistribution {
    kind: Kind,
    quadrature: QuadratureOptions,
}

impl fmt::Debug for SkillDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SkillDistribution({self})")
    }
}

impl fmt::Display for SkillDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Uniform { lower, upper } => write!(f, "uniform:{lower}:{upper}"),
            Kind::Tabulated { name, lower, upper, .. } => write!(f, "{name}:[{lower},{upper}]"),
        }
    }
}

impl SkillDistribution {
    /// Uniform skills on `[lower, upper]`.
    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 || upper <= lower {
            return Err(invalid(format!(
                "uniform support needs 0 <= a < b < inf, got [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            kind: Kind::Uniform { lower, upper },
            quadrature: QuadratureOptions::default(),
        })
    }

    /// A density given as a callable on `[lower, upper]`. The density must be
    /// nonnegative and integrate to one within `1e-10`.
    pub fn from_density<F>(name: &str, density: F, lower: f64, upper: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lower.is_finite() && upper.is_finite()) || lower < 0.0 || upper <= lower {
            return Err(invalid(format!(
                "support needs 0 <= lower < upper < inf, got [{lower}, {upper}]"
            )));
        }
        let dist = Self {
            kind: Kind::Tabulated {
                name: name.to_string(),
                density: Arc::new(density),
                lower,
                upper,
            },
            quadrature: QuadratureOptions::default(),
        };
        let mass = dist.expect(|_| 1.0, lower, upper)?;
        if (mass - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("density integrates to {mass}, not 1")));
        }
        let negative = (0..=1000)
            .map(|i| lower + (upper - lower) * i as f64 / 1000.0)
            .any(|n| dist.density(n) < 0.0);
        if negative {
            return Err(invalid("density takes negative values"));
        }
        Ok(dist)
    }

    /// Replaces the quadrature stopping rule used by [`expect`](Self::expect).
    pub fn with_quadrature(mut self, quadrature: QuadratureOptions) -> Self {
        self.quadrature = quadrature;
        self
    }

    pub fn quadrature(&self) -> &QuadratureOptions {
        &self.quadrature
    }

    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            Kind::Uniform { lower, upper } => (*lower, *upper),
            Kind::Tabulated { lower, upper, .. } => (*lower, *upper),
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.kind, Kind::Uniform { .. })
    }

    pub fn density(&self, n: f64) -> f64 {
        let (lo, hi) = self.support();
        if n < lo || n > hi {
            return 0.0;
        }
        match &self.kind {
            Kind::Uniform { lower, upper } => 1.0 / (upper - lower),
            Kind::Tabulated { density, .. } => density(n),
        }
    }

    /// `E[N^k]` for `k ∈ {1, 2, 4}`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if !matches!(k, 1 | 2 | 4) {
            return Err(invalid(format!("moment order {k} is not one of 1, 2, 4")));
        }
        let (lo, hi) = self.support();
        self.power_integral(k as i32, lo, hi)
    }

    /// Variance of `N²`, i.e. `E[N⁴] − (E[N²])²`.
    pub fn variance_of_square(&self) -> Result<f64> {
        let m2 = self.moment(2)?;
        Ok((self.moment(4)? - m2 * m2).max(0.0))
    }

    /// `∫ g(n) f(n) dn` over `[lo, hi] ∩ support`. Returns 0 for an empty
    /// interval. `g` must be smooth on the clamped interval; use
    /// [`expect_split`](Self::expect_split) when it has known kinks.
    pub fn expect<G: Fn(f64) -> f64>(&self, g: G, lo: f64, hi: f64) -> Result<f64> {
        self.expect_split(g, lo, hi, &[])
    }

    /// As [`expect`](Self::expect), with the interval cut at `breakpoints`
    /// before adaptive refinement.
    pub fn expect_split<G: Fn(f64) -> f64>(
        &self,
        g: G,
        lo: f64,
        hi: f64,
        breakpoints: &[f64],
    ) -> Result<f64> {
        if lo.is_nan() || hi.is_nan() {
            return Err(invalid("NaN integration limit"));
        }
        let (s_lo, s_hi) = self.support();
        let (a, b) = (lo.max(s_lo), hi.min(s_hi));
        if b <= a {
            return Ok(0.0);
        }
        match &self.kind {
            Kind::Uniform { lower, upper } => {
                let est = integrate(g, a, b, breakpoints, &self.quadrature)?;
                Ok(est.value / (upper - lower))
            }
            Kind::Tabulated { density, .. } => {
                let est = integrate(|n| g(n) * density(n), a, b, breakpoints, &self.quadrature)?;
                Ok(est.value)
            }
        }
    }

    /// `∫ n^k f(n) dn` over `[lo, hi] ∩ support`, exact for the uniform
    /// family and by quadrature otherwise. Negative powers need a clamped
    /// interval bounded away from zero.
    pub fn power_integral(&self, k: i32, lo: f64, hi: f64) -> Result<f64> {
        let (s_lo, s_hi) = self.support();
        let (a, b) = (lo.max(s_lo), hi.min(s_hi));
        if b <= a {
            return Ok(0.0);
        }
        if k < 0 && a <= 0.0 {
            return Err(Error::NumericDomain(format!(
                "n^{k} is not integrable on [{a}, {b}]"
            )));
        }
        match &self.kind {
            Kind::Uniform { lower, upper } => {
                let width = upper - lower;
                if k == -1 {
                    Ok((b / a).ln() / width)
                } else {
                    let p = k + 1;
                    Ok((b.powi(p) - a.powi(p)) / (p as f64 * width))
                }
            }
            Kind::Tabulated { .. } => self.expect(|n| n.powi(k), a, b),
        }
    }
}

impl FromStr for SkillDistribution {
    type Err = Error;

    /// Parses `uniform:<a>:<b>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["uniform", a, b] => {
                let a: f64 = a
                    .parse()
                    .map_err(|_| invalid(format!("bad lower bound {a:?} in {s:?}")))?;
                let b: f64 = b
                    .parse()
                    .map_err(|_| invalid(format!("bad upper bound {b:?} in {s:?}")))?;
                Self::uniform(a, b)
            }
            _ => Err(invalid(format!(
                "unknown distribution {s:?}, expected uniform:<a>:<b>"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn u010() -> SkillDistribution {
        SkillDistribution::uniform(0.0, 10.0).unwrap()
    }

    #[test]
    fn uniform_moments() {
        assert_abs_diff_eq!(u010().moment(2).unwrap(), 100.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u010().moment(4).unwrap(), 2000.0, epsilon = 1e-9);
        let unit = SkillDistribution::uniform(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(unit.moment(1).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(u010().moment(3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn expectation_examples() {
        let d = u010();
        assert_abs_diff_eq!(d.expect(|n| n * n, 2.0, 3.0).unwrap(), 0.1 * 19.0 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d.expect(|_| 1.0, 0.0, 10.0).unwrap(), 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(d.expect(|n| n.powi(-2), 1.0, 2.0).unwrap(), 0.05, epsilon = 1e-13);
    }

    #[test]
    fn inverse_square_against_riemann_sum() {
        let m = 2_000_000;
        let h = 1.0 / m as f64;
        let riemann: f64 = (0..m)
            .map(|i| {
                let n = 1.0 + (i as f64 + 0.5) * h;
                0.1 * h / (n * n)
            })
            .sum();
        let d = u010();
        assert_abs_diff_eq!(d.expect(|n| n.powi(-2), 1.0, 2.0).unwrap(), riemann, epsilon = 1e-10);
        assert_abs_diff_eq!(d.power_integral(-2, 1.0, 2.0).unwrap(), riemann, epsilon = 1e-10);
    }

    #[test]
    fn clamping_and_empty_intervals() {
        let d = u010();
        assert_eq!(d.expect(|_| 1.0, 3.0, 2.0).unwrap(), 0.0);
        assert_eq!(d.expect(|_| 1.0, 11.0, 20.0).unwrap(), 0.0);
        assert_abs_diff_eq!(d.expect(|_| 1.0, -5.0, 5.0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(d.power_integral(2, 5.0, 50.0).unwrap(), 0.1 * 875.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn non_finite_integrand() {
        let err = u010().expect(|n| 1.0 / (n - 5.0), 0.0, 10.0).unwrap_err();
        assert!(matches!(err, Error::NumericDomain(_)));
        assert!(u010().power_integral(-2, 0.0, 1.0).is_err());
    }

    #[test]
    fn tabulated_density() {
        // f(n) = n/2 on [0, 2]
        let d = SkillDistribution::from_density("ramp", |n| 0.5 * n, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(d.moment(2).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.moment(4).unwrap(), 16.0 / 3.0, epsilon = 1e-12);
        assert!(SkillDistribution::from_density("bad", |_| 1.0, 0.0, 2.0).is_err());
        assert!(SkillDistribution::from_density("neg", |n| n - 0.5, 0.0, 2.0).is_err());
    }

    #[test]
    fn parse_spec_string() {
        let d: SkillDistribution = "uniform:0:10".parse().unwrap();
        assert_eq!(d.support(), (0.0, 10.0));
        assert_eq!(d.to_string(), "uniform:0:10");
        for bad in ["uniform:5:1", "uniform:-1:3", "normal:0:1", "uniform:0", "uniform:a:b"] {
            assert!(bad.parse::<SkillDistribution>().is_err(), "{bad}");
        }
    }
}
