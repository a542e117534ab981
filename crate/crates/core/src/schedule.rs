//! Linear and one-kink piecewise-linear tax schedules.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Tax schedule `t(y)` with demogrant `alpha`, retained shares `beta1`
/// below the kink income `y1` and `beta2` above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxPolicy {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub y1: f64,
}

/// Skill levels at which the household's optimal regime changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// `√(y1/β1)`: first-bracket interior optimum reaches the kink.
    pub n1: f64,
    /// `√(y1/β2)`: second-bracket interior optimum leaves the kink.
    pub n2: f64,
    /// `√(2·y1/(β1+β2))`: indifference point between the two brackets.
    pub n3: f64,
}

fn unit_share(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

impl TaxPolicy {
    pub fn two_bracket(alpha: f64, beta1: f64, beta2: f64, y1: f64) -> Result<Self> {
        let p = Self { alpha, beta1, beta2, y1 };
        p.validate()?;
        Ok(p)
    }

    /// Linear schedule `t(y) = −α + (1−β)·y`.
    pub fn linear(alpha: f64, beta: f64) -> Result<Self> {
        Self::two_bracket(alpha, beta, beta, 0.0)
    }

    pub fn no_tax() -> Self {
        Self { alpha: 0.0, beta1: 1.0, beta2: 1.0, y1: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        unit_share("beta1", self.beta1)?;
        unit_share("beta2", self.beta2)?;
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(invalid(format!("alpha must be finite and >= 0, got {}", self.alpha)));
        }
        if !(self.y1 >= 0.0 && self.y1.is_finite()) {
            return Err(invalid(format!("y1 must be finite and >= 0, got {}", self.y1)));
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.beta1 == self.beta2
    }

    /// Either retained share is zero: nobody works under that bracket.
    pub fn is_degenerate(&self) -> bool {
        self.beta1 == 0.0 || self.beta2 == 0.0
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        Self { alpha, ..self }
    }

    /// Tax owed on pre-tax income `y`. Income exactly at the kink is taxed by
    /// the first branch; both branches agree there.
    pub fn tax_at(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) {
            return Err(invalid(format!("income must be >= 0, got {y}")));
        }
        Ok(self.tax_unchecked(y))
    }

    pub(crate) fn tax_unchecked(&self, y: f64) -> f64 {
        if y <= self.y1 {
            -self.alpha + (1.0 - self.beta1) * y
        } else {
            -self.alpha + (1.0 - self.beta1) * self.y1 + (1.0 - self.beta2) * (y - self.y1)
        }
    }

    /// After-tax income `y − t(y)`.
    pub fn retained(&self, y: f64) -> Result<f64> {
        Ok(y - self.tax_at(y)?)
    }

    pub fn thresholds(&self) -> Result<RegimeThresholds> {
        if !(self.y1 > 0.0) || self.beta1 <= 0.0 || self.beta2 <= 0.0 {
            return Err(Error::DegeneratePolicy(format!(
                "thresholds need y1 > 0 and positive shares, got y1={}, beta1={}, beta2={}",
                self.y1, self.beta1, self.beta2
            )));
        }
        Ok(RegimeThresholds {
            n1: (self.y1 / self.beta1).sqrt(),
            n2: (self.y1 / self.beta2).sqrt(),
            n3: (2.0 * self.y1 / (self.beta1 + self.beta2)).sqrt(),
        })
    }
}

/// Policy shape from the command line; the demogrant is always derived from
/// budget balance, so it is not part of the spec string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicySpec {
    Linear { beta: f64 },
    TwoBracket { beta1: f64, beta2: f64, y1: f64 },
}

impl PolicySpec {
    pub fn shares(&self) -> (f64, f64, f64) {
        match *self {
            PolicySpec::Linear { beta } => (beta, beta, 0.0),
            PolicySpec::TwoBracket { beta1, beta2, y1 } => (beta1, beta2, y1),
        }
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicySpec::Linear { beta } => write!(f, "linear:{beta}"),
            PolicySpec::TwoBracket { beta1, beta2, y1 } => {
                write!(f, "twobracket:{beta1}:{beta2}:{y1}")
            }
        }
    }
}

impl FromStr for PolicySpec {
    type Err = Error;

    /// Parses `linear:<beta>` or `twobracket:<beta1>:<beta2>:<y1>`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| invalid(format!("bad number {v:?} in policy {s:?}")))
        };
        let spec = match parts.as_slice() {
            ["linear", b] => PolicySpec::Linear { beta: num(b)? },
            ["twobracket", b1, b2, y1] => PolicySpec::TwoBracket {
                beta1: num(b1)?,
                beta2: num(b2)?,
                y1: num(y1)?,
            },
            _ => {
                return Err(invalid(format!(
                    "unknown policy {s:?}, expected linear:<beta> or twobracket:<beta1>:<beta2>:<y1>"
                )))
            }
        };
        let (b1, b2, y1) = spec.shares();
        unit_share("beta1", b1)?;
        unit_share("beta2", b2)?;
        if !(y1 >= 0.0 && y1.is_finite()) {
            return Err(invalid(format!("y1 must be finite and >= 0, got {y1}")));
        }
        Ok(spec)
    }
}
