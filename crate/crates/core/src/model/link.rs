use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const DEFAULT_ONE_BIT_THRESHOLD: f64 = 1.0;

/// User-supplied link `t ↦ map(t) + noise_std·ε`.
#[derive(Clone)]
pub struct CustomLink {
    pub name: String,
    pub map: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub noise_std: f64,
    /// Caller's claim that `Cov(g², f(g)) > 0`; checked against the
    /// estimators, never trusted blindly.
    pub positive_correlation: bool,
}

impl fmt::Debug for CustomLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomLink")
            .field("name", &self.name)
            .field("noise_std", &self.noise_std)
            .field("positive_correlation", &self.positive_correlation)
            .finish()
    }
}

/// Link function `f` of the single index model `y = f(⟨a, x*⟩)`.
///
/// Serializes as its tag string (`quadratic`, `abs`, `onebit:1`, `noisy:0.5`);
/// custom links serialize as `custom:<name>` and cannot be read back.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum LinkFunction {
    Quadratic,
    AbsValue,
    /// `1{|t| > threshold}`.
    OneBitIntensity { threshold: f64 },
    /// `t² + noise_std·ε` with standard Gaussian `ε`.
    NoisyQuadratic { noise_std: f64 },
    Custom(CustomLink),
}

impl LinkFunction {
    pub fn one_bit() -> Self {
        LinkFunction::OneBitIntensity {
            threshold: DEFAULT_ONE_BIT_THRESHOLD,
        }
    }

    pub fn custom(
        name: impl Into<String>,
        map: impl Fn(f64) -> f64 + Send + Sync + 'static,
        noise_std: f64,
        positive_correlation: bool,
    ) -> Self {
        LinkFunction::Custom(CustomLink {
            name: name.into(),
            map: Arc::new(map),
            noise_std,
            positive_correlation,
        })
    }

    /// Noise-free part of the link.
    pub fn deterministic(&self, t: f64) -> f64 {
        match self {
            LinkFunction::Quadratic | LinkFunction::NoisyQuadratic { .. } => t * t,
            LinkFunction::AbsValue => t.abs(),
            LinkFunction::OneBitIntensity { threshold } => {
                if t.abs() > *threshold {
                    1.0
                } else {
                    0.0
                }
            }
            LinkFunction::Custom(c) => (c.map)(t),
        }
    }

    pub fn noise_std(&self) -> f64 {
        match self {
            LinkFunction::NoisyQuadratic { noise_std } => *noise_std,
            LinkFunction::Custom(c) => c.noise_std,
            _ => 0.0,
        }
    }

    /// One response. Noise-free links consume no randomness.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let sd = self.noise_std();
        let base = self.deterministic(t);
        if sd > 0.0 {
            base + sd * rng.sample::<f64, _>(StandardNormal)
        } else {
            base
        }
    }

    /// `Cov(g², f(g))` for standard Gaussian `g`, where a closed form exists.
    pub fn analytic_gaussian_mu(&self) -> Option<f64> {
        use std::f64::consts::PI;
        match self {
            // Var(g²) = E g⁴ − 1.
            LinkFunction::Quadratic | LinkFunction::NoisyQuadratic { .. } => Some(2.0),
            // E|g|³ − E|g| = 2√(2/π) − √(2/π).
            LinkFunction::AbsValue => Some((2.0 / PI).sqrt()),
            // E g² 1{|g|>τ} − P(|g|>τ) = 2(τφ(τ) + Q(τ)) − 2Q(τ).
            LinkFunction::OneBitIntensity { threshold } => {
                let t = *threshold;
                Some(2.0 * t * (-0.5 * t * t).exp() / (2.0 * PI).sqrt())
            }
            LinkFunction::Custom(_) => None,
        }
    }

    /// Declared positive-correlation flag; built-ins with `μ > 0` report true.
    pub fn declares_positive_correlation(&self) -> bool {
        match self {
            LinkFunction::Custom(c) => c.positive_correlation,
            other => other.analytic_gaussian_mu().is_some_and(|mu| mu > 0.0),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            LinkFunction::Quadratic => "quadratic".into(),
            LinkFunction::AbsValue => "abs".into(),
            LinkFunction::OneBitIntensity { threshold } => format!("onebit:{threshold}"),
            LinkFunction::NoisyQuadratic { noise_std } => format!("noisy:{noise_std}"),
            LinkFunction::Custom(c) => format!("custom:{}", c.name),
        }
    }
}

/// Links compare by tag, so two custom links with the same name are equal.
impl PartialEq for LinkFunction {
    fn eq(&self, other: &Self) -> bool {
        self.tag() == other.tag()
    }
}

impl fmt::Display for LinkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for LinkFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let parse_arg = |what: &str| -> Result<Option<f64>> {
            match arg {
                None => Ok(None),
                Some(a) => match a.parse::<f64>() {
                    Ok(v) if v.is_finite() && v >= 0.0 => Ok(Some(v)),
                    _ => invalid(format!("bad {what} '{a}' in link '{s}'")),
                },
            }
        };
        match name {
            "quadratic" if arg.is_none() => Ok(LinkFunction::Quadratic),
            "abs" if arg.is_none() => Ok(LinkFunction::AbsValue),
            "onebit" => Ok(LinkFunction::OneBitIntensity {
                threshold: parse_arg("threshold")?.unwrap_or(DEFAULT_ONE_BIT_THRESHOLD),
            }),
            "noisy" => match parse_arg("noise std")? {
                Some(noise_std) => Ok(LinkFunction::NoisyQuadratic { noise_std }),
                None => invalid("noisy link needs a noise level, e.g. noisy:0.5"),
            },
            "custom" => invalid("custom links cannot be constructed from a string"),
            _ => invalid(format!(
                "unknown link '{s}' (expected quadratic, abs, onebit[:τ] or noisy:σ)"
            )),
        }
    }
}

impl TryFrom<String> for LinkFunction {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<LinkFunction> for String {
    fn from(l: LinkFunction) -> Self {
        l.tag()
    }
}
