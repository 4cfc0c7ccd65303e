use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Period, WindowSpec};

const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("attribute weights must satisfy alpha + beta + gamma + delta + theta + vartheta = 1, got {0}")]
    WeightSum(f64),
    #[error("attribute weight `{0}` is negative or not finite")]
    NegativeWeight(&'static str),
    #[error("expected 6 comma-separated attribute weights, got {0}")]
    WeightCount(usize),
    #[error("rho must be a finite non-negative number, got {0}")]
    Rho(f64),
    #[error("credibility window must be at least 1 chunk")]
    Window,
    #[error("log base must be greater than 1, got {0}")]
    LogBase(f64),
    #[error("weight function must be positive on 1..={window}; w({k}) = {value}")]
    WeightFunction { window: usize, k: usize, value: f64 },
    #[error("explicit weight function lists {got} values for a window of {window}")]
    WeightFunctionLength { window: usize, got: usize },
}

/// Coefficients of the per-chunk credibility combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributeWeights {
    /// Follower-friend ratio.
    pub alpha: f64,
    /// Domain weight.
    pub beta: f64,
    /// Retweets.
    pub gamma: f64,
    /// Favorites.
    pub delta: f64,
    /// Replies.
    pub theta: f64,
    /// Reply sentiment.
    pub vartheta: f64,
}

impl Default for AttributeWeights {
    fn default() -> Self {
        AttributeWeights {
            alpha: 0.2,
            beta: 0.2,
            gamma: 0.2,
            delta: 0.1,
            theta: 0.1,
            vartheta: 0.2,
        }
    }
}

impl AttributeWeights {
    pub fn from_slice(values: &[f64]) -> Result<Self, ConfigError> {
        let &[alpha, beta, gamma, delta, theta, vartheta] = values else {
            return Err(ConfigError::WeightCount(values.len()));
        };
        let w = AttributeWeights {
            alpha,
            beta,
            gamma,
            delta,
            theta,
            vartheta,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.theta, self.vartheta]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        const NAMES: [&str; 6] = ["alpha", "beta", "gamma", "delta", "theta", "vartheta"];
        for (name, v) in NAMES.iter().zip(self.as_array()) {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::NegativeWeight(name));
            }
        }
        let sum: f64 = self.as_array().iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(ConfigError::WeightSum(sum));
        }
        Ok(())
    }
}

impl std::str::FromStr for AttributeWeights {
    type Err = ConfigError;

    /// `"a,b,c,d,e,f"`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>().unwrap_or(f64::NAN))
            .collect();
        if values.iter().any(|v| v.is_nan()) && values.len() == 6 {
            return Err(ConfigError::NegativeWeight("unparsable"));
        }
        Self::from_slice(&values)
    }
}

/// `w(k)` for chunk index `k` (1 = oldest).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFunction {
    /// `w(k) = k`
    #[default]
    Linear,
    /// `w(k) = 1`
    Uniform,
    /// `w(k) = values[k - 1]`
    Explicit(Vec<f64>),
}

impl WeightFunction {
    pub fn weight(&self, k: usize) -> f64 {
        match self {
            WeightFunction::Linear => k as f64,
            WeightFunction::Uniform => 1.0,
            WeightFunction::Explicit(v) => v.get(k.wrapping_sub(1)).copied().unwrap_or(f64::NAN),
        }
    }

    pub fn validate(&self, window: usize) -> Result<(), ConfigError> {
        if let WeightFunction::Explicit(v) = self {
            if v.len() != window {
                return Err(ConfigError::WeightFunctionLength { window, got: v.len() });
            }
        }
        for k in 1..=window {
            let value = self.weight(k);
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::WeightFunction { window, k, value });
            }
        }
        Ok(())
    }
}

/// How a chunk in which a user has no rankable content enters the
/// temporal average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingChunk {
    /// Contributes zero credibility with full weight.
    #[default]
    Zero,
    /// Dropped from both numerator and denominator.
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CredibilityConfig {
    /// Per-chunk content-score threshold; `Sc <= rho` earns no domain weight.
    pub rho: f64,
    /// Number of chunks in the credibility window.
    pub window: usize,
    pub period: Period,
    pub window_end: Option<DateTime<Utc>>,
    pub weights: AttributeWeights,
    pub weight_function: WeightFunction,
    /// Base of the IDF logarithm; `None` is the natural log.
    pub log_base: Option<f64>,
    /// Discard taxonomy assignments not flagged confident.
    pub require_confident: bool,
    pub missing_chunk: MissingChunk,
}

impl Default for CredibilityConfig {
    fn default() -> Self {
        CredibilityConfig {
            rho: 2.0,
            window: 6,
            period: Period::Month,
            window_end: None,
            weights: AttributeWeights::default(),
            weight_function: WeightFunction::Linear,
            log_base: None,
            require_confident: true,
            missing_chunk: MissingChunk::Zero,
        }
    }
}

impl CredibilityConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return Err(ConfigError::Rho(self.rho));
        }
        if self.window == 0 {
            return Err(ConfigError::Window);
        }
        if let Some(b) = self.log_base {
            if !(b.is_finite() && b > 1.0) {
                return Err(ConfigError::LogBase(b));
            }
        }
        self.weights.validate()?;
        self.weight_function.validate(self.window)
    }

    pub fn window_spec(&self) -> WindowSpec {
        WindowSpec {
            chunks: self.window,
            period: self.period,
            window_end: self.window_end,
        }
    }
}
