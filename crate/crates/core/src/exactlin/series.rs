use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

pub const DEFAULT_TRUNCATION: usize = 12;

/// Truncated power series `Σ dim H_i · t^i`.
///
/// Coefficients beyond `truncation` are unknown and never extrapolated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoincareSeries {
    pub coefficients: Vec<u64>,
    pub truncation: usize,
    /// False when coefficients are only upper bounds.
    pub exact: bool,
}

impl PoincareSeries {
    pub fn from_coefficients(mut coefficients: Vec<u64>, truncation: usize) -> Self {
        coefficients.resize(truncation + 1, 0);
        PoincareSeries {
            coefficients,
            truncation,
            exact: true,
        }
    }

    pub fn zero(truncation: usize) -> Self {
        Self::from_coefficients(Vec::new(), truncation)
    }

    pub fn one(truncation: usize) -> Self {
        Self::monomial(0, truncation)
    }

    /// `t^degree`, or zero if `degree` is past the truncation.
    pub fn monomial(degree: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if degree <= truncation {
            s.coefficients[degree] = 1;
        }
        s
    }

    /// `1 / (1 - t^step)`.
    pub fn geometric(step: usize, truncation: usize) -> Self {
        assert!(step > 0, "1/(1-t^0) is not a power series");
        let mut s = Self::zero(truncation);
        for k in (0..=truncation).step_by(step) {
            s.coefficients[k] = 1;
        }
        s
    }

    /// `(1 + t^odd) / (1 - t^even)`, the mod-ℓ series of one exterior and one
    /// polynomial generator.
    pub fn exterior_times_polynomial(odd: usize, even: usize, truncation: usize) -> Self {
        Self::one(truncation)
            .add(&Self::monomial(odd, truncation))
            .mul(&Self::geometric(even, truncation))
    }

    pub fn coefficient(&self, degree: usize) -> u64 {
        self.coefficients.get(degree).copied().unwrap_or(0)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation);
        PoincareSeries {
            coefficients: self.coefficients[..=t].to_vec(),
            truncation: t,
            exact: self.exact,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        PoincareSeries {
            coefficients: (0..=t)
                .map(|i| self.coefficients[i] + other.coefficients[i])
                .collect(),
            truncation: t,
            exact: self.exact && other.exact,
        }
    }

    /// Cauchy product (Künneth over a field).
    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let mut out = vec![0u64; t + 1];
        for (i, &a) in self.coefficients[..=t].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coefficients[..=t - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PoincareSeries {
            coefficients: out,
            truncation: t,
            exact: self.exact && other.exact,
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        PoincareSeries {
            coefficients: self.coefficients.iter().map(|c| c * k).collect(),
            truncation: self.truncation,
            exact: self.exact,
        }
    }

    /// Shift by `t^degree`.
    pub fn shift(&self, degree: usize) -> Self {
        self.mul(&Self::monomial(degree, self.truncation))
    }
}

impl Add for &PoincareSeries {
    type Output = PoincareSeries;
    fn add(self, rhs: Self) -> PoincareSeries {
        PoincareSeries::add(self, rhs)
    }
}

impl Mul for &PoincareSeries {
    type Output = PoincareSeries;
    fn mul(self, rhs: Self) -> PoincareSeries {
        PoincareSeries::mul(self, rhs)
    }
}

impl fmt::Display for PoincareSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} + O(t^{})", self.truncation + 1)
    }
}
