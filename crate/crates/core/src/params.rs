//! Parameter vectors for the four tempered stable families and their box bounds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Tempered stable family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Tempered stable subordinator, `(α, δ, λ)`, `α ∈ (0, 1)`.
    #[serde(rename = "tss")]
    Tss,
    /// Centered, totally positively skewed tempered stable law, `(α, δ, λ)`, `α ∈ (0, 2)`.
    #[serde(rename = "tsprime")]
    TsPrime,
    /// Classical tempered stable, `(α, δ₊, δ₋, λ₊, λ₋, μ)`.
    #[serde(rename = "cts")]
    Cts,
    /// Normal tempered stable, `(α, β, δ, λ, μ)`.
    #[serde(rename = "nts")]
    Nts,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Tss, Family::TsPrime, Family::Cts, Family::Nts];

    pub const fn dim(self) -> usize {
        match self {
            Family::Tss | Family::TsPrime => 3,
            Family::Cts => 6,
            Family::Nts => 5,
        }
    }

    /// ASCII parameter names, in vector order.
    pub const fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::Tss | Family::TsPrime => &["alpha", "delta", "lambda"],
            Family::Cts => &["alpha", "delta_plus", "delta_minus", "lambda_plus", "lambda_minus", "mu"],
            Family::Nts => &["alpha", "beta", "delta", "lambda", "mu"],
        }
    }

    /// Greek symbols used when rendering tables.
    pub const fn param_symbols(self) -> &'static [&'static str] {
        match self {
            Family::Tss | Family::TsPrime => &["α", "δ", "λ"],
            Family::Cts => &["α", "δ₊", "δ₋", "λ₊", "λ₋", "μ"],
            Family::Nts => &["α", "β", "δ", "λ", "μ"],
        }
    }

    pub const fn as_str(self) -> &'static str {
        match self {
            Family::Tss => "tss",
            Family::TsPrime => "tsprime",
            Family::Cts => "cts",
            Family::Nts => "nts",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Tss => "TSS",
            Family::TsPrime => "TS'",
            Family::Cts => "CTS",
            Family::Nts => "NTS",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tss" => Ok(Family::Tss),
            "tsprime" | "ts'" | "tsp" | "ts_prime" => Ok(Family::TsPrime),
            "cts" => Ok(Family::Cts),
            "nts" => Ok(Family::Nts),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TssParams<T> {
    pub alpha: T,
    pub delta: T,
    pub lambda: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtsParams<T> {
    pub alpha: T,
    pub delta_plus: T,
    pub delta_minus: T,
    pub lambda_plus: T,
    pub lambda_minus: T,
    pub mu: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NtsParams<T> {
    pub alpha: T,
    pub beta: T,
    pub delta: T,
    pub lambda: T,
    pub mu: T,
}

impl<T: Real> TssParams<T> {
    pub fn new(alpha: T, delta: T, lambda: T) -> Self {
        Self { alpha, delta, lambda }
    }
}

impl<T: Real> CtsParams<T> {
    pub fn new(alpha: T, delta_plus: T, delta_minus: T, lambda_plus: T, lambda_minus: T, mu: T) -> Self {
        Self { alpha, delta_plus, delta_minus, lambda_plus, lambda_minus, mu }
    }
}

impl<T: Real> NtsParams<T> {
    pub fn new(alpha: T, beta: T, delta: T, lambda: T, mu: T) -> Self {
        Self { alpha, beta, delta, lambda, mu }
    }
}

/// Tagged parameter vector θ.
///
/// Construct through [`ParamVector::new`] (or the family constructors) to get
/// domain validation; the variants are public for pattern matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamVector<T> {
    Tss(TssParams<T>),
    TsPrime(TssParams<T>),
    Cts(CtsParams<T>),
    Nts(NtsParams<T>),
}

fn check_open<T: Real>(
    family: Family,
    name: &'static str,
    v: T,
    lo: f64,
    hi: f64,
    reason: &'static str,
) -> Result<()> {
    let x = v.as_f64();
    if x.is_finite() && x > lo && x < hi {
        Ok(())
    } else {
        Err(Error::ParameterDomain { family, name, value: x, reason })
    }
}

fn check_positive<T: Real>(family: Family, name: &'static str, v: T) -> Result<()> {
    check_open(family, name, v, 0.0, f64::INFINITY, "must be positive and finite")
}

fn check_finite<T: Real>(family: Family, name: &'static str, v: T) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterDomain { family, name, value: v.as_f64(), reason: "must be finite" })
    }
}

impl<T: Real> ParamVector<T> {
    /// Builds a validated parameter vector from `values` in the family's canonical order.
    pub fn new(family: Family, values: &[T]) -> Result<Self> {
        if values.len() != family.dim() {
            return Err(Error::Dimension { family, expected: family.dim(), got: values.len() });
        }
        let v = values;
        let p = match family {
            Family::Tss => ParamVector::Tss(TssParams::new(v[0], v[1], v[2])),
            Family::TsPrime => ParamVector::TsPrime(TssParams::new(v[0], v[1], v[2])),
            Family::Cts => ParamVector::Cts(CtsParams::new(v[0], v[1], v[2], v[3], v[4], v[5])),
            Family::Nts => ParamVector::Nts(NtsParams::new(v[0], v[1], v[2], v[3], v[4])),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn tss(alpha: T, delta: T, lambda: T) -> Result<Self> {
        Self::new(Family::Tss, &[alpha, delta, lambda])
    }

    pub fn ts_prime(alpha: T, delta: T, lambda: T) -> Result<Self> {
        Self::new(Family::TsPrime, &[alpha, delta, lambda])
    }

    pub fn cts(alpha: T, delta_plus: T, delta_minus: T, lambda_plus: T, lambda_minus: T, mu: T) -> Result<Self> {
        Self::new(Family::Cts, &[alpha, delta_plus, delta_minus, lambda_plus, lambda_minus, mu])
    }

    pub fn nts(alpha: T, beta: T, delta: T, lambda: T, mu: T) -> Result<Self> {
        Self::new(Family::Nts, &[alpha, beta, delta, lambda, mu])
    }

    pub fn family(&self) -> Family {
        match self {
            ParamVector::Tss(_) => Family::Tss,
            ParamVector::TsPrime(_) => Family::TsPrime,
            ParamVector::Cts(_) => Family::Cts,
            ParamVector::Nts(_) => Family::Nts,
        }
    }

    pub fn dim(&self) -> usize {
        self.family().dim()
    }

    /// Parameter values in canonical order.
    pub fn values(&self) -> Vec<T> {
        match *self {
            ParamVector::Tss(p) | ParamVector::TsPrime(p) => vec![p.alpha, p.delta, p.lambda],
            ParamVector::Cts(p) => vec![p.alpha, p.delta_plus, p.delta_minus, p.lambda_plus, p.lambda_minus, p.mu],
            ParamVector::Nts(p) => vec![p.alpha, p.beta, p.delta, p.lambda, p.mu],
        }
    }

    pub fn alpha(&self) -> T {
        match *self {
            ParamVector::Tss(p) | ParamVector::TsPrime(p) => p.alpha,
            ParamVector::Cts(p) => p.alpha,
            ParamVector::Nts(p) => p.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let family = self.family();
        match *self {
            ParamVector::Tss(p) => {
                check_open(family, "alpha", p.alpha, 0.0, 1.0, "must lie in (0, 1)")?;
                check_positive(family, "delta", p.delta)?;
                check_positive(family, "lambda", p.lambda)
            }
            ParamVector::TsPrime(p) => {
                check_open(family, "alpha", p.alpha, 0.0, 2.0, "must lie in (0, 2)")?;
                check_positive(family, "delta", p.delta)?;
                check_positive(family, "lambda", p.lambda)
            }
            ParamVector::Cts(p) => {
                check_open(family, "alpha", p.alpha, 0.0, 2.0, "must lie in (0, 2)")?;
                check_positive(family, "delta_plus", p.delta_plus)?;
                check_positive(family, "delta_minus", p.delta_minus)?;
                check_positive(family, "lambda_plus", p.lambda_plus)?;
                check_positive(family, "lambda_minus", p.lambda_minus)?;
                check_finite(family, "mu", p.mu)
            }
            ParamVector::Nts(p) => {
                check_open(family, "alpha", p.alpha, 0.0, 1.0, "must lie in (0, 1)")?;
                check_finite(family, "beta", p.beta)?;
                check_positive(family, "delta", p.delta)?;
                check_positive(family, "lambda", p.lambda)?;
                check_finite(family, "mu", p.mu)
            }
        }
    }

    /// Converts the scalar type of every component.
    pub fn cast<U: Real>(&self) -> ParamVector<U> {
        let vals: Vec<U> = self.values().into_iter().map(|v| U::lit(v.as_f64())).collect();
        let v = &vals;
        match self.family() {
            Family::Tss => ParamVector::Tss(TssParams::new(v[0], v[1], v[2])),
            Family::TsPrime => ParamVector::TsPrime(TssParams::new(v[0], v[1], v[2])),
            Family::Cts => ParamVector::Cts(CtsParams::new(v[0], v[1], v[2], v[3], v[4], v[5])),
            Family::Nts => ParamVector::Nts(NtsParams::new(v[0], v[1], v[2], v[3], v[4])),
        }
    }
}

impl<T: Real> fmt::Display for ParamVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", v.as_f64())?;
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    family: Family,
    values: Vec<f64>,
}

impl Serialize for ParamVector<f64> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawParams { family: self.family(), values: self.values() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ParamVector<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawParams::deserialize(deserializer)?;
        ParamVector::new(raw.family, &raw.values).map_err(serde::de::Error::custom)
    }
}

/// Box `Θ` on which the estimators optimise.
///
/// The standard boxes are `[ε, 1−ε] × [ε, M]²` (TSS),
/// `[ε, 2−ε] × [ε, M]⁴ × [−M, M]` (CTS) and
/// `[ε, 1−ε] × [−M, M] × [ε, M]² × [−M, M]` (NTS). `M` may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamBounds<T> {
    pub family: Family,
    pub lower: Vec<T>,
    pub upper: Vec<T>,
    pub eps: T,
    pub cap: T,
}

impl<T: Real> ParamBounds<T> {
    pub const DEFAULT_EPS: f64 = 1e-6;

    /// The standard box for `family` with margin `eps` and cap `cap`.
    pub fn standard(family: Family, eps: T, cap: T) -> Result<Self> {
        let one = T::one();
        let two = T::lit(2.0);
        let (lower, upper) = match family {
            Family::Tss => (vec![eps, eps, eps], vec![one - eps, cap, cap]),
            Family::TsPrime => (vec![eps, eps, eps], vec![two - eps, cap, cap]),
            Family::Cts => (vec![eps, eps, eps, eps, eps, -cap], vec![two - eps, cap, cap, cap, cap, cap]),
            Family::Nts => (vec![eps, -cap, eps, eps, -cap], vec![one - eps, cap, cap, cap, cap]),
        };
        let b = Self { family, lower, upper, eps, cap };
        b.validate()?;
        Ok(b)
    }

    /// Standard box with `ε = 1e-6` and `M = +∞`.
    pub fn default_for(family: Family) -> Self {
        Self::standard(family, T::lit(Self::DEFAULT_EPS), T::infinity()).expect("default bounds are valid")
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.family.dim();
        if self.lower.len() != d || self.upper.len() != d {
            return Err(Error::Dimension { family: self.family, expected: d, got: self.lower.len().min(self.upper.len()) });
        }
        if !(self.eps > T::zero()) {
            return Err(Error::InvalidArgument("bounds margin eps must be positive".into()));
        }
        if !(self.cap > self.eps) {
            return Err(Error::InvalidArgument("bounds cap M must exceed eps".into()));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo < hi) {
                return Err(Error::InvalidArgument(format!(
                    "lower bound {} not below upper bound {} for {}",
                    lo.as_f64(),
                    hi.as_f64(),
                    self.family.param_names()[i]
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, values: &[T]) -> bool {
        values.len() == self.lower.len()
            && values.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (lo, hi))| v >= lo && v <= hi)
    }

    pub fn clamp(&self, values: &mut [T]) {
        for (v, (lo, hi)) in values.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *v = v.max(*lo).min(*hi);
        }
    }

    /// True iff some component lies within `tol` of a finite bound.
    pub fn boundary_hit(&self, values: &[T], tol: T) -> bool {
        values.iter().zip(self.lower.iter().zip(&self.upper)).any(|(v, (lo, hi))| {
            (lo.is_finite() && (*v - *lo).abs() <= tol) || (hi.is_finite() && (*hi - *v).abs() <= tol)
        })
    }

    /// Shifts the bounds of the location component (CTS/NTS `μ`) by `shift`.
    pub fn shift_location(&self, shift: T) -> Self {
        let mut out = self.clone();
        if matches!(self.family, Family::Cts | Family::Nts) {
            let last = out.lower.len() - 1;
            out.lower[last] = out.lower[last] + shift;
            out.upper[last] = out.upper[last] + shift;
        }
        out
    }
}
