//! Random variate generation for tempered stable laws.
//!
//! Every sampler is a pure function of `(θ, n, seed)`: the generator is a
//! ChaCha8 stream selected by `(seed, stream)`, so replications of a Monte
//! Carlo study can run on independent streams of one base seed.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use tempered_core::special::gamma;
use tempered_core::{Error, Family, ParamVector, Params, Provenance, Result, Sample, TssParams, ALPHA_ONE_TOL};

/// Default cut-off `c` of the approximate TS' acceptance step.
pub const DEFAULT_CUTOFF: f64 = 2.0;

/// Cut-off of the approximate TS' acceptance step. Serialised as a number
/// or the string `"auto"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "CutoffRepr", try_from = "CutoffRepr")]
pub enum Cutoff {
    Fixed(f64),
    /// Exact test for `α < 1`; otherwise `max(2, −m + 4·sd)` with `m` the
    /// TS' shift and `sd` its standard deviation, which puts the left end of
    /// the target law inside the exact region of the test.
    Auto,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CutoffRepr {
    Value(f64),
    Name(String),
}

impl From<Cutoff> for CutoffRepr {
    fn from(c: Cutoff) -> Self {
        match c {
            Cutoff::Fixed(v) => CutoffRepr::Value(v),
            Cutoff::Auto => CutoffRepr::Name("auto".into()),
        }
    }
}

impl TryFrom<CutoffRepr> for Cutoff {
    type Error = Error;

    fn try_from(r: CutoffRepr) -> Result<Self> {
        match r {
            CutoffRepr::Value(v) => Ok(Cutoff::Fixed(v)),
            CutoffRepr::Name(s) => s.parse(),
        }
    }
}

impl std::fmt::Display for Cutoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cutoff::Fixed(v) => write!(f, "{v}"),
            Cutoff::Auto => write!(f, "auto"),
        }
    }
}

impl From<f64> for Cutoff {
    fn from(c: f64) -> Self {
        Cutoff::Fixed(c)
    }
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Fixed(DEFAULT_CUTOFF)
    }
}

impl std::str::FromStr for Cutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Cutoff::Auto);
        }
        s.parse::<f64>().map(Cutoff::Fixed).map_err(|_| Error::InvalidArgument(format!("invalid cut-off '{s}'")))
    }
}

impl Cutoff {
    /// The value of `c` used for the component `TS'(α, δ, λ)`; `0` means the
    /// exact test `U ≤ exp(−λV)`.
    pub fn resolve(self, p: TssParams<f64>) -> Result<f64> {
        match self {
            Cutoff::Fixed(c) if c > 0.0 && c.is_finite() => Ok(c),
            Cutoff::Fixed(c) => Err(Error::InvalidArgument(format!("cut-off c = {c} must be positive"))),
            Cutoff::Auto if p.alpha < 1.0 => Ok(0.0),
            Cutoff::Auto => {
                let shift = gamma(1.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 1.0);
                let sd = (gamma(2.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 2.0)).sqrt();
                Ok((4.0 * sd - shift).max(DEFAULT_CUTOFF))
            }
        }
    }
}

/// Generator for `(seed, stream)`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerStats {
    pub proposals: u64,
    pub acceptances: u64,
}

impl SamplerStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            0.0
        } else {
            self.acceptances as f64 / self.proposals as f64
        }
    }

    pub fn merge(&mut self, other: SamplerStats) {
        self.proposals += other.proposals;
        self.acceptances += other.acceptances;
    }
}

fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Open01.sample(rng)
}

/// Scale `σ` of the totally skewed stable law with Lévy measure
/// `δ r^{−1−α} dr`: `σ^α = δ Γ(1−α)/α · cos(πα/2)`.
pub fn stable_scale(alpha: f64, delta: f64) -> f64 {
    let s = delta * gamma(1.0 - alpha) / alpha * (std::f64::consts::FRAC_PI_2 * alpha).cos();
    s.powf(1.0 / alpha)
}

/// One draw of the totally positively skewed (`β = 1`) stable law with index
/// `α ≠ 1` and scale `σ` by the Chambers–Mallows–Weron transform.
pub fn draw_skewed_stable<R: Rng + ?Sized>(rng: &mut R, alpha: f64, sigma: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    let tan = (FRAC_PI_2 * alpha).tan();
    let b = tan.atan() / alpha;
    let s = (1.0 + tan * tan).powf(0.5 / alpha);
    let v = PI * (uniform(rng) - 0.5);
    let w = -uniform(rng).ln();
    let avb = alpha * (v + b);
    let x = s * avb.sin() / v.cos().powf(1.0 / alpha) * ((v - avb).cos() / w).powf((1.0 - alpha) / alpha);
    sigma * x
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    Ok(())
}

fn check_subordinator(alpha: f64, delta: f64) -> Result<()> {
    ParamVector::tss(alpha, delta, 1.0).map(|_| ())
}

/// One draw of `S(α, δ)`, `α ∈ (0, 1)`; nonpositive or non-finite outputs
/// (underflow) are redrawn.
pub fn draw_stable_subordinator<R: Rng + ?Sized>(rng: &mut R, alpha: f64, sigma: f64) -> f64 {
    loop {
        let v = draw_skewed_stable(rng, alpha, sigma);
        if v > 0.0 && v.is_finite() {
            return v;
        }
    }
}

pub fn sample_stable_subordinator_with<R: Rng + ?Sized>(rng: &mut R, alpha: f64, delta: f64, n: usize) -> Result<Vec<f64>> {
    check_subordinator(alpha, delta)?;
    let sigma = stable_scale(alpha, delta);
    Ok((0..n).map(|_| draw_stable_subordinator(rng, alpha, sigma)).collect())
}

/// `n` draws of the stable subordinator `S(α, δ)`.
pub fn sample_stable_subordinator(alpha: f64, delta: f64, n: usize, seed: u64) -> Result<Sample> {
    check_n(n)?;
    let mut rng = rng_for(seed, 0);
    let values = sample_stable_subordinator_with(&mut rng, alpha, delta, n)?;
    Ok(Sample::new(values, Provenance::Simulated { family: Family::Tss, seed, stream: 0 }))
}

fn tss_params(theta: &Params) -> Result<TssParams<f64>> {
    theta.validate()?;
    match *theta {
        ParamVector::Tss(p) => Ok(p),
        _ => Err(Error::InvalidArgument(format!("expected TSS parameters, got {}", theta.family()))),
    }
}

/// Exact TSS draws: `V ~ S(α, δ)` accepted iff `U ≤ exp(−λV)`.
pub fn sample_tss_with<R: Rng + ?Sized>(rng: &mut R, theta: &Params, n: usize) -> Result<(Vec<f64>, SamplerStats)> {
    let p = tss_params(theta)?;
    let sigma = stable_scale(p.alpha, p.delta);
    let mut stats = SamplerStats::default();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = draw_stable_subordinator(rng, p.alpha, sigma);
        let u = uniform(rng);
        stats.proposals += 1;
        if u <= (-p.lambda * v).exp() {
            stats.acceptances += 1;
            out.push(v);
        }
    }
    Ok((out, stats))
}

pub fn sample_tss(theta: &Params, n: usize, seed: u64) -> Result<(Sample, SamplerStats)> {
    check_n(n)?;
    let mut rng = rng_for(seed, 0);
    let (values, stats) = sample_tss_with(&mut rng, theta, n)?;
    Ok((Sample::new(values, Provenance::Simulated { family: Family::Tss, seed, stream: 0 }), stats))
}

/// TS' draws by the approximate acceptance-rejection step: `V ~ S(α, δ)`,
/// accepted iff `U ≤ min(1, exp(−λ(V + c)))`, returned as
/// `V − Γ(1−α)δλ^{α−1}`. For `α < 1` the proposal is positive, the threshold
/// never exceeds one and the draws are exact for every `c`.
pub fn sample_ts_prime_params<R: Rng + ?Sized>(
    rng: &mut R,
    p: TssParams<f64>,
    c: impl Into<Cutoff>,
    n: usize,
) -> Result<(Vec<f64>, SamplerStats)> {
    let c = c.into().resolve(p)?;
    ParamVector::ts_prime(p.alpha, p.delta, p.lambda)?;
    if (p.alpha - 1.0).abs() < ALPHA_ONE_TOL {
        return Err(Error::UnsupportedFamily { operation: "sampling at alpha = 1", family: Family::TsPrime });
    }
    let sigma = stable_scale(p.alpha, p.delta);
    let shift = gamma(1.0 - p.alpha) * p.delta * p.lambda.powf(p.alpha - 1.0);
    let positive = p.alpha < 1.0;
    let mut stats = SamplerStats::default();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let v = if positive { draw_stable_subordinator(rng, p.alpha, sigma) } else { draw_skewed_stable(rng, p.alpha, sigma) };
        if !v.is_finite() {
            continue;
        }
        let u = uniform(rng);
        stats.proposals += 1;
        let threshold = -p.lambda * (v + c);
        if threshold >= 0.0 || u <= threshold.exp() {
            stats.acceptances += 1;
            out.push(v - shift);
        }
    }
    Ok((out, stats))
}

pub fn sample_ts_prime_with<R: Rng + ?Sized>(rng: &mut R, theta: &Params, c: impl Into<Cutoff>, n: usize) -> Result<(Vec<f64>, SamplerStats)> {
    theta.validate()?;
    match *theta {
        ParamVector::TsPrime(p) => sample_ts_prime_params(rng, p, c, n),
        _ => Err(Error::InvalidArgument(format!("expected TS' parameters, got {}", theta.family()))),
    }
}

pub fn sample_ts_prime(theta: &Params, c: impl Into<Cutoff>, n: usize, seed: u64) -> Result<(Sample, SamplerStats)> {
    check_n(n)?;
    let mut rng = rng_for(seed, 0);
    let (values, stats) = sample_ts_prime_with(&mut rng, theta, c, n)?;
    Ok((Sample::new(values, Provenance::Simulated { family: Family::TsPrime, seed, stream: 0 }), stats))
}

/// CTS draws `Y₊ − Y₋ + μ` from independent TS' components.
pub fn sample_cts_with<R: Rng + ?Sized>(rng: &mut R, theta: &Params, c: impl Into<Cutoff>, n: usize) -> Result<Vec<f64>> {
    theta.validate()?;
    let p = match *theta {
        ParamVector::Cts(p) => p,
        _ => return Err(Error::InvalidArgument(format!("expected CTS parameters, got {}", theta.family()))),
    };
    let c = c.into();
    let (plus, _) = sample_ts_prime_params(rng, TssParams::new(p.alpha, p.delta_plus, p.lambda_plus), c, n)?;
    let (minus, _) = sample_ts_prime_params(rng, TssParams::new(p.alpha, p.delta_minus, p.lambda_minus), c, n)?;
    Ok(plus.iter().zip(&minus).map(|(a, b)| a - b + p.mu).collect())
}

pub fn sample_cts(theta: &Params, c: impl Into<Cutoff>, n: usize, seed: u64) -> Result<Sample> {
    check_n(n)?;
    let mut rng = rng_for(seed, 0);
    let values = sample_cts_with(&mut rng, theta, c, n)?;
    Ok(Sample::new(values, Provenance::Simulated { family: Family::Cts, seed, stream: 0 }))
}

/// NTS draws `√Y·B + βY + μ` with `Y ~ TSS(α, δ, λ)` and standard normal `B`.
pub fn sample_nts_with<R: Rng + ?Sized>(rng: &mut R, theta: &Params, n: usize) -> Result<Vec<f64>> {
    theta.validate()?;
    let p = match *theta {
        ParamVector::Nts(p) => p,
        _ => return Err(Error::InvalidArgument(format!("expected NTS parameters, got {}", theta.family()))),
    };
    let (y, _) = sample_tss_with(rng, &ParamVector::tss(p.alpha, p.delta, p.lambda)?, n)?;
    Ok(y
        .into_iter()
        .map(|y| {
            let b: f64 = StandardNormal.sample(rng);
            y.sqrt() * b + p.beta * y + p.mu
        })
        .collect())
}

pub fn sample_nts(theta: &Params, n: usize, seed: u64) -> Result<Sample> {
    check_n(n)?;
    let mut rng = rng_for(seed, 0);
    let values = sample_nts_with(&mut rng, theta, n)?;
    Ok(Sample::new(values, Provenance::Simulated { family: Family::Nts, seed, stream: 0 }))
}

/// Draws from any family with an explicit generator (TS'/CTS use cut-off `c`).
pub fn sample_with<R: Rng + ?Sized>(rng: &mut R, theta: &Params, n: usize, c: impl Into<Cutoff>) -> Result<Vec<f64>> {
    let c = c.into();
    match theta.family() {
        Family::Tss => sample_tss_with(rng, theta, n).map(|(v, _)| v),
        Family::TsPrime => sample_ts_prime_with(rng, theta, c, n).map(|(v, _)| v),
        Family::Cts => sample_cts_with(rng, theta, c, n),
        Family::Nts => sample_nts_with(rng, theta, n),
    }
}

/// `n` draws from any family on stream `stream` of `seed`.
pub fn sample(theta: &Params, n: usize, seed: u64, stream: u64, c: impl Into<Cutoff>) -> Result<Sample> {
    check_n(n)?;
    let mut rng = rng_for(seed, stream);
    let values = sample_with(&mut rng, theta, n, c)?;
    Ok(Sample::new(values, Provenance::Simulated { family: theta.family(), seed, stream }))
}
