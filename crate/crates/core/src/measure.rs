//! Brute-force irrationality measure functions — the numeric ground truth.
//!
//! `ψ_α(t) = min_{1≤q≤t} ||qα||` is evaluated by an exact fixed-point scan:
//! `α` is scaled to `A = ⌊α·10^P⌋` once, and each step adds `A` into a
//! running remainder, so the per-`q` work is a single big-integer addition.
//! The second-best variant excludes exactly the convergent pairs `(p_n, q_n)`
//! and for each `q` considers the four nearest numerators, skipping excluded
//! ones. Every comparison carries an explicit error budget in ulps and the
//! scan aborts with `PrecisionInsufficient` rather than decide an ambiguous
//! ordering.
//!
//! The `liminf` estimators enumerate the descent points of the piecewise
//! constant measure function and minimize `t·ψ(t)` over left endpoints in the
//! tail window `[t_max/10, t_max]`; they are numeric estimates, converging
//! for eventually periodic inputs, and serve as the independent cross-check
//! of the exact limit machinery.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;

use crate::cf::{CfError, CfExpansion};
use crate::exactnum::{BigRational, NumError, QuadSurd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("precision of {available} digits is insufficient (need at least {required})")]
    PrecisionInsufficient { required: usize, available: usize },
    #[error("scan range must satisfy 1 ≤ t")]
    BadScanRange,
    #[error(transparent)]
    Cf(#[from] CfError),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// Which measure function to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasureKind {
    /// `ψ_α`: all pairs admissible (Lagrange).
    #[serde(rename = "best")]
    Best,
    /// `ψ_α^[2]`: convergent pairs excluded (second-best).
    #[serde(rename = "second-best")]
    SecondBest,
}

/// A real number handed to the scanner, with its working precision in
/// decimal digits.
#[derive(Debug, Clone)]
pub struct RealInput {
    source: RealSource,
    precision: usize,
}

#[derive(Debug, Clone)]
enum RealSource {
    Surd(QuadSurd),
    Cf(CfExpansion),
}

/// One evaluation of a measure function: the value `|q·α − p|` achieved at
/// `t` by the stated pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureSample {
    pub t: u64,
    pub kind: MeasureKind,
    /// Exact value of the scan's minimum at the working precision.
    #[serde(with = "crate::exactnum::serde_rational")]
    pub value: BigRational,
    pub q: u64,
    #[serde(with = "crate::exactnum::serde_bigint")]
    pub p: BigInt,
}

impl MeasureSample {
    /// Decimal rendering of the value, truncated toward zero.
    pub fn value_decimal(&self, digits: usize) -> String {
        rational_decimal(&self.value, digits)
    }
}

/// Result of a liminf scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiminfEstimate {
    pub kind: MeasureKind,
    pub t_max: u64,
    /// Left edge of the tail window actually searched.
    pub window_start: u64,
    /// Minimum of `t·value` over window left endpoints.
    #[serde(with = "crate::exactnum::serde_rational")]
    pub estimate: BigRational,
    /// The breakpoint achieving the estimate.
    pub at: MeasureSample,
    /// Number of descent points found in `[1, t_max]`.
    pub breakpoint_count: usize,
}

impl LiminfEstimate {
    pub fn estimate_decimal(&self, digits: usize) -> String {
        rational_decimal(&self.estimate, digits)
    }
}

/// Decimal rendering of a rational, truncated toward zero.
pub fn rational_decimal(x: &BigRational, digits: usize) -> String {
    QuadSurd::from_rational(x.clone()).to_decimal(digits)
}

fn required_precision(t_max: u64) -> usize {
    2 * (t_max.max(1).to_string().len()) + 10
}

impl RealInput {
    pub fn from_surd(x: QuadSurd, precision: usize) -> Self {
        RealInput { source: RealSource::Surd(x), precision }
    }

    pub fn from_cf(cf: CfExpansion, precision: usize) -> Self {
        RealInput { source: RealSource::Cf(cf), precision }
    }

    /// Parses a surd expression, decimal literal or continued-fraction
    /// literal.
    pub fn parse(text: &str, precision: usize) -> Result<Self, MeasureError> {
        if text.contains(';') || text.contains('(') && text.trim_start().starts_with(|c: char| c.is_ascii_digit() || c == '-') && text.contains(";") {
            let cf: CfExpansion = text.parse()?;
            return Ok(Self::from_cf(cf, precision));
        }
        if let Ok(cf) = text.parse::<CfExpansion>() {
            if text.contains(';') {
                return Ok(Self::from_cf(cf, precision));
            }
        }
        let surd: QuadSurd = text.parse()?;
        Ok(Self::from_surd(surd, precision))
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// `⌊α · 10^precision⌋`, plus whether the scaling is exact.
    fn scaled(&self) -> Result<(BigInt, bool), MeasureError> {
        let pow = BigInt::from(10).pow(self.precision as u32);
        let surd = match &self.source {
            RealSource::Surd(x) => x.clone(),
            RealSource::Cf(cf) => cf.value()?,
        };
        let scaled = QuadSurd::new(
            surd.p() * &pow,
            surd.q() * &pow,
            surd.d().clone(),
            surd.r().clone(),
        )
        .map_err(MeasureError::from)?;
        let exact = match surd.to_rational() {
            Some(rat) => (&pow % rat.denom()).is_zero(),
            None => false,
        };
        Ok((scaled.floor(), exact))
    }

    /// The first partial quotients of the input, enough to enumerate all
    /// convergents with denominator up to `q_cap`.
    fn digit_prefix(&self, q_cap: u64) -> Result<Vec<BigInt>, MeasureError> {
        match &self.source {
            RealSource::Cf(cf) => {
                let mut digits = Vec::new();
                let mut n = 0usize;
                let mut q_prev = BigInt::zero();
                let mut q = BigInt::one();
                let cap = BigInt::from(q_cap);
                while let Some(d) = cf.digit(n) {
                    digits.push(d.clone());
                    let q_next = d * &q + &q_prev;
                    q_prev = std::mem::replace(&mut q, q_next);
                    if n > 0 && q > cap {
                        break;
                    }
                    n += 1;
                }
                Ok(digits)
            }
            RealSource::Surd(x) => {
                // run the complete-quotient loop without period detection;
                // denominators grow at least like Fibonacci numbers, so a
                // prefix of 96 digits covers any q_cap below 10^19
                let mut digits = Vec::new();
                match x.to_rational() {
                    Some(_) => {
                        let cf = CfExpansion::expand(x, usize::MAX)?;
                        let mut n = 0usize;
                        while let Some(d) = cf.digit(n) {
                            digits.push(d.clone());
                            n += 1;
                        }
                    }
                    None => {
                        let mut current = x.clone();
                        for _ in 0..96 {
                            let a = current.floor();
                            digits.push(a.clone());
                            current = current
                                .checked_sub(&QuadSurd::from_integer(a))?
                                .recip()?;
                        }
                    }
                }
                Ok(digits)
            }
        }
    }
}

/// The convergent pairs `(p_n, q_n)` of an input, keyed by denominator, for
/// exclusion in second-best scans. Indices `n ≥ 0` are excluded, so `a_0/1`
/// counts as a convergent.
#[derive(Debug, Clone, Default)]
pub struct ConvergentPairs {
    by_q: HashMap<u64, Vec<BigInt>>,
}

impl ConvergentPairs {
    pub fn of(input: &RealInput, q_cap: u64) -> Result<Self, MeasureError> {
        let digits = input.digit_prefix(q_cap)?;
        let mut by_q: HashMap<u64, Vec<BigInt>> = HashMap::new();
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
        let cap = BigInt::from(q_cap);
        for a in &digits {
            let p = a * &p_prev + &p_prev2;
            let q = a * &q_prev + &q_prev2;
            if q > cap {
                break;
            }
            if let Some(q_small) = q.to_u64() {
                by_q.entry(q_small).or_default().push(p.clone());
            }
            p_prev2 = std::mem::replace(&mut p_prev, p);
            q_prev2 = std::mem::replace(&mut q_prev, q);
        }
        Ok(ConvergentPairs { by_q })
    }

    pub fn is_excluded(&self, q: u64, p: &BigInt) -> bool {
        self.by_q.get(&q).is_some_and(|ps| ps.iter().any(|x| x == p))
    }

    /// Denominators `q_ν` in increasing order (deduplicated).
    pub fn denominators(&self) -> Vec<u64> {
        let mut qs: Vec<u64> = self.by_q.keys().copied().collect();
        qs.sort_unstable();
        qs
    }
}

struct Scan {
    modulus: BigInt,
    a_quo: BigInt,
    a_red: BigInt,
    exact: bool,
    kind: MeasureKind,
    exclusions: ConvergentPairs,
    // state
    q: u64,
    rem: BigInt,
    wraps: BigInt,
    best: Option<(BigInt, u64, BigInt)>, // (scaled distance, q, p)
    breakpoints: Vec<MeasureSample>,
}

impl Scan {
    fn new(input: &RealInput, t_max: u64, kind: MeasureKind) -> Result<Self, MeasureError> {
        if t_max < 1 {
            return Err(MeasureError::BadScanRange);
        }
        let required = required_precision(t_max);
        if input.precision < required {
            return Err(MeasureError::PrecisionInsufficient {
                required,
                available: input.precision,
            });
        }
        let (a, exact) = input.scaled()?;
        let modulus = BigInt::from(10).pow(input.precision as u32);
        let (a_quo, a_red) = a.div_mod_floor(&modulus);
        let exclusions = match kind {
            MeasureKind::Best => ConvergentPairs::default(),
            MeasureKind::SecondBest => ConvergentPairs::of(input, t_max)?,
        };
        Ok(Scan {
            modulus,
            a_quo,
            a_red,
            exact,
            kind,
            exclusions,
            q: 0,
            rem: BigInt::zero(),
            wraps: BigInt::zero(),
            best: None,
            breakpoints: Vec::new(),
        })
    }

    /// Error budget in ulps for a candidate produced at denominator `q`.
    fn guard(&self, q: u64, q_other: u64) -> BigInt {
        if self.exact {
            BigInt::zero()
        } else {
            BigInt::from(q) + BigInt::from(q_other) + 8
        }
    }

    fn step(&mut self) -> Result<(), MeasureError> {
        self.q += 1;
        self.rem += &self.a_red;
        if self.rem >= self.modulus {
            self.rem -= &self.modulus;
            self.wraps += 1;
        }
        let (cand, p) = self.candidate()?;
        let Some((best, best_q, _)) = &self.best else {
            let sample = self.sample(&cand, self.q, &p);
            self.breakpoints.push(sample);
            self.best = Some((cand, self.q, p));
            return Ok(());
        };
        let diff = (&cand - best).abs();
        if !diff.is_zero() && diff <= self.guard(self.q, *best_q) {
            return Err(MeasureError::PrecisionInsufficient {
                required: 2 * (self.modulus.to_string().len() - 1),
                available: self.modulus.to_string().len() - 1,
            });
        }
        if &cand < best {
            let sample = self.sample(&cand, self.q, &p);
            self.breakpoints.push(sample);
            self.best = Some((cand, self.q, p));
        }
        Ok(())
    }

    /// Best admissible `(scaled |qα − p|, p)` at the current `q`.
    fn candidate(&self) -> Result<(BigInt, BigInt), MeasureError> {
        let down = self.rem.clone();
        let up = &self.modulus - &self.rem;
        let floor_p = || BigInt::from(self.q) * &self.a_quo + &self.wraps;
        match self.kind {
            MeasureKind::Best => {
                if down <= up {
                    Ok((down, floor_p()))
                } else {
                    Ok((up, floor_p() + 1))
                }
            }
            MeasureKind::SecondBest => {
                let fl = floor_p();
                // four nearest numerators; at most two can be excluded
                let mut candidates = [
                    (down.clone(), fl.clone()),
                    (up.clone(), &fl + 1),
                    (&self.modulus + &down, &fl - 1),
                    (BigInt::from(2) * &self.modulus - &down, &fl + 2),
                ];
                candidates.sort_by(|a, b| (&a.0, a.1.abs()).cmp(&(&b.0, b.1.abs())));
                for (dist, p) in candidates {
                    if !self.exclusions.is_excluded(self.q, &p) {
                        return Ok((dist, p));
                    }
                }
                unreachable!("at most two of four candidates are convergents")
            }
        }
    }

    fn sample(&self, dist: &BigInt, q: u64, p: &BigInt) -> MeasureSample {
        MeasureSample {
            t: q,
            kind: self.kind,
            value: BigRational::new(dist.clone(), self.modulus.clone()),
            q,
            p: p.clone(),
        }
    }

    fn run(mut self, t_max: u64) -> Result<(Vec<MeasureSample>, MeasureSample), MeasureError> {
        while self.q < t_max {
            self.step()?;
        }
        let (dist, q, p) = self.best.clone().expect("t_max >= 1");
        let mut last = self.sample(&dist, q, &p);
        last.t = t_max;
        Ok((self.breakpoints, last))
    }
}

/// `ψ_α(t)`: minimum of `||qα||` over `1 ≤ q ≤ t` with the achieving pair
/// (smallest `q`, then smallest `|p|`, on ties).
pub fn psi(input: &RealInput, t: u64) -> Result<MeasureSample, MeasureError> {
    let (_, last) = Scan::new(input, t, MeasureKind::Best)?.run(t)?;
    Ok(last)
}

/// `ψ_α^[2](t)`: the same minimum over all pairs except the convergents.
pub fn psi2(input: &RealInput, t: u64) -> Result<MeasureSample, MeasureError> {
    let (_, last) = Scan::new(input, t, MeasureKind::SecondBest)?.run(t)?;
    Ok(last)
}

/// The descent points of the chosen measure function up to `t_max`, i.e. the
/// left endpoints of its intervals of constancy.
pub fn breakpoints(
    input: &RealInput,
    t_max: u64,
    kind: MeasureKind,
) -> Result<Vec<MeasureSample>, MeasureError> {
    let (bps, _) = Scan::new(input, t_max, kind)?.run(t_max)?;
    Ok(bps)
}

/// Numeric estimate of `liminf t·ψ(t)` (resp. `t·ψ^[2](t)`).
///
/// Minimizes `t·value` over the left endpoints of constancy intervals inside
/// the window `[t_max/10, t_max]`; the window discards transient preperiod
/// effects, mirroring the fact that a liminf ignores finite prefixes.
pub fn liminf_estimate(
    input: &RealInput,
    t_max: u64,
    kind: MeasureKind,
) -> Result<LiminfEstimate, MeasureError> {
    if t_max < 100 {
        return Err(MeasureError::BadScanRange);
    }
    let (bps, _) = Scan::new(input, t_max, kind)?.run(t_max)?;
    let window_start = (t_max / 10).max(1);
    let mut best: Option<(BigRational, MeasureSample)> = None;
    let mut consider = |t: u64, sample: &MeasureSample| {
        let product = BigRational::from(BigInt::from(t)) * &sample.value;
        match &best {
            Some((current, _)) if current <= &product => {}
            _ => {
                let mut at = sample.clone();
                at.t = t;
                best = Some((product, at));
            }
        }
    };
    for (i, bp) in bps.iter().enumerate() {
        if bp.t >= window_start {
            consider(bp.t, bp);
        } else {
            // the value prevailing when the window opens: clip the last
            // interval straddling the boundary to its window-left endpoint
            let next_t = bps.get(i + 1).map(|b| b.t).unwrap_or(u64::MAX);
            if next_t > window_start {
                consider(window_start, bp);
            }
        }
    }
    let (estimate, at) = best.expect("window always contains a left endpoint");
    Ok(LiminfEstimate {
        kind,
        t_max,
        window_start,
        estimate,
        at,
        breakpoint_count: bps.len(),
    })
}
