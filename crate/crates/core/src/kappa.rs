//! Exact evaluation of the approximation constants of a periodic continued
//! fraction.
//!
//! For an irrational `α` with tails `α_n` and reversed tails `α*_n`, the three
//! quantities
//!
//! ```text
//! κ¹_n = (1 + α*_{n−1})(α_n − 1) / (α_n + α*_{n−1})
//! κ²_n = (1 − α*_n)(α_{n+1} + 1) / (α_{n+1} + α*_n)
//! κ⁴_n = 4 / (α_n + α*_{n−1})
//! ```
//!
//! control the second-best approximation constant: for `α` not equivalent to
//! the golden ratio, `𝔨(α) = liminf_{n: a_n ≥ 2} min(κ¹_n, κ²_n, κ⁴_n)`.
//! Along a fixed residue class of `n` modulo the period length each κ
//! converges to an exact quadratic surd obtained by substituting the limit
//! tails, so for eventually periodic expansions the liminf is the exact
//! minimum of finitely many surds, computed here without any rounding.
//!
//! The golden-ratio class is the one exception: an all-ones period has no
//! index with `a_n ≥ 2`, and its constant is `4/√5` — the largest value the
//! constant ever takes.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::cf::{CfError, CfExpansion};
use crate::exactnum::QuadSurd;

/// Which κ quantity to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KappaKind {
    One,
    Two,
    Four,
}

/// Exact κ limits along one residue class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueLimits {
    /// Residue of `n` modulo the period length.
    pub residue: usize,
    /// The partial quotient at that class.
    #[serde(with = "crate::exactnum::serde_bigint")]
    pub digit: BigInt,
    pub kappa1: QuadSurd,
    pub kappa2: QuadSurd,
    pub kappa4: QuadSurd,
}

impl ResidueLimits {
    pub fn min(&self) -> &QuadSurd {
        [&self.kappa1, &self.kappa2, &self.kappa4]
            .into_iter()
            .min()
            .expect("nonempty")
    }
}

/// The exact second-best approximation constant of a periodic expansion,
/// together with the per-residue limits that realize it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaProfile {
    /// Limits for every residue class whose digit is at least 2; empty for
    /// the golden class.
    pub residue_limits: Vec<ResidueLimits>,
    /// The constant `𝔨`.
    pub k_value: QuadSurd,
    /// Whether the expansion is the golden-ratio special case.
    pub golden: bool,
}

fn tail_sum(alpha: &QuadSurd, star: &QuadSurd) -> Result<QuadSurd, CfError> {
    alpha.checked_add(star).map_err(CfError::from)
}

fn kappa1_of(alpha: &QuadSurd, star_prev: &QuadSurd) -> Result<QuadSurd, CfError> {
    let one = QuadSurd::one();
    let num = one
        .checked_add(star_prev)?
        .checked_mul(&alpha.checked_sub(&one)?)?;
    Ok(num.checked_div(&tail_sum(alpha, star_prev)?)?)
}

fn kappa2_of(alpha_next: &QuadSurd, star: &QuadSurd) -> Result<QuadSurd, CfError> {
    let one = QuadSurd::one();
    let num = one
        .checked_sub(star)?
        .checked_mul(&alpha_next.checked_add(&one)?)?;
    Ok(num.checked_div(&tail_sum(alpha_next, star)?)?)
}

fn kappa4_of(alpha: &QuadSurd, star_prev: &QuadSurd) -> Result<QuadSurd, CfError> {
    Ok(QuadSurd::from_i64(4).checked_div(&tail_sum(alpha, star_prev)?)?)
}

/// Exact `κ_n` at a finite index `n ≥ 1`, from the exact tails.
pub fn kappa_at(cf: &CfExpansion, n: usize, which: KappaKind) -> Result<QuadSurd, CfError> {
    if n == 0 {
        return Err(CfError::IndexOutOfRange(0));
    }
    match which {
        KappaKind::One | KappaKind::Four => {
            let alpha = cf.shift(n)?.value()?;
            let star_prev = QuadSurd::from_rational(cf.alpha_star(n - 1));
            match which {
                KappaKind::One => kappa1_of(&alpha, &star_prev),
                _ => kappa4_of(&alpha, &star_prev),
            }
        }
        KappaKind::Two => {
            let alpha_next = cf.shift(n + 1)?.value()?;
            let star = QuadSurd::from_rational(cf.alpha_star(n));
            kappa2_of(&alpha_next, &star)
        }
    }
}

/// Exact limits of `(κ¹, κ², κ⁴)` along `n ≡ residue (mod L)`.
///
/// κ¹ and κ⁴ substitute the limit tails at `residue`; κ² reads the pair
/// `(α_{n+1}, α*_n)`, i.e. the limit tails at `residue + 1`.
pub fn kappa_limits(
    cf: &CfExpansion,
    residue: usize,
) -> Result<(QuadSurd, QuadSurd, QuadSurd), CfError> {
    let len = cf.period().len();
    if len == 0 {
        return Err(CfError::EmptyPeriod);
    }
    let (alpha, star_prev) = cf.limit_tails(residue)?;
    let (alpha_next, star) = cf.limit_tails((residue + 1) % len)?;
    Ok((
        kappa1_of(&alpha, &star_prev)?,
        kappa2_of(&alpha_next, &star)?,
        kappa4_of(&alpha, &star_prev)?,
    ))
}

/// The exact constant `𝔨` of a periodic expansion.
///
/// An all-ones period is the golden class with `𝔨 = 4/√5`. Otherwise the
/// liminf over `n` with `a_n ≥ 2` is the exact minimum of the per-residue κ
/// limits: along each residue class the κ values converge, so the liminf
/// over the union of the classes is the least of their limits.
pub fn k_exact(cf: &CfExpansion) -> Result<KappaProfile, CfError> {
    let period = cf.period();
    if period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    if period.iter().all(|d| d.is_one()) {
        return Ok(KappaProfile {
            residue_limits: Vec::new(),
            k_value: QuadSurd::new_i64(0, 4, 5, 5).expect("4/√5"),
            golden: true,
        });
    }
    let len = period.len();
    let m = cf.preperiod().len();
    let two = BigInt::from(2);
    let mut limits = Vec::new();
    for (pos, digit) in period.iter().enumerate() {
        if digit < &two {
            continue;
        }
        // the residue class of indices n whose digit sits at period position
        // `pos`: n = m + 1 + pos (mod L)
        let residue = (m + 1 + pos) % len;
        let (kappa1, kappa2, kappa4) = kappa_limits(cf, residue)?;
        limits.push(ResidueLimits { residue, digit: digit.clone(), kappa1, kappa2, kappa4 });
    }
    let k_value = limits
        .iter()
        .map(|l| l.min().clone())
        .min()
        .expect("some digit is at least 2");
    Ok(KappaProfile { residue_limits: limits, k_value, golden: false })
}

/// Whether `𝔨(cf) < bound`, decided exactly but with early exit.
///
/// Equivalent to `k_exact(cf)?.k_value < bound`; used by the large period
/// audits where almost every period is decided by its first κ⁴ limit.
pub fn k_below(cf: &CfExpansion, bound: &QuadSurd) -> Result<bool, CfError> {
    let period = cf.period();
    if period.is_empty() {
        return Err(CfError::EmptyPeriod);
    }
    if period.iter().all(|d| d.is_one()) {
        return Ok(QuadSurd::new_i64(0, 4, 5, 5).expect("4/√5") < *bound);
    }
    let len = period.len();
    let m = cf.preperiod().len();
    let two = BigInt::from(2);
    for (pos, digit) in period.iter().enumerate() {
        if digit < &two {
            continue;
        }
        let residue = (m + 1 + pos) % len;
        let (alpha, star_prev) = cf.limit_tails(residue)?;
        if &kappa4_of(&alpha, &star_prev)? < bound {
            return Ok(true);
        }
        if &kappa1_of(&alpha, &star_prev)? < bound {
            return Ok(true);
        }
        let (alpha_next, star) = cf.limit_tails((residue + 1) % len)?;
        if &kappa2_of(&alpha_next, &star)? < bound {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The exact Lagrange constant `λ = liminf 1/(α_{n+1} + α*_n)` of a periodic
/// expansion: the minimum of the reciprocal limit tail sums over all residue
/// classes.
pub fn lambda_exact(cf: &CfExpansion) -> Result<QuadSurd, CfError> {
    let len = cf.period().len();
    if len == 0 {
        return Err(CfError::EmptyPeriod);
    }
    let mut best: Option<QuadSurd> = None;
    for residue in 0..len {
        let (alpha, star) = cf.limit_tails(residue)?;
        let value = tail_sum(&alpha, &star)?.recip()?;
        best = Some(match best {
            None => value,
            Some(b) if value < b => value,
            Some(b) => b,
        });
    }
    Ok(best.expect("nonempty period"))
}
