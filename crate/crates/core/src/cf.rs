//! Continued-fraction engine for quadratic surds and rationals.
//!
//! Expansions are eventually periodic and stored canonically: the period is
//! primitive (no shorter repeating block), the preperiod is minimal, and
//! finite expansions never end in a partial quotient of 1. Values, tails and
//! limits are all computed exactly in [`QuadSurd`] arithmetic.

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::exactnum::{int_from_repr, int_to_repr, BigRational, IntRepr, NumError, QuadSurd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfError {
    #[error("no repetition of complete quotients within {max} steps")]
    StepLimit { max: usize },
    #[error("partial quotients must be at least 1")]
    BadDigit,
    #[error("operation requires a periodic (quadratic irrational) expansion")]
    EmptyPeriod,
    #[error("index {0} out of range for this expansion")]
    IndexOutOfRange(usize),
    #[error("exact identity violated at n = {n}")]
    IdentityViolated { n: usize },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// An eventually periodic continued fraction `[a0; pre..., (period...)]`.
///
/// `period` is empty exactly for finite (rational) expansions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CfExpansion {
    a0: BigInt,
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
}

/// One convergent `p_n / q_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// The pair of tails at index `n`: `α_n = [a_n; a_{n+1}, ...]` and the
/// reversed finite tail `α*_n = [0; a_n, ..., a_1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailPair {
    pub alpha: QuadSurd,
    pub alpha_star: BigRational,
}

fn euclid_mod(n: isize, m: usize) -> usize {
    let m = m as isize;
    (((n % m) + m) % m) as usize
}

impl CfExpansion {
    /// Canonicalizing constructor.
    ///
    /// Reduces the period to its primitive block, trims the preperiod to
    /// minimal length by rotating the period, and rewrites a finite expansion
    /// ending in 1 (`[..., k, 1]` becomes `[..., k+1]`).
    pub fn new(
        a0: BigInt,
        preperiod: Vec<BigInt>,
        period: Vec<BigInt>,
    ) -> Result<Self, CfError> {
        let one = BigInt::one();
        if preperiod.iter().chain(period.iter()).any(|d| d < &one) {
            return Err(CfError::BadDigit);
        }
        let mut a0 = a0;
        let mut pre = preperiod;
        let mut per = period;
        if per.is_empty() {
            if pre.last() == Some(&one) {
                pre.pop();
                match pre.last_mut() {
                    Some(last) => *last += 1,
                    None => a0 += 1,
                }
            }
        } else {
            // primitive period
            let len = per.len();
            for l in 1..len {
                if len % l == 0 && (l..len).all(|i| per[i] == per[i % l]) {
                    per.truncate(l);
                    break;
                }
            }
            // minimal preperiod
            while !pre.is_empty() && pre.last() == per.last() {
                pre.pop();
                per.rotate_right(1);
            }
        }
        Ok(CfExpansion { a0, preperiod: pre, period: per })
    }

    pub fn new_i64(a0: i64, preperiod: &[u64], period: &[u64]) -> Result<Self, CfError> {
        Self::new(
            BigInt::from(a0),
            preperiod.iter().map(|&d| BigInt::from(d)).collect(),
            period.iter().map(|&d| BigInt::from(d)).collect(),
        )
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_rational(&self) -> bool {
        self.period.is_empty()
    }

    /// Partial quotient `a_n`; `None` past the end of a finite expansion.
    pub fn digit(&self, n: usize) -> Option<&BigInt> {
        if n == 0 {
            return Some(&self.a0);
        }
        let m = self.preperiod.len();
        if n <= m {
            return Some(&self.preperiod[n - 1]);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(&self.period[(n - m - 1) % self.period.len()])
    }

    /// Exact continued-fraction expansion of a quadratic surd or rational.
    ///
    /// Periodicity is detected by repetition of complete quotients, which for
    /// a quadratic irrational is guaranteed; `max_steps` bounds the search.
    pub fn expand(x: &QuadSurd, max_steps: usize) -> Result<Self, CfError> {
        if let Some(rational) = x.to_rational() {
            return Ok(Self::from_rational(rational));
        }
        if let Some(result) = Self::expand_word_size(x, max_steps)? {
            return Ok(result);
        }
        Self::expand_generic(x, max_steps)
    }

    /// Fast path over the classical integer form `(P + √D)/R` with the
    /// invariant `R | D − P²`; complete quotients are word-size triples, so
    /// period detection hashes plain integers. Returns `Ok(None)` when the
    /// coefficients do not fit the machine range.
    fn expand_word_size(x: &QuadSurd, max_steps: usize) -> Result<Option<Self>, CfError> {
        use num_traits::ToPrimitive;
        let (p, q, d, r) = (x.p(), x.q(), x.d(), x.r());
        // orient the radical positively: (p + q√d)/r = (±p + √(q²d))/(±r)
        let (p0, r0) = if q.is_negative() { (-p, -r) } else { (p.clone(), r.clone()) };
        let d0 = q * q * d;
        let (Some(mut pp), Some(mut rr), Some(mut dd)) =
            (p0.to_i128(), r0.to_i128(), d0.to_i128())
        else {
            return Ok(None);
        };
        // caps keep every later product far inside i128: after the first
        // step |P| stays near √D and |R| below ~2D
        if pp.unsigned_abs() > 1 << 40 || rr.unsigned_abs() > 1 << 20 || dd > 1 << 60 {
            return Ok(None);
        }
        // enforce the divisibility invariant R | D − P² by scaling
        if (dd - pp * pp) % rr != 0 {
            pp *= rr.abs();
            dd *= rr * rr;
            rr *= rr.abs();
        }
        let sqrt_d = dd.unsigned_abs().isqrt() as i128;
        let floor_div = |a: i128, b: i128| -> i128 {
            let (q, r) = (a / b, a % b);
            if r != 0 && (r < 0) != (b < 0) {
                q - 1
            } else {
                q
            }
        };
        // √D is irrational here, so ⌊(P+√D)/R⌋ is ⌊(P+⌊√D⌋)/R⌋ for R > 0 and
        // ⌊(P+⌊√D⌋+1)/R⌋ for R < 0
        let floor_of = |pp: i128, rr: i128| -> i128 {
            if rr > 0 {
                floor_div(pp + sqrt_d, rr)
            } else {
                floor_div(pp + sqrt_d + 1, rr)
            }
        };
        let a0 = floor_of(pp, rr);
        let step = |pp: i128, rr: i128, a: i128| -> Option<(i128, i128)> {
            let p_next = a.checked_mul(rr)?.checked_sub(pp)?;
            let r_next = (dd - p_next.checked_mul(p_next)?) / rr;
            Some((p_next, r_next))
        };
        let Some((mut cur_p, mut cur_r)) = step(pp, rr, a0) else {
            return Ok(None);
        };
        let mut digits: Vec<BigInt> = Vec::new();
        let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
        loop {
            if let Some(&i) = seen.get(&(cur_p, cur_r)) {
                let pre = digits[..i - 1].to_vec();
                let per = digits[i - 1..].to_vec();
                return Self::new(BigInt::from(a0), pre, per).map(Some);
            }
            if digits.len() >= max_steps {
                return Err(CfError::StepLimit { max: max_steps });
            }
            seen.insert((cur_p, cur_r), digits.len() + 1);
            let a = floor_of(cur_p, cur_r);
            digits.push(BigInt::from(a));
            match step(cur_p, cur_r, a) {
                Some(next) => (cur_p, cur_r) = next,
                None => return Ok(None),
            }
        }
    }

    fn expand_generic(x: &QuadSurd, max_steps: usize) -> Result<Self, CfError> {
        let a0 = x.floor();
        let mut digits: Vec<BigInt> = Vec::new();
        let mut seen: HashMap<QuadSurd, usize> = HashMap::new();
        // complete quotient x_1 = 1/(x − a0)
        let mut current = x
            .checked_sub(&QuadSurd::from_integer(a0.clone()))?
            .recip()?;
        loop {
            if let Some(&i) = seen.get(&current) {
                let pre = digits[..i - 1].to_vec();
                let per = digits[i - 1..].to_vec();
                return Self::new(a0, pre, per);
            }
            if digits.len() >= max_steps {
                return Err(CfError::StepLimit { max: max_steps });
            }
            seen.insert(current.clone(), digits.len() + 1);
            let a = current.floor();
            current = current
                .checked_sub(&QuadSurd::from_integer(a.clone()))?
                .recip()?;
            digits.push(a);
        }
    }

    fn from_rational(x: BigRational) -> Self {
        let mut a0 = x.floor().to_integer();
        let mut frac = x - BigRational::from(a0.clone());
        let mut digits = Vec::new();
        while !frac.is_zero() {
            let inv = frac.recip();
            let a = inv.floor().to_integer();
            frac = inv - BigRational::from(a.clone());
            digits.push(a);
        }
        // the floor algorithm never emits a trailing 1, so this is canonical
        if digits.last().map(|d| d.is_one()).unwrap_or(false) {
            digits.pop();
            match digits.last_mut() {
                Some(last) => *last += 1,
                None => a0 += 1,
            }
        }
        CfExpansion { a0, preperiod: digits, period: Vec::new() }
    }

    /// Exact value of the expansion.
    ///
    /// For a periodic expansion the purely periodic tail `y` satisfies
    /// `y = (Ay + B)/(Cy + D)` with `[[A,B],[C,D]]` the product of the digit
    /// matrices `[[a,1],[1,0]]` over one period; the root greater than 1 is
    /// taken and the preperiod is folded back in.
    pub fn value(&self) -> Result<QuadSurd, CfError> {
        if self.period.is_empty() {
            let mut tail: Option<BigRational> = None;
            for d in self.preperiod.iter().rev() {
                let next = match tail {
                    None => BigRational::from(d.clone()),
                    Some(t) => BigRational::from(d.clone()) + t.recip(),
                };
                tail = Some(next);
            }
            let value = match tail {
                None => BigRational::from(self.a0.clone()),
                Some(t) => BigRational::from(self.a0.clone()) + t.recip(),
            };
            return Ok(QuadSurd::from_rational(value));
        }
        let (a, _b, c, d) = digit_matrix(&self.period);
        let trace = &a + &d;
        let det4 = if self.period.len() % 2 == 0 { 4 } else { -4 };
        let delta = &trace * &trace - BigInt::from(det4);
        let mut x = QuadSurd::new(a - d, BigInt::one(), delta, BigInt::from(2) * c)?;
        debug_assert!(x.cmp_integer(&BigInt::one()) == std::cmp::Ordering::Greater);
        for dd in self.preperiod.iter().rev() {
            x = QuadSurd::from_integer(dd.clone()).checked_add(&x.recip()?)?;
        }
        QuadSurd::from_integer(self.a0.clone())
            .checked_add(&x.recip()?)
            .map_err(CfError::from)
    }

    /// Convergents `p_k/q_k` for `k = 0..=n_max` (clipped to the length of a
    /// finite expansion).
    pub fn convergents(&self, n_max: usize) -> Vec<Convergent> {
        let mut out = Vec::with_capacity(n_max + 1);
        let (mut p_prev, mut q_prev) = (BigInt::one(), BigInt::zero());
        let (mut p_prev2, mut q_prev2) = (BigInt::zero(), BigInt::one());
        for k in 0..=n_max {
            let Some(a) = self.digit(k) else { break };
            let p = a * &p_prev + &p_prev2;
            let q = a * &q_prev + &q_prev2;
            out.push(Convergent { n: k, p: p.clone(), q: q.clone() });
            p_prev2 = std::mem::replace(&mut p_prev, p);
            q_prev2 = std::mem::replace(&mut q_prev, q);
        }
        out
    }

    /// The shifted expansion `[a_n; a_{n+1}, ...]`.
    pub fn shift(&self, n: usize) -> Result<Self, CfError> {
        if n == 0 {
            return Ok(self.clone());
        }
        let m = self.preperiod.len();
        if n <= m {
            return Self::new(
                self.preperiod[n - 1].clone(),
                self.preperiod[n..].to_vec(),
                self.period.clone(),
            );
        }
        if self.period.is_empty() {
            return Err(CfError::IndexOutOfRange(n));
        }
        let len = self.period.len();
        let j = (n - m - 1) % len;
        let mut per = self.period.clone();
        per.rotate_left((j + 1) % len);
        Self::new(self.period[j].clone(), Vec::new(), per)
    }

    /// Tails `(α_n, α*_n)` for `n ≥ 1`; `α*_n = [0; a_n, ..., a_1]` stops at
    /// `a_1` and never includes `a_0`.
    pub fn tails(&self, n: usize) -> Result<TailPair, CfError> {
        if n == 0 {
            return Err(CfError::IndexOutOfRange(0));
        }
        if self.digit(n).is_none() {
            return Err(CfError::IndexOutOfRange(n));
        }
        let alpha = self.shift(n)?.value()?;
        Ok(TailPair { alpha, alpha_star: self.alpha_star(n) })
    }

    /// `α*_n` as an exact rational; `α*_0 = 0` by convention.
    pub fn alpha_star(&self, n: usize) -> BigRational {
        let mut tail: Option<BigRational> = None;
        for k in 1..=n {
            let d = self.digit(k).expect("checked by caller");
            let next = match tail {
                None => BigRational::from(d.clone()),
                Some(t) => BigRational::from(d.clone()) + t.recip(),
            };
            tail = Some(next);
        }
        match tail {
            None => BigRational::zero(),
            Some(t) => t.recip(),
        }
    }

    /// Exact limits of `(α_n, α*_{n−1})` along the arithmetic progression
    /// `n ≡ residue (mod L)`, `L` the period length.
    ///
    /// The forward limit is the purely periodic value starting at the period
    /// position that `n` hits; the backward limit is the purely periodic
    /// reversed word read just before that position. Both are independent of
    /// the preperiod.
    pub fn limit_tails(&self, residue: usize) -> Result<(QuadSurd, QuadSurd), CfError> {
        if self.period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        let len = self.period.len();
        let m = self.preperiod.len();
        let pos = euclid_mod(residue as isize - m as isize - 1, len);
        let mut forward_word = self.period.clone();
        forward_word.rotate_left((pos + 1) % len);
        let forward =
            Self::new(self.period[pos].clone(), Vec::new(), forward_word)?.value()?;
        let backward_word: Vec<BigInt> = (0..len)
            .map(|k| self.period[euclid_mod(pos as isize - 1 - k as isize, len)].clone())
            .collect();
        let backward = Self::new(BigInt::zero(), Vec::new(), backward_word)?.value()?;
        Ok((forward, backward))
    }

    /// Verifies `|α − p_n/q_n| = 1/(q_n²(α_{n+1} + α*_n))` exactly and
    /// returns both sides.
    pub fn perron_check(&self, n: usize) -> Result<(QuadSurd, QuadSurd), CfError> {
        if self.period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        let alpha = self.value()?;
        let convs = self.convergents(n);
        let conv = &convs[n];
        let conv_value =
            QuadSurd::from_rational(BigRational::new(conv.p.clone(), conv.q.clone()));
        let lhs = alpha.checked_sub(&conv_value)?.abs();
        let alpha_next = self.shift(n + 1)?.value()?;
        let alpha_star = QuadSurd::from_rational(self.alpha_star(n));
        let q_sq = QuadSurd::from_integer(&conv.q * &conv.q);
        let rhs = q_sq
            .checked_mul(&alpha_next.checked_add(&alpha_star)?)?
            .recip()?;
        if lhs == rhs {
            Ok((lhs, rhs))
        } else {
            Err(CfError::IdentityViolated { n })
        }
    }

    /// Whether two quadratic irrationals have coinciding continued-fraction
    /// tails, i.e. their primitive periods are rotations of each other.
    pub fn equivalent(&self, other: &Self) -> Result<bool, CfError> {
        if self.period.is_empty() || other.period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        if self.period.len() != other.period.len() {
            return Ok(false);
        }
        let doubled: Vec<&BigInt> = self.period.iter().chain(self.period.iter()).collect();
        Ok(doubled
            .windows(other.period.len())
            .any(|w| w.iter().zip(other.period.iter()).all(|(a, b)| *a == b)))
    }
}

fn digit_matrix(word: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut a, mut b, mut c, mut d) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for digit in word {
        // right-multiply by [[digit, 1], [1, 0]]
        let na = &a * digit + &b;
        let nc = &c * digit + &d;
        b = std::mem::replace(&mut a, na);
        d = std::mem::replace(&mut c, nc);
    }
    (a, b, c, d)
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a0)?;
        if self.preperiod.is_empty() && self.period.is_empty() {
            return Ok(());
        }
        write!(f, ";")?;
        let pre: Vec<String> = self.preperiod.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", pre.join(","))?;
        if !self.period.is_empty() {
            if !self.preperiod.is_empty() {
                write!(f, ",")?;
            }
            let per: Vec<String> = self.period.iter().map(|d| d.to_string()).collect();
            write!(f, "({})", per.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CfExpansion[{self}]")
    }
}

impl FromStr for CfExpansion {
    type Err = CfError;

    /// Parses `a0;pre1,pre2,(per1,per2,...)`, e.g. `2;(1,1,3,1,1,1,1,3)`.
    fn from_str(s: &str) -> Result<Self, CfError> {
        let bad = |msg: &str| CfError::Num(NumError::Parse(msg.to_string()));
        let s = s.trim();
        let (head, rest) = match s.split_once(';') {
            None => (s, None),
            Some((h, r)) => (h, Some(r)),
        };
        let a0: BigInt = head
            .trim()
            .parse()
            .map_err(|_| bad("expected an integer before ';'"))?;
        let (mut pre, mut per) = (Vec::new(), Vec::new());
        if let Some(rest) = rest {
            let rest = rest.trim();
            let (pre_text, per_text) = match rest.find('(') {
                None => (rest, None),
                Some(i) => {
                    let inner = rest[i + 1..]
                        .strip_suffix(')')
                        .ok_or_else(|| bad("unterminated period: expected ')'"))?;
                    (rest[..i].trim_end_matches(','), Some(inner))
                }
            };
            let parse_list = |text: &str, out: &mut Vec<BigInt>| -> Result<(), CfError> {
                for part in text.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    out.push(part.parse().map_err(|_| bad("bad partial quotient"))?);
                }
                Ok(())
            };
            parse_list(pre_text, &mut pre)?;
            if let Some(per_text) = per_text {
                parse_list(per_text, &mut per)?;
                if per.is_empty() {
                    return Err(bad("empty period"));
                }
            }
        }
        Self::new(a0, pre, per)
    }
}

#[derive(Serialize, Deserialize)]
struct CfRepr {
    a0: IntRepr,
    preperiod: Vec<IntRepr>,
    period: Vec<IntRepr>,
}

impl Serialize for CfExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CfRepr {
            a0: int_to_repr(&self.a0),
            preperiod: self.preperiod.iter().map(int_to_repr).collect(),
            period: self.period.iter().map(int_to_repr).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CfExpansion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CfRepr::deserialize(deserializer)?;
        let ints = |v: Vec<IntRepr>| -> Result<Vec<BigInt>, D::Error> {
            v.into_iter()
                .map(|r| int_from_repr(r).map_err(D::Error::custom))
                .collect()
        };
        CfExpansion::new(
            int_from_repr(repr.a0).map_err(D::Error::custom)?,
            ints(repr.preperiod)?,
            ints(repr.period)?,
        )
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use std::cmp::Ordering;

    fn surd(p: i64, q: i64, d: i64, r: i64) -> QuadSurd {
        QuadSurd::new_i64(p, q, d, r).unwrap()
    }

    fn cf(a0: i64, pre: &[u64], per: &[u64]) -> CfExpansion {
        CfExpansion::new_i64(a0, pre, per).unwrap()
    }

    #[test]
    fn expansions_of_the_anchor_surds() {
        let phi = CfExpansion::expand(&surd(1, 1, 5, 2), 64).unwrap();
        assert_eq!(phi, cf(1, &[], &[1]));
        let sqrt17 = CfExpansion::expand(&surd(1, 1, 17, 2), 64).unwrap();
        assert_eq!(sqrt17, cf(2, &[], &[1, 1, 3]));
        let alpha = CfExpansion::expand(&surd(39, 13, 173, 82), 64).unwrap();
        assert_eq!(alpha, cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]));
        let rational = CfExpansion::expand(&surd(7, 0, 1, 3), 64).unwrap();
        assert_eq!(rational, cf(2, &[3], &[]));
    }

    #[test]
    fn step_limit_fires() {
        assert!(matches!(
            CfExpansion::expand(&surd(39, 13, 173, 82), 4),
            Err(CfError::StepLimit { max: 4 })
        ));
    }

    #[test]
    fn constructor_canonicalizes() {
        // trailing-1 merge in finite expansions
        assert_eq!(cf(2, &[3, 1], &[]), cf(2, &[4], &[]));
        assert_eq!(cf(2, &[1], &[]), cf(3, &[], &[]));
        // primitive period
        assert_eq!(cf(0, &[], &[1, 3, 1, 3]), cf(0, &[], &[1, 3]));
        // minimal preperiod by rotation
        assert_eq!(cf(2, &[1, 1, 3], &[1, 1, 3]), cf(2, &[], &[1, 1, 3]));
        assert_eq!(cf(0, &[2, 1], &[3, 1]), cf(0, &[2], &[1, 3]));
        // digits below 1 are rejected
        assert!(CfExpansion::new_i64(1, &[0], &[1]).is_err());
    }

    #[test]
    fn values_of_displayed_expansions() {
        // [0; 1, 1, (3, 1)] = (√21 + 1)/10
        assert_eq!(cf(0, &[1, 1], &[3, 1]).value().unwrap(), surd(1, 1, 21, 10));
        // [3; 1, 1, 1, 1, 1, (1, 3)] = (√21 + 943)/262
        assert_eq!(
            cf(3, &[1, 1, 1, 1, 1], &[1, 3]).value().unwrap(),
            surd(943, 1, 21, 262)
        );
        // golden ratio
        assert_eq!(cf(1, &[], &[1]).value().unwrap(), surd(1, 1, 5, 2));
        // rationals
        assert_eq!(cf(2, &[3], &[]).value().unwrap(), surd(7, 0, 1, 3));
        assert_eq!(cf(-3, &[], &[]).value().unwrap(), QuadSurd::from_i64(-3));
    }

    #[test]
    fn value_expand_roundtrip() {
        for x in [
            surd(1, 1, 17, 2),
            surd(39, 13, 173, 82),
            surd(0, 1, 2, 1),
            surd(-7, 3, 13, 5),
            surd(12, -4, 2, 7),
        ] {
            let e = CfExpansion::expand(&x, 256).unwrap();
            assert_eq!(e.value().unwrap(), x, "value(expand({x}))");
            assert_eq!(CfExpansion::expand(&e.value().unwrap(), 256).unwrap(), e);
        }
    }

    #[test]
    fn roundtrip_on_randomized_surds() {
        let primes = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
        let mut state = 0xDEADBEEFCAFEBABEu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut count = 0;
        while count < 100 {
            let p = (next() % 2001) as i64 - 1000;
            let q = (next() % 2001) as i64 - 1000;
            if q == 0 {
                continue;
            }
            let d = primes[(next() % primes.len() as u64) as usize];
            let r = (next() % 1000) as i64 + 1;
            let x = surd(p, q, d, r);
            let e = CfExpansion::expand(&x, 1_000_000).unwrap();
            assert_eq!(e.value().unwrap(), x, "roundtrip of {x}");
            count += 1;
        }
    }

    #[test]
    fn convergents_follow_recurrence() {
        let phi = cf(1, &[], &[1]);
        let convs = phi.convergents(4);
        let expect = [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)];
        for (conv, (p, q)) in convs.iter().zip(expect) {
            assert_eq!((&conv.p, &conv.q), (&BigInt::from(p), &BigInt::from(q)));
        }
        let s17 = cf(2, &[], &[1, 1, 3]);
        let convs = s17.convergents(2);
        let expect = [(2, 1), (3, 1), (5, 2)];
        for (conv, (p, q)) in convs.iter().zip(expect) {
            assert_eq!((&conv.p, &conv.q), (&BigInt::from(p), &BigInt::from(q)));
        }
        // q strictly increasing from n = 1, gcd(p, q) = 1
        let alpha = cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let convs = alpha.convergents(25);
        for w in convs.windows(2).skip(1) {
            assert!(w[1].q > w[0].q);
        }
        for c in &convs {
            assert!(c.p.gcd(&c.q).is_one());
        }
    }

    #[test]
    fn tails_match_expected_values() {
        let alpha = cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let t2 = alpha.tails(2).unwrap();
        assert_eq!(t2.alpha_star, BigRational::new(1.into(), 2.into())); // [0;1,1]
        let phi = cf(1, &[], &[1]);
        assert_eq!(phi.tails(3).unwrap().alpha, surd(1, 1, 5, 2));
        let s17 = cf(2, &[], &[1, 1, 3]);
        let t1 = s17.tails(1).unwrap();
        assert_eq!(t1.alpha_star, BigRational::from(BigInt::one())); // [0;1] = 1
        assert_eq!(t1.alpha, cf(1, &[], &[1, 3, 1]).value().unwrap());
    }

    #[test]
    fn alpha_star_is_convergent_denominator_ratio() {
        // classical mirror identity: α*_n = q_{n−1}/q_n
        for e in [
            cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]),
            cf(1, &[], &[1]),
            cf(0, &[1, 1], &[3, 1]),
            cf(5, &[2, 7], &[1, 4, 2]),
        ] {
            let convs = e.convergents(14);
            for n in 1..=14usize {
                let expected =
                    BigRational::new(convs[n - 1].q.clone(), convs[n].q.clone());
                assert_eq!(e.alpha_star(n), expected, "n = {n} in {e}");
            }
        }
    }

    #[test]
    fn limit_tails_examples() {
        // golden: forward φ, backward φ − 1
        let phi = cf(1, &[], &[1]);
        let (f, b) = phi.limit_tails(0).unwrap();
        assert_eq!(f, surd(1, 1, 5, 2));
        assert_eq!(b, surd(-1, 1, 5, 2));
        // (1,1,3) at its 3-position: n ≡ 0 (mod 3); forward + backward = √17
        let s17 = cf(2, &[], &[1, 1, 3]);
        let (f, b) = s17.limit_tails(0).unwrap();
        assert_eq!(f.checked_add(&b).unwrap(), surd(0, 1, 17, 1));
        // the two 3-positions of the period (1,1,3,1,1,1,1,3)
        let alpha = cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let (f3, b3) = alpha.limit_tails(3).unwrap();
        assert_eq!(f3, cf(3, &[], &[1, 1, 1, 1, 3, 1, 1, 3]).value().unwrap());
        assert_eq!(b3, cf(0, &[], &[1, 1, 3, 1, 1, 1, 1, 3]).value().unwrap());
        // backward limit at the residue-3 class is the fractional part of the
        // full value: [0; (1,1,3,1,1,1,1,3)] = (13√173 − 125)/82
        assert_eq!(b3, surd(-125, 13, 173, 82));
        let (f0, b0) = alpha.limit_tails(0).unwrap();
        assert_eq!(f0, cf(3, &[], &[1, 1, 3, 1, 1, 1, 1, 3]).value().unwrap());
        assert_eq!(b0, cf(0, &[], &[1, 1, 1, 1, 3, 1, 1, 3]).value().unwrap());
    }

    #[test]
    fn limit_tails_ignore_preperiod() {
        let base = cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let padded = cf(7, &[4, 2, 6], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let shift = padded.preperiod().len();
        for residue in 0..8 {
            let (f, b) = base.limit_tails(residue).unwrap();
            let (fp, bp) = padded.limit_tails((residue + shift) % 8).unwrap();
            assert_eq!((f, b), (fp, bp), "residue {residue}");
        }
    }

    #[test]
    fn perron_identity_holds_exactly() {
        let phi = cf(1, &[], &[1]);
        let (lhs, rhs) = phi.perron_check(1).unwrap();
        // |φ − 2| = 1/(φ + 1) = 2 − φ
        assert_eq!(lhs, surd(-3, 1, 5, 2).abs());
        assert_eq!(rhs, lhs);
        for e in [
            cf(2, &[], &[1, 1, 3]),
            cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]),
            cf(0, &[1, 1], &[3, 1]),
        ] {
            for n in 0..=30 {
                e.perron_check(n).unwrap_or_else(|err| {
                    panic!("perron failed for {e} at n = {n}: {err}")
                });
            }
        }
    }

    #[test]
    fn best_approximations_decrease_strictly() {
        for e in [
            cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]),
            cf(1, &[], &[1]),
            cf(0, &[1, 1], &[3, 1]),
        ] {
            let alpha = e.value().unwrap();
            let mut last: Option<QuadSurd> = None;
            for c in e.convergents(25) {
                let err = QuadSurd::from_integer(c.q.clone())
                    .checked_mul(&alpha)
                    .unwrap()
                    .checked_sub(&QuadSurd::from_integer(c.p.clone()))
                    .unwrap()
                    .abs();
                if let Some(prev) = &last {
                    assert_eq!(err.cmp(prev), Ordering::Less, "n = {}", c.n);
                }
                last = Some(err);
            }
        }
    }

    #[test]
    fn equivalence_is_rotation_of_periods() {
        let a = cf(2, &[], &[1, 1, 3]);
        let b = cf(0, &[2, 2], &[3, 1, 1]);
        assert!(a.equivalent(&b).unwrap());
        let c = cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]);
        assert!(!a.equivalent(&c).unwrap());
        assert!(c.equivalent(&cf(9, &[5], &[1, 1, 1, 1, 3, 1, 1, 3])).unwrap());
        assert!(cf(1, &[], &[]).equivalent(&a).is_err());
    }

    #[test]
    fn display_and_parse() {
        for e in [
            cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]),
            cf(0, &[1, 1], &[3, 1]),
            cf(-3, &[2], &[]),
            cf(5, &[], &[]),
        ] {
            let text = e.to_string();
            let back: CfExpansion = text.parse().unwrap();
            assert_eq!(back, e, "roundtrip of {text}");
        }
        assert_eq!(
            cf(2, &[], &[1, 1, 3, 1, 1, 1, 1, 3]).to_string(),
            "2;(1,1,3,1,1,1,1,3)"
        );
        // the preperiod's trailing 1 absorbs into a rotation of the period
        assert_eq!(cf(0, &[1, 1], &[3, 1]).to_string(), "0;1,(1,3)");
        let parsed: CfExpansion = "2;(1,1,3)".parse().unwrap();
        assert_eq!(parsed, cf(2, &[], &[1, 1, 3]));
        assert!(" 2;(1,1,".parse::<CfExpansion>().is_err());
        assert!("x".parse::<CfExpansion>().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let e = cf(2, &[4], &[1, 1, 3]);
        let json = serde_json::to_string(&e).unwrap();
        assert_eq!(json, r#"{"a0":2,"preperiod":[4],"period":[1,1,3]}"#);
        let back: CfExpansion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn tails_converge_to_limit_tails() {
        // past the preperiod the forward tail α_n is exactly its limit, while
        // the backward tail α*_{n−1} is rational and converges strictly
        // monotonically to the irrational backward limit
        let e = cf(7, &[4, 2, 6], &[1, 1, 3, 1, 1, 1, 1, 3]);
        let m = e.preperiod().len();
        for class in [0usize, 3] {
            let residue = (class + m) % 8;
            let (forward, backward) = e.limit_tails(residue).unwrap();
            let mut last_b: Option<QuadSurd> = None;
            let mut n = residue;
            while n <= 80 {
                if n <= m {
                    n += 8;
                    continue;
                }
                let t = e.tails(n).unwrap();
                assert_eq!(t.alpha, forward, "forward tail exact at n = {n}");
                let diff_b = QuadSurd::from_rational(e.alpha_star(n - 1))
                    .checked_sub(&backward)
                    .unwrap()
                    .abs();
                assert!(diff_b.signum() > 0);
                if let Some(prev) = &last_b {
                    assert_eq!(diff_b.cmp(prev), Ordering::Less, "n = {n}");
                }
                last_b = Some(diff_b);
                n += 8;
            }
        }
    }
}
