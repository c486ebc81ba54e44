//! Exact elements `(p + q·√d)/r` of a real quadratic field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::factor::squarefree_decompose;
use super::{BigRational, NumError};

/// An exact number `(p + q·√d)/r` with integer `p, q, r` and a positive
/// square-free radicand `d`.
///
/// The representation is canonical: `r > 0`, `gcd(p, q, r) = 1`, `d` is
/// square-free, and rational values always carry `q = 0, d = 1`. Two values
/// are numerically equal exactly when their fields are equal, so the derived
/// `Eq`/`Hash` are semantic. Comparison never touches floating point: signs
/// are decided by integer squaring alone, and ordering is total even across
/// distinct radicands.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    p: BigInt,
    q: BigInt,
    d: BigInt,
    r: BigInt,
}

/// Sign of `a + b·√m` for integers with `m ≥ 0` (not necessarily square-free).
fn surd_sign(a: &BigInt, b: &BigInt, m: &BigInt) -> i32 {
    if b.is_zero() || m.is_zero() {
        return sign_i32(a);
    }
    if a.is_zero() {
        return sign_i32(b);
    }
    let sa = sign_i32(a);
    let sb = sign_i32(b);
    if sa == sb {
        return sa;
    }
    match (a * a).cmp(&(b * b * m)) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b·√m + c·√n` for integers with `m, n ≥ 0`.
///
/// Resolved by at most two integer squarings: first the sign of the radical
/// part `S = b√m + c√n`, then, when `a` and `S` oppose, the sign of
/// `a² − S² = (a² − b²m − c²n) − 2bc·√(mn)`.
fn two_surd_sign(a: &BigInt, b: &BigInt, m: &BigInt, c: &BigInt, n: &BigInt) -> i32 {
    if b.is_zero() || m.is_zero() {
        return surd_sign(a, c, n);
    }
    if c.is_zero() || n.is_zero() {
        return surd_sign(a, b, m);
    }
    let sb = sign_i32(b);
    let sc = sign_i32(c);
    let s_sign = if sb == sc {
        sb
    } else {
        match (b * b * m).cmp(&(c * c * n)) {
            Ordering::Greater => sb,
            Ordering::Less => sc,
            Ordering::Equal => 0,
        }
    };
    if a.is_zero() {
        return s_sign;
    }
    if s_sign == 0 || sign_i32(a) == s_sign {
        return sign_i32(a);
    }
    let g = a * a - b * b * m - c * c * n;
    let h = surd_sign(&g, &(BigInt::from(-2) * b * c), &(m * n));
    match h {
        1 => sign_i32(a),
        -1 => s_sign,
        _ => 0,
    }
}

fn sign_i32(n: &BigInt) -> i32 {
    match n.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

impl QuadSurd {
    /// Canonicalizing constructor for `(p + q·√d)/r`.
    pub fn new(p: BigInt, q: BigInt, d: BigInt, r: BigInt) -> Result<Self, NumError> {
        if r.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let (mut p, mut q, mut d, mut r) = (p, q, d, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        if q.is_zero() || d.is_zero() {
            q = BigInt::zero();
            d = BigInt::one();
        } else {
            if d.is_negative() {
                return Err(NumError::NegativeRadicand { radicand: d });
            }
            if !d.is_one() {
                let (s, f) = squarefree_decompose(&d)?;
                q *= s;
                d = f;
            }
            if d.is_one() {
                p += std::mem::take(&mut q);
            }
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= g;
        }
        Ok(QuadSurd { p, q, d, r })
    }

    /// Convenience constructor from machine integers.
    pub fn new_i64(p: i64, q: i64, d: i64, r: i64) -> Result<Self, NumError> {
        Self::new(BigInt::from(p), BigInt::from(q), BigInt::from(d), BigInt::from(r))
    }

    pub fn from_integer(n: BigInt) -> Self {
        QuadSurd { p: n, q: BigInt::zero(), d: BigInt::one(), r: BigInt::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    pub fn from_rational(x: BigRational) -> Self {
        let (num, den) = x.into_raw();
        Self::new(num, BigInt::zero(), BigInt::one(), den).expect("nonzero denominator")
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt_rational(x: BigRational) -> Result<Self, NumError> {
        if x.is_negative() {
            return Err(NumError::NegativeRadicand { radicand: x.numer().clone() });
        }
        let (num, den) = x.into_raw();
        // √(a/b) = √(ab) / b
        Self::new(BigInt::zero(), BigInt::one(), num * &den, den)
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.p.clone(), self.r.clone()))
    }

    /// Sign of the value: -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        surd_sign(&self.p, &self.q, &self.d)
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, NumError> {
        if self.q.is_zero() {
            Ok(other.d.clone())
        } else if other.q.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(NumError::MixedRadicand { left: self.d.clone(), right: other.d.clone() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(other)?;
        Self::new(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            d,
            &self.r * &other.r,
        )
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_radicand(other)?;
        Self::new(
            &self.p * &other.p + &self.q * &other.q * &d,
            &self.p * &other.q + &self.q * &other.p,
            d,
            &self.r * &other.r,
        )
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        self.checked_mul(&other.recip()?)
    }

    /// Exact reciprocal, by rationalizing with the conjugate.
    pub fn recip(&self) -> Result<Self, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        // 1 / ((p + q√d)/r) = r(p − q√d) / (p² − q²d)
        let norm = &self.p * &self.p - &self.q * &self.q * &self.d;
        Self::new(&self.r * &self.p, -(&self.r * &self.q), self.d.clone(), norm)
    }

    /// Greatest integer `n` with `n ≤ self`, via integer square-root
    /// bracketing of `q√d`.
    pub fn floor(&self) -> BigInt {
        let sq = (&self.q * &self.q * &self.d).sqrt();
        // low ≤ p + q√d ≤ low + 1
        let low = if self.q.is_negative() {
            &self.p - &sq - 1
        } else {
            &self.p + &sq
        };
        let mut n = low.div_floor(&self.r);
        while self.cmp_integer(&(&n + 1)) != Ordering::Less {
            n += 1;
        }
        debug_assert!(self.cmp_integer(&n) != Ordering::Less);
        n
    }

    /// Exact comparison against an integer.
    pub fn cmp_integer(&self, n: &BigInt) -> Ordering {
        match surd_sign(&(&self.p - n * &self.r), &self.q, &self.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Decimal expansion truncated toward zero to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        assert!(digits >= 1, "at least one fractional digit");
        let pow = BigInt::from(10).pow(digits as u32);
        let scaled = QuadSurd::new(
            &self.p * &pow,
            &self.q * &pow,
            self.d.clone(),
            self.r.clone(),
        )
        .expect("scaling preserves validity");
        let m = scaled.abs().floor();
        let (int_part, frac) = m.div_rem(&pow);
        let sign = if self.signum() < 0 && !m.is_zero() { "-" } else { "" };
        format!("{sign}{int_part}.{frac:0>width$}", frac = frac.to_string(), width = digits)
    }
}

impl Ord for QuadSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        // sign of (p₁r₂ − p₂r₁) + q₁r₂·√d₁ − q₂r₁·√d₂
        let a = &self.p * &other.r - &other.p * &self.r;
        let b = &self.q * &other.r;
        let c = -(&other.q * &self.r);
        match two_surd_sign(&a, &b, &self.d, &c, &other.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

impl PartialOrd for QuadSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
            r: self.r.clone(),
        }
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&QuadSurd> for &QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: &QuadSurd) -> QuadSurd {
                self.$checked(rhs).expect("same-field operands")
            }
        }
        impl $trait<QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: QuadSurd) -> QuadSurd {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadSurd> for QuadSurd {
            type Output = QuadSurd;
            fn $method(self, rhs: &QuadSurd) -> QuadSurd {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            if self.r.is_one() {
                return write!(f, "{}", self.p);
            }
            return write!(f, "{}/{}", self.p, self.r);
        }
        let root = format!("sqrt({})", self.d);
        let q_abs = self.q.abs();
        let surd_term = if q_abs.is_one() {
            root
        } else {
            format!("{q_abs}*{root}")
        };
        let core = if self.p.is_zero() {
            if self.q.is_negative() {
                format!("-{surd_term}")
            } else {
                surd_term
            }
        } else if self.q.is_negative() {
            format!("{}-{surd_term}", self.p)
        } else {
            format!("{}+{surd_term}", self.p)
        };
        if self.r.is_one() {
            write!(f, "{core}")
        } else if self.p.is_zero() {
            write!(f, "{core}/{}", self.r)
        } else {
            write!(f, "({core})/{}", self.r)
        }
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadSurd({self})")
    }
}

impl FromStr for QuadSurd {
    type Err = NumError;
    fn from_str(s: &str) -> Result<Self, NumError> {
        super::parse::parse_surd(s)
    }
}

/// Integers serialize as JSON numbers when they fit, decimal strings
/// otherwise; both forms deserialize.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum IntRepr {
    Small(i64),
    Big(String),
}

pub(crate) fn int_to_repr(n: &BigInt) -> IntRepr {
    match n.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Big(n.to_string()),
    }
}

pub(crate) fn int_from_repr(r: IntRepr) -> Result<BigInt, String> {
    match r {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Big(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
struct SurdRepr {
    p: IntRepr,
    q: IntRepr,
    d: IntRepr,
    r: IntRepr,
}

impl Serialize for QuadSurd {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SurdRepr {
            p: int_to_repr(&self.p),
            q: int_to_repr(&self.q),
            d: int_to_repr(&self.d),
            r: int_to_repr(&self.r),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadSurd {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SurdRepr::deserialize(deserializer)?;
        let field = |r| int_from_repr(r).map_err(D::Error::custom);
        QuadSurd::new(field(repr.p)?, field(repr.q)?, field(repr.d)?, field(repr.r)?)
            .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(p: i64, q: i64, d: i64, r: i64) -> QuadSurd {
        QuadSurd::new_i64(p, q, d, r).unwrap()
    }

    #[test]
    fn canonical_forms() {
        // √8 = 2√2
        let x = surd(0, 1, 8, 1);
        assert_eq!((x.p(), x.q(), x.d(), x.r()), (&0.into(), &2.into(), &2.into(), &1.into()));
        // (2 + 2√4)/2 = 3: perfect-square radicand folds to rational
        let y = surd(2, 2, 4, 2);
        assert_eq!(y, QuadSurd::from_i64(3));
        // negative denominator normalizes away
        let z = surd(1, -1, 5, -2);
        assert_eq!(z, surd(-1, 1, 5, 2));
        // gcd reduction
        let w = surd(6, 4, 5, 10);
        assert_eq!((w.p(), w.q(), w.r()), (&3.into(), &2.into(), &5.into()));
        // q = 0 forces d = 1
        let v = surd(7, 0, 173, 3);
        assert_eq!(v.d(), &BigInt::one());
    }

    #[test]
    fn golden_ratio_identities() {
        let phi = surd(1, 1, 5, 2);
        let conj = surd(-1, 1, 5, 2);
        assert_eq!(&phi + &conj, surd(0, 1, 5, 1)); // φ + (φ−1) = √5
        assert_eq!(&phi * &conj, QuadSurd::one()); // φ(φ−1) = 1
    }

    #[test]
    fn subtract_integer_recanonicalizes() {
        let alpha = surd(39, 13, 173, 82);
        let shifted = &alpha - &QuadSurd::from_i64(2);
        assert_eq!(shifted, surd(-125, 13, 173, 82));
    }

    #[test]
    fn mixed_radicand_is_rejected_for_arithmetic() {
        let a = surd(0, 1, 2, 1);
        let b = surd(0, 1, 3, 1);
        assert!(matches!(a.checked_add(&b), Err(NumError::MixedRadicand { .. })));
        // rational operands mix freely
        let c = surd(1, 0, 1, 2);
        assert_eq!(a.checked_add(&c).unwrap(), surd(1, 2, 2, 2));
    }

    #[test]
    fn division() {
        let four = QuadSurd::from_i64(4);
        let den = surd(3, 1, 2, 1); // 3 + √2
        let bound = four.checked_div(&den).unwrap();
        assert_eq!(bound, surd(12, -4, 2, 7)); // 4(3−√2)/7
        assert!(matches!(
            four.checked_div(&QuadSurd::zero()),
            Err(NumError::DivisionByZero)
        ));
    }

    #[test]
    fn compare_third_point_against_rational() {
        // 164/(13√173) = 164√173/2249 = 0.9591297⁺ < 0.959130
        let k = surd(0, 164, 173, 2249);
        let rat = QuadSurd::from_rational(BigRational::new(959_130.into(), 1_000_000.into()));
        assert_eq!(k.cmp(&rat), Ordering::Less);
        assert_eq!(k.cmp(&k.clone()), Ordering::Equal);
    }

    #[test]
    fn compare_across_radicands() {
        // √2 − 1/2 = 0.914213⁺ exceeds 4/(3+√2) = 0.906163⁺
        let a = surd(-1, 2, 2, 2);
        let b = surd(12, -4, 2, 7);
        assert_eq!(a.cmp(&b), Ordering::Greater);
        // genuinely two-field comparisons
        assert_eq!(surd(1, 1, 2, 1).cmp(&surd(0, 1, 5, 1)), Ordering::Greater); // 2.414 > 2.236
        // a case that needs the nested squaring: 10−3√5 vs √11
        assert_eq!(surd(10, -3, 5, 1).cmp(&surd(0, 1, 11, 1)), Ordering::Less); // 3.2918 < 3.3166
        // equal values in disguise: 2√2 = √8 handled by canonicalization,
        // and cross-field equality of rationals embedded with junk radicands
        assert_eq!(surd(3, 0, 7, 2).cmp(&surd(3, 0, 11, 2)), Ordering::Equal);
    }

    #[test]
    fn floors() {
        assert_eq!(surd(1, 1, 17, 2).floor(), BigInt::from(2));
        assert_eq!(surd(39, 13, 173, 82).floor(), BigInt::from(2));
        assert_eq!(surd(7, 0, 1, 3).floor(), BigInt::from(2));
        assert_eq!(surd(-7, 0, 1, 3).floor(), BigInt::from(-3));
        assert_eq!(surd(0, -1, 2, 1).floor(), BigInt::from(-2)); // −√2
        assert_eq!(QuadSurd::from_i64(-4).floor(), BigInt::from(-4));
    }

    #[test]
    fn decimals() {
        assert_eq!(surd(0, 164, 173, 2249).to_decimal(6), "0.959129");
        assert_eq!(surd(12, -4, 2, 7).to_decimal(6), "0.906163");
        assert_eq!(surd(1, 0, 1, 2).to_decimal(3), "0.500");
        assert_eq!(surd(-1, 0, 1, 4).to_decimal(3), "-0.250");
        // truncation toward zero on negatives
        assert_eq!(surd(-2567, 0, 1, 10000).to_decimal(3), "-0.256");
        assert_eq!(surd(0, 4, 5, 5).to_decimal(6), "1.788854"); // 4/√5
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for s in [
            surd(39, 13, 173, 82),
            surd(0, 164, 173, 2249),
            surd(12, -4, 2, 7),
            surd(-1, 2, 2, 2),
            QuadSurd::from_i64(-7),
            surd(1, 0, 1, 2),
            surd(0, -1, 5, 1),
        ] {
            let text = s.to_string();
            let back: QuadSurd = text.parse().unwrap();
            assert_eq!(back, s, "roundtrip through {text}");
        }
        assert_eq!(surd(39, 13, 173, 82).to_string(), "(39+13*sqrt(173))/82");
    }

    #[test]
    fn json_roundtrip() {
        let s = surd(39, 13, 173, 82);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"p":39,"q":13,"d":173,"r":82}"#);
        let back: QuadSurd = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let big: QuadSurd = serde_json::from_str(
            r#"{"p":"123456789012345678901234567890","q":0,"d":1,"r":1}"#,
        )
        .unwrap();
        assert_eq!(big.p().to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn canonicalization_is_idempotent_and_compare_matches_decimals() {
        // deterministic LCG over raw (p, q, d, r) tuples, including
        // non-square-free radicands
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0u32;
        for _ in 0..10_000 {
            let p = (next() % 2001) as i64 - 1000;
            let q = (next() % 2001) as i64 - 1000;
            let d = (next() % 400) as i64 + 1;
            let r = (next() % 1000) as i64 + 1;
            let x = surd(p, q, d, r);
            let again = QuadSurd::new(x.p().clone(), x.q().clone(), x.d().clone(), x.r().clone())
                .unwrap();
            assert_eq!(again, x);

            let p2 = (next() % 2001) as i64 - 1000;
            let q2 = (next() % 2001) as i64 - 1000;
            let d2 = (next() % 400) as i64 + 1;
            let r2 = (next() % 1000) as i64 + 1;
            let y = surd(p2, q2, d2, r2);
            let (dx, dy) = (x.to_decimal(50), y.to_decimal(50));
            let parse = |t: &str| {
                let neg = t.starts_with('-');
                let digits: String = t.chars().filter(|c| c.is_ascii_digit()).collect();
                let n: BigInt = digits.parse().unwrap();
                if neg {
                    -n
                } else {
                    n
                }
            };
            let (nx, ny) = (parse(&dx), parse(&dy));
            // only decide from decimals when they are separated by > 10^-40,
            // i.e. the 50-digit truncations differ beyond their error halo
            if (&nx - &ny).abs() > BigInt::from(10).pow(10) {
                assert_eq!(x.cmp(&y), nx.cmp(&ny), "{x} vs {y}");
            }
            checked += 1;
        }
        assert_eq!(checked, 10_000);
    }

    #[test]
    fn floor_brackets_value() {
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..2_000 {
            let p = (next() % 4001) as i64 - 2000;
            let q = (next() % 4001) as i64 - 2000;
            let d = (next() % 200) as i64 + 1;
            let r = (next() % 500) as i64 + 1;
            let x = surd(p, q, d, r);
            let n = x.floor();
            assert_ne!(x.cmp_integer(&n), Ordering::Less);
            assert_eq!(x.cmp_integer(&(&n + 1)), Ordering::Less);
        }
    }
}
