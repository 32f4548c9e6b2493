//! Exact rational arithmetic and the special values built on it.
//!
//! Every closed-form invariant in this crate is a [`Rational`]. Floats only
//! appear on the series and oracle paths (for instance
//! [`hurwitz_zeta_series`]).
//!
//! Hurwitz zeta values follow the convention `ζ_0 := ζ = ζ(·, 1)`, so a twist
//! parameter `c = 0` is evaluated at `c' = 1`. This fixes the `B_1` ambiguity:
//! `ζ_0(0) = ζ(0) = -1/2`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// `num / den`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i64 {
        if self.0.is_positive() {
            1
        } else if self.0.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract_positive(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    /// The value as an `i64`, if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Very large operands: divide in floating point after scaling.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    /// Terminating decimal expansion. Refused when the expansion would be lossy.
    pub fn to_decimal(&self) -> Result<String> {
        let mut den = self.denom().clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let (mut twos, mut fives) = (0u32, 0u32);
        while den.is_multiple_of(&two) {
            den /= &two;
            twos += 1;
        }
        while den.is_multiple_of(&five) {
            den /= &five;
            fives += 1;
        }
        if !den.is_one() {
            return Err(Error::LossyDecimal(self.to_string()));
        }
        let digits = twos.max(fives);
        let scaled = self.numer().abs() * BigInt::from(10).pow(digits) / self.denom();
        let mut s = scaled.to_string();
        if digits > 0 {
            let width = digits as usize + 1;
            if s.len() < width {
                s = format!("{}{}", "0".repeat(width - s.len()), s);
            }
            s.insert(s.len() - digits as usize, '.');
        }
        if self.is_negative() {
            s.insert(0, '-');
        }
        Ok(s)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational(self.0.$method(BigRational::from_integer(rhs.into())))
            }
        }
        impl $tr<i64> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: i64) -> Rational {
                Rational((&self.0).$method(BigRational::from_integer(rhs.into())))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

/// The rational `c ∈ [0, 1)` by which the central lattice generator acts as `e^{2πic}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Rational", into = "Rational")]
pub struct TwistParameter(Rational);

impl TwistParameter {
    pub fn new(c: Rational) -> Result<Self> {
        if c.is_negative() || c >= Rational::one() {
            return Err(Error::TwistOutOfRange(c.to_string()));
        }
        Ok(TwistParameter(c))
    }

    pub fn zero() -> Self {
        TwistParameter(Rational::zero())
    }

    pub fn half() -> Self {
        TwistParameter(Rational::new(1, 2))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// The partner twist `1 - c`, mapped back into `[0, 1)`.
    pub fn complement(&self) -> Self {
        if self.0.is_zero() {
            self.clone()
        } else {
            TwistParameter(Rational::one() - &self.0)
        }
    }

    /// Evaluation point for `ζ_c`: `c` itself, or `1` when `c = 0`.
    pub fn zeta_shift(&self) -> Rational {
        if self.0.is_zero() {
            Rational::one()
        } else {
            self.0.clone()
        }
    }
}

impl TryFrom<Rational> for TwistParameter {
    type Error = Error;
    fn try_from(c: Rational) -> Result<Self> {
        TwistParameter::new(c)
    }
}

impl From<TwistParameter> for Rational {
    fn from(t: TwistParameter) -> Rational {
        t.0
    }
}

impl fmt::Display for TwistParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient with signed upper argument: zero when `n < 0`.
pub(crate) fn binomial_i(n: i64, k: i64) -> i64 {
    if n < 0 {
        return 0;
    }
    binomial(n as u64, k).to_i64().expect("binomial overflow")
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_n = B_n(0)` (so `B_1 = -1/2`).
pub fn bernoulli_number(n: usize) -> Rational {
    let mut cache = bernoulli_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        // Σ_{k≤m} C(m+1, k) B_k = 0
        let s: Rational = cache
            .iter()
            .enumerate()
            .map(|(k, b)| b * Rational::from(binomial(m as u64 + 1, k as i64)))
            .sum();
        let b = -s / Rational::integer(m as i64 + 1);
        cache.push(b);
    }
    cache[n].clone()
}

/// Bernoulli polynomial `B_n(x) = Σ_k C(n,k) B_k x^{n-k}`.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    // Horner in x over the coefficients C(n,k) B_k, k = 0..n.
    let mut acc = Rational::zero();
    for k in 0..=n {
        acc = acc * x + bernoulli_number(k) * Rational::from(binomial(n as u64, k as i64));
    }
    acc
}

/// `ζ_c(1 - n) = -B_n(c')/n`, with `c' = 1` when `c = 0`.
pub fn hurwitz_zeta_neg(n: usize, c: &TwistParameter) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Precondition("hurwitz_zeta_neg needs n >= 1".into()));
    }
    let shift = c.zeta_shift();
    Ok(-bernoulli_poly(n, &shift) / Rational::integer(n as i64))
}

/// Riemann `ζ(1 - n)` for `n ≥ 1`.
pub fn riemann_zeta_neg(n: usize) -> Result<Rational> {
    hurwitz_zeta_neg(n, &TwistParameter::zero())
}

/// Result of a truncated Hurwitz series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Rigorous bound on the neglected tail after the correction terms.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `Σ_{k≥0} (k + c')^{-s}` for real `s > 1`.
///
/// The first `K` terms are summed directly; the remainder is replaced by its
/// integral plus the trapezoid and first derivative corrections. Since the
/// summand is completely monotone, the error of that tail estimate is bounded
/// by `|f'''(K)|/720`, and `K` is chosen so that this is at most `tol`.
pub fn hurwitz_zeta_series(s: f64, c: &TwistParameter, tol: f64) -> Result<SeriesValue> {
    if !(s > 1.0) {
        return Err(Error::Divergent { s, bound: 1.0 });
    }
    if !(tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    let a = c.zeta_shift().to_f64();
    let remainder = |x: f64| s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0) / 720.0;
    let mut k = 8usize;
    while remainder(k as f64 + a) > tol {
        k *= 2;
    }
    // Shrink back to the smallest admissible power-of-two step.
    let (mut lo, mut hi) = (k / 2, k);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if remainder(mid as f64 + a) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = hi.max(8);
    let head: f64 = (0..k).rev().map(|j| (j as f64 + a).powf(-s)).sum();
    let x = k as f64 + a;
    let integral = x.powf(1.0 - s) / (s - 1.0);
    let trapezoid = 0.5 * x.powf(-s);
    let derivative = s * x.powf(-s - 1.0) / 12.0;
    Ok(SeriesValue {
        value: head + integral + trapezoid + derivative,
        tail_bound: remainder(x),
        terms: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn tw(s: &str) -> TwistParameter {
        TwistParameter::new(q(s)).unwrap()
    }

    /// Independent closed form: B_n = Σ_k 1/(k+1) Σ_j (-1)^j C(k,j) j^n.
    fn bernoulli_oracle(n: u32) -> Rational {
        let mut total = Rational::zero();
        for k in 0..=n as u64 {
            let mut inner = BigInt::zero();
            for j in 0..=k {
                let term = binomial(k, j as i64) * BigInt::from(j).pow(n);
                if j % 2 == 0 {
                    inner += term;
                } else {
                    inner -= term;
                }
            }
            total += Rational::from(inner) / Rational::integer(k as i64 + 1);
        }
        total
    }

    #[test]
    fn bernoulli_numbers_match_explicit_sum() {
        for n in 0..30 {
            assert_eq!(bernoulli_number(n as usize), bernoulli_oracle(n), "B_{n}");
        }
        assert_eq!(bernoulli_number(12), q("-691/2730"));
    }

    #[test]
    fn bernoulli_poly_examples() {
        for c in ["0", "1/3", "7/5", "-2"] {
            assert_eq!(bernoulli_poly(0, &q(c)), Rational::one());
        }
        assert_eq!(bernoulli_poly(1, &Rational::zero()), q("-1/2"));
        assert_eq!(bernoulli_poly(2, &q("1/2")), q("-1/12"));
        // B_2(x) = x^2 - x + 1/6
        let x = q("2/7");
        assert_eq!(bernoulli_poly(2, &x), &x * &x - &x + q("1/6"));
    }

    #[test]
    fn bernoulli_poly_difference_equation() {
        // B_n(x + 1) - B_n(x) = n x^{n-1}
        for n in 1..12usize {
            for x in ["0", "1/3", "-5/4"] {
                let x = q(x);
                let lhs = bernoulli_poly(n, &(&x + 1)) - bernoulli_poly(n, &x);
                assert_eq!(lhs, x.pow(n as i32 - 1) * n as i64);
            }
        }
    }

    #[test]
    fn hurwitz_negative_examples() {
        assert_eq!(hurwitz_zeta_neg(2, &tw("0")).unwrap(), q("-1/12"));
        assert_eq!(hurwitz_zeta_neg(2, &tw("1/2")).unwrap(), q("1/24"));
        assert_eq!(hurwitz_zeta_neg(1, &tw("1/3")).unwrap(), q("1/6"));
        assert_eq!(hurwitz_zeta_neg(1, &tw("0")).unwrap(), q("-1/2"));
        assert_eq!(riemann_zeta_neg(4).unwrap(), q("1/120"));
        assert!(hurwitz_zeta_neg(0, &tw("0")).is_err());
    }

    #[test]
    fn hurwitz_series_examples() {
        let z4 = hurwitz_zeta_series(4.0, &tw("0"), 1e-12).unwrap();
        assert!((z4.value - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-11);
        assert!((z4.value - 1.0823232337).abs() < 1e-9);
        let h = hurwitz_zeta_series(2.0, &tw("1/2"), 1e-10).unwrap();
        assert!((h.value - 3.0 * std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-9);
        let z3 = hurwitz_zeta_series(3.0, &tw("0"), 1e-12).unwrap();
        assert!((z3.value - 1.2020569032).abs() < 1e-9);
        assert!(hurwitz_zeta_series(1.0, &tw("0"), 1e-6).is_err());
        assert!(hurwitz_zeta_series(0.5, &tw("0"), 1e-6).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(0, 1), BigInt::zero());
        assert_eq!(binomial(2, 1), BigInt::from(2));
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigInt>().unwrap());
    }

    #[test]
    fn rational_rendering() {
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("-4/2").to_string(), "-2");
        assert_eq!(q(" 3 / -9 ").to_string(), "-1/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(q("-3/8").to_decimal().unwrap(), "-0.375");
        assert_eq!(q("19/4").to_decimal().unwrap(), "4.75");
        assert_eq!(q("7").to_decimal().unwrap(), "7");
        assert!(matches!(q("1/3").to_decimal(), Err(Error::LossyDecimal(_))));
    }

    #[test]
    fn twist_parameter_range() {
        assert!(TwistParameter::new(q("1")).is_err());
        assert!(TwistParameter::new(q("-1/2")).is_err());
        assert_eq!(tw("1/3").complement(), tw("2/3"));
        assert_eq!(tw("0").complement(), tw("0"));
        let json = serde_json::to_string(&tw("2/5")).unwrap();
        assert_eq!(json, "\"2/5\"");
        assert!(serde_json::from_str::<TwistParameter>("\"3/2\"").is_err());
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let handles: Vec<_> = (0..4)
            .map(|i| std::thread::spawn(move || bernoulli_number(20 + i)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (i, b) in got.into_iter().enumerate() {
            assert_eq!(b, bernoulli_oracle(20 + i as u32));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn twist() -> impl Strategy<Value = TwistParameter> {
            (1i64..40, 2i64..41)
                .prop_filter("proper fraction", |(p, q)| p < q)
                .prop_map(|(p, q)| TwistParameter::new(Rational::new(p, q)).unwrap())
        }

        /// Plain partial sum of 10^6 terms plus the integral tail from 10^6.
        fn brute_force(s: f64, a: f64) -> f64 {
            let n = 1_000_000usize;
            let head: f64 = (0..n).rev().map(|k| (k as f64 + a).powf(-s)).sum();
            let x = n as f64 + a;
            head + x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn reflection_parity(n in 2usize..14, c in twist()) {
                let lhs = hurwitz_zeta_neg(n, &c.complement()).unwrap();
                let rhs = hurwitz_zeta_neg(n, &c).unwrap();
                let sign = if n % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(lhs, rhs * sign);
            }

            #[test]
            fn half_twist_identity(n in 1usize..20) {
                let half = hurwitz_zeta_neg(n, &TwistParameter::half()).unwrap();
                let zeta = riemann_zeta_neg(n).unwrap();
                let factor = Rational::integer(2).pow(1 - n as i32) - Rational::one();
                prop_assert_eq!(half, factor * zeta);
            }

            #[test]
            fn rational_string_roundtrip(p in -10_000i64..10_000, q in 1i64..5_000) {
                let r = Rational::new(p, q);
                let back: Rational = r.to_string().parse().unwrap();
                prop_assert_eq!(back, r);
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(6))]

            #[test]
            fn series_matches_brute_force(s in 3.0f64..6.0, c in twist()) {
                let tol = 1e-9;
                let got = hurwitz_zeta_series(s, &c, tol).unwrap();
                let want = brute_force(s, c.zeta_shift().to_f64());
                prop_assert!((got.value - want).abs() <= 2.0 * tol,
                    "s={s} c={c}: {} vs {}", got.value, want);
            }
        }
    }
}
