//! Exact comparison of integer quantities against powers with the exponent
//! `beta = log 32 / log 9` (and `beta + 1 = log 288 / log 9`).
//!
//! The constant is stored as the integer pair (32, 9), never as a rounded
//! decimal. Comparisons go through `ln` intervals over rationals at a
//! configurable precision; an exact route decides the cases where both sides
//! are powers of 2 and 3 (where the real numbers can coincide), and any
//! comparison whose interval still straddles equality after escalating the
//! precision is reported as indeterminate rather than silently resolved.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Verdict of a bound comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVerdict {
    Holds,
    Fails,
    Indeterminate,
}

/// The pair `(32, 9)` defining `beta`, plus the interval precision policy.
#[derive(Debug, Clone, Copy)]
pub struct BoundConstants {
    pub beta_numerator_base: u64,
    pub beta_denominator_base: u64,
    /// Starting precision in bits; escalated by doubling.
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            beta_numerator_base: 32,
            beta_denominator_base: 9,
            start_bits: 64,
            max_bits: 1024,
        }
    }
}

/// A rational enclosure `[lo, hi]` of a real number.
#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    fn point(x: BigRational) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        Interval { lo, hi }
    }

    fn scale_int(&self, k: i64) -> Interval {
        let k = BigRational::from_integer(k.into());
        if k >= BigRational::zero() {
            Interval {
                lo: &self.lo * &k,
                hi: &self.hi * &k,
            }
        } else {
            Interval {
                lo: &self.hi * &k,
                hi: &self.lo * &k,
            }
        }
    }
}

fn big_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::from(n.clone()))
}

/// `ln 2` enclosure via `2·atanh(1/3)` with an explicit tail bound.
fn ln2_interval(bits: u32) -> Interval {
    atanh_series(
        &BigRational::new(1.into(), 3.into()),
        bits,
    )
}

/// Enclosure of `2·atanh(t) = ln((1+t)/(1-t))` for `0 <= t <= 1/3`.
fn atanh_series(t: &BigRational, bits: u32) -> Interval {
    if t.is_zero() {
        return Interval::point(BigRational::zero());
    }
    // 2 * sum_{i<K} t^(2i+1)/(2i+1), remainder in [0, 2*t^(2K+1)/((2K+1)(1-t^2))].
    let terms = (bits as usize) / 3 + 4;
    let t2 = t * t;
    let mut sum = BigRational::zero();
    let mut power = t.clone();
    for i in 0..terms {
        let denom = BigRational::from_integer(((2 * i + 1) as i64).into());
        sum += &power / denom;
        power *= &t2;
    }
    // power = t^(2K+1) here.
    let one = BigRational::one();
    let tail = &power * BigRational::from_integer(2.into())
        / (BigRational::from_integer(((2 * terms + 1) as i64).into()) * (&one - &t2));
    let two = BigRational::from_integer(2.into());
    let lo = &sum * &two;
    let hi = &lo + &tail;
    Interval { lo, hi }
}

/// Enclosure of `ln x` for a positive rational `x`.
pub fn ln_interval(x: &BigRational, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive value");
    if x.is_one() {
        return Interval::point(BigRational::zero());
    }
    if *x < BigRational::one() {
        let inv = x.recip();
        let iv = ln_interval(&inv, bits);
        return Interval {
            lo: -iv.hi,
            hi: -iv.lo,
        };
    }
    // Reduce x = 2^e * m with m in [1, 2).
    let mut e: i64 = 0;
    let mut m = x.clone();
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    while m >= two {
        m /= &two;
        e += 1;
    }
    while m < one {
        m *= &two;
        e -= 1;
    }
    // ln m = 2 atanh((m-1)/(m+1)), argument in [0, 1/3).
    let t = (&m - &one) / (&m + &one);
    let series = atanh_series(&t, bits);
    let ln2 = ln2_interval(bits).scale_int(e);
    series.add(&ln2)
}

/// Exact exponent when `n` is a perfect power of `base`.
fn log_exact(n: &BigUint, base: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let base_b = BigUint::from(base);
    let mut m = n.clone();
    let mut e = 0u64;
    while (&m % &base_b).is_zero() {
        m /= &base_b;
        e += 1;
    }
    if m.is_one() {
        Some(e)
    } else {
        None
    }
}

/// Compares `lhs <= n^beta` where `beta = ln(bn)/ln(bd)`, i.e. decides
/// `ln(lhs)·ln(bd) <= ln(bn)·ln(n)` with an exact fast path for
/// `lhs = 2^u, n = 3^v` (where `bn = 32`, `bd = 9` make both sides
/// rational multiples of `ln2·ln3`).
pub fn le_pow_beta(lhs: &BigUint, n: u64, consts: &BoundConstants) -> BoundVerdict {
    if lhs.is_zero() {
        return BoundVerdict::Holds;
    }
    if n <= 1 {
        return if lhs.is_one() {
            BoundVerdict::Holds
        } else {
            BoundVerdict::Fails
        };
    }
    // Exact route: lhs = 2^u and n = 3^v give 2u <=> 5v exactly.
    if consts.beta_numerator_base == 32 && consts.beta_denominator_base == 9 {
        if let (Some(u), Some(v)) = (log_exact(lhs, 2), log_exact(&BigUint::from(n), 3)) {
            return if 2 * u <= 5 * v {
                BoundVerdict::Holds
            } else {
                BoundVerdict::Fails
            };
        }
    }
    let mut bits = consts.start_bits;
    loop {
        let l_lhs = ln_interval(&big_rational(lhs), bits);
        let l_bd = ln_interval(
            &BigRational::from_integer((consts.beta_denominator_base as i64).into()),
            bits,
        );
        let l_bn = ln_interval(
            &BigRational::from_integer((consts.beta_numerator_base as i64).into()),
            bits,
        );
        let l_n = ln_interval(&BigRational::from_integer((n as i64).into()), bits);
        let left = l_lhs.mul(&l_bd);
        let right = l_bn.mul(&l_n);
        if left.hi <= right.lo {
            return BoundVerdict::Holds;
        }
        if left.lo > right.hi {
            return BoundVerdict::Fails;
        }
        if bits >= consts.max_bits {
            return BoundVerdict::Indeterminate;
        }
        bits *= 2;
    }
}

/// `x <= n^(beta+1) / 2`, the order bound used throughout: exactly
/// `ln(2x)·ln 9 <= ln 288·ln n` for the default constants.
pub fn le_half_pow_beta_plus_one(x: &BigUint, n: u64, consts: &BoundConstants) -> BoundVerdict {
    // 2x <= n^(beta+1) = n^beta * n  <=>  (2x / n) <= n^beta. Work with the
    // rational lhs via the log form directly.
    let two_x = x * 2u32;
    if n == 0 {
        return BoundVerdict::Fails;
    }
    // Exact route: 2x = 2^u·3^w vs n = 3^v: compare coefficientwise when
    // conclusive (ln(2x)·2ln3 vs (5ln2 + 2ln3)·v·ln3).
    if consts.beta_numerator_base == 32 && consts.beta_denominator_base == 9 {
        if let Some(v) = log_exact(&BigUint::from(n), 3) {
            if let Some((u, w)) = two_three_split(&two_x) {
                // 2u·ln2·ln3 + 2w·ln3²  <=  5v·ln2·ln3 + 2v·ln3².
                let (a, b) = (2 * u as i128 - 5 * v as i128, 2 * w as i128 - 2 * v as i128);
                if a <= 0 && b <= 0 {
                    return BoundVerdict::Holds;
                }
                if a >= 0 && b >= 0 && (a > 0 || b > 0) {
                    return BoundVerdict::Fails;
                }
            }
        }
    }
    let mut bits = consts.start_bits;
    loop {
        let l_lhs = ln_interval(&big_rational(&two_x), bits);
        let l_bd = ln_interval(
            &BigRational::from_integer((consts.beta_denominator_base as i64).into()),
            bits,
        );
        let base288 = consts.beta_numerator_base * consts.beta_denominator_base;
        let l_288 = ln_interval(&BigRational::from_integer((base288 as i64).into()), bits);
        let l_n = ln_interval(&BigRational::from_integer((n as i64).into()), bits);
        let left = l_lhs.mul(&l_bd);
        let right = l_288.mul(&l_n);
        if left.hi <= right.lo {
            return BoundVerdict::Holds;
        }
        if left.lo > right.hi {
            return BoundVerdict::Fails;
        }
        if bits >= consts.max_bits {
            return BoundVerdict::Indeterminate;
        }
        bits *= 2;
    }
}

fn two_three_split(n: &BigUint) -> Option<(u64, u64)> {
    let mut m = n.clone();
    let two = BigUint::from(2u32);
    let three = BigUint::from(3u32);
    let mut u = 0u64;
    let mut w = 0u64;
    while (&m % &two).is_zero() {
        m /= &two;
        u += 1;
    }
    while (&m % &three).is_zero() {
        m /= &three;
        w += 1;
    }
    if m.is_one() {
        Some((u, w))
    } else {
        None
    }
}

/// `n^(beta+1)/2 <= 2^(n/6)`, i.e. `6·ln288·ln n <= (n+6)·ln2·ln9`.
pub fn half_pow_beta_plus_one_le_two_pow_sixth(n: u64, consts: &BoundConstants) -> BoundVerdict {
    let mut bits = consts.start_bits;
    loop {
        let base288 = consts.beta_numerator_base * consts.beta_denominator_base;
        let l_288 = ln_interval(&BigRational::from_integer((base288 as i64).into()), bits);
        let l_n = ln_interval(&BigRational::from_integer((n as i64).into()), bits);
        let l_2 = ln_interval(&BigRational::from_integer(2.into()), bits);
        let l_9 = ln_interval(
            &BigRational::from_integer((consts.beta_denominator_base as i64).into()),
            bits,
        );
        let left = l_288.mul(&l_n).scale_int(6);
        let right = l_2.mul(&l_9).scale_int(n as i64 + 6);
        if left.hi <= right.lo {
            return BoundVerdict::Holds;
        }
        if left.lo > right.hi {
            return BoundVerdict::Fails;
        }
        if bits >= consts.max_bits {
            return BoundVerdict::Indeterminate;
        }
        bits *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn approx(iv: &Interval) -> f64 {
        ((iv.lo.to_f64().unwrap()) + iv.hi.to_f64().unwrap()) / 2.0
    }

    #[test]
    fn ln_values_match_floats() {
        let c = BoundConstants::default();
        for x in [2u64, 3, 9, 32, 97, 288, 4096] {
            let iv = ln_interval(&BigRational::from_integer((x as i64).into()), c.start_bits);
            let expect = (x as f64).ln();
            assert!((approx(&iv) - expect).abs() < 1e-12, "ln {x}");
            assert!(iv.lo <= iv.hi);
        }
    }

    #[test]
    fn tight_case_is_decided_exactly() {
        // 16 <= 9^beta / 2 holds with equality: 32 = 9^beta by definition.
        let c = BoundConstants::default();
        assert_eq!(le_pow_beta(&BigUint::from(32u32), 9, &c), BoundVerdict::Holds);
        assert_eq!(le_pow_beta(&BigUint::from(64u32), 9, &c), BoundVerdict::Fails);
        assert_eq!(le_pow_beta(&BigUint::from(1024u32), 81, &c), BoundVerdict::Holds);
        assert_eq!(le_pow_beta(&BigUint::from(2048u32), 81, &c), BoundVerdict::Fails);
    }

    #[test]
    fn order_bound_examples() {
        let c = BoundConstants::default();
        // 128 <= 16^(beta+1)/2 (~635) and 27 <= 9^(beta+1)/2 (= 144).
        assert_eq!(
            le_half_pow_beta_plus_one(&BigUint::from(128u32), 16, &c),
            BoundVerdict::Holds
        );
        assert_eq!(
            le_half_pow_beta_plus_one(&BigUint::from(27u32), 9, &c),
            BoundVerdict::Holds
        );
        assert_eq!(
            le_half_pow_beta_plus_one(&BigUint::from(700u32), 16, &c),
            BoundVerdict::Fails
        );
        // The boundary value itself: 2x = 288, n = 9 gives exact equality.
        assert_eq!(
            le_half_pow_beta_plus_one(&BigUint::from(144u32), 9, &c),
            BoundVerdict::Holds
        );
    }

    #[test]
    fn growth_threshold_brackets_97() {
        let c = BoundConstants::default();
        assert_eq!(
            half_pow_beta_plus_one_le_two_pow_sixth(97, &c),
            BoundVerdict::Holds
        );
        assert_eq!(
            half_pow_beta_plus_one_le_two_pow_sixth(95, &c),
            BoundVerdict::Fails
        );
        assert_eq!(
            half_pow_beta_plus_one_le_two_pow_sixth(4096, &c),
            BoundVerdict::Holds
        );
    }
}
