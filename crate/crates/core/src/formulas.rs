//! Exact counting formulas for precubic unicellular maps.
//!
//! Types are passed as `twice_h = 2h`. Counts are exact big integers and the
//! constants `c_h`, `K_h` exact rationals. Arguments outside the support of a
//! formula give 0.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("no non-orientable map has type 0")]
    TypeZero,
    #[error("type 2h = {0} is below the range of this formula")]
    TypeTooSmall(u32),
    #[error("size m must be at least 1")]
    SizeZero,
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `n!! = n (n - 2) ...`, with `0!! = 1!! = 1`.
pub fn double_factorial(n: u64) -> BigUint {
    (1..=n)
        .rev()
        .step_by(2)
        .fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn catalan(m: u64) -> BigUint {
    binomial(2 * m, m) / (m + 1)
}

fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn to_count(q: BigRational) -> BigUint {
    assert!(q.is_integer(), "count {q} is not an integer");
    q.to_integer().to_biguint().expect("counts are non-negative")
}

/// Orientable precubic maps of genus `h`, 2m + 1 edges:
/// `(2m)! / (12^h h! m! (m + 1 - 3h)!)`. Zero for half-integer `h`.
pub fn xi(twice_h: u32, m: u64) -> BigUint {
    if twice_h % 2 == 1 {
        return BigUint::zero();
    }
    let h = u64::from(twice_h / 2);
    if m + 1 < 3 * h {
        return BigUint::zero();
    }
    let den = pow(12, h) * factorial(h) * factorial(m) * factorial(m + 1 - 3 * h);
    to_count(ratio(factorial(2 * m), den))
}

/// `c_h = 3 2^(3h-2) h!/(2h)! sum_{l<h} C(2l, l) 16^-l`, with `c_0 = 0`.
pub fn c_const(h: u32) -> BigRational {
    if h == 0 {
        return BigRational::zero();
    }
    let h = u64::from(h);
    let sum = (0..h).fold(BigRational::zero(), |acc, l| {
        acc + ratio(binomial(2 * l, l), pow(16, l))
    });
    let front = ratio(BigUint::from(3u32) * pow(2, 3 * h - 2) * factorial(h), factorial(2 * h));
    front * sum
}

/// `c_h` from `c_h = 4/(2h-1) c_{h-1} + 3/(2^(h-1) (h-1)! (2h-1))`.
pub fn c_recurrence(h: u32) -> BigRational {
    let mut c = BigRational::zero();
    for k in 1..=u64::from(h) {
        let odd = BigUint::from(2 * k - 1);
        c = ratio(BigUint::from(4u32), odd.clone()) * c
            + ratio(BigUint::from(3u32), pow(2, k - 1) * factorial(k - 1) * odd);
    }
    c
}

/// Non-orientable precubic maps of type `h` with `2m + [h integer]` edges.
pub fn eta(twice_h: u32, m: u64) -> Result<BigUint, FormulaError> {
    if twice_h == 0 {
        return Err(FormulaError::TypeZero);
    }
    let fh = u64::from(twice_h / 2);
    if twice_h % 2 == 0 {
        if m + 1 < 3 * fh {
            return Ok(BigUint::zero());
        }
        let den = pow(6, fh) * factorial(m) * factorial(m + 1 - 3 * fh);
        Ok(to_count(c_const(twice_h / 2) * ratio(factorial(2 * m), den)))
    } else {
        if m < 1 + 3 * fh {
            return Ok(BigUint::zero());
        }
        let num = pow(4, m + fh - 1) * factorial(m - 1);
        let den = pow(6, fh) * double_factorial(u64::from(twice_h) - 1) * factorial(m - 1 - 3 * fh);
        Ok(to_count(ratio(num, den)))
    }
}

/// `m + 4 - 3h - [h half-integer]/2`, the top argument of `C(ell, 3)` in
/// the gluing count.
pub fn ell(twice_h: u32, m: u64) -> i64 {
    let t = i64::from(twice_h);
    (2 * m as i64 + 8 - 3 * t - (t % 2)) / 2
}

fn choose3(l: i64) -> BigUint {
    if l < 3 {
        BigUint::zero()
    } else {
        binomial(l as u64, 3)
    }
}

/// Marked maps `(m, v)` with `v` intertwined, counted by gluing:
/// `4 C(ell, 3) eta_{h-1}(m) + 3 C(ell, 3) xi_{h-1}(m)`.
pub fn marked_count(twice_h: u32, m: u64) -> Result<BigUint, FormulaError> {
    if twice_h < 2 {
        return Err(FormulaError::TypeTooSmall(twice_h));
    }
    let lower = twice_h - 2;
    let eta_lower = if lower == 0 { BigUint::zero() } else { eta(lower, m)? };
    let c = choose3(ell(twice_h, m));
    Ok(BigUint::from(4u32) * &c * eta_lower + BigUint::from(3u32) * c * xi(lower, m))
}

/// Checks `(2h - 1) eta_h(m) = marked_count(h, m)`.
pub fn recursion_check(twice_h: u32, m: u64) -> Result<bool, FormulaError> {
    let lhs = BigUint::from(twice_h - 1) * eta(twice_h, m)?;
    Ok(lhs == marked_count(twice_h, m)?)
}

/// Checks the leaf-insertion recursion between sizes `m - 1` and `m`:
/// `(m + 1 - 3h) eta_h(m) = 2 (2m - 1) eta_h(m - 1)` for integer `h`,
/// `(m - 1 - 3 floor(h)) eta_h(m) = 4 (m - 1) eta_h(m - 1)` otherwise.
pub fn remy_recursion_check(twice_h: u32, m: u64) -> Result<bool, FormulaError> {
    if m == 0 {
        return Err(FormulaError::SizeZero);
    }
    let cur = BigInt::from(eta(twice_h, m)?);
    let prev = BigInt::from(eta(twice_h, m - 1)?);
    let m = m as i64;
    let fh = i64::from(twice_h / 2);
    let (lhs, rhs) = if twice_h % 2 == 0 {
        (BigInt::from(m + 1 - 3 * fh) * cur, BigInt::from(2 * (2 * m - 1)) * prev)
    } else {
        (BigInt::from(m - 1 - 3 * fh) * cur, BigInt::from(4 * (m - 1)) * prev)
    };
    Ok(lhs == rhs)
}

/// `K_h`: `c_h / 6^h` for integer `h`, `4^(floor(h) - 1) / (6^floor(h) (2h-1)!!)`
/// otherwise.
pub fn k_const(twice_h: u32) -> Result<BigRational, FormulaError> {
    if twice_h == 0 {
        return Err(FormulaError::TypeZero);
    }
    let fh = u64::from(twice_h / 2);
    if twice_h % 2 == 0 {
        Ok(c_const(twice_h / 2) / BigRational::from(BigInt::from(pow(6, fh))))
    } else {
        let den = pow(6, fh) * double_factorial(u64::from(twice_h) - 1);
        Ok(BigRational::new(pow(4, fh).into(), (den * 4u32).into()))
    }
}

/// Leading coefficient of the growth `n^(3h - 3/2) 4^n`: the value is
/// `rational` or `rational / sqrt(pi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefactor {
    pub rational: BigRational,
    pub over_sqrt_pi: bool,
}

pub fn prefactor(twice_h: u32) -> Result<Prefactor, FormulaError> {
    if twice_h == 0 {
        return Err(FormulaError::TypeZero);
    }
    let fh = u64::from(twice_h / 2);
    if twice_h % 2 == 0 {
        Ok(Prefactor {
            rational: c_const(twice_h / 2) / BigRational::from(BigInt::from(pow(6, fh))),
            over_sqrt_pi: true,
        })
    } else {
        let den = BigUint::from(2u32) * pow(6, fh) * double_factorial(u64::from(twice_h) - 1);
        Ok(Prefactor {
            rational: ratio(pow(4, fh), den),
            over_sqrt_pi: false,
        })
    }
}

/// Digits after the decimal point used when none are requested.
pub const DEFAULT_DIGITS: usize = 50;

/// Evaluates the asymptotic estimate `prefactor n^(3h - 3/2) 4^n` as a
/// decimal string truncated to `digits` places.
pub fn asymptotic_kappa(twice_h: u32, n: u64, digits: usize) -> Result<String, FormulaError> {
    let pre = prefactor(twice_h)?;
    if n == 0 {
        return Err(FormulaError::SizeZero);
    }
    let guard = digits + 10;
    let scale = num_traits::pow(BigInt::from(10), guard);
    let t = u64::from(twice_h);
    let mut num = pre.rational.numer().clone() * BigInt::from(pow(4, n));
    let den = pre.rational.denom().clone();
    let scaled = if pre.over_sqrt_pi {
        // n^(3h - 3/2) / sqrt(pi) = n^((3t - 4)/2) sqrt(n / pi)
        num *= BigInt::from(pow(n, (3 * t - 4) / 2));
        let pi = pi_scaled(&scale);
        let radicand = BigInt::from(n) * &scale * &scale * &scale / pi;
        let root = radicand.magnitude().sqrt();
        num * BigInt::from(root) / den
    } else {
        num *= BigInt::from(pow(n, (3 * t - 3) / 2));
        num * &scale / den
    };
    Ok(format_fixed(&scaled, guard, digits))
}

/// `pi * scale` by Machin's formula.
fn pi_scaled(scale: &BigInt) -> BigInt {
    let extra = num_traits::pow(BigInt::from(10), 5);
    let s = scale * &extra;
    let pi = BigInt::from(16) * arctan_inv(5, &s) - BigInt::from(4) * arctan_inv(239, &s);
    pi / extra
}

/// `atan(1/x) * scale`.
fn arctan_inv(x: u64, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut power = scale / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn format_fixed(value: &BigInt, scale_digits: usize, digits: usize) -> String {
    let ten = BigInt::from(10);
    let truncated = value / num_traits::pow(ten, scale_digits - digits);
    let sign = if truncated.is_negative() { "-" } else { "" };
    let s = truncated.abs().to_string();
    if digits == 0 {
        return format!("{sign}{s}");
    }
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{sign}{int}.{frac}")
}

/// `h` as a decimal string: `3/2` or `2`.
pub fn type_label(twice_h: u32) -> String {
    if twice_h % 2 == 0 {
        (twice_h / 2).to_string()
    } else {
        format!("{twice_h}/2")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_values() {
        assert_eq!(catalan(2), big(2));
        assert_eq!(catalan(3), big(5));
        assert_eq!(double_factorial(0), big(1));
        assert_eq!(double_factorial(1), big(1));
        assert_eq!(double_factorial(5), big(15));
        for m in 0..=6 {
            assert_eq!(xi(0, m), catalan(m));
        }
        assert_eq!(xi(2, 2), big(1));
        assert_eq!(xi(2, 3), big(10));
        assert_eq!(xi(3, 5), big(0));
    }

    #[test]
    fn constants() {
        assert_eq!(c_const(0), q(0, 1));
        assert_eq!(c_const(1), q(3, 1));
        assert_eq!(c_const(2), q(9, 2));
        assert_eq!(c_recurrence(2), q(9, 2));
    }

    #[test]
    fn eta_values() {
        for m in 1..=4 {
            assert_eq!(eta(1, m).unwrap(), num_traits::pow(big(4), m as usize - 1));
        }
        assert_eq!(eta(2, 2).unwrap(), big(6));
        assert_eq!(eta(2, 3).unwrap(), big(60));
        assert_eq!(eta(3, 4).unwrap(), big(128));
        assert_eq!(eta(4, 5).unwrap(), big(3780));
        assert_eq!(eta(1, 0).unwrap(), big(0));
        assert_eq!(eta(2, 1).unwrap(), big(0));
        assert_eq!(eta(0, 3), Err(FormulaError::TypeZero));
    }

    #[test]
    fn ell_and_marked_counts() {
        assert_eq!(ell(2, 2), 3);
        assert_eq!(ell(3, 4), 3);
        assert_eq!(marked_count(2, 2).unwrap(), big(6));
        assert_eq!(marked_count(2, 3).unwrap(), big(60));
        assert_eq!(marked_count(3, 4).unwrap(), big(256));
        assert!(recursion_check(2, 2).unwrap());
        assert!(recursion_check(3, 4).unwrap());
        assert!(remy_recursion_check(2, 3).unwrap());
        assert!(remy_recursion_check(1, 2).unwrap());
    }

    #[test]
    fn asymptotics() {
        assert_eq!(asymptotic_kappa(1, 3, 3).unwrap(), "32.000");
        let p = prefactor(2).unwrap();
        assert_eq!(p.rational, q(1, 2));
        assert!(p.over_sqrt_pi);
        // 1 / (2 sqrt(pi)) * 1^(3/2) * 4
        assert_eq!(&asymptotic_kappa(2, 1, 10).unwrap(), "1.1283791670");
        assert_eq!(k_const(1).unwrap(), q(1, 4));
        assert_eq!(k_const(2).unwrap(), q(1, 2));
    }

    #[test]
    fn pi_digits() {
        let scale = num_traits::pow(BigInt::from(10), 30);
        assert_eq!(
            format_fixed(&pi_scaled(&scale), 30, 25),
            "3.1415926535897932384626433"
        );
    }
}
