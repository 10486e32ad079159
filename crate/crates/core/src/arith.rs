//! Real-arithmetic contexts.
//!
//! Every numerical routine in this crate is generic over [`Real`], so the
//! same construction can be run in native double precision and in an
//! extended binary precision. Comparing the two is how the crate models two
//! machines that perturb an ill-conditioned computation differently.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest precision accepted for [`Extended`]; anything below double is pointless.
pub const MIN_EXTENDED_BITS: usize = 64;

/// Default extended precision in bits.
pub const DEFAULT_EXTENDED_BITS: usize = 128;

/// A real scalar usable by every algorithm in the crate.
///
/// Constants are produced with [`Real::lift`], which creates a value at the
/// precision of `self`; fresh values without a template come from an
/// [`Arithmetic`] context.
// `from_*` methods take `self` because the receiver fixes the precision of the result.
#[allow(clippy::wrong_self_convention)]
pub trait Real:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    /// `v` rounded to the precision of `self`.
    fn lift(&self, v: f64) -> Self;
    /// Significand bits of `self`.
    fn bits(&self) -> usize;
    /// Machine epsilon `2^(1-bits)` at the precision of `self`.
    fn epsilon(&self) -> Self;
    fn pi(&self) -> Self;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn atan(&self) -> Self;
    fn exp(&self) -> Self;

    fn to_f64(&self) -> f64;
    /// Exact conversion into an extended value carrying at least the same bits.
    fn to_big(&self) -> BigReal;
    /// `v` rounded to the precision of `self`.
    fn from_big(&self, v: &BigReal) -> Self;
    fn is_finite(&self) -> bool;

    fn is_zero(&self) -> bool {
        *self == self.lift(0.0)
    }

    fn zero(&self) -> Self {
        self.lift(0.0)
    }

    fn one(&self) -> Self {
        self.lift(1.0)
    }

    fn from_i64(&self, v: i64) -> Self {
        let hi = (v >> 26) as f64 * 67_108_864.0;
        let lo = (v & 0x3ff_ffff) as f64;
        self.lift(hi) + self.lift(lo)
    }

    fn ratio(&self, num: i64, den: i64) -> Self {
        self.from_i64(num) / self.from_i64(den)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = self.one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base.clone();
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Factory for values of one concrete precision.
#[allow(clippy::wrong_self_convention)]
pub trait Arithmetic: Copy + fmt::Debug + Send + Sync + 'static {
    type Real: Real;

    fn from_f64(&self, v: f64) -> Self::Real;
    fn bits(&self) -> usize;
    /// Parses a decimal literal at this precision.
    fn parse(&self, s: &str) -> Option<Self::Real>;
    /// Rounds a value of any precision into this one.
    fn convert<R: Real>(&self, v: &R) -> Self::Real;
    /// Short human label, e.g. `double` or `extended(128)`.
    fn label(&self) -> String;

    fn zero(&self) -> Self::Real {
        self.from_f64(0.0)
    }

    fn one(&self) -> Self::Real {
        self.from_f64(1.0)
    }

    fn ratio(&self, num: i64, den: i64) -> Self::Real {
        self.zero().ratio(num, den)
    }

    fn pi(&self) -> Self::Real {
        self.zero().pi()
    }

    fn epsilon(&self) -> Self::Real {
        self.zero().epsilon()
    }
}

/// IEEE double precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Double;

impl Arithmetic for Double {
    type Real = f64;

    fn from_f64(&self, v: f64) -> f64 {
        v
    }

    fn bits(&self) -> usize {
        53
    }

    fn parse(&self, s: &str) -> Option<f64> {
        s.trim().parse().ok()
    }

    fn convert<R: Real>(&self, v: &R) -> f64 {
        v.to_f64()
    }

    fn label(&self) -> String {
        String::from("double")
    }
}

impl Real for f64 {
    fn lift(&self, v: f64) -> f64 {
        v
    }

    fn bits(&self) -> usize {
        53
    }

    fn epsilon(&self) -> f64 {
        f64::EPSILON
    }

    fn pi(&self) -> f64 {
        core::f64::consts::PI
    }

    fn abs(&self) -> f64 {
        libm::fabs(*self)
    }

    fn sqrt(&self) -> f64 {
        libm::sqrt(*self)
    }

    fn sin(&self) -> f64 {
        libm::sin(*self)
    }

    fn cos(&self) -> f64 {
        libm::cos(*self)
    }

    fn tan(&self) -> f64 {
        libm::tan(*self)
    }

    fn atan(&self) -> f64 {
        libm::atan(*self)
    }

    fn exp(&self) -> f64 {
        libm::exp(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn to_big(&self) -> BigReal {
        BigReal::from_f64(*self, MIN_EXTENDED_BITS)
    }

    fn from_big(&self, v: &BigReal) -> f64 {
        v.to_f64()
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }

    fn from_i64(&self, v: i64) -> f64 {
        v as f64
    }
}

/// Binary floating point with a caller-chosen significand length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Extended {
    bits: usize,
}

impl Extended {
    pub fn new(bits: usize) -> Self {
        Extended {
            bits: bits.max(MIN_EXTENDED_BITS),
        }
    }
}

impl Default for Extended {
    fn default() -> Self {
        Extended::new(DEFAULT_EXTENDED_BITS)
    }
}

impl Arithmetic for Extended {
    type Real = BigReal;

    fn from_f64(&self, v: f64) -> BigReal {
        BigReal::from_f64(v, self.bits)
    }

    fn bits(&self) -> usize {
        self.bits
    }

    fn parse(&self, s: &str) -> Option<BigReal> {
        let mut cc = consts();
        let v = BigFloat::parse(s.trim(), Radix::Dec, self.bits, RM, &mut cc);
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(BigReal { v, bits: self.bits })
        }
    }

    fn convert<R: Real>(&self, v: &R) -> BigReal {
        v.to_big().with_bits(self.bits)
    }

    fn label(&self) -> String {
        alloc::format!("extended({})", self.bits)
    }
}

fn consts() -> Consts {
    Consts::new().expect("allocating the constants cache")
}

/// Extended-precision real backed by `astro-float`.
///
/// The precision travels with the value; a binary operation rounds to the
/// larger precision of its operands.
#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    bits: usize,
}

impl BigReal {
    pub fn from_f64(v: f64, bits: usize) -> Self {
        BigReal {
            v: BigFloat::from_f64(v, bits),
            bits,
        }
    }

    /// Same value rounded (or widened) to `bits`.
    pub fn with_bits(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        if !v.is_zero() && !v.is_nan() && !v.is_inf() {
            v.set_precision(bits, RM).expect("setting precision");
        }
        BigReal { v, bits }
    }

    pub fn as_bigfloat(&self) -> &BigFloat {
        &self.v
    }

    fn wrap(v: BigFloat, bits: usize) -> Self {
        BigReal { v, bits }
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.v.is_nan() {
            return String::from("NaN");
        }
        if self.v.is_inf() {
            return String::from(if self.v.is_negative() { "-inf" } else { "inf" });
        }
        if self.v.is_zero() {
            return String::from("0");
        }
        let mut cc = consts();
        let (sign, mantissa, exp) = match self.v.convert_to_radix(Radix::Dec, RM, &mut cc) {
            Ok(parts) => parts,
            Err(_) => return alloc::format!("{:e}", self.to_f64()),
        };
        // mantissa holds the digits of 0.d1d2d3... × 10^exp
        let mut d: Vec<u8> = mantissa.into_iter().take(digits.max(1) + 1).collect();
        while d.len() < digits.max(1) + 1 {
            d.push(0);
        }
        let mut exp = exp as i64 - 1;
        let round_up = d.pop().unwrap_or(0) >= 5;
        if round_up {
            let mut i = d.len();
            loop {
                if i == 0 {
                    d.insert(0, 1);
                    d.pop();
                    exp += 1;
                    break;
                }
                i -= 1;
                if d[i] == 9 {
                    d[i] = 0;
                } else {
                    d[i] += 1;
                    break;
                }
            }
        }
        while d.len() > 1 && *d.last().unwrap() == 0 {
            d.pop();
        }
        let mut out = String::new();
        if sign == Sign::Neg {
            out.push('-');
        }
        out.push((b'0' + d[0]) as char);
        if d.len() > 1 {
            out.push('.');
            for &x in &d[1..] {
                out.push((b'0' + x) as char);
            }
        }
        out.push('e');
        out.push_str(&alloc::format!("{exp}"));
        out
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BigReal({}, {} bits)",
            self.to_decimal(self.decimal_digits()),
            self.bits
        )
    }
}

impl BigReal {
    /// Number of decimal digits that round-trip this precision.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * core::f64::consts::LOG10_2) as usize + 2
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .map(|p| p + 1)
            .unwrap_or_else(|| self.decimal_digits());
        f.write_str(&self.to_decimal(digits))
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! big_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign:ident, $op:ident) => {
        impl $tr for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                let bits = self.bits.max(rhs.bits);
                BigReal::wrap(self.v.$op(&rhs.v, bits, RM), bits)
            }
        }

        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let bits = self.bits.max(rhs.bits);
                BigReal::wrap(self.v.$op(&rhs.v, bits, RM), bits)
            }
        }

        impl $assign_tr for BigReal {
            fn $assign(&mut self, rhs: BigReal) {
                let bits = self.bits.max(rhs.bits);
                self.v = self.v.$op(&rhs.v, bits, RM);
                self.bits = bits;
            }
        }
    };
}

big_binop!(Add, add, AddAssign, add_assign, add);
big_binop!(Sub, sub, SubAssign, sub_assign, sub);
big_binop!(Mul, mul, MulAssign, mul_assign, mul);
big_binop!(Div, div, DivAssign, div_assign, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(self.v.neg(), self.bits)
    }
}

impl Real for BigReal {
    fn lift(&self, v: f64) -> Self {
        BigReal::from_f64(v, self.bits)
    }

    fn bits(&self) -> usize {
        self.bits
    }

    fn epsilon(&self) -> Self {
        // 2^(1-bits), built by repeated halving of an exact power of two
        let mut e = self.lift(1.0);
        let mut remaining = self.bits - 1;
        while remaining >= 60 {
            e *= self.lift(libm::ldexp(1.0, -60));
            remaining -= 60;
        }
        e * self.lift(libm::ldexp(1.0, -(remaining as i32)))
    }

    fn pi(&self) -> Self {
        let mut cc = consts();
        BigReal::wrap(cc.pi(self.bits, RM), self.bits)
    }

    fn abs(&self) -> Self {
        BigReal::wrap(self.v.abs(), self.bits)
    }

    fn sqrt(&self) -> Self {
        BigReal::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    fn sin(&self) -> Self {
        BigReal::wrap(self.v.sin(self.bits, RM, &mut consts()), self.bits)
    }

    fn cos(&self) -> Self {
        BigReal::wrap(self.v.cos(self.bits, RM, &mut consts()), self.bits)
    }

    fn tan(&self) -> Self {
        BigReal::wrap(self.v.tan(self.bits, RM, &mut consts()), self.bits)
    }

    fn atan(&self) -> Self {
        BigReal::wrap(self.v.atan(self.bits, RM, &mut consts()), self.bits)
    }

    fn exp(&self) -> Self {
        BigReal::wrap(self.v.exp(self.bits, RM, &mut consts()), self.bits)
    }

    fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        match self.v.as_raw_parts() {
            Some((words, _, sign, exp, _)) => {
                // top 64 mantissa bits; words are 32 or 64 bits wide depending on the target
                let mut iter = words.iter().rev();
                let mut top = 0u64;
                let mut filled = 0;
                while filled < 64 {
                    #[allow(clippy::useless_conversion)]
                    let w = iter.next().map_or(0, |&w| u64::from(w));
                    top = top.checked_shl(WORD_BIT_SIZE as u32).unwrap_or(0) | w;
                    filled += WORD_BIT_SIZE;
                }
                if top == 0 {
                    return 0.0;
                }
                // fold the remaining words into a sticky bit so the u64 -> f64
                // conversion rounds correctly
                let sticky = iter.any(|&w| w != 0) as u64;
                let m = (top | sticky) as f64;
                let v = libm::ldexp(m, exp - 64);
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            None => 0.0,
        }
    }

    fn to_big(&self) -> BigReal {
        self.clone()
    }

    fn from_big(&self, v: &BigReal) -> Self {
        v.with_bits(self.bits)
    }

    fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    fn from_i64(&self, v: i64) -> Self {
        BigReal::wrap(BigFloat::from_i64(v, self.bits.max(64)), self.bits)
    }

    fn powi(&self, n: u32) -> Self {
        BigReal::wrap(self.v.powi(n as usize, self.bits, RM), self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn double_context_is_identity() {
        let d = Double;
        assert_eq!(d.from_f64(0.25), 0.25);
        assert_eq!(d.ratio(1, 4), 0.25);
        assert_eq!(d.epsilon(), f64::EPSILON);
        assert_eq!(d.parse(" 1.5e-3 "), Some(1.5e-3));
    }

    #[test]
    fn extended_round_trips_through_f64() {
        let x = Extended::new(128);
        for v in [1.0, -3.0, 0.1, 1e-300, 6.02e23, -2.5e-7] {
            assert_eq!(x.from_f64(v).to_f64(), v);
        }
        assert_eq!(x.zero().to_f64(), 0.0);
    }

    #[test]
    fn extended_epsilon_matches_bits() {
        let x = Extended::new(128);
        let eps = x.epsilon();
        assert_eq!(eps.to_f64(), libm::ldexp(1.0, -127));
        let one = x.one();
        assert!(one.clone() + eps.clone() > one);
        let half = eps / x.from_f64(2.0);
        // ties-to-even: 1 + eps/2 rounds back to 1
        assert!(one.clone() + half == one);
    }

    #[test]
    fn extended_third_is_more_accurate_than_double() {
        let x = Extended::new(256);
        let third = x.ratio(1, 3);
        let back = third * x.from_f64(3.0) - x.one();
        assert!(back.abs().to_f64() < 1e-70);
    }

    #[test]
    fn precision_widens_in_mixed_operations() {
        let a = BigReal::from_f64(1.0, 64);
        let b = BigReal::from_f64(3.0, 256);
        assert_eq!((a / b).bits(), 256);
    }

    #[test]
    fn transcendental_values() {
        let x = Extended::new(192);
        let q = x.pi() / x.from_f64(4.0);
        let s = q.sin();
        let c = q.cos();
        assert!((s.clone() - c).abs().to_f64() < 1e-55);
        assert!((q.tan() - x.one()).abs().to_f64() < 1e-55);
        assert!((x.one().atan() * x.from_f64(4.0) - x.pi()).abs().to_f64() < 1e-55);
        assert!(
            (x.from_f64(2.0).sqrt().powi(2) - x.from_f64(2.0))
                .abs()
                .to_f64()
                < 1e-55
        );
    }

    #[test]
    fn decimal_formatting_and_parsing() {
        let x = Extended::new(128);
        let v = x.ratio(-1, 3);
        assert_eq!(v.to_decimal(5), "-3.3333e-1");
        let back = x.parse(&v.to_string()).unwrap();
        assert!((back - v).abs() < x.epsilon());
        assert_eq!(x.from_f64(9.9999).to_decimal(3), "1e1");
        assert_eq!(x.zero().to_decimal(4), "0");
    }

    #[test]
    fn from_i64_is_exact_for_large_values() {
        let x = Extended::new(128);
        let big = (1i64 << 60) + 7;
        let v = x.zero().from_i64(big);
        let back = v - x.zero().from_i64(1i64 << 60);
        assert_eq!(back.to_f64(), 7.0);
        assert_eq!(Double.zero().from_i64(-12), -12.0);
    }
}
