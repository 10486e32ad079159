//! Catalog of target functions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Real;
use crate::error::{Error, Result};
use crate::poly::{ChebyshevSeries, MonomialPoly};
use crate::rational::{Parity, Segment};

/// A real function to approximate.
pub trait Target<R: Real>: Sync {
    fn value(&self, x: &R) -> R;

    /// `f(x)/x`, used by the odd shape. The default has no value at `0`.
    fn value_over_x(&self, x: &R) -> R {
        if x.is_zero() {
            x.lift(f64::NAN)
        } else {
            self.value(x) / x
        }
    }
}

impl<R: Real, F: Fn(&R) -> R + Sync> Target<R> for F {
    fn value(&self, x: &R) -> R {
        self(x)
    }
}

/// A Chebyshev series is its own partial sum on `[-1, 1]`.
impl<R: Real> Target<R> for ChebyshevSeries<R> {
    fn value(&self, x: &R) -> R {
        self.eval(x).unwrap_or_else(|_| x.lift(f64::NAN))
    }
}

/// Functions shipped with the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FunctionId {
    /// `cos(πx/4)` on `[-1, 1]`
    CosPi4,
    /// `sin(πx/4)` on `[-1, 1]`
    SinPi4,
    /// `sin(πx/2)` on `[-1, 1]`
    SinPi2,
    /// `tan(πx/4)` on `[-1, 1]`
    TanPi4,
    /// `arctan x` on `[-1, 1]`
    Arctan,
    /// `e^x` on `[-1, 1]`
    Exp,
    /// `√x` on `[1/2, 1]`
    Sqrt,
    /// `1`
    ConstOne,
}

/// Metadata for one catalog function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalogEntry {
    pub id: FunctionId,
    pub name: &'static str,
    pub description: &'static str,
    pub segment: Segment,
    pub parity: Parity,
    pub has_taylor: bool,
}

impl FunctionId {
    pub const ALL: [FunctionId; 8] = [
        FunctionId::CosPi4,
        FunctionId::SinPi4,
        FunctionId::SinPi2,
        FunctionId::TanPi4,
        FunctionId::Arctan,
        FunctionId::Exp,
        FunctionId::Sqrt,
        FunctionId::ConstOne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::CosPi4 => "cos_pi4",
            FunctionId::SinPi4 => "sin_pi4",
            FunctionId::SinPi2 => "sin_pi2",
            FunctionId::TanPi4 => "tan_pi4",
            FunctionId::Arctan => "arctan",
            FunctionId::Exp => "exp",
            FunctionId::Sqrt => "sqrt",
            FunctionId::ConstOne => "const_one",
        }
    }

    pub fn entry(self) -> CatalogEntry {
        let (description, segment, parity, has_taylor) = match self {
            FunctionId::CosPi4 => ("cos(pi/4 x)", Segment::UNIT, Parity::Even, true),
            FunctionId::SinPi4 => ("sin(pi/4 x)", Segment::UNIT, Parity::Odd, true),
            FunctionId::SinPi2 => ("sin(pi/2 x)", Segment::UNIT, Parity::Odd, true),
            FunctionId::TanPi4 => ("tan(pi/4 x)", Segment::UNIT, Parity::Odd, true),
            FunctionId::Arctan => ("arctan x", Segment::UNIT, Parity::Odd, true),
            FunctionId::Exp => ("exp x", Segment::UNIT, Parity::General, true),
            FunctionId::Sqrt => ("sqrt x", Segment { a: 0.5, b: 1.0 }, Parity::General, false),
            FunctionId::ConstOne => ("1", Segment::UNIT, Parity::Even, true),
        };
        CatalogEntry {
            id: self,
            name: self.name(),
            description,
            segment,
            parity,
            has_taylor,
        }
    }

    /// Angular factor `k` of `sin(kx)`, `cos(kx)`, `tan(kx)` entries.
    fn angle<R: Real>(self, unit: &R) -> Option<R> {
        match self {
            FunctionId::CosPi4 | FunctionId::SinPi4 | FunctionId::TanPi4 => {
                Some(unit.pi() / unit.lift(4.0))
            }
            FunctionId::SinPi2 => Some(unit.pi() / unit.lift(2.0)),
            _ => None,
        }
    }

    pub fn eval<R: Real>(self, x: &R) -> R {
        match self {
            FunctionId::CosPi4 => (self.angle(x).unwrap() * x).cos(),
            FunctionId::SinPi4 | FunctionId::SinPi2 => (self.angle(x).unwrap() * x).sin(),
            FunctionId::TanPi4 => (self.angle(x).unwrap() * x).tan(),
            FunctionId::Arctan => x.atan(),
            FunctionId::Exp => x.exp(),
            FunctionId::Sqrt => {
                if *x < x.zero() {
                    x.lift(f64::NAN)
                } else {
                    x.sqrt()
                }
            }
            FunctionId::ConstOne => x.one(),
        }
    }

    /// `lim_{x→0} f(x)/x` for odd entries.
    pub fn div_x_limit<R: Real>(self, unit: &R) -> Option<R> {
        match self {
            FunctionId::SinPi4 | FunctionId::SinPi2 | FunctionId::TanPi4 => self.angle(unit),
            FunctionId::Arctan => Some(unit.one()),
            _ => None,
        }
    }

    /// First `n + 1` Taylor coefficients `f^{(k)}(0)/k!` at the precision of `unit`.
    pub fn taylor_coeffs<R: Real>(self, n: usize, unit: &R) -> Result<MonomialPoly<R>> {
        let zero = unit.zero();
        let mut c: Vec<R> = alloc::vec![zero.clone(); n + 1];
        match self {
            FunctionId::Sqrt => return Err(Error::NoTaylorProvider(String::from(self.name()))),
            FunctionId::ConstOne => c[0] = unit.one(),
            FunctionId::Exp => {
                let mut term = unit.one();
                for (k, ck) in c.iter_mut().enumerate() {
                    if k > 0 {
                        term /= unit.from_i64(k as i64);
                    }
                    *ck = term.clone();
                }
            }
            FunctionId::Arctan => {
                for k in (1..=n).step_by(2) {
                    let v = unit.ratio(1, k as i64);
                    c[k] = if (k / 2) % 2 == 0 { v } else { -v };
                }
            }
            FunctionId::CosPi4 | FunctionId::SinPi4 | FunctionId::SinPi2 => {
                // a^k / k! with the sign pattern of cos or sin
                let a = self.angle(unit).unwrap();
                let odd = self != FunctionId::CosPi4;
                let mut term = unit.one();
                for (k, ck) in c.iter_mut().enumerate() {
                    if k > 0 {
                        term = term * &a / unit.from_i64(k as i64);
                    }
                    if (k % 2 == 1) == odd {
                        *ck = if (k / 2) % 2 == 1 {
                            -term.clone()
                        } else {
                            term.clone()
                        };
                    }
                }
            }
            FunctionId::TanPi4 => {
                // tan' = 1 + tan², so (k+1) t_{k+1} = [k = 0] + Σ_{i} t_i t_{k-i}
                let mut t: Vec<R> = alloc::vec![zero.clone(); n + 1];
                for k in 0..n {
                    let mut s = if k == 0 { unit.one() } else { zero.clone() };
                    for i in 0..=k {
                        if !t[i].is_zero() && !t[k - i].is_zero() {
                            s += t[i].clone() * &t[k - i];
                        }
                    }
                    t[k + 1] = s / unit.from_i64(k as i64 + 1);
                }
                let a = self.angle(unit).unwrap();
                let mut pow = unit.one();
                for k in 0..=n {
                    if k > 0 {
                        pow = pow * &a;
                    }
                    c[k] = t[k].clone() * &pow;
                }
            }
        }
        Ok(MonomialPoly::new(c))
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<R: Real> Target<R> for FunctionId {
    fn value(&self, x: &R) -> R {
        self.eval(x)
    }

    fn value_over_x(&self, x: &R) -> R {
        if x.is_zero() {
            self.div_x_limit(x).unwrap_or_else(|| x.lift(f64::NAN))
        } else {
            self.eval(x) / x
        }
    }
}

/// Looks up a catalog entry by its CLI name.
pub fn lookup(name: &str) -> Result<CatalogEntry> {
    FunctionId::ALL
        .iter()
        .find(|id| id.name() == name)
        .map(|id| id.entry())
        .ok_or_else(|| Error::UnknownFunction {
            name: String::from(name),
            available: FunctionId::ALL
                .iter()
                .map(|id| id.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}
