//! Rational approximants `P/Q` and the exact error identities between two of them.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{BigReal, Real};
use crate::error::{Error, Result};
use crate::poly::{cheb_to_monomial, clenshaw, horner, ChebyshevSeries, MonomialPoly};

/// Basis of the numerator and denominator coefficient vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `Σ a_i x^i`
    Monomial,
    /// `Σ' a_i T_i(x)`, leading coefficient halved
    Chebyshev,
}

/// Shape of the approximant in the variable `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Parity {
    /// `P(x) / Q(x)`
    #[default]
    General,
    /// `P(x²) / Q(x²)`
    Even,
    /// `x · P(x²) / Q(x²)`
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::General => "general",
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Monomial => "monomial",
            Basis::Chebyshev => "chebyshev",
        })
    }
}

/// Closed interval `[a, b]`, affinely mapped onto `[-1, 1]` for construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
}

impl Segment {
    pub const UNIT: Segment = Segment { a: -1.0, b: 1.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInput(alloc::format!(
                "segment [{a}, {b}] is empty or not finite"
            )));
        }
        Ok(Segment { a, b })
    }

    pub fn is_unit(&self) -> bool {
        self.a == -1.0 && self.b == 1.0
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    /// `x ↦ (2x - a - b) / (b - a)`.
    pub fn to_unit<R: Real>(&self, x: &R) -> R {
        if self.is_unit() {
            return x.clone();
        }
        let a = x.lift(self.a);
        let b = x.lift(self.b);
        (x.lift(2.0) * x - &a - &b) / (b - a)
    }

    /// Inverse of [`Segment::to_unit`].
    pub fn from_unit<R: Real>(&self, t: &R) -> R {
        if self.is_unit() {
            return t.clone();
        }
        let a = t.lift(self.a);
        let b = t.lift(self.b);
        (a.clone() + &b + (b - a) * t) / t.lift(2.0)
    }

    /// `count` equally spaced points including both ends.
    pub fn grid(&self, count: usize) -> Vec<f64> {
        match count {
            0 => Vec::new(),
            1 => vec![0.5 * (self.a + self.b)],
            _ => (0..count)
                .map(|i| {
                    if i + 1 == count {
                        self.b
                    } else {
                        self.a + self.width() * i as f64 / (count - 1) as f64
                    }
                })
                .collect(),
        }
    }
}

impl Default for Segment {
    fn default() -> Self {
        Segment::UNIT
    }
}

/// Linear normalization `Σ λ_i a_i + Σ μ_j b_j = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormalizationCondition<R> {
    /// `b_0 = 1`
    B0,
    /// `b_m = 1`
    BM,
    /// `a_n = 1`
    AN,
    Custom {
        lambda: Vec<R>,
        mu: Vec<R>,
    },
}

impl<R: Real> NormalizationCondition<R> {
    /// Expands to explicit `(λ, μ)` of lengths `n + 1` and `m + 1`.
    pub fn expand(&self, n: usize, m: usize, unit: &R) -> Result<(Vec<R>, Vec<R>)> {
        let mut lambda = vec![unit.zero(); n + 1];
        let mut mu = vec![unit.zero(); m + 1];
        match self {
            NormalizationCondition::B0 => mu[0] = unit.one(),
            NormalizationCondition::BM => mu[m] = unit.one(),
            NormalizationCondition::AN => lambda[n] = unit.one(),
            NormalizationCondition::Custom { lambda: l, mu: u } => {
                if l.len() != n + 1 || u.len() != m + 1 {
                    return Err(Error::InvalidInput(alloc::format!(
                        "normalization vectors have lengths ({}, {}), expected ({}, {})",
                        l.len(),
                        u.len(),
                        n + 1,
                        m + 1
                    )));
                }
                if l.iter().chain(u.iter()).all(|v| v.is_zero()) {
                    return Err(Error::InvalidInput(
                        "normalization condition is identically zero".into(),
                    ));
                }
                lambda = l.clone();
                mu = u.clone();
            }
        }
        Ok((lambda, mu))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            NormalizationCondition::B0 => "b0",
            NormalizationCondition::BM => "bm",
            NormalizationCondition::AN => "an",
            NormalizationCondition::Custom { .. } => "custom",
        }
    }

    /// `Σ λ_i a_i + Σ μ_j b_j`.
    pub fn apply(&self, numer: &[R], denom: &[R]) -> Result<R> {
        let unit = numer
            .first()
            .or(denom.first())
            .ok_or(Error::EmptyPolynomial)?;
        let n = numer.len().checked_sub(1).ok_or(Error::EmptyPolynomial)?;
        let m = denom.len().checked_sub(1).ok_or(Error::EmptyPolynomial)?;
        let (lambda, mu) = self.expand(n, m, unit)?;
        let mut acc = unit.zero();
        for (l, a) in lambda.iter().zip(numer).chain(mu.iter().zip(denom)) {
            acc += l.clone() * a;
        }
        Ok(acc)
    }
}

/// A rational function in one of the supported shapes.
///
/// Coefficients refer to the variable `t ∈ [-1, 1]`; [`RationalApproximant::evaluate`]
/// maps `x ∈ [a, b]` onto `t` first.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalApproximant<R> {
    numer: Vec<R>,
    denom: Vec<R>,
    basis: Basis,
    parity: Parity,
    segment: Segment,
}

impl<R: Real> RationalApproximant<R> {
    pub fn new(
        numer: Vec<R>,
        denom: Vec<R>,
        basis: Basis,
        parity: Parity,
        segment: Segment,
    ) -> Result<Self> {
        if numer.is_empty() || denom.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        if denom.iter().all(|b| b.is_zero()) {
            return Err(Error::InvalidInput("denominator is the zero vector".into()));
        }
        if basis == Basis::Chebyshev && parity != Parity::General {
            return Err(Error::InvalidInput(
                "Chebyshev-basis approximants carry their parity in the coefficients".into(),
            ));
        }
        Ok(RationalApproximant {
            numer,
            denom,
            basis,
            parity,
            segment,
        })
    }

    /// Plain monomial `P(x)/Q(x)` on `[-1, 1]`.
    pub fn monomial(numer: Vec<R>, denom: Vec<R>) -> Result<Self> {
        Self::new(
            numer,
            denom,
            Basis::Monomial,
            Parity::General,
            Segment::UNIT,
        )
    }

    pub fn numer(&self) -> &[R] {
        &self.numer
    }

    pub fn denom(&self) -> &[R] {
        &self.denom
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn segment(&self) -> Segment {
        self.segment
    }

    /// `n`: index of the last numerator coefficient.
    pub fn n(&self) -> usize {
        self.numer.len() - 1
    }

    /// `m`: index of the last denominator coefficient.
    pub fn m(&self) -> usize {
        self.denom.len() - 1
    }

    fn poly_value(&self, coeffs: &[R], u: &R) -> Result<R> {
        match self.basis {
            Basis::Monomial => horner(coeffs, u),
            Basis::Chebyshev => {
                let mut d = coeffs.to_vec();
                d[0] = d[0].clone() / d[0].lift(2.0);
                clenshaw(&d, u)
            }
        }
    }

    /// Numerator and denominator values at a point `t` of `[-1, 1]`.
    /// For the odd shape the leading factor `t` is part of the numerator.
    pub fn parts_unit(&self, t: &R) -> Result<(R, R)> {
        match self.parity {
            Parity::General => Ok((
                self.poly_value(&self.numer, t)?,
                self.poly_value(&self.denom, t)?,
            )),
            Parity::Even | Parity::Odd => {
                let u = t.clone() * t;
                let mut p = self.poly_value(&self.numer, &u)?;
                let q = self.poly_value(&self.denom, &u)?;
                if self.parity == Parity::Odd {
                    p = p * t;
                }
                Ok((p, q))
            }
        }
    }

    /// `(P(x), Q(x))` at a point of the segment.
    pub fn parts(&self, x: &R) -> Result<(R, R)> {
        self.parts_unit(&self.segment.to_unit(x))
    }

    /// `P(x) / Q(x)`; fails only when `Q(x)` is exactly zero in the active arithmetic.
    pub fn evaluate(&self, x: &R) -> Result<R> {
        let (p, q) = self.parts(x)?;
        if q.is_zero() {
            return Err(Error::DenominatorZero { x: x.to_f64() });
        }
        Ok(p / q)
    }

    /// Equivalent approximant in monomial basis with general parity.
    pub fn to_plain_form(&self) -> Self {
        let (numer, denom) = match self.basis {
            Basis::Monomial => (self.numer.clone(), self.denom.clone()),
            Basis::Chebyshev => (
                cheb_to_monomial(&ChebyshevSeries::new(self.numer.clone(), true)).into_coeffs(),
                cheb_to_monomial(&ChebyshevSeries::new(self.denom.clone(), true)).into_coeffs(),
            ),
        };
        let spread = |c: &[R], shift: usize| -> Vec<R> {
            let zero = c[0].zero();
            let mut out = vec![zero; 2 * (c.len() - 1) + 1 + shift];
            for (i, v) in c.iter().enumerate() {
                out[2 * i + shift] = v.clone();
            }
            out
        };
        let (numer, denom) = match self.parity {
            Parity::General => (numer, denom),
            Parity::Even => (spread(&numer, 0), spread(&denom, 0)),
            Parity::Odd => (spread(&numer, 1), spread(&denom, 0)),
        };
        RationalApproximant {
            numer,
            denom,
            basis: Basis::Monomial,
            parity: Parity::General,
            segment: self.segment,
        }
    }

    /// Numerator and denominator both multiplied by `k`.
    pub fn scaled(&self, k: &R) -> Self {
        let mut out = self.clone();
        for c in out.numer.iter_mut().chain(out.denom.iter_mut()) {
            *c = c.clone() * k;
        }
        out
    }

    /// Coefficients rounded into another precision.
    pub fn convert<A: crate::arith::Arithmetic>(&self, ctx: &A) -> RationalApproximant<A::Real> {
        RationalApproximant {
            numer: self.numer.iter().map(|c| ctx.convert(c)).collect(),
            denom: self.denom.iter().map(|c| ctx.convert(c)).collect(),
            basis: self.basis,
            parity: self.parity,
            segment: self.segment,
        }
    }

    /// Same shape with replaced coefficient vectors.
    pub fn with_coeffs(&self, numer: Vec<R>, denom: Vec<R>) -> Result<Self> {
        Self::new(numer, denom, self.basis, self.parity, self.segment)
    }
}

const IDENTITY_GUARD_BITS: usize = 128;

fn widen_poly<R: Real>(p: &MonomialPoly<R>) -> MonomialPoly<BigReal> {
    MonomialPoly::new(
        p.coeffs()
            .iter()
            .map(|c| c.to_big().with_bits(c.bits() + IDENTITY_GUARD_BITS))
            .collect(),
    )
}

fn widen_all<R: Real>(
    polys: [&MonomialPoly<R>; 4],
    x: &R,
) -> ([MonomialPoly<BigReal>; 4], BigReal) {
    (
        polys.map(widen_poly),
        x.to_big().with_bits(x.bits() + IDENTITY_GUARD_BITS),
    )
}

/// Both sides of `(P+ΔP)/(Q+ΔQ) − P/Q = (ΔQ/(Q+ΔQ))(ΔP/ΔQ − P/Q)` at `x`.
///
/// Both sides cancel when `ΔP/ΔQ ≈ P/Q`, so they are evaluated with guard bits
/// and each rounded once.
pub fn error_identity<R: Real>(
    p: &MonomialPoly<R>,
    q: &MonomialPoly<R>,
    dp: &MonomialPoly<R>,
    dq: &MonomialPoly<R>,
    x: &R,
) -> Result<(R, R)> {
    let ([p, q, dp, dq], xw) = widen_all([p, q, dp, dq], x);
    let (lhs, rhs) = error_identity_raw(&p, &q, &dp, &dq, &xw)?;
    Ok((x.from_big(&lhs), x.from_big(&rhs)))
}

fn error_identity_raw(
    p: &MonomialPoly<BigReal>,
    q: &MonomialPoly<BigReal>,
    dp: &MonomialPoly<BigReal>,
    dq: &MonomialPoly<BigReal>,
    x: &BigReal,
) -> Result<(BigReal, BigReal)> {
    let (pv, qv, dpv, dqv) = (p.eval(x)?, q.eval(x)?, dp.eval(x)?, dq.eval(x)?);
    let qt = qv.clone() + &dqv;
    if qv.is_zero() || qt.is_zero() {
        return Err(Error::DenominatorZero { x: x.to_f64() });
    }
    let r = pv.clone() / &qv;
    let lhs = (pv + &dpv) / &qt - &r;
    if dqv.is_zero() {
        if dpv.is_zero() {
            let zero = lhs.zero();
            return Ok((lhs, zero));
        }
        return Err(Error::DenominatorZero { x: x.to_f64() });
    }
    let rhs = dqv.clone() / &qt * (dpv / dqv - r);
    Ok((lhs, rhs))
}

/// Alternative form `ΔP/Q̃ − (ΔQ/Q̃)(P/Q)` of the same difference, finite even where `ΔQ = 0`.
pub fn error_identity_alt<R: Real>(
    p: &MonomialPoly<R>,
    q: &MonomialPoly<R>,
    dp: &MonomialPoly<R>,
    dq: &MonomialPoly<R>,
    x: &R,
) -> Result<R> {
    let ([p, q, dp, dq], xw) = widen_all([p, q, dp, dq], x);
    let (pv, qv, dpv, dqv) = (p.eval(&xw)?, q.eval(&xw)?, dp.eval(&xw)?, dq.eval(&xw)?);
    let qt = qv.clone() + &dqv;
    if qv.is_zero() || qt.is_zero() {
        return Err(Error::DenominatorZero { x: x.to_f64() });
    }
    Ok(x.from_big(&(dpv / &qt - dqv / qt * (pv / qv))))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn cos_pi4_even() -> RationalApproximant<f64> {
        // linear Padé–Chebyshev coefficients for cos(πx/4), even form, m=2, n=3
        RationalApproximant::new(
            vec![
                0.999_999_999_999_961_0,
                -0.292_531_126_471_621_6,
                0.110_525_658_555_654_9e-1,
                // printed without its minus sign; only the negative value fits cos
                -0.104_948_209_485_008_6e-3,
            ],
            vec![1.0, 0.158_940_110_596_033_7e-1, 0.100_334_191_808_352_9e-3],
            Basis::Monomial,
            Parity::Even,
            Segment::UNIT,
        )
        .unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let one = RationalApproximant::monomial(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(one.evaluate(&0.3).unwrap(), 1.0);
        let id = RationalApproximant::monomial(vec![0.0, 1.0], vec![1.0]).unwrap();
        assert_eq!(id.evaluate(&-0.7).unwrap(), -0.7);
        let r = cos_pi4_even();
        let want = core::f64::consts::FRAC_1_SQRT_2;
        assert!((r.evaluate(&1.0).unwrap() - want).abs() < 1e-13);
    }

    #[test]
    fn denominator_zero_is_reported() {
        let r = RationalApproximant::monomial(vec![1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(r.evaluate(&0.0), Err(Error::DenominatorZero { x: 0.0 }));
        assert!(RationalApproximant::monomial(vec![1.0], vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn parity_forms() {
        let even = RationalApproximant::new(
            vec![1.0, 0.5],
            vec![1.0, 0.25],
            Basis::Monomial,
            Parity::Even,
            Segment::UNIT,
        )
        .unwrap();
        let odd = RationalApproximant::new(
            vec![1.0, 0.5],
            vec![1.0, 0.25],
            Basis::Monomial,
            Parity::Odd,
            Segment::UNIT,
        )
        .unwrap();
        for x in [0.1, 0.5, 0.93] {
            assert_eq!(even.evaluate(&x).unwrap(), even.evaluate(&-x).unwrap());
            assert_eq!(odd.evaluate(&x).unwrap(), -odd.evaluate(&-x).unwrap());
            let want = (1.0 + 0.5 * x * x) / (1.0 + 0.25 * x * x);
            assert!((even.evaluate(&x).unwrap() - want).abs() < 1e-16);
        }
    }

    #[test]
    fn plain_form_examples() {
        let even = RationalApproximant::new(
            vec![2.0, 3.0],
            vec![1.0],
            Basis::Monomial,
            Parity::Even,
            Segment::UNIT,
        )
        .unwrap();
        assert_eq!(even.to_plain_form().numer(), &[2.0, 0.0, 3.0]);
        let odd = RationalApproximant::new(
            vec![4.0],
            vec![2.0],
            Basis::Monomial,
            Parity::Odd,
            Segment::UNIT,
        )
        .unwrap();
        let plain = odd.to_plain_form();
        assert_eq!(plain.numer(), &[0.0, 4.0]);
        assert_eq!(plain.denom(), &[2.0]);
        let cheb = RationalApproximant::new(
            vec![0.0, 1.0],
            vec![2.0],
            Basis::Chebyshev,
            Parity::General,
            Segment::UNIT,
        )
        .unwrap();
        let plain = cheb.to_plain_form();
        assert_eq!(plain.numer(), &[0.0, 1.0]);
        assert_eq!(plain.denom(), &[1.0]);
    }

    #[test]
    fn plain_form_preserves_values() {
        let r = cos_pi4_even();
        let plain = r.to_plain_form();
        for x in Segment::UNIT.grid(2000) {
            let a = r.evaluate(&x).unwrap();
            let b = plain.evaluate(&x).unwrap();
            assert!((a - b).abs() <= 100.0 * f64::EPSILON);
        }
    }

    #[test]
    fn segment_mapping() {
        let s = Segment::new(0.5, 1.0).unwrap();
        assert_eq!(s.to_unit(&0.5), -1.0);
        assert_eq!(s.to_unit(&1.0), 1.0);
        assert_eq!(s.to_unit(&0.75), 0.0);
        assert_eq!(s.from_unit(&0.0), 0.75);
        // R(t) = t on [1/2, 1] means R(x) = 4x - 3
        let r = RationalApproximant::new(
            vec![0.0, 1.0],
            vec![1.0],
            Basis::Monomial,
            Parity::General,
            s,
        )
        .unwrap();
        assert_eq!(r.evaluate(&0.875).unwrap(), 0.5);
        assert!(Segment::new(1.0, 1.0).is_err());
        let g = Segment::UNIT.grid(2000);
        assert_eq!(g.len(), 2000);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[1999], 1.0);
    }

    #[test]
    fn scaling_leaves_values_unchanged() {
        let r = cos_pi4_even();
        let s = r.scaled(&-37.25);
        for x in [-1.0, -0.3, 0.0, 0.6, 1.0] {
            let a = r.evaluate(&x).unwrap();
            let b = s.evaluate(&x).unwrap();
            assert!((a - b).abs() <= 4.0 * f64::EPSILON);
        }
    }

    #[test]
    fn normalization_tags_expand() {
        let (l, u) = NormalizationCondition::<f64>::B0
            .expand(3, 2, &1.0)
            .unwrap();
        assert_eq!(l, vec![0.0; 4]);
        assert_eq!(u, vec![1.0, 0.0, 0.0]);
        let (l, u) = NormalizationCondition::<f64>::AN
            .expand(3, 2, &1.0)
            .unwrap();
        assert_eq!(l, vec![0.0, 0.0, 0.0, 1.0]);
        assert_eq!(u, vec![0.0; 3]);
        let (_, u) = NormalizationCondition::<f64>::BM
            .expand(3, 2, &1.0)
            .unwrap();
        assert_eq!(u, vec![0.0, 0.0, 1.0]);
        let zero = NormalizationCondition::Custom {
            lambda: vec![0.0; 4],
            mu: vec![0.0; 3],
        };
        assert!(zero.expand(3, 2, &1.0).is_err());
        let bad = NormalizationCondition::Custom {
            lambda: vec![1.0],
            mu: vec![0.0; 3],
        };
        assert!(bad.expand(3, 2, &1.0).is_err());
        assert_eq!(
            NormalizationCondition::<f64>::B0
                .apply(&[3.0, 1.0], &[2.0, 5.0])
                .unwrap(),
            2.0
        );
    }

    #[test]
    fn error_identity_trivial_case() {
        let p = MonomialPoly::new(vec![1.0, 2.0]);
        let q = MonomialPoly::new(vec![3.0, 1.0]);
        let z = MonomialPoly::new(vec![0.0]);
        let (lhs, rhs) = error_identity(&p, &q, &z, &z, &0.4).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }

    #[test]
    fn error_identity_integer_instance() {
        let p = MonomialPoly::new(vec![3.0, -2.0, 5.0, 1.0]);
        let q = MonomialPoly::new(vec![4.0, 1.0, -2.0]);
        let dp = MonomialPoly::new(vec![-1.0, 4.0, 2.0, -3.0]);
        let dq = MonomialPoly::new(vec![2.0, -5.0, 1.0]);
        let x = 0.37;
        let (lhs, rhs) = error_identity(&p, &q, &dp, &dq, &x).unwrap();
        assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs());
        let alt = error_identity_alt(&p, &q, &dp, &dq, &x).unwrap();
        assert!((lhs - alt).abs() <= 1e-14 * lhs.abs());
    }
}
