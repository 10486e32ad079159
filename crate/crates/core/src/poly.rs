//! Polynomial machinery in the monomial and Chebyshev bases.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{BigReal, Real};
use crate::error::{Error, Result};

/// `p_0 + p_1 x + … + p_d x^d`. Trailing zeros are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly<R> {
    coeffs: Vec<R>,
}

impl<R: Real> MonomialPoly<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        MonomialPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// `len - 1`, or `None` for the empty polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> Result<R> {
        horner(&self.coeffs, x)
    }
}

pub(crate) fn horner<R: Real>(coeffs: &[R], x: &R) -> Result<R> {
    let (last, rest) = coeffs.split_last().ok_or(Error::EmptyPolynomial)?;
    let mut acc = last.clone();
    for c in rest.iter().rev() {
        acc = acc * x + c;
    }
    Ok(acc)
}

/// Expansion `Σ c_k T_k(x)` on `[-1, 1]`.
///
/// With `halved_first` set, the leading coefficient enters as `c_0 / 2`,
/// the usual convention for Fourier–Chebyshev series.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevSeries<R> {
    coeffs: Vec<R>,
    halved_first: bool,
}

impl<R: Real> ChebyshevSeries<R> {
    pub fn new(coeffs: Vec<R>, halved_first: bool) -> Self {
        ChebyshevSeries {
            coeffs,
            halved_first,
        }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn halved_first(&self) -> bool {
        self.halved_first
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients with the halving folded in, so the value is a plain `Σ d_k T_k`.
    pub fn plain_coeffs(&self) -> Vec<R> {
        let mut d = self.coeffs.clone();
        if self.halved_first {
            if let Some(first) = d.first_mut() {
                *first = first.clone() / first.lift(2.0);
            }
        }
        d
    }

    /// Same function with the requested convention.
    pub fn with_convention(&self, halved_first: bool) -> Self {
        if halved_first == self.halved_first {
            return self.clone();
        }
        let mut c = self.coeffs.clone();
        if let Some(first) = c.first_mut() {
            let two = first.lift(2.0);
            *first = if halved_first {
                first.clone() * two
            } else {
                first.clone() / two
            };
        }
        ChebyshevSeries::new(c, halved_first)
    }

    /// First `len` coefficients (the partial sum `f̂_{len-1}`).
    pub fn truncated(&self, len: usize) -> Self {
        ChebyshevSeries::new(
            self.coeffs.iter().take(len).cloned().collect(),
            self.halved_first,
        )
    }

    /// Clenshaw evaluation; valid for any real `x`.
    pub fn eval(&self, x: &R) -> Result<R> {
        clenshaw(&self.plain_coeffs(), x)
    }

    /// Product series via `T_i T_j = (T_{i+j} + T_{|i-j|}) / 2`; plain convention.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let a = self.plain_coeffs();
        let b = other.plain_coeffs();
        let zero = a
            .first()
            .or(b.first())
            .ok_or(Error::EmptyPolynomial)?
            .zero();
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyPolynomial);
        }
        let half = zero.lift(0.5);
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                let t = ai.clone() * bj * &half;
                out[i + j] += t.clone();
                out[i.abs_diff(j)] += t;
            }
        }
        Ok(ChebyshevSeries::new(out, false))
    }
}

pub(crate) fn clenshaw<R: Real>(d: &[R], x: &R) -> Result<R> {
    let (first, rest) = d.split_first().ok_or(Error::EmptyPolynomial)?;
    let zero = first.zero();
    let two_x = x.clone() * x.lift(2.0);
    let mut b1 = zero.clone();
    let mut b2 = zero;
    for c in rest.iter().rev() {
        let b0 = two_x.clone() * &b1 - &b2 + c;
        b2 = b1;
        b1 = b0;
    }
    Ok(x.clone() * &b1 - &b2 + first)
}

/// `T_k(x)` by the three-term recurrence; `x` must lie in `[-1, 1]`.
pub fn cheb_eval<R: Real>(k: usize, x: &R) -> Result<R> {
    let one = x.one();
    if x.abs() > one {
        return Err(Error::OutsideUnitInterval { x: x.to_f64() });
    }
    Ok(cheb_values(k, x).pop().expect("at least T_0"))
}

/// `[T_0(x), …, T_k(x)]`.
pub(crate) fn cheb_values<R: Real>(k: usize, x: &R) -> Vec<R> {
    let mut t = Vec::with_capacity(k + 1);
    t.push(x.one());
    if k >= 1 {
        t.push(x.clone());
    }
    let two_x = x.clone() * x.lift(2.0);
    for i in 2..=k {
        let next = two_x.clone() * &t[i - 1] - &t[i - 2];
        t.push(next);
    }
    t
}

/// `T_i T_j` as the plain series `(T_{i+j} + T_{|i-j|}) / 2`.
pub fn cheb_product<R: Real>(i: usize, j: usize, unit: &R) -> ChebyshevSeries<R> {
    let mut c = vec![unit.zero(); i + j + 1];
    let half = unit.lift(0.5);
    c[i + j] += half.clone();
    c[i.abs_diff(j)] += half;
    ChebyshevSeries::new(c, false)
}

/// Gauss–Chebyshev rule: `∫ φ(x)/√(1-x²) dx ≈ (π/s) Σ φ(cos((2i-1)π/2s))`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<R> {
    s: usize,
    nodes: Vec<R>,
    thetas: Vec<R>,
    weight: R,
}

impl<R: Real> QuadratureRule<R> {
    /// `unit` only fixes the precision of the nodes.
    pub fn new(s: usize, unit: &R) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidInput(
                "quadrature needs at least one node".into(),
            ));
        }
        let pi = unit.pi();
        let two_s = unit.from_i64(2 * s as i64);
        let thetas: Vec<R> = (1..=s)
            .map(|i| unit.from_i64(2 * i as i64 - 1) * &pi / &two_s)
            .collect();
        let nodes = thetas.iter().map(|t| t.cos()).collect();
        let weight = pi / unit.from_i64(s as i64);
        Ok(QuadratureRule {
            s,
            nodes,
            thetas,
            weight,
        })
    }

    /// Node count used when the caller does not choose one: `8(m+n+1) + 64`.
    pub fn default_size(m: usize, n: usize) -> usize {
        8 * (m + n + 1) + 64
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn nodes(&self) -> &[R] {
        &self.nodes
    }

    /// Angles `θ_i` with `node_i = cos θ_i`.
    pub fn thetas(&self) -> &[R] {
        &self.thetas
    }

    pub fn weight(&self) -> &R {
        &self.weight
    }

    /// `(π/s) Σ f(node_i)`, summed in node order.
    pub fn integrate<F>(&self, f: F) -> Result<R>
    where
        F: Fn(&R) -> R,
    {
        let values = self.sample(f)?;
        Ok(self.integrate_values(&values))
    }

    /// `f` at every node, failing on the first non-finite value.
    pub fn sample<F>(&self, f: F) -> Result<Vec<R>>
    where
        F: Fn(&R) -> R,
    {
        self.nodes
            .iter()
            .map(|x| {
                let v = f(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFiniteValue { x: x.to_f64() })
                }
            })
            .collect()
    }

    /// `(π/s) Σ values_i` for precomputed node values.
    pub fn integrate_values(&self, values: &[R]) -> R {
        let mut acc = self.weight.zero();
        for v in values {
            acc += v.clone();
        }
        acc * &self.weight
    }
}

/// `c_k = (2/π) ∫ f T_k w dx` for `k = 0..=n_max`, halved-first convention.
pub fn fourier_chebyshev_coeffs<R, F>(
    f: F,
    n_max: usize,
    rule: &QuadratureRule<R>,
) -> Result<ChebyshevSeries<R>>
where
    R: Real,
    F: Fn(&R) -> R,
{
    let values = rule.sample(f)?;
    Ok(chebyshev_coeffs_from_values(&values, n_max, rule))
}

pub(crate) fn chebyshev_coeffs_from_values<R: Real>(
    values: &[R],
    n_max: usize,
    rule: &QuadratureRule<R>,
) -> ChebyshevSeries<R> {
    let unit = rule.weight.one();
    let scale = unit.lift(2.0) / unit.from_i64(rule.s as i64);
    let mut c = vec![unit.zero(); n_max + 1];
    for (x, fx) in rule.nodes.iter().zip(values) {
        for (k, t) in cheb_values(n_max, x).into_iter().enumerate() {
            c[k] += fx.clone() * t;
        }
    }
    for ck in &mut c {
        *ck = ck.clone() * &scale;
    }
    ChebyshevSeries::new(c, true)
}

/// Guard bits used by the basis changes, which cancel heavily at high degree.
const BASIS_GUARD_BITS: usize = 128;

fn widen<R: Real>(v: &[R]) -> Vec<BigReal> {
    v.iter()
        .map(|x| x.to_big().with_bits(x.bits() + BASIS_GUARD_BITS))
        .collect()
}

fn narrow<R: Real>(template: &R, v: &[BigReal]) -> Vec<R> {
    v.iter().map(|x| template.from_big(x)).collect()
}

/// Exact change of basis from monomials to Chebyshev polynomials (halved-first),
/// computed with guard bits and rounded once.
pub fn monomial_to_cheb<R: Real>(p: &MonomialPoly<R>) -> ChebyshevSeries<R> {
    let Some(first) = p.coeffs().first() else {
        return ChebyshevSeries::new(Vec::new(), true);
    };
    let wide = monomial_to_cheb_raw(&MonomialPoly::new(widen(p.coeffs())));
    ChebyshevSeries::new(narrow(first, wide.coeffs()), true)
}

/// Exact change of basis from Chebyshev polynomials to monomials, computed
/// with guard bits and rounded once.
pub fn cheb_to_monomial<R: Real>(series: &ChebyshevSeries<R>) -> MonomialPoly<R> {
    let Some(first) = series.coeffs().first() else {
        return MonomialPoly::new(Vec::new());
    };
    let wide = ChebyshevSeries::new(widen(series.coeffs()), series.halved_first());
    MonomialPoly::new(narrow(first, cheb_to_monomial_raw(&wide).coeffs()))
}

fn monomial_to_cheb_raw<R: Real>(p: &MonomialPoly<R>) -> ChebyshevSeries<R> {
    let coeffs = p.coeffs();
    let Some(first) = coeffs.first() else {
        return ChebyshevSeries::new(Vec::new(), true);
    };
    let zero = first.zero();
    let half = first.lift(0.5);
    // Horner in the Chebyshev basis: acc <- x * acc + p_k
    let mut acc: Vec<R> = vec![zero.clone(); coeffs.len()];
    let mut len = 0usize;
    for pk in coeffs.iter().rev() {
        let mut next = vec![zero.clone(); coeffs.len()];
        for j in 0..len {
            let d = &acc[j];
            if j == 0 {
                next[1] += d.clone();
            } else {
                let h = d.clone() * &half;
                next[j + 1] += h.clone();
                next[j - 1] += h;
            }
        }
        next[0] += pk.clone();
        acc = next;
        len = (len + 1).min(coeffs.len());
    }
    acc[0] = acc[0].clone() * first.lift(2.0);
    ChebyshevSeries::new(acc, true)
}

fn cheb_to_monomial_raw<R: Real>(series: &ChebyshevSeries<R>) -> MonomialPoly<R> {
    let d = series.plain_coeffs();
    let Some(first) = d.first() else {
        return MonomialPoly::new(Vec::new());
    };
    let zero = first.zero();
    let two = first.lift(2.0);
    let n = d.len();
    let mut out = vec![zero.clone(); n];
    // monomial coefficients of T_{k-1} and T_k
    let mut prev: Vec<R> = vec![zero.clone(); n];
    let mut cur: Vec<R> = vec![zero.clone(); n];
    prev[0] = first.one();
    for (k, dk) in d.iter().enumerate() {
        let tk = match k {
            0 => prev.clone(),
            1 => {
                cur[1] = first.one();
                cur.clone()
            }
            _ => {
                let mut next = vec![zero.clone(); n];
                for i in 0..k {
                    next[i + 1] += two.clone() * &cur[i];
                }
                for i in 0..k - 1 {
                    next[i] -= prev[i].clone();
                }
                prev = core::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        for (o, t) in out.iter_mut().zip(&tk).take(k + 1) {
            *o += dk.clone() * t;
        }
    }
    MonomialPoly::new(out)
}

/// Converts a truncated Taylor polynomial to the Chebyshev basis and keeps
/// the coefficients of `T_0..T_target`.
pub fn economize_taylor<R: Real>(
    taylor: &MonomialPoly<R>,
    target: usize,
) -> Result<ChebyshevSeries<R>> {
    let degree = taylor.degree().ok_or(Error::EmptyPolynomial)?;
    if target > degree {
        return Err(Error::InvalidInput(alloc::format!(
            "economization target {target} exceeds Taylor degree {degree}"
        )));
    }
    Ok(monomial_to_cheb(taylor).truncated(target + 1))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::arith::{Arithmetic, Extended};
    use core::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cheb_eval_examples() {
        assert_eq!(cheb_eval(5, &1.0).unwrap(), 1.0);
        assert!(close(cheb_eval(2, &0.5).unwrap(), -0.5, 1e-16));
        let x = (PI / 6.0).cos();
        assert!(close(cheb_eval(3, &x).unwrap(), 0.0, 1e-15));
        assert!(matches!(
            cheb_eval(2, &1.5),
            Err(Error::OutsideUnitInterval { .. })
        ));
    }

    #[test]
    fn cheb_eval_matches_cosine_identity() {
        for k in 0..=64usize {
            for i in 0..1000 {
                let theta = PI * i as f64 / 999.0;
                let got = cheb_eval(k, &theta.cos()).unwrap();
                let want = (k as f64 * theta).cos();
                // cos(θ) itself carries an ulp of error which T_k amplifies by
                // at most k² near the endpoints
                let tol = 10.0 * f64::EPSILON * (k.max(1) * k.max(1)) as f64;
                assert!(close(got, want, tol), "k={k} θ={theta}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn cheb_product_examples() {
        let p = cheb_product(1, 1, &1.0);
        assert_eq!(p.coeffs(), &[0.5, 0.0, 0.5]);
        let p = cheb_product(0, 4, &1.0);
        assert_eq!(p.coeffs(), &[0.0, 0.0, 0.0, 0.0, 1.0]);
        let p = cheb_product(3, 5, &1.0);
        let mut want = [0.0; 9];
        want[8] = 0.5;
        want[2] = 0.5;
        assert_eq!(p.coeffs(), &want);
        assert!(!p.halved_first());
    }

    #[test]
    fn cheb_product_matches_pointwise_product() {
        for i in 0..7 {
            for j in 0..7 {
                let p = cheb_product(i, j, &1.0);
                for t in [-0.9, -0.3, 0.0, 0.41, 0.77] {
                    let lhs = cheb_eval(i, &t).unwrap() * cheb_eval(j, &t).unwrap();
                    assert!(close(p.eval(&t).unwrap(), lhs, 1e-14));
                }
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        for s in [1, 2, 5, 16] {
            let rule = QuadratureRule::new(s, &1.0).unwrap();
            assert!(close(rule.integrate(|_| 1.0).unwrap(), PI, 1e-14));
            for k in 1..2 * s {
                let v = rule.integrate(|x| cheb_eval(k, x).unwrap()).unwrap();
                assert!(close(v, 0.0, 1e-13), "s={s} k={k}: {v}");
            }
            assert!(rule.nodes().iter().all(|x| x.abs() < 1.0));
        }
        let rule = QuadratureRule::new(2, &1.0).unwrap();
        assert!(close(rule.integrate(|x| x * x).unwrap(), PI / 2.0, 1e-15));
    }

    #[test]
    fn quadrature_exact_on_moments() {
        // ∫ x^{2k} w dx = π (2k-1)!! / (2k)!!
        let x = Extended::new(128);
        let eps = x.epsilon();
        for s in [4usize, 9, 20] {
            let rule = QuadratureRule::new(s, &x.one()).unwrap();
            let mut moment = x.pi();
            for k in 0..(2 * s) {
                let got = rule.integrate(|t| t.powi(k as u32)).unwrap();
                let want = if k % 2 == 1 {
                    x.zero()
                } else {
                    if k > 0 {
                        moment *= x.ratio(k as i64 - 1, k as i64);
                    }
                    moment.clone()
                };
                let err = (got - want).abs();
                assert!(
                    err <= eps.clone() * x.from_f64(1e3),
                    "s={s} k={k} err={err}"
                );
            }
        }
    }

    #[test]
    fn quadrature_flags_non_finite_values() {
        let rule = QuadratureRule::new(3, &1.0).unwrap();
        assert!(matches!(
            rule.integrate(|x| 1.0 / (x - rule.nodes()[1])),
            Err(Error::NonFiniteValue { .. })
        ));
    }

    #[test]
    fn fourier_coefficients_examples() {
        let rule = QuadratureRule::new(16, &1.0).unwrap();
        let c = fourier_chebyshev_coeffs(|x| cheb_eval(3, x).unwrap(), 5, &rule).unwrap();
        for (k, ck) in c.coeffs().iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!(close(*ck, want, 1e-14), "k={k}: {ck}");
        }
        let c = fourier_chebyshev_coeffs(|x| x * x, 2, &rule).unwrap();
        assert!(close(c.coeffs()[0], 1.0, 1e-15));
        assert!(close(c.coeffs()[1], 0.0, 1e-15));
        assert!(close(c.coeffs()[2], 0.5, 1e-15));
        assert!(c.halved_first());
        assert!(close(c.eval(&0.3).unwrap(), 0.09, 1e-15));
    }

    #[test]
    fn fourier_coefficients_of_exp_match_dense_integration() {
        // c_k = (2/π) ∫_0^π e^{cos θ} cos kθ dθ, by a 20000-panel trapezoid rule
        // (spectrally accurate for periodic integrands)
        let rule = QuadratureRule::new(32, &1.0).unwrap();
        let c = fourier_chebyshev_coeffs(|x: &f64| x.exp(), 3, &rule).unwrap();
        let panels = 20000;
        for k in 0..=3 {
            let h = PI / panels as f64;
            let mut acc = 0.0;
            for i in 0..=panels {
                let th = i as f64 * h;
                let w = if i == 0 || i == panels { 0.5 } else { 1.0 };
                acc += w * th.cos().exp() * (k as f64 * th).cos();
            }
            let oracle = 2.0 / PI * acc * h;
            assert!(close(c.coeffs()[k], oracle, 1e-14), "k={k}");
        }
        // frozen values from the oracle: 2 I_k(1)
        assert!(close(c.coeffs()[0], 2.532_131_755_504_017, 1e-14));
        assert!(close(c.coeffs()[1], 1.130_318_207_984_970_1, 1e-14));
        assert!(close(c.coeffs()[2], 0.271_495_339_534_076_8, 1e-14));
        assert!(close(c.coeffs()[3], 0.044_336_849_848_663_8, 1e-14));
    }

    #[test]
    fn projection_is_idempotent() {
        let series = ChebyshevSeries::new(vec![0.7, -0.2, 0.05, 0.3, -0.01, 0.002], true);
        let rule = QuadratureRule::new(12, &1.0).unwrap();
        let back = fourier_chebyshev_coeffs(|x| series.eval(x).unwrap(), 5, &rule).unwrap();
        for (a, b) in back.coeffs().iter().zip(series.coeffs()) {
            assert!(close(*a, *b, 1e-15));
        }
    }

    #[test]
    fn economization_examples() {
        let t2 = MonomialPoly::new(vec![-1.0, 0.0, 2.0]);
        let c = economize_taylor(&t2, 2).unwrap();
        assert_eq!(c.plain_coeffs(), vec![0.0, 0.0, 1.0]);

        let cube = MonomialPoly::new(vec![0.0, 0.0, 0.0, 1.0]);
        let c = economize_taylor(&cube, 3).unwrap();
        assert_eq!(c.plain_coeffs(), vec![0.0, 0.75, 0.0, 0.25]);

        assert!(economize_taylor(&cube, 4).is_err());
    }

    #[test]
    fn economized_exp_matches_quadrature_coefficients() {
        let mut taylor = Vec::new();
        let mut fact = 1.0;
        for k in 0..=15 {
            if k > 0 {
                fact *= k as f64;
            }
            taylor.push(1.0 / fact);
        }
        let econ = economize_taylor(&MonomialPoly::new(taylor), 9).unwrap();
        let rule = QuadratureRule::new(40, &1.0).unwrap();
        let quad = fourier_chebyshev_coeffs(|x: &f64| x.exp(), 9, &rule).unwrap();
        for (a, b) in econ.coeffs().iter().zip(quad.coeffs()) {
            assert!(close(*a, *b, 1e-10));
        }
    }

    #[test]
    fn basis_change_examples() {
        let t2 = ChebyshevSeries::new(vec![0.0, 0.0, 1.0], false);
        let m = cheb_to_monomial(&t2);
        assert_eq!(m.coeffs(), &[-1.0, 0.0, 2.0]);
        let back = monomial_to_cheb(&m);
        assert_eq!(back.plain_coeffs(), vec![0.0, 0.0, 1.0]);

        let zero = ChebyshevSeries::new(vec![0.0; 4], true);
        assert!(cheb_to_monomial(&zero).coeffs().iter().all(|c| *c == 0.0));
        assert!(cheb_to_monomial(&ChebyshevSeries::<f64>::new(vec![], true))
            .coeffs()
            .is_empty());
    }

    #[test]
    fn empty_polynomial_evaluation_is_an_error() {
        assert_eq!(
            MonomialPoly::<f64>::new(vec![]).eval(&0.5),
            Err(Error::EmptyPolynomial)
        );
        assert_eq!(
            ChebyshevSeries::<f64>::new(vec![], true).eval(&0.5),
            Err(Error::EmptyPolynomial)
        );
        let p = MonomialPoly::new(vec![3.0]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.eval(&7.0), Ok(3.0));
        let p = MonomialPoly::new(vec![1.0, 2.0, 0.0]);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn series_product_matches_pointwise() {
        let a = ChebyshevSeries::new(vec![1.0, 0.5, -0.25], true);
        let b = ChebyshevSeries::new(vec![0.3, 0.0, 0.1, 0.7], false);
        let p = a.mul(&b).unwrap();
        for t in [-1.0, -0.5, 0.2, 0.9] {
            let want = a.eval(&t).unwrap() * b.eval(&t).unwrap();
            assert!(close(p.eval(&t).unwrap(), want, 1e-15));
        }
    }
}
