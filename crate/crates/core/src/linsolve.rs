//! Dense Gaussian elimination with partial pivoting and one-norm condition numbers.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::Real;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<R> {
    rows: usize,
    cols: usize,
    entries: Vec<R>,
}

impl<R: Real> DenseMatrix<R> {
    pub fn new(rows: usize, cols: usize, entries: Vec<R>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != entries.len() {
            return Err(Error::InvalidInput(alloc::format!(
                "{rows}x{cols} matrix cannot hold {} entries",
                entries.len()
            )));
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, unit: &R) -> Self {
        let mut e = vec![unit.zero(); n * n];
        for i in 0..n {
            e[i * n + i] = unit.one();
        }
        DenseMatrix {
            rows: n,
            cols: n,
            entries: e,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    /// Appends one row.
    pub fn push_row(&mut self, row: Vec<R>) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::InvalidInput("row length mismatch".into()));
        }
        self.entries.extend(row);
        self.rows += 1;
        Ok(())
    }

    pub fn mul_vec(&self, y: &[R]) -> Result<Vec<R>> {
        if y.len() != self.cols {
            return Err(Error::InvalidInput("vector length mismatch".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = y[0].zero();
                for (a, v) in self.row(i).iter().zip(y) {
                    acc += a.clone() * v;
                }
                acc
            })
            .collect())
    }

    pub fn scaled(&self, k: &R) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.clone() * k).collect(),
        }
    }

    /// Entries rounded into another precision.
    pub fn convert<A: crate::arith::Arithmetic>(&self, ctx: &A) -> DenseMatrix<A::Real> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| ctx.convert(e)).collect(),
        }
    }
}

/// `Σ |y_i|`.
pub fn vector_norm<R: Real>(y: &[R]) -> Result<R> {
    let first = y
        .first()
        .ok_or_else(|| Error::InvalidInput("empty vector".into()))?;
    let mut acc = first.zero();
    for v in y {
        acc += v.abs();
    }
    Ok(acc)
}

/// `max_j Σ_i |a_ij|`, the norm induced by [`vector_norm`].
pub fn matrix_norm<R: Real>(a: &DenseMatrix<R>) -> R {
    let mut best = a.get(0, 0).zero();
    for j in 0..a.cols {
        let mut col = best.zero();
        for i in 0..a.rows {
            col += a.get(i, j).abs();
        }
        best = best.max_of(col);
    }
    best
}

/// Condition number, or the reason it could not be trusted.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition<R> {
    Available { value: R, reliable: bool },
    Unavailable,
}

impl<R: Real> Condition<R> {
    pub fn value(&self) -> Option<&R> {
        match self {
            Condition::Available { value, .. } => Some(value),
            Condition::Unavailable => None,
        }
    }

    pub fn is_reliable(&self) -> bool {
        matches!(self, Condition::Available { reliable: true, .. })
    }
}

/// Solution of `Ay = h` with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<R> {
    pub solution: Vec<R>,
    /// `‖Ay − h‖` in the one-norm, computed in the working precision.
    pub residual_norm: R,
    pub condition: Condition<R>,
}

/// LU factors with row permutation, reusable for several right-hand sides.
#[derive(Debug, Clone)]
pub struct LuFactors<R> {
    n: usize,
    lu: Vec<R>,
    perm: Vec<usize>,
}

impl<R: Real> LuFactors<R> {
    pub fn factor(a: &DenseMatrix<R>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::InvalidInput(alloc::format!(
                "expected a square matrix, got {}x{}",
                a.rows,
                a.cols
            )));
        }
        let n = a.rows;
        let mut lu = a.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best.is_zero() || !best.is_finite() {
                return Err(Error::Singular {
                    column: k,
                    hint: "",
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k].clone();
            for i in k + 1..n {
                let factor = lu[i * n + k].clone() / &pivot;
                if factor.is_zero() {
                    lu[i * n + k] = factor;
                    continue;
                }
                for j in k + 1..n {
                    let t = factor.clone() * &lu[k * n + j];
                    lu[i * n + j] -= t;
                }
                lu[i * n + k] = factor;
            }
        }
        Ok(LuFactors { n, lu, perm })
    }

    pub fn solve(&self, h: &[R]) -> Result<Vec<R>> {
        let n = self.n;
        if h.len() != n {
            return Err(Error::InvalidInput(
                "right-hand side length mismatch".into(),
            ));
        }
        let mut y: Vec<R> = self.perm.iter().map(|&p| h[p].clone()).collect();
        for i in 0..n {
            for j in 0..i {
                let t = self.lu[i * n + j].clone() * &y[j];
                y[i] -= t;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = self.lu[i * n + j].clone() * &y[j];
                y[i] -= t;
            }
            y[i] = y[i].clone() / &self.lu[i * n + i];
        }
        Ok(y)
    }
}

fn residual<R: Real>(a: &DenseMatrix<R>, y: &[R], h: &[R]) -> Result<R> {
    let ay = a.mul_vec(y)?;
    let diff: Vec<R> = ay.into_iter().zip(h).map(|(l, r)| l - r).collect();
    vector_norm(&diff)
}

/// Solves `Ay = h` and reports the residual and the condition number.
pub fn solve<R: Real>(a: &DenseMatrix<R>, h: &[R]) -> Result<SolveReport<R>> {
    if h.len() != a.rows {
        return Err(Error::InvalidInput(alloc::format!(
            "right-hand side has {} entries, matrix has {} rows",
            h.len(),
            a.rows
        )));
    }
    let lu = LuFactors::factor(a)?;
    let solution = lu.solve(h)?;
    let residual_norm = residual(a, &solution, h)?;
    let condition = condition_from_factors(a, &lu);
    Ok(SolveReport {
        solution,
        residual_norm,
        condition,
    })
}

/// `‖A‖·‖A⁻¹‖` with the inverse built column by column.
pub fn condition_number<R: Real>(a: &DenseMatrix<R>) -> Result<Condition<R>> {
    match LuFactors::factor(a) {
        Ok(lu) => Ok(condition_from_factors(a, &lu)),
        Err(Error::Singular { .. }) => Ok(Condition::Unavailable),
        Err(e) => Err(e),
    }
}

fn condition_from_factors<R: Real>(a: &DenseMatrix<R>, lu: &LuFactors<R>) -> Condition<R> {
    let n = a.rows;
    let unit = a.get(0, 0);
    let norm_a = matrix_norm(a);
    let eps = unit.epsilon();
    // An inversion solve whose residual exceeds this is flagged: the inverse
    // is then itself the product of an ill-conditioned computation.
    let threshold = eps * unit.from_i64(1000 * n as i64);
    let mut norm_inv = unit.zero();
    let mut reliable = true;
    for j in 0..n {
        let mut e = vec![unit.zero(); n];
        e[j] = unit.one();
        let Ok(col) = lu.solve(&e) else {
            return Condition::Unavailable;
        };
        if col.iter().any(|v| !v.is_finite()) {
            return Condition::Unavailable;
        }
        let col_norm = vector_norm(&col).expect("nonempty");
        if let Ok(r) = residual(a, &col, &e) {
            if r > threshold.clone() * &norm_a * &col_norm {
                reliable = false;
            }
        }
        norm_inv = norm_inv.max_of(col_norm);
    }
    Condition::Available {
        value: norm_a * norm_inv,
        reliable,
    }
}

/// Solution of a possibly rank-deficient square system by complete pivoting.
///
/// Pivots with `|p| ≤ tol · max|a_ij|` end the elimination; the remaining
/// unknowns are set to zero. Returns the solution and the detected rank.
pub fn solve_rank_deficient<R: Real>(
    a: &DenseMatrix<R>,
    h: &[R],
    tol: &R,
) -> Result<(Vec<R>, usize)> {
    if !a.is_square() || h.len() != a.rows {
        return Err(Error::InvalidInput(
            "rank-deficient solve needs a square system".into(),
        ));
    }
    let n = a.rows;
    let unit = a.get(0, 0).one();
    let mut m = a.entries.clone();
    let mut rhs = h.to_vec();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut scale = unit.zero();
    for v in &m {
        scale = scale.max_of(v.abs());
    }
    let limit = tol.clone() * &scale;
    let mut rank = 0;
    for k in 0..n {
        let (mut pi, mut pj) = (k, k);
        let mut best = unit.zero();
        for i in k..n {
            for j in k..n {
                let v = m[i * n + j].abs();
                if v > best {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if best.is_zero() || best <= limit {
            break;
        }
        rank += 1;
        if pi != k {
            for j in 0..n {
                m.swap(k * n + j, pi * n + j);
            }
            rhs.swap(k, pi);
        }
        if pj != k {
            for i in 0..n {
                m.swap(i * n + k, i * n + pj);
            }
            cols.swap(k, pj);
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let factor = m[i * n + k].clone() / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let t = factor.clone() * &m[k * n + j];
                m[i * n + j] -= t;
            }
            let t = factor * &rhs[k];
            rhs[i] -= t;
        }
    }
    let mut y = vec![unit.zero(); n];
    for i in (0..rank).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..rank {
            acc -= m[i * n + j].clone() * &y[j];
        }
        y[i] = acc / &m[i * n + i];
    }
    let mut out = vec![unit.zero(); n];
    for (k, &c) in cols.iter().enumerate() {
        out[c] = y[k].clone();
    }
    Ok((out, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Arithmetic, Extended};

    fn m(rows: Vec<Vec<f64>>) -> DenseMatrix<f64> {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_solve() {
        let a = DenseMatrix::identity(4, &1.0);
        let h = [1.5, -2.0, 0.25, 7.0];
        let r = solve(&a, &h).unwrap();
        assert_eq!(r.solution, h.to_vec());
        assert_eq!(r.residual_norm, 0.0);
        assert_eq!(r.condition.value(), Some(&1.0));
    }

    #[test]
    fn two_by_two_solve() {
        let a = m(vec![vec![2.0, 1.0], vec![1.0, 3.0]]);
        let r = solve(&a, &[3.0, 4.0]).unwrap();
        assert!((r.solution[0] - 1.0).abs() < 1e-15);
        assert!((r.solution[1] - 1.0).abs() < 1e-15);
    }

    fn hilbert<A: Arithmetic>(ctx: A, n: usize) -> DenseMatrix<A::Real> {
        let mut e = Vec::new();
        for i in 0..n {
            for j in 0..n {
                e.push(ctx.ratio(1, (i + j + 1) as i64));
            }
        }
        DenseMatrix::new(n, n, e).unwrap()
    }

    #[test]
    fn hilbert_with_row_sum_rhs() {
        let a = hilbert(crate::arith::Double, 8);
        let ones = vec![1.0; 8];
        let h = a.mul_vec(&ones).unwrap();
        let r = solve(&a, &h).unwrap();
        for v in &r.solution {
            assert!((v - 1.0).abs() < 1e-4, "{v}");
        }

        let x = Extended::new(256);
        let a = hilbert(x, 8);
        let ones = vec![x.one(); 8];
        let h = a.mul_vec(&ones).unwrap();
        let r = solve(&a, &h).unwrap();
        for v in &r.solution {
            assert!((v.clone() - x.one()).abs().to_f64() < 1e-30);
        }
        // κ₁(H_8) ≈ 3.4e10
        let c = r.condition.value().unwrap().to_f64();
        assert!(c > 1e10 && c < 1e11, "{c}");
    }

    #[test]
    fn norms() {
        assert_eq!(vector_norm(&[1.0, -2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(matrix_norm(&DenseMatrix::identity(5, &1.0)), 1.0);
        assert_eq!(matrix_norm(&m(vec![vec![1.0, -4.0], vec![2.0, 0.0]])), 4.0);
        assert!(vector_norm::<f64>(&[]).is_err());
    }

    #[test]
    fn condition_examples() {
        let c = condition_number(&DenseMatrix::identity(3, &1.0)).unwrap();
        assert_eq!(c.value(), Some(&1.0));
        let d = m(vec![vec![1.0, 0.0], vec![0.0, 1e6]]);
        let c = condition_number(&d).unwrap();
        assert!((c.value().unwrap() - 1e6).abs() < 1e-6);
        assert!(c.is_reliable());
    }

    #[test]
    fn singular_matrix() {
        let a = m(vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(
            solve(&a, &[1.0, 2.0]),
            Err(Error::Singular { column: 1, .. })
        ));
        assert_eq!(condition_number(&a).unwrap(), Condition::Unavailable);
    }

    #[test]
    fn dimension_errors() {
        let a = m(vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 5.0]]);
        assert!(solve(&a, &[1.0, 2.0]).is_err());
        let sq = DenseMatrix::identity(2, &1.0);
        assert!(solve(&sq, &[1.0]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0]).is_err());
    }

    #[test]
    fn rank_deficient_sets_free_unknowns_to_zero() {
        let a = DenseMatrix::from_rows(vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
        ])
        .unwrap();
        let (y, rank) = solve_rank_deficient(&a, &[1.0, 0.0, 2.0], &1e-14).unwrap();
        assert_eq!(rank, 1);
        assert_eq!(y, vec![1.0, 0.0, 0.0]);
        let (y, rank) =
            solve_rank_deficient(&DenseMatrix::identity(2, &1.0), &[3.0, 4.0], &1e-14).unwrap();
        assert_eq!(rank, 2);
        assert_eq!(y, vec![3.0, 4.0]);
    }
}
