//! Exact integer linear algebra by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
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

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn add_to(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] += value;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Whether some column is identically zero, which forces a zero
    /// determinant.
    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|c| (0..self.rows).all(|r| self.get(r, c) == 0))
    }
}

/// Determinant of a square integer matrix.
///
/// # Panics
/// Panics if the matrix is not square.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let wide: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
    match bareiss_i128(wide, m.rows) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m.data.iter().map(|&v| BigInt::from(v)).collect(), m.rows),
    }
}

pub fn determinant_is_zero(m: &IntMatrix) -> bool {
    determinant(m).is_zero()
}

/// The unique solution of a nonsingular square system `m·x = rhs`, kept
/// as integer numerators over the common denominator `det(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CramerSolution {
    pub det: BigInt,
    pub numerators: Vec<BigInt>,
}

impl CramerSolution {
    /// Whether every unknown in `indices` is strictly positive.
    pub fn all_positive(&self, indices: impl IntoIterator<Item = usize>) -> bool {
        let sign = self.det.signum();
        indices
            .into_iter()
            .all(|i| (&self.numerators[i] * &sign).is_positive())
    }

    pub fn any_zero(&self, indices: impl IntoIterator<Item = usize>) -> bool {
        indices.into_iter().any(|i| self.numerators[i].is_zero())
    }

    pub fn value(&self, i: usize) -> BigRational {
        BigRational::new(self.numerators[i].clone(), self.det.clone())
    }

    pub fn values(&self) -> Vec<BigRational> {
        (0..self.numerators.len()).map(|i| self.value(i)).collect()
    }
}

/// Solves `m·x = rhs` by Cramer's rule. Returns `None` when `m` is singular.
pub fn solve(m: &IntMatrix, rhs: &[BigInt]) -> Option<CramerSolution> {
    assert!(m.is_square(), "solve on a non-square matrix");
    assert_eq!(rhs.len(), m.rows, "right-hand side length");
    let det = determinant(m);
    if det.is_zero() {
        return None;
    }
    let n = m.rows;
    let small_rhs: Option<Vec<i128>> = rhs.iter().map(i128::try_from).map(Result::ok).collect();
    let numerators = (0..n)
        .map(|col| {
            if let Some(small) = &small_rhs {
                let mut wide: Vec<i128> = m.data.iter().map(|&v| v as i128).collect();
                for r in 0..n {
                    wide[r * n + col] = small[r];
                }
                if let Some(d) = bareiss_i128(wide, n) {
                    return BigInt::from(d);
                }
            }
            let mut big: Vec<BigInt> = m.data.iter().map(|&v| BigInt::from(v)).collect();
            for r in 0..n {
                big[r * n + col] = rhs[r].clone();
            }
            bareiss_big(big, n)
        })
        .collect();
    Some(CramerSolution { det, numerators })
}

/// Scales rational values by the least common multiple of their
/// denominators, returning the integer numerators and the scale.
pub fn clear_denominators(values: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let scale = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = values
        .iter()
        .map(|v| v.numer() * (&scale / v.denom()))
        .collect();
    (ints, scale)
}

fn bareiss_i128(mut a: Vec<i128>, n: usize) -> Option<i128> {
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Some(0);
            };
            for c in 0..n {
                a.swap(k * n + c, swap * n + c);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i * n + j].checked_mul(pivot)?;
                let rhs = a[i * n + k].checked_mul(a[k * n + j])?;
                a[i * n + j] = lhs.checked_sub(rhs)? / prev;
            }
            a[i * n + k] = 0;
        }
        prev = pivot;
    }
    Some(sign * a[n * n - 1])
}

fn bareiss_big(mut a: Vec<BigInt>, n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(swap) => {
                    for c in 0..n {
                        a.swap(k * n + c, swap * n + c);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i * n + j] * &pivot - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_det(m: &IntMatrix) -> i128 {
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|c| {
                let minor_rows: Vec<Vec<i64>> = (1..n)
                    .map(|r| {
                        (0..n)
                            .filter(|&cc| cc != c)
                            .map(|cc| m.get(r, cc))
                            .collect()
                    })
                    .collect();
                let minor = IntMatrix::from_rows(&minor_rows);
                let sign = if c % 2 == 0 { 1 } else { -1 };
                sign * m.get(0, c) as i128 * naive_det(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[
            vec![0, 2, -1, 3],
            vec![1, 0, 4, -2],
            vec![2, -3, 0, 1],
            vec![-1, 5, 2, 0],
        ]);
        assert_eq!(determinant(&m), BigInt::from(naive_det(&m)));
    }

    #[test]
    fn singular_matrix_has_zero_determinant() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert!(determinant_is_zero(&m));
        assert!(solve(&m, &[1.into(), 2.into(), 3.into()]).is_none());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 2;
        let m = IntMatrix::from_rows(&[vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big]]);
        let b = BigInt::from(big);
        let expected = &b * &b * &b - &b - &b;
        assert_eq!(determinant(&m), expected);
    }

    #[test]
    fn cramer_solution_is_exact() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 3]]);
        let sol = solve(&m, &[3.into(), 5.into()]).unwrap();
        let x = sol.values();
        assert_eq!(x[0], BigRational::new(4.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(7.into(), 5.into()));
        assert!(sol.all_positive(0..2));
    }

    #[test]
    fn clearing_denominators() {
        let vals = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(2.into(), 3.into()),
        ];
        let (ints, scale) = clear_denominators(&vals);
        assert_eq!(scale, BigInt::from(6));
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(4)]);
    }
}
