//! Dense matrices over Z[x].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ring::IntPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<IntPoly>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![IntPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                IntPoly::one()
            } else {
                IntPoly::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> IntPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds from nested rows; fails on ragged input.
    pub fn from_rows(rows: Vec<Vec<IntPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("ragged matrix rows"));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer matrix shorthand for tests and constants.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| IntPoly::constant(rows[i][j]))
    }

    pub fn diag(entries: &[IntPoly]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                IntPoly::zero()
            }
        })
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

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: IntPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &IntPoly> {
        self.data.iter()
    }

    pub fn row_vec(&self, i: usize) -> Vec<IntPoly> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<IntPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_cols(cols: &[Vec<IntPoly>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&IntPoly) -> IntPoly) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        let c = BigInt::from(c);
        self.map(|a| a.scale(&c))
    }

    pub fn scale_poly(&self, c: &IntPoly) -> Self {
        self.map(|a| a * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(IntPoly::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_even(&self) -> bool {
        self.data.iter().all(IntPoly::is_even)
    }

    pub fn half(&self) -> Result<Self> {
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(IntPoly::half).collect::<Result<_>>()?,
        })
    }

    pub fn diagonal(&self) -> Vec<IntPoly> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn hcat(&self, rhs: &Mat) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::shape(format!(
                "hcat of {} and {} rows",
                self.rows, rhs.rows
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn vcat(&self, rhs: &Mat) -> Result<Self> {
        if self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "vcat of {} and {} columns",
                self.cols, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows + rhs.rows, self.cols, |i, j| {
            if i < self.rows {
                self.get(i, j).clone()
            } else {
                rhs.get(i - self.rows, j).clone()
            }
        }))
    }

    /// `(a b; c d)` from four blocks.
    pub fn block2(a: &Mat, b: &Mat, c: &Mat, d: &Mat) -> Result<Self> {
        a.hcat(b)?.vcat(&c.hcat(d)?)
    }

    pub fn block_diag(a: &Mat, b: &Mat) -> Self {
        Self::from_fn(a.rows + b.rows, a.cols + b.cols, |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j).clone(),
                (false, false) => b.get(i - a.rows, j - a.cols).clone(),
                _ => IntPoly::zero(),
            }
        })
    }

    pub fn try_mul(&self, rhs: &Mat) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = IntPoly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(a * rhs.get(k, j));
            }
            acc
        }))
    }

    pub fn try_add(&self, rhs: &Mat) -> Result<Self> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Mat) -> Result<Self> {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Mat, f: impl Fn(&IntPoly, &IntPoly) -> IntPoly) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `v^T M w` for column vectors `v`, `w`.
    pub fn bilinear(&self, v: &[IntPoly], w: &[IntPoly]) -> IntPoly {
        assert_eq!(v.len(), self.rows);
        assert_eq!(w.len(), self.cols);
        let mut acc = IntPoly::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                let m = self.get(i, j);
                if m.is_zero() || wj.is_zero() {
                    continue;
                }
                acc = &acc + &(&(vi * m) * wj);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[IntPoly]) -> Vec<IntPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(IntPoly::zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    /// Determinant by Laplace expansion memoized over column subsets.
    ///
    /// Division-free, so exact over Z[x]; cost is `O(n 2^n)` ring products,
    /// fine for the block sizes used here.
    pub fn det(&self) -> Result<IntPoly> {
        if !self.is_square() {
            return Err(Error::shape("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n > 20 {
            return Err(Error::shape(format!("determinant size {} too large", n)));
        }
        let mut memo: Vec<Option<IntPoly>> = vec![None; 1 << n];
        memo[0] = Some(IntPoly::one());
        // Masks in increasing popcount order are processed by plain increasing order,
        // since every proper subset of a mask is numerically smaller.
        for mask in 1usize..(1 << n) {
            let k = mask.count_ones() as usize - 1;
            let mut acc = IntPoly::zero();
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let a = self.get(k, j);
                if a.is_zero() {
                    continue;
                }
                let minor = memo[mask & !(1 << j)].as_ref().expect("subset computed");
                if minor.is_zero() {
                    continue;
                }
                let term = a * minor;
                let above = (mask >> (j + 1)).count_ones();
                acc = if above % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            memo[mask] = Some(acc);
        }
        Ok(memo[(1 << n) - 1].take().expect("full mask"))
    }

    /// Classical adjugate, so `M adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::shape("adjugate of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Mat::zeros(0, 0));
        }
        if n == 1 {
            return Ok(Mat::identity(1));
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = Self::from_fn(n - 1, n - 1, |a, b| {
                    let r = if a < i { a } else { a + 1 };
                    let c = if b < j { b } else { b + 1 };
                    self.get(r, c).clone()
                });
                let cof = minor.det()?;
                let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                out.set(j, i, cof);
            }
        }
        Ok(out)
    }

    /// Inverse over Z[x], available exactly when `det = ±1`.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let d = self.det()?;
        let sign = unit_sign(&d)
            .ok_or_else(|| Error::pre(format!("matrix is not unimodular (det = {})", d)))?;
        Ok(self.adjugate()?.scale_i64(sign))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().ok().as_ref().and_then(unit_sign).is_some()
    }
}

/// `Some(±1)` if `p` is the constant `±1`.
pub fn unit_sign(p: &IntPoly) -> Option<i64> {
    match p.as_constant_i64() {
        Some(1) => Some(1),
        Some(-1) => Some(-1),
        _ => None,
    }
}

/// `Some(m)` if `p = ±2^m`.
pub fn pow2_exponent(p: &IntPoly) -> Option<u32> {
    if !p.is_constant() || p.is_zero() {
        return None;
    }
    let c = p.coeff(0).magnitude().clone();
    let tz = c.trailing_zeros()?;
    if c == (num_bigint::BigUint::one() << tz) {
        Some(tz as u32)
    } else {
        None
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.map(|a| -a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_int_mat(n: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec(-6i64..6, n * n).prop_map(move |v| {
            Mat::from_fn(n, n, |i, j| IntPoly::constant(v[i * n + j]))
        })
    }

    // Leibniz formula over permutations; independent of the subset recursion.
    fn det_leibniz(m: &Mat) -> IntPoly {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let mut acc = IntPoly::zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let term = (0..n).fold(IntPoly::one(), |t, i| &t * m.get(i, p[i]));
            acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn det_small() {
        assert_eq!(Mat::identity(3).det().unwrap(), IntPoly::one());
        let m = Mat::from_i64(&[&[0, 1], &[-1, 0]]);
        assert_eq!(m.det().unwrap(), IntPoly::one());
        let x = IntPoly::x();
        let m = Mat::diag(&[IntPoly::one(), x.clone()]);
        assert_eq!(m.det().unwrap(), x);
        assert_eq!(Mat::zeros(0, 0).det().unwrap(), IntPoly::one());
    }

    #[test]
    fn pow2_detection() {
        assert_eq!(pow2_exponent(&IntPoly::constant(-8)), Some(3));
        assert_eq!(pow2_exponent(&IntPoly::constant(1)), Some(0));
        assert_eq!(pow2_exponent(&IntPoly::constant(6)), None);
        assert_eq!(pow2_exponent(&IntPoly::x()), None);
    }

    proptest! {
        #[test]
        fn det_matches_leibniz(n in 0usize..5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = Mat::from_fn(n, n, |_, _| {
                IntPoly::from_i64s(&[rng.gen_range(-3..4), rng.gen_range(-3..4)])
            });
            prop_assert_eq!(m.det().unwrap(), det_leibniz(&m));
        }

        #[test]
        fn adjugate_identity(m in arb_int_mat(4)) {
            let d = m.det().unwrap();
            let lhs = &m * &m.adjugate().unwrap();
            prop_assert_eq!(lhs, Mat::identity(4).scale_poly(&d));
        }

        #[test]
        fn det_multiplicative(a in arb_int_mat(3), b in arb_int_mat(3)) {
            prop_assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }
    }
}
