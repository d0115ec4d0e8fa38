//! Invariants of symmetric and quadratic forms over Z: signature, the
//! signature mod 8 via characteristic elements, and the Arf invariant in L_2(Z).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arf::{classical_arf, solve, symplectic_complete, Bits, GF2Form};
use crate::error::{Error, Result};
use crate::forms::{verify_lagrangian, EpsForm, LagrangianWitness, Sign};
use crate::matrix::Mat;
use crate::ring::IntPoly;

/// Symmetric matrix over Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSymForm {
    matrix: Vec<Vec<BigInt>>,
}

impl IntSymForm {
    pub fn new(matrix: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::shape("form matrix must be square"));
        }
        for i in 0..n {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::pre("form matrix must be symmetric"));
                }
            }
        }
        Ok(IntSymForm { matrix })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// Form from a matrix of constant polynomials.
    pub fn from_mat(m: &Mat) -> Result<Self> {
        let mut rows = Vec::with_capacity(m.rows());
        for i in 0..m.rows() {
            let mut row = Vec::with_capacity(m.cols());
            for j in 0..m.cols() {
                let e = m.get(i, j);
                if !e.is_constant() {
                    return Err(Error::pre("form over Z must have constant entries"));
                }
                row.push(e.coeff(0).clone());
            }
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn to_mat(&self) -> Mat {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| IntPoly::from_big(self.matrix[i][j].clone()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.matrix[i][j]
    }

    pub fn eval(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                s += vi * &self.matrix[i][j] * wj;
            }
        }
        s
    }

    pub fn direct_sum(&self, o: &IntSymForm) -> IntSymForm {
        let n = self.dim() + o.dim();
        let (a, b) = (self.dim(), o.dim());
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for i in 0..a {
            m[i][..a].clone_from_slice(&self.matrix[i]);
        }
        for i in 0..b {
            m[a + i][a..].clone_from_slice(&o.matrix[i]);
        }
        IntSymForm { matrix: m }
    }

    /// `E^T φ E`.
    pub fn conjugate(&self, e: &Mat) -> Result<IntSymForm> {
        let m = e.transpose().try_mul(&self.to_mat())?.try_mul(e)?;
        Self::from_mat(&m)
    }

    pub fn det(&self) -> BigInt {
        let d = self.to_mat().det().expect("square");
        d.coeff(0).clone()
    }
}

/// Cartan matrix of E8: even, unimodular, positive definite.
pub fn e8() -> IntSymForm {
    let mut m = vec![vec![0i64; 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)] {
        m[a][b] = -1;
        m[b][a] = -1;
    }
    let rows: Vec<&[i64]> = m.iter().map(Vec::as_slice).collect();
    IntSymForm::from_i64(&rows).expect("symmetric")
}

/// Exact congruence diagonalization over Q; zero pivots are handled by
/// eliminating a hyperbolic 2×2 block.
pub fn signature(f: &IntSymForm) -> Result<i64> {
    let n = f.dim();
    let mut a: Vec<Vec<BigRational>> = f
        .matrix
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let mut live: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    while !live.is_empty() {
        if let Some(pos) = live.iter().position(|&k| !a[k][k].is_zero()) {
            let k = live.swap_remove(pos);
            let p = a[k][k].clone();
            sig += if p.is_positive() { 1 } else { -1 };
            for &i in &live {
                let f = &a[i][k] / &p;
                for &j in &live {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            continue;
        }
        let mut pair = None;
        'search: for (pi, &i) in live.iter().enumerate() {
            for &j in &live[pi + 1..] {
                if !a[i][j].is_zero() {
                    pair = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = pair else {
            return Err(Error::pre("form is singular"));
        };
        // block (0 b; b 0) has signature 0; Schur complement removes it
        let b = a[i][j].clone();
        live.retain(|&k| k != i && k != j);
        for &r in &live {
            let (ri, rj) = (a[r][i].clone(), a[r][j].clone());
            for &c in &live {
                let t = (&ri * &a[j][c] + &rj * &a[i][c]) / &b;
                a[r][c] -= t;
            }
        }
    }
    Ok(sig)
}

fn unimodular_check(f: &IntSymForm) -> Result<()> {
    if f.det().abs() != BigInt::one() {
        return Err(Error::pre("form is not unimodular"));
    }
    Ok(())
}

/// `v` with `φ(u, u) ≡ φ(u, v) (mod 2)` for all `u`.
pub fn characteristic_element(f: &IntSymForm) -> Result<Vec<BigInt>> {
    let n = f.dim();
    let bit = |v: &BigInt| v.mod_floor(&BigInt::from(2)).to_u8().expect("bit");
    let rows: Vec<Bits> = (0..n).map(|i| (0..n).map(|j| bit(&f.matrix[i][j])).collect()).collect();
    let rhs: Bits = (0..n).map(|i| bit(&f.matrix[i][i])).collect();
    let v = solve(&rows, &rhs).ok_or_else(|| Error::pre("form is singular mod 2"))?;
    Ok(v.into_iter().map(BigInt::from).collect())
}

/// `φ(v, v) mod 8` for a characteristic element `v`.
pub fn signature_mod8(f: &IntSymForm) -> Result<u8> {
    unimodular_check(f)?;
    let v = characteristic_element(f)?;
    Ok(f.eval(&v, &v).mod_floor(&BigInt::from(8)).to_u8().expect("residue"))
}

fn bits_of(m: &Mat) -> Result<Vec<Bits>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let e = m.get(i, j);
                    if !e.is_constant() {
                        return Err(Error::pre("form over Z must have constant entries"));
                    }
                    Ok(e.coeff(0).mod_floor(&BigInt::from(2)).to_u8().expect("bit"))
                })
                .collect()
        })
        .collect()
}

/// Arf invariant of the mod-2 reduction of a (−1)-quadratic form over Z.
pub fn arf_L2(f: &EpsForm, w: &LagrangianWitness) -> Result<u8> {
    if f.epsilon != Sign::Minus {
        return Err(Error::pre("arf_L2 needs epsilon = -1"));
    }
    if !verify_lagrangian(f, w)? {
        return Err(Error::pre("witness is not a lagrangian"));
    }
    let g = GF2Form::new(bits_of(&f.psi)?)?;
    let e = bits_of(&w.inclusion.transpose())?;
    let e_star = symplectic_complete(&g, &e)?;
    classical_arf(&g, &e, &e_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arf::boundary_q3_to_L2;
    use crate::forms::hyperbolic;
    use crate::gen::random_int_unimodular;
    use crate::qnormal::XMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn diag(v: &[i64]) -> IntSymForm {
        let n = v.len();
        IntSymForm::new((0..n).map(|i| (0..n).map(|j| BigInt::from(if i == j { v[i] } else { 0 })).collect()).collect()).unwrap()
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&diag(&[1, 1, 1])).unwrap(), 3);
        assert_eq!(signature(&diag(&[1, -1])).unwrap(), 0);
        assert_eq!(signature(&e8()).unwrap(), 8);
        assert_eq!(signature(&IntSymForm::from_i64(&[&[0, 1], &[1, 0]]).unwrap()).unwrap(), 0);
        assert!(signature(&diag(&[1, 0])).is_err());
    }

    #[test]
    fn e8_is_positive_definite_and_unimodular() {
        let m = e8().to_mat();
        for k in 1..=8 {
            let minor = m.submatrix(0, 0, k, k).det().unwrap();
            assert!(minor.coeff(0) > &BigInt::zero(), "leading minor {k}");
        }
        assert_eq!(e8().det(), BigInt::one());
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(characteristic_element(&diag(&[1, 1, 1])).unwrap(), big(&[1, 1, 1]));
        assert_eq!(characteristic_element(&e8()).unwrap(), big(&[0; 8]));
        assert_eq!(characteristic_element(&diag(&[1, -1])).unwrap(), big(&[1, 1]));
    }

    #[test]
    fn signature_mod8_examples() {
        assert_eq!(signature_mod8(&diag(&[1])).unwrap(), 1);
        assert_eq!(signature_mod8(&e8()).unwrap(), 0);
        assert_eq!(signature_mod8(&diag(&[1, 1, 1])).unwrap(), 3);
        assert!(signature_mod8(&diag(&[2])).is_err());
    }

    #[test]
    fn arf_l2_examples() {
        assert_eq!(arf_L2(&hyperbolic(1, Sign::Minus), &LagrangianWitness::standard(1)).unwrap(), 0);
        let f = EpsForm::new(Sign::Minus, Mat::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(arf_L2(&f, &LagrangianWitness::standard(1)).unwrap(), 1);
        let b = boundary_q3_to_L2(&Mat::from_i64(&[&[1]]), XMatrix::Z).unwrap();
        assert_eq!(arf_L2(&b, &LagrangianWitness::standard(1)).unwrap(), 1);
    }

    fn random_form(rng: &mut ChaCha8Rng) -> IntSymForm {
        let mut f = diag(&[if rng.gen_bool(0.5) { 1 } else { -1 }]);
        for _ in 0..rng.gen_range(0..5) {
            f = f.direct_sum(&diag(&[if rng.gen_bool(0.5) { 1 } else { -1 }]));
        }
        f
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn signature_congruence_invariant(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_form(&mut rng);
            let e = random_int_unimodular(&mut rng, f.dim(), 8, 2);
            let g = f.conjugate(&e).unwrap();
            prop_assert_eq!(signature(&g).unwrap(), signature(&f).unwrap());
            prop_assert_eq!(signature_mod8(&g).unwrap() as i64, signature(&f).unwrap().rem_euclid(8));
        }

        #[test]
        fn signature_additive(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (f, g) = (random_form(&mut rng), random_form(&mut rng));
            prop_assert_eq!(signature(&f.direct_sum(&g)).unwrap(), signature(&f).unwrap() + signature(&g).unwrap());
        }

        #[test]
        fn arf_l2_witness_independent(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = rng.gen_range(0..2i64);
            let f = boundary_q3_to_L2(&Mat::from_i64(&[&[a]]), XMatrix::Z).unwrap();
            let g = crate::forms::direct_sum(&f, &hyperbolic(1, Sign::Minus)).unwrap();
            let w = crate::forms::direct_sum_witness(&LagrangianWitness::standard(1), &LagrangianWitness::standard(1));
            // same form and lagrangian in random coordinates
            let v = random_int_unimodular(&mut rng, 4, 6, 2);
            let v_inv = v.inverse_unimodular().unwrap();
            let h = EpsForm::new(Sign::Minus, &(&v.transpose() * &g.psi) * &v).unwrap();
            prop_assert_eq!(arf_L2(&h, &w.pull_back(&v_inv).unwrap()).unwrap(), a as u8);
        }
    }
}
