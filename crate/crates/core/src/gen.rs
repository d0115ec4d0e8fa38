//! Seeded random instance generators shared by the oracle suites and tests.

use num_bigint::BigInt;
use rand::Rng;

use crate::matrix::Mat;
use crate::ring::IntPoly;

/// Degree ≤ `deg`, coefficients uniform in `[-bound, bound]`.
pub fn random_poly<R: Rng>(rng: &mut R, deg: usize, bound: i64) -> IntPoly {
    IntPoly::from_coeffs(
        (0..=deg)
            .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
            .collect(),
    )
}

pub fn random_mat<R: Rng>(rng: &mut R, rows: usize, cols: usize, deg: usize, bound: i64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| random_poly(rng, deg, bound))
}

pub fn random_sym<R: Rng>(rng: &mut R, n: usize, deg: usize, bound: i64) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let p = random_poly(rng, deg, bound);
            m.set(i, j, p.clone());
            m.set(j, i, p);
        }
    }
    m
}

/// Symmetric with even diagonal.
pub fn random_quad<R: Rng>(rng: &mut R, n: usize, deg: usize, bound: i64) -> Mat {
    let mut m = random_sym(rng, n, deg, bound);
    for i in 0..n {
        let d = m.get(i, i).scale_i64(2);
        m.set(i, i, d);
    }
    m
}

/// Product of `steps` random elementary operations and sign flips over Z[x].
///
/// Multipliers have degree ≤ 1 and small coefficients so entries stay modest.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> Mat {
    let mut m = Mat::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            // negate a row
            for k in 0..n {
                let v = -m.get(i, k);
                m.set(i, k, v);
            }
            continue;
        }
        let c = random_poly(rng, 1, 2);
        for k in 0..n {
            let v = m.get(i, k) + &(&c * m.get(j, k));
            m.set(i, k, v);
        }
    }
    m
}

/// Integer unimodular matrix: like [`random_unimodular`] with constant multipliers.
pub fn random_int_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize, bound: i64) -> Mat {
    let mut m = Mat::identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m.set(0, 0, IntPoly::constant(-1));
        }
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = IntPoly::constant(rng.gen_range(-bound..=bound));
        for k in 0..n {
            let v = m.get(i, k) + &(&c * m.get(j, k));
            m.set(i, k, v);
        }
        if rng.gen_bool(0.1) {
            for k in 0..n {
                let v = -m.get(i, k);
                m.set(i, k, v);
            }
        }
    }
    m
}
