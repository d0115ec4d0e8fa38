//! Normal forms for the twisted quadratic Q-groups of `(C(X), γ(X))` over Z and
//! Z[x], and the resulting L̂-group tables.
//!
//! Over Z[x] with `X = diag(1, x)`:
//!
//! * `Q_{-1} = Sym_2 / (Quad_2 + {L − LXL})            ≅ Z_2[x]`
//! * `Q_0    = {M : M − MXM ∈ Quad_2} / (4Quad_2 + {2(N+N^T) − 4N^T XN})
//!                                                     ≅ Z_8 ⊕ Z_4[x] ⊕ Z_2[x]^3`
//! * `Q_1    = {N : ...} / 2M_2                         ≅ Z_2`

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::forms::is_quad;
use crate::matrix::Mat;
use crate::ring::{IntPoly, Modulus, ResPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum XMatrix {
    /// `(1)` over Z.
    Z,
    /// `diag(1, x)` over Z[x].
    Zx,
}

impl XMatrix {
    pub fn rank(self) -> usize {
        match self {
            XMatrix::Z => 1,
            XMatrix::Zx => 2,
        }
    }

    pub fn diag_entries(self) -> Vec<IntPoly> {
        match self {
            XMatrix::Z => vec![IntPoly::one()],
            XMatrix::Zx => vec![IntPoly::one(), IntPoly::x()],
        }
    }

    pub fn mat(self) -> Mat {
        Mat::diag(&self.diag_entries())
    }

    pub fn check_shape(self, m: &Mat, what: &str) -> Result<()> {
        let r = self.rank();
        if m.rows() != r || m.cols() != r {
            return Err(Error::shape(format!(
                "{} must be {}x{}, got {}x{}",
                what,
                r,
                r,
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Q0ClassZx {
    pub s: u8,
    pub t: ResPoly,
    pub u1: ResPoly,
    pub u2: ResPoly,
    pub u3: ResPoly,
}

impl Q0ClassZx {
    pub fn zero() -> Self {
        Q0ClassZx {
            s: 0,
            t: ResPoly::zero(Modulus::Four),
            u1: ResPoly::zero(Modulus::Two),
            u2: ResPoly::zero(Modulus::Two),
            u3: ResPoly::zero(Modulus::Two),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Q0ClassZx {
            s: (self.s + o.s) % 8,
            t: self.t.add(&o.t),
            u1: self.u1.add(&o.u1),
            u2: self.u2.add(&o.u2),
            u3: self.u3.add(&o.u3),
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl fmt::Debug for Q0ClassZx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(s={}, t={:?}, u1={:?}, u2={:?}, u3={:?})",
            self.s,
            self.t.coeffs(),
            self.u1.coeffs(),
            self.u2.coeffs(),
            self.u3.coeffs()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Q3ClassZx {
    pub value: ResPoly,
}

impl Q3ClassZx {
    pub fn zero() -> Self {
        Q3ClassZx {
            value: ResPoly::zero(Modulus::Two),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Q3ClassZx {
            value: self.value.add(&o.value),
        }
    }
}

/// Class in `L̂^n(Z)`: Z_8, Z_2, 0, Z_2 for n = 0, 1, 2, 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QnClassZ {
    pub n: u8,
    pub value: u8,
}

impl QnClassZ {
    pub fn order(n: u8) -> u8 {
        match n % 4 {
            0 => 8,
            2 => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QClass {
    Q0Zx(Q0ClassZx),
    Q3Zx(Q3ClassZx),
    Q1Zx(u8),
    Z(QnClassZ),
}

impl QClass {
    pub fn group(&self) -> &'static str {
        match self {
            QClass::Q0Zx(_) => "q0zx",
            QClass::Q3Zx(_) => "q3zx",
            QClass::Q1Zx(_) => "q1zx",
            QClass::Z(c) => ["q0z", "q1z", "q2z", "q3z"][usize::from(c.n % 4)],
        }
    }
}

pub fn q_equal(a: &QClass, b: &QClass) -> Result<bool> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch(a.group(), b.group()));
    }
    Ok(a == b)
}

pub fn q_add(a: &QClass, b: &QClass) -> Result<QClass> {
    Ok(match (a, b) {
        (QClass::Q0Zx(x), QClass::Q0Zx(y)) => QClass::Q0Zx(x.add(y)),
        (QClass::Q3Zx(x), QClass::Q3Zx(y)) => QClass::Q3Zx(x.add(y)),
        (QClass::Q1Zx(x), QClass::Q1Zx(y)) => QClass::Q1Zx((x + y) % 2),
        (QClass::Z(x), QClass::Z(y)) if x.n == y.n => QClass::Z(QnClassZ {
            n: x.n,
            value: (x.value + y.value) % QnClassZ::order(x.n),
        }),
        _ => return Err(Error::GroupMismatch(a.group(), b.group())),
    })
}

/// Positions `(2i+1)2^j` for `j = 0, 1, ...` below `len`, shifted by `offset`.
fn dyadic_positions(i: usize, len: usize, offset: isize) -> impl Iterator<Item = usize> {
    let mut m = 2 * i + 1;
    std::iter::from_fn(move || {
        let pos = m as isize + offset;
        if pos < 0 || pos as usize >= len {
            return None;
        }
        m *= 2;
        Some(pos as usize)
    })
}

fn mod_u8(c: &BigInt, m: u8) -> u8 {
    c.mod_floor(&BigInt::from(m)).to_u8().expect("small residue")
}

/// `f_{-1}(1): Q_{-1}(C(1)) → Z_2[x]`, `a ↦ a_0 + Σ_i (Σ_j a_{(2i+1)2^j}) x^{i+1}`.
pub fn f_m1_one(a: &IntPoly) -> ResPoly {
    let len = a.len();
    let mut out = vec![mod_u8(a.coeff(0), 2)];
    for i in 0..len / 2 {
        let sum: BigInt = dyadic_positions(i, len, 0).map(|p| a.coeff(p)).sum();
        out.push(mod_u8(&sum, 2));
    }
    ResPoly::new(Modulus::Two, out)
}

/// `f_{-1}(x): Q_{-1}(C(x)) → Z_2[x]`, `a ↦ Σ_i (Σ_j a_{(2i+1)2^j − 1}) x^i`.
pub fn f_m1_x(a: &IntPoly) -> ResPoly {
    let len = a.len();
    let out = (0..len.div_ceil(2))
        .map(|i| {
            let sum: BigInt = dyadic_positions(i, len, -1).map(|p| a.coeff(p)).sum();
            mod_u8(&sum, 2)
        })
        .collect();
    ResPoly::new(Modulus::Two, out)
}

/// `f_0(1): Q_0(C(1)) → Z_8 ⊕ Z_4[x] ⊕ Z_2[x]`; needs `a_k` even for `k ≥ 1`.
pub fn f0_one(a: &IntPoly) -> Result<(u8, ResPoly, ResPoly)> {
    if a.coeffs().iter().skip(1).any(|c| c.is_odd()) {
        return Err(Error::Numerator {
            group: "q0(1)",
            reason: format!("non-constant coefficients of {} must be even", a),
        });
    }
    let len = a.len();
    let s = mod_u8(a.coeff(0), 8);
    let t = (0..len / 2)
        .map(|i| {
            let sum: BigInt = dyadic_positions(i, len, 0).map(|p| a.coeff(p) / 2).sum();
            mod_u8(&sum, 4)
        })
        .collect();
    let u = (0..len.saturating_sub(1) / 2)
        .map(|k| mod_u8(&(a.coeff(2 * k + 2) / 2), 2))
        .collect();
    Ok((s, ResPoly::new(Modulus::Four, t), ResPoly::new(Modulus::Two, u)))
}

/// `f_0(x): Q_0(C(x)) → Z_4[x] ⊕ Z_2[x]`; needs `e` even.
pub fn f0_x(e: &IntPoly) -> Result<(ResPoly, ResPoly)> {
    if !e.is_even() {
        return Err(Error::Numerator {
            group: "q0(x)",
            reason: format!("{} must be even", e),
        });
    }
    let len = e.len();
    let t = (0..len.div_ceil(2))
        .map(|i| {
            let sum: BigInt = dyadic_positions(i, len, -1).map(|p| e.coeff(p) / 2).sum();
            mod_u8(&sum, 4)
        })
        .collect();
    let u = (0..len / 2)
        .map(|k| mod_u8(&(e.coeff(2 * k + 1) / 2), 2))
        .collect();
    Ok((ResPoly::new(Modulus::Four, t), ResPoly::new(Modulus::Two, u)))
}

/// `M − MXM ∈ Quad_r`.
pub fn check_numerator_q0(m: &Mat, x: XMatrix) -> bool {
    if x.check_shape(m, "M").is_err() || !m.is_symmetric() {
        return false;
    }
    let xm = x.mat();
    is_quad(&(m - &(&(m * &xm) * m)))
}

/// Both conditions on `N`: `N + N^T ∈ 2Sym_r` and `½(N+N^T) − N^T XN ∈ Quad_r`.
pub fn check_numerator_q1(n: &Mat, x: XMatrix) -> Result<()> {
    x.check_shape(n, "N")?;
    let sym = n + &n.transpose();
    let half = sym.half().map_err(|_| Error::Numerator {
        group: "q1",
        reason: "N + N^T is not in 2Sym".into(),
    })?;
    let rest = &half - &(&(&n.transpose() * &x.mat()) * n);
    if !is_quad(&rest) {
        return Err(Error::Numerator {
            group: "q1",
            reason: "(N + N^T)/2 - N^T X N does not have even diagonal".into(),
        });
    }
    Ok(())
}

fn entries2(m: &Mat) -> (&IntPoly, &IntPoly, &IntPoly) {
    (m.get(0, 0), m.get(0, 1), m.get(1, 1))
}

pub fn reduce_q0_Zx(m: &Mat) -> Result<Q0ClassZx> {
    XMatrix::Zx.check_shape(m, "M")?;
    if !m.is_symmetric() {
        return Err(Error::pre("M must be symmetric"));
    }
    if !check_numerator_q0(m, XMatrix::Zx) {
        return Err(Error::Numerator {
            group: "q0zx",
            reason: "M - MXM does not have even diagonal".into(),
        });
    }
    let (a, b, c) = entries2(m);
    if !b.is_even() {
        return Err(Error::Numerator {
            group: "q0zx",
            reason: "off-diagonal entry is odd".into(),
        });
    }
    // N = (0 −b/2; 0 0) turns M into diag(a, c − b^2) modulo the denominator.
    let c1 = c - &(b * b);
    let (s, d, u2) = f0_one(a)?;
    let (e, u3) = f0_x(&c1)?;
    Ok(Q0ClassZx {
        s,
        t: d.sub(&e),
        u1: d.reduce_to(Modulus::Two),
        u2,
        u3,
    })
}

pub fn reduce_q3_Zx(m: &Mat) -> Result<Q3ClassZx> {
    XMatrix::Zx.check_shape(m, "M")?;
    if !m.is_symmetric() {
        return Err(Error::pre("M must be symmetric"));
    }
    let (a, _, c) = entries2(m);
    Ok(Q3ClassZx {
        value: f_m1_one(&(a + &c.shift(1))),
    })
}

pub fn reduce_q1_Zx(n: &Mat) -> Result<u8> {
    check_numerator_q1(n, XMatrix::Zx)?;
    Ok(mod_u8(n.get(0, 0).coeff(0), 2))
}

pub fn reduce_qn_Z(n: u8, a: &BigInt) -> QnClassZ {
    let n = n % 4;
    QnClassZ {
        n,
        value: mod_u8(a, QnClassZ::order(n)),
    }
}

/// Preimages under the coefficient maps.
///
/// `*_naive` place each target coefficient at its leading position only. For
/// `f_0(1)` and `f_0(x)` the dyadic chains `(2i+1)2^j` run through the
/// positions holding the other component, so the naive preimages miss the
/// target whenever that component is nonzero. `*_section` subtract those
/// contributions and are exact right inverses.
pub mod preimage {
    use super::*;

    fn lift(r: &ResPoly) -> Vec<i64> {
        r.coeffs().iter().map(|&c| c as i64).collect()
    }

    fn at(v: &[i64], k: usize) -> i64 {
        v.get(k).copied().unwrap_or(0)
    }

    fn poly(cs: Vec<i64>) -> IntPoly {
        IntPoly::from_i64s(&cs)
    }

    /// `c_0 + Σ c_{i+1} x^{2i+1}`.
    pub fn f_m1_one_naive(c: &ResPoly) -> IntPoly {
        let c = lift(c);
        let mut a = vec![0; 2 * c.len().max(1)];
        for (k, &ck) in c.iter().enumerate() {
            a[if k == 0 { 0 } else { 2 * k - 1 }] = ck;
        }
        poly(a)
    }

    /// `Σ c_i x^{2i}`.
    pub fn f_m1_x_naive(c: &ResPoly) -> IntPoly {
        let c = lift(c);
        let mut a = vec![0; 2 * c.len()];
        for (i, &ci) in c.iter().enumerate() {
            a[2 * i] = ci;
        }
        poly(a)
    }

    /// `s + 2Σ b_i x^{2i+1} + 2Σ c_i x^{2i+2}`.
    pub fn f0_one_naive(s: u8, b: &ResPoly, c: &ResPoly) -> IntPoly {
        let (b, c) = (lift(b), lift(c));
        let n = b.len().max(c.len());
        let mut a = vec![0; 2 * n + 1];
        a[0] = s as i64;
        for i in 0..n {
            a[2 * i + 1] = 2 * at(&b, i);
            a[2 * i + 2] = 2 * at(&c, i);
        }
        poly(a)
    }

    /// `2Σ c_i x^{2i} + 2Σ d_i x^{2i+1}`.
    pub fn f0_x_naive(c: &ResPoly, d: &ResPoly) -> IntPoly {
        let (c, d) = (lift(c), lift(d));
        let n = c.len().max(d.len());
        let mut a = vec![0; 2 * n];
        for i in 0..n {
            a[2 * i] = 2 * at(&c, i);
            a[2 * i + 1] = 2 * at(&d, i);
        }
        poly(a)
    }

    /// Exact preimage of `(s, b, c)` under `f_0(1)`.
    pub fn f0_one_section(s: u8, b: &ResPoly, c: &ResPoly) -> IntPoly {
        let (b, c) = (lift(b), lift(c));
        let n = b.len().max(c.len());
        let mut a = vec![0; 2 * n + 1];
        a[0] = s as i64;
        for k in 0..n {
            a[2 * k + 2] = 2 * at(&c, k);
        }
        for i in 0..n {
            // positions (2i+1)2^j, j ≥ 1, are 2k+2 with k = (2i+1)2^{j-1} − 1
            let mut carry = 0;
            let mut m = 2 * i + 1;
            while m - 1 < n {
                carry += at(&c, m - 1);
                m *= 2;
            }
            a[2 * i + 1] = 2 * (at(&b, i) - carry).rem_euclid(4);
        }
        poly(a)
    }

    /// Exact preimage of `(c, d)` under `f_0(x)`.
    pub fn f0_x_section(c: &ResPoly, d: &ResPoly) -> IntPoly {
        let (c, d) = (lift(c), lift(d));
        let n = c.len().max(d.len());
        let mut a = vec![0; 2 * n];
        for k in 0..n {
            a[2 * k + 1] = 2 * at(&d, k);
        }
        for i in 0..n {
            // positions (2i+1)2^j − 1, j ≥ 1, are 2k+1 with k = (2i+1)2^{j-1} − 1
            let mut carry = 0;
            let mut m = 2 * i + 1;
            while m - 1 < n {
                carry += at(&d, m - 1);
                m *= 2;
            }
            a[2 * i] = 2 * (at(&c, i) - carry).rem_euclid(4);
        }
        poly(a)
    }

    fn q0_diag(
        class: &Q0ClassZx,
        one: impl Fn(u8, &ResPoly, &ResPoly) -> IntPoly,
        x: impl Fn(&ResPoly, &ResPoly) -> IntPoly,
    ) -> Mat {
        // d ≡ u1 (mod 2) lifted to {0, 1}, e = d − t
        let d = class.u1.lift_to(Modulus::Four);
        let e = d.sub(&class.t);
        Mat::diag(&[one(class.s, &d, &class.u2), x(&e, &class.u3)])
    }

    /// `diag(a, c)` built from the naive coefficient preimages.
    pub fn q0zx_naive(class: &Q0ClassZx) -> Mat {
        q0_diag(class, f0_one_naive, f0_x_naive)
    }

    /// `diag(a, c)` with `reduce_q0_Zx` of it equal to `class`.
    pub fn q0zx_section(class: &Q0ClassZx) -> Mat {
        q0_diag(class, f0_one_section, f0_x_section)
    }

    /// `diag(a, 0)` with `a` the naive `f_{-1}(1)` preimage; this one is exact.
    pub fn q3zx(class: &Q3ClassZx) -> Mat {
        Mat::diag(&[f_m1_one_naive(&class.value), IntPoly::zero()])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Z,
    Zx,
}

/// `L̂^n` for `n = 0, 1, 2, 3`.
pub fn lgroups_table(ring: Ring) -> [&'static str; 4] {
    match ring {
        Ring::Z => ["Z_8", "Z_2", "0", "Z_2"],
        Ring::Zx => ["A_8⊕A_4[x]⊕A_2[x]^3", "A_2", "0", "A_2[x]"],
    }
}

/// `UNil_n(Z)` for `n = 0, 1, 2, 3`.
pub fn unil_table() -> [&'static str; 4] {
    ["0", "0", "xZ_2[x]", "Z_4[x]⊕Z_2[x]^3"]
}

pub const UNIL3_SPLITTING: &str = "UNil_3(A) ≅ Q_0(B^{A[x]},β^{A[x]})/A_8";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_poly;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn sym2(a: IntPoly, b: IntPoly, c: IntPoly) -> Mat {
        Mat::from_rows(vec![vec![a, b.clone()], vec![b, c]]).unwrap()
    }

    fn bits(r: &ResPoly) -> Vec<u8> {
        r.coeffs().to_vec()
    }

    #[test]
    fn numerator_examples() {
        assert!(check_numerator_q0(&Mat::zeros(2, 2), XMatrix::Zx));
        assert!(check_numerator_q0(&Mat::from_i64(&[&[1]]), XMatrix::Z));
        assert!(!check_numerator_q0(&Mat::from_i64(&[&[0, 1], &[1, 0]]), XMatrix::Zx));
    }

    #[test]
    fn q0_examples() {
        assert!(reduce_q0_Zx(&Mat::zeros(2, 2)).unwrap().is_zero());
        let c = reduce_q0_Zx(&sym2(p(&[0, 2]), p(&[]), p(&[]))).unwrap();
        assert_eq!(
            (c.s, bits(&c.t), bits(&c.u1), bits(&c.u2), bits(&c.u3)),
            (0, vec![1], vec![1], vec![], vec![])
        );
        // 5 + 2(1 + 3x)-odd part + 2x-even part: position 4 lies on the chain of position 1
        let a = p(&[5, 2, 0, 6, 2]);
        let cl = reduce_q0_Zx(&sym2(a, p(&[]), p(&[]))).unwrap();
        assert_eq!(cl.s, 5);
        assert_eq!(bits(&cl.t), vec![2, 3]);
        assert_eq!(bits(&cl.u2), vec![0, 1]);
    }

    #[test]
    fn naive_f0_preimages_miss() {
        let zero4 = ResPoly::zero(Modulus::Four);
        let one2 = ResPoly::new(Modulus::Two, vec![1]);
        // f_0(1)(2x^2) = (0, 1, 1), not (0, 0, 1)
        let a = preimage::f0_one_naive(0, &zero4, &one2);
        assert_eq!(a, p(&[0, 0, 2]));
        let (s, t, u) = f0_one(&a).unwrap();
        assert_eq!((s, bits(&t), bits(&u)), (0, vec![1], vec![1]));
        // f_0(x)(2x) = (1, 1), not (0, 1)
        let e = preimage::f0_x_naive(&zero4, &one2);
        let (t, u) = f0_x(&e).unwrap();
        assert_eq!((bits(&t), bits(&u)), (vec![1], vec![1]));

        let b = ResPoly::new(Modulus::Four, vec![1, 3]);
        let c = ResPoly::new(Modulus::Two, vec![0, 1]);
        let a = preimage::f0_one_section(5, &b, &c);
        assert_eq!(a, p(&[5, 0, 0, 6, 2]));
        let (s, t, u) = f0_one(&a).unwrap();
        assert_eq!((s, t, u), (5, b, c));
    }

    #[test]
    fn q0_rejects_non_numerator() {
        let m = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(matches!(reduce_q0_Zx(&m), Err(Error::Numerator { .. })));
    }

    #[test]
    fn q3_examples() {
        assert!(reduce_q3_Zx(&Mat::from_i64(&[&[0, 1], &[1, 0]])).unwrap().value.is_zero());
        assert!(reduce_q3_Zx(&Mat::zeros(2, 2)).unwrap().value.is_zero());
        // c_0 + Σ c_{i+1} x^{2i+1} with c = 1 + x^2 + x^3 → 1 + x^2 + x^3
        let a = p(&[1, 0, 0, 1, 0, 1]);
        let v = reduce_q3_Zx(&sym2(a, p(&[]), p(&[]))).unwrap().value;
        assert_eq!(bits(&v), vec![1, 0, 1, 1]);
    }

    #[test]
    fn q1_examples() {
        assert_eq!(reduce_q1_Zx(&Mat::zeros(2, 2)).unwrap(), 0);
        assert!(matches!(
            reduce_q1_Zx(&Mat::identity(2)),
            Err(Error::Numerator { .. })
        ));
        assert_eq!(reduce_q1_Zx(&Mat::from_i64(&[&[1, 0], &[0, 0]])).unwrap(), 1);
    }

    #[test]
    fn qz_examples() {
        assert_eq!(reduce_qn_Z(0, &BigInt::from(9)).value, 1);
        assert_eq!(reduce_qn_Z(1, &BigInt::from(3)).value, 1);
        assert_eq!(reduce_qn_Z(2, &BigInt::from(12345)).value, 0);
        assert_eq!(reduce_qn_Z(0, &BigInt::from(-1)).value, 7);
        assert_eq!(reduce_qn_Z(7, &BigInt::from(-1)).n, 3);
    }

    #[test]
    fn class_arithmetic() {
        let x = QClass::Q3Zx(Q3ClassZx { value: ResPoly::mod2(&[0, 1]) });
        assert_eq!(q_add(&x, &x).unwrap(), QClass::Q3Zx(Q3ClassZx::zero()));
        let mut four = Q0ClassZx::zero();
        four.s = 4;
        let sum = q_add(&QClass::Q0Zx(four.clone()), &QClass::Q0Zx(four)).unwrap();
        assert_eq!(sum, QClass::Q0Zx(Q0ClassZx::zero()));
        assert!(q_add(&x, &QClass::Q1Zx(1)).is_err());
        assert!(q_equal(&x, &QClass::Q1Zx(1)).is_err());
    }

    #[test]
    fn tables() {
        assert_eq!(lgroups_table(Ring::Z), ["Z_8", "Z_2", "0", "Z_2"]);
        assert_eq!(lgroups_table(Ring::Zx)[0], "A_8⊕A_4[x]⊕A_2[x]^3");
        assert_eq!(unil_table()[2], "xZ_2[x]");
    }

    // Reference implementations straight from the index formulas, scanning
    // every exponent pair instead of walking dyadic chains.
    fn f_m1_one_ref(a: &IntPoly) -> Vec<u8> {
        let n = a.len();
        let mut out = vec![0u8; n + 1];
        out[0] = mod_u8(a.coeff(0), 2);
        for k in 1..n {
            let mut m = k;
            while m % 2 == 0 {
                m /= 2;
            }
            let i = (m - 1) / 2;
            out[i + 1] ^= mod_u8(a.coeff(k), 2);
        }
        ResPoly::mod2(&out).coeffs().to_vec()
    }

    fn f_m1_x_ref(a: &IntPoly) -> Vec<u8> {
        let n = a.len();
        let mut out = vec![0u8; n + 1];
        for k in 0..n {
            let mut m = k + 1;
            while m % 2 == 0 {
                m /= 2;
            }
            out[(m - 1) / 2] ^= mod_u8(a.coeff(k), 2);
        }
        ResPoly::mod2(&out).coeffs().to_vec()
    }

    proptest! {
        #[test]
        fn f_maps_match_reference(v in prop::collection::vec(-9i64..9, 0..20)) {
            let a = IntPoly::from_i64s(&v);
            prop_assert_eq!(f_m1_one(&a).coeffs().to_vec(), f_m1_one_ref(&a));
            prop_assert_eq!(f_m1_x(&a).coeffs().to_vec(), f_m1_x_ref(&a));
        }

        #[test]
        fn q3_additive(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m1 = crate::gen::random_sym(&mut rng, 2, 5, 5);
            let m2 = crate::gen::random_sym(&mut rng, 2, 5, 5);
            let lhs = reduce_q3_Zx(&(&m1 + &m2)).unwrap();
            prop_assert_eq!(lhs, reduce_q3_Zx(&m1).unwrap().add(&reduce_q3_Zx(&m2).unwrap()));
        }

        #[test]
        fn q0_additive(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut gen_num = || {
                let a = &IntPoly::from_big(random_poly(&mut rng, 0, 9).coeff(0).clone())
                    + &random_poly(&mut rng, 5, 5).scale_i64(2);
                let b = random_poly(&mut rng, 4, 5).scale_i64(2);
                let c = random_poly(&mut rng, 5, 5).scale_i64(2);
                sym2(a, b, c)
            };
            let (m1, m2) = (gen_num(), gen_num());
            prop_assert!(check_numerator_q0(&m1, XMatrix::Zx));
            let lhs = reduce_q0_Zx(&(&m1 + &m2)).unwrap();
            prop_assert_eq!(lhs, reduce_q0_Zx(&m1).unwrap().add(&reduce_q0_Zx(&m2).unwrap()));
        }
    }
}
