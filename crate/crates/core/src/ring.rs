//! Exact arithmetic in Z[x] and in the residue rings Z_2[x], Z_4[x], Z_8[x].
//!
//! The squaring decomposition `a = p^2 + q^2 x (mod 2)` lives here as well,
//! since every invariant downstream is assembled from it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense polynomial over Z, coefficients in ascending degree.
///
/// Always normalized: no trailing zero coefficient, and zero is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs(vec![BigInt::from(c)])
    }

    pub fn from_big(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// `c * x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::from(c);
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> &BigInt {
        self.coeffs.get(i).unwrap_or(&BigInt::ZERO)
    }

    /// Number of stored coefficients (degree + 1, or 0 for the zero polynomial).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The constant term as a machine integer, if the polynomial is constant and fits.
    pub fn as_constant_i64(&self) -> Option<i64> {
        if self.is_constant() {
            self.coeff(0).to_i64()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_even())
    }

    /// Exact division by 2.
    pub fn half(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::OddHalf);
        }
        Ok(IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / 2).collect(),
        })
    }

    /// Exact division by `2^k`.
    pub fn div_pow2(&self, k: u32) -> Result<Self> {
        let m = BigInt::one() << k;
        if self.coeffs.iter().any(|c| !(c % &m).is_zero()) {
            return Err(Error::OddHalf);
        }
        Ok(IntPoly {
            coeffs: self.coeffs.iter().map(|c| c / &m).collect(),
        })
    }

    /// True iff every coefficient is divisible by `m`.
    pub fn divisible_by(&self, m: &BigInt) -> bool {
        self.coeffs.iter().all(|c| (c % m).is_zero())
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn rem_nonneg(&self, m: &BigInt) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.mod_floor(m)).collect())
    }

    pub fn reduce_mod(&self, m: Modulus) -> ResPoly {
        let mb = BigInt::from(m.value());
        let cs = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&mb).to_u8().expect("residue fits in u8"))
            .collect();
        ResPoly::new(m, cs)
    }

    /// Value at `x = t`.
    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * t + c)
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{}x", mag)?,
                (_, true) => write!(f, "x^{}", i)?,
                (_, false) => write!(f, "{}x^{}", mag, i)?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.len().max(rhs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.len().max(rhs.len());
        IntPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.len() + rhs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

pub fn poly_add(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a + b
}

pub fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    a * b
}

pub fn reduce_mod(a: &IntPoly, m: u32) -> Result<ResPoly> {
    Ok(a.reduce_mod(Modulus::try_from(m)?))
}

/// The residue moduli in scope.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulus {
    Two,
    Four,
    Eight,
}

impl Modulus {
    pub fn value(self) -> u8 {
        match self {
            Modulus::Two => 2,
            Modulus::Four => 4,
            Modulus::Eight => 8,
        }
    }
}

impl TryFrom<u32> for Modulus {
    type Error = Error;
    fn try_from(m: u32) -> Result<Self> {
        match m {
            2 => Ok(Modulus::Two),
            4 => Ok(Modulus::Four),
            8 => Ok(Modulus::Eight),
            other => Err(Error::InvalidModulus(other)),
        }
    }
}

/// Polynomial with coefficients in `Z/m`, `m` in {2, 4, 8}. Not degree-truncated.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResPoly {
    modulus: Modulus,
    coeffs: Vec<u8>,
}

impl ResPoly {
    pub fn new(modulus: Modulus, coeffs: Vec<u8>) -> Self {
        let m = modulus.value();
        let mut coeffs: Vec<u8> = coeffs.into_iter().map(|c| c % m).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ResPoly { modulus, coeffs }
    }

    pub fn zero(modulus: Modulus) -> Self {
        ResPoly {
            modulus,
            coeffs: Vec::new(),
        }
    }

    /// Mod-2 polynomial from coefficient bits.
    pub fn mod2(bits: &[u8]) -> Self {
        Self::new(Modulus::Two, bits.to_vec())
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u8 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Integral lift with coefficients in `[0, m)`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Image under the surjection to a smaller modulus.
    pub fn reduce_to(&self, m: Modulus) -> Self {
        assert!(
            m <= self.modulus,
            "cannot reduce mod {} to mod {}",
            self.modulus.value(),
            m.value()
        );
        Self::new(m, self.coeffs.clone())
    }

    /// Same coefficients in `[0, m)`, read modulo a larger `m'`.
    pub fn lift_to(&self, m: Modulus) -> Self {
        assert!(m >= self.modulus, "lift_to needs a larger modulus");
        Self::new(m, self.coeffs.clone())
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(u8, u8) -> u8) -> Self {
        assert_eq!(self.modulus, rhs.modulus, "residue modulus mismatch");
        let n = self.len().max(rhs.len());
        Self::new(
            self.modulus,
            (0..n).map(|i| f(self.coeff(i), rhs.coeff(i))).collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let m = self.modulus.value();
        self.zip_with(rhs, |a, b| (a + b) % m)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let m = self.modulus.value();
        self.zip_with(rhs, |a, b| (a + m - b) % m)
    }

    pub fn neg(&self) -> Self {
        let m = self.modulus.value();
        Self::new(
            self.modulus,
            self.coeffs.iter().map(|&c| (m - c) % m).collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.modulus, rhs.modulus, "residue modulus mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.modulus);
        }
        let m = u32::from(self.modulus.value());
        let mut out = vec![0u32; self.len() + rhs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + u32::from(a) * u32::from(b)) % m;
            }
        }
        Self::new(self.modulus, out.into_iter().map(|c| c as u8).collect())
    }
}

impl fmt::Debug for ResPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.coeffs, self.modulus.value())
    }
}

/// Element of the Tate group of Z_2 acting on Z[x], identified with Z_2[x].
pub type TateClass = ResPoly;

/// Splits `a` (mod 2) as `p^2 + q^2 x`: `p_j = a_{2j}`, `q_j = a_{2j+1}`.
pub fn tate_decompose(a: &TateClass) -> (ResPoly, ResPoly) {
    assert_eq!(a.modulus(), Modulus::Two, "tate_decompose expects mod 2");
    let p = a.coeffs().iter().step_by(2).copied().collect();
    let q = a.coeffs().iter().skip(1).step_by(2).copied().collect();
    (ResPoly::new(Modulus::Two, p), ResPoly::new(Modulus::Two, q))
}

/// `p^2 + q^2 x` mod 2.
pub fn tate_compose(p: &ResPoly, q: &ResPoly) -> TateClass {
    assert_eq!(p.modulus(), Modulus::Two, "tate_compose expects mod 2");
    assert_eq!(q.modulus(), Modulus::Two, "tate_compose expects mod 2");
    // Frobenius is additive mod 2, so squaring spreads coefficients to even slots.
    let n = (2 * p.len()).max(2 * q.len());
    let mut out = vec![0u8; n];
    for (j, &c) in p.coeffs().iter().enumerate() {
        out[2 * j] ^= c;
    }
    for (j, &c) in q.coeffs().iter().enumerate() {
        out[2 * j + 1] ^= c;
    }
    ResPoly::new(Modulus::Two, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn add_examples() {
        assert_eq!(poly_add(&p(&[1, 2]), &p(&[0, 0, 3])), p(&[1, 2, 3]));
        assert_eq!(poly_add(&p(&[1]), &p(&[-1])), IntPoly::zero());
        assert!(poly_add(&p(&[1]), &p(&[-1])).coeffs().is_empty());
        assert_eq!(poly_add(&p(&[0, 1]), &p(&[0, 1])), p(&[0, 2]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&p(&[0, 1]), &p(&[0, 1])), p(&[0, 0, 1]));
        assert_eq!(poly_mul(&p(&[]), &p(&[5, 7])), IntPoly::zero());
        assert_eq!(poly_mul(&p(&[1, 1]), &p(&[1, 1])), p(&[1, 2, 1]));
    }

    #[test]
    fn reduce_mod_examples() {
        assert_eq!(reduce_mod(&p(&[9, -1]), 8).unwrap().coeffs(), &[1, 7]);
        assert!(reduce_mod(&p(&[4, 2]), 2).unwrap().is_zero());
        assert_eq!(reduce_mod(&p(&[6]), 4).unwrap().coeffs(), &[2]);
        assert_eq!(reduce_mod(&p(&[1]), 3), Err(Error::InvalidModulus(3)));
    }

    #[test]
    fn halving() {
        assert!(p(&[2, 4]).is_even());
        assert_eq!(p(&[2, 4]).half().unwrap(), p(&[1, 2]));
        assert!(!p(&[2, 1]).is_even());
        assert_eq!(p(&[2, 1]).half(), Err(Error::OddHalf));
    }

    #[test]
    fn tate_examples() {
        let (pp, qq) = tate_decompose(&ResPoly::mod2(&[1, 1, 1]));
        assert_eq!((pp.coeffs(), qq.coeffs()), (&[1u8, 1][..], &[1u8][..]));
        let (pp, qq) = tate_decompose(&ResPoly::zero(Modulus::Two));
        assert!(pp.is_zero() && qq.is_zero());
        let (pp, qq) = tate_decompose(&ResPoly::mod2(&[0, 0, 0, 1]));
        assert!(pp.is_zero());
        assert_eq!(qq.coeffs(), &[0, 1]);

        assert_eq!(tate_compose(&ResPoly::mod2(&[1]), &ResPoly::mod2(&[])).coeffs(), &[1]);
        assert_eq!(tate_compose(&ResPoly::mod2(&[]), &ResPoly::mod2(&[1])).coeffs(), &[0, 1]);
        assert_eq!(
            tate_compose(&ResPoly::mod2(&[1, 1]), &ResPoly::mod2(&[1])).coeffs(),
            &[1, 1, 1]
        );
    }

    // Squaring by actual ring multiplication, kept apart from the slot-spreading
    // shortcut used by tate_compose.
    fn compose_by_mult(pp: &ResPoly, qq: &ResPoly) -> ResPoly {
        let x = ResPoly::mod2(&[0, 1]);
        pp.mul(pp).add(&qq.mul(qq).mul(&x))
    }

    fn arb_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-50i64..50, 0..7).prop_map(|v| IntPoly::from_i64s(&v))
    }

    fn arb_bits() -> impl Strategy<Value = ResPoly> {
        prop::collection::vec(0u8..2, 0..10).prop_map(|v| ResPoly::mod2(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn half_inverts_doubling(a in arb_poly()) {
            prop_assert_eq!(a.scale_i64(2).half().unwrap(), a);
        }

        #[test]
        fn tate_round_trip(a in arb_bits()) {
            let (pp, qq) = tate_decompose(&a);
            prop_assert_eq!(tate_compose(&pp, &qq), a.clone());
            prop_assert_eq!(compose_by_mult(&pp, &qq), a);
        }

        #[test]
        fn tate_decompose_of_compose(pp in arb_bits(), qq in arb_bits()) {
            prop_assert_eq!(tate_decompose(&tate_compose(&pp, &qq)), (pp, qq));
        }

        #[test]
        fn frobenius_additive(a in arb_bits(), b in arb_bits()) {
            let s = a.add(&b);
            prop_assert_eq!(s.mul(&s), a.mul(&a).add(&b.mul(&b)));
            let (p1, q1) = tate_decompose(&a);
            let (p2, q2) = tate_decompose(&b);
            prop_assert_eq!(tate_decompose(&s), (p1.add(&p2), q1.add(&q2)));
        }

        #[test]
        fn reduce_is_ring_hom(a in arb_poly(), b in arb_poly()) {
            for m in [Modulus::Two, Modulus::Four, Modulus::Eight] {
                prop_assert_eq!((&a * &b).reduce_mod(m), a.reduce_mod(m).mul(&b.reduce_mod(m)));
                prop_assert_eq!((&a - &b).reduce_mod(m), a.reduce_mod(m).sub(&b.reduce_mod(m)));
            }
        }
    }
}
