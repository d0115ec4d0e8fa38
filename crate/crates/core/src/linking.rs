//! Quadratic linking forms over `(Z[x], (2)^∞)` presented by resolutions
//! `(d, δ, φ)`, and the canonical S-formations that produce them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::forms::is_quad;
use crate::matrix::{pow2_exponent, Mat};
use crate::qnormal::{check_numerator_q0, XMatrix};
use crate::ring::IntPoly;

/// Element of `Z[1/2][x]`, stored as `num / 2^exp` in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: IntPoly,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: IntPoly, exp: u32) -> Self {
        let (mut num, mut exp) = (num, exp);
        while exp > 0 && !num.is_zero() && num.is_even() {
            num = num.half().expect("checked even");
            exp -= 1;
        }
        if num.is_zero() {
            exp = 0;
        }
        Dyadic { num, exp }
    }

    pub fn zero() -> Self {
        Dyadic {
            num: IntPoly::zero(),
            exp: 0,
        }
    }

    pub fn integral(p: IntPoly) -> Self {
        Dyadic { num: p, exp: 0 }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom_exp(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn aligned(&self, e: u32) -> IntPoly {
        self.num.scale(&(BigInt::one() << (e - self.exp)))
    }

    pub fn add(&self, o: &Self) -> Self {
        let e = self.exp.max(o.exp);
        Self::new(&self.aligned(e) + &o.aligned(e), e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            num: -&self.num,
            exp: self.exp,
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        Self::new(self.num.scale_i64(c), self.exp)
    }

    /// Canonical representative modulo `m · Z[x]`, `m = 2^t`: numerator
    /// coefficients reduced into `[0, m 2^k)`.
    pub fn reduce_mod_pow2(&self, t: u32) -> Self {
        let m = BigInt::one() << (self.exp + t);
        Self::new(self.num.rem_nonneg(&m), self.exp)
    }

    /// Class in `Z[1/2][x] / Z[x]`.
    pub fn mod_int(&self) -> Self {
        self.reduce_mod_pow2(0)
    }

    /// Class in `Z[1/2][x] / 2Z[x]`.
    pub fn mod_2int(&self) -> Self {
        self.reduce_mod_pow2(1)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/2^{}", self.num, self.exp)
        }
    }
}

/// Matrix over `Z[1/2][x]` as `numerator / 2^denom_exp`, in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntMat {
    numerator: Mat,
    denom_exp: u32,
}

impl HalfIntMat {
    pub fn new(numerator: Mat, denom_exp: u32) -> Self {
        let (mut numerator, mut denom_exp) = (numerator, denom_exp);
        while denom_exp > 0 && numerator.is_even() {
            numerator = numerator.half().expect("checked even");
            denom_exp -= 1;
        }
        HalfIntMat {
            numerator,
            denom_exp,
        }
    }

    pub fn numerator(&self) -> &Mat {
        &self.numerator
    }

    pub fn denom_exp(&self) -> u32 {
        self.denom_exp
    }

    /// Inverse of a square integral matrix with `det = ±2^m`.
    pub fn inverse_of(d: &Mat) -> Result<Self> {
        let det = d.det()?;
        let m = pow2_exponent(&det).ok_or_else(|| {
            Error::pre(format!("d is not S-invertible: det = {} is not ±2^m", det))
        })?;
        let sign = if det.coeff(0) < &BigInt::from(0) { -1 } else { 1 };
        Ok(Self::new(d.adjugate()?.scale_i64(sign), m))
    }

    pub fn transpose(&self) -> Self {
        HalfIntMat {
            numerator: self.numerator.transpose(),
            denom_exp: self.denom_exp,
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(Self::new(
            self.numerator.try_mul(&o.numerator)?,
            self.denom_exp + o.denom_exp,
        ))
    }

    pub fn mul_int(&self, o: &Mat) -> Result<Self> {
        Ok(Self::new(self.numerator.try_mul(o)?, self.denom_exp))
    }

    pub fn int_mul(o: &Mat, h: &Self) -> Result<Self> {
        Ok(Self::new(o.try_mul(&h.numerator)?, h.denom_exp))
    }

    /// `v^T H w` as an exact dyadic value.
    pub fn bilinear(&self, v: &[IntPoly], w: &[IntPoly]) -> Dyadic {
        Dyadic::new(self.numerator.bilinear(v, w), self.denom_exp)
    }
}

/// Element `(x1, x0)` of `B^1 ⊕ B_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VecPair {
    pub x1: Vec<IntPoly>,
    pub x0: Vec<IntPoly>,
}

impl VecPair {
    pub fn zero(u: usize) -> Self {
        VecPair {
            x1: vec![IntPoly::zero(); u],
            x0: vec![IntPoly::zero(); u],
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let sum = |a: &[IntPoly], b: &[IntPoly]| a.iter().zip(b).map(|(p, q)| p + q).collect();
        VecPair {
            x1: sum(&self.x1, &o.x1),
            x0: sum(&self.x0, &o.x0),
        }
    }
}

/// Resolution `(d, δ, φ)` of a quadratic linking form with lagrangian.
#[derive(Clone, Debug)]
pub struct LinkingResolution {
    d: Mat,
    delta: Mat,
    phi: Mat,
    d_inv: HalfIntMat,
    // d^{-1} φ d^{-T}
    k: HalfIntMat,
}

impl PartialEq for LinkingResolution {
    fn eq(&self, o: &Self) -> bool {
        self.d == o.d && self.delta == o.delta && self.phi == o.phi
    }
}

impl LinkingResolution {
    pub fn new(d: Mat, delta: Mat, phi: Mat) -> Result<Self> {
        let u = d.rows();
        for (name, m) in [("d", &d), ("delta", &delta), ("phi", &phi)] {
            if m.rows() != u || m.cols() != u {
                return Err(Error::shape(format!("{} must be {}x{}", name, u, u)));
            }
        }
        if !delta.is_symmetric() || !phi.is_symmetric() {
            return Err(Error::pre("delta and phi must be symmetric"));
        }
        let d_inv = HalfIntMat::inverse_of(&d)?;
        if !is_quad(&(&(&d.transpose() * &delta) * &d)) {
            return Err(Error::pre("d^T delta d does not have even diagonal"));
        }
        if !is_quad(&(&phi - &(&(&phi * &delta) * &phi))) {
            return Err(Error::pre("phi - phi delta phi does not have even diagonal"));
        }
        let k = d_inv.mul_int(&phi)?.mul(&d_inv.transpose())?;
        Ok(LinkingResolution {
            d,
            delta,
            phi,
            d_inv,
            k,
        })
    }

    pub fn rank(&self) -> usize {
        self.d.rows()
    }

    pub fn d(&self) -> &Mat {
        &self.d
    }

    pub fn delta(&self) -> &Mat {
        &self.delta
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn d_inverse(&self) -> &HalfIntMat {
        &self.d_inv
    }

    /// Image of `(v, w) ∈ B^0 ⊕ B_1` in `B^1 ⊕ B_0`; these are zero in `T`.
    pub fn relation(&self, v: &[IntPoly], w: &[IntPoly]) -> VecPair {
        let dw = self.d.apply(w);
        let phiv = self.phi.apply(v);
        VecPair {
            x1: self.d.transpose().apply(v),
            x0: dw.iter().zip(&phiv).map(|(a, b)| a + b).collect(),
        }
    }

    fn check(&self, x: &VecPair) -> Result<()> {
        let u = self.rank();
        if x.x1.len() != u || x.x0.len() != u {
            return Err(Error::shape(format!("vector pair must have length {}", u)));
        }
        Ok(())
    }

    /// `−x1^T K y1 + x1^T d^{-1} y0 + y1^T d^{-1} x0` before reduction.
    fn bilinear(&self, x: &VecPair, y: &VecPair) -> Dyadic {
        self.k
            .bilinear(&x.x1, &y.x1)
            .neg()
            .add(&self.d_inv.bilinear(&x.x1, &y.x0))
            .add(&self.d_inv.bilinear(&y.x1, &x.x0))
    }
}

/// `λ(x, y) ∈ Z[1/2][x] / Z[x]`.
pub fn eval_lambda(res: &LinkingResolution, x: &VecPair, y: &VecPair) -> Result<Dyadic> {
    res.check(x)?;
    res.check(y)?;
    Ok(res.bilinear(x, y).mod_int())
}

/// `μ(x) ∈ Z[1/2][x] / 2Z[x]`.
pub fn eval_mu(res: &LinkingResolution, x: &VecPair) -> Result<Dyadic> {
    res.check(x)?;
    let delta_term = Dyadic::integral(res.delta.bilinear(&x.x0, &x.x0));
    Ok(res.bilinear(x, x).sub(&delta_term).mod_2int())
}

/// Formation `(H_−(A^n); F, G)` given by column inclusions into `A^n ⊕ A^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formation {
    pub rank: usize,
    pub f_inclusion: Mat,
    pub g_inclusion: Mat,
}

/// The hyperbolic `(−1)`-quadratic form `(0 1; 0 0)` vanishes on the span of
/// `c = (top; bottom)` in `Q_{−1}`.
fn spans_isotropic(c: &Mat, n: usize) -> bool {
    let top = c.submatrix(0, 0, n, c.cols());
    let bot = c.submatrix(n, 0, n, c.cols());
    is_quad(&(&top.transpose() * &bot))
}

impl Formation {
    pub fn new(rank: usize, f_inclusion: Mat, g_inclusion: Mat) -> Result<Self> {
        for (name, m) in [("F", &f_inclusion), ("G", &g_inclusion)] {
            if m.rows() != 2 * rank || m.cols() != rank {
                return Err(Error::shape(format!(
                    "{} inclusion must be {}x{}",
                    name,
                    2 * rank,
                    rank
                )));
            }
            if !spans_isotropic(m, rank) {
                return Err(Error::pre(format!(
                    "{} is not isotropic for the hyperbolic quadratic form",
                    name
                )));
            }
        }
        Ok(Formation {
            rank,
            f_inclusion,
            g_inclusion,
        })
    }

    /// `Some(m)` if `det[F | G] = ±2^m`, i.e. F and G are complementary after inverting 2.
    pub fn s_exponent(&self) -> Option<u32> {
        let sq = self.f_inclusion.hcat(&self.g_inclusion).ok()?;
        pow2_exponent(&sq.det().ok()?)
    }
}

/// A formation whose lagrangians become complementary over `Z[1/2][x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFormation {
    formation: Formation,
    x: XMatrix,
}

impl SFormation {
    pub fn new(formation: Formation, x: XMatrix) -> Result<Self> {
        if formation.s_exponent().is_none() {
            return Err(Error::pre("det[F | G] is not ±2^m"));
        }
        Ok(SFormation { formation, x })
    }

    pub fn formation(&self) -> &Formation {
        &self.formation
    }

    /// Linking form resolution `(2I, X, M)` of a formation of canonical shape.
    ///
    /// Only the shapes produced by [`canonical_formation`] are recognised.
    pub fn to_linking_resolution(&self) -> Result<LinkingResolution> {
        let r = self.x.rank();
        let f = &self.formation;
        if f.rank != 2 * r {
            return Err(Error::pre("not a canonical formation"));
        }
        let m = f.g_inclusion.submatrix(2 * r + r, r, r, r);
        let expected = canonical_formation(&m, self.x)?;
        if expected != *self {
            return Err(Error::pre(
                "only canonical formations can be converted to linking forms",
            ));
        }
        LinkingResolution::new(Mat::identity(r).scale_i64(2), self.x.mat(), m)
    }
}

fn check_rank(m: &Mat, x: XMatrix) -> Result<usize> {
    let r = x.rank();
    if m.rows() != r || m.cols() != r {
        return Err(Error::shape(format!("M must be {}x{}", r, r)));
    }
    Ok(r)
}

/// `(H_−(A^{2r}); A^{2r}, G_M)` with `G_M` spanned by
/// `((I 0; −2X I−XM); (0 2I; 2I M))`.
pub fn canonical_formation(m: &Mat, x: XMatrix) -> Result<SFormation> {
    let r = check_rank(m, x)?;
    if !m.is_symmetric() || !check_numerator_q0(m, x) {
        return Err(Error::pre("M must be symmetric with M - MXM even-diagonal"));
    }
    let xm = x.mat();
    let i = Mat::identity(r);
    let z = Mat::zeros(r, r);
    let top = Mat::block2(&i, &z, &xm.scale_i64(-2), &(&i - &(&xm * m)))?;
    let bot = Mat::block2(&z, &i.scale_i64(2), &i.scale_i64(2), m)?;
    let f = Mat::identity(2 * r).vcat(&Mat::zeros(2 * r, 2 * r))?;
    SFormation::new(Formation::new(2 * r, f, top.vcat(&bot)?)?, x)
}

/// Marks the lagrangian `U = 0 ⊕ (A_2)^r` of an order-2 linking form: the
/// `x0` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LagrangianMarker {
    pub rank: usize,
}

/// The order-2 form `((A_2)^r ⊕ (A_2)^r, (−M/4 I/2; I/2 0), (−M/4; −X))`.
pub fn canonical_order2_form(
    m: &Mat,
    x: XMatrix,
) -> Result<(LinkingResolution, LagrangianMarker)> {
    let r = check_rank(m, x)?;
    if !m.is_symmetric() {
        return Err(Error::pre("M must be symmetric"));
    }
    if !m.is_even() {
        return Err(Error::pre("M must have entries in 2Z[x]"));
    }
    let res = LinkingResolution::new(Mat::identity(r).scale_i64(2), x.mat(), m.clone())?;
    Ok((res, LagrangianMarker { rank: r }))
}
