//! Arf invariants: classical over Z_2, generalized for split (−1)-quadratic
//! forms over Z[x], and for quadratic linking forms over `(Z[x], (2)^∞)`,
//! together with the boundary maps from the Q-groups into forms and formations.

use crate::error::{Error, Result};
use crate::forms::{split_coordinates, EpsForm, LagrangianWitness, Sign, SplitForm};
use crate::linking::{Formation, LinkingResolution};
use crate::matrix::Mat;
use crate::qnormal::{
    check_numerator_q0, check_numerator_q1, reduce_q0_Zx, reduce_q3_Zx, Q0ClassZx, Q3ClassZx,
    XMatrix,
};
use crate::ring::{tate_decompose, IntPoly, Modulus, ResPoly, TateClass};

/// Bit vector over Z_2.
pub type Bits = Vec<u8>;

fn dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |s, (x, y)| s ^ (x & y))
}

/// Quadratic form over Z_2 given by an arbitrary matrix `ψ`; `Q(v) = v ψ v^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GF2Form {
    n: usize,
    psi: Vec<Bits>,
}

impl GF2Form {
    pub fn new(psi: Vec<Bits>) -> Result<Self> {
        let n = psi.len();
        if psi.iter().any(|r| r.len() != n) {
            return Err(Error::shape("GF2 form matrix must be square"));
        }
        let psi = psi.into_iter().map(|r| r.into_iter().map(|b| b & 1).collect()).collect();
        Ok(GF2Form { n, psi })
    }

    /// Form with `ψ_{ij}` = bit `i·n + j` of `code`.
    pub fn from_code(n: usize, code: u64) -> Self {
        let psi = (0..n)
            .map(|i| (0..n).map(|j| ((code >> (i * n + j)) & 1) as u8).collect())
            .collect();
        GF2Form { n, psi }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> &[Bits] {
        &self.psi
    }

    pub fn q(&self, v: &[u8]) -> u8 {
        let mut s = 0;
        for i in 0..self.n {
            if v[i] == 1 {
                s ^= dot(&self.psi[i], v);
            }
        }
        s
    }

    /// `(ψ + ψ^T)(v, w)`.
    pub fn b(&self, v: &[u8], w: &[u8]) -> u8 {
        let mut s = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                s ^= (self.psi[i][j] ^ self.psi[j][i]) & v[i] & w[j];
            }
        }
        s
    }

    fn symmetrization(&self) -> Vec<Bits> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.psi[i][j] ^ self.psi[j][i]).collect())
            .collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        rank(self.symmetrization()) == self.n
    }

    /// Orthogonal sum.
    pub fn direct_sum(&self, o: &GF2Form) -> GF2Form {
        let n = self.n + o.n;
        let psi = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match (i < self.n, j < self.n) {
                        (true, true) => self.psi[i][j],
                        (false, false) => o.psi[i - self.n][j - self.n],
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        GF2Form { n, psi }
    }
}

/// Row rank over Z_2.
fn rank(mut rows: Vec<Bits>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] == 1 {
                let pivot = rows[r].clone();
                rows[i].iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        r += 1;
    }
    r
}

/// One solution of `A v = rhs` over Z_2, if any.
pub(crate) fn solve(a: &[Bits], rhs: &[u8]) -> Option<Bits> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Bits> = a
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| aug[i][c] == 1) else {
            continue;
        };
        aug.swap(r, p);
        for i in 0..m {
            if i != r && aug[i][c] == 1 {
                let pivot = aug[r].clone();
                aug[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    if aug[r..].iter().any(|row| row[n] == 1) {
        return None;
    }
    let mut v = vec![0; n];
    for (row, &c) in pivots.iter().enumerate() {
        v[c] = aug[row][n];
    }
    Some(v)
}

/// Checks that `e` spans a lagrangian of `ψ + ψ^T` and `e*` is a dual
/// isotropic complement.
pub fn check_symplectic_bases(f: &GF2Form, e: &[Bits], e_star: &[Bits]) -> Result<()> {
    let n = f.dim();
    if !n.is_multiple_of(2) || e.len() != n / 2 || e_star.len() != n / 2 {
        return Err(Error::pre("lagrangian and complement must each have dim/2 vectors"));
    }
    if e.iter().chain(e_star).any(|v| v.len() != n) {
        return Err(Error::shape(format!("basis vectors must have length {}", n)));
    }
    for i in 0..e.len() {
        for j in 0..e.len() {
            if f.b(&e[i], &e[j]) != 0 {
                return Err(Error::pre("e is not isotropic"));
            }
            if f.b(&e_star[i], &e_star[j]) != 0 {
                return Err(Error::pre("e* is not isotropic"));
            }
            if f.b(&e_star[i], &e[j]) != u8::from(i == j) {
                return Err(Error::pre("e* is not dual to e"));
            }
        }
    }
    Ok(())
}

/// `Σ ψ(e_i, e_i) ψ(e*_i, e*_i)`.
pub fn classical_arf(f: &GF2Form, e: &[Bits], e_star: &[Bits]) -> Result<u8> {
    check_symplectic_bases(f, e, e_star)?;
    Ok(e.iter().zip(e_star).fold(0, |s, (a, b)| s ^ (f.q(a) & f.q(b))))
}

/// Dual isotropic basis `e*` for a lagrangian basis `e`.
pub fn symplectic_complete(f: &GF2Form, e: &[Bits]) -> Result<Vec<Bits>> {
    if !f.is_nonsingular() {
        return Err(Error::pre("symmetrization is singular"));
    }
    let n = f.dim();
    if !n.is_multiple_of(2) || e.len() != n / 2 || e.iter().any(|v| v.len() != n) {
        return Err(Error::pre("lagrangian basis must have dim/2 vectors of length dim"));
    }
    if rank(e.to_vec()) != e.len() {
        return Err(Error::pre("lagrangian basis is linearly dependent"));
    }
    if e.iter().any(|a| e.iter().any(|b| f.b(a, b) != 0)) {
        return Err(Error::pre("e is not isotropic"));
    }
    let sym = f.symmetrization();
    // rows of E·B
    let eb: Vec<Bits> = e
        .iter()
        .map(|v| (0..n).map(|j| (0..n).fold(0, |s, i| s ^ (v[i] & sym[i][j]))).collect())
        .collect();
    let l = e.len();
    let g: Vec<Bits> = (0..l)
        .map(|i| {
            let rhs: Bits = (0..l).map(|k| u8::from(k == i)).collect();
            solve(&eb, &rhs).expect("E·B has full row rank")
        })
        .collect();
    // f_i = g_i + Σ_{k > i} B(g_i, g_k) e_k makes the span isotropic
    let out = (0..l)
        .map(|i| {
            let mut v = g[i].clone();
            for k in i + 1..l {
                if f.b(&g[i], &g[k]) == 1 {
                    v.iter_mut().zip(&e[k]).for_each(|(a, b)| *a ^= b);
                }
            }
            v
        })
        .collect();
    Ok(out)
}

/// Some lagrangian of `ψ + ψ^T`, by symplectic Gram–Schmidt.
pub fn find_lagrangian(f: &GF2Form) -> Result<Vec<Bits>> {
    if !f.is_nonsingular() {
        return Err(Error::pre("symmetrization is singular"));
    }
    let n = f.dim();
    let mut rest: Vec<Bits> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
    let mut lag = Vec::new();
    while let Some(v) = rest.pop() {
        let Some(k) = rest.iter().position(|w| f.b(&v, w) == 1) else {
            return Err(Error::pre("symmetrization is singular"));
        };
        let w = rest.swap_remove(k);
        for u in rest.iter_mut() {
            let (bw, bv) = (f.b(u, &w), f.b(u, &v));
            for i in 0..n {
                *u.get_mut(i).unwrap() ^= (bw & v[i]) ^ (bv & w[i]);
            }
        }
        lag.push(v);
    }
    Ok(lag)
}

/// Arf invariant computed from a lagrangian found by [`find_lagrangian`].
pub fn arf(f: &GF2Form) -> Result<u8> {
    let e = find_lagrangian(f)?;
    let e_star = symplectic_complete(f, &e)?;
    classical_arf(f, &e, &e_star)
}

/// Bundle map `g: L → A^2` with `g^T X g ≡ μ` on diagonals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMapG {
    pub g: Mat,
}

impl BundleMapG {
    /// Column `j` is the `{0,1}` lift of the Tate decomposition of `diag[j] mod 2`.
    pub fn from_diagonal(diag: &[IntPoly]) -> Self {
        let cols: Vec<Vec<IntPoly>> = diag
            .iter()
            .map(|m| {
                let (p, q) = tate_decompose(&m.reduce_mod(Modulus::Two));
                vec![p.lift(), q.lift()]
            })
            .collect();
        BundleMapG {
            g: Mat::from_cols(&cols, 2),
        }
    }
}

/// Class of `g ν g^T` in `Q_3 ≅ Z_2[x]`.
pub fn generalized_arf_Zx(s: &SplitForm) -> Result<Q3ClassZx> {
    if s.epsilon != Sign::Minus {
        return Err(Error::pre("generalized Arf invariant needs epsilon = -1"));
    }
    let g = BundleMapG::from_diagonal(&s.mu.diagonal()).g;
    reduce_q3_Zx(&g.try_mul(&s.nu)?.try_mul(&g.transpose())?)
}

/// The same class computed as `g h^T X h g^T`, with `h` built from the
/// diagonal of `ν` the way `g` is built from `μ`.
pub fn generalized_arf_Zx_via_h(s: &SplitForm) -> Result<Q3ClassZx> {
    if s.epsilon != Sign::Minus {
        return Err(Error::pre("generalized Arf invariant needs epsilon = -1"));
    }
    let g = BundleMapG::from_diagonal(&s.mu.diagonal()).g;
    let h = BundleMapG::from_diagonal(&s.nu.diagonal()).g;
    let hxh = h.transpose().try_mul(&XMatrix::Zx.mat())?.try_mul(&h)?;
    reduce_q3_Zx(&g.try_mul(&hxh)?.try_mul(&g.transpose())?)
}

pub fn generalized_arf_form(f: &EpsForm, w: &LagrangianWitness) -> Result<Q3ClassZx> {
    if f.epsilon != Sign::Minus {
        return Err(Error::pre("generalized Arf invariant needs epsilon = -1"));
    }
    generalized_arf_Zx(&split_coordinates(f, w)?)
}

/// `f_0 = (p; q)` from the Tate decompositions of `mu_values`, checked against
/// `δ` and `d`.
pub fn linking_lift(res: &LinkingResolution, mu_values: &[TateClass]) -> Result<Mat> {
    let u = res.rank();
    if mu_values.len() != u {
        return Err(Error::shape(format!("expected {} mu values", u)));
    }
    for (i, m) in mu_values.iter().enumerate() {
        if m.modulus() != Modulus::Two {
            return Err(Error::pre("mu values must be residues mod 2"));
        }
        if res.delta().get(i, i).reduce_mod(Modulus::Two) != *m {
            return Err(Error::pre(format!(
                "delta[{i}][{i}] does not reduce to the given mu value"
            )));
        }
    }
    let cols: Vec<Vec<IntPoly>> = mu_values
        .iter()
        .map(|m| {
            let (p, q) = tate_decompose(m);
            vec![p.lift(), q.lift()]
        })
        .collect();
    Ok(Mat::from_cols(&cols, 2))
}

/// Linking Arf invariant from an explicit lift `f_0` (2×u).
pub fn linking_arf_with_lift(res: &LinkingResolution, f0: &Mat) -> Result<Q0ClassZx> {
    if f0.rows() != 2 || f0.cols() != res.rank() {
        return Err(Error::shape(format!("f_0 must be 2x{}", res.rank())));
    }
    if !f0.try_mul(res.d())?.is_even() {
        return Err(Error::pre("f_0 d is not divisible by 2"));
    }
    let mu = f0.transpose().try_mul(&XMatrix::Zx.mat())?.try_mul(f0)?;
    for i in 0..res.rank() {
        if !(mu.get(i, i) - res.delta().get(i, i)).is_even() {
            return Err(Error::pre(format!("f_0 column {i} does not lift delta[{i}][{i}]")));
        }
    }
    reduce_q0_Zx(&f0.try_mul(res.phi())?.try_mul(&f0.transpose())?)
}

pub fn linking_arf_Zx(res: &LinkingResolution, mu_values: &[TateClass]) -> Result<Q0ClassZx> {
    linking_arf_with_lift(res, &linking_lift(res, mu_values)?)
}

/// `δ_ii mod 2`, the values of `μ` on the lagrangian basis.
pub fn mu_values_of(res: &LinkingResolution) -> Vec<TateClass> {
    res.delta()
        .diagonal()
        .iter()
        .map(|d| d.reduce_mod(Modulus::Two))
        .collect()
}

/// `M ↦ (A^r ⊕ A^r, (M 1; 0 X))`, ε = −1.
pub fn boundary_q3_to_L2(m: &Mat, x: XMatrix) -> Result<EpsForm> {
    x.check_shape(m, "M")?;
    if !m.is_symmetric() {
        return Err(Error::pre("M must be symmetric"));
    }
    let r = x.rank();
    EpsForm::new(
        Sign::Minus,
        Mat::block2(m, &Mat::identity(r), &Mat::zeros(r, r), &x.mat())?,
    )
}

/// `N ↦ (A^r ⊕ A^r, (¼(N+N^T−2N^T XN), 1−2NX; 0, −2X))`, ε = +1.
pub fn boundary_q1_to_L0(n: &Mat, x: XMatrix) -> Result<EpsForm> {
    check_numerator_q1(n, x)?;
    let xm = x.mat();
    let r = x.rank();
    let top = &(n + &n.transpose()) - &(&(&n.transpose() * &xm) * n).scale_i64(2);
    let quarter = top
        .half()
        .and_then(|h| h.half())
        .map_err(|_| Error::pre("N + N^T - 2N^T X N is not divisible by 4"))?;
    let off = &Mat::identity(r) - &(n * &xm).scale_i64(2);
    EpsForm::new(
        Sign::Plus,
        Mat::block2(&quarter, &off, &Mat::zeros(r, r), &xm.scale_i64(-2))?,
    )
}

/// `M ↦ (H_−(A^r); A^r, im(1−XM; M))`.
pub fn boundary_q0_to_formation(m: &Mat, x: XMatrix) -> Result<Formation> {
    x.check_shape(m, "M")?;
    if !check_numerator_q0(m, x) {
        return Err(Error::Numerator {
            group: "q0",
            reason: "M must be symmetric with M - MXM even-diagonal".into(),
        });
    }
    let r = x.rank();
    let f = Mat::identity(r).vcat(&Mat::zeros(r, r))?;
    let g = (&Mat::identity(r) - &(&x.mat() * m)).vcat(m)?;
    Formation::new(r, f, g)
}

/// `Z_2[x]` value as a single bit when it is constant.
pub fn constant_bit(r: &ResPoly) -> Option<u8> {
    match r.coeffs() {
        [] => Some(0),
        [b] => Some(*b),
        _ => None,
    }
}
