//! ε-quadratic forms over Z[x], lagrangians with explicit complements, and
//! reduction to split coordinates `(μ 1; 0 ν)`.

use crate::error::{Error, Result};
use crate::matrix::{unit_sign, Mat};
use crate::ring::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(e: i64) -> Result<Self> {
        match e {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::Parse(format!("epsilon must be +1 or -1, got {}", other))),
        }
    }
}

/// `(K, ψ)` with `ψ` an arbitrary representative of its class mod `χ − εχ*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsForm {
    pub epsilon: Sign,
    pub psi: Mat,
}

impl EpsForm {
    pub fn new(epsilon: Sign, psi: Mat) -> Result<Self> {
        if !psi.is_square() {
            return Err(Error::shape("form matrix must be square"));
        }
        Ok(EpsForm { epsilon, psi })
    }

    pub fn dim(&self) -> usize {
        self.psi.rows()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianWitness {
    pub inclusion: Mat,
    pub complement: Mat,
}

impl LagrangianWitness {
    /// First `l` coordinates, with the last `l` as complement.
    pub fn standard(l: usize) -> Self {
        let n = 2 * l;
        LagrangianWitness {
            inclusion: Mat::from_fn(n, l, |i, j| unit_if(i == j)),
            complement: Mat::from_fn(n, l, |i, j| unit_if(i == j + l)),
        }
    }

    pub fn basis(&self) -> Result<Mat> {
        self.inclusion.hcat(&self.complement)
    }

    /// Same lagrangian seen through an isomorphism: if `v: K' → K`, the witness
    /// for `(K', v^T ψ v)` is `v^{-1}` applied to this one.
    pub fn pull_back(&self, v_inv: &Mat) -> Result<Self> {
        Ok(LagrangianWitness {
            inclusion: v_inv.try_mul(&self.inclusion)?,
            complement: v_inv.try_mul(&self.complement)?,
        })
    }
}

/// `(L ⊕ L*, (μ 1; 0 ν))` with `μ + εμ^T = 0 = ν + εν^T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitForm {
    pub epsilon: Sign,
    pub mu: Mat,
    pub nu: Mat,
}

impl SplitForm {
    pub fn new(epsilon: Sign, mu: Mat, nu: Mat) -> Result<Self> {
        let s = SplitForm { epsilon, mu, nu };
        if !s.mu.is_square() || s.mu.rows() != s.nu.rows() || !s.nu.is_square() {
            return Err(Error::shape("split form blocks must be square of equal rank"));
        }
        if !eps_skew_vanishes(&s.mu, epsilon) || !eps_skew_vanishes(&s.nu, epsilon) {
            return Err(Error::pre("split form needs mu + eps mu^T = 0 and nu + eps nu^T = 0"));
        }
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.mu.rows()
    }

    pub fn to_form(&self) -> EpsForm {
        let l = self.rank();
        let psi = Mat::block2(&self.mu, &Mat::identity(l), &Mat::zeros(l, l), &self.nu)
            .expect("square blocks");
        EpsForm {
            epsilon: self.epsilon,
            psi,
        }
    }
}

fn unit_if(b: bool) -> IntPoly {
    if b {
        IntPoly::one()
    } else {
        IntPoly::zero()
    }
}

fn eps_skew_vanishes(m: &Mat, eps: Sign) -> bool {
    (m + &m.transpose().scale_i64(eps.value())).is_zero()
}

/// Symmetric with every diagonal entry in `2Z[x]`.
pub fn is_quad(m: &Mat) -> bool {
    m.is_symmetric() && m.diagonal().iter().all(IntPoly::is_even)
}

pub fn symmetrize(f: &EpsForm) -> Mat {
    &f.psi + &f.psi.transpose().scale_i64(f.epsilon.value())
}

pub fn is_nonsingular(f: &EpsForm) -> bool {
    symmetrize(f)
        .det()
        .ok()
        .as_ref()
        .and_then(unit_sign)
        .is_some()
}

/// True iff `D = χ − εχ^T` for some `χ`, i.e. `ψ` and `ψ + D` are the same form.
///
/// For ε = −1 this is "symmetric with even diagonal"; for ε = +1 it is
/// "skew with zero diagonal".
pub fn is_eps_trivial(d: &Mat, eps: Sign) -> bool {
    match eps {
        Sign::Minus => is_quad(d),
        Sign::Plus => {
            (d + &d.transpose()).is_zero() && d.diagonal().iter().all(IntPoly::is_zero)
        }
    }
}

pub fn forms_equivalent(a: &EpsForm, b: &EpsForm) -> bool {
    a.epsilon == b.epsilon
        && a.dim() == b.dim()
        && is_eps_trivial(&(&a.psi - &b.psi), a.epsilon)
}

fn check_witness_shape(f: &EpsForm, w: &LagrangianWitness) -> Result<usize> {
    let n = f.dim();
    if !n.is_multiple_of(2) {
        return Err(Error::shape(format!("form of odd dimension {} has no lagrangian", n)));
    }
    let l = n / 2;
    for (name, m) in [("inclusion", &w.inclusion), ("complement", &w.complement)] {
        if m.rows() != n || m.cols() != l {
            return Err(Error::shape(format!(
                "{} is {}x{}, expected {}x{}",
                name,
                m.rows(),
                m.cols(),
                n,
                l
            )));
        }
    }
    Ok(l)
}

/// The symmetrized form vanishes on `L` and `[inclusion | complement]` is unimodular.
pub fn verify_lagrangian(f: &EpsForm, w: &LagrangianWitness) -> Result<bool> {
    check_witness_shape(f, w)?;
    let s = symmetrize(f);
    let restricted = w.inclusion.transpose().try_mul(&s)?.try_mul(&w.inclusion)?;
    Ok(restricted.is_zero() && w.basis()?.is_unimodular())
}

/// The stricter predicate that also asks `ψ` itself to vanish on `L` in
/// `Q_ε(L)`: diagonal entries of `ψ|_L` must lie in `{a − εa}`.
pub fn verify_quadratic_lagrangian(f: &EpsForm, w: &LagrangianWitness) -> Result<bool> {
    if !verify_lagrangian(f, w)? {
        return Ok(false);
    }
    let restricted = w.inclusion.transpose().try_mul(&f.psi)?.try_mul(&w.inclusion)?;
    Ok(is_eps_trivial(&restricted, f.epsilon))
}

/// Reduces `(f, L)` to split coordinates.
pub fn split_coordinates(f: &EpsForm, w: &LagrangianWitness) -> Result<SplitForm> {
    split_coordinates_with_basis(f, w).map(|(s, _)| s)
}

/// Like [`split_coordinates`], also returning the unimodular `T` whose first
/// `ℓ` columns are the inclusion and with `T^T ψ T ~ (μ 1; 0 ν)`.
pub fn split_coordinates_with_basis(
    f: &EpsForm,
    w: &LagrangianWitness,
) -> Result<(SplitForm, Mat)> {
    let l = check_witness_shape(f, w)?;
    if !is_nonsingular(f) {
        return Err(Error::pre("form is singular: symmetrization has det != ±1"));
    }
    if !verify_lagrangian(f, w)? {
        return Err(Error::pre(
            "witness is not a lagrangian of the symmetrized form with unimodular complement",
        ));
    }
    let eps = f.epsilon.value();
    let p = w.basis()?;
    let q = p.transpose().try_mul(&f.psi)?.try_mul(&p)?;
    let a = q.submatrix(0, 0, l, l);
    let b = q.submatrix(0, l, l, l);
    let c = q.submatrix(l, 0, l, l);
    let d = q.submatrix(l, l, l, l);

    // Move the lower-left block across: ψ ~ (A, B + εC^T; 0, D).
    let lambda = &b + &c.transpose().scale_i64(eps);
    let lambda_inv = lambda
        .inverse_unimodular()
        .map_err(|_| Error::pre("off-diagonal block is not invertible"))?;
    let nu1 = lambda_inv.transpose().try_mul(&d)?.try_mul(&lambda_inv)?;

    // Shift the complement by L·S with S^T + εS = −(ν' + εν'^T).
    let defect = &nu1 + &nu1.transpose().scale_i64(eps);
    let s = Mat::from_fn(l, l, |i, j| {
        if i < j {
            -defect.get(i, j)
        } else if i == j && eps == 1 {
            -nu1.get(i, i)
        } else {
            IntPoly::zero()
        }
    });
    let s = match f.epsilon {
        // S − S^T = ν' − ν'^T, so S takes the strict upper triangle of +defect.
        Sign::Minus => -&s,
        Sign::Plus => s,
    };
    let nu = &(&s.transpose().try_mul(&a)?.try_mul(&s)? + &s.transpose()) + &nu1;

    let t = p.try_mul(&Mat::block_diag(&Mat::identity(l), &lambda_inv))?;
    let t = t.try_mul(&Mat::block2(
        &Mat::identity(l),
        &s,
        &Mat::zeros(l, l),
        &Mat::identity(l),
    )?)?;
    Ok((SplitForm::new(f.epsilon, a, nu)?, t))
}

/// `(L ⊕ L*, (0 1; 0 0))`.
pub fn hyperbolic(l: usize, eps: Sign) -> EpsForm {
    SplitForm {
        epsilon: eps,
        mu: Mat::zeros(l, l),
        nu: Mat::zeros(l, l),
    }
    .to_form()
}

pub fn direct_sum(f: &EpsForm, g: &EpsForm) -> Result<EpsForm> {
    if f.epsilon != g.epsilon {
        return Err(Error::pre("direct sum of forms with different epsilon"));
    }
    Ok(EpsForm {
        epsilon: f.epsilon,
        psi: Mat::block_diag(&f.psi, &g.psi),
    })
}

/// Witness for `f ⊕ g` built from witnesses of the summands.
pub fn direct_sum_witness(a: &LagrangianWitness, b: &LagrangianWitness) -> LagrangianWitness {
    LagrangianWitness {
        inclusion: Mat::block_diag(&a.inclusion, &b.inclusion),
        complement: Mat::block_diag(&a.complement, &b.complement),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_poly, random_unimodular};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x() -> IntPoly {
        IntPoly::x()
    }

    fn c(v: i64) -> IntPoly {
        IntPoly::constant(v)
    }

    fn m2(a: IntPoly, b: IntPoly, cc: IntPoly, d: IntPoly) -> Mat {
        Mat::from_rows(vec![vec![a, b], vec![cc, d]]).unwrap()
    }

    #[test]
    fn is_quad_examples() {
        assert!(is_quad(&Mat::diag(&[c(2), x().scale_i64(2)])));
        assert!(is_quad(&Mat::from_i64(&[&[0, 1], &[1, 0]])));
        assert!(!is_quad(&Mat::diag(&[c(1), c(0)])));
    }

    #[test]
    fn symmetrize_examples() {
        let f = EpsForm::new(Sign::Minus, Mat::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(symmetrize(&f), Mat::from_i64(&[&[0, 1], &[-1, 0]]));
        let f = EpsForm::new(Sign::Plus, Mat::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(symmetrize(&f), Mat::from_i64(&[&[2, 1], &[1, 2]]));
        let f = EpsForm::new(Sign::Minus, m2(x(), c(1), c(0), c(1))).unwrap();
        assert_eq!(symmetrize(&f), Mat::from_i64(&[&[0, 1], &[-1, 0]]));
    }

    #[test]
    fn nonsingular_examples() {
        assert!(is_nonsingular(&hyperbolic(1, Sign::Minus)));
        assert!(!is_nonsingular(&EpsForm::new(Sign::Plus, Mat::from_i64(&[&[2]])).unwrap()));
        let f = EpsForm::new(Sign::Minus, m2(x(), c(1), c(0), &x() * &x())).unwrap();
        assert!(is_nonsingular(&f));
    }

    #[test]
    fn lagrangian_examples() {
        for l in 0..3 {
            for eps in [Sign::Plus, Sign::Minus] {
                assert!(verify_lagrangian(&hyperbolic(l, eps), &LagrangianWitness::standard(l)).unwrap());
            }
        }
        let f = EpsForm::new(Sign::Minus, m2(x(), c(1), c(0), c(1))).unwrap();
        assert!(verify_lagrangian(&f, &LagrangianWitness::standard(1)).unwrap());
    }

    #[test]
    fn definite_form_has_no_lagrangian() {
        // ψ + ψ^T = 2I is definite, so no vector is isotropic.
        let f = EpsForm::new(Sign::Plus, Mat::from_i64(&[&[1, 0], &[0, 1]])).unwrap();
        for (a, b) in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)] {
            let w = LagrangianWitness {
                inclusion: Mat::from_i64(&[&[a], &[b]]),
                complement: Mat::from_i64(&[&[0], &[1]]),
            };
            assert!(!verify_lagrangian(&f, &w).unwrap());
        }
    }

    #[test]
    fn quadratic_lagrangian_is_stricter() {
        let f = EpsForm::new(Sign::Minus, m2(c(1), c(1), c(0), c(0))).unwrap();
        let w = LagrangianWitness::standard(1);
        assert!(verify_lagrangian(&f, &w).unwrap());
        assert!(!verify_quadratic_lagrangian(&f, &w).unwrap());
        let f = EpsForm::new(Sign::Minus, m2(c(2), c(1), c(0), c(0))).unwrap();
        assert!(verify_quadratic_lagrangian(&f, &w).unwrap());
    }

    #[test]
    fn split_examples() {
        for l in 0..3 {
            for eps in [Sign::Plus, Sign::Minus] {
                let s = split_coordinates(&hyperbolic(l, eps), &LagrangianWitness::standard(l)).unwrap();
                assert!(s.mu.is_zero() && s.nu.is_zero());
            }
        }
        let s = SplitForm::new(Sign::Minus, Mat::diag(&[x()]), Mat::diag(&[c(3)])).unwrap();
        let back = split_coordinates(&s.to_form(), &LagrangianWitness::standard(1)).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn split_rejects_singular_example() {
        // ψ − ψ^T = (0 3; −3 0) has determinant 9.
        let f = EpsForm::new(Sign::Minus, m2(x(), c(2), c(-1), c(1))).unwrap();
        assert!(!is_nonsingular(&f));
        assert!(matches!(
            split_coordinates(&f, &LagrangianWitness::standard(1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn split_nontrivial_example() {
        // ψ = (x 2; 1 1): λ = 2 − 1 = 1, ν' = 1, already ν' symmetric.
        let f = EpsForm::new(Sign::Minus, m2(x(), c(2), c(1), c(1))).unwrap();
        let (s, t) = split_coordinates_with_basis(&f, &LagrangianWitness::standard(1)).unwrap();
        assert_eq!(s.mu, Mat::diag(&[x()]));
        assert_eq!(s.nu, Mat::diag(&[c(1)]));
        let conj = EpsForm::new(Sign::Minus, t.transpose().try_mul(&f.psi).unwrap().try_mul(&t).unwrap()).unwrap();
        assert!(forms_equivalent(&conj, &s.to_form()));

        // ν' = (1 3; 0 1) is not symmetric, so the complement has to move.
        let f = EpsForm::new(
            Sign::Minus,
            Mat::block2(
                &Mat::zeros(2, 2),
                &Mat::identity(2),
                &Mat::zeros(2, 2),
                &Mat::from_i64(&[&[1, 3], &[0, 1]]),
            )
            .unwrap(),
        )
        .unwrap();
        let (s, t) = split_coordinates_with_basis(&f, &LagrangianWitness::standard(2)).unwrap();
        assert!(s.nu.is_symmetric());
        let conj = EpsForm::new(Sign::Minus, t.transpose().try_mul(&f.psi).unwrap().try_mul(&t).unwrap()).unwrap();
        assert!(forms_equivalent(&conj, &s.to_form()));
    }

    #[test]
    fn direct_sum_examples() {
        let f = hyperbolic(1, Sign::Minus);
        assert_eq!(direct_sum(&f, &hyperbolic(0, Sign::Minus)).unwrap(), f);
        assert!(direct_sum(&f, &hyperbolic(1, Sign::Plus)).is_err());
        let g = hyperbolic(2, Sign::Minus);
        assert_eq!(direct_sum(&f, &g).unwrap().dim(), 6);
        let hh = direct_sum(&f, &f).unwrap();
        // (0 1 0 0; 0 0 0 0; 0 0 0 1; 0 0 0 0) is hyperbolic(2) after swapping coords 1,2.
        let perm = Mat::from_i64(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        assert_eq!(&(&perm.transpose() * &hh.psi) * &perm, hyperbolic(2, Sign::Minus).psi);
    }

    fn random_split(rng: &mut ChaCha8Rng, l: usize, eps: Sign) -> SplitForm {
        let mut mu = Mat::zeros(l, l);
        let mut nu = Mat::zeros(l, l);
        for i in 0..l {
            for j in 0..=i {
                let (a, b) = (random_poly(rng, 2, 3), random_poly(rng, 2, 3));
                match eps {
                    Sign::Minus => {
                        mu.set(i, j, a.clone());
                        mu.set(j, i, a);
                        nu.set(i, j, b.clone());
                        nu.set(j, i, b);
                    }
                    Sign::Plus if i != j => {
                        mu.set(i, j, a.clone());
                        mu.set(j, i, -a);
                        nu.set(i, j, b.clone());
                        nu.set(j, i, -b);
                    }
                    Sign::Plus => {}
                }
            }
        }
        SplitForm::new(eps, mu, nu).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn split_after_conjugation(seed in any::<u64>(), l in 1usize..3, minus in any::<bool>()) {
            let eps = if minus { Sign::Minus } else { Sign::Plus };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s0 = random_split(&mut rng, l, eps);
            let f0 = s0.to_form();
            let v = random_unimodular(&mut rng, 2 * l, 4);
            let f = EpsForm::new(eps, &(&v.transpose() * &f0.psi) * &v).unwrap();
            let w = LagrangianWitness::standard(l).pull_back(&v.inverse_unimodular().unwrap()).unwrap();
            prop_assert!(verify_lagrangian(&f, &w).unwrap());
            let (s, t) = split_coordinates_with_basis(&f, &w).unwrap();
            prop_assert!(eps_skew_vanishes(&s.mu, eps) && eps_skew_vanishes(&s.nu, eps));
            prop_assert!(t.is_unimodular());
            prop_assert_eq!(t.submatrix(0, 0, 2 * l, l), w.inclusion.clone());
            let conj = EpsForm::new(eps, &(&t.transpose() * &f.psi) * &t).unwrap();
            prop_assert!(forms_equivalent(&conj, &s.to_form()));
        }

        #[test]
        fn split_round_trip(seed in any::<u64>(), l in 0usize..4, minus in any::<bool>()) {
            let eps = if minus { Sign::Minus } else { Sign::Plus };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_split(&mut rng, l, eps);
            let back = split_coordinates(&s.to_form(), &LagrangianWitness::standard(l)).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn lagrangian_stable_under_inclusion_change(seed in any::<u64>(), l in 1usize..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_split(&mut rng, l, Sign::Minus);
            let f = s.to_form();
            let a = random_unimodular(&mut rng, l, 3);
            let w0 = LagrangianWitness::standard(l);
            let a_inv_t = a.inverse_unimodular().unwrap().transpose();
            let w = LagrangianWitness {
                inclusion: &w0.inclusion * &a,
                complement: &w0.complement * &a_inv_t,
            };
            prop_assert!(verify_lagrangian(&f, &w).unwrap());
        }

        #[test]
        fn symmetrize_commutes_with_sum(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_split(&mut rng, 2, Sign::Minus).to_form();
            let g = random_split(&mut rng, 1, Sign::Minus).to_form();
            prop_assert_eq!(
                symmetrize(&direct_sum(&f, &g).unwrap()),
                Mat::block_diag(&symmetrize(&f), &symmetrize(&g))
            );
        }
    }
}
