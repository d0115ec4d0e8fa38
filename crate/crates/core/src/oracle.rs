//! Brute-force verifiers for the normal forms and invariants.
//!
//! Denominator elements are assembled with a separate naive polynomial and
//! 2×2 matrix arithmetic on `i128` coefficients, so the checks do not reuse
//! the matrix code paths they exercise. Randomized suites seed one ChaCha
//! stream per trial index, so results do not depend on scheduling.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::arf::{
    arf, boundary_q1_to_L0, boundary_q3_to_L2, generalized_arf_form, generalized_arf_Zx_via_h,
    linking_arf_Zx, linking_arf_with_lift, linking_lift, mu_values_of, BundleMapG, GF2Form,
};
use crate::error::{Error, Result};
use crate::forms::{symmetrize, EpsForm, LagrangianWitness, Sign};
use crate::gen::{random_int_unimodular, random_poly, random_unimodular};
use crate::linking::{canonical_order2_form, eval_lambda, eval_mu, LinkingResolution, VecPair};
use crate::matrix::Mat;
use crate::qnormal::{
    check_numerator_q0, f0_one, f0_x, f_m1_one, f_m1_x, preimage, q_add, q_equal, reduce_q0_Zx,
    reduce_q3_Zx, reduce_qn_Z, QClass, Q0ClassZx, Q3ClassZx, XMatrix,
};
use crate::ring::{IntPoly, Modulus, ResPoly};
use crate::witt::{arf_L2, e8, signature, signature_mod8, IntSymForm};

/// Outcome of one oracle suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub seed: Option<u64>,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: &str, seed: Option<u64>) -> Self {
        Report {
            suite: suite.into(),
            seed,
            cases: 0,
            failures: 0,
            first_failure: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Folds per-case outcomes (in case order) into the report.
    fn absorb(&mut self, outcomes: impl IntoIterator<Item = Option<String>>) {
        for o in outcomes {
            self.cases += 1;
            if let Some(msg) = o {
                self.failures += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(msg);
                }
            }
        }
    }

    fn merge(&mut self, o: Report) {
        self.cases += o.cases;
        self.failures += o.failures;
        if self.first_failure.is_none() {
            self.first_failure = o.first_failure;
        }
        self.notes.extend(o.notes);
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "cases": self.cases,
            "failures": self.failures,
            "pass": self.passed(),
            "counterexample": self.first_failure,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} seed={} cases={} failures={} status={}",
            self.suite,
            self.seed.map_or("-".into(), |s| s.to_string()),
            self.cases,
            self.failures,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for n in &self.notes {
            write!(f, "\n  note: {}", n)?;
        }
        if let Some(c) = &self.first_failure {
            write!(f, "\n  counterexample: {}", c)?;
        }
        Ok(())
    }
}

fn trial_rng(seed: u64, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    rng
}

/// Runs `f` on trial indices `0..trials` in parallel; outcomes keep index order.
fn run_trials<F>(suite: &str, seed: u64, trials: usize, f: F) -> Report
where
    F: Fn(&mut ChaCha8Rng) -> Option<String> + Sync,
{
    let outcomes: Vec<Option<String>> = (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i)).map(|m| format!("trial {}: {}", i, m)))
        .collect();
    let mut r = Report::new(suite, Some(seed));
    r.absorb(outcomes);
    r
}

// ---------------------------------------------------------------------------
// Democratic Arf invariant

/// 0 iff `v ↦ vψv^T` vanishes on more than half of `Z_2^n`.
pub fn arf_democratic(f: &GF2Form) -> Result<u8> {
    let n = f.dim();
    if n > 16 {
        return Err(Error::pre("democratic Arf oracle is limited to dimension 16"));
    }
    let rows: Vec<u32> = f
        .psi()
        .iter()
        .map(|r| r.iter().enumerate().fold(0, |m, (j, &b)| m | (u32::from(b) << j)))
        .collect();
    let sym: Vec<u32> = (0..n)
        .map(|i| {
            let col = (0..n).fold(0u32, |m, j| m | (((rows[j] >> i) & 1) << j));
            rows[i] ^ col
        })
        .collect();
    if gf2_rank_bits(sym, n) != n {
        return Err(Error::pre("symmetrization is singular"));
    }
    let q = |v: u32| -> u32 {
        (0..n)
            .filter(|&i| (v >> i) & 1 == 1)
            .fold(0, |s, i| s ^ ((rows[i] & v).count_ones() & 1))
    };
    let zeros = (0u32..1 << n).filter(|&v| q(v) == 0).count();
    Ok(u8::from(2 * zeros <= 1 << n))
}

fn gf2_rank_bits(mut rows: Vec<u32>, n: usize) -> usize {
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| (rows[i] >> c) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && (*r >> c) & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Exhaustive comparison for all forms of even dimension ≤ `max_dim` (≤ 4),
/// plus `random6` random nonsingular forms of dimension 6.
pub fn arf_suite(max_dim: usize, random6: usize, seed: u64) -> Result<Report> {
    if max_dim > 4 {
        return Err(Error::pre("exhaustive Arf comparison supports max_dim <= 4"));
    }
    let mut r = Report::new("arf", Some(seed));
    let mut nonsingular = 0u64;
    for n in (0..=max_dim).step_by(2) {
        let outcomes: Vec<Option<String>> = (0u64..1 << (n * n))
            .into_par_iter()
            .filter_map(|code| {
                let f = GF2Form::from_code(n, code);
                if !f.is_nonsingular() {
                    return None;
                }
                Some(compare_arf(&f))
            })
            .collect();
        nonsingular += outcomes.len() as u64;
        r.absorb(outcomes);
    }
    r.notes.push(format!("{} nonsingular forms of dimension <= {}", nonsingular, max_dim));
    let rand = run_trials("arf", seed, random6, |rng| loop {
        let f = GF2Form::from_code(6, rng.gen::<u64>() & ((1 << 36) - 1));
        if f.is_nonsingular() {
            return compare_arf(&f);
        }
    });
    r.notes.push(format!("{} random forms of dimension 6", rand.cases));
    r.merge(rand);
    Ok(r)
}

fn compare_arf(f: &GF2Form) -> Option<String> {
    match (arf(f), arf_democratic(f)) {
        (Ok(a), Ok(b)) if a == b => None,
        (a, b) => Some(format!("psi={:?}: classical={:?} democratic={:?}", f.psi(), a, b)),
    }
}

// ---------------------------------------------------------------------------
// Naive polynomial arithmetic

type NP = Vec<i128>;
type N2 = [[NP; 2]; 2];

fn np_trim(mut a: NP) -> NP {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn np_add(a: &NP, b: &NP) -> NP {
    let n = a.len().max(b.len());
    np_trim((0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect())
}

fn np_scale(a: &NP, c: i128) -> NP {
    np_trim(a.iter().map(|v| v * c).collect())
}

fn np_mul(a: &NP, b: &NP) -> NP {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    np_trim(out)
}

fn np_of(p: &IntPoly) -> NP {
    np_trim(p.coeffs().iter().map(|c| c.to_i128().expect("small coefficient")).collect())
}

fn np_random(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> NP {
    let b = bound as i128;
    np_trim((0..=deg).map(|_| rng.gen_range(-b..=b)).collect())
}

fn n2_add(a: &N2, b: &N2) -> N2 {
    std::array::from_fn(|i| std::array::from_fn(|j| np_add(&a[i][j], &b[i][j])))
}

fn n2_scale(a: &N2, c: i128) -> N2 {
    std::array::from_fn(|i| std::array::from_fn(|j| np_scale(&a[i][j], c)))
}

fn n2_mul(a: &N2, b: &N2) -> N2 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| np_add(&np_mul(&a[i][0], &b[0][j]), &np_mul(&a[i][1], &b[1][j])))
    })
}

fn n2_t(a: &N2) -> N2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn n2_x() -> N2 {
    [[vec![1], vec![]], [vec![], vec![0, 1]]]
}

fn n2_of(m: &Mat) -> Result<N2> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::shape("expected a 2x2 matrix"));
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| np_of(m.get(i, j)))))
}

fn n2_to_mat(a: &N2) -> Mat {
    Mat::from_fn(2, 2, |i, j| IntPoly::from_coeffs(a[i][j].iter().map(|&c| BigInt::from(c)).collect()))
}

fn n2_random_sym(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> N2 {
    let (a, b, c) = (np_random(rng, deg, bound), np_random(rng, deg, bound), np_random(rng, deg, bound));
    [[a, b.clone()], [b, c]]
}

fn n2_random_quad(rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> N2 {
    let mut q = n2_random_sym(rng, deg, bound);
    for i in 0..2 {
        q[i][i] = np_scale(&q[i][i], 2);
    }
    q
}

// ---------------------------------------------------------------------------
// Denominators and reduction checks

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Q0Zx,
    Q3Zx,
    Q0Z,
    Q3Z,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Q0Zx => "q0zx",
            Group::Q3Zx => "q3zx",
            Group::Q0Z => "q0z",
            Group::Q3Z => "q3z",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "q0zx" => Group::Q0Zx,
            "q3zx" => Group::Q3Zx,
            "q0z" => Group::Q0Z,
            "q3z" => Group::Q3Z,
            _ => return Err(Error::Parse(format!("unknown group {:?}", s))),
        })
    }

    fn over_zx(self) -> bool {
        matches!(self, Group::Q0Zx | Group::Q3Zx)
    }
}

/// `4Q + 2(N+N^T) − 4N^T XN` (q0) or `Q + L − LXL` (q3); over Z the same
/// with 1×1 matrices and `X = (1)`.
pub fn denominator_element(group: Group, q: &Mat, n: &Mat) -> Result<Mat> {
    if !q.is_symmetric() || !q.diagonal().iter().all(IntPoly::is_even) {
        return Err(Error::pre("Q must be symmetric with even diagonal"));
    }
    if group.over_zx() {
        let (q, n) = (n2_of(q)?, n2_of(n)?);
        let x = n2_x();
        let d = match group {
            Group::Q0Zx => {
                let nxn = n2_mul(&n2_mul(&n2_t(&n), &x), &n);
                n2_add(
                    &n2_add(&n2_scale(&q, 4), &n2_scale(&n2_add(&n, &n2_t(&n)), 2)),
                    &n2_scale(&nxn, -4),
                )
            }
            _ => {
                if n != n2_t(&n) {
                    return Err(Error::pre("L must be symmetric"));
                }
                let lxl = n2_mul(&n2_mul(&n, &x), &n);
                n2_add(&n2_add(&q, &n), &n2_scale(&lxl, -1))
            }
        };
        return Ok(n2_to_mat(&d));
    }
    let scalar = |m: &Mat| -> Result<i128> {
        match (m.rows(), m.cols(), m.get(0, 0).is_constant()) {
            (1, 1, true) => Ok(np_of(m.get(0, 0)).first().copied().unwrap_or(0)),
            _ => Err(Error::shape("expected a constant 1x1 matrix")),
        }
    };
    let (q, n) = (scalar(q)?, scalar(n)?);
    let d = match group {
        Group::Q0Z => 4 * q + 4 * n - 4 * n * n,
        _ => q + n - n * n,
    };
    Ok(Mat::from_fn(1, 1, |_, _| IntPoly::from_big(BigInt::from(d))))
}

/// A random element of the denominator subgroup.
pub fn sample_denominator(group: Group, seed: u64, deg: usize, bound: i64) -> Mat {
    sample_denominator_rng(group, &mut ChaCha8Rng::seed_from_u64(seed), deg, bound)
}

fn sample_denominator_rng(group: Group, rng: &mut ChaCha8Rng, deg: usize, bound: i64) -> Mat {
    let (q, n) = if group.over_zx() {
        let q = n2_random_quad(rng, deg, bound);
        let n = match group {
            Group::Q0Zx => std::array::from_fn(|_| std::array::from_fn(|_| np_random(rng, deg, bound))),
            _ => n2_random_sym(rng, deg, bound),
        };
        (n2_to_mat(&q), n2_to_mat(&n))
    } else {
        let c = |v: i64| Mat::from_fn(1, 1, |_, _| IntPoly::constant(v));
        (c(2 * rng.gen_range(-bound..=bound)), c(rng.gen_range(-bound..=bound)))
    };
    denominator_element(group, &q, &n).expect("generated parts are valid")
}

/// Random numerator element: a generic-looking base plus a denominator element.
fn sample_numerator(group: Group, rng: &mut ChaCha8Rng) -> Mat {
    match group {
        Group::Q0Zx => {
            let a = np_add(&vec![rng.gen_range(-9..=9)], &np_scale(&np_random(rng, 4, 5), 2));
            let b = np_scale(&np_random(rng, 3, 5), 2);
            let c = np_scale(&np_random(rng, 4, 5), 2);
            let base = n2_to_mat(&[[a, b.clone()], [b, c]]);
            &base + &sample_denominator_rng(group, rng, 2, 3)
        }
        Group::Q3Zx => n2_to_mat(&n2_random_sym(rng, 4, 9)),
        Group::Q0Z | Group::Q3Z => Mat::from_fn(1, 1, |_, _| IntPoly::constant(rng.gen_range(-50..=50))),
    }
}

/// Reduces a numerator element of `group` to its class.
pub fn reduce_in(group: Group, m: &Mat) -> Result<QClass> {
    let scalar = || -> Result<BigInt> {
        if m.rows() != 1 || m.cols() != 1 || !m.get(0, 0).is_constant() {
            return Err(Error::shape("expected a constant 1x1 matrix"));
        }
        Ok(m.get(0, 0).coeff(0).clone())
    };
    Ok(match group {
        Group::Q0Zx => QClass::Q0Zx(reduce_q0_Zx(m)?),
        Group::Q3Zx => QClass::Q3Zx(reduce_q3_Zx(m)?),
        Group::Q0Z => QClass::Z(reduce_qn_Z(0, &scalar()?)),
        Group::Q3Z => QClass::Z(reduce_qn_Z(3, &scalar()?)),
    })
}

fn zero_class(group: Group) -> QClass {
    match group {
        Group::Q0Zx => QClass::Q0Zx(Q0ClassZx::zero()),
        Group::Q3Zx => QClass::Q3Zx(Q3ClassZx::zero()),
        Group::Q0Z => QClass::Z(reduce_qn_Z(0, &BigInt::from(0))),
        Group::Q3Z => QClass::Z(reduce_qn_Z(3, &BigInt::from(0))),
    }
}

fn reduction_trial(group: Group, rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let d = sample_denominator_rng(group, rng, 3, 4);
    let m = sample_numerator(group, rng);
    let m2 = sample_numerator(group, rng);
    if group == Group::Q0Zx && !check_numerator_q0(&d, XMatrix::Zx) {
        return Ok(Some(format!("denominator element {:?} is not in the numerator", d)));
    }
    let zero = zero_class(group);
    let rd = reduce_in(group, &d)?;
    if !q_equal(&rd, &zero)? {
        return Ok(Some(format!("D={:?} reduces to {:?}", d, rd)));
    }
    let rm = reduce_in(group, &m)?;
    let shifted = reduce_in(group, &(&m + &d))?;
    if !q_equal(&rm, &shifted)? {
        return Ok(Some(format!("M={:?}, D={:?}: {:?} vs {:?}", m, d, rm, shifted)));
    }
    let sum = reduce_in(group, &(&m + &m2))?;
    let want = q_add(&rm, &reduce_in(group, &m2)?)?;
    if !q_equal(&sum, &want)? {
        return Ok(Some(format!("additivity fails for M={:?}, M'={:?}", m, m2)));
    }
    Ok(None)
}

/// Denominators reduce to zero, shifts by them are invisible, and the
/// reduction is additive.
pub fn verify_reduction(group: Group, trials: usize, seed: u64) -> Report {
    run_trials(group.name(), seed, trials, |rng| {
        reduction_trial(group, rng).unwrap_or_else(|e| Some(format!("error: {}", e)))
    })
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration

const EXHAUSTIVE_BUDGET: u64 = 1_000_000;

/// All symmetric `L` of degree ≤ `deg` with coefficients in `[lo, hi]`:
/// `reduce_q3_Zx(L − LXL) = 0`, additivity against the mirrored instance, and
/// every target of degree ≤ `deg` is attained by its preimage.
pub fn exhaustive_q3_truncated(deg: usize, lo: i64, hi: i64) -> Result<Report> {
    exhaustive_q3_with_budget(deg, lo, hi, EXHAUSTIVE_BUDGET)
}

/// [`exhaustive_q3_truncated`] with an explicit instance budget.
pub fn exhaustive_q3_with_budget(deg: usize, lo: i64, hi: i64, budget: u64) -> Result<Report> {
    let mut r = Report::new(&format!("exhaustive-q3[deg<={},{}..={}]", deg, lo, hi), None);
    if lo > hi {
        r.notes.push("empty window".into());
        return Ok(r);
    }
    let w = (hi - lo + 1) as u64;
    let slots = 3 * (deg + 1) as u32;
    let total = w.checked_pow(slots).filter(|&t| t <= budget).ok_or_else(|| {
        Error::pre(format!("{}^{} instances exceed the budget of {}", w, slots, budget))
    })?;
    let decode = |mut idx: u64| -> N2 {
        let mut digits = Vec::with_capacity(slots as usize);
        for _ in 0..slots {
            digits.push((idx % w) as i128 + lo as i128);
            idx /= w;
        }
        let part = |k: usize| np_trim(digits[k * (deg + 1)..(k + 1) * (deg + 1)].to_vec());
        [[part(0), part(1)], [part(1), part(2)]]
    };
    let x = n2_x();
    let outcomes: Vec<Option<String>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let l = decode(idx);
            let d = n2_add(&l, &n2_scale(&n2_mul(&n2_mul(&l, &x), &l), -1));
            let v = reduce_q3_Zx(&n2_to_mat(&d)).expect("symmetric").value;
            if !v.is_zero() {
                return Some(format!("L={:?}: L-LXL reduces to {:?}", l, v));
            }
            let l2 = decode(total - 1 - idx);
            let (a, b) = (n2_to_mat(&l), n2_to_mat(&l2));
            let lhs = reduce_q3_Zx(&(&a + &b)).expect("symmetric");
            let rhs = reduce_q3_Zx(&a).expect("symmetric").add(&reduce_q3_Zx(&b).expect("symmetric"));
            (lhs != rhs).then(|| format!("additivity fails for L={:?}, L'={:?}", l, l2))
        })
        .collect();
    r.absorb(outcomes);
    let targets = 1u32 << (deg + 1);
    r.absorb((0..targets).map(|bits| {
        let t = ResPoly::new(Modulus::Two, (0..=deg).map(|i| ((bits >> i) & 1) as u8).collect());
        let got = reduce_q3_Zx(&preimage::q3zx(&Q3ClassZx { value: t.clone() })).expect("symmetric");
        (got.value != t).then(|| format!("target {:?} reduced to {:?}", t, got.value))
    }));
    r.notes.push(format!("{} instances, {} targets", total, targets));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Surjectivity

fn all_res(m: Modulus, len: usize) -> Vec<ResPoly> {
    let b = m.value() as usize;
    (0..b.pow(len as u32))
        .map(|mut k| {
            let mut cs = Vec::with_capacity(len);
            for _ in 0..len {
                cs.push((k % b) as u8);
                k /= b;
            }
            ResPoly::new(m, cs)
        })
        .collect()
}

/// Which preimage formulas to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preimages {
    /// Each target coefficient placed at its leading position.
    Naive,
    /// Exact right inverses.
    Section,
}

/// Round trips of every target with component degree ≤ `deg` through the
/// coefficient maps and the composite `Q_3` reduction over Z[x]. The composite
/// `Q_0` reduction factors through `f_0(1)` and `f_0(x)`, so its round trip is
/// exhaustive only up to degree `COMPOSITE_Q0_DEGREE`.
pub const COMPOSITE_Q0_DEGREE: usize = 2;

pub fn surjectivity(kind: Preimages, deg: usize) -> Report {
    let len = deg + 1;
    let name = match kind {
        Preimages::Naive => "surjectivity-naive",
        Preimages::Section => "surjectivity-section",
    };
    let mut r = Report::new(name, None);
    let two = all_res(Modulus::Two, len);
    let four = all_res(Modulus::Four, len);

    let mut part = Report::new("f_-1", None);
    part.absorb(two.iter().map(|c| {
        let a = f_m1_one(&preimage::f_m1_one_naive(c));
        let b = f_m1_x(&preimage::f_m1_x_naive(c));
        (a != *c || b != *c).then(|| format!("f_-1 target {:?}: f_-1(1) gives {:?}, f_-1(x) gives {:?}", c, a, b))
    }));
    part.absorb(two.iter().map(|c| {
        let got = reduce_q3_Zx(&preimage::q3zx(&Q3ClassZx { value: c.clone() })).expect("symmetric");
        (got.value != *c).then(|| format!("q3zx target {:?} gives {:?}", c, got.value))
    }));
    r.notes.push(format!("f_-1(1), f_-1(x), q3zx: {} of {} failed", part.failures, part.cases));
    r.merge(part);

    let one_pre = match kind {
        Preimages::Naive => preimage::f0_one_naive,
        Preimages::Section => preimage::f0_one_section,
    };
    let x_pre = match kind {
        Preimages::Naive => preimage::f0_x_naive,
        Preimages::Section => preimage::f0_x_section,
    };
    let mut part = Report::new("f_0(1)", None);
    let outcomes: Vec<Option<String>> = (0u8..8)
        .into_par_iter()
        .flat_map_iter(|s| {
            let two = &two;
            four.iter().flat_map(move |b| {
                two.iter().map(move |c| {
                    let got = f0_one(&one_pre(s, b, c)).expect("numerator");
                    (got != (s, b.clone(), c.clone()))
                        .then(|| format!("f_0(1) target ({}, {:?}, {:?}) gives {:?}", s, b, c, got))
                })
            })
        })
        .collect();
    part.absorb(outcomes);
    r.notes.push(format!("f_0(1): {} of {} failed", part.failures, part.cases));
    r.merge(part);

    let mut part = Report::new("f_0(x)", None);
    part.absorb(four.iter().flat_map(|c| {
        two.iter().map(move |d| {
            let got = f0_x(&x_pre(c, d)).expect("numerator");
            (got != (c.clone(), d.clone())).then(|| format!("f_0(x) target ({:?}, {:?}) gives {:?}", c, d, got))
        })
    }));
    r.notes.push(format!("f_0(x): {} of {} failed", part.failures, part.cases));
    r.merge(part);

    let build = match kind {
        Preimages::Naive => preimage::q0zx_naive,
        Preimages::Section => preimage::q0zx_section,
    };
    let clen = len.min(COMPOSITE_Q0_DEGREE + 1);
    let (two, four) = (all_res(Modulus::Two, clen), all_res(Modulus::Four, clen));
    let mut part = Report::new("q0zx", None);
    let outcomes: Vec<Option<String>> = (0u8..8)
        .into_par_iter()
        .flat_map_iter(|s| {
            let (two, four) = (&two, &four);
            four.iter().flat_map(move |t| {
                two.iter().flat_map(move |u1| {
                    two.iter().flat_map(move |u2| {
                        two.iter().map(move |u3| {
                            let class = Q0ClassZx {
                                s,
                                t: t.clone(),
                                u1: u1.clone(),
                                u2: u2.clone(),
                                u3: u3.clone(),
                            };
                            let got = reduce_q0_Zx(&build(&class)).expect("numerator");
                            (got != class).then(|| format!("q0zx target {:?} gives {:?}", class, got))
                        })
                    })
                })
            })
        })
        .collect();
    part.absorb(outcomes);
    r.notes.push(format!("q0zx (degree <= {}): {} of {} failed", clen - 1, part.failures, part.cases));
    r.merge(part);
    r
}

// ---------------------------------------------------------------------------
// Forms over Z

/// Unimodular forms from ±1 and ±E8 blocks (total dimension ≤ 10) in random
/// coordinates: `signature` matches the known value and `signature_mod8`
/// matches it mod 8.
pub fn hirzebruch_suite(trials: usize, seed: u64) -> Report {
    run_trials("hirzebruch", seed, trials, |rng| {
        let mut blocks = Vec::new();
        let mut dim = 0;
        let mut expected = 0i64;
        if rng.gen_bool(0.5) {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            blocks.push(if sign == 1 { e8() } else { IntSymForm::from_mat(&e8().to_mat().scale_i64(-1)).expect("symmetric") });
            dim += 8;
            expected += 8 * sign;
        }
        let extra = rng.gen_range(usize::from(dim == 0)..=(10 - dim));
        for _ in 0..extra {
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            blocks.push(IntSymForm::from_i64(&[&[s]]).expect("symmetric"));
            expected += s;
            dim += 1;
        }
        let d = blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| acc.direct_sum(b));
        let e = random_int_unimodular(rng, dim, 3 * dim, 2);
        let f = match d.conjugate(&e) {
            Ok(f) => f,
            Err(err) => return Some(format!("conjugation failed: {}", err)),
        };
        match (signature(&f), signature_mod8(&f)) {
            (Ok(s), Ok(m)) if s == expected && i64::from(m) == expected.rem_euclid(8) => None,
            (s, m) => Some(format!("dim {}: expected signature {}, got {:?} and mod 8 {:?}", dim, expected, s, m)),
        }
    })
}

/// `arf_L2(∂a) = a` and `signature(symmetrize(∂a)) = 0` for `a ∈ {0, 1}`.
pub fn boundary_suite() -> Report {
    let mut r = Report::new("boundary", None);
    r.absorb((0..2i64).flat_map(|a| {
        let m = Mat::from_i64(&[&[a]]);
        let l2 = boundary_q3_to_L2(&m, XMatrix::Z)
            .and_then(|f| arf_L2(&f, &LagrangianWitness::standard(1)));
        let l0 = boundary_q1_to_L0(&m, XMatrix::Z)
            .and_then(|f| IntSymForm::from_mat(&symmetrize(&f)))
            .and_then(|g| signature(&g));
        [
            (l2 != Ok(a as u8)).then(|| format!("arf_L2(boundary_q3(a={})) = {:?}", a, l2)),
            (l0 != Ok(0)).then(|| format!("signature(boundary_q1(a={})) = {:?}", a, l0)),
        ]
    }));
    r
}

// ---------------------------------------------------------------------------
// Canonical examples

/// `(K_M, ψ_M; L_M) = (A^2 ⊕ A^2, (X 1; 0 M); A^2 ⊕ 0)`.
pub fn k_m_form(m: &Mat) -> Result<EpsForm> {
    XMatrix::Zx.check_shape(m, "M")?;
    EpsForm::new(Sign::Minus, Mat::block2(&XMatrix::Zx.mat(), &Mat::identity(2), &Mat::zeros(2, 2), m)?)
}

/// Random diagonal `M` (degree ≤ 3, coefficients in [−8, 8]): the generalized
/// Arf invariant of `(K_M, ψ_M; L_M)` is the class of `M` and of `h^T X h`.
pub fn generalized_canonical_suite(trials: usize, seed: u64) -> Report {
    run_trials("generalized-canonical", seed, trials, |rng| {
        let m = Mat::diag(&[random_poly(rng, 3, 8), random_poly(rng, 3, 8)]);
        let want = reduce_q3_Zx(&m).expect("symmetric");
        let h = BundleMapG::from_diagonal(&m.diagonal()).g;
        let hxh = &(&h.transpose() * &XMatrix::Zx.mat()) * &h;
        let via_h = reduce_q3_Zx(&hxh).expect("symmetric");
        let got = k_m_form(&m).and_then(|f| generalized_arf_form(&f, &LagrangianWitness::standard(2)));
        match got {
            Ok(c) if c == want && via_h == want => None,
            other => Some(format!("M={:?}: arf={:?}, class(M)={:?}, class(h^T X h)={:?}", m, other, want, via_h)),
        }
    })
}

/// Random `M` with entries in `2Z[x]` (degree ≤ 2): the linking Arf invariant
/// of the canonical order-2 form is the class of `M`.
pub fn linking_canonical_suite(trials: usize, seed: u64) -> Report {
    run_trials("linking-canonical", seed, trials, |rng| {
        let b = random_poly(rng, 2, 6);
        let m = Mat::from_rows(vec![
            vec![random_poly(rng, 2, 6), b.clone()],
            vec![b, random_poly(rng, 2, 6)],
        ])
        .expect("2x2")
        .scale_i64(2);
        let got = canonical_order2_form(&m, XMatrix::Zx)
            .and_then(|(res, _)| linking_arf_Zx(&res, &mu_values_of(&res)));
        let want = reduce_q0_Zx(&m);
        match (&got, &want) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(format!("M={:?}: linking arf {:?}, class {:?}", m, got, want)),
        }
    })
}

/// Cross-check of `g ν g^T` against `g h^T X h g^T` on random split forms.
pub fn generalized_h_suite(trials: usize, seed: u64) -> Report {
    run_trials("generalized-h", seed, trials, |rng| {
        let l = rng.gen_range(1..=3);
        let mu = crate::gen::random_sym(rng, l, 3, 6);
        let nu = crate::gen::random_sym(rng, l, 3, 6);
        let s = crate::forms::SplitForm::new(Sign::Minus, mu, nu).expect("symmetric blocks");
        let a = crate::arf::generalized_arf_Zx(&s);
        let b = generalized_arf_Zx_via_h(&s);
        (a != b).then(|| format!("{:?}: {:?} vs {:?}", s, a, b))
    })
}

// ---------------------------------------------------------------------------
// Linking forms

/// A random resolution `(d, δ, φ)` admitting a lift `f_0` with `f_0 d ≡ 0`.
pub fn random_resolution(rng: &mut ChaCha8Rng, max_rank: usize) -> LinkingResolution {
    loop {
        let u = rng.gen_range(1..=max_rank);
        let e1 = random_unimodular(rng, u, 2 * u);
        let e2 = random_unimodular(rng, u, 2 * u);
        let ks: Vec<u32> = (0..u).map(|_| rng.gen_range(0..=2)).collect();
        let diag = Mat::diag(&ks.iter().map(|&k| IntPoly::constant(1 << k)).collect::<Vec<_>>());
        let d = &(&e1 * &diag) * &e2;
        // f_0 E1 vanishes mod 2 on the columns with k_i = 0
        let fp = Mat::from_fn(2, u, |_, j| IntPoly::constant(if ks[j] > 0 { rng.gen_range(0..2) } else { 0 }));
        let e1_inv = e1.inverse_unimodular().expect("unimodular");
        let f0 = (&fp * &e1_inv).map(|p| p.reduce_mod(Modulus::Two).lift());
        let mut delta = crate::gen::random_sym(rng, u, 2, 3);
        for i in 0..u {
            let (p, q) = (f0.get(0, i), f0.get(1, i));
            let lift = &(p * p) + &(&(q * q) * &IntPoly::x());
            let v = &lift + &delta.get(i, i).scale_i64(2);
            delta.set(i, i, v);
        }
        let mut phi = crate::gen::random_sym(rng, u, 2, 3).scale_i64(2);
        for i in 0..u {
            if delta.get(i, i).reduce_mod(Modulus::Two) == ResPoly::mod2(&[1]) && rng.gen_bool(0.5) {
                let v = phi.get(i, i) + &IntPoly::one();
                phi.set(i, i, v);
            }
        }
        if let Ok(res) = LinkingResolution::new(d, delta, phi) {
            return res;
        }
    }
}

fn random_pair(rng: &mut ChaCha8Rng, u: usize) -> VecPair {
    VecPair {
        x1: (0..u).map(|_| random_poly(rng, 2, 4)).collect(),
        x0: (0..u).map(|_| random_poly(rng, 2, 4)).collect(),
    }
}

/// Changing the lifts `(p_i, q_i)` by even amounts and `φ` by `dσd^T`
/// (`σ` symmetric, even diagonal) leaves the linking Arf invariant unchanged.
pub fn linking_lift_suite(trials: usize, seed: u64) -> Report {
    run_trials("linking-lift", seed, trials, |rng| {
        let res = random_resolution(rng, 3);
        let u = res.rank();
        let base = match linking_arf_Zx(&res, &mu_values_of(&res)) {
            Ok(c) => c,
            Err(e) => return Some(format!("{:?}: {}", res, e)),
        };
        let f0 = linking_lift(&res, &mu_values_of(&res)).expect("valid mu values");
        let f0p = &f0 + &crate::gen::random_mat(rng, 2, u, 2, 3).scale_i64(2);
        let sigma = crate::gen::random_quad(rng, u, 2, 3);
        let phi2 = res.phi() + &(&(res.d() * &sigma) * &res.d().transpose());
        let res2 = match LinkingResolution::new(res.d().clone(), res.delta().clone(), phi2) {
            Ok(r) => r,
            Err(e) => return Some(format!("perturbed resolution rejected: {}", e)),
        };
        match linking_arf_with_lift(&res2, &f0p) {
            Ok(c) if c == base => None,
            other => Some(format!("{:?}: base {:?}, perturbed {:?}", res, base, other)),
        }
    })
}

fn refinement_trial(rng: &mut ChaCha8Rng) -> Result<Option<String>> {
    let res = random_resolution(rng, 3);
    let u = res.rank();
    let (x, y) = (random_pair(rng, u), random_pair(rng, u));
    let lxy = eval_lambda(&res, &x, &y)?;
    let lyx = eval_lambda(&res, &y, &x)?;
    if lxy != lyx {
        return Ok(Some(format!("lambda not symmetric: {:?} vs {:?}", lxy, lyx)));
    }
    let lhs = eval_mu(&res, &x.add(&y))?;
    let rhs = eval_mu(&res, &x)?.add(&eval_mu(&res, &y)?).add(&lxy).add(&lyx).mod_2int();
    if lhs != rhs {
        return Ok(Some(format!("mu(x+y) = {:?} but the refinement identity gives {:?}", lhs, rhs)));
    }
    if eval_mu(&res, &x)?.mod_int() != eval_lambda(&res, &x, &x)? {
        return Ok(Some("mu(x) does not reduce to lambda(x, x)".into()));
    }
    let mut xu = x.clone();
    let mut yu = y.clone();
    xu.x1 = vec![IntPoly::zero(); u];
    yu.x1 = vec![IntPoly::zero(); u];
    if !eval_lambda(&res, &xu, &yu)?.is_zero() {
        return Ok(Some("lambda does not vanish on U".into()));
    }
    let v: Vec<IntPoly> = (0..u).map(|_| random_poly(rng, 1, 3)).collect();
    let w: Vec<IntPoly> = (0..u).map(|_| random_poly(rng, 1, 3)).collect();
    let shifted = x.add(&res.relation(&v, &w));
    if eval_mu(&res, &shifted)? != eval_mu(&res, &x)? || eval_lambda(&res, &shifted, &y)? != lxy {
        return Ok(Some("values change under a relation".into()));
    }
    Ok(None)
}

/// Quadratic-refinement identities of `eval_mu`/`eval_lambda`.
pub fn refinement_suite(trials: usize, seed: u64) -> Report {
    run_trials("refinement", seed, trials, |rng| {
        refinement_trial(rng).unwrap_or_else(|e| Some(format!("error: {}", e)))
    })
}
