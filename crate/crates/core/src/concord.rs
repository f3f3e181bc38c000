//! The algebraic concordance layer: classes of knot pairings under block
//! sum, order obstructions, the knot → class pipeline, and isometric
//! structures.
//!
//! A class carries an admissible representative — the pairing of a
//! spanning surface with Euler number zero — together with a bundle of
//! concordance evidence recomputed deterministically from it.  Inputs
//! whose own admissible normal form is out of reach of the bounded search
//! are stabilized by tube moves (null-concordant, so the class is
//! unchanged); when even that fails to verify, construction requires an
//! explicit waiver and the class records it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

use crate::gauss::Diagram;
use crate::glform::{preferred_checkerboard, s_star_moves, SStarMove};
use crate::invariants::{alexander, ratio_string, signature_function, SignatureFunction};
use crate::matalg::{
    is_admissible_with, metabolic, squarefree_odd_primes, Admissibility, MatrixError,
    MetabolicVerdict, MockSeifertMatrix, SearchBudget,
};
use crate::parity::{stable_project, ParityKind};
use crate::poly::{self, FoxMilnor, NormalForm};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConcordError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("matrix is not admissible (verdict {0:?}); construct with a waiver to proceed")]
    Inadmissible(Admissibility),
    #[error("isometric structure requires a nonsingular matrix")]
    SingularMatrix,
}

// ---------------------------------------------------------------------------
// Obstruction bundle
// ---------------------------------------------------------------------------

/// The square class of `det(A + Aᵀ)`: the determinant itself and its
/// square-free part (sign times the product of primes of odd exponent).
/// The part is `None` when the determinant vanishes or when a residual
/// cofactor beyond the factoring bound cannot be certified square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareClass {
    pub determinant: BigInt,
    pub squarefree_part: Option<BigInt>,
}

impl SquareClass {
    fn of_symmetrization(a: &MockSeifertMatrix) -> Self {
        let n = a.size();
        let mut flat = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                flat[i * n + j] = a.entry(i, j) + a.entry(j, i);
            }
        }
        let determinant = MockSeifertMatrix::from_flat(n, flat).det().clone();
        let squarefree_part = if determinant.is_zero() {
            None
        } else {
            squarefree_odd_primes(&determinant).map(|(negative, primes)| {
                let mut v = BigInt::one();
                for p in primes {
                    v *= BigInt::from(p);
                }
                if negative {
                    -v
                } else {
                    v
                }
            })
        };
        Self {
            determinant,
            squarefree_part,
        }
    }

    /// `Some(true)` when the determinant is a nonzero perfect square.
    pub fn is_square(&self) -> Option<bool> {
        self.squarefree_part.as_ref().map(|sf| sf.is_one())
    }
}

impl Serialize for SquareClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SquareClass", 2)?;
        st.serialize_field("determinant", &self.determinant.to_string())?;
        st.serialize_field(
            "squarefree_part",
            &self.squarefree_part.as_ref().map(BigInt::to_string),
        )?;
        st.end()
    }
}

/// Per-matrix concordance evidence, all recomputed deterministically from
/// the representative: the normal form of `det(tA − Aᵀ)`, its Fox–Milnor
/// verdict, the complete signature function, the square class of
/// `det(A + Aᵀ)`, and the metabolic verdict at the construction budget.
#[derive(Clone, Debug, Serialize)]
pub struct ObstructionBundle {
    pub delta: NormalForm,
    pub fox_milnor: FoxMilnor,
    pub signature: SignatureFunction,
    pub square_class: SquareClass,
    pub metabolic: MetabolicVerdict,
}

fn bundle_of(a: &MockSeifertMatrix, budget: &SearchBudget) -> ObstructionBundle {
    let delta_poly = alexander(a);
    let delta = poly::normalize(&delta_poly)
        .expect("det(tA − Aᵀ) is nonzero when det(A) is odd");
    let fox_milnor =
        poly::fox_milnor(&delta_poly).expect("det(tA − Aᵀ) is nonzero when det(A) is odd");
    ObstructionBundle {
        delta,
        fox_milnor,
        signature: signature_function(a),
        square_class: SquareClass::of_symmetrization(a),
        metabolic: metabolic(a, budget),
    }
}

// ---------------------------------------------------------------------------
// Concordance classes
// ---------------------------------------------------------------------------

/// An element of the concordance group of knot pairings: an admissible
/// representative (possibly reached by stabilization, possibly held under
/// waiver) plus its obstruction bundle.
#[derive(Clone, Debug, Serialize)]
pub struct ConcordanceClass {
    representative: MockSeifertMatrix,
    /// Number of tube blocks appended to the input to reach a verified
    /// admissible form; zero when the input itself was used.
    stabilized: usize,
    /// Verdict for the representative (for waived classes: for the input).
    admissibility: Admissibility,
    waived: bool,
    bundle: ObstructionBundle,
}

impl ConcordanceClass {
    pub fn representative(&self) -> &MockSeifertMatrix {
        &self.representative
    }

    pub fn bundle(&self) -> &ObstructionBundle {
        &self.bundle
    }

    pub fn admissibility(&self) -> Admissibility {
        self.admissibility
    }

    pub fn waived(&self) -> bool {
        self.waived
    }

    pub fn stabilized(&self) -> usize {
        self.stabilized
    }

    /// The matrix the class was built from: the representative with any
    /// stabilization blocks removed.
    pub fn input_matrix(&self) -> MockSeifertMatrix {
        let n = self.representative.size() - 2 * self.stabilized;
        let mut flat = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                flat[i * n + j] = self.representative.entry(i, j);
            }
        }
        let mut m = MockSeifertMatrix::from_flat(n, flat);
        m.set_euler(self.representative.euler());
        m
    }
}

/// The identity class (empty pairing).
pub fn identity() -> ConcordanceClass {
    class_of(&MockSeifertMatrix::empty()).expect("the empty matrix is admissible")
}

/// Wraps a matrix as a concordance class at the default budget, requiring
/// a verified admissible representative.
pub fn class_of(a: &MockSeifertMatrix) -> Result<ConcordanceClass, ConcordError> {
    class_of_with(a, &SearchBudget::default(), false)
}

/// [`class_of`] with the admissibility requirement waived: the class is
/// constructed even when no admissible form is verified, and records the
/// waiver.  The matrix must still be a knot pairing (mod-2 symmetric with
/// odd determinant).
pub fn class_of_waived(a: &MockSeifertMatrix) -> Result<ConcordanceClass, ConcordError> {
    class_of_with(a, &SearchBudget::default(), true)
}

/// Class construction with explicit budget and waiver flag.
///
/// The input must be a knot pairing even under waiver — the bundle's
/// polynomial and signature invariants are meaningless otherwise.  When
/// the input is not verifiably admissible, up to two tube stabilizations
/// (each null-concordant) are tried before falling back to the waiver.
pub fn class_of_with(
    a: &MockSeifertMatrix,
    budget: &SearchBudget,
    waiver: bool,
) -> Result<ConcordanceClass, ConcordError> {
    a.validate_knot_matrix()?;
    let admissibility = is_admissible_with(a, budget);
    if admissibility == Admissibility::Yes {
        return Ok(ConcordanceClass {
            representative: a.clone(),
            stabilized: 0,
            admissibility,
            waived: false,
            bundle: bundle_of(a, budget),
        });
    }
    if a.size() % 2 == 0 {
        let mut rep = a.clone();
        for k in 1..=2usize {
            rep = s_star_moves(&rep, SStarMove::Tube);
            if is_admissible_with(&rep, budget) == Admissibility::Yes {
                let bundle = bundle_of(&rep, budget);
                return Ok(ConcordanceClass {
                    representative: rep,
                    stabilized: k,
                    admissibility: Admissibility::Yes,
                    waived: false,
                    bundle,
                });
            }
        }
    }
    if waiver {
        return Ok(ConcordanceClass {
            representative: a.clone(),
            stabilized: 0,
            admissibility,
            waived: true,
            bundle: bundle_of(a, budget),
        });
    }
    Err(ConcordError::Inadmissible(admissibility))
}

/// Block sum of classes.  The sum of two knot pairings is again a knot
/// pairing, so construction cannot fail; stabilization is redone from
/// scratch on the sum (deterministically), and a waiver is attached
/// automatically if needed.
pub fn group_op(x: &ConcordanceClass, y: &ConcordanceClass) -> ConcordanceClass {
    group_op_with(x, y, &SearchBudget::default())
}

/// [`group_op`] with an explicit budget.
pub fn group_op_with(
    x: &ConcordanceClass,
    y: &ConcordanceClass,
    budget: &SearchBudget,
) -> ConcordanceClass {
    let sum = x.input_matrix().block_sum(&y.input_matrix());
    class_of_with(&sum, budget, true).expect("block sum of knot pairings is a knot pairing")
}

/// The inverse class, represented by the negated matrix.
pub fn inverse(x: &ConcordanceClass) -> ConcordanceClass {
    class_of_with(&x.input_matrix().negate(), &SearchBudget::default(), true)
        .expect("negation of a knot pairing is a knot pairing")
}

// ---------------------------------------------------------------------------
// Order bounds
// ---------------------------------------------------------------------------

/// Evidence about the order of a class in the concordance group.
///
/// `One`/`Two`/`Four` report a verified metabolizer for that block power
/// (so the order divides it); `Infinite` reports a nonzero signature arc
/// (no power is ever metabolic); `LowerBound(k)` reports that the
/// `k/2`-fold power carries a metabolic obstruction, so the order does not
/// divide `k/2` — in particular a 2-power order is at least `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderBound {
    One,
    Two,
    Four,
    Infinite,
    LowerBound(u32),
}

/// Bounds the order of `x` by testing metabolicity of its 1-, 2- and
/// 4-fold block powers.  Powers are taken of the unstabilized input
/// matrix: appended tube blocks are null-concordant and only slow the
/// search down.
pub fn order_bound(x: &ConcordanceClass, budget: &SearchBudget) -> OrderBound {
    if !x.bundle.signature.all_arcs_zero() {
        return OrderBound::Infinite;
    }
    let mut lower = 1u32;
    let mut power = x.input_matrix();
    for (k, exact) in [
        (1u32, OrderBound::One),
        (2, OrderBound::Two),
        (4, OrderBound::Four),
    ] {
        match metabolic(&power, budget) {
            MetabolicVerdict::Certificate(_) => return exact,
            MetabolicVerdict::Obstructed(_) => lower = 2 * k,
            MetabolicVerdict::Unknown => {}
        }
        power = power.block_sum(&power);
    }
    OrderBound::LowerBound(lower)
}

// ---------------------------------------------------------------------------
// Knot → class pipeline
// ---------------------------------------------------------------------------

/// The pipeline from a diagram to a concordance class: stable mod-2
/// parity projection (which always lands in the checkerboard-colorable
/// regime), the preferred checkerboard surface at the basepoint, and
/// half-band moves until the Euler number is zero.
///
/// The normalized matrix describes a genuine Euler-number-zero spanning
/// surface, so it is taken with a waiver when the bounded admissibility
/// search does not verify a normal form in time.
pub fn levine_map(d: &Diagram) -> ConcordanceClass {
    let (projected, _) = stable_project(d, ParityKind::ModN(2));
    let mut m = preferred_checkerboard(&projected)
        .expect("stable mod-2 projection is checkerboard colorable");
    let mut e = m
        .euler()
        .expect("checkerboard matrices carry Euler data");
    while e != 0 {
        m = s_star_moves(&m, SStarMove::HalfBand(e.signum() as i8));
        e = m.euler().expect("half-band moves keep Euler data");
    }
    class_of_with(&m, &SearchBudget::default(), true)
        .expect("checkerboard matrices are knot pairings")
}

// ---------------------------------------------------------------------------
// Isometric structures
// ---------------------------------------------------------------------------

/// The isometric structure of a nonsingular pairing: the symmetric form
/// `Q = (A + Aᵀ)/2` and the isometry `S = (Aᵀ)⁻¹A` of `A + Aᵀ`, with the
/// flag for whether `A` can be rebuilt as `2QS(S + I)⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsometricStructure {
    pub q: Vec<Vec<BigRational>>,
    pub s: Vec<Vec<BigRational>>,
    pub reconstructible: bool,
}

impl IsometricStructure {
    /// `2QS(S + I)⁻¹`, exactly; `None` when `det(S + I) = 0`.
    pub fn reconstruct(&self) -> Option<Vec<Vec<BigRational>>> {
        let n = self.s.len();
        let spi = rat_add(&self.s, &rat_identity(n));
        let inv = rat_inverse(&spi)?;
        let qs = rat_mul(&self.q, &self.s);
        let mut out = rat_mul(&qs, &inv);
        for row in &mut out {
            for x in row.iter_mut() {
                *x += x.clone();
            }
        }
        Some(out)
    }
}

impl Serialize for IsometricStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let grid = |m: &[Vec<BigRational>]| -> Vec<Vec<String>> {
            m.iter()
                .map(|row| row.iter().map(ratio_string).collect())
                .collect()
        };
        let mut st = s.serialize_struct("IsometricStructure", 3)?;
        st.serialize_field("q", &grid(&self.q))?;
        st.serialize_field("s", &grid(&self.s))?;
        st.serialize_field("reconstructible", &self.reconstructible)?;
        st.end()
    }
}

/// Computes the isometric structure of `a`.  Errors when `det(a) = 0`;
/// a vanishing `det(S + I)` is not an error and is reported through the
/// `reconstructible` flag.
pub fn isometric_structure(a: &MockSeifertMatrix) -> Result<IsometricStructure, ConcordError> {
    if a.det().is_zero() {
        return Err(ConcordError::SingularMatrix);
    }
    let n = a.size();
    let rat = |v: i64| BigRational::from_integer(v.into());
    let mut am = vec![vec![BigRational::zero(); n]; n];
    let mut at = vec![vec![BigRational::zero(); n]; n];
    let mut q = vec![vec![BigRational::zero(); n]; n];
    for (i, (am_row, (at_row, q_row))) in am
        .iter_mut()
        .zip(at.iter_mut().zip(q.iter_mut()))
        .enumerate()
    {
        for j in 0..n {
            am_row[j] = rat(a.entry(i, j));
            at_row[j] = rat(a.entry(j, i));
            q_row[j] = (am_row[j].clone() + at_row[j].clone()) / rat(2);
        }
    }
    let s = rat_mul(
        &rat_inverse(&at).expect("transpose of a nonsingular matrix is invertible"),
        &am,
    );
    let reconstructible = !rat_det(&rat_add(&s, &rat_identity(n))).is_zero();
    Ok(IsometricStructure {
        q,
        s,
        reconstructible,
    })
}

// ---------------------------------------------------------------------------
// Exact rational matrix helpers
// ---------------------------------------------------------------------------

pub(crate) fn rat_identity(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(i64::from(i == j).into()))
                .collect()
        })
        .collect()
}

pub(crate) fn rat_add(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub(crate) fn rat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let m = if n == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = BigRational::zero();
                    for (k, bk) in b.iter().enumerate() {
                        acc += &a[i][k] * &bk[j];
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub(crate) fn rat_transpose(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

fn rat_det(a: &[Vec<BigRational>]) -> BigRational {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= p.clone();
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate().skip(col + 1) {
            debug_assert!(r > col);
            if !row[col].is_zero() {
                let f = row[col].clone() / p.clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x -= f.clone() * pv.clone();
                }
            }
        }
    }
    det
}

pub(crate) fn rat_inverse(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = a[i].clone();
            row.extend((0..n).map(|j| BigRational::from_integer(i64::from(j == i).into())));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let p = aug[col][col].clone();
        for x in &mut aug[col] {
            *x /= p.clone();
        }
        let pivot_row = aug[col].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, pv) in row.iter_mut().zip(&pivot_row) {
                    *x -= f.clone() * pv.clone();
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
