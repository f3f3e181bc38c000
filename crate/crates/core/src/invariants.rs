//! Matrix-derived knot invariants.
//!
//! Everything here is computed exactly from a [`MockSeifertMatrix`]: the
//! Alexander-type polynomial `Δ_A(t) = det(tA − Aᵀ)`, the signature /
//! determinant / nullity of the symmetrized pairing, the Levine–Tristram
//! style signature function with its exact jump locus on the unit circle,
//! average signatures at jump points, the `Δ(1)` sanity conditions, and the
//! span-based crosscap/genus lower bounds.
//!
//! Circle points are always exact rationals `(a + bi)/c` with
//! `a² + b² = c²`; these are dense on the circle, so no floating point is
//! ever needed, even arbitrarily close to a jump.

use crate::matalg::{self, MatrixType, MockSeifertMatrix};
use crate::poly::{self, LaurentPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

/// Errors for invariant evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    /// The signature function is undefined at `t = 1`.
    #[error("signature evaluation at the excluded point t = 1")]
    OmegaOne,
    /// A circle point must satisfy `re² + im² = 1`.
    #[error("point is not on the unit circle")]
    OffCircle,
    /// The polynomial invariant vanishes identically (singular pairing), so
    /// the jump locus is not a discrete set.
    #[error("polynomial invariant vanishes identically; jump locus is not discrete")]
    DegenerateForm,
}

// ---------------------------------------------------------------------------
// Exact circle points
// ---------------------------------------------------------------------------

/// An exact rational point on the unit circle.
///
/// Every such point has the form `((1 − T²) + 2T·i)/(1 + T²)` for a rational
/// tangent-half-angle parameter `T` (or is `−1`, the `T = ∞` limit), which
/// makes rational circle points dense on the circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirclePoint {
    re: BigRational,
    im: BigRational,
}

impl CirclePoint {
    /// Validates `re² + im² = 1`.
    pub fn new(re: BigRational, im: BigRational) -> Result<Self, InvariantError> {
        if &re * &re + &im * &im != BigRational::one() {
            return Err(InvariantError::OffCircle);
        }
        Ok(Self { re, im })
    }

    pub fn minus_one() -> Self {
        Self {
            re: -BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The point `((1 − T²) + 2T·i)/(1 + T²)`; `T > 0` is the upper half
    /// circle, `T < 0` the lower, `T = 0` the excluded point `1`.
    pub fn from_tangent(t: &BigRational) -> Self {
        let one = BigRational::one();
        let t2 = t * t;
        let den = &one + &t2;
        Self {
            re: (&one - &t2) / &den,
            im: (BigRational::from(BigInt::from(2)) * t) / &den,
        }
    }

    /// Pythagorean parametrization `((m² − n²) + 2mn·i)/(m² + n²)`.
    pub fn from_pythagorean(m: i64, n: i64) -> Result<Self, InvariantError> {
        let (m, n) = (BigInt::from(m), BigInt::from(n));
        let c = &m * &m + &n * &n;
        if c.is_zero() {
            return Err(InvariantError::OffCircle);
        }
        let c = BigRational::from(c);
        Ok(Self {
            re: BigRational::from(&m * &m - &n * &n) / &c,
            im: BigRational::from(BigInt::from(2) * &m * &n) / &c,
        })
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_one(&self) -> bool {
        self.re == BigRational::one() && self.im.is_zero()
    }

    pub fn is_minus_one(&self) -> bool {
        self.re == -BigRational::one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `x = ω + ω̄ = 2·Re ω`, the fold coordinate used for the jump locus.
    pub fn x(&self) -> BigRational {
        BigRational::from(BigInt::from(2)) * &self.re
    }
}

impl std::fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

// ---------------------------------------------------------------------------
// Alexander-type polynomial
// ---------------------------------------------------------------------------

/// `Δ_A(t) = det(tA − Aᵀ)`, computed exactly by evaluation at `n + 1`
/// integer points and integer interpolation (the determinant has degree at
/// most `n`).  The 0×0 matrix gives the constant 1.
pub fn alexander(a: &MockSeifertMatrix) -> LaurentPoly {
    let n = a.size();
    if n == 0 {
        return LaurentPoly::one();
    }
    let xs: Vec<BigInt> = (0..=n as i64).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|t| {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| t * BigInt::from(a.entry(i, j)) - BigInt::from(a.entry(j, i)))
                        .collect()
                })
                .collect();
            matalg::det_bigint(m)
        })
        .collect();
    let coeffs = interpolate_integer(&xs, &ys);
    LaurentPoly::from_coeffs(&coeffs)
}

/// Newton-form interpolation through integer points; the result is known to
/// be an integer polynomial, and the conversion asserts it.
fn interpolate_integer(xs: &[BigInt], ys: &[BigInt]) -> Vec<BigInt> {
    let n = xs.len();
    let xr: Vec<BigRational> = xs.iter().map(|x| BigRational::from(x.clone())).collect();
    let mut table: Vec<BigRational> = ys.iter().map(|y| BigRational::from(y.clone())).collect();
    let mut newton = vec![table[0].clone()];
    for level in 1..n {
        for i in 0..n - level {
            let num = &table[i + 1] - &table[i];
            let den = &xr[i + level] - &xr[i];
            table[i] = num / den;
        }
        newton.push(table[0].clone());
    }
    // Expand Σ newton[k] · ∏_{j<k} (x − xs[j]).
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            acc[i] += c * b;
        }
        if k + 1 < n {
            // basis *= (x − xs[k])
            let root = &xr[k];
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * root;
            }
            basis = next;
        }
    }
    acc.into_iter()
        .map(|c| {
            assert!(c.is_integer(), "interpolation of integer data must be integral");
            c.to_integer()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Symmetrized-pairing invariants
// ---------------------------------------------------------------------------

/// Signature, determinant, and nullity of the symmetrized pairing
/// `G = (A + Aᵀ)/2`, with the Euler correction applied when available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlInvariants {
    /// `sig(G)`.
    pub sig_part: i64,
    /// `|det G|`; an integer whenever `A + Aᵀ` has all entries even (always
    /// true for knot matrices).
    pub determinant: BigRational,
    /// Nullity of `G`.
    pub nullity: usize,
    /// `e(F)/2` when Euler metadata is present.
    pub euler_correction: Option<BigRational>,
    /// `sig(G) + e(F)/2` when Euler metadata is present.
    pub sigma: Option<BigRational>,
}

pub fn gl_invariants(a: &MockSeifertMatrix) -> GlInvariants {
    let n = a.size();
    let sym = matalg::symmetrized_rational(a); // A + Aᵀ
    let (pos, neg, zero) = matalg::signature_of_symmetric(&sym);
    let sig_part = pos as i64 - neg as i64;
    // det G = det(A + Aᵀ) / 2ⁿ.
    let det_sym = matalg::det_bigint(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from(a.entry(i, j)) + BigInt::from(a.entry(j, i)))
                    .collect()
            })
            .collect(),
    );
    let determinant =
        (BigRational::from(det_sym) / BigRational::from(BigInt::one() << n)).abs();
    let euler_correction = a
        .euler()
        .map(|e| BigRational::new(BigInt::from(e), BigInt::from(2)));
    let sigma = euler_correction
        .as_ref()
        .map(|c| BigRational::from(BigInt::from(sig_part)) + c);
    GlInvariants {
        sig_part,
        determinant,
        nullity: zero,
        euler_correction,
        sigma,
    }
}

// ---------------------------------------------------------------------------
// Levine–Tristram-type signature at a point
// ---------------------------------------------------------------------------

/// Exact signature data of `H_ω = (1 − ω)A + (1 − ω̄)Aᵀ` at one circle point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LtSignature {
    /// `sig(H_ω)`.
    pub sig_part: i64,
    /// Nullity of `H_ω`; positive exactly at jump points of the signature
    /// function (roots of `Δ_A` on the circle).
    pub nullity: usize,
    /// `e(F)/2` when Euler metadata is present.
    pub euler_correction: Option<BigRational>,
    /// `sig(H_ω) + e(F)/2` when Euler metadata is present.
    pub total: Option<BigRational>,
}

/// Exact Levine–Tristram-type signature at a rational circle point `ω ≠ 1`.
///
/// `H_ω` is Hermitian with Gaussian-rational entries; its signature is half
/// the signature of the real symmetric matrix `[[Re H, −Im H], [Im H, Re H]]`,
/// which is computed by exact congruence diagonalization.
pub fn lt_signature(
    a: &MockSeifertMatrix,
    omega: &CirclePoint,
) -> Result<LtSignature, InvariantError> {
    if omega.is_one() {
        return Err(InvariantError::OmegaOne);
    }
    let n = a.size();
    // H = (1 − re)(A + Aᵀ) + i · im (Aᵀ − A).
    let one_minus_re = BigRational::one() - omega.re();
    let im = omega.im().clone();
    let big = |x: i64| BigRational::from(BigInt::from(x));
    let mut real = vec![vec![BigRational::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let re_h = &one_minus_re * big(a.entry(i, j) + a.entry(j, i));
            let im_h = &im * big(a.entry(j, i) - a.entry(i, j));
            real[i][j] = re_h.clone();
            real[n + i][n + j] = re_h;
            real[i][n + j] = -im_h.clone();
            real[n + i][j] = im_h;
        }
    }
    let (pos, neg, zero) = matalg::signature_of_symmetric(&real);
    debug_assert_eq!((pos as i64 - neg as i64) % 2, 0);
    debug_assert_eq!(zero % 2, 0);
    let sig_part = (pos as i64 - neg as i64) / 2;
    let euler_correction = a
        .euler()
        .map(|e| BigRational::new(BigInt::from(e), BigInt::from(2)));
    let total = euler_correction
        .as_ref()
        .map(|c| BigRational::from(BigInt::from(sig_part)) + c);
    Ok(LtSignature {
        sig_part,
        nullity: zero / 2,
        euler_correction,
        total,
    })
}

// ---------------------------------------------------------------------------
// Dense integer/rational polynomial helpers (private)
// ---------------------------------------------------------------------------

fn trim_int(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn trim_rat(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn deg_int(v: &[BigInt]) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

fn eval_int_at_rat(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from(c.clone());
    }
    acc
}

fn eval_rat(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Horner evaluation at a Gaussian rational `re + im·i`.
fn eval_int_at_gaussian(p: &[BigInt], re: &BigRational, im: &BigRational) -> (BigRational, BigRational) {
    let mut ar = BigRational::zero();
    let mut ai = BigRational::zero();
    for c in p.iter().rev() {
        let nr = &ar * re - &ai * im + BigRational::from(c.clone());
        let ni = &ar * im + &ai * re;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

fn int_to_rat(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from(c.clone())).collect()
}

/// Primitive part with positive leading coefficient.
fn primitive_int(p: Vec<BigInt>) -> Vec<BigInt> {
    let p = trim_int(p);
    if p.is_empty() {
        return p;
    }
    let mut g = BigInt::zero();
    for c in &p {
        g = g.gcd(c);
    }
    let mut out: Vec<BigInt> = p.iter().map(|c| c / &g).collect();
    if out.last().unwrap().is_negative() {
        for c in &mut out {
            *c = -&*c;
        }
    }
    out
}

fn rat_to_primitive_int(p: &[BigRational]) -> Vec<BigInt> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for c in p {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
        .collect();
    primitive_int(ints)
}

/// Remainder of `a / b` over the rationals (`b` nonzero).
fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db {
        let k = r.len() - 1;
        let c = r[k].clone() / lead;
        if !c.is_zero() {
            for i in 0..=db {
                let sub = &c * &b[i];
                r[k - db + i] -= sub;
            }
        }
        r.pop();
        r = trim_rat(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn derivative_rat(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return Vec::new();
    }
    (1..p.len())
        .map(|i| &p[i] * BigRational::from(BigInt::from(i as i64)))
        .collect()
}

fn derivative_int(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return Vec::new();
    }
    (1..p.len()).map(|i| &p[i] * BigInt::from(i as i64)).collect()
}

/// Polynomial gcd over the rationals, returned as a primitive integer
/// polynomial with positive leading coefficient.
fn gcd_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut p = trim_rat(int_to_rat(a));
    let mut q = trim_rat(int_to_rat(b));
    while !q.is_empty() {
        let r = rat_rem(&p, &q);
        p = q;
        q = r;
    }
    rat_to_primitive_int(&p)
}

/// Exact division of integer polynomials; `None` if not divisible.
fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.is_empty() {
        return None;
    }
    let mut r: Vec<BigRational> = int_to_rat(a);
    let bq = int_to_rat(b);
    let db = bq.len() - 1;
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    let lead = bq.last().unwrap();
    while trim_rat(r.clone()).len() > db {
        r = trim_rat(r);
        let k = r.len() - 1;
        let c = r[k].clone() / lead;
        q[k - db] = c.clone();
        for i in 0..=db {
            let sub = &c * &bq[i];
            r[k - db + i] -= sub;
        }
    }
    if !trim_rat(r).is_empty() {
        return None;
    }
    let out: Vec<BigInt> = q
        .iter()
        .map(|c| {
            if c.is_integer() {
                Some(c.to_integer())
            } else {
                None
            }
        })
        .collect::<Option<Vec<_>>>()?;
    Some(trim_int(out))
}

/// Square-free part `p / gcd(p, p')`, primitive with positive lead.
fn squarefree_part(p: &[BigInt]) -> Vec<BigInt> {
    if deg_int(p) == 0 {
        return vec![BigInt::one()];
    }
    let g = gcd_int(p, &derivative_int(p));
    if deg_int(&g) == 0 {
        return primitive_int(p.to_vec());
    }
    primitive_int(div_exact_int(p, &g).expect("gcd divides"))
}

// ---------------------------------------------------------------------------
// Sturm sequences and root isolation
// ---------------------------------------------------------------------------

fn sturm_sequence(p: &[BigRational]) -> Vec<Vec<BigRational>> {
    let mut seq = vec![p.to_vec(), derivative_rat(p)];
    loop {
        let k = seq.len();
        if seq[k - 1].is_empty() {
            seq.pop();
            break;
        }
        if seq[k - 1].len() == 1 {
            break;
        }
        let r = rat_rem(&seq[k - 2], &seq[k - 1]);
        let neg: Vec<BigRational> = r.iter().map(|c| -c.clone()).collect();
        seq.push(neg);
    }
    seq
}

fn sign_variations(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None; // sign positive?
    for p in seq {
        let v = eval_rat(p, x);
        if v.is_zero() {
            continue;
        }
        let s = v.is_positive();
        if let Some(prev) = last {
            if prev != s {
                count += 1;
            }
        }
        last = Some(s);
    }
    count
}

/// Number of distinct real roots in the open interval `(a, b)`, assuming
/// neither endpoint is a root.
fn count_roots(seq: &[Vec<BigRational>], a: &BigRational, b: &BigRational) -> usize {
    sign_variations(seq, a) - sign_variations(seq, b)
}

/// An isolated real root of an irreducible integer polynomial: either an
/// exact rational or a strictly separating open interval with a sign change.
#[derive(Clone, Debug)]
pub(crate) struct XRoot {
    pub minpoly: Vec<BigInt>,
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: Option<BigRational>,
}

impl XRoot {
    fn refine(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from(BigInt::from(2));
        let vm = eval_int_at_rat(&self.minpoly, &mid);
        if vm.is_zero() {
            self.exact = Some(mid.clone());
            self.lo = mid.clone();
            self.hi = mid;
            return;
        }
        let vl = eval_int_at_rat(&self.minpoly, &self.lo);
        if vl.is_positive() == vm.is_positive() {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Shrinks the bracket until the non-root value `e` lies strictly
    /// outside it.  Plain bisection can leave a shared endpoint untouched
    /// forever, so endpoints equal to `e` are pushed off with probe points
    /// that approach the endpoint geometrically.
    fn push_off(&mut self, e: &BigRational) {
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        loop {
            if self.exact.is_some() {
                return;
            }
            if e < &self.lo || e > &self.hi {
                return;
            }
            if &self.lo < e && e < &self.hi {
                self.refine();
                continue;
            }
            if e == &self.lo {
                let t = &self.lo + (&self.hi - &self.lo) * &quarter;
                let v = eval_int_at_rat(&self.minpoly, &t);
                if v.is_zero() {
                    self.exact = Some(t.clone());
                    self.lo = t.clone();
                    self.hi = t;
                    return;
                }
                let vlo = eval_int_at_rat(&self.minpoly, &self.lo);
                if v.is_positive() == vlo.is_positive() {
                    self.lo = t; // root is in (t, hi); lo moved past e
                } else {
                    self.hi = t; // root is in (lo, t); probe closer to lo
                }
            } else {
                // e == self.hi, mirror image.
                let t = &self.hi - (&self.hi - &self.lo) * &quarter;
                let v = eval_int_at_rat(&self.minpoly, &t);
                if v.is_zero() {
                    self.exact = Some(t.clone());
                    self.lo = t.clone();
                    self.hi = t;
                    return;
                }
                let vhi = eval_int_at_rat(&self.minpoly, &self.hi);
                if v.is_positive() == vhi.is_positive() {
                    self.hi = t;
                } else {
                    self.lo = t;
                }
            }
        }
    }
}

/// Brackets separated by a nonempty open gap (exact roots have `lo == hi`).
fn strictly_separated(a: &XRoot, b: &XRoot) -> bool {
    a.hi < b.lo || b.hi < a.lo
}

fn separate_pair(a: &mut XRoot, b: &mut XRoot) {
    match (a.exact.clone(), b.exact.clone()) {
        (Some(_), Some(_)) => unreachable!("distinct exact roots are always separated"),
        (Some(e), None) => b.push_off(&e),
        (None, Some(e)) => a.push_off(&e),
        (None, None) => {
            // Shared endpoints deadlock plain bisection; push off instead.
            if a.hi == b.lo {
                let m = a.hi.clone();
                a.push_off(&m);
            } else if b.hi == a.lo {
                let m = b.hi.clone();
                b.push_off(&m);
            } else {
                a.refine();
                b.refine();
            }
        }
    }
}

/// Isolates the real roots of a square-free integer polynomial inside the
/// open interval `(lo, hi)` (endpoints must not be roots).
fn isolate_roots(
    f: &[BigInt],
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<(BigRational, BigRational)> {
    let fr = int_to_rat(f);
    debug_assert!(!eval_rat(&fr, lo).is_zero() && !eval_rat(&fr, hi).is_zero());
    let seq = sturm_sequence(&fr);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let k = count_roots(&seq, &a, &b);
        if k == 0 {
            continue;
        }
        if k == 1 {
            out.push((a, b));
            continue;
        }
        let mut mid = (&a + &b) / BigRational::from(BigInt::from(2));
        // Nudge until the midpoint is not a root.
        while eval_rat(&fr, &mid).is_zero() {
            mid = (&a + &mid) / BigRational::from(BigInt::from(2));
        }
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    out.sort_by(|p, q| p.0.cmp(&q.0));
    out
}

// ---------------------------------------------------------------------------
// Desk-scale irreducible factorization (rational roots + Kronecker)
// ---------------------------------------------------------------------------

fn divisors_of(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    debug_assert!(!n.is_zero());
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All rational roots of a primitive integer polynomial, as factors
/// `den·x − num` (with `gcd(num, den) = 1`, `den > 0`).
fn rational_root_factor(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let constant = &p[0];
    let lead = p.last().unwrap();
    if constant.is_zero() {
        return Some(vec![BigInt::zero(), BigInt::one()]); // x itself
    }
    for den in divisors_of(lead) {
        for num in divisors_of(constant) {
            for sign in [1i64, -1] {
                let num = &num * BigInt::from(sign);
                if num.gcd(&den) != BigInt::one() {
                    continue;
                }
                let x = BigRational::new(num.clone(), den.clone());
                if eval_int_at_rat(p, &x).is_zero() {
                    return Some(vec![-num, den.clone()]);
                }
            }
        }
    }
    None
}

/// Kronecker's method: search for a nontrivial integer divisor of minimal
/// degree `2..=deg/2`.  Assumes `p` is primitive, square-free, and has no
/// rational roots, so any divisor found this way is irreducible.  Bounded:
/// returns `None` (leaving the factor unsplit) when sample values get too
/// large to factor by trial division or the candidate budget runs out.
fn kronecker_split(p: &[BigInt]) -> Option<Vec<BigInt>> {
    let deg = deg_int(p);
    let mut budget: u64 = 200_000;
    let value_cap = BigInt::from(1_000_000_000_000u64);
    for d in 2..=deg / 2 {
        // Sample points 0, 1, −1, 2, −2, …
        let xs: Vec<BigInt> = (0..=d as i64)
            .map(|i| {
                let k = (i + 1) / 2;
                BigInt::from(if i % 2 == 1 { k } else { -k })
            })
            .collect();
        let vals: Vec<BigInt> = xs.iter().map(|x| {
            let r = eval_int_at_rat(p, &BigRational::from(x.clone()));
            debug_assert!(r.is_integer());
            r.to_integer()
        }).collect();
        debug_assert!(vals.iter().all(|v| !v.is_zero()));
        if vals.iter().any(|v| v.abs() > value_cap) {
            return None;
        }
        let div_lists: Vec<Vec<BigInt>> = vals
            .iter()
            .map(|v| {
                let mut ds: Vec<BigInt> = Vec::new();
                for q in divisors_of(v) {
                    ds.push(q.clone());
                    ds.push(-q);
                }
                ds
            })
            .collect();
        // Cartesian product with a visit cap.
        let mut idx = vec![0usize; d + 1];
        'outer: loop {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let ys: Vec<BigInt> = idx
                .iter()
                .enumerate()
                .map(|(i, &k)| div_lists[i][k].clone())
                .collect();
            if let Some(g) = interpolate_candidate(&xs, &ys, d) {
                if let Some(_q) = div_exact_int(p, &g) {
                    return Some(g);
                }
            }
            // increment multi-index
            for i in 0..=d {
                idx[i] += 1;
                if idx[i] < div_lists[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    None
}

/// Integer polynomial of exact degree `d` through the given points, if any.
fn interpolate_candidate(xs: &[BigInt], ys: &[BigInt], d: usize) -> Option<Vec<BigInt>> {
    let n = xs.len();
    let xr: Vec<BigRational> = xs.iter().map(|x| BigRational::from(x.clone())).collect();
    let mut table: Vec<BigRational> = ys.iter().map(|y| BigRational::from(y.clone())).collect();
    let mut newton = vec![table[0].clone()];
    for level in 1..n {
        for i in 0..n - level {
            let num = &table[i + 1] - &table[i];
            let den = &xr[i + level] - &xr[i];
            table[i] = num / den;
        }
        newton.push(table[0].clone());
    }
    let mut acc: Vec<BigRational> = vec![BigRational::zero(); n];
    let mut basis: Vec<BigRational> = vec![BigRational::one()];
    for (k, c) in newton.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            acc[i] += c * b;
        }
        if k + 1 < n {
            let root = &xr[k];
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                next[i + 1] += b;
                next[i] -= b * root;
            }
            basis = next;
        }
    }
    let ints: Vec<BigInt> = acc
        .iter()
        .map(|c| if c.is_integer() { Some(c.to_integer()) } else { None })
        .collect::<Option<Vec<_>>>()?;
    let t = trim_int(ints);
    if t.len() == d + 1 {
        Some(t)
    } else {
        None
    }
}

/// Factors a primitive square-free integer polynomial into irreducible
/// primitive factors with positive leading coefficients.  Desk scale; if the
/// bounded Kronecker search gives out, the remaining factor is returned
/// unsplit (still a correct vanishing polynomial for its roots).
fn factor_squarefree(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let mut rem = primitive_int(p);
    let mut out = Vec::new();
    loop {
        if deg_int(&rem) == 0 {
            break;
        }
        if deg_int(&rem) == 1 {
            out.push(rem);
            break;
        }
        if let Some(lin) = rational_root_factor(&rem) {
            rem = primitive_int(div_exact_int(&rem, &lin).expect("root factor divides"));
            out.push(primitive_int(lin));
            continue;
        }
        if let Some(g) = kronecker_split(&rem) {
            rem = primitive_int(div_exact_int(&rem, &g).expect("kronecker factor divides"));
            out.push(primitive_int(g));
            continue;
        }
        out.push(rem);
        break;
    }
    out
}

// ---------------------------------------------------------------------------
// Circle jump locus
// ---------------------------------------------------------------------------

/// Extracts the unit-circle roots of a `(t−1)`-free integer polynomial
/// (dense, lowest degree 0): conjugate pairs are encoded by real roots of
/// the folded polynomial `Q(x)`, `x = t + 1/t`, in the open interval
/// `(−2, 2)`; a root at `t = −1` is reported separately.
///
/// Returns the sorted interior roots (ascending in `x`) and whether `−1` is
/// a root.
pub(crate) fn circle_jumps(core: &LaurentPoly) -> (Vec<XRoot>, bool) {
    assert!(!core.is_zero());
    let p = trim_int(core.shifted_coeff_vec());
    let minus_one = {
        let mut acc = BigInt::zero();
        for (i, c) in p.iter().enumerate() {
            if i % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc.is_zero()
    };
    if deg_int(&p) == 0 {
        return (Vec::new(), false);
    }
    // Reciprocal part: roots t with 1/t also a root; contains all circle
    // roots since conjugation inverts them.
    let rev: Vec<BigInt> = p.iter().rev().cloned().collect();
    let mut r = gcd_int(&p, &rev);
    if deg_int(&r) == 0 {
        return (Vec::new(), minus_one);
    }
    // Strip t = −1 factors so the fold has even degree and Q(−2) ≠ 0.
    let t_plus_one = vec![BigInt::one(), BigInt::one()];
    while let Some(q) = div_exact_int(&r, &t_plus_one) {
        r = if q.is_empty() { vec![BigInt::one()] } else { q };
        if deg_int(&r) == 0 {
            break;
        }
    }
    if deg_int(&r) == 0 {
        return (Vec::new(), minus_one);
    }
    // The reciprocal part of a (t−1)-free polynomial is +palindromic after
    // removing (t+1) factors.
    let dr = deg_int(&r);
    debug_assert_eq!(dr % 2, 0, "reciprocal part must have even degree");
    let m = dr / 2;
    debug_assert!((0..=dr).all(|j| r[j] == r[dr - j]), "fold needs a palindrome");
    // Fold: r(t)/t^m = r_m + Σ_{j≥1} r_{m+j} (t^j + t^{−j}), and
    // t^j + t^{−j} = p_j(x) with p_0 = 2, p_1 = x, p_j = x·p_{j−1} − p_{j−2}.
    let mut q = vec![BigInt::zero(); m + 1];
    q[0] = r[m].clone();
    // Invariant: at the top of iteration j, p_cur = p_j and p_prev = p_{j−1}.
    let mut p_prev: Vec<BigInt> = vec![BigInt::from(2)]; // p_0
    let mut p_cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()]; // p_1
    for j in 1..=m {
        for (i, c) in p_cur.iter().enumerate() {
            q[i] += &r[m + j] * c;
        }
        if j < m {
            // p_{j+1} = x·p_j − p_{j−1}
            let mut next = vec![BigInt::zero(); p_cur.len() + 1];
            for (i, c) in p_cur.iter().enumerate() {
                next[i + 1] += c;
            }
            for (i, c) in p_prev.iter().enumerate() {
                next[i] -= c;
            }
            p_prev = std::mem::replace(&mut p_cur, next);
        }
    }
    let q = primitive_int(trim_int(q));
    // Isolate the roots of each irreducible factor in (−2, 2).
    let two = BigRational::from(BigInt::from(2));
    let minus_two = -two.clone();
    debug_assert!(!eval_int_at_rat(&q, &two).is_zero());
    debug_assert!(!eval_int_at_rat(&q, &minus_two).is_zero());
    let mut roots: Vec<XRoot> = Vec::new();
    for f in factor_squarefree(squarefree_part(&q)) {
        if deg_int(&f) == 1 {
            // den·x + c : exact rational root.
            let x = BigRational::new(-f[0].clone(), f[1].clone());
            if minus_two < x && x < two {
                roots.push(XRoot {
                    minpoly: f,
                    lo: x.clone(),
                    hi: x.clone(),
                    exact: Some(x),
                });
            }
            continue;
        }
        for (lo, hi) in isolate_roots(&f, &minus_two, &two) {
            roots.push(XRoot {
                minpoly: f.clone(),
                lo,
                hi,
                exact: None,
            });
        }
    }
    // Refine until brackets are pairwise separated by nonempty open gaps,
    // then sort ascending.
    loop {
        let mut done = true;
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if !strictly_separated(&roots[i], &roots[j]) {
                    done = false;
                    let (left, right) = roots.split_at_mut(j);
                    separate_pair(&mut left[i], &mut right[0]);
                }
            }
        }
        if done {
            break;
        }
    }
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    (roots, minus_one)
}

// ---------------------------------------------------------------------------
// The signature function
// ---------------------------------------------------------------------------

/// Which half of the circle a jump point lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    Upper,
    MinusOne,
    Lower,
}

/// An exact jump point of the signature function: an algebraic point on the
/// unit circle, encoded by the minimal integer polynomial of
/// `x = ω + ω̄ = 2·Re ω` together with the half-plane tag.
#[derive(Clone, Debug)]
pub struct JumpPoint {
    /// Integer coefficients (low → high) of a square-free polynomial
    /// vanishing at `x` — the minimal polynomial whenever the bounded
    /// factorization succeeds, which covers all desk-scale inputs.
    pub minpoly_x: Vec<BigInt>,
    /// Rational bracket `lo ≤ x ≤ hi` (degenerate when `x` is rational).
    pub x_lo: BigRational,
    pub x_hi: BigRational,
    /// Exact value when the minimal polynomial is linear.
    pub x_exact: Option<BigRational>,
    pub half_plane: HalfPlane,
}

/// One open arc of the circle, between consecutive jump points (or the
/// excluded point `1`), with the exact sample witnessing its value.
#[derive(Clone, Debug)]
pub struct SignatureArc {
    pub sample: CirclePoint,
    /// `sig(H_ω)` on the arc (without Euler correction).
    pub sig_part: i64,
}

/// The complete signature function of a matrix: jump points in circle order
/// and the constant signature value on each complementary arc.
///
/// Arcs are listed from the excluded point `1` counterclockwise back to `1`;
/// there is always exactly one more arc than jump points.  Values stored are
/// the bare `sig(H_ω)`; the Euler correction `e(F)/2`, when present, is the
/// same for every arc.
#[derive(Clone, Debug)]
pub struct SignatureFunction {
    pub jump_points: Vec<JumpPoint>,
    pub arcs: Vec<SignatureArc>,
    pub euler_correction: Option<BigRational>,
}

impl SignatureFunction {
    pub fn arc_sig_parts(&self) -> Vec<i64> {
        self.arcs.iter().map(|a| a.sig_part).collect()
    }

    pub fn all_arcs_zero(&self) -> bool {
        self.arcs.iter().all(|a| a.sig_part == 0)
    }

    pub fn max_abs_sig_part(&self) -> i64 {
        self.arcs.iter().map(|a| a.sig_part.abs()).max().unwrap_or(0)
    }

    /// The bare signature value on the arc containing `−1`, or `None` when
    /// `−1` is itself a jump point.
    pub fn sig_part_at_minus_one(&self) -> Option<i64> {
        let mut arc = 0usize;
        for (i, j) in self.jump_points.iter().enumerate() {
            match j.half_plane {
                HalfPlane::Upper => arc = i + 1,
                HalfPlane::MinusOne => return None,
                HalfPlane::Lower => break,
            }
        }
        Some(self.arcs[arc].sig_part)
    }

    /// Corrected value (`sig + e/2`) per arc, when Euler data is present.
    pub fn corrected_values(&self) -> Option<Vec<BigRational>> {
        let c = self.euler_correction.as_ref()?;
        Some(
            self.arcs
                .iter()
                .map(|a| BigRational::from(BigInt::from(a.sig_part)) + c)
                .collect(),
        )
    }
}

/// `x(T) = 2(1 − T²)/(1 + T²)`, the fold coordinate of the upper-half point
/// with tangent parameter `T`.
fn x_of_tangent(t: &BigRational) -> BigRational {
    let t2 = t * t;
    let one = BigRational::one();
    BigRational::from(BigInt::from(2)) * (&one - &t2) / (&one + &t2)
}

/// A rational upper-half-circle point whose fold coordinate lies strictly
/// inside `(xlo, xhi)` (requires `−2 ≤ xlo < xhi ≤ 2`).
fn upper_point_with_x_between(xlo: &BigRational, xhi: &BigRational) -> CirclePoint {
    debug_assert!(xlo < xhi);
    // x(T) is strictly decreasing in T on (0, ∞); bisect in T.
    let mut t_lo = BigRational::zero(); // x → 2
    let mut t_hi: Option<BigRational> = None; // unbounded: x → −2
    let mut t = BigRational::one();
    loop {
        let x = x_of_tangent(&t);
        if &x >= xhi {
            // too close to 1, increase T
            t_lo = t.clone();
            t = match &t_hi {
                Some(h) => (&t + h) / BigRational::from(BigInt::from(2)),
                None => &t * BigRational::from(BigInt::from(2)),
            };
        } else if &x <= xlo {
            t_hi = Some(t.clone());
            t = (&t_lo + &t) / BigRational::from(BigInt::from(2));
        } else {
            return CirclePoint::from_tangent(&t);
        }
    }
}

/// Computes the full signature function: exact jump locus from the
/// normalized polynomial invariant, plus one exact sample per arc.
pub fn signature_function(a: &MockSeifertMatrix) -> SignatureFunction {
    let euler_correction = a
        .euler()
        .map(|e| BigRational::new(BigInt::from(e), BigInt::from(2)));
    let delta = alexander(a);
    if delta.is_zero() {
        // Degenerate pairing: H_ω is singular everywhere; report a single
        // arc with its (constant) signature and no isolated jumps.
        let sample = CirclePoint::minus_one();
        let sig_part = lt_signature(a, &sample).expect("-1 is a valid point").sig_part;
        return SignatureFunction {
            jump_points: Vec::new(),
            arcs: vec![SignatureArc { sample, sig_part }],
            euler_correction,
        };
    }
    let core = poly::normalize(&delta).expect("nonzero").core;
    let (mut roots, minus_one) = circle_jumps(&core);

    // Refine all isolating intervals into (−2, 2) strictly, so arc sampling
    // near the endpoints stays inside the circle coordinates.
    let two = BigRational::from(BigInt::from(2));
    for r in &mut roots {
        while r.hi >= two || r.lo <= -&two {
            r.refine();
        }
    }

    // Jump points in circle order: upper half (x descending), −1, lower
    // half (x ascending).
    let mut jump_points: Vec<JumpPoint> = Vec::new();
    for r in roots.iter().rev() {
        jump_points.push(JumpPoint {
            minpoly_x: r.minpoly.clone(),
            x_lo: r.lo.clone(),
            x_hi: r.hi.clone(),
            x_exact: r.exact.clone(),
            half_plane: HalfPlane::Upper,
        });
    }
    if minus_one {
        jump_points.push(JumpPoint {
            minpoly_x: vec![BigInt::from(2), BigInt::one()], // x + 2
            x_lo: -two.clone(),
            x_hi: -two.clone(),
            x_exact: Some(-two.clone()),
            half_plane: HalfPlane::MinusOne,
        });
    }
    for r in roots.iter() {
        jump_points.push(JumpPoint {
            minpoly_x: r.minpoly.clone(),
            x_lo: r.lo.clone(),
            x_hi: r.hi.clone(),
            x_exact: r.exact.clone(),
            half_plane: HalfPlane::Lower,
        });
    }

    // Sample one point per arc.  Work in x-brackets: the k-th upper root
    // (descending) occupies [lo, hi]; gaps between consecutive brackets are
    // root-free.
    let mut samples: Vec<CirclePoint> = Vec::new();
    let u = roots.len();
    let desc: Vec<&XRoot> = roots.iter().rev().collect();
    // Upper-half arcs: before each upper jump.
    for k in 0..=u {
        let hi_bound = if k == 0 { two.clone() } else { desc[k - 1].lo.clone() };
        let lo_bound = if k == u { -two.clone() } else { desc[k].hi.clone() };
        if k == u && !minus_one {
            // The arc after the last upper jump continues through −1 into
            // the lower half; sample exactly at −1.
            samples.push(CirclePoint::minus_one());
        } else {
            samples.push(upper_point_with_x_between(&lo_bound, &hi_bound));
        }
    }
    // Lower-half arcs: after each lower jump (mirror images).
    for k in 0..u {
        let lo_bound = if k + 1 < u { roots[k + 1].lo.clone() } else { two.clone() };
        // arc between lower jump k and lower jump k+1 (or the point 1)
        let hi_bound = lo_bound;
        let lo_bound = roots[k].hi.clone();
        samples.push(upper_point_with_x_between(&lo_bound, &hi_bound).conj());
    }
    // When −1 is a jump, the arc from −1 to the first lower jump (or to 1)
    // needs its own sample; insert it right after the upper-half block.
    if minus_one {
        let hi_bound = if u > 0 { roots[0].lo.clone() } else { two.clone() };
        let sample = upper_point_with_x_between(&(-two.clone()), &hi_bound).conj();
        samples.insert(u + 1, sample);
    }
    debug_assert_eq!(samples.len(), jump_points.len() + 1);

    let arcs: Vec<SignatureArc> = samples
        .into_iter()
        .map(|sample| {
            let lt = lt_signature(a, &sample).expect("samples avoid t = 1");
            debug_assert_eq!(lt.nullity, 0, "arc sample landed on a jump");
            SignatureArc {
                sample,
                sig_part: lt.sig_part,
            }
        })
        .collect();

    SignatureFunction {
        jump_points,
        arcs,
        euler_correction,
    }
}

// ---------------------------------------------------------------------------
// Average signature
// ---------------------------------------------------------------------------

/// The two-sided average of the signature function at a point, per the
/// defining formula `½(lim⁻ + lim⁺ + e(F))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageSignature {
    /// Mean of the adjacent arc values (bare, no Euler term).
    pub sig_part: BigRational,
    pub euler_correction: Option<BigRational>,
    /// `sig_part + e/2` when Euler metadata is present.
    pub total: Option<BigRational>,
}

/// Average signature at `ω ≠ 1`; equals the plain signature off the jump
/// locus and the mean of the two adjacent arc values at a jump.
pub fn average_signature(
    a: &MockSeifertMatrix,
    omega: &CirclePoint,
) -> Result<AverageSignature, InvariantError> {
    if omega.is_one() {
        return Err(InvariantError::OmegaOne);
    }
    let delta = alexander(a);
    if delta.is_zero() {
        return Err(InvariantError::DegenerateForm);
    }
    let core = poly::normalize(&delta).expect("nonzero").core;
    let dense = trim_int(core.shifted_coeff_vec());
    let (vr, vi) = eval_int_at_gaussian(&dense, omega.re(), omega.im());
    let at_jump = vr.is_zero() && vi.is_zero();
    let bare: BigRational;
    if !at_jump {
        let lt = lt_signature(a, omega)?;
        debug_assert_eq!(lt.nullity, 0);
        bare = BigRational::from(BigInt::from(lt.sig_part));
    } else {
        let sf = signature_function(a);
        // A rational circle point can only be a jump with rational fold
        // coordinate, so matching on the exact value is complete.
        let x = omega.x();
        let hp = if omega.is_minus_one() {
            HalfPlane::MinusOne
        } else if omega.im().is_positive() {
            HalfPlane::Upper
        } else {
            HalfPlane::Lower
        };
        let idx = sf
            .jump_points
            .iter()
            .position(|j| j.half_plane == hp && j.x_exact.as_ref() == Some(&x))
            .or_else(|| {
                // Fallback: brackets cover every jump even when the bounded
                // factorization left the exact rational value unrecognized.
                sf.jump_points
                    .iter()
                    .position(|j| j.half_plane == hp && j.x_lo <= x && x <= j.x_hi)
            })
            .expect("vanishing polynomial value must match a listed jump");
        let sum = sf.arcs[idx].sig_part + sf.arcs[idx + 1].sig_part;
        bare = BigRational::new(BigInt::from(sum), BigInt::from(2));
    }
    let euler_correction = a
        .euler()
        .map(|e| BigRational::new(BigInt::from(e), BigInt::from(2)));
    let total = euler_correction.as_ref().map(|c| &bare + c);
    Ok(AverageSignature {
        sig_part: bare,
        euler_correction,
        total,
    })
}

// ---------------------------------------------------------------------------
// Δ(1) condition and span bounds
// ---------------------------------------------------------------------------

/// Outcome of the `Δ(1)` sanity check: `det(A − Aᵀ)` must vanish for odd
/// size and be a perfect square divisible by `2ⁿ` for even size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaOneCheck {
    OkOdd,
    OkEvenSquare {
        #[serde(serialize_with = "ser_bigint")]
        value: BigInt,
    },
    Violation,
}

pub fn delta_one_check(a: &MockSeifertMatrix) -> DeltaOneCheck {
    let n = a.size();
    let skew: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigInt::from(a.entry(i, j)) - BigInt::from(a.entry(j, i)))
                .collect()
        })
        .collect();
    let v = matalg::det_bigint(skew);
    if n % 2 == 1 {
        if v.is_zero() {
            DeltaOneCheck::OkOdd
        } else {
            DeltaOneCheck::Violation
        }
    } else {
        let divisible = (&v % (BigInt::one() << n)).is_zero();
        if divisible && poly::is_perfect_square(&v) {
            DeltaOneCheck::OkEvenSquare { value: v }
        } else {
            DeltaOneCheck::Violation
        }
    }
}

/// Span-derived lower bounds: `span Δ ≤ crosscap number` always, and
/// `span Δ ≤ 2·genus` when the matrix is even type (orientable surface).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanBounds {
    pub crosscap_lower: i64,
    pub genus_lower: Option<BigRational>,
}

pub fn bounds(a: &MockSeifertMatrix) -> SpanBounds {
    let delta = alexander(a);
    let span = if delta.is_zero() {
        0
    } else {
        poly::span(&delta).expect("nonzero")
    };
    let genus_lower = match a.matrix_type() {
        MatrixType::Even => Some(BigRational::new(BigInt::from(span), BigInt::from(2))),
        MatrixType::Odd => None,
    };
    SpanBounds {
        crosscap_lower: span,
        genus_lower,
    }
}

// ---------------------------------------------------------------------------
// Serialization (decimal strings for exact values)
// ---------------------------------------------------------------------------

pub(crate) fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl Serialize for CirclePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CirclePoint", 2)?;
        st.serialize_field("re", &ratio_string(&self.re))?;
        st.serialize_field("im", &ratio_string(&self.im))?;
        st.end()
    }
}

impl Serialize for GlInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GlInvariants", 5)?;
        st.serialize_field("sig_part", &self.sig_part)?;
        st.serialize_field("determinant", &ratio_string(&self.determinant))?;
        st.serialize_field("nullity", &self.nullity)?;
        st.serialize_field("euler_correction", &self.euler_correction.as_ref().map(ratio_string))?;
        st.serialize_field("sigma", &self.sigma.as_ref().map(ratio_string))?;
        st.end()
    }
}

impl Serialize for LtSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LtSignature", 4)?;
        st.serialize_field("sig_part", &self.sig_part)?;
        st.serialize_field("nullity", &self.nullity)?;
        st.serialize_field("euler_correction", &self.euler_correction.as_ref().map(ratio_string))?;
        st.serialize_field("total", &self.total.as_ref().map(ratio_string))?;
        st.end()
    }
}

impl Serialize for JumpPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("JumpPoint", 5)?;
        let mp: Vec<String> = self.minpoly_x.iter().map(|c| c.to_string()).collect();
        st.serialize_field("minpoly_x", &mp)?;
        st.serialize_field("x_lo", &ratio_string(&self.x_lo))?;
        st.serialize_field("x_hi", &ratio_string(&self.x_hi))?;
        st.serialize_field("x_exact", &self.x_exact.as_ref().map(ratio_string))?;
        st.serialize_field("half_plane", &self.half_plane)?;
        st.end()
    }
}

impl Serialize for SignatureArc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SignatureArc", 2)?;
        st.serialize_field("sample", &self.sample)?;
        st.serialize_field("sig_part", &self.sig_part)?;
        st.end()
    }
}

impl Serialize for SignatureFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SignatureFunction", 3)?;
        st.serialize_field("jump_points", &self.jump_points)?;
        st.serialize_field("arcs", &self.arcs)?;
        st.serialize_field("euler_correction", &self.euler_correction.as_ref().map(ratio_string))?;
        st.end()
    }
}

impl Serialize for AverageSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AverageSignature", 3)?;
        st.serialize_field("sig_part", &ratio_string(&self.sig_part))?;
        st.serialize_field("euler_correction", &self.euler_correction.as_ref().map(ratio_string))?;
        st.serialize_field("total", &self.total.as_ref().map(ratio_string))?;
        st.end()
    }
}

impl Serialize for SpanBounds {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpanBounds", 2)?;
        st.serialize_field("crosscap_lower", &self.crosscap_lower)?;
        st.serialize_field("genus_lower", &self.genus_lower.as_ref().map(ratio_string))?;
        st.end()
    }
}
