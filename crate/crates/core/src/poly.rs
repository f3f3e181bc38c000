//! Integer Laurent polynomials and the unit normal form.
//!
//! Two nonzero Laurent polynomials are associate, written `p ≐ q`, when they
//! differ by a unit `±t^k (1-t)^l` of the ring `Z[t, t^-1, (1-t)^-1]`. The
//! normal form picks the unique associate with lowest degree 0, positive
//! leading coefficient, and no root at t = 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    Zero,
}

/// Laurent polynomial with integer coefficients in the variable t.
/// Zero coefficients are never stored; zero is the empty map.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(1, 0)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, 0)
    }

    /// The monomial `c * t^deg`.
    pub fn term(c: impl Into<BigInt>, deg: i64) -> Self {
        let mut m = BTreeMap::new();
        let c = c.into();
        if !c.is_zero() {
            m.insert(deg, c);
        }
        Self { coeffs: m }
    }

    /// Build from (degree, coefficient) pairs; repeated degrees accumulate.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (d, c) in terms {
            p.add_term(d, &c.into());
        }
        p
    }

    /// Ordinary polynomial from coefficients `[c0, c1, ...]` (degree ascending).
    pub fn from_coeffs<C: Into<BigInt> + Clone>(cs: &[C]) -> Self {
        Self::from_terms(cs.iter().enumerate().map(|(i, c)| (i as i64, c.clone())))
    }

    fn add_term(&mut self, deg: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(deg).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: i64) -> BigInt {
        self.coeffs.get(&deg).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Highest-degree coefficient (None for zero).
    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    /// Degree width: max_deg - min_deg.
    pub fn width(&self) -> Option<i64> {
        Some(self.max_deg()? - self.min_deg()?)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (d, c) in other.coeffs.iter() {
            r.add_term(*d, c);
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for (d1, c1) in self.coeffs.iter() {
            for (d2, c2) in other.coeffs.iter() {
                r.add_term(d1 + d2, &(c1 * c2));
            }
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(d, k)| (*d, k * c)).collect(),
        }
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// The reciprocal p*(t) = t^(min+max) * p(1/t): coefficients reversed in place.
    pub fn reciprocal(&self) -> Self {
        match (self.min_deg(), self.max_deg()) {
            (Some(lo), Some(hi)) => Self {
                coeffs: self
                    .coeffs
                    .iter()
                    .map(|(d, c)| (lo + hi - *d, c.clone()))
                    .collect(),
            },
            _ => Self::zero(),
        }
    }

    /// p(1/t) as a Laurent polynomial.
    pub fn invert_variable(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(d, c)| (-*d, c.clone())).collect(),
        }
    }

    /// True when p(t) = ± t^k p(1/t) for some k; returns the sign if so.
    pub fn self_reciprocal_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return None;
        }
        let r = self.reciprocal();
        if r == *self {
            Some(1)
        } else if r == self.neg() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        // Split into nonnegative and negative degrees; negative part needs x = ±1.
        let mut acc = BigInt::zero();
        for (d, c) in self.coeffs.iter() {
            acc += c * pow_int(x, *d);
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (d, c) in self.coeffs.iter() {
            acc += BigRational::from(c.clone()) * pow_rational(x, *d);
        }
        acc
    }

    /// Exact division; None when the division does not come out exact.
    /// Both operands may be Laurent; the quotient is Laurent.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        // Reduce to ordinary polynomials with nonzero constant term.
        let a = self.shift(-self.min_deg().unwrap());
        let b = divisor.shift(-divisor.min_deg().unwrap());
        let shift = self.min_deg().unwrap() - divisor.min_deg().unwrap();
        let bd = b.max_deg().unwrap();
        let blead = b.leading().unwrap().clone();
        let mut rem = a;
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let rd = rem.max_deg().unwrap();
            if rd < bd {
                return None;
            }
            let rlead = rem.leading().unwrap();
            if (rlead % &blead) != BigInt::zero() {
                return None;
            }
            let q = Self::term(rlead / &blead, rd - bd);
            rem = rem.sub(&q.mul(&b));
            quot = quot.add(&q);
        }
        Some(quot.shift(shift))
    }

    /// Content: gcd of coefficients (positive; 0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = num_integer::gcd(g, c.abs());
        }
        g
    }

    /// Sum of absolute values of the coefficients.
    pub fn one_norm(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    /// Coefficients of the ordinary-polynomial part after shifting min degree
    /// to zero, ascending. Empty for the zero polynomial.
    pub fn shifted_coeff_vec(&self) -> Vec<BigInt> {
        match (self.min_deg(), self.max_deg()) {
            (Some(lo), Some(hi)) => (lo..=hi).map(|d| self.coeff(d)).collect(),
            _ => vec![],
        }
    }
}

fn pow_int(x: &BigInt, d: i64) -> BigInt {
    if d >= 0 {
        x.pow(d as u32)
    } else {
        // Only ±1 have integer inverses.
        assert!(
            x.abs().is_one(),
            "negative powers of a non-unit integer requested"
        );
        x.pow((-d) as u32)
    }
}

fn pow_rational(x: &BigRational, d: i64) -> BigRational {
    Pow::pow(x, d as i32)
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !mag.is_one() || *d == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match *d {
                0 => {}
                1 => write!(f, "t")?,
                d => write!(f, "t^{d}")?,
            }
        }
        Ok(())
    }
}

/// Serialized as a degree -> coefficient string map.
impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let m: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(d, c)| (d.to_string(), c.to_string()))
            .collect();
        m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = BTreeMap::<String, String>::deserialize(d)?;
        let mut p = LaurentPoly::zero();
        for (deg, c) in m {
            let deg: i64 = deg.parse().map_err(serde::de::Error::custom)?;
            let c = BigInt::from_str(&c).map_err(serde::de::Error::custom)?;
            p.add_term(deg, &c);
        }
        Ok(p)
    }
}

/// Unit-normal form: `p = sign * t^t_power * (1-t)^one_minus_t_power * core`
/// with the core satisfying: lowest degree 0, positive leading coefficient,
/// core(1) != 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub core: LaurentPoly,
    /// k in the unit ±t^k(1-t)^l.
    pub t_power: i64,
    /// l in the unit ±t^k(1-t)^l.
    pub one_minus_t_power: u32,
    /// ±1.
    pub sign: i8,
}

impl NormalForm {
    /// Reassemble the original polynomial (round-trip check).
    pub fn reassemble(&self) -> LaurentPoly {
        let unit = LaurentPoly::from_terms([(0i64, 1i64), (1, -1)]); // 1 - t
        let mut p = self.core.clone();
        p = p.mul(&unit.pow(self.one_minus_t_power));
        p = p.shift(self.t_power);
        if self.sign < 0 {
            p = p.neg();
        }
        p
    }

    /// Further reduction: additionally strips square factors g(t)^2 with g
    /// self-reciprocal. Returns the reduced polynomial and whether it
    /// differs from the strict core (the discrepancy flag).
    pub fn square_reduced(&self) -> (LaurentPoly, bool) {
        let mut cur = self.core.clone();
        let mut changed = false;
        // Only (t±1)-type symmetric squares appear at desk scale; strip (t+1)^2
        // blocks. (t-1) factors are already gone from the core.
        let tp1 = LaurentPoly::from_coeffs(&[1i64, 1]);
        let sq = tp1.mul(&tp1);
        while let Some(q) = cur.div_exact(&sq) {
            if q.is_zero() {
                break;
            }
            cur = q;
            changed = true;
        }
        (normalize(&cur).map(|n| n.core).unwrap_or(cur), changed)
    }
}

/// Divide out all (t-1) factors and the t-power shift; fix the sign so the
/// leading coefficient is positive.
pub fn normalize(p: &LaurentPoly) -> Result<NormalForm, PolyError> {
    if p.is_zero() {
        return Err(PolyError::Zero);
    }
    let t_minus_1 = LaurentPoly::from_terms([(0i64, -1i64), (1, 1)]);
    let mut core = p.clone();
    let mut l = 0u32;
    while core.eval_int(&BigInt::one()).is_zero() {
        core = core
            .div_exact(&t_minus_1)
            .expect("(t-1) divides p when p(1) = 0");
        l += 1;
    }
    // p = (t-1)^l * core_raw = (-1)^l (1-t)^l core_raw.
    let mut sign: i8 = if l % 2 == 1 { -1 } else { 1 };
    let k = core.min_deg().unwrap();
    core = core.shift(-k);
    if core.leading().unwrap().is_negative() {
        core = core.neg();
        sign = -sign;
    }
    Ok(NormalForm {
        core,
        t_power: k,
        one_minus_t_power: l,
        sign,
    })
}

/// Degree width of the normal-form core.
pub fn span(p: &LaurentPoly) -> Result<i64, PolyError> {
    Ok(normalize(p)?.core.width().unwrap())
}

/// True when p ≐ q (associate up to ±t^k(1-t)^l).
pub fn assoc_eq(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    match (normalize(p), normalize(q)) {
        (Ok(a), Ok(b)) => a.core == b.core,
        (Err(_), Err(_)) => true,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FoxMilnor {
    /// Witness f with p ≐ f(t) · t^{deg f} · f(1/t).
    Passes { witness: LaurentPoly },
    Fails,
}

impl FoxMilnor {
    pub fn passes(&self) -> bool {
        matches!(self, FoxMilnor::Passes { .. })
    }
}

/// Decide whether p ≐ f(t)·f(1/t) for some integer polynomial f.
///
/// Works on the ≐-core c (palindromic up to sign when it comes from a mock
/// Alexander polynomial, but no symmetry is assumed here). The search is
/// exhaustive: writing g(t) = f(t)·t^e·f(1/t) with e = deg f, the identity
/// c = ±g forces Σ f_i² = (1/2π)∫|f(e^iθ)|² dθ = (1/2π)∫|c(e^iθ)| dθ ≤ ‖c‖₁,
/// so all candidate coefficient vectors lie in an explicit ball. Outer
/// coefficients come from divisor pairs of the leading/constant coefficient;
/// interior ones are solved coordinate-by-coordinate from the convolution
/// equations.
pub fn fox_milnor(p: &LaurentPoly) -> Result<FoxMilnor, PolyError> {
    let nf = normalize(p)?;
    let c = nf.core;
    let d = c.width().unwrap();
    if d % 2 != 0 {
        return Ok(FoxMilnor::Fails);
    }
    // Quick necessary conditions: |c(±1)| must be perfect squares, since
    // c(1) = ±f(1)² and c(-1) = ±f(-1)f(-1)·(±1).
    let c1 = c.eval_int(&BigInt::one()).abs();
    let cm1 = c.eval_int(&BigInt::from(-1)).abs();
    if !is_perfect_square(&c1) || !is_perfect_square(&cm1) {
        return Ok(FoxMilnor::Fails);
    }
    let e = (d / 2) as usize;
    let cs = c.shifted_coeff_vec(); // c_0 .. c_d, c_0 and c_d nonzero
    let ball = c.one_norm();

    // Enumerate (f_0, f_e) with f_0 * f_e = ±c_d, then fill f_1..f_{e-1}.
    let lead = cs[d as usize].clone();
    if e == 0 {
        // Constant core: need c_0 = ±f_0².
        if let Some(r) = exact_sqrt(&lead) {
            return Ok(FoxMilnor::Passes {
                witness: LaurentPoly::constant(r),
            });
        }
        return Ok(FoxMilnor::Fails);
    }
    for sign in [1i8, -1] {
        // g_k = Σ_i f_i f_{i+e-k}; match against ±c.
        let target: Vec<BigInt> = if sign > 0 {
            cs.clone()
        } else {
            cs.iter().map(|x| -x).collect()
        };
        for (f0, fe) in divisor_pairs(&target[d as usize]) {
            let mut f = vec![BigInt::zero(); e + 1];
            f[0] = f0.clone();
            f[e] = fe.clone();
            if solve_interior(&mut f, 1, &target, &ball) {
                let witness = LaurentPoly::from_coeffs(&f);
                debug_assert!(assoc_eq(p, &witness.mul(&witness.reciprocal())));
                return Ok(FoxMilnor::Passes { witness });
            }
        }
    }
    let _ = lead;
    Ok(FoxMilnor::Fails)
}

/// Recursively determine f_j and f_{e-j} from the convolution equation for
/// g_{2e-j}, then check all remaining equations at the base.
fn solve_interior(f: &mut [BigInt], j: usize, target: &[BigInt], ball: &BigInt) -> bool {
    let e = f.len() - 1;
    if 2 * j > e {
        return check_product(f, target);
    }
    // g_{2e-j} = Σ_i f_i f_{i-e+(2e-j)-e}.. expanded: Σ_m f_{m} f_{m+e-j} over valid m.
    // Unknowns: f_j (and f_{e-j} when distinct); all f_m with m < j or m > e-j known.
    let idx_hi = target.len() - 1 - j; // degree 2e - j
    let mut known = BigInt::zero();
    for m in 0..=j.saturating_sub(1) {
        let other = m + e - j;
        if other <= e && other > e - j {
            known += &f[m] * &f[other];
        }
    }
    if j == e - j {
        // Single unknown u = f_j appears as f_j * f_{j + e - j} = f_j f_e... m = j gives
        // f_j f_e; also m such that m + e - j = j => m = 2j - e = 0 gives f_0 f_j.
        // Equation: known + f_j (f_e + f_0)·… handle via the generic linear solve with u = v.
        let a = f[e].clone() + f[0].clone();
        let rhs = target[idx_hi].clone() - &known;
        if a.is_zero() {
            if !rhs.is_zero() {
                return false;
            }
            // f_j free within the ball; enumerate.
            let bound = isqrt(ball);
            let mut u = -bound.clone();
            while u <= bound {
                f[j] = u.clone();
                if check_product(f, target) {
                    return true;
                }
                u += 1;
            }
            f[j] = BigInt::zero();
            return false;
        }
        if (&rhs % &a).is_zero() {
            f[j] = rhs / a;
            if &f[j] * &f[j] <= *ball && check_product(f, target) {
                return true;
            }
            f[j] = BigInt::zero();
        }
        return false;
    }
    // Generic: g_{2e-j} = known + f_e f_j + f_{e-j} f_0 (terms with m = j, m = e-j··· wait
    // m + e - j = e gives m = j ⇒ f_j f_e; m = 0 gives f_0 f_{e-j}).
    let rhs_base = target[idx_hi].clone() - &known;
    let bound = isqrt(ball);
    let mut u = -bound.clone();
    while u <= bound {
        // f_j = u; solve f_{e-j} from f_e·u + f_0·f_{e-j} = rhs.
        let num = &rhs_base - &f[e] * &u;
        if (&num % &f[0]).is_zero() {
            let v = num / &f[0];
            if &v * &v <= *ball {
                f[j] = u.clone();
                f[e - j] = v;
                if solve_interior(f, j + 1, target, ball) {
                    return true;
                }
                f[j] = BigInt::zero();
                f[e - j] = BigInt::zero();
            }
        }
        u += 1;
    }
    false
}

fn check_product(f: &[BigInt], target: &[BigInt]) -> bool {
    let e = f.len() - 1;
    let d = target.len() - 1;
    if d != 2 * e {
        return false;
    }
    for k in 0..=d {
        let mut acc = BigInt::zero();
        // g_k = Σ_m f_m f_{m + e - k}
        for m in 0..=e {
            let other = m as i64 + e as i64 - k as i64;
            if (0..=e as i64).contains(&other) {
                acc += &f[m] * &f[other as usize];
            }
        }
        if acc != target[k] {
            return false;
        }
    }
    true
}

/// All ordered pairs (a, b) with a*b = n (n nonzero), |a| ≤ |b| not enforced.
fn divisor_pairs(n: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = vec![];
    let na = n.abs();
    let mut d = BigInt::one();
    while &d * &d <= na {
        if (&na % &d).is_zero() {
            let q = &na / &d;
            for (a, b) in [
                (d.clone(), q.clone()),
                (q.clone(), d.clone()),
                (-d.clone(), -q.clone()),
                (-q.clone(), -d.clone()),
                (d.clone(), -q.clone()),
                (-d.clone(), q.clone()),
                (q.clone(), -d.clone()),
                (-q.clone(), d.clone()),
            ] {
                if &a * &b == *n {
                    out.push((a, b));
                }
            }
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative());
    n.sqrt()
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}
