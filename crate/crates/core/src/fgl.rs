//! The height-`s` Honda formal group law at `p = 2` with `v_s = 1`.
//!
//! The law is computed exactly over the rationals as `exp(log(x) + log(y))`
//! from the 2-typical logarithm `log(x) = sum_i x^{2^{si}} / 2^i`, then
//! reduced mod 2 after checking that every coefficient is 2-integral.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::series::{BiSeries, RatSeries, UniPoly};

/// Largest per-variable bound accepted by the exact computation.
pub const MAX_FGL_BOUND: usize = 1 << 12;

fn check_height(s: u32) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!(
            "height s must be at least 2, got {s}"
        )));
    }
    if s > 16 {
        return Err(Error::DegreeOverflow(format!("height {s} is too large")));
    }
    Ok(())
}

/// Exponents `2^{si}` below `limit`, paired with `i`.
fn log_exponents(s: u32, limit: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let shift = s as u64 * i as u64;
        if shift >= 63 {
            break;
        }
        let e = 1usize << shift;
        if e >= limit {
            break;
        }
        out.push((i, e));
        i += 1;
    }
    out
}

fn two_pow(i: u32) -> BigInt {
    BigInt::one() << i as usize
}

/// The 2-typical Honda logarithm truncated after degree `degree`.
pub fn honda_log(s: u32, degree: usize) -> Result<RatSeries> {
    check_height(s)?;
    if degree < 1 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let mut log = RatSeries::zero(degree);
    for (i, e) in log_exponents(s, degree + 1) {
        log.set_coeff(e, BigRational::new(BigInt::one(), two_pow(i)));
    }
    Ok(log)
}

/// `f(g)` for a series `f` with few nonzero coefficients; `g` must have zero
/// constant term. Powers of `g` are built by square-and-multiply per exponent.
fn compose_sparse(f: &RatSeries, g: &RatSeries) -> RatSeries {
    let d = g.degree();
    let mut cache: HashMap<usize, RatSeries> = HashMap::new();
    let mut acc = RatSeries::zero(d);
    let one = {
        let mut o = RatSeries::zero(d);
        o.set_coeff(0, BigRational::one());
        o
    };
    for (k, c) in f.coeffs().iter().enumerate().take(d + 1) {
        if c.is_zero() {
            continue;
        }
        let pk = if k == 0 {
            one.clone()
        } else {
            power_cached(g, k, &mut cache)
        };
        let term = RatSeries::from_coeffs(pk.coeffs().iter().map(|x| x * c).collect());
        acc = acc.add(&term);
    }
    acc
}

fn power_cached(g: &RatSeries, k: usize, cache: &mut HashMap<usize, RatSeries>) -> RatSeries {
    if let Some(p) = cache.get(&k) {
        return p.clone();
    }
    let p = if k == 1 {
        g.clone()
    } else if k % 2 == 0 {
        let h = power_cached(g, k / 2, cache);
        h.mul(&h)
    } else {
        power_cached(g, k - 1, cache).mul(g)
    };
    cache.insert(k, p.clone());
    p
}

/// Compositional inverse of `f = x + ...` by Newton iteration:
/// `g <- g - (f(g) - x) / f'(g)`. Each step doubles the number of correct
/// coefficients, so at most `log2(D) + 2` steps are needed.
pub fn reversion_newton(f: &RatSeries) -> Result<RatSeries> {
    let d = f.degree();
    if d < 1 || !f.coeff(0).is_zero() || !f.coeff(1).is_one() {
        return Err(Error::InvalidParameter(
            "reversion needs a series of the form x + O(x^2)".into(),
        ));
    }
    let fprime = f.derivative();
    let x = RatSeries::x(d);
    let mut g = x.clone();
    let max_steps = usize::BITS - d.leading_zeros() + 2;
    for _ in 0..=max_steps {
        let residual = compose_sparse(f, &g).sub(&x);
        if residual.coeffs().iter().all(|c| c.is_zero()) {
            return Ok(g);
        }
        let deriv = compose_sparse(&fprime, &g.truncate(fprime.degree())).truncate(d);
        let deriv = if deriv.degree() < d {
            let mut c = deriv.coeffs().to_vec();
            c.resize(d + 1, BigRational::zero());
            RatSeries::from_coeffs(c)
        } else {
            deriv
        };
        let inv = deriv
            .inverse()
            .ok_or_else(|| Error::InvalidParameter("derivative is not invertible".into()))?;
        g = g.sub(&residual.mul(&inv));
    }
    Err(Error::RecursionFailure(d))
}

/// Cache of computed laws keyed by `(s, bound_u, bound_v)`.
fn fgl_cache() -> &'static Mutex<HashMap<(u32, usize, usize), Arc<BiSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize, usize), Arc<BiSeries>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Honda formal group law mod 2, truncated mod `(x^bound_u, y^bound_v)`.
pub fn honda_fgl(s: u32, bound_u: usize, bound_v: usize) -> Result<BiSeries> {
    check_height(s)?;
    if bound_u < 2 || bound_v < 2 {
        return Err(Error::InvalidParameter("bounds must be at least 2".into()));
    }
    if bound_u > MAX_FGL_BOUND || bound_v > MAX_FGL_BOUND {
        return Err(Error::DegreeOverflow(format!(
            "bounds {bound_u}x{bound_v} exceed {MAX_FGL_BOUND}"
        )));
    }
    let key = (s, bound_u, bound_v);
    if let Some(f) = fgl_cache().lock().expect("fgl cache poisoned").get(&key) {
        return Ok((**f).clone());
    }
    let f = compute_honda_fgl(s, bound_u, bound_v)?;
    fgl_cache()
        .lock()
        .expect("fgl cache poisoned")
        .insert(key, Arc::new(f.clone()));
    Ok(f)
}

fn compute_honda_fgl(s: u32, bu: usize, bv: usize) -> Result<BiSeries> {
    // total degree of the last surviving monomial x^{bu-1} y^{bv-1}
    let deg = bu + bv - 2;
    let log = honda_log(s, deg)?;
    let exp = reversion_newton(&log)?;

    // Z = 2^K (log x + log y) has integer coefficients 2^{K-i}.
    let xs = log_exponents(s, bu);
    let ys = log_exponents(s, bv);
    let k_max = xs.iter().chain(&ys).map(|&(i, _)| i).max().unwrap_or(0);
    let mut z_terms: Vec<(usize, usize, u32)> = Vec::new();
    for &(i, e) in &xs {
        z_terms.push((e, 0, k_max - i));
    }
    for &(i, e) in &ys {
        z_terms.push((0, e, k_max - i));
    }

    // Common denominator of exp_k / 2^{kK}.
    let mut den = BigInt::one();
    for (k, c) in exp.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = c.denom() << (k * k_max as usize);
        den = den.lcm(&d);
    }

    let idx = |a: usize, b: usize| a * bv + b;
    let mut numer = vec![BigInt::zero(); bu * bv];
    let mut power = vec![BigInt::zero(); bu * bv];
    power[0] = BigInt::one();
    let mut support: Vec<(usize, usize)> = vec![(0, 0)];
    for k in 1..=deg {
        let mut next = vec![BigInt::zero(); bu * bv];
        let mut next_support = Vec::new();
        for &(a, b) in &support {
            let p = &power[idx(a, b)];
            for &(da, db, sh) in &z_terms {
                let (na, nb) = (a + da, b + db);
                if na >= bu || nb >= bv {
                    continue;
                }
                let slot = &mut next[idx(na, nb)];
                if slot.is_zero() {
                    next_support.push((na, nb));
                }
                *slot += p << sh as usize;
            }
        }
        next_support.retain(|&(a, b)| !next[idx(a, b)].is_zero());
        next_support.sort_unstable();
        next_support.dedup();
        power = next;
        support = next_support;
        if support.is_empty() {
            break;
        }
        let c = exp.coeff(k);
        if c.is_zero() {
            continue;
        }
        let scale = (&den / (c.denom() << (k * k_max as usize))) * c.numer();
        for &(a, b) in &support {
            numer[idx(a, b)] += &power[idx(a, b)] * &scale;
        }
    }

    let mut f = BiSeries::zero(bu, bv);
    for a in 0..bu {
        for b in 0..bv {
            let n = &numer[idx(a, b)];
            if n.is_zero() {
                continue;
            }
            let g = n.gcd(&den);
            let (rn, rd) = (n / &g, &den / &g);
            if rd.is_even() {
                return Err(Error::NotTwoIntegral {
                    a,
                    b,
                    value: format!("{rn}/{rd}"),
                });
            }
            if rn.abs().is_odd() {
                f.flip(a, b);
            }
        }
    }
    Ok(f)
}

/// A formal group law together with its formal inverse, at a fixed
/// truncation. All series share the bound.
#[derive(Clone, Debug)]
pub struct FormalGroup {
    s: u32,
    bound: usize,
    law: BiSeries,
    inverse: UniPoly,
}

impl FormalGroup {
    /// The Honda law of height `s` truncated mod `x^bound, y^bound`.
    pub fn honda(s: u32, bound: usize) -> Result<Self> {
        let law = honda_fgl(s, bound, bound)?;
        Self::from_law(s, law)
    }

    /// Wraps an arbitrary (possibly corrupted) law; used by negative controls.
    pub fn from_law(s: u32, law: BiSeries) -> Result<Self> {
        let bound = law.bound_u().min(law.bound_v());
        let inverse = formal_inverse_of(&law, bound)?;
        Ok(Self {
            s,
            bound,
            law,
            inverse,
        })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn law(&self) -> &BiSeries {
        &self.law
    }

    pub fn inverse(&self) -> &UniPoly {
        &self.inverse
    }

    /// `F(p, q)` for univariate nilpotent arguments.
    pub fn add(&self, p: &UniPoly, q: &UniPoly) -> UniPoly {
        self.law.eval_univariate(p, q)
    }

    /// `[m]_F(x)`; negative `m` goes through the formal inverse.
    pub fn m_series(&self, m: i64) -> UniPoly {
        let x = UniPoly::x(self.bound);
        if m == 0 {
            return UniPoly::zero(self.bound);
        }
        let pos = self.m_series_positive(m.unsigned_abs(), &x);
        if m < 0 {
            self.inverse.compose(&pos)
        } else {
            pos
        }
    }

    fn m_series_positive(&self, m: u64, x: &UniPoly) -> UniPoly {
        debug_assert!(m > 0);
        let top = 63 - m.leading_zeros();
        let mut acc = x.clone();
        for bit in (0..top).rev() {
            acc = self.add(&acc, &acc);
            if (m >> bit) & 1 == 1 {
                acc = self.add(&acc, x);
            }
        }
        acc
    }

    /// `[r]_F` for a residue mod `modulus` (a power of two): residues above
    /// `modulus / 2` are treated as the negative `r - modulus`.
    pub fn m_series_mod(&self, r: u64, modulus: u64) -> UniPoly {
        let r = r % modulus;
        if r > modulus / 2 {
            self.m_series(r as i64 - modulus as i64)
        } else {
            self.m_series(r as i64)
        }
    }
}

/// `[m]_F(x)` for the Honda law of height `s`, truncated mod `x^bound`.
pub fn m_series(m: i64, s: u32, bound: usize) -> Result<UniPoly> {
    Ok(FormalGroup::honda(s, bound)?.m_series(m))
}

/// The formal inverse of the Honda law of height `s`, mod `x^bound`.
pub fn formal_inverse(s: u32, bound: usize) -> Result<UniPoly> {
    let law = honda_fgl(s, bound, bound)?;
    formal_inverse_of(&law, bound)
}

/// Solves `F(x, i(x)) = 0` coefficient by coefficient. `F(x,y) = x + y + ...`
/// makes the degree-`k` coefficient of `F(x, i)` equal to `i_k` plus terms
/// from lower coefficients, so each step fixes one coefficient.
pub fn formal_inverse_of(law: &BiSeries, bound: usize) -> Result<UniPoly> {
    let x = UniPoly::x(bound);
    let mut inv = UniPoly::x(bound);
    for k in 2..bound {
        let val = law.eval_univariate(&x, &inv);
        if val.coeff(k) {
            inv.flip(k);
            if law.eval_univariate(&x, &inv).coeff(k) {
                return Err(Error::RecursionFailure(k));
            }
        }
    }
    if !law.eval_univariate(&x, &inv).is_zero() {
        let k = law.eval_univariate(&x, &inv).valuation().unwrap_or(bound);
        return Err(Error::RecursionFailure(k));
    }
    Ok(inv)
}

/// Pass/fail result of one series identity, with the first offending
/// monomial on failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Vec<usize>>,
}

impl IdentityCheck {
    fn new(name: &str, witness: Option<Vec<usize>>) -> Self {
        Self {
            name: name.to_string(),
            pass: witness.is_none(),
            witness,
        }
    }
}

/// Bound used for the approximation checks of height `s`: large enough that
/// the ideals involved are visible and the quotient argument below applies.
pub fn approximation_bound(s: u32) -> usize {
    let q2 = 1usize << (2 * (s - 1));
    (4 * q2).max(64)
}

/// `F = x + y + (xy)^{2^{s-1}} mod y^{2^{2(s-1)}}`: the residual may only
/// contain monomials with `b >= 2^{2(s-1)}`.
pub fn check_first_approximation(law: &BiSeries, s: u32) -> IdentityCheck {
    let q = 1usize << (s - 1);
    let q2 = q * q;
    let mut d = law.clone();
    for (a, b) in [(1, 0), (0, 1), (q, q)] {
        if a < d.bound_u() && b < d.bound_v() {
            d.flip(a, b);
        }
    }
    let witness = d
        .terms()
        .into_iter()
        .find(|&(_, b)| b < q2)
        .map(|(a, b)| vec![a, b]);
    IdentityCheck::new("fgl-approximation-first", witness)
}

/// `F = x + y + Phi^{2^{s-1}}` with `Phi = xy + (xy)^{2^{s-1}}(x+y)` modulo
/// `((xy)^{2^{s-1}}(x+y)^{2^{s-1}})`. Raising to the `2^{s-1}` power maps that
/// ideal to the one generated by `g = (xy)^Q (x+y)^Q`, `Q = 2^{2(s-1)}`, so the
/// residual must be a multiple of `g` modulo the truncation.
pub fn check_second_approximation(law: &BiSeries, s: u32) -> IdentityCheck {
    let q = 1usize << (s - 1);
    let big_q = q * q;
    let (bu, bv) = (law.bound_u(), law.bound_v());
    let mut d = law.clone();
    // x + y + (xy)^q + x^{q(q+1)} y^{q^2} + x^{q^2} y^{q(q+1)}
    for (a, b) in [
        (1, 0),
        (0, 1),
        (q, q),
        (q * (q + 1), big_q),
        (big_q, q * (q + 1)),
    ] {
        if a < bu && b < bv {
            d.flip(a, b);
        }
    }
    let name = "fgl-approximation-second";
    // divisibility by (xy)^Q
    if let Some((a, b)) = d.terms().into_iter().find(|&(a, b)| a < big_q || b < big_q) {
        return IdentityCheck::new(name, Some(vec![a, b]));
    }
    // membership of d / (xy)^Q in (x^Q + y^Q) mod (x^{B'}, y^{B'})
    let b_u = bu - big_q;
    let b_v = bv - big_q;
    let mut normal: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (a, b) in d.terms() {
        let (a0, b0) = (a - big_q, b - big_q);
        let na = a0 % big_q;
        let nb = b0 + big_q * (a0 / big_q);
        if nb >= b_v || na >= b_u {
            continue;
        }
        if normal.remove(&(na, nb)).is_none() {
            normal.insert((na, nb), (a, b));
        }
    }
    let witness = normal.into_values().min().map(|(a, b)| vec![a, b]);
    IdentityCheck::new(name, witness)
}

/// `F(x, 0) = x`, `F(0, y) = y` and `F[a,b] = F[b,a]`.
pub fn check_unit_and_symmetry(law: &BiSeries) -> IdentityCheck {
    let bad_unit = law
        .terms()
        .into_iter()
        .find(|&(a, b)| (b == 0 && a != 1) || (a == 0 && b != 1));
    let missing = [(1usize, 0usize), (0, 1)]
        .into_iter()
        .find(|&(a, b)| !law.coeff(a, b));
    if let Some((a, b)) = bad_unit.or(missing) {
        return IdentityCheck::new("fgl-unit-symmetry", Some(vec![a, b]));
    }
    let n = law.bound_u().min(law.bound_v());
    let asym = law
        .terms()
        .into_iter()
        .find(|&(a, b)| a < n && b < n && !law.coeff(b, a));
    IdentityCheck::new("fgl-unit-symmetry", asym.map(|(a, b)| vec![a, b]))
}

/// `[2]_F(x) = x^{2^s}` mod `x^bound`.
pub fn check_two_series(group: &FormalGroup) -> IdentityCheck {
    let two = group.m_series(2);
    let expected = UniPoly::monomial(group.bound(), 1usize << group.s());
    let diff = two.add(&expected);
    IdentityCheck::new("fgl-two-series", diff.valuation().map(|k| vec![k]))
}

/// Trivariate truncated series, as polynomials in `x` with coefficients in
/// `F2[y,z]/(y^B, z^B)`.
#[derive(Clone)]
struct Tri {
    coeffs: Vec<RingElement>,
}

impl Tri {
    fn zero(b: usize) -> Self {
        Self {
            coeffs: vec![RingElement::zero(b); b],
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let b = self.coeffs.len();
        let mut out = Self::zero(b.max(1));
        out.coeffs.truncate(b);
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate().take(b - i) {
                if !q.is_zero() {
                    out.coeffs[i + j] += &(p * q);
                }
            }
        }
        out
    }
}

/// Associativity `F(F(x,y),z) = F(x,F(y,z))` mod `(x^B, y^B, z^B)` with `B`
/// a power of two no larger than the law's bounds. Returns the first
/// offending `(a, b, c)` on failure.
pub fn check_associativity(law: &BiSeries, b: usize) -> IdentityCheck {
    assert!(b.is_power_of_two() && b <= law.bound_u() && b <= law.bound_v());
    // coefficient rings are F2[y,z]/(y^b, z^b), y = "u", z = "v"
    let row = |a: usize| -> Vec<usize> { (0..b).filter(|&j| law.coeff(a, j)).collect() };

    // F(x, y) as a Tri: x^a with coefficient sum_j F[a,j] y^j
    let mut fxy = Tri::zero(b);
    for a in 0..b {
        fxy.coeffs[a] = RingElement::from_monomials(b, row(a).into_iter().map(|j| (j, 0)));
    }
    // lhs = F(fxy, z) by Horner in fxy
    let mut lhs = Tri::zero(b);
    for a in (0..b).rev() {
        lhs = lhs.mul(&fxy);
        let pz = RingElement::from_monomials(b, row(a).into_iter().map(|j| (0, j)));
        lhs.coeffs[0] += &pz;
    }

    // F(y, z) in the coefficient ring, then rhs = F(x, F(y,z))
    let y = RingElement::monomial(b, 1, 0);
    let z = RingElement::monomial(b, 0, 1);
    let truncated = law.truncate(b, b);
    let fyz = crate::ring::substitute(&truncated, &y, &z).expect("y, z are nilpotent");
    let mut pows = vec![RingElement::one(b)];
    for j in 1..b {
        let next = &pows[j - 1] * &fyz;
        pows.push(next);
    }
    let mut rhs = Tri::zero(b);
    for a in 0..b {
        for j in row(a) {
            rhs.coeffs[a] += &pows[j];
        }
    }

    let witness = (0..b).find_map(|a| {
        let d = &lhs.coeffs[a] + &rhs.coeffs[a];
        let first = d.monomials().next();
        first.map(|(j, k)| vec![a, j, k])
    });
    IdentityCheck::new("fgl-associativity", witness)
}

/// Full battery for height `s`: unit/symmetry, associativity, `[2]`, and the
/// two approximation formulas.
#[derive(Clone, Debug, Serialize)]
pub struct FglReport {
    pub s: u32,
    pub bound: usize,
    pub checks: Vec<IdentityCheck>,
}

impl FglReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Bound used for the associativity check.
pub const ASSOCIATIVITY_BOUND: usize = 32;

pub fn check_fgl_approximations(s: u32) -> Result<FglReport> {
    let bound = approximation_bound(s);
    let law = honda_fgl(s, bound, bound)?;
    check_law(s, &law)
}

/// Runs the battery on an arbitrary law (e.g. a corrupted copy).
pub fn check_law(s: u32, law: &BiSeries) -> Result<FglReport> {
    let bound = law.bound_u().min(law.bound_v());
    let group = FormalGroup::from_law(s, law.clone());
    let mut checks = vec![check_unit_and_symmetry(law)];
    checks.push(check_associativity(law, ASSOCIATIVITY_BOUND.min(bound)));
    match group {
        Ok(g) => checks.push(check_two_series(&g)),
        Err(Error::RecursionFailure(k)) => {
            checks.push(IdentityCheck::new("fgl-two-series", Some(vec![k])))
        }
        Err(e) => return Err(e),
    }
    checks.push(check_first_approximation(law, s));
    checks.push(check_second_approximation(law, s));
    Ok(FglReport { s, bound, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent oracle for the reversion: Lagrange inversion,
    /// `e_k = [w^{k-1}] (w / log(w))^k / k`.
    fn reversion_lagrange(log: &RatSeries) -> RatSeries {
        let d = log.degree();
        // log(w) / w, then its inverse
        let shifted: Vec<BigRational> = log.coeffs()[1..].to_vec();
        let h = RatSeries::from_coeffs(shifted).inverse().unwrap();
        let mut e = RatSeries::zero(d);
        let mut hk = h.clone();
        for k in 1..=d {
            if k > 1 {
                hk = hk.mul(&h);
            }
            e.set_coeff(k, hk.coeff(k - 1) / rat(k as i64, 1));
        }
        e
    }

    #[test]
    fn honda_log_coefficients() {
        let log = honda_log(2, 20).unwrap();
        assert_eq!(log.coeff(1), &rat(1, 1));
        assert_eq!(log.coeff(2), &rat(0, 1));
        assert_eq!(log.coeff(4), &rat(1, 2));
        assert_eq!(log.coeff(16), &rat(1, 4));
        // functional equation log(x) = x + log(x^{2^s}) / 2
        for k in 2..=20usize {
            let from_eq = if k % 4 == 0 {
                log.coeff(k / 4) / rat(2, 1)
            } else {
                rat(0, 1)
            };
            assert_eq!(log.coeff(k), &from_eq, "degree {k}");
        }
        assert!(honda_log(1, 4).is_err());
    }

    #[test]
    fn newton_reversion_matches_direct_recursion() {
        for s in [2, 3] {
            let log = honda_log(s, 40).unwrap();
            assert_eq!(reversion_newton(&log).unwrap(), reversion_lagrange(&log));
        }
    }

    #[test]
    fn small_law_coefficients() {
        let f = honda_fgl(2, 16, 16).unwrap();
        assert!(!f.coeff(1, 1));
        assert!(f.coeff(2, 2));
        assert!(f.coeff(1, 0) && f.coeff(0, 1));
        for a in 2..16 {
            assert!(!f.coeff(a, 0));
        }
        assert!(f.is_symmetric());
    }

    #[test]
    fn approximations_hold() {
        for s in [2, 3] {
            let report = check_fgl_approximations(s).unwrap();
            assert!(report.pass(), "{report:?}");
        }
    }

    #[test]
    fn flipped_coefficient_is_caught() {
        let mut f = honda_fgl(2, 64, 64).unwrap();
        f.flip(2, 2);
        let c = check_first_approximation(&f, 2);
        assert!(!c.pass);
        assert_eq!(c.witness, Some(vec![2, 2]));
    }

    #[test]
    fn two_series_and_inverse() {
        let g = FormalGroup::honda(2, 64).unwrap();
        assert_eq!(g.m_series(1), UniPoly::x(64));
        assert!(g.m_series(0).is_zero());
        assert_eq!(g.m_series(2), UniPoly::monomial(64, 4));
        let inv = g.inverse();
        assert!(inv.coeff(4));
        let x = UniPoly::x(64);
        assert!(g.add(&x, inv).is_zero());
        // x + i(x) vanishes mod x^{2^s}
        assert!(x.add(inv).valuation().unwrap() >= 4);
        assert_eq!(g.m_series(-1), *inv);
        assert_eq!(check_two_series(&g).witness, None);
    }

    #[test]
    fn m_series_is_additive() {
        let g = FormalGroup::honda(3, 64).unwrap();
        for (m1, m2) in [(1i64, 2i64), (3, 5), (-1, 4), (7, -3), (6, 6)] {
            assert_eq!(
                g.m_series(m1 + m2),
                g.add(&g.m_series(m1), &g.m_series(m2)),
                "[{m1}] + [{m2}]"
            );
        }
    }

    #[test]
    fn residues_agree_with_negative_representatives() {
        // [2^{n+1}](x) = x^{2^{(n+1)s}} = 0 mod x^M, so residues are well defined
        let g = FormalGroup::honda(2, 16).unwrap();
        for r in 0..4u64 {
            assert_eq!(g.m_series_mod(r, 4), g.m_series(r as i64), "r = {r}");
            assert_eq!(g.m_series_mod(r, 4), g.m_series(r as i64 - 4), "r = {r}");
        }
    }
}
