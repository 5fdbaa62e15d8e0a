//! Power series containers: exact rational univariate series, and truncated
//! F2 series in one and two variables.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits;

/// A univariate series with exact rational coefficients, truncated after
/// degree `D` (so `D + 1` stored coefficients).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); degree + 1],
        }
    }

    /// The series `x` truncated at `degree`.
    pub fn x(degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if degree >= 1 {
            s.coeffs[1] = BigRational::one();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, c: BigRational) {
        self.coeffs[k] = c;
    }

    /// Re-truncates to a (usually smaller) degree.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut c: Vec<_> = self.coeffs.iter().take(degree + 1).cloned().collect();
        c.resize(degree + 1, BigRational::zero());
        Self { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.degree().min(other.degree());
        Self {
            coeffs: (0..=d)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.degree().min(other.degree());
        Self {
            coeffs: (0..=d)
                .map(|k| &self.coeffs[k] - &other.coeffs[k])
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.degree().min(other.degree());
        let mut out = vec![BigRational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return None;
        }
        let d = self.degree();
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); d + 1];
        out[0] = inv0.clone();
        for k in 1..=d {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -(acc * &inv0);
        }
        Some(Self { coeffs: out })
    }

    /// Formal derivative (degree drops by one, floored at zero).
    pub fn derivative(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=d)
                .map(|k| &self.coeffs[k] * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        }
    }

    /// `self^(2^k)` by repeated squaring.
    pub fn pow2k(&self, k: u32) -> Self {
        let mut r = self.clone();
        for _ in 0..k {
            r = r.mul(&r);
        }
        r
    }

    /// True when every coefficient has an odd denominator.
    pub fn is_two_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_odd())
    }

    /// Reduction mod 2 of a 2-integral series. `None` if some coefficient has
    /// an even denominator.
    pub fn reduce_mod2(&self) -> Option<UniPoly> {
        let mut p = UniPoly::zero(self.degree() + 1);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.denom().is_even() {
                return None;
            }
            if c.numer().is_odd() {
                p.flip(k);
            }
        }
        Some(p)
    }
}

/// A univariate F2 polynomial truncated mod `x^bound`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    bound: usize,
    words: Vec<u64>,
}

impl UniPoly {
    pub fn zero(bound: usize) -> Self {
        assert!(bound >= 1);
        Self {
            bound,
            words: vec![0; bits::words_for(bound)],
        }
    }

    pub fn one(bound: usize) -> Self {
        Self::monomial(bound, 0)
    }

    pub fn x(bound: usize) -> Self {
        Self::monomial(bound, 1)
    }

    pub fn monomial(bound: usize, k: usize) -> Self {
        let mut p = Self::zero(bound);
        if k < bound {
            p.flip(k);
        }
        p
    }

    pub fn from_exponents(bound: usize, exps: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zero(bound);
        for k in exps {
            if k < bound {
                p.flip(k);
            }
        }
        p
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn coeff(&self, k: usize) -> bool {
        k < self.bound && bits::get_bit(&self.words, k)
    }

    pub fn flip(&mut self, k: usize) {
        assert!(k < self.bound);
        bits::flip_bit(&mut self.words, k);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Exponents with nonzero coefficient, increasing.
    pub fn exponents(&self) -> Vec<usize> {
        bits::ones(&self.words).collect()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        bits::lowest_one(&self.words)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.bound, other.bound);
        let mut out = self.clone();
        bits::xor_into(&mut out.words, &other.words);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.bound, other.bound);
        Self {
            bound: self.bound,
            words: bits::mul_poly(&self.words, &other.words, self.bound),
        }
    }

    /// Re-truncates at a new bound (smaller or larger).
    pub fn with_bound(&self, bound: usize) -> Self {
        Self::from_exponents(bound, self.exponents())
    }

    /// Composition `self(g)` for `g` with zero constant term.
    pub fn compose(&self, g: &Self) -> Self {
        assert_eq!(self.bound, g.bound);
        assert!(!g.coeff(0), "composition requires a nilpotent argument");
        let mut acc = Self::zero(self.bound);
        for k in (0..self.bound).rev() {
            acc = acc.mul(g);
            if self.coeff(k) {
                acc.flip(0);
            }
        }
        acc
    }
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "UniPoly(bound={}, {:?})", self.bound, self.exponents())
    }
}

/// A bivariate F2 series truncated mod `(x^bound_u, y^bound_v)`.
///
/// Coefficients are stored densely in row-major order `a * bound_v + b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiSeries {
    bound_u: usize,
    bound_v: usize,
    words: Vec<u64>,
}

impl BiSeries {
    pub fn zero(bound_u: usize, bound_v: usize) -> Self {
        Self {
            bound_u,
            bound_v,
            words: vec![0; bits::words_for(bound_u * bound_v)],
        }
    }

    pub fn from_terms(
        bound_u: usize,
        bound_v: usize,
        terms: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut f = Self::zero(bound_u, bound_v);
        for (a, b) in terms {
            if a < bound_u && b < bound_v {
                f.flip(a, b);
            }
        }
        f
    }

    pub fn bound_u(&self) -> usize {
        self.bound_u
    }

    pub fn bound_v(&self) -> usize {
        self.bound_v
    }

    #[inline]
    pub fn coeff(&self, a: usize, b: usize) -> bool {
        a < self.bound_u && b < self.bound_v && bits::get_bit(&self.words, a * self.bound_v + b)
    }

    pub fn flip(&mut self, a: usize, b: usize) {
        assert!(a < self.bound_u && b < self.bound_v);
        bits::flip_bit(&mut self.words, a * self.bound_v + b);
    }

    /// Nonzero coefficients `(a, b)` in canonical (row-major) order.
    pub fn terms(&self) -> Vec<(usize, usize)> {
        let bv = self.bound_v;
        bits::ones(&self.words).map(|i| (i / bv, i % bv)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.bound_u, self.bound_v), (other.bound_u, other.bound_v));
        let mut out = self.clone();
        bits::xor_into(&mut out.words, &other.words);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Restriction to smaller bounds.
    pub fn truncate(&self, bound_u: usize, bound_v: usize) -> Self {
        Self::from_terms(bound_u, bound_v, self.terms())
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.bound_u.min(self.bound_v);
        self.terms()
            .into_iter()
            .filter(|&(a, b)| a < n && b < n)
            .all(|(a, b)| self.coeff(b, a))
    }

    /// `F(p(x), q(x))` as a univariate truncated polynomial; `p` and `q` must
    /// be nilpotent and share a bound.
    pub fn eval_univariate(&self, p: &UniPoly, q: &UniPoly) -> UniPoly {
        assert_eq!(p.bound(), q.bound());
        assert!(!p.coeff(0) && !q.coeff(0), "arguments must be nilpotent");
        let bound = p.bound();
        let bu = self.bound_u.min(bound);
        let bv = self.bound_v.min(bound);
        let mut q_pows = Vec::with_capacity(bv);
        q_pows.push(UniPoly::one(bound));
        for b in 1..bv {
            let next = q_pows[b - 1].mul(q);
            q_pows.push(next);
        }
        let mut acc = UniPoly::zero(bound);
        for a in (0..bu).rev() {
            acc = acc.mul(p);
            for (b, qb) in q_pows.iter().enumerate() {
                if self.coeff(a, b) {
                    acc = acc.add(qb);
                }
            }
        }
        acc
    }
}

impl std::fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BiSeries({}x{}, {:?})",
            self.bound_u,
            self.bound_v,
            self.terms()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rat_series_inverse() {
        // 1/(1 - x) = 1 + x + x^2 + ...
        let s = RatSeries::from_coeffs(vec![r(1, 1), r(-1, 1), r(0, 1), r(0, 1)]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv.coeffs(), &[r(1, 1), r(1, 1), r(1, 1), r(1, 1)]);
        assert!(RatSeries::x(3).inverse().is_none());
    }

    #[test]
    fn rat_series_reduction_requires_odd_denominators() {
        let s = RatSeries::from_coeffs(vec![r(0, 1), r(3, 1), r(2, 3), r(5, 7)]);
        assert_eq!(s.reduce_mod2().unwrap().exponents(), vec![1, 3]);
        let t = RatSeries::from_coeffs(vec![r(1, 2)]);
        assert!(t.reduce_mod2().is_none());
        assert!(!t.is_two_integral());
    }

    #[test]
    fn uni_compose() {
        let f = UniPoly::from_exponents(6, [1, 2]);
        let g = UniPoly::from_exponents(6, [1, 3]);
        let direct = g.add(&g.mul(&g));
        assert_eq!(f.compose(&g), direct);
    }
}
