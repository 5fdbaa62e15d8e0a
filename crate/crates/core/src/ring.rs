//! The truncated ring `F2[u,v]/(u^M, v^M)`.
//!
//! An element is a dense bit table over the monomials `u^a v^b`, `a, b < M`,
//! packed in the canonical order `index = a*M + b`. Rows (fixed `a`) are
//! polynomials in `v`; for `M >= 64` each row occupies `M/64` whole words,
//! for smaller `M` several rows share a word.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::bits;
use crate::error::{Error, Result};
use crate::series::BiSeries;

/// Default guard on the F2-dimension `M^2` of the ring.
pub const DEFAULT_MAX_DIM: usize = 4096;
/// Guard used when the caller forces larger computations.
pub const FORCED_MAX_DIM: usize = 16384;

/// Parameters of `K(s)^*(B(C_{2^{n+1}} x C_{2^{n+1}}))` with `v_s = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RingParams {
    s: u32,
    n: u32,
    #[serde(rename = "M")]
    m: usize,
}

/// Validates `(s, n)` against the default size guard.
pub fn make_ring(s: u32, n: u32) -> Result<RingParams> {
    RingParams::with_guard(s, n, DEFAULT_MAX_DIM)
}

impl RingParams {
    pub fn new(s: u32, n: u32) -> Result<Self> {
        make_ring(s, n)
    }

    pub fn with_guard(s: u32, n: u32, max_dim: usize) -> Result<Self> {
        if s < 2 {
            return Err(Error::InvalidParameter(format!(
                "height s must be at least 2, got {s}"
            )));
        }
        if n < 1 {
            return Err(Error::InvalidParameter(format!(
                "exponent parameter n must be at least 1, got {n}"
            )));
        }
        let log_m = (n as u64 + 1) * s as u64;
        // dim = 4^{log_m}; anything past 2^62 is hopeless anyway
        if log_m > 31 {
            return Err(Error::InfeasibleSize {
                dim: usize::MAX,
                guard: max_dim,
            });
        }
        let m = 1usize << log_m;
        let dim = m * m;
        if dim > max_dim {
            return Err(Error::InfeasibleSize {
                dim,
                guard: max_dim,
            });
        }
        Ok(Self { s, n, m })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Truncation exponent `M = 2^{(n+1)s}`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// F2-dimension `M^2`.
    pub fn dim(&self) -> usize {
        self.m * self.m
    }

    /// `2^{n+1}`, the order of the cyclic factors.
    pub fn modulus(&self) -> u64 {
        1u64 << (self.n + 1)
    }

    pub fn zero(&self) -> RingElement {
        RingElement::zero(self.m)
    }

    pub fn one(&self) -> RingElement {
        RingElement::one(self.m)
    }

    pub fn u(&self) -> RingElement {
        RingElement::monomial(self.m, 1, 0)
    }

    pub fn v(&self) -> RingElement {
        RingElement::monomial(self.m, 0, 1)
    }

    pub fn monomial(&self, a: usize, b: usize) -> RingElement {
        RingElement::monomial(self.m, a, b)
    }

    /// The monomial with canonical index `idx`.
    pub fn basis_element(&self, idx: usize) -> RingElement {
        RingElement::monomial(self.m, idx / self.m, idx % self.m)
    }
}

/// An element of `F2[u,v]/(u^M, v^M)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    m: usize,
    words: Vec<u64>,
}

impl RingElement {
    /// The zero element for truncation `m` (a power of two).
    pub fn zero(m: usize) -> Self {
        assert!(m.is_power_of_two(), "truncation must be a power of two");
        Self {
            m,
            words: vec![0; bits::words_for(m * m)],
        }
    }

    pub fn one(m: usize) -> Self {
        Self::monomial(m, 0, 0)
    }

    /// `u^a v^b`, or zero when either exponent is truncated away.
    pub fn monomial(m: usize, a: usize, b: usize) -> Self {
        let mut e = Self::zero(m);
        if a < m && b < m {
            bits::flip_bit(&mut e.words, a * m + b);
        }
        e
    }

    /// Builds an element from `(a, b)` exponent pairs; repeated pairs cancel.
    pub fn from_monomials(m: usize, monos: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut e = Self::zero(m);
        for (a, b) in monos {
            if a < m && b < m {
                bits::flip_bit(&mut e.words, a * m + b);
            }
        }
        e
    }

    /// Builds an element from its packed coordinate vector.
    pub fn from_words(m: usize, words: Vec<u64>) -> Result<Self> {
        let expected = bits::words_for(m * m);
        if words.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: words.len(),
            });
        }
        let mut e = Self { m, words };
        e.mask_tail();
        Ok(e)
    }

    /// A uniformly random element.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut e = Self::zero(m);
        for w in e.words.iter_mut() {
            *w = rng.gen();
        }
        e.mask_tail();
        e
    }

    fn mask_tail(&mut self) {
        let last = self.words.len() - 1;
        self.words[last] &= bits::last_word_mask(self.m * self.m);
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m * self.m
    }

    /// Packed coordinates in canonical order.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    pub fn coeff(&self, a: usize, b: usize) -> bool {
        a < self.m && b < self.m && bits::get_bit(&self.words, a * self.m + b)
    }

    pub fn flip(&mut self, a: usize, b: usize) {
        assert!(a < self.m && b < self.m);
        bits::flip_bit(&mut self.words, a * self.m + b);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn constant_term(&self) -> bool {
        self.words[0] & 1 == 1
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Canonical indices of the nonzero coefficients, increasing.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        bits::ones(&self.words)
    }

    /// `(a, b)` exponents of the nonzero coefficients, in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.m;
        self.support().map(move |i| (i / m, i % m))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::ParamsMismatch {
                left: self.m,
                right: other.m,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn row_words(&self) -> usize {
        bits::words_for(self.m)
    }

    /// Unpacks into `m` rows of `row_words()` words.
    fn rows(&self) -> Vec<u64> {
        let m = self.m;
        if m >= 64 {
            return self.words.clone();
        }
        let mask = (1u64 << m) - 1;
        (0..m)
            .map(|a| {
                let bit = a * m;
                (self.words[bit / 64] >> (bit % 64)) & mask
            })
            .collect()
    }

    fn from_rows(m: usize, rows: &[u64]) -> Self {
        if m >= 64 {
            return Self {
                m,
                words: rows.to_vec(),
            };
        }
        let mut e = Self::zero(m);
        for (a, &r) in rows.iter().enumerate() {
            let bit = a * m;
            e.words[bit / 64] |= r << (bit % 64);
        }
        e
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.m;
        let w = self.row_words();
        let a = self.rows();
        let b = other.rows();
        let mut out = vec![0u64; m * w];
        bits::mul_rows(&a, &b, &mut out, m, w);
        Self::from_rows(m, &out)
    }

    /// Frobenius: `(sum c u^a v^b)^2 = sum c u^{2a} v^{2b}`.
    pub fn square(&self) -> Self {
        let m = self.m;
        let w = self.row_words();
        let rows = self.rows();
        let mut out = vec![0u64; m * w];
        for a in 0..m.div_ceil(2) {
            let src = &rows[a * w..(a + 1) * w];
            let dst = &mut out[2 * a * w..(2 * a + 1) * w];
            for (k, d) in dst.iter_mut().enumerate() {
                let half = src[k / 2] >> (32 * (k % 2));
                *d = bits::spread32(half);
            }
            dst[w - 1] &= bits::last_word_mask(m);
        }
        Self::from_rows(m, &out)
    }

    /// `self^(2^k)` by repeated Frobenius.
    pub fn pow2k(&self, k: u32) -> Self {
        let mut r = self.clone();
        for _ in 0..k {
            if r.is_zero() {
                break;
            }
            r = r.square();
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Canonical text form, e.g. `1 + u^1*v^0 + u^0*v^2`; zero prints as `0`.
    pub fn to_canonical_string(&self) -> String {
        let terms: Vec<String> = self
            .monomials()
            .map(|(a, b)| {
                if a == 0 && b == 0 {
                    "1".to_string()
                } else {
                    format!("u^{a}*v^{b}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Parses the canonical text form (any term order is accepted).
    pub fn parse_canonical(m: usize, text: &str) -> Result<Self> {
        let mut e = Self::zero(m);
        let text = text.trim();
        if text == "0" {
            return Ok(e);
        }
        for term in text.split('+') {
            let term = term.trim();
            let (a, b) = if term == "1" {
                (0, 0)
            } else {
                parse_term(term)?
            };
            if a >= m || b >= m {
                return Err(Error::InvalidParameter(format!(
                    "monomial `{term}` is outside the truncation {m}"
                )));
            }
            e.flip(a, b);
        }
        Ok(e)
    }
}

fn parse_term(term: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidParameter(format!("malformed monomial `{term}`"));
    let (u, v) = term.split_once('*').ok_or_else(bad)?;
    let a = u
        .strip_prefix("u^")
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    let b = v
        .strip_prefix("v^")
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    Ok((a, b))
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RingElement(M={}, {})",
            self.m,
            self.to_canonical_string()
        )
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.m, rhs.m, "truncation mismatch");
        let mut out = self.clone();
        bits::xor_into(&mut out.words, &rhs.words);
        out
    }
}

impl std::ops::AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        assert_eq!(self.m, rhs.m, "truncation mismatch");
        bits::xor_into(&mut self.words, &rhs.words);
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        assert_eq!(self.m, rhs.m, "truncation mismatch");
        self.mul_unchecked(rhs)
    }
}

/// Evaluates `F(X, Y) = sum F[a,b] X^a Y^b` in the ring.
///
/// Both arguments must be nilpotent (zero constant term). Terms with
/// `a >= M` or `b >= M` vanish because `X^M = Y^M = 0`.
pub fn substitute(f: &BiSeries, x: &RingElement, y: &RingElement) -> Result<RingElement> {
    x.check(y)?;
    if x.constant_term() || y.constant_term() {
        return Err(Error::NotNilpotent);
    }
    let m = x.m;
    let bu = f.bound_u().min(m);
    let bv = f.bound_v().min(m);
    // powers of Y up to the largest exponent actually used
    let max_b = (0..bu)
        .flat_map(|a| (0..bv).filter(move |&b| f.coeff(a, b)))
        .max()
        .unwrap_or(0);
    let mut y_pows = Vec::with_capacity(max_b + 1);
    y_pows.push(RingElement::one(m));
    for b in 1..=max_b {
        let next = &y_pows[b - 1] * y;
        y_pows.push(next);
    }
    // Horner in X over the row polynomials P_a(Y)
    let mut acc = RingElement::zero(m);
    for a in (0..bu).rev() {
        if !acc.is_zero() {
            acc = &acc * x;
        }
        for b in 0..bv.min(max_b + 1) {
            if f.coeff(a, b) {
                acc += &y_pows[b];
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn make_ring_sizes() {
        let p = make_ring(2, 1).unwrap();
        assert_eq!((p.m(), p.dim()), (16, 256));
        let p = make_ring(2, 2).unwrap();
        assert_eq!((p.m(), p.dim()), (64, 4096));
        assert_eq!(
            make_ring(3, 2),
            Err(Error::InfeasibleSize {
                dim: 262144,
                guard: DEFAULT_MAX_DIM
            })
        );
        assert!(matches!(make_ring(1, 1), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_ring(2, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn basic_products() {
        for (s, n) in [(2, 1), (2, 2)] {
            let p = make_ring(s, n).unwrap();
            let m = p.m();
            let u = p.u();
            let v = p.v();
            assert_eq!(&u * &u, p.monomial(2, 0));
            assert!((&p.monomial(m - 1, 0) * &u).is_zero());
            let w = &u + &v;
            assert_eq!(&w * &w, &p.monomial(2, 0) + &p.monomial(0, 2));
            assert_eq!(w.square(), &w * &w);
        }
    }

    #[test]
    fn mul_matches_naive_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [2usize, 4, 16, 64, 128] {
            for _ in 0..3 {
                let a = RingElement::random(m, &mut rng);
                let b = RingElement::random(m, &mut rng);
                let mut naive = RingElement::zero(m);
                for (a1, b1) in a.monomials() {
                    for (a2, b2) in b.monomials() {
                        if a1 + a2 < m && b1 + b2 < m {
                            naive.flip(a1 + a2, b1 + b2);
                        }
                    }
                }
                assert_eq!(&a * &b, naive, "m = {m}");
                assert_eq!(a.square(), &a * &a, "m = {m}");
            }
        }
    }

    #[test]
    fn pow_agrees_with_repeated_mul() {
        let p = make_ring(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = RingElement::random(p.m(), &mut rng);
        g.flip(0, 0);
        let mut acc = p.one();
        for e in 0..20u64 {
            assert_eq!(g.pow(e), acc);
            acc = &acc * &g;
        }
        assert_eq!(g.pow2k(3), g.pow(8));
    }

    #[test]
    fn canonical_text_round_trip() {
        let p = make_ring(2, 1).unwrap();
        let e = RingElement::from_monomials(16, [(0, 0), (1, 0), (0, 2)]);
        assert_eq!(e.to_canonical_string(), "1 + u^0*v^2 + u^1*v^0");
        assert_eq!(
            RingElement::parse_canonical(16, &e.to_canonical_string()).unwrap(),
            e
        );
        assert_eq!(p.zero().to_canonical_string(), "0");
        assert!(RingElement::parse_canonical(16, "u^16*v^0").is_err());
        assert!(RingElement::parse_canonical(16, "u1").is_err());
    }

    #[test]
    fn mismatched_truncations_are_rejected() {
        let a = RingElement::one(16);
        let b = RingElement::one(64);
        assert!(matches!(a.try_mul(&b), Err(Error::ParamsMismatch { .. })));
        assert!(matches!(a.try_add(&b), Err(Error::ParamsMismatch { .. })));
    }

    #[test]
    fn substitute_linear_and_unit() {
        let p = make_ring(2, 1).unwrap();
        let sum = BiSeries::from_terms(16, 16, [(1, 0), (0, 1)]);
        assert_eq!(substitute(&sum, &p.u(), &p.v()).unwrap(), &p.u() + &p.v());
        let non_nil = p.one();
        assert_eq!(substitute(&sum, &non_nil, &p.v()), Err(Error::NotNilpotent));
    }
}
