//! Dense linear algebra over F2 on bit-packed rows.
//!
//! Linear maps on the ring are stored by images: row `e` of an operator
//! matrix is the coordinate vector of the image of the `e`-th monomial, so
//! applying the map to `g` is the XOR of the rows in the support of `g`.
//! Kernels are therefore left kernels and images are row spaces.

use crate::bits;
use crate::error::{Error, Result};
use crate::ring::RingElement;

/// A dense `rows x cols` matrix over F2.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix({}x{})", self.rows, self.cols)
    }
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let stride = bits::words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.flip(i, i);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        bits::get_bit(self.row(i), j)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        bits::flip_bit(self.row_mut(i), j);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Entrywise sum; panics on shape mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        bits::xor_into(&mut out.data, &other.data);
        out
    }

    /// `v^T A`: the XOR of the rows selected by `v`.
    pub fn apply_left(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.stride];
        for i in bits::ones(v) {
            if i >= self.rows {
                break;
            }
            bits::xor_into(&mut out, self.row(i));
        }
        out
    }

    /// `self * other`, rows combined from `other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            let r = other.apply_left(self.row(i));
            out.row_mut(i).copy_from_slice(&r);
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols, 0);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec());
        }
        ech.rank()
    }

    /// Row space and left kernel in one elimination pass.
    pub fn image_and_kernel(&self) -> (Echelon, Echelon) {
        let mut ech = Echelon::new(self.cols, self.rows);
        let mut kernel = Echelon::new(self.rows, 0);
        for i in 0..self.rows {
            let mut v = ech.blank();
            v[..self.stride].copy_from_slice(self.row(i));
            bits::flip_bit(&mut v[ech.main_words..], i);
            if let Some(dep) = ech.insert(v) {
                kernel.insert(dep[ech.main_words..].to_vec());
            }
        }
        (ech.without_tracking(), kernel)
    }
}

/// The matrix of the map sending monomial `e` to `images[e]`.
pub fn operator_matrix(m: usize, images: &[RingElement]) -> Result<BitMatrix> {
    let dim = m * m;
    if images.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: images.len(),
        });
    }
    let mut mat = BitMatrix::zero(dim, dim);
    for (e, img) in images.iter().enumerate() {
        if img.m() != m {
            return Err(Error::ParamsMismatch {
                left: m,
                right: img.m(),
            });
        }
        mat.row_mut(e).copy_from_slice(img.words());
    }
    Ok(mat)
}

const NO_ROW: u32 = u32::MAX;

/// Reduced row echelon form, built incrementally.
///
/// Each row carries `width` main bits followed by `track` bits that record
/// which inserted vectors it combines. Pivots are lowest set bits; every
/// row is zero at every other row's pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    track: usize,
    main_words: usize,
    total_words: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    row_of_col: Vec<u32>,
}

impl Echelon {
    pub fn new(width: usize, track: usize) -> Self {
        let main_words = bits::words_for(width);
        let total_words = main_words + if track > 0 { bits::words_for(track) } else { 0 };
        Self {
            width,
            track,
            main_words,
            total_words,
            rows: Vec::new(),
            pivots: Vec::new(),
            row_of_col: vec![NO_ROW; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn track_width(&self) -> usize {
        self.track
    }

    pub fn main_words(&self) -> usize {
        self.main_words
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A zero vector of the full (main plus tracking) length.
    pub fn blank(&self) -> Vec<u64> {
        vec![0; self.total_words]
    }

    /// Basis rows, main part only.
    pub fn rows_main(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(move |r| &r[..self.main_words])
    }

    /// Basis rows including tracking bits.
    pub fn rows_full(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` (full length, or main length when untracked) in place.
    pub fn reduce(&self, v: &mut [u64]) {
        debug_assert!(v.len() >= self.main_words);
        let snapshot: Vec<u64> = v[..self.main_words].to_vec();
        for c in bits::ones(&snapshot) {
            let r = self.row_of_col[c];
            if r != NO_ROW {
                let row = &self.rows[r as usize];
                let start = c / 64;
                let end = v.len().min(row.len());
                bits::xor_into(&mut v[start..end], &row[start..end]);
            }
        }
    }

    /// True when the main part of `v` lies in the row space.
    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v[..self.main_words].to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`. Returns `None` when it extends the span; otherwise the
    /// reduced vector, whose main part is zero and whose tracking part is a
    /// dependency among inserted vectors.
    pub fn insert(&mut self, mut v: Vec<u64>) -> Option<Vec<u64>> {
        v.resize(self.total_words, 0);
        self.reduce(&mut v);
        let Some(p) = bits::lowest_one(&v[..self.main_words]) else {
            return Some(v);
        };
        let start = p / 64;
        for row in self.rows.iter_mut() {
            if bits::get_bit(row, p) {
                bits::xor_into(&mut row[start..], &v[start..]);
            }
        }
        self.row_of_col[p] = self.rows.len() as u32;
        self.rows.push(v);
        self.pivots.push(p);
        None
    }

    /// Drops the tracking columns.
    pub fn without_tracking(&self) -> Echelon {
        let mut out = Echelon::new(self.width, 0);
        out.rows = self
            .rows
            .iter()
            .map(|r| r[..self.main_words].to_vec())
            .collect();
        out.pivots = self.pivots.clone();
        out.row_of_col = self.row_of_col.clone();
        out
    }
}

/// A subspace of the ring `F2[u,v]/(u^M, v^M)`.
#[derive(Clone, Debug)]
pub struct Subspace {
    m: usize,
    ech: Echelon,
}

impl Subspace {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            ech: Echelon::new(m * m, 0),
        }
    }

    pub fn span<'a>(m: usize, elems: impl IntoIterator<Item = &'a RingElement>) -> Self {
        let mut s = Self::new(m);
        for e in elems {
            s.insert(e);
        }
        s
    }

    /// Wraps an untracked echelon of width `m^2`.
    pub fn from_echelon(m: usize, ech: Echelon) -> Result<Self> {
        if ech.width() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: ech.width(),
            });
        }
        Ok(Self {
            m,
            ech: ech.without_tracking(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.m * self.m
    }

    /// Adds `e`; returns true when the dimension grew.
    pub fn insert(&mut self, e: &RingElement) -> bool {
        assert_eq!(e.m(), self.m, "truncation mismatch");
        self.ech.insert(e.words().to_vec()).is_none()
    }

    pub fn contains(&self, e: &RingElement) -> bool {
        assert_eq!(e.m(), self.m, "truncation mismatch");
        self.ech.contains(e.words())
    }

    pub fn try_contains(&self, e: &RingElement) -> Result<bool> {
        if e.m() != self.m {
            return Err(Error::ParamsMismatch {
                left: self.m,
                right: e.m(),
            });
        }
        Ok(self.contains(e))
    }

    /// Normal form of `e` modulo the subspace.
    pub fn reduce(&self, e: &RingElement) -> RingElement {
        let mut w = e.words().to_vec();
        self.ech.reduce(&mut w);
        RingElement::from_words(self.m, w).expect("same truncation")
    }

    pub fn basis(&self) -> Vec<RingElement> {
        self.ech
            .rows_main()
            .map(|r| RingElement::from_words(self.m, r.to_vec()).expect("same truncation"))
            .collect()
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for r in other.ech.rows_main() {
            out.ech.insert(r.to_vec());
        }
        out
    }

    /// First basis vector of `self` outside `other`, if any.
    pub fn first_outside(&self, other: &Self) -> Option<RingElement> {
        self.ech
            .rows_main()
            .find(|r| !other.ech.contains(r))
            .map(|r| RingElement::from_words(self.m, r.to_vec()).expect("same truncation"))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.first_outside(other).is_none()
    }

    /// Equality by mutual membership of bases.
    pub fn equals(&self, other: &Self) -> bool {
        self.m == other.m && self.is_subspace_of(other) && other.is_subspace_of(self)
    }

    /// `dim(self cap other)` from `dim(self) + dim(other) - dim(self + other)`.
    pub fn intersection_dim(&self, other: &Self) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }
}

/// Left kernel and row space of an operator on the ring, as subspaces.
pub fn kernel_and_image(m: usize, mat: &BitMatrix) -> Result<(Subspace, Subspace)> {
    if mat.rows() != m * m || mat.cols() != m * m {
        return Err(Error::DimensionMismatch {
            expected: m * m,
            got: mat.rows(),
        });
    }
    let (image, kernel) = mat.image_and_kernel();
    Ok((
        Subspace::from_echelon(m, kernel)?,
        Subspace::from_echelon(m, image)?,
    ))
}

pub fn kernel(m: usize, mat: &BitMatrix) -> Result<Subspace> {
    Ok(kernel_and_image(m, mat)?.0)
}

pub fn image(m: usize, mat: &BitMatrix) -> Result<Subspace> {
    Ok(kernel_and_image(m, mat)?.1)
}

pub fn rank(mat: &BitMatrix) -> usize {
    mat.rank()
}

pub fn span_contains(space: &Subspace, g: &RingElement) -> Result<bool> {
    space.try_contains(g)
}

/// Span of all finite products of `gens`, including the empty product.
pub fn multiplicative_closure(m: usize, gens: &[RingElement]) -> Subspace {
    closure_over(&Subspace::new(m), gens)
}

/// `base + span{products of gens}`.
///
/// Requires `base * g` to stay inside `base` for every generator `g`; then
/// only the products themselves need to be multiplied further, and a
/// generator already in the current span adds nothing new.
pub fn closure_over(base: &Subspace, gens: &[RingElement]) -> Subspace {
    let m = base.m();
    let mut space = base.clone();
    let mut products = vec![RingElement::one(m)];
    space.insert(&products[0]);
    let mut used: Vec<&RingElement> = Vec::new();
    for g in gens {
        if g.is_zero() || space.contains(g) {
            continue;
        }
        used.push(g);
        // existing products times the new generator, then close up
        let mut queue: Vec<RingElement> = products.iter().map(|p| p * g).collect();
        while let Some(p) = queue.pop() {
            if p.is_zero() || !space.insert(&p) {
                continue;
            }
            for h in &used {
                queue.push(&p * *h);
            }
            products.push(p);
        }
    }
    space
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64, density: u32) -> BitMatrix {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut mat = BitMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_ratio(1, density) {
                    mat.flip(i, j);
                }
            }
        }
        mat
    }

    #[test]
    fn identity_and_zero_operators() {
        let m = 4;
        let ids: Vec<RingElement> = (0..m * m)
            .map(|e| RingElement::monomial(m, e / m, e % m))
            .collect();
        let mat = operator_matrix(m, &ids).unwrap();
        assert!(mat.is_identity());
        let trace = mat.add(&BitMatrix::identity(m * m));
        assert!(trace.is_zero());
        let (ker, im) = kernel_and_image(m, &trace).unwrap();
        assert_eq!((ker.dim(), im.dim()), (16, 0));
        assert!(operator_matrix(m, &ids[1..]).is_err());
    }

    #[test]
    fn membership_examples() {
        let m = 4;
        let u = RingElement::monomial(m, 1, 0);
        let v = RingElement::monomial(m, 0, 1);
        let uv = Subspace::span(m, [&u, &v]);
        assert!(uv.contains(&RingElement::zero(m)));
        assert!(uv.contains(&u));
        assert!(!Subspace::span(m, [&v]).contains(&u));
        assert!(uv.try_contains(&RingElement::zero(8)).is_err());
    }

    #[test]
    fn closure_examples() {
        let m = 8;
        let u = RingElement::monomial(m, 1, 0);
        let v = RingElement::monomial(m, 0, 1);
        assert_eq!(multiplicative_closure(m, &[]).dim(), 1);
        assert_eq!(multiplicative_closure(m, &[u.clone()]).dim(), m);
        assert_eq!(multiplicative_closure(m, &[u, v]).dim(), m * m);
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let mat = random_matrix(50, 70, 3, 9);
        let (image, kernel) = mat.image_and_kernel();
        assert_eq!(image.rank() + kernel.rank(), 50);
        for k in kernel.rows_main() {
            assert!(mat.apply_left(k).iter().all(|&w| w == 0));
        }
        for i in 0..mat.rows() {
            assert!(image.contains(mat.row(i)));
        }
    }

    #[test]
    fn rref_shape() {
        let mat = random_matrix(40, 40, 5, 3);
        let (image, _) = mat.image_and_kernel();
        for (r, &p) in image.rows_main().zip(image.pivots()) {
            assert_eq!(bits::lowest_one(r), Some(p));
            for &q in image.pivots() {
                assert_eq!(bits::get_bit(r, q), q == p);
            }
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(seed in any::<u64>(), rows in 1usize..90, cols in 1usize..90, density in 1u32..6) {
            let mat = random_matrix(rows, cols, seed, density);
            let (image, kernel) = mat.image_and_kernel();
            prop_assert_eq!(image.rank() + kernel.rank(), rows);
            prop_assert_eq!(image.rank(), mat.rank());
        }

        #[test]
        fn echelon_is_idempotent(seed in any::<u64>(), n in 1usize..80) {
            let mat = random_matrix(n, n, seed, 2);
            let (image, _) = mat.image_and_kernel();
            let mut again = Echelon::new(n, 0);
            for r in image.rows_main() {
                prop_assert!(again.insert(r.to_vec()).is_none());
            }
            let rows: Vec<_> = again.rows_main().map(|r| r.to_vec()).collect();
            let orig: Vec<_> = image.rows_main().map(|r| r.to_vec()).collect();
            prop_assert_eq!(rows, orig);
        }

        #[test]
        fn membership_is_basis_independent(seed in any::<u64>()) {
            let m = 4;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens: Vec<RingElement> = (0..6).map(|_| RingElement::random(m, &mut rng)).collect();
            let a = Subspace::span(m, gens.iter());
            let b = Subspace::span(m, gens.iter().rev());
            prop_assert!(a.equals(&b));
            let probe = RingElement::random(m, &mut rng);
            prop_assert_eq!(a.contains(&probe), b.contains(&probe));
            let combo = &gens[0] + &gens[3];
            prop_assert!(a.contains(&combo));
        }

        #[test]
        fn closure_is_monotone(seed in any::<u64>()) {
            let m = 8;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut gens: Vec<RingElement> = (0..3)
                .map(|_| {
                    let mut g = RingElement::random(m, &mut rng);
                    if g.constant_term() { g.flip(0, 0); }
                    &g * &g
                })
                .collect();
            let small = multiplicative_closure(m, &gens[..2]);
            let big = multiplicative_closure(m, &gens);
            prop_assert!(small.is_subspace_of(&big));
            // closed under multiplication by each generator
            for b in big.basis() {
                for g in &gens {
                    prop_assert!(big.contains(&(&b * g)));
                }
            }
            gens.reverse();
            prop_assert!(multiplicative_closure(m, &gens).equals(&big));
        }
    }
}
