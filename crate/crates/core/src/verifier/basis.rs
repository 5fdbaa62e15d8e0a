//! Special bases `{x^w, x^w u, x^w v, x^w uv}` and the coefficient criterion
//! for invariance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{random_combination, CheckResult, GroupContext};
use crate::bits;
use crate::error::{Error, Result};
use crate::group::{GroupId, GroupSpec};
use crate::linalg::{Echelon, Subspace};
use crate::ring::{RingElement, RingParams};

/// Exclusive bounds on the exponents of `x1, x2, y1, y2` in `x^w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisRanges {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl BasisRanges {
    pub fn count(&self) -> usize {
        self.i * self.j * self.k * self.l
    }
}

/// The case table of exponent ranges for the six hard-case groups.
pub fn special_ranges(spec: &GroupSpec, params: &RingParams) -> Result<BasisRanges> {
    let s = params.s() as usize;
    let ns = (params.n() * params.s()) as usize;
    let p = |e: usize| 1usize << e;
    match spec.id.index() {
        3 => Ok(BasisRanges {
            i: 1,
            j: p(ns - 1),
            k: p(s),
            l: p(ns + s - 1),
        }),
        4 | 9 => Ok(BasisRanges {
            i: p(s),
            j: p(ns - 1),
            k: p(s),
            l: p(ns - 1),
        }),
        7 | 8 | 11 => Ok(BasisRanges {
            i: p(ns),
            j: p(s - 1),
            k: p(ns),
            l: p(s - 1),
        }),
        _ => Err(Error::InvalidParameter(format!(
            "{} has no special basis",
            spec.id
        ))),
    }
}

fn powers(base: &RingElement, count: usize) -> Vec<RingElement> {
    let mut out = Vec::with_capacity(count);
    let mut acc = RingElement::one(base.m());
    for _ in 0..count {
        out.push(acc.clone());
        acc = &acc * base;
    }
    out
}

/// The set `S`, its elimination, and the coordinates it affords.
#[derive(Clone, Debug)]
pub struct SpecialBasis {
    pub group: GroupId,
    pub ranges: BasisRanges,
    /// Exponents `(i, j, k, l)` of each `x^w`.
    pub omega: Vec<[usize; 4]>,
    /// `x^w` in the same order as `omega`.
    pub monomials: Vec<RingElement>,
    m: usize,
    echelon: Echelon,
    dependency: Option<Vec<usize>>,
}

impl SpecialBasis {
    /// `|S| = 4 |omega|`.
    pub fn size(&self) -> usize {
        4 * self.omega.len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    /// Full rank and `|S| = M^2`.
    pub fn is_verified(&self) -> bool {
        self.dependency.is_none() && self.size() == self.m * self.m
    }

    /// Indices into `S` of a vanishing subfamily, if one was found.
    pub fn dependency(&self) -> Option<&[usize]> {
        self.dependency.as_deref()
    }

    /// Element `4w + c` of `S`, with `c` indexing `1, u, v, uv`.
    pub fn element(&self, idx: usize) -> RingElement {
        let (a, b) = [(0, 0), (1, 0), (0, 1), (1, 1)][idx % 4];
        &self.monomials[idx / 4] * &RingElement::monomial(self.m, a, b)
    }

    pub fn describe(&self, idx: usize) -> String {
        let [i, j, k, l] = self.omega[idx / 4];
        let coset = ["1", "u", "v", "uv"][idx % 4];
        format!("x1^{i} x2^{j} y1^{k} y2^{l} * {coset}")
    }
}

/// Builds `S` for arbitrary ranges (the case table or a deliberate variant).
pub fn build_special_basis(ctx: &GroupContext, ranges: BasisRanges) -> SpecialBasis {
    let m = ctx.m();
    let (px1, px2) = (powers(&ctx.x1, ranges.i), powers(&ctx.x2, ranges.j));
    let (py1, py2) = (powers(&ctx.y1, ranges.k), powers(&ctx.y2, ranges.l));
    let mut omega = Vec::with_capacity(ranges.count());
    let mut monomials = Vec::with_capacity(ranges.count());
    for (i, a) in px1.iter().enumerate() {
        for (j, b) in px2.iter().enumerate() {
            let ab = a * b;
            for (k, c) in py1.iter().enumerate() {
                let abc = &ab * c;
                for (l, d) in py2.iter().enumerate() {
                    omega.push([i, j, k, l]);
                    monomials.push(&abc * d);
                }
            }
        }
    }
    let u = RingElement::monomial(m, 1, 0);
    let v = RingElement::monomial(m, 0, 1);
    let uv = RingElement::monomial(m, 1, 1);
    let size = 4 * monomials.len();
    let mut echelon = Echelon::new(m * m, size);
    let mut dependency = None;
    'outer: for (w, xw) in monomials.iter().enumerate() {
        for (c, elem) in [xw.clone(), xw * &u, xw * &v, xw * &uv]
            .into_iter()
            .enumerate()
        {
            let mut row = echelon.blank();
            row[..elem.words().len()].copy_from_slice(elem.words());
            bits::flip_bit(&mut row[echelon.main_words()..], 4 * w + c);
            if let Some(dep) = echelon.insert(row) {
                dependency = Some(bits::ones(&dep[echelon.main_words()..]).collect());
                break 'outer;
            }
        }
    }
    SpecialBasis {
        group: ctx.spec.id,
        ranges,
        omega,
        monomials,
        m,
        echelon,
        dependency,
    }
}

/// Full rank `4^{(n+1)s}` of the special set.
pub fn check_special_basis(basis: &SpecialBasis) -> CheckResult {
    let dim = basis.m * basis.m;
    let name = "special-basis";
    if basis.size() != dim {
        return CheckResult::fail(
            name,
            format!("|S| = {} but the ring has dimension {dim}", basis.size()),
            None,
        );
    }
    match basis.dependency() {
        None => CheckResult::pass(name, format!("|S| = {dim}, rank {dim}")),
        Some(dep) => CheckResult::fail(
            name,
            format!(
                "rank deficient: a dependency among {} elements of S was found after rank {}",
                dep.len(),
                basis.rank()
            ),
            Some(
                dep.iter()
                    .map(|&i| basis.describe(i))
                    .collect::<Vec<_>>()
                    .join(" + "),
            ),
        ),
    }
}

/// Coordinates `g = f0 + f1 u + f2 v + f3 uv`, each `fc` in the `x^w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `coeffs[c][w]` is the coefficient of `x^w` in `f_c`.
    pub coeffs: [Vec<bool>; 4],
    /// `f_c` as ring elements.
    pub f: [RingElement; 4],
}

impl Decomposition {
    pub fn reassemble(&self) -> RingElement {
        let m = self.f[0].m();
        let mut g = self.f[0].clone();
        g += &(&self.f[1] * &RingElement::monomial(m, 1, 0));
        g += &(&self.f[2] * &RingElement::monomial(m, 0, 1));
        g += &(&self.f[3] * &RingElement::monomial(m, 1, 1));
        g
    }
}

/// Unique coordinates of `g` in a verified special basis.
pub fn decompose_in_special_basis(g: &RingElement, basis: &SpecialBasis) -> Result<Decomposition> {
    if !basis.is_verified() {
        return Err(Error::BasisNotVerified(basis.group.to_string()));
    }
    if g.m() != basis.m {
        return Err(Error::ParamsMismatch {
            left: basis.m,
            right: g.m(),
        });
    }
    let mut row = basis.echelon.blank();
    row[..g.words().len()].copy_from_slice(g.words());
    basis.echelon.reduce(&mut row);
    let tracking = &row[basis.echelon.main_words()..];
    let n = basis.omega.len();
    let mut coeffs: [Vec<bool>; 4] = std::array::from_fn(|_| vec![false; n]);
    let mut f: [RingElement; 4] = std::array::from_fn(|_| RingElement::zero(basis.m));
    for idx in bits::ones(tracking) {
        let (w, c) = (idx / 4, idx % 4);
        coeffs[c][w] = true;
        f[c] += &basis.monomials[w];
    }
    Ok(Decomposition { coeffs, f })
}

fn criterion_holds(ctx: &GroupContext, d: &Decomposition) -> bool {
    let f3x = &d.f[3] * &ctx.x1;
    let f3y = &d.f[3] * &ctx.y1;
    let pair = &(&d.f[1] * &ctx.x1) + &(&d.f[2] * &ctx.y1);
    f3x.is_zero() && f3y.is_zero() && pair.is_zero()
}

/// `C = {g : f3 x1 = f3 y1 = 0, f1 x1 = f2 y1}`, built blockwise.
pub fn criterion_subspace(ctx: &GroupContext, basis: &SpecialBasis) -> Result<Subspace> {
    if !basis.is_verified() {
        return Err(Error::BasisNotVerified(basis.group.to_string()));
    }
    let m = ctx.m();
    let dim = m * m;
    let n = basis.monomials.len();
    let u = RingElement::monomial(m, 1, 0);
    let v = RingElement::monomial(m, 0, 1);
    let uv = RingElement::monomial(m, 1, 1);
    let mut space = Subspace::span(m, basis.monomials.iter());

    // (f1, f2) with f1 x1 + f2 y1 = 0
    let mut pairs = Echelon::new(dim, 2 * n);
    for (w, xw) in basis.monomials.iter().enumerate() {
        for (side, factor) in [&ctx.x1, &ctx.y1].into_iter().enumerate() {
            let img = xw * factor;
            let mut row = pairs.blank();
            row[..img.words().len()].copy_from_slice(img.words());
            bits::flip_bit(&mut row[pairs.main_words()..], side * n + w);
            if let Some(dep) = pairs.insert(row) {
                let mut g = RingElement::zero(m);
                for idx in bits::ones(&dep[pairs.main_words()..]) {
                    let coset = if idx < n { &u } else { &v };
                    g += &(&basis.monomials[idx % n] * coset);
                }
                space.insert(&g);
            }
        }
    }

    // f3 with f3 x1 = f3 y1 = 0
    let words = bits::words_for(dim);
    let mut singles = Echelon::new(2 * words * 64, n);
    for (w, xw) in basis.monomials.iter().enumerate() {
        let mut row = singles.blank();
        row[..words].copy_from_slice((xw * &ctx.x1).words());
        row[words..2 * words].copy_from_slice((xw * &ctx.y1).words());
        bits::flip_bit(&mut row[singles.main_words()..], w);
        if let Some(dep) = singles.insert(row) {
            let mut g = RingElement::zero(m);
            for idx in bits::ones(&dep[singles.main_words()..]) {
                g += &basis.monomials[idx];
            }
            space.insert(&(&g * &uv));
        }
    }
    Ok(space)
}

/// `C = Ker(1+t)`, plus a pointwise comparison on random samples, half of
/// them drawn from `Ker(1+t)`.
pub fn check_invariance_criterion(
    ctx: &GroupContext,
    basis: &SpecialBasis,
    samples: usize,
    seed: u64,
) -> CheckResult {
    let name = "invariance-criterion";
    let c = match criterion_subspace(ctx, basis) {
        Ok(c) => c,
        Err(e) => return CheckResult::fail(name, e.to_string(), None),
    };
    if let Some(w) = c.first_outside(&ctx.ker) {
        return CheckResult::fail(
            name,
            "an element satisfying the criterion is not invariant",
            Some(w.to_canonical_string()),
        );
    }
    if let Some(w) = ctx.ker.first_outside(&c) {
        return CheckResult::fail(
            name,
            "an invariant element violates the criterion",
            Some(w.to_canonical_string()),
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x4242));
    let ker_basis = ctx.ker.basis();
    for t in 0..samples {
        let g = if t % 2 == 0 {
            random_combination(ctx.m(), &ker_basis, &mut rng)
        } else {
            RingElement::random(ctx.m(), &mut rng)
        };
        let d = decompose_in_special_basis(&g, basis).expect("basis verified above");
        if d.reassemble() != g || criterion_holds(ctx, &d) != ctx.inv.is_invariant(&g) {
            return CheckResult::fail(
                name,
                "criterion and invariance disagree pointwise",
                Some(g.to_canonical_string()),
            );
        }
    }
    CheckResult::pass(
        name,
        format!(
            "C = Ker(1+t), dimension {}; {samples} random samples agree",
            c.dim()
        ),
    )
}
