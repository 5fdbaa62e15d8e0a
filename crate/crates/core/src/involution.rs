//! The involution `t` on `K(s)^*(BH)` induced by conjugation with `c`.
//!
//! `t(u) = e(t(lambda))` and `t(v) = e(t(nu))`, where the Euler class of
//! `lambda^a nu^b` is `F([a](u), [b](v))`; `t` is extended multiplicatively.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fgl::FormalGroup;
use crate::group::GroupSpec;
use crate::linalg::{kernel_and_image, BitMatrix, Subspace};
use crate::ring::{substitute, RingElement, RingParams};
use crate::series::UniPoly;

/// The Honda law truncated at `M`, shared between groups with equal `(s, M)`.
pub fn formal_group_for(params: &RingParams) -> Result<Arc<FormalGroup>> {
    use std::sync::{Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<FormalGroup>>>> = OnceLock::new();
    let key = (params.s(), params.m());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(fg) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(fg.clone());
    }
    let fg = Arc::new(FormalGroup::honda(params.s(), params.m())?);
    cache
        .lock()
        .expect("cache poisoned")
        .insert(key, fg.clone());
    Ok(fg)
}

fn univariate_in(m: usize, p: &UniPoly, var_u: bool) -> RingElement {
    RingElement::from_monomials(
        m,
        p.exponents()
            .into_iter()
            .map(|k| if var_u { (k, 0) } else { (0, k) }),
    )
}

/// `e(lambda^a nu^b) = F([a](u), [b](v))` for residues mod `2^{n+1}`.
pub fn euler_pullback(
    fg: &FormalGroup,
    params: &RingParams,
    a: u64,
    b: u64,
) -> Result<RingElement> {
    let m = params.m();
    if fg.bound() < m {
        return Err(Error::ParamsMismatch {
            left: m,
            right: fg.bound(),
        });
    }
    let modulus = params.modulus();
    let x = univariate_in(m, &fg.m_series_mod(a, modulus), true);
    let y = univariate_in(m, &fg.m_series_mod(b, modulus), false);
    substitute(fg.law(), &x, &y)
}

/// `t` as a ring endomorphism, with its operator matrix.
#[derive(Clone, Debug)]
pub struct Involution {
    spec: GroupSpec,
    params: RingParams,
    image_u: RingElement,
    image_v: RingElement,
    matrix: BitMatrix,
}

/// Builds `t` for `spec` with the Honda law and checks `t^2 = id` on the
/// whole monomial basis.
pub fn build_involution(spec: &GroupSpec, params: &RingParams) -> Result<Involution> {
    let fg = formal_group_for(params)?;
    build_involution_with(spec, params, &fg)
}

/// As [`build_involution`] with an explicit (possibly corrupted) law.
pub fn build_involution_with(
    spec: &GroupSpec,
    params: &RingParams,
    fg: &FormalGroup,
) -> Result<Involution> {
    if spec.n != params.n() {
        return Err(Error::InvalidParameter(format!(
            "group has n = {}, ring has n = {}",
            spec.n,
            params.n()
        )));
    }
    let ((i, k), (j, l)) = spec.character_action();
    let image_u = euler_pullback(fg, params, i, k)?;
    let image_v = euler_pullback(fg, params, j, l)?;
    let inv = Involution::from_images(*spec, *params, image_u, image_v);
    if let Some(e) = inv.square_defect() {
        return Err(Error::NotAnInvolution {
            group: spec.id.to_string(),
            witness: e.to_canonical_string(),
        });
    }
    Ok(inv)
}

impl Involution {
    /// The ring endomorphism with the given images of `u` and `v`; no
    /// involution check.
    pub fn from_images(
        spec: GroupSpec,
        params: RingParams,
        image_u: RingElement,
        image_v: RingElement,
    ) -> Self {
        let m = params.m();
        let dim = m * m;
        let mut matrix = BitMatrix::zero(dim, dim);
        let mut pu = RingElement::one(m);
        for a in 0..m {
            let mut prod = pu.clone();
            for b in 0..m {
                matrix.row_mut(a * m + b).copy_from_slice(prod.words());
                if b + 1 < m {
                    prod = &prod * &image_v;
                }
            }
            pu = &pu * &image_u;
        }
        Self {
            spec,
            params,
            image_u,
            image_v,
            matrix,
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn image_u(&self) -> &RingElement {
        &self.image_u
    }

    pub fn image_v(&self) -> &RingElement {
        &self.image_v
    }

    /// Row `e` is `t` of the `e`-th monomial.
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn apply(&self, g: &RingElement) -> RingElement {
        let w = self.matrix.apply_left(g.words());
        RingElement::from_words(self.params.m(), w).expect("same truncation")
    }

    /// `(1 + t)(g)`.
    pub fn trace(&self, g: &RingElement) -> RingElement {
        g + &self.apply(g)
    }

    pub fn is_invariant(&self, g: &RingElement) -> bool {
        self.trace(g).is_zero()
    }

    /// First monomial `e` with `t(t(e)) != e`.
    pub fn square_defect(&self) -> Option<RingElement> {
        let m = self.params.m();
        (0..m * m).find_map(|e| {
            let back = self.matrix.apply_left(self.matrix.row(e));
            let mono = self.params.basis_element(e);
            (back != mono.words()).then_some(mono)
        })
    }

    /// Random pair `(g, h)` with `t(gh) != t(g) t(h)`, if one is found.
    pub fn multiplicativity_defect<R: Rng + ?Sized>(
        &self,
        samples: usize,
        rng: &mut R,
    ) -> Option<(RingElement, RingElement)> {
        let m = self.params.m();
        (0..samples).find_map(|_| {
            let g = RingElement::random(m, rng);
            let h = RingElement::random(m, rng);
            let lhs = self.apply(&(&g * &h));
            let rhs = &self.apply(&g) * &self.apply(&h);
            (lhs != rhs).then_some((g, h))
        })
    }

    /// The matrix of `1 + t`.
    pub fn trace_matrix(&self) -> BitMatrix {
        self.matrix.add(&BitMatrix::identity(self.matrix.rows()))
    }

    /// `(Ker(1+t), Im(1+t))`.
    pub fn kernel_and_image(&self) -> (Subspace, Subspace) {
        kernel_and_image(self.params.m(), &self.trace_matrix())
            .expect("square operator on the ring")
    }

    /// `x1 = u + t(u)`.
    pub fn xbar1(&self) -> RingElement {
        &self.params.u() + &self.image_u
    }

    /// `x2 = u t(u)`.
    pub fn xbar2(&self) -> RingElement {
        &self.params.u() * &self.image_u
    }

    /// `y1 = v + t(v)`.
    pub fn ybar1(&self) -> RingElement {
        &self.params.v() + &self.image_v
    }

    /// `y2 = v t(v)`.
    pub fn ybar2(&self) -> RingElement {
        &self.params.v() * &self.image_v
    }
}
