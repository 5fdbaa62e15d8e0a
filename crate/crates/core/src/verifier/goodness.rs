//! Goodness at the level of `K(s)^*(BH)`: every invariant lies in
//! `Im(1+t)` plus the span of products of pulled-back Euler classes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{CheckResult, GroupContext};
use crate::error::{Error, Result};
use crate::group::GroupId;
use crate::involution::{euler_pullback, formal_group_for};
use crate::linalg::{closure_over, multiplicative_closure};
use crate::ring::{substitute, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GoodMode {
    /// Euler classes of all induced plane bundles and fixed line bundles.
    Auto,
    /// The generator lists written out for the six hard-case groups.
    Paper,
}

impl fmt::Display for GoodMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoodMode::Auto => "auto",
            GoodMode::Paper => "paper",
        })
    }
}

impl FromStr for GoodMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auto" => Ok(GoodMode::Auto),
            "paper" => Ok(GoodMode::Paper),
            other => Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
        }
    }
}

/// A generator with a label describing where it comes from.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorInfo {
    pub label: String,
    /// Character exponents `(a, b)` of `lambda^a nu^b` when applicable.
    pub character: Option<(u64, u64)>,
    #[serde(serialize_with = "serialize_element")]
    pub element: RingElement,
}

fn serialize_element<S: serde::Serializer>(
    e: &RingElement,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_canonical_string())
}

impl GeneratorInfo {
    fn new(label: impl Into<String>, character: Option<(u64, u64)>, element: RingElement) -> Self {
        Self {
            label: label.into(),
            character,
            element,
        }
    }
}

/// Paper-mode list when one exists; `None` for groups outside the six.
fn paper_generators(ctx: &GroupContext) -> Option<Vec<GeneratorInfo>> {
    let p = &ctx.params;
    let (s, ns) = (p.s(), p.n() * p.s());
    let u = p.u();
    let v = p.v();
    let mut out = vec![
        GeneratorInfo::new("x2", None, ctx.x2.clone()),
        GeneratorInfo::new("y2", None, ctx.y2.clone()),
    ];
    let big_u = u.pow2k(ns);
    let big_v = v.pow2k(ns);
    let f_uv = || {
        let fg = formal_group_for(p).expect("ring already built");
        substitute(fg.law(), &big_u, &big_v).expect("nilpotent arguments")
    };
    let half = 1u64 << p.n();
    match ctx.spec.id.index() {
        3 => {
            out.push(GeneratorInfo::new("u", Some((1, 0)), u.clone()));
            out.push(GeneratorInfo::new("v^(2^s)", Some((0, 2)), v.pow2k(s)));
        }
        4 | 9 => {
            out.push(GeneratorInfo::new("u^(2^s)", Some((2, 0)), u.pow2k(s)));
            out.push(GeneratorInfo::new("v^(2^s)", Some((0, 2)), v.pow2k(s)));
        }
        7 => {
            out.push(GeneratorInfo::new(
                "u^(2^ns)",
                Some((half, 0)),
                big_u.clone(),
            ));
            out.push(GeneratorInfo::new(
                "v^(2^ns)",
                Some((0, half)),
                big_v.clone(),
            ));
        }
        8 => {
            out.push(GeneratorInfo::new(
                "u^(2^ns)",
                Some((half, 0)),
                big_u.clone(),
            ));
            out.push(GeneratorInfo::new(
                "F(u^(2^ns),v^(2^ns))",
                Some((half, half)),
                f_uv(),
            ));
        }
        11 => {
            out.push(GeneratorInfo::new(
                "v^(2^ns)",
                Some((0, half)),
                big_v.clone(),
            ));
            out.push(GeneratorInfo::new(
                "F(u^(2^ns),v^(2^ns))",
                Some((half, half)),
                f_uv(),
            ));
        }
        _ => return None,
    }
    Some(out)
}

/// Fixed line bundles first, then `e(rho) t(e(rho))` for every character.
fn auto_generators(ctx: &GroupContext) -> Vec<GeneratorInfo> {
    let p = &ctx.params;
    let fg = formal_group_for(p).expect("ring already built");
    let modulus = p.modulus();
    let mut fixed = Vec::new();
    let mut planes = Vec::new();
    for a in 0..modulus {
        for b in 0..modulus {
            if (a, b) == (0, 0) {
                continue;
            }
            let e = euler_pullback(&fg, p, a, b).expect("valid residues");
            if ctx.spec.act_on_character(a, b) == (a, b) {
                fixed.push(GeneratorInfo::new(
                    format!("e(l^{a} n^{b})"),
                    Some((a, b)),
                    e.clone(),
                ));
            }
            let te = ctx.inv.apply(&e);
            planes.push(GeneratorInfo::new(
                format!("e(l^{a} n^{b}) t(e(l^{a} n^{b}))"),
                Some((a, b)),
                &e * &te,
            ));
        }
    }
    fixed.extend(planes);
    fixed
}

/// Generators for `mode`; paper mode falls back to auto outside the six
/// hard-case groups. The flag reports whether a fallback happened.
pub fn good_generators(ctx: &GroupContext, mode: GoodMode) -> (Vec<GeneratorInfo>, bool) {
    match mode {
        GoodMode::Auto => (auto_generators(ctx), false),
        GoodMode::Paper => match paper_generators(ctx) {
            Some(g) => (g, false),
            None => (auto_generators(ctx), true),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodnessReport {
    pub group: GroupId,
    pub mode: GoodMode,
    pub fell_back_to_auto: bool,
    pub generators: Vec<GeneratorInfo>,
    pub dim_ker: usize,
    pub dim_im: usize,
    pub dim_good: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
    pub non_invariant_generator: Option<String>,
}

impl GoodnessReport {
    pub fn to_check(&self) -> CheckResult {
        let mut detail = format!(
            "mode {}{}: {} generators, dim Ker = {}, dim Im = {}, dim(Im + good span) = {}",
            self.mode,
            if self.fell_back_to_auto {
                " (fallback to auto)"
            } else {
                ""
            },
            self.generators.len(),
            self.dim_ker,
            self.dim_im,
            self.dim_good
        );
        if let Some(g) = &self.non_invariant_generator {
            detail.push_str(&format!("; generator {g} is not invariant"));
        }
        CheckResult {
            name: format!("goodness-{}", self.mode),
            status: if self.pass {
                super::Status::Pass
            } else {
                super::Status::Fail
            },
            detail,
            witness: self.counterexample.clone(),
        }
    }
}

/// `Ker(1+t) in Im(1+t) + closure(gens)`.
pub fn check_goodness(ctx: &GroupContext, mode: GoodMode) -> GoodnessReport {
    let (gens, fell_back) = good_generators(ctx, mode);
    check_goodness_with(ctx, mode, gens, fell_back)
}

/// As [`check_goodness`] with an explicit generator list.
pub fn check_goodness_with(
    ctx: &GroupContext,
    mode: GoodMode,
    generators: Vec<GeneratorInfo>,
    fell_back_to_auto: bool,
) -> GoodnessReport {
    let elems: Vec<RingElement> = generators.iter().map(|g| g.element.clone()).collect();
    let non_invariant = generators
        .iter()
        .find(|g| !ctx.inv.is_invariant(&g.element))
        .map(|g| g.label.clone());
    // the pruned closure needs Im(1+t) to absorb products with generators,
    // which holds for invariant generators
    let good = if non_invariant.is_none() {
        closure_over(&ctx.im, &elems)
    } else {
        multiplicative_closure(ctx.m(), &elems).sum(&ctx.im)
    };
    let counterexample = ctx.ker.first_outside(&good);
    GoodnessReport {
        group: ctx.spec.id,
        mode,
        fell_back_to_auto,
        generators,
        dim_ker: ctx.ker.dim(),
        dim_im: ctx.im.dim(),
        dim_good: good.dim(),
        pass: counterexample.is_none(),
        counterexample: counterexample.map(|e| e.to_canonical_string()),
        non_invariant_generator: non_invariant,
    }
}
