//! Per-group verification: every check is an exact, decidable statement
//! about the involution `t` on `F2[u,v]/(u^M, v^M)`.

mod basis;
mod chi;
mod congruence;
mod goodness;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fgl::FormalGroup;
use crate::group::{GroupId, GroupSpec};
use crate::involution::{build_involution, build_involution_with, Involution};
use crate::linalg::Subspace;
use crate::ring::{RingElement, RingParams};

pub use basis::{
    build_special_basis, check_invariance_criterion, check_special_basis, criterion_subspace,
    decompose_in_special_basis, special_ranges, BasisRanges, Decomposition, SpecialBasis,
};
pub use chi::{chi_cohomology, chi_formula, chi_reconcile, ChiValues};
pub use congruence::{check_congruences, check_tprime, tprime_elements, tprime_table_count};
pub use goodness::{
    check_goodness, check_goodness_with, good_generators, GeneratorInfo, GoodMode, GoodnessReport,
};

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        detail: impl Into<String>,
        witness: Option<String>,
    ) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            detail: detail.into(),
            witness,
        }
    }

    pub fn from_bool(
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        witness: impl FnOnce() -> Option<String>,
    ) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, witness())
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Everything derived from one group at one parameter set.
#[derive(Clone, Debug)]
pub struct GroupContext {
    pub spec: GroupSpec,
    pub params: RingParams,
    pub inv: Involution,
    pub x1: RingElement,
    pub x2: RingElement,
    pub y1: RingElement,
    pub y2: RingElement,
    pub ker: Subspace,
    pub im: Subspace,
}

impl GroupContext {
    pub fn new(spec: &GroupSpec, params: &RingParams) -> Result<Self> {
        Ok(Self::from_involution(build_involution(spec, params)?))
    }

    pub fn with_formal_group(
        spec: &GroupSpec,
        params: &RingParams,
        fg: &FormalGroup,
    ) -> Result<Self> {
        Ok(Self::from_involution(build_involution_with(
            spec, params, fg,
        )?))
    }

    pub fn from_involution(inv: Involution) -> Self {
        let (ker, im) = inv.kernel_and_image();
        Self {
            spec: *inv.spec(),
            params: *inv.params(),
            x1: inv.xbar1(),
            x2: inv.xbar2(),
            y1: inv.ybar1(),
            y2: inv.ybar2(),
            inv,
            ker,
            im,
        }
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    /// `dim Ker(1+t) - dim Im(1+t)`.
    pub fn trivial_rank(&self) -> usize {
        self.ker.dim() - self.im.dim()
    }
}

/// Selectable check families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Involution,
    Basis,
    Criterion,
    Congruences,
    Tprime,
    Goodness,
    Chi,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        CheckKind::Involution,
        CheckKind::Basis,
        CheckKind::Criterion,
        CheckKind::Congruences,
        CheckKind::Tprime,
        CheckKind::Goodness,
        CheckKind::Chi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Involution => "involution",
            CheckKind::Basis => "basis",
            CheckKind::Criterion => "criterion",
            CheckKind::Congruences => "congruences",
            CheckKind::Tprime => "tprime",
            CheckKind::Goodness => "goodness",
            CheckKind::Chi => "chi",
        }
    }

    /// Families that only apply to the six hard-case groups.
    pub fn hard_case_only(self) -> bool {
        matches!(
            self,
            CheckKind::Basis | CheckKind::Criterion | CheckKind::Congruences | CheckKind::Tprime
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown check `{s}`")))
    }
}

/// Knobs for a verification run.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub checks: BTreeSet<CheckKind>,
    pub mode: GoodMode,
    pub seed: u64,
    /// Random samples for the pointwise checks.
    pub samples: usize,
    pub bruteforce: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            checks: CheckKind::ALL.into_iter().collect(),
            mode: GoodMode::Auto,
            seed: DEFAULT_SEED,
            samples: 1000,
            bruteforce: true,
        }
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Report for one group, in the JSON report shape.
#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub params: RingParams,
    pub group: GroupId,
    pub checks: Vec<CheckResult>,
    pub chi: Option<ChiValues>,
}

impl GroupReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Reports for a whole parameter set.
#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub params: RingParams,
    pub mode: GoodMode,
    pub seed: u64,
    pub groups: Vec<GroupReport>,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.groups.iter().all(GroupReport::pass)
    }

    pub fn passing_groups(&self) -> usize {
        self.groups.iter().filter(|g| g.pass()).count()
    }
}

/// Involution sanity: `t^2 = id` (checked on construction), `t(1) = 1`,
/// multiplicativity and the trace-module identity on random samples,
/// and `Im(1+t) in Ker(1+t)`.
pub fn check_involution(ctx: &GroupContext, samples: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = ctx.params.one();
    let mut out = vec![CheckResult::from_bool(
        "involution",
        ctx.inv.apply(&one) == one && ctx.inv.square_defect().is_none(),
        format!(
            "t^2 = id on all {} monomials and t(1) = 1",
            ctx.params.dim()
        ),
        || None,
    )];
    let defect = ctx.inv.multiplicativity_defect(samples, &mut rng);
    out.push(CheckResult::from_bool(
        "involution-multiplicative",
        defect.is_none(),
        format!("t(gh) = t(g) t(h) on {samples} random pairs"),
        || {
            defect
                .as_ref()
                .map(|(g, h)| format!("{} ; {}", g.to_canonical_string(), h.to_canonical_string()))
        },
    ));
    let outside = ctx.im.first_outside(&ctx.ker);
    out.push(CheckResult::from_bool(
        "trace-image-in-kernel",
        outside.is_none(),
        format!("dim Ker = {}, dim Im = {}", ctx.ker.dim(), ctx.im.dim()),
        || outside.map(|e| e.to_canonical_string()),
    ));
    out.push(check_trace_module(ctx, samples, &mut rng));
    out
}

/// `g (1+t)(h) = (1+t)(g h)` for invariant `g`.
fn check_trace_module(ctx: &GroupContext, samples: usize, rng: &mut ChaCha8Rng) -> CheckResult {
    let ker_basis = ctx.ker.basis();
    let m = ctx.m();
    for _ in 0..samples {
        let g = random_combination(m, &ker_basis, rng);
        let h = RingElement::random(m, rng);
        if &g * &ctx.inv.trace(&h) != ctx.inv.trace(&(&g * &h)) {
            return CheckResult::fail(
                "trace-module",
                "invariant times a trace is not a trace",
                Some(format!(
                    "{} ; {}",
                    g.to_canonical_string(),
                    h.to_canonical_string()
                )),
            );
        }
    }
    CheckResult::pass(
        "trace-module",
        format!("g (1+t)(h) = (1+t)(gh) on {samples} samples with g invariant"),
    )
}

pub(crate) fn random_combination(
    m: usize,
    basis: &[RingElement],
    rng: &mut ChaCha8Rng,
) -> RingElement {
    use rand::Rng;
    let mut acc = RingElement::zero(m);
    for b in basis {
        if rng.gen::<bool>() {
            acc += b;
        }
    }
    acc
}

/// Runs the selected checks for one group.
pub fn verify_group(
    spec: &GroupSpec,
    params: &RingParams,
    opts: &VerifyOptions,
) -> Result<GroupReport> {
    let ctx = match GroupContext::new(spec, params) {
        Ok(ctx) => ctx,
        Err(Error::NotAnInvolution { group, witness }) => {
            return Ok(GroupReport {
                params: *params,
                group: spec.id,
                checks: vec![CheckResult::fail(
                    "involution",
                    format!("t(t(e)) != e for {group}"),
                    Some(witness),
                )],
                chi: None,
            });
        }
        Err(e) => return Err(e),
    };
    verify_context(&ctx, opts)
}

/// As [`verify_group`] on a prebuilt context.
pub fn verify_context(ctx: &GroupContext, opts: &VerifyOptions) -> Result<GroupReport> {
    let hard = ctx.spec.id.is_hard_case();
    let seed = opts.seed ^ u64::from(ctx.spec.id.index());
    let mut checks = Vec::new();
    let mut chi = None;
    let mut basis = None;
    for &kind in &opts.checks {
        if kind.hard_case_only() && !hard {
            continue;
        }
        match kind {
            CheckKind::Involution => checks.extend(check_involution(ctx, opts.samples, seed)),
            CheckKind::Basis => {
                let b = build_special_basis(ctx, special_ranges(&ctx.spec, &ctx.params)?);
                checks.push(check_special_basis(&b));
                basis = Some(b);
            }
            CheckKind::Criterion => {
                let b = match basis.take() {
                    Some(b) => b,
                    None => build_special_basis(ctx, special_ranges(&ctx.spec, &ctx.params)?),
                };
                checks.push(check_invariance_criterion(ctx, &b, opts.samples, seed));
                basis = Some(b);
            }
            CheckKind::Congruences => checks.extend(check_congruences(ctx)),
            CheckKind::Tprime => checks.push(check_tprime(ctx)),
            CheckKind::Goodness => {
                let report = check_goodness(ctx, opts.mode);
                checks.push(report.to_check());
            }
            CheckKind::Chi => {
                let values = chi_reconcile(ctx, opts.bruteforce)?;
                checks.push(values.to_check());
                chi = Some(values);
            }
        }
    }
    Ok(GroupReport {
        params: ctx.params,
        group: ctx.spec.id,
        checks,
        chi,
    })
}

/// All 17 groups at `(s, n)`.
pub fn verify_all(s: u32, n: u32, mode: GoodMode) -> Result<TheoremReport> {
    let params = crate::ring::make_ring(s, n)?;
    let opts = VerifyOptions {
        mode,
        ..VerifyOptions::default()
    };
    verify_groups(&params, &GroupId::all().collect::<Vec<_>>(), &opts)
}

pub fn verify_groups(
    params: &RingParams,
    groups: &[GroupId],
    opts: &VerifyOptions,
) -> Result<TheoremReport> {
    let mut reports = Vec::with_capacity(groups.len());
    for &id in groups {
        let spec = GroupSpec::from_catalog(id, params.n())?;
        reports.push(verify_group(&spec, params, opts)?);
    }
    Ok(TheoremReport {
        params: *params,
        mode: opts.mode,
        seed: opts.seed,
        groups: reports,
    })
}
