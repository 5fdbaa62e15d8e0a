//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Known failures are listed in `EXPECTED` with the reason. They print as
//! `FAIL (documented)` and do not fail the process. An undocumented failure,
//! or a documented one that no longer occurs, exits nonzero.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kgood_core::fgl::{approximation_bound, check_fgl_approximations, check_law, honda_fgl};
use kgood_core::group::{GroupId, GroupSpec};
use kgood_core::verifier::{
    build_special_basis, check_goodness, check_goodness_with, check_invariance_criterion,
    check_involution, check_special_basis, check_tprime, chi_reconcile, good_generators,
    special_ranges, tprime_elements, verify_group, GoodMode, GroupContext, VerifyOptions,
    DEFAULT_SEED,
};
use kgood_core::{make_ring, Error, RingParams};

const ALL_PARAMS: [(u32, u32); 3] = [(2, 1), (2, 2), (3, 1)];
const STRUCTURE_PARAMS: [(u32, u32); 2] = [(2, 1), (2, 2)];
const HARD: [u8; 6] = [3, 4, 7, 8, 9, 11];
const SAMPLES: usize = 1000;

/// `(criterion, s, n, group, reason)`.
///
/// At n = 1 we have 2^n - 1 = 1 and 2^n + 1 = -1 mod 4, so several
/// presentations collapse onto others: G6 and G13 act trivially on
/// characters, G8 coincides with G3, G12 and G17 act like G16. The closed
/// form is then not the count of the collapsed group; cohomology and
/// brute force agree with each other in every case.
const EXPECTED: &[(&str, u32, u32, u8, &str)] = &[
    ("3", 2, 1, 6, "G6 = G1 at n = 1"),
    ("3", 2, 1, 8, "G8 = G3 at n = 1"),
    ("3", 2, 1, 12, "G12 collapses at n = 1"),
    ("3", 2, 1, 13, "G13 = G1 at n = 1"),
    ("3", 2, 1, 17, "G17 collapses at n = 1"),
    ("3", 3, 1, 6, "G6 = G1 at n = 1"),
    ("3", 3, 1, 8, "G8 = G3 at n = 1"),
    ("3", 3, 1, 12, "G12 collapses at n = 1"),
    ("3", 3, 1, 13, "G13 = G1 at n = 1"),
    ("3", 3, 1, 17, "G17 collapses at n = 1"),
    (
        "4",
        2,
        1,
        8,
        "G8 = G3 at n = 1, so x1 = 0 lies in the special set",
    ),
    (
        "5",
        2,
        1,
        8,
        "criterion needs the special basis, which is degenerate",
    ),
    ("6", 2, 1, 8, "T' for G8 meets Im(1+t) when t(u) = u"),
    ("7p", 2, 1, 8, "short list for G8 misses u when t(u) = u"),
    ("S", 2, 1, 8, "G8 = G3 at n = 1"),
    (
        "S",
        2,
        1,
        11,
        "derivation uses a class that vanishes at n = 1",
    ),
];

#[derive(Default)]
struct Criterion {
    failures: Vec<(u32, u32, u8, String)>,
    notes: Vec<String>,
    elapsed: Duration,
}

impl Criterion {
    fn fail(&mut self, s: u32, n: u32, group: u8, detail: impl Into<String>) {
        self.failures.push((s, n, group, detail.into()));
    }
}

fn gid(k: u8) -> GroupId {
    GroupId::new(k).expect("valid group index")
}

fn contexts(params: &RingParams) -> Vec<GroupContext> {
    GroupId::all()
        .map(|id| {
            let spec = GroupSpec::from_catalog(id, params.n()).expect("catalog");
            GroupContext::new(&spec, params).expect("involution builds")
        })
        .collect()
}

fn criterion1() -> Criterion {
    let mut c = Criterion::default();
    for s in [2, 3] {
        match check_fgl_approximations(s) {
            Ok(r) => {
                for check in r.checks.iter().filter(|k| !k.pass) {
                    c.fail(
                        s,
                        0,
                        0,
                        format!("{} witness {:?}", check.name, check.witness),
                    );
                }
            }
            Err(e) => c.fail(s, 0, 0, e.to_string()),
        }
    }
    c
}

fn criterion2(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> Criterion {
    let mut c = Criterion::default();
    for (&(s, n), list) in ctxs {
        for ctx in list {
            let seed = DEFAULT_SEED ^ u64::from(ctx.spec.id.index());
            for r in check_involution(ctx, SAMPLES, seed) {
                if !r.passed() {
                    c.fail(
                        s,
                        n,
                        ctx.spec.id.index(),
                        format!("{}: {}", r.name, r.detail),
                    );
                }
            }
        }
    }
    c
}

fn criterion3(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> Criterion {
    let mut c = Criterion::default();
    for (&(s, n), list) in ctxs {
        for ctx in list {
            let k = ctx.spec.id.index();
            match chi_reconcile(ctx, true) {
                Ok(v) => {
                    if v.bruteforce.is_none() {
                        c.fail(s, n, k, "brute force skipped");
                    } else if !v.agree() {
                        c.fail(s, n, k, v.to_check().detail);
                    }
                    let spot = match (k, s, n) {
                        (1, 2, 1) => Some(1024),
                        (7, 2, 2) => Some(2104),
                        (3, 2, 1) => Some(352),
                        _ => None,
                    };
                    if let Some(want) = spot {
                        if v.formula != want || v.cohomology != want || v.bruteforce != Some(want) {
                            c.fail(s, n, k, format!("spot value {want} not reproduced"));
                        }
                    }
                }
                Err(e) => c.fail(s, n, k, e.to_string()),
            }
        }
    }
    c
}

fn hard_contexts<'a>(
    ctxs: &'a BTreeMap<(u32, u32), Vec<GroupContext>>,
) -> impl Iterator<Item = (u32, u32, &'a GroupContext)> {
    STRUCTURE_PARAMS.into_iter().flat_map(move |(s, n)| {
        ctxs[&(s, n)]
            .iter()
            .filter(|ctx| HARD.contains(&ctx.spec.id.index()))
            .map(move |ctx| (s, n, ctx))
    })
}

fn criteria4_5(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> (Criterion, Criterion) {
    let (mut c4, mut c5) = (Criterion::default(), Criterion::default());
    for (s, n, ctx) in hard_contexts(ctxs) {
        let k = ctx.spec.id.index();
        let started = Instant::now();
        let basis = match special_ranges(&ctx.spec, &ctx.params) {
            Ok(r) => build_special_basis(ctx, r),
            Err(e) => {
                c4.fail(s, n, k, e.to_string());
                continue;
            }
        };
        let full = 1usize << (2 * (n + 1) * s);
        if basis.size() != full || basis.rank() != full || !basis.is_verified() {
            let r = check_special_basis(&basis);
            c4.fail(s, n, k, format!("{}; witness {:?}", r.detail, r.witness));
        }
        c4.elapsed += started.elapsed();
        let started = Instant::now();
        let seed = DEFAULT_SEED ^ u64::from(k);
        let r = check_invariance_criterion(ctx, &basis, SAMPLES, seed);
        if !r.passed() {
            c5.fail(s, n, k, r.detail);
        }
        c5.elapsed += started.elapsed();
    }
    (c4, c5)
}

fn tprime_count_from_table(k: u8, s: u32, n: u32) -> usize {
    match k {
        3 => 1 << ((2 * n + 1) * s),
        4 | 9 => 1 << (2 * n * s),
        7 | 8 | 11 => 1 << (2 * s),
        _ => unreachable!(),
    }
}

fn criterion6(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> Criterion {
    let mut c = Criterion::default();
    for (s, n, ctx) in hard_contexts(ctxs) {
        let k = ctx.spec.id.index();
        let r = check_tprime(ctx);
        if !r.passed() {
            c.fail(s, n, k, r.detail);
        }
        let got = tprime_elements(ctx).map(|t| t.len());
        let want = tprime_count_from_table(k, s, n);
        if got != Some(want) {
            c.fail(s, n, k, format!("|T'| = {got:?}, table {want}"));
        }
        if ctx.trivial_rank() != want {
            c.fail(
                s,
                n,
                k,
                format!("x = {} but |T'| = {want}", ctx.trivial_rank()),
            );
        }
    }
    c
}

fn criterion7(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> (Criterion, Criterion) {
    let (mut auto, mut paper) = (Criterion::default(), Criterion::default());
    for (s, n) in STRUCTURE_PARAMS {
        for ctx in &ctxs[&(s, n)] {
            let k = ctx.spec.id.index();
            let started = Instant::now();
            let r = check_goodness(ctx, GoodMode::Auto);
            if !r.pass {
                auto.fail(s, n, k, format!("counterexample {:?}", r.counterexample));
            }
            auto.elapsed += started.elapsed();
            if !HARD.contains(&k) {
                continue;
            }
            let started = Instant::now();
            let r = check_goodness(ctx, GoodMode::Paper);
            let verdict = if r.pass { "pass" } else { "fail" };
            if k == 4 || k == 9 {
                paper
                    .notes
                    .push(format!("G{k} ({s},{n}) paper mode {verdict}"));
            } else if !r.pass {
                paper.fail(s, n, k, format!("counterexample {:?}", r.counterexample));
            }
            paper.elapsed += started.elapsed();
        }
    }
    (auto, paper)
}

fn supplementary_congruences(ctxs: &BTreeMap<(u32, u32), Vec<GroupContext>>) -> Criterion {
    let mut c = Criterion::default();
    for (s, n, ctx) in hard_contexts(ctxs) {
        let k = ctx.spec.id.index();
        for r in kgood_core::verifier::check_congruences(ctx) {
            if r.name.starts_with("congruence/") && !r.passed() {
                c.fail(s, n, k, r.name);
            }
        }
    }
    c
}

fn criterion8() -> Criterion {
    let mut c = Criterion::default();

    // one flipped coefficient of the law at height 2
    let s = 2;
    let bound = approximation_bound(s);
    match honda_fgl(s, bound, bound) {
        Ok(mut law) => {
            law.flip(2, 2);
            match check_law(s, &law) {
                Ok(r) if r.pass() => c.fail(s, 0, 0, "corrupted law passes"),
                Ok(r) => {
                    let witnessed = r.checks.iter().any(|k| !k.pass && k.witness.is_some());
                    if !witnessed {
                        c.fail(s, 0, 0, "corrupted law fails without a witness");
                    }
                    let names: Vec<_> = r
                        .checks
                        .iter()
                        .filter(|k| !k.pass)
                        .map(|k| k.name.clone())
                        .collect();
                    c.notes.push(format!("law: {}", names.join(", ")));
                }
                Err(e) => c.fail(s, 0, 0, e.to_string()),
            }
        }
        Err(e) => c.fail(s, 0, 0, e.to_string()),
    }

    // one wrong exponent in the G3 presentation
    let params = make_ring(2, 1).expect("ring");
    let good = GroupSpec::from_catalog(gid(3), 1).expect("catalog");
    let bad = GroupSpec::with_action(good.id, 1, good.i, (good.j + 1) % 4, good.k, good.l);
    match GroupContext::new(&bad, &params) {
        Err(Error::NotAnInvolution { witness, .. }) => {
            c.notes.push(format!("catalog: t^2 != id at {witness}"));
        }
        Err(e) => c.fail(2, 1, 3, format!("unexpected error {e}")),
        Ok(_) => c.fail(2, 1, 3, "corrupted action accepted"),
    }
    let report = verify_group(&bad, &params, &VerifyOptions::default()).expect("report");
    if report.pass() || report.failures().all(|f| f.witness.is_none()) {
        c.fail(
            2,
            1,
            3,
            "verify_group does not report the corrupted action with a witness",
        );
    }

    // G3 paper list without u
    let ctx = GroupContext::new(&good, &params).expect("context");
    let (gens, _) = good_generators(&ctx, GoodMode::Paper);
    let pruned: Vec<_> = gens.into_iter().filter(|g| g.label != "u").collect();
    let r = check_goodness_with(&ctx, GoodMode::Paper, pruned, false);
    match r.counterexample {
        Some(w) if !r.pass => c.notes.push(format!("goodness: counterexample {w}")),
        _ => c.fail(2, 1, 3, "G3 without u still passes"),
    }
    c
}

fn timed(f: impl FnOnce() -> Criterion) -> Criterion {
    let started = Instant::now();
    let mut c = f();
    c.elapsed = started.elapsed();
    c
}

fn main() -> ExitCode {
    let mut lines: Vec<(&str, &str, Option<Duration>, Criterion)> = Vec::new();

    lines.push((
        "1",
        "FGL identities at s = 2, 3",
        Some(Duration::from_secs(10)),
        timed(criterion1),
    ));

    let build = Instant::now();
    let ctxs: BTreeMap<(u32, u32), Vec<GroupContext>> = ALL_PARAMS
        .into_iter()
        .map(|(s, n)| ((s, n), contexts(&make_ring(s, n).expect("ring"))))
        .collect();
    let build = build.elapsed();

    let mut c2 = timed(|| criterion2(&ctxs));
    c2.elapsed += build;
    lines.push((
        "2",
        "involutions, t^2 = id and multiplicative",
        Some(Duration::from_secs(60)),
        c2,
    ));
    lines.push((
        "3",
        "chi: formula = cohomology = brute force",
        Some(Duration::from_secs(300)),
        timed(|| criterion3(&ctxs)),
    ));
    let (c4, c5) = criteria4_5(&ctxs);
    lines.push(("4", "special sets have full rank", None, c4));
    lines.push(("5", "criterion subspace = Ker(1+t)", None, c5));
    lines.push((
        "6",
        "T' spans a complement of Im(1+t) in Ker(1+t)",
        None,
        timed(|| criterion6(&ctxs)),
    ));
    let (auto, paper) = criterion7(&ctxs);
    lines.push(("7", "goodness, auto mode, all 17 groups", None, auto));
    lines.push(("7p", "goodness, paper mode, G3 G7 G8 G11", None, paper));
    lines.push((
        "8",
        "negative controls fail with witnesses",
        None,
        timed(criterion8),
    ));
    lines.push((
        "S",
        "stated congruences, six groups",
        None,
        timed(|| supplementary_congruences(&ctxs)),
    ));

    let mut ok = true;
    for (id, label, budget, c) in &lines {
        let mut unexpected = Vec::new();
        for f in &c.failures {
            let documented = EXPECTED
                .iter()
                .any(|e| e.0 == *id && (e.1, e.2, e.3) == (f.0, f.1, f.2));
            if !documented {
                unexpected.push(f);
            }
        }
        let stale: Vec<_> = EXPECTED
            .iter()
            .filter(|e| {
                e.0 == *id
                    && !c
                        .failures
                        .iter()
                        .any(|f| (f.0, f.1, f.2) == (e.1, e.2, e.3))
            })
            .collect();
        let over_budget = budget.is_some_and(|b| c.elapsed > b);
        let verdict = if c.failures.is_empty() && !over_budget {
            "PASS"
        } else if unexpected.is_empty() && !over_budget {
            "FAIL (documented)"
        } else {
            "FAIL"
        };
        if !unexpected.is_empty() || !stale.is_empty() || over_budget {
            ok = false;
        }
        println!(
            "criterion {id:<3} {verdict:<17} {label} [{:.1}s]",
            c.elapsed.as_secs_f64()
        );
        for f in &c.failures {
            let reason = EXPECTED
                .iter()
                .find(|e| e.0 == *id && (e.1, e.2, e.3) == (f.0, f.1, f.2))
                .map_or("UNDOCUMENTED", |e| e.4);
            println!(
                "    (s,n) = ({},{}) G{}: {} [{}]",
                f.0, f.1, f.2, f.3, reason
            );
        }
        for e in stale {
            println!(
                "    documented failure did not occur: (s,n) = ({},{}) G{}",
                e.1, e.2, e.3
            );
        }
        if over_budget {
            println!("    over the runtime budget {:?}", budget.unwrap());
        }
        for note in &c.notes {
            println!("    note: {note}");
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
