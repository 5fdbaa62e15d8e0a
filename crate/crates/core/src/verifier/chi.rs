//! Three independent computations of the `K(s)`-Euler characteristic.

use serde::Serialize;

use super::{CheckResult, GroupContext};
use crate::error::{Error, Result};
use crate::group::{chi_bruteforce, GroupSpec, BRUTEFORCE_MAX_N, BRUTEFORCE_MAX_S};

fn pow2(e: i64) -> Result<i128> {
    if !(0..=125).contains(&e) {
        return Err(Error::DegreeOverflow(format!("2^{e} does not fit")));
    }
    Ok(1i128 << e)
}

/// The closed-form count for the family of `spec`.
pub fn chi_formula(spec: &GroupSpec, s: u32) -> Result<u128> {
    let (n, s) = (i64::from(spec.n), i64::from(s));
    let top = pow2(2 * (n + 1) * s - 1)?;
    let value = match spec.id.index() {
        1 => pow2((2 * n + 3) * s)?,
        2 | 4 | 9 => top - pow2(2 * n * s - 1)? + pow2((2 * n + 1) * s)?,
        3 | 10 => 3 * top - pow2((2 * n + 1) * s - 1)?,
        5 | 6 | 7 | 8 | 11 | 12 => top - pow2(2 * s - 1)? + pow2(3 * s)?,
        13 | 16 => top - pow2((n + 2) * s - 1)? + pow2((n + 3) * s)?,
        14 | 15 | 17 => top - pow2((n + 1) * s - 1)? + pow2((n + 2) * s)?,
        _ => unreachable!("GroupId is validated on construction"),
    };
    Ok(value as u128)
}

/// `(M^2 - x)/2 + 2^s x` with `x = dim Ker(1+t) - dim Im(1+t)`.
pub fn chi_cohomology(ctx: &GroupContext) -> Result<u128> {
    let dim = ctx.params.dim() as u128;
    let x = ctx.trivial_rank() as u128;
    if (dim - x) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "free part has odd rank {}",
            dim - x
        )));
    }
    Ok((dim - x) / 2 + (x << ctx.params.s()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChiValues {
    pub formula: u128,
    pub cohomology: u128,
    /// `None` when the group is outside the brute-force guard.
    pub bruteforce: Option<u128>,
    #[serde(skip)]
    pub trivial_rank: usize,
}

impl ChiValues {
    pub fn agree(&self) -> bool {
        self.formula == self.cohomology && self.bruteforce.is_none_or(|b| b == self.formula)
    }

    pub fn to_check(&self) -> CheckResult {
        let brute = match self.bruteforce {
            Some(b) => b.to_string(),
            None => "skipped".to_string(),
        };
        CheckResult::from_bool(
            "chi",
            self.agree(),
            format!(
                "formula {}, cohomology {} (x = {}), brute force {brute}",
                self.formula, self.cohomology, self.trivial_rank
            ),
            || None,
        )
    }
}

/// All three values; brute force only inside its default guard.
pub fn chi_reconcile(ctx: &GroupContext, bruteforce: bool) -> Result<ChiValues> {
    let s = ctx.params.s();
    let brute = if bruteforce && ctx.spec.n <= BRUTEFORCE_MAX_N && s <= BRUTEFORCE_MAX_S {
        Some(chi_bruteforce(&ctx.spec, s)?)
    } else {
        None
    };
    Ok(ChiValues {
        formula: chi_formula(&ctx.spec, s)?,
        cohomology: chi_cohomology(ctx)?,
        bruteforce: brute,
        trivial_rank: ctx.trivial_rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupId;

    fn spec(k: u8, n: u32) -> GroupSpec {
        GroupSpec::from_catalog(GroupId::new(k).unwrap(), n).unwrap()
    }

    #[test]
    fn formula_spot_values() {
        assert_eq!(chi_formula(&spec(1, 1), 2).unwrap(), 1024);
        assert_eq!(chi_formula(&spec(7, 2), 2).unwrap(), 2104);
        assert_eq!(chi_formula(&spec(3, 1), 2).unwrap(), 352);
        assert!(chi_formula(&spec(1, 20), 16).is_err());
    }
}
