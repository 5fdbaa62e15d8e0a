//! The 17 semidirect products `(C_{2^{n+1}} x C_{2^{n+1}}) x| C_2`.
//!
//! Each group is given by `c a c = a^i b^j`, `c b c = a^k b^l` with residues
//! mod `2^{n+1}`. Besides the presentation data this module realizes each
//! group concretely, for counting commuting tuples by brute force.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Identifier `G1` .. `G17`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupId(u8);

impl GroupId {
    pub fn new(k: u8) -> Result<Self> {
        if (1..=17).contains(&k) {
            Ok(Self(k))
        } else {
            Err(Error::UnknownGroup(format!("G{k}")))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = GroupId> {
        (1..=17).map(GroupId)
    }

    /// The six groups treated by the special-basis argument.
    pub fn is_hard_case(self) -> bool {
        matches!(self.0, 3 | 4 | 7 | 8 | 9 | 11)
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}", self.0)
    }
}

impl Serialize for GroupId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for GroupId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t
            .strip_prefix('G')
            .or_else(|| t.strip_prefix('g'))
            .unwrap_or(t);
        digits
            .parse::<u8>()
            .ok()
            .and_then(|k| GroupId::new(k).ok())
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// Symbolic exponent `e0 + e1 * 2^n`, with `e0, e1` small integers; this is
/// how the relation lists are written.
#[derive(Clone, Copy, Debug)]
struct Sym(i64, i64);

impl Sym {
    fn eval(self, n: u32) -> u64 {
        let modulus = 1i64 << (n + 1);
        (self.0 + self.1 * (1i64 << n)).rem_euclid(modulus) as u64
    }
}

/// `(i, j, k, l)` for each presentation.
fn relation_table(id: GroupId) -> [Sym; 4] {
    const ONE: Sym = Sym(1, 0);
    const ZERO: Sym = Sym(0, 0);
    const MINUS: Sym = Sym(-1, 0);
    const P: Sym = Sym(0, 1);
    const ONE_P: Sym = Sym(1, 1);
    const MINUS_P: Sym = Sym(-1, 1);
    match id.0 {
        1 => [ONE, ZERO, ZERO, ONE],
        2 => [ONE_P, ZERO, ZERO, ONE_P],
        3 => [ONE, P, ZERO, ONE],
        4 => [ONE_P, P, ZERO, ONE_P],
        5 => [MINUS, ZERO, ZERO, MINUS],
        6 => [MINUS_P, ZERO, ZERO, MINUS_P],
        7 => [MINUS, P, ZERO, MINUS],
        8 => [MINUS_P, P, ZERO, MINUS_P],
        9 => [ONE, P, P, ONE_P],
        10 => [ONE, ZERO, ZERO, ONE_P],
        11 => [MINUS, P, P, MINUS_P],
        12 => [MINUS, ZERO, ZERO, MINUS_P],
        13 => [ONE, ZERO, ZERO, MINUS_P],
        14 => [MINUS, ZERO, ZERO, ONE_P],
        15 => [ZERO, ONE, ONE, ZERO],
        16 => [ONE, ZERO, ZERO, MINUS],
        17 => [ONE_P, ZERO, ZERO, MINUS_P],
        _ => unreachable!("GroupId is validated on construction"),
    }
}

/// A presentation `c a c = a^i b^j, c b c = a^k b^l` at a fixed `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    pub id: GroupId,
    pub n: u32,
    pub i: u64,
    pub j: u64,
    pub k: u64,
    pub l: u64,
}

/// The 17 presentations at parameter `n`, each validated.
pub fn catalog(n: u32) -> Result<Vec<GroupSpec>> {
    GroupId::all()
        .map(|id| GroupSpec::from_catalog(id, n))
        .collect()
}

impl GroupSpec {
    pub fn from_catalog(id: GroupId, n: u32) -> Result<Self> {
        if n < 1 || n > 20 {
            return Err(Error::InvalidParameter(format!(
                "n must be between 1 and 20, got {n}"
            )));
        }
        let [i, j, k, l] = relation_table(id).map(|e| e.eval(n));
        let spec = Self { id, n, i, j, k, l };
        spec.validate()?;
        Ok(spec)
    }

    /// A spec with arbitrary exponents; not validated.
    pub fn with_action(id: GroupId, n: u32, i: u64, j: u64, k: u64, l: u64) -> Self {
        let m = 1u64 << (n + 1);
        Self {
            id,
            n,
            i: i % m,
            j: j % m,
            k: k % m,
            l: l % m,
        }
    }

    pub fn modulus(&self) -> u64 {
        1u64 << (self.n + 1)
    }

    /// `|G| = 2^{2n+3}`.
    pub fn order(&self) -> u64 {
        2 * self.modulus() * self.modulus()
    }

    /// `phi(x, y) = (i x + k y, j x + l y)`: the action of `c` on exponent
    /// vectors of `a^x b^y`.
    pub fn act(&self, x: u64, y: u64) -> (u64, u64) {
        let m = self.modulus();
        ((self.i * x + self.k * y) % m, (self.j * x + self.l * y) % m)
    }

    /// `phi^2 = id` and `det phi` odd; returns the first failing basis vector.
    pub fn involution_defect(&self) -> Option<(u64, u64)> {
        for v in [(1, 0), (0, 1)] {
            let w = self.act(v.0, v.1);
            if self.act(w.0, w.1) != v {
                return Some(v);
            }
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((x, y)) = self.involution_defect() {
            return Err(Error::InvalidParameter(format!(
                "{}: conjugation by c is not an involution on a^{x} b^{y}",
                self.id
            )));
        }
        // det parity: il - jk = il + jk mod 2.
        let det = self.i * self.l + self.j * self.k;
        if det % 2 == 0 {
            return Err(Error::InvalidParameter(format!(
                "{}: action matrix is not invertible",
                self.id
            )));
        }
        Ok(())
    }

    /// `t` on characters: `lambda^a nu^b -> lambda^{ia + jb} nu^{ka + lb}`.
    pub fn act_on_character(&self, a: u64, b: u64) -> (u64, u64) {
        let m = self.modulus();
        ((self.i * a + self.j * b) % m, (self.k * a + self.l * b) % m)
    }

    /// `(t(lambda), t(nu))` as exponent pairs.
    pub fn character_action(&self) -> ((u64, u64), (u64, u64)) {
        (self.act_on_character(1, 0), self.act_on_character(0, 1))
    }

    /// Human-readable relation line, e.g. `G3: c a c = a^1 b^2, c b c = a^0 b^1`.
    pub fn relation_line(&self) -> String {
        format!(
            "{}: c a c = a^{} b^{}, c b c = a^{} b^{}",
            self.id, self.i, self.j, self.k, self.l
        )
    }
}

/// `a^x b^y c^eps`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub x: u64,
    pub y: u64,
    pub eps: u8,
}

/// A concrete realization of a [`GroupSpec`].
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    spec: GroupSpec,
}

impl ConcreteGroup {
    pub fn new(spec: GroupSpec) -> Self {
        Self { spec }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { x: 0, y: 0, eps: 0 }
    }

    /// `(v1, e1)(v2, e2) = (v1 + phi^{e1}(v2), e1 + e2)`.
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let m = self.spec.modulus();
        let (hx, hy) = if g.eps == 1 {
            self.spec.act(h.x, h.y)
        } else {
            (h.x, h.y)
        };
        GroupElement {
            x: (g.x + hx) % m,
            y: (g.y + hy) % m,
            eps: (g.eps + h.eps) % 2,
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        let m = self.spec.modulus();
        let mut out = Vec::with_capacity(self.spec.order() as usize);
        for eps in 0..2u8 {
            for x in 0..m {
                for y in 0..m {
                    out.push(GroupElement { x, y, eps });
                }
            }
        }
        out
    }

    pub fn index_of(&self, g: GroupElement) -> usize {
        let m = self.spec.modulus();
        ((g.eps as u64 * m + g.x) * m + g.y) as usize
    }

    pub fn order_of(&self, g: GroupElement) -> u64 {
        let mut acc = g;
        let mut k = 1;
        while acc != self.identity() {
            acc = self.mul(acc, g);
            k += 1;
        }
        k
    }
}

/// Default limits for brute-force counting.
pub const BRUTEFORCE_MAX_N: u32 = 2;
pub const BRUTEFORCE_MAX_S: u32 = 4;

/// Number of conjugacy classes of commuting `s`-tuples, with the default
/// size guard (`n <= 2`, `s <= 4`).
pub fn chi_bruteforce(spec: &GroupSpec, s: u32) -> Result<u128> {
    chi_bruteforce_with_limits(spec, s, BRUTEFORCE_MAX_N, BRUTEFORCE_MAX_S)
}

/// Counts classes of commuting `s`-tuples as `|Hom(Z^{s+1}, G)| / |G|`.
///
/// The number of commuting `k`-tuples drawn from a subgroup `S` is
/// `sum_{g in S} N(k-1, S cap C(g))`; subgroups are bitsets and the
/// recursion is memoized on them.
pub fn chi_bruteforce_with_limits(
    spec: &GroupSpec,
    s: u32,
    max_n: u32,
    max_s: u32,
) -> Result<u128> {
    if spec.n > max_n || s > max_s {
        return Err(Error::InfeasibleSize {
            dim: spec.order() as usize,
            guard: 1usize << (2 * max_n + 3),
        });
    }
    let group = ConcreteGroup::new(*spec);
    let elems = group.elements();
    let size = elems.len();
    let words = size.div_ceil(64);
    let mut centralizers = vec![vec![0u64; words]; size];
    for (gi, &g) in elems.iter().enumerate() {
        for (hi, &h) in elems.iter().enumerate() {
            if group.mul(g, h) == group.mul(h, g) {
                centralizers[gi][hi / 64] |= 1u64 << (hi % 64);
            }
        }
    }
    let mut all = vec![u64::MAX; words];
    if size % 64 != 0 {
        all[words - 1] = (1u64 << (size % 64)) - 1;
    }
    let mut memo: HashMap<(u32, Vec<u64>), u128> = HashMap::new();
    let tuples = count_commuting(s + 1, &all, &centralizers, &mut memo);
    Ok(tuples / size as u128)
}

fn count_commuting(
    k: u32,
    subset: &[u64],
    centralizers: &[Vec<u64>],
    memo: &mut HashMap<(u32, Vec<u64>), u128>,
) -> u128 {
    if k == 0 {
        return 1;
    }
    if k == 1 {
        return subset.iter().map(|w| w.count_ones() as u128).sum();
    }
    let key = (k, subset.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0u128;
    for (wi, &word) in subset.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let g = wi * 64 + w.trailing_zeros() as usize;
            w &= w - 1;
            let next: Vec<u64> = subset
                .iter()
                .zip(&centralizers[g])
                .map(|(a, b)| a & b)
                .collect();
            total += count_commuting(k - 1, &next, centralizers, memo);
        }
    }
    memo.insert(key, total);
    total
}
