//! Fixtures shared by the benchmarks.

use kgood_core::group::{GroupId, GroupSpec};
use kgood_core::verifier::GroupContext;
use kgood_core::{make_ring, RingElement, RingParams};

pub fn params(s: u32, n: u32) -> RingParams {
    make_ring(s, n).expect("parameters inside the default guard")
}

pub fn context(s: u32, n: u32, group: u8) -> GroupContext {
    let id = GroupId::new(group).expect("group index in 1..=17");
    let spec = GroupSpec::from_catalog(id, n).expect("catalog entry");
    GroupContext::new(&spec, &params(s, n)).expect("involution builds")
}

/// Deterministic dense element: word `i` is a splitmix64 step of `seed + i`.
pub fn dense_element(m: usize, seed: u64) -> RingElement {
    let bits = m * m;
    let mut words: Vec<u64> = (0..bits.div_ceil(64) as u64)
        .map(|i| splitmix(seed.wrapping_add(i)))
        .collect();
    if bits % 64 != 0 {
        *words.last_mut().unwrap() &= (1u64 << (bits % 64)) - 1;
    }
    RingElement::from_words(m, words).expect("word count matches")
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
