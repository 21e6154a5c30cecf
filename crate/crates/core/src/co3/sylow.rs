//! A Sylow 2-subgroup of `C_G(z)` by climbing: repeatedly adjoin an
//! element of `N(P)` whose image in `N(P)/P` has order 2.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Co3Context, Co3Error};
use crate::perm::{normalizer_by_stream, GroupHandle, Permutation, DEFAULT_STREAM_CAP};

pub const SYLOW_ORDER: u128 = 1024;

const TRIES_PER_LEVEL: usize = 2000;
const RETRIES: u64 = 3;

/// Element `w` of `n` with `w` outside `p` and `w^2` inside, or `None`
/// after a bounded number of random draws.
fn order_two_mod(n: &GroupHandle, p: &GroupHandle, rng: &mut ChaCha8Rng) -> Option<Permutation> {
    for _ in 0..TRIES_PER_LEVEL {
        let g = n.random_element(rng);
        let o = g.order();
        let odd = o >> o.trailing_zeros();
        let mut w = g.pow(odd);
        if p.contains(&w) {
            continue;
        }
        loop {
            let sq = w.compose(&w);
            if p.contains(&sq) {
                return Some(w);
            }
            w = sq;
        }
    }
    None
}

fn climb(ctx: &Co3Context, seed: u64) -> Result<GroupHandle, Co3Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = vec![ctx.z.clone()];
    let mut p = GroupHandle::new(gens.clone(), seed)?;
    while p.order() < SYLOW_ORDER {
        // z is central in C(z), so the first normalizer is C(z) itself
        let n = if p.order() == 2 { ctx.cz.clone() } else { normalizer_by_stream(&ctx.cz, &p, DEFAULT_STREAM_CAP)? };
        if n.order() % (2 * p.order()) != 0 {
            return Err(Co3Error::Inconsistent(format!("climbing stalled at order {}", p.order())));
        }
        let w = order_two_mod(&n, &p, &mut rng)
            .ok_or_else(|| Co3Error::Inconsistent(format!("no order-2 coset found at order {}", p.order())))?;
        gens.push(w);
        let next = GroupHandle::new(gens.clone(), seed)?;
        if next.order() != 2 * p.order() {
            return Err(Co3Error::Inconsistent("extension did not double the order".into()));
        }
        p = next;
    }
    Ok(p)
}

/// Builds (or loads from cache) a Sylow 2-subgroup of `C_G(z)`, which is
/// also a Sylow 2-subgroup of `G`. Retries with derived seeds on a stall.
pub fn sylow2(ctx: &Co3Context) -> Result<GroupHandle, Co3Error> {
    let name = format!("sylow-{}", ctx.seed);
    if let Some(cache) = &ctx.cache {
        if let Some(gens) = cache.load::<Vec<Permutation>>(&ctx.digest, &name) {
            let s = GroupHandle::new(gens, ctx.seed)?;
            if s.order() == SYLOW_ORDER && s.generators().iter().all(|g| ctx.cz.contains(g)) {
                return Ok(s);
            }
        }
    }
    let mut last = None;
    for attempt in 0..RETRIES {
        match climb(ctx, ctx.seed.wrapping_add(attempt.wrapping_mul(0x9e37))) {
            Ok(s) => {
                if let Some(cache) = &ctx.cache {
                    cache.store(&ctx.digest, &name, &s.generators().to_vec())?;
                }
                return Ok(s);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}
