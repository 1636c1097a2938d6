//! Seeded random generators for cross-check sweeps.
//!
//! The property suites compare independent decision routes on many random
//! instances; everything here is deterministic in the caller's RNG so a
//! failing sweep can be replayed from its seed. Generators deliberately
//! produce rough edges — empty well-formed sets, zero-probability labels,
//! partial tables — because the agreement claims are supposed to hold
//! there too.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::bits::Bits;
use crate::dist::Dist;
use crate::encoded::FinSet;
use crate::ensemble::feasible::FeasibleEnsemble;
use crate::ensemble::randomized::RandomizedFn;
use crate::semiring::rat;
use crate::shannon::ShannonSystem;
use crate::symbolic::DolevYaoSystem;

/// The carrier `{0, 1, …, n-1}` with decimal labels.
pub fn carrier(n: usize) -> FinSet {
    FinSet::new((0..n).map(|i| format!("{i}"))).expect("distinct labels")
}

fn random_table(rng: &mut impl Rng, n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..n)).collect())
        .collect()
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    perm
}

/// A random distribution on `n` points from small integer weights; zero
/// weights (and so empty-support labels) are common on purpose.
pub fn random_dist(rng: &mut impl Rng, n: usize) -> Dist {
    let mut weights: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    if weights.iter().all(|&w| w == 0) {
        let i = rng.gen_range(0..n);
        weights[i] = 1;
    }
    let total: i64 = weights.iter().sum();
    Dist::new(weights.into_iter().map(|w| rat(w, total)).collect()).expect("weights sum to 1")
}

/// A random well-typed symbolic system: arbitrary encryption, decryption,
/// and pairing tables, arbitrary well-formed subset. Nothing forces
/// decryption to undo encryption.
pub fn random_dolev_yao(rng: &mut impl Rng, n: usize) -> DolevYaoSystem {
    let enc = random_table(rng, n);
    let dec = random_table(rng, n);
    let pair: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let wellformed: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    DolevYaoSystem::new(carrier(n), enc, dec, pair, &wellformed).expect("well-typed tables")
}

/// Every symbolic system on a two-element carrier: all 16 encryption
/// tables crossed with all 4 well-formed subsets (decryption and pairing
/// fixed — the possibilistic security notions never consult them).
pub fn all_binary_systems() -> Vec<DolevYaoSystem> {
    let mut out = Vec::with_capacity(64);
    for code in 0..16u32 {
        let enc: Vec<Vec<usize>> = (0..2)
            .map(|k| (0..2).map(|m| (code >> (2 * k + m) & 1) as usize).collect())
            .collect();
        for mask in 0..4u32 {
            let wellformed: Vec<usize> = (0..2).filter(|m| mask >> m & 1 == 1).collect();
            out.push(
                DolevYaoSystem::new(
                    carrier(2),
                    enc.clone(),
                    enc.clone(),
                    alloc::vec![0, 1],
                    &wellformed,
                )
                .expect("well-typed tables"),
            );
        }
    }
    out
}

/// The modular-addition cipher on `n` letters: `enc(k, m) = k + m`,
/// undone by `dec(k, c) = c - k`, keys self-paired.
pub fn group_shannon(n: usize, key_dist: Dist, plaintext_dist: Dist) -> ShannonSystem {
    let enc: Vec<Vec<usize>> = (0..n).map(|k| (0..n).map(|m| (k + m) % n).collect()).collect();
    let dec: Vec<Vec<usize>> = (0..n)
        .map(|k| (0..n).map(|c| (c + n - k) % n).collect())
        .collect();
    let pair: Vec<usize> = (0..n).collect();
    ShannonSystem::new(carrier(n), enc, dec, pair, key_dist, plaintext_dist)
        .expect("group cipher decrypts")
}

/// A random statistical system whose decryption genuinely inverts
/// encryption: each key's encryption row is a random permutation, the
/// pairing is a random permutation of keys, and the decryption table is
/// derived. Key and plaintext distributions are random.
pub fn random_permutation_shannon(rng: &mut impl Rng, n: usize) -> ShannonSystem {
    let enc: Vec<Vec<usize>> = (0..n).map(|_| random_permutation(rng, n)).collect();
    let pair = random_permutation(rng, n);
    let mut dec = alloc::vec![alloc::vec![0usize; n]; n];
    for k in 0..n {
        for m in 0..n {
            dec[pair[k]][enc[k][m]] = m;
        }
    }
    let key_dist = random_dist(rng, n);
    let plaintext_dist = random_dist(rng, n);
    ShannonSystem::new(carrier(n), enc, dec, pair, key_dist, plaintext_dist)
        .expect("derived decryption table inverts")
}

/// A random partial lookup table with roughly three quarters of its
/// entries defined.
pub fn random_randomized_fn(
    rng: &mut impl Rng,
    seed_len: usize,
    in_len: usize,
    out_len: usize,
) -> RandomizedFn {
    let mut f = RandomizedFn::empty(seed_len, in_len, out_len);
    for seed in Bits::all(seed_len) {
        for input in Bits::all(in_len) {
            if rng.gen_ratio(3, 4) {
                let val = rng.gen_range(0..(1u64 << out_len));
                f.define(seed, input, Bits::new(out_len, val).expect("in range"))
                    .expect("lengths fixed");
            }
        }
    }
    f
}

/// Three random tables typed to compose as `f ∘ g ∘ h`, with lengths and
/// seed widths up to 2 bits each.
pub fn random_composable_triple(
    rng: &mut impl Rng,
) -> (RandomizedFn, RandomizedFn, RandomizedFn) {
    let a = rng.gen_range(1..=2);
    let b = rng.gen_range(1..=2);
    let c = rng.gen_range(1..=2);
    let d = rng.gen_range(1..=2);
    let rh = rng.gen_range(0..=2);
    let h = random_randomized_fn(rng, rh, a, b);
    let rg = rng.gen_range(0..=2);
    let g = random_randomized_fn(rng, rg, b, c);
    let rf = rng.gen_range(0..=2);
    let f = random_randomized_fn(rng, rf, c, d);
    (f, g, h)
}

/// A random leveled family with profile `(seed, in, out) =
/// (0 or ℓ, in_base + ℓ - 1, out_base + ℓ - 1)` and random partial tables.
pub fn random_feasible(
    rng: &mut impl Rng,
    levels: usize,
    in_base: usize,
    out_base: usize,
    deterministic: bool,
) -> FeasibleEnsemble {
    let sectors = (1..=levels)
        .map(|l| {
            let seed = if deterministic { 0 } else { l };
            random_randomized_fn(rng, seed, in_base + l - 1, out_base + l - 1)
        })
        .collect();
    FeasibleEnsemble::new(sectors).expect("profiles grow strictly")
}

/// A random leveled encryption system over two labels per sort, with
/// seeded random (and typically partial) encryption, arbitrary
/// deterministic decryption and pairing, and key generation that scatters
/// mass over raw patterns — valid and invalid key codes alike.
pub fn random_abstract_system(
    rng: &mut impl Rng,
    levels: usize,
) -> crate::ensemble::system::AbstractCryptoSystem {
    use crate::ensemble::stochastic::SortFamily;
    use crate::ensemble::system::AbstractCryptoSystem;
    let labels = FinSet::new(["0", "1"]).expect("two labels");
    let widths: Vec<usize> = (1..=levels).collect();
    let sort = || SortFamily::new(labels.clone(), &widths).expect("growing widths");
    let enc = (1..=levels)
        .map(|l| random_randomized_fn(rng, l, 2 * l, l))
        .collect();
    let dec = (1..=levels)
        .map(|l| random_randomized_fn(rng, 0, 2 * l, l))
        .collect();
    let pair = (1..=levels)
        .map(|l| random_randomized_fn(rng, 0, l, l))
        .collect();
    let keygen = (1..=levels)
        .map(|l| random_randomized_fn(rng, l, l, 2 * l))
        .collect();
    AbstractCryptoSystem::new(
        sort(),
        sort(),
        sort(),
        FeasibleEnsemble::new(enc).expect("profiles grow"),
        FeasibleEnsemble::new(dec).expect("profiles grow"),
        FeasibleEnsemble::new(pair).expect("profiles grow"),
        FeasibleEnsemble::new(keygen).expect("profiles grow"),
        Dist::uniform(2).expect("two labels"),
    )
    .expect("widths cohere by construction")
}

/// A random two-stage distinguisher against a two-label system: random
/// (possibly invalid) message choices, random guess tables, sometimes
/// reading the key wire.
pub fn random_cpa_adversary(
    rng: &mut impl Rng,
    system: &crate::ensemble::system::AbstractCryptoSystem,
) -> crate::ensemble::game::CpaAdversary {
    use crate::ensemble::game::CpaAdversary;
    let levels = system.level_count();
    let a0_takes_key = rng.gen_bool(0.5);
    let a0_seeded = rng.gen_bool(0.5);
    let a1_seeded = rng.gen_bool(0.5);
    let state = rng.gen_range(0..=1usize);
    let mut a0 = Vec::with_capacity(levels);
    let mut a1 = Vec::with_capacity(levels);
    for l in 1..=levels {
        let kw = system.key_sort().width(l).expect("level in range");
        let mw = system.msg_sort().width(l).expect("level in range");
        let cw = system.cipher_sort().width(l).expect("level in range");
        let a0_in = if a0_takes_key { kw } else { l };
        let a0_seed = if a0_seeded { l } else { 0 };
        a0.push(random_randomized_fn(rng, a0_seed, a0_in, 2 * mw + state));
        let a1_seed = if a1_seeded { l } else { 0 };
        a1.push(random_randomized_fn(
            rng,
            a1_seed,
            cw + 2 * mw + state,
            l,
        ));
    }
    CpaAdversary {
        name: alloc::string::String::from("random"),
        a0: FeasibleEnsemble::new(a0).expect("profiles grow"),
        a1: FeasibleEnsemble::new(a1).expect("profiles grow"),
        a0_takes_key,
    }
}
