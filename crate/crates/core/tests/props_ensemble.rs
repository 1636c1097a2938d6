//! Algebraic laws for seeded randomized functions and their leveled
//! families, plus dual-route agreement for the indistinguishability game.
//! Like the other sweeps, every check is exact rational arithmetic on
//! seeded random instances; one violation fails the suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secdiag_core::ensemble::{
    cpa_guess_prob_by_matrices, ind_cpa_guess_prob, max_ind_cpa_advantage, AlignmentRule,
    NegligibilityPolicy, RandomizedFn, StochasticEnsemble, ThresholdFamily,
};
use secdiag_core::ensemble::stochastic::SortFamily;
use secdiag_core::gen;
use secdiag_core::semiring::rat;
use secdiag_core::{Bits, FinSet, Matrix, Rat};

/// The full transition matrix of a seeded table over raw bit patterns:
/// rows are the 2^in inputs, columns the 2^out outputs, entries the seed
/// mass sent from row to column. Partial tables give substochastic rows.
fn full_matrix(f: &RandomizedFn) -> Matrix<Rat> {
    let ins: Vec<Bits> = Bits::all(f.in_len()).collect();
    let outs: Vec<Bits> = Bits::all(f.out_len()).collect();
    Matrix::from_fn(ins.len(), outs.len(), |i, j| {
        f.seed_prob(&ins[i], &outs[j]).unwrap()
    })
}

/// Composition of seeded tables is associative on the nose: both
/// bracketings give the same seed layout and the same defined entries.
#[test]
fn rcompose_is_associative_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa550c);
    for _ in 0..120 {
        let (f, g, h) = gen::random_composable_triple(&mut rng);
        let left = f.rcompose(&g).unwrap().rcompose(&h).unwrap();
        let right = f.rcompose(&g.rcompose(&h).unwrap()).unwrap();
        assert_eq!(left, right, "bracketing changed {f:?} ∘ {g:?} ∘ {h:?}");
    }
}

/// Seedless identity tables are neutral on either side of composition.
#[test]
fn identity_is_neutral_for_rcompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1de7);
    for _ in 0..100 {
        let seed = rng.gen_range(0..=2);
        let input = rng.gen_range(1..=2);
        let output = rng.gen_range(1..=2);
        let f = gen::random_randomized_fn(&mut rng, seed, input, output);
        let post = RandomizedFn::identity(output).rcompose(&f).unwrap();
        let pre = f.rcompose(&RandomizedFn::identity(input)).unwrap();
        assert_eq!(post, f, "post-identity disturbed {f:?}");
        assert_eq!(pre, f, "pre-identity disturbed {f:?}");
    }
}

/// A composite's transition matrix is the product of its stages'
/// matrices: independent seeds make the mass through each intermediate
/// pattern factor, and an undefined branch on either side drops the same
/// mass from both routes.
#[test]
fn composition_multiplies_transition_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac708);
    for _ in 0..120 {
        let (f, g, _) = gen::random_composable_triple(&mut rng);
        let composite = f.rcompose(&g).unwrap();
        let product = full_matrix(&g).compose(&full_matrix(&f)).unwrap();
        assert_eq!(
            full_matrix(&composite),
            product,
            "matrix route split on {g:?} then {f:?}"
        );
    }
}

/// Leveled families with matching width profiles compose exactly at every
/// level; the composite tabulates to the per-level matrix product, and the
/// tabulation realizes the family it came from.
#[test]
fn leveled_composition_factors_and_realizes_its_tabulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3115);
    let labels = FinSet::new(["0", "1"]).unwrap();
    let widths = [1usize, 2, 3];
    for round in 0..50 {
        let inner = gen::random_feasible(&mut rng, 3, 1, 1, round % 3 == 0);
        let outer = gen::random_feasible(&mut rng, 3, 1, 1, round % 2 == 0);
        let composite = outer.compose(&inner, AlignmentRule::Composable).unwrap();
        for level in 1..=3 {
            let got = full_matrix(composite.level(level).unwrap());
            let want = full_matrix(inner.level(level).unwrap())
                .compose(&full_matrix(outer.level(level).unwrap()))
                .unwrap();
            assert_eq!(got, want, "level {level} split on round {round}");
        }
        let sort = || SortFamily::new(labels.clone(), &widths).unwrap();
        for family in [&inner, &outer, &composite] {
            let tabulated = StochasticEnsemble::from_feasible(family, sort(), sort()).unwrap();
            assert_eq!(
                tabulated.realizes(family).unwrap(),
                None,
                "tabulation disowned its own family on round {round}"
            );
        }
    }
}

fn random_sequence(rng: &mut impl Rng, len: usize) -> Vec<Rat> {
    (0..len)
        .map(|_| {
            let den = rng.gen_range(1..=6i64);
            rat(rng.gen_range(0..=den), den)
        })
        .collect()
}

/// Closeness-up-to-threshold is reflexive and symmetric, and depends only
/// on the level-wise gaps: shifting both sequences by the same amounts
/// changes nothing, including the reported witness.
#[test]
fn negligible_equiv_is_reflexive_symmetric_and_shift_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9011c4);
    let policies = [
        NegligibilityPolicy::new(5, ThresholdFamily::RecipPow(2)).unwrap(),
        NegligibilityPolicy::new(5, ThresholdFamily::ExpHalving).unwrap(),
    ];
    for round in 0..60 {
        let policy = &policies[round % 2];
        let sigma = random_sequence(&mut rng, 5);
        let tau = random_sequence(&mut rng, 5);
        let delta = random_sequence(&mut rng, 5);
        let refl = policy.negligible_equiv(&sigma, &sigma).unwrap();
        assert!(refl.equivalent && refl.witness.is_none());
        let fwd = policy.negligible_equiv(&sigma, &tau).unwrap();
        let bwd = policy.negligible_equiv(&tau, &sigma).unwrap();
        assert_eq!(fwd.equivalent, bwd.equivalent);
        assert_eq!(fwd.witness, bwd.witness);
        let sigma_shift: Vec<Rat> = sigma.iter().zip(&delta).map(|(a, d)| a + d).collect();
        let tau_shift: Vec<Rat> = tau.iter().zip(&delta).map(|(a, d)| a + d).collect();
        let shifted = policy.negligible_equiv(&sigma_shift, &tau_shift).unwrap();
        assert_eq!(fwd.equivalent, shifted.equivalent);
        assert_eq!(fwd.witness, shifted.witness);
    }
}

/// The branch-enumerating game evaluator and the matrix-composition one
/// must give the same exact guess probability on arbitrary systems and
/// adversaries — including partial tables, invalid key or message codes,
/// and key-reading first stages.
#[test]
fn cpa_routes_agree_on_random_systems_and_adversaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1a10);
    for round in 0..30 {
        let levels = 1 + round % 2;
        let sys = gen::random_abstract_system(&mut rng, levels);
        let adv = gen::random_cpa_adversary(&mut rng, &sys);
        let direct = ind_cpa_guess_prob(&sys, &adv).unwrap();
        let by_matrices = cpa_guess_prob_by_matrices(&sys, &adv).unwrap();
        assert_eq!(direct, by_matrices, "routes split on round {round}");
    }
}

/// No adversary that only sees the challenge can guess better than a fair
/// coin plus the best single-pair distinguishing advantage. Only the upper
/// side is claimed: sloppy adversaries lose mass and can score below one
/// half, and key-reading ones are exempt from the bound entirely.
#[test]
fn guess_probability_never_beats_the_advantage_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb0d11d);
    let mut checked = 0usize;
    while checked < 25 {
        let levels = 1 + checked % 2;
        let sys = gen::random_abstract_system(&mut rng, levels);
        let adv = gen::random_cpa_adversary(&mut rng, &sys);
        if adv.a0_takes_key {
            continue;
        }
        let probs = ind_cpa_guess_prob(&sys, &adv).unwrap();
        for (i, p) in probs.iter().enumerate() {
            let report = max_ind_cpa_advantage(&sys, i + 1).unwrap();
            assert!(
                p - rat(1, 2) <= report.advantage,
                "level {} guessed {p} with advantage {}",
                i + 1,
                report.advantage
            );
            if let Some(enumerated) = &report.enumeration {
                assert_eq!(
                    enumerated, &report.advantage,
                    "accept-set enumeration split from the drift formula"
                );
            }
        }
        checked += 1;
    }
}
