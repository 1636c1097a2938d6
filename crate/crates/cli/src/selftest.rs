//! Seeded random cross-check sweeps, packaged as a CLI subcommand.
//!
//! Each sweep generates instances deterministically from the given seed
//! and counts how often independent decision routes agree — the count
//! must equal the instance count. Reports for a fixed seed are
//! byte-identical across runs.

use serde::Serialize;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secdiag_core::ensemble::{cpa_guess_prob_by_matrices, ind_cpa_guess_prob};
use secdiag_core::gen;

use crate::report::RatView;

#[derive(Debug, Clone, Serialize)]
pub struct SweepView {
    pub name: &'static str,
    pub instances: usize,
    /// Instances on which every route returned the same verdict.
    pub agreements: usize,
    /// Instances judged secure (texture: sweeps should see both
    /// verdicts). Absent for sweeps whose notion is policy-relative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub secure_instances: Option<usize>,
}

/// Self-test outcome: one row per sweep plus the overall verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub check: &'static str,
    pub seed: u64,
    pub sweeps: Vec<SweepView>,
    /// Largest correct-guess probability seen in the game sweep.
    pub max_guess_probability: RatView,
    pub pass: bool,
}

impl SelftestReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "selftest: {} (seed {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.seed
        );
        for s in &self.sweeps {
            let secure = match s.secure_instances {
                Some(n) => format!(", {n} secure"),
                None => String::new(),
            };
            let _ = writeln!(out, "  {}: {}/{} agree{secure}", s.name, s.agreements, s.instances);
        }
        let _ = writeln!(
            out,
            "  max guess probability seen: {}",
            self.max_guess_probability.text()
        );
        out
    }
}

fn symbolic_sweep(rng: &mut ChaCha8Rng, instances: usize) -> SweepView {
    let mut agreements = 0;
    let mut secure_instances = 0;
    for i in 0..instances {
        let sys = gen::random_dolev_yao(rng, 2 + i % 3);
        let by_def = sys.secure_by_definition().secure;
        let by_sets = sys.secure_by_possible_plaintexts();
        let by_diagram = sys.secure_by_diagram().expect("well-typed system");
        if by_def == by_sets && by_def == by_diagram {
            agreements += 1;
        }
        secure_instances += by_def as usize;
    }
    SweepView {
        name: "possibilistic definition vs plaintext sets vs diagram",
        instances,
        agreements,
        secure_instances: Some(secure_instances),
    }
}

fn statistical_sweep(rng: &mut ChaCha8Rng, instances: usize) -> SweepView {
    let mut agreements = 0;
    let mut secure_instances = 0;
    for i in 0..instances {
        let sys = gen::random_permutation_shannon(rng, 2 + i % 3);
        let direct = sys.is_perfectly_secure_direct().secure;
        let by_diagram = sys.secure_by_diagram().expect("well-typed system");
        if direct == by_diagram {
            agreements += 1;
        }
        secure_instances += direct as usize;
    }
    SweepView {
        name: "perfect secrecy direct vs diagram",
        instances,
        agreements,
        secure_instances: Some(secure_instances),
    }
}

fn game_sweep(rng: &mut ChaCha8Rng, instances: usize) -> (SweepView, RatView) {
    let mut agreements = 0;
    let mut max_prob = secdiag_core::semiring::rat(0, 1);
    for i in 0..instances {
        let sys = gen::random_abstract_system(rng, 1 + i % 2);
        let adv = gen::random_cpa_adversary(rng, &sys);
        let direct = ind_cpa_guess_prob(&sys, &adv).expect("well-typed instance");
        let by_matrices = cpa_guess_prob_by_matrices(&sys, &adv).expect("well-typed instance");
        if direct == by_matrices {
            agreements += 1;
        }
        for p in &direct {
            if *p > max_prob {
                max_prob = p.clone();
            }
        }
    }
    let view = SweepView {
        name: "guess probability operational vs matrix pipeline",
        instances,
        agreements,
        secure_instances: None,
    };
    (view, RatView::new(&max_prob))
}

/// Runs all sweeps with `instances` instances each (the game sweep runs a
/// quarter as many — its instances are costlier).
pub fn run_selftest(seed: u64, instances: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = instances.max(1);
    let symbolic = symbolic_sweep(&mut rng, instances);
    let statistical = statistical_sweep(&mut rng, instances);
    let (game, max_guess_probability) = game_sweep(&mut rng, instances.div_ceil(4));
    let pass = [&symbolic, &statistical, &game]
        .iter()
        .all(|s| s.agreements == s.instances);
    SelftestReport {
        check: "selftest",
        seed,
        sweeps: vec![symbolic, statistical, game],
        max_guess_probability,
        pass,
    }
}
