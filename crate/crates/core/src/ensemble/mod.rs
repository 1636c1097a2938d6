//! Asymptotic security: leveled ensembles of randomized functions, their
//! stochastic semantics, and indistinguishability games.
//!
//! The layers build on each other:
//!
//! - [`randomized`]: a single partial function table with a seed input, and
//!   the exact probabilities it induces;
//! - [`feasible`]: families of those indexed by a security level, with
//!   growing length profiles and level-wise composition;
//! - [`stochastic`]: level-indexed substochastic matrices over encoded
//!   sorts, and the check that they realize a function family;
//! - [`policy`]: finite-horizon negligibility — when two probability
//!   sequences count as equivalent;
//! - [`system`]: encryption systems assembled from ensembles;
//! - [`game`]: the IND-CPA and IND-CCA2 experiments against finite
//!   adversaries, IND-CPA decided by two independent routes.

pub mod feasible;
pub mod game;
pub mod policy;
pub mod randomized;
pub mod stochastic;
pub mod system;

pub use feasible::{AlignmentRule, EnsembleError, FeasibleEnsemble};
pub use game::{
    check_ind_cpa, check_ind_cpa_direct, cpa_guess_prob_by_matrices, decode_guess,
    ind_cca2_guess_prob, ind_cpa_guess_prob, max_ind_cpa_advantage, AdvantageReport,
    CcaAdversary, ChallengeReusePolicy, CpaAdversary, CpaAdversaryReport, CpaDiagramReport,
    CpaLevelReport, GameError,
};
pub use policy::{
    EquivReport, GapWitness, NegligibilityPolicy, PolicyError, ThresholdFamily,
};
pub use randomized::{RandomizedFn, RandomizedFnError};
pub use stochastic::{RealizationWitness, SortFamily, StochasticEnsemble, StochasticError};
pub use system::{
    AbstractCryptoSystem, DecryptionDefect, KeygenPairingDefect, SystemError,
};
