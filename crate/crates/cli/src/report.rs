//! Verdict views: serializable report structs and their text renderings.
//!
//! Every rational is reported exactly as `"p/q"` next to a decimal
//! approximation; witnesses are always included when a check fails, and
//! ensemble verdicts always name the policy horizon they were decided
//! under.

use num_traits::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use secdiag_core::ensemble::system::AbstractCryptoSystem;
use secdiag_core::ensemble::{
    AdvantageReport, CpaDiagramReport, EquivReport, GapWitness, NegligibilityPolicy,
};
use secdiag_core::shannon::{ShannonVerdict, ShannonSystem};
use secdiag_core::symbolic::{AlgebraicVerdict, DolevYaoSystem};
use secdiag_core::Rat;

use crate::ReuseArg;

/// An exact rational with a decimal approximation alongside.
#[derive(Debug, Clone, Serialize)]
pub struct RatView {
    pub exact: String,
    pub approx: Option<f64>,
}

impl RatView {
    pub fn new(r: &Rat) -> Self {
        RatView {
            exact: format!("{r}"),
            approx: r.to_f64().filter(|f| f.is_finite()),
        }
    }

    pub fn text(&self) -> String {
        match self.approx {
            Some(f) => format!("{} (~{f})", self.exact),
            None => self.exact.clone(),
        }
    }
}

fn verdict_word(secure: bool) -> &'static str {
    if secure {
        "SECURE"
    } else {
        "INSECURE"
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecryptionWitnessView {
    pub key: String,
    pub message: String,
    pub got: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlaintextWitnessView {
    pub cipher: String,
    pub message: String,
}

/// Possibilistic-security verdict.
#[derive(Debug, Clone, Serialize)]
pub struct DyReport {
    pub check: &'static str,
    pub secure: bool,
    /// Definition, possible-plaintext characterization, and Boolean
    /// diagram all returned the same verdict.
    pub routes_agree: bool,
    pub decryption_holds: bool,
    pub decryption_witness: Option<DecryptionWitnessView>,
    /// On failure: a ciphertext and a well-formed message no key connects.
    pub witness: Option<PlaintextWitnessView>,
}

impl DyReport {
    pub fn new(
        sys: &DolevYaoSystem,
        verdict: &AlgebraicVerdict,
        by_sets: bool,
        by_diagram: bool,
    ) -> Self {
        let label = |i: usize| sys.carrier().label(i).to_string();
        let decryption = sys.check_decryption_condition();
        DyReport {
            check: "possibilistic-security",
            secure: verdict.secure,
            routes_agree: verdict.secure == by_sets && verdict.secure == by_diagram,
            decryption_holds: decryption.is_ok(),
            decryption_witness: decryption.err().map(|w| DecryptionWitnessView {
                key: label(w.key),
                message: label(w.message),
                got: label(w.got),
            }),
            witness: verdict.witness.as_ref().map(|w| PlaintextWitnessView {
                cipher: label(w.cipher),
                message: label(w.message),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "possibilistic security: {}", verdict_word(self.secure));
        let _ = writeln!(out, "  routes agree: {}", yes_no(self.routes_agree));
        let _ = writeln!(
            out,
            "  decryption condition: {}",
            if self.decryption_holds { "holds" } else { "violated" }
        );
        if let Some(w) = &self.decryption_witness {
            let _ = writeln!(
                out,
                "    witness: dec(pair(\"{}\"), enc(\"{}\", \"{}\")) = \"{}\"",
                w.key, w.key, w.message, w.got
            );
        }
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "  witness: no key encrypts well-formed \"{}\" to \"{}\"",
                w.message, w.cipher
            );
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PosteriorWitnessView {
    pub cipher: String,
    pub posterior: BTreeMap<String, RatView>,
    pub prior: BTreeMap<String, RatView>,
}

/// Perfect-secrecy verdict.
#[derive(Debug, Clone, Serialize)]
pub struct ShannonReport {
    pub check: &'static str,
    pub secure: bool,
    /// Direct posterior comparison and stochastic diagram agreed.
    pub routes_agree: bool,
    /// On failure: an achievable ciphertext whose posterior differs from
    /// the prior.
    pub witness: Option<PosteriorWitnessView>,
}

impl ShannonReport {
    pub fn new(sys: &ShannonSystem, verdict: &ShannonVerdict, by_diagram: bool) -> Self {
        let label = |i: usize| sys.carrier().label(i).to_string();
        ShannonReport {
            check: "perfect-secrecy",
            secure: verdict.secure,
            routes_agree: verdict.secure == by_diagram,
            witness: verdict.witness.as_ref().map(|w| PosteriorWitnessView {
                cipher: label(w.cipher),
                posterior: w
                    .posterior
                    .iter()
                    .enumerate()
                    .map(|(m, p)| (label(m), RatView::new(p)))
                    .collect(),
                prior: w
                    .prior
                    .iter()
                    .enumerate()
                    .map(|(m, p)| (label(m), RatView::new(p)))
                    .collect(),
            }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "perfect secrecy: {}", verdict_word(self.secure));
        let _ = writeln!(out, "  routes agree: {}", yes_no(self.routes_agree));
        if let Some(w) = &self.witness {
            let _ = writeln!(out, "  witness: ciphertext \"{}\" shifts the prior", w.cipher);
            for (label, post) in &w.posterior {
                let prior = &w.prior[label];
                let _ = writeln!(
                    out,
                    "    message \"{}\": posterior {}, prior {}",
                    label,
                    post.text(),
                    prior.text()
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GapWitnessView {
    pub level: usize,
    pub gap: RatView,
    pub threshold: RatView,
}

impl GapWitnessView {
    fn new(w: &GapWitness) -> Self {
        GapWitnessView {
            level: w.level,
            gap: RatView::new(&w.gap),
            threshold: RatView::new(&w.threshold),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelView {
    pub level: usize,
    /// Exact probability of a correct guess at this level.
    pub correct: RatView,
    /// Distance from the fair coin.
    pub gap: RatView,
    /// Largest gap the policy tolerates at this level.
    pub threshold: RatView,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdversaryView {
    pub name: String,
    pub passes: bool,
    pub levels: Vec<LevelView>,
    pub witness: Option<GapWitnessView>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdvantageView {
    pub level: usize,
    /// Best single-challenge distinguishing advantage at this level.
    pub advantage: RatView,
    /// The same optimum by accept-set enumeration, absent above the
    /// enumeration width cap.
    pub enumeration: Option<RatView>,
    /// Message labels attaining the optimum, when it is positive.
    pub best_pair: Option<[String; 2]>,
}

/// Chosen-plaintext verdict over an adversary corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CpaReport {
    pub check: &'static str,
    pub horizon: usize,
    pub secure: bool,
    /// Operational and matrix-pipeline evaluations agreed exactly.
    pub routes_agree: bool,
    pub adversaries: Vec<AdversaryView>,
    pub advantage: Vec<AdvantageView>,
}

fn threshold_view(policy: &NegligibilityPolicy, level: usize) -> RatView {
    let t = policy
        .threshold(level)
        .expect("levels filtered to the policy horizon");
    RatView::new(&t)
}

impl CpaReport {
    pub fn new(
        sys: &AbstractCryptoSystem,
        report: &CpaDiagramReport,
        routes_agree: bool,
        policy: &NegligibilityPolicy,
        advantage: &[(usize, AdvantageReport)],
        only_level: Option<usize>,
    ) -> Self {
        let msg_label = |i: usize| sys.msg_sort().labels().label(i).to_string();
        let adversaries = report
            .adversaries
            .iter()
            .map(|a| AdversaryView {
                name: a.name.clone(),
                passes: a.passes,
                levels: a
                    .levels
                    .iter()
                    .filter(|l| only_level.is_none_or(|only| only == l.level))
                    .map(|l| LevelView {
                        level: l.level,
                        correct: RatView::new(&l.correct),
                        gap: RatView::new(&l.gap),
                        threshold: threshold_view(policy, l.level),
                    })
                    .collect(),
                witness: a.witness.as_ref().map(GapWitnessView::new),
            })
            .collect();
        let advantage = advantage
            .iter()
            .map(|(level, adv)| AdvantageView {
                level: *level,
                advantage: RatView::new(&adv.advantage),
                enumeration: adv.enumeration.as_ref().map(RatView::new),
                best_pair: adv.best_pair.map(|(a, b)| [msg_label(a), msg_label(b)]),
            })
            .collect();
        CpaReport {
            check: "ind-cpa",
            horizon: policy.max_level(),
            secure: report.secure,
            routes_agree,
            adversaries,
            advantage,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ind-cpa: {} (horizon {})",
            verdict_word(self.secure),
            self.horizon
        );
        let _ = writeln!(out, "  routes agree: {}", yes_no(self.routes_agree));
        if self.adversaries.is_empty() {
            let _ = writeln!(out, "  empty adversary corpus: vacuously secure");
        }
        for a in &self.adversaries {
            let _ = writeln!(
                out,
                "  adversary \"{}\": {}",
                a.name,
                if a.passes { "passes" } else { "distinguishes" }
            );
            for l in &a.levels {
                let _ = writeln!(
                    out,
                    "    level {}: correct {}, gap {}, threshold {}",
                    l.level,
                    l.correct.text(),
                    l.gap.text(),
                    l.threshold.text()
                );
            }
            if let Some(w) = &a.witness {
                let _ = writeln!(
                    out,
                    "    witness: level {} gap {} exceeds threshold {}",
                    w.level,
                    w.gap.text(),
                    w.threshold.text()
                );
            }
        }
        for adv in &self.advantage {
            let enumeration = match &adv.enumeration {
                Some(e) => format!(", enumeration {}", e.text()),
                None => ", enumeration skipped (width cap)".to_string(),
            };
            let pair = match &adv.best_pair {
                Some([a, b]) => format!(", best pair (\"{a}\", \"{b}\")"),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "  advantage level {}: {}{enumeration}{pair}",
                adv.level,
                adv.advantage.text()
            );
        }
        out
    }
}

/// Adaptive chosen-ciphertext verdict over an adversary corpus.
#[derive(Debug, Clone, Serialize)]
pub struct CcaReport {
    pub check: &'static str,
    pub horizon: usize,
    /// How a replayed challenge ciphertext was scored.
    pub reuse: &'static str,
    pub secure: bool,
    pub adversaries: Vec<AdversaryView>,
}

impl CcaReport {
    pub fn new(
        reuse: ReuseArg,
        policy: &NegligibilityPolicy,
        rows: &[(String, Vec<Rat>, Vec<Rat>, EquivReport)],
        only_level: Option<usize>,
    ) -> Self {
        let adversaries: Vec<AdversaryView> = rows
            .iter()
            .map(|(name, probs, gaps, equiv)| AdversaryView {
                name: name.clone(),
                passes: equiv.equivalent,
                levels: (1..=policy.max_level())
                    .filter(|l| only_level.is_none_or(|only| only == *l))
                    .map(|l| LevelView {
                        level: l,
                        correct: RatView::new(&probs[l - 1]),
                        gap: RatView::new(&gaps[l - 1]),
                        threshold: threshold_view(policy, l),
                    })
                    .collect(),
                witness: equiv.witness.as_ref().map(GapWitnessView::new),
            })
            .collect();
        CcaReport {
            check: "ind-cca2",
            horizon: policy.max_level(),
            reuse: reuse.label(),
            secure: adversaries.iter().all(|a| a.passes),
            adversaries,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "ind-cca2: {} (horizon {}, challenge reuse {})",
            verdict_word(self.secure),
            self.horizon,
            self.reuse
        );
        if self.adversaries.is_empty() {
            let _ = writeln!(out, "  empty adversary corpus: vacuously secure");
        }
        for a in &self.adversaries {
            let _ = writeln!(
                out,
                "  adversary \"{}\": {}",
                a.name,
                if a.passes { "passes" } else { "distinguishes" }
            );
            for l in &a.levels {
                let _ = writeln!(
                    out,
                    "    level {}: correct {}, gap {}, threshold {}",
                    l.level,
                    l.correct.text(),
                    l.gap.text(),
                    l.threshold.text()
                );
            }
            if let Some(w) = &a.witness {
                let _ = writeln!(
                    out,
                    "    witness: level {} gap {} exceeds threshold {}",
                    w.level,
                    w.gap.text(),
                    w.threshold.text()
                );
            }
        }
        out
    }
}
