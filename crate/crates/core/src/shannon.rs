//! Shannon cipher systems: exact-probability security over finite carriers.
//!
//! A [`ShannonSystem`] is a finite cipher system together with a key
//! distribution and a plaintext distribution, both exact rationals. Where
//! the possibilistic layer asks what *could* happen, this one asks what
//! happens *how often*: encryption under a random key becomes a
//! row-stochastic matrix, and perfect security means the posterior over
//! plaintexts given any achievable ciphertext equals the prior — seeing a
//! ciphertext moves no probability mass at all.
//!
//! The verdict is computed two ways and cross-checked elsewhere: directly,
//! by comparing every posterior against the prior, and as commutativity of
//! a square of matrices. One wiring note for the square: the edge from
//! achievable ciphertexts to key-message pairs carries the *conditional*
//! joint weight `Pr(k, m | c)` — the raw joint weight `κ(k)·μ(m)` at fixed
//! `c` sums to `Pr(c)`, not 1, so the raw entries do not form a stochastic
//! matrix and would compare a `Pr(c)`-scaled leg against an unscaled one.
//! Normalizing per achievable ciphertext is the unique scaling that makes
//! the edge stochastic, and it makes the square commute exactly when every
//! posterior equals the prior. Both legs keep a common uniform collapse
//! weight `1/n`; it cancels in the comparison.

use alloc::vec::Vec;

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError};
use crate::dist::{Dist, DistError};
use crate::encoded::FinSet;
use crate::matrix::{Matrix, MatrixError};
use crate::semiring::{rat, recip, Rat, Semiring};
use crate::symbolic::{DolevYaoSystem, SymbolicError};

/// Errors from Shannon-system construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShannonError {
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("{which} distribution covers {got} elements, carrier has {expected}")]
    DistLen {
        which: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("decryption fails on supported inputs: dec(pair({key}), enc({key}, {message})) = {got}")]
    DecryptionBroken {
        key: usize,
        message: usize,
        got: usize,
    },
    #[error("ciphertext {0} has probability zero under the key and plaintext distributions")]
    ZeroProbabilityCiphertext(usize),
    #[error("mix weight {0} is outside [0, 1]")]
    BadMixWeight(Rat),
    #[error("encryption kernel must be {rows}x{cols} and row-stochastic")]
    BadKernel { rows: usize, cols: usize },
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Failure evidence: an achievable ciphertext whose posterior differs from
/// the prior, with both distributions attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosteriorWitness {
    pub cipher: usize,
    pub posterior: Vec<Rat>,
    pub prior: Vec<Rat>,
}

/// Verdict of the direct perfect-security check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShannonVerdict {
    pub secure: bool,
    pub witness: Option<PosteriorWitness>,
}

/// A cipher system with exact key and plaintext distributions.
///
/// The operation tables live in an underlying [`DolevYaoSystem`] whose
/// well-formed set is the support of the plaintext distribution. The
/// constructor requires decryption to work on every supported key-plaintext
/// combination; systems violating that are rejected with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShannonSystem {
    base: DolevYaoSystem,
    key_dist: Dist,
    plaintext_dist: Dist,
}

/// `p·a + (1-p)·b`, entrywise; `p` must lie in `[0, 1]`.
pub fn convex_mix(p: &Rat, a: &Matrix<Rat>, b: &Matrix<Rat>) -> Result<Matrix<Rat>, ShannonError> {
    if *p < Rat::zero() || *p > rat(1, 1) {
        return Err(ShannonError::BadMixWeight(p.clone()));
    }
    let q = rat(1, 1) - p;
    Ok(a.scale(p).add(&b.scale(&q))?)
}

impl ShannonSystem {
    pub fn new(
        carrier: FinSet,
        enc: Vec<Vec<usize>>,
        dec: Vec<Vec<usize>>,
        pair: Vec<usize>,
        key_dist: Dist,
        plaintext_dist: Dist,
    ) -> Result<Self, ShannonError> {
        let n = carrier.len();
        if key_dist.len() != n {
            return Err(ShannonError::DistLen {
                which: "key",
                expected: n,
                got: key_dist.len(),
            });
        }
        if plaintext_dist.len() != n {
            return Err(ShannonError::DistLen {
                which: "plaintext",
                expected: n,
                got: plaintext_dist.len(),
            });
        }
        let wellformed = plaintext_dist.support();
        let base = DolevYaoSystem::new(carrier, enc, dec, pair, &wellformed)?;
        for &key in &key_dist.support() {
            for &message in &wellformed {
                let got = base.dec(base.pair(key), base.enc(key, message));
                if got != message {
                    return Err(ShannonError::DecryptionBroken { key, message, got });
                }
            }
        }
        Ok(ShannonSystem {
            base,
            key_dist,
            plaintext_dist,
        })
    }

    pub fn carrier(&self) -> &FinSet {
        self.base.carrier()
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn enc(&self, key: usize, message: usize) -> usize {
        self.base.enc(key, message)
    }

    pub fn dec(&self, key: usize, cipher: usize) -> usize {
        self.base.dec(key, cipher)
    }

    pub fn pair(&self, key: usize) -> usize {
        self.base.pair(key)
    }

    pub fn key_dist(&self) -> &Dist {
        &self.key_dist
    }

    pub fn plaintext_dist(&self) -> &Dist {
        &self.plaintext_dist
    }

    /// The possibilistic shadow of this system: probabilities forgotten,
    /// well-formed set = support of the plaintext distribution.
    pub fn to_dolev_yao(&self) -> DolevYaoSystem {
        self.base.clone()
    }

    /// Key-averaged encryption as a matrix: `entry(m, c)` is the
    /// probability that message `m` encrypts to `c` under a random key.
    /// Row-stochastic by construction.
    pub fn encryption_matrix(&self) -> Matrix<Rat> {
        let n = self.n();
        let mut out = Matrix::zero(n, n);
        for key in self.key_dist.support() {
            for m in 0..n {
                let c = self.enc(key, m);
                let cur = out.entry(m, c) + self.key_dist.prob(key);
                out.set(m, c, cur);
            }
        }
        out
    }

    /// Key-averaged decryption: `entry(c, m)` is the probability that `c`
    /// decrypts to `m` when each key `k` is drawn and `pair(k)` decrypts.
    pub fn decryption_matrix(&self) -> Matrix<Rat> {
        let n = self.n();
        let mut out = Matrix::zero(n, n);
        for key in self.key_dist.support() {
            for c in 0..n {
                let m = self.dec(self.pair(key), c);
                let cur = out.entry(c, m) + self.key_dist.prob(key);
                out.set(c, m, cur);
            }
        }
        out
    }

    /// The ciphertext distribution: plaintext prior pushed through the
    /// encryption matrix.
    pub fn ciphertext_distribution(&self) -> Vec<Rat> {
        self.plaintext_dist
            .push(&self.encryption_matrix())
            .expect("square matrix matches distribution length")
    }

    /// Carrier elements with positive ciphertext probability, ascending.
    pub fn achievable_ciphertexts(&self) -> Vec<usize> {
        let gamma = self.ciphertext_distribution();
        (0..self.n()).filter(|&c| gamma[c] > Rat::zero()).collect()
    }

    /// Bayes posterior over plaintexts given `cipher`, on the full carrier
    /// base (zero mass outside the prior's support). Ciphertexts that can
    /// never occur are an explicit error.
    pub fn posterior(&self, cipher: usize) -> Result<Dist, ShannonError> {
        if cipher >= self.n() {
            return Err(SymbolicError::ElementOutOfRange(cipher, self.n()).into());
        }
        let enc = self.encryption_matrix();
        let gamma: Rat = (0..self.n())
            .map(|m| self.plaintext_dist.prob(m) * enc.entry(m, cipher))
            .sum();
        if gamma.is_zero() {
            return Err(ShannonError::ZeroProbabilityCiphertext(cipher));
        }
        let probs = (0..self.n())
            .map(|m| self.plaintext_dist.prob(m) * enc.entry(m, cipher) / &gamma)
            .collect();
        Ok(Dist::new(probs)?)
    }

    /// Perfect security, decided directly: every achievable ciphertext's
    /// posterior must equal the prior. The witness is the first achievable
    /// ciphertext (ascending) whose posterior differs.
    pub fn is_perfectly_secure_direct(&self) -> ShannonVerdict {
        for c in self.achievable_ciphertexts() {
            let posterior = self
                .posterior(c)
                .expect("achievable ciphertexts have positive probability");
            if posterior != *self.plaintext_dist() {
                return ShannonVerdict {
                    secure: false,
                    witness: Some(PosteriorWitness {
                        cipher: c,
                        posterior: posterior.probs().to_vec(),
                        prior: self.plaintext_dist.probs().to_vec(),
                    }),
                };
            }
        }
        ShannonVerdict {
            secure: true,
            witness: None,
        }
    }

    /// The stochastic security square for the deterministic encryption
    /// table. See [`Self::sto_security_diagram_with_kernel`].
    pub fn sto_security_diagram(&self) -> Result<Diagram<Rat>, ShannonError> {
        let n = self.n();
        let kernel = Matrix::from_function(n * n, n, |km| self.enc(km / n, km % n));
        self.sto_security_diagram_with_kernel(&kernel)
    }

    /// The stochastic security square, generalized to a randomized
    /// encryption kernel (rows: key-message pairs `k·n + m`; columns:
    /// ciphertexts; row-stochastic). The deterministic table is the special
    /// case where each row is a point mass.
    ///
    /// Objects: `achievable-ciphertexts` (positive-probability ciphertexts),
    /// `key-message-pairs`, `unit`, and `messages`. Edges:
    ///
    /// * `posterior-joint`: `entry(c, (k,m)) = Pr(k, m | c)` — the joint
    ///   weight `κ(k)·μ(m)·Pr(c|k,m)` normalized by `Pr(c)`, which is what
    ///   makes this edge row-stochastic;
    /// * `keep-message`: projects `(k, m)` to `m`, scaled by the uniform
    ///   collapse weight `1/n`;
    /// * `collapse`: constant `1/n` map to the point;
    /// * `prior`: the plaintext distribution as a row.
    ///
    /// Both composite legs then compute `1/n · Pr(m'|c)` and `1/n · μ(m')`,
    /// so the square commutes exactly when the system is perfectly secure.
    pub fn sto_security_diagram_with_kernel(
        &self,
        kernel: &Matrix<Rat>,
    ) -> Result<Diagram<Rat>, ShannonError> {
        let n = self.n();
        if kernel.rows() != n * n || kernel.cols() != n || !kernel.is_row_stochastic() {
            return Err(ShannonError::BadKernel {
                rows: n * n,
                cols: n,
            });
        }
        // Joint weight of (k, m, c), then the ciphertext marginal.
        let joint = |k: usize, m: usize, c: usize| -> Rat {
            self.key_dist.prob(k) * self.plaintext_dist.prob(m) * kernel.entry(k * n + m, c)
        };
        let mut gamma = alloc::vec![Rat::zero(); n];
        for k in 0..n {
            for m in 0..n {
                for (c, g) in gamma.iter_mut().enumerate() {
                    *g += joint(k, m, c);
                }
            }
        }
        let achievable: Vec<usize> = (0..n).filter(|&c| gamma[c] > Rat::zero()).collect();

        let mut d = Diagram::new();
        let ciphers = d.add_object("achievable-ciphertexts", achievable.len())?;
        let pairs = d.add_object("key-message-pairs", n * n)?;
        let unit = d.add_object("unit", 1)?;
        let messages = d.add_object("messages", n)?;

        let posterior_joint = Matrix::from_fn(achievable.len(), n * n, |ci, km| {
            let c = achievable[ci];
            joint(km / n, km % n, c) / &gamma[c]
        });
        let keep_message =
            Matrix::<Rat>::from_function(n * n, n, |km| km % n).scale(&recip(n as i64));
        let collapse = Matrix::from_fn(achievable.len(), 1, |_, _| recip(n as i64));
        let prior = self.plaintext_dist.as_row();

        d.add_edge("posterior-joint", ciphers, pairs, posterior_joint)?;
        d.add_edge("keep-message", pairs, messages, keep_message)?;
        d.add_edge("collapse", ciphers, unit, collapse)?;
        d.add_edge("prior", unit, messages, prior)?;
        Ok(d)
    }

    /// Convenience: the diagram-route verdict.
    pub fn secure_by_diagram(&self) -> Result<bool, ShannonError> {
        Ok(self.sto_security_diagram()?.check_commutes()?.commutes())
    }

    /// Replaces the key distribution, revalidating the support condition.
    pub fn with_key_dist(&self, key_dist: Dist) -> Result<Self, ShannonError> {
        ShannonSystem::new(
            self.base.carrier().clone(),
            (0..self.n())
                .map(|k| (0..self.n()).map(|m| self.enc(k, m)).collect())
                .collect(),
            (0..self.n())
                .map(|k| (0..self.n()).map(|c| self.dec(k, c)).collect())
                .collect(),
            (0..self.n()).map(|k| self.pair(k)).collect(),
            key_dist,
            self.plaintext_dist.clone(),
        )
    }

    /// Checks that averaging keys commutes with mixing: the encryption and
    /// decryption matrices of the mixture `p·δ_k + (1-p)·δ_h` must equal the
    /// convex mixes of the point-mass matrices.
    pub fn convexity_check(&self, p: &Rat, k: usize, h: usize) -> Result<bool, ShannonError> {
        let n = self.n();
        if k >= n {
            return Err(SymbolicError::ElementOutOfRange(k, n).into());
        }
        if h >= n {
            return Err(SymbolicError::ElementOutOfRange(h, n).into());
        }
        if *p < Rat::zero() || *p > rat(1, 1) {
            return Err(ShannonError::BadMixWeight(p.clone()));
        }
        let mut probs = alloc::vec![Rat::zero(); n];
        probs[k] += p;
        probs[h] += rat(1, 1) - p;
        let mixed = self.with_key_dist(Dist::new(probs)?)?;
        let at_k = self.with_key_dist(Dist::point(n, k)?)?;
        let at_h = self.with_key_dist(Dist::point(n, h)?)?;
        let enc_mix = convex_mix(p, &at_k.encryption_matrix(), &at_h.encryption_matrix())?;
        let dec_mix = convex_mix(p, &at_k.decryption_matrix(), &at_h.decryption_matrix())?;
        Ok(mixed.encryption_matrix() == enc_mix && mixed.decryption_matrix() == dec_mix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::rat;

    fn z2() -> FinSet {
        FinSet::new(["0", "1"]).unwrap()
    }

    fn xor_tables() -> (Vec<Vec<usize>>, Vec<Vec<usize>>, Vec<usize>) {
        let t = alloc::vec![alloc::vec![0, 1], alloc::vec![1, 0]];
        (t.clone(), t, alloc::vec![0, 1])
    }

    fn otp(key_dist: Dist, plaintext_dist: Dist) -> ShannonSystem {
        let (enc, dec, pair) = xor_tables();
        ShannonSystem::new(z2(), enc, dec, pair, key_dist, plaintext_dist).unwrap()
    }

    fn identity_cipher() -> ShannonSystem {
        let t = alloc::vec![alloc::vec![0, 1], alloc::vec![0, 1]];
        ShannonSystem::new(
            z2(),
            t.clone(),
            t,
            alloc::vec![0, 1],
            Dist::uniform(2).unwrap(),
            Dist::uniform(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_key_encryption_matrix_is_flat() {
        let s = otp(Dist::uniform(2).unwrap(), Dist::uniform(2).unwrap());
        let e = s.encryption_matrix();
        for m in 0..2 {
            for c in 0..2 {
                assert_eq!(*e.entry(m, c), rat(1, 2));
            }
        }
        assert!(e.is_row_stochastic());
        assert_eq!(s.decryption_matrix(), e);
    }

    #[test]
    fn point_mass_key_gives_the_deterministic_graph() {
        let s = otp(Dist::point(2, 1).unwrap(), Dist::uniform(2).unwrap());
        // Key fixed to 1: m encrypts to 1 xor m.
        assert_eq!(s.encryption_matrix(), Matrix::from_function(2, 2, |m| 1 - m));
    }

    #[test]
    fn shift_cipher_on_three_elements_is_flat() {
        let carrier = FinSet::new(["0", "1", "2"]).unwrap();
        let add = |k: usize, m: usize| (k + m) % 3;
        let sub = |k: usize, c: usize| (3 + c - k) % 3;
        let enc: Vec<Vec<usize>> = (0..3).map(|k| (0..3).map(|m| add(k, m)).collect()).collect();
        let dec: Vec<Vec<usize>> = (0..3).map(|k| (0..3).map(|c| sub(k, c)).collect()).collect();
        let s = ShannonSystem::new(
            carrier,
            enc,
            dec,
            alloc::vec![0, 1, 2],
            Dist::uniform(3).unwrap(),
            Dist::uniform(3).unwrap(),
        )
        .unwrap();
        let e = s.encryption_matrix();
        for m in 0..3 {
            for c in 0..3 {
                assert_eq!(*e.entry(m, c), rat(1, 3));
            }
        }
        assert_eq!(s.decryption_matrix(), e);
        assert!(s.is_perfectly_secure_direct().secure);
    }

    #[test]
    fn skewed_prior_survives_the_one_time_pad() {
        let mu = Dist::new(alloc::vec![rat(2, 3), rat(1, 3)]).unwrap();
        let s = otp(Dist::uniform(2).unwrap(), mu.clone());
        let post = s.posterior(0).unwrap();
        assert_eq!(post, mu);
        assert!(s.is_perfectly_secure_direct().secure);
        assert!(s.secure_by_diagram().unwrap());
    }

    #[test]
    fn identity_cipher_posterior_collapses_to_a_point() {
        let s = identity_cipher();
        assert_eq!(s.posterior(0).unwrap(), Dist::point(2, 0).unwrap());
        let verdict = s.is_perfectly_secure_direct();
        assert!(!verdict.secure);
        let w = verdict.witness.unwrap();
        assert_eq!(w.cipher, 0);
        assert_eq!(w.posterior, alloc::vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(w.prior, alloc::vec![rat(1, 2), rat(1, 2)]);
        assert!(!s.secure_by_diagram().unwrap());
    }

    #[test]
    fn skewed_keys_break_the_pad_under_a_uniform_prior() {
        let kappa = Dist::new(alloc::vec![rat(3, 4), rat(1, 4)]).unwrap();
        let s = otp(kappa, Dist::uniform(2).unwrap());
        let verdict = s.is_perfectly_secure_direct();
        assert!(!verdict.secure);
        let w = verdict.witness.unwrap();
        assert_eq!(w.cipher, 0);
        assert_eq!(w.posterior, alloc::vec![rat(3, 4), rat(1, 4)]);
        assert!(!s.secure_by_diagram().unwrap());
    }

    #[test]
    fn skewed_keys_with_a_known_plaintext_are_still_secure() {
        // Point-mass prior: the posterior is forced to equal it, whatever
        // the key skew. Both routes must agree on "secure".
        let kappa = Dist::new(alloc::vec![rat(3, 4), rat(1, 4)]).unwrap();
        let s = otp(kappa, Dist::point(2, 0).unwrap());
        assert!(s.is_perfectly_secure_direct().secure);
        assert!(s.secure_by_diagram().unwrap());
    }

    #[test]
    fn zero_probability_ciphertext_is_an_explicit_error() {
        let s = otp(Dist::point(2, 0).unwrap(), Dist::point(2, 0).unwrap());
        // Key 0 and message 0 force ciphertext 0; ciphertext 1 never occurs.
        assert_eq!(s.achievable_ciphertexts(), alloc::vec![0]);
        assert!(matches!(
            s.posterior(1),
            Err(ShannonError::ZeroProbabilityCiphertext(1))
        ));
    }

    #[test]
    fn diagram_mismatch_entries_are_the_scaled_posterior_and_prior() {
        let d = identity_cipher().sto_security_diagram().unwrap();
        let report = d.check_commutes().unwrap();
        assert!(!report.commutes());
        let m = &report.mismatches[0];
        assert_eq!(m.source, "achievable-ciphertexts");
        assert_eq!((m.row, m.col), (0, 0));
        let vals = [m.left_value.clone(), m.right_value.clone()];
        assert!(vals.contains(&rat(1, 2)) && vals.contains(&rat(1, 4)));
    }

    #[test]
    fn singleton_carrier_commutes() {
        let s = ShannonSystem::new(
            FinSet::new(["x"]).unwrap(),
            alloc::vec![alloc::vec![0]],
            alloc::vec![alloc::vec![0]],
            alloc::vec![0],
            Dist::uniform(1).unwrap(),
            Dist::uniform(1).unwrap(),
        )
        .unwrap();
        assert!(s.is_perfectly_secure_direct().secure);
        assert!(s.secure_by_diagram().unwrap());
    }

    #[test]
    fn broken_decryption_on_support_is_rejected() {
        // enc constant 0 cannot decrypt message 1.
        let enc = alloc::vec![alloc::vec![0, 0], alloc::vec![0, 0]];
        let dec = alloc::vec![alloc::vec![0, 1], alloc::vec![0, 1]];
        let err = ShannonSystem::new(
            z2(),
            enc,
            dec,
            alloc::vec![0, 1],
            Dist::uniform(2).unwrap(),
            Dist::uniform(2).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ShannonError::DecryptionBroken {
                key: 0,
                message: 1,
                got: 0
            }
        ));
    }

    #[test]
    fn convexity_holds_for_the_pad_and_trivially_at_p_one() {
        let s = otp(Dist::uniform(2).unwrap(), Dist::uniform(2).unwrap());
        assert!(s.convexity_check(&rat(1, 1), 0, 1).unwrap());
        assert!(s.convexity_check(&rat(1, 2), 0, 1).unwrap());
        assert!(s.convexity_check(&rat(2, 7), 1, 1).unwrap());
    }

    #[test]
    fn mixing_half_half_gives_the_flat_matrix() {
        let s = otp(Dist::uniform(2).unwrap(), Dist::uniform(2).unwrap());
        let at0 = s.with_key_dist(Dist::point(2, 0).unwrap()).unwrap();
        let at1 = s.with_key_dist(Dist::point(2, 1).unwrap()).unwrap();
        let mix = convex_mix(
            &rat(1, 2),
            &at0.encryption_matrix(),
            &at1.encryption_matrix(),
        )
        .unwrap();
        assert_eq!(mix, s.encryption_matrix());
    }

    #[test]
    fn secure_full_support_systems_have_secure_possibilistic_shadows() {
        let s = otp(Dist::uniform(2).unwrap(), Dist::uniform(2).unwrap());
        assert!(s.is_perfectly_secure_direct().secure);
        assert!(s.to_dolev_yao().secure_by_definition().secure);
    }

    #[test]
    fn randomized_kernel_square_accepts_coin_flip_encryption() {
        // Encryption ignores key and message and outputs a fair coin: the
        // posterior equals the prior, so the square commutes.
        let s = otp(Dist::uniform(2).unwrap(), Dist::uniform(2).unwrap());
        let kernel = Matrix::from_fn(4, 2, |_, _| rat(1, 2));
        let d = s.sto_security_diagram_with_kernel(&kernel).unwrap();
        assert!(d.check_commutes().unwrap().commutes());
    }
}
