//! Programmatic constructors for the repository's fixture corpus.
//!
//! Every file under `fixtures/` is generated here; a sync test asserts the
//! committed files match these constructors byte for byte, and an ignored
//! regeneration test rewrites them after intentional changes.

use std::collections::BTreeMap;

use secdiag_core::ensemble::{CcaAdversary, CpaAdversary, FeasibleEnsemble, RandomizedFn};
use secdiag_core::Bits;

use crate::formats::{AdversaryFile, EnsembleFile, FnFile, PolicyFile, SystemFile, ThresholdSpec};

fn decimal_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn uniform_map(labels: &[String]) -> BTreeMap<String, String> {
    labels
        .iter()
        .map(|l| (l.clone(), format!("1/{}", labels.len())))
        .collect()
}

/// Bitwise-xor pad on `bits`-bit blocks, as a flat system over the
/// carrier `{0, …, 2^bits - 1}`: every key row is a permutation, uniform
/// keys make it perfectly secret for any plaintext distribution.
fn xor_system(bits: usize, mu: BTreeMap<String, String>) -> SystemFile {
    let n = 1usize << bits;
    let labels = decimal_labels(n);
    let table: Vec<Vec<String>> = (0..n)
        .map(|k| (0..n).map(|m| (k ^ m).to_string()).collect())
        .collect();
    SystemFile {
        carrier: labels.clone(),
        enc: table.clone(),
        dec: table,
        pair: labels.clone(),
        wellformed: Some(labels.clone()),
        kappa: Some(uniform_map(&labels)),
        mu: Some(mu),
    }
}

fn otp1() -> SystemFile {
    let labels = decimal_labels(2);
    let mut mu = BTreeMap::new();
    mu.insert(labels[0].clone(), "2/3".to_string());
    mu.insert(labels[1].clone(), "1/3".to_string());
    xor_system(1, mu)
}

fn otp2() -> SystemFile {
    xor_system(2, uniform_map(&decimal_labels(4)))
}

fn otp3() -> SystemFile {
    xor_system(3, uniform_map(&decimal_labels(8)))
}

/// The shift cipher on the Latin alphabet: addition modulo 26 with
/// uniform keys.
fn shift26() -> SystemFile {
    let labels: Vec<String> = ('a'..='z').map(|c| c.to_string()).collect();
    let n = labels.len();
    let enc: Vec<Vec<String>> = (0..n)
        .map(|k| (0..n).map(|m| labels[(k + m) % n].clone()).collect())
        .collect();
    SystemFile {
        carrier: labels.clone(),
        enc: enc.clone(),
        dec: enc,
        pair: (0..n).map(|k| labels[(n - k) % n].clone()).collect(),
        wellformed: Some(labels.clone()),
        kappa: Some(uniform_map(&labels)),
        mu: Some(uniform_map(&labels)),
    }
}

/// Sends every message to itself regardless of the key: decryptable and
/// maximally leaky.
fn identity() -> SystemFile {
    let labels = decimal_labels(2);
    let table: Vec<Vec<String>> = (0..2)
        .map(|_| labels.to_vec())
        .collect();
    SystemFile {
        carrier: labels.clone(),
        enc: table.clone(),
        dec: table,
        pair: labels.clone(),
        wellformed: Some(labels.clone()),
        kappa: Some(uniform_map(&labels)),
        mu: Some(uniform_map(&labels)),
    }
}

/// Applies the same permutation whatever the key: the ciphertext
/// determines the message.
fn fixed_key() -> SystemFile {
    let labels = decimal_labels(3);
    let enc: Vec<Vec<String>> = (0..3)
        .map(|_| (0..3).map(|m| ((m + 1) % 3).to_string()).collect())
        .collect();
    let dec: Vec<Vec<String>> = (0..3)
        .map(|_| (0..3).map(|c| ((c + 2) % 3).to_string()).collect())
        .collect();
    SystemFile {
        carrier: labels.clone(),
        enc,
        dec,
        pair: labels.clone(),
        wellformed: Some(labels.clone()),
        kappa: Some(uniform_map(&labels)),
        mu: Some(uniform_map(&labels)),
    }
}

/// Encrypts everything to `"0"`: decryption cannot work, and the unused
/// ciphertext `"1"` has no well-formed preimage. No distributions — the
/// perfect-secrecy constructor rightly rejects it.
fn constant() -> SystemFile {
    let labels = decimal_labels(2);
    let zero_row = vec!["0".to_string(), "0".to_string()];
    SystemFile {
        carrier: labels.clone(),
        enc: vec![zero_row.clone(), zero_row.clone()],
        dec: vec![zero_row.clone(), zero_row],
        pair: labels.clone(),
        wellformed: Some(labels),
        kappa: None,
        mu: None,
    }
}

fn code(width: usize, value: u64) -> Bits {
    Bits::new(width, value).expect("widths stay small")
}

fn family(levels: Vec<RandomizedFn>) -> Vec<FnFile> {
    let ensemble = FeasibleEnsemble::new(levels).expect("fixture profiles grow");
    ensemble.levels().iter().map(FnFile::from_randomized).collect()
}

/// Tables defined exactly on the label codes: the reachable rows of each
/// experiment, nothing else.
struct LeveledTables {
    enc: Vec<RandomizedFn>,
    dec: Vec<RandomizedFn>,
    pair: Vec<RandomizedFn>,
    keygen: Vec<RandomizedFn>,
}

fn leveled_tables(levels: usize, enc_rule: impl Fn(&Bits, &Bits) -> Bits) -> LeveledTables {
    let mut tables = LeveledTables {
        enc: Vec::new(),
        dec: Vec::new(),
        pair: Vec::new(),
        keygen: Vec::new(),
    };
    for l in 1..=levels {
        let codes = [code(l, 0), code(l, 1)];
        let mut enc = Vec::new();
        let mut dec = Vec::new();
        for k in &codes {
            for m in &codes {
                let c = enc_rule(k, m);
                let empty = Bits::parse("").unwrap();
                enc.push(((empty, k.concat(m).unwrap()), c));
                // Deterministic rules invert on the code rows: decryption
                // reads off the message that encrypts to each ciphertext.
                dec.push(((empty, k.concat(&c).unwrap()), *m));
            }
        }
        tables
            .enc
            .push(RandomizedFn::from_entries(0, 2 * l, l, enc).expect("consistent widths"));
        tables
            .dec
            .push(RandomizedFn::from_entries(0, 2 * l, l, dec).expect("consistent widths"));
        let empty = Bits::parse("").unwrap();
        tables.pair.push(
            RandomizedFn::from_entries(
                0,
                l,
                l,
                codes.iter().map(|k| ((empty, *k), *k)),
            )
            .expect("consistent widths"),
        );
        // One key bit from the seed, duplicated into key and shadow key.
        let keygen = Bits::all(l).map(|seed| {
            let k = code(l, seed.bit(l - 1) as u64);
            ((seed, Bits::zeros(l).unwrap()), k.concat(&k).unwrap())
        });
        tables
            .keygen
            .push(RandomizedFn::from_entries(l, l, 2 * l, keygen).expect("consistent widths"));
    }
    tables
}

fn leveled_file(levels: usize, enc_rule: impl Fn(&Bits, &Bits) -> Bits) -> EnsembleFile {
    let tables = leveled_tables(levels, enc_rule);
    let labels = decimal_labels(2);
    let widths: Vec<usize> = (1..=levels).collect();
    EnsembleFile {
        labels: labels.clone(),
        key_widths: widths.clone(),
        msg_widths: widths.clone(),
        cipher_widths: widths,
        enc: family(tables.enc),
        dec: family(tables.dec),
        pair: family(tables.pair),
        keygen: family(tables.keygen),
        mu: uniform_map(&labels),
    }
}

/// The one-time pad as a leveled system: level ℓ xors ℓ-bit blocks.
/// Perfectly message-hiding — and trivially malleable, so it separates
/// the chosen-plaintext and chosen-ciphertext notions in one file.
fn otp_levels() -> EnsembleFile {
    leveled_file(5, |k, m| k.xor(m).expect("equal widths"))
}

/// A leveled system that ignores the key and emits the message.
fn ident_levels() -> EnsembleFile {
    leveled_file(5, |_, m| *m)
}

/// Chooses messages 0 and 1 and guesses by matching the challenge against
/// the second choice: breaks any system whose ciphertext is the message.
fn distinguisher() -> AdversaryFile {
    let levels = 5;
    let mut a0 = Vec::new();
    let mut a1 = Vec::new();
    let empty = Bits::parse("").unwrap();
    for l in 1..=levels {
        let m0 = code(l, 0);
        let m1 = code(l, 1);
        let choice = m0.concat(&m1).unwrap();
        a0.push(
            RandomizedFn::from_entries(
                0,
                l,
                2 * l,
                [((empty, Bits::zeros(l).unwrap()), choice)],
            )
            .expect("consistent widths"),
        );
        let guesses = [m0, m1].map(|c| {
            let input = c.concat(&choice).unwrap();
            let guess = if c == m1 { code(l, 1) } else { code(l, 0) };
            ((empty, input), guess)
        });
        a1.push(RandomizedFn::from_entries(0, 3 * l, l, guesses).expect("consistent widths"));
    }
    AdversaryFile::from_cpa(&CpaAdversary {
        name: "distinguisher".into(),
        a0: FeasibleEnsemble::new(a0).expect("profiles grow"),
        a1: FeasibleEnsemble::new(a1).expect("profiles grow"),
        a0_takes_key: false,
    })
}

/// Chooses the same messages but always guesses 0: exactly a fair coin on
/// any system that loses no challenge mass.
fn ignore() -> AdversaryFile {
    let levels = 5;
    let mut a0 = Vec::new();
    let mut a1 = Vec::new();
    let empty = Bits::parse("").unwrap();
    for l in 1..=levels {
        let m0 = code(l, 0);
        let m1 = code(l, 1);
        let choice = m0.concat(&m1).unwrap();
        a0.push(
            RandomizedFn::from_entries(
                0,
                l,
                2 * l,
                [((empty, Bits::zeros(l).unwrap()), choice)],
            )
            .expect("consistent widths"),
        );
        let guesses = [m0, m1].map(|c| ((empty, c.concat(&choice).unwrap()), code(l, 0)));
        a1.push(RandomizedFn::from_entries(0, 3 * l, l, guesses).expect("consistent widths"));
    }
    AdversaryFile::from_cpa(&CpaAdversary {
        name: "ignore".into(),
        a0: FeasibleEnsemble::new(a0).expect("profiles grow"),
        a1: FeasibleEnsemble::new(a1).expect("profiles grow"),
        a0_takes_key: false,
    })
}

/// Flips the challenge's last bit, asks the oracle for the flipped
/// plaintext, and recovers the coin exactly — the classic malleability
/// attack on the xor pad, at every level.
fn bitflip() -> AdversaryFile {
    let levels = 5;
    let empty = Bits::parse("").unwrap();
    let mut a0 = Vec::new();
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    let mut a3 = Vec::new();
    for l in 1..=levels {
        let zero = code(l, 0);
        let one = code(l, 1);
        a0.push(RandomizedFn::from_entries(0, l, l, [((empty, zero), zero)]).unwrap());
        let choices = [zero, one]
            .map(|m| ((empty, zero.concat(&m).unwrap()), zero.concat(&one).unwrap()));
        a1.push(RandomizedFn::from_entries(0, 2 * l, 2 * l, choices).unwrap());
        let mut flips = Vec::new();
        let mut guesses = Vec::new();
        for m in [zero, one] {
            for c in [zero, one] {
                let flipped = c.xor(&one).unwrap();
                let head = zero
                    .concat(&m)
                    .unwrap()
                    .concat(&zero)
                    .unwrap()
                    .concat(&one)
                    .unwrap()
                    .concat(&c)
                    .unwrap();
                flips.push(((empty, head), flipped));
                for mt in [zero, one] {
                    let input = head.concat(&flipped).unwrap().concat(&mt).unwrap();
                    // The oracle answer is the flipped plaintext of the
                    // challenge, so flipping it back names the coin.
                    let guess = mt.xor(&one).unwrap();
                    guesses.push(((empty, input), guess));
                }
            }
        }
        a2.push(RandomizedFn::from_entries(0, 5 * l, l, flips).unwrap());
        a3.push(RandomizedFn::from_entries(0, 7 * l, l, guesses).unwrap());
    }
    let family = |fns: Vec<RandomizedFn>| FeasibleEnsemble::new(fns).expect("profiles grow");
    AdversaryFile::from_cca2(&CcaAdversary {
        name: "bitflip".into(),
        a0: family(a0),
        a1: family(a1),
        a2: family(a2),
        a3: family(a3),
    })
}

fn policy_default() -> PolicyFile {
    PolicyFile {
        max_level: 5,
        threshold: ThresholdSpec::Name("1/l^2".into()),
    }
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("fixtures serialize");
    s.push('\n');
    s
}

/// Every fixture file, as `(name, contents)`.
pub fn all() -> Vec<(&'static str, String)> {
    vec![
        ("otp1.json", pretty(&otp1())),
        ("otp2.json", pretty(&otp2())),
        ("otp3.json", pretty(&otp3())),
        ("shift26.json", pretty(&shift26())),
        ("identity.json", pretty(&identity())),
        ("fixed_key.json", pretty(&fixed_key())),
        ("constant.json", pretty(&constant())),
        ("otp_levels.json", pretty(&otp_levels())),
        ("ident_levels.json", pretty(&ident_levels())),
        ("distinguisher.json", pretty(&distinguisher())),
        ("ignore.json", pretty(&ignore())),
        ("bitflip.json", pretty(&bitflip())),
        ("policy_default.json", pretty(&policy_default())),
    ]
}
