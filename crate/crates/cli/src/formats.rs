//! JSON file schemas and their conversions into core types.
//!
//! All conversions return `Err(String)` with enough context to locate the
//! offending field; the caller prefixes the file path.
//!
//! Operation tables are indexed by carrier position and hold labels, so a
//! file is readable next to its carrier declaration. Leveled function
//! tables map `"seed,input"` keys (bitstrings, seed possibly empty) to
//! output bitstrings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use secdiag_core::ensemble::stochastic::SortFamily;
use secdiag_core::ensemble::system::AbstractCryptoSystem;
use secdiag_core::ensemble::{
    CcaAdversary, CpaAdversary, FeasibleEnsemble, NegligibilityPolicy, RandomizedFn,
    ThresholdFamily,
};
use secdiag_core::semiring::rat;
use secdiag_core::{Bits, Dist, DolevYaoSystem, FinSet, Rat, ShannonSystem};

/// Parses `"p/q"` or `"p"` into an exact non-negative rational.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: i64 = p
        .trim()
        .parse()
        .map_err(|_| format!("\"{s}\" is not a rational: bad numerator"))?;
    let q: i64 = q
        .trim()
        .parse()
        .map_err(|_| format!("\"{s}\" is not a rational: bad denominator"))?;
    if q <= 0 || p < 0 {
        return Err(format!("\"{s}\" is not a non-negative rational"));
    }
    Ok(rat(p, q))
}

/// A finite cipher system: carrier labels, operation tables, and the
/// optional extras each checker needs (`wellformed` for the possibilistic
/// check, `kappa`/`mu` for perfect secrecy).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub carrier: Vec<String>,
    /// `enc[k][m]`: encryption of message `carrier[m]` under key
    /// `carrier[k]`, as a label.
    pub enc: Vec<Vec<String>>,
    /// `dec[k][c]`: decryption of `carrier[c]` under key `carrier[k]`.
    pub dec: Vec<Vec<String>>,
    /// `pair[k]`: the key undoing `carrier[k]`.
    pub pair: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wellformed: Option<Vec<String>>,
    /// Key distribution, label → `"p/q"`. Omitted labels get zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<BTreeMap<String, String>>,
    /// Plaintext distribution, label → `"p/q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<BTreeMap<String, String>>,
}

impl SystemFile {
    fn carrier_set(&self) -> Result<FinSet, String> {
        FinSet::new(self.carrier.iter().cloned()).map_err(|e| format!("carrier: {e}"))
    }

    fn index(&self, set: &FinSet, field: &str, label: &str) -> Result<usize, String> {
        set.index_of(label)
            .ok_or_else(|| format!("{field}: label \"{label}\" is not in the carrier"))
    }

    fn table(&self, set: &FinSet, field: &str, rows: &[Vec<String>]) -> Result<Vec<Vec<usize>>, String> {
        if rows.len() != set.len() {
            return Err(format!(
                "{field}: {} row(s), carrier has {} element(s)",
                rows.len(),
                set.len()
            ));
        }
        rows.iter()
            .enumerate()
            .map(|(k, row)| {
                if row.len() != set.len() {
                    return Err(format!(
                        "{field}[{k}]: {} column(s), carrier has {} element(s)",
                        row.len(),
                        set.len()
                    ));
                }
                row.iter()
                    .enumerate()
                    .map(|(m, label)| self.index(set, &format!("{field}[{k}][{m}]"), label))
                    .collect()
            })
            .collect()
    }

    fn dist(&self, set: &FinSet, field: &str, map: &BTreeMap<String, String>) -> Result<Dist, String> {
        let mut probs = vec![rat(0, 1); set.len()];
        for (label, value) in map {
            let i = self.index(set, field, label)?;
            probs[i] = parse_rat(value).map_err(|m| format!("{field}[\"{label}\"]: {m}"))?;
        }
        Dist::new(probs).map_err(|e| format!("{field}: {e}"))
    }

    /// Builds the possibilistic view; requires `wellformed`.
    pub fn to_dolev_yao(&self) -> Result<DolevYaoSystem, String> {
        let set = self.carrier_set()?;
        let enc = self.table(&set, "enc", &self.enc)?;
        let dec = self.table(&set, "dec", &self.dec)?;
        if self.pair.len() != set.len() {
            return Err(format!(
                "pair: {} entries, carrier has {} element(s)",
                self.pair.len(),
                set.len()
            ));
        }
        let pair = self
            .pair
            .iter()
            .enumerate()
            .map(|(k, label)| self.index(&set, &format!("pair[{k}]"), label))
            .collect::<Result<Vec<_>, _>>()?;
        let wellformed = self
            .wellformed
            .as_ref()
            .ok_or("this check requires the \"wellformed\" field")?
            .iter()
            .map(|label| self.index(&set, "wellformed", label))
            .collect::<Result<Vec<_>, _>>()?;
        DolevYaoSystem::new(set, enc, dec, pair, &wellformed).map_err(|e| e.to_string())
    }

    /// Builds the distributional view; requires `kappa` and `mu`.
    pub fn to_shannon(&self) -> Result<ShannonSystem, String> {
        let set = self.carrier_set()?;
        let enc = self.table(&set, "enc", &self.enc)?;
        let dec = self.table(&set, "dec", &self.dec)?;
        if self.pair.len() != set.len() {
            return Err(format!(
                "pair: {} entries, carrier has {} element(s)",
                self.pair.len(),
                set.len()
            ));
        }
        let pair = self
            .pair
            .iter()
            .enumerate()
            .map(|(k, label)| self.index(&set, &format!("pair[{k}]"), label))
            .collect::<Result<Vec<_>, _>>()?;
        let kappa = self
            .kappa
            .as_ref()
            .ok_or("this check requires the \"kappa\" field")?;
        let mu = self
            .mu
            .as_ref()
            .ok_or("this check requires the \"mu\" field")?;
        let key_dist = self.dist(&set, "kappa", kappa)?;
        let plaintext_dist = self.dist(&set, "mu", mu)?;
        ShannonSystem::new(set, enc, dec, pair, key_dist, plaintext_dist).map_err(|e| e.to_string())
    }
}

/// One seeded partial table: `r`/`s`/`t` are seed, input, and output
/// widths; `table` maps `"seed,input"` to an output bitstring.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FnFile {
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub table: BTreeMap<String, String>,
}

impl FnFile {
    pub fn to_randomized(&self, context: &str) -> Result<RandomizedFn, String> {
        let mut entries = Vec::with_capacity(self.table.len());
        for (key, value) in &self.table {
            let (seed, input) = key
                .split_once(',')
                .ok_or_else(|| format!("{context}: key \"{key}\" is not \"seed,input\""))?;
            let seed = Bits::parse(seed).map_err(|e| format!("{context}: key \"{key}\": {e}"))?;
            let input = Bits::parse(input).map_err(|e| format!("{context}: key \"{key}\": {e}"))?;
            let output =
                Bits::parse(value).map_err(|e| format!("{context}: entry \"{key}\": {e}"))?;
            entries.push(((seed, input), output));
        }
        RandomizedFn::from_entries(self.r, self.s, self.t, entries)
            .map_err(|e| format!("{context}: {e}"))
    }

    pub fn from_randomized(f: &RandomizedFn) -> Self {
        let table = f
            .entries()
            .map(|((seed, input), output)| (format!("{seed},{input}"), format!("{output}")))
            .collect();
        FnFile {
            r: f.seed_len(),
            s: f.in_len(),
            t: f.out_len(),
            table,
        }
    }
}

fn to_family(levels: &[FnFile], context: &str) -> Result<FeasibleEnsemble, String> {
    let fns = levels
        .iter()
        .enumerate()
        .map(|(i, f)| f.to_randomized(&format!("{context}[{}]", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    FeasibleEnsemble::new(fns).map_err(|e| format!("{context}: {e}"))
}

fn family_to_files(family: &FeasibleEnsemble) -> Vec<FnFile> {
    family.levels().iter().map(FnFile::from_randomized).collect()
}

/// A leveled cipher system: shared labels, per-sort code widths, the four
/// operation families, and the plaintext distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub labels: Vec<String>,
    pub key_widths: Vec<usize>,
    pub msg_widths: Vec<usize>,
    pub cipher_widths: Vec<usize>,
    pub enc: Vec<FnFile>,
    pub dec: Vec<FnFile>,
    pub pair: Vec<FnFile>,
    pub keygen: Vec<FnFile>,
    /// Plaintext distribution, label → `"p/q"`.
    pub mu: BTreeMap<String, String>,
}

impl EnsembleFile {
    pub fn to_system(&self) -> Result<AbstractCryptoSystem, String> {
        let labels = FinSet::new(self.labels.iter().cloned()).map_err(|e| format!("labels: {e}"))?;
        let sort = |name: &str, widths: &[usize]| {
            SortFamily::new(labels.clone(), widths).map_err(|e| format!("{name}: {e}"))
        };
        let key_sort = sort("key_widths", &self.key_widths)?;
        let msg_sort = sort("msg_widths", &self.msg_widths)?;
        let cipher_sort = sort("cipher_widths", &self.cipher_widths)?;
        let mut probs = vec![rat(0, 1); labels.len()];
        for (label, value) in &self.mu {
            let i = labels
                .index_of(label)
                .ok_or_else(|| format!("mu: label \"{label}\" is not in the labels"))?;
            probs[i] = parse_rat(value).map_err(|m| format!("mu[\"{label}\"]: {m}"))?;
        }
        let mu = Dist::new(probs).map_err(|e| format!("mu: {e}"))?;
        AbstractCryptoSystem::new(
            key_sort,
            msg_sort,
            cipher_sort,
            to_family(&self.enc, "enc")?,
            to_family(&self.dec, "dec")?,
            to_family(&self.pair, "pair")?,
            to_family(&self.keygen, "keygen")?,
            mu,
        )
        .map_err(|e| e.to_string())
    }
}

/// An adversary for one of the two games; `kind` selects which stages are
/// present (`"cpa"`: `a0`, `a1`; `"cca2"`: `a0` through `a3`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdversaryFile {
    pub name: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub a0_takes_key: bool,
    pub a0: Vec<FnFile>,
    pub a1: Vec<FnFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<Vec<FnFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a3: Option<Vec<FnFile>>,
}

impl AdversaryFile {
    pub fn to_cpa(&self) -> Result<CpaAdversary, String> {
        if self.kind != "cpa" {
            return Err(format!(
                "adversary \"{}\" has kind \"{}\", this check needs \"cpa\"",
                self.name, self.kind
            ));
        }
        Ok(CpaAdversary {
            name: self.name.clone(),
            a0: to_family(&self.a0, "a0")?,
            a1: to_family(&self.a1, "a1")?,
            a0_takes_key: self.a0_takes_key,
        })
    }

    pub fn to_cca2(&self) -> Result<CcaAdversary, String> {
        if self.kind != "cca2" {
            return Err(format!(
                "adversary \"{}\" has kind \"{}\", this check needs \"cca2\"",
                self.name, self.kind
            ));
        }
        let a2 = self
            .a2
            .as_ref()
            .ok_or_else(|| format!("adversary \"{}\" is missing stage a2", self.name))?;
        let a3 = self
            .a3
            .as_ref()
            .ok_or_else(|| format!("adversary \"{}\" is missing stage a3", self.name))?;
        Ok(CcaAdversary {
            name: self.name.clone(),
            a0: to_family(&self.a0, "a0")?,
            a1: to_family(&self.a1, "a1")?,
            a2: to_family(a2, "a2")?,
            a3: to_family(a3, "a3")?,
        })
    }

    pub fn from_cpa(adv: &CpaAdversary) -> Self {
        AdversaryFile {
            name: adv.name.clone(),
            kind: "cpa".into(),
            a0_takes_key: adv.a0_takes_key,
            a0: family_to_files(&adv.a0),
            a1: family_to_files(&adv.a1),
            a2: None,
            a3: None,
        }
    }

    pub fn from_cca2(adv: &CcaAdversary) -> Self {
        AdversaryFile {
            name: adv.name.clone(),
            kind: "cca2".into(),
            a0_takes_key: false,
            a0: family_to_files(&adv.a0),
            a1: family_to_files(&adv.a1),
            a2: Some(family_to_files(&adv.a2)),
            a3: Some(family_to_files(&adv.a3)),
        }
    }
}

/// Either a named threshold family or an explicit per-level table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThresholdSpec {
    Name(String),
    Table(Vec<String>),
}

/// A negligibility policy: the horizon `L` and the allowed gap per level.
/// Recognized names: `"1/l"`, `"1/l^c"` for a positive integer `c`, and
/// `"2^-l"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolicyFile {
    #[serde(rename = "L")]
    pub max_level: usize,
    pub threshold: ThresholdSpec,
}

impl PolicyFile {
    pub fn to_policy(&self) -> Result<NegligibilityPolicy, String> {
        let family = match &self.threshold {
            ThresholdSpec::Name(name) => match name.as_str() {
                "1/l" => ThresholdFamily::RecipPow(1),
                "2^-l" => ThresholdFamily::ExpHalving,
                other => {
                    let exponent = other
                        .strip_prefix("1/l^")
                        .and_then(|e| e.parse::<u32>().ok())
                        .filter(|&e| e > 0)
                        .ok_or_else(|| {
                            format!(
                                "threshold \"{other}\" is not \"1/l\", \"1/l^c\", \"2^-l\", or a table"
                            )
                        })?;
                    ThresholdFamily::RecipPow(exponent)
                }
            },
            ThresholdSpec::Table(values) => {
                let table = values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_rat(v).map_err(|m| format!("threshold[{i}]: {m}")))
                    .collect::<Result<Vec<_>, _>>()?;
                ThresholdFamily::Table(table)
            }
        };
        NegligibilityPolicy::new(self.max_level, family).map_err(|e| e.to_string())
    }
}
