//! Substitution tables and their text format.
//!
//! ```text
//! # weight: 4
//! # phase: fully-reduced
//! # generators:
//! Z(2,1,1) = 2/5*Z(2)*Z(2)
//! Z(2,2) = 3/10*Z(2)*Z(2)
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::expr::Expr;
use crate::algebra::{parse_monomial_combo, BasisMonomial, LinComb};
use crate::error::{Error, Result};
use crate::words::{admissible_words, IndexWord};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Phase {
    /// Non-Lyndon words expressed over Lyndon words of the same weight.
    StuffleComplete,
    FullyReduced,
    /// Fully reduced over the words of depth at most the cap.
    DepthCapped(usize),
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::StuffleComplete => f.write_str("stuffle-complete"),
            Phase::FullyReduced => f.write_str("fully-reduced"),
            Phase::DepthCapped(d) => write!(f, "depth-capped {d}"),
        }
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "stuffle-complete" => Ok(Phase::StuffleComplete),
            "fully-reduced" => Ok(Phase::FullyReduced),
            other => other
                .strip_prefix("depth-capped ")
                .and_then(|d| d.parse().ok())
                .map(Phase::DepthCapped)
                .ok_or_else(|| Error::Config(format!("unknown table phase `{other}`"))),
        }
    }
}

/// Map from words of one weight to their reduced values.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubstitutionTable {
    pub weight: u32,
    pub phase: Phase,
    pub generators: Vec<IndexWord>,
    pub entries: BTreeMap<IndexWord, Expr>,
}

impl SubstitutionTable {
    /// The weight-2 table: `Z(2)` is the only admissible word and a generator.
    pub fn seed() -> Self {
        SubstitutionTable {
            weight: 2,
            phase: Phase::FullyReduced,
            generators: vec![IndexWord::from_vec_unchecked(vec![2])],
            entries: BTreeMap::new(),
        }
    }

    pub fn is_generator(&self, w: &IndexWord) -> bool {
        self.generators.contains(w)
    }

    /// Value of `w` over basis monomials, if this table resolves it.
    pub fn value(&self, w: &IndexWord) -> Option<LinComb<BasisMonomial>> {
        if self.is_generator(w) {
            return Some(LinComb::unit(BasisMonomial::generator(w.clone())));
        }
        self.entries.get(w).map(|e| e.monos.clone())
    }

    /// Checks the stored-state invariants for fully reduced tables.
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(format!("weight-{} table: {m}", self.weight)));
        for (w, e) in &self.entries {
            if w.weight() != self.weight || !w.is_admissible() {
                return fail(format!("entry {w} does not belong here"));
            }
            if self.phase != Phase::StuffleComplete && !e.words.is_zero() {
                return fail(format!("entry {w} still mentions unresolved words"));
            }
            if let Some(m) = e.monos.keys().find(|m| m.weight() != self.weight) {
                return fail(format!("entry {w} has monomial {m} of the wrong weight"));
            }
            if self.is_generator(w) {
                return fail(format!("generator {w} has an entry"));
            }
        }
        if self.phase == Phase::FullyReduced {
            let expected = admissible_words(self.weight).len();
            let have = self.entries.len() + self.generators.len();
            if have != expected {
                return fail(format!("{have} words covered, expected {expected}"));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# weight: {}\n", self.weight));
        out.push_str(&format!("# phase: {}\n", self.phase));
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        if gens.is_empty() {
            out.push_str("# generators:\n");
        } else {
            out.push_str(&format!("# generators: {}\n", gens.join(" ")));
        }
        for (w, e) in &self.entries {
            out.push_str(&format!("{w} = {}\n", e.monos));
        }
        out
    }

    pub fn content_hash(&self) -> String {
        sha256_hex(self.to_text().as_bytes())
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut weight = None;
        let mut phase = None;
        let mut generators = None;
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let err = |m: String| Error::parse(source_name, lineno, m);
            if let Some(header) = line.strip_prefix('#') {
                let (key, value) = header.split_once(':').ok_or_else(|| err("malformed header".into()))?;
                let value = value.trim();
                match key.trim() {
                    "weight" => weight = Some(value.parse::<u32>().map_err(|e| err(e.to_string()))?),
                    "phase" => phase = Some(value.parse::<Phase>().map_err(|e| err(e.to_string()))?),
                    "generators" => {
                        generators = Some(
                            value
                                .split_whitespace()
                                .map(str::parse)
                                .collect::<Result<Vec<IndexWord>>>()
                                .map_err(|e| err(e.to_string()))?,
                        )
                    }
                    other => return Err(err(format!("unknown header `{other}`"))),
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once(" = ").ok_or_else(|| err("expected `word = value`".into()))?;
            let word: IndexWord = lhs.parse().map_err(|e: Error| err(e.to_string()))?;
            let monos = parse_monomial_combo(rhs).map_err(|e| err(e.to_string()))?;
            if entries.insert(word.clone(), Expr::from_monos(monos)).is_some() {
                return Err(err(format!("duplicate entry for {word}")));
            }
        }
        let missing = |what: &str| Error::parse(source_name, 0, format!("missing `# {what}:` header"));
        let table = SubstitutionTable {
            weight: weight.ok_or_else(|| missing("weight"))?,
            phase: phase.ok_or_else(|| missing("phase"))?,
            generators: generators.ok_or_else(|| missing("generators"))?,
            entries,
        };
        table.validate()?;
        Ok(table)
    }
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Fully reduced tables for a run of weights, keyed by weight.
#[derive(Clone, Debug, Default)]
pub struct TableSet {
    tables: BTreeMap<u32, SubstitutionTable>,
}

impl TableSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Holds just the weight-2 seed.
    pub fn seeded() -> Self {
        let mut set = Self::new();
        set.insert(SubstitutionTable::seed());
        set
    }

    pub fn insert(&mut self, table: SubstitutionTable) {
        self.tables.insert(table.weight, table);
    }

    pub fn get(&self, weight: u32) -> Option<&SubstitutionTable> {
        self.tables.get(&weight)
    }

    pub fn get_mut(&mut self, weight: u32) -> Option<&mut SubstitutionTable> {
        self.tables.get_mut(&weight)
    }

    pub fn weights(&self) -> impl Iterator<Item = u32> + '_ {
        self.tables.keys().copied()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.tables.keys().next_back().copied()
    }

    /// Every generator of weight at most `max_weight`.
    pub fn generators_through(&self, max_weight: u32) -> Vec<IndexWord> {
        self.tables
            .range(..=max_weight)
            .flat_map(|(_, t)| t.generators.iter().cloned())
            .collect()
    }

    /// The value of `w` over basis monomials.
    pub fn value(&self, w: &IndexWord) -> Result<LinComb<BasisMonomial>> {
        self.tables
            .get(&w.weight())
            .ok_or(Error::MissingTable(w.weight()))?
            .value(w)
            .ok_or_else(|| Error::Unresolved(w.clone()))
    }

    /// `prod Z(factors)` over basis monomials.
    pub fn product_value(&self, factors: &[IndexWord]) -> Result<LinComb<BasisMonomial>> {
        let mut acc: Option<LinComb<BasisMonomial>> = None;
        for f in factors {
            let v = self.value(f)?;
            acc = Some(match acc {
                None => v,
                Some(a) => crate::algebra::mul_combos(&a, &v),
            });
        }
        Ok(acc.unwrap_or_default())
    }
}

/// Replaces every word by its table value. Words must be resolved by some
/// table (as an entry or a generator). The result mentions only monomials,
/// so applying it twice changes nothing.
pub fn substitute_tables(expr: &Expr, tables: &TableSet) -> Result<Expr> {
    let mut out = Expr::from_monos(expr.monos.clone());
    for (w, c) in expr.words.iter() {
        out.monos.add_scaled(&tables.value(w)?, c);
    }
    Ok(out)
}

/// [`substitute_tables`] for a plain word combination.
pub fn substitute_words(lc: &LinComb<IndexWord>, tables: &TableSet) -> Result<LinComb<BasisMonomial>> {
    Ok(substitute_tables(&Expr::from_words(lc.clone()), tables)?.monos)
}
