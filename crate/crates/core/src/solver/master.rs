//! The master expression: one bracket per eliminated word, holding what that
//! word currently equals.
//!
//! Brackets are sharded over workers by a fixed hash of the outside word.
//! Choosing a pivot is serial; substituting a new pivot into the existing
//! brackets runs shard-parallel, and every bracket's update depends only on
//! its own contents, so the result does not depend on the worker count.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::expr::Expr;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::words::{ElimKey, IndexWord};

/// Outcome of feeding one relation to [`MasterExpression::absorb`].
#[derive(Debug)]
pub enum Absorbed {
    Pivot(IndexWord),
    /// Reduced to `0 = 0`.
    Redundant,
    /// Nonzero, but mentions no word eligible as a pivot here.
    Deferred(Expr),
}

pub struct MasterExpression {
    shards: Vec<BTreeMap<IndexWord, Expr>>,
    pool: Option<rayon::ThreadPool>,
    max_terms: usize,
    terms: usize,
}

fn shard_of(w: &IndexWord, shards: usize) -> usize {
    // FNV-1a over the indices; stable across runs and platforms
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &m in w.indices() {
        for b in m.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    (h % shards as u64) as usize
}

impl MasterExpression {
    pub fn new(jobs: usize) -> Result<Self> {
        let jobs = jobs.max(1);
        let pool = if jobs > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?,
            )
        } else {
            None
        };
        Ok(MasterExpression {
            shards: (0..jobs).map(|_| BTreeMap::new()).collect(),
            pool,
            max_terms: 0,
            terms: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest total term count seen across all brackets.
    pub fn max_terms(&self) -> usize {
        self.max_terms
    }

    pub fn get(&self, w: &IndexWord) -> Option<&Expr> {
        self.shards[shard_of(w, self.shards.len())].get(w)
    }

    pub fn contains(&self, w: &IndexWord) -> bool {
        self.get(w).is_some()
    }

    /// All brackets in word order.
    pub fn brackets(&self) -> BTreeMap<IndexWord, Expr> {
        self.shards
            .iter()
            .flat_map(|s| s.iter().map(|(k, v)| (k.clone(), v.clone())))
            .collect()
    }

    pub fn into_brackets(self) -> BTreeMap<IndexWord, Expr> {
        self.shards.into_iter().flatten().collect()
    }

    /// Restores brackets saved from an earlier run. The caller guarantees
    /// they are mutually substituted.
    pub fn load(&mut self, brackets: BTreeMap<IndexWord, Expr>) {
        let n = self.shards.len();
        for (k, v) in brackets {
            self.terms += v.term_count();
            self.shards[shard_of(&k, n)].insert(k, v);
        }
        self.max_terms = self.max_terms.max(self.terms);
    }

    /// Substitutes every bracket into `expr`. One pass suffices because no
    /// bracket mentions another bracket's word.
    pub fn reduce(&self, expr: &Expr) -> Expr {
        expr.substitute_all(|w| self.get(w))
    }

    /// Reduces `relation`, selects its maximal eligible word under `key` as
    /// pivot, and substitutes the solved pivot into every bracket.
    /// `key` returns `None` for words that may not be pivots here.
    pub fn absorb(&mut self, relation: &Expr, key: impl Fn(&IndexWord) -> Option<ElimKey>) -> Result<Absorbed> {
        let reduced = self.reduce(relation);
        if reduced.words.is_zero() {
            if reduced.monos.is_zero() {
                return Ok(Absorbed::Redundant);
            }
            return Err(Error::Inconsistent {
                context: "relation reduced to constants".into(),
                residue: reduced.monos.to_string(),
            });
        }
        let pivot = reduced
            .words
            .keys()
            .filter_map(|w| key(w).map(|k| (k, w)))
            .max_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, w)| w.clone());
        let Some(pivot) = pivot else {
            return Ok(Absorbed::Deferred(reduced));
        };
        if self.contains(&pivot) {
            return Err(Error::DuplicatePivot(pivot));
        }
        let mut value = reduced;
        let coeff = value.words.remove(&pivot).expect("pivot taken from the relation");
        debug_assert!(!coeff.is_zero());
        value.scale(&(-Rational::one() / coeff));
        self.substitute_into_brackets(&pivot, &value);
        self.terms += value.term_count();
        let n = self.shards.len();
        self.shards[shard_of(&pivot, n)].insert(pivot.clone(), value);
        self.max_terms = self.max_terms.max(self.terms);
        Ok(Absorbed::Pivot(pivot))
    }

    fn substitute_into_brackets(&mut self, pivot: &IndexWord, value: &Expr) {
        let update = |shard: &mut BTreeMap<IndexWord, Expr>| -> isize {
            let mut delta = 0isize;
            for inside in shard.values_mut() {
                let before = inside.term_count() as isize;
                if inside.substitute(pivot, value) {
                    delta += inside.term_count() as isize - before;
                }
            }
            delta
        };
        let delta: isize = match &self.pool {
            Some(pool) => pool.install(|| self.shards.par_iter_mut().map(update).sum()),
            None => self.shards.iter_mut().map(update).sum(),
        };
        self.terms = (self.terms as isize + delta) as usize;
    }
}
