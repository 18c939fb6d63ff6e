//! Stuffle-phase families: words sharing one index multiset.
//!
//! The top-depth part of a stuffle product `u * v` only permutes the indices
//! of `u` and `v`, so each family can be solved on its own once all
//! lower-depth words of the weight are tabled.

use std::collections::BTreeMap;
use std::fmt;

use super::expr::Expr;
use super::master::{Absorbed, MasterExpression};
use super::table::TableSet;
use crate::algebra::stuffle;
use crate::error::{Error, Result};
use crate::lyndon::is_lyndon;
use crate::words::{admissible_words, CandidateSet, ElimKey, IndexWord};

/// Index multiset, stored sorted descending.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FamilyKey(Vec<u32>);

impl FamilyKey {
    pub fn of(w: &IndexWord) -> Self {
        FamilyKey(w.sorted_indices())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Admissible words of weight `weight` and depth `depth`, grouped by family.
pub fn family_partition(weight: u32, depth: usize) -> BTreeMap<FamilyKey, Vec<IndexWord>> {
    let mut out: BTreeMap<FamilyKey, Vec<IndexWord>> = BTreeMap::new();
    for w in admissible_words(weight) {
        if w.depth() == depth {
            out.entry(FamilyKey::of(&w)).or_default().push(w);
        }
    }
    out
}

/// Distinct admissible arrangements of a multiset given as (value, count).
fn arrangements(counts: &mut [(u32, usize)], prefix: &mut Vec<u32>, len: usize, out: &mut Vec<IndexWord>) {
    if prefix.len() == len {
        if len > 0 {
            out.push(IndexWord::from_vec_unchecked(prefix.clone()));
        }
        return;
    }
    for i in 0..counts.len() {
        let (value, left) = counts[i];
        if left == 0 || (prefix.is_empty() && value < 2) {
            continue;
        }
        counts[i].1 -= 1;
        prefix.push(value);
        arrangements(counts, prefix, len, out);
        prefix.pop();
        counts[i].1 += 1;
    }
}

/// Unordered pairs of admissible words whose index multisets add up to `key`.
pub fn splitting_pairs(key: &FamilyKey) -> Vec<(IndexWord, IndexWord)> {
    let mut distinct: Vec<(u32, usize)> = Vec::new();
    for &m in key.indices() {
        match distinct.last_mut() {
            Some((v, c)) if *v == m => *c += 1,
            _ => distinct.push((m, 1)),
        }
    }
    let mut out = Vec::new();
    let mut take = vec![0usize; distinct.len()];
    loop {
        let left_len: usize = take.iter().sum();
        if left_len > 0 && left_len < key.depth() {
            let mut left: Vec<(u32, usize)> = distinct.iter().zip(&take).map(|(&(v, _), &t)| (v, t)).collect();
            let mut right: Vec<(u32, usize)> = distinct.iter().zip(&take).map(|(&(v, c), &t)| (v, c - t)).collect();
            let mut us = Vec::new();
            let mut vs = Vec::new();
            arrangements(&mut left, &mut Vec::new(), left_len, &mut us);
            arrangements(&mut right, &mut Vec::new(), key.depth() - left_len, &mut vs);
            for u in &us {
                for v in &vs {
                    if u <= v {
                        out.push((u.clone(), v.clone()));
                    }
                }
            }
        }
        // odometer over sub-multiset counts
        let mut i = 0;
        loop {
            if i == take.len() {
                return out;
            }
            if take[i] < distinct[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
    }
}

/// What one family contributes to the stuffle-phase table.
#[derive(Debug, Default)]
pub struct FamilyOutcome {
    pub entries: Vec<(IndexWord, Expr)>,
    /// Nonzero relations left among Lyndon words only.
    pub deferred: Vec<Expr>,
    pub relations: usize,
}

/// Expresses the non-Lyndon members of one family over Lyndon words of the
/// same weight and basis monomials.
///
/// `same_weight` holds the stuffle-phase entries of all lower depths at this
/// weight; `lower` holds fully reduced tables of all lower weights.
pub fn solve_family(
    key: &FamilyKey,
    members: &[IndexWord],
    same_weight: &BTreeMap<IndexWord, Expr>,
    lower: &TableSet,
    candidates: &CandidateSet,
) -> Result<FamilyOutcome> {
    let targets: Vec<&IndexWord> = members.iter().filter(|w| !is_lyndon(w)).collect();
    if targets.is_empty() {
        return Ok(FamilyOutcome::default());
    }
    let mut master = MasterExpression::new(1)?;
    let mut outcome = FamilyOutcome::default();
    let depth = key.depth();
    for (u, v) in splitting_pairs(key) {
        let mut relation = Expr::from_words(stuffle(&u, &v));
        relation.monos = lower.product_value(&[u.clone(), v.clone()])?.negated();
        let relation = relation.substitute_all(|w| if w.depth() < depth { same_weight.get(w) } else { None });
        outcome.relations += 1;
        let eligible = |w: &IndexWord| {
            (w.depth() == depth && !is_lyndon(w)).then(|| ElimKey::new(w, candidates))
        };
        match master.absorb(&relation, eligible) {
            Ok(Absorbed::Deferred(rest)) => outcome.deferred.push(rest),
            Ok(_) => {}
            Err(Error::Inconsistent { residue, .. }) => {
                return Err(Error::Inconsistent {
                    context: format!("family {key}, pair {u}*{v}"),
                    residue,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let mut brackets = master.into_brackets();
    for w in targets {
        let value = brackets.remove(w).ok_or_else(|| Error::UnderDetermined {
            family: key.to_string(),
            word: w.clone(),
        })?;
        outcome.entries.push((w.clone(), value));
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BasisMonomial, LinComb, Rational};
    use num_bigint::BigInt;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_examples() {
        let fams = family_partition(5, 2);
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[&FamilyKey(vec![4, 1])], vec![w(&[4, 1])]);
        assert_eq!(fams[&FamilyKey(vec![3, 2])], vec![w(&[2, 3]), w(&[3, 2])]);
        let fams = family_partition(6, 3);
        assert_eq!(fams[&FamilyKey(vec![2, 2, 2])], vec![w(&[2, 2, 2])]);
    }

    #[test]
    fn partition_covers_every_word_once() {
        for weight in 3..=11u32 {
            let total: usize = (1..weight as usize)
                .map(|d| family_partition(weight, d).values().map(Vec::len).sum::<usize>())
                .sum();
            assert_eq!(total, 1 << (weight - 2));
        }
    }

    #[test]
    fn splitting_pairs_of_small_families() {
        let pairs = splitting_pairs(&FamilyKey(vec![3, 2]));
        assert_eq!(pairs, vec![(w(&[2]), w(&[3]))]);
        let pairs = splitting_pairs(&FamilyKey(vec![2, 2]));
        assert_eq!(pairs, vec![(w(&[2]), w(&[2]))]);
        // (1) is not admissible, so {2,1} has no convergent split
        assert!(splitting_pairs(&FamilyKey(vec![2, 1])).is_empty());
    }

    #[test]
    fn family_two_three() {
        let mut lower = TableSet::seeded();
        lower.insert(crate::solver::SubstitutionTable {
            weight: 3,
            phase: crate::solver::Phase::FullyReduced,
            generators: vec![w(&[3])],
            entries: [(w(&[2, 1]), Expr::from_monos(LinComb::unit(BasisMonomial::generator(w(&[3])))))]
                .into_iter()
                .collect(),
        });
        let pool = CandidateSet::for_weight(5);
        let key = FamilyKey(vec![3, 2]);
        let out = solve_family(&key, &[w(&[2, 3]), w(&[3, 2])], &BTreeMap::new(), &lower, &pool).unwrap();
        assert_eq!(out.relations, 1);
        assert_eq!(out.entries.len(), 1);
        let (word, value) = &out.entries[0];
        assert_eq!(word, &w(&[2, 3]));
        let minus_one = Rational::from_integer(BigInt::from(-1));
        assert_eq!(value.words.get(&w(&[3, 2])), Some(&minus_one));
        assert_eq!(value.words.get(&w(&[5])), Some(&minus_one));
        let product: BasisMonomial = "Z(3)*Z(2)".parse().unwrap();
        assert_eq!(value.monos.get(&product), Some(&Rational::from_integer(BigInt::from(1))));
    }

    #[test]
    fn lyndon_only_family_emits_nothing() {
        let out = solve_family(
            &FamilyKey(vec![4, 1]),
            &[w(&[4, 1])],
            &BTreeMap::new(),
            &TableSet::seeded(),
            &CandidateSet::default(),
        )
        .unwrap();
        assert!(out.entries.is_empty() && out.relations == 0);
    }
}
