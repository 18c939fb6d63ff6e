//! Index words, their two-letter encoding, duality, and the elimination order.
//!
//! An [`IndexWord`] `(m1,...,mD)` names the multiple zeta value
//! `Z(m1,...,mD) = sum over n1 > n2 > ... > nD >= 1 of prod ni^(-mi)`.
//! Words compare lexicographically by integer value, with a proper prefix
//! ordering before its extensions.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexWord(Vec<u32>);

impl IndexWord {
    /// Builds a word from its indices. Every index must be at least 1 and the
    /// word must be nonempty; admissibility is not required.
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidWord("empty index list".into()));
        }
        if indices.contains(&0) {
            return Err(Error::InvalidWord(format!("{indices:?} contains a zero index")));
        }
        Ok(IndexWord(indices))
    }

    /// Caller guarantees a nonempty list of positive indices.
    pub(crate) fn from_vec_unchecked(indices: Vec<u32>) -> Self {
        debug_assert!(!indices.is_empty() && indices.iter().all(|&m| m > 0));
        IndexWord(indices)
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

    /// Convergent iff the leading index is at least 2.
    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    pub fn to_binary(&self) -> BinaryWord {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &m in &self.0 {
            letters.extend(std::iter::repeat_n(Letter::X, m as usize - 1));
            letters.push(Letter::Y);
        }
        BinaryWord(letters)
    }

    pub fn from_binary(b: &BinaryWord) -> Result<Self> {
        if b.0.last() != Some(&Letter::Y) {
            return Err(Error::BinaryDecode(b.to_string()));
        }
        let mut indices = Vec::new();
        let mut run = 1;
        for letter in &b.0 {
            match letter {
                Letter::X => run += 1,
                Letter::Y => {
                    indices.push(run);
                    run = 1;
                }
            }
        }
        Ok(IndexWord(indices))
    }

    /// The duality involution: reverse the binary encoding and swap X and Y.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_admissible() {
            return Err(Error::NotAdmissible(self.clone()));
        }
        let swapped = self.to_binary().reverse_swap();
        IndexWord::from_binary(&swapped)
    }

    /// Multiset of indices, sorted descending.
    pub fn sorted_indices(&self) -> Vec<u32> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl fmt::Display for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Z(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for IndexWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for IndexWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("Z(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidWord(format!("`{s}` is not of the form Z(m1,...,mD)")))?;
        let indices = inner
            .split(',')
            .map(|part| {
                part.parse::<u32>()
                    .map_err(|_| Error::InvalidWord(format!("bad index `{part}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        IndexWord::new(indices)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    X,
    Y,
}

/// A word over `{X, Y}`; index `k` encodes as `X^(k-1) Y`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct BinaryWord(pub Vec<Letter>);

impl BinaryWord {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reverse_swap(&self) -> BinaryWord {
        BinaryWord(
            self.0
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::X => Letter::Y,
                    Letter::Y => Letter::X,
                })
                .collect(),
        )
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::X => "X",
                Letter::Y => "Y",
            })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'X' | 'x' => Ok(Letter::X),
                'Y' | 'y' => Ok(Letter::Y),
                _ => Err(Error::InvalidWord(format!("`{s}` is not a word over X, Y"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryWord)
    }
}

/// All compositions of `weight` (every index >= 1), in lexicographic order.
pub fn all_words(weight: u32) -> Vec<IndexWord> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    compositions(weight, 1, &mut prefix, &mut out);
    out
}

/// All admissible words of `weight`; there are `2^(weight-2)` of them.
pub fn admissible_words(weight: u32) -> Vec<IndexWord> {
    if weight < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    for first in 2..=weight {
        prefix.push(first);
        compositions(weight - first, 1, &mut prefix, &mut out);
        prefix.pop();
    }
    out.sort();
    out
}

fn compositions(rest: u32, min_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<IndexWord>) {
    if rest == 0 {
        if !prefix.is_empty() {
            out.push(IndexWord(prefix.clone()));
        }
        return;
    }
    for part in min_part..=rest {
        prefix.push(part);
        compositions(rest - part, min_part, prefix, out);
        prefix.pop();
    }
}

/// Sort key deciding which word a relation eliminates. The greatest key is
/// eliminated first, so conjectured basis candidates, Lyndon words and shallow
/// words survive longest.
///
/// Ties between words of equal depth go to the extension order (higher
/// first), then to the word. Unextended candidates keep the lexicographically
/// larger word; every other class eliminates the larger word first. At
/// weight 12 this keeps `(9,3)` and the extension `(6,4,1,1)` of `(7,5)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElimKey {
    pub candidate: bool,
    pub lyndon: bool,
    pub depth: usize,
    /// Extension order of a candidate (half its trailing run of ones); 0 otherwise.
    pub extension: usize,
    pub word: IndexWord,
}

impl ElimKey {
    pub fn new(word: &IndexWord, candidates: &CandidateSet) -> Self {
        let candidate = candidates.contains(word);
        let extension = if candidate {
            word.indices().iter().rev().take_while(|&&m| m == 1).count() / 2
        } else {
            0
        };
        ElimKey {
            candidate,
            lyndon: crate::lyndon::is_lyndon(word),
            depth: word.depth(),
            extension,
            word: word.clone(),
        }
    }
}

impl Ord for ElimKey {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .candidate
            .cmp(&self.candidate)
            .then_with(|| other.lyndon.cmp(&self.lyndon))
            .then_with(|| self.depth.cmp(&other.depth))
            .then_with(|| self.extension.cmp(&other.extension))
            .then_with(|| {
                if self.candidate && self.extension == 0 {
                    other.word.cmp(&self.word)
                } else {
                    self.word.cmp(&other.word)
                }
            })
    }
}

impl PartialOrd for ElimKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The set of words flagged as basis candidates for the elimination order.
#[derive(Clone, Debug, Default)]
pub struct CandidateSet(BTreeSet<IndexWord>);

impl CandidateSet {
    pub fn new(words: impl IntoIterator<Item = IndexWord>) -> Self {
        CandidateSet(words.into_iter().collect())
    }

    /// The extended Lyndon pool for `weight`.
    pub fn for_weight(weight: u32) -> Self {
        Self::new(crate::lyndon::candidate_pool(weight).into_iter().map(|c| c.word))
    }

    pub fn contains(&self, w: &IndexWord) -> bool {
        self.0.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndexWord> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Compares two equal-weight words under the elimination order.
/// `Ordering::Greater` means `a` is eliminated before `b`.
pub fn elim_compare(a: &IndexWord, b: &IndexWord, pool: &CandidateSet) -> Result<Ordering> {
    if a.weight() != b.weight() {
        return Err(Error::WeightMismatch(a.clone(), b.clone()));
    }
    Ok(ElimKey::new(a, pool).cmp(&ElimKey::new(b, pool)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn binary_encoding() {
        assert_eq!(w(&[2]).to_binary().to_string(), "XY");
        assert_eq!(w(&[3, 1]).to_binary().to_string(), "XXYY");
        assert_eq!(w(&[2, 1]).to_binary().to_string(), "XYY");
        for s in ["XY", "XXYY"] {
            let b: BinaryWord = s.parse().unwrap();
            assert_eq!(IndexWord::from_binary(&b).unwrap().to_binary(), b);
        }
        assert_eq!(IndexWord::from_binary(&"XY".parse().unwrap()).unwrap(), w(&[2]));
        assert_eq!(IndexWord::from_binary(&"XXYY".parse().unwrap()).unwrap(), w(&[3, 1]));
        assert!(matches!(
            IndexWord::from_binary(&"YX".parse().unwrap()),
            Err(Error::BinaryDecode(_))
        ));
        assert!(IndexWord::from_binary(&BinaryWord::default()).is_err());
    }

    #[test]
    fn duality() {
        assert_eq!(w(&[3]).dual().unwrap(), w(&[2, 1]));
        assert_eq!(w(&[2]).dual().unwrap(), w(&[2]));
        assert_eq!(w(&[4, 1]).dual().unwrap(), w(&[3, 1, 1]));
        assert!(matches!(w(&[1, 2]).dual(), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn rendering_round_trips() {
        let x = w(&[12, 2, 11, 1, 1]);
        assert_eq!(x.to_string(), "Z(12,2,11,1,1)");
        assert_eq!("Z(12,2,11,1,1)".parse::<IndexWord>().unwrap(), x);
        assert!("Z()".parse::<IndexWord>().is_err());
        assert!("Z(0,2)".parse::<IndexWord>().is_err());
        assert!("(2,1)".parse::<IndexWord>().is_err());
    }

    #[test]
    fn word_order_is_lexicographic_by_value() {
        assert!(w(&[15, 9, 3]) > w(&[9, 15, 3]));
        assert!(w(&[10, 2]) > w(&[9, 3]));
        assert!(w(&[3]) < w(&[3, 1]));
    }

    #[test]
    fn admissible_counts() {
        for weight in 2..=14 {
            let words = admissible_words(weight);
            assert_eq!(words.len(), 1 << (weight - 2), "weight {weight}");
            assert!(words.iter().all(|x| x.is_admissible() && x.weight() == weight));
        }
        assert_eq!(all_words(5).len(), 16);
    }

    #[test]
    fn elimination_examples() {
        let none = CandidateSet::default();
        assert_eq!(
            elim_compare(&w(&[4, 1, 1]), &w(&[5, 1]), &none).unwrap(),
            Ordering::Greater
        );
        let pool = CandidateSet::new([w(&[6, 4, 1, 1])]);
        assert_eq!(
            elim_compare(&w(&[7, 2, 2, 1]), &w(&[6, 4, 1, 1]), &pool).unwrap(),
            Ordering::Greater
        );
        let pool = CandidateSet::new([w(&[9, 3]), w(&[7, 5])]);
        let first = elim_compare(&w(&[9, 3]), &w(&[7, 5]), &pool).unwrap();
        assert_ne!(first, Ordering::Equal);
        assert_eq!(first, elim_compare(&w(&[9, 3]), &w(&[7, 5]), &pool).unwrap());
        assert_eq!(first.reverse(), elim_compare(&w(&[7, 5]), &w(&[9, 3]), &pool).unwrap());
        let pool = CandidateSet::for_weight(12);
        assert_eq!(elim_compare(&w(&[7, 5]), &w(&[9, 3]), &pool).unwrap(), Ordering::Greater);
        assert_eq!(
            elim_compare(&w(&[8, 2, 1, 1]), &w(&[6, 4, 1, 1]), &pool).unwrap(),
            Ordering::Greater
        );
        // non-candidates: larger word first
        assert_eq!(elim_compare(&w(&[5, 2]), &w(&[4, 3]), &none).unwrap(), Ordering::Greater);
        assert!(matches!(
            elim_compare(&w(&[3]), &w(&[2]), &none),
            Err(Error::WeightMismatch(..))
        ));
    }
}
