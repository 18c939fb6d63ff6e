//! Lyndon words over odd letters, n-fold extensions and their inverse.
//!
//! Lyndon words here use the maximal-rotation convention: a word is Lyndon
//! when it is strictly greater than each of its proper cyclic rotations.

use crate::error::{Error, Result};
use crate::words::IndexWord;

pub fn is_lyndon(w: &IndexWord) -> bool {
    is_lyndon_slice(w.indices())
}

pub(crate) fn is_lyndon_slice(s: &[u32]) -> bool {
    let n = s.len();
    (1..n).all(|shift| {
        // compare s against its rotation starting at `shift`
        for i in 0..n {
            let a = s[i];
            let b = s[(i + shift) % n];
            if a != b {
                return a > b;
            }
        }
        false
    })
}

/// The Lyndon words whose letters are odd integers >= 3 summing to a weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LyndonSet {
    pub weight: u32,
    pub words: Vec<IndexWord>,
}

impl LyndonSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &IndexWord) -> bool {
        self.words.contains(w)
    }
}

/// Ordered by depth, then lexicographically descending.
pub fn generate_l(weight: u32) -> LyndonSet {
    let mut words = Vec::new();
    if weight >= 3 {
        let mut prefix = Vec::new();
        odd_compositions(weight, &mut prefix, &mut words);
    }
    words.sort_by(|a: &IndexWord, b: &IndexWord| a.depth().cmp(&b.depth()).then_with(|| b.cmp(a)));
    LyndonSet { weight, words }
}

fn odd_compositions(rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<IndexWord>) {
    if rest == 0 {
        // a Lyndon word starts with its largest letter; prune the rest on output
        if is_lyndon_slice(prefix) {
            out.push(IndexWord::from_vec_unchecked(prefix.clone()));
        }
        return;
    }
    let mut part = 3;
    while part <= rest {
        if prefix.first().is_none_or(|&lead| part <= lead) {
            prefix.push(part);
            odd_compositions(rest - part, prefix, out);
            prefix.pop();
        }
        part += 2;
    }
}

/// `source` lowered in its first `2n` indices and padded with `2n` ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedCandidate {
    pub source: IndexWord,
    pub n: usize,
    pub word: IndexWord,
}

pub fn extend(w: &IndexWord, n: i64) -> Result<IndexWord> {
    let fail = |reason| Error::Extension {
        word: w.clone(),
        n,
        reason,
    };
    if n < 0 {
        return Err(fail("extension order must be nonnegative"));
    }
    let span = 2 * n as usize;
    if w.depth() < span {
        return Err(fail("word has fewer than 2n indices"));
    }
    let mut out = w.indices().to_vec();
    for m in &mut out[..span] {
        if *m < 3 {
            return Err(fail("a lowered index would drop below 2"));
        }
        *m -= 1;
    }
    out.extend(std::iter::repeat_n(1, span));
    Ok(IndexWord::from_vec_unchecked(out))
}

/// Folds a trailing run of `2n` ones back onto the first `2n` indices.
pub fn collapse(w: &IndexWord) -> Result<(IndexWord, usize)> {
    let fail = |reason| Error::Collapse {
        word: w.clone(),
        reason,
    };
    if !w.is_admissible() {
        return Err(fail("word is not admissible"));
    }
    let idx = w.indices();
    let ones = idx.iter().rev().take_while(|&&m| m == 1).count();
    if ones % 2 == 1 {
        return Err(fail("odd number of trailing ones"));
    }
    let head = &idx[..idx.len() - ones];
    if head.len() < ones {
        return Err(fail("fewer leading indices than trailing ones"));
    }
    let mut source = head.to_vec();
    for m in &mut source[..ones] {
        *m += 1;
    }
    Ok((IndexWord::from_vec_unchecked(source), ones / 2))
}

/// Every legal extension (including n = 0) of every element of the Lyndon set.
pub fn candidate_pool(weight: u32) -> Vec<ExtendedCandidate> {
    let mut pool = Vec::new();
    for source in generate_l(weight).words {
        for n in 0..=source.depth() / 2 {
            match extend(&source, n as i64) {
                Ok(word) => pool.push(ExtendedCandidate {
                    source: source.clone(),
                    n,
                    word,
                }),
                Err(_) => break,
            }
        }
    }
    pool.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then_with(|| a.word.depth().cmp(&b.word.depth()))
            .then_with(|| b.word.cmp(&a.word))
    });
    pool
}
