//! Stuffle (harmonic) and shuffle products.
//!
//! Both are computed by dynamic programming over prefix pairs using the
//! last-letter recursions
//!
//! ```text
//! (u a) * (v b) = (u * v b) a + (u a * v) b + (u * v)(a + b)      stuffle
//! (u a) ш (v b) = (u ш v b) a + (u a ш v) b                       shuffle
//! ```
//!
//! with the empty word as unit. Coefficients are counted in `u64`, which is
//! exact for every weight this crate handles (a shuffle coefficient is at most
//! `binom(|u|+|v|, |u|)`).

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;

use super::{LinComb, Rational};
use crate::words::{BinaryWord, IndexWord, Letter};

type Counts<T> = HashMap<Vec<T>, u64>;

fn product_counts<T, F>(u: &[T], v: &[T], merge: F) -> Counts<T>
where
    T: Copy + Eq + Hash,
    F: Fn(T, T) -> Option<T>,
{
    let cols = v.len() + 1;
    let mut table: Vec<Counts<T>> = Vec::with_capacity((u.len() + 1) * cols);
    for i in 0..=u.len() {
        for j in 0..=v.len() {
            let cell = if i == 0 {
                Counts::from([(v[..j].to_vec(), 1)])
            } else if j == 0 {
                Counts::from([(u[..i].to_vec(), 1)])
            } else {
                let mut cell = Counts::new();
                let mut push = |from: &Counts<T>, letter: T| {
                    for (word, c) in from {
                        let mut longer = Vec::with_capacity(word.len() + 1);
                        longer.extend_from_slice(word);
                        longer.push(letter);
                        *cell.entry(longer).or_insert(0) += c;
                    }
                };
                push(&table[(i - 1) * cols + j], u[i - 1]);
                push(&table[i * cols + j - 1], v[j - 1]);
                if let Some(m) = merge(u[i - 1], v[j - 1]) {
                    push(&table[(i - 1) * cols + j - 1], m);
                }
                cell
            };
            table.push(cell);
        }
    }
    table.pop().unwrap_or_default()
}

fn to_rational(c: u64) -> Rational {
    Rational::from_integer(BigInt::from(c))
}

pub(crate) fn stuffle_slices(u: &[u32], v: &[u32]) -> LinComb<IndexWord> {
    product_counts(u, v, |a, b| Some(a + b))
        .into_iter()
        .filter(|(w, _)| !w.is_empty())
        .map(|(w, c)| (IndexWord::from_vec_unchecked(w), to_rational(c)))
        .collect()
}

/// The stuffle product; admissibility of the inputs is not required.
pub fn stuffle(u: &IndexWord, v: &IndexWord) -> LinComb<IndexWord> {
    stuffle_slices(u.indices(), v.indices())
}

/// Shuffle product of two binary words.
pub fn shuffle(u: &BinaryWord, v: &BinaryWord) -> LinComb<BinaryWord> {
    product_counts::<Letter, _>(u.letters(), v.letters(), |_, _| None)
        .into_iter()
        .map(|(w, c)| (BinaryWord(w), to_rational(c)))
        .collect()
}

/// Shuffle product of index words through their binary encodings.
pub fn shuffle_words(u: &IndexWord, v: &IndexWord) -> LinComb<IndexWord> {
    shuffle_binary_to_words(&u.to_binary(), &v.to_binary())
}

pub(crate) fn shuffle_binary_to_words(u: &BinaryWord, v: &BinaryWord) -> LinComb<IndexWord> {
    shuffle(u, v).map_keys(|b| {
        // both factors end in Y, so every interleaving does
        IndexWord::from_binary(b).expect("shuffle of Y-terminated words ends in Y")
    })
}

/// Extends a product bilinearly to a combination on the left.
pub fn product_combo(
    lc: &LinComb<IndexWord>,
    v: &IndexWord,
    product: impl Fn(&IndexWord, &IndexWord) -> LinComb<IndexWord>,
) -> LinComb<IndexWord> {
    let mut out = LinComb::new();
    for (w, c) in lc.iter() {
        out.add_scaled(&product(w, v), c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    fn combo(terms: &[(&[u32], i64)]) -> LinComb<IndexWord> {
        terms.iter().map(|(v, c)| (w(v), int(*c))).collect()
    }

    #[test]
    fn stuffle_examples() {
        assert_eq!(stuffle(&w(&[2]), &w(&[2])), combo(&[(&[2, 2], 2), (&[4], 1)]));
        assert_eq!(
            stuffle(&w(&[2]), &w(&[2, 1])),
            combo(&[(&[2, 2, 1], 2), (&[2, 1, 2], 1), (&[2, 3], 1), (&[4, 1], 1)])
        );
        assert_eq!(
            stuffle(&w(&[3]), &w(&[5])),
            combo(&[(&[3, 5], 1), (&[5, 3], 1), (&[8], 1)])
        );
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(
            shuffle_words(&w(&[2]), &w(&[2])),
            combo(&[(&[2, 2], 2), (&[3, 1], 4)])
        );
        let xy: BinaryWord = "XY".parse().unwrap();
        let xxy: BinaryWord = "XXY".parse().unwrap();
        let prod = shuffle(&xy, &xxy);
        let total: Rational = prod.iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, int(10));
        assert_eq!(prod.get(&"XYXXY".parse().unwrap()), Some(&int(1)));
        assert_eq!(prod.get(&"XXYXY".parse().unwrap()), Some(&int(3)));
        assert_eq!(prod.get(&"XXXYY".parse().unwrap()), Some(&int(6)));
        assert_eq!(prod.len(), 3);
        let unit = shuffle(&xxy, &BinaryWord::default());
        assert_eq!(unit, LinComb::term(xxy, Rational::one()));
    }

    fn small_word() -> impl Strategy<Value = IndexWord> {
        proptest::collection::vec(1u32..4, 1..4).prop_map(|v| IndexWord::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn products_commute(u in small_word(), v in small_word()) {
            prop_assert_eq!(stuffle(&u, &v), stuffle(&v, &u));
            prop_assert_eq!(shuffle_words(&u, &v), shuffle_words(&v, &u));
        }

        #[test]
        fn products_associate(u in small_word(), v in small_word(), x in small_word()) {
            let left = product_combo(&stuffle(&u, &v), &x, stuffle);
            let right = product_combo(&stuffle(&v, &x), &u, stuffle);
            prop_assert_eq!(left, right);
            let left = product_combo(&shuffle_words(&u, &v), &x, shuffle_words);
            let right = product_combo(&shuffle_words(&v, &x), &u, shuffle_words);
            prop_assert_eq!(left, right);
        }

        #[test]
        fn products_are_homogeneous(u in small_word(), v in small_word()) {
            let weight = u.weight() + v.weight();
            for (r, _) in stuffle(&u, &v).iter() {
                prop_assert_eq!(r.weight(), weight);
                prop_assert!(r.depth() <= u.depth() + v.depth());
            }
            let mut total = Rational::from_integer(0.into());
            for (r, c) in shuffle(&u.to_binary(), &v.to_binary()).iter() {
                prop_assert_eq!(r.len() as u32, weight);
                total += c;
            }
            let n = weight as u64;
            let k = u.weight() as u64;
            let binom = (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
            prop_assert_eq!(total, to_rational(binom));
        }
    }
}
