use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::{LinComb, Rational};
use crate::error::{Error, Result};
use crate::words::IndexWord;

/// A product of basis generators. Factors are kept sorted descending by
/// weight, then descending by word order, so equal products compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisMonomial {
    factors: Vec<IndexWord>,
}

fn factor_order(a: &IndexWord, b: &IndexWord) -> Ordering {
    b.weight().cmp(&a.weight()).then_with(|| b.cmp(a))
}

impl BasisMonomial {
    pub fn generator(g: IndexWord) -> Self {
        BasisMonomial { factors: vec![g] }
    }

    pub fn from_factors(mut factors: Vec<IndexWord>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidWord("monomial without factors".into()));
        }
        factors.sort_by(factor_order);
        Ok(BasisMonomial { factors })
    }

    pub fn factors(&self) -> &[IndexWord] {
        &self.factors
    }

    pub fn weight(&self) -> u32 {
        self.factors.iter().map(IndexWord::weight).sum()
    }

    pub fn is_generator(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn depth_sum(&self) -> usize {
        self.factors.iter().map(IndexWord::depth).sum()
    }

    pub fn mul(&self, other: &BasisMonomial) -> BasisMonomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&other.factors);
        factors.sort_by(factor_order);
        BasisMonomial { factors }
    }
}

impl Ord for BasisMonomial {
    /// Fewer factors first; then factor by factor in canonical factor order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors.len().cmp(&other.factors.len()).then_with(|| {
            self.factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| factor_order(a, b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for BasisMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BasisMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split('*')
            .map(str::parse::<IndexWord>)
            .collect::<Result<Vec<_>>>()?;
        BasisMonomial::from_factors(factors)
    }
}

/// Product of two combinations over monomials.
pub fn mul_combos(a: &LinComb<BasisMonomial>, b: &LinComb<BasisMonomial>) -> LinComb<BasisMonomial> {
    let mut out = LinComb::new();
    for (ma, ca) in a.iter() {
        for (mb, cb) in b.iter() {
            out.add_term(ma.mul(mb), ca * cb);
        }
    }
    out
}

/// Number of distinct monomials of total weight `weight` built from
/// generators with the given weights (repetition allowed).
pub fn count_monomials(generator_weights: &[u32], weight: u32) -> u64 {
    let mut ways = vec![0u64; weight as usize + 1];
    ways[0] = 1;
    for &g in generator_weights {
        let g = g as usize;
        if g == 0 || g > weight as usize {
            continue;
        }
        for total in g..=weight as usize {
            ways[total] += ways[total - g];
        }
    }
    ways[weight as usize]
}

/// Parses `c1*Z(..)*Z(..) + c2*Z(..)` (or `0`) into a monomial combination.
pub fn parse_monomial_combo(s: &str) -> Result<LinComb<BasisMonomial>> {
    let s = s.trim();
    let mut out = LinComb::new();
    if s == "0" {
        return Ok(out);
    }
    for term in s.split(" + ") {
        let (coeff, mono) = term
            .split_once('*')
            .ok_or_else(|| Error::InvalidWord(format!("term `{term}` lacks a coefficient")))?;
        let c: Rational = coeff
            .parse()
            .map_err(|_| Error::InvalidWord(format!("bad coefficient `{coeff}`")))?;
        out.add_term(mono.parse()?, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn canonical_factor_order() {
        let m = BasisMonomial::from_factors(vec![w(&[2]), w(&[5, 3]), w(&[3]), w(&[2])]).unwrap();
        assert_eq!(m.to_string(), "Z(5,3)*Z(3)*Z(2)*Z(2)");
        assert_eq!(m.weight(), 15);
        assert_eq!("Z(2)*Z(5,3)*Z(2)*Z(3)".parse::<BasisMonomial>().unwrap(), m);
    }

    #[test]
    fn monomial_counts() {
        // generators (2),(3),(5),(7),(5,3)
        let gens = [2, 3, 5, 7, 8];
        let counts: Vec<u64> = (2..=8).map(|w| count_monomials(&gens, w)).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 2, 3, 4]);
    }

    #[test]
    fn combo_text_round_trip() {
        let text = "3/10*Z(2)*Z(2) + -1*Z(3)";
        let lc = parse_monomial_combo(text).unwrap();
        assert_eq!(lc.len(), 2);
        assert!(parse_monomial_combo("0").unwrap().is_zero());
        assert!(parse_monomial_combo("Z(3)").is_err());
    }
}
