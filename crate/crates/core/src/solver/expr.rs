use std::fmt::Write as _;

use num_traits::Zero;

use crate::algebra::{BasisMonomial, LinComb, Rational};
use crate::error::{Error, Result};
use crate::words::IndexWord;

/// A value in the middle of a reduction: unresolved words of the working
/// weight plus already-known basis monomials. The two parts never share keys.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Expr {
    pub words: LinComb<IndexWord>,
    pub monos: LinComb<BasisMonomial>,
}

impl Expr {
    pub fn from_words(words: LinComb<IndexWord>) -> Self {
        Expr {
            words,
            monos: LinComb::new(),
        }
    }

    pub fn from_monos(monos: LinComb<BasisMonomial>) -> Self {
        Expr {
            words: LinComb::new(),
            monos,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_zero() && self.monos.is_zero()
    }

    pub fn term_count(&self) -> usize {
        self.words.len() + self.monos.len()
    }

    pub fn add_scaled(&mut self, other: &Expr, factor: &Rational) {
        self.words.add_scaled(&other.words, factor);
        self.monos.add_scaled(&other.monos, factor);
    }

    pub fn scale(&mut self, factor: &Rational) {
        self.words.scale(factor);
        self.monos.scale(factor);
    }

    /// Replaces `word` by `value` if present. Returns whether it was present.
    pub fn substitute(&mut self, word: &IndexWord, value: &Expr) -> bool {
        match self.words.remove(word) {
            Some(c) => {
                self.add_scaled(value, &c);
                true
            }
            None => false,
        }
    }

    /// Rewrites every word for which `lookup` has a value, in one pass.
    pub fn substitute_all<'a>(&self, lookup: impl Fn(&IndexWord) -> Option<&'a Expr>) -> Expr {
        let mut out = Expr::from_monos(self.monos.clone());
        for (w, c) in self.words.iter() {
            match lookup(w) {
                Some(value) => out.add_scaled(value, c),
                None => out.words.add_term(w.clone(), c.clone()),
            }
        }
        out
    }

    /// Text form used in checkpoints: words as `c*Z(..)`, monomials as
    /// `c*[Z(..)*Z(..)]`.
    pub fn to_checkpoint_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (w, c) in self.words.iter() {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c}*{w}");
        }
        for (m, c) in self.monos.iter() {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c}*[{m}]");
        }
        s
    }

    pub fn parse_checkpoint_text(s: &str) -> Result<Expr> {
        let s = s.trim();
        let mut out = Expr::default();
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (coeff, body) = term
                .split_once('*')
                .ok_or_else(|| Error::InvalidWord(format!("term `{term}` lacks a coefficient")))?;
            let c: Rational = coeff
                .parse()
                .map_err(|_| Error::InvalidWord(format!("bad coefficient `{coeff}`")))?;
            if c.is_zero() {
                continue;
            }
            if let Some(mono) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
                out.monos.add_term(mono.parse()?, c);
            } else {
                out.words.add_term(body.parse()?, c);
            }
        }
        Ok(out)
    }
}
