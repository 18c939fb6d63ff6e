//! Relation families among weight-homogeneous MZVs.

use std::cmp::Reverse;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::products::{product_combo, shuffle_binary_to_words, shuffle_words, stuffle, stuffle_slices};
use super::LinComb;
use crate::error::{Error, Result};
use crate::words::{admissible_words, BinaryWord, CandidateSet, ElimKey, IndexWord, Letter};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RelationKind {
    Stuffle,
    Shuffle,
    Hoffman,
    Duality,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [
        RelationKind::Stuffle,
        RelationKind::Shuffle,
        RelationKind::Hoffman,
        RelationKind::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Stuffle => "stuffle",
            RelationKind::Shuffle => "shuffle",
            RelationKind::Hoffman => "hoffman",
            RelationKind::Duality => "duality",
        }
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::UnknownRelationKind(s.trim().to_string()))
    }
}

/// Set of enabled relation kinds; renders in a fixed canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RelationKinds(BTreeSet<RelationKind>);

impl RelationKinds {
    pub fn new(kinds: impl IntoIterator<Item = RelationKind>) -> Self {
        RelationKinds(kinds.into_iter().collect())
    }

    pub fn all() -> Self {
        Self::new(RelationKind::ALL)
    }

    pub fn contains(&self, k: RelationKind) -> bool {
        self.0.contains(&k)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = RelationKind> + '_ {
        self.0.iter().copied()
    }
}

impl Default for RelationKinds {
    /// stuffle, shuffle and hoffman; duality is opt-in.
    fn default() -> Self {
        Self::new([RelationKind::Stuffle, RelationKind::Shuffle, RelationKind::Hoffman])
    }
}

impl FromStr for RelationKinds {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .filter(|part| !part.trim().is_empty())
            .map(str::parse)
            .collect::<Result<BTreeSet<_>>>()
            .map(RelationKinds)
    }
}

impl fmt::Display for RelationKinds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.0.iter().map(|k| k.name()).collect();
        f.write_str(&names.join(","))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Product {
    Stuffle,
    Shuffle,
}

impl Product {
    fn apply(self, u: &IndexWord, v: &IndexWord) -> LinComb<IndexWord> {
        match self {
            Product::Stuffle => stuffle(u, v),
            Product::Shuffle => shuffle_words(u, v),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Product::Stuffle => "stuffle",
            Product::Shuffle => "shuffle",
        }
    }
}

/// Recipe for one relation. Materialize it with [`RelationSpec::build`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RelationSpec {
    /// `u * v = Z(u) Z(v)` for one product.
    Product(Product, IndexWord, IndexWord),
    /// `u * v - u ш v = 0`.
    DoubleShuffle(IndexWord, IndexWord),
    /// `(u inner v) outer w = Z(u) Z(v) Z(w)`.
    Triple {
        inner: Product,
        outer: Product,
        factors: [IndexWord; 3],
    },
    Hoffman(IndexWord),
    Duality(IndexWord),
    /// Another relation with every word replaced by its dual.
    DualImage(Box<RelationSpec>),
}

impl RelationSpec {
    pub fn kind_label(&self) -> String {
        match self {
            RelationSpec::Product(p, ..) => format!("{}-product", p.name()),
            RelationSpec::DoubleShuffle(..) => "double-shuffle".into(),
            RelationSpec::Triple { inner, outer, .. } => {
                format!("{}-{}-triple", inner.name(), outer.name())
            }
            RelationSpec::Hoffman(_) => "hoffman".into(),
            RelationSpec::DualImage(inner) => format!("dual-{}", inner.kind_label()),
            RelationSpec::Duality(_) => "duality".into(),
        }
    }

    pub fn provenance(&self) -> String {
        match self {
            RelationSpec::Product(_, u, v) | RelationSpec::DoubleShuffle(u, v) => format!("{u}*{v}"),
            RelationSpec::Triple { factors: [u, v, w], .. } => format!("{u}*{v}*{w}"),
            RelationSpec::Hoffman(v) | RelationSpec::Duality(v) => v.to_string(),
            RelationSpec::DualImage(inner) => inner.provenance(),
        }
    }

    /// Factors whose product the relation's combination equals.
    pub fn product_factors(&self) -> Vec<IndexWord> {
        match self {
            RelationSpec::Product(_, u, v) => vec![u.clone(), v.clone()],
            RelationSpec::Triple { factors, .. } => factors.to_vec(),
            RelationSpec::DualImage(inner) => inner.product_factors(),
            _ => Vec::new(),
        }
    }

    pub fn build(&self) -> Relation {
        let combo = match self {
            RelationSpec::Product(p, u, v) => p.apply(u, v),
            RelationSpec::DoubleShuffle(u, v) => {
                let mut c = stuffle(u, v);
                c.sub(&shuffle_words(u, v));
                c
            }
            RelationSpec::Triple {
                inner,
                outer,
                factors: [u, v, w],
            } => {
                let first = inner.apply(u, v);
                product_combo(&first, w, |a, b| outer.apply(a, b))
            }
            RelationSpec::Hoffman(v) => hoffman_combo(v),
            RelationSpec::DualImage(inner) => inner
                .build()
                .combo
                .map_keys(|w| w.dual().expect("relations hold admissible words")),
            RelationSpec::Duality(v) => {
                let mut c = LinComb::unit(v.clone());
                c.add_term(v.dual().expect("duality spec holds an admissible word"), -num_one());
                c
            }
        };
        Relation {
            combo,
            product: self.product_factors(),
            spec: self.clone(),
        }
    }
}

fn num_one() -> super::Rational {
    super::Rational::one()
}

/// An identity `combo = prod Z(product)` (or `combo = 0` when `product` is
/// empty) between real numbers.
#[derive(Clone, Debug)]
pub struct Relation {
    pub combo: LinComb<IndexWord>,
    pub product: Vec<IndexWord>,
    pub spec: RelationSpec,
}

impl Relation {
    pub fn weight(&self) -> Option<u32> {
        self.combo.keys().next().map(IndexWord::weight)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut weights = self.combo.keys().map(IndexWord::weight);
        let first = weights.next();
        let product_weight: u32 = self.product.iter().map(IndexWord::weight).sum();
        weights.all(|w| Some(w) == first)
            && (self.product.is_empty() || first.is_none_or(|w| w == product_weight))
    }

    /// Dump line: `0 = c1*Z(..) + ... # kind: provenance`, terms in
    /// elimination order (first-eliminated word first).
    pub fn render(&self, pool: &CandidateSet) -> String {
        let mut terms: Vec<_> = self.combo.iter().collect();
        terms.sort_by_cached_key(|(w, _)| Reverse(ElimKey::new(w, pool)));
        let mut parts: Vec<String> = terms.iter().map(|(w, c)| format!("{c}*{w}")).collect();
        if !self.product.is_empty() {
            let factors: Vec<String> = self.product.iter().map(ToString::to_string).collect();
            parts.push(format!("-1*{}", factors.join("*")));
        }
        let rhs = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        format!("0 = {rhs} # {}: {}", self.spec.kind_label(), self.spec.provenance())
    }
}

/// `stuffle((1), v) - shuffle(Y, v)`: the divergent `(1, v)` term cancels.
fn hoffman_combo(v: &IndexWord) -> LinComb<IndexWord> {
    let mut combo = stuffle_slices(&[1], v.indices());
    let y = BinaryWord(vec![Letter::Y]);
    combo.sub(&shuffle_binary_to_words(&y, &v.to_binary()));
    assert!(
        combo.keys().all(IndexWord::is_admissible),
        "non-admissible word survived the regularized difference for {v}"
    );
    combo
}

pub fn hoffman_relation(v: &IndexWord) -> Result<Relation> {
    if !v.is_admissible() {
        return Err(Error::NotAdmissible(v.clone()));
    }
    Ok(RelationSpec::Hoffman(v.clone()).build())
}

/// `None` for self-dual words.
pub fn duality_relation(v: &IndexWord) -> Result<Option<Relation>> {
    let d = v.dual()?;
    Ok((d != *v).then(|| RelationSpec::Duality(v.clone()).build()))
}

/// Unordered admissible pairs `(u, v)` with `weight(u) + weight(v) = weight`.
fn pairs(weight: u32) -> Vec<(IndexWord, IndexWord)> {
    let mut out = Vec::new();
    for a in 2..=weight / 2 {
        let b = weight - a;
        if b < 2 {
            continue;
        }
        let left = admissible_words(a);
        let right = admissible_words(b);
        for u in &left {
            for v in &right {
                if a == b && u > v {
                    continue;
                }
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

fn within_cap(depth: usize, cap: Option<usize>) -> bool {
    cap.is_none_or(|c| depth <= c)
}

/// The relation plan at `weight`, in the documented order: product pairs,
/// then Hoffman relations, then duality relations.
pub fn gen_relations(weight: u32, kinds: &RelationKinds, depth_cap: Option<usize>) -> Vec<RelationSpec> {
    let mut out = Vec::new();
    if weight < 3 {
        return out;
    }
    let stuffle_on = kinds.contains(RelationKind::Stuffle);
    let shuffle_on = kinds.contains(RelationKind::Shuffle);
    if stuffle_on || shuffle_on {
        for (u, v) in pairs(weight) {
            if !within_cap(u.depth() + v.depth(), depth_cap) {
                continue;
            }
            out.push(match (stuffle_on, shuffle_on) {
                (true, true) => RelationSpec::DoubleShuffle(u, v),
                (true, false) => RelationSpec::Product(Product::Stuffle, u, v),
                _ => RelationSpec::Product(Product::Shuffle, u, v),
            });
        }
    }
    if kinds.contains(RelationKind::Hoffman) {
        for v in admissible_words(weight - 1) {
            if within_cap(v.depth() + 1, depth_cap) {
                out.push(RelationSpec::Hoffman(v));
            }
        }
    }
    if kinds.contains(RelationKind::Duality) {
        out.extend(duality_specs(weight, depth_cap));
    }
    out
}

fn duality_specs(weight: u32, depth_cap: Option<usize>) -> Vec<RelationSpec> {
    admissible_words(weight)
        .into_iter()
        .filter_map(|v| {
            let d = v.dual().ok()?;
            (v > d && within_cap(v.depth().max(d.depth()), depth_cap)).then_some(RelationSpec::Duality(v))
        })
        .collect()
}

/// Every relation family at `weight`: both product relations of each pair
/// separately, Hoffman and duality relations, and optionally the four mixed
/// triple-product relations of each triple. The dual image of each product
/// and Hoffman relation follows.
pub fn relation_population(weight: u32, with_triples: bool) -> Vec<RelationSpec> {
    let mut out = Vec::new();
    if weight < 3 {
        return out;
    }
    for (u, v) in pairs(weight) {
        out.push(RelationSpec::Product(Product::Stuffle, u.clone(), v.clone()));
        out.push(RelationSpec::Product(Product::Shuffle, u, v));
    }
    out.extend(admissible_words(weight - 1).into_iter().map(RelationSpec::Hoffman));
    out.extend(duality_specs(weight, None));
    if with_triples {
        for c in 2..=weight.saturating_sub(4) {
            for (u, v) in pairs(weight - c) {
                for w in admissible_words(c) {
                    for inner in [Product::Stuffle, Product::Shuffle] {
                        for outer in [Product::Stuffle, Product::Shuffle] {
                            out.push(RelationSpec::Triple {
                                inner,
                                outer,
                                factors: [u.clone(), v.clone(), w.clone()],
                            });
                        }
                    }
                }
            }
        }
    }
    let images: Vec<RelationSpec> = out
        .iter()
        .filter(|s| !matches!(s, RelationSpec::Duality(_)))
        .map(|s| RelationSpec::DualImage(Box::new(s.clone())))
        .collect();
    out.extend(images);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;
    use num_bigint::BigInt;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn hoffman_examples() {
        let r = hoffman_relation(&w(&[2])).unwrap();
        let expected: LinComb<IndexWord> = [(w(&[3]), int(1)), (w(&[2, 1]), int(-1))].into_iter().collect();
        assert_eq!(r.combo, expected);
        let r = hoffman_relation(&w(&[3])).unwrap();
        assert!(r.combo.keys().all(|x| x.is_admissible() && x.weight() == 4));
        assert!(!r.combo.is_zero());
        assert!(hoffman_relation(&w(&[1, 2])).is_err());
    }

    #[test]
    fn dual_image_relabels_words() {
        let spec = RelationSpec::DualImage(Box::new(RelationSpec::Hoffman(w(&[2]))));
        let r = spec.build();
        let expected: LinComb<IndexWord> = [(w(&[2, 1]), int(1)), (w(&[3]), int(-1))].into_iter().collect();
        assert_eq!(r.combo, expected);
        assert_eq!(spec.kind_label(), "dual-hoffman");
        let spec = RelationSpec::DualImage(Box::new(RelationSpec::Product(Product::Stuffle, w(&[2]), w(&[3]))));
        assert_eq!(spec.build().product, vec![w(&[2]), w(&[3])]);
    }

    #[test]
    fn hoffman_cancels_divergent_term() {
        for weight in 2..=10 {
            for v in admissible_words(weight) {
                let r = hoffman_relation(&v).unwrap();
                let mut lead = vec![1];
                lead.extend_from_slice(v.indices());
                assert!(r.combo.get(&w(&lead)).is_none());
                assert!(r.combo.keys().all(IndexWord::is_admissible));
                assert!(r.is_homogeneous());
            }
        }
    }

    #[test]
    fn duality_examples() {
        let r = duality_relation(&w(&[3])).unwrap().unwrap();
        assert_eq!(r.combo.get(&w(&[2, 1])), Some(&int(-1)));
        let r = duality_relation(&w(&[4, 1])).unwrap().unwrap();
        assert_eq!(r.combo.get(&w(&[4, 1])), Some(&int(1)));
        assert_eq!(r.combo.get(&w(&[3, 1, 1])), Some(&int(-1)));
        assert!(duality_relation(&w(&[2])).unwrap().is_none());
    }

    #[test]
    fn generated_sets() {
        let kinds: RelationKinds = "stuffle,shuffle".parse().unwrap();
        let rels = gen_relations(4, &kinds, None);
        assert_eq!(rels.len(), 1);
        let r = rels[0].build();
        let expected: LinComb<IndexWord> = [(w(&[4]), int(1)), (w(&[3, 1]), int(-4))].into_iter().collect();
        assert_eq!(r.combo, expected);

        let hoffman: RelationKinds = "hoffman".parse().unwrap();
        let rels = gen_relations(3, &hoffman, None);
        assert_eq!(rels, vec![RelationSpec::Hoffman(w(&[2]))]);
        assert!(gen_relations(3, &kinds, None).is_empty());
    }

    #[test]
    fn kind_parsing() {
        assert!(matches!(
            "stuffle,bogus".parse::<RelationKinds>(),
            Err(Error::UnknownRelationKind(k)) if k == "bogus"
        ));
        let k: RelationKinds = "hoffman,stuffle,shuffle".parse().unwrap();
        assert_eq!(k.to_string(), "stuffle,shuffle,hoffman");
        assert_eq!(k, RelationKinds::default());
    }

    #[test]
    fn every_relation_is_homogeneous() {
        for weight in 3..=8 {
            for spec in relation_population(weight, true) {
                let r = spec.build();
                assert!(r.is_homogeneous(), "{}", r.render(&CandidateSet::default()));
                assert!(r.combo.keys().all(IndexWord::is_admissible));
                assert_eq!(r.weight().unwrap_or(weight), weight);
            }
        }
    }

    #[test]
    fn depth_cap_limits_words() {
        for spec in gen_relations(9, &RelationKinds::all(), Some(3)) {
            assert!(spec.build().combo.keys().all(|x| x.depth() <= 3));
        }
    }

    #[test]
    fn render_format() {
        let pool = CandidateSet::default();
        let r = RelationSpec::Product(Product::Stuffle, w(&[2]), w(&[2])).build();
        assert_eq!(r.render(&pool), "0 = 2*Z(2,2) + 1*Z(4) + -1*Z(2)*Z(2) # stuffle-product: Z(2)*Z(2)");
    }
}
