//! Independent checks over solved tables and the shipped basis listings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{count_monomials, relation_population, BasisMonomial, LinComb, Rational};
use crate::error::{Error, Result};
use crate::lyndon::{collapse, generate_l};
use crate::solver::{substitute_words, TableSet};
use crate::words::{admissible_words, IndexWord};

/// The basis found at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisReport {
    pub weight: u32,
    pub generators: Vec<IndexWord>,
    /// Products of generators of all weights up to `weight`, totalling `weight`.
    pub monomial_count: u64,
    pub generator_count: usize,
    /// Extension order of each generator, as recovered by collapsing it.
    pub extension_profile: BTreeMap<usize, usize>,
    /// Generators with an odd trailing run of ones, which no extension produces.
    pub uncollapsible: usize,
    pub depth_sum: usize,
}

impl BasisReport {
    pub fn new(weight: u32, generators: Vec<IndexWord>, all_generator_weights: &[u32]) -> Self {
        let mut extension_profile = BTreeMap::new();
        let mut uncollapsible = 0;
        for g in &generators {
            match collapse(g) {
                Ok((_, n)) => *extension_profile.entry(n).or_insert(0) += 1,
                Err(_) => uncollapsible += 1,
            }
        }
        BasisReport {
            weight,
            monomial_count: count_monomials(all_generator_weights, weight),
            generator_count: generators.len(),
            depth_sum: generators.iter().map(IndexWord::depth).sum(),
            extension_profile,
            uncollapsible,
            generators,
        }
    }

    pub fn from_tables(weight: u32, tables: &TableSet) -> Result<Self> {
        let table = tables.get(weight).ok_or(Error::MissingTable(weight))?;
        let weights: Vec<u32> = tables.generators_through(weight).iter().map(IndexWord::weight).collect();
        Ok(Self::new(weight, table.generators.clone(), &weights))
    }

    /// First generator with a positive extension order, if any.
    pub fn first_extended(&self) -> Option<(&IndexWord, usize)> {
        self.generators
            .iter()
            .filter_map(|g| collapse(g).ok().filter(|(_, n)| *n > 0).map(|(_, n)| (g, n)))
            .next()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "weight {}", self.weight);
        let _ = writeln!(s, "generators ({}): {}", self.generator_count, gens.join(" "));
        let _ = writeln!(s, "monomials: {}", self.monomial_count);
        let _ = writeln!(s, "extension profile: {}", profile_text(&self.extension_profile));
        if self.uncollapsible > 0 {
            let _ = writeln!(s, "uncollapsible generators: {}", self.uncollapsible);
        }
        let _ = writeln!(s, "depth sum: {}", self.depth_sum);
        s
    }

    pub fn to_summary(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(ToString::to_string).collect();
        format!(
            "weight = {}\ngenerators = {}\ngenerator_count = {}\nmonomial_count = {}\nextension_profile = {}\nuncollapsible = {}\ndepth_sum = {}\n",
            self.weight,
            gens.join(" "),
            self.generator_count,
            self.monomial_count,
            profile_text(&self.extension_profile),
            self.uncollapsible,
            self.depth_sum
        )
    }
}

fn profile_text(p: &BTreeMap<usize, usize>) -> String {
    let parts: Vec<String> = p.iter().map(|(n, c)| format!("{n}:{c}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// A relation that did not reduce to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub kind: String,
    pub provenance: String,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecheckReport {
    pub weight: u32,
    pub population: usize,
    pub checked: usize,
    pub per_kind: BTreeMap<String, usize>,
    pub survivors: Vec<Survivor>,
}

impl RecheckReport {
    pub fn passed(&self) -> bool {
        self.survivors.is_empty()
    }

    pub fn exhaustive(&self) -> bool {
        self.checked == self.population
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "weight {}: {} of {} relations checked, {} nonzero\n",
            self.weight,
            self.checked,
            self.population,
            self.survivors.len()
        );
        for (k, n) in &self.per_kind {
            let _ = writeln!(s, "  {k}: {n}");
        }
        for v in &self.survivors {
            let _ = writeln!(s, "  NONZERO {} {}: {}", v.kind, v.provenance, v.residue);
        }
        s
    }

    pub fn to_summary(&self) -> String {
        format!(
            "recheck_weight = {}\nrecheck_population = {}\nrecheck_checked = {}\nrecheck_nonzero = {}\n",
            self.weight,
            self.population,
            self.checked,
            self.survivors.len()
        )
    }
}

/// How many relations [`recheck_relations`] examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    All,
    /// A reproducible random subset of this size (all if the population is smaller).
    Sample { size: usize, seed: u64 },
}

/// Regenerates the relations at `weight`, pushes each through the tables
/// and checks that it becomes exactly zero.
///
/// The population holds stuffle and shuffle product relations of every
/// pair, Hoffman and duality relations, the mixed product relations of
/// every triple of factors, and the dual image of each product and Hoffman
/// relation.
pub fn recheck_relations(weight: u32, tables: &TableSet, sampling: Sampling) -> Result<RecheckReport> {
    for w in 2..=weight {
        if tables.get(w).is_none() {
            return Err(Error::MissingTable(w));
        }
    }
    let population = relation_population(weight, true);
    let chosen: Vec<usize> = match sampling {
        Sampling::Sample { size, seed } if size < population.len() => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx = rand::seq::index::sample(&mut rng, population.len(), size).into_vec();
            idx.sort_unstable();
            idx
        }
        _ => (0..population.len()).collect(),
    };
    let results: Vec<Result<Option<Survivor>>> = chosen
        .par_iter()
        .map(|&i| {
            let spec = &population[i];
            let rel = spec.build();
            let mut lhs = substitute_words(&rel.combo, tables)?;
            if !rel.product.is_empty() {
                let rhs = tables.product_value(&rel.product)?;
                lhs.sub(&rhs);
            }
            Ok((!lhs.is_zero()).then(|| Survivor {
                kind: spec.kind_label(),
                provenance: spec.provenance(),
                residue: lhs.to_string(),
            }))
        })
        .collect();
    let mut per_kind = BTreeMap::new();
    for &i in &chosen {
        *per_kind.entry(population[i].kind_label()).or_insert(0) += 1;
    }
    let mut survivors = Vec::new();
    for r in results {
        if let Some(s) = r? {
            survivors.push(s);
        }
    }
    Ok(RecheckReport {
        weight,
        population: population.len(),
        checked: chosen.len(),
        per_kind,
        survivors,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub weight: u32,
    pub monomial_count: u64,
    pub generator_count: usize,
    pub lyndon_count: usize,
    /// `lyndon_count`, except 1 at weight 2 for the generator `Z(2)`.
    pub expected_generators: usize,
    pub generators_agree: bool,
    /// `d(W-2) + d(W-3)` from the computed counts, when both are known.
    pub recursion: Option<u64>,
}

impl DimensionRow {
    pub fn recursion_agrees(&self) -> Option<bool> {
        self.recursion.map(|r| r == self.monomial_count)
    }
}

pub fn dimension_report(max_weight: u32, tables: &TableSet) -> Result<Vec<DimensionRow>> {
    let mut rows: Vec<DimensionRow> = Vec::new();
    let mut dims: BTreeMap<u32, u64> = BTreeMap::from([(0, 1), (1, 0)]);
    for w in 2..=max_weight {
        let report = BasisReport::from_tables(w, tables)?;
        let lyndon_count = generate_l(w).len();
        let expected_generators = if w == 2 { 1 } else { lyndon_count };
        let recursion = match (dims.get(&(w - 2)), w.checked_sub(3).and_then(|k| dims.get(&k))) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        dims.insert(w, report.monomial_count);
        rows.push(DimensionRow {
            weight: w,
            monomial_count: report.monomial_count,
            generator_count: report.generator_count,
            lyndon_count,
            expected_generators,
            generators_agree: report.generator_count == expected_generators,
            recursion,
        });
    }
    Ok(rows)
}

pub fn dimension_text(rows: &[DimensionRow]) -> String {
    let mut s = String::from("weight  monomials  generators  |L_W|  agree  d(W-2)+d(W-3)\n");
    for r in rows {
        let rec = match r.recursion {
            Some(v) if v == r.monomial_count => format!("{v} ok"),
            Some(v) => format!("{v} MISMATCH"),
            None => "-".into(),
        };
        let _ = writeln!(
            s,
            "{:>6}  {:>9}  {:>10}  {:>5}  {:>5}  {rec}",
            r.weight,
            r.monomial_count,
            r.generator_count,
            r.lyndon_count,
            if r.generators_agree { "yes" } else { "NO" }
        );
    }
    s
}

const P27: &str = include_str!("../data/p27.txt");
const P28: &str = include_str!("../data/p28.txt");

/// One shipped basis listing and what was found wrong with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ListingReport {
    pub name: String,
    pub weight: u32,
    pub elements: Vec<IndexWord>,
    pub lyndon_count: usize,
    pub twofold: Vec<IndexWord>,
    pub extension_profile: BTreeMap<usize, usize>,
    pub failures: Vec<String>,
}

impl ListingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn parse_listing(text: &str, name: &str) -> Result<(u32, Vec<IndexWord>)> {
    let mut weight = None;
    let mut elements = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix('#') {
            if let Some(w) = h.trim().strip_prefix("weight:") {
                weight = Some(w.trim().parse().map_err(|_| Error::parse(name, i + 1, "bad weight"))?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        elements.push(line.parse().map_err(|e: Error| Error::parse(name, i + 1, e.to_string()))?);
    }
    let weight = weight.ok_or_else(|| Error::parse(name, 0, "missing `# weight:` header"))?;
    Ok((weight, elements))
}

/// Checks a listing against the Lyndon set of its weight: every element
/// has the weight, an even trailing run of ones, collapses into the set,
/// and the collapse is a bijection; exactly one element is twofold extended.
pub fn check_listing(name: &str, weight: u32, elements: Vec<IndexWord>) -> ListingReport {
    let lyndon: BTreeSet<IndexWord> = generate_l(weight).words.into_iter().collect();
    let mut failures = Vec::new();
    let mut hit: BTreeMap<IndexWord, Vec<IndexWord>> = BTreeMap::new();
    let mut twofold = Vec::new();
    let mut extension_profile = BTreeMap::new();
    for h in &elements {
        if h.weight() != weight {
            failures.push(format!("{h} has weight {}", h.weight()));
        }
        let ones = h.indices().iter().rev().take_while(|&&m| m == 1).count();
        if ones % 2 == 1 {
            failures.push(format!("{h} ends in an odd run of ones"));
        }
        match collapse(h) {
            Ok((source, n)) => {
                *extension_profile.entry(n).or_insert(0) += 1;
                if n == 2 {
                    twofold.push(h.clone());
                }
                if n == 0 && !crate::lyndon::is_lyndon(h) {
                    failures.push(format!("{h} has no trailing ones but is not Lyndon"));
                }
                if !lyndon.contains(&source) {
                    failures.push(format!("{h} collapses to {source}, which is not in L_{weight}"));
                }
                hit.entry(source).or_default().push(h.clone());
            }
            Err(e) => failures.push(format!("{h}: {e}")),
        }
    }
    for (source, hs) in &hit {
        if hs.len() > 1 {
            let hs: Vec<String> = hs.iter().map(ToString::to_string).collect();
            failures.push(format!("{source} is hit {} times: {}", hs.len(), hs.join(" ")));
        }
    }
    for l in &lyndon {
        if !hit.contains_key(l) {
            failures.push(format!("{l} in L_{weight} is not hit"));
        }
    }
    if elements.len() != lyndon.len() {
        failures.push(format!("{} elements, but |L_{weight}| = {}", elements.len(), lyndon.len()));
    }
    if twofold.len() != 1 {
        failures.push(format!("{} twofold-extended elements, expected exactly one", twofold.len()));
    }
    ListingReport {
        name: name.to_string(),
        weight,
        lyndon_count: lyndon.len(),
        elements,
        twofold,
        extension_profile,
        failures,
    }
}

/// Runs [`check_listing`] over the shipped weight-27 and weight-28 bases.
pub fn paper_basis_check() -> Result<Vec<ListingReport>> {
    let mut out = Vec::new();
    for (name, text) in [("P27", P27), ("P28", P28)] {
        let (weight, elements) = parse_listing(text, name)?;
        out.push(check_listing(name, weight, elements));
    }
    Ok(out)
}

pub fn listing_text(r: &ListingReport) -> String {
    let twofold: Vec<String> = r.twofold.iter().map(ToString::to_string).collect();
    let mut s = format!(
        "{}: weight {}, {} elements, |L_{}| = {}, extension profile {}, twofold {}\n",
        r.name,
        r.weight,
        r.elements.len(),
        r.weight,
        r.lyndon_count,
        profile_text(&r.extension_profile),
        twofold.join(" ")
    );
    for f in &r.failures {
        let _ = writeln!(s, "  FAIL {f}");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthStats {
    pub weight: u32,
    pub depth_sum: usize,
    pub histogram: BTreeMap<usize, usize>,
    /// Smallest depth sum any basis of new generators can have. Only
    /// computed for weight at most [`MINIMALITY_MAX_WEIGHT`].
    pub minimum: Option<usize>,
}

impl DepthStats {
    pub fn is_minimal(&self) -> Option<bool> {
        self.minimum.map(|m| m == self.depth_sum)
    }
}

pub const MINIMALITY_MAX_WEIGHT: u32 = 10;

/// Depth statistics of the generators at `weight`, with a minimality check
/// at small weight.
///
/// Any set of words whose images modulo products of lower-weight generators
/// are independent can serve as the new generators. Those sets form the
/// bases of a linear matroid, so a minimum depth sum is reached by taking
/// words greedily in order of depth, and the minimum is
/// `sum_d d * (rank(depth <= d) - rank(depth < d))`.
pub fn minimal_depth_stats(report: &BasisReport, tables: &TableSet) -> Result<DepthStats> {
    let mut histogram = BTreeMap::new();
    for g in &report.generators {
        *histogram.entry(g.depth()).or_insert(0) += 1;
    }
    let minimum = if report.weight <= MINIMALITY_MAX_WEIGHT {
        Some(min_depth_sum(report, tables)?)
    } else {
        None
    };
    Ok(DepthStats {
        weight: report.weight,
        depth_sum: report.depth_sum,
        histogram,
        minimum,
    })
}

fn min_depth_sum(report: &BasisReport, tables: &TableSet) -> Result<usize> {
    let table = tables.get(report.weight).ok_or(Error::MissingTable(report.weight))?;
    let gens: Vec<BasisMonomial> = table.generators.iter().cloned().map(BasisMonomial::generator).collect();
    let mut words = admissible_words(report.weight);
    words.sort_by_key(IndexWord::depth);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rank_sum = 0usize;
    for w in &words {
        let value: LinComb<BasisMonomial> = table.value(w).ok_or_else(|| Error::Unresolved(w.clone()))?;
        let mut row: Vec<Rational> = gens.iter().map(|g| value.get(g).cloned().unwrap_or_else(Rational::zero)).collect();
        reduce_row(&rows, &mut row);
        if row.iter().any(|c| !c.is_zero()) {
            rows.push(row);
            rank_sum += w.depth();
        }
    }
    Ok(rank_sum)
}

/// Reduces `row` against an echelon set kept in insertion order.
fn reduce_row(rows: &[Vec<Rational>], row: &mut [Rational]) {
    for r in rows {
        let lead = r.iter().position(|c| !c.is_zero()).expect("stored rows are nonzero");
        if row[lead].is_zero() {
            continue;
        }
        let f = &row[lead] / &r[lead];
        for (x, y) in row.iter_mut().zip(r) {
            *x -= &f * y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> IndexWord {
        IndexWord::new(v.to_vec()).unwrap()
    }

    #[test]
    fn listings_parse() {
        let (wt, p27) = parse_listing(P27, "P27").unwrap();
        assert_eq!(wt, 27);
        assert_eq!(p27.first(), Some(&w(&[27])));
        assert_eq!(p27.last(), Some(&w(&[6, 4, 6, 4, 3, 1, 1, 1, 1])));
        let (wt, p28) = parse_listing(P28, "P28").unwrap();
        assert_eq!(wt, 28);
        assert_eq!(p28.len(), 92);
    }

    #[test]
    fn shipped_listings_pass() {
        for r in paper_basis_check().unwrap() {
            assert!(r.passed(), "{}", listing_text(&r));
        }
    }

    #[test]
    fn listing_faults_are_named() {
        let (_, mut p28) = parse_listing(P28, "P28").unwrap();
        p28.pop();
        p28.push(w(&[9, 7, 6, 4, 1, 1]));
        let r = check_listing("P28", 28, p28);
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.contains("twofold")));
        assert!(r.failures.iter().any(|f| f.contains("Z(9,7,6,4,1,1)")));
    }

    #[test]
    fn basis_report_profile() {
        let r = BasisReport::new(12, vec![w(&[9, 3]), w(&[6, 4, 1, 1])], &[2, 3, 5, 7, 8, 9, 10, 11, 11, 12, 12]);
        assert_eq!(r.extension_profile, BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(r.depth_sum, 6);
        assert_eq!(r.first_extended(), Some((&w(&[6, 4, 1, 1]), 1)));
        let seed = BasisReport::new(2, vec![w(&[2])], &[2]);
        assert_eq!(seed.extension_profile, BTreeMap::from([(0, 1)]));
        let odd = BasisReport::new(3, vec![w(&[2, 1])], &[2, 3]);
        assert_eq!(odd.uncollapsible, 1);
        assert_eq!(seed.monomial_count, 1);
    }
}
