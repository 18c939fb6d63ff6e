//! Weight-by-weight solve: stuffle phase by family, then elimination over
//! the remaining (Lyndon) words with the shuffle and regularized relations.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

use super::expr::Expr;
use super::family::{family_partition, solve_family};
use super::master::{Absorbed, MasterExpression};
use super::table::{sha256_hex, Phase, SubstitutionTable, TableSet};
use crate::algebra::{gen_relations, BasisMonomial, LinComb, RelationKind, RelationKinds, RelationSpec};
use crate::error::{Error, Result};
use crate::verify::BasisReport;
use crate::words::{admissible_words, CandidateSet, ElimKey, IndexWord};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub jobs: usize,
    pub kinds: RelationKinds,
    pub depth_cap: Option<usize>,
    /// Shuffle-phase checkpoint interval, in pivots.
    pub checkpoint_every: usize,
    pub checkpoint_path: Option<PathBuf>,
    /// Stop with [`Error::Halted`] after writing this many checkpoints.
    /// Used to exercise resumption.
    pub halt_after_checkpoints: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            jobs: 1,
            kinds: RelationKinds::default(),
            depth_cap: None,
            checkpoint_every: 1000,
            checkpoint_path: None,
            halt_after_checkpoints: None,
        }
    }
}

impl SolverConfig {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_kinds(mut self, kinds: RelationKinds) -> Self {
        self.kinds = kinds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if self.kinds.is_empty() {
            return Err(Error::Config("at least one relation kind is required".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::Config("checkpoint interval must be at least 1".into()));
        }
        if self.depth_cap == Some(0) {
            return Err(Error::Config("depth cap must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub families: usize,
    pub stuffle_relations: usize,
    pub stuffle_entries: usize,
    pub elimination_relations: usize,
    pub pivots: usize,
    pub redundant: usize,
    pub deferred: usize,
    /// Largest total term count of the master expression.
    pub max_master_terms: usize,
    /// Total terms over all entries of the final table.
    pub table_terms: usize,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub table: SubstitutionTable,
    pub report: BasisReport,
    pub stats: SolveStats,
}

enum Stage {
    Start,
    /// Stuffle phase finished through this depth.
    Stuffle(usize),
    /// Shuffle phase consumed this many relations.
    Shuffle(usize),
}

struct Checkpointer<'a> {
    config: &'a SolverConfig,
    fingerprint: String,
    written: usize,
}

impl Checkpointer<'_> {
    fn save(
        &mut self,
        stage: &Stage,
        stuffle: &BTreeMap<IndexWord, Expr>,
        deferred: &[Expr],
        brackets: Option<&BTreeMap<IndexWord, Expr>>,
    ) -> Result<()> {
        let Some(path) = &self.config.checkpoint_path else {
            return Ok(());
        };
        let mut body = String::new();
        for (w, e) in stuffle {
            body.push_str(&format!("S {w} = {}\n", e.to_checkpoint_text()));
        }
        for e in deferred {
            body.push_str(&format!("D {}\n", e.to_checkpoint_text()));
        }
        for (w, e) in brackets.into_iter().flatten() {
            body.push_str(&format!("B {w} = {}\n", e.to_checkpoint_text()));
        }
        let stage = match stage {
            Stage::Start => "start".to_string(),
            Stage::Stuffle(d) => format!("stuffle {d}"),
            Stage::Shuffle(n) => format!("shuffle {n}"),
        };
        let text = format!(
            "# zeta-forge checkpoint\n# fingerprint: {}\n# stage: {stage}\n# sha256: {}\n{body}",
            self.fingerprint,
            sha256_hex(body.as_bytes())
        );
        let tmp = path.with_extension("ckpt.tmp");
        fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
        self.written += 1;
        if self.config.halt_after_checkpoints == Some(self.written) {
            return Err(Error::Halted);
        }
        Ok(())
    }
}

struct Resumed {
    stage: Stage,
    stuffle: BTreeMap<IndexWord, Expr>,
    deferred: Vec<Expr>,
    brackets: BTreeMap<IndexWord, Expr>,
}

fn load_checkpoint(path: &PathBuf, fingerprint: &str) -> Result<Option<Resumed>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mismatch = |reason: String| Error::CheckpointMismatch {
        path: path.clone(),
        reason,
    };
    let mut lines = text.splitn(5, '\n');
    let magic = lines.next().unwrap_or_default();
    if magic != "# zeta-forge checkpoint" {
        return Err(mismatch("not a checkpoint file".into()));
    }
    let header = |line: Option<&str>, key: &str| -> Result<String> {
        line.and_then(|l| l.strip_prefix(&format!("# {key}: ")))
            .map(str::to_string)
            .ok_or_else(|| mismatch(format!("missing `{key}` header")))
    };
    let found = header(lines.next(), "fingerprint")?;
    let stage = header(lines.next(), "stage")?;
    let hash = header(lines.next(), "sha256")?;
    let body = lines.next().unwrap_or_default();
    if sha256_hex(body.as_bytes()) != hash {
        return Err(mismatch("content hash does not match its header".into()));
    }
    if found != fingerprint {
        return Err(mismatch(
            "written for a different weight, configuration or lower tables".into(),
        ));
    }
    let stage = match stage.split_once(' ') {
        Some(("stuffle", d)) => Stage::Stuffle(d.parse().map_err(|_| mismatch("bad stage".into()))?),
        Some(("shuffle", n)) => Stage::Shuffle(n.parse().map_err(|_| mismatch("bad stage".into()))?),
        _ if stage == "start" => Stage::Start,
        _ => return Err(mismatch(format!("unknown stage `{stage}`"))),
    };
    let mut resumed = Resumed {
        stage,
        stuffle: BTreeMap::new(),
        deferred: Vec::new(),
        brackets: BTreeMap::new(),
    };
    let name = path.display().to_string();
    for (i, line) in body.lines().enumerate() {
        let err = |e: Error| Error::parse(&name, i + 5, e.to_string());
        let (tag, rest) = line.split_at(2.min(line.len()));
        match tag {
            "D " => resumed.deferred.push(Expr::parse_checkpoint_text(rest).map_err(err)?),
            "S " | "B " => {
                let (w, e) = rest
                    .split_once(" = ")
                    .ok_or_else(|| Error::parse(&name, i + 5, "expected `word = value`"))?;
                let w: IndexWord = w.parse().map_err(err)?;
                let e = Expr::parse_checkpoint_text(e).map_err(err)?;
                if tag == "S " {
                    resumed.stuffle.insert(w, e);
                } else {
                    resumed.brackets.insert(w, e);
                }
            }
            _ => return Err(Error::parse(&name, i + 5, "unknown line tag")),
        }
    }
    Ok(Some(resumed))
}

fn fingerprint(weight: u32, config: &SolverConfig, lower: &TableSet) -> String {
    let mut s = format!(
        "weight={weight};kinds={};cap={:?};",
        config.kinds, config.depth_cap
    );
    for w in lower.weights().filter(|&w| w < weight) {
        let t = lower.get(w).expect("weight listed");
        s.push_str(&format!("{w}:{};", t.content_hash()));
    }
    sha256_hex(s.as_bytes())
}

/// Solves weight `weight` given fully reduced tables for every lower weight.
pub fn solve_weight(weight: u32, lower: &TableSet, config: &SolverConfig) -> Result<SolveOutcome> {
    config.validate()?;
    if weight < 2 {
        return Err(Error::Config(format!("weight must be at least 2, got {weight}")));
    }
    if weight == 2 {
        let table = SubstitutionTable::seed();
        let mut tables = lower.clone();
        tables.insert(table.clone());
        let report = BasisReport::from_tables(2, &tables)?;
        return Ok(SolveOutcome {
            table,
            report,
            stats: SolveStats::default(),
        });
    }
    for w in 2..weight {
        match lower.get(w) {
            Some(t) if t.phase == Phase::FullyReduced => {}
            _ => return Err(Error::MissingTable(w)),
        }
    }

    let candidates = CandidateSet::for_weight(weight);
    let cap = config.depth_cap;
    let in_cap = |w: &IndexWord| cap.is_none_or(|c| w.depth() <= c);
    let words: Vec<IndexWord> = admissible_words(weight).into_iter().filter(|w| in_cap(w)).collect();
    let max_depth = words.iter().map(IndexWord::depth).max().unwrap_or(1);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {} workers: {e}", config.jobs)))?;

    let mut ckpt = Checkpointer {
        config,
        fingerprint: fingerprint(weight, config, lower),
        written: 0,
    };
    let resumed = match &config.checkpoint_path {
        Some(p) => load_checkpoint(p, &ckpt.fingerprint)?,
        None => None,
    };
    let (stage, mut stuffle_table, mut deferred, saved_brackets) = match resumed {
        Some(r) => (r.stage, r.stuffle, r.deferred, r.brackets),
        None => (Stage::Start, BTreeMap::new(), Vec::new(), BTreeMap::new()),
    };
    let mut stats = SolveStats::default();

    // Stuffle phase, depth ascending: merge terms of a product have lower depth.
    let stuffle_on = config.kinds.contains(RelationKind::Stuffle);
    let done_depth = match stage {
        Stage::Start => 0,
        Stage::Stuffle(d) => d,
        Stage::Shuffle(_) => usize::MAX,
    };
    if stuffle_on {
        for depth in 2..=max_depth {
            if depth <= done_depth {
                continue;
            }
            let families: Vec<_> = family_partition(weight, depth).into_iter().collect();
            stats.families += families.len();
            let outcomes = pool.install(|| {
                families
                    .par_iter()
                    .map(|(key, members)| solve_family(key, members, &stuffle_table, lower, &candidates))
                    .collect::<Vec<_>>()
            });
            for outcome in outcomes {
                let outcome = outcome?;
                stats.stuffle_relations += outcome.relations;
                deferred.extend(outcome.deferred);
                stuffle_table.extend(outcome.entries);
            }
            ckpt.save(&Stage::Stuffle(depth), &stuffle_table, &deferred, None)?;
        }
    }
    stats.stuffle_entries = stuffle_table.len();
    stats.deferred = deferred.len();

    // Elimination over the words the stuffle phase left unresolved.
    let unknowns: BTreeSet<IndexWord> = words.iter().filter(|w| !stuffle_table.contains_key(w)).cloned().collect();
    let specs: Vec<RelationSpec> = gen_relations(weight, &config.kinds, cap)
        .into_iter()
        .filter(|s| !(stuffle_on && matches!(s, RelationSpec::Product(crate::algebra::Product::Stuffle, ..))))
        .collect();
    let mut master = MasterExpression::new(config.jobs)?;
    let consumed_before = match stage {
        Stage::Shuffle(n) => {
            master.load(saved_brackets);
            n
        }
        _ => 0,
    };
    let eligible = |w: &IndexWord| unknowns.contains(w).then(|| ElimKey::new(w, &candidates));
    let total = deferred.len() + specs.len();
    let mut consumed = consumed_before;
    let mut since_checkpoint = 0usize;
    const CHUNK: usize = 256;
    while consumed < total {
        let end = (consumed + CHUNK).min(total);
        let batch: Vec<Result<Expr>> = pool.install(|| {
            (consumed..end)
                .into_par_iter()
                .map(|i| {
                    if i < deferred.len() {
                        Ok(deferred[i].clone())
                    } else {
                        materialize(&specs[i - deferred.len()], lower, &stuffle_table)
                    }
                })
                .collect()
        });
        for relation in batch {
            let relation = relation?;
            stats.elimination_relations += 1;
            match master.absorb(&relation, eligible)? {
                Absorbed::Pivot(_) => {
                    stats.pivots += 1;
                    since_checkpoint += 1;
                }
                Absorbed::Redundant => stats.redundant += 1,
                Absorbed::Deferred(rest) => {
                    // every remaining word is an unknown, so this cannot happen
                    return Err(Error::Inconsistent {
                        context: "relation over non-eliminable words".into(),
                        residue: rest.to_checkpoint_text(),
                    });
                }
            }
            consumed += 1;
            if since_checkpoint >= config.checkpoint_every {
                since_checkpoint = 0;
                let brackets = master.brackets();
                ckpt.save(&Stage::Shuffle(consumed), &stuffle_table, &deferred, Some(&brackets))?;
            }
        }
    }
    stats.max_master_terms = master.max_terms();

    let brackets = master.into_brackets();
    let mut generators: Vec<IndexWord> = unknowns.iter().filter(|w| !brackets.contains_key(w)).cloned().collect();
    generators.sort_by(|a, b| a.depth().cmp(&b.depth()).then_with(|| b.cmp(a)));
    let generator_set: BTreeSet<&IndexWord> = generators.iter().collect();

    let resolve = |e: &Expr| -> Result<Expr> {
        let mut out = Expr::from_monos(e.monos.clone());
        for (w, c) in e.words.iter() {
            if generator_set.contains(w) {
                out.monos.add_term(BasisMonomial::generator(w.clone()), c.clone());
            } else if let Some(v) = brackets.get(w) {
                for (g, gc) in v.words.iter() {
                    out.monos.add_term(BasisMonomial::generator(g.clone()), gc * c);
                }
                out.monos.add_scaled(&v.monos, c);
            } else {
                return Err(Error::Unresolved(w.clone()));
            }
        }
        Ok(out)
    };
    let pending: Vec<(&IndexWord, &Expr)> = stuffle_table.iter().chain(brackets.iter()).collect();
    let resolved: Vec<Result<(IndexWord, Expr)>> = pool.install(|| {
        pending
            .par_iter()
            .map(|(w, e)| resolve(e).map(|v| ((*w).clone(), v)))
            .collect()
    });
    let mut entries = BTreeMap::new();
    for r in resolved {
        let (w, v) = r?;
        entries.insert(w, v);
    }
    stats.table_terms = entries.values().map(Expr::term_count).sum();

    let table = SubstitutionTable {
        weight,
        phase: match cap {
            Some(c) if c < max_depth_of_weight(weight) => Phase::DepthCapped(c),
            _ => Phase::FullyReduced,
        },
        generators,
        entries,
    };
    table.validate()?;
    if table.phase == Phase::FullyReduced {
        let covered = table.entries.len() + table.generators.len();
        debug_assert_eq!(covered, 1usize << (weight - 2));
    }
    if let Some(p) = &config.checkpoint_path {
        match fs::remove_file(p) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::io(p, e)),
        }
    }
    let mut tables = lower.clone();
    tables.insert(table.clone());
    let report = BasisReport::from_tables(weight, &tables)?;
    Ok(SolveOutcome { table, report, stats })
}

fn max_depth_of_weight(weight: u32) -> usize {
    weight as usize - 1
}

/// Builds a relation, moves its product onto basis monomials, and applies
/// the stuffle-phase table.
fn materialize(spec: &RelationSpec, lower: &TableSet, stuffle_table: &BTreeMap<IndexWord, Expr>) -> Result<Expr> {
    let rel = spec.build();
    let monos = if rel.product.is_empty() {
        LinComb::new()
    } else {
        lower.product_value(&rel.product)?.negated()
    };
    let expr = Expr { words: rel.combo, monos };
    Ok(expr.substitute_all(|w| stuffle_table.get(w)))
}

/// Solves every weight from 3 through `max_weight`, starting from the seed.
pub fn solve_through(max_weight: u32, config: &SolverConfig) -> Result<(TableSet, Vec<SolveOutcome>)> {
    let mut tables = TableSet::seeded();
    let mut outcomes = Vec::new();
    for weight in 3..=max_weight {
        let outcome = solve_weight(weight, &tables, config)?;
        tables.insert(outcome.table.clone());
        outcomes.push(outcome);
    }
    Ok((tables, outcomes))
}
