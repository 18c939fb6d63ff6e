use std::fs;

use zeta_forge::solver::{solve_through, solve_weight, Phase, SolverConfig, TableSet, TableStore};
use zeta_forge::verify::{minimal_depth_stats, recheck_relations, Sampling};
use zeta_forge::{BasisReport, Error, IndexWord, RelationKinds};

fn w(v: &[u32]) -> IndexWord {
    IndexWord::new(v.to_vec()).unwrap()
}

fn tables_through(weight: u32) -> TableSet {
    solve_through(weight, &SolverConfig::default().with_jobs(2)).unwrap().0
}

#[test]
fn weight_four_table_is_frozen() {
    let tables = tables_through(4);
    let expected = "\
# weight: 4
# phase: fully-reduced
# generators:
Z(2,1,1) = 2/5*Z(2)*Z(2)
Z(2,2) = 3/10*Z(2)*Z(2)
Z(3,1) = 1/10*Z(2)*Z(2)
Z(4) = 2/5*Z(2)*Z(2)
";
    assert_eq!(tables.get(4).unwrap().to_text(), expected);
}

#[test]
fn weight_three_and_five() {
    let tables = tables_through(5);
    assert_eq!(
        tables.get(3).unwrap().to_text(),
        "# weight: 3\n# phase: fully-reduced\n# generators: Z(3)\nZ(2,1) = 1*Z(3)\n"
    );
    let t5 = tables.get(5).unwrap();
    assert_eq!(t5.generators, vec![w(&[5])]);
    // Z(2,3) = 9/2 Z(5) - 2 Z(3) Z(2), a classical evaluation
    assert_eq!(
        t5.value(&w(&[2, 3])).unwrap().to_string(),
        "9/2*Z(5) + -2*Z(3)*Z(2)"
    );
}

#[test]
fn generators_through_weight_ten() {
    let tables = tables_through(10);
    let expected: [(u32, Vec<IndexWord>); 9] = [
        (2, vec![w(&[2])]),
        (3, vec![w(&[3])]),
        (4, vec![]),
        (5, vec![w(&[5])]),
        (6, vec![]),
        (7, vec![w(&[7])]),
        (8, vec![w(&[5, 3])]),
        (9, vec![w(&[9])]),
        (10, vec![w(&[7, 3])]),
    ];
    for (weight, gens) in expected {
        assert_eq!(tables.get(weight).unwrap().generators, gens, "weight {weight}");
    }
    let report = BasisReport::from_tables(8, &tables).unwrap();
    assert_eq!(report.monomial_count, 4);
    let stats = minimal_depth_stats(&report, &tables).unwrap();
    assert_eq!((stats.depth_sum, stats.is_minimal()), (2, Some(true)));
}

#[test]
fn missing_lower_table_is_reported() {
    let err = solve_weight(5, &TableSet::seeded(), &SolverConfig::default()).unwrap_err();
    assert!(matches!(err, Error::MissingTable(3)));
}

#[test]
fn bad_config_is_rejected() {
    let tables = tables_through(3);
    let zero_jobs = SolverConfig::default().with_jobs(0);
    assert!(matches!(solve_weight(4, &tables, &zero_jobs), Err(Error::Config(_))));
    let none = SolverConfig::default().with_kinds(RelationKinds::new([]));
    assert!(matches!(solve_weight(4, &tables, &none), Err(Error::Config(_))));
}

#[test]
fn duality_does_not_change_the_basis() {
    let plain = tables_through(9);
    let config = SolverConfig::default().with_kinds(RelationKinds::all());
    let (dual, _) = solve_through(9, &config).unwrap();
    for weight in 2..=9 {
        assert_eq!(plain.get(weight), dual.get(weight), "weight {weight}");
    }
}

#[test]
fn depth_capped_solve() {
    let tables = tables_through(7);
    let config = SolverConfig {
        depth_cap: Some(3),
        ..SolverConfig::default()
    };
    let out = solve_weight(8, &tables, &config).unwrap();
    assert_eq!(out.table.phase, Phase::DepthCapped(3));
    assert!(out.table.entries.keys().all(|x| x.depth() <= 3));
    assert_eq!(out.table.generators, vec![w(&[5, 3])]);
}

#[test]
fn checkpoint_resume_matches_fresh_run() {
    let tables = tables_through(8);
    let fresh = solve_weight(9, &tables, &SolverConfig::default()).unwrap();

    // depths 2..=8 give seven stuffle-stage checkpoints, then shuffle-stage ones
    for (halt_after, stage) in [(3, "# stage: stuffle 4\n"), (10, "# stage: shuffle ")] {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = dir.path().join("weight-09.ckpt");
        let halting = SolverConfig {
            checkpoint_every: 5,
            checkpoint_path: Some(ckpt.clone()),
            halt_after_checkpoints: Some(halt_after),
            ..SolverConfig::default()
        };
        assert!(matches!(solve_weight(9, &tables, &halting), Err(Error::Halted)));
        let text = fs::read_to_string(&ckpt).unwrap();
        assert!(text.contains(stage), "{}", text.lines().take(3).collect::<Vec<_>>().join("\n"));

        let resume = SolverConfig {
            halt_after_checkpoints: None,
            ..halting
        };
        let resumed = solve_weight(9, &tables, &resume).unwrap();
        assert_eq!(resumed.table.to_text(), fresh.table.to_text());
        assert!(!ckpt.exists(), "checkpoint removed after completion");
    }
}

#[test]
fn tampered_or_foreign_checkpoint_is_refused() {
    let tables = tables_through(7);
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("weight-08.ckpt");
    let halting = SolverConfig {
        checkpoint_every: 3,
        checkpoint_path: Some(ckpt.clone()),
        halt_after_checkpoints: Some(2),
        ..SolverConfig::default()
    };
    assert!(matches!(solve_weight(8, &tables, &halting), Err(Error::Halted)));
    let good = fs::read_to_string(&ckpt).unwrap();

    // different relation kinds: fingerprint differs
    let other = SolverConfig {
        kinds: RelationKinds::all(),
        halt_after_checkpoints: None,
        ..halting.clone()
    };
    assert!(matches!(solve_weight(8, &tables, &other), Err(Error::CheckpointMismatch { .. })));

    // flipped body byte: hash differs
    let tampered = good.replacen(" = ", " =  ", 1);
    fs::write(&ckpt, tampered).unwrap();
    let resume = SolverConfig {
        halt_after_checkpoints: None,
        ..halting
    };
    assert!(matches!(solve_weight(8, &tables, &resume), Err(Error::CheckpointMismatch { .. })));
}

#[test]
fn store_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let store = TableStore::open(dir.path()).unwrap();
    let mut solved = Vec::new();
    let tables = store
        .ensure(6, &SolverConfig::default(), |o| solved.push(o.table.weight))
        .unwrap();
    assert_eq!(solved, vec![2, 3, 4, 5, 6]);
    assert!(dir.path().join("weight-06.tbl").exists());
    let manifest = fs::read_to_string(store.manifest_path()).unwrap();
    assert!(manifest.starts_with(&format!("build = {}\n", zeta_forge::BUILD_ID)));

    // second run loads instead of solving
    let mut again = Vec::new();
    let reloaded = store.ensure(6, &SolverConfig::default(), |o| again.push(o.table.weight)).unwrap();
    assert!(again.is_empty());
    assert_eq!(reloaded.get(6), tables.get(6));

    let path = store.table_path(5, None);
    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, text.replacen("9/2", "7/2", 1)).unwrap();
    assert!(matches!(store.load(5, None), Err(Error::HashMismatch { .. })));
    assert!(matches!(store.load(9, None), Err(Error::MissingTable(9))));
}

#[test]
fn recheck_catches_a_flipped_coefficient() {
    let mut tables = tables_through(6);
    assert!(recheck_relations(4, &tables, Sampling::All).unwrap().passed());
    assert!(recheck_relations(3, &tables, Sampling::All).unwrap().passed());

    let t4 = tables.get_mut(4).unwrap();
    let entry = t4.entries.get_mut(&w(&[3, 1])).unwrap();
    entry.monos.scale(&zeta_forge::Rational::from_integer((-1).into()));
    let report = recheck_relations(4, &tables, Sampling::All).unwrap();
    assert!(!report.passed());
    assert!(report.survivors.iter().any(|s| s.kind == "stuffle-product" || s.kind == "shuffle-product"));
    // weight 6 products route through the damaged weight-4 table
    assert!(!recheck_relations(6, &tables, Sampling::All).unwrap().passed());
}

#[test]
fn sampled_recheck_is_reproducible() {
    let tables = tables_through(9);
    let s = Sampling::Sample { size: 100, seed: 3 };
    let a = recheck_relations(9, &tables, s).unwrap();
    let b = recheck_relations(9, &tables, s).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.checked, 100);
    assert!(a.passed());
}
