//! End-to-end behaviour of the experiment runner.

use tomolab::basis::build_traceless_basis;
use tomolab::chaos::{husimi_entropy, regularize_observable, PhaseSpaceGrid};
use tomolab::experiment::{parse_config, parse_results, run_experiment, ExperimentConfig};
use tomolab::spin::build_angular_momentum;

fn config(kind: &str, extra: &str) -> ExperimentConfig {
    parse_config(&format!(
        "kind = \"{kind}\"\nj = 1.5\nlambdas = [0.5, 7.0]\nsteps = 16\nrealizations = 2\nseed = 31\n{extra}\n\
         [state]\ntype = \"random\"\ncount = 3\n"
    ))
    .unwrap()
}

#[test]
fn tables_do_not_depend_on_worker_count() {
    for kind in [
        "fidelity-vs-time",
        "fidelity-vs-chaos",
        "fisher-vs-time",
        "alignment-vs-time",
        "husimi-vs-time",
        "ordered-basis",
    ] {
        let cfg = config(kind, "");
        let one = run_experiment(&cfg, 1).unwrap();
        let many = run_experiment(&cfg, 4).unwrap();
        assert_eq!(one.to_csv(), many.to_csv(), "{kind}");
        let bits = |t: &tomolab::experiment::ResultTable| -> Vec<u64> {
            t.rows.iter().flatten().map(|x| x.to_bits()).collect()
        };
        assert_eq!(bits(&one), bits(&many), "{kind}");
    }
}

#[test]
fn fisher_with_no_kicks_is_the_regularized_prior() {
    let cfg = parse_config("kind = \"fisher-vs-time\"\nj = 1\nlambdas = [3.0]\nsteps = 0\nepsilon = 1e-3\n").unwrap();
    let table = run_experiment(&cfg, 1).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.column("kick").unwrap(), vec![0.0]);
    let j = table.column("fisher").unwrap()[0];
    assert!((j - 1e-3 / 8.0).abs() < 1e-15, "{j}");
}

#[test]
fn longer_runs_extend_shorter_ones() {
    // the estimate at kick k sees only the first k record entries
    let short = run_experiment(&config("fidelity-vs-time", ""), 1).unwrap();
    let mut cfg = config("fidelity-vs-time", "");
    cfg.steps = 24;
    let long = run_experiment(&cfg, 1).unwrap();
    let kicks = long.column("kick").unwrap();
    let prefix: Vec<&Vec<f64>> = long.rows.iter().zip(&kicks).filter(|(_, &k)| k <= 16.0).map(|(r, _)| r).collect();
    assert_eq!(prefix.len(), short.rows.len());
    for (a, b) in prefix.iter().zip(&short.rows) {
        assert_eq!(*a, b);
    }
}

#[test]
fn fidelity_table_shape_and_ranges() {
    let table = run_experiment(&config("fidelity-vs-time", ""), 1).unwrap();
    assert_eq!(
        table.column_names(),
        ["kick", "lambda", "fidelity_mean", "fidelity_stderr", "hs_distance_mean"]
    );
    assert_eq!(table.rows.len(), 2 * 16);
    for row in &table.rows {
        assert!((0.0..=1.0 + 1e-12).contains(&row[2]), "{row:?}");
        assert!(row[3] >= 0.0 && row[4] >= 0.0);
    }
    let chaos = run_experiment(&config("fidelity-vs-chaos", ""), 1).unwrap();
    assert_eq!(chaos.column_names(), ["lambda", "fidelity_mean", "fidelity_stderr", "hs_distance_mean"]);
    // by default the chaos table estimates once, from the full record
    let single = run_experiment(&config("fidelity-vs-time", "eval_kicks = [16]"), 1).unwrap();
    let last: Vec<Vec<f64>> = single.rows.iter().map(|r| r[1..].to_vec()).collect();
    assert_eq!(chaos.rows, last);
}

#[test]
fn seeds_control_the_noise() {
    let a = run_experiment(&config("fidelity-vs-time", ""), 1).unwrap();
    let b = run_experiment(&config("fidelity-vs-time", ""), 1).unwrap();
    assert_eq!(a.rows, b.rows);
    let mut cfg = config("fidelity-vs-time", "");
    cfg.seed = 32;
    let c = run_experiment(&cfg, 1).unwrap();
    assert_ne!(a.rows, c.rows);
}

#[test]
fn eval_kicks_select_rows() {
    let table = run_experiment(&config("alignment-vs-time", "eval_kicks = [0, 5, 16]"), 1).unwrap();
    assert_eq!(table.column("kick").unwrap(), vec![0.0, 5.0, 16.0, 0.0, 5.0, 16.0]);
    let full = run_experiment(&config("alignment-vs-time", ""), 1).unwrap();
    // alignment has no solver state, so selected rows equal the full ones
    for row in &table.rows {
        assert!(full.rows.contains(row), "{row:?}");
    }
    assert_eq!(table.column("alignment_mean").unwrap()[0], 0.0);
}

#[test]
fn husimi_first_row_is_the_initial_observable() {
    let table = run_experiment(&config("husimi-vs-time", "eval_kicks = [0]"), 1).unwrap();
    let am = build_angular_momentum(1.5).unwrap();
    let grid = PhaseSpaceGrid::for_spin(am.spin);
    let expected = husimi_entropy(&regularize_observable(&am.jy).unwrap(), &grid).unwrap();
    assert_eq!(table.column("entropy").unwrap(), vec![expected, expected]);
}

#[test]
fn ordered_basis_rows_cover_every_step() {
    let table = run_experiment(&config("ordered-basis", ""), 1).unwrap();
    let p = build_traceless_basis(4).unwrap().len();
    assert_eq!(table.rows.len(), 3 * (p + 1));
    for row in table.rows.iter().filter(|r| r[1] == p as f64) {
        assert!((row[3] - 1.0).abs() < 1e-6 && (row[5] - 1.0).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn csv_round_trips_through_the_parser() {
    let table = run_experiment(&config("fidelity-vs-time", "eval_kicks = [4, 16]"), 1).unwrap();
    let back = parse_results(&table.to_csv()).unwrap();
    assert_eq!(back.rows, table.rows);
    assert_eq!(back.column_names(), table.column_names());
    assert_eq!(back.provenance.config, table.provenance.config);
    assert_eq!(back.provenance.seed, 31);
}

#[test]
fn invalid_configs_are_rejected_before_work_starts() {
    let mut cfg = config("fidelity-vs-time", "");
    cfg.j = 0.7;
    let err = run_experiment(&cfg, 1).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
