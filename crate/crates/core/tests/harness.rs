use std::fs;

use prune_core::generate::{random_antichain, random_front_2d, rng};
use prune_core::harness::csvio::read_points;
use prune_core::harness::{
    fronts, ingest_csv, instance_to_csv, run_experiment, Dataset, ExperimentConfig, ReadOptions, Strictness,
};
use prune_core::{Instance, Measure};

fn config(instances: Vec<Instance>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(vec![Dataset {
        name: "mixed".into(),
        instances,
    }]);
    cfg.k_percents = vec![10.0, 25.0, 50.0];
    cfg.seed = 3;
    cfg
}

#[test]
fn reports_are_byte_identical() {
    let make = || {
        let mut g = rng(12);
        vec![random_front_2d(&mut g, 30, 90), random_antichain(&mut g, 14, 3, 10)]
    };
    let a = run_experiment(&config(make())).unwrap();
    let b = run_experiment(&config(make())).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    assert_eq!(a.summary_csv(), b.summary_csv());
    assert!(a.invariant_violations().is_empty(), "{:?}", a.invariant_violations());
}

#[test]
fn written_report_and_plots_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let mut g = rng(4);
    let mut cfg = config(vec![random_front_2d(&mut g, 20, 60), random_antichain(&mut g, 10, 3, 8)]);
    cfg.output_dir = Some(dir.path().to_path_buf());
    let report = run_experiment(&cfg).unwrap();
    for file in ["report.json", "summary.csv", "cells.csv"] {
        assert!(dir.path().join(file).exists(), "{file}");
    }
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), report.cells.len());
    for cell in json["cells"].as_array().unwrap() {
        for key in ["dataset", "instance", "method", "k_pct", "k_abs", "raw", "normalized"] {
            assert!(!cell[key].is_null(), "{key}");
        }
        for key in ["coverage", "dcoverage", "hypervolume", "avg_sum"] {
            assert!(cell["raw"][key].is_number(), "{key}");
        }
    }
    for plot in &report.plots {
        let path = dir.path().join("plots").join(format!("{}__{}.csv", plot.dataset, plot.instance.name()));
        let text = fs::read_to_string(path).unwrap();
        let d = plot.instance.dim();
        // the coordinate columns read back as the instance itself
        let coords: String = text
            .lines()
            .map(|l| l.split(',').take(d).collect::<Vec<_>>().join(",") + "\n")
            .collect();
        assert_eq!(read_points(coords.as_bytes()).unwrap(), plot.instance.alternatives());
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        for (col, (label, members)) in plot.selections.iter().enumerate() {
            assert_eq!(header[d + col], label);
            let flagged: Vec<usize> = text
                .lines()
                .skip(1)
                .enumerate()
                .filter(|(_, l)| l.split(',').nth(d + col) == Some("1"))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(&flagged, members);
        }
    }
}

#[test]
fn csv_round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let inst = random_antichain(&mut rng(9), 12, 3, 20);
    let path = dir.path().join("front.csv");
    fs::write(&path, instance_to_csv(&inst)).unwrap();
    let back = ingest_csv(&path, ReadOptions::default()).unwrap();
    assert_eq!(back.name(), "front");
    assert_eq!(back.alternatives(), inst.alternatives());
}

#[test]
fn dominated_rows_in_strict_and_lenient_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(&path, "o1,o2,o3\n1,0,0\n0,1,0\n0,0,1\n0,0,0.5\n").unwrap();
    assert!(ingest_csv(&path, ReadOptions::default()).is_err());
    let lenient = ReadOptions {
        strictness: Strictness::Lenient,
        ..Default::default()
    };
    assert_eq!(ingest_csv(&path, lenient).unwrap().n(), 3);
}

#[test]
fn bundled_fronts_through_the_harness() {
    let datasets = fronts::bundled()
        .unwrap()
        .into_iter()
        .map(|(name, inst)| Dataset {
            name,
            instances: vec![inst],
        })
        .collect();
    let mut cfg = ExperimentConfig::new(datasets);
    cfg.methods = vec![Measure::Coverage, Measure::DirectedCoverage];
    let report = run_experiment(&cfg).unwrap();
    assert!(report.missing.is_empty());
    assert_eq!(report.cells.len(), 3 * 3 * 2);
    assert!(report.invariant_violations().is_empty(), "{:?}", report.invariant_violations());
}
