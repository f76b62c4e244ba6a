//! Runs the Cartesian product of a [`BenchSpec`] and writes CSV.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use streamcut::{
    generate_cl, generate_hp, load_edge_list, make_stream, partition_stream_with, ClParams, Graph,
    HpParams, LoadOptions, ObjectiveConfig, RunResult, Summary,
};

use crate::spec::{BenchSpec, GraphSource};

/// One cell of the run matrix, ordered as it appears in the output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunKey {
    pub graph: usize,
    pub k: usize,
    pub gamma: usize,
    pub order: usize,
    pub heuristic: usize,
    pub seed: usize,
}

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub key: RunKey,
    pub graph_id: String,
    pub outcome: Result<RunResult, String>,
}

/// Graph instances: generated graphs depend on the planted `k` (when it
/// follows the run) and on the seed; files are loaded once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct InstanceKey {
    graph: usize,
    k: usize,
    seed: u64,
}

fn instance_key(spec: &BenchSpec, graph: usize, k: usize, seed: u64) -> InstanceKey {
    match &spec.graphs[graph] {
        GraphSource::File { .. } => InstanceKey { graph, k: 0, seed: 0 },
        GraphSource::HiddenPartition { k: Some(_), .. } | GraphSource::ChungLu { .. } => {
            InstanceKey { graph, k: 0, seed }
        }
        GraphSource::HiddenPartition { k: None, .. } => InstanceKey { graph, k, seed },
    }
}

pub fn build_graph(source: &GraphSource, run_k: usize, seed: u64) -> streamcut::Result<Graph> {
    Ok(match source {
        GraphSource::HiddenPartition { n, k, p, q } => {
            generate_hp(&HpParams { n: *n, k: k.unwrap_or(run_k), p: *p, q: *q, seed })?.graph
        }
        GraphSource::ChungLu { n, slope, avg_degree, sampling } => {
            let params = ClParams {
                n: *n,
                slope: *slope,
                avg_degree: *avg_degree,
                seed,
                sampling: *sampling,
            };
            generate_cl(&params)?.graph
        }
        GraphSource::File { path, lcc } => load_edge_list(path, LoadOptions { lcc: *lcc })?,
    })
}

/// Executes every run. Each graph instance is built once and all runs that
/// share it execute on the same worker. Results come back in matrix order.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<RunRecord>, String> {
    spec.validate()?;
    let mut instances: BTreeMap<InstanceKey, Vec<RunKey>> = BTreeMap::new();
    for graph in 0..spec.graphs.len() {
        for (ki, &k) in spec.ks.iter().enumerate() {
            for (si, &seed) in spec.seeds.iter().enumerate() {
                let runs = instances.entry(instance_key(spec, graph, k, seed)).or_default();
                for gamma in 0..spec.gammas.len() {
                    for order in 0..spec.orders.len() {
                        for heuristic in 0..spec.heuristics.len() {
                            runs.push(RunKey { graph, k: ki, gamma, order, heuristic, seed: si });
                        }
                    }
                }
            }
        }
    }
    let work: Vec<(InstanceKey, Vec<RunKey>)> = instances.into_iter().collect();
    let execute = || -> Vec<RunRecord> {
        work.par_iter()
            .flat_map_iter(|(instance, runs)| {
                let seed = spec.seeds[runs[0].seed];
                let run_k = spec.ks[runs[0].k];
                let graph = build_graph(&spec.graphs[instance.graph], run_k, seed);
                runs.iter().map(move |key| execute_run(spec, key, graph.as_ref())).collect::<Vec<_>>()
            })
            .collect()
    };
    let mut records = match spec.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?
            .install(execute),
        None => execute(),
    };
    records.sort_by_key(|r| {
        let k = &r.key;
        (k.graph, k.k, k.gamma, k.order, k.heuristic, k.seed)
    });
    Ok(records)
}

fn execute_run(spec: &BenchSpec, key: &RunKey, graph: Result<&Graph, &streamcut::Error>) -> RunRecord {
    let k = spec.ks[key.k];
    let seed = spec.seeds[key.seed];
    let order = spec.orders[key.order];
    let heuristic = spec.heuristics[key.heuristic];
    let graph_id = spec.graphs[key.graph].id(k);
    let outcome = graph.map_err(|e| e.to_string()).and_then(|g| {
        let config = ObjectiveConfig {
            gamma: spec.gammas[key.gamma],
            alpha: spec.alpha,
            nu: spec.nu,
            marginal_mode: spec.marginal_mode,
            ..ObjectiveConfig::default()
        };
        let plan = make_stream(g, order, seed).map_err(|e| e.to_string())?;
        let out = partition_stream_with(g, &plan, k, heuristic, &config, seed, spec.tie_policy)
            .map_err(|e| e.to_string())?;
        let mut result = RunResult::from_outcome(graph_id.clone(), g, order, heuristic, seed, &out);
        if !spec.timing {
            result.runtime_ms = 0.0;
        }
        Ok(result)
    });
    RunRecord { key: key.clone(), graph_id, outcome }
}

/// CSV header: the run schema plus a trailing `error` column.
pub fn header() -> Vec<&'static str> {
    let mut h = RunResult::CSV_HEADER.to_vec();
    h.push("error");
    h
}

/// Writes one row per run, then `mean` and `std` rows (in the `seed`
/// column) for every group of runs that differ only by seed.
pub fn write_csv<W: Write>(spec: &BenchSpec, records: &[RunRecord], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header())?;
    for record in records {
        writer.write_record(row(spec, record))?;
    }
    for group in records.chunk_by(|a, b| {
        let (a, b) = (&a.key, &b.key);
        (a.graph, a.k, a.gamma, a.order, a.heuristic) == (b.graph, b.k, b.gamma, b.order, b.heuristic)
    }) {
        let ok: Vec<&RunResult> = group.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
        if ok.is_empty() {
            continue;
        }
        for (label, pick) in [("mean", 0), ("std", 1)] {
            let stat = |f: fn(&RunResult) -> f64| {
                let s = Summary::of(ok.iter().map(|r| f(r)));
                if pick == 0 { s.mean } else { s.std }
            };
            let mut agg = ok[0].clone();
            agg.lambda = stat(|r| r.lambda);
            agg.rho = stat(|r| r.rho);
            agg.f_value = stat(|r| r.f_value);
            agg.g_value = stat(|r| r.g_value);
            agg.runtime_ms = stat(|r| r.runtime_ms);
            let violations = stat(|r| r.threshold_violations as f64);
            // graphs redrawn per seed differ in n and m; report the first
            let mut fields = agg.csv_record();
            fields[9] = label.to_string();
            fields[15] = violations.to_string();
            fields.push(String::new());
            writer.write_record(fields)?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn row(spec: &BenchSpec, record: &RunRecord) -> Vec<String> {
    match &record.outcome {
        Ok(result) => {
            let mut fields = result.csv_record();
            fields.push(String::new());
            fields
        }
        Err(message) => {
            let key = &record.key;
            let mut fields = vec![String::new(); RunResult::CSV_HEADER.len()];
            fields[0] = record.graph_id.clone();
            fields[3] = spec.ks[key.k].to_string();
            fields[4] = spec.gammas[key.gamma].to_string();
            fields[6] = spec.nu.to_string();
            fields[7] = spec.orders[key.order].to_string();
            fields[8] = spec.heuristics[key.heuristic].to_string();
            fields[9] = spec.seeds[key.seed].to_string();
            fields.push(message.clone());
            fields
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(text: &str) -> BenchSpec {
        BenchSpec::parse(text).unwrap()
    }

    #[test]
    fn shares_instances_across_runs() {
        let s = spec("graph = hp n=30 p=0.5 q=0.1\nk = 2, 3\nheuristic = fennel, ldg\nseeds = 0..2\n");
        let records = run_bench(&s).unwrap();
        assert_eq!(records.len(), s.run_count());
        // same (k, seed) instance for both heuristics
        let by = |k: usize, h: usize, seed: usize| {
            records
                .iter()
                .find(|r| r.key.k == k && r.key.heuristic == h && r.key.seed == seed)
                .unwrap()
                .outcome
                .as_ref()
                .unwrap()
                .m
        };
        assert_eq!(by(0, 0, 1), by(0, 1, 1));
        assert_eq!(records[0].graph_id, "hp:n=30:k=2:p=0.5:q=0.1");
    }

    #[test]
    fn errors_become_rows() {
        let s = spec("graph = file /nonexistent/edges.txt\ngraph = hp n=20 p=0.5 q=0.1\nk = 2\n");
        let records = run_bench(&s).unwrap();
        assert!(records[0].outcome.is_err());
        assert!(records[1].outcome.is_ok());
        let mut buf = Vec::new();
        write_csv(&s, &records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].contains("/nonexistent/edges.txt"));
        assert!(lines[1].contains("No such file") || lines[1].contains("cannot"));
        // only the successful group gets aggregates
        assert_eq!(lines.len(), 1 + 2 + 2);
    }

    #[test]
    fn aggregates_follow_runs() {
        let s = spec("graph = hp n=40 p=0.6 q=0.1\nk = 2\nseeds = 0..3\ntiming = false\n");
        let records = run_bench(&s).unwrap();
        let mut buf = Vec::new();
        write_csv(&s, &records, &mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 5);
        assert_eq!(&rows[3][9], "mean");
        assert_eq!(&rows[4][9], "std");
        let lambdas: Vec<f64> = rows[..3].iter().map(|r| r[10].parse().unwrap()).collect();
        let mean: f64 = rows[3][10].parse().unwrap();
        assert!((mean - lambdas.iter().sum::<f64>() / 3.0).abs() < 1e-12);
        assert!(rows[..3].iter().all(|r| &r[14] == "0.000"));
    }

    #[test]
    fn output_is_independent_of_thread_count() {
        let text = "graph = hp n=60 p=0.5 q=0.1\ngraph = cl n=80 slope=2.5 avg_degree=4\n\
                    k = 2, 4\nheuristic = fennel, hash, nn, lt\norder = random, dfs\nseeds = 0..3\ntiming = false\n";
        let render = |threads: &str| {
            let s = spec(&format!("{text}threads = {threads}\n"));
            let mut buf = Vec::new();
            write_csv(&s, &run_bench(&s).unwrap(), &mut buf).unwrap();
            buf
        };
        let one = render("1");
        assert_eq!(one, render("4"));
        assert_eq!(one, render("4"));
    }
}
