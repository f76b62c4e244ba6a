//! Assignment files: CSV with header `vertex,cluster`, vertices given by
//! their original labels.

use std::io::{Read, Write};

use streamcut::{Graph, ObjectiveConfig, PartitionSnapshot, RunResult};

#[derive(Debug, thiserror::Error)]
pub enum AssignmentError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("vertex {label} is assigned twice")]
    Duplicate { label: u64 },
    #[error("{missing} vertices have no cluster (first: {first})")]
    Missing { missing: usize, first: u64 },
    #[error(transparent)]
    Core(#[from] streamcut::Error),
}

pub fn write_assignment<W: Write>(g: &Graph, assignment: &[u32], out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["vertex", "cluster"])?;
    for (v, &c) in assignment.iter().enumerate() {
        writer.write_record([g.label(v).to_string(), c.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads an assignment for `g` and checks that it covers every vertex with
/// a cluster below `k`.
pub fn read_assignment<R: Read>(g: &Graph, k: usize, input: R) -> Result<Vec<u32>, AssignmentError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut assignment = vec![u32::MAX; g.n()];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        let bad = |message: String| AssignmentError::Row { row, message };
        if record.len() < 2 {
            return Err(bad("expected vertex,cluster".into()));
        }
        let label: u64 = record[0].trim().parse().map_err(|e| bad(format!("vertex: {e}")))?;
        let cluster: u32 = record[1].trim().parse().map_err(|e| bad(format!("cluster: {e}")))?;
        let v = g
            .index_of(label)
            .ok_or_else(|| bad(format!("vertex {label} is not in the graph")))?;
        if cluster as usize >= k {
            return Err(bad(format!("cluster {cluster} out of range for k = {k}")));
        }
        if assignment[v] != u32::MAX {
            return Err(AssignmentError::Duplicate { label });
        }
        assignment[v] = cluster;
    }
    let missing: Vec<usize> = (0..g.n()).filter(|&v| assignment[v] == u32::MAX).collect();
    if let Some(&first) = missing.first() {
        return Err(AssignmentError::Missing { missing: missing.len(), first: g.label(first) });
    }
    Ok(assignment)
}

/// Scores an assignment from scratch.
pub fn eval_assignment<R: Read>(
    g: &Graph,
    graph_id: &str,
    input: R,
    k: usize,
    config: &ObjectiveConfig,
) -> Result<RunResult, AssignmentError> {
    let assignment = read_assignment(g, k, input)?;
    let snapshot = PartitionSnapshot::from_assignment(g, k, &assignment)?;
    let objective = config.resolve(g, k)?;
    Ok(RunResult::from_snapshot(graph_id, g, &snapshot, &objective))
}
