use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_search::LocalSearchKind;

pub const TRACE_HEADER: [&str; 5] = ["iteration", "best_fitness", "selected_ls", "evaluations", "elapsed_ms"];

/// One row of a run's convergence history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub best_fitness: f64,
    pub selected_ls: Option<LocalSearchKind>,
    /// Cumulative fitness evaluations.
    pub evaluations: u64,
    pub elapsed_ms: u64,
    /// Credit given to the selected local search (hybrid only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reward: Option<f64>,
    /// Arm qualities after the update (hybrid only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualities: Option<Vec<f64>>,
}

impl TraceRecord {
    pub fn new(iteration: u64, best_fitness: f64, evaluations: u64, elapsed_ms: u64) -> Self {
        TraceRecord {
            iteration,
            best_fitness,
            selected_ls: None,
            evaluations,
            elapsed_ms,
            reward: None,
            qualities: None,
        }
    }
}

/// Writes the tabular trace: one header row, one row per record.
pub fn write_trace_csv<W: Write>(records: &[TraceRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in records {
        w.write_record([
            r.iteration.to_string(),
            r.best_fitness.to_string(),
            r.selected_ls.map(|k| k.tag().to_string()).unwrap_or_default(),
            r.evaluations.to_string(),
            r.elapsed_ms.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader.headers()?.clone();
    if header.iter().ne(TRACE_HEADER) {
        return Err(Error::InconsistentTraces(format!("unexpected trace header {header:?}")));
    }
    let bad = |row: usize, what: &str| Error::InconsistentTraces(format!("row {row}: bad {what}"));
    let mut records = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let selected = match field(2) {
            "" => None,
            tag => Some(LocalSearchKind::from_tag(tag).ok_or_else(|| bad(row, "selected_ls"))?),
        };
        records.push(TraceRecord {
            iteration: field(0).parse().map_err(|_| bad(row, "iteration"))?,
            best_fitness: field(1).parse().map_err(|_| bad(row, "best_fitness"))?,
            selected_ls: selected,
            evaluations: field(3).parse().map_err(|_| bad(row, "evaluations"))?,
            elapsed_ms: field(4).parse().map_err(|_| bad(row, "elapsed_ms"))?,
            reward: None,
            qualities: None,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut rows = vec![TraceRecord::new(0, 0.5, 30, 0), TraceRecord::new(1, 0.8125, 160, 3)];
        rows[1].selected_ls = Some(LocalSearchKind::SimulatedAnnealing);
        let mut buf = Vec::new();
        write_trace_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("iteration,best_fitness,selected_ls,evaluations,elapsed_ms\n"));
        assert!(text.contains("1,0.8125,sa,160,3\n"));
        assert_eq!(read_trace_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn wrong_header_rejected() {
        assert!(read_trace_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}
