use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ActiveSet;
use crate::steps::AcceptanceCheck;
use crate::{FwError, Vector};

/// Header of the trace CSV format.
pub const CSV_HEADER: [&str; 8] =
    ["t", "f", "primal_gap", "fw_gap", "gamma", "l_est", "n_atoms", "elapsed_ns"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Frank-Wolfe gap fell to the requested threshold.
    GapReached,
    IterationLimit,
    /// The step rule returned `γ = 0` while the gap was still above threshold.
    Stationary,
    /// An observer asked the solver to stop.
    Stopped,
}

/// One iteration: the state at `x_t` and the step taken from it.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub t: usize,
    pub f: f64,
    pub primal_gap: Option<f64>,
    pub fw_gap: f64,
    /// `None` on the final row, where no step was taken.
    pub gamma: Option<f64>,
    pub l_estimate: Option<f64>,
    pub atom_count: Option<usize>,
    pub elapsed_ns: Option<u64>,
    /// `‖x_t − v_t‖²`; kept in memory only.
    pub direction_norm_sq: f64,
    pub acceptance: Option<AcceptanceCheck>,
}

#[derive(Clone, Debug)]
pub struct RunTrace {
    pub rule: String,
    pub rows: Vec<TraceRow>,
    pub final_x: Vector,
    pub termination: Termination,
    pub active_set: Option<ActiveSet>,
    /// Every iterate `x_0, x_1, …` when recording was requested.
    pub iterates: Option<Vec<Vector>>,
}

#[derive(Serialize, Deserialize)]
struct CsvRecord {
    t: usize,
    f: f64,
    primal_gap: Option<f64>,
    fw_gap: f64,
    gamma: Option<f64>,
    l_est: Option<f64>,
    n_atoms: Option<usize>,
    elapsed_ns: Option<u64>,
}

impl RunTrace {
    pub fn final_row(&self) -> &TraceRow {
        self.rows.last().expect("a trace always has at least one row")
    }

    pub fn f_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.f).collect()
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.fw_gap).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FwError> {
        write_rows_csv(&self.rows, out)
    }
}

/// Writes rows with the fixed header; unavailable columns stay empty.
pub fn write_rows_csv<W: Write>(rows: &[TraceRow], out: W) -> Result<(), FwError> {
    let io = |e: csv::Error| FwError::InvalidInput(format!("csv write failed: {e}"));
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        writer
            .serialize(CsvRecord {
                t: row.t,
                f: row.f,
                primal_gap: row.primal_gap,
                fw_gap: row.fw_gap,
                gamma: row.gamma,
                l_est: row.l_estimate,
                n_atoms: row.atom_count,
                elapsed_ns: row.elapsed_ns,
            })
            .map_err(io)?;
    }
    writer.flush().map_err(|e| FwError::InvalidInput(format!("csv write failed: {e}")))
}

/// Reads rows back from the CSV format. Columns that the format does not
/// carry (`‖x − v‖²`, acceptance records) come back empty.
pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<TraceRow>, FwError> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers().map_err(|e| FwError::InvalidInput(format!("trace csv: {e}")))?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(FwError::InvalidInput(format!(
            "trace csv header mismatch: expected `{}`",
            CSV_HEADER.join(",")
        )));
    }
    let mut rows = Vec::new();
    for record in reader.deserialize::<CsvRecord>() {
        let r = record.map_err(|e| FwError::InvalidInput(format!("trace csv: {e}")))?;
        rows.push(TraceRow {
            t: r.t,
            f: r.f,
            primal_gap: r.primal_gap,
            fw_gap: r.fw_gap,
            gamma: r.gamma,
            l_estimate: r.l_est,
            atom_count: r.n_atoms,
            elapsed_ns: r.elapsed_ns,
            direction_norm_sq: f64::NAN,
            acceptance: None,
        });
    }
    if rows.is_empty() {
        return Err(FwError::InvalidInput("trace csv has no rows".into()));
    }
    if rows.iter().enumerate().any(|(i, r)| r.t != i) {
        return Err(FwError::InvalidInput("trace csv rows must count t = 0, 1, 2, ...".into()));
    }
    Ok(rows)
}
