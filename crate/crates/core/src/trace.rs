//! Solver traces, restart bookkeeping and the CSV trace format.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::problem::relative_gap;
use crate::{Error, Result};

/// Which iterate sequence a record belongs to: the two simultaneous streams
/// of a two-stream method, or the only stream of a single-stream method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stream {
    A,
    B,
    Single,
}

impl fmt::Display for Stream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stream::A => "a",
            Stream::B => "b",
            Stream::Single => "single",
        })
    }
}

impl FromStr for Stream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Stream::A),
            "b" => Ok(Stream::B),
            "single" => Ok(Stream::Single),
            other => Err(Error::invalid(format!("unknown stream tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    ToleranceMet,
    BudgetExhausted,
    ZeroSubgradient,
}

/// One evaluated iterate.
///
/// `step` and `grad_norm` describe the step taken *from* this point when the
/// method is a plain subgradient method; they are not part of the CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub outer: usize,
    pub inner: usize,
    pub stream: Stream,
    pub iterate_count: u64,
    pub f: f64,
    pub f_best: f64,
    pub restart: bool,
    pub step: Option<f64>,
    pub grad_norm: Option<f64>,
}

/// A completed outer iteration: `k` inner iterations ran before the ratio
/// test failed on `stream`, moving the restart point from `f_start` to
/// `f_next`.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartEvent {
    pub outer: usize,
    pub k: usize,
    pub stream: Stream,
    pub iterate_count: u64,
    pub f_start: f64,
    pub f_next: f64,
}

/// Oracle-checked stopping: the run ends at the first iterate with
/// `(f − f*)/(f* − f_slb) ≤ ε′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCriterion {
    pub f_star: f64,
    pub eps_prime: f64,
}

impl StopCriterion {
    pub fn new(f_star: f64, eps_prime: f64) -> Self {
        StopCriterion { f_star, eps_prime }
    }

    pub fn is_met(&self, value: f64, f_slb: f64) -> bool {
        relative_gap(value, self.f_star, f_slb) <= self.eps_prime
    }
}

#[derive(Debug, Clone)]
pub struct SolverRun {
    pub algorithm: String,
    pub f_slb: f64,
    pub iterates_computed: u64,
    pub trace: Vec<TraceRecord>,
    pub restarts: Vec<RestartEvent>,
    /// `f(x_{i,0})` for every outer iteration that was started.
    pub outer_starts: Vec<f64>,
    /// `(μ¹ᵢ, μ²ᵢ)` per outer iteration of the smoothing method.
    pub smoothing_params: Vec<(f64, f64)>,
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub termination: Termination,
    /// Iterate count at the first record meeting the stop criterion.
    pub first_success: Option<u64>,
}

impl SolverRun {
    /// Number of completed outer iterations.
    pub fn completed_outer(&self) -> usize {
        self.restarts.len()
    }

    pub fn succeeded(&self) -> bool {
        self.first_success.is_some()
    }

    pub fn records(&self, stream: Stream) -> impl Iterator<Item = &TraceRecord> {
        self.trace.iter().filter(move |r| r.stream == stream)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        write_csv(&self.trace, w)
    }
}

#[derive(Serialize, Deserialize)]
struct CsvRow {
    outer: usize,
    inner: usize,
    stream: String,
    iterate_count: u64,
    f: f64,
    f_best: f64,
    restart: u8,
}

pub const CSV_HEADER: &str = "outer,inner,stream,iterate_count,f,f_best,restart";

pub fn write_csv<W: Write>(trace: &[TraceRecord], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in trace {
        out.serialize(CsvRow {
            outer: r.outer,
            inner: r.inner,
            stream: r.stream.to_string(),
            iterate_count: r.iterate_count,
            f: r.f,
            f_best: r.f_best,
            restart: r.restart as u8,
        })
        .map_err(csv_error)?;
    }
    if trace.is_empty() {
        out.write_record(CSV_HEADER.split(',')).map_err(csv_error)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<TraceRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_error)?.iter().map(String::from).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::invalid(format!("unexpected trace header {:?}", header.join(","))));
    }
    rdr.deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(csv_error)?;
            Ok(TraceRecord {
                outer: row.outer,
                inner: row.inner,
                stream: row.stream.parse()?,
                iterate_count: row.iterate_count,
                f: row.f,
                f_best: row.f_best,
                restart: row.restart != 0,
                step: None,
                grad_norm: None,
            })
        })
        .collect()
}

fn csv_error(e: csv::Error) -> Error {
    Error::invalid(format!("trace csv: {e}"))
}

/// Shared bookkeeping for every solver: iterate counter, best point, trace,
/// and stop detection.
pub(crate) struct Recorder {
    run: SolverRun,
    stop: Option<StopCriterion>,
}

impl Recorder {
    pub(crate) fn new(algorithm: &str, f_slb: f64, x0: &[f64], f0: f64, stop: Option<StopCriterion>) -> Self {
        let mut rec = Recorder {
            run: SolverRun {
                algorithm: algorithm.to_string(),
                f_slb,
                iterates_computed: 0,
                trace: Vec::new(),
                restarts: Vec::new(),
                outer_starts: Vec::new(),
                smoothing_params: Vec::new(),
                best_point: x0.to_vec(),
                best_value: f0,
                termination: Termination::BudgetExhausted,
                first_success: None,
            },
            stop,
        };
        rec.check_success(f0);
        rec
    }

    fn check_success(&mut self, f: f64) {
        if self.run.first_success.is_none() {
            if let Some(s) = self.stop {
                if s.is_met(f, self.run.f_slb) {
                    self.run.first_success = Some(self.run.iterates_computed);
                }
            }
        }
    }

    pub(crate) fn count(&mut self, n: u64) {
        self.run.iterates_computed += n;
    }

    /// Whether `n` more iterates fit in `budget`.
    pub(crate) fn fits(&self, n: u64, budget: u64) -> bool {
        self.run.iterates_computed + n <= budget
    }

    pub(crate) fn done(&self) -> bool {
        self.stop.is_some() && self.run.first_success.is_some()
    }

    /// Records an evaluated iterate and updates the best point.
    pub(crate) fn record(&mut self, outer: usize, inner: usize, stream: Stream, x: &[f64], f: f64) {
        if f < self.run.best_value {
            self.run.best_value = f;
            self.run.best_point = x.to_vec();
        }
        self.check_success(f);
        self.run.trace.push(TraceRecord {
            outer,
            inner,
            stream,
            iterate_count: self.run.iterates_computed,
            f,
            f_best: self.run.best_value,
            restart: false,
            step: None,
            grad_norm: None,
        });
    }

    /// Attaches step information to the most recent record.
    pub(crate) fn annotate_step(&mut self, step: f64, grad_norm: f64) {
        if let Some(r) = self.run.trace.last_mut() {
            r.step = Some(step);
            r.grad_norm = Some(grad_norm);
        }
    }

    pub(crate) fn start_outer(&mut self, f_start: f64) {
        self.run.outer_starts.push(f_start);
    }

    pub(crate) fn smoothing_params(&mut self, mu1: f64, mu2: f64) {
        self.run.smoothing_params.push((mu1, mu2));
    }

    /// Logs a restart triggered by the most recent record on `stream`.
    pub(crate) fn restart(&mut self, outer: usize, k: usize, stream: Stream, f_start: f64, f_next: f64) {
        if let Some(r) = self.run.trace.iter_mut().rev().find(|r| r.stream == stream) {
            r.restart = true;
        }
        self.run.restarts.push(RestartEvent {
            outer,
            k,
            stream,
            iterate_count: self.run.iterates_computed,
            f_start,
            f_next,
        });
    }

    pub(crate) fn finish(mut self, termination: Termination) -> SolverRun {
        self.run.termination = if self.done() {
            Termination::ToleranceMet
        } else {
            termination
        };
        self.run
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_run() -> SolverRun {
        let mut rec = Recorder::new("test", -1.0, &[4.0], 4.0, Some(StopCriterion::new(0.0, 0.5)));
        rec.record(1, 0, Stream::Single, &[4.0], 4.0);
        rec.count(1);
        rec.record(1, 1, Stream::Single, &[1.0], 1.0);
        rec.restart(1, 1, Stream::Single, 4.0, 1.0);
        rec.count(1);
        rec.record(2, 1, Stream::Single, &[0.25], 0.25);
        rec.finish(Termination::BudgetExhausted)
    }

    #[test]
    fn recorder_tracks_best_and_success() {
        let run = sample_run();
        assert_eq!(run.best_value, 0.25);
        assert_eq!(run.first_success, Some(2));
        assert_eq!(run.termination, Termination::ToleranceMet);
        assert!(run.trace[1].restart);
        assert_eq!(run.restarts[0].k, 1);
    }

    #[test]
    fn csv_round_trip() {
        let run = sample_run();
        let mut buf = Vec::new();
        run.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().nth(2).unwrap(), "1,1,single,1,1.0,1.0,1");
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in back.iter().zip(&run.trace) {
            assert_eq!((a.outer, a.inner, a.stream, a.iterate_count, a.f, a.f_best, a.restart),
                       (b.outer, b.inner, b.stream, b.iterate_count, b.f, b.f_best, b.restart));
        }
    }

    #[test]
    fn empty_trace_still_has_header() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().trim(), CSV_HEADER);
    }
}
