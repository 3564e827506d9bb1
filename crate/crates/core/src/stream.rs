//! Windowed stream runner behind the `lis-stream` binary.
//!
//! Input is parsed lazily, each value slides the window once, and every
//! slide that leaves a full window (or every slide, with warm-up reporting)
//! produces one JSON record on its own line.

use std::io::{self, BufRead, BufReader, Read, Write};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::error::Error as CoreError;
use crate::oracle::{self, Constraint, Criterion, Extremum, Measure, ENUMERATION_LIMIT};
use crate::qnlist::QnList;
use crate::queries::{self, RangeParams, ResultSequence};
use crate::window::{SlideOutcome, WindowState};

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("{0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("oracle mismatch at window {window_index}: {detail}")]
    OracleMismatch { window_index: u64, detail: String },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl StreamError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            StreamError::Config(_) | StreamError::Io(_) | StreamError::Core(_) => 1,
            StreamError::Parse { .. } => 2,
            StreamError::OracleMismatch { .. } => 3,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum QueryKind {
    Length,
    Enumerate,
    MaxWeight,
    MinWeight,
    MaxGap,
    MinGap,
    MaxWidth,
    MinWidth,
    Slis,
    Rlis,
}

/// A query with its parameters checked.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Query {
    Length,
    Enumerate,
    MaxWeight,
    MinWeight,
    MaxGap,
    MinGap,
    MaxWidth,
    MinWidth,
    Slis(f64),
    Rlis(RangeParams),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Plain,
    /// `column` is 1-based.
    Csv {
        column: usize,
        has_header: bool,
    },
}

/// Raw range bounds as given on the command line: index gaps then value gaps.
pub type RangeSpec = (u64, u64, f64, f64);

/// Parses `LI,UI,LV,UV`.
pub fn parse_range(text: &str) -> Result<RangeSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [li, ui, lv, uv] = parts[..] else {
        return Err(format!("expected LI,UI,LV,UV, got {text:?}"));
    };
    let index = |s: &str| {
        s.parse::<u64>()
            .map_err(|e| format!("index bound {s:?}: {e}"))
    };
    let value = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| format!("value bound {s:?}: {e}"))
    };
    Ok((index(li)?, index(ui)?, value(lv)?, value(uv)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub window: usize,
    pub query: QueryKind,
    pub slope: Option<f64>,
    pub range: Option<RangeSpec>,
    pub format: InputFormat,
    pub emit_warmup: bool,
    pub oracle_check: bool,
    pub benchmark: bool,
}

impl RunConfig {
    pub fn new(window: usize, query: QueryKind) -> Self {
        Self {
            window,
            query,
            slope: None,
            range: None,
            format: InputFormat::Plain,
            emit_warmup: false,
            oracle_check: false,
            benchmark: false,
        }
    }

    /// Checks flag combinations and resolves the query parameters.
    pub fn validate(&self) -> Result<Query, StreamError> {
        let config = |msg: String| Err(StreamError::Config(msg));
        if self.window == 0 {
            return config("--window must be at least 1".into());
        }
        if let InputFormat::Csv { column: 0, .. } = self.format {
            return config("--column is 1-based".into());
        }
        if self.oracle_check && self.benchmark {
            return config("--oracle-check cannot be combined with --benchmark".into());
        }
        if self.oracle_check && self.window > ENUMERATION_LIMIT {
            return config(format!(
                "--oracle-check supports windows of at most {ENUMERATION_LIMIT} items"
            ));
        }
        if self.slope.is_some() && self.query != QueryKind::Slis {
            return config("--slope only applies to --query slis".into());
        }
        if self.range.is_some() && self.query != QueryKind::Rlis {
            return config("--range only applies to --query rlis".into());
        }
        let query = match self.query {
            QueryKind::Length => Query::Length,
            QueryKind::Enumerate => Query::Enumerate,
            QueryKind::MaxWeight => Query::MaxWeight,
            QueryKind::MinWeight => Query::MinWeight,
            QueryKind::MaxGap => Query::MaxGap,
            QueryKind::MinGap => Query::MinGap,
            QueryKind::MaxWidth => Query::MaxWidth,
            QueryKind::MinWidth => Query::MinWidth,
            QueryKind::Slis => {
                let Some(slope) = self.slope else {
                    return config("--query slis requires --slope".into());
                };
                if !(slope.is_finite() && slope >= 0.0) {
                    return Err(CoreError::InvalidSlope(slope).into());
                }
                Query::Slis(slope)
            }
            QueryKind::Rlis => {
                let Some((li, ui, lv, uv)) = self.range else {
                    return config("--query rlis requires --range".into());
                };
                Query::Rlis(RangeParams::new(li, ui, lv, uv)?)
            }
        };
        Ok(query)
    }
}

fn parse_value(token: &str, line: u64) -> Result<f64, StreamError> {
    let token = token.trim();
    let value: f64 = token.parse().map_err(|_| StreamError::Parse {
        line,
        message: format!("cannot parse {token:?} as a number"),
    })?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(StreamError::Parse {
            line,
            message: format!("{token:?} is not finite"),
        })
    }
}

/// Lazily parses `source` into finite values. Blank lines are skipped.
pub fn parse_input<'a, R: Read + 'a>(
    source: R,
    format: InputFormat,
) -> Box<dyn Iterator<Item = Result<f64, StreamError>> + 'a> {
    match format {
        InputFormat::Plain => Box::new(BufReader::new(source).lines().enumerate().filter_map(
            |(i, line)| {
                let line_no = i as u64 + 1;
                match line {
                    Err(e) => Some(Err(e.into())),
                    Ok(text) if text.trim().is_empty() => None,
                    Ok(text) => Some(parse_value(&text, line_no)),
                }
            },
        )),
        InputFormat::Csv { column, has_header } => {
            let reader = csv::ReaderBuilder::new()
                .has_headers(has_header)
                .flexible(true)
                .from_reader(source);
            Box::new(reader.into_records().map(move |record| {
                let record = record.map_err(|e| StreamError::Parse {
                    line: e.position().map_or(0, |p| p.line()),
                    message: e.to_string(),
                })?;
                let line = record.position().map_or(0, |p| p.line());
                let field = record.get(column - 1).ok_or_else(|| StreamError::Parse {
                    line,
                    message: format!("row has {} fields, column {column} requested", record.len()),
                })?;
                parse_value(field, line)
            }))
        }
    }
}

/// Operation counts for the slide that produced a report.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlideTiming {
    pub insert_probes: u64,
    pub delete_touches: u64,
}

/// One output record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowReport {
    /// Slides completed so far, warm-up included.
    pub window_index: u64,
    pub start_position: u64,
    pub end_position: u64,
    pub lis_length: usize,
    pub results: Vec<ResultSequence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremum_value: Option<f64>,
    pub timing: SlideTiming,
}

/// Runs `query` against the current window contents.
pub fn evaluate(
    query: &Query,
    list: &QnList,
) -> Result<(Vec<ResultSequence>, Option<f64>), CoreError> {
    let single = |seq: ResultSequence, value: f64| (vec![seq], Some(value));
    let extreme = |e: queries::Extreme| (e.sequences, Some(e.value));
    Ok(match *query {
        Query::Length => (Vec::new(), None),
        Query::Enumerate => (queries::enumerate(list), None),
        Query::MaxWeight => {
            let s = queries::max_weight(list)?;
            let w = s.weight();
            single(s, w)
        }
        Query::MinWeight => {
            let s = queries::min_weight(list)?;
            let w = s.weight();
            single(s, w)
        }
        Query::MaxGap => extreme(queries::max_gap(list)?),
        Query::MinGap => extreme(queries::min_gap(list)?),
        Query::MaxWidth => extreme(queries::max_width(list)?),
        Query::MinWidth => extreme(queries::min_width(list)?),
        Query::Slis(slope) => (queries::slis(list, slope)?.into_iter().collect(), None),
        Query::Rlis(range) => (queries::rlis(list, &range).into_iter().collect(), None),
    })
}

fn build_report(
    query: &Query,
    window: &WindowState,
    index: u64,
    slide: &SlideOutcome,
) -> Result<WindowReport, CoreError> {
    let list = window.structure();
    let (results, extremum_value) = evaluate(query, list)?;
    let start = list.oldest().map_or(slide.position, |id| list.position(id));
    Ok(WindowReport {
        window_index: index,
        start_position: start,
        end_position: slide.position,
        lis_length: list.list_count(),
        results,
        extremum_value,
        timing: SlideTiming {
            insert_probes: list.counters().last_probes,
            delete_touches: slide.delete.map_or(0, |d| d.touches),
        },
    })
}

type Pairs = Vec<(u64, f64)>;

fn sorted(mut set: Vec<Pairs>) -> Vec<Pairs> {
    set.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));
    set
}

/// Recomputes `report` from the window contents with the quadratic oracle.
pub fn verify_report(query: &Query, list: &QnList, report: &WindowReport) -> Result<(), String> {
    let values: Vec<f64> = list.items().map(|(v, _)| v).collect();
    let first = list.oldest().map_or(1, |id| list.position(id));
    let all = oracle::with_positions(&values, first, &oracle::dp_enumerate(&values));
    let expected_len = all.first().map_or(0, Vec::len);
    if report.lis_length != expected_len {
        return Err(format!(
            "length {} but oracle says {expected_len}",
            report.lis_length
        ));
    }
    let got = sorted(report.results.iter().map(ResultSequence::pairs).collect());

    let criterion = match query {
        Query::MaxWeight => Some(Criterion::new(Measure::Weight, Extremum::Max)),
        Query::MinWeight => Some(Criterion::new(Measure::Weight, Extremum::Min)),
        Query::MaxGap => Some(Criterion::new(Measure::Gap, Extremum::Max)),
        Query::MinGap => Some(Criterion::new(Measure::Gap, Extremum::Min)),
        Query::MaxWidth => Some(Criterion::new(Measure::Width, Extremum::Max)),
        Query::MinWidth => Some(Criterion::new(Measure::Width, Extremum::Min)),
        _ => None,
    };
    let constraint = match *query {
        Query::Slis(slope) => Some(Constraint::Slope(slope)),
        Query::Rlis(r) => Some(Constraint::Range {
            min_index: r.min_index(),
            max_index: r.max_index(),
            min_value: r.min_value(),
            max_value: r.max_value(),
        }),
        _ => None,
    };

    match (query, criterion, constraint) {
        (Query::Length, ..) => {
            if !got.is_empty() {
                return Err("length query reported sequences".into());
            }
        }
        (Query::Enumerate, ..) => {
            if got != sorted(all) {
                return Err(format!("enumeration {got:?} differs from oracle"));
            }
        }
        (_, Some(c), _) => {
            let best = sorted(oracle::post_filter(&all, c));
            let ok = match query {
                // weight queries report one representative of the optimal set
                Query::MaxWeight | Query::MinWeight => got.len() == 1 && best.contains(&got[0]),
                _ => got == best,
            };
            if !ok {
                return Err(format!("results {got:?} but optimal set is {best:?}"));
            }
            let value = c.measure(&best[0]);
            if report.extremum_value != Some(value) {
                return Err(format!(
                    "extremum {:?} but oracle says {value}",
                    report.extremum_value
                ));
            }
        }
        (_, None, Some(c)) => {
            let feasible = oracle::with_positions(&values, first, &oracle::dp_feasible(&values, c));
            let ok = match got.as_slice() {
                [] => feasible.is_empty(),
                [one] => feasible.contains(one),
                _ => false,
            };
            if !ok {
                return Err(format!("results {got:?} but feasible set is {feasible:?}"));
            }
        }
        _ => unreachable!("every query is covered"),
    }
    Ok(())
}

/// Totals for a completed run.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub items: u64,
    pub reports: u64,
}

/// Slides a window over `values`, writing one JSON line per report to `out`.
pub fn run_windowed<I, W>(
    config: &RunConfig,
    values: I,
    out: &mut W,
) -> Result<RunSummary, StreamError>
where
    I: IntoIterator<Item = Result<f64, StreamError>>,
    W: Write,
{
    let query = config.validate()?;
    let mut window = WindowState::new(config.window)?;
    let mut summary = RunSummary::default();
    for value in values {
        let slide = window.slide(value?)?;
        summary.items += 1;
        if !(window.is_full() || config.emit_warmup) {
            continue;
        }
        let report = build_report(&query, &window, summary.items, &slide)?;
        if config.oracle_check {
            verify_report(&query, window.structure(), &report).map_err(|detail| {
                StreamError::OracleMismatch {
                    window_index: report.window_index,
                    detail,
                }
            })?;
        }
        serde_json::to_writer(&mut *out, &report).map_err(io::Error::from)?;
        out.write_all(b"\n")?;
        summary.reports += 1;
    }
    out.flush()?;
    Ok(summary)
}

/// Maintenance throughput and operation counts, no queries.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkSummary {
    pub items: u64,
    pub window: usize,
    pub elapsed_seconds: f64,
    pub items_per_second: f64,
    pub inserts: u64,
    /// Inserts into a non-empty structure; only these search any tails.
    pub probed_inserts: u64,
    pub mean_insert_probes: f64,
    pub max_insert_probes: u64,
    pub deletes: u64,
    pub mean_delete_touches: f64,
    pub max_delete_touches: u64,
    pub max_lists: usize,
}

fn mean(total: u64, count: u64) -> f64 {
    if count == 0 {
        0.0
    } else {
        total as f64 / count as f64
    }
}

/// Parses everything up front, then times the slides alone.
pub fn benchmark<I>(config: &RunConfig, values: I) -> Result<BenchmarkSummary, StreamError>
where
    I: IntoIterator<Item = Result<f64, StreamError>>,
{
    config.validate()?;
    let values = values.into_iter().collect::<Result<Vec<f64>, _>>()?;
    let mut window = WindowState::new(config.window)?;
    let mut max_lists = 0;
    let started = Instant::now();
    for &v in &values {
        window.slide(v)?;
        max_lists = max_lists.max(window.structure().list_count());
    }
    let elapsed = started.elapsed().as_secs_f64();
    let c = window.structure().counters();
    Ok(BenchmarkSummary {
        items: values.len() as u64,
        window: config.window,
        elapsed_seconds: elapsed,
        items_per_second: if elapsed > 0.0 {
            values.len() as f64 / elapsed
        } else {
            0.0
        },
        inserts: c.inserts,
        probed_inserts: c.probed_inserts,
        mean_insert_probes: mean(c.total_probes, c.probed_inserts),
        max_insert_probes: c.max_probes,
        deletes: c.deletes,
        mean_delete_touches: mean(c.total_touches, c.deletes),
        max_delete_touches: c.max_touches,
        max_lists,
    })
}
