//! CSV readers and writers for datasets, traces and diagnostic series.
//!
//! Row numbers in error messages count data rows from 1, excluding the header.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use crate::diagnostics::CumulativeMeanSeries;
use crate::error::{Error, Result};
use crate::glm::{Dataset, ParamVector};
use crate::mh::ChainTrace;
use crate::samc::SamcTrace;

fn column(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.trim() == name)
        .ok_or_else(|| Error::MissingColumn(name.to_string()))
}

fn parse_field(record: &csv::StringRecord, idx: usize, row: usize, name: &str) -> Result<f64> {
    record
        .get(idx)
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::NonNumericValue {
            row,
            column: name.to_string(),
        })
}

/// Parses a dataset with header `x,y` (columns may appear in any order).
pub fn read_dataset<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || headers.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyFile);
    }
    let ix = column(&headers, "x")?;
    let iy = column(&headers, "y")?;
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        x.push(parse_field(&record, ix, row, "x")?);
        let yi = parse_field(&record, iy, row, "y")?;
        if yi != 0.0 && yi != 1.0 {
            return Err(Error::NonBinaryResponse { row });
        }
        y.push(yi);
    }
    if x.is_empty() {
        return Err(Error::EmptyFile);
    }
    Dataset::new(x, y)
}

pub fn load_csv_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    read_dataset(BufReader::new(File::open(path)?))
}

pub fn write_dataset<W: Write>(writer: W, d: &Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "y"])?;
    for (x, y) in d.iter() {
        w.write_record([x.to_string(), (y as u8).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `iter,beta0,beta1,accepted,logpost`, plus `region,theta_current`
/// for SAMC traces. `accepted` counts accepted moves in the iteration (0–2).
pub fn write_trace<W: Write>(writer: W, trace: &ChainTrace, samc: Option<&SamcTrace>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["iter", "beta0", "beta1", "accepted", "logpost"];
    if samc.is_some() {
        header.extend(["region", "theta_current"]);
    }
    w.write_record(&header)?;
    for (t, d) in trace.draws.iter().enumerate() {
        let mut rec = vec![
            (t + 1).to_string(),
            d.beta0.to_string(),
            d.beta1.to_string(),
            trace.accepted_count(t).to_string(),
            trace.logpost[t].to_string(),
        ];
        if let Some(s) = samc {
            rec.push(s.regions[t].to_string());
            rec.push(s.theta_current(t).to_string());
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of a trace file, as needed by the diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRows {
    pub draws: Vec<ParamVector>,
    pub accepted: Vec<u32>,
}

pub fn read_trace<R: Read>(reader: R) -> Result<TraceRows> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let i0 = column(&headers, "beta0")?;
    let i1 = column(&headers, "beta1")?;
    let ia = column(&headers, "accepted")?;
    let mut rows = TraceRows {
        draws: Vec::new(),
        accepted: Vec::new(),
    };
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let row = i + 1;
        rows.draws.push(ParamVector::new(
            parse_field(&record, i0, row, "beta0")?,
            parse_field(&record, i1, row, "beta1")?,
        ));
        rows.accepted.push(parse_field(&record, ia, row, "accepted")? as u32);
    }
    if rows.draws.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(rows)
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<TraceRows> {
    read_trace(BufReader::new(File::open(path)?))
}

/// `θ` snapshots every `every` iterations: `iter,theta_1,…,theta_m`.
pub fn write_theta_trace<W: Write>(writer: W, samc: &SamcTrace, every: usize) -> Result<()> {
    let every = every.max(1);
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["iter".to_string()];
    header.extend((1..=samc.m).map(|i| format!("theta_{i}")));
    w.write_record(&header)?;
    for t in (0..samc.chain.len()).filter(|t| (t + 1) % every == 0) {
        let mut rec = vec![(t + 1).to_string()];
        rec.extend(samc.theta_at(t).iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Long-format running means: `iteration,coordinate,start_offset,value`.
pub fn write_series<W: Write>(writer: W, series: &CumulativeMeanSeries) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["iteration", "coordinate", "start_offset", "value"])?;
    for s in &series.series {
        for (k, m) in s.means.iter().enumerate() {
            for (c, name) in ["beta0", "beta1"].iter().enumerate() {
                w.write_record([
                    (s.start + k).to_string(),
                    name.to_string(),
                    s.start.to_string(),
                    m[c].to_string(),
                ])?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
