//! CSV serialization of iteration traces.
//!
//! Columns: `n`, `x_0..x_{d-1}`, `y1_0..`, ..., `y{p-1}_{d-1}`, `residual`,
//! `pair_gap`, `d_n`. Floats carry 17 significant digits; `residual` is empty
//! when no fixed point was supplied.

use std::io::{Read, Write};
use std::path::Path;

use fixpoint_core::scheme::TraceRecord;

use crate::error::{CliError, Result};

pub fn header(dim: usize, stages: usize) -> Vec<String> {
    let mut h = vec!["n".to_string()];
    h.extend((0..dim).map(|j| format!("x_{j}")));
    for i in 1..=stages {
        h.extend((0..dim).map(|j| format!("y{i}_{j}")));
    }
    h.extend(["residual", "pair_gap", "d_n"].map(String::from));
    h
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn row(rec: &TraceRecord) -> Vec<String> {
    let mut r = vec![rec.n.to_string()];
    r.extend(rec.x_n.coords().iter().map(|&v| fmt_float(v)));
    for y in &rec.ys {
        r.extend(y.coords().iter().map(|&v| fmt_float(v)));
    }
    r.push(rec.residual.map(fmt_float).unwrap_or_default());
    r.push(fmt_float(rec.pair_gap));
    r.push(fmt_float(rec.d_n));
    r
}

pub fn write_trace<W: Write>(
    out: W,
    dim: usize,
    stages: usize,
    records: &[TraceRecord],
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(dim, stages))?;
    for rec in records {
        w.write_record(row(rec))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(
    path: &Path,
    dim: usize,
    stages: usize,
    records: &[TraceRecord],
) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    write_trace(std::io::BufWriter::new(file), dim, stages, records).map_err(|source| {
        CliError::Csv {
            path: path.to_path_buf(),
            source,
        }
    })
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub n: u64,
    pub x: Vec<f64>,
    pub ys: Vec<Vec<f64>>,
    pub residual: Option<f64>,
    pub pair_gap: f64,
    pub d_n: f64,
}

fn parse_err(msg: String) -> csv::Error {
    csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, msg))
}

pub fn read_trace<R: Read>(input: R) -> csv::Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let dim = headers.iter().filter(|h| h.starts_with("x_")).count();
    let stages = headers
        .iter()
        .filter(|h| h.starts_with('y') && h.ends_with("_0"))
        .count();
    if dim == 0 || headers.len() != 1 + dim * (stages + 1) + 3 {
        return Err(parse_err(format!("unexpected header {headers:?}")));
    }
    let num = |s: &str| -> csv::Result<f64> {
        s.parse::<f64>()
            .map_err(|e| parse_err(format!("bad float {s:?}: {e}")))
    };
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let n = rec[0]
            .parse::<u64>()
            .map_err(|e| parse_err(e.to_string()))?;
        let x = (1..=dim)
            .map(|j| num(&rec[j]))
            .collect::<csv::Result<Vec<_>>>()?;
        let mut ys = Vec::with_capacity(stages);
        for i in 0..stages {
            let base = 1 + dim * (i + 1);
            ys.push(
                (base..base + dim)
                    .map(|j| num(&rec[j]))
                    .collect::<csv::Result<Vec<_>>>()?,
            );
        }
        let tail = 1 + dim * (stages + 1);
        let residual = if rec[tail].is_empty() {
            None
        } else {
            Some(num(&rec[tail])?)
        };
        rows.push(CsvRow {
            n,
            x,
            ys,
            residual,
            pair_gap: num(&rec[tail + 1])?,
            d_n: num(&rec[tail + 2])?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fixpoint_core::Point;

    #[test]
    fn header_layout() {
        assert_eq!(
            header(2, 2),
            ["n", "x_0", "x_1", "y1_0", "y1_1", "y2_0", "y2_1", "residual", "pair_gap", "d_n"]
        );
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, 11.0 / 16.0, 1e-300, -2.5e150, 0.0] {
            let s = fmt_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
            let mant = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mant.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        }
    }

    #[test]
    fn write_then_read() {
        let rec = TraceRecord {
            n: 1,
            x_n: Point::new(vec![1.0]).unwrap(),
            ys: vec![Point::new(vec![0.75]).unwrap()],
            x_next: Point::new(vec![0.6875]).unwrap(),
            residual: None,
            pair_gap: 0.0625,
            d_n: 0.03125,
            step_size: 0.3125,
        };
        let mut buf = Vec::new();
        write_trace(&mut buf, 1, 1, std::slice::from_ref(&rec)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n,x_0,y1_0,residual,pair_gap,d_n\n1,1.0000000000000000e0,"));
        let rows = read_trace(buf.as_slice()).unwrap();
        assert_eq!(rows[0].x, vec![1.0]);
        assert_eq!(rows[0].ys, vec![vec![0.75]]);
        assert_eq!(rows[0].residual, None);
        assert_eq!(rows[0].d_n, 0.03125);
    }
}
