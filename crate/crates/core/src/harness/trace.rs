//! CSV traces with header `iter,f_mu,gap,best_f,cert_gap,ms`; `cert_gap` is empty when no
//! certificate was computed at that iteration.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::solver::TraceRow;

pub const TRACE_HEADER: [&str; 6] = ["iter", "f_mu", "gap", "best_f", "cert_gap", "ms"];

pub fn write_trace<W: Write>(out: W, rows: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in rows {
        w.write_record([
            r.iter.to_string(),
            r.f_mu.to_string(),
            r.gap.to_string(),
            r.best_f.to_string(),
            r.cert_gap.map(|g| g.to_string()).unwrap_or_default(),
            r.elapsed_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(input);
    if r.headers()?.iter().ne(TRACE_HEADER) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("trace header must be `{}`", TRACE_HEADER.join(",")),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let field = |k: usize| -> Result<&str> {
            rec.get(k).ok_or_else(|| Error::Parse {
                line,
                column: k + 1,
                message: "missing field".into(),
            })
        };
        let num = |k: usize| -> Result<f64> {
            let s = field(k)?;
            s.parse().map_err(|_| Error::Parse {
                line,
                column: k + 1,
                message: format!("bad number `{s}`"),
            })
        };
        let iter = field(0)?.parse().map_err(|_| Error::Parse {
            line,
            column: 1,
            message: "bad iteration".into(),
        })?;
        let cert_gap = if field(4)?.is_empty() { None } else { Some(num(4)?) };
        rows.push(TraceRow {
            iter,
            f_mu: num(1)?,
            gap: num(2)?,
            best_f: num(3)?,
            cert_gap,
            elapsed_ms: num(5)?,
        });
    }
    if rows.windows(2).any(|w| w[1].iter <= w[0].iter) {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "trace rows are not ordered by iteration".into(),
        });
    }
    Ok(rows)
}
