// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV encoding of trajectories and gates.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::{Frame, GateMatrix, Sample, TimeSeries};

pub const TIMESERIES_HEADER: &str =
    "t,re_c00,im_c00,re_c01,im_c01,re_c10,im_c10,re_c11,im_c11,norm";

pub const GATE_HEADER: &str = "row,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11";

const ROW_LABELS: [&str; 4] = ["00", "01", "10", "11"];

/// 17 significant digits, enough to round-trip any `f64`.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_timeseries<W: Write>(series: &TimeSeries, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{TIMESERIES_HEADER}")?;
    for row in &series.rows {
        let mut fields = Vec::with_capacity(10);
        fields.push(num(row.t));
        for c in &row.amplitudes {
            fields.push(num(c.re));
            fields.push(num(c.im));
        }
        fields.push(num(row.norm));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Reads a trajectory written by [`write_timeseries`]. The frame is not part
/// of the file and must be supplied.
pub fn read_timeseries<R: BufRead>(r: R, frame: Frame) -> Result<TimeSeries> {
    let mut lines = r.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim() == TIMESERIES_HEADER => {}
        Some((_, Ok(h))) => {
            return Err(Error::Csv {
                line: 1,
                message: format!("unexpected header `{h}`"),
            })
        }
        _ => {
            return Err(Error::Csv {
                line: 1,
                message: "missing header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Csv {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Csv {
                line: line_no,
                message: e.to_string(),
            })?;
        if values.len() != 10 {
            return Err(Error::Csv {
                line: line_no,
                message: format!("expected 10 fields, got {}", values.len()),
            });
        }
        let amp = |k: usize| Complex64::new(values[1 + 2 * k], values[2 + 2 * k]);
        rows.push(Sample {
            t: values[0],
            amplitudes: [amp(0), amp(1), amp(2), amp(3)],
            norm: values[9],
        });
    }
    let series = TimeSeries { frame, rows };
    series.validate()?;
    Ok(series)
}

/// One line per output basis state; columns are the input basis states.
pub fn write_gate<W: Write>(gate: &GateMatrix, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{GATE_HEADER}")?;
    for (row, label) in ROW_LABELS.iter().enumerate() {
        let mut fields = vec![label.to_string()];
        for col in 0..4 {
            let c = gate.get(row, col);
            fields.push(num(c.re));
            fields.push(num(c.im));
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::cn_matrix;
    use crate::spin::{BasisLabel, QState};

    #[test]
    fn header_is_exact() {
        let s = TimeSeries {
            frame: Frame::Raw,
            rows: vec![Sample::new(0.0, &QState::digital(BasisLabel::Ket00))],
        };
        let mut buf = Vec::new();
        write_timeseries(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "t,re_c00,im_c00,re_c01,im_c01,re_c10,im_c10,re_c11,im_c11,norm"
        );
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn rejects_wrong_header_and_width() {
        assert!(read_timeseries("a,b\n".as_bytes(), Frame::Raw).is_err());
        let text = format!("{TIMESERIES_HEADER}\n0,1,0\n");
        assert!(matches!(
            read_timeseries(text.as_bytes(), Frame::Raw),
            Err(Error::Csv { line: 2, .. })
        ));
    }

    #[test]
    fn gate_layout() {
        let mut buf = Vec::new();
        write_gate(&cn_matrix(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], GATE_HEADER);
        // row 10 has its 1 in the column of input 11
        let row10: Vec<f64> = lines[3]
            .split(',')
            .skip(1)
            .map(|v| v.parse().unwrap())
            .collect();
        assert_eq!(row10[6], 1.0);
        assert_eq!(row10[4], 0.0);
    }
}
