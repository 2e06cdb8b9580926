//! CSV and JSON artifacts. Floats in CSV files carry 12 significant digits;
//! every writer has a matching parser.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::coarse::XFormParams;
use crate::error::{Error, Result};
use crate::experiments::{AppendixBRow, EigScanRow, OptimizeConfig, OptimizeResult};
use crate::matcore::ComplexMatrix;
use crate::witness::{WitnessReport, ZetaMode};

pub const SIG_DIGITS: usize = 12;

pub const SWEEP_HEADER: [&str; 6] = ["epsilon", "theta", "phi", "delta_d", "delta_d_n", "diff"];
pub const EIGSCAN_HEADER: [&str; 4] = ["epsilon", "copies", "mode", "zeta"];
pub const APPENDIXB_HEADER: [&str; 6] = ["r1", "r2", "theta", "phi", "d_before", "d_after"];

/// `%.12g`-style formatting: fixed notation for exponents in `[-5, 12)`,
/// otherwise scientific; trailing zeros trimmed; `-0` printed as `0`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if !s.contains('.') {
        return s.to_string();
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One sweep.csv line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub theta: f64,
    pub phi: f64,
    pub delta_d: f64,
    pub delta_d_n: f64,
    pub diff: f64,
}

impl From<&WitnessReport> for SweepRecord {
    fn from(r: &WitnessReport) -> Self {
        Self {
            epsilon: r.epsilon,
            theta: r.theta,
            phi: r.phi,
            delta_d: r.delta_d,
            delta_d_n: r.delta_d_n,
            diff: r.diff(),
        }
    }
}

fn write_rows<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows<R: Read>(input: R, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let found: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if found != header {
        return Err(Error::Parse(format!(
            "expected header {header:?}, found {found:?}"
        )));
    }
    r.records().map(|rec| rec.map_err(Error::from)).collect()
}

fn field_f64(rec: &csv::StringRecord, i: usize) -> Result<f64> {
    let s = rec
        .get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {i}")))?;
    s.parse()
        .map_err(|_| Error::Parse(format!("not a number: '{s}'")))
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[WitnessReport]) -> Result<()> {
    write_rows(
        out,
        &SWEEP_HEADER,
        rows.iter().map(|r| {
            let s = SweepRecord::from(r);
            [s.epsilon, s.theta, s.phi, s.delta_d, s.delta_d_n, s.diff]
                .map(format_sig)
                .to_vec()
        }),
    )
}

pub fn read_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRecord>> {
    read_rows(input, &SWEEP_HEADER)?
        .iter()
        .map(|rec| {
            Ok(SweepRecord {
                epsilon: field_f64(rec, 0)?,
                theta: field_f64(rec, 1)?,
                phi: field_f64(rec, 2)?,
                delta_d: field_f64(rec, 3)?,
                delta_d_n: field_f64(rec, 4)?,
                diff: field_f64(rec, 5)?,
            })
        })
        .collect()
}

pub fn write_eigscan_csv<W: Write>(out: W, rows: &[EigScanRow]) -> Result<()> {
    write_rows(
        out,
        &EIGSCAN_HEADER,
        rows.iter().map(|r| {
            vec![
                format_sig(r.epsilon),
                r.copies.to_string(),
                r.mode.as_str().to_string(),
                format_sig(r.zeta),
            ]
        }),
    )
}

pub fn read_eigscan_csv<R: Read>(input: R) -> Result<Vec<EigScanRow>> {
    read_rows(input, &EIGSCAN_HEADER)?
        .iter()
        .map(|rec| {
            let copies = rec.get(1).unwrap_or("");
            Ok(EigScanRow {
                epsilon: field_f64(rec, 0)?,
                copies: copies
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad copies '{copies}'")))?,
                mode: ZetaMode::parse(rec.get(2).unwrap_or(""))?,
                zeta: field_f64(rec, 3)?,
            })
        })
        .collect()
}

pub fn write_appendixb_csv<W: Write>(out: W, rows: &[AppendixBRow]) -> Result<()> {
    write_rows(
        out,
        &APPENDIXB_HEADER,
        rows.iter().map(|r| {
            [r.r1, r.r2, r.theta, r.phi, r.d_before, r.d_after]
                .map(format_sig)
                .to_vec()
        }),
    )
}

pub fn read_appendixb_csv<R: Read>(input: R) -> Result<Vec<AppendixBRow>> {
    read_rows(input, &APPENDIXB_HEADER)?
        .iter()
        .map(|rec| {
            Ok(AppendixBRow {
                r1: field_f64(rec, 0)?,
                r2: field_f64(rec, 1)?,
                theta: field_f64(rec, 2)?,
                phi: field_f64(rec, 3)?,
                d_before: field_f64(rec, 4)?,
                d_after: field_f64(rec, 5)?,
            })
        })
        .collect()
}

/// Contents of optimize.json.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeDocument {
    pub copies: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub angles: Vec<f64>,
    pub objective: f64,
    pub restarts_used: usize,
}

impl OptimizeDocument {
    pub fn new(cfg: &OptimizeConfig, result: &OptimizeResult) -> Self {
        Self {
            copies: cfg.copies,
            epsilon: cfg.epsilon,
            seed: cfg.seed,
            angles: result.params.angles.clone(),
            objective: result.objective,
            restarts_used: result.restarts_used,
        }
    }

    /// Block angles as an X-form parameter set.
    pub fn params(&self) -> Result<XFormParams> {
        XFormParams::new(1 << (self.copies + 2), self.angles.clone())
    }
}

/// Dense unitary as separate real and imaginary row lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryDocument {
    pub dim: usize,
    pub entries_re: Vec<Vec<f64>>,
    pub entries_im: Vec<Vec<f64>>,
}

impl UnitaryDocument {
    pub fn from_matrix(u: &ComplexMatrix) -> Self {
        let rows = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..u.rows())
                .map(|i| u.row(i).iter().map(f).collect())
                .collect()
        };
        Self {
            dim: u.rows(),
            entries_re: rows(|z| z.re),
            entries_im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let well_formed = self.entries_re.len() == self.dim
            && self.entries_im.len() == self.dim
            && self
                .entries_re
                .iter()
                .chain(&self.entries_im)
                .all(|r| r.len() == self.dim);
        if !well_formed {
            return Err(Error::Parse(format!(
                "unitary entries are not {0}x{0}",
                self.dim
            )));
        }
        let data = self
            .entries_re
            .iter()
            .flatten()
            .zip(self.entries_im.iter().flatten())
            .map(|(&re, &im)| num_complex::Complex64::new(re, im))
            .collect();
        ComplexMatrix::from_vec(self.dim, self.dim, data)
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Parses `{dim, angles}` and validates the block count.
pub fn parse_angles_json(text: &str) -> Result<XFormParams> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Doc {
        dim: usize,
        angles: Vec<f64>,
    }
    let doc: Doc = serde_json::from_str(text)?;
    XFormParams::new(doc.dim, doc.angles)
}
