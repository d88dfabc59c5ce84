//! CSV and JSON result files.

use std::fs;
use std::path::Path;

use crate::experiment::ExperimentRecord;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 16] = [
    "scheme",
    "metric",
    "n",
    "m",
    "k",
    "r",
    "b",
    "c_b",
    "p_t",
    "noise_var",
    "snr_db",
    "trials",
    "seed",
    "mean",
    "stderr",
    "feedback_bits",
];

/// Formats `x` with 10 significant digits, `%g` style.
pub fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Header plus one row per record, in the given order.
pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no records to write".into()));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    })?;
    let csv_err = |e: csv::Error| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for rec in records {
        let c = &rec.config;
        w.write_record([
            c.scheme.to_string(),
            rec.metric.to_string(),
            c.n.to_string(),
            c.m.to_string(),
            rec.k.to_string(),
            rec.r.to_string(),
            c.b.to_string(),
            c.c_b.to_string(),
            sig10(c.p_t),
            sig10(c.noise_var),
            sig10(c.snr_db()),
            c.trials.to_string(),
            c.seed.to_string(),
            sig10(rec.mean),
            sig10(rec.stderr),
            rec.feedback_bits.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Full records, configuration snapshots included, as a JSON array.
pub fn emit_json(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(records)
        .map_err(|e| Error::InconsistentState(format!("cannot serialize records: {e}")))?;
    fs::write(path, text + "\n").map_err(io_err(path))
}
