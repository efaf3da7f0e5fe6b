//! Flat CSV rows and the self-describing JSON envelope around every run.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SumsetError};
use crate::harness::ratio::RatioVerdict;

/// Column order of every ratio CSV.
pub const CSV_COLUMNS: [&str; 10] = [
    "set",
    "n",
    "k",
    "size_k",
    "size_k1",
    "lhs_cross",
    "rhs_cross",
    "holds",
    "hyp_theorem",
    "hyp_question",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub set: String,
    pub n: usize,
    pub k: usize,
    pub size_k: u64,
    pub size_k1: u64,
    pub lhs_cross: u64,
    pub rhs_cross: u64,
    pub holds: bool,
    pub hyp_theorem: bool,
    pub hyp_question: bool,
}

impl From<&RatioVerdict> for RatioRow {
    fn from(v: &RatioVerdict) -> Self {
        RatioRow {
            set: v.set.to_string(),
            n: v.n,
            k: v.k,
            size_k: v.size_k,
            size_k1: v.size_k1,
            lhs_cross: v.lhs_cross,
            rhs_cross: v.rhs_cross,
            holds: v.holds,
            hyp_theorem: v.hyp_theorem,
            hyp_question: v.hyp_question,
        }
    }
}

pub fn write_ratio_csv<'a, W: Write>(
    out: W,
    verdicts: impl IntoIterator<Item = &'a RatioVerdict>,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    for v in verdicts {
        w.serialize(RatioRow::from(v)).map_err(csv_error)?;
    }
    w.flush()
        .map_err(|e| SumsetError::InvalidParameters(format!("writing csv: {e}")))?;
    Ok(())
}

pub fn ratio_csv_string<'a>(
    verdicts: impl IntoIterator<Item = &'a RatioVerdict>,
) -> Result<String> {
    let mut buf = Vec::new();
    write_ratio_csv(&mut buf, verdicts)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn csv_error(e: csv::Error) -> SumsetError {
    SumsetError::InvalidParameters(format!("writing csv: {e}"))
}

/// Every JSON artifact: who produced it, with what configuration, and the result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact<C, R> {
    pub tool: String,
    pub tool_version: String,
    pub config: C,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub result: R,
}

impl<C, R> Artifact<C, R> {
    pub fn new(config: C, result: R, wall_time_ms: Option<u64>) -> Self {
        Artifact {
            tool: "sumsets".into(),
            tool_version: crate::TOOL_VERSION.into(),
            config,
            wall_time_ms,
            result,
        }
    }
}

/// `p/q` rendered with six decimals, computed in integers.
pub fn decimal(p: u64, q: u64) -> String {
    if q == 0 {
        return "inf".into();
    }
    let scaled = (p as u128 * 1_000_000 + q as u128 / 2) / q as u128;
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}
