//! `example-s2`: the cubic generating-function map.

use std::path::{Path, PathBuf};

use qchar_core::numeric_star::{generating_map_example, GeneratingMapReport};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{emit_results, Table};
use crate::scenario::Format;

pub fn report_json(r: &GeneratingMapReport) -> Value {
    json!({
        "point": r.point,
        "hbar": r.hbar,
        "circ_h0": r.coefficients.circ0,
        "wedge_h0": r.coefficients.wedge0,
        "circ_value": r.circ_value,
        "wedge_value": r.wedge_value,
        "computed_circ_h2": r.computed_circ_h2,
        "expected_circ_h2": r.expected_circ_h2,
        "computed_wedge_h2": r.computed_wedge_h2,
        "expected_wedge_h2": r.expected_wedge_h2,
        "abs_rel_errors": r.abs_rel_errors,
    })
}

fn report_table(r: &GeneratingMapReport) -> Table {
    let mut t = Table::with_columns(
        "example_s2",
        &[
            "Q",
            "P",
            "hbar",
            "circ_h0",
            "wedge_h0",
            "computed_circ_h2",
            "expected_circ_h2",
            "computed_wedge_h2",
            "expected_wedge_h2",
            "circ_rel_error",
            "wedge_rel_error",
        ],
    );
    t.push(
        [
            r.point[0],
            r.point[1],
            r.hbar,
            r.coefficients.circ0,
            r.coefficients.wedge0,
            r.computed_circ_h2,
            r.expected_circ_h2,
            r.computed_wedge_h2,
            r.expected_wedge_h2,
            r.abs_rel_errors[0],
            r.abs_rel_errors[1],
        ]
        .into_iter()
        .map(Into::into)
        .collect(),
    );
    t
}

pub fn example_s2(big_q: f64, big_p: f64, hbar: f64, out: &Path, format: Format) -> Result<(Value, Vec<PathBuf>), CliError> {
    if !(big_q.is_finite() && big_p.is_finite() && hbar.is_finite()) || hbar < 0.0 {
        return Err(CliError::Validation("Q, P must be finite and hbar finite and non-negative".into()));
    }
    let r = generating_map_example(big_q, big_p, hbar).map_err(|e| CliError::Validation(e.to_string()))?;
    let files = emit_results(out, "example_s2", format, report_json(&r), &[report_table(&r)])?;
    Ok((report_json(&r), files))
}
