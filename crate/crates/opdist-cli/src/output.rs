//! Serialization helpers: JSON with complex entries as [re, im] pairs, CSV
//! with 17-significant-digit floats, and the metadata header both carry.

use opdist::bloch::DensityOperator;
use opdist::linalg::{Complex64, ComplexMatrix};
use opdist::sampler::RNG_ALGORITHM;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const TOOL_NAME: &str = "opdist";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 17 significant digits: round-trippable f64 text.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| {
            let row: Vec<Value> = (0..m.cols()).map(|j| complex_json(m[(i, j)])).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn state_json(rho: &DensityOperator) -> Value {
    matrix_json(rho.matrix())
}

pub fn meta_json(cfg: &RunConfig) -> Value {
    json!({
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "rng": RNG_ALGORITHM,
        "config": cfg.echo_json(),
    })
}

/// `# key: value` comment block for CSV files.
pub fn csv_header(cfg: &RunConfig) -> String {
    format!(
        "# tool: {TOOL_NAME} {TOOL_VERSION}\n# rng: {RNG_ALGORITHM}\n# config: {}\n",
        cfg.echo_line()
    )
}

/// Serializes a JSON document (compact, trailing newline).
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("JSON serialization cannot fail");
    s.push('\n');
    s
}
