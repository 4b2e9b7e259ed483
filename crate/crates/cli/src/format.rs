//! Deterministic rendering of numbers and reports.
//!
//! Reals use the shortest round-trip digits in lowercase e-notation
//! (`6.283185307179586e0`), zero is `0`, and complex values are rendered as
//! `re±imi`. JSON object keys keep insertion order.

use std::io::Write;

use residuum_core::quad::TableRow;
use residuum_core::Complex;
use serde_json::{Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_complex(z: Complex) -> String {
    let sign = if z.im < 0.0 || (z.im.is_nan() && z.im.is_sign_negative()) {
        '-'
    } else {
        '+'
    };
    format!("{}{}{}i", fmt_real(z.re), sign, fmt_real(z.im.abs()))
}

/// A real as a JSON number; non-finite values become strings.
pub fn real(x: f64) -> Value {
    Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(fmt_real(x)))
}

/// Compact JSON whose floats are written with [`fmt_real`].
struct ENotation;

impl serde_json::ser::Formatter for ENotation {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_real(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ENotation);
    serde::Serialize::serialize(v, &mut ser).expect("reports serialize");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

pub fn complex(z: Complex) -> Value {
    Value::String(fmt_complex(z))
}

pub fn table_json(rows: &[TableRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                serde_json::json!({
                    "step": r.step,
                    "param": real(r.param),
                    "value": complex(r.value),
                    "err_estimate": real(r.error),
                })
            })
            .collect(),
    )
}

pub const CSV_HEADER: &str = "step,param,value_re,value_im,err_estimate";

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.step,
            fmt_real(r.param),
            fmt_real(r.value.re),
            fmt_real(r.value.im),
            fmt_real(r.error)
        ));
    }
    s
}

/// A finished command: its JSON report, an optional convergence table and a
/// human-readable rendering.
pub struct Rendered {
    pub json: Value,
    pub table: Option<Vec<TableRow>>,
    pub text: String,
}

impl Rendered {
    pub fn body(&self, format: OutputFormat) -> Result<String, CliError> {
        match format {
            OutputFormat::Json => {
                let mut s = to_json_string(&self.json);
                s.push('\n');
                Ok(s)
            }
            OutputFormat::Csv => match &self.table {
                Some(rows) => Ok(table_csv(rows)),
                None => Err(CliError::validation(
                    "format",
                    "this command has no convergence table to write as CSV",
                )),
            },
            OutputFormat::Text => Ok(self.text.clone()),
        }
    }
}

pub fn write_out(body: &str, path: Option<&str>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body)
            .map_err(|e| CliError::validation("out", format!("cannot write {p}: {e}"))),
        None => stdout
            .write_all(body.as_bytes())
            .map_err(|e| CliError::validation("out", format!("cannot write to stdout: {e}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_complex_values() {
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(1e-6), "1e-6");
        assert_eq!(fmt_real(-2.5), "-2.5e0");
        assert_eq!(fmt_real(f64::NAN), "NaN");
        assert_eq!(
            fmt_complex(Complex::new(0.0, std::f64::consts::TAU)),
            "0+6.283185307179586e0i"
        );
        assert_eq!(fmt_complex(Complex::new(1.0, -0.5)), "1e0-5e-1i");
    }

    #[test]
    fn json_numbers_use_e_notation() {
        let v = serde_json::json!({ "a": real(-1.0), "b": real(0.0), "c": real(f64::INFINITY), "n": 3 });
        assert_eq!(to_json_string(&v), r#"{"a":-1e0,"b":0,"c":"inf","n":3}"#);
    }
}
