//! Deterministic number and JSON formatting.
//!
//! Every floating-point number leaving the CLI is rendered with 12
//! significant digits so that re-running a command with identical flags
//! produces byte-identical files.

use std::io;

use num_complex::Complex64;
use serde::Serialize;

/// 12-significant-digit decimal (scientific) rendering.
pub fn fmt12(value: f64) -> String {
    format!("{value:.11e}")
}

/// Complex number as `re+imi` / `re-imi`, 12 significant digits each.
pub fn fmt12_complex(value: Complex64) -> String {
    if value.im >= 0.0 {
        format!("{}+{}i", fmt12(value.re), fmt12(value.im))
    } else {
        format!("{}-{}i", fmt12(value.re), fmt12(-value.im))
    }
}

/// serde_json formatter that renders every f64 with [`fmt12`].
struct SigFigFormatter;

impl serde_json::ser::Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt12(value).as_bytes())
    }
}

/// Serialize any value to JSON bytes with 12-significant-digit floats.
pub fn to_json_bytes<T: Serialize>(value: &T) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFigFormatter);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(out)
}

/// Quote a CSV field only when it contains a delimiter or quote.
pub fn csv_field(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt12_is_twelve_significant_digits() {
        assert_eq!(fmt12(0.5), "5.00000000000e-1");
        assert_eq!(fmt12(0.7776801836348979), "7.77680183635e-1");
        assert_eq!(fmt12(0.0), "0.00000000000e0");
        assert_eq!(fmt12(2.0 / 3.0), "6.66666666667e-1");
    }

    #[test]
    fn json_floats_use_fixed_precision() {
        #[derive(Serialize)]
        struct S {
            x: f64,
        }
        let bytes = to_json_bytes(&S { x: 0.25 }).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "{\"x\":2.50000000000e-1}\n");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
    }
}
