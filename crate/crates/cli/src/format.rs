//! Number formatting shared by the CSV and JSON writers.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// 17 significant digits in scientific notation; enough to round-trip any `f64`.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "NaN".to_string()
    }
}

/// A CSV table with a mandatory header, comma separators and `\n` line endings.
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out, width: header.len() }
    }

    pub fn row(&mut self, fields: &[String]) {
        debug_assert_eq!(fields.len(), self.width);
        self.out.push_str(&fields.join(","));
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}

struct SigFormatter;

impl Formatter for SigFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Compact JSON with a trailing newline. Non-finite numbers become `null`.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter);
    value.serialize(&mut ser).expect("in-memory serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [1.0 / 3.0, -0.1, 1e-300, 12345.678, 0.0] {
            let s = num(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits());
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
        assert_eq!(num(f64::NAN), "NaN");
    }

    #[test]
    fn json_numbers_use_fixed_precision() {
        let s = to_json(&serde_json::json!({"x": [0.25, f64::NAN], "k": 3}));
        assert_eq!(s, "{\"k\":3,\"x\":[2.5000000000000000e-1,null]}\n");
    }

    #[test]
    fn csv_layout() {
        let mut t = Csv::new(&["a", "b"]);
        t.row(&["1".into(), num(2.0)]);
        assert_eq!(t.finish(), "a,b\n1,2.0000000000000000e0\n");
    }
}
