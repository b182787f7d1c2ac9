//! Deterministic machine-readable output.
//!
//! Every emitted double uses scientific notation with 17 significant digits,
//! which round-trips exactly: parsing the text recovers the original bits.
//! Identical inputs therefore produce byte-identical artifacts, which is the
//! property regression suites diff against.
//!
//! JSON is rendered by a small writer of our own rather than a generic
//! serializer: generic float formatting is shortest-round-trip, not
//! fixed-width, and JSON has no literal for infinities. Here finite reals
//! are emitted as JSON numbers in the fixed format, non-finite reals as the
//! strings "inf", "-inf", and "nan", and object keys keep insertion order.
//! CSV files carry '#'-prefixed comment lines (the effective configuration
//! and any scalar summaries), then a header row, then data rows; non-finite
//! reals appear literally as inf/-inf/nan fields.

/// One f64 as text: 17 significant digits in scientific notation, or
/// inf/-inf/nan. Round-trip exact for finite values.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x == f64::INFINITY {
        "inf".to_string()
    } else if x == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// A JSON value with deterministic rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum JsonValue {
    Null,
    Bool(bool),
    Int(i64),
    UInt(u64),
    /// Rendered via `sci`: finite values as JSON numbers, non-finite as
    /// the strings "inf" / "-inf" / "nan".
    Real(f64),
    Str(String),
    Array(Vec<JsonValue>),
    /// Key-value pairs in insertion order (no sorting, no deduplication).
    Object(Vec<(String, JsonValue)>),
}

impl JsonValue {
    pub fn object(pairs: Vec<(&str, JsonValue)>) -> JsonValue {
        JsonValue::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    /// Render as pretty-printed JSON (2-space indent) with a trailing
    /// newline. Scalar-only arrays render inline; arrays holding containers
    /// render one element per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn is_container(&self) -> bool {
        matches!(self, JsonValue::Array(_) | JsonValue::Object(_))
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            JsonValue::Null => out.push_str("null"),
            JsonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            JsonValue::Int(i) => out.push_str(&i.to_string()),
            JsonValue::UInt(u) => out.push_str(&u.to_string()),
            JsonValue::Real(x) => {
                if x.is_finite() {
                    out.push_str(&sci(*x));
                } else {
                    out.push('"');
                    out.push_str(&sci(*x));
                    out.push('"');
                }
            }
            JsonValue::Str(s) => write_json_string(out, s),
            JsonValue::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                } else if items.iter().any(JsonValue::is_container) {
                    out.push_str("[\n");
                    for (i, item) in items.iter().enumerate() {
                        push_indent(out, indent + 1);
                        item.write(out, indent + 1);
                        if i + 1 < items.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    push_indent(out, indent);
                    out.push(']');
                } else {
                    out.push('[');
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, indent);
                    }
                    out.push(']');
                }
            }
            JsonValue::Object(pairs) => {
                if pairs.is_empty() {
                    out.push_str("{}");
                    return;
                }
                out.push_str("{\n");
                for (i, (key, value)) in pairs.iter().enumerate() {
                    push_indent(out, indent + 1);
                    write_json_string(out, key);
                    out.push_str(": ");
                    value.write(out, indent + 1);
                    if i + 1 < pairs.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                push_indent(out, indent);
                out.push('}');
            }
        }
    }
}

fn push_indent(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_json_string(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Assembles a CSV document: '#' comment lines, one header row, data rows.
#[derive(Debug, Default)]
pub struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new() -> Self {
        Self::default()
    }

    /// One `# key = value` comment line.
    pub fn comment(&mut self, key: &str, value: &str) -> &mut Self {
        debug_assert!(!key.contains('\n') && !value.contains('\n'));
        self.buf.push_str("# ");
        self.buf.push_str(key);
        self.buf.push_str(" = ");
        self.buf.push_str(value);
        self.buf.push('\n');
        self
    }

    pub fn header(&mut self, columns: &[&str]) -> &mut Self {
        self.buf.push_str(&columns.join(","));
        self.buf.push('\n');
        self
    }

    pub fn row(&mut self, fields: &[String]) -> &mut Self {
        debug_assert!(fields
            .iter()
            .all(|f| !f.contains(',') && !f.contains('\n') && !f.contains('"')));
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_has_17_significant_digits() {
        assert_eq!(sci(0.5), "5.0000000000000000e-1");
        assert_eq!(sci(1.0), "1.0000000000000000e0");
        assert_eq!(sci(0.0), "0.0000000000000000e0");
        assert_eq!(sci(-0.3), "-2.9999999999999999e-1");
        assert_eq!(sci(0.1), "1.0000000000000001e-1");
        assert_eq!(sci(1e-300), "1.0000000000000000e-300");
    }

    #[test]
    fn sci_non_finite_spellings() {
        assert_eq!(sci(f64::INFINITY), "inf");
        assert_eq!(sci(f64::NEG_INFINITY), "-inf");
        assert_eq!(sci(f64::NAN), "nan");
    }

    #[test]
    fn sci_round_trips_exactly() {
        let samples = [
            0.1, 0.3, 1.0 / 3.0, 0.24609375, 2.0_f64.sqrt(), 1e-308, 5e-324, // subnormal
            -0.0, 6.02214076e23, f64::MAX, f64::MIN_POSITIVE,
            0.3f64.ln(), (1.0f64 - 0.3).ln(),
        ];
        for &x in &samples {
            let back: f64 = sci(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x:e} -> {} -> {back:e}", sci(x));
        }
    }

    #[test]
    fn json_scalars_and_key_order() {
        let v = JsonValue::object(vec![
            ("b", JsonValue::Int(-2)),
            ("a", JsonValue::Real(0.5)),
            ("flag", JsonValue::Bool(true)),
            ("nothing", JsonValue::Null),
            ("name", JsonValue::Str("x".to_string())),
        ]);
        // Insertion order is preserved: "b" stays first.
        assert_eq!(
            v.render(),
            "{\n  \"b\": -2,\n  \"a\": 5.0000000000000000e-1,\n  \"flag\": true,\n  \"nothing\": null,\n  \"name\": \"x\"\n}\n"
        );
    }

    #[test]
    fn json_non_finite_reals_become_strings() {
        let v = JsonValue::object(vec![
            ("lw", JsonValue::Real(f64::NEG_INFINITY)),
            ("hi", JsonValue::Real(f64::INFINITY)),
            ("bad", JsonValue::Real(f64::NAN)),
        ]);
        let text = v.render();
        assert!(text.contains("\"lw\": \"-inf\""));
        assert!(text.contains("\"hi\": \"inf\""));
        assert!(text.contains("\"bad\": \"nan\""));
    }

    #[test]
    fn json_arrays_inline_scalars_and_expand_containers() {
        let scalars = JsonValue::Array(vec![
            JsonValue::UInt(4),
            JsonValue::UInt(5),
        ]);
        assert_eq!(scalars.render(), "[4, 5]\n");
        assert_eq!(JsonValue::Array(vec![]).render(), "[]\n");
        let nested = JsonValue::object(vec![(
            "rows",
            JsonValue::Array(vec![JsonValue::object(vec![("k", JsonValue::UInt(1))])]),
        )]);
        assert_eq!(
            nested.render(),
            "{\n  \"rows\": [\n    {\n      \"k\": 1\n    }\n  ]\n}\n"
        );
    }

    #[test]
    fn json_string_escaping() {
        let v = JsonValue::Str("a\"b\\c\nd\u{1}".to_string());
        assert_eq!(v.render(), "\"a\\\"b\\\\c\\nd\\u0001\"\n");
    }

    #[test]
    fn csv_document_layout() {
        let mut doc = CsvDoc::new();
        doc.comment("command", "bins")
            .comment("p", &sci(0.5))
            .header(&["bin_index", "weight"])
            .row(&["0".to_string(), sci(0.3125)])
            .row(&["1".to_string(), sci(0.6875)]);
        assert_eq!(
            doc.finish(),
            "# command = bins\n# p = 5.0000000000000000e-1\nbin_index,weight\n0,3.1250000000000000e-1\n1,6.8750000000000000e-1\n"
        );
    }
}
