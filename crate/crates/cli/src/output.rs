//! The output record shared by every command and its JSON/CSV writers.

use std::io::{self, Write};

use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `params` is a flat key/value table; every row has the same keys in the
/// same order.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub params: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        OutputRecord { command: command.to_owned(), params: Map::new(), rows: Vec::new() }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.params.insert(key.to_owned(), value.into());
    }

    pub fn push(&mut self, row: Map<String, Value>) {
        debug_assert!(self.rows.first().map_or(true, |first| first.keys().eq(row.keys())));
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), SCHEMA_VERSION.into());
        doc.insert("command".into(), self.command.clone().into());
        doc.insert("params".into(), Value::Object(self.params.clone()));
        doc.insert("rows".into(), Value::Array(self.rows.iter().cloned().map(Value::Object).collect()));
        let mut ser = serde_json::Serializer::with_formatter(&mut *out, SeventeenDigits::default());
        serde::Serialize::serialize(&Value::Object(doc), &mut ser).map_err(io::Error::other)?;
        writeln!(out)
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(first) = self.rows.first() {
            w.write_record(first.keys())?;
        }
        for row in &self.rows {
            w.write_record(row.values().map(csv_cell))?;
        }
        w.flush()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => format_float(n.as_f64().unwrap_or(f64::NAN)),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A float with 17 significant digits, trailing zeros trimmed; fixed
/// notation for decimal exponents in `[-5, 17)`, scientific otherwise.
/// Always reads back as the same `f64`.
pub fn format_float(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    if !(-5..17).contains(&exp) {
        let frac = digits[1..].trim_end_matches('0');
        let frac = if frac.is_empty() { String::new() } else { format!(".{frac}") };
        return format!("{sign}{}{frac}e{exp}", &digits[..1]);
    }
    let (int, frac) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_owned(), digits[split..].to_owned())
    } else {
        ("0".to_owned(), "0".repeat((-exp - 1) as usize) + &digits)
    };
    let frac = frac.trim_end_matches('0');
    format!("{sign}{int}.{}", if frac.is_empty() { "0" } else { frac })
}

/// Pretty JSON with [`format_float`] for every float.
#[derive(Default)]
struct SeventeenDigits {
    inner: serde_json::ser::PrettyFormatter<'static>,
}

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_float(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Builds a row from `(key, value)` pairs.
#[macro_export]
macro_rules! row {
    ($($key:expr => $value:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert(String::from($key), serde_json::Value::from($value));)*
        m
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(-0.125), "-0.125");
        assert_eq!(format_float(2.0), "2.0");
        assert_eq!(format_float(0.0), "0.0");
        assert_eq!(format_float(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_float(-3.5e20), "-3.5e20");
        assert_eq!(format_float(1.5e-5), "0.000015");
        assert_eq!(format_float(123456.75), "123456.75");
    }

    #[test]
    fn csv_quotes_awkward_cells() {
        let mut rec = OutputRecord::new("t");
        rec.push(crate::row! { "name" => "a, \"b\"", "x" => 0.5 });
        let mut buf = Vec::new();
        rec.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,x\n\"a, \"\"b\"\"\",0.5\n");
    }
}
