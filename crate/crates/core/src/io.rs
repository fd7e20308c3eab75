//! JSON file formats and the 17-significant-digit number formatting used in reports.
//!
//! Tensor file: `{"order": m, "dim": n, "entries": [...]}`.
//! Interval file: `{"order": m, "dim": n, "lower": [...], "upper": [...]}`.
//! Both arrays are row-major with the first index slowest.

use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{Error, Result};
use crate::interval::IntervalTensor;
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub order: usize,
    pub dim: usize,
    pub entries: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalFile {
    pub order: usize,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl From<&Tensor> for TensorFile {
    fn from(t: &Tensor) -> Self {
        TensorFile {
            order: t.order(),
            dim: t.dim(),
            entries: t.entries().to_vec(),
        }
    }
}

impl From<&IntervalTensor> for IntervalFile {
    fn from(ai: &IntervalTensor) -> Self {
        IntervalFile {
            order: ai.order(),
            dim: ai.dim(),
            lower: ai.lower().entries().to_vec(),
            upper: ai.upper().entries().to_vec(),
        }
    }
}

impl TryFrom<TensorFile> for Tensor {
    type Error = Error;

    fn try_from(f: TensorFile) -> Result<Tensor> {
        Tensor::new(f.order, f.dim, f.entries)
    }
}

impl TryFrom<IntervalFile> for IntervalTensor {
    type Error = Error;

    fn try_from(f: IntervalFile) -> Result<IntervalTensor> {
        let lower = Tensor::new(f.order, f.dim, f.lower)
            .map_err(|e| Error::Parse(format!("lower: {e}")))?;
        let upper = Tensor::new(f.order, f.dim, f.upper)
            .map_err(|e| Error::Parse(format!("upper: {e}")))?;
        IntervalTensor::new(lower, upper)
    }
}

/// A parsed input file of either kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Tensor(Tensor),
    Interval(IntervalTensor),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Tensor(_) => "tensor",
            Input::Interval(_) => "interval",
        }
    }
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Parses either file kind; `entries` selects a tensor, `lower`/`upper` an interval.
pub fn parse_input(text: &str) -> Result<Input> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(json_err)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be a JSON object".into()))?;
    if obj.contains_key("entries") {
        let f: TensorFile = serde_json::from_str(text).map_err(json_err)?;
        Ok(Input::Tensor(f.try_into()?))
    } else if obj.contains_key("lower") || obj.contains_key("upper") {
        let f: IntervalFile = serde_json::from_str(text).map_err(json_err)?;
        Ok(Input::Interval(f.try_into()?))
    } else {
        Err(Error::Parse(
            "expected an \"entries\" array or \"lower\"/\"upper\" arrays".into(),
        ))
    }
}

pub fn parse_tensor(text: &str) -> Result<Tensor> {
    match parse_input(text)? {
        Input::Tensor(t) => Ok(t),
        Input::Interval(_) => Err(Error::Parse("expected a tensor file, found an interval file".into())),
    }
}

pub fn parse_interval(text: &str) -> Result<IntervalTensor> {
    match parse_input(text)? {
        Input::Interval(ai) => Ok(ai),
        // a plain tensor is read as the degenerate interval around it
        Input::Tensor(t) => Ok(IntervalTensor::degenerate(t)),
    }
}

/// Formats a double with 17 significant digits. Fixed notation for
/// decimal exponents in [-5, 17), scientific otherwise.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let exp = v.abs().log10().floor() as i32;
    // log10 can be off by one near powers of ten; the scientific form settles it
    let sci = format!("{v:.16e}");
    let exp = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse::<i32>().ok())
        .unwrap_or(exp);
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let mut s = format!("{v:.decimals$}");
        if !s.contains('.') {
            s.push_str(".0");
        }
        s
    } else {
        sci
    }
}

/// Pretty JSON formatter that prints every float with 17 significant digits.
pub struct ReportFormatter {
    inner: PrettyFormatter<'static>,
}

impl Default for ReportFormatter {
    fn default() -> Self {
        ReportFormatter {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Serializes with [`ReportFormatter`], followed by a newline.
pub fn to_report_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ReportFormatter::default());
    value
        .serialize(&mut ser)
        .expect("report values serialize to JSON");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_seventeen_digits() {
        assert_eq!(format_f64(4.0), "4.0000000000000000");
        assert_eq!(format_f64(25.0), "25.000000000000000");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(-2.5), "-2.5000000000000000");
        assert_eq!(format_f64(1e20), "1.0000000000000000e20");
        assert_eq!(format_f64(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(format_f64(0.0), "0.0");
        for v in [1.0 / 3.0, 123456.789, -9.87654321e-3, 6.02e23, 1e-300, f64::MAX] {
            let back: f64 = format_f64(v).parse().unwrap();
            assert_eq!(back, v, "{v}");
        }
    }

    #[test]
    fn parses_both_kinds() {
        let t = parse_input(r#"{"order":2,"dim":2,"entries":[1,0,0,1]}"#).unwrap();
        assert_eq!(t.kind(), "tensor");
        let ai = parse_input(r#"{"order":2,"dim":1,"lower":[1],"upper":[2]}"#).unwrap();
        assert_eq!(ai.kind(), "interval");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            parse_input(r#"{"order":3,"dim":2,"entries":[1,0,0]}"#),
            Err(Error::LengthMismatch { expected: 8, got: 3 })
        ));
        let e = parse_input("{\"order\":2,\n\"dim\":2,\"entries\":[1,0,0,").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert!(parse_input(r#"{"order":2,"dim":1,"lower":[3],"upper":[2]}"#).is_err());
        assert!(parse_input(r#"{"order":2,"dim":1}"#).is_err());
        assert!(parse_input(r#"[1,2]"#).is_err());
        assert!(parse_input(r#"{"order":2,"dim":1,"entries":[1e999]}"#).is_err());
    }

    #[test]
    fn round_trips_bit_exactly() {
        let t = Tensor::new(2, 2, vec![0.1, -1.0 / 3.0, 2.5e-9, 7.0]).unwrap();
        let text = to_report_json(&TensorFile::from(&t));
        assert_eq!(parse_tensor(&text).unwrap(), t);
    }
}
