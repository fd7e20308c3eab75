//! Reading tensor and interval files and writing reports with 17 significant digits.
//!
//!     cargo run --example file_formats

use itensor::io::to_report_json;
use itensor::{check_interval_double_b, parse_input, Input, IntervalFile, Tolerance};

const EXAMPLE: &str = r#"{
  "order": 3,
  "dim": 2,
  "lower": [6, 0, 0, 0, 0, 0, 0, 6],
  "upper": [7, 1, 1, 1, 1, 1, 1, 7]
}"#;

fn main() -> itensor::Result<()> {
    let family = match parse_input(EXAMPLE)? {
        Input::Interval(ai) => ai,
        Input::Tensor(_) => unreachable!("the text has lower/upper arrays"),
    };
    let v = check_interval_double_b(&family, Tolerance::EXACT);
    print!("{}", to_report_json(&v));

    // files round-trip bit for bit
    let text = to_report_json(&IntervalFile::from(&family));
    assert_eq!(itensor::parse_interval(&text)?, family);

    // malformed input reports where it broke
    match parse_input("{\"order\": 3,\n \"dim\": 2, \"entries\": [1, 2,") {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
    match parse_input(r#"{"order": 2, "dim": 1, "lower": [3], "upper": [2]}"#) {
        Err(e) => println!("error: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
