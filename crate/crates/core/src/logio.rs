//! Parsing text logs into event streams.
//!
//! Three line formats cover the built-in queries: bare numbers, bare
//! symbols, and comma-separated tuples with a fixed field schema. Blank
//! lines are skipped; every other line must parse to exactly one event.

use thiserror::Error;

use crate::event::Event;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldType {
    Number,
    Text,
}

/// How each log line maps to an event.
#[derive(Debug, Clone, PartialEq)]
pub enum LogFormat {
    /// One number per line.
    Numbers,
    /// One symbolic token per line.
    Symbols,
    /// Comma-separated values matching the schema, producing a named tuple.
    CsvTuples(Vec<(String, FieldType)>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected} comma-separated fields, got {got}")]
    WrongFieldCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: '{token}' is not a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: empty token")]
    EmptyToken { line: usize },
}

/// Parses one log line. `line_no` is 1-based and only used in errors.
pub fn parse_line(format: &LogFormat, line: &str, line_no: usize) -> Result<Event, ParseError> {
    let line = line.trim();
    match format {
        LogFormat::Numbers => parse_number(line, line_no).map(Event::Number),
        LogFormat::Symbols => {
            if line.is_empty() {
                Err(ParseError::EmptyToken { line: line_no })
            } else {
                Ok(Event::text(line))
            }
        }
        LogFormat::CsvTuples(schema) => {
            let tokens: Vec<&str> = line.split(',').map(str::trim).collect();
            if tokens.len() != schema.len() {
                return Err(ParseError::WrongFieldCount {
                    line: line_no,
                    expected: schema.len(),
                    got: tokens.len(),
                });
            }
            let mut fields = Vec::with_capacity(schema.len());
            for ((name, ty), token) in schema.iter().zip(tokens) {
                let value = match ty {
                    FieldType::Number => Event::Number(parse_number(token, line_no)?),
                    FieldType::Text => {
                        if token.is_empty() {
                            return Err(ParseError::EmptyToken { line: line_no });
                        }
                        Event::text(token)
                    }
                };
                fields.push((name.clone(), value));
            }
            Ok(Event::Tuple(fields))
        }
    }
}

fn parse_number(token: &str, line_no: usize) -> Result<f64, ParseError> {
    token
        .parse::<f64>()
        .map_err(|_| ParseError::BadNumber { line: line_no, token: token.to_string() })
}

/// Parses a whole log, skipping blank lines.
pub fn parse_log(format: &LogFormat, text: &str) -> Result<Vec<Event>, ParseError> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        events.push(parse_line(format, line, i + 1)?);
    }
    Ok(events)
}

/// Builds a tuple schema from a header line and the first data line: field
/// names come from the header, each field's type is Number when the sample
/// value parses as one.
pub fn infer_csv_format(header: &str, first_data: &str) -> Result<LogFormat, ParseError> {
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let samples: Vec<&str> = first_data.split(',').map(str::trim).collect();
    if names.len() != samples.len() {
        return Err(ParseError::WrongFieldCount {
            line: 2,
            expected: names.len(),
            got: samples.len(),
        });
    }
    let schema = names
        .into_iter()
        .zip(samples)
        .map(|(name, sample)| {
            let ty = if sample.parse::<f64>().is_ok() { FieldType::Number } else { FieldType::Text };
            (name.to_string(), ty)
        })
        .collect();
    Ok(LogFormat::CsvTuples(schema))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_format() {
        let events = parse_log(&LogFormat::Numbers, "3\n1\n\n4\n").unwrap();
        assert_eq!(events, vec![Event::number(3), Event::number(1), Event::number(4)]);
        let err = parse_line(&LogFormat::Numbers, "abc", 7).unwrap_err();
        assert_eq!(err, ParseError::BadNumber { line: 7, token: "abc".to_string() });
    }

    #[test]
    fn csv_tuples_format() {
        let schema = LogFormat::CsvTuples(vec![
            ("id".to_string(), FieldType::Number),
            ("action".to_string(), FieldType::Text),
        ]);
        let e = parse_line(&schema, "2, a", 1).unwrap();
        assert_eq!(e, Event::tuple(vec![("id", Event::number(2)), ("action", Event::text("a"))]));
        assert_eq!(
            parse_line(&schema, "2", 3).unwrap_err(),
            ParseError::WrongFieldCount { line: 3, expected: 2, got: 1 }
        );
        assert!(matches!(
            parse_line(&schema, "x,a", 4).unwrap_err(),
            ParseError::BadNumber { line: 4, .. }
        ));
    }

    #[test]
    fn header_inference() {
        let format = infer_csv_format("action,p", "b, 1").unwrap();
        assert_eq!(
            format,
            LogFormat::CsvTuples(vec![
                ("action".to_string(), FieldType::Text),
                ("p".to_string(), FieldType::Number),
            ])
        );
    }
}
