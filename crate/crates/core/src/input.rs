//! Sample file parsing.
//!
//! Single-class files hold one real per line. Two-class files hold
//! `value,label` with labels `0` or `1`. Blank lines and lines starting with
//! `#` are ignored and fields are trimmed.

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{Error, Result};

/// Values split by class label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledValues {
    pub class0: Vec<f64>,
    pub class1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampleInput {
    Single(Vec<f64>),
    Labeled(LabeledValues),
}

fn records(text: &str) -> impl Iterator<Item = Result<(u64, StringRecord)>> + '_ {
    ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
        .into_records()
        .map(|r| {
            r.map(|rec| (rec.position().map_or(0, |p| p.line()), rec))
                .map_err(|e| Error::Parse {
                    line: e.position().map_or(0, |p| p.line()),
                    message: e.to_string(),
                })
        })
}

fn parse_value(line: u64, field: &str) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        message: format!("'{field}' is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("'{field}' is not finite"),
        });
    }
    Ok(v)
}

fn expect_fields(line: u64, rec: &StringRecord, n: usize) -> Result<()> {
    if rec.len() != n {
        return Err(Error::Parse {
            line,
            message: format!("expected {n} field(s), found {}", rec.len()),
        });
    }
    Ok(())
}

/// One finite real per line.
pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    records(text)
        .map(|r| {
            let (line, rec) = r?;
            expect_fields(line, &rec, 1)?;
            parse_value(line, &rec[0])
        })
        .collect()
}

/// `value,label` per line with labels `0` or `1`.
pub fn parse_labeled(text: &str) -> Result<LabeledValues> {
    let mut out = LabeledValues {
        class0: Vec::new(),
        class1: Vec::new(),
    };
    for r in records(text) {
        let (line, rec) = r?;
        expect_fields(line, &rec, 2)?;
        let v = parse_value(line, &rec[0])?;
        match &rec[1] {
            "0" => out.class0.push(v),
            "1" => out.class1.push(v),
            other => {
                return Err(Error::Parse {
                    line,
                    message: format!("label '{other}' must be 0 or 1"),
                })
            }
        }
    }
    Ok(out)
}

/// Picks the format from the first data line.
pub fn parse_sample_text(text: &str) -> Result<SampleInput> {
    match records(text).next() {
        Some(Ok((_, rec))) if rec.len() == 2 => parse_labeled(text).map(SampleInput::Labeled),
        _ => parse_values(text).map(SampleInput::Single),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_with_comments_and_blanks() {
        let text = "# header\n1.5\n\n  -2 \n# note\n3e2\n";
        assert_eq!(parse_values(text).unwrap(), vec![1.5, -2.0, 300.0]);
        assert_eq!(parse_values("").unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_values("1\n2\nabc\n") {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("abc"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_values("1\nNaN\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_values("1\ninf\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_values("1,2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn labeled_rows() {
        let l = parse_labeled("1,0\n2, 1\n# x\n3,0\n4,1\n").unwrap();
        assert_eq!(l.class0, vec![1.0, 3.0]);
        assert_eq!(l.class1, vec![2.0, 4.0]);
        assert!(matches!(
            parse_labeled("1,0\n2,2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_labeled("1\n").is_err());
    }

    #[test]
    fn format_detection() {
        assert!(matches!(
            parse_sample_text("# c\n1\n2\n").unwrap(),
            SampleInput::Single(v) if v == vec![1.0, 2.0]
        ));
        assert!(matches!(
            parse_sample_text("1,1\n2,0\n").unwrap(),
            SampleInput::Labeled(_)
        ));
    }
}
