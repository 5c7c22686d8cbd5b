//! Plain-text generator dumps.
//!
//! ```text
//! field prime:7
//! modulus 3,1,0,0,1
//! (1,0,0,0) (0,1,0,0) (0,0,0,0)
//! (0,0,0,0) (1,0,0,0) (0,1,0,0)
//! ```
//!
//! The `field` line names the base field, the `modulus` line the extension
//! modulus (constant term first), and each following non-empty line is one
//! matrix row of extension elements written as coefficient tuples. Lines
//! starting with `#` are comments.

use crate::field::{BaseField, ExtElem, ExtField, FieldError, Matrix};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DumpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn write_matrix_text(field: &ExtField, matrix: &Matrix<ExtElem>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field {}", field.base());
    let _ = writeln!(out, "modulus {}", field.modulus_string());
    for i in 0..matrix.rows() {
        let row: Vec<String> = matrix.row(i).iter().map(|e| format!("{e:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_matrix_text(text: &str) -> Result<(ExtField, Matrix<ExtElem>), DumpError> {
    let mut base: Option<BaseField> = None;
    let mut field: Option<ExtField> = None;
    let mut rows: Vec<Vec<ExtElem>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let at = lineno + 1;
        let syntax = |msg: String| DumpError::Syntax { line: at, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("field ") {
            base = Some(rest.trim().parse()?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("modulus ") {
            let b = base.clone().ok_or_else(|| syntax("modulus before field".into()))?;
            field = Some(ExtField::new(b, ExtField::parse_modulus(rest)?)?);
            continue;
        }
        let f = field.as_ref().ok_or_else(|| syntax("matrix row before field/modulus header".into()))?;
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            let inner = tok
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| syntax(format!("expected (c0,...,c_e-1), got {tok:?}")))?;
            let coeffs = inner
                .split(',')
                .map(|c| c.trim().parse::<u32>().map_err(|_| syntax(format!("bad coefficient {c:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            row.push(f.elem(coeffs).map_err(|e| syntax(e.to_string()))?);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(syntax(format!("row has {} entries, expected {}", row.len(), first.len())));
            }
        }
        rows.push(row);
    }
    let field = field.ok_or(DumpError::Syntax { line: 0, msg: "missing field/modulus header".into() })?;
    if rows.is_empty() {
        return Err(DumpError::Syntax { line: 0, msg: "no matrix rows".into() });
    }
    Ok((field, Matrix::from_rows(rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_generator, make_params, AlphaPolicy};

    #[test]
    fn generator_round_trip() {
        let params = make_params(9, 3, 2, 2, BaseField::prime(7).unwrap(), AlphaPolicy::Canonical).unwrap();
        let gm = build_generator(&params).unwrap();
        let text = write_matrix_text(gm.field(), gm.matrix());
        assert!(text.starts_with("field prime:7\nmodulus "));
        let (f, m) = parse_matrix_text(&text).unwrap();
        assert_eq!(&f, gm.field());
        assert_eq!(&m, gm.matrix());
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_matrix_text("(1) (2)"), Err(DumpError::Syntax { line: 1, .. })));
        let bad = "field prime:7\nmodulus 0,1\n(1) (2)\n(1)\n";
        assert!(matches!(parse_matrix_text(bad), Err(DumpError::Syntax { line: 4, .. })));
        let bad = "field prime:7\nmodulus 0,1\n(1,0)\n";
        assert!(matches!(parse_matrix_text(bad), Err(DumpError::Syntax { line: 3, .. })));
        assert!(matches!(parse_matrix_text("field prime:7\nmodulus 0,0,1\n(1,0)"), Err(DumpError::Field(_))));
    }
}
