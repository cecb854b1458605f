use std::io::Read;

use chainpoly::exact::{self, RatStr};
use chainpoly::families::{family_matrix, FamilyKind, FamilySpec};
use chainpoly::{LowerTriMatrix, Polynomial, Rational};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::report::CliError;

/// A JSON document together with where it came from.
pub struct Doc {
    pub label: String,
    pub value: Value,
}

/// Reads every `--input` path (`-` is stdin) and every inline `--json` string, in that order.
pub fn load(paths: &[String], inline: &[String]) -> Result<Vec<Doc>, CliError> {
    let mut docs = Vec::new();
    for path in paths {
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
        };
        docs.push(parse_doc(path.clone(), &text)?);
    }
    for (i, text) in inline.iter().enumerate() {
        docs.push(parse_doc(format!("inline[{i}]"), text)?);
    }
    Ok(docs)
}

fn parse_doc(label: String, text: &str) -> Result<Doc, CliError> {
    let value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON in {label}: {e}")))?;
    Ok(Doc { label, value })
}

/// Exactly one document, for subcommands that act on a single object.
pub fn single(docs: Vec<Doc>, what: &str) -> Result<Doc, CliError> {
    let mut docs = docs;
    match docs.len() {
        1 => Ok(docs.pop().unwrap()),
        0 => Err(CliError::Input(format!("no {what} given; use --input or --json"))),
        n => Err(CliError::Input(format!("expected one {what}, got {n}"))),
    }
}

pub fn typed<T: DeserializeOwned>(doc: &Doc, what: &str) -> Result<T, CliError> {
    serde_json::from_value(doc.value.clone()).map_err(|e| CliError::Input(format!("invalid {what} in {}: {e}", doc.label)))
}

/// Accepts `{"N": .., "rows": ..}` or a bare array of rows whose entries are
/// integers or `"p/q"` strings.
pub fn matrix(doc: &Doc) -> Result<LowerTriMatrix, CliError> {
    if doc.value.is_array() {
        let rows: Vec<Vec<RatStr>> = typed(doc, "matrix rows")?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
        return LowerTriMatrix::from_rows(rows).map_err(|e| CliError::Input(format!("invalid matrix in {}: {e}", doc.label)));
    }
    typed(doc, "matrix")
}

/// Matrices named by `--family`/`--n` or read from the JSON inputs, each
/// truncated to `--n` when given.
pub fn matrices(
    docs: Vec<Doc>,
    family: Option<&FamilyKind>,
    order: Option<usize>,
) -> Result<Vec<(String, LowerTriMatrix)>, CliError> {
    if let Some(kind) = family {
        if !docs.is_empty() {
            return Err(CliError::Input("give either --family or matrix input, not both".into()));
        }
        let n = order.ok_or_else(|| CliError::Input("--family needs --n".into()))?;
        let spec = FamilySpec::new(kind.clone(), n)?;
        return Ok(vec![(kind.to_string(), family_matrix(&spec))]);
    }
    if docs.is_empty() {
        return Err(CliError::Input("no matrix given; use --family with --n, --input or --json".into()));
    }
    docs.iter()
        .map(|d| {
            let m = matrix(d)?;
            let m = match order {
                Some(n) => m.truncate(n)?,
                None => m,
            };
            Ok((d.label.clone(), m))
        })
        .collect()
}

pub fn single_matrix(
    docs: Vec<Doc>,
    family: Option<&FamilyKind>,
    order: Option<usize>,
) -> Result<LowerTriMatrix, CliError> {
    let mut all = matrices(docs, family, order)?;
    if all.len() != 1 {
        return Err(CliError::Input(format!("expected one matrix, got {}", all.len())));
    }
    Ok(all.pop().unwrap().1)
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    exact::parse(s).map_err(|e| e.to_string())
}

/// Ascending coefficients, comma separated; the empty string is zero.
pub fn parse_poly(s: &str) -> Result<Polynomial, String> {
    if s.trim().is_empty() {
        return Ok(Polynomial::zero());
    }
    s.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map(Polynomial::new)
}
