//! Lattice files, exact fractions and sector specifications.
//!
//! A lattice file is a JSON object with a `"gram"` key holding the integer
//! Gram matrix and an optional `"name"`:
//!
//! ```json
//! {"name": "A1", "gram": [[2]]}
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use latvoa_core::{EvenLattice, Frac, LatticeError, Sector};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("{path}: cannot read file: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: {message} (line: `{context}`)")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        context: String,
        message: String,
    },
    #[error("{path}:{line}: {message} (line: `{context}`)")]
    Invalid {
        path: String,
        line: usize,
        context: String,
        message: String,
    },
    #[error("invalid {what} `{value}`: {message}")]
    Argument {
        what: &'static str,
        value: String,
        message: String,
    },
}

impl InputError {
    pub fn argument(
        what: &'static str,
        value: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        InputError::Argument {
            what,
            value: value.into(),
            message: message.into(),
        }
    }

    /// Short machine-readable kind, used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io { .. } => "io",
            InputError::Syntax { .. } => "syntax",
            InputError::Invalid { .. } => "invalid-lattice",
            InputError::Argument { .. } => "invalid-argument",
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LatticeFile {
    #[serde(default)]
    name: Option<String>,
    gram: Vec<Vec<i64>>,
}

/// A lattice together with the name used for it in reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedLattice {
    pub name: String,
    pub lattice: EvenLattice,
}

fn line_text(text: &str, line: usize) -> String {
    text.lines()
        .nth(line.saturating_sub(1))
        .unwrap_or("")
        .trim()
        .to_string()
}

/// 1-based line of the start of row `row` of the `"gram"` array, or of the
/// `"gram"` key itself when the row cannot be located.
fn gram_row_line(text: &str, row: Option<usize>) -> usize {
    let Some(key) = text.find("\"gram\"") else {
        return 1;
    };
    let line_at = |offset: usize| text[..offset].matches('\n').count() + 1;
    let Some(row) = row else {
        return line_at(key);
    };
    let mut depth = 0usize;
    let mut seen = 0usize;
    for (i, ch) in text[key..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == row {
                        return line_at(key + i);
                    }
                    seen += 1;
                }
            }
            ']' => {
                if depth <= 1 {
                    break;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    line_at(key)
}

/// Parses lattice JSON; `origin` names the source in error messages.
pub fn parse_lattice_str(text: &str, origin: &str) -> Result<NamedLattice, InputError> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| InputError::Syntax {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        context: line_text(text, e.line()),
        message: e.to_string(),
    })?;
    let lattice = EvenLattice::new(file.gram).map_err(|e| {
        let row = match &e {
            LatticeError::NotSymmetric { row, .. } => Some(*row),
            LatticeError::NotEven { index, .. } => Some(*index),
            _ => None,
        };
        let line = gram_row_line(text, row);
        InputError::Invalid {
            path: origin.to_string(),
            line,
            context: line_text(text, line),
            message: e.to_string(),
        }
    })?;
    let name = file.name.unwrap_or_else(|| {
        Path::new(origin)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| origin.to_string())
    });
    Ok(NamedLattice { name, lattice })
}

pub fn parse_lattice_file(path: &Path) -> Result<NamedLattice, InputError> {
    let origin = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| InputError::Io {
        path: origin.clone(),
        message: e.to_string(),
    })?;
    parse_lattice_str(&text, &origin)
}

/// Exact rational such as `4`, `-1/2` or `7/3`.
pub fn parse_fraction(s: &str) -> Result<Frac, InputError> {
    s.trim()
        .parse::<Frac>()
        .map_err(|e| InputError::argument("fraction", s, e.to_string()))
}

pub fn format_fraction(r: Frac) -> String {
    r.to_string()
}

/// Which sectors a window covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectorSpec {
    /// Every sector `γ + λ` with `λ ∈ L` and `|λ_i| <= R`, for each coset `γ`.
    Radius(i64),
    /// Explicit sectors; for tensor products the coordinates of all factors
    /// are concatenated.
    List(Vec<Vec<Frac>>),
}

impl FromStr for SectorSpec {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, InputError> {
        let bad = |msg: &str| InputError::argument("sector spec", s, msg);
        let t = s.trim();
        if let Some(r) = t.strip_prefix("radius:") {
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| bad("radius must be a nonnegative integer"))?;
            if r < 0 {
                return Err(bad("radius must be a nonnegative integer"));
            }
            return Ok(SectorSpec::Radius(r));
        }
        let mut sectors = Vec::new();
        for part in t.split(';') {
            let coords = part
                .split(',')
                .map(parse_fraction)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| bad("expected `radius:R` or coordinates like `0,1;1,-1/2`"))?;
            sectors.push(coords);
        }
        let rank = sectors[0].len();
        if sectors.iter().any(|c| c.len() != rank) {
            return Err(bad("all sectors must have the same number of coordinates"));
        }
        Ok(SectorSpec::List(sectors))
    }
}

impl fmt::Display for SectorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorSpec::Radius(r) => write!(f, "radius:{r}"),
            SectorSpec::List(list) => {
                let parts: Vec<String> = list
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

impl SectorSpec {
    /// Explicit sectors of total rank `rank`, or an error naming the mismatch.
    pub fn sectors(&self, rank: usize) -> Result<Option<Vec<Sector>>, InputError> {
        match self {
            SectorSpec::Radius(_) => Ok(None),
            SectorSpec::List(list) => {
                if list[0].len() != rank {
                    return Err(InputError::argument(
                        "sector spec",
                        self.to_string(),
                        format!("sectors need {rank} coordinates"),
                    ));
                }
                Ok(Some(list.iter().map(|c| Sector(c.clone())).collect()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_files() {
        let a = parse_lattice_str(r#"{"gram": [[2]]}"#, "a1.json").unwrap();
        assert_eq!(a.lattice.rank(), 1);
        assert_eq!(a.name, "a1");
        let h = parse_lattice_str(r#"{"name": "II11", "gram": [[0,1],[1,0]]}"#, "x").unwrap();
        assert_eq!(h.lattice.det(), -1);
        assert_eq!(h.name, "II11");
    }

    #[test]
    fn odd_lattice_is_rejected_with_line() {
        let text = "{\n  \"gram\": [\n    [2, 0],\n    [0, 1]\n  ]\n}\n";
        match parse_lattice_str(text, "odd.json") {
            Err(InputError::Invalid { line, context, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(context, "[0, 1]");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_lattice_str(r#"{"gram": [[1]]}"#, "x"),
            Err(InputError::Invalid { line: 1, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"gram\": [[2],\n}\n";
        match parse_lattice_str(text, "broken.json") {
            Err(InputError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_lattice_str(r#"{"gram": [[2]], "extra": 1}"#, "x"),
            Err(InputError::Syntax { .. })
        ));
    }

    #[test]
    fn fractions_and_specs() {
        assert_eq!(parse_fraction(" 7/2 ").unwrap(), Frac::new(7, 2));
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("0.5").is_err());
        assert_eq!(
            "radius:2".parse::<SectorSpec>().unwrap(),
            SectorSpec::Radius(2)
        );
        let s: SectorSpec = "0,1;1,-1/2".parse().unwrap();
        assert_eq!(s.to_string(), "0,1;1,-1/2");
        assert!(s.sectors(2).unwrap().is_some());
        assert!(s.sectors(1).is_err());
        assert!("radius:-1".parse::<SectorSpec>().is_err());
        assert!("1;2,3".parse::<SectorSpec>().is_err());
    }
}
