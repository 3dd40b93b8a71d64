use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `f = 0` in affine space, decided by the polynomial criteria.
    Hypersurface,
    /// `z^2 + g = 0` with `g` in `x, y`, decided by local cohomology.
    Doublecover,
}

/// One input line of a batch catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub name: String,
    pub p: u64,
    pub kind: Kind,
    /// `f` for hypersurfaces, `g` for double covers.
    pub poly: String,
    #[serde(default)]
    pub tags: Vec<String>,
}

/// Parses JSON Lines, skipping blank lines. Any malformed line fails the
/// whole catalog.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Catalog {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let text = r#"{"name":"E6","p":3,"kind":"doublecover","poly":"x^3 + y^4","tags":["rdp"]}

{"name":"cubic","p":5,"kind":"hypersurface","poly":"x^3+y^3+z^3"}"#;
        let entries = parse_catalog(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[1].kind, Kind::Hypersurface);
        assert!(entries[1].tags.is_empty());
        assert!(matches!(
            parse_catalog("{\"name\": 1}"),
            Err(CliError::Catalog { line: 1, .. })
        ));
        assert!(parse_catalog("").unwrap().is_empty());
    }
}
