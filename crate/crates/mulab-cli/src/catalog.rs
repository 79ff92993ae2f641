//! The implication catalog: row ids mapped to premises, side constraints
//! and conclusions. The default catalog is embedded from `data/catalog.json`
//! and can be overridden with `--catalog`.

use anyhow::{anyhow, Context, Result};
use serde::Deserialize;

use mulab_core::conditions::ConditionId;
use mulab_core::search::{Expectation, FamilyConstraint, ImplicationQuery, Origin};

pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.json");

#[derive(Debug, Deserialize)]
struct RawCatalog {
    format: u32,
    rows: Vec<RawRow>,
}

#[derive(Debug, Deserialize)]
struct RawRow {
    id: String,
    premises: Vec<String>,
    #[serde(default)]
    constraints: Vec<String>,
    #[serde(default)]
    origin: Option<String>,
    conclusion: String,
    expected: String,
    #[serde(default)]
    note: Option<String>,
}

/// A catalog row: the query plus its enumeration origin and display note.
#[derive(Debug, Clone)]
pub struct CatalogRow {
    pub query: ImplicationQuery,
    pub origin: Origin,
    pub note: Option<String>,
}

/// Parse `mu-cum(2)`-style condition names.
pub fn parse_condition(text: &str) -> Result<ConditionId> {
    let (tag, alpha) = match text.split_once('(') {
        Some((tag, rest)) => {
            let digits = rest
                .strip_suffix(')')
                .ok_or_else(|| anyhow!("malformed condition {text:?}"))?;
            (tag, Some(digits.parse::<u32>().context("condition parameter")?))
        }
        None => (text, None),
    };
    ConditionId::parse(tag, alpha).ok_or_else(|| anyhow!("unknown condition {text:?}"))
}

pub fn parse_catalog(text: &str) -> Result<Vec<CatalogRow>> {
    let raw: RawCatalog = serde_json::from_str(text).context("catalog JSON")?;
    if raw.format != crate::formats::FORMAT_VERSION {
        return Err(anyhow!("unsupported catalog format {}", raw.format));
    }
    let mut rows = Vec::with_capacity(raw.rows.len());
    for r in raw.rows {
        let premises = r
            .premises
            .iter()
            .map(|p| parse_condition(p))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("row {}", r.id))?;
        let constraints = r
            .constraints
            .iter()
            .map(|c| {
                FamilyConstraint::parse(c).ok_or_else(|| anyhow!("unknown constraint {c:?}"))
            })
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("row {}", r.id))?;
        let origin = match &r.origin {
            None => Origin::ArbitraryChoice,
            Some(o) => Origin::parse(o).ok_or_else(|| anyhow!("unknown origin {o:?}"))?,
        };
        let expected = Expectation::parse(&r.expected)
            .ok_or_else(|| anyhow!("unknown expectation {:?} in row {}", r.expected, r.id))?;
        rows.push(CatalogRow {
            query: ImplicationQuery {
                id: r.id,
                premises,
                constraints,
                conclusion: parse_condition(&r.conclusion)?,
                expected,
            },
            origin,
            note: r.note,
        });
    }
    Ok(rows)
}

pub fn default_catalog() -> Vec<CatalogRow> {
    parse_catalog(DEFAULT_CATALOG).expect("embedded catalog is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_catalog_parses_and_ids_are_unique() {
        let rows = default_catalog();
        assert!(rows.len() >= 40);
        for (i, r) in rows.iter().enumerate() {
            assert!(
                rows[..i].iter().all(|s| s.query.id != r.query.id),
                "duplicate id {}",
                r.query.id
            );
        }
    }

    #[test]
    fn parameterized_conditions_round_trip() {
        assert_eq!(
            parse_condition("mu-cum(3)").unwrap(),
            ConditionId::CumAlpha(3)
        );
        assert_eq!(parse_condition("mu-CUM").unwrap(), ConditionId::Cum);
        assert!(parse_condition("mu-cum").is_err());
        assert!(parse_condition("nonsense").is_err());
    }
}
