//! The JSON interchange files and the plain-text axiom format.
//!
//! Subsets are serialized as label arrays in ground order. A family/choice
//! file looks like
//!
//! ```json
//! { "format": 1,
//!   "ground": ["a", "b", "c"],
//!   "family": { "U": ["a", "c"] },
//!   "choice": { "U": ["a"] } }
//! ```
//!
//! a structure file like
//!
//! ```json
//! { "format": 1,
//!   "ground": ["a", "b"],
//!   "copies": [["a", 0], ["a", 1], ["b", 0]],
//!   "relation": [[["a", 0], ["b", 0]]] }
//! ```
//!
//! (`copies` defaults to one copy per element; relation pairs are
//! `[below, above]`). Sequent axiom files carry one sequent per line,
//! `a b |~ c d`, blank lines and `#` comments ignored.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use mulab_core::plausibility::{PlLanguage, PlModelStructure, Sequent};
use mulab_core::preferential::{Copy, PreferentialStructure};
use mulab_core::sets::{ChoiceFunction, GroundSet, Mask, SetFamily};

pub const FORMAT_VERSION: u32 = 1;

fn default_format() -> u32 {
    FORMAT_VERSION
}

/// Family (and optional choice table) over a ground set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub ground: Vec<String>,
    pub family: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<BTreeMap<String, Vec<String>>>,
}

/// Preferential structure, optionally bundled with a family and choice
/// table (the `construct` output).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub ground: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<(String, u32)>>,
    pub relation: Vec<((String, u32), (String, u32))>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<BTreeMap<String, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub choice: Option<BTreeMap<String, Vec<String>>>,
}

/// Preferential structure over atom-set models; copies and relation address
/// models by position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlStructureFile {
    #[serde(default = "default_format")]
    pub format: u32,
    pub atoms: Vec<String>,
    pub models: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copies: Option<Vec<(usize, u32)>>,
    pub relation: Vec<((usize, u32), (usize, u32))>,
}

pub fn ground_from_labels(labels: &[String]) -> Result<GroundSet> {
    GroundSet::new(labels.iter().cloned()).map_err(|e| anyhow!("{e}"))
}

fn mask_of(ground: &GroundSet, labels: &[String]) -> Result<Mask> {
    ground
        .mask_of(labels.iter().map(|s| s.as_str()))
        .map_err(|e| anyhow!("{e}"))
}

pub fn family_from_file(file: &FamilyFile) -> Result<SetFamily> {
    let ground = ground_from_labels(&file.ground)?;
    let mut entries = Vec::new();
    for (name, labels) in &file.family {
        entries.push((name.clone(), mask_of(&ground, labels)?));
    }
    SetFamily::new(ground, entries).map_err(|e| anyhow!("{e}"))
}

pub fn choice_from_file(file: &FamilyFile) -> Result<ChoiceFunction> {
    let family = family_from_file(file)?;
    let table = file
        .choice
        .as_ref()
        .ok_or_else(|| anyhow!("file carries no choice table"))?;
    let ground = family.ground().clone();
    let mut entries = Vec::new();
    for (name, labels) in table {
        let member = family
            .mask_by_name(name)
            .ok_or_else(|| anyhow!("choice entry {name:?} is not a family member"))?;
        entries.push((member, mask_of(&ground, labels)?));
    }
    ChoiceFunction::new(family, &entries).map_err(|e| anyhow!("{e}"))
}

fn subset_labels(ground: &GroundSet, m: Mask) -> Vec<String> {
    ground.labels_of(m).into_iter().map(String::from).collect()
}

pub fn family_to_map(family: &SetFamily) -> BTreeMap<String, Vec<String>> {
    family
        .names()
        .iter()
        .zip(family.members())
        .map(|(n, &m)| (n.clone(), subset_labels(family.ground(), m)))
        .collect()
}

pub fn choice_to_map(choice: &ChoiceFunction) -> BTreeMap<String, Vec<String>> {
    let family = choice.family();
    family
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), subset_labels(family.ground(), choice.value_at(i))))
        .collect()
}

pub fn structure_from_file(file: &StructureFile) -> Result<PreferentialStructure> {
    let ground = ground_from_labels(&file.ground)?;
    let copy_of = |(label, index): &(String, u32)| -> Result<Copy> {
        let element = ground
            .index_of(label)
            .ok_or_else(|| anyhow!("unknown ground label {label:?}"))?;
        Ok(Copy { element, index: *index })
    };
    let copies: Vec<Copy> = match &file.copies {
        Some(cs) => cs.iter().map(|c| copy_of(c)).collect::<Result<_>>()?,
        None => (0..ground.len()).map(|element| Copy { element, index: 0 }).collect(),
    };
    let mut relation = Vec::new();
    for (lo, hi) in &file.relation {
        relation.push((copy_of(lo)?, copy_of(hi)?));
    }
    PreferentialStructure::new(ground, copies, &relation).map_err(|e| anyhow!("{e}"))
}

pub fn structure_to_file(s: &PreferentialStructure) -> StructureFile {
    let ground = s.ground();
    StructureFile {
        format: FORMAT_VERSION,
        ground: ground.labels().to_vec(),
        copies: Some(
            s.copies()
                .iter()
                .map(|c| (ground.label(c.element).to_string(), c.index))
                .collect(),
        ),
        relation: s
            .edges()
            .map(|(lo, hi)| {
                (
                    (ground.label(lo.element).to_string(), lo.index),
                    (ground.label(hi.element).to_string(), hi.index),
                )
            })
            .collect(),
        family: None,
        choice: None,
    }
}

/// Family bundled inside a structure file, when present.
pub fn bundled_family(file: &StructureFile) -> Result<Option<SetFamily>> {
    match &file.family {
        None => Ok(None),
        Some(members) => {
            let as_family = FamilyFile {
                format: file.format,
                ground: file.ground.clone(),
                family: members.clone(),
                choice: None,
            };
            family_from_file(&as_family).map(Some)
        }
    }
}

pub fn pl_structure_from_file(file: &PlStructureFile) -> Result<PlModelStructure> {
    let lang = PlLanguage::new(file.atoms.iter().cloned()).map_err(|e| anyhow!("{e}"))?;
    let mut models = Vec::new();
    for m in &file.models {
        models.push(lang.atom_set(m.iter().map(|s| s.as_str())).map_err(|e| anyhow!("{e}"))?);
    }
    let copies: Vec<Copy> = match &file.copies {
        Some(cs) => cs
            .iter()
            .map(|&(element, index)| Copy { element, index })
            .collect(),
        None => (0..models.len()).map(|element| Copy { element, index: 0 }).collect(),
    };
    let relation: Vec<(Copy, Copy)> = file
        .relation
        .iter()
        .map(|&((le, li), (he, hi))| {
            (Copy { element: le, index: li }, Copy { element: he, index: hi })
        })
        .collect();
    PlModelStructure::new(lang, models, copies, &relation).map_err(|e| anyhow!("{e}"))
}

/// Sequents from `a b |~ c d` lines; returns the sequents and the atom
/// list, either as given or in order of first appearance.
pub fn parse_axioms(text: &str, atoms: Option<&[String]>) -> Result<(PlLanguage, Vec<Sequent>)> {
    let mut seen: Vec<String> = atoms.map(|a| a.to_vec()).unwrap_or_default();
    let fixed = atoms.is_some();
    let mut raw: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (left, right) = line
            .split_once("|~")
            .with_context(|| format!("line {}: expected `left |~ right`", lineno + 1))?;
        let parse_side = |side: &str| -> Vec<String> {
            side.split_whitespace().map(String::from).collect()
        };
        let (l, r) = (parse_side(left), parse_side(right));
        for a in l.iter().chain(&r) {
            if !seen.contains(a) {
                if fixed {
                    bail!("line {}: atom {a:?} not in the declared atom list", lineno + 1);
                }
                seen.push(a.clone());
            }
        }
        raw.push((l, r));
    }
    let lang = PlLanguage::new(seen).map_err(|e| anyhow!("{e}"))?;
    let mut sequents = Vec::new();
    for (l, r) in raw {
        sequents.push(Sequent {
            left: lang.atom_set(l.iter().map(|s| s.as_str())).map_err(|e| anyhow!("{e}"))?,
            right: lang.atom_set(r.iter().map(|s| s.as_str())).map_err(|e| anyhow!("{e}"))?,
        });
    }
    Ok((lang, sequents))
}

/// A single `a b |~ c d` query against an existing language.
pub fn parse_query(lang: &PlLanguage, text: &str) -> Result<Sequent> {
    let (left, right) =
        text.split_once("|~").ok_or_else(|| anyhow!("query must contain `|~`"))?;
    let set = |side: &str| -> Result<u16> {
        lang.atom_set(side.split_whitespace()).map_err(|e| anyhow!("{e}"))
    };
    Ok(Sequent { left: set(left)?, right: set(right)? })
}

/// Render a sequent back in the axiom-file syntax.
pub fn sequent_to_text(lang: &PlLanguage, s: Sequent) -> String {
    format!("{} |~ {}", lang.labels_of(s.left).join(" "), lang.labels_of(s.right).join(" "))
}
