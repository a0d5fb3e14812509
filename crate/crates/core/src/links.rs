//! Link tables: braid-closure presentations with optional Seifert matrices.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::cover::SeifertMatrix;
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../data/links.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkEntry {
    pub name: String,
    pub strands: usize,
    pub word: Vec<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seifert: Option<SeifertMatrix>,
}

impl LinkEntry {
    pub fn braid(&self) -> Result<BraidWord> {
        BraidWord::new(self.strands, self.word.clone())
    }
}

/// The table shipped with the crate: unknot, trefoil, figure-eight, Hopf
/// link, 5₁, 5₂ and 6₁.
pub fn bundled_link_table() -> Vec<LinkEntry> {
    parse_link_table(BUNDLED, "<bundled>").expect("bundled link table is valid")
}

pub fn parse_link_table(text: &str, path: &str) -> Result<Vec<LinkEntry>> {
    let entries: Vec<LinkEntry> =
        serde_json::from_str(text).map_err(|source| Error::Json { path: path.to_string(), source })?;
    for e in &entries {
        e.braid()?;
    }
    Ok(entries)
}

pub fn load_link_table(path: impl AsRef<Path>) -> Result<Vec<LinkEntry>> {
    let path = path.as_ref();
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: shown.clone(), source })?;
    parse_link_table(&text, &shown)
}
