//! Optional defaults from `phk.toml` in the working directory.
//!
//! ```toml
//! [segment]
//! commas = "candidate"
//! conj = "lexicon.txt"
//!
//! [validate]
//! strict = false
//! format = "text"
//!
//! [stats]
//! format = "table"
//!
//! [agree]
//! match = "exact"
//! normalize_rai = false
//! format = "table"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{Commas, Match, ReportFormat, TableFormat};

pub const CONFIG_FILE: &str = "phk.toml";

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub segment: SegmentConfig,
    pub validate: ValidateConfig,
    pub stats: StatsConfig,
    pub agree: AgreeConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmentConfig {
    pub commas: Option<Commas>,
    pub conj: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    pub strict: bool,
    pub format: Option<ReportFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsConfig {
    pub format: Option<TableFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgreeConfig {
    #[serde(rename = "match")]
    pub criterion: Option<Match>,
    pub normalize_rai: bool,
    pub format: Option<TableFormat>,
}

/// Missing file means defaults; an unreadable or invalid one is an error.
pub fn load(dir: &Path) -> Result<Config, String> {
    let path = dir.join(CONFIG_FILE);
    if !path.exists() {
        return Ok(Config::default());
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
