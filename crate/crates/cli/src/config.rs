//! `--config` files. TOML with one table per subcommand; keys mirror the
//! long flags. Flags given on the command line win over the file.
//!
//! ```toml
//! format = "csv"
//!
//! [dicke]
//! atoms = 60
//! alpha0 = 0.7995
//! tau = "0:pi:200"
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// A number or a string such as `"0.5+0.2i"` or `"pi/2"`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Scalar {
    Num(f64),
    Text(String),
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Num(x) => write!(f, "{x}"),
            Scalar::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<String>,
    pub check: Option<bool>,
    pub squeeze_eval: Option<EvalSection>,
    pub prop1: Option<Prop1Section>,
    pub limit: Option<LimitSection>,
    pub dicke: Option<DickeSection>,
    pub qfunc: Option<QfuncSection>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvalSection {
    pub state: Option<String>,
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Prop1Section {
    pub j_max: Option<Scalar>,
    pub eta_step: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct LimitSection {
    pub alpha2: Option<f64>,
    pub j: Option<Vec<Scalar>>,
    pub parity: Option<String>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DickeSection {
    pub atoms: Option<u32>,
    pub alpha0: Option<Scalar>,
    pub tau: Option<String>,
    pub n_max: Option<usize>,
    pub lambda: Option<f64>,
    pub no_blocks: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct QfuncSection {
    pub atoms: Option<u32>,
    pub alpha0: Option<Scalar>,
    pub tau: Option<String>,
    pub plane: Option<String>,
    pub grid: Option<String>,
    pub n_max: Option<usize>,
}

pub fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Invalid(format!("bad config {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg: FileConfig = toml::from_str(
            r#"
            format = "json"
            [dicke]
            atoms = 30
            alpha0 = "0.8+0.1i"
            tau = "0:pi:10"
            [limit]
            j = [5, "15/2", 10]
            "#,
        )
        .unwrap();
        let d = cfg.dicke.unwrap();
        assert_eq!(d.atoms, Some(30));
        assert_eq!(d.alpha0, Some(Scalar::Text("0.8+0.1i".into())));
        assert_eq!(cfg.limit.unwrap().j.unwrap().len(), 3);
        assert_eq!(cfg.format.as_deref(), Some("json"));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("[dicke]\natom = 3\n").is_err());
    }
}
