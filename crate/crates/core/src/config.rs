//! Quiver configuration files.
//!
//! ```toml
//! name = "A3"
//! vertex_count = 3
//! arrows = [[1, 2], [2, 3]]   # 1-based (source, target)
//! p = 2
//! ```
//!
//! Besides files, a few quivers are known by name: `A1` through `A9`
//! (linearly oriented), `D4` (three arrows into vertex 1) and `E6`.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::heart::{Heart, Limits};
use crate::quiver::Quiver;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverConfig {
    pub name: String,
    pub vertex_count: usize,
    #[serde(default)]
    pub arrows: Vec<(usize, usize)>,
    #[serde(default = "default_p")]
    pub p: u32,
}

fn default_p() -> u32 {
    2
}

impl QuiverConfig {
    /// Parses TOML text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let cfg: QuiverConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
        cfg.validate(origin)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn builtin(name: &str) -> Option<Self> {
        let arrows = match name {
            "D4" => vec![(2, 1), (3, 1), (4, 1)],
            "E6" => vec![(1, 2), (2, 3), (3, 4), (4, 5), (6, 3)],
            _ => {
                let n: usize = name.strip_prefix('A')?.parse().ok()?;
                if !(1..=9).contains(&n) {
                    return None;
                }
                (1..n).map(|i| (i, i + 1)).collect()
            }
        };
        let vertex_count = arrows.iter().flat_map(|&(s, t)| [s, t]).max().unwrap_or(1);
        Some(QuiverConfig {
            name: name.into(),
            vertex_count,
            arrows,
            p: default_p(),
        })
    }

    /// A builtin name, or else a path to a config file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        let path = Path::new(name_or_path);
        if !path.exists() {
            if let Some(cfg) = Self::builtin(name_or_path) {
                return Ok(cfg);
            }
        }
        Self::load(path)
    }

    fn validate(&self, origin: &str) -> Result<()> {
        if self.vertex_count == 0 {
            return Err(Error::Parse(format!("{origin}: vertex_count must be positive")));
        }
        for (i, &(s, t)) in self.arrows.iter().enumerate() {
            for v in [s, t] {
                if v == 0 || v > self.vertex_count {
                    return Err(Error::Parse(format!(
                        "{origin}: arrows[{i}] = [{s}, {t}]: vertex {v} outside 1..={}",
                        self.vertex_count
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn quiver(&self) -> Result<Quiver> {
        Quiver::new(self.vertex_count, self.arrows.iter().map(|&(s, t)| (s - 1, t - 1)).collect())
    }

    /// Builds the heart over `F_p`, with `p_override` taking precedence over the file.
    pub fn heart(&self, p_override: Option<u32>, limits: Limits) -> Result<Heart> {
        let field = PrimeField::new(p_override.unwrap_or(self.p))?;
        Heart::new(self.name.clone(), self.quiver()?, field, limits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_file() {
        let cfg = QuiverConfig::parse("name = \"A2\"\nvertex_count = 2\narrows = [[1, 2]]\np = 3\n", "t").unwrap();
        assert_eq!(cfg.arrows, vec![(1, 2)]);
        let h = cfg.heart(None, Limits::default()).unwrap();
        assert_eq!(h.p(), 3);
        assert_eq!(h.indecomposables().len(), 3);
    }

    #[test]
    fn errors_are_located() {
        let err = QuiverConfig::parse("name = \"Q\"\nvertex_count = 2\narrows = [[1, 3]]\n", "q.toml").unwrap_err();
        assert!(err.to_string().contains("arrows[0]"), "{err}");
        let err = QuiverConfig::parse("name = \"Q\"\nvertex_count = two\n", "q.toml").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(QuiverConfig::parse("name = \"Q\"\nvertex_count = 1\ncolour = 1\n", "q").is_err());
    }

    #[test]
    fn rejects_bad_quivers() {
        let kronecker = QuiverConfig::parse("name = \"K\"\nvertex_count = 2\narrows = [[1, 2], [1, 2]]\n", "k").unwrap();
        assert!(matches!(kronecker.heart(None, Limits::default()), Err(Error::NotFiniteType(_))));
        let cfg = QuiverConfig::builtin("A2").unwrap();
        assert!(cfg.heart(Some(4), Limits::default()).is_err());
        assert!(cfg.heart(Some(17), Limits::default()).is_err());
    }

    #[test]
    fn builtins() {
        assert_eq!(QuiverConfig::builtin("A3").unwrap().arrows, vec![(1, 2), (2, 3)]);
        assert_eq!(QuiverConfig::builtin("D4").unwrap().vertex_count, 4);
        assert!(QuiverConfig::builtin("B2").is_none());
        assert!(QuiverConfig::builtin("A0").is_none());
    }
}
