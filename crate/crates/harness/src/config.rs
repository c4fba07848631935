use std::fmt;

use crate::error::{HarnessError, Result};

/// Name of the reference configuration.
pub const BASE: &str = "base";

/// One compiler configuration to compare against the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub id: String,
    /// Passed to the compiler when the runner is built for this config.
    pub build_flags: String,
    /// Compiler used instead of the default one.
    pub compiler_override: Option<String>,
}

impl BenchConfig {
    pub fn new(id: &str, build_flags: &str, compiler_override: Option<&str>) -> Result<Self> {
        validate_id(id).map_err(|msg| HarnessError::Config { line: 0, msg })?;
        Ok(Self {
            id: id.to_string(),
            build_flags: build_flags.to_string(),
            compiler_override: compiler_override.map(str::to_string),
        })
    }

    pub fn is_base(&self) -> bool {
        self.id == BASE
    }
}

impl fmt::Display for BenchConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.id, self.build_flags)?;
        if let Some(cc) = &self.compiler_override {
            write!(f, " with {cc}")?;
        }
        Ok(())
    }
}

fn validate_id(id: &str) -> Result<(), String> {
    if id.is_empty() {
        return Err("configuration id is empty".into());
    }
    if id
        .chars()
        .any(|c| c.is_whitespace() || c == '/' || c == '\\')
    {
        return Err(format!(
            "configuration id {id:?} contains whitespace or a path separator"
        ));
    }
    Ok(())
}

/// Unoptimized reference plus the two optimized configurations.
pub fn default_configs() -> Vec<BenchConfig> {
    [
        (BASE, "-C opt-level=0"),
        ("O2", "-C opt-level=2"),
        ("O3", "-C opt-level=3"),
    ]
    .into_iter()
    .map(|(id, flags)| BenchConfig::new(id, flags, None).expect("built-in ids are valid"))
    .collect()
}

/// Parses configuration blocks.
///
/// Every `id = ...` line opens a block; `cflags = ...` and `cc = ...`
/// belong to the most recent block. Blank lines and `#` comments are
/// ignored. Ids must be unique.
pub fn parse_config_file(text: &str) -> Result<Vec<BenchConfig>> {
    let mut out: Vec<BenchConfig> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let err = |msg: String| HarnessError::Config { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "id" => {
                validate_id(value).map_err(err)?;
                if out.iter().any(|c| c.id == value) {
                    return Err(err(format!("configuration {value:?} defined twice")));
                }
                out.push(BenchConfig {
                    id: value.to_string(),
                    build_flags: String::new(),
                    compiler_override: None,
                });
            }
            "cflags" | "cc" => {
                let current = out
                    .last_mut()
                    .ok_or_else(|| err(format!("{key} before any id")))?;
                if key == "cflags" {
                    current.build_flags = value.to_string();
                } else {
                    current.compiler_override = (!value.is_empty()).then(|| value.to_string());
                }
            }
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_blocks() {
        let text = "# reference\nid = base\ncflags = -C opt-level=0\n\nid = fast\ncflags = -C opt-level=3 -C target-cpu=native\ncc = /usr/bin/rustc\n";
        let cfgs = parse_config_file(text).unwrap();
        assert_eq!(cfgs.len(), 2);
        assert!(cfgs[0].is_base());
        assert_eq!(cfgs[1].build_flags, "-C opt-level=3 -C target-cpu=native");
        assert_eq!(cfgs[1].compiler_override.as_deref(), Some("/usr/bin/rustc"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config_file("cflags = x\n").is_err());
        assert!(parse_config_file("id = a b\n").is_err());
        assert!(parse_config_file("id = a\nid = a\n").is_err());
        assert!(parse_config_file("id = a\nspeed = 3\n").is_err());
        assert!(parse_config_file("id a\n").is_err());
        assert!(BenchConfig::new("", "", None).is_err());
    }

    #[test]
    fn defaults_start_with_base() {
        let d = default_configs();
        assert_eq!(d[0].id, BASE);
        assert_eq!(d.len(), 3);
    }
}
