use std::collections::BTreeMap;

use super::{parse_relation, Relation};
use crate::analogy::builtin_models;
use crate::error::{Error, Result};

/// Named relations available to the command line.
///
/// The file format is plain text, one definition per `name = matrix` line.
/// Matrix rows are separated by `;`; a definition may also continue on the
/// following lines (one row per line) until the next definition. `#` starts a
/// comment. Looking up `NAME'` yields the consequent extension of `NAME`.
#[derive(Debug, Clone, Default)]
pub struct Registry {
    entries: BTreeMap<String, Relation>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// A registry holding the five Boolean models `R1`–`R5`.
    pub fn builtin() -> Self {
        let mut reg = Registry::new();
        for m in builtin_models() {
            reg.entries.insert(m.name().to_string(), *m.relation());
        }
        reg
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reg = Registry::new();
        let mut current: Option<(String, usize, String)> = None;
        let flush = |reg: &mut Registry, cur: Option<(String, usize, String)>| -> Result<()> {
            if let Some((name, line, body)) = cur {
                let rel = parse_relation(&body).map_err(|e| match e {
                    Error::ParseRelation { reason, .. } => Error::ParseRelation {
                        line,
                        reason: format!("{name}: {reason}"),
                    },
                    other => other,
                })?;
                reg.entries.insert(name, rel);
            }
            Ok(())
        };
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((name, body)) = line.split_once('=') {
                flush(&mut reg, current.take())?;
                let name = name.trim();
                if name.is_empty()
                    || !name
                        .chars()
                        .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
                {
                    return Err(Error::ParseRelation {
                        line: ln + 1,
                        reason: format!("invalid relation name {name:?}"),
                    });
                }
                current = Some((name.to_string(), ln + 1, body.trim().to_string()));
            } else if let Some((_, _, body)) = current.as_mut() {
                body.push('\n');
                body.push_str(line);
            } else {
                return Err(Error::ParseRelation {
                    line: ln + 1,
                    reason: "matrix row outside of a definition".into(),
                });
            }
        }
        flush(&mut reg, current)?;
        Ok(reg)
    }

    /// Builtins overlaid with the definitions in `text`.
    pub fn with_user_definitions(text: &str) -> Result<Self> {
        let mut reg = Registry::builtin();
        reg.entries.extend(Registry::parse(text)?.entries);
        Ok(reg)
    }

    pub fn insert(&mut self, name: impl Into<String>, relation: Relation) {
        self.entries.insert(name.into(), relation);
    }

    pub fn get(&self, name: &str) -> Result<Relation> {
        if let Some(r) = self.entries.get(name) {
            return Ok(*r);
        }
        if let Some(base) = name.strip_suffix('\'').or_else(|| name.strip_suffix('′')) {
            if let Some(r) = self.entries.get(base) {
                return r.extend_consequent();
            }
        }
        Err(Error::UnknownRelation(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Serializes back into the registry file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, rel) in &self.entries {
            let rows: Vec<String> = rel.to_string().lines().map(str::to_string).collect();
            out.push_str(&format!("{name} = {}\n", rows.join("; ")));
        }
        out
    }
}
