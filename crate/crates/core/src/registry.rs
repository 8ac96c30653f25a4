//! Target registry: the catalog of object classes, text categories, and
//! properties a program may name.
//!
//! The builtin catalog ships as JSON data (80 common object classes, the
//! open-vocabulary groups, one super-class with members, text categories,
//! properties) and an alternate catalog can be loaded from a file of the same
//! shape. Lookups are case-insensitive and alias-aware.

use std::collections::HashMap;
use std::collections::BTreeSet;
use std::path::Path;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::ast::{PropertyKind, Target, TextKind};
use crate::error::{Error, Result};

const BUILTIN_JSON: &str = include_str!("../data/registry.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Object,
    Text,
    Property,
}

/// One catalog entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TargetSpec {
    pub name: String,
    pub kind: TargetKind,
    #[serde(default)]
    pub aliases: Vec<String>,
    /// For super-classes: the object-class names this entry expands to.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub group_members: Vec<String>,
    /// Which detector/recognizer serves this target.
    #[serde(default = "default_backend", rename = "backend")]
    pub backend_id: String,
}

fn default_backend() -> String {
    "yolo-coco".to_owned()
}

#[derive(Debug, Deserialize)]
struct RegistryDoc {
    targets: Vec<TargetSpec>,
}

#[derive(Debug)]
pub struct Registry {
    specs: Vec<TargetSpec>,
    /// Normalized canonical names and aliases -> index into `specs`.
    index: HashMap<String, usize>,
}

/// Lowercase and collapse runs of whitespace to single spaces.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

impl Registry {
    /// The catalog shipped with the crate.
    pub fn builtin() -> &'static Registry {
        static BUILTIN: LazyLock<Registry> = LazyLock::new(|| {
            Registry::from_json_str(BUILTIN_JSON).expect("builtin registry data is valid")
        });
        &BUILTIN
    }

    pub fn from_json_str(json: &str) -> Result<Registry> {
        let doc: RegistryDoc = serde_json::from_str(json)
            .map_err(|e| Error::Registry(format!("invalid registry JSON: {e}")))?;
        Registry::from_specs(doc.targets)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Registry> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Registry::from_json_str(&text)
    }

    pub fn from_specs(specs: Vec<TargetSpec>) -> Result<Registry> {
        let mut index = HashMap::new();
        for (i, spec) in specs.iter().enumerate() {
            let canonical = normalize_name(&spec.name);
            if canonical.is_empty() {
                return Err(Error::Registry("empty target name".into()));
            }
            if index.insert(canonical.clone(), i).is_some() {
                return Err(Error::Registry(format!("duplicate target name `{canonical}`")));
            }
            if spec.kind == TargetKind::Text
                && canonical != "any text"
                && TextKind::from_name(&canonical).is_none()
            {
                return Err(Error::Registry(format!(
                    "text target `{canonical}` has no recognizer"
                )));
            }
            if spec.kind == TargetKind::Property
                && !matches!(canonical.as_str(), "color" | "count")
            {
                return Err(Error::Registry(format!(
                    "unknown property target `{canonical}`"
                )));
            }
        }
        for (i, spec) in specs.iter().enumerate() {
            for alias in &spec.aliases {
                let alias = normalize_name(alias);
                if let Some(&prev) = index.get(&alias) {
                    if prev != i {
                        return Err(Error::Registry(format!(
                            "alias `{alias}` collides with another target"
                        )));
                    }
                    continue;
                }
                index.insert(alias, i);
            }
        }
        for spec in &specs {
            for member in &spec.group_members {
                match index.get(&normalize_name(member)) {
                    Some(&j) if specs[j].kind == TargetKind::Object => {}
                    _ => {
                        return Err(Error::Registry(format!(
                            "group member `{member}` of `{}` is not a known object class",
                            spec.name
                        )))
                    }
                }
            }
        }
        Ok(Registry { specs, index })
    }

    pub fn iter(&self) -> impl Iterator<Item = &TargetSpec> {
        self.specs.iter()
    }

    /// Canonical target names in catalog order.
    pub fn names(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.name.as_str()).collect()
    }

    /// Look a name up (canonical or alias, case-insensitive).
    pub fn resolve(&self, name: &str) -> Option<&TargetSpec> {
        self.index
            .get(&normalize_name(name))
            .map(|&i| &self.specs[i])
    }

    /// Look a name up and produce the typed target it denotes.
    pub fn resolve_target(&self, name: &str) -> Option<Target> {
        let spec = self.resolve(name)?;
        Some(self.target_for(spec))
    }

    pub fn target_for(&self, spec: &TargetSpec) -> Target {
        match spec.kind {
            TargetKind::Object => {
                if spec.name == "any object" {
                    Target::AnyObject
                } else {
                    Target::ObjectClass(spec.name.clone())
                }
            }
            TargetKind::Text => {
                if spec.name == "any text" {
                    Target::AnyText
                } else {
                    Target::TextType(
                        TextKind::from_name(&spec.name).expect("validated at construction"),
                    )
                }
            }
            TargetKind::Property => {
                if spec.name == "color" {
                    Target::Property(PropertyKind::Color)
                } else {
                    Target::Property(PropertyKind::Count)
                }
            }
        }
    }

    /// The set of canonical class names an object-class query covers: the
    /// class itself plus, for super-classes, every group member.
    pub fn expand_object_class(&self, name: &str) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        match self.resolve(name) {
            Some(spec) => {
                set.insert(spec.name.clone());
                for member in &spec.group_members {
                    if let Some(m) = self.resolve(member) {
                        set.insert(m.name.clone());
                    }
                }
            }
            None => {
                set.insert(normalize_name(name));
            }
        }
        set
    }

    /// Canonical name for a detector label: resolves aliases, falls back to
    /// the normalized label itself when the registry does not know it.
    pub fn canonical_label(&self, label: &str) -> String {
        match self.resolve(label) {
            Some(spec) => spec.name.clone(),
            None => normalize_name(label),
        }
    }

    /// Registry names within `max_distance` edits of `name`, closest first,
    /// at most `limit` entries. Ties resolve alphabetically.
    pub fn suggestions(&self, name: &str, max_distance: usize, limit: usize) -> Vec<String> {
        let name = normalize_name(name);
        let mut ranked: Vec<(usize, &str)> = self
            .specs
            .iter()
            .filter_map(|s| {
                let d = edit_distance(&name, &s.name);
                (d <= max_distance).then_some((d, s.name.as_str()))
            })
            .collect();
        ranked.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)));
        ranked.truncate(limit);
        ranked.into_iter().map(|(_, n)| n.to_owned()).collect()
    }
}

/// Levenshtein distance over characters.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
