//! Named program store: a directory of `{name}.json` files in the program
//! JSON format. Names are single path components, so the filesystem enforces
//! uniqueness.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::SystemTime;

use crate::ast::Program;
use crate::codec::{decode_program_json, encode_program_json};
use crate::error::{Error, Result};
use crate::registry::Registry;

/// Where programs live when no directory is given explicitly: `VIZFILTER_LIB`
/// if set, else `$XDG_CONFIG_HOME/vizfilter/library`, else
/// `$HOME/.config/vizfilter/library`.
pub fn default_library_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os("VIZFILTER_LIB").filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    let base = std::env::var_os("XDG_CONFIG_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|home| PathBuf::from(home).join(".config")))
        .unwrap_or_else(|| PathBuf::from("."));
    base.join("vizfilter").join("library")
}

#[derive(Debug, Clone)]
pub struct Library {
    dir: PathBuf,
}

/// One stored program, as reported by [`Library::list`].
#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: String,
    pub path: PathBuf,
    pub modified: Option<SystemTime>,
}

impl Library {
    /// Opens the store at `dir`, creating the directory if needed.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Library> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Library(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Library { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_of(&self, name: &str) -> Result<PathBuf> {
        check_name(name)?;
        Ok(self.dir.join(format!("{name}.json")))
    }

    /// Whether a program is stored under `name` (the name must be valid).
    pub fn contains(&self, name: &str) -> Result<bool> {
        Ok(self.path_of(name)?.exists())
    }

    /// Stores `program` under `name`; the stored copy carries the name.
    /// Refuses to overwrite an existing program unless `force`.
    pub fn save(&self, name: &str, program: &Program, force: bool) -> Result<PathBuf> {
        let path = self.path_of(name)?;
        if !force && path.exists() {
            return Err(Error::Library(format!(
                "program {name:?} already exists (pass force to replace it)"
            )));
        }
        let mut stored = program.clone();
        stored.name = Some(name.to_owned());
        fs::write(&path, encode_program_json(&stored))
            .map_err(|e| Error::Library(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn load(&self, name: &str, registry: &Registry) -> Result<Program> {
        let path = self.path_of(name)?;
        let text = fs::read_to_string(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::Library(format!("no program named {name:?}"))
            } else {
                Error::Library(format!("cannot read {}: {e}", path.display()))
            }
        })?;
        decode_program_json(&text, registry)
            .map_err(|e| Error::Library(format!("{}: {e}", path.display())))
    }

    pub fn delete(&self, name: &str) -> Result<()> {
        let path = self.path_of(name)?;
        fs::remove_file(&path).map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                Error::Library(format!("no program named {name:?}"))
            } else {
                Error::Library(format!("cannot delete {}: {e}", path.display()))
            }
        })
    }

    /// All stored programs, sorted by name. Files that are not well-formed
    /// entries (wrong extension, foreign names) are ignored.
    pub fn list(&self) -> Result<Vec<LibraryEntry>> {
        let read_err =
            |e| Error::Library(format!("cannot read {}: {e}", self.dir.display()));
        let mut entries = Vec::new();
        for entry in fs::read_dir(&self.dir).map_err(read_err)? {
            let entry = entry.map_err(read_err)?;
            let path = entry.path();
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else { continue };
            if path.extension().and_then(|s| s.to_str()) != Some("json")
                || check_name(stem).is_err()
            {
                continue;
            }
            let modified = entry.metadata().and_then(|m| m.modified()).ok();
            entries.push(LibraryEntry { name: stem.to_owned(), path, modified });
        }
        entries.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(entries)
    }
}

/// Names are single path components: ASCII letters, digits, `.`, `_`, `-`;
/// never empty, never starting with a dot.
fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'));
    if ok {
        Ok(())
    } else {
        Err(Error::Library(format!(
            "invalid program name {name:?}: use letters, digits, '.', '_' or '-'"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;
    use crate::print::print_program;

    fn sample() -> Program {
        parse_program("find number on red bus", Registry::builtin()).unwrap()
    }

    #[test]
    fn save_load_round_trips_canonical_text() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::open(dir.path()).unwrap();
        let program = sample();
        lib.save("bus-route", &program, false).unwrap();
        let loaded = lib.load("bus-route", Registry::builtin()).unwrap();
        assert_eq!(print_program(&loaded), print_program(&program));
        assert_eq!(loaded.name.as_deref(), Some("bus-route"));
    }

    #[test]
    fn save_refuses_collisions_unless_forced() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::open(dir.path()).unwrap();
        lib.save("p", &sample(), false).unwrap();
        let err = lib.save("p", &sample(), false).unwrap_err();
        assert!(matches!(err, Error::Library(_)), "{err}");
        lib.save("p", &sample(), true).unwrap();
    }

    #[test]
    fn delete_twice_reports_the_missing_name() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::open(dir.path()).unwrap();
        lib.save("p", &sample(), false).unwrap();
        lib.delete("p").unwrap();
        let err = lib.delete("p").unwrap_err();
        assert!(err.to_string().contains("no program named"), "{err}");
    }

    #[test]
    fn list_is_sorted_and_ignores_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::open(dir.path()).unwrap();
        lib.save("zebra", &sample(), false).unwrap();
        lib.save("apple", &sample(), false).unwrap();
        fs::write(dir.path().join("notes.txt"), "x").unwrap();
        fs::write(dir.path().join(".hidden.json"), "x").unwrap();
        let names: Vec<_> = lib.list().unwrap().into_iter().map(|e| e.name).collect();
        assert_eq!(names, ["apple", "zebra"]);
    }

    #[test]
    fn traversal_and_hidden_names_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let lib = Library::open(dir.path()).unwrap();
        for bad in ["", ".", "..", ".config", "a/b", "a\\b", "a b", "caf\u{e9}"] {
            let err = lib.save(bad, &sample(), false).unwrap_err();
            assert!(matches!(err, Error::Library(_)), "{bad:?} accepted");
        }
        assert!(lib.save("ok-1.2_x", &sample(), false).is_ok());
    }
}
