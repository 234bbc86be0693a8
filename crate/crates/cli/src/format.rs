//! The line-oriented workspace text format: `[section name]` headers with
//! `key = value` entries and whitespace-separated tables. Parse and
//! validation errors carry line and column positions.

use anyhow::{bail, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub key: String,
    /// extra key words between the key and `=` (used by table entries like
    /// `product a b = p pr1 pr2`)
    pub args: Vec<String>,
    pub value: Vec<String>,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct Section {
    pub kind: String,
    pub name: String,
    pub entries: Vec<Entry>,
    pub pos: Pos,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Entry> {
        self.entries.iter().filter(move |e| e.key == key)
    }

    pub fn expect_one(&self, key: &str) -> Result<&Entry> {
        match self.get(key) {
            Some(e) => Ok(e),
            None => bail!(
                "{}: section [{} {}] is missing the `{key}` entry",
                self.pos,
                self.kind,
                self.name
            ),
        }
    }

    pub fn scalar(&self, key: &str) -> Result<&str> {
        let e = self.expect_one(key)?;
        if e.value.len() != 1 {
            bail!("{}: `{key}` expects a single value", e.pos);
        }
        Ok(&e.value[0])
    }

    pub fn scalar_or(&self, key: &str, default: &str) -> String {
        match self.get(key) {
            Some(e) if e.value.len() == 1 => e.value[0].clone(),
            _ => default.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct WorkspaceFile {
    pub sections: Vec<Section>,
}

impl WorkspaceFile {
    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Section> {
        self.sections.iter().filter(move |s| s.kind == kind)
    }

    pub fn find(&self, kind: &str, name: &str) -> Option<&Section> {
        self.sections
            .iter()
            .find(|s| s.kind == kind && s.name == name)
    }

    /// Duplicate-name detection per section kind.
    pub fn validate_names(&self) -> Result<()> {
        let mut seen: BTreeMap<(String, String), Pos> = BTreeMap::new();
        for s in &self.sections {
            let key = (s.kind.clone(), s.name.clone());
            if let Some(prev) = seen.get(&key) {
                bail!(
                    "{}: duplicate section [{} {}] (first declared at {})",
                    s.pos,
                    s.kind,
                    s.name,
                    prev
                );
            }
            seen.insert(key, s.pos.clone());
        }
        Ok(())
    }
}

const SECTION_KINDS: &[&str] = &[
    "frame", "category", "doctrine", "topology", "fragment", "task",
];

pub fn parse(text: &str) -> Result<WorkspaceFile> {
    let mut ws = WorkspaceFile::default();
    let mut current: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        // `#` opens a comment only at line start or after whitespace, so
        // positional references like `ob#1` survive
        let mut cut = raw.len();
        for (k, ch) in raw.char_indices() {
            if ch == '#' && (k == 0 || raw[..k].ends_with(char::is_whitespace)) {
                cut = k;
                break;
            }
        }
        let line = &raw[..cut];
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = raw.len() - raw.trim_start().len() + 1;
        let pos = Pos {
            line: line_no,
            col,
        };
        if let Some(body) = trimmed.strip_prefix('[') {
            let Some(body) = body.strip_suffix(']') else {
                bail!("{pos}: unterminated section header");
            };
            let mut parts = body.split_whitespace();
            let kind = parts.next().unwrap_or("").to_string();
            let name = parts.next().unwrap_or("").to_string();
            if parts.next().is_some() {
                bail!("{pos}: section header takes at most two words");
            }
            if !SECTION_KINDS.contains(&kind.as_str()) {
                bail!(
                    "{pos}: unknown section kind `{kind}` (expected one of {})",
                    SECTION_KINDS.join(", ")
                );
            }
            if name.is_empty() {
                bail!("{pos}: section [{kind}] needs a name");
            }
            if let Some(s) = current.take() {
                ws.sections.push(s);
            }
            current = Some(Section {
                kind,
                name,
                entries: Vec::new(),
                pos,
            });
            continue;
        }
        let Some(eq) = trimmed.find('=') else {
            bail!("{pos}: expected `key = value` or a section header");
        };
        let (lhs, rhs) = trimmed.split_at(eq);
        let rhs = &rhs[1..];
        let mut lhs_words = lhs.split_whitespace();
        let Some(key) = lhs_words.next() else {
            bail!("{pos}: missing key before `=`");
        };
        let args: Vec<String> = lhs_words.map(|w| w.to_string()).collect();
        let value: Vec<String> = rhs.split_whitespace().map(|w| w.to_string()).collect();
        let Some(section) = current.as_mut() else {
            bail!("{pos}: entry outside of any section");
        };
        section.entries.push(Entry {
            key: key.to_string(),
            args,
            value,
            pos,
        });
    }
    if let Some(s) = current.take() {
        ws.sections.push(s);
    }
    ws.validate_names()?;
    Ok(ws)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_workspace() {
        let ws = parse("[frame B2]\nkind = bool\n\n[task t]\nkind = check\nproperty = primary\ndoctrine = d\nfragment = f\n").unwrap();
        assert_eq!(ws.sections.len(), 2);
        assert_eq!(ws.find("frame", "B2").unwrap().scalar("kind").unwrap(), "bool");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("[frame F]\nbroken line\n").unwrap_err();
        assert!(err.to_string().contains("2:1"), "{err}");
    }

    #[test]
    fn rejects_duplicate_sections() {
        let err = parse("[frame F]\nkind = bool\n[frame F]\nkind = bool\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn rejects_unknown_section_kind() {
        let err = parse("[banana X]\n").unwrap_err();
        assert!(err.to_string().contains("unknown section kind"), "{err}");
    }
}
