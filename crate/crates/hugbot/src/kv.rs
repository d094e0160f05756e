//! Flat `key = value` document parser shared by config and scenario files.
//!
//! The dialect is deliberately small: one `key = value` pair per line,
//! `#` starts a comment, blank lines are ignored. Keys may contain dots
//! (`user.girth_contact_angle`). Duplicate keys are an error so a typo
//! cannot silently shadow an earlier setting.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KvError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate key `{key}` (first set on line {first_line})")]
    DuplicateKey {
        line: usize,
        first_line: usize,
        key: String,
    },
    #[error("line {line}: key `{key}`: {reason}")]
    BadValue {
        line: usize,
        key: String,
        reason: String,
    },
    #[error("unknown key `{key}` (line {line})")]
    UnknownKey { line: usize, key: String },
}

/// One parsed `key = value` entry with its source line.
#[derive(Debug, Clone)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl Entry {
    pub fn as_f64(&self) -> Result<f64, KvError> {
        self.value
            .parse::<f64>()
            .map_err(|_| self.bad("not a number"))
    }

    pub fn as_usize(&self) -> Result<usize, KvError> {
        self.value
            .parse::<usize>()
            .map_err(|_| self.bad("not a non-negative integer"))
    }

    pub fn as_u64(&self) -> Result<u64, KvError> {
        self.value
            .parse::<u64>()
            .map_err(|_| self.bad("not a non-negative integer"))
    }

    pub fn as_bool(&self) -> Result<bool, KvError> {
        match self.value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(self.bad("expected `true` or `false`")),
        }
    }

    /// Parses a `t:v,t:v,...` list of piecewise-linear breakpoints.
    pub fn as_breakpoints(&self) -> Result<Vec<(f64, f64)>, KvError> {
        let mut points = Vec::new();
        for part in self.value.split(',') {
            let (t, v) = part
                .split_once(':')
                .ok_or_else(|| self.bad("expected `time:value` pairs separated by commas"))?;
            let t: f64 = t
                .trim()
                .parse()
                .map_err(|_| self.bad("bad time in breakpoint"))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| self.bad("bad value in breakpoint"))?;
            points.push((t, v));
        }
        Ok(points)
    }

    pub fn bad(&self, reason: &str) -> KvError {
        KvError::BadValue {
            line: self.line,
            key: self.key.clone(),
            reason: reason.to_string(),
        }
    }

    pub fn unknown(&self) -> KvError {
        KvError::UnknownKey {
            line: self.line,
            key: self.key.clone(),
        }
    }
}

/// An ordered document of unique keys.
#[derive(Debug, Default)]
pub struct Document {
    entries: Vec<Entry>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, KvError> {
        let mut entries: Vec<Entry> = Vec::new();
        let mut seen: BTreeMap<String, usize> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let content = content.trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| KvError::Malformed {
                line,
                text: content.to_string(),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(KvError::Malformed {
                    line,
                    text: content.to_string(),
                });
            }
            if let Some(&first_line) = seen.get(&key) {
                return Err(KvError::DuplicateKey {
                    line,
                    first_line,
                    key,
                });
            }
            seen.insert(key.clone(), line);
            entries.push(Entry { line, key, value });
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let doc = Document::parse("# header\n\na = 1 # trailing\nb.c = two\n").unwrap();
        assert_eq!(doc.entries().len(), 2);
        assert_eq!(doc.entries()[0].key, "a");
        assert_eq!(doc.entries()[0].value, "1");
        assert_eq!(doc.entries()[1].key, "b.c");
        assert_eq!(doc.entries()[1].line, 4);
    }

    #[test]
    fn rejects_duplicates() {
        let err = Document::parse("a = 1\na = 2\n").unwrap_err();
        assert!(matches!(
            err,
            KvError::DuplicateKey {
                line: 2,
                first_line: 1,
                ..
            }
        ));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            Document::parse("just words\n").unwrap_err(),
            KvError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            Document::parse("a =\n").unwrap_err(),
            KvError::Malformed { .. }
        ));
    }

    #[test]
    fn breakpoint_lists() {
        let doc = Document::parse("p = 0:4.0, 1.5:0.8\n").unwrap();
        let pts = doc.entries()[0].as_breakpoints().unwrap();
        assert_eq!(pts, vec![(0.0, 4.0), (1.5, 0.8)]);
    }
}
