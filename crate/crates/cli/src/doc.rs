//! Line-oriented block documents: the input format and the machine report
//! share this grammar.
//!
//! ```text
//! # comment
//! key: value
//! name {
//!   key: [a, b, c]
//! }
//! ```
//!
//! Values are either scalars (trimmed text, optionally double-quoted) or
//! bracketed lists split on top-level commas.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Scalar(String),
    List(Vec<String>),
}

impl Value {
    pub fn scalar(&self) -> Option<&str> {
        match self {
            Value::Scalar(s) => Some(s),
            Value::List(_) => None,
        }
    }

    pub fn list(&self) -> Option<&[String]> {
        match self {
            Value::List(items) => Some(items),
            Value::Scalar(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    KeyValue {
        line: usize,
        key: String,
        value: Value,
    },
    Block(Block),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub line: usize,
    pub name: String,
    pub entries: Vec<Entry>,
}

impl Block {
    pub fn new(name: impl Into<String>) -> Self {
        Block {
            line: 0,
            name: name.into(),
            entries: Vec::new(),
        }
    }

    pub fn push_kv(&mut self, key: impl Into<String>, value: Value) {
        self.entries.push(Entry::KeyValue {
            line: 0,
            key: key.into(),
            value,
        });
    }

    pub fn push_scalar(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.push_kv(key, Value::Scalar(value.into()));
    }

    pub fn push_list(&mut self, key: impl Into<String>, items: Vec<String>) {
        self.push_kv(key, Value::List(items));
    }

    pub fn push_block(&mut self, block: Block) {
        self.entries.push(Entry::Block(block));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find_map(|e| match e {
            Entry::KeyValue { key: k, value, .. } if k == key => Some(value),
            _ => None,
        })
    }

    pub fn get_scalar(&self, key: &str) -> Option<&str> {
        self.get(key).and_then(|v| v.scalar())
    }

    pub fn get_list(&self, key: &str) -> Option<&[String]> {
        self.get(key).and_then(|v| v.list())
    }

    pub fn blocks<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.entries.iter().filter_map(move |e| match e {
            Entry::Block(b) if b.name == name => Some(b),
            _ => None,
        })
    }

    pub fn block<'a>(&'a self, name: &str) -> Option<&'a Block> {
        self.entries.iter().find_map(|e| match e {
            Entry::Block(b) if b.name == name => Some(b),
            _ => None,
        })
    }

    pub fn keys(&self) -> impl Iterator<Item = (usize, &str, &Value)> {
        self.entries.iter().filter_map(|e| match e {
            Entry::KeyValue { line, key, value } => Some((*line, key.as_str(), value)),
            _ => None,
        })
    }
}

/// Parses a document into a root block named `""` containing the top-level
/// entries. Every malformed line is a diagnostic; the parse is total.
pub fn parse(text: &str) -> Result<Block, Vec<Diagnostic>> {
    let mut root = Block::new("");
    let mut stack: Vec<Block> = vec![];
    let mut diagnostics = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }
        if line == "}" {
            match stack.pop() {
                Some(done) => {
                    let target = stack.last_mut().unwrap_or(&mut root);
                    target.entries.push(Entry::Block(done));
                }
                None => diagnostics.push(Diagnostic::new(line_no, "unmatched '}'")),
            }
            continue;
        }
        if let Some(name) = line.strip_suffix('{') {
            let name = name.trim();
            if name.is_empty() {
                diagnostics.push(Diagnostic::new(line_no, "block requires a name"));
                continue;
            }
            stack.push(Block {
                line: line_no,
                name: name.to_string(),
                entries: Vec::new(),
            });
            continue;
        }
        if let Some(colon) = find_top_level_colon(&line) {
            let key = line[..colon].trim().to_string();
            let raw_value = line[colon + 1..].trim();
            if key.is_empty() {
                diagnostics.push(Diagnostic::new(line_no, "empty key"));
                continue;
            }
            let value = match parse_value(raw_value) {
                Ok(v) => v,
                Err(msg) => {
                    diagnostics.push(Diagnostic::new(line_no, msg));
                    continue;
                }
            };
            let target = stack.last_mut().unwrap_or(&mut root);
            target.entries.push(Entry::KeyValue {
                line: line_no,
                key,
                value,
            });
            continue;
        }
        diagnostics.push(Diagnostic::new(
            line_no,
            format!("cannot parse line: '{line}'"),
        ));
    }
    for unclosed in stack {
        diagnostics.push(Diagnostic::new(
            unclosed.line,
            format!("block '{}' is never closed", unclosed.name),
        ));
    }
    if diagnostics.is_empty() {
        Ok(root)
    } else {
        Err(diagnostics)
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// The first ':' outside quotes and outside brackets/parens. Keys never
/// contain these, so scanning for the first qualifying colon is enough.
fn find_top_level_colon(line: &str) -> Option<usize> {
    let mut depth = 0i32;
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '[' | '(' if !in_quotes => depth += 1,
            ']' | ')' if !in_quotes => depth -= 1,
            ':' if !in_quotes && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_value(raw: &str) -> Result<Value, String> {
    if raw.starts_with('[') {
        if !raw.ends_with(']') {
            return Err("unterminated list".into());
        }
        let inner = &raw[1..raw.len() - 1];
        if inner.trim().is_empty() {
            return Ok(Value::List(Vec::new()));
        }
        Ok(Value::List(
            split_top_level(inner)?
                .into_iter()
                .map(|s| s.trim().to_string())
                .collect(),
        ))
    } else if raw.starts_with('"') {
        unquote(raw).map(Value::Scalar)
    } else {
        Ok(Value::Scalar(raw.to_string()))
    }
}

/// Splits on commas outside quotes, brackets and parens.
pub fn split_top_level(s: &str) -> Result<Vec<String>, String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut in_quotes = false;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '[' | '(' if !in_quotes => depth += 1,
            ']' | ')' if !in_quotes => depth -= 1,
            ',' if !in_quotes && depth == 0 => {
                parts.push(s[start..i].to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 || in_quotes {
        return Err("unbalanced brackets or quotes".into());
    }
    parts.push(s[start..].to_string());
    Ok(parts)
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn unquote(s: &str) -> Result<String, String> {
    let inner = s
        .strip_prefix('"')
        .and_then(|t| t.strip_suffix('"'))
        .ok_or("expected a quoted string")?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('"') => out.push('"'),
                Some('\\') => out.push('\\'),
                Some('n') => out.push('\n'),
                _ => return Err("bad escape sequence".into()),
            }
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

/// Deterministic re-emission of a document tree.
pub fn emit(root: &Block) -> String {
    let mut out = String::new();
    for entry in &root.entries {
        emit_entry(&mut out, entry, 0);
    }
    out
}

fn emit_entry(out: &mut String, entry: &Entry, indent: usize) {
    let pad = "  ".repeat(indent);
    match entry {
        Entry::KeyValue { key, value, .. } => match value {
            Value::Scalar(s) => {
                let _ = writeln!(out, "{pad}{key}: {s}");
            }
            Value::List(items) => {
                let _ = writeln!(out, "{pad}{key}: [{}]", items.join(", "));
            }
        },
        Entry::Block(b) => {
            let _ = writeln!(out, "{pad}{} {{", b.name);
            for e in &b.entries {
                emit_entry(out, e, indent + 1);
            }
            let _ = writeln!(out, "{pad}}}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reemit() {
        let text = "l: 3\ngroup {\n  kind: abelian\n  invariants: [9]\n}\n";
        let root = parse(text).unwrap();
        assert_eq!(root.get_scalar("l"), Some("3"));
        let group = root.block("group").unwrap();
        assert_eq!(group.get_scalar("kind"), Some("abelian"));
        assert_eq!(group.get_list("invariants"), Some(&["9".to_string()][..]));
        assert_eq!(emit(&root), text);
    }

    #[test]
    fn comments_and_blanks() {
        let text = "# header\nl: 3  # the prime\n\ngamma {\n}\n";
        let root = parse(text).unwrap();
        assert_eq!(root.get_scalar("l"), Some("3"));
        assert!(root.block("gamma").unwrap().entries.is_empty());
    }

    #[test]
    fn diagnostics_are_positioned() {
        let text = "l: 3\nnonsense line\n}\n";
        let errs = parse(text).unwrap_err();
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].line, 2);
        assert_eq!(errs[1].line, 3);
    }

    #[test]
    fn nested_lists_and_parens() {
        let text = "primes: [T, ell, f(0, 3, 3)]\n";
        let root = parse(text).unwrap();
        let items = root.get_list("primes").unwrap();
        assert_eq!(items, &["T", "ell", "f(0, 3, 3)"]);
    }

    #[test]
    fn quoted_strings_roundtrip() {
        let original = "a \"tricky\"\nvalue \\ here";
        let quoted = quote(original);
        assert_eq!(unquote(&quoted).unwrap(), original);
    }

    #[test]
    fn unclosed_block_is_diagnosed() {
        let errs = parse("group {\n  kind: abelian\n").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("never closed"));
    }
}
