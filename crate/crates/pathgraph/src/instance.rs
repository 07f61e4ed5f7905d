//! Text instance files.
//!
//! ```text
//! M n          one line: node count and path count
//! p1 .. pM     parent of each node in original labels, 0 for the root
//! l r          n lines: path endpoints in original labels
//! ```

use crate::oracle::Instance;
use crate::treeprep::RawCliqueTree;
use crate::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub tree: RawCliqueTree,
    pub paths: Vec<(u32, u32)>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (no, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty file, expected 'M n' header"))?;
        let mut it = header.split_whitespace();
        let m: u32 = it
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(no, "expected node count"))?;
        let n: u32 = it
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| parse_err(no, "expected path count"))?;
        if it.next().is_some() {
            return Err(parse_err(no, "trailing tokens after 'M n'"));
        }
        let (no, parents_line) = lines
            .next()
            .ok_or_else(|| parse_err(no + 1, "missing parent line"))?;
        let parents: Vec<u32> = parents_line
            .split_whitespace()
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| parse_err(no, format!("bad parent entry '{w}'")))
            })
            .collect::<Result<_>>()?;
        if parents.len() != m as usize {
            return Err(parse_err(
                no,
                format!("expected {} parent entries, found {}", m, parents.len()),
            ));
        }
        let tree = RawCliqueTree::new(parents).map_err(|e| parse_err(no, e.to_string()))?;
        let mut paths = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let (no, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("expected {n} path lines")))?;
            let mut it = line.split_whitespace();
            let l: u32 = it
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| parse_err(no, "expected path endpoint"))?;
            let r: u32 = it
                .next()
                .and_then(|w| w.parse().ok())
                .ok_or_else(|| parse_err(no, "expected second path endpoint"))?;
            if it.next().is_some() {
                return Err(parse_err(no, "trailing tokens after 'l r'"));
            }
            if l < 1 || l > m || r < 1 || r > m {
                return Err(parse_err(no, format!("endpoint outside [1, {m}]")));
            }
            paths.push((l, r));
        }
        if let Some((no, _)) = lines.next() {
            return Err(parse_err(no, "trailing content after last path"));
        }
        Ok(InstanceFile { tree, paths })
    }

    pub fn to_text(&self) -> String {
        let m = self.tree.node_count();
        let mut out = format!("{} {}\n", m, self.paths.len());
        let parents: Vec<String> = (1..=m)
            .map(|v| self.tree.parent_of(v).to_string())
            .collect();
        out.push_str(&parents.join(" "));
        out.push('\n');
        for &(l, r) in &self.paths {
            out.push_str(&format!("{l} {r}\n"));
        }
        out
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            tree: inst.tree.clone(),
            paths: inst.paths.clone(),
        }
    }
}
