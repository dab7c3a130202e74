//! Input loading: inline PD text, `.pd` files, directories of them, or
//! the built-in corpus.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use cubecat_core::corpus::bundled;
use cubecat_core::diagram::{parse_pd_oriented, LinkDiagram};

/// One diagram ready for computation, with a stable display name.
pub struct NamedDiagram {
    pub name: String,
    pub diagram: LinkDiagram,
}

impl NamedDiagram {
    pub fn pd(&self) -> String {
        self.diagram.pd_string()
    }
}

/// Parses `.pd` file content: `#` starts a comment, a line `orient: +-`
/// fixes ambiguous component orientations (in order of least edge id),
/// every other non-empty line is PD text (concatenated with `;`).
pub fn parse_pd_document(text: &str) -> Result<LinkDiagram> {
    let mut orient: Option<Vec<bool>> = None;
    let mut pd_lines: Vec<&str> = Vec::new();
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(k) => raw[..k].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("orient:") {
            let mut dirs = Vec::new();
            for ch in rest.chars() {
                match ch {
                    '+' => dirs.push(true),
                    '-' => dirs.push(false),
                    c if c.is_whitespace() || c == ',' => {}
                    c => bail!("bad orientation token {c:?} (expected + or -)"),
                }
            }
            orient = Some(dirs);
            continue;
        }
        pd_lines.push(line);
    }
    if pd_lines.is_empty() {
        bail!("no PD code found");
    }
    let text = pd_lines.join(";");
    parse_pd_oriented(&text, orient.as_deref()).map_err(|e| anyhow::anyhow!("{e}"))
}

fn load_file(path: &Path) -> Result<NamedDiagram> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let diagram =
        parse_pd_document(&text).with_context(|| format!("parsing {}", path.display()))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Ok(NamedDiagram { name, diagram })
}

/// Resolves the input selection.  With neither `--pd` nor `--file`, the
/// built-in corpus is used; a directory loads every `*.pd` inside it in
/// name order.
pub fn load_inputs(pd: Option<&str>, file: Option<&Path>) -> Result<Vec<NamedDiagram>> {
    match (pd, file) {
        (Some(_), Some(_)) => bail!("--pd and --file are mutually exclusive"),
        (Some(text), None) => {
            let diagram = parse_pd_document(text).context("parsing --pd input")?;
            Ok(vec![NamedDiagram { name: "input".into(), diagram }])
        }
        (None, Some(path)) => {
            if path.is_dir() {
                let mut files: Vec<_> = fs::read_dir(path)
                    .with_context(|| format!("reading {}", path.display()))?
                    .filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.extension().is_some_and(|x| x == "pd"))
                    .collect();
                files.sort();
                if files.is_empty() {
                    bail!("no .pd files in {}", path.display());
                }
                files.iter().map(|p| load_file(p)).collect()
            } else {
                Ok(vec![load_file(path)?])
            }
        }
        (None, None) => Ok(bundled()
            .into_iter()
            .map(|(name, diagram)| NamedDiagram { name: name.into(), diagram })
            .collect()),
    }
}
