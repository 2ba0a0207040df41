//! `.fgroup` manifests: a root spec file plus layer file lists.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::diag::{DiagCode, Diagnostic, SourceSpan};
use crate::parser::grammar::parse_component;
use crate::refinement::{validate_group_shape, SpecificationGroup};

/// A parsed manifest before the referenced files are loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupManifest {
    pub name: String,
    pub root: String,
    /// Layer file lists, position 0 holding layer 1.
    pub layers: Vec<Vec<String>>,
}

/// Parse the manifest text. Layer indices must be contiguous from 1.
pub fn parse_group_manifest(text: &str, file: &str) -> Result<GroupManifest, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut name = None;
    let mut root = None;
    let mut layers: BTreeMap<u32, Vec<String>> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let span = SourceSpan {
            file: file.to_string(),
            line: (idx + 1) as u32,
            column: 1,
        };
        let line = raw.split("--").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("group") => match fields.next() {
                Some(n) if fields.next().is_none() => name = Some(n.to_string()),
                _ => diags.push(syntax(span, "expected `group NAME`")),
            },
            Some("root") => match fields.next() {
                Some(f) if fields.next().is_none() => root = Some(f.to_string()),
                _ => diags.push(syntax(span, "expected `root FILE`")),
            },
            Some("layer") => {
                let index_field = fields.next().unwrap_or_default();
                let index_text = index_field.strip_suffix(':').unwrap_or(index_field);
                match index_text.parse::<u32>() {
                    Ok(j) if j >= 1 => {
                        let files: Vec<String> = fields.map(str::to_string).collect();
                        if files.is_empty() {
                            diags.push(syntax(span, format!("layer {j} lists no files")));
                        } else if layers.insert(j, files).is_some() {
                            diags.push(syntax(span, format!("layer {j} declared twice")));
                        }
                    }
                    _ => diags.push(syntax(span, "expected `layer J: FILE …` with J ≥ 1")),
                }
            }
            Some(other) => diags.push(syntax(
                span,
                format!("unknown manifest keyword `{other}`"),
            )),
            None => {}
        }
    }

    let name = name.unwrap_or_else(|| {
        diags.push(Diagnostic::new(DiagCode::ESyntax, "`group` header missing"));
        String::new()
    });
    let root = root.unwrap_or_else(|| {
        diags.push(Diagnostic::new(DiagCode::ESyntax, "`root FILE` line missing"));
        String::new()
    });

    let mut layer_list = Vec::new();
    for (pos, (&j, files)) in layers.iter().enumerate() {
        let expected = (pos + 1) as u32;
        if j != expected {
            diags.push(Diagnostic::new(
                DiagCode::ELayerGap,
                format!("layer indices must be contiguous from 1; expected layer {expected}, found layer {j}"),
            ));
            break;
        }
        layer_list.push(files.clone());
    }

    if diags.is_empty() {
        Ok(GroupManifest {
            name,
            root,
            layers: layer_list,
        })
    } else {
        Err(diags)
    }
}

/// Load a manifest and every referenced spec file (paths are relative to
/// the manifest). The returned group passes [`validate_group_shape`].
pub fn load_group(path: &Path) -> Result<SpecificationGroup, Vec<Diagnostic>> {
    let text = match std::fs::read(path) {
        Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
        Err(e) => {
            return Err(vec![Diagnostic::new(
                DiagCode::EMissingFile,
                format!("{}: {e}", path.display()),
            )]);
        }
    };
    let manifest = parse_group_manifest(&text, &path.display().to_string())?;
    let base = path.parent().map(PathBuf::from).unwrap_or_default();

    let mut diags = Vec::new();
    let root = load_spec(&base, &manifest.root, &mut diags);
    let mut layers = Vec::new();
    for files in &manifest.layers {
        let mut layer = Vec::new();
        for f in files {
            if let Some(c) = load_spec(&base, f, &mut diags) {
                layer.push(c);
            }
        }
        layers.push(layer);
    }
    let Some(root) = root else {
        return Err(diags);
    };
    if !diags.is_empty() {
        return Err(diags);
    }

    let group = SpecificationGroup {
        name: manifest.name,
        root,
        layers,
    };
    let shape: Vec<Diagnostic> = validate_group_shape(&group)
        .into_iter()
        .filter(Diagnostic::is_error)
        .collect();
    if shape.is_empty() {
        Ok(group)
    } else {
        Err(shape)
    }
}

fn load_spec(
    base: &Path,
    file: &str,
    diags: &mut Vec<Diagnostic>,
) -> Option<crate::model::Component> {
    let full = base.join(file);
    let text = match std::fs::read(&full) {
        Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
        Err(e) => {
            diags.push(Diagnostic::new(
                DiagCode::EMissingFile,
                format!("{}: {e}", full.display()),
            ));
            return None;
        }
    };
    match parse_component(&text, &full.display().to_string()) {
        Ok(c) => Some(c),
        Err(mut ds) => {
            diags.append(&mut ds);
            None
        }
    }
}

fn syntax(span: SourceSpan, message: impl Into<String>) -> Diagnostic {
    Diagnostic::new(DiagCode::ESyntax, message).with_span(span)
}

/// Render a manifest in canonical form.
pub fn render_group_manifest(name: &str, root_file: &str, layers: &[Vec<String>]) -> String {
    let mut out = format!("group {name}\nroot {root_file}\n");
    for (idx, files) in layers.iter().enumerate() {
        out.push_str(&format!("layer {}: {}\n", idx + 1, files.join(" ")));
    }
    out
}
