//! Text renderings of truncations.
//!
//! Both formats draw the depth-bounded truncation of a value as a tree of
//! words. Output is deterministic: children always appear in alphabet order,
//! words in shortlex order, so renderings are directly comparable against
//! golden files. The ascii form optionally colors edge labels; the dot form
//! never does.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::eval::Value;
use crate::words::{Alphabet, FiniteWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "ascii" => Ok(Format::Ascii),
            "dot" => Ok(Format::Dot),
            other => Err(format!("unknown format `{other}` (expected ascii or dot)")),
        }
    }
}

fn paint(label: &str, color: bool) -> String {
    if color {
        format!("\x1b[36m{label}\x1b[0m")
    } else {
        label.to_string()
    }
}

/// Indented drawing of a prefix-closed word set. The root prints as `eps`;
/// every other node shows the symbol of its incoming edge.
pub fn ascii_tree(words: &[FiniteWord], alphabet: &Arc<Alphabet>, color: bool) -> String {
    if words.is_empty() {
        return "(empty)".to_string();
    }
    let set: BTreeSet<&FiniteWord> = words.iter().collect();
    let mut lines = vec!["eps".to_string()];
    fn walk(
        u: &FiniteWord,
        indent: &str,
        set: &BTreeSet<&FiniteWord>,
        alphabet: &Arc<Alphabet>,
        color: bool,
        lines: &mut Vec<String>,
    ) {
        let kids: Vec<_> = alphabet
            .syms()
            .map(|a| u.push(a))
            .filter(|v| set.contains(v))
            .collect();
        let count = kids.len();
        for (i, kid) in kids.into_iter().enumerate() {
            let last = i + 1 == count;
            let label = alphabet.symbol(kid.letter(kid.len() - 1));
            lines.push(format!("{indent}+- {}", paint(label, color)));
            let deeper = format!("{indent}{}", if last { "   " } else { "|  " });
            walk(&kid, &deeper, set, alphabet, color, lines);
        }
    }
    walk(
        &FiniteWord::empty(alphabet),
        "",
        &set,
        alphabet,
        color,
        &mut lines,
    );
    lines.join("\n")
}

/// Graphviz drawing of a prefix-closed word set: nodes are named by their
/// words (`eps` for the root), edges are labeled by symbols. Nodes appear in
/// shortlex order and each edge right after both endpoints are known, so the
/// output is bit-stable.
pub fn dot_tree(words: &[FiniteWord], alphabet: &Arc<Alphabet>, graph_name: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph {graph_name} {{\n"));
    for w in words {
        out.push_str(&format!("  \"{w}\";\n"));
    }
    for w in words {
        if w.is_empty() {
            continue;
        }
        let parent = w.restrict(w.len() - 1);
        let label = alphabet.symbol(w.letter(w.len() - 1));
        out.push_str(&format!("  \"{parent}\" -> \"{w}\" [label=\"{label}\"];\n"));
    }
    out.push('}');
    out
}

/// Renders any evaluated value at the given depth. Root families draw each
/// component up to the index bound as its own section.
pub fn render_value(
    value: &Value,
    format: Format,
    depth: usize,
    index_bound: usize,
    color: bool,
) -> String {
    match value {
        Value::Tree(t) => {
            let words = t.words_to_depth(depth);
            match format {
                Format::Ascii => ascii_tree(&words, t.alphabet(), color),
                Format::Dot => dot_tree(&words, t.alphabet(), "tree"),
            }
        }
        Value::Spine(sp) => {
            let words = sp.truncate(depth);
            match format {
                Format::Ascii => ascii_tree(&words, sp.alphabet(), color),
                Format::Dot => dot_tree(&words, sp.alphabet(), "tree"),
            }
        }
        Value::Family(fam) => {
            let mut sections = Vec::new();
            for (k, words) in fam.truncate(depth, index_bound) {
                match format {
                    Format::Ascii => sections.push(format!(
                        "component {k}:\n{}",
                        ascii_tree(&words, fam.alphabet(), color)
                    )),
                    Format::Dot => {
                        sections.push(dot_tree(&words, fam.alphabet(), &format!("component_{k}")))
                    }
                }
            }
            sections.join("\n\n")
        }
    }
}
