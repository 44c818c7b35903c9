//! Thin layer over the tree-sitter grammars: parsing, leaf tokens, comment
//! removal and a few structural queries shared by the other modules.

use tree_sitter::{Node, Parser, Tree};

use crate::error::{Error, Result};
use crate::lang::Language;

/// A parsed source together with the text it was parsed from.
pub struct Parsed<'s> {
    pub source: &'s str,
    pub tree: Tree,
    pub language: Language,
}

impl<'s> Parsed<'s> {
    pub fn root(&self) -> Node<'_> {
        self.tree.root_node()
    }

    pub fn text(&self, node: Node<'_>) -> &'s str {
        &self.source[node.byte_range()]
    }
}

fn parser_for(language: Language) -> Result<Parser> {
    let grammar = language.tree_sitter().ok_or_else(|| Error::UnsupportedLanguage(language.tag().into()))?;
    let mut parser = Parser::new();
    parser.set_language(&grammar).map_err(|e| Error::Environment(format!("incompatible {language} grammar: {e}")))?;
    Ok(parser)
}

/// Parses without rejecting error nodes.
pub fn parse_lenient(source: &str, language: Language) -> Result<Parsed<'_>> {
    let mut parser = parser_for(language)?;
    let tree = parser.parse(source, None).ok_or_else(|| Error::Parse { language, detail: "parser returned no tree".into() })?;
    Ok(Parsed { source, tree, language })
}

/// Parses and fails if the tree contains any error or missing node.
pub fn parse(source: &str, language: Language) -> Result<Parsed<'_>> {
    let parsed = parse_lenient(source, language)?;
    if let Some(bad) = first_error(parsed.root()) {
        let pos = bad.start_position();
        return Err(Error::Parse { language, detail: format!("syntax error at line {} column {}", pos.row + 1, pos.column + 1) });
    }
    Ok(parsed)
}

pub fn parses(source: &str, language: Language) -> bool {
    parse(source, language).is_ok()
}

fn first_error(node: Node<'_>) -> Option<Node<'_>> {
    if !node.has_error() {
        return None;
    }
    if node.is_error() || node.is_missing() {
        return Some(node);
    }
    let mut cursor = node.walk();
    let children: Vec<_> = node.children(&mut cursor).collect();
    children.into_iter().find_map(first_error).or(Some(node))
}

/// Pre-order traversal of every named and anonymous node.
pub fn walk<'t>(root: Node<'t>, mut visit: impl FnMut(Node<'t>)) {
    let mut cursor = root.walk();
    loop {
        visit(cursor.node());
        if cursor.goto_first_child() {
            continue;
        }
        loop {
            if cursor.goto_next_sibling() {
                break;
            }
            if !cursor.goto_parent() {
                return;
            }
        }
    }
}

/// Collects every node satisfying `pred` in source order.
pub fn collect<'t>(root: Node<'t>, mut pred: impl FnMut(Node<'t>) -> bool) -> Vec<Node<'t>> {
    let mut out = Vec::new();
    walk(root, |n| {
        if pred(n) {
            out.push(n)
        }
    });
    out
}

pub fn is_comment(node: Node<'_>, language: Language) -> bool {
    match language {
        Language::Java => matches!(node.kind(), "line_comment" | "block_comment"),
        _ => node.kind() == "comment",
    }
}

/// Leaf token texts in order, skipping comments.
pub fn tokens<'s>(parsed: &Parsed<'s>) -> Vec<&'s str> {
    let mut out = Vec::new();
    walk(parsed.root(), |n| {
        if n.child_count() == 0 && !is_comment(n, parsed.language) && n.end_byte() > n.start_byte() {
            out.push(parsed.text(n));
        }
    });
    out
}

/// Python docstrings: a bare string expression opening a module, class or function body.
pub fn python_docstrings<'t>(root: Node<'t>) -> Vec<Node<'t>> {
    let mut out = Vec::new();
    let mut consider = |body: Node<'t>| {
        if let Some(first) = body.named_child(0) {
            if first.kind() == "expression_statement"
                && first.named_child_count() == 1
                && first.named_child(0).is_some_and(|c| c.kind() == "string")
            {
                out.push(first);
            }
        }
    };
    consider(root);
    walk(root, |n| {
        if matches!(n.kind(), "function_definition" | "class_definition") {
            if let Some(body) = n.child_by_field_name("body") {
                consider(body);
            }
        }
    });
    out
}

/// Removes comments (and Python docstrings) while leaving every other token
/// untouched.
pub fn strip_comments(source: &str, language: Language) -> Result<String> {
    let parsed = parse(source, language)?;
    let mut spans: Vec<(usize, usize, bool)> = Vec::new();
    walk(parsed.root(), |n| {
        if is_comment(n, language) {
            spans.push((n.start_byte(), n.end_byte(), false));
        }
    });
    if language == Language::Python {
        for doc in python_docstrings(parsed.root()) {
            let only_statement = doc.parent().is_some_and(|p| p.kind() == "block" && p.named_child_count() == 1);
            spans.push((doc.start_byte(), doc.end_byte(), only_statement));
        }
    }
    spans.sort();
    let bytes = source.as_bytes();
    let mut out = String::with_capacity(source.len());
    let mut cursor = 0;
    for (start, end, needs_pass) in spans {
        if start < cursor {
            continue;
        }
        let line_start = source[..start].rfind('\n').map_or(0, |i| i + 1);
        let line_end = source[end..].find('\n').map_or(source.len(), |i| end + i);
        let own_line = source[line_start..start].trim().is_empty() && source[end..line_end].trim().is_empty();
        if needs_pass {
            out.push_str(&source[cursor..start]);
            out.push_str("pass");
            cursor = end;
        } else if own_line && line_start >= cursor {
            out.push_str(&source[cursor..line_start]);
            cursor = if line_end < source.len() { line_end + 1 } else { line_end };
        } else {
            // Trailing or inline comment: drop it with the blanks before it.
            let mut cut = start;
            while cut > cursor && matches!(bytes[cut - 1], b' ' | b'\t') {
                cut -= 1;
            }
            out.push_str(&source[cursor..cut]);
            let before = out.chars().last();
            let after = source[end..].chars().next();
            if let (Some(b), Some(a)) = (before, after) {
                if !b.is_whitespace() && !a.is_whitespace() {
                    out.push(' ');
                }
            }
            cursor = end;
        }
    }
    out.push_str(&source[cursor..]);
    Ok(out)
}

/// Function-like definitions in a source file.
pub fn function_nodes<'t>(root: Node<'t>, language: Language) -> Vec<Node<'t>> {
    collect(root, |n| match language {
        Language::Java => matches!(n.kind(), "method_declaration" | "constructor_declaration"),
        Language::Python => n.kind() == "function_definition",
        Language::Javascript => {
            matches!(n.kind(), "function_declaration" | "method_definition" | "generator_function_declaration")
                || (n.kind() == "variable_declarator"
                    && n.child_by_field_name("value")
                        .is_some_and(|v| matches!(v.kind(), "arrow_function" | "function_expression" | "function")))
        }
        Language::Cpp => false,
    })
}

/// Name of the first function definition, if any.
pub fn first_function_name(source: &str, language: Language) -> Option<String> {
    let parsed = parse_lenient(source, language).ok()?;
    let funcs = function_nodes(parsed.root(), language);
    let f = funcs.first()?;
    f.child_by_field_name("name").map(|n| parsed.text(n).to_string())
}
