//! Structural queries over Java syntax trees used to decide whether a rewrite
//! site is eligible.

use std::collections::BTreeSet;

use tree_sitter::Node;

use crate::syntax::{self, Parsed};

pub(crate) fn named_children<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.named_children(&mut cursor).collect()
}

pub(crate) fn field_children<'t>(node: Node<'t>, field: &str) -> Vec<Node<'t>> {
    let mut cursor = node.walk();
    node.children_by_field_name(field, &mut cursor).collect()
}

/// True when the node sits inside a method, constructor or lambda body.
pub(crate) fn in_executable_body(node: Node<'_>) -> bool {
    let mut cur = node.parent();
    while let Some(p) = cur {
        match p.kind() {
            "method_declaration" | "constructor_declaration" | "lambda_expression" => return true,
            "class_body" | "interface_body" | "enum_body" | "field_declaration" => return false,
            _ => {}
        }
        cur = p.parent();
    }
    false
}

pub(crate) fn position_tag(node: Node<'_>) -> String {
    let p = node.start_position();
    format!("L{}C{}", p.row + 1, p.column + 1)
}

/// Leading whitespace of the line the node starts on.
pub(crate) fn line_indent(source: &str, byte: usize) -> String {
    let line_start = source[..byte].rfind('\n').map_or(0, |i| i + 1);
    source[line_start..].chars().take_while(|c| *c == ' ' || *c == '\t').collect()
}

pub(crate) fn is_statement(node: Node<'_>) -> bool {
    matches!(
        node.kind(),
        "local_variable_declaration"
            | "expression_statement"
            | "if_statement"
            | "for_statement"
            | "enhanced_for_statement"
            | "while_statement"
            | "do_statement"
            | "switch_expression"
            | "return_statement"
            | "throw_statement"
            | "break_statement"
            | "continue_statement"
            | "yield_statement"
            | "block"
            | "try_statement"
            | "try_with_resources_statement"
            | "labeled_statement"
            | "synchronized_statement"
            | "assert_statement"
            | "local_class_declaration"
            | "class_declaration"
            | ";"
    )
}

/// Statements of a block (or switch group), skipping braces, labels and comments.
pub(crate) fn statements<'t>(container: Node<'t>) -> Vec<Node<'t>> {
    named_children(container).into_iter().filter(|n| is_statement(*n) && !matches!(n.kind(), "line_comment" | "block_comment")).collect()
}

fn is_loop_or_switch(node: Node<'_>) -> bool {
    matches!(node.kind(), "for_statement" | "enhanced_for_statement" | "while_statement" | "do_statement" | "switch_expression")
}

fn is_boundary(node: Node<'_>) -> bool {
    matches!(node.kind(), "lambda_expression" | "class_body" | "method_declaration" | "constructor_declaration")
}

/// Unlabeled `break` statements inside `node` that would leave `node` itself
/// (i.e. are not captured by a nested loop or switch).
pub(crate) fn escaping_breaks<'t>(node: Node<'t>) -> Vec<Node<'t>> {
    fn visit<'t>(n: Node<'t>, out: &mut Vec<Node<'t>>) {
        for c in named_children(n) {
            if c.kind() == "break_statement" {
                if named_children(c).iter().all(|x| x.kind() != "identifier") {
                    out.push(c);
                }
            } else if !is_loop_or_switch(c) && !is_boundary(c) {
                visit(c, out);
            }
        }
    }
    let mut out = Vec::new();
    visit(node, &mut out);
    out
}

pub(crate) fn contains_kind(node: Node<'_>, kinds: &[&str]) -> bool {
    let mut found = false;
    syntax::walk(node, |n| found |= kinds.contains(&n.kind()));
    found
}

fn is_true_literal(node: Option<Node<'_>>) -> bool {
    match node {
        None => true,
        Some(n) if n.kind() == "parenthesized_expression" => is_true_literal(n.named_child(0)),
        Some(n) => n.kind() == "true",
    }
}

/// Conservative "cannot complete normally": `true` only when the statement
/// certainly transfers control elsewhere.
pub(crate) fn cannot_complete(parsed: &Parsed<'_>, node: Node<'_>) -> bool {
    match node.kind() {
        "return_statement" | "throw_statement" | "break_statement" | "continue_statement" | "yield_statement" => true,
        "block" | "synchronized_statement" => {
            let body = if node.kind() == "block" { Some(node) } else { node.child_by_field_name("body") };
            body.and_then(|b| statements(b).last().copied()).is_some_and(|last| cannot_complete(parsed, last))
        }
        "if_statement" => match (node.child_by_field_name("consequence"), node.child_by_field_name("alternative")) {
            (Some(c), Some(a)) => cannot_complete(parsed, c) && cannot_complete(parsed, a),
            _ => false,
        },
        "while_statement" | "do_statement" => {
            is_true_literal(node.child_by_field_name("condition"))
                && node.child_by_field_name("body").is_none_or(|b| escaping_breaks(b).is_empty())
        }
        "for_statement" => {
            is_true_literal(node.child_by_field_name("condition"))
                && node.child_by_field_name("body").is_none_or(|b| escaping_breaks(b).is_empty())
        }
        "labeled_statement" => named_children(node)
            .into_iter()
            .find(|c| c.kind() != "identifier")
            .is_some_and(|inner| cannot_complete(parsed, inner) && !contains_kind(inner, &["break_statement"])),
        "switch_expression" => {
            let Some(body) = node.child_by_field_name("body") else { return false };
            let groups: Vec<_> = named_children(body).into_iter().filter(|g| g.kind() == "switch_block_statement_group").collect();
            let has_default =
                groups.iter().any(|g| named_children(*g).iter().any(|l| l.kind() == "switch_label" && parsed.text(*l).trim() == "default"));
            let breaks = groups.iter().any(|g| !escaping_breaks(*g).is_empty());
            let last_ends = groups.last().and_then(|g| statements(*g).last().copied()).is_some_and(|s| cannot_complete(parsed, s));
            has_default && !breaks && last_ends
        }
        "try_statement" | "try_with_resources_statement" => {
            let kids = named_children(node);
            if let Some(fin) = kids.iter().find(|k| k.kind() == "finally_clause") {
                if named_children(*fin).last().is_some_and(|b| cannot_complete(parsed, *b)) {
                    return true;
                }
            }
            let body_ends = node.child_by_field_name("body").is_some_and(|b| cannot_complete(parsed, b));
            let catches_end = kids
                .iter()
                .filter(|k| k.kind() == "catch_clause")
                .all(|c| c.child_by_field_name("body").is_some_and(|b| cannot_complete(parsed, b)));
            body_ends && catches_end
        }
        _ => false,
    }
}

/// Free of side effects and calls: identifiers, literals, field and array
/// reads, arithmetic, casts and parentheses.
pub(crate) fn is_pure(node: Node<'_>) -> bool {
    match node.kind() {
        "identifier"
        | "this"
        | "true"
        | "false"
        | "null_literal"
        | "character_literal"
        | "string_literal"
        | "decimal_integer_literal"
        | "hex_integer_literal"
        | "octal_integer_literal"
        | "binary_integer_literal"
        | "decimal_floating_point_literal"
        | "hex_floating_point_literal"
        | "field_access"
        | "array_access"
        | "parenthesized_expression"
        | "cast_expression"
        | "binary_expression"
        | "string_fragment"
        | "escape_sequence"
        | "integral_type"
        | "floating_point_type"
        | "boolean_type"
        | "type_identifier"
        | "scoped_type_identifier"
        | "generic_type"
        | "type_arguments" => named_children(node).into_iter().all(is_pure),
        "unary_expression" => named_children(node).into_iter().all(is_pure),
        _ => false,
    }
}

/// Calls, assignments, increments and allocations.
pub(crate) fn has_effects(node: Node<'_>) -> bool {
    contains_kind(
        node,
        &[
            "method_invocation",
            "object_creation_expression",
            "assignment_expression",
            "update_expression",
            "lambda_expression",
            "method_reference",
            "switch_expression",
        ],
    )
}

/// Binding strength of an expression node; higher binds tighter.
pub(crate) fn precedence(parsed: &Parsed<'_>, node: Node<'_>) -> u8 {
    match node.kind() {
        "binary_expression" => {
            let op = node.child_by_field_name("operator").map(|o| parsed.text(o)).unwrap_or("");
            binary_precedence(op)
        }
        "instanceof_expression" => 9,
        "ternary_expression" => 2,
        "assignment_expression" => 1,
        "lambda_expression" => 0,
        "unary_expression" | "cast_expression" => 13,
        _ => 15,
    }
}

pub(crate) fn binary_precedence(op: &str) -> u8 {
    match op {
        "*" | "/" | "%" => 12,
        "+" | "-" => 11,
        "<<" | ">>" | ">>>" => 10,
        "<" | ">" | "<=" | ">=" => 9,
        "==" | "!=" => 8,
        "&" => 7,
        "^" => 6,
        "|" => 5,
        "&&" => 4,
        "||" => 3,
        _ => 0,
    }
}

/// Whether an identifier node is a use of a local variable (as opposed to a
/// member name, method name or label).
pub(crate) fn is_variable_use(node: Node<'_>) -> bool {
    if node.kind() != "identifier" {
        return false;
    }
    let Some(parent) = node.parent() else { return true };
    let is_field = |f: &str| parent.child_by_field_name(f).is_some_and(|c| c.id() == node.id());
    match parent.kind() {
        "field_access" => !is_field("field"),
        "method_invocation" => !is_field("name"),
        "method_reference" => parent.named_child(0).is_some_and(|c| c.id() == node.id()),
        "labeled_statement" | "break_statement" | "continue_statement" => false,
        "method_declaration" | "constructor_declaration" | "class_declaration" | "interface_declaration" | "enum_declaration" => {
            !is_field("name")
        }
        "enum_constant" | "annotation" | "marker_annotation" | "element_value_pair" => false,
        "scoped_identifier" | "import_declaration" | "package_declaration" => false,
        _ => true,
    }
}

/// A declared local name and the region where references resolve to it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LocalDecl<'t> {
    pub name_node: Node<'t>,
    /// Node of the whole declaration (declarator, parameter, ...).
    pub decl: Node<'t>,
    pub scope_start: usize,
    pub scope_end: usize,
    pub is_parameter: bool,
}

fn method_like_ancestor(node: Node<'_>) -> Option<Node<'_>> {
    let mut cur = node.parent();
    while let Some(p) = cur {
        if matches!(p.kind(), "method_declaration" | "constructor_declaration" | "lambda_expression") {
            return Some(p);
        }
        if matches!(p.kind(), "class_body") {
            return None;
        }
        cur = p.parent();
    }
    None
}

/// Every local variable and parameter declared in executable code, in source order.
pub(crate) fn local_declarations<'t>(parsed: &'t Parsed<'_>) -> Vec<LocalDecl<'t>> {
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| match n.kind() {
        "formal_parameter" | "spread_parameter" => {
            let name = n.child_by_field_name("name").or_else(|| {
                named_children(n).into_iter().rev().find_map(|c| {
                    if c.kind() == "variable_declarator" {
                        c.child_by_field_name("name")
                    } else {
                        None
                    }
                })
            });
            if let (Some(name), Some(owner)) = (name, method_like_ancestor(n)) {
                out.push(LocalDecl {
                    name_node: name,
                    decl: n,
                    scope_start: owner.start_byte(),
                    scope_end: owner.end_byte(),
                    is_parameter: true,
                });
            }
        }
        "lambda_expression" => {
            if let Some(params) = n.child_by_field_name("parameters") {
                let idents: Vec<_> = if params.kind() == "identifier" {
                    vec![params]
                } else if params.kind() == "inferred_parameters" {
                    named_children(params).into_iter().filter(|c| c.kind() == "identifier").collect()
                } else {
                    Vec::new()
                };
                for id in idents {
                    out.push(LocalDecl {
                        name_node: id,
                        decl: id,
                        scope_start: n.start_byte(),
                        scope_end: n.end_byte(),
                        is_parameter: true,
                    });
                }
            }
        }
        "variable_declarator" => {
            let Some(parent) = n.parent() else { return };
            if parent.kind() != "local_variable_declaration" || !in_executable_body(n) {
                return;
            }
            let Some(name) = n.child_by_field_name("name") else { return };
            let container = parent.parent();
            let (start, end) = match container {
                Some(c) if c.kind() == "for_statement" => (n.start_byte(), c.end_byte()),
                Some(c) => (n.start_byte(), c.end_byte()),
                None => return,
            };
            out.push(LocalDecl { name_node: name, decl: n, scope_start: start, scope_end: end, is_parameter: false });
        }
        "enhanced_for_statement" => {
            if let Some(name) = n.child_by_field_name("name") {
                out.push(LocalDecl {
                    name_node: name,
                    decl: name,
                    scope_start: n.start_byte(),
                    scope_end: n.end_byte(),
                    is_parameter: false,
                });
            }
        }
        "catch_formal_parameter" => {
            if let (Some(name), Some(clause)) = (n.child_by_field_name("name"), n.parent()) {
                out.push(LocalDecl {
                    name_node: name,
                    decl: n,
                    scope_start: clause.start_byte(),
                    scope_end: clause.end_byte(),
                    is_parameter: false,
                });
            }
        }
        _ => {}
    });
    out
}

/// Identifier nodes referring to `decl` (including its own name node).
pub(crate) fn references<'t>(parsed: &'t Parsed<'_>, decl: &LocalDecl<'t>) -> Vec<Node<'t>> {
    let name = parsed.text(decl.name_node);
    syntax::collect(parsed.root(), |n| {
        n.kind() == "identifier"
            && n.start_byte() >= decl.scope_start
            && n.end_byte() <= decl.scope_end
            && parsed.text(n) == name
            && (n.id() == decl.name_node.id() || is_variable_use(n))
    })
}

/// True when a class body inside the declaration's scope declares a member
/// with the same name, which would make references ambiguous.
pub(crate) fn shadowed_by_member(parsed: &Parsed<'_>, decl: &LocalDecl<'_>) -> bool {
    let name = parsed.text(decl.name_node);
    let mut found = false;
    syntax::walk(parsed.root(), |n| {
        if n.kind() == "class_body" && n.start_byte() >= decl.scope_start && n.end_byte() <= decl.scope_end {
            syntax::walk(n, |m| {
                if matches!(m.kind(), "variable_declarator" | "method_declaration")
                    && m.child_by_field_name("name").is_some_and(|x| parsed.text(x) == name)
                {
                    found = true;
                }
            });
        }
    });
    found
}

/// All identifier texts in the source, for fresh-name generation.
pub(crate) fn identifier_set(parsed: &Parsed<'_>) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() == "identifier" {
            names.insert(parsed.text(n).to_string());
        }
    });
    names
}

pub(crate) fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('_');
    }
    name
}

/// Root variable name an assignment target writes to (`a` for `a`, `a[i]`, `this.a`).
pub(crate) fn written_root<'s>(parsed: &Parsed<'s>, target: Node<'_>) -> Option<&'s str> {
    match target.kind() {
        "identifier" => Some(parsed.text(target)),
        "array_access" => target.child_by_field_name("array").and_then(|a| written_root(parsed, a)),
        "field_access" => target.child_by_field_name("field").map(|f| parsed.text(f)),
        "parenthesized_expression" => target.named_child(0).and_then(|c| written_root(parsed, c)),
        _ => None,
    }
}

/// Variable-use identifiers read inside `node`.
pub(crate) fn read_names(parsed: &Parsed<'_>, node: Node<'_>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    syntax::walk(node, |n| {
        if n.kind() == "identifier" && is_variable_use(n) {
            out.insert(parsed.text(n).to_string());
        }
        if n.kind() == "field_access" {
            if let Some(f) = n.child_by_field_name("field") {
                out.insert(parsed.text(f).to_string());
            }
        }
    });
    out
}
