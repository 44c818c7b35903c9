//! Site discovery and span edits for each morphism kind.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use tree_sitter::Node;

use super::analysis::*;
use super::{MorphismConfig, MorphismKind, RenameScheme};
use crate::syntax::{self, Parsed};

/// Replace `start..end` with `text`. Empty ranges are insertions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

impl Edit {
    fn replace(node: Node<'_>, text: impl Into<String>) -> Self {
        Edit { start: node.start_byte(), end: node.end_byte(), text: text.into() }
    }

    fn insert(at: usize, text: impl Into<String>) -> Self {
        Edit { start: at, end: at, text: text.into() }
    }
}

/// Applies non-overlapping edits. At equal start offsets the replacement is
/// applied before the insertion so inserted text lands in front of it.
pub fn apply_edits(source: &str, mut edits: Vec<Edit>) -> String {
    edits.sort_by(|a, b| b.start.cmp(&a.start).then_with(|| (b.end - b.start).cmp(&(a.end - a.start))));
    let mut out = source.to_string();
    let mut floor = usize::MAX;
    for e in edits {
        debug_assert!(e.end <= floor || e.start == e.end, "overlapping edits");
        out.replace_range(e.start..e.end, &e.text);
        floor = e.start;
    }
    out
}

type EditFn = Box<dyn Fn(u64) -> Vec<Edit>>;

pub(crate) struct Candidate {
    pub span: (usize, usize),
    pub descriptor: String,
    pub edits: EditFn,
}

impl Candidate {
    fn fixed(node: Node<'_>, descriptor: String, edits: Vec<Edit>) -> Self {
        Candidate { span: (node.start_byte(), node.end_byte()), descriptor, edits: Box::new(move |_| edits.clone()) }
    }
}

pub(crate) fn candidates(parsed: &Parsed<'_>, kind: MorphismKind, config: &MorphismConfig) -> Vec<Candidate> {
    match kind {
        MorphismKind::Identity => {
            vec![Candidate { span: (0, parsed.source.len()), descriptor: "identity".into(), edits: Box::new(|_| Vec::new()) }]
        }
        MorphismKind::VariableRenaming => variable_renaming(parsed, &config.rename),
        MorphismKind::BooleanExchange => boolean_exchange(parsed),
        MorphismKind::LoopExchange => loop_exchange(parsed),
        MorphismKind::SwitchToIf => switch_to_if(parsed),
        MorphismKind::UnusedStatement => unused_statement(parsed),
        MorphismKind::ReorderCondition => comparisons(parsed, true),
        MorphismKind::PermuteStatement => permute_statement(parsed),
        MorphismKind::ModifyCondition => comparisons(parsed, false),
        MorphismKind::RemoveElse => remove_else(parsed),
    }
}

/// `name#k`, k counting declarations of that name in source order.
fn ordinal_descriptors(parsed: &Parsed<'_>, decls: &[LocalDecl<'_>]) -> Vec<String> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    decls
        .iter()
        .map(|d| {
            let name = parsed.text(d.name_node);
            let k = seen.entry(name).or_default();
            *k += 1;
            format!("{name}#{k}")
        })
        .collect()
}

/// A declaration is ambiguous when another declaration of the same name lives
/// inside its scope (only possible through nested classes).
fn ambiguous(parsed: &Parsed<'_>, decls: &[LocalDecl<'_>], idx: usize) -> bool {
    let d = &decls[idx];
    let name = parsed.text(d.name_node);
    decls.iter().enumerate().any(|(j, o)| {
        j != idx
            && parsed.text(o.name_node) == name
            && o.scope_start >= d.scope_start
            && o.scope_end <= d.scope_end
            && o.name_node.start_byte() > d.name_node.start_byte()
    }) || shadowed_by_member(parsed, d)
}

fn variable_renaming(parsed: &Parsed<'_>, scheme: &RenameScheme) -> Vec<Candidate> {
    let decls = local_declarations(parsed);
    let descriptors = ordinal_descriptors(parsed, &decls);
    let taken = identifier_set(parsed);
    let mut out = Vec::new();
    for (idx, d) in decls.iter().enumerate() {
        if ambiguous(parsed, &decls, idx) {
            continue;
        }
        let spans: Vec<(usize, usize)> = references(parsed, d).iter().map(|r| (r.start_byte(), r.end_byte())).collect();
        let base = format!("var_{}", idx + 1);
        let default_name = if base == parsed.text(d.name_node) { base } else { fresh_name(&base, &taken) };
        let pool: Vec<String> = match scheme {
            RenameScheme::VarN => Vec::new(),
            RenameScheme::Pool(names) => names.iter().filter(|n| !taken.contains(*n)).cloned().collect(),
        };
        out.push(Candidate {
            span: (d.name_node.start_byte(), d.name_node.end_byte()),
            descriptor: descriptors[idx].clone(),
            edits: Box::new(move |seed| {
                let name = if pool.is_empty() { default_name.clone() } else { pool[(seed % pool.len() as u64) as usize].clone() };
                spans.iter().map(|&(s, e)| Edit { start: s, end: e, text: name.clone() }).collect()
            }),
        });
    }
    out
}

fn flip_or_negate(parsed: &Parsed<'_>, value: Node<'_>, edits: &mut Vec<Edit>) {
    match value.kind() {
        "true" => edits.push(Edit::replace(value, "false")),
        "false" => edits.push(Edit::replace(value, "true")),
        "parenthesized_expression" => edits.push(Edit::insert(value.start_byte(), "!")),
        _ => {
            let _ = parsed;
            edits.push(Edit::insert(value.start_byte(), "!("));
            edits.push(Edit::insert(value.end_byte(), ")"));
        }
    }
}

fn boolean_exchange(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let decls = local_declarations(parsed);
    let descriptors = ordinal_descriptors(parsed, &decls);
    let mut out = Vec::new();
    'decl: for (idx, d) in decls.iter().enumerate() {
        if d.is_parameter || d.decl.kind() != "variable_declarator" || ambiguous(parsed, &decls, idx) {
            continue;
        }
        let is_boolean = d.decl.parent().and_then(|p| p.child_by_field_name("type")).is_some_and(|t| t.kind() == "boolean_type");
        if !is_boolean {
            continue;
        }
        let name = parsed.text(d.name_node);
        let mut edits = Vec::new();
        if let Some(value) = d.decl.child_by_field_name("value") {
            flip_or_negate(parsed, value, &mut edits);
        }
        for r in references(parsed, d) {
            if r.id() == d.name_node.id() {
                continue;
            }
            let Some(parent) = r.parent() else { continue 'decl };
            let is_target =
                parent.kind() == "assignment_expression" && parent.child_by_field_name("left").is_some_and(|l| l.id() == r.id());
            if is_target {
                let (Some(op), Some(rhs)) = (parent.child_by_field_name("operator"), parent.child_by_field_name("right")) else {
                    continue 'decl;
                };
                match parsed.text(op) {
                    "=" => flip_or_negate(parsed, rhs, &mut edits),
                    "&=" => {
                        edits.push(Edit::replace(op, "|="));
                        flip_or_negate(parsed, rhs, &mut edits);
                    }
                    "|=" => {
                        edits.push(Edit::replace(op, "&="));
                        flip_or_negate(parsed, rhs, &mut edits);
                    }
                    "^=" => {}
                    _ => continue 'decl,
                }
                continue;
            }
            match parent.kind() {
                "argument_list" | "update_expression" => continue 'decl,
                "unary_expression" if parent.child_by_field_name("operator").is_some_and(|o| parsed.text(o) == "!") => {
                    edits.push(Edit::replace(parent, name));
                }
                _ => edits.push(Edit::replace(r, format!("!{name}"))),
            }
        }
        out.push(Candidate::fixed(d.name_node, descriptors[idx].clone(), edits));
    }
    out
}

/// Re-indents continuation lines of `text` from `from` to `to`.
fn reindent(text: &str, from: &str, to: &str) -> String {
    let mut lines = text.split('\n');
    let mut out = lines.next().unwrap_or_default().to_string();
    for line in lines {
        out.push('\n');
        match line.strip_prefix(from) {
            Some(rest) => {
                out.push_str(to);
                out.push_str(rest);
            }
            None => out.push_str(line),
        }
    }
    out
}

fn block_inner<'s>(parsed: &Parsed<'s>, block: Node<'_>) -> &'s str {
    let text = parsed.text(block);
    text[1..text.len() - 1].trim_end()
}

fn declared_names(parsed: &Parsed<'_>, node: Node<'_>) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    syntax::walk(node, |n| {
        if matches!(n.kind(), "variable_declarator" | "enhanced_for_statement" | "formal_parameter" | "catch_formal_parameter") {
            if let Some(name) = n.child_by_field_name("name") {
                names.insert(parsed.text(name).to_string());
            }
        }
        if n.kind() == "lambda_expression" {
            if let Some(p) = n.child_by_field_name("parameters") {
                names.extend(read_names(parsed, p));
            }
        }
    });
    names
}

fn loop_exchange(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let src = parsed.source;
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if !in_executable_body(n) {
            return;
        }
        match n.kind() {
            "for_statement" => {
                if n.parent().is_some_and(|p| p.kind() == "labeled_statement") {
                    return;
                }
                let Some(body) = n.child_by_field_name("body") else { return };
                if contains_kind(body, &["continue_statement"]) {
                    return;
                }
                let updates = field_children(n, "update");
                if !updates.is_empty() && cannot_complete(parsed, body) {
                    return;
                }
                let inits = field_children(n, "init");
                let indent = line_indent(src, n.start_byte());
                let inner = match statements(body).first() {
                    Some(first) if body.kind() == "block" => line_indent(src, first.start_byte()),
                    _ => format!("{indent}    "),
                };
                let cond = n.child_by_field_name("condition").map_or("true", |c| parsed.text(c));
                let mut body_text =
                    if body.kind() == "block" { block_inner(parsed, body).to_string() } else { format!("\n{inner}{}", parsed.text(body)) };
                for u in &updates {
                    body_text.push_str(&format!("\n{inner}{};", parsed.text(*u)));
                }
                let while_text = format!("while ({cond}) {{{body_text}\n{indent}}}");
                let text = if inits.is_empty() {
                    while_text
                } else {
                    let is_decl = inits.iter().any(|i| i.kind() == "local_variable_declaration");
                    let init_text = if is_decl {
                        parsed.text(inits[0]).to_string()
                    } else {
                        inits.iter().map(|i| format!("{};", parsed.text(*i))).collect::<Vec<_>>().join(" ")
                    };
                    let parent = n.parent();
                    let in_block = parent.is_some_and(|p| matches!(p.kind(), "block" | "switch_block_statement_group"));
                    let clash = is_decl
                        && parent.is_some_and(|p| {
                            let names = declared_names(parsed, inits[0]);
                            let mut later = BTreeSet::new();
                            for s in statements(p).into_iter().filter(|s| s.start_byte() > n.end_byte()) {
                                later.extend(declared_names(parsed, s));
                            }
                            !names.is_disjoint(&later)
                        });
                    if in_block && !clash {
                        format!("{init_text}\n{indent}{while_text}")
                    } else {
                        format!("{{\n{indent}{init_text}\n{indent}{while_text}\n{indent}}}")
                    }
                };
                out.push(Candidate::fixed(n, format!("for@{}", position_tag(n)), vec![Edit::replace(n, text)]));
            }
            "while_statement" => {
                let (Some(cond), Some(body)) = (n.child_by_field_name("condition"), n.child_by_field_name("body")) else {
                    return;
                };
                let cond_inner = cond.named_child(0).map_or(parsed.text(cond), |c| parsed.text(c));
                let text = format!("for (; {cond_inner}; ) {}", parsed.text(body));
                out.push(Candidate::fixed(n, format!("while@{}", position_tag(n)), vec![Edit::replace(n, text)]));
            }
            _ => {}
        }
    });
    out
}

fn is_case_literal(node: Node<'_>) -> bool {
    match node.kind() {
        "decimal_integer_literal"
        | "hex_integer_literal"
        | "octal_integer_literal"
        | "binary_integer_literal"
        | "character_literal"
        | "string_literal" => true,
        "unary_expression" => node.named_child_count() == 1 && node.named_child(0).is_some_and(|c| c.kind().ends_with("integer_literal")),
        _ => false,
    }
}

struct SwitchArm<'t> {
    labels: Vec<Node<'t>>,
    is_default: bool,
    stmts: Vec<Node<'t>>,
    /// Replacement body for arrow rules whose body is a single expression.
    inline: Option<String>,
}

fn switch_to_if(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let src = parsed.source;
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() != "switch_expression" || !in_executable_body(n) {
            return;
        }
        if !n.parent().is_some_and(|p| matches!(p.kind(), "block" | "switch_block_statement_group")) {
            return;
        }
        let (Some(cond), Some(body)) = (n.child_by_field_name("condition"), n.child_by_field_name("body")) else {
            return;
        };
        let Some(selector) = cond.named_child(0) else { return };
        if !is_pure(selector) {
            return;
        }
        let Some(arms) = collect_arms(parsed, body) else { return };
        if let Some(text) = render_if_chain(parsed, n, selector, &arms) {
            out.push(Candidate::fixed(n, format!("switch@{}", position_tag(n)), vec![Edit::replace(n, text)]));
        }
        let _ = src;
    });
    out
}

fn collect_arms<'t>(parsed: &Parsed<'_>, body: Node<'t>) -> Option<Vec<SwitchArm<'t>>> {
    let mut arms: Vec<SwitchArm<'t>> = Vec::new();
    let mut pending: Vec<Node<'t>> = Vec::new();
    let mut pending_default = false;
    let groups = named_children(body);
    let last_idx = groups.len().checked_sub(1)?;
    for (gi, g) in groups.iter().enumerate() {
        match g.kind() {
            "switch_block_statement_group" => {
                for l in named_children(*g).into_iter().filter(|l| l.kind() == "switch_label") {
                    let exprs = named_children(l);
                    if exprs.is_empty() {
                        pending_default = true;
                    }
                    pending.extend(exprs);
                }
                let mut stmts = statements(*g);
                if stmts.is_empty() && gi != last_idx {
                    continue;
                }
                let ends_with_break = stmts
                    .last()
                    .is_some_and(|s| s.kind() == "break_statement" && named_children(*s).iter().all(|c| c.kind() != "identifier"));
                if ends_with_break {
                    stmts.pop();
                } else if gi != last_idx && !stmts.last().is_some_and(|s| cannot_complete(parsed, *s)) {
                    return None;
                }
                if stmts.iter().any(|s| s.kind() == "break_statement" || !escaping_breaks(*s).is_empty()) {
                    return None;
                }
                arms.push(SwitchArm {
                    labels: std::mem::take(&mut pending),
                    is_default: std::mem::take(&mut pending_default),
                    stmts,
                    inline: None,
                });
            }
            "switch_rule" => {
                let kids = named_children(*g);
                let label = kids.iter().find(|k| k.kind() == "switch_label")?;
                let exprs = named_children(*label);
                let rule_body = kids.iter().rev().find(|k| k.kind() != "switch_label")?;
                let (stmts, inline) = match rule_body.kind() {
                    "block" => {
                        if !escaping_breaks(*rule_body).is_empty() {
                            return None;
                        }
                        (statements(*rule_body), None)
                    }
                    "expression_statement" | "throw_statement" => (vec![*rule_body], None),
                    _ => (Vec::new(), Some(format!("{};", parsed.text(*rule_body)))),
                };
                arms.push(SwitchArm { is_default: exprs.is_empty(), labels: exprs, stmts, inline });
            }
            _ => return None,
        }
    }
    if arms.iter().flat_map(|a| &a.labels).any(|l| !is_case_literal(*l)) {
        return None;
    }
    // The default arm may only be last: an if-chain evaluates it after all cases.
    if arms.iter().rev().skip(1).any(|a| a.is_default) {
        return None;
    }
    // Locals declared in one arm must not be visible to another.
    for (i, a) in arms.iter().enumerate() {
        let declared: BTreeSet<String> =
            a.stmts.iter().filter(|s| s.kind() == "local_variable_declaration").flat_map(|s| declared_names(parsed, *s)).collect();
        for (j, b) in arms.iter().enumerate() {
            if i != j && b.stmts.iter().any(|s| !read_names(parsed, *s).is_disjoint(&declared)) {
                return None;
            }
        }
    }
    Some(arms)
}

fn render_if_chain(parsed: &Parsed<'_>, switch: Node<'_>, selector: Node<'_>, arms: &[SwitchArm<'_>]) -> Option<String> {
    let src = parsed.source;
    let cases: Vec<&SwitchArm<'_>> = arms.iter().filter(|a| !a.is_default).collect();
    if cases.is_empty() {
        return None;
    }
    let indent = line_indent(src, switch.start_byte());
    let inner = format!("{indent}    ");
    let sel = if precedence(parsed, selector) < 15 { format!("({})", parsed.text(selector)) } else { parsed.text(selector).to_string() };
    let uses_equals = arms.iter().flat_map(|a| &a.labels).any(|l| l.kind() == "string_literal");
    let body_of = |arm: &SwitchArm<'_>| -> String {
        if let Some(inline) = &arm.inline {
            return format!("\n{inner}{inline}");
        }
        match (arm.stmts.first(), arm.stmts.last()) {
            (Some(first), Some(last)) => {
                let from = line_indent(src, first.start_byte());
                format!("\n{inner}{}", reindent(&src[first.start_byte()..last.end_byte()], &from, &inner))
            }
            _ => String::new(),
        }
    };
    let mut text = String::new();
    for (i, arm) in cases.iter().enumerate() {
        let cond = arm
            .labels
            .iter()
            .map(|l| {
                let lit = parsed.text(*l);
                if uses_equals {
                    format!("{sel}.equals({lit})")
                } else {
                    format!("{sel} == {lit}")
                }
            })
            .collect::<Vec<_>>()
            .join(" || ");
        if i > 0 {
            text.push_str(" else ");
        }
        text.push_str(&format!("if ({cond}) {{{}\n{indent}}}", body_of(arm)));
    }
    if let Some(default) = arms.iter().find(|a| a.is_default) {
        let body = body_of(default);
        if !body.is_empty() {
            text.push_str(&format!(" else {{{body}\n{indent}}}"));
        }
    }
    Some(text)
}

fn unused_statement(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let src = parsed.source;
    let taken = identifier_set(parsed);
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() != "block" || !in_executable_body(n) {
            return;
        }
        let at = n.start_byte() + 1;
        let first = statements(n).first().copied();
        let gap_end = first.map_or(n.end_byte() - 1, |f| f.start_byte());
        let multiline = src[at..gap_end].contains('\n');
        let indent = match first {
            Some(f) if multiline => line_indent(src, f.start_byte()),
            _ => format!("{}    ", line_indent(src, n.start_byte())),
        };
        let taken = taken.clone();
        out.push(Candidate {
            span: (n.start_byte(), n.end_byte()),
            descriptor: format!("block@{}", position_tag(n)),
            edits: Box::new(move |seed| {
                let name = fresh_name(&format!("unused_{seed}"), &taken);
                let decl = format!("String {name} = \"unused\";");
                let text = if multiline { format!("\n{indent}{decl}") } else { format!(" {decl}") };
                vec![Edit::insert(at, text)]
            }),
        });
    });
    out
}

fn mirror(op: &str) -> &'static str {
    match op {
        "<" => ">",
        ">" => "<",
        "<=" => ">=",
        ">=" => "<=",
        "==" => "==",
        _ => "!=",
    }
}

fn weaken(op: &str) -> &'static str {
    match op {
        "<" => "<=",
        "<=" => "<",
        ">" => ">=",
        ">=" => ">",
        "==" => "!=",
        _ => "==",
    }
}

fn comparisons(parsed: &Parsed<'_>, reorder: bool) -> Vec<Candidate> {
    const OPS: [&str; 6] = ["<", ">", "<=", ">=", "==", "!="];
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() != "binary_expression" || !in_executable_body(n) {
            return;
        }
        let (Some(left), Some(op), Some(right)) =
            (n.child_by_field_name("left"), n.child_by_field_name("operator"), n.child_by_field_name("right"))
        else {
            return;
        };
        let op_text = parsed.text(op);
        if !OPS.contains(&op_text) {
            return;
        }
        let squashed = parsed.text(n).split_whitespace().collect::<Vec<_>>().join(" ");
        let descriptor = format!("{squashed}@{}", position_tag(n));
        if reorder {
            // Swapping operands changes evaluation order.
            if has_effects(left) && has_effects(right) {
                return;
            }
            let own = binary_precedence(op_text);
            let wrap = |x: Node<'_>| {
                if precedence(parsed, x) <= own {
                    format!("({})", parsed.text(x))
                } else {
                    parsed.text(x).to_string()
                }
            };
            let text = format!("{} {} {}", wrap(right), mirror(op_text), wrap(left));
            out.push(Candidate::fixed(n, descriptor, vec![Edit::replace(n, text)]));
        } else {
            out.push(Candidate::fixed(n, descriptor, vec![Edit::replace(op, weaken(op_text))]));
        }
    });
    out
}

struct Effects {
    reads: BTreeSet<String>,
    writes: BTreeSet<String>,
    may_throw: bool,
}

fn simple_statement_effects(parsed: &Parsed<'_>, stmt: Node<'_>) -> Option<Effects> {
    match stmt.kind() {
        "local_variable_declaration" => {}
        "expression_statement" => {
            let expr = stmt.named_child(0)?;
            if !matches!(expr.kind(), "assignment_expression" | "update_expression") {
                return None;
            }
        }
        _ => return None,
    }
    if contains_kind(
        stmt,
        &["method_invocation", "object_creation_expression", "lambda_expression", "method_reference", "switch_expression"],
    ) {
        return None;
    }
    let mut writes = BTreeSet::new();
    let mut may_throw = false;
    syntax::walk(stmt, |n| match n.kind() {
        "variable_declarator" => {
            if let Some(name) = n.child_by_field_name("name") {
                writes.insert(parsed.text(name).to_string());
            }
        }
        "assignment_expression" => {
            if let Some(root) = n.child_by_field_name("left").and_then(|l| written_root(parsed, l)) {
                writes.insert(root.to_string());
            }
        }
        "update_expression" => {
            if let Some(root) = n.named_child(0).and_then(|t| written_root(parsed, t)) {
                writes.insert(root.to_string());
            }
        }
        "array_access" | "cast_expression" | "array_creation_expression" => may_throw = true,
        "field_access" => may_throw |= n.child_by_field_name("object").is_some_and(|o| o.kind() != "this"),
        "binary_expression" => may_throw |= n.child_by_field_name("operator").is_some_and(|o| matches!(parsed.text(o), "/" | "%")),
        _ => {}
    });
    Some(Effects { reads: read_names(parsed, stmt), writes, may_throw })
}

fn permute_statement(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if !matches!(n.kind(), "block" | "switch_block_statement_group") || !in_executable_body(n) {
            return;
        }
        let stmts = statements(n);
        for pair in stmts.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let (Some(ea), Some(eb)) = (simple_statement_effects(parsed, a), simple_statement_effects(parsed, b)) else {
                continue;
            };
            let independent = ea.writes.is_disjoint(&eb.reads) && ea.writes.is_disjoint(&eb.writes) && eb.writes.is_disjoint(&ea.reads);
            if !independent || (ea.may_throw && eb.may_throw) {
                continue;
            }
            let edits = vec![Edit::replace(a, parsed.text(b)), Edit::replace(b, parsed.text(a))];
            out.push(Candidate {
                span: (a.start_byte(), b.end_byte()),
                descriptor: format!("stmts@{}+{}", position_tag(a), position_tag(b)),
                edits: Box::new(move |_| edits.clone()),
            });
        }
    });
    out
}

fn uninitialized_locals(parsed: &Parsed<'_>) -> BTreeSet<String> {
    let mut names = BTreeSet::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() == "variable_declarator"
            && n.child_by_field_name("value").is_none()
            && n.parent().is_some_and(|p| p.kind() == "local_variable_declaration")
        {
            if let Some(name) = n.child_by_field_name("name") {
                names.insert(parsed.text(name).to_string());
            }
        }
    });
    names
}

fn remove_else(parsed: &Parsed<'_>) -> Vec<Candidate> {
    let uninit = uninitialized_locals(parsed);
    let mut out = Vec::new();
    syntax::walk(parsed.root(), |n| {
        if n.kind() != "if_statement" || !in_executable_body(n) {
            return;
        }
        let (Some(cons), Some(alt)) = (n.child_by_field_name("consequence"), n.child_by_field_name("alternative")) else {
            return;
        };
        if alt.kind() == "block" && statements(alt).is_empty() {
            return;
        }
        // Both branches leaving means the code after the if was unreachable;
        // dropping one would let control fall off the end.
        if cannot_complete(parsed, cons) && cannot_complete(parsed, alt) {
            return;
        }
        let mut assigns_uninit = false;
        syntax::walk(alt, |m| {
            if m.kind() == "assignment_expression" {
                if let Some(root) = m.child_by_field_name("left").and_then(|l| written_root(parsed, l)) {
                    assigns_uninit |= uninit.contains(root);
                }
            }
        });
        if assigns_uninit {
            return;
        }
        let edit = Edit { start: cons.end_byte(), end: alt.end_byte(), text: String::new() };
        out.push(Candidate::fixed(n, format!("if@{}", position_tag(n)), vec![edit]));
    });
    out
}
