//! Control-flow structure trees built from the token stream.
//!
//! Each method (or free-standing snippet) becomes a [`MethodUnit`] whose body
//! is a tree of [`StructuralNode`]s. Nodes carry the nesting depth at which
//! they occur; the metric walkers never need to look at tokens again.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use crate::lexer::{Language, LanguageProfile, Position, Token, TokenKind};

pub const SNIPPET_NAME: &str = "<snippet>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructKind {
    MethodDecl,
    If,
    ElseIf,
    Else,
    Ternary,
    Switch,
    For,
    Foreach,
    While,
    DoWhile,
    Catch,
    GotoLabelJump,
    BreakLabeled,
    ContinueLabeled,
    Lambda,
    LogicalOperatorSequence,
    RecursiveCall,
    Block,
}

/// How a construct contributes to Cognitive Complexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contribution {
    /// +1 plus the nesting depth.
    Structural,
    /// +1 regardless of nesting.
    Flat,
    /// No increment, but raises the nesting of its body.
    NestingOnly,
    Neutral,
}

impl ConstructKind {
    pub fn contribution(self) -> Contribution {
        use ConstructKind::*;
        match self {
            If | Ternary | Switch | For | Foreach | While | DoWhile | Catch => Contribution::Structural,
            ElseIf
            | Else
            | GotoLabelJump
            | BreakLabeled
            | ContinueLabeled
            | LogicalOperatorSequence
            | RecursiveCall => Contribution::Flat,
            Lambda => Contribution::NestingOnly,
            MethodDecl | Block => Contribution::Neutral,
        }
    }

    /// Whether the body of this construct sits one nesting level deeper.
    pub fn nests_body(self) -> bool {
        use ConstructKind::*;
        matches!(
            self,
            If | ElseIf | Else | Ternary | Switch | For | Foreach | While | DoWhile | Catch | Lambda
        )
    }

    pub fn as_str(self) -> &'static str {
        use ConstructKind::*;
        match self {
            MethodDecl => "method-decl",
            If => "if",
            ElseIf => "else-if",
            Else => "else",
            Ternary => "ternary",
            Switch => "switch",
            For => "for",
            Foreach => "foreach",
            While => "while",
            DoWhile => "do-while",
            Catch => "catch",
            GotoLabelJump => "goto-label-jump",
            BreakLabeled => "break-labeled",
            ContinueLabeled => "continue-labeled",
            Lambda => "lambda",
            LogicalOperatorSequence => "logical-operator-sequence",
            RecursiveCall => "recursive-call",
            Block => "block",
        }
    }
}

impl fmt::Display for ConstructKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Span {
    pub start: Position,
    pub end: Position,
}

impl Span {
    pub fn of(token: &Token) -> Span {
        Span {
            start: token.pos(),
            end: token.end(),
        }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralNode {
    pub kind: ConstructKind,
    pub nesting_depth: u32,
    pub span: Span,
    /// Operator spelling for logical sequences, callee for recursive calls,
    /// function name for named nested functions.
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    /// Case labels of a switch, operator occurrences of a logical sequence.
    #[serde(skip_serializing_if = "is_zero")]
    pub count: u32,
    /// Nodes from the construct's header (conditions, loop headers). They sit
    /// at the construct's own depth.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub header: Vec<StructuralNode>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<StructuralNode>,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

impl StructuralNode {
    fn new(kind: ConstructKind, depth: u32, span: Span) -> Self {
        StructuralNode {
            kind,
            nesting_depth: depth,
            span,
            detail: String::new(),
            count: 0,
            header: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Depth assigned to body children.
    pub fn child_depth(&self) -> u32 {
        if self.kind.nests_body() {
            self.nesting_depth + 1
        } else {
            self.nesting_depth
        }
    }

    /// Pre-order walk over this node, its header nodes and its children.
    pub fn walk(&self) -> Walk<'_> {
        Walk { stack: vec![self] }
    }

    /// Pre-order walk that skips `self`.
    pub fn descendants(&self) -> impl Iterator<Item = &StructuralNode> {
        self.walk().skip(1)
    }
}

pub struct Walk<'a> {
    stack: Vec<&'a StructuralNode>,
}

impl<'a> Iterator for Walk<'a> {
    type Item = &'a StructuralNode;

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.stack.pop()?;
        for child in node.children.iter().rev() {
            self.stack.push(child);
        }
        for h in node.header.iter().rev() {
            self.stack.push(h);
        }
        Some(node)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodUnit {
    pub name: String,
    #[serde(skip)]
    pub simple_name: String,
    pub parameters: String,
    pub body: StructuralNode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<PathBuf>,
    pub span: Span,
    /// Non-blank, non-comment lines.
    pub loc: u32,
    /// Set when the builder had to close scopes at end of input.
    pub tolerant: bool,
}

impl MethodUnit {
    pub fn is_snippet(&self) -> bool {
        self.name == SNIPPET_NAME
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildDiagnostic {
    UnbalancedBraces { at: Position },
}

impl fmt::Display for BuildDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildDiagnostic::UnbalancedBraces { at } => write!(f, "{at}: unbalanced braces"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BuildOutput {
    pub units: Vec<MethodUnit>,
    pub diagnostics: Vec<BuildDiagnostic>,
}

/// Builds one [`MethodUnit`] per method found in `tokens`. Top-level
/// statements are collected into a synthetic `<snippet>` unit.
pub fn build_structure(tokens: &[Token], profile: &LanguageProfile) -> BuildOutput {
    let tokens = with_eoi(tokens);
    let mut parser = Parser::new(&tokens, profile);
    let mut state = FileState::default();
    parser.declarations(&mut Vec::new(), true, &mut state);

    let mut units = state.units;
    let has_snippet_structure = state
        .snippet_nodes
        .iter()
        .any(|n| n.walk().any(|d| d.kind.contribution() != Contribution::Neutral));
    if let Some(span) = state.snippet_span {
        if units.is_empty() || has_snippet_structure {
            let mut body = StructuralNode::new(ConstructKind::MethodDecl, 0, span);
            body.children = state.snippet_nodes;
            units.push(MethodUnit {
                name: SNIPPET_NAME.to_string(),
                simple_name: SNIPPET_NAME.to_string(),
                parameters: String::new(),
                body,
                source: None,
                span,
                loc: state.snippet_lines.len().max(1) as u32,
                tolerant: state.snippet_tolerant,
            });
        }
    }
    units.sort_by_key(|u| u.span.start);
    BuildOutput {
        units,
        diagnostics: parser.diagnostics,
    }
}

/// Finds logical-operator runs in one expression context.
pub fn detect_logical_sequences(tokens: &[Token], profile: &LanguageProfile) -> Vec<StructuralNode> {
    let tokens = with_eoi(tokens);
    let mut parser = Parser::new(&tokens, profile);
    let mut nodes = Vec::new();
    while !parser.at_eoi() {
        let before = parser.pos;
        nodes.extend(parser.expression(0, Stop::NONE));
        if parser.pos == before {
            parser.bump();
        }
    }
    let root = StructuralNode {
        children: nodes,
        ..StructuralNode::new(
            ConstructKind::Block,
            0,
            Span::default_at(Position { line: 1, column: 1 }),
        )
    };
    root.descendants()
        .filter(|n| n.kind == ConstructKind::LogicalOperatorSequence)
        .cloned()
        .collect()
}

/// Direct self-invocation sites of `unit`. A call counts when its callee is the
/// unit itself or a named function nested inside it; calls between different
/// methods (indirect recursion) are never reported.
pub fn detect_recursion(unit: &MethodUnit, all_units: &[MethodUnit]) -> Vec<StructuralNode> {
    let nested: BTreeSet<&str> = unit
        .body
        .descendants()
        .filter(|n| n.kind == ConstructKind::Lambda && !n.detail.is_empty())
        .map(|n| n.detail.as_str())
        .collect();
    let declared = |name: &str| nested.contains(name) || all_units.iter().any(|u| u.simple_name == name);
    unit.body
        .descendants()
        .filter(|n| n.kind == ConstructKind::RecursiveCall)
        .filter(|n| (n.detail == unit.simple_name || nested.contains(n.detail.as_str())) && declared(&n.detail))
        .cloned()
        .collect()
}

impl Span {
    fn default_at(p: Position) -> Span {
        Span { start: p, end: p }
    }
}

fn with_eoi(tokens: &[Token]) -> Vec<Token> {
    let mut v = tokens.to_vec();
    if !v.last().is_some_and(Token::is_eoi) {
        let (line, column) = v.last().map(|t| (t.end().line, t.end().column + 1)).unwrap_or((1, 1));
        v.push(Token {
            kind: TokenKind::EndOfInput,
            text: String::new(),
            line,
            column,
        });
    }
    v
}

#[derive(Default)]
struct FileState {
    units: Vec<MethodUnit>,
    snippet_nodes: Vec<StructuralNode>,
    snippet_lines: BTreeSet<u32>,
    snippet_span: Option<Span>,
    snippet_tolerant: bool,
}

/// Which tokens end an expression at bracket level zero. Closing brackets
/// always do.
#[derive(Clone, Copy)]
struct Stop {
    semicolon: bool,
    comma: bool,
    colon: bool,
    arrow: bool,
    /// Statement keywords on a new line end the expression (JS without semicolons).
    statement: bool,
}

impl Stop {
    const NONE: Stop = Stop {
        semicolon: false,
        comma: false,
        colon: false,
        arrow: false,
        statement: false,
    };
    const STATEMENT: Stop = Stop {
        semicolon: true,
        statement: true,
        ..Stop::NONE
    };
    const HEADER: Stop = Stop {
        semicolon: true,
        ..Stop::NONE
    };
    const BRANCH: Stop = Stop {
        semicolon: true,
        comma: true,
        colon: true,
        ..Stop::NONE
    };
}

const STATEMENT_KEYWORDS: &[&str] = &[
    "if", "for", "foreach", "while", "do", "switch", "try", "return", "throw", "break", "continue", "goto", "function",
    "class", "var", "let", "const",
];

const CLASS_KEYWORDS: &[&str] = &["class", "struct", "interface", "enum", "namespace", "union"];

const ASSIGNMENT_OPS: &[&str] = &[
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=", "&&=", "||=", "??=", "**=",
];

/// Per-run state of logical operator sequence detection.
#[derive(Default, Clone)]
struct Run {
    op: Option<String>,
    node: Option<usize>,
}

struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    profile: &'t LanguageProfile,
    lang: Language,
    /// Enclosing named functions, innermost last.
    names: Vec<String>,
    diagnostics: Vec<BuildDiagnostic>,
    unbalanced: bool,
}

impl<'t> Parser<'t> {
    fn new(toks: &'t [Token], profile: &'t LanguageProfile) -> Self {
        Parser {
            toks,
            pos: 0,
            profile,
            lang: profile.language,
            names: Vec::new(),
            diagnostics: Vec::new(),
            unbalanced: false,
        }
    }

    fn tok(&self) -> &'t Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek(&self, n: usize) -> &'t Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn prev(&self) -> Option<&'t Token> {
        self.pos.checked_sub(1).map(|i| &self.toks[i])
    }

    fn at(&self, text: &str) -> bool {
        self.tok().is(text)
    }

    fn at_eoi(&self) -> bool {
        self.tok().is_eoi()
    }

    fn bump(&mut self) -> &'t Token {
        let t = self.tok();
        if !t.is_eoi() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn last_end(&self) -> Position {
        self.prev().map(Token::end).unwrap_or_else(|| self.tok().pos())
    }

    fn span_from(&self, start: Position) -> Span {
        let end = self.last_end().max(start);
        Span { start, end }
    }

    fn unbalanced_at(&mut self, at: Position) {
        self.unbalanced = true;
        self.diagnostics.push(BuildDiagnostic::UnbalancedBraces { at });
    }

    /// Index of the token closing the bracket opened at `open`, or the EOI index.
    fn matching(&self, open: usize) -> usize {
        let mut depth = 0i32;
        let mut i = open;
        while i < self.toks.len() {
            let t = &self.toks[i];
            if t.is_eoi() {
                return i;
            }
            if t.kind == TokenKind::Punctuator {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        depth -= 1;
                        if depth == 0 {
                            return i;
                        }
                    }
                    _ => {}
                }
            }
            i += 1;
        }
        self.toks.len() - 1
    }

    fn skip_balanced(&mut self) {
        let end = self.matching(self.pos);
        if self.toks[end].is_eoi() {
            let at = self.tok().pos();
            self.unbalanced_at(at);
        }
        self.pos = end;
        self.bump();
    }

    fn skip_past_semicolon(&mut self) {
        while !self.at_eoi() && !self.at(";") && !self.at("}") {
            if self.at("(") || self.at("[") || self.at("{") {
                self.skip_balanced();
            } else {
                self.bump();
            }
        }
        self.eat(";");
    }

    fn is_statement_keyword(&self, t: &Token) -> bool {
        t.kind == TokenKind::Keyword && STATEMENT_KEYWORDS.contains(&t.text.as_str())
            || (self.lang == Language::Javascript && t.kind == TokenKind::Identifier && t.text == "let")
    }

    // ---------------------------------------------------------------------
    // Declaration level
    // ---------------------------------------------------------------------

    fn declarations(&mut self, container: &mut Vec<String>, top_level: bool, state: &mut FileState) {
        loop {
            let t = self.tok();
            if t.is_eoi() {
                if !top_level {
                    let at = t.pos();
                    self.unbalanced_at(at);
                }
                return;
            }
            if t.is("}") {
                self.bump();
                if top_level {
                    self.unbalanced_at(t.pos());
                    continue;
                }
                return;
            }
            if t.is(";") {
                self.bump();
                continue;
            }
            if self.skip_preamble(container, top_level, state) {
                continue;
            }
            self.declaration_item(container, top_level, state);
        }
    }

    /// Skips package/import/using directives, annotations, attributes,
    /// template heads and access labels. Returns true when something was consumed.
    fn skip_preamble(&mut self, container: &mut Vec<String>, top_level: bool, state: &mut FileState) -> bool {
        let t = self.tok();
        let next = self.peek(1);
        match (self.lang, t.text.as_str()) {
            (Language::Java, "package" | "import") if t.kind == TokenKind::Keyword => {
                self.skip_past_semicolon();
                true
            }
            (Language::Javascript, "import") if !next.is("(") && !next.is(".") => {
                while !self.at_eoi() && !self.at(";") && self.tok().kind != TokenKind::Literal {
                    if self.at("{") {
                        self.skip_balanced();
                    } else {
                        self.bump();
                    }
                }
                self.bump();
                self.eat(";");
                true
            }
            (Language::Javascript, "export") => {
                self.bump();
                self.eat("default");
                true
            }
            (Language::Java | Language::Javascript, "@") if !next.is("interface") => {
                self.bump();
                self.bump();
                while self.at(".") {
                    self.bump();
                    self.bump();
                }
                if self.at("(") {
                    self.skip_balanced();
                }
                true
            }
            (Language::Java, "@") => {
                self.bump();
                true
            }
            (Language::Csharp, "[") => {
                self.skip_balanced();
                true
            }
            (Language::Csharp, "using") if !next.is("(") && !(next.is("var") && top_level) => {
                if top_level && (next.kind == TokenKind::Identifier && self.peek(2).is("=") && self.peek(3).is("new")) {
                    return false;
                }
                self.skip_past_semicolon();
                true
            }
            (Language::Cpp, "using") => {
                self.skip_past_semicolon();
                true
            }
            (Language::Cpp, "template") if next.is("<") => {
                self.bump();
                self.skip_angles();
                true
            }
            (Language::Cpp, "public" | "private" | "protected") if next.is(":") => {
                self.bump();
                self.bump();
                true
            }
            (Language::C | Language::Cpp, "typedef") => {
                self.skip_past_semicolon();
                true
            }
            (Language::C | Language::Cpp, "extern") if next.kind == TokenKind::Literal => {
                self.bump();
                self.bump();
                if self.eat("{") {
                    self.declarations(container, top_level, state);
                }
                true
            }
            _ => false,
        }
    }

    fn skip_angles(&mut self) {
        let mut depth = 0i32;
        loop {
            let t = self.tok();
            if t.is_eoi() {
                return;
            }
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => depth -= 1,
                ">>" => depth -= 2,
                "(" | "[" | "{" => {
                    self.skip_balanced();
                    continue;
                }
                _ => {}
            }
            self.bump();
            if depth <= 0 {
                return;
            }
        }
    }

    /// Scans forward from the current token to the first `{`, `;`, `}` or
    /// `=>` at bracket level zero. Returns its index.
    fn item_end(&self) -> usize {
        let mut i = self.pos;
        loop {
            let t = &self.toks[i];
            if t.is_eoi() {
                return i;
            }
            if t.kind == TokenKind::Punctuator {
                match t.text.as_str() {
                    "{" | ";" | "}" => return i,
                    "(" | "[" => {
                        let close = self.matching(i);
                        if self.toks[close].is_eoi() {
                            return close;
                        }
                        i = close + 1;
                        continue;
                    }
                    _ => {}
                }
            } else if t.is("=>") {
                return i;
            }
            i += 1;
        }
    }

    fn declaration_item(&mut self, container: &mut Vec<String>, top_level: bool, state: &mut FileState) {
        let start = self.pos;
        let end = self.item_end();
        let end_tok = &self.toks[end];
        let first = self.tok();

        let starts_statement = top_level
            && (first.is("{")
                || (self.is_statement_keyword(first)
                    && !first.is("function")
                    && !first.is("class")
                    && !(first.is("const") && self.lang != Language::Javascript)
                    && !(matches!(first.text.as_str(), "var" | "let" | "const")
                        && self.js_function_assignment(start, end).is_some())));

        if !starts_statement && (end_tok.is("{") || end_tok.is("=>")) {
            if let Some(header) = self.method_header(start, end, top_level) {
                self.method(header, container, state);
                return;
            }
            if let Some(kw) = self.class_keyword(start, end) {
                if end_tok.is("{") {
                    let name = self.toks[kw + 1..end]
                        .iter()
                        .find(|t| t.kind == TokenKind::Identifier)
                        .map(|t| t.text.clone())
                        .unwrap_or_default();
                    self.pos = end + 1;
                    let pushed = !name.is_empty();
                    if pushed {
                        container.push(name);
                    }
                    self.declarations(container, false, state);
                    if pushed {
                        container.pop();
                    }
                    return;
                }
            }
        }
        if !starts_statement && end_tok.is(";") {
            if let Some(kw) = self.class_keyword(start, end) {
                // file-scoped namespace or forward declaration
                if self.toks[kw].is("namespace") {
                    if let Some(name) = self.toks[kw + 1..end].iter().find(|t| t.kind == TokenKind::Identifier) {
                        container.push(name.text.clone());
                    }
                }
                self.pos = end + 1;
                return;
            }
        }

        if top_level {
            self.snippet_statement(state);
        } else {
            // field, property or initializer inside a type body
            self.pos = end;
            if self.at("{") {
                self.skip_balanced();
            } else if self.at("=>") {
                self.skip_past_semicolon();
            } else if self.at(";") {
                self.bump();
            }
        }
    }

    fn snippet_statement(&mut self, state: &mut FileState) {
        let start_pos = self.pos;
        let start = self.tok().pos();
        let was_unbalanced = self.unbalanced;
        self.unbalanced = false;
        let nodes = self.statement(0);
        if self.pos == start_pos {
            self.bump();
        }
        if self.unbalanced {
            state.snippet_tolerant = true;
        }
        self.unbalanced |= was_unbalanced;
        for t in &self.toks[start_pos..self.pos] {
            if !t.is_eoi() {
                state.snippet_lines.extend(t.line..=t.end().line);
            }
        }
        let span = self.span_from(start);
        state.snippet_span = Some(match state.snippet_span {
            None => span,
            Some(s) => Span {
                start: s.start.min(span.start),
                end: s.end.max(span.end),
            },
        });
        state.snippet_nodes.extend(nodes);
    }

    fn class_keyword(&self, start: usize, end: usize) -> Option<usize> {
        (start..end).find(|&i| {
            let t = &self.toks[i];
            (t.kind == TokenKind::Keyword && CLASS_KEYWORDS.contains(&t.text.as_str()))
                || (matches!(self.lang, Language::Java | Language::Csharp)
                    && t.kind == TokenKind::Identifier
                    && t.text == "record"
                    && self.toks.get(i + 1).is_some_and(|n| n.kind == TokenKind::Identifier))
        })
    }

    /// Recognizes a method/function header spanning `start..end` where
    /// `toks[end]` opens the body (`{` or `=>`).
    fn method_header(&self, start: usize, end: usize, top_level: bool) -> Option<MethodHeader> {
        if self.lang == Language::Javascript {
            if let Some(h) = self.js_function_assignment(start, end) {
                return Some(h);
            }
            if let Some(h) = self.js_function_declaration(start, end) {
                return Some(h);
            }
            if top_level {
                return None;
            }
        }
        // records look like methods but declare types
        if self.class_keyword(start, end).is_some_and(|k| {
            let t = &self.toks[k];
            t.text == "record" || (self.lang != Language::C && !(start..k).any(|i| self.toks[i].is("(")))
        }) {
            let first_paren = (start..end).find(|&i| self.toks[i].is("("));
            let kw = self.class_keyword(start, end)?;
            if first_paren.is_none_or(|p| kw < p) && self.toks[kw].text != "struct" {
                return None;
            }
            if self.toks[kw].text == "record" {
                return None;
            }
        }

        let mut i = start;
        while i < end {
            if self.toks[i].is("(") {
                break;
            }
            if self.toks[i].is("[") {
                i = self.matching(i);
            }
            i += 1;
        }
        if i >= end {
            return None;
        }
        let open = i;
        let name_idx = open.checked_sub(1).filter(|&n| n >= start)?;
        let name_tok = &self.toks[name_idx];
        let operator_overload =
            self.lang == Language::Cpp && (start..name_idx + 1).any(|k| self.toks[k].is("operator"));
        if name_tok.kind != TokenKind::Identifier && !operator_overload {
            return None;
        }
        if name_idx > start {
            let before = &self.toks[name_idx - 1];
            if before.is(".") || before.is("=") || before.is("new") || before.is("return") || before.is("?.") {
                return None;
            }
            if before.kind == TokenKind::Operator
                && !matches!(
                    before.text.as_str(),
                    "*" | "&" | "&&" | "::" | "~" | "<" | ">" | ">>" | "?" | "!" | "^" | "%"
                )
            {
                return None;
            }
        } else if top_level && !matches!(self.lang, Language::Cpp | Language::C) {
            // a bare `name(...) {` at file scope is a call followed by a block
            return None;
        } else if top_level {
            return None;
        }
        if (start..name_idx).any(|k| {
            let t = &self.toks[k];
            t.is("=")
                || t.is(";")
                || t.is("return")
                || (t.kind == TokenKind::Keyword && ["if", "while", "for", "switch"].contains(&t.text.as_str()))
        }) {
            return None;
        }
        let close = self.matching(open);
        if close >= end {
            return None;
        }
        // trailing qualifiers between `)` and the body
        let mut k = close + 1;
        while k < end {
            let t = &self.toks[k];
            let ok = match t.kind {
                TokenKind::Identifier | TokenKind::Keyword => !t.is("function") && !t.is("new"),
                TokenKind::Punctuator => matches!(t.text.as_str(), "," | "(" | ")" | "[" | "]"),
                TokenKind::Operator => matches!(
                    t.text.as_str(),
                    "." | "::" | "<" | ">" | ">>" | "*" | "&" | "&&" | "->" | ":" | "?"
                ),
                TokenKind::Literal => self.lang == Language::Cpp,
                TokenKind::EndOfInput => false,
            };
            if !ok {
                return None;
            }
            k += 1;
        }

        let mut simple = name_tok.text.clone();
        let mut qualifier = Vec::new();
        if operator_overload {
            let op_idx = (start..=name_idx)
                .rfind(|&k| self.toks[k].is("operator"))
                .unwrap_or(name_idx);
            simple = self.toks[op_idx..open].iter().map(|t| t.text.as_str()).collect();
        }
        // Foo::bar, Foo::~Foo
        let mut q = name_idx;
        if q > start && self.toks[q - 1].is("~") {
            simple = format!("~{simple}");
            q -= 1;
        }
        while q >= start + 2 && self.toks[q - 1].is("::") && self.toks[q - 2].kind == TokenKind::Identifier {
            qualifier.insert(0, self.toks[q - 2].text.clone());
            q -= 2;
        }
        Some(MethodHeader {
            start,
            simple_name: simple,
            qualifier,
            params: (open + 1, close),
            body: end,
        })
    }

    /// `function name(...) {` (optionally `async` / generator).
    fn js_function_declaration(&self, start: usize, end: usize) -> Option<MethodHeader> {
        let mut i = start;
        while i < end && (self.toks[i].is("async") || self.toks[i].is("static")) {
            i += 1;
        }
        if !self.toks[i].is("function") {
            return None;
        }
        i += 1;
        if self.toks[i].is("*") {
            i += 1;
        }
        let name = &self.toks[i];
        if name.kind != TokenKind::Identifier || !self.toks[i + 1].is("(") {
            return None;
        }
        let close = self.matching(i + 1);
        if close + 1 != end || !self.toks[end].is("{") {
            return None;
        }
        Some(MethodHeader {
            start,
            simple_name: name.text.clone(),
            qualifier: Vec::new(),
            params: (i + 2, close),
            body: end,
        })
    }

    /// `name = function (...) {`, `name = (...) => ...`, `name = x => ...`.
    fn js_function_assignment(&self, start: usize, end: usize) -> Option<MethodHeader> {
        if self.lang != Language::Javascript {
            return None;
        }
        let eq = (start..end).find(|&i| self.toks[i].is("="))?;
        let name = eq.checked_sub(1).filter(|&n| n >= start)?;
        if self.toks[name].kind != TokenKind::Identifier {
            return None;
        }
        let mut i = eq + 1;
        if self.toks[i].is("async") && i < end {
            i += 1;
        }
        let end_tok = &self.toks[end];
        let params = if self.toks[i].is("function") && end_tok.is("{") {
            i += 1;
            if self.toks[i].is("*") {
                i += 1;
            }
            if self.toks[i].kind == TokenKind::Identifier {
                i += 1;
            }
            if !self.toks[i].is("(") {
                return None;
            }
            let close = self.matching(i);
            if close + 1 != end {
                return None;
            }
            (i + 1, close)
        } else if end_tok.is("=>") {
            if self.toks[i].is("(") {
                let close = self.matching(i);
                if close + 1 != end {
                    return None;
                }
                (i + 1, close)
            } else if self.toks[i].kind == TokenKind::Identifier && i + 1 == end {
                (i, i + 1)
            } else {
                return None;
            }
        } else {
            return None;
        };
        Some(MethodHeader {
            start,
            simple_name: self.toks[name].text.clone(),
            qualifier: Vec::new(),
            params,
            body: end,
        })
    }

    fn method(&mut self, header: MethodHeader, container: &[String], state: &mut FileState) {
        let sep = match self.lang {
            Language::C | Language::Cpp => "::",
            _ => ".",
        };
        let name = container
            .iter()
            .chain(header.qualifier.iter())
            .cloned()
            .chain(std::iter::once(header.simple_name.clone()))
            .collect::<Vec<_>>()
            .join(sep);
        let parameters = self.toks[header.params.0..header.params.1]
            .iter()
            .map(|t| t.text.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        let start = self.toks[header.start].pos();
        let first_index = header.start;
        let was_unbalanced = self.unbalanced;
        self.unbalanced = false;

        self.pos = header.body;
        self.names.push(header.simple_name.clone());
        let children = if self.eat("{") {
            self.block_contents(0)
        } else {
            self.bump(); // =>
            let nodes = if self.at("{") {
                self.bump();
                self.block_contents(0)
            } else {
                self.expression(0, Stop::STATEMENT)
            };
            self.eat(";");
            nodes
        };
        self.names.pop();

        let span = self.span_from(start);
        let lines: BTreeSet<u32> = self.toks[first_index..self.pos]
            .iter()
            .filter(|t| !t.is_eoi())
            .flat_map(|t| t.line..=t.end().line)
            .collect();
        let mut body = StructuralNode::new(ConstructKind::MethodDecl, 0, span);
        body.children = children;
        body.detail = header.simple_name.clone();
        state.units.push(MethodUnit {
            name,
            simple_name: header.simple_name,
            parameters,
            body,
            source: None,
            span,
            loc: lines.len().max(1) as u32,
            tolerant: self.unbalanced,
        });
        self.unbalanced |= was_unbalanced;
    }

    // ---------------------------------------------------------------------
    // Statements
    // ---------------------------------------------------------------------

    /// Statements up to and including the closing `}`.
    fn block_contents(&mut self, depth: u32) -> Vec<StructuralNode> {
        let mut nodes = Vec::new();
        loop {
            if self.at_eoi() {
                let at = self.tok().pos();
                self.unbalanced_at(at);
                return nodes;
            }
            if self.eat("}") {
                return nodes;
            }
            let before = self.pos;
            nodes.extend(self.statement(depth));
            if self.pos == before {
                self.bump();
            }
        }
    }

    /// Body of a control construct: a braced block is unwrapped.
    fn body(&mut self, depth: u32) -> Vec<StructuralNode> {
        if self.eat("{") {
            self.block_contents(depth)
        } else {
            self.statement(depth)
        }
    }

    fn statement(&mut self, depth: u32) -> Vec<StructuralNode> {
        let t = self.tok();
        let start = t.pos();
        if t.kind == TokenKind::Punctuator {
            match t.text.as_str() {
                "{" => {
                    self.bump();
                    let children = self.block_contents(depth);
                    let mut node = StructuralNode::new(ConstructKind::Block, depth, self.span_from(start));
                    node.children = children;
                    return vec![node];
                }
                ";" => {
                    self.bump();
                    return Vec::new();
                }
                "}" => return Vec::new(),
                _ => {}
            }
        }
        if t.kind == TokenKind::Keyword {
            match t.text.as_str() {
                "if" => return self.if_chain(depth),
                "else" => {
                    self.bump();
                    return Vec::new();
                }
                "for" | "foreach" => return self.for_loop(depth),
                "while" => return self.while_loop(depth),
                "do" => return self.do_while(depth),
                "switch" => return vec![self.switch(depth)],
                "try" => return self.try_catch(depth),
                "goto" if self.profile.supports_goto => {
                    self.bump();
                    self.skip_past_semicolon();
                    return vec![StructuralNode::new(
                        ConstructKind::GotoLabelJump,
                        depth,
                        self.span_from(start),
                    )];
                }
                "break" | "continue" => {
                    self.bump();
                    // a line break ends the statement only under JavaScript's
                    // automatic semicolon insertion
                    let labeled = self.tok().kind == TokenKind::Identifier
                        && match self.lang {
                            Language::Java => true,
                            Language::Javascript => self.tok().line == t.line,
                            _ => false,
                        };
                    let label = self.tok().text.clone();
                    if labeled {
                        self.bump();
                    }
                    self.eat(";");
                    if labeled {
                        let kind = if t.text == "break" {
                            ConstructKind::BreakLabeled
                        } else {
                            ConstructKind::ContinueLabeled
                        };
                        let mut node = StructuralNode::new(kind, depth, self.span_from(start));
                        node.detail = label;
                        return vec![node];
                    }
                    return Vec::new();
                }
                "case" | "default" if !self.peek(1).is("(") => {
                    // stray label outside a recognized switch
                    self.skip_case_label();
                    return Vec::new();
                }
                "synchronized" | "lock" | "fixed" if self.peek(1).is("(") => {
                    self.bump();
                    let header = self.paren_header(depth);
                    let mut nodes = header;
                    nodes.extend(self.body(depth));
                    return nodes;
                }
                "using" if self.peek(1).is("(") => {
                    self.bump();
                    let mut nodes = self.paren_header(depth);
                    nodes.extend(self.body(depth));
                    return nodes;
                }
                "checked" | "unchecked" | "unsafe" if self.peek(1).is("{") => {
                    self.bump();
                    return self.statement(depth);
                }
                "function" if self.lang == Language::Javascript && self.peek(1).kind == TokenKind::Identifier => {
                    return vec![self.function_expression(depth)];
                }
                "class" | "struct" | "interface" | "enum" if self.local_type_decl() => {
                    self.pos = self.item_end();
                    if self.at("{") {
                        self.skip_balanced();
                    } else {
                        self.eat(";");
                    }
                    return Vec::new();
                }
                _ => {}
            }
        }
        // labeled statement
        if t.kind == TokenKind::Identifier && self.peek(1).is(":") && !self.peek(2).is(":") {
            self.bump();
            self.bump();
            return Vec::new();
        }
        if self.lang == Language::Csharp {
            if let Some(node) = self.local_function(depth) {
                return vec![node];
            }
        }
        let nodes = self.expression(depth, Stop::STATEMENT);
        self.eat(";");
        nodes
    }

    fn local_type_decl(&self) -> bool {
        // `class Foo {` inside a body; JS class expressions are rare at statement level
        let next = self.peek(1);
        next.kind == TokenKind::Identifier
    }

    /// `Type Name(params) {` inside a C# method body.
    fn local_function(&mut self, depth: u32) -> Option<StructuralNode> {
        let end = self.item_end();
        if !self.toks[end].is("{") && !self.toks[end].is("=>") {
            return None;
        }
        let start = self.pos;
        let open = (start..end).find(|&i| self.toks[i].is("("))?;
        if open < start + 2 || self.matching(open) + 1 != end {
            return None;
        }
        let name = &self.toks[open - 1];
        if name.kind != TokenKind::Identifier {
            return None;
        }
        let typeish = self.toks[start..open - 1].iter().all(|t| {
            matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword)
                && !STATEMENT_KEYWORDS.contains(&t.text.as_str())
                && !matches!(t.text.as_str(), "new" | "await" | "return")
                || matches!(t.text.as_str(), "<" | ">" | "," | "[" | "]" | "?" | ".")
        });
        if !typeish {
            return None;
        }
        let start_pos = self.tok().pos();
        self.pos = end;
        self.names.push(name.text.clone());
        let children = if self.eat("{") {
            self.block_contents(depth + 1)
        } else {
            self.bump();
            let nodes = self.expression(depth + 1, Stop::STATEMENT);
            self.eat(";");
            nodes
        };
        self.names.pop();
        let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start_pos));
        node.detail = name.text.clone();
        node.children = children;
        Some(node)
    }

    /// `( ... )` after a keyword; segments separated by `;` (for headers and
    /// C++17 `if (init; cond)`).
    fn paren_header(&mut self, depth: u32) -> Vec<StructuralNode> {
        let mut nodes = Vec::new();
        if !self.eat("(") {
            return nodes;
        }
        loop {
            nodes.extend(self.expression(depth, Stop::HEADER));
            if self.eat(";") {
                continue;
            }
            if self.eat(")") {
                break;
            }
            if self.at_eoi() || self.at("}") || self.at("{") {
                break;
            }
            // stray closer from a malformed header
            self.bump();
        }
        nodes
    }

    fn if_chain(&mut self, depth: u32) -> Vec<StructuralNode> {
        let mut out = Vec::new();
        let mut kind = ConstructKind::If;
        let mut start = self.tok().pos();
        loop {
            self.bump(); // if
            if self.at("constexpr") || (self.lang == Language::Cpp && self.at("!") && self.peek(1).is("consteval")) {
                while !self.at("(") && !self.at_eoi() && !self.at("{") {
                    self.bump();
                }
            }
            let header = self.paren_header(depth);
            let children = self.body(depth + 1);
            let mut node = StructuralNode::new(kind, depth, self.span_from(start));
            node.header = header;
            node.children = children;
            out.push(node);

            if !self.at("else") {
                return out;
            }
            start = self.tok().pos();
            self.bump();
            if self.at("if") {
                kind = ConstructKind::ElseIf;
                continue;
            }
            let children = self.body(depth + 1);
            let mut node = StructuralNode::new(ConstructKind::Else, depth, self.span_from(start));
            node.children = children;
            out.push(node);
            return out;
        }
    }

    fn for_loop(&mut self, depth: u32) -> Vec<StructuralNode> {
        let start = self.tok().pos();
        let keyword = self.bump();
        while self.at("await") || self.at("each") {
            self.bump();
        }
        let kind = if keyword.is("foreach") || !self.header_has_semicolon() {
            ConstructKind::Foreach
        } else {
            ConstructKind::For
        };
        let header = self.paren_header(depth);
        let children = self.body(depth + 1);
        let mut node = StructuralNode::new(kind, depth, self.span_from(start));
        node.header = header;
        node.children = children;
        vec![node]
    }

    fn header_has_semicolon(&self) -> bool {
        if !self.at("(") {
            return true;
        }
        let close = self.matching(self.pos);
        let mut i = self.pos + 1;
        while i < close {
            let t = &self.toks[i];
            if t.is(";") {
                return true;
            }
            if t.is("(") || t.is("[") || t.is("{") {
                i = self.matching(i);
            }
            i += 1;
        }
        false
    }

    fn while_loop(&mut self, depth: u32) -> Vec<StructuralNode> {
        let start = self.tok().pos();
        self.bump();
        let header = self.paren_header(depth);
        let children = self.body(depth + 1);
        let mut node = StructuralNode::new(ConstructKind::While, depth, self.span_from(start));
        node.header = header;
        node.children = children;
        vec![node]
    }

    fn do_while(&mut self, depth: u32) -> Vec<StructuralNode> {
        let start = self.tok().pos();
        self.bump();
        let children = self.body(depth + 1);
        let mut header = Vec::new();
        if self.eat("while") {
            header = self.paren_header(depth);
            self.eat(";");
        }
        let mut node = StructuralNode::new(ConstructKind::DoWhile, depth, self.span_from(start));
        node.header = header;
        node.children = children;
        vec![node]
    }

    fn skip_case_label(&mut self) {
        self.bump(); // case / default
        let mut level = 0i32;
        while !self.at_eoi() {
            let t = self.tok();
            if level == 0 && (t.is(":") || t.is("->") || t.is("=>")) {
                let arrow = !t.is(":");
                self.bump();
                if arrow && self.lang == Language::Csharp {
                    // C# switch-expression arms are handled elsewhere
                }
                return;
            }
            if level == 0 && (t.is(";") || t.is("{") || t.is("}")) {
                return;
            }
            match t.text.as_str() {
                "(" | "[" if t.kind == TokenKind::Punctuator => level += 1,
                ")" | "]" if t.kind == TokenKind::Punctuator => level -= 1,
                _ => {}
            }
            self.bump();
        }
    }

    /// `switch (expr) { ... }`, statement or Java switch expression. A C#
    /// switch expression (`value switch { arms }`) is handled too.
    fn switch(&mut self, depth: u32) -> StructuralNode {
        let start = self.tok().pos();
        self.bump();
        let header = if self.at("(") {
            self.paren_header(depth)
        } else {
            Vec::new()
        };
        let mut node = StructuralNode::new(ConstructKind::Switch, depth, Span::default_at(start));
        node.header = header;
        if !self.eat("{") {
            node.span = self.span_from(start);
            return node;
        }
        let inner = depth + 1;
        let expression_arms = self.lang == Language::Csharp && !self.at("case") && !self.at("default") && !self.at("}");
        let mut children = Vec::new();
        loop {
            if self.at_eoi() {
                let at = self.tok().pos();
                self.unbalanced_at(at);
                break;
            }
            if self.eat("}") {
                break;
            }
            if expression_arms {
                // pattern [when guard] => value ,
                let discard = self.at("_") && self.peek(1).is("=>");
                let mut level = 0i32;
                while !self.at_eoi() && !(level == 0 && (self.at("=>") || self.at("}"))) {
                    let t = self.tok();
                    match t.text.as_str() {
                        "(" | "[" | "{" if t.kind == TokenKind::Punctuator => level += 1,
                        ")" | "]" | "}" if t.kind == TokenKind::Punctuator => level -= 1,
                        _ => {}
                    }
                    self.bump();
                }
                if !discard {
                    node.count += 1;
                }
                if self.eat("=>") {
                    children.extend(self.expression(inner, Stop::BRANCH));
                }
                self.eat(",");
                continue;
            }
            let t = self.tok();
            if t.is("case") {
                node.count += 1;
                // `case 1, 2 ->` counts once per listed label in Java
                if self.lang == Language::Java {
                    node.count += self.java_case_extra_labels();
                }
                self.skip_case_label();
                continue;
            }
            if t.is("default") && (self.peek(1).is(":") || self.peek(1).is("->")) {
                self.skip_case_label();
                continue;
            }
            let before = self.pos;
            children.extend(self.statement(inner));
            if self.pos == before {
                self.bump();
            }
        }
        node.children = children;
        node.span = self.span_from(start);
        node
    }

    fn java_case_extra_labels(&self) -> u32 {
        let mut i = self.pos + 1;
        let mut level = 0i32;
        let mut extra = 0;
        while i < self.toks.len() {
            let t = &self.toks[i];
            if t.is_eoi() || (level == 0 && (t.is(":") || t.is("->") || t.is(";") || t.is("{"))) {
                break;
            }
            match t.text.as_str() {
                "(" | "[" if t.kind == TokenKind::Punctuator => level += 1,
                ")" | "]" if t.kind == TokenKind::Punctuator => level -= 1,
                "," if level == 0 => extra += 1,
                _ => {}
            }
            i += 1;
        }
        extra
    }

    fn try_catch(&mut self, depth: u32) -> Vec<StructuralNode> {
        self.bump(); // try
        let mut out = Vec::new();
        if self.at("(") {
            out.extend(self.paren_header(depth));
        }
        out.extend(self.body(depth));
        loop {
            if self.at("catch") {
                let start = self.tok().pos();
                self.bump();
                let mut header = Vec::new();
                if self.at("(") {
                    header = self.paren_header(depth);
                }
                if self.at("when") {
                    self.bump();
                    header.extend(self.paren_header(depth));
                }
                let children = self.body(depth + 1);
                let mut node = StructuralNode::new(ConstructKind::Catch, depth, self.span_from(start));
                node.header = header;
                node.children = children;
                out.push(node);
            } else if self.at("finally") || self.at("__finally") {
                self.bump();
                out.extend(self.body(depth));
            } else {
                return out;
            }
        }
    }

    // ---------------------------------------------------------------------
    // Expressions
    // ---------------------------------------------------------------------

    fn should_stop(&self, stop: Stop, level: usize) -> bool {
        let t = self.tok();
        if t.is_eoi() {
            return true;
        }
        if level > 0 {
            return false;
        }
        match t.kind {
            TokenKind::Punctuator => match t.text.as_str() {
                ")" | "]" | "}" => true,
                ";" => stop.semicolon || level == 0,
                "," => stop.comma,
                _ => false,
            },
            TokenKind::Operator => match t.text.as_str() {
                ":" => stop.colon,
                "=>" | "->" => stop.arrow,
                _ => false,
            },
            TokenKind::Keyword | TokenKind::Identifier => {
                stop.statement
                    && self.is_statement_keyword(t)
                    && self.prev().is_some_and(|p| p.line < t.line && !p.is("=") && !p.is("("))
                    && self.lang == Language::Javascript
            }
            _ => false,
        }
    }

    fn is_lambda_arrow(&self, t: &Token) -> bool {
        match self.lang {
            Language::Java => t.is("->"),
            Language::Javascript | Language::Csharp => t.is("=>"),
            _ => false,
        }
    }

    /// Scans an expression, returning the structural nodes it contains.
    /// Stops before a terminator at bracket level zero without consuming it.
    fn expression(&mut self, depth: u32, stop: Stop) -> Vec<StructuralNode> {
        let mut nodes: Vec<StructuralNode> = Vec::new();
        // open brackets within this expression: (is_call_paren)
        let mut brackets: Vec<bool> = Vec::new();
        let mut runs: Vec<Run> = vec![Run::default()];

        while !self.should_stop(stop, brackets.len()) {
            let t = self.tok();
            let text = t.text.as_str();
            match t.kind {
                TokenKind::Punctuator => match text {
                    "(" => {
                        if let Some(lambda) = self.paren_lambda(depth) {
                            nodes.push(lambda);
                            runs.last_mut().expect("run").op = None;
                            continue;
                        }
                        let call = self.prev().is_some_and(|p| {
                            matches!(p.kind, TokenKind::Identifier)
                                || p.is(")")
                                || p.is("]")
                                || p.is(">")
                                || p.is("this")
                                || p.is("super")
                                || p.is("base")
                                || p.is("typeof")
                                || p.is("sizeof")
                                || p.is("nameof")
                        });
                        if call {
                            runs.push(Run::default());
                        }
                        brackets.push(call);
                        self.bump();
                    }
                    "[" => {
                        if let Some(lambda) = self.cpp_lambda(depth) {
                            nodes.push(lambda);
                            continue;
                        }
                        runs.push(Run::default());
                        brackets.push(true);
                        self.bump();
                    }
                    ")" | "]" => {
                        if brackets.pop() == Some(true) && runs.len() > 1 {
                            runs.pop();
                        }
                        self.bump();
                    }
                    "{" => {
                        nodes.extend(self.brace_in_expression(depth));
                        runs.last_mut().expect("run").op = None;
                    }
                    "," | ";" => {
                        runs.last_mut().expect("run").op = None;
                        self.bump();
                    }
                    _ => {
                        self.bump();
                    }
                },
                TokenKind::Operator => {
                    if text == "?" && self.is_ternary() {
                        nodes.push(self.ternary(depth));
                        runs.last_mut().expect("run").op = None;
                        continue;
                    }
                    if self.profile.is_logical_operator(text) {
                        self.logical(&mut nodes, runs.last_mut().expect("run"), depth);
                        continue;
                    }
                    if self.is_lambda_arrow(t) {
                        // reached only for an arrow without a recognized parameter list
                        self.bump();
                        nodes.push(self.lambda_body(depth, t.pos(), String::new()));
                        runs.last_mut().expect("run").op = None;
                        continue;
                    }
                    if text == ":" || text == "?" || ASSIGNMENT_OPS.contains(&text) {
                        runs.last_mut().expect("run").op = None;
                    }
                    self.bump();
                }
                TokenKind::Keyword => {
                    if self.profile.is_logical_operator(text) {
                        self.logical(&mut nodes, runs.last_mut().expect("run"), depth);
                        continue;
                    }
                    match text {
                        "switch" => {
                            nodes.push(self.switch(depth));
                            continue;
                        }
                        "function" if self.lang == Language::Javascript => {
                            nodes.push(self.function_expression(depth));
                            continue;
                        }
                        "delegate"
                            if self.lang == Language::Csharp && self.peek(1).is("(")
                                || self.peek(1).is("{") && t.is("delegate") =>
                        {
                            let start = t.pos();
                            self.bump();
                            if self.at("(") {
                                self.skip_balanced();
                            }
                            if self.eat("{") {
                                let children = self.block_contents(depth + 1);
                                let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start));
                                node.children = children;
                                nodes.push(node);
                            }
                            continue;
                        }
                        "new" if self.lang == Language::Java => {
                            if let Some(node) = self.anonymous_class(depth) {
                                nodes.push(node);
                                continue;
                            }
                            self.bump();
                        }
                        _ => {
                            self.bump();
                        }
                    }
                }
                TokenKind::Identifier => {
                    let next = self.peek(1);
                    if self.is_lambda_arrow(next) {
                        let start = t.pos();
                        self.bump();
                        self.bump();
                        nodes.push(self.lambda_body(depth, start, String::new()));
                        runs.last_mut().expect("run").op = None;
                        continue;
                    }
                    if self.lang == Language::Javascript
                        && text == "async"
                        && self.peek(1).kind == TokenKind::Identifier
                        && self.is_lambda_arrow(self.peek(2))
                    {
                        self.bump();
                        continue;
                    }
                    if next.is("(") {
                        if let Some(node) = self.recursive_call(depth) {
                            nodes.push(node);
                        }
                    }
                    self.bump();
                }
                _ => {
                    self.bump();
                }
            }
        }
        nodes
    }

    fn logical(&mut self, nodes: &mut Vec<StructuralNode>, run: &mut Run, depth: u32) {
        let t = self.bump();
        let same = run.op.as_deref() == Some(t.text.as_str());
        match (same, run.node) {
            (true, Some(idx)) => {
                nodes[idx].count += 1;
            }
            _ => {
                let mut node = StructuralNode::new(ConstructKind::LogicalOperatorSequence, depth, Span::of(t));
                node.detail = t.text.clone();
                node.count = 1;
                nodes.push(node);
                run.op = Some(t.text.clone());
                run.node = Some(nodes.len() - 1);
            }
        }
    }

    fn recursive_call(&self, depth: u32) -> Option<StructuralNode> {
        let t = self.tok();
        let current = self.names.last()?;
        if &t.text != current {
            return None;
        }
        if let Some(p) = self.prev() {
            if p.is("new") || p.is("function") || p.is("::") || p.is("->") || p.is("?.") {
                return None;
            }
            if p.is(".") {
                let receiver = self.pos.checked_sub(2).map(|i| &self.toks[i]);
                if !receiver.is_some_and(|r| r.is("this")) {
                    return None;
                }
            }
            // a declaration like `int f(` is not a call
            if p.kind == TokenKind::Identifier
                || (p.kind == TokenKind::Keyword
                    && matches!(
                        p.text.as_str(),
                        "int"
                            | "void"
                            | "long"
                            | "double"
                            | "float"
                            | "char"
                            | "bool"
                            | "boolean"
                            | "short"
                            | "byte"
                            | "string"
                            | "auto"
                            | "unsigned"
                            | "signed"
                    ))
            {
                return None;
            }
        }
        let mut node = StructuralNode::new(ConstructKind::RecursiveCall, depth, Span::of(t));
        node.detail = t.text.clone();
        Some(node)
    }

    /// Looks ahead from `?` for the matching `:` at the same bracket level.
    fn is_ternary(&self) -> bool {
        let mut level = 0i32;
        let mut pending = 0i32;
        let mut i = self.pos + 1;
        // `?` directly followed by a closer or `,`/`;` is a nullable type or wildcard
        if let Some(n) = self.toks.get(i) {
            if n.is(">")
                || n.is(")")
                || n.is(",")
                || n.is(";")
                || n.is("]")
                || n.is("extends")
                || n.is("super")
                || n.is("=")
            {
                return false;
            }
        }
        while i < self.toks.len() {
            let t = &self.toks[i];
            if t.is_eoi() {
                return false;
            }
            match t.kind {
                TokenKind::Punctuator => match t.text.as_str() {
                    "(" | "[" | "{" => level += 1,
                    ")" | "]" | "}" => {
                        level -= 1;
                        if level < 0 {
                            return false;
                        }
                    }
                    ";" if level == 0 => return false,
                    _ => {}
                },
                TokenKind::Operator if level == 0 => match t.text.as_str() {
                    "?" => pending += 1,
                    ":" => {
                        if pending == 0 {
                            return true;
                        }
                        pending -= 1;
                    }
                    _ => {}
                },
                _ => {}
            }
            i += 1;
        }
        false
    }

    fn ternary(&mut self, depth: u32) -> StructuralNode {
        let start = self.tok().pos();
        self.bump(); // ?
        let mut children = self.expression(
            depth + 1,
            Stop {
                colon: true,
                ..Stop::NONE
            },
        );
        self.eat(":");
        children.extend(self.expression(depth + 1, Stop::BRANCH));
        let mut node = StructuralNode::new(ConstructKind::Ternary, depth, self.span_from(start));
        node.children = children;
        node
    }

    /// `(params) => body` / `(params) -> body` starting at `(`.
    fn paren_lambda(&mut self, depth: u32) -> Option<StructuralNode> {
        if !matches!(self.lang, Language::Java | Language::Javascript | Language::Csharp) {
            return None;
        }
        let close = self.matching(self.pos);
        let after = &self.toks[(close + 1).min(self.toks.len() - 1)];
        if !self.is_lambda_arrow(after) {
            return None;
        }
        let start = self.tok().pos();
        self.pos = close + 2;
        Some(self.lambda_body(depth, start, String::new()))
    }

    fn lambda_body(&mut self, depth: u32, start: Position, name: String) -> StructuralNode {
        let children = if self.eat("{") {
            self.block_contents(depth + 1)
        } else {
            self.expression(depth + 1, Stop::BRANCH)
        };
        let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start));
        node.detail = name;
        node.children = children;
        node
    }

    /// `[captures](params) specifiers -> ret { body }`
    fn cpp_lambda(&mut self, depth: u32) -> Option<StructuralNode> {
        if self.lang != Language::Cpp {
            return None;
        }
        if self
            .prev()
            .is_some_and(|p| p.kind == TokenKind::Identifier || p.is(")") || p.is("]"))
        {
            return None;
        }
        let close = self.matching(self.pos);
        if self.toks[close].is_eoi() {
            return None;
        }
        let mut i = close + 1;
        if self.toks[i].is("(") {
            i = self.matching(i) + 1;
        }
        while i < self.toks.len() && !self.toks[i].is("{") {
            let t = &self.toks[i];
            let ok = matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword)
                || t.is("->")
                || t.is("::")
                || t.is("<")
                || t.is(">")
                || t.is("*")
                || t.is("&");
            if !ok {
                return None;
            }
            i += 1;
        }
        if i >= self.toks.len() {
            return None;
        }
        let start = self.tok().pos();
        self.pos = i + 1;
        let children = self.block_contents(depth + 1);
        let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start));
        node.children = children;
        Some(node)
    }

    /// JS `function [name](params) { body }` used as a statement or expression.
    fn function_expression(&mut self, depth: u32) -> StructuralNode {
        let start = self.tok().pos();
        self.bump(); // function
        self.eat("*");
        let mut name = String::new();
        if self.tok().kind == TokenKind::Identifier {
            name = self.bump().text.clone();
        }
        if self.at("(") {
            self.skip_balanced();
        }
        let named = !name.is_empty();
        if named {
            self.names.push(name.clone());
        }
        let children = if self.eat("{") {
            self.block_contents(depth + 1)
        } else {
            Vec::new()
        };
        if named {
            self.names.pop();
        }
        let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start));
        node.detail = name;
        node.children = children;
        node
    }

    /// Java `new Type(args) { members }`.
    fn anonymous_class(&mut self, depth: u32) -> Option<StructuralNode> {
        let mut i = self.pos + 1;
        while i < self.toks.len() {
            let t = &self.toks[i];
            if t.is("(") {
                break;
            }
            if !(matches!(t.kind, TokenKind::Identifier | TokenKind::Keyword)
                || t.is(".")
                || t.is("<")
                || t.is(">")
                || t.is(",")
                || t.is("?")
                || t.is(">>"))
            {
                return None;
            }
            i += 1;
        }
        if i >= self.toks.len() || !self.toks[i].is("(") {
            return None;
        }
        let close = self.matching(i);
        if !self.toks.get(close + 1).is_some_and(|t| t.is("{")) {
            return None;
        }
        let start = self.tok().pos();
        // arguments may hold lambdas of their own
        self.pos = i + 1;
        let mut nodes = Vec::new();
        while !self.at(")") && !self.at_eoi() {
            let before = self.pos;
            nodes.extend(self.expression(
                depth,
                Stop {
                    comma: true,
                    ..Stop::NONE
                },
            ));
            self.eat(",");
            if self.pos == before {
                self.bump();
            }
        }
        self.eat(")");
        self.eat("{");
        let mut members = Vec::new();
        // member methods: scan the class body at declaration level
        loop {
            if self.at_eoi() {
                let at = self.tok().pos();
                self.unbalanced_at(at);
                break;
            }
            if self.eat("}") {
                break;
            }
            if self.eat(";") {
                continue;
            }
            if self.at("@") {
                self.bump();
                self.bump();
                if self.at("(") {
                    self.skip_balanced();
                }
                continue;
            }
            let item_start = self.pos;
            let end = self.item_end();
            if self.toks[end].is("{") {
                if let Some(h) = self.method_header(item_start, end, false) {
                    self.pos = end + 1;
                    self.names.push(h.simple_name.clone());
                    members.extend(self.block_contents(depth + 1));
                    self.names.pop();
                    continue;
                }
                self.pos = end;
                self.skip_balanced();
                continue;
            }
            self.pos = end;
            if !self.eat(";") {
                self.bump();
            }
        }
        let mut node = StructuralNode::new(ConstructKind::Lambda, depth, self.span_from(start));
        node.children = members;
        nodes.push(node);
        // the anonymous class is the last node; wrap argument nodes in front
        if nodes.len() == 1 {
            return nodes.pop();
        }
        let lambda = nodes.pop().expect("anonymous class node");
        // Argument lambdas are reported as siblings by re-entering through a block.
        let mut block = StructuralNode::new(ConstructKind::Block, depth, lambda.span);
        block.children = nodes;
        block.children.push(lambda);
        Some(block)
    }

    /// `{` inside an expression: a block body (if it holds statements) or an
    /// initializer / object literal.
    fn brace_in_expression(&mut self, depth: u32) -> Vec<StructuralNode> {
        let open = self.pos;
        let close = self.matching(open);
        let mut has_statement = false;
        let mut i = open + 1;
        while i < close {
            let t = &self.toks[i];
            if t.is(";")
                || (t.kind == TokenKind::Keyword
                    && ["if", "for", "while", "return", "switch", "try", "do"].contains(&t.text.as_str()))
            {
                has_statement = true;
                break;
            }
            if t.is("(") || t.is("[") || t.is("{") {
                i = self.matching(i);
            }
            i += 1;
        }
        let start = self.tok().pos();
        self.bump();
        if has_statement {
            let children = self.block_contents(depth);
            let mut node = StructuralNode::new(ConstructKind::Block, depth, self.span_from(start));
            node.children = children;
            return vec![node];
        }
        let mut nodes = Vec::new();
        loop {
            if self.at_eoi() {
                let at = self.tok().pos();
                self.unbalanced_at(at);
                break;
            }
            if self.eat("}") {
                break;
            }
            let before = self.pos;
            nodes.extend(self.expression(
                depth,
                Stop {
                    comma: true,
                    semicolon: true,
                    ..Stop::NONE
                },
            ));
            if !self.eat(",") && !self.eat(";") && self.pos == before && !self.at("}") {
                self.bump();
            }
            if self.at(")") || self.at("]") {
                // stray closer inside braces
                self.bump();
            }
        }
        nodes
    }
}

struct MethodHeader {
    start: usize,
    simple_name: String,
    qualifier: Vec<String>,
    params: (usize, usize),
    body: usize,
}
