//! Token-level scanner for the C family of languages.
//!
//! The scanner only needs to be good enough to recover control-flow keywords,
//! bracket structure and operator sequences. Comments, literal bodies and
//! preprocessor lines never produce structural tokens.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    C,
    Cpp,
    Csharp,
    Javascript,
}

impl Language {
    pub const ALL: [Language; 5] = [
        Language::Java,
        Language::C,
        Language::Cpp,
        Language::Csharp,
        Language::Javascript,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::C => "c",
            Language::Cpp => "cpp",
            Language::Csharp => "csharp",
            Language::Javascript => "javascript",
        }
    }

    /// Parses a language id. Accepts a few common aliases (`c++`, `cs`, `js`).
    pub fn parse(id: &str) -> Option<Language> {
        match id.to_ascii_lowercase().as_str() {
            "java" => Some(Language::Java),
            "c" => Some(Language::C),
            "cpp" | "c++" | "cxx" => Some(Language::Cpp),
            "csharp" | "c#" | "cs" => Some(Language::Csharp),
            "javascript" | "js" => Some(Language::Javascript),
            _ => None,
        }
    }

    pub fn from_extension(ext: &str) -> Option<Language> {
        match ext.to_ascii_lowercase().as_str() {
            "java" => Some(Language::Java),
            "c" | "h" => Some(Language::C),
            "cc" | "cpp" | "cxx" | "hpp" | "hh" => Some(Language::Cpp),
            "cs" => Some(Language::Csharp),
            "js" | "mjs" | "cjs" => Some(Language::Javascript),
            _ => None,
        }
    }

    pub fn profile(self) -> &'static LanguageProfile {
        profiles::get(self)
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Per-language lexical configuration.
#[derive(Debug)]
pub struct LanguageProfile {
    pub language: Language,
    pub keywords: HashSet<&'static str>,
    pub logical_operators: HashSet<&'static str>,
    pub supports_goto: bool,
    pub supports_preprocessor: bool,
    pub supports_null_coalescing: bool,
}

impl LanguageProfile {
    pub fn is_keyword(&self, text: &str) -> bool {
        self.keywords.contains(text)
    }

    pub fn is_logical_operator(&self, text: &str) -> bool {
        self.logical_operators.contains(text)
    }
}

mod profiles {
    use std::collections::HashSet;
    use std::sync::OnceLock;

    use super::{Language, LanguageProfile};

    const JAVA: &[&str] = &[
        "abstract",
        "assert",
        "boolean",
        "break",
        "byte",
        "case",
        "catch",
        "char",
        "class",
        "const",
        "continue",
        "default",
        "do",
        "double",
        "else",
        "enum",
        "extends",
        "final",
        "finally",
        "float",
        "for",
        "goto",
        "if",
        "implements",
        "import",
        "instanceof",
        "int",
        "interface",
        "long",
        "native",
        "new",
        "package",
        "private",
        "protected",
        "public",
        "return",
        "short",
        "static",
        "strictfp",
        "super",
        "switch",
        "synchronized",
        "this",
        "throw",
        "throws",
        "transient",
        "try",
        "void",
        "volatile",
        "while",
        "true",
        "false",
        "null",
    ];

    const C: &[&str] = &[
        "auto", "break", "case", "char", "const", "continue", "default", "do", "double", "else", "enum", "extern",
        "float", "for", "goto", "if", "inline", "int", "long", "register", "restrict", "return", "short", "signed",
        "sizeof", "static", "struct", "switch", "typedef", "union", "unsigned", "void", "volatile", "while", "_Bool",
    ];

    const CPP_EXTRA: &[&str] = &[
        "alignas",
        "alignof",
        "and",
        "and_eq",
        "bitand",
        "bitor",
        "bool",
        "catch",
        "class",
        "compl",
        "constexpr",
        "const_cast",
        "decltype",
        "delete",
        "dynamic_cast",
        "explicit",
        "export",
        "false",
        "friend",
        "mutable",
        "namespace",
        "new",
        "noexcept",
        "not",
        "not_eq",
        "nullptr",
        "operator",
        "or",
        "or_eq",
        "private",
        "protected",
        "public",
        "reinterpret_cast",
        "static_assert",
        "static_cast",
        "template",
        "this",
        "throw",
        "true",
        "try",
        "typeid",
        "typename",
        "using",
        "virtual",
        "xor",
        "xor_eq",
    ];

    const CSHARP: &[&str] = &[
        "abstract",
        "as",
        "base",
        "bool",
        "break",
        "byte",
        "case",
        "catch",
        "char",
        "checked",
        "class",
        "const",
        "continue",
        "decimal",
        "default",
        "delegate",
        "do",
        "double",
        "else",
        "enum",
        "event",
        "explicit",
        "extern",
        "false",
        "finally",
        "fixed",
        "float",
        "for",
        "foreach",
        "goto",
        "if",
        "implicit",
        "in",
        "int",
        "interface",
        "internal",
        "is",
        "lock",
        "long",
        "namespace",
        "new",
        "null",
        "object",
        "operator",
        "out",
        "override",
        "params",
        "private",
        "protected",
        "public",
        "readonly",
        "ref",
        "return",
        "sbyte",
        "sealed",
        "short",
        "sizeof",
        "stackalloc",
        "static",
        "string",
        "struct",
        "switch",
        "this",
        "throw",
        "true",
        "try",
        "typeof",
        "uint",
        "ulong",
        "unchecked",
        "unsafe",
        "ushort",
        "using",
        "virtual",
        "void",
        "volatile",
        "while",
    ];

    const JAVASCRIPT: &[&str] = &[
        "break",
        "case",
        "catch",
        "class",
        "const",
        "continue",
        "debugger",
        "default",
        "delete",
        "do",
        "else",
        "export",
        "extends",
        "finally",
        "for",
        "function",
        "if",
        "import",
        "in",
        "instanceof",
        "let",
        "new",
        "return",
        "super",
        "switch",
        "this",
        "throw",
        "try",
        "typeof",
        "var",
        "void",
        "while",
        "with",
        "yield",
        "true",
        "false",
        "null",
    ];

    fn build(language: Language) -> LanguageProfile {
        let keywords: HashSet<&'static str> = match language {
            Language::Java => JAVA.iter().copied().collect(),
            Language::C => C.iter().copied().collect(),
            Language::Cpp => C.iter().chain(CPP_EXTRA).copied().collect(),
            Language::Csharp => CSHARP.iter().copied().collect(),
            Language::Javascript => JAVASCRIPT.iter().copied().collect(),
        };
        let mut logical_operators: HashSet<&'static str> = ["&&", "||"].into_iter().collect();
        if language == Language::Cpp {
            logical_operators.extend(["and", "or"]);
        }
        LanguageProfile {
            language,
            keywords,
            logical_operators,
            supports_goto: matches!(language, Language::C | Language::Cpp | Language::Csharp),
            supports_preprocessor: matches!(language, Language::C | Language::Cpp | Language::Csharp),
            supports_null_coalescing: matches!(language, Language::Csharp | Language::Javascript),
        }
    }

    pub(super) fn get(language: Language) -> &'static LanguageProfile {
        static PROFILES: OnceLock<Vec<LanguageProfile>> = OnceLock::new();
        let all = PROFILES.get_or_init(|| Language::ALL.iter().map(|&l| build(l)).collect());
        all.iter()
            .find(|p| p.language == language)
            .expect("every language has a profile")
    }
}

/// Resolves the profile for `path`; an explicit override always wins.
pub fn detect_language(path: &Path, override_lang: Option<Language>) -> Result<&'static LanguageProfile, Error> {
    if let Some(lang) = override_lang {
        return Ok(lang.profile());
    }
    path.extension()
        .and_then(|e| e.to_str())
        .and_then(Language::from_extension)
        .map(Language::profile)
        .ok_or_else(|| Error::UnknownLanguage {
            path: path.to_path_buf(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Keyword,
    Identifier,
    Punctuator,
    Operator,
    Literal,
    EndOfInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Position {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub column: u32,
}

impl Token {
    pub fn pos(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    /// Position of the last character of the token.
    pub fn end(&self) -> Position {
        let newlines = self.text.matches('\n').count() as u32;
        if newlines == 0 {
            let len = self.text.chars().count().max(1) as u32;
            Position {
                line: self.line,
                column: self.column + len - 1,
            }
        } else {
            let tail = self.text.rsplit('\n').next().unwrap_or("");
            Position {
                line: self.line + newlines,
                column: tail.chars().count().max(1) as u32,
            }
        }
    }

    pub fn is(&self, text: &str) -> bool {
        self.kind != TokenKind::Literal && self.text == text
    }

    pub fn is_eoi(&self) -> bool {
        self.kind == TokenKind::EndOfInput
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanDiagnostic {
    UnterminatedLiteral { at: Position },
    UnterminatedComment { at: Position },
}

impl fmt::Display for ScanDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanDiagnostic::UnterminatedLiteral { at } => write!(f, "{at}: unterminated literal"),
            ScanDiagnostic::UnterminatedComment { at } => write!(f, "{at}: unterminated comment"),
        }
    }
}

/// Output of [`scan`]. A non-empty diagnostic list means the file was
/// tolerant-scanned: the offending literal or comment was closed at end of input.
#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub tokens: Vec<Token>,
    pub diagnostics: Vec<ScanDiagnostic>,
}

impl ScanOutput {
    pub fn tolerant(&self) -> bool {
        !self.diagnostics.is_empty()
    }
}

// Longest first within each leading character group is handled by trying
// lengths 4..=1 in turn.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "...", "->*", "&&=", "||=", "??=", "**=", "===", "!==", "<=>", "->", "=>", "::", "++",
    "--", "&&", "||", "??", "?.", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**", "<<",
    ">>", ".*", "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "?", ":", ".", "@", "#", "$", "\\",
];

const PUNCTUATORS: &[char] = &['(', ')', '{', '}', '[', ']', ';', ','];

/// Tokenizes `source` using `profile`. Never fails: malformed literals and
/// comments are reported as diagnostics and closed at end of input.
pub fn scan(source: &str, profile: &LanguageProfile) -> ScanOutput {
    Scanner::new(source, profile).run()
}

struct Scanner<'a> {
    chars: Vec<char>,
    pos: usize,
    line: u32,
    column: u32,
    profile: &'a LanguageProfile,
    tokens: Vec<Token>,
    diagnostics: Vec<ScanDiagnostic>,
    // Brace depth at which each open template-literal substitution resumes.
    template_stack: Vec<usize>,
    brace_depth: usize,
    line_has_token: bool,
    // Char index where the token being scanned starts.
    start: usize,
}

impl<'a> Scanner<'a> {
    fn new(source: &str, profile: &'a LanguageProfile) -> Self {
        Scanner {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            profile,
            tokens: Vec::new(),
            diagnostics: Vec::new(),
            template_stack: Vec::new(),
            brace_depth: 0,
            line_has_token: false,
            start: 0,
        }
    }

    fn lexeme(&self) -> String {
        self.chars[self.start..self.pos].iter().collect()
    }

    fn push_literal(&mut self, at: Position) {
        let text = self.lexeme();
        self.push(TokenKind::Literal, text, at);
    }

    fn peek(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
            self.line_has_token = false;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn push(&mut self, kind: TokenKind, text: String, at: Position) {
        self.line_has_token = true;
        self.tokens.push(Token {
            kind,
            text,
            line: at.line,
            column: at.column,
        });
    }

    fn run(mut self) -> ScanOutput {
        while let Some(c) = self.peek(0) {
            let at = self.here();
            self.start = self.pos;
            if c.is_whitespace() {
                self.bump();
            } else if c == '/' && self.peek(1) == Some('/') {
                self.skip_line();
            } else if c == '/' && self.peek(1) == Some('*') {
                self.skip_block_comment(at);
            } else if c == '#' && self.profile.supports_preprocessor && !self.line_has_token {
                self.skip_directive();
            } else if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) {
                self.number(at);
            } else if c == '"' || c == '\'' {
                self.quoted(at);
            } else if c == '`' && self.profile.language == Language::Javascript {
                self.bump();
                self.template_chunk(at);
            } else if self.raw_or_prefixed_string(at) {
                // consumed
            } else if is_ident_start(c) {
                self.word(at);
            } else if PUNCTUATORS.contains(&c) {
                self.punctuator(c, at);
            } else if c == '/' && self.profile.language == Language::Javascript && self.regex_allowed() {
                self.regex(at);
            } else {
                self.operator(at);
            }
        }
        let at = self.here();
        self.tokens.push(Token {
            kind: TokenKind::EndOfInput,
            text: String::new(),
            line: at.line,
            column: at.column,
        });
        ScanOutput {
            tokens: self.tokens,
            diagnostics: self.diagnostics,
        }
    }

    fn skip_line(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            self.bump();
        }
    }

    fn skip_block_comment(&mut self, at: Position) {
        self.bump();
        self.bump();
        loop {
            match self.peek(0) {
                None => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedComment { at });
                    return;
                }
                Some('*') if self.peek(1) == Some('/') => {
                    self.bump();
                    self.bump();
                    return;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
    }

    fn skip_directive(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\\' && self.peek(1) == Some('\n') {
                self.bump();
                self.bump();
                continue;
            }
            if c == '\\' && self.peek(1) == Some('\r') && self.peek(2) == Some('\n') {
                self.bump();
                self.bump();
                self.bump();
                continue;
            }
            if c == '\n' {
                break;
            }
            // A block comment may legally start on a directive line and span lines.
            if c == '/' && self.peek(1) == Some('*') {
                let at = self.here();
                self.skip_block_comment(at);
                continue;
            }
            self.bump();
        }
    }

    fn number(&mut self, at: Position) {
        let mut text = String::new();
        while let Some(c) = self.peek(0) {
            let exponent_sign = (c == '+' || c == '-')
                && matches!(text.chars().last(), Some('e' | 'E' | 'p' | 'P'))
                && !text.starts_with("0x")
                && !text.starts_with("0X");
            let hex_exponent_sign = (c == '+' || c == '-') && matches!(text.chars().last(), Some('p' | 'P'));
            if c.is_ascii_alphanumeric() || c == '_' || c == '.' || exponent_sign || hex_exponent_sign {
                // `1..2` style ranges and member access on literals are not C-family number syntax
                // except for a single fractional dot.
                if c == '.' && text.contains('.') {
                    break;
                }
                text.push(c);
                self.bump();
            } else if c == '\''
                && self.profile.language == Language::Cpp
                && self.peek(1).is_some_and(|d| d.is_ascii_alphanumeric())
            {
                // C++14 digit separator
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let _ = text;
        self.push_literal(at);
    }

    fn quoted(&mut self, at: Position) {
        let quote = self.bump().unwrap_or('"');
        // Java text blocks
        if quote == '"'
            && self.profile.language == Language::Java
            && self.peek(0) == Some('"')
            && self.peek(1) == Some('"')
        {
            self.bump();
            self.bump();
            self.until_delimiter(&['"', '"', '"'], true, at);
            return;
        }
        self.simple_literal(quote, at);
    }

    /// Consumes up to and including the closing `quote`. Escapes are honored;
    /// an unescaped newline terminates the literal with a diagnostic.
    fn simple_literal(&mut self, quote: char, at: Position) {
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some(c) if c == quote => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push_literal(at);
    }

    fn until_delimiter(&mut self, delim: &[char], escapes: bool, at: Position) {
        loop {
            if self.peek(0).is_none() {
                self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                break;
            }
            if escapes && self.peek(0) == Some('\\') {
                self.bump();
                self.bump();
                continue;
            }
            if delim.iter().enumerate().all(|(i, d)| self.peek(i) == Some(*d)) {
                for _ in delim {
                    self.bump();
                }
                break;
            }
            self.bump();
        }
        self.push_literal(at);
    }

    /// C# verbatim/interpolated strings, C++ raw and prefixed strings.
    fn raw_or_prefixed_string(&mut self, at: Position) -> bool {
        match self.profile.language {
            Language::Csharp => {
                let (prefix_len, verbatim) = match (self.peek(0), self.peek(1), self.peek(2)) {
                    (Some('@'), Some('"'), _) => (1, true),
                    (Some('$'), Some('"'), _) => (1, false),
                    (Some('$'), Some('@'), Some('"')) | (Some('@'), Some('$'), Some('"')) => (2, true),
                    _ => return false,
                };
                for _ in 0..=prefix_len {
                    self.bump();
                }
                if verbatim {
                    self.verbatim_body(at);
                } else {
                    self.interpolated_body(at);
                }
                true
            }
            Language::Cpp | Language::C => {
                // R"delim( ... )delim", with optional u8/u/U/L encoding prefix
                let mut offset = 0;
                for p in ["u8", "u", "U", "L"] {
                    if p.chars().enumerate().all(|(i, ch)| self.peek(i) == Some(ch)) {
                        offset = p.len();
                        break;
                    }
                }
                let raw = self.profile.language == Language::Cpp
                    && self.peek(offset) == Some('R')
                    && self.peek(offset + 1) == Some('"');
                if raw {
                    for _ in 0..offset + 2 {
                        self.bump();
                    }
                    let mut delim = String::new();
                    while let Some(c) = self.peek(0) {
                        if c == '(' || c == '\n' || delim.len() > 16 {
                            break;
                        }
                        delim.push(c);
                        self.bump();
                    }
                    self.bump();
                    let closing: Vec<char> = std::iter::once(')')
                        .chain(delim.chars())
                        .chain(std::iter::once('"'))
                        .collect();
                    self.until_delimiter(&closing, false, at);
                    return true;
                }
                if offset > 0 && matches!(self.peek(offset), Some('"' | '\'')) {
                    for _ in 0..offset {
                        self.bump();
                    }
                    let quote = self.bump().unwrap_or('"');
                    self.simple_literal(quote, at);
                    return true;
                }
                false
            }
            _ => false,
        }
    }

    fn verbatim_body(&mut self, at: Position) {
        loop {
            match self.peek(0) {
                None => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                Some('"') if self.peek(1) == Some('"') => {
                    self.bump();
                    self.bump();
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push_literal(at);
    }

    /// Body of a C# `$"..."` string; holes may contain nested string literals.
    fn interpolated_body(&mut self, at: Position) {
        let mut holes = 0usize;
        loop {
            match self.peek(0) {
                None | Some('\n') if holes == 0 => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                None => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some('{') if self.peek(1) == Some('{') && holes == 0 => {
                    self.bump();
                    self.bump();
                }
                Some('{') => {
                    holes += 1;
                    self.bump();
                }
                Some('}') if holes > 0 => {
                    holes -= 1;
                    self.bump();
                }
                Some('"') if holes > 0 => {
                    self.bump();
                    while let Some(c) = self.peek(0) {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                        if c == '\\' {
                            self.bump();
                        } else if c == '"' {
                            break;
                        }
                    }
                }
                Some('"') => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push_literal(at);
    }

    /// Scans template text after an opening backtick or a closing `}` of a
    /// substitution. Stops after the closing backtick or after `${`.
    fn template_chunk(&mut self, at: Position) {
        loop {
            match self.peek(0) {
                None => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some('`') => {
                    self.bump();
                    break;
                }
                Some('$') if self.peek(1) == Some('{') => {
                    self.bump();
                    self.bump();
                    self.template_stack.push(self.brace_depth);
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push_literal(at);
    }

    fn word(&mut self, at: Position) {
        let mut text = String::new();
        while let Some(c) = self.peek(0) {
            if is_ident_continue(c) {
                text.push(c);
                self.bump();
            } else {
                break;
            }
        }
        let kind = if self.profile.is_keyword(&text) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(kind, text, at);
    }

    fn punctuator(&mut self, c: char, at: Position) {
        self.bump();
        match c {
            '{' => self.brace_depth += 1,
            '}' => {
                if self.template_stack.last() == Some(&self.brace_depth) {
                    self.template_stack.pop();
                    self.template_chunk(at);
                    return;
                }
                self.brace_depth = self.brace_depth.saturating_sub(1);
            }
            _ => {}
        }
        self.push(TokenKind::Punctuator, c.to_string(), at);
    }

    fn regex_allowed(&self) -> bool {
        match self.tokens.last() {
            None => true,
            Some(t) => match t.kind {
                TokenKind::Identifier | TokenKind::Literal => false,
                TokenKind::Keyword => !matches!(t.text.as_str(), "this" | "super" | "true" | "false" | "null"),
                TokenKind::Punctuator => !matches!(t.text.as_str(), ")" | "]" | "}"),
                TokenKind::Operator => !matches!(t.text.as_str(), "++" | "--"),
                TokenKind::EndOfInput => true,
            },
        }
    }

    fn regex(&mut self, at: Position) {
        self.bump();
        let mut in_class = false;
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    self.diagnostics.push(ScanDiagnostic::UnterminatedLiteral { at });
                    break;
                }
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some('[') => {
                    in_class = true;
                    self.bump();
                }
                Some(']') => {
                    in_class = false;
                    self.bump();
                }
                Some('/') if !in_class => {
                    self.bump();
                    while self.peek(0).is_some_and(is_ident_continue) {
                        self.bump();
                    }
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
        }
        self.push_literal(at);
    }

    fn operator(&mut self, at: Position) {
        for len in (1..=4).rev() {
            let candidate: String = (0..len).filter_map(|i| self.peek(i)).collect();
            if candidate.chars().count() != len {
                continue;
            }
            if !OPERATORS.contains(&candidate.as_str()) {
                continue;
            }
            // `a?.5:1` is a ternary, not optional chaining
            if candidate == "?." && self.peek(2).is_some_and(|c| c.is_ascii_digit()) {
                continue;
            }
            if (candidate == "??" || candidate == "??=" || candidate == "?.") && !self.profile.supports_null_coalescing
            {
                continue;
            }
            for _ in 0..len {
                self.bump();
            }
            self.push(TokenKind::Operator, candidate, at);
            return;
        }
        // Anything else (stray unicode, backslashes) becomes a one-char operator.
        let c = self.bump().unwrap_or(' ');
        self.push(TokenKind::Operator, c.to_string(), at);
    }
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}
