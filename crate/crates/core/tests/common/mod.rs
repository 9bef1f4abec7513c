//! Shared test support: a small random program model with its own metric
//! oracle, rendering into each supported language, and a formatting mutator.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use cogscope_core::lexer::{scan, Language};
use cogscope_core::metrics::{analyze_source, ComplexityReport};
use proptest::prelude::*;
use rand::Rng;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn analyze(src: &str, lang: Language) -> ComplexityReport {
    analyze_source(src, lang.profile(), Path::new("t"))
}

/// Operand names; `names[0]` is the loop counter, the rest are conditions.
#[derive(Debug, Clone)]
pub struct Names(pub Vec<String>);

impl Default for Names {
    fn default() -> Self {
        Names(["i", "a", "b", "c", "d", "x"].iter().map(|s| s.to_string()).collect())
    }
}

/// Condition: operands joined by binary logical operators, optionally negated.
#[derive(Debug, Clone)]
pub struct Cond {
    pub ops: Vec<&'static str>,
    pub negate: Vec<bool>,
}

impl Cond {
    pub fn simple() -> Cond {
        Cond {
            ops: vec![],
            negate: vec![false],
        }
    }

    /// Runs of like operators.
    pub fn runs(&self) -> u32 {
        let mut runs = 0;
        let mut prev = None;
        for op in &self.ops {
            if prev != Some(*op) {
                runs += 1;
            }
            prev = Some(*op);
        }
        runs
    }

    fn render(&self, names: &Names) -> String {
        let mut out = String::new();
        for (i, neg) in self.negate.iter().enumerate() {
            if i > 0 {
                out.push_str(&format!(" {} ", self.ops[i - 1]));
            }
            if *neg {
                out.push('!');
            }
            out.push_str(&names.0[1 + i % (names.0.len() - 2)]);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub enum Stmt {
    Assign,
    If {
        cond: Cond,
        then: Vec<Stmt>,
        elifs: Vec<(Cond, Vec<Stmt>)>,
        els: Option<Vec<Stmt>>,
    },
    For(Cond, Vec<Stmt>),
    While(Cond, Vec<Stmt>),
    DoWhile(Vec<Stmt>, Cond),
    Switch {
        cases: u32,
        default: bool,
        body: Vec<Stmt>,
    },
    Try {
        body: Vec<Stmt>,
        catches: Vec<Vec<Stmt>>,
        finally: Option<Vec<Stmt>>,
    },
    Ternary(Cond),
    Lambda(Vec<Stmt>),
}

impl Stmt {
    fn supported(&self, lang: Language) -> bool {
        match self {
            Stmt::Try { .. } | Stmt::Lambda(_) => lang != Language::C,
            _ => true,
        }
    }
}

/// Expected cognitive complexity at nesting level `n`, computed directly
/// from the rules.
pub fn cognitive(stmts: &[Stmt], n: u32) -> u32 {
    stmts.iter().map(|s| cognitive_stmt(s, n)).sum()
}

fn cognitive_stmt(s: &Stmt, n: u32) -> u32 {
    match s {
        Stmt::Assign => 0,
        Stmt::If { cond, then, elifs, els } => {
            1 + n
                + cond.runs()
                + cognitive(then, n + 1)
                + elifs
                    .iter()
                    .map(|(c, b)| 1 + c.runs() + cognitive(b, n + 1))
                    .sum::<u32>()
                + els.as_ref().map_or(0, |b| 1 + cognitive(b, n + 1))
        }
        Stmt::For(c, b) | Stmt::While(c, b) | Stmt::DoWhile(b, c) => 1 + n + c.runs() + cognitive(b, n + 1),
        Stmt::Switch { body, .. } => 1 + n + cognitive(body, n + 1),
        Stmt::Try { body, catches, finally } => {
            cognitive(body, n)
                + catches.iter().map(|c| 1 + n + cognitive(c, n + 1)).sum::<u32>()
                + finally.as_ref().map_or(0, |f| cognitive(f, n))
        }
        Stmt::Ternary(c) => 1 + n + c.runs(),
        Stmt::Lambda(b) => cognitive(b, n + 1),
    }
}

/// Expected cyclomatic complexity (decision points plus one).
pub fn cyclomatic(stmts: &[Stmt]) -> u32 {
    1 + decisions(stmts)
}

fn decisions(stmts: &[Stmt]) -> u32 {
    stmts
        .iter()
        .map(|s| match s {
            Stmt::Assign => 0,
            Stmt::If { cond, then, elifs, els } => {
                1 + cond.ops.len() as u32
                    + decisions(then)
                    + elifs
                        .iter()
                        .map(|(c, b)| 1 + c.ops.len() as u32 + decisions(b))
                        .sum::<u32>()
                    + els.as_ref().map_or(0, |b| decisions(b))
            }
            Stmt::For(c, b) | Stmt::While(c, b) | Stmt::DoWhile(b, c) => 1 + c.ops.len() as u32 + decisions(b),
            Stmt::Switch { cases, body, .. } => cases + decisions(body),
            Stmt::Try { body, catches, finally } => {
                decisions(body)
                    + catches.iter().map(|c| 1 + decisions(c)).sum::<u32>()
                    + finally.as_ref().map_or(0, |f| decisions(f))
            }
            Stmt::Ternary(c) => 1 + c.ops.len() as u32,
            Stmt::Lambda(b) => decisions(b),
        })
        .sum()
}

/// Number of structural-increment constructs (those paying a nesting penalty).
pub fn structural_count(stmts: &[Stmt]) -> u32 {
    stmts
        .iter()
        .map(|s| match s {
            Stmt::Assign => 0,
            Stmt::If { then, elifs, els, .. } => {
                1 + structural_count(then)
                    + elifs.iter().map(|(_, b)| structural_count(b)).sum::<u32>()
                    + els.as_ref().map_or(0, |b| structural_count(b))
            }
            Stmt::For(_, b) | Stmt::While(_, b) | Stmt::DoWhile(b, _) => 1 + structural_count(b),
            Stmt::Switch { body, .. } => 1 + structural_count(body),
            Stmt::Try { body, catches, finally } => {
                structural_count(body)
                    + catches.iter().map(|c| 1 + structural_count(c)).sum::<u32>()
                    + finally.as_ref().map_or(0, |f| structural_count(f))
            }
            Stmt::Ternary(_) => 1,
            Stmt::Lambda(b) => structural_count(b),
        })
        .sum()
}

pub fn render_block(stmts: &[Stmt], lang: Language, names: &Names, indent: usize, out: &mut String) {
    for s in stmts {
        render_stmt(s, lang, names, indent, out);
    }
}

fn line(out: &mut String, indent: usize, text: &str) {
    out.push_str(&"    ".repeat(indent));
    out.push_str(text);
    out.push('\n');
}

fn render_stmt(s: &Stmt, lang: Language, names: &Names, ind: usize, out: &mut String) {
    let x = &names.0[names.0.len() - 1];
    let i = &names.0[0];
    match s {
        Stmt::Assign => line(out, ind, &format!("{x} = {x} + 1;")),
        Stmt::If { cond, then, elifs, els } => {
            line(out, ind, &format!("if ({}) {{", cond.render(names)));
            render_block(then, lang, names, ind + 1, out);
            for (c, b) in elifs {
                line(out, ind, &format!("}} else if ({}) {{", c.render(names)));
                render_block(b, lang, names, ind + 1, out);
            }
            if let Some(b) = els {
                line(out, ind, "} else {");
                render_block(b, lang, names, ind + 1, out);
            }
            line(out, ind, "}");
        }
        Stmt::For(c, b) => {
            let decl = if lang == Language::Javascript { "let" } else { "int" };
            line(
                out,
                ind,
                &format!("for ({decl} {i} = 0; {}; {i}++) {{", c.render(names)),
            );
            render_block(b, lang, names, ind + 1, out);
            line(out, ind, "}");
        }
        Stmt::While(c, b) => {
            line(out, ind, &format!("while ({}) {{", c.render(names)));
            render_block(b, lang, names, ind + 1, out);
            line(out, ind, "}");
        }
        Stmt::DoWhile(b, c) => {
            line(out, ind, "do {");
            render_block(b, lang, names, ind + 1, out);
            line(out, ind, &format!("}} while ({});", c.render(names)));
        }
        Stmt::Switch { cases, default, body } => {
            line(out, ind, &format!("switch ({x}) {{"));
            for k in 0..*cases {
                line(out, ind + 1, &format!("case {k}:"));
                if k == 0 {
                    render_block(body, lang, names, ind + 2, out);
                }
                line(out, ind + 2, "break;");
            }
            if *default {
                line(out, ind + 1, "default:");
                if *cases == 0 {
                    render_block(body, lang, names, ind + 2, out);
                }
                line(out, ind + 2, "break;");
            }
            line(out, ind, "}");
        }
        Stmt::Try { body, catches, finally } => {
            line(out, ind, "try {");
            render_block(body, lang, names, ind + 1, out);
            for (k, c) in catches.iter().enumerate() {
                let head = match lang {
                    Language::Javascript => "e".to_string(),
                    Language::Cpp => format!("const Error{k}& e"),
                    _ => format!("Error{k} e"),
                };
                line(out, ind, &format!("}} catch ({head}) {{"));
                render_block(c, lang, names, ind + 1, out);
            }
            if let Some(f) = finally {
                line(out, ind, "} finally {");
                render_block(f, lang, names, ind + 1, out);
            }
            line(out, ind, "}");
        }
        Stmt::Ternary(c) => line(out, ind, &format!("{x} = {} ? 1 : 2;", c.render(names))),
        Stmt::Lambda(b) => {
            let open = match lang {
                Language::Java => "() -> {",
                Language::Cpp => "[&]() {",
                _ => "() => {",
            };
            line(out, ind, &format!("run({open}"));
            render_block(b, lang, names, ind + 1, out);
            line(out, ind, "});");
        }
    }
}

/// Wraps a body in one method of the given language.
pub fn render_method(stmts: &[Stmt], lang: Language, names: &Names, method: &str) -> String {
    let mut body = String::new();
    match lang {
        Language::Java | Language::Csharp => {
            body.push_str(&format!("class T {{\n    void {method}(int n) {{\n"));
            render_block(stmts, lang, names, 2, &mut body);
            body.push_str("    }\n}\n");
        }
        Language::Javascript => {
            body.push_str(&format!("function {method}(n) {{\n"));
            render_block(stmts, lang, names, 1, &mut body);
            body.push_str("}\n");
        }
        Language::C | Language::Cpp => {
            body.push_str(&format!("void {method}(int n) {{\n"));
            render_block(stmts, lang, names, 1, &mut body);
            body.push_str("}\n");
        }
    }
    body
}

pub fn render_snippet(stmts: &[Stmt], lang: Language, names: &Names) -> String {
    let mut out = String::new();
    render_block(stmts, lang, names, 0, &mut out);
    out
}

pub fn any_language() -> impl Strategy<Value = Language> {
    prop::sample::select(Language::ALL.to_vec())
}

pub fn cond_strategy() -> impl Strategy<Value = Cond> {
    (0usize..4)
        .prop_flat_map(|k| {
            (
                prop::collection::vec(prop::sample::select(vec!["&&", "||"]), k),
                prop::collection::vec(any::<bool>(), k + 1),
            )
        })
        .prop_map(|(ops, negate)| Cond { ops, negate })
}

fn block(inner: impl Strategy<Value = Stmt> + Clone) -> impl Strategy<Value = Vec<Stmt>> + Clone {
    prop::collection::vec(inner, 0..3)
}

/// Random statement lists up to a small depth.
pub fn stmt_strategy() -> impl Strategy<Value = Stmt> {
    let leaf = prop_oneof![
        3 => Just(Stmt::Assign),
        1 => cond_strategy().prop_map(Stmt::Ternary),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (
                cond_strategy(),
                block(inner.clone()),
                prop::collection::vec((cond_strategy(), block(inner.clone())), 0..2),
                prop::option::of(block(inner.clone())),
            )
                .prop_map(|(cond, then, elifs, els)| Stmt::If { cond, then, elifs, els }),
            (cond_strategy(), block(inner.clone())).prop_map(|(c, b)| Stmt::For(c, b)),
            (cond_strategy(), block(inner.clone())).prop_map(|(c, b)| Stmt::While(c, b)),
            (block(inner.clone()), cond_strategy()).prop_map(|(b, c)| Stmt::DoWhile(b, c)),
            (0u32..4, any::<bool>(), block(inner.clone())).prop_map(|(cases, default, body)| Stmt::Switch {
                cases,
                default: default || cases == 0,
                body
            }),
            (
                block(inner.clone()),
                prop::collection::vec(block(inner.clone()), 1..3),
                prop::option::of(block(inner.clone()))
            )
                .prop_map(|(body, catches, finally)| Stmt::Try { body, catches, finally }),
            block(inner).prop_map(Stmt::Lambda),
        ]
    })
}

/// Drops constructs the language cannot express.
pub fn restrict(stmts: Vec<Stmt>, lang: Language) -> Vec<Stmt> {
    stmts
        .into_iter()
        .filter(|s| s.supported(lang))
        .map(|s| match s {
            Stmt::If { cond, then, elifs, els } => Stmt::If {
                cond,
                then: restrict(then, lang),
                elifs: elifs.into_iter().map(|(c, b)| (c, restrict(b, lang))).collect(),
                els: els.map(|b| restrict(b, lang)),
            },
            Stmt::For(c, b) => Stmt::For(c, restrict(b, lang)),
            Stmt::While(c, b) => Stmt::While(c, restrict(b, lang)),
            Stmt::DoWhile(b, c) => Stmt::DoWhile(restrict(b, lang), c),
            Stmt::Switch { cases, default, body } => Stmt::Switch {
                cases,
                default,
                body: restrict(body, lang),
            },
            Stmt::Try { body, catches, finally } => Stmt::Try {
                body: restrict(body, lang),
                catches: catches.into_iter().map(|c| restrict(c, lang)).collect(),
                finally: finally.filter(|_| lang != Language::Cpp).map(|f| restrict(f, lang)),
            },
            Stmt::Lambda(b) => Stmt::Lambda(restrict(b, lang)),
            other => other,
        })
        .collect()
}

/// A language together with a body it can express.
pub fn program_strategy() -> impl Strategy<Value = (Language, Vec<Stmt>)> {
    (any_language(), prop::collection::vec(stmt_strategy(), 0..4)).prop_map(|(lang, body)| {
        let body = restrict(body, lang);
        (lang, body)
    })
}

pub fn identifier_strategy() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,6}".prop_filter("keyword or reserved", |s| {
        !Language::ALL.iter().any(|l| l.profile().is_keyword(s))
            && !matches!(
                s.as_str(),
                "m" | "n"
                    | "run"
                    | "t"
                    | "e"
                    | "let"
                    | "of"
                    | "in"
                    | "var"
                    | "await"
                    | "async"
                    | "yield"
                    | "when"
                    | "and"
                    | "or"
                    | "not"
                    | "true"
                    | "false"
                    | "null"
                    | "undefined"
                    | "this"
                    | "super"
                    | "new"
                    | "typeof"
                    | "delete"
                    | "void"
                    | "sizeof"
                    | "function"
                    | "class"
                    | "const"
                    | "get"
                    | "set"
                    | "static"
                    | "value"
                    | "where"
                    | "select"
                    | "from"
                    | "is"
                    | "as"
                    | "ref"
                    | "out"
                    | "nameof"
            )
    })
}

/// Distinct operand names that are not keywords in any language.
pub fn names_strategy() -> impl Strategy<Value = Names> {
    prop::collection::btree_set(identifier_strategy(), 6).prop_map(|s| Names(s.into_iter().collect()))
}

/// Comment and whitespace mutation that keeps every token intact: chunks
/// are inserted only before token starts and never on preprocessor lines;
/// horizontal whitespace directly before a bracket or punctuator may be
/// removed.
pub fn mutate_formatting(src: &str, lang: Language, rng: &mut impl Rng) -> String {
    let chars: Vec<char> = src.chars().collect();
    let mut line_starts = vec![0usize];
    for (i, c) in chars.iter().enumerate() {
        if *c == '\n' {
            line_starts.push(i + 1);
        }
    }
    let lines: Vec<String> = src.split('\n').map(str::to_string).collect();
    let mut directive = vec![false; lines.len()];
    if matches!(lang, Language::C | Language::Cpp) {
        let mut continued = false;
        for (i, l) in lines.iter().enumerate() {
            directive[i] = continued || l.trim_start().starts_with('#');
            continued = directive[i] && l.trim_end().ends_with('\\');
        }
    }
    let tokens = scan(src, lang.profile()).tokens;
    let mut inserts: Vec<(usize, String, bool)> = Vec::new();
    let mut prev: Option<&str> = None;
    for t in tokens.iter().filter(|t| !t.is_eoi()) {
        // JavaScript forbids a line break at these points (ASI)
        let no_break = lang == Language::Javascript
            && (matches!(prev, Some("return" | "break" | "continue" | "throw" | "yield"))
                || matches!(t.text.as_str(), "=>" | "++" | "--"));
        prev = Some(t.text.as_str());
        let l = (t.line - 1) as usize;
        if directive.get(l).copied().unwrap_or(true) {
            continue;
        }
        if rng.gen_bool(0.6) {
            continue;
        }
        let offset = line_starts[l] + (t.column - 1) as usize;
        // a newline before `#` would turn it into a directive
        let hash = matches!(lang, Language::C | Language::Cpp) && t.text.starts_with('#');
        let choice = if hash {
            rng.gen_range(0..2)
        } else if no_break {
            [0, 1, 3, 5][rng.gen_range(0..4)]
        } else {
            rng.gen_range(0..6)
        };
        let chunk = match choice {
            0 => " ".repeat(rng.gen_range(1..4)),
            1 => "\t".to_string(),
            2 => "\n".to_string(),
            3 => format!(" /* if (a && b) {} */ ", rng.gen_range(0..100)),
            4 => " // while for ?:\n".to_string(),
            _ => String::new(),
        };
        let strip = chunk.is_empty() && matches!(t.text.as_str(), "(" | ")" | "{" | "}" | "[" | "]" | ";" | ",");
        inserts.push((offset, chunk, strip));
    }
    let mut out = String::with_capacity(src.len() * 2);
    let mut next = 0usize;
    for (offset, chunk, strip) in inserts {
        let mut upto = offset;
        if strip {
            while upto > next && matches!(chars[upto - 1], ' ' | '\t') {
                upto -= 1;
            }
        }
        out.extend(&chars[next..upto]);
        out.push_str(&chunk);
        next = offset;
    }
    out.extend(&chars[next..]);
    if rng.gen_bool(0.3) {
        out = format!("// leading comment\n{out}");
    }
    out
}

/// (file, method) → (cognitive, cyclomatic) from the committed golden CSV.
pub fn golden() -> Vec<(String, String, u32, u32)> {
    let text = std::fs::read_to_string(fixture_dir().join("corpus/golden.csv")).unwrap();
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (
                f[0].to_string(),
                f[1].to_string(),
                f[2].parse().unwrap(),
                f[3].parse().unwrap(),
            )
        })
        .collect()
}

/// Corpus files with their language, in sorted order.
pub fn corpus_files() -> Vec<(String, Language)> {
    let root = fixture_dir().join("corpus");
    let mut files = Vec::new();
    for dir in ["c", "cpp", "csharp", "java", "javascript"] {
        let mut entries: Vec<_> = std::fs::read_dir(root.join(dir))
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        entries.sort();
        for p in entries {
            let ext = p.extension().unwrap().to_str().unwrap();
            let lang = Language::from_extension(ext).unwrap();
            files.push((format!("{dir}/{}", p.file_name().unwrap().to_str().unwrap()), lang));
        }
    }
    files
}

pub fn read_corpus(rel: &str) -> String {
    std::fs::read_to_string(fixture_dir().join("corpus").join(rel)).unwrap()
}

/// Per-file golden comparison: (files matching, files total, differences).
pub fn golden_comparison() -> (usize, usize, Vec<String>) {
    use std::collections::BTreeMap;
    let mut expected: BTreeMap<String, Vec<(String, u32, u32)>> = BTreeMap::new();
    for (path, method, cog, cyc) in golden() {
        expected.entry(path).or_default().push((method, cog, cyc));
    }
    let mut matched = 0;
    let mut diffs = Vec::new();
    for (rel, lang) in corpus_files() {
        let report = analyze(&read_corpus(&rel), lang);
        let got: Vec<(String, u32, u32)> = report
            .methods
            .iter()
            .map(|m| (m.name.clone(), m.cognitive, m.cyclomatic))
            .collect();
        let want = expected.remove(&rel).unwrap_or_default();
        if got == want {
            matched += 1;
        } else {
            diffs.push(format!("{rel}: got {got:?}, expected {want:?}"));
        }
    }
    let total = matched + diffs.len();
    for rel in expected.keys() {
        diffs.push(format!("{rel}: listed in golden.csv but missing from the corpus"));
    }
    (matched, total, diffs)
}

/// Sum of the `+N` increments annotated in a file's comments.
pub fn annotated_total(src: &str) -> u32 {
    let mut total = 0;
    for line in src.lines() {
        let comment = match (line.find("//"), line.find("/*")) {
            (Some(a), Some(b)) => &line[a.min(b)..],
            (Some(a), None) | (None, Some(a)) => &line[a..],
            (None, None) => continue,
        };
        let bytes = comment.as_bytes();
        for (i, _) in comment.match_indices('+') {
            let digits: String = comment[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if !digits.is_empty() && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
                total += digits.parse::<u32>().unwrap();
            }
        }
    }
    total
}
