//! Recursive-descent parser for `.dsa` files.
//!
//! Parsing happens in two passes. The first pass turns tokens into
//! declarations, reporting syntax errors and recovering at clause and
//! statement boundaries. The second pass lowers declarations into an
//! [`AlignmentModel`], resolving references and materializing the implicit
//! relations of `by:`, `influences:`, `serves:`, `realized_by:`, nested
//! `function`, `uses:` and `about:` clauses.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::lexer::{tokenize, Pos, Token, TokenKind};
use crate::diagnostic::{codes, has_errors, Diagnostic, SourceSpan};
use crate::model::{
    check_connection, is_valid_id, AlignmentModel, Annotation, Attr, AttrKey, Connection, Element,
    ElementKind, Platform, RelationKind, RiskLevel, RESERVED_WORDS,
};
use crate::taxonomy::{suggest, Leaf};

#[derive(Debug, Clone)]
pub struct ParseResult {
    /// Present iff `diagnostics` holds no error.
    pub model: Option<AlignmentModel>,
    pub diagnostics: Vec<Diagnostic>,
    /// Declaration site of every element id.
    pub spans: HashMap<String, SourceSpan>,
}

impl ParseResult {
    pub fn is_ok(&self) -> bool {
        self.model.is_some()
    }

    /// Fills in the location of findings that name a declared element.
    pub fn locate(&self, diagnostics: &mut [Diagnostic]) {
        for d in diagnostics {
            if d.location.is_none() {
                if let Some(span) = d.subject.as_ref().and_then(|s| self.spans.get(s)) {
                    d.location = Some(span.clone());
                }
            }
        }
    }
}

pub fn parse(text: &str, file: &Path) -> ParseResult {
    let (tokens, lex_errors) = tokenize(text);
    let mut parser = Parser {
        tokens,
        idx: 0,
        file: file.to_path_buf(),
        diagnostics: Vec::new(),
    };
    for (d, pos) in lex_errors {
        let d = d.with_location(parser.span(pos));
        parser.diagnostics.push(d);
    }
    let file_ast = parser.file();
    let mut diagnostics = parser.diagnostics;
    let Some(ast) = file_ast else {
        return ParseResult {
            model: None,
            diagnostics,
            spans: HashMap::new(),
        };
    };
    let (model, spans) = lower(ast, &parser.file, &mut diagnostics);
    diagnostics.sort_by_key(|d| {
        d.location
            .as_ref()
            .map(|s| (s.line, s.column))
            .unwrap_or((usize::MAX, usize::MAX))
    });
    let model = model.filter(|_| !has_errors(&diagnostics));
    ParseResult {
        model,
        diagnostics,
        spans,
    }
}

#[derive(Debug)]
struct FileAst {
    system_name: String,
    name_pos: Pos,
    decls: Vec<Decl>,
}

#[derive(Debug)]
struct Decl {
    element: Element,
    id_pos: Pos,
    links: Vec<Link>,
    valid_id: bool,
}

/// A reference clause entry waiting to become a relation.
#[derive(Debug)]
struct Link {
    rank: u8,
    kind: RelationKind,
    reference: String,
    pos: Pos,
    /// Whether the declaring element is the relation source.
    outward: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RefClause {
    By,
    Serves,
    RealizedBy,
    Function,
    Uses,
    About,
    Influences,
}

impl RefClause {
    fn from_key(key: &str) -> Option<Self> {
        Some(match key {
            "by" => RefClause::By,
            "serves" => RefClause::Serves,
            "realized_by" => RefClause::RealizedBy,
            "function" => RefClause::Function,
            "uses" => RefClause::Uses,
            "about" => RefClause::About,
            "influences" => RefClause::Influences,
            _ => return None,
        })
    }

    /// Canonical ordering of relations declared by one element.
    fn rank(self) -> u8 {
        match self {
            RefClause::By => 0,
            RefClause::Serves => 1,
            RefClause::RealizedBy => 2,
            RefClause::Function => 3,
            RefClause::Uses => 4,
            RefClause::About => 5,
            RefClause::Influences => 6,
        }
    }

    fn relation(self) -> (RelationKind, bool) {
        match self {
            RefClause::By => (RelationKind::Assignment, false),
            RefClause::Serves => (RelationKind::Serving, true),
            RefClause::RealizedBy => (RelationKind::Realization, false),
            RefClause::Function => (RelationKind::Realization, true),
            RefClause::Uses => (RelationKind::Access, true),
            RefClause::About => (RelationKind::Association, true),
            RefClause::Influences => (RelationKind::Influence, true),
        }
    }

    fn allowed_in(self, kind: ElementKind) -> bool {
        use ElementKind::*;
        matches!(
            (self, kind),
            (RefClause::By, UserActivity | OperatorActivity)
                | (RefClause::Influences, UserActivity)
                | (RefClause::Serves | RefClause::RealizedBy, DialogueService)
                | (RefClause::Function, SystemComponent)
                | (RefClause::Uses, SystemComponent | ComponentFunction)
                | (RefClause::About, ObservedEvent)
        )
    }
}

const STATEMENTS: &[&str] = &[
    "actor",
    "user_activity",
    "operator_activity",
    "service",
    "component",
    "function",
    "data",
    "event",
];

fn statement_kind(word: &str) -> Option<ElementKind> {
    Some(match word {
        "user_activity" => ElementKind::UserActivity,
        "operator_activity" => ElementKind::OperatorActivity,
        "service" => ElementKind::DialogueService,
        "component" => ElementKind::SystemComponent,
        "function" => ElementKind::ComponentFunction,
        "data" => ElementKind::DataModel,
        "event" => ElementKind::ObservedEvent,
        _ => return None,
    })
}

/// Clause keys accepted by a statement, for suggestions.
fn clause_keys(kind: ElementKind) -> Vec<&'static str> {
    let mut keys = vec!["description"];
    for key in ["by", "serves", "realized_by", "function", "uses", "about", "influences"] {
        if RefClause::from_key(key).is_some_and(|c| c.allowed_in(kind)) {
            keys.push(key);
        }
    }
    keys.extend(kind.allowed_attrs().iter().map(|k| k.as_str()));
    keys
}

/// Marker for a failure already reported; the caller recovers.
struct Reported;

type PResult<T> = Result<T, Reported>;

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    file: PathBuf,
    diagnostics: Vec<Diagnostic>,
}

impl Parser {
    fn span(&self, pos: Pos) -> SourceSpan {
        SourceSpan {
            file: self.file.clone(),
            line: pos.line,
            column: pos.column,
            length: pos.length,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.idx]
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.idx].clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        token
    }

    fn at(&self, kind: &TokenKind) -> bool {
        &self.peek().kind == kind
    }

    fn at_word(&self, word: &str) -> bool {
        matches!(&self.peek().kind, TokenKind::Ident(w) if w == word)
    }

    fn error(&mut self, code: &str, message: impl Into<String>, pos: Pos) {
        let d = Diagnostic::error(code, message).with_location(self.span(pos));
        self.diagnostics.push(d);
    }

    fn unexpected(&mut self, expected: &str) -> Reported {
        let token = self.peek().clone();
        self.error(
            codes::UNEXPECTED_TOKEN,
            format!("expected {expected}, found {}", token.kind.describe()),
            token.pos,
        );
        Reported
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> PResult<Token> {
        if self.at(&kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn word(&mut self, expected: &str) -> PResult<(String, Pos)> {
        match self.peek().kind.clone() {
            TokenKind::Ident(w) => {
                let pos = self.bump().pos;
                Ok((w, pos))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn string(&mut self, expected: &str) -> PResult<(String, Pos)> {
        match self.peek().kind.clone() {
            TokenKind::Str(s) => {
                let pos = self.bump().pos;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn optional_string(&mut self) -> String {
        match self.peek().kind.clone() {
            TokenKind::Str(s) => {
                self.bump();
                s
            }
            _ => String::new(),
        }
    }

    /// An element id. Reports E005 for malformed or reserved ids but keeps
    /// parsing so later errors still surface.
    fn id(&mut self) -> PResult<(String, Pos, bool)> {
        let (id, pos) = self.word("identifier")?;
        let valid = is_valid_id(&id);
        if !valid {
            let why = if RESERVED_WORDS.contains(&id.as_str()) {
                "is a reserved word"
            } else {
                "must match [a-z][a-z0-9_]*"
            };
            self.error(codes::INVALID_ID, format!("invalid id `{id}`: {why}"), pos);
        }
        Ok((id, pos, valid))
    }

    fn file(&mut self) -> Option<FileAst> {
        if !self.at_word("system") {
            let token = self.peek().clone();
            self.error(
                codes::EXPECTED_SYSTEM,
                format!("expected system block, found {}", token.kind.describe()),
                token.pos,
            );
            return None;
        }
        self.bump();
        let (system_name, name_pos) = self.string("system name string").ok()?;
        self.expect(TokenKind::LBrace, "`{`").ok()?;
        let mut decls = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    let _ = self.unexpected("`}` closing the system block");
                    break;
                }
                TokenKind::Semi => {
                    self.bump();
                }
                _ => {
                    let before = self.idx;
                    if self.statement(&mut decls).is_err() {
                        self.recover_statement();
                    }
                    if self.idx == before {
                        self.bump();
                    }
                }
            }
        }
        if !self.at(&TokenKind::Eof) {
            let token = self.peek().clone();
            let message = if matches!(&token.kind, TokenKind::Ident(w) if w == "system") {
                "only one system block is allowed per file".to_string()
            } else {
                format!("unexpected {} after the system block", token.kind.describe())
            };
            self.error(codes::TRAILING_INPUT, message, token.pos);
        }
        Some(FileAst {
            system_name,
            name_pos,
            decls,
        })
    }

    /// Skips to the start of the next statement or the end of the system
    /// block, never consuming the closing brace.
    fn recover_statement(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::RBrace if depth == 0 => return,
                TokenKind::RBrace => depth -= 1,
                TokenKind::LBrace => depth += 1,
                TokenKind::Ident(w) if depth == 0 && STATEMENTS.contains(&w.as_str()) => return,
                _ => {}
            }
            self.bump();
        }
    }

    /// Skips past the current clause: through the next `;` or up to a `}`
    /// at the clause's own depth.
    fn recover_clause(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::Semi if depth == 0 => {
                    self.bump();
                    return;
                }
                TokenKind::RBrace if depth == 0 => return,
                TokenKind::RBrace => depth -= 1,
                TokenKind::LBrace => depth += 1,
                _ => {}
            }
            self.bump();
        }
    }

    fn statement(&mut self, decls: &mut Vec<Decl>) -> PResult<()> {
        let (keyword, kw_pos) = self.word("statement")?;
        let kind = if keyword == "actor" {
            let (role, pos) = self.word("`user` or `operator`")?;
            match role.as_str() {
                "user" => ElementKind::User,
                "operator" => ElementKind::Operator,
                _ => {
                    self.error(
                        codes::INVALID_VALUE,
                        format!("actor role must be `user` or `operator`, found `{role}`"),
                        pos,
                    );
                    return Err(Reported);
                }
            }
        } else if let Some(kind) = statement_kind(&keyword) {
            kind
        } else {
            let hint = suggest(&keyword, STATEMENTS.iter().copied())
                .map(|s| format!("; did you mean `{s}`?"))
                .unwrap_or_default();
            self.error(
                codes::UNKNOWN_STATEMENT,
                format!("unknown statement `{keyword}`{hint}"),
                kw_pos,
            );
            return Err(Reported);
        };
        self.declaration(kind, decls)
    }

    /// `<id> "<name>" [ { clauses } ]` for an already identified kind.
    fn declaration(&mut self, kind: ElementKind, decls: &mut Vec<Decl>) -> PResult<()> {
        let (id, id_pos, valid_id) = self.id()?;
        let (name, _) = self.string("display name string")?;
        let index = decls.len();
        decls.push(Decl {
            element: Element::new(kind, id, name),
            id_pos,
            links: Vec::new(),
            valid_id,
        });
        if self.at(&TokenKind::LBrace) {
            self.bump();
            self.block(index, decls);
        }
        Ok(())
    }

    fn block(&mut self, owner: usize, decls: &mut Vec<Decl>) {
        loop {
            match &self.peek().kind {
                TokenKind::RBrace => {
                    self.bump();
                    return;
                }
                TokenKind::Eof => {
                    let _ = self.unexpected("`}` closing the block");
                    return;
                }
                TokenKind::Semi => {
                    self.bump();
                }
                _ => {
                    let before = self.idx;
                    if self.clause(owner, decls).is_err() {
                        self.recover_clause();
                    }
                    if self.idx == before {
                        self.bump();
                    }
                }
            }
        }
    }

    fn clause(&mut self, owner: usize, decls: &mut Vec<Decl>) -> PResult<()> {
        let kind = decls[owner].element.kind;
        let (key, key_pos) = self.word("clause")?;

        if let Some(clause) = RefClause::from_key(&key) {
            if !clause.allowed_in(kind) {
                self.error(
                    codes::UNKNOWN_CLAUSE,
                    format!("`{key}` is not allowed in a {kind} declaration"),
                    key_pos,
                );
                return Err(Reported);
            }
            if clause == RefClause::Function {
                return self.nested_function(owner, decls);
            }
            self.expect(TokenKind::Colon, "`:`")?;
            let refs = self.id_list()?;
            self.expect(TokenKind::Semi, "`;`")?;
            let (relation, outward) = clause.relation();
            for (reference, pos) in refs {
                decls[owner].links.push(Link {
                    rank: clause.rank(),
                    kind: relation,
                    reference,
                    pos,
                    outward,
                });
            }
            return Ok(());
        }

        if key == "description" {
            self.expect(TokenKind::Colon, "`:`")?;
            let (text, _) = self.string("description string")?;
            self.expect(TokenKind::Semi, "`;`")?;
            decls[owner].element.description = Some(text);
            return Ok(());
        }

        let Ok(attr_key) = key.parse::<AttrKey>() else {
            let hint = suggest(&key, clause_keys(kind))
                .map(|s| format!("; did you mean `{s}`?"))
                .unwrap_or_default();
            self.error(
                codes::UNKNOWN_CLAUSE,
                format!("unknown clause `{key}` in a {kind} declaration{hint}"),
                key_pos,
            );
            return Err(Reported);
        };
        if !kind.allowed_attrs().contains(&attr_key) || !attr_key_is_writable(attr_key) {
            self.error(
                codes::ATTR_NOT_ALLOWED,
                format!("attribute `{key}` is not allowed on {kind} elements"),
                key_pos,
            );
            return Err(Reported);
        }
        self.expect(TokenKind::Colon, "`:`")?;
        let attr = self.attr_value(attr_key)?;
        self.expect(TokenKind::Semi, "`;`")?;
        decls[owner].element.attrs.push(attr);
        Ok(())
    }

    fn nested_function(&mut self, owner: usize, decls: &mut Vec<Decl>) -> PResult<()> {
        let (id, id_pos, valid_id) = self.id()?;
        let (name, _) = self.string("display name string")?;
        if valid_id {
            decls[owner].links.push(Link {
                rank: RefClause::Function.rank(),
                kind: RelationKind::Realization,
                reference: id.clone(),
                pos: id_pos,
                outward: true,
            });
        }
        let index = decls.len();
        decls.push(Decl {
            element: Element::new(ElementKind::ComponentFunction, id, name),
            id_pos,
            links: Vec::new(),
            valid_id,
        });
        if self.at(&TokenKind::LBrace) {
            self.bump();
            self.block(index, decls);
            if self.at(&TokenKind::Semi) {
                self.bump();
            }
        } else {
            self.expect(TokenKind::Semi, "`;`")?;
        }
        Ok(())
    }

    fn id_list(&mut self) -> PResult<Vec<(String, Pos)>> {
        let mut refs = vec![self.word("identifier")?];
        while self.at(&TokenKind::Comma) {
            self.bump();
            refs.push(self.word("identifier")?);
        }
        Ok(refs)
    }

    fn attr_value(&mut self, key: AttrKey) -> PResult<Attr> {
        match key {
            AttrKey::Role => Ok(Attr::Role {
                text: self.string("role string")?.0,
            }),
            AttrKey::RunsOn => {
                let (word, pos) = self.word("platform")?;
                let platform = self.enum_value(&word, pos, "platform", &Platform::ALL.map(Platform::as_str))?;
                Ok(Attr::RunsOn {
                    platform: platform.parse().expect("checked above"),
                })
            }
            AttrKey::YieldsUserValue | AttrKey::YieldsQualityValue | AttrKey::YieldsBusinessValue => {
                let leaf = self.leaf(key)?;
                let annotation = Annotation::new(leaf, self.optional_string());
                Ok(match key {
                    AttrKey::YieldsUserValue => Attr::YieldsUserValue(annotation),
                    AttrKey::YieldsQualityValue => Attr::YieldsQualityValue(annotation),
                    _ => Attr::YieldsBusinessValue(annotation),
                })
            }
            AttrKey::ImpliesCost => {
                let leaf = self.leaf(key)?;
                Ok(Attr::ImpliesCost(Annotation::new(leaf, self.optional_string())))
            }
            AttrKey::Hinders => {
                let principle = self.leaf(key)?;
                let mut severity = RiskLevel::default();
                if self.at_word("severity") {
                    self.bump();
                    self.expect(TokenKind::Colon, "`:`")?;
                    let (word, pos) = self.word("severity level")?;
                    let level = self.enum_value(&word, pos, "severity", &RiskLevel::ALL.map(RiskLevel::as_str))?;
                    severity = level.parse().expect("checked above");
                }
                Ok(Attr::Hinders {
                    principle,
                    severity,
                    description: self.optional_string(),
                })
            }
            AttrKey::Category | AttrKey::Severity | AttrKey::Rule => {
                unreachable!("derived attributes are rejected before their value is read")
            }
        }
    }

    fn enum_value<'a>(&mut self, word: &str, pos: Pos, what: &str, options: &[&'a str]) -> PResult<&'a str> {
        if let Some(found) = options.iter().find(|o| **o == word) {
            return Ok(found);
        }
        let hint = suggest(word, options.iter().copied())
            .map(|s| format!("; did you mean `{s}`?"))
            .unwrap_or_else(|| format!("; expected one of {}", options.join(", ")));
        self.error(
            codes::INVALID_VALUE,
            format!("unknown {what} `{word}`{hint}"),
            pos,
        );
        Err(Reported)
    }

    /// A taxonomy leaf admitted by `key`. `implies_cost` also takes the
    /// short forms `human`, `information` and `it`.
    fn leaf(&mut self, key: AttrKey) -> PResult<Leaf> {
        let (word, pos) = self.word("taxonomy leaf")?;
        let domain = key.leaf_domain().expect("leaf-valued attribute");
        let resolved = if key == AttrKey::ImpliesCost {
            cost_short_form(&word).or_else(|| word.parse().ok())
        } else {
            word.parse::<Leaf>().ok()
        };
        match resolved {
            Some(leaf) if domain.contains(&leaf) => Ok(leaf),
            Some(leaf) => {
                self.error(
                    codes::LEAF_WRONG_BRANCH,
                    format!(
                        "`{key}` cannot take `{word}` ({}); expected one of {}",
                        leaf.path(),
                        candidates(key).join(", ")
                    ),
                    pos,
                );
                Err(Reported)
            }
            None => {
                let options = candidates(key);
                let hint = suggest(&word, suggestion_pool(key))
                    .map(|s| format!("; did you mean `{s}`?"))
                    .unwrap_or_else(|| format!("; expected one of {}", options.join(", ")));
                self.error(
                    codes::UNKNOWN_LEAF,
                    format!("unknown taxonomy leaf `{word}` for `{key}`{hint}"),
                    pos,
                );
                Err(Reported)
            }
        }
    }
}

fn attr_key_is_writable(key: AttrKey) -> bool {
    !matches!(key, AttrKey::Category | AttrKey::Severity | AttrKey::Rule)
}

pub(crate) fn cost_short_form(word: &str) -> Option<Leaf> {
    match word {
        "human" => Some(Leaf::HumanResources),
        "information" => Some(Leaf::InformationResources),
        "it" => Some(Leaf::ItResources),
        _ => None,
    }
}

pub(crate) fn cost_short_name(leaf: Leaf) -> &'static str {
    match leaf {
        Leaf::HumanResources => "human",
        Leaf::InformationResources => "information",
        Leaf::ItResources => "it",
        other => other.name(),
    }
}

/// Spellings accepted in the value position of `key`.
/// Every leaf name, preceded by the short cost forms for `implies_cost`.
fn suggestion_pool(key: AttrKey) -> Vec<&'static str> {
    let mut pool = Vec::new();
    if key == AttrKey::ImpliesCost {
        pool.extend(Leaf::costs().map(cost_short_name));
    }
    pool.extend(Leaf::ALL.map(Leaf::name));
    pool
}

fn candidates(key: AttrKey) -> Vec<&'static str> {
    let domain = key.leaf_domain().unwrap_or_default();
    if key == AttrKey::ImpliesCost {
        domain.into_iter().map(cost_short_name).collect()
    } else {
        domain.into_iter().map(Leaf::name).collect()
    }
}

fn lower(
    ast: FileAst,
    file: &Path,
    diagnostics: &mut Vec<Diagnostic>,
) -> (Option<AlignmentModel>, HashMap<String, SourceSpan>) {
    let span = |pos: Pos| SourceSpan {
        file: file.to_path_buf(),
        line: pos.line,
        column: pos.column,
        length: pos.length,
    };
    let mut spans = HashMap::new();
    let mut model = match AlignmentModel::new(ast.system_name) {
        Ok(m) => m,
        Err(d) => {
            diagnostics.push(d.with_location(span(ast.name_pos)));
            return (None, spans);
        }
    };

    let mut added = Vec::with_capacity(ast.decls.len());
    for decl in &ast.decls {
        if !decl.valid_id {
            added.push(false);
            continue;
        }
        match model.add(decl.element.clone()) {
            Ok(id) => {
                spans.insert(id, span(decl.id_pos));
                added.push(true);
            }
            Err(d) => {
                diagnostics.push(d.with_location(span(decl.id_pos)));
                added.push(false);
            }
        }
    }

    for (decl, _) in ast.decls.iter().zip(&added).filter(|(_, ok)| **ok) {
        let owner = &decl.element;
        let mut links: Vec<&Link> = decl.links.iter().collect();
        links.sort_by_key(|l| l.rank);
        for link in links {
            let Some(other) = model.element(&link.reference) else {
                let known: Vec<&str> = model.elements().map(|e| e.id.as_str()).collect();
                let hint = suggest(&link.reference, known)
                    .map(|s| format!("; did you mean `{s}`?"))
                    .unwrap_or_default();
                diagnostics.push(
                    Diagnostic::error(
                        codes::UNKNOWN_REFERENCE,
                        format!("unknown element `{}`{hint}", link.reference),
                    )
                    .with_subject(&owner.id)
                    .with_location(span(link.pos)),
                );
                continue;
            };
            let (source, target) = if link.outward {
                (owner, other)
            } else {
                (other, owner)
            };
            if check_connection(source.kind, link.kind, target.kind) == Connection::Forbidden {
                diagnostics.push(
                    crate::model::forbidden_relation(
                        &source.id,
                        source.kind,
                        link.kind,
                        &target.id,
                        target.kind,
                    )
                    .with_location(span(link.pos)),
                );
                continue;
            }
            let (source, target) = (source.id.clone(), target.id.clone());
            model
                .add_relation(link.kind, &source, &target)
                .expect("endpoints and connection checked above");
        }
    }
    (Some(model), spans)
}
