use crate::diagnostic::{codes, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    Colon,
    Semi,
    Comma,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Str(_) => "string".to_string(),
            TokenKind::LBrace => "`{`".to_string(),
            TokenKind::RBrace => "`}`".to_string(),
            TokenKind::Colon => "`:`".to_string(),
            TokenKind::Semi => "`;`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
            TokenKind::Eof => "end of input".to_string(),
        }
    }
}

/// Line, column (both 1-based, in characters) and length of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

/// Lexical errors carry their position; the caller attaches the file.
pub type LexError = (Diagnostic, Pos);

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

/// Splits `text` into tokens. Never fails outright: malformed input yields
/// error entries and lexing resumes after the offending character.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<LexError>) {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut errors = Vec::new();

    while let Some(c) = cur.peek() {
        let (line, column) = (cur.line, cur.column);
        let at = |length| Pos {
            line,
            column,
            length,
        };
        match c {
            c if c.is_whitespace() || c == '\u{feff}' => {
                cur.bump();
            }
            '#' => {
                while cur.peek().is_some_and(|c| c != '\n') {
                    cur.bump();
                }
            }
            '{' | '}' | ':' | ';' | ',' => {
                cur.bump();
                let kind = match c {
                    '{' => TokenKind::LBrace,
                    '}' => TokenKind::RBrace,
                    ':' => TokenKind::Colon,
                    ';' => TokenKind::Semi,
                    _ => TokenKind::Comma,
                };
                tokens.push(Token { kind, pos: at(1) });
            }
            '"' => {
                cur.bump();
                match lex_string(&mut cur) {
                    Ok((value, len)) => tokens.push(Token {
                        kind: TokenKind::Str(value),
                        pos: at(len),
                    }),
                    Err(len) => errors.push((
                        Diagnostic::error(codes::UNTERMINATED_STRING, "unterminated string literal"),
                        at(len.max(1)),
                    )),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut word = String::new();
                while let Some(c) = cur.peek().filter(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    word.push(c);
                    cur.bump();
                }
                let len = word.len();
                tokens.push(Token {
                    kind: TokenKind::Ident(word),
                    pos: at(len),
                });
            }
            other => {
                cur.bump();
                let mut len = 1;
                // swallow the rest of a bad run so one typo yields one error
                while cur.peek().is_some_and(is_stray) {
                    cur.bump();
                    len += 1;
                }
                errors.push((
                    Diagnostic::error(
                        codes::UNEXPECTED_CHAR,
                        format!("unexpected character `{}`", other.escape_debug()),
                    ),
                    at(len),
                ));
            }
        }
    }
    tokens.push(Token {
        kind: TokenKind::Eof,
        pos: Pos {
            line: cur.line,
            column: cur.column,
            length: 0,
        },
    });
    (tokens, errors)
}

fn is_stray(c: char) -> bool {
    !(c.is_whitespace()
        || c.is_ascii_alphanumeric()
        || matches!(c, '_' | '"' | '#' | '{' | '}' | ':' | ';' | ','))
}

/// Reads a string body after the opening quote. Returns the unescaped value
/// and the token length including quotes, or the consumed length when the
/// string is not closed on its line.
fn lex_string(cur: &mut Cursor<'_>) -> Result<(String, usize), usize> {
    let mut value = String::new();
    let mut len = 1;
    loop {
        match cur.peek() {
            None | Some('\n') | Some('\r') => return Err(len),
            Some('"') => {
                cur.bump();
                return Ok((value, len + 1));
            }
            Some('\\') => {
                cur.bump();
                len += 1;
                match cur.peek() {
                    Some(c @ ('"' | '\\')) => value.push(c),
                    Some('n') => value.push('\n'),
                    Some('r') => value.push('\r'),
                    Some('t') => value.push('\t'),
                    Some(c) if c != '\n' && c != '\r' => {
                        value.push('\\');
                        value.push(c);
                    }
                    _ => return Err(len),
                }
                cur.bump();
                len += 1;
            }
            Some(c) => {
                value.push(c);
                cur.bump();
                len += 1;
            }
        }
    }
}
