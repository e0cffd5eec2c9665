//! The `.dsa` model language.
//!
//! ```text
//! system "FAQ Chatbot" {
//!   actor user info_seeker "User seeking information"
//!
//!   component web_server "Web application server" {
//!     function request_handling "Request handling";
//!     uses: utterances;
//!     runs_on: server;
//!   }
//!
//!   event pii "Personal information in utterances" {
//!     about: utterances;
//!     hinders: privacy severity: medium "Leakage of personal information";
//!   }
//! }
//! ```

mod format;
mod lexer;
mod parser;

use std::path::Path;

pub use format::format;
pub use parser::{parse, ParseResult};

use crate::diagnostic::{codes, Diagnostic, SourceSpan};

/// Reads and parses a file. I/O failures become E190, encoding failures E191.
pub fn load_file(path: &Path) -> ParseResult {
    match std::fs::read(path) {
        Ok(bytes) => load_bytes(&bytes, path),
        Err(err) => failed(
            Diagnostic::error(
                codes::UNREADABLE_FILE,
                format!("cannot read {}: {err}", path.display()),
            )
            .with_location(file_start(path)),
        ),
    }
}

/// Parses raw bytes that claim to be UTF-8 `.dsa` text.
pub fn load_bytes(bytes: &[u8], path: &Path) -> ParseResult {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text, path),
        Err(err) => {
            let valid = &bytes[..err.valid_up_to()];
            let text = String::from_utf8_lossy(valid);
            let line = text.matches('\n').count() + 1;
            let column = text.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
            failed(
                Diagnostic::error(
                    codes::INVALID_UTF8,
                    format!("{} is not valid UTF-8: {err}", path.display()),
                )
                .with_location(SourceSpan {
                    file: path.to_path_buf(),
                    line,
                    column,
                    length: 1,
                }),
            )
        }
    }
}

fn file_start(path: &Path) -> SourceSpan {
    SourceSpan {
        file: path.to_path_buf(),
        line: 1,
        column: 1,
        length: 0,
    }
}

fn failed(d: Diagnostic) -> ParseResult {
    ParseResult {
        model: None,
        diagnostics: vec![d],
        spans: Default::default(),
    }
}
