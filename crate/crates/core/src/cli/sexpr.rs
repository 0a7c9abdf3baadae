//! Positioned s-expression reader.
//!
//! Besides parenthesized lists the reader knows brace lists `{a, b}` for
//! value literals. Commas are separators and `;` starts a comment that runs
//! to the end of the line.

use std::fmt;

use thiserror::Error;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: expected {expected}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

impl ParseError {
    pub fn at(pos: Pos, expected: impl Into<String>) -> Self {
        ParseError {
            line: pos.line,
            col: pos.col,
            expected: expected.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
    Braces(Vec<Sexp>, Pos),
}

impl Sexp {
    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) | Sexp::Braces(_, p) => *p,
        }
    }

    pub fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            _ => None,
        }
    }

    pub fn list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            _ => None,
        }
    }

    /// Head keyword of a nonempty list whose first element is an atom.
    pub fn head(&self) -> Option<&str> {
        self.list()
            .and_then(|items| items.first())
            .and_then(Sexp::atom)
    }
}

struct Reader<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '{' | '}' | ',' | ';')
}

impl Reader<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || c == ',' {
                self.bump();
            } else if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Option<Sexp>, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '(' | '{' => {
                self.bump();
                let close = if c == '(' { ')' } else { '}' };
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return Err(ParseError::at(self.pos, format!("`{close}`"))),
                        Some(&d) if d == close => {
                            self.bump();
                            break;
                        }
                        Some(')' | '}') => {
                            return Err(ParseError::at(self.pos, format!("`{close}`")));
                        }
                        Some(_) => items.push(self.read()?.expect("input remains")),
                    }
                }
                Ok(Some(if c == '(' {
                    Sexp::List(items, start)
                } else {
                    Sexp::Braces(items, start)
                }))
            }
            ')' | '}' => Err(ParseError::at(start, "an expression")),
            _ => {
                let mut text = String::new();
                while let Some(&d) = self.chars.peek() {
                    if is_delimiter(d) {
                        break;
                    }
                    text.push(d);
                    self.bump();
                }
                Ok(Some(Sexp::Atom(text, start)))
            }
        }
    }
}

/// All top-level expressions of `text`.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut r = Reader {
        chars: text.chars().peekable(),
        pos: Pos { line: 1, col: 1 },
    };
    let mut out = Vec::new();
    while let Some(s) = r.read()? {
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_nested_lists_with_positions() {
        let got = read_all("; header\n(a (b c)\n  {u0, {}})").unwrap();
        assert_eq!(got.len(), 1);
        let items = got[0].list().unwrap();
        assert_eq!(items[0].pos(), Pos { line: 2, col: 2 });
        assert!(
            matches!(&items[2], Sexp::Braces(v, p) if v.len() == 2 && p.line == 3 && p.col == 3)
        );
    }

    #[test]
    fn reports_unbalanced_input() {
        let err = read_all("(a (b)").unwrap_err();
        assert_eq!((err.line, err.col), (1, 7));
        let err = read_all("a)").unwrap_err();
        assert_eq!((err.line, err.col), (1, 2));
        let err = read_all("(a}").unwrap_err();
        assert_eq!(err.expected, "`)`");
    }
}
