use crate::error::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Bare identifier; classification (constant, variable, keyword) is left
    /// to the parser.
    Word(String),
    Quoted(String),
    /// `<...>` URI reference, brackets stripped.
    Uri(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Turnstile,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Tokenizes `text`. `%` starts a comment running to end of line.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let push = |out: &mut Vec<Token>, tok| {
                out.push(Token {
                    tok,
                    line: line_no,
                    column,
                })
            };
            match c {
                '%' => break,
                c if c.is_whitespace() => i += 1,
                '(' => {
                    push(&mut out, Tok::LParen);
                    i += 1;
                }
                ')' => {
                    push(&mut out, Tok::RParen);
                    i += 1;
                }
                ',' => {
                    push(&mut out, Tok::Comma);
                    i += 1;
                }
                '.' => {
                    push(&mut out, Tok::Dot);
                    i += 1;
                }
                ':' if chars.get(i + 1) == Some(&'-') => {
                    push(&mut out, Tok::Turnstile);
                    i += 2;
                }
                '"' => {
                    let mut s = String::new();
                    let mut j = i + 1;
                    let mut closed = false;
                    while j < chars.len() {
                        match chars[j] {
                            '\\' => {
                                let esc = chars.get(j + 1).copied().ok_or_else(|| {
                                    syntax(line_no, j + 1, "dangling escape in string")
                                })?;
                                s.push(match esc {
                                    'n' => '\n',
                                    other => other,
                                });
                                j += 2;
                            }
                            '"' => {
                                closed = true;
                                j += 1;
                                break;
                            }
                            other => {
                                s.push(other);
                                j += 1;
                            }
                        }
                    }
                    if !closed {
                        return Err(syntax(line_no, column, "unterminated string"));
                    }
                    push(&mut out, Tok::Quoted(s));
                    i = j;
                }
                '<' => {
                    let end = chars[i + 1..]
                        .iter()
                        .position(|&c| c == '>')
                        .ok_or_else(|| syntax(line_no, column, "unterminated <uri>"))?;
                    let s: String = chars[i + 1..i + 1 + end].iter().collect();
                    push(&mut out, Tok::Uri(s));
                    i += end + 2;
                }
                c if is_word_char(c) => {
                    let mut j = i;
                    while j < chars.len() {
                        let d = chars[j];
                        let next_is_word = chars.get(j + 1).is_some_and(|&n| is_word_char(n));
                        if is_word_char(d) || ((d == ':' || d == '.') && next_is_word) {
                            j += 1;
                        } else {
                            break;
                        }
                    }
                    push(&mut out, Tok::Word(chars[i..j].iter().collect()));
                    i = j;
                }
                other => {
                    return Err(syntax(line_no, column, &format!("unexpected character {other:?}")));
                }
            }
        }
    }
    Ok(out)
}

pub fn syntax(line: usize, column: usize, msg: &str) -> ParseError {
    ParseError::new(line, column, ParseErrorKind::Syntax(msg.to_owned()))
}

/// Cursor over a token slice with location-aware errors.
pub struct Cursor<'t> {
    toks: &'t [Token],
    pos: usize,
}

impl<'t> Cursor<'t> {
    pub fn new(toks: &'t [Token]) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos)
    }

    pub fn next(&mut self) -> Option<&'t Token> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    /// Location of the next token, or just past the last one.
    pub fn loc(&self) -> (usize, usize) {
        match self.peek() {
            Some(t) => (t.line, t.column),
            None => self.toks.last().map_or((1, 1), |t| (t.line, t.column + 1)),
        }
    }

    pub fn error(&self, msg: &str) -> ParseError {
        let (l, c) = self.loc();
        syntax(l, c, msg)
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<&'t Token, ParseError> {
        match self.peek() {
            Some(t) if &t.tok == tok => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().is_some_and(|t| &t.tok == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}
