use std::fmt;

use serde::Serialize;

use super::parser::ParseError;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Lower-case identifiers, including keywords.
    Ident(String),
    /// Capitalised names: base types, class names and `CodeC`.
    Upper(String),
    Int(i64),
    Str(String),
    DoubleColon,
    Colon,
    Equals,
    Semi,
    Comma,
    Dot,
    Arrow,
    FatArrow,
    Backslash,
    BigLambda,
    LParen,
    RParen,
    QuoteOpen,
    QuoteClose,
    SpliceOpen,
    Lt,
    Gt,
    LBrace,
    RBrace,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Upper(s) => return write!(f, "`{s}`"),
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Str(s) => return write!(f, "{s:?}"),
            Tok::DoubleColon => "::",
            Tok::Colon => ":",
            Tok::Equals => "=",
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Arrow => "->",
            Tok::FatArrow => "=>",
            Tok::Backslash => "\\",
            Tok::BigLambda => "/\\",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::QuoteOpen => "[|",
            Tok::QuoteClose => "|]",
            Tok::SpliceOpen => "$(",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Turnstile => "|-",
            Tok::Eof => return f.write_str("end of input"),
        };
        write!(f, "`{s}`")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub const KEYWORDS: [&str; 12] = [
    "def", "class", "instance", "where", "main", "forall", "ifz", "then", "else", "true", "false",
    "spdef",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let two = |a: char, b: char| c == a && next == Some(b);
        let sym = if two(':', ':') {
            Some((Tok::DoubleColon, 2))
        } else if two('-', '>') {
            Some((Tok::Arrow, 2))
        } else if two('=', '>') {
            Some((Tok::FatArrow, 2))
        } else if two('/', '\\') {
            Some((Tok::BigLambda, 2))
        } else if two('[', '|') {
            Some((Tok::QuoteOpen, 2))
        } else if two('|', ']') {
            Some((Tok::QuoteClose, 2))
        } else if two('|', '-') {
            Some((Tok::Turnstile, 2))
        } else if two('$', '(') {
            Some((Tok::SpliceOpen, 2))
        } else {
            match c {
                ':' => Some((Tok::Colon, 1)),
                '=' => Some((Tok::Equals, 1)),
                ';' => Some((Tok::Semi, 1)),
                ',' => Some((Tok::Comma, 1)),
                '.' => Some((Tok::Dot, 1)),
                '\\' => Some((Tok::Backslash, 1)),
                '(' => Some((Tok::LParen, 1)),
                ')' => Some((Tok::RParen, 1)),
                '<' => Some((Tok::Lt, 1)),
                '>' => Some((Tok::Gt, 1)),
                '{' => Some((Tok::LBrace, 1)),
                '}' => Some((Tok::RBrace, 1)),
                _ => None,
            }
        };
        if let Some((tok, len)) = sym {
            for _ in 0..len {
                bump!();
            }
            out.push(Token { tok, span });
            continue;
        }
        let negative = c == '-' && next.is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative {
            let start = i;
            bump!();
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse::<i64>().map_err(|_| ParseError {
                span,
                message: format!("integer literal `{text}` out of range"),
                expected: Vec::new(),
            })?;
            out.push(Token {
                tok: Tok::Int(n),
                span,
            });
            continue;
        }
        if c == '"' {
            bump!();
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(ParseError {
                            span,
                            message: "unterminated string literal".into(),
                            expected: Vec::new(),
                        })
                    }
                    Some('"') => {
                        bump!();
                        break;
                    }
                    Some('\\') => {
                        bump!();
                        let esc = match chars.get(i) {
                            Some('n') => '\n',
                            Some('t') => '\t',
                            Some('\\') => '\\',
                            Some('"') => '"',
                            _ => {
                                return Err(ParseError {
                                    span: Span { line, col },
                                    message: "unknown escape in string literal".into(),
                                    expected: Vec::new(),
                                })
                            }
                        };
                        s.push(esc);
                        bump!();
                    }
                    Some(&ch) => {
                        s.push(ch);
                        bump!();
                    }
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                span,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                bump!();
            }
            let text: String = chars[start..i].iter().collect();
            let tok = if c.is_uppercase() {
                Tok::Upper(text)
            } else {
                Tok::Ident(text)
            };
            out.push(Token { tok, span });
            continue;
        }
        return Err(ParseError {
            span,
            message: format!("unexpected character `{c}`"),
            expected: Vec::new(),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
