//! Tokenizer for ISO-style Prolog text. Layout and comments are consumed
//! here and never reach the parser.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// 1-based line and column (in characters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokenKind {
    /// Unquoted atom: letter-digit, graphic, or solo (`!`, `;`).
    Name(String),
    /// Quoted atom, holding the unescaped value.
    QuotedName(String),
    Var(String),
    Int(BigInt),
    Float(f64),
    /// Double-quoted string as character codes.
    Codes(Vec<u32>),
    OpenParen,
    /// `(` immediately following a name, with no layout in between.
    OpenParenAfterName,
    CloseParen,
    OpenBracket,
    CloseBracket,
    OpenCurly,
    CloseCurly,
    Comma,
    Bar,
    /// Clause terminator: `.` followed by layout, `%` or end of input.
    End,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Name(n) => format!("atom `{n}`"),
            TokenKind::QuotedName(n) => format!("atom `'{n}'`"),
            TokenKind::Var(n) => format!("variable `{n}`"),
            TokenKind::Int(i) => format!("integer `{i}`"),
            TokenKind::Float(x) => format!("float `{x:?}`"),
            TokenKind::Codes(_) => "string".to_owned(),
            TokenKind::OpenParen | TokenKind::OpenParenAfterName => "`(`".to_owned(),
            TokenKind::CloseParen => "`)`".to_owned(),
            TokenKind::OpenBracket => "`[`".to_owned(),
            TokenKind::CloseBracket => "`]`".to_owned(),
            TokenKind::OpenCurly => "`{`".to_owned(),
            TokenKind::CloseCurly => "`}`".to_owned(),
            TokenKind::Comma => "`,`".to_owned(),
            TokenKind::Bar => "`|`".to_owned(),
            TokenKind::End => "end of clause".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    /// The exact source lexeme.
    pub text: String,
    pub pos: Pos,
    /// Whether layout or a comment separates this token from the previous one.
    pub layout_before: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("{pos}: unterminated quoted item")]
    UnterminatedQuotedAtom { pos: Pos },
    #[error("{pos}: unterminated block comment")]
    UnterminatedBlockComment { pos: Pos },
    #[error("{pos}: invalid escape sequence")]
    InvalidEscape { pos: Pos },
    #[error("{pos}: invalid character {ch:?}")]
    InvalidCharacter { pos: Pos, ch: char },
    #[error("{pos}: malformed number")]
    InvalidNumber { pos: Pos },
}

impl LexError {
    pub fn pos(&self) -> Pos {
        match self {
            LexError::UnterminatedQuotedAtom { pos }
            | LexError::UnterminatedBlockComment { pos }
            | LexError::InvalidEscape { pos }
            | LexError::InvalidCharacter { pos, .. }
            | LexError::InvalidNumber { pos } => *pos,
        }
    }
}

pub const GRAPHIC_CHARS: &str = "#$&*+-./:<=>?@^~\\";

pub fn is_graphic(c: char) -> bool {
    GRAPHIC_CHARS.contains(c)
}

pub fn is_alnum(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Characters that begin a variable.
pub fn is_var_start(c: char) -> bool {
    c == '_' || c.is_uppercase()
}

/// Characters that begin a letter-digit atom.
pub fn is_atom_start(c: char) -> bool {
    c.is_alphabetic() && !c.is_uppercase()
}

fn is_layout(c: char) -> bool {
    c.is_whitespace()
}

/// Splits `source` into tokens, discarding layout and comments.
pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    Lexer::new(source).run()
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: u32,
    column: u32,
}

impl Lexer {
    fn new(source: &str) -> Self {
        Lexer {
            chars: source.chars().collect(),
            idx: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.idx + ahead).copied()
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn bump_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }

    fn run(mut self) -> Result<Vec<Token>, LexError> {
        let mut tokens: Vec<Token> = Vec::new();
        loop {
            let layout_before = self.skip_layout()?;
            if self.peek().is_none() {
                return Ok(tokens);
            }
            let start = self.idx;
            let pos = self.pos();
            let after_name = matches!(
                tokens.last(),
                Some(Token {
                    kind: TokenKind::Name(_) | TokenKind::QuotedName(_),
                    ..
                })
            );
            let kind = self.token(pos, layout_before, after_name)?;
            tokens.push(Token {
                kind,
                text: self.chars[start..self.idx].iter().collect(),
                pos,
                layout_before,
            });
        }
    }

    /// Skips whitespace and comments; reports whether anything was skipped.
    fn skip_layout(&mut self) -> Result<bool, LexError> {
        let mut skipped = false;
        loop {
            match self.peek() {
                Some(c) if is_layout(c) => {
                    self.bump();
                }
                Some('%') => {
                    self.bump_while(|c| c != '\n');
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let pos = self.pos();
                    self.bump();
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('*') if self.peek() == Some('/') => {
                                self.bump();
                                break;
                            }
                            Some(_) => {}
                            None => return Err(LexError::UnterminatedBlockComment { pos }),
                        }
                    }
                }
                _ => return Ok(skipped),
            }
            skipped = true;
        }
    }

    fn token(
        &mut self,
        pos: Pos,
        layout_before: bool,
        after_name: bool,
    ) -> Result<TokenKind, LexError> {
        let c = self.bump().expect("caller checked for input");
        let kind = match c {
            '0'..='9' => return self.number(c, pos),
            '(' if after_name && !layout_before => TokenKind::OpenParenAfterName,
            '(' => TokenKind::OpenParen,
            ')' => TokenKind::CloseParen,
            '[' => TokenKind::OpenBracket,
            ']' => TokenKind::CloseBracket,
            '{' => TokenKind::OpenCurly,
            '}' => TokenKind::CloseCurly,
            ',' => TokenKind::Comma,
            '|' => TokenKind::Bar,
            '!' | ';' => TokenKind::Name(c.to_string()),
            '\'' => TokenKind::QuotedName(self.quoted_atom(pos)?),
            '"' => TokenKind::Codes(self.quoted('"', pos)?.into_iter().collect()),
            '.' if self.peek().is_none_or(|n| is_layout(n) || n == '%') => TokenKind::End,
            c if is_graphic(c) => {
                self.bump_while(is_graphic);
                TokenKind::Name(self.lexeme_from(pos))
            }
            c if is_var_start(c) => {
                self.bump_while(is_alnum);
                TokenKind::Var(self.lexeme_from(pos))
            }
            c if is_atom_start(c) => {
                self.bump_while(is_alnum);
                TokenKind::Name(self.lexeme_from(pos))
            }
            ch => return Err(LexError::InvalidCharacter { pos, ch }),
        };
        Ok(kind)
    }

    /// Text from `pos` (which must be on the current line) to the cursor.
    fn lexeme_from(&self, pos: Pos) -> String {
        let len = (self.column - pos.column) as usize;
        self.chars[self.idx - len..self.idx].iter().collect()
    }

    fn quoted_atom(&mut self, pos: Pos) -> Result<String, LexError> {
        let codes = self.quoted('\'', pos)?;
        codes
            .into_iter()
            .map(|code| match char::from_u32(code) {
                Some(c) if c != '\0' => Ok(c),
                _ => Err(LexError::InvalidEscape { pos }),
            })
            .collect()
    }

    /// Body of a quoted item after its opening quote, as code points.
    fn quoted(&mut self, quote: char, pos: Pos) -> Result<Vec<u32>, LexError> {
        let mut out = Vec::new();
        loop {
            let Some(c) = self.bump() else {
                return Err(LexError::UnterminatedQuotedAtom { pos });
            };
            if c == quote {
                if self.peek() == Some(quote) {
                    self.bump();
                    out.push(quote as u32);
                    continue;
                }
                return Ok(out);
            }
            if c == '\\' {
                if self.peek() == Some('\n') {
                    // continuation line
                    self.bump();
                    continue;
                }
                out.push(self.escape()?);
            } else {
                out.push(c as u32);
            }
        }
    }

    /// Escape sequence after the backslash.
    fn escape(&mut self) -> Result<u32, LexError> {
        let pos = self.pos();
        let bad = LexError::InvalidEscape { pos };
        let c = self.bump().ok_or(bad.clone())?;
        let code = match c {
            'n' => 10,
            't' => 9,
            'r' => 13,
            'a' => 7,
            'b' => 8,
            'f' => 12,
            'v' => 11,
            'e' => 27,
            's' => 32,
            '0'..='7' => {
                let mut digits = c.to_string();
                while let Some(d @ '0'..='7') = self.peek() {
                    digits.push(d);
                    self.bump();
                }
                self.closing_backslash();
                u32::from_str_radix(&digits, 8).map_err(|_| bad.clone())?
            }
            'x' => {
                let mut digits = String::new();
                while let Some(d) = self.peek().filter(char::is_ascii_hexdigit) {
                    digits.push(d);
                    self.bump();
                }
                self.closing_backslash();
                u32::from_str_radix(&digits, 16).map_err(|_| bad.clone())?
            }
            '\\' | '\'' | '"' | '`' => c as u32,
            _ => return Err(bad),
        };
        if char::from_u32(code).is_none() {
            return Err(bad);
        }
        Ok(code)
    }

    fn closing_backslash(&mut self) {
        if self.peek() == Some('\\') {
            self.bump();
        }
    }

    fn number(&mut self, first: char, pos: Pos) -> Result<TokenKind, LexError> {
        if first == '0' {
            match self.peek() {
                Some('\'') => return self.char_code(pos),
                Some(r @ ('x' | 'o' | 'b')) => {
                    let radix = match r {
                        'x' => 16,
                        'o' => 8,
                        _ => 2,
                    };
                    if self.peek_at(1).is_some_and(|d| d.is_digit(radix)) {
                        self.bump();
                        let start = self.idx;
                        self.bump_while(|d| d.is_digit(radix));
                        let digits: String = self.chars[start..self.idx].iter().collect();
                        return parse_radix(&digits, radix)
                            .map(TokenKind::Int)
                            .ok_or(LexError::InvalidNumber { pos });
                    }
                }
                _ => {}
            }
        }
        self.bump_while(|d| d.is_ascii_digit());
        let mut is_float = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
            is_float = true;
            self.bump();
            self.bump_while(|d| d.is_ascii_digit());
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let signed = matches!(self.peek_at(1), Some('+' | '-'));
            let digit_at = if signed { 2 } else { 1 };
            if self.peek_at(digit_at).is_some_and(|d| d.is_ascii_digit()) {
                is_float = true;
                for _ in 0..digit_at {
                    self.bump();
                }
                self.bump_while(|d| d.is_ascii_digit());
            }
        }
        let text = self.lexeme_from(pos);
        if is_float {
            match text.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(TokenKind::Float(x)),
                _ => Err(LexError::InvalidNumber { pos }),
            }
        } else {
            parse_radix(&text, 10)
                .map(TokenKind::Int)
                .ok_or(LexError::InvalidNumber { pos })
        }
    }

    /// `0'c` character code literal; the cursor is on the quote.
    fn char_code(&mut self, pos: Pos) -> Result<TokenKind, LexError> {
        self.bump();
        let code = match self.bump() {
            Some('\\') => self.escape()?,
            Some('\'') => {
                if self.peek() == Some('\'') {
                    self.bump();
                }
                '\'' as u32
            }
            Some(c) => c as u32,
            None => return Err(LexError::InvalidNumber { pos }),
        };
        Ok(TokenKind::Int(BigInt::from(code)))
    }
}

fn parse_radix(digits: &str, radix: u32) -> Option<BigInt> {
    BigInt::parse_bytes(digits.as_bytes(), radix)
}
