use super::ast::{Generator, OperatorExpr};
use super::layout::SubsystemLayout;
use crate::error::{Error, Result};

/// Parse an operator expression, checking every generator reference
/// against the layout (index range, Pauli aliases only on qubits) as it
/// is read, so reference errors carry source positions too.
pub fn parse_operator_expr(text: &str, layout: &SubsystemLayout) -> Result<OperatorExpr> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        layout,
    };
    let expr = parser.expr()?;
    let end = parser.peek();
    if end.kind != TokenKind::Eof {
        return Err(syntax(
            end.line,
            end.col,
            format!("unexpected {}", end.kind.describe()),
        ));
    }
    Ok(expr)
}

fn syntax(line: usize, col: usize, message: String) -> Error {
    Error::Syntax { line, col, message }
}

#[derive(Clone, Debug, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(x) => format!("number {x}"),
            TokenKind::Ident(s) => format!("identifier '{s}'"),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1usize;
    let mut col = 1usize;

    while i < chars.len() {
        let ch = chars[i];
        let (tline, tcol) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };

        if ch.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }

        let simple = match ch {
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '^' => Some(TokenKind::Caret),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            _ => None,
        };
        if let Some(kind) = simple {
            tokens.push(Token {
                kind,
                line: tline,
                col: tcol,
            });
            advance(&mut i, &mut line, &mut col);
            continue;
        }

        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            if i < chars.len() && chars[i] == '.' {
                advance(&mut i, &mut line, &mut col);
                if i >= chars.len() || !chars[i].is_ascii_digit() {
                    return Err(syntax(
                        line,
                        col,
                        "expected digits after decimal point".into(),
                    ));
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                advance(&mut i, &mut line, &mut col);
                if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                    advance(&mut i, &mut line, &mut col);
                }
                if i >= chars.len() || !chars[i].is_ascii_digit() {
                    return Err(syntax(line, col, "expected digits in exponent".into()));
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut line, &mut col);
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| syntax(tline, tcol, format!("invalid number '{text}'")))?;
            tokens.push(Token {
                kind: TokenKind::Number(value),
                line: tline,
                col: tcol,
            });
            continue;
        }

        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                advance(&mut i, &mut line, &mut col);
            }
            let word: String = chars[start..i].iter().collect();
            tokens.push(Token {
                kind: TokenKind::Ident(word),
                line: tline,
                col: tcol,
            });
            continue;
        }

        return Err(syntax(tline, tcol, format!("unexpected character '{ch}'")));
    }

    tokens.push(Token {
        kind: TokenKind::Eof,
        line,
        col,
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    layout: &'a SubsystemLayout,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token> {
        let t = self.bump();
        if t.kind == kind {
            Ok(t)
        } else {
            Err(syntax(
                t.line,
                t.col,
                format!("expected {what}, found {}", t.kind.describe()),
            ))
        }
    }

    // expr := term (("+" | "-") term)*
    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = OperatorExpr::Add(Box::new(lhs), Box::new(rhs));
                }
                TokenKind::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = OperatorExpr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := factor ("*" factor)*
    fn term(&mut self) -> Result<OperatorExpr> {
        let mut lhs = self.factor()?;
        while self.peek().kind == TokenKind::Star {
            self.bump();
            let rhs = self.factor()?;
            lhs = OperatorExpr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // factor := atom ("^" uint)?
    fn factor(&mut self) -> Result<OperatorExpr> {
        let base = self.atom()?;
        if self.peek().kind == TokenKind::Caret {
            self.bump();
            let t = self.bump();
            let n = match t.kind {
                TokenKind::Number(x) if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 => {
                    x as u32
                }
                _ => {
                    return Err(syntax(
                        t.line,
                        t.col,
                        "exponent must be a nonnegative integer".into(),
                    ))
                }
            };
            return Ok(OperatorExpr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    // atom := number | "i" | "Id" | gen "(" uint ")" | "(" expr ")" | "-" atom
    fn atom(&mut self) -> Result<OperatorExpr> {
        let t = self.bump();
        match t.kind {
            TokenKind::Number(x) => Ok(OperatorExpr::Literal(x)),
            TokenKind::Minus => Ok(OperatorExpr::Neg(Box::new(self.atom()?))),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            TokenKind::Ident(word) => match word.as_str() {
                "i" => Ok(OperatorExpr::ImaginaryUnit),
                "Id" => Ok(OperatorExpr::Identity),
                name => {
                    let gen = match name {
                        "Sx" => Generator::Sx,
                        "Sy" => Generator::Sy,
                        "Sz" => Generator::Sz,
                        "Sp" => Generator::Sp,
                        "Sm" => Generator::Sm,
                        "X" => Generator::X,
                        "Y" => Generator::Y,
                        "Z" => Generator::Z,
                        _ => {
                            return Err(syntax(
                                t.line,
                                t.col,
                                format!("unknown identifier '{name}'"),
                            ))
                        }
                    };
                    self.expect(TokenKind::LParen, "'(' after generator name")?;
                    let idx_tok = self.bump();
                    let k = match idx_tok.kind {
                        TokenKind::Number(x)
                            if x >= 1.0 && x.fract() == 0.0 && x <= usize::MAX as f64 =>
                        {
                            x as usize
                        }
                        _ => {
                            return Err(syntax(
                                idx_tok.line,
                                idx_tok.col,
                                "subsystem index must be a positive integer".into(),
                            ))
                        }
                    };
                    self.expect(TokenKind::RParen, "')'")?;
                    if k == 0 || k > self.layout.len() {
                        return Err(syntax(
                            idx_tok.line,
                            idx_tok.col,
                            format!("subsystem index {k} out of range 1..={}", self.layout.len()),
                        ));
                    }
                    if gen.is_pauli_alias() && self.layout.subsystem_dim(k) != 2 {
                        return Err(syntax(
                            idx_tok.line,
                            idx_tok.col,
                            format!(
                                "Pauli alias {}({k}) needs a spin-1/2 subsystem, but subsystem {k} has dimension {}",
                                gen.name(),
                                self.layout.subsystem_dim(k)
                            ),
                        ));
                    }
                    Ok(OperatorExpr::Generator(gen, k))
                }
            },
            other => Err(syntax(
                t.line,
                t.col,
                format!("expected an operand, found {}", other.describe()),
            )),
        }
    }
}
