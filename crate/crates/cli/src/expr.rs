//! Manifold expressions: `S(k)`, `T(k)`, `RP(m)`, `CP(k)`, products `x` and
//! connected sums `#`.
//!
//! ```text
//! expr = csum ;
//! csum = prod { "#" prod } ;
//! prod = atom { "x" atom } ;
//! atom = "S(" nat ")" | "T(" nat ")" | "RP(" nat ")" | "CP(" nat ")" | "(" expr ")" ;
//! ```
//!
//! `x` binds tighter than `#`; both associate to the left. `×` is accepted
//! for `x`. Whitespace is insignificant.

use std::fmt;

use sgm_core::BuilderRecipe;
use thiserror::Error;

/// Byte range into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn join(self, other: Span) -> Span {
        Span { start: self.start.min(other.start), end: self.end.max(other.end) }
    }
}

#[derive(Clone, Debug)]
pub enum ExprKind {
    Sphere(u32),
    Torus(u32),
    RealProjective(u32),
    ComplexProjective(u32),
    Product(Box<Expr>, Box<Expr>),
    ConnectedSum(Box<Expr>, Box<Expr>),
}

/// Syntax tree with spans. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use ExprKind::*;
        match (&self.kind, &other.kind) {
            (Sphere(a), Sphere(b))
            | (Torus(a), Torus(b))
            | (RealProjective(a), RealProjective(b))
            | (ComplexProjective(a), ComplexProjective(b)) => a == b,
            (Product(a, b), Product(c, d)) | (ConnectedSum(a, b), ConnectedSum(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn dimension(&self) -> u32 {
        match &self.kind {
            ExprKind::Sphere(k) | ExprKind::Torus(k) | ExprKind::RealProjective(k) => *k,
            ExprKind::ComplexProjective(k) => 2 * k,
            ExprKind::Product(a, b) => a.dimension() + b.dimension(),
            ExprKind::ConnectedSum(a, _) => a.dimension(),
        }
    }

    pub fn to_recipe(&self) -> BuilderRecipe {
        match &self.kind {
            ExprKind::Sphere(k) => BuilderRecipe::Sphere(*k),
            ExprKind::Torus(k) => BuilderRecipe::Torus(*k),
            ExprKind::RealProjective(k) => BuilderRecipe::RealProjective(*k),
            ExprKind::ComplexProjective(k) => BuilderRecipe::ComplexProjective(*k),
            ExprKind::Product(a, b) => BuilderRecipe::product(a.to_recipe(), b.to_recipe()),
            ExprKind::ConnectedSum(a, b) => BuilderRecipe::connected_sum(a.to_recipe(), b.to_recipe()),
        }
    }

    /// The expression for a recipe, with empty spans.
    pub fn from_recipe(recipe: &BuilderRecipe) -> Expr {
        let kind = match recipe {
            BuilderRecipe::Sphere(k) => ExprKind::Sphere(*k),
            BuilderRecipe::Torus(k) => ExprKind::Torus(*k),
            BuilderRecipe::RealProjective(k) => ExprKind::RealProjective(*k),
            BuilderRecipe::ComplexProjective(k) => ExprKind::ComplexProjective(*k),
            BuilderRecipe::Product(a, b) => {
                ExprKind::Product(Box::new(Expr::from_recipe(a)), Box::new(Expr::from_recipe(b)))
            }
            BuilderRecipe::ConnectedSum(a, b) => {
                ExprKind::ConnectedSum(Box::new(Expr::from_recipe(a)), Box::new(Expr::from_recipe(b)))
            }
        };
        Expr { kind, span: Span::default() }
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_recipe().fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {}..{}: {message}", span.start, span.end)]
    Syntax { message: String, span: Span },
    #[error("semantic error at {}..{}: {message}", span.start, span.end)]
    Semantic { message: String, span: Span },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. } | ParseError::Semantic { span, .. } => *span,
        }
    }

    /// The source line with a caret under the offending range.
    pub fn render(&self, text: &str) -> String {
        let span = self.span();
        let start = text[..span.start.min(text.len())].chars().count();
        let width = text[span.start.min(text.len())..span.end.min(text.len())].chars().count().max(1);
        format!("{self}\n  {text}\n  {}{}", " ".repeat(start), "^".repeat(width))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Token {
    Atom(AtomKind),
    Nat(u64),
    LParen,
    RParen,
    Times,
    Hash,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AtomKind {
    S,
    T,
    RP,
    CP,
}

fn syntax(message: impl Into<String>, span: Span) -> ParseError {
    ParseError::Syntax { message: message.into(), span }
}

fn lex(text: &str) -> Result<Vec<(Token, Span)>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        let single = |t| (t, Span { start, end: start + c.len_utf8() });
        match c {
            c if c.is_whitespace() => {}
            '(' => tokens.push(single(Token::LParen)),
            ')' => tokens.push(single(Token::RParen)),
            '#' => tokens.push(single(Token::Hash)),
            'x' | '×' => tokens.push(single(Token::Times)),
            '0'..='9' => {
                let mut end = start + 1;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = i + 1;
                    chars.next();
                }
                let span = Span { start, end };
                let n = text[start..end]
                    .parse::<u64>()
                    .map_err(|_| ParseError::Semantic { message: "number too large".into(), span })?;
                tokens.push((Token::Nat(n), span));
            }
            'A'..='Z' => {
                let mut end = start + 1;
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_uppercase() {
                        break;
                    }
                    end = i + 1;
                    chars.next();
                }
                let span = Span { start, end };
                let kind = match &text[start..end] {
                    "S" => AtomKind::S,
                    "T" => AtomKind::T,
                    "RP" => AtomKind::RP,
                    "CP" => AtomKind::CP,
                    other => return Err(syntax(format!("unknown manifold `{other}`"), span)),
                };
                tokens.push((Token::Atom(kind), span));
            }
            other => return Err(syntax(format!("unexpected character `{other}`"), Span { start, end: start + c.len_utf8() })),
        }
    }
    tokens.push((Token::End, Span { start: text.len(), end: text.len() }));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> (Token, Span) {
        self.tokens[self.pos]
    }

    fn bump(&mut self) -> (Token, Span) {
        let t = self.peek();
        if t.0 != Token::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<Span, ParseError> {
        let (t, span) = self.bump();
        if t == want {
            Ok(span)
        } else {
            Err(syntax(format!("expected {what}"), span))
        }
    }

    fn csum(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.prod()?;
        while self.peek().0 == Token::Hash {
            self.bump();
            let right = self.prod()?;
            let (a, b) = (left.dimension(), right.dimension());
            if a != b {
                return Err(ParseError::Semantic {
                    message: format!("connected sum of different dimensions: {a} ≠ {b}"),
                    span: left.span.join(right.span),
                });
            }
            let span = left.span.join(right.span);
            left = Expr { kind: ExprKind::ConnectedSum(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn prod(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.atom()?;
        while self.peek().0 == Token::Times {
            self.bump();
            let right = self.atom()?;
            let span = left.span.join(right.span);
            left = Expr { kind: ExprKind::Product(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (t, start) = self.bump();
        match t {
            Token::LParen => {
                let mut inner = self.csum()?;
                let end = self.expect(Token::RParen, "`)`")?;
                inner.span = start.join(end);
                Ok(inner)
            }
            Token::Atom(kind) => {
                self.expect(Token::LParen, "`(` after manifold name")?;
                let (n, nspan) = match self.bump() {
                    (Token::Nat(n), span) => (n, span),
                    (_, span) => return Err(syntax("expected a natural number", span)),
                };
                let end = self.expect(Token::RParen, "`)`")?;
                let n = u32::try_from(n)
                    .ok()
                    .filter(|&n| n >= 1 && (kind != AtomKind::CP || n <= u32::MAX / 2))
                    .ok_or_else(|| ParseError::Semantic {
                        message: format!("parameter {n} out of range (must be at least 1)"),
                        span: nspan,
                    })?;
                let kind = match kind {
                    AtomKind::S => ExprKind::Sphere(n),
                    AtomKind::T => ExprKind::Torus(n),
                    AtomKind::RP => ExprKind::RealProjective(n),
                    AtomKind::CP => ExprKind::ComplexProjective(n),
                };
                Ok(Expr { kind, span: start.join(end) })
            }
            Token::End => Err(syntax("unexpected end of input", start)),
            _ => Err(syntax("expected a manifold or `(`", start)),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { tokens: lex(text)?, pos: 0 };
    let expr = parser.csum()?;
    match parser.peek() {
        (Token::End, _) => Ok(expr),
        (_, span) => Err(syntax("unexpected trailing input", span)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Expr {
        parse_expression(text).unwrap()
    }

    #[test]
    fn product_is_left_associative() {
        let e = p("S(2) x S(2) x S(2)");
        let ExprKind::Product(left, right) = &e.kind else { panic!() };
        assert!(matches!(left.kind, ExprKind::Product(..)));
        assert_eq!(**right, p("S(2)"));
        assert_eq!(e.dimension(), 6);
    }

    #[test]
    fn product_binds_tighter_than_sum() {
        let e = p("S(2)xS(4) # S(2)xS(4) # S(2)xS(4)");
        let ExprKind::ConnectedSum(left, right) = &e.kind else { panic!() };
        assert!(matches!(left.kind, ExprKind::ConnectedSum(..)));
        assert_eq!(**right, p("S(2) x S(4)"));
    }

    #[test]
    fn unicode_times_and_parentheses() {
        assert_eq!(p("S(1)×(S(1)×S(1))"), p("S(1) x (S(1) x S(1))"));
        assert_ne!(p("S(1)×(S(1)×S(1))"), p("S(1) x S(1) x S(1)"));
        assert_eq!(p("((RP(3)))"), p("RP(3)"));
    }

    #[test]
    fn spans_cover_source() {
        let e = p("  CP(2) # S(4)");
        assert_eq!(e.span, Span { start: 2, end: 14 });
    }

    #[test]
    fn dimension_mismatch_is_semantic() {
        let err = parse_expression("S(1) # S(2)").unwrap_err();
        assert!(matches!(err, ParseError::Semantic { .. }));
        assert!(err.to_string().contains("1 ≠ 2"));
    }

    #[test]
    fn zero_parameter_is_semantic() {
        assert!(matches!(parse_expression("T(0)"), Err(ParseError::Semantic { .. })));
        assert!(matches!(parse_expression("S(99999999999)"), Err(ParseError::Semantic { .. })));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "S(2", "S 2", "Q(2)", "S(2) x", "S(2) S(2)", "S(2) + S(2)", "(S(2)", "S()"] {
            assert!(matches!(parse_expression(bad), Err(ParseError::Syntax { .. })), "{bad:?}");
        }
    }

    #[test]
    fn printing_round_trips() {
        for text in ["S(2) x (S(2) x S(2))", "(S(2) # T(2)) x RP(3)", "CP(2) # CP(2) # S(2) x S(2)"] {
            let e = p(text);
            assert_eq!(e.to_string(), text);
            assert_eq!(p(&e.to_string()), e);
        }
    }

    #[test]
    fn caret_points_at_span() {
        let err = parse_expression("S(2) # S(3)").unwrap_err();
        assert!(err.render("S(2) # S(3)").ends_with("^^^^^^^^^^^"));
    }
}
