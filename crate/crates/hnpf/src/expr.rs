//! A small math-expression evaluator for user-defined problems.
//!
//! Problem configuration files describe objectives and constraints as plain
//! infix strings like `1 + x2^2 - x1 - 0.1*sin(3*pi*x1)`. This module parses
//! such a string once into an AST and evaluates it repeatedly against
//! coordinate vectors. Supported syntax:
//!
//! * numbers (`1`, `0.5`, `2e-3`), constants `pi` and `e`
//! * variables `x1` .. `xn` (1-based, validated against the declared dimension)
//! * `+ - * /`, unary minus, `^` (right-associative power)
//! * functions `sin cos tan exp ln log sqrt abs atan` and the two-argument
//!   `atan2 min max pow`
//!
//! There is deliberately no symbolic differentiation: configured problems
//! either supply gradient expressions or fall back to finite differences.

use crate::error::{Error, Result};

/// A parsed, reusable expression over variables `x1..xn`.
#[derive(Debug, Clone)]
pub struct Expr {
    root: Node,
    source: String,
}

#[derive(Debug, Clone)]
enum Node {
    Num(f64),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Call1(Func1, Box<Node>),
    Call2(Func2, Box<Node>, Box<Node>),
}

#[derive(Debug, Clone, Copy)]
enum Func1 {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
    Atan,
}

#[derive(Debug, Clone, Copy)]
enum Func2 {
    Atan2,
    Min,
    Max,
    Pow,
}

impl Expr {
    /// Parse `source` as an expression over `n_vars` variables.
    pub fn parse(source: &str, n_vars: usize) -> Result<Expr> {
        let tokens = tokenize(source)?;
        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            n_vars,
            source,
        };
        let root = p.expression()?;
        if p.pos != p.tokens.len() {
            return Err(p.error_at(p.tokens[p.pos].1, "unexpected trailing input"));
        }
        Ok(Expr {
            root,
            source: source.to_string(),
        })
    }

    /// Evaluate against a coordinate vector (`x[0]` is `x1`).
    pub fn eval(&self, x: &[f64]) -> f64 {
        eval_node(&self.root, x)
    }

    /// The original source text.
    pub fn source(&self) -> &str {
        &self.source
    }
}

fn eval_node(node: &Node, x: &[f64]) -> f64 {
    match node {
        Node::Num(v) => *v,
        Node::Var(i) => x[*i],
        Node::Add(a, b) => eval_node(a, x) + eval_node(b, x),
        Node::Sub(a, b) => eval_node(a, x) - eval_node(b, x),
        Node::Mul(a, b) => eval_node(a, x) * eval_node(b, x),
        Node::Div(a, b) => eval_node(a, x) / eval_node(b, x),
        Node::Pow(a, b) => eval_node(a, x).powf(eval_node(b, x)),
        Node::Neg(a) => -eval_node(a, x),
        Node::Call1(f, a) => {
            let v = eval_node(a, x);
            match f {
                Func1::Sin => v.sin(),
                Func1::Cos => v.cos(),
                Func1::Tan => v.tan(),
                Func1::Exp => v.exp(),
                Func1::Ln => v.ln(),
                Func1::Sqrt => v.sqrt(),
                Func1::Abs => v.abs(),
                Func1::Atan => v.atan(),
            }
        }
        Node::Call2(f, a, b) => {
            let u = eval_node(a, x);
            let v = eval_node(b, x);
            match f {
                Func2::Atan2 => u.atan2(v),
                Func2::Min => u.min(v),
                Func2::Max => u.max(v),
                Func2::Pow => u.powf(v),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            ',' => {
                out.push((Token::Comma, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_digit() || d == '.' {
                        i += 1;
                    } else if (d == 'e' || d == 'E') && i + 1 < bytes.len() && {
                        let n = bytes[i + 1] as char;
                        n.is_ascii_digit() || n == '+' || n == '-'
                    } {
                        i += 2; // exponent marker plus sign or first digit
                    } else {
                        break;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| {
                    Error::Config(format!(
                        "bad number `{text}` at position {start} in `{src}`"
                    ))
                })?;
                out.push((Token::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() {
                    let d = bytes[i] as char;
                    if d.is_ascii_alphanumeric() || d == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push((Token::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Config(format!(
                    "unexpected character `{c}` at position {i} in `{src}`"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    n_vars: usize,
    source: &'a str,
}

impl<'a> Parser<'a> {
    fn error_at(&self, byte: usize, msg: &str) -> Error {
        Error::Config(format!("{msg} at position {byte} in `{}`", self.source))
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<&'a (Token, usize)> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<()> {
        match self.bump() {
            Some((t, _)) if *t == want => Ok(()),
            Some((_, at)) => Err(self.error_at(*at, what)),
            None => Err(self.error_at(self.source.len(), what)),
        }
    }

    fn expression(&mut self) -> Result<Node> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    node = Node::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    node = Node::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut node = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    node = Node::Mul(Box::new(node), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    node = Node::Div(Box::new(node), Box::new(self.unary()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if let Some(Token::Minus) = self.peek() {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.bump();
            // Right-associative; the exponent may itself carry a unary minus.
            let exp = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let (token, at) = match self.bump() {
            Some(t) => (t.0.clone(), t.1),
            None => return Err(self.error_at(self.source.len(), "unexpected end of expression")),
        };
        match token {
            Token::Num(v) => Ok(Node::Num(v)),
            Token::LParen => {
                let inner = self.expression()?;
                self.expect(Token::RParen, "expected `)`")?;
                Ok(inner)
            }
            Token::Ident(name) => self.ident(&name, at),
            _ => Err(self.error_at(at, "expected a number, variable, function or `(`")),
        }
    }

    fn ident(&mut self, name: &str, at: usize) -> Result<Node> {
        // Constants.
        match name {
            "pi" => return Ok(Node::Num(std::f64::consts::PI)),
            "e" => return Ok(Node::Num(std::f64::consts::E)),
            _ => {}
        }
        // Variables `x<index>`.
        if let Some(rest) = name.strip_prefix('x') {
            if let Ok(index) = rest.parse::<usize>() {
                if index == 0 || index > self.n_vars {
                    return Err(self.error_at(
                        at,
                        &format!("variable `{name}` out of range 1..={}", self.n_vars),
                    ));
                }
                return Ok(Node::Var(index - 1));
            }
        }
        // Function call.
        let one = |f| Some((Some(f), None));
        let two = |f| Some((None, Some(f)));
        let func: Option<(Option<Func1>, Option<Func2>)> = match name {
            "sin" => one(Func1::Sin),
            "cos" => one(Func1::Cos),
            "tan" => one(Func1::Tan),
            "exp" => one(Func1::Exp),
            "ln" | "log" => one(Func1::Ln),
            "sqrt" => one(Func1::Sqrt),
            "abs" => one(Func1::Abs),
            "atan" => one(Func1::Atan),
            "atan2" => two(Func2::Atan2),
            "min" => two(Func2::Min),
            "max" => two(Func2::Max),
            "pow" => two(Func2::Pow),
            _ => None,
        };
        let Some((f1, f2)) = func else {
            return Err(self.error_at(at, &format!("unknown identifier `{name}`")));
        };
        self.expect(Token::LParen, "expected `(` after function name")?;
        let first = self.expression()?;
        if let Some(f) = f1 {
            self.expect(Token::RParen, "expected `)`")?;
            return Ok(Node::Call1(f, Box::new(first)));
        }
        self.expect(Token::Comma, "expected `,` between arguments")?;
        let second = self.expression()?;
        self.expect(Token::RParen, "expected `)`")?;
        Ok(Node::Call2(f2.unwrap(), Box::new(first), Box::new(second)))
    }
}
