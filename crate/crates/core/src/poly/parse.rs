//! Plain-text polynomial grammar.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*'|'/')? power)*       juxtaposition multiplies: 2x, x y
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | letter | '(' expr ')' | '-' power
//! ```
//!
//! Variables are single letters, so `xy` reads as `x*y`. Integer literals
//! are reduced into the prime field.

use super::{Poly1, Poly2, PolyError, RationalFunction};
use crate::gf::Field;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Var(char),
    Op(char),
}

#[derive(Debug, Clone)]
enum Expr {
    Int(i64),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            let n = text.parse::<i64>().map_err(|_| PolyError::Parse {
                pos: start,
                msg: format!("integer literal {text} out of range"),
            })?;
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() {
            out.push((i, Tok::Var(c)));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |t| t.0)
    }

    fn err(&self, msg: impl Into<String>) -> PolyError {
        PolyError::Parse {
            pos: self.pos(),
            msg: msg.into(),
        }
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, PolyError> {
        let mut e = if self.eat('-') {
            Expr::Neg(Box::new(self.term()?))
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, PolyError> {
        let mut e = self.power()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.power()?));
            } else if matches!(self.peek(), Some(Tok::Int(_) | Tok::Var(_) | Tok::Op('('))) {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek() {
                Some(&Tok::Int(n)) => {
                    self.at += 1;
                    Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Var(v)) => {
                self.at += 1;
                Ok(Expr::Var(v))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            Some(t) => Err(self.err(format!("unexpected token {t:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn parse_expr(s: &str) -> Result<Expr, PolyError> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        at: 0,
        len: s.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

fn eval_rational(e: &Expr, f: &Field, var: char) -> Result<RationalFunction, PolyError> {
    Ok(match e {
        Expr::Int(n) => RationalFunction::constant(f, f.reduce_int(*n)),
        Expr::Var(v) if *v == var => RationalFunction::x(f),
        Expr::Var(v) => return Err(PolyError::UnknownVariable(v.to_string())),
        Expr::Neg(a) => -&eval_rational(a, f, var)?,
        Expr::Add(a, b) => &eval_rational(a, f, var)? + &eval_rational(b, f, var)?,
        Expr::Sub(a, b) => &eval_rational(a, f, var)? - &eval_rational(b, f, var)?,
        Expr::Mul(a, b) => &eval_rational(a, f, var)? * &eval_rational(b, f, var)?,
        Expr::Div(a, b) => {
            let d = eval_rational(b, f, var)?;
            if d.is_zero() {
                return Err(PolyError::DivisionByZero);
            }
            &eval_rational(a, f, var)? / &d
        }
        Expr::Pow(a, n) => eval_rational(a, f, var)?.pow(*n)?,
    })
}

fn eval_poly2(e: &Expr, f: &Field, vars: [&str; 2]) -> Result<Poly2, PolyError> {
    Ok(match e {
        Expr::Int(n) => Poly2::constant(f, vars, f.reduce_int(*n)),
        Expr::Var(v) => {
            let (gx, gy) = Poly2::gens(f, vars);
            if vars[0] == v.to_string() {
                gx
            } else if vars[1] == v.to_string() {
                gy
            } else {
                return Err(PolyError::UnknownVariable(v.to_string()));
            }
        }
        Expr::Neg(a) => -&eval_poly2(a, f, vars)?,
        Expr::Add(a, b) => &eval_poly2(a, f, vars)? + &eval_poly2(b, f, vars)?,
        Expr::Sub(a, b) => &eval_poly2(a, f, vars)? - &eval_poly2(b, f, vars)?,
        Expr::Mul(a, b) => &eval_poly2(a, f, vars)? * &eval_poly2(b, f, vars)?,
        Expr::Div(a, b) => {
            let d = eval_poly2(b, f, vars)?;
            if d.is_zero() {
                return Err(PolyError::DivisionByZero);
            }
            if d.total_degree() != Some(0) {
                return Err(PolyError::NonConstantDivisor);
            }
            let inv = f.inv_raw(d.coeff((0, 0))).unwrap();
            eval_poly2(a, f, vars)?.scale(inv)
        }
        Expr::Pow(a, n) => {
            if *n < 0 {
                return Err(PolyError::NonConstantDivisor);
            }
            eval_poly2(a, f, vars)?.pow(*n as u64)
        }
    })
}

/// Parses a univariate rational function in the variable `var`.
pub fn parse_rational(s: &str, field: &Field, var: char) -> Result<RationalFunction, PolyError> {
    eval_rational(&parse_expr(s)?, field, var)
}

/// Parses a univariate polynomial in the variable `var`.
pub fn parse_poly1(s: &str, field: &Field, var: char) -> Result<Poly1, PolyError> {
    let r = parse_rational(s, field, var)?;
    if !r.is_polynomial() {
        return Err(PolyError::NonConstantDivisor);
    }
    Ok(r.numerator().clone())
}

/// Parses a bivariate polynomial; division is allowed only by constants.
pub fn parse_poly2(s: &str, field: &Field, vars: [&str; 2]) -> Result<Poly2, PolyError> {
    eval_poly2(&parse_expr(s)?, field, vars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn implicit_multiplication_and_division() {
        let f = make_field(5, 1).unwrap();
        let r = parse_rational("2x + 1/x", &f, 'x').unwrap();
        let expect = RationalFunction::new(
            Poly1::from_ints(&f, &[1, 0, 2]),
            Poly1::from_ints(&f, &[0, 1]),
        )
        .unwrap();
        assert_eq!(r, expect);
        assert_eq!(parse_rational("x^-1", &f, 'x').unwrap(), RationalFunction::x(&f).pow(-1).unwrap());
    }

    #[test]
    fn render_round_trip() {
        let f = make_field(7, 1).unwrap();
        let v = ["x", "y"];
        let p = parse_poly2("(x^7 - x)(y^7 - y) - 3", &f, v).unwrap();
        assert_eq!(parse_poly2(&p.render(), &f, v).unwrap(), p);
        let q = parse_poly2("-x y^2 + 3/2", &f, v).unwrap();
        assert_eq!(q.coeff((0, 0)), 5);
        assert_eq!(q.coeff((1, 2)), 6);
    }

    #[test]
    fn errors() {
        let f = make_field(3, 1).unwrap();
        assert!(matches!(parse_rational("x +", &f, 'x'), Err(PolyError::Parse { .. })));
        assert!(matches!(parse_rational("x # 2", &f, 'x'), Err(PolyError::Parse { pos: 2, .. })));
        assert!(matches!(parse_rational("1/(x-x)", &f, 'x'), Err(PolyError::DivisionByZero)));
        assert!(matches!(parse_rational("z", &f, 'x'), Err(PolyError::UnknownVariable(_))));
        assert!(matches!(parse_poly2("1/x", &f, ["x", "y"]), Err(PolyError::NonConstantDivisor)));
        assert!(matches!(parse_rational("3", &f, 'x').map(|r| r.is_zero()), Ok(true)));
    }
}
