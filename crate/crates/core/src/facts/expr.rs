//! Payload grammar:
//!
//! ```text
//! relation := expr '=' expr
//!           | expr '|' expr
//!           | expr '=' INT 'mod' INT
//!           | 'prime' '(' expr ')'
//!           | 'h' '{' power (',' power)* '}' '>' '1'
//!           | power ('->' power)+
//! expr     := term ('+' term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' INT)?
//! atom     := INT | 'sigma' '(' expr ')' | '(' expr ')'
//! power    := INT ('^' INT)?
//! ```

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factorize, Natural};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(Natural),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sigma(Box<Expr>),
}

impl Expr {
    pub fn eval(&self) -> Natural {
        match self {
            Expr::Int(n) => n.clone(),
            Expr::Add(a, b) => a.eval() + b.eval(),
            Expr::Mul(a, b) => a.eval() * b.eval(),
            Expr::Pow(a, e) => num_traits::pow(a.eval(), *e as usize),
            Expr::Sigma(a) => {
                let v = a.eval();
                if v.is_zero() {
                    Natural::zero()
                } else {
                    factorize(&v).expect("positive").sigma()
                }
            }
        }
    }

    /// Flattens a product of `INT` and `INT^INT` atoms into `(base, exponent)`
    /// pairs, or `None` if the expression has any other shape.
    pub fn as_power_product(&self) -> Option<Vec<(Natural, u32)>> {
        match self {
            Expr::Int(n) => Some(vec![(n.clone(), 1)]),
            Expr::Pow(base, e) => match base.as_ref() {
                Expr::Int(n) => Some(vec![(n.clone(), *e)]),
                _ => None,
            },
            Expr::Mul(a, b) => {
                let mut out = a.as_power_product()?;
                out.extend(b.as_power_product()?);
                Some(out)
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Equals(Expr, Expr),
    Divides(Expr, Expr),
    Congruent { value: Expr, residue: Natural, modulus: Natural },
    Prime(Expr),
    HExceedsOne(Vec<(Natural, u32)>),
    ArcChain(Vec<(Natural, u32)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Int(Natural),
    Word(String),
    Sym(&'static str),
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Token::Int(digits.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            out.push(Token::Word(chars[start..i].iter().collect()));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token::Sym("->"));
            i += 2;
        } else {
            let sym = match c {
                '+' => "+",
                '*' => "*",
                '^' => "^",
                '(' => "(",
                ')' => ")",
                '{' => "{",
                '}' => "}",
                ',' => ",",
                '=' => "=",
                '|' => "|",
                '>' => ">",
                other => return Err(format!("unexpected character '{other}'")),
            };
            out.push(Token::Sym(sym));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token::Sym(t)) if *t == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Token::Word(t)) if t == w)
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), String> {
        if self.at_sym(s) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected '{s}' at token {}", self.pos))
        }
    }

    fn int(&mut self) -> Result<Natural, String> {
        match self.peek() {
            Some(Token::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(format!("expected an integer at token {}", self.pos)),
        }
    }

    fn small_int(&mut self) -> Result<u32, String> {
        self.int()?.to_u32().ok_or_else(|| "exponent too large".to_string())
    }

    fn expr(&mut self) -> Result<Expr, String> {
        let mut left = self.term()?;
        while self.at_sym("+") {
            self.pos += 1;
            left = Expr::Add(Box::new(left), Box::new(self.term()?));
        }
        Ok(left)
    }

    fn term(&mut self) -> Result<Expr, String> {
        let mut left = self.factor()?;
        while self.at_sym("*") {
            self.pos += 1;
            left = Expr::Mul(Box::new(left), Box::new(self.factor()?));
        }
        Ok(left)
    }

    fn factor(&mut self) -> Result<Expr, String> {
        let base = self.atom()?;
        if self.at_sym("^") {
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), self.small_int()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, String> {
        if self.at_word("sigma") {
            self.pos += 1;
            self.expect_sym("(")?;
            let inner = self.expr()?;
            self.expect_sym(")")?;
            return Ok(Expr::Sigma(Box::new(inner)));
        }
        if self.at_sym("(") {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        Ok(Expr::Int(self.int()?))
    }

    fn power(&mut self) -> Result<(Natural, u32), String> {
        let base = self.int()?;
        if self.at_sym("^") {
            self.pos += 1;
            return Ok((base, self.small_int()?));
        }
        Ok((base, 1))
    }

    fn relation(&mut self) -> Result<Relation, String> {
        if self.at_word("prime") {
            self.pos += 1;
            self.expect_sym("(")?;
            let inner = self.expr()?;
            self.expect_sym(")")?;
            return Ok(Relation::Prime(inner));
        }
        if self.at_word("h") {
            self.pos += 1;
            self.expect_sym("{")?;
            let mut set = vec![self.power()?];
            while self.at_sym(",") {
                self.pos += 1;
                set.push(self.power()?);
            }
            self.expect_sym("}")?;
            self.expect_sym(">")?;
            if self.int()? != BigUint::one() {
                return Err("only 'h{...} > 1' is supported".into());
            }
            return Ok(Relation::HExceedsOne(set));
        }
        // An arc chain starts with a bare prime power followed by '->'.
        let mark = self.pos;
        if let Ok(first) = self.power() {
            if self.at_sym("->") {
                let mut chain = vec![first];
                while self.at_sym("->") {
                    self.pos += 1;
                    chain.push(self.power()?);
                }
                return Ok(Relation::ArcChain(chain));
            }
        }
        self.pos = mark;
        let left = self.expr()?;
        if self.at_sym("|") {
            self.pos += 1;
            return Ok(Relation::Divides(left, self.expr()?));
        }
        self.expect_sym("=")?;
        let right = self.expr()?;
        if self.at_word("mod") {
            self.pos += 1;
            let Expr::Int(residue) = right else {
                return Err("residue must be an integer".into());
            };
            let modulus = self.int()?;
            return Ok(Relation::Congruent {
                value: left,
                residue,
                modulus,
            });
        }
        Ok(Relation::Equals(left, right))
    }
}

pub fn parse_relation(text: &str) -> Result<Relation, String> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let rel = p.relation()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input at token {}", p.pos));
    }
    Ok(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn arithmetic_precedence() {
        let Relation::Equals(l, r) = parse_relation("4733^2 + 4733 + 1 = 22406023").unwrap() else {
            panic!()
        };
        assert_eq!(l.eval(), r.eval());
        let Relation::Equals(l, _) = parse_relation("2 * 3^2 + 1 = 0").unwrap() else {
            panic!()
        };
        assert_eq!(l.eval(), n(19));
    }

    #[test]
    fn sigma_of_products() {
        let Relation::Divides(d, x) = parse_relation("3^3 | sigma(2 * 37^2 * 67^2)").unwrap() else {
            panic!()
        };
        assert_eq!(d.eval(), n(27));
        assert_eq!(x.eval(), n(3 * 3 * 7 * 67 * 3 * 49 * 31));
    }

    #[test]
    fn every_shape_parses() {
        assert!(matches!(parse_relation("prime(22406023)"), Ok(Relation::Prime(_))));
        assert_eq!(
            parse_relation("631 = 3 mod 4"),
            Ok(Relation::Congruent {
                value: Expr::Int(n(631)),
                residue: n(3),
                modulus: n(4)
            })
        );
        assert_eq!(
            parse_relation("h{2, 3^2} > 1"),
            Ok(Relation::HExceedsOne(vec![(n(2), 1), (n(3), 2)]))
        );
        assert_eq!(
            parse_relation("3^2 -> 13^2 -> 61^2"),
            Ok(Relation::ArcChain(vec![(n(3), 2), (n(13), 2), (n(61), 2)]))
        );
        let Relation::Equals(_, r) = parse_relation("sigma(67^2) = 3 * 7^2 * 31").unwrap() else {
            panic!()
        };
        assert_eq!(r.as_power_product(), Some(vec![(n(3), 1), (n(7), 2), (n(31), 1)]));
    }

    #[test]
    fn malformed_payloads() {
        for bad in ["", "sigma(3", "3 =", "h{2} > 2", "2 # 3", "3 -> ", "1 = 2 3"] {
            assert!(parse_relation(bad).is_err(), "{bad}");
        }
    }
}
