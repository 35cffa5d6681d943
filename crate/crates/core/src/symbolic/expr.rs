//! Expression language for identities in `P`, `Q` and the derived operators.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' '-'? integer)*
//! atom    := 'I' | 'P' | 'Q' | 'M' | 'S' | 'U' | 'V' | integer
//!          | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `M`, `S`, `U`, `V` are macros for `P - Q`, `I - M^2`,
//! `(I-Q)(I-P) + QP` and `(I-P)(I-Q) + PQ`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::ncpoly::{Gen, NCPoly};
use super::SymbolicError;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    I,
    P,
    Q,
    M,
    S,
    U,
    V,
}

impl Atom {
    fn from_char(c: char) -> Option<Atom> {
        Some(match c {
            'I' => Atom::I,
            'P' => Atom::P,
            'Q' => Atom::Q,
            'M' => Atom::M,
            'S' => Atom::S,
            'U' => Atom::U,
            'V' => Atom::V,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Atom(Atom),
    Int(i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Commutator(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(a) => write!(f, "{a:?}"),
            Expr::Int(k) if *k < 0 => write!(f, "({k})"),
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, k) => write!(f, "({a}^{k})"),
            Expr::Commutator(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

const ATOM_START: &[&str] = &["I", "P", "Q", "M", "S", "U", "V", "integer", "(", "["];

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            text,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    /// Byte offset of the current token in the input.
    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or(self.text.len(), |&(i, _)| i)
    }

    fn error(&self, expected: &[&str]) -> SymbolicError {
        SymbolicError::Syntax {
            position: self.offset(),
            found: self.peek(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SymbolicError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&c.to_string()]))
        }
    }

    fn expr(&mut self) -> Result<Expr, SymbolicError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SymbolicError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SymbolicError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SymbolicError> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let negative = self.eat('-');
            let Some(k) = self.integer()? else {
                return Err(self.error(&["integer"]));
            };
            base = Expr::Pow(Box::new(base), if negative { -k } else { k });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Option<i64>, SymbolicError> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            return Ok(None);
        }
        digits.parse().map(Some).map_err(|_| {
            self.pos = start;
            self.error(&["integer fitting in 64 bits"])
        })
    }

    fn atom(&mut self) -> Result<Expr, SymbolicError> {
        if let Some(a) = self.peek().and_then(Atom::from_char) {
            self.pos += 1;
            return Ok(Expr::Atom(a));
        }
        if let Some(k) = self.integer()? {
            return Ok(Expr::Int(k));
        }
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if self.eat('[') {
            let a = self.expr()?;
            self.expect(',')?;
            let b = self.expr()?;
            self.expect(']')?;
            return Ok(Expr::Commutator(Box::new(a), Box::new(b)));
        }
        Err(self.error(ATOM_START))
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, SymbolicError> {
    let mut parser = Parser::new(text);
    let e = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.error(&["+", "-", "*", "^", "end of input"]));
    }
    Ok(e)
}

fn nonnegative(k: i64) -> Result<u32, SymbolicError> {
    u32::try_from(k).map_err(|_| SymbolicError::NegativePower(k))
}

/// The polynomial an atom stands for.
fn atom_poly(a: Atom) -> NCPoly {
    let one = NCPoly::one();
    let p = NCPoly::gen(Gen::P);
    let q = NCPoly::gen(Gen::Q);
    match a {
        Atom::I => one,
        Atom::P => p,
        Atom::Q => q,
        Atom::M => p.sub(&q),
        Atom::S => {
            let m = p.sub(&q);
            one.sub(&m.mul(&m))
        }
        Atom::U => one.sub(&q).mul(&one.sub(&p)).add(&q.mul(&p)),
        Atom::V => one.sub(&p).mul(&one.sub(&q)).add(&p.mul(&q)),
    }
}

/// Fully expanded, reduced, canonical polynomial.
pub fn expand(e: &Expr) -> Result<NCPoly, SymbolicError> {
    Ok(match e {
        Expr::Atom(a) => atom_poly(*a),
        Expr::Int(k) => NCPoly::constant(*k),
        Expr::Neg(a) => expand(a)?.neg(),
        Expr::Add(a, b) => expand(a)?.add(&expand(b)?),
        Expr::Sub(a, b) => expand(a)?.sub(&expand(b)?),
        Expr::Mul(a, b) => expand(a)?.mul(&expand(b)?),
        Expr::Pow(a, k) => expand(a)?.pow(nonnegative(*k)?),
        Expr::Commutator(a, b) => expand(a)?.commutator(&expand(b)?),
    })
}

/// Terms keyed by unreduced letter sequences.
pub type RawPoly = BTreeMap<Vec<Gen>, BigInt>;

fn raw_add(mut a: RawPoly, b: &RawPoly, sign: i64) -> RawPoly {
    for (w, c) in b {
        *a.entry(w.clone()).or_default() += c * sign;
    }
    a.retain(|_, c| !c.is_zero());
    a
}

fn raw_mul(a: &RawPoly, b: &RawPoly) -> RawPoly {
    let mut out = RawPoly::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            *out.entry(w).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn raw_atom(a: Atom) -> RawPoly {
    let word = |letters: &[Gen], c: i64| (letters.to_vec(), BigInt::from(c));
    use Gen::{P, Q};
    let terms: Vec<(Vec<Gen>, BigInt)> = match a {
        Atom::I => vec![word(&[], 1)],
        Atom::P => vec![word(&[P], 1)],
        Atom::Q => vec![word(&[Q], 1)],
        Atom::M => vec![word(&[P], 1), word(&[Q], -1)],
        Atom::S => {
            let m = raw_atom(Atom::M);
            return raw_add(raw_atom(Atom::I), &raw_mul(&m, &m), -1);
        }
        Atom::U => vec![
            word(&[], 1),
            word(&[P], -1),
            word(&[Q], -1),
            word(&[Q, P], 1),
            word(&[Q, P], 1),
        ],
        Atom::V => vec![
            word(&[], 1),
            word(&[Q], -1),
            word(&[P], -1),
            word(&[P, Q], 1),
            word(&[P, Q], 1),
        ],
    };
    let mut out = RawPoly::new();
    for (w, c) in terms {
        *out.entry(w).or_default() += c;
    }
    out
}

/// Expansion in the free algebra without applying idempotency; words are
/// only reduced afterwards (see [`NCPoly::from_raw_with`]). Exponential in
/// degree, meant as an independent reference for small expressions.
pub fn expand_unreduced(e: &Expr) -> Result<RawPoly, SymbolicError> {
    Ok(match e {
        Expr::Atom(a) => raw_atom(*a),
        Expr::Int(k) => {
            let mut r = RawPoly::new();
            if *k != 0 {
                r.insert(Vec::new(), BigInt::from(*k));
            }
            r
        }
        Expr::Neg(a) => raw_add(RawPoly::new(), &expand_unreduced(a)?, -1),
        Expr::Add(a, b) => raw_add(expand_unreduced(a)?, &expand_unreduced(b)?, 1),
        Expr::Sub(a, b) => raw_add(expand_unreduced(a)?, &expand_unreduced(b)?, -1),
        Expr::Mul(a, b) => raw_mul(&expand_unreduced(a)?, &expand_unreduced(b)?),
        Expr::Pow(a, k) => {
            let base = expand_unreduced(a)?;
            let mut acc = raw_atom(Atom::I);
            for _ in 0..nonnegative(*k)? {
                acc = raw_mul(&acc, &base);
            }
            acc
        }
        Expr::Commutator(a, b) => {
            let (a, b) = (expand_unreduced(a)?, expand_unreduced(b)?);
            raw_add(raw_mul(&a, &b), &raw_mul(&b, &a), -1)
        }
    })
}

/// Evaluates an expression directly on matrices, building `M, S, U, V` from
/// `P` and `Q` without going through polynomials.
pub fn eval_matrix<T: Scalar>(
    e: &Expr,
    p: &Matrix<T>,
    q: &Matrix<T>,
) -> Result<Matrix<T>, SymbolicError> {
    let n = p.rows();
    let id = Matrix::<T>::identity(n);
    Ok(match e {
        Expr::Atom(a) => match a {
            Atom::I => id,
            Atom::P => p.clone(),
            Atom::Q => q.clone(),
            Atom::M => p - q,
            Atom::S => {
                let m = p - q;
                &id - &(&m * &m)
            }
            Atom::U => &(&(&id - q) * &(&id - p)) + &(q * p),
            Atom::V => &(&(&id - p) * &(&id - q)) + &(p * q),
        },
        Expr::Int(k) => id.scale(&T::from_i64(*k)),
        Expr::Neg(a) => -&eval_matrix(a, p, q)?,
        Expr::Add(a, b) => &eval_matrix(a, p, q)? + &eval_matrix(b, p, q)?,
        Expr::Sub(a, b) => &eval_matrix(a, p, q)? - &eval_matrix(b, p, q)?,
        Expr::Mul(a, b) => &eval_matrix(a, p, q)? * &eval_matrix(b, p, q)?,
        Expr::Pow(a, k) => eval_matrix(a, p, q)?.pow(nonnegative(*k)?),
        Expr::Commutator(a, b) => eval_matrix(a, p, q)?.commutator(&eval_matrix(b, p, q)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(text: &str) -> NCPoly {
        expand(&parse_expr(text).unwrap()).unwrap()
    }

    #[test]
    fn parses_product_and_difference() {
        let e = parse_expr("P*P - P").unwrap();
        let pp = Expr::Mul(Box::new(Expr::Atom(Atom::P)), Box::new(Expr::Atom(Atom::P)));
        assert_eq!(e, Expr::Sub(Box::new(pp), Box::new(Expr::Atom(Atom::P))));
    }

    #[test]
    fn parses_commutator() {
        let e = parse_expr("[(I-2*Q)*M, P*V]").unwrap();
        assert!(matches!(e, Expr::Commutator(..)));
    }

    #[test]
    fn rejects_double_star() {
        let err = parse_expr("P**Q").unwrap_err();
        match err {
            SymbolicError::Syntax {
                position, expected, ..
            } => {
                assert_eq!(position, 2);
                assert!(expected.contains(&"P".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_trailing_and_unbalanced() {
        assert!(parse_expr("P Q").is_err());
        assert!(parse_expr("(P + Q").is_err());
        assert!(parse_expr("[P, Q").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("M^").is_err());
        assert!(parse_expr("X").is_err());
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(poly("P*P"), NCPoly::gen(Gen::P));
        assert_eq!(poly("U").to_string(), "1 - p - q + 2qp");
        assert_eq!(poly("V").to_string(), "1 - p - q + 2pq");
        assert!(poly("M*M - (P + Q - P*Q - Q*P)").is_zero());
        assert_eq!(poly("I - U"), poly("(I-2*Q)*M"));
    }

    #[test]
    fn negative_power_is_an_error() {
        let e = parse_expr("S^-1").unwrap();
        assert!(matches!(expand(&e), Err(SymbolicError::NegativePower(-1))));
        assert_eq!(poly("M^0"), NCPoly::one());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(poly("-M^2"), poly("0 - M*M"));
    }
}
