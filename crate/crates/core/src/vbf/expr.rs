//! Parser for the function-expression surface syntax.
//!
//! Grammar (ASCII, whitespace-insensitive):
//!
//! ```text
//! func    := term ('+' term)*
//! term    := mono | 'Tr(' mono ')' | 'L{' hexlist '}(' mono ')' | hexconst
//! mono    := [hexconst '*'] 'x^' uint | 'x'
//! hexlist := hexconst (',' hexconst)*       # c_0..c_{n-1} of sum c_i X^(2^i)
//! hexconst:= '0x' [0-9a-f]+
//! ```
//!
//! Hex lists shorter than n are zero-padded. Trace terms evaluate to the
//! field constants 0/1.

use super::{LinearizedPoly, Vbf};
use crate::gf2n::{Field, FieldElement};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// One monomial c * x^e.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: FieldElement,
    pub exp: u32,
}

/// One summand of a parsed expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Monomial(Monomial),
    Trace(Monomial),
    Linear(LinearizedPoly, Monomial),
    Constant(FieldElement),
}

/// A parsed function expression: a sum of terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncExpr {
    n: u32,
    terms: Vec<Term>,
}

impl FuncExpr {
    pub fn parse(field: &Field, src: &str) -> Result<FuncExpr> {
        Parser::new(field, src)?.parse_func()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, field: &Field, x: FieldElement) -> FieldElement {
        let mut acc = FieldElement::ZERO;
        for term in &self.terms {
            acc += match term {
                Term::Monomial(m) => eval_mono(field, m, x),
                Term::Trace(m) => FieldElement(field.trace(eval_mono(field, m, x)) as u16),
                Term::Linear(lp, m) => lp.eval(field, eval_mono(field, m, x)),
                Term::Constant(c) => *c,
            };
        }
        acc
    }

    pub fn to_vbf(&self, field: &Arc<Field>) -> Vbf {
        Vbf::from_fn(field, |x| self.eval(field, x))
    }
}

#[inline]
fn eval_mono(field: &Field, m: &Monomial, x: FieldElement) -> FieldElement {
    field.mul(m.coeff, field.pow_u(x, m.exp as u64))
}

impl fmt::Display for FuncExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mono = |m: &Monomial| {
            if m.coeff == FieldElement::ONE {
                if m.exp == 1 {
                    "x".to_string()
                } else {
                    format!("x^{}", m.exp)
                }
            } else {
                format!("{}*x^{}", m.coeff, m.exp)
            }
        };
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match term {
                Term::Monomial(m) => write!(f, "{}", mono(m))?,
                Term::Trace(m) => write!(f, "Tr({})", mono(m))?,
                Term::Linear(lp, m) => {
                    let coeffs: Vec<String> =
                        lp.coeffs().iter().map(|c| c.to_string()).collect();
                    write!(f, "L{{{}}}({})", coeffs.join(","), mono(m))?;
                }
                Term::Constant(c) => write!(f, "{c}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    field: &'a Field,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(field: &'a Field, src: &'a str) -> Result<Parser<'a>> {
        if let Some(off) = src.bytes().position(|b| !b.is_ascii()) {
            return Err(err(off, "expression must be ASCII"));
        }
        Ok(Parser {
            field,
            bytes: src.as_bytes(),
            pos: 0,
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<()> {
        match self.peek() {
            Some(b) if b == ch => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(err(self.pos, &format!("expected '{}'", ch as char))),
        }
    }

    fn parse_func(&mut self) -> Result<FuncExpr> {
        let mut terms = vec![self.parse_term()?];
        while let Some(b'+') = self.peek() {
            self.pos += 1;
            terms.push(self.parse_term()?);
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(err(self.pos, "unexpected trailing input"));
        }
        Ok(FuncExpr {
            n: self.field.n(),
            terms,
        })
    }

    fn parse_term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                if self.bytes.get(self.pos) != Some(&b'r') {
                    return Err(err(self.pos, "expected 'Tr'"));
                }
                self.pos += 1;
                self.expect(b'(')?;
                let m = self.parse_mono()?;
                self.expect(b')')?;
                Ok(Term::Trace(m))
            }
            Some(b'L') => {
                self.pos += 1;
                self.expect(b'{')?;
                let list_off = self.pos;
                let mut coeffs = vec![self.parse_hexconst()?];
                while let Some(b',') = self.peek() {
                    self.pos += 1;
                    coeffs.push(self.parse_hexconst()?);
                }
                self.expect(b'}')?;
                let lp = LinearizedPoly::new(self.field.n(), &coeffs)
                    .map_err(|e| err(list_off, &e.to_string()))?;
                self.expect(b'(')?;
                let m = self.parse_mono()?;
                self.expect(b')')?;
                Ok(Term::Linear(lp, m))
            }
            Some(b'x') => Ok(Term::Monomial(self.parse_mono()?)),
            Some(b'0') => {
                // Either a constant or "hexconst * x^e".
                let c = self.parse_hexconst()?;
                if let Some(b'*') = self.peek() {
                    self.pos += 1;
                    let m = self.parse_mono_tail(c)?;
                    Ok(Term::Monomial(m))
                } else {
                    Ok(Term::Constant(c))
                }
            }
            _ => Err(err(self.pos, "expected a term")),
        }
    }

    fn parse_mono(&mut self) -> Result<Monomial> {
        match self.peek() {
            Some(b'x') => self.parse_mono_tail(FieldElement::ONE),
            Some(b'0') => {
                let c = self.parse_hexconst()?;
                self.expect(b'*')?;
                self.parse_mono_tail(c)
            }
            _ => Err(err(self.pos, "expected a monomial")),
        }
    }

    /// Parses `x^uint | x` after an (optional, already consumed) coefficient.
    fn parse_mono_tail(&mut self, coeff: FieldElement) -> Result<Monomial> {
        self.expect(b'x')?;
        if self.bytes.get(self.pos) == Some(&b'^') {
            self.pos += 1;
            let exp = self.parse_uint()?;
            Ok(Monomial { coeff, exp })
        } else if coeff == FieldElement::ONE {
            Ok(Monomial { coeff, exp: 1 })
        } else {
            // The grammar only attaches coefficients to explicit powers.
            Err(err(self.pos, "expected '^' after coefficient*x"))
        }
    }

    fn parse_hexconst(&mut self) -> Result<FieldElement> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) != Some(&b'0') || self.bytes.get(self.pos + 1) != Some(&b'x') {
            return Err(err(self.pos, "expected hex constant '0x...'"));
        }
        self.pos += 2;
        let digits_start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(b))
        {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(err(self.pos, "expected hex digits after '0x'"));
        }
        let text = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap();
        let value = u32::from_str_radix(text, 16)
            .map_err(|_| err(start, "hex constant too large"))?;
        self.field
            .element(value)
            .map_err(|_| err(start, &format!("constant 0x{value:x} exceeds the field")))
    }

    fn parse_uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(err(start, "expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: u64 = text
            .parse()
            .map_err(|_| err(start, "integer too large"))?;
        if value > self.field.order() as u64 {
            return Err(err(
                start,
                &format!("exponent {value} exceeds 2^n - 1 = {}", self.field.order()),
            ));
        }
        Ok(value as u32)
    }
}

fn err(offset: usize, message: &str) -> Error {
    Error::Parse {
        offset,
        message: message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2n::Field;
    use std::sync::Arc;

    fn field(n: u32) -> Arc<Field> {
        Arc::new(Field::new(n).unwrap())
    }

    #[test]
    fn parses_basic_forms() {
        let f = field(5);
        let e = FuncExpr::parse(&f, "x^3 + Tr(x^9)").unwrap();
        assert_eq!(e.terms().len(), 2);
        assert_eq!(
            e.terms()[0],
            Term::Monomial(Monomial {
                coeff: FieldElement::ONE,
                exp: 3
            })
        );
        assert!(matches!(e.terms()[1], Term::Trace(Monomial { exp: 9, .. })));

        let e = FuncExpr::parse(&f, "0x3*x^7 + 0x1f + x").unwrap();
        assert_eq!(
            e.terms()[0],
            Term::Monomial(Monomial {
                coeff: FieldElement(3),
                exp: 7
            })
        );
        assert_eq!(e.terms()[1], Term::Constant(FieldElement(0x1f)));
        assert_eq!(
            e.terms()[2],
            Term::Monomial(Monomial {
                coeff: FieldElement::ONE,
                exp: 1
            })
        );

        let e = FuncExpr::parse(&f, "L{0x1,0x0,0x1}(x^3)").unwrap();
        assert!(matches!(e.terms()[0], Term::Linear(..)));
    }

    #[test]
    fn whitespace_insensitive() {
        let f = field(4);
        let a = FuncExpr::parse(&f, "x^3+Tr(x^9)").unwrap();
        let b = FuncExpr::parse(&f, "  x^3\t+ Tr( x^9 ) ").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_offsets() {
        let f = field(4);
        match FuncExpr::parse(&f, "x^3 + ").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 6),
            e => panic!("unexpected error {e}"),
        }
        match FuncExpr::parse(&f, "x^99").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 2),
            e => panic!("unexpected error {e}"),
        }
        match FuncExpr::parse(&f, "x^3 + 0xff").unwrap_err() {
            Error::Parse { offset, .. } => assert_eq!(offset, 6),
            e => panic!("unexpected error {e}"),
        }
        // Uppercase hex digits are outside the grammar.
        assert!(FuncExpr::parse(&f, "0xF").is_err());
        // A coefficient requires an explicit power.
        assert!(FuncExpr::parse(&f, "0x3*x").is_err());
        assert!(FuncExpr::parse(&f, "").is_err());
        // Too many linearized coefficients.
        assert!(FuncExpr::parse(&f, "L{0x1,0x1,0x1,0x1,0x1}(x)").is_err());
    }

    #[test]
    fn expression_matches_power_map() {
        for n in [3u32, 5] {
            let f = field(n);
            for m in 0..f.size() as u64 {
                if m > f.order() as u64 {
                    break;
                }
                let by_expr = Vbf::from_expression(&f, &format!("x^{m}")).unwrap();
                let by_power = Vbf::from_power(&f, m).unwrap();
                assert_eq!(by_expr.table(), by_power.table());
            }
        }
    }

    #[test]
    fn trace_term_evaluates_pointwise() {
        let f = field(5);
        let v = Vbf::from_expression(&f, "x^3 + Tr(x^9)").unwrap();
        for x in f.elements() {
            let expected =
                f.pow_u(x, 3) + FieldElement(f.trace(f.pow_u(x, 9)) as u16);
            assert_eq!(v.eval(x), expected);
        }
    }

    #[test]
    fn pretty_print_reparses_identically() {
        let f = field(4);
        for src in [
            "x",
            "x^0",
            "x^3 + Tr(x^9)",
            "0x3*x^7 + 0xa",
            "L{0x1}(x^3) + Tr(0x2*x^5) + x^12",
        ] {
            let ast = FuncExpr::parse(&f, src).unwrap();
            let printed = ast.to_string();
            let reparsed = FuncExpr::parse(&f, &printed).unwrap();
            assert_eq!(ast, reparsed, "src={src} printed={printed}");
        }
    }
}
