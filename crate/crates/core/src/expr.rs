//! A small expression language for test functions over matrix-entry names.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := number | name | func '(' expr ')' | '(' expr ')'
//! func  := exp | ln | sqrt
//! ```
//!
//! Names are the coordinate names of the model (`x`, `y`, `z` on the
//! Heisenberg group, `u11r` … `u22i` on SU(2), `m11` … `m22` on SL(2)).
//! Positivity is tracked syntactically so that `ln` and `sqrt` accept
//! arguments such as `1 + x^2` or `exp(z)`.

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::group::ModelKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Sign {
    Unknown,
    NonNegative,
    Positive,
}

#[derive(Clone, Debug)]
struct Value {
    field: ScalarField,
    sign: Sign,
}

impl Value {
    fn new(field: ScalarField, sign: Sign) -> Self {
        let field = if sign == Sign::Positive {
            field.assume_positive()
        } else {
            field
        };
        Value { field, sign }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    kind: ModelKind,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        offset,
        message: message.into(),
    })
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                let sign = match (acc.sign, rhs.sign) {
                    (Sign::Unknown, _) | (_, Sign::Unknown) => Sign::Unknown,
                    (a, b) => a.max(b),
                };
                acc = Value::new(acc.field + rhs.field, sign);
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = Value::new(acc.field - rhs.field, Sign::Unknown);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let op = if self.eat('*') {
                '*'
            } else if self.eat('/') {
                '/'
            } else {
                return Ok(acc);
            };
            let rhs = self.unary()?;
            let sign = acc.sign.min(rhs.sign);
            acc = if op == '*' {
                Value::new(acc.field * rhs.field, sign)
            } else {
                Value::new(acc.field.div(&rhs.field), if sign == Sign::Positive { sign } else { Sign::Unknown })
            };
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Value::new(-v.field, Sign::Unknown));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits = self.src[self.pos..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return err(start, "expected an integer exponent after '^'");
        }
        let text = &self.src[self.pos..self.pos + digits];
        let n: i32 = text.parse().or_else(|_| err(start, "exponent out of range"))?;
        self.pos += digits;
        let n = if neg { -n } else { n };
        let sign = if base.sign == Sign::Positive || n == 0 {
            Sign::Positive
        } else if n % 2 == 0 {
            Sign::NonNegative
        } else {
            base.sign
        };
        Ok(Value::new(base.field.powi(n), sign))
    }

    fn atom(&mut self) -> Result<Value> {
        let Some(c) = self.peek() else {
            return err(self.pos, "unexpected end of input");
        };
        let start = self.pos;
        if c == '(' {
            self.pos += 1;
            let v = self.expr()?;
            if !self.eat(')') {
                return err(self.pos, "expected ')'");
            }
            return Ok(v);
        }
        if c.is_ascii_digit() || c == '.' {
            let len = self.src[start..]
                .char_indices()
                .take_while(|&(i, ch)| {
                    ch.is_ascii_digit()
                        || ch == '.'
                        || ((ch == 'e' || ch == 'E') && i > 0)
                        || ((ch == '+' || ch == '-') && i > 0 && matches!(self.src[start..].as_bytes()[i - 1], b'e' | b'E'))
                })
                .count();
            let text = &self.src[start..start + len];
            let v: f64 = text.parse().or_else(|_| err(start, format!("malformed number `{text}`")))?;
            self.pos += len;
            let sign = if v > 0.0 { Sign::Positive } else { Sign::NonNegative };
            return Ok(Value::new(ScalarField::constant(v), sign));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = self.src[start..]
                .chars()
                .take_while(|ch| ch.is_ascii_alphanumeric() || *ch == '_')
                .count();
            let name = &self.src[start..start + len];
            self.pos += len;
            if matches!(name, "exp" | "ln" | "sqrt") {
                if !self.eat('(') {
                    return err(self.pos, format!("expected '(' after `{name}`"));
                }
                let arg_at = self.pos;
                let arg = self.expr()?;
                if !self.eat(')') {
                    return err(self.pos, "expected ')'");
                }
                return match name {
                    "exp" => Ok(Value::new(arg.field.exp(), Sign::Positive)),
                    _ if arg.sign != Sign::Positive => {
                        err(arg_at, format!("argument of `{name}` is not evidently positive"))
                    }
                    "ln" => Ok(Value::new(arg.field.ln()?, Sign::Unknown)),
                    _ => Ok(Value::new(arg.field.sqrt()?, Sign::Positive)),
                };
            }
            return match self.kind.coord_index(name) {
                Some(i) => Ok(Value::new(ScalarField::coord(i), Sign::Unknown)),
                None => err(
                    start,
                    format!(
                        "unknown name `{name}` for model {}; expected one of {}",
                        self.kind,
                        self.kind.coord_names().join(", ")
                    ),
                ),
            };
        }
        err(start, format!("unexpected character '{c}'"))
    }
}

/// Parses `src` into a field on `kind`.
pub fn parse_field(src: &str, kind: ModelKind) -> Result<ScalarField> {
    let mut p = Parser { src, pos: 0, kind };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return err(p.pos, "unexpected trailing input");
    }
    Ok(v.field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElement;

    #[test]
    fn evaluates_heisenberg_expressions() {
        let g = GroupElement::heisenberg(0.5, -2.0, 3.0);
        let cases = [
            ("x^2 + y^2", 4.25),
            ("-x*y + z/2", 2.5),
            ("exp(x) * 2", 2.0 * 0.5f64.exp()),
            ("ln(1 + x^2)", 1.25f64.ln()),
            ("sqrt(exp(z))", 1.5f64.exp()),
            ("2^3 - y^-1", 8.5),
            ("1e-1 * (x + 1.5E+1)", 1.55),
        ];
        for (src, want) in cases {
            let f = parse_field(src, ModelKind::Heisenberg).unwrap();
            assert!((f.value(&g) - want).abs() < 1e-12, "{src}: {} vs {want}", f.value(&g));
        }
    }

    #[test]
    fn positivity_is_tracked() {
        assert!(parse_field("exp(x) + 1", ModelKind::Heisenberg).unwrap().is_positive());
        assert!(!parse_field("x - 1", ModelKind::Heisenberg).unwrap().is_positive());
    }

    #[test]
    fn errors_carry_offsets() {
        let cases = [
            ("x + ", 4),
            ("x + w", 4),
            ("ln(x)", 3),
            ("(x + y", 6),
            ("x ^ y", 4),
            ("x $", 2),
            ("x y", 2),
        ];
        for (src, offset) in cases {
            match parse_field(src, ModelKind::Heisenberg) {
                Err(Error::Parse { offset: o, .. }) => assert_eq!(o, offset, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
    }

    #[test]
    fn model_names() {
        let f = parse_field("u11r^2 + u11i^2", ModelKind::Su2).unwrap();
        assert!(f.value(&crate::GroupModel::su2().identity()) == 1.0);
        assert!(parse_field("x", ModelKind::Su2).is_err());
        assert!(parse_field("m11*m22 - m12*m21", ModelKind::Sl2).is_ok());
    }
}
