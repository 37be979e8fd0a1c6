use super::{Field, Poly, Rational, Vars};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error: {0}")]
pub struct ParseError(String);

impl ParseError {
    pub fn new(msg: impl Into<String>) -> Self {
        ParseError(msg.into())
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(' ') {
            self.pos += 1;
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

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn err(&self, what: &str) -> ParseError {
        ParseError::new(format!("{what} at offset {} in `{}`", self.pos, self.src))
    }
}

/// `poly := ['-'] term (('+'|'-') term)*`, `term := factor ('*' factor)*`,
/// `factor := int ['/' int] | '(' scalar ')' | ident ['^' int]`.
pub(super) fn parse_poly<F: Field>(text: &str, vars: &Vars) -> Result<Poly<F>, ParseError> {
    let mut cur = Cursor { src: text, pos: 0 };
    if cur.peek().is_none() {
        return Err(ParseError::new("empty polynomial"));
    }
    let mut out = Poly::zero_in(vars);
    let mut negative = cur.eat('-');
    loop {
        let (exp, coef) = parse_term::<F>(&mut cur, vars)?;
        let coef = if negative { -coef } else { coef };
        out.push_term(exp, coef);
        if cur.eat('+') {
            negative = false;
        } else if cur.eat('-') {
            negative = true;
        } else if cur.peek().is_none() {
            return Ok(out);
        } else {
            return Err(cur.err("expected `+` or `-`"));
        }
    }
}

fn parse_term<F: Field>(cur: &mut Cursor<'_>, vars: &Vars) -> Result<(Vec<u16>, F), ParseError> {
    let mut exp = vec![0u16; vars.len()];
    let mut coef = F::one();
    loop {
        match cur.peek() {
            Some('(') => {
                cur.pos += 1;
                let start = cur.pos;
                let mut depth = 1;
                while depth > 0 {
                    match cur.src[cur.pos..].chars().next() {
                        Some('(') => depth += 1,
                        Some(')') => depth -= 1,
                        Some(_) => {}
                        None => return Err(cur.err("unbalanced parenthesis")),
                    }
                    cur.pos += 1;
                }
                let inner = &cur.src[start..cur.pos - 1];
                coef = coef * F::parse_scalar(inner)?;
            }
            Some(c) if c.is_ascii_digit() => {
                let num = cur.take_while(|c| c.is_ascii_digit());
                let text = if cur.src[cur.pos..].starts_with('/') {
                    cur.pos += 1;
                    let den = cur.take_while(|c| c.is_ascii_digit());
                    if den.is_empty() {
                        return Err(cur.err("missing denominator"));
                    }
                    format!("{num}/{den}")
                } else {
                    num.to_string()
                };
                coef = coef * F::from(text.parse::<Rational>()?);
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = cur.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let idx = vars
                    .index_of(name)
                    .ok_or_else(|| ParseError::new(format!("unknown symbol `{name}`")))?;
                let power = if cur.src[cur.pos..].starts_with('^') {
                    cur.pos += 1;
                    let digits = cur.take_while(|c| c.is_ascii_digit());
                    digits.parse::<u16>().map_err(|_| cur.err("bad exponent"))?
                } else {
                    1
                };
                exp[idx] += power;
            }
            _ => return Err(cur.err("expected a factor")),
        }
        if !cur.eat('*') {
            return Ok((exp, coef));
        }
    }
}
