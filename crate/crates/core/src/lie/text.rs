//! Text forms `e[3] - 2*e[-1]` and `t[1,-2]d2 + (1/2)*t[0,0]d1`.

use std::sync::Arc;

use super::{LieError, Point, Rank1Algebra, Rank1Element, WnAlgebra, WnElement};
use crate::scalar::{Field, Rational};

/// Splits at top-level `+`/`-`, keeping the sign with each term.
fn split_terms(text: &str) -> Result<Vec<(bool, &str)>, LieError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let chunk = text[start..i].trim();
                if chunk.is_empty() {
                    if !out.is_empty() || start != 0 {
                        return Err(LieError::Parse(format!("dangling sign in `{text}`")));
                    }
                } else {
                    out.push((negative, chunk));
                }
                negative = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    let chunk = text[start..].trim();
    if chunk.is_empty() {
        return Err(LieError::Parse(format!("empty term in `{text}`")));
    }
    out.push((negative, chunk));
    Ok(out)
}

fn split_coef<F: Field>(term: &str) -> Result<(F, &str), LieError> {
    let bad = |e: &dyn std::fmt::Display| LieError::Parse(e.to_string());
    match term.rfind('*') {
        None => Ok((F::one(), term)),
        Some(pos) => {
            let c = term[..pos].trim();
            let c = if let Some(inner) = c.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
                F::parse_scalar(inner).map_err(|e| bad(&e))?
            } else {
                F::from(c.parse::<Rational>().map_err(|e| bad(&e))?)
            };
            Ok((c, term[pos + 1..].trim()))
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, LieError> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| LieError::Parse(format!("bad index `{x}`"))))
        .collect()
}

/// Parses a combination of `e[...]` over a concrete rank-one algebra.
pub fn parse_rank1<F: Field>(text: &str, algebra: &Arc<Rank1Algebra<F>>) -> Result<Rank1Element<F>, LieError> {
    if algebra.lattice().is_symbolic() {
        return Err(LieError::SymbolicLattice);
    }
    let mut out = Rank1Element::zero(algebra);
    if text.trim() == "0" {
        return Ok(out);
    }
    for (neg, term) in split_terms(text)? {
        let (c, basis) = split_coef::<F>(term)?;
        let idx = basis
            .strip_prefix("e[")
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| LieError::Parse(format!("expected e[..], got `{basis}`")))?;
        let coords = parse_ints(idx)?;
        if coords.len() != algebra.lattice().rank() {
            return Err(LieError::RankMismatch { expected: algebra.lattice().rank(), got: coords.len() });
        }
        out.add_term(Point::new(&coords), if neg { -c } else { c });
    }
    Ok(out)
}

/// Parses a combination of `t[...]dA` (directions 1-based).
pub fn parse_wn<F: Field>(text: &str, algebra: WnAlgebra) -> Result<WnElement<F>, LieError> {
    let mut out = WnElement::zero(algebra);
    if text.trim() == "0" {
        return Ok(out);
    }
    for (neg, term) in split_terms(text)? {
        let (c, basis) = split_coef::<F>(term)?;
        let rest = basis
            .strip_prefix("t[")
            .ok_or_else(|| LieError::Parse(format!("expected t[..]dA, got `{basis}`")))?;
        let close = rest.find(']').ok_or_else(|| LieError::Parse(format!("unclosed `{basis}`")))?;
        let coords = parse_ints(&rest[..close])?;
        let dir: usize = rest[close + 1..]
            .strip_prefix('d')
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| LieError::Parse(format!("bad direction in `{basis}`")))?;
        if coords.len() != algebra.n() {
            return Err(LieError::RankMismatch { expected: algebra.n(), got: coords.len() });
        }
        if dir == 0 || dir > algebra.n() {
            return Err(LieError::Parse(format!("direction {dir} out of range")));
        }
        out.add_term(Point::new(&coords), dir - 1, if neg { -c } else { c });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ring;

    #[test]
    fn round_trip_rank1() {
        let w = Arc::new(Rank1Algebra::witt());
        let x = parse_rank1::<Rational>("e[3] - 2*e[-1] + (1/2)*e[0]", &w).unwrap();
        assert_eq!(x.terms().len(), 3);
        let y = parse_rank1::<Rational>(&x.to_string(), &w).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn round_trip_wn() {
        let w = WnAlgebra::new(2);
        let x = parse_wn::<Rational>("t[1,-2]d2 - 3*t[0,0]d1", w).unwrap();
        assert_eq!(x.terms()[&(Point::new(&[0, 0]), 0)], Rational::from_i64(-3));
        assert_eq!(parse_wn::<Rational>(&x.to_string(), w).unwrap(), x);
        assert!(parse_wn::<Rational>("t[1]d1", w).is_err());
    }
}
