use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::{Field, ParseError, Rational, Ring, ScalarError};

/// An ordered list of symbol names; the variable set of a polynomial ring.
#[derive(Clone)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        Vars(names.into())
    }

    pub fn empty() -> Self {
        Vars(Arc::from(Vec::<String>::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// A new variable set with `extra` appended (names already present are skipped).
    pub fn extended<I, S>(&self, extra: I) -> Vars
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = self.0.to_vec();
        for e in extra {
            let e = e.into();
            if !names.contains(&e) {
                names.push(e);
            }
        }
        Vars(names.into())
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(SmallVec<[u16; 8]>);

impl Exponent {
    fn zeros(n: usize) -> Self {
        Exponent(SmallVec::from_elem(0, n))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a field.
///
/// Polynomials built from constants (`zero`, `one`, `from_i64`) carry an
/// empty variable set and combine with any ring; two polynomials over
/// different non-empty variable sets do not mix.
#[derive(Clone)]
pub struct Poly<F> {
    vars: Vars,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero_in(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exponent::zeros(vars.len()), c);
        }
        Poly { vars: vars.clone(), terms }
    }

    /// The variable `name`; panics if it is not in `vars`.
    pub fn var(vars: &Vars, name: &str) -> Self {
        Self::try_var(vars, name).unwrap_or_else(|| panic!("unknown variable `{name}`"))
    }

    pub fn try_var(vars: &Vars, name: &str) -> Option<Self> {
        let idx = vars.index_of(name)?;
        Some(Self::var_at(vars, idx))
    }

    pub fn var_at(vars: &Vars, idx: usize) -> Self {
        let mut e = Exponent::zeros(vars.len());
        e.0[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, F::one());
        Poly { vars: vars.clone(), terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u16>, F)>,
    {
        let mut p = Poly::zero_in(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length mismatch");
            p.add_term(Exponent(e.into_iter().collect()), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<F> {
        if self.terms.is_empty() {
            return Some(F::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        if var >= self.vars.len() {
            return 0;
        }
        self.terms.keys().map(|e| e.0[var] as u32).max().unwrap_or(0)
    }

    /// Degree in the named variables jointly.
    pub fn degree_in_set(&self, names: &[&str]) -> u32 {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.vars.index_of(n)).collect();
        self.terms
            .keys()
            .map(|e| idx.iter().map(|&i| e.0[i] as u32).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponent, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Re-expresses a context-free constant in `vars`.
    fn lifted(&self, vars: &Vars) -> Poly<F> {
        if &self.vars == vars {
            return self.clone();
        }
        debug_assert!(self.vars.is_empty());
        let c = self.terms.values().next().cloned().unwrap_or_else(F::zero);
        Poly::constant(vars, c)
    }

    fn common_vars(&self, rhs: &Poly<F>) -> Result<Vars, ScalarError> {
        if self.vars == rhs.vars {
            Ok(self.vars.clone())
        } else if self.vars.is_empty() {
            Ok(rhs.vars.clone())
        } else if rhs.vars.is_empty() {
            Ok(self.vars.clone())
        } else {
            Err(ScalarError::ContextMismatch(format!(
                "polynomial rings {:?} and {:?}",
                self.vars, rhs.vars
            )))
        }
    }

    pub fn checked_add(&self, rhs: &Poly<F>) -> Result<Poly<F>, ScalarError> {
        let vars = self.common_vars(rhs)?;
        let mut out = self.lifted(&vars);
        for (e, c) in rhs.lifted(&vars).terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &Poly<F>) -> Result<Poly<F>, ScalarError> {
        let vars = self.common_vars(rhs)?;
        let a = self.lifted(&vars);
        let b = rhs.lifted(&vars);
        let mut out = Poly::zero_in(&vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = Exponent(ea.0.iter().zip(eb.0.iter()).map(|(x, y)| x + y).collect());
                out.add_term(e, ca.clone() * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Poly::zero_in(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c)).collect(),
        }
    }

    /// Substitutes `images[i]` for the `i`-th variable; the result lives in `target`.
    pub fn compose(&self, target: &Vars, images: &[Poly<F>]) -> Poly<F> {
        assert_eq!(images.len(), self.vars.len(), "compose: one image per variable");
        let images: Vec<Poly<F>> = images.iter().map(|p| p.lifted_to(target)).collect();
        // Powers are cached per variable.
        let mut powers: Vec<Vec<Poly<F>>> = images.iter().map(|p| vec![Poly::constant(target, F::one()), p.clone()]).collect();
        let mut out = Poly::zero_in(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().clone() * &images[i];
                    powers[i].push(next);
                }
                term = term * &powers[i][k as usize];
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out
    }

    fn lifted_to(&self, target: &Vars) -> Poly<F> {
        if &self.vars == target {
            self.clone()
        } else if self.vars.is_empty() {
            self.lifted(target)
        } else {
            self.embed(target).expect("compose: image outside target ring")
        }
    }

    /// Moves the polynomial into a ring containing all of its variables.
    pub fn embed(&self, target: &Vars) -> Result<Poly<F>, ScalarError> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if self.degree_in(i) == 0 => map.push(None),
                None => return Err(ScalarError::ContextMismatch(format!("variable `{name}` not in target ring"))),
            }
        }
        let mut out = Poly::zero_in(target);
        for (e, c) in &self.terms {
            let mut ne = Exponent::zeros(target.len());
            for (i, slot) in map.iter().enumerate() {
                if let Some(j) = slot {
                    ne.0[*j] += e.0[i];
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Replaces one variable by a polynomial in the same ring.
    pub fn subst(&self, name: &str, image: &Poly<F>) -> Poly<F> {
        let Some(idx) = self.vars.index_of(name) else {
            return self.clone();
        };
        let images: Vec<Poly<F>> = (0..self.vars.len())
            .map(|i| if i == idx { image.lifted_to(&self.vars) } else { Poly::var_at(&self.vars, i) })
            .collect();
        self.compose(&self.vars.clone(), &images)
    }

    /// Full evaluation at a point given for every variable.
    pub fn evaluate(&self, values: &[F]) -> F {
        assert_eq!(values.len(), self.vars.len());
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t = t * &values[i].pow(k as u32);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes constants for the named variables, keeping the ring.
    pub fn partial_eval(&self, assignment: &BTreeMap<String, F>) -> Poly<F> {
        let images: Vec<Poly<F>> = self
            .vars
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| match assignment.get(n) {
                Some(v) => Poly::constant(&self.vars, v.clone()),
                None => Poly::var_at(&self.vars, i),
            })
            .collect();
        self.compose(&self.vars.clone(), &images)
    }

    /// Exact evaluation at rational values; every occurring symbol must be assigned.
    pub fn specialize(&self, assignment: &BTreeMap<String, Rational>) -> Result<F, ScalarError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match assignment.get(name) {
                Some(v) => values.push(F::from(v.clone())),
                None if self.degree_in(i) == 0 => values.push(F::zero()),
                None => return Err(ScalarError::MissingSymbol(name.clone())),
            }
        }
        Ok(self.evaluate(&values))
    }

    /// Coefficients of successive powers of variable `var` (as polynomials in the same ring).
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly<F>> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero_in(&self.vars); deg + 1];
        for (e, c) in &self.terms {
            let k = e.0[var] as usize;
            let mut ne = e.clone();
            ne.0[var] = 0;
            out[k].add_term(ne, c.clone());
        }
        out
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::<G>::zero_in(&self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Finds the first variable that is present with positive degree.
    pub fn occurring_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.degree_in(i) > 0)
            .map(|i| self.vars.names()[i].clone())
            .collect()
    }

    /// Parses the text produced by `Display`, over the given ring.
    pub fn parse(text: &str, vars: &Vars) -> Result<Poly<F>, ParseError> {
        super::parse::parse_poly(text, vars)
    }

    pub(crate) fn push_term(&mut self, e: Vec<u16>, c: F) {
        self.add_term(Exponent(e.into_iter().collect()), c);
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        if self.vars.is_empty() || other.vars.is_empty() {
            return match (self.as_constant(), other.as_constant()) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            };
        }
        false
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.as_rational().is_some_and(|q| q.is_negative());
            let mag = if negative { -c.clone() } else { c.clone() };
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = &self.vars.names()[i];
                    if k == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let coef = if mag.needs_parens() { format!("({mag})") } else { mag.to_string() };
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{coef}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<F: Field> From<F> for Poly<F> {
    fn from(c: F) -> Self {
        Poly::constant(&Vars::empty(), c)
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: Poly<F>) -> Poly<F> {
        self.checked_add(&rhs).expect("polynomial ring mismatch")
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &'a Poly<F>) -> Poly<F> {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        self + (-rhs)
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &'a Poly<F>) -> Poly<F> {
        self + (-rhs.clone())
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        self.checked_mul(&rhs).expect("polynomial ring mismatch")
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &'a Poly<F>) -> Poly<F> {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { vars: self.vars, terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<F: Field> Ring for Poly<F> {
    fn zero() -> Self {
        Poly::zero_in(&Vars::empty())
    }

    fn one() -> Self {
        Poly::constant(&Vars::empty(), F::one())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn from_i64(n: i64) -> Self {
        Poly::constant(&Vars::empty(), F::from_i64(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::QuadExt;

    type P = Poly<Rational>;

    #[test]
    fn display_and_parse() {
        let vars = Vars::new(["k", "s"]);
        let k = P::var(&vars, "k");
        let s = P::var(&vars, "s");
        let p = k.clone() * &k * &s * P::from(Rational::from(3)) - P::from(Rational::new(1, 2));
        assert_eq!(p.to_string(), "3*k^2*s - 1/2");
        assert_eq!(P::parse("3*k^2*s - 1/2", &vars).unwrap(), p);
        assert_eq!(P::parse("-k + s", &vars).unwrap(), s - &k);
        assert!(P::parse("3*x", &vars).is_err());
        assert!(P::parse("3*k^", &vars).is_err());
    }

    #[test]
    fn quad_coefficients_print_in_parens() {
        let vars = Vars::new(["k"]);
        let c = QuadExt::new(Rational::new(7, 2), Rational::new(-1, 2), 19);
        let p = Poly::var(&vars, "k").scale(&c) + Poly::constant(&vars, QuadExt::from_i64(-2));
        let text = p.to_string();
        assert_eq!(text, "(7/2 - 1/2*sqrt(19))*k - 2");
        assert_eq!(Poly::<QuadExt>::parse(&text, &vars).unwrap(), p);
    }

    #[test]
    fn compose_and_subst() {
        let vars = Vars::new(["m", "s"]);
        let m = P::var(&vars, "m");
        let s = P::var(&vars, "s");
        let p = s.clone() + m.clone() * &m;
        let shifted = p.subst("s", &(s.clone() + &m));
        assert_eq!(shifted, s + m.clone() * &m + &m);
    }

    #[test]
    fn constants_mix_with_rings() {
        let vars = Vars::new(["k"]);
        let k = P::var(&vars, "k");
        assert_eq!(k.clone() + P::one() - P::one(), k);
        assert_eq!(P::constant(&vars, Rational::from(2)), P::from_i64(2));
    }

    #[test]
    fn coefficient_extraction() {
        let vars = Vars::new(["j", "m"]);
        let j = P::var(&vars, "j");
        let m = P::var(&vars, "m");
        let p = j.clone() * &j * &m + j.clone() * P::from_i64(2) + m.clone();
        let cs = p.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], m.clone());
        assert_eq!(cs[1], P::from_i64(2));
        assert_eq!(cs[2], m);
    }
}
