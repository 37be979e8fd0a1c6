use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::scalar::Ring;

/// A point of an index lattice, stored in the lattice's coordinate order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Point(pub SmallVec<[i64; 6]>);

impl Point {
    pub fn new(coords: &[i64]) -> Self {
        Point(coords.iter().copied().collect())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Point {
        Point(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

/// A free abelian group `Z^rank` with named generators.
///
/// Generators are either concrete axes or formal symbols (`k`, `s`, ...).
/// Symbols are stored first, so the lexicographic order treats them as
/// dominating every concrete offset: `k - 5 > 3` whatever the integers.
/// Lexicographic order on coordinates is a translation-invariant total order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexLattice {
    names: Vec<String>,
    symbolic: Vec<bool>,
}

impl IndexLattice {
    /// `Z` with the single concrete generator `1`.
    pub fn integers() -> Self {
        IndexLattice { names: vec!["1".into()], symbolic: vec![false] }
    }

    /// `Z^n` with concrete axes `a1..an`.
    pub fn axes(n: usize) -> Self {
        IndexLattice { names: (1..=n).map(|i| format!("a{i}")).collect(), symbolic: vec![false; n] }
    }

    /// Formal symbols followed by the concrete axes of `base`.
    pub fn with_symbols(symbols: &[&str], base: &IndexLattice) -> Self {
        let mut names: Vec<String> = symbols.iter().map(|s| s.to_string()).collect();
        let mut symbolic = vec![true; symbols.len()];
        names.extend(base.names.iter().cloned());
        symbolic.extend(base.symbolic.iter().copied());
        IndexLattice { names, symbolic }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_symbolic(&self) -> bool {
        self.symbolic.iter().any(|&s| s)
    }

    pub fn zero(&self) -> Point {
        Point(SmallVec::from_elem(0, self.rank()))
    }

    pub fn generator(&self, name: &str) -> Point {
        let idx = self.names.iter().position(|n| n == name).unwrap_or_else(|| panic!("no generator `{name}`"));
        let mut p = self.zero();
        p.0[idx] = 1;
        p
    }

    /// The point with the given concrete-axis coordinates and no symbolic part.
    pub fn concrete(&self, coords: &[i64]) -> Point {
        let mut p = self.zero();
        let mut it = coords.iter();
        for (i, sym) in self.symbolic.iter().enumerate() {
            if !sym {
                p.0[i] = *it.next().expect("too few concrete coordinates");
            }
        }
        assert!(it.next().is_none(), "too many concrete coordinates");
        p
    }

    /// Concrete-axis coordinates of a point.
    pub fn concrete_part(&self, p: &Point) -> Vec<i64> {
        self.symbolic.iter().zip(&p.0).filter(|(s, _)| !**s).map(|(_, &c)| c).collect()
    }

    pub fn cmp(&self, a: &Point, b: &Point) -> Ordering {
        a.0.cmp(&b.0)
    }

    /// Evaluates the linear map sending generator `i` to `images[i]`.
    pub fn evaluate<C: Ring>(&self, p: &Point, images: &[C]) -> C {
        assert_eq!(images.len(), self.rank());
        let mut acc = C::zero();
        for (&c, img) in p.0.iter().zip(images) {
            if c != 0 {
                acc = acc + C::from_i64(c) * img;
            }
        }
        acc
    }

    pub fn display(&self, p: &Point) -> String {
        PointDisplay { lattice: self, point: p }.to_string()
    }
}

struct PointDisplay<'a> {
    lattice: &'a IndexLattice,
    point: &'a Point,
}

impl fmt::Display for PointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.lattice;
        // Plain integer tuples for concrete lattices.
        if !l.is_symbolic() {
            let parts: Vec<String> = self.point.0.iter().map(|c| c.to_string()).collect();
            return write!(f, "{}", parts.join(","));
        }
        let mut first = true;
        for ((name, &sym), &c) in l.names.iter().zip(&l.symbolic).zip(&self.point.0) {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            let body = match (sym, mag) {
                (true, 1) => name.clone(),
                (true, _) => format!("{mag}{name}"),
                (false, _) if name == "1" => mag.to_string(),
                (false, 1) => name.clone(),
                (false, _) => format!("{mag}{name}"),
            };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, "{}{body}", if c < 0 { "-" } else { "+" })?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_dominate_concrete_offsets() {
        let l = IndexLattice::with_symbols(&["k", "s"], &IndexLattice::integers());
        let k_minus_5 = l.generator("k").sub(&l.concrete(&[5]));
        let three = l.concrete(&[3]);
        assert_eq!(l.cmp(&k_minus_5, &three), Ordering::Greater);
        assert_eq!(l.display(&k_minus_5), "k-5");
    }

    #[test]
    fn order_is_translation_invariant() {
        let l = IndexLattice::with_symbols(&["k"], &IndexLattice::integers());
        let pts: Vec<Point> = (-2..=2)
            .flat_map(|a| (-2..=2).map(move |b| Point::new(&[a, b])))
            .collect();
        for x in &pts {
            for y in &pts {
                for z in &pts {
                    assert_eq!(l.cmp(x, y), l.cmp(&x.add(z), &y.add(z)));
                }
            }
        }
    }
}
