use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::{Monomial, UeaElement};
use crate::lie::Rank1Algebra;
use crate::scalar::Ring;

/// Which descent the rewriting step fixes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

type Expansion<C> = Arc<Vec<(Monomial, C)>>;

/// Rewrites with `e_y e_x -> e_x e_y + φ(x - y) e_{x+y}` for `y > x`,
/// memoizing the normal form of every monomial it meets.
pub struct Reducer<C> {
    algebra: Arc<Rank1Algebra<C>>,
    strategy: Strategy,
    cache: HashMap<Monomial, Expansion<C>>,
}

impl<C: Ring> Reducer<C> {
    pub fn new(algebra: &Arc<Rank1Algebra<C>>, strategy: Strategy) -> Self {
        Reducer { algebra: algebra.clone(), strategy, cache: HashMap::new() }
    }

    pub fn algebra(&self) -> &Arc<Rank1Algebra<C>> {
        &self.algebra
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    fn descent(&self, m: &Monomial) -> Option<usize> {
        let l = self.algebra.lattice();
        let mut it = (0..m.0.len().saturating_sub(1)).filter(|&i| l.cmp(&m.0[i], &m.0[i + 1]) == Ordering::Greater);
        match self.strategy {
            Strategy::Leftmost => it.next(),
            Strategy::Rightmost => it.next_back(),
        }
    }

    fn reduce(&mut self, m: &Monomial) -> Expansion<C> {
        if let Some(hit) = self.cache.get(m) {
            return hit.clone();
        }
        let result = match self.descent(m) {
            None => vec![(m.clone(), C::one())],
            Some(i) => {
                let (y, x) = (&m.0[i], &m.0[i + 1]);
                let c = self.algebra.phi(&x.sub(y));
                let mut swapped = m.clone();
                swapped.0.swap(i, i + 1);
                let mut acc: BTreeMap<Monomial, C> = BTreeMap::new();
                for (mono, v) in self.reduce(&swapped).iter() {
                    accumulate(&mut acc, mono, v.clone());
                }
                if !c.is_zero() {
                    let mut contracted = m.clone();
                    contracted.0[i] = x.add(y);
                    contracted.0.remove(i + 1);
                    for (mono, v) in self.reduce(&contracted).iter() {
                        accumulate(&mut acc, mono, v.clone() * &c);
                    }
                }
                acc.into_iter().collect()
            }
        };
        let result = Arc::new(result);
        self.cache.insert(m.clone(), result.clone());
        result
    }

    /// The PBW normal form of `x`.
    pub fn normal_form(&mut self, x: &UeaElement<C>) -> UeaElement<C> {
        assert!(
            Arc::ptr_eq(&self.algebra, x.algebra()) || *self.algebra == **x.algebra(),
            "reducer used with a foreign algebra"
        );
        let mut out = UeaElement::zero(x.algebra());
        for (m, c) in x.terms() {
            for (mono, v) in self.reduce(m).iter() {
                out.add_term(mono.clone(), v.clone() * c);
            }
        }
        out
    }
}

fn accumulate<C: Ring>(acc: &mut BTreeMap<Monomial, C>, m: &Monomial, v: C) {
    if v.is_zero() {
        return;
    }
    match acc.get_mut(m) {
        Some(old) => {
            let s = old.clone() + v;
            if s.is_zero() {
                acc.remove(m);
            } else {
                *old = s;
            }
        }
        None => {
            acc.insert(m.clone(), v);
        }
    }
}

/// Normal form with a fresh leftmost-descent reducer.
pub fn pbw_normal_form<C: Ring>(x: &UeaElement<C>) -> UeaElement<C> {
    Reducer::new(x.algebra(), Strategy::Leftmost).normal_form(x)
}
