//! Sets with an equivalence relation, permutations acting on the right, and
//! permutation groups generated by breadth-first closure.

use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("permutations act on sets of different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

/// A finite set `0..n` with a class index per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivSet {
    class: Vec<u32>,
    members: Vec<Vec<usize>>,
}

impl EquivSet {
    /// Builds from an arbitrary class labelling; classes are renumbered in
    /// order of their first point.
    pub fn from_labels<T: Eq + std::hash::Hash + Clone>(labels: &[T]) -> EquivSet {
        let mut ids: HashMap<T, u32> = HashMap::new();
        let mut class = Vec::with_capacity(labels.len());
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let next = ids.len() as u32;
            let c = *ids.entry(l.clone()).or_insert(next);
            if c as usize == members.len() {
                members.push(Vec::new());
            }
            members[c as usize].push(i);
            class.push(c);
        }
        EquivSet { class, members }
    }

    /// Equality as the equivalence relation.
    pub fn discrete(n: usize) -> EquivSet {
        EquivSet::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }

    pub fn n_classes(&self) -> usize {
        self.members.len()
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class[x] as usize
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn is_discrete(&self) -> bool {
        self.members.len() == self.class.len()
    }
}

/// A permutation of `0..n`; `p.on(x)` is the image x·p.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    /// Builds from an image function, checking bijectivity.
    pub fn from_fn(n: usize, f: impl Fn(usize) -> usize) -> Option<Perm> {
        let img: Vec<u32> = (0..n).map(|x| f(x) as u32).collect();
        Perm::from_images(img)
    }

    pub fn from_images(img: Vec<u32>) -> Option<Perm> {
        let mut seen = vec![false; img.len()];
        for &y in &img {
            let y = y as usize;
            if y >= img.len() || seen[y] {
                return None;
            }
            seen[y] = true;
        }
        Some(Perm(img))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn on(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self` then `other`: x·(pq) = (x·p)·q.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "permutations on different sets");
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn compose(&self, other: &Perm) -> Result<Perm, ActionError> {
        if self.len() != other.len() {
            return Err(ActionError::SizeMismatch(self.len(), other.len()));
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    /// Conjugate h⁻¹·self·h.
    pub fn conj(&self, h: &Perm) -> Perm {
        h.inverse().then(self).then(h)
    }

    pub fn pow(&self, k: usize) -> Perm {
        let mut acc = Perm::identity(self.len());
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.on(x) == x
    }

    pub fn preserves(&self, eq: &EquivSet) -> bool {
        self.induced(eq).is_some()
    }

    /// The permutation of classes, if `self` maps classes onto classes.
    pub fn induced(&self, eq: &EquivSet) -> Option<Perm> {
        let k = eq.n_classes();
        let mut img = vec![u32::MAX; k];
        for x in 0..self.len() {
            let c = eq.class_of(x);
            let d = eq.class_of(self.on(x)) as u32;
            if img[c] == u32::MAX {
                img[c] = d;
            } else if img[c] != d {
                return None;
            }
        }
        Perm::from_images(img)
    }

    /// Product of a word, left to right.
    pub fn word(n: usize, factors: &[&Perm]) -> Perm {
        factors.iter().fold(Perm::identity(n), |acc, p| acc.then(p))
    }
}

/// A finite permutation group with its elements in deterministic order.
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    gens: Vec<Perm>,
    elems: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl PermGroup {
    /// Breadth-first closure of `gens` on `n` points. Elements appear in
    /// discovery order, with generators tried in the given order.
    pub fn closure(n: usize, gens: &[Perm], cap: usize) -> Result<PermGroup, ActionError> {
        for g in gens {
            if g.len() != n {
                return Err(ActionError::SizeMismatch(n, g.len()));
            }
        }
        let id = Perm::identity(n);
        let mut elems = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let p = elems[i].then(g);
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(ActionError::CapExceeded(cap));
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        Ok(PermGroup { n, gens: gens.to_vec(), elems, index })
    }

    /// Wraps a list already known to be a group (duplicates dropped).
    pub fn from_elements(n: usize, list: Vec<Perm>) -> PermGroup {
        let mut elems = Vec::new();
        let mut index = HashMap::new();
        for p in list {
            if !index.contains_key(&p) {
                index.insert(p.clone(), elems.len());
                elems.push(p);
            }
        }
        PermGroup { n, gens: elems.clone(), elems, index }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elems
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// True if the element list is closed under products and contains the
    /// identity.
    pub fn is_closed(&self) -> bool {
        if !self.contains(&Perm::identity(self.n)) {
            return false;
        }
        self.elems.iter().all(|a| self.gens.iter().all(|g| self.contains(&a.then(g))))
            && self.gens.iter().all(|g| self.contains(g))
    }

    /// Closed under all pairwise products (quadratic; for small lists).
    pub fn is_subgroup_list(n: usize, list: &[Perm]) -> bool {
        let g = PermGroup::from_elements(n, list.to_vec());
        g.contains(&Perm::identity(n)) && list.iter().all(|a| list.iter().all(|b| g.contains(&a.then(b))))
    }

    /// Elements fixing every point in `points`.
    pub fn stabilizer(&self, points: &[usize]) -> PermGroup {
        let list: Vec<Perm> = self
            .elems
            .iter()
            .filter(|p| points.iter().all(|&x| p.fixes(x)))
            .cloned()
            .collect();
        PermGroup::from_elements(self.n, list)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for p in &self.elems {
            let y = p.on(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn same_set(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.elems.iter().all(|p| other.contains(p))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| self.gens[..i].iter().all(|b| a.then(b) == b.then(a)))
    }

    /// Images of the generators under the class map, deduplicated, as a
    /// group on classes.
    pub fn induced(&self, eq: &EquivSet) -> Option<PermGroup> {
        let mut list = Vec::with_capacity(self.elems.len());
        for p in &self.elems {
            list.push(p.induced(eq)?);
        }
        Some(PermGroup::from_elements(eq.n_classes(), list))
    }

    /// A small generating set, picked greedily in element order.
    pub fn small_generating_set(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut span = PermGroup::closure(self.n, &gens, usize::MAX).expect("no cap");
        for p in &self.elems {
            if !span.contains(p) {
                gens.push(p.clone());
                span = PermGroup::closure(self.n, &gens, usize::MAX).expect("no cap");
                if span.order() == self.order() {
                    break;
                }
            }
        }
        gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, k: usize) -> Perm {
        Perm::from_fn(n, |x| (x + k) % n).unwrap()
    }

    #[test]
    fn right_action_convention() {
        let a = Perm(vec![1, 2, 0]);
        let b = Perm(vec![0, 2, 1]);
        let ab = a.then(&b);
        for x in 0..3 {
            assert_eq!(ab.on(x), b.on(a.on(x)));
        }
        assert!(a.then(&a.inverse()).is_identity());
        assert_eq!(Perm::identity(3).then(&a), a);
    }

    #[test]
    fn closure_orders() {
        let g = PermGroup::closure(6, &[cyc(6, 1)], 100).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.is_closed());
        let t = PermGroup::closure(4, &[Perm::identity(4)], 10).unwrap();
        assert_eq!(t.order(), 1);
        let s = PermGroup::closure(5, &[cyc(5, 1), Perm(vec![1, 0, 2, 3, 4])], 200).unwrap();
        assert_eq!(s.order(), 120);
        assert_eq!(s.stabilizer(&[0, 1]).order(), 6);
        assert_eq!(
            PermGroup::closure(5, &[cyc(5, 1), Perm(vec![1, 0, 2, 3, 4])], 50).unwrap_err(),
            ActionError::CapExceeded(50)
        );
    }

    #[test]
    fn induced_on_classes() {
        let eq = EquivSet::from_labels(&[0, 0, 1, 1]);
        let swap = Perm(vec![2, 3, 0, 1]);
        assert_eq!(swap.induced(&eq).unwrap(), Perm(vec![1, 0]));
        assert!(Perm(vec![0, 2, 1, 3]).induced(&eq).is_none());
        assert!(Perm::identity(4).induced(&eq).unwrap().is_identity());
    }

    #[test]
    fn small_generators() {
        let g = PermGroup::closure(6, &[cyc(6, 1), cyc(6, 2), cyc(6, 3)], 100).unwrap();
        let gens = g.small_generating_set();
        assert_eq!(PermGroup::closure(6, &gens, 100).unwrap().order(), 6);
        assert!(gens.len() <= 2);
    }
}
