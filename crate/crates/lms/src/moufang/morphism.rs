//! Homomorphisms of local Moufang sets, their θ-maps, and the quotient on
//! equivalence classes.

use super::{Lms, MoufangError, Seed};
use crate::action::{EquivSet, Perm};

/// θ_x : U_x → V_{xφ}, stored as indices into the element lists of the two
/// root groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theta {
    pub point: usize,
    pub image_point: usize,
    pub table: Vec<usize>,
}

impl Theta {
    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        self.table.iter().all(|&i| i < seen.len() && !std::mem::replace(&mut seen[i], true))
    }
}

fn index_in(m: &Lms, x: usize, p: &Perm) -> Option<usize> {
    let r = m.root(x);
    match r.by_ref[p.on(r.reference)] {
        u32::MAX => None,
        i => (r.elems[i as usize] == *p).then_some(i as usize),
    }
}

/// Checks that φ: X₁ → X₂ is a homomorphism: x ∼ x' ⟺ xφ ∼ x'φ, and for
/// every x and u ∈ U_x there is θ_x(u) ∈ V_{xφ} with (zu)φ = (zφ)θ_x(u) for
/// all z. Returns every θ_x, each verified to be a group homomorphism.
pub fn check_homomorphism(m1: &Lms, m2: &Lms, phi: &[usize]) -> Result<Vec<Theta>, String> {
    let n = m1.len();
    if phi.len() != n {
        return Err(format!("map has {} entries, expected {n}", phi.len()));
    }
    if let Some(x) = (0..n).find(|&x| phi[x] >= m2.len()) {
        return Err(format!("image of {} out of range", m1.label(x)));
    }
    for x in 0..n {
        for y in 0..n {
            if m1.equiv(x, y) != m2.equiv(phi[x], phi[y]) {
                return Err(format!(
                    "equivalence not preserved at ({}, {})",
                    m1.label(x),
                    m1.label(y)
                ));
            }
        }
    }
    let mut thetas = Vec::with_capacity(n);
    for x in 0..n {
        let root = m1.root(x);
        let xr = root.reference;
        let px = phi[x];
        let mut table = Vec::with_capacity(root.order());
        for u in root.elements() {
            let v = m2
                .root(px)
                .mapping(phi[xr], phi[u.on(xr)])
                .ok_or_else(|| format!("x = {}, u = {}: no element of V_(x phi)", m1.label(x), m1.describe(u)))?;
            if let Some(z) = (0..n).find(|&z| phi[u.on(z)] != v.on(phi[z])) {
                return Err(format!(
                    "x = {}, u = {}: fails at z = {}",
                    m1.label(x),
                    m1.describe(u),
                    m1.label(z)
                ));
            }
            table.push(index_in(m2, px, &v).expect("mapping returns an element of the root group"));
        }
        // θ_x is a homomorphism: θ(u g) = θ(u) θ(g) for generators g
        let v_el = m2.root(px).elements();
        for g in m1.root_generators(x) {
            let gi = index_in(m1, x, &g).ok_or("root generator outside its root group")?;
            for (ui, u) in root.elements().iter().enumerate() {
                let ug = index_in(m1, x, &u.then(&g)).ok_or("root group not closed")?;
                if v_el[table[ug]] != v_el[table[ui]].then(&v_el[table[gi]]) {
                    return Err(format!("theta at {} is not a homomorphism", m1.label(x)));
                }
            }
        }
        thetas.push(Theta { point: x, image_point: px, table });
    }
    Ok(thetas)
}

/// A bijective homomorphism whose θ-maps are all bijective.
pub fn check_isomorphism(m1: &Lms, m2: &Lms, phi: &[usize]) -> Result<Vec<Theta>, String> {
    if m1.len() != m2.len() {
        return Err(format!("sizes differ: {} vs {}", m1.len(), m2.len()));
    }
    let mut seen = vec![false; m2.len()];
    for (x, &y) in phi.iter().enumerate() {
        if y >= seen.len() || std::mem::replace(&mut seen[y], true) {
            return Err(format!("map is not injective at {}", m1.label(x)));
        }
    }
    let thetas = check_homomorphism(m1, m2, phi)?;
    if let Some(t) = thetas.iter().find(|t| !t.is_bijective()) {
        return Err(format!("theta at {} is not bijective", m1.label(t.point)));
    }
    Ok(thetas)
}

/// The Moufang set induced on equivalence classes, with π: x ↦ class(x).
pub fn quotient(m: &Lms) -> Result<(Lms, Vec<usize>), MoufangError> {
    let eq = &m.eq;
    let k = eq.n_classes();
    let mut u: Vec<Perm> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for p in m.u_inf().elements() {
        let q = p.induced(eq).expect("root group elements preserve the equivalence");
        if seen.insert(q.clone()) {
            u.push(q);
        }
    }
    let labels = (0..k).map(|c| format!("[{}]", m.label(eq.members(c)[0]))).collect();
    let seed = Seed {
        name: format!("{}/~", m.name),
        eq: EquivSet::discrete(k),
        labels,
        u,
        tau: m.tau.induced(eq).expect("tau preserves the equivalence"),
        inf: eq.class_of(m.inf),
    };
    let q = Lms::construct(seed)?;
    let pi = (0..m.len()).map(|x| eq.class_of(x)).collect();
    Ok((q, pi))
}

#[cfg(test)]
mod tests {
    use super::super::tests::p1_z9;
    use super::*;

    #[test]
    fn identity_is_isomorphism() {
        let m = Lms::construct(p1_z9()).unwrap();
        let id: Vec<usize> = (0..m.len()).collect();
        let th = check_isomorphism(&m, &m, &id).unwrap();
        for t in &th {
            assert!(t.table.iter().enumerate().all(|(i, &j)| i == j));
        }
    }

    #[test]
    fn z9_quotient_is_p1_f3() {
        let m = Lms::construct(p1_z9()).unwrap();
        let (q, pi) = quotient(&m).unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(q.u_inf().order(), 3);
        assert!(q.eq.is_discrete());
        let th = check_homomorphism(&m, &q, &pi).unwrap();
        // θ_x(u) = induced(u)
        for t in &th {
            for (i, u) in m.root(t.point).elements().iter().enumerate() {
                assert_eq!(&q.root(t.image_point).elements()[t.table[i]], &u.induced(&m.eq).unwrap());
            }
        }
    }

    #[test]
    fn non_homomorphism_detected() {
        let m = Lms::construct(p1_z9()).unwrap();
        let mut phi: Vec<usize> = (0..m.len()).collect();
        phi.swap(1, 4);
        assert!(check_homomorphism(&m, &m, &phi).is_err());
    }
}
