//! Local Moufang sets built from a group U and a permutation τ, with their
//! root groups, μ-maps and Hua maps.

mod axioms;
mod identities;
mod morphism;
mod special;

pub use axioms::{decompose, Bruhat, HuaTheorem};
pub use morphism::{check_homomorphism, check_isomorphism, quotient, Theta};
pub use special::SpecialInfo;

use crate::action::{ActionError, EquivSet, Perm, PermGroup};
use thiserror::Error;

/// Default bound on |G| for exhaustive quantification.
pub const DEFAULT_CAP: usize = 50_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoufangError {
    #[error("seed violates {axiom}: {detail}")]
    Seed { axiom: &'static str, detail: String },
    #[error("{0} is not a unit")]
    NotUnit(String),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("{0}")]
    Other(String),
}

fn seed_err(axiom: &'static str, detail: impl Into<String>) -> MoufangError {
    MoufangError::Seed { axiom, detail: detail.into() }
}

/// The input (X, ∼, U, τ) of the construction.
#[derive(Clone, Debug)]
pub struct Seed {
    pub name: String,
    pub eq: EquivSet,
    pub labels: Vec<String>,
    /// all elements of U
    pub u: Vec<Perm>,
    pub tau: Perm,
    pub inf: usize,
}

/// A root group U_x, regular on X∖class(x), with lookup by the image of a
/// reference point.
#[derive(Clone, Debug)]
pub struct RootGroup {
    pub point: usize,
    pub reference: usize,
    elems: Vec<Perm>,
    by_ref: Vec<u32>,
}

impl RootGroup {
    fn new(point: usize, reference: usize, elems: Vec<Perm>, n: usize) -> RootGroup {
        let mut by_ref = vec![u32::MAX; n];
        for (i, p) in elems.iter().enumerate() {
            let y = p.on(reference);
            if by_ref[y] == u32::MAX {
                by_ref[y] = i as u32;
            }
        }
        RootGroup { point, reference, elems, by_ref }
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elems
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    /// The element mapping the reference point to `y`.
    pub fn from_reference(&self, y: usize) -> Option<&Perm> {
        match self.by_ref[y] {
            u32::MAX => None,
            i => Some(&self.elems[i as usize]),
        }
    }

    /// The element mapping `a` to `b`, if any.
    pub fn mapping(&self, a: usize, b: usize) -> Option<Perm> {
        if a == self.reference {
            return self.from_reference(b).cloned();
        }
        let pa = self.elems.iter().find(|p| p.on(self.reference) == a)?;
        let pb = self.from_reference(b)?;
        let cand = pa.inverse().then(pb);
        (cand.on(a) == b && self.contains(&cand)).then_some(cand)
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.from_reference(p.on(self.reference)) == Some(p)
    }
}

/// A local (pre-)Moufang set M(U, τ) with all derived data.
#[derive(Clone, Debug)]
pub struct Lms {
    pub name: String,
    pub eq: EquivSet,
    pub labels: Vec<String>,
    pub inf: usize,
    pub zero: usize,
    pub tau: Perm,
    pub tau_inv: Perm,
    n: usize,
    alpha_idx: Vec<u32>,
    gammas: Vec<Option<Perm>>,
    roots: Vec<RootGroup>,
    units: Vec<usize>,
    mus: Vec<Option<Perm>>,
    u_gens: Vec<Perm>,
}

impl Lms {
    /// Runs the construction, checking (C1), (C1′) and (C2).
    pub fn construct(seed: Seed) -> Result<Lms, MoufangError> {
        let Seed { name, eq, labels, u, tau, inf } = seed;
        let n = eq.len();
        if labels.len() != n || tau.len() != n || u.iter().any(|p| p.len() != n) {
            return Err(seed_err("setup", "sizes of set, labels and permutations differ"));
        }
        if eq.n_classes() <= 2 {
            return Err(seed_err("setup", "at most two equivalence classes"));
        }
        if !tau.preserves(&eq) {
            return Err(seed_err("setup", "tau does not preserve the equivalence"));
        }
        for p in &u {
            if !p.preserves(&eq) {
                return Err(seed_err("setup", format!("element {p:?} of U does not preserve the equivalence")));
            }
        }
        if !PermGroup::is_subgroup_list(n, &u) {
            return Err(seed_err("setup", "U is not a group"));
        }
        let zero = tau.on(inf);
        if eq.equiv(zero, inf) {
            return Err(seed_err("C2", format!("inf.tau = {} is equivalent to inf", labels[zero])));
        }
        if tau.on(zero) != inf {
            return Err(seed_err("C2", format!("inf.tau^2 = {} != inf", labels[tau.on(zero)])));
        }
        // (C1)
        let mut alpha_idx = vec![u32::MAX; n];
        for (i, p) in u.iter().enumerate() {
            if !p.fixes(inf) {
                return Err(seed_err("C1", format!("U does not fix inf = {}", labels[inf])));
            }
            let x = p.on(zero);
            if alpha_idx[x] != u32::MAX {
                return Err(seed_err("C1", format!("two elements of U map 0 to {}", labels[x])));
            }
            alpha_idx[x] = i as u32;
        }
        for x in 0..n {
            if !eq.equiv(x, inf) && alpha_idx[x] == u32::MAX {
                return Err(seed_err("C1", format!("no element of U maps 0 to {}", labels[x])));
            }
        }
        // (C1')
        let ubar = PermGroup::from_elements(eq.n_classes(), u.iter().map(|p| p.induced(&eq).unwrap()).collect());
        let c0 = eq.class_of(zero);
        let ci = eq.class_of(inf);
        let mut hit = vec![false; eq.n_classes()];
        for p in ubar.elements() {
            let c = p.on(c0);
            if c == ci || hit[c] {
                return Err(seed_err("C1'", "induced U is not sharply transitive on the other classes"));
            }
            hit[c] = true;
        }
        if hit.iter().filter(|&&h| h).count() != eq.n_classes() - 1 {
            return Err(seed_err("C1'", "induced U is not transitive on the other classes"));
        }

        let tau_inv = tau.inverse();
        let gammas: Vec<Option<Perm>> = (0..n)
            .map(|x| {
                (alpha_idx[x] != u32::MAX).then(|| u[alpha_idx[x] as usize].conj(&tau))
            })
            .collect();
        let u_group = PermGroup::from_elements(n, u.clone());
        let u_gens = u_group.small_generating_set();
        let mut roots = Vec::with_capacity(n);
        for x in 0..n {
            let conj = if !eq.equiv(x, inf) {
                tau.then(&u[alpha_idx[x] as usize])
            } else {
                gammas[tau_inv.on(x)].clone().expect("x.tau^-1 is not equivalent to inf")
            };
            let elems: Vec<Perm> = u.iter().map(|p| p.conj(&conj)).collect();
            let reference = (0..n).find(|&y| !eq.equiv(x, y)).unwrap();
            roots.push(RootGroup::new(x, reference, elems, n));
        }
        let units: Vec<usize> =
            (0..n).filter(|&x| !eq.equiv(x, zero) && !eq.equiv(x, inf)).collect();
        let mut m = Lms {
            name,
            eq,
            labels,
            inf,
            zero,
            tau,
            tau_inv,
            n,
            alpha_idx,
            gammas,
            roots,
            units,
            mus: Vec::new(),
            u_gens,
        };
        m.mus = (0..n).map(|x| m.is_unit(x).then(|| m.mu_double_coset(x))).collect();
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn point(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.eq.equiv(x, y)
    }

    pub fn n_classes(&self) -> usize {
        self.eq.n_classes()
    }

    pub fn is_unit(&self, x: usize) -> bool {
        !self.equiv(x, self.zero) && !self.equiv(x, self.inf)
    }

    /// Units in point order.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    /// Points not equivalent to ∞, in point order.
    pub fn finite_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| !self.equiv(x, self.inf)).collect()
    }

    /// Points not equivalent to 0.
    pub fn cofinite_points(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| !self.equiv(x, self.zero)).collect()
    }

    pub fn root(&self, x: usize) -> &RootGroup {
        &self.roots[x]
    }

    pub fn u_inf(&self) -> &RootGroup {
        &self.roots[self.inf]
    }

    pub fn u_zero(&self) -> &RootGroup {
        &self.roots[self.zero]
    }

    /// A small generating set of U_∞.
    pub fn u_generators(&self) -> &[Perm] {
        &self.u_gens
    }

    /// Generators of U_x obtained by conjugating those of U_∞.
    pub fn root_generators(&self, x: usize) -> Vec<Perm> {
        let c = self.root_conjugator(x);
        self.u_gens.iter().map(|g| g.conj(&c)).collect()
    }

    /// An element c with U_x = U_∞^c and ∞c = x.
    pub fn root_conjugator(&self, x: usize) -> Perm {
        if !self.equiv(x, self.inf) {
            self.tau.then(self.alpha(x))
        } else {
            self.gamma(self.tau_inv.on(x)).clone()
        }
    }

    /// α_x, the element of U_∞ with 0α_x = x.
    pub fn alpha(&self, x: usize) -> &Perm {
        assert!(!self.equiv(x, self.inf), "alpha of a point equivalent to inf");
        &self.roots[self.inf].elems[self.alpha_idx[x] as usize]
    }

    /// γ_x = α_x^τ.
    pub fn gamma(&self, x: usize) -> &Perm {
        self.gammas[x].as_ref().expect("gamma of a point equivalent to inf")
    }

    /// −x = 0α_x⁻¹.
    pub fn neg(&self, x: usize) -> usize {
        self.alpha(x).inverse().on(self.zero)
    }

    /// x + y := 0α_xα_y.
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.alpha(y).on(x)
    }

    /// ~x = (−(xτ⁻¹))τ.
    pub fn tilde(&self, x: usize) -> usize {
        self.tau.on(self.neg(self.tau_inv.on(x)))
    }

    fn check_unit(&self, x: usize) -> Result<(), MoufangError> {
        if self.is_unit(x) {
            Ok(())
        } else {
            Err(MoufangError::NotUnit(self.labels[x].clone()))
        }
    }

    /// μ_x = gα_xh with g, h ∈ U₀, ∞g = −x and xh = ∞.
    fn mu_double_coset(&self, x: usize) -> Perm {
        let u0 = self.u_zero();
        let g = u0.mapping(self.inf, self.neg(x)).expect("U_0 is transitive off class(0)");
        let h = u0.mapping(self.inf, x).expect("U_0 is transitive off class(0)").inverse();
        g.then(self.alpha(x)).then(&h)
    }

    /// μ_x by the construction formula γ_{(−x)τ⁻¹} α_x γ_{−(xτ⁻¹)}.
    pub fn mu_formula(&self, x: usize) -> Result<Perm, MoufangError> {
        self.check_unit(x)?;
        Ok(self.mu_formula_for(x, &self.tau))
    }

    /// The same formula relative to another permutation t swapping 0 and ∞.
    pub fn mu_formula_for(&self, x: usize, t: &Perm) -> Perm {
        let ti = t.inverse();
        let g1 = self.alpha(ti.on(self.neg(x))).conj(t);
        let g2 = self.alpha(self.neg(ti.on(x))).conj(t);
        g1.then(self.alpha(x)).then(&g2)
    }

    /// The μ-map of a unit.
    pub fn mu(&self, x: usize) -> &Perm {
        self.mus[x].as_ref().unwrap_or_else(|| panic!("mu of non-unit {}", self.labels[x]))
    }

    pub fn try_mu(&self, x: usize) -> Result<&Perm, MoufangError> {
        self.check_unit(x)?;
        Ok(self.mu(x))
    }

    /// h_x = τμ_x.
    pub fn hua(&self, x: usize) -> Perm {
        self.tau.then(self.mu(x))
    }

    pub fn try_hua(&self, x: usize) -> Result<Perm, MoufangError> {
        self.check_unit(x)?;
        Ok(self.hua(x))
    }

    /// The six-factor Hua word τα_xτ⁻¹α_{−(xτ⁻¹)}τα_{−((−(xτ⁻¹))τ)}, valid
    /// before (LM2) is known.
    pub fn hua_word(&self, x: usize) -> Perm {
        let a = self.tau_inv.on(x);
        let c = self.tau.on(self.neg(a));
        Perm::word(
            self.n,
            &[&self.tau, self.alpha(x), &self.tau_inv, self.alpha(self.neg(a)), &self.tau, self.alpha(self.neg(c))],
        )
    }

    /// x·k = 0α_x^k.
    pub fn times(&self, x: usize, k: usize) -> usize {
        let a = self.alpha(x);
        (0..k).fold(self.zero, |p, _| a.on(p))
    }

    /// x·̃k = ∞γ_{xτ⁻¹}^k, for x ≁ 0.
    pub fn times_tilde(&self, x: usize, k: usize) -> usize {
        let g = self.gamma(self.tau_inv.on(x));
        (0..k).fold(self.inf, |p, _| g.on(p))
    }

    /// The unique y ≁ ∞ with y·k = x.
    pub fn div(&self, x: usize, k: usize) -> Result<usize, MoufangError> {
        let sols: Vec<usize> = self.finite_points().into_iter().filter(|&y| self.times(y, k) == x).collect();
        match sols.as_slice() {
            [y] => Ok(*y),
            [] => Err(MoufangError::Other(format!("{} is not {k}-divisible", self.labels[x]))),
            _ => Err(MoufangError::Other(format!("{} is not uniquely {k}-divisible", self.labels[x]))),
        }
    }

    /// The unique y ≁ 0 with y·̃k = x.
    pub fn div_tilde(&self, x: usize, k: usize) -> Result<usize, MoufangError> {
        let sols: Vec<usize> = self.cofinite_points().into_iter().filter(|&y| self.times_tilde(y, k) == x).collect();
        match sols.as_slice() {
            [y] => Ok(*y),
            _ => Err(MoufangError::Other(format!("{} is not uniquely tilde-{k}-divisible", self.labels[x]))),
        }
    }

    /// Whether (x, y) is quasi-invertible (x, y ≁ ∞).
    pub fn quasi_invertible(&self, x: usize, y: usize) -> bool {
        !self.equiv(self.tau.on(x), self.neg(y)) || self.equiv(x, self.zero) || self.equiv(y, self.zero)
    }

    /// Left and right quasi-inverses (ˣy, xʸ), or None.
    pub fn quasi_inverse(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        if self.equiv(x, self.inf) || self.equiv(y, self.inf) || !self.quasi_invertible(x, y) {
            return None;
        }
        let left = self.gamma(self.neg(x)).on(self.neg(y));
        let right = self.neg(self.tau_inv.on(self.alpha(y).on(self.tau.on(x))));
        Some((left, right))
    }

    /// The little projective group ⟨U₀, U_∞⟩, by closure.
    pub fn little_group(&self, cap: usize) -> Result<PermGroup, MoufangError> {
        Ok(PermGroup::closure(self.n, &self.g_generators(), cap)?)
    }

    /// Generators of G: those of U_∞ and their τ-conjugates in U₀.
    pub fn g_generators(&self) -> Vec<Perm> {
        let mut gens = self.u_gens.clone();
        gens.extend(self.root_generators(self.zero));
        gens
    }

    /// The Hua subgroup ⟨μ_xμ_y⟩.
    pub fn hua_subgroup(&self, cap: usize) -> Result<PermGroup, MoufangError> {
        let mut gens: Vec<Perm> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for &x in &self.units {
            for &y in &self.units {
                let p = self.mu(x).then(self.mu(y));
                if seen.insert(p.clone()) {
                    gens.push(p);
                }
            }
        }
        let full = PermGroup::closure(self.n, &gens, cap)?;
        Ok(full)
    }

    /// Description of a permutation for witnesses.
    pub fn describe(&self, p: &Perm) -> String {
        let parts: Vec<String> = (0..self.n)
            .filter(|&x| p.on(x) != x)
            .take(6)
            .map(|x| format!("{}->{}", self.labels[x], self.labels[p.on(x)]))
            .collect();
        if parts.is_empty() {
            "id".into()
        } else {
            parts.join(" ")
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The projective line over Z/9 built by hand, independent of the
    /// `projective` module: points [1,r] (0..9) then [3m,1] (9..12).
    pub fn p1_z9() -> Seed {
        let n = 9usize;
        let mut pts: Vec<(usize, usize)> = (0..n).map(|r| (1, r)).collect();
        pts.extend([0usize, 3, 6].iter().map(|&m| (m, 1)));
        let norm = |a: usize, b: usize| -> usize {
            let inv = |u: usize| (1..n).find(|&v| u * v % n == 1);
            if let Some(ia) = inv(a % n) {
                b * ia % n
            } else {
                let ib = inv(b % n).unwrap();
                n + (a * ib % n) / 3
            }
        };
        let act = |m: [usize; 4]| {
            Perm::from_fn(pts.len(), |i| {
                let (a, b) = pts[i];
                norm((a * m[0] + b * m[2]) % n, (a * m[1] + b * m[3]) % n)
            })
            .unwrap()
        };
        let u: Vec<Perm> = (0..n).map(|r| act([1, r, 0, 1])).collect();
        let tau = act([0, n - 1, 1, 0]);
        let labels: Vec<String> = pts.iter().map(|(a, b)| format!("[{a},{b}]")).collect();
        let classes: Vec<usize> = pts.iter().map(|&(a, b)| if a == 1 { b % 3 } else { 3 }).collect();
        Seed { name: "P1(Z/9)".into(), eq: EquivSet::from_labels(&classes), labels, u, tau, inf: 9 }
    }

    #[test]
    fn z9_basic_data() {
        let m = Lms::construct(p1_z9()).unwrap();
        assert_eq!(m.len(), 12);
        assert_eq!(m.zero, 0);
        assert_eq!(m.units().len(), 6);
        for x in 0..12 {
            assert_eq!(m.root(x).order(), 9);
        }
        let one = m.point("[1,1]").unwrap();
        let two = m.point("[1,2]").unwrap();
        assert_eq!(m.add(one, two), m.point("[1,3]").unwrap());
        assert_eq!(m.neg(two), m.point("[1,7]").unwrap());
        assert_eq!(m.times(two, 2), m.point("[1,4]").unwrap());
        // [1,2] mu_[1,1] = [1,-1/2] = [1,4]
        assert_eq!(m.mu(one).on(two), m.point("[1,4]").unwrap());
        for &x in m.units() {
            assert_eq!(m.mu(x), &m.mu_formula(x).unwrap());
            assert_eq!(m.mu(x).on(m.zero), m.inf);
            assert_eq!(m.mu(x).on(m.inf), m.zero);
        }
        assert_eq!(m.little_group(DEFAULT_CAP).unwrap().order(), 324);
        assert_eq!(m.hua_subgroup(DEFAULT_CAP).unwrap().order(), 3);
    }

    #[test]
    fn seed_c2_violation() {
        let mut s = p1_z9();
        // a τ fixing ∞ violates (C2)
        s.tau = Perm::identity(12);
        match Lms::construct(s) {
            Err(MoufangError::Seed { axiom, .. }) => assert_eq!(axiom, "C2"),
            other => panic!("expected C2 error, got {other:?}"),
        }
    }
}
