//! Axiom verification, the Hua subgroup theorem and the Bruhat decomposition.

use super::Lms;
use crate::action::{Perm, PermGroup};
use crate::report::Check;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet};

/// Result of the axiom suite.
pub struct AxiomReport {
    pub checks: Vec<Check>,
    pub group: Option<PermGroup>,
    /// first unit whose Hua map fails to normalize U, with the offending element
    pub witness: Option<(usize, Perm)>,
}

impl AxiomReport {
    pub fn is_local_moufang(&self) -> bool {
        self.witness.is_none() && self.checks.iter().all(Check::passed)
    }
}

const SAMPLES: usize = 200;

impl Lms {
    /// Every Hua word normalizes U; returns the first violation.
    pub fn hua_normalizes(&self) -> Result<(), (usize, Perm)> {
        for &x in self.units() {
            let h = self.hua_word(x);
            for g in self.u_generators() {
                let c = g.conj(&h);
                if !self.u_inf().contains(&c) {
                    return Err((x, c));
                }
            }
        }
        Ok(())
    }

    fn check_lm0(&self) -> Result<(), String> {
        let induced: Vec<HashSet<Perm>> = (0..self.len())
            .map(|x| self.root(x).elements().iter().map(|p| p.induced(&self.eq).unwrap()).collect())
            .collect();
        for x in 0..self.len() {
            let first = self.eq.members(self.eq.class_of(x))[0];
            if induced[x] != induced[first] {
                return Err(format!("x = {}, y = {}", self.label(first), self.label(x)));
            }
        }
        Ok(())
    }

    fn check_lm1(&self) -> Result<(), String> {
        for x in 0..self.len() {
            let rg = self.root(x);
            let off: Vec<usize> = (0..self.len()).filter(|&y| !self.equiv(x, y)).collect();
            if rg.order() != off.len() {
                return Err(format!("|U_{}| = {} but {} points lie off its class", self.label(x), rg.order(), off.len()));
            }
            let mut hit = vec![false; self.len()];
            for p in rg.elements() {
                if !p.fixes(x) {
                    return Err(format!("U_{} moves {}", self.label(x), self.label(x)));
                }
                let y = p.on(rg.reference);
                if self.equiv(x, y) || hit[y] {
                    return Err(format!("U_{} not sharply transitive (image {})", self.label(x), self.label(y)));
                }
                hit[y] = true;
            }
        }
        Ok(())
    }

    fn check_lm1_prime(&self) -> Result<(), String> {
        for x in 0..self.len() {
            let cx = self.eq.class_of(x);
            let bar = PermGroup::from_elements(
                self.n_classes(),
                self.root(x).elements().iter().map(|p| p.induced(&self.eq).unwrap()).collect(),
            );
            if bar.order() != self.n_classes() - 1 {
                return Err(format!("|induced U_{}| = {}", self.label(x), bar.order()));
            }
            let c0 = self.eq.class_of(self.root(x).reference);
            let mut hit = vec![false; self.n_classes()];
            for p in bar.elements() {
                if p.on(cx) != cx {
                    return Err(format!("induced U_{} moves its class", self.label(x)));
                }
                let c = p.on(c0);
                if c == cx || hit[c] {
                    return Err(format!("induced U_{} not sharply transitive", self.label(x)));
                }
                hit[c] = true;
            }
        }
        Ok(())
    }

    /// U_x^g = U_{xg}, tested on generators of U_x.
    fn lm2_at(&self, x: usize, g: &Perm) -> Result<(), String> {
        let target = self.root(g.on(x));
        for u in self.root_generators(x) {
            if !target.contains(&u.conj(g)) {
                return Err(format!("x = {}, g = {}", self.label(x), self.describe(g)));
            }
        }
        Ok(())
    }

    /// Runs (LM0), (LM1), (LM1′), the Hua normalization criterion and (LM2).
    ///
    /// (LM2) is always proved on the generators of G = ⟨U₀, U_∞⟩; when
    /// |G| ≤ cap it is also checked for every element of G, otherwise on
    /// seeded random elements.
    pub fn verify_axioms(&self, cap: usize, seed: u64) -> AxiomReport {
        let mut checks = Vec::new();
        let witness = self.hua_normalizes().err();
        checks.push(Check::new(
            "hua_maps_normalize_U",
            "M(U,tau) is local Moufang iff h_x normalizes U for all units x",
            match &witness {
                None => Ok(()),
                Some((x, c)) => Err(format!("unit {}: conjugate {} not in U", self.label(*x), self.describe(c))),
            },
        ));
        checks.push(Check::new("U_mu_equals_U0", "U^{mu_x} = U_0 for all units x", self.check_u_mu()));
        checks.push(Check::new("LM0", "x ~ y implies induced U_x = induced U_y", self.check_lm0()));
        checks.push(Check::new("LM1", "U_x fixes x and is sharply transitive off class(x)", self.check_lm1()));
        checks.push(Check::new(
            "LM1'",
            "induced U_x fixes class(x) and is sharply transitive on the other classes",
            self.check_lm1_prime(),
        ));
        let gens = self.g_generators();
        let gen_result = (|| {
            for x in 0..self.len() {
                for g in &gens {
                    self.lm2_at(x, g)?;
                }
            }
            Ok(())
        })();
        checks.push(Check::new("LM2_generators", "U_x^g = U_{xg} for g in U_0 and U_inf", gen_result));
        let group = self.little_group(cap).ok();
        match &group {
            Some(g) => {
                let all = (|| {
                    for p in g.elements() {
                        for x in 0..self.len() {
                            self.lm2_at(x, p)?;
                        }
                    }
                    Ok(())
                })();
                checks.push(
                    Check::new("LM2", "U_x^g = U_{xg} for all x in X and g in G", all)
                        .with_detail(format!("exhaustive over |G| = {}", g.order())),
                );
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut res = Ok(());
                for _ in 0..SAMPLES {
                    let mut p = Perm::identity(self.len());
                    for _ in 0..24 {
                        p = p.then(&gens[rng.gen_range(0..gens.len())]);
                    }
                    let x = rng.gen_range(0..self.len());
                    if let Err(e) = self.lm2_at(x, &p) {
                        res = Err(e);
                        break;
                    }
                }
                let c = match res {
                    Ok(()) => Check::sampled(
                        "LM2",
                        "U_x^g = U_{xg} for all x in X and g in G",
                        format!("|G| > cap {cap}; {SAMPLES} random elements, seed {seed}"),
                    ),
                    Err(w) => Check::fail("LM2", "U_x^g = U_{xg} for all x in X and g in G", w),
                };
                checks.push(c);
            }
        }
        AxiomReport { checks, group, witness }
    }

    fn check_u_mu(&self) -> Result<(), String> {
        for &x in self.units() {
            for g in self.u_generators() {
                if !self.u_zero().contains(&g.conj(self.mu(x))) {
                    return Err(format!("unit {}", self.label(x)));
                }
            }
        }
        Ok(())
    }

    /// U₀° = {γ_x : x ∼ 0}.
    pub fn u0_circ(&self) -> Vec<Perm> {
        (0..self.len()).filter(|&x| self.equiv(x, self.zero)).map(|x| self.gamma(x).clone()).collect()
    }
}

/// A factorization g = u₀·h·u_∞ (first shape) or g = u₀·h·τ·u₀° (second).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bruhat {
    pub u0: Perm,
    pub h: Perm,
    pub tail: Perm,
    pub second: bool,
}

impl Bruhat {
    pub fn product(&self, m: &Lms) -> Perm {
        if self.second {
            self.u0.then(&self.h).then(&m.tau).then(&self.tail)
        } else {
            self.u0.then(&self.h).then(&self.tail)
        }
    }
}

/// Splits g ∈ G according to whether 0g is equivalent to ∞.
pub fn decompose(m: &Lms, g: &Perm) -> Bruhat {
    let x = g.on(m.zero);
    if !m.equiv(x, m.inf) {
        let tail = m.alpha(x).clone();
        let (u0, h) = split_g0(m, &g.then(&tail.inverse()));
        Bruhat { u0, h, tail, second: false }
    } else {
        let tail = m.u_zero().from_reference_inf(m, x);
        let (u0, h) = split_g0(m, &g.then(&tail.inverse()).then(&m.tau_inv));
        Bruhat { u0, h, tail, second: true }
    }
}

/// Writes g ∈ G₀ as u₀h: first g = h·v with v ∈ U₀ read off from ∞g, then
/// u₀ = v^{h⁻¹}.
fn split_g0(m: &Lms, g: &Perm) -> (Perm, Perm) {
    let v = m.u_zero().from_reference_inf(m, g.on(m.inf));
    let h = g.then(&v.inverse());
    let u0 = v.conj(&h.inverse());
    (u0, h)
}

impl super::RootGroup {
    /// For U₀: the element mapping ∞ to y.
    fn from_reference_inf(&self, m: &Lms, y: usize) -> Perm {
        self.mapping(m.inf, y).expect("U_0 is regular off class(0)")
    }
}

/// Outcome of the Hua subgroup / two-point stabilizer theorem checks.
pub struct HuaTheorem {
    pub g_order: usize,
    pub h_order: usize,
    pub stab_order: usize,
    pub first_count: usize,
    pub second_count: usize,
    pub u0_circ: usize,
    pub checks: Vec<Check>,
}

impl Lms {
    /// Checks H = G_{0,∞}, G₀ = U₀H and the two-shape decomposition of G.
    pub fn verify_hua_theorem(&self, g: &PermGroup, cap: usize) -> Result<HuaTheorem, super::MoufangError> {
        let h = self.hua_subgroup(cap)?;
        let stab = g.stabilizer(&[self.zero, self.inf]);
        let mut checks = Vec::new();
        checks.push(Check::new(
            "H_equals_two_point_stabilizer",
            "H = G_{0,inf}",
            if h.same_set(&stab) {
                Ok(())
            } else {
                Err(format!("|H| = {}, |G_0,inf| = {}", h.order(), stab.order()))
            },
        ));
        let g0 = g.stabilizer(&[self.zero]);
        let g0_res = (|| {
            if g0.order() != self.u_zero().order() * h.order() {
                return Err(format!("|G_0| = {} != |U_0||H|", g0.order()));
            }
            for p in g0.elements() {
                let (u0, hh) = split_g0(self, p);
                if !self.u_zero().contains(&u0) || !h.contains(&hh) {
                    return Err(format!("g = {}", self.describe(p)));
                }
            }
            Ok(())
        })();
        checks.push(Check::new("G0_equals_U0_H", "G_0 = U_0 H", g0_res));

        let circ = self.u0_circ();
        let circ_set: HashSet<&Perm> = circ.iter().collect();
        let (mut first, mut second) = (0, 0);
        let dec = (|| {
            for p in g.elements() {
                let b = decompose(self, p);
                let tail_ok = if b.second { circ_set.contains(&b.tail) } else { self.u_inf().contains(&b.tail) };
                if !self.u_zero().contains(&b.u0) || !h.contains(&b.h) || !tail_ok || &b.product(self) != p {
                    return Err(format!("g = {}", self.describe(p)));
                }
                if b.second {
                    second += 1;
                } else {
                    first += 1;
                }
            }
            let (a, b) = (self.u_zero().order() * h.order(), circ.len());
            if first != a * self.u_inf().order() || second != a * b {
                return Err(format!("shape counts {first} + {second}"));
            }
            Ok(())
        })();
        checks.push(
            Check::new("bruhat_decomposition", "G = U_0 H U_inf  u  U_0 H tau U_0^o", dec)
                .with_detail(format!("{first} + {second}")),
        );

        // every triple product, both shapes: distinct, disjoint, inside G
        let uniq = (|| {
            let mut seen: HashMap<Perm, bool> = HashMap::new();
            for u0 in self.u_zero().elements() {
                for hh in h.elements() {
                    let a = u0.then(hh);
                    for t in self.u_inf().elements() {
                        if seen.insert(a.then(t), false).is_some() {
                            return Err("first shape not injective".to_string());
                        }
                    }
                    let at = a.then(&self.tau);
                    for t in &circ {
                        if seen.insert(at.then(t), true).is_some() {
                            return Err("shapes overlap or second shape not injective".to_string());
                        }
                    }
                }
            }
            if seen.len() != g.order() || !seen.keys().all(|p| g.contains(p)) {
                return Err(format!("products give {} elements, |G| = {}", seen.len(), g.order()));
            }
            Ok(())
        })();
        checks.push(Check::new(
            "bruhat_uniqueness",
            "factorizations are unique with disjoint images covering G",
            uniq,
        ));
        let id = Perm::identity(self.len());
        let b = decompose(self, &id);
        checks.push(Check::new(
            "bruhat_identity",
            "id = id . id . id",
            if !b.second && b.u0.is_identity() && b.h.is_identity() && b.tail.is_identity() {
                Ok(())
            } else {
                Err("identity factors are not trivial".into())
            },
        ));
        let all_mu_equal = self.units().iter().all(|&x| self.mu(x) == self.mu(self.units()[0]));
        checks.push(Check::new(
            "improper_criterion",
            "H trivial iff all mu-maps are equal",
            if (h.order() == 1) == all_mu_equal {
                Ok(())
            } else {
                Err(format!("|H| = {}, all mu equal = {all_mu_equal}", h.order()))
            },
        ));
        Ok(HuaTheorem {
            g_order: g.order(),
            h_order: h.order(),
            stab_order: stab.order(),
            first_count: first,
            second_count: second,
            u0_circ: circ.len(),
            checks,
        })
    }

    /// ⟨U_x, U_y⟩ = G for `count` random non-equivalent pairs.
    pub fn check_two_root_generation(&self, g: &PermGroup, count: usize, seed: u64) -> Result<(), String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        while done < count {
            let x = rng.gen_range(0..self.len());
            let y = rng.gen_range(0..self.len());
            if self.equiv(x, y) {
                continue;
            }
            let mut gens = self.root_generators(x);
            gens.extend(self.root_generators(y));
            let sub = PermGroup::closure(self.len(), &gens, g.order() + 1).map_err(|e| e.to_string())?;
            if sub.order() != g.order() {
                return Err(format!("<U_{}, U_{}> has order {}", self.label(x), self.label(y), sub.order()));
            }
            done += 1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::p1_z9;
    use super::super::*;

    #[test]
    fn z9_axioms_and_hua_theorem() {
        let m = Lms::construct(p1_z9()).unwrap();
        let ax = m.verify_axioms(DEFAULT_CAP, 0);
        for c in &ax.checks {
            assert!(c.passed(), "{c:?}");
        }
        let g = ax.group.unwrap();
        let t = m.verify_hua_theorem(&g, DEFAULT_CAP).unwrap();
        assert_eq!((t.g_order, t.h_order, t.stab_order), (324, 3, 3));
        assert_eq!((t.first_count, t.second_count), (9 * 3 * 9, 9 * 3 * 3));
        for c in &t.checks {
            assert!(c.passed(), "{c:?}");
        }
        assert!(m.check_two_root_generation(&g, 3, 0).is_ok());
    }
}
