//! Exhaustive identity suites for μ-maps, Hua maps, the three-μ sum formula
//! and quasi-inverses.

use super::Lms;
use crate::action::Perm;
use crate::report::Check;

type R = Result<(), String>;

impl Lms {
    fn w1(&self, x: usize) -> String {
        format!("x = {}", self.label(x))
    }

    fn w2(&self, x: usize, y: usize) -> String {
        format!("x = {}, y = {}", self.label(x), self.label(y))
    }

    /// Candidate τ's used to test τ-independence: τ, τ⁻¹ and μ_e for every
    /// unit e.
    fn alt_taus(&self) -> Vec<Perm> {
        let mut v = vec![self.tau.clone(), self.tau_inv.clone()];
        v.extend(self.units().iter().map(|&e| self.mu(e).clone()));
        v
    }

    /// Identities of the μ-maps over all units, plus agreement of the
    /// double-coset and formula definitions.
    pub fn mu_suite(&self) -> Vec<Check> {
        let n = self.len();
        let taus = self.alt_taus();
        let mut out = Vec::new();
        let each = |f: &dyn Fn(usize) -> bool| -> R {
            for &x in self.units() {
                if !f(x) {
                    return Err(self.w1(x));
                }
            }
            Ok(())
        };
        out.push(Check::new(
            "mu_double_coset_vs_formula",
            "mu_x = g alpha_x h = gamma_{(-x)tau^-1} alpha_x gamma_{-(x tau^-1)}",
            each(&|x| self.mu(x) == &self.mu_formula_for(x, &self.tau)),
        ));
        out.push(Check::new(
            "mu_swaps_basis",
            "0 mu_x = inf and inf mu_x = 0",
            each(&|x| self.mu(x).on(self.zero) == self.inf && self.mu(x).on(self.inf) == self.zero),
        ));
        out.push(Check::new(
            "mu_i_tau_independent",
            "mu_x does not depend on the choice of tau",
            each(&|x| taus.iter().all(|t| &self.mu_formula_for(x, t) == self.mu(x))),
        ));
        out.push(Check::new(
            "mu_ii",
            "mu_x = alpha^tau_{(-x)tau^-1} alpha_x alpha^tau_{-(x tau^-1)}",
            each(&|x| {
                let a = self.alpha(self.tau_inv.on(self.neg(x))).conj(&self.tau);
                let b = self.alpha(self.neg(self.tau_inv.on(x))).conj(&self.tau);
                &a.then(self.alpha(x)).then(&b) == self.mu(x)
            }),
        ));
        out.push(Check::new(
            "mu_iii",
            "mu_{-x} = mu_x^-1",
            each(&|x| self.mu(self.neg(x)) == &self.mu(x).inverse()),
        ));
        out.push(Check::new(
            "mu_iv",
            "mu_{x tau} = mu_{-x}^tau",
            each(&|x| self.mu(self.tau.on(x)) == &self.mu(self.neg(x)).conj(&self.tau)),
        ));
        out.push(Check::new(
            "mu_v",
            "mu_x = alpha_x alpha^tau_{-(x tau^-1)} alpha_{-~x}",
            each(&|x| {
                let b = self.alpha(self.neg(self.tau_inv.on(x))).conj(&self.tau);
                &Perm::word(n, &[self.alpha(x), &b, self.alpha(self.neg(self.tilde(x)))]) == self.mu(x)
            }),
        ));
        out.push(Check::new(
            "mu_vi",
            "~x = -((-x) mu_x)",
            each(&|x| self.tilde(x) == self.neg(self.mu(x).on(self.neg(x)))),
        ));
        out.push(Check::new(
            "mu_vii_tilde_tau_independent",
            "~x does not depend on the choice of tau",
            each(&|x| {
                let t0 = self.tilde(x);
                taus.iter().all(|t| {
                    let ti = t.inverse();
                    t.on(self.neg(ti.on(x))) == t0
                })
            }),
        ));
        out.push(Check::new(
            "mu_viii",
            "mu_{-x} = alpha_{-~x} mu_{-x} alpha_x mu_{-x} alpha_{~(-x)}",
            each(&|x| {
                let mx = self.mu(self.neg(x));
                let rhs = Perm::word(
                    n,
                    &[self.alpha(self.neg(self.tilde(x))), mx, self.alpha(x), mx, self.alpha(self.tilde(self.neg(x)))],
                );
                &rhs == mx
            }),
        ));
        out.push(Check::new(
            "hua_word_equals_tau_mu",
            "h_x = tau alpha_x tau^-1 alpha_{-(x tau^-1)} tau alpha_{-((-(x tau^-1))tau)} = tau mu_x",
            each(&|x| self.hua_word(x) == self.hua(x)),
        ));
        out
    }

    /// Identities of the Hua maps and the automorphism property.
    pub fn hua_suite(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let each = |f: &dyn Fn(usize) -> bool| -> R {
            for &x in self.units() {
                if !f(x) {
                    return Err(self.w1(x));
                }
            }
            Ok(())
        };
        let pairs = |f: &dyn Fn(usize, usize) -> bool| -> R {
            for &x in self.units() {
                for &y in self.units() {
                    if !f(x, y) {
                        return Err(self.w2(x, y));
                    }
                }
            }
            Ok(())
        };
        out.push(Check::new(
            "hua_fixes_basis",
            "h_x fixes 0 and inf",
            each(&|x| {
                let h = self.hua(x);
                h.fixes(self.zero) && h.fixes(self.inf)
            }),
        ));
        out.push(Check::new(
            "hua_i",
            "h_{x,tau^-1} = h_{x tau,tau}^-1",
            each(&|x| self.tau_inv.then(self.mu(x)) == self.hua(self.tau.on(x)).inverse()),
        ));
        out.push(Check::new(
            "hua_ii",
            "mu_{x h_y} = mu_x^{h_y}",
            pairs(&|x, y| {
                let hy = self.hua(y);
                self.mu(hy.on(x)) == &self.mu(x).conj(&hy)
            }),
        ));
        out.push(Check::new(
            "hua_iii",
            "h_{x tau} = h_{-x}^tau",
            each(&|x| self.hua(self.tau.on(x)) == self.hua(self.neg(x)).conj(&self.tau)),
        ));
        out.push(Check::new(
            "hua_iv",
            "h_{x h_y} = h_{-y} h_{x tau}^-1 h_y",
            pairs(&|x, y| {
                let hy = self.hua(y);
                let rhs = self.hua(self.neg(y)).then(&self.hua(self.tau.on(x)).inverse()).then(&hy);
                self.hua(hy.on(x)) == rhs
            }),
        ));
        let fin = self.finite_points();
        out.push(Check::new(
            "hua_automorphism",
            "alpha_y^{h_x} = alpha_{y h_x}",
            (|| {
                for &x in self.units() {
                    let hx = self.hua(x);
                    for &y in &fin {
                        if &self.alpha(y).conj(&hx) != self.alpha(hx.on(y)) {
                            return Err(self.w2(x, y));
                        }
                    }
                }
                Ok(())
            })(),
        ));
        out
    }

    /// The sum formula for units x ≁ y.
    pub fn sumform_suite(&self) -> Vec<Check> {
        let taus = self.alt_taus();
        let mut out = Vec::new();
        let pairs = |f: &dyn Fn(usize, usize) -> Result<bool, String>| -> R {
            for &x in self.units() {
                for &y in self.units() {
                    if self.equiv(x, y) {
                        continue;
                    }
                    match f(x, y) {
                        Ok(true) => {}
                        Ok(false) => return Err(self.w2(x, y)),
                        Err(e) => return Err(format!("{}: {e}", self.w2(x, y))),
                    }
                }
            }
            Ok(())
        };
        let z_of = |x: usize, y: usize, t: &Perm| -> usize {
            let ti = t.inverse();
            t.on(self.alpha(self.neg(ti.on(y))).on(ti.on(x)))
        };
        out.push(Check::new(
            "sumform_z_tau_independent",
            "z = x tau^-1 alpha_{-(y tau^-1)} tau is independent of tau",
            pairs(&|x, y| {
                let z = z_of(x, y, &self.tau);
                Ok(taus.iter().all(|t| z_of(x, y, t) == z))
            }),
        ));
        out.push(Check::new(
            "sumform_z",
            "z = x alpha_{-y} mu_y alpha_{~y}",
            pairs(&|x, y| {
                let z = z_of(x, y, &self.tau);
                let rhs = self.alpha(self.tilde(y)).on(self.mu(y).on(self.alpha(self.neg(y)).on(x)));
                Ok(z == rhs)
            }),
        ));
        out.push(Check::new(
            "sumform_tilde_z",
            "~z = y alpha_{-x} mu_x alpha_{~x}",
            pairs(&|x, y| {
                let z = z_of(x, y, &self.tau);
                if !self.is_unit(z) {
                    return Err(format!("z = {} is not a unit", self.label(z)));
                }
                let rhs = self.alpha(self.tilde(x)).on(self.mu(x).on(self.alpha(self.neg(x)).on(y)));
                Ok(self.tilde(z) == rhs)
            }),
        ));
        out.push(Check::new(
            "sumform_three_mu",
            "mu_y mu_z mu_{-x} = mu_{y alpha_{-x}}",
            pairs(&|x, y| {
                let z = z_of(x, y, &self.tau);
                if !self.is_unit(z) {
                    return Err(format!("z = {} is not a unit", self.label(z)));
                }
                let w = self.alpha(self.neg(x)).on(y);
                Ok(self.mu(y).then(self.mu(z)).then(self.mu(self.neg(x))) == *self.mu(w))
            }),
        ));
        out
    }

    /// Quasi-inverse identities over all pairs x, y ≁ ∞.
    pub fn quasi_inverse_suite(&self) -> Vec<Check> {
        let fin = self.finite_points();
        let mut out = Vec::new();
        let mut count = 0usize;
        let res = (|| {
            for &x in &fin {
                for &y in &fin {
                    let Some((l, r)) = self.quasi_inverse(x, y) else { continue };
                    count += 1;
                    if self.equiv(l, self.inf) || self.equiv(r, self.inf) {
                        return Err(format!("{}: quasi-inverse in class(inf)", self.w2(x, y)));
                    }
                    if self.equiv(x, self.zero) != self.equiv(r, self.zero)
                        || self.equiv(y, self.zero) != self.equiv(l, self.zero)
                    {
                        return Err(format!("{}: class of 0 not preserved", self.w2(x, y)));
                    }
                    let lhs = Perm::word(
                        self.len(),
                        &[self.alpha(l), self.gamma(x), self.alpha(y), self.gamma(r)],
                    );
                    if !self.equiv(y, self.zero) && lhs != self.mu(l).then(self.mu(y)) {
                        return Err(format!("{}: left identity", self.w2(x, y)));
                    }
                    if !self.equiv(x, self.zero) && lhs != self.tau_inv.then(self.mu(x)).then(self.mu(r)).then(&self.tau) {
                        return Err(format!("{}: right identity", self.w2(x, y)));
                    }
                }
            }
            Ok(())
        })();
        out.push(
            Check::new(
                "quasi_inverse",
                "alpha_{^x y} alpha_x^tau alpha_y alpha_{x^y}^tau = mu_{^x y} mu_y (y !~ 0), = (mu_x mu_{x^y})^tau (x !~ 0)",
                res,
            )
            .with_detail(format!("{count} quasi-invertible pairs")),
        );
        let zero_case = (|| {
            for &x in &fin {
                if !self.equiv(x, self.zero) {
                    continue;
                }
                for &y in &fin {
                    match self.quasi_inverse(x, y) {
                        Some((_, r)) if self.equiv(r, self.zero) => {}
                        _ => return Err(self.w2(x, y)),
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("quasi_inverse_zero_class", "x ~ 0 implies (x,y) quasi-invertible and x^y ~ 0", zero_case));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::p1_z9;
    use super::super::*;

    #[test]
    fn z9_suites_pass() {
        let m = Lms::construct(p1_z9()).unwrap();
        for c in m.mu_suite().into_iter().chain(m.hua_suite()).chain(m.sumform_suite()).chain(m.quasi_inverse_suite()) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn z9_quasi_inverse_example() {
        let m = Lms::construct(p1_z9()).unwrap();
        let x = m.point("[1,3]").unwrap();
        let y = m.point("[1,1]").unwrap();
        let (l, r) = m.quasi_inverse(x, y).unwrap();
        let lhs = Perm::word(12, &[m.alpha(l), m.gamma(x), m.alpha(y), m.gamma(r)]);
        assert_eq!(lhs, m.mu(l).then(m.mu(y)));
        // y ~ 0 here; the x !~ 0 form holds as mu_{x^y} mu_x, not mu_x mu_{x^y}
        let (l, r) = m.quasi_inverse(y, x).unwrap();
        let lhs = Perm::word(12, &[m.alpha(l), m.gamma(y), m.alpha(x), m.gamma(r)]);
        assert_eq!(lhs, m.mu(r).then(m.mu(y)));
        assert_ne!(lhs, m.mu(y).then(m.mu(r)));
        assert_eq!(lhs, m.tau_inv.then(m.mu(y)).then(m.mu(r)).then(&m.tau));
    }
}
