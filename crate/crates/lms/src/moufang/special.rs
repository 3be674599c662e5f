//! Special local Moufang sets: μ-involutions, k-divisibility and the
//! paired ·/·̃ structure.

use super::Lms;
use crate::action::Perm;
use crate::report::Check;

type R = Result<(), String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpecialInfo {
    pub special: bool,
    pub abelian: bool,
    pub classes: usize,
    /// x·2 is a unit for every unit x
    pub doubles_units: bool,
}

impl SpecialInfo {
    /// Hypotheses under which μ-maps are involutions.
    pub fn involutive(&self) -> bool {
        self.special && self.abelian && self.classes > 3
    }

    /// Hypotheses of the ℓ-scaling laws with n = 2.
    pub fn scaling(&self) -> bool {
        self.special && self.abelian && self.doubles_units
    }
}

/// Halving tables for · and ·̃, indexed by point.
struct Halves {
    half: Vec<Option<usize>>,
    half_tilde: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug)]
enum Ell {
    Two,
    Half,
}

impl Ell {
    fn inv(self) -> Ell {
        match self {
            Ell::Two => Ell::Half,
            Ell::Half => Ell::Two,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Ell::Two => "2",
            Ell::Half => "1/2",
        }
    }
}

impl Lms {
    /// ~x = −x for all units.
    pub fn is_special(&self) -> bool {
        self.units().iter().all(|&x| self.tilde(x) == self.neg(x))
    }

    /// Whether U_∞ is abelian (checked on generators).
    pub fn u_inf_abelian(&self) -> bool {
        let g = self.u_generators();
        g.iter().all(|a| g.iter().all(|b| a.then(b) == b.then(a)))
    }

    pub fn special_info(&self) -> SpecialInfo {
        SpecialInfo {
            special: self.is_special(),
            abelian: self.u_inf_abelian(),
            classes: self.n_classes(),
            doubles_units: self.units().iter().all(|&x| self.is_unit(self.times(x, 2))),
        }
    }

    fn halves(&self) -> Halves {
        let mut half = vec![None; self.len()];
        let mut half_tilde = vec![None; self.len()];
        for y in self.finite_points() {
            half[y] = self.div(y, 2).ok();
        }
        for y in self.cofinite_points() {
            half_tilde[y] = self.div_tilde(y, 2).ok();
        }
        Halves { half, half_tilde }
    }

    fn scale(&self, hv: &Halves, y: usize, l: Ell) -> Result<usize, String> {
        match l {
            Ell::Two => Ok(self.times(y, 2)),
            Ell::Half => hv.half[y].ok_or_else(|| format!("{} has no unique half", self.label(y))),
        }
    }

    fn scale_sq(&self, hv: &Halves, y: usize, l: Ell) -> Result<usize, String> {
        let z = self.scale(hv, y, l)?;
        self.scale(hv, z, l)
    }

    fn scale_tilde(&self, hv: &Halves, y: usize, l: Ell) -> Result<usize, String> {
        match l {
            Ell::Two => Ok(self.times_tilde(y, 2)),
            Ell::Half => hv.half_tilde[y].ok_or_else(|| format!("{} has no unique tilde-half", self.label(y))),
        }
    }

    fn scale_tilde_sq(&self, hv: &Halves, y: usize, l: Ell) -> Result<usize, String> {
        let z = self.scale_tilde(hv, y, l)?;
        self.scale_tilde(hv, z, l)
    }

    fn unit_mu(&self, x: usize) -> Result<&Perm, String> {
        self.try_mu(x).map_err(|e| e.to_string())
    }

    /// The special suite: classification, the special μ identities, the
    /// μ-involution identities and the ℓ-scaling laws, each run when its
    /// hypotheses hold.
    pub fn special_suite(&self) -> Vec<Check> {
        let info = self.special_info();
        let n = self.len();
        let mut out = vec![Check::pass("special_classification", "special: ~x = -x for all units").with_detail(
            format!(
                "special={}, abelian={}, classes={}, x*2 unit={}",
                info.special, info.abelian, info.classes, info.doubles_units
            ),
        )];
        if !info.special {
            return out;
        }
        let each = |f: &dyn Fn(usize) -> Result<bool, String>| -> R {
            for &x in self.units() {
                match f(x) {
                    Ok(true) => {}
                    Ok(false) => return Err(format!("x = {}", self.label(x))),
                    Err(e) => return Err(format!("x = {}: {e}", self.label(x))),
                }
            }
            Ok(())
        };
        let pairs = |f: &dyn Fn(usize, usize) -> Result<bool, String>| -> R {
            for &x in self.units() {
                for &y in self.units() {
                    match f(x, y) {
                        Ok(true) => {}
                        Ok(false) => return Err(format!("x = {}, y = {}", self.label(x), self.label(y))),
                        Err(e) => return Err(format!("x = {}, y = {}: {e}", self.label(x), self.label(y))),
                    }
                }
            }
            Ok(())
        };

        out.push(Check::new(
            "special_mu_i",
            "(-y) mu_x = -(y mu_x)",
            pairs(&|x, y| Ok(self.mu(x).on(self.neg(y)) == self.neg(self.mu(x).on(y)))),
        ));
        out.push(Check::new(
            "special_mu_ii",
            "mu_x = alpha_x alpha^tau_{-x tau^-1} alpha_x",
            each(&|x| {
                let b = self.alpha(self.neg(self.tau_inv.on(x))).conj(&self.tau);
                Ok(&Perm::word(n, &[self.alpha(x), &b, self.alpha(x)]) == self.mu(x))
            }),
        ));
        out.push(Check::new(
            "special_mu_iii",
            "-x = x mu_x = x mu_{-x}",
            each(&|x| {
                let m = self.neg(x);
                Ok(self.mu(x).on(x) == m && self.mu(m).on(x) == m)
            }),
        ));
        out.push(Check::new(
            "special_mu_iv",
            "mu_x = alpha_x alpha_x^{mu_{+-x}} alpha_x",
            each(&|x| {
                let a = self.alpha(x);
                Ok([x, self.neg(x)].iter().all(|&s| &Perm::word(n, &[a, &a.conj(self.mu(s)), a]) == self.mu(x)))
            }),
        ));
        out.push(Check::new(
            "special_mu_v",
            "mu_{-x} = alpha_x mu_{-x} alpha_x mu_{-x} alpha_x",
            each(&|x| {
                let a = self.alpha(x);
                let m = self.mu(self.neg(x));
                Ok(&Perm::word(n, &[a, m, a, m, a]) == m)
            }),
        ));
        out.push(Check::new(
            "special_sum",
            "x mu_{x alpha_y} = (-y) alpha_{-x} alpha_{x mu_y} alpha_{-y} when x alpha_y is a unit",
            pairs(&|x, y| {
                let s = self.add(x, y);
                if !self.is_unit(s) {
                    return Ok(true);
                }
                let lhs = self.mu(s).on(x);
                let rhs = Perm::word(n, &[self.alpha(self.neg(x)), self.alpha(self.mu(y).on(x)), self.alpha(self.neg(y))])
                    .on(self.neg(y));
                Ok(lhs == rhs)
            }),
        ));

        if info.involutive() {
            out.push(Check::new("hua_minus", "h_x = h_{-x}", each(&|x| Ok(self.hua(x) == self.hua(self.neg(x))))));
            out.push(Check::new(
                "mu_involution",
                "mu_x = mu_{-x} and mu_x^2 = id",
                each(&|x| Ok(self.mu(x) == self.mu(self.neg(x)) && self.mu(x).then(self.mu(x)).is_identity())),
            ));
            out.push(Check::new(
                "mu_conjugate",
                "mu_x^{mu_y} = mu_{x mu_y}",
                pairs(&|x, y| Ok(&self.mu(x).conj(self.mu(y)) == self.unit_mu(self.mu(y).on(x))?)),
            ));
            out.push(Check::new(
                "mu_commute",
                "mu_x mu_{x alpha_y} mu_y = mu_y mu_{x alpha_y} mu_x = mu_{(x tau alpha_{y tau}) tau}",
                pairs(&|x, y| {
                    let s = self.add(x, y);
                    if !self.is_unit(s) {
                        return Ok(true);
                    }
                    let z = self.tau.on(self.alpha(self.tau.on(y)).on(self.tau.on(x)));
                    let mz = self.unit_mu(z)?;
                    let a = Perm::word(n, &[self.mu(x), self.mu(s), self.mu(y)]);
                    let b = Perm::word(n, &[self.mu(y), self.mu(s), self.mu(x)]);
                    Ok(&a == mz && &b == mz)
                }),
            ));
            out.push(Check::new(
                "hua_tau_inverse",
                "h_{x tau} = h_x^-1",
                each(&|x| Ok(self.hua(self.tau.on(x)) == self.hua(x).inverse())),
            ));
            out.push(Check::new(
                "hua_triple",
                "h_x h_y h_x = h_{y h_x}",
                pairs(&|x, y| {
                    let hx = self.hua(x);
                    Ok(Perm::word(n, &[&hx, &self.hua(y), &hx]) == self.hua(hx.on(y)))
                }),
            ));
        }

        if info.scaling() {
            out.extend(self.scaling_checks());
        }
        out
    }

    fn scaling_checks(&self) -> Vec<Check> {
        let hv = self.halves();
        let fin = self.finite_points();
        let cofin = self.cofinite_points();
        let mut out = Vec::new();

        let squares: std::collections::HashSet<Perm> =
            self.u_inf().elements().iter().map(|p| p.then(p)).collect();
        let unique2 = if squares.len() == self.u_inf().order() {
            Ok(())
        } else {
            Err(format!("{} distinct squares in a group of order {}", squares.len(), self.u_inf().order()))
        };
        out.push(Check::new("unique_2_divisible", "U_inf is uniquely 2-divisible", unique2));

        let halves = (|| {
            for &x in &fin {
                let h = self.div(x, 2).map_err(|e| e.to_string())?;
                if self.times(h, 2) != x {
                    return Err(format!("x = {}", self.label(x)));
                }
                if self.is_unit(x) && !self.is_unit(h) {
                    return Err(format!("x = {}: half is not a unit", self.label(x)));
                }
            }
            Ok(())
        })();
        out.push(Check::new("half_exists_unique", "(x*1/2)*2 = x with x*1/2 unique, a unit when x is", halves));

        let units = self.units();
        let for_l = |name: &str, anchor: &str, f: &dyn Fn(usize, Ell) -> Result<bool, String>| -> Check {
            let r = (|| {
                for l in [Ell::Two, Ell::Half] {
                    for &x in units {
                        match f(x, l) {
                            Ok(true) => {}
                            Ok(false) => return Err(format!("l = {}, x = {}", l.name(), self.label(x))),
                            Err(e) => return Err(format!("l = {}, x = {}: {e}", l.name(), self.label(x))),
                        }
                    }
                }
                Ok(())
            })();
            Check::new(name, anchor, r)
        };

        out.push(for_l("scale_tilde_i", "x *~ l = x * l^-1, (x*l) tau = x tau *~ l, (x *~ l) tau = x tau * l", &|x, l| {
            let xt = self.tau.on(x);
            Ok(self.scale_tilde(&hv, x, l)? == self.scale(&hv, x, l.inv())?
                && self.tau.on(self.scale(&hv, x, l)?) == self.scale_tilde(&hv, xt, l)?
                && self.tau.on(self.scale_tilde(&hv, x, l)?) == self.scale(&hv, xt, l)?)
        }));
        out.push(for_l("scale_hua_ii", "y h_{x*l} = y h_x * l^2 for y !~ inf", &|x, l| {
            let h1 = self.hua(x);
            let h2 = self.tau.then(self.unit_mu(self.scale(&hv, x, l)?)?);
            for &y in &fin {
                if h2.on(y) != self.scale_sq(&hv, h1.on(y), l)? {
                    return Err(format!("y = {}", self.label(y)));
                }
            }
            Ok(true)
        }));
        out.push(for_l("scale_hua_iii", "y h_{x*l^-1} = y h_{x *~ l} = y h_x *~ l^2 for y !~ 0", &|x, l| {
            let h1 = self.hua(x);
            let a = self.tau.then(self.unit_mu(self.scale(&hv, x, l.inv())?)?);
            let b = self.tau.then(self.unit_mu(self.scale_tilde(&hv, x, l)?)?);
            for &y in &cofin {
                let r = self.scale_tilde_sq(&hv, h1.on(y), l)?;
                if a.on(y) != r || b.on(y) != r {
                    return Err(format!("y = {}", self.label(y)));
                }
            }
            Ok(true)
        }));
        out.push(for_l("scale_mu_iv", "y mu_{x*l^-1} = y mu_{x *~ l} = y mu_x *~ l^2 for y !~ inf", &|x, l| {
            let a = self.unit_mu(self.scale(&hv, x, l.inv())?)?;
            let b = self.unit_mu(self.scale_tilde(&hv, x, l)?)?;
            for &y in &fin {
                let r = self.scale_tilde_sq(&hv, self.mu(x).on(y), l)?;
                if a.on(y) != r || b.on(y) != r {
                    return Err(format!("y = {}", self.label(y)));
                }
            }
            Ok(true)
        }));
        out.push(for_l("scale_mu_v", "y mu_{x*l} = y mu_x * l^2 for y !~ 0", &|x, l| {
            let a = self.unit_mu(self.scale(&hv, x, l)?)?;
            for &y in &cofin {
                if a.on(y) != self.scale_sq(&hv, self.mu(x).on(y), l)? {
                    return Err(format!("y = {}", self.label(y)));
                }
            }
            Ok(true)
        }));
        let via_mu = (|| {
            for &x in units {
                let h = self.scale(&hv, x, Ell::Half)?;
                if h != self.mu(self.neg(x)).on(self.neg(self.times(x, 2))) {
                    return Err(format!("x = {}", self.label(x)));
                }
            }
            Ok(())
        })();
        out.push(Check::new("div_via_mu", "x * 1/2 = (-x * 2) mu_{-x}", via_mu));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::p1_z9;
    use super::super::*;

    #[test]
    fn z9_special_suite() {
        let m = Lms::construct(p1_z9()).unwrap();
        let info = m.special_info();
        assert!(info.special && info.abelian && info.involutive() && info.scaling());
        let checks = m.special_suite();
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
        assert!(checks.iter().any(|c| c.name == "scale_mu_v"));
        let two = m.point("[1,2]").unwrap();
        let one = m.point("[1,1]").unwrap();
        assert_eq!(m.div(two, 2).unwrap(), one);
        assert_eq!(m.times_tilde(two, 2), one);
    }
}
