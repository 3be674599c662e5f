//! Quadratic and Λ-quadratic forms over finite local rings, and the
//! orthogonal and Hermitian local Moufang sets.

use crate::action::{EquivSet, Perm};
use crate::localring::{El, Ring};
use crate::moufang::{check_isomorphism, Lms, Seed};
use crate::report::Check;
use std::collections::{HashMap, HashSet};

/// The free right module Rⁿ; elements are mixed-radix indices.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub ring: Ring,
    pub rank: usize,
}

impl FreeModule {
    pub fn new(ring: Ring, rank: usize) -> FreeModule {
        FreeModule { ring, rank }
    }

    pub fn len(&self) -> usize {
        self.ring.size().pow(self.rank as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn decode(&self, x: usize) -> Vec<El> {
        let n = self.ring.size();
        (0..self.rank).map(|i| (x / n.pow(i as u32)) % n).collect()
    }

    pub fn encode(&self, c: &[El]) -> usize {
        let n = self.ring.size();
        c.iter().rev().fold(0, |acc, &a| acc * n + a)
    }

    fn zip(&self, x: usize, y: usize, f: impl Fn(El, El) -> El) -> usize {
        let (a, b) = (self.decode(x), self.decode(y));
        let c: Vec<El> = a.iter().zip(&b).map(|(&u, &v)| f(u, v)).collect();
        self.encode(&c)
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.zip(x, y, |u, v| self.ring.add(u, v))
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.zip(x, y, |u, v| self.ring.sub(u, v))
    }

    pub fn neg(&self, x: usize) -> usize {
        self.zip(x, x, |u, _| self.ring.neg(u))
    }

    /// x·r
    pub fn scale(&self, x: usize, r: El) -> usize {
        self.zip(x, x, |u, _| self.ring.mul(u, r))
    }

    /// (x_i)* coordinatewise
    pub fn star(&self, x: usize) -> usize {
        self.zip(x, x, |u, _| self.ring.star(u))
    }

    /// x ∈ Wm
    pub fn in_wm(&self, x: usize) -> bool {
        self.decode(x).iter().all(|&u| self.ring.in_ideal(u))
    }

    pub fn label(&self, x: usize) -> String {
        let c: Vec<String> = self.decode(x).iter().map(|&u| self.ring.fmt_el(u)).collect();
        if self.rank == 1 {
            c[0].clone()
        } else {
            format!("({})", c.join(","))
        }
    }
}

/// A quadratic form q(x) = Σ c_ij x_i x_j (i ≤ j) on Rⁿ.
#[derive(Clone, Debug)]
pub struct QuadForm {
    pub w: FreeModule,
    pub text: String,
    pub terms: Vec<(usize, usize, El)>,
}

impl QuadForm {
    /// Parses a form such as `x1^2+x2^2` or `x1^2-3*x1*x2+2x2^2`.
    pub fn parse(ring: Ring, s: &str, rank: Option<usize>) -> Result<QuadForm, String> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err("empty form".into());
        }
        let mut pieces = Vec::new();
        let mut cur = String::new();
        for c in cleaned.chars() {
            if (c == '+' || c == '-') && !cur.is_empty() {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(c);
        }
        pieces.push(cur);
        let mut terms = Vec::new();
        let mut max_var = 0;
        for p in pieces {
            let (sign, body) = match p.strip_prefix('-') {
                Some(b) => (-1i64, b),
                None => (1, p.strip_prefix('+').unwrap_or(&p)),
            };
            let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
            let coef: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| format!("bad coefficient in `{p}`"))? };
            let rest = body[digits.len()..].trim_start_matches('*');
            let vars = parse_monomial(rest).ok_or_else(|| format!("bad term `{p}`"))?;
            let (i, j) = vars;
            if i == 0 || j == 0 {
                return Err(format!("variables are numbered from 1 in `{p}`"));
            }
            max_var = max_var.max(j);
            terms.push((i - 1, j - 1, ring.from_int(sign * coef)));
        }
        let rank = rank.unwrap_or(max_var);
        if max_var > rank {
            return Err(format!("form uses x{max_var} but the rank is {rank}"));
        }
        Ok(QuadForm { w: FreeModule::new(ring, rank), text: s.to_string(), terms })
    }

    pub fn ring(&self) -> &Ring {
        &self.w.ring
    }

    pub fn q(&self, x: usize) -> El {
        let r = &self.w.ring;
        let c = self.w.decode(x);
        self.terms.iter().fold(0, |acc, &(i, j, k)| r.add(acc, r.mul(k, r.mul(c[i], c[j]))))
    }

    /// f(x,y) = q(x+y) − q(x) − q(y)
    pub fn f(&self, x: usize, y: usize) -> El {
        let r = &self.w.ring;
        r.sub(r.sub(self.q(self.w.add(x, y)), self.q(x)), self.q(y))
    }

    /// q(x) ∈ m implies x ∈ Wm.
    pub fn check_anisotropic(&self) -> Result<(), String> {
        match (0..self.w.len()).find(|&x| self.w.ring.in_ideal(self.q(x)) && !self.w.in_wm(x)) {
            Some(x) => Err(format!("isotropic vector x = {}, q(x) = {}", self.w.label(x), self.w.ring.fmt_el(self.q(x)))),
            None => Ok(()),
        }
    }

    /// q(xr) = q(x)r² and f bilinear.
    pub fn check_quadratic(&self) -> Result<(), String> {
        let r = &self.w.ring;
        for x in 0..self.w.len() {
            for s in r.elements() {
                if self.q(self.w.scale(x, s)) != r.mul(self.q(x), r.mul(s, s)) {
                    return Err(format!("q(xr) != q(x)r^2 at x = {}, r = {}", self.w.label(x), r.fmt_el(s)));
                }
            }
        }
        for x in 0..self.w.len() {
            for y in 0..self.w.len() {
                for s in r.elements() {
                    if self.f(self.w.scale(x, s), y) != r.mul(s, self.f(x, y)) {
                        return Err(format!("f not linear at x = {}, y = {}", self.w.label(x), self.w.label(y)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses `xi^2`, `xi*xj` or `xixj` into (i, j) with i ≤ j.
fn parse_monomial(s: &str) -> Option<(usize, usize)> {
    let var = |t: &str| -> Option<(usize, usize)> {
        let t = t.strip_prefix('x')?;
        let d: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        Some((d.parse().ok()?, d.len() + 1))
    };
    let (i, used) = var(s)?;
    let rest = &s[used..];
    if rest.is_empty() {
        return None;
    }
    if rest == "^2" {
        return Some((i, i));
    }
    let (j, used2) = var(rest.trim_start_matches('*'))?;
    let consumed = rest.len() - rest.trim_start_matches('*').len() + used2;
    (consumed == rest.len()).then_some((i.min(j), i.max(j)))
}

/// A commutative ring with involution, a unit ε with εε* = 1 and an additive
/// subgroup Λ given as a membership table.
#[derive(Clone, Debug)]
pub struct FormRing {
    pub ring: Ring,
    pub eps: El,
    lambda: Vec<bool>,
}

/// Λ_min = {r − r*ε}.
pub fn lambda_min(ring: &Ring, eps: El) -> Vec<bool> {
    let mut set = vec![false; ring.size()];
    for r in ring.elements() {
        set[ring.sub(r, ring.mul(ring.star(r), eps))] = true;
    }
    set
}

/// Λ_max = {r : r*ε = −r}.
pub fn lambda_max(ring: &Ring, eps: El) -> Vec<bool> {
    ring.elements().map(|r| ring.mul(ring.star(r), eps) == ring.neg(r)).collect()
}

impl FormRing {
    pub fn new(ring: Ring, eps: El, lambda: Vec<bool>) -> FormRing {
        FormRing { ring, eps, lambda }
    }

    /// `min`, `max` or `zero` for Λ = {0}; ε is taken from the ring.
    pub fn with_lambda(ring: Ring, which: &str) -> Result<FormRing, String> {
        let eps = ring.eps();
        let lambda = match which {
            "min" => lambda_min(&ring, eps),
            "max" => lambda_max(&ring, eps),
            "zero" => ring.elements().map(|r| r == 0).collect(),
            o => return Err(format!("unknown form parameter `{o}`; expected min, max or zero")),
        };
        Ok(FormRing { ring, eps, lambda })
    }

    pub fn in_lambda(&self, a: El) -> bool {
        self.lambda[a]
    }

    /// a + Λ = b + Λ
    pub fn same_coset(&self, a: El, b: El) -> bool {
        self.lambda[self.ring.sub(a, b)]
    }

    /// Least element of a + Λ.
    pub fn canonical(&self, a: El) -> El {
        self.ring.elements().find(|&b| self.same_coset(a, b)).unwrap_or(a)
    }

    pub fn lambda_elements(&self) -> Vec<El> {
        self.ring.elements().filter(|&a| self.lambda[a]).collect()
    }

    /// εε* = 1, Λ_min ⊆ Λ ⊆ Λ_max, Λ a subgroup with r*Λr ⊆ Λ.
    pub fn check_form_parameter(&self) -> Result<(), String> {
        let r = &self.ring;
        if r.mul(self.eps, r.star(self.eps)) != 1 {
            return Err(format!("eps = {} has eps eps* != 1", r.fmt_el(self.eps)));
        }
        let lam = self.lambda_elements();
        if !self.lambda[0] || lam.iter().any(|&a| lam.iter().any(|&b| !self.lambda[r.sub(a, b)])) {
            return Err("Lambda is not an additive subgroup".into());
        }
        let (lo, hi) = (lambda_min(r, self.eps), lambda_max(r, self.eps));
        if let Some(a) = r.elements().find(|&a| lo[a] && !self.lambda[a]) {
            return Err(format!("{} lies in Lambda_min but not in Lambda", r.fmt_el(a)));
        }
        if let Some(a) = r.elements().find(|&a| self.lambda[a] && !hi[a]) {
            return Err(format!("{} lies in Lambda but not in Lambda_max", r.fmt_el(a)));
        }
        for s in r.elements() {
            if let Some(&a) = lam.iter().find(|&&a| !self.lambda[r.mul(r.mul(r.star(s), a), s)]) {
                return Err(format!("r* l r leaves Lambda at r = {}, l = {}", r.fmt_el(s), r.fmt_el(a)));
            }
        }
        Ok(())
    }

    /// Some r has r + r* invertible implies Λ_min = Λ_max.
    pub fn check_lambda_extremes(&self) -> Check {
        let r = &self.ring;
        let anchor = "r + r* invertible for some r implies Lambda = Lambda_min = Lambda_max";
        match r.elements().find(|&a| r.is_unit(r.add(a, r.star(a)))) {
            None => Check::pass("lambda_extremes", anchor).with_detail("hypothesis does not hold"),
            Some(_) => {
                let ok = lambda_min(r, self.eps) == lambda_max(r, self.eps) && lambda_max(r, self.eps) == self.lambda;
                Check::new("lambda_extremes", anchor, if ok { Ok(()) } else { Err("Lambda_min != Lambda_max".into()) })
            }
        }
    }
}

/// The Λ-quadratic form on Rⁿ defined by the ∗-form h(x,y) = Σ x_i* c_ij y_j.
#[derive(Clone, Debug)]
pub struct HermForm {
    pub fr: FormRing,
    pub w: FreeModule,
    pub text: String,
    coef: Vec<El>,
}

impl HermForm {
    /// `coef` is the rank × rank matrix (c_ij) in row-major order.
    pub fn new(fr: FormRing, rank: usize, coef: Vec<El>, text: &str) -> Result<HermForm, String> {
        if coef.len() != rank * rank || coef.iter().any(|&c| c >= fr.ring.size()) {
            return Err("coefficient matrix has the wrong shape".into());
        }
        let w = FreeModule::new(fr.ring.clone(), rank);
        Ok(HermForm { fr, w, text: text.to_string(), coef })
    }

    /// h(x,y) = Σ x_i* y_i.
    pub fn standard(fr: FormRing, rank: usize) -> HermForm {
        let coef = (0..rank * rank).map(|k| if k / rank == k % rank { 1 } else { 0 }).collect();
        let text = (1..=rank).map(|i| format!("x{i}*y{i}")).collect::<Vec<_>>().join("+");
        HermForm::new(fr, rank, coef, &format!("h = {text}")).expect("identity matrix")
    }

    /// The orthogonal case: trivial involution, ε = 1, Λ = {0}, and h upper
    /// triangular with h(x,x) = q(x).
    pub fn from_quadratic(q: &QuadForm) -> HermForm {
        let ring = q.ring().clone().with_trivial_involution();
        let n = q.w.rank;
        let mut coef = vec![0; n * n];
        for &(i, j, k) in &q.terms {
            coef[i * n + j] = ring.add(coef[i * n + j], k);
        }
        let lambda = ring.elements().map(|r| r == 0).collect();
        let fr = FormRing::new(ring, 1, lambda);
        HermForm::new(fr, n, coef, &q.text).expect("shape from the form")
    }

    pub fn ring(&self) -> &Ring {
        &self.fr.ring
    }

    pub fn h(&self, x: usize, y: usize) -> El {
        let r = self.ring();
        let (a, b) = (self.w.decode(x), self.w.decode(y));
        let n = self.w.rank;
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc = r.add(acc, r.mul(r.mul(r.star(a[i]), self.coef[i * n + j]), b[j]));
            }
        }
        acc
    }

    /// f(x,y) = h(x,y) + h(y,x)*ε
    pub fn f(&self, x: usize, y: usize) -> El {
        let r = self.ring();
        r.add(self.h(x, y), r.mul(r.star(self.h(y, x)), self.fr.eps))
    }

    /// A representative of q(x) = h(x,x) + Λ.
    pub fn q(&self, x: usize) -> El {
        self.h(x, x)
    }

    pub fn check_lq1(&self) -> Result<(), String> {
        let r = self.ring();
        for x in 0..self.w.len() {
            for y in 0..self.w.len() {
                let rhs = r.add(r.add(self.q(x), self.q(y)), self.f(x, y));
                if !self.fr.same_coset(self.q(self.w.add(x, y)), rhs) {
                    return Err(format!("x = {}, y = {}", self.w.label(x), self.w.label(y)));
                }
            }
        }
        Ok(())
    }

    pub fn check_lq2(&self) -> Result<(), String> {
        let r = self.ring();
        for x in 0..self.w.len() {
            for s in r.elements() {
                let rhs = r.mul(r.mul(r.star(s), self.q(x)), s);
                if !self.fr.same_coset(self.q(self.w.scale(x, s)), rhs) {
                    return Err(format!("x = {}, r = {}", self.w.label(x), r.fmt_el(s)));
                }
            }
        }
        Ok(())
    }

    pub fn check_lq3(&self) -> Result<(), String> {
        let r = self.ring();
        let lam = self.fr.lambda_elements();
        for x in 0..self.w.len() {
            for &l in &lam {
                let a = r.add(self.q(x), l);
                if self.f(x, x) != r.add(a, r.mul(r.star(a), self.fr.eps)) {
                    return Err(format!("x = {}, r = {}", self.w.label(x), r.fmt_el(a)));
                }
            }
        }
        Ok(())
    }

    /// q(x) ∈ m + Λ implies x ∈ Wm.
    pub fn check_anisotropic(&self) -> Result<(), String> {
        let r = self.ring();
        let lam = self.fr.lambda_elements();
        for x in (0..self.w.len()).filter(|&x| !self.w.in_wm(x)) {
            if lam.iter().any(|&l| r.in_ideal(r.sub(self.q(x), l))) {
                return Err(format!("isotropic vector x = {}, q(x) = {}", self.w.label(x), r.fmt_el(self.q(x))));
            }
        }
        Ok(())
    }

    /// Form parameter, (ΛQ1)–(ΛQ3) and anisotropy.
    pub fn suite(&self) -> Vec<Check> {
        vec![
            Check::new(
                "form_parameter",
                "Lambda_min <= Lambda <= Lambda_max and r* Lambda r <= Lambda",
                self.fr.check_form_parameter(),
            ),
            self.fr.check_lambda_extremes(),
            Check::new("lambda_q1", "q(x+y) = q(x) + q(y) + f(x,y) + Lambda", self.check_lq1()),
            Check::new("lambda_q2", "q(xr) = r* q(x) r", self.check_lq2()),
            Check::new("lambda_q3", "f(x,x) = r + r* eps whenever q(x) = r + Lambda", self.check_lq3()),
            Check::new("anisotropic", "q(x) in m + Lambda implies x in Wm", self.check_anisotropic()),
        ]
    }
}

/// The isotropic points of (r,x,s) ↦ q(x) − r*s in canonical form
/// [1,x,r] or [r,x,1] with r ∈ m.
#[derive(Clone, Debug)]
pub struct HermSpace {
    pub form: HermForm,
    points: Vec<(El, usize, El)>,
    index: HashMap<(El, usize, El), usize>,
}

impl HermSpace {
    pub fn new(form: HermForm) -> HermSpace {
        let r = form.ring().clone();
        let mut points = vec![(1, 0, 0), (0, 0, 1)];
        for x in 0..form.w.len() {
            for a in r.elements() {
                if (x, a) != (0, 0) && form.fr.same_coset(a, form.q(x)) {
                    points.push((1, x, a));
                }
            }
        }
        for x in 0..form.w.len() {
            for &a in r.ideal() {
                if (x, a) != (0, 0) && form.fr.same_coset(r.star(a), form.q(x)) {
                    points.push((a, x, 1));
                }
            }
        }
        let index = points.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        HermSpace { form, points, index }
    }

    fn ring(&self) -> &Ring {
        self.form.ring()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coords(&self, p: usize) -> (El, usize, El) {
        self.points[p]
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn inf(&self) -> usize {
        1
    }

    pub fn label(&self, p: usize) -> String {
        let (a, x, b) = self.points[p];
        let r = self.ring();
        format!("[{},{},{}]", r.fmt_el(a), self.form.w.label(x), r.fmt_el(b))
    }

    /// The point [r,x,s], if (r,x,s) is nice and isotropic.
    pub fn point(&self, a: El, x: usize, b: El) -> Option<usize> {
        let r = self.ring();
        let w = &self.form.w;
        let t = if r.is_unit(a) {
            let u = r.unit_inv(a);
            (1, w.scale(x, u), r.mul(b, u))
        } else if r.is_unit(b) {
            let u = r.unit_inv(b);
            (r.mul(a, u), w.scale(x, u), 1)
        } else {
            return None;
        };
        self.index.get(&t).copied()
    }

    fn must(&self, a: El, x: usize, b: El) -> usize {
        self.point(a, x, b).unwrap_or_else(|| {
            let r = self.ring();
            panic!("({},{},{}) is not a point", r.fmt_el(a), self.form.w.label(x), r.fmt_el(b))
        })
    }

    /// The representative [s,y,1] of a point whose last coordinate is a unit.
    pub fn third_rep(&self, p: usize) -> Option<(El, usize)> {
        let r = self.ring();
        let (a, x, b) = self.points[p];
        r.is_unit(b).then(|| {
            let u = r.unit_inv(b);
            (r.mul(a, u), self.form.w.scale(x, u))
        })
    }

    pub fn is_unit_point(&self, p: usize) -> bool {
        let (a, _, b) = self.points[p];
        a == 1 && self.ring().is_unit(b)
    }

    pub fn equiv_set(&self) -> EquivSet {
        let r = self.ring();
        let w = &self.form.w;
        let labels: Vec<(bool, Vec<usize>, usize)> = self
            .points
            .iter()
            .map(|&(a, x, b)| {
                let res: Vec<usize> = w.decode(x).iter().map(|&c| r.residue(c)).collect();
                if a == 1 {
                    (true, res, r.residue(b))
                } else {
                    (false, res, r.residue(a))
                }
            })
            .collect();
        EquivSet::from_labels(&labels)
    }

    /// α_[1,x,r]
    pub fn alpha(&self, p: usize) -> Perm {
        let (one, x, a) = self.points[p];
        assert_eq!(one, 1, "alpha needs a point [1,x,r]");
        let (r, w) = (self.ring(), &self.form.w);
        Perm::from_fn(self.len(), |i| {
            let (b, y, s) = self.points[i];
            let fxy = self.form.f(x, y);
            if b == 1 {
                self.must(1, w.add(y, x), r.add(r.add(s, a), fxy))
            } else {
                let d = r.add(r.add(1, r.mul(a, b)), fxy);
                self.must(b, w.add(y, w.scale(x, b)), d)
            }
        })
        .expect("alpha is a permutation")
    }

    /// ζ_[r,x,1] for a point whose last coordinate is a unit.
    pub fn zeta(&self, p: usize) -> Perm {
        let (a, x) = self.third_rep(p).expect("zeta needs a point [r,x,1]");
        let (r, w) = (self.ring(), &self.form.w);
        let es = r.star(self.form.fr.eps);
        Perm::from_fn(self.len(), |i| match self.third_rep(i) {
            Some((s, y)) => {
                let v = r.add(r.add(s, a), r.mul(es, self.form.f(x, y)));
                self.must(v, w.add(y, x), 1)
            }
            None => {
                let (_, y, s) = self.points[i];
                let d = r.add(r.add(1, r.mul(a, s)), r.mul(es, self.form.f(x, y)));
                self.must(d, w.add(y, w.scale(x, s)), s)
            }
        })
        .expect("zeta is a permutation")
    }

    /// [r,x,s]τ = [s,x,rε]
    pub fn tau(&self) -> Perm {
        let r = self.ring();
        Perm::from_fn(self.len(), |i| {
            let (a, x, b) = self.points[i];
            self.must(b, x, r.mul(a, self.form.fr.eps))
        })
        .expect("tau is a permutation")
    }

    pub fn seed(&self, name: &str) -> Seed {
        Seed {
            name: name.to_string(),
            eq: self.equiv_set(),
            labels: (0..self.len()).map(|p| self.label(p)).collect(),
            u: (0..self.len()).filter(|&p| self.points[p].0 == 1).map(|p| self.alpha(p)).collect(),
            tau: self.tau(),
            inf: self.inf(),
        }
    }

    /// The composed word ζ_[ε*r^-*, −xε*r^-*, 1] α_[1,x,r] ζ_[ε*r^-*, −xr^-1, 1].
    pub fn mu_word(&self, p: usize) -> Option<Perm> {
        if !self.is_unit_point(p) {
            return None;
        }
        let (_, x, a) = self.points[p];
        let (r, w) = (self.ring(), &self.form.w);
        let es = r.star(self.form.fr.eps);
        let ai = r.unit_inv(a);
        let c = r.mul(es, r.star(ai));
        let z1 = self.point(c, w.neg(w.scale(x, c)), 1)?;
        let z2 = self.point(c, w.neg(w.scale(x, ai)), 1)?;
        Some(self.zeta(z1).then(&self.alpha(p)).then(&self.zeta(z2)))
    }

    /// μ_[1,x,r] by its closed form:
    /// [s,y,1] ↦ [1, (y − xr⁻¹f(x,y))r*ε, rsr*ε] and
    /// [1,y,s] ↦ [ε*r^-*sr⁻¹, (y − xr⁻¹f(x,y))r⁻¹, 1].
    pub fn mu_closed(&self, p: usize) -> Option<Perm> {
        if !self.is_unit_point(p) {
            return None;
        }
        let (_, x, a) = self.points[p];
        let (r, w) = (self.ring(), &self.form.w);
        let eps = self.form.fr.eps;
        let ai = r.unit_inv(a);
        let re = r.mul(r.star(a), eps);
        let core = |y: usize| w.sub(y, w.scale(x, r.mul(ai, self.form.f(x, y))));
        Perm::from_fn(self.len(), |i| {
            let (b, y, s) = self.points[i];
            if b == 1 {
                let first = r.mul(r.mul(r.mul(r.star(eps), r.star(ai)), s), ai);
                self.must(first, w.scale(core(y), ai), 1)
            } else {
                self.must(1, w.scale(core(y), re), r.mul(r.mul(a, b), re))
            }
        })
    }

    /// The printed orthogonal closed form:
    /// [1,y,s] ↦ [s/r², (y − x f(x,y)/r)/r, 1] and [s,y,1] ↦ [1, (y − x f(x,y)/r)r, r²s].
    pub fn mu_orthogonal(&self, p: usize) -> Option<Perm> {
        if !self.is_unit_point(p) {
            return None;
        }
        let (_, x, a) = self.points[p];
        let (r, w) = (self.ring(), &self.form.w);
        let ai = r.unit_inv(a);
        let core = |y: usize| w.sub(y, w.scale(x, r.mul(self.form.f(x, y), ai)));
        Perm::from_fn(self.len(), |i| {
            let (b, y, s) = self.points[i];
            if b == 1 {
                self.must(r.mul(s, r.mul(ai, ai)), w.scale(core(y), ai), 1)
            } else {
                self.must(1, w.scale(core(y), a), r.mul(r.mul(a, a), b))
            }
        })
    }

    /// Number of points by counting nice isotropic triples and dividing by
    /// the number of units.
    pub fn triple_count(&self) -> Result<usize, String> {
        let r = self.ring();
        let mut total = 0usize;
        for a in r.elements() {
            for b in r.elements() {
                if !r.is_unit(a) && !r.is_unit(b) {
                    continue;
                }
                let ab = r.mul(r.star(a), b);
                total += (0..self.form.w.len()).filter(|&x| self.form.fr.same_coset(self.form.q(x), ab)).count();
            }
        }
        let u = r.units().len();
        if total % u != 0 {
            return Err(format!("{total} triples are not a union of {u}-element orbits"));
        }
        Ok(total / u)
    }
}

/// Builds M(U,τ) on ℋ(W,q) after checking the form.
pub fn build_hermitian(form: HermForm) -> Result<(HermSpace, Lms), String> {
    for c in form.suite() {
        if !c.passed() {
            return Err(format!("{} fails: {}", c.name, c.witness.unwrap_or_default()));
        }
    }
    let name = format!("H({}, {})", form.ring().name(), form.text);
    let hs = HermSpace::new(form);
    let m = Lms::construct(hs.seed(&name)).map_err(|e| e.to_string())?;
    Ok((hs, m))
}

/// Builds M(W,q) for an anisotropic quadratic form.
pub fn build_orthogonal(q: &QuadForm) -> Result<(HermSpace, Lms), String> {
    q.check_quadratic()?;
    q.check_anisotropic()?;
    let name = format!("M({}, {})", q.ring().name(), q.text);
    let hs = HermSpace::new(HermForm::from_quadratic(q));
    let m = Lms::construct(hs.seed(&name)).map_err(|e| e.to_string())?;
    Ok((hs, m))
}

fn over_units(hs: &HermSpace, f: impl Fn(usize) -> Result<(), String>) -> Result<(), String> {
    (0..hs.len()).filter(|&p| hs.is_unit_point(p)).try_for_each(|p| f(p).map_err(|w| format!("unit {}: {w}", hs.label(p))))
}

/// The permutation identities of ℋ(W,q) against the constructed M.
pub fn hermitian_suite(hs: &HermSpace, m: &Lms) -> Vec<Check> {
    let r = hs.ring().clone();
    let w = &hs.form.w;
    let eps = hs.form.fr.eps;
    let mut out = Vec::new();
    let count = hs.triple_count();
    out.push(
        Check::new(
            "point_count",
            "|H| equals the number of nice isotropic triples divided by |R*|",
            match count {
                Ok(c) if c == hs.len() => Ok(()),
                Ok(c) => Err(format!("{} points, {c} from triples", hs.len())),
                Err(e) => Err(e),
            },
        )
        .with_detail(format!("{} points", hs.len())),
    );
    let doubles: Vec<usize> = (0..hs.len()).filter(|&p| hs.is_unit_point(p)).collect();
    let wd = (|| {
        let resx = |x: usize| -> Vec<usize> { w.decode(x).iter().map(|&c| r.residue(c)).collect() };
        for &p in &doubles {
            for &q in &doubles {
                let ((_, x, a), (_, y, b)) = (hs.coords(p), hs.coords(q));
                let first = resx(x) == resx(y) && r.residue(a) == r.residue(b);
                let (ai, bi) = (r.unit_inv(a), r.unit_inv(b));
                let second = resx(w.scale(x, ai)) == resx(w.scale(y, bi)) && r.residue(ai) == r.residue(bi);
                if first != second {
                    return Err(format!("{} and {}", hs.label(p), hs.label(q)));
                }
            }
        }
        Ok(())
    })();
    out.push(Check::new(
        "equivalence_well_defined",
        "[1,x,r] ~ [1,y,s] iff [r^-1,xr^-1,1] ~ [s^-1,ys^-1,1]",
        wd,
    ));
    let firsts: Vec<usize> = (0..hs.len()).filter(|&p| hs.coords(p).0 == 1).collect();
    out.push(Check::new(
        "alpha_inverse",
        "alpha_[1,x,r]^-1 = alpha_[1,-x,f(x,x)-r]",
        firsts.iter().try_for_each(|&p| {
            let (_, x, a) = hs.coords(p);
            let q = hs.point(1, w.neg(x), r.sub(hs.form.f(x, x), a)).ok_or("inverse index is not a point")?;
            if hs.alpha(p).inverse() == hs.alpha(q) {
                Ok(())
            } else {
                Err(hs.label(p))
            }
        }),
    ));
    let alphas: HashMap<usize, Perm> = firsts.iter().map(|&p| (p, hs.alpha(p))).collect();
    let mut abelian = true;
    let prod = (|| {
        for &p in &firsts {
            for &q in &firsts {
                let ((_, x, a), (_, y, b)) = (hs.coords(p), hs.coords(q));
                let s = hs.point(1, w.add(x, y), r.add(r.add(a, b), hs.form.f(y, x))).ok_or("product index is not a point")?;
                let pq = alphas[&p].then(&alphas[&q]);
                if pq != alphas[&s] {
                    return Err(format!("{}, {}", hs.label(p), hs.label(q)));
                }
                abelian &= pq == alphas[&q].then(&alphas[&p]);
            }
        }
        Ok(())
    })();
    out.push(
        Check::new("alpha_product", "alpha_[1,x,r] alpha_[1,y,s] = alpha_[1,x+y,r+s+f(y,x)]", prod)
            .with_detail(if abelian { "U is abelian" } else { "U is not abelian" }),
    );
    let tau = hs.tau();
    out.push(Check::new(
        "gamma_is_zeta",
        "gamma_[1,x,r] = alpha_[1,x,r]^tau = zeta_([1,x,r]tau)",
        firsts.iter().try_for_each(|&p| if m.gamma(p) == &hs.zeta(tau.on(p)) { Ok(()) } else { Err(hs.label(p)) }),
    ));
    out.push(Check::new(
        "negation",
        "-[1,x,r] = [1,-x,r* eps]",
        firsts.iter().try_for_each(|&p| {
            let (_, x, a) = hs.coords(p);
            if Some(m.neg(p)) == hs.point(1, w.neg(x), r.mul(r.star(a), eps)) {
                Ok(())
            } else {
                Err(hs.label(p))
            }
        }),
    ));
    out.push(Check::new(
        "mu_word",
        "mu_[1,x,r] = zeta_[e*r^-*, -x e*r^-*, 1] alpha_[1,x,r] zeta_[e*r^-*, -xr^-1, 1]",
        over_units(hs, |p| if hs.mu_word(p).as_ref() == Some(m.mu(p)) { Ok(()) } else { Err("word differs".into()) }),
    ));
    out.push(Check::new(
        "mu_closed_form",
        "[s,y,1] mu = [1, (y - xr^-1 f(x,y)) r* eps, r s r* eps] and [1,y,s] mu = [eps* r^-* s r^-1, (y - xr^-1 f(x,y)) r^-1, 1]",
        over_units(hs, |p| {
            let (closed, word) = (hs.mu_closed(p).ok_or("closed form undefined")?, hs.mu_word(p).ok_or("word undefined")?);
            match (0..hs.len()).find(|&i| closed.on(i) != word.on(i)) {
                None => Ok(()),
                Some(i) => Err(format!("at {}", hs.label(i))),
            }
        }),
    ));
    out.push(Check::new(
        "mu_inverse",
        "mu_[1,x,r]^-1 = mu_[1,-x,r* eps]",
        over_units(hs, |p| {
            let (_, x, a) = hs.coords(p);
            let q = hs.point(1, w.neg(x), r.mul(r.star(a), eps)).ok_or("index is not a point")?;
            if m.mu(p).inverse() == *m.mu(q) {
                Ok(())
            } else {
                Err("inverse differs".into())
            }
        }),
    ));
    let zetas: HashSet<Perm> = m.u_zero().elements().iter().cloned().collect();
    let zeta_tab: Vec<Option<Perm>> = (0..hs.len()).map(|p| hs.third_rep(p).map(|_| hs.zeta(p))).collect();
    out.push(Check::new(
        "alpha_mu_conjugate",
        "alpha_[1,y,s]^(mu_[1,x,r]) = zeta_([1,y,s] mu_[1,x,r])",
        over_units(hs, |p| {
            let mu = m.mu(p);
            match firsts.iter().find(|&&q| Some(alphas[&q].conj(mu)) != zeta_tab[mu.on(q)]) {
                None => Ok(()),
                Some(&q) => Err(format!("y-point {}", hs.label(q))),
            }
        }),
    ));
    out.push(Check::new(
        "U_mu_is_U0",
        "U^(mu_[1,x,r]) = U_0",
        over_units(hs, |p| {
            let mu = m.mu(p);
            let conj: HashSet<Perm> = firsts.iter().map(|&q| alphas[&q].conj(mu)).collect();
            if conj == zetas {
                Ok(())
            } else {
                Err("conjugate group differs from U_0".into())
            }
        }),
    ));
    out
}

/// Checks specific to the orthogonal construction.
pub fn orthogonal_suite(hs: &HermSpace, m: &Lms) -> Vec<Check> {
    let w = &hs.form.w;
    let expect = w.len() + (0..w.len()).filter(|&x| w.in_wm(x)).count();
    let mut out = vec![Check::new(
        "orthogonal_point_count",
        "|Q(W,q)| = |W| + |Wm|",
        if hs.len() == expect { Ok(()) } else { Err(format!("{} points, expected {expect}", hs.len())) },
    )
    .with_detail(format!("{} points", hs.len()))];
    out.push(Check::new(
        "orthogonal_mu_closed_form",
        "[1,y,s] mu_[1,x,r] = [s/r^2, (y - x f(x,y)/r)/r, 1] and [s,y,1] mu_[1,x,r] = [1, (y - x f(x,y)/r) r, r^2 s]",
        over_units(hs, |p| {
            if hs.mu_orthogonal(p).as_ref() == Some(m.mu(p)) {
                Ok(())
            } else {
                Err("closed form differs".into())
            }
        }),
    ));
    out.extend(hermitian_suite(hs, m));
    out
}

/// M(W,q) for q = h(x,x) with trivial involution against the orthogonal
/// construction, matched by labels.
pub fn hermitian_orthogonal_iso(q: &QuadForm) -> Result<(), String> {
    let (ho, mo) = build_orthogonal(q)?;
    let (hh, mh) = build_hermitian(HermForm::from_quadratic(q))?;
    let phi: Vec<usize> = (0..ho.len())
        .map(|p| {
            let (a, x, b) = ho.coords(p);
            hh.point(a, x, b).ok_or_else(|| format!("{} is missing", ho.label(p)))
        })
        .collect::<Result<_, _>>()?;
    check_isomorphism(&mo, &mh, &phi).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Ring {
        Ring::parse("gf:9:frob").unwrap()
    }

    #[test]
    fn f9_hermitian_unital() {
        let fr = FormRing::with_lambda(f9(), "min").unwrap();
        assert_eq!(fr.lambda_elements().len(), 3);
        let (hs, m) = build_hermitian(HermForm::standard(fr, 1)).unwrap();
        assert_eq!(hs.len(), 28);
        for c in hermitian_suite(&hs, &m) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn z9_orthogonal() {
        let q = QuadForm::parse(Ring::zmod(9).unwrap(), "x1^2+x2^2", None).unwrap();
        let (hs, m) = build_orthogonal(&q).unwrap();
        assert_eq!(hs.len(), 90);
        for c in orthogonal_suite(&hs, &m) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn trivial_involution_matches_orthogonal() {
        let q = QuadForm::parse(Ring::zmod(9).unwrap(), "x1^2", None).unwrap();
        hermitian_orthogonal_iso(&q).unwrap();
    }

    #[test]
    fn isotropic_rejected() {
        let q = QuadForm::parse(Ring::zmod(5).unwrap(), "x1^2+x2^2", None).unwrap();
        let err = build_orthogonal(&q).unwrap_err();
        assert!(err.contains("isotropic"));
    }

    #[test]
    fn f5_orthogonal_rank_one() {
        let q = QuadForm::parse(Ring::zmod(5).unwrap(), "x1^2", None).unwrap();
        let (hs, _) = build_orthogonal(&q).unwrap();
        assert_eq!(hs.len(), 6);
    }

    #[test]
    fn parse_forms() {
        let r = Ring::zmod(9).unwrap();
        let q = QuadForm::parse(r, "x1^2-3*x1*x2+2x2^2", None).unwrap();
        assert_eq!(q.w.rank, 2);
        assert!(QuadForm::parse(Ring::zmod(9).unwrap(), "x0^2", None).is_err());
        assert!(QuadForm::parse(Ring::zmod(9).unwrap(), "x1", None).is_err());
    }
}
