//! Quadratic Jordan pairs over finite modules, the projective space P(V) with
//! the local Moufang set M(V), and the reverse construction of a Jordan pair
//! from a local Moufang set.

use crate::action::{EquivSet, Perm};
use crate::hermitian::{build_orthogonal, QuadForm};
use crate::localring::Ring;
use crate::moufang::{check_isomorphism, Lms, Seed, Theta};
use crate::report::Check;
use thiserror::Error;

const NONE: u32 = u32::MAX;

/// Largest module handled by the table representation.
pub const MAX_MODULE: usize = 256;

/// Work budget for exhaustive five-variable linearization checks.
pub const LINEAR_BUDGET: usize = 20_000_000;

#[derive(Debug, Error)]
pub enum JordanError {
    #[error("cannot parse pair `{0}`: {1}")]
    Parse(String, String),
    #[error("invalid tables: {0}")]
    Tables(String),
    #[error("module of size {0} exceeds the cap {1}")]
    TooLarge(usize, usize),
    #[error("{0} is not invertible")]
    NotInvertible(String),
    #[error("pair is not local: {0}")]
    NotLocal(String),
}

fn sign(s: usize) -> &'static str {
    if s == 0 {
        "+"
    } else {
        "-"
    }
}

fn invert_table(t: &[u32], n: usize) -> Option<Vec<u32>> {
    if t.len() != n {
        return None;
    }
    let mut inv = vec![NONE; n];
    for (i, &y) in t.iter().enumerate() {
        let y = y as usize;
        if y >= n || inv[y] != NONE {
            return None;
        }
        inv[y] = i as u32;
    }
    Some(inv)
}

/// A finite abelian group given by its addition table; 0 is the identity.
#[derive(Clone, Debug)]
pub struct AbGroup {
    labels: Vec<String>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl AbGroup {
    pub fn new(labels: Vec<String>, add: Vec<u32>) -> Result<AbGroup, JordanError> {
        let n = labels.len();
        if n == 0 || add.len() != n * n || add.iter().any(|&v| v as usize >= n) {
            return Err(JordanError::Tables("addition table has the wrong shape".into()));
        }
        if n > MAX_MODULE {
            return Err(JordanError::TooLarge(n, MAX_MODULE));
        }
        let a = |x: usize, y: usize| add[x * n + y] as usize;
        let mut neg = vec![NONE; n];
        for x in 0..n {
            if a(0, x) != x {
                return Err(JordanError::Tables(format!("0 is not neutral at {}", labels[x])));
            }
            match (0..n).find(|&y| a(x, y) == 0) {
                Some(y) => neg[x] = y as u32,
                None => return Err(JordanError::Tables(format!("{} has no negative", labels[x]))),
            }
            for y in 0..n {
                if a(x, y) != a(y, x) {
                    return Err(JordanError::Tables(format!("addition not commutative at ({}, {})", labels[x], labels[y])));
                }
                for z in 0..n {
                    if a(a(x, y), z) != a(x, a(y, z)) {
                        return Err(JordanError::Tables(format!("addition not associative at {}", labels[x])));
                    }
                }
            }
        }
        Ok(AbGroup { labels, add, neg })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.len() + y] as usize
    }

    pub fn neg(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// x·k for an integer k.
    pub fn times(&self, x: usize, k: i64) -> usize {
        let base = if k < 0 { self.neg(x) } else { x };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.add(acc, base))
    }

    /// The unique y with y·k = x, if any.
    pub fn divide(&self, x: usize, k: i64) -> Option<usize> {
        let mut sol = (0..self.len()).filter(|&y| self.times(y, k) == x);
        let y = sol.next()?;
        sol.next().is_none().then_some(y)
    }

    /// Whether y ↦ y·k is bijective.
    pub fn uniquely_divisible(&self, k: i64) -> bool {
        let mut seen = vec![false; self.len()];
        (0..self.len()).all(|y| !std::mem::replace(&mut seen[self.times(y, k)], true))
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.len();
        let mut span = vec![false; n];
        span[0] = true;
        let mut gens = Vec::new();
        for g in 0..n {
            if span[g] {
                continue;
            }
            gens.push(g);
            loop {
                let mut grew = false;
                for x in 0..n {
                    if span[x] && !span[self.add(x, g)] {
                        span[self.add(x, g)] = true;
                        grew = true;
                    }
                }
                if !grew {
                    break;
                }
            }
        }
        gens
    }

    /// Whether the marked set is a subgroup.
    pub fn is_subgroup(&self, set: &[bool]) -> bool {
        set[0] && (0..self.len()).all(|x| !set[x] || (0..self.len()).all(|y| !set[y] || set[self.sub(x, y)]))
    }
}

/// A quadratic Jordan pair V = (V⁺, V⁻) with Q_x: V^{-σ} → V^σ stored as
/// tables. Side 0 is V⁺, side 1 is V⁻.
#[derive(Clone, Debug)]
pub struct JordanPair {
    pub name: String,
    v: [AbGroup; 2],
    q: [Vec<u32>; 2],
    q2: [Vec<u32>; 2],
    inverse: [Vec<u32>; 2],
    qi: [Vec<u32>; 2],
    rad: [Vec<bool>; 2],
}

impl JordanPair {
    /// `q[s][x·|V^{-s}| + y]` is yQ_x for x ∈ V^s, y ∈ V^{-s}.
    pub fn new(name: &str, plus: AbGroup, minus: AbGroup, qp: Vec<u32>, qm: Vec<u32>) -> Result<JordanPair, JordanError> {
        let n = [plus.len(), minus.len()];
        for (s, t) in [&qp, &qm].iter().enumerate() {
            if t.len() != n[0] * n[1] || t.iter().any(|&v| v as usize >= n[s]) {
                return Err(JordanError::Tables(format!("Q table for V{} has the wrong shape", sign(s))));
            }
        }
        let mut jp = JordanPair {
            name: name.to_string(),
            v: [plus, minus],
            q: [qp, qm],
            q2: [Vec::new(), Vec::new()],
            inverse: [Vec::new(), Vec::new()],
            qi: [Vec::new(), Vec::new()],
            rad: [Vec::new(), Vec::new()],
        };
        for s in 0..2 {
            let (ns, no) = (n[s], n[1 - s]);
            let mut q2 = vec![0u32; ns * ns * no];
            for x in 0..ns {
                for z in 0..ns {
                    let xz = jp.v[s].add(x, z);
                    for y in 0..no {
                        let val = jp.v[s].sub(jp.v[s].sub(jp.q(s, xz, y), jp.q(s, x, y)), jp.q(s, z, y));
                        q2[(x * ns + z) * no + y] = val as u32;
                    }
                }
            }
            jp.q2[s] = q2;
        }
        for s in 0..2 {
            let (ns, no) = (n[s], n[1 - s]);
            jp.inverse[s] = (0..ns)
                .map(|x| match invert_table(jp.q_row(s, x), ns) {
                    Some(inv) if ns == no => inv[x],
                    _ => NONE,
                })
                .collect();
            let mut qi = vec![NONE; ns * no];
            for x in 0..ns {
                for y in 0..no {
                    let b = jp.bergman(s, x, y);
                    if let Some(inv) = invert_table(&b, ns) {
                        qi[x * no + y] = inv[jp.v[s].sub(x, jp.q(s, x, y))];
                    }
                }
            }
            jp.qi[s] = qi;
        }
        for s in 0..2 {
            let no = n[1 - s];
            jp.rad[s] = (0..n[s]).map(|x| (0..no).all(|y| jp.qi[s][x * no + y] != NONE)).collect();
        }
        Ok(jp)
    }

    /// The pair (A, A) with yQ_x = xyx.
    pub fn ring_pair(ring: &Ring) -> Result<JordanPair, JordanError> {
        let n = ring.size();
        if n > MAX_MODULE {
            return Err(JordanError::TooLarge(n, MAX_MODULE));
        }
        let labels: Vec<String> = ring.elements().map(|a| ring.fmt_el(a)).collect();
        let mut add = vec![0u32; n * n];
        let mut q = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = ring.add(x, y) as u32;
                q[x * n + y] = ring.mul(ring.mul(x, y), x) as u32;
            }
        }
        let g = AbGroup::new(labels, add)?;
        JordanPair::new(&format!("({0},{0})", ring.name()), g.clone(), g, q.clone(), q)
    }

    /// The pair (W, W) with yQ_x = y q(x) − x f(x,y).
    pub fn form_pair(form: &QuadForm) -> Result<JordanPair, JordanError> {
        let w = &form.w;
        let n = w.len();
        if n > MAX_MODULE {
            return Err(JordanError::TooLarge(n, MAX_MODULE));
        }
        let labels: Vec<String> = (0..n).map(|x| w.label(x)).collect();
        let mut add = vec![0u32; n * n];
        let mut q = vec![0u32; n * n];
        let qs: Vec<_> = (0..n).map(|x| form.q(x)).collect();
        for x in 0..n {
            for y in 0..n {
                add[x * n + y] = w.add(x, y) as u32;
                q[x * n + y] = w.sub(w.scale(y, qs[x]), w.scale(x, form.f(x, y))) as u32;
            }
        }
        let g = AbGroup::new(labels, add)?;
        JordanPair::new(&format!("qform({}, {})", form.ring().name(), form.text), g.clone(), g, q.clone(), q)
    }

    /// `ring:<ring>` for (A, A) or `qform:<ring>:<form>` for (W, W).
    pub fn from_spec(spec: &str) -> Result<JordanPair, JordanError> {
        let perr = |m: String| JordanError::Parse(spec.into(), m);
        if let Some(desc) = spec.strip_prefix("ring:") {
            let r = Ring::parse(desc).map_err(|e| perr(e.to_string()))?;
            JordanPair::ring_pair(&r)
        } else if let Some(rest) = spec.strip_prefix("qform:") {
            let (desc, poly) = rest.rsplit_once(':').ok_or_else(|| perr("expected qform:<ring>:<form>".into()))?;
            let r = Ring::parse(desc).map_err(|e| perr(e.to_string()))?;
            let f = QuadForm::parse(r, poly, None).map_err(perr)?;
            JordanPair::form_pair(&f)
        } else {
            Err(perr("expected `ring:` or `qform:`".into()))
        }
    }

    pub fn group(&self, s: usize) -> &AbGroup {
        &self.v[s]
    }

    pub fn size(&self, s: usize) -> usize {
        self.v[s].len()
    }

    pub fn label(&self, s: usize, x: usize) -> &str {
        self.v[s].label(x)
    }

    fn q_row(&self, s: usize, x: usize) -> &[u32] {
        let no = self.size(1 - s);
        &self.q[s][x * no..(x + 1) * no]
    }

    /// yQ_x for x ∈ V^s, y ∈ V^{-s}.
    pub fn q(&self, s: usize, x: usize, y: usize) -> usize {
        self.q[s][x * self.size(1 - s) + y] as usize
    }

    /// yQ_{x,z} for x, z ∈ V^s, y ∈ V^{-s}.
    pub fn q2(&self, s: usize, x: usize, z: usize, y: usize) -> usize {
        let (ns, no) = (self.size(s), self.size(1 - s));
        self.q2[s][(x * ns + z) * no + y] as usize
    }

    /// {x y z} = yQ_{x,z} for x, z ∈ V^s, y ∈ V^{-s}.
    pub fn triple(&self, s: usize, x: usize, y: usize, z: usize) -> usize {
        self.q2(s, x, z, y)
    }

    /// B_{x,y} = id − D_{x,y} + Q_yQ_x on V^s.
    pub fn bergman(&self, s: usize, x: usize, y: usize) -> Vec<u32> {
        let g = &self.v[s];
        (0..self.size(s))
            .map(|z| g.add(g.sub(z, self.triple(s, x, y, z)), self.q(s, x, self.q(1 - s, y, z))) as u32)
            .collect()
    }

    /// x^y = (x − yQ_x)B_{x,y}⁻¹, if (x, y) is quasi-invertible.
    pub fn quasi_inverse(&self, s: usize, x: usize, y: usize) -> Option<usize> {
        match self.qi[s][x * self.size(1 - s) + y] {
            NONE => None,
            v => Some(v as usize),
        }
    }

    /// x⁻¹ = xQ_x⁻¹ ∈ V^{-s}, if Q_x is invertible.
    pub fn inverse(&self, s: usize, x: usize) -> Option<usize> {
        match self.inverse[s][x] {
            NONE => None,
            v => Some(v as usize),
        }
    }

    pub fn is_invertible(&self, s: usize, x: usize) -> bool {
        self.inverse[s][x] != NONE
    }

    /// Q_x⁻¹ as a table V^s → V^{-s}.
    pub fn q_inverse(&self, s: usize, x: usize) -> Option<Vec<u32>> {
        invert_table(self.q_row(s, x), self.size(s))
    }

    pub fn in_rad(&self, s: usize, x: usize) -> bool {
        self.rad[s][x]
    }

    /// Rad V^s: the properly quasi-invertible elements.
    pub fn radical(&self, s: usize) -> Vec<usize> {
        (0..self.size(s)).filter(|&x| self.rad[s][x]).collect()
    }

    pub fn invertibles(&self, s: usize) -> Vec<usize> {
        (0..self.size(s)).filter(|&x| self.is_invertible(s, x)).collect()
    }

    /// Whether the marked pair of sets is an ideal.
    fn check_ideal(&self, set: [&[bool]; 2]) -> Result<(), String> {
        for s in 0..2 {
            if !self.v[s].is_subgroup(set[s]) {
                return Err(format!("V{} part is not a subgroup", sign(s)));
            }
        }
        for s in 0..2 {
            for x in (0..self.size(s)).filter(|&x| set[s][x]) {
                for y in 0..self.size(1 - s) {
                    if !set[s][self.q(s, x, y)] || !set[1 - s][self.q(1 - s, y, x)] {
                        return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(1 - s, y)));
                    }
                    for z in 0..self.size(s) {
                        if !set[s][self.triple(s, x, y, z)] {
                            return Err(format!(
                                "sigma = {}, {{x y z}} with x = {}, y = {}, z = {}",
                                sign(s),
                                self.label(s, x),
                                self.label(1 - s, y),
                                self.label(s, z)
                            ));
                        }
                    }
                }
            }
        }
        if set[0].iter().all(|&b| b) && set[1].iter().all(|&b| b) {
            return Err("the ideal is all of V".into());
        }
        Ok(())
    }

    /// The non-invertible elements form a proper ideal.
    pub fn check_local(&self) -> Result<(), String> {
        let non: [Vec<bool>; 2] = [0, 1].map(|s| (0..self.size(s)).map(|x| !self.is_invertible(s, x)).collect());
        self.check_ideal([&non[0], &non[1]])
    }

    pub fn is_local(&self) -> bool {
        self.check_local().is_ok()
    }

    fn coset_reps(&self, s: usize) -> Vec<usize> {
        let g = &self.v[s];
        (0..self.size(s))
            .map(|x| (0..self.size(s)).find(|&c| self.rad[s][g.sub(x, c)]).unwrap_or(x))
            .collect()
    }

    /// Number of classes of V⁺ modulo Rad V⁺.
    pub fn residue_classes(&self) -> usize {
        let mut reps = self.coset_reps(0);
        reps.sort_unstable();
        reps.dedup();
        reps.len()
    }

    /// Q additive, Q_{x,z} biadditive, Q_{kx} = k²Q_x.
    fn check_quadratic(&self) -> Result<(), String> {
        for s in 0..2 {
            let (gs, go) = (&self.v[s], &self.v[1 - s]);
            let (ns, no) = (self.size(s), self.size(1 - s));
            for x in 0..ns {
                for y in 0..no {
                    for w in 0..no {
                        if self.q(s, x, go.add(y, w)) != gs.add(self.q(s, x, y), self.q(s, x, w)) {
                            return Err(format!("Q_{} is not additive (sigma = {})", self.label(s, x), sign(s)));
                        }
                    }
                }
                for k in [-1i64, 2, 3] {
                    let kx = gs.times(x, k);
                    if (0..no).any(|y| self.q(s, kx, y) != gs.times(self.q(s, x, y), k * k)) {
                        return Err(format!("Q_(x*{k}) != Q_x*{} at x = {}", k * k, self.label(s, x)));
                    }
                }
            }
            for x in 0..ns {
                for x2 in 0..ns {
                    let xx = gs.add(x, x2);
                    for z in 0..ns {
                        for y in 0..no {
                            if self.q2(s, xx, z, y) != gs.add(self.q2(s, x, z, y), self.q2(s, x2, z, y)) {
                                return Err(format!(
                                    "Q_(x,z) not additive in x at x = {}, x' = {}, z = {}",
                                    self.label(s, x),
                                    self.label(s, x2),
                                    self.label(s, z)
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn for_triples(&self, f: impl Fn(usize, usize, usize, usize) -> bool, kinds: [usize; 3], what: &str) -> Result<(), String> {
        for s in 0..2 {
            let sides = kinds.map(|k| if k == 0 { s } else { 1 - s });
            for a in 0..self.size(sides[0]) {
                for b in 0..self.size(sides[1]) {
                    for c in 0..self.size(sides[2]) {
                        if !f(s, a, b, c) {
                            return Err(format!(
                                "{what}: sigma = {}, ({}, {}, {})",
                                sign(s),
                                self.label(sides[0], a),
                                self.label(sides[1], b),
                                self.label(sides[2], c)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn jp1(&self, s: usize, x: usize, y: usize, z: usize) -> bool {
        self.triple(s, x, y, self.q(s, x, z)) == self.q(s, x, self.triple(1 - s, y, x, z))
    }

    fn jp2(&self, s: usize, x: usize, y: usize, z: usize) -> bool {
        self.triple(s, self.q(s, x, y), y, z) == self.triple(s, x, self.q(1 - s, y, x), z)
    }

    fn jp3(&self, s: usize, x: usize, y: usize, w: usize) -> bool {
        self.q(s, self.q(s, x, y), w) == self.q(s, x, self.q(1 - s, y, self.q(s, x, w)))
    }

    fn jp1_lin(&self, s: usize, x: usize, z: usize, v: usize, y: usize, w: usize) -> bool {
        let g = &self.v[s];
        let lhs = g.add(
            g.add(self.triple(s, x, y, self.q2(s, v, z, w)), self.triple(s, v, y, self.q2(s, x, z, w))),
            self.triple(s, z, y, self.q2(s, x, v, w)),
        );
        let t = |a: usize| self.triple(1 - s, y, a, w);
        let rhs = g.add(g.add(self.q2(s, v, z, t(x)), self.q2(s, x, z, t(v))), self.q2(s, x, v, t(z)));
        lhs == rhs
    }

    fn jp2_lin(&self, s: usize, x: usize, z: usize, v: usize, y: usize, w: usize) -> bool {
        let g = &self.v[s];
        let lhs = g.add(self.triple(s, v, self.q2(1 - s, y, w, x), z), self.triple(s, x, self.q2(1 - s, y, w, v), z));
        let rhs = g.add(self.triple(s, self.q2(s, x, v, y), w, z), self.triple(s, self.q2(s, x, v, w), y, z));
        lhs == rhs
    }

    fn check_linearized(&self, budget: usize, additive: bool) -> [Check; 2] {
        let mut out = Vec::new();
        type Lin = fn(&JordanPair, usize, usize, usize, usize, usize, usize) -> bool;
        let cases: [(&str, &str, Lin); 2] = [
            (
                "JP1_linearized",
                "{x y wQ_(v,z)} + {v y wQ_(x,z)} + {z y wQ_(x,v)} = {y x w}Q_(v,z) + {y v w}Q_(x,z) + {y z w}Q_(x,v)",
                JordanPair::jp1_lin,
            ),
            (
                "JP2_linearized",
                "{v xQ_(y,w) z} + {x vQ_(y,w) z} = {yQ_(x,v) w z} + {wQ_(x,v) y z}",
                JordanPair::jp2_lin,
            ),
        ];
        for (name, anchor, f) in cases {
            let mut res = Ok(());
            let mut detail = "exhaustive".to_string();
            'outer: for s in 0..2 {
                let (ns, no) = (self.size(s), self.size(1 - s));
                let full = ns.pow(3).saturating_mul(no * no) <= budget;
                let (ls, lo): (Vec<usize>, Vec<usize>) = if full {
                    ((0..ns).collect(), (0..no).collect())
                } else {
                    if !additive {
                        res = Err("too large for exhaustive search and Q is not additive".into());
                        break;
                    }
                    detail = "on additive generators; both sides are additive in every argument".into();
                    (self.v[s].generators(), self.v[1 - s].generators())
                };
                for &x in &ls {
                    for &z in &ls {
                        for &v in &ls {
                            for &y in &lo {
                                for &w in &lo {
                                    if !f(self, s, x, z, v, y, w) {
                                        res = Err(format!(
                                            "sigma = {}, x = {}, z = {}, v = {}, y = {}, w = {}",
                                            sign(s),
                                            self.label(s, x),
                                            self.label(s, z),
                                            self.label(s, v),
                                            self.label(1 - s, y),
                                            self.label(1 - s, w)
                                        ));
                                        break 'outer;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out.push(Check::new(name, anchor, res).with_detail(detail));
        }
        let b = out.pop().unwrap();
        let a = out.pop().unwrap();
        [a, b]
    }

    /// Quadratic-map laws, JP1–JP3 on all triples, their linearizations,
    /// locality and the basic identities of local Jordan pairs.
    pub fn axiom_suite(&self, budget: usize) -> Vec<Check> {
        let mut out = Vec::new();
        let quad = self.check_quadratic();
        let additive = quad.is_ok();
        out.push(Check::new("Q_quadratic", "Q_x additive, Q_(x,z) biadditive, Q_(xk) = Q_x k^2", quad));
        out.push(Check::new(
            "JP1",
            "{x y zQ_x} = {y x z}Q_x",
            self.for_triples(|s, x, y, z| self.jp1(s, x, y, z), [0, 1, 1], "JP1"),
        ));
        out.push(Check::new(
            "JP2",
            "{yQ_x y z} = {x xQ_y z}",
            self.for_triples(|s, x, y, z| self.jp2(s, x, y, z), [0, 1, 0], "JP2"),
        ));
        out.push(Check::new(
            "JP3",
            "Q_(yQ_x) = Q_x Q_y Q_x",
            self.for_triples(|s, x, y, w| self.jp3(s, x, y, w), [0, 1, 1], "JP3"),
        ));
        out.extend(self.check_linearized(budget, additive));
        out.push(Check::new("local", "the non-invertible elements form a proper ideal", self.check_local()));
        out.extend(self.basic_suite());
        out
    }

    /// The basic identities (i)–(xii) of Jordan pairs, exhaustively.
    pub fn basic_suite(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let t = |s: usize, a: usize, b: usize, c: usize| self.triple(s, a, b, c);
        out.push(Check::new(
            "jp_qxyqx",
            "Q_(x, yQ_x) = Q_x D_(x,y) = D_(y,x) Q_x",
            self.for_triples(
                |s, x, y, w| {
                    let a = self.q2(s, x, self.q(s, x, y), w);
                    a == t(s, x, y, self.q(s, x, w)) && a == self.q(s, x, t(1 - s, y, x, w))
                },
                [0, 1, 1],
                "identity",
            ),
        ));
        let inv_res = (|| {
            for s in 0..2 {
                for x in self.invertibles(s) {
                    let qinv = self.q_inverse(s, x).unwrap();
                    let xi = self.inverse(s, x).unwrap();
                    for y in 0..self.size(s) {
                        for w in 0..self.size(1 - s) {
                            if qinv[self.q2(s, x, y, w)] as usize != t(1 - s, xi, y, w) {
                                return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(s, y)));
                            }
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("jp_qxy_qxinv", "Q_(x,y) Q_x^-1 = D_(x^-1, y) for invertible x", inv_res));
        let berg_res = (|| {
            for s in 0..2 {
                let (gs, go) = (&self.v[s], &self.v[1 - s]);
                for x in 0..self.size(s) {
                    for y in 0..self.size(1 - s) {
                        let b = self.bergman(s, x, y);
                        if let Some(xi) = self.inverse(s, x) {
                            let d = go.sub(xi, y);
                            if (0..self.size(s)).any(|z| b[z] as usize != self.q(s, x, self.q(1 - s, d, z))) {
                                return Err(format!("B = Q_(x^-1 - y) Q_x fails at x = {}, y = {}", self.label(s, x), self.label(1 - s, y)));
                            }
                        }
                        if let Some(yi) = self.inverse(1 - s, y) {
                            let d = gs.sub(x, yi);
                            if (0..self.size(s)).any(|z| b[z] as usize != self.q(s, d, self.q(1 - s, y, z))) {
                                return Err(format!("B = Q_y Q_(x - y^-1) fails at x = {}, y = {}", self.label(s, x), self.label(1 - s, y)));
                            }
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("jp_bergman_factor", "B_(x,y) = Q_(x^-1 - y) Q_x and B_(x,y) = Q_y Q_(x - y^-1)", berg_res));
        out.push(Check::new(
            "jp_qi_sum",
            "(x^y, z) quasi-invertible iff (x, y+z) is, and x^(y+z) = (x^y)^z",
            self.for_triples(
                |s, x, y, z| match self.quasi_inverse(s, x, y) {
                    None => true,
                    Some(xy) => {
                        let lhs = self.quasi_inverse(s, xy, z);
                        lhs == self.quasi_inverse(s, x, self.v[1 - s].add(y, z))
                    }
                },
                [0, 1, 1],
                "identity",
            ),
        ));
        let sym_res = (|| {
            for s in 0..2 {
                for x in 0..self.size(s) {
                    for y in 0..self.size(1 - s) {
                        let a = self.quasi_inverse(s, x, y);
                        let b = self.quasi_inverse(1 - s, y, x);
                        match (a, b) {
                            (None, None) => {}
                            (Some(xy), Some(yx)) if xy == self.v[s].add(x, self.q(s, x, yx)) => {}
                            _ => return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(1 - s, y))),
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("jp_qi_switch", "(x,y) quasi-invertible iff (y,x) is, and x^y = x + y^x Q_x", sym_res));
        out.push(Check::new(
            "jp_qi_qy",
            "(x, zQ_y) quasi-invertible iff (xQ_y, z) is, and (xQ_y)^z = x^(zQ_y) Q_y",
            self.for_triples(
                |s, x, y, z| {
                    let a = self.quasi_inverse(s, x, self.q(1 - s, y, z));
                    let b = self.quasi_inverse(1 - s, self.q(1 - s, y, x), z);
                    match (a, b) {
                        (None, None) => true,
                        (Some(a), Some(b)) => b == self.q(1 - s, y, a),
                        _ => false,
                    }
                },
                [0, 1, 0],
                "identity",
            ),
        ));
        out.push(Check::new("rad_ideal", "Rad V is an ideal", self.check_ideal([&self.rad[0], &self.rad[1]])));
        let local = self.is_local();
        let rad_nonin = (0..2).all(|s| (0..self.size(s)).all(|x| self.rad[s][x] == !self.is_invertible(s, x)));
        out.push(Check::new(
            "rad_noninvertible",
            "V local implies Rad V is the set of non-invertible elements",
            if !local || rad_nonin { Ok(()) } else { Err("Rad V differs from the non-invertible elements".into()) },
        ));
        let reps = [self.coset_reps(0), self.coset_reps(1)];
        let division = (0..2).all(|s| {
            (0..self.size(s)).filter(|&x| !self.rad[s][x]).all(|x| {
                let mut seen = std::collections::HashSet::new();
                let classes: std::collections::HashSet<usize> = reps[1 - s].iter().copied().collect();
                classes.iter().all(|&y| seen.insert(reps[s][self.q(s, x, y)])) && seen.len() == classes.len()
            })
        });
        let nontrivial = (0..2).any(|s| reps[s].iter().any(|&r| r != 0));
        out.push(Check::new(
            "quotient_division_local",
            "V/Rad V a nontrivial division pair implies V local",
            if !(division && nontrivial) || local { Ok(()) } else { Err("quotient is division but V is not local".into()) },
        ));
        let lift = (|| {
            for s in 0..2 {
                for x in 0..self.size(s) {
                    for y in 0..self.size(1 - s) {
                        let b = self.bergman(s, x, y);
                        let mut img = std::collections::HashMap::new();
                        let mut ok = true;
                        for z in 0..self.size(s) {
                            let c = reps[s][b[z] as usize];
                            if *img.entry(reps[s][z]).or_insert(c) != c {
                                ok = false;
                            }
                        }
                        let mut vals: Vec<usize> = img.values().copied().collect();
                        vals.sort_unstable();
                        vals.dedup();
                        let mod_qi = ok && vals.len() == img.len();
                        if mod_qi && self.quasi_inverse(s, x, y).is_none() {
                            return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(1 - s, y)));
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("qi_lift", "(x,y) quasi-invertible mod Rad V implies (x,y) quasi-invertible", lift));
        let rad_qi = (|| {
            for s in 0..2 {
                for x in self.radical(s) {
                    for y in 0..self.size(1 - s) {
                        match self.quasi_inverse(s, x, y) {
                            Some(xy) if self.rad[s][xy] => {}
                            _ => return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(1 - s, y))),
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("rad_qi_closed", "x in Rad V+ implies x^y in Rad V+", rad_qi));
        let inv_rad = (|| {
            for s in 0..2 {
                let inv = self.invertibles(s);
                for &x in &inv {
                    for &y in &inv {
                        if self.rad[s][self.v[s].sub(x, y)] {
                            let d = self.v[1 - s].sub(self.inverse(s, x).unwrap(), self.inverse(s, y).unwrap());
                            if !self.rad[1 - s][d] {
                                return Err(format!("sigma = {}, x = {}, y = {}", sign(s), self.label(s, x), self.label(s, y)));
                            }
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("inverse_rad", "x - y in Rad V implies x^-1 - y^-1 in Rad V", inv_rad));
        out
    }
}

/// Checks that (h⁺, h⁻) is an additive map a → b preserving Q.
pub fn check_pair_homomorphism(a: &JordanPair, b: &JordanPair, h: [&[usize]; 2]) -> Result<(), String> {
    for s in 0..2 {
        if h[s].len() != a.size(s) || h[s].iter().any(|&y| y >= b.size(s)) {
            return Err(format!("map on V{} has the wrong shape", sign(s)));
        }
        for x in 0..a.size(s) {
            for y in 0..a.size(s) {
                if h[s][a.v[s].add(x, y)] != b.v[s].add(h[s][x], h[s][y]) {
                    return Err(format!("not additive at V{}: {}, {}", sign(s), a.label(s, x), a.label(s, y)));
                }
            }
        }
    }
    for s in 0..2 {
        for x in 0..a.size(s) {
            for y in 0..a.size(1 - s) {
                if h[s][a.q(s, x, y)] != b.q(s, h[s][x], h[1 - s][y]) {
                    return Err(format!("Q not preserved: sigma = {}, x = {}, y = {}", sign(s), a.label(s, x), a.label(1 - s, y)));
                }
            }
        }
    }
    Ok(())
}

pub fn check_pair_isomorphism(a: &JordanPair, b: &JordanPair, h: [&[usize]; 2]) -> Result<(), String> {
    for s in 0..2 {
        if a.size(s) != b.size(s) {
            return Err(format!("V{} sizes differ", sign(s)));
        }
        let mut seen = vec![false; b.size(s)];
        if h[s].iter().any(|&y| y >= seen.len() || std::mem::replace(&mut seen[y], true)) {
            return Err(format!("map on V{} is not bijective", sign(s)));
        }
    }
    check_pair_homomorphism(a, b, h)
}

/// Searches for an isomorphism a → b: h⁺ ranges over additive bijections
/// and h⁻ is forced by h⁻(w) = h⁺(wQ_u)Q_{h⁺(u)}⁻¹ for an invertible u.
pub fn find_pair_isomorphism(a: &JordanPair, b: &JordanPair) -> Result<[Vec<usize>; 2], String> {
    if a.size(0) != b.size(0) || a.size(1) != b.size(1) {
        return Err("module sizes differ".into());
    }
    let u = *a.invertibles(0).first().ok_or("no invertible element in V+")?;
    let gens = a.v[0].generators();
    let n = b.size(0);
    let total = n.checked_pow(gens.len() as u32).ok_or("search space too large")?;
    if total > 1_000_000 {
        return Err("search space too large".into());
    }
    for code in 0..total {
        let imgs: Vec<usize> = (0..gens.len()).map(|i| (code / n.pow(i as u32)) % n).collect();
        let Some(hp) = extend_additive(&a.v[0], &b.v[0], &gens, &imgs) else { continue };
        let hu = hp[u];
        let Some(qinv) = b.q_inverse(0, hu) else { continue };
        let hm: Vec<usize> = (0..a.size(1)).map(|w| qinv[hp[a.q(0, u, w)]] as usize).collect();
        if check_pair_isomorphism(a, b, [&hp, &hm]).is_ok() {
            return Ok([hp, hm]);
        }
    }
    Err("no isomorphism exists".into())
}

fn extend_additive(a: &AbGroup, b: &AbGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut h = vec![usize::MAX; a.len()];
    h[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        for (&g, &im) in gens.iter().zip(imgs) {
            let y = a.add(x, g);
            let hy = b.add(h[x], im);
            if h[y] == usize::MAX {
                h[y] = hy;
                stack.push(y);
            } else if h[y] != hy {
                return None;
            }
        }
    }
    let mut seen = vec![false; b.len()];
    h.iter().all(|&y| y != usize::MAX && !std::mem::replace(&mut seen[y], true)).then_some(h)
}

/// A point of P(V) in the normal form [x,0] or [e, e⁻¹+y] with y ∈ Rad V⁻.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PvPoint {
    First(usize),
    Second(usize),
}

/// P(V) for a local pair V and invertible e ∈ V⁺, with its α, ζ and μ maps.
#[derive(Clone, Debug)]
pub struct PvModel {
    pub pair: JordanPair,
    pub e: usize,
    pub e_inv: usize,
    second: Vec<Option<usize>>,
    rad_minus: Vec<usize>,
}

impl PvModel {
    pub fn new(pair: JordanPair, e: usize) -> Result<PvModel, JordanError> {
        pair.check_local().map_err(JordanError::NotLocal)?;
        let e_inv = pair.inverse(0, e).ok_or_else(|| JordanError::NotInvertible(pair.label(0, e).to_string()))?;
        let rad_minus = pair.radical(1);
        let mut second = vec![None; pair.size(1)];
        for (i, &y) in rad_minus.iter().enumerate() {
            second[y] = Some(pair.size(0) + i);
        }
        Ok(PvModel { pair, e, e_inv, second, rad_minus })
    }

    pub fn len(&self) -> usize {
        self.pair.size(0) + self.rad_minus.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self, x: usize) -> usize {
        x
    }

    pub fn second(&self, y: usize) -> Option<usize> {
        self.second[y]
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn inf(&self) -> usize {
        self.second[0].expect("0 lies in the radical")
    }

    pub fn coords(&self, p: usize) -> PvPoint {
        let n = self.pair.size(0);
        if p < n {
            PvPoint::First(p)
        } else {
            PvPoint::Second(self.rad_minus[p - n])
        }
    }

    pub fn label(&self, p: usize) -> String {
        match self.coords(p) {
            PvPoint::First(x) => format!("[{},0]", self.pair.label(0, x)),
            PvPoint::Second(y) => format!("[e,e^-1+{}]", self.pair.label(1, y)),
        }
    }

    /// The point [e, e⁻¹+s] for any s ∈ V⁻.
    pub fn point_second(&self, s: usize) -> usize {
        match self.second[s] {
            Some(p) => p,
            None => {
                let si = self.pair.inverse(1, s).expect("elements outside the radical are invertible");
                self.first(self.pair.group(0).neg(si))
            }
        }
    }

    pub fn equiv_set(&self) -> EquivSet {
        let reps = self.pair.coset_reps(0);
        let labels: Vec<usize> = (0..self.len())
            .map(|p| match self.coords(p) {
                PvPoint::First(x) => reps[x],
                PvPoint::Second(_) => usize::MAX,
            })
            .collect();
        EquivSet::from_labels(&labels)
    }

    pub fn alpha(&self, v: usize) -> Perm {
        let g = self.pair.group(0);
        Perm::from_fn(self.len(), |p| match self.coords(p) {
            PvPoint::First(x) => self.first(g.add(x, v)),
            PvPoint::Second(y) => {
                let yv = self.pair.quasi_inverse(1, y, v).expect("radical elements are properly quasi-invertible");
                self.second(yv).expect("quasi-inverses of radical elements stay in the radical")
            }
        })
        .expect("alpha is a permutation")
    }

    pub fn zeta(&self, w: usize) -> Perm {
        let g1 = self.pair.group(1);
        Perm::from_fn(self.len(), |p| match self.coords(p) {
            PvPoint::Second(y) => self.point_second(g1.add(y, w)),
            PvPoint::First(x) if self.pair.in_rad(0, x) => {
                let xw = self.pair.quasi_inverse(0, x, w).expect("radical elements are properly quasi-invertible");
                self.first(xw)
            }
            PvPoint::First(x) => {
                let xi = self.pair.inverse(0, x).expect("elements outside the radical are invertible");
                self.point_second(g1.sub(w, xi))
            }
        })
        .expect("zeta is a permutation")
    }

    /// μ_v = ζ_{v⁻¹} α_v ζ_{v⁻¹}.
    pub fn mu_word(&self, v: usize) -> Option<Perm> {
        let w = self.pair.inverse(0, v)?;
        let z = self.zeta(w);
        Some(z.then(&self.alpha(v)).then(&z))
    }

    /// μ_v by its closed form on the three kinds of points.
    pub fn mu_closed(&self, v: usize) -> Option<Perm> {
        let qinv = self.pair.q_inverse(0, v)?;
        let g0 = self.pair.group(0);
        Perm::from_fn(self.len(), |p| match self.coords(p) {
            PvPoint::Second(y) => self.first(self.pair.q(0, v, y)),
            PvPoint::First(x) if self.pair.in_rad(0, x) => self.point_second(qinv[x] as usize),
            PvPoint::First(x) => {
                let xi = self.pair.inverse(0, x).unwrap();
                self.first(g0.neg(self.pair.q(0, v, xi)))
            }
        })
    }

    /// The seed (P(V), ∼, {α_v}, μ_e).
    pub fn seed(&self) -> Seed {
        Seed {
            name: format!("M{}", self.pair.name),
            eq: self.equiv_set(),
            labels: (0..self.len()).map(|p| self.label(p)).collect(),
            u: (0..self.pair.size(0)).map(|v| self.alpha(v)).collect(),
            tau: self.mu_closed(self.e).expect("e is invertible"),
            inf: self.inf(),
        }
    }

    /// Number of projective-equivalence classes of pairs (x, y), by union-find.
    pub fn count_pair_classes(&self) -> usize {
        let jp = &self.pair;
        let (n0, n1) = (jp.size(0), jp.size(1));
        let mut parent: Vec<usize> = (0..n0 * n1).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for x in 0..n0 {
            for y in 0..n1 {
                for y2 in 0..n1 {
                    if let Some(x2) = jp.quasi_inverse(0, x, jp.group(1).sub(y, y2)) {
                        let (a, b) = (find(&mut parent, x * n1 + y), find(&mut parent, x2 * n1 + y2));
                        parent[a] = b;
                    }
                }
            }
        }
        (0..n0 * n1).filter(|&i| find(&mut parent, i) == i).count()
    }

    /// Whether (x, y) and (x', y') are projectively equivalent.
    pub fn equivalent_pairs(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        self.pair.quasi_inverse(0, a.0, self.pair.group(1).sub(a.1, b.1)) == Some(b.0)
    }
}

/// Checks on M(V): point counts, representatives and the closed forms.
pub fn mv_suite(pv: &PvModel, m: &Lms) -> Vec<Check> {
    let jp = &pv.pair;
    let mut out = Vec::new();
    let expect = jp.size(0) + jp.radical(1).len();
    let classes = jp.residue_classes() + 1;
    out.push(
        Check::new(
            "pv_point_count",
            "|P(V)| = |V+| + |Rad V-| with |V+/Rad V+| + 1 classes",
            if pv.len() == expect && m.n_classes() == classes {
                Ok(())
            } else {
                Err(format!("{} points, {} classes", pv.len(), m.n_classes()))
            },
        )
        .with_detail(format!("{} points, {} classes", pv.len(), classes)),
    );
    let pc = pv.count_pair_classes();
    let reps_distinct = (0..pv.len()).all(|p| {
        let a = rep_pair(pv, p);
        (0..p).all(|q| !pv.equivalent_pairs(a, rep_pair(pv, q)))
    });
    out.push(Check::new(
        "pv_representatives",
        "[x,0] (x in V+) and [e,e^-1+y] (y in Rad V-) are a system of representatives",
        if pc == pv.len() && reps_distinct { Ok(()) } else { Err(format!("{pc} classes of pairs")) },
    ));
    let g1 = jp.group(1);
    let inv_rep = jp.invertibles(0).into_iter().find(|&t| {
        let ti = jp.inverse(0, t).unwrap();
        !pv.equivalent_pairs((t, 0), (pv.e, g1.sub(pv.e_inv, ti)))
    });
    out.push(Check::new(
        "pv_inverse_representation",
        "[t,0] = [e, e^-1 - t^-1] for invertible t",
        inv_rep.map_or(Ok(()), |t| Err(format!("t = {}", jp.label(0, t)))),
    ));
    let inv = jp.invertibles(0);
    let each = |f: &dyn Fn(usize) -> bool| inv.iter().find(|&&v| !f(v)).map_or(Ok(()), |&v| Err(format!("v = {}", jp.label(0, v))));
    out.push(Check::new(
        "mu_closed_form",
        "zeta_(v^-1) alpha_v zeta_(v^-1) agrees with the closed form of mu_v",
        each(&|v| pv.mu_word(v) == pv.mu_closed(v)),
    ));
    out.push(Check::new(
        "mu_involution",
        "mu_v^2 = id",
        each(&|v| pv.mu_closed(v).map_or(false, |p| p.then(&p).is_identity())),
    ));
    out.push(Check::new(
        "mu_on_invertibles",
        "[x,0] mu_v = [-x^-1 Q_v, 0] for invertible x",
        each(&|v| {
            let mw = pv.mu_word(v).unwrap();
            inv.iter().all(|&x| mw.on(pv.first(x)) == pv.first(jp.group(0).neg(jp.q(0, v, jp.inverse(0, x).unwrap()))))
        }),
    ));
    out.push(Check::new(
        "alpha_mu_conjugate",
        "alpha_v^(mu_t) = zeta_(v Q_t^-1)",
        each(&|t| {
            let mt = pv.mu_closed(t).unwrap();
            let qinv = jp.q_inverse(0, t).unwrap();
            (0..jp.size(0)).all(|v| pv.alpha(v).conj(&mt) == pv.zeta(qinv[v] as usize))
        }),
    ));
    let qe = jp.q_inverse(0, pv.e).unwrap();
    out.push(Check::new(
        "gamma_is_zeta",
        "gamma_[v,0] = zeta_(v Q_e^-1)",
        (0..jp.size(0))
            .find(|&v| m.gamma(pv.first(v)) != &pv.zeta(qe[v] as usize))
            .map_or(Ok(()), |v| Err(format!("v = {}", jp.label(0, v)))),
    ));
    out.push(Check::new(
        "lms_mu_matches",
        "mu_[t,0] = mu_t for invertible t",
        each(&|t| m.try_mu(pv.first(t)).ok() == pv.mu_word(t).as_ref()),
    ));
    let zetas: std::collections::HashSet<Perm> = (0..jp.size(1)).map(|w| pv.zeta(w)).collect();
    out.push(Check::new(
        "U0_is_zeta",
        "U_0 = {zeta_w}",
        if m.u_zero().order() == zetas.len() && m.u_zero().elements().iter().all(|p| zetas.contains(p)) {
            Ok(())
        } else {
            Err("U_0 differs from the zeta maps".into())
        },
    ));
    out
}

fn rep_pair(pv: &PvModel, p: usize) -> (usize, usize) {
    match pv.coords(p) {
        PvPoint::First(x) => (x, 0),
        PvPoint::Second(y) => (pv.e, pv.pair.group(1).add(pv.e_inv, y)),
    }
}

/// Builds M(V) from a local pair and an invertible e.
pub fn build_mv(pair: JordanPair, e: usize) -> Result<(PvModel, Lms), String> {
    let pv = PvModel::new(pair, e).map_err(|e| e.to_string())?;
    let m = Lms::construct(pv.seed()).map_err(|e| e.to_string())?;
    Ok((pv, m))
}

/// One side of the reconstructed pair: V⁺ = X∖class(∞) or V⁻ = X∖class(0).
#[derive(Clone, Debug)]
pub struct Side {
    pub points: Vec<usize>,
    pub index: Vec<Option<usize>>,
    group: AbGroup,
}

impl Side {
    pub fn idx(&self, p: usize) -> usize {
        self.index[p].expect("point lies on this side")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn group(&self) -> &AbGroup {
        &self.group
    }
}

/// The Jordan pair reconstructed from a local Moufang set.
#[derive(Clone, Debug)]
pub struct JordanRecon {
    pub pair: JordanPair,
    pub e: usize,
    pub sides: [Side; 2],
    /// bilinear μ_{x,z} (side 0) and μ̃_{y,w} (side 1), tables from the other side
    mu_bi: [Vec<Vec<u32>>; 2],
    half: [Vec<u32>; 2],
}

impl JordanRecon {
    /// y μ_{x,z} (s = 0) or x μ̃_{y,w} (s = 1), all as side indices.
    pub fn mu_bi(&self, s: usize, x: usize, z: usize, y: usize) -> usize {
        self.mu_bi[s][x * self.sides[s].len() + z][y] as usize
    }

    pub fn half(&self, s: usize, x: usize) -> usize {
        self.half[s][x] as usize
    }
}

pub struct JordanReconOutcome {
    pub checks: Vec<Check>,
    pub recon: Option<JordanRecon>,
}

fn build_side(m: &Lms, s: usize) -> Result<Side, String> {
    let (base, pts) = if s == 0 { (m.zero, m.finite_points()) } else { (m.inf, m.cofinite_points()) };
    let mut points = vec![base];
    points.extend(pts.into_iter().filter(|&p| p != base));
    let mut index = vec![None; m.len()];
    for (i, &p) in points.iter().enumerate() {
        index[p] = Some(i);
    }
    let n = points.len();
    let mut add = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let p = if s == 0 {
                m.add(points[a], points[b])
            } else {
                let ga = m.gamma(m.tau.on(points[a]));
                let gb = m.gamma(m.tau.on(points[b]));
                gb.on(ga.on(m.inf))
            };
            add[a * n + b] = index[p].ok_or_else(|| format!("sum of {} and {} leaves the side", m.label(points[a]), m.label(points[b])))? as u32;
        }
    }
    let labels = points.iter().map(|&p| m.label(p).to_string()).collect();
    let group = AbGroup::new(labels, add).map_err(|e| e.to_string())?;
    Ok(Side { points, index, group })
}

/// Applies the construction: (J1)–(J3), the bilinear extension (J4), the
/// unit-level identities and Q = μ_{x,x}·½; then the pair is verified.
pub fn reconstruct_jordan(m: &Lms, e: usize, budget: usize) -> JordanReconOutcome {
    let mut checks = Vec::new();
    macro_rules! bail {
        () => {
            if !checks.iter().all(Check::passed) {
                return JordanReconOutcome { checks, recon: None };
            }
        };
    }
    if !m.is_unit(e) {
        checks.push(Check::fail("unit_e", "e is a unit", m.label(e)));
        bail!();
    }
    let special = m.units().iter().find(|&&x| m.tilde(x) != m.neg(x));
    checks.push(Check::new("J1", "M is special", special.map_or(Ok(()), |&x| Err(format!("x = {}", m.label(x))))));
    checks.push(Check::new(
        "J2",
        "U_inf is abelian",
        if m.u_inf_abelian() { Ok(()) } else { Err("generators do not commute".into()) },
    ));
    let j3 = m.units().iter().find(|&&x| !m.is_unit(m.times(x, 2)) || !m.is_unit(m.times(x, 3)));
    checks.push(Check::new(
        "J3",
        "x unit implies x*2 and x*3 units",
        j3.map_or(Ok(()), |&x| Err(format!("x = {}", m.label(x)))),
    ));
    bail!();
    let sides = match (build_side(m, 0), build_side(m, 1)) {
        (Ok(a), Ok(b)) => {
            checks.push(Check::pass("modules", "V+ and V- are abelian groups"));
            [a, b]
        }
        (Err(w), _) | (_, Err(w)) => {
            checks.push(Check::fail("modules", "V+ and V- are abelian groups", w));
            return JordanReconOutcome { checks, recon: None };
        }
    };
    let n = [sides[0].len(), sides[1].len()];
    // μ_t as tables from side 1 - s to side s, per unit point
    let mut mu_tab: Vec<[Vec<u32>; 2]> = vec![[Vec::new(), Vec::new()]; m.len()];
    for &t in m.units() {
        let mt = m.mu(t);
        for s in 0..2 {
            mu_tab[t][s] = sides[1 - s].points.iter().map(|&p| sides[s].idx(mt.on(p)) as u32).collect();
        }
    }
    let mu_add = (|| {
        for &t in m.units() {
            for s in 0..2 {
                let (go, gs) = (&sides[1 - s].group, &sides[s].group);
                for a in 0..n[1 - s] {
                    for b in 0..n[1 - s] {
                        let l = mu_tab[t][s][go.add(a, b)] as usize;
                        if l != gs.add(mu_tab[t][s][a] as usize, mu_tab[t][s][b] as usize) {
                            return Err(format!("t = {}", m.label(t)));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    checks.push(Check::new("mu_additive", "mu_t is additive between V+ and V-", mu_add));
    let halves: [Option<Vec<u32>>; 2] = [0, 1].map(|s| {
        let g = &sides[s].group;
        (g.uniquely_divisible(2) && g.uniquely_divisible(3)).then(|| (0..n[s]).map(|x| g.divide(x, 2).unwrap() as u32).collect())
    });
    checks.push(Check::new(
        "unique_divisibility",
        "V+ and V- are uniquely 2- and 3-divisible",
        if halves.iter().all(Option::is_some) { Ok(()) } else { Err("division by 2 or 3 is not unique".into()) },
    ));
    bail!();
    let half = halves.map(Option::unwrap);

    // bilinear extension by cases
    let mut mu_bi: [Vec<Vec<u32>>; 2] = [Vec::new(), Vec::new()];
    for s in 0..2 {
        let side = &sides[s];
        let g = &side.group;
        let unit = |a: usize| m.is_unit(side.points[a]);
        let ns = n[s];
        let mut tab: Vec<Option<Vec<u32>>> = vec![None; ns * ns];
        let pw = |a: &[u32], b: &[u32], f: &dyn Fn(usize, usize) -> usize| -> Vec<u32> {
            a.iter().zip(b).map(|(&x, &y)| f(x as usize, y as usize) as u32).collect()
        };
        let base = |x: usize, z: usize| -> Vec<u32> {
            let xz = g.add(x, z);
            let (a, b, c) = (&mu_tab[side.points[xz]][s], &mu_tab[side.points[x]][s], &mu_tab[side.points[z]][s]);
            let d = pw(a, b, &|u, v| g.sub(u, v));
            pw(&d, c, &|u, v| g.sub(u, v))
        };
        let mut failure = None;
        for x in 0..ns {
            for z in 0..ns {
                if unit(x) && unit(z) {
                    if unit(g.add(x, z)) {
                        tab[x * ns + z] = Some(base(x, z));
                    } else if unit(g.add(g.neg(x), z)) {
                        let t = base(g.neg(x), z);
                        tab[x * ns + z] = Some(t.iter().map(|&u| g.neg(u as usize) as u32).collect());
                    } else {
                        failure = Some(format!("x = {}, z = {}", g.label(x), g.label(z)));
                    }
                }
            }
        }
        for x in 0..ns {
            for z in 0..ns {
                if unit(x) && !unit(z) {
                    let xz = g.add(x, z);
                    let xx = g.add(x, x);
                    match (&tab[x * ns + xz], &tab[x * ns + x]) {
                        (Some(a), Some(b)) if unit(xz) && unit(xx) => tab[x * ns + z] = Some(pw(a, b, &|u, v| g.sub(u, v))),
                        _ => failure = Some(format!("x = {}, z = {}", g.label(x), g.label(z))),
                    }
                }
            }
        }
        for x in 0..ns {
            for z in 0..ns {
                if !unit(x) && unit(z) {
                    tab[x * ns + z] = tab[z * ns + x].clone();
                }
            }
        }
        let ei = side.idx(e);
        for x in 0..ns {
            for z in 0..ns {
                if !unit(x) && !unit(z) {
                    let xe = g.add(x, ei);
                    match (&tab[xe * ns + z], &tab[ei * ns + z]) {
                        (Some(a), Some(b)) => tab[x * ns + z] = Some(pw(a, b, &|u, v| g.sub(u, v))),
                        _ => failure = Some(format!("x = {}, z = {}", g.label(x), g.label(z))),
                    }
                }
            }
        }
        if let Some(w) = failure {
            checks.push(Check::fail("J4_defined", "mu_(x,z) is defined for all x, z by the linearity cases", w));
            bail!();
        }
        mu_bi[s] = tab.into_iter().map(|t| t.unwrap()).collect();
    }
    let j4 = (|| {
        for s in 0..2 {
            let (g, go) = (&sides[s].group, &sides[1 - s].group);
            let ns = n[s];
            let t = |x: usize, z: usize| &mu_bi[s][x * ns + z];
            for x in 0..ns {
                for z in 0..ns {
                    if t(x, z) != t(z, x) {
                        return Err(format!("not symmetric at ({}, {})", g.label(x), g.label(z)));
                    }
                    for y in 0..n[1 - s] {
                        for y2 in 0..n[1 - s] {
                            if t(x, z)[go.add(y, y2)] as usize != g.add(t(x, z)[y] as usize, t(x, z)[y2] as usize) {
                                return Err(format!("mu_({},{}) is not additive", g.label(x), g.label(z)));
                            }
                        }
                    }
                    for x2 in 0..ns {
                        let lhs = t(g.add(x, x2), z);
                        let ok = (0..n[1 - s]).all(|y| lhs[y] as usize == g.add(t(x, z)[y] as usize, t(x2, z)[y] as usize));
                        if !ok {
                            return Err(format!(
                                "not additive in the first argument at ({}, {}, {})",
                                g.label(x),
                                g.label(x2),
                                g.label(z)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    checks.push(Check::new("J4", "the linearity cases define symmetric biadditive maps extending mu_(x,z)", j4));
    bail!();

    checks.extend(unit_identities(m, &sides, &mu_bi, &mu_tab));

    let mut q: [Vec<u32>; 2] = [Vec::new(), Vec::new()];
    for s in 0..2 {
        let ns = n[s];
        let mut t = vec![0u32; ns * n[1 - s]];
        for x in 0..ns {
            for y in 0..n[1 - s] {
                t[x * n[1 - s] + y] = half[s][mu_bi[s][x * ns + x][y] as usize];
            }
        }
        q[s] = t;
    }
    let [q0, q1] = q;
    let pair = match JordanPair::new(
        &format!("V({})", m.name),
        sides[0].group.clone(),
        sides[1].group.clone(),
        q0,
        q1,
    ) {
        Ok(p) => p,
        Err(err) => {
            checks.push(Check::fail("pair_built", "Q_x = mu_(x,x) * 1/2 defines a pair", err.to_string()));
            return JordanReconOutcome { checks, recon: None };
        }
    };
    checks.extend(pair.axiom_suite(budget));
    let rad_ok = (0..n[0]).all(|a| pair.in_rad(0, a) == m.equiv(sides[0].points[a], m.zero))
        && (0..n[1]).all(|b| pair.in_rad(1, b) == m.equiv(sides[1].points[b], m.inf));
    checks.push(Check::new(
        "radical_classes",
        "Rad V = (class(0), class(inf))",
        if rad_ok { Ok(()) } else { Err("radical differs from the classes of 0 and inf".into()) },
    ));
    let ok = checks.iter().all(Check::passed);
    JordanReconOutcome {
        checks,
        recon: ok.then_some(JordanRecon { pair, e, sides, mu_bi, half }),
    }
}

/// The identities for units that precede the pair axioms.
fn unit_identities(m: &Lms, sides: &[Side; 2], mu_bi: &[Vec<Vec<u32>>; 2], mu_tab: &[[Vec<u32>; 2]]) -> Vec<Check> {
    let mut out = Vec::new();
    let (p, mi) = (&sides[0], &sides[1]);
    let (gp, gm) = (&p.group, &mi.group);
    let (np, nm) = (p.len(), mi.len());
    // y μ_{x,z} for x, z ∈ V⁺ indices and y ∈ V⁻ index
    let bp = |x: usize, z: usize, y: usize| mu_bi[0][x * np + z][y] as usize;
    let bm = |y: usize, w: usize, x: usize| mu_bi[1][y * nm + w][x] as usize;
    // μ_t from V⁻ to V⁺ and from V⁺ to V⁻
    let to_p = |t: usize, y: usize| mu_tab[t][0][y] as usize;
    let to_m = |t: usize, x: usize| mu_tab[t][1][x] as usize;
    let units: Vec<usize> = m.units().to_vec();
    let first_fail = |f: &dyn Fn() -> Result<(), String>| f();

    out.push(Check::new(
        "jms_t_mu_tx",
        "t mu_(t,x) = -x*2 for units t",
        first_fail(&|| {
            for &t in &units {
                for x in 0..np {
                    if bp(p.idx(t), x, mi.idx(t)) != gp.neg(gp.times(x, 2)) {
                        return Err(format!("t = {}, x = {}", m.label(t), gp.label(x)));
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_mu_tt",
        "y mu_(t,t) = y mu_t * 2 for units t",
        first_fail(&|| {
            for &t in &units {
                let ti = p.idx(t);
                for y in 0..nm {
                    if bp(ti, ti, y) != gp.times(to_p(t, y), 2) {
                        return Err(format!("t = {}, y = {}", m.label(t), gm.label(y)));
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_reverse_order",
        "mu_s mu_(s,t) mu_t = mu_t mu_(s,t) mu_s = mu~_(s,t) for units s, t",
        first_fail(&|| {
            for &s in &units {
                for &t in &units {
                    let (sp, tp, sm, tm) = (p.idx(s), p.idx(t), mi.idx(s), mi.idx(t));
                    for x in 0..np {
                        let a = to_m(t, bp(sp, tp, to_m(s, x)));
                        let b = to_m(s, bp(sp, tp, to_m(t, x)));
                        let c = bm(sm, tm, x);
                        if a != c || b != c {
                            return Err(format!("s = {}, t = {}, x = {}", m.label(s), m.label(t), gp.label(x)));
                        }
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_s_mut_must",
        "s mu_t mu_(s,t) = -(t mu_s)*2 for units s, t",
        first_fail(&|| {
            for &s in &units {
                for &t in &units {
                    let lhs = bp(p.idx(s), p.idx(t), mi.idx(m.mu(t).on(s)));
                    let rhs = gp.neg(gp.times(p.idx(m.mu(s).on(t)), 2));
                    if lhs != rhs {
                        return Err(format!("s = {}, t = {}", m.label(s), m.label(t)));
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_tau_linear",
        "y mu_(x,z) tau = y tau mu~_(x tau, z tau)",
        first_fail(&|| {
            for x in 0..np {
                for z in 0..np {
                    let (xt, zt) = (mi.idx(m.tau.on(p.points[x])), mi.idx(m.tau.on(p.points[z])));
                    for y in 0..nm {
                        let lhs = m.tau.on(p.points[bp(x, z, y)]);
                        let yt = p.idx(m.tau.on(mi.points[y]));
                        if lhs != mi.points[bm(xt, zt, yt)] {
                            return Err(format!("x = {}, z = {}, y = {}", gp.label(x), gp.label(z), gm.label(y)));
                        }
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_jp1_units",
        "x mu~_(z mu_y, y) = y mu_(x,z) mu_y = z mu~_(x mu_y, y) for units x, z, y",
        first_fail(&|| {
            for &x in &units {
                for &z in &units {
                    for &y in &units {
                        let (xp, zp, ym) = (p.idx(x), p.idx(z), mi.idx(y));
                        let mid = to_m(y, bp(xp, zp, ym));
                        let a = bm(mi.idx(m.mu(y).on(z)), ym, xp);
                        let c = bm(mi.idx(m.mu(y).on(x)), ym, zp);
                        if a != mid || c != mid {
                            return Err(format!("x = {}, z = {}, y = {}", m.label(x), m.label(z), m.label(y)));
                        }
                    }
                }
            }
            Ok(())
        }),
    ));
    out.push(Check::new(
        "jms_jp2_units",
        "x mu_y mu_(x,z) = y mu_(y mu_x, z) for units x, z, y",
        first_fail(&|| {
            for &x in &units {
                for &z in &units {
                    for &y in &units {
                        let (xp, zp, ym) = (p.idx(x), p.idx(z), mi.idx(y));
                        let lhs = bp(xp, zp, mi.idx(m.mu(y).on(x)));
                        let rhs = bp(p.idx(m.mu(x).on(y)), zp, ym);
                        if lhs != rhs {
                            return Err(format!("x = {}, z = {}, y = {}", m.label(x), m.label(z), m.label(y)));
                        }
                    }
                }
            }
            Ok(())
        }),
    ));
    out
}

pub struct ExtraOutcome {
    pub checks: Vec<Check>,
    pub thetas: Option<Vec<Theta>>,
}

/// The extra condition (∗) over all t ∼ ∞ and x ≁ ∞.
pub fn check_extra(m: &Lms, rec: &JordanRecon) -> Result<(), String> {
    let [p, mi] = &rec.sides;
    let gm = &mi.group;
    for &t in mi.points.iter().filter(|&&t| m.equiv(t, m.inf)) {
        let ti = mi.idx(t);
        for x in 0..p.len() {
            let ta = mi.idx(m.alpha(p.points[x]).on(t));
            let t2 = rec.mu_bi(1, ti, ta, x);
            let t3 = rec.half(1, rec.half(1, rec.mu_bi(1, ti, ti, rec.mu_bi(0, x, x, ta))));
            let lhs = gm.add(gm.sub(ta, t2), t3);
            let rhs = gm.sub(ti, rec.half(1, rec.mu_bi(1, ti, ti, x)));
            if lhs != rhs {
                return Err(format!("t = {}, x = {}", m.label(t), m.label(p.points[x])));
            }
        }
    }
    Ok(())
}

/// (∗) and, when it holds, the isomorphism M ≅ M(V) with t ↦ [t,0] on V⁺
/// and t ↦ [e, e⁻¹+t] on class(∞).
pub fn verify_extra(m: &Lms, rec: &JordanRecon) -> ExtraOutcome {
    let mut checks = vec![Check::new(
        "extra_condition",
        "t alpha_x - x mu~_(t, t alpha_x) + t alpha_x mu_(x,x) mu~_(t,t) * 1/4 = t - x mu~_(t,t) * 1/2 for t ~ inf, x !~ inf",
        check_extra(m, rec),
    )];
    if !checks[0].passed() {
        return ExtraOutcome { checks, thetas: None };
    }
    let res = (|| {
        let (pv, mv) = build_mv(rec.pair.clone(), rec.sides[0].idx(rec.e))?;
        let phi: Vec<usize> = (0..m.len())
            .map(|x| match rec.sides[0].index[x] {
                Some(a) => Ok(pv.first(a)),
                None => pv.second(rec.sides[1].idx(x)).ok_or_else(|| format!("{} has no image", m.label(x))),
            })
            .collect::<Result<_, String>>()?;
        check_isomorphism(m, &mv, &phi)
    })();
    let thetas = res.as_ref().ok().cloned();
    checks.push(Check::new("extra_isomorphism", "M is isomorphic to M(V)", res.map(|_| ())));
    ExtraOutcome { checks, thetas }
}

/// V → M(V) → W and the explicit isomorphism W → V with [x,0] ↦ x and
/// [e, e⁻¹+y] ↦ y.
pub fn roundtrip_checks(pair: &JordanPair, e: usize, budget: usize) -> Vec<Check> {
    let (pv, m) = match build_mv(pair.clone(), e) {
        Ok(v) => v,
        Err(w) => return vec![Check::fail("mv_built", "M(V) is defined", w)],
    };
    let out = reconstruct_jordan(&m, pv.first(e), budget);
    let mut checks = out.checks;
    if let Some(rec) = out.recon {
        let hp: Vec<usize> = rec.sides[0]
            .points
            .iter()
            .map(|&p| match pv.coords(p) {
                PvPoint::First(x) => x,
                PvPoint::Second(_) => usize::MAX,
            })
            .collect();
        let hm: Vec<usize> = rec.sides[1]
            .points
            .iter()
            .map(|&p| match pv.coords(p) {
                PvPoint::Second(y) => y,
                PvPoint::First(x) => pair.inverse(0, x).map_or(usize::MAX, |xi| pair.group(1).neg(xi)),
            })
            .collect();
        checks.push(Check::new(
            "roundtrip_isomorphism",
            "[x,0] -> x, [e,e^-1+y] -> y is an isomorphism W -> V",
            check_pair_isomorphism(&rec.pair, pair, [&hp, &hm]),
        ));
        checks.extend(verify_extra(&m, &rec).checks);
    }
    checks
}

/// M(V) for the pair of a quadratic form against the orthogonal M(W,q):
/// [x,0] ↦ [1,x,q(x)] and [e,e⁻¹+y] ↦ [1,yQ_e,q(yQ_e)] μ_[1,e,q(e)].
pub fn orthogonal_jordan_iso(q: &QuadForm) -> Result<(), String> {
    let (ho, mo) = build_orthogonal(q)?;
    let jp = JordanPair::form_pair(q).map_err(|e| e.to_string())?;
    let e = *jp.invertibles(0).first().ok_or("no invertible element")?;
    let (pv, mv) = build_mv(jp, e)?;
    let first = |x: usize| ho.point(1, x, q.q(x)).ok_or_else(|| format!("[1,{},q] is not a point", q.w.label(x)));
    let mu = mo.try_mu(first(e)?).map_err(|e| e.to_string())?.clone();
    let phi: Vec<usize> = (0..pv.len())
        .map(|p| match pv.coords(p) {
            PvPoint::First(x) => first(x),
            PvPoint::Second(y) => first(pv.pair.q(0, e, y)).map(|i| mu.on(i)),
        })
        .collect::<Result<_, String>>()?;
    check_isomorphism(&mv, &mo, &phi).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::build_mr;

    fn z(n: u64) -> Ring {
        Ring::zmod(n).unwrap()
    }

    #[test]
    fn z25_pair_basics() {
        let jp = JordanPair::ring_pair(&z(25)).unwrap();
        assert_eq!(jp.q(0, 2, 3), 12);
        // (1 - 2*3)^2 = 0 mod 25
        assert!(jp.quasi_inverse(0, 2, 3).is_none());
        assert_eq!(jp.quasi_inverse(0, 2, 1), Some(23));
        assert!(jp.inverse(0, 0).is_none());
        let rad: Vec<usize> = (0..25).step_by(5).collect();
        assert_eq!(jp.radical(0), rad);
        assert_eq!(jp.radical(1), rad);
        assert!(jp.is_local());
    }

    #[test]
    fn f5_pair_is_division() {
        let jp = JordanPair::ring_pair(&z(5)).unwrap();
        assert_eq!(jp.invertibles(0).len(), 4);
        let pv = PvModel::new(jp, 1).unwrap();
        assert_eq!(pv.len(), 6);
    }

    #[test]
    fn z9_axioms() {
        let jp = JordanPair::ring_pair(&z(9)).unwrap();
        for c in jp.axiom_suite(LINEAR_BUDGET) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn broken_q_fails_jp_axioms() {
        let r = z(9);
        let mut jp = JordanPair::ring_pair(&r).unwrap();
        // Q_x y = x^3 y is not quadratic
        let g = jp.group(0).clone();
        let n = r.size();
        let q: Vec<u32> = (0..n * n).map(|i| r.mul(r.pow(i / n, 3), i % n) as u32).collect();
        jp = JordanPair::new("bad", g.clone(), g, q.clone(), q).unwrap();
        assert!(jp.axiom_suite(LINEAR_BUDGET).iter().any(|c| !c.passed()));
    }

    #[test]
    fn z9_mv_matches_projective() {
        let jp = JordanPair::ring_pair(&z(9)).unwrap();
        let (pv, m) = build_mv(jp, 1).unwrap();
        assert_eq!(pv.len(), 12);
        for c in mv_suite(&pv, &m) {
            assert!(c.passed(), "{c:?}");
        }
        let (pl, mr) = build_mr(z(9)).unwrap();
        let phi: Vec<usize> = (0..pv.len())
            .map(|p| match pv.coords(p) {
                PvPoint::First(x) => pl.first(x),
                PvPoint::Second(y) => pl.second(pl.ring.neg(y)).unwrap(),
            })
            .collect();
        check_isomorphism(&m, &mr, &phi).unwrap();
    }

    #[test]
    fn z25_roundtrip() {
        let jp = JordanPair::ring_pair(&z(25)).unwrap();
        for c in roundtrip_checks(&jp, 1, LINEAR_BUDGET) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn projective_z25_reconstructs_ring_pair() {
        let (pl, m) = build_mr(z(25)).unwrap();
        let out = reconstruct_jordan(&m, pl.first(1), LINEAR_BUDGET);
        for c in &out.checks {
            assert!(c.passed(), "{c:?}");
        }
        let rec = out.recon.unwrap();
        let ring = JordanPair::ring_pair(&z(25)).unwrap();
        find_pair_isomorphism(&rec.pair, &ring).unwrap();
        for c in verify_extra(&m, &rec).checks {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn z4_fails_j3() {
        let (pl, m) = build_mr(z(4)).unwrap();
        let out = reconstruct_jordan(&m, pl.first(1), LINEAR_BUDGET);
        assert!(out.recon.is_none());
        assert!(out.checks.iter().any(|c| c.name == "J3" && !c.passed()));
    }

    #[test]
    fn orthogonal_matches_form_pair() {
        let q = QuadForm::parse(z(9), "x1^2+x2^2", None).unwrap();
        orthogonal_jordan_iso(&q).unwrap();
    }
}
