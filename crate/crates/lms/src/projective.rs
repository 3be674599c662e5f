//! The projective line P¹(R) over a finite local ring, the local Moufang set
//! M(R), and the reconstruction of a ring from a local Moufang set.

use crate::action::{EquivSet, Perm, PermGroup};
use crate::localring::{find_isomorphism, El, Ring};
use crate::moufang::{check_isomorphism, Lms, MoufangError, Seed, Theta};
use crate::report::Check;
use std::collections::HashSet;

/// A 2×2 matrix [[a, b], [c, d]] acting on row vectors from the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: El,
    pub b: El,
    pub c: El,
    pub d: El,
}

impl Mat2 {
    pub fn new(a: El, b: El, c: El, d: El) -> Mat2 {
        Mat2 { a, b, c, d }
    }

    pub fn det(&self, r: &Ring) -> El {
        r.sub(r.mul(self.a, self.d), r.mul(self.b, self.c))
    }

    pub fn mul(&self, r: &Ring, o: &Mat2) -> Mat2 {
        Mat2 {
            a: r.add(r.mul(self.a, o.a), r.mul(self.b, o.c)),
            b: r.add(r.mul(self.a, o.b), r.mul(self.b, o.d)),
            c: r.add(r.mul(self.c, o.a), r.mul(self.d, o.c)),
            d: r.add(r.mul(self.c, o.b), r.mul(self.d, o.d)),
        }
    }
}

/// P¹(R) with points [1,r] (r ∈ R) followed by [m,1] (m ∈ m), both in
/// ring index order.
#[derive(Clone, Debug)]
pub struct ProjLine {
    pub ring: Ring,
    pts: Vec<(El, El)>,
    second: Vec<Option<usize>>,
}

impl ProjLine {
    pub fn new(ring: Ring) -> ProjLine {
        let n = ring.size();
        let mut pts: Vec<(El, El)> = (0..n).map(|r| (1, r)).collect();
        let mut second = vec![None; n];
        for &m in ring.ideal() {
            second[m] = Some(pts.len());
            pts.push((m, 1));
        }
        ProjLine { ring, pts, second }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn coords(&self, i: usize) -> (El, El) {
        self.pts[i]
    }

    /// The point [1,r].
    pub fn first(&self, r: El) -> usize {
        r
    }

    /// The point [m,1], for m in the maximal ideal.
    pub fn second(&self, m: El) -> Option<usize> {
        self.second[m]
    }

    pub fn inf(&self) -> usize {
        self.second[0].expect("0 lies in the ideal")
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// The point [a,b], if (a,b) is unimodular.
    pub fn point(&self, a: El, b: El) -> Option<usize> {
        let r = &self.ring;
        if r.is_unit(a) {
            Some(self.first(r.mul(b, r.unit_inv(a))))
        } else if r.is_unit(b) {
            self.second(r.mul(a, r.unit_inv(b)))
        } else {
            None
        }
    }

    pub fn label(&self, i: usize) -> String {
        let (a, b) = self.pts[i];
        format!("[{},{}]", self.ring.fmt_el(a), self.ring.fmt_el(b))
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    /// [1,r] ∼ [1,r'] iff r − r' ∈ m; all [m,1] form one class.
    pub fn equiv_set(&self) -> EquivSet {
        let k = self.ring.residue_size();
        let classes: Vec<usize> = self
            .pts
            .iter()
            .enumerate()
            .map(|(i, &(_, b))| if i < self.ring.size() { self.ring.residue(b) } else { k })
            .collect();
        EquivSet::from_labels(&classes)
    }

    /// The permutation x ↦ x·g, if g is invertible.
    pub fn act(&self, g: &Mat2) -> Option<Perm> {
        let r = &self.ring;
        if !r.is_unit(g.det(r)) {
            return None;
        }
        Perm::from_fn(self.len(), |i| {
            let (a, b) = self.pts[i];
            let x = r.add(r.mul(a, g.a), r.mul(b, g.c));
            let y = r.add(r.mul(a, g.b), r.mul(b, g.d));
            self.point(x, y).expect("invertible matrices keep vectors unimodular")
        })
    }

    pub fn unipotent(&self, s: El) -> Mat2 {
        Mat2::new(1, s, 0, 1)
    }

    pub fn tau_matrix(&self) -> Mat2 {
        Mat2::new(0, self.ring.neg(1), 1, 0)
    }

    /// The seed (P¹(R), ∼, U, τ) with U upper unipotent and τ = [[0,−1],[1,0]].
    pub fn seed(&self) -> Seed {
        let u = self.ring.elements().map(|s| self.act(&self.unipotent(s)).unwrap()).collect();
        Seed {
            name: format!("M({})", self.ring.name()),
            eq: self.equiv_set(),
            labels: self.labels(),
            u,
            tau: self.act(&self.tau_matrix()).unwrap(),
            inf: self.inf(),
        }
    }

    /// All of SL₂(R).
    pub fn sl2(&self) -> Vec<Mat2> {
        let r = &self.ring;
        let mut out = Vec::new();
        for a in r.elements() {
            for b in r.elements() {
                for c in r.elements() {
                    if r.is_unit(a) {
                        let d = r.mul(r.add(1, r.mul(b, c)), r.unit_inv(a));
                        out.push(Mat2::new(a, b, c, d));
                    } else {
                        for d in r.elements() {
                            let g = Mat2::new(a, b, c, d);
                            if g.det(r) == 1 {
                                out.push(g);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// The image of SL₂(R) in Sym(P¹(R)), which is PSL₂(R).
    pub fn psl2_image(&self) -> HashSet<Perm> {
        self.sl2().iter().map(|g| self.act(g).unwrap()).collect()
    }

    /// P¹(f) for a ring map f given as a table from self.ring to other.ring.
    pub fn induced_map(&self, other: &ProjLine, f: &[El]) -> Option<Vec<usize>> {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.pts[i];
                other.point(f[a], f[b])
            })
            .collect()
    }
}

/// Builds M(R) together with its projective line.
pub fn build_mr(ring: Ring) -> Result<(ProjLine, Lms), MoufangError> {
    let pl = ProjLine::new(ring);
    let m = Lms::construct(pl.seed())?;
    Ok((pl, m))
}

/// A seed on P¹(R) whose τ is replaced by σ⁻¹τσ for a transposition σ of two
/// equivalent units. Satisfies (C1), (C1′), (C2) but is not local Moufang.
pub fn twisted_seed(pl: &ProjLine) -> Result<Seed, String> {
    let r = &pl.ring;
    let one = pl.first(1);
    let other = r
        .ideal()
        .iter()
        .skip(1)
        .map(|&m| pl.first(r.add(1, m)))
        .next()
        .ok_or("the ring is a field; no two distinct equivalent units")?;
    let mut img: Vec<u32> = (0..pl.len() as u32).collect();
    img.swap(one, other);
    let sigma = Perm::from_images(img).unwrap();
    let mut s = pl.seed();
    s.tau = s.tau.conj(&sigma);
    s.name = format!("twisted M({})", r.name());
    Ok(s)
}

/// Closed forms for M(R): α, U₀, μ, h, ~, H and G = PSL₂(R).
pub fn projective_suite(pl: &ProjLine, m: &Lms, g: Option<&PermGroup>, cap: usize) -> Vec<Check> {
    let r = &pl.ring;
    let mut out = Vec::new();
    let units: Vec<El> = r.units().to_vec();
    let each = |f: &dyn Fn(El) -> bool| -> Result<(), String> {
        for &u in &units {
            if !f(u) {
                return Err(format!("r = {}", r.fmt_el(u)));
            }
        }
        Ok(())
    };
    out.push(Check::new(
        "alpha_closed_form",
        "alpha_[1,r] = [[1,r],[0,1]]",
        (|| {
            for s in r.elements() {
                if m.alpha(pl.first(s)) != &pl.act(&pl.unipotent(s)).unwrap() {
                    return Err(format!("r = {}", r.fmt_el(s)));
                }
            }
            Ok(())
        })(),
    ));
    let lower: HashSet<Perm> = r.elements().map(|s| pl.act(&Mat2::new(1, 0, s, 1)).unwrap()).collect();
    out.push(Check::new(
        "U0_closed_form",
        "U_0 = {[[1,0],[r,1]]}",
        if m.u_zero().order() == lower.len() && m.u_zero().elements().iter().all(|p| lower.contains(p)) {
            Ok(())
        } else {
            Err("U_0 differs from the lower unipotent group".into())
        },
    ));
    out.push(Check::new(
        "mu_closed_form",
        "mu_[1,r] = [[0,r],[-r^-1,0]] (row vectors)",
        each(&|s| m.mu(pl.first(s)) == &pl.act(&Mat2::new(0, s, r.neg(r.unit_inv(s)), 0)).unwrap()),
    ));
    out.push(Check::new(
        "hua_closed_form",
        "h_[1,r] = diag(r^-1, r)",
        each(&|s| m.hua(pl.first(s)) == pl.act(&Mat2::new(r.unit_inv(s), 0, 0, s)).unwrap()),
    ));
    out.push(Check::new(
        "tilde_is_negation",
        "~[1,r] = [1,-r] = -[1,r]",
        each(&|s| {
            let x = pl.first(s);
            m.tilde(x) == pl.first(r.neg(s)) && m.neg(x) == pl.first(r.neg(s))
        }),
    ));
    match m.hua_subgroup(cap) {
        Ok(h) => {
            let diag: HashSet<Perm> = units.iter().map(|&s| pl.act(&Mat2::new(s, 0, 0, r.unit_inv(s))).unwrap()).collect();
            out.push(Check::new(
                "H_closed_form",
                "H = {diag(r, r^-1)}",
                if h.order() == diag.len() && h.elements().iter().all(|p| diag.contains(p)) {
                    Ok(())
                } else {
                    Err(format!("|H| = {}, diagonal image has {}", h.order(), diag.len()))
                },
            ));
            out.push(Check::new(
                "H_abelian",
                "H is abelian",
                if h.is_abelian() { Ok(()) } else { Err("Hua subgroup is not abelian".into()) },
            ));
        }
        Err(e) => out.push(Check::fail("H_closed_form", "H = {diag(r, r^-1)}", e.to_string())),
    }
    if let Some(g) = g {
        let psl = pl.psl2_image();
        out.push(
            Check::new(
                "G_equals_PSL2",
                "G = PSL_2(R)",
                if g.order() == psl.len() && g.elements().iter().all(|p| psl.contains(p)) {
                    Ok(())
                } else {
                    Err(format!("|G| = {}, |PSL_2| = {}", g.order(), psl.len()))
                },
            )
            .with_detail(format!("|PSL_2| = {}", psl.len())),
        );
    }
    let info = m.special_info();
    out.push(Check::new(
        "special_abelian",
        "M(R) is special with abelian root groups",
        if info.special && info.abelian { Ok(()) } else { Err(format!("{info:?}")) },
    ));
    out
}

/// The ring R = X∖class(∞) reconstructed from a local Moufang set and a unit e.
#[derive(Clone, Debug)]
pub struct RingRecon {
    pub ring: Ring,
    pub e: usize,
    /// ring index -> point
    pub points: Vec<usize>,
    /// point -> ring index, for points not equivalent to ∞
    pub index: Vec<Option<usize>>,
    /// R_y tables over ring indices, indexed by y then x
    pub r_maps: Vec<Vec<usize>>,
}

impl RingRecon {
    /// x R_y, with x and y points; None if x ∼ ∞.
    pub fn apply_r(&self, x: usize, y: usize) -> Option<usize> {
        let (xi, yi) = (self.index[x]?, self.index[y]?);
        Some(self.points[self.r_maps[yi][xi]])
    }

    pub fn point_of(&self, i: El) -> usize {
        self.points[i]
    }
}

/// Outcome of the reconstruction: the check list and, when every check
/// passed, the ring.
pub struct ReconOutcome {
    pub checks: Vec<Check>,
    pub recon: Option<RingRecon>,
}

/// Checks (R1)–(R4), builds R_y and the product xy = xR_y·½, and verifies
/// the unital commutative local ring axioms and x⁻¹ = (−x)μ_e.
pub fn reconstruct_ring(m: &Lms, e: usize, cap: usize) -> ReconOutcome {
    let mut checks = Vec::new();
    if !m.is_unit(e) {
        checks.push(Check::fail("unit_e", "e is a unit", format!("{} is not a unit", m.label(e))));
        return ReconOutcome { checks, recon: None };
    }
    let special = m.units().iter().find(|&&x| m.tilde(x) != m.neg(x));
    checks.push(Check::new(
        "R1",
        "M is special",
        special.map_or(Ok(()), |&x| Err(format!("~{} != -{}", m.label(x), m.label(x)))),
    ));
    checks.push(Check::new(
        "R2",
        "U_inf is abelian",
        if m.u_inf_abelian() { Ok(()) } else { Err("generators of U_inf do not commute".into()) },
    ));
    let r3 = match m.hua_subgroup(cap) {
        Ok(h) if h.is_abelian() => Ok(()),
        Ok(_) => Err("Hua subgroup is not abelian".into()),
        Err(e) => Err(e.to_string()),
    };
    checks.push(Check::new("R3", "the Hua subgroup H is abelian", r3));
    let r4 = m.units().iter().find(|&&x| !m.is_unit(m.times(x, 2)));
    checks.push(Check::new(
        "R4",
        "x unit implies x*2 unit",
        r4.map_or(Ok(()), |&x| Err(format!("x = {}, x*2 = {}", m.label(x), m.label(m.times(x, 2))))),
    ));
    if !checks.iter().all(Check::passed) {
        return ReconOutcome { checks, recon: None };
    }

    // ring indices: 0 -> 0, 1 -> e, then the rest in point order
    let mut points = vec![m.zero, e];
    points.extend(m.finite_points().into_iter().filter(|&x| x != m.zero && x != e));
    let n = points.len();
    let mut index = vec![None; m.len()];
    for (i, &p) in points.iter().enumerate() {
        index[p] = Some(i);
    }
    let idx = |p: usize| index[p].expect("finite point");
    let add = |a: usize, b: usize| idx(m.add(points[a], points[b]));
    let neg = |a: usize| idx(m.neg(points[a]));
    let mut half = vec![usize::MAX; n];
    for a in 0..n {
        half[add(a, a)] = a;
    }
    let halves = if half.contains(&usize::MAX) {
        Err("doubling is not bijective".to_string())
    } else {
        Ok(())
    };
    checks.push(Check::new("unique_halving", "(R,+) is uniquely 2-divisible", halves));
    if !checks.last().unwrap().passed() {
        return ReconOutcome { checks, recon: None };
    }

    // Hua maps relative to tau = mu_e
    let mu_e = m.mu(e);
    let hua = |p: usize| -> Result<Perm, String> {
        m.try_mu(p).map(|mp| mu_e.then(mp)).map_err(|_| format!("h_{} undefined", m.label(p)))
    };
    let e_pt = e;
    let two_e = m.times(e_pt, 2);
    let build_r = |y: usize| -> Result<Vec<usize>, String> {
        let yp = points[y];
        let ye = m.add(e_pt, yp);
        let hx = |h: &Perm, x: usize| idx(h.on(points[x]));
        let mut table = Vec::with_capacity(n);
        if m.is_unit(yp) && m.is_unit(ye) {
            let (h1, h2) = (hua(ye)?, hua(yp)?);
            for x in 0..n {
                table.push(add(add(hx(&h1, x), neg(hx(&h2, x))), neg(x)));
            }
        } else if m.is_unit(yp) {
            let (h1, h2) = (hua(m.add(m.neg(e_pt), yp))?, hua(yp)?);
            for x in 0..n {
                table.push(add(add(neg(hx(&h1, x)), x), hx(&h2, x)));
            }
        } else {
            let (h1, h2, h3) = (hua(m.add(two_e, yp))?, hua(ye)?, hua(m.neg(two_e))?);
            for x in 0..n {
                table.push(add(add(add(hx(&h1, x), neg(hx(&h2, x))), neg(hx(&h3, x))), x));
            }
        }
        Ok(table)
    };
    let mut r_maps = Vec::with_capacity(n);
    let mut defined = Ok(());
    for y in 0..n {
        match build_r(y) {
            Ok(t) => r_maps.push(t),
            Err(w) => {
                defined = Err(format!("y = {}: {w}", m.label(points[y])));
                break;
            }
        }
    }
    checks.push(Check::new("hua_maps_defined", "every Hua map in R_y has a unit index", defined));
    if !checks.last().unwrap().passed() {
        return ReconOutcome { checks, recon: None };
    }
    let mul = |a: usize, b: usize| half[r_maps[b][a]];
    let lab = |a: usize| m.label(points[a]).to_string();

    let mut add_t = vec![0u32; n * n];
    let mut mul_t = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            add_t[a * n + b] = add(a, b) as u32;
            mul_t[a * n + b] = mul(a, b) as u32;
        }
    }
    let ident = (|| {
        for a in 0..n {
            if mul(1, a) != a || mul(a, 1) != a {
                return Err(format!("x = {}", lab(a)));
            }
        }
        Ok(())
    })();
    checks.push(Check::new("ring_identity", "e x = x e = x", ident));
    let comm = (|| {
        for a in 0..n {
            for b in 0..a {
                if mul(a, b) != mul(b, a) {
                    return Err(format!("x = {}, y = {}", lab(a), lab(b)));
                }
            }
        }
        Ok(())
    })();
    checks.push(Check::new("ring_commutative", "xy = yx", comm));
    let assoc_dist = |dist: bool| {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ok = if dist {
                        mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
                    } else {
                        mul(mul(a, b), c) == mul(a, mul(b, c))
                    };
                    if !ok {
                        return Err(format!("x = {}, y = {}, z = {}", lab(a), lab(b), lab(c)));
                    }
                }
            }
        }
        Ok(())
    };
    checks.push(Check::new("ring_associative", "(xy)z = x(yz)", assoc_dist(false)));
    checks.push(Check::new("ring_distributive", "x(y+z) = xy + xz", assoc_dist(true)));
    if !checks.iter().all(Check::passed) {
        return ReconOutcome { checks, recon: None };
    }
    let ring = match Ring::from_tables(&format!("R({}, e = {})", m.name, m.label(e)), add_t, mul_t) {
        Ok(r) => r,
        Err(err) => {
            checks.push(Check::fail("ring_local", "R is a local ring with m = class(0)", err.to_string()));
            return ReconOutcome { checks, recon: None };
        }
    };
    let local = (|| {
        for a in 0..n {
            if ring.is_unit(a) != m.is_unit(points[a]) {
                return Err(format!("x = {}", lab(a)));
            }
        }
        Ok(())
    })();
    checks.push(Check::new("ring_local", "R is local and its non-units are class(0)", local));
    let inverse = (|| {
        for a in 0..n {
            if ring.is_unit(a) && points[ring.unit_inv(a)] != mu_e.on(m.neg(points[a])) {
                return Err(format!("x = {}", lab(a)));
            }
        }
        Ok(())
    })();
    checks.push(Check::new("ring_inverse", "x^-1 = (-x) mu_e", inverse));
    let ok = checks.iter().all(Check::passed);
    ReconOutcome { checks, recon: ok.then_some(RingRecon { ring, e, points, index, r_maps }) }
}

/// Condition (⋆): xμ_eα_y = yR_xα_{−2e}μ_eR_xμ_e for x ∼ 0, y ≁ ∞.
pub fn check_star(m: &Lms, rec: &RingRecon) -> Result<(), String> {
    let mu_e = m.mu(rec.e);
    let a2 = m.alpha(m.neg(m.times(rec.e, 2)));
    let fin = m.finite_points();
    for &x in fin.iter().filter(|&&x| m.equiv(x, m.zero)) {
        for &y in &fin {
            let lhs = m.alpha(y).on(mu_e.on(x));
            let step = |p: usize| rec.apply_r(p, x).ok_or_else(|| format!("R_x applied to {}", m.label(p)));
            let rhs = (|| {
                let p = step(y)?;
                let p = mu_e.on(a2.on(p));
                Ok::<usize, String>(mu_e.on(step(p)?))
            })();
            match rhs {
                Ok(v) if v == lhs => {}
                Ok(_) => return Err(format!("x = {}, y = {}", m.label(x), m.label(y))),
                Err(w) => return Err(format!("x = {}, y = {}: {w}", m.label(x), m.label(y))),
            }
        }
    }
    Ok(())
}

/// The map φ: X → P¹(R) with x ↦ [1,x] on R and x ↦ [−xμ_e, 1] on class(∞).
pub fn star_map(m: &Lms, rec: &RingRecon, pl: &ProjLine) -> Result<Vec<usize>, String> {
    let mu_e = m.mu(rec.e);
    (0..m.len())
        .map(|x| match rec.index[x] {
            Some(i) => Ok(pl.first(i)),
            None => {
                let y = m.neg(mu_e.on(x));
                let i = rec.index[y].ok_or("x mu_e is not finite")?;
                pl.second(i).ok_or_else(|| format!("-{} mu_e is not in m", m.label(x)))
            }
        })
        .collect()
}

/// Outcome of the (⋆) check and the isomorphism M ≅ M(R).
pub struct StarOutcome {
    pub checks: Vec<Check>,
    pub thetas: Option<Vec<Theta>>,
}

pub fn verify_star(m: &Lms, rec: &RingRecon) -> StarOutcome {
    let mut checks = vec![Check::new(
        "star_condition",
        "x mu_e alpha_y = y R_x alpha_{-2e} mu_e R_x mu_e for x ~ 0, y !~ inf",
        check_star(m, rec),
    )];
    if !checks[0].passed() {
        return StarOutcome { checks, thetas: None };
    }
    let res = (|| {
        let (pl, mr) = build_mr(rec.ring.clone()).map_err(|e| e.to_string())?;
        let phi = star_map(m, rec, &pl)?;
        check_isomorphism(m, &mr, &phi)
    })();
    let thetas = res.as_ref().ok().cloned();
    checks.push(Check::new("star_isomorphism", "M is isomorphic to M(R) via phi", res.map(|_| ())));
    StarOutcome { checks, thetas }
}

/// A unital ring isomorphism A → B, or the reason none exists.
pub fn ring_iso_check(a: &Ring, b: &Ring) -> Result<Vec<El>, String> {
    let f = find_isomorphism(a, b)?;
    if a.is_isomorphism(b, &f) {
        Ok(f)
    } else {
        Err("search returned a non-isomorphism".into())
    }
}

/// For M = M(R) and e = [1,e0]: the map r ↦ [1, r e0] as ring indices of
/// the reconstruction.
pub fn natural_iso(pl: &ProjLine, rec: &RingRecon) -> Option<Vec<El>> {
    let (_, e0) = pl.coords(rec.e);
    let r = &pl.ring;
    r.elements().map(|s| rec.index[pl.first(r.mul(s, e0))]).collect()
}

/// Full round trip for M(R): reconstruct with unit e, compare with R, and
/// check (⋆) with its isomorphism.
pub fn roundtrip_checks(pl: &ProjLine, m: &Lms, e: usize, cap: usize) -> Vec<Check> {
    let out = reconstruct_ring(m, e, cap);
    let mut checks = out.checks;
    if let Some(rec) = out.recon {
        let nat = natural_iso(pl, &rec);
        checks.push(Check::new(
            "natural_isomorphism",
            "r -> [1, r e] is a ring isomorphism R -> R(M, e)",
            match nat {
                Some(f) if pl.ring.is_isomorphism(&rec.ring, &f) => Ok(()),
                _ => Err(format!("e = {}", m.label(e))),
            },
        ));
        checks.push(Check::new(
            "ring_isomorphic",
            "R(M, e) is isomorphic to R",
            ring_iso_check(&rec.ring, &pl.ring).map(|_| ()),
        ));
        checks.extend(verify_star(m, &rec).checks);
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moufang::{check_homomorphism, quotient, DEFAULT_CAP};

    fn z(n: u64) -> Ring {
        Ring::zmod(n).unwrap()
    }

    #[test]
    fn z9_line() {
        let (pl, m) = build_mr(z(9)).unwrap();
        assert_eq!(pl.len(), 12);
        assert_eq!(m.n_classes(), 4);
        let one = pl.first(1);
        let two = pl.first(2);
        assert_eq!(m.hua(two).on(one), pl.first(4));
        let g = m.little_group(DEFAULT_CAP).unwrap();
        for c in projective_suite(&pl, &m, Some(&g), DEFAULT_CAP) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn z9_roundtrip_each_unit() {
        let (pl, m) = build_mr(z(9)).unwrap();
        for &u in pl.ring.units() {
            for c in roundtrip_checks(&pl, &m, pl.first(u), DEFAULT_CAP) {
                assert!(c.passed(), "e = {u}: {c:?}");
            }
        }
    }

    #[test]
    fn z4_fails_at_r4() {
        let (_, m) = build_mr(z(4)).unwrap();
        let out = reconstruct_ring(&m, 1, DEFAULT_CAP);
        let failed: Vec<&str> = out.checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, vec!["R4"]);
        assert!(out.recon.is_none());
    }

    #[test]
    fn reduction_is_homomorphism() {
        let (p9, m9) = build_mr(z(9)).unwrap();
        let (p3, m3) = build_mr(z(3)).unwrap();
        let f: Vec<El> = (0..9).map(|r| r % 3).collect();
        let phi = p9.induced_map(&p3, &f).unwrap();
        check_homomorphism(&m9, &m3, &phi).unwrap();
        let (q, _) = quotient(&m9).unwrap();
        assert_eq!(q.len(), m3.len());
    }

    #[test]
    fn twisted_seed_is_not_moufang() {
        let pl = ProjLine::new(z(9));
        let m = Lms::construct(twisted_seed(&pl).unwrap()).unwrap();
        assert!(m.hua_normalizes().is_err());
    }
}
