//! Finite balls of the Bruhat–Tits tree of SL₂ over the p-adic integers,
//! realized as lattices modulo p^N, with the sphere actions and the map to
//! the projective lines over ℤ/pⁿ.

use crate::action::{EquivSet, Perm};
use crate::localring::{El, Ring};
use crate::moufang::{check_isomorphism, Lms, Seed};
use crate::projective::{build_mr, Mat2, ProjLine};
use crate::report::Check;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

/// Largest ambient modulus p^N.
pub const MAX_MODULUS: u64 = 256;

/// A vertex (a e₁ + b e₂)𝒪 + πⁿL₀ in canonical form (1, b) or (a, 1), a ∈ p𝒪.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeRep {
    pub level: u32,
    pub a: u64,
    pub b: u64,
}

impl LatticeRep {
    pub fn label(&self) -> String {
        if self.level == 0 {
            "L0".into()
        } else {
            format!("({},{})@{}", self.a, self.b, self.level)
        }
    }
}

/// The lattices between p^N L₀ and L₀ of the form above, as subsets of
/// (ℤ/p^N)².
#[derive(Clone, Debug)]
pub struct Tree {
    pub p: u64,
    pub depth: u32,
    modulus: u64,
    pub levels: Vec<Vec<LatticeRep>>,
    sets: Vec<Vec<Vec<bool>>>,
    by_set: HashMap<Vec<bool>, (u32, usize)>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Modular inverse of a unit mod m.
fn inv_mod(a: u64, m: u64) -> u64 {
    (1..m).find(|&x| a * x % m == 1).expect("unit")
}

impl Tree {
    pub fn new(p: u64, depth: u32) -> Result<Tree, String> {
        if !is_prime(p) {
            return Err(format!("{p} is not prime"));
        }
        let modulus = p.checked_pow(depth).filter(|&m| m <= MAX_MODULUS).ok_or_else(|| format!("p^depth exceeds {MAX_MODULUS}"))?;
        let mut levels = vec![vec![LatticeRep { level: 0, a: 0, b: 0 }]];
        for n in 1..=depth {
            let pn = p.pow(n);
            let mut reps: Vec<LatticeRep> = (0..pn).map(|b| LatticeRep { level: n, a: 1, b }).collect();
            reps.extend((0..pn).step_by(p as usize).map(|a| LatticeRep { level: n, a, b: 1 }));
            levels.push(reps);
        }
        let mut t = Tree { p, depth, modulus, levels, sets: Vec::new(), by_set: HashMap::new() };
        t.sets = t.levels.iter().map(|lv| lv.iter().map(|l| t.lattice_set(l)).collect()).collect();
        for (n, lv) in t.sets.iter().enumerate() {
            for (i, s) in lv.iter().enumerate() {
                t.by_set.insert(s.clone(), (n as u32, i));
            }
        }
        Ok(t)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn sphere(&self, n: u32) -> Result<&[LatticeRep], String> {
        self.levels
            .get(n as usize)
            .filter(|_| n >= 1)
            .map(|v| v.as_slice())
            .ok_or_else(|| format!("level {n} is outside 1..={}", self.depth))
    }

    fn cell(&self, x: u64, y: u64) -> usize {
        let m = self.modulus;
        ((x % m) * m + (y % m)) as usize
    }

    /// {(a t + pⁿ u, b t + pⁿ v)} modulo p^N.
    pub fn lattice_set(&self, l: &LatticeRep) -> Vec<bool> {
        let m = self.modulus;
        let pn = self.p.pow(l.level);
        let mut set = vec![false; (m * m) as usize];
        for t in 0..m {
            for u in 0..m / pn {
                for v in 0..m / pn {
                    set[self.cell(l.a * t + pn * u, l.b * t + pn * v)] = true;
                }
            }
        }
        set
    }

    pub fn set_of(&self, n: u32, i: usize) -> &[bool] {
        &self.sets[n as usize][i]
    }

    /// The vertex with the given element set, if it is one of the listed lattices.
    pub fn find_set(&self, set: &[bool]) -> Option<(u32, usize)> {
        self.by_set.get(set).copied()
    }

    /// Canonical form of (a, b) at level n.
    pub fn normalize(&self, n: u32, a: u64, b: u64) -> Option<usize> {
        let pn = self.p.pow(n);
        let (a, b) = (a % pn, b % pn);
        if a % self.p != 0 {
            Some((b * inv_mod(a, pn) % pn) as usize)
        } else if b % self.p != 0 {
            let m = a * inv_mod(b, pn) % pn;
            Some((pn + m / self.p) as usize)
        } else {
            None
        }
    }

    /// Adjacency by the coefficient rule: the level-(n+1) rep reduces to the level-n rep.
    pub fn adjacent_formula(&self, n: u32, i: usize, j: usize) -> bool {
        if n == 0 {
            return true;
        }
        let l = &self.levels[n as usize + 1][j];
        self.normalize(n, l.a, l.b) == Some(i)
    }

    /// Adjacency by inclusion of lattices with index p.
    pub fn adjacent_sets(&self, n: u32, i: usize, j: usize) -> bool {
        let (big, small) = (self.set_of(n, i), self.set_of(n + 1, j));
        let contained = small.iter().zip(big).all(|(&s, &b)| !s || b);
        let (cb, cs) = (big.iter().filter(|&&b| b).count(), small.iter().filter(|&&b| b).count());
        contained && cb == cs * self.p as usize
    }

    fn vertex_ids(&self) -> Vec<(u32, usize)> {
        (0..=self.depth).flat_map(|n| (0..self.levels[n as usize].len()).map(move |i| (n, i))).collect()
    }

    /// Edges between consecutive levels, by the inclusion oracle.
    pub fn edges(&self) -> Vec<((u32, usize), (u32, usize))> {
        let mut out = Vec::new();
        for n in 0..self.depth {
            for i in 0..self.levels[n as usize].len() {
                for j in 0..self.levels[n as usize + 1].len() {
                    if self.adjacent_sets(n, i, j) {
                        out.push(((n, i), (n + 1, j)));
                    }
                }
            }
        }
        out
    }

    /// Tree shape, degrees, distances, the adjacency rule and lifting.
    pub fn graph_checks(&self) -> Vec<Check> {
        let p = self.p as usize;
        let mut out = Vec::new();
        let sizes: Vec<usize> = (1..=self.depth).map(|n| self.levels[n as usize].len()).collect();
        let expect: Vec<usize> = (1..=self.depth).map(|n| p.pow(n) + p.pow(n - 1)).collect();
        let distinct = self.by_set.len() == self.vertex_ids().len();
        out.push(
            Check::new(
                "sphere_sizes",
                "|T_n| = p^n + p^(n-1), with distinct lattices for distinct representatives",
                if sizes == expect && distinct { Ok(()) } else { Err(format!("sizes {sizes:?}, distinct = {distinct}")) },
            )
            .with_detail(format!("{sizes:?}")),
        );
        let rule = (|| {
            for n in 0..self.depth {
                for i in 0..self.levels[n as usize].len() {
                    for j in 0..self.levels[n as usize + 1].len() {
                        if self.adjacent_formula(n, i, j) != self.adjacent_sets(n, i, j) {
                            return Err(format!(
                                "{} and {}",
                                self.levels[n as usize][i].label(),
                                self.levels[n as usize + 1][j].label()
                            ));
                        }
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new(
            "adjacency_rule",
            "(ae1+be2)O + p^n L0 and (a'e1+b'e2)O + p^(n+1) L0 are adjacent iff (a',b') reduces to (a,b)",
            rule,
        ));
        let ids = self.vertex_ids();
        let pos: HashMap<(u32, usize), usize> = ids.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        let edges = self.edges();
        for &(u, v) in &edges {
            adj[pos[&u]].push(pos[&v]);
            adj[pos[&v]].push(pos[&u]);
        }
        let mut dist = vec![usize::MAX; ids.len()];
        dist[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        let connected = dist.iter().all(|&d| d != usize::MAX);
        let acyclic = edges.len() + 1 == ids.len();
        out.push(Check::new(
            "is_tree",
            "the ball of radius N around L0 is connected and acyclic",
            if connected && acyclic { Ok(()) } else { Err(format!("connected = {connected}, {} edges for {} vertices", edges.len(), ids.len())) },
        ));
        let degrees = ids.iter().enumerate().find(|&(k, &(n, _))| {
            let want = if n == self.depth { 1 } else { p + 1 };
            adj[k].len() != want
        });
        out.push(Check::new(
            "degrees",
            "every vertex of level < N has p + 1 neighbours",
            degrees.map_or(Ok(()), |(k, &(n, i))| Err(format!("{} has degree {}", self.levels[n as usize][i].label(), adj[k].len()))),
        ));
        let bad = ids.iter().enumerate().find(|&(k, &(n, _))| dist[k] != n as usize);
        out.push(Check::new(
            "distance",
            "d([L0], [L]) = n for (ae1+be2)O + p^n L0",
            bad.map_or(Ok(()), |(_, &(n, i))| Err(self.levels[n as usize][i].label())),
        ));
        let lift = (|| {
            for n in 1..self.depth {
                for i in 0..self.levels[n as usize].len() {
                    if !(0..self.levels[n as usize + 1].len()).any(|j| self.adjacent_sets(n, i, j)) {
                        return Err(self.levels[n as usize][i].label());
                    }
                }
            }
            Ok(())
        })();
        out.push(Check::new("lifting", "every level-n vertex lifts to level n + 1", lift));
        out
    }

    /// Formula action (a,b) ↦ (a g₀₀ + b g₁₀, a g₀₁ + b g₁₁) on Tₙ.
    pub fn sphere_action(&self, n: u32, g: [u64; 4]) -> Result<Perm, String> {
        let pn = self.p.pow(n);
        let det = (g[0] * g[3] + pn * pn - (g[1] * g[2]) % (pn * pn)) % pn;
        if det != 1 % pn {
            return Err(format!("determinant {det} is not 1 modulo {pn}"));
        }
        let lv = &self.levels[n as usize];
        Perm::from_fn(lv.len(), |i| {
            let l = &lv[i];
            self.normalize(n, l.a * g[0] + l.b * g[2], l.a * g[1] + l.b * g[3]).expect("invertible")
        })
        .ok_or_else(|| "not a permutation".into())
    }

    /// Action on Tₙ by transforming the element sets.
    pub fn sphere_action_sets(&self, n: u32, g: [u64; 4]) -> Option<Perm> {
        let m = self.modulus;
        Perm::from_fn(self.levels[n as usize].len(), |i| {
            let set = self.set_of(n, i);
            let mut img = vec![false; set.len()];
            for (c, _) in set.iter().enumerate().filter(|(_, &b)| b) {
                let (x, y) = (c as u64 / m, c as u64 % m);
                img[self.cell(x * g[0] + y * g[2], x * g[1] + y * g[3])] = true;
            }
            match self.find_set(&img) {
                Some((k, j)) if k == n => j,
                _ => usize::MAX,
            }
        })
    }

    /// All of SL₂(ℤ/p^N) as entry arrays.
    pub fn sl2(&self) -> Vec<[u64; 4]> {
        let m = self.modulus;
        let mut out = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        if (a * d + m * m - b * c % (m * m)) % m == 1 % m {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Generators of SL₂(ℤ/p^N): elementary matrices.
    pub fn sl2_generators(&self) -> Vec<[u64; 4]> {
        let m = self.modulus;
        (0..m).flat_map(|s| [[1, s, 0, 1], [1, 0, s, 1]]).collect()
    }

    /// The equivalence L ∼ L′ iff L + pL₀ = L′ + pL₀, read off from the
    /// images of the element sets in (ℤ/p)².
    pub fn sphere_equiv(&self, n: u32) -> EquivSet {
        let m = self.modulus;
        let p = self.p;
        let keys: Vec<Vec<bool>> = (0..self.levels[n as usize].len())
            .map(|i| {
                let mut key = vec![false; (p * p) as usize];
                for (c, _) in self.set_of(n, i).iter().enumerate().filter(|(_, &b)| b) {
                    let (x, y) = (c as u64 / m, c as u64 % m);
                    key[((x % p) * p + y % p) as usize] = true;
                }
                key
            })
            .collect();
        EquivSet::from_labels(&keys)
    }

    /// Map of Tₙ to Tₙ₋₁ sending a vertex to its neighbour towards L₀.
    pub fn parent(&self, n: u32, j: usize) -> Option<usize> {
        (0..self.levels[n as usize - 1].len()).find(|&i| self.adjacent_sets(n - 1, i, j))
    }

    /// Adjacency list in DOT format.
    pub fn dot(&self) -> String {
        let mut s = String::from("graph tree {\n");
        for (u, v) in self.edges() {
            let lu = &self.levels[u.0 as usize][u.1];
            let lv = &self.levels[v.0 as usize][v.1];
            let _ = writeln!(s, "  \"{}\" -- \"{}\";", lu.label(), lv.label());
        }
        s.push_str("}\n");
        s
    }
}

/// ℤ/pⁿ with its integer-to-element table.
pub struct Level {
    pub ring: Ring,
    pub line: ProjLine,
    el: Vec<El>,
}

impl Level {
    pub fn new(p: u64, n: u32) -> Result<Level, String> {
        let ring = Ring::zmod_pk(p, n).map_err(|e| e.to_string())?;
        let mut el = vec![0];
        for _ in 1..ring.size() {
            el.push(ring.add(*el.last().unwrap(), 1));
        }
        Ok(Level { line: ProjLine::new(ring.clone()), ring, el })
    }

    pub fn el(&self, k: u64) -> El {
        self.el[(k % self.el.len() as u64) as usize]
    }

    pub fn mat(&self, g: [u64; 4]) -> Mat2 {
        Mat2::new(self.el(g[0]), self.el(g[1]), self.el(g[2]), self.el(g[3]))
    }
}

/// χₙ: Tₙ → P¹(ℤ/pⁿ), [L] ↦ [a mod pⁿ, b mod pⁿ].
pub fn chi(tree: &Tree, lvl: &Level, n: u32) -> Result<Vec<usize>, String> {
    tree.levels[n as usize]
        .iter()
        .map(|l| lvl.line.point(lvl.el(l.a), lvl.el(l.b)).ok_or_else(|| format!("{} is not unimodular", l.label())))
        .collect()
}

fn is_bijection(f: &[usize], n: usize) -> bool {
    f.len() == n && f.iter().collect::<HashSet<_>>().len() == n && f.iter().all(|&x| x < n)
}

/// Kernel and image of SL₂(ℤ/p^N) acting on Tₙ.
pub fn kernel_checks(tree: &Tree, n: u32) -> Vec<Check> {
    let pn = tree.p.pow(n);
    let mut out = Vec::new();
    let gens = tree.sl2_generators();
    let agree = gens.iter().find(|&&g| tree.sphere_action(n, g).ok() != tree.sphere_action_sets(n, g));
    out.push(Check::new(
        "sphere_action_formula",
        "L g = ((aa'+bc')e1 + (ab'+bd')e2)O + p^n L0",
        agree.map_or(Ok(()), |g| Err(format!("g = {g:?}"))),
    ));
    let all = tree.sl2();
    let mut kernel_ok = Ok(());
    let mut images = HashSet::new();
    for &g in &all {
        let perm = tree.sphere_action(n, g).expect("det 1");
        let scalar = g[1] % pn == 0 && g[2] % pn == 0 && (g[0] + pn - g[3] % pn) % pn == 0;
        if perm.is_identity() != scalar && kernel_ok.is_ok() {
            kernel_ok = Err(format!("g = {g:?}"));
        }
        images.insert(perm);
    }
    out.push(
        Check::new("sphere_kernel", "g acts trivially on T_n iff g is scalar modulo p^n", kernel_ok)
            .with_detail(format!("{} elements of SL2(Z/{})", all.len(), tree.modulus())),
    );
    let image = Level::new(tree.p, n).and_then(|lvl| {
        let c = chi(tree, &lvl, n)?;
        let psl = lvl.line.psl2_image();
        let moved: HashSet<Perm> = images
            .iter()
            .map(|g| {
                let mut img = vec![0u32; c.len()];
                for (i, &ci) in c.iter().enumerate() {
                    img[ci] = c[g.on(i)] as u32;
                }
                Perm::from_images(img).expect("chi is a bijection")
            })
            .collect();
        if moved == psl {
            Ok(images.len())
        } else {
            Err(format!("image of order {} differs from PSL2 of order {}", moved.len(), psl.len()))
        }
    });
    out.push(match image {
        Ok(k) => Check::pass("sphere_image", "the faithful image of SL2(O) on T_n is PSL2(O/p^n O)").with_detail(format!("order {k}")),
        Err(e) => Check::fail("sphere_image", "the faithful image of SL2(O) on T_n is PSL2(O/p^n O)", e),
    });
    out
}

/// The local Moufang set on (Tₙ, ∼) from the sphere action and its
/// isomorphism with M(ℤ/pⁿ) through χₙ.
pub fn verify_sphere_iso(p: u64, n: u32) -> Result<Vec<Check>, String> {
    let tree = Tree::new(p, n)?;
    let lvl = Level::new(p, n)?;
    let c = chi(&tree, &lvl, n)?;
    let mut out = Vec::new();
    out.push(Check::new(
        "chi_bijective",
        "chi_n: T_n -> P1(O/p^n O) is a bijection",
        if is_bijection(&c, lvl.line.len()) { Ok(()) } else { Err("chi is not a bijection".into()) },
    ));
    let eq = tree.sphere_equiv(n);
    let pe = lvl.line.equiv_set();
    let preserves = (0..c.len()).all(|i| (0..c.len()).all(|j| eq.equiv(i, j) == pe.equiv(c[i], c[j])));
    out.push(Check::new(
        "chi_equivalence",
        "L + pL0 = L' + pL0 iff chi(L) ~ chi(L')",
        if preserves { Ok(()) } else { Err("equivalence not preserved".into()) },
    ));
    let act = |g: [u64; 4]| tree.sphere_action_sets(n, g).ok_or_else(|| format!("g = {g:?} does not act on T_n"));
    let mut inter = Ok(());
    for g in tree.sl2_generators() {
        let t = act(g)?;
        let q = lvl.line.act(&lvl.mat(g)).ok_or("matrix is not invertible")?;
        if let Some(i) = (0..c.len()).find(|&i| c[t.on(i)] != q.on(c[i])) {
            inter = Err(format!("g = {g:?} at {}", tree.levels[n as usize][i].label()));
            break;
        }
    }
    out.push(Check::new("chi_intertwines", "chi_n(L g) = chi_n(L) g for generators g of SL2", inter));
    let pn = p.pow(n);
    let u: Vec<Perm> = (0..pn).map(|s| act([1, s, 0, 1])).collect::<Result<_, _>>()?;
    let tau = act([0, pn - 1, 1, 0])?;
    let inf = tree.normalize(n, 0, 1).expect("unimodular");
    let seed = Seed {
        name: format!("T_{n}(p = {p})"),
        eq,
        labels: tree.levels[n as usize].iter().map(LatticeRep::label).collect(),
        u,
        tau,
        inf,
    };
    let mt = Lms::construct(seed).map_err(|e| e.to_string())?;
    let (_, mr) = build_mr(lvl.ring.clone()).map_err(|e| e.to_string())?;
    out.push(Check::new(
        "sphere_isomorphism",
        "(T_n, ~) with the action of PSL2(O/p^n O) is isomorphic to M(O/p^n O) via chi_n",
        check_isomorphism(&mt, &mr, &c).map(|_| ()),
    ));
    Ok(out)
}

/// The squares χₙ ∘ φ = P¹(red) ∘ χₙ₊₁ and the finite inverse limit of the
/// projective lines.
pub fn compatibility_checks(tree: &Tree) -> Result<Vec<Check>, String> {
    let levels: Vec<Level> = (1..=tree.depth).map(|n| Level::new(tree.p, n)).collect::<Result<_, _>>()?;
    let chis: Vec<Vec<usize>> = (1..=tree.depth).map(|n| chi(tree, &levels[n as usize - 1], n)).collect::<Result<_, _>>()?;
    let mut reds = Vec::new();
    for n in 1..tree.depth as usize {
        let (hi, lo) = (&levels[n], &levels[n - 1]);
        let f: Vec<El> = (0..hi.ring.size() as u64).map(|k| (hi.el(k), lo.el(k))).fold(vec![0; hi.ring.size()], |mut f, (a, b)| {
            f[a] = b;
            f
        });
        if !hi.ring.elements().all(|a| hi.ring.elements().all(|b| f[hi.ring.add(a, b)] == lo.ring.add(f[a], f[b]) && f[hi.ring.mul(a, b)] == lo.ring.mul(f[a], f[b]))) {
            return Err("reduction is not a ring homomorphism".into());
        }
        reds.push(hi.line.induced_map(&lo.line, &f).ok_or("reduction does not preserve unimodularity")?);
    }
    let mut square = Ok(());
    'outer: for n in 1..tree.depth {
        for j in 0..tree.levels[n as usize + 1].len() {
            let up = tree.parent(n + 1, j).ok_or("vertex without parent")?;
            if chis[n as usize - 1][up] != reds[n as usize - 1][chis[n as usize][j]] {
                square = Err(format!("{}", tree.levels[n as usize + 1][j].label()));
                break 'outer;
            }
        }
    }
    let mut out = vec![Check::new(
        "compatibility_squares",
        "chi_n(phi(L)) = red(chi_(n+1)(L)) for the projection phi: T_(n+1) -> T_n",
        square,
    )];
    // compatible tuples (x_1, ..., x_N), built level by level
    let mut tuples: Vec<Vec<usize>> = (0..levels[0].line.len()).map(|x| vec![x]).collect();
    for n in 1..tree.depth as usize {
        let mut next = Vec::new();
        for t in &tuples {
            for y in 0..levels[n].line.len() {
                if reds[n - 1][y] == *t.last().unwrap() {
                    let mut t2 = t.clone();
                    t2.push(y);
                    next.push(t2);
                }
            }
        }
        tuples = next;
    }
    let top = levels.last().unwrap().line.len();
    let from_top: HashSet<Vec<usize>> = (0..top)
        .map(|y| {
            let mut t = vec![y];
            for r in reds.iter().rev() {
                t.push(r[*t.last().unwrap()]);
            }
            t.reverse();
            t
        })
        .collect();
    let set: HashSet<Vec<usize>> = tuples.into_iter().collect();
    out.push(Check::new(
        "inverse_limit",
        "compatible tuples of points of P1(Z/p^i), i <= N, correspond to points of P1(Z/p^N)",
        if set == from_top && set.len() == top { Ok(()) } else { Err(format!("{} tuples for {top} points", set.len())) },
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_spheres() {
        let t = Tree::new(3, 3).unwrap();
        assert_eq!(t.sphere(1).unwrap().len(), 4);
        assert_eq!(t.sphere(2).unwrap().len(), 12);
        assert_eq!(t.sphere(3).unwrap().len(), 36);
        assert!(t.sphere(4).is_err());
        for c in t.graph_checks() {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn adjacency_example() {
        let t = Tree::new(3, 2).unwrap();
        let i = t.normalize(1, 1, 2).unwrap();
        let nbrs: Vec<u64> = (0..t.levels[2].len()).filter(|&j| t.adjacent_sets(1, i, j)).map(|j| t.levels[2][j].b).collect();
        assert_eq!(nbrs, vec![2, 5, 8]);
    }

    #[test]
    fn chi_example() {
        let t = Tree::new(3, 2).unwrap();
        let lvl = Level::new(3, 2).unwrap();
        let c = chi(&t, &lvl, 2).unwrap();
        let i = t.normalize(2, 1, 5).unwrap();
        assert_eq!(lvl.line.label(c[i]), "[1,5]");
    }

    #[test]
    fn p3_kernel_level2() {
        let t = Tree::new(3, 3).unwrap();
        let checks = kernel_checks(&t, 2);
        for c in &checks {
            assert!(c.passed(), "{c:?}");
        }
        assert_eq!(checks[2].detail.as_deref(), Some("order 324"));
        assert!(t.sphere_action(2, [1, 0, 0, 1]).unwrap().is_identity());
        assert!(t.sphere_action(2, [2, 0, 0, 2]).is_err());
    }

    #[test]
    fn sphere_isomorphisms() {
        for (p, n) in [(3, 2), (5, 1)] {
            for c in verify_sphere_iso(p, n).unwrap() {
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn p3_compatibility() {
        let t = Tree::new(3, 3).unwrap();
        for c in compatibility_checks(&t).unwrap() {
            assert!(c.passed(), "{c:?}");
        }
        assert!(t.dot().starts_with("graph tree {"));
    }
}
