//! Acceptance run: one pass/fail line per criterion.

use lms::cli::{execute, Cli};
use lms::hermitian::{build_hermitian, build_orthogonal, hermitian_suite, orthogonal_suite, FormRing, HermForm, QuadForm};
use lms::jordan::{self, JordanPair, PvPoint, LINEAR_BUDGET};
use lms::localring::Ring;
use lms::moufang::{Lms, DEFAULT_CAP};
use lms::projective::{self, build_mr, twisted_seed, ProjLine};
use lms::report::{Check, Status};
use lms::tree::{self, Tree};
use clap::Parser;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ring(d: &str) -> Ring {
    Ring::parse(d).unwrap()
}

fn all_pass(checks: &[Check], what: &str) -> Result<(), String> {
    match checks.iter().find(|c| !c.passed()) {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {} failed ({})", c.name, c.witness.clone().unwrap_or_default())),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// Independent counts by brute force over integers.

fn units_mod(n: u64) -> Vec<u64> {
    (0..n).filter(|a| gcd(*a, n) == 1).collect()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// |P^1(Z/n)|: unimodular pairs up to units.
fn p1_count(n: u64) -> usize {
    let u = units_mod(n);
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            if gcd(gcd(a, b), n) == 1 {
                count += 1;
            }
        }
    }
    count / u.len()
}

fn sl2_count(n: u64) -> usize {
    let mut c = 0;
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    if (a * d + n * n - b * cc % n) % n == 1 {
                        c += 1;
                    }
                }
            }
        }
    }
    c
}

/// Points of the quadric ab = x1^2 + x2^2 over Z/9, up to units.
fn quadric_z9_count() -> usize {
    let n = 9u64;
    let unit = |v: u64| v % 3 != 0;
    let mut c = 0;
    for a in 0..n {
        for b in 0..n {
            for x1 in 0..n {
                for x2 in 0..n {
                    if (a * b) % n == (x1 * x1 + x2 * x2) % n && (unit(a) || unit(b) || unit(x1) || unit(x2)) {
                        c += 1;
                    }
                }
            }
        }
    }
    c / 6
}

/// Isotropic points of x1 x3^q + x2^(q+1) + x3 x1^q over F_9 = F_3[i].
fn unital_f9_count() -> usize {
    let els: Vec<(i64, i64)> = (0..9).map(|k| (k / 3, k % 3)).collect();
    let mul = |a: (i64, i64), b: (i64, i64)| ((a.0 * b.0 - a.1 * b.1).rem_euclid(3), (a.0 * b.1 + a.1 * b.0).rem_euclid(3));
    let conj = |a: (i64, i64)| (a.0, (-a.1).rem_euclid(3));
    let mut c = 0;
    for &a in &els {
        for &x in &els {
            for &b in &els {
                if a == (0, 0) && x == (0, 0) && b == (0, 0) {
                    continue;
                }
                let s1 = mul(a, conj(b));
                let s2 = mul(x, conj(x));
                let s3 = mul(b, conj(a));
                if ((s1.0 + s2.0 + s3.0) % 3, (s1.1 + s2.1 + s3.1) % 3) == (0, 0) {
                    c += 1;
                }
            }
        }
    }
    c / 8
}

fn timed<T>(limit: Duration, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let v = f();
    let d = t.elapsed();
    if d > limit {
        return Err(format!("took {d:?}, limit {limit:?}"));
    }
    Ok((v, d))
}

fn c1_axioms() -> Outcome {
    let mut out = Vec::new();
    for (d, n) in [("zmod:9", 9), ("zmod:25", 25), ("gfpoly:5:t:2", 25)] {
        let ((m, ax), dt) = timed(Duration::from_secs(60), || {
            let (_, m) = build_mr(ring(d)).unwrap();
            let ax = m.verify_axioms(DEFAULT_CAP, 0);
            (m, ax)
        })?;
        all_pass(&ax.checks, d)?;
        ensure(ax.is_local_moufang(), format!("{d}: not a local Moufang set"))?;
        let lm2 = ax.checks.iter().find(|c| c.name == "LM2").ok_or("no LM2 check")?;
        ensure(lm2.status == Status::Pass, format!("{d}: LM2 not exhaustive"))?;
        let p = if d.starts_with("gfpoly") { 5 } else { (n as f64).sqrt() as u64 };
        let expect = if d.starts_with("zmod") { p1_count(n) } else { (n + p) as usize };
        ensure(m.len() == expect, format!("{d}: {} points, expected {expect}", m.len()))?;
        out.push(format!("{d} {:.1}s", dt.as_secs_f64()));
    }
    Ok(out.join(", "))
}

fn c2_hua() -> Outcome {
    let (_, m) = build_mr(ring("zmod:9")).unwrap();
    let g = m.little_group(DEFAULT_CAP).map_err(|e| e.to_string())?;
    let h = m.verify_hua_theorem(&g, DEFAULT_CAP).map_err(|e| e.to_string())?;
    all_pass(&h.checks, "hua theorem")?;
    let g_oracle = sl2_count(9) / 2;
    let h_oracle = units_mod(9).len() / 2;
    let (u, u0c) = (9, 3);
    ensure(h.g_order == g_oracle, format!("|G| = {}, expected {g_oracle}", h.g_order))?;
    ensure(h.h_order == h_oracle && h.stab_order == h_oracle, format!("|H| = {}, |G_0,inf| = {}", h.h_order, h.stab_order))?;
    ensure(h.first_count == u * h_oracle * u, format!("first Bruhat cell {}", h.first_count))?;
    ensure(h.second_count == u * h_oracle * u0c, format!("second Bruhat cell {}", h.second_count))?;
    ensure(h.first_count + h.second_count == h.g_order, "Bruhat cells do not cover G")?;
    Ok(format!("|G| = {}, |H| = {}, cells {} + {}", h.g_order, h.h_order, h.first_count, h.second_count))
}

fn c3_identities() -> Outcome {
    let mut n = 0;
    for d in ["zmod:9", "zmod:25"] {
        let (_, m) = build_mr(ring(d)).unwrap();
        let checks: Vec<Check> =
            m.mu_suite().into_iter().chain(m.hua_suite()).chain(m.sumform_suite()).chain(m.quasi_inverse_suite()).collect();
        all_pass(&checks, d)?;
        ensure(checks.iter().all(|c| c.status == Status::Pass), format!("{d}: sampled check"))?;
        n += checks.len();
    }
    Ok(format!("{n} checks"))
}

fn c4_special() -> Outcome {
    let (_, m) = build_mr(ring("zmod:9")).unwrap();
    let info = m.special_info();
    ensure(info.special && info.abelian, "M(Z/9) not special and abelian")?;
    ensure(m.units().len() == 6, format!("{} units", m.units().len()))?;
    for &x in m.units() {
        ensure(m.mu(x).then(m.mu(x)).is_identity(), format!("mu_{}^2 != id", m.label(x)))?;
    }
    let checks = m.special_suite();
    all_pass(&checks, "special suite")?;
    for name in ["unique_2_divisible", "scale_mu_v", "scale_hua_ii", "mu_involution"] {
        ensure(checks.iter().any(|c| c.name == name), format!("missing {name}"))?;
    }
    // y mu_{x*2} = y mu_x * 4 on P^1(Z/9): mu_{[1,r]} sends [1,y] to [1,-r^2/y]
    let r = ring("zmod:9");
    let pl = ProjLine::new(r.clone());
    for &a in r.units() {
        let x = pl.first(a);
        let x2 = m.times(x, 2);
        for &b in r.units() {
            let y = pl.first(b);
            let lhs = m.mu(x2).on(y);
            let rhs = m.times(m.mu(x).on(y), 4);
            let direct = pl.first(r.neg(r.mul(r.mul(r.mul(a, a), r.from_int(4)), r.unit_inv(b))));
            ensure(lhs == rhs && lhs == direct, format!("scaling fails at x = {a}, y = {b}"))?;
        }
    }
    Ok(format!("{} checks", checks.len()))
}

fn c5_ring_roundtrip() -> Outcome {
    let (res, dt) = timed(Duration::from_secs(300), || -> Result<usize, String> {
        let mut n = 0;
        for d in ["zmod:9", "zmod:25", "zmod:27"] {
            let (pl, m) = build_mr(ring(d)).unwrap();
            for &e in m.units() {
                let checks = projective::roundtrip_checks(&pl, &m, e, DEFAULT_CAP);
                all_pass(&checks, &format!("{d} e = {}", m.label(e)))?;
                for name in ["ring_isomorphic", "star_condition", "star_isomorphism"] {
                    ensure(checks.iter().any(|c| c.name == name), format!("{d}: missing {name}"))?;
                }
                n += 1;
            }
        }
        Ok(n)
    })?;
    Ok(format!("{} units, {:.1}s", res?, dt.as_secs_f64()))
}

fn c6_jordan() -> Outcome {
    let pair = JordanPair::from_spec("ring:zmod:25").map_err(|e| e.to_string())?;
    let ax = pair.axiom_suite(LINEAR_BUDGET);
    all_pass(&ax, "axioms")?;
    for name in ["JP1", "JP2", "JP3", "JP1_linearized", "JP2_linearized"] {
        let c = ax.iter().find(|c| c.name == name).ok_or(format!("missing {name}"))?;
        ensure(c.status == Status::Pass, format!("{name} not exhaustive"))?;
    }
    for s in 0..2 {
        let mut rad: Vec<u64> = pair.radical(s).iter().map(|&x| pair.label(s, x).parse().unwrap()).collect();
        rad.sort();
        ensure(rad == (0..25).step_by(5).collect::<Vec<_>>(), format!("Rad V{s} = {rad:?}"))?;
    }
    let e = pair.invertibles(0)[0];
    let (pv, m) = jordan::build_mv(pair.clone(), e).map_err(|e| e.to_string())?;
    ensure(pv.len() == p1_count(25), format!("|P(V)| = {}", pv.len()))?;
    all_pass(&jordan::mv_suite(&pv, &m), "M(V) suite")?;
    let ax = m.verify_axioms(DEFAULT_CAP, 0);
    all_pass(&ax.checks, "M(V) axioms")?;
    all_pass(&jordan::roundtrip_checks(&pair, e, LINEAR_BUDGET), "roundtrip")?;
    let out = jordan::reconstruct_jordan(&m, pv.first(e), LINEAR_BUDGET);
    let rec = out.recon.ok_or("reconstruction failed")?;
    let ex = jordan::verify_extra(&m, &rec);
    all_pass(&ex.checks, "extra condition")?;
    ensure(matches!(pv.coords(pv.first(e)), PvPoint::First(_)), "first(e) is not in V+")?;
    Ok(format!("|P(V)| = {}, |Rad V+| = 5", pv.len()))
}

fn c7_hermitian() -> Outcome {
    let fr = FormRing::with_lambda(ring("gf:9:frob"), "min")?;
    let (hs, m) = build_hermitian(HermForm::standard(fr, 1))?;
    let oracle = unital_f9_count();
    ensure(hs.len() == 28 && oracle == 28, format!("|H| = {}, oracle {oracle}", hs.len()))?;
    let checks = hermitian_suite(&hs, &m);
    all_pass(&checks, "hermitian suite")?;
    for name in ["mu_word", "mu_closed_form", "U_mu_is_U0"] {
        ensure(checks.iter().any(|c| c.name == name), format!("missing {name}"))?;
    }
    for &x in m.units() {
        ensure(hs.mu_closed(x).as_ref() == Some(m.mu(x)), format!("closed form differs at {}", m.label(x)))?;
    }
    all_pass(&m.verify_axioms(DEFAULT_CAP, 0).checks, "hermitian axioms")?;
    let q = QuadForm::parse(ring("zmod:9"), "x1^2+x2^2", None)?;
    let (os, om) = build_orthogonal(&q)?;
    let oracle = quadric_z9_count();
    ensure(os.len() == oracle && oracle == 90, format!("orthogonal {} points, oracle {oracle}", os.len()))?;
    let ax = om.verify_axioms(DEFAULT_CAP, 0);
    all_pass(&ax.checks, "orthogonal axioms")?;
    ensure(ax.is_local_moufang(), "orthogonal not local Moufang")?;
    all_pass(&orthogonal_suite(&os, &om), "orthogonal suite")?;
    Ok(format!("{} unital points, {} quadric points", hs.len(), os.len()))
}

fn c8_tree() -> Outcome {
    let t = Tree::new(3, 3)?;
    let sizes: Vec<usize> = (1..=3).map(|n| t.sphere(n).map(|s| s.len())).collect::<Result<_, _>>()?;
    let oracle: Vec<usize> = (1..=3u32).map(|n| 4 * 3usize.pow(n - 1)).collect();
    ensure(sizes == oracle, format!("spheres {sizes:?}"))?;
    all_pass(&t.graph_checks(), "graph")?;
    let t2 = Tree::new(3, 2)?;
    let k = tree::kernel_checks(&t2, 2);
    all_pass(&k, "kernel")?;
    let kernel = k.iter().find(|c| c.name == "sphere_kernel").ok_or("missing sphere_kernel")?;
    // scalars of SL2(Z/9): a^2 = 1
    let scalars = units_mod(9).iter().filter(|&&a| a * a % 9 == 1).count();
    let image = k.iter().find(|c| c.name == "sphere_image").and_then(|c| c.detail.clone()).unwrap_or_default();
    ensure(image.contains(&format!("order {}", sl2_count(9) / scalars)), format!("image {image}"))?;
    all_pass(&tree::verify_sphere_iso(3, 2)?, "sphere iso")?;
    all_pass(&tree::compatibility_checks(&t)?, "compatibility")?;
    ensure(kernel.passed(), "kernel check")?;
    Ok(format!("spheres {sizes:?}, image {image}, kernel of size {scalars}"))
}

fn c9_negative() -> Outcome {
    let (pl, m) = build_mr(ring("zmod:4")).unwrap();
    let checks = projective::roundtrip_checks(&pl, &m, pl.first(1), DEFAULT_CAP);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    ensure(failed == ["R4"], format!("zmod:4 failures {failed:?}"))?;
    let pl9 = ProjLine::new(ring("zmod:9"));
    let tw = Lms::construct(twisted_seed(&pl9)?).map_err(|e| e.to_string())?;
    let ax = tw.verify_axioms(DEFAULT_CAP, 0);
    ensure(!ax.is_local_moufang(), "twisted seed accepted")?;
    let (unit, _) = ax.witness.as_ref().ok_or("no witness for the twisted seed")?;
    ensure(tw.is_unit(*unit), "witness is not a unit")?;
    let q = QuadForm::parse(ring("zmod:5"), "x1^2+x2^2", None)?;
    let w = q.check_anisotropic().err().ok_or("isotropic form accepted")?;
    ensure(build_orthogonal(&q).is_err(), "isotropic form built")?;
    Ok(format!("R4 only; twisted witness {}; {w}", tw.label(*unit)))
}

fn c10_determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["verify", "moufang", "--ring", "zmod:9", "--suite", "all"],
        &["verify", "moufang", "--ring", "zmod:9", "--family", "orthogonal", "--q", "x1^2+x2^2"],
        &["projective", "reconstruct", "--ring", "zmod:9", "--all-units"],
        &["jordan", "roundtrip", "--pair", "ring:zmod:25"],
        &["hermitian", "build", "--ring", "gf:9:frob"],
        &["tree", "verify-iso", "--p", "3", "--level", "2"],
        &["tree", "spheres", "--p", "3", "--depth", "3"],
    ];
    for args in runs {
        let run = || -> Result<String, String> {
            let cli = Cli::try_parse_from(std::iter::once("lms").chain(args.iter().copied())).map_err(|e| e.to_string())?;
            Ok(execute(&cli).map_err(|e| e.to_string())?.to_json())
        };
        let (a, b) = (run()?, run()?);
        ensure(a == b, format!("{} differs between runs", args.join(" ")))?;
    }
    Ok(format!("{} commands", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("axioms of M(Z/9), M(Z/25), M(F5[t]/(t^2))", c1_axioms),
        ("Hua theorem on M(Z/9)", c2_hua),
        ("mu, Hua, sum and quasi-inverse identities", c3_identities),
        ("special suite on M(Z/9)", c4_special),
        ("ring round trip and star condition", c5_ring_roundtrip),
        ("Jordan pair (Z/25, Z/25)", c6_jordan),
        ("Hermitian F9 and orthogonal Z/9", c7_hermitian),
        ("tree spheres for p = 3", c8_tree),
        ("negative controls", c9_negative),
        ("deterministic JSON", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(d) => println!("criterion {:>2}: PASS  {name}  ({d})", i + 1),
            Err(w) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}  ({w})", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
