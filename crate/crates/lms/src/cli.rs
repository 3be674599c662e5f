//! Command-line front end.

use crate::action::{ActionError, PermGroup};
use crate::hermitian::{build_hermitian, build_orthogonal, hermitian_suite, orthogonal_suite, FormRing, HermForm, QuadForm};
use crate::jordan::{self, JordanPair, LINEAR_BUDGET};
use crate::localring::Ring;
use crate::moufang::{Lms, MoufangError, DEFAULT_CAP};
use crate::projective::{self, build_mr};
use crate::report::{Check, Report};
use crate::tree::{self, Tree};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "lms", version, about = "Exact verification of local Moufang sets over finite local rings")]
pub struct Cli {
    /// Write the JSON report to this path
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Bound on group orders for exhaustive checks
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    /// Seed for sampled checks
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Ring data
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// M(R) on the projective line
    Projective {
        #[command(subcommand)]
        cmd: ProjCmd,
    },
    /// Jordan pairs and M(V)
    Jordan {
        #[command(subcommand)]
        cmd: JordanCmd,
    },
    /// Hermitian local Moufang sets
    Hermitian {
        #[command(subcommand)]
        cmd: HermCmd,
    },
    /// Orthogonal local Moufang sets
    Orthogonal {
        #[command(subcommand)]
        cmd: OrthCmd,
    },
    /// Bruhat-Tits tree spheres
    Tree {
        #[command(subcommand)]
        cmd: TreeCmd,
    },
    /// Axioms and identity suites
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    Info { desc: String },
}

#[derive(Args, Debug)]
pub struct RingArg {
    /// Ring descriptor, e.g. zmod:9 or gfpoly:5:t:2
    #[arg(long)]
    pub ring: String,
}

#[derive(Subcommand, Debug)]
pub enum ProjCmd {
    /// Build M(R) and run the axioms and closed forms
    Build(RingArg),
    /// Reconstruct the ring from M(R)
    Reconstruct {
        #[command(flatten)]
        ring: RingArg,
        /// Ring unit r, giving e = [1,r]
        #[arg(long, conflicts_with = "all_units")]
        unit: Option<String>,
        /// Use every unit point as e
        #[arg(long)]
        all_units: bool,
    },
    /// Check the condition characterizing projective sets
    VerifyStar(RingArg),
}

#[derive(Args, Debug)]
pub struct PairArg {
    /// Pair descriptor: ring:<ring> or qform:<ring>:<form>
    #[arg(long)]
    pub pair: String,
}

#[derive(Subcommand, Debug)]
pub enum JordanCmd {
    /// Build M(V) and run its checks
    Build(PairArg),
    /// Jordan pair axioms and basic identities
    Axioms(PairArg),
    /// V -> M(V) -> V
    Roundtrip(PairArg),
    /// Reconstruct from M(R) of a ring and check the extra condition
    VerifyExtra(RingArg),
}

#[derive(Args, Debug)]
pub struct HermArgs {
    #[arg(long)]
    pub ring: String,
    /// Element eps with eps eps* = 1
    #[arg(long)]
    pub eps: Option<String>,
    /// Form parameter
    #[arg(long, default_value = "min")]
    pub lambda: String,
    /// Rank of W with h(x,y) = sum x_i* y_i
    #[arg(long, default_value_t = 1)]
    pub rank: usize,
}

#[derive(Subcommand, Debug)]
pub enum HermCmd {
    /// Build and verify the axioms
    Build(HermArgs),
    /// Closed forms of the mu-maps against composed words
    MuCheck(HermArgs),
}

#[derive(Args, Debug)]
pub struct OrthArgs {
    #[arg(long)]
    pub ring: String,
    /// Quadratic form, e.g. x1^2+x2^2
    #[arg(long)]
    pub q: String,
}

#[derive(Subcommand, Debug)]
pub enum OrthCmd {
    Build(OrthArgs),
}

#[derive(Subcommand, Debug)]
pub enum TreeCmd {
    /// Spheres up to a depth, tree shape and compatibility
    Spheres {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: u32,
        /// Write the adjacency graph in DOT format
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Sphere action against M(Z/p^n)
    VerifyIso {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        level: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Projective,
    Jordan,
    Orthogonal,
    Hermitian,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Default,
    All,
    Axioms,
    Mu,
    Hua,
    Sumform,
    QuasiInverse,
    Special,
    HuaTheorem,
    ReconstructRing,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    Moufang {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value = "projective")]
        family: Family,
        /// Quadratic form for the orthogonal family
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value = "min")]
        lambda: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, value_enum, default_value = "default")]
        suite: Vec<Suite>,
    },
}

/// Failures that stop a run before a report is complete.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Cap(String),
    Build(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Build(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Cap(m) => write!(f, "cap exceeded: {m}"),
            CliError::Build(m) => write!(f, "construction failed: {m}"),
        }
    }
}

fn from_moufang(e: MoufangError) -> CliError {
    match e {
        MoufangError::Action(ActionError::CapExceeded(_)) => CliError::Cap(e.to_string()),
        e => CliError::Build(e.to_string()),
    }
}

fn parse_ring(desc: &str) -> Result<Ring, CliError> {
    Ring::parse(desc).map_err(|e| CliError::Parse(e.to_string()))
}

fn parse_pair(spec: &str) -> Result<JordanPair, CliError> {
    JordanPair::from_spec(spec).map_err(|e| match e {
        jordan::JordanError::Parse(..) => CliError::Parse(e.to_string()),
        e => CliError::Build(e.to_string()),
    })
}

fn parse_qform(ring: &str, q: &str) -> Result<QuadForm, CliError> {
    QuadForm::parse(parse_ring(ring)?, q, None).map_err(CliError::Parse)
}

fn herm_form(a: &HermArgs) -> Result<HermForm, CliError> {
    let mut ring = parse_ring(&a.ring)?;
    if !ring.has_involution() {
        return Err(CliError::Parse(format!("{} has no involution; add :frob or :inv=id", a.ring)));
    }
    if let Some(e) = &a.eps {
        let el = ring.parse_el(e).map_err(CliError::Parse)?;
        ring = ring.with_eps(el).map_err(|e| CliError::Parse(e.to_string()))?;
    }
    let fr = FormRing::with_lambda(ring, &a.lambda).map_err(CliError::Parse)?;
    Ok(HermForm::standard(fr, a.rank))
}

fn lms_orders(r: &mut Report, m: &Lms) {
    r.order("points", m.len());
    r.order("classes", m.n_classes());
    r.order("U", m.u_inf().order());
}

fn axioms(r: &mut Report, m: &Lms, cap: usize, seed: u64) -> Option<PermGroup> {
    let ax = m.verify_axioms(cap, seed);
    if let Some(g) = &ax.group {
        r.order("G", g.order());
    }
    r.extend(ax.checks);
    ax.group
}

fn hua_theorem(r: &mut Report, m: &Lms, g: Option<&PermGroup>, cap: usize) -> Result<(), CliError> {
    let owned;
    let g = match g {
        Some(g) => g,
        None => {
            owned = m.little_group(cap).map_err(from_moufang)?;
            &owned
        }
    };
    let h = m.verify_hua_theorem(g, cap).map_err(from_moufang)?;
    r.order("G", h.g_order);
    r.order("H", h.h_order);
    r.order("G_0_inf", h.stab_order);
    r.order("bruhat_first", h.first_count);
    r.order("bruhat_second", h.second_count);
    r.extend(h.checks);
    Ok(())
}

/// Builds the local Moufang set of a family.
fn build_family(family: Family, ring: &str, q: Option<&str>, lambda: &str, rank: usize) -> Result<(Lms, Option<projective::ProjLine>), CliError> {
    match family {
        Family::Projective => {
            let (pl, m) = build_mr(parse_ring(ring)?).map_err(from_moufang)?;
            Ok((m, Some(pl)))
        }
        Family::Jordan => {
            let pair = parse_pair(&format!("ring:{ring}"))?;
            let e = *pair.invertibles(0).first().ok_or_else(|| CliError::Build("no invertible element".into()))?;
            let (_, m) = jordan::build_mv(pair, e).map_err(CliError::Build)?;
            Ok((m, None))
        }
        Family::Orthogonal => {
            let q = q.ok_or_else(|| CliError::Parse("the orthogonal family needs --q".into()))?;
            let (_, m) = build_orthogonal(&parse_qform(ring, q)?).map_err(CliError::Build)?;
            Ok((m, None))
        }
        Family::Hermitian => {
            let a = HermArgs { ring: ring.into(), eps: None, lambda: lambda.into(), rank };
            let (_, m) = build_hermitian(herm_form(&a)?).map_err(CliError::Build)?;
            Ok((m, None))
        }
    }
}

/// Runs a parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let (cap, seed) = (cli.cap, cli.seed);
    let rep = match &cli.command {
        Command::Ring { cmd: RingCmd::Info { desc } } => {
            let ring = parse_ring(desc)?;
            let mut r = Report::new(&format!("ring info {desc}"), seed);
            r.order("size", ring.size());
            r.order("units", ring.units().len());
            r.order("ideal", ring.ideal().len());
            r.order("residue_field", ring.residue_size());
            r.order("characteristic", ring.characteristic());
            let ideal_ok = ring.ideal().iter().all(|&a| ring.ideal().iter().all(|&b| ring.in_ideal(ring.add(a, b))))
                && ring.ideal().iter().all(|&a| ring.elements().all(|b| ring.in_ideal(ring.mul(a, b))));
            r.push(Check::new(
                "local",
                "the non-units form an ideal",
                if ideal_ok && ring.units().len() + ring.ideal().len() == ring.size() { Ok(()) } else { Err("non-units are not an ideal".into()) },
            ));
            r
        }
        Command::Projective { cmd } => match cmd {
            ProjCmd::Build(a) => {
                let (pl, m) = build_mr(parse_ring(&a.ring)?).map_err(from_moufang)?;
                let mut r = Report::new(&format!("projective build {}", a.ring), seed);
                lms_orders(&mut r, &m);
                let g = axioms(&mut r, &m, cap, seed);
                r.extend(projective::projective_suite(&pl, &m, g.as_ref(), cap));
                r
            }
            ProjCmd::Reconstruct { ring, unit, all_units } => {
                let (pl, m) = build_mr(parse_ring(&ring.ring)?).map_err(from_moufang)?;
                let mut r = Report::new(&format!("projective reconstruct {}", ring.ring), seed);
                lms_orders(&mut r, &m);
                let units: Vec<usize> = match unit {
                    _ if *all_units => m.units().to_vec(),
                    Some(u) => vec![pl.first(pl.ring.parse_el(u).map_err(CliError::Parse)?)],
                    None => vec![pl.first(pl.ring.one())],
                };
                for e in units {
                    let tag = m.label(e).to_string();
                    r.extend(projective::roundtrip_checks(&pl, &m, e, cap).into_iter().map(|mut c| {
                        c.detail = Some(match c.detail {
                            Some(d) => format!("e = {tag}; {d}"),
                            None => format!("e = {tag}"),
                        });
                        c
                    }));
                }
                r
            }
            ProjCmd::VerifyStar(a) => {
                let (pl, m) = build_mr(parse_ring(&a.ring)?).map_err(from_moufang)?;
                let mut r = Report::new(&format!("projective verify-star {}", a.ring), seed);
                let out = projective::reconstruct_ring(&m, pl.first(pl.ring.one()), cap);
                let ok = out.checks.iter().all(Check::passed);
                r.extend(out.checks);
                if let (true, Some(rec)) = (ok, out.recon) {
                    r.extend(projective::verify_star(&m, &rec).checks);
                }
                r
            }
        },
        Command::Jordan { cmd } => match cmd {
            JordanCmd::Build(a) => {
                let pair = parse_pair(&a.pair)?;
                let e = *pair.invertibles(0).first().ok_or_else(|| CliError::Build("no invertible element".into()))?;
                let (pv, m) = jordan::build_mv(pair, e).map_err(CliError::Build)?;
                let mut r = Report::new(&format!("jordan build {}", a.pair), seed);
                lms_orders(&mut r, &m);
                r.extend(jordan::mv_suite(&pv, &m));
                axioms(&mut r, &m, cap, seed);
                r
            }
            JordanCmd::Axioms(a) => {
                let pair = parse_pair(&a.pair)?;
                let mut r = Report::new(&format!("jordan axioms {}", a.pair), seed);
                r.order("V+", pair.size(0));
                r.order("V-", pair.size(1));
                r.order("Rad V+", pair.radical(0).len());
                r.order("Rad V-", pair.radical(1).len());
                r.extend(pair.axiom_suite(LINEAR_BUDGET));
                r
            }
            JordanCmd::Roundtrip(a) => {
                let pair = parse_pair(&a.pair)?;
                let e = *pair.invertibles(0).first().ok_or_else(|| CliError::Build("no invertible element".into()))?;
                let mut r = Report::new(&format!("jordan roundtrip {}", a.pair), seed);
                r.extend(pair.axiom_suite(LINEAR_BUDGET));
                r.extend(jordan::roundtrip_checks(&pair, e, LINEAR_BUDGET));
                r
            }
            JordanCmd::VerifyExtra(a) => {
                let ring = parse_ring(&a.ring)?;
                let (pl, m) = build_mr(ring.clone()).map_err(from_moufang)?;
                let mut r = Report::new(&format!("jordan verify-extra {}", a.ring), seed);
                let out = jordan::reconstruct_jordan(&m, pl.first(ring.one()), LINEAR_BUDGET);
                r.extend(out.checks);
                if let Some(rec) = out.recon {
                    let rp = JordanPair::ring_pair(&ring).map_err(|e| CliError::Build(e.to_string()))?;
                    r.push(Check::new(
                        "pair_is_ring_pair",
                        "the reconstructed pair is isomorphic to (R, R) with yQ_x = xyx",
                        jordan::find_pair_isomorphism(&rec.pair, &rp).map(|_| ()),
                    ));
                    r.extend(jordan::verify_extra(&m, &rec).checks);
                }
                r
            }
        },
        Command::Hermitian { cmd } => {
            let (a, mu_only) = match cmd {
                HermCmd::Build(a) => (a, false),
                HermCmd::MuCheck(a) => (a, true),
            };
            let form = herm_form(a)?;
            let mut r = Report::new(
                &format!("hermitian {} {} lambda={} rank={}", if mu_only { "mu-check" } else { "build" }, a.ring, a.lambda, a.rank),
                seed,
            );
            r.extend(form.suite());
            if !r.all_passed() {
                return Ok(r);
            }
            let (hs, m) = build_hermitian(form).map_err(CliError::Build)?;
            lms_orders(&mut r, &m);
            if !mu_only {
                axioms(&mut r, &m, cap, seed);
            }
            r.extend(hermitian_suite(&hs, &m));
            r
        }
        Command::Orthogonal { cmd: OrthCmd::Build(a) } => {
            let q = parse_qform(&a.ring, &a.q)?;
            let mut r = Report::new(&format!("orthogonal build {} {}", a.ring, a.q), seed);
            r.push(Check::new("quadratic_form", "q(xr) = q(x) r^2 and f bilinear", q.check_quadratic()));
            r.push(Check::new("anisotropic", "q(x) in m implies x in Wm", q.check_anisotropic()));
            if !r.all_passed() {
                return Ok(r);
            }
            let (hs, m) = build_orthogonal(&q).map_err(CliError::Build)?;
            lms_orders(&mut r, &m);
            axioms(&mut r, &m, cap, seed);
            r.extend(orthogonal_suite(&hs, &m));
            r.push(Check::new(
                "jordan_pair_model",
                "M(W,q) is isomorphic to M(V) for V = (W, W) with yQ_x = y q(x) - x f(x,y)",
                jordan::orthogonal_jordan_iso(&q),
            ));
            r
        }
        Command::Tree { cmd } => match cmd {
            TreeCmd::Spheres { p, depth, dot } => {
                let t = Tree::new(*p, *depth).map_err(CliError::Parse)?;
                let mut r = Report::new(&format!("tree spheres p={p} depth={depth}"), seed);
                for n in 1..=*depth {
                    r.order(&format!("T{n}"), t.levels[n as usize].len());
                }
                r.extend(t.graph_checks());
                r.extend(tree::compatibility_checks(&t).map_err(CliError::Build)?);
                if let Some(path) = dot {
                    std::fs::write(path, t.dot()).map_err(|e| CliError::Build(e.to_string()))?;
                }
                r
            }
            TreeCmd::VerifyIso { p, level } => {
                if *level == 0 {
                    return Err(CliError::Parse("level must be at least 1".into()));
                }
                let t = Tree::new(*p, *level).map_err(CliError::Parse)?;
                let mut r = Report::new(&format!("tree verify-iso p={p} level={level}"), seed);
                r.order("points", t.levels[*level as usize].len());
                r.extend(tree::verify_sphere_iso(*p, *level).map_err(CliError::Build)?);
                r.extend(tree::kernel_checks(&t, *level));
                r
            }
        },
        Command::Verify { cmd: VerifyCmd::Moufang { ring, family, q, lambda, rank, suite } } => {
            let (m, pl) = build_family(*family, ring, q.as_deref(), lambda, *rank)?;
            let fam = format!("{family:?}").to_lowercase();
            let mut r = Report::new(&format!("verify moufang {fam} {ring}{}", q.as_ref().map(|q| format!(" {q}")).unwrap_or_default()), seed);
            lms_orders(&mut r, &m);
            let all = suite.contains(&Suite::All);
            let default = suite.contains(&Suite::Default) || all;
            let want = |s: Suite| all || suite.contains(&s) || (default && matches!(s, Suite::Axioms | Suite::Mu | Suite::Hua | Suite::Sumform | Suite::QuasiInverse));
            let mut g = None;
            if want(Suite::Axioms) {
                g = axioms(&mut r, &m, cap, seed);
            }
            if want(Suite::Mu) {
                r.extend(m.mu_suite());
            }
            if want(Suite::Hua) {
                r.extend(m.hua_suite());
            }
            if want(Suite::Sumform) {
                r.extend(m.sumform_suite());
            }
            if want(Suite::QuasiInverse) {
                r.extend(m.quasi_inverse_suite());
            }
            if want(Suite::Special) {
                r.extend(m.special_suite());
            }
            if want(Suite::HuaTheorem) {
                hua_theorem(&mut r, &m, g.as_ref(), cap)?;
            }
            if want(Suite::ReconstructRing) {
                let pl = pl.ok_or_else(|| CliError::Parse("reconstruct-ring needs the projective family".into()))?;
                r.extend(projective::roundtrip_checks(&pl, &m, pl.first(pl.ring.one()), cap));
            }
            r
        }
    };
    Ok(rep)
}

/// Parses arguments, runs, prints the summary and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(rep) => {
            print!("{}", rep.summary());
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, rep.to_json()) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if rep.all_passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}
