//! Finite local rings with exhaustive unit and ideal tables.
//!
//! Elements are dense indices `0..size()`. Index 0 is always zero and index 1
//! is always the identity. Index order is the canonical order used for every
//! tie-break in the crate.

use std::fmt;
use thiserror::Error;

pub type El = usize;

/// Default upper bound on ring size.
pub const SIZE_CAP: usize = 1 << 14;

const TABLE_LIMIT: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("cannot parse ring descriptor `{0}`: {1}")]
    Parse(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ring is not local: {0}")]
    NotLocal(String),
    #[error("invalid involution: {0}")]
    BadInvolution(String),
    #[error("invalid central element: {0}")]
    BadEps(String),
    #[error("ring of size {0} exceeds the cap {1}")]
    TooLarge(usize, usize),
    #[error("element {0} is not a unit")]
    NotUnit(String),
}

#[derive(Clone, Debug)]
enum Kind {
    /// Z/p^k
    ZMod,
    /// F_p[t]/(F) with F = f^m monic of degree `deg`
    Poly { p: u64, modulus: Vec<u64>, deg: usize },
    /// K[s]/(s^m) for a finite field K
    Trunc { base: Box<Ring>, m: usize },
    /// explicit tables only
    Table,
}

#[derive(Clone)]
pub struct Ring {
    kind: Kind,
    n: usize,
    name: String,
    add_t: Option<Vec<u32>>,
    mul_t: Option<Vec<u32>>,
    neg_t: Vec<u32>,
    inv_t: Vec<Option<u32>>,
    ideal: Vec<El>,
    units: Vec<El>,
    star: Option<Vec<u32>>,
    eps: Option<El>,
    residue_of: Vec<u32>,
    residue_n: usize,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.name)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns (p, k) with n = p^k, if n is a prime power.
fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn parse_u64(s: &str, desc: &str) -> Result<u64, RingError> {
    s.trim()
        .parse::<u64>()
        .map_err(|_| RingError::Parse(desc.into(), format!("expected an integer, got `{s}`")))
}

/// Parses a polynomial in `t` with integer coefficients, e.g. `t^2+2t+1`.
/// Returns coefficients, constant term first, reduced mod p.
fn parse_poly(s: &str, p: u64, desc: &str) -> Result<Vec<u64>, RingError> {
    let err = |m: &str| RingError::Parse(desc.into(), m.into());
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, c) in cleaned.chars().enumerate() {
        if (c == '+' || c == '-') && i > 0 {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(c);
    }
    terms.push(cur);
    let mut coeffs: Vec<i64> = Vec::new();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1i64, b.to_string()),
            None => (1, term.trim_start_matches('+').to_string()),
        };
        let (c, e) = if let Some(pos) = body.find('t') {
            let cs = body[..pos].trim_end_matches('*');
            let c = if cs.is_empty() {
                1
            } else {
                cs.parse::<i64>().map_err(|_| err("bad coefficient"))?
            };
            let rest = &body[pos + 1..];
            let e = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(|| err("expected `^` after t"))?
                    .parse::<usize>()
                    .map_err(|_| err("bad exponent"))?
            };
            (c, e)
        } else {
            (body.parse::<i64>().map_err(|_| err("bad constant"))?, 0)
        };
        if coeffs.len() <= e {
            coeffs.resize(e + 1, 0);
        }
        coeffs[e] += sign * c;
    }
    let pi = p as i64;
    let mut out: Vec<u64> = coeffs.iter().map(|c| c.rem_euclid(pi) as u64).collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Ok(out)
}

fn poly_mul_raw(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Reduces `a` modulo the monic polynomial `m` (degree `deg`).
fn poly_reduce(mut a: Vec<u64>, m: &[u64], deg: usize, p: u64) -> Vec<u64> {
    if a.len() > deg {
        for i in (deg..a.len()).rev() {
            let c = a[i];
            if c == 0 {
                continue;
            }
            for j in 0..deg {
                let sub = c * m[j] % p;
                a[i - deg + j] = (a[i - deg + j] + p - sub) % p;
            }
            a[i] = 0;
        }
    }
    a.resize(deg, 0);
    a
}

fn decode(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(idx % base);
        idx /= base;
    }
    v
}

fn encode(v: &[usize], base: usize) -> usize {
    v.iter().rev().fold(0, |acc, &c| acc * base + c)
}

impl Ring {
    /// Parses a ring descriptor.
    ///
    /// Grammar: `zmod:<n>`, `zmod:<p>^<k>`, `gfpoly:<p>:<f(t)>:<m>`, `gf:<q>`,
    /// `gft:<q>:<m>` (the truncated polynomial ring F_q[s]/(s^m)), followed by
    /// optional `:inv=id|frob`, `:frob` and `:eps=<element>` suffixes.
    pub fn parse(desc: &str) -> Result<Ring, RingError> {
        let parts: Vec<&str> = desc.split(':').collect();
        let perr = |m: &str| RingError::Parse(desc.into(), m.into());
        let (mut ring, used) = match parts[0] {
            "zmod" => {
                let arg = parts.get(1).ok_or_else(|| perr("missing modulus"))?;
                let (p, k) = if let Some((b, e)) = arg.split_once('^') {
                    let p = parse_u64(b, desc)?;
                    let k = parse_u64(e, desc)? as u32;
                    if !is_prime(p) {
                        return Err(RingError::NotPrime(p));
                    }
                    if k == 0 {
                        return Err(perr("exponent must be at least 1"));
                    }
                    (p, k)
                } else {
                    let n = parse_u64(arg, desc)?;
                    prime_power(n).ok_or_else(|| {
                        RingError::NotLocal(format!("Z/{n} is not a prime power quotient"))
                    })?
                };
                (Ring::zmod_pk(p, k)?, 2)
            }
            "gfpoly" => {
                if parts.len() < 4 {
                    return Err(perr("expected gfpoly:<p>:<f(t)>:<m>"));
                }
                let p = parse_u64(parts[1], desc)?;
                if !is_prime(p) {
                    return Err(RingError::NotPrime(p));
                }
                let f = parse_poly(parts[2], p, desc)?;
                let m = parse_u64(parts[3], desc)? as usize;
                (Ring::gfpoly(p, &f, m)?, 4)
            }
            "gf" => {
                let q = parse_u64(parts.get(1).ok_or_else(|| perr("missing order"))?, desc)?;
                (Ring::gf(q)?, 2)
            }
            "gft" => {
                if parts.len() < 3 {
                    return Err(perr("expected gft:<q>:<m>"));
                }
                let q = parse_u64(parts[1], desc)?;
                let m = parse_u64(parts[2], desc)? as usize;
                (Ring::truncated(Ring::gf(q)?, m)?, 3)
            }
            other => return Err(perr(&format!("unknown ring family `{other}`"))),
        };
        let mut eps = None;
        for opt in &parts[used..] {
            match *opt {
                "frob" | "inv=frob" => ring = ring.with_frobenius()?,
                "inv=id" => ring = ring.with_trivial_involution(),
                o if o.starts_with("eps=") => eps = Some(o[4..].to_string()),
                o => return Err(perr(&format!("unknown option `{o}`"))),
            }
        }
        if let Some(e) = eps {
            let el = ring.parse_el(&e).map_err(|m| perr(&m))?;
            ring = ring.with_eps(el)?;
        }
        ring.name = desc.to_string();
        Ok(ring)
    }

    pub fn zmod(n: u64) -> Result<Ring, RingError> {
        let (p, k) = prime_power(n)
            .ok_or_else(|| RingError::NotLocal(format!("Z/{n} is not a prime power quotient")))?;
        Ring::zmod_pk(p, k)
    }

    pub fn zmod_pk(p: u64, k: u32) -> Result<Ring, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let n = p.checked_pow(k).filter(|&n| n as usize <= SIZE_CAP);
        let n = n.ok_or(RingError::TooLarge(usize::MAX, SIZE_CAP))? as usize;
        Ring::finish(Kind::ZMod, n, format!("zmod:{}", n))
    }

    /// F_p[t]/(f(t)^m).
    pub fn gfpoly(p: u64, f: &[u64], m: usize) -> Result<Ring, RingError> {
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        if f.len() < 2 || *f.last().unwrap() != 1 {
            return Err(RingError::Parse(format!("{f:?}"), "f must be monic of degree >= 1".into()));
        }
        if m == 0 {
            return Err(RingError::Parse(format!("{f:?}"), "m must be at least 1".into()));
        }
        let mut modulus = vec![1u64];
        for _ in 0..m {
            modulus = poly_mul_raw(&modulus, f, p);
        }
        let deg = modulus.len() - 1;
        let n = (p as usize)
            .checked_pow(deg as u32)
            .filter(|&n| n <= SIZE_CAP)
            .ok_or(RingError::TooLarge(usize::MAX, SIZE_CAP))?;
        Ring::finish(Kind::Poly { p, modulus, deg }, n, format!("gfpoly:{p}:{f:?}:{m}"))
    }

    /// The field with q elements, using the least irreducible monic polynomial.
    pub fn gf(q: u64) -> Result<Ring, RingError> {
        let (p, d) = prime_power(q).ok_or_else(|| {
            RingError::Parse(format!("gf:{q}"), "order must be a prime power".into())
        })?;
        if d == 1 {
            let mut r = Ring::zmod_pk(p, 1)?;
            r.name = format!("gf:{q}");
            return Ok(r);
        }
        let d = d as usize;
        for idx in 0..(p as usize).pow(d as u32) {
            let mut f: Vec<u64> = decode(idx, p as usize, d).iter().map(|&c| c as u64).collect();
            f.push(1);
            if f[0] == 0 {
                continue;
            }
            if let Ok(r) = Ring::gfpoly(p, &f, 1) {
                if r.ideal.len() == 1 {
                    let mut r = r;
                    r.name = format!("gf:{q}");
                    return Ok(r);
                }
            }
        }
        unreachable!("every finite field order has an irreducible polynomial")
    }

    /// K[s]/(s^m) for a field K.
    pub fn truncated(base: Ring, m: usize) -> Result<Ring, RingError> {
        if base.ideal.len() != 1 {
            return Err(RingError::NotLocal("truncation base must be a field".into()));
        }
        if m == 0 {
            return Err(RingError::Parse("gft".into(), "m must be at least 1".into()));
        }
        let n = base
            .n
            .checked_pow(m as u32)
            .filter(|&n| n <= SIZE_CAP)
            .ok_or(RingError::TooLarge(usize::MAX, SIZE_CAP))?;
        let name = format!("{}[s]/(s^{m})", base.name);
        Ring::finish(Kind::Trunc { base: Box::new(base), m }, n, name)
    }

    /// A ring given by explicit addition and multiplication tables.
    /// Index 0 must be additive identity and index 1 the multiplicative one.
    pub fn from_tables(name: &str, add: Vec<u32>, mul: Vec<u32>) -> Result<Ring, RingError> {
        let n = (add.len() as f64).sqrt().round() as usize;
        if n * n != add.len() || mul.len() != add.len() || n < 2 {
            return Err(RingError::Parse(name.into(), "tables must be square".into()));
        }
        let mut r = Ring::blank(Kind::Table, n, name.into());
        r.add_t = Some(add);
        r.mul_t = Some(mul);
        r.fill_caches()?;
        Ok(r)
    }

    fn blank(kind: Kind, n: usize, name: String) -> Ring {
        Ring {
            kind,
            n,
            name,
            add_t: None,
            mul_t: None,
            neg_t: Vec::new(),
            inv_t: Vec::new(),
            ideal: Vec::new(),
            units: Vec::new(),
            star: None,
            eps: None,
            residue_of: Vec::new(),
            residue_n: 0,
        }
    }

    fn finish(kind: Kind, n: usize, name: String) -> Result<Ring, RingError> {
        let mut r = Ring::blank(kind, n, name);
        if n <= TABLE_LIMIT {
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = r.add_slow(a, b) as u32;
                    mul[a * n + b] = r.mul_slow(a, b) as u32;
                }
            }
            r.add_t = Some(add);
            r.mul_t = Some(mul);
        }
        r.fill_caches()?;
        Ok(r)
    }

    fn fill_caches(&mut self) -> Result<(), RingError> {
        let n = self.n;
        self.neg_t = (0..n)
            .map(|a| (0..n).find(|&b| self.add(a, b) == 0).expect("additive inverse") as u32)
            .collect();
        self.inv_t = vec![None; n];
        for a in 0..n {
            if self.inv_t[a].is_some() {
                continue;
            }
            if let Some(b) = (0..n).find(|&b| self.mul(a, b) == 1) {
                self.inv_t[a] = Some(b as u32);
                self.inv_t[b] = Some(a as u32);
            }
        }
        self.units = (0..n).filter(|&a| self.inv_t[a].is_some()).collect();
        self.ideal = (0..n).filter(|&a| self.inv_t[a].is_none()).collect();
        let mut in_ideal = vec![false; n];
        for &a in &self.ideal {
            in_ideal[a] = true;
        }
        if self.ideal.len() == n {
            return Err(RingError::NotLocal("the zero ring is not local".into()));
        }
        for &a in &self.ideal {
            for &b in &self.ideal {
                let s = self.add(a, b);
                if !in_ideal[s] {
                    return Err(RingError::NotLocal(format!(
                        "non-units {} and {} sum to the unit {}",
                        self.fmt_el(a),
                        self.fmt_el(b),
                        self.fmt_el(s)
                    )));
                }
            }
        }
        // residue classes, numbered by least representative
        let mut res = vec![u32::MAX; n];
        let mut count = 0u32;
        for a in 0..n {
            if res[a] != u32::MAX {
                continue;
            }
            for &m in &self.ideal {
                res[self.add(a, m)] = count;
            }
            count += 1;
        }
        self.residue_of = res;
        self.residue_n = count as usize;
        Ok(())
    }

    fn add_slow(&self, a: El, b: El) -> El {
        match &self.kind {
            Kind::ZMod => (a + b) % self.n,
            Kind::Poly { p, deg, .. } => {
                let p = *p as usize;
                let (x, y) = (decode(a, p, *deg), decode(b, p, *deg));
                let s: Vec<usize> = x.iter().zip(&y).map(|(u, v)| (u + v) % p).collect();
                encode(&s, p)
            }
            Kind::Trunc { base, m } => {
                let (x, y) = (decode(a, base.n, *m), decode(b, base.n, *m));
                let s: Vec<usize> = x.iter().zip(&y).map(|(&u, &v)| base.add(u, v)).collect();
                encode(&s, base.n)
            }
            Kind::Table => unreachable!(),
        }
    }

    fn mul_slow(&self, a: El, b: El) -> El {
        match &self.kind {
            Kind::ZMod => (a * b) % self.n,
            Kind::Poly { p, modulus, deg } => {
                let pu = *p as usize;
                let x: Vec<u64> = decode(a, pu, *deg).iter().map(|&c| c as u64).collect();
                let y: Vec<u64> = decode(b, pu, *deg).iter().map(|&c| c as u64).collect();
                let prod = poly_reduce(poly_mul_raw(&x, &y, *p), modulus, *deg, *p);
                let v: Vec<usize> = prod.iter().map(|&c| c as usize).collect();
                encode(&v, pu)
            }
            Kind::Trunc { base, m } => {
                let (x, y) = (decode(a, base.n, *m), decode(b, base.n, *m));
                let mut out = vec![0usize; *m];
                for i in 0..*m {
                    for j in 0..(*m - i) {
                        out[i + j] = base.add(out[i + j], base.mul(x[i], y[j]));
                    }
                }
                encode(&out, base.n)
            }
            Kind::Table => unreachable!(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<El> {
        0..self.n
    }

    pub fn zero(&self) -> El {
        0
    }

    pub fn one(&self) -> El {
        1
    }

    pub fn add(&self, a: El, b: El) -> El {
        match &self.add_t {
            Some(t) => t[a * self.n + b] as El,
            None => self.add_slow(a, b),
        }
    }

    pub fn mul(&self, a: El, b: El) -> El {
        match &self.mul_t {
            Some(t) => t[a * self.n + b] as El,
            None => self.mul_slow(a, b),
        }
    }

    pub fn neg(&self, a: El) -> El {
        self.neg_t[a] as El
    }

    pub fn sub(&self, a: El, b: El) -> El {
        self.add(a, self.neg(b))
    }

    pub fn is_unit(&self, a: El) -> bool {
        self.inv_t[a].is_some()
    }

    pub fn inv(&self, a: El) -> Result<El, RingError> {
        self.inv_t[a]
            .map(|b| b as El)
            .ok_or_else(|| RingError::NotUnit(self.fmt_el(a)))
    }

    /// Inverse of an element known to be a unit.
    pub fn unit_inv(&self, a: El) -> El {
        self.inv_t[a].expect("unit_inv on a non-unit") as El
    }

    pub fn units(&self) -> &[El] {
        &self.units
    }

    /// The maximal ideal, in index order.
    pub fn ideal(&self) -> &[El] {
        &self.ideal
    }

    pub fn in_ideal(&self, a: El) -> bool {
        !self.is_unit(a)
    }

    pub fn is_field(&self) -> bool {
        self.ideal.len() == 1
    }

    /// Residue class of `a` in R/m, numbered by least representative.
    pub fn residue(&self, a: El) -> usize {
        self.residue_of[a] as usize
    }

    pub fn residue_size(&self) -> usize {
        self.residue_n
    }

    /// The residue field R/m as a table ring.
    pub fn residue_field(&self) -> Ring {
        let k = self.residue_n;
        let mut rep = vec![usize::MAX; k];
        for a in 0..self.n {
            let c = self.residue(a);
            if rep[c] == usize::MAX {
                rep[c] = a;
            }
        }
        let mut add = vec![0u32; k * k];
        let mut mul = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                add[i * k + j] = self.residue(self.add(rep[i], rep[j])) as u32;
                mul[i * k + j] = self.residue(self.mul(rep[i], rep[j])) as u32;
            }
        }
        Ring::from_tables(&format!("{}/m", self.name), add, mul).expect("residue field")
    }

    pub fn from_int(&self, k: i64) -> El {
        let mut acc = 0;
        let step = if k >= 0 { 1 } else { self.neg(1) };
        for _ in 0..k.unsigned_abs() {
            acc = self.add(acc, step);
        }
        acc
    }

    /// Additive order of an element.
    pub fn additive_order(&self, a: El) -> usize {
        let (mut x, mut k) = (a, 1);
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    pub fn pow(&self, a: El, mut e: u64) -> El {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn characteristic(&self) -> usize {
        self.additive_order(1)
    }

    pub fn star(&self, a: El) -> El {
        match &self.star {
            Some(t) => t[a] as El,
            None => a,
        }
    }

    pub fn has_involution(&self) -> bool {
        self.star.is_some()
    }

    pub fn eps(&self) -> El {
        self.eps.unwrap_or(1)
    }

    pub fn with_trivial_involution(mut self) -> Ring {
        self.star = Some((0..self.n as u32).collect());
        self
    }

    /// Coefficient-wise Frobenius a ↦ a^r where r^2 is the order of the
    /// coefficient field; a variable of a truncated ring is fixed.
    pub fn with_frobenius(self) -> Result<Ring, RingError> {
        let (field_n, m) = match &self.kind {
            Kind::Trunc { base, m } => (base.n, *m),
            _ if self.is_field() => (self.n, 1),
            _ => {
                return Err(RingError::BadInvolution(
                    "frobenius needs a field or a truncated polynomial ring".into(),
                ))
            }
        };
        let r = (field_n as f64).sqrt().round() as u64;
        if (r * r) as usize != field_n {
            return Err(RingError::BadInvolution(format!(
                "field of order {field_n} has no involutive frobenius"
            )));
        }
        let table: Vec<u32> = match &self.kind {
            Kind::Trunc { base, .. } => (0..self.n)
                .map(|a| {
                    let c: Vec<usize> = decode(a, base.n, m).iter().map(|&x| base.pow(x, r)).collect();
                    encode(&c, base.n) as u32
                })
                .collect(),
            _ => (0..self.n).map(|a| self.pow(a, r) as u32).collect(),
        };
        self.with_involution_table(table)
    }

    /// Installs an involution given as an image table, after checking it.
    pub fn with_involution_table(mut self, table: Vec<u32>) -> Result<Ring, RingError> {
        if table.len() != self.n {
            return Err(RingError::BadInvolution("table has wrong length".into()));
        }
        let s = |a: usize| table[a] as usize;
        if s(1) != 1 {
            return Err(RingError::BadInvolution("1* != 1".into()));
        }
        for a in 0..self.n {
            if s(s(a)) != a {
                return Err(RingError::BadInvolution(format!("({})** != itself", self.fmt_el(a))));
            }
            if self.in_ideal(a) != self.in_ideal(s(a)) {
                return Err(RingError::BadInvolution("m is not preserved".into()));
            }
            for b in 0..self.n {
                if s(self.add(a, b)) != self.add(s(a), s(b)) {
                    return Err(RingError::BadInvolution("not additive".into()));
                }
                if s(self.mul(a, b)) != self.mul(s(b), s(a)) {
                    return Err(RingError::BadInvolution("not anti-multiplicative".into()));
                }
            }
        }
        self.star = Some(table);
        Ok(self)
    }

    /// Sets the central element ε, which must satisfy ε ε* = 1.
    pub fn with_eps(mut self, e: El) -> Result<Ring, RingError> {
        if e >= self.n || self.mul(e, self.star(e)) != 1 {
            return Err(RingError::BadEps(format!("{} * {}* != 1", self.fmt_el(e), self.fmt_el(e))));
        }
        self.eps = Some(e);
        Ok(self)
    }

    /// Parses an element: an integer, `#<index>`, or a polynomial in `t` for
    /// polynomial quotients.
    pub fn parse_el(&self, s: &str) -> Result<El, String> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('#') {
            let i: usize = idx.parse().map_err(|_| format!("bad index `{s}`"))?;
            return (i < self.n).then_some(i).ok_or_else(|| format!("index {i} out of range"));
        }
        if let Ok(k) = s.parse::<i64>() {
            return Ok(self.from_int(k));
        }
        if let Kind::Poly { p, modulus, deg } = &self.kind {
            let f = parse_poly(s, *p, s).map_err(|e| e.to_string())?;
            let r = poly_reduce(f, modulus, *deg, *p);
            let v: Vec<usize> = r.iter().map(|&c| c as usize).collect();
            return Ok(encode(&v, *p as usize));
        }
        Err(format!("cannot parse element `{s}`"))
    }

    pub fn fmt_el(&self, a: El) -> String {
        match &self.kind {
            Kind::ZMod | Kind::Table => a.to_string(),
            Kind::Poly { p, deg, .. } => fmt_poly(&decode(a, *p as usize, *deg), "t"),
            Kind::Trunc { base, m } => {
                let c = decode(a, base.n, *m);
                let parts: Vec<String> = c.iter().map(|&x| base.fmt_el(x)).collect();
                format!("({})", parts.join("|"))
            }
        }
    }

    /// Ring isomorphism check used by tests: is `f` a unital ring map onto `other`?
    pub fn is_isomorphism(&self, other: &Ring, f: &[El]) -> bool {
        if f.len() != self.n || other.n != self.n || f[1] != 1 {
            return false;
        }
        let mut seen = vec![false; other.n];
        for &y in f {
            if seen[y] {
                return false;
            }
            seen[y] = true;
        }
        for a in 0..self.n {
            for b in 0..self.n {
                if f[self.add(a, b)] != other.add(f[a], f[b]) || f[self.mul(a, b)] != other.mul(f[a], f[b]) {
                    return false;
                }
            }
        }
        true
    }
}

fn fmt_poly(c: &[usize], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, &x) in c.iter().enumerate().rev() {
        if x == 0 {
            continue;
        }
        let t = match (i, x) {
            (0, _) => x.to_string(),
            (1, 1) => var.to_string(),
            (1, _) => format!("{x}{var}"),
            (_, 1) => format!("{var}^{i}"),
            _ => format!("{x}{var}^{i}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Searches for a ring isomorphism `a -> b`. Returns `Err` with a reason when
/// none exists.
pub fn find_isomorphism(a: &Ring, b: &Ring) -> Result<Vec<El>, String> {
    if a.size() != b.size() {
        return Err(format!("orders differ: {} vs {}", a.size(), b.size()));
    }
    let orders = |r: &Ring| {
        let mut v: Vec<usize> = r.elements().map(|x| r.additive_order(x)).collect();
        v.sort_unstable();
        v
    };
    if orders(a) != orders(b) {
        return Err("additive groups are not isomorphic (different element orders)".into());
    }
    // ring generators of a, greedily
    let mut gens: Vec<El> = Vec::new();
    let mut span = subring(a, &gens);
    for x in a.elements() {
        if !span[x] {
            gens.push(x);
            span = subring(a, &gens);
        }
    }
    let mut assign = Vec::new();
    search_iso(a, b, &gens, &mut assign).ok_or_else(|| "no isomorphism exists (exhaustive search)".into())
}

fn subring(r: &Ring, gens: &[El]) -> Vec<bool> {
    let mut inside = vec![false; r.size()];
    let mut list = vec![0, 1];
    inside[0] = true;
    inside[1] = true;
    for &g in gens {
        if !inside[g] {
            inside[g] = true;
            list.push(g);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            for z in [r.add(x, y), r.mul(x, y)] {
                if !inside[z] {
                    inside[z] = true;
                    list.push(z);
                }
            }
        }
        i += 1;
    }
    inside
}

fn search_iso(a: &Ring, b: &Ring, gens: &[El], assign: &mut Vec<El>) -> Option<Vec<El>> {
    if assign.len() == gens.len() {
        return extend_map(a, b, gens, assign);
    }
    for y in b.elements() {
        if a.additive_order(gens[assign.len()]) != b.additive_order(y) {
            continue;
        }
        assign.push(y);
        if let Some(f) = search_iso(a, b, gens, assign) {
            return Some(f);
        }
        assign.pop();
    }
    None
}

fn extend_map(a: &Ring, b: &Ring, gens: &[El], imgs: &[El]) -> Option<Vec<El>> {
    let n = a.size();
    let mut f = vec![usize::MAX; n];
    f[0] = 0;
    f[1] = 1;
    let mut list = vec![0, 1];
    for (&g, &y) in gens.iter().zip(imgs) {
        if f[g] != usize::MAX && f[g] != y {
            return None;
        }
        if f[g] == usize::MAX {
            f[g] = y;
            list.push(g);
        }
    }
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for j in 0..=i {
            let y = list[j];
            for (z, w) in [(a.add(x, y), b.add(f[x], f[y])), (a.mul(x, y), b.mul(f[x], f[y]))] {
                if f[z] == usize::MAX {
                    f[z] = w;
                    list.push(z);
                } else if f[z] != w {
                    return None;
                }
            }
        }
        i += 1;
    }
    a.is_isomorphism(b, &f).then_some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod9_units_and_ideal() {
        let r = Ring::parse("zmod:9").unwrap();
        assert_eq!(r.units(), &[1, 2, 4, 5, 7, 8]);
        assert_eq!(r.ideal(), &[0, 3, 6]);
        assert_eq!(r.inv(2).unwrap(), 5);
        assert!(!r.is_unit(3));
    }

    #[test]
    fn zmod25_residue() {
        let r = Ring::parse("zmod:5^2").unwrap();
        assert_eq!(r.residue(7), 2);
        assert_eq!(r.residue_size(), 5);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Ring::parse("zmod:6^1").unwrap_err(), RingError::NotPrime(6));
        assert!(matches!(Ring::parse("zmod:6"), Err(RingError::NotLocal(_))));
        assert!(matches!(Ring::parse("gfpoly:3:t^2-1:1"), Err(RingError::NotLocal(_))));
        assert!(matches!(Ring::parse("gf:27:frob"), Err(RingError::BadInvolution(_))));
        assert!(matches!(Ring::parse("zmod:9:eps=3"), Err(RingError::BadEps(_))));
        assert!(matches!(Ring::parse("bogus:1"), Err(RingError::Parse(..))));
    }

    #[test]
    fn gf9_frobenius_conjugates() {
        let r = Ring::parse("gf:9:frob").unwrap();
        assert!(r.is_field());
        let i = r.parse_el("t").unwrap();
        assert_eq!(r.mul(i, i), r.from_int(-1));
        assert_eq!(r.star(i), r.neg(i));
        assert_eq!(r.star(r.from_int(2)), r.from_int(2));
    }

    #[test]
    fn truncated_ring_shape() {
        let r = Ring::parse("gft:9:2:frob").unwrap();
        assert_eq!(r.size(), 81);
        assert_eq!(r.ideal().len(), 9);
        assert_eq!(r.residue_size(), 9);
    }

    #[test]
    fn iso_search() {
        let a = Ring::parse("zmod:9").unwrap();
        let b = Ring::parse("gfpoly:3:t:2").unwrap();
        assert!(find_isomorphism(&a, &b).is_err());
        let f = find_isomorphism(&a, &a).unwrap();
        assert_eq!(f, (0..9).collect::<Vec<_>>());
    }
}
