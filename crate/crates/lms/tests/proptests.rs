use lms::action::Perm;
use lms::jordan::JordanPair;
use lms::localring::Ring;
use lms::projective::build_mr;
use lms::report::{Check, Report};
use proptest::prelude::*;
use std::sync::OnceLock;

const DESCS: [&str; 6] = ["zmod:9", "zmod:27", "zmod:2^3", "gfpoly:5:t:2", "gf:9", "gfpoly:2:t^2+t+1:2"];

fn rings() -> &'static Vec<Ring> {
    static R: OnceLock<Vec<Ring>> = OnceLock::new();
    R.get_or_init(|| DESCS.iter().map(|d| Ring::parse(d).unwrap()).collect())
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

proptest! {
    #[test]
    fn zmod_matches_integers(k in 1u32..5, a in 0u64..1000, b in 0u64..1000) {
        let n = 3u64.pow(k);
        let r = Ring::zmod(n).unwrap();
        let (x, y) = (r.from_int(a as i64), r.from_int(b as i64));
        prop_assert_eq!(r.add(x, y), r.from_int(((a + b) % n) as i64));
        prop_assert_eq!(r.mul(x, y), r.from_int((a * b % n) as i64));
        prop_assert_eq!(r.is_unit(x), a % 3 != 0);
    }

    #[test]
    fn ring_laws(i in 0..DESCS.len(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let r = &rings()[i];
        let n = r.size();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
        prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
        prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
        prop_assert_eq!(r.mul(a, b), r.mul(b, a));
        prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
        prop_assert_eq!(r.mul(a, r.one()), a);
        if r.is_unit(a) {
            prop_assert_eq!(r.mul(a, r.unit_inv(a)), r.one());
        } else {
            // non-units form an ideal
            prop_assert!(r.in_ideal(r.mul(a, b)));
            prop_assert!(r.is_unit(b) || r.in_ideal(r.add(a, b)));
        }
    }

    #[test]
    fn perm_group_laws(p in perm(12), q in perm(12), s in perm(12), x in 0usize..12) {
        prop_assert_eq!(p.then(&q).then(&s), p.then(&q.then(&s)));
        prop_assert_eq!(p.then(&q).on(x), q.on(p.on(x)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.conj(&q), q.inverse().then(&p).then(&q));
    }

    #[test]
    fn report_json_roundtrip(names in proptest::collection::vec("[a-z_]{1,8}", 0..6), fail in any::<bool>(), k in any::<usize>()) {
        let mut r = Report::new("test structure", 7);
        for (i, n) in names.iter().enumerate() {
            let res = if fail && i == 0 { Err(format!("w{i}")) } else { Ok(()) };
            r.push(Check::new(n, "statement", res));
        }
        r.order("k", k);
        let back = Report::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), r.to_json());
        prop_assert_eq!(back.all_passed(), r.all_passed());
    }

    #[test]
    fn projective_z25_formulas(a in 0usize..25, b in 0usize..25) {
        let (pl, m) = build_mr(Ring::zmod(25).unwrap()).unwrap();
        let r = &pl.ring;
        let (x, y) = (pl.first(a), pl.first(b));
        prop_assert_eq!(m.add(x, y), pl.first(r.add(a, b)));
        prop_assert_eq!(m.alpha(x).then(m.alpha(y)), m.alpha(m.add(x, y)).clone());
        prop_assert_eq!(m.neg(x), pl.first(r.neg(a)));
        if r.is_unit(a) && r.is_unit(b) {
            // [1,y] mu_[1,a] = [1, -a^2 / y]
            let img = pl.first(r.neg(r.mul(r.mul(a, a), r.unit_inv(b))));
            prop_assert_eq!(m.mu(x).on(y), img);
            prop_assert!(m.mu(x).then(m.mu(m.neg(x))).is_identity());
        }
    }

    #[test]
    fn ring_pair_q_operator(a in 0usize..25, b in 0usize..25, c in 0usize..25) {
        // yQ_x = xyx in (R, R), and z Q_{yQ_x} = z Q_x Q_y Q_x
        let p = JordanPair::from_spec("ring:zmod:25").unwrap();
        let r = Ring::zmod(25).unwrap();
        prop_assert_eq!(p.q(0, a, b), r.mul(r.mul(a, b), a));
        let yqx = p.q(0, a, b);
        prop_assert_eq!(p.q(0, yqx, c), p.q(0, a, p.q(1, b, p.q(0, a, c))));
    }
}
