use minsynth::bdd::{Bdd, BddManager, Var};
use proptest::prelude::*;

/// Boolean expressions over variables `0..n`, evaluated directly as the
/// reference semantics.
#[derive(Debug, Clone)]
enum B {
    Const(bool),
    Var(u32),
    Not(Box<B>),
    And(Box<B>, Box<B>),
    Or(Box<B>, Box<B>),
    Xor(Box<B>, Box<B>),
}

impl B {
    fn eval(&self, bits: u64) -> bool {
        match self {
            B::Const(c) => *c,
            B::Var(v) => bits >> v & 1 == 1,
            B::Not(a) => !a.eval(bits),
            B::And(a, b) => a.eval(bits) && b.eval(bits),
            B::Or(a, b) => a.eval(bits) || b.eval(bits),
            B::Xor(a, b) => a.eval(bits) != b.eval(bits),
        }
    }

    fn build(&self, m: &mut BddManager) -> Bdd {
        match self {
            B::Const(c) => m.constant(*c),
            B::Var(v) => m.var(Var(*v)).unwrap(),
            B::Not(a) => {
                let x = a.build(m);
                m.not(x).unwrap()
            }
            B::And(a, b) | B::Or(a, b) | B::Xor(a, b) => {
                let (x, y) = (a.build(m), b.build(m));
                match self {
                    B::And(..) => m.and(x, y).unwrap(),
                    B::Or(..) => m.or(x, y).unwrap(),
                    _ => m.xor(x, y).unwrap(),
                }
            }
        }
    }
}

fn bexpr(n: u32) -> impl Strategy<Value = B> {
    let leaf = prop_oneof![5 => (0..n).prop_map(B::Var), 1 => any::<bool>().prop_map(B::Const)];
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| B::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| B::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| B::Xor(Box::new(a), Box::new(b))),
        ]
    })
}

fn manager(n: u32) -> BddManager {
    BddManager::with_vars((0..n).map(|i| format!("v{i}"))).unwrap()
}

fn table(n: u32, f: impl Fn(u64) -> bool) -> Vec<bool> {
    (0..1u64 << n).map(f).collect()
}

fn bdd_table(m: &BddManager, n: u32, f: Bdd) -> Vec<bool> {
    table(n, |x| m.eval_bits(f, x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn canonical_nodes(a in bexpr(6), b in bexpr(6)) {
        let mut m = manager(6);
        let (fa, fb) = (a.build(&mut m), b.build(&mut m));
        prop_assert_eq!(bdd_table(&m, 6, fa), table(6, |x| a.eval(x)));
        let same = table(6, |x| a.eval(x)) == table(6, |x| b.eval(x));
        prop_assert_eq!(same, fa == fb);
    }

    #[test]
    fn quantifiers_match_tables(a in bexpr(4), v in 0u32..4, w in 0u32..4) {
        let mut m = manager(4);
        let f = a.build(&mut m);
        let vars = [Var(v), Var(w)];
        let ex = m.exists(f, &vars).unwrap();
        let fa = m.forall(f, &vars).unwrap();
        let mask = 1u64 << v | 1u64 << w;
        let variants = |x: u64| (0..16u64).filter(move |y| y & !mask == 0).map(move |y| (x & !mask) | y);
        prop_assert_eq!(bdd_table(&m, 4, ex), table(4, |x| variants(x).any(|z| a.eval(z))));
        prop_assert_eq!(bdd_table(&m, 4, fa), table(4, |x| variants(x).all(|z| a.eval(z))));
    }

    #[test]
    fn compose_matches_tables(a in bexpr(4), g in bexpr(4), h in bexpr(4), v in 0u32..4, w in 0u32..4) {
        prop_assume!(v != w);
        let mut m = manager(4);
        let (f, fg, fh) = (a.build(&mut m), g.build(&mut m), h.build(&mut m));
        let c = m.compose(f, &[(Var(v), fg), (Var(w), fh)]).unwrap();
        let want = table(4, |x| {
            let mut y = x & !(1 << v) & !(1 << w);
            if g.eval(x) { y |= 1 << v }
            if h.eval(x) { y |= 1 << w }
            a.eval(y)
        });
        prop_assert_eq!(bdd_table(&m, 4, c), want);
    }

    #[test]
    fn cofactor_matches_tables(a in bexpr(4), v in 0u32..4, value: bool) {
        let mut m = manager(4);
        let f = a.build(&mut m);
        let c = m.cofactor(f, Var(v), value).unwrap();
        let want = table(4, |x| a.eval(if value { x | 1 << v } else { x & !(1 << v) }));
        prop_assert_eq!(bdd_table(&m, 4, c), want);
    }

    #[test]
    fn restrict_agrees_on_care_set(a in bexpr(6), c in bexpr(6)) {
        let mut m = manager(6);
        let (f, care) = (a.build(&mut m), c.build(&mut m));
        prop_assume!(!care.is_zero());
        let r = m.restrict(f, care).unwrap();
        let lhs = m.and(r, care).unwrap();
        let rhs = m.and(f, care).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn and_exists_is_and_then_exists(a in bexpr(5), b in bexpr(5), v in 0u32..5) {
        let mut m = manager(5);
        let (f, g) = (a.build(&mut m), b.build(&mut m));
        let fused = m.and_exists(f, g, &[Var(v)]).unwrap();
        let conj = m.and(f, g).unwrap();
        prop_assert_eq!(fused, m.exists(conj, &[Var(v)]).unwrap());
    }

    #[test]
    fn ite_text_round_trip(a in bexpr(4)) {
        let mut m = manager(4);
        let f = a.build(&mut m);
        let text = m.to_ite_string(f).unwrap();
        prop_assert_eq!(minsynth::bdd::parse_ite(&mut m, &text).unwrap(), f);
    }
}
