#![allow(dead_code)]

use minsynth::formula::{Dialect, Expr, Formula, PropSet, Trace};
use proptest::prelude::*;

pub const PROPS: [&str; 3] = ["a", "b", "c"];

pub fn props(n: usize) -> PropSet {
    PropSet::new(PROPS[..n].iter().copied()).unwrap()
}

fn leaf(nprops: usize) -> impl Strategy<Value = Expr> {
    prop_oneof![
        6 => (0..nprops).prop_map(|i| Expr::atom(PROPS[i])),
        1 => Just(Expr::True),
        1 => Just(Expr::False),
    ]
}

/// Future formulas over the first `nprops` of `a, b, c`.
pub fn future_expr(nprops: usize, depth: u32) -> impl Strategy<Value = Expr> {
    leaf(nprops).prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::iff(a, b)),
            inner.clone().prop_map(Expr::next),
            inner.clone().prop_map(Expr::weak_next),
            inner.clone().prop_map(Expr::eventually),
            inner.clone().prop_map(Expr::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::until(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::release(a, b)),
        ]
    })
}

pub fn future_formula(nprops: usize, depth: u32) -> impl Strategy<Value = Formula> {
    future_expr(nprops, depth).prop_map(|e| Formula::new(e, Dialect::Future).unwrap())
}

pub fn trace(nprops: usize, maxlen: usize) -> impl Strategy<Value = Trace> {
    let p = props(nprops);
    prop::collection::vec(0..p.assignment_count(), 1..=maxlen).prop_map(move |steps| Trace::new(p.clone(), steps))
}

/// Every word of length `1..=maxlen` over `letters` letters.
pub fn words(letters: u64, maxlen: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..maxlen {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
