#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use graphwh::fixtures;
use graphwh::word::{GraphProductContext, Letter, ReducedWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every fixture graph paired with every fixture datum.
pub fn contexts() -> Vec<(&'static str, GraphProductContext)> {
    let mut out = Vec::new();
    for (dn, d) in [("D0", fixtures::d0()), ("D1", fixtures::d1()), ("D2", fixtures::d2())] {
        out.push((leak(format!("F1/{dn}")), fixtures::f1(d.clone())));
        out.push((leak(format!("F2/{dn}")), fixtures::f2(d.clone())));
        out.push((leak(format!("F3/{dn}")), fixtures::f3(d)));
    }
    out
}

fn leak(s: String) -> &'static str {
    Box::leak(s.into_boxed_str())
}

/// Exhaustive rewriting: explore every sequence reachable by deleting
/// identity letters, swapping adjacent commuting letters and multiplying
/// adjacent same-vertex letters; return the lexicographically least among
/// the shortest.
pub fn rewrite_oracle(ctx: &GraphProductContext, word: &[Letter]) -> Vec<Letter> {
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(word.to_vec());
    queue.push_back(word.to_vec());
    while let Some(w) = queue.pop_front() {
        let mut next = Vec::new();
        for k in 0..w.len() {
            if w[k].element == 0 {
                let mut x = w.clone();
                x.remove(k);
                next.push(x);
            }
        }
        for k in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[k], w[k + 1]);
            if a.vertex != b.vertex && ctx.graph().adjacent(a.vertex, b.vertex) {
                let mut x = w.clone();
                x.swap(k, k + 1);
                next.push(x);
            }
            if a.vertex == b.vertex {
                let g = ctx.vertex_data(a.vertex).group();
                let mut x = w.clone();
                x[k] = Letter::new(a.vertex, g.mul(a.element, b.element));
                x.remove(k + 1);
                next.push(x);
            }
        }
        for x in next {
            if seen.insert(x.clone()) {
                queue.push_back(x);
            }
        }
    }
    let min = seen.iter().map(|w| w.len()).min().unwrap();
    seen.into_iter().find(|w| w.len() == min).unwrap()
}

/// All letter sequences of length `len` over `alphabet`.
pub fn all_words(alphabet: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| alphabet.iter().map(move |&l| {
                let mut x = w.clone();
                x.push(l);
                x
            }))
            .collect();
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random element obtained by reducing a random letter sequence of
/// length at most `max_len`.
pub fn random_word(ctx: &GraphProductContext, rng: &mut ChaCha8Rng, max_len: usize) -> ReducedWord {
    let gens = ctx.generators();
    let len = rng.random_range(0..=max_len);
    let letters: Vec<Letter> = (0..len).map(|_| gens[rng.random_range(0..gens.len())]).collect();
    ctx.reduce(&letters).unwrap()
}
