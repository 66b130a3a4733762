//! Brute-force normal forms used to cross-check the word engine.

use std::collections::{BTreeSet, VecDeque};

use graphwh::word::{GraphProductContext, Letter};

/// Explores every sequence reachable by deleting identity letters, swapping
/// adjacent commuting letters and multiplying adjacent same-vertex letters,
/// and returns the lexicographically least among the shortest.
pub fn rewrite_normal_form(ctx: &GraphProductContext, word: &[Letter]) -> Vec<Letter> {
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
    let min = seen.iter().map(Vec::len).min().unwrap_or(0);
    seen.into_iter().find(|w| w.len() == min).unwrap_or_default()
}

/// Every letter sequence of length exactly `len` over `alphabet`.
pub fn all_sequences(alphabet: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&l| {
                    let mut x = w.clone();
                    x.push(l);
                    x
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphwh::fixtures::{self, S_U, T_V};

    #[test]
    fn commuting_pair_sorts() {
        let f1 = fixtures::f1(fixtures::d0());
        assert_eq!(rewrite_normal_form(&f1, &[T_V, S_U]), vec![S_U, T_V]);
        assert_eq!(rewrite_normal_form(&f1, &[T_V, S_U, T_V]), vec![S_U]);
        let f2 = fixtures::f2(fixtures::d0());
        assert_eq!(rewrite_normal_form(&f2, &[T_V, S_U]), vec![T_V, S_U]);
        assert_eq!(all_sequences(&[S_U, T_V], 3).len(), 8);
    }
}
