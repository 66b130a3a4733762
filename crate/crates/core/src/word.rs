//! Word calculus in the graph product `G(Γ)`.
//!
//! Words are sequences of [`Letter`]s. Two letters commute when their vertices
//! are joined by an edge. A [`ReducedWord`] is always stored in canonical form,
//! the lexicographically least member of its shuffle class, so equality of
//! group elements is equality of values.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, StructuralError};
use crate::group::{Element, WeakHaagerupVertexData};

/// Default cap on shuffle-class enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

pub type Vertex = usize;

/// A finite simplicial graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    vertex_count: usize,
    adjacency: Vec<bool>,
    edges: Vec<(Vertex, Vertex)>,
}

impl SimpleGraph {
    pub fn new(vertex_count: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, Error> {
        let mut adjacency = vec![false; vertex_count * vertex_count];
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for x in [a, b] {
                if x >= vertex_count {
                    return Err(Error::InvalidVertex { vertex: x, count: vertex_count });
                }
            }
            if a == b {
                return Err(StructuralError::Loop { vertex: a }.into());
            }
            if adjacency[a * vertex_count + b] {
                return Err(StructuralError::MultipleEdge { a, b }.into());
            }
            adjacency[a * vertex_count + b] = true;
            adjacency[b * vertex_count + a] = true;
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(SimpleGraph { vertex_count, adjacency, edges: list })
    }

    /// The edgeless graph, whose graph product is the free product.
    pub fn edgeless(vertex_count: usize) -> Self {
        SimpleGraph::new(vertex_count, &[]).expect("edgeless graph is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    #[inline]
    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.adjacency[a * self.vertex_count + b]
    }

    /// `v` together with its neighbours, ascending.
    pub fn star(&self, v: Vertex) -> Result<Vec<Vertex>, Error> {
        self.check_vertex(v)?;
        Ok((0..self.vertex_count).filter(|&w| w == v || self.adjacent(v, w)).collect())
    }

    #[inline]
    pub fn in_star(&self, v: Vertex, w: Vertex) -> bool {
        v == w || self.adjacent(v, w)
    }

    /// Size of the largest complete subgraph, by exhaustive search.
    pub fn max_clique_size(&self) -> usize {
        fn extend(g: &SimpleGraph, clique: &mut Vec<Vertex>, next: Vertex, best: &mut usize) {
            *best = (*best).max(clique.len());
            for v in next..g.vertex_count {
                if clique.iter().all(|&c| g.adjacent(c, v)) {
                    clique.push(v);
                    extend(g, clique, v + 1, best);
                    clique.pop();
                }
            }
        }
        let mut best = 0;
        extend(self, &mut Vec::new(), 0, &mut best);
        best
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), Error> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, count: self.vertex_count })
        }
    }
}

/// A syllable `g ∈ G_v`. Ordered by vertex, then element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub vertex: Vertex,
    pub element: Element,
}

impl Letter {
    pub const fn new(vertex: Vertex, element: Element) -> Self {
        Letter { vertex, element }
    }
}

/// A group element of `G(Γ)` in canonical reduced form.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The reduced length `|·|_r`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", l.vertex, l.element)?;
        }
        f.write_str("]")
    }
}

/// A graph together with one weak-Haagerup vertex datum per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphProductContext {
    graph: SimpleGraph,
    data: Vec<WeakHaagerupVertexData>,
}

impl GraphProductContext {
    pub fn new(graph: SimpleGraph, data: Vec<WeakHaagerupVertexData>) -> Result<Self, Error> {
        if graph.vertex_count() != data.len() {
            return Err(StructuralError::VertexCount { graph: graph.vertex_count(), data: data.len() }.into());
        }
        Ok(GraphProductContext { graph, data })
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn vertex_data(&self, v: Vertex) -> &WeakHaagerupVertexData {
        &self.data[v]
    }

    pub fn all_vertex_data(&self) -> &[WeakHaagerupVertexData] {
        &self.data
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Whether two letters at these vertices may be swapped.
    #[inline]
    pub fn commute(&self, a: Vertex, b: Vertex) -> bool {
        a != b && self.graph.adjacent(a, b)
    }

    fn check_letter(&self, l: Letter) -> Result<(), Error> {
        self.graph.check_vertex(l.vertex)?;
        let order = self.data[l.vertex].order();
        if l.element >= order {
            return Err(Error::InvalidElement { vertex: l.vertex, element: l.element, order });
        }
        Ok(())
    }

    /// Checks that `w` is a canonical reduced word of this context.
    pub fn check_word(&self, w: &ReducedWord) -> Result<(), Error> {
        for &l in w.letters() {
            self.check_letter(l)?;
            if l.element == 0 {
                return Err(Error::IdentityLetter { vertex: l.vertex });
            }
        }
        Ok(())
    }

    /// Normal form of an arbitrary letter sequence.
    ///
    /// Identity letters are dropped and any two same-vertex letters separated
    /// only by letters commuting with them are merged, until neither applies.
    pub fn reduce(&self, word: &[Letter]) -> Result<ReducedWord, Error> {
        for &l in word {
            self.check_letter(l)?;
        }
        let mut letters: Vec<Letter> = word.iter().copied().filter(|l| l.element != 0).collect();
        'outer: loop {
            for i in 0..letters.len() {
                let v = letters[i].vertex;
                for j in i + 1..letters.len() {
                    let w = letters[j].vertex;
                    if w == v {
                        let group = self.data[v].group();
                        let merged = group.mul(letters[i].element, letters[j].element);
                        letters.remove(j);
                        if merged == 0 {
                            letters.remove(i);
                        } else {
                            letters[i].element = merged;
                        }
                        continue 'outer;
                    }
                    if !self.commute(v, w) {
                        break;
                    }
                }
            }
            break;
        }
        Ok(ReducedWord { letters: self.canonical_order(&letters) })
    }

    /// Lexicographically least shuffle of an already reduced sequence.
    fn canonical_order(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut remaining: Vec<Letter> = letters.to_vec();
        let mut out = Vec::with_capacity(letters.len());
        while !remaining.is_empty() {
            let mut best: Option<usize> = None;
            for k in 0..remaining.len() {
                let l = remaining[k];
                let free = remaining[..k].iter().all(|e| self.commute(e.vertex, l.vertex));
                if free && best.is_none_or(|b| l < remaining[b]) {
                    best = Some(k);
                }
            }
            out.push(remaining.remove(best.expect("a trace always has a minimal letter")));
        }
        out
    }

    pub fn multiply(&self, a: &ReducedWord, b: &ReducedWord) -> Result<ReducedWord, Error> {
        let mut cat = a.letters.clone();
        cat.extend_from_slice(&b.letters);
        self.reduce(&cat)
    }

    pub fn inverse(&self, a: &ReducedWord) -> Result<ReducedWord, Error> {
        let rev: Vec<Letter> = a
            .letters
            .iter()
            .rev()
            .map(|l| Letter::new(l.vertex, self.data[l.vertex].group().inv(l.element)))
            .collect();
        self.reduce(&rev)
    }

    /// `|b⁻¹a|_r`, the reduced-length distance between two elements.
    pub fn distance(&self, a: &ReducedWord, b: &ReducedWord) -> Result<usize, Error> {
        Ok(self.multiply(&self.inverse(b)?, a)?.len())
    }

    /// Every ordering of the positions of `w` reachable by swapping adjacent
    /// commuting letters, starting from the canonical order.
    pub fn representative_orders(&self, w: &ReducedWord, cap: usize) -> Result<Vec<Vec<usize>>, Error> {
        let start: Vec<usize> = (0..w.len()).collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(order) = queue.pop_front() {
            for k in 0..order.len().saturating_sub(1) {
                let (a, b) = (w.letters[order[k]].vertex, w.letters[order[k + 1]].vertex);
                if self.commute(a, b) {
                    let mut next = order.clone();
                    next.swap(k, k + 1);
                    if !seen.contains(&next) {
                        if seen.len() >= cap {
                            return Err(Error::EnumerationCap { what: "shuffle class", cap });
                        }
                        seen.insert(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// All reduced representatives of `w` as letter sequences, sorted.
    pub fn reduced_representatives(&self, w: &ReducedWord, cap: usize) -> Result<Vec<Vec<Letter>>, Error> {
        let mut reps: Vec<Vec<Letter>> = self
            .representative_orders(w, cap)?
            .into_iter()
            .map(|order| order.into_iter().map(|i| w.letters[i]).collect())
            .collect();
        reps.sort();
        Ok(reps)
    }

    /// Positions of `w` that some representative places among its last
    /// `min(d, |w|)` letters.
    pub fn d_tail_occurrences(&self, w: &ReducedWord, d: usize, cap: usize) -> Result<BTreeSet<usize>, Error> {
        let len = w.len();
        if d >= len {
            return Ok((0..len).collect());
        }
        let mut tail = BTreeSet::new();
        for order in self.representative_orders(w, cap)? {
            tail.extend(order[len - d..].iter().copied());
        }
        Ok(tail)
    }

    /// Positions of `w` that some representative places among its first
    /// `min(d, |w|)` letters.
    pub fn d_head_occurrences(&self, w: &ReducedWord, d: usize, cap: usize) -> Result<BTreeSet<usize>, Error> {
        let len = w.len();
        if d >= len {
            return Ok((0..len).collect());
        }
        let mut head = BTreeSet::new();
        for order in self.representative_orders(w, cap)? {
            head.extend(order[..d].iter().copied());
        }
        Ok(head)
    }

    /// Whether some reduced representative of `w` begins with a `G_v` letter.
    pub fn can_start_with(&self, w: &ReducedWord, v: Vertex) -> bool {
        w.letters.iter().enumerate().any(|(k, l)| {
            l.vertex == v && w.letters[..k].iter().all(|e| self.commute(e.vertex, v))
        })
    }

    /// Canonical shortest element of the left coset `g·G(st(v))`.
    ///
    /// Strips every letter in `st(v)` that can be shuffled to the right end,
    /// repeating until none is left.
    pub fn coset_representative(&self, g: &ReducedWord, v: Vertex) -> ReducedWord {
        self.coset_representative_of(&g.letters, v)
    }

    /// As [`coset_representative`](Self::coset_representative), for any
    /// reduced letter sequence rather than the canonical one.
    pub fn coset_representative_of(&self, letters: &[Letter], v: Vertex) -> ReducedWord {
        let mut stripped = vec![false; letters.len()];
        for k in (0..letters.len()).rev() {
            let x = letters[k].vertex;
            stripped[k] = self.graph.in_star(v, x)
                && (k + 1..letters.len()).all(|j| stripped[j] || self.commute(x, letters[j].vertex));
        }
        let kept: Vec<Letter> = letters
            .iter()
            .zip(&stripped)
            .filter(|(_, &s)| !s)
            .map(|(&l, _)| l)
            .collect();
        ReducedWord { letters: self.canonical_order(&kept) }
    }

    /// All elements of reduced length at most `radius`, sorted by length and
    /// then lexicographically.
    pub fn ball(&self, radius: usize) -> Vec<ReducedWord> {
        let generators: Vec<Letter> = (0..self.vertex_count())
            .flat_map(|v| (1..self.data[v].order()).map(move |g| Letter::new(v, g)))
            .collect();
        let mut all = BTreeSet::new();
        all.insert(ReducedWord::identity());
        let mut frontier = vec![ReducedWord::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &generators {
                    let mut cat = w.letters.clone();
                    cat.push(l);
                    let r = self.reduce(&cat).expect("generators are valid letters");
                    if r.len() == w.len() + 1 && all.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<ReducedWord> = all.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// All nontrivial letters of the context.
    pub fn generators(&self) -> Vec<Letter> {
        (0..self.vertex_count())
            .flat_map(|v| (1..self.data[v].order()).map(move |g| Letter::new(v, g)))
            .collect()
    }
}
