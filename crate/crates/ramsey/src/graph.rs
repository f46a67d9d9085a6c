//! Simple undirected graphs with an exact clique search kernel.
//!
//! The kernel serves two callers: monochromatic-clique detection in edge
//! colorings (existence of a `k`-clique, lexicographically least witness) and
//! independence numbers of strong product powers (maximum clique of the
//! complement). Both use branch-and-bound over bitset neighborhoods with a
//! greedy coloring bound.

use crate::bits::Bitset;

/// Undirected simple graph on vertices `0..n`, adjacency stored as one bitset
/// row per vertex.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    adj: Vec<Bitset>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Bitset::new(n); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Insert the edge `{u, v}`. Self-loops are rejected; parallel inserts are
    /// idempotent.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at vertex {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Bitset::count).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    /// Cycle `C_n` (requires `n >= 3`).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    /// Circulant graph on `Z_m` with connection set `dists`. Callers are
    /// responsible for `1 <= d < m`; each chord is mirrored, so the result is
    /// the same whether or not `dists` is closed under negation mod `m`.
    pub fn circulant(m: usize, dists: &[u32]) -> Self {
        let mut g = Graph::empty(m);
        for v in 0..m {
            for &d in dists {
                g.add_edge(v, (v + d as usize) % m);
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Greedy coloring of the subgraph induced by `set`, in ascending vertex
    /// order. The class count bounds the largest clique inside `set`.
    fn color_bound(&self, set: &Bitset) -> usize {
        let mut classes: Vec<Bitset> = Vec::new();
        for v in set.iter() {
            match classes.iter_mut().find(|c| c.is_disjoint(&self.adj[v])) {
                Some(c) => c.insert(v),
                None => {
                    let mut c = Bitset::new(self.n);
                    c.insert(v);
                    classes.push(c);
                }
            }
        }
        classes.len()
    }

    /// Lexicographically least `k`-clique, if one exists.
    ///
    /// Vertices are explored in ascending order and subtrees are pruned only
    /// when they provably contain no `k`-clique, so the first clique found is
    /// the least one under lexicographic comparison of sorted vertex lists.
    pub fn find_kclique(&self, k: usize) -> Option<Vec<usize>> {
        if k == 0 {
            return Some(Vec::new());
        }
        if k > self.n {
            return None;
        }
        if k == 1 {
            return Some(vec![0]);
        }
        let mut clique = Vec::with_capacity(k);
        self.kclique_dfs(&Bitset::full(self.n), k, &mut clique)
    }

    fn kclique_dfs(&self, cand: &Bitset, k: usize, clique: &mut Vec<usize>) -> Option<Vec<usize>> {
        if clique.len() == k {
            return Some(clique.clone());
        }
        let need = k - clique.len();
        if cand.count() < need || clique.len() + self.color_bound(cand) < k {
            return None;
        }
        for v in cand.iter() {
            clique.push(v);
            let mut next = cand.intersection(&self.adj[v]);
            next.truncate_through(v);
            if let Some(found) = self.kclique_dfs(&next, k, clique) {
                return Some(found);
            }
            clique.pop();
        }
        None
    }

    /// A maximum clique (largest vertex count). Deterministic: the search
    /// order depends only on the adjacency structure.
    pub fn max_clique(&self) -> Vec<usize> {
        let mut best = Vec::new();
        let mut cur = Vec::new();
        if self.n > 0 {
            self.max_clique_expand(&Bitset::full(self.n), &mut cur, &mut best);
        }
        best
    }

    fn max_clique_expand(&self, cand: &Bitset, cur: &mut Vec<usize>, best: &mut Vec<usize>) {
        // Color-sort the candidates: vertices are branched in descending class
        // index so the greedy bound tightens monotonically along the loop.
        let mut classes: Vec<Bitset> = Vec::new();
        let mut order: Vec<(usize, usize)> = Vec::with_capacity(cand.count());
        for v in cand.iter() {
            let ci = classes.iter().position(|c| c.is_disjoint(&self.adj[v]));
            let bound = match ci {
                Some(i) => {
                    classes[i].insert(v);
                    i + 1
                }
                None => {
                    let mut c = Bitset::new(self.n);
                    c.insert(v);
                    classes.push(c);
                    classes.len()
                }
            };
            order.push((v, bound));
        }
        order.sort_by_key(|&(v, b)| (b, v));

        let mut cand = cand.clone();
        for &(v, bound) in order.iter().rev() {
            if cur.len() + bound <= best.len() {
                return;
            }
            cur.push(v);
            if cur.len() > best.len() {
                *best = cur.clone();
            }
            let next = cand.intersection(&self.adj[v]);
            if !next.is_empty() {
                self.max_clique_expand(&next, cur, best);
            }
            cur.pop();
            cand.remove(v);
        }
    }

    /// Size of a largest independent set = clique number of the complement.
    pub fn independence_number(&self) -> usize {
        self.complement().max_clique().len()
    }
}
