//! Brute-force oracles shared by the integration tests. None of them call
//! the search routines of the library; they only use `Graph` as a container.

#![allow(dead_code)]

use turan_core::Graph;

/// Every injective map from pattern to host that preserves edges.
pub fn brute_homs(host: &Graph, pattern: &Graph) -> u64 {
    let (n, h) = (host.n(), pattern.n());
    if h > n {
        return 0;
    }
    let edges: Vec<(usize, usize)> = pattern.edges().collect();
    let mut map = vec![usize::MAX; h];
    let mut used = vec![false; n];
    let mut count = 0;
    fn rec(
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
        host: &Graph,
        edges: &[(usize, usize)],
        count: &mut u64,
    ) {
        if i == map.len() {
            if edges.iter().all(|&(a, b)| host.has_edge(map[a], map[b])) {
                *count += 1;
            }
            return;
        }
        for v in 0..host.n() {
            if used[v] {
                continue;
            }
            map[i] = v;
            // prune on edges whose endpoints are both placed
            if edges.iter().any(|&(a, b)| a.max(b) == i && !host.has_edge(map[a], map[b])) {
                continue;
            }
            used[v] = true;
            rec(i + 1, map, used, host, edges, count);
            used[v] = false;
        }
        map[i] = usize::MAX;
    }
    rec(0, &mut map, &mut used, host, &edges, &mut count);
    count
}

pub fn brute_contains(host: &Graph, pattern: &Graph) -> bool {
    brute_homs(host, pattern) > 0
}

pub fn brute_aut(pattern: &Graph) -> u64 {
    brute_homs(pattern, pattern)
}

pub fn brute_copies(host: &Graph, pattern: &Graph) -> u64 {
    let homs = brute_homs(host, pattern);
    let aut = brute_aut(pattern);
    assert_eq!(homs % aut, 0);
    homs / aut
}

pub fn components(g: &Graph) -> usize {
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

/// Identify the `U`-vertices of `t` copies of `H`.
pub fn blowup_oracle(h: &Graph, u: &[usize], t: usize) -> Graph {
    let mut id = std::collections::BTreeMap::new();
    for copy in 0..t {
        for v in 0..h.n() {
            let key = if u.contains(&v) { (v, usize::MAX) } else { (v, copy) };
            let next = id.len();
            id.entry(key).or_insert(next);
        }
    }
    let mut edges = std::collections::BTreeSet::new();
    for copy in 0..t {
        let at = |v: usize| id[&if u.contains(&v) { (v, usize::MAX) } else { (v, copy) }];
        for (a, b) in h.edges() {
            let (x, y) = (at(a), at(b));
            edges.insert((x.min(y), x.max(y)));
        }
    }
    Graph::from_edges(id.len(), &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// `None` when `H` contains `T`; otherwise the exponent and the witness
/// (fewest vertices, then lexicographically smallest), over every subset.
pub fn exponent_oracle(h: &Graph, tree: &Graph) -> Option<(usize, Vec<usize>)> {
    if brute_contains(h, tree) {
        return None;
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    for mask in 0u32..1 << h.n() {
        let u: Vec<usize> = (0..h.n()).filter(|&v| mask >> v & 1 == 1).collect();
        if brute_contains(&blowup_oracle(h, &u, tree.n()), tree) {
            continue;
        }
        let keep: Vec<usize> = (0..h.n()).filter(|v| !u.contains(v)).collect();
        let r = components(&h.induced(&keep));
        let better = match &best {
            None => true,
            Some((br, bu)) => r > *br || (r == *br && (u.len(), &u) < (bu.len(), bu)),
        };
        if better {
            best = Some((r, u));
        }
    }
    best
}

/// All labelled graphs on `n` vertices, edges in column order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (1..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

/// Small random graph with edge probability `p`.
pub fn random_graph(rng: &mut impl rand::Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}
