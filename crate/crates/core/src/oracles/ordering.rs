use std::collections::VecDeque;

use crate::types::CsrMatrix;

/// Cuthill-McKee by breadth-first search over adjacency lists.
///
/// Returns old indices in new-label order. Seeds and neighbour batches are
/// ordered by `(degree, index)`, degree counting off-diagonal entries.
pub fn reference_cuthill_mckee(m: &CsrMatrix) -> Vec<usize> {
    let n = m.n_rows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, c, _) in m.triplets() {
        if r != c {
            adj[r].push(c);
        }
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut labeled = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n)
            .filter(|&v| !labeled[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("an unlabeled node remains");
        labeled[seed] = true;
        order.push(seed);
        let mut queue = VecDeque::from([seed]);
        while let Some(v) = queue.pop_front() {
            let mut batch: Vec<usize> = adj[v].iter().copied().filter(|&u| !labeled[u]).collect();
            batch.sort_unstable_by_key(|&u| (degree[u], u));
            batch.dedup();
            for u in batch {
                labeled[u] = true;
                order.push(u);
                queue.push_back(u);
            }
        }
    }
    order
}

/// True when `forward` is a bijection of `0..n`.
pub fn is_permutation(forward: &[usize], n: usize) -> bool {
    if forward.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    forward
        .iter()
        .all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// Connected components of the pattern graph, as a component id per node.
pub fn components(m: &CsrMatrix) -> Vec<usize> {
    let n = m.n_rows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (r, c, _) in m.triplets() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

/// True when every component's new labels form one contiguous interval.
pub fn labels_contiguous_per_component(m: &CsrMatrix, forward: &[usize]) -> bool {
    let comp = components(m);
    let n = comp.len();
    let mut lo = vec![usize::MAX; n];
    let mut hi = vec![0usize; n];
    let mut size = vec![0usize; n];
    for v in 0..n {
        let c = comp[v];
        lo[c] = lo[c].min(forward[v]);
        hi[c] = hi[c].max(forward[v]);
        size[c] += 1;
    }
    (0..n).all(|c| size[c] == 0 || hi[c] - lo[c] + 1 == size[c])
}
