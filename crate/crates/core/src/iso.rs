//! Brute-force isomorphism testing and exhaustive enumeration of small
//! graphs, one representative per isomorphism class.
//!
//! These are test oracles, not features: both are hard-capped because the
//! embeddings exist precisely so that nothing downstream ever solves
//! isomorphism directly.

use std::collections::HashMap;

use crate::graph::{Graph, GraphError};

const ISO_VERTEX_CAP: usize = 10;
const ENUMERATE_CAP: usize = 7;

/// True iff an edge-preserving bijection exists in both directions.
/// Backtracking over degree-compatible assignments; refuses graphs with more
/// than 10 vertices.
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    for graph in [g, h] {
        if graph.vertex_count() > ISO_VERTEX_CAP {
            return Err(GraphError::TooLarge {
                op: "is_isomorphic",
                limit: ISO_VERTEX_CAP,
                got: graph.vertex_count(),
            });
        }
    }
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || g.degree_sequence() != h.degree_sequence()
    {
        return Ok(false);
    }
    let n = g.vertex_count();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_mapping(g, h, &mut image, &mut used, 0))
}

fn extend_mapping(
    g: &Graph,
    h: &Graph,
    image: &mut [usize],
    used: &mut [bool],
    next: usize,
) -> bool {
    if next == g.vertex_count() {
        return true;
    }
    'candidates: for candidate in 0..h.vertex_count() {
        if used[candidate] || g.degree(next) != h.degree(candidate) {
            continue;
        }
        for earlier in 0..next {
            if g.has_edge(next, earlier) != h.has_edge(candidate, image[earlier]) {
                continue 'candidates;
            }
        }
        image[next] = candidate;
        used[candidate] = true;
        if extend_mapping(g, h, image, used, next + 1) {
            return true;
        }
        used[candidate] = false;
    }
    image[next] = usize::MAX;
    false
}

fn triangle_count(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                continue;
            }
            for w in v + 1..n {
                if g.has_edge(u, w) && g.has_edge(v, w) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// One representative per isomorphism class of graphs with 1..=`max_n`
/// vertices, sizes ascending. Refuses `max_n > 7`.
pub fn enumerate_nonisomorphic(max_n: usize) -> Result<Vec<Graph>, GraphError> {
    if max_n > ENUMERATE_CAP {
        return Err(GraphError::TooLarge {
            op: "enumerate_nonisomorphic",
            limit: ENUMERATE_CAP,
            got: max_n,
        });
    }
    let mut all = Vec::new();
    let mut previous: Vec<Graph> = Vec::new();
    for n in 1..=max_n {
        let current = extend_representatives(n, &previous);
        all.extend(current.iter().cloned());
        previous = current;
    }
    Ok(all)
}

/// Representatives on exactly `n` vertices, built by attaching a new vertex
/// to every representative on `n-1` vertices in all 2^(n-1) ways and
/// deduplicating with `is_isomorphic`. Every class on `n` vertices contains a
/// graph whose restriction to the first `n-1` labels is one of the smaller
/// representatives, so the extension sweep is exhaustive.
fn extend_representatives(n: usize, smaller: &[Graph]) -> Vec<Graph> {
    if n == 1 {
        return vec![Graph::empty(1)];
    }
    let mut representatives: Vec<Graph> = Vec::new();
    // Bucket by cheap invariants so candidates only fight same-shaped reps.
    let mut buckets: HashMap<(usize, Vec<usize>, usize), Vec<usize>> = HashMap::new();
    for base in smaller {
        for mask in 0u32..(1 << (n - 1)) {
            let extra = (0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| (i, n - 1));
            let candidate = Graph::new(n, base.edges().chain(extra))
                .expect("extension endpoints are in range");
            let key = (
                candidate.edge_count(),
                candidate.degree_sequence(),
                triangle_count(&candidate),
            );
            let bucket = buckets.entry(key).or_default();
            let duplicate = bucket.iter().any(|&idx| {
                is_isomorphic(&candidate, &representatives[idx])
                    .expect("enumeration stays under the isomorphism cap")
            });
            if !duplicate {
                bucket.push(representatives.len());
                representatives.push(candidate);
            }
        }
    }
    representatives
}
