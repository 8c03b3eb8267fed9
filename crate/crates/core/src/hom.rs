//! Exact homomorphism counting.
//!
//! Two independent routes produce the same number: a brute-force map
//! enumeration capped at oracle scale, and a dynamic program over a nice tree
//! decomposition whose cost is `O(v(F) · v(G)^(width+1))`. Counts are
//! arbitrary-precision integers throughout; densities convert to floating
//! point only at the boundary.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::decomposition::{DecompositionError, NiceOp, NiceTreeDecomposition};
use crate::graph::Graph;

/// A homomorphism count: unbounded non-negative integer in
/// `0 ..= v(G)^v(F)`.
pub type HomCount = BigUint;

const BRUTEFORCE_MAP_CAP: f64 = 1e8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("brute force refused: {maps} candidate maps exceed the 1e8 oracle cap")]
    ScaleCapExceeded { maps: u64 },
    #[error("DP table keys overflow: v(G)^(width+1) = {vg}^{digits} exceeds u128")]
    TableKeyOverflow { vg: usize, digits: usize },
    #[error("density is undefined for a target with no vertices")]
    EmptyTarget,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(#[from] DecompositionError),
}

/// Counts maps `V(F) -> V(G)` preserving every edge of `F`, by exhaustive
/// backtracking. Refuses instances with more than 1e8 candidate maps.
/// `hom(F, G) = 1` when `F` has no vertices.
pub fn hom_bruteforce(pattern: &Graph, target: &Graph) -> Result<HomCount, HomError> {
    let vf = pattern.vertex_count() as u32;
    let vg = target.vertex_count() as f64;
    if vf > 0 && vg.powi(vf as i32) > BRUTEFORCE_MAP_CAP {
        return Err(HomError::ScaleCapExceeded {
            maps: vg.powi(vf as i32) as u64,
        });
    }
    // Edges from each vertex to smaller-labeled vertices, checked as the
    // assignment grows so dead prefixes are pruned immediately.
    let back_edges: Vec<Vec<usize>> = (0..pattern.vertex_count())
        .map(|v| {
            pattern
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| w < v)
                .collect()
        })
        .collect();
    let mut image = vec![0usize; pattern.vertex_count()];
    let mut count = BigUint::zero();
    count_assignments(pattern, target, &back_edges, &mut image, 0, &mut count);
    Ok(count)
}

fn count_assignments(
    pattern: &Graph,
    target: &Graph,
    back_edges: &[Vec<usize>],
    image: &mut [usize],
    next: usize,
    count: &mut BigUint,
) {
    if next == pattern.vertex_count() {
        *count += 1u32;
        return;
    }
    'candidates: for u in 0..target.vertex_count() {
        for &w in &back_edges[next] {
            if !target.has_edge(u, image[w]) {
                continue 'candidates;
            }
        }
        image[next] = u;
        count_assignments(pattern, target, back_edges, image, next + 1, count);
    }
}

/// Counts homomorphisms by dynamic programming over a nice tree
/// decomposition of the pattern. Exactly equals [`hom_bruteforce`].
///
/// Tables map assignments of the current bag (in ascending vertex order) into
/// `V(G)` to the number of consistent extensions over forgotten vertices:
/// Leaf holds the empty assignment with count 1, Introduce extends by every
/// image satisfying the pattern edges into the bag, Forget sums over the
/// vertex's image, Join multiplies pointwise, and the empty root bag holds
/// the answer.
pub fn hom_dp(
    pattern: &Graph,
    ntd: &NiceTreeDecomposition,
    target: &Graph,
) -> Result<HomCount, HomError> {
    ntd.validate_for(pattern)?;
    let vg = target.vertex_count() as u128;
    let max_bag = ntd.nodes().iter().map(|n| n.bag.len()).max().unwrap_or(0);
    if vg.checked_pow(max_bag as u32).is_none() {
        return Err(HomError::TableKeyOverflow {
            vg: target.vertex_count(),
            digits: max_bag,
        });
    }

    // Bag assignments are packed as mixed-radix u128 keys: digit i holds the
    // image of the i-th smallest bag vertex. Bags stay small (width + 1), so
    // the radix never overflows at any realistic target size.
    type Table = HashMap<u128, BigUint>;
    let digit = |key: u128, pos: usize| -> usize { ((key / vg.pow(pos as u32)) % vg) as usize };
    let insert_digit = |key: u128, pos: usize, value: usize| -> u128 {
        let scale = vg.pow(pos as u32);
        let low = key % scale;
        let high = key / scale;
        low + (value as u128 + high * vg) * scale
    };
    let remove_digit = |key: u128, pos: usize| -> u128 {
        let scale = vg.pow(pos as u32);
        let low = key % scale;
        let high = key / (scale * vg);
        low + high * scale
    };

    let mut tables: Vec<Option<Table>> = vec![None; ntd.node_count()];
    for idx in ntd.postorder() {
        let node = &ntd.nodes()[idx];
        let table: Table = match node.op {
            NiceOp::Leaf => {
                let mut t = Table::new();
                t.insert(0, BigUint::one());
                t
            }
            NiceOp::Introduce(v) => {
                let child = tables[node.children[0]].take().expect("postorder");
                let pos = node.bag.binary_search(&v).expect("v is in the bag");
                // Pattern neighbors of v inside the child bag, as child-key positions.
                let neighbor_positions: Vec<usize> = node
                    .bag
                    .iter()
                    .copied()
                    .filter(|&w| w != v)
                    .enumerate()
                    .filter(|(_, w)| pattern.has_edge(v, *w))
                    .map(|(i, _)| i)
                    .collect();
                let mut t = Table::with_capacity(child.len());
                for (key, cnt) in &child {
                    'images: for u in 0..target.vertex_count() {
                        for &p in &neighbor_positions {
                            if !target.has_edge(u, digit(*key, p)) {
                                continue 'images;
                            }
                        }
                        t.insert(insert_digit(*key, pos, u), cnt.clone());
                    }
                }
                t
            }
            NiceOp::Forget(v) => {
                let child = tables[node.children[0]].take().expect("postorder");
                // v's position in the child bag = insertion point in this bag.
                let pos = node.bag.binary_search(&v).unwrap_err();
                let mut t = Table::with_capacity(child.len() / target.vertex_count().max(1) + 1);
                for (key, cnt) in child {
                    *t.entry(remove_digit(key, pos)).or_insert_with(BigUint::zero) += cnt;
                }
                t
            }
            NiceOp::Join => {
                let left = tables[node.children[0]].take().expect("postorder");
                let right = tables[node.children[1]].take().expect("postorder");
                let (small, large) = if left.len() <= right.len() {
                    (left, right)
                } else {
                    (right, left)
                };
                let mut t = Table::with_capacity(small.len());
                for (key, cnt) in small {
                    if let Some(other) = large.get(&key) {
                        t.insert(key, cnt * other);
                    }
                }
                t
            }
        };
        tables[idx] = Some(table);
    }

    let root = tables[ntd.root()].take().expect("root computed");
    Ok(root.into_values().next().unwrap_or_else(BigUint::zero))
}

/// Homomorphism density `t(F, G) = hom(F, G) / v(G)^v(F)`, the probability
/// that a uniformly random map is a homomorphism. The exact big-integer
/// ratio is formed before converting to floating point.
pub fn hom_density(pattern: &Graph, target: &Graph, count: &HomCount) -> Result<f64, HomError> {
    if target.vertex_count() == 0 {
        return Err(HomError::EmptyTarget);
    }
    let denom = BigUint::from(target.vertex_count()).pow(pattern.vertex_count() as u32);
    Ok(ratio_to_f64(count, &denom))
}

/// Size-truncated count: `0` when `v(F) > v(G)`, otherwise whatever
/// `count_fn` reports. The truncation never invokes `count_fn` on oversized
/// patterns, so truncated embeddings stay cheap on small graphs.
pub fn hom_truncated<E>(
    pattern: &Graph,
    target: &Graph,
    count_fn: impl FnOnce(&Graph, &Graph) -> Result<HomCount, E>,
) -> Result<HomCount, E> {
    if pattern.vertex_count() > target.vertex_count() {
        Ok(BigUint::zero())
    } else {
        count_fn(pattern, target)
    }
}

/// Exact `num / den` as f64, for `num <= den`, by scaled integer division.
/// Accurate to well below 1e-15 absolute, independent of operand size.
pub(crate) fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    const SHIFT: u32 = 128;
    let scaled = (num << SHIFT) / den;
    scaled.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(SHIFT as i32)
}

/// `ln(1 + count)`, robust to counts beyond f64 range.
pub(crate) fn log1p_count(count: &HomCount) -> f64 {
    match count.to_f64() {
        Some(x) if x.is_finite() => x.ln_1p(),
        _ => {
            // ln(1 + c) ~ ln c for astronomically large c: use the top bits.
            let bits = count.bits();
            let top = (count >> (bits - 53)).to_f64().unwrap_or(f64::MAX);
            top.ln() + (bits - 53) as f64 * std::f64::consts::LN_2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{make_nice, TreeDecomposition};
    use crate::graph::{disjoint_union, generate, Family, Graph};

    fn nice_single_bag(g: &Graph) -> NiceTreeDecomposition {
        make_nice(&TreeDecomposition::single_bag(g.vertex_count())).unwrap()
    }

    #[test]
    fn c4_into_an_edge() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let k2 = generate(Family::Complete, 2).unwrap();
        assert_eq!(hom_bruteforce(&c4, &k2).unwrap(), BigUint::from(2u32));
        assert_eq!(
            hom_dp(&c4, &nice_single_bag(&c4), &k2).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn edge_count_closed_form() {
        let k2 = generate(Family::Complete, 2).unwrap();
        for g in crate::iso::enumerate_nonisomorphic(5).unwrap() {
            let expected = BigUint::from(2 * g.edge_count());
            assert_eq!(hom_bruteforce(&k2, &g).unwrap(), expected);
        }
    }

    #[test]
    fn single_vertex_counts_vertices() {
        let k1 = generate(Family::Complete, 1).unwrap();
        let c5 = generate(Family::Cycle, 5).unwrap();
        assert_eq!(hom_bruteforce(&k1, &c5).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn empty_pattern_counts_one() {
        let null = Graph::empty(0);
        let c5 = generate(Family::Cycle, 5).unwrap();
        assert_eq!(hom_bruteforce(&null, &c5).unwrap(), BigUint::one());
        assert_eq!(
            hom_dp(&null, &nice_single_bag(&null), &c5).unwrap(),
            BigUint::one()
        );
    }

    #[test]
    fn triangle_into_triangle() {
        let k3 = generate(Family::Complete, 3).unwrap();
        assert_eq!(
            hom_dp(&k3, &nice_single_bag(&k3), &k3).unwrap(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn edgeless_targets() {
        let e4 = generate(Family::Edgeless, 4).unwrap();
        let p3 = generate(Family::Path, 3).unwrap();
        let e3_pattern = generate(Family::Edgeless, 3).unwrap();
        assert_eq!(
            hom_dp(&e3_pattern, &nice_single_bag(&e3_pattern), &e4).unwrap(),
            BigUint::from(64u32)
        );
        assert_eq!(
            hom_dp(&p3, &nice_single_bag(&p3), &e4).unwrap(),
            BigUint::zero()
        );
    }

    #[test]
    fn brute_force_cap_refuses() {
        let p10 = generate(Family::Path, 10).unwrap();
        let k10 = generate(Family::Complete, 10).unwrap();
        // 10^10 maps is over the cap.
        assert!(matches!(
            hom_bruteforce(&p10, &k10),
            Err(HomError::ScaleCapExceeded { .. })
        ));
    }

    #[test]
    fn dp_rejects_invalid_decomposition() {
        let k3 = generate(Family::Complete, 3).unwrap();
        let p3 = generate(Family::Path, 3).unwrap();
        // P3's path decomposition misses K3's edge {0,2}.
        let td = TreeDecomposition::new(
            vec![[0, 1].into_iter().collect(), [1, 2].into_iter().collect()],
            [(0, 1)],
        );
        let ntd = make_nice(&td).unwrap();
        assert!(hom_dp(&p3, &ntd, &p3).is_ok());
        assert!(matches!(
            hom_dp(&k3, &ntd, &p3),
            Err(HomError::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn density_basics() {
        let k2 = generate(Family::Complete, 2).unwrap();
        let count = hom_bruteforce(&k2, &k2).unwrap();
        assert_eq!(hom_density(&k2, &k2, &count).unwrap(), 0.5);
        let k1 = generate(Family::Complete, 1).unwrap();
        for g in crate::iso::enumerate_nonisomorphic(4).unwrap() {
            let c = hom_bruteforce(&k1, &g).unwrap();
            assert_eq!(hom_density(&k1, &g, &c).unwrap(), 1.0);
        }
        assert!(matches!(
            hom_density(&k2, &Graph::empty(0), &BigUint::zero()),
            Err(HomError::EmptyTarget)
        ));
    }

    #[test]
    fn truncation_branches() {
        let c4 = generate(Family::Cycle, 4).unwrap();
        let k3 = generate(Family::Complete, 3).unwrap();
        let k2 = generate(Family::Complete, 2).unwrap();
        let count = |f: &Graph, g: &Graph| hom_bruteforce(f, g);
        assert_eq!(hom_truncated(&c4, &k3, count).unwrap(), BigUint::zero());
        assert_eq!(
            hom_truncated(&k2, &k3, count).unwrap(),
            BigUint::from(6u32)
        );
        // Boundary v(F) = v(G) still counts.
        assert_eq!(
            hom_truncated(&k3, &k3, count).unwrap(),
            BigUint::from(6u32)
        );
    }

    #[test]
    fn disconnected_patterns_multiply() {
        let c3 = generate(Family::Cycle, 3).unwrap();
        let k1 = generate(Family::Complete, 1).unwrap();
        let pattern = disjoint_union(&c3, &k1);
        let target = generate(Family::Cycle, 5).unwrap();
        let whole = hom_dp(&pattern, &nice_single_bag(&pattern), &target).unwrap();
        let part = hom_bruteforce(&c3, &target).unwrap();
        assert_eq!(whole, part * 5u32);
    }

    #[test]
    fn ratio_conversion_is_tight() {
        let num = BigUint::from(1u32);
        let den = BigUint::from(3u32).pow(40);
        let exact = 3f64.powi(-40);
        assert!((ratio_to_f64(&num, &den) - exact).abs() < 1e-30);
        assert_eq!(ratio_to_f64(&BigUint::zero(), &den), 0.0);
    }

    #[test]
    fn log1p_handles_huge_counts() {
        let huge = BigUint::from(2u32).pow(4000);
        let expected = 4000.0 * std::f64::consts::LN_2;
        assert!((log1p_count(&huge) - expected).abs() / expected < 1e-12);
        assert_eq!(log1p_count(&BigUint::zero()), 0.0);
    }
}
