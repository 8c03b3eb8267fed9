//! 1-WL color refinement, the expressiveness baseline.
//!
//! Equal signatures mean the two graphs agree on every homomorphism count
//! from a forest (treewidth <= 1) pattern; that correspondence is what the
//! treewidth-capped sampler is tested against.

use sha2::{Digest, Sha256};

use crate::graph::Graph;

/// Stable summary of the refinement run: a digest of the full canonical
/// transcript (initial degrees, then each round's key table and histogram).
/// Two graphs share a signature iff 1-WL cannot tell them apart.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColorSignature {
    digest: [u8; 32],
    rounds: usize,
    color_classes: usize,
}

impl ColorSignature {
    pub fn hex(&self) -> String {
        self.digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Refinement rounds until the partition stabilized.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Number of stable color classes.
    pub fn color_classes(&self) -> usize {
        self.color_classes
    }
}

/// Runs color refinement to its fixpoint and returns the canonical signature.
///
/// Colors start as raw degrees. Each round recolors a vertex by its previous
/// color together with the sorted multiset of neighbor colors; the distinct
/// keys are sorted and re-indexed, so colors stay small integers and the
/// transcript is identical for isomorphic graphs no matter the labeling.
/// The partition is stable after at most v(G) rounds.
pub fn wl1_signature(g: &Graph) -> ColorSignature {
    let n = g.vertex_count();
    let mut hasher = Sha256::new();
    hasher.update(b"wl1");
    hasher.update((n as u64).to_be_bytes());

    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut degrees_sorted = colors.clone();
    degrees_sorted.sort_unstable();
    for d in &degrees_sorted {
        hasher.update((*d as u64).to_be_bytes());
    }

    let mut classes = distinct_count(&colors);
    let mut rounds = 0;
    loop {
        // Key = (own color, sorted neighbor colors).
        let keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut neighbor_colors: Vec<usize> =
                    g.neighbors(v).iter().map(|&w| colors[w]).collect();
                neighbor_colors.sort_unstable();
                (colors[v], neighbor_colors)
            })
            .collect();
        let mut table: Vec<&(usize, Vec<usize>)> = keys.iter().collect();
        table.sort();
        table.dedup();

        rounds += 1;
        hasher.update(b"round");
        hasher.update((rounds as u64).to_be_bytes());
        let mut histogram = vec![0u64; table.len()];
        let new_colors: Vec<usize> = keys
            .iter()
            .map(|key| {
                let idx = table.binary_search(&key).expect("key is in the table");
                histogram[idx] += 1;
                idx
            })
            .collect();
        for (own, neighbors) in &table {
            hasher.update((*own as u64).to_be_bytes());
            hasher.update((neighbors.len() as u64).to_be_bytes());
            for c in neighbors {
                hasher.update((*c as u64).to_be_bytes());
            }
        }
        for count in &histogram {
            hasher.update(count.to_be_bytes());
        }

        let new_classes = table.len();
        colors = new_colors;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }

    ColorSignature {
        digest: hasher.finalize().into(),
        rounds,
        color_classes: classes,
    }
}

fn distinct_count(colors: &[usize]) -> usize {
    let mut sorted = colors.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}
