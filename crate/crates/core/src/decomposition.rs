//! Tree decompositions and k-tree sampling.
//!
//! Patterns in this crate are never decomposed after the fact: they are born
//! from a k-tree together with a width-certified decomposition, and taking
//! subgraphs only ever shrinks bags. Downstream counting trusts the
//! certificate after [`validate`] instead of computing treewidth.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("tree edge references bag {0}, but there are only {1} bags")]
    BagIndexOutOfRange(usize, usize),
    #[error("bag graph is not a tree ({bags} bags, {edges} tree edges, {reachable} reachable from bag 0)")]
    NotATree {
        bags: usize,
        edges: usize,
        reachable: usize,
    },
    #[error("vertex {0} appears in no bag")]
    VertexUncovered(usize),
    #[error("edge {{{0}, {1}}} is contained in no bag")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {0} do not form a connected subtree")]
    RunningIntersection(usize),
    #[error("bag {bag} contains vertex {vertex} outside the pattern's range {vertex_count}")]
    ForeignVertex {
        bag: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("nice decomposition node {0} violates its tag: {1}")]
    BadNiceNode(usize, &'static str),
}

/// A tree of vertex bags certifying a width bound for a pattern graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<BTreeSet<usize>>,
    tree_edges: BTreeSet<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(
        bags: Vec<BTreeSet<usize>>,
        tree_edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let tree_edges = tree_edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        Self { bags, tree_edges }
    }

    /// Single bag holding every vertex of a graph on `n` vertices. Always a
    /// valid decomposition, of width `n - 1`.
    pub fn single_bag(n: usize) -> Self {
        Self::new(vec![(0..n).collect()], [])
    }

    pub fn bags(&self) -> &[BTreeSet<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tree_edges.iter().copied()
    }

    /// Max bag size minus one; -1 when every bag is empty.
    pub fn width(&self) -> isize {
        self.bags
            .iter()
            .map(|b| b.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Relabels bag contents through `map`; vertices absent from the map are
    /// dropped. The tree shape is untouched.
    pub fn relabeled(&self, map: &BTreeMap<usize, usize>) -> Self {
        let bags = self
            .bags
            .iter()
            .map(|bag| bag.iter().filter_map(|v| map.get(v).copied()).collect())
            .collect();
        Self {
            bags,
            tree_edges: self.tree_edges.clone(),
        }
    }
}

/// Checks the four decomposition invariants for `pattern`: tree shape,
/// vertex coverage, edge coverage, running intersection.
pub fn validate(pattern: &Graph, td: &TreeDecomposition) -> Result<(), DecompositionError> {
    validate_tree_shape(td)?;
    let n = pattern.vertex_count();
    for (bag_idx, bag) in td.bags.iter().enumerate() {
        if let Some(&vertex) = bag.iter().find(|&&v| v >= n) {
            return Err(DecompositionError::ForeignVertex {
                bag: bag_idx,
                vertex,
                vertex_count: n,
            });
        }
    }
    for v in 0..n {
        if !td.bags.iter().any(|bag| bag.contains(&v)) {
            return Err(DecompositionError::VertexUncovered(v));
        }
    }
    for (u, v) in pattern.edges() {
        if !td.bags.iter().any(|bag| bag.contains(&u) && bag.contains(&v)) {
            return Err(DecompositionError::EdgeUncovered(u, v));
        }
    }
    let adj = td.adjacency();
    for v in 0..n {
        let holders: Vec<usize> = (0..td.bags.len())
            .filter(|&b| td.bags[b].contains(&v))
            .collect();
        if !subtree_connected(&holders, &adj) {
            return Err(DecompositionError::RunningIntersection(v));
        }
    }
    Ok(())
}

fn validate_tree_shape(td: &TreeDecomposition) -> Result<(), DecompositionError> {
    let bags = td.bags.len();
    if bags == 0 {
        return Err(DecompositionError::NoBags);
    }
    for &(a, b) in &td.tree_edges {
        let worst = a.max(b);
        if worst >= bags {
            return Err(DecompositionError::BagIndexOutOfRange(worst, bags));
        }
    }
    // A connected graph on `bags` nodes with `bags - 1` edges is a tree.
    let adj = td.adjacency();
    let mut seen = vec![false; bags];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reachable = 1;
    while let Some(b) = queue.pop_front() {
        for &c in &adj[b] {
            if !seen[c] {
                seen[c] = true;
                reachable += 1;
                queue.push_back(c);
            }
        }
    }
    if reachable != bags || td.tree_edges.len() != bags - 1 {
        return Err(DecompositionError::NotATree {
            bags,
            edges: td.tree_edges.len(),
            reachable,
        });
    }
    Ok(())
}

fn subtree_connected(holders: &[usize], adj: &[Vec<usize>]) -> bool {
    if holders.len() <= 1 {
        return true;
    }
    let holder_set: BTreeSet<usize> = holders.iter().copied().collect();
    let mut seen = BTreeSet::from([holders[0]]);
    let mut queue = VecDeque::from([holders[0]]);
    while let Some(b) = queue.pop_front() {
        for &c in &adj[b] {
            if holder_set.contains(&c) && seen.insert(c) {
                queue.push_back(c);
            }
        }
    }
    seen.len() == holders.len()
}

/// Draws a k-tree on `s` vertices together with its natural decomposition.
///
/// For `s <= k + 1` this is the complete graph with a single bag. Otherwise
/// the graph grows from K_{k+1} by attaching each new vertex to a uniformly
/// chosen k-subset of a uniformly chosen existing bag, which gives every
/// k-tree on `s` vertices nonzero probability. Bags all have k+1 vertices, so
/// the decomposition has width exactly k. For k = 0 the construction
/// degenerates to isolated vertices.
pub fn sample_ktree<R: Rng + ?Sized>(k: usize, s: usize, rng: &mut R) -> (Graph, TreeDecomposition) {
    assert!(s >= 1, "k-tree needs at least one vertex");
    if s <= k + 1 {
        let graph = crate::graph::generate(crate::graph::Family::Complete, s)
            .expect("complete graph on s >= 1 vertices");
        return (graph, TreeDecomposition::single_bag(s));
    }
    let mut edges: Vec<(usize, usize)> = (0..=k)
        .flat_map(|i| (i + 1..=k).map(move |j| (i, j)))
        .collect();
    let mut bags: Vec<BTreeSet<usize>> = vec![(0..=k).collect()];
    let mut tree_edges = Vec::new();
    for v in k + 1..s {
        let bag_idx = rng.random_range(0..bags.len());
        // A k-subset of a (k+1)-bag is the bag minus one uniform member.
        let drop_idx = rng.random_range(0..=k);
        let mut new_bag: BTreeSet<usize> = bags[bag_idx]
            .iter()
            .copied()
            .enumerate()
            .filter_map(|(i, u)| (i != drop_idx).then_some(u))
            .collect();
        for &u in &new_bag {
            edges.push((u, v));
        }
        new_bag.insert(v);
        tree_edges.push((bag_idx, bags.len()));
        bags.push(new_bag);
    }
    let graph = Graph::new(s, edges).expect("k-tree construction stays in range");
    (graph, TreeDecomposition::new(bags, tree_edges))
}

/// Intersects every bag with `kept`. Empty bags stay as connectors, so the
/// tree shape is unchanged; the result is valid for any subgraph of the
/// original pattern induced on `kept`, and the width never grows.
pub fn restrict(td: &TreeDecomposition, kept: &BTreeSet<usize>) -> TreeDecomposition {
    TreeDecomposition {
        bags: td
            .bags
            .iter()
            .map(|bag| bag.intersection(kept).copied().collect())
            .collect(),
        tree_edges: td.tree_edges.clone(),
    }
}

/// Node tag in a nice tree decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceOp {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug)]
pub struct NiceNode {
    pub op: NiceOp,
    /// Sorted bag contents.
    pub bag: Vec<usize>,
    /// Child node indices: none for Leaf, one for Introduce/Forget, two for Join.
    pub children: Vec<usize>,
}

/// A rooted binary normal form of a tree decomposition: leaves and the root
/// carry empty bags, and adjacent bags differ by exactly one vertex
/// (Introduce/Forget) or not at all (Join).
#[derive(Clone, Debug)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn width(&self) -> isize {
        self.nodes
            .iter()
            .map(|n| n.bag.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Node indices in post-order (children before parents), ending at the root.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((node, expanded)) = stack.pop() {
            if expanded {
                order.push(node);
            } else {
                stack.push((node, true));
                for &child in &self.nodes[node].children {
                    stack.push((child, false));
                }
            }
        }
        order
    }

    /// The plain decomposition whose bags are this tree's node bags and whose
    /// tree edges are the parent-child links.
    pub fn underlying(&self) -> TreeDecomposition {
        let bags = self
            .nodes
            .iter()
            .map(|n| n.bag.iter().copied().collect())
            .collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(idx, n)| n.children.iter().map(move |&c| (idx, c)));
        TreeDecomposition::new(bags, edges)
    }

    /// Structural check of the nice-form invariants plus full validity for
    /// `pattern`.
    pub fn validate_for(&self, pattern: &Graph) -> Result<(), DecompositionError> {
        for (idx, node) in self.nodes.iter().enumerate() {
            let fail = |msg| Err(DecompositionError::BadNiceNode(idx, msg));
            match node.op {
                NiceOp::Leaf => {
                    if !node.children.is_empty() || !node.bag.is_empty() {
                        return fail("leaf must have an empty bag and no children");
                    }
                }
                NiceOp::Introduce(v) => {
                    if node.children.len() != 1 {
                        return fail("introduce must have one child");
                    }
                    let child = &self.nodes[node.children[0]];
                    let mut expected = child.bag.clone();
                    match expected.binary_search(&v) {
                        Ok(_) => return fail("introduced vertex already in child bag"),
                        Err(pos) => expected.insert(pos, v),
                    }
                    if node.bag != expected {
                        return fail("introduce bag must be child bag plus the vertex");
                    }
                }
                NiceOp::Forget(v) => {
                    if node.children.len() != 1 {
                        return fail("forget must have one child");
                    }
                    let child = &self.nodes[node.children[0]];
                    let mut expected = child.bag.clone();
                    match expected.binary_search(&v) {
                        Ok(pos) => {
                            expected.remove(pos);
                        }
                        Err(_) => return fail("forgotten vertex missing from child bag"),
                    }
                    if node.bag != expected {
                        return fail("forget bag must be child bag minus the vertex");
                    }
                }
                NiceOp::Join => {
                    if node.children.len() != 2 {
                        return fail("join must have two children");
                    }
                    for &c in &node.children {
                        if self.nodes[c].bag != node.bag {
                            return fail("join children must repeat the join bag");
                        }
                    }
                }
            }
        }
        if !self.nodes[self.root].bag.is_empty() {
            return Err(DecompositionError::BadNiceNode(
                self.root,
                "root bag must be empty",
            ));
        }
        validate(pattern, &self.underlying())
    }
}

/// Normalizes a decomposition into nice form of equal width. The tree is
/// rooted at bag 0 and Introduce/Forget chains run in ascending vertex order,
/// so the output is deterministic. Fails if the input is not tree-shaped.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition, DecompositionError> {
    validate_tree_shape(td)?;
    let adj = td.adjacency();
    let mut builder = NiceBuilder { nodes: Vec::new() };

    // Iterative DFS from bag 0; children discovered via parent tracking.
    let root_bag: Vec<usize> = td.bags[0].iter().copied().collect();
    let top = builder.build_subtree(td, &adj, 0, usize::MAX);
    // Forget the root bag down to the empty root.
    let root = builder.chain(top, &root_bag, &[]);

    Ok(NiceTreeDecomposition {
        nodes: builder.nodes,
        root,
    })
}

struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, op: NiceOp, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { op, bag, children });
        self.nodes.len() - 1
    }

    /// Emits forgets of `from \ to` then introduces of `to \ from`, both in
    /// ascending order, transforming a node whose bag is `from` into one
    /// whose bag is `to`. Returns the final node index.
    fn chain(&mut self, mut node: usize, from: &[usize], to: &[usize]) -> usize {
        let from_set: BTreeSet<usize> = from.iter().copied().collect();
        let to_set: BTreeSet<usize> = to.iter().copied().collect();
        let mut bag = from_set.clone();
        for &v in from_set.difference(&to_set) {
            bag.remove(&v);
            node = self.push(NiceOp::Forget(v), bag.iter().copied().collect(), vec![node]);
        }
        for &v in to_set.difference(&from_set) {
            bag.insert(v);
            node = self.push(
                NiceOp::Introduce(v),
                bag.iter().copied().collect(),
                vec![node],
            );
        }
        node
    }

    /// Builds the subtree rooted at `bag_idx`, returning a node whose bag
    /// equals that bag's contents.
    fn build_subtree(
        &mut self,
        td: &TreeDecomposition,
        adj: &[Vec<usize>],
        bag_idx: usize,
        parent: usize,
    ) -> usize {
        let bag: Vec<usize> = td.bags[bag_idx].iter().copied().collect();
        let children: Vec<usize> = adj[bag_idx]
            .iter()
            .copied()
            .filter(|&c| c != parent)
            .collect();
        if children.is_empty() {
            let leaf = self.push(NiceOp::Leaf, Vec::new(), Vec::new());
            return self.chain(leaf, &[], &bag);
        }
        let mut tops = Vec::with_capacity(children.len());
        for &child in &children {
            let sub = self.build_subtree(td, adj, child, bag_idx);
            let child_bag: Vec<usize> = td.bags[child].iter().copied().collect();
            tops.push(self.chain(sub, &child_bag, &bag));
        }
        let mut joined = tops[0];
        for &next in &tops[1..] {
            joined = self.push(NiceOp::Join, bag.clone(), vec![joined, next]);
        }
        joined
    }
}
