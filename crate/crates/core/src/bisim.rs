//! Bisimilarity of pointed systems: the identity criterion for the sets they
//! picture.
//!
//! Two routes compute the greatest bisimulation. [`naive_bisim`] iterates the
//! defining fixpoint on the full pair relation and serves as the independent
//! oracle; [`refine_partition`] is the fast signature-based partition
//! refinement used everywhere else. [`quotient`] collapses a system to its
//! bisimulation-minimal form and [`canonicalize`] renumbers that form
//! deterministically, so byte equality of canonical systems is exactly
//! bisimilarity.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::system::{NodeId, System};

/// A partition of node indices into blocks of pairwise-bisimilar nodes.
///
/// Indices refer either to one system's nodes or, for two-system
/// comparisons, to the disjoint union (first system's nodes, then the
/// second's shifted by the first's size).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    block_count: usize,
}

impl Partition {
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn block_of(&self, index: usize) -> usize {
        self.block_of[index]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Blocks as sorted index lists, in block-id order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count];
        for (x, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(x);
        }
        blocks
    }

    pub fn is_discrete(&self) -> bool {
        self.block_count == self.block_of.len()
    }
}

/// Adjacency of a disjoint union: children of every node of `s`, then of `t`
/// with indices shifted by `s.len()`.
fn union_children(s: &System, t: &System) -> Vec<Vec<usize>> {
    let shift = s.len();
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(s.len() + t.len());
    for x in s.nodes() {
        adj.push(s.children_unchecked(x).iter().map(|c| c.index()).collect());
    }
    for x in t.nodes() {
        adj.push(
            t.children_unchecked(x)
                .iter()
                .map(|c| c.index() + shift)
                .collect(),
        );
    }
    adj
}

fn single_children(s: &System) -> Vec<Vec<usize>> {
    s.nodes()
        .map(|x| s.children_unchecked(x).iter().map(|c| c.index()).collect())
        .collect()
}

/// Greatest-fixpoint computation on the pair relation, straight from the
/// definition: start with all pairs related and delete a pair whenever the
/// back-and-forth condition on children fails, until nothing changes.
/// Quadratic in nodes; used only as the oracle against [`refine_partition`].
fn naive_fixpoint(adj: &[Vec<usize>]) -> Partition {
    let n = adj.len();
    let mut related = vec![true; n * n];
    loop {
        let mut changed = false;
        for x in 0..n {
            for y in 0..n {
                if !related[x * n + y] {
                    continue;
                }
                let forth = adj[x]
                    .iter()
                    .all(|&cx| adj[y].iter().any(|&cy| related[cx * n + cy]));
                let back = adj[y]
                    .iter()
                    .all(|&cy| adj[x].iter().any(|&cx| related[cx * n + cy]));
                if !(forth && back) {
                    related[x * n + y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    // The fixpoint is an equivalence; read off its classes.
    let mut block_of = vec![usize::MAX; n];
    let mut block_count = 0;
    for x in 0..n {
        if block_of[x] != usize::MAX {
            continue;
        }
        for y in x..n {
            if related[x * n + y] && block_of[y] == usize::MAX {
                block_of[y] = block_count;
            }
        }
        block_count += 1;
    }
    Partition {
        block_of,
        block_count,
    }
}

/// Signature-based partition refinement. Starts from a single block and
/// repeatedly splits by the set of child blocks until stable. Block ids are
/// assigned in node-index order each round, so the result is deterministic
/// for a fixed node numbering.
fn refine(adj: &[Vec<usize>]) -> Partition {
    let n = adj.len();
    let mut block_of = vec![0usize; n];
    let mut block_count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next = Vec::with_capacity(n);
        for x in 0..n {
            let mut sig: Vec<usize> = adj[x].iter().map(|&c| block_of[c]).collect();
            sig.sort_unstable();
            sig.dedup();
            let fresh = ids.len();
            next.push(*ids.entry((block_of[x], sig)).or_insert(fresh));
        }
        let count = ids.len();
        if count == block_count {
            return Partition {
                block_of: next,
                block_count: count,
            };
        }
        block_of = next;
        block_count = count;
    }
}

/// The greatest bisimulation on the disjoint union of `s` and `t`, computed
/// by the naive fixpoint. Oracle only; prefer [`bisimilar`] elsewhere.
pub fn naive_bisim(s: &System, t: &System) -> Partition {
    naive_fixpoint(&union_children(s, t))
}

/// The coarsest stable partition of one system's nodes.
pub fn refine_partition(s: &System) -> Partition {
    refine(&single_children(s))
}

/// True iff `s` and `t` picture the same set: their roots share a block in
/// the stable partition of the disjoint union.
pub fn bisimilar(s: &System, t: &System) -> bool {
    let part = refine(&union_children(s, t));
    part.same_block(s.root().index(), t.root().index() + s.len())
}

/// Collapses each bisimilarity class to one node. The result is minimal: no
/// two distinct nodes are bisimilar.
pub fn quotient(s: &System) -> System {
    let part = refine_partition(s);
    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); part.block_count()];
    let mut seen = vec![false; part.block_count()];
    for x in s.nodes() {
        let b = part.block_of(x.index());
        if seen[b] {
            continue; // stability: any representative yields the same child blocks
        }
        seen[b] = true;
        let mut ch: Vec<NodeId> = s
            .children_unchecked(x)
            .iter()
            .map(|c| NodeId(part.block_of(c.index()) as u32))
            .collect();
        ch.sort_unstable();
        ch.dedup();
        children[b] = ch;
    }
    System::from_children(children, NodeId(part.block_of(s.root().index()) as u32))
}

/// Deterministic representative of the depicted set: the quotient with nodes
/// renumbered by an ordering that depends only on the graph's shape, never on
/// the input labelling. Two systems canonicalize to identical values iff they
/// are bisimilar.
pub fn canonicalize(s: &System) -> System {
    let min = quotient(s);
    let adj = single_children(&min);
    let n = adj.len();

    // Refine as above, but allocate block ids by sorting the (old block,
    // signature) keys instead of by node order. Ids stay label-independent
    // round by round; in a minimal system no two nodes are bisimilar, so the
    // fixpoint is discrete and the final ids are a canonical numbering.
    let mut block_of = vec![0usize; n];
    let mut block_count = 1;
    while block_count < n {
        let mut keyed: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut sig: Vec<usize> = adj[x].iter().map(|&c| block_of[c]).collect();
                sig.sort_unstable();
                sig.dedup();
                (block_of[x], sig)
            })
            .collect();
        let mut order: Vec<(usize, Vec<usize>)> = keyed.clone();
        order.sort();
        order.dedup();
        let count = order.len();
        if count == block_count {
            break;
        }
        let rank: HashMap<(usize, Vec<usize>), usize> = order
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        block_of = keyed.drain(..).map(|k| rank[&k]).collect();
        block_count = count;
    }
    debug_assert_eq!(block_count, n, "quotient left bisimilar nodes");

    let mut children: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for x in 0..n {
        let mut ch: Vec<NodeId> = adj[x].iter().map(|&c| NodeId(block_of[c] as u32)).collect();
        ch.sort_unstable();
        ch.dedup();
        children[block_of[x]] = ch;
    }
    System::from_children(children, NodeId(block_of[min.root().index()] as u32))
}

/// A verified system map: a function on nodes that maps the children of `x`
/// onto the children of its image.
#[derive(Debug, Clone)]
pub struct SystemMap {
    source: System,
    target: System,
    assignment: Vec<NodeId>,
}

impl SystemMap {
    pub fn new(source: System, target: System, assignment: Vec<NodeId>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::UnknownNode("assignment length mismatch".into()));
        }
        for x in source.nodes() {
            let image = assignment[x.index()];
            let mut mapped: Vec<NodeId> = source
                .children(x)?
                .iter()
                .map(|c| assignment[c.index()])
                .collect();
            mapped.sort_unstable();
            mapped.dedup();
            if mapped != target.children(image)? {
                return Err(Error::UnknownNode(format!(
                    "not a system map: children of {x} do not map onto children of {image}"
                )));
            }
        }
        Ok(SystemMap {
            source,
            target,
            assignment,
        })
    }

    pub fn source(&self) -> &System {
        &self.source
    }

    pub fn target(&self) -> &System {
        &self.target
    }

    pub fn apply(&self, x: NodeId) -> NodeId {
        self.assignment[x.index()]
    }
}
