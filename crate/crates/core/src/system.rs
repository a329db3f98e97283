//! Pointed directed graphs: the pictures of sets.
//!
//! A [`System`] is a finite directed graph with a distinguished root in which
//! every node is reachable from the root. Edges run parent to child and encode
//! membership: a child of `x` pictures a member of the set `x` pictures.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a node within one [`System`]. Ids are dense, `0..system.len()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// A pointed directed graph. Immutable after construction; children are
/// stored sorted and deduplicated, and every node is reachable from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct System {
    children: Vec<Vec<NodeId>>,
    root: NodeId,
}

impl System {
    /// Builds a system from `node_count` nodes (ids `0..node_count`), an edge
    /// list, and a root. Only the subgraph reachable from the root is kept;
    /// surviving nodes are renumbered in breadth-first discovery order, so the
    /// root is always node 0. Duplicate edges collapse.
    pub fn build(node_count: usize, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        if root >= node_count {
            return Err(Error::UnknownNode(format!("n{root}")));
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); node_count];
        for &(from, to) in edges {
            if from >= node_count {
                return Err(Error::UnknownNode(format!("n{from}")));
            }
            if to >= node_count {
                return Err(Error::UnknownNode(format!("n{to}")));
            }
            adj[from].push(to);
        }

        // BFS from the root; unreachable nodes are dropped.
        let mut renumber: Vec<Option<u32>> = vec![None; node_count];
        let mut order: Vec<usize> = Vec::new();
        let mut queue = VecDeque::new();
        renumber[root] = Some(0);
        order.push(root);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if renumber[y].is_none() {
                    renumber[y] = Some(order.len() as u32);
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }

        let mut children: Vec<Vec<NodeId>> = Vec::with_capacity(order.len());
        for &x in &order {
            let mut ch: Vec<NodeId> = adj[x]
                .iter()
                .map(|&y| NodeId(renumber[y].expect("reachable")))
                .collect();
            ch.sort_unstable();
            ch.dedup();
            children.push(ch);
        }
        Ok(System {
            children,
            root: NodeId(0),
        })
    }

    /// Assembles a system directly from per-node child lists. Internal
    /// constructor for the refinement and hyperset machinery; applies the
    /// same reachability restriction and renumbering as [`System::build`].
    pub(crate) fn from_children(children: Vec<Vec<NodeId>>, root: NodeId) -> Self {
        let edges: Vec<(usize, usize)> = children
            .iter()
            .enumerate()
            .flat_map(|(x, ch)| ch.iter().map(move |y| (x, y.index())))
            .collect();
        System::build(children.len(), &edges, root.index()).expect("child ids in range")
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        false // there is always at least the root
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.children.len() as u32).map(NodeId)
    }

    /// The set of children of `x`, sorted ascending.
    pub fn children(&self, x: NodeId) -> Result<&[NodeId]> {
        self.children
            .get(x.index())
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownNode(x.to_string()))
    }

    pub(crate) fn children_unchecked(&self, x: NodeId) -> &[NodeId] {
        &self.children[x.index()]
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.children
            .iter()
            .enumerate()
            .flat_map(|(x, ch)| ch.iter().map(move |&y| (NodeId(x as u32), y)))
    }

    /// True if no cycle is reachable from the root. Iterative three-color DFS.
    pub fn is_acyclic(&self) -> bool {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let mut mark = vec![Mark::White; self.len()];
        let mut stack: Vec<(usize, usize)> = vec![(self.root.index(), 0)];
        mark[self.root.index()] = Mark::Grey;
        while let Some(frame) = stack.last_mut() {
            let x = frame.0;
            if frame.1 < self.children[x].len() {
                let y = self.children[x][frame.1].index();
                frame.1 += 1;
                match mark[y] {
                    Mark::Grey => return false,
                    Mark::White => {
                        mark[y] = Mark::Grey;
                        stack.push((y, 0));
                    }
                    Mark::Black => {}
                }
            } else {
                mark[x] = Mark::Black;
                stack.pop();
            }
        }
        true
    }

    /// Re-roots the system at `x`, dropping whatever becomes unreachable.
    pub fn rerooted(&self, x: NodeId) -> Result<Self> {
        if x.index() >= self.len() {
            return Err(Error::UnknownNode(x.to_string()));
        }
        Ok(System::from_children(self.children.clone(), x))
    }

    /// Renders the system in the equation format, one line per node plus the
    /// `root` directive. Deterministic; `parse` of the output reproduces the
    /// system exactly.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for x in self.nodes() {
            let members: Vec<String> = self.children[x.index()]
                .iter()
                .map(|c| c.to_string())
                .collect();
            out.push_str(&format!("{} = {{{}}}\n", x, members.join(", ")));
        }
        out.push_str(&format!("root {}\n", self.root));
        out
    }

    /// Emits the graph in DOT format: nodes in id order (root drawn doubled),
    /// then edges in id order. Byte-deterministic for equal systems.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph system {\n");
        for x in self.nodes() {
            if x == self.root {
                out.push_str(&format!("  {} [shape=doublecircle];\n", x));
            } else {
                out.push_str(&format!("  {} [shape=circle];\n", x));
            }
        }
        for (x, y) in self.edges() {
            out.push_str(&format!("  {} -> {};\n", x, y));
        }
        out.push_str("}\n");
        out
    }
}

/// JSON interchange form of a system: named nodes, edge pairs, root name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemRepr {
    pub nodes: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub root: String,
}

impl SystemRepr {
    pub fn to_system(&self) -> Result<System> {
        let index_of = |name: &str| -> Result<usize> {
            self.nodes
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for [from, to] in &self.edges {
            edges.push((index_of(from)?, index_of(to)?));
        }
        System::build(self.nodes.len(), &edges, index_of(&self.root)?)
    }
}

impl From<&System> for SystemRepr {
    fn from(s: &System) -> Self {
        SystemRepr {
            nodes: s.nodes().map(|x| x.to_string()).collect(),
            edges: s
                .edges()
                .map(|(x, y)| [x.to_string(), y.to_string()])
                .collect(),
            root: s.root().to_string(),
        }
    }
}
