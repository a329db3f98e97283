//! The set-theoretic API over canonical pictures.
//!
//! A [`HyperSet`] is a handle to the canonical (bisimulation-minimal,
//! deterministically numbered) picture of a set. Canonical pictures are
//! interned in a global table, so equality is pointer identity after
//! construction.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use crate::bisim::canonicalize;
use crate::equations::Equations;
use crate::error::{Error, Result};
use crate::system::{NodeId, System};

fn intern_table() -> &'static Mutex<HashMap<System, Arc<System>>> {
    static TABLE: OnceLock<Mutex<HashMap<System, Arc<System>>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn intern(canonical: System) -> Arc<System> {
    let mut table = intern_table().lock().expect("intern table poisoned");
    if let Some(existing) = table.get(&canonical) {
        return Arc::clone(existing);
    }
    let arc = Arc::new(canonical);
    table.insert((*arc).clone(), Arc::clone(&arc));
    arc
}

/// The set an arbitrary picture depicts. Immutable value; cheap to clone.
#[derive(Clone)]
pub struct HyperSet(Arc<System>);

impl PartialEq for HyperSet {
    fn eq(&self, other: &Self) -> bool {
        // Interning makes pointer identity complete; the structural check is
        // the fallback for pictures from different intern generations.
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for HyperSet {}

impl Hash for HyperSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl fmt::Debug for HyperSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperSet({self})")
    }
}

impl fmt::Display for HyperSet {
    /// Wellfounded sets print as nested braces; cyclic ones as their
    /// canonical equations on one line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_wellfounded() {
            f.write_str(&braces(&self.0, self.0.root()))
        } else {
            let eqs: Vec<String> = self
                .0
                .nodes()
                .map(|x| {
                    let ms: Vec<String> = self.0.children_unchecked(x)
                        .iter()
                        .map(|c| c.to_string())
                        .collect();
                    format!("{x} = {{{}}}", ms.join(", "))
                })
                .collect();
            write!(f, "{} where {}", self.0.root(), eqs.join("; "))
        }
    }
}

fn braces(s: &System, x: NodeId) -> String {
    let inner: Vec<String> = s
        .children_unchecked(x)
        .iter()
        .map(|&c| braces(s, c))
        .collect();
    format!("{{{}}}", inner.join(", "))
}

/// The unique set a system depicts: its canonical form, interned.
pub fn decorate(s: &System) -> HyperSet {
    HyperSet(intern(canonicalize(s)))
}

/// Bottom-up collapse of an acyclic picture: the value of a node is the set
/// of values of its children. Independent route for checking [`decorate`] on
/// the wellfounded fragment.
pub fn mostowski_collapse(s: &System) -> Result<HyperSet> {
    if !s.is_acyclic() {
        return Err(Error::CyclicInput);
    }
    let mut memo: HashMap<NodeId, HyperSet> = HashMap::new();
    // post-order over the DAG
    let mut stack: Vec<(NodeId, bool)> = vec![(s.root(), false)];
    while let Some((x, expanded)) = stack.pop() {
        if memo.contains_key(&x) {
            continue;
        }
        if expanded {
            let members: Vec<HyperSet> = s
                .children_unchecked(x)
                .iter()
                .map(|c| memo[c].clone())
                .collect();
            memo.insert(x, HyperSet::from_members(&members));
        } else {
            stack.push((x, true));
            for &c in s.children_unchecked(x) {
                stack.push((c, false));
            }
        }
    }
    Ok(memo.remove(&s.root()).expect("root collapsed"))
}

/// Solves an equation system: every declared variable, taken as root of the
/// shared graph, denotes one set. Any `root` directive is ignored.
pub fn solve_equations(text: &str) -> Result<Vec<(String, HyperSet)>> {
    let eqs = Equations::parse(text)?;
    eqs.names()
        .iter()
        .map(|name| Ok((name.clone(), decorate(&eqs.system_for(name)?))))
        .collect()
}

impl HyperSet {
    /// The canonical picture.
    pub fn picture(&self) -> &System {
        &self.0
    }

    pub fn empty() -> Self {
        HyperSet(intern(
            System::build(1, &[], 0).expect("one-node system"),
        ))
    }

    /// Builds the set with exactly the given members (duplicates collapse).
    pub fn from_members(members: &[HyperSet]) -> Self {
        // Fresh root over the disjoint union of the member pictures.
        let mut children: Vec<Vec<NodeId>> = vec![Vec::new()];
        for m in members {
            let offset = children.len() as u32;
            children[0].push(NodeId(offset + m.0.root().0));
            for x in m.0.nodes() {
                children.push(
                    m.0.children_unchecked(x)
                        .iter()
                        .map(|c| NodeId(offset + c.0))
                        .collect(),
                );
            }
        }
        let system = System::from_children(children, NodeId(0));
        HyperSet(intern(canonicalize(&system)))
    }

    pub fn singleton(a: &HyperSet) -> Self {
        HyperSet::from_members(std::slice::from_ref(a))
    }

    pub fn pair(a: &HyperSet, b: &HyperSet) -> Self {
        HyperSet::from_members(&[a.clone(), b.clone()])
    }

    /// `b ∪ {a}`.
    pub fn insert(a: &HyperSet, b: &HyperSet) -> Self {
        let mut ms = b.members();
        ms.push(a.clone());
        HyperSet::from_members(&ms)
    }

    pub fn union(a: &HyperSet, b: &HyperSet) -> Self {
        let mut ms = a.members();
        ms.extend(b.members());
        HyperSet::from_members(&ms)
    }

    /// The von Neumann natural `n`.
    pub fn von_neumann(n: usize) -> Self {
        let mut v = HyperSet::empty();
        for _ in 0..n {
            v = HyperSet::insert(&v, &v);
        }
        v
    }

    /// Ω, the unique set with Ω = {Ω}.
    pub fn omega() -> Self {
        decorate(&System::build(1, &[(0, 0)], 0).expect("self-loop"))
    }

    /// The members, pairwise distinct, in canonical node order.
    pub fn members(&self) -> Vec<HyperSet> {
        self.0
            .children_unchecked(self.0.root())
            .iter()
            .map(|&c| {
                let rerooted = self.0.rerooted(c).expect("child in range");
                decorate(&rerooted)
            })
            .collect()
    }

    pub fn is_member(&self, of: &HyperSet) -> bool {
        of.members().iter().any(|m| m == self)
    }

    pub fn cardinality(&self) -> usize {
        self.0.children_unchecked(self.0.root()).len()
    }

    /// True iff no infinite descending membership chain exists, i.e. the
    /// canonical picture is acyclic.
    pub fn is_wellfounded(&self) -> bool {
        self.0.is_acyclic()
    }

    /// The rank-`rank` unfolding: stage-`rank` approximation of the
    /// membership structure, with rank 0 fixed at the empty set. Always
    /// wellfounded.
    pub fn unfold(&self, rank: usize) -> HyperSet {
        let mut memo: HashMap<(NodeId, usize), HyperSet> = HashMap::new();
        self.unfold_node(self.0.root(), rank, &mut memo)
    }

    fn unfold_node(
        &self,
        x: NodeId,
        rank: usize,
        memo: &mut HashMap<(NodeId, usize), HyperSet>,
    ) -> HyperSet {
        if rank == 0 {
            return HyperSet::empty();
        }
        if let Some(v) = memo.get(&(x, rank)) {
            return v.clone();
        }
        let members: Vec<HyperSet> = self
            .0
            .children_unchecked(x)
            .iter()
            .map(|&c| self.unfold_node(c, rank - 1, memo))
            .collect();
        let v = HyperSet::from_members(&members);
        memo.insert((x, rank), v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equations::parse_system;

    fn sys(text: &str) -> System {
        parse_system(text).unwrap()
    }

    #[test]
    fn decorate_basics() {
        assert_eq!(decorate(&sys("x = {} root x")), HyperSet::empty());
        let escher = sys("s0={s3} s1={s0} s2={s1} s3={s2} root s3");
        assert_eq!(decorate(&escher), HyperSet::omega());
    }

    #[test]
    fn decorate_von_neumann_two() {
        let s = sys("n2 = {n1, n0} n1 = {n0} n0 = {} root n2");
        assert_eq!(decorate(&s), HyperSet::von_neumann(2));
        assert_eq!(decorate(&s), mostowski_collapse(&s).unwrap());
    }

    #[test]
    fn collapse_childless_and_chain() {
        assert_eq!(
            mostowski_collapse(&sys("x = {} root x")).unwrap(),
            HyperSet::empty()
        );
        assert_eq!(
            mostowski_collapse(&sys("a = {b} b = {} root a")).unwrap(),
            HyperSet::singleton(&HyperSet::empty())
        );
    }

    #[test]
    fn collapse_diamond_merges_members() {
        // b and c both collapse to {∅}, so a = {{∅}}
        let s = sys("a = {b, c} b = {d} c = {d} d = {} root a");
        let got = mostowski_collapse(&s).unwrap();
        let expected = HyperSet::singleton(&HyperSet::singleton(&HyperSet::empty()));
        assert_eq!(got, expected);
        assert_eq!(got.cardinality(), 1);
    }

    #[test]
    fn collapse_rejects_cycles() {
        assert!(matches!(
            mostowski_collapse(&sys("x = {x} root x")),
            Err(Error::CyclicInput)
        ));
    }

    #[test]
    fn equality_across_pictures() {
        let a = decorate(&sys("x = {x} root x"));
        let b = decorate(&sys("p = {q} q = {p} root p"));
        assert_eq!(a, b);
        let with_empty = HyperSet::from_members(&[HyperSet::omega(), HyperSet::empty()]);
        assert_ne!(a, with_empty);
    }

    #[test]
    fn members_of_omega_and_naturals() {
        assert!(HyperSet::empty().members().is_empty());
        assert_eq!(HyperSet::omega().members(), vec![HyperSet::omega()]);
        let vn2 = HyperSet::von_neumann(2);
        assert_eq!(
            vn2.members(),
            vec![HyperSet::empty(), HyperSet::von_neumann(1)]
        );
    }

    #[test]
    fn membership() {
        let omega = HyperSet::omega();
        assert!(omega.is_member(&omega));
        assert!(!HyperSet::empty().is_member(&omega));
        assert!(HyperSet::von_neumann(1).is_member(&HyperSet::von_neumann(2)));
    }

    #[test]
    fn wellfoundedness() {
        assert!(HyperSet::empty().is_wellfounded());
        assert!(HyperSet::von_neumann(4).is_wellfounded());
        assert!(!HyperSet::omega().is_wellfounded());
        // wellfounded node above a cycle is still non-wellfounded
        let above = HyperSet::singleton(&HyperSet::omega());
        assert!(!above.is_wellfounded());
    }

    #[test]
    fn solve_defining_equation_of_omega() {
        let solved = solve_equations("x = {x}").unwrap();
        assert_eq!(solved[0].1, HyperSet::omega());

        let solved = solve_equations("x = {y}; y = {x}").unwrap();
        assert_eq!(solved[0].1, HyperSet::omega());
        assert_eq!(solved[1].1, HyperSet::omega());
    }

    #[test]
    fn solve_von_neumann_prefix() {
        let solved = solve_equations("n0={}; n1={n0}; n2={n0,n1}").unwrap();
        assert_eq!(solved[0].1, HyperSet::von_neumann(0));
        assert_eq!(solved[1].1, HyperSet::von_neumann(1));
        assert_eq!(solved[2].1, HyperSet::von_neumann(2));
    }

    #[test]
    fn unfolding() {
        let omega = HyperSet::omega();
        assert_eq!(omega.unfold(0), HyperSet::empty());
        // Ω¹ = {∅}, Ω² = {{∅}}
        assert_eq!(omega.unfold(1), HyperSet::singleton(&HyperSet::empty()));
        assert_eq!(
            omega.unfold(2),
            HyperSet::singleton(&HyperSet::singleton(&HyperSet::empty()))
        );
        for k in 0..6 {
            assert_eq!(HyperSet::empty().unfold(k), HyperSet::empty());
            assert!(omega.unfold(k).is_wellfounded());
        }
    }

    #[test]
    fn constructors() {
        let e = HyperSet::empty();
        assert_eq!(HyperSet::pair(&e, &e), HyperSet::singleton(&e));
        assert_eq!(HyperSet::von_neumann(3).cardinality(), 3);
        let mixed = HyperSet::union(
            &HyperSet::von_neumann(1),
            &HyperSet::singleton(&HyperSet::omega()),
        );
        assert_eq!(mixed.cardinality(), 2);
        assert!(!mixed.is_wellfounded());
        // insert is idempotent
        let b = HyperSet::von_neumann(2);
        let a = HyperSet::omega();
        assert_eq!(
            HyperSet::insert(&a, &HyperSet::insert(&a, &b)),
            HyperSet::insert(&a, &b)
        );
    }

    #[test]
    fn singleton_of_omega_is_omega() {
        let omega = HyperSet::omega();
        assert_eq!(HyperSet::singleton(&omega), omega);
    }

    #[test]
    fn display_forms() {
        assert_eq!(HyperSet::empty().to_string(), "{}");
        assert_eq!(HyperSet::von_neumann(1).to_string(), "{{}}");
        assert!(HyperSet::omega().to_string().contains("where"));
    }
}
