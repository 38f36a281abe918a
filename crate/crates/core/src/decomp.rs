//! Graph decompositions of counter machines.
//!
//! Three related structures drive the analyses:
//!
//! - [`scc_dag`]: the ordinary strongly-connected-component condensation of
//!   a machine's state graph (Tarjan), with components in topological order.
//!   Growth vectors are propagated along this DAG for purely demonic
//!   machines.
//! - [`demonic_decomposition`]: states of a two-player machine grouped by
//!   mutual reachability through adversarial (demonic) states only;
//!   controller states stay singletons. Unlike the SCC condensation this
//!   class graph may contain cycles through controller states.
//! - [`locking_decomposition`]: the acyclic unfolding used for games. A
//!   *lock* fixes, for some controller states, a single outgoing transition
//!   (making the state behave adversarially with that one move). Vertices
//!   are pairs (class of the lock-restricted machine, lock); adversarial
//!   vertices step along class edges under the same lock, controller
//!   vertices extend the lock with each possible choice. Every added lock
//!   shrinks the machine, so the unfolding is a DAG; its maximal paths
//!   have at most `|Q| + |controller states|` vertices.
//!
//! All orderings are deterministic: classes are sorted by their least
//! member, successors follow declaration order, and vertex identity is the
//! canonical (sorted class, sorted lock) encoding.

use std::collections::{HashMap, VecDeque};

use petgraph::graph::{DiGraph, NodeIndex};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::model::{CounterVass, Player};

/// The condensation of the state graph: components in topological order.
#[derive(Debug, Clone)]
pub struct SccDag {
    /// Sorted member states per component, components topologically ordered.
    pub components: Vec<Vec<usize>>,
    /// Component index of each state.
    pub component_of: Vec<usize>,
    /// Forward edges between distinct components (sorted, deduplicated).
    pub edges: Vec<Vec<usize>>,
    /// Components containing a start state.
    pub roots: Vec<usize>,
}

/// Computes the SCC condensation with Tarjan's algorithm.
pub fn scc_dag(vass: &CounterVass) -> SccDag {
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..vass.num_states()).map(|_| graph.add_node(())).collect();
    for t in &vass.transitions {
        graph.add_edge(nodes[t.src], nodes[t.dst], ());
    }
    // Tarjan yields components in reverse topological order.
    let mut components: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .rev()
        .map(|c| {
            let mut states: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            states.sort_unstable();
            states
        })
        .collect();
    let mut component_of = vec![0usize; vass.num_states()];
    for (i, c) in components.iter().enumerate() {
        for &s in c {
            component_of[s] = i;
        }
    }
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); components.len()];
    for t in &vass.transitions {
        let (a, b) = (component_of[t.src], component_of[t.dst]);
        if a != b && !edges[a].contains(&b) {
            edges[a].push(b);
        }
    }
    for adj in &mut edges {
        adj.sort_unstable();
    }
    let mut roots: Vec<usize> = vass.start_states().iter().map(|&s| component_of[s]).collect();
    roots.sort_unstable();
    roots.dedup();
    for c in &mut components {
        c.sort_unstable();
    }
    SccDag {
        components,
        component_of,
        edges,
        roots,
    }
}

/// The machine induced by a state subset: same counters, only internal
/// transitions. Returns the machine and the original index of each state.
pub fn induced_subvass(vass: &CounterVass, states: &[usize]) -> (CounterVass, Vec<usize>) {
    let mut index: HashMap<usize, usize> = HashMap::new();
    for (new, &old) in states.iter().enumerate() {
        index.insert(old, new);
    }
    let sub = CounterVass {
        counters: vass.counters.clone(),
        states: states.iter().map(|&s| vass.states[s].clone()).collect(),
        transitions: vass
            .transitions
            .iter()
            .filter(|t| index.contains_key(&t.src) && index.contains_key(&t.dst))
            .map(|t| crate::model::Transition {
                src: index[&t.src],
                update: t.update.clone(),
                dst: index[&t.dst],
            })
            .collect(),
        initial: None,
    };
    (sub, states.to_vec())
}

/// Classes of mutual reachability through adversarial states.
#[derive(Debug, Clone)]
pub struct DemonicDecomposition {
    /// Sorted member states; classes ordered by least member. Controller
    /// states are singletons.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Edges between distinct classes (sorted, deduplicated). May be cyclic
    /// through controller classes.
    pub edges: Vec<Vec<usize>>,
}

/// A lock: chosen transitions, at most one per controller state. The locked
/// state keeps only that transition and behaves adversarially.
pub type Lock = Vec<usize>;

/// Internal view of a machine under a lock.
struct LockedView<'a> {
    vass: &'a CounterVass,
    /// `locked_choice[s]` = the only allowed outgoing transition of `s`.
    locked_choice: HashMap<usize, usize>,
}

impl<'a> LockedView<'a> {
    fn new(vass: &'a CounterVass, lock: &Lock) -> Self {
        let mut locked_choice = HashMap::new();
        for &t in lock {
            let prev = locked_choice.insert(vass.transitions[t].src, t);
            assert!(prev.is_none(), "a lock fixes at most one choice per state");
        }
        LockedView {
            vass,
            locked_choice,
        }
    }

    fn allows(&self, t: usize) -> bool {
        match self.locked_choice.get(&self.vass.transitions[t].src) {
            Some(&only) => only == t,
            None => true,
        }
    }

    fn is_demonic(&self, state: usize) -> bool {
        self.vass.states[state].player == Player::Demonic
            || self.locked_choice.contains_key(&state)
    }
}

fn decompose_view(view: &LockedView<'_>) -> DemonicDecomposition {
    let vass = view.vass;
    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..vass.num_states()).map(|_| graph.add_node(())).collect();
    for (i, t) in vass.transitions.iter().enumerate() {
        if view.allows(i) && view.is_demonic(t.src) && view.is_demonic(t.dst) {
            graph.add_edge(nodes[t.src], nodes[t.dst], ());
        }
    }
    let mut classes: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut states: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
            states.sort_unstable();
            states
        })
        .collect();
    classes.sort_by_key(|c| c[0]);
    let mut class_of = vec![0usize; vass.num_states()];
    for (i, c) in classes.iter().enumerate() {
        for &s in c {
            class_of[s] = i;
        }
    }
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    for (i, t) in vass.transitions.iter().enumerate() {
        if !view.allows(i) {
            continue;
        }
        let (a, b) = (class_of[t.src], class_of[t.dst]);
        if a != b && !edges[a].contains(&b) {
            edges[a].push(b);
        }
    }
    for adj in &mut edges {
        adj.sort_unstable();
    }
    DemonicDecomposition {
        classes,
        class_of,
        edges,
    }
}

/// Computes the demonic decomposition of the machine itself (empty lock).
pub fn demonic_decomposition(vass: &CounterVass) -> DemonicDecomposition {
    decompose_view(&LockedView::new(vass, &Vec::new()))
}

/// A vertex of the locking unfolding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LockVertex {
    /// Sorted states of the class in the lock-restricted machine.
    pub class: Vec<usize>,
    /// Sorted locked transition indices.
    pub lock: Lock,
    /// True iff the vertex is a controller choice point (a single, unlocked
    /// controller state).
    pub angelic: bool,
}

/// The acyclic locking unfolding of a two-player machine.
#[derive(Debug, Clone)]
pub struct LockingDag {
    pub vertices: Vec<LockVertex>,
    /// Successor lists (sorted, deduplicated).
    pub edges: Vec<Vec<usize>>,
    /// The empty-lock vertices, one per class of the unrestricted machine.
    pub roots: Vec<usize>,
}

/// Decomposition failure: the unfolding exceeded the vertex budget.
#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("locking unfolding exceeded the budget of {budget} vertices")]
    BudgetExceeded { budget: usize },
}

/// Builds the locking unfolding breadth-first. Vertices are deduplicated by
/// their canonical (class, lock) encoding; `budget` bounds the vertex count.
pub fn locking_decomposition(
    vass: &CounterVass,
    budget: usize,
) -> Result<LockingDag, DecompError> {
    let mut decomp_cache: HashMap<Lock, DemonicDecomposition> = HashMap::new();
    let mut vertex_index: HashMap<(Vec<usize>, Lock), usize> = HashMap::new();
    let mut vertices: Vec<LockVertex> = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let mut intern = |class: Vec<usize>,
                      lock: Lock,
                      vass: &CounterVass,
                      vertices: &mut Vec<LockVertex>,
                      edges: &mut Vec<Vec<usize>>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, DecompError> {
        if let Some(&at) = vertex_index.get(&(class.clone(), lock.clone())) {
            return Ok(at);
        }
        if vertices.len() >= budget {
            return Err(DecompError::BudgetExceeded { budget });
        }
        let view = LockedView::new(vass, &lock);
        let angelic = class.len() == 1 && !view.is_demonic(class[0]);
        let at = vertices.len();
        vertex_index.insert((class.clone(), lock.clone()), at);
        vertices.push(LockVertex {
            class,
            lock,
            angelic,
        });
        edges.push(Vec::new());
        queue.push_back(at);
        Ok(at)
    };

    let base = decompose_view(&LockedView::new(vass, &Vec::new()));
    let mut roots = Vec::new();
    for class in base.classes.clone() {
        let at = intern(
            class,
            Vec::new(),
            vass,
            &mut vertices,
            &mut edges,
            &mut queue,
        )?;
        roots.push(at);
    }
    decomp_cache.insert(Vec::new(), base);

    while let Some(at) = queue.pop_front() {
        let vertex = vertices[at].clone();
        let mut successors = Vec::new();
        if vertex.angelic {
            let p = vertex.class[0];
            for (i, t) in vass.transitions.iter().enumerate() {
                if t.src != p {
                    continue;
                }
                let mut lock = vertex.lock.clone();
                let pos = lock.binary_search(&i).unwrap_err();
                lock.insert(pos, i);
                let decomp = decomp_cache
                    .entry(lock.clone())
                    .or_insert_with(|| decompose_view(&LockedView::new(vass, &lock)));
                let class = decomp.classes[decomp.class_of[t.dst]].clone();
                successors.push(intern(
                    class,
                    lock,
                    vass,
                    &mut vertices,
                    &mut edges,
                    &mut queue,
                )?);
            }
        } else {
            let decomp = decomp_cache
                .entry(vertex.lock.clone())
                .or_insert_with(|| decompose_view(&LockedView::new(vass, &vertex.lock)));
            let here = decomp.class_of[vertex.class[0]];
            for &next in &decomp.edges[here] {
                let class = decomp.classes[next].clone();
                successors.push(intern(
                    class,
                    vertex.lock.clone(),
                    vass,
                    &mut vertices,
                    &mut edges,
                    &mut queue,
                )?);
            }
        }
        successors.sort_unstable();
        successors.dedup();
        edges[at] = successors;
    }

    Ok(LockingDag {
        vertices,
        edges,
        roots,
    })
}

impl LockingDag {
    /// Topological order of the vertices; `None` if a cycle exists (which
    /// would indicate a construction bug — the unfolding is acyclic).
    pub fn toposort(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.vertices.len()];
        for adj in &self.edges {
            for &v in adj {
                indegree[v] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..self.vertices.len())
            .filter(|&v| indegree[v] == 0)
            .collect();
        let mut order = Vec::new();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.edges[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == self.vertices.len()).then_some(order)
    }

    /// Number of maximal root-to-leaf paths, summed over all roots.
    pub fn path_degree(&self) -> BigUint {
        let mut memo: HashMap<usize, BigUint> = HashMap::new();
        fn count(dag: &LockingDag, v: usize, memo: &mut HashMap<usize, BigUint>) -> BigUint {
            if let Some(c) = memo.get(&v) {
                return c.clone();
            }
            let c = if dag.edges[v].is_empty() {
                BigUint::one()
            } else {
                let mut sum = BigUint::zero();
                for &w in &dag.edges[v] {
                    sum += count(dag, w, memo);
                }
                sum
            };
            memo.insert(v, c.clone());
            c
        }
        let mut total = BigUint::zero();
        for &r in &self.roots {
            total += count(self, r, &mut memo);
        }
        total
    }

    /// Enumerates maximal paths from all roots, up to `limit`; the flag says
    /// whether the enumeration was truncated.
    pub fn enumerate_root_paths(&self, limit: usize) -> (Vec<Vec<usize>>, bool) {
        let mut paths = Vec::new();
        let mut truncated = false;
        fn walk(
            dag: &LockingDag,
            v: usize,
            prefix: &mut Vec<usize>,
            paths: &mut Vec<Vec<usize>>,
            limit: usize,
            truncated: &mut bool,
        ) {
            if *truncated {
                return;
            }
            prefix.push(v);
            if dag.edges[v].is_empty() {
                if paths.len() >= limit {
                    *truncated = true;
                } else {
                    paths.push(prefix.clone());
                }
            } else {
                for &w in &dag.edges[v] {
                    walk(dag, w, prefix, paths, limit, truncated);
                }
            }
            prefix.pop();
        }
        for &r in &self.roots {
            walk(self, r, &mut Vec::new(), &mut paths, limit, &mut truncated);
        }
        (paths, truncated)
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// DOT rendering of the SCC condensation.
pub fn scc_dag_to_dot(vass: &CounterVass, dag: &SccDag) -> String {
    let mut out = String::from("digraph scc {\n  rankdir=LR;\n");
    for (i, c) in dag.components.iter().enumerate() {
        let label: Vec<&str> = c.iter().map(|&s| vass.states[s].name.as_str()).collect();
        let shape = if dag.roots.contains(&i) {
            ", penwidth=2"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label=\"{}\"{shape}];\n",
            dot_escape(&label.join(","))
        ));
    }
    for (a, adj) in dag.edges.iter().enumerate() {
        for &b in adj {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the demonic decomposition (controller classes drawn as
/// diamonds).
pub fn demonic_to_dot(vass: &CounterVass, decomp: &DemonicDecomposition) -> String {
    let mut out = String::from("digraph demonic {\n  rankdir=LR;\n");
    for (i, c) in decomp.classes.iter().enumerate() {
        let label: Vec<&str> = c.iter().map(|&s| vass.states[s].name.as_str()).collect();
        let angelic = c.len() == 1 && vass.states[c[0]].player == Player::Angelic;
        let shape = if angelic { ", shape=diamond" } else { "" };
        out.push_str(&format!(
            "  n{i} [label=\"{}\"{shape}];\n",
            dot_escape(&label.join(","))
        ));
    }
    for (a, adj) in decomp.edges.iter().enumerate() {
        for &b in adj {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the locking unfolding. Vertex labels show the class and
/// the lock; controller vertices are diamonds.
pub fn locking_to_dot(vass: &CounterVass, dag: &LockingDag) -> String {
    let mut out = String::from("digraph locking {\n  rankdir=LR;\n");
    for (i, v) in dag.vertices.iter().enumerate() {
        let states: Vec<&str> = v
            .class
            .iter()
            .map(|&s| vass.states[s].name.as_str())
            .collect();
        let lock: Vec<String> = v.lock.iter().map(|t| format!("t{t}")).collect();
        let shape = if v.angelic { ", shape=diamond" } else { "" };
        let root = if dag.roots.contains(&i) {
            ", penwidth=2"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{i} [label=\"{{{}}} L={{{}}}\"{shape}{root}];\n",
            dot_escape(&states.join(",")),
            lock.join(",")
        ));
    }
    for (a, adj) in dag.edges.iter().enumerate() {
        for &b in adj {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
    }
    out.push_str("}\n");
    out
}
