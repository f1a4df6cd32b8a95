//! Finite directed graphs as rank-1 shift systems, their eventually periodic
//! path points, k-fold products, and the graph-level density conditions.
//!
//! Convention: an edge `e` runs from its origin `o(e)` to its terminus
//! `t(e)`. A path word `e_1 … e_n` requires `o(e_i) = t(e_{i+1})`, so the
//! word is read with its terminus `t(e_1)` first; infinite paths extend to
//! the right and the shift drops the leading edge.

use crate::angle::{AngleError, ExactAngle};
use crate::lattice::Sublattice;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge name `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("vertices {0:?} have no incoming edge, so they emit no infinite path")]
    NotTerminusSurjective(Vec<String>),
    #[error("edge word is not composable at position {0}")]
    NotComposable(usize),
    #[error("cycle word must be a loop: origin and terminus differ")]
    NotClosed,
    #[error("prefix origin and cycle vertex differ")]
    PrefixDetached,
    #[error("label missing for edge `{0}`")]
    MissingLabel(String),
    #[error("paths have different origins")]
    OriginMismatch,
    #[error("component {0} is not minimal; the periodicity group is only defined for minimal systems")]
    NotMinimal(usize),
    #[error("label state enumeration exceeded the safety cap")]
    EnumerationOverflow,
    #[error(transparent)]
    Angle(#[from] AngleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub origin: usize,
    pub terminus: usize,
}

/// A finite directed graph whose terminus map is surjective, so every vertex
/// is the head of at least one infinite path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    incoming: Vec<Vec<usize>>, // edges e with t(e) = v
    outgoing: Vec<Vec<usize>>, // edges e with o(e) = v
}

impl Graph {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>, // (name, origin, terminus)
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut names = HashSet::new();
        let mut parsed = Vec::with_capacity(edges.len());
        for (name, o, t) in edges {
            if !names.insert(name.clone()) {
                return Err(GraphError::DuplicateEdge(name));
            }
            let origin = *index.get(&o).ok_or_else(|| GraphError::UnknownVertex {
                edge: name.clone(),
                vertex: o.clone(),
            })?;
            let terminus = *index.get(&t).ok_or_else(|| GraphError::UnknownVertex {
                edge: name.clone(),
                vertex: t.clone(),
            })?;
            parsed.push(Edge {
                name,
                origin,
                terminus,
            });
        }
        let mut incoming = vec![Vec::new(); vertices.len()];
        let mut outgoing = vec![Vec::new(); vertices.len()];
        for (i, e) in parsed.iter().enumerate() {
            incoming[e.terminus].push(i);
            outgoing[e.origin].push(i);
        }
        let orphans: Vec<String> = vertices
            .iter()
            .enumerate()
            .filter(|(v, _)| incoming[*v].is_empty())
            .map(|(_, name)| name.clone())
            .collect();
        if !orphans.is_empty() {
            return Err(GraphError::NotTerminusSurjective(orphans));
        }
        Ok(Self {
            vertices,
            edges: parsed,
            incoming,
            outgoing,
        })
    }

    /// The one-vertex one-loop graph; its shift system is a single fixed
    /// point whose groupoid is the integers.
    pub fn unit_loop() -> Self {
        Self::new(
            vec!["*".into()],
            vec![("z".into(), "*".into(), "*".into())],
        )
        .expect("unit loop is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_id(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    /// Vertices reachable from `v` along edges in the origin→terminus
    /// direction, including `v`.
    pub fn reachable_from(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        while let Some(u) = queue.pop_front() {
            for &e in &self.outgoing[u] {
                let w = self.edges[e].terminus;
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices from which `v` is reachable, including `v`.
    pub fn coreachable_to(&self, v: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([v]);
        seen.insert(v);
        while let Some(u) = queue.pop_front() {
            for &e in &self.incoming[u] {
                let w = self.edges[e].origin;
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Strongly connected components (Kosaraju), as vertex sets.
    pub fn sccs(&self) -> Vec<BTreeSet<usize>> {
        let all: BTreeSet<usize> = (0..self.vertex_count()).collect();
        self.sccs_induced(&all)
    }

    /// Strongly connected components of the subgraph induced on `vertices`.
    pub fn sccs_induced(&self, vertices: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
        let n = self.vertex_count();
        let usable = |e: &Edge| vertices.contains(&e.origin) && vertices.contains(&e.terminus);
        let mut order = Vec::with_capacity(vertices.len());
        let mut seen = vec![false; n];
        for &start in vertices {
            if seen[start] {
                continue;
            }
            // Iterative post-order DFS.
            let mut stack = vec![(start, 0usize)];
            seen[start] = true;
            while let Some(&mut (u, ref mut i)) = stack.last_mut() {
                if *i < self.outgoing[u].len() {
                    let e = self.outgoing[u][*i];
                    *i += 1;
                    let edge = &self.edges[e];
                    if !usable(edge) {
                        continue;
                    }
                    let w = edge.terminus;
                    if !seen[w] {
                        seen[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    order.push(u);
                    stack.pop();
                }
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<BTreeSet<usize>> = Vec::new();
        for &start in order.iter().rev() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut set = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            comp[start] = id;
            while let Some(u) = queue.pop_front() {
                set.insert(u);
                for &e in &self.incoming[u] {
                    let edge = &self.edges[e];
                    if !usable(edge) {
                        continue;
                    }
                    let w = edge.origin;
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            comps.push(set);
        }
        comps
    }

    /// Vertices lying on at least one cycle.
    pub fn cycle_vertices(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for scc in self.sccs() {
            if scc.len() > 1 {
                out.extend(scc.iter().copied());
            } else {
                let v = *scc.iter().next().unwrap();
                if self.outgoing[v].iter().any(|&e| self.edges[e].terminus == v) {
                    out.insert(v);
                }
            }
        }
        out
    }

    /// Some directed cycle through `v`, as an edge word (terminus-first), if
    /// one exists.
    pub fn cycle_through(&self, v: usize) -> Option<Vec<usize>> {
        // BFS from v back to v along origin→terminus steps of length >= 1.
        let mut parent: HashMap<usize, (usize, usize)> = HashMap::new(); // vertex -> (prev vertex, edge)
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.outgoing[u] {
                let w = self.edges[e].terminus;
                if w == v {
                    // Close with e, then walk parents back to the start; the
                    // collected order is already terminus-first.
                    let mut walk = vec![e];
                    let mut cur = u;
                    while cur != v {
                        let (prev, pe) = parent[&cur];
                        walk.push(pe);
                        cur = prev;
                    }
                    return Some(walk);
                }
                if !parent.contains_key(&w) {
                    parent.insert(w, (u, e));
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// A finite composable edge word; `origin` disambiguates the empty word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathWord {
    origin: usize,
    edges: Vec<usize>,
}

impl PathWord {
    pub fn empty_at(v: usize) -> Self {
        Self {
            origin: v,
            edges: vec![],
        }
    }

    pub fn new(graph: &Graph, edges: Vec<usize>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NotComposable(0));
        }
        for i in 0..edges.len() - 1 {
            if graph.edge(edges[i]).origin != graph.edge(edges[i + 1]).terminus {
                return Err(GraphError::NotComposable(i));
            }
        }
        let origin = graph.edge(*edges.last().unwrap()).origin;
        Ok(Self { origin, edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn terminus(&self, graph: &Graph) -> usize {
        self.edges
            .first()
            .map_or(self.origin, |&e| graph.edge(e).terminus)
    }
}

/// An eventually periodic infinite path in reduced canonical form: the cycle
/// is primitive and the prefix does not end with the cycle's last edge, so
/// each point has exactly one representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpPoint {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

fn primitive_root(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    for p in 1..=n {
        if n % p != 0 {
            continue;
        }
        if cycle.chunks(p).all(|chunk| chunk == &cycle[..p]) {
            return cycle[..p].to_vec();
        }
    }
    cycle.to_vec()
}

impl EpPoint {
    pub fn new(graph: &Graph, prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, GraphError> {
        if cycle.is_empty() {
            return Err(GraphError::NotClosed);
        }
        let cycle_word = PathWord::new(graph, cycle.clone())?;
        if cycle_word.origin() != cycle_word.terminus(graph) {
            return Err(GraphError::NotClosed);
        }
        if !prefix.is_empty() {
            let prefix_word = PathWord::new(graph, prefix.clone())?;
            if prefix_word.origin() != cycle_word.terminus(graph) {
                return Err(GraphError::PrefixDetached);
            }
        }
        Ok(Self::canonical(prefix, cycle))
    }

    fn canonical(mut prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        let mut cycle = primitive_root(&cycle);
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Self { prefix, cycle }
    }

    pub fn from_cycle(graph: &Graph, cycle: Vec<usize>) -> Result<Self, GraphError> {
        Self::new(graph, vec![], cycle)
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// Edge at position `i` (0-based) of the infinite edge sequence.
    pub fn edge_at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Head vertex: the terminus of the first edge.
    pub fn head(&self, graph: &Graph) -> usize {
        graph.edge(self.edge_at(0)).terminus
    }

    /// Vertex at depth `i`: head of the `i`-fold shift.
    pub fn vertex_at(&self, graph: &Graph, i: usize) -> usize {
        graph.edge(self.edge_at(i)).terminus
    }

    /// The first `n` edges as a word (empty word at the head for `n = 0`).
    pub fn initial_word(&self, graph: &Graph, n: usize) -> PathWord {
        if n == 0 {
            return PathWord::empty_at(self.head(graph));
        }
        let edges: Vec<usize> = (0..n).map(|i| self.edge_at(i)).collect();
        PathWord::new(graph, edges).expect("initial segment is composable")
    }

    /// Drop `n` leading edges and renormalize.
    pub fn shift(&self, n: usize) -> EpPoint {
        if n <= self.prefix.len() {
            Self::canonical(self.prefix[n..].to_vec(), self.cycle.clone())
        } else {
            let r = (n - self.prefix.len()) % self.cycle.len();
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(r);
            Self::canonical(vec![], cycle)
        }
    }

    /// Prepend a word `μ` (so the new point is `μ·x`); requires
    /// `o(μ) = head(x)`.
    pub fn prepend(&self, graph: &Graph, word: &PathWord) -> Result<EpPoint, GraphError> {
        if word.origin() != self.head(graph) {
            return Err(GraphError::OriginMismatch);
        }
        let mut prefix = word.edges().to_vec();
        prefix.extend_from_slice(&self.prefix);
        Ok(Self::canonical(prefix, self.cycle.clone()))
    }

    pub fn describe(&self, graph: &Graph) -> String {
        let pfx: Vec<&str> = self
            .prefix
            .iter()
            .map(|&e| graph.edge(e).name.as_str())
            .collect();
        let cyc: Vec<&str> = self
            .cycle
            .iter()
            .map(|&e| graph.edge(e).name.as_str())
            .collect();
        format!("{}({})^inf", pfx.join(""), cyc.join(""))
    }
}

/// Total edge labeling with values in the circle group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabeling {
    labels: Vec<ExactAngle>,
}

impl EdgeLabeling {
    pub fn new(graph: &Graph, labels: Vec<ExactAngle>) -> Result<Self, GraphError> {
        if labels.len() != graph.edge_count() {
            let missing = graph
                .edges
                .get(labels.len())
                .map(|e| e.name.clone())
                .unwrap_or_default();
            return Err(GraphError::MissingLabel(missing));
        }
        Ok(Self { labels })
    }

    pub fn trivial(graph: &Graph) -> Self {
        Self {
            labels: vec![ExactAngle::zero(); graph.edge_count()],
        }
    }

    pub fn label(&self, e: usize) -> &ExactAngle {
        &self.labels[e]
    }
}

/// `Σ ℓ(e_i)` over a word; the empty word has label 0.
pub fn label_sum(labeling: &EdgeLabeling, word: &PathWord) -> ExactAngle {
    let mut acc = ExactAngle::zero();
    for &e in word.edges() {
        acc = acc
            .checked_add(labeling.label(e))
            .expect("labels share one basis");
    }
    acc
}

/// `ℓ(μ) − ℓ(ν)` for words with a common origin; the value of the label
/// 1-cocycle on `(μx, |μ|−|ν|, νx)`.
pub fn h_tilde(
    labeling: &EdgeLabeling,
    mu: &PathWord,
    nu: &PathWord,
) -> Result<ExactAngle, GraphError> {
    if mu.origin() != nu.origin() {
        return Err(GraphError::OriginMismatch);
    }
    Ok(label_sum(labeling, mu).checked_sub(&label_sum(labeling, nu))?)
}

/// Minimality of the shift on the infinite path space: every vertex is
/// downstream of every cycle vertex.
pub fn is_minimal(graph: &Graph) -> bool {
    minimality_witness(graph).is_none()
}

/// A failing pair `(cycle vertex u, vertex w not reachable from u)`, if any.
pub fn minimality_witness(graph: &Graph) -> Option<(usize, usize)> {
    for u in graph.cycle_vertices() {
        let reach = graph.reachable_from(u);
        for w in 0..graph.vertex_count() {
            if !reach.contains(&w) {
                return Some((u, w));
            }
        }
    }
    None
}

/// Whether the infinite path space is uncountable: some strongly connected
/// component carries two distinct cycles.
pub fn is_path_space_uncountable(graph: &Graph) -> bool {
    graph.sccs().iter().any(|scc| {
        let internal = graph
            .edges
            .iter()
            .filter(|e| scc.contains(&e.origin) && scc.contains(&e.terminus))
            .count();
        internal > scc.len()
    })
}

/// A product of rank-1 graph systems, acting coordinatewise.
#[derive(Debug, Clone)]
pub struct ProductSystem {
    components: Vec<(Graph, Option<EdgeLabeling>)>,
}

impl ProductSystem {
    pub fn new(components: Vec<(Graph, Option<EdgeLabeling>)>) -> Self {
        assert!(!components.is_empty(), "a system needs at least one factor");
        Self { components }
    }

    pub fn single(graph: Graph) -> Self {
        Self::new(vec![(graph, None)])
    }

    /// The rank-2 system whose groupoid realizes the crossed product of a
    /// labeled rank-1 system by the integers: the labeled graph times the
    /// unit loop, on which the second coordinate acts trivially.
    pub fn crossed_product(graph: Graph, labeling: EdgeLabeling) -> Self {
        Self::new(vec![
            (graph, Some(labeling)),
            (Graph::unit_loop(), None),
        ])
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Graph {
        &self.components[i].0
    }

    pub fn labeling(&self, i: usize) -> Option<&EdgeLabeling> {
        self.components[i].1.as_ref()
    }

    pub fn components(&self) -> &[(Graph, Option<EdgeLabeling>)] {
        &self.components
    }
}

/// The periodicity group of a product system as a sublattice of `Z^k`.
///
/// Each minimal rank-1 factor contributes its cycle length when the path
/// space is countable, and the trivial group when it is uncountable (an
/// uncountable minimal factor is topologically principal, so its isotropy
/// interior is trivial).
pub fn compute_p_t(system: &ProductSystem) -> Result<Sublattice, GraphError> {
    let k = system.rank();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for (i, (graph, _)) in system.components().iter().enumerate() {
        if !is_minimal(graph) {
            return Err(GraphError::NotMinimal(i));
        }
        if is_path_space_uncountable(graph) {
            continue;
        }
        let v = *graph.cycle_vertices().iter().next().expect("cycle exists");
        let cycle = graph.cycle_through(v).expect("cycle through cycle vertex");
        let cycle = primitive_root(&cycle);
        let mut gen = vec![0i64; k];
        gen[i] = cycle.len() as i64;
        gens.push(gen);
    }
    Ok(Sublattice::from_generators_i64(k, &gens))
}

/// Enumerate canonical eventually periodic points with bounded prefix and
/// cycle lengths.
pub fn enumerate_points(graph: &Graph, max_prefix: usize, max_cycle: usize) -> Vec<EpPoint> {
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    // All closed words up to the bound, by DFS over edge sequences read
    // terminus-first: extend word w by e with o(w) = t(e).
    let mut stack: Vec<Vec<usize>> = graph
        .edges
        .iter()
        .enumerate()
        .map(|(i, _)| vec![i])
        .collect();
    while let Some(word) = stack.pop() {
        let tail_origin = graph.edge(*word.last().unwrap()).origin;
        let head_terminus = graph.edge(word[0]).terminus;
        if tail_origin == head_terminus {
            cycles.push(word.clone());
        }
        if word.len() < max_cycle {
            for &e in graph.incoming(tail_origin) {
                let mut next = word.clone();
                next.push(e);
                stack.push(next);
            }
        }
    }
    let mut out = BTreeSet::new();
    for cycle in cycles {
        let base = EpPoint::canonical(vec![], cycle.clone());
        out.insert(base.clone());
        // Grow prefixes backwards from the cycle's head vertex.
        let mut frontier = vec![Vec::<usize>::new()];
        for _ in 0..max_prefix {
            let mut next_frontier = Vec::new();
            for prefix in &frontier {
                let attach = match prefix.first() {
                    // The new edge goes in front; its origin must match the
                    // terminus of the current front (or the cycle head).
                    Some(&front) => graph.edge(front).terminus,
                    None => graph.edge(cycle[0]).terminus,
                };
                for &e in graph.outgoing(attach) {
                    let mut longer = vec![e];
                    longer.extend_from_slice(prefix);
                    out.insert(EpPoint::canonical(longer.clone(), cycle.clone()));
                    next_frontier.push(longer);
                }
            }
            frontier = next_frontier;
        }
    }
    out.into_iter().collect()
}

/// Witness data for the forward-orbit density decision at a vertex.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ForwardOrbitWitness {
    Dense {
        /// For each vertex, a cycle label with nonzero irrational part that
        /// lies on a route from the base vertex.
        certificates: Vec<(String, ExactAngle)>,
    },
    Unreachable { vertex: String },
    Cosets {
        vertex: String,
        cosets: Vec<ExactAngle>,
    },
}

const LABEL_STATE_CAP: usize = 200_000;

/// For each strongly connected piece of `sub_vertices`, look for a closed
/// walk whose label has a nonzero irrational part. All-rational cycle labels
/// are detected by a potential (spanning-tree) argument per symbol, without
/// enumerating cycles.
fn irrational_cycle_label(
    graph: &Graph,
    labeling: &EdgeLabeling,
    sub_vertices: &BTreeSet<usize>,
) -> Option<ExactAngle> {
    for scc in graph.sccs_induced(sub_vertices) {
        let internal: Vec<usize> = graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| scc.contains(&e.origin) && scc.contains(&e.terminus))
            .map(|(i, _)| i)
            .collect();
        if internal.is_empty() {
            continue;
        }
        let root = *scc.iter().next().unwrap();
        // Directed BFS tree from root within the SCC; path_word[v] is a word
        // root -> v read terminus-first.
        let mut tree_path: HashMap<usize, Vec<usize>> = HashMap::new();
        tree_path.insert(root, vec![]);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &e in graph.outgoing(u) {
                if !internal.contains(&e) {
                    continue;
                }
                let w = graph.edge(e).terminus;
                if !tree_path.contains_key(&w) {
                    let mut p = vec![e];
                    p.extend_from_slice(&tree_path[&u]);
                    tree_path.insert(w, p);
                    queue.push_back(w);
                }
            }
        }
        let path_label = |v: usize| -> ExactAngle {
            tree_path[&v]
                .iter()
                .fold(ExactAngle::zero(), |acc, &e| {
                    acc.checked_add(labeling.label(e)).expect("shared basis")
                })
        };
        let return_path = |from: usize| -> Vec<usize> {
            // BFS from `from` back to root within the SCC.
            if from == root {
                return vec![];
            }
            let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
            let mut queue = VecDeque::from([from]);
            while let Some(u) = queue.pop_front() {
                for &e in graph.outgoing(u) {
                    if !internal.contains(&e) {
                        continue;
                    }
                    let w = graph.edge(e).terminus;
                    if w == root {
                        let mut walk = vec![e];
                        let mut cur = u;
                        while cur != from {
                            let (prev, pe) = parent[&cur];
                            walk.push(pe);
                            cur = prev;
                        }
                        return walk;
                    }
                    if !parent.contains_key(&w) && w != from {
                        parent.insert(w, (u, e));
                        queue.push_back(w);
                    }
                }
            }
            unreachable!("strongly connected");
        };
        for &e in &internal {
            let edge = graph.edge(e);
            // Two closed walks at root; their labels differ by the potential
            // defect of e, so if the defect is irrational one of them is.
            let defect = path_label(edge.origin)
                .checked_add(labeling.label(e))
                .expect("shared basis")
                .checked_sub(&path_label(edge.terminus))
                .expect("shared basis");
            if !defect.has_irrational_part() {
                continue;
            }
            let ret = return_path(edge.terminus);
            let ret_label = ret.iter().fold(ExactAngle::zero(), |acc, &re| {
                acc.checked_add(labeling.label(re)).expect("shared basis")
            });
            let walk1 = path_label(edge.terminus)
                .checked_add(&ret_label)
                .expect("shared basis");
            let walk2 = path_label(edge.origin)
                .checked_add(labeling.label(e))
                .expect("shared basis")
                .checked_add(&ret_label)
                .expect("shared basis");
            for candidate in [walk2, walk1] {
                if candidate.has_irrational_part() {
                    return Some(candidate);
                }
            }
        }
    }
    None
}

/// Exact saturation of achievable `(vertex, label)` states from the given
/// start states, restricted to edges usable on routes toward `target`.
fn achievable_labels(
    graph: &Graph,
    labeling: &EdgeLabeling,
    starts: &[(usize, ExactAngle)],
    usable: impl Fn(usize) -> bool,
    target: usize,
) -> Result<Vec<ExactAngle>, GraphError> {
    let mut seen: HashSet<(usize, ExactAngle)> = HashSet::new();
    let mut queue: VecDeque<(usize, ExactAngle)> = VecDeque::new();
    for s in starts {
        if seen.insert(s.clone()) {
            queue.push_back(s.clone());
        }
    }
    while let Some((v, label)) = queue.pop_front() {
        if seen.len() > LABEL_STATE_CAP {
            return Err(GraphError::EnumerationOverflow);
        }
        for &e in graph.outgoing(v) {
            if !usable(e) {
                continue;
            }
            let w = graph.edge(e).terminus;
            let next = (w, label.checked_add(labeling.label(e))?);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut labels: Vec<ExactAngle> = seen
        .into_iter()
        .filter(|(v, _)| *v == target)
        .map(|(_, l)| l)
        .collect();
    labels.sort();
    labels.dedup();
    Ok(labels)
}

/// Density of `⋃_{μ from v} (t(μ), ℓ(μ))` in `vertices × circle`.
pub fn forward_orbit_dense(
    graph: &Graph,
    labeling: &EdgeLabeling,
    v: usize,
) -> Result<(bool, ForwardOrbitWitness), GraphError> {
    let reach = graph.reachable_from(v);
    for w in 0..graph.vertex_count() {
        if !reach.contains(&w) {
            return Ok((
                false,
                ForwardOrbitWitness::Unreachable {
                    vertex: graph.vertex_name(w).to_string(),
                },
            ));
        }
    }
    let mut certificates = Vec::new();
    for w in 0..graph.vertex_count() {
        let coreach = graph.coreachable_to(w);
        let usable_vertices: BTreeSet<usize> = reach.intersection(&coreach).copied().collect();
        match irrational_cycle_label(graph, labeling, &usable_vertices) {
            Some(label) => certificates.push((graph.vertex_name(w).to_string(), label)),
            None => {
                let usable = |e: usize| {
                    let edge = graph.edge(e);
                    reach.contains(&edge.origin) && coreach.contains(&edge.terminus)
                };
                let cosets = achievable_labels(
                    graph,
                    labeling,
                    &[(v, ExactAngle::zero())],
                    usable,
                    w,
                )?;
                return Ok((
                    false,
                    ForwardOrbitWitness::Cosets {
                        vertex: graph.vertex_name(w).to_string(),
                        cosets,
                    },
                ));
            }
        }
    }
    Ok((true, ForwardOrbitWitness::Dense { certificates }))
}

/// Any irrational cycle label in the whole graph (used by the orbit-density
/// decisions on minimal graphs, where every cycle lies on every route).
pub fn any_irrational_cycle_label(graph: &Graph, labeling: &EdgeLabeling) -> Option<ExactAngle> {
    let all: BTreeSet<usize> = (0..graph.vertex_count()).collect();
    irrational_cycle_label(graph, labeling, &all)
}

/// Achievable circle coordinates `ℓ(λ) − ℓ(x(0,n))` of the orbit of `x` at
/// the vertex `target`, when no relevant cycle label is irrational.
pub fn orbit_label_cosets(
    graph: &Graph,
    labeling: &EdgeLabeling,
    x: &EpPoint,
    target: usize,
) -> Result<Vec<ExactAngle>, GraphError> {
    let mut starts = Vec::new();
    let horizon = x.prefix().len() + x.period();
    let mut acc = ExactAngle::zero(); // ℓ(x(0,n))
    for n in 0..=horizon {
        let head_n = graph.edge(x.edge_at(n)).terminus;
        starts.push((head_n, acc.neg()));
        acc = acc.checked_add(labeling.label(x.edge_at(n)))?;
    }
    achievable_labels(graph, labeling, &starts, |_| true, target)
}
