//! Resolution graphs, their validation, and the decorations every later stage
//! reads: multiplicities, maximal-cycle coefficients, orientation, labels and
//! the nice vertex order.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::turn::{q, qi, Q};

/// Endpoint of an edge: a vertex of the resolution or an arrowhead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Node {
    Vertex(usize),
    Arrow(usize),
}

/// Undecorated input: Euler numbers, arrowhead multiplicities and the tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionGraph {
    pub vertex_names: Vec<String>,
    /// `b_i`, the self-intersection of `D_i` is `-b_i`.
    pub euler: Vec<i64>,
    pub arrow_names: Vec<String>,
    pub arrow_mult: Vec<i64>,
    pub edges: Vec<(Node, Node)>,
    pub root: usize,
    /// Arrow indices from smallest to largest branch.
    pub branch_order: Option<Vec<usize>>,
}

impl ResolutionGraph {
    /// Builds a graph with generated names. `arrows` lists `(vertex, mult)`.
    pub fn new(
        euler: Vec<i64>,
        vertex_edges: &[(usize, usize)],
        arrows: &[(usize, i64)],
        root: usize,
    ) -> Self {
        let mut edges: Vec<(Node, Node)> = vertex_edges
            .iter()
            .map(|&(a, b)| (Node::Vertex(a), Node::Vertex(b)))
            .collect();
        edges.extend(
            arrows
                .iter()
                .enumerate()
                .map(|(k, &(v, _))| (Node::Vertex(v), Node::Arrow(k))),
        );
        ResolutionGraph {
            vertex_names: (0..euler.len()).map(|i| i.to_string()).collect(),
            euler,
            arrow_names: (0..arrows.len()).map(|k| format!("a{k}")).collect(),
            arrow_mult: arrows.iter().map(|&(_, m)| m).collect(),
            edges,
            root,
            branch_order: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.euler.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrow_mult.len()
    }

    pub fn node_name(&self, node: Node) -> String {
        match node {
            Node::Vertex(i) => self
                .vertex_names
                .get(i)
                .cloned()
                .unwrap_or_else(|| i.to_string()),
            Node::Arrow(a) => self
                .arrow_names
                .get(a)
                .cloned()
                .unwrap_or_else(|| format!("a{a}")),
        }
    }

    fn node_index(&self, node: Node) -> usize {
        match node {
            Node::Vertex(i) => i,
            Node::Arrow(a) => self.vertex_count() + a,
        }
    }

    fn node_at(&self, idx: usize) -> Node {
        if idx < self.vertex_count() {
            Node::Vertex(idx)
        } else {
            Node::Arrow(idx - self.vertex_count())
        }
    }

    /// Adjacency over the unified node index, in input edge order.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count() + self.arrow_count()];
        for &(a, b) in &self.edges {
            let (a, b) = (self.node_index(a), self.node_index(b));
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

/// Checks that the input is a tree rooted at a vertex with degree-one
/// arrowheads. Returns the first violation found.
pub fn validate_graph(g: &ResolutionGraph) -> Result<()> {
    let nv = g.vertex_count();
    let total = nv + g.arrow_count();
    if nv == 0 || g.root >= nv {
        return Err(Error::MissingRoot {
            root: g.root.to_string(),
        });
    }
    for &(a, b) in &g.edges {
        for node in [a, b] {
            let ok = match node {
                Node::Vertex(i) => i < nv,
                Node::Arrow(k) => k < g.arrow_count(),
            };
            if !ok {
                return Err(Error::ArrowheadDegree {
                    arrow: format!("{node:?}"),
                });
            }
        }
        if let (Node::Arrow(k), Node::Arrow(_)) = (a, b) {
            return Err(Error::ArrowheadDegree {
                arrow: g.node_name(Node::Arrow(k)),
            });
        }
    }
    let adj = g.adjacency();
    for k in 0..g.arrow_count() {
        if adj[nv + k].len() != 1 {
            return Err(Error::ArrowheadDegree {
                arrow: g.node_name(Node::Arrow(k)),
            });
        }
    }
    let mut uf = UnionFind::new(total);
    for &(a, b) in &g.edges {
        let (ia, ib) = (g.node_index(a), g.node_index(b));
        if !uf.union(ia, ib) {
            return Err(Error::CycleDetected {
                node: g.node_name(b),
            });
        }
    }
    let root = uf.find(g.root);
    for idx in 0..total {
        if uf.find(idx) != root {
            return Err(Error::DisconnectedGraph {
                node: g.node_name(g.node_at(idx)),
            });
        }
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Multiplicities `m_i` and maximal-cycle coefficients `c_{0,i}` of the
/// vertices, from the two adjunction systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiplicities {
    pub m: Vec<i128>,
    pub c0: Vec<i128>,
}

pub fn solve_multiplicities(g: &ResolutionGraph) -> Result<Multiplicities> {
    validate_graph(g)?;
    let nv = g.vertex_count();
    let mut matrix = vec![vec![BigRational::zero(); nv]; nv];
    let mut rhs_m = vec![BigRational::zero(); nv];
    let mut rhs_c = vec![BigRational::zero(); nv];
    for i in 0..nv {
        matrix[i][i] = BigRational::from_integer(BigInt::from(g.euler[i]));
    }
    for &(a, b) in &g.edges {
        match (a, b) {
            (Node::Vertex(i), Node::Vertex(j)) => {
                matrix[i][j] -= BigRational::one();
                matrix[j][i] -= BigRational::one();
            }
            (Node::Vertex(i), Node::Arrow(k)) | (Node::Arrow(k), Node::Vertex(i)) => {
                rhs_m[i] += BigRational::from_integer(BigInt::from(g.arrow_mult[k]));
            }
            _ => unreachable!("validated"),
        }
    }
    rhs_c[g.root] = BigRational::one();
    let sol = solve_exact(matrix, vec![rhs_m, rhs_c]).ok_or(Error::SingularSystem)?;
    let to_int = |vals: &[BigRational]| -> Result<Vec<i128>> {
        vals.iter()
            .enumerate()
            .map(|(i, v)| {
                let name = g.node_name(Node::Vertex(i));
                if !v.is_integer() {
                    return Err(Error::NonIntegralSolution {
                        vertex: name,
                        value: v.to_string(),
                    });
                }
                if !v.is_positive() {
                    return Err(Error::NonPositiveMultiplicity {
                        vertex: name,
                        value: v.to_string(),
                    });
                }
                v.to_integer().to_i128().ok_or(Error::NonIntegralSolution {
                    vertex: name,
                    value: v.to_string(),
                })
            })
            .collect()
    };
    for (k, &mult) in g.arrow_mult.iter().enumerate() {
        if mult < 1 {
            return Err(Error::NonPositiveMultiplicity {
                vertex: g.node_name(Node::Arrow(k)),
                value: mult.to_string(),
            });
        }
    }
    Ok(Multiplicities {
        m: to_int(&sol[0])?,
        c0: to_int(&sol[1])?,
    })
}

/// Gauss-Jordan elimination over Q for several right-hand sides.
fn solve_exact(
    mut a: Vec<Vec<BigRational>>,
    mut rhs: Vec<Vec<BigRational>>,
) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        for b in rhs.iter_mut() {
            b.swap(col, pivot);
        }
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for b in rhs.iter_mut() {
            b[col] *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
                for b in rhs.iter_mut() {
                    let delta = &factor * &b[col];
                    b[r] -= delta;
                }
            }
        }
    }
    Some(rhs)
}

/// A resolution graph with every combinatorial decoration attached. Nodes
/// are indexed uniformly: vertices `0..nv`, then arrowheads `nv..nv+na`.
#[derive(Debug, Clone)]
pub struct DecoratedGraph {
    pub base: ResolutionGraph,
    pub nv: usize,
    /// Multiplicity per node (arrowheads carry their input multiplicity).
    pub m: Vec<i128>,
    /// Maximal-cycle coefficient per node (zero on arrowheads).
    pub c0: Vec<i128>,
    pub parent: Vec<Option<usize>>,
    /// Children in label order; a dead child, when present, comes first.
    pub children: Vec<Vec<usize>>,
    /// Label of each node among its siblings (0 only for a dead child).
    pub label: Vec<usize>,
    pub dead_child: Vec<Option<usize>>,
    /// Membership in the invariant subgraph (vertices only).
    pub upsilon: Vec<bool>,
    /// Nodes in the nice total order.
    pub vertex_order: Vec<usize>,
    pub order_position: Vec<usize>,
    /// Arrow indices from smallest to largest branch.
    pub branch_order: Vec<usize>,
    pub default_branch_order: bool,
    /// `M_{j,k}` for the edge into each node (0 at the root).
    pub m_edge: Vec<i128>,
    /// Same recursion with maximal-cycle coefficients.
    pub c_edge: Vec<i128>,
}

impl DecoratedGraph {
    pub fn root(&self) -> usize {
        self.base.root
    }

    pub fn node_count(&self) -> usize {
        self.m.len()
    }

    pub fn is_arrow(&self, node: usize) -> bool {
        node >= self.nv
    }

    pub fn name(&self, node: usize) -> String {
        if node < self.nv {
            self.base.node_name(Node::Vertex(node))
        } else {
            self.base.node_name(Node::Arrow(node - self.nv))
        }
    }

    pub fn euler(&self, vertex: usize) -> i128 {
        self.base.euler[vertex] as i128
    }

    /// `n_{ik} = m_k c_{0,i} - m_i c_{0,k}`.
    pub fn n(&self, i: usize, k: usize) -> i128 {
        self.m[k] * self.c0[i] - self.m[i] * self.c0[k]
    }

    /// Pole order at infinity of the base divisor of `i`: `n` of the edge
    /// from the parent, or `m_0` at the root (the virtual parent).
    pub fn pole_order(&self, i: usize) -> i128 {
        match self.parent[i] {
            Some(j) => self.n(j, i),
            None => self.m[i],
        }
    }

    /// Reciprocal Hironaka number `c_{0,i} / m_i` (zero on arrowheads).
    pub fn inverse_hironaka(&self, node: usize) -> Q {
        q(self.c0[node], self.m[node])
    }

    pub fn hironaka(&self, vertex: usize) -> Option<Q> {
        if self.c0[vertex] == 0 {
            None
        } else {
            Some(q(self.m[vertex], self.c0[vertex]))
        }
    }

    /// Absolute gyration weight `1/h_0 - 1/h_i`.
    pub fn weight(&self, vertex: usize) -> Q {
        self.inverse_hironaka(self.root()) - self.inverse_hironaka(vertex)
    }

    /// Relative gyration weight `1/h_i`.
    pub fn dual_weight(&self, vertex: usize) -> Q {
        self.inverse_hironaka(vertex)
    }

    /// Children with an arrowhead below them, in label order.
    pub fn live_children(&self, i: usize) -> &[usize] {
        match self.dead_child[i] {
            Some(_) => &self.children[i][1..],
            None => &self.children[i][..],
        }
    }

    /// Largest label at `i`.
    pub fn live_count(&self, i: usize) -> usize {
        self.live_children(i).len()
    }

    /// The live child carrying label `a` (1-based).
    pub fn child_with_label(&self, i: usize, a: usize) -> usize {
        self.live_children(i)[a - 1]
    }

    /// `M_i`: the edge constant plus the multiplicities of all children.
    pub fn m_total(&self, i: usize) -> i128 {
        self.m_edge[i] + self.children[i].iter().map(|&k| self.m[k]).sum::<i128>()
    }

    pub fn c_total(&self, i: usize) -> i128 {
        self.c_edge[i] + self.children[i].iter().map(|&k| self.c0[k]).sum::<i128>()
    }

    /// Vertices of the invariant subgraph in the nice order.
    pub fn invariant_vertices(&self) -> Vec<usize> {
        self.vertex_order
            .iter()
            .copied()
            .filter(|&v| v < self.nv && self.upsilon[v])
            .collect()
    }

    /// Path from `v` up to the root, `v` first.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path
    }

    /// Number of neighbours in the full graph.
    pub fn valency(&self, node: usize) -> usize {
        self.children[node].len() + usize::from(self.parent[node].is_some())
    }

    /// Arrow indices below `node`, sorted by branch rank.
    pub fn arrows_below(&self, node: usize) -> Vec<usize> {
        let rank = self.arrow_rank();
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(x) = stack.pop() {
            if self.is_arrow(x) {
                out.push(x - self.nv);
            }
            stack.extend(self.children[x].iter().copied());
        }
        out.sort_by_key(|&a| rank[a]);
        out
    }

    pub fn arrow_rank(&self) -> Vec<usize> {
        let mut rank = vec![0; self.base.arrow_count()];
        for (r, &a) in self.branch_order.iter().enumerate() {
            rank[a] = r;
        }
        rank
    }
}

/// The default branch order: arrowheads in the order a depth-first search
/// from the root meets them, neighbours taken in input edge order.
pub fn default_branch_order(g: &ResolutionGraph) -> Vec<usize> {
    let adj = g.adjacency();
    let nv = g.vertex_count();
    let mut seen = vec![false; adj.len()];
    let mut order = Vec::new();
    let mut stack = vec![g.root];
    while let Some(x) = stack.pop() {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        if x >= nv {
            order.push(x - nv);
        }
        for &y in adj[x].iter().rev() {
            if !seen[y] {
                stack.push(y);
            }
        }
    }
    order
}

/// Orients the tree away from the root, finds the invariant subgraph and
/// dead branches, checks the branch order is nice, and derives labels, the
/// vertex order and the `M`/`C` edge constants.
pub fn direct_and_order(g: &ResolutionGraph) -> Result<DecoratedGraph> {
    let mult = solve_multiplicities(g)?;
    let nv = g.vertex_count();
    let na = g.arrow_count();
    let total = nv + na;
    let adj = g.adjacency();

    let (branch_order, default_branch_order) = match &g.branch_order {
        Some(order) => {
            let set: BTreeSet<usize> = order.iter().copied().collect();
            if order.len() != na || set.len() != na || set.iter().any(|&a| a >= na) {
                return Err(Error::InvalidBranchOrder {
                    reason: format!("expected a permutation of the {na} arrowheads"),
                });
            }
            (order.clone(), false)
        }
        None => (default_branch_order(g), true),
    };
    let mut rank = vec![0usize; na];
    for (r, &a) in branch_order.iter().enumerate() {
        rank[a] = r;
    }

    let mut m = mult.m.clone();
    m.extend(g.arrow_mult.iter().map(|&x| x as i128));
    let mut c0 = mult.c0.clone();
    c0.extend(std::iter::repeat(0).take(na));

    // Parents and a BFS order (parents before children).
    let mut parent = vec![None; total];
    let mut bfs = Vec::with_capacity(total);
    let mut seen = vec![false; total];
    let mut queue = VecDeque::from([g.root]);
    seen[g.root] = true;
    while let Some(x) = queue.pop_front() {
        bfs.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                queue.push_back(y);
            }
        }
    }

    // Arrow ranks below each node, collected bottom-up.
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); total];
    for &x in bfs.iter().rev() {
        if x >= nv {
            below[x].push(rank[x - nv]);
        }
        below[x].sort_unstable();
        if let Some(p) = parent[x] {
            let moved = below[x].clone();
            below[p].extend(moved);
        }
    }
    let upsilon: Vec<bool> = (0..total)
        .map(|x| x < nv && (x == g.root || !below[x].is_empty()))
        .collect();

    let mut children: Vec<Vec<usize>> = vec![Vec::new(); total];
    let mut label = vec![0usize; total];
    let mut dead_child = vec![None; total];
    for x in 0..total {
        let kids: Vec<usize> = adj[x]
            .iter()
            .copied()
            .filter(|&y| parent[y] == Some(x))
            .collect();
        let (mut live, dead): (Vec<usize>, Vec<usize>) =
            kids.into_iter().partition(|&y| !below[y].is_empty());
        if dead.len() > 1 {
            return Err(Error::MultipleDeadBranches { vertex: g.node_name(g.node_at(x)) });
        }
        live.sort_by_key(|&y| below[y][0]);
        for pair in live.windows(2) {
            if below[pair[0]].last() > below[pair[1]].first() {
                return Err(Error::BranchOrderNotNice {
                    vertex: g.node_name(g.node_at(x)),
                });
            }
        }
        if let Some(&d) = dead.first() {
            dead_child[x] = Some(d);
            children[x].push(d);
            label[d] = 0;
        }
        for (s, &y) in live.iter().enumerate() {
            label[y] = s + 1;
        }
        children[x].extend(live);
    }

    // Nice total order: preorder with children in label order.
    let mut vertex_order = Vec::with_capacity(total);
    let mut stack = vec![g.root];
    while let Some(x) = stack.pop() {
        vertex_order.push(x);
        for &y in children[x].iter().rev() {
            stack.push(y);
        }
    }
    let mut order_position = vec![0; total];
    for (pos, &x) in vertex_order.iter().enumerate() {
        order_position[x] = pos;
    }

    let mut m_edge = vec![0i128; total];
    let mut c_edge = vec![0i128; total];
    for &x in &bfs {
        let kids = &children[x];
        for (s, &y) in kids.iter().enumerate() {
            let later = &kids[s + 1..];
            m_edge[y] = m_edge[x] + later.iter().map(|&l| m[l]).sum::<i128>();
            c_edge[y] = c_edge[x] + later.iter().map(|&l| c0[l]).sum::<i128>();
        }
    }

    Ok(DecoratedGraph {
        base: g.clone(),
        nv,
        m,
        c0,
        parent,
        children,
        label,
        dead_child,
        upsilon,
        vertex_order,
        order_position,
        branch_order,
        default_branch_order,
        m_edge,
        c_edge,
    })
}

/// Labels of the children of each vertex, as `(child, label)` pairs in order.
pub fn labeling_functions(dg: &DecoratedGraph) -> Vec<Vec<(usize, usize)>> {
    (0..dg.node_count())
        .map(|i| dg.children[i].iter().map(|&k| (k, dg.label[k])).collect())
        .collect()
}

/// Edge data for a directed edge `i -> k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeConstants {
    /// Siblings of `k` with a larger label.
    pub later_siblings: Vec<usize>,
    pub m_ik: i128,
    pub m_i: i128,
    /// `(-1)^{M_ik}`.
    pub sign: i8,
}

pub fn sik_mik(dg: &DecoratedGraph, i: usize, k: usize) -> Result<EdgeConstants> {
    if k >= dg.node_count() || dg.parent[k] != Some(i) {
        return Err(Error::EdgeNotDirected {
            from: dg.name(i),
            to: if k < dg.node_count() { dg.name(k) } else { k.to_string() },
        });
    }
    let later_siblings: Vec<usize> = dg.children[i]
        .iter()
        .copied()
        .filter(|&l| dg.label[l] > dg.label[k])
        .collect();
    let m_ik = dg.m_edge[k];
    Ok(EdgeConstants {
        later_siblings,
        m_ik,
        m_i: dg.m_total(i),
        sign: if m_ik % 2 == 0 { 1 } else { -1 },
    })
}

/// Adjunction residuals, zero for a consistent decoration.
pub fn adjunction_residuals(dg: &DecoratedGraph) -> Vec<(i128, i128)> {
    (0..dg.nv)
        .map(|i| {
            let neighbours: Vec<usize> = dg.children[i]
                .iter()
                .copied()
                .chain(dg.parent[i])
                .collect();
            let sum_m: i128 = neighbours.iter().map(|&l| dg.m[l]).sum();
            let sum_c: i128 = neighbours.iter().map(|&l| dg.c0[l]).sum::<i128>()
                + i128::from(i == dg.root());
            (dg.euler(i) * dg.m[i] - sum_m, dg.euler(i) * dg.c0[i] - sum_c)
        })
        .collect()
}

/// Hironaka table rows `(b, c0, m, h, weight, dual weight)` per vertex.
pub fn hironaka_table(dg: &DecoratedGraph) -> Vec<(i128, i128, i128, Q, Q, Q)> {
    (0..dg.nv)
        .map(|i| {
            (
                dg.euler(i),
                dg.c0[i],
                dg.m[i],
                dg.hironaka(i).unwrap_or_else(|| qi(0)),
                dg.weight(i),
                dg.dual_weight(i),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cusp() -> ResolutionGraph {
        ResolutionGraph::new(vec![3, 2, 1], &[(0, 2), (1, 2)], &[(2, 1)], 0)
    }

    fn two_pairs() -> ResolutionGraph {
        ResolutionGraph::new(
            vec![3, 3, 2, 1, 2],
            &[(0, 1), (1, 2), (1, 3), (3, 4)],
            &[(3, 1)],
            0,
        )
    }

    #[test]
    fn cusp_multiplicities() {
        let s = solve_multiplicities(&cusp()).unwrap();
        assert_eq!(s.m, vec![2, 3, 6]);
        assert_eq!(s.c0, vec![1, 1, 2]);
    }

    #[test]
    fn two_pair_multiplicities() {
        let s = solve_multiplicities(&two_pairs()).unwrap();
        assert_eq!(s.m, vec![4, 12, 6, 26, 13]);
        assert_eq!(s.c0, vec![1, 2, 1, 4, 2]);
    }

    #[test]
    fn smooth_branch() {
        let g = ResolutionGraph::new(vec![1], &[], &[(0, 1)], 0);
        let s = solve_multiplicities(&g).unwrap();
        assert_eq!((s.m, s.c0), (vec![1], vec![1]));
    }

    #[test]
    fn validation_errors() {
        let mut g = cusp();
        g.edges.push((Node::Arrow(0), Node::Arrow(0)));
        assert!(matches!(validate_graph(&g), Err(Error::ArrowheadDegree { .. })));

        let g = ResolutionGraph::new(vec![1, 1], &[], &[(0, 1)], 0);
        assert!(matches!(validate_graph(&g), Err(Error::DisconnectedGraph { .. })));

        let g = ResolutionGraph::new(vec![2, 2, 2], &[(0, 1), (1, 2), (2, 0)], &[(0, 1)], 0);
        assert!(matches!(validate_graph(&g), Err(Error::CycleDetected { .. })));

        let mut g = cusp();
        g.root = 7;
        assert!(matches!(validate_graph(&g), Err(Error::MissingRoot { .. })));
    }

    #[test]
    fn non_realizable_graphs() {
        let g = ResolutionGraph::new(vec![2, 2], &[(0, 1)], &[(1, 1)], 0);
        assert!(matches!(
            solve_multiplicities(&g),
            Err(Error::NonIntegralSolution { .. })
        ));
        let g = ResolutionGraph::new(vec![1, 1], &[(0, 1)], &[(1, 1)], 0);
        assert!(matches!(solve_multiplicities(&g), Err(Error::SingularSystem)));
        let g = ResolutionGraph::new(vec![1, 1, 1], &[(0, 1), (1, 2)], &[(0, 1)], 0);
        assert!(matches!(
            solve_multiplicities(&g),
            Err(Error::NonPositiveMultiplicity { .. })
        ));
    }

    #[test]
    fn cusp_decorations() {
        let dg = direct_and_order(&cusp()).unwrap();
        // root, the rupture vertex, its dead child, the arrow
        assert_eq!(dg.vertex_order, vec![0, 2, 1, 3]);
        assert_eq!(dg.dead_child[2], Some(1));
        assert_eq!(dg.label[1], 0);
        assert_eq!(dg.label[3], 1);
        assert_eq!(dg.n(2, 1), 0);
        assert_eq!(dg.pole_order(2), 2);
        assert_eq!(dg.pole_order(0), 2);
        assert!(dg.upsilon[0] && dg.upsilon[2] && !dg.upsilon[1]);
        assert!(adjunction_residuals(&dg).iter().all(|&r| r == (0, 0)));
    }

    #[test]
    fn two_pair_table() {
        let dg = direct_and_order(&two_pairs()).unwrap();
        let h: Vec<Q> = (0..5).map(|i| dg.hironaka(i).unwrap()).collect();
        assert_eq!(h, vec![qi(4), qi(6), qi(6), q(13, 2), q(13, 2)]);
        let w: Vec<Q> = (0..5).map(|i| dg.weight(i)).collect();
        assert_eq!(w, vec![qi(0), q(1, 12), q(1, 12), q(5, 52), q(5, 52)]);
        let dw: Vec<Q> = (0..5).map(|i| dg.dual_weight(i)).collect();
        assert_eq!(dw, vec![q(1, 4), q(1, 6), q(1, 6), q(2, 13), q(2, 13)]);
        assert_eq!(dg.invariant_vertices(), vec![0, 1, 3]);
    }

    #[test]
    fn edge_constants() {
        let dg = direct_and_order(&two_pairs()).unwrap();
        let e = sik_mik(&dg, 1, 3).unwrap();
        assert!(e.later_siblings.is_empty());
        assert!(matches!(sik_mik(&dg, 3, 1), Err(Error::EdgeNotDirected { .. })));
        let e = sik_mik(&dg, 1, 2).unwrap();
        assert_eq!(e.later_siblings, vec![3]);
        assert_eq!(e.m_ik, 26);
    }

    #[test]
    fn interleaved_branch_order_rejected() {
        // y(y - x^2)x: two tangent branches on the second divisor, one transversal
        let mut g = ResolutionGraph::new(vec![2, 1], &[(0, 1)], &[(1, 1), (1, 1), (0, 1)], 0);
        assert_eq!(solve_multiplicities(&g).unwrap().m, vec![3, 5]);
        g.branch_order = Some(vec![0, 1, 2]);
        assert!(direct_and_order(&g).is_ok());
        g.branch_order = Some(vec![0, 2, 1]);
        assert!(matches!(
            direct_and_order(&g),
            Err(Error::BranchOrderNotNice { .. })
        ));
    }
}
