//! Left/right/two-sided cells of a positively based algebra and the partial
//! orders between them.
//!
//! The one-step relation "j is reachable from i by left multiplication"
//! (j in s*i for some s) is already transitive and reflexive because the
//! algebra is unital, so cells are the strongly connected components of the
//! one-step graph and the cell order is the condensation order.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::Signed;
use thiserror::Error;

use crate::algebra::PBAlgebra;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CellError {
    #[error("unknown {kind:?} cell id {id}")]
    UnknownCellId { kind: CellKind, id: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Left,
    Right,
    TwoSided,
}

#[derive(Debug, Clone)]
struct KindData {
    cell_of: Vec<usize>,
    /// Sorted member indices per cell, cell ids in topological order of the
    /// strict order DAG (minimal cells first), ties by smallest member.
    cells: Vec<Vec<usize>>,
    /// Reflexive reachability between cells: reach[a][b] iff a <= b.
    reach: Vec<Vec<bool>>,
    /// Transitive reduction (cover relation) of the strict order.
    reduced_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct CellDecomposition {
    left: KindData,
    right: KindData,
    two_sided: KindData,
}

impl CellDecomposition {
    fn kind(&self, kind: CellKind) -> &KindData {
        match kind {
            CellKind::Left => &self.left,
            CellKind::Right => &self.right,
            CellKind::TwoSided => &self.two_sided,
        }
    }

    pub fn num_cells(&self, kind: CellKind) -> usize {
        self.kind(kind).cells.len()
    }

    pub fn cell_of(&self, kind: CellKind, index: usize) -> usize {
        self.kind(kind).cell_of[index]
    }

    /// Sorted basis indices of one cell.
    pub fn members(&self, kind: CellKind, id: usize) -> Result<&[usize], CellError> {
        self.kind(kind)
            .cells
            .get(id)
            .map(Vec::as_slice)
            .ok_or(CellError::UnknownCellId { kind, id })
    }

    pub fn cells(&self, kind: CellKind) -> &[Vec<usize>] {
        &self.kind(kind).cells
    }

    /// c1 <= c2 in the cell order (reflexive).
    pub fn cell_leq(&self, kind: CellKind, c1: usize, c2: usize) -> Result<bool, CellError> {
        let data = self.kind(kind);
        for id in [c1, c2] {
            if id >= data.cells.len() {
                return Err(CellError::UnknownCellId { kind, id });
            }
        }
        Ok(data.reach[c1][c2])
    }

    /// Cover edges (transitively reduced) of the strict order.
    pub fn dag_edges(&self, kind: CellKind) -> &[(usize, usize)] {
        &self.kind(kind).reduced_edges
    }

    /// Basis indices i with cell(i) >= the given cell; for a left cell L this
    /// spans the submodule M_L of the regular module.
    pub fn upward_closure(&self, kind: CellKind, id: usize) -> Result<Vec<usize>, CellError> {
        let data = self.kind(kind);
        if id >= data.cells.len() {
            return Err(CellError::UnknownCellId { kind, id });
        }
        Ok((0..data.cell_of.len())
            .filter(|&i| data.reach[id][data.cell_of[i]])
            .collect())
    }

    /// Basis indices i with cell(i) <= the given cell; for a two-sided cell J
    /// this is the basis of the quotient algebra A_J.
    pub fn downward_closure(&self, kind: CellKind, id: usize) -> Result<Vec<usize>, CellError> {
        let data = self.kind(kind);
        if id >= data.cells.len() {
            return Err(CellError::UnknownCellId { kind, id });
        }
        Ok((0..data.cell_of.len())
            .filter(|&i| data.reach[data.cell_of[i]][id])
            .collect())
    }

    /// Left cell ids contained in a two-sided cell.
    pub fn left_cells_in(&self, two_sided_id: usize) -> Result<Vec<usize>, CellError> {
        let members = self.members(CellKind::TwoSided, two_sided_id)?;
        let mut ids: Vec<usize> = members
            .iter()
            .map(|&i| self.left.cell_of[i])
            .collect();
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    /// A two-sided cell J is idempotent when k in i*j for some i, j, k in J.
    pub fn is_idempotent_cell(&self, alg: &PBAlgebra, id: usize) -> Result<bool, CellError> {
        let members = self.members(CellKind::TwoSided, id)?;
        let in_cell = |k: usize| self.two_sided.cell_of[k] == id;
        Ok(members.iter().any(|&i| {
            members.iter().any(|&j| {
                alg.product_terms(i, j)
                    .any(|(k, v)| v.is_positive() && in_cell(k))
            })
        }))
    }

    pub fn idempotent_two_sided_cells(&self, alg: &PBAlgebra) -> Vec<usize> {
        (0..self.num_cells(CellKind::TwoSided))
            .filter(|&j| self.is_idempotent_cell(alg, j).unwrap())
            .collect()
    }
}

/// Computes all three cell structures of a validated algebra.
pub fn compute_cells(alg: &PBAlgebra) -> CellDecomposition {
    let n = alg.dim();
    let mut left_adj = vec![Vec::new(); n];
    let mut right_adj = vec![Vec::new(); n];
    let mut two_adj = vec![Vec::new(); n];
    for (&(i, j, k), v) in alg.gamma_iter() {
        if !v.is_positive() {
            continue;
        }
        // Left multiplication by a_i sends j upward to k; right
        // multiplication by a_j sends i upward to k.
        left_adj[j].push(k);
        right_adj[i].push(k);
        two_adj[j].push(k);
        two_adj[i].push(k);
    }
    for adj in [&mut left_adj, &mut right_adj, &mut two_adj] {
        for row in adj.iter_mut() {
            row.sort_unstable();
            row.dedup();
        }
    }
    CellDecomposition {
        left: build_kind(&left_adj),
        right: build_kind(&right_adj),
        two_sided: build_kind(&two_adj),
    }
}

fn build_kind(adj: &[Vec<usize>]) -> KindData {
    let comps = tarjan_scc(adj);
    let n = adj.len();
    let ncomp = comps.len();
    let mut comp_of = vec![usize::MAX; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    // Condensation edges.
    let mut dag = vec![Vec::new(); ncomp];
    let mut indeg = vec![0usize; ncomp];
    for u in 0..n {
        for &v in &adj[u] {
            let (cu, cv) = (comp_of[u], comp_of[v]);
            if cu != cv && !dag[cu].contains(&cv) {
                dag[cu].push(cv);
                indeg[cv] += 1;
            }
        }
    }
    // Deterministic topological ids: minimal cells first, ties broken by the
    // smallest member index.
    let smallest: Vec<usize> = comps.iter().map(|m| *m.iter().min().unwrap()).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..ncomp)
        .filter(|&c| indeg[c] == 0)
        .map(|c| Reverse((smallest[c], c)))
        .collect();
    let mut new_id = vec![usize::MAX; ncomp];
    let mut next = 0;
    while let Some(Reverse((_, c))) = heap.pop() {
        new_id[c] = next;
        next += 1;
        for &d in &dag[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((smallest[d], d)));
            }
        }
    }
    debug_assert_eq!(next, ncomp, "condensation must be acyclic");
    let mut cells = vec![Vec::new(); ncomp];
    let mut cell_of = vec![0usize; n];
    for old in 0..ncomp {
        let id = new_id[old];
        let mut members = comps[old].clone();
        members.sort_unstable();
        cells[id] = members;
    }
    for v in 0..n {
        cell_of[v] = new_id[comp_of[v]];
    }
    // Reachability over the re-indexed DAG.
    let mut edges = vec![Vec::new(); ncomp];
    for old in 0..ncomp {
        for &d in &dag[old] {
            edges[new_id[old]].push(new_id[d]);
        }
    }
    let mut reach = vec![vec![false; ncomp]; ncomp];
    for c in (0..ncomp).rev() {
        // Ids are topological, so successors always carry finished rows.
        reach[c][c] = true;
        let succ = edges[c].clone();
        for d in succ {
            for b in 0..ncomp {
                if reach[d][b] {
                    reach[c][b] = true;
                }
            }
        }
    }
    let mut reduced_edges = Vec::new();
    for a in 0..ncomp {
        for b in 0..ncomp {
            if a != b && reach[a][b] {
                let covered = (0..ncomp)
                    .any(|c| c != a && c != b && reach[a][c] && reach[c][b]);
                if !covered {
                    reduced_edges.push((a, b));
                }
            }
        }
    }
    KindData {
        cell_of,
        cells,
        reach,
        reduced_edges,
    }
}

/// Number of strongly connected components of a directed graph.
pub(crate) fn scc_count(adj: &[Vec<usize>]) -> usize {
    tarjan_scc(adj).len()
}

fn tarjan_scc(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: usize,
        idx: Vec<Option<usize>>,
        low: Vec<usize>,
        stack: Vec<usize>,
        on_stack: Vec<bool>,
        comps: Vec<Vec<usize>>,
    }
    fn connect(v: usize, st: &mut State) {
        st.idx[v] = Some(st.index);
        st.low[v] = st.index;
        st.index += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adj[v] {
            if st.idx[w].is_none() {
                connect(w, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.idx[w].unwrap());
            }
        }
        if st.low[v] == st.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("stack underflow");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            st.comps.push(comp);
        }
    }
    let n = adj.len();
    let mut st = State {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if st.idx[v].is_none() {
            connect(v, &mut st);
        }
    }
    st.comps
}
