//! Based modules over a positively based algebra: cell modules, quotient
//! algebras, transitive modules, intertwiners between cell modules, M(J),
//! and coinvariant-induced modules for monoid algebras.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::PBAlgebra;
use crate::cells::{CellDecomposition, CellError, CellKind};
use crate::linalg::QMatrix;
use crate::scalar::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error("expected one {expected}x{expected} action matrix per basis element, got a {got_rows}x{got_cols} matrix")]
    ShapeMismatch {
        expected: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("expected {expected} action matrices, got {got}")]
    ActionCountMismatch { expected: usize, got: usize },
    #[error("the unit does not act as the identity matrix")]
    UnitActionNotIdentity,
    #[error("action matrix of basis element {basis} has a negative entry")]
    NegativeEntry { basis: usize },
    #[error("action matrices violate compatibility at pair ({0}, {1})")]
    CompatibilityFailed(usize, usize),
    #[error("left cells {0} and {1} are not in the same two-sided cell")]
    NotSameTwoSidedCell(usize, usize),
    #[error("target left cell {0} is not minimal in its two-sided cell")]
    TargetNotMinimal(usize),
    #[error("no witness index j with i*j meeting the target cell exists")]
    NoWitness,
    #[error("constructed map fails to commute with the action of basis element {basis}")]
    MorphismNotEquivariant { basis: usize },
    #[error("algebra is not the standard-basis algebra of a monoid")]
    NotMonoidBacked,
    #[error("element {0} is not idempotent in the monoid")]
    NotIdempotent(usize),
    #[error("internal consistency violation: {0}")]
    Consistency(String),
}

impl ModuleError {
    /// Errors that contradict a structural guarantee rather than reject bad
    /// input.
    pub fn is_consistency(&self) -> bool {
        matches!(
            self,
            ModuleError::NoWitness
                | ModuleError::MorphismNotEquivariant { .. }
                | ModuleError::Consistency(_)
        )
    }
}

/// A module with a fixed basis on which every algebra basis element acts by
/// a nonnegative exact matrix.
#[derive(Debug, Clone)]
pub struct BasedModule {
    algebra: Arc<PBAlgebra>,
    dim: usize,
    labels: Vec<String>,
    actions: Vec<QMatrix>,
}

impl BasedModule {
    /// Shape-checks only; see [`BasedModule::check_invariants`] for the full
    /// exact validation.
    pub fn from_parts(
        algebra: Arc<PBAlgebra>,
        labels: Vec<String>,
        actions: Vec<QMatrix>,
    ) -> Result<Self, ModuleError> {
        let dim = labels.len();
        if actions.len() != algebra.dim() {
            return Err(ModuleError::ActionCountMismatch {
                expected: algebra.dim(),
                got: actions.len(),
            });
        }
        for m in &actions {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(ModuleError::ShapeMismatch {
                    expected: dim,
                    got_rows: m.nrows(),
                    got_cols: m.ncols(),
                });
            }
        }
        Ok(Self {
            algebra,
            dim,
            labels,
            actions,
        })
    }

    /// The left regular module of the algebra in its own basis.
    pub fn regular(algebra: Arc<PBAlgebra>) -> Self {
        let actions = (0..algebra.dim())
            .map(|i| algebra.basis_action_matrix(i))
            .collect();
        let labels = algebra.labels().to_vec();
        Self {
            dim: algebra.dim(),
            algebra,
            labels,
            actions,
        }
    }

    pub fn algebra(&self) -> &Arc<PBAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Action matrix of the algebra basis element a_i.
    pub fn action(&self, i: usize) -> &QMatrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[QMatrix] {
        &self.actions
    }

    /// Exact action matrix of an arbitrary element.
    pub fn element_action(&self, coeffs: &[Rat]) -> QMatrix {
        assert_eq!(coeffs.len(), self.algebra.dim());
        let mut m = QMatrix::zeros(self.dim, self.dim);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.add_scaled(&self.actions[i], c);
            }
        }
        m
    }

    /// Full exact invariant check: unit acts as identity, entries are
    /// nonnegative, and action(a_i) action(a_j) = sum_k gamma(i,j,k) action(a_k).
    pub fn check_invariants(&self) -> Result<(), ModuleError> {
        let n = self.algebra.dim();
        if *self.action(self.algebra.unit_index()) != QMatrix::identity(self.dim) {
            return Err(ModuleError::UnitActionNotIdentity);
        }
        for (i, m) in self.actions.iter().enumerate() {
            if m.rows_iter().any(|row| row.iter().any(|x| x.is_negative())) {
                return Err(ModuleError::NegativeEntry { basis: i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.actions[i].mul(&self.actions[j]);
                let mut rhs = QMatrix::zeros(self.dim, self.dim);
                for (k, g) in self.algebra.product_terms(i, j) {
                    rhs.add_scaled(&self.actions[k], g);
                }
                if lhs != rhs {
                    return Err(ModuleError::CompatibilityFailed(i, j));
                }
            }
        }
        Ok(())
    }

    /// True iff the union of the supports of all action matrices is a
    /// strongly connected relation on the basis.
    pub fn is_transitive(&self) -> bool {
        if self.dim == 0 {
            return false;
        }
        let mut adj = vec![BTreeSet::new(); self.dim];
        for m in &self.actions {
            for t in 0..self.dim {
                for s in 0..self.dim {
                    if m[(t, s)].is_positive() {
                        adj[s].insert(t);
                    }
                }
            }
        }
        let adj: Vec<Vec<usize>> = adj.into_iter().map(|s| s.into_iter().collect()).collect();
        crate::cells::scc_count(&adj) == 1
    }

    /// Block-diagonal sum with another module over the same algebra.
    pub fn direct_sum(&self, other: &BasedModule) -> BasedModule {
        assert!(Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra);
        let dim = self.dim + other.dim;
        let actions = self
            .actions
            .iter()
            .zip(other.actions.iter())
            .map(|(a, b)| {
                let mut m = QMatrix::zeros(dim, dim);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m[(i, j)] = a[(i, j)].clone();
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m[(self.dim + i, self.dim + j)] = b[(i, j)].clone();
                    }
                }
                m
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .map(|l| format!("{l}+"))
            .chain(other.labels.iter().map(|l| format!("+{l}")))
            .collect();
        BasedModule {
            algebra: self.algebra.clone(),
            dim,
            labels,
            actions,
        }
    }
}

/// The cell module C_L = M_L / N_L of a left cell: basis indexed by L, with
/// action matrices read off directly from the structure constants.
pub fn cell_module(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    left_cell: usize,
) -> Result<BasedModule, ModuleError> {
    let members = cd.members(CellKind::Left, left_cell)?.to_vec();
    let m = members.len();
    let pos = position_map(alg.dim(), &members);
    let actions = (0..alg.dim())
        .map(|i| {
            let mut mat = QMatrix::zeros(m, m);
            for (jpos, &j) in members.iter().enumerate() {
                for (k, g) in alg.product_terms(i, j) {
                    if let Some(kpos) = pos[k] {
                        mat[(kpos, jpos)] = g.clone();
                    }
                }
            }
            mat
        })
        .collect();
    let labels = members.iter().map(|&i| alg.label(i).to_string()).collect();
    BasedModule::from_parts(alg.clone(), labels, actions)
}

/// The quotient algebra A_J = A / I_J with basis everything <=_J J, plus the
/// embedding data back into the original index set.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    pub algebra: PBAlgebra,
    /// Old basis indices retained, increasing; `kept[new] = old`.
    pub kept: Vec<usize>,
    /// Positions of old indices in the quotient basis.
    pub position: Vec<Option<usize>>,
}

pub fn quotient_algebra(
    alg: &PBAlgebra,
    cd: &CellDecomposition,
    two_sided: usize,
) -> Result<QuotientAlgebra, ModuleError> {
    let kept = cd.downward_closure(CellKind::TwoSided, two_sided)?;
    let position = position_map(alg.dim(), &kept);
    let mut entries = Vec::new();
    for (&(i, j, k), v) in alg.gamma_iter() {
        if let (Some(ni), Some(nj), Some(nk)) = (position[i], position[j], position[k]) {
            entries.push((ni, nj, nk, v.clone()));
        }
    }
    let labels = kept.iter().map(|&i| alg.label(i).to_string()).collect();
    let unit = position[alg.unit_index()]
        .expect("the unit cell is minimal, hence in every downward closure");
    let algebra =
        PBAlgebra::new(kept.len(), labels, unit, entries).expect("indices are remapped in range");
    Ok(QuotientAlgebra {
        algebra,
        kept,
        position,
    })
}

/// Intertwiner between two cell modules in one two-sided cell: right
/// multiplication by a witness basis element followed by projection.
#[derive(Debug, Clone)]
pub struct CellMorphism {
    /// Matrix of the map C_from -> C_to in the standard bases.
    pub matrix: QMatrix,
    /// Basis index used for the right multiplication.
    pub witness: usize,
}

pub fn cell_morphism(
    alg: &PBAlgebra,
    cd: &CellDecomposition,
    from: usize,
    to: usize,
) -> Result<CellMorphism, ModuleError> {
    let from_members = cd.members(CellKind::Left, from)?.to_vec();
    let to_members = cd.members(CellKind::Left, to)?.to_vec();
    let j_from = cd.cell_of(CellKind::TwoSided, from_members[0]);
    let j_to = cd.cell_of(CellKind::TwoSided, to_members[0]);
    if j_from != j_to {
        return Err(ModuleError::NotSameTwoSidedCell(from, to));
    }
    for other in cd.left_cells_in(j_to)? {
        if other != to
            && cd.cell_leq(CellKind::Left, other, to)?
            && !cd.cell_leq(CellKind::Left, to, other)?
        {
            return Err(ModuleError::TargetNotMinimal(to));
        }
    }
    let in_to = position_map(alg.dim(), &to_members);
    // First witness in increasing index order; any witness yields an equally
    // valid map.
    let witness = (0..alg.dim())
        .find(|&j| {
            from_members.iter().any(|&i| {
                alg.product_terms(i, j)
                    .any(|(k, v)| v.is_positive() && in_to[k].is_some())
            })
        })
        .ok_or(ModuleError::NoWitness)?;
    let mut matrix = QMatrix::zeros(to_members.len(), from_members.len());
    for (xpos, &x) in from_members.iter().enumerate() {
        for (k, g) in alg.product_terms(x, witness) {
            if let Some(kpos) = in_to[k] {
                matrix[(kpos, xpos)] = g.clone();
            }
        }
    }
    if matrix.is_zero() {
        return Err(ModuleError::NoWitness);
    }
    Ok(CellMorphism { matrix, witness })
}

/// Exact equivariance check of an intertwiner against two cell modules.
pub fn check_morphism_equivariance(
    morphism: &CellMorphism,
    from: &BasedModule,
    to: &BasedModule,
) -> Result<(), ModuleError> {
    for i in 0..from.algebra().dim() {
        let lhs = morphism.matrix.mul(from.action(i));
        let rhs = to.action(i).mul(&morphism.matrix);
        if lhs != rhs {
            return Err(ModuleError::MorphismNotEquivariant { basis: i });
        }
    }
    Ok(())
}

/// M(J) = X/Y: the subquotient of the regular module spanned by one
/// two-sided cell.
pub fn mj_module(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    two_sided: usize,
) -> Result<BasedModule, ModuleError> {
    let members = cd.members(CellKind::TwoSided, two_sided)?.to_vec();
    let m = members.len();
    let pos = position_map(alg.dim(), &members);
    let actions = (0..alg.dim())
        .map(|s| {
            let mut mat = QMatrix::zeros(m, m);
            for (jpos, &j) in members.iter().enumerate() {
                for (k, g) in alg.product_terms(s, j) {
                    if let Some(kpos) = pos[k] {
                        mat[(kpos, jpos)] = g.clone();
                    }
                }
            }
            mat
        })
        .collect();
    let labels = members.iter().map(|&i| alg.label(i).to_string()).collect();
    BasedModule::from_parts(alg.clone(), labels, actions)
}

/// The coinvariant-induced module of an idempotent monoid element, together
/// with the data used to build it.
#[derive(Debug, Clone)]
pub struct DeltaModule {
    pub module: BasedModule,
    /// Basis index of the idempotent e.
    pub idempotent: usize,
    /// The maximal subgroup at e: the H-class of e, as basis indices.
    pub group: Vec<usize>,
    /// Left cell id of e.
    pub left_cell: usize,
}

/// Recovers the monoid multiplication table of a standard-basis monoid
/// algebra: every product must be a single basis element with coefficient 1.
pub fn monoid_table_of(alg: &PBAlgebra) -> Option<Vec<Vec<usize>>> {
    let n = alg.dim();
    let mut table = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut terms = alg.product_terms(i, j);
            let (k, v) = terms.next()?;
            if terms.next().is_some() || !v.is_one() {
                return None;
            }
            table[i][j] = k;
        }
    }
    Some(table)
}

/// Delta(L_e, triv): the cell module of the left cell of an idempotent e,
/// with the right action of the maximal subgroup at e factored out.
pub fn delta_module(
    alg: &Arc<PBAlgebra>,
    cd: &CellDecomposition,
    e: usize,
) -> Result<DeltaModule, ModuleError> {
    let table = monoid_table_of(alg).ok_or(ModuleError::NotMonoidBacked)?;
    if table[e][e] != e {
        return Err(ModuleError::NotIdempotent(e));
    }
    let left_cell = cd.cell_of(CellKind::Left, e);
    let right_cell = cd.cell_of(CellKind::Right, e);
    let group: Vec<usize> = (0..alg.dim())
        .filter(|&x| {
            cd.cell_of(CellKind::Left, x) == left_cell
                && cd.cell_of(CellKind::Right, x) == right_cell
        })
        .collect();
    let members = cd.members(CellKind::Left, left_cell)?.to_vec();
    let pos = position_map(alg.dim(), &members);
    // Orbits of the right group action x -> x*g on the left cell.
    let mut orbit_of = vec![usize::MAX; members.len()];
    let mut reps = Vec::new();
    for (p, &x) in members.iter().enumerate() {
        if orbit_of[p] != usize::MAX {
            continue;
        }
        let orbit = reps.len();
        reps.push(x);
        let mut stack = vec![x];
        orbit_of[p] = orbit;
        while let Some(y) = stack.pop() {
            for &g in &group {
                let yg = table[y][g];
                let Some(q) = pos[yg] else {
                    return Err(ModuleError::Consistency(format!(
                        "right multiplication by H-class element {g} leaves the left cell"
                    )));
                };
                if orbit_of[q] == usize::MAX {
                    orbit_of[q] = orbit;
                    stack.push(yg);
                }
            }
        }
    }
    let q = reps.len();
    let mut actions = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let mut mat = QMatrix::zeros(q, q);
        for (o, &rep) in reps.iter().enumerate() {
            let p = table[i][rep];
            if let Some(pp) = pos[p] {
                mat[(orbit_of[pp], o)] = Rat::one();
            }
        }
        // The quotient is well-defined: every member of an orbit must induce
        // the same map. Verified exactly.
        for (p, &x) in members.iter().enumerate() {
            let o = orbit_of[p];
            let img = table[i][x];
            let expected = pos[img].map(|pp| orbit_of[pp]);
            let col_target = (0..q).find(|&r| mat[(r, o)].is_one());
            if expected != col_target {
                return Err(ModuleError::Consistency(
                    "coinvariant action is not constant on orbits".into(),
                ));
            }
        }
        actions.push(mat);
    }
    let labels = reps
        .iter()
        .map(|&r| format!("[{}]", alg.label(r)))
        .collect();
    let module = BasedModule::from_parts(alg.clone(), labels, actions)?;
    Ok(DeltaModule {
        module,
        idempotent: e,
        group,
        left_cell,
    })
}

fn position_map(ambient: usize, members: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; ambient];
    for (p, &i) in members.iter().enumerate() {
        pos[i] = Some(p);
    }
    pos
}
