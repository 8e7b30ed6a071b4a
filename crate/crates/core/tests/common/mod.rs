//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use pba_core::algebra::PBAlgebra;
use pba_core::cells::{compute_cells, CellDecomposition, CellKind};
use pba_core::constructors::{from_cayley_table, monoid_closure, CayleyTable, Transformation};
use pba_core::kl::{enumerate_weyl, kl_algebra, kl_basis, cartan_of_type, KLBasisData, WeylGroup};

pub fn tf(images: &[usize]) -> Transformation {
    Transformation::new(images.to_vec()).unwrap()
}

pub fn c2_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 0])]).unwrap()
}

pub fn s3_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 2, 0]), tf(&[1, 0, 2])]).unwrap()
}

pub fn s4_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 2, 3, 0]), tf(&[1, 0, 2, 3])]).unwrap()
}

/// Dihedral group of order 8: symmetries of the square on its corners.
pub fn d4_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 2, 3, 0]), tf(&[1, 0, 3, 2])]).unwrap()
}

pub fn t2_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 0]), tf(&[0, 0])]).unwrap()
}

pub fn t3_table() -> CayleyTable {
    monoid_closure(&[tf(&[1, 2, 0]), tf(&[1, 0, 2]), tf(&[0, 0, 2])]).unwrap()
}

pub fn algebra_of(table: &CayleyTable) -> Arc<PBAlgebra> {
    Arc::new(from_cayley_table(table).unwrap())
}

pub struct KlFixture {
    pub group: WeylGroup,
    pub basis: KLBasisData,
    pub algebra: Arc<PBAlgebra>,
    pub cells: CellDecomposition,
}

fn kl_fixture(type_name: &str) -> KlFixture {
    let group = enumerate_weyl(&cartan_of_type(type_name).unwrap()).unwrap();
    let basis = kl_basis(&group).unwrap();
    let algebra = Arc::new(kl_algebra(&group, &basis).unwrap());
    let cells = compute_cells(&algebra);
    KlFixture {
        group,
        basis,
        algebra,
        cells,
    }
}

pub fn kl_a2() -> &'static KlFixture {
    static CELL: OnceLock<KlFixture> = OnceLock::new();
    CELL.get_or_init(|| kl_fixture("A2"))
}

pub fn kl_a3() -> &'static KlFixture {
    static CELL: OnceLock<KlFixture> = OnceLock::new();
    CELL.get_or_init(|| kl_fixture("A3"))
}

// ---------------------------------------------------------------------------
// Green's relations oracle: ideals computed directly on the monoid table.

pub struct GreenOracle {
    pub left_ideal: Vec<BTreeSet<usize>>,
    pub right_ideal: Vec<BTreeSet<usize>>,
    pub two_ideal: Vec<BTreeSet<usize>>,
}

impl GreenOracle {
    pub fn new(t: &CayleyTable) -> Self {
        let n = t.order();
        let left_ideal: Vec<BTreeSet<usize>> = (0..n)
            .map(|x| (0..n).map(|s| t.product(s, x)).collect())
            .collect();
        let right_ideal: Vec<BTreeSet<usize>> = (0..n)
            .map(|x| (0..n).map(|s| t.product(x, s)).collect())
            .collect();
        let two_ideal: Vec<BTreeSet<usize>> = (0..n)
            .map(|x| {
                let mut set = BTreeSet::new();
                for s in 0..n {
                    for u in 0..n {
                        set.insert(t.product(t.product(s, x), u));
                    }
                }
                set
            })
            .collect();
        Self {
            left_ideal,
            right_ideal,
            two_ideal,
        }
    }

    fn ideals(&self, kind: CellKind) -> &[BTreeSet<usize>] {
        match kind {
            CellKind::Left => &self.left_ideal,
            CellKind::Right => &self.right_ideal,
            CellKind::TwoSided => &self.two_ideal,
        }
    }

    /// Set partition of indices by equal ideals.
    pub fn partition(&self, kind: CellKind) -> BTreeSet<BTreeSet<usize>> {
        let ideals = self.ideals(kind);
        let mut classes: BTreeMap<&BTreeSet<usize>, BTreeSet<usize>> = BTreeMap::new();
        for (x, ideal) in ideals.iter().enumerate() {
            classes.entry(ideal).or_default().insert(x);
        }
        classes.into_values().collect()
    }

    /// The engine's preorder direction: i <= j iff j is reachable from i,
    /// i.e. the ideal of j is contained in the ideal of i.
    pub fn leq(&self, kind: CellKind, i: usize, j: usize) -> bool {
        let ideals = self.ideals(kind);
        ideals[j].is_subset(&ideals[i])
    }
}

/// Set partition of basis indices from a computed decomposition.
pub fn engine_partition(cd: &CellDecomposition, kind: CellKind) -> BTreeSet<BTreeSet<usize>> {
    cd.cells(kind)
        .iter()
        .map(|cell| cell.iter().copied().collect())
        .collect()
}

// ---------------------------------------------------------------------------
// RSK oracle: row insertion on permutations.

pub type Tableau = Vec<Vec<usize>>;

pub fn rsk(perm: &[usize]) -> (Tableau, Tableau) {
    let mut p: Tableau = Vec::new();
    let mut q: Tableau = Vec::new();
    for (step, &entry) in perm.iter().enumerate() {
        let mut val = entry;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![val]);
                q.push(vec![step]);
                break;
            }
            match p[row].iter().position(|&y| y > val) {
                None => {
                    p[row].push(val);
                    q[row].push(step);
                    break;
                }
                Some(pos) => {
                    std::mem::swap(&mut p[row][pos], &mut val);
                    row += 1;
                }
            }
        }
    }
    (p, q)
}

pub fn shape(t: &Tableau) -> Vec<usize> {
    t.iter().map(Vec::len).collect()
}

/// The permutation of a type-A Weyl group element: its reduced word read as
/// a product of adjacent transpositions.
pub fn type_a_permutation(group: &WeylGroup, w: usize) -> Vec<usize> {
    let n = group.rank() + 1;
    let mut perm: Vec<usize> = (0..n).collect();
    // In one-line notation, appending a letter s swaps positions s, s+1.
    for &s in group.word(w) {
        perm.swap(s, s + 1);
    }
    perm
}

/// Partition of group elements by a tableau-valued key.
pub fn fiber_partition<K: Ord>(
    group: &WeylGroup,
    key: impl Fn(usize) -> K,
) -> BTreeSet<BTreeSet<usize>> {
    let mut classes: BTreeMap<K, BTreeSet<usize>> = BTreeMap::new();
    for w in 0..group.order() {
        classes.entry(key(w)).or_default().insert(w);
    }
    classes.into_values().collect()
}
