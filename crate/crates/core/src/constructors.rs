//! Builders for positively based algebras: group and monoid Cayley tables,
//! transformation-monoid closures, and coset permutation modules.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::algebra::PBAlgebra;
use crate::based_modules::BasedModule;
use crate::linalg::QMatrix;
use crate::scalar::Rat;

pub const DEFAULT_CLOSURE_CAP: usize = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructorError {
    #[error("transformation image {image} out of range for degree {degree}")]
    ImageOutOfRange { image: usize, degree: usize },
    #[error("generators act on point sets of different sizes")]
    MixedDegrees,
    #[error("no generators given; the degree of the point set cannot be inferred")]
    NoGenerators,
    #[error("closure exceeded the cap of {cap} elements")]
    SizeCapExceeded { cap: usize },
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("table entry {entry} out of range for order {order}")]
    TableEntryOutOfRange { entry: usize, order: usize },
    #[error("table rows must form a square matrix matching the label count")]
    BadTableShape,
    #[error("table is not a group: row or column {0} is not a permutation")]
    NotAGroup(usize),
    #[error("index set is not a subgroup: {reason}")]
    NotASubgroup { reason: String },
}

/// A self-map of {0, .., m-1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transformation {
    images: Vec<usize>,
}

impl Transformation {
    pub fn new(images: Vec<usize>) -> Result<Self, ConstructorError> {
        let degree = images.len();
        for &im in &images {
            if im >= degree {
                return Err(ConstructorError::ImageOutOfRange { image: im, degree });
            }
        }
        Ok(Self { images })
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition (f.compose(g))(x) = f(g(x)): apply `g` first. This fixed
    /// convention determines which Green relation the engine calls "left".
    pub fn compose(&self, g: &Transformation) -> Transformation {
        Transformation {
            images: g.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Compact label: digit string for degree <= 10, bracketed list otherwise.
    pub fn label(&self) -> String {
        if self.degree() <= 10 {
            self.images.iter().map(|x| x.to_string()).collect()
        } else {
            format!(
                "[{}]",
                self.images
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

/// Multiplication table of a finite monoid with named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyTable {
    order: usize,
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
}

impl CayleyTable {
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, ConstructorError> {
        let order = table.len();
        if labels.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(ConstructorError::BadTableShape);
        }
        for row in &table {
            for &e in row {
                if e >= order {
                    return Err(ConstructorError::TableEntryOutOfRange { entry: e, order });
                }
            }
        }
        Ok(Self {
            order,
            table,
            labels,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Index of the two-sided identity, if any.
    pub fn identity(&self) -> Option<usize> {
        (0..self.order).find(|&e| {
            (0..self.order).all(|x| self.table[e][x] == x && self.table[x][e] == x)
        })
    }

    pub fn check_monoid(&self) -> Result<usize, ConstructorError> {
        let id = self.identity().ok_or(ConstructorError::NoIdentity)?;
        for i in 0..self.order {
            for j in 0..self.order {
                for k in 0..self.order {
                    if self.table[self.table[i][j]][k] != self.table[i][self.table[j][k]] {
                        return Err(ConstructorError::NotAssociative(i, j, k));
                    }
                }
            }
        }
        Ok(id)
    }

    /// A monoid table is a group iff every row and column is a permutation.
    pub fn check_group(&self) -> Result<usize, ConstructorError> {
        let id = self.check_monoid()?;
        for i in 0..self.order {
            let mut row_seen = vec![false; self.order];
            let mut col_seen = vec![false; self.order];
            for j in 0..self.order {
                row_seen[self.table[i][j]] = true;
                col_seen[self.table[j][i]] = true;
            }
            if row_seen.iter().any(|&s| !s) || col_seen.iter().any(|&s| !s) {
                return Err(ConstructorError::NotAGroup(i));
            }
        }
        Ok(id)
    }

    /// Relabels elements in sorted-label order (identity untouched by value,
    /// only its position moves). Used to compare closures built from
    /// differently ordered generator lists.
    pub fn canonical_form(&self) -> CayleyTable {
        let mut order: Vec<usize> = (0..self.order).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut position = vec![0usize; self.order];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let table = order
            .iter()
            .map(|&a| order.iter().map(|&b| position[self.table[a][b]]).collect())
            .collect();
        let labels = order.iter().map(|&a| self.labels[a].clone()).collect();
        CayleyTable {
            order: self.order,
            table,
            labels,
        }
    }
}

/// The monoid algebra of a valid Cayley table: gamma(i, j, k) = 1 iff
/// `table[i][j] = k`. All structure constants are zero or one.
pub fn from_cayley_table(t: &CayleyTable) -> Result<PBAlgebra, ConstructorError> {
    let id = t.check_monoid()?;
    let entries = (0..t.order())
        .flat_map(|i| (0..t.order()).map(move |j| (i, j, t.product(i, j), Rat::one())))
        .collect();
    Ok(PBAlgebra::new(t.order(), t.labels().to_vec(), id, entries)
        .expect("table indices are in range"))
}

/// Breadth-first closure of a set of transformations under composition.
/// The identity is adjoined when absent and always comes first; the remaining
/// elements appear in discovery order.
pub fn monoid_closure(gens: &[Transformation]) -> Result<CayleyTable, ConstructorError> {
    monoid_closure_with_cap(gens, DEFAULT_CLOSURE_CAP)
}

pub fn monoid_closure_with_cap(
    gens: &[Transformation],
    cap: usize,
) -> Result<CayleyTable, ConstructorError> {
    let degree = gens.first().ok_or(ConstructorError::NoGenerators)?.degree();
    if gens.iter().any(|g| g.degree() != degree) {
        return Err(ConstructorError::MixedDegrees);
    }
    let mut elems: Vec<Transformation> = vec![Transformation::identity(degree)];
    let mut index: HashMap<Transformation, usize> = HashMap::new();
    index.insert(elems[0].clone(), 0);
    let mut uniq_gens: Vec<Transformation> = Vec::new();
    for g in gens {
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
        if !uniq_gens.contains(g) {
            uniq_gens.push(g.clone());
        }
    }
    let mut next = 0;
    while next < elems.len() {
        for g in &uniq_gens {
            let prod = elems[next].compose(g);
            if !index.contains_key(&prod) {
                if elems.len() == cap {
                    return Err(ConstructorError::SizeCapExceeded { cap });
                }
                index.insert(prod.clone(), elems.len());
                elems.push(prod);
            }
        }
        next += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&a.compose(b)]).collect())
        .collect();
    let labels = elems.iter().map(Transformation::label).collect();
    CayleyTable::new(table, labels)
}

/// The permutation module of a group acting on left cosets gH. Every action
/// matrix is a column-stochastic 0/1 matrix.
pub fn coset_module(
    t: &CayleyTable,
    subgroup: &[usize],
) -> Result<BasedModule, ConstructorError> {
    let id = t.check_group()?;
    let n = t.order();
    let mut in_subgroup = vec![false; n];
    for &h in subgroup {
        if h >= n {
            return Err(ConstructorError::NotASubgroup {
                reason: format!("index {h} out of range"),
            });
        }
        in_subgroup[h] = true;
    }
    if !in_subgroup[id] {
        return Err(ConstructorError::NotASubgroup {
            reason: "identity missing".into(),
        });
    }
    let members: Vec<usize> = (0..n).filter(|&x| in_subgroup[x]).collect();
    for &a in &members {
        for &b in &members {
            if !in_subgroup[t.product(a, b)] {
                return Err(ConstructorError::NotASubgroup {
                    reason: format!(
                        "not closed: {} * {} lands outside",
                        t.labels()[a],
                        t.labels()[b]
                    ),
                });
            }
        }
    }
    // Left cosets gH, represented by their smallest member.
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for g in 0..n {
        if coset_of[g] != usize::MAX {
            continue;
        }
        let c = reps.len();
        for &h in &members {
            coset_of[t.product(g, h)] = c;
        }
        reps.push(g);
    }
    let m = reps.len();
    let algebra = Arc::new(from_cayley_table(t).expect("already validated"));
    let actions = (0..n)
        .map(|g| {
            let mut mat = QMatrix::zeros(m, m);
            for (c, &rep) in reps.iter().enumerate() {
                mat[(coset_of[t.product(g, rep)], c)] = Rat::one();
            }
            mat
        })
        .collect();
    let labels = reps
        .iter()
        .map(|&r| format!("{}H", t.labels()[r]))
        .collect();
    Ok(BasedModule::from_parts(algebra, labels, actions).expect("coset action is well-formed"))
}
