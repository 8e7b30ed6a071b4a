//! Finite Weyl groups from integer Cartan matrices, enumerated in the
//! geometric representation.
//!
//! Group elements are integer matrices acting on simple-root coordinates;
//! equality is matrix equality. Lengths count positive roots sent negative,
//! and are cross-checked against breadth-first word length.

use std::collections::HashMap;

use super::KlError;

/// Hard ceiling on the group order; beyond it the type cannot be finite at
/// rank <= 4 (the largest is F4 with 1152 elements).
pub const HARD_ORDER_CAP: usize = 1200;
/// Default order cap; covers A1-A4, B2-B4, C2-C4, D4 and G2.
pub const DEFAULT_ORDER_CAP: usize = 400;
pub const RANK_CAP: usize = 4;
const ROOT_CAP: usize = 200;

type Mat = Vec<i64>; // rank x rank, row-major

#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    elements: Vec<Mat>,
    lengths: Vec<usize>,
    left_descents: Vec<Vec<usize>>,
    right_descents: Vec<Vec<usize>>,
    /// left_mul[s][w] = index of s * w.
    left_mul: Vec<Vec<usize>>,
    /// right_mul[s][w] = index of w * s.
    right_mul: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// Reduced word per element from the breadth-first search.
    words: Vec<Vec<usize>>,
    labels: Vec<String>,
    positive_roots: Vec<Vec<i64>>,
}

impl WeylGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn left_descents(&self, w: usize) -> &[usize] {
        &self.left_descents[w]
    }

    pub fn right_descents(&self, w: usize) -> &[usize] {
        &self.right_descents[w]
    }

    pub fn left_mul(&self, s: usize, w: usize) -> usize {
        self.left_mul[s][w]
    }

    pub fn right_mul(&self, w: usize, s: usize) -> usize {
        self.right_mul[s][w]
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn label(&self, w: usize) -> &str {
        &self.labels[w]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest_element(&self) -> usize {
        (0..self.order()).max_by_key(|&w| self.lengths[w]).unwrap()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    /// Index of the simple reflection s_i as a group element.
    pub fn simple(&self, i: usize) -> usize {
        self.left_mul[i][0]
    }
}

/// Standard Cartan matrices by type name: A1-A4, B2-B4, C2-C4, D4, F4, G2.
pub fn cartan_of_type(name: &str) -> Option<Vec<Vec<i64>>> {
    let name = name.trim().to_ascii_uppercase();
    if name.len() < 2 {
        return None;
    }
    let (family, rank_str) = name.split_at(1);
    let rank: usize = rank_str.parse().ok()?;
    let mut c = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
        if i + 1 < rank {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    match (family, rank) {
        ("A", 1..=4) => Some(c),
        ("B", 2..=4) => {
            // Double bond between the last two nodes: s_{r-1} long, s_r short.
            c[rank - 1][rank - 2] = -2;
            Some(c)
        }
        ("C", 2..=4) => {
            c[rank - 2][rank - 1] = -2;
            Some(c)
        }
        ("D", 4) => {
            // Fork: node 3 attaches to node 1 (0-indexed), not node 2.
            c[2][3] = 0;
            c[3][2] = 0;
            c[1][3] = -1;
            c[3][1] = -1;
            Some(c)
        }
        ("F", 4) => {
            c[1][2] = -2;
            Some(c)
        }
        ("G", 2) => {
            c[1][0] = -3;
            Some(c)
        }
        _ => None,
    }
}

pub fn enumerate_weyl(cartan: &[Vec<i64>]) -> Result<WeylGroup, KlError> {
    enumerate_weyl_with_cap(cartan, DEFAULT_ORDER_CAP)
}

pub fn enumerate_weyl_with_cap(
    cartan: &[Vec<i64>],
    order_cap: usize,
) -> Result<WeylGroup, KlError> {
    let rank = cartan.len();
    if rank == 0 {
        return Err(KlError::BadCartanMatrix("empty matrix".into()));
    }
    if rank > RANK_CAP {
        return Err(KlError::RankCapExceeded { rank });
    }
    for (i, row) in cartan.iter().enumerate() {
        if row.len() != rank {
            return Err(KlError::BadCartanMatrix("matrix is not square".into()));
        }
        if row[i] != 2 {
            return Err(KlError::BadCartanMatrix(format!(
                "diagonal entry ({i}, {i}) must be 2"
            )));
        }
        for j in 0..rank {
            if i != j {
                if row[j] > 0 {
                    return Err(KlError::BadCartanMatrix(format!(
                        "off-diagonal entry ({i}, {j}) must be nonpositive"
                    )));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(KlError::BadCartanMatrix(format!(
                        "zero pattern must be symmetric at ({i}, {j})"
                    )));
                }
                if cartan[i][j] * cartan[j][i] > 3 {
                    // Bond multiplicity 4 or more never gives a finite group.
                    return Err(KlError::NotFiniteType);
                }
            }
        }
    }
    let order_cap = order_cap.min(HARD_ORDER_CAP);

    // Simple reflection matrices: s_i(alpha_j) = alpha_j - C[i][j] alpha_i.
    let refl: Vec<Mat> = (0..rank)
        .map(|i| {
            let mut m = identity_mat(rank);
            for j in 0..rank {
                m[i * rank + j] -= cartan[i][j];
            }
            m
        })
        .collect();

    // Root system: close the simple roots under the simple reflections.
    let mut roots: Vec<Vec<i64>> = Vec::new();
    let mut root_index: HashMap<Vec<i64>, usize> = HashMap::new();
    for i in 0..rank {
        let mut e = vec![0i64; rank];
        e[i] = 1;
        root_index.insert(e.clone(), roots.len());
        roots.push(e);
    }
    let mut next = 0;
    while next < roots.len() {
        for s in &refl {
            let img = apply(s, &roots[next], rank);
            if !root_index.contains_key(&img) {
                if roots.len() >= 2 * ROOT_CAP {
                    return Err(KlError::NotFiniteType);
                }
                root_index.insert(img.clone(), roots.len());
                roots.push(img);
            }
        }
        next += 1;
    }
    let positive_roots: Vec<Vec<i64>> = roots
        .iter()
        .filter(|r| r.iter().all(|&x| x >= 0))
        .cloned()
        .collect();
    for r in &roots {
        let pos = r.iter().all(|&x| x >= 0);
        let neg = r.iter().all(|&x| x <= 0);
        if !pos && !neg {
            return Err(KlError::Internal(
                "root with mixed signs in a crystallographic system".into(),
            ));
        }
    }

    // Group closure by right multiplication with simple reflections.
    let mut elements: Vec<Mat> = vec![identity_mat(rank)];
    let mut index: HashMap<Mat, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut right_mul = vec![vec![usize::MAX; 1]; rank];
    let mut at = 0;
    while at < elements.len() {
        for s in 0..rank {
            let prod = mat_mul(&elements[at], &refl[s], rank);
            let idx = match index.get(&prod) {
                Some(&i) => i,
                None => {
                    if elements.len() >= HARD_ORDER_CAP {
                        return Err(KlError::NotFiniteType);
                    }
                    if elements.len() >= order_cap {
                        return Err(KlError::OrderCapExceeded { cap: order_cap });
                    }
                    let i = elements.len();
                    index.insert(prod.clone(), i);
                    let mut w = words[at].clone();
                    w.push(s);
                    words.push(w);
                    elements.push(prod);
                    for rm in right_mul.iter_mut() {
                        rm.push(usize::MAX);
                    }
                    i
                }
            };
            right_mul[s][at] = idx;
        }
        at += 1;
    }
    let order = elements.len();

    // Lengths by root-sign tracking, checked against word length.
    let mut lengths = Vec::with_capacity(order);
    for (w, m) in elements.iter().enumerate() {
        let neg = positive_roots
            .iter()
            .filter(|r| apply(m, r, rank).iter().all(|&x| x <= 0))
            .count();
        if neg != words[w].len() {
            return Err(KlError::Internal(format!(
                "length mismatch for element {w}: {neg} inverted roots vs word length {}",
                words[w].len()
            )));
        }
        lengths.push(neg);
    }

    let mut left_mul = vec![vec![usize::MAX; order]; rank];
    for s in 0..rank {
        for w in 0..order {
            let prod = mat_mul(&refl[s], &elements[w], rank);
            left_mul[s][w] = *index
                .get(&prod)
                .ok_or_else(|| KlError::Internal("left product missing from closure".into()))?;
        }
    }
    let mut inverse = vec![usize::MAX; order];
    for w in 0..order {
        let mut inv = identity_mat(rank);
        for &s in words[w].iter().rev() {
            inv = mat_mul(&inv, &refl[s], rank);
        }
        inverse[w] = *index
            .get(&inv)
            .ok_or_else(|| KlError::Internal("inverse missing from closure".into()))?;
    }

    let mut left_descents = Vec::with_capacity(order);
    let mut right_descents = Vec::with_capacity(order);
    for w in 0..order {
        let ld: Vec<usize> = (0..rank)
            .filter(|&s| lengths[left_mul[s][w]] < lengths[w])
            .collect();
        let rd: Vec<usize> = (0..rank)
            .filter(|&s| lengths[right_mul[s][w]] < lengths[w])
            .collect();
        for &s in &ld {
            if lengths[left_mul[s][w]] + 1 != lengths[w] {
                return Err(KlError::Internal("descent length step is not 1".into()));
            }
        }
        for &s in &rd {
            if lengths[right_mul[s][w]] + 1 != lengths[w] {
                return Err(KlError::Internal("descent length step is not 1".into()));
            }
        }
        left_descents.push(ld);
        right_descents.push(rd);
    }

    let labels = words
        .iter()
        .map(|w| {
            if w.is_empty() {
                "e".to_string()
            } else {
                w.iter().map(|s| (s + 1).to_string()).collect()
            }
        })
        .collect();

    Ok(WeylGroup {
        rank,
        cartan: cartan.to_vec(),
        elements,
        lengths,
        left_descents,
        right_descents,
        left_mul,
        right_mul,
        inverse,
        words,
        labels,
        positive_roots,
    })
}

fn identity_mat(rank: usize) -> Mat {
    let mut m = vec![0i64; rank * rank];
    for i in 0..rank {
        m[i * rank + i] = 1;
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat, rank: usize) -> Mat {
    let mut out = vec![0i64; rank * rank];
    for i in 0..rank {
        for k in 0..rank {
            let aik = a[i * rank + k];
            if aik != 0 {
                for j in 0..rank {
                    out[i * rank + j] += aik * b[k * rank + j];
                }
            }
        }
    }
    out
}

fn apply(m: &Mat, v: &[i64], rank: usize) -> Vec<i64> {
    (0..rank)
        .map(|i| (0..rank).map(|j| m[i * rank + j] * v[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_has_two_elements() {
        let w = enumerate_weyl(&cartan_of_type("A1").unwrap()).unwrap();
        assert_eq!(w.order(), 2);
        assert_eq!(w.length(w.longest_element()), 1);
    }

    #[test]
    fn a2_has_six_elements() {
        let w = enumerate_weyl(&cartan_of_type("A2").unwrap()).unwrap();
        assert_eq!(w.order(), 6);
        assert_eq!(w.length(w.longest_element()), 3);
        assert_eq!(w.num_positive_roots(), 3);
    }

    #[test]
    fn orders_match_the_classical_formulas() {
        // |S_{n+1}| for A_n; 2^n n! for B_n/C_n; 2^{n-1} n! for D_n; 12 for G2.
        for (t, expected) in [
            ("A3", 24),
            ("A4", 120),
            ("B2", 8),
            ("B3", 48),
            ("C3", 48),
            ("D4", 192),
            ("G2", 12),
        ] {
            let w = enumerate_weyl(&cartan_of_type(t).unwrap()).unwrap();
            assert_eq!(w.order(), expected, "type {t}");
        }
    }

    #[test]
    fn f4_needs_the_override_cap() {
        let c = cartan_of_type("F4").unwrap();
        assert!(matches!(
            enumerate_weyl(&c),
            Err(KlError::OrderCapExceeded { .. })
        ));
        let w = enumerate_weyl_with_cap(&c, 1200).unwrap();
        assert_eq!(w.order(), 1152);
    }

    #[test]
    fn affine_type_is_rejected() {
        let affine_a1 = vec![vec![2, -2], vec![-2, 2]];
        assert!(matches!(
            enumerate_weyl(&affine_a1),
            Err(KlError::NotFiniteType)
        ));
        // A cycle of single bonds (affine A2) passes the entry checks but has
        // infinitely many roots.
        let affine_a2 = vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]];
        assert!(matches!(
            enumerate_weyl(&affine_a2),
            Err(KlError::NotFiniteType)
        ));
    }

    #[test]
    fn rank_cap_is_enforced() {
        let mut c = vec![vec![0i64; 5]; 5];
        for i in 0..5 {
            c[i][i] = 2;
            if i + 1 < 5 {
                c[i][i + 1] = -1;
                c[i + 1][i] = -1;
            }
        }
        assert!(matches!(
            enumerate_weyl(&c),
            Err(KlError::RankCapExceeded { rank: 5 })
        ));
    }

    #[test]
    fn descents_are_consistent_with_lengths() {
        let w = enumerate_weyl(&cartan_of_type("B2").unwrap()).unwrap();
        for x in 0..w.order() {
            for s in 0..w.rank() {
                let sx = w.left_mul(s, x);
                let step = w.length(sx) as i64 - w.length(x) as i64;
                assert!(step == 1 || step == -1);
                assert_eq!(step == -1, w.left_descents(x).contains(&s));
            }
        }
    }

    #[test]
    fn identity_is_first_with_empty_word() {
        let w = enumerate_weyl(&cartan_of_type("A2").unwrap()).unwrap();
        assert_eq!(w.identity(), 0);
        assert_eq!(w.length(0), 0);
        assert_eq!(w.label(0), "e");
        assert_eq!(w.inverse(0), 0);
    }

    #[test]
    fn inverse_is_involutive_and_length_preserving() {
        let w = enumerate_weyl(&cartan_of_type("A3").unwrap()).unwrap();
        for x in 0..w.order() {
            assert_eq!(w.inverse(w.inverse(x)), x);
            assert_eq!(w.length(w.inverse(x)), w.length(x));
        }
    }
}
