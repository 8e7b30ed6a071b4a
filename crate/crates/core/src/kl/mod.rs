//! Kazhdan-Lusztig bases of finite Weyl groups and the positively based
//! group algebra they span at the specialization v = 1.
//!
//! The basis is built by induction on length, multiplying in the standard
//! basis of the Hecke algebra (quadratic relation H_s^2 = (v^-1 - v) H_s +
//! H_e) and subtracting mu-corrections. All arithmetic is exact.

pub mod laurent;
pub mod weyl;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, PBAlgebra};
use crate::scalar::Rat;
pub use laurent::LaurentPoly;
pub use weyl::{cartan_of_type, enumerate_weyl, enumerate_weyl_with_cap, WeylGroup};

#[derive(Debug, Error, PartialEq)]
pub enum KlError {
    #[error("rank {rank} exceeds the supported cap of {}", weyl::RANK_CAP)]
    RankCapExceeded { rank: usize },
    #[error("Cartan matrix is not of finite type")]
    NotFiniteType,
    #[error("group order exceeds the cap of {cap}; raise the cap to proceed")]
    OrderCapExceeded { cap: usize },
    #[error("invalid Cartan matrix: {0}")]
    BadCartanMatrix(String),
    #[error("basis coefficient h({x}, {w}) violates positivity or integrality")]
    PositivityViolation { x: usize, w: usize },
    #[error("structure constant gamma({x}, {y}, {k}) specializes negatively")]
    NegativeSpecialization { x: usize, y: usize, k: usize },
    #[error("structure constant gamma({x}, {y}, {k}) is not an integer")]
    NonIntegerStructureConstant { x: usize, y: usize, k: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

impl KlError {
    pub fn is_consistency(&self) -> bool {
        matches!(
            self,
            KlError::PositivityViolation { .. }
                | KlError::NegativeSpecialization { .. }
                | KlError::NonIntegerStructureConstant { .. }
                | KlError::Internal(_)
        )
    }
}

/// Standard-basis expansions of the Kazhdan-Lusztig basis elements and the
/// mu table.
#[derive(Debug, Clone)]
pub struct KLBasisData {
    /// h[w]: map x -> h_{x,w}; the expansion of the KL element of w.
    h: Vec<BTreeMap<usize, LaurentPoly>>,
    /// Nonzero mu(x, w): the coefficient of v in h_{x,w}.
    mu: BTreeMap<(usize, usize), Rat>,
}

impl KLBasisData {
    pub fn h_poly(&self, x: usize, w: usize) -> LaurentPoly {
        self.h[w].get(&x).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn expansion(&self, w: usize) -> &BTreeMap<usize, LaurentPoly> {
        &self.h[w]
    }

    pub fn mu(&self, x: usize, w: usize) -> Rat {
        self.mu
            .get(&(x, w))
            .cloned()
            .unwrap_or_else(|| Rat::from_integer(0.into()))
    }

    pub fn mu_table(&self) -> &BTreeMap<(usize, usize), Rat> {
        &self.mu
    }
}

/// Left multiplication by H_s on a standard-basis vector:
/// H_s H_x = H_{sx} when it goes up, H_{sx} + (v^-1 - v) H_x when it goes down.
fn lmul_standard(
    group: &WeylGroup,
    s: usize,
    vec: &BTreeMap<usize, LaurentPoly>,
) -> BTreeMap<usize, LaurentPoly> {
    let mut out: BTreeMap<usize, LaurentPoly> = BTreeMap::new();
    for (&x, p) in vec {
        let sx = group.left_mul(s, x);
        add_poly(&mut out, sx, p.clone());
        if group.length(sx) < group.length(x) {
            let mut q = LaurentPoly::zero();
            q.add_shifted(p, -1);
            let mut minus_v = LaurentPoly::zero();
            minus_v.add_shifted(p, 1);
            q.sub_assign(&minus_v);
            add_poly(&mut out, x, q);
        }
    }
    out
}

fn add_poly(map: &mut BTreeMap<usize, LaurentPoly>, key: usize, p: LaurentPoly) {
    if p.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(LaurentPoly::zero);
    entry.add_assign(&p);
    if entry.is_zero() {
        map.remove(&key);
    }
}

/// Inductive construction of all KL basis elements.
pub fn kl_basis(group: &WeylGroup) -> Result<KLBasisData, KlError> {
    let order = group.order();
    let mut h: Vec<BTreeMap<usize, LaurentPoly>> = Vec::with_capacity(order);
    let mut mu: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
    for w in 0..order {
        if group.length(w) == 0 {
            let mut e = BTreeMap::new();
            e.insert(w, LaurentPoly::one());
            h.push(e);
            continue;
        }
        let s = *group
            .left_descents(w)
            .first()
            .ok_or_else(|| KlError::Internal(format!("element {w} has no left descent")))?;
        let u = group.left_mul(s, w);
        debug_assert!(u < w, "elements are enumerated by length");
        // (H_s + v H_e) * KL(u) in the standard basis.
        let mut out = lmul_standard(group, s, &h[u]);
        for (&x, p) in &h[u] {
            let mut shifted = LaurentPoly::zero();
            shifted.add_shifted(p, 1);
            add_poly(&mut out, x, shifted);
        }
        // Subtract mu(x, u) KL(x) over x with sx < x.
        let corrections: Vec<(usize, Rat)> = h[u]
            .iter()
            .filter(|(&x, _)| group.length(group.left_mul(s, x)) < group.length(x))
            .map(|(&x, p)| (x, p.coeff(1)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        for (x, m) in corrections {
            for (&t, q) in h[x].clone().iter() {
                let mut scaled = LaurentPoly::zero();
                scaled.add_scaled(q, &m);
                let entry = out.entry(t).or_insert_with(LaurentPoly::zero);
                entry.sub_assign(&scaled);
                if entry.is_zero() {
                    out.remove(&t);
                }
            }
        }
        // Invariants: h_{w,w} = 1; for x != w only strictly positive
        // exponents; all coefficients nonnegative integers.
        match out.get(&w) {
            Some(p) if *p == LaurentPoly::one() => {}
            _ => {
                return Err(KlError::Internal(format!(
                    "KL element of {w} is not unitriangular"
                )))
            }
        }
        for (&x, p) in &out {
            if x != w && p.min_exp().is_some_and(|e| e < 1) {
                return Err(KlError::PositivityViolation { x, w });
            }
            if !p.is_integral() || p.terms().any(|(_, c)| c.is_negative()) {
                return Err(KlError::PositivityViolation { x, w });
            }
            if x != w {
                let m = p.coeff(1);
                if !m.is_zero() {
                    mu.insert((x, w), m);
                }
            }
        }
        h.push(out);
    }
    Ok(KLBasisData { h, mu })
}

/// The group algebra `Q[W]` in the KL basis: structure constants of
/// KL(x) KL(y) expanded back through the unitriangular change of basis and
/// specialized at v = 1. All constants are nonnegative integers.
///
/// At v = 1 the standard basis multiplies as the group itself, so each
/// product is an integer group-algebra convolution of the two expansion
/// columns followed by a sparse unitriangular back-substitution. Everything
/// runs in checked i64.
pub fn kl_algebra(group: &WeylGroup, kl: &KLBasisData) -> Result<PBAlgebra, KlError> {
    let order = group.order();
    let overflow = || KlError::Internal("integer overflow in structure constants".into());
    // Sparse integer expansion columns at v = 1.
    let mut h1: Vec<Vec<(usize, i64)>> = Vec::with_capacity(order);
    for (w, col) in kl.h.iter().enumerate() {
        let mut entries = Vec::with_capacity(col.len());
        for (&x, p) in col {
            let value = p.eval_at_one();
            if !value.is_integer() {
                return Err(KlError::NonIntegerStructureConstant { x, y: w, k: w });
            }
            let v: i64 = value
                .to_integer()
                .try_into()
                .map_err(|_| overflow())?;
            entries.push((x, v));
        }
        h1.push(entries);
    }
    // Full multiplication table, via the reduced words.
    let mut table: Vec<usize> = vec![0; order * order];
    for u in 0..order {
        for t in 0..order {
            let mut p = u;
            for &s in group.word(t) {
                p = group.right_mul(p, s);
            }
            table[u * order + t] = p;
        }
    }
    let mut by_length_desc: Vec<usize> = (0..order).collect();
    by_length_desc.sort_by_key(|&w| std::cmp::Reverse(group.length(w)));

    let mut entries: Vec<(usize, usize, usize, Rat)> = Vec::new();
    let mut prod = vec![0i64; order];
    for x in 0..order {
        for y in 0..order {
            for &(u, cu) in &h1[x] {
                let row = &table[u * order..(u + 1) * order];
                for &(t, ct) in &h1[y] {
                    let term = cu.checked_mul(ct).ok_or_else(overflow)?;
                    let slot = &mut prod[row[t]];
                    *slot = slot.checked_add(term).ok_or_else(overflow)?;
                }
            }
            // Unitriangular conversion to the KL basis.
            for &w in &by_length_desc {
                let c = prod[w];
                if c == 0 {
                    continue;
                }
                if c < 0 {
                    return Err(KlError::NegativeSpecialization { x, y, k: w });
                }
                entries.push((x, y, w, Rat::from_integer(c.into())));
                for &(t, ht) in &h1[w] {
                    let term = c.checked_mul(ht).ok_or_else(overflow)?;
                    prod[t] = prod[t].checked_sub(term).ok_or_else(overflow)?;
                }
            }
            if prod.iter().any(|&c| c != 0) {
                return Err(KlError::Internal(
                    "basis conversion left a nonzero remainder".into(),
                ));
            }
        }
    }
    Ok(PBAlgebra::new(
        order,
        group.labels().to_vec(),
        group.identity(),
        entries,
    )?)
}

/// Convenience: enumerate, build the basis, and emit the algebra.
pub fn kl_algebra_of_type(type_name: &str) -> Result<PBAlgebra, KlError> {
    let cartan = cartan_of_type(type_name)
        .ok_or_else(|| KlError::BadCartanMatrix(format!("unknown type `{type_name}`")))?;
    let group = enumerate_weyl(&cartan)?;
    let kl = kl_basis(&group)?;
    kl_algebra(&group, &kl)
}
