//! Sparse vectors and exact linear algebra over [`Cyclotomic`] scalars.
//!
//! Everything here is exact: Gaussian elimination keeps rational-cyclotomic
//! entries and never rounds. Linear maps are stored column-major as sparse
//! columns (column `j` is the image of basis vector `j`).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::scalar::Cyclotomic;

/// Sorted-by-index list of nonzero entries.
pub type SparseVec = Vec<(usize, Cyclotomic)>;

/// Sort, merge duplicate indices, drop zeros.
pub fn sv_normalize(mut entries: Vec<(usize, Cyclotomic)>) -> SparseVec {
    entries.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, c) in entries {
        match out.last_mut() {
            Some((j, acc)) if *j == i => {
                *acc = acc.add(&c);
            }
            _ => out.push((i, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

pub fn sv_from_dense(v: &[Cyclotomic]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn sv_to_dense(v: &SparseVec, dim: usize) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); dim];
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

/// `a + scale * b`, normalized.
pub fn sv_add_scaled(a: &SparseVec, b: &SparseVec, scale: &Cyclotomic) -> SparseVec {
    if scale.is_zero() {
        return a.clone();
    }
    let mut merged: Vec<(usize, Cyclotomic)> = a.clone();
    for (i, c) in b {
        merged.push((*i, c.mul(scale)));
    }
    sv_normalize(merged)
}

pub fn sv_add(a: &SparseVec, b: &SparseVec) -> SparseVec {
    sv_add_scaled(a, b, &Cyclotomic::one())
}

pub fn sv_scale(a: &SparseVec, scale: &Cyclotomic) -> SparseVec {
    if scale.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, c)| (*i, c.mul(scale))).collect()
}

pub fn sv_get(a: &SparseVec, idx: usize) -> Cyclotomic {
    match a.binary_search_by_key(&idx, |(i, _)| *i) {
        Ok(p) => a[p].1.clone(),
        Err(_) => Cyclotomic::zero(),
    }
}

pub fn dense_add(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn dense_sub(a: &[Cyclotomic], b: &[Cyclotomic]) -> Vec<Cyclotomic> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn dense_scale(a: &[Cyclotomic], s: &Cyclotomic) -> Vec<Cyclotomic> {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn dense_is_zero(a: &[Cyclotomic]) -> bool {
    a.iter().all(Cyclotomic::is_zero)
}

pub fn dense_eq(a: &[Cyclotomic], b: &[Cyclotomic]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

pub fn dense_to_complex(a: &[Cyclotomic]) -> Vec<Complex64> {
    a.iter().map(Cyclotomic::to_complex).collect()
}

/// Apply a column-major sparse linear map to a dense vector.
pub fn map_apply(cols: &[SparseVec], dim_out: usize, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
    let mut out = vec![Cyclotomic::zero(); dim_out];
    for (j, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (i, m) in &cols[j] {
            out[*i] = out[*i].add(&m.mul(c));
        }
    }
    out
}

/// Apply a column-major sparse map to a sparse vector.
pub fn map_apply_sparse(cols: &[SparseVec], v: &SparseVec) -> SparseVec {
    let mut entries: Vec<(usize, Cyclotomic)> = Vec::new();
    for (j, c) in v {
        for (i, m) in &cols[*j] {
            entries.push((*i, m.mul(c)));
        }
    }
    sv_normalize(entries)
}

/// Columns of `f . g` (apply `g` first).
pub fn map_compose(f: &[SparseVec], g: &[SparseVec]) -> Vec<SparseVec> {
    g.iter().map(|col| map_apply_sparse(f, col)).collect()
}

pub fn map_identity(dim: usize) -> Vec<SparseVec> {
    (0..dim).map(|j| vec![(j, Cyclotomic::one())]).collect()
}

pub fn map_eq(f: &[SparseVec], g: &[SparseVec]) -> bool {
    f.len() == g.len() && f.iter().zip(g).all(|(a, b)| a == b)
}

/// Incremental exact row reduction: rows are pushed one at a time and kept
/// in reduced row-echelon form, so rank and kernel are available at any
/// point without holding the full row stream.
pub struct Eliminator {
    ncols: usize,
    pivots: BTreeMap<usize, SparseVec>,
}

impl Eliminator {
    pub fn new(ncols: usize) -> Self {
        Eliminator {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduce a row against the current pivots without inserting it: clear
    /// every entry sitting in a pivot column, not just the leading one, so
    /// the reduced row-echelon invariant survives out-of-order insertion.
    pub fn reduce(&self, row: SparseVec) -> SparseVec {
        let mut row = sv_normalize(row);
        loop {
            let hit = row
                .iter()
                .find(|(i, _)| self.pivots.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            let Some((col, coeff)) = hit else {
                return row;
            };
            row = sv_add_scaled(&row, &self.pivots[&col], &coeff.neg());
        }
    }

    /// Insert a row; returns true when it increased the rank.
    pub fn push(&mut self, row: SparseVec) -> bool {
        let row = self.reduce(row);
        let Some((lead, coeff)) = row.first().map(|(i, c)| (*i, c.clone())) else {
            return false;
        };
        let normalized = sv_scale(&row, &coeff.inverse());
        // back-substitute into existing pivot rows to keep full RREF
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        for p in cols {
            let r = &self.pivots[&p];
            let c = sv_get(r, lead);
            if !c.is_zero() {
                let updated = sv_add_scaled(r, &normalized, &c.neg());
                self.pivots.insert(p, updated);
            }
        }
        self.pivots.insert(lead, normalized);
        true
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the kernel of the stacked row matrix, as dense vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Cyclotomic>> {
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if self.pivots.contains_key(&free) {
                continue;
            }
            let mut v = vec![Cyclotomic::zero(); self.ncols];
            v[free] = Cyclotomic::one();
            for (p, row) in &self.pivots {
                let c = sv_get(row, free);
                if !c.is_zero() {
                    v[*p] = c.neg();
                }
            }
            basis.push(v);
        }
        basis
    }

    pub fn kernel_dim(&self) -> usize {
        self.ncols - self.pivots.len()
    }
}

/// Rank of a matrix presented as sparse rows.
pub fn rank(rows: &[SparseVec], ncols: usize) -> usize {
    let mut e = Eliminator::new(ncols);
    for r in rows {
        e.push(r.clone());
    }
    e.rank()
}

/// Solve `A x = b` for the matrix with the given sparse rows. Returns a
/// particular solution (free variables zero) or `None` if inconsistent.
pub fn solve(rows: &[SparseVec], rhs: &[Cyclotomic], ncols: usize) -> Option<Vec<Cyclotomic>> {
    assert_eq!(rows.len(), rhs.len());
    let mut e = Eliminator::new(ncols + 1);
    for (r, b) in rows.iter().zip(rhs) {
        let mut row = r.clone();
        if !b.is_zero() {
            row.push((ncols, b.clone()));
        }
        e.push(row);
    }
    if e.pivots.contains_key(&ncols) {
        return None; // row [0 ... 0 | 1]
    }
    let mut x = vec![Cyclotomic::zero(); ncols];
    for (p, row) in &e.pivots {
        x[*p] = sv_get(row, ncols);
    }
    Some(x)
}
