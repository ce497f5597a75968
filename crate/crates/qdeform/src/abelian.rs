//! Finite abelian groups, their endomorphisms, and the Pontryagin pairing.
//!
//! A group is a direct sum of cyclic factors `Z/n_1 x ... x Z/n_l`. The
//! self-duality pairing is fixed once and for all as
//! `<s, t> = zeta_N ^ (sum_k (N/n_k) s_k t_k)` with `N = lcm(n_k)`, and the
//! transpose of an endomorphism is taken with respect to this pairing:
//! `<J s, t> = <s, J^t t>` for all `s, t`.
//!
//! Endomorphism matrices are validated at construction against the
//! homomorphism constraint `n_k | m_{kj} * n_j`; silently reducing invalid
//! entries would corrupt transpose computations downstream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Cyclotomic;

/// A finite abelian group presented as a direct sum of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

/// An element, stored with coordinate `k` reduced mod the `k`-th factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Concatenate coordinates (element of a direct sum).
    pub fn concat(&self, other: &GroupElement) -> GroupElement {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        GroupElement { coords }
    }

    /// Split into the first `k` coordinates and the rest.
    pub fn split_at(&self, k: usize) -> (GroupElement, GroupElement) {
        (
            GroupElement {
                coords: self.coords[..k].to_vec(),
            },
            GroupElement {
                coords: self.coords[k..].to_vec(),
            },
        )
    }
}

impl AbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Unsupported(
                "abelian group needs at least one cyclic factor".into(),
            ));
        }
        if factors.iter().any(|&n| n == 0) {
            return Err(Error::Unsupported("cyclic factor of order zero".into()));
        }
        Ok(AbelianGroup { factors })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Order of the root of unity the pairing takes values in.
    pub fn pairing_order(&self) -> u32 {
        let l = self.factors.iter().fold(1u64, |a, &n| num_integer::lcm(a, n));
        u32::try_from(l).expect("pairing order overflow")
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// Build an element, reducing each coordinate mod its factor.
    pub fn element(&self, coords: &[i64]) -> GroupElement {
        assert_eq!(coords.len(), self.factors.len(), "coordinate count");
        GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        }
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        coords[k] = 1 % self.factors[k];
        GroupElement { coords }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &n)| (n - x) % n)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Index in the enumeration order (mixed radix, last coordinate fastest).
    pub fn index(&self, a: &GroupElement) -> usize {
        let mut idx = 0u64;
        for (x, n) in a.coords.iter().zip(&self.factors) {
            idx = idx * n + x;
        }
        idx as usize
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coords = vec![0u64; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let n = self.factors[k] as usize;
            coords[k] = (idx % n) as u64;
            idx /= n;
        }
        GroupElement { coords }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order() as usize).map(|i| self.element_at(i))
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        AbelianGroup { factors }
    }
}

/// Exponent `e` such that `<s, t> = zeta_N^e`, with `N` the pairing order.
pub fn pairing_exponent(g: &AbelianGroup, s: &GroupElement, t: &GroupElement) -> u64 {
    let n = g.pairing_order() as u64;
    let mut acc = 0u64;
    for ((&a, &b), &m) in s.coords.iter().zip(&t.coords).zip(&g.factors) {
        acc = (acc + (n / m) % n * (a % m) % n * (b % m)) % n;
    }
    acc
}

/// The Pontryagin pairing `<s, t>` as an exact root of unity.
pub fn pairing(g: &AbelianGroup, s: &GroupElement, t: &GroupElement) -> Cyclotomic {
    Cyclotomic::zeta(g.pairing_order(), pairing_exponent(g, s, t) as i64)
}

/// An endomorphism, stored as `matrix[k][j]` = coordinate `k` of the image
/// of generator `j`, reduced mod the `k`-th factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    matrix: Vec<Vec<u64>>,
}

/// Serialized form: the group's factors together with the matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndomorphismJson {
    pub factors: Vec<u64>,
    pub matrix: Vec<Vec<i64>>,
}

impl Endomorphism {
    /// Validate and reduce a matrix of integers. Entry `(k, j)` must satisfy
    /// the homomorphism constraint `n_k | m_{kj} * n_j`.
    pub fn new(g: &AbelianGroup, entries: &[Vec<i64>]) -> Result<Self> {
        let l = g.rank();
        if entries.len() != l || entries.iter().any(|row| row.len() != l) {
            return Err(Error::DimensionMismatch {
                context: "endomorphism matrix shape".into(),
                left: entries.len(),
                right: l,
            });
        }
        let mut matrix = vec![vec![0u64; l]; l];
        for k in 0..l {
            let nk = g.factors[k];
            for j in 0..l {
                let nj = g.factors[j];
                let m = entries[k][j].rem_euclid(nk as i64) as u64;
                if (m * nj) % nk != 0 {
                    return Err(Error::InvalidEndomorphism {
                        row: k,
                        col: j,
                        entry: m,
                        row_order: nk,
                        col_order: nj,
                    });
                }
                matrix[k][j] = m;
            }
        }
        Ok(Endomorphism { matrix })
    }

    pub fn zero(g: &AbelianGroup) -> Self {
        Endomorphism {
            matrix: vec![vec![0; g.rank()]; g.rank()],
        }
    }

    pub fn identity(g: &AbelianGroup) -> Self {
        let mut m = vec![vec![0; g.rank()]; g.rank()];
        for k in 0..g.rank() {
            m[k][k] = 1 % g.factors[k];
        }
        Endomorphism { matrix: m }
    }

    pub fn matrix(&self) -> &[Vec<u64>] {
        &self.matrix
    }

    pub fn apply(&self, g: &AbelianGroup, x: &GroupElement) -> GroupElement {
        let l = g.rank();
        let mut coords = vec![0u64; l];
        for k in 0..l {
            let nk = g.factors[k];
            let mut acc = 0u64;
            for j in 0..l {
                acc = (acc + self.matrix[k][j] * (x.coords[j] % nk)) % nk;
            }
            coords[k] = acc;
        }
        GroupElement { coords }
    }

    /// Matrix of `self . other`.
    pub fn compose(&self, g: &AbelianGroup, other: &Endomorphism) -> Endomorphism {
        let l = g.rank();
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l {
            let nk = g.factors[k];
            for j in 0..l {
                let mut acc = 0u64;
                for i in 0..l {
                    acc = (acc + self.matrix[k][i] * (other.matrix[i][j] % nk)) % nk;
                }
                m[k][j] = acc;
            }
        }
        Endomorphism { matrix: m }
    }

    pub fn add(&self, g: &AbelianGroup, other: &Endomorphism) -> Endomorphism {
        let l = g.rank();
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l {
            for j in 0..l {
                m[k][j] = (self.matrix[k][j] + other.matrix[k][j]) % g.factors[k];
            }
        }
        Endomorphism { matrix: m }
    }

    pub fn negate(&self, g: &AbelianGroup) -> Endomorphism {
        let l = g.rank();
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l {
            for j in 0..l {
                m[k][j] = (g.factors[k] - self.matrix[k][j]) % g.factors[k];
            }
        }
        Endomorphism { matrix: m }
    }

    pub fn scale_int(&self, g: &AbelianGroup, c: u64) -> Endomorphism {
        let l = g.rank();
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l {
            for j in 0..l {
                m[k][j] = (self.matrix[k][j] * (c % g.factors[k])) % g.factors[k];
            }
        }
        Endomorphism { matrix: m }
    }

    /// Transpose with respect to the pairing: `<J s, t> = <s, J^t t>`.
    /// Entry `(j, k)` is `(n_j / n_k) * m_{kj} mod n_j`, an integer by the
    /// homomorphism constraint.
    pub fn transpose(&self, g: &AbelianGroup) -> Endomorphism {
        let l = g.rank();
        let mut m = vec![vec![0u64; l]; l];
        for j in 0..l {
            let nj = g.factors[j];
            for k in 0..l {
                let nk = g.factors[k];
                m[j][k] = (nj * self.matrix[k][j] / nk) % nj;
            }
        }
        Endomorphism { matrix: m }
    }

    /// Skew-symmetry means `J^t = -J` (entry-wise mod each factor).
    pub fn is_skew(&self, g: &AbelianGroup) -> bool {
        self.transpose(g) == self.negate(g)
    }

    pub fn is_invertible(&self, g: &AbelianGroup) -> bool {
        self.inverse(g).is_ok()
    }

    /// Invert by solving `J x = generator_j` for each generator (exhaustive
    /// search; group orders here are desk scale) and verifying both
    /// compositions are the identity.
    pub fn inverse(&self, g: &AbelianGroup) -> Result<Endomorphism> {
        let l = g.rank();
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(l);
        for j in 0..l {
            let target = g.generator(j);
            let mut found = None;
            for x in g.elements() {
                if self.apply(g, &x) == target {
                    found = Some(x);
                    break;
                }
            }
            let Some(x) = found else {
                return Err(Error::NotInvertible {
                    reason: format!("generator {} is not in the image", j),
                });
            };
            cols.push(x.coords);
        }
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l {
            for j in 0..l {
                m[k][j] = cols[j][k] % g.factors[k];
            }
        }
        let inv = Endomorphism { matrix: m };
        let id = Endomorphism::identity(g);
        if inv.compose(g, self) != id || self.compose(g, &inv) != id {
            return Err(Error::NotInvertible {
                reason: "preimages of generators do not assemble into a two-sided inverse".into(),
            });
        }
        Ok(inv)
    }

    /// Block-diagonal sum acting on `g1 (+) g2`.
    pub fn direct_sum(
        a: &Endomorphism,
        g1: &AbelianGroup,
        b: &Endomorphism,
        g2: &AbelianGroup,
    ) -> Endomorphism {
        let l1 = g1.rank();
        let l2 = g2.rank();
        let l = l1 + l2;
        let mut m = vec![vec![0u64; l]; l];
        for k in 0..l1 {
            for j in 0..l1 {
                m[k][j] = a.matrix[k][j];
            }
        }
        for k in 0..l2 {
            for j in 0..l2 {
                m[l1 + k][l1 + j] = b.matrix[k][j];
            }
        }
        Endomorphism { matrix: m }
    }

    pub fn to_json(&self, g: &AbelianGroup) -> EndomorphismJson {
        EndomorphismJson {
            factors: g.factors.clone(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|&x| x as i64).collect())
                .collect(),
        }
    }

    pub fn from_json(json: &EndomorphismJson) -> Result<(AbelianGroup, Endomorphism)> {
        let g = AbelianGroup::new(json.factors.clone())?;
        let e = Endomorphism::new(&g, &json.matrix)?;
        Ok((g, e))
    }
}

/// Normalized average `(1/|H|) sum_t f(t)` of a vector-valued function.
pub fn haar_average(
    g: &AbelianGroup,
    dim: usize,
    mut f: impl FnMut(&GroupElement) -> Vec<Cyclotomic>,
) -> Vec<Cyclotomic> {
    let mut acc = vec![Cyclotomic::zero(); dim];
    for t in g.elements() {
        let v = f(&t);
        assert_eq!(v.len(), dim, "haar average summand dimension");
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.add(&x);
        }
    }
    let inv = Cyclotomic::from_ratio(1, g.order() as i64);
    acc.into_iter().map(|a| a.mul(&inv)).collect()
}

/// Classify an endomorphism: `(skew, invertible)`.
///
/// `skew` means the transpose equals the entry-wise negation (in components
/// of characteristic 2 negation is the identity, so symmetric matrices are
/// skew there); `invertible` means the map is a bijection of the group.
/// Both flags must hold for an endomorphism to drive a deformation.
pub fn is_skew_auto(g: &AbelianGroup, j: &Endomorphism) -> (bool, bool) {
    (j.is_skew(g), j.is_invertible(g))
}

/// Scalar-valued convenience form of [`haar_average`].
pub fn haar_average_scalar(
    g: &AbelianGroup,
    mut f: impl FnMut(&GroupElement) -> Cyclotomic,
) -> Cyclotomic {
    haar_average(g, 1, |t| vec![f(t)]).pop().unwrap()
}
