//! Finite (generally nonabelian) groups given by multiplication tables,
//! small finite fields, semidirect products, and the stock examples used by
//! the command-line tool: two torus-containing groups of orders 8 and 18,
//! the symmetric group on three letters, and `GL(2, F_q)` for small `q`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, Endomorphism};
use crate::error::{Error, Result};

/// A finite group presented by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

/// Serialized form of a [`FiniteGroup`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteGroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate a multiplication table: shape, closure, two-sided identity,
    /// inverses, cancellation, and full associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {} has length {}, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidTable(format!(
                        "entry ({}, {}) = {} out of range",
                        i, j, v
                    )));
                }
            }
        }
        // two-sided identity
        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|a| table[e][a] == a && table[a][e] == a) {
                identity = Some(e);
                break;
            }
        }
        let Some(identity) = identity else {
            return Err(Error::InvalidTable("no two-sided identity".into()));
        };
        // Latin square property (cancellation)
        for a in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for b in 0..n {
                if seen_row[table[a][b]] {
                    return Err(Error::InvalidTable(format!(
                        "row {} is not a permutation",
                        a
                    )));
                }
                seen_row[table[a][b]] = true;
                if seen_col[table[b][a]] {
                    return Err(Error::InvalidTable(format!(
                        "column {} is not a permutation",
                        a
                    )));
                }
                seen_col[table[b][a]] = true;
            }
        }
        // inverses
        let mut inverses = vec![0usize; n];
        for a in 0..n {
            let mut inv = None;
            for b in 0..n {
                if table[a][b] == identity && table[b][a] == identity {
                    inv = Some(b);
                    break;
                }
            }
            let Some(b) = inv else {
                return Err(Error::InvalidTable(format!("element {} has no inverse", a)));
            };
            inverses[a] = b;
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
        })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn id(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The permutation `g -> a g a^{-1}`.
    pub fn conjugation_by(&self, a: usize) -> Vec<usize> {
        let ainv = self.inv(a);
        (0..self.order())
            .map(|g| self.mul(self.mul(a, g), ainv))
            .collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut class = Vec::new();
            for a in 0..n {
                let c = self.mul(self.mul(a, g), self.inv(a));
                if !seen[c] {
                    seen[c] = true;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn to_json(&self) -> FiniteGroupJson {
        FiniteGroupJson {
            order: self.order(),
            table: self.table.clone(),
        }
    }

    pub fn from_json(json: &FiniteGroupJson) -> Result<Self> {
        if json.table.len() != json.order {
            return Err(Error::InvalidTable(format!(
                "declared order {} does not match table size {}",
                json.order,
                json.table.len()
            )));
        }
        FiniteGroup::new(json.table.clone())
    }

    /// Cyclic group of order `n`, element `k` meaning `k mod n`.
    pub fn cyclic(n: usize) -> FiniteGroup {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        FiniteGroup::new(table).expect("cyclic table is a group")
    }

    /// View a finite abelian group as a table group, using the abelian
    /// group's own element indexing.
    pub fn from_abelian(g: &AbelianGroup) -> FiniteGroup {
        let n = g.order() as usize;
        let table = (0..n)
            .map(|a| {
                let ea = g.element_at(a);
                (0..n)
                    .map(|b| g.index(&g.add(&ea, &g.element_at(b))))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("abelian addition is a group")
    }
}

/// An injective homomorphism from an abelian group into a finite group,
/// tabulated as `map[torus_index] = group_element`.
#[derive(Debug, Clone)]
pub struct TorusEmbedding {
    pub torus: AbelianGroup,
    pub map: Vec<usize>,
}

impl TorusEmbedding {
    /// Check the map is an injective homomorphism sending 0 to the identity.
    pub fn verify(&self, g: &FiniteGroup) -> Result<()> {
        let n = self.torus.order() as usize;
        if self.map.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "map has {} entries for a torus of order {}",
                self.map.len(),
                n
            )));
        }
        let mut seen = vec![false; g.order()];
        for &img in &self.map {
            if img >= g.order() {
                return Err(Error::InvalidEmbedding(format!(
                    "image {} out of range",
                    img
                )));
            }
            if seen[img] {
                return Err(Error::InvalidEmbedding("map is not injective".into()));
            }
            seen[img] = true;
        }
        if self.map[self.torus.index(&self.torus.zero())] != g.id() {
            return Err(Error::InvalidEmbedding("zero does not map to identity".into()));
        }
        for a in self.torus.elements() {
            for b in self.torus.elements() {
                let sum = self.torus.add(&a, &b);
                let lhs = self.map[self.torus.index(&sum)];
                let rhs = g.mul(self.map[self.torus.index(&a)], self.map[self.torus.index(&b)]);
                if lhs != rhs {
                    return Err(Error::InvalidEmbedding(format!(
                        "not a homomorphism at {:?} + {:?}",
                        a.coords(),
                        b.coords()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, t: &crate::abelian::GroupElement) -> usize {
        self.map[self.torus.index(t)]
    }
}

/// Semidirect product `N x| K` where `K` acts on the abelian group `N`
/// through `action[k]` (one automorphism per element of `K`).
/// Elements are indexed `n_idx + |N| * k_idx`; `(a, x)(b, y) = (a + x.b, xy)`.
pub fn semidirect_product(
    n: &AbelianGroup,
    k: &FiniteGroup,
    action: &[Endomorphism],
) -> Result<FiniteGroup> {
    if action.len() != k.order() {
        return Err(Error::InvalidAction {
            reason: format!("need {} automorphisms, got {}", k.order(), action.len()),
        });
    }
    for (i, a) in action.iter().enumerate() {
        if !a.is_invertible(n) {
            return Err(Error::InvalidAction {
                reason: format!("action of element {} is not an automorphism", i),
            });
        }
    }
    if action[k.id()] != Endomorphism::identity(n) {
        return Err(Error::InvalidAction {
            reason: "identity must act trivially".into(),
        });
    }
    for x in 0..k.order() {
        for y in 0..k.order() {
            let composed = action[x].compose(n, &action[y]);
            if composed != action[k.mul(x, y)] {
                return Err(Error::InvalidAction {
                    reason: format!("action is not a homomorphism at ({}, {})", x, y),
                });
            }
        }
    }
    let nn = n.order() as usize;
    let total = nn * k.order();
    let idx = |n_idx: usize, k_idx: usize| n_idx + nn * k_idx;
    let mut table = vec![vec![0usize; total]; total];
    for ai in 0..nn {
        let a = n.element_at(ai);
        for x in 0..k.order() {
            for bi in 0..nn {
                let b = n.element_at(bi);
                for y in 0..k.order() {
                    let moved = action[x].apply(n, &b);
                    let first = n.add(&a, &moved);
                    table[idx(ai, x)][idx(bi, y)] = idx(n.index(&first), k.mul(x, y));
                }
            }
        }
    }
    FiniteGroup::new(table)
}

/// Order-18 example: `(Z/3 x Z/3) x| Z/2` with the flip swapping the two
/// coordinates. Returns the group and the embedded 9-element torus.
///
/// The swap is the choice that makes the canonical deformation of the
/// function algebra noncommutative: the flip coset carries spectral degrees
/// `(d, -swap d)`, which pair nontrivially under the canonical
/// skew-symmetric automorphism. (Negation instead of swap gives a group
/// with 6 conjugacy classes whose deformation is trivial for every
/// skew-symmetric choice, because its degree lattices are self-orthogonal.)
pub fn order18_example() -> (FiniteGroup, TorusEmbedding) {
    let torus = AbelianGroup::new(vec![3, 3]).unwrap();
    let z2 = FiniteGroup::cyclic(2);
    let id = Endomorphism::identity(&torus);
    let swap = Endomorphism::new(&torus, &[vec![0, 1], vec![1, 0]]).unwrap();
    let group = semidirect_product(&torus, &z2, &[id, swap]).expect("swap is an automorphism");
    let map = (0..torus.order() as usize).collect();
    let embedding = TorusEmbedding { torus, map };
    embedding.verify(&group).expect("inclusion of N is a homomorphism");
    (group, embedding)
}

/// Order-8 example: `(Z/2 x Z/2) x| Z/2` with the flip swapping coordinates
/// (the dihedral group of the square). Returns the group and its torus.
pub fn d4_example() -> (FiniteGroup, TorusEmbedding) {
    let torus = AbelianGroup::new(vec![2, 2]).unwrap();
    let z2 = FiniteGroup::cyclic(2);
    let id = Endomorphism::identity(&torus);
    let swap = Endomorphism::new(&torus, &[vec![0, 1], vec![1, 0]]).unwrap();
    let group = semidirect_product(&torus, &z2, &[id, swap]).expect("swap is an automorphism");
    let map = (0..torus.order() as usize).collect();
    let embedding = TorusEmbedding { torus, map };
    embedding.verify(&group).expect("inclusion of N is a homomorphism");
    (group, embedding)
}

/// The symmetric group on `{0, 1, 2}`, with elements the six permutations in
/// lexicographic one-line order. Also returns the index of a 3-cycle and of
/// a transposition.
pub fn symmetric_group_3() -> (FiniteGroup, usize, usize) {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index_of = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
    let mut table = vec![vec![0usize; 6]; 6];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            // (p q)(x) = p(q(x))
            let comp = [p[q[0]], p[q[1]], p[q[2]]];
            table[i][j] = index_of(&comp);
        }
    }
    let g = FiniteGroup::new(table).expect("permutation composition is a group");
    let three_cycle = index_of(&[1, 2, 0]);
    let transposition = index_of(&[1, 0, 2]);
    (g, three_cycle, transposition)
}

/// A small finite field, elements `0..q` with tabulated arithmetic.
/// Prime fields are residue arithmetic; `q = 4, 8, 9` use fixed irreducible
/// polynomials; other prime powers are unsupported.
#[derive(Debug, Clone)]
pub struct FiniteField {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

fn small_prime(n: usize) -> Option<usize> {
    (2..=n).find(|&d| n % d == 0).filter(|&d| {
        let mut m = n;
        while m % d == 0 {
            m /= d;
        }
        m == 1
    })
}

impl FiniteField {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::Unsupported(format!("field order {} too small", q)));
        }
        let Some(p) = small_prime(q) else {
            return Err(Error::Unsupported(format!(
                "field order {} is not a prime power",
                q
            )));
        };
        let field = if q == p {
            let add = (0..q).map(|a| (0..q).map(|b| (a + b) % q).collect()).collect();
            let mul = (0..q).map(|a| (0..q).map(|b| (a * b) % q).collect()).collect();
            FiniteField { q, add, mul }
        } else {
            // coefficients of the reducing polynomial below x^deg, low first
            let (deg, modulus): (usize, Vec<usize>) = match q {
                4 => (2, vec![1, 1]),  // x^2 + x + 1
                8 => (3, vec![1, 1, 0]), // x^3 + x + 1
                9 => (2, vec![1, 0]),  // x^2 + 1
                _ => {
                    return Err(Error::Unsupported(format!(
                        "no irreducible polynomial tabulated for order {}",
                        q
                    )))
                }
            };
            let digits = |mut x: usize| -> Vec<usize> {
                let mut d = vec![0usize; deg];
                for c in d.iter_mut() {
                    *c = x % p;
                    x /= p;
                }
                d
            };
            let undigits = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
            let mut add = vec![vec![0usize; q]; q];
            let mut mul = vec![vec![0usize; q]; q];
            for a in 0..q {
                let da = digits(a);
                for b in 0..q {
                    let db = digits(b);
                    let sum: Vec<usize> =
                        da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                    add[a][b] = undigits(&sum);
                    // polynomial product, then reduce x^deg -> -modulus
                    let mut prod = vec![0usize; 2 * deg - 1];
                    for (i, &x) in da.iter().enumerate() {
                        for (j, &y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for i in (deg..prod.len()).rev() {
                        let c = prod[i];
                        if c != 0 {
                            prod[i] = 0;
                            for (k, &mc) in modulus.iter().enumerate() {
                                // x^i = x^(i-deg) * x^deg = -x^(i-deg) * modulus
                                let pos = i - deg + k;
                                prod[pos] = (prod[pos] + (p - mc % p) * c) % p;
                            }
                        }
                    }
                    mul[a][b] = undigits(&prod[..deg]);
                }
            }
            FiniteField { q, add, mul }
        };
        field.validate()?;
        Ok(field)
    }

    /// Exhaustively check the field axioms (orders here are at most 9).
    fn validate(&self) -> Result<()> {
        let q = self.q;
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Unsupported(format!(
                    "field construction for order {} failed: {}",
                    q, what
                )))
            }
        };
        for a in 0..q {
            check(self.add(a, 0) == a, "additive identity")?;
            check(self.mul(a, 1) == a, "multiplicative identity")?;
            check((0..q).any(|b| self.add(a, b) == 0), "additive inverse")?;
            if a != 0 {
                check((0..q).any(|b| self.mul(a, b) == 1), "multiplicative inverse")?;
            }
            for b in 0..q {
                check(self.add(a, b) == self.add(b, a), "commutative addition")?;
                check(self.mul(a, b) == self.mul(b, a), "commutative multiplication")?;
                for c in 0..q {
                    check(
                        self.add(self.add(a, b), c) == self.add(a, self.add(b, c)),
                        "associative addition",
                    )?;
                    check(
                        self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)),
                        "associative multiplication",
                    )?;
                    check(
                        self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c)),
                        "distributivity",
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        (0..self.q).find(|&b| self.add[a][b] == 0).unwrap()
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Smallest element generating the multiplicative group.
    pub fn generator(&self) -> usize {
        'outer: for g in 2..self.q.max(3) {
            if g >= self.q {
                break;
            }
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = self.mul(x, g);
                n += 1;
                if n > self.q {
                    continue 'outer;
                }
            }
            if n == self.q - 1 {
                return g;
            }
        }
        // only for F_2 / F_3, where 1 or -1 generates
        if self.q == 2 {
            1
        } else {
            self.q - 1
        }
    }
}

/// `GL(2, F_q)` as a table group, together with the diagonal torus
/// `Z/(q-1) x Z/(q-1)` embedded via `(a, b) -> diag(g^a, g^b)` for the
/// smallest generator `g` of the multiplicative group.
pub fn general_linear_2(q: usize) -> Result<(FiniteGroup, TorusEmbedding)> {
    let f = FiniteField::new(q)?;
    let mut mats: Vec<[usize; 4]> = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let det = f.sub(f.mul(a, d), f.mul(b, c));
                    if det != 0 {
                        mats.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let index: HashMap<[usize; 4], usize> =
        mats.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = mats.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, x) in mats.iter().enumerate() {
        for (j, y) in mats.iter().enumerate() {
            let prod = [
                f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
                f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
                f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
                f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
            ];
            table[i][j] = index[&prod];
        }
    }
    let group = FiniteGroup::new(table)?;
    let g = f.generator();
    let m = (q - 1) as u64;
    let torus = AbelianGroup::new(vec![m, m])?;
    let mut map = Vec::with_capacity((m * m) as usize);
    for t in torus.elements() {
        let mut da = 1usize;
        for _ in 0..t.coords()[0] {
            da = f.mul(da, g);
        }
        let mut db = 1usize;
        for _ in 0..t.coords()[1] {
            db = f.mul(db, g);
        }
        map.push(index[&[da, 0, 0, db]]);
    }
    let embedding = TorusEmbedding { torus, map };
    embedding.verify(&group)?;
    Ok((group, embedding))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups_are_abelian_with_right_orders() {
        for n in 1..=6 {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(g.order(), n);
            assert!(g.is_abelian());
            assert_eq!(g.element_order(1 % n.max(1)), if n == 1 { 1 } else { n });
        }
    }

    #[test]
    fn invalid_tables_are_rejected() {
        // not associative: a Latin square with identity that is not a group
        // (order 5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        assert!(matches!(FiniteGroup::new(loop5), Err(Error::InvalidTable(_))));
        // out of range entry
        assert!(FiniteGroup::new(vec![vec![0, 1], vec![1, 7]]).is_err());
        // subtraction mod 3: a Latin square with no two-sided identity
        let sub3 = (0..3i64)
            .map(|a| (0..3i64).map(|b| (a - b).rem_euclid(3) as usize).collect())
            .collect();
        assert!(FiniteGroup::new(sub3).is_err());
    }

    #[test]
    fn symmetric_group_3_shape() {
        let (g, c3, t) = symmetric_group_3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(g.element_order(c3), 3);
        assert_eq!(g.element_order(t), 2);
        assert_eq!(g.conjugacy_classes().len(), 3);
    }

    #[test]
    fn order18_example_shape() {
        let (g, emb) = order18_example();
        assert_eq!(g.order(), 18);
        assert!(!g.is_abelian());
        // the swap fixes the diagonal of the torus pointwise and negates the
        // antidiagonal, so the group splits as Z/3 x S3: 3 * 3 = 9 classes
        assert_eq!(g.conjugacy_classes().len(), 9);
        assert_eq!(emb.torus.order(), 9);
        // every torus element has order dividing 3; flips have order 2
        for t in emb.torus.elements() {
            let img = emb.apply(&t);
            assert!(g.element_order(img) == 1 || g.element_order(img) == 3);
        }
        let flip = emb.torus.order() as usize; // (0, 1) in the coset encoding
        assert_eq!(g.element_order(flip), 2);
    }

    #[test]
    fn order18_with_negation_action_is_a_different_group() {
        // the same construction with negation instead of the swap gives the
        // generalized dihedral group of (Z/3)^2: classes are {e}, four pairs
        // {t, -t}, and all nine flips together, so 6 classes rather than 9
        let torus = AbelianGroup::new(vec![3, 3]).unwrap();
        let z2 = FiniteGroup::cyclic(2);
        let id = Endomorphism::identity(&torus);
        let neg = id.negate(&torus);
        let g = semidirect_product(&torus, &z2, &[id, neg]).unwrap();
        assert!(!g.is_abelian());
        assert_eq!(g.conjugacy_classes().len(), 6);
    }

    #[test]
    fn d4_example_is_the_dihedral_group_of_the_square() {
        let (g, emb) = d4_example();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        // identifier: exactly 2 elements of order 4
        let order4 = (0..8).filter(|&a| g.element_order(a) == 4).count();
        assert_eq!(order4, 2);
        assert_eq!(g.conjugacy_classes().len(), 5);
        assert_eq!(emb.torus.order(), 4);
    }

    #[test]
    fn semidirect_action_validation() {
        let torus = AbelianGroup::new(vec![3, 3]).unwrap();
        let z2 = FiniteGroup::cyclic(2);
        let id = Endomorphism::identity(&torus);
        // the flip must act by an involution; identity works
        assert!(semidirect_product(&torus, &z2, &[id.clone(), id.clone()]).is_ok());
        // an action that is not a homomorphism (order-4 rotation under Z/2)
        let s = Endomorphism::new(&torus, &[vec![0, 1], vec![-1, 0]]).unwrap();
        assert!(matches!(
            semidirect_product(&torus, &z2, &[id.clone(), s]),
            Err(Error::InvalidAction { .. })
        ));
        // a singular map is rejected before the homomorphism check
        let sing = Endomorphism::new(&torus, &[vec![0, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            semidirect_product(&torus, &z2, &[id, sing]),
            Err(Error::InvalidAction { .. })
        ));
    }

    #[test]
    fn finite_field_orders_and_generators() {
        for q in [2usize, 3, 4, 5, 7, 8, 9] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
            let g = f.generator();
            // generator has multiplicative order q - 1
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = f.mul(x, g);
                n += 1;
            }
            assert_eq!(n, q - 1, "q = {}", q);
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(1).is_err());
    }

    #[test]
    fn general_linear_2_orders() {
        // |GL(2, q)| = (q^2 - 1)(q^2 - q)
        for (q, expect) in [(2usize, 6usize), (3, 48), (4, 180), (5, 480)] {
            let (g, emb) = general_linear_2(q).unwrap();
            assert_eq!(g.order(), expect, "q = {}", q);
            assert_eq!(emb.torus.order(), ((q - 1) * (q - 1)) as u64);
        }
    }

    #[test]
    fn general_linear_2_structure() {
        let (g2, _) = general_linear_2(2).unwrap();
        assert!(!g2.is_abelian());
        assert_eq!(g2.conjugacy_classes().len(), 3); // GL(2,2) = S3
        let (g4, _) = general_linear_2(4).unwrap();
        assert_eq!(g4.conjugacy_classes().len(), 15);
    }

    #[test]
    fn group_json_round_trip() {
        let (g, _, _) = symmetric_group_3();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let parsed: FiniteGroupJson = serde_json::from_str(&text).unwrap();
        let g2 = FiniteGroup::from_json(&parsed).unwrap();
        assert_eq!(g, g2);
        // corrupted table fails validation
        let mut bad = g.to_json();
        bad.table[0][0] = 3;
        assert!(FiniteGroup::from_json(&bad).is_err());
    }
}
