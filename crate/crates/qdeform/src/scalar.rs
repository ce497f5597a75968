//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! A [`Cyclotomic`] is a rational-coefficient polynomial in `zeta_N`
//! (a primitive N-th root of unity) reduced modulo the N-th cyclotomic
//! polynomial, so equality is decidable and every field operation is exact.
//! Values of different orders promote automatically to the least common
//! multiple, which embeds both fields.
//!
//! The numeric embedding sends `zeta_N` to `exp(2*pi*i/N)` and is used only
//! where a quantity is genuinely analytic (operator norms, positivity).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Shared per-order data: the cyclotomic polynomial and reduction tables.
struct CycloContext {
    phi: usize,
    /// `x^k` reduced mod `Phi_order`, for `k` in `0..max(order, 2*phi-1)`.
    powers: Vec<Vec<BigRational>>,
}

fn registry() -> &'static Mutex<HashMap<u32, Arc<CycloContext>>> {
    static REG: OnceLock<Mutex<HashMap<u32, Arc<CycloContext>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn context(order: u32) -> Arc<CycloContext> {
    assert!(order >= 1, "cyclotomic order must be positive");
    let mut reg = registry().lock().unwrap();
    if let Some(ctx) = reg.get(&order) {
        return Arc::clone(ctx);
    }
    let ctx = Arc::new(CycloContext::build(order));
    reg.insert(order, Arc::clone(&ctx));
    ctx
}

/// Coefficients of the n-th cyclotomic polynomial, ascending degree, monic.
///
/// Computed by exact division: `Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d`.
fn cyclotomic_poly(n: u32) -> Vec<BigRational> {
    let mut memo: HashMap<u32, Vec<BigRational>> = HashMap::new();
    cyclotomic_poly_memo(n, &mut memo)
}

fn cyclotomic_poly_memo(n: u32, memo: &mut HashMap<u32, Vec<BigRational>>) -> Vec<BigRational> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut num = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    let mut den = vec![BigRational::one()];
    for d in 1..n {
        if n % d == 0 {
            den = poly_mul(&den, &cyclotomic_poly_memo(d, memo));
        }
    }
    let (q, r) = poly_divrem(&num, &den);
    debug_assert!(r.iter().all(Zero::is_zero));
    memo.insert(n, q.clone());
    q
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn poly_deg(a: &[BigRational]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

/// Long division of `a` by `b` over Q; `b` need not be monic.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = poly_deg(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut rem: Vec<BigRational> = a.to_vec();
    let mut quot = vec![BigRational::zero(); a.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_deg(&rem) {
        if dr < db {
            break;
        }
        let factor = &rem[dr] / &lead;
        quot[dr - db] = factor.clone();
        for k in 0..=db {
            if !b[k].is_zero() {
                let t = &b[k] * &factor;
                rem[dr - db + k] -= t;
            }
        }
        rem[dr] = BigRational::zero();
    }
    (quot, rem)
}

impl CycloContext {
    fn build(order: u32) -> Self {
        let modulus = cyclotomic_poly(order);
        let phi = modulus.len() - 1;
        let table_len = (order as usize).max(2 * phi - 1);
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(table_len);
        let mut cur = vec![BigRational::zero(); phi];
        cur[0] = BigRational::one();
        powers.push(cur.clone());
        for _ in 1..table_len {
            // multiply by x, reduce the overflow term by the monic modulus
            let carry = cur[phi - 1].clone();
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigRational::zero();
            if !carry.is_zero() {
                for k in 0..phi {
                    if !modulus[k].is_zero() {
                        let t = &modulus[k] * &carry;
                        cur[k] -= t;
                    }
                }
            }
            powers.push(cur.clone());
        }
        CycloContext { phi, powers }
    }

    fn reduce_conv(&self, conv: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.phi];
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, p) in self.powers[k].iter().enumerate() {
                if !p.is_zero() {
                    out[j] += c * p;
                }
            }
        }
        out
    }
}

/// An exact element of the cyclotomic field Q(zeta_order).
#[derive(Clone)]
pub struct Cyclotomic {
    order: u32,
    /// Length `phi(order)`, reduced mod the cyclotomic polynomial.
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::from_integer(BigInt::from(n))],
        }
    }

    /// The rational `num/den` as an order-1 value. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::new(BigInt::from(num), BigInt::from(den))],
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![r],
        }
    }

    /// `zeta_order ^ pow`, with `pow` taken mod `order`.
    pub fn zeta(order: u32, pow: i64) -> Self {
        let ctx = context(order);
        let p = pow.rem_euclid(order as i64) as usize;
        Cyclotomic {
            order,
            coeffs: ctx.powers[p].clone(),
        }
    }

    /// Order of the root of unity this value is expressed in.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Exact rational part if the value lies in Q, else `None`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-express in Q(zeta_target); `target` must be a multiple of the
    /// current order.
    pub fn promote(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(
            target % self.order == 0,
            "cannot embed order {} into order {}",
            self.order,
            target
        );
        let ctx = context(target);
        let step = (target / self.order) as usize;
        let mut out = vec![BigRational::zero(); ctx.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, p) in ctx.powers[k * step].iter().enumerate() {
                if !p.is_zero() {
                    out[j] += c * p;
                }
            }
        }
        Cyclotomic {
            order: target,
            coeffs: out,
        }
    }

    fn common_order(a: u32, b: u32) -> u32 {
        let l = num_integer::lcm(a as u64, b as u64);
        u32::try_from(l).expect("cyclotomic order overflow")
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let n = Self::common_order(self.order, other.order);
        let mut a = self.promote(n);
        let b = other.promote(n);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        let n = Self::common_order(self.order, other.order);
        let mut a = self.promote(n);
        let b = other.promote(n);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> Cyclotomic {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let n = Self::common_order(self.order, other.order);
        let a = self.promote(n);
        let b = other.promote(n);
        let ctx = context(n);
        let conv = poly_mul(&a.coeffs, &b.coeffs);
        Cyclotomic {
            order: n,
            coeffs: ctx.reduce_conv(&conv),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Cyclotomic {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= r;
        }
        out
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// the cyclotomic modulus. Panics on zero.
    pub fn inverse(&self) -> Cyclotomic {
        assert!(!self.is_zero(), "inverse of zero");
        if let Some(r) = self.as_rational() {
            return Cyclotomic {
                order: self.order,
                coeffs: {
                    let mut v = vec![BigRational::zero(); self.coeffs.len()];
                    v[0] = r.recip();
                    v
                },
            };
        }
        let modulus = cyclotomic_poly(self.order);
        // extended gcd over Q[x]: u*a + v*modulus = gcd
        let mut r0 = modulus;
        let mut r1 = self.coeffs.clone();
        let mut u0 = vec![BigRational::zero()];
        let mut u1 = vec![BigRational::one()];
        while poly_deg(&r1).is_some() {
            let (q, r) = poly_divrem(&r0, &r1);
            let qu = poly_mul(&q, &u1);
            let mut u2 = u0.clone();
            if u2.len() < qu.len() {
                u2.resize(qu.len(), BigRational::zero());
            }
            for (k, c) in qu.iter().enumerate() {
                u2[k] -= c;
            }
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u2;
        }
        let d = poly_deg(&r0).expect("gcd of nonzero polynomials is nonzero");
        assert_eq!(d, 0, "cyclotomic modulus must be coprime to nonzero input");
        let lead = r0[0].clone();
        let ctx = context(self.order);
        let mut conv = u0;
        for c in conv.iter_mut() {
            *c /= &lead;
        }
        conv.resize(conv.len().max(1), BigRational::zero());
        Cyclotomic {
            order: self.order,
            coeffs: ctx.reduce_conv(&conv),
        }
    }

    /// Complex conjugate: the field automorphism `zeta -> zeta^(order-1)`.
    pub fn conj(&self) -> Cyclotomic {
        let ctx = context(self.order);
        let n = self.order as usize;
        let mut out = vec![BigRational::zero(); ctx.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let target = (n - k) % n;
            for (j, p) in ctx.powers[target].iter().enumerate() {
                if !p.is_zero() {
                    out[j] += c * p;
                }
            }
        }
        Cyclotomic {
            order: self.order,
            coeffs: out,
        }
    }

    /// Whether the value is fixed by conjugation (i.e. real).
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Numeric embedding at `zeta_order = exp(2*pi*i/order)`.
    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI / self.order as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let x = c.to_f64().expect("rational out of f64 range");
            let angle = theta * k as f64;
            acc += Complex64::new(x * angle.cos(), x * angle.sin());
        }
        acc
    }

    /// Nonzero terms `(num, den, power)` of the reduced representation,
    /// re-expressed in Q(zeta_target).
    pub fn to_terms(&self, target: u32) -> Result<Vec<(BigInt, BigInt, u32)>> {
        if target % self.order != 0 {
            return Err(Error::Parse(format!(
                "scalar of order {} cannot be expressed at zeta order {}",
                self.order, target
            )));
        }
        let p = self.promote(target);
        Ok(p.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.numer().clone(), c.denom().clone(), k as u32))
            .collect())
    }

    /// Rebuild from terms; powers may be any value below `order` (they are
    /// reduced mod the cyclotomic polynomial).
    pub fn from_terms(order: u32, terms: &[(BigInt, BigInt, u32)]) -> Result<Cyclotomic> {
        let ctx = context(order);
        let mut out = vec![BigRational::zero(); ctx.phi];
        for (num, den, pow) in terms {
            if den.is_zero() {
                return Err(Error::Parse("zero denominator in scalar term".into()));
            }
            let c = BigRational::new(num.clone(), den.clone());
            let p = (*pow as usize) % (order as usize);
            for (j, q) in ctx.powers[p].iter().enumerate() {
                if !q.is_zero() {
                    out[j] += &c * q;
                }
            }
        }
        Ok(Cyclotomic {
            order,
            coeffs: out,
        })
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let n = Self::common_order(self.order, other.order);
        self.promote(n).coeffs == other.promote(n).coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if k == 0 {
                write!(f, "{}", a)?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", a)?;
                }
                if k == 1 {
                    write!(f, "z{}", self.order)?;
                } else {
                    write!(f, "z{}^{}", self.order, k)?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                Cyclotomic::$inner(self, rhs)
            }
        }
        impl std::ops::$trait for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                Cyclotomic::$inner(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(self)
    }
}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::neg(&self)
    }
}
