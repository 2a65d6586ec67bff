//! Finite fields `F_{p^m}` as quotients `F_p[t]/(f)`, with Frobenius, unique
//! p-th roots and embeddings between fields of the same characteristic.
//!
//! Elements are stored as a single machine word holding the base-p digits of
//! the coefficient vector (constant term least significant), so an element of
//! the prime subfield has the same encoding in every extension.

mod embed;
pub mod poly;

pub use embed::{common_extension, extend_field, Embedding, DEFAULT_MAX_EXTENSION_DEGREE};

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Shared handle to an immutable field context.
pub type Field = Arc<FieldCtx>;

/// Largest characteristic accepted; products of two digits must fit comfortably in `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 15;

const MAX_DIGITS: usize = 64;

/// The field `F_p[t]/(modulus)` with `deg(modulus) = m`.
#[derive(Clone)]
pub struct FieldCtx {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
    order: u64,
    // bit mask of the modulus for characteristic 2
    modulus_bits: u128,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; {:?})", self.p, self.m, self.modulus)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn canonical_cache() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldCtx {
    fn build(p: u64, modulus: Vec<u64>) -> Result<FieldCtx> {
        if !is_prime(p) || p >= MAX_CHARACTERISTIC {
            return Err(Error::InvalidField(format!("characteristic {p} is not a supported prime")));
        }
        let m = modulus.len().saturating_sub(1);
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        let order = u32::try_from(m)
            .ok()
            .and_then(|e| p.checked_pow(e))
            .filter(|&q| q < (1u64 << 62) && m <= MAX_DIGITS)
            .ok_or_else(|| Error::InvalidField(format!("field of order {p}^{m} is too large")))?;
        let modulus_bits = if p == 2 {
            modulus.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i))
        } else {
            0
        };
        Ok(FieldCtx { p, m, modulus, order, modulus_bits })
    }

    /// Field with an explicit modulus (little-endian coefficients, leading 1 included).
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Field> {
        let ctx = Self::build(p, modulus)?;
        if ctx.m > 1 {
            let prime = Self::build(p, vec![0, 1])?;
            if !poly::is_irreducible_over_prime(&prime, &ctx.modulus) {
                return Err(Error::InvalidField(format!(
                    "modulus {:?} is reducible over F_{p}",
                    ctx.modulus
                )));
            }
        }
        if let Some(canon) = Self::canonical_if_cached(p, ctx.m) {
            if *canon == ctx {
                return Ok(canon);
            }
        }
        Ok(Arc::new(ctx))
    }

    fn canonical_if_cached(p: u64, m: usize) -> Option<Field> {
        canonical_cache().lock().unwrap().get(&(p, m)).cloned()
    }

    /// The prime field `F_p` (modulus `t`).
    pub fn prime(p: u64) -> Result<Field> {
        Self::canonical(p, 1)
    }

    /// `F_{p^m}` defined by the lexicographically-first monic irreducible
    /// polynomial of degree `m` (higher coefficients compared first).
    pub fn canonical(p: u64, m: usize) -> Result<Field> {
        if let Some(f) = Self::canonical_if_cached(p, m) {
            return Ok(f);
        }
        if m == 0 {
            return Err(Error::InvalidField("degree must be >= 1".into()));
        }
        let mut ctx = Self::build(p, {
            let mut v = vec![0; m + 1];
            v[m] = 1;
            v
        })?;
        if m > 1 {
            let prime = Self::build(p, vec![0, 1])?;
            let mut found = None;
            for n in 0..ctx.order {
                let mut modulus = prime_digits(n, p, m);
                modulus.push(1);
                if poly::is_irreducible_over_prime(&prime, &modulus) {
                    found = Some(modulus);
                    break;
                }
            }
            ctx = Self::build(p, found.expect("irreducible polynomials exist in every degree"))?;
        }
        let field = Arc::new(ctx);
        let mut cache = canonical_cache().lock().unwrap();
        Ok(cache.entry((p, m)).or_insert(field).clone())
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements `p^m`.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// Encoding of the class of `t`.
    pub fn generator(&self) -> u64 {
        if self.m == 1 {
            // t = 0 modulo the modulus t + c
            self.neg(self.modulus[0] % self.p)
        } else {
            self.p
        }
    }

    pub fn decode(&self, a: u64) -> Vec<u64> {
        prime_digits(a, self.p, self.m)
    }

    pub fn encode(&self, coeffs: &[u64]) -> Result<u64> {
        if coeffs.len() > self.m {
            return Err(Error::InvalidField(format!(
                "coefficient list of length {} for a degree-{} field",
                coeffs.len(),
                self.m
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidField("coefficient out of range".into()));
        }
        Ok(coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    /// Element of the prime subfield congruent to `n`.
    #[inline]
    pub fn from_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let p = self.p;
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.m {
                let d = (a % p + b % p) % p;
                out += d * place;
                place *= p;
                a /= p;
                b /= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.m == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let p = self.p;
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.m {
                let d = (p - a % p) % p;
                out += d * place;
                place *= p;
                a /= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            if a >= b {
                a - b
            } else {
                a + self.p - b
            }
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        if self.p == 2 {
            return self.mul_char2(a, b);
        }
        let p = self.p;
        let m = self.m;
        let mut da = [0u64; MAX_DIGITS];
        let mut db = [0u64; MAX_DIGITS];
        let (mut x, mut y) = (a, b);
        for i in 0..m {
            da[i] = x % p;
            db[i] = y % p;
            x /= p;
            y /= p;
        }
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (m..2 * m - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..m {
                // subtract c * modulus[j] * t^(k - m + j)
                let idx = k - m + j;
                prod[idx] = (prod[idx] + p * p - c * self.modulus[j]) % p;
            }
        }
        let mut out = 0;
        for i in (0..m).rev() {
            out = out * p + prod[i] % p;
        }
        out
    }

    fn mul_char2(&self, a: u64, b: u64) -> u64 {
        let m = self.m;
        let mut prod: u128 = 0;
        let mut x = a as u128;
        let mut y = b;
        while y != 0 {
            if y & 1 == 1 {
                prod ^= x;
            }
            x <<= 1;
            y >>= 1;
        }
        for k in (m..2 * m - 1).rev() {
            if prod >> k & 1 == 1 {
                prod ^= self.modulus_bits << (k - m);
            }
        }
        prod as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order - 2))
        }
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// `a^p`.
    pub fn frobenius(&self, a: u64) -> u64 {
        if self.m == 1 {
            a
        } else {
            self.pow(a, self.p)
        }
    }

    /// The unique `b` with `b^p = a`, computed as `a^(p^(m-1))`.
    pub fn pth_root(&self, a: u64) -> u64 {
        let mut b = a;
        for _ in 1..self.m {
            b = self.frobenius(b);
        }
        b
    }

    /// Whether `a` lies in the prime subfield.
    pub fn in_prime_subfield(&self, a: u64) -> bool {
        a < self.p
    }

    pub fn elem(self: &Arc<Self>, value: u64) -> FieldElem {
        debug_assert!(value < self.order);
        FieldElem { field: self.clone(), value }
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }
}

pub(crate) fn prime_digits(mut n: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        out.push(n % p);
        n /= p;
    }
    out
}

/// An element together with its field.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    value: u64,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{:?}", self.field.decode(self.value))
        }
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && same_field(&self.field, &other.field)
    }
}

impl Eq for FieldElem {}

pub(crate) fn same_field(a: &Field, b: &Field) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl FieldElem {
    pub fn zero(field: &Field) -> Self {
        field.elem(0)
    }

    pub fn one(field: &Field) -> Self {
        field.elem(1)
    }

    pub fn from_coeffs(field: &Field, coeffs: &[u64]) -> Result<Self> {
        Ok(field.elem(field.encode(coeffs)?))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// Little-endian coefficients in the generator, length `m`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.decode(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn arithmetic(&self, other: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let v = match op {
            ArithOp::Add => f.add(self.value, other.value),
            ArithOp::Sub => f.sub(self.value, other.value),
            ArithOp::Mul => f.mul(self.value, other.value),
            ArithOp::Div => f.div(self.value, other.value).ok_or(Error::DivisionByZero)?,
        };
        Ok(f.elem(v))
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arithmetic(other, ArithOp::Add)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arithmetic(other, ArithOp::Sub)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arithmetic(other, ArithOp::Mul)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.arithmetic(other, ArithOp::Div)
    }

    pub fn neg(&self) -> FieldElem {
        self.field.elem(self.field.neg(self.value))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self) -> FieldElem {
        self.field.elem(self.field.frobenius(self.value))
    }

    pub fn pth_root(&self) -> FieldElem {
        self.field.elem(self.field.pth_root(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_prime_field_arithmetic() {
        let f2 = FieldCtx::prime(2).unwrap();
        let one = FieldElem::one(&f2);
        assert!(one.add(&one).unwrap().is_zero());

        let f5 = FieldCtx::prime(5).unwrap();
        let two = f5.elem(2);
        let three = f5.elem(3);
        assert_eq!(two.mul(&three).unwrap(), FieldElem::one(&f5));
        assert_eq!(two.div(&three).unwrap().mul(&three).unwrap(), two);
    }

    #[test]
    fn gf9_uses_t_squared_plus_one() {
        let f9 = FieldCtx::canonical(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let t = f9.elem(f9.generator());
        // t * t = -1 = 2
        assert_eq!(t.mul(&t).unwrap().coeffs(), vec![2, 0]);
        // t^3 = -t = 2t
        assert_eq!(t.frobenius().coeffs(), vec![0, 2]);
    }

    #[test]
    fn gf4_pth_root_of_generator() {
        let f4 = FieldCtx::canonical(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let t = f4.elem(f4.generator());
        let r = t.pth_root();
        assert_eq!(r.coeffs(), vec![1, 1]);
        assert_eq!(r.frobenius(), t);
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f3 = FieldCtx::prime(3).unwrap();
        let two = f3.elem(2);
        assert_eq!(two.frobenius(), two);
        assert_eq!(two.pth_root(), two);
        assert!(FieldElem::zero(&f3).frobenius().is_zero());
        assert_eq!(FieldElem::one(&f3).pth_root(), FieldElem::one(&f3));
    }

    #[test]
    fn errors_on_mismatch_and_zero_division() {
        let f3 = FieldCtx::prime(3).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        assert!(matches!(f3.elem(1).add(&f5.elem(1)), Err(Error::FieldMismatch)));
        assert!(matches!(f3.elem(1).div(&f3.elem(0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(FieldCtx::new(3, vec![2, 0, 1]).is_err()); // t^2 - 1
        assert!(FieldCtx::new(4, vec![0, 1]).is_err());
        let f = FieldCtx::new(3, vec![1, 0, 1]).unwrap();
        assert!(Arc::ptr_eq(&f, &FieldCtx::canonical(3, 2).unwrap()));
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = FieldCtx::canonical(p, m).unwrap();
            for a in 1..f.order() {
                let ia = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ia), 1, "p={p} m={m} a={a}");
            }
        }
    }
}
