//! Arithmetic in prime-power fields GF(p^m).
//!
//! Elements use the polynomial basis over GF(p) modulo the lexicographically
//! smallest monic irreducible polynomial of degree `m` (coefficients compared
//! constant term first). An element is stored as the integer obtained by
//! evaluating its coefficient vector at `p`, so `0..q` enumerates the field
//! in canonical order and doubles as the I/O encoding.
//!
//! Multiplication goes through log/antilog tables built from a primitive
//! element; addition in odd characteristic uses Zech logarithms, and in
//! characteristic two it is a plain XOR of the encodings.
//!
//! Hot loops work with the bare [`Elem`] handle and call methods on [`Field`].
//! [`FieldElement`] bundles an element with its field for call sites that
//! want operator syntax and cross-field checking.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge { p: u64, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields (GF({left}) vs GF({right}))")]
    FieldMismatch { left: u32, right: u32 },
    #[error("value {value} is not an element of GF({order})")]
    OutOfRange { value: u64, order: u32 },
    #[error("subfield degree {sub} does not divide extension degree {m}")]
    NotASubfield { sub: u32, m: u32 },
    #[error("modulus {0:?} is not a monic irreducible polynomial of the field degree")]
    BadModulus(Vec<u32>),
}

/// An element of some [`Field`], identified by its integer encoding.
///
/// The handle carries no reference to its field; mixing handles from
/// different fields is caught only by the range check in [`Field::elem`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// Unchecked constructor for encodings already known to be in range.
    #[inline]
    pub(crate) const fn raw(v: u32) -> Elem {
        Elem(v)
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serialized form of a field: characteristic, degree and modulus
/// coefficients (constant term first, monic).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    /// g^i for i in 0..2(q-1), doubled so that log sums need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), or NO_LOG when 1 + g^d = 0.
    zech: Vec<u32>,
    neg: Vec<u32>,
}

/// A finite field GF(p^m). Cheap to clone; all clones share tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into (p, e). Returns `None` for anything else.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = prime_factors(n);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = n;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

// Dense polynomials over GF(p) used only while building a field.
mod prime_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p);
        while r.len() > df {
            let shift = r.len() - 1 - df;
            let c = r[r.len() - 1] * lead_inv % p;
            for (i, &fi) in f.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - c * fi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, f, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, f: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, f, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    /// x^(p^j) mod f.
    pub fn frobenius_x(j: u32, f: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], f, p);
        for _ in 0..j {
            h = powmod(&h, p, f, p);
        }
        h
    }

    /// Rabin's irreducibility test for a monic `f` of degree m.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let m = (f.len() - 1) as u32;
        if m == 1 {
            return true;
        }
        let x = rem(&[0, 1], f, p);
        if frobenius_x(m, f, p) != x {
            return false;
        }
        for d in super::prime_factors(m as u64) {
            let mut h = frobenius_x(m / d as u32, f, p);
            // h - x
            if h.len() < 2 {
                h.resize(2, 0);
            }
            h[1] = (h[1] + p - 1) % p;
            trim(&mut h);
            let g = gcd(&h, f, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// Builds GF(p^m) with the canonical modulus.
    pub fn new(p: u64, m: u32) -> Result<Field, GfError> {
        Self::check_params(p, m)?;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            Self::smallest_irreducible(p, m)
        };
        Ok(Self::build(p as u32, m, modulus))
    }

    /// Builds GF(p^m) from an explicit modulus (constant term first, monic).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Field, GfError> {
        if modulus.len() < 2 {
            return Err(GfError::ZeroDegree);
        }
        let m = (modulus.len() - 1) as u32;
        Self::check_params(p, m)?;
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if f.iter().any(|&c| c >= p) || *f.last().unwrap() != 1 || !prime_poly::is_irreducible(&f, p) {
            return Err(GfError::BadModulus(modulus.to_vec()));
        }
        Ok(Self::build(p as u32, m, modulus.to_vec()))
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, GfError> {
        let f = Self::with_modulus(d.p as u64, &d.modulus)?;
        if f.m() != d.m {
            return Err(GfError::BadModulus(d.modulus.clone()));
        }
        Ok(f)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.0.p, m: self.0.m, modulus: self.0.modulus.clone() }
    }

    fn check_params(p: u64, m: u32) -> Result<(), GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let mut q: u64 = 1;
        for _ in 0..m {
            q = q.saturating_mul(p);
            if q > MAX_ORDER {
                return Err(GfError::OrderTooLarge { p, m });
            }
        }
        Ok(())
    }

    fn smallest_irreducible(p: u64, m: u32) -> Vec<u32> {
        let count = p.pow(m);
        for idx in 0..count {
            // c_0 is the most significant digit of idx, so this walks the
            // candidates in lexicographic order with the constant term first.
            let mut f = vec![0u64; m as usize + 1];
            let mut r = idx;
            for j in (0..m as usize).rev() {
                f[j] = r % p;
                r /= p;
            }
            f[m as usize] = 1;
            if f[0] == 0 {
                continue;
            }
            if prime_poly::is_irreducible(&f, p) {
                return f.into_iter().map(|c| c as u32).collect();
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    fn build(p: u32, m: u32, modulus: Vec<u32>) -> Field {
        let q = p.pow(m);
        let f: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let pp = p as u64;
        let to_poly = |v: u32| -> Vec<u64> {
            let mut out = Vec::with_capacity(m as usize);
            let mut r = v;
            for _ in 0..m {
                out.push((r % p) as u64);
                r /= p;
            }
            prime_poly::trim(&mut out);
            out
        };
        let from_poly = |c: &[u64]| -> u32 {
            c.iter().rev().fold(0u32, |acc, &d| acc * p + d as u32)
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let primitive = if q == 2 {
            1
        } else {
            (1..q)
                .find(|&g| {
                    let gp = to_poly(g);
                    factors
                        .iter()
                        .all(|&l| prime_poly::powmod(&gp, order / l, &f, pp) != vec![1u64])
                })
                .expect("multiplicative group is cyclic")
        };

        let n1 = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n1.max(1)];
        let mut log = vec![NO_LOG; q as usize];
        let gp = to_poly(primitive);
        let mut cur = vec![1u64];
        for i in 0..n1 {
            let v = from_poly(&cur);
            exp[i] = v;
            exp[i + n1] = v;
            log[v as usize] = i as u32;
            cur = prime_poly::mulmod(&cur, &gp, &f, pp);
        }
        if n1 == 0 {
            exp[0] = 1;
        }

        let neg: Vec<u32> = (0..q)
            .map(|v| {
                let c = to_poly(v);
                let n: Vec<u64> = c.iter().map(|&d| (pp - d) % pp).collect();
                from_poly(&n)
            })
            .collect();

        let zech: Vec<u32> = (0..n1)
            .map(|d| {
                let mut c = to_poly(exp[d]);
                if c.is_empty() {
                    c.push(0);
                }
                c[0] = (c[0] + 1) % pp;
                let v = from_poly(&c);
                if v == 0 {
                    NO_LOG
                } else {
                    log[v as usize]
                }
            })
            .collect();

        Field(Arc::new(Tables { p, m, q, modulus, primitive, exp, log, zech, neg }))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.0.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn primitive_element(&self) -> Elem {
        Elem(self.0.primitive)
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// Checked conversion from the integer encoding.
    pub fn elem(&self, value: u64) -> Result<Elem, GfError> {
        if value < self.0.q as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(GfError::OutOfRange { value, order: self.0.q })
        }
    }

    /// The image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.0.q
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut r = a.0;
        (0..self.0.m)
            .map(|_| {
                let d = r % p;
                r /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem, GfError> {
        if coeffs.len() > self.0.m as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(GfError::OutOfRange { value: u64::MAX, order: self.0.q });
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &d| acc * self.0.p + d)))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (1..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.0;
        if t.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if t.m == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= t.p { s - t.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let la = t.log[a.0 as usize];
        let lb = t.log[b.0 as usize];
        let n1 = t.q - 1;
        let d = if lb >= la { lb - la } else { lb + n1 - la };
        let z = t.zech[d as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(t.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.0;
        Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let t = &*self.0;
        let l = t.log[a.0 as usize];
        Ok(Elem(t.exp[((t.q - 1 - l) % (t.q - 1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// a^e for a nonnegative exponent; 0^0 = 1.
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let t = &*self.0;
        let n1 = (t.q - 1) as u64;
        let l = t.log[a.0 as usize] as u64;
        Elem(t.exp[((l * (e % n1)) % n1) as usize])
    }

    /// a^e for a signed exponent; negative powers of zero are an error.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// x -> x^p.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.0.p as u64)
    }

    fn check_sub(&self, sub_degree: u32) -> Result<u64, GfError> {
        if sub_degree == 0 || self.0.m % sub_degree != 0 {
            return Err(GfError::NotASubfield { sub: sub_degree, m: self.0.m });
        }
        Ok((self.0.p as u64).pow(sub_degree))
    }

    /// Relative trace onto the subfield GF(p^sub_degree):
    /// x + x^s + x^(s^2) + ... with s = p^sub_degree.
    pub fn trace(&self, x: Elem, sub_degree: u32) -> Result<Elem, GfError> {
        let s = self.check_sub(sub_degree)?;
        let terms = self.0.m / sub_degree;
        let mut acc = Elem::ZERO;
        let mut cur = x;
        for _ in 0..terms {
            acc = self.add(acc, cur);
            cur = self.pow(cur, s);
        }
        Ok(acc)
    }

    /// Relative norm onto GF(p^sub_degree): x^((q-1)/(s-1)).
    pub fn norm(&self, x: Elem, sub_degree: u32) -> Result<Elem, GfError> {
        let s = self.check_sub(sub_degree)?;
        let e = (self.0.q as u64 - 1) / (s - 1);
        Ok(self.pow(x, e))
    }

    /// Elements of the subfield GF(p^sub_degree) in canonical order.
    pub fn subfield_elements(&self, sub_degree: u32) -> Result<Vec<Elem>, GfError> {
        let s = self.check_sub(sub_degree)?;
        Ok(self.elements().filter(|&x| self.pow(x, s) == x).collect())
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, GfError> {
        Ok(FieldElement { field: self.clone(), value: self.elem(value)? })
    }

    pub fn wrap(&self, value: Elem) -> FieldElement {
        FieldElement { field: self.clone(), value }
    }
}

/// An element paired with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{:?}", self.value.0, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.0)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn elem(&self) -> Elem {
        self.value
    }

    pub fn value(&self) -> u32 {
        self.value.0
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch { left: self.field.order(), right: other.field.order() })
        }
    }

    fn with(&self, value: Elem) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn checked_add(&self, rhs: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.add(self.value, rhs.value)))
    }

    pub fn checked_sub(&self, rhs: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.sub(self.value, rhs.value)))
    }

    pub fn checked_mul(&self, rhs: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.mul(self.value, rhs.value)))
    }

    pub fn checked_div(&self, rhs: &FieldElement) -> Result<FieldElement, GfError> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.div(self.value, rhs.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement, GfError> {
        Ok(self.with(self.field.pow_signed(self.value, e)?))
    }

    pub fn trace(&self, sub_degree: u32) -> Result<FieldElement, GfError> {
        Ok(self.with(self.field.trace(self.value, sub_degree)?))
    }

    pub fn norm(&self, sub_degree: u32) -> Result<FieldElement, GfError> {
        Ok(self.with(self.field.norm(self.value, sub_degree)?))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field element operands from different fields")
            }
        }

        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
