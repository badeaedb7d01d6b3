//! Exact arithmetic in F_p and F_{p^k}.
//!
//! An element of F_{p^k} is packed into one `u64` as the base-p integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, where `c_i` are its coordinates in
//! the power basis of a root of the field modulus. The prime field sits
//! inside every extension as the packed values `0..p`, so embedding F_p
//! constants is the identity on representatives.
//!
//! Fields are handed out as cheap [`Field`] handles. [`make_field`] caches
//! one handle per `(p, k)`, so repeated construction is free and
//! multiplication tables for small extensions are only built once.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::poly::Poly1;

/// Largest characteristic accepted; keeps every product of two residues in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;
/// Largest field order accepted for the packed representation.
pub const MAX_ORDER: u64 = 1 << 62;
/// Extensions up to this order get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("p must be odd")]
    EvenCharacteristic,
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    BadDegree,
    #[error("F_{p}^{k} exceeds the supported field size")]
    TooLarge { p: u64, k: u32 },
    #[error("modulus {0:?} is not a monic irreducible of the stated degree")]
    BadModulus(Vec<u64>),
    #[error("cross-field arithmetic between {0} and {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation requires a prime field, got {0}")]
    NotPrimeField(String),
}

/// Description of a finite field: characteristic, degree, and modulus.
///
/// `modulus` lists the `k + 1` coefficients (constant term first) of the
/// monic irreducible defining the extension. For `k = 1` it is the
/// placeholder `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub modulus: Vec<u64>,
}

impl FieldSpec {
    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

struct LogTables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct FieldInner {
    spec: FieldSpec,
    order: u64,
    /// `pows[i] = p^i` for `i <= k`.
    pows: Vec<u64>,
    tables: OnceLock<Option<LogTables>>,
}

/// Shared handle to a finite field. Cloning is a reference-count bump.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldInner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.spec == other.inner.spec
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.spec.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.inner.spec)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.inner.spec.serialize(s)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_characteristic(p: u64) -> Result<(), GfError> {
    if p % 2 == 0 {
        return Err(GfError::EvenCharacteristic);
    }
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(GfError::TooLarge { p, k: 1 });
    }
    Ok(())
}

fn field_cache() -> &'static Mutex<HashMap<(u64, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds F_{p^k} with the lexicographically least monic irreducible
/// modulus of degree `k` (coefficients compared constant term first).
pub fn make_field(p: u64, k: u32) -> Result<Field, GfError> {
    check_characteristic(p)?;
    if k < 1 {
        return Err(GfError::BadDegree);
    }
    match p.checked_pow(k) {
        Some(q) if q <= MAX_ORDER => {}
        _ => return Err(GfError::TooLarge { p, k }),
    }
    if let Some(f) = field_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        least_irreducible(p, k)?
    };
    let field = Field::from_parts(FieldSpec { p, k, modulus });
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry((p, k)).or_insert(field).clone())
}

fn least_irreducible(p: u64, k: u32) -> Result<Vec<u64>, GfError> {
    let prime = make_field(p, 1)?;
    let q = p.pow(k);
    // The constant term is the most significant position in the ordering.
    for n in 0..q {
        let mut coeffs = vec![0u64; k as usize + 1];
        let mut m = n;
        for j in (0..k as usize).rev() {
            coeffs[j] = m % p;
            m /= p;
        }
        coeffs[k as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        if Poly1::from_raw(prime.clone(), coeffs.clone()).is_irreducible() {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn from_parts(spec: FieldSpec) -> Field {
        let order = spec.order();
        let pows = (0..=spec.k).map(|i| spec.p.pow(i)).collect();
        Field {
            inner: Arc::new(FieldInner {
                spec,
                order,
                pows,
                tables: OnceLock::new(),
            }),
        }
    }

    /// Rebuilds a field from a serialized spec, validating the modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field, GfError> {
        check_characteristic(spec.p)?;
        if spec.k < 1 {
            return Err(GfError::BadDegree);
        }
        let canonical = make_field(spec.p, spec.k)?;
        if canonical.spec() == spec {
            return Ok(canonical);
        }
        if spec.k == 1 || spec.modulus.len() != spec.k as usize + 1 {
            return Err(GfError::BadModulus(spec.modulus.clone()));
        }
        let prime = make_field(spec.p, 1)?;
        let m = Poly1::from_raw(prime, spec.modulus.clone());
        if !m.is_monic() || m.degree() != Some(spec.k as usize) || !m.is_irreducible() {
            return Err(GfError::BadModulus(spec.modulus.clone()));
        }
        Ok(Field::from_parts(spec.clone()))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.inner.spec
    }

    pub fn characteristic(&self) -> u64 {
        self.inner.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.spec.k
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.spec.k == 1
    }

    /// The prime subfield F_p.
    pub fn prime_subfield(&self) -> Field {
        make_field(self.characteristic(), 1).expect("characteristic was validated")
    }

    pub fn same_characteristic(&self, other: &Field) -> bool {
        self.characteristic() == other.characteristic()
    }

    pub fn element(&self, value: u64) -> FieldElement {
        assert!(value < self.order(), "packed value {value} out of range for {self}");
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Canonical image of an integer.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(self.reduce_int(n))
    }

    pub fn reduce_int(&self, n: i64) -> u64 {
        n.rem_euclid(self.characteristic() as i64) as u64
    }

    /// Element with the given power-basis coordinates (little-endian).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.degree() as usize);
        let p = self.characteristic();
        let v = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (c % p) * self.inner.pows[i])
            .sum();
        self.element(v)
    }

    /// All elements in packed order `0, 1, ..., q - 1`.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |v| self.element(v))
    }

    // ---- raw packed arithmetic -------------------------------------------

    pub(crate) fn digits(&self, a: u64) -> [u64; 64] {
        let p = self.characteristic();
        let mut d = [0u64; 64];
        let mut a = a;
        for slot in d.iter_mut().take(self.degree() as usize) {
            *slot = a % p;
            a /= p;
        }
        d
    }

    fn pack(&self, d: &[u64]) -> u64 {
        let mut v = 0;
        for i in (0..self.degree() as usize).rev() {
            v = v * self.characteristic() + d[i];
        }
        v
    }

    pub fn add_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.characteristic();
        if self.is_prime_field() {
            return (a + b) % p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut d = [0u64; 64];
        for i in 0..self.degree() as usize {
            d[i] = (da[i] + db[i]) % p;
        }
        self.pack(&d)
    }

    pub fn neg_raw(&self, a: u64) -> u64 {
        let p = self.characteristic();
        if self.is_prime_field() {
            return (p - a) % p;
        }
        let da = self.digits(a);
        let mut d = [0u64; 64];
        for i in 0..self.degree() as usize {
            d[i] = (p - da[i]) % p;
        }
        self.pack(&d)
    }

    pub fn sub_raw(&self, a: u64, b: u64) -> u64 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub fn mul_raw(&self, a: u64, b: u64) -> u64 {
        if self.is_prime_field() {
            return a * b % self.characteristic();
        }
        if a == 0 || b == 0 {
            return 0;
        }
        match self.tables() {
            Some(t) => {
                let n = self.order() - 1;
                let e = (t.log[a as usize] as u64 + t.log[b as usize] as u64) % n;
                t.exp[e as usize] as u64
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    fn mul_schoolbook(&self, a: u64, b: u64) -> u64 {
        let p = self.characteristic();
        let k = self.degree() as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = [0u64; 128];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        let m = &self.inner.spec.modulus;
        for d in (k..2 * k - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..k {
                prod[d - k + i] = (prod[d - k + i] + (p - c) * m[i]) % p;
            }
        }
        self.pack(&prod)
    }

    fn tables(&self) -> Option<&LogTables> {
        self.inner
            .tables
            .get_or_init(|| {
                (!self.is_prime_field() && self.order() <= TABLE_LIMIT).then(|| self.build_tables())
            })
            .as_ref()
    }

    fn build_tables(&self) -> LogTables {
        let q = self.order();
        let n = q - 1;
        let factors = prime_factors(n);
        let pow = |mut b: u64, mut e: u64| {
            let mut r = 1;
            while e > 0 {
                if e & 1 == 1 {
                    r = self.mul_schoolbook(r, b);
                }
                b = self.mul_schoolbook(b, b);
                e >>= 1;
            }
            r
        };
        let g = (2..q)
            .find(|&g| factors.iter().all(|&r| pow(g, n / r) != 1))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x as u32;
            log[x as usize] = i as u32;
            x = self.mul_schoolbook(x, g);
        }
        LogTables { exp, log }
    }

    pub fn pow_raw(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_raw(r, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        r
    }

    pub fn inv_raw(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.is_prime_field() {
            return Some(inv_mod_prime(a, self.characteristic()));
        }
        if let Some(t) = self.tables() {
            let n = self.order() - 1;
            let l = t.log[a as usize] as u64;
            return Some(t.exp[((n - l) % n) as usize] as u64);
        }
        Some(self.pow_raw(a, self.order() - 2))
    }

    pub fn frobenius_raw(&self, a: u64) -> u64 {
        if self.is_prime_field() {
            a
        } else {
            self.pow_raw(a, self.characteristic())
        }
    }

    /// Absolute trace to F_p, returned as a residue in `0..p`.
    pub fn trace_raw(&self, a: u64) -> u64 {
        let mut acc = 0;
        let mut c = a;
        for _ in 0..self.degree() {
            acc = self.add_raw(acc, c);
            c = self.frobenius_raw(c);
        }
        debug_assert!(acc < self.characteristic(), "trace left the prime field");
        acc
    }

    /// Inverse Frobenius, the unique `b` with `b^p = a`.
    pub fn pth_root_raw(&self, a: u64) -> u64 {
        let mut c = a;
        for _ in 1..self.degree() {
            c = self.frobenius_raw(c);
        }
        c
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of_raw(&self, a: u64) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let mut n = self.order() - 1;
        for r in prime_factors(self.order() - 1) {
            while n % r == 0 && self.pow_raw(a, n / r) == 1 {
                n /= r;
            }
        }
        n
    }
}

fn inv_mod_prime(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

/// Least positive integer generating F_p^*.
pub fn primitive_element(field: &Field) -> Result<FieldElement, GfError> {
    if !field.is_prime_field() {
        return Err(GfError::NotPrimeField(field.to_string()));
    }
    let p = field.characteristic();
    let g = (1..p)
        .find(|&g| field.order_of_raw(g) == p - 1)
        .expect("F_p^* is cyclic");
    Ok(field.element(g))
}

/// Element of a finite field, tagged with its field.
///
/// Arithmetic operators panic when the operands live in different fields;
/// the `checked_*` methods report that as [`GfError::FieldMismatch`].
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: u64,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_prime_field() {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{:?}", self.coeffs())
        }
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.field.is_prime_field() {
            s.serialize_u64(self.value)
        } else {
            self.coeffs().serialize(s)
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed representative.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Power-basis coordinates, little-endian, length `k`.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.digits(self.value)[..self.field.degree() as usize].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    /// True when the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.value < self.field.characteristic()
    }

    fn with(&self, value: u64) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    fn check(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn checked_add(&self, o: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(o)?;
        Ok(self.with(self.field.add_raw(self.value, o.value)))
    }

    pub fn checked_sub(&self, o: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(o)?;
        Ok(self.with(self.field.sub_raw(self.value, o.value)))
    }

    pub fn checked_mul(&self, o: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(o)?;
        Ok(self.with(self.field.mul_raw(self.value, o.value)))
    }

    pub fn checked_div(&self, o: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(o)?;
        let inv = o.inverse()?;
        Ok(self.with(self.field.mul_raw(self.value, inv.value)))
    }

    pub fn inverse(&self) -> Result<FieldElement, GfError> {
        self.field
            .inv_raw(self.value)
            .map(|v| self.with(v))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow_raw(self.value, e))
    }

    /// Signed power; negative exponents invert first.
    pub fn powi(&self, e: i64) -> Result<FieldElement, GfError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn frobenius(&self) -> FieldElement {
        self.with(self.field.frobenius_raw(self.value))
    }

    /// Absolute trace `e + e^p + ... + e^{p^{k-1}}`, as an element of F_p.
    pub fn trace(&self) -> FieldElement {
        self.field
            .prime_subfield()
            .element(self.field.trace_raw(self.value))
    }

    pub fn multiplicative_order(&self) -> Result<u64, GfError> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.field.order_of_raw(self.value))
    }

    /// Image of an F_p element in `target` (same characteristic).
    pub fn embed_into(&self, target: &Field) -> Result<FieldElement, GfError> {
        if !self.in_prime_field() || !target.same_characteristic(&self.field) {
            return Err(GfError::FieldMismatch(
                self.field.to_string(),
                target.to_string(),
            ));
        }
        Ok(target.element(self.value))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg_raw(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Solves `d^p - d = c` in the field of `c`, if a solution exists there.
///
/// The map `d -> d^p - d` is F_p-linear with kernel F_p, so this is a
/// `k x k` linear system over F_p; the least solution (packed order) is
/// returned.
pub fn solve_artin_schreier(c: &FieldElement) -> Option<FieldElement> {
    let field = c.field().clone();
    let p = field.characteristic();
    let k = field.degree() as usize;
    // Column j is the image of the j-th basis vector.
    let mut cols = Vec::with_capacity(k);
    for j in 0..k {
        let basis = field.element(field.inner.pows[j]);
        let img = field.sub_raw(field.frobenius_raw(basis.value), basis.value);
        cols.push(field.digits(img));
    }
    let target = field.digits(c.value);
    // Augmented matrix rows i: [A_i0 .. A_i(k-1) | t_i].
    let mut m: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            let mut row: Vec<u64> = (0..k).map(|j| cols[j][i]).collect();
            row.push(target[i]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(r) = (row..k).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = inv_mod_prime(m[row][col], p);
        for v in m[row].iter_mut() {
            *v = *v * inv % p;
        }
        for r in 0..k {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for j in 0..=k {
                    m[r][j] = (m[r][j] + (p - f) * m[row][j]) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| r[k] != 0) {
        return None;
    }
    let mut sol = vec![0u64; k];
    for (r, &col) in pivots.iter().enumerate() {
        sol[col] = m[r][k];
    }
    Some(field.from_coeffs(&sol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_three() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.spec(), &FieldSpec { p: 3, k: 1, modulus: vec![0, 1] });
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f9_modulus_matches_root_free_enumeration() {
        // Oracle: first monic quadratic (constant term most significant)
        // with no root in F_3.
        let p = 3u64;
        let mut expected = None;
        'outer: for c0 in 0..p {
            for c1 in 0..p {
                let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                if !has_root {
                    expected = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = make_field(3, 2).unwrap();
        assert_eq!(Some(f.spec().modulus.clone()), expected);
        assert_eq!(f.spec().modulus, vec![1, 0, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(2, 1).unwrap_err().to_string(), "p must be odd");
        assert_eq!(make_field(9, 1).unwrap_err(), GfError::NotPrime(9));
        assert_eq!(make_field(1, 1).unwrap_err(), GfError::NotPrime(1));
        assert_eq!(make_field(3, 0).unwrap_err(), GfError::BadDegree);
        assert!(matches!(make_field(3, 60), Err(GfError::TooLarge { .. })));
    }

    #[test]
    fn primitive_elements() {
        for (p, g) in [(3, 2), (5, 2), (7, 3), (11, 2), (13, 2)] {
            let f = make_field(p, 1).unwrap();
            let e = primitive_element(&f).unwrap();
            assert_eq!(e.value(), g);
            assert_eq!(e.multiplicative_order().unwrap(), p - 1);
        }
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(primitive_element(&f9), Err(GfError::NotPrimeField(_))));
    }

    #[test]
    fn trace_examples() {
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(f9.zero().trace().value(), 0);
        assert_eq!(f9.one().trace().value(), 2);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.one().trace().value(), 1);
    }

    #[test]
    fn inverses_exhaustive_small_fields() {
        for (p, k) in [(3, 1), (3, 2), (3, 3), (5, 2), (7, 2), (7, 3), (3, 5)] {
            let f = make_field(p, k).unwrap();
            if f.order() > 343 {
                continue;
            }
            for a in f.elements().skip(1) {
                assert!((&a * &a.inverse().unwrap()).is_one(), "{a:?} in {f}");
            }
        }
    }

    #[test]
    fn frobenius_has_order_k() {
        for (p, k) in [(3, 2), (3, 3), (3, 5), (5, 2), (5, 3), (7, 2), (7, 3)] {
            let f = make_field(p, k).unwrap();
            for a in f.elements() {
                let mut b = a.clone();
                for _ in 0..k {
                    b = b.frobenius();
                }
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn trace_kernel_size() {
        for (p, k) in [(3, 1), (3, 2), (3, 4), (3, 8), (5, 3), (7, 2), (7, 4), (11, 2)] {
            let f = make_field(p, k).unwrap();
            if f.order() > 6561 {
                continue;
            }
            let kernel = f.elements().filter(|e| e.trace().is_zero()).count() as u64;
            assert_eq!(kernel, p.pow(k - 1), "F_{p}^{k}");
        }
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = make_field(5, 3).unwrap();
        for a in (0..f.order()).step_by(7) {
            for b in (0..f.order()).step_by(11) {
                assert_eq!(f.mul_raw(a, b), f.mul_schoolbook(a, b));
            }
        }
    }

    #[test]
    fn large_extension_without_tables() {
        let f = make_field(7, 7).unwrap();
        assert!(f.order() <= TABLE_LIMIT);
        let g = make_field(13, 7).unwrap();
        let a = g.from_coeffs(&[1, 2, 3, 4, 5, 6, 7]);
        assert!((&a * &a.inverse().unwrap()).is_one());
        assert_eq!(a.frobenius().frobenius().frobenius().frobenius().frobenius().frobenius().frobenius(), a);
    }

    #[test]
    #[should_panic(expected = "cross-field")]
    fn cross_field_arithmetic_panics() {
        let a = make_field(3, 1).unwrap().one();
        let b = make_field(5, 1).unwrap().one();
        let _ = a + b;
    }

    #[test]
    fn cross_field_checked_is_error() {
        let a = make_field(3, 1).unwrap().one();
        let b = make_field(3, 2).unwrap().one();
        assert!(matches!(a.checked_mul(&b), Err(GfError::FieldMismatch(..))));
    }

    #[test]
    fn artin_schreier_solutions() {
        // d^p - d = c is solvable in F_{p^m} iff the absolute trace of c vanishes.
        for (p, k) in [(3, 1), (3, 2), (3, 3), (5, 2), (5, 5)] {
            let f = make_field(p, k).unwrap();
            for c in f.elements().step_by(((f.order() / 50) as usize).max(1)) {
                let sol = solve_artin_schreier(&c);
                assert_eq!(sol.is_some(), c.trace().is_zero());
                if let Some(d) = sol {
                    assert_eq!(&d.pow(p) - &d, c);
                }
            }
        }
    }

    #[test]
    fn spec_roundtrip_json() {
        let f = make_field(3, 2).unwrap();
        let s = serde_json::to_string(f.spec()).unwrap();
        assert_eq!(s, r#"{"p":3,"k":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(Field::from_spec(&back).unwrap(), f);
        let bad = FieldSpec { p: 3, k: 2, modulus: vec![0, 0, 1] };
        assert!(Field::from_spec(&bad).is_err());
    }
}
