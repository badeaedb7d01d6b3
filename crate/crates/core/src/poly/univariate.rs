use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::{prime_factors, Field, FieldElement};

/// Dense univariate polynomial over a finite field.
///
/// Coefficients are packed field values (see [`crate::gf`]), lowest degree
/// first, with no trailing zeros; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly1 {
    field: Field,
    coeffs: Vec<u64>,
}

impl Poly1 {
    pub fn from_raw(field: Field, mut coeffs: Vec<u64>) -> Poly1 {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly1 { field, coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly1 {
        let raw = coeffs.iter().map(|&c| field.reduce_int(c)).collect();
        Poly1::from_raw(field.clone(), raw)
    }

    pub fn zero(field: &Field) -> Poly1 {
        Poly1::from_raw(field.clone(), vec![])
    }

    pub fn one(field: &Field) -> Poly1 {
        Poly1::constant(field, 1)
    }

    pub fn constant(field: &Field, c: u64) -> Poly1 {
        Poly1::from_raw(field.clone(), vec![c])
    }

    pub fn x(field: &Field) -> Poly1 {
        Poly1::monomial(field, 1, 1)
    }

    pub fn monomial(field: &Field, c: u64, n: usize) -> Poly1 {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly1::from_raw(field.clone(), coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn assert_same_field(&self, other: &Poly1) {
        assert!(
            self.field == other.field,
            "cross-field polynomial arithmetic: {} vs {}",
            self.field,
            other.field
        );
    }

    pub fn scale(&self, c: u64) -> Poly1 {
        let f = &self.field;
        Poly1::from_raw(
            f.clone(),
            self.coeffs.iter().map(|&a| f.mul_raw(a, c)).collect(),
        )
    }

    pub fn monic(&self) -> Poly1 {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv_raw(self.leading()).unwrap();
        self.scale(inv)
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Poly1 {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; n];
        c.extend_from_slice(&self.coeffs);
        Poly1::from_raw(self.field.clone(), c)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly1) -> (Poly1, Poly1) {
        self.assert_same_field(d);
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let dd = d.degree().unwrap();
        let inv = f.inv_raw(d.leading()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly1::zero(f), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul_raw(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub_raw(r[i - dd + j], f.mul_raw(c, dj));
            }
        }
        r.truncate(dd);
        (Poly1::from_raw(f.clone(), q), Poly1::from_raw(f.clone(), r))
    }

    pub fn rem(&self, d: &Poly1) -> Poly1 {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly1) -> Poly1 {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, if they are coprime.
    pub fn inv_mod(&self, m: &Poly1) -> Option<Poly1> {
        let f = &self.field;
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (Poly1::zero(f), Poly1::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (t0, t1) = (t1, t);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = f.inv_raw(r0.leading()).unwrap();
        Some(t0.scale(inv).rem(m))
    }

    pub fn pow(&self, mut e: u64) -> Poly1 {
        let mut base = self.clone();
        let mut r = Poly1::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        r
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly1) -> Poly1 {
        let mut base = self.rem(m);
        let mut r = Poly1::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = (&r * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        r
    }

    pub fn derivative(&self) -> Poly1 {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul_raw(a, f.reduce_int(i as i64)))
            .collect();
        Poly1::from_raw(f.clone(), c)
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly1) -> Poly1 {
        self.assert_same_field(g);
        let mut r = Poly1::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            r = &(&r * g) + &Poly1::constant(&self.field, c);
        }
        r
    }

    pub fn eval_raw(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add_raw(f.mul_raw(acc, x), c))
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        if *x.field() == self.field {
            return self.field.element(self.eval_raw(x.value()));
        }
        // F_p coefficients evaluated at a point of an extension.
        assert!(
            self.field.is_prime_field() && x.field().same_characteristic(&self.field),
            "cannot evaluate {} polynomial at {} point",
            self.field,
            x.field()
        );
        let t = x.field();
        t.element(
            self.coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| t.add_raw(t.mul_raw(acc, x.value()), c)),
        )
    }

    /// Roots in the coefficient field, ascending by packed value.
    pub fn roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return vec![];
        }
        (0..self.field.order())
            .filter(|&x| self.eval_raw(x) == 0)
            .collect()
    }

    /// `x^q mod self`, the Frobenius image of `x` in the quotient ring.
    fn x_to_q_mod(&self, h: &Poly1) -> Poly1 {
        h.pow_mod(self.field.order(), self)
    }

    /// Rabin's test over the coefficient field.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic();
        let x = Poly1::x(&self.field);
        let mut powers = vec![x.rem(&f)];
        for _ in 0..n {
            let next = f.x_to_q_mod(powers.last().unwrap());
            powers.push(next);
        }
        if powers[n] != x.rem(&f) {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let h = &powers[n / r as usize] - &x;
            f.gcd(&h).is_one()
        })
    }

    /// Inverse of the coefficient-wise Frobenius for a polynomial in `x^p`.
    fn pth_root(&self) -> Poly1 {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let c = self
            .coeffs
            .iter()
            .step_by(p)
            .map(|&a| f.pth_root_raw(a))
            .collect();
        Poly1::from_raw(f.clone(), c)
    }

    /// Square-free decomposition: monic pairwise-coprime `(g, e)` with
    /// `monic(self) = prod g^e`.
    pub fn squarefree_factors(&self) -> Vec<(Poly1, u32)> {
        assert!(!self.is_zero(), "factoring the zero polynomial");
        let mut out = Vec::new();
        let f = self.monic();
        if f.is_one() {
            return out;
        }
        let d = f.derivative();
        let mut c = f.gcd(&d);
        let mut w = f.exact_div(&c);
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.exact_div(&y);
            if !fac.is_one() {
                out.push((fac, i));
            }
            c = c.exact_div(&y);
            w = y;
            i += 1;
        }
        if !c.is_one() {
            let p = self.field.characteristic() as u32;
            for (g, e) in c.pth_root().squarefree_factors() {
                out.push((g, e * p));
            }
        }
        out
    }

    fn distinct_degree(&self) -> Vec<(Poly1, usize)> {
        let mut out = Vec::new();
        let mut f = self.clone();
        let x = Poly1::x(&self.field);
        let mut h = x.rem(&f);
        let mut d = 0;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = f.x_to_q_mod(&h);
            let g = f.gcd(&(&h - &x));
            if !g.is_one() {
                f = f.exact_div(&g);
                h = h.rem(&f);
                out.push((g, d));
            }
        }
        if f.degree().unwrap_or(0) > 0 {
            let n = f.degree().unwrap();
            out.push((f, n));
        }
        out
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly1>) {
        let n = self.degree().unwrap();
        if n == d {
            out.push(self.clone());
            return;
        }
        let f = &self.field;
        let q = f.order();
        loop {
            let a = Poly1::from_raw(f.clone(), (0..n).map(|_| rng.gen_range(0..q)).collect());
            if a.is_constant() {
                continue;
            }
            // a^{(q^d - 1)/2} = (a * a^q * ... * a^{q^{d-1}})^{(q-1)/2}
            let mut s = a.rem(self);
            let mut conj = s.clone();
            for _ in 1..d {
                conj = conj.pow_mod(q, self);
                s = (&s * &conj).rem(self);
            }
            let b = &s.pow_mod((q - 1) / 2, self) - &Poly1::one(f);
            let g = self.gcd(&b);
            if !g.is_one() && g.degree() != self.degree() {
                g.equal_degree(d, rng, out);
                self.exact_div(&g).monic().equal_degree(d, rng, out);
                return;
            }
        }
    }

    /// Factorization into monic irreducibles with multiplicities, sorted by
    /// degree then coefficients. Deterministic (fixed internal seed).
    pub fn factor(&self) -> Vec<(Poly1, u32)> {
        assert!(self.field.characteristic() % 2 == 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        let mut out = Vec::new();
        for (sqf, e) in self.squarefree_factors() {
            for (g, d) in sqf.distinct_degree() {
                let mut parts = Vec::new();
                g.monic().equal_degree(d, &mut rng, &mut parts);
                out.extend(parts.into_iter().map(|h| (h, e)));
            }
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        out
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let cs = self.field.element(c).to_string();
            parts.push(match i {
                0 => cs,
                1 if c == 1 => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if c == 1 => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

/// Total order: degree first, then coefficients from the top down.
pub fn cmp_poly(a: &Poly1, b: &Poly1) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.render("x"), self.field)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, o: &Poly1) -> Poly1 {
        self.assert_same_field(o);
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| f.add_raw(self.coeff(i), o.coeff(i))).collect();
        Poly1::from_raw(f.clone(), c)
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, o: &Poly1) -> Poly1 {
        self.assert_same_field(o);
        let f = &self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        let c = (0..n).map(|i| f.sub_raw(self.coeff(i), o.coeff(i))).collect();
        Poly1::from_raw(f.clone(), c)
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        let f = &self.field;
        Poly1::from_raw(f.clone(), self.coeffs.iter().map(|&a| f.neg_raw(a)).collect())
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, o: &Poly1) -> Poly1 {
        self.assert_same_field(o);
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Poly1::zero(f);
        }
        let mut c = vec![0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add_raw(c[i + j], f.mul_raw(a, b));
            }
        }
        Poly1::from_raw(f.clone(), c)
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly1 {
            type Output = Poly1;
            fn $m(self, o: Poly1) -> Poly1 { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);
