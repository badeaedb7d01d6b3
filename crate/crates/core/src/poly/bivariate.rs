use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{Poly1, PolyError};
use crate::gf::{Field, FieldElement};

/// Exponent pair `(i, j)` of the monomial `u^i v^j`.
pub type Monomial = (u32, u32);

/// Sparse bivariate polynomial in two named variables.
///
/// Zero coefficients are never stored. The variable names only matter for
/// rendering and for refusing to mix polynomials over different rings.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    field: Field,
    vars: Arc<[String; 2]>,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly2 {
    pub fn zero(field: &Field, vars: [&str; 2]) -> Poly2 {
        Poly2 {
            field: field.clone(),
            vars: Arc::new([vars[0].to_string(), vars[1].to_string()]),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> Poly2 {
        Poly2 {
            field: self.field.clone(),
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, vars: [&str; 2], c: u64) -> Poly2 {
        Poly2::monomial(field, vars, c, (0, 0))
    }

    pub fn monomial(field: &Field, vars: [&str; 2], c: u64, m: Monomial) -> Poly2 {
        let mut p = Poly2::zero(field, vars);
        if c != 0 {
            p.terms.insert(m, c);
        }
        p
    }

    /// The two coordinate functions.
    pub fn gens(field: &Field, vars: [&str; 2]) -> (Poly2, Poly2) {
        (
            Poly2::monomial(field, vars, 1, (1, 0)),
            Poly2::monomial(field, vars, 1, (0, 1)),
        )
    }

    pub fn from_terms(
        field: &Field,
        vars: [&str; 2],
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Poly2 {
        let mut p = Poly2::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, field.reduce_int(c));
        }
        p
    }

    /// Lifts a univariate polynomial into the given variable (0 or 1).
    pub fn from_poly1(g: &Poly1, vars: [&str; 2], var: usize) -> Poly2 {
        let mut p = Poly2::zero(g.field(), vars);
        for (i, &c) in g.coeffs().iter().enumerate() {
            let m = if var == 0 { (i as u32, 0) } else { (0, i as u32) };
            p.add_term(m, c);
        }
        p
    }

    /// `u^p - u` in the chosen variable.
    pub fn artin_schreier(field: &Field, vars: [&str; 2], var: usize) -> Poly2 {
        let p = field.characteristic() as u32;
        let (a, b) = if var == 0 { ((p, 0), (1, 0)) } else { ((0, p), (0, 1)) };
        Poly2::from_terms(field, vars, [(a, 1), (b, -1)])
    }

    fn add_term(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        let e = self.terms.entry(m).or_insert(0);
        *e = f.add_raw(*e, c);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> [&str; 2] {
        [&self.vars[0], &self.vars[1]]
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> u64 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(i, j)| if var == 0 { i } else { j })
            .max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Same field and variable names.
    pub fn same_ring(&self, o: &Poly2) -> bool {
        self.field == o.field && self.vars == o.vars
    }

    fn assert_same_ring(&self, o: &Poly2) {
        assert!(
            self.same_ring(o),
            "mixed-ring bivariate arithmetic: {:?}/{} vs {:?}/{}",
            self.vars,
            self.field,
            o.vars,
            o.field
        );
    }

    /// Same polynomial viewed in differently named variables.
    pub fn rename(&self, vars: [&str; 2]) -> Poly2 {
        Poly2 {
            field: self.field.clone(),
            vars: Arc::new([vars[0].to_string(), vars[1].to_string()]),
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, c: u64) -> Poly2 {
        let mut r = self.empty_like();
        for (&m, &a) in &self.terms {
            r.add_term(m, self.field.mul_raw(a, c));
        }
        r
    }

    pub fn pow(&self, mut e: u64) -> Poly2 {
        let mut base = self.clone();
        let mut r = Poly2::constant(&self.field, self.vars(), 1);
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

    /// Replaces the first variable by `gx` and the second by `gy`.
    ///
    /// The result lives in the ring of `gx` and `gy`.
    pub fn substitute2(&self, gx: &Poly2, gy: &Poly2) -> Result<Poly2, PolyError> {
        for g in [gx, gy] {
            if g.field != self.field {
                return Err(PolyError::FieldMismatch(
                    self.field.to_string(),
                    g.field.to_string(),
                ));
            }
        }
        if gx.vars != gy.vars {
            return Err(PolyError::VariableMismatch(
                gx.vars.join(","),
                gy.vars.join(","),
            ));
        }
        let mut xp: HashMap<u32, Poly2> = HashMap::new();
        let mut yp: HashMap<u32, Poly2> = HashMap::new();
        let mut out = gx.empty_like();
        for (&(i, j), &c) in &self.terms {
            let px = xp.entry(i).or_insert_with(|| gx.pow(i as u64)).clone();
            let py = yp.entry(j).or_insert_with(|| gy.pow(j as u64));
            let t = (&px * py).scale(c);
            out = &out + &t;
        }
        Ok(out)
    }

    /// Value at a point; coefficients from F_p are embedded when the point
    /// lies in an extension.
    pub fn eval(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let t = x.field();
        assert!(t == y.field(), "point coordinates in different fields");
        assert!(
            t == &self.field || (self.field.is_prime_field() && t.same_characteristic(&self.field)),
            "cannot evaluate {} polynomial at a point of {}",
            self.field,
            t
        );
        let mut acc = 0;
        for (&(i, j), &c) in &self.terms {
            let m = t.mul_raw(t.pow_raw(x.value(), i as u64), t.pow_raw(y.value(), j as u64));
            acc = t.add_raw(acc, t.mul_raw(c, m));
        }
        t.element(acc)
    }

    /// Copy of an F_p polynomial with coefficients embedded in `target`.
    pub fn base_change(&self, target: &Field) -> Result<Poly2, PolyError> {
        if !self.field.is_prime_field() || !target.same_characteristic(&self.field) {
            return Err(PolyError::FieldMismatch(
                self.field.to_string(),
                target.to_string(),
            ));
        }
        Ok(Poly2 {
            field: target.clone(),
            vars: self.vars.clone(),
            terms: self.terms.clone(),
        })
    }

    /// Leading monomial and coefficient in lex order with the first variable
    /// dominant.
    pub fn leading_term(&self) -> Option<(Monomial, u64)> {
        self.terms.iter().next_back().map(|(&m, &c)| (m, c))
    }

    /// Multivariate division by a single polynomial in lex order.
    ///
    /// Returns `(q, r)` with `self = q * g + r` and no monomial of `r`
    /// divisible by the leading monomial of `g`. Since `{g}` is a Groebner
    /// basis of `(g)`, `r = 0` exactly when `g` divides `self`.
    pub fn div_rem_lex(&self, g: &Poly2) -> (Poly2, Poly2) {
        self.assert_same_ring(g);
        let ((gi, gj), gc) = g.leading_term().expect("division by zero polynomial");
        let inv = self.field.inv_raw(gc).unwrap();
        let mut q = self.empty_like();
        let mut r = self.empty_like();
        let mut rest = self.clone();
        while let Some(((i, j), c)) = rest.leading_term() {
            if i >= gi && j >= gj {
                let t = Poly2 {
                    field: self.field.clone(),
                    vars: self.vars.clone(),
                    terms: BTreeMap::from([((i - gi, j - gj), self.field.mul_raw(c, inv))]),
                };
                rest = &rest - &(&t * g);
                q = &q + &t;
            } else {
                rest.terms.remove(&(i, j));
                r.add_term((i, j), c);
            }
        }
        (q, r)
    }

    /// `Some(s)` when `self = s * other` for a nonzero scalar `s`.
    pub fn scalar_ratio(&self, other: &Poly2) -> Option<u64> {
        if !self.same_ring(other) || self.terms.len() != other.terms.len() || other.is_zero() {
            return None;
        }
        let (m, c) = other.leading_term().unwrap();
        let s = self
            .field
            .mul_raw(self.coeff(m), self.field.inv_raw(c).unwrap());
        (s != 0 && *self == other.scale(s)).then_some(s)
    }

    /// Largest monomial dividing every term, with its coefficient set to 1.
    pub fn monomial_content(&self) -> Monomial {
        let i = self.terms.keys().map(|m| m.0).min().unwrap_or(0);
        let j = self.terms.keys().map(|m| m.1).min().unwrap_or(0);
        (i, j)
    }

    /// Divides out a monomial that divides every term.
    pub fn strip_monomial(&self, (di, dj): Monomial) -> Poly2 {
        let mut r = self.empty_like();
        for (&(i, j), &c) in &self.terms {
            r.terms.insert((i - di, j - dj), c);
        }
        r
    }

    /// Renders as `c*u^i*v^j` terms joined by ` + `, highest total degree first.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut ms: Vec<(&Monomial, &u64)> = self.terms.iter().collect();
        ms.sort_by(|a, b| (b.0 .0 + b.0 .1, b.0 .0).cmp(&(a.0 .0 + a.0 .1, a.0 .0)));
        let parts: Vec<String> = ms
            .into_iter()
            .map(|(&(i, j), &c)| {
                let mut s = self.field.element(c).to_string();
                for (e, v) in [(i, &self.vars[0]), (j, &self.vars[1])] {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{v}")),
                        _ => s.push_str(&format!("*{v}^{e}")),
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.render(), self.field)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, o: &Poly2) -> Poly2 {
        self.assert_same_ring(o);
        let mut r = self.clone();
        for (&m, &c) in &o.terms {
            r.add_term(m, c);
        }
        r
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, o: &Poly2) -> Poly2 {
        self + &(-o)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        let f = &self.field;
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = f.neg_raw(*c);
        }
        r
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, o: &Poly2) -> Poly2 {
        self.assert_same_ring(o);
        let f = &self.field;
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(self.len() * o.len());
        for (&(i, j), &a) in &self.terms {
            for (&(k, l), &b) in &o.terms {
                let e = acc.entry((i + k, j + l)).or_insert(0);
                *e = f.add_raw(*e, f.mul_raw(a, b));
            }
        }
        let mut r = self.empty_like();
        r.terms = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        r
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $m(self, o: Poly2) -> Poly2 { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Resultant of two polynomials in an auxiliary variable `t` whose
/// coefficients (lowest degree first) are bivariate polynomials.
///
/// Computed as the Sylvester determinant by cofactor expansion, which only
/// needs ring operations; intended for the small degrees used here.
pub fn sylvester_resultant(a: &[Poly2], b: &[Poly2]) -> Poly2 {
    assert!(!a.is_empty() && !b.is_empty());
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    assert!(size <= 8, "sylvester_resultant is for small degrees");
    let zero = a[0].empty_like();
    if size == 0 {
        return Poly2::constant(a[0].field(), a[0].vars(), 1);
    }
    let mut rows = Vec::with_capacity(size);
    // n shifted copies of a, m of b; coefficients highest degree first.
    for s in 0..n {
        let mut row = vec![zero.clone(); size];
        for (d, c) in a.iter().rev().enumerate() {
            row[s + d] = c.clone();
        }
        rows.push(row);
    }
    for s in 0..m {
        let mut row = vec![zero.clone(); size];
        for (d, c) in b.iter().rev().enumerate() {
            row[s + d] = c.clone();
        }
        rows.push(row);
    }
    let cols: Vec<usize> = (0..size).collect();
    laplace(&rows, 0, &cols)
}

fn laplace(rows: &[Vec<Poly2>], r: usize, cols: &[usize]) -> Poly2 {
    if cols.len() == 1 {
        return rows[r][cols[0]].clone();
    }
    let mut acc = rows[r][cols[0]].empty_like();
    for (k, &c) in cols.iter().enumerate() {
        let entry = &rows[r][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(rows, r + 1, &rest);
        let term = entry * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn am(p: u64) -> (Field, Poly2) {
        let f = make_field(p, 1).unwrap();
        let v = ["x", "y"];
        let poly = &(&Poly2::artin_schreier(&f, v, 0) * &Poly2::artin_schreier(&f, v, 1))
            - &Poly2::constant(&f, v, 1);
        (f, poly)
    }

    #[test]
    fn translation_leaves_curve_unchanged() {
        let (f, poly) = am(5);
        let (x, y) = Poly2::gens(&f, ["x", "y"]);
        let gx = &x + &Poly2::constant(&f, ["x", "y"], 1);
        assert_eq!(poly.substitute2(&gx, &y).unwrap(), poly);
        assert_eq!(poly.substitute2(&x, &y).unwrap(), poly);
    }

    #[test]
    fn swap_leaves_curve_unchanged_p3() {
        let (f, poly) = am(3);
        let (x, y) = Poly2::gens(&f, ["x", "y"]);
        assert_eq!(poly.substitute2(&y, &x).unwrap(), poly);
        // Explicit expansion: x^3y^3 - x^3y - xy^3 + xy - 1 over F_3.
        assert_eq!(poly.render(), "1*x^3*y^3 + 2*x^3*y + 2*x*y^3 + 1*x*y + 2");
    }

    #[test]
    fn field_mismatch_is_error() {
        let (_, poly) = am(3);
        let f5 = make_field(5, 1).unwrap();
        let (x, y) = Poly2::gens(&f5, ["x", "y"]);
        assert!(matches!(poly.substitute2(&x, &y), Err(PolyError::FieldMismatch(..))));
    }

    #[test]
    fn lex_division() {
        let (f, poly) = am(3);
        let v = ["x", "y"];
        let g = &Poly2::gens(&f, v).0 + &Poly2::constant(&f, v, 2);
        let prod = &poly * &g;
        let (q, r) = prod.div_rem_lex(&poly);
        assert!(r.is_zero());
        assert_eq!(q, g);
        let (q2, r2) = (&prod + &Poly2::constant(&f, v, 1)).div_rem_lex(&poly);
        assert_eq!(q2, g);
        assert_eq!(r2, Poly2::constant(&f, v, 1));
    }

    #[test]
    fn resultant_linear_quadratic() {
        // Res_t(t^2 - s, t - w) = w^2 - s  (in vars s, w).
        let f = make_field(5, 1).unwrap();
        let v = ["s", "w"];
        let (s, w) = Poly2::gens(&f, v);
        let one = Poly2::constant(&f, v, 1);
        let a = vec![-&s, Poly2::zero(&f, v), one.clone()];
        let b = vec![-&w, one];
        let r = sylvester_resultant(&a, &b);
        assert_eq!(r, &w.pow(2) - &s);
    }

    #[test]
    fn scalar_ratio_detection() {
        let (_, poly) = am(5);
        assert_eq!(poly.scale(3).scalar_ratio(&poly), Some(3));
        assert_eq!(poly.scalar_ratio(&poly.pow(2)), None);
    }
}
