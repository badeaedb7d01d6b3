use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{cmp_poly, Poly1, PolyError};
use crate::gf::Field;

/// Place of the rational function field F_q(x): a monic irreducible, or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Finite(Poly1),
    Infinite,
}

impl Place {
    /// The place `x = a` for `a` in the coefficient field.
    pub fn at(field: &Field, a: u64) -> Place {
        Place::Finite(Poly1::from_raw(field.clone(), vec![field.neg_raw(a), 1]))
    }

    /// Finite place of a monic irreducible polynomial.
    pub fn finite(pi: Poly1) -> Result<Place, PolyError> {
        if !pi.is_monic() || !pi.is_irreducible() {
            return Err(PolyError::NotIrreducible(pi.to_string()));
        }
        Ok(Place::Finite(pi))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap(),
            Place::Infinite => 1,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => cmp_poly(a, b),
            (Place::Finite(_), Place::Infinite) => Ordering::Less,
            (Place::Infinite, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinite, Place::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "({pi})"),
            Place::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Place::Finite(pi) => {
                m.serialize_entry("kind", "finite")?;
                m.serialize_entry("poly", &pi.to_string())?;
                m.serialize_entry("degree", &self.degree())?;
            }
            Place::Infinite => {
                m.serialize_entry("kind", "infinite")?;
                m.serialize_entry("degree", &1)?;
            }
        }
        m.end()
    }
}

/// Reduced quotient of univariate polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly1,
    den: Poly1,
}

impl RationalFunction {
    pub fn new(num: Poly1, den: Poly1) -> Result<RationalFunction, PolyError> {
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.field() != den.field() {
            return Err(PolyError::FieldMismatch(
                num.field().to_string(),
                den.field().to_string(),
            ));
        }
        let g = num.gcd(&den);
        let (num, den) = if num.is_zero() {
            (num, Poly1::one(den.field()))
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let inv = den.field().inv_raw(den.leading()).unwrap();
        Ok(RationalFunction {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn from_poly(p: Poly1) -> RationalFunction {
        let den = Poly1::one(p.field());
        RationalFunction { num: p, den }
    }

    pub fn x(field: &Field) -> RationalFunction {
        RationalFunction::from_poly(Poly1::x(field))
    }

    pub fn constant(field: &Field, c: u64) -> RationalFunction {
        RationalFunction::from_poly(Poly1::constant(field, c))
    }

    pub fn zero(field: &Field) -> RationalFunction {
        RationalFunction::from_poly(Poly1::zero(field))
    }

    pub fn numerator(&self) -> &Poly1 {
        &self.num
    }

    pub fn denominator(&self) -> &Poly1 {
        &self.den
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inverse(&self) -> Result<RationalFunction, PolyError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<RationalFunction, PolyError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(n),
            den: base.den.pow(n),
        })
    }

    pub fn scale(&self, c: u64) -> RationalFunction {
        RationalFunction::new(self.num.scale(c), self.den.clone()).unwrap()
    }

    /// Value at `x = a`, or `None` at a pole.
    pub fn eval_raw(&self, a: u64) -> Option<u64> {
        let f = self.field();
        let d = self.den.eval_raw(a);
        f.inv_raw(d).map(|inv| f.mul_raw(self.num.eval_raw(a), inv))
    }

    /// `deg(num) - deg(den)`, the negated valuation at infinity.
    pub fn degree(&self) -> i64 {
        self.num.degree().map_or(i64::MIN, |d| d as i64) - self.den.degree().unwrap() as i64
    }

    /// Order of vanishing at `place`, negative at poles.
    pub fn valuation(&self, place: &Place) -> Result<i64, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroValuation);
        }
        Ok(match place {
            Place::Infinite => -self.degree(),
            Place::Finite(pi) => multiplicity(&self.num, pi) as i64 - multiplicity(&self.den, pi) as i64,
        })
    }

    /// Poles with their orders, finite places first, infinity last.
    pub fn pole_divisor(&self) -> Result<Vec<(Place, u64)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroValuation);
        }
        let mut out: Vec<(Place, u64)> = self
            .den
            .factor()
            .into_iter()
            .map(|(pi, e)| (Place::Finite(pi), e as u64))
            .collect();
        if self.degree() > 0 {
            out.push((Place::Infinite, self.degree() as u64));
        }
        Ok(out)
    }

    /// Full principal divisor: every zero and pole with its valuation.
    pub fn divisor(&self) -> Result<Vec<(Place, i64)>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroValuation);
        }
        let mut out: Vec<(Place, i64)> = Vec::new();
        if !self.num.is_constant() {
            out.extend(self.num.factor().into_iter().map(|(pi, e)| (Place::Finite(pi), e as i64)));
        }
        out.extend(self.den.factor().into_iter().map(|(pi, e)| (Place::Finite(pi), -(e as i64))));
        if self.degree() != 0 {
            out.push((Place::Infinite, -self.degree()));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.render(var);
        }
        format!("({})/({})", self.num.render(var), self.den.render(var))
    }
}

fn multiplicity(f: &Poly1, pi: &Poly1) -> u64 {
    let mut n = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = g.div_rem(pi);
        if !r.is_zero() {
            return n;
        }
        g = q;
        n += 1;
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.render("x"), self.field())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        RationalFunction::new(num, &self.den * &o.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero.
    fn div(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num).expect("division by zero")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction { (&self).$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn rf(field: &Field, num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly1::from_ints(field, num), Poly1::from_ints(field, den)).unwrap()
    }

    #[test]
    fn canonical_form() {
        let f5 = make_field(5, 1).unwrap();
        // (2x^2 - 2) / (2x - 2) = x + 1
        let r = rf(&f5, &[-2, 0, 2], &[-2, 2]);
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &Poly1::from_ints(&f5, &[1, 1]));
        let s = rf(&f5, &[3], &[0, 2]);
        assert!(s.denominator().is_monic());
        assert!(RationalFunction::new(Poly1::one(&f5), Poly1::zero(&f5)).is_err());
    }

    #[test]
    fn valuation_examples() {
        let f5 = make_field(5, 1).unwrap();
        let zero = Place::at(&f5, 0);
        assert_eq!(rf(&f5, &[1], &[0, 1]).valuation(&zero).unwrap(), -1);
        // a x + 1/x = (a x^2 + 1)/x, a = 2
        let g = rf(&f5, &[1, 0, 2], &[0, 1]);
        assert_eq!(g.valuation(&Place::Infinite).unwrap(), -1);
        assert_eq!(rf(&f5, &[0, 0, 1], &[1]).valuation(&zero).unwrap(), 2);
        assert_eq!(
            RationalFunction::zero(&f5).valuation(&zero),
            Err(PolyError::ZeroValuation)
        );
    }

    #[test]
    fn pole_divisor_examples() {
        for p in [3u64, 5, 7] {
            let f = make_field(p, 1).unwrap();
            for a in 1..p as i64 {
                let g = rf(&f, &[1, 0, a], &[0, 1]);
                assert_eq!(
                    g.pole_divisor().unwrap(),
                    vec![(Place::at(&f, 0), 1), (Place::Infinite, 1)]
                );
            }
            for b in 0..p as i64 {
                let g = rf(&f, &[1, b], &[0, 1]);
                assert_eq!(g.pole_divisor().unwrap(), vec![(Place::at(&f, 0), 1)]);
            }
            let mut c = vec![0i64; p as usize + 1];
            c[1] = -1;
            c[p as usize] = 1;
            let eta = rf(&f, &c, &[1]);
            assert_eq!(eta.pole_divisor().unwrap(), vec![(Place::Infinite, p)]);
        }
    }

    #[test]
    fn irreducible_place_of_higher_degree() {
        let f3 = make_field(3, 1).unwrap();
        let g = rf(&f3, &[1], &[1, 0, 1]);
        let poles = g.pole_divisor().unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].0.degree(), 2);
        let d: i64 = g.divisor().unwrap().iter().map(|(pl, v)| v * pl.degree() as i64).sum();
        assert_eq!(d, 0);
    }
}
