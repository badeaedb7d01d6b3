//! Degree-p Artin–Schreier covers `y^p - y = f(x)` of the projective line:
//! standard-form reduction, ramification filtrations, genus by
//! Riemann–Hurwitz and p-rank by Deuring–Shafarevich.
//!
//! A ramified place of degree `d` over the base field splits into `d`
//! geometric points, so every per-place contribution below is weighted by
//! the place degree.

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Field, FieldSpec, GfError};
use crate::poly::{Place, Poly1, PolyError, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AsError {
    #[error("reducible cover: f = u^p - u for a rational u")]
    ReducibleCover,
    #[error("f has no poles after reduction; the cover is a constant field extension")]
    ConstantExtension,
    #[error("cover is not in standard form: pole of order {order} at {place}")]
    NotReduced { place: String, order: u64 },
    #[error("group of order {0} is not a p-group")]
    NotPGroup(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// `y^p - y = f` over `F_q(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ASCover {
    rhs: RationalFunction,
}

impl ASCover {
    pub fn new(rhs: RationalFunction) -> ASCover {
        ASCover { rhs }
    }

    pub fn rhs(&self) -> &RationalFunction {
        &self.rhs
    }

    pub fn field(&self) -> &Field {
        self.rhs.field()
    }

    pub fn p(&self) -> u64 {
        self.field().characteristic()
    }

    /// Whether every pole order is prime to `p`.
    pub fn is_reduced(&self) -> Result<bool, AsError> {
        Ok(self.offending_pole()?.is_none())
    }

    fn offending_pole(&self) -> Result<Option<(Place, u64)>, AsError> {
        if self.rhs.is_zero() {
            return Ok(None);
        }
        let p = self.p();
        Ok(self.rhs.pole_divisor()?.into_iter().find(|(_, m)| m % p == 0))
    }

    /// The standard form of this cover.
    pub fn reduced(&self) -> Result<ASCover, AsError> {
        Ok(ASCover::new(reduce_standard_form(&self.rhs)?.reduced))
    }
}

/// `f' = f - (u^p - u)` with every pole order of `f'` prime to `p`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: RationalFunction,
    pub correction: RationalFunction,
}

/// `u^p - u`.
pub fn artin_schreier_image(u: &RationalFunction) -> RationalFunction {
    let p = u.field().characteristic() as i64;
    &u.pow(p).expect("positive power") - u
}

/// Removes poles of order divisible by `p` by repeated leading-term
/// cancellation: at a pole of order `m = p n` with leading coefficient `r`
/// (a residue-field element), subtract `u^p - u` for `u = r^{1/p} / π^n`.
pub fn reduce_standard_form(f: &RationalFunction) -> Result<Reduction, AsError> {
    let field = f.field().clone();
    let p = field.characteristic();
    let mut cur = f.clone();
    let mut correction = RationalFunction::zero(&field);
    loop {
        if cur.is_zero() {
            return Err(AsError::ReducibleCover);
        }
        let Some((place, m)) = ASCover::new(cur.clone()).offending_pole()? else {
            break;
        };
        let n = m / p;
        let u = match &place {
            Place::Infinite => {
                let c = cur.numerator().leading();
                let e = field.pth_root_raw(c);
                RationalFunction::from_poly(Poly1::monomial(&field, e, n as usize))
            }
            Place::Finite(pi) => {
                // cur = num / (π^m h) with gcd(h, π) = 1.
                let h = cur.denominator().exact_div(&pi.pow(m));
                let r = (cur.numerator() * &h.inv_mod(pi).expect("h is prime to π")).rem(pi);
                // p-th root in F_q[x]/(π), a field of order p^{k d}.
                let steps = field.degree() as usize * pi.degree().unwrap() - 1;
                let mut s = r;
                for _ in 0..steps {
                    s = s.pow_mod(p, pi);
                }
                RationalFunction::new(s, pi.pow(n))?
            }
        };
        cur = &cur - &artin_schreier_image(&u);
        correction = &correction + &u;
    }
    if cur.is_constant() {
        let c = field.element(cur.numerator().coeff(0));
        return Err(if c.trace().is_zero() {
            AsError::ReducibleCover
        } else {
            AsError::ConstantExtension
        });
    }
    Ok(Reduction {
        reduced: cur,
        correction,
    })
}

/// Higher ramification groups at one place.
#[derive(Clone, Debug, Serialize)]
pub struct RamificationDatum {
    pub place: Place,
    pub place_degree: usize,
    /// Pole order of the reduced `f`; the unique jump of the filtration.
    pub jump: Option<u64>,
    /// `|S_P^(i)|` for `i = 0, 1, …` up to and including the first 1.
    pub filtration_orders: Vec<u64>,
    /// `Σ_i (|S_P^(i)| - 1)` for one geometric point over the place.
    pub different_exponent: u64,
}

/// Filtration at `place`: order `p` for `i = 0..=m`, then trivial, where
/// `m` is the pole order of the reduced right-hand side.
pub fn ramification_filtration(cover: &ASCover, place: &Place) -> Result<RamificationDatum, AsError> {
    if let Some((pl, order)) = cover.offending_pole()? {
        return Err(AsError::NotReduced {
            place: pl.to_string(),
            order,
        });
    }
    let p = cover.p();
    let v = cover.rhs.valuation(place)?;
    let (jump, filtration_orders) = if v < 0 {
        let m = (-v) as u64;
        let mut orders = vec![p; m as usize + 1];
        orders.push(1);
        (Some(m), orders)
    } else {
        (None, vec![1])
    };
    let different_exponent = filtration_orders.iter().map(|o| o - 1).sum();
    Ok(RamificationDatum {
        place: place.clone(),
        place_degree: place.degree(),
        jump,
        filtration_orders,
        different_exponent,
    })
}

/// A number together with the formula that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Tagged {
    pub value: i64,
    pub formula: &'static str,
}

impl Tagged {
    fn new(value: i64, formula: &'static str) -> Tagged {
        Tagged { value, formula }
    }
}

/// The short-orbit form of Riemann–Hurwitz:
/// `2g - 2 ≥ |S|(2ḡ - 2) + Σ (|S| - ℓ_i)`, with equality for tame covers.
#[derive(Clone, Debug, Serialize)]
pub struct ShortOrbitBound {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
    pub equality: bool,
    /// Every stabilizer has order prime to `p`.
    pub tame: bool,
}

impl ShortOrbitBound {
    fn new(genus: i64, order: u64, base_genus: i64, short: &[u64], tame: bool) -> ShortOrbitBound {
        let lhs = 2 * genus - 2;
        let rhs = order as i64 * (2 * base_genus - 2) + short.iter().map(|&l| order as i64 - l as i64).sum::<i64>();
        ShortOrbitBound {
            lhs,
            rhs,
            holds: lhs >= rhs,
            equality: lhs == rhs,
            tame,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub p: u64,
    pub field: Option<FieldSpec>,
    pub cover: Option<String>,
    pub reduced: Option<String>,
    pub group_order: u64,
    pub genus: Tagged,
    pub base_genus: Tagged,
    pub p_rank: Option<Tagged>,
    pub base_p_rank: Tagged,
    pub ramified: Vec<RamificationDatum>,
    /// Sizes of the short orbits over the algebraic closure.
    pub short_orbits: Vec<u64>,
    /// Degree of the different, `Σ_P deg(P) Σ_i (|S_P^(i)| - 1)`.
    pub different_degree: u64,
    pub short_orbit_bound: ShortOrbitBound,
}

impl CoverReport {
    pub fn is_ordinary(&self) -> bool {
        self.p_rank.is_some_and(|g| g.value == self.genus.value)
    }

    /// `0 ≤ γ ≤ g` when the p-rank is known.
    pub fn rank_within_genus(&self) -> bool {
        self.p_rank
            .map_or(true, |r| 0 <= r.value && r.value <= self.genus.value)
    }
}

fn ramified_places(cover: &ASCover) -> Result<Vec<RamificationDatum>, AsError> {
    cover
        .rhs
        .pole_divisor()?
        .into_iter()
        .map(|(pl, _)| ramification_filtration(cover, &pl))
        .collect()
}

/// Genus from `2g - 2 = p(2·0 - 2) + Σ_P deg(P) Σ_i (|S_P^(i)| - 1)`.
pub fn riemann_hurwitz(cover: &ASCover) -> Result<CoverReport, AsError> {
    let p = cover.p();
    if cover.rhs.is_zero() {
        return Err(AsError::ReducibleCover);
    }
    if cover.rhs.is_constant() {
        return Err(AsError::ConstantExtension);
    }
    let ramified = ramified_places(cover)?;
    let different_degree: u64 = ramified
        .iter()
        .map(|r| r.place_degree as u64 * r.different_exponent)
        .sum();
    let genus = (different_degree as i64 - 2 * p as i64 + 2) / 2;
    let short_orbits: Vec<u64> = ramified
        .iter()
        .flat_map(|r| std::iter::repeat(1).take(r.place_degree))
        .collect();
    Ok(CoverReport {
        p,
        field: Some(cover.field().spec().clone()),
        cover: Some(cover.rhs.render("x")),
        reduced: Some(cover.rhs.render("x")),
        group_order: p,
        genus: Tagged::new(genus, "rh"),
        base_genus: Tagged::new(0, "given"),
        p_rank: None,
        base_p_rank: Tagged::new(0, "given"),
        short_orbit_bound: ShortOrbitBound::new(genus, p, 0, &short_orbits, false),
        ramified,
        short_orbits,
        different_degree,
    })
}

/// `γ - 1 = |S|(γ̄ - 1) + Σ (|S| - ℓ_i)` for a p-group `S`.
pub fn deuring_shafarevich_abstract(
    p: u64,
    group_order: u64,
    base_p_rank: i64,
    short_orbits: &[u64],
) -> Result<i64, AsError> {
    let mut n = group_order;
    while n > 1 && n % p == 0 {
        n /= p;
    }
    if n != 1 || group_order == 1 {
        return Err(AsError::NotPGroup(group_order));
    }
    let s = group_order as i64;
    Ok(1 + s * (base_p_rank - 1) + short_orbits.iter().map(|&l| s - l as i64).sum::<i64>())
}

/// Genus by Riemann–Hurwitz and p-rank by Deuring–Shafarevich; each
/// totally ramified geometric point is a short orbit of size 1.
pub fn deuring_shafarevich(cover: &ASCover) -> Result<CoverReport, AsError> {
    let mut r = riemann_hurwitz(cover)?;
    let gamma = deuring_shafarevich_abstract(r.p, r.group_order, r.base_p_rank.value, &r.short_orbits)?;
    r.p_rank = Some(Tagged::new(gamma, "ds"));
    Ok(r)
}

/// Reduces, then computes genus and p-rank.
pub fn analyze(f: &RationalFunction) -> Result<CoverReport, AsError> {
    let red = reduce_standard_form(f)?;
    let mut r = deuring_shafarevich(&ASCover::new(red.reduced))?;
    r.cover = Some(f.render("x"));
    Ok(r)
}

/// Genus and p-rank of `(x^p - x)(y^p - y) = c`: genus from the plane
/// model of degree `2p` with two ordinary p-fold points, p-rank from
/// Deuring–Shafarevich for the translation group `C_p x C_p` over the
/// rational quotient with two short orbits of size `p`.
pub fn composite_report(p: u64) -> Result<CoverReport, AsError> {
    let field = crate::gf::make_field(p, 1)?;
    let d = 2 * p as i64;
    let pi = p as i64;
    let genus = (d - 1) * (d - 2) / 2 - 2 * (pi * (pi - 1) / 2);
    let order = p * p;
    let short = vec![p, p];
    let gamma = deuring_shafarevich_abstract(p, order, 0, &short)?;
    Ok(CoverReport {
        p,
        field: Some(field.spec().clone()),
        cover: Some(format!("(x^{p} - x)(y^{p} - y) = c")),
        reduced: None,
        group_order: order,
        genus: Tagged::new(genus, "plucker"),
        base_genus: Tagged::new(0, "given"),
        p_rank: Some(Tagged::new(gamma, "ds")),
        base_p_rank: Tagged::new(0, "given"),
        ramified: Vec::new(),
        short_orbit_bound: ShortOrbitBound::new(genus, order, 0, &short, false),
        short_orbits: short,
        different_degree: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::poly::parse_rational;

    fn rf(p: u64, s: &str) -> RationalFunction {
        parse_rational(s, &make_field(p, 1).unwrap(), 'x').unwrap()
    }

    #[test]
    fn reduction_examples() {
        for p in [3u64, 5, 7] {
            let f = rf(p, &format!("1/x^{p}"));
            let red = reduce_standard_form(&f).unwrap();
            assert_eq!(red.reduced, rf(p, "1/x"));
            assert_eq!(&f - &red.reduced, artin_schreier_image(&red.correction));
            let g = rf(p, &format!("x^{p}"));
            assert_eq!(reduce_standard_form(&g).unwrap().reduced, rf(p, "x"));
            let h = rf(p, "2x + 1/x");
            assert_eq!(reduce_standard_form(&h).unwrap().reduced, h);
        }
    }

    #[test]
    fn reduction_at_higher_degree_place() {
        // Pole of order 3 at the degree-2 place x^2 + 1 over F_3.
        let f = rf(3, "(x + 2)/(x^2 + 1)^3 + x^9");
        let red = reduce_standard_form(&f).unwrap();
        assert!(ASCover::new(red.reduced.clone()).is_reduced().unwrap());
        assert_eq!(&f - &red.reduced, artin_schreier_image(&red.correction));
    }

    #[test]
    fn split_and_constant() {
        assert_eq!(reduce_standard_form(&rf(3, "x^3 - x")).unwrap_err(), AsError::ReducibleCover);
        assert_eq!(reduce_standard_form(&rf(3, "1")).unwrap_err(), AsError::ConstantExtension);
    }

    #[test]
    fn genus_examples() {
        let g = |p, s: &str| analyze(&rf(p, s)).unwrap();
        let r = g(3, "x + 1/x");
        assert_eq!((r.genus.value, r.p_rank.unwrap().value), (2, 2));
        assert_eq!(g(5, "2x + 1/x").genus.value, 4);
        assert_eq!(g(7, "1/x").genus.value, 0);
        assert_eq!(g(5, "1/x").p_rank.unwrap().value, 0);
        // Pole of order 2 at a degree-2 place over F_3: 2g - 2 = -6 + 2·3·2.
        assert_eq!(g(3, "1/(x^2 + 1)^2").genus.value, 4);
    }

    #[test]
    fn filtration_and_not_reduced() {
        let c = ASCover::new(rf(5, "1/x"));
        let d = ramification_filtration(&c, &Place::at(c.field(), 0)).unwrap();
        assert_eq!(d.filtration_orders, vec![5, 5, 1]);
        let u = ramification_filtration(&c, &Place::at(c.field(), 1)).unwrap();
        assert_eq!(u.jump, None);
        let bad = ASCover::new(rf(5, "1/x^5"));
        assert!(matches!(
            ramification_filtration(&bad, &Place::Infinite),
            Err(AsError::NotReduced { .. })
        ));
    }

    #[test]
    fn abstract_ds() {
        assert_eq!(deuring_shafarevich_abstract(3, 3, 2, &[]).unwrap(), 4);
        assert_eq!(deuring_shafarevich_abstract(3, 6, 2, &[]), Err(AsError::NotPGroup(6)));
    }

    #[test]
    fn composite() {
        for (p, g) in [(3u64, 4i64), (5, 16), (11, 100)] {
            let r = composite_report(p).unwrap();
            assert_eq!(r.genus.value, g);
            assert_eq!(r.p_rank.unwrap().value, g);
            assert!(r.short_orbit_bound.holds && !r.short_orbit_bound.equality);
        }
    }
}
