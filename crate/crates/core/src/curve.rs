//! The Artin–Mumford curve `(x^p - x)(y^p - y) = c`, the curve
//! `y^p - y = a x + 1/x`, their points, and the action of `H`.
//!
//! The plane model of the Artin–Mumford curve has two ordinary p-fold
//! points at infinity, `O1 = (1:0:0)` and `O2 = (0:1:0)`. The places over
//! them are labeled by tangent lines: `y = t` at `O1` and `x = t` at `O2`.
//! A group element acts on these labels through its action on lines.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{make_field, solve_artin_schreier, Field, FieldElement, GfError};
use crate::grp::{closure, AmGroup, GroupElement, GrpError};
use crate::poly::{Poly2, RationalFunction};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve parameter must be nonzero")]
    ZeroParameter,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Group(#[from] GrpError),
    #[error("work {needed} exceeds budget {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("group element over p = {0} applied to curve over p = {1}")]
    PrimeMismatch(u64, u64),
}

/// `(x^p - x)(y^p - y) = c` over `F_p`, `c ≠ 0`.
#[derive(Clone, Debug)]
pub struct AMCurve {
    field: Field,
    c: u64,
    poly: Poly2,
}

impl AMCurve {
    pub fn new(p: u64, c: i64) -> Result<AMCurve, CurveError> {
        let field = make_field(p, 1)?;
        let c = field.reduce_int(c);
        if c == 0 {
            return Err(CurveError::ZeroParameter);
        }
        let v = ["x", "y"];
        let poly = &(&Poly2::artin_schreier(&field, v, 0) * &Poly2::artin_schreier(&field, v, 1))
            - &Poly2::constant(&field, v, c);
        Ok(AMCurve { field, c, poly })
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `(x^p - x)(y^p - y) - c` in variables `x, y`.
    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn contains(&self, x: &FieldElement, y: &FieldElement) -> bool {
        self.poly.eval(x, y).is_zero()
    }

    /// The `2p` places over the singular points at infinity.
    pub fn branch_places(&self) -> Vec<CurvePoint> {
        let p = self.p();
        [Center::O1, Center::O2]
            .into_iter()
            .flat_map(|center| (0..p).map(move |tangent| CurvePoint::Branch { center, tangent }))
            .collect()
    }
}

/// `y^p - y = a x + 1/x` over `F_p`, `a ≠ 0`.
#[derive(Clone, Debug)]
pub struct VGVCurve {
    field: Field,
    a: u64,
}

impl VGVCurve {
    pub fn new(p: u64, a: i64) -> Result<VGVCurve, CurveError> {
        let field = make_field(p, 1)?;
        let a = field.reduce_int(a);
        if a == 0 {
            return Err(CurveError::ZeroParameter);
        }
        Ok(VGVCurve { field, a })
    }

    pub fn p(&self) -> u64 {
        self.field.characteristic()
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `a x + 1/x`.
    pub fn rhs(&self) -> RationalFunction {
        let x = RationalFunction::x(&self.field);
        &x.scale(self.a) + &x.inverse().expect("x is nonzero")
    }
}

/// Minimal polynomial of `x` over `F_p(y)`: `a x^2 - (y^p - y) x + 1`.
pub fn hyperelliptic_witness(curve: &VGVCurve) -> Poly2 {
    let f = curve.field();
    let v = ["x", "y"];
    let x = Poly2::gens(f, v).0;
    let ay = Poly2::artin_schreier(f, v, 1);
    &(&x.pow(2).scale(curve.a) - &(&ay * &x)) + &Poly2::constant(f, v, 1)
}

/// Checks that `w` has degree 2 in `x` and equals
/// `num(f)(x) - x (y^p - y)` for `f = a x + 1/x = num(f) / x`, i.e. it is
/// the curve relation with the denominator cleared.
pub fn verify_hyperelliptic_witness(curve: &VGVCurve, w: &Poly2) -> bool {
    let f = curve.field();
    let v = ["x", "y"];
    let rhs = curve.rhs();
    let den = rhs.denominator();
    if den.degree() != Some(1) || den.coeff(0) != 0 {
        return false;
    }
    let x = Poly2::gens(f, v).0;
    let num = Poly2::from_poly1(rhs.numerator(), v, 0);
    let cleared = &num - &(&x * &Poly2::artin_schreier(f, v, 1));
    w.degree_in(0) == Some(2) && *w == cleared
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Center {
    O1,
    O2,
}

/// A point of the nonsingular model: an affine point, or a place over
/// `O1`/`O2` labeled by its tangent line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Affine { x: FieldElement, y: FieldElement },
    Branch { center: Center, tangent: u64 },
}

impl CurvePoint {
    pub fn affine(curve: &AMCurve, x: FieldElement, y: FieldElement) -> Result<CurvePoint, CurveError> {
        if x.field() != y.field() || !curve.contains(&x, &y) {
            return Err(CurveError::NotOnCurve(format!("({x}, {y})")));
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, CurvePoint::Branch { .. })
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
            CurvePoint::Branch { center: Center::O1, tangent } => write!(f, "O1[y={tangent}]"),
            CurvePoint::Branch { center: Center::O2, tangent } => write!(f, "O2[x={tangent}]"),
        }
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        match self {
            CurvePoint::Affine { x, y } => {
                m.serialize_entry("kind", "affine")?;
                m.serialize_entry("x", x)?;
                m.serialize_entry("y", y)?;
            }
            CurvePoint::Branch { center, tangent } => {
                m.serialize_entry("kind", "branch")?;
                m.serialize_entry("center", center)?;
                m.serialize_entry("tangent", tangent)?;
            }
        }
        m.end()
    }
}

/// Affine points over `F_{p^k}` followed by the branch places.
///
/// For each `x` with `η = x^p - x ≠ 0` the fiber is the solution set of
/// `y^p - y = c/η`, so the work is `p^k` field iterations.
pub fn enumerate_points(curve: &AMCurve, k: u32, budget: u64) -> Result<Vec<CurvePoint>, CurveError> {
    let mut pts = affine_points(curve, k, budget)?;
    pts.extend(curve.branch_places());
    Ok(pts)
}

pub fn affine_points(curve: &AMCurve, k: u32, budget: u64) -> Result<Vec<CurvePoint>, CurveError> {
    let p = curve.p();
    let needed = p.checked_pow(k).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(CurveError::Budget { needed, budget });
    }
    let ext = make_field(p, k)?;
    let c = ext.element(curve.c);
    let fibers: Vec<Vec<CurvePoint>> = (0..ext.order())
        .into_par_iter()
        .map(|xv| {
            let x = ext.element(xv);
            let eta = &x.pow(p) - &x;
            if eta.is_zero() {
                return Vec::new();
            }
            let rhs = &c / &eta;
            match solve_artin_schreier(&rhs) {
                None => Vec::new(),
                Some(y0) => (0..p)
                    .map(|t| CurvePoint::Affine {
                        x: x.clone(),
                        y: &y0 + &ext.element(t),
                    })
                    .collect(),
            }
        })
        .collect();
    Ok(fibers.into_iter().flatten().collect())
}

/// Image of `pt` under `g`.
///
/// Affine points map by `v -> L v + t`. A branch place is the tangent line
/// it is labeled by; the image line is horizontal (`y = t'`, a place over
/// `O1`) or vertical (`x = t'`, over `O2`) because `L` is monomial.
pub fn apply_automorphism(g: &GroupElement, pt: &CurvePoint, curve: &AMCurve) -> Result<CurvePoint, CurveError> {
    if g.p() != curve.p() {
        return Err(CurveError::PrimeMismatch(g.p(), curve.p()));
    }
    let l = g.linear();
    let p = curve.p();
    match pt {
        CurvePoint::Affine { x, y } => {
            let f = x.field();
            let e = |v: u64| f.element(v);
            let nx = &(&(&e(l.m[0][0]) * x) + &(&e(l.m[0][1]) * y)) + &e(g.a);
            let ny = &(&(&e(l.m[1][0]) * x) + &(&e(l.m[1][1]) * y)) + &e(g.b);
            CurvePoint::affine(curve, nx, ny)
        }
        CurvePoint::Branch { center, tangent } => {
            // Base point and direction of the tangent line.
            let (base, dir) = match center {
                Center::O1 => ([0, *tangent], [1, 0]),
                Center::O2 => ([*tangent, 0], [0, 1]),
            };
            let q = g.act(base);
            let d = l.apply(dir);
            Ok(if d[1] == 0 {
                CurvePoint::Branch { center: Center::O1, tangent: q[1] % p }
            } else {
                CurvePoint::Branch { center: Center::O2, tangent: q[0] % p }
            })
        }
    }
}

/// Coordinate substitution `(x, y) -> (L (x, y) + t)` as polynomials.
pub fn substitution_of(g: &GroupElement, field: &Field, vars: [&str; 2]) -> (Poly2, Poly2) {
    let l = g.linear();
    let (x, y) = Poly2::gens(field, vars);
    let t = g.translation();
    let row = |r: usize| {
        &(&x.scale(l.m[r][0]) + &y.scale(l.m[r][1])) + &Poly2::constant(field, vars, t[r])
    };
    (row(0), row(1))
}

/// Whether substituting the coordinate action of `g` into the curve
/// polynomial returns the same polynomial.
pub fn verify_invariance(g: &GroupElement, curve: &AMCurve) -> bool {
    if g.p() != curve.p() {
        return false;
    }
    let (gx, gy) = substitution_of(g, curve.field(), ["x", "y"]);
    verify_substitution(curve, &gx, &gy)
}

/// Whether `(x, y) -> (gx, gy)` maps the defining polynomial to itself.
pub fn verify_substitution(curve: &AMCurve, gx: &Poly2, gy: &Poly2) -> bool {
    curve
        .poly()
        .substitute2(gx, gy)
        .map(|r| r == *curve.poly())
        .unwrap_or(false)
}

/// A subgroup of `H` given by generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub name: String,
    pub generators: Vec<GroupElement>,
}

impl Subgroup {
    /// The full translation group `C_p x C_p`.
    pub fn translations(h: &AmGroup) -> Subgroup {
        Subgroup {
            name: "C_p x C_p".into(),
            generators: vec![h.tau(1, 0), h.tau(0, 1)],
        }
    }

    pub fn cyclic(g: GroupElement) -> Subgroup {
        Subgroup {
            name: format!("<{g}>"),
            generators: vec![g],
        }
    }

    pub fn whole(h: &AmGroup) -> Subgroup {
        Subgroup {
            name: "H".into(),
            generators: h.generators(),
        }
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        closure(&self.generators)
    }
}

/// A short orbit with the stabilizer of its first point.
#[derive(Clone, Debug, Serialize)]
pub struct ShortOrbit {
    pub size: usize,
    pub points: Vec<CurvePoint>,
    pub stabilizer: Vec<GroupElement>,
    pub stabilizer_description: String,
    /// All points of the orbit have the same stabilizer.
    pub common_stabilizer: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub group: String,
    pub group_order: usize,
    pub affine_degree: Option<u32>,
    pub points_enumerated: usize,
    /// Sizes of all orbits, ascending.
    pub orbit_sizes: Vec<usize>,
    pub short_orbits: Vec<ShortOrbit>,
    /// `|orbit(P)| · |stab(P)| = |S|` held for every enumerated point.
    pub orbit_stabilizer_ok: bool,
}

fn describe_subgroup(elems: &[GroupElement]) -> String {
    if elems.len() == 1 {
        return "1".into();
    }
    let mut sorted: Vec<&GroupElement> = elems.iter().collect();
    sorted.sort_by_key(|g| (g.s, g.i, g.a, g.b));
    match sorted.iter().find(|g| g.order() as usize == elems.len()) {
        Some(g) => format!("<{g}>"),
        None => format!("non-cyclic subgroup of order {}", elems.len()),
    }
}

/// Orbits of `S` on the branch places plus, when `affine_degree` is given,
/// the affine points over that extension.
pub fn short_orbits(
    curve: &AMCurve,
    s: &Subgroup,
    affine_degree: Option<u32>,
    budget: u64,
) -> Result<OrbitReport, CurveError> {
    let elems = s.elements();
    let mut pts = curve.branch_places();
    if let Some(k) = affine_degree {
        let aff = affine_points(curve, k, budget)?;
        let needed = (aff.len() as u64).saturating_mul(elems.len() as u64);
        if needed > budget {
            return Err(CurveError::Budget { needed, budget });
        }
        pts.extend(aff);
    }
    let order = elems.len();
    let mut assigned: HashSet<CurvePoint> = HashSet::new();
    let mut orbit_sizes = Vec::new();
    let mut shorts = Vec::new();
    let mut orbit_stabilizer_ok = true;
    let mut stab_cache: HashMap<CurvePoint, Vec<GroupElement>> = HashMap::new();
    let stab_of = |pt: &CurvePoint| -> Result<Vec<GroupElement>, CurveError> {
        let mut st = Vec::new();
        for g in &elems {
            if apply_automorphism(g, pt, curve)? == *pt {
                st.push(*g);
            }
        }
        Ok(st)
    };
    for pt in &pts {
        let stab = stab_of(pt)?;
        let mut orbit: Vec<CurvePoint> = Vec::new();
        let mut seen = HashSet::new();
        for g in &elems {
            let q = apply_automorphism(g, pt, curve)?;
            if seen.insert(q.clone()) {
                orbit.push(q);
            }
        }
        orbit_stabilizer_ok &= orbit.len() * stab.len() == order;
        stab_cache.insert(pt.clone(), stab);
        if assigned.contains(pt) {
            continue;
        }
        assigned.extend(orbit.iter().cloned());
        orbit_sizes.push(orbit.len());
        if orbit.len() < order {
            shorts.push(orbit);
        }
    }
    let mut short_orbits = Vec::new();
    for orbit in shorts {
        let stab = stab_cache[&orbit[0]].clone();
        let key: HashSet<GroupElement> = stab.iter().copied().collect();
        let common = orbit
            .iter()
            .all(|q| stab_cache[q].iter().copied().collect::<HashSet<_>>() == key);
        short_orbits.push(ShortOrbit {
            size: orbit.len(),
            stabilizer_description: describe_subgroup(&stab),
            points: orbit,
            stabilizer: stab,
            common_stabilizer: common,
        });
    }
    orbit_sizes.sort_unstable();
    Ok(OrbitReport {
        group: s.name.clone(),
        group_order: order,
        affine_degree,
        points_enumerated: pts.len(),
        orbit_sizes,
        short_orbits,
        orbit_stabilizer_ok,
    })
}

/// Random substitutions `(x, y) -> (gx, gy)` of degree at most 2 that are
/// not coordinate maps of elements of `H`: each has a quadratic term or a
/// linear part that is not monomial.
pub fn random_non_automorphisms(p: u64, n: usize, seed: u64) -> Result<Vec<(Poly2, Poly2)>, CurveError> {
    use rand::{Rng, SeedableRng};
    let field = make_field(p, 1)?;
    let v = ["x", "y"];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let monos: [(u32, u32); 6] = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut gen = || Poly2::from_terms(&field, v, monos.iter().map(|&m| (m, rng.gen_range(0..p as i64))));
        let (gx, gy) = (gen(), gen());
        let quadratic = gx.total_degree().unwrap_or(0) > 1 || gy.total_degree().unwrap_or(0) > 1;
        let l = [[gx.coeff((1, 0)), gx.coeff((0, 1))], [gy.coeff((1, 0)), gy.coeff((0, 1))]];
        let det = field.sub_raw(field.mul_raw(l[0][0], l[1][1]), field.mul_raw(l[0][1], l[1][0]));
        let diagonal = l[0][1] == 0 && l[1][0] == 0;
        let anti = l[0][0] == 0 && l[1][1] == 0;
        if quadratic || det == 0 || !(diagonal || anti) {
            out.push((gx, gy));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_BUDGET;

    #[test]
    fn rational_points() {
        for (p, total) in [(3, 6), (5, 10), (7, 14)] {
            let m = AMCurve::new(p, 1).unwrap();
            assert_eq!(enumerate_points(&m, 1, DEFAULT_BUDGET).unwrap().len(), total);
        }
    }

    #[test]
    fn f9_points_match_brute_force() {
        let m = AMCurve::new(3, 1).unwrap();
        let f9 = make_field(3, 2).unwrap();
        let brute = f9
            .elements()
            .flat_map(|x| f9.elements().map(move |y| (x.clone(), y)))
            .filter(|(x, y)| m.contains(x, y))
            .count();
        let pts = enumerate_points(&m, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(pts.len(), 6 + brute);
    }

    #[test]
    fn branch_action_of_generators() {
        let p = 5;
        let m = AMCurve::new(p, 1).unwrap();
        let h = AmGroup::new(p).unwrap();
        let o1 = |t| CurvePoint::Branch { center: Center::O1, tangent: t };
        let o2 = |t| CurvePoint::Branch { center: Center::O2, tangent: t };
        let ap = |g: &GroupElement, q| apply_automorphism(g, &q, &m).unwrap();
        assert_eq!(ap(&h.tau(1, 0), o1(3)), o1(3));
        assert_eq!(ap(&h.tau(0, 2), o1(3)), o1(0));
        assert_eq!(ap(&h.tau(2, 0), o2(3)), o2(0));
        assert_eq!(ap(&h.v(), o1(3)), o2(3));
        // θ_2: O1 label t -> 2^{-1} t = 3t, O2 label t -> 2t.
        let th = h.theta(2).unwrap();
        assert_eq!(ap(&th, o1(1)), o1(3));
        assert_eq!(ap(&th, o2(1)), o2(2));
    }

    #[test]
    fn invariance_and_a_non_automorphism() {
        let m = AMCurve::new(3, 1).unwrap();
        let h = AmGroup::new(3).unwrap();
        assert!(h.elements().all(|g| verify_invariance(&g, &m)));
        let (x, y) = Poly2::gens(m.field(), ["x", "y"]);
        let one = Poly2::constant(m.field(), ["x", "y"], 1);
        assert!(!verify_substitution(&m, &(&x + &one), &(&y + &x)));
    }

    #[test]
    fn translation_short_orbits_p3() {
        let m = AMCurve::new(3, 1).unwrap();
        let h = AmGroup::new(3).unwrap();
        let r = short_orbits(&m, &Subgroup::translations(&h), Some(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.short_orbits.len(), 2);
        assert!(r.short_orbits.iter().all(|o| o.size == 3 && o.common_stabilizer));
        assert!(r.orbit_stabilizer_ok);
        assert_eq!(r.short_orbits[0].stabilizer_description, "<tau(1,0)*U^0*V^0>");
        assert_eq!(r.short_orbits[1].stabilizer_description, "<tau(0,1)*U^0*V^0>");
    }

    #[test]
    fn witness() {
        let c = VGVCurve::new(5, 2).unwrap();
        let w = hyperelliptic_witness(&c);
        assert_eq!(w.render(), "4*x*y^5 + 2*x^2 + 1*x*y + 1");
        assert!(verify_hyperelliptic_witness(&c, &w));
        assert!(!verify_hyperelliptic_witness(&c, &w.scale(2)));
    }

    #[test]
    fn point_json() {
        let q = CurvePoint::Branch { center: Center::O2, tangent: 4 };
        assert_eq!(
            serde_json::to_string(&q).unwrap(),
            r#"{"kind":"branch","center":"O2","tangent":4}"#
        );
    }
}
