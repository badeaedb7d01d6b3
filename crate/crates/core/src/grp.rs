//! The group `H = (C_p x C_p) ⋊ D_{p-1}` acting on the affine plane over
//! `F_p`, and 2x2 matrix arithmetic in `GL(2, p)`.
//!
//! Elements are kept in the word form `tau_{a,b} · U^i · V^s` where
//! `tau_{a,b}` is the translation `(x, y) -> (x + a, y + b)`,
//! `U = diag(λ, λ^{-1})` for the least primitive root `λ` and
//! `V = antidiag(1, 1)` swaps the coordinates. As a point map an element
//! sends `v` to `L v + t`, with `L = U^i V^s` and `t = (a, b)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::{is_prime, make_field, primitive_element, GfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrpError {
    #[error("elements over different primes: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("matrix pair is not a dihedral pair of order 2(p-1): {0}")]
    NotDihedral(String),
    #[error("singular matrix")]
    Singular,
}

fn check_prime(p: u64) -> Result<(), GrpError> {
    if p == 2 {
        return Err(GfError::EvenCharacteristic.into());
    }
    if !is_prime(p) {
        return Err(GfError::NotPrime(p).into());
    }
    Ok(())
}

fn mulm(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(p: u64, mut a: u64, mut e: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(p, r, a);
        }
        a = mulm(p, a, a);
        e >>= 1;
    }
    r
}

fn invm(p: u64, a: u64) -> u64 {
    powm(p, a, p - 2)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The least primitive root modulo `p`.
pub fn primitive_root(p: u64) -> Result<u64, GrpError> {
    check_prime(p)?;
    Ok(primitive_element(&make_field(p, 1)?)?.value())
}

/// 2x2 matrix over `F_p`, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Mat2 {
    pub p: u64,
    pub m: [[u64; 2]; 2],
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Mat2 {
    pub fn new(p: u64, m: [[i64; 2]; 2]) -> Mat2 {
        let r = |v: i64| v.rem_euclid(p as i64) as u64;
        Mat2 {
            p,
            m: [[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]],
        }
    }

    pub fn identity(p: u64) -> Mat2 {
        Mat2::diag(p, 1, 1)
    }

    pub fn diag(p: u64, a: u64, d: u64) -> Mat2 {
        Mat2 {
            p,
            m: [[a % p, 0], [0, d % p]],
        }
    }

    pub fn antidiag(p: u64, b: u64, c: u64) -> Mat2 {
        Mat2 {
            p,
            m: [[0, b % p], [c % p, 0]],
        }
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        let [[a, b], [c, d]] = self.m;
        (mulm(p, a, d) + p - mulm(p, b, c)) % p
    }

    pub fn trace(&self) -> u64 {
        (self.m[0][0] + self.m[1][1]) % self.p
    }

    pub fn is_scalar(&self) -> bool {
        self.m[0][1] == 0 && self.m[1][0] == 0 && self.m[0][0] == self.m[1][1]
    }

    pub fn scale(&self, c: u64) -> Mat2 {
        let p = self.p;
        let mut m = self.m;
        for row in &mut m {
            for e in row.iter_mut() {
                *e = mulm(p, *e, c);
            }
        }
        Mat2 { p, m }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        assert_eq!(self.p, o.p, "matrices over different primes");
        let p = self.p;
        let mut m = [[0u64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (mulm(p, self.m[i][0], o.m[0][j]) + mulm(p, self.m[i][1], o.m[1][j])) % p;
            }
        }
        Mat2 { p, m }
    }

    pub fn inverse(&self) -> Result<Mat2, GrpError> {
        let d = self.det();
        if d == 0 {
            return Err(GrpError::Singular);
        }
        let p = self.p;
        let di = invm(p, d);
        let [[a, b], [c, e]] = self.m;
        Ok(Mat2 {
            p,
            m: [
                [mulm(p, e, di), mulm(p, (p - b) % p, di)],
                [mulm(p, (p - c) % p, di), mulm(p, a, di)],
            ],
        })
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut r = Mat2::identity(self.p);
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn apply(&self, v: [u64; 2]) -> [u64; 2] {
        let p = self.p;
        [
            (mulm(p, self.m[0][0], v[0]) + mulm(p, self.m[0][1], v[1])) % p,
            (mulm(p, self.m[1][0], v[0]) + mulm(p, self.m[1][1], v[1])) % p,
        ]
    }

    /// Least `n ≥ 1` with `self^n = I`.
    pub fn order(&self) -> u64 {
        let id = Mat2::identity(self.p);
        let mut x = *self;
        let mut n = 1;
        while x != id {
            x = x.mul(self);
            n += 1;
        }
        n
    }

    /// All of `GL(2, p)` in lexicographic order of entries.
    pub fn general_linear(p: u64) -> Vec<Mat2> {
        let mut out = Vec::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let m = Mat2 { p, m: [[a, b], [c, d]] };
                        if m.det() != 0 {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Closure of a set of invertible matrices under multiplication.
pub fn matrix_closure(gens: &[Mat2], limit: usize) -> Option<Vec<Mat2>> {
    let p = gens.first()?.p;
    let id = Mat2::identity(p);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                if seen.len() > limit {
                    return None;
                }
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    Some(out)
}

/// Element `tau_{a,b} · U^i · V^s` of `H`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    p: u64,
    lambda: u64,
    pub a: u64,
    pub b: u64,
    pub i: u64,
    pub s: u8,
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GroupElement", 4)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("s", &self.s)?;
        st.end()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau({},{})*U^{}*V^{}", self.a, self.b, self.i, self.s)
    }
}

impl GroupElement {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0 && self.i == 0 && self.s == 0
    }

    pub fn is_translation(&self) -> bool {
        self.i == 0 && self.s == 0
    }

    /// The linear part `U^i V^s` as a matrix.
    pub fn linear(&self) -> Mat2 {
        let p = self.p;
        let d = powm(p, self.lambda, self.i);
        let e = invm(p, d);
        if self.s == 0 {
            Mat2::diag(p, d, e)
        } else {
            Mat2::antidiag(p, d, e)
        }
    }

    pub fn translation(&self) -> [u64; 2] {
        [self.a, self.b]
    }

    /// `self ∘ h`: apply `h` first.
    pub fn compose(&self, h: &GroupElement) -> Result<GroupElement, GrpError> {
        if self.p != h.p {
            return Err(GrpError::PrimeMismatch(self.p, h.p));
        }
        let p = self.p;
        let n = p - 1;
        let lt = self.linear().apply([h.a, h.b]);
        let i = if self.s == 0 {
            (self.i + h.i) % n
        } else {
            (self.i + n - h.i) % n
        };
        Ok(GroupElement {
            p,
            lambda: self.lambda,
            a: (self.a + lt[0]) % p,
            b: (self.b + lt[1]) % p,
            i,
            s: self.s ^ h.s,
        })
    }

    /// Composition that panics on mismatched primes; for internal use on
    /// elements of one group.
    pub fn then(&self, h: &GroupElement) -> GroupElement {
        self.compose(h).expect("elements of one group")
    }

    pub fn inverse(&self) -> GroupElement {
        let p = self.p;
        let n = p - 1;
        let i = if self.s == 0 { (n - self.i) % n } else { self.i };
        let mut g = GroupElement {
            p,
            lambda: self.lambda,
            a: 0,
            b: 0,
            i,
            s: self.s,
        };
        let t = g.linear().apply([(p - self.a) % p, (p - self.b) % p]);
        g.a = t[0];
        g.b = t[1];
        g
    }

    pub fn pow(&self, e: u64) -> GroupElement {
        let mut r = GroupElement { a: 0, b: 0, i: 0, s: 0, ..*self };
        for _ in 0..e {
            r = r.then(self);
        }
        r
    }

    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut n = 1;
        while !x.is_identity() {
            x = x.then(self);
            n += 1;
        }
        n
    }

    /// Image of the point `(x, y)` of `F_p^2`.
    pub fn act(&self, v: [u64; 2]) -> [u64; 2] {
        let w = self.linear().apply(v);
        [(w[0] + self.a) % self.p, (w[1] + self.b) % self.p]
    }
}

/// The group `H` for a fixed odd prime `p`.
#[derive(Clone, Debug)]
pub struct AmGroup {
    p: u64,
    lambda: u64,
}

impl AmGroup {
    pub fn new(p: u64) -> Result<AmGroup, GrpError> {
        let lambda = primitive_root(p)?;
        Ok(AmGroup { p, lambda })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// `2 p^2 (p - 1)`.
    pub fn order(&self) -> u64 {
        2 * self.p * self.p * (self.p - 1)
    }

    pub fn element(&self, a: i64, b: i64, i: u64, s: u8) -> GroupElement {
        let p = self.p as i64;
        GroupElement {
            p: self.p,
            lambda: self.lambda,
            a: a.rem_euclid(p) as u64,
            b: b.rem_euclid(p) as u64,
            i: i % (self.p - 1),
            s: s & 1,
        }
    }

    pub fn identity(&self) -> GroupElement {
        self.element(0, 0, 0, 0)
    }

    pub fn tau(&self, a: i64, b: i64) -> GroupElement {
        self.element(a, b, 0, 0)
    }

    pub fn u(&self) -> GroupElement {
        self.element(0, 0, 1, 0)
    }

    pub fn v(&self) -> GroupElement {
        self.element(0, 0, 0, 1)
    }

    /// `W = U^{(p-1)/2}`, which acts as `-I`.
    pub fn w(&self) -> GroupElement {
        self.element(0, 0, (self.p - 1) / 2, 0)
    }

    /// `θ_d: (x, y) -> (d x, d^{-1} y)` for `d ∈ F_p^*`.
    pub fn theta(&self, d: u64) -> Option<GroupElement> {
        let d = d % self.p;
        if d == 0 {
            return None;
        }
        (0..self.p - 1)
            .find(|&i| powm(self.p, self.lambda, i) == d)
            .map(|i| self.element(0, 0, i, 0))
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        vec![self.tau(1, 0), self.tau(0, 1), self.u(), self.v()]
    }

    /// Every element, in `(s, i, a, b)` order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let p = self.p;
        (0..2u8).flat_map(move |s| {
            (0..p - 1).flat_map(move |i| {
                (0..p).flat_map(move |a| (0..p).map(move |b| self.element(a as i64, b as i64, i, s)))
            })
        })
    }

    /// Uniformly random element.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> GroupElement {
        self.element(
            rng.gen_range(0..self.p) as i64,
            rng.gen_range(0..self.p) as i64,
            rng.gen_range(0..self.p - 1),
            rng.gen_range(0..2),
        )
    }
}

/// Subgroup generated by `gens`, in breadth-first discovery order.
pub fn closure(gens: &[GroupElement]) -> Vec<GroupElement> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let id = GroupElement { a: 0, b: 0, i: 0, s: 0, ..*first };
    let mut seen: HashSet<GroupElement> = HashSet::from([id]);
    let mut out = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y) {
                out.push(y);
                queue.push_back(y);
            }
        }
    }
    out
}

fn set_of(v: impl IntoIterator<Item = GroupElement>) -> HashSet<GroupElement> {
    v.into_iter().collect()
}

/// One identity in a presentation report.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub status: CheckStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl From<bool> for CheckStatus {
    fn from(b: bool) -> Self {
        if b {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    pub p: u64,
    pub lambda: u64,
    pub group_order: u64,
    pub checks: Vec<IdentityCheck>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

/// Checks the defining relations of `H`, the commutation identities among
/// `tau_{1,1}`, `T_2 = {tau_{a,-a}}`, `V`, `W`, and the decomposition
/// `<tau_{1,1}, V, W> = D_p x <V>`.
pub fn verify_presentation(p: u64) -> Result<PresentationReport, GrpError> {
    let h = AmGroup::new(p)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, ok: bool| {
        checks.push(IdentityCheck {
            identity: name.to_string(),
            status: ok.into(),
        })
    };
    let id = h.identity();
    let (u, v, w) = (h.u(), h.v(), h.w());

    let all = closure(&h.generators());
    let group_order = all.len() as u64;
    check("|H| = 2p^2(p-1)", group_order == h.order());
    check(
        "canonical words are distinct and exhaust H",
        set_of(h.elements()).len() as u64 == h.order() && set_of(h.elements()) == set_of(all),
    );
    check("U^(p-1) = I", u.pow(p - 1) == id);
    check("U has order p-1", u.order() == p - 1);
    check("V^2 = I", v.then(&v) == id);
    check("VUV = U^-1", v.then(&u).then(&v) == u.inverse());
    check("W = U^((p-1)/2) acts as -I", w.linear() == Mat2::new(p, [[-1, 0], [0, -1]]));
    check(
        "translations form a normal subgroup C_p x C_p",
        h.elements().all(|g| {
            h.generators()[..2]
                .iter()
                .all(|t| g.then(t).then(&g.inverse()).is_translation())
        }),
    );

    let t11 = h.tau(1, 1);
    let t2: Vec<GroupElement> = (0..p as i64).map(|a| h.tau(a, -a)).collect();
    let coset = |left: &GroupElement, set: &[GroupElement], right: &GroupElement| {
        set_of(set.iter().map(|x| left.then(x).then(right)))
    };
    check(
        "tau_{1,1} T_2 = T_2 tau_{1,1}",
        coset(&t11, &t2, &id) == coset(&id, &t2, &t11),
    );
    check("tau_{1,1} V = V tau_{1,1}", t11.then(&v) == v.then(&t11));
    check("V T_2 = T_2 V", coset(&v, &t2, &id) == coset(&id, &t2, &v));
    check("W V = V W", w.then(&v) == v.then(&w));
    check(
        "W tau_{a,b} W = tau_{-a,-b}",
        h.elements()
            .filter(|g| g.is_translation())
            .all(|t| w.then(&t).then(&w) == h.tau(-(t.a as i64), -(t.b as i64))),
    );

    // <tau_{1,1}, W> is dihedral of order 2p, V centralizes it, and the two
    // factors meet trivially.
    let dp = closure(&[t11, w]);
    let big = closure(&[t11, v, w]);
    let dp_set = set_of(dp.iter().copied());
    check("|<tau_{1,1}, W>| = 2p", dp.len() as u64 == 2 * p);
    check(
        "tau_{1,1}^p = W^2 = 1 and W tau_{1,1} W = tau_{1,1}^-1",
        t11.pow(p) == id && w.then(&w) == id && w.then(&t11).then(&w) == t11.inverse(),
    );
    check(
        "V commutes with <tau_{1,1}, W>",
        dp.iter().all(|g| g.then(&v) == v.then(g)),
    );
    check("<tau_{1,1}, W> ∩ <V> = 1", !dp_set.contains(&v));
    check("|<tau_{1,1}, V, W>| = 4p", big.len() as u64 == 4 * p);
    check(
        "<tau_{1,1}, V, W> = <tau_{1,1}, W> x <V>",
        set_of(dp.iter().flat_map(|g| [*g, g.then(&v)])) == set_of(big),
    );
    Ok(PresentationReport {
        p,
        lambda: h.lambda,
        group_order,
        checks,
    })
}

/// Result of [`dihedral_normal_form`].
#[derive(Clone, Debug, Serialize)]
pub struct NormalForm {
    /// `C` with `C R C^{-1} = normal_u` and `C V' C^{-1} = normal_v`.
    pub conjugator: Mat2,
    pub normal_u: Mat2,
    pub normal_v: Mat2,
    /// The rotation `R` of order `p - 1` actually normalized.
    pub rotation: Mat2,
    /// The reflection `V'` actually normalized.
    pub reflection: Mat2,
    /// `Some(j)` when `R = U^j`; `None` when the rotation had to be chosen
    /// outside `<U>` (only possible for `p = 3`).
    pub rotation_exponent: Option<u64>,
    /// Whether `V` was replaced by `U^{(p-1)/2} V`.
    pub sign_twist: bool,
}

fn eigenvector(r: &Mat2, mu: u64) -> [u64; 2] {
    let p = r.p;
    let a = (r.m[0][0] + p - mu) % p;
    let b = r.m[0][1];
    let c = r.m[1][0];
    let d = (r.m[1][1] + p - mu) % p;
    let v = if a != 0 || b != 0 {
        [b, (p - a) % p]
    } else if c != 0 || d != 0 {
        [d, (p - c) % p]
    } else {
        [1, 0]
    };
    // First nonzero coordinate scaled to 1.
    let lead = if v[0] != 0 { v[0] } else { v[1] };
    let li = invm(p, lead);
    [mulm(p, v[0], li), mulm(p, v[1], li)]
}

fn columns(p: u64, e1: [u64; 2], e2: [u64; 2]) -> Mat2 {
    Mat2 {
        p,
        m: [[e1[0], e2[0]], [e1[1], e2[1]]],
    }
}

/// Conjugates a dihedral pair `(U, V)` of order `2(p-1)` in `GL(2, p)` to
/// `U_0 = diag(λ, λ^{-1})`, `V_0 = antidiag(1, 1)`.
///
/// The rotation normalized is the first `U^j` (j coprime to p-1) whose
/// eigenvalues are `λ^{±1}`. For `p = 3` the relations also admit Klein
/// groups with non-scalar `U`; there `U_0 = -I` and the rotation is
/// re-chosen as the central element of the group. Eigenvectors are
/// normalized independently; when the reflection then reads
/// `antidiag(-1, -1)` it is replaced by `U^{(p-1)/2} V`, and any other
/// scalar mismatch is absorbed by rescaling the second basis vector.
pub fn dihedral_normal_form(u: &Mat2, v: &Mat2) -> Result<NormalForm, GrpError> {
    let p = u.p;
    if v.p != p {
        return Err(GrpError::PrimeMismatch(p, v.p));
    }
    check_prime(p)?;
    let n = p - 1;
    let id = Mat2::identity(p);
    let bad = |m: &str| Err(GrpError::NotDihedral(m.to_string()));
    if u.det() == 0 || v.det() == 0 {
        return bad("singular input");
    }
    if u.pow(n) != id {
        return bad("U^(p-1) != I");
    }
    if v.mul(v) != id {
        return bad("V^2 != I");
    }
    if v.mul(u).mul(v) != u.inverse()? {
        return bad("VUV != U^-1");
    }
    let group = matrix_closure(&[*u, *v], 2 * n as usize).ok_or(GrpError::NotDihedral(
        "<U, V> is larger than 2(p-1)".into(),
    ))?;
    if group.len() as u64 != 2 * n {
        return bad("<U, V> has order below 2(p-1)");
    }

    let lambda = primitive_root(p)?;
    let lambda_inv = invm(p, lambda);
    let normal_u = Mat2::diag(p, lambda, lambda_inv);
    let normal_v = Mat2::antidiag(p, 1, 1);
    let target_trace = (lambda + lambda_inv) % p;
    let is_rotation = |r: &Mat2| r.det() == 1 && r.trace() == target_trace && r.pow(n) == id;

    let (rotation, rotation_exponent) = match (1..n)
        .filter(|&j| gcd(j, n) == 1)
        .map(|j| (u.pow(j), j))
        .find(|(r, _)| is_rotation(r))
    {
        Some((r, j)) => (r, Some(j)),
        None => match group.iter().find(|r| is_rotation(r)) {
            Some(r) => (*r, None),
            None => return bad("no element with eigenvalues λ, λ^-1"),
        },
    };
    let rot_group: HashSet<Mat2> = matrix_closure(&[rotation], n as usize)
        .unwrap_or_default()
        .into_iter()
        .collect();
    let is_reflection = |x: &Mat2| {
        !x.is_scalar()
            && !rot_group.contains(x)
            && x.mul(x) == id
            && x.mul(&rotation).mul(x) == rotation.inverse().unwrap()
    };
    let mut reflection = if is_reflection(v) {
        *v
    } else {
        match group.iter().find(|x| is_reflection(x)) {
            Some(x) => *x,
            None => return bad("no reflection inverting the rotation"),
        }
    };

    let mut sign_twist = false;
    let conj_inv = if lambda != lambda_inv {
        let e1 = eigenvector(&rotation, lambda);
        let e2 = eigenvector(&rotation, lambda_inv);
        // The reflection maps e1 into the λ^{-1}-eigenspace: V' e1 = β e2.
        let img = reflection.apply(e1);
        let k = if e2[0] != 0 { 0 } else { 1 };
        let beta = mulm(p, img[k], invm(p, e2[k]));
        if beta == p - 1 {
            let w = rotation.pow(n / 2);
            reflection = w.mul(&reflection);
            sign_twist = true;
            columns(p, e1, e2)
        } else {
            columns(p, e1, [mulm(p, e2[0], beta), mulm(p, e2[1], beta)])
        }
    } else {
        // Rotation is -I: any basis {e, V' e} with e not an eigenvector.
        let e = [[1, 0], [0, 1], [1, 1]]
            .into_iter()
            .find(|e| {
                let f = reflection.apply(*e);
                mulm(p, e[0], f[1]) != mulm(p, e[1], f[0])
            })
            .expect("a non-scalar involution moves some line");
        columns(p, e, reflection.apply(e))
    };
    let conjugator = conj_inv.inverse()?;
    let nu = conjugator.mul(&rotation).mul(&conj_inv);
    let nv = conjugator.mul(&reflection).mul(&conj_inv);
    if nu != normal_u || nv != normal_v {
        return Err(GrpError::NotDihedral(format!(
            "normalization produced {nu} and {nv}"
        )));
    }
    Ok(NormalForm {
        conjugator,
        normal_u,
        normal_v,
        rotation,
        reflection,
        rotation_exponent,
        sign_twist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders_and_small_identities() {
        for p in [3u64, 5, 7] {
            let h = AmGroup::new(p).unwrap();
            assert_eq!(h.elements().count() as u64, h.order());
            let t = h.tau(1, 0).then(&h.tau(0, 1));
            assert_eq!(t, h.tau(1, 1));
            for a in 0..p as i64 {
                for b in 0..p as i64 {
                    let vtv = h.v().then(&h.tau(a, b)).then(&h.v());
                    let swapped = Mat2::antidiag(p, 1, 1).apply([a as u64, b as u64]);
                    assert_eq!(vtv, h.tau(swapped[0] as i64, swapped[1] as i64));
                    assert_eq!(h.w().then(&h.tau(a, b)).then(&h.w()), h.tau(-a, -b));
                }
            }
        }
    }

    #[test]
    fn inverse_and_associativity_p3() {
        let h = AmGroup::new(3).unwrap();
        let all: Vec<_> = h.elements().collect();
        for g in &all {
            assert!(g.then(&g.inverse()).is_identity());
            for k in &all {
                for l in &all {
                    assert_eq!(g.then(k).then(l), g.then(&k.then(l)));
                }
            }
        }
    }

    #[test]
    fn action_is_homomorphism() {
        for p in [3u64, 5] {
            let h = AmGroup::new(p).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(p);
            for _ in 0..200 {
                let (g, k) = (h.random(&mut rng), h.random(&mut rng));
                let v = [rng.gen_range(0..p), rng.gen_range(0..p)];
                assert_eq!(g.then(&k).act(v), g.act(k.act(v)));
            }
        }
    }

    #[test]
    fn theta_matches_definition() {
        let h = AmGroup::new(7).unwrap();
        let t = h.theta(3).unwrap();
        assert_eq!(t.act([1, 1]), [3, 5]);
        assert!(h.theta(0).is_none());
    }

    #[test]
    fn presentation_small() {
        let r = verify_presentation(3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.group_order, 36);
        assert_eq!(verify_presentation(5).unwrap().group_order, 200);
        assert_eq!(closure(&[AmGroup::new(3).unwrap().tau(1, 1), AmGroup::new(3).unwrap().v(), AmGroup::new(3).unwrap().w()]).len(), 12);
    }

    #[test]
    fn normal_pair_is_fixed() {
        for p in [5u64, 7, 11, 13] {
            let h = AmGroup::new(p).unwrap();
            let nf = dihedral_normal_form(&h.u().linear(), &h.v().linear()).unwrap();
            assert_eq!(nf.conjugator, Mat2::identity(p));
            assert_eq!(nf.rotation_exponent, Some(1));
            assert!(!nf.sign_twist);
        }
    }

    #[test]
    fn klein_case_p3() {
        let u = Mat2::new(3, [[-1, 0], [0, 1]]);
        let v = Mat2::new(3, [[1, 0], [0, -1]]);
        let nf = dihedral_normal_form(&u, &v).unwrap();
        assert_eq!(nf.rotation_exponent, None);
        assert_eq!(nf.rotation, Mat2::new(3, [[-1, 0], [0, -1]]));
    }

    #[test]
    fn sign_twist_on_negated_reflection() {
        let p = 7;
        let h = AmGroup::new(p).unwrap();
        let u = h.u().linear();
        let v = Mat2::antidiag(p, p - 1, p - 1);
        let nf = dihedral_normal_form(&u, &v).unwrap();
        assert!(nf.sign_twist);
        assert_eq!(nf.conjugator, Mat2::identity(p));
    }

    #[test]
    fn rejects_non_dihedral() {
        let p = 5;
        let id = Mat2::identity(p);
        assert!(dihedral_normal_form(&id, &id).is_err());
        let u = Mat2::diag(p, 2, 3);
        assert!(dihedral_normal_form(&u, &Mat2::new(p, [[1, 1], [0, 1]])).is_err());
    }
}
