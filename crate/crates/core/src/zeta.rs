//! Point counts over `F_{p^k}` and the L-polynomial they determine.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::curve::{AMCurve, CurveError};
use crate::gf::{make_field, GfError};
use crate::poly::RationalFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("work {needed} exceeds budget {budget}")]
    Budget { needed: u64, budget: u64 },
    #[error("expected {expected} point counts, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("N_{k} = {count} violates the Hasse-Weil bound for genus {genus}")]
    HasseWeil { k: usize, count: u64, genus: u64 },
    #[error("Newton identity step {0} is not integral; the counts are inconsistent")]
    NonIntegral(usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] GfError),
}

fn check_budget(p: u64, k: u32, budget: u64) -> Result<(), ZetaError> {
    let needed = p.checked_pow(k).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(ZetaError::Budget { needed, budget });
    }
    Ok(())
}

/// `#M(F_{p^k})` on the nonsingular model: `p` points over each `x` with
/// `x^p - x ≠ 0` and `Tr(c / (x^p - x)) = 0`, plus the `2p` rational
/// places at infinity.
pub fn count_points(curve: &AMCurve, k: u32, budget: u64) -> Result<u64, ZetaError> {
    let p = curve.p();
    check_budget(p, k, budget)?;
    let f = make_field(p, k)?;
    let c = curve.c();
    let good = (0..f.order())
        .into_par_iter()
        .filter(|&x| {
            let eta = f.sub_raw(f.pow_raw(x, p), x);
            eta != 0 && f.trace_raw(f.mul_raw(c, f.inv_raw(eta).unwrap())) == 0
        })
        .count() as u64;
    Ok(p * good + 2 * p)
}

/// Points over `F_{p^k}` of the nonsingular model of `y^p - y = f(x)`,
/// `f` in standard form over `F_p`.
///
/// Poles are totally ramified and contribute one point each; every other
/// `x` (including infinity when it is not a pole) contributes `p` points
/// when `Tr(f(x)) = 0`.
pub fn count_cover_points(f: &RationalFunction, k: u32, budget: u64) -> Result<u64, ZetaError> {
    let base = f.field();
    let p = base.characteristic();
    check_budget(p, k, budget)?;
    let ext = make_field(p, k)?;
    let num = f.numerator();
    let den = f.denominator();
    let finite: u64 = (0..ext.order())
        .into_par_iter()
        .map(|xv| {
            let x = ext.element(xv);
            let d = den.eval(&x);
            if d.is_zero() {
                return 1;
            }
            let v = &num.eval(&x) / &d;
            if v.trace().is_zero() {
                p
            } else {
                0
            }
        })
        .sum();
    let at_infinity = match f.degree() {
        d if d > 0 => 1,
        d if d < 0 => p,
        _ => {
            let v = base.mul_raw(num.leading(), base.inv_raw(den.leading()).unwrap());
            if ext.trace_raw(v) == 0 {
                p
            } else {
                0
            }
        }
    };
    Ok(finite + at_infinity)
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictedCount {
    pub k: usize,
    pub predicted: String,
    pub counted: Option<u64>,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaReport {
    pub p: u64,
    pub genus: u64,
    pub counts: Vec<u64>,
    /// `b_0, …, b_{2g}` as decimal strings.
    #[serde(serialize_with = "ser_bigints")]
    pub l_coefficients: Vec<BigInt>,
    pub functional_equation: bool,
    /// Extra counts beyond `N_g` checked against the fitted L-polynomial.
    pub predictions: Vec<PredictedCount>,
    /// `deg L / 2`, confirmed only when every prediction agrees.
    pub genus_from_zeta: Option<u64>,
    /// Degree of `L` reduced mod `p`.
    pub p_rank_from_zeta: u64,
}

/// Fits `L(t) = Σ b_i t^i` of degree `2g` from `N_1..N_g` by Newton's
/// identities and the functional equation `b_{2g-i} = p^{g-i} b_i`.
/// Counts past `N_g` in `counts` are compared with the fitted prediction.
pub fn fit_l_polynomial(counts: &[u64], p: u64, g: u64) -> Result<ZetaReport, ZetaError> {
    let gu = g as usize;
    if counts.len() < gu {
        return Err(ZetaError::WrongCount {
            expected: gu,
            got: counts.len(),
        });
    }
    let pb = BigInt::from(p);
    for (i, &n) in counts.iter().enumerate() {
        let q = pb.pow(i as u32 + 1);
        let dev = BigInt::from(n) - &q - 1;
        if &dev * &dev > BigInt::from(4 * g * g) * &q {
            return Err(ZetaError::HasseWeil {
                k: i + 1,
                count: n,
                genus: g,
            });
        }
    }
    let s: Vec<BigInt> = counts[..gu]
        .iter()
        .enumerate()
        .map(|(i, &n)| pb.pow(i as u32 + 1) + 1 - BigInt::from(n))
        .collect();
    let mut b = vec![BigInt::one()];
    for i in 1..=gu {
        let mut acc = BigInt::zero();
        for j in 1..=i {
            acc += &s[j - 1] * &b[i - j];
        }
        let ib = BigInt::from(i);
        if !(&acc % &ib).is_zero() {
            return Err(ZetaError::NonIntegral(i));
        }
        b.push(-acc / ib);
    }
    for i in (0..gu).rev() {
        let v = pb.pow((gu - i) as u32) * &b[i];
        b.push(v);
    }
    let functional_equation = (0..=gu).all(|i| b[2 * gu - i] == pb.pow((gu - i) as u32) * &b[i]);
    let predictions: Vec<PredictedCount> = (gu + 1..=counts.len().max(gu + 1))
        .map(|k| {
            let pred = predict_count(&b, p, k);
            let counted = counts.get(k - 1).copied();
            PredictedCount {
                k,
                agrees: counted.map(|c| BigInt::from(c) == pred),
                predicted: pred.to_string(),
                counted,
            }
        })
        .collect();
    let confirmed = predictions.iter().all(|x| x.agrees != Some(false))
        && predictions.iter().any(|x| x.agrees == Some(true));
    let p_rank_from_zeta = b
        .iter()
        .rposition(|c| !(c % &pb).is_zero())
        .unwrap_or(0) as u64;
    Ok(ZetaReport {
        p,
        genus: g,
        counts: counts.to_vec(),
        l_coefficients: b,
        functional_equation,
        predictions,
        genus_from_zeta: (confirmed || g == 0).then_some(g),
        p_rank_from_zeta,
    })
}

/// `N_k = p^k + 1 - s_k` with `s_k` recovered from `L` by Newton's
/// identities.
pub fn predict_count(l: &[BigInt], p: u64, k: usize) -> BigInt {
    let b = |i: usize| l.get(i).cloned().unwrap_or_default();
    let mut s: Vec<BigInt> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut acc = -BigInt::from(n) * b(n);
        for j in 1..n {
            acc -= &s[j - 1] * b(n - j);
        }
        s.push(acc);
    }
    BigInt::from(p).pow(k as u32) + 1 - &s[k - 1]
}

/// Counts `N_1..N_{g+1}` and fits `L`, where `g` is the genus under test.
pub fn zeta_of_curve(curve: &AMCurve, g: u64, budget: u64) -> Result<ZetaReport, ZetaError> {
    let p = curve.p();
    check_budget(p, g as u32 + 1, budget)?;
    let counts = (1..=g as u32 + 1)
        .map(|k| count_points(curve, k, budget))
        .collect::<Result<Vec<_>, _>>()?;
    fit_l_polynomial(&counts, p, g)
}

/// Same for an Artin–Schreier cover in standard form.
pub fn zeta_of_cover(f: &RationalFunction, g: u64, budget: u64) -> Result<ZetaReport, ZetaError> {
    let p = f.field().characteristic();
    check_budget(p, g as u32 + 1, budget)?;
    let counts = (1..=g as u32 + 1)
        .map(|k| count_cover_points(f, k, budget))
        .collect::<Result<Vec<_>, _>>()?;
    fit_l_polynomial(&counts, p, g)
}

/// `|b_i|` bound check used by tests: `|b_i| ≤ C(2g, i) p^{i/2}`.
pub fn coefficient_bound_ok(l: &[BigInt], p: u64) -> bool {
    let two_g = l.len() - 1;
    let mut binom = BigInt::one();
    for (i, c) in l.iter().enumerate() {
        if i > 0 {
            binom = binom * BigInt::from(two_g - i + 1) / BigInt::from(i);
        }
        let bound2 = &binom * &binom * BigInt::from(p).pow(i as u32);
        if c.abs().pow(2) > bound2 {
            return false;
        }
    }
    true
}

/// Lossy conversion for float sanity checks.
pub fn to_f64(l: &[BigInt]) -> Vec<f64> {
    l.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}
