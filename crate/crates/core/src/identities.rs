//! The verification core: a catalog of bilateral and unilateral summation
//! and transformation identities, each with named parameters, an
//! admissibility predicate, and independent left/right-side evaluators.
//!
//! Both sides of every identity are composed only from the series and
//! q-product primitives and are never algebraically pre-simplified, so a
//! numerical match is evidence rather than a tautology.

use std::collections::BTreeMap;

use crate::error::{QError, Result};
use crate::numerics::{gamma, EvalResult, Scalar};
use crate::qcore::{near_q_power, qpoch_inf_ratio, qpoch_list, Order, QBase};
use crate::series::{bilateral_pos, eval_h2, lattice_sum, phi10, phi21, psi11, psi22, H2_MIN_S};

/// Parameter assignment for an identity; keys are single-letter slot names.
pub type Params = BTreeMap<String, Scalar>;

pub fn params_from(pairs: &[(&str, Scalar)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Relative distance a parameter must keep from the lattice {q^i} before an
/// identity accepts it; coarser than the pole tolerance so that accepted
/// samples also evaluate accurately.
const LATTICE_MARGIN: f64 = 1e-3;
/// Margin applied to every stated strict inequality.
const REGION_MARGIN: f64 = 1e-9;
/// Exclusion radius around the idem-degenerate configurations a = b (c = d).
const IDEM_MARGIN: f64 = 0.1;

/// A named identity with parameter slots, admissibility predicate, and
/// independent evaluators for its two sides.
pub struct IdentityDescriptor {
    pub name: &'static str,
    pub params: &'static [&'static str],
    /// Classical source of the identity.
    pub reference: &'static str,
    /// Human-readable convergence region.
    pub region: &'static str,
    /// Identity-specific floor on the verification tolerance.
    pub tol_floor: f64,
    admissible_fn: fn(&Params) -> std::result::Result<(), String>,
    lhs_fn: fn(&Params) -> Result<EvalResult>,
    rhs_fn: fn(&Params) -> Result<EvalResult>,
}

impl IdentityDescriptor {
    pub fn admissible(&self, p: &Params) -> std::result::Result<(), String> {
        for &slot in self.params {
            match p.get(slot) {
                None => return Err(format!("missing parameter {slot}")),
                Some(v) if !(v.re.is_finite() && v.im.is_finite()) => {
                    return Err(format!("parameter {slot} is not finite"))
                }
                _ => {}
            }
        }
        (self.admissible_fn)(p)
    }

    pub fn lhs(&self, p: &Params) -> Result<EvalResult> {
        (self.lhs_fn)(p)
    }

    pub fn rhs(&self, p: &Params) -> Result<EvalResult> {
        (self.rhs_fn)(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

/// Outcome of verifying one identity at one parameter point.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub params: Params,
    pub lhs: EvalResult,
    pub rhs: EvalResult,
    pub rel_err: f64,
    pub effective_tol: f64,
    pub pass: bool,
}

fn relative_error(lhs: Scalar, rhs: Scalar) -> f64 {
    (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300)
}

/// Evaluates both sides independently and compares them at a tolerance
/// widened by the worst cancellation either side reports.
pub fn check(id: &IdentityDescriptor, params: &Params, base_tol: f64) -> Result<CheckResult> {
    id.admissible(params).map_err(QError::Inadmissible)?;
    let lhs = id.lhs(params)?;
    let rhs = id.rhs(params)?;
    let rel_err = relative_error(lhs.value, rhs.value);
    let cancel = lhs.cancellation_digits.max(rhs.cancellation_digits);
    let effective_tol = base_tol.max(id.tol_floor) * 10f64.powf(cancel);
    Ok(CheckResult {
        params: params.clone(),
        lhs,
        rhs,
        rel_err,
        pass: rel_err <= effective_tol,
        effective_tol,
    })
}

/// Evaluates one side only, exposing its diagnostics.
pub fn eval_side(id: &IdentityDescriptor, params: &Params, side: Side) -> Result<EvalResult> {
    id.admissible(params).map_err(QError::Inadmissible)?;
    match side {
        Side::Lhs => id.lhs(params),
        Side::Rhs => id.rhs(params),
    }
}

/// params ↦ expr(params) + expr(params with x and y interchanged).
pub fn idem_symmetrize<F>(
    expr: F,
    x: &'static str,
    y: &'static str,
) -> impl Fn(&Params) -> Result<EvalResult>
where
    F: Fn(&Params) -> Result<EvalResult>,
{
    move |p: &Params| {
        let first = expr(p)?;
        let mut swapped = p.clone();
        let xv = swapped[x];
        let yv = swapped[y];
        swapped.insert(x.to_string(), yv);
        swapped.insert(y.to_string(), xv);
        let second = expr(&swapped)?;
        Ok(first.add(second))
    }
}

// ---------------------------------------------------------------------------
// Shared admissibility machinery
// ---------------------------------------------------------------------------

struct Adm {
    q: Scalar,
}

impl Adm {
    fn new(p: &Params) -> std::result::Result<Adm, String> {
        let q = p["q"];
        let n = q.norm();
        if !(1e-6..1.0).contains(&n) || n >= 1.0 - REGION_MARGIN {
            return Err(format!("|q| = {n} outside (0, 1)"));
        }
        Ok(Adm { q })
    }

    /// Stated region inequality |value| < 1 with margin.
    fn lt1(&self, label: &str, value: Scalar) -> std::result::Result<(), String> {
        if value.norm() < 1.0 - REGION_MARGIN {
            Ok(())
        } else {
            Err(label.to_string())
        }
    }

    fn off_lattice(&self, label: &str, value: Scalar) -> std::result::Result<(), String> {
        match near_q_power(value, self.q, LATTICE_MARGIN) {
            Some(i) => Err(format!("{label} within {LATTICE_MARGIN} of q^{i}")),
            None => Ok(()),
        }
    }

    fn idem_separated(&self, label: &str, x: Scalar, y: Scalar) -> std::result::Result<(), String> {
        if (Scalar::new(1.0, 0.0) - x / y).norm() > IDEM_MARGIN {
            Ok(())
        } else {
            Err(format!("idem-degeneracy ({label})"))
        }
    }
}

fn v(p: &Params, k: &str) -> Scalar {
    p[k]
}

fn qb(p: &Params) -> Result<QBase> {
    QBase::new(p["q"])
}

// ---------------------------------------------------------------------------
// 1. Ramanujan's 1ψ1 summation
// ---------------------------------------------------------------------------

fn ramanujan_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, c, z) = (v(p, "a"), v(p, "c"), v(p, "z"));
    adm.lt1("z", z)?;
    if (c / a).norm() >= z.norm() * (1.0 - REGION_MARGIN) {
        return Err("c/a vs z".to_string());
    }
    adm.off_lattice("a", a)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("c/a", c / a)
}

fn ramanujan_lhs(p: &Params) -> Result<EvalResult> {
    psi11(v(p, "a"), v(p, "c"), qb(p)?, v(p, "z"))
}

fn ramanujan_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, c, z) = (v(p, "a"), v(p, "c"), v(p, "z"));
    qpoch_inf_ratio(
        &[qv, c / a, a * z, qv / (a * z)],
        &[c, qv / a, z, c / (a * z)],
        q,
    )
}

// ---------------------------------------------------------------------------
// 2. q-binomial theorem
// ---------------------------------------------------------------------------

fn q_binomial_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, z) = (v(p, "a"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.off_lattice("az", a * z)
}

fn q_binomial_lhs(p: &Params) -> Result<EvalResult> {
    phi10(v(p, "a"), qb(p)?, v(p, "z"))
}

fn q_binomial_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    qpoch_inf_ratio(&[v(p, "a") * v(p, "z")], &[v(p, "z")], q)
}

// ---------------------------------------------------------------------------
// 3. q-Gauss summation
// ---------------------------------------------------------------------------

fn q_gauss_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c) = (v(p, "a"), v(p, "b"), v(p, "c"));
    adm.lt1("c/ab", c / (a * b))?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("c/a", c / a)?;
    adm.off_lattice("c/b", c / b)
}

fn q_gauss_lhs(p: &Params) -> Result<EvalResult> {
    let (a, b, c) = (v(p, "a"), v(p, "b"), v(p, "c"));
    phi21(a, b, c, qb(p)?, c / (a * b))
}

fn q_gauss_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let (a, b, c) = (v(p, "a"), v(p, "b"), v(p, "c"));
    qpoch_inf_ratio(&[c / a, c / b], &[c, c / (a * b)], q)
}

// ---------------------------------------------------------------------------
// 4. Heine transformation (first form)
// ---------------------------------------------------------------------------

fn heine1_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("c/b", c / b)
}

fn heine1_lhs(p: &Params) -> Result<EvalResult> {
    phi21(v(p, "a"), v(p, "b"), v(p, "c"), qb(p)?, v(p, "z"))
}

fn heine1_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    let pref = qpoch_inf_ratio(&[b, a * z], &[c, z], q)?;
    Ok(pref.mul(phi21(c / b, z, a * z, q, b)?))
}

// ---------------------------------------------------------------------------
// 5. Heine transformation (second form)
// ---------------------------------------------------------------------------

fn heine2_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("c/b", c / b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("bz", b * z)?;
    adm.off_lattice("abz/c", a * b * z / c)
}

fn heine2_lhs(p: &Params) -> Result<EvalResult> {
    phi21(v(p, "a"), v(p, "b"), v(p, "c"), qb(p)?, v(p, "z"))
}

fn heine2_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    let pref = qpoch_inf_ratio(&[c / b, b * z], &[c, z], q)?;
    Ok(pref.mul(phi21(a * b * z / c, b, b * z, q, c / b)?))
}

// ---------------------------------------------------------------------------
// 6. Watson's transformation between three 2φ1 series
// ---------------------------------------------------------------------------

fn watson_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let q = p["q"];
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("qc/abz", q * c / (a * b * z))?;
    adm.idem_separated("a,b", a, b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("z", z)?;
    adm.off_lattice("a/b", a / b)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("bz", b * z)?;
    adm.off_lattice("c/a", c / a)?;
    adm.off_lattice("c/b", c / b)
}

fn watson_lhs(p: &Params) -> Result<EvalResult> {
    phi21(v(p, "a"), v(p, "b"), v(p, "c"), qb(p)?, v(p, "z"))
}

fn watson_branch(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    let pref = qpoch_inf_ratio(&[b, c / a, a * z, qv / (a * z)], &[c, b / a, z, qv / z], q)?;
    Ok(pref.mul(phi21(a, qv * a / c, qv * a / b, q, qv * c / (a * b * z))?))
}

fn watson_rhs(p: &Params) -> Result<EvalResult> {
    idem_symmetrize(watson_branch, "a", "b")(p)
}

// ---------------------------------------------------------------------------
// 7. Three-term 2φ1 transformation
// ---------------------------------------------------------------------------

fn three_term_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let q = p["q"];
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("qb/c", q * b / c)?;
    adm.off_lattice("a", a)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("az/c", a * z / c)?;
    adm.off_lattice("b/c", b / c)?;
    adm.off_lattice("abz/c", a * b * z / c)
}

fn three_term_lhs(p: &Params) -> Result<EvalResult> {
    phi21(v(p, "a"), v(p, "b"), v(p, "c"), qb(p)?, v(p, "z"))
}

fn three_term_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "z"));
    let t1 = qpoch_inf_ratio(&[a * b * z / c, qv / c], &[a * z / c, qv / a], q)?.mul(phi21(
        c / a,
        qv * c / (a * b * z),
        qv * c / (a * z),
        q,
        qv * b / c,
    )?);
    let t2 = qpoch_inf_ratio(
        &[b, qv / c, c / a, a * z / qv, qv * qv / (a * z)],
        &[c / qv, qv * b / c, qv / a, a * z / c, qv * c / (a * z)],
        q,
    )?
    .mul(phi21(qv * a / c, qv * b / c, qv * qv / c, q, z)?);
    Ok(t1.sub(t2))
}

// ---------------------------------------------------------------------------
// 8. Bailey's 2ψ2-to-2ψ2 transformation
// ---------------------------------------------------------------------------

fn thm1_regions(p: &Params, adm: &Adm) -> std::result::Result<(), String> {
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("cd/abz", c * d / (a * b * z))?;
    adm.lt1("d/a", d / a)?;
    adm.lt1("c/b", c / b)
}

fn thm1_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    thm1_regions(p, &adm)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("abz/d", a * b * z / d)
}

fn psi22_params(p: &Params) -> Result<EvalResult> {
    psi22(
        v(p, "a"),
        v(p, "b"),
        v(p, "c"),
        v(p, "d"),
        qb(p)?,
        v(p, "z"),
    )
}

fn thm1_prefactor(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    qpoch_inf_ratio(
        &[a * z, c / b, d / a, qv * d / (a * b * z)],
        &[z, d, qv / b, c * d / (a * b * z)],
        q,
    )
}

fn thm1_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    let inner = psi22(a, a * b * z / d, c, a * z, q, d / a)?;
    Ok(thm1_prefactor(p)?.mul(inner))
}

// ---------------------------------------------------------------------------
// 9. 2ψ2 expansion into two 2φ1 series (idem a;b)
// ---------------------------------------------------------------------------

fn thm2_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("cd/abz", c * d / (a * b * z))?;
    adm.idem_separated("a,b", a, b)?;
    // Only denominator-side quantities are lattice-guarded; numerator
    // products such as (d/b; q)_∞ may vanish — that is exactly the stated
    // d = b degeneration and costs no accuracy.
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("z", z)?;
    adm.off_lattice("a/b", a / b)
}

fn thm2_branch(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    let pref = qpoch_inf_ratio(
        &[qv, b, c / a, d / a, a * z, qv / (a * z)],
        &[c, d, qv / a, b / a, z, qv / z],
        q,
    )?;
    Ok(pref.mul(phi21(
        qv * a / c,
        qv * a / d,
        qv * a / b,
        q,
        c * d / (a * b * z),
    )?))
}

fn thm2_rhs(p: &Params) -> Result<EvalResult> {
    idem_symmetrize(thm2_branch, "a", "b")(p)
}

// ---------------------------------------------------------------------------
// 10. 2ψ2 as a difference of two 2φ1 series
// ---------------------------------------------------------------------------

fn thm3_regions(p: &Params, adm: &Adm) -> std::result::Result<(), String> {
    let q = p["q"];
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("cd/abz", c * d / (a * b * z))?;
    adm.lt1("qb/d", q * b / d)
}

fn thm3_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    thm3_regions(p, &adm)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("az/d", a * z / d)?;
    adm.off_lattice("b/d", b / d)?;
    adm.off_lattice("c/d", c / d)?;
    adm.off_lattice("abz/d", a * b * z / d)
}

fn thm3_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    let t1 = qpoch_inf_ratio(
        &[qv, c / b, qv / d, a * b * z / d, qv * d / (a * b * z)],
        &[qv / a, qv / b, c, a * z / d, c * d / (a * b * z)],
        q,
    )?
    .mul(phi21(
        c * d / (a * b * z),
        d / a,
        qv * d / (a * z),
        q,
        qv * b / d,
    )?);
    let t2 = qpoch_inf_ratio(
        &[
            qv,
            b,
            qv / d,
            qv * c / d,
            d / a,
            a * z / qv,
            qv * qv / (a * z),
        ],
        &[
            qv / a,
            c,
            d / qv,
            qv * qv / d,
            qv * b / d,
            a * z / d,
            qv * d / (a * z),
        ],
        q,
    )?
    .mul(phi21(qv * a / d, qv * b / d, qv * c / d, q, z)?);
    Ok(t1.sub(t2))
}

// ---------------------------------------------------------------------------
// 11. Bailey's iterated 2ψ2 transformation
// ---------------------------------------------------------------------------

fn bailey_iter_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("cd/abz", c * d / (a * b * z))?;
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("bz", b * z)?;
    adm.off_lattice("abz/c", a * b * z / c)?;
    adm.off_lattice("abz/d", a * b * z / d)
}

fn bailey_iter_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    let pref = qpoch_inf_ratio(
        &[a * z, b * z, qv * c / (a * b * z), qv * d / (a * b * z)],
        &[qv / a, qv / b, c, d],
        q,
    )?;
    let inner = psi22(
        a * b * z / c,
        a * b * z / d,
        a * z,
        b * z,
        q,
        c * d / (a * b * z),
    )?;
    Ok(pref.mul(inner))
}

// ---------------------------------------------------------------------------
// 12. r = 2 expansion with idem(c;d)
// ---------------------------------------------------------------------------

fn r2_545_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    adm.lt1("cd/abz", c * d / (a * b * z))?;
    adm.idem_separated("c,d", c, d)?;
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("c/d", c / d)?;
    adm.off_lattice("abz/c", a * b * z / c)?;
    adm.off_lattice("abz/d", a * b * z / d)?;
    adm.off_lattice("abz/cd", a * b * z / (c * d))?;
    adm.off_lattice("c/a", c / a)?;
    adm.off_lattice("c/b", c / b)?;
    adm.off_lattice("d/a", d / a)?;
    adm.off_lattice("d/b", d / b)
}

fn r2_545_branch(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d, z) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"), v(p, "z"));
    // branch in which c is the leading denominator parameter
    let pref = qpoch_inf_ratio(
        &[
            qv,
            qv / d,
            c / a,
            c / b,
            a * b * z / d,
            qv * d / (a * b * z),
        ],
        &[
            qv / a,
            qv / b,
            c,
            c / d,
            c * d / (a * b * z),
            qv * a * b * z / (c * d),
        ],
        q,
    )?;
    Ok(pref.mul(phi21(qv * a / c, qv * b / c, qv * d / c, q, z)?))
}

fn r2_545_rhs(p: &Params) -> Result<EvalResult> {
    idem_symmetrize(r2_545_branch, "c", "d")(p)
}

// ---------------------------------------------------------------------------
// 13. Chu's summation at argument cd/qab
// ---------------------------------------------------------------------------

fn chu_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let q = p["q"];
    let (a, b, c, d) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"));
    adm.lt1("cd/qab", c * d / (q * a * b))?;
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("c", c)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("a/b", a / b)?;
    adm.off_lattice("a/c", a / c)?;
    adm.off_lattice("a/d", a / d)?;
    adm.off_lattice("c/b", c / b)?;
    adm.off_lattice("d/b", d / b)?;
    adm.off_lattice("cd/qa", c * d / (q * a))
}

fn chu_lhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"));
    psi22(a, b, c, d, q, c * d / (qv * a * b))
}

fn chu_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, c, d) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"));
    let first = qpoch_inf_ratio(
        &[qv, a, c / b, d / b, c * d / (qv * a), qv * qv * a / (c * d)],
        &[c, d, qv / b, qv * a / c, qv * a / d, c * d / (qv * a * b)],
        q,
    )?;
    let second = qpoch_inf_ratio(
        &[qv, qv * a / b, qv / c, qv / d],
        &[qv * a / c, qv * a / d, qv / a, qv / b],
        q,
    )?
    .mul(phi21(qv * a / c, qv * a / d, qv * a / b, q, qv)?)
    .scale(a);
    Ok(first.add(second))
}

// ---------------------------------------------------------------------------
// 14. Classical bilateral 2H2 summation
// ---------------------------------------------------------------------------

fn dougall_gamma_args(p: &Params) -> [Scalar; 9] {
    let one = Scalar::new(1.0, 0.0);
    let (a, b, c, d) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"));
    [
        one - a,
        one - b,
        c,
        d,
        c + d - a - b - one,
        c - a,
        c - b,
        d - a,
        d - b,
    ]
}

fn dougall_adm(p: &Params) -> std::result::Result<(), String> {
    let (a, b, c, d) = (v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"));
    let s = (c + d - a - b).re;
    if s < H2_MIN_S {
        return Err(format!("Re(c+d-a-b) = {s} below engine floor {H2_MIN_S}"));
    }
    for arg in dougall_gamma_args(p) {
        let nearest = arg.re.round();
        if nearest <= 0.5 && (arg - Scalar::new(nearest.min(0.0), 0.0)).norm() < LATTICE_MARGIN {
            return Err(format!("gamma argument {arg} near a pole"));
        }
    }
    Ok(())
}

fn dougall_lhs(p: &Params) -> Result<EvalResult> {
    eval_h2(v(p, "a"), v(p, "b"), v(p, "c"), v(p, "d"))
}

fn dougall_rhs(p: &Params) -> Result<EvalResult> {
    let args = dougall_gamma_args(p);
    let mut acc = EvalResult::ONE;
    for arg in &args[..5] {
        acc = acc.mul(gamma(*arg)?);
    }
    for arg in &args[5..] {
        acc = acc.div(gamma(*arg)?);
    }
    acc.finite("dougall gamma product overflow")
}

// ---------------------------------------------------------------------------
// 15. Finite-shift reduction of the lattice bilateral
// ---------------------------------------------------------------------------

fn int_param(p: &Params, k: &str) -> std::result::Result<i64, String> {
    let val = v(p, k);
    let n = val.re.round();
    if val.im.abs() > 1e-9 || (val.re - n).abs() > 1e-9 {
        return Err(format!("{k} = {val} is not an integer"));
    }
    Ok(n as i64)
}

fn finite_shift_adm(p: &Params) -> std::result::Result<(), String> {
    let adm = Adm::new(p)?;
    let m = int_param(p, "m")?;
    if !(1..=8).contains(&m) {
        return Err(format!("m = {m} outside [1, 8]"));
    }
    let (a, b, d, z) = (v(p, "a"), v(p, "b"), v(p, "d"), v(p, "z"));
    adm.lt1("z", z)?;
    if z.norm() < 0.02 {
        return Err("z too small for z^{-m} prefactor".to_string());
    }
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("d", d)
}

fn finite_shift_lhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let m = int_param(p, "m").map_err(QError::Inadmissible)?;
    let c = q.value().powi(1 + m as i32);
    psi22(v(p, "a"), v(p, "b"), c, v(p, "d"), q, v(p, "z"))
}

fn finite_shift_rhs(p: &Params) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let m = int_param(p, "m").map_err(QError::Inadmissible)?;
    let c = qv.powi(1 + m as i32);
    let (a, b, d, z) = (v(p, "a"), v(p, "b"), v(p, "d"), v(p, "z"));
    let qmi = qv.powi(-(m as i32));
    let pref = qpoch_list(&[a, b], q, Order::Finite(-m))?
        .div(qpoch_list(&[c, d], q, Order::Finite(-m))?)
        .scale(z.powi(-(m as i32)));
    Ok(pref.mul(phi21(a * qmi, b * qmi, d * qmi, q, z)?))
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

/// The fixed identity catalog, in stable order.
pub fn catalog() -> Vec<IdentityDescriptor> {
    vec![
        IdentityDescriptor {
            name: "ramanujan_1psi1",
            params: &["a", "c", "z", "q"],
            reference: "Ramanujan's 1ψ1 summation (Gasper–Rahman II.29)",
            region: "|c/a| < |z| < 1",
            tol_floor: 0.0,
            admissible_fn: ramanujan_adm,
            lhs_fn: ramanujan_lhs,
            rhs_fn: ramanujan_rhs,
        },
        IdentityDescriptor {
            name: "q_binomial",
            params: &["a", "z", "q"],
            reference: "q-binomial theorem (Gasper–Rahman II.3)",
            region: "|z| < 1",
            tol_floor: 0.0,
            admissible_fn: q_binomial_adm,
            lhs_fn: q_binomial_lhs,
            rhs_fn: q_binomial_rhs,
        },
        IdentityDescriptor {
            name: "q_gauss",
            params: &["a", "b", "c", "q"],
            reference: "q-Gauss summation (Gasper–Rahman II.8)",
            region: "|c/ab| < 1",
            tol_floor: 0.0,
            admissible_fn: q_gauss_adm,
            lhs_fn: q_gauss_lhs,
            rhs_fn: q_gauss_rhs,
        },
        IdentityDescriptor {
            name: "heine_iii1",
            params: &["a", "b", "c", "z", "q"],
            reference: "Heine's transformation (Gasper–Rahman III.1)",
            region: "|z| < 1 and |b| < 1",
            tol_floor: 0.0,
            admissible_fn: heine1_adm,
            lhs_fn: heine1_lhs,
            rhs_fn: heine1_rhs,
        },
        IdentityDescriptor {
            name: "heine_iii2",
            params: &["a", "b", "c", "z", "q"],
            reference: "Heine's transformation (Gasper–Rahman III.2)",
            region: "|z| < 1 and |c/b| < 1",
            tol_floor: 0.0,
            admissible_fn: heine2_adm,
            lhs_fn: heine2_lhs,
            rhs_fn: heine2_rhs,
        },
        IdentityDescriptor {
            name: "watson_iii32",
            params: &["a", "b", "c", "z", "q"],
            reference: "Watson's three-series transformation (Gasper–Rahman III.32)",
            region: "|z| < 1 and |qc/abz| < 1",
            tol_floor: 0.0,
            admissible_fn: watson_adm,
            lhs_fn: watson_lhs,
            rhs_fn: watson_rhs,
        },
        IdentityDescriptor {
            name: "three_term_iii31",
            params: &["a", "b", "c", "z", "q"],
            reference: "three-term 2φ1 relation (Gasper–Rahman III.31)",
            region: "|z| < 1 and |qb/c| < 1",
            tol_floor: 0.0,
            admissible_fn: three_term_adm,
            lhs_fn: three_term_lhs,
            rhs_fn: three_term_rhs,
        },
        IdentityDescriptor {
            name: "thm1_bailey",
            params: &["a", "b", "c", "d", "z", "q"],
            reference: "Bailey's 2ψ2 transformation (1950)",
            region: "max{|z|, |cd/abz|, |d/a|, |c/b|} < 1",
            tol_floor: 0.0,
            admissible_fn: thm1_adm,
            lhs_fn: psi22_params,
            rhs_fn: thm1_rhs,
        },
        IdentityDescriptor {
            name: "thm2_expansion",
            params: &["a", "b", "c", "d", "z", "q"],
            reference: "2ψ2 expansion, r = 2 case of Gasper–Rahman (5.4.4)",
            region: "max{|z|, |cd/abz|} < 1",
            tol_floor: 0.0,
            admissible_fn: thm2_adm,
            lhs_fn: psi22_params,
            rhs_fn: thm2_rhs,
        },
        IdentityDescriptor {
            name: "thm3_chen_gu",
            params: &["a", "b", "c", "d", "z", "q"],
            reference: "Chen–Gu 2ψ2 expansion",
            region: "max{|z|, |cd/abz|, |qb/d|} < 1",
            tol_floor: 0.0,
            admissible_fn: thm3_adm,
            lhs_fn: psi22_params,
            rhs_fn: thm3_rhs,
        },
        IdentityDescriptor {
            name: "bailey_iterated",
            params: &["a", "b", "c", "d", "z", "q"],
            reference: "Bailey's iterated 2ψ2 transformation (1950)",
            region: "max{|z|, |cd/abz|} < 1",
            tol_floor: 0.0,
            admissible_fn: bailey_iter_adm,
            lhs_fn: psi22_params,
            rhs_fn: bailey_iter_rhs,
        },
        IdentityDescriptor {
            name: "expansion_r2_545",
            params: &["a", "b", "c", "d", "z", "q"],
            reference: "r = 2 case of Gasper–Rahman (5.4.5)",
            region: "max{|z|, |cd/abz|} < 1",
            tol_floor: 0.0,
            admissible_fn: r2_545_adm,
            lhs_fn: psi22_params,
            rhs_fn: r2_545_rhs,
        },
        IdentityDescriptor {
            name: "chu_formula",
            params: &["a", "b", "c", "d", "q"],
            reference: "Chu's 2ψ2 summation",
            region: "|cd/qab| < 1",
            tol_floor: 0.0,
            admissible_fn: chu_adm,
            lhs_fn: chu_lhs,
            rhs_fn: chu_rhs,
        },
        IdentityDescriptor {
            name: "dougall_2h2",
            params: &["a", "b", "c", "d"],
            reference: "Dougall's 2H2 summation (1907)",
            region: "Re(c+d-a-b) > 1 (engine floor 3)",
            tol_floor: 1e-5,
            admissible_fn: dougall_adm,
            lhs_fn: dougall_lhs,
            rhs_fn: dougall_rhs,
        },
        IdentityDescriptor {
            name: "finite_shift",
            params: &["a", "b", "d", "z", "q", "m"],
            reference: "finite shift of the lattice 2ψ2 to a 2φ1",
            region: "|z| < 1, m a positive integer",
            tol_floor: 0.0,
            admissible_fn: finite_shift_adm,
            lhs_fn: finite_shift_lhs,
            rhs_fn: finite_shift_rhs,
        },
    ]
}

/// Looks an identity up by its stable public name.
pub fn find(name: &str) -> Option<IdentityDescriptor> {
    catalog().into_iter().find(|id| id.name == name)
}

// ---------------------------------------------------------------------------
// Lattice checks at c = q^{1+m}
// ---------------------------------------------------------------------------

/// Admissibility of a lattice sample (no c slot; c = q^{1+m} is implied).
pub fn lattice_admissible(id_name: &str, p: &Params, m: i64) -> std::result::Result<(), String> {
    if !(1..=8).contains(&m) {
        return Err(format!("m = {m} outside [1, 8]"));
    }
    let adm = Adm::new(p)?;
    let q = p["q"];
    let c = q.powi(1 + m as i32);
    let mut full = p.clone();
    full.insert("c".to_string(), c);
    let (a, b, d, z) = (v(p, "a"), v(p, "b"), v(p, "d"), v(p, "z"));
    match id_name {
        "thm1_bailey" => thm1_regions(&full, &adm)?,
        "thm2_expansion" => {
            adm.lt1("z", z)?;
            adm.lt1("cd/abz", c * d / (a * b * z))?;
            adm.idem_separated("a,b", a, b)?;
            adm.off_lattice("z", z)?;
            adm.off_lattice("a/b", a / b)?;
            adm.off_lattice("bz", b * z)?;
            adm.off_lattice("d/b", d / b)?;
        }
        "thm3_chen_gu" => {
            thm3_regions(&full, &adm)?;
            adm.off_lattice("az/d", a * z / d)?;
            adm.off_lattice("b/d", b / d)?;
            adm.off_lattice("abz/d", a * b * z / d)?;
        }
        other => return Err(format!("{other} has no lattice form")),
    }
    if z.norm() < 0.02 {
        return Err("z too small for z^{-m} prefactor".to_string());
    }
    adm.off_lattice("a", a)?;
    adm.off_lattice("b", b)?;
    adm.off_lattice("d", d)?;
    adm.off_lattice("az", a * z)?;
    adm.off_lattice("abz/d", a * b * z / d)?;
    adm.off_lattice("d/a", d / a)
}

/// Left side common to all three lattice identities: the split form of the
/// bilateral series with the ∏(c - q^i) rewrite of its negative part.
fn lattice_f(p: &Params, c: Scalar) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, d, z) = (v(p, "a"), v(p, "b"), v(p, "d"), v(p, "z"));
    let head = bilateral_pos(&[a, b], &[c, d], q, z)?;
    let tail = lattice_sum(
        qv / d,
        c,
        Scalar::new(1.0, 0.0),
        qv / a,
        qv / b,
        d / (a * b * z),
        q,
        true,
    )?;
    Ok(head.add(tail))
}

fn lattice_g_thm1(p: &Params, c: Scalar) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let (a, b, d, z) = (v(p, "a"), v(p, "b"), v(p, "d"), v(p, "z"));
    let pref = qpoch_inf_ratio(
        &[a * z, c / b, d / a, qv * d / (a * b * z)],
        &[z, d, qv / b, c * d / (a * b * z)],
        q,
    )?;
    let head = bilateral_pos(&[a, a * b * z / d], &[c, a * z], q, d / a)?;
    let tail = lattice_sum(
        qv / (a * z),
        c,
        Scalar::new(1.0, 0.0),
        qv / a,
        qv * d / (a * b * z),
        Scalar::new(1.0, 0.0) / b,
        q,
        true,
    )?;
    Ok(pref.mul(head.add(tail)))
}

fn lattice_g_thm2(p: &Params, c: Scalar) -> Result<EvalResult> {
    let q = qb(p)?;
    let qv = q.value();
    let d = v(p, "d");
    let z = v(p, "z");
    let mut acc: Option<EvalResult> = None;
    let (a0, b0) = (v(p, "a"), v(p, "b"));
    for (alpha, beta) in [(a0, b0), (b0, a0)] {
        let pref = qpoch_inf_ratio(
            &[qv, beta, d / alpha, alpha * z, qv / (alpha * z), c / alpha],
            &[c, d, beta / alpha, z, qv / z, qv / alpha],
            q,
        )?;
        let series = lattice_sum(
            qv * alpha / d,
            c,
            alpha,
            qv,
            qv * alpha / beta,
            d / (alpha * beta * z),
            q,
            false,
        )?;
        let branch = pref.mul(series);
        acc = Some(match acc {
            None => branch,
            Some(prev) => prev.add(branch),
        });
    }
    Ok(acc.unwrap())
}

fn lattice_g_thm3(p: &Params, c: Scalar) -> Result<EvalResult> {
    let mut full = p.clone();
    full.insert("c".to_string(), c);
    thm3_rhs(&full)
}

/// Checks the split-series forms f(c) = g(c) at the lattice point
/// c = q^{1+m}, and cross-checks f against the finite-shift 2φ1 reduction.
pub fn lattice_check(
    id: &IdentityDescriptor,
    params: &Params,
    m: i64,
    base_tol: f64,
) -> Result<CheckResult> {
    lattice_admissible(id.name, params, m).map_err(QError::Inadmissible)?;
    let q = params["q"];
    let c = q.powi(1 + m as i32);
    let f = lattice_f(params, c)?;
    let g = match id.name {
        "thm1_bailey" => lattice_g_thm1(params, c)?,
        "thm2_expansion" => lattice_g_thm2(params, c)?,
        "thm3_chen_gu" => lattice_g_thm3(params, c)?,
        other => return Err(QError::Inadmissible(format!("{other} has no lattice form"))),
    };
    // cross-check against the finite-shift reduction of the same bilateral
    let mut shift_params = params.clone();
    shift_params.insert("m".to_string(), Scalar::new(m as f64, 0.0));
    let cross = finite_shift_rhs(&shift_params)?;
    let rel_fg = relative_error(f.value, g.value);
    let rel_cross = relative_error(f.value, cross.value);
    let cancel = f
        .cancellation_digits
        .max(g.cancellation_digits)
        .max(cross.cancellation_digits);
    let effective_tol = base_tol.max(id.tol_floor) * 10f64.powf(cancel);
    let rel_err = rel_fg.max(rel_cross);
    let mut recorded = params.clone();
    recorded.insert("m".to_string(), Scalar::new(m as f64, 0.0));
    recorded.insert("c".to_string(), c);
    Ok(CheckResult {
        params: recorded,
        lhs: f,
        rhs: g,
        rel_err,
        pass: rel_err <= effective_tol,
        effective_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn catalog_has_fifteen_entries() {
        let cat = catalog();
        assert_eq!(cat.len(), 15);
        let names: Vec<_> = cat.iter().map(|c| c.name).collect();
        assert!(names.contains(&"thm1_bailey"));
        assert!(names.contains(&"dougall_2h2"));
    }

    #[test]
    fn thm1_declares_full_slot_set() {
        let id = find("thm1_bailey").unwrap();
        assert_eq!(id.params, &["a", "b", "c", "d", "z", "q"]);
    }

    #[test]
    fn every_entry_rejects_z_outside_unit_disc() {
        for id in catalog() {
            if !id.params.contains(&"z") {
                continue;
            }
            let mut p = params_from(&[
                ("a", s(0.4)),
                ("b", s(0.7)),
                ("c", s(0.11)),
                ("d", s(0.13)),
                ("q", s(0.3)),
                ("m", s(2.0)),
            ]);
            p.insert("z".to_string(), s(2.0));
            assert!(id.admissible(&p).is_err(), "{} accepted z = 2", id.name);
        }
    }

    #[test]
    fn thm1_inadmissible_reason_names_ratio() {
        let id = find("thm1_bailey").unwrap();
        // |d/a| = 1.2
        let p = params_from(&[
            ("a", s(0.5)),
            ("b", s(0.9)),
            ("c", s(0.11)),
            ("d", s(0.6)),
            ("z", s(0.4)),
            ("q", s(0.3)),
        ]);
        let err = id.admissible(&p).unwrap_err();
        assert!(err.contains("d/a"), "reason was {err}");
    }

    #[test]
    fn thm2_rejects_idem_degeneracy() {
        let id = find("thm2_expansion").unwrap();
        let p = params_from(&[
            ("a", s(0.5)),
            ("b", s(0.5)),
            ("c", s(0.11)),
            ("d", s(0.13)),
            ("z", s(0.4)),
            ("q", s(0.3)),
        ]);
        let err = id.admissible(&p).unwrap_err();
        assert!(err.contains("idem-degeneracy"), "reason was {err}");
    }

    #[test]
    fn ramanujan_sample_passes_tightly() {
        let id = find("ramanujan_1psi1").unwrap();
        let p = params_from(&[("a", s(0.4)), ("c", s(0.02)), ("z", s(0.3)), ("q", s(0.2))]);
        let r = check(&id, &p, 1e-8).unwrap();
        assert!(r.pass);
        assert!(r.rel_err <= 1e-10, "rel_err {}", r.rel_err);
    }

    #[test]
    fn idem_symmetrize_basics() {
        // symmetric expression doubles
        let expr = |p: &Params| -> Result<EvalResult> { Ok(EvalResult::exact(p["a"] + p["b"])) };
        let sym = idem_symmetrize(expr, "a", "b");
        let p = params_from(&[("a", s(1.0)), ("b", s(2.0))]);
        assert_eq!(sym(&p).unwrap().value, s(6.0));
        // swapping twice returns the original single-branch value
        let asym = |p: &Params| -> Result<EvalResult> { Ok(EvalResult::exact(p["a"] - p["b"])) };
        let mut swapped = p.clone();
        let (av, bv) = (swapped["a"], swapped["b"]);
        swapped.insert("a".to_string(), bv);
        swapped.insert("b".to_string(), av);
        let mut back = swapped.clone();
        let (av2, bv2) = (back["a"], back["b"]);
        back.insert("a".to_string(), bv2);
        back.insert("b".to_string(), av2);
        assert_eq!(asym(&p).unwrap().value, asym(&back).unwrap().value);
    }

    #[test]
    fn thm2_degenerates_to_ramanujan_at_d_eq_b() {
        // d = b collapses the bilateral to 1ψ1; both sides must equal the
        // Ramanujan product
        let id = find("thm2_expansion").unwrap();
        let q = s(0.25);
        let (a, b, c, z) = (s(0.8), s(0.37), s(0.05), s(0.45));
        let p = params_from(&[("a", a), ("b", b), ("c", c), ("d", b), ("z", z), ("q", q)]);
        let r = check(&id, &p, 1e-8).unwrap();
        assert!(r.pass, "rel_err {} tol {}", r.rel_err, r.effective_tol);
        let ram = find("ramanujan_1psi1").unwrap();
        let rp = params_from(&[("a", a), ("c", c), ("z", z), ("q", q)]);
        let product = ram.rhs(&rp).unwrap().value;
        assert!(
            relative_error(r.lhs.value, product) < 1e-8,
            "lhs {} product {}",
            r.lhs.value,
            product
        );
    }

    #[test]
    fn thm3_degenerates_to_ramanujan_at_d_eq_a() {
        let id = find("thm3_chen_gu").unwrap();
        let q = s(0.25);
        let (a, b, c, z) = (s(0.9), s(0.6), s(0.07), s(0.4));
        let p = params_from(&[("a", a), ("b", b), ("c", c), ("d", a), ("z", z), ("q", q)]);
        let r = check(&id, &p, 1e-8).unwrap();
        assert!(r.pass, "rel_err {} tol {}", r.rel_err, r.effective_tol);
        let ram = find("ramanujan_1psi1").unwrap();
        let rp = params_from(&[("a", b), ("c", c), ("z", z), ("q", q)]);
        let product = ram.rhs(&rp).unwrap().value;
        assert!(
            relative_error(r.lhs.value, product) < 1e-8,
            "lhs {} product {}",
            r.lhs.value,
            product
        );
    }

    #[test]
    fn lattice_checks_pass_small_m() {
        let p = params_from(&[
            ("a", s(0.85)),
            ("b", s(1.3)),
            ("d", s(0.21)),
            ("z", s(0.4)),
            ("q", s(0.3)),
        ]);
        for name in ["thm1_bailey", "thm2_expansion", "thm3_chen_gu"] {
            let id = find(name).unwrap();
            for m in 1..=5 {
                if lattice_admissible(name, &p, m).is_err() {
                    continue;
                }
                let r = lattice_check(&id, &p, m, 1e-8).unwrap();
                assert!(
                    r.pass,
                    "{name} m={m}: rel_err {} tol {}",
                    r.rel_err, r.effective_tol
                );
            }
        }
    }

    #[test]
    fn finite_shift_reduction_holds() {
        let id = find("finite_shift").unwrap();
        for m in 1..=5 {
            let p = params_from(&[
                ("a", s(0.85)),
                ("b", s(1.3)),
                ("d", s(0.21)),
                ("z", s(0.4)),
                ("q", s(0.3)),
                ("m", s(m as f64)),
            ]);
            let r = check(&id, &p, 1e-8).unwrap();
            assert!(
                r.pass,
                "m={m}: rel_err {} tol {}",
                r.rel_err, r.effective_tol
            );
        }
    }

    #[test]
    fn eval_side_exposes_single_side() {
        let id = find("q_binomial").unwrap();
        let p = params_from(&[("a", s(0.6)), ("z", s(0.5)), ("q", s(0.4))]);
        let rhs = eval_side(&id, &p, Side::Rhs).unwrap().value;
        let q = QBase::new(s(0.4)).unwrap();
        let expect =
            crate::qcore::qpoch_inf(s(0.3), q).value / crate::qcore::qpoch_inf(s(0.5), q).value;
        assert!(relative_error(rhs, expect) < 1e-13);
    }

    #[test]
    fn generic_smoke_across_catalog() {
        // one hand-picked admissible point per identity
        let cases: Vec<(&str, Params)> = vec![
            (
                "q_gauss",
                params_from(&[("a", s(1.3)), ("b", s(0.9)), ("c", s(0.35)), ("q", s(0.3))]),
            ),
            (
                "heine_iii1",
                params_from(&[
                    ("a", s(1.1)),
                    ("b", s(0.55)),
                    ("c", s(0.19)),
                    ("z", s(0.42)),
                    ("q", s(0.31)),
                ]),
            ),
            (
                "heine_iii2",
                params_from(&[
                    ("a", s(1.1)),
                    ("b", s(0.95)),
                    ("c", s(0.51)),
                    ("z", s(0.42)),
                    ("q", s(0.31)),
                ]),
            ),
            (
                "watson_iii32",
                params_from(&[
                    ("a", s(1.4)),
                    ("b", s(0.75)),
                    ("c", s(0.3)),
                    ("z", s(0.52)),
                    ("q", s(0.28)),
                ]),
            ),
            (
                "three_term_iii31",
                params_from(&[
                    ("a", s(1.2)),
                    ("b", s(0.85)),
                    ("c", s(0.55)),
                    ("z", s(0.43)),
                    ("q", s(0.26)),
                ]),
            ),
            (
                "thm1_bailey",
                params_from(&[
                    ("a", s(0.95)),
                    ("b", s(1.25)),
                    ("c", s(0.21)),
                    ("d", s(0.26)),
                    ("z", s(0.5)),
                    ("q", s(0.3)),
                ]),
            ),
            (
                "thm2_expansion",
                params_from(&[
                    ("a", s(0.95)),
                    ("b", s(1.45)),
                    ("c", s(0.21)),
                    ("d", s(0.26)),
                    ("z", s(0.5)),
                    ("q", s(0.3)),
                ]),
            ),
            (
                "thm3_chen_gu",
                params_from(&[
                    ("a", s(0.95)),
                    ("b", s(1.45)),
                    ("c", s(0.21)),
                    ("d", s(0.9)),
                    ("z", s(0.5)),
                    ("q", s(0.3)),
                ]),
            ),
            (
                "bailey_iterated",
                params_from(&[
                    ("a", s(0.95)),
                    ("b", s(1.25)),
                    ("c", s(0.21)),
                    ("d", s(0.26)),
                    ("z", s(0.5)),
                    ("q", s(0.3)),
                ]),
            ),
            (
                "expansion_r2_545",
                params_from(&[
                    ("a", s(0.95)),
                    ("b", s(1.45)),
                    ("c", s(0.21)),
                    ("d", s(0.33)),
                    ("z", s(0.5)),
                    ("q", s(0.3)),
                ]),
            ),
            (
                "chu_formula",
                params_from(&[
                    ("a", s(1.15)),
                    ("b", s(1.35)),
                    ("c", s(0.42)),
                    ("d", s(0.37)),
                    ("q", s(0.45)),
                ]),
            ),
            (
                "dougall_2h2",
                params_from(&[("a", s(0.1)), ("b", s(0.2)), ("c", s(2.5)), ("d", s(2.8))]),
            ),
        ];
        for (name, p) in cases {
            let id = find(name).unwrap();
            if let Err(reason) = id.admissible(&p) {
                panic!("{name}: hand-picked point rejected: {reason}");
            }
            let r = check(&id, &p, 1e-8).unwrap();
            assert!(
                r.pass,
                "{name}: rel_err {} tol {} (lhs {} rhs {})",
                r.rel_err, r.effective_tol, r.lhs.value, r.rhs.value
            );
        }
    }
}
