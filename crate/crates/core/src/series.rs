//! Evaluators for unilateral rφ(s−1), bilateral rψs, and classical bilateral
//! ₂H₂ series, with convergence classification and certified stopping rules.
//!
//! All terms are generated by forward recurrences; negative-index bilateral
//! terms use the overflow-free rewrite (1 - x q^{-M}) = q^{-M} (q^M - x) so
//! the per-step ratio never touches a huge intermediate.

use crate::error::{QError, Result, POLE_TOL};
use crate::numerics::{EvalResult, Scalar};
use crate::qcore::{near_q_power, QBase};

/// Hard cap on terms per one-sided sum.
pub const TERM_CAP: usize = 1_000_000;
/// Last-term threshold of the stopping rule.
const STOP_TERM: f64 = 1e-15;
/// Geometric-tail threshold of the stopping rule.
const STOP_TAIL: f64 = 1e-14;
/// Tail ratios this close to 1 are classified "boundary" and refused.
const BOUNDARY_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Unilateral,
    Bilateral,
    ClassicalBilateral,
}

/// Parameters of a hypergeometric series.
///
/// For the unilateral kind the implicit denominator parameter q is *not*
/// listed in `den`. The classical bilateral kind carries no base and is
/// evaluated at argument 1.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub kind: SeriesKind,
    pub num: Vec<Scalar>,
    pub den: Vec<Scalar>,
    pub q: Option<QBase>,
    pub z: Scalar,
}

impl SeriesSpec {
    pub fn phi(num: Vec<Scalar>, den: Vec<Scalar>, q: QBase, z: Scalar) -> Self {
        SeriesSpec {
            kind: SeriesKind::Unilateral,
            num,
            den,
            q: Some(q),
            z,
        }
    }

    pub fn psi(num: Vec<Scalar>, den: Vec<Scalar>, q: QBase, z: Scalar) -> Self {
        SeriesSpec {
            kind: SeriesKind::Bilateral,
            num,
            den,
            q: Some(q),
            z,
        }
    }

    pub fn h2(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        SeriesSpec {
            kind: SeriesKind::ClassicalBilateral,
            num: vec![a, b],
            den: vec![c, d],
            q: None,
            z: Scalar::new(1.0, 0.0),
        }
    }

    fn qv(&self) -> Scalar {
        self.q.expect("q-series spec without a base").value()
    }

    /// True when some numerator parameter sits on {q^{-j} : j >= 0}, which
    /// terminates the k -> +inf side.
    fn pos_terminates(&self) -> bool {
        self.num
            .iter()
            .any(|&a| matches!(near_q_power(a, self.qv(), POLE_TOL), Some(i) if i <= 0))
    }

    /// True when some denominator parameter sits on {q^j : j >= 1}, which
    /// kills every term with k <= -j.
    fn neg_terminates(&self) -> bool {
        self.den
            .iter()
            .any(|&b| matches!(near_q_power(b, self.qv(), POLE_TOL), Some(i) if i >= 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    Boundary,
}

/// Outcome of the tail-ratio convergence test.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceClass {
    pub verdict: Verdict,
    pub pos_tail_ratio: f64,
    pub neg_tail_ratio: f64,
}

fn verdict_from(ratios: &[f64]) -> Verdict {
    if ratios.iter().any(|&r| r >= 1.0) {
        Verdict::Diverges
    } else if ratios.iter().any(|&r| r >= 1.0 - BOUNDARY_MARGIN) {
        Verdict::Boundary
    } else {
        Verdict::Converges
    }
}

/// Classifies a spec by its limiting term ratios.
pub fn converges(spec: &SeriesSpec) -> ConvergenceClass {
    match spec.kind {
        SeriesKind::Unilateral => {
            let r = spec.num.len();
            let s = spec.den.len() + 1; // implicit q
            if spec.pos_terminates() {
                return ConvergenceClass {
                    verdict: Verdict::Converges,
                    pos_tail_ratio: 0.0,
                    neg_tail_ratio: 0.0,
                };
            }
            let pos = match r.cmp(&s) {
                std::cmp::Ordering::Less => 0.0,
                std::cmp::Ordering::Equal => spec.z.norm(),
                std::cmp::Ordering::Greater => f64::INFINITY,
            };
            ConvergenceClass {
                verdict: verdict_from(&[pos]),
                pos_tail_ratio: pos,
                neg_tail_ratio: 0.0,
            }
        }
        SeriesKind::Bilateral => {
            let r = spec.num.len();
            let s = spec.den.len();
            let pos = if spec.pos_terminates() {
                0.0
            } else {
                match r.cmp(&s) {
                    std::cmp::Ordering::Less => 0.0,
                    std::cmp::Ordering::Equal => spec.z.norm(),
                    std::cmp::Ordering::Greater => f64::INFINITY,
                }
            };
            let neg = if spec.neg_terminates() {
                0.0
            } else {
                match r.cmp(&s) {
                    std::cmp::Ordering::Less => 0.0,
                    std::cmp::Ordering::Equal => {
                        let num: Scalar = spec.num.iter().product();
                        let den: Scalar = spec.den.iter().product();
                        (den / (num * spec.z)).norm()
                    }
                    std::cmp::Ordering::Greater => f64::INFINITY,
                }
            };
            ConvergenceClass {
                verdict: verdict_from(&[pos, neg]),
                pos_tail_ratio: pos,
                neg_tail_ratio: neg,
            }
        }
        SeriesKind::ClassicalBilateral => {
            let s: Scalar = spec.den.iter().sum::<Scalar>() - spec.num.iter().sum::<Scalar>();
            let verdict = if s.re > 1.0 + BOUNDARY_MARGIN {
                Verdict::Converges
            } else if s.re > 1.0 - BOUNDARY_MARGIN {
                Verdict::Boundary
            } else {
                Verdict::Diverges
            };
            ConvergenceClass {
                verdict,
                pos_tail_ratio: 1.0,
                neg_tail_ratio: 1.0,
            }
        }
    }
}

/// One-sided partial sum with its diagnostics.
struct SideSum {
    value: Scalar,
    max_partial: f64,
    abs_err: f64,
}

/// Step outcome produced by a term-ratio generator.
enum Step {
    Factor(Scalar),
    Terminate,
}

/// Sums `first + first*f(0) + first*f(0)*f(1) + ...` under the certified
/// stopping rule. `asym` is the limiting per-step ratio.
fn sum_side<F>(first: Scalar, mut ratio: F, asym: f64) -> Result<SideSum>
where
    F: FnMut(usize) -> Result<Step>,
{
    let mut term = first;
    let mut partial = Scalar::new(0.0, 0.0);
    let mut max_partial = 0.0f64;
    let tail_bound;
    let mut steps = 0usize;
    loop {
        partial += term;
        max_partial = max_partial.max(partial.norm());
        if !partial.re.is_finite() || !partial.im.is_finite() {
            return Err(QError::Overflow("series partial sum overflowed".into()));
        }
        let factor = match ratio(steps)? {
            Step::Factor(f) => f,
            Step::Terminate => {
                tail_bound = 0.0;
                break;
            }
        };
        let next = term * factor;
        let rho = factor.norm().max(asym);
        if next.norm() == 0.0 {
            tail_bound = 0.0;
            break;
        }
        if rho < 1.0 - BOUNDARY_MARGIN {
            let tail = next.norm() * rho / (1.0 - rho) + next.norm();
            if term.norm() <= STOP_TERM * partial.norm().max(1e-300)
                && tail <= STOP_TAIL * partial.norm().max(1e-300)
            {
                tail_bound = tail;
                break;
            }
        }
        term = next;
        steps += 1;
        if steps >= TERM_CAP {
            return Err(QError::Cap(TERM_CAP));
        }
    }
    Ok(SideSum {
        value: partial,
        max_partial,
        abs_err: tail_bound + steps as f64 * f64::EPSILON * max_partial,
    })
}

fn combine_sides(pos: SideSum, neg: SideSum) -> EvalResult {
    let value = pos.value + neg.value;
    let peak = pos
        .max_partial
        .max(neg.max_partial)
        .max(pos.value.norm())
        .max(neg.value.norm());
    let denom = value.norm().max(1e-300);
    EvalResult {
        value,
        rel_err: (pos.abs_err + neg.abs_err) / denom + f64::EPSILON,
        cancellation_digits: (peak / denom).log10().max(0.0),
    }
}

/// Ratio generator for the k >= 0 side of a q-series.
///
/// `implicit_q` adds the unilateral (q;q)_k denominator. `power_exp` is the
/// s - r exponent of the {(-1)^k q^(k 2)} factor.
fn pos_ratio<'a>(
    num: &'a [Scalar],
    den: &'a [Scalar],
    q: Scalar,
    z: Scalar,
    implicit_q: bool,
    power_exp: i32,
) -> impl FnMut(usize) -> Result<Step> + 'a {
    let one = Scalar::new(1.0, 0.0);
    let mut qk = one; // q^k
    move |_k| {
        let mut factor = z;
        for &a in num {
            let f = one - a * qk;
            if f.norm() < POLE_TOL * (a * qk).norm().max(1.0) {
                return Ok(Step::Terminate);
            }
            factor *= f;
        }
        for &b in den {
            let f = one - b * qk;
            if f.norm() < POLE_TOL * (b * qk).norm().max(1.0) {
                return Err(QError::Pole(format!(
                    "denominator parameter {b} hits the lattice at positive index"
                )));
            }
            factor /= f;
        }
        if implicit_q {
            let f = one - q * qk;
            factor /= f;
        }
        if power_exp != 0 {
            factor *= (-qk).powi(power_exp);
        }
        qk *= q;
        Ok(Step::Factor(factor))
    }
}

/// Ratio generator for the k <= -1 side of a bilateral series, in the
/// overflow-free form (q^M - b_j)/(q^M - a_i).
fn neg_ratio<'a>(
    num: &'a [Scalar],
    den: &'a [Scalar],
    q: Scalar,
    z: Scalar,
    power_exp: i32,
) -> impl FnMut(usize) -> Result<Step> + 'a {
    let sign = if power_exp % 2 == 0 { 1.0 } else { -1.0 };
    let mut qm = Scalar::new(1.0, 0.0); // becomes q^M with M = step + 1
    move |_m| {
        qm *= q;
        let mut factor = Scalar::new(sign, 0.0) / z;
        for &b in den {
            let f = qm - b;
            if f.norm() < POLE_TOL * b.norm().max(qm.norm()).max(1e-30) {
                return Ok(Step::Terminate);
            }
            factor *= f;
        }
        for &a in num {
            let f = qm - a;
            if f.norm() < POLE_TOL * a.norm().max(qm.norm()).max(1e-30) {
                return Err(QError::Pole(format!(
                    "numerator parameter {a} hits the lattice at negative index"
                )));
            }
            factor /= f;
        }
        Ok(Step::Factor(factor))
    }
}

/// Evaluates a unilateral rφ(s-1) series.
pub fn eval_phi(spec: &SeriesSpec) -> Result<EvalResult> {
    assert_eq!(spec.kind, SeriesKind::Unilateral);
    let class = converges(spec);
    match class.verdict {
        Verdict::Diverges => {
            return Err(QError::Diverges(format!(
                "positive tail ratio {} >= 1",
                class.pos_tail_ratio
            )))
        }
        Verdict::Boundary => {
            return Err(QError::Diverges(format!(
                "tail ratio {} is within {BOUNDARY_MARGIN} of 1 (boundary)",
                class.pos_tail_ratio
            )))
        }
        Verdict::Converges => {}
    }
    let q = spec.qv();
    let power_exp = (spec.den.len() as i32 + 1) - spec.num.len() as i32;
    let side = sum_side(
        Scalar::new(1.0, 0.0),
        pos_ratio(&spec.num, &spec.den, q, spec.z, true, power_exp),
        class.pos_tail_ratio,
    )?;
    combine_sides(
        side,
        SideSum {
            value: Scalar::new(0.0, 0.0),
            max_partial: 0.0,
            abs_err: 0.0,
        },
    )
    .finite("eval_phi overflow")
}

fn psi_sides(spec: &SeriesSpec) -> Result<(SideSum, SideSum)> {
    assert_eq!(spec.kind, SeriesKind::Bilateral);
    let class = converges(spec);
    match class.verdict {
        Verdict::Diverges => {
            return Err(QError::Diverges(format!(
                "tail ratios ({}, {}) not both < 1",
                class.pos_tail_ratio, class.neg_tail_ratio
            )))
        }
        Verdict::Boundary => {
            return Err(QError::Diverges(format!(
                "tail ratios ({}, {}) within {BOUNDARY_MARGIN} of 1 (boundary)",
                class.pos_tail_ratio, class.neg_tail_ratio
            )))
        }
        Verdict::Converges => {}
    }
    let q = spec.qv();
    let power_exp = spec.den.len() as i32 - spec.num.len() as i32;
    let pos = sum_side(
        Scalar::new(1.0, 0.0),
        pos_ratio(&spec.num, &spec.den, q, spec.z, false, power_exp),
        class.pos_tail_ratio,
    )?;
    // first negative term is 1 * (step ratio at M = 1), so seed with the k = -1
    // term computed by one ratio application from 1.
    let mut gen = neg_ratio(&spec.num, &spec.den, q, spec.z, power_exp);
    let first = match gen(0)? {
        Step::Factor(f) => f,
        Step::Terminate => {
            return Ok((
                pos,
                SideSum {
                    value: Scalar::new(0.0, 0.0),
                    max_partial: 0.0,
                    abs_err: 0.0,
                },
            ))
        }
    };
    let mut m = 0usize;
    let neg = sum_side(
        first,
        move |_| {
            m += 1;
            gen(m)
        },
        class.neg_tail_ratio,
    )?;
    Ok((pos, neg))
}

/// Evaluates a bilateral rψs series as two one-sided sums.
pub fn eval_psi(spec: &SeriesSpec) -> Result<EvalResult> {
    let (pos, neg) = psi_sides(spec)?;
    combine_sides(pos, neg).finite("eval_psi overflow")
}

/// The k >= 0 and k <= -1 partial series of a bilateral sum, separately.
pub fn split_psi(spec: &SeriesSpec) -> Result<(EvalResult, EvalResult)> {
    let (pos, neg) = psi_sides(spec)?;
    let zero = SideSum {
        value: Scalar::new(0.0, 0.0),
        max_partial: 0.0,
        abs_err: 0.0,
    };
    let p = combine_sides(pos, zero).finite("split_psi overflow")?;
    let zero = SideSum {
        value: Scalar::new(0.0, 0.0),
        max_partial: 0.0,
        abs_err: 0.0,
    };
    let n = combine_sides(neg, zero).finite("split_psi overflow")?;
    Ok((p, n))
}

/// Truncation radius for the classical bilateral sum.
pub const H2_TERMS: usize = 100_000;
/// Engine floor on Re(c+d-a-b) for certified truncation.
pub const H2_MIN_S: f64 = 3.0;

/// Classical bilateral ₂H₂ at argument 1, summed for |k| <= 1e5 with an
/// integral tail bound folded into the error estimate.
pub fn eval_h2(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<EvalResult> {
    let s = (c + d - a - b).re;
    if s < H2_MIN_S {
        return Err(QError::SlowConvergence(s));
    }
    let one = Scalar::new(1.0, 0.0);
    for (name, p) in [("c", c), ("d", d)] {
        if (p.im.abs() < POLE_TOL) && p.re <= 0.5 && (p.re - p.re.round()).abs() < POLE_TOL {
            return Err(QError::Pole(format!(
                "denominator parameter {name} = {p} is a non-positive integer"
            )));
        }
    }
    let mut pos = Scalar::new(0.0, 0.0);
    let mut term = one;
    let mut max_partial = 0.0f64;
    let mut last_pos = 0.0f64;
    for k in 0..H2_TERMS {
        pos += term;
        max_partial = max_partial.max(pos.norm());
        let kk = Scalar::new(k as f64, 0.0);
        let den = (c + kk) * (d + kk);
        if den.norm() < POLE_TOL {
            return Err(QError::Pole(format!("(c+{k})(d+{k}) vanishes")));
        }
        term = term * (a + kk) * (b + kk) / den;
        last_pos = term.norm();
    }
    let mut neg = Scalar::new(0.0, 0.0);
    let mut term = one;
    let mut last_neg = 0.0f64;
    for m in 1..=H2_TERMS {
        let mm = Scalar::new(m as f64, 0.0);
        let den = (a - mm) * (b - mm);
        if den.norm() < POLE_TOL {
            return Err(QError::Pole(format!("(a-{m})(b-{m}) vanishes")));
        }
        term = term * (c - mm) * (d - mm) / den;
        neg += term;
        max_partial = max_partial.max(neg.norm());
        last_neg = term.norm();
    }
    let value = pos + neg;
    // |t_k| ~ C k^{-s}; bound the two tails by C K^{1-s}/(s-1) with C from
    // the last computed term.
    let k = H2_TERMS as f64;
    let tail = (last_pos + last_neg) * k / (s - 1.0);
    let denom = value.norm().max(1e-300);
    EvalResult {
        value,
        rel_err: tail / denom + 2.0 * k * f64::EPSILON * max_partial / denom,
        cancellation_digits: (max_partial.max(pos.norm()).max(neg.norm()) / denom)
            .log10()
            .max(0.0),
    }
    .finite("eval_h2 overflow")
}

// ---------------------------------------------------------------------------
// Convenience wrappers used by the identity catalog.
// ---------------------------------------------------------------------------

pub fn phi21(a: Scalar, b: Scalar, c: Scalar, q: QBase, z: Scalar) -> Result<EvalResult> {
    eval_phi(&SeriesSpec::phi(vec![a, b], vec![c], q, z))
}

pub fn phi10(a: Scalar, q: QBase, z: Scalar) -> Result<EvalResult> {
    eval_phi(&SeriesSpec::phi(vec![a], vec![], q, z))
}

pub fn psi22(
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
    q: QBase,
    z: Scalar,
) -> Result<EvalResult> {
    eval_psi(&SeriesSpec::psi(vec![a, b], vec![c, d], q, z))
}

pub fn psi11(a: Scalar, c: Scalar, q: QBase, z: Scalar) -> Result<EvalResult> {
    eval_psi(&SeriesSpec::psi(vec![a], vec![c], q, z))
}

/// The k >= 0 part of a bilateral sum on its own; only the positive tail
/// ratio has to be inside the unit disc.
pub fn bilateral_pos(num: &[Scalar], den: &[Scalar], q: QBase, z: Scalar) -> Result<EvalResult> {
    let asym = if num.len() == den.len() {
        z.norm()
    } else if num.len() < den.len() {
        0.0
    } else {
        f64::INFINITY
    };
    if asym >= 1.0 - BOUNDARY_MARGIN {
        return Err(QError::Diverges(format!("positive tail ratio {asym} >= 1")));
    }
    let power_exp = den.len() as i32 - num.len() as i32;
    let side = sum_side(
        Scalar::new(1.0, 0.0),
        pos_ratio(num, den, q.value(), z, false, power_exp),
        asym,
    )?;
    combine_sides(
        side,
        SideSum {
            value: Scalar::new(0.0, 0.0),
            max_partial: 0.0,
            abs_err: 0.0,
        },
    )
    .finite("bilateral_pos overflow")
}

/// Σ_k (p;q)_k ∏_{i=1}^k (c - α q^i) / ((d1, d2; q)_k) w^k, from k = 0 or 1.
///
/// This is the split-series shape the lattice checks evaluate at c = q^{1+m}:
/// the ∏(c - α q^i) factor terminates the sum there instead of producing the
/// 0·∞ structure of the raw bilateral notation.
#[allow(clippy::too_many_arguments)]
pub fn lattice_sum(
    p: Scalar,
    c: Scalar,
    alpha: Scalar,
    d1: Scalar,
    d2: Scalar,
    w: Scalar,
    q: QBase,
    from_one: bool,
) -> Result<EvalResult> {
    let qv = q.value();
    let one = Scalar::new(1.0, 0.0);
    let asym = (c * w).norm();
    if asym >= 1.0 - BOUNDARY_MARGIN {
        return Err(QError::Diverges(format!(
            "lattice sum tail ratio |c w| = {asym} >= 1"
        )));
    }
    let mut qk = one; // q^k
    let mut aq = alpha * qv; // α q^{k+1}
    let ratio = move |_k: usize| -> Result<Step> {
        let pf = one - p * qk;
        let lat = c - aq;
        if lat.norm() < POLE_TOL * c.norm().max(aq.norm()).max(1e-30) {
            return Ok(Step::Terminate);
        }
        let mut factor = pf * lat * w;
        for dpar in [d1, d2] {
            let f = one - dpar * qk;
            if f.norm() < POLE_TOL * (dpar * qk).norm().max(1.0) {
                return Err(QError::Pole(format!(
                    "lattice sum denominator parameter {dpar} hits the lattice"
                )));
            }
            factor /= f;
        }
        qk *= qv;
        aq *= qv;
        Ok(Step::Factor(factor))
    };
    let whole = sum_side(one, ratio, asym)?;
    let result = combine_sides(
        whole,
        SideSum {
            value: Scalar::new(0.0, 0.0),
            max_partial: 0.0,
            abs_err: 0.0,
        },
    );
    let result = if from_one {
        result.sub(EvalResult::ONE)
    } else {
        result
    };
    result.finite("lattice_sum overflow")
}
