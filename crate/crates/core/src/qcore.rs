//! q-shifted factorials (x;q)_n for any integer n, infinite products (x;q)_∞
//! with certified truncation, and multi-argument products.

use crate::error::{QError, Result, POLE_TOL};
use crate::numerics::{EvalResult, Scalar};

/// Default truncation threshold for infinite products: the geometric tail
/// majorant |x| |q|^N / (1 - |q|) must fall below this before we stop.
pub const QPOCH_INF_EPS: f64 = 1e-16;

/// Base of a q-series; the constructor enforces |q| < 1 strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QBase {
    q: Scalar,
}

impl QBase {
    pub fn new(q: Scalar) -> Result<QBase> {
        if q.norm() >= 1.0 {
            return Err(QError::Diverges(format!("|q| = {} is not < 1", q.norm())));
        }
        if !q.re.is_finite() || !q.im.is_finite() {
            return Err(QError::Parse("q is not finite".into()));
        }
        Ok(QBase { q })
    }

    pub fn value(&self) -> Scalar {
        self.q
    }
}

/// Finite or infinite product order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(i64),
    Infinite,
}

/// (x;q)_∞ = ∏_{i≥0} (1 - x q^i), truncated once the geometric majorant
/// certifies the tail; the tail bound is folded into the error estimate.
pub fn qpoch_inf(x: Scalar, q: QBase) -> EvalResult {
    qpoch_inf_eps(x, q, QPOCH_INF_EPS)
}

pub fn qpoch_inf_eps(x: Scalar, q: QBase, eps: f64) -> EvalResult {
    let qn = q.value().norm();
    let xn = x.norm();
    if xn == 0.0 {
        return EvalResult::ONE;
    }
    let mut prod = Scalar::new(1.0, 0.0);
    let mut xq = x; // x q^i
    let mut n = 0usize;
    let mut bound = xn / (1.0 - qn);
    while bound >= eps && n < 100_000 {
        prod *= Scalar::new(1.0, 0.0) - xq;
        xq *= q.value();
        bound *= qn;
        n += 1;
    }
    // Remaining factors differ from 1 by at most `bound` in total.
    EvalResult::with_err(prod, bound + n as f64 * f64::EPSILON)
}

/// (x;q)_n for any integer n.
///
/// n >= 0 is the direct product ∏_{i=0}^{n-1}(1 - x q^i); n < 0 uses the
/// reciprocal product ∏_{j=1}^{|n|} 1/(1 - x q^{-j}), consistent with the
/// infinite-product ratio definition.
pub fn qpoch(x: Scalar, q: QBase, n: i64) -> Result<EvalResult> {
    if n >= 0 {
        let mut prod = Scalar::new(1.0, 0.0);
        let mut xq = x;
        for _ in 0..n {
            prod *= Scalar::new(1.0, 0.0) - xq;
            xq *= q.value();
        }
        return Ok(EvalResult::with_err(prod, n as f64 * f64::EPSILON));
    }
    let m = -n;
    let mut prod = Scalar::new(1.0, 0.0);
    let mut qinv_pow = Scalar::new(1.0, 0.0);
    let qinv = Scalar::new(1.0, 0.0) / q.value();
    for j in 1..=m {
        qinv_pow *= qinv;
        let factor = Scalar::new(1.0, 0.0) - x * qinv_pow;
        if factor.norm() < POLE_TOL * (x * qinv_pow).norm().max(1.0) {
            return Err(QError::Pole(format!(
                "qpoch({x}, q, {n}): factor 1 - x q^(-{j}) vanishes"
            )));
        }
        prod *= factor;
    }
    EvalResult::with_err(1.0 / prod, m as f64 * f64::EPSILON).finite("qpoch overflow")
}

/// Product of q-shifted factorials over a list of arguments.
pub fn qpoch_list(xs: &[Scalar], q: QBase, n: Order) -> Result<EvalResult> {
    let mut acc = EvalResult::ONE;
    for (idx, &x) in xs.iter().enumerate() {
        let factor = match n {
            Order::Infinite => qpoch_inf(x, q),
            Order::Finite(k) => qpoch(x, q, k).map_err(|e| match e {
                QError::Pole(msg) => QError::Pole(format!("index {idx}: {msg}")),
                other => other,
            })?,
        };
        acc = acc.mul(factor);
    }
    acc.finite("qpoch_list overflow")
}

/// Ratio of two lists of infinite q-shifted factorials, the prefactor shape
/// every identity in the catalog uses.
pub fn qpoch_inf_ratio(num: &[Scalar], den: &[Scalar], q: QBase) -> Result<EvalResult> {
    let n = qpoch_list(num, q, Order::Infinite)?;
    let d = qpoch_list(den, q, Order::Infinite)?;
    if d.value.norm() < 1e-250 {
        return Err(QError::Pole(
            "denominator infinite product vanishes".to_string(),
        ));
    }
    n.div(d).finite("qpoch_inf_ratio overflow")
}

/// Index range scanned by [`near_q_power`].
pub const LATTICE_SCAN: i64 = 60;

/// Returns `Some(i)` when `x` lies within `rel_tol` (relative to the larger
/// of 1 and |q^i|) of a lattice point q^i with |i| <= `LATTICE_SCAN`.
pub fn near_q_power(x: Scalar, q: Scalar, rel_tol: f64) -> Option<i64> {
    let mut pow = Scalar::new(1.0, 0.0);
    for i in 0..=LATTICE_SCAN {
        if (x - pow).norm() <= rel_tol * pow.norm().max(1.0) {
            return Some(i);
        }
        pow *= q;
    }
    let qinv = Scalar::new(1.0, 0.0) / q;
    let mut pow = qinv;
    for i in 1..=LATTICE_SCAN {
        if (x - pow).norm() <= rel_tol * pow.norm().max(1.0) {
            return Some(-i);
        }
        if !pow.re.is_finite() {
            break;
        }
        pow *= qinv;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qb(q: f64) -> QBase {
        QBase::new(Scalar::new(q, 0.0)).unwrap()
    }

    fn s(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn rejects_bad_base() {
        assert!(QBase::new(s(1.0)).is_err());
        assert!(QBase::new(s(-1.2)).is_err());
        assert!(QBase::new(Scalar::new(0.8, 0.7)).is_err());
    }

    #[test]
    fn qpoch_inf_of_zero_is_one() {
        assert_eq!(qpoch_inf(s(0.0), qb(0.5)).value, s(1.0));
    }

    #[test]
    fn qpoch_inf_direct_product_oracle() {
        // (0.5; 0.5)_inf by a 60-factor direct product; tail < 1e-17
        let mut oracle = 1.0f64;
        let mut xq = 0.5f64;
        for _ in 0..60 {
            oracle *= 1.0 - xq;
            xq *= 0.5;
        }
        let got = qpoch_inf(s(0.5), qb(0.5)).value;
        assert!(
            (got.re - oracle).abs() < 1e-14,
            "got {} want {}",
            got.re,
            oracle
        );
        assert!((got.re - 0.2887880951).abs() < 1e-9);
    }

    #[test]
    fn qpoch_inf_two_truncation_thresholds_agree() {
        for &(x, q) in &[(0.3, 0.3), (1.7, 0.9), (-0.8, 0.6)] {
            let loose = qpoch_inf_eps(s(x), qb(q), 1e-16).value;
            let tight = qpoch_inf_eps(s(x), qb(q), 1e-20).value;
            assert!((loose - tight).norm() <= 1e-14 * tight.norm());
        }
    }

    #[test]
    fn qpoch_finite_examples() {
        assert_eq!(
            qpoch(Scalar::new(0.2, 1.1), qb(0.5), 0).unwrap().value,
            s(1.0)
        );
        // (0.25; 0.5)_{-1} = 1/(1 - 0.25/0.5) = 2
        let v = qpoch(s(0.25), qb(0.5), -1).unwrap().value;
        assert!((v - s(2.0)).norm() < 1e-14);
        // (0.5; 0.5)_2 = (1-0.5)(1-0.25)
        let v = qpoch(s(0.5), qb(0.5), 2).unwrap().value;
        assert!((v - s(0.375)).norm() < 1e-15);
    }

    #[test]
    fn qpoch_negative_pole() {
        // x = q^2 makes the j = 2 factor vanish
        let q = qb(0.4);
        assert!(matches!(qpoch(s(0.16), q, -3), Err(QError::Pole(_))));
    }

    #[test]
    fn qpoch_list_examples() {
        let q = qb(0.5);
        assert_eq!(qpoch_list(&[], q, Order::Finite(5)).unwrap().value, s(1.0));
        let v = qpoch_list(&[s(0.5), s(0.25)], q, Order::Finite(1))
            .unwrap()
            .value;
        assert!((v - s(0.375)).norm() < 1e-15);
        let a = s(0.3);
        let b = s(-0.4);
        let prod = qpoch_list(&[a, b], q, Order::Infinite).unwrap().value;
        let sep = qpoch_inf(a, q).value * qpoch_inf(b, q).value;
        assert!((prod - sep).norm() < 1e-14 * sep.norm());
    }

    #[test]
    fn recurrence_over_index_range() {
        // (x;q)_{n+1} = (x;q)_n (1 - x q^n) for n in [-10, 10]
        let x = Scalar::new(0.31, -0.42);
        let q = QBase::new(Scalar::new(0.55, 0.2)).unwrap();
        for n in -10..=10i64 {
            let lhs = qpoch(x, q, n + 1).unwrap().value;
            let rhs = qpoch(x, q, n).unwrap().value
                * (Scalar::new(1.0, 0.0) - x * q.value().powi(n as i32));
            assert!(
                (lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-12),
                "n = {n}"
            );
        }
    }

    proptest! {
        // Splice identity: (x;q)_n (x q^n; q)_inf = (x;q)_inf
        #[test]
        fn splice_identity(
            xr in -2.0f64..2.0,
            xi in -2.0f64..2.0,
            qm in 0.05f64..0.9,
            qa in 0.0f64..std::f64::consts::TAU,
            n in -10i64..=10,
        ) {
            let x = Scalar::new(xr, xi);
            let q = QBase::new(Scalar::from_polar(qm, qa)).unwrap();
            let whole = qpoch_inf(x, q);
            if let Ok(head) = qpoch(x, q, n) {
                // skip draws too close to a lattice zero for 1e-12 comparison
                prop_assume!(head.value.norm() > 1e-4 && head.value.norm() < 1e4);
                let shifted = qpoch_inf(x * q.value().powi(n as i32), q);
                let lhs = head.mul(shifted).value;
                prop_assert!(
                    (lhs - whole.value).norm() <= 1e-12 * whole.value.norm().max(1e-8),
                    "x={x} q={} n={n}", q.value()
                );
            }
        }
    }
}
