//! Scalar parameters of the construction.
//!
//! `derive_params` evaluates the asymptotic formulas (natural logarithms
//! throughout); `explicit_params` takes the values verbatim so that tests can
//! use tiny grids and saturated edge probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Codegree constant `3 * sqrt(20)`.
pub fn codegree_constant() -> f64 {
    3.0 * 20f64.sqrt()
}

/// Smallest `n` accepted by [`derive_params`].
pub const MIN_DERIVED_N: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Derived,
    Explicit,
}

/// Rounding convention, echoed into every report.
pub const ROUNDING_CONVENTION: &str =
    "N = max(round(n / ln(n)^2), ceil(sqrt(n))); k = ceil(kappa * sqrt(n ln n)); eps1 = eps^3; eps2 = eps^6";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub mode: ParamMode,
    pub n: usize,
    pub epsilon: f64,
    pub beta: Option<f64>,
    pub kappa: Option<f64>,
    /// Grid side length.
    #[serde(rename = "N")]
    pub side: usize,
    /// `round(n / ln(n)^2)` before the `N^2 >= n` clamp (derived mode only).
    pub side_unclamped: Option<usize>,
    pub p: f64,
    pub k: usize,
    pub eps1: f64,
    pub eps2: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl Params {
    pub fn cells(&self) -> usize {
        self.side * self.side
    }

    /// `p * n`, the expected size of `N_3(v)`.
    pub fn pn(&self) -> f64 {
        self.p * self.n as f64
    }

    pub fn ln_n(&self) -> f64 {
        (self.n as f64).ln()
    }

    /// Re-checks every invariant; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        let strict = self.mode == ParamMode::Derived;
        check(self.n >= 1, "n >= 1")?;
        check(self.side >= 2, "N >= 2")?;
        if self.side * self.side < self.n {
            return Err(Error::GridTooSmall {
                cells: self.side * self.side,
                n: self.n,
            });
        }
        if strict {
            check(self.p > 0.0 && self.p <= 1.0, "0 < p <= 1")?;
        } else {
            check((0.0..=1.0).contains(&self.p), "0 <= p <= 1")?;
        }
        check(self.k >= 1, "k >= 1")?;
        check(self.k <= self.n, "k <= n")?;
        check(self.eps2 > 0.0, "0 < eps2")?;
        check(self.eps2 < self.eps1, "eps2 < eps1")?;
        check(self.eps1 < self.epsilon, "eps1 < epsilon")?;
        check(self.epsilon < 1.0, "epsilon < 1")?;
        let k = self.k as f64;
        if strict {
            check(self.t3 < self.t2, "t3 < t2")?;
            check(self.t2 < self.t1, "t2 < t1")?;
            check(self.t1 < k, "t1 < k")?;
        } else {
            check(self.t3 <= self.t2, "t3 <= t2")?;
            check(self.t2 <= self.t1, "t2 <= t1")?;
            check(self.t1 <= k, "t1 <= k")?;
        }
        Ok(())
    }
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Params(format!("violated: {what}")))
    }
}

fn cutoffs(n: usize, epsilon: f64) -> (f64, f64, f64) {
    let nf = n as f64;
    let ln = nf.ln();
    let t1 = (nf * ln).sqrt() / ln.ln();
    let t2 = nf.powf(0.25 + epsilon);
    let t3 = nf.powf(2.0 * epsilon);
    (t1, t2, t3)
}

/// Parameters from the asymptotic formulas.
pub fn derive_params(n: usize, epsilon: f64, beta: f64, kappa: f64) -> Result<Params> {
    if n < MIN_DERIVED_N {
        return Err(Error::Params(format!(
            "derived mode needs n >= {MIN_DERIVED_N}, got {n}"
        )));
    }
    check(epsilon > 0.0 && epsilon < 1.0, "0 < epsilon < 1")?;
    check(beta > 0.0 && beta < 1.0, "0 < beta < 1")?;
    check(kappa > 1.0, "kappa > 1")?;

    let nf = n as f64;
    let ln = nf.ln();
    let rounded = (nf / (ln * ln)).round() as usize;
    let min_side = (nf.sqrt().ceil() as usize).max(2);
    let side = rounded.max(min_side);
    let p = beta * (ln / nf).sqrt();
    if p > 1.0 {
        return Err(Error::Params(format!("p = {p} > 1")));
    }
    let k = (kappa * (nf * ln).sqrt()).ceil() as usize;
    let (t1, t2, t3) = cutoffs(n, epsilon);
    let params = Params {
        mode: ParamMode::Derived,
        n,
        epsilon,
        beta: Some(beta),
        kappa: Some(kappa),
        side,
        side_unclamped: Some(rounded),
        p,
        k,
        eps1: epsilon.powi(3),
        eps2: epsilon.powi(6),
        c: codegree_constant(),
        t1,
        t2,
        t3,
    };
    params.validate()?;
    Ok(params)
}

/// The final constants `beta = 1/2`, `kappa = 1 + epsilon`.
pub fn derive_default(n: usize, epsilon: f64) -> Result<Params> {
    derive_params(n, epsilon, 0.5, 1.0 + epsilon)
}

/// Parameters taken verbatim. Cutoffs follow the formulas, with `t1` capped
/// at `k` (and set to `k` where `ln ln n` is not positive).
pub fn explicit_params(
    n: usize,
    side: usize,
    p: f64,
    k: usize,
    epsilon: f64,
    eps1: f64,
    eps2: f64,
) -> Result<Params> {
    let (t1, t2, t3) = if n >= 2 {
        let (t1, t2, t3) = cutoffs(n, epsilon);
        let t1 = if t1.is_finite() && t1 > 0.0 {
            t1.min(k as f64)
        } else {
            k as f64
        };
        (t1, t2, t3)
    } else {
        (k as f64, 1.0, 1.0)
    };
    let params = Params {
        mode: ParamMode::Explicit,
        n,
        epsilon,
        beta: None,
        kappa: None,
        side,
        side_unclamped: None,
        p,
        k,
        eps1,
        eps2,
        c: codegree_constant(),
        t1,
        t2,
        t3,
    };
    params.validate()?;
    Ok(params)
}

/// Explicit parameters with the default tolerance hierarchy for `epsilon = 0.1`.
pub fn explicit_simple(n: usize, side: usize, p: f64, k: usize) -> Result<Params> {
    let eps = 0.1f64;
    explicit_params(n, side, p, k, eps, eps.powi(3), eps.powi(6))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent float evaluation of the formulas
    // (python: math.log, round, ceil).
    #[test]
    fn derive_n_10000() {
        let p = derive_params(10_000, 0.1, 0.5, 1.1).unwrap();
        assert_eq!(p.side, 118);
        assert_eq!(p.side_unclamped, Some(118));
        assert!((p.p - 0.015_174_271_293_851_465).abs() < 1e-15, "{}", p.p);
        assert!((p.p - 0.015_174_5).abs() < 1e-6);
        assert_eq!(p.k, 334);
        assert!((p.eps1 - 1e-3).abs() < 1e-15);
        assert!((p.eps2 - 1e-6).abs() < 1e-18);
        assert!((p.c - 13.416_407_864_998_739).abs() < 1e-12);
    }

    #[test]
    fn derive_n_100_clamps_grid() {
        let p = derive_params(100, 0.1, 0.5, 1.1).unwrap();
        assert_eq!(p.side_unclamped, Some(5));
        assert_eq!(p.side, 10);
        assert!((p.p - 0.1073).abs() < 1e-4);
        assert_eq!(p.k, 24);
    }

    #[test]
    fn beta_half_normalization() {
        for n in [100usize, 1000, 12_345, 1_000_000] {
            let p = derive_default(n, 0.1).unwrap();
            let nf = n as f64;
            let scaled = p.p * (nf / nf.ln()).sqrt();
            assert!((scaled - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn derive_rejections() {
        assert!(derive_params(99, 0.1, 0.5, 1.1).is_err());
        assert!(derive_params(1000, 0.0, 0.5, 1.1).is_err());
        assert!(derive_params(1000, 0.1, 1.0, 1.1).is_err());
        assert!(derive_params(1000, 0.1, 0.5, 1.0).is_err());
        // eps large enough that t2 = n^(1/4+eps) overtakes t1
        assert!(derive_params(1000, 0.6, 0.5, 1.6).is_err());
    }

    #[test]
    fn explicit_examples() {
        let p = explicit_simple(4, 2, 1.0, 2).unwrap();
        assert_eq!(p.side, 2);
        assert_eq!(p.p, 1.0);
        match explicit_simple(5, 2, 0.5, 3) {
            Err(Error::GridTooSmall { cells: 4, n: 5 }) => {}
            other => panic!("expected GridTooSmall, got {other:?}"),
        }
        assert!(explicit_simple(9, 3, 0.5, 3).is_ok());
        assert!(explicit_simple(9, 3, 0.0, 3).is_ok());
        let err = explicit_params(9, 3, 0.5, 3, 0.1, 0.01, 0.02).unwrap_err();
        assert!(err.to_string().contains("eps2 < eps1"), "{err}");
        let err = explicit_simple(9, 3, 0.5, 10).unwrap_err();
        assert!(err.to_string().contains("k <= n"), "{err}");
    }

    #[test]
    fn monotone_in_n() {
        let mut last = derive_default(100, 0.1).unwrap();
        for n in (150..20_000).step_by(97) {
            let cur = derive_default(n, 0.1).unwrap();
            assert!(cur.side >= last.side, "N decreased at n={n}");
            assert!(cur.k >= last.k, "k decreased at n={n}");
            assert!(cur.t3 < cur.t2 && cur.t2 < cur.t1);
            last = cur;
        }
    }

    #[test]
    fn json_round_trip() {
        let p = derive_default(2000, 0.1).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"N\":45"));
        let back: Params = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        let e = explicit_simple(9, 3, 0.5, 3).unwrap();
        let back: Params = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }
}
