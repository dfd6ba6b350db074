
use crate::interval::Interval;
use crate::linalg::SmallMatrix;
use crate::measures::{kingman_limit, KingmanBracket, KingmanParams, MarkovMeasure};
use crate::potentials::PotentialSequence;
use crate::symbolic::SymbolicSystem;
use crate::{Error, Result};

/// Where the derivative data comes from.
#[derive(Debug, Clone, Copy)]
pub enum LyapunovSource<'a> {
    /// Per-symbol matrices of a linear cocycle.
    Cocycle(&'a [SmallMatrix]),
    /// A one-dimensional derivative potential `log |f'|`; norm and minimal norm coincide.
    Derivative(&'a PotentialSequence),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovReport {
    /// Limit of `(1/n) log ‖Df^n‖`.
    pub lambda_max: KingmanBracket,
    /// Limit of `(1/n) log m(Df^n)`.
    pub lambda_min: KingmanBracket,
    pub defect: f64,
    pub tolerance: f64,
    pub average_conformal: bool,
}

impl LyapunovReport {
    /// Hull of both exponent brackets.
    pub fn lambda(&self) -> Interval {
        Interval::new(self.lambda_max.lower, self.lambda_max.upper)
            .hull(&Interval::new(self.lambda_min.lower, self.lambda_min.upper))
    }
}

pub fn lyapunov_pair(
    sys: &SymbolicSystem,
    source: LyapunovSource<'_>,
    mu: &MarkovMeasure,
    params: &KingmanParams,
    tolerance: f64,
) -> Result<LyapunovReport> {
    let (hi, lo) = match source {
        LyapunovSource::Cocycle(mats) => {
            let f = PotentialSequence::cocycle_norm(mats.to_vec())?;
            let g = PotentialSequence::cocycle_min_norm(mats.to_vec())?;
            (kingman_limit(&f, mu, sys, params)?, kingman_limit(&g, mu, sys, params)?)
        }
        LyapunovSource::Derivative(f) => {
            let b = kingman_limit(f, mu, sys, params)?;
            (b.clone(), b)
        }
    };
    let defect = hi.value - lo.value;
    Ok(LyapunovReport {
        average_conformal: defect.abs() <= tolerance,
        lambda_max: hi,
        lambda_min: lo,
        defect,
        tolerance,
    })
}

/// `h_μ / λ(μ)` with the bracket propagated by interval division.
pub fn dimension_of_measure(mu: &MarkovMeasure, report: &LyapunovReport) -> Result<Interval> {
    if !report.average_conformal {
        return Err(Error::NotAverageConformal {
            defect: report.defect,
            tolerance: report.tolerance,
        });
    }
    let lambda = report.lambda();
    if lambda.lo <= 0.0 {
        return Err(Error::NonHyperbolic {
            lo: lambda.lo,
            hi: lambda.hi,
        });
    }
    let h = Interval::point(mu.entropy_exact());
    h.checked_div(&lambda).ok_or(Error::NonHyperbolic {
        lo: lambda.lo,
        hi: lambda.hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::CookieCutter;
    use alloc::vec;

    fn quick() -> KingmanParams {
        KingmanParams {
            n_exact: 10,
            mc_orbits: 16,
            mc_length: 2000,
            ..Default::default()
        }
    }

    #[test]
    fn middle_third_exponents() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let f = CookieCutter::middle_third().derivative_potential(1).unwrap();
        let mu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let r = lyapunov_pair(&sys, LyapunovSource::Derivative(&f), &mu, &quick(), 1e-6).unwrap();
        assert!((r.lambda_max.value - 3f64.ln()).abs() < 1e-12);
        assert_eq!(r.defect, 0.0);
        let d = dimension_of_measure(&mu, &r).unwrap();
        assert!((d.mid() - 0.610864 / 3f64.ln()).abs() < 1e-5);
    }

    #[test]
    fn rotations_are_conformal() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let mats = vec![
            SmallMatrix::scaled_rotation(2.0, 0.4),
            SmallMatrix::scaled_rotation(1.5, 1.9),
        ];
        let mu = MarkovMeasure::bernoulli(&[0.6, 0.4]).unwrap();
        let r = lyapunov_pair(&sys, LyapunovSource::Cocycle(&mats), &mu, &quick(), 1e-6).unwrap();
        assert!(r.defect.abs() <= 1e-9 && r.average_conformal);
        let expected = 0.6 * 2f64.ln() + 0.4 * 1.5f64.ln();
        assert!((r.lambda_max.value - expected).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn diagonal_cocycle_is_refused() {
        let sys = SymbolicSystem::full_shift(2, 0.5).unwrap();
        let mats = vec![SmallMatrix::diag(&[2.0, 0.5]), SmallMatrix::diag(&[0.5, 2.0])];
        let mu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let r = lyapunov_pair(&sys, LyapunovSource::Cocycle(&mats), &mu, &quick(), 1e-6).unwrap();
        assert!((r.defect - 0.8 * 2f64.ln()).abs() < 0.03, "{r:?}");
        assert!(matches!(
            dimension_of_measure(&mu, &r),
            Err(Error::NotAverageConformal { .. })
        ));
    }
}
