#[allow(unused_imports)] // inherent under std
use num_traits::Float;
use alloc::vec::Vec;

use super::bowen::{bowen_root, BowenParams, BowenRoot};
use super::boxdim::{box_dimension_estimate, ledrappier_dimension_estimate, BoxEstimate};
use super::cutter::CookieCutter;
use crate::interval::Interval;
use crate::measures::MarkovMeasure;
use crate::potentials::PotentialSequence;
use crate::pressure::equilibrium_markov_measure;
use crate::symbolic::SymbolicSystem;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    HausdorffViaRoot,
    BoxUpper,
    BoxLower,
    LedrappierUpper,
    LedrappierLower,
    Measure,
}

impl Which {
    pub fn name(self) -> &'static str {
        match self {
            Which::HausdorffViaRoot => "hausdorff_via_root",
            Which::BoxUpper => "box_upper",
            Which::BoxLower => "box_lower",
            Which::LedrappierUpper => "ledrappier_upper",
            Which::LedrappierLower => "ledrappier_lower",
            Which::Measure => "measure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEntry {
    pub which: Which,
    pub value: f64,
    pub bracket: Interval,
}

#[derive(Debug, Clone)]
pub struct DimensionParams {
    /// Block length of the derivative potential (1 is exact for affine cutters).
    pub locality: usize,
    pub bowen: BowenParams,
    pub box_depth: usize,
    /// Scales for box counting; empty means `r^j`, `j = 2 .. box_depth - 1`,
    /// with `r` the largest contraction ratio.
    pub epsilon_grid: Vec<f64>,
    pub ledrappier_delta: f64,
    pub tolerance: f64,
}

impl Default for DimensionParams {
    fn default() -> Self {
        Self {
            locality: 1,
            bowen: BowenParams::default(),
            box_depth: 12,
            epsilon_grid: Vec::new(),
            ledrappier_delta: 0.1,
            tolerance: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DimensionReport {
    pub bowen_root: BowenRoot,
    /// Root bracket widened by the derivative-potential modulus.
    pub s0: Interval,
    pub equilibrium: Option<MarkovMeasure>,
    /// `h/λ` at the equilibrium measure.
    pub measure_dimension: Option<Interval>,
    pub box_estimate: BoxEstimate,
    pub ledrappier: Option<BoxEstimate>,
    pub entries: Vec<DimensionEntry>,
    pub box_ordered: bool,
    pub measure_below_root: bool,
    /// `|s_0 - h_{μ*}/λ(μ*)|` at the equilibrium measure.
    pub triangle_residual: Option<f64>,
}

/// Hausdorff dimension of a cookie-cutter repeller from the Bowen equation,
/// with box-counting and equilibrium-measure cross-checks.
pub fn hausdorff_dimension_cookie_cutter(cc: &CookieCutter, params: &DimensionParams) -> Result<DimensionReport> {
    let sys = SymbolicSystem::full_shift(cc.branch_count(), 0.5)?;
    let f = cc.derivative_potential(params.locality)?;
    let root = bowen_root(&sys, &f, &params.bowen)?;
    let modulus = cc.derivative_modulus(params.locality);
    let pad = modulus * root.estimate.hi / root.growth;
    let s0 = root.certified.hull(&root.estimate).widen(pad);
    let s_mid = root.estimate.mid();

    let iv = cc.realize(params.box_depth)?;
    let grid = if params.epsilon_grid.is_empty() {
        let r = cc.max_contraction();
        (2..params.box_depth as i32).map(|j| r.powi(j)).collect()
    } else {
        params.epsilon_grid.clone()
    };
    let box_estimate = box_dimension_estimate(&iv, &grid)?;

    let mut entries = alloc::vec![
        DimensionEntry { which: Which::HausdorffViaRoot, value: s_mid, bracket: s0 },
        DimensionEntry {
            which: Which::BoxUpper,
            value: box_estimate.fit,
            bracket: Interval::new(box_estimate.fit, box_estimate.upper),
        },
        DimensionEntry {
            which: Which::BoxLower,
            value: box_estimate.fit,
            bracket: Interval::new(box_estimate.lower, box_estimate.fit),
        },
    ];

    let equilibrium = if params.locality <= 2 {
        equilibrium_markov_measure(&sys, &PotentialSequence::scaled(-s_mid, &f)).ok()
    } else {
        None
    };
    let mut measure_dimension = None;
    let mut ledrappier = None;
    if let Some(mu) = &equilibrium {
        let lambda = mu.integrate_birkhoff(&sys, &f)?;
        let lam = Interval::new(lambda - modulus, lambda + modulus);
        if let Some(d) = Interval::point(mu.entropy_exact()).checked_div(&lam) {
            entries.push(DimensionEntry { which: Which::Measure, value: d.mid(), bracket: d });
            measure_dimension = Some(d);
        }
        if let Ok(l) = ledrappier_dimension_estimate(cc, mu, params.ledrappier_delta, &grid) {
            entries.push(DimensionEntry {
                which: Which::LedrappierUpper,
                value: l.fit,
                bracket: Interval::new(l.fit, l.upper),
            });
            entries.push(DimensionEntry {
                which: Which::LedrappierLower,
                value: l.fit,
                bracket: Interval::new(l.lower, l.fit),
            });
            ledrappier = Some(l);
        }
    }
    let tol = params.tolerance;
    let triangle_residual = measure_dimension.map(|d| (d.mid() - s_mid).abs());
    Ok(DimensionReport {
        box_ordered: box_estimate.lower <= box_estimate.upper + tol,
        measure_below_root: measure_dimension.is_none_or(|d| d.lo <= s0.hi + tol),
        bowen_root: root,
        s0,
        equilibrium,
        measure_dimension,
        box_estimate,
        ledrappier,
        entries,
        triangle_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::Branch;

    #[test]
    fn middle_third_routes_agree() {
        let r = hausdorff_dimension_cookie_cutter(&CookieCutter::middle_third(), &DimensionParams::default()).unwrap();
        let d = 2f64.ln() / 3f64.ln();
        assert!(r.s0.contains(d) && r.s0.width() <= 1e-3, "{:?}", r.s0);
        assert!((r.box_estimate.fit - d).abs() < 0.03);
        assert!(r.triangle_residual.unwrap() < 1e-3);
    }

    #[test]
    fn moran_equilibrium_is_bernoulli() {
        let cc = CookieCutter::affine(&[(0.5, 0.0), (0.25, 0.75)]).unwrap();
        let r = hausdorff_dimension_cookie_cutter(&cc, &DimensionParams::default()).unwrap();
        assert!((r.s0.mid() - 0.694242).abs() < 1e-4);
        assert!(r.triangle_residual.unwrap() < 1e-3);
        let p = r.equilibrium.unwrap();
        let s = r.s0.mid();
        assert!((p.stationary()[0] - 2f64.powf(-s)).abs() < 1e-3);
    }

    #[test]
    fn perturbed_cutter_between_extremes() {
        // |g'| ∈ [1/3.2, 1/2.8]
        let mid = 0.5 * (1.0 / 3.2 + 1.0 / 2.8);
        let amp = 0.5 * (1.0 / 2.8 - 1.0 / 3.2);
        let cc = CookieCutter::new(alloc::vec![
            Branch::Sine { slope: mid, offset: 0.0, amplitude: amp },
            Branch::Sine { slope: mid, offset: 1.0 - mid, amplitude: amp },
        ])
        .unwrap();
        let params = DimensionParams { locality: 4, ..Default::default() };
        let r = hausdorff_dimension_cookie_cutter(&cc, &params).unwrap();
        let lo = 2f64.ln() / 3.2f64.ln();
        let hi = 2f64.ln() / 2.8f64.ln();
        assert!(r.s0.lo >= lo - 1e-3 && r.s0.hi <= hi + 1e-3, "{:?}", r.s0);
    }
}
