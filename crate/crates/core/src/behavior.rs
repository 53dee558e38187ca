//! Probability weighting and the iterated map `p ← w_γ(p)`.
//!
//! `w_γ(p) = p^γ / (p^γ + (1−p)^γ)^{1/γ}`. Below `γ = 1` the interior fixed
//! point attracts every trajectory; above it the fixed point repels, and
//! trajectories fall to 0 or rise to 1.

use alloc::vec::Vec;

use crate::dynamics::DynamicsSolution;
use crate::{Error, Result, PHI, PHI_INV};

/// Smallest accepted exponent; below it `w_γ` stops being monotone.
pub const GAMMA_FLOOR: f64 = 0.3;

/// Exponent measured on gains.
pub const GAMMA_GAINS: f64 = 0.61;
/// Exponent measured on losses.
pub const GAMMA_LOSSES: f64 = 0.69;

pub const FIXED_POINT_TOLERANCE: f64 = 1e-12;
const BRACKET: (f64, f64) = (1e-9, 1.0 - 1e-9);
const BISECTION_ITERATIONS: usize = 200;

/// Distance from 0 or 1 under which a trajectory counts as absorbed.
pub const ABSORPTION_BAND: f64 = 1e-6;

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_nan() || gamma < GAMMA_FLOOR || !gamma.is_finite() {
        return Err(Error::GammaBelowFloor(gamma));
    }
    Ok(())
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(())
}

fn weight_unchecked(gamma: f64, p: f64) -> f64 {
    if p == 0.0 || p == 1.0 || gamma == 1.0 {
        return p;
    }
    let a = libm::pow(p, gamma);
    let b = libm::pow(1.0 - p, gamma);
    a / libm::pow(a + b, 1.0 / gamma)
}

/// `w_γ(p)`, exact at both endpoints and the identity at `γ = 1`.
pub fn weight(gamma: f64, p: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_probability(p)?;
    Ok(weight_unchecked(gamma, p))
}

/// Interior solution of `w_γ(p) = p`, by bisection.
///
/// One exists for `γ < 2`; from `γ = 2` on the only solutions are 0 and 1.
pub fn fixed_point(gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if gamma == 1.0 {
        return Err(Error::DegenerateGamma);
    }
    let f = |p: f64| weight_unchecked(gamma, p) - p;
    let (mut lo, mut hi) = BRACKET;
    let lo_positive = f(lo) > 0.0;
    let hi_positive = f(hi) > 0.0;
    if lo_positive == hi_positive || f(lo) == 0.0 || f(hi) == 0.0 {
        return Err(Error::NoInteriorFixedPoint(gamma));
    }
    for _ in 0..BISECTION_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ConvergedToFixedPoint,
    TrappedAtZero,
    EscapedToOne,
    /// Not expected for a monotone `w_γ`; reported as an anomaly.
    Oscillating,
    /// The step never fell below the tolerance.
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `p_0, p_1, …`
    pub points: Vec<f64>,
    pub verdict: Verdict,
}

/// Iterates `p_{n+1} = w_γ(p_n)` until a step is at most `tol`.
pub fn iterate(gamma: f64, p0: f64, max_iter: usize, tol: f64) -> Result<Trajectory> {
    check_gamma(gamma)?;
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p0));
    }
    let mut points = alloc::vec![p0];
    if gamma == 1.0 {
        return Ok(Trajectory {
            points,
            verdict: Verdict::ConvergedToFixedPoint,
        });
    }
    let mut direction = 0.0f64;
    let mut settled = false;
    let mut oscillating = false;
    let mut p = p0;
    for _ in 0..max_iter {
        let next = weight_unchecked(gamma, p);
        points.push(next);
        let step = next - p;
        if step.abs() <= tol {
            settled = true;
            break;
        }
        if direction != 0.0 && step.signum() != direction {
            oscillating = true;
        }
        direction = step.signum();
        p = next;
    }
    let last = *points.last().expect("trajectory starts at p0");
    let verdict = if oscillating {
        Verdict::Oscillating
    } else if last <= ABSORPTION_BAND {
        Verdict::TrappedAtZero
    } else if last >= 1.0 - ABSORPTION_BAND {
        Verdict::EscapedToOne
    } else if settled {
        Verdict::ConvergedToFixedPoint
    } else {
        Verdict::MaxIterations
    };
    Ok(Trajectory { points, verdict })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegimeLabel {
    /// `γ = φ⁻¹κ⁻¹`.
    Weird,
    /// `γ = φκ⁻¹`.
    Poor,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightingRegime {
    pub gamma: f64,
    pub kappa: f64,
    pub label: RegimeLabel,
}

impl WeightingRegime {
    pub fn weird(kappa: f64) -> Result<Self> {
        Self::labelled(RegimeLabel::Weird, PHI_INV, kappa)
    }

    pub fn poor(kappa: f64) -> Result<Self> {
        Self::labelled(RegimeLabel::Poor, PHI, kappa)
    }

    fn labelled(label: RegimeLabel, factor: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) || !kappa.is_finite() {
            return Err(Error::Domain("kappa must be positive"));
        }
        let gamma = factor / kappa;
        check_gamma(gamma)?;
        Ok(Self { gamma, kappa, label })
    }

    pub fn custom(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(Self {
            gamma,
            kappa: 1.0,
            label: RegimeLabel::Custom,
        })
    }

    /// Regime whose reduced capacity is set by the maturity ratio,
    /// `κ⁻¹ = M/c`.
    pub fn from_m_over_c(label: RegimeLabel, m_over_c: f64) -> Result<Self> {
        if !(m_over_c > 0.0) {
            return Err(Error::Domain("M/c must be positive"));
        }
        match label {
            RegimeLabel::Weird => Self::weird(1.0 / m_over_c),
            RegimeLabel::Poor => Self::poor(1.0 / m_over_c),
            RegimeLabel::Custom => Err(Error::CustomRegime),
        }
    }

    /// `M/c = κ⁻¹` for this regime's capacity.
    pub fn m_over_c(&self) -> f64 {
        1.0 / self.kappa
    }

    /// `None` when `γ = 1`, where every point is fixed.
    pub fn fixed_point(&self) -> Result<Option<f64>> {
        match fixed_point(self.gamma) {
            Ok(p) => Ok(Some(p)),
            Err(Error::DegenerateGamma) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

/// Maturity-to-complexity ratio at which the regime's weighting bias
/// vanishes (`γ = 1`).
pub fn bias_constraint(regime: &WeightingRegime) -> Result<f64> {
    match regime.label {
        RegimeLabel::Weird => Ok(PHI),
        RegimeLabel::Poor => Ok(PHI_INV),
        RegimeLabel::Custom => Err(Error::CustomRegime),
    }
}

/// `(1/ρ)|dρ/dm|` at `m`.
pub fn bias_ratio(solution: &DynamicsSolution, m: f64) -> Result<f64> {
    let (rho, d, _) = solution.jet(m);
    if rho == 0.0 {
        return Err(Error::Pole { m });
    }
    Ok((d / rho).abs())
}

/// Both sides of the approximate relation `(1/ρ)|ρ'| ≅ w_γ(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasComparison {
    pub ratio: f64,
    pub weight: f64,
}

pub fn bias_comparison(solution: &DynamicsSolution, m: f64, gamma: f64, p: f64) -> Result<BiasComparison> {
    Ok(BiasComparison {
        ratio: bias_ratio(solution, m)?,
        weight: weight(gamma, p)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feeling {
    Overinvestment,
    Profit,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleAccount {
    pub p0: f64,
    pub p_star: f64,
    pub outcome: f64,
    /// `outcome·(p* − p0)`.
    pub subjective_delta: f64,
    pub feeling: Feeling,
}

/// Subjective gain or loss of a start at `p0` relative to the fixed point.
/// Starts within the fixed point's own accuracy count as neutral.
pub fn business_cycle(p0: f64, gamma: f64, outcome: f64) -> Result<CycleAccount> {
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p0));
    }
    let p_star = fixed_point(gamma)?;
    let gap = p_star - p0;
    let (feeling, subjective_delta) = if gap.abs() <= FIXED_POINT_TOLERANCE {
        (Feeling::Neutral, 0.0)
    } else if gap > 0.0 {
        (Feeling::Profit, outcome * gap)
    } else {
        (Feeling::Overinvestment, outcome * gap)
    };
    Ok(CycleAccount {
        p0,
        p_star,
        outcome,
        subjective_delta,
        feeling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{canonical, solve, Amplitudes, CanonicalKind, DynamicsParams};

    #[test]
    fn endpoints_and_identity() {
        for g in [0.3, PHI_INV, 1.0, PHI, 3.0] {
            assert_eq!(weight(g, 0.0).unwrap(), 0.0);
            assert_eq!(weight(g, 1.0).unwrap(), 1.0);
        }
        assert_eq!(weight(1.0, 0.37).unwrap(), 0.37);
    }

    #[test]
    fn weight_oracle() {
        let w = weight(PHI_INV, 0.1).unwrap();
        assert!((w - 0.184_880_970_803_561_4).abs() <= 1e-12);
    }

    #[test]
    fn weight_rejects_bad_inputs() {
        assert!(matches!(weight(0.2, 0.5), Err(Error::GammaBelowFloor(_))));
        assert!(matches!(weight(0.5, 1.5), Err(Error::ProbabilityOutOfRange(_))));
        assert!(matches!(weight(0.5, -0.1), Err(Error::ProbabilityOutOfRange(_))));
    }

    #[test]
    fn fixed_point_values() {
        let p = fixed_point(PHI_INV).unwrap();
        assert!((p - 0.342_859_431_019_697_8).abs() <= 1e-12);
        assert!((weight(PHI_INV, p).unwrap() - p).abs() <= 1e-12);
        let p = fixed_point(PHI).unwrap();
        assert!((p - 0.708_864_120_430_364_8).abs() <= 1e-12);
        assert!((fixed_point(GAMMA_GAINS).unwrap() - 0.338_781_144_319_132_8).abs() <= 1e-12);
        assert!((fixed_point(GAMMA_LOSSES).unwrap() - 0.377_564_488_851_328_4).abs() <= 1e-12);
        assert!(matches!(fixed_point(1.0), Err(Error::DegenerateGamma)));
        assert!((fixed_point(1.99).unwrap() - 0.981_401_655_828_472_5).abs() <= 1e-12);
        for g in [2.0, 2.5, 4.0] {
            assert!(matches!(fixed_point(g), Err(Error::NoInteriorFixedPoint(_))));
        }
    }

    #[test]
    fn reflection_places_the_fixed_point() {
        // w_γ(p) + w_γ(1 − p) ≤ 1, so w_γ(1/2) ≤ 1/2 and the fixed point sits
        // on the side of 1/2 where w_γ(p) − p has the sign it has near 0
        for g in [PHI_INV, GAMMA_GAINS, GAMMA_LOSSES, PHI] {
            for k in 1..100 {
                let p = k as f64 / 100.0;
                assert!(weight(g, p).unwrap() + weight(g, 1.0 - p).unwrap() <= 1.0 + 1e-15);
            }
            let p_star = fixed_point(g).unwrap();
            assert_eq!(p_star < 0.5, g < 1.0);
        }
    }

    #[test]
    fn iterate_patterns() {
        let t = iterate(PHI_INV, 0.05, 10_000, 1e-13).unwrap();
        assert_eq!(t.verdict, Verdict::ConvergedToFixedPoint);
        assert!(t.points.windows(2).all(|w| w[1] >= w[0]));
        assert!((t.points.last().unwrap() - fixed_point(PHI_INV).unwrap()).abs() <= 1e-10);

        let p_star = fixed_point(PHI).unwrap();
        let t = iterate(PHI, p_star - 0.01, 10_000, 1e-13).unwrap();
        assert_eq!(t.verdict, Verdict::TrappedAtZero);
        assert!(t.points.windows(2).all(|w| w[1] <= w[0]));

        let t = iterate(PHI, p_star + 0.01, 10_000, 1e-13).unwrap();
        assert_eq!(t.verdict, Verdict::EscapedToOne);

        let p = fixed_point(PHI_INV).unwrap();
        let t = iterate(PHI_INV, p, 100, 1e-12).unwrap();
        assert_eq!(t.verdict, Verdict::ConvergedToFixedPoint);
        assert!(t.points.iter().all(|&q| (q - p).abs() <= 1e-12));

        assert_eq!(
            iterate(PHI_INV, 0.05, 2, 1e-13).unwrap().verdict,
            Verdict::MaxIterations
        );
        assert_eq!(iterate(1.0, 0.4, 10, 1e-12).unwrap().points, vec![0.4]);
    }

    #[test]
    fn regimes_and_constraints() {
        let w = WeightingRegime::weird(1.0).unwrap();
        let p = WeightingRegime::poor(1.0).unwrap();
        assert_eq!((w.gamma, p.gamma), (PHI_INV, PHI));
        let product = bias_constraint(&w).unwrap() * bias_constraint(&p).unwrap();
        assert!((product - 1.0).abs() <= 1e-15);
        assert!(matches!(
            bias_constraint(&WeightingRegime::custom(0.7).unwrap()),
            Err(Error::CustomRegime)
        ));
        // at the constraint the bias disappears
        for label in [RegimeLabel::Weird, RegimeLabel::Poor] {
            let base = WeightingRegime::from_m_over_c(label, 1.0).unwrap();
            let r = WeightingRegime::from_m_over_c(label, bias_constraint(&base).unwrap()).unwrap();
            assert!((r.gamma - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn bias_ratio_examples() {
        let p = DynamicsParams::supply(-1.0, 1.0, 1.0).unwrap();
        let s = solve(&p, Amplitudes::Pair(1.0, 0.0)).unwrap();
        let s3 = solve(&p, Amplitudes::Pair(3.0, 0.0)).unwrap();
        for m in [0.0, 1.0, 4.0] {
            assert!((bias_ratio(&s, m).unwrap() - PHI_INV).abs() <= 1e-15);
            assert!((bias_ratio(&s, m).unwrap() - bias_ratio(&s3, m).unwrap()).abs() <= 1e-15);
        }
        let a = canonical(CanonicalKind::A, 1.0).unwrap();
        assert!((bias_ratio(&a, 20.0).unwrap() - PHI_INV).abs() <= 1e-6);

        let c = canonical(CanonicalKind::C, 1.0).unwrap();
        let zero = core::f64::consts::PI / libm::sqrt(3.0);
        let at = |m: f64| bias_ratio(&c, m);
        assert!(at(0.5).is_ok());
        // the cosine factor may not round to an exact zero; a pole then shows as a huge ratio
        assert!(at(zero).map_or(true, |r| r > 1e12));
    }

    #[test]
    fn cycle_examples() {
        let p = fixed_point(PHI_INV).unwrap();
        let n = business_cycle(p, PHI_INV, 100.0).unwrap();
        assert_eq!((n.feeling, n.subjective_delta), (Feeling::Neutral, 0.0));

        let a = business_cycle(0.2, PHI_INV, 100.0).unwrap();
        assert_eq!(a.feeling, Feeling::Profit);
        assert!((a.subjective_delta - 14.285_943_101_969_777).abs() <= 1e-9);

        let b = business_cycle(0.9, PHI_INV, 100.0).unwrap();
        assert_eq!(b.feeling, Feeling::Overinvestment);
        assert!((b.subjective_delta + 55.714_056_898_030_22).abs() <= 1e-9);
    }
}
