//! Market dynamics: speculative, equilibrium and out-of-equilibrium regimes.
//!
//! The out-of-equilibrium equation is a constant-coefficient second order
//! ODE. Every solution here is stored in its supply form
//! `κ ρ'' − ρ' + (M/c) ρ = 0` in the variable `m ≥ 0`. A demand policy with
//! reduced capacity `κ` has exponents `−γᵈ` in `m = −m_d`, which is the
//! supply form with `κ` replaced by `−κ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::exchange::Side;
use crate::{Error, Result, PHI, PHI_INV};

/// Discriminants with magnitude below this are treated as zero.
pub const REPEATED_TOLERANCE: f64 = 1e-12;

/// Relative tolerance of [`perfect_fit_check`].
pub const FIT_TOLERANCE: f64 = 1e-9;

/// Relative tolerance on the constancy of outcome sums.
pub const OUTCOME_SUM_TOLERANCE: f64 = 1e-9;

pub const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsParams {
    pub side: Side,
    /// Reduced capacity `κ_O`, signed.
    pub kappa: f64,
    /// Complexity `c > 0`.
    pub complexity: f64,
    /// Maturity `M ≠ 0`.
    pub maturity: f64,
    /// Payoff `P_O` at the reference point.
    pub payoff_ref: f64,
    /// Function count `m_O` at the reference point.
    pub m_ref: f64,
}

impl DynamicsParams {
    pub fn new(side: Side, kappa: f64, complexity: f64, maturity: f64) -> Result<Self> {
        let p = Self {
            side,
            kappa,
            complexity,
            maturity,
            payoff_ref: 1.0,
            m_ref: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn supply(kappa: f64, complexity: f64, maturity: f64) -> Result<Self> {
        Self::new(Side::Supply, kappa, complexity, maturity)
    }

    pub fn demand(kappa: f64, complexity: f64, maturity: f64) -> Result<Self> {
        Self::new(Side::Demand, kappa, complexity, maturity)
    }

    pub fn with_reference(mut self, payoff_ref: f64, m_ref: f64) -> Self {
        self.payoff_ref = payoff_ref;
        self.m_ref = m_ref;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kappa == 0.0 || !self.kappa.is_finite() {
            return Err(Error::Domain("kappa must be finite and non-zero"));
        }
        if !(self.complexity > 0.0) || !self.complexity.is_finite() {
            return Err(Error::Domain("complexity must be positive"));
        }
        if self.maturity == 0.0 || !self.maturity.is_finite() {
            return Err(Error::Domain("maturity must be finite and non-zero"));
        }
        Ok(())
    }

    pub fn m_over_c(&self) -> f64 {
        self.maturity / self.complexity
    }

    /// `(κ, M/c)` of the equivalent supply-form equation.
    pub fn supply_form(&self) -> (f64, f64) {
        match self.side {
            Side::Supply => (self.kappa, self.m_over_c()),
            Side::Demand => (-self.kappa, self.m_over_c()),
        }
    }
}

/// Sign reading of a zero-value speculative payoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpeculativeReading {
    /// Supply, `κ < 0`, `P_O > 0`: the payoff falls as the strategy grows.
    Impoverishment,
    /// Supply, `κ < 0`, `P_O < 0`: rising but negative payoff from harmful work.
    PersistentNegativeExternality,
    /// Supply, `κ > 0`, `P_O > 0`: successful speculation.
    SpeculativeSuccess,
    /// Supply, `κ > 0`, `P_O < 0`: harm reinforced by every new function.
    EscalatingNegativeExternality,
    /// Demand, `κ < 0`, `P_O > 0`: well-paid disposal of negative work.
    PaidCleanup,
    /// Demand, `κ < 0`, `P_O < 0`: investment with a negative payoff.
    NegativePayoffInvestment,
    /// Demand, `κ > 0`, `P_O < 0`: negative payoff rising with scale.
    ScaleRewardedDemand,
    /// Demand, `κ > 0`, `P_O > 0`: shrinking reward for cleaning up.
    DwindlingCleanupReward,
    /// `P_O = 0`.
    Null,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeculativePayoff {
    pub payoff: f64,
    pub reading: SpeculativeReading,
    /// `dP/dm > 0`.
    pub increasing: bool,
}

/// `P = P_O exp((m − m_O)/κ)`, the zero-value solution.
pub fn speculative_payoff(params: &DynamicsParams, m: f64) -> Result<SpeculativePayoff> {
    params.validate()?;
    let p0 = params.payoff_ref;
    let payoff = p0 * libm::exp((m - params.m_ref) / params.kappa);
    if !payoff.is_finite() {
        return Err(Error::Range("speculative payoff"));
    }
    use SpeculativeReading::*;
    let reading = match (params.side, params.kappa > 0.0, p0 > 0.0) {
        _ if p0 == 0.0 => Null,
        (Side::Supply, false, true) => Impoverishment,
        (Side::Supply, false, false) => PersistentNegativeExternality,
        (Side::Supply, true, true) => SpeculativeSuccess,
        (Side::Supply, true, false) => EscalatingNegativeExternality,
        (Side::Demand, false, true) => PaidCleanup,
        (Side::Demand, false, false) => NegativePayoffInvestment,
        (Side::Demand, true, false) => ScaleRewardedDemand,
        (Side::Demand, true, true) => DwindlingCleanupReward,
    };
    Ok(SpeculativePayoff {
        payoff,
        reading,
        increasing: p0 / params.kappa > 0.0,
    })
}

/// Work utility at equilibrium, `W_u = c/M`.
pub fn equilibrium_utility(params: &DynamicsParams, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain("time cost must be positive"));
    }
    if params.maturity == 0.0 {
        return Err(Error::Domain("maturity must be non-zero"));
    }
    if !(params.complexity > 0.0) {
        return Err(Error::Domain("complexity must be positive"));
    }
    Ok(params.complexity / params.maturity)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootRegime {
    RealDistinct,
    RealRepeated,
    ComplexConjugate,
}

/// Roots of `κγ² − γ + M/c = 0` (supply) or `κγ² − γ − M/c = 0` (demand).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicRoots {
    pub side: Side,
    pub kappa: f64,
    pub m_over_c: f64,
    pub regime: RootRegime,
    pub discriminant: f64,
    /// `γ₊` then `γ₋` (`γ_|±|` then `γ_|∓|` when `κ < 0`). In the complex
    /// regime the first root has positive imaginary part.
    pub roots: [Complex64; 2],
}

impl CharacteristicRoots {
    /// Constant term of the polynomial.
    pub fn constant(&self) -> f64 {
        match self.side {
            Side::Supply => self.m_over_c,
            Side::Demand => -self.m_over_c,
        }
    }

    pub fn polynomial(&self, g: Complex64) -> Complex64 {
        g * g * self.kappa - g + self.constant()
    }
}

pub fn characteristic_roots(params: &DynamicsParams) -> Result<CharacteristicRoots> {
    params.validate()?;
    let kappa = params.kappa;
    let q = match params.side {
        Side::Supply => params.m_over_c(),
        Side::Demand => -params.m_over_c(),
    };
    let disc = 1.0 - 4.0 * kappa * q;
    let k2 = 2.0 * kappa.abs();
    let sign = kappa.signum();
    let (regime, roots) = if disc.abs() <= REPEATED_TOLERANCE {
        let g = Complex64::new(1.0 / (2.0 * kappa), 0.0);
        (RootRegime::RealRepeated, [g, g])
    } else if disc > 0.0 {
        let s = libm::sqrt(disc);
        (
            RootRegime::RealDistinct,
            [
                Complex64::new((sign + s) / k2, 0.0),
                Complex64::new((sign - s) / k2, 0.0),
            ],
        )
    } else {
        let s = libm::sqrt(-disc);
        let re = sign / k2;
        (
            RootRegime::ComplexConjugate,
            [Complex64::new(re, s / k2), Complex64::new(re, -s / k2)],
        )
    };
    Ok(CharacteristicRoots {
        side: params.side,
        kappa,
        m_over_c: params.m_over_c(),
        regime,
        discriminant: disc,
        roots,
    })
}

/// Mode amplitudes handed to [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Amplitudes {
    /// One amplitude per root, in root order. For complex roots the real
    /// part `(a + b)·e^{am} cos(bm)` is kept. For a repeated root they are
    /// `(A, B)` in `(A + Bm)e^{γm}`.
    Pair(f64, f64),
    /// `2A·e^{am} cos(bm + φ₀)`; complex regime only.
    Polar { amplitude: f64, phase: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shape {
    /// `Σ A_k e^{γ_k m}`.
    Exponentials { modes: [(f64, f64); 2] },
    /// `(a + b m) e^{γ m}`.
    Repeated { a: f64, b: f64, exponent: f64 },
    /// `2A e^{σ m} cos(ω m + φ₀)`.
    Oscillating {
        amplitude: f64,
        phase: f64,
        decay: f64,
        frequency: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicsSolution {
    /// `κ` of the supply-form equation the curve satisfies.
    pub kappa: f64,
    /// `M/c` of the supply-form equation.
    pub m_over_c: f64,
    pub shape: Shape,
}

impl DynamicsSolution {
    /// Repeated roots are not among the cases the model discusses.
    pub fn outside_model_cases(&self) -> bool {
        matches!(self.shape, Shape::Repeated { .. })
    }

    /// `(amplitude, exponent)` pairs with complex modes written out.
    pub fn modes(&self) -> [(Complex64, Complex64); 2] {
        match self.shape {
            Shape::Exponentials { modes } => modes.map(|(a, g)| (Complex64::new(a, 0.0), Complex64::new(g, 0.0))),
            Shape::Repeated { a, exponent, .. } => {
                let g = Complex64::new(exponent, 0.0);
                [(Complex64::new(a, 0.0), g), (Complex64::new(0.0, 0.0), g)]
            }
            Shape::Oscillating {
                amplitude,
                phase,
                decay,
                frequency,
            } => {
                let (sin, cos) = libm::sincos(phase);
                let c = Complex64::new(amplitude * cos, amplitude * sin);
                [
                    (c, Complex64::new(decay, frequency)),
                    (c.conj(), Complex64::new(decay, -frequency)),
                ]
            }
        }
    }

    /// `(ρ, ρ', ρ'')` at `m`.
    pub fn jet(&self, m: f64) -> (f64, f64, f64) {
        match self.shape {
            Shape::Exponentials { modes } => modes.iter().fold((0.0, 0.0, 0.0), |(v, d, dd), &(a, g)| {
                let t = a * libm::exp(g * m);
                (v + t, d + g * t, dd + g * g * t)
            }),
            Shape::Repeated { a, b, exponent: g } => {
                let e = libm::exp(g * m);
                let lin = a + b * m;
                (lin * e, (g * lin + b) * e, (g * g * lin + 2.0 * b * g) * e)
            }
            Shape::Oscillating {
                amplitude,
                phase,
                decay: s,
                frequency: w,
            } => {
                let e = 2.0 * amplitude * libm::exp(s * m);
                let (sin, cos) = libm::sincos(w * m + phase);
                (
                    e * cos,
                    e * (s * cos - w * sin),
                    e * ((s * s - w * w) * cos - 2.0 * s * w * sin),
                )
            }
        }
    }

    pub fn eval(&self, m: f64) -> f64 {
        self.jet(m).0
    }

    pub fn derivative(&self, m: f64) -> f64 {
        self.jet(m).1
    }

    /// `κ ρ'' − ρ' + (M/c) ρ`.
    pub fn residual(&self, m: f64) -> f64 {
        let (v, d, dd) = self.jet(m);
        self.kappa * dd - d + self.m_over_c * v
    }

    pub fn curve(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&m| self.eval(m)).collect()
    }
}

/// General out-of-equilibrium solution for the given amplitudes.
pub fn solve(params: &DynamicsParams, amplitudes: Amplitudes) -> Result<DynamicsSolution> {
    let roots = characteristic_roots(params)?;
    // demand curves run in m = −m_d, so their exponents flip sign
    let flip = match params.side {
        Side::Supply => 1.0,
        Side::Demand => -1.0,
    };
    let (kappa, m_over_c) = params.supply_form();
    let [g1, g2] = roots.roots;
    let shape = match (roots.regime, amplitudes) {
        (RootRegime::RealDistinct, Amplitudes::Pair(a, b)) => Shape::Exponentials {
            modes: [(a, flip * g1.re), (b, flip * g2.re)],
        },
        (RootRegime::RealRepeated, Amplitudes::Pair(a, b)) => Shape::Repeated {
            a,
            b,
            exponent: flip * g1.re,
        },
        (RootRegime::ComplexConjugate, Amplitudes::Pair(a, b)) => Shape::Oscillating {
            amplitude: 0.5 * (a + b),
            phase: 0.0,
            decay: flip * g1.re,
            frequency: g1.im,
        },
        (RootRegime::ComplexConjugate, Amplitudes::Polar { amplitude, phase }) => Shape::Oscillating {
            amplitude,
            phase,
            decay: flip * g1.re,
            frequency: g1.im,
        },
        (_, Amplitudes::Polar { .. }) => return Err(Error::AmplitudeForm("real-root")),
    };
    Ok(DynamicsSolution { kappa, m_over_c, shape })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CanonicalKind {
    A,
    B,
    C,
    D,
}

impl CanonicalKind {
    pub const ALL: [CanonicalKind; 4] = [Self::A, Self::B, Self::C, Self::D];

    /// Sign of the maturities `M_s`, `M_d` the curve requires.
    pub fn maturities_positive(self) -> bool {
        matches!(self, Self::A | Self::C)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Self::C | Self::D)
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
            Self::D => "d",
        }
    }
}

/// The four unit-amplitude canonical curves for `κ > 0`.
pub fn canonical(kind: CanonicalKind, kappa: f64) -> Result<DynamicsSolution> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::Domain("canonical kappa must be positive"));
    }
    let k = kappa;
    let half_sqrt3 = 0.5 * libm::sqrt(3.0);
    let sol = match kind {
        CanonicalKind::A => DynamicsSolution {
            kappa: -k,
            m_over_c: 1.0 / k,
            shape: Shape::Exponentials {
                modes: [(1.0, -PHI / k), (1.0, PHI_INV / k)],
            },
        },
        CanonicalKind::B => DynamicsSolution {
            kappa: k,
            m_over_c: -1.0 / k,
            shape: Shape::Exponentials {
                modes: [(1.0, PHI / k), (1.0, -PHI_INV / k)],
            },
        },
        CanonicalKind::C => DynamicsSolution {
            kappa: k,
            m_over_c: 1.0 / k,
            shape: Shape::Oscillating {
                amplitude: 1.0,
                phase: 0.0,
                decay: 0.5 / k,
                frequency: half_sqrt3 / k,
            },
        },
        CanonicalKind::D => DynamicsSolution {
            kappa: -k,
            m_over_c: -1.0 / k,
            shape: Shape::Oscillating {
                amplitude: 1.0,
                phase: 0.0,
                decay: -0.5 / k,
                frequency: half_sqrt3 / k,
            },
        },
    };
    Ok(sol)
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|k| if k == n - 1 { hi } else { lo + step * k as f64 })
                .collect()
        }
    }
}

/// Default fit grid: 512 points on `[0, 5κ]`.
pub fn default_grid(kappa: f64) -> Vec<f64> {
    uniform_grid(0.0, 5.0 * kappa.abs(), DEFAULT_GRID_POINTS)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitOutcome {
    PerfectFit,
    /// Points where the supply or the demand time cost vanishes.
    ZeroPriceCrossings(Vec<f64>),
    NoFit,
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn zeros_on(s: &DynamicsSolution, grid: &[f64], out: &mut Vec<f64>) {
    let values = s.curve(grid);
    for k in 0..grid.len() {
        if values[k] == 0.0 {
            out.push(grid[k]);
        } else if k + 1 < grid.len() && values[k + 1] != 0.0 && (values[k] < 0.0) != (values[k + 1] < 0.0) {
            out.push(bisect(|m| s.eval(m), grid[k], grid[k + 1]));
        }
    }
}

/// Compares a supply and a demand curve on `grid`.
pub fn perfect_fit_check(s: &DynamicsSolution, d: &DynamicsSolution, grid: &[f64]) -> FitOutcome {
    let (vs, vd) = (s.curve(grid), d.curve(grid));
    let scale = vs.iter().chain(&vd).fold(1.0, |acc: f64, v| acc.max(v.abs()));
    let deviation = vs.iter().zip(&vd).fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs()));
    if deviation <= FIT_TOLERANCE * scale {
        return FitOutcome::PerfectFit;
    }
    let mut crossings = Vec::new();
    zeros_on(s, grid, &mut crossings);
    zeros_on(d, grid, &mut crossings);
    if crossings.is_empty() {
        return FitOutcome::NoFit;
    }
    crossings.sort_by(f64::total_cmp);
    crossings.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    FitOutcome::ZeroPriceCrossings(crossings)
}

/// Checks that the outcome sum stays constant along `m`, as the
/// out-of-equilibrium equation assumes; returns that sum.
pub fn check_outcome_sum(sums: &[f64]) -> Result<f64> {
    let (&first, rest) = sums.split_first().ok_or(Error::EmptySelection)?;
    for &found in rest {
        if (found - first).abs() > OUTCOME_SUM_TOLERANCE * first.abs().max(1.0) {
            return Err(Error::OutcomeSumNotConserved { first, found });
        }
    }
    Ok(first)
}
