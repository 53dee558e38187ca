//! Functional law of supply and demand, capital and growth.
//!
//! Prices are time costs (`rho`), quantities are function counts (`m`). A
//! [`FrameReference`] anchors each side; the curves are obtained by
//! integrating the work utility `ρ dm/dρ = ±c` from that anchor.
//!
//! Demand-side function counts are stored as magnitudes. The `side` field
//! carries the orientation, so no formula here ever negates `m` itself.

use crate::{Error, Result};

/// Absolute tolerance under which two growth thresholds count as equal.
pub const NEUTRAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Supply,
    Demand,
}

/// Reference point `O` of one side of the market.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameReference {
    pub side: Side,
    /// Time cost at the reference point, `ρ_O > 0`.
    pub rho: f64,
    /// Function count at the reference point (a magnitude on the demand side).
    pub functions: f64,
    /// Complexity `c_O > 0`.
    pub complexity: f64,
    /// Capital `K_O`.
    pub capital: f64,
    /// Maturity `M_O ≠ 0`, 1 for an ideal process.
    pub maturity: f64,
}

impl FrameReference {
    pub fn new(side: Side, rho: f64, functions: f64, complexity: f64, capital: f64) -> Result<Self> {
        let frame = Self {
            side,
            rho,
            functions,
            complexity,
            capital,
            maturity: 1.0,
        };
        frame.validate()?;
        Ok(frame)
    }

    pub fn supply(rho: f64, functions: f64, complexity: f64, capital: f64) -> Result<Self> {
        Self::new(Side::Supply, rho, functions, complexity, capital)
    }

    pub fn demand(rho: f64, functions: f64, complexity: f64, capital: f64) -> Result<Self> {
        Self::new(Side::Demand, rho, functions, complexity, capital)
    }

    pub fn with_maturity(mut self, maturity: f64) -> Result<Self> {
        self.maturity = maturity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::Domain("reference time cost must be positive"));
        }
        if !(self.complexity > 0.0 && self.complexity.is_finite()) {
            return Err(Error::Domain("reference complexity must be positive"));
        }
        if self.maturity == 0.0 || !self.maturity.is_finite() {
            return Err(Error::Domain("reference maturity must be non-zero"));
        }
        if !self.functions.is_finite() || !self.capital.is_finite() {
            return Err(Error::Domain("reference values must be finite"));
        }
        if self.side == Side::Supply && self.functions < 0.0 {
            return Err(Error::Domain("supply function count must be non-negative"));
        }
        Ok(())
    }

    /// `m_O / c_O`, the saturation ratio of the frame.
    pub fn saturation(&self) -> f64 {
        self.functions / self.complexity
    }

    fn expect_side(&self, side: Side) -> Result<()> {
        self.validate()?;
        if self.side != side {
            return Err(Error::Domain("frame reference is on the wrong side of the market"));
        }
        Ok(())
    }
}

/// An exchange at the agreed price `ρ*` between two frames.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeSpec {
    pub supply: FrameReference,
    pub demand: FrameReference,
    /// Agreed time cost `ρ*`.
    pub rho_star: f64,
    /// Complexity of the exchanged product, shared by both sides.
    pub complexity: f64,
    /// Maturity of the exchanged product.
    pub maturity: f64,
}

impl ExchangeSpec {
    pub fn new(supply: FrameReference, demand: FrameReference, rho_star: f64, complexity: f64) -> Result<Self> {
        let spec = Self {
            supply,
            demand,
            rho_star,
            complexity,
            maturity: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_maturity(mut self, maturity: f64) -> Result<Self> {
        self.maturity = maturity;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.supply.expect_side(Side::Supply)?;
        self.demand.expect_side(Side::Demand)?;
        if !(self.rho_star > 0.0 && self.rho_star.is_finite()) {
            return Err(Error::Domain("agreed price must be positive"));
        }
        if !(self.complexity > 0.0 && self.complexity.is_finite()) {
            return Err(Error::Domain("exchanged complexity must be positive"));
        }
        if self.maturity == 0.0 || !self.maturity.is_finite() {
            return Err(Error::Domain("exchanged maturity must be non-zero"));
        }
        Ok(())
    }

    /// `r = ρ_Od / ρ_Os`.
    pub fn ratio(&self) -> f64 {
        self.demand.rho / self.supply.rho
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthRegime {
    /// Every maturity is positive.
    Virtuous,
    /// Every maturity is negative: growth paid for by negative externalities.
    Erroneous,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthReport {
    pub delta_capital: f64,
    pub ratio: f64,
    pub threshold: f64,
    pub grows: bool,
    pub regime: GrowthRegime,
}

impl GrowthReport {
    /// Whether `r > threshold` may stand in for the sign of the capital
    /// increase; this holds only when `c / M > 0`.
    pub fn threshold_rule_applies(&self, spec: &ExchangeSpec) -> bool {
        spec.complexity / spec.maturity > 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PriceDiagnostic {
    InflationaryPressure,
    DeflationaryPressure,
    Neutral,
}

fn finite(value: f64, what: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Range(what))
    }
}

/// Supply curve `ρ_s = ρ_Os · exp((m_s − m_Os) / c_s)`.
pub fn supply_price(frame: &FrameReference, functions: f64) -> Result<f64> {
    frame.expect_side(Side::Supply)?;
    let exponent = (functions - frame.functions) / frame.complexity;
    finite(frame.rho * libm::exp(exponent), "supply price")
}

/// Demand curve `ρ_d = ρ_Od · exp((m_Od − m_d) / c_d)`.
pub fn demand_price(frame: &FrameReference, functions: f64) -> Result<f64> {
    frame.expect_side(Side::Demand)?;
    let exponent = (frame.functions - functions) / frame.complexity;
    finite(frame.rho * libm::exp(exponent), "demand price")
}

/// Inverse of [`supply_price`]: the function count supplied at time cost `rho`.
pub fn supply_functions(frame: &FrameReference, rho: f64) -> Result<f64> {
    frame.expect_side(Side::Supply)?;
    if !(rho > 0.0) {
        return Err(Error::Domain("time cost must be positive"));
    }
    Ok(frame.functions + frame.complexity * libm::log(rho / frame.rho))
}

/// Inverse of [`demand_price`].
pub fn demand_functions(frame: &FrameReference, rho: f64) -> Result<f64> {
    frame.expect_side(Side::Demand)?;
    if !(rho > 0.0) {
        return Err(Error::Domain("time cost must be positive"));
    }
    Ok(frame.functions - frame.complexity * libm::log(rho / frame.rho))
}

/// Supply capital `K_s = c_s ρ_s [ln(ρ_s/ρ_Os) + m_Os/c_Os] + K_Os`, where
/// `complexity` is the exchanged complexity `c_s`.
pub fn supply_capital(frame: &FrameReference, complexity: f64, rho: f64) -> Result<f64> {
    frame.expect_side(Side::Supply)?;
    if !(rho > 0.0) {
        return Err(Error::Domain("supply time cost must be positive"));
    }
    let bracket = libm::log(rho / frame.rho) + frame.saturation();
    finite(complexity * rho * bracket + frame.capital, "supply capital")
}

/// Demand capital `K_d = c_d ρ_d [m_Od/c_Od − ln(ρ_d/ρ_Od)] + K_Od`.
pub fn demand_capital(frame: &FrameReference, complexity: f64, rho: f64) -> Result<f64> {
    frame.expect_side(Side::Demand)?;
    if !(rho > 0.0) {
        return Err(Error::Domain("demand time cost must be positive"));
    }
    let bracket = frame.saturation() - libm::log(rho / frame.rho);
    finite(complexity * rho * bracket + frame.capital, "demand capital")
}

/// Global capital at the agreed price with distinct side complexities
/// `c_s`, `c_d`:
/// `K = ρ*[ln((ρ*/ρ_Os)^c_s (ρ_Od/ρ*)^c_d) + (c_s/c_Os) m_Os + (c_d/c_Od) m_Od] + K_Os + K_Od`.
pub fn global_capital_split(spec: &ExchangeSpec, c_supply: f64, c_demand: f64) -> Result<f64> {
    spec.validate()?;
    let (s, d, rho) = (&spec.supply, &spec.demand, spec.rho_star);
    // The power product is taken in log space so large complexities do not overflow.
    let log_term = c_supply * libm::log(rho / s.rho) + c_demand * libm::log(d.rho / rho);
    let linear = c_supply / s.complexity * s.functions + c_demand / d.complexity * d.functions;
    finite(rho * (log_term + linear) + s.capital + d.capital, "global capital")
}

/// Global capital with both sides at the exchanged complexity `c`.
pub fn global_capital(spec: &ExchangeSpec) -> Result<f64> {
    global_capital_split(spec, spec.complexity, spec.complexity)
}

/// Capital increase with unit maturities,
/// `ΔK = c ρ* [ln(ρ_Od/ρ_Os) + m_Os/c_Os + m_Od/c_Od]`.
pub fn capital_growth(spec: &ExchangeSpec) -> Result<f64> {
    spec.validate()?;
    let bracket = libm::log(spec.ratio()) + spec.supply.saturation() + spec.demand.saturation();
    finite(spec.complexity * spec.rho_star * bracket, "capital growth")
}

fn weighted_saturation(spec: &ExchangeSpec) -> f64 {
    spec.supply.maturity * spec.supply.saturation() + spec.demand.maturity * spec.demand.saturation()
}

/// Growth threshold on `r`, `exp(−M_Os m_Os/c_Os − M_Od m_Od/c_Od)`.
pub fn growth_threshold(spec: &ExchangeSpec) -> Result<f64> {
    spec.validate()?;
    finite(libm::exp(-weighted_saturation(spec)), "growth threshold")
}

/// Maturity-adjusted growth condition of an exchange.
pub fn growth_report(spec: &ExchangeSpec) -> Result<GrowthReport> {
    spec.validate()?;
    let ratio = spec.ratio();
    let bracket = libm::log(ratio) + weighted_saturation(spec);
    let delta_capital = finite(
        spec.complexity / spec.maturity * spec.rho_star * bracket,
        "capital growth",
    )?;
    let threshold = growth_threshold(spec)?;
    let maturities = [spec.maturity, spec.supply.maturity, spec.demand.maturity];
    let regime = if maturities.iter().all(|&m| m > 0.0) {
        GrowthRegime::Virtuous
    } else if maturities.iter().all(|&m| m < 0.0) {
        GrowthRegime::Erroneous
    } else {
        GrowthRegime::Mixed
    };
    Ok(GrowthReport {
        delta_capital,
        ratio,
        threshold,
        grows: delta_capital > 0.0,
        regime,
    })
}

/// Direction of the pressure on prices when the frames move from `before`
/// to `after`: a rising growth threshold pushes `ρ_Od` up.
pub fn inflation_diagnostic(before: &ExchangeSpec, after: &ExchangeSpec) -> Result<PriceDiagnostic> {
    let delta = growth_threshold(after)? - growth_threshold(before)?;
    Ok(if delta.abs() < NEUTRAL_TOLERANCE {
        PriceDiagnostic::Neutral
    } else if delta > 0.0 {
        PriceDiagnostic::InflationaryPressure
    } else {
        PriceDiagnostic::DeflationaryPressure
    })
}

/// Maturity `M = ΣE^R / ΣE` of a product: realized outcomes over marketed ones.
pub fn maturity(realized: &[f64], marketed: &[f64]) -> Result<f64> {
    let marketed_sum: f64 = marketed.iter().sum();
    if !(marketed_sum > 0.0) {
        return Err(Error::Domain("marketed outcome sum must be strictly positive"));
    }
    let m = realized.iter().sum::<f64>() / marketed_sum;
    if m == 0.0 {
        return Err(Error::Domain("maturity must be non-zero"));
    }
    finite(m, "maturity")
}
