/// The golden number `(1 + √5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;

/// `1 / φ = φ − 1 = (√5 − 1) / 2`.
pub const PHI_INV: f64 = 0.618_033_988_749_894_9;
