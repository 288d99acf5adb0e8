//! Default parameter grids for sweeps.

/// Crossover levels swept by default.
pub const DEFAULT_MUS: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];

/// Default power grid, ascending from zero. Mixes round values with the
/// saturation onsets of the crossover levels 0.05, 0.10, ..., 0.50 and a
/// couple of approach points before each onset, so a sweep resolves the
/// knee of every curve without a fine uniform grid.
pub const STUDY_POWERS: [f64; 33] = [
    0.0,
    0.4,
    0.443700637652136,
    0.487401275304271,
    0.815858733228839,
    0.865858733228839,
    0.915858733228839,
    1.25,
    1.28947576084681,
    1.32895152169362,
    1.62047051030039,
    1.67047051030039,
    1.72047051030039,
    2.0,
    2.039600717839,
    2.079201435678,
    2.29304790375616,
    2.34304790375616,
    2.39304790375616,
    2.6,
    2.62530317679635,
    2.6506063535927,
    2.74211629784053,
    2.79211629784053,
    2.84211629784053,
    2.9,
    2.93006653339619,
    2.96013306679237,
    2.98006653339619,
    3.0,
    3.1,
    3.2,
    3.3,
];

/// Identification-study power grid: 0 to 3 in steps of 0.01.
pub fn id_powers() -> Vec<f64> {
    (0..=300).map(|k| k as f64 / 100.0).collect()
}
