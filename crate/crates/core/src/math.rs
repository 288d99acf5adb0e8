//! Thin wrappers over `libm` so the numeric kernels compile without `std`
//! and produce bit-identical results with and without it.

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

pub fn fmax(a: f64, b: f64) -> f64 {
    if a > b {
        a
    } else {
        b
    }
}

pub fn fmin(a: f64, b: f64) -> f64 {
    if a < b {
        a
    } else {
        b
    }
}

/// splitmix64 step: the standard 64-bit finalizer-based generator.
/// Used for deriving independent child seeds from one master seed.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One-shot hash of a u64 through the splitmix64 finalizer.
pub fn hash64(x: u64) -> u64 {
    let mut s = x;
    splitmix64(&mut s)
}
