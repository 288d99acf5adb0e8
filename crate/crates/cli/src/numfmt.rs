//! Number formatting for emitted files: 17 significant digits, so a reader
//! parsing the text recovers the exact f64 that was written.

pub fn full(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}
