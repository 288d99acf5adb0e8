//! Channel matrix input.
//!
//! The `--h` argument is either `identityN` for the N x N identity or a
//! path to a plain text file with one matrix row per line and entries
//! separated by whitespace. An entry is a real number, or a complex one
//! whose imaginary part carries a `j` suffix:
//!
//! ```text
//! 1.5   2j
//! 1+2j  0.3-0.25j
//! ```
//!
//! Blank lines and lines starting with `#` are skipped. A bare `j` without
//! digits is rejected; write `1j`.

use num_complex::Complex64;

pub struct ParsedMatrix {
    pub entries: Vec<Complex64>,
    pub rows: usize,
    pub cols: usize,
}

pub fn parse_matrix_arg(arg: &str) -> Result<ParsedMatrix, String> {
    if let Some(rest) = arg.strip_prefix("identity") {
        if let Ok(n) = rest.parse::<usize>() {
            if n == 0 || n > 64 {
                return Err(format!("identity size {n} out of range 1..=64"));
            }
            let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                entries[i * n + i] = Complex64::new(1.0, 0.0);
            }
            return Ok(ParsedMatrix { entries, rows: n, cols: n });
        }
        // not identityN, fall through and treat it as a path
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| format!("cannot read matrix file {arg}: {e}"))?;
    parse_matrix_text(&text)
}

pub fn parse_matrix_text(text: &str) -> Result<ParsedMatrix, String> {
    let mut grid: Vec<Vec<Complex64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split_whitespace() {
            row.push(parse_entry(tok).map_err(|e| format!("matrix line {}: {e}", idx + 1))?);
        }
        grid.push(row);
    }
    if grid.is_empty() {
        return Err("matrix file has no rows".into());
    }
    let cols = grid[0].len();
    if grid.iter().any(|r| r.len() != cols) {
        return Err("matrix rows have unequal lengths".into());
    }
    let rows = grid.len();
    Ok(ParsedMatrix { entries: grid.concat(), rows, cols })
}

fn parse_entry(tok: &str) -> Result<Complex64, String> {
    let bad = || format!("bad matrix entry '{tok}'");
    let Some(body) = tok.strip_suffix(['j', 'J']) else {
        return tok.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split off an optional real part at the last sign that is neither
    // leading nor an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().map_err(|_| bad())?;
            let im: f64 = body[i..].parse().map_err(|_| bad())?;
            Ok(Complex64::new(re, im))
        }
        None => {
            let im: f64 = body.parse().map_err(|_| bad())?;
            Ok(Complex64::new(0.0, im))
        }
    }
}
