//! Output assembly. Exact values print as rational strings p/q,
//! numeric approximations with 12 significant digits.

use avgdist_core::bounds::BoundValue;
use avgdist_core::Rational;
use std::path::PathBuf;

pub fn rat_str(r: &Rational) -> String {
    r.to_string()
}

/// 12 significant digits; positional notation for moderate exponents,
/// scientific otherwise. Half-way cases round to even (std formatting).
pub fn sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mant, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..=12).contains(&exp) {
        return sci;
    }
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 12);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let point = exp + 1; // digits left of the decimal point
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..point as usize - digits.len() {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

pub fn cell(b: &BoundValue) -> String {
    match b {
        BoundValue::Exact(r) => rat_str(r),
        BoundValue::Approx(v) => sig12(*v),
    }
}

pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, v) in widths.iter_mut().zip(row) {
            *w = (*w).max(v.len());
        }
    }
    let mut out = String::new();
    let emit = |out: &mut String, cells: &[String]| {
        let last = cells.len() - 1;
        for (j, v) in cells.iter().enumerate() {
            if j == last {
                out.push_str(v);
            } else {
                out.push_str(&format!("{v:<w$}  ", w = widths[j]));
            }
        }
        out.push('\n');
    };
    emit(&mut out, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in rows {
        emit(&mut out, row);
    }
    out
}

/// key: value lines for single-record output
pub fn render_pairs(pairs: &[(&str, String)]) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in pairs {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

pub struct Sink {
    path: Option<PathBuf>,
}

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Sink { path }
    }

    pub fn write(&self, text: &str) -> std::io::Result<()> {
        match &self.path {
            Some(p) => std::fs::write(p, text),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_positional_range() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(0.5), "0.500000000000");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(sig12(4.0_f64.ln()), "1.38629436112");
        assert_eq!(sig12(1e-3), "0.00100000000000");
    }

    #[test]
    fn sig12_scientific_fallback() {
        assert_eq!(sig12(1e-7), "1.00000000000e-7");
        assert_eq!(sig12(1e15), "1.00000000000e15");
    }

    #[test]
    fn table_alignment() {
        let t = render_table(
            &["a", "value"],
            &[vec!["1/4".into(), "1".into()], vec!["1/100".into(), "3/2".into()]],
        );
        assert_eq!(t, "a      value\n1/4    1\n1/100  3/2\n");
    }
}
