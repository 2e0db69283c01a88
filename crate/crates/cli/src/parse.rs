use num_complex::Complex64;

/// Parses comma-separated complex numbers such as `0.5,0.3+0.2i,-i,2e-1-1e-1i`.
pub fn parse_point(text: &str) -> Result<Vec<Complex64>, String> {
    text.split(',')
        .map(|part| {
            parse_complex(part).ok_or_else(|| format!("cannot parse {part:?} as a complex number"))
        })
        .collect()
}

fn parse_complex(raw: &str) -> Option<Complex64> {
    let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| matches!(bytes[p], b'+' | b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (body[..p].parse::<f64>().ok()?, &body[p..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}
