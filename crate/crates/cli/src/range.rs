//! `start..end[:step]` value lists.

/// Upper bound on the length of one expanded range.
pub const MAX_RANGE_LEN: usize = 100_000;

/// Decimal places needed to write `s` without an exponent.
fn decimals(s: &str) -> usize {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let frac = mantissa.split_once('.').map_or(0, |(_, f)| f.len()) as i64;
    (frac - exp).clamp(0, 17) as usize
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Expands a single number or an inclusive range into its values.
///
/// Range points are rounded to the number of decimals used in `start` and
/// `step`, so `0.8..1.0:0.05` yields exactly `0.8, 0.85, 0.9, 0.95, 1.0`.
/// The step defaults to 1.
pub fn parse_f64_values(s: &str) -> Result<Vec<f64>, String> {
    let Some((start_s, rest)) = s.split_once("..") else {
        return Ok(vec![parse_f64(s)?]);
    };
    let (end_s, step_s) = match rest.split_once(':') {
        Some((e, st)) => (e, Some(st)),
        None => (rest, None),
    };
    let start = parse_f64(start_s)?;
    let end = parse_f64(end_s)?;
    let step = step_s.map(parse_f64).transpose()?.unwrap_or(1.0);
    if step <= 0.0 {
        return Err(format!("range step must be positive in `{s}`"));
    }
    if end < start {
        return Err(format!("range `{s}` is empty"));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_RANGE_LEN {
        return Err(format!("range `{s}` has more than {MAX_RANGE_LEN} points"));
    }
    let places = decimals(start_s.trim()).max(step_s.map_or(0, |st| decimals(st.trim())));
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            format!("{v:.places$}").parse().unwrap_or(v)
        })
        .collect())
}

/// Like [`parse_f64_values`] for non-negative integers.
pub fn parse_usize_values(s: &str) -> Result<Vec<usize>, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("`{t}` is not a non-negative integer"))
    };
    let Some((start_s, rest)) = s.split_once("..") else {
        return Ok(vec![parse(s)?]);
    };
    let (end_s, step_s) = match rest.split_once(':') {
        Some((e, st)) => (e, Some(st)),
        None => (rest, None),
    };
    let start = parse(start_s)?;
    let end = parse(end_s)?;
    let step = step_s.map(parse).transpose()?.unwrap_or(1);
    if step == 0 {
        return Err(format!("range step must be positive in `{s}`"));
    }
    if end < start {
        return Err(format!("range `{s}` is empty"));
    }
    if (end - start) / step + 1 > MAX_RANGE_LEN {
        return Err(format!("range `{s}` has more than {MAX_RANGE_LEN} points"));
    }
    Ok((start..=end).step_by(step).collect())
}

/// Comma-separated numbers.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_f64).collect()
}
