use crate::error::CliError;

/// `start:end:step`, with step `*k` for geometric and `k` or `+k` for
/// arithmetic progressions; `end` is inclusive.
pub fn parse_range(s: &str) -> Result<Vec<u64>, CliError> {
    let usage = |m: &str| CliError::Usage(format!("--range '{s}': {m}"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(usage("expected start:end:step"));
    }
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(&format!("bad number '{t}'")));
    let (start, end) = (num(parts[0])?, num(parts[1])?);
    if start == 0 || start > end {
        return Err(usage("need 1 ≤ start ≤ end"));
    }
    let step = parts[2].trim();
    let mut out = Vec::new();
    if let Some(k) = step.strip_prefix('*') {
        let k = num(k)?;
        if k < 2 {
            return Err(usage("multiplicative step must be at least 2"));
        }
        let mut v = start;
        while v <= end {
            out.push(v);
            v = match v.checked_mul(k) {
                Some(next) => next,
                None => break,
            };
        }
    } else {
        let k = num(step.strip_prefix('+').unwrap_or(step))?;
        if k == 0 {
            return Err(usage("additive step must be positive"));
        }
        out.extend((start..=end).step_by(k as usize));
    }
    Ok(out)
}
