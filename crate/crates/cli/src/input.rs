use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use k3vol::binaryforms::{BinaryForm, P1Point};
use k3vol::fibration::WeierstrassFibration;

use crate::output::CliError;
use crate::RunConfig;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new("io", format!("cannot read {}: {e}", path.display()), 2))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::new("parse", format!("malformed JSON: {e}"), 2))?;
    serde_json::from_value(value).map_err(|e| CliError::new("invalid_input", e.to_string(), 2))
}

#[derive(Deserialize)]
struct FibrationInput {
    g2: BinaryForm,
    g3: BinaryForm,
}

/// The fibration from `--input`, or a random one from `--seed`.
pub fn fibration(cfg: &RunConfig) -> Result<WeierstrassFibration, CliError> {
    if let Some(path) = &cfg.input {
        let raw: FibrationInput = read_json(path)?;
        log::debug!("validating fibration from {}", path.display());
        return Ok(WeierstrassFibration::validate(raw.g2, raw.g3)?);
    }
    match cfg.seed {
        Some(seed) => Ok(k3vol::sample::fibration(&mut k3vol::sample::rng(seed))?),
        None => Err(CliError::new("missing_input", "either --input or --seed is required", 2)),
    }
}

/// `re,im`, `a+bi` or a real number.
pub fn complex(s: &str) -> Result<Complex64, CliError> {
    let s = s.trim();
    let bad = || CliError::new("invalid_point", format!("cannot parse complex number {s:?}"), 2);
    let z = if let Some((re, im)) = s.split_once(',') {
        Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)
    } else {
        s.parse::<Complex64>().map_err(|_| bad())?
    };
    if z.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

/// `inf`, homogeneous `s:t`, or an affine coordinate as accepted by [`complex`].
pub fn point(s: &str) -> Result<P1Point, CliError> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "∞" {
        return Ok(P1Point::infinity());
    }
    if let Some((a, b)) = s.split_once(':') {
        return Ok(P1Point::new(complex(a)?, complex(b)?)?);
    }
    Ok(P1Point::affine(complex(s)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_syntax() {
        assert!(point("inf").unwrap().is_infinity());
        assert!(point("0:1").unwrap().is_infinity());
        let p = point("0.5,-0.25").unwrap();
        assert_eq!(p.affine_coordinate(), Some(Complex64::new(0.5, -0.25)));
        assert_eq!(complex("1+2i").unwrap(), Complex64::new(1.0, 2.0));
        assert_eq!(complex("-3").unwrap(), Complex64::new(-3.0, 0.0));
        assert!(point("0:0").is_err());
        assert!(complex("nan").is_err());
        assert!(complex("x").is_err());
    }
}
