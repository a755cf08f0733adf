//! Turning command-line strings into exact library values.

use std::path::Path;

use nodal_atlas::catalog::{surface_by_name, SurfaceArgs};
use nodal_atlas::multipoly::{parse_constant, parse_poly};
use nodal_atlas::{GoldenNumber, GoldenPoly};
use num_rational::BigRational;

use crate::CliError;

/// An exact constant such as `(2*tau+1)/4`. Decimals are not part of the
/// grammar and are rejected.
pub fn constant(flag: &str, src: &str) -> Result<GoldenNumber, CliError> {
    parse_constant(src).map_err(|e| CliError::Usage(format!("malformed expression for {flag} {src:?}: {e}")))
}

pub fn rational(flag: &str, src: &str) -> Result<BigRational, CliError> {
    let x = constant(flag, src)?;
    if !x.is_rational() {
        return Err(CliError::Usage(format!("{flag} {src:?} must be rational")));
    }
    Ok(x.rational_part().clone())
}

pub fn optional(flag: &str, src: &Option<String>) -> Result<Option<GoldenNumber>, CliError> {
    src.as_deref().map(|s| constant(flag, s)).transpose()
}

/// Three comma-separated rational expressions.
pub fn point(flag: &str, src: &str) -> Result<[BigRational; 3], CliError> {
    let parts: Vec<&str> = src.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("{flag} expects three comma-separated values, got {src:?}")));
    }
    Ok([rational(flag, parts[0])?, rational(flag, parts[1])?, rational(flag, parts[2])?])
}

/// `"ex,ey,ez lx,ly,lz"`.
pub fn eye_and_target(src: &str) -> Result<([BigRational; 3], [BigRational; 3]), CliError> {
    let groups: Vec<&str> = src.split_whitespace().collect();
    if groups.len() != 2 {
        return Err(CliError::Usage(format!(
            "--camera expects \"ex,ey,ez lx,ly,lz\", got {src:?}"
        )));
    }
    Ok((point("--camera", groups[0])?, point("--camera", groups[1])?))
}

/// A resolved surface with its display parameters.
pub struct Surface {
    pub label: String,
    pub form: GoldenPoly,
    pub parameters: Vec<(String, String)>,
}

/// A catalog name, or a file holding a polynomial in `x, y, z[, w]`.
/// Non-homogeneous file contents are homogenized with `w` at their degree.
pub fn surface(selector: &str, args: &SurfaceArgs) -> Result<Surface, CliError> {
    match surface_by_name(selector, args) {
        Ok((form, parameters)) => {
            return Ok(Surface {
                label: selector.to_string(),
                form,
                parameters,
            })
        }
        Err(e) if !Path::new(selector).is_file() => return Err(CliError::Usage(format!("{e}; not a readable file either"))),
        Err(_) => {}
    }
    let text = std::fs::read_to_string(selector)
        .map_err(|e| CliError::Usage(format!("cannot read surface file {selector:?}: {e}")))?;
    let p = parse_poly(text.trim()).map_err(|e| CliError::Usage(format!("malformed polynomial in {selector:?}: {e}")))?;
    let form = if p.is_homogeneous() {
        p
    } else {
        p.homogenize(p.degree())
            .map_err(|e| CliError::Usage(format!("cannot homogenize {selector:?}: {e}")))?
    };
    Ok(Surface {
        label: Path::new(selector)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| selector.to_string()),
        parameters: vec![("polynomial".to_string(), text.trim().to_string())],
        form,
    })
}
