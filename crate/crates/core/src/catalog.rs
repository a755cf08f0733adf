//! Named surfaces: the icosahedral invariants, the sextic and decic
//! families built from them, and record/bound tables.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactnum::{tau, GoldenNumber};
use crate::icosahedral::{is_invariant, IcosaGroup};
use crate::multipoly::{parse_constant, parse_poly, MultiPoly};

type P = MultiPoly<GoldenNumber>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("node bound is defined for degree at least 3, got {0}")]
    DegreeTooSmall(u32),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
}

fn poly(src: &str) -> P {
    parse_poly(src).expect("catalog source parses")
}

/// The degree-6 invariant `(τ²x²−y²)(τ²y²−z²)(τ²z²−x²)`.
pub fn invariant_q() -> P {
    poly("(tau^2*x^2 - y^2)*(tau^2*y^2 - z^2)*(tau^2*z^2 - x^2)")
}

/// The degree-10 invariant
/// `(x²−τ⁴y²)(y²−τ⁴z²)(z²−τ⁴x²)(x+y+z)(x+y−z)(x−y+z)(x−y−z)`.
pub fn invariant_r() -> P {
    poly("(x^2 - tau^4*y^2)*(y^2 - tau^4*z^2)*(z^2 - tau^4*x^2)*(x+y+z)*(x+y-z)*(x-y+z)*(x-y-z)")
}

/// `x² + y² + z²`.
pub fn invariant_quadric() -> P {
    poly("x^2 + y^2 + z^2")
}

/// The projective unit sphere `x² + y² + z² − w²`.
pub fn sphere() -> P {
    poly("x^2 + y^2 + z^2 - w^2")
}

/// `x² + y² + z² − c·w²`.
pub fn sphere_with_radius_sq(c: &GoldenNumber) -> P {
    &invariant_quadric() - &P::monomial(c.clone(), [0, 0, 0, 2])
}

/// `α = (2τ+1)/4`, the sextic parameter carrying the extra orbit of nodes.
pub fn barth_sextic_alpha() -> GoldenNumber {
    (&(&tau() * &GoldenNumber::from_int(2)) + &GoldenNumber::one())
        .checked_div(&GoldenNumber::from_int(4))
        .expect("nonzero")
}

/// `Q − α·(x²+y²+z²−w²)²·w²`: the homogenized affine family
/// `Q − α(x²+y²+z²−1)²`.
pub fn sextic_family(alpha: &GoldenNumber) -> P {
    let k = sphere();
    let w2 = P::monomial(GoldenNumber::one(), [0, 0, 0, 2]);
    &invariant_q() - &(&(&k * &k) * &w2).scale(alpha)
}

/// Shape parameters of the decic family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecicParams {
    /// Weight of the sphere term.
    pub beta: GoldenNumber,
    /// Squared radius of the second sphere.
    pub c: GoldenNumber,
}

/// `R − β·w²·(x²+y²+z²−w²)²·(x²+y²+z²−c·w²)²`.
pub fn decic_family(params: &DecicParams) -> P {
    let k = sphere();
    let l = sphere_with_radius_sq(&params.c);
    let w2 = P::monomial(GoldenNumber::one(), [0, 0, 0, 2]);
    let sphere_term = &(&(&k * &k) * &(&l * &l)) * &w2;
    &invariant_r() - &sphere_term.scale(&params.beta)
}

/// The decic parameters selected by
/// [`derive_decic_parameters`](crate::singularities::derive_decic_parameters):
/// `c = 2 − τ` and `β = −(3 + 5τ)/8`, where two critical values of
/// `R/(K²L²)` on a mirror plane coincide.
pub fn barth_decic_params() -> DecicParams {
    let t = tau();
    DecicParams {
        beta: -(&(&GoldenNumber::from_int(3) + &(&t * &GoldenNumber::from_int(5))) * &GoldenNumber::from_ratio(1, 8)),
        c: &GoldenNumber::from_int(2) - &t,
    }
}

/// `x² + y² + z² + (1+λ²)·w²`: smooth with no real points for every λ.
pub fn empty_quadric_family(lambda: &GoldenNumber) -> P {
    let coeff = &GoldenNumber::one() + &(lambda * lambda);
    &invariant_quadric() + &P::monomial(coeff, [0, 0, 0, 2])
}

/// Upper bound `⌊4d(d−1)²/9⌋` on the number of nodes of a degree-`d`
/// surface in projective 3-space.
pub fn miyaoka_bound(d: u32) -> Result<u64, CatalogError> {
    if d < 3 {
        return Err(CatalogError::DegreeTooSmall(d));
    }
    let d = d as u64;
    Ok(4 * d * (d - 1) * (d - 1) / 9)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecordEntry {
    pub degree: u32,
    pub nodes: u64,
    pub attribution: &'static str,
    pub year: u32,
    /// The count is known to be the maximum possible in this degree.
    pub maximal: bool,
    pub note: &'static str,
}

/// Best known node counts for the symmetric record surfaces.
pub fn record_table() -> Vec<RecordEntry> {
    vec![
        RecordEntry {
            degree: 6,
            nodes: 65,
            attribution: "Barth",
            year: 1996,
            maximal: true,
            note: "maximal (Jaffe-Ruberman)",
        },
        RecordEntry {
            degree: 8,
            nodes: 168,
            attribution: "Endrass",
            year: 1997,
            maximal: false,
            note: "record",
        },
        RecordEntry {
            degree: 10,
            nodes: 345,
            attribution: "Barth",
            year: 1996,
            maximal: false,
            note: "record, bound 360 open",
        },
        RecordEntry {
            degree: 12,
            nodes: 600,
            attribution: "Sarti",
            year: 2001,
            maximal: false,
            note: "record",
        },
    ]
}

type FormFn = dyn Fn(&GoldenNumber) -> P + Send + Sync;

/// A one-parameter family of homogeneous surfaces.
#[derive(Clone)]
pub struct SurfaceFamily {
    pub name: &'static str,
    pub degree: u32,
    pub parameter_name: &'static str,
    pub provenance: &'static str,
    /// Expected node count for generic members, when known.
    pub generic_nodes: Option<usize>,
    /// `true` when every member is invariant under the icosahedral group.
    pub icosahedral: bool,
    form: Arc<FormFn>,
}

impl SurfaceFamily {
    pub fn form(&self, param: &GoldenNumber) -> P {
        (self.form)(param)
    }
}

impl fmt::Debug for SurfaceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SurfaceFamily")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .finish()
    }
}

pub fn sextic_surface_family() -> SurfaceFamily {
    SurfaceFamily {
        name: "barth-sextic-family",
        degree: 6,
        parameter_name: "alpha",
        provenance: "Barth 1996: Q - alpha*(x^2+y^2+z^2-1)^2, homogenized with w",
        generic_nodes: Some(45),
        icosahedral: true,
        form: Arc::new(sextic_family),
    }
}

/// The decic family in `β` with the second sphere fixed at `c`.
pub fn decic_surface_family(c: GoldenNumber) -> SurfaceFamily {
    SurfaceFamily {
        name: "barth-decic-family",
        degree: 10,
        parameter_name: "beta",
        provenance: "Barth 1996: R combined with the sphere; shape R - beta*w^2*K^2*(x^2+y^2+z^2-c*w^2)^2",
        generic_nodes: None,
        icosahedral: true,
        form: Arc::new(move |beta| {
            decic_family(&DecicParams {
                beta: beta.clone(),
                c: c.clone(),
            })
        }),
    }
}

pub fn empty_quadric_surface_family() -> SurfaceFamily {
    SurfaceFamily {
        name: "empty-quadric-family",
        degree: 2,
        parameter_name: "lambda",
        provenance: "positive definite quadric",
        generic_nodes: Some(0),
        icosahedral: true,
        form: Arc::new(empty_quadric_family),
    }
}

/// Listing entry for `catalog list`.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub degree: u32,
    pub parameter: &'static str,
    pub default_parameter: Option<String>,
    /// Node count at the default parameters.
    pub expected_nodes: Option<u64>,
    pub description: &'static str,
}

pub fn surfaces() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "barth-sextic",
            degree: 6,
            parameter: "alpha",
            default_parameter: Some(barth_sextic_alpha().to_string()),
            expected_nodes: Some(65),
            description: "Q - alpha*K^2*w^2 at alpha = (2*tau+1)/4",
        },
        CatalogEntry {
            name: "generic-sextic",
            degree: 6,
            parameter: "alpha",
            default_parameter: Some("1".into()),
            expected_nodes: Some(45),
            description: "generic member of the sextic family",
        },
        CatalogEntry {
            name: "barth-decic",
            degree: 10,
            parameter: "beta, c",
            default_parameter: Some({
                let p = barth_decic_params();
                format!("beta={}, c={}", p.beta, p.c)
            }),
            expected_nodes: Some(345),
            description: "R - beta*w^2*K^2*L^2 with L = x^2+y^2+z^2-c*w^2",
        },
        CatalogEntry {
            name: "sphere",
            degree: 2,
            parameter: "-",
            default_parameter: None,
            expected_nodes: Some(0),
            description: "x^2+y^2+z^2-w^2",
        },
        CatalogEntry {
            name: "empty-quadric",
            degree: 2,
            parameter: "-",
            default_parameter: None,
            expected_nodes: Some(0),
            description: "x^2+y^2+z^2+w^2",
        },
    ]
}

/// Fixed parameters the CLI may pin for a named surface.
#[derive(Clone, Debug, Default)]
pub struct SurfaceArgs {
    pub alpha: Option<GoldenNumber>,
    pub beta: Option<GoldenNumber>,
    pub c: Option<GoldenNumber>,
}

/// Resolves a named surface to its homogeneous form, with the parameters
/// used as display strings. Unset parameters take their catalog defaults.
pub fn surface_by_name(
    name: &str,
    args: &SurfaceArgs,
) -> Result<(P, Vec<(String, String)>), CatalogError> {
    match name {
        "barth-sextic" | "generic-sextic" => {
            let alpha = args.alpha.clone().unwrap_or_else(|| {
                if name == "barth-sextic" {
                    barth_sextic_alpha()
                } else {
                    GoldenNumber::one()
                }
            });
            let params = vec![("alpha".to_string(), alpha.to_string())];
            Ok((sextic_family(&alpha), params))
        }
        "barth-decic" => {
            let p = match (&args.beta, &args.c) {
                (Some(b), Some(c)) => DecicParams {
                    beta: b.clone(),
                    c: c.clone(),
                },
                (b, c) => {
                    let d = barth_decic_params();
                    DecicParams {
                        beta: b.clone().unwrap_or(d.beta),
                        c: c.clone().unwrap_or(d.c),
                    }
                }
            };
            let params = vec![
                ("beta".to_string(), p.beta.to_string()),
                ("c".to_string(), p.c.to_string()),
            ];
            Ok((decic_family(&p), params))
        }
        "sphere" => Ok((sphere(), vec![])),
        "empty-quadric" => Ok((empty_quadric_family(&GoldenNumber::zero()), vec![])),
        other => Err(CatalogError::UnknownSurface(other.to_string())),
    }
}

/// Result of one exact invariance identity.
#[derive(Clone, Debug, Serialize)]
pub struct InvarianceCheck {
    pub form: String,
    pub invariant: bool,
}

/// The invariants, the quadric, and members of both families at a few
/// parameters, each checked against every element of `group`.
pub fn check_invariants(group: &IcosaGroup) -> Vec<InvarianceCheck> {
    let decic = barth_decic_params();
    let mut forms: Vec<(String, P)> = vec![
        ("Q".into(), invariant_q()),
        ("R".into(), invariant_r()),
        ("K".into(), invariant_quadric()),
    ];
    for alpha in ["0", "1", "(2*tau+1)/4", "-7/3 + sqrt5"] {
        let a = parse_constant(alpha).expect("literal");
        forms.push((format!("sextic(alpha={a})"), sextic_family(&a)));
    }
    for beta in ["1".to_string(), decic.beta.to_string()] {
        let params = DecicParams {
            beta: parse_constant(&beta).expect("literal"),
            c: decic.c.clone(),
        };
        forms.push((format!("decic(beta={}, c={})", params.beta, params.c), decic_family(&params)));
    }
    forms
        .into_iter()
        .map(|(form, p)| InvarianceCheck {
            invariant: is_invariant(group, &p),
            form,
        })
        .collect()
}
