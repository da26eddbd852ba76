//! Input documents describing a surface, a deformation family or a ruled
//! surface.

use std::path::Path;

use crosscap::deformation::DeformationFamily;
use crosscap::jet::{Jet3, DEFAULT_ORDER};
use crosscap::ruled::RuledSurface;
use crosscap::surface::{Domain, SurfaceMap};
use crosscap::vec3::Vec3;
use serde::Deserialize;

use crate::CliError;

const MIN_ORDER: usize = 3;
const MAX_ORDER: usize = 20;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub a20: f64,
    pub a11: f64,
    pub a02: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub kappa: f64,
    pub a02: f64,
    #[serde(default)]
    pub a11: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphericalSpec {
    pub kappa_poly: Vec<f64>,
    pub a02: f64,
    #[serde(default)]
    pub a11: f64,
}

/// `γ(v) = Σ gamma_poly[k] v^k`, `ξ(v) = Σ xi_poly[k] v^k`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuledSpec {
    pub gamma_poly: Vec<[f64; 3]>,
    pub xi_poly: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

/// `(j, k, x, y, z)`: the coefficient of `u^j v^k`.
pub type Monomial = (usize, usize, f64, f64, f64);

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    polynomial: Option<Vec<Monomial>>,
    quadratic_crosscap: Option<QuadraticSpec>,
    circle_deformation: Option<CircleSpec>,
    spherical_deformation: Option<SphericalSpec>,
    ruled: Option<RuledSpec>,
    order: Option<usize>,
    domain: Option<DomainSpec>,
}

#[derive(Debug, Clone)]
pub enum Variant {
    Polynomial(Vec<Monomial>),
    Quadratic(QuadraticSpec),
    Circle(CircleSpec),
    Spherical(SphericalSpec),
    Ruled(RuledSpec),
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Polynomial(_) => "polynomial",
            Variant::Quadratic(_) => "quadratic_crosscap",
            Variant::Circle(_) => "circle_deformation",
            Variant::Spherical(_) => "spherical_deformation",
            Variant::Ruled(_) => "ruled",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub variant: Variant,
    pub order: usize,
    pub domain: Domain<f64>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl SurfaceSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Usage(m) => invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        let mut variants = Vec::new();
        if let Some(p) = raw.polynomial {
            variants.push(Variant::Polynomial(p));
        }
        if let Some(q) = raw.quadratic_crosscap {
            variants.push(Variant::Quadratic(q));
        }
        if let Some(c) = raw.circle_deformation {
            variants.push(Variant::Circle(c));
        }
        if let Some(s) = raw.spherical_deformation {
            variants.push(Variant::Spherical(s));
        }
        if let Some(r) = raw.ruled {
            variants.push(Variant::Ruled(r));
        }
        if variants.len() != 1 {
            return Err(invalid(format!(
                "exactly one of polynomial, quadratic_crosscap, circle_deformation, \
                 spherical_deformation, ruled is required (found {})",
                variants.len()
            )));
        }
        let variant = variants.pop().expect("one variant");

        let order = match (&variant, raw.order) {
            (_, Some(n)) => n,
            (Variant::Polynomial(p), None) => p
                .iter()
                .map(|&(j, k, ..)| j + k)
                .max()
                .unwrap_or(0)
                .max(DEFAULT_ORDER),
            _ => DEFAULT_ORDER,
        };
        if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
            return Err(invalid(format!(
                "order: {order} is outside {MIN_ORDER}..={MAX_ORDER}"
            )));
        }

        let domain = match raw.domain {
            None => Domain::default(),
            Some(d) => {
                let ok = |[a, b]: [f64; 2]| a.is_finite() && b.is_finite() && a < b;
                if !ok(d.u) || !ok(d.v) {
                    return Err(invalid("domain: each range must be finite and increasing"));
                }
                Domain {
                    u: (d.u[0], d.u[1]),
                    v: (d.v[0], d.v[1]),
                }
            }
        };

        match &variant {
            Variant::Polynomial(p) => {
                if let Some(&(j, k, ..)) = p.iter().find(|&&(j, k, ..)| j + k > order) {
                    return Err(invalid(format!(
                        "polynomial: monomial u^{j} v^{k} exceeds order {order}"
                    )));
                }
            }
            Variant::Quadratic(q) => check_a02("quadratic_crosscap", q.a02)?,
            Variant::Circle(c) => check_a02("circle_deformation", c.a02)?,
            Variant::Spherical(s) => check_a02("spherical_deformation", s.a02)?,
            Variant::Ruled(r) => {
                if r.xi_poly.is_empty() {
                    return Err(invalid("ruled.xi_poly: must not be empty"));
                }
            }
        }
        Ok(Self {
            variant,
            order,
            domain,
        })
    }

    pub fn with_order(mut self, order: Option<usize>) -> Result<Self, CliError> {
        if let Some(n) = order {
            if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
                return Err(invalid(format!(
                    "--order {n} is outside {MIN_ORDER}..={MAX_ORDER}"
                )));
            }
            self.order = n;
        }
        Ok(self)
    }

    /// The deformation family of a circle or spherical spec with `κ(0)`
    /// replaced by `kappa0` when given.
    pub fn family(&self, kappa0: Option<f64>) -> Result<Option<DeformationFamily<f64>>, CliError> {
        let (mut poly, a02, a11) = match &self.variant {
            Variant::Circle(c) => (vec![c.kappa], c.a02, c.a11),
            Variant::Spherical(s) => (s.kappa_poly.clone(), s.a02, s.a11),
            _ => return Ok(None),
        };
        if let Some(k) = kappa0 {
            if poly.is_empty() {
                poly.push(k);
            } else {
                poly[0] = k;
            }
        }
        Ok(Some(DeformationFamily::with_kappa(a02, a11, poly)?))
    }

    pub fn ruled(&self) -> Result<Option<RuledSurface<f64>>, CliError> {
        match &self.variant {
            Variant::Ruled(r) => {
                let v = |c: &[[f64; 3]]| c.iter().map(|&a| Vec3::from_array(a)).collect::<Vec<_>>();
                let order = self.order.max(r.gamma_poly.len()).max(r.xi_poly.len() + 1);
                Ok(Some(RuledSurface::from_coeffs(
                    &v(&r.gamma_poly),
                    &v(&r.xi_poly),
                    order,
                )?))
            }
            Variant::Circle(_) | Variant::Spherical(_) => {
                let fam = self.family(None)?.expect("deformation spec");
                Ok(Some(fam.ruled(self.order)?))
            }
            _ => Ok(None),
        }
    }

    pub fn surface(&self) -> Result<SurfaceMap<f64>, CliError> {
        let f = match &self.variant {
            Variant::Polynomial(p) => {
                let mut jet = Jet3::zeros(self.order);
                for &(j, k, x, y, z) in p {
                    let c = jet.coeff(j, k) + Vec3::new(x, y, z);
                    jet.x.set_coeff(j, k, c.x);
                    jet.y.set_coeff(j, k, c.y);
                    jet.z.set_coeff(j, k, c.z);
                }
                SurfaceMap::from_jet(jet)
            }
            Variant::Quadratic(q) => {
                SurfaceMap::quadratic_crosscap(q.a20, q.a11, q.a02, self.order)
            }
            Variant::Circle(_) | Variant::Spherical(_) => {
                let fam = self.family(None)?.expect("deformation spec");
                return Ok(fam.build_crosscap_on(self.order, self.domain)?);
            }
            Variant::Ruled(_) => self.ruled()?.expect("ruled spec").to_surface(),
        };
        Ok(f.with_domain(self.domain))
    }
}

fn check_a02(field: &str, a02: f64) -> Result<(), CliError> {
    if a02 > 0.0 && a02.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{field}.a02: must be positive, got {a02}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_polynomial_spec() {
        let s =
            SurfaceSpec::parse(r#"{"polynomial": [[1,0,1,0,0],[1,1,0,1,0],[0,2,0,0,1]]}"#).unwrap();
        assert_eq!(s.order, DEFAULT_ORDER);
        let f = s.surface().unwrap();
        assert_eq!(f.jet(), SurfaceMap::<f64>::standard_crosscap(6).jet());
    }

    #[test]
    fn rejects_ambiguous_and_malformed_specs() {
        assert!(SurfaceSpec::parse("{}").is_err());
        assert!(SurfaceSpec::parse(
            r#"{"quadratic_crosscap": {"a20":1,"a11":0,"a02":1}, "ruled": {"gamma_poly":[],"xi_poly":[[1,0,0]]}}"#
        )
        .is_err());
        assert!(
            SurfaceSpec::parse(r#"{"quadratic_crosscap": {"a20":1,"a11":0,"a02":-1}}"#).is_err()
        );
        assert!(SurfaceSpec::parse(r#"{"quadratic_crosscap": {"a20":1,"a11":0}}"#).is_err());
        assert!(
            SurfaceSpec::parse(r#"{"circle_deformation": {"kappa":1,"a02":2}, "colour": 3}"#)
                .is_err()
        );
        assert!(SurfaceSpec::parse(r#"{"polynomial": [[9,0,1,0,0]], "order": 4}"#).is_err());
        assert!(SurfaceSpec::parse(r#"{"quadratic_crosscap": {"a20":1,"a11":0,"a02":1}, "domain": {"u":[1,-1],"v":[-1,1]}}"#).is_err());
    }

    #[test]
    fn kappa_override_replaces_constant_term() {
        let s = SurfaceSpec::parse(r#"{"spherical_deformation": {"kappa_poly":[1, 2], "a02": 2}}"#)
            .unwrap();
        let fam = s.family(Some(3.0)).unwrap().unwrap();
        assert_eq!(fam.curve.kappa_poly(), &[3.0, 2.0]);
    }
}
