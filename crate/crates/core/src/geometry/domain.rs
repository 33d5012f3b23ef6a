use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bergman_wavelet::{self, PseudoDisk};
use crate::error::{Error, Result};

type C64 = Complex64;

/// A measurable planar region.
///
/// Serialized as a tagged record, e.g. `{"shape":"disk","center":[0,0],"radius":1.0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum Domain {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    /// Annulus about the origin.
    Annulus {
        r_in: f64,
        r_out: f64,
    },
    /// Simple polygon, vertices in counterclockwise order.
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    /// Pairwise disjoint members. An empty list is the empty set.
    Union {
        members: Vec<Domain>,
    },
    Rotation {
        inner: Box<Domain>,
        angle: f64,
    },
    /// Image in the unit disc of the pseudohyperbolic disk
    /// `{u in C+ : rho(u, center) < rho}` under the Cayley map.
    HalfPlanePseudoDisk {
        center: [f64; 2],
        rho: f64,
    },
    /// The whole plane (full support of the Fock measure).
    Plane,
}

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn cross(a: C64, b: C64) -> f64 {
    a.re * b.im - a.im * b.re
}

impl Domain {
    pub fn disk(center: C64, radius: f64) -> Self {
        Domain::Disk {
            center: [center.re, center.im],
            radius,
        }
    }

    pub fn centered_disk(radius: f64) -> Self {
        Domain::disk(C64::new(0.0, 0.0), radius)
    }

    pub fn annulus(r_in: f64, r_out: f64) -> Self {
        Domain::Annulus { r_in, r_out }
    }

    /// Axis-aligned square of the given side length centered at `center`.
    pub fn square(center: C64, side: f64) -> Self {
        let h = 0.5 * side;
        Domain::Polygon {
            vertices: vec![
                [center.re - h, center.im - h],
                [center.re + h, center.im - h],
                [center.re + h, center.im + h],
                [center.re - h, center.im + h],
            ],
        }
    }

    pub fn polygon(vertices: &[C64]) -> Self {
        Domain::Polygon {
            vertices: vertices.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn rotated(self, angle: f64) -> Self {
        Domain::Rotation {
            inner: Box::new(self),
            angle,
        }
    }

    pub fn empty() -> Self {
        Domain::Union { members: vec![] }
    }

    /// Checks the structural invariants; call before trusting the indicator.
    pub fn validate(&self) -> Result<()> {
        match self {
            Domain::Disk { center, radius } => {
                if !(*radius > 0.0) || !center.iter().all(|x| x.is_finite()) {
                    return Err(Error::InvalidDomain(format!(
                        "disk radius {radius} must be positive"
                    )));
                }
            }
            Domain::Annulus { r_in, r_out } => {
                if !(*r_in >= 0.0 && r_in <= r_out) || !r_out.is_finite() {
                    return Err(Error::InvalidDomain(format!(
                        "annulus needs 0 <= r_in <= r_out, got ({r_in}, {r_out})"
                    )));
                }
            }
            Domain::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(Error::InvalidDomain(
                        "polygon needs at least 3 vertices".into(),
                    ));
                }
                let pts: Vec<C64> = vertices.iter().map(|&v| c(v)).collect();
                if signed_area(&pts) <= 0.0 {
                    return Err(Error::InvalidDomain(
                        "polygon vertices must be counterclockwise".into(),
                    ));
                }
                if !is_simple(&pts) {
                    return Err(Error::InvalidDomain("polygon edges intersect".into()));
                }
            }
            Domain::Union { members } => {
                for m in members {
                    m.validate()?;
                }
                self.check_union_disjoint()?;
            }
            Domain::Rotation { inner, angle } => {
                if !angle.is_finite() {
                    return Err(Error::InvalidDomain("rotation angle must be finite".into()));
                }
                inner.validate()?;
            }
            Domain::HalfPlanePseudoDisk { center, rho } => {
                PseudoDisk::new(c(*center), *rho)?;
            }
            Domain::Plane => {}
        }
        Ok(())
    }

    fn check_union_disjoint(&self) -> Result<()> {
        let Domain::Union { members } = self else {
            return Ok(());
        };
        if members.len() < 2 {
            return Ok(());
        }
        let r = self.bounding_radius();
        let r = if r.is_finite() { r } else { 10.0 };
        let steps = 200;
        for i in 0..=steps {
            for j in 0..=steps {
                let z = C64::new(
                    -r + 2.0 * r * (i as f64 + 0.5) / (steps as f64 + 1.0),
                    -r + 2.0 * r * (j as f64 + 0.5) / (steps as f64 + 1.0),
                );
                if members.iter().filter(|m| m.contains(z)).count() > 1 {
                    return Err(Error::InvalidDomain(format!(
                        "union members overlap near {z}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Indicator function. Boundary points may go either way.
    pub fn contains(&self, z: C64) -> bool {
        match self {
            Domain::Disk { center, radius } => (z - c(*center)).norm() < *radius,
            Domain::Annulus { r_in, r_out } => {
                let r = z.norm();
                r >= *r_in && r < *r_out
            }
            Domain::Polygon { vertices } => {
                // even-odd rule
                let n = vertices.len();
                let mut inside = false;
                for i in 0..n {
                    let a = vertices[i];
                    let b = vertices[(i + 1) % n];
                    if (a[1] > z.im) != (b[1] > z.im) {
                        let x = a[0] + (z.im - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                        if z.re < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            Domain::Union { members } => members.iter().any(|m| m.contains(z)),
            Domain::Rotation { inner, angle } => inner.contains(z * C64::from_polar(1.0, -angle)),
            Domain::HalfPlanePseudoDisk { center, rho } => {
                if z.norm() >= 1.0 {
                    return false;
                }
                match bergman_wavelet::cayley_to_halfplane(z) {
                    Ok(u) => bergman_wavelet::rho_halfplane(u, c(*center))
                        .map(|d| d < *rho)
                        .unwrap_or(false),
                    Err(_) => false,
                }
            }
            Domain::Plane => true,
        }
    }

    pub fn bounding_radius(&self) -> f64 {
        match self {
            Domain::Disk { center, radius } => c(*center).norm() + radius,
            Domain::Annulus { r_out, .. } => *r_out,
            Domain::Polygon { vertices } => {
                vertices.iter().map(|&v| c(v).norm()).fold(0.0, f64::max)
            }
            Domain::Union { members } => members
                .iter()
                .map(Domain::bounding_radius)
                .fold(0.0, f64::max),
            Domain::Rotation { inner, .. } => inner.bounding_radius(),
            Domain::HalfPlanePseudoDisk { .. } => self
                .as_euclidean_disk()
                .map(|d| d.bounding_radius())
                .unwrap_or(1.0),
            Domain::Plane => f64::INFINITY,
        }
    }

    fn as_euclidean_disk(&self) -> Option<Domain> {
        match self {
            Domain::HalfPlanePseudoDisk { center, rho } => PseudoDisk::new(c(*center), *rho)
                .ok()
                .map(|p| bergman_wavelet::map_pseudodisk(&p)),
            _ => None,
        }
    }

    /// Lebesgue area (closed form where available, otherwise polar quadrature).
    pub fn area(&self) -> f64 {
        match self {
            Domain::Disk { radius, .. } => PI * radius * radius,
            Domain::Annulus { r_in, r_out } => PI * (r_out * r_out - r_in * r_in),
            Domain::Polygon { vertices } => {
                let pts: Vec<C64> = vertices.iter().map(|&v| c(v)).collect();
                signed_area(&pts).abs()
            }
            Domain::Union { members } => members.iter().map(Domain::area).sum(),
            Domain::Rotation { inner, .. } => inner.area(),
            Domain::HalfPlanePseudoDisk { .. } => {
                self.as_euclidean_disk().map(|d| d.area()).unwrap_or(0.0)
            }
            Domain::Plane => f64::INFINITY,
        }
    }

    /// If the domain is a union of annuli centered at the origin, the rings
    /// `(r_in, r_out)`; `r_out` may be infinite for the whole plane.
    pub fn centered_rings(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Domain::Disk { center, radius } if center[0] == 0.0 && center[1] == 0.0 => {
                Some(vec![(0.0, *radius)])
            }
            Domain::Annulus { r_in, r_out } => Some(vec![(*r_in, *r_out)]),
            Domain::Plane => Some(vec![(0.0, f64::INFINITY)]),
            Domain::Union { members } => {
                let mut out = Vec::new();
                for m in members {
                    out.extend(m.centered_rings()?);
                }
                Some(out)
            }
            Domain::Rotation { inner, .. } => inner.centered_rings(),
            Domain::HalfPlanePseudoDisk { .. } => self.as_euclidean_disk()?.centered_rings(),
            _ => None,
        }
    }

    /// Mirror image under `z -> conj(z)`, i.e. `(x, xi) -> (x, -xi)`.
    pub fn reflect(&self) -> Domain {
        match self {
            Domain::Disk { center, radius } => Domain::Disk {
                center: [center[0], -center[1]],
                radius: *radius,
            },
            Domain::Annulus { .. } | Domain::Plane => self.clone(),
            Domain::Polygon { vertices } => Domain::Polygon {
                vertices: vertices.iter().rev().map(|v| [v[0], -v[1]]).collect(),
            },
            Domain::Union { members } => Domain::Union {
                members: members.iter().map(Domain::reflect).collect(),
            },
            Domain::Rotation { inner, angle } => Domain::Rotation {
                inner: Box::new(inner.reflect()),
                angle: -angle,
            },
            Domain::HalfPlanePseudoDisk { .. } => self
                .as_euclidean_disk()
                .map(|d| d.reflect())
                .unwrap_or_else(Domain::empty),
        }
    }

    /// Sub-intervals `[r0, r1]` of the ray `{r e^{i theta}, r >= 0}` inside the domain.
    pub fn radial_intervals(&self, theta: f64) -> Vec<(f64, f64)> {
        match self {
            Domain::Disk { center, radius } => {
                let cz = c(*center);
                let b = cz.re * theta.cos() + cz.im * theta.sin();
                let disc = b * b - (cz.norm_sqr() - radius * radius);
                if disc <= 0.0 {
                    return vec![];
                }
                let s = disc.sqrt();
                let (lo, hi) = (b - s, b + s);
                if hi <= 0.0 {
                    vec![]
                } else {
                    vec![(lo.max(0.0), hi)]
                }
            }
            Domain::Annulus { r_in, r_out } => {
                if r_out > r_in {
                    vec![(*r_in, *r_out)]
                } else {
                    vec![]
                }
            }
            Domain::Polygon { vertices } => {
                let d = C64::from_polar(1.0, theta);
                let n = vertices.len();
                let mut hits = Vec::new();
                for i in 0..n {
                    let p = c(vertices[i]);
                    let e = c(vertices[(i + 1) % n]) - p;
                    let den = cross(d, e);
                    if den.abs() < 1e-300 {
                        continue;
                    }
                    let r = cross(p, e) / den;
                    let s = cross(p, d) / den;
                    if r > 0.0 && (0.0..1.0).contains(&s) {
                        hits.push(r);
                    }
                }
                hits.sort_by(f64::total_cmp);
                let mut out = Vec::new();
                let mut start = if hits.len() % 2 == 1 { Some(0.0) } else { None };
                for h in hits {
                    match start.take() {
                        Some(s0) => out.push((s0, h)),
                        None => start = Some(h),
                    }
                }
                out
            }
            Domain::Union { members } => {
                let mut out: Vec<(f64, f64)> = members
                    .iter()
                    .flat_map(|m| m.radial_intervals(theta))
                    .collect();
                out.sort_by(|a, b| a.0.total_cmp(&b.0));
                out
            }
            Domain::Rotation { inner, angle } => inner.radial_intervals(theta - angle),
            Domain::HalfPlanePseudoDisk { .. } => self
                .as_euclidean_disk()
                .map(|d| d.radial_intervals(theta))
                .unwrap_or_default(),
            Domain::Plane => vec![(0.0, f64::INFINITY)],
        }
    }

    /// Angles in `[0, 2 pi)` where the radial intervals change non-smoothly.
    pub fn angular_breakpoints(&self) -> Vec<f64> {
        let mut out = match self {
            Domain::Disk { center, radius } => {
                let cz = c(*center);
                let d = cz.norm();
                if d > *radius {
                    let half = (radius / d).asin();
                    vec![cz.arg() - half, cz.arg() + half]
                } else if d == *radius {
                    vec![cz.arg() - 0.5 * PI, cz.arg() + 0.5 * PI]
                } else {
                    vec![]
                }
            }
            Domain::Annulus { .. } | Domain::Plane => vec![],
            Domain::Polygon { vertices } => vertices
                .iter()
                .filter(|v| v[0] != 0.0 || v[1] != 0.0)
                .map(|&v| c(v).arg())
                .collect(),
            Domain::Union { members } => members
                .iter()
                .flat_map(Domain::angular_breakpoints)
                .collect(),
            Domain::Rotation { inner, angle } => inner
                .angular_breakpoints()
                .into_iter()
                .map(|t| t + angle)
                .collect(),
            Domain::HalfPlanePseudoDisk { .. } => self
                .as_euclidean_disk()
                .map(|d| d.angular_breakpoints())
                .unwrap_or_default(),
        };
        for t in out.iter_mut() {
            *t = t.rem_euclid(TAU);
        }
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        out
    }
}

fn signed_area(pts: &[C64]) -> f64 {
    let n = pts.len();
    0.5 * (0..n).map(|i| cross(pts[i], pts[(i + 1) % n])).sum::<f64>()
}

fn segments_intersect(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    (d1 > 0.0) != (d2 > 0.0)
        && (d3 > 0.0) != (d4 > 0.0)
        && d1 != 0.0
        && d2 != 0.0
        && d3 != 0.0
        && d4 != 0.0
}

fn is_simple(pts: &[C64]) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in (i + 1)..n {
            // adjacent edges share a vertex
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if segments_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(x: f64, y: f64) -> C64 {
        C64::new(x, y)
    }

    #[test]
    fn membership() {
        assert!(Domain::centered_disk(1.0).contains(z(0.5, 0.0)));
        assert!(!Domain::annulus(0.5, 1.0).contains(z(0.2, 0.0)));
        assert!(Domain::square(z(0.0, 0.0), 1.0).contains(z(0.49, 0.49)));
        assert!(!Domain::square(z(0.0, 0.0), 1.0).contains(z(0.51, 0.0)));
        assert!(!Domain::empty().contains(z(0.0, 0.0)));
        let rot = Domain::square(z(0.0, 0.0), 1.0).rotated(PI / 4.0);
        assert!(rot.contains(z(0.7, 0.0)));
        assert!(!rot.contains(z(0.45, 0.45)));
    }

    #[test]
    fn serde_literal() {
        let d: Domain =
            serde_json::from_str(r#"{"shape":"disk","center":[0,0],"radius":1.0}"#).unwrap();
        assert_eq!(d, Domain::centered_disk(1.0));
        let bad =
            serde_json::from_str::<Domain>(r#"{"shape":"disk","center":[0,0],"radius":1.0,"x":1}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn validation() {
        assert!(Domain::square(z(0.0, 0.0), 1.0).validate().is_ok());
        let cw = Domain::Polygon {
            vertices: vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]],
        };
        assert!(cw.validate().is_err());
        let bowtie = Domain::Polygon {
            vertices: vec![[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]],
        };
        assert!(bowtie.validate().is_err());
        let overlap = Domain::Union {
            members: vec![Domain::centered_disk(1.0), Domain::disk(z(0.5, 0.0), 1.0)],
        };
        assert!(overlap.validate().is_err());
        let rings = Domain::Union {
            members: vec![Domain::centered_disk(0.3), Domain::annulus(0.5, 1.0)],
        };
        assert!(rings.validate().is_ok());
        assert!(Domain::annulus(1.0, 0.5).validate().is_err());
    }

    #[test]
    fn ray_intervals_match_indicator() {
        let domains = vec![
            Domain::square(z(0.0, 0.0), PI.sqrt()),
            Domain::square(z(0.9, 0.2), 0.6),
            Domain::disk(z(0.3, 0.0), 0.5),
            Domain::disk(z(1.0, 1.0), 0.4),
            Domain::annulus(0.5, 1.0),
            Domain::polygon(&[
                z(0.0, -1.0),
                z(1.0, 0.0),
                z(0.2, 0.1),
                z(0.0, 1.0),
                z(-1.0, 0.0),
            ]),
            Domain::square(z(0.0, 0.0), 1.0).rotated(0.3),
        ];
        for d in &domains {
            for i in 0..97 {
                let theta = TAU * (i as f64 + 0.37) / 97.0;
                let iv = d.radial_intervals(theta);
                for k in 0..200 {
                    let r = 2.5 * (k as f64 + 0.5) / 200.0;
                    let inside_iv = iv.iter().any(|&(a, b)| r > a && r < b);
                    let p = C64::from_polar(r, theta);
                    let near_edge = iv
                        .iter()
                        .any(|&(a, b)| (r - a).abs() < 1e-9 || (r - b).abs() < 1e-9);
                    if !near_edge {
                        assert_eq!(inside_iv, d.contains(p), "{d:?} theta={theta} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn reflection() {
        let d = Domain::polygon(&[z(0.0, 0.0), z(1.0, 0.0), z(0.0, 1.0)]);
        let r = d.reflect();
        assert!(r.validate().is_ok());
        assert!(r.contains(z(0.2, -0.2)));
        assert!(!r.contains(z(0.2, 0.2)));
    }
}
