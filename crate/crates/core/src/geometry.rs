//! Network layout: access point, users, candidate IRS region and the
//! large-scale path loss between them.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[allow(unused_imports)]
use num_traits::Float;

/// A point in metres. `z` is the height above ground.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn horizontal_norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(self, o: Point3) -> f64 {
        self.sub(o).norm()
    }

    pub fn axis(self, i: usize) -> f64 {
        match i {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn with_axis(mut self, i: usize, v: f64) -> Point3 {
        match i {
            0 => self.x = v,
            1 => self.y = v,
            _ => self.z = v,
        }
        self
    }
}

/// Axis-aligned box of admissible IRS positions. A coordinate whose bounds
/// coincide is pinned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lower: Point3,
    pub upper: Point3,
}

impl Region {
    pub fn new(lower: Point3, upper: Point3) -> Result<Self> {
        for i in 0..3 {
            let (lo, hi) = (lower.axis(i), upper.axis(i));
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::InvalidInput(format!(
                    "region axis {i} has bounds [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, p: Point3, tol: f64) -> bool {
        (0..3).all(|i| {
            p.axis(i) >= self.lower.axis(i) - tol && p.axis(i) <= self.upper.axis(i) + tol
        })
    }

    pub fn clamp(&self, p: Point3) -> Point3 {
        let mut out = p;
        for i in 0..3 {
            out = out.with_axis(i, p.axis(i).clamp(self.lower.axis(i), self.upper.axis(i)));
        }
        out
    }

    /// Axes along which the IRS may move.
    pub fn free_axes(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| self.upper.axis(i) > self.lower.axis(i))
            .collect()
    }

    /// Uniformly spaced points along x with the other axes at their midpoints.
    pub fn x_grid(&self, step: f64) -> Vec<Point3> {
        let mid = Point3::new(
            0.0,
            0.5 * (self.lower.y + self.upper.y),
            0.5 * (self.lower.z + self.upper.z),
        );
        let span = self.upper.x - self.lower.x;
        if span <= 0.0 || step <= 0.0 {
            return alloc::vec![mid.with_axis(0, self.lower.x)];
        }
        let n = (span / step + 1e-9).floor() as usize;
        let mut pts: Vec<Point3> = (0..=n)
            .map(|i| mid.with_axis(0, self.lower.x + i as f64 * step))
            .collect();
        if self.upper.x - pts[n].x > 1e-9 {
            pts.push(mid.with_axis(0, self.upper.x));
        }
        pts
    }
}

/// AP, users and the IRS region.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGeometry {
    pub ap: Point3,
    pub users: Vec<Point3>,
    pub region: Region,
}

impl NetworkGeometry {
    pub fn new(ap: Point3, users: Vec<Point3>, region: Region) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::InvalidInput("at least one user is required".into()));
        }
        Ok(Self { ap, users, region })
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }
}

/// Elevation and azimuth of `target` seen from `from`.
///
/// Elevation is `asin(dz / d)`, azimuth is `acos(dx / d_xy)`. The azimuth is
/// undefined when the horizontal projection vanishes.
pub fn angles(from: Point3, target: Point3) -> Result<(f64, f64)> {
    let d = target.sub(from);
    let norm = d.norm();
    let hnorm = d.horizontal_norm();
    if hnorm <= 1e-12 * norm.max(1.0) || norm == 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "zero horizontal separation between ({}, {}, {}) and ({}, {}, {})",
            from.x, from.y, from.z, target.x, target.y, target.z
        )));
    }
    let elev = (d.z / norm).clamp(-1.0, 1.0).asin();
    let azim = (d.x / hnorm).clamp(-1.0, 1.0).acos();
    Ok((elev, azim))
}

/// Distance-based path loss with separate exponents for the AP-IRS and
/// IRS-user links. `rho0` is the linear gain at 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub rho0: f64,
    pub alpha_ai: f64,
    pub alpha_iu: f64,
}

impl PathLossModel {
    pub fn new(rho0: f64, alpha_ai: f64, alpha_iu: f64) -> Self {
        Self {
            rho0,
            alpha_ai,
            alpha_iu,
        }
    }

    /// Cascaded power gain `(rho0 / d_ai^a) * (rho0 / d_iu^a)`.
    pub fn cascaded(&self, d_ai: f64, d_iu: f64) -> f64 {
        (self.rho0 / d_ai.powf(self.alpha_ai)) * (self.rho0 / d_iu.powf(self.alpha_iu))
    }

    /// Per-user cascaded gain for the IRS at `s`.
    pub fn user_losses(&self, geometry: &NetworkGeometry, s: Point3) -> Vec<f64> {
        let d_ai = s.distance(geometry.ap);
        geometry
            .users
            .iter()
            .map(|u| self.cascaded(d_ai, s.distance(*u)))
            .collect()
    }
}
