//! Uniform planar array responses, Rician small-scale fading and the
//! cascaded AP-IRS-user rows.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geometry::{angles, NetworkGeometry, PathLossModel, Point3};
use crate::linalg::CVector;
#[allow(unused_imports)]
use num_traits::Float;

/// Planar IRS with `m_v x m_h` elements and spacing `spacing` in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayShape {
    pub m_v: usize,
    pub m_h: usize,
    pub spacing: f64,
}

impl ArrayShape {
    /// Array with `m` elements arranged in rows of `m_h`.
    pub fn new(m: usize, m_h: usize, spacing: f64) -> Result<Self> {
        if m == 0 || m_h == 0 || m % m_h != 0 {
            return Err(Error::InvalidInput(alloc::format!(
                "{m} elements cannot be arranged in rows of {m_h}"
            )));
        }
        Ok(Self {
            m_v: m / m_h,
            m_h,
            spacing,
        })
    }

    pub fn len(&self) -> usize {
        self.m_v * self.m_h
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Array response for elevation `elev` and azimuth `azim`, ordered as the
/// Kronecker product of the vertical and horizontal factors.
pub fn array_response(shape: &ArrayShape, elev: f64, azim: f64) -> CVector {
    let kv = -2.0 * PI * shape.spacing * elev.sin() * azim.cos();
    let kh = -2.0 * PI * shape.spacing * elev.sin() * azim.sin();
    CVector::from_fn(shape.len(), |idx, _| {
        let mv = (idx / shape.m_h) as f64;
        let mh = (idx % shape.m_h) as f64;
        Complex64::from_polar(1.0, kv * mv + kh * mh)
    })
}

/// Circularly symmetric unit-variance complex Gaussian.
pub fn complex_gaussian<R: RngCore>(rng: &mut R) -> Complex64 {
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    Complex64::new(a * FRAC_1_SQRT_2, b * FRAC_1_SQRT_2)
}

/// `sqrt(beta/(1+beta)) a + sqrt(1/(1+beta)) n` with `n ~ CN(0, I)`.
pub fn rician_sample<R: RngCore>(a: &CVector, beta: f64, rng: &mut R) -> CVector {
    let nlos = CVector::from_fn(a.len(), |_, _| complex_gaussian(rng));
    rician_combine(a, &nlos, beta)
}

fn rician_combine(los: &CVector, nlos: &CVector, beta: f64) -> CVector {
    let kl = (beta / (1.0 + beta)).sqrt();
    let kn = (1.0 / (1.0 + beta)).sqrt();
    los * Complex64::new(kl, 0.0) + nlos * Complex64::new(kn, 0.0)
}

/// Static channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    pub array: ArrayShape,
    pub path_loss: PathLossModel,
    /// Linear Rician factors of the AP-IRS and IRS-user links.
    pub rician_ai: f64,
    pub rician_iu: f64,
    pub los_only: bool,
}

/// Channels of one realization evaluated at a given IRS position.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadedChannels {
    /// Rows without path loss, `conj(r_k) .* g`.
    pub normalized: Vec<CVector>,
    /// Cascaded path loss per user.
    pub losses: Vec<f64>,
}

impl CascadedChannels {
    /// Rows including path loss.
    pub fn rows(&self) -> Vec<CVector> {
        self.normalized
            .iter()
            .zip(self.losses.iter())
            .map(|(q, l)| q * Complex64::new(l.sqrt(), 0.0))
            .collect()
    }

    /// Rows scaled by `sqrt(scale * L_k)`, e.g. `scale = P / sigma^2`.
    pub fn scaled_rows(&self, scale: f64) -> Vec<CVector> {
        self.normalized
            .iter()
            .zip(self.losses.iter())
            .map(|(q, l)| q * Complex64::new((scale * l).sqrt(), 0.0))
            .collect()
    }
}

/// One fading realization. The scattered components are drawn once from
/// the seed and reused for every IRS position, so the channel is a
/// deterministic function of the position.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub model: ChannelModel,
    nlos_ai: Option<CVector>,
    nlos_iu: Vec<CVector>,
}

impl ChannelRealization {
    /// Pure line-of-sight channel.
    pub fn los(model: ChannelModel) -> Self {
        Self {
            model: ChannelModel {
                los_only: true,
                ..model
            },
            nlos_ai: None,
            nlos_iu: Vec::new(),
        }
    }

    /// Realization drawn from `seed`. Falls back to line of sight when the
    /// model is flagged so.
    pub fn draw(model: ChannelModel, num_users: usize, seed: u64) -> Self {
        if model.los_only {
            return Self::los(model);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = model.array.len();
        let nlos_ai = CVector::from_fn(m, |_, _| complex_gaussian(&mut rng));
        let nlos_iu = (0..num_users)
            .map(|_| CVector::from_fn(m, |_, _| complex_gaussian(&mut rng)))
            .collect();
        Self {
            model,
            nlos_ai: Some(nlos_ai),
            nlos_iu,
        }
    }

    pub fn is_los(&self) -> bool {
        self.nlos_ai.is_none()
    }

    /// AP-IRS channel `g` and IRS-user channels `r_k` at IRS position `s`.
    pub fn links(&self, geometry: &NetworkGeometry, s: Point3) -> Result<(CVector, Vec<CVector>)> {
        let arr = &self.model.array;
        let (e, a) = angles(s, geometry.ap)?;
        let mut g = array_response(arr, e, a);
        let mut r = Vec::with_capacity(geometry.num_users());
        for u in &geometry.users {
            let (e, a) = angles(s, *u)?;
            r.push(array_response(arr, e, a));
        }
        if let Some(n_ai) = &self.nlos_ai {
            g = rician_combine(&g, n_ai, self.model.rician_ai);
            for (rk, nk) in r.iter_mut().zip(self.nlos_iu.iter()) {
                *rk = rician_combine(rk, nk, self.model.rician_iu);
            }
        }
        Ok((g, r))
    }

    /// Cascaded rows and path losses at IRS position `s`.
    pub fn cascaded(&self, geometry: &NetworkGeometry, s: Point3) -> Result<CascadedChannels> {
        let (g, r) = self.links(geometry, s)?;
        let normalized = r
            .iter()
            .map(|rk| rk.zip_map(&g, |a, b| a.conj() * b))
            .collect();
        Ok(CascadedChannels {
            normalized,
            losses: self.model.path_loss.user_losses(geometry, s),
        })
    }
}
