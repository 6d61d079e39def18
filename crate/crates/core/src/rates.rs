//! Achievable rates under NOMA with successive interference cancellation,
//! FDMA with equal bandwidth split and TDMA with per-slot reflection.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, OrderingKind, Result};
use crate::linalg::{row_gain, CVector};
#[allow(unused_imports)]
use num_traits::Float;

/// Multiple-access scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Noma,
    Fdma,
    Tdma,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Noma => "noma",
            Scheme::Fdma => "fdma",
            Scheme::Tdma => "tdma",
        }
    }
}

/// NOMA decoding order. `rank[k]` is the zero-based position of user `k`;
/// a higher rank is a stronger user that decodes every lower-ranked signal
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecodingOrder {
    rank: Vec<usize>,
}

impl DecodingOrder {
    pub fn from_ranks(rank: Vec<usize>) -> Result<Self> {
        let k = rank.len();
        let mut seen = alloc::vec![false; k];
        for &r in &rank {
            if r >= k || seen[r] {
                return Err(Error::InvalidInput(format!("{rank:?} is not a permutation")));
            }
            seen[r] = true;
        }
        Ok(Self { rank })
    }

    /// Order given by the list of users from weakest to strongest.
    pub fn from_sequence(seq: &[usize]) -> Result<Self> {
        let mut rank = alloc::vec![usize::MAX; seq.len()];
        for (pos, &k) in seq.iter().enumerate() {
            if k >= seq.len() || rank[k] != usize::MAX {
                return Err(Error::InvalidInput(format!("{seq:?} is not a permutation")));
            }
            rank[k] = pos;
        }
        Ok(Self { rank })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            rank: (0..k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, k: usize) -> usize {
        self.rank[k]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Users from weakest (decoded first) to strongest.
    pub fn sequence(&self) -> Vec<usize> {
        let mut seq = alloc::vec![0; self.rank.len()];
        for (k, &r) in self.rank.iter().enumerate() {
            seq[r] = k;
        }
        seq
    }

    /// Every order of `k` users, in lexicographic order of the sequence.
    pub fn all(k: usize) -> Vec<DecodingOrder> {
        let mut out = Vec::new();
        let mut seq: Vec<usize> = (0..k).collect();
        permute(&mut seq, 0, &mut out);
        out.sort_by(|a, b| a.sequence().cmp(&b.sequence()));
        out
    }
}

fn permute(seq: &mut Vec<usize>, i: usize, out: &mut Vec<DecodingOrder>) {
    if i == seq.len() {
        out.push(DecodingOrder::from_sequence(seq).expect("permutation"));
        return;
    }
    for j in i..seq.len() {
        seq.swap(i, j);
        permute(seq, i + 1, out);
        seq.swap(i, j);
    }
}

/// Effective gains `|q_k v|^2`.
pub fn gains(q: &[CVector], v: &CVector) -> Vec<f64> {
    q.iter().map(|qk| row_gain(qk, v)).collect()
}

/// Power of the users that user `k` treats as interference.
pub fn noma_interference(power: &[f64], order: &DecodingOrder, k: usize) -> f64 {
    let rk = order.rank(k);
    power
        .iter()
        .enumerate()
        .filter(|&(i, _)| order.rank(i) > rk)
        .map(|(_, p)| p)
        .sum()
}

pub fn noma_rates_from_gains(
    gains: &[f64],
    power: &[f64],
    order: &DecodingOrder,
    sigma2: f64,
) -> Vec<f64> {
    (0..gains.len())
        .map(|k| {
            let i = noma_interference(power, order, k);
            (1.0 + gains[k] * power[k] / (gains[k] * i + sigma2)).log2()
        })
        .collect()
}

pub fn noma_rates(
    q: &[CVector],
    v: &CVector,
    power: &[f64],
    order: &DecodingOrder,
    sigma2: f64,
) -> Vec<f64> {
    noma_rates_from_gains(&gains(q, v), power, order, sigma2)
}

pub fn fdma_rates_from_gains(gains: &[f64], power: &[f64], sigma2: f64) -> Vec<f64> {
    let k = gains.len() as f64;
    gains
        .iter()
        .zip(power.iter())
        .map(|(c, p)| (1.0 + k * c * p / sigma2).log2() / k)
        .collect()
}

pub fn fdma_rates(q: &[CVector], v: &CVector, power: &[f64], sigma2: f64) -> Vec<f64> {
    fdma_rates_from_gains(&gains(q, v), power, sigma2)
}

/// TDMA rates with a dedicated reflection `v[k]` in each of `K` slots and
/// full power `p_max`.
pub fn tdma_rates(q: &[CVector], v: &[CVector], p_max: f64, sigma2: f64) -> Vec<f64> {
    let k = q.len() as f64;
    q.iter()
        .zip(v.iter())
        .map(|(qk, vk)| (1.0 + row_gain(qk, vk) * p_max / sigma2).log2() / k)
        .collect()
}

/// Slot reflection aligning every element with the row phases.
/// Returns the vector and the attained gain `||q||_1^2`.
pub fn tdma_closed_form(q: &CVector) -> (CVector, f64) {
    let v = q.map(|z| {
        if z.norm() > 0.0 {
            z.conj() / z.norm()
        } else {
            crate::linalg::ONE
        }
    });
    let l1: f64 = q.iter().map(|z| z.norm()).sum();
    (v, l1 * l1)
}

pub fn wsr(weights: &[f64], rates: &[f64]) -> f64 {
    weights.iter().zip(rates.iter()).map(|(w, r)| w * r).sum()
}

/// Checks the NOMA channel and power orderings. A stronger user must have a
/// gain at least that of every weaker user and at most the same power.
/// Comparisons are relative with tolerance `tol`.
pub fn validate_noma(gains: &[f64], power: &[f64], order: &DecodingOrder, tol: f64) -> Result<()> {
    let seq = order.sequence();
    for w in seq.windows(2) {
        let (weak, strong) = (w[0], w[1]);
        let cs = gains[strong];
        let cw = gains[weak];
        if cs < cw - tol * cs.abs().max(cw.abs()) {
            return Err(Error::OrderingViolated {
                kind: OrderingKind::Channel,
                stronger: strong,
                weaker: weak,
            });
        }
        let ps = power[strong];
        let pw = power[weak];
        if ps > pw + tol * ps.abs().max(pw.abs()) {
            return Err(Error::OrderingViolated {
                kind: OrderingKind::Power,
                stronger: strong,
                weaker: weak,
            });
        }
    }
    Ok(())
}

/// Whether the channel ordering alone holds.
pub fn channel_order_holds(gains: &[f64], order: &DecodingOrder, tol: f64) -> bool {
    order.sequence().windows(2).all(|w| {
        let (cw, cs) = (gains[w[0]], gains[w[1]]);
        cs >= cw - tol * cs.abs().max(cw.abs())
    })
}
