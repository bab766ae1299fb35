use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{rank_exact, QMatrix};
use crate::error::{Error, Result};
use crate::lincore::Rational;

/// Entries of the factor matrices are drawn from `-ENTRY_RANGE..=ENTRY_RANGE`.
pub const ENTRY_RANGE: i64 = 3;

/// Attempts [`sample_instance`] makes before giving up.
pub const RESAMPLE_BUDGET: usize = 1000;

/// Antenna counts and link ranks of a two-user channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChannelDims {
    pub n1: usize,
    pub n2: usize,
    pub m1: usize,
    pub m2: usize,
    pub r11: usize,
    pub r12: usize,
    pub r21: usize,
    pub r22: usize,
}

impl ChannelDims {
    pub fn all_ones() -> Self {
        Self {
            n1: 1,
            n2: 1,
            m1: 1,
            m2: 1,
            r11: 1,
            r12: 1,
            r21: 1,
            r22: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self;
        let fail = |why: &str| Err(Error::InvalidDims(format!("{d}: {why}")));
        if [d.n1, d.n2, d.m1, d.m2].contains(&0) {
            return fail("antenna counts must be positive");
        }
        for (r, n, m, name) in [
            (d.r11, d.n1, d.m1, "r11"),
            (d.r12, d.n1, d.m2, "r12"),
            (d.r21, d.n2, d.m1, "r21"),
            (d.r22, d.n2, d.m2, "r22"),
        ] {
            if r > n.min(m) {
                return fail(&format!("{name} exceeds its matrix size"));
            }
        }
        if d.r11 + d.r12 < d.n1 || d.r22 + d.r21 < d.n2 {
            return fail("receiver-side blocks cannot be full row rank");
        }
        if d.r11 + d.r21 < d.m1 || d.r22 + d.r12 < d.m2 {
            return fail("transmitter-side blocks cannot be full column rank");
        }
        Ok(())
    }
}

impl fmt::Display for ChannelDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n1={} n2={} m1={} m2={} r11={} r12={} r21={} r22={}",
            self.n1, self.n2, self.m1, self.m2, self.r11, self.r12, self.r21, self.r22
        )
    }
}

/// Uniform rejection sampling of valid dimensions with every entry in `1..=max_dim`.
pub fn sample_dims(seed: u64, max_dim: usize) -> Result<ChannelDims> {
    if max_dim == 0 {
        return Err(Error::InvalidDims("max_dim must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut draw = || rng.gen_range(1..=max_dim);
        let d = ChannelDims {
            n1: draw(),
            n2: draw(),
            m1: draw(),
            m2: draw(),
            r11: draw(),
            r12: draw(),
            r21: draw(),
            r22: draw(),
        };
        if d.validate().is_ok() {
            return Ok(d);
        }
    }
}

/// Channel matrices, zero-forcing bases and the resulting rank constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelInstance {
    pub dims: ChannelDims,
    pub h11: QMatrix,
    pub h12: QMatrix,
    pub h21: QMatrix,
    pub h22: QMatrix,
    /// Kernel of `H21`.
    pub v20: QMatrix,
    /// Row space of `H21`.
    pub v21: QMatrix,
    /// Kernel of `H12`.
    pub v10: QMatrix,
    /// Row space of `H12`.
    pub v11: QMatrix,
    /// Kernel of `H12ᵀ`.
    pub u10: QMatrix,
    /// Kernel of `H21ᵀ`.
    pub u20: QMatrix,
    /// Value of every symbolic constant.
    pub assignment: BTreeMap<String, Rational>,
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> QMatrix {
    QMatrix::from_fn(rows, cols, |_, _| {
        Rational::from_integer(rng.gen_range(-ENTRY_RANGE..=ENTRY_RANGE).into())
    })
}

fn low_rank(rng: &mut ChaCha8Rng, rows: usize, rank: usize, cols: usize) -> QMatrix {
    random_matrix(rng, rows, rank).mul(&random_matrix(rng, rank, cols))
}

fn channels_valid(d: &ChannelDims, h11: &QMatrix, h12: &QMatrix, h21: &QMatrix, h22: &QMatrix) -> bool {
    rank_exact(h11) == d.r11
        && rank_exact(h12) == d.r12
        && rank_exact(h21) == d.r21
        && rank_exact(h22) == d.r22
        && rank_exact(&h11.hstack(h12)) == d.n1
        && rank_exact(&h21.hstack(h22)) == d.n2
        && rank_exact(&h11.vstack(h21)) == d.m1
        && rank_exact(&h12.vstack(h22)) == d.m2
}

fn rank_of(parts: &[&QMatrix]) -> usize {
    let mut product = parts[0].clone();
    for p in &parts[1..] {
        product = product.mul(p);
    }
    rank_exact(&product)
}

/// Draw `Hᵢⱼ = A·B` until every rank condition holds exactly, then build the bases.
pub fn sample_instance(dims: ChannelDims, seed: u64) -> Result<ChannelInstance> {
    dims.validate()?;
    let d = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RESAMPLE_BUDGET {
        let h11 = low_rank(&mut rng, d.n1, d.r11, d.m1);
        let h12 = low_rank(&mut rng, d.n1, d.r12, d.m2);
        let h21 = low_rank(&mut rng, d.n2, d.r21, d.m1);
        let h22 = low_rank(&mut rng, d.n2, d.r22, d.m2);
        if channels_valid(&d, &h11, &h12, &h21, &h22) {
            return Ok(ChannelInstance::from_channels(d, h11, h12, h21, h22));
        }
    }
    Err(Error::ResampleBudgetExceeded {
        attempts: RESAMPLE_BUDGET,
    })
}

impl ChannelInstance {
    fn from_channels(dims: ChannelDims, h11: QMatrix, h12: QMatrix, h21: QMatrix, h22: QMatrix) -> Self {
        let v20 = h21.kernel_basis();
        let v21 = h21.row_space_basis();
        let v10 = h12.kernel_basis();
        let v11 = h12.row_space_basis();
        let u10 = h12.transpose().kernel_basis();
        let u20 = h21.transpose().kernel_basis();
        let (u10t, u20t) = (u10.transpose(), u20.transpose());

        let d = dims;
        let int = |v: usize| Rational::from_integer((v as i64).into());
        let composite = [
            // U1 and U2 are identities.
            ("k_U1_H11_V21", rank_of(&[&h11, &v21])),
            ("k_U2_H22_V11", rank_of(&[&h22, &v11])),
            ("k_U10_H11_V21", rank_of(&[&u10t, &h11, &v21])),
            ("k_U10_H11_V20", rank_of(&[&u10t, &h11, &v20])),
            ("k_U20_H22_V11", rank_of(&[&u20t, &h22, &v11])),
            ("k_U20_H22_V10", rank_of(&[&u20t, &h22, &v10])),
            ("k_U10_H11", rank_of(&[&u10t, &h11])),
            ("k_U20_H22", rank_of(&[&u20t, &h22])),
            ("k_H11_V20", rank_of(&[&h11, &v20])),
            ("k_H22_V10", rank_of(&[&h22, &v10])),
            ("k_H11_V21", rank_of(&[&h11, &v21])),
            ("k_H22_V11", rank_of(&[&h22, &v11])),
        ];
        let plain = [
            ("n1", d.n1),
            ("n2", d.n2),
            ("m1", d.m1),
            ("m2", d.m2),
            ("r11", d.r11),
            ("r12", d.r12),
            ("r21", d.r21),
            ("r22", d.r22),
        ];
        let assignment = plain
            .into_iter()
            .chain(composite)
            .map(|(k, v)| (k.to_string(), int(v)))
            .collect();
        Self {
            dims,
            h11,
            h12,
            h21,
            h22,
            v20,
            v21,
            v10,
            v11,
            u10,
            u20,
            assignment,
        }
    }

    /// Zero-forcing and completion conditions on the bases, checked exactly.
    pub fn bases_valid(&self) -> bool {
        let d = &self.dims;
        self.u10.transpose().mul(&self.h12).is_zero()
            && self.u20.transpose().mul(&self.h21).is_zero()
            && self.h21.mul(&self.v20).is_zero()
            && self.h12.mul(&self.v10).is_zero()
            && rank_exact(&self.v21.hstack(&self.v20)) == d.m1
            && rank_exact(&self.v11.hstack(&self.v10)) == d.m2
            && self.v20.cols() == d.m1 - d.r21
            && self.v10.cols() == d.m2 - d.r12
            && self.u10.cols() == d.n1 - d.r12
            && self.u20.cols() == d.n2 - d.r21
    }

    /// Ranks of the four links and of the four stacked blocks match the dims.
    pub fn ranks_valid(&self) -> bool {
        channels_valid(&self.dims, &self.h11, &self.h12, &self.h21, &self.h22)
    }
}
