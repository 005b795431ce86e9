//! Density-MPO tensors in the wire basis `|x> = alpha_0`, `|y> = i beta_0`,
//! `|z> = gamma`.
//!
//! In this basis the AKLT site tensors are `(sigma_x, -sigma_y, sigma_z)/sqrt 3`,
//! so the diagonal MPO blocks of the pure state are `(1/3) sigma_s x sigma_s*`.
//! A channel leaves all three diagonal blocks unchanged exactly when it is
//! strongly symmetric under the canonical Z2xZ2.

use crate::aklt::build_aklt;
use crate::channels::{decohere_site, KrausChannel, SYMMETRY_TOL};
use crate::error::Result;
use crate::mbqc::{MeasurementBasis, Outcome};
use crate::state::{DensityMpo, SiteMpo};
use crate::tensor_core::{c, cr, kron, max_abs_diff, pauli_x, pauli_y, pauli_z, CMatrix, CVector};

pub fn wire_basis() -> [CVector; 3] {
    let b = MeasurementBasis::new(0.0);
    [
        b.ket(Outcome::Alpha).clone(),
        b.ket(Outcome::Beta) * c(0.0, 1.0),
        b.ket(Outcome::Gamma).clone(),
    ]
}

/// Unitary whose columns are `|x>, |y>, |z>`.
pub fn wire_matrix() -> CMatrix {
    let kets = wire_basis();
    CMatrix::from_columns(&kets)
}

/// Blocks `T[s,s']` of one site tensor with both physical legs in the wire basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WireBasisMpoTensor {
    blocks: SiteMpo,
}

impl WireBasisMpoTensor {
    pub fn block(&self, s: usize, s_prime: usize) -> &CMatrix {
        self.blocks.block(s, s_prime)
    }

    pub fn diagonal(&self) -> [&CMatrix; 3] {
        [self.block(0, 0), self.block(1, 1), self.block(2, 2)]
    }
}

pub fn to_wire(site: &SiteMpo) -> WireBasisMpoTensor {
    WireBasisMpoTensor {
        blocks: site.conjugated(&wire_matrix().adjoint()),
    }
}

pub fn mpo_tensor_wire(state: &DensityMpo, site: usize) -> Result<WireBasisMpoTensor> {
    Ok(to_wire(state.site(site)?))
}

/// `(1/3) sigma_s x conj(sigma_s)` for `s = x, y, z`.
pub fn pure_diagonal_blocks() -> [CMatrix; 3] {
    [pauli_x(), pauli_y(), pauli_z()].map(|p| kron(&p, &p.map(|z| z.conj())) * cr(1.0 / 3.0))
}

/// Largest change of a diagonal wire block when the channel acts on one AKLT site.
pub fn diagonal_deviation(ch: &KrausChannel) -> f64 {
    let pure = DensityMpo::from_pure(&build_aklt(1).expect("one site")).expect("pure MPO");
    let before = to_wire(pure.site(0).expect("site 0"));
    let after = to_wire(&decohere_site(pure.site(0).expect("site 0"), ch));
    before
        .diagonal()
        .iter()
        .zip(after.diagonal())
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(0.0, f64::max)
}

pub fn diagonal_invariance_check(ch: &KrausChannel) -> bool {
    diagonal_deviation(ch) < SYMMETRY_TOL
}

/// Largest off-diagonal entry of any Kraus operator written in the wire basis.
pub fn wire_offdiagonal(ch: &KrausChannel) -> f64 {
    let w = wire_matrix();
    let mut worst: f64 = 0.0;
    for (_, k) in ch.branches() {
        let kw = w.adjoint() * k * &w;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    worst = worst.max(kw[(i, j)].norm());
                }
            }
        }
    }
    worst
}
