//! The AKLT chain terminated by two spin-1/2 edge qubits.
//!
//! Amplitudes are `a[sigma_in]^T  M_1[m_1] ... M_N[m_N]  b[sigma_out]` with
//! bulk tensors `M[m] = P[m] A`, where `A = -(i/sqrt 2) Y` creates a singlet
//! bond and `P[m]` projects two virtual spin-1/2s onto spin-1. The in-edge
//! row vectors are the rows of `A`; the out-edge column vectors are `-e_tau`,
//! which is `A^{-1}` applied to the columns of `A^T`.

use crate::error::{Error, Result};
use crate::state::EdgeState;
use crate::tensor_core::{
    cr, exp_i_pi_spin, from_rows, identity, max_abs_diff, CMatrix, CVector, SpinAxis, C64,
};
use std::f64::consts::FRAC_1_SQRT_2;

/// Largest chain contracted into a dense state vector (`4 * 3^8` entries).
pub const DENSE_VECTOR_MAX_SITES: usize = 8;

/// Tolerance for the canonical-form check.
pub const CANONICAL_TOL: f64 = 1e-10;

/// The singlet matrix `A`.
pub fn singlet_matrix() -> CMatrix {
    from_rows(&[
        &[cr(0.0), cr(-FRAC_1_SQRT_2)],
        &[cr(FRAC_1_SQRT_2), cr(0.0)],
    ])
}

/// Spin-1 projectors `P[+1], P[0], P[-1]`.
pub fn spin1_projectors() -> [CMatrix; 3] {
    let big = cr(2.0 / 3f64.sqrt());
    let mid = cr((2.0f64 / 3.0).sqrt());
    let z = cr(0.0);
    [
        from_rows(&[&[big, z], &[z, z]]),
        from_rows(&[&[z, mid], &[mid, z]]),
        from_rows(&[&[z, z], &[z, big]]),
    ]
}

/// Pure MPS of the edge-terminated chain.
#[derive(Clone, Debug, PartialEq)]
pub struct MpsChain {
    edge_in: [CVector; 2],
    bulk: Vec<[CMatrix; 3]>,
    edge_out: [CVector; 2],
}

/// Outcome of [`check_canonical`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CanonicalReport {
    pub holds: bool,
    pub max_deviation: f64,
}

/// Projective action of an on-site symmetry on the virtual bond:
/// `sum_n u[m,n] M[n] = phase * V^dag M[m] V`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveRep {
    pub label: String,
    pub v: CMatrix,
    pub phase: C64,
}

/// AKLT ground state with `n_bulk` spin-1 sites.
pub fn build_aklt(n_bulk: usize) -> Result<MpsChain> {
    if n_bulk < 1 {
        return Err(Error::InvalidArgument("n_bulk must be at least 1".into()));
    }
    let a = singlet_matrix();
    let site: [CMatrix; 3] = spin1_projectors().map(|p| p * &a);
    let edge_in = [
        CVector::from_iterator(2, a.row(0).iter().copied()),
        CVector::from_iterator(2, a.row(1).iter().copied()),
    ];
    let edge_out = [
        CVector::from_vec(vec![cr(-1.0), cr(0.0)]),
        CVector::from_vec(vec![cr(0.0), cr(-1.0)]),
    ];
    MpsChain::from_parts(edge_in, vec![site; n_bulk], edge_out)
}

impl MpsChain {
    pub fn from_parts(
        edge_in: [CVector; 2],
        bulk: Vec<[CMatrix; 3]>,
        edge_out: [CVector; 2],
    ) -> Result<Self> {
        if bulk.is_empty() {
            return Err(Error::InvalidArgument("n_bulk must be at least 1".into()));
        }
        let d = edge_in[0].len();
        let square = bulk.iter().flatten().all(|m| m.shape() == (d, d));
        if !square || edge_in[1].len() != d || edge_out.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidArgument(
                "all virtual bonds must share one dimension".into(),
            ));
        }
        Ok(Self {
            edge_in,
            bulk,
            edge_out,
        })
    }

    pub fn n_bulk(&self) -> usize {
        self.bulk.len()
    }

    pub fn edge_in(&self) -> &[CVector; 2] {
        &self.edge_in
    }

    pub fn edge_out(&self) -> &[CVector; 2] {
        &self.edge_out
    }

    pub fn bulk_tensors(&self) -> &[[CMatrix; 3]] {
        &self.bulk
    }

    pub fn bulk_tensors_mut(&mut self) -> &mut [[CMatrix; 3]] {
        &mut self.bulk
    }

    /// `<psi|psi>` by transfer-matrix contraction.
    pub fn norm_squared(&self) -> f64 {
        let d = self.edge_in[0].len();
        let mut env = CMatrix::zeros(d, d);
        for a in &self.edge_in {
            env += a.conjugate() * a.transpose();
        }
        for site in &self.bulk {
            let mut next = CMatrix::zeros(d, d);
            for m in site {
                next += m.adjoint() * &env * m;
            }
            env = next;
        }
        let mut total = C64::new(0.0, 0.0);
        for b in &self.edge_out {
            total += (b.adjoint() * &env * b)[(0, 0)];
        }
        total.re
    }

    /// Full state vector, ordered `in, site 0, ..., site N-1, out`.
    pub fn to_dense(&self) -> Result<CVector> {
        let n = self.n_bulk();
        if n > DENSE_VECTOR_MAX_SITES {
            return Err(Error::SizeCap {
                what: "bulk sites for dense vector",
                value: n,
                max: DENSE_VECTOR_MAX_SITES,
            });
        }
        // Row vectors for every prefix of physical indices.
        let mut prefixes: Vec<CMatrix> = self.edge_in.iter().map(|a| CMatrix::from_row_slice(1, a.len(), a.as_slice())).collect();
        for site in &self.bulk {
            prefixes = prefixes
                .iter()
                .flat_map(|p| site.iter().map(move |m| p * m))
                .collect();
        }
        let amps: Vec<C64> = prefixes
            .iter()
            .flat_map(|p| self.edge_out.iter().map(move |b| (p * b)[(0, 0)]))
            .collect();
        Ok(CVector::from_vec(amps))
    }
}

/// Left and right canonical conditions at every bulk site, plus unit norm.
pub fn check_canonical(chain: &MpsChain) -> CanonicalReport {
    let d = chain.edge_in[0].len();
    let id = identity(d);
    let mut worst = (chain.norm_squared() - 1.0).abs();
    for site in &chain.bulk {
        let mut left = CMatrix::zeros(d, d);
        let mut right = CMatrix::zeros(d, d);
        for m in site {
            left += m.adjoint() * m;
            right += m * m.adjoint();
        }
        worst = worst.max(max_abs_diff(&left, &id)).max(max_abs_diff(&right, &id));
    }
    CanonicalReport {
        holds: worst < CANONICAL_TOL,
        max_deviation: worst,
    }
}

/// Virtual-bond representation of the on-site unitary `u` from the dominant
/// eigenvector of the `u`-inserted transfer matrix.
pub fn extract_projective_rep(chain: &MpsChain, u: &CMatrix, label: &str) -> Result<ProjectiveRep> {
    if u.shape() != (3, 3) {
        return Err(Error::ShapeMismatch {
            op: "extract_projective_rep",
            left: u.shape(),
            right: (3, 3),
        });
    }
    let dev = crate::tensor_core::unitarity_deviation(u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    let site = &chain.bulk[0];
    let d = site[0].nrows();
    let rotated = act_on_physical(u, site);
    // Map X -> sum_m (uM)[m] X M[m]^dag on row-major vec(X).
    let mut transfer = CMatrix::zeros(d * d, d * d);
    for (um, m) in rotated.iter().zip(site) {
        transfer += um.kronecker(&m.map(|x| x.conj()));
    }
    let (lambda, vec) = crate::tensor_core::dominant_eigenpair(&transfer)?;
    if lambda.norm() < 1.0 - 1e-6 {
        return Err(Error::NotASymmetry(lambda.norm()));
    }
    let x = CMatrix::from_fn(d, d, |i, j| vec[i * d + j]);
    let mut v = x.adjoint();
    let scale = (d as f64).sqrt() / v.norm();
    v *= cr(scale);
    if let Some(first) = v.transpose().iter().find(|z| z.norm() > 1e-9).copied() {
        v *= first.conj() / first.norm();
    }
    // phase from the least-squares fit of sum_n u[m,n] M[n] against V^dag M[m] V
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for (um, m) in rotated.iter().zip(site) {
        let conj = v.adjoint() * m * &v;
        num += (conj.adjoint() * um).trace();
        den += conj.norm_squared();
    }
    let phase = num / den;
    let phase = phase / phase.norm();
    for s in &chain.bulk {
        for (um, m) in act_on_physical(u, s).iter().zip(s) {
            let resid = max_abs_diff(um, &(v.adjoint() * m * &v * phase));
            if resid > 1e-10 {
                return Err(Error::NotASymmetry(lambda.norm()));
            }
        }
    }
    Ok(ProjectiveRep {
        label: label.to_string(),
        v,
        phase,
    })
}

fn act_on_physical(u: &CMatrix, site: &[CMatrix; 3]) -> Vec<CMatrix> {
    (0..3)
        .map(|m| {
            let mut acc = CMatrix::zeros(site[0].nrows(), site[0].ncols());
            for (n, tensor) in site.iter().enumerate() {
                acc += tensor * u[(m, n)];
            }
            acc
        })
        .collect()
}

/// `<S_i^a exp(i pi sum_{k=i}^{j-1} S_k^a) S_j^a>` with 0-based sites `i < j`.
pub fn string_order<S: EdgeState + ?Sized>(state: &S, axis: SpinAxis, i: usize, j: usize) -> Result<f64> {
    let n = state.n_bulk();
    if j >= n {
        return Err(Error::OutOfRange { index: j, limit: n });
    }
    if i >= j {
        return Err(Error::InvalidArgument(format!("need i < j, got i={i}, j={j}")));
    }
    let s = axis.spin1();
    let string = exp_i_pi_spin(&s)?;
    let ops: Vec<CMatrix> = (0..n)
        .map(|k| match k {
            k if k == i => &s * &string,
            k if k > i && k < j => string.clone(),
            k if k == j => s.clone(),
            _ => identity(3),
        })
        .collect();
    let id2 = identity(2);
    Ok(state.expectation(&id2, &ops, &id2)?.re)
}

/// `Tr[rho X_in (prod_j exp(i pi S_j^a)) X_out]` with the Pauli matching `a`
/// on both edge qubits.
pub fn edge_string_correlator<S: EdgeState + ?Sized>(state: &S, axis: SpinAxis) -> Result<f64> {
    let string = exp_i_pi_spin(&axis.spin1())?;
    let ops = vec![string; state.n_bulk()];
    let pauli = axis.pauli();
    Ok(state.expectation(&pauli, &ops, &pauli)?.re)
}

/// `<psi| A_in x O_0 x ... x B_out |psi>` on a dense state vector.
pub fn dense_expectation(
    psi: &CVector,
    in_op: &CMatrix,
    site_ops: &[CMatrix],
    out_op: &CMatrix,
) -> Result<C64> {
    let n = site_ops.len();
    let dims = crate::state::layout(n);
    if psi.len() != crate::state::dense_dim(n) {
        return Err(Error::InvalidArgument("state vector length does not match layout".into()));
    }
    let mut phi = CMatrix::from_column_slice(psi.len(), 1, psi.as_slice());
    phi = crate::state::apply_left(&phi, &dims, 0, in_op);
    for (k, op) in site_ops.iter().enumerate() {
        phi = crate::state::apply_left(&phi, &dims, k + 1, op);
    }
    phi = crate::state::apply_left(&phi, &dims, n + 1, out_op);
    Ok((psi.adjoint() * phi)[(0, 0)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{DenseDensity, DensityMpo};
    use crate::tensor_core::{kron, pauli_x, pauli_y, pauli_z, spin1_operators, commutator, max_abs};

    #[test]
    fn canonical_for_all_sizes() {
        for n in 1..=8 {
            let r = check_canonical(&build_aklt(n).unwrap());
            assert!(r.holds, "n={n} dev={}", r.max_deviation);
        }
    }

    #[test]
    fn zero_sites_rejected() {
        assert!(build_aklt(0).is_err());
    }

    #[test]
    fn scaled_tensor_breaks_canonical_form() {
        let mut chain = build_aklt(3).unwrap();
        for m in &mut chain.bulk_tensors_mut()[1] {
            *m *= cr(2.0);
        }
        assert!(!check_canonical(&chain).holds);
    }

    #[test]
    fn unitary_gauge_preserves_canonical_form() {
        let mut chain = build_aklt(4).unwrap();
        let theta = 0.37;
        let u = crate::tensor_core::exp_i_hermitian(&(pauli_x() * cr(0.3) + pauli_z() * cr(0.8)), theta).unwrap();
        let bulk = chain.bulk_tensors_mut();
        for m in &mut bulk[1] {
            *m = &*m * &u;
        }
        for m in &mut bulk[2] {
            *m = u.adjoint() * &*m;
        }
        let r = check_canonical(&chain);
        assert!(r.holds, "dev={}", r.max_deviation);
        // the physical state is unchanged
        let a = chain.to_dense().unwrap();
        let b = build_aklt(4).unwrap().to_dense().unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn dense_vector_normalized() {
        let psi = build_aklt(1).unwrap().to_dense().unwrap();
        assert_eq!(psi.len(), 12);
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        let psi4 = build_aklt(4).unwrap().to_dense().unwrap();
        assert!((psi4.norm() - 1.0).abs() < 1e-12);
        assert!(matches!(build_aklt(9).unwrap().to_dense(), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn singlet_has_zero_magnetization_and_spin() {
        let chain = build_aklt(2).unwrap();
        let psi = chain.to_dense().unwrap();
        let (sx, sy, sz) = spin1_operators();
        let half = |p: CMatrix| p * cr(0.5);
        for (bulk, edge) in [(sx, half(pauli_x())), (sy, half(pauli_y())), (sz, half(pauli_z()))] {
            // total spin component: sum of single-factor expectations
            let id2 = identity(2);
            let id3 = identity(3);
            let mut total = dense_expectation(&psi, &edge, &[id3.clone(), id3.clone()], &id2).unwrap();
            total += dense_expectation(&psi, &id2, &[bulk.clone(), id3.clone()], &id2).unwrap();
            total += dense_expectation(&psi, &id2, &[id3.clone(), bulk.clone()], &id2).unwrap();
            total += dense_expectation(&psi, &id2, &[id3.clone(), id3.clone()], &edge).unwrap();
            assert!(total.norm() < 1e-12);
        }
    }

    #[test]
    fn hamiltonian_terms_are_minimized() {
        // bond term S.S + (S.S)^2/3 equals 2 P_2 - 2/3; AKLT has no spin-2 weight on any bond
        let n = 3;
        let psi = build_aklt(n).unwrap().to_dense().unwrap();
        let (sx, sy, sz) = spin1_operators();
        let dot = kron(&sx, &sx) + kron(&sy, &sy) + kron(&sz, &sz);
        let bond = &dot + &dot * &dot * cr(1.0 / 3.0);
        for k in 0..n - 1 {
            let mut full = identity(2);
            for site in 0..n {
                if site == k {
                    full = kron(&full, &bond);
                } else if site != k + 1 {
                    full = kron(&full, &identity(3));
                }
            }
            full = kron(&full, &identity(2));
            let e = (psi.adjoint() * &full * &psi)[(0, 0)];
            assert!((e.re + 2.0 / 3.0).abs() < 1e-10, "bond {k}: {e}");
        }
        // edge coupling s_in . S_1 reaches its minimum -1
        let mut edge = CMatrix::zeros(6, 6);
        for (p, s) in [(pauli_x(), &sx), (pauli_y(), &sy), (pauli_z(), &sz)] {
            edge += kron(&(p * cr(0.5)), s);
        }
        let full = kron(&kron(&edge, &identity(9)), &identity(2));
        let e = (psi.adjoint() * &full * &psi)[(0, 0)];
        assert!((e.re + 1.0).abs() < 1e-10);
    }

    #[test]
    fn projective_rep_of_identity() {
        let chain = build_aklt(3).unwrap();
        let rep = extract_projective_rep(&chain, &identity(3), "1").unwrap();
        assert!(max_abs_diff(&rep.v, &identity(2)) < 1e-10);
        assert!((rep.phase - cr(1.0)).norm() < 1e-10);
    }

    #[test]
    fn projective_rep_of_pi_rotations() {
        let chain = build_aklt(3).unwrap();
        let mut vs = Vec::new();
        for (axis, pauli) in [(SpinAxis::X, pauli_x()), (SpinAxis::Y, pauli_y()), (SpinAxis::Z, pauli_z())] {
            let u = exp_i_pi_spin(&axis.spin1()).unwrap();
            let rep = extract_projective_rep(&chain, &u, &axis.to_string()).unwrap();
            // V is the Pauli up to a global phase
            let overlap = (pauli.adjoint() * &rep.v).trace() / cr(2.0);
            assert!((overlap.norm() - 1.0).abs() < 1e-10, "{axis}: {}", rep.v);
            assert!((rep.phase.norm() - 1.0).abs() < 1e-12);
            vs.push(rep.v);
        }
        // first nonzero entry of V_z is real positive: V_z = Z exactly
        assert!(max_abs_diff(&vs[2], &pauli_z()) < 1e-10);
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    let anti = &vs[a] * &vs[b] + &vs[b] * &vs[a];
                    assert!(max_abs(&anti) < 1e-10);
                    assert!(max_abs(&commutator(&vs[a], &vs[b])) > 1.0);
                }
            }
        }
    }

    #[test]
    fn non_symmetry_rejected() {
        let chain = build_aklt(3).unwrap();
        // a generic unitary mixing |+1> and |0> is not a symmetry of the state
        let (sx, _, sz) = spin1_operators();
        let u = crate::tensor_core::exp_i_hermitian(&(&sx * &sz + &sz * &sx + &sz * cr(0.4)), 0.9).unwrap();
        assert!(matches!(
            extract_projective_rep(&chain, &u, "g"),
            Err(Error::NotASymmetry(_))
        ));
    }

    #[test]
    fn edge_correlator_is_minus_one_on_pure_state() {
        for n in 1..=7 {
            let mpo = DensityMpo::from_pure(&build_aklt(n).unwrap()).unwrap();
            for axis in SpinAxis::ALL {
                let v = edge_string_correlator(&mpo, axis).unwrap();
                assert!((v + 1.0).abs() < 1e-12, "n={n} {axis}: {v}");
            }
        }
    }

    #[test]
    fn maximally_mixed_observables_vanish() {
        let mpo = DensityMpo::maximally_mixed(5).unwrap();
        let dense = DenseDensity::maximally_mixed(3).unwrap();
        for axis in SpinAxis::ALL {
            assert!(edge_string_correlator(&mpo, axis).unwrap().abs() < 1e-15);
            assert!(string_order(&mpo, axis, 1, 3).unwrap().abs() < 1e-15);
            assert!(string_order(&dense, axis, 0, 2).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn string_order_index_errors() {
        let mpo = DensityMpo::maximally_mixed(4).unwrap();
        assert!(string_order(&mpo, SpinAxis::Z, 2, 2).is_err());
        assert!(string_order(&mpo, SpinAxis::Z, 1, 4).is_err());
    }
}
