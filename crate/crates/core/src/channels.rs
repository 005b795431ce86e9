//! Site-local Kraus channels on spin-1 sites and their weak/strong symmetry.
//!
//! A channel is stored as weighted branches `rho -> sum_b w_b K_b rho K_b^dag`.
//! Catalog channels have the form `(1-p) rho + (p/n) sum_a K_a rho K_a^dag`.
//! When `sum_b w_b K_b^dag K_b = c I` with `c != 1` the weights are divided by
//! `c`, which is the same as applying the map and renormalizing the trace.

use crate::error::{Error, Result};
use crate::mbqc::MeasurementBasis;
use crate::state::{conjugate_local, DenseDensity, DensityMpo, EdgeState, SiteMpo};
use crate::tensor_core::{
    c, cr, exp_i_pi_spin, identity, inv_sqrt_hermitian, kron, max_abs_diff, spin1_operators,
    unitarity_deviation, CMatrix, C64,
};
use rand::Rng;
use serde::Serialize;
use std::fmt;

/// Tolerance for symmetry and invariance decisions.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct KrausChannel {
    label: String,
    p: f64,
    ops: Vec<CMatrix>,
    tp_renormalize: bool,
    trace_scale: f64,
    branches: Vec<(f64, CMatrix)>,
}

impl KrausChannel {
    /// `(1-p) rho + (p/n) sum_a K_a rho K_a^dag`.
    pub fn new(label: impl Into<String>, p: f64, ops: Vec<CMatrix>) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("error rate p={p} outside [0, 1]")));
        }
        if ops.is_empty() {
            return Err(Error::InvalidArgument("channel needs at least one operator".into()));
        }
        let n = ops.len() as f64;
        let mut raw = vec![(1.0 - p, identity(3))];
        raw.extend(ops.iter().map(|k| (p / n, k.clone())));
        Self::from_raw(label.into(), p, ops, raw)
    }

    /// `sum_a w_a K_a rho K_a^dag` for an explicit weighted Kraus set.
    pub fn from_kraus(label: impl Into<String>, ops: Vec<CMatrix>, weights: Vec<f64>) -> Result<Self> {
        if ops.is_empty() || ops.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} operators but {} weights",
                ops.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument("weights must be finite and non-negative".into()));
        }
        let raw = weights.into_iter().zip(ops.iter().cloned()).collect();
        Self::from_raw(label.into(), 1.0, ops, raw)
    }

    pub fn identity_channel() -> Self {
        Self::new("identity", 0.0, vec![identity(3)]).expect("identity channel is valid")
    }

    fn from_raw(label: String, p: f64, ops: Vec<CMatrix>, raw: Vec<(f64, CMatrix)>) -> Result<Self> {
        for k in &ops {
            if k.shape() != (3, 3) {
                return Err(Error::ShapeMismatch {
                    op: "KrausChannel",
                    left: k.shape(),
                    right: (3, 3),
                });
            }
        }
        let mut gram = CMatrix::zeros(3, 3);
        for (w, k) in &raw {
            gram += k.adjoint() * k * cr(*w);
        }
        let scale = gram.trace().re / 3.0;
        let dev = max_abs_diff(&gram, &(identity(3) * cr(scale)));
        if dev > SYMMETRY_TOL || scale <= 0.0 {
            return Err(Error::NotTraceScaling(dev));
        }
        let tp_renormalize = (scale - 1.0).abs() > SYMMETRY_TOL;
        let branches = raw
            .into_iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, k)| (w / scale, k))
            .collect();
        Ok(Self {
            label,
            p,
            ops,
            tp_renormalize,
            trace_scale: scale,
            branches,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn tp_renormalize(&self) -> bool {
        self.tp_renormalize
    }

    /// The constant `c` in `sum_b w_b K_b^dag K_b = c I` before renormalization.
    pub fn trace_scale(&self) -> f64 {
        self.trace_scale
    }

    /// Normalized branches `(w_b, K_b)`; `sum_b w_b K_b^dag K_b = I`.
    pub fn branches(&self) -> &[(f64, CMatrix)] {
        &self.branches
    }

    /// `sum_b w_b K_b rho K_b^dag` on a single 3x3 site.
    pub fn apply_local(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(3, 3);
        for (w, k) in &self.branches {
            out += k * rho * k.adjoint() * cr(*w);
        }
        out
    }

    /// Heisenberg-picture map `sum_b w_b K_b^dag X K_b`.
    pub fn adjoint_apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(3, 3);
        for (w, k) in &self.branches {
            out += k.adjoint() * x * k * cr(*w);
        }
        out
    }

    /// 9x9 superoperator acting on row-major `vec(rho)`.
    pub fn superoperator(&self) -> CMatrix {
        let mut s = CMatrix::zeros(9, 9);
        for (w, k) in &self.branches {
            s += kron(k, &k.map(|z| z.conj())) * cr(*w);
        }
        s
    }
}

/// Channels 1-4 of the noise catalog.
pub fn catalog_noise(id: u8, p: f64) -> Result<KrausChannel> {
    let (sx, sy, sz) = spin1_operators();
    let ops = match id {
        1 => vec![
            identity(3),
            exp_i_pi_spin(&sx)?,
            exp_i_pi_spin(&sy)?,
            exp_i_pi_spin(&sz)?,
        ],
        2 => {
            let s = [&sx, &sy, &sz];
            let mut ops = vec![identity(3)];
            for [a, b, c] in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                ops.push(s[a] * s[b] * s[c]);
            }
            ops
        }
        3 => vec![identity(3), &sx * &sy, &sy * &sz, &sz * &sx],
        4 => vec![identity(3), exp_i_pi_spin(&sz)?],
        other => return Err(Error::UnknownNoise(other)),
    };
    KrausChannel::new(format!("noise{id}"), p, ops)
}

/// The channel applied once to bulk site `site` of a dense state.
pub fn apply_dense(state: &DenseDensity, ch: &KrausChannel, site: usize) -> Result<DenseDensity> {
    let n = state.n_bulk();
    if site >= n {
        return Err(Error::OutOfRange { index: site, limit: n });
    }
    let tr = state.trace()?;
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::NotUnitTrace(tr.re));
    }
    let dims = state.dims();
    let rho = state.matrix();
    let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
    for (w, k) in ch.branches() {
        out += conjugate_local(rho, &dims, site + 1, k) * cr(*w);
    }
    DenseDensity::new(n, out)
}

/// The channel applied once to bulk site `site` of an MPO state.
pub fn apply_mpo(state: &DensityMpo, ch: &KrausChannel, site: usize) -> Result<DensityMpo> {
    let mut out = state.clone();
    let new_site = decohere_site(state.site(site)?, ch);
    *out.site_mut(site)? = new_site;
    Ok(out)
}

/// One sweep applying the channel to every bulk site in index order.
pub fn apply_sweep_mpo(state: &DensityMpo, ch: &KrausChannel) -> Result<DensityMpo> {
    let mut out = state.clone();
    for i in 0..state.n_bulk() {
        let new_site = decohere_site(out.site(i)?, ch);
        *out.site_mut(i)? = new_site;
    }
    Ok(out)
}

/// One sweep over every bulk site of a dense state.
pub fn apply_sweep_dense(state: &DenseDensity, ch: &KrausChannel) -> Result<DenseDensity> {
    let mut out = state.clone();
    for i in 0..state.n_bulk() {
        out = apply_dense(&out, ch, i)?;
    }
    Ok(out)
}

/// `W'[s,s'] = sum_b w_b sum_{t,t'} K_b[s,t] W[t,t'] conj(K_b[s',t'])`.
pub fn decohere_site(site: &SiteMpo, ch: &KrausChannel) -> SiteMpo {
    let (l, r) = site.bond_dims();
    let mut blocks = vec![CMatrix::zeros(l, r); 9];
    for (w, k) in ch.branches() {
        let conj = site.conjugated(k);
        for (acc, b) in blocks.iter_mut().zip(conj.blocks()) {
            *acc += b * cr(*w);
        }
    }
    SiteMpo::from_blocks(blocks).expect("block shapes preserved")
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub label: String,
    pub u: CMatrix,
    pub antiunitary: bool,
}

#[derive(Clone, Debug)]
pub struct GroupRep {
    pub label: String,
    pub elements: Vec<GroupElement>,
}

impl GroupRep {
    /// `{1, exp(i pi Sx), exp(i pi Sy), exp(i pi Sz)}`.
    pub fn canonical() -> Self {
        rotated_rep(0.0).relabel("Z2xZ2")
    }

    /// `{1, exp(i pi Sy) K}` with `K` complex conjugation in the Sz basis.
    pub fn time_reversal() -> Self {
        let (_, sy, _) = spin1_operators();
        GroupRep {
            label: "time-reversal".into(),
            elements: vec![
                GroupElement {
                    label: "1".into(),
                    u: identity(3),
                    antiunitary: false,
                },
                GroupElement {
                    label: "T".into(),
                    u: exp_i_pi_spin(&sy).expect("Sy is Hermitian"),
                    antiunitary: true,
                },
            ],
        }
    }

    fn relabel(mut self, label: &str) -> Self {
        self.label = label.into();
        self
    }
}

/// Rotated spin components `(S~x(theta), S~y(theta))`.
pub fn rotated_spins(theta: f64) -> (CMatrix, CMatrix) {
    let (sx, sy, _) = spin1_operators();
    let (s, co) = (theta / 2.0).sin_cos();
    (
        &sx * cr(co) + &sy * cr(s),
        &sx * cr(-s) + &sy * cr(co),
    )
}

/// `{1, exp(i pi S~x(theta)), exp(i pi S~y(theta)), exp(i pi Sz)}`.
pub fn rotated_rep(theta: f64) -> GroupRep {
    let (tx, ty) = rotated_spins(theta);
    let (_, _, sz) = spin1_operators();
    let el = |label: &str, u: CMatrix| GroupElement {
        label: label.into(),
        u,
        antiunitary: false,
    };
    GroupRep {
        label: format!("Z2xZ2(theta={theta})"),
        elements: vec![
            el("1", identity(3)),
            el("x", exp_i_pi_spin(&tx).expect("Hermitian")),
            el("y", exp_i_pi_spin(&ty).expect("Hermitian")),
            el("z", exp_i_pi_spin(&sz).expect("Hermitian")),
        ],
    }
}

fn check_unitary(u: &CMatrix) -> Result<()> {
    if u.shape() != (3, 3) {
        return Err(Error::ShapeMismatch {
            op: "symmetry check",
            left: u.shape(),
            right: (3, 3),
        });
    }
    let dev = unitarity_deviation(u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// `max |S (U x U*) - (U x U*) S|`, with `conj(S)` on the right side for an
/// antiunitary action.
pub fn weak_deviation(ch: &KrausChannel, u: &CMatrix, antiunitary: bool) -> Result<f64> {
    check_unitary(u)?;
    let s = ch.superoperator();
    let g = kron(u, &u.map(|z| z.conj()));
    let rhs = if antiunitary { &g * s.map(|z| z.conj()) } else { &g * &s };
    Ok(max_abs_diff(&(&s * &g), &rhs))
}

pub fn is_weakly_symmetric(ch: &KrausChannel, u: &CMatrix, antiunitary: bool) -> Result<bool> {
    Ok(weak_deviation(ch, u, antiunitary)? < SYMMETRY_TOL)
}

/// Outcome of the Heisenberg-picture strong-symmetry test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrongCheck {
    pub holds: bool,
    pub phase: C64,
    pub residual: f64,
}

/// Tests `sum_b w_b K_b^dag U K_b = e^{i phi} U` (with `conj(K_b)` on the
/// right for antiunitary actions). By Cauchy-Schwarz the unit-modulus phase
/// forces `K_b U = e^{-i phi} U K_b` branch by branch.
pub fn is_strongly_symmetric(ch: &KrausChannel, u: &CMatrix, antiunitary: bool) -> Result<StrongCheck> {
    check_unitary(u)?;
    let mut m = CMatrix::zeros(3, 3);
    for (w, k) in ch.branches() {
        let right = if antiunitary { k.map(|z| z.conj()) } else { k.clone() };
        m += k.adjoint() * u * right * cr(*w);
    }
    let phase = (u.adjoint() * &m).trace() / cr(3.0);
    let residual = max_abs_diff(&m, &(u * phase)).max((phase.norm() - 1.0).abs());
    Ok(StrongCheck {
        holds: residual < SYMMETRY_TOL,
        phase,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "S.S.")]
    Strong,
    #[serde(rename = "W.S.")]
    Weak,
    #[serde(rename = "none")]
    Broken,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Strong => "S.S.",
            Verdict::Weak => "W.S.",
            Verdict::Broken => "none",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementVerdict {
    pub label: String,
    pub weak: bool,
    pub strong: bool,
    pub phase_re: f64,
    pub phase_im: f64,
}

impl ElementVerdict {
    pub fn phase(&self) -> C64 {
        c(self.phase_re, self.phase_im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetryReport {
    pub channel: String,
    pub group: String,
    pub elements: Vec<ElementVerdict>,
}

impl SymmetryReport {
    pub fn verdict(&self) -> Verdict {
        if self.elements.iter().all(|e| e.strong) {
            Verdict::Strong
        } else if self.elements.iter().all(|e| e.weak) {
            Verdict::Weak
        } else {
            Verdict::Broken
        }
    }
}

pub fn check_symmetry(ch: &KrausChannel, group: &GroupRep) -> Result<SymmetryReport> {
    let elements = group
        .elements
        .iter()
        .map(|g| {
            let strong = is_strongly_symmetric(ch, &g.u, g.antiunitary)?;
            Ok(ElementVerdict {
                label: g.label.clone(),
                weak: is_weakly_symmetric(ch, &g.u, g.antiunitary)?,
                strong: strong.holds,
                phase_re: strong.phase.re,
                phase_im: strong.phase.im,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SymmetryReport {
        channel: ch.label().to_string(),
        group: group.label.clone(),
        elements,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Table1Row {
    pub noise: u8,
    pub z2xz2: Verdict,
    pub time_reversal: Verdict,
}

/// Z2xZ2 and time-reversal verdicts for catalog noises 1-4.
pub fn classify_table1(p: f64) -> Result<Vec<Table1Row>> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidArgument(format!("p={p} must lie in (0, 1]")));
    }
    let z2 = GroupRep::canonical();
    let tr = GroupRep::time_reversal();
    (1..=4)
        .map(|id| {
            let ch = catalog_noise(id, p)?;
            Ok(Table1Row {
                noise: id,
                z2xz2: check_symmetry(&ch, &z2)?.verdict(),
                time_reversal: check_symmetry(&ch, &tr)?.verdict(),
            })
        })
        .collect()
}

/// Largest `|sum_b w_b K_b^dag P(m) K_b - P(m)|` over the three projectors of
/// the angle-`theta` measurement basis.
pub fn projector_deviation(ch: &KrausChannel, theta: f64) -> f64 {
    MeasurementBasis::new(theta)
        .projectors()
        .iter()
        .map(|proj| max_abs_diff(&ch.adjoint_apply(proj), proj))
        .fold(0.0, f64::max)
}

pub fn projector_commutation_check(ch: &KrausChannel, theta: f64) -> bool {
    projector_deviation(ch, theta) < SYMMETRY_TOL
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    CMatrix::from_fn(3, 3, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Two random Kraus operators `G_i S^{-1/2}` with `S = sum_i G_i^dag G_i`.
pub fn random_tp_channel<R: Rng + ?Sized>(rng: &mut R, label: &str) -> Result<KrausChannel> {
    let g = [random_matrix(rng), random_matrix(rng)];
    let s = g[0].adjoint() * &g[0] + g[1].adjoint() * &g[1];
    let inv = inv_sqrt_hermitian(&s)?;
    let ops = g.iter().map(|gi| gi * &inv).collect();
    KrausChannel::from_kraus(label, ops, vec![1.0, 1.0])
}

/// Random channel whose Kraus operators are diagonal in `basis` (columns
/// orthonormal). Diagonal in the wire basis means strongly Z2xZ2-symmetric.
pub fn random_diagonal_channel<R: Rng + ?Sized>(
    rng: &mut R,
    basis: &CMatrix,
    label: &str,
) -> Result<KrausChannel> {
    let n_ops = 3;
    let mut diags = vec![[C64::new(0.0, 0.0); 3]; n_ops];
    for j in 0..3 {
        let col: Vec<C64> = (0..n_ops)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (d, z) in diags.iter_mut().zip(col) {
            d[j] = z / norm;
        }
    }
    let ops = diags
        .iter()
        .map(|d| {
            let diag = CMatrix::from_diagonal(&crate::tensor_core::CVector::from_row_slice(d));
            basis * diag * basis.adjoint()
        })
        .collect();
    KrausChannel::from_kraus(label, ops, vec![1.0; n_ops])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aklt::build_aklt;
    use crate::tensor_core::{commutator, exp_i_hermitian, is_hermitian, max_abs, min_eigenvalue};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn catalog_shapes() {
        let n1 = catalog_noise(1, 0.25).unwrap();
        assert_eq!(n1.ops().len(), 4);
        assert!(n1.ops().iter().all(|k| unitarity_deviation(k) < 1e-12));
        assert!(!n1.tp_renormalize());
        let n4 = catalog_noise(4, 0.25).unwrap();
        assert_eq!(n4.ops().len(), 2);
        for k in n4.ops() {
            assert!(max_abs_diff(k, &CMatrix::from_diagonal(&k.diagonal())) < 1e-15);
        }
        assert_eq!(catalog_noise(2, 0.25).unwrap().ops().len(), 7);
        assert!(matches!(catalog_noise(5, 0.25), Err(Error::UnknownNoise(5))));
        assert!(catalog_noise(1, 1.5).is_err());
    }

    #[test]
    fn noise2_and_noise3_scale_the_trace() {
        // Independent sums of K^dag K over the listed operators, before any weights.
        let (sx, sy, sz) = spin1_operators();
        let mut g3 = identity(3);
        for k in [&sx * &sy, &sy * &sz, &sz * &sx] {
            g3 += k.adjoint() * k;
        }
        assert!(max_abs_diff(&g3, &(identity(3) * cr(2.0))) < 1e-12);
        assert!(max_abs_diff(&g3, &(identity(3) * cr(4.0))) > 0.5);
        let n3 = catalog_noise(3, 0.25).unwrap();
        assert!(n3.tp_renormalize());
        assert!((n3.trace_scale() - (0.75 + 0.25 * 2.0 / 4.0)).abs() < 1e-12);
        let n2 = catalog_noise(2, 0.25).unwrap();
        assert!(n2.tp_renormalize());
        assert!((n2.trace_scale() - (0.75 + 0.25 * 3.0 / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn non_trace_scaling_rejected() {
        let k = CMatrix::from_diagonal(&crate::tensor_core::CVector::from_vec(vec![cr(1.0), cr(0.5), cr(0.0)]));
        assert!(matches!(
            KrausChannel::new("bad", 0.5, vec![k]),
            Err(Error::NotTraceScaling(_))
        ));
    }

    #[test]
    fn p_zero_leaves_state_unchanged() {
        let mpo = DensityMpo::from_pure(&build_aklt(3).unwrap()).unwrap();
        for id in 1..=4 {
            let ch = catalog_noise(id, 0.0).unwrap();
            let out = apply_mpo(&mpo, &ch, 1).unwrap();
            for (a, b) in out.site(1).unwrap().blocks().iter().zip(mpo.site(1).unwrap().blocks()) {
                assert!(max_abs_diff(a, b) < 1e-15);
            }
        }
    }

    #[test]
    fn unital_noise_fixes_maximally_mixed() {
        let rho = DenseDensity::maximally_mixed(2).unwrap();
        let out = apply_dense(&rho, &catalog_noise(1, 0.25).unwrap(), 0).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn dense_application_stays_physical() {
        let psi = build_aklt(3).unwrap().to_dense().unwrap();
        let rho = DenseDensity::from_pure(3, &psi).unwrap();
        for id in 1..=4 {
            let out = apply_sweep_dense(&rho, &catalog_noise(id, 0.25).unwrap()).unwrap();
            assert!((out.trace().unwrap() - cr(1.0)).norm() < 1e-12);
            assert!(is_hermitian(out.matrix(), 1e-12));
            assert!(min_eigenvalue(out.matrix()).unwrap() > -1e-10);
        }
    }

    #[test]
    fn dense_rejects_bad_input() {
        let rho = DenseDensity::maximally_mixed(2).unwrap();
        let ch = catalog_noise(1, 0.25).unwrap();
        assert!(matches!(apply_dense(&rho, &ch, 2), Err(Error::OutOfRange { .. })));
        let doubled = DenseDensity::new(2, rho.matrix() * cr(2.0)).unwrap();
        assert!(matches!(apply_dense(&doubled, &ch, 0), Err(Error::NotUnitTrace(_))));
        let mpo = DensityMpo::maximally_mixed(2).unwrap();
        assert!(apply_mpo(&mpo, &ch, 5).is_err());
    }

    #[test]
    fn mpo_matches_dense_application() {
        let chain = build_aklt(5).unwrap();
        let mpo = DensityMpo::from_pure(&chain).unwrap();
        let dense = DenseDensity::from_pure(5, &chain.to_dense().unwrap()).unwrap();
        for id in 1..=4 {
            let ch = catalog_noise(id, 0.25).unwrap();
            let a = apply_mpo(&mpo, &ch, 2).unwrap();
            let b = apply_dense(&dense, &ch, 2).unwrap();
            assert!((a.trace().unwrap() - cr(1.0)).norm() < 1e-12);
            assert!(max_abs_diff(a.to_dense().unwrap().matrix(), b.matrix()) < 1e-10, "noise {id}");
        }
    }

    #[test]
    fn table1_verdicts() {
        let rows = classify_table1(0.25).unwrap();
        let got: Vec<(Verdict, Verdict)> = rows.iter().map(|r| (r.z2xz2, r.time_reversal)).collect();
        use Verdict::*;
        assert_eq!(got, vec![(Strong, Strong), (Strong, Weak), (Weak, Strong), (Strong, Strong)]);
    }

    #[test]
    fn identity_element_is_always_symmetric() {
        for id in 1..=4 {
            let ch = catalog_noise(id, 0.4).unwrap();
            assert!(is_weakly_symmetric(&ch, &identity(3), false).unwrap());
            let s = is_strongly_symmetric(&ch, &identity(3), false).unwrap();
            assert!(s.holds && (s.phase - cr(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn noise3_weak_but_not_strong() {
        let ch = catalog_noise(3, 0.25).unwrap();
        for g in GroupRep::canonical().elements {
            assert!(is_weakly_symmetric(&ch, &g.u, false).unwrap());
        }
        let strong: Vec<bool> = GroupRep::canonical()
            .elements
            .iter()
            .map(|g| is_strongly_symmetric(&ch, &g.u, false).unwrap().holds)
            .collect();
        assert!(strong.iter().any(|s| !s));
    }

    #[test]
    fn noise2_time_reversal_only_weak() {
        let ch = catalog_noise(2, 0.25).unwrap();
        let t = &GroupRep::time_reversal().elements[1];
        assert!(!is_strongly_symmetric(&ch, &t.u, true).unwrap().holds);
        assert!(is_weakly_symmetric(&ch, &t.u, true).unwrap());
    }

    #[test]
    fn noise4_strong_under_rotated_rep() {
        let ch = catalog_noise(4, 0.25).unwrap();
        for g in rotated_rep(PI / 3.0).elements {
            let s = is_strongly_symmetric(&ch, &g.u, false).unwrap();
            assert!(s.holds, "{}", g.label);
            assert!((s.phase - cr(1.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn rotated_rep_properties() {
        let canon = GroupRep::canonical();
        for (a, b) in rotated_rep(0.0).elements.iter().zip(&canon.elements) {
            assert!(max_abs_diff(&a.u, &b.u) < 1e-12);
        }
        for theta in [0.4, 1.3, 2.9] {
            let rep = rotated_rep(theta);
            for a in &rep.elements {
                for b in &rep.elements {
                    assert!(max_abs(&commutator(&a.u, &b.u)) < 1e-12);
                }
            }
        }
        let (_, _, sz) = spin1_operators();
        let rz = exp_i_hermitian(&sz, -PI / 4.0).unwrap();
        let (sx, _, _) = spin1_operators();
        let expected = &rz * exp_i_pi_spin(&sx).unwrap() * rz.adjoint();
        assert!(max_abs_diff(&rotated_rep(PI / 2.0).elements[1].u, &expected) < 1e-12);
    }

    #[test]
    fn projector_check_examples() {
        for theta in [0.0, 0.7, PI / 2.0, 2.5] {
            assert!(projector_commutation_check(&catalog_noise(4, 0.25).unwrap(), theta));
            assert!(projector_commutation_check(&KrausChannel::identity_channel(), theta));
        }
        let n1 = catalog_noise(1, 0.25).unwrap();
        assert!(projector_commutation_check(&n1, 0.0));
        assert!(!projector_commutation_check(&n1, PI / 2.0));
    }

    #[test]
    fn random_channels_are_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let ch = random_tp_channel(&mut rng, "r").unwrap();
            assert!(!ch.tp_renormalize());
            let z2 = check_symmetry(&ch, &GroupRep::canonical()).unwrap();
            assert_ne!(z2.verdict(), Verdict::Strong);
        }
        let basis = crate::mpo_analysis::wire_matrix();
        for _ in 0..5 {
            let ch = random_diagonal_channel(&mut rng, &basis, "d").unwrap();
            assert!(!ch.tp_renormalize());
            assert_eq!(check_symmetry(&ch, &GroupRep::canonical()).unwrap().verdict(), Verdict::Strong);
        }
    }
}
