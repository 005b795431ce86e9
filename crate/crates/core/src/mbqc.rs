//! Gate teleportation along the chain: measurement bases, by-products, the
//! two-qubit resource state and its gate fidelity.
//!
//! Sites are measured in the angle-`theta` basis up to and including the first
//! site `l` with an `alpha` or `beta` outcome, and in the `theta = 0` basis
//! afterwards. The resource state is evaluated three ways: by enumerating all
//! `3^N` records, by grouping records by `l` and by-product parity, and from
//! string correlators of the chain.

use crate::aklt::{singlet_matrix, spin1_projectors};
use crate::channels::rotated_spins;
use crate::error::{Error, Result};
use crate::state::{DensityMpo, EdgeState, MPO_MAX_SITES};
use crate::tensor_core::{
    cr, exp_i_hermitian, exp_i_pi_spin, identity, kron, max_abs_diff, pauli_rotation, pauli_x,
    pauli_y, pauli_z, spin1_operators, CMatrix, CVector, SpinAxis, C64,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

/// Largest chain for the full record enumeration.
pub const ORACLE_MAX_SITES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Alpha,
    Beta,
    Gamma,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Alpha, Outcome::Beta, Outcome::Gamma];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Exponents `(x, z)` this outcome adds to the by-product `X^x Z^z`.
    pub fn byproduct_bits(self) -> (usize, usize) {
        match self {
            Outcome::Alpha => (1, 0),
            Outcome::Beta => (1, 1),
            Outcome::Gamma => (0, 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    theta: f64,
    kets: [CVector; 3],
    projectors: [CMatrix; 3],
}

impl MeasurementBasis {
    /// `alpha`, `beta`, `gamma`: the zero-eigenvectors of `S~x(theta)`,
    /// `S~y(theta)` and `Sz`.
    pub fn new(theta: f64) -> Self {
        let lo = C64::from_polar(FRAC_1_SQRT_2, -theta / 2.0);
        let hi = C64::from_polar(FRAC_1_SQRT_2, theta / 2.0);
        let z = cr(0.0);
        let kets = [
            CVector::from_vec(vec![-lo, z, hi]),
            CVector::from_vec(vec![lo, z, hi]),
            CVector::from_vec(vec![z, cr(1.0), z]),
        ];
        let projectors = kets.clone().map(|k| &k * k.adjoint());
        Self {
            theta,
            kets,
            projectors,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn ket(&self, m: Outcome) -> &CVector {
        &self.kets[m.index()]
    }

    pub fn kets(&self) -> &[CVector; 3] {
        &self.kets
    }

    pub fn projector(&self, m: Outcome) -> &CMatrix {
        &self.projectors[m.index()]
    }

    pub fn projectors(&self) -> &[CMatrix; 3] {
        &self.projectors
    }
}

pub fn basis(theta: f64) -> MeasurementBasis {
    MeasurementBasis::new(theta)
}

/// Virtual-bond action `sum_k <m|k> P[k] A` of one measurement outcome.
pub fn single_measurement_action(m: Outcome, theta: f64) -> CMatrix {
    let b = MeasurementBasis::new(theta);
    let a = singlet_matrix();
    let mut out = CMatrix::zeros(2, 2);
    for (k, p) in spin1_projectors().iter().enumerate() {
        out += p * &a * b.ket(m)[k].conj();
    }
    out
}

/// Outcome string with its first desired site and by-product counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementRecord {
    outcomes: Vec<Outcome>,
    r_x: usize,
    r_y: usize,
    r_z: usize,
}

impl MeasurementRecord {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        let count = |f: fn(&Outcome) -> bool| outcomes.iter().filter(|m| f(m)).count();
        let r_x = count(|m| *m != Outcome::Gamma);
        let r_y = count(|m| *m != Outcome::Beta);
        let r_z = count(|m| *m != Outcome::Alpha);
        Self {
            outcomes,
            r_x,
            r_y,
            r_z,
        }
    }

    /// Record with externally tracked counters, rejected if they disagree
    /// with the outcomes.
    pub fn with_counters(outcomes: Vec<Outcome>, r_x: usize, r_y: usize, r_z: usize) -> Result<Self> {
        let rec = Self::new(outcomes);
        if rec.counters() != (r_x, r_y, r_z) {
            return Err(Error::InconsistentRecord(format!(
                "counters ({r_x}, {r_y}, {r_z}) but outcomes give {:?}",
                rec.counters()
            )));
        }
        Ok(rec)
    }

    /// Record number `index` in base-3 order, site 0 most significant.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut outcomes = vec![Outcome::Gamma; n];
        for slot in outcomes.iter_mut().rev() {
            *slot = Outcome::ALL[index % 3];
            index /= 3;
        }
        Self::new(outcomes)
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    /// First site with an `alpha` or `beta` outcome; `None` for all-`gamma`.
    pub fn l(&self) -> Option<usize> {
        self.outcomes.iter().position(|m| *m != Outcome::Gamma)
    }

    pub fn counters(&self) -> (usize, usize, usize) {
        (self.r_x, self.r_y, self.r_z)
    }
}

/// `X^a Z^b`.
fn pauli_power(a: usize, b: usize) -> CMatrix {
    let x = if a % 2 == 1 { pauli_x() } else { identity(2) };
    let z = if b % 2 == 1 { pauli_z() } else { identity(2) };
    x * z
}

/// The out-qubit correction `X^{r_X + 1} Z^{r_Z + 1}`.
pub fn byproduct(record: &MeasurementRecord) -> CMatrix {
    pauli_power(record.r_x + 1, record.r_z + 1)
}

fn correct_out(block: &CMatrix, b: &CMatrix) -> CMatrix {
    let ib = kron(&identity(2), b);
    &ib * block * ib.adjoint()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateAxis {
    Z,
    X,
}

impl fmt::Display for GateAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateAxis::Z => "z",
            GateAxis::X => "x",
        })
    }
}

impl std::str::FromStr for GateAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(GateAxis::Z),
            "x" => Ok(GateAxis::X),
            other => Err(Error::InvalidArgument(format!("unknown gate axis '{other}'"))),
        }
    }
}

/// Target rotation `exp(-i theta P / 2)` about `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GateSpec {
    pub axis: GateAxis,
    pub theta: f64,
}

impl GateSpec {
    pub fn new(axis: GateAxis, theta: f64) -> Self {
        Self { axis, theta }
    }

    pub fn z(theta: f64) -> Self {
        Self::new(GateAxis::Z, theta)
    }

    pub fn x(theta: f64) -> Self {
        Self::new(GateAxis::X, theta)
    }

    pub fn unitary(&self) -> CMatrix {
        let axis = match self.axis {
            GateAxis::Z => SpinAxis::Z,
            GateAxis::X => SpinAxis::X,
        };
        pauli_rotation(axis, self.theta)
    }

    /// `(|00> + e^{i theta}|11>)/sqrt 2` rotated to the gate axis, i.e. the
    /// Choi state `(1 x U)|Phi+>` up to a global phase.
    pub fn target_state(&self) -> CVector {
        let phi = CVector::from_vec(vec![cr(FRAC_1_SQRT_2), cr(0.0), cr(0.0), cr(FRAC_1_SQRT_2)]);
        kron(&identity(2), &self.unitary()) * phi
    }
}

/// Bulk rotation taking `Sz` to `Sx` and the matching edge rotation taking
/// `Z` to `X`. Both are real.
fn frame_rotations() -> (CMatrix, CMatrix) {
    let (_, sy, _) = spin1_operators();
    let bulk = exp_i_hermitian(&sy, -PI / 2.0).expect("Sy is Hermitian");
    let edge = pauli_rotation(SpinAxis::Y, PI / 2.0);
    (bulk, edge)
}

/// State seen by the Z-axis protocol when running the X-axis one: the whole
/// chain, edges included, is rotated by the inverse frame rotation.
fn to_z_frame(state: &DensityMpo) -> DensityMpo {
    let (bulk, edge) = frame_rotations();
    state.conjugated(&bulk.adjoint(), &edge.adjoint())
}

fn edge_frame() -> CMatrix {
    let (_, edge) = frame_rotations();
    kron(&edge, &edge)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssemblyMode {
    Oracle,
    Grouped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FidelityMode {
    Oracle,
    Grouped,
    Strings,
}

impl std::str::FromStr for FidelityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oracle" => Ok(FidelityMode::Oracle),
            "grouped" => Ok(FidelityMode::Grouped),
            "strings" => Ok(FidelityMode::Strings),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

fn require_unit_trace<S: EdgeState + ?Sized>(state: &S) -> Result<()> {
    let tr = state.trace()?;
    if (tr - cr(1.0)).norm() > 1e-10 {
        return Err(Error::NotUnitTrace(tr.re));
    }
    Ok(())
}

/// Projectors for one record: `theta` basis through site `l`, `theta = 0` after.
fn record_projectors(record: &MeasurementRecord, twisted: &MeasurementBasis, plain: &MeasurementBasis) -> Vec<CMatrix> {
    let l = record.l().unwrap_or(record.outcomes.len());
    record
        .outcomes
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            if i <= l {
                twisted.projector(m).clone()
            } else {
                plain.projector(m).clone()
            }
        })
        .collect()
}

/// Z-axis resource state by enumerating every record.
pub fn assemble_z_oracle<S: EdgeState + ?Sized>(state: &S, theta: f64) -> Result<CMatrix> {
    let n = state.n_bulk();
    if n > ORACLE_MAX_SITES {
        return Err(Error::SizeCap {
            what: "bulk sites for record enumeration",
            value: n,
            max: ORACLE_MAX_SITES,
        });
    }
    let twisted = MeasurementBasis::new(theta);
    let plain = MeasurementBasis::new(0.0);
    let mut rho = CMatrix::zeros(4, 4);
    for index in 0..3usize.pow(n as u32) {
        let record = MeasurementRecord::from_index(n, index);
        let block = state.edge_block(&record_projectors(&record, &twisted, &plain))?;
        rho += correct_out(&block, &byproduct(&record));
    }
    Ok(rho)
}

/// Z-axis resource state summed by first desired site and by-product parity.
///
/// Past site `l` the records are grouped by the parity `(p_x, p_z)` of their
/// by-product exponents. With `chi_{ab}(m) = (-1)^{a x_m + b z_m}` one has
/// `sum_m chi_{ab}(m) P'(m)` equal to `1, exp(i pi Sx), exp(i pi Sz),
/// exp(i pi Sy)` for `(a, b) = (0,0), (0,1), (1,0), (1,1)`, so each class is a
/// four-term character sum over string insertions.
pub fn assemble_z_grouped<S: EdgeState + ?Sized>(state: &S, theta: f64) -> Result<CMatrix> {
    let n = state.n_bulk();
    if n > MPO_MAX_SITES {
        return Err(Error::SizeCap {
            what: "bulk sites for grouped assembly",
            value: n,
            max: MPO_MAX_SITES,
        });
    }
    let twisted = MeasurementBasis::new(theta);
    let (sx, sy, sz) = spin1_operators();
    let characters = [
        [identity(3), exp_i_pi_spin(&sx)?],
        [exp_i_pi_spin(&sz)?, exp_i_pi_spin(&sy)?],
    ];
    let gamma = twisted.projector(Outcome::Gamma).clone();
    let mut rho = CMatrix::zeros(4, 4);
    for l in 0..n {
        for m_l in [Outcome::Alpha, Outcome::Beta] {
            let mut blocks = [[CMatrix::zeros(4, 4), CMatrix::zeros(4, 4)], [CMatrix::zeros(4, 4), CMatrix::zeros(4, 4)]];
            for (a, row) in characters.iter().enumerate() {
                for (b, tail) in row.iter().enumerate() {
                    let mut ops = vec![gamma.clone(); l];
                    ops.push(twisted.projector(m_l).clone());
                    ops.extend(std::iter::repeat_n(tail.clone(), n - l - 1));
                    blocks[a][b] = state.edge_block(&ops)?;
                }
            }
            let (x_l, z_l) = m_l.byproduct_bits();
            for px in 0..2 {
                for pz in 0..2 {
                    let mut class = CMatrix::zeros(4, 4);
                    for (a, row) in blocks.iter().enumerate() {
                        for (b, blk) in row.iter().enumerate() {
                            let sign = if (a * px + b * pz) % 2 == 0 { 0.25 } else { -0.25 };
                            class += blk * cr(sign);
                        }
                    }
                    let bp = pauli_power(x_l + px + 1, l + z_l + pz + 1);
                    rho += correct_out(&class, &bp);
                }
            }
        }
    }
    let all_gamma = state.edge_block(&vec![gamma; n])?;
    rho += correct_out(&all_gamma, &pauli_power(1, n + 1));
    Ok(rho)
}

/// Two-qubit resource state `rho_U` after measuring out every bulk site.
pub fn assemble_rho_u(state: &DensityMpo, gate: &GateSpec, mode: AssemblyMode) -> Result<CMatrix> {
    require_unit_trace(state)?;
    let run = |s: &DensityMpo| match mode {
        AssemblyMode::Oracle => assemble_z_oracle(s, gate.theta),
        AssemblyMode::Grouped => assemble_z_grouped(s, gate.theta),
    };
    match gate.axis {
        GateAxis::Z => run(state),
        GateAxis::X => {
            let rr = edge_frame();
            Ok(&rr * run(&to_z_frame(state))? * rr.adjoint())
        }
    }
}

/// The four stabilizer terms `Tr[rho_U S]/4` and their sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityBreakdown {
    pub term_ii: f64,
    pub term_zz: f64,
    pub term_xx: f64,
    pub term_xz: f64,
    pub f: f64,
}

impl FidelityBreakdown {
    fn from_terms(term_ii: f64, term_zz: f64, term_xx: f64, term_xz: f64) -> Self {
        Self {
            term_ii,
            term_zz,
            term_xx,
            term_xz,
            f: term_ii + term_zz + term_xx + term_xz,
        }
    }
}

/// Stabilizers `II, ZZ, X (R X R^dag), XZ (R XZ R^dag)` of the Z-axis target.
fn z_stabilizers(theta: f64) -> [CMatrix; 4] {
    let r = pauli_rotation(SpinAxis::Z, theta);
    let x = pauli_x();
    let xz = pauli_x() * pauli_z();
    [
        identity(4),
        kron(&pauli_z(), &pauli_z()),
        kron(&x, &(&r * &x * r.adjoint())),
        kron(&xz, &(&r * &xz * r.adjoint())),
    ]
}

/// Gate fidelity `<psi_U| rho_U |psi_U>` split into stabilizer terms.
pub fn gate_fidelity(rho_u: &CMatrix, gate: &GateSpec) -> Result<FidelityBreakdown> {
    if rho_u.shape() != (4, 4) {
        return Err(Error::ShapeMismatch {
            op: "gate_fidelity",
            left: rho_u.shape(),
            right: (4, 4),
        });
    }
    let tr = rho_u.trace();
    if (tr - cr(1.0)).norm() > 1e-10 {
        return Err(Error::NotUnitTrace(tr.re));
    }
    let rho = match gate.axis {
        GateAxis::Z => rho_u.clone(),
        GateAxis::X => {
            let rr = edge_frame();
            rr.adjoint() * rho_u * rr
        }
    };
    let t = z_stabilizers(gate.theta).map(|s| (&rho * s).trace().re / 4.0);
    Ok(FidelityBreakdown::from_terms(t[0], t[1], t[2], t[3]))
}

/// `sum_l Tr[rho  in x (-P(gamma))^{<l} x (P(alpha)+P(beta)) e^{i pi S~a}
/// x (e^{i pi S^a})^{>l} x out]`, plus the all-`gamma` term.
fn generalized_string<S: EdgeState + ?Sized>(
    state: &S,
    basis: &MeasurementBasis,
    axis: SpinAxis,
    in_op: &CMatrix,
    out_op: &CMatrix,
) -> Result<f64> {
    let n = state.n_bulk();
    let (tx, ty) = rotated_spins(basis.theta());
    let twisted = if axis == SpinAxis::X { tx } else { ty };
    let neg_gamma = -basis.projector(Outcome::Gamma);
    let head = (basis.projector(Outcome::Alpha) + basis.projector(Outcome::Beta)) * exp_i_pi_spin(&twisted)?;
    let tail = exp_i_pi_spin(&axis.spin1())?;
    let mut total = state.expectation(in_op, &vec![neg_gamma.clone(); n], out_op)?;
    for l in 0..n {
        let mut ops = vec![neg_gamma.clone(); l];
        ops.push(head.clone());
        ops.extend(std::iter::repeat_n(tail.clone(), n - l - 1));
        total += state.expectation(in_op, &ops, out_op)?;
    }
    Ok(total.re)
}

/// Z-axis fidelity terms from string correlators of the chain.
pub fn strings_z<S: EdgeState + ?Sized>(state: &S, theta: f64) -> Result<FidelityBreakdown> {
    let basis = MeasurementBasis::new(theta);
    let (x, y) = (pauli_x(), pauli_y());
    let (s, co) = theta.sin_cos();
    let t_zz = -crate::aklt::edge_string_correlator(state, SpinAxis::Z)?;
    let gx = |i: &CMatrix, o: &CMatrix| generalized_string(state, &basis, SpinAxis::X, i, o);
    let gy = |i: &CMatrix, o: &CMatrix| generalized_string(state, &basis, SpinAxis::Y, i, o);
    let t_xx = -co * gx(&x, &x)? + s * gy(&x, &y)?;
    let t_xz = -s * gx(&y, &x)? - co * gy(&y, &y)?;
    let t_ii = state.trace()?.re;
    Ok(FidelityBreakdown::from_terms(t_ii / 4.0, t_zz / 4.0, t_xx / 4.0, t_xz / 4.0))
}

/// Gate fidelity from string correlators, without forming `rho_U`.
pub fn fidelity_via_strings(state: &DensityMpo, gate: &GateSpec) -> Result<FidelityBreakdown> {
    require_unit_trace(state)?;
    match gate.axis {
        GateAxis::Z => strings_z(state, gate.theta),
        GateAxis::X => strings_z(&to_z_frame(state), gate.theta),
    }
}

/// Gate fidelity by any of the three evaluation paths.
pub fn fidelity(state: &DensityMpo, gate: &GateSpec, mode: FidelityMode) -> Result<FidelityBreakdown> {
    match mode {
        FidelityMode::Strings => fidelity_via_strings(state, gate),
        FidelityMode::Oracle => gate_fidelity(&assemble_rho_u(state, gate, AssemblyMode::Oracle)?, gate),
        FidelityMode::Grouped => gate_fidelity(&assemble_rho_u(state, gate, AssemblyMode::Grouped)?, gate),
    }
}

/// `1/4 - (1/4) sum_a Tr[rho X^a_in (prod_j e^{i pi S_j^a}) X^a_out]`.
pub fn identity_fidelity<S: EdgeState + ?Sized>(state: &S) -> Result<f64> {
    let mut f = 0.25 * state.trace()?.re;
    for axis in SpinAxis::ALL {
        f -= 0.25 * crate::aklt::edge_string_correlator(state, axis)?;
    }
    Ok(f)
}

/// `1 - (1 - cos theta) / (2 * 3^N)`.
pub fn pure_fidelity_closed_form(n: usize, theta: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    Ok(1.0 - (1.0 - theta.cos()) / (2.0 * 3f64.powi(n as i32)))
}

/// Signs `s_m` with `P(m) U = s_m P(m)` for `U` in
/// `exp(i pi S~x(theta)), exp(i pi S~y(theta)), exp(i pi Sz)` (rows), over
/// `alpha, beta, gamma` (columns).
pub fn eigen_relation_signs(theta: f64) -> Result<[[i8; 3]; 3]> {
    let basis = MeasurementBasis::new(theta);
    let (tx, ty) = rotated_spins(theta);
    let (_, _, sz) = spin1_operators();
    let mut signs = [[0i8; 3]; 3];
    for (row, h) in [tx, ty, sz].iter().enumerate() {
        let u = exp_i_pi_spin(h)?;
        for m in Outcome::ALL {
            let p = basis.projector(m);
            let lhs = p * &u;
            let sign = if max_abs_diff(&lhs, p) < 1e-12 {
                1
            } else if max_abs_diff(&lhs, &-p) < 1e-12 {
                -1
            } else {
                return Err(Error::InvalidArgument(format!(
                    "projector {m:?} is not an eigenprojector at theta={theta}"
                )));
            };
            signs[row][m.index()] = sign;
        }
    }
    Ok(signs)
}
