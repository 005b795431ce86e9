//! Mixed states of the edge-qubit + spin-1 chain.
//!
//! Two representations share one read-only interface, [`EdgeState`]:
//!
//! * [`DensityMpo`] stores one operator-valued tensor per site. Bulk tensors
//!   are blocks `W[s,s']` (one matrix per pair of physical indices), edge
//!   tensors are vectors indexed by the edge qubit's `(sigma, sigma')`.
//! * [`DenseDensity`] is the full `4 * 3^N` square density matrix, used as an
//!   independent oracle for small chains.
//!
//! Physical ordering is `in, site 0, ..., site N-1, out`, with `in` the most
//! significant digit of a dense index.

use crate::aklt::MpsChain;
use crate::error::{Error, Result};
use crate::tensor_core::{cr, identity, kron, CMatrix, CVector, C64};

/// Largest chain handled by the MPO path.
pub const MPO_MAX_SITES: usize = 12;
/// Largest chain converted to a dense density matrix.
pub const DENSE_DENSITY_MAX_SITES: usize = 5;

/// Read access shared by both state representations.
pub trait EdgeState {
    fn n_bulk(&self) -> usize;

    /// `Tr_bulk[rho (O_0 x ... x O_{N-1})]` as a 4x4 operator on `(in, out)`,
    /// indexed `2*sigma_in + sigma_out`.
    fn edge_block(&self, site_ops: &[CMatrix]) -> Result<CMatrix>;

    /// `Tr[rho (A_in x O_0 x ... x O_{N-1} x B_out)]`.
    fn expectation(&self, in_op: &CMatrix, site_ops: &[CMatrix], out_op: &CMatrix) -> Result<C64> {
        let block = self.edge_block(site_ops)?;
        Ok((block * kron(in_op, out_op)).trace())
    }

    fn trace(&self) -> Result<C64> {
        let ids = vec![identity(3); self.n_bulk()];
        Ok(self.edge_block(&ids)?.trace())
    }
}

fn check_site_ops(n: usize, site_ops: &[CMatrix]) -> Result<()> {
    if site_ops.len() != n {
        return Err(Error::InvalidArgument(format!(
            "expected {n} site operators, got {}",
            site_ops.len()
        )));
    }
    if let Some(op) = site_ops.iter().find(|op| op.shape() != (3, 3)) {
        return Err(Error::ShapeMismatch {
            op: "site operator",
            left: op.shape(),
            right: (3, 3),
        });
    }
    Ok(())
}

/// Operator-valued tensor of one spin-1 site: `blocks[3*s + s']` is `W[s,s']`.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteMpo {
    pub(crate) blocks: Vec<CMatrix>,
}

impl SiteMpo {
    pub fn from_blocks(blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != 9 {
            return Err(Error::InvalidArgument(format!(
                "site tensor needs 9 blocks, got {}",
                blocks.len()
            )));
        }
        let shape = blocks[0].shape();
        if let Some(b) = blocks.iter().find(|b| b.shape() != shape) {
            return Err(Error::ShapeMismatch {
                op: "site tensor block",
                left: shape,
                right: b.shape(),
            });
        }
        Ok(Self { blocks })
    }

    pub fn block(&self, s: usize, s_prime: usize) -> &CMatrix {
        &self.blocks[3 * s + s_prime]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// Bond dimensions (left, right) of the operator tensor.
    pub fn bond_dims(&self) -> (usize, usize) {
        self.blocks[0].shape()
    }

    /// `sum_{s,s'} W[s,s'] O[s',s]`.
    pub fn transfer(&self, op: &CMatrix) -> CMatrix {
        let (l, r) = self.bond_dims();
        let mut out = CMatrix::zeros(l, r);
        for s in 0..3 {
            for sp in 0..3 {
                let w = op[(sp, s)];
                if w != C64::new(0.0, 0.0) {
                    out += self.block(s, sp) * w;
                }
            }
        }
        out
    }

    /// `W'[s,s'] = sum_{t,t'} U[s,t] W[t,t'] conj(U[s',t'])`, i.e. the tensor of
    /// `U rho U^dag` restricted to this site.
    pub fn conjugated(&self, u: &CMatrix) -> SiteMpo {
        let (l, r) = self.bond_dims();
        let mut blocks = vec![CMatrix::zeros(l, r); 9];
        for s in 0..3 {
            for sp in 0..3 {
                let acc = &mut blocks[3 * s + sp];
                for t in 0..3 {
                    for tp in 0..3 {
                        let w = u[(s, t)] * u[(sp, tp)].conj();
                        if w.norm() > 0.0 {
                            *acc += self.block(t, tp) * w;
                        }
                    }
                }
            }
        }
        SiteMpo { blocks }
    }
}

/// Matrix-product-operator density matrix with qubit edges.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMpo {
    /// Row vectors, index `2*sigma + sigma'`.
    edge_in: Vec<CVector>,
    sites: Vec<SiteMpo>,
    /// Column vectors, index `2*tau + tau'`.
    edge_out: Vec<CVector>,
}

impl DensityMpo {
    pub fn new(edge_in: Vec<CVector>, sites: Vec<SiteMpo>, edge_out: Vec<CVector>) -> Result<Self> {
        if edge_in.len() != 4 || edge_out.len() != 4 {
            return Err(Error::InvalidArgument("edge tensors need 4 components".into()));
        }
        if sites.is_empty() {
            return Err(Error::InvalidArgument("chain needs at least one bulk site".into()));
        }
        if sites.len() > MPO_MAX_SITES {
            return Err(Error::SizeCap {
                what: "bulk sites",
                value: sites.len(),
                max: MPO_MAX_SITES,
            });
        }
        let mut bond = edge_in[0].len();
        for site in &sites {
            let (l, r) = site.bond_dims();
            if l != bond {
                return Err(Error::ShapeMismatch {
                    op: "mpo bond",
                    left: (bond, bond),
                    right: (l, r),
                });
            }
            bond = r;
        }
        if edge_out.iter().any(|v| v.len() != bond) || edge_in.iter().any(|v| v.len() != edge_in[0].len()) {
            return Err(Error::InvalidArgument("edge tensor dimension mismatch".into()));
        }
        Ok(Self {
            edge_in,
            sites,
            edge_out,
        })
    }

    /// `|psi><psi|` for a pure chain.
    pub fn from_pure(chain: &MpsChain) -> Result<Self> {
        let pair = |v: &[CVector; 2]| -> Vec<CVector> {
            let mut out = Vec::with_capacity(4);
            for a in v {
                for b in v {
                    let conj_b = b.map(|x| x.conj());
                    out.push(a.kronecker(&conj_b));
                }
            }
            out
        };
        let sites = chain
            .bulk_tensors()
            .iter()
            .map(|m| {
                let mut blocks = Vec::with_capacity(9);
                for a in m {
                    for b in m {
                        blocks.push(kron(a, &b.map(|x| x.conj())));
                    }
                }
                SiteMpo { blocks }
            })
            .collect();
        Self::new(pair(chain.edge_in()), sites, pair(chain.edge_out()))
    }

    /// Identity divided by dimension, at bond dimension one.
    pub fn maximally_mixed(n_bulk: usize) -> Result<Self> {
        let edge = |diag: f64| -> Vec<CVector> {
            (0..4)
                .map(|k| {
                    let (a, b) = (k / 2, k % 2);
                    CVector::from_element(1, cr(if a == b { diag } else { 0.0 }))
                })
                .collect()
        };
        let site = SiteMpo {
            blocks: (0..9)
                .map(|k| CMatrix::from_element(1, 1, cr(if k / 3 == k % 3 { 1.0 / 3.0 } else { 0.0 })))
                .collect(),
        };
        Self::new(edge(0.5), vec![site; n_bulk], edge(0.5))
    }

    pub fn sites(&self) -> &[SiteMpo] {
        &self.sites
    }

    pub fn site(&self, i: usize) -> Result<&SiteMpo> {
        self.sites.get(i).ok_or(Error::OutOfRange {
            index: i,
            limit: self.sites.len(),
        })
    }

    pub(crate) fn site_mut(&mut self, i: usize) -> Result<&mut SiteMpo> {
        let limit = self.sites.len();
        self.sites.get_mut(i).ok_or(Error::OutOfRange { index: i, limit })
    }

    pub fn edge_in(&self) -> &[CVector] {
        &self.edge_in
    }

    pub fn edge_out(&self) -> &[CVector] {
        &self.edge_out
    }

    /// Product of site transfer matrices for the given local operators.
    pub fn transfer_product(&self, site_ops: &[CMatrix]) -> Result<CMatrix> {
        check_site_ops(self.sites.len(), site_ops)?;
        let mut iter = self.sites.iter().zip(site_ops);
        let (s0, o0) = iter.next().expect("non-empty chain");
        Ok(iter.fold(s0.transfer(o0), |acc, (s, o)| acc * s.transfer(o)))
    }

    /// Global conjugation `V rho V^dag` with `V = u_edge x u_bulk^{xN} x u_edge`.
    pub fn conjugated(&self, u_bulk: &CMatrix, u_edge: &CMatrix) -> DensityMpo {
        let conj_edge = |edge: &[CVector]| -> Vec<CVector> {
            (0..4)
                .map(|k| {
                    let (s, sp) = (k / 2, k % 2);
                    let mut acc = CVector::zeros(edge[0].len());
                    for t in 0..2 {
                        for tp in 0..2 {
                            acc += &edge[2 * t + tp] * (u_edge[(s, t)] * u_edge[(sp, tp)].conj());
                        }
                    }
                    acc
                })
                .collect()
        };
        DensityMpo {
            edge_in: conj_edge(&self.edge_in),
            sites: self.sites.iter().map(|s| s.conjugated(u_bulk)).collect(),
            edge_out: conj_edge(&self.edge_out),
        }
    }

    /// Full dense density matrix (small chains only).
    pub fn to_dense(&self) -> Result<DenseDensity> {
        let n = self.sites.len();
        if n > DENSE_DENSITY_MAX_SITES {
            return Err(Error::SizeCap {
                what: "bulk sites for dense density",
                value: n,
                max: DENSE_DENSITY_MAX_SITES,
            });
        }
        // partial[(r * rows + c)] is the row vector for prefix row index r and column index c.
        let mut rows = 2;
        let mut width = self.edge_in[0].len();
        let mut partial: Vec<C64> = Vec::with_capacity(4 * width);
        for r in 0..2 {
            for c in 0..2 {
                partial.extend(self.edge_in[2 * r + c].iter());
            }
        }
        for site in &self.sites {
            let (_, next_width) = site.bond_dims();
            let next_rows = rows * 3;
            let mut next = vec![C64::new(0.0, 0.0); next_rows * next_rows * next_width];
            for r in 0..rows {
                for c in 0..rows {
                    let base = (r * rows + c) * width;
                    let v = &partial[base..base + width];
                    for s in 0..3 {
                        for sp in 0..3 {
                            let w = site.block(s, sp);
                            let nr = r * 3 + s;
                            let nc = c * 3 + sp;
                            let out = (nr * next_rows + nc) * next_width;
                            for j in 0..next_width {
                                let mut acc = C64::new(0.0, 0.0);
                                for (i, vi) in v.iter().enumerate() {
                                    acc += vi * w[(i, j)];
                                }
                                next[out + j] = acc;
                            }
                        }
                    }
                }
            }
            partial = next;
            rows = next_rows;
            width = next_width;
        }
        let dim = rows * 2;
        let mut rho = CMatrix::zeros(dim, dim);
        for r in 0..rows {
            for c in 0..rows {
                let base = (r * rows + c) * width;
                let v = &partial[base..base + width];
                for t in 0..2 {
                    for tp in 0..2 {
                        let e = &self.edge_out[2 * t + tp];
                        let val: C64 = v.iter().zip(e.iter()).map(|(a, b)| a * b).sum();
                        rho[(r * 2 + t, c * 2 + tp)] = val;
                    }
                }
            }
        }
        DenseDensity::new(n, rho)
    }
}

impl EdgeState for DensityMpo {
    fn n_bulk(&self) -> usize {
        self.sites.len()
    }

    fn edge_block(&self, site_ops: &[CMatrix]) -> Result<CMatrix> {
        let product = self.transfer_product(site_ops)?;
        let mut block = CMatrix::zeros(4, 4);
        for s in 0..2 {
            for sp in 0..2 {
                let left = self.edge_in[2 * s + sp].transpose() * &product;
                for t in 0..2 {
                    for tp in 0..2 {
                        let v = (&left * &self.edge_out[2 * t + tp])[(0, 0)];
                        block[(2 * s + t, 2 * sp + tp)] = v;
                    }
                }
            }
        }
        Ok(block)
    }
}

/// Dense density matrix over `in x (spin-1)^N x out`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseDensity {
    n_bulk: usize,
    rho: CMatrix,
}

impl DenseDensity {
    pub fn new(n_bulk: usize, rho: CMatrix) -> Result<Self> {
        let dim = dense_dim(n_bulk);
        if rho.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch {
                op: "dense density",
                left: rho.shape(),
                right: (dim, dim),
            });
        }
        Ok(Self { n_bulk, rho })
    }

    pub fn from_pure(n_bulk: usize, psi: &CVector) -> Result<Self> {
        Self::new(n_bulk, psi * psi.adjoint())
    }

    pub fn maximally_mixed(n_bulk: usize) -> Result<Self> {
        let dim = dense_dim(n_bulk);
        Self::new(n_bulk, identity(dim) * cr(1.0 / dim as f64))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }

    pub fn dims(&self) -> Vec<usize> {
        layout(self.n_bulk)
    }
}

impl EdgeState for DenseDensity {
    fn n_bulk(&self) -> usize {
        self.n_bulk
    }

    fn edge_block(&self, site_ops: &[CMatrix]) -> Result<CMatrix> {
        check_site_ops(self.n_bulk, site_ops)?;
        let dims = self.dims();
        let mut y = self.rho.clone();
        for (k, op) in site_ops.iter().enumerate() {
            y = apply_right(&y, &dims, k + 1, op);
        }
        let bulk: usize = 3usize.pow(self.n_bulk as u32);
        let mut block = CMatrix::zeros(4, 4);
        for s in 0..2 {
            for t in 0..2 {
                for sp in 0..2 {
                    for tp in 0..2 {
                        let mut acc = C64::new(0.0, 0.0);
                        for b in 0..bulk {
                            acc += y[((s * bulk + b) * 2 + t, (sp * bulk + b) * 2 + tp)];
                        }
                        block[(2 * s + t, 2 * sp + tp)] = acc;
                    }
                }
            }
        }
        Ok(block)
    }
}

pub fn dense_dim(n_bulk: usize) -> usize {
    4 * 3usize.pow(n_bulk as u32)
}

/// Factor dimensions `[2, 3, ..., 3, 2]`.
pub fn layout(n_bulk: usize) -> Vec<usize> {
    let mut dims = vec![2];
    dims.extend(std::iter::repeat_n(3, n_bulk));
    dims.push(2);
    dims
}

fn split(dims: &[usize], k: usize) -> (usize, usize, usize) {
    let outer: usize = dims[..k].iter().product();
    let inner: usize = dims[k + 1..].iter().product();
    (outer, dims[k], inner)
}

/// `(I x op x I) m` with `op` acting on factor `k`.
pub fn apply_left(m: &CMatrix, dims: &[usize], k: usize, op: &CMatrix) -> CMatrix {
    let (outer, d, inner) = split(dims, k);
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for col in 0..m.ncols() {
        for o in 0..outer {
            for i in 0..inner {
                for a in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for b in 0..d {
                        let w = op[(a, b)];
                        if w.re != 0.0 || w.im != 0.0 {
                            acc += w * m[((o * d + b) * inner + i, col)];
                        }
                    }
                    out[((o * d + a) * inner + i, col)] = acc;
                }
            }
        }
    }
    out
}

/// `m (I x op x I)` with `op` acting on factor `k`.
pub fn apply_right(m: &CMatrix, dims: &[usize], k: usize, op: &CMatrix) -> CMatrix {
    let (outer, d, inner) = split(dims, k);
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for o in 0..outer {
        for i in 0..inner {
            for a in 0..d {
                let col_out = (o * d + a) * inner + i;
                for b in 0..d {
                    let w = op[(b, a)];
                    if w.re == 0.0 && w.im == 0.0 {
                        continue;
                    }
                    let col_in = (o * d + b) * inner + i;
                    for row in 0..m.nrows() {
                        out[(row, col_out)] += m[(row, col_in)] * w;
                    }
                }
            }
        }
    }
    out
}

/// `(I x op x I) m (I x op x I)^dag`.
pub fn conjugate_local(m: &CMatrix, dims: &[usize], k: usize, op: &CMatrix) -> CMatrix {
    let left = apply_left(m, dims, k, op);
    apply_right(&left, dims, k, &op.adjoint())
}
