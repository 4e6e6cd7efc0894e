//! Reproducing kernels of Dom T and Dom T* under their graph norms.
//!
//! Two independent routes are provided. The closed forms
//!
//! ```text
//! K^T  = (K⁻¹ + D̄ K⁻¹ D)⁻¹ = K − (DK)ᴴ G_B⁻¹ (DK)
//! K^T* = K G_B⁻¹ K,          G_B = K + D K Dᴴ
//! ```
//!
//! factor `G_B` once. The graph route instead builds the graph of `T` inside
//! the doubled space `H ⊕ H`, orthonormalizes it by QR in whitened
//! coordinates, and projects `(k_y, 0)` onto `G(T)` and onto
//! `J G(T)^⊥ = G(T*)`, reading off first components.

use super::{FinSampleSpace, SampledMultiplier, FACTOR_FLOOR};
use crate::error::Result;
use crate::linalg::{self, CMatrix, PivotedCholesky};

/// The Dom T* kernel together with the Gram matrix `G_B` of the kernel
/// functions inside Dom T*.
#[derive(Clone, Debug)]
pub struct DomTStarKernel {
    pub kernel: CMatrix,
    pub gram_b: CMatrix,
}

/// Both kernels as computed by explicit graph projection, in the kernel
/// basis and in the orthonormal frame `K = X Xᴴ` (where `dom_t = X F Xᴴ`).
#[derive(Clone, Debug)]
pub struct GraphKernels {
    pub dom_t: CMatrix,
    pub dom_t_star: CMatrix,
    /// `P_{G(T)}` compressed to the first summand, in frame coordinates.
    pub frame_dom_t: CMatrix,
    /// `P_{G(T*)}` compressed to the first summand, in frame coordinates.
    pub frame_dom_t_star: CMatrix,
}

impl FinSampleSpace {
    /// `G_B = K + D_h K D_hᴴ`, i.e. `⟨k_j, k_i⟩_{Dom T*} = (1 + h_i h̄_j) K[i,j]`.
    pub fn gram_b(&self, h: &SampledMultiplier) -> Result<CMatrix> {
        self.check_len(h.len())?;
        Ok(linalg::hermitian_part(
            &(&self.k + linalg::diag_congruence(&h.values, &self.k)),
        ))
    }

    fn gram_b_factor(&self, h: &SampledMultiplier) -> Result<(CMatrix, PivotedCholesky)> {
        let g = self.gram_b(h)?;
        let f = PivotedCholesky::new(&g, FACTOR_FLOOR)?;
        Ok((g, f))
    }

    /// Reproducing kernel of Dom T with `‖f‖² + ‖Tf‖²`.
    pub fn dom_t_kernel(&self, h: &SampledMultiplier) -> Result<CMatrix> {
        let (_, gf) = self.gram_b_factor(h)?;
        let dk = CMatrix::from_fn(self.len(), self.len(), |i, j| h.values[i] * self.k[(i, j)]);
        let v = gf.forward(&dk);
        Ok(linalg::hermitian_part(&(&self.k - v.adjoint() * v)))
    }

    /// Reproducing kernel of Dom T* with `‖f‖² + ‖T*f‖²`.
    pub fn dom_t_star_kernel(&self, h: &SampledMultiplier) -> Result<DomTStarKernel> {
        let (gram_b, gf) = self.gram_b_factor(h)?;
        let w = gf.forward(&self.k);
        Ok(DomTStarKernel {
            kernel: linalg::hermitian_part(&(w.adjoint() * w)),
            gram_b,
        })
    }

    /// Both kernels by orthogonal projection onto the graphs in `H ⊕ H`.
    pub fn graph_projection_kernels(&self, h: &SampledMultiplier) -> Result<GraphKernels> {
        self.check_len(h.len())?;
        let n = self.len();
        let chol = &self.chol;

        // Graph basis columns (e_j, h_j e_j) taken to frame coordinates X⁻¹.
        let top = chol.forward(&CMatrix::identity(n, n));
        let bottom = chol.forward(&linalg::diag(&h.values));
        let mut basis = CMatrix::zeros(2 * n, n);
        basis.view_mut((0, 0), (n, n)).copy_from(&top);
        basis.view_mut((n, 0), (n, n)).copy_from(&bottom);
        let q = basis.qr().q();
        let q1 = q.view((0, 0), (n, n));
        let q2 = q.view((n, 0), (n, n));

        // (k_y, 0) has frame coordinates (Xᴴ e_y, 0), so P_G(k_y, 0) has first
        // component X (Q₁Q₁ᴴ) Xᴴ e_y.
        let frame_dom_t = linalg::hermitian_part(&(q1 * q1.adjoint()));
        // P_{G(T*)} = J (I − P_G) Jᴴ with J(u, v) = (−v, u): the first-summand
        // compression is I − Q₂Q₂ᴴ.
        let frame_dom_t_star =
            linalg::hermitian_part(&(CMatrix::identity(n, n) - q2 * q2.adjoint()));

        let x = chol.left_factor();
        let lift = |f: &CMatrix| linalg::hermitian_part(&(&x * f * x.adjoint()));
        Ok(GraphKernels {
            dom_t: lift(&frame_dom_t),
            dom_t_star: lift(&frame_dom_t_star),
            frame_dom_t,
            frame_dom_t_star,
        })
    }
}
