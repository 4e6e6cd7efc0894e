//! Complete Pick kernels on finite point sets.
//!
//! A complete Nevanlinna-Pick kernel is one that can be written as
//! `k(x, y) = 1 / (1 − ⟨u(x), u(y)⟩)` for a map `u` into the open unit ball,
//! after normalizing at a base point. The Szegő and Drury-Arveson kernels are
//! of this form with `u` the identity; the Bergman kernel `1/(1 − ⟨x, y⟩)²`
//! is not, and is kept here as a negative control for [`cnp_certificate`].
//!
//! Inner products are linear in the first argument and conjugate-linear in
//! the second, so `k(x, y)` is holomorphic in `x`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianSpectrum, COND_CAP, PSD_TAU};

/// `Σ a_i conj(b_i)`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

/// A point of the open unit ball of `C^m` (`m = 1` is the disk).
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<Complex64>,
}

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        let p = Self { coords };
        let norm_sq = p.norm_sq();
        if p.coords.is_empty() || !(norm_sq < 1.0) {
            return Err(Error::OutsideBall { index: 0, norm_sq });
        }
        Ok(p)
    }

    /// A point of the unit disk.
    pub fn disk(re: f64, im: f64) -> Result<Self> {
        Self::new(vec![Complex64::new(re, im)])
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The single coordinate of a disk point.
    pub fn z(&self) -> Complex64 {
        self.coords[0]
    }
}

/// An ordered set of pairwise distinct points of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    label: String,
}

impl PointSet {
    pub fn new(points: Vec<Point>, label: impl Into<String>) -> Result<Self> {
        if let Some(first) = points.first() {
            let dim = first.dim();
            for p in &points {
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: p.dim(),
                    });
                }
            }
        }
        for i in 0..points.len() {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint {
                        first: j,
                        second: i,
                    });
                }
            }
        }
        Ok(Self {
            points,
            label: label.into(),
        })
    }

    /// Disk points from complex coordinates.
    pub fn disk(zs: &[Complex64], label: impl Into<String>) -> Result<Self> {
        let pts = zs
            .iter()
            .enumerate()
            .map(|(i, &z)| {
                Point::new(vec![z]).map_err(|_| Error::OutsideBall {
                    index: i,
                    norm_sq: z.norm_sqr(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, label)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }

    /// The first coordinates of disk points.
    pub fn disk_coords(&self) -> Vec<Complex64> {
        self.points.iter().map(Point::z).collect()
    }

    /// The first `n` points, relabelled.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            points: self.points[..n.min(self.len())].to_vec(),
            label: format!("{}[..{}]", self.label, n),
        }
    }

    /// Points selected by index, in the given order.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        let pts = idx
            .iter()
            .map(|&i| {
                self.points.get(i).cloned().ok_or_else(|| {
                    Error::Invalid(format!("index {i} out of range for {} points", self.len()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(pts, format!("{}[sel]", self.label))
    }

    /// Same points with `p` inserted at the front, unless already present.
    pub fn with_base(&self, p: Point) -> Result<(Self, usize)> {
        if let Some(i) = self.points.iter().position(|q| *q == p) {
            return Ok((self.clone(), i));
        }
        let mut pts = Vec::with_capacity(self.len() + 1);
        pts.push(p);
        pts.extend(self.points.iter().cloned());
        Ok((Self::new(pts, self.label.clone())?, 0))
    }

    /// Radial grid: the origin, then ring `k = 1, 2, …` holding `per_ring·k`
    /// equally spaced points at radius `1 − 2^{-k}` (odd rings rotated by half
    /// a step). Points within a ring are emitted in van der Corput order so
    /// every prefix is spread around the circle; prefixes are nested.
    pub fn fejer_radial(n: usize, per_ring: usize) -> Result<Self> {
        if per_ring == 0 {
            return Err(Error::Invalid("per_ring must be positive".into()));
        }
        let mut zs = Vec::with_capacity(n);
        if n > 0 {
            zs.push(Complex64::new(0.0, 0.0));
        }
        let mut ring = 1usize;
        while zs.len() < n {
            let m = per_ring * ring;
            let radius = 1.0 - 0.5_f64.powi(ring as i32);
            let offset = if ring % 2 == 1 { 0.5 } else { 0.0 };
            for j in spread_order(m) {
                if zs.len() == n {
                    break;
                }
                let theta = std::f64::consts::TAU * (j as f64 + offset) / m as f64;
                zs.push(Complex64::from_polar(radius, theta));
            }
            ring += 1;
        }
        Self::disk(&zs, format!("fejer-radial(n={n},per_ring={per_ring})"))
    }

    /// Seeded uniform sample of the ball of radius `max_radius` in `C^dim`,
    /// thinned so that all pairwise pseudo-hyperbolic distances are at least
    /// `min_separation`. The seed is recorded in the label.
    pub fn ball_sample(n: usize, dim: usize, seed: u64, opts: &BallSampleOptions) -> Result<Self> {
        if dim == 0 || !(opts.max_radius > 0.0 && opts.max_radius < 1.0) {
            return Err(Error::Invalid(
                "ball sample needs dim ≥ 1 and 0 < radius < 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut attempts = 0usize;
        while pts.len() < n {
            attempts += 1;
            if attempts > opts.max_attempts {
                return Err(Error::Invalid(format!(
                    "could only place {} of {n} points with separation {}",
                    pts.len(),
                    opts.min_separation
                )));
            }
            let cand = loop {
                let v: Vec<f64> = (0..2 * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                    break v
                        .chunks(2)
                        .map(|c| Complex64::new(c[0], c[1]) * opts.max_radius)
                        .collect::<Vec<_>>();
                }
            };
            if pts
                .iter()
                .all(|q| pseudo_hyperbolic(q, &cand) >= opts.min_separation)
            {
                pts.push(cand);
            }
        }
        let points = pts
            .into_iter()
            .map(Point::new)
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, format!("ball(n={n},dim={dim},seed={seed})"))
    }
}

/// Options for [`PointSet::ball_sample`].
#[derive(Clone, Debug)]
pub struct BallSampleOptions {
    pub max_radius: f64,
    pub min_separation: f64,
    pub max_attempts: usize,
}

impl Default for BallSampleOptions {
    fn default() -> Self {
        Self {
            max_radius: 0.9,
            min_separation: 0.5,
            max_attempts: 200_000,
        }
    }
}

/// Pseudo-hyperbolic distance `sqrt(1 − (1−|x|²)(1−|y|²)/|1−⟨x,y⟩|²)` in the ball.
pub fn pseudo_hyperbolic(x: &[Complex64], y: &[Complex64]) -> f64 {
    let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let d = (Complex64::new(1.0, 0.0) - inner(x, y)).norm_sqr();
    (1.0 - (1.0 - nx) * (1.0 - ny) / d).max(0.0).sqrt()
}

fn van_der_corput(mut k: usize) -> f64 {
    let (mut v, mut den) = (0.0, 1.0);
    while k > 0 {
        den *= 2.0;
        v += (k & 1) as f64 / den;
        k >>= 1;
    }
    v
}

/// A permutation of `0..m` whose prefixes are spread evenly around the circle.
fn spread_order(m: usize) -> Vec<usize> {
    let mut seen = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut k = 0usize;
    while order.len() < m {
        let j = ((van_der_corput(k) * m as f64) as usize).min(m - 1);
        if !seen[j] {
            seen[j] = true;
            order.push(j);
        }
        k += 1;
        if k > 64 * m {
            order.extend((0..m).filter(|&j| !seen[j]));
            break;
        }
    }
    order
}

type EmbeddingMap = dyn Fn(&Point) -> Vec<Complex64> + Send + Sync;

/// An explicit map `u` from points into the open unit ball of some `C^m`.
#[derive(Clone)]
pub struct Embedding {
    name: String,
    map: Arc<EmbeddingMap>,
}

impl Embedding {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&Point) -> Vec<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            map: Arc::new(map),
        }
    }

    /// `u(x) = x`.
    pub fn identity() -> Self {
        Self::new("identity", |p: &Point| p.coords().to_vec())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, p: &Point) -> Vec<Complex64> {
        (self.map)(p)
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum CnpKernel {
    /// `1/(1 − x ȳ)` on the disk.
    Szego,
    /// `1/(1 − ⟨x, y⟩)` on the ball of `C^d`.
    DruryArveson(usize),
    /// `1/(1 − ⟨u(x), u(y)⟩)` for an explicit embedding.
    Embedding(Embedding),
    /// `1/(1 − ⟨x, y⟩)²`; not a complete Pick kernel.
    BergmanProbe,
}

impl CnpKernel {
    pub fn name(&self) -> String {
        match self {
            Self::Szego => "szego".into(),
            Self::DruryArveson(d) => format!("drury-arveson({d})"),
            Self::Embedding(e) => format!("embedding({})", e.name()),
            Self::BergmanProbe => "bergman-probe".into(),
        }
    }

    /// Checks that `p` lies in the domain of the kernel.
    pub fn admit(&self, index: usize, p: &Point) -> Result<()> {
        let expected = match self {
            Self::Szego => Some(1),
            Self::DruryArveson(d) => Some(*d),
            Self::Embedding(_) | Self::BergmanProbe => None,
        };
        if let Some(d) = expected {
            if p.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.dim(),
                });
            }
        }
        let norm_sq = match self {
            Self::Embedding(e) => e.apply(p).iter().map(|z| z.norm_sqr()).sum(),
            _ => p.norm_sq(),
        };
        if !(norm_sq < 1.0) {
            return Err(Error::OutsideBall { index, norm_sq });
        }
        Ok(())
    }

    pub fn eval(&self, x: &Point, y: &Point) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Self::Szego | Self::DruryArveson(_) => one / (one - inner(x.coords(), y.coords())),
            Self::Embedding(e) => one / (one - inner(&e.apply(x), &e.apply(y))),
            Self::BergmanProbe => {
                let s = one - inner(x.coords(), y.coords());
                one / (s * s)
            }
        }
    }
}

/// Options for [`kernel_matrix_with`].
#[derive(Clone, Copy, Debug)]
pub struct KernelMatrixOptions {
    pub tau: f64,
    pub cond_cap: f64,
}

impl Default for KernelMatrixOptions {
    fn default() -> Self {
        Self {
            tau: PSD_TAU,
            cond_cap: COND_CAP,
        }
    }
}

/// Exactly Hermitian matrix `K[i,j] = k(x_i, x_j)`, without any positivity check.
pub fn gram(kernel: &CnpKernel, pts: &PointSet) -> Result<CMatrix> {
    for (i, p) in pts.points().iter().enumerate() {
        kernel.admit(i, p)?;
    }
    let n = pts.len();
    let p = pts.points();
    let mut k = CMatrix::zeros(n, n);
    for i in 0..n {
        k[(i, i)] = Complex64::new(kernel.eval(&p[i], &p[i]).re, 0.0);
        for j in 0..i {
            let v = kernel.eval(&p[i], &p[j]);
            k[(i, j)] = v;
            k[(j, i)] = v.conj();
        }
    }
    Ok(k)
}

/// Kernel matrix on `pts`, checked to be positive definite and within the
/// default condition cap.
pub fn kernel_matrix(kernel: &CnpKernel, pts: &PointSet) -> Result<CMatrix> {
    kernel_matrix_with(kernel, pts, &KernelMatrixOptions::default())
}

pub fn kernel_matrix_with(
    kernel: &CnpKernel,
    pts: &PointSet,
    opts: &KernelMatrixOptions,
) -> Result<CMatrix> {
    let k = gram(kernel, pts)?;
    let spec = HermitianSpectrum::new(&k);
    if spec.min() < -opts.tau * spec.max() {
        return Err(Error::NonPositive {
            min_eigenvalue: spec.min(),
            max_eigenvalue: spec.max(),
        });
    }
    let cond = spec.condition();
    if !(cond <= opts.cond_cap) {
        return Err(Error::IllConditioned {
            estimate: cond,
            cap: opts.cond_cap,
        });
    }
    Ok(k)
}

/// Why a sample failed the complete Pick test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    NotPositive,
    DiagonalNotBelowOne,
}

#[derive(Clone, Debug)]
pub enum CnpCertificate {
    /// `E = V Vᴴ`; row `i` of `factor` is an embedding `u(x_i)` realizing the
    /// normalized kernel as `1/(1 − ⟨u(x_i), u(x_j)⟩)`.
    Accept { factor: CMatrix, max_diag: f64 },
    Reject {
        reason: RejectReason,
        min_eigenvalue: f64,
        witness: CVector,
        max_diag: f64,
    },
}

impl CnpCertificate {
    pub fn accepted(&self) -> bool {
        matches!(self, Self::Accept { .. })
    }
}

/// Matrix `E[i,j] = 1 − 1/k̂(x_i, x_j)` for the kernel normalized at `x_base`,
/// `k̂(x, y) = k(x, y) k(x₀, x₀) / (k(x, x₀) k(x₀, y))`.
pub fn normalized_defect(kernel: &CnpKernel, pts: &PointSet, base_index: usize) -> Result<CMatrix> {
    let n = pts.len();
    if base_index >= n {
        return Err(Error::Invalid(format!(
            "base index {base_index} out of range"
        )));
    }
    let k = gram(kernel, pts)?;
    let k00 = k[(base_index, base_index)];
    for i in 0..n {
        let kib = k[(i, base_index)];
        let scale = (k[(i, i)].re * k00.re).sqrt();
        if kib.norm() <= 1e-14 * scale {
            return Err(Error::ZeroKernelValue {
                index: i,
                modulus: kib.norm(),
            });
        }
    }
    let mut e = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let kij = k[(i, j)];
            if kij.norm() == 0.0 {
                return Err(Error::ZeroKernelValue {
                    index: i,
                    modulus: 0.0,
                });
            }
            let inv_hat = k[(i, base_index)] * k[(base_index, j)] / (kij * k00);
            e[(i, j)] = Complex64::new(1.0, 0.0) - inv_hat;
        }
    }
    Ok(linalg::hermitian_part(&e))
}

/// Finite-sample complete Pick test: accept iff the normalized defect matrix
/// is PSD (to `τ·λ_max`) and its diagonal stays below 1.
pub fn cnp_certificate(
    kernel: &CnpKernel,
    pts: &PointSet,
    base_index: usize,
) -> Result<CnpCertificate> {
    cnp_certificate_with(kernel, pts, base_index, PSD_TAU)
}

pub fn cnp_certificate_with(
    kernel: &CnpKernel,
    pts: &PointSet,
    base_index: usize,
    tau: f64,
) -> Result<CnpCertificate> {
    let e = normalized_defect(kernel, pts, base_index)?;
    let spec = HermitianSpectrum::new(&e);
    let max_diag = (0..e.nrows())
        .map(|i| e[(i, i)].re)
        .fold(f64::NEG_INFINITY, f64::max);
    let threshold = -tau * spec.max().max(0.0);
    if spec.min() < threshold {
        return Ok(CnpCertificate::Reject {
            reason: RejectReason::NotPositive,
            min_eigenvalue: spec.min(),
            witness: spec.vector(0),
            max_diag,
        });
    }
    if !(max_diag < 1.0) {
        return Ok(CnpCertificate::Reject {
            reason: RejectReason::DiagonalNotBelowOne,
            min_eigenvalue: spec.min(),
            witness: spec.vector(0),
            max_diag,
        });
    }
    let cut = tau * spec.max().max(0.0);
    let keep: Vec<usize> = (0..spec.values.len())
        .filter(|&j| spec.values[j] > cut)
        .collect();
    let n = e.nrows();
    let factor = CMatrix::from_fn(n, keep.len(), |i, c| {
        let j = keep[c];
        spec.vectors[(i, j)] * spec.values[j].sqrt()
    });
    Ok(CnpCertificate::Accept { factor, max_diag })
}

/// On-disk point set: `{"kernel": "szego", "points": [[re, im], ...]}`.
///
/// Ball points are lists of `[re, im]` pairs; `"dim"` is required for
/// `"drury-arveson"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub kernel: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub points: Vec<PointJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointJson {
    Disk([f64; 2]),
    Ball(Vec<[f64; 2]>),
}

impl PointJson {
    pub fn to_point(&self) -> Result<Point> {
        match self {
            Self::Disk([re, im]) => Point::disk(*re, *im),
            Self::Ball(cs) => Point::new(cs.iter().map(|[r, i]| Complex64::new(*r, *i)).collect()),
        }
    }

    pub fn from_point(p: &Point) -> Self {
        if p.dim() == 1 {
            Self::Disk([p.z().re, p.z().im])
        } else {
            Self::Ball(p.coords().iter().map(|z| [z.re, z.im]).collect())
        }
    }
}

/// Parses a kernel name as used in JSON files and configs.
pub fn kernel_from_name(name: &str, dim: Option<usize>) -> Result<CnpKernel> {
    match name {
        "szego" => Ok(CnpKernel::Szego),
        "drury-arveson" => dim
            .map(CnpKernel::DruryArveson)
            .ok_or_else(|| Error::Invalid("drury-arveson needs \"dim\"".into())),
        "bergman-probe" => Ok(CnpKernel::BergmanProbe),
        "embedding-identity" => Ok(CnpKernel::Embedding(Embedding::identity())),
        other => Err(Error::Invalid(format!("unknown kernel `{other}`"))),
    }
}

impl PointSetFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(&self) -> Result<(CnpKernel, PointSet)> {
        let kernel = kernel_from_name(&self.kernel, self.dim)?;
        let pts = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.to_point().map_err(|e| match e {
                    Error::OutsideBall { norm_sq, .. } => Error::OutsideBall { index: i, norm_sq },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = self.label.clone().unwrap_or_else(|| "json".into());
        Ok((kernel, PointSet::new(pts, label)?))
    }

    pub fn from_set(kernel: &CnpKernel, pts: &PointSet) -> Self {
        let (name, dim) = match kernel {
            CnpKernel::Szego => ("szego".to_string(), None),
            CnpKernel::DruryArveson(d) => ("drury-arveson".to_string(), Some(*d)),
            CnpKernel::BergmanProbe => ("bergman-probe".to_string(), None),
            CnpKernel::Embedding(_) => ("embedding-identity".to_string(), None),
        };
        Self {
            kernel: name,
            dim,
            label: Some(pts.label().to_string()),
            points: pts.points().iter().map(PointJson::from_point).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn szego_pair() -> PointSet {
        PointSet::disk(&[c(0.0, 0.0), c(0.5, 0.0)], "pair").unwrap()
    }

    #[test]
    fn szego_origin_is_one() {
        let pts = PointSet::disk(&[c(0.0, 0.0)], "o").unwrap();
        let k = kernel_matrix(&CnpKernel::Szego, &pts).unwrap();
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn szego_pair_values() {
        let k = kernel_matrix(&CnpKernel::Szego, &szego_pair()).unwrap();
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
        assert_eq!(k[(0, 1)], c(1.0, 0.0));
        assert!((k[(1, 1)] - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn drury_arveson_origin() {
        let p = Point::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        let pts = PointSet::new(vec![p], "o").unwrap();
        let k = kernel_matrix(&CnpKernel::DruryArveson(2), &pts).unwrap();
        assert_eq!(k[(0, 0)], c(1.0, 0.0));
    }

    #[test]
    fn rejects_duplicates_and_boundary() {
        assert!(matches!(
            PointSet::disk(&[c(0.1, 0.0), c(0.1, 0.0)], "d"),
            Err(Error::DuplicatePoint {
                first: 0,
                second: 1
            })
        ));
        assert!(matches!(
            PointSet::disk(&[c(0.0, 0.0), c(1.0, 0.0)], "b"),
            Err(Error::OutsideBall { index: 1, .. })
        ));
    }

    #[test]
    fn szego_rejects_ball_points() {
        let p = Point::new(vec![c(0.1, 0.0), c(0.0, 0.1)]).unwrap();
        let pts = PointSet::new(vec![p], "b").unwrap();
        assert!(matches!(
            kernel_matrix(&CnpKernel::Szego, &pts),
            Err(Error::DimensionMismatch {
                expected: 1,
                got: 2
            })
        ));
    }

    #[test]
    fn near_coincident_points_are_ill_conditioned() {
        let pts = PointSet::disk(&[c(0.3, 0.0), c(0.3 + 1e-9, 0.0)], "near").unwrap();
        assert!(matches!(
            kernel_matrix(&CnpKernel::Szego, &pts),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn szego_certificate_accepts_rank_one() {
        let pts = PointSet::disk(&[c(0.0, 0.0), c(0.5, 0.0), c(0.0, 1.0 / 3.0)], "s").unwrap();
        match cnp_certificate(&CnpKernel::Szego, &pts, 0).unwrap() {
            CnpCertificate::Accept { factor, .. } => {
                assert_eq!(factor.ncols(), 1);
                // u(x_i) u(x_j)* reproduces x_i conj(x_j)
                let g = &factor * factor.adjoint();
                let zs = pts.disk_coords();
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((g[(i, j)] - zs[i] * zs[j].conj()).norm() < 1e-12);
                    }
                }
            }
            other => panic!("expected accept, got {other:?}"),
        }
    }

    #[test]
    fn bergman_probe_rejected_with_known_eigenvalue() {
        let pts = PointSet::disk(&[c(0.5, 0.0), c(-0.5, 0.0)], "pm").unwrap();
        let (pts, base) = pts.with_base(Point::disk(0.0, 0.0).unwrap()).unwrap();
        let e = normalized_defect(&CnpKernel::BergmanProbe, &pts, base).unwrap();
        assert!((e[(1, 1)] - c(7.0 / 16.0, 0.0)).norm() < 1e-15);
        assert!((e[(1, 2)] - c(-9.0 / 16.0, 0.0)).norm() < 1e-15);
        match cnp_certificate(&CnpKernel::BergmanProbe, &pts, base).unwrap() {
            CnpCertificate::Reject {
                reason,
                min_eigenvalue,
                ..
            } => {
                assert_eq!(reason, RejectReason::NotPositive);
                assert!((min_eigenvalue + 0.125).abs() < 1e-12);
            }
            other => panic!("expected reject, got {other:?}"),
        }
    }

    #[test]
    fn embedding_identity_accepts() {
        let k = CnpKernel::Embedding(Embedding::identity());
        let pts = PointSet::disk(&[c(0.2, 0.1), c(-0.4, 0.3), c(0.1, -0.6)], "e").unwrap();
        assert!(cnp_certificate(&k, &pts, 1).unwrap().accepted());
    }

    #[test]
    fn base_index_out_of_range() {
        let pts = PointSet::disk(&[c(0.0, 0.0), c(0.5, 0.0)], "z").unwrap();
        assert!(matches!(
            cnp_certificate(&CnpKernel::Szego, &pts, 5),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn fejer_radial_prefixes_nest() {
        let big = PointSet::fejer_radial(61, 4).unwrap();
        let small = PointSet::fejer_radial(25, 4).unwrap();
        assert_eq!(&big.points()[..25], small.points());
        assert_eq!(big.points()[0], Point::disk(0.0, 0.0).unwrap());
        // rings 1..=4 hold 4, 8, 12, 16 points
        let r5 = big.points()[41].z().norm();
        assert!((r5 - (1.0 - 1.0 / 32.0)).abs() < 1e-15);
    }

    #[test]
    fn ball_sample_is_seeded_and_separated() {
        let opts = BallSampleOptions::default();
        let a = PointSet::ball_sample(12, 2, 7, &opts).unwrap();
        let b = PointSet::ball_sample(12, 2, 7, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.label().contains("seed=7"));
        for i in 0..a.len() {
            for j in 0..i {
                let d = pseudo_hyperbolic(a.points()[i].coords(), a.points()[j].coords());
                assert!(d >= opts.min_separation);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"kernel": "szego", "points": [[0.0, 0.0], [0.5, 0.0]]}"#;
        let (k, pts) = PointSetFile::from_json(s).unwrap().load().unwrap();
        assert!(matches!(k, CnpKernel::Szego));
        assert_eq!(
            pts,
            PointSet::disk(&[c(0.0, 0.0), c(0.5, 0.0)], "json").unwrap()
        );
        let ball = r#"{"kernel": "drury-arveson", "dim": 2, "points": [[[0.1, 0.0], [0.0, 0.2]]]}"#;
        let (k, pts) = PointSetFile::from_json(ball).unwrap().load().unwrap();
        assert!(matches!(k, CnpKernel::DruryArveson(2)));
        assert_eq!(pts.dim(), 2);
        assert!(PointSetFile::from_json(r#"{"kernel":"szego","points":[],"extra":1}"#).is_err());
    }
}
