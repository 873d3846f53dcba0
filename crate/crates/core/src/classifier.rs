//! Decision procedure for linear maps on `Herm(C^n)` that send rank-one
//! projections to rank-one projections.
//!
//! [`classify`] first checks the hypothesis on a fixed spanning set of
//! projections ([`ProbeSet`]) plus Haar-random samples, then tests constancy
//! on the probe images and finally recovers the unitary or anti-unitary that
//! induces the map ([`recover_isometry`]). Nothing is snapped: inputs that
//! miss the hypothesis by more than `tol` are reported with their defect.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coords::{embed_isometry, embed_trace_constant, CoordsError, SuperOperator};
use crate::linalg::{
    c64, herm_eig, inner, ComplexMatrix, HermitianMatrix, LinalgError, Projection, RngState, C64,
};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Random Hermitian matrices used for residual checks.
pub const RESIDUAL_SAMPLES: usize = 20;
/// Allowed distance of each antilinearity indicator from `±i`.
pub const ANTILINEARITY_MARGIN: f64 = 0.1;
/// Magnitudes within this are treated as equal when fixing the global phase.
pub const PHASE_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoveryError {
    #[error("images of P_{i} and P_{j} are not orthogonal (|<u_i, u_j>| = {overlap:e})")]
    NotOrthogonalImages { i: usize, j: usize, overlap: f64 },
    #[error("phase factor for column {j} has modulus {modulus}, expected 1")]
    PhaseNotUnimodular { j: usize, modulus: f64 },
    #[error("antilinearity indicator for column {j} is {re}{im:+}i, expected a consistent ±i")]
    AntilinearityInconsistent { j: usize, re: f64, im: f64 },
    #[error(
        "recovered isometry does not reproduce the operator (max entry deviation {deviation:e})"
    )]
    IsometryMismatch { deviation: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("classification needs n >= 2, got n = {found}")]
    DimTooSmall { found: usize },
    #[error("need at least n² = {needed} random trials, got {found}")]
    TooFewTrials { needed: usize, found: usize },
    #[error("operator dimension {found} does not match the expected {expected}")]
    DimMismatch { expected: usize, found: usize },
    #[error("ambiguous operator: {0}")]
    Ambiguous(#[from] RecoveryError),
    #[error("ambiguous operator: probe images agree but tr(A)P misses by {residual:e}")]
    ConstantMismatch { residual: f64 },
    #[error("eps must be finite and non-negative, got {eps}")]
    BadEps { eps: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coords(#[from] CoordsError),
}

/// Which vector a probe projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeKind {
    /// `e_i`
    Basis(usize),
    /// `(e_i + e_j)/√2`
    Plus(usize, usize),
    /// `(e_i + i e_j)/√2`
    IPlus(usize, usize),
}

/// The `n²` projections onto `e_i`, `(e_i + e_j)/√2` and `(e_i + i e_j)/√2`
/// (`i < j`). Their coordinates are linearly independent, so they span
/// `Herm(C^n)`. Order: the `n` basis probes, then `Plus(i, j)`,
/// `IPlus(i, j)` for each pair in lexicographic order.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    n: usize,
    probes: Vec<(ProbeKind, Projection)>,
}

impl ProbeSet {
    pub fn new(n: usize) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let vector = |entries: &[(usize, C64)]| {
            let mut v = vec![c64(0.0, 0.0); n];
            for &(k, x) in entries {
                v[k] = x;
            }
            Projection::rank_one(&v).expect("nonzero")
        };
        let mut probes: Vec<(ProbeKind, Projection)> = (0..n)
            .map(|i| (ProbeKind::Basis(i), vector(&[(i, c64(1.0, 0.0))])))
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                probes.push((
                    ProbeKind::Plus(i, j),
                    vector(&[(i, c64(h, 0.0)), (j, c64(h, 0.0))]),
                ));
                probes.push((
                    ProbeKind::IPlus(i, j),
                    vector(&[(i, c64(h, 0.0)), (j, c64(0.0, h))]),
                ));
            }
        }
        Self { n, probes }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(ProbeKind, Projection)> {
        self.probes.iter()
    }

    fn pair_offset(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n, "probe pair needs i < j < n");
        let pair = i * self.n - i * (i + 1) / 2 + (j - i - 1);
        self.n + 2 * pair
    }

    pub fn basis(&self, i: usize) -> &Projection {
        &self.probes[i].1
    }

    pub fn plus(&self, i: usize, j: usize) -> &Projection {
        &self.probes[self.pair_offset(i, j)].1
    }

    pub fn iplus(&self, i: usize, j: usize) -> &Projection {
        &self.probes[self.pair_offset(i, j) + 1].1
    }
}

/// Distance of an image from being a rank-one projection: the largest
/// distance of an eigenvalue from `{0, 1}` plus `|tr − 1|`.
pub fn rank_one_defect(image: &HermitianMatrix) -> Result<f64, LinalgError> {
    let eig = herm_eig(image)?;
    let spread = eig
        .values
        .iter()
        .map(|&l| l.abs().min((l - 1.0).abs()))
        .fold(0.0, f64::max);
    Ok(spread + (image.trace() - 1.0).abs())
}

/// Result of [`check_preserves_rank1`].
#[derive(Debug, Clone)]
pub enum RankOneCheck {
    /// Every image was within `tol`; `max_defect` is the largest seen.
    Pass { max_defect: f64 },
    /// The input with the largest defect (lowest index on ties).
    Fail {
        witness: Projection,
        image: HermitianMatrix,
        defect: f64,
    },
}

impl RankOneCheck {
    pub fn passed(&self) -> bool {
        matches!(self, RankOneCheck::Pass { .. })
    }
}

fn check_dim(l: &SuperOperator, n: usize) -> Result<(), ClassifyError> {
    if l.dim() != n {
        return Err(ClassifyError::DimMismatch {
            expected: n,
            found: l.dim(),
        });
    }
    Ok(())
}

/// Evaluates `L` on the probe set and on `trials` Haar-random rank-one
/// projections (drawn from `rng` in order). Passes iff every defect is at
/// most `tol`.
pub fn check_preserves_rank1(
    l: &SuperOperator,
    probes: &ProbeSet,
    trials: usize,
    rng: &mut RngState,
    tol: f64,
) -> Result<RankOneCheck, ClassifyError> {
    let n = probes.dim();
    check_dim(l, n)?;
    if trials < n * n {
        return Err(ClassifyError::TooFewTrials {
            needed: n * n,
            found: trials,
        });
    }
    let inputs = probes
        .iter()
        .map(|(_, p)| p.clone())
        .chain((0..trials).map(|_| rng.rank_one_projection(n)));
    let mut worst: Option<(Projection, HermitianMatrix, f64)> = None;
    for p in inputs {
        let image = l.apply(p.matrix());
        let defect = rank_one_defect(&image)?;
        if worst.as_ref().is_none_or(|w| defect > w.2) {
            worst = Some((p, image, defect));
        }
    }
    let (witness, image, defect) = worst.expect("probe set is non-empty");
    if defect <= tol {
        Ok(RankOneCheck::Pass { max_defect: defect })
    } else {
        Ok(RankOneCheck::Fail {
            witness,
            image,
            defect,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub tol: f64,
    /// Random rank-one trials; `None` uses `max(n², 32)`.
    pub trials: Option<usize>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            trials: None,
        }
    }
}

impl ClassifyOptions {
    pub fn trials_for(&self, n: usize) -> usize {
        self.trials.unwrap_or((n * n).max(32))
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// `A ↦ U A U*`, or `A ↦ U Aᵀ U*` when `antilinear`. `U` is fixed up to
    /// the global phase convention of [`recover_isometry`].
    IsometryInduced {
        u: ComplexMatrix,
        antilinear: bool,
        residual: f64,
    },
    /// `A ↦ tr(A) P`.
    TraceConstant { p: Projection, residual: f64 },
    NotRankOnePreserving {
        witness: Projection,
        image: HermitianMatrix,
        defect: f64,
    },
}

impl Verdict {
    /// `"isometry"`, `"constant"` or `"not_preserving"`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::IsometryInduced { .. } => "isometry",
            Verdict::TraceConstant { .. } => "constant",
            Verdict::NotRankOnePreserving { .. } => "not_preserving",
        }
    }

    pub fn is_theorem_type(&self) -> bool {
        !matches!(self, Verdict::NotRankOnePreserving { .. })
    }
}

/// Classifies `L`. Randomness (trial projections, residual samples) comes
/// from `rng`; the verdict is a pure function of `(L, options, rng)`.
pub fn classify(
    l: &SuperOperator,
    options: &ClassifyOptions,
    rng: &mut RngState,
) -> Result<Verdict, ClassifyError> {
    let n = l.dim();
    if n < 2 {
        return Err(ClassifyError::DimTooSmall { found: n });
    }
    let tol = options.tol;
    let probes = ProbeSet::new(n);
    if let RankOneCheck::Fail {
        witness,
        image,
        defect,
    } = check_preserves_rank1(l, &probes, options.trials_for(n), rng, tol)?
    {
        return Ok(Verdict::NotRankOnePreserving {
            witness,
            image,
            defect,
        });
    }

    if let Some(p) = recover_constant_target(l, &probes, tol)? {
        let residual = max_residual(rng, n, |a| l.apply(a).sub(&p.matrix().scale(a.trace())));
        if residual > tol {
            return Err(ClassifyError::ConstantMismatch { residual });
        }
        return Ok(Verdict::TraceConstant { p, residual });
    }

    let (u, antilinear) = recover_isometry(l, &probes, tol)?;
    let residual = max_residual(rng, n, |a| {
        let t = if antilinear { a.conj() } else { a.clone() };
        l.apply(a).sub(&t.conjugate_by(&u))
    });
    Ok(Verdict::IsometryInduced {
        u,
        antilinear,
        residual,
    })
}

/// `max ‖diff(A)‖_F / (1 + ‖A‖_F)` over [`RESIDUAL_SAMPLES`] random Hermitians.
fn max_residual(
    rng: &mut RngState,
    n: usize,
    diff: impl Fn(&HermitianMatrix) -> HermitianMatrix,
) -> f64 {
    (0..RESIDUAL_SAMPLES)
        .map(|_| {
            let a = rng.random_hermitian(n);
            diff(&a).frobenius_norm() / (1.0 + a.frobenius_norm())
        })
        .fold(0.0, f64::max)
}

/// If all probe images agree pairwise within `tol`, the projection `P` with
/// `L(A) = tr(A) P`, read off `L(P_0)`. `None` otherwise.
pub fn recover_constant_target(
    l: &SuperOperator,
    probes: &ProbeSet,
    tol: f64,
) -> Result<Option<Projection>, ClassifyError> {
    check_dim(l, probes.dim())?;
    let images: Vec<HermitianMatrix> = probes.iter().map(|(_, p)| l.apply(p.matrix())).collect();
    for (a, x) in images.iter().enumerate() {
        for y in &images[a + 1..] {
            if x.sub(y).frobenius_norm() > tol {
                return Ok(None);
            }
        }
    }
    Ok(Some(Projection::from_matrix(&images[0], tol.max(1e-6))?))
}

/// Unit vector spanning the dominant eigenvector of a rank-one image.
fn image_vector(image: &HermitianMatrix) -> Result<Vec<C64>, LinalgError> {
    let eig = herm_eig(image)?;
    Ok(eig.vector(eig.values.len() - 1))
}

/// Recovers `(U, antilinear)` from the probe images of a rank-one
/// preserving, non-constant `L`:
///
/// * `u_i` spans `L(P_i)`; the `u_i` must be pairwise orthogonal;
/// * the largest entry of `u_0` (lowest index on ties) is made real positive;
/// * `ν_j = 2 u_j* L(P⁺_0j) u_0` has modulus one and aligns `u_j ← ν_j u_j`;
/// * `δ_j = 2 u_j* L(Pⁱ_0j) u_0` (after alignment) is `+i` for a linear and
///   `−i` for an antilinear map, consistently in `j`.
///
/// The candidate is accepted only if its embedding matches `L` entrywise
/// within `tol`.
pub fn recover_isometry(
    l: &SuperOperator,
    probes: &ProbeSet,
    tol: f64,
) -> Result<(ComplexMatrix, bool), RecoveryError> {
    let n = probes.dim();
    let loose = tol.sqrt();
    let mut u: Vec<Vec<C64>> = (0..n)
        .map(|i| image_vector(&l.apply(probes.basis(i).matrix())))
        .collect::<Result<_, _>>()?;
    for i in 0..n {
        for j in i + 1..n {
            let overlap = inner(&u[i], &u[j]).norm();
            if overlap > loose {
                return Err(RecoveryError::NotOrthogonalImages { i, j, overlap });
            }
        }
    }

    let mut lead = 0;
    for (k, x) in u[0].iter().enumerate() {
        if x.norm() > u[0][lead].norm() + PHASE_TIE_TOL {
            lead = k;
        }
    }
    let phase = u[0][lead].conj() / u[0][lead].norm();
    u[0].iter_mut().for_each(|x| *x *= phase);

    let mut antilinear: Option<bool> = None;
    for j in 1..n {
        let nu = l.apply(probes.plus(0, j).matrix()).sandwich(&u[j], &u[0]) * 2.0;
        let modulus = nu.norm();
        if (modulus - 1.0).abs() > loose {
            return Err(RecoveryError::PhaseNotUnimodular { j, modulus });
        }
        let nu = nu / modulus;
        u[j].iter_mut().for_each(|x| *x *= nu);

        let delta = l.apply(probes.iplus(0, j).matrix()).sandwich(&u[j], &u[0]) * 2.0;
        let flag = if (delta - c64(0.0, 1.0)).norm() <= ANTILINEARITY_MARGIN {
            false
        } else if (delta - c64(0.0, -1.0)).norm() <= ANTILINEARITY_MARGIN {
            true
        } else {
            return Err(RecoveryError::AntilinearityInconsistent {
                j,
                re: delta.re,
                im: delta.im,
            });
        };
        if antilinear.is_some_and(|prev| prev != flag) {
            return Err(RecoveryError::AntilinearityInconsistent {
                j,
                re: delta.re,
                im: delta.im,
            });
        }
        antilinear = Some(flag);
    }
    let antilinear = antilinear.expect("n >= 2");

    let matrix = ComplexMatrix::from_columns(&u)?;
    let candidate =
        embed_isometry(&matrix, antilinear).map_err(|_| RecoveryError::IsometryMismatch {
            deviation: matrix.isometry_defect(),
        })?;
    let deviation = l.max_abs_diff(&candidate);
    if deviation > tol {
        return Err(RecoveryError::IsometryMismatch { deviation });
    }
    Ok((matrix, antilinear))
}

/// `min_φ ‖a − e^{iφ} b‖_F`.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap: C64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| y.conj() * x)
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c64(1.0, 0.0)
    };
    (a - &b.scale(phase)).frobenius_norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerateKind {
    Isometry,
    AntiIsometry,
    Constant,
    Perturbed,
}

impl GenerateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GenerateKind::Isometry => "isometry",
            GenerateKind::AntiIsometry => "anti-isometry",
            GenerateKind::Constant => "constant",
            GenerateKind::Perturbed => "perturbed",
        }
    }
}

impl fmt::Display for GenerateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenerateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "isometry" => Ok(Self::Isometry),
            "anti-isometry" | "anti_isometry" => Ok(Self::AntiIsometry),
            "constant" => Ok(Self::Constant),
            "perturbed" => Ok(Self::Perturbed),
            other => Err(format!(
                "unknown operator type '{other}' (expected isometry, anti-isometry, constant or perturbed)"
            )),
        }
    }
}

/// What a generated operator was built from.
#[derive(Debug, Clone)]
pub enum Truth {
    Isometry { u: ComplexMatrix, antilinear: bool },
    Constant { p: Projection },
    Perturbed { base: Box<Truth>, eps: f64 },
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub operator: SuperOperator,
    pub truth: Truth,
}

/// Random operator of the requested kind. `perturbed` picks one of the three
/// valid kinds uniformly and adds `eps·E` with `E` Gaussian of unit Frobenius
/// norm; `eps` is ignored otherwise.
pub fn generate(
    kind: GenerateKind,
    n: usize,
    rng: &mut RngState,
    eps: f64,
) -> Result<Generated, ClassifyError> {
    if n < 2 {
        return Err(ClassifyError::DimTooSmall { found: n });
    }
    match kind {
        GenerateKind::Isometry | GenerateKind::AntiIsometry => {
            let antilinear = kind == GenerateKind::AntiIsometry;
            let u = rng.haar_unitary(n);
            Ok(Generated {
                operator: embed_isometry(&u, antilinear)?,
                truth: Truth::Isometry { u, antilinear },
            })
        }
        GenerateKind::Constant => {
            let p = rng.rank_one_projection(n);
            Ok(Generated {
                operator: embed_trace_constant(&p)?,
                truth: Truth::Constant { p },
            })
        }
        GenerateKind::Perturbed => {
            if !(eps.is_finite() && eps >= 0.0) {
                return Err(ClassifyError::BadEps { eps });
            }
            let base_kind = [
                GenerateKind::Isometry,
                GenerateKind::AntiIsometry,
                GenerateKind::Constant,
            ][rng.index(3)];
            let base = generate(base_kind, n, rng, 0.0)?;
            let size = n * n;
            let noise: Vec<f64> = (0..size * size).map(|_| rng.normal()).collect();
            let noise = SuperOperator::new(n, noise)?;
            let noise = noise.scale(eps / noise.frobenius_norm());
            Ok(Generated {
                operator: base.operator.add(&noise),
                truth: Truth::Perturbed {
                    base: Box::new(base.truth),
                    eps,
                },
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coords::{from_coords, superop_from_action, to_coords, HermCoords};
    use crate::linalg::basis_vector;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |i, j| c64(if i != j { 1.0 } else { 0.0 }, 0.0))
    }

    #[test]
    fn probe_layout() {
        let probes = ProbeSet::new(3);
        assert_eq!(probes.len(), 9);
        assert_eq!(probes.iter().nth(3).unwrap().0, ProbeKind::Plus(0, 1));
        assert_eq!(probes.iter().nth(8).unwrap().0, ProbeKind::IPlus(1, 2));
        assert!((probes.iplus(1, 2).matrix().get(1, 2) - c64(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn probes_span() {
        // Coordinates of the probes have full rank: the Gram matrix is invertible.
        for n in [2, 3, 4] {
            let probes = ProbeSet::new(n);
            let rows: Vec<Vec<f64>> = probes
                .iter()
                .map(|(_, p)| to_coords(p.matrix()).values().to_vec())
                .collect();
            let m = SuperOperator::from_rows(n, &rows).unwrap();
            let gram = m.compose(&m.transpose());
            let h = superop_to_hermitian(&gram);
            let eig = herm_eig(&h).unwrap();
            assert!(
                eig.values[0] > 1e-3,
                "n = {n}: smallest Gram eigenvalue {}",
                eig.values[0]
            );
        }
    }

    fn superop_to_hermitian(m: &SuperOperator) -> HermitianMatrix {
        let s = m.size();
        let cm = ComplexMatrix::from_fn(s, s, |i, j| c64(m.get(i, j), 0.0));
        HermitianMatrix::hermitian_part(&cm).unwrap()
    }

    #[test]
    fn rank_check_examples() {
        let mut rng = RngState::new(1);
        let probes = ProbeSet::new(2);
        let id = SuperOperator::identity(2);
        assert!(check_preserves_rank1(&id, &probes, 4, &mut rng, 1e-8)
            .unwrap()
            .passed());
        match check_preserves_rank1(&id.scale(2.0), &probes, 4, &mut rng, 1e-8).unwrap() {
            RankOneCheck::Fail {
                defect, witness, ..
            } => {
                assert!(defect >= 1.0);
                assert_eq!(witness.rank(), 1);
            }
            RankOneCheck::Pass { .. } => panic!("2·id must fail"),
        }
        let transpose = superop_from_action(|a| a.conj(), 2).unwrap();
        assert!(
            check_preserves_rank1(&transpose, &probes, 4, &mut rng, 1e-8)
                .unwrap()
                .passed()
        );
        assert!(matches!(
            check_preserves_rank1(&id, &probes, 3, &mut rng, 1e-8),
            Err(ClassifyError::TooFewTrials {
                needed: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn classify_examples() {
        let mut rng = RngState::new(7);
        let opts = ClassifyOptions::default();

        let u = rng.haar_unitary(3);
        match classify(&embed_isometry(&u, false).unwrap(), &opts, &mut rng).unwrap() {
            Verdict::IsometryInduced {
                u: rec,
                antilinear,
                residual,
            } => {
                assert!(!antilinear);
                assert!(residual <= 1e-9);
                assert!(phase_aligned_distance(&rec, &u) <= 1e-8);
            }
            other => panic!("unexpected {other:?}"),
        }

        let p = rng.rank_one_projection(3);
        match classify(&embed_trace_constant(&p).unwrap(), &opts, &mut rng).unwrap() {
            Verdict::TraceConstant { p: rec, residual } => {
                assert!(residual <= 1e-10);
                assert!(rec.distance(&p) <= 1e-9);
            }
            other => panic!("unexpected {other:?}"),
        }

        let verdict = classify(&SuperOperator::zeros(2), &opts, &mut rng).unwrap();
        assert_eq!(verdict.label(), "not_preserving");

        assert!(matches!(
            classify(&SuperOperator::identity(1), &opts, &mut rng),
            Err(ClassifyError::DimTooSmall { found: 1 })
        ));
    }

    #[test]
    fn recover_examples() {
        let probes = ProbeSet::new(2);
        let (u, anti) =
            recover_isometry(&embed_isometry(&pauli_x(), false).unwrap(), &probes, 1e-8).unwrap();
        assert!(!anti);
        assert!(phase_aligned_distance(&u, &pauli_x()) < 1e-12);

        let id = ComplexMatrix::identity(2);
        let (u, anti) =
            recover_isometry(&embed_isometry(&id, true).unwrap(), &probes, 1e-8).unwrap();
        assert!(anti);
        assert!(phase_aligned_distance(&u, &id) < 1e-12);

        let p = Projection::rank_one(&basis_vector(2, 0)).unwrap();
        assert!(matches!(
            recover_isometry(&embed_trace_constant(&p).unwrap(), &probes, 1e-8),
            Err(RecoveryError::NotOrthogonalImages { .. })
        ));
    }

    #[test]
    fn phase_convention_is_fixed() {
        let mut rng = RngState::new(3);
        let u = rng.haar_unitary(4);
        let probes = ProbeSet::new(4);
        let (rec, _) =
            recover_isometry(&embed_isometry(&u, false).unwrap(), &probes, 1e-8).unwrap();
        let col = rec.column(0);
        let lead = col.iter().enumerate().fold(0, |best, (k, x)| {
            if x.norm() > col[best].norm() + PHASE_TIE_TOL {
                k
            } else {
                best
            }
        });
        assert!(col[lead].im.abs() < 1e-14 && col[lead].re > 0.0);
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate(GenerateKind::Isometry, 3, &mut RngState::new(7), 0.0).unwrap();
        let b = generate(GenerateKind::Isometry, 3, &mut RngState::new(7), 0.0).unwrap();
        assert_eq!(a.operator, b.operator);
    }

    #[test]
    fn perturbed_is_rejected() {
        for seed in 0..5 {
            let mut rng = RngState::new(seed);
            let g = generate(GenerateKind::Perturbed, 2, &mut rng, 1e-3).unwrap();
            match classify(&g.operator, &ClassifyOptions::default(), &mut rng).unwrap() {
                Verdict::NotRankOnePreserving { defect, .. } => assert!(defect >= 1e-4),
                other => panic!("seed {seed}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn composition_closure() {
        let mut rng = RngState::new(44);
        for (a1, a2) in [(false, false), (false, true), (true, false), (true, true)] {
            let u1 = rng.haar_unitary(3);
            let u2 = rng.haar_unitary(3);
            let m = embed_isometry(&u1, a1)
                .unwrap()
                .compose(&embed_isometry(&u2, a2).unwrap());
            let expected = if a1 {
                u1.matmul(&u2.conj())
            } else {
                u1.matmul(&u2)
            };
            match classify(&m, &ClassifyOptions::default(), &mut rng).unwrap() {
                Verdict::IsometryInduced { u, antilinear, .. } => {
                    assert_eq!(antilinear, a1 ^ a2);
                    assert!(phase_aligned_distance(&u, &expected) < 1e-8);
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn trace_is_preserved() {
        let mut rng = RngState::new(9);
        for kind in [
            GenerateKind::Isometry,
            GenerateKind::AntiIsometry,
            GenerateKind::Constant,
        ] {
            let g = generate(kind, 3, &mut rng, 0.0).unwrap();
            for _ in 0..5 {
                let a = rng.random_hermitian(3);
                let c = HermCoords::new(3, to_coords(&a).values().to_vec()).unwrap();
                let image = from_coords(&g.operator.apply_coords(&c));
                assert!((image.trace() - a.trace()).abs() <= 1e-8 * (1.0 + a.frobenius_norm()));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn round_trip(seed in any::<u64>(), n in 2usize..5, anti in any::<bool>()) {
                let mut rng = RngState::new(seed);
                let kind = if anti { GenerateKind::AntiIsometry } else { GenerateKind::Isometry };
                let g = generate(kind, n, &mut rng, 0.0).unwrap();
                let Truth::Isometry { u: truth, .. } = g.truth else { unreachable!() };
                match classify(&g.operator, &ClassifyOptions::default(), &mut rng).unwrap() {
                    Verdict::IsometryInduced { u, antilinear, .. } => {
                        prop_assert_eq!(antilinear, anti);
                        prop_assert!(phase_aligned_distance(&u, &truth) <= 1e-8);
                    }
                    other => prop_assert!(false, "unexpected {:?}", other),
                }
            }

            #[test]
            fn constant_round_trip(seed in any::<u64>(), n in 2usize..5) {
                let mut rng = RngState::new(seed);
                let g = generate(GenerateKind::Constant, n, &mut rng, 0.0).unwrap();
                let Truth::Constant { p: truth } = g.truth else { unreachable!() };
                match classify(&g.operator, &ClassifyOptions::default(), &mut rng).unwrap() {
                    Verdict::TraceConstant { p, .. } => prop_assert!(p.distance(&truth) <= 1e-9),
                    other => prop_assert!(false, "unexpected {:?}", other),
                }
            }
        }
    }
}
