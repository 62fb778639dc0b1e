//! Distance to the separable set by Frank–Wolfe with local polishing.
//!
//! The iterate is an explicit product ensemble (active atoms and weights).
//! Each outer iteration:
//!
//! 1. polishes the ensemble by L-BFGS over the atom weights and the atom
//!    factors jointly, which never increases the objective;
//! 2. forms the gradient `G` of the objective at the realized state; for
//!    relative entropy this is `−tr σ ln ρ` differentiated through the
//!    first divided difference of `ln` in the eigenbasis of `ρ`;
//! 3. asks the product-state oracle for the atom `π` minimizing `⟨π|G|π⟩`;
//!    the Frank–Wolfe gap `tr G(ρ − π)` bounds `value − E(σ)` by convexity;
//! 4. stops below the gap tolerance, otherwise takes an exact line-search
//!    step toward `π` and adds it to the active set.

use serde::{Deserialize, Serialize};

use super::caratheodory::reduce;
use super::lbfgs;
use super::oracle::Partition;
use super::{check_solver_dims, CertificateKind, DistanceKind, MeasureResult, SolverConfig};
use crate::error::{Error, Result};
use crate::linalg::{inner, ComplexMatrix, C64, SUPPORT_CUTOFF};
use crate::measures::{cross_entropy, von_neumann_entropy};
use crate::random::{self, Rng};
use crate::separable::{caratheodory_cap, classical_correlations, realize, ProductEnsemble, ProductTerm};
use crate::states::DensityMatrix;

const PRUNE_WEIGHT: f64 = 1e-12;
const LINE_SEARCH_WIDTH: f64 = 1e-10;
const SAME_ATOM: f64 = 1.0 - 1e-13;
const POLISH_ITERATIONS: usize = 2000;

impl Distance {
    fn kind(&self) -> DistanceKind {
        match self {
            Distance::RelativeEntropy { .. } => DistanceKind::RelativeEntropy,
            Distance::Bures { .. } => DistanceKind::Bures,
        }
    }

    fn certificate(&self) -> CertificateKind {
        match self {
            Distance::RelativeEntropy { .. } => CertificateKind::DualityGap,
            Distance::Bures { .. } => CertificateKind::Heuristic,
        }
    }
}

/// First divided difference of ln: (ln x − ln y)/(x − y), 1/x on the diagonal.
pub(crate) fn log_divided_difference(x: f64, y: f64) -> f64 {
    if (x - y).abs() < 1e-9 * x.max(y) {
        1.0 / x
    } else {
        ((x - y) / y).ln_1p() / (x - y)
    }
}

/// Gradient of ρ ↦ −tr σ ln ρ at ρ (Daleckii–Krein form). Directions in the
/// kernel of ρ contribute nothing.
pub(crate) fn cross_entropy_gradient(sigma: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let eig = rho.hermitian_eigen().expect("iterate is Hermitian");
    let v = &eig.vectors;
    let st = &(&v.dagger() * sigma) * v;
    let lambda = &eig.values;
    let n = lambda.len();
    let gt = ComplexMatrix::from_fn(n, n, |i, j| {
        if lambda[i] <= SUPPORT_CUTOFF || lambda[j] <= SUPPORT_CUTOFF {
            C64::new(0.0, 0.0)
        } else {
            -st[(i, j)] * log_divided_difference(lambda[i], lambda[j])
        }
    });
    (&(v * &gt) * &v.dagger()).hermitian_part()
}

struct Atom {
    family: usize,
    factors: Vec<Vec<C64>>,
    vector: Vec<C64>,
}

/// The distance being minimized over the separable set.
pub(super) enum Distance {
    /// Relative entropy; carries S(σ).
    RelativeEntropy { entropy: f64 },
    /// Bures distance; carries a support factor W of σ, W W† = σ.
    Bures { root: ComplexMatrix },
}

pub(super) struct Problem<'a> {
    pub sigma: &'a DensityMatrix,
    pub distance: Distance,
    pub families: Vec<Partition>,
    pub config: &'a SolverConfig,
}

impl Problem<'_> {
    fn objective(&self, rho: &ComplexMatrix) -> f64 {
        match &self.distance {
            Distance::RelativeEntropy { entropy } => match cross_entropy(self.sigma.matrix(), rho) {
                Ok(c) => c - entropy,
                Err(_) => f64::INFINITY,
            },
            Distance::Bures { root } => super::bures::bures_objective(root, rho),
        }
    }

    fn gradient(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        match &self.distance {
            Distance::RelativeEntropy { .. } => cross_entropy_gradient(self.sigma.matrix(), rho),
            Distance::Bures { root } => super::bures::bures_gradient(root, rho),
        }
    }

    /// Best product atom over every family, warm-started from the previous
    /// vertex of each family.
    fn oracle(&self, g: &ComplexMatrix, rng: &mut Rng, warm: &[Option<Vec<Vec<C64>>>]) -> (f64, usize, Vec<Vec<C64>>) {
        let mut best: Option<(f64, usize, Vec<Vec<C64>>)> = None;
        for (fam, part) in self.families.iter().enumerate() {
            let (v, f) = part.minimize(
                g,
                self.config.oracle_restarts,
                self.config.oracle_iterations,
                rng,
                warm[fam].as_deref(),
            );
            if best.as_ref().is_none_or(|b| v < b.0) {
                best = Some((v, fam, f));
            }
        }
        best.expect("at least one family")
    }
}

fn mixture(atoms: &[Atom], weights: &[f64], d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    for (a, &w) in atoms.iter().zip(weights) {
        for i in 0..d {
            let vi = a.vector[i] * w;
            for j in 0..d {
                m[(i, j)] += vi * a.vector[j].conj();
            }
        }
    }
    m.hermitian_part()
}

/// Golden-section search for the minimum of `f` on `[0, hi]`; returns the
/// best point evaluated (including `0` with the known value `f0`).
pub(crate) fn golden_section(f: impl Fn(f64) -> f64, hi: f64, f0: f64, width: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut best = (0.0, f0);
    let fhi = f(hi);
    if fhi < best.1 {
        best = (hi, fhi);
    }
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        for (x, fx) in [(c, fc), (d, fd)] {
            if fx < best.1 {
                best = (x, fx);
            }
        }
    }
    best
}

/// (1 − γ)ρ + γ|v⟩⟨v|
fn step_toward(rho: &ComplexMatrix, v: &[C64], gamma: f64) -> ComplexMatrix {
    let d = rho.rows();
    let mut m = rho.scale(1.0 - gamma);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] += v[i] * v[j].conj() * gamma;
        }
    }
    m
}

/// Packs atoms into real L-BFGS coordinates: per atom `u = √w`, then the
/// real and imaginary parts of every factor.
fn pack(atoms: &[Atom], weights: &[f64]) -> Vec<f64> {
    let mut x = Vec::new();
    for (a, &w) in atoms.iter().zip(weights) {
        x.push(w.sqrt());
        for f in &a.factors {
            x.extend(f.iter().map(|z| z.re));
            x.extend(f.iter().map(|z| z.im));
        }
    }
    x
}

/// Inverse of [`pack`]: weights `u²/Σu²` and normalized factors, plus the
/// raw `u` and factor norms needed by the chain rule.
struct Unpacked {
    u: Vec<f64>,
    weights: Vec<f64>,
    factors: Vec<Vec<Vec<C64>>>,
    norms: Vec<Vec<f64>>,
}

fn unpack(problem: &Problem<'_>, atoms: &[Atom], x: &[f64]) -> Unpacked {
    let mut pos = 0;
    let mut out = Unpacked {
        u: Vec::with_capacity(atoms.len()),
        weights: Vec::with_capacity(atoms.len()),
        factors: Vec::with_capacity(atoms.len()),
        norms: Vec::with_capacity(atoms.len()),
    };
    for a in atoms {
        out.u.push(x[pos]);
        pos += 1;
        let part = &problem.families[a.family];
        let mut fs = Vec::with_capacity(part.group_dims.len());
        let mut ns = Vec::with_capacity(part.group_dims.len());
        for &gd in &part.group_dims {
            let v: Vec<C64> = (0..gd).map(|k| C64::new(x[pos + k], x[pos + gd + k])).collect();
            pos += 2 * gd;
            let n = crate::linalg::norm(&v);
            fs.push(v.iter().map(|z| z / n).collect());
            ns.push(n);
        }
        out.factors.push(fs);
        out.norms.push(ns);
    }
    let total: f64 = out.u.iter().map(|u| u * u).sum();
    out.weights = out.u.iter().map(|u| u * u / total).collect();
    out
}

impl Problem<'_> {
    /// Objective and its gradient in packed coordinates.
    fn packed_value_and_gradient(&self, atoms: &[Atom], x: &[f64]) -> (f64, Vec<f64>) {
        let p = unpack(self, atoms, x);
        if p.norms.iter().flatten().any(|&n| !(n > 1e-150)) || p.weights.iter().any(|w| !w.is_finite()) {
            return (f64::INFINITY, vec![0.0; x.len()]);
        }
        let d = self.sigma.dim();
        let vectors: Vec<Vec<C64>> = atoms
            .iter()
            .zip(&p.factors)
            .map(|(a, f)| self.families[a.family].embed(f))
            .collect();
        let mut rho = ComplexMatrix::zeros(d, d);
        for (v, &w) in vectors.iter().zip(&p.weights) {
            for i in 0..d {
                let vi = v[i] * w;
                for j in 0..d {
                    rho[(i, j)] += vi * v[j].conj();
                }
            }
        }
        let rho = rho.hermitian_part();
        let f = self.objective(&rho);
        if !f.is_finite() {
            return (f, vec![0.0; x.len()]);
        }
        let g = self.gradient(&rho);
        let values: Vec<f64> = vectors.iter().map(|v| g.expectation(v)).collect();
        let mean: f64 = values.iter().zip(&p.weights).map(|(v, w)| v * w).sum();
        let total: f64 = p.u.iter().map(|u| u * u).sum();
        let mut grad = Vec::with_capacity(x.len());
        for (k, a) in atoms.iter().enumerate() {
            grad.push(2.0 * p.u[k] / total * (values[k] - mean));
            let part = &self.families[a.family];
            for (h, &gd) in part.group_dims.iter().enumerate() {
                let c = part.contract(&g, &p.factors[k], h);
                let f_h = &p.factors[k][h];
                let cf = c.mul_vec(f_h);
                let scale = p.weights[k] / p.norms[k][h];
                let dir: Vec<C64> = (0..gd).map(|i| (cf[i] - f_h[i] * values[k]) * scale).collect();
                grad.extend(dir.iter().map(|z| 2.0 * z.re));
                grad.extend(dir.iter().map(|z| 2.0 * z.im));
            }
        }
        (f, grad)
    }

    /// Local descent on weights and factor positions of the active atoms.
    fn polish(&self, atoms: &mut [Atom], weights: &mut Vec<f64>) {
        let x0 = pack(atoms, weights);
        let (x, _) = lbfgs::minimize(x0, |x| self.packed_value_and_gradient(atoms, x), POLISH_ITERATIONS);
        let p = unpack(self, atoms, &x);
        for (a, f) in atoms.iter_mut().zip(p.factors) {
            a.vector = self.families[a.family].embed(&f);
            a.factors = f;
        }
        *weights = p.weights;
    }
}

pub(super) fn solve(problem: &Problem<'_>) -> Result<MeasureResult> {
    let config = problem.config;
    let dims = problem.sigma.dims().to_vec();
    let d = problem.sigma.dim();
    let cap = config.ensemble_cap.unwrap_or_else(|| caratheodory_cap(&dims));
    let mut rng = random::rng(config.seed, 0xf_0001);

    // I/d as the uniform mixture of the computational product basis.
    let first = &problem.families[0];
    let mut atoms: Vec<Atom> = (0..d)
        .map(|i| {
            let factors = first.basis_factors(i);
            Atom {
                family: 0,
                vector: first.embed(&factors),
                factors,
            }
        })
        .collect();
    let mut weights = vec![1.0 / d as f64; d];
    let initial = problem.objective(&mixture(&atoms, &weights, d));
    if !initial.is_finite() {
        return Err(Error::SupportFailure);
    }

    let mut warm: Vec<Option<Vec<Vec<C64>>>> = vec![None; problem.families.len()];
    let mut history = Vec::new();
    let mut gap;
    let mut converged = false;
    let mut iterations = 0;

    loop {
        problem.polish(&mut atoms, &mut weights);
        prune(&mut atoms, &mut weights, cap);
        let rho = mixture(&atoms, &weights, d);
        let value = problem.objective(&rho);
        history.push(value);

        let g = problem.gradient(&rho);
        let (gmin, family, factors) = problem.oracle(&g, &mut rng, &warm);
        gap = (g.trace_product(&rho).re - gmin).max(0.0);
        if gap < config.gap_tolerance {
            converged = true;
            break;
        }
        if iterations == config.max_iterations {
            break;
        }
        iterations += 1;
        warm[family] = Some(factors.clone());
        let vertex = problem.families[family].embed(&factors);

        // Exact line search on the segment toward the oracle vertex.
        let (gamma, fnew) = golden_section(
            |t| problem.objective(&step_toward(&rho, &vertex, t)),
            1.0,
            value,
            LINE_SEARCH_WIDTH,
        );
        if !(gamma > 0.0 && fnew < value) {
            // No descent along the Frank–Wolfe direction at line-search resolution.
            break;
        }
        weights.iter_mut().for_each(|w| *w *= 1.0 - gamma);
        match atoms
            .iter()
            .position(|a| inner(&a.vector, &vertex).norm_sqr() > SAME_ATOM)
        {
            Some(k) => weights[k] += gamma,
            None => {
                atoms.push(Atom {
                    family,
                    factors,
                    vector: vertex,
                });
                weights.push(gamma);
            }
        }
    }

    let terms: Vec<ProductTerm> = atoms
        .iter()
        .zip(&weights)
        .map(|(a, &w)| problem.families[a.family].term(w, &a.factors))
        .collect();
    let minimizer = ProductEnsemble::from_parts_unchecked(dims, terms);
    let realized = realize(&minimizer);
    let value = problem.objective(realized.matrix());
    Ok(MeasureResult {
        value,
        minimizer,
        realized_minimizer: realized,
        gap,
        iterations,
        distance_kind: problem.distance.kind(),
        certificate: problem.distance.certificate(),
        converged,
        history,
    })
}

/// Drops negligible atoms, renormalizes, and enforces the term cap.
fn prune(atoms: &mut Vec<Atom>, weights: &mut Vec<f64>, cap: usize) {
    let mut keep: Vec<(usize, f64)> = weights
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, w)| w >= PRUNE_WEIGHT)
        .collect();
    if keep.len() > cap {
        let vecs: Vec<Vec<C64>> = keep.iter().map(|&(k, _)| atoms[k].vector.clone()).collect();
        let ws: Vec<f64> = keep.iter().map(|&(_, w)| w).collect();
        keep = reduce(&vecs, &ws, cap)
            .into_iter()
            .map(|(i, w)| (keep[i].0, w))
            .collect();
    }
    let total: f64 = keep.iter().map(|&(_, w)| w).sum();
    let mut drained: Vec<Option<Atom>> = atoms.drain(..).map(Some).collect();
    *weights = keep.iter().map(|&(_, w)| w / total).collect();
    *atoms = keep
        .iter()
        .map(|&(k, _)| drained[k].take().expect("kept once"))
        .collect();
}

/// Relative entropy of entanglement `min_{ρ ∈ 𝒟} S(σ‖ρ)` over fully
/// separable states (bipartite up to 3×3, or fully product tripartite).
pub fn ree(sigma: &DensityMatrix, config: &SolverConfig) -> Result<MeasureResult> {
    config.validate()?;
    check_solver_dims(sigma.dims())?;
    let problem = Problem {
        sigma,
        distance: Distance::RelativeEntropy {
            entropy: von_neumann_entropy(sigma),
        },
        families: vec![Partition::singletons(sigma.dims())],
        config,
    };
    solve(&problem)
}

/// Relative entropy of entanglement of a three-qubit state against the
/// biseparable set: mixtures of states product across AB|C, AC|B or A|BC.
pub fn tripartite_ree(sigma: &DensityMatrix, config: &SolverConfig) -> Result<MeasureResult> {
    config.validate()?;
    if sigma.dims() != [2, 2, 2] {
        return Err(Error::DimensionTooLarge(sigma.dims().to_vec()));
    }
    let dims = sigma.dims();
    let problem = Problem {
        sigma,
        distance: Distance::RelativeEntropy {
            entropy: von_neumann_entropy(sigma),
        },
        families: vec![
            Partition::new(dims, vec![vec![0, 1], vec![2]]),
            Partition::new(dims, vec![vec![0, 2], vec![1]]),
            Partition::new(dims, vec![vec![0], vec![1, 2]]),
        ],
        config,
    };
    solve(&problem)
}

/// Split of correlations into the quantum part E(σ) and the classical part
/// of the closest separable state, D(ρ*‖ρ*_A ⊗ ρ*_B).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSplit {
    pub quantum: f64,
    pub classical: f64,
    pub result: MeasureResult,
}

pub fn quantum_classical_split(sigma: &DensityMatrix, config: &SolverConfig) -> Result<CorrelationSplit> {
    if sigma.subsystems() != 2 {
        return Err(Error::NotBipartite(sigma.subsystems()));
    }
    let result = ree(sigma, config)?;
    let classical = classical_correlations(&result.realized_minimizer)?;
    Ok(CorrelationSplit {
        quantum: result.value,
        classical,
        result,
    })
}
