//! Levenberg–Marquardt refinement of a product ensemble onto a target
//! matrix. Turns an approximate separable decomposition (a solver iterate)
//! into one that reproduces the target to round-off.

use super::ensemble::{embed_product, ProductEnsemble, ProductTerm};
use crate::linalg::{norm, real::solve_spd, ComplexMatrix, C64};
use crate::states::PureState;

/// Real coordinates of a Hermitian matrix with ‖vec(H)‖₂ = ‖H‖_F.
fn hermitian_vec(h: &ComplexMatrix) -> Vec<f64> {
    let d = h.rows();
    let mut out = Vec::with_capacity(d * d);
    let r2 = std::f64::consts::SQRT_2;
    for i in 0..d {
        out.push(h[(i, i)].re);
        for j in i + 1..d {
            out.push(r2 * h[(i, j)].re);
            out.push(r2 * h[(i, j)].im);
        }
    }
    out
}

struct Layout {
    dims: Vec<usize>,
    groups: Vec<Vec<Vec<usize>>>,
    // (term, factor, component) for every complex parameter
    slots: Vec<(usize, usize, usize)>,
}

impl Layout {
    fn factor_dim(&self, k: usize, g: usize) -> usize {
        self.groups[k][g].iter().map(|&s| self.dims[s]).product()
    }
}

fn term_vectors(layout: &Layout, params: &[Vec<Vec<C64>>]) -> Vec<Vec<C64>> {
    params
        .iter()
        .zip(&layout.groups)
        .map(|(factors, groups)| {
            let refs: Vec<&[C64]> = factors.iter().map(Vec::as_slice).collect();
            embed_product(&layout.dims, groups, &refs)
        })
        .collect()
}

fn residual(target: &ComplexMatrix, vectors: &[Vec<C64>]) -> Vec<f64> {
    let mut r = target.scale(-1.0);
    let d = target.rows();
    for x in vectors {
        for i in 0..d {
            for j in 0..d {
                r[(i, j)] += x[i] * x[j].conj();
            }
        }
    }
    hermitian_vec(&r)
}

/// Refines `start` so that its realization approaches `target` in Frobenius
/// norm, stopping below `tol` or after `max_iter` accepted or rejected steps.
pub(crate) fn refine_to_target(
    target: &ComplexMatrix,
    start: &ProductEnsemble,
    max_iter: usize,
    tol: f64,
) -> ProductEnsemble {
    let dims = start.dims().to_vec();
    let terms: Vec<&ProductTerm> = start.terms().iter().filter(|t| t.weight > 1e-14).collect();
    let groups: Vec<Vec<Vec<usize>>> = terms.iter().map(|t| t.groups.clone()).collect();
    // Unnormalized factors; the weight is spread over the first factor.
    let mut params: Vec<Vec<Vec<C64>>> = terms
        .iter()
        .map(|t| {
            t.factors
                .iter()
                .enumerate()
                .map(|(g, f)| {
                    let s = if g == 0 { t.weight.sqrt() } else { 1.0 };
                    f.amplitudes().iter().map(|z| z * s).collect()
                })
                .collect()
        })
        .collect();
    let mut slots = Vec::new();
    for (k, factors) in params.iter().enumerate() {
        for (g, f) in factors.iter().enumerate() {
            for j in 0..f.len() {
                slots.push((k, g, j));
            }
        }
    }
    let layout = Layout { dims, groups, slots };

    let mut vectors = term_vectors(&layout, &params);
    let mut r = residual(target, &vectors);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let m = r.len();
    let mut mu = -1.0;

    for _ in 0..max_iter {
        if cost.sqrt() < tol {
            break;
        }
        let jac = jacobian(&layout, &params, &vectors);
        let p = jac.len();
        // J Jᵀ (m × m); the step is δ = −Jᵀ (J Jᵀ + μ I)⁻¹ r.
        let mut jjt = vec![0.0; m * m];
        for col in &jac {
            for a in 0..m {
                let ca = col[a];
                if ca == 0.0 {
                    continue;
                }
                for b in 0..m {
                    jjt[a * m + b] += ca * col[b];
                }
            }
        }
        if mu < 0.0 {
            let tr: f64 = (0..m).map(|a| jjt[a * m + a]).sum();
            mu = 1e-6 * tr / m as f64;
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jjt.clone();
            for a in 0..m {
                lhs[a * m + a] += mu;
            }
            let Some(z) = solve_spd(&lhs, &r, m) else {
                mu *= 10.0;
                continue;
            };
            let mut trial = params.clone();
            for (idx, col) in jac.iter().enumerate() {
                let step: f64 = -col.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>();
                let (k, g, j) = layout.slots[idx / 2];
                if idx % 2 == 0 {
                    trial[k][g][j].re += step;
                } else {
                    trial[k][g][j].im += step;
                }
            }
            debug_assert_eq!(p, 2 * layout.slots.len());
            let tv = term_vectors(&layout, &trial);
            let tr = residual(target, &tv);
            let tc: f64 = tr.iter().map(|x| x * x).sum();
            if tc < cost {
                params = trial;
                vectors = tv;
                r = tr;
                cost = tc;
                mu = (mu / 3.0).max(1e-300);
                improved = true;
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            break;
        }
    }

    let mut out_terms = Vec::new();
    for (k, factors) in params.iter().enumerate() {
        let mut weight = 1.0;
        let mut states = Vec::with_capacity(factors.len());
        for (g, f) in factors.iter().enumerate() {
            let n = norm(f);
            weight *= n * n;
            let fdims: Vec<usize> = layout.groups[k][g].iter().map(|&s| layout.dims[s]).collect();
            debug_assert_eq!(layout.factor_dim(k, g), f.len());
            if n == 0.0 {
                break;
            }
            states.push(PureState::from_parts_unchecked(
                f.iter().map(|z| z / n).collect(),
                fdims,
            ));
        }
        if weight > 0.0 && states.len() == factors.len() {
            out_terms.push(ProductTerm {
                weight,
                groups: layout.groups[k].clone(),
                factors: states,
            });
        }
    }
    let total: f64 = out_terms.iter().map(|t| t.weight).sum();
    for t in &mut out_terms {
        t.weight /= total;
    }
    ProductEnsemble::from_parts_unchecked(layout.dims, out_terms)
}

/// One real column per (term, factor, component, re/im) parameter.
fn jacobian(layout: &Layout, params: &[Vec<Vec<C64>>], vectors: &[Vec<C64>]) -> Vec<Vec<f64>> {
    let d: usize = layout.dims.iter().product();
    let mut cols = Vec::with_capacity(2 * layout.slots.len());
    for &(k, g, j) in &layout.slots {
        let x = &vectors[k];
        for unit in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            let mut e = vec![C64::new(0.0, 0.0); layout.factor_dim(k, g)];
            e[j] = unit;
            let refs: Vec<&[C64]> = params[k]
                .iter()
                .enumerate()
                .map(|(h, f)| if h == g { e.as_slice() } else { f.as_slice() })
                .collect();
            let dx = embed_product(&layout.dims, &layout.groups[k], &refs);
            let dr = ComplexMatrix::from_fn(d, d, |a, b| dx[a] * x[b].conj() + x[a] * dx[b].conj());
            cols.push(hermitian_vec(&dr));
        }
    }
    cols
}
