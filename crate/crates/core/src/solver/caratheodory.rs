//! Exact reduction of an atom set: any d² + 1 pure-state projectors on a
//! d-dimensional space are affinely dependent, so weight can be moved along
//! the dependence until one atom drops out without changing the mixture.

use crate::linalg::{inner, real::null_vector, C64};

fn projector_coords(v: &[C64]) -> Vec<f64> {
    let d = v.len();
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(v[i].norm_sqr());
        for j in i + 1..d {
            let z = v[i] * v[j].conj();
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

/// Removes atoms until at most `cap` remain. Returns the surviving indices
/// with their new weights. The mixture Σ w_k |v_k⟩⟨v_k| is preserved up to
/// round-off while `cap ≥ d²`; below that the smallest atom is folded into
/// its nearest neighbour, which perturbs the mixture.
pub(crate) fn reduce(vectors: &[Vec<C64>], weights: &[f64], cap: usize) -> Vec<(usize, f64)> {
    let mut alive: Vec<(usize, f64)> = weights.iter().copied().enumerate().collect();
    let d = vectors.first().map_or(0, Vec::len);
    let dim = d * d;
    while alive.len() > cap {
        let cols = alive.len();
        let mut exact = false;
        if cols > dim {
            let coords: Vec<Vec<f64>> = alive.iter().map(|&(k, _)| projector_coords(&vectors[k])).collect();
            let mut a = vec![0.0; dim * cols];
            for (c, col) in coords.iter().enumerate() {
                for (r, &x) in col.iter().enumerate() {
                    a[r * cols + c] = x;
                }
            }
            if let Some(c) = null_vector(&a, dim, cols, 1e-12) {
                // Σ c_k = 0 (trace row), so some c_k > 0.
                let mut t = f64::INFINITY;
                let mut hit = 0;
                for (i, (&ci, &(_, w))) in c.iter().zip(&alive).enumerate() {
                    if ci > 1e-14 && w / ci < t {
                        t = w / ci;
                        hit = i;
                    }
                }
                if t.is_finite() {
                    for (ci, slot) in c.iter().zip(alive.iter_mut()) {
                        slot.1 = (slot.1 - t * ci).max(0.0);
                    }
                    alive.remove(hit);
                    alive.retain(|&(_, w)| w > 0.0);
                    exact = true;
                }
            }
        }
        if !exact {
            // Fold the lightest atom into the atom it overlaps most.
            let (pos, &(k, w)) = alive
                .iter()
                .enumerate()
                .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
                .expect("non-empty");
            alive.remove(pos);
            let nearest = alive
                .iter_mut()
                .max_by(|a, b| {
                    let fa = inner(&vectors[a.0], &vectors[k]).norm_sqr();
                    let fb = inner(&vectors[b.0], &vectors[k]).norm_sqr();
                    fa.total_cmp(&fb)
                })
                .expect("cap is positive");
            nearest.1 += w;
        }
    }
    let total: f64 = alive.iter().map(|&(_, w)| w).sum();
    alive.iter_mut().for_each(|slot| slot.1 /= total);
    alive
}
