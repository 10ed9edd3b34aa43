//! Exact averages behind the average-congestion bound: the sum over triangles t with apex j
//! of pi(Omega_it) sqrt(l_i(t) u_i(t)), and the expected pinning depth over Omega_it.

use flipwalk_core::{catalan, Rational};
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::FlowError;
use crate::pinning::pinnings_from;

/// A triangle (w, j, z), w < j < z, on j's side of the root triangle of Omega_i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApexTriangle {
    pub w: usize,
    pub j: usize,
    pub z: usize,
}

/// The region of Omega_i that contains j: `(i, n+1)` when j > i, `(0, i)` when j < i.
fn region(n: usize, i: usize, j: usize) -> Result<(usize, usize), FlowError> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(FlowError::Malformed(format!("blocks ({i},{j}) out of range for n={n}")));
    }
    match j.cmp(&i) {
        std::cmp::Ordering::Greater => Ok((i, n + 1)),
        std::cmp::Ordering::Less => Ok((0, i)),
        std::cmp::Ordering::Equal => Err(FlowError::SameBlock(i)),
    }
}

/// The triangles t of T_ij.
pub fn apex_triangles(n: usize, i: usize, j: usize) -> Result<Vec<ApexTriangle>, FlowError> {
    let (lo, hi) = region(n, i, j)?;
    let mut out = Vec::new();
    for w in lo..j {
        for z in j + 1..=hi {
            out.push(ApexTriangle { w, j, z });
        }
    }
    Ok(out)
}

/// l_i(t): size of the piece between the base (w,z) and the side of the root triangle,
/// measured like the other side lengths (`hi - lo + 1 - (z - w)`).
pub fn lower_size(n: usize, i: usize, t: &ApexTriangle) -> Result<usize, FlowError> {
    let (lo, hi) = region(n, i, t.j)?;
    Ok(hi - lo + 1 - (t.z - t.w))
}

/// u_i(t): the larger of `j - w` and `z - j`.
pub fn upper_size(t: &ApexTriangle) -> usize {
    (t.j - t.w).max(t.z - t.j)
}

/// pi(Omega_it) in closed form.
pub fn block_triangle_measure(n: usize, i: usize, t: &ApexTriangle) -> Result<Rational, FlowError> {
    let (lo, hi) = region(n, i, t.j)?;
    let rest = hi - lo - (t.z - t.w);
    // the root triangle's other side is triangulated freely
    let other = if t.j > i { catalan(i - 1) } else { catalan(n - i) };
    let num = other
        * catalan(t.j - t.w - 1)
        * catalan(t.z - t.j - 1)
        * catalan(rest);
    Ok(Rational::new(num, catalan(n)))
}

/// pi-hat(i) = C_{i-1} C_{n-i} / C_n.
fn block_measure(n: usize, i: usize) -> Rational {
    Rational::new(catalan(i - 1) * catalan(n - i), catalan(n))
}

/// sum over t in T_ij of pi(Omega_it) sqrt(l_i(t)) sqrt(u_i(t)).
pub fn boundlu_sum(n: usize, i: usize, j: usize) -> Result<f64, FlowError> {
    let mut acc = 0.0;
    for t in apex_triangles(n, i, j)? {
        let m = block_triangle_measure(n, i, &t)?.to_f64().unwrap();
        acc += m * ((lower_size(n, i, &t)? * upper_size(&t)) as f64).sqrt();
    }
    Ok(acc)
}

/// boundlu_sum / (sqrt(n) pi-hat(i)).
pub fn boundlu_ratio(n: usize, i: usize, j: usize) -> Result<f64, FlowError> {
    Ok(boundlu_sum(n, i, j)? / ((n as f64).sqrt() * block_measure(n, i).to_f64().unwrap()))
}

/// Largest boundlu ratio over all pairs i != j, with its argmax.
pub fn max_boundlu_ratio(n: usize) -> Result<(f64, usize, usize), FlowError> {
    let mut best = (0.0, 0, 0);
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                let r = boundlu_ratio(n, i, j)?;
                if r > best.0 {
                    best = (r, i, j);
                }
            }
        }
    }
    Ok(best)
}

/// One row of the pinning-overcount table.
#[derive(Debug, Clone, Serialize)]
pub struct NumetaRow {
    pub i: usize,
    pub t: ApexTriangle,
    pub l: usize,
    pub u: usize,
    pub mass: String,
    /// E[d_j(x)] for x uniform on Omega_it: the number of pinnings eta starting at i with
    /// j ~ eta and x in Omega_eta.
    pub mean_depth: f64,
    /// mean_depth / sqrt(l).
    pub ratio: f64,
}

/// Exact overcount sum_{eta: j ~ eta} pi(Omega_eta cap Omega_it) / pi(Omega_it) for every t
/// in T_ij, computed from pinning measures.
pub fn numeta_rows(n: usize, i: usize, j: usize) -> Result<Vec<NumetaRow>, FlowError> {
    let tris = apex_triangles(n, i, j)?;
    let mut totals = vec![Rational::from_integer(0.into()); tris.len()];
    for eta in pinnings_from(n, i) {
        let Some(((u, v), _)) = eta.chord_of(j) else { continue };
        let base = eta.measure();
        for (k, t) in tris.iter().enumerate() {
            if u <= t.w && t.z <= v {
                let rest = v - u - (t.z - t.w);
                let inner = catalan(t.j - t.w - 1) * catalan(t.z - t.j - 1) * catalan(rest);
                totals[k] += &base * Rational::new(inner, catalan(v - u - 1));
            }
        }
    }
    tris.into_iter()
        .zip(totals)
        .map(|(t, total)| {
            let mass = block_triangle_measure(n, i, &t)?;
            let mean = (total / &mass).to_f64().unwrap();
            let l = lower_size(n, i, &t)?;
            Ok(NumetaRow { i, t, l, u: upper_size(&t), mass: mass.to_string(), mean_depth: mean, ratio: mean / (l as f64).sqrt() })
        })
        .collect()
}

/// Largest numeta ratio over all pairs and triangles.
pub fn max_numeta_ratio(n: usize) -> Result<f64, FlowError> {
    let mut best = 0.0f64;
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                for r in numeta_rows(n, i, j)? {
                    best = best.max(r.ratio);
                }
            }
        }
    }
    Ok(best)
}
