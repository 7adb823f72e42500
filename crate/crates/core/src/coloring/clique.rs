use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairValue {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Vertices of a clique in the graph of `x₁² + ⋯ + x_n²` with every pairwise value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliqueCertificate {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
    pub pairwise: Vec<PairValue>,
    pub max_deviation: f64,
}

impl CliqueCertificate {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn verify(&self, tol: f64) -> bool {
        self.max_deviation <= tol && self.pairwise.len() == self.size() * (self.size() - 1) / 2
    }
}

/// Upper bound on the clique number of a quadratic graph on an n-dimensional space.
pub fn clique_upper(n: usize) -> usize {
    n + 1
}

/// Regular unit simplex: `v₀ = 0`, and `v_k` sits above the centroid of
/// `v₀ … v_{k-1}` at the height that puts it at distance 1 from all of them.
pub fn simplex_clique(n: usize) -> Result<CliqueCertificate> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut vertices = vec![vec![0.0; n]];
    for k in 1..=n {
        let mut c = vec![0.0; n];
        for v in &vertices {
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += vi / k as f64;
            }
        }
        let r2: f64 = c.iter().map(|x| x * x).sum();
        c[k - 1] = (1.0 - r2).sqrt();
        vertices.push(c);
    }
    let mut pairwise = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let value: f64 = vertices[i].iter().zip(&vertices[j]).map(|(a, b)| (a - b) * (a - b)).sum();
            max_deviation = max_deviation.max((value - 1.0).abs());
            pairwise.push(PairValue { i, j, value });
        }
    }
    Ok(CliqueCertificate { n, vertices, pairwise, max_deviation })
}
