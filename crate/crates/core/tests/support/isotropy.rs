//! Independent isotropy oracles: sign search over ℝ, residue enumeration plus
//! Hensel's criterion over ℚ_p, and a small-height rational point search.

use std::collections::HashMap;

fn vp(mut x: i64, p: i64) -> u32 {
    assert!(x != 0);
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Squarefree part of a nonzero integer, sign included.
fn squarefree(mut x: i64) -> i64 {
    let sign = x.signum();
    x = x.abs();
    let mut out = 1;
    let mut d = 2;
    while d * d <= x {
        let mut e = 0;
        while x % d == 0 {
            x /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    sign * out * x
}

/// Over ℝ: some small integer vectors have values of both signs.
pub fn real_isotropic(diag: &[(i64, i64)]) -> bool {
    let n = diag.len();
    let (mut pos, mut neg) = (false, false);
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let mut num = 0f64;
        for &(a, b) in diag {
            let x = (c % 3) as f64 - 1.0;
            c /= 3;
            num += a as f64 / b as f64 * x * x;
        }
        pos |= num > 0.0;
        neg |= num < 0.0;
    }
    pos && neg
}

/// Over ℚ_p: a primitive integer vector mod `p^k` with
/// `v(Σ sᵢyᵢ²) ≥ 2δ + 1`, `δ = minᵢ v(2sᵢyᵢ)`, exists. By Hensel's lemma such a
/// vector lifts to a zero, and every zero of the squarefree form produces one
/// once `k ≥ 3` (odd p) or `k ≥ 5` (p = 2).
pub fn padic_isotropic(diag: &[(i64, i64)], p: i64, k: u32) -> bool {
    let m = p.pow(k);
    let s: Vec<i64> = diag.iter().map(|&(a, b)| squarefree(a * b)).collect();
    let cap = k as i64;
    // state: (sum mod m, δ capped at k, has a unit coordinate)
    let mut states: HashMap<(i64, i64, bool), ()> = HashMap::new();
    states.insert((0, cap, false), ());
    for &si in &s {
        let mut moves: HashMap<(i64, i64, bool), ()> = HashMap::new();
        for y in 0..m {
            let term = (si.rem_euclid(m) * y % m) * y % m;
            let dy = if y == 0 { cap } else { (vp(2 * si, p) as i64 + vp(y, p) as i64).min(cap) };
            moves.insert((term, dy, y % p != 0), ());
        }
        let mut next = HashMap::new();
        for &(sum, d, prim) in states.keys() {
            for &(t, dy, u) in moves.keys() {
                next.insert(((sum + t) % m, d.min(dy), prim || u), ());
            }
        }
        states = next;
    }
    states.keys().any(|&(sum, d, prim)| {
        let need = 2 * d + 1;
        prim && need <= cap && sum % p.pow(need as u32) == 0
    })
}

/// Integer point of max-norm ≤ `h` with `Q = 0` (forms with denominators
/// are cleared first). A hit proves isotropy everywhere.
pub fn small_height_zero(diag: &[(i64, i64)], h: i64) -> Option<Vec<i64>> {
    let l: i64 = diag.iter().map(|&(_, b)| b).product();
    let coef: Vec<i128> = diag.iter().map(|&(a, b)| (a * (l / b)) as i128).collect();
    let n = coef.len();
    let mut x = vec![-h; n];
    loop {
        if x.iter().any(|&v| v != 0) {
            let q: i128 = coef.iter().zip(&x).map(|(c, &v)| c * (v as i128) * (v as i128)).sum();
            if q == 0 {
                return Some(x);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            x[i] += 1;
            if x[i] <= h {
                break;
            }
            x[i] = -h;
            i += 1;
        }
    }
}

pub fn residue_depth(p: i64) -> u32 {
    if p == 2 {
        5
    } else {
        3
    }
}
