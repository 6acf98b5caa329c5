use ndarray::{Array1, Array2};

use super::{bit, site_mask};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::xy::{EigenSystem, OccupationPattern};

/// Single-site operators. `Lower` (`a`, the `X^{+,-}` matrix) removes a particle,
/// `Raise` (`a^*`, `X^{-,+}`) adds one; `Up` and `Number` are `X^{+,+}` and `X^{-,-}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    X,
    Y,
    Z,
    Number,
    Up,
    Lower,
    Raise,
}

impl SiteKind {
    pub const CLUSTER_CASES: [SiteKind; 4] = [SiteKind::Up, SiteKind::Lower, SiteKind::Raise, SiteKind::Number];

    pub fn matrix(self) -> [[C64; 2]; 2] {
        let z = C64::new(0.0, 0.0);
        let o = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            SiteKind::X => [[z, o], [o, z]],
            SiteKind::Y => [[z, -i], [i, z]],
            SiteKind::Z => [[o, z], [z, -o]],
            SiteKind::Number => [[z, z], [z, o]],
            SiteKind::Up => [[o, z], [z, z]],
            SiteKind::Lower => [[z, o], [z, z]],
            SiteKind::Raise => [[z, z], [o, z]],
        }
    }

    /// Change of the particle number.
    pub fn charge(self) -> i32 {
        match self {
            SiteKind::Lower => -1,
            SiteKind::Raise => 1,
            SiteKind::Number | SiteKind::Up | SiteKind::Z => 0,
            SiteKind::X | SiteKind::Y => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SiteKind::X => "X",
            SiteKind::Y => "Y",
            SiteKind::Z => "Z",
            SiteKind::Number => "--",
            SiteKind::Up => "++",
            SiteKind::Lower => "+-",
            SiteKind::Raise => "-+",
        }
    }
}

/// `I ⊗ … ⊗ m ⊗ … ⊗ I` with `m` at internal site `q`.
pub fn embed_site(n: usize, q: usize, m: &[[C64; 2]; 2]) -> Array2<C64> {
    let d = 1usize << n;
    let mut out = Array2::zeros((d, d));
    let mask = site_mask(q, n);
    for b in 0..d {
        let s = bit(b, q, n);
        for sp in 0..2 {
            let v = m[sp][s];
            if v.re != 0.0 || v.im != 0.0 {
                let bp = if sp == 1 { b | mask } else { b & !mask };
                out[[bp, b]] += v;
            }
        }
    }
    out
}

pub fn site_operator(n: usize, q: usize, kind: SiteKind) -> Array2<C64> {
    embed_site(n, q, &kind.matrix())
}

pub fn total_number(n: usize) -> Array2<C64> {
    let d = 1usize << n;
    let mut out = Array2::zeros((d, d));
    for b in 0..d {
        out[[b, b]] = C64::new(b.count_ones() as f64, 0.0);
    }
    out
}

fn jw_sign(b: usize, j: usize, n: usize) -> f64 {
    let above = b >> (n - j);
    if above.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `c_j = σZ_0 ⋯ σZ_{j-1} a_j` as dense matrices.
pub fn jordan_wigner_modes(n: usize) -> Result<Vec<Array2<C64>>> {
    if n > 12 {
        return Err(Error::CapExceeded { sites: n, cap: 12 });
    }
    let d = 1usize << n;
    Ok((0..n)
        .map(|j| {
            let mut c = Array2::zeros((d, d));
            for b in 0..d {
                if bit(b, j, n) == 1 {
                    c[[b ^ site_mask(j, n), b]] = C64::new(jw_sign(b, j, n), 0.0);
                }
            }
            c
        })
        .collect())
}

/// `2 Σ_{jk} c_j^* M_{jk} c_k + E0`.
pub fn quadratic_form(modes: &[Array2<C64>], m: &Array2<f64>, offset: f64) -> Array2<C64> {
    let d = modes[0].nrows();
    let mut h = Array2::<C64>::eye(d) * C64::new(offset, 0.0);
    for (j, cj) in modes.iter().enumerate() {
        let cj_dag = cj.t().mapv(|z| z.conj());
        for (k, ck) in modes.iter().enumerate() {
            if m[[j, k]] != 0.0 {
                h = h + cj_dag.dot(ck) * C64::new(2.0 * m[[j, k]], 0.0);
            }
        }
    }
    h
}

/// Largest CAR residual: `max(|{c_j, c_k^*} - δ_jk|, |{c_j, c_k}|)`.
pub fn car_residual(modes: &[Array2<C64>]) -> f64 {
    let d = modes[0].nrows();
    let id = Array2::<C64>::eye(d);
    let mut worst = 0.0f64;
    for (j, cj) in modes.iter().enumerate() {
        for (k, ck) in modes.iter().enumerate() {
            let ck_dag = ck.t().mapv(|z| z.conj());
            let mut a = cj.dot(&ck_dag) + ck_dag.dot(cj);
            if j == k {
                a = a - &id;
            }
            let b = cj.dot(ck) + ck.dot(cj);
            for z in a.iter().chain(b.iter()) {
                worst = worst.max(z.norm());
            }
        }
    }
    worst
}

/// `c_j^* ψ` on `n` qubits (Jordan-Wigner creation).
pub fn apply_creation(psi: &Array1<f64>, j: usize, n: usize) -> Array1<f64> {
    let mut out = Array1::zeros(psi.len());
    for b in 0..psi.len() {
        if psi[b] != 0.0 && bit(b, j, n) == 0 {
            out[b | site_mask(j, n)] += jw_sign(b, j, n) * psi[b];
        }
    }
    out
}

/// `Π_{α_k = 1} b_k^* Ω` with `b_k^* = Σ_i φ_k(i) c_i^*` and `Ω` the all-up vacuum.
pub fn free_fermion_eigenstate(es: &EigenSystem, alpha: &OccupationPattern) -> Array1<f64> {
    let n = es.size();
    let mut psi = Array1::zeros(1usize << n);
    psi[0] = 1.0;
    for k in alpha.occupied() {
        let mut next = Array1::zeros(psi.len());
        for i in 0..n {
            let amp = es.vectors[[i, k]];
            if amp != 0.0 {
                next.scaled_add(amp, &apply_creation(&psi, i, n));
            }
        }
        psi = next;
    }
    psi
}

/// `ψ_A ⊗ ψ_B` with `A` the leading sites.
pub fn kron_states(a: &Array1<f64>, b: &Array1<f64>) -> Array1<f64> {
    let mut out = Array1::zeros(a.len() * b.len());
    for (i, &x) in a.iter().enumerate() {
        if x != 0.0 {
            for (j, &y) in b.iter().enumerate() {
                out[i * b.len() + j] = x * y;
            }
        }
    }
    out
}

/// `⟨ψ, c_j c_k^* ψ⟩` for every pair.
pub fn two_point_matrix(psi: &Array1<C64>, modes: &[Array2<C64>]) -> Array2<C64> {
    let n = modes.len();
    let dag: Vec<Array1<C64>> = modes.iter().map(|c| c.t().mapv(|z| z.conj()).dot(psi)).collect();
    let mut g = Array2::zeros((n, n));
    for j in 0..n {
        for k in 0..n {
            // ⟨ψ, c_j c_k^* ψ⟩ = ⟨c_j^* ψ, c_k^* ψ⟩
            g[[j, k]] = dag[j].iter().zip(dag[k].iter()).map(|(a, b)| a.conj() * b).sum();
        }
    }
    g
}

pub fn to_complex_state(v: &Array1<f64>) -> Array1<C64> {
    v.mapv(|x| C64::new(x, 0.0))
}
