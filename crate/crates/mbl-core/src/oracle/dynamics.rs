use ndarray::{Array1, Array2, Axis, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ManyBodyEigenSystem;
use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::xxz::EnergyWindow;

/// Largest dimension for which commutator norms are computed densely (both norms).
pub const DENSE_COMMUTATOR_CAP: usize = 512;

/// `O_e ↦ (e^{i(E_m − E_n)t} O_e[m, n])`, the Heisenberg evolution in the eigenbasis.
pub fn evolve_in_eigenbasis(op_e: &Array2<C64>, energies: &[f64], t: f64) -> Array2<C64> {
    let ph: Vec<C64> = energies.iter().map(|&e| C64::from_polar(1.0, e * t)).collect();
    let mut out = op_e.clone();
    for ((m, n), z) in out.indexed_iter_mut() {
        *z *= ph[m] * ph[n].conj();
    }
    out
}

/// `τ_t(O) = e^{iHt} O e^{-iHt}`.
pub fn heisenberg(es: &ManyBodyEigenSystem, op: &Array2<C64>, t: f64) -> Array2<C64> {
    let e = es.to_eigenbasis(op);
    es.from_eigenbasis(&evolve_in_eigenbasis(&e, &es.energies, t))
}

/// Observables expressed in the eigenbasis, optionally compressed to an energy window.
#[derive(Debug, Clone)]
pub struct EigenFrame {
    pub energies: Vec<f64>,
    /// Global positions kept (all, or the window).
    pub positions: Vec<usize>,
}

impl EigenFrame {
    pub fn new(es: &ManyBodyEigenSystem, window: Option<&EnergyWindow>) -> Self {
        let positions = match window {
            Some(w) => es.window_positions(w),
            None => (0..es.dim()).collect(),
        };
        EigenFrame { energies: positions.iter().map(|&k| es.energies[k]).collect(), positions }
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    /// `P O P` in the kept eigenbasis.
    pub fn project(&self, es: &ManyBodyEigenSystem, op: &Array2<C64>) -> Array2<C64> {
        let full = es.to_eigenbasis(op);
        if self.positions.len() == es.dim() {
            return full;
        }
        full.select(Axis(0), &self.positions).select(Axis(1), &self.positions)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorNorm {
    pub t: f64,
    pub operator: f64,
    /// Only available on the dense path.
    pub trace: Option<f64>,
}

fn commutator(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    a.dot(b) - b.dot(a)
}

/// `‖[τ_t(X'), Y']‖` on a time grid, with `X' = P X P` when a window is given.
pub fn commutator_norms(
    es: &ManyBodyEigenSystem,
    x: &Array2<C64>,
    y: &Array2<C64>,
    time_grid: &[f64],
    window: Option<&EnergyWindow>,
) -> Result<Vec<CommutatorNorm>> {
    let frame = EigenFrame::new(es, window);
    let xe = frame.project(es, x);
    let ye = frame.project(es, y);
    commutator_norms_in_frame(&frame, &xe, &ye, time_grid)
}

pub fn commutator_norms_in_frame(
    frame: &EigenFrame,
    xe: &Array2<C64>,
    ye: &Array2<C64>,
    time_grid: &[f64],
) -> Result<Vec<CommutatorNorm>> {
    if frame.dim() == 0 {
        return Ok(time_grid.iter().map(|&t| CommutatorNorm { t, operator: 0.0, trace: Some(0.0) }).collect());
    }
    if frame.dim() <= DENSE_COMMUTATOR_CAP {
        return time_grid
            .iter()
            .map(|&t| {
                let c = commutator(&evolve_in_eigenbasis(xe, &frame.energies, t), ye);
                let sv = linalg::singular_values(&c)?;
                Ok(CommutatorNorm { t, operator: sv.iter().copied().fold(0.0, f64::max), trace: Some(sv.iter().sum()) })
            })
            .collect();
    }
    let ops = lanczos_commutator_norms(&frame.energies, xe, ye, time_grid, 60, 1e-10)?;
    Ok(time_grid.iter().zip(ops).map(|(&t, operator)| CommutatorNorm { t, operator, trace: None }).collect())
}

/// Complex block of column vectors stored as real and imaginary parts.
#[derive(Clone)]
struct CBlock {
    re: Array2<f64>,
    im: Array2<f64>,
}

impl CBlock {
    fn zeros(d: usize, k: usize) -> Self {
        CBlock { re: Array2::zeros((d, k)), im: Array2::zeros((d, k)) }
    }
}

/// Dense operator with a real fast path.
struct SplitOp {
    re: Array2<f64>,
    im: Option<Array2<f64>>,
}

impl SplitOp {
    fn new(a: &Array2<C64>) -> Self {
        let re = a.mapv(|z| z.re);
        let im = a.mapv(|z| z.im);
        let im = if im.iter().all(|&v| v == 0.0) { None } else { Some(im) };
        SplitOp { re, im }
    }

    fn apply(&self, z: &CBlock) -> CBlock {
        let mut re = self.re.dot(&z.re);
        let mut im = self.re.dot(&z.im);
        if let Some(ai) = &self.im {
            re = re - ai.dot(&z.im);
            im = im + ai.dot(&z.re);
        }
        CBlock { re, im }
    }
}

fn phase_mul(z: &CBlock, ph_re: &Array2<f64>, ph_im: &Array2<f64>, conj: bool) -> CBlock {
    let s = if conj { -1.0 } else { 1.0 };
    let re = &z.re * ph_re - &(&z.im * ph_im) * s;
    let im = &z.im * ph_re + &(&z.re * ph_im) * s;
    CBlock { re, im }
}

fn is_hermitian(a: &Array2<C64>) -> bool {
    linalg::max_abs_diff_c(a, &linalg::adjoint(a)) < 1e-12 * (1.0 + a.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Operator norms of `[τ_t(X), Y]` for every grid time by batched Lanczos
/// (on `i[τ_t X, Y]` when both are Hermitian, otherwise on `C^*C`).
fn lanczos_commutator_norms(
    energies: &[f64],
    xe: &Array2<C64>,
    ye: &Array2<C64>,
    time_grid: &[f64],
    max_iter: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let d = energies.len();
    let nt = time_grid.len();
    let hermitian = is_hermitian(xe) && is_hermitian(ye);
    let xo = SplitOp::new(xe);
    let yo = SplitOp::new(ye);
    let xo_h = SplitOp::new(&linalg::adjoint(xe));
    let yo_h = SplitOp::new(&linalg::adjoint(ye));
    let mut ph_re = Array2::zeros((d, nt));
    let mut ph_im = Array2::zeros((d, nt));
    for m in 0..d {
        for (c, &t) in time_grid.iter().enumerate() {
            ph_re[[m, c]] = (energies[m] * t).cos();
            ph_im[[m, c]] = (energies[m] * t).sin();
        }
    }
    // τ_t(X) z = D X D^* z with D = diag(e^{iEt})
    let xt =
        |op: &SplitOp, z: &CBlock| phase_mul(&op.apply(&phase_mul(z, &ph_re, &ph_im, true)), &ph_re, &ph_im, false);
    let apply_c = |z: &CBlock| {
        let a = xt(&xo, &yo.apply(z));
        let b = yo.apply(&xt(&xo, z));
        CBlock { re: a.re - b.re, im: a.im - b.im }
    };
    let apply_c_adj = |z: &CBlock| {
        let a = yo_h.apply(&xt(&xo_h, z));
        let b = xt(&xo_h, &yo_h.apply(z));
        CBlock { re: a.re - b.re, im: a.im - b.im }
    };
    let apply = |z: &CBlock| {
        if hermitian {
            // i C
            let c = apply_c(z);
            CBlock { re: -c.im, im: c.re }
        } else {
            apply_c_adj(&apply_c(z))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = CBlock::zeros(d, nt);
    for m in 0..d {
        for c in 0..nt {
            v.re[[m, c]] = rng.random::<f64>() - 0.5;
            v.im[[m, c]] = rng.random::<f64>() - 0.5;
        }
    }
    normalize_columns(&mut v);
    let steps = max_iter.min(d);
    let mut basis: Vec<CBlock> = Vec::with_capacity(steps);
    let mut alphas = vec![Vec::<f64>::new(); nt];
    let mut betas = vec![Vec::<f64>::new(); nt];
    let mut estimate = vec![0.0f64; nt];
    let mut converged = vec![false; nt];
    for k in 0..steps {
        let mut w = apply(&v);
        basis.push(v.clone());
        for c in 0..nt {
            if converged[c] {
                continue;
            }
            let a = column_dot_re(&v, &w, c);
            alphas[c].push(a);
            // full reorthogonalization against the Krylov basis
            for _ in 0..2 {
                for q in &basis {
                    let (pr, pi) = column_dot(q, &w, c);
                    for m in 0..d {
                        let (qr, qi) = (q.re[[m, c]], q.im[[m, c]]);
                        w.re[[m, c]] -= pr * qr - pi * qi;
                        w.im[[m, c]] -= pr * qi + pi * qr;
                    }
                }
            }
            let b = column_norm(&w, c);
            let ritz = tridiagonal_extremes(&alphas[c], &betas[c])?;
            let est = if hermitian { ritz.0.abs().max(ritz.1.abs()) } else { ritz.1.max(0.0).sqrt() };
            let scale = est.max(1e-300);
            if (k > 0 && (est - estimate[c]).abs() <= tol * scale) || b <= 1e-14 * (scale + 1.0) {
                converged[c] = true;
            }
            estimate[c] = est;
            betas[c].push(b);
            let inv = if b > 0.0 { 1.0 / b } else { 0.0 };
            for m in 0..d {
                w.re[[m, c]] *= inv;
                w.im[[m, c]] *= inv;
            }
        }
        if converged.iter().all(|&x| x) {
            return Ok(estimate);
        }
        v = w;
    }
    Ok(estimate)
}

fn column_dot(a: &CBlock, b: &CBlock, c: usize) -> (f64, f64) {
    // ⟨a, b⟩ = Σ conj(a) b
    let (ar, ai, br, bi) = (a.re.column(c), a.im.column(c), b.re.column(c), b.im.column(c));
    (ar.dot(&br) + ai.dot(&bi), ar.dot(&bi) - ai.dot(&br))
}

fn column_dot_re(a: &CBlock, b: &CBlock, c: usize) -> f64 {
    column_dot(a, b, c).0
}

fn column_norm(a: &CBlock, c: usize) -> f64 {
    (a.re.column(c).dot(&a.re.column(c)) + a.im.column(c).dot(&a.im.column(c))).sqrt()
}

fn normalize_columns(a: &mut CBlock) {
    for c in 0..a.re.ncols() {
        let n = column_norm(a, c);
        a.re.column_mut(c).mapv_inplace(|x| x / n);
        a.im.column_mut(c).mapv_inplace(|x| x / n);
    }
}

/// Smallest and largest eigenvalue of the Lanczos tridiagonal matrix.
fn tridiagonal_extremes(alpha: &[f64], beta: &[f64]) -> Result<(f64, f64)> {
    let e = linalg::eigh_tridiagonal(alpha, &beta[..alpha.len() - 1], linalg::Selection::All, false)?;
    Ok((e.values[0], *e.values.last().unwrap()))
}

/// `‖[[τ_t(X'), τ_s(Y')], Z']‖₁` with window compression.
pub fn double_commutator_norm(
    es: &ManyBodyEigenSystem,
    x: &Array2<C64>,
    y: &Array2<C64>,
    z: &Array2<C64>,
    t: f64,
    s: f64,
    window: Option<&EnergyWindow>,
) -> Result<f64> {
    let frame = EigenFrame::new(es, window);
    if frame.dim() > 2 * DENSE_COMMUTATOR_CAP {
        return Err(Error::Numerical(format!("double commutator in dimension {} exceeds the dense cap", frame.dim())));
    }
    let xt = evolve_in_eigenbasis(&frame.project(es, x), &frame.energies, t);
    let ys = evolve_in_eigenbasis(&frame.project(es, y), &frame.energies, s);
    let ze = frame.project(es, z);
    linalg::trace_norm(&commutator(&commutator(&xt, &ys), &ze))
}

/// `|⟨ψ, X'Y'ψ⟩ − ⟨ψ, X'ψ⟩⟨ψ, Y'ψ⟩|` with `X' = τ_t(P X P)`, `Y' = P Y P`.
pub fn correlation(
    es: &ManyBodyEigenSystem,
    psi: &Array1<C64>,
    x: &Array2<C64>,
    y: &Array2<C64>,
    t: f64,
    window: Option<&EnergyWindow>,
) -> Result<f64> {
    let frame = EigenFrame::new(es, window);
    let full = es.state_to_eigenbasis(psi);
    let c: Array1<C64> = frame.positions.iter().map(|&k| full[k]).collect();
    let xt = evolve_in_eigenbasis(&frame.project(es, x), &frame.energies, t);
    let ye = frame.project(es, y);
    let inner = |a: &Array1<C64>, b: &Array1<C64>| -> C64 { a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum() };
    let yc = ye.dot(&c);
    let xy = inner(&c, &xt.dot(&yc));
    let xm = inner(&c, &xt.dot(&c));
    let ym = inner(&c, &yc);
    Ok((xy - xm * ym).norm())
}

/// Correlations in every kept eigenstate at once: `|(X_t Y)_{aa} − (X_t)_{aa} Y_{aa}|`.
pub fn eigenstate_correlations(frame: &EigenFrame, xe: &Array2<C64>, ye: &Array2<C64>, t: f64) -> Vec<f64> {
    let xt = evolve_in_eigenbasis(xe, &frame.energies, t);
    (0..frame.dim())
        .map(|a| {
            let xy: C64 = (0..frame.dim()).map(|m| xt[[a, m]] * ye[[m, a]]).sum();
            (xy - xt[[a, a]] * ye[[a, a]]).norm()
        })
        .collect()
}

/// Normalized partial trace of `op` over every site outside `keep` (a contiguous range of
/// internal sites), tensored back with the identity.
pub fn conditional_expectation(op: &Array2<C64>, n: usize, keep: std::ops::Range<usize>) -> Array2<C64> {
    let (l, m) = (keep.start, keep.end - keep.start);
    let r = n - keep.end;
    let (dl, dm, dr) = (1usize << l, 1usize << m, 1usize << r);
    let idx = |a: usize, s: usize, c: usize| (a * dm + s) * dr + c;
    let mut reduced = Array2::<C64>::zeros((dm, dm));
    for a in 0..dl {
        for c in 0..dr {
            for s in 0..dm {
                for sp in 0..dm {
                    reduced[[s, sp]] += op[[idx(a, s, c), idx(a, sp, c)]];
                }
            }
        }
    }
    reduced.mapv_inplace(|z| z / (dl * dr) as f64);
    let d = 1usize << n;
    let mut out = Array2::zeros((d, d));
    for a in 0..dl {
        for c in 0..dr {
            for s in 0..dm {
                for sp in 0..dm {
                    out[[idx(a, s, c), idx(a, sp, c)]] = reduced[[s, sp]];
                }
            }
        }
    }
    out
}

/// `Wᵀ (E_S(Y) − Y) W` computed without forming `E_S(Y)` on the full space.
fn windowed_approximation_error(
    y: &Array2<C64>,
    n: usize,
    keep: std::ops::Range<usize>,
    w: &Array2<f64>,
    y_window: &Array2<C64>,
) -> Result<f64> {
    let (l, m) = (keep.start, keep.end - keep.start);
    let r = n - keep.end;
    let (dl, dm, dr) = (1usize << l, 1usize << m, 1usize << r);
    let idx = |a: usize, s: usize, c: usize| (a * dm + s) * dr + c;
    let mut red_re = Array2::<f64>::zeros((dm, dm));
    let mut red_im = Array2::<f64>::zeros((dm, dm));
    for a in 0..dl {
        for c in 0..dr {
            for s in 0..dm {
                for sp in 0..dm {
                    let z = y[[idx(a, s, c), idx(a, sp, c)]];
                    red_re[[s, sp]] += z.re;
                    red_im[[s, sp]] += z.im;
                }
            }
        }
    }
    let norm = 1.0 / (dl * dr) as f64;
    red_re *= norm;
    red_im *= norm;
    let k = w.ncols();
    let mut acc_re = Array2::<f64>::zeros((k, k));
    let mut acc_im = Array2::<f64>::zeros((k, k));
    let mut rows = Array2::<f64>::zeros((dm, k));
    for a in 0..dl {
        for c in 0..dr {
            for s in 0..dm {
                rows.row_mut(s).assign(&w.row(idx(a, s, c)));
            }
            acc_re = acc_re + rows.t().dot(&red_re.dot(&rows));
            acc_im = acc_im + rows.t().dot(&red_im.dot(&rows));
        }
    }
    let diff = Zip::from(&acc_re).and(&acc_im).and(y_window).map_collect(|&re, &im, &yw| C64::new(re, im) - yw);
    linalg::operator_norm(&diff)
}

/// Per-grid-time `‖P (X_ℓ(t) − τ_t(X)) P‖` where `X_ℓ(t)` is the conditional expectation of
/// `τ_t(X)` onto the sites `support ± ell` (clipped to the chain).
pub fn quasi_locality_error(
    es: &ManyBodyEigenSystem,
    x: &Array2<C64>,
    support: std::ops::Range<usize>,
    ell: usize,
    time_grid: &[f64],
    window: &EnergyWindow,
) -> Result<Vec<f64>> {
    let out = quasi_locality_profile(es, x, support, &[ell], time_grid, window)?;
    Ok(out.into_iter().map(|row| row[0]).collect())
}

/// Errors for several `ell` at once; result is indexed `[time][ell]`.
pub fn quasi_locality_profile(
    es: &ManyBodyEigenSystem,
    x: &Array2<C64>,
    support: std::ops::Range<usize>,
    ells: &[usize],
    time_grid: &[f64],
    window: &EnergyWindow,
) -> Result<Vec<Vec<f64>>> {
    let n = es.sites;
    if support.start >= support.end || support.end > n {
        return Err(Error::Size(format!("support {support:?} outside {n} sites")));
    }
    let w = es.window_vectors(window);
    let frame = EigenFrame::new(es, Some(window));
    let xe_full = es.to_eigenbasis(x);
    let xe_win = xe_full.select(Axis(0), &frame.positions).select(Axis(1), &frame.positions);
    let mut out = Vec::with_capacity(time_grid.len());
    for &t in time_grid {
        let y = es.from_eigenbasis(&evolve_in_eigenbasis(&xe_full, &es.energies, t));
        let yw = evolve_in_eigenbasis(&xe_win, &frame.energies, t);
        let mut row = Vec::with_capacity(ells.len());
        for &ell in ells {
            let keep = support.start.saturating_sub(ell)..(support.end + ell).min(n);
            if w.ncols() == 0 || keep == (0..n) {
                row.push(0.0);
                continue;
            }
            row.push(windowed_approximation_error(&y, n, keep, &w, &yw)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Sites `[start, end)` as a range helper for single-site supports.
pub fn single_site(q: usize) -> std::ops::Range<usize> {
    q..q + 1
}
