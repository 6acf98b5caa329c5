use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};

/// Von Neumann entropy of the first `ell` sites of an `n`-site state.
pub fn reduced_entropy(psi: &Array1<C64>, n: usize, ell: usize) -> Result<f64> {
    if psi.len() != 1usize << n {
        return Err(Error::Size(format!("state of length {} is not on {n} sites", psi.len())));
    }
    if ell > n {
        return Err(Error::OutOfRange { index: ell, len: n });
    }
    if ell == 0 || ell == n {
        return Ok(0.0);
    }
    let (da, db) = (1usize << ell, 1usize << (n - ell));
    let m = Array2::from_shape_vec((da, db), psi.to_vec()).map_err(|e| Error::Numerical(e.to_string()))?;
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    // the reduced density matrix on the smaller side has the same nonzero spectrum
    let rho = if da <= db { m.dot(&linalg::adjoint(&m)) } else { linalg::adjoint(&m).dot(&m) };
    let ev = linalg::eigvalsh_herm(&rho)?;
    Ok(linalg::spectral_entropy(ev.iter().map(|&x| x / norm)))
}

pub fn reduced_entropy_real(psi: &Array1<f64>, n: usize, ell: usize) -> Result<f64> {
    reduced_entropy(&psi.mapv(|x| C64::new(x, 0.0)), n, ell)
}

/// Entropies for every cut `0..=n`.
pub fn entropy_profile(psi: &Array1<C64>, n: usize) -> Result<Vec<f64>> {
    (0..=n).map(|ell| reduced_entropy(psi, n, ell)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_bell_states() {
        let mut psi = Array1::<C64>::zeros(4);
        psi[1] = C64::new(1.0, 0.0);
        assert!(reduced_entropy(&psi, 2, 1).unwrap().abs() < 1e-14);
        psi[2] = C64::new(1.0, 0.0);
        assert!((reduced_entropy(&psi, 2, 1).unwrap() - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_is_symmetric_under_cut_complement() {
        let psi: Array1<C64> = (0..32).map(|k| C64::new((k as f64 * 0.37).sin(), (k as f64).cos() * 0.1)).collect();
        let a = reduced_entropy(&psi, 5, 2).unwrap();
        let b = reduced_entropy(&psi, 5, 3).unwrap();
        assert!(a > 0.0);
        // not complements of each other, but each side of the same cut must agree
        let rev: Array1<C64> = (0..32).map(|k: usize| psi[(k.reverse_bits() >> (usize::BITS - 5)) as usize]).collect();
        assert!((reduced_entropy(&rev, 5, 3).unwrap() - a).abs() < 1e-10);
        assert!((reduced_entropy(&rev, 5, 2).unwrap() - b).abs() < 1e-10);
    }
}
