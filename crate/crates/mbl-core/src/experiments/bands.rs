use crate::disorder::FieldRealization;
use crate::error::Result;
use crate::linalg::Selection;
use crate::xxz::{self, EnergyWindow, XxzParams};

/// Closed-form band next to the measured clean-chain spectrum below `2(1 − 1/Δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRow {
    pub particles: usize,
    pub band: EnergyWindow,
    /// Smallest and largest sector eigenvalue below the threshold, if any.
    pub measured: Option<(f64, f64)>,
}

impl BandRow {
    /// Largest distance of a measured edge outside the band.
    pub fn excess(&self) -> f64 {
        match self.measured {
            Some((lo, hi)) => (self.band.lower - lo).max(hi - self.band.upper).max(0.0),
            None => 0.0,
        }
    }
}

/// Sector spectrum at ω ≡ 0 below `2(1 − 1/Δ)`.
///
/// At the smallest admissible boundary field the walls bind extra droplet states below
/// the band (at 2/3 for N = 2, Δ = 2, independent of L); a boundary field of ½ removes
/// them for N ≤ 2.
pub fn clean_band_edges(particles: usize, half_length: usize, params: &XxzParams) -> Result<Option<(f64, f64)>> {
    let field = FieldRealization::from_values(vec![0.0; 2 * half_length + 1]);
    let h = xxz::build_h_sector(particles, half_length, params, &field)?;
    let top = 2.0 * params.threshold();
    let e = h.eigen(Selection::Interval(f64::NEG_INFINITY, top), false)?;
    let below: Vec<f64> = e.values.into_iter().filter(|&v| v < top).collect();
    Ok(match (below.first(), below.last()) {
        (Some(&lo), Some(&hi)) => Some((lo, hi)),
        _ => None,
    })
}

pub fn band_table(particles: &[usize], half_length: Option<usize>, params: &XxzParams) -> Result<Vec<BandRow>> {
    params.validate()?;
    particles
        .iter()
        .map(|&n| {
            let band = xxz::droplet_band(n, params.anisotropy)?;
            let measured = match half_length {
                Some(l) if n <= 2 * l + 1 => clean_band_edges(n, l, params)?,
                _ => None,
            };
            Ok(BandRow { particles: n, band, measured })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walls_bind_a_droplet_at_the_smallest_boundary_field() {
        let (lo, _) = clean_band_edges(2, 10, &XxzParams::with_droplet_boundary(2.0)).unwrap().unwrap();
        assert!((lo - 2.0 / 3.0).abs() < 1e-9);
        let (lo, hi) = clean_band_edges(2, 10, &XxzParams { anisotropy: 2.0, boundary: 0.5 }).unwrap().unwrap();
        assert!(lo > 0.75 && hi < 1.0);
    }

    #[test]
    fn table_skips_sectors_that_do_not_fit() {
        let rows = band_table(&[1, 9], Some(2), &XxzParams::with_droplet_boundary(3.0)).unwrap();
        assert!(rows[0].measured.is_some());
        assert!(rows[1].measured.is_none());
        assert_eq!(rows[1].excess(), 0.0);
    }
}
