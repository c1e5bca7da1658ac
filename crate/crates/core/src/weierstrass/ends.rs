use alloc::vec::Vec;

use super::WeierstrassData;
use crate::algebra::{degree_of, form_order_at, series_residue, PointLocus};
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct EndData {
    pub point: PointLocus,
    /// Pole orders of `phi1, phi2, phi3` (0 where finite).
    pub ord_phi: [u32; 3],
    /// Winding number `max(ord_phi) - 1`.
    pub mu: i32,
    pub residues: [C64; 3],
}

/// Pole orders, winding numbers and residues at the declared ends.
pub fn end_analysis(data: &WeierstrassData) -> Result<Vec<EndData>> {
    let d = data.derived();
    let forms = [&d.phi1, &d.phi2, data.phi3()];
    let mut out = Vec::with_capacity(data.ends().len());
    for (index, p) in data.ends().iter().enumerate() {
        let mut ord_phi = [0u32; 3];
        let mut residues = [C64::new(0.0, 0.0); 3];
        for (j, form) in forms.iter().enumerate() {
            let k = form_order_at(form, p)?;
            ord_phi[j] = if k < 0 { (-k) as u32 } else { 0 };
            residues[j] = series_residue(form, p)?;
        }
        let max = *ord_phi.iter().max().unwrap_or(&0);
        if max == 0 {
            return Err(Error::NotAnEnd { index });
        }
        out.push(EndData { point: *p, ord_phi, mu: max as i32 - 1, residues });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityFlags {
    pub deg_even: bool,
    pub deg_at_least_4: bool,
    /// With all ends embedded (`mu = 1`), `chi` of the compactified double
    /// cover is divisible by 4, i.e. the quotient has even genus. True
    /// vacuously when some end is not embedded.
    pub embedded_ends_even_genus: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologyReport {
    pub chi_bar: i32,
    pub chi_bar_quotient: Option<i32>,
    pub n_ends: usize,
    pub deg_g: usize,
    pub mus: Vec<i32>,
    /// `2 deg g - (-chi + sum (mu_i + 1))`
    pub jm_residual: i64,
    /// `deg g - (-chi' + sum over half the ends of (mu_i + 1))`
    pub quotient_residual: Option<i64>,
    pub parity: ParityFlags,
}

impl TopologyReport {
    /// Residuals vanish and, for quotients, the parity statements hold.
    pub fn passes(&self) -> bool {
        let quotient_ok = match self.quotient_residual {
            Some(r) => r == 0 && self.parity.deg_even && self.parity.deg_at_least_4,
            None => true,
        };
        self.jm_residual == 0 && quotient_ok && self.parity.embedded_ends_even_genus
    }
}

/// Jorge-Meeks residual on the double cover and, when `chi_quotient` is
/// given, on the nonorientable quotient.
pub fn topology_check(data: &WeierstrassData, ends: &[EndData], chi_bar: i32, chi_quotient: Option<i32>) -> Result<TopologyReport> {
    let deg_g = degree_of(data.g())?;
    let mus: Vec<i32> = ends.iter().map(|e| e.mu).collect();
    let total: i64 = mus.iter().map(|m| *m as i64 + 1).sum();
    let jm_residual = 2 * deg_g as i64 - (-(chi_bar as i64) + total);
    let quotient_residual = chi_quotient.map(|chi_q| {
        // ends come in pairs exchanged by the involution, with equal mu
        let half = if total % 2 == 0 { total / 2 } else { i64::MIN / 4 };
        deg_g as i64 - (-(chi_q as i64) + half)
    });
    let embedded = !mus.is_empty() && mus.iter().all(|m| *m == 1);
    let parity = ParityFlags {
        deg_even: deg_g % 2 == 0,
        deg_at_least_4: deg_g >= 4,
        embedded_ends_even_genus: chi_quotient.is_none() || !embedded || chi_bar.rem_euclid(4) == 0,
    };
    Ok(TopologyReport { chi_bar, chi_bar_quotient: chi_quotient, n_ends: ends.len(), deg_g, mus, jm_residual, quotient_residual, parity })
}
