use serde::Serialize;

use crate::eigen::eigensolve;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_with, label_branches, MS_ZERO};
use crate::params::{EffectiveField, MagneticField, NVParams};
use crate::spin::{spin_operators, SpinMatrix};

/// Nuclear projections in basis order.
pub const M_I: [i8; 3] = [1, 0, -1];

/// Electron spin coupled to the 14N nucleus (9x9, Hz).
#[derive(Debug, Clone, PartialEq)]
pub struct HyperfineSystem {
    pub hamiltonian: SpinMatrix,
    pub a_hf: f64,
}

/// `H_e (x) 1 + A S_z (x) I_z`. Only the axial hyperfine term is modelled;
/// `full_tensor = true` is rejected.
pub fn hyperfine_hamiltonian(
    p: &NVParams,
    b: &MagneticField,
    pi: &EffectiveField,
    full_tensor: bool,
) -> Result<HyperfineSystem> {
    if full_tensor {
        return Err(Error::invalid("full_tensor", "only the axial hyperfine term is implemented"));
    }
    let s = spin_operators();
    let he = build_with(&s, p, b, pi);
    let hamiltonian = &he.kron(&SpinMatrix::identity(3)) + &s.sz.kron(&s.sz).scale(p.a_hf);
    Ok(HyperfineSystem {
        hamiltonian,
        a_hf: p.a_hf,
    })
}

/// Electron character of the excited state of a line: the doublet member
/// with more `|+1>` weight is `Plus`. At equal weight the upper one is `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Minus,
    Plus,
}

/// One `m_s = 0 -> +-1` transition at fixed `m_I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperfineLine {
    /// Hz.
    pub frequency: f64,
    pub m_i: i8,
    pub branch: Branch,
}

impl HyperfineSystem {
    /// Electron block at fixed nuclear index (basis order `+1, 0, -1`).
    pub fn block(&self, i_nuc: usize) -> SpinMatrix {
        let mut m = SpinMatrix::zeros(3);
        for a in 0..3 {
            for b in 0..3 {
                m[(a, b)] = self.hamiltonian[(3 * a + i_nuc, 3 * b + i_nuc)];
            }
        }
        m
    }

    /// Largest entry coupling different nuclear projections.
    pub fn off_block_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..9 {
            for c in 0..9 {
                if r % 3 != c % 3 {
                    worst = worst.max(self.hamiltonian[(r, c)].norm());
                }
            }
        }
        worst
    }
}

/// The six electron-spin transitions, sorted by frequency.
pub fn hyperfine_lines(sys: &HyperfineSystem) -> Result<Vec<HyperfineLine>> {
    let scale = sys.hamiltonian.norm();
    if sys.off_block_norm() > 1e-12 * scale {
        return Err(Error::invalid("hyperfine", "m_I is not conserved; lines need axial-only mode"));
    }
    let mut lines = Vec::with_capacity(6);
    for (i_nuc, &m_i) in M_I.iter().enumerate() {
        let es = eigensolve(&sys.block(i_nuc))?;
        let (zero, lower, upper) = label_branches(&es, MS_ZERO);
        let plus_weight = |k: usize| es.vectors[(0, k)].norm_sqr() - es.vectors[(2, k)].norm_sqr();
        let (minus, plus) = if plus_weight(lower) > plus_weight(upper) + 1e-12 {
            (upper, lower)
        } else {
            (lower, upper)
        };
        for (k, branch) in [(minus, Branch::Minus), (plus, Branch::Plus)] {
            lines.push(HyperfineLine {
                frequency: es.values[k] - es.values[zero],
                m_i,
                branch,
            });
        }
    }
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency).then(b.m_i.cmp(&a.m_i)));
    Ok(lines)
}

pub fn line(lines: &[HyperfineLine], m_i: i8, branch: Branch) -> f64 {
    lines
        .iter()
        .find(|l| l.m_i == m_i && l.branch == branch)
        .map(|l| l.frequency)
        .unwrap_or(f64::NAN)
}

/// Signed separation of the two lines that share the `+A` hyperfine shift,
/// `|m_s=+1, m_I=+1>` and `|m_s=-1, m_I=-1>`. Odd in `B_z`.
pub fn outer_pair_splitting(lines: &[HyperfineLine]) -> f64 {
    line(lines, 1, Branch::Plus) - line(lines, -1, Branch::Minus)
}

/// Separation of the two central (`m_I = 0`) lines.
pub fn central_splitting(lines: &[HyperfineLine]) -> f64 {
    (line(lines, 0, Branch::Plus) - line(lines, 0, Branch::Minus)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{effective_field, ElectricField, StrainField};

    fn sys(b: MagneticField, sigma_hz: f64) -> HyperfineSystem {
        let p = NVParams::default();
        let pi = effective_field(&ElectricField::zero(), &StrainField::from_frequency(0.0, sigma_hz, 0.4, &p));
        hyperfine_hamiltonian(&p, &b, &pi, false).unwrap()
    }

    #[test]
    fn zero_field_triplet() {
        let s = sys(MagneticField::zero(), 0.0);
        assert!(s.hamiltonian.is_hermitian(1e-12));
        assert!(s.hamiltonian.trace().norm() < 1e-6);
        let lines = hyperfine_lines(&s).unwrap();
        assert_eq!(lines.len(), 6);
        let d = 2.87e9;
        let want = [d - 2.2e6, d - 2.2e6, d, d, d + 2.2e6, d + 2.2e6];
        for (l, w) in lines.iter().zip(want) {
            assert!((l.frequency - w).abs() < 1e-3, "{} vs {w}", l.frequency);
        }
    }

    #[test]
    fn nuclear_projection_conserved() {
        let s = sys(MagneticField::new(1.3, 20.0, 0.6), 0.189e6);
        let ops = spin_operators();
        let iz = SpinMatrix::identity(3).kron(&ops.sz);
        let c = s.hamiltonian.commutator(&iz);
        assert!(c.norm() <= 1e-12 * s.hamiltonian.norm());
        assert!(hyperfine_hamiltonian(&NVParams::default(), &MagneticField::zero(), &EffectiveField::zero(), true).is_err());
    }

    #[test]
    fn strain_splits_only_central_pair() {
        let s = sys(MagneticField::zero(), 0.189e6);
        let lines = hyperfine_lines(&s).unwrap();
        assert!(outer_pair_splitting(&lines).abs() < 1e-3);
        let low = line(&lines, 1, Branch::Minus) - line(&lines, -1, Branch::Plus);
        assert!(low.abs() < 1e-3);
        assert!((central_splitting(&lines) - 2.0 * 0.189e6).abs() < 1e-3);
    }

    #[test]
    fn axial_field_splits_outer_partners() {
        // 9x9 oracle: the full matrix eigenvalues contain every line energy.
        let s = sys(MagneticField::new(2.0, 0.0, 0.0), 0.0);
        let lines = hyperfine_lines(&s).unwrap();
        let split = outer_pair_splitting(&lines);
        let p = NVParams::default();
        assert!((split - 2.0 * p.zeeman_hz(2.0)).abs() < 1e-3);
        assert!((split - 11.21e6).abs() < 0.01e6);
        let full = eigensolve(&s.hamiltonian).unwrap().values;
        let zero_level = full[1];
        let target = line(&lines, 1, Branch::Plus) + zero_level;
        assert!(full.iter().any(|v| (v - target).abs() < 1e-3));
    }
}
