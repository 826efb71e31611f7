use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::driver::VqeConfig;
use super::optim::NelderMead;
use crate::chem::{CavityParams, Geometry};
use crate::error::{Error, Result};
use crate::hamiltonian::{BosonEncoding, EncodingPlan, FermionMapping};
use crate::mitigation::{Stage, DEFAULT_ZNE_FACTORS};
use crate::sim::{symmetric_flip, ConfusionMatrix, NoiseModel};

/// Run configuration as read from a TOML file. Every section and key is
/// optional.
///
/// ```toml
/// [molecule]
/// R_angstrom = 0.735
/// [cavity]
/// omega_ev = 2.0
/// lambda_x = 0.1
/// [vqe]
/// mitigation = ["ro", "zne", "rs", "rzne"]
/// ```
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub molecule: MoleculeSection,
    pub cavity: CavitySection,
    pub encoding: EncodingSection,
    pub noise: NoiseSection,
    pub vqe: VqeSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MoleculeSection {
    #[serde(rename = "R_angstrom")]
    pub r_angstrom: f64,
}

impl Default for MoleculeSection {
    fn default() -> Self {
        Self { r_angstrom: 0.735 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CavitySection {
    pub omega_ev: f64,
    pub lambda_x: f64,
    pub lambda_y: f64,
    pub lambda_z: f64,
    pub n_photon_max: usize,
}

impl Default for CavitySection {
    fn default() -> Self {
        Self { omega_ev: 2.0, lambda_x: 0.1, lambda_y: 0.0, lambda_z: 0.0, n_photon_max: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingSection {
    pub mapping: FermionMapping,
    pub taper: bool,
    pub sign_flip: bool,
    pub boson: BosonEncoding,
}

impl Default for EncodingSection {
    fn default() -> Self {
        let p = EncodingPlan::default();
        Self { mapping: p.fermion_mapping, taper: p.taper_parity, sign_flip: p.sign_flip_reference, boson: p.boson_encoding }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    /// `false` switches every channel off.
    pub enabled: bool,
    pub p2: f64,
    pub p1: f64,
    pub gamma_ad: f64,
    /// Symmetric readout flip probability, used when `readout` is absent.
    pub readout_flip: f64,
    /// Explicit per-qubit confusion matrices `m[true][reported]`.
    pub readout: Option<Vec<ConfusionMatrix>>,
}

impl Default for NoiseSection {
    fn default() -> Self {
        let n = NoiseModel::default();
        Self { enabled: true, p2: n.p2, p1: n.p1, gamma_ad: n.gamma_ad, readout_flip: 0.01, readout: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VqeSection {
    pub shots: u64,
    pub exact: bool,
    pub repeats: usize,
    pub ref_repeats: usize,
    pub zne_factors: Vec<i64>,
    pub mitigation: Vec<Stage>,
    pub ftol: f64,
    pub xtol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
}

impl Default for VqeSection {
    fn default() -> Self {
        let c = VqeConfig::default();
        Self {
            shots: c.shots,
            exact: c.exact_expectations,
            repeats: c.n_repeats,
            ref_repeats: c.ref_repeats,
            zne_factors: DEFAULT_ZNE_FACTORS.to_vec(),
            mitigation: c.mitigation,
            ftol: c.optimizer.ftol,
            xtol: c.optimizer.xtol,
            max_iter: c.optimizer.max_iter,
            initial_step: c.optimizer.initial_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub seed: u64,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { csv: None, json: None, seed: VqeConfig::default().seed }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::InvalidInput(format!("config: {e}")))?;
        cfg.noise_model().validate()?;
        cfg.vqe_config().validate()?;
        cfg.cavity()?;
        Geometry::h2(cfg.molecule.r_angstrom)?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn cavity(&self) -> Result<CavityParams> {
        let c = &self.cavity;
        CavityParams::from_ev(c.omega_ev, [c.lambda_x, c.lambda_y, c.lambda_z], c.n_photon_max)
    }

    pub fn plan(&self) -> EncodingPlan {
        let e = &self.encoding;
        EncodingPlan { fermion_mapping: e.mapping, boson_encoding: e.boson, taper_parity: e.taper, sign_flip_reference: e.sign_flip }
    }

    pub fn noise_model(&self) -> NoiseModel {
        let n = &self.noise;
        if !n.enabled {
            return NoiseModel::ideal();
        }
        let readout = n.readout.clone().unwrap_or_else(|| vec![symmetric_flip(n.readout_flip)]);
        NoiseModel { p2: n.p2, p1: n.p1, gamma_ad: n.gamma_ad, readout }
    }

    pub fn vqe_config(&self) -> VqeConfig {
        let v = &self.vqe;
        VqeConfig {
            shots: v.shots,
            exact_expectations: v.exact,
            n_repeats: v.repeats,
            ref_repeats: v.ref_repeats,
            zne_factors: v.zne_factors.clone(),
            mitigation: v.mitigation.clone(),
            optimizer: NelderMead { ftol: v.ftol, xtol: v.xtol, max_iter: v.max_iter, initial_step: v.initial_step, ..NelderMead::default() },
            seed: self.output.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_protocol_defaults() {
        let c = RunConfig::from_toml_str("").unwrap();
        let v = c.vqe_config();
        assert_eq!(v.shots, 20_000);
        assert_eq!(v.n_repeats, 10);
        assert_eq!(v.ref_repeats, 50);
        assert_eq!(v.zne_factors, vec![1, 3, 5, 51, 101, 201]);
        assert_eq!(c.plan(), EncodingPlan::default());
        assert_eq!(c.noise_model(), NoiseModel::default());
    }

    #[test]
    fn guide_sample_matches_defaults() {
        let guide = include_str!("../../../../book/src/cli.md");
        let start = guide.find("```toml\n").unwrap() + 8;
        let len = guide[start..].find("```").unwrap();
        assert_eq!(RunConfig::from_toml_str(&guide[start..start + len]).unwrap(), RunConfig::default());
    }

    #[test]
    fn sections_parse() {
        let c = RunConfig::from_toml_str(
            r#"
            [molecule]
            R_angstrom = 1.2
            [cavity]
            omega_ev = 20.0
            lambda_x = 0.05
            [encoding]
            mapping = "jw"
            taper = false
            sign_flip = false
            boson = "unary"
            [noise]
            gamma_ad = 0.0
            readout = [[[0.98, 0.02], [0.01, 0.99]]]
            [vqe]
            shots = 5000
            mitigation = ["ro", "zne"]
            [output]
            csv = "out.csv"
            seed = 11
            "#,
        )
        .unwrap();
        assert_eq!(c.molecule.r_angstrom, 1.2);
        assert_eq!(c.plan(), EncodingPlan::jw().with_bosons(BosonEncoding::Unary));
        assert_eq!(c.noise_model().readout, vec![[[0.98, 0.02], [0.01, 0.99]]]);
        assert_eq!(c.vqe_config().mitigation, vec![Stage::Ro, Stage::Zne]);
        assert_eq!(c.vqe_config().seed, 11);
        assert_eq!(RunConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml_str("[noise]\np2 = 2.0").is_err());
        assert!(RunConfig::from_toml_str("[vqe]\nzne_factors = [1, 2, 3]").is_err());
        assert!(RunConfig::from_toml_str("[cavity]\nomega_ev = -1.0").is_err());
        assert!(RunConfig::from_toml_str("[bogus]\nx = 1").is_err());
        assert!(RunConfig::from_toml_str("[vqe]\nmitigation = [\"magic\"]").is_err());
    }
}
