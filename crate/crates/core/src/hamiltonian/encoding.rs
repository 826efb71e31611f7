use std::collections::VecDeque;

use super::boson::{encode_bosons, BosonEncoding};
use super::fermion::{map_fermions, FermionMapping, LinearEncoding};
use super::mixed::MixedOperator;
use super::pauli_fierz::{
    build_pauli_fierz, fermion_number_operator, photon_number_operator, reference_occupation, spin_orbital,
};
use super::taper::{diagonal_value, flip_reference_signs, Z2Taper};
use crate::chem::{CavityParams, IntegralSet};
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Dipole elements below this are treated as zero when coloring orbitals.
pub const DIPOLE_ZERO_TOL: f64 = 1e-10;

/// How an operator travels from second quantization to qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EncodingPlan {
    pub fermion_mapping: FermionMapping,
    pub boson_encoding: BosonEncoding,
    /// Taper the electron-photon parity `P = Pe·Pph`.
    pub taper_parity: bool,
    /// Conjugate by X on the reference bits so the circuit starts in `|0…0⟩`.
    pub sign_flip_reference: bool,
}

impl EncodingPlan {
    pub fn jw() -> Self {
        Self {
            fermion_mapping: FermionMapping::Jw,
            boson_encoding: BosonEncoding::SingleQubit,
            taper_parity: false,
            sign_flip_reference: false,
        }
    }

    pub fn bk() -> Self {
        Self { fermion_mapping: FermionMapping::Bk, ..Self::jw() }
    }

    /// Bravyi-Kitaev with its two-qubit reduction plus parity tapering.
    pub fn bk_tapered() -> Self {
        Self { taper_parity: true, ..Self::bk() }
    }

    pub fn with_sign_flip(mut self, on: bool) -> Self {
        self.sign_flip_reference = on;
        self
    }

    pub fn with_bosons(mut self, enc: BosonEncoding) -> Self {
        self.boson_encoding = enc;
        self
    }

    pub fn label(&self) -> String {
        let mut s = self.fermion_mapping.to_string();
        if self.taper_parity {
            s.push_str("+taper");
        }
        if self.boson_encoding == BosonEncoding::Unary {
            s.push_str("+unary");
        }
        if self.sign_flip_reference {
            s.push_str("+flip");
        }
        s
    }
}

impl Default for EncodingPlan {
    fn default() -> Self {
        Self::bk_tapered().with_sign_flip(true)
    }
}

/// A diagonal observable that is conserved by the Hamiltonian together with
/// its value on the reference; used to pick the physical sector.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorConstraint {
    pub name: String,
    pub operator: PauliSum,
    pub value: f64,
}

/// Spin-orbital mask of the odd orbitals under electron parity.
///
/// Orbitals are two-colored along nonzero dipole couplings (any Cartesian
/// component); odd orbitals flip `Pe`. A nonzero diagonal element or an odd
/// cycle means the dipole does not anticommute with any orbital parity.
pub fn electron_parity_modes(ints: &IntegralSet) -> Result<u64> {
    let n = ints.n_spatial;
    let coupled = |p: usize, q: usize| ints.dip.iter().any(|d| d[(p, q)].abs() > DIPOLE_ZERO_TOL);
    if let Some(p) = (0..n).find(|&p| coupled(p, p)) {
        return Err(Error::SymmetryViolated(format!(
            "orbital {p} has a nonzero dipole expectation; electron-photon parity is not conserved"
        )));
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(p) = queue.pop_front() {
            let cp = color[p].expect("colored on push");
            for q in (0..n).filter(|&q| q != p && coupled(p, q)) {
                match color[q] {
                    None => {
                        color[q] = Some(!cp);
                        queue.push_back(q);
                    }
                    Some(cq) if cq == cp => {
                        return Err(Error::SymmetryViolated(format!(
                            "dipole couplings form an odd cycle through orbitals {p} and {q}"
                        )))
                    }
                    _ => {}
                }
            }
        }
    }
    Ok((0..n)
        .filter(|&p| color[p] == Some(true))
        .fold(0, |m, p| m | 1 << spin_orbital(p, false, n) | 1 << spin_orbital(p, true, n)))
}

/// Everything needed to measure and prepare states of one encoded problem.
#[derive(Debug, Clone)]
pub struct EncodedProblem {
    pub plan: EncodingPlan,
    pub n_qubits: usize,
    /// Qubit Hamiltonian with all scalar constants in the identity term.
    pub hamiltonian: PauliSum,
    /// Scalar part (nuclear repulsion plus self-energy constant).
    pub constant: f64,
    /// Encoded `b†b`.
    pub photon_number: PauliSum,
    /// Reference bits in the final frame before any sign flip.
    pub reference_bits: u64,
    pub sectors: Vec<SectorConstraint>,
    pub n_fermion_qubits: usize,
    pub n_photon_qubits: usize,
    pub photon_cutoff: usize,
    encoding: LinearEncoding,
    taper: Option<Z2Taper>,
}

impl EncodedProblem {
    /// Bits to prepare at the start of the circuit.
    pub fn initial_bits(&self) -> u64 {
        if self.plan.sign_flip_reference {
            0
        } else {
            self.reference_bits
        }
    }

    pub fn tapering(&self) -> Option<&Z2Taper> {
        self.taper.as_ref()
    }

    /// Register size before tapering.
    pub fn n_qubits_untapered(&self) -> usize {
        self.n_fermion_qubits + self.n_photon_qubits
    }

    fn lift(&self, op: &MixedOperator) -> Result<PauliSum> {
        let mapped = map_fermions(op, &self.encoding)?;
        encode_bosons(&mapped, self.plan.boson_encoding, self.photon_cutoff)
    }

    fn finish(&self, p: PauliSum) -> Result<PauliSum> {
        let p = match &self.taper {
            Some(t) => t.apply(&p)?,
            None => p,
        };
        Ok(if self.plan.sign_flip_reference { flip_reference_signs(&p, self.reference_bits) } else { p })
    }

    /// Send any symmetric operator through the same pipeline as the
    /// Hamiltonian.
    pub fn encode_operator(&self, op: &MixedOperator) -> Result<PauliSum> {
        let p = self.lift(op)?;
        self.finish(p)
    }

    /// Like [`encode_operator`](Self::encode_operator) but returns `None`
    /// when the operator breaks a tapered symmetry.
    pub fn encode_if_symmetric(&self, op: &MixedOperator) -> Result<Option<PauliSum>> {
        let p = self.lift(op)?;
        if let Some(t) = &self.taper {
            if !t.commutes(&p) {
                return Ok(None);
            }
        }
        self.finish(p).map(Some)
    }

    /// `I − 2 b†b`, whose reference value is 1; for the tapered two-qubit
    /// problem this is `ZZ`.
    pub fn photon_surrogate(&self) -> PauliSum {
        PauliSum::identity(self.n_qubits, 1.0)
            .sub(&self.photon_number.scale_real(2.0))
            .expect("same register")
    }

    /// Whether basis state `bits` satisfies every sector constraint.
    pub fn in_sector(&self, bits: u64) -> bool {
        self.sectors
            .iter()
            .all(|s| (diagonal_value(&s.operator, bits).re - s.value).abs() < 1e-9)
    }
}

/// Build the Pauli-Fierz Hamiltonian and encode it per `plan`.
pub fn encode_problem(ints: &IntegralSet, cav: &CavityParams, plan: EncodingPlan) -> Result<EncodedProblem> {
    let op = build_pauli_fierz(ints, cav)?;
    encode_with(&op, ints, cav, plan)
}

/// Encode an already built Hamiltonian.
pub fn encode_with(
    op: &MixedOperator,
    ints: &IntegralSet,
    cav: &CavityParams,
    plan: EncodingPlan,
) -> Result<EncodedProblem> {
    let n_modes = 2 * ints.n_spatial;
    let nb = plan.boson_encoding.n_qubits(cav.n_photon_max)?;
    let nf = n_modes;
    let n_full = nf + nb;
    let enc = LinearEncoding::for_mapping(plan.fermion_mapping, n_modes);
    let occ = reference_occupation(ints);
    let ref_full = enc.encode_occupation(occ) | plan.boson_encoding.vacuum_bits() << nf;

    let alpha_modes = (0..ints.n_spatial).fold(0u64, |m, p| m | 1 << p);
    let all_modes = (1u64 << n_modes) - 1;

    let mut proto = EncodedProblem {
        plan,
        n_qubits: n_full,
        hamiltonian: PauliSum::zero(n_full),
        constant: op.constant(),
        photon_number: PauliSum::zero(n_full),
        reference_bits: ref_full,
        sectors: Vec::new(),
        n_fermion_qubits: nf,
        n_photon_qubits: nb,
        photon_cutoff: cav.n_photon_max,
        encoding: enc.clone(),
        taper: None,
    };
    let h_full = proto.lift(op)?;

    let parity = match electron_parity_modes(ints) {
        Ok(odd) => {
            let mask = enc.parity_mask(odd) | plan.boson_encoding.parity_mask(cav.n_photon_max)? << nf;
            let p = PauliString::from_masks(n_full, 0, mask)?;
            if h_full.commutes_termwise(&p) {
                Some(mask)
            } else if plan.taper_parity {
                return Err(Error::SymmetryViolated("Hamiltonian does not commute with P = Pe·Pph".into()));
            } else {
                None
            }
        }
        Err(e) if plan.taper_parity => return Err(e),
        Err(_) => None,
    };

    let mut generators = Vec::new();
    if plan.fermion_mapping == FermionMapping::Bk {
        generators.push(enc.parity_mask(alpha_modes));
        generators.push(enc.parity_mask(all_modes));
    }
    if plan.taper_parity {
        generators.push(parity.expect("checked above"));
    }

    // conserved diagonal observables, in the untapered frame
    let z = |mask: u64| {
        PauliSum::from_string(
            num_complex::Complex64::new(1.0, 0.0),
            &PauliString::from_masks(n_full, 0, mask).expect("mask fits"),
        )
    };
    let mut sector_ops = vec![
        ("N_alpha".to_string(), proto.lift(&fermion_number_operator(n_modes, alpha_modes))?),
        ("N_beta".to_string(), proto.lift(&fermion_number_operator(n_modes, all_modes & !alpha_modes))?),
    ];
    if let (Some(mask), false) = (parity, plan.taper_parity) {
        sector_ops.push(("parity".to_string(), z(mask)));
    }
    if let Some(occ_op) = plan.boson_encoding.occupancy(cav.n_photon_max)? {
        sector_ops.push(("photon_one_hot".to_string(), occ_op.map_terms(n_full, |c, p| vec![(c, p.embed(n_full, nf))])));
    }

    if !generators.is_empty() {
        let t = Z2Taper::new(n_full, &generators, ref_full)?;
        proto.reference_bits = t.reduce_bits(ref_full);
        proto.n_qubits = t.n_qubits_out();
        proto.taper = Some(t);
    }
    proto.hamiltonian = proto.finish(h_full)?;
    proto.photon_number = proto.encode_operator(&photon_number_operator(n_modes))?;
    let start = proto.initial_bits();
    for (name, op) in sector_ops {
        let operator = proto.finish(op)?;
        let value = diagonal_value(&operator, start).re;
        proto.sectors.push(SectorConstraint { name, operator, value });
    }
    Ok(proto)
}
