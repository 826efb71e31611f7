use std::fmt;

use crate::error::{Error, Result};

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn label(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// An n-qubit Pauli string `i^phase · P_0 ⊗ … ⊗ P_{n-1}` in symplectic form.
///
/// Bit `q` of `x` / `z` describes qubit `q`; a qubit carrying both bits is a
/// `Y`. The Hermitian letter string is `i^{|x∧z|} X^x Z^z`, so the letters
/// alone always denote a Hermitian operator and `phase` is a separate unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

pub const MAX_QUBITS: usize = 64;

#[inline]
fn mask_for(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS);
        Self { n_qubits, x: 0, z: 0, phase: 0 }
    }

    /// Build from masks; bits beyond `n_qubits` are rejected.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS || (x | z) & !mask_for(n_qubits) != 0 {
            return Err(Error::InvalidInput(format!(
                "masks {x:#b}/{z:#b} do not fit in {n_qubits} qubits"
            )));
        }
        Ok(Self { n_qubits, x, z, phase: 0 })
    }

    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Self {
        assert!(qubit < n_qubits);
        let (xb, zb) = p.bits();
        Self {
            n_qubits,
            x: (xb as u64) << qubit,
            z: (zb as u64) << qubit,
            phase: 0,
        }
    }

    /// Parse a letter label, qubit 0 leftmost.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.chars().count();
        if n > MAX_QUBITS {
            return Err(Error::InvalidLabel(label.to_string()));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in label.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                _ => return Err(Error::InvalidLabel(label.to_string())),
            };
            x |= xb << q;
            z |= zb << q;
        }
        Ok(Self { n_qubits: n, x, z, phase: 0 })
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
    pub fn x_mask(&self) -> u64 {
        self.x
    }
    pub fn z_mask(&self) -> u64 {
        self.z
    }
    /// Power of `i` multiplying the Hermitian letter string.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits).map(|q| self.get(q).label()).collect()
    }

    /// Number of `Y` letters.
    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// True when the letter strings commute (even symplectic product).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Symplectic product with exact unit phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch(self.n_qubits, other.n_qubits));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliString) -> PauliString {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        // i^{|x1z1|} X^x1 Z^z1 · i^{|x2z2|} X^x2 Z^z2
        //   = i^{|x1z1|+|x2z2|} (-1)^{|z1 x2|} X^x Z^z
        //   = i^{|x1z1|+|x2z2|+2|z1x2|-|xz|} · (Hermitian letters)
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64
            + self.phase as i64
            + other.phase as i64;
        PauliString {
            n_qubits: self.n_qubits,
            x,
            z,
            phase: e.rem_euclid(4) as u8,
        }
    }

    /// Action on a computational basis index (bit `q` = qubit `q`):
    /// returns `(phase power of i, new index)` with `P|b> = i^k |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (u8, u64) {
        let k = self.phase as u32 + (self.x & self.z).count_ones() + 2 * (self.z & b).count_ones();
        ((k % 4) as u8, b ^ self.x)
    }

    /// Restrict to a subset of qubits (kept in ascending order).
    pub fn remove_qubits(&self, removed: u64) -> PauliString {
        let mut x = 0u64;
        let mut z = 0u64;
        let mut k = 0;
        for q in 0..self.n_qubits {
            if removed >> q & 1 == 1 {
                continue;
            }
            x |= (self.x >> q & 1) << k;
            z |= (self.z >> q & 1) << k;
            k += 1;
        }
        PauliString { n_qubits: k, x, z, phase: self.phase }
    }

    /// Embed into a larger register starting at `offset`.
    pub fn embed(&self, n_total: usize, offset: usize) -> PauliString {
        assert!(offset + self.n_qubits <= n_total);
        PauliString {
            n_qubits: n_total,
            x: self.x << offset,
            z: self.z << offset,
            phase: self.phase,
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{p}{}", self.label())
    }
}

/// `i^k` as a complex number.
pub fn i_pow(k: u8) -> num_complex::Complex64 {
    use num_complex::Complex64 as C;
    match k & 3 {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    }
}
