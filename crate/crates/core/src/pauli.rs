//! n-qubit Pauli operators in the symplectic (X-bits, Z-bits, sign) form.

use crate::bits::BitVec;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("product is not Hermitian (phase would be ±i)")]
    NonHermitian,
}

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Single-qubit commutation test.
    #[inline]
    pub fn commutes_with(self, other: Pauli) -> bool {
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        !((x1 & z2) ^ (z1 & x2))
    }

    /// Product label ignoring phase.
    #[inline]
    pub fn times(self, other: Pauli) -> Pauli {
        let (x1, z1) = self.bits();
        let (x2, z2) = other.bits();
        Pauli::from_bits(x1 ^ x2, z1 ^ z2)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Hermitian n-qubit Pauli: `(-1)^negative · ⊗_q σ(x_q, z_q)` with
/// `σ(1,1) = Y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: BitVec,
    z: BitVec,
    negative: bool,
}

/// Exponent of `i` picked up by the single-qubit product `σ(x1,z1)·σ(x2,z2)`.
#[inline]
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2i, z2i) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2i - x2i,
        (true, false) => z2i * (2 * x2i - 1),
        (false, true) => x2i * (1 - 2 * z2i),
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    pub fn from_bits(x: BitVec, z: BitVec, negative: bool) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliOperator { x, z, negative })
    }

    /// Operator acting as `p` on each listed qubit (sign +1).
    pub fn uniform(n: usize, p: Pauli, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut op = PauliOperator::identity(n);
        for q in qubits {
            op.set(q, p);
        }
        op
    }

    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        PauliOperator::uniform(n, p, [q])
    }

    /// Parses strings like `"XIZY"` or `"-XX"`.
    pub fn parse(s: &str) -> Option<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let mut op = PauliOperator::identity(body.len());
        for (q, ch) in body.chars().enumerate() {
            let p = match ch {
                'I' | '_' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return None,
            };
            op.set(q, p);
        }
        op.negative = negative;
        Some(op)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    #[inline]
    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x.get(q), self.z.get(q))
    }

    #[inline]
    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x.set(q, x);
        self.z.set(q, z);
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_qubits()).filter(|&q| self.x.get(q) || self.z.get(q))
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Product `self · other = i^k · P` with `P` unsigned; returns `(P, k)`.
    pub fn multiply_with_phase(
        &self,
        other: &PauliOperator,
    ) -> Result<(PauliOperator, u8), PauliError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(PauliError::LengthMismatch(
                self.num_qubits(),
                other.num_qubits(),
            ));
        }
        let mut e: i32 = 2 * (self.negative as i32 + other.negative as i32);
        for q in self.support() {
            e += phase_exponent(self.x.get(q), self.z.get(q), other.x.get(q), other.z.get(q));
        }
        let product = PauliOperator {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            negative: false,
        };
        Ok((product, e.rem_euclid(4) as u8))
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        let (product, k) = self.multiply_with_phase(other)?;
        match k {
            0 => Ok(product),
            2 => Ok(product.with_sign(true)),
            _ => Err(PauliError::NonHermitian),
        }
    }

    /// Product that only tracks the Pauli label on each qubit; the sign of
    /// `self` is kept unchanged.
    pub fn mul_assign_up_to_phase(&mut self, other: &PauliOperator) {
        assert_eq!(self.num_qubits(), other.num_qubits(), "length mismatch");
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Symplectic commutation test.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        if self.num_qubits() != other.num_qubits() {
            return Err(PauliError::LengthMismatch(
                self.num_qubits(),
                other.num_qubits(),
            ));
        }
        Ok(!(self.x.dot(&other.z) ^ self.z.dot(&other.x)))
    }

    /// Symplectic vector `(x | z)` of length 2n, used for rank computations.
    pub fn symplectic(&self) -> BitVec {
        let n = self.num_qubits();
        let mut v = BitVec::zeros(2 * n);
        for q in self.x.iter_ones() {
            v.set(q, true);
        }
        for q in self.z.iter_ones() {
            v.set(n + q, true);
        }
        v
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({self})")
    }
}
