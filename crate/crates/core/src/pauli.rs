//! Pauli strings, weighted terms and Hermitian sums.
//!
//! A string over `{I, X, Y, Z}` is stored as a pair of bit masks: bit `q` of
//! `x` is set for `X` or `Y` on qubit `q`, bit `q` of `z` for `Z` or `Y`.
//! With `Y = i·X·Z` the action on a basis state is
//! `P|k⟩ = i^{#Y} (-1)^{|k & z|} |k ^ x⟩`, which is what every kernel uses.
//!
//! Text form lists qubit 0 first: `"XZI"` is `X` on qubit 0, `Z` on qubit 1.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register a bit-mask string can address.
pub const MAX_QUBITS: usize = 64;

/// Coefficients smaller than this after merging are dropped.
pub const MERGE_TOLERANCE: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Power of `i` accumulated by a Pauli product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(p: u32) -> Self {
        match p % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u32 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            Phase::One => Complex64::new(1.0, 0.0),
            Phase::I => Complex64::new(0.0, 1.0),
            Phase::MinusOne => Complex64::new(-1.0, 0.0),
            Phase::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

/// Unweighted tensor product of single-qubit Paulis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
}

fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n: n_qubits as u8, x: 0, z: 0 }
    }

    /// Builds a string from raw masks; bits above `n_qubits` must be clear.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::QubitCap { requested: n_qubits, cap: MAX_QUBITS });
        }
        let outside = !width_mask(n_qubits);
        if (x | z) & outside != 0 {
            return Err(Error::DimensionMismatch {
                expected: n_qubits,
                found: 64 - (x | z).leading_zeros() as usize,
            });
        }
        Ok(Self { n: n_qubits as u8, x, z })
    }

    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self> {
        Self::from_pairs(n_qubits, &[(qubit, letter)])
    }

    /// String with the given letters on the given qubits and `I` elsewhere.
    pub fn from_pairs(n_qubits: usize, pairs: &[(usize, Letter)]) -> Result<Self> {
        let mut s = Self::identity(n_qubits);
        for &(q, l) in pairs {
            if q >= n_qubits {
                return Err(Error::IndexOutOfRange { index: q, len: n_qubits });
            }
            s = s.with_letter(q, l);
        }
        Ok(s)
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        let pairs: Vec<(usize, Letter)> = letters.iter().copied().enumerate().collect();
        Self::from_pairs(letters.len(), &pairs)
    }

    fn with_letter(mut self, q: usize, l: Letter) -> Self {
        let bit = 1u64 << q;
        self.x &= !bit;
        self.z &= !bit;
        match l {
            Letter::I => {}
            Letter::X => self.x |= bit,
            Letter::Z => self.z |= bit,
            Letter::Y => {
                self.x |= bit;
                self.z |= bit;
            }
        }
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, q: usize) -> Letter {
        match ((self.x >> q) & 1, (self.z >> q) & 1) {
            (0, 0) => Letter::I,
            (1, 0) => Letter::X,
            (0, 1) => Letter::Z,
            _ => Letter::Y,
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n_qubits()).map(move |q| self.letter(q))
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True when the string has only `I` and `Z` letters.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self · other` as a phase and a string.
    pub fn mul(&self, other: &Self) -> Result<(Phase, PauliString)> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits(),
                found: other.n_qubits(),
            });
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let out = PauliString { n: self.n, x, z };
        // i^{y1} X^x1 Z^z1 · i^{y2} X^x2 Z^z2 = i^{y1+y2} (-1)^{|z1&x2|} X^x Z^z
        let power = self.y_count() + other.y_count() + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - out.y_count();
        Ok((Phase::from_power(power), out))
    }

    /// Sign and target index for the action on basis state `k`.
    #[inline(always)]
    pub fn act_on_index(&self, k: usize) -> (bool, usize) {
        let negative = ((k as u64) & self.z).count_ones() & 1 == 1;
        (negative, k ^ self.x as usize)
    }

    /// Shifts every letter by `offset` sites; `None` when a non-identity letter
    /// would leave the register.
    pub fn translated(&self, offset: i64) -> Option<Self> {
        let support = self.x | self.z;
        if support == 0 {
            return Some(*self);
        }
        let lo = support.trailing_zeros() as i64;
        let hi = 63 - support.leading_zeros() as i64;
        if lo + offset < 0 || hi + offset >= self.n as i64 {
            return None;
        }
        let shift = |m: u64| {
            if offset >= 0 {
                m << offset
            } else {
                m >> (-offset)
            }
        };
        Some(Self { n: self.n, x: shift(self.x), z: shift(self.z) })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| {
                Letter::from_char(c).ok_or_else(|| Error::Parse {
                    line: 0,
                    message: alloc::format!("unknown Pauli letter '{c}'"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_letters(&letters)
    }
}

/// A Pauli string with a real coefficient and an optional factor of `i`.
///
/// Products of Hermitian terms can pick up `±i`; the sign is folded into
/// `coefficient` and the `i` is tracked by `imaginary`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub imaginary: bool,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Self {
        Self { coefficient, imaginary: false, string }
    }

    pub fn n_qubits(&self) -> usize {
        self.string.n_qubits()
    }

    pub fn complex_coefficient(&self) -> Complex64 {
        if self.imaginary {
            Complex64::new(0.0, self.coefficient)
        } else {
            Complex64::new(self.coefficient, 0.0)
        }
    }

    pub fn is_hermitian(&self) -> bool {
        !self.imaginary || self.coefficient == 0.0
    }
}

/// Canonical product of two terms.
pub fn multiply(p: &PauliTerm, q: &PauliTerm) -> Result<PauliTerm> {
    let (phase, string) = p.string.mul(&q.string)?;
    let power = phase.power() + p.imaginary as u32 + q.imaginary as u32;
    let sign = if power % 4 >= 2 { -1.0 } else { 1.0 };
    Ok(PauliTerm {
        coefficient: sign * p.coefficient * q.coefficient,
        imaginary: power % 2 == 1,
        string,
    })
}

/// Hermitian operator stored as a real-weighted sum of distinct Pauli strings
/// plus a separate identity offset. Terms keep their insertion order.
#[derive(Clone, Debug, Default)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    constant_offset: f64,
    index: BTreeMap<PauliString, usize>,
}

impl PartialEq for PauliSum {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits
            && self.constant_offset == other.constant_offset
            && self.terms == other.terms
    }
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n_qubits, ..Default::default() }
    }

    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(n_qubits: usize, terms: I) -> Result<Self> {
        let mut sum = Self::new(n_qubits);
        for t in terms {
            if !t.is_hermitian() {
                return Err(Error::NonHermitian);
            }
            sum.add(t.coefficient, t.string)?;
        }
        Ok(sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.constant_offset == 0.0
    }

    pub fn constant_offset(&self) -> f64 {
        self.constant_offset
    }

    pub fn coefficient_of(&self, string: &PauliString) -> f64 {
        if string.is_identity() {
            return self.constant_offset;
        }
        self.index.get(string).map_or(0.0, |&i| self.terms[i].coefficient)
    }

    /// Adds `coefficient · string`, merging with an existing equal string.
    pub fn add(&mut self, coefficient: f64, string: PauliString) -> Result<()> {
        if string.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: string.n_qubits(),
            });
        }
        if string.is_identity() {
            self.constant_offset += coefficient;
            return Ok(());
        }
        match self.index.get(&string) {
            Some(&i) => {
                self.terms[i].coefficient += coefficient;
                if self.terms[i].coefficient.abs() < MERGE_TOLERANCE {
                    self.terms.remove(i);
                    self.reindex();
                }
            }
            None => {
                if coefficient.abs() >= MERGE_TOLERANCE {
                    self.index.insert(string, self.terms.len());
                    self.terms.push(PauliTerm::new(coefficient, string));
                }
            }
        }
        Ok(())
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant_offset += c;
    }

    /// `self += scale · other`.
    pub fn add_sum(&mut self, other: &PauliSum, scale: f64) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.constant_offset += scale * other.constant_offset;
        for t in &other.terms {
            self.add(scale * t.coefficient, t.string)?;
        }
        Ok(())
    }

    pub fn scaled(&self, scale: f64) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits);
        out.add_sum(self, scale).expect("same register");
        out
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (i, t) in self.terms.iter().enumerate() {
            self.index.insert(t.string, i);
        }
    }

    /// True when every pair of terms commutes.
    pub fn is_commuting(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, a)| {
            self.terms[i + 1..].iter().all(|b| a.string.commutes_with(&b.string))
        })
    }

    pub fn to_operator(&self) -> PauliOperator {
        let mut op = PauliOperator::new(self.n_qubits);
        op.add(Complex64::new(self.constant_offset, 0.0), PauliString::identity(self.n_qubits));
        for t in &self.terms {
            op.add(Complex64::new(t.coefficient, 0.0), t.string);
        }
        op
    }

    /// Every term shifted by `offset` sites; fails when a term leaves the chain.
    pub fn translated(&self, offset: i64) -> Result<PauliSum> {
        let mut out = PauliSum::new(self.n_qubits);
        out.constant_offset = self.constant_offset;
        for t in &self.terms {
            let s = t.string.translated(offset).ok_or(Error::OffLattice { shift: offset })?;
            out.add(t.coefficient, s)?;
        }
        Ok(out)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.constant_offset != 0.0 || self.terms.is_empty() {
            writeln!(f, "{} {}", self.constant_offset, PauliString::identity(self.n_qubits))?;
        }
        for t in &self.terms {
            writeln!(f, "{} {}", t.coefficient, t.string)?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    /// Parses `<coefficient> <letters>` lines; blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut sum: Option<PauliSum> = None;
        for (lineno, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: lineno + 1, message };
            let mut parts = line.split_whitespace();
            let (Some(c), Some(letters), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err("expected '<coefficient> <letters>'".to_string()));
            };
            let coefficient: f64 =
                c.parse().map_err(|_| parse_err(alloc::format!("bad coefficient '{c}'")))?;
            let string: PauliString = letters.parse().map_err(|e| match e {
                Error::Parse { message, .. } => parse_err(message),
                other => other,
            })?;
            let target = sum.get_or_insert_with(|| PauliSum::new(string.n_qubits()));
            target.add(coefficient, string).map_err(|e| parse_err(e.to_string()))?;
        }
        sum.ok_or(Error::Parse { line: 0, message: "no terms".to_string() })
    }
}

/// General (not necessarily Hermitian) operator with complex coefficients.
///
/// Used for ladder operators and intermediate products; convert back with
/// [`PauliOperator::to_hermitian`].
#[derive(Clone, Debug, Default)]
pub struct PauliOperator {
    n_qubits: usize,
    terms: Vec<(PauliString, Complex64)>,
    index: BTreeMap<PauliString, usize>,
}

impl PauliOperator {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ..Default::default() }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let mut op = Self::new(n_qubits);
        op.add(Complex64::new(1.0, 0.0), PauliString::identity(n_qubits));
        op
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(PauliString, Complex64)] {
        &self.terms
    }

    pub fn add(&mut self, c: Complex64, string: PauliString) {
        debug_assert_eq!(string.n_qubits(), self.n_qubits);
        match self.index.get(&string) {
            Some(&i) => self.terms[i].1 += c,
            None => {
                self.index.insert(string, self.terms.len());
                self.terms.push((string, c));
            }
        }
    }

    pub fn add_operator(&mut self, other: &PauliOperator, scale: Complex64) {
        for &(s, c) in &other.terms {
            self.add(c * scale, s);
        }
    }

    pub fn scaled(&self, scale: Complex64) -> Self {
        let mut out = Self::new(self.n_qubits);
        out.add_operator(self, scale);
        out
    }

    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        let mut out = Self::new(self.n_qubits);
        for &(a, ca) in &self.terms {
            for &(b, cb) in &other.terms {
                let (phase, s) = a.mul(&b)?;
                out.add(ca * cb * phase.to_complex(), s);
            }
        }
        Ok(out.pruned())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::new(self.n_qubits);
        for &(s, c) in &self.terms {
            out.add(c.conj(), s);
        }
        out
    }

    /// Drops coefficients below [`MERGE_TOLERANCE`].
    pub fn pruned(&self) -> Self {
        let mut out = Self::new(self.n_qubits);
        for &(s, c) in &self.terms {
            if c.norm() >= MERGE_TOLERANCE {
                out.add(c, s);
            }
        }
        out
    }

    /// Converts to a Hermitian sum; fails if any imaginary part exceeds `tol`.
    pub fn to_hermitian(&self, tol: f64) -> Result<PauliSum> {
        let mut sum = PauliSum::new(self.n_qubits);
        for &(s, c) in &self.terms {
            if c.im.abs() > tol {
                return Err(Error::NonHermitian);
            }
            sum.add(c.re, s)?;
        }
        Ok(sum)
    }
}
