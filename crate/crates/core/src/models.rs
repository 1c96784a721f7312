//! Model Hamiltonians and their observables.
//!
//! Sites are 0-based internally. Staggered signs use the 1-based site number
//! `j + 1`, see [`site_parity`].
//!
//! Schwinger encoding: the gauge-eliminated spin Hamiltonian pairs the mass
//! term `m(-1)^j Φ_j†Φ_j` with `(m/2)(-1)^j Z_j`, so the staggered field
//! occupation is `Φ_j†Φ_j = (I + Z_j)/2`, and the bare vacuum is `|0101…⟩`
//! (qubit 0 first). Thirring and deuteron models use the [`crate::fermion`]
//! convention instead, where `|1⟩` is an occupied mode.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fermion::{jw_hamiltonian, FermionOp};
use crate::pauli::{Letter, PauliString, PauliSum};
use crate::state::StateVector;

/// `(-1)^(j+1)` for 0-based site `j`, i.e. the staggered sign of 1-based site `j + 1`.
pub fn site_parity(j: usize) -> f64 {
    if j % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

fn z(n: usize, q: usize) -> PauliString {
    PauliString::single(n, q, Letter::Z).expect("site in range")
}

fn pair(n: usize, i: usize, j: usize, l: Letter) -> PauliString {
    PauliString::from_pairs(n, &[(i, l), (j, l)]).expect("sites in range")
}

fn invalid(msg: &str) -> Error {
    Error::InvalidParameter(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchwingerParams {
    pub n_sites: usize,
    pub mass: f64,
    pub coupling: f64,
    pub spacing: f64,
    /// Electric flux entering at the left boundary.
    pub boundary_field: f64,
}

impl SchwingerParams {
    /// Dimensionless defaults `g = 1`, `a = 1`, zero boundary flux.
    pub fn new(n_sites: usize, mass: f64) -> Self {
        Self { n_sites, mass, coupling: 1.0, spacing: 1.0, boundary_field: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites % 2 != 0 {
            return Err(invalid("schwinger n_sites must be even and at least 2"));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(invalid("schwinger spacing must be positive"));
        }
        if ![self.mass, self.coupling, self.boundary_field].iter().all(|v| v.is_finite()) {
            return Err(invalid("schwinger parameters must be finite"));
        }
        Ok(())
    }
}

/// Gauge-eliminated Schwinger Hamiltonian on `N` qubits:
///
/// `H = 1/(4a) Σ_j (X_j X_{j+1} + Y_j Y_{j+1}) + (m/2) Σ_j (-1)^j Z_j
///    + (g²a/2) Σ_{j<N} (ε0 − Σ_{i≤j} (Z_i + (-1)^i))²`
///
/// The squared flux is expanded with `Z² = I` into `I`, `Z` and `ZZ` terms.
pub fn build_schwinger(p: &SchwingerParams) -> Result<PauliSum> {
    p.validate()?;
    let n = p.n_sites;
    let mut h = PauliSum::new(n);
    let hop = 1.0 / (4.0 * p.spacing);
    for j in 0..n - 1 {
        h.add(hop, pair(n, j, j + 1, Letter::X))?;
        h.add(hop, pair(n, j, j + 1, Letter::Y))?;
    }
    for j in 0..n {
        h.add(0.5 * p.mass * site_parity(j), z(n, j))?;
    }
    // (c_j − Σ_{i≤j} Z_i)² = c_j² + (j+1) − 2 c_j Σ Z_i + 2 Σ_{i<k≤j} Z_i Z_k
    let e = 0.5 * p.coupling * p.coupling * p.spacing;
    let mut c = p.boundary_field;
    for j in 0..n - 1 {
        c -= site_parity(j);
        h.add_constant(e * (c * c + (j + 1) as f64));
        for i in 0..=j {
            h.add(-2.0 * e * c, z(n, i))?;
        }
        for i in 0..=j {
            for k in i + 1..=j {
                h.add(2.0 * e, pair(n, i, k, Letter::Z))?;
            }
        }
    }
    Ok(h)
}

/// Staggered bare vacuum `|0101…⟩`.
pub fn bare_vacuum(n_sites: usize) -> Result<StateVector> {
    if n_sites == 0 || n_sites % 2 != 0 {
        return Err(invalid("bare vacuum needs an even number of sites"));
    }
    StateVector::basis(n_sites, bare_vacuum_index(n_sites))
}

/// Basis index of the staggered pattern with odd (0-based) sites set.
pub fn bare_vacuum_index(n_sites: usize) -> usize {
    (0..n_sites).filter(|j| j % 2 == 1).fold(0, |acc, j| acc | (1 << j))
}

/// Fraction of sites deviating from the bare-vacuum pattern,
/// `(1/2N) Σ_j (1 + (-1)^j ⟨Z_j⟩)`.
pub fn particle_density(s: &StateVector, n_sites: usize) -> Result<f64> {
    s.check(n_sites)?;
    let z = s.z_expectations();
    let total: f64 = z.iter().enumerate().map(|(j, zj)| 1.0 + site_parity(j) * zj).sum();
    Ok(total / (2.0 * n_sites as f64))
}

/// Operator form of [`particle_density`].
pub fn particle_density_operator(n_sites: usize) -> PauliSum {
    let mut h = PauliSum::new(n_sites);
    let w = 1.0 / (2.0 * n_sites as f64);
    h.add_constant(0.5);
    for j in 0..n_sites {
        h.add(w * site_parity(j), z(n_sites, j)).expect("site in range");
    }
    h
}

/// Staggered order parameter `(1/N) Σ_j (-1)^j ⟨Z_j⟩`; equals −1 on the bare vacuum.
pub fn order_parameter(s: &StateVector) -> f64 {
    let z = s.z_expectations();
    z.iter().enumerate().map(|(j, zj)| site_parity(j) * zj).sum::<f64>() / z.len() as f64
}

/// Occupied-mode count relative to the bare vacuum, `Σ_j (I − Z_j)/2 − ⌊N/2⌋`.
pub fn charge_operator(n_sites: usize) -> PauliSum {
    let mut h = PauliSum::new(n_sites);
    h.add_constant(n_sites as f64 / 2.0 - (n_sites / 2) as f64);
    for j in 0..n_sites {
        h.add(-0.5, z(n_sites, j)).expect("site in range");
    }
    h
}

/// `⟨Σ_j (I − Z_j)/2⟩ − ⌊N/2⌋`.
pub fn total_charge(s: &StateVector) -> f64 {
    let n = s.n_qubits();
    let zsum: f64 = s.z_expectations().iter().sum();
    (n as f64 - zsum) / 2.0 - (n / 2) as f64
}

/// Electric flux on each of the `N − 1` links of a classical configuration,
/// `L_{j,j+1} = ε0 + Σ_{i≤j} [Φ_i†Φ_i − (1 − (-1)^i)/2]` with
/// `Φ_i†Φ_i = 1 − bit_i` in the Schwinger encoding.
pub fn reconstruct_efield(bits: &[bool], p: &SchwingerParams) -> Result<Vec<f64>> {
    if bits.len() != p.n_sites {
        return Err(Error::DimensionMismatch { expected: p.n_sites, found: bits.len() });
    }
    let mut flux = p.boundary_field;
    let mut out = Vec::with_capacity(p.n_sites.saturating_sub(1));
    for (j, &bit) in bits.iter().enumerate().take(p.n_sites.saturating_sub(1)) {
        let occupation = if bit { 0.0 } else { 1.0 };
        let background = (1.0 - site_parity(j)) / 2.0;
        flux += occupation - background;
        out.push(flux);
    }
    Ok(out)
}

/// Bits of a basis index, qubit 0 first.
pub fn index_bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| (index >> j) & 1 == 1).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThirringParams {
    pub n_sites: usize,
    pub mass: f64,
    pub coupling: f64,
}

impl ThirringParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(invalid("thirring n_sites must be at least 2"));
        }
        if !(self.mass.is_finite() && self.coupling.is_finite()) {
            return Err(invalid("thirring parameters must be finite"));
        }
        Ok(())
    }
}

/// Thirring spin chain with open boundaries:
///
/// `H = Σ_{j<N} (-1)^{j+1}/4 (X_j X_{j+1} + Y_j Y_{j+1})
///    + Σ_j (-1)^j m/2 Z_j + Σ_{j<N} g²/4 Z_j Z_{j+1}`
pub fn build_thirring(p: &ThirringParams) -> Result<PauliSum> {
    p.validate()?;
    let n = p.n_sites;
    let mut h = PauliSum::new(n);
    for j in 0..n - 1 {
        // (-1)^{j+1} at 1-based j is -(-1)^j
        let c = -site_parity(j) / 4.0;
        h.add(c, pair(n, j, j + 1, Letter::X))?;
        h.add(c, pair(n, j, j + 1, Letter::Y))?;
    }
    for j in 0..n {
        h.add(site_parity(j) * p.mass / 2.0, z(n, j))?;
    }
    let g2 = p.coupling * p.coupling;
    for j in 0..n - 1 {
        h.add(g2 / 4.0, pair(n, j, j + 1, Letter::Z))?;
    }
    Ok(h)
}

/// Fermionic form of the Thirring chain in the `|1⟩ = occupied` convention,
/// plus the identity offset that makes its Jordan-Wigner image equal
/// [`build_thirring`] exactly:
///
/// `Σ (-1)^{j+1}/2 (c_j†c_{j+1} + h.c.) − m Σ (-1)^j n_j
///  + g² Σ n_j n_{j+1} − (g²/2) Σ (n_j + n_{j+1}) + const`
pub fn thirring_fermionic(p: &ThirringParams) -> Result<(Vec<FermionOp>, f64)> {
    p.validate()?;
    let n = p.n_sites;
    let g2 = p.coupling * p.coupling;
    let mut ops = Vec::new();
    let mut constant = 0.0;
    for j in 0..n - 1 {
        ops.push(FermionOp::hop(j, j + 1, -site_parity(j) / 2.0));
    }
    for j in 0..n {
        ops.push(FermionOp::number(j, -site_parity(j) * p.mass));
        constant += site_parity(j) * p.mass / 2.0;
    }
    for j in 0..n - 1 {
        ops.push(FermionOp::density_density(j, j + 1, g2));
        ops.push(FermionOp::number(j, -g2 / 2.0));
        ops.push(FermionOp::number(j + 1, -g2 / 2.0));
        constant += g2 / 4.0;
    }
    Ok((ops, constant))
}

/// Jordan-Wigner image of [`thirring_fermionic`].
pub fn build_thirring_from_fermions(p: &ThirringParams) -> Result<PauliSum> {
    let (ops, constant) = thirring_fermionic(p)?;
    let mut h = jw_hamiltonian(&ops, p.n_sites)?;
    h.add_constant(constant);
    Ok(h)
}

/// Harmonic-oscillator truncation of the pionless-EFT deuteron.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeuteronSpec {
    pub level_count: usize,
}

/// `H_2` or `H_3` of the deuteron in its qubit form.
pub fn build_deuteron(spec: DeuteronSpec) -> Result<PauliSum> {
    let n = spec.level_count;
    if n != 2 && n != 3 {
        return Err(Error::UnsupportedLevelCount(n));
    }
    let mut h = PauliSum::new(n);
    h.add_constant(5.906709);
    h.add(0.218291, z(n, 0))?;
    h.add(-6.125, z(n, 1))?;
    h.add(-2.143304, pair(n, 0, 1, Letter::X))?;
    h.add(-2.143304, pair(n, 0, 1, Letter::Y))?;
    if n == 3 {
        h.add_constant(9.625);
        h.add(-9.625, z(n, 2))?;
        h.add(3.913119, pair(n, 1, 2, Letter::X))?;
        h.add(3.913119, pair(n, 1, 2, Letter::Y))?;
    }
    Ok(h)
}

/// Trapped-ion resource Hamiltonian parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResourceParams {
    pub n_sites: usize,
    pub j0: f64,
    pub alpha: f64,
    pub b_field: f64,
    pub delta: f64,
}

impl ResourceParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(invalid("resource n_sites must be at least 2"));
        }
        if !(self.alpha > 0.0 && self.alpha < 3.0) {
            return Err(invalid("resource alpha must lie in (0, 3)"));
        }
        if ![self.j0, self.b_field, self.delta].iter().all(|v| v.is_finite()) {
            return Err(invalid("resource parameters must be finite"));
        }
        Ok(())
    }

    /// `J_0 / |i − j|^α`.
    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.j0 / (i.abs_diff(j) as f64).powf(self.alpha)
    }
}

/// All-to-all XY model with power-law couplings and a uniform field,
/// `Σ_{i<j} (J_ij/2)(X_i X_j + Y_i Y_j) + B Σ_j Z_j`.
pub fn build_resource_xy(p: &ResourceParams) -> Result<PauliSum> {
    p.validate()?;
    let n = p.n_sites;
    let mut h = PauliSum::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let c = p.coupling(i, j) / 2.0;
            h.add(c, pair(n, i, j, Letter::X))?;
            h.add(c, pair(n, i, j, Letter::Y))?;
        }
    }
    for j in 0..n {
        h.add(p.b_field, z(n, j))?;
    }
    Ok(h)
}

/// Local rotation generator `(Δ/2) Z_j`.
pub fn local_z(j: usize, delta: f64, n_sites: usize) -> Result<PauliSum> {
    let mut h = PauliSum::new(n_sites);
    h.add(delta / 2.0, PauliString::single(n_sites, j, Letter::Z)?)?;
    Ok(h)
}
