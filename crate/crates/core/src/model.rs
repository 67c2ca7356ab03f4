//! Basis bookkeeping and model parameters.
//!
//! Product states are written `|n, q1, q2>` with photon number `n` and two
//! qubit levels. Within each photon number the qubit pairs are ordered
//! `(ee, eg, ge, gg)`, so the flat index of a state is
//! `4n + 2*[q1 == g] + [q2 == g]`.

use crate::error::{Error, Result};

/// Level of a single qubit. `Excited` carries +1 under sigma_z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Qubit {
    Excited,
    Ground,
}

impl Qubit {
    /// Eigenvalue of sigma_z for this level.
    pub fn sign(self) -> f64 {
        match self {
            Qubit::Excited => 1.0,
            Qubit::Ground => -1.0,
        }
    }

    /// The other level (action of sigma_x up to amplitude).
    pub fn flipped(self) -> Qubit {
        match self {
            Qubit::Excited => Qubit::Ground,
            Qubit::Ground => Qubit::Excited,
        }
    }

    fn offset(self) -> usize {
        match self {
            Qubit::Excited => 0,
            Qubit::Ground => 1,
        }
    }
}

/// Photon-number parity sector of the full model.
///
/// The reflection `exp(i pi a^dag a) sigma1_z sigma2_z` commutes with the
/// Hamiltonian; its eigenvalue on a product state is `(-1)^n s1 s2` with
/// `s = +1` for an excited qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn flipped(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A single product basis state `|n, q1, q2>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub n: u32,
    pub q1: Qubit,
    pub q2: Qubit,
}

impl BasisState {
    pub fn new(n: u32, q1: Qubit, q2: Qubit) -> Self {
        BasisState { n, q1, q2 }
    }

    /// Position in the flat basis ordering `(ee, eg, ge, gg)` per photon number.
    pub fn flat_index(self) -> usize {
        4 * self.n as usize + 2 * self.q1.offset() + self.q2.offset()
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn from_flat_index(index: usize) -> Self {
        let n = (index / 4) as u32;
        let q1 = if index % 4 >= 2 { Qubit::Ground } else { Qubit::Excited };
        let q2 = if index % 2 == 1 { Qubit::Ground } else { Qubit::Excited };
        BasisState { n, q1, q2 }
    }

    /// Reflection parity `(-1)^n s1 s2` of this state.
    pub fn parity(self) -> Parity {
        let s = if self.n % 2 == 0 { 1.0 } else { -1.0 } * self.q1.sign() * self.q2.sign();
        if s > 0.0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Excitation number `n + [q1 == e] + [q2 == e]` conserved by the
    /// rotating-wave (Jaynes-Cummings) model.
    pub fn excitations(self) -> u32 {
        let mut c = self.n;
        if self.q1 == Qubit::Excited {
            c += 1;
        }
        if self.q2 == Qubit::Excited {
            c += 1;
        }
        c
    }
}

/// Physical parameters of the two-qubit Rabi model
/// `H = omega a^dag a + g1 sigma1_x (a + a^dag) + g2 sigma2_x (a + a^dag)
///      + delta1 sigma1_z + delta2 sigma2_z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl ModelParams {
    pub fn new(omega: f64, g1: f64, g2: f64, delta1: f64, delta2: f64) -> Result<Self> {
        for (name, v) in [
            ("omega", omega),
            ("g1", g1),
            ("g2", g2),
            ("delta1", delta1),
            ("delta2", delta2),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if omega <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {omega}")));
        }
        if g1 < 0.0 || g2 < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "couplings must be non-negative, got g1={g1}, g2={g2}"
            )));
        }
        Ok(ModelParams { omega, g1, g2, delta1, delta2 })
    }

    /// Same parameters expressed in units of the mode frequency (`omega = 1`).
    pub fn normalized(self) -> Self {
        ModelParams {
            omega: 1.0,
            g1: self.g1 / self.omega,
            g2: self.g2 / self.omega,
            delta1: self.delta1 / self.omega,
            delta2: self.delta2 / self.omega,
        }
    }

    /// Combined coupling `g1 + g2`.
    pub fn total_coupling(self) -> f64 {
        self.g1 + self.g2
    }

    /// Rescale both couplings so `g1 + g2 == total` while keeping their ratio.
    pub fn with_total_coupling(self, total: f64) -> Result<Self> {
        if !total.is_finite() || total < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "total coupling must be finite and non-negative, got {total}"
            )));
        }
        let base = self.total_coupling();
        if base <= 0.0 {
            return Err(Error::InvalidParameter(
                "coupling ratio undefined: g1 + g2 is zero".into(),
            ));
        }
        Ok(ModelParams {
            g1: self.g1 / base * total,
            g2: self.g2 / base * total,
            ..self
        })
    }
}

/// Matrix element `<s|H|t>` of the full (normalized) two-qubit Rabi model.
///
/// Diagonal: `n + delta1 s1 + delta2 s2`. Off-diagonal: `g_i sqrt(max(n_s, n_t))`
/// between states differing by one photon and one flip of qubit `i`.
pub fn rabi_matrix_element(params: &ModelParams, s: BasisState, t: BasisState) -> f64 {
    if s == t {
        return s.n as f64 + params.delta1 * s.q1.sign() + params.delta2 * s.q2.sign();
    }
    let dn = s.n.abs_diff(t.n);
    if dn != 1 {
        return 0.0;
    }
    let amp = (s.n.max(t.n) as f64).sqrt();
    match (s.q1 == t.q1, s.q2 == t.q2) {
        (false, true) => params.g1 * amp,
        (true, false) => params.g2 * amp,
        _ => 0.0,
    }
}

/// Matrix element of the rotating-wave (Jaynes-Cummings) counterpart.
///
/// Keeps only `g_i (sigma_i^+ a + sigma_i^- a^dag)`: the qubit must flip
/// opposite to the photon-number change.
pub fn jc_matrix_element(params: &ModelParams, s: BasisState, t: BasisState) -> f64 {
    if s == t {
        return s.n as f64 + params.delta1 * s.q1.sign() + params.delta2 * s.q2.sign();
    }
    if s.n.abs_diff(t.n) != 1 {
        return 0.0;
    }
    let (lo, hi) = if s.n < t.n { (s, t) } else { (t, s) };
    let amp = (hi.n as f64).sqrt();
    match (lo.q1 == hi.q1, lo.q2 == hi.q2) {
        (false, true) if lo.q1 == Qubit::Excited => params.g1 * amp,
        (true, false) if lo.q2 == Qubit::Excited => params.g2 * amp,
        _ => 0.0,
    }
}

/// Parity sector selector for sweeps and CLI output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Even,
    Odd,
    All,
}

impl Sector {
    pub fn label(self) -> &'static str {
        match self {
            Sector::Even => "even",
            Sector::Odd => "odd",
            Sector::All => "all",
        }
    }

    /// Concrete parities covered by this selector.
    pub fn parities(self) -> &'static [Parity] {
        match self {
            Sector::Even => &[Parity::Even],
            Sector::Odd => &[Parity::Odd],
            Sector::All => &[Parity::Even, Parity::Odd],
        }
    }
}

impl From<Parity> for Sector {
    fn from(p: Parity) -> Sector {
        match p {
            Parity::Even => Sector::Even,
            Parity::Odd => Sector::Odd,
        }
    }
}

/// Which solver produced a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Fock,
    GFunc,
    Jc,
    Quasi,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Fock => "fock",
            Method::GFunc => "gfunc",
            Method::Jc => "jc",
            Method::Quasi => "quasi",
        }
    }
}

/// One energy level at one coupling, as emitted by the sweep drivers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRecord {
    pub g: f64,
    pub parity: Sector,
    pub level: u32,
    pub energy: f64,
    pub method: Method,
}

/// Canonical record order: coupling, then sector, then level, then method.
pub fn sort_records(records: &mut [SpectrumRecord]) {
    records.sort_by(|a, b| {
        a.g.total_cmp(&b.g)
            .then(a.parity.cmp(&b.parity))
            .then(a.level.cmp(&b.level))
            .then(a.method.cmp(&b.method))
    });
}

/// An eigenstate known in closed form, stored over the flat product basis.
#[derive(Clone, Debug)]
pub struct ExactState {
    /// Amplitudes over flat indices `0..4*(n_max+1)`; normalized to unit norm.
    pub amplitudes: Vec<f64>,
    pub energy: f64,
}

impl ExactState {
    /// Photon cutoff implied by the amplitude vector length.
    pub fn n_max(&self) -> u32 {
        (self.amplitudes.len() / 4) as u32 - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_index_round_trips() {
        for i in 0..64 {
            let s = BasisState::from_flat_index(i);
            assert_eq!(s.flat_index(), i);
        }
    }

    #[test]
    fn flat_index_layout() {
        use Qubit::{Excited as E, Ground as G};
        assert_eq!(BasisState::new(0, E, E).flat_index(), 0);
        assert_eq!(BasisState::new(0, E, G).flat_index(), 1);
        assert_eq!(BasisState::new(0, G, E).flat_index(), 2);
        assert_eq!(BasisState::new(0, G, G).flat_index(), 3);
        assert_eq!(BasisState::new(2, E, G).flat_index(), 9);
    }

    #[test]
    fn parity_examples() {
        use Qubit::{Excited as E, Ground as G};
        assert_eq!(BasisState::new(0, E, E).parity(), Parity::Even);
        assert_eq!(BasisState::new(0, E, G).parity(), Parity::Odd);
        assert_eq!(BasisState::new(1, E, G).parity(), Parity::Even);
        assert_eq!(BasisState::new(1, G, G).parity(), Parity::Odd);
        assert_eq!(BasisState::new(2, G, G).parity(), Parity::Even);
    }

    #[test]
    fn excitation_count() {
        use Qubit::{Excited as E, Ground as G};
        assert_eq!(BasisState::new(0, G, G).excitations(), 0);
        assert_eq!(BasisState::new(3, E, G).excitations(), 4);
        assert_eq!(BasisState::new(1, E, E).excitations(), 3);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1.0, 0.1, 0.2, 0.5, -0.5).is_ok());
        assert!(ModelParams::new(0.0, 0.1, 0.2, 0.5, 0.5).is_err());
        assert!(ModelParams::new(1.0, -0.1, 0.2, 0.5, 0.5).is_err());
        assert!(ModelParams::new(1.0, f64::NAN, 0.2, 0.5, 0.5).is_err());
    }

    #[test]
    fn normalization_scales_fields() {
        let p = ModelParams::new(2.0, 0.4, 0.8, 1.0, 0.6).unwrap().normalized();
        assert_eq!(p.omega, 1.0);
        assert_eq!(p.g1, 0.2);
        assert_eq!(p.g2, 0.4);
        assert_eq!(p.delta1, 0.5);
        assert_eq!(p.delta2, 0.3);
    }

    #[test]
    fn total_coupling_rescale_keeps_ratio() {
        let p = ModelParams::new(1.0, 3.0, 1.0, 0.4, 0.3).unwrap();
        let q = p.with_total_coupling(2.0).unwrap();
        assert!((q.g1 - 1.5).abs() < 1e-15);
        assert!((q.g2 - 0.5).abs() < 1e-15);
        assert!(ModelParams::new(1.0, 0.0, 0.0, 0.4, 0.3)
            .unwrap()
            .with_total_coupling(1.0)
            .is_err());
    }

    #[test]
    fn rabi_elements_match_coupling_rules() {
        use Qubit::{Excited as E, Ground as G};
        let p = ModelParams::new(1.0, 0.3, 0.7, 1.4, 0.4).unwrap();
        let s0 = BasisState::new(0, E, G);
        assert_eq!(rabi_matrix_element(&p, s0, s0), 1.4 - 0.4);
        // flipping qubit 1 carries g1, qubit 2 carries g2
        assert_eq!(rabi_matrix_element(&p, BasisState::new(1, G, G), s0), 0.3);
        assert_eq!(rabi_matrix_element(&p, BasisState::new(1, E, E), s0), 0.7);
        let amp = rabi_matrix_element(&p, BasisState::new(2, E, E), BasisState::new(1, E, G));
        assert!((amp - 0.7 * 2f64.sqrt()).abs() < 1e-15);
        // double flips and photon jumps of 2 vanish
        assert_eq!(rabi_matrix_element(&p, BasisState::new(1, G, E), s0), 0.0);
        assert_eq!(rabi_matrix_element(&p, BasisState::new(2, G, G), s0), 0.0);
    }

    #[test]
    fn jc_elements_drop_counter_rotating_terms() {
        use Qubit::{Excited as E, Ground as G};
        let p = ModelParams::new(1.0, 0.3, 0.7, 1.4, 0.4).unwrap();
        // de-exciting a qubit while creating a photon survives
        assert_eq!(
            jc_matrix_element(&p, BasisState::new(1, G, G), BasisState::new(0, E, G)),
            0.3
        );
        // exciting a qubit while creating a photon is dropped
        assert_eq!(
            jc_matrix_element(&p, BasisState::new(1, E, E), BasisState::new(0, E, G)),
            0.0
        );
        let sym = jc_matrix_element(&p, BasisState::new(0, E, G), BasisState::new(1, G, G));
        assert_eq!(sym, 0.3);
    }

    #[test]
    fn record_sort_is_total() {
        let mut recs = vec![
            SpectrumRecord { g: 0.2, parity: Sector::Odd, level: 0, energy: 1.0, method: Method::Fock },
            SpectrumRecord { g: 0.1, parity: Sector::Odd, level: 1, energy: 2.0, method: Method::Fock },
            SpectrumRecord { g: 0.1, parity: Sector::Even, level: 1, energy: 0.5, method: Method::Jc },
            SpectrumRecord { g: 0.1, parity: Sector::Even, level: 1, energy: 0.4, method: Method::Fock },
        ];
        sort_records(&mut recs);
        assert_eq!(recs[0].method, Method::Fock);
        assert_eq!(recs[0].parity, Sector::Even);
        assert_eq!(recs[1].method, Method::Jc);
        assert_eq!(recs[2].g, 0.1);
        assert_eq!(recs[3].g, 0.2);
    }
}
