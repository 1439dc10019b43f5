//! Public-key quantum money mini-scheme modelled as an ideal functionality
//! over simulated Wiesner notes.
//!
//! The [`MoneyAuthority`] owns every note's qubits and the registry that maps
//! a serial number to its secret `(basis, bit)` string. Callers only ever see
//! a [`NoteHandle`]; the sole ways to touch a note are the operations in this
//! module, which is what makes the unforgeability game meaningful in a
//! classical simulation. Amplitude access exists for demos and is refused in
//! game mode.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::{tags, Canonical, EncodingError, Reader};
use crate::group::GroupParams;
use crate::qubit::{self, Basis, Qubit, QubitError};

pub const DEFAULT_QUBITS: usize = 16;
pub const SERIAL_LEN: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoneyError {
    #[error("serial number is not registered")]
    UnknownSerial,
    #[error("note handle {0} does not refer to a live note")]
    UnknownHandle(u64),
    #[error("a note needs at least one qubit")]
    EmptyNote,
    #[error("amplitude access is simulation-only and disabled in game mode")]
    SimulationOnly,
    #[error(transparent)]
    Qubit(#[from] QubitError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SerialNumber(pub [u8; SERIAL_LEN]);

impl fmt::Debug for SerialNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Serial({}..)", hex_prefix(&self.0))
    }
}

fn hex_prefix(bytes: &[u8]) -> String {
    bytes.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

impl Canonical for SerialNumber {
    const TAG: u8 = tags::SERIAL;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.0);
    }

    fn decode_payload(r: &mut Reader<'_>, _: &GroupParams) -> Result<Self, EncodingError> {
        let raw = r.rest();
        let arr: [u8; SERIAL_LEN] = raw.try_into().map_err(|_| EncodingError::BadLength("serial"))?;
        Ok(SerialNumber(arr))
    }
}

/// Reference to a note held by a [`MoneyAuthority`]. Copying the handle
/// copies the reference, never the note; presenting one note twice is
/// caught by [`MoneyAuthority::ver_batch`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NoteHandle(u64);

impl NoteHandle {
    pub fn id(self) -> u64 {
        self.0
    }

    /// Rebuilds a handle from a serialised id. The id means nothing unless
    /// the same authority still holds that note.
    pub fn from_id(id: u64) -> Self {
        NoteHandle(id)
    }
}

impl Canonical for NoteHandle {
    const TAG: u8 = tags::NOTE_REF;

    fn encode_payload(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.0.to_be_bytes());
    }

    fn decode_payload(r: &mut Reader<'_>, _: &GroupParams) -> Result<Self, EncodingError> {
        let arr: [u8; 8] = r.rest().try_into().map_err(|_| EncodingError::BadLength("note ref"))?;
        Ok(NoteHandle(u64::from_be_bytes(arr)))
    }
}

/// Secret `(basis, bit)` string registered under a serial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Registration {
    pub bases: Vec<Basis>,
    pub bits: Vec<bool>,
}

impl Registration {
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

/// Anything that can run money verification; lets callers substitute
/// instrumented doubles.
pub trait NoteVerifier {
    fn ver(&mut self, handle: NoteHandle, serial: &SerialNumber) -> Result<bool, MoneyError>;
}

pub struct MoneyAuthority {
    registry: HashMap<SerialNumber, Registration>,
    notes: HashMap<u64, Vec<Qubit>>,
    next_handle: u64,
    rng: ChaCha20Rng,
    game_mode: bool,
}

impl fmt::Debug for MoneyAuthority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MoneyAuthority")
            .field("registered", &self.registry.len())
            .field("live_notes", &self.notes.len())
            .field("game_mode", &self.game_mode)
            .finish()
    }
}

impl MoneyAuthority {
    pub fn new(rng: ChaCha20Rng) -> Self {
        MoneyAuthority {
            registry: HashMap::new(),
            notes: HashMap::new(),
            next_handle: 1,
            rng,
            game_mode: false,
        }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(ChaCha20Rng::seed_from_u64(seed))
    }

    /// An authority that refuses amplitude dumps and imports.
    pub fn for_game(seed: u64) -> Self {
        let mut a = Self::from_seed(seed);
        a.game_mode = true;
        a
    }

    pub fn is_game_mode(&self) -> bool {
        self.game_mode
    }

    /// Copy of the full functionality state, used by rewinding extractors.
    /// Not exposed to adversaries.
    pub(crate) fn fork_state(&self) -> Self {
        MoneyAuthority {
            registry: self.registry.clone(),
            notes: self.notes.clone(),
            next_handle: self.next_handle,
            rng: self.rng.clone(),
            game_mode: self.game_mode,
        }
    }

    fn store(&mut self, qubits: Vec<Qubit>) -> NoteHandle {
        let id = self.next_handle;
        self.next_handle += 1;
        self.notes.insert(id, qubits);
        NoteHandle(id)
    }

    fn take(&mut self, handle: NoteHandle) -> Result<Vec<Qubit>, MoneyError> {
        self.notes.remove(&handle.0).ok_or(MoneyError::UnknownHandle(handle.0))
    }

    pub fn is_live(&self, handle: NoteHandle) -> bool {
        self.notes.contains_key(&handle.0)
    }

    pub fn qubit_count(&self, handle: NoteHandle) -> Result<usize, MoneyError> {
        self.notes.get(&handle.0).map(Vec::len).ok_or(MoneyError::UnknownHandle(handle.0))
    }

    /// Mints `n` uniformly random Wiesner qubits under a fresh serial.
    pub fn note_gen(&mut self, n: usize) -> Result<(NoteHandle, SerialNumber), MoneyError> {
        if n == 0 {
            return Err(MoneyError::EmptyNote);
        }
        let mut serial = [0u8; SERIAL_LEN];
        self.rng.fill_bytes(&mut serial);
        let serial = SerialNumber(serial);
        let bases: Vec<Basis> =
            (0..n).map(|_| if self.rng.gen::<bool>() { Basis::X } else { Basis::Z }).collect();
        let bits: Vec<bool> = (0..n).map(|_| self.rng.gen()).collect();
        let qubits = bases.iter().zip(&bits).map(|(&b, &v)| qubit::prepare(b, v)).collect();
        self.registry.insert(serial, Registration { bases, bits });
        Ok((self.store(qubits), serial))
    }

    /// Measures qubit `i` in registered basis `b_i` and accepts iff every
    /// outcome equals `v_i`. The note collapses in place; an accepted note
    /// stays accepting.
    pub fn ver(&mut self, handle: NoteHandle, serial: &SerialNumber) -> Result<bool, MoneyError> {
        let reg = self.registry.get(serial).ok_or(MoneyError::UnknownSerial)?;
        let qubits = self.notes.get_mut(&handle.0).ok_or(MoneyError::UnknownHandle(handle.0))?;
        if qubits.len() != reg.len() {
            return Ok(false);
        }
        let mut accept = true;
        for ((q, &basis), &bit) in qubits.iter_mut().zip(&reg.bases).zip(&reg.bits) {
            if qubit::measure(q, basis, &mut self.rng)? != bit {
                accept = false;
            }
        }
        Ok(accept)
    }

    /// Verifies several presentations at once. A handle that appears more
    /// than once is a double presentation of one physical note and every
    /// occurrence is rejected. Errors count as rejection.
    pub fn ver_batch(&mut self, items: &[(NoteHandle, SerialNumber)]) -> Vec<bool> {
        let mut seen = HashSet::new();
        let duplicated: HashSet<NoteHandle> =
            items.iter().filter(|(h, _)| !seen.insert(*h)).map(|(h, _)| *h).collect();
        items
            .iter()
            .map(|(h, s)| !duplicated.contains(h) && self.ver(*h, s).unwrap_or(false))
            .collect()
    }

    /// Measures every qubit in `Z` and prepares two notes from the outcomes.
    /// The original handle is consumed.
    pub fn attack_measure_resend(
        &mut self,
        handle: NoteHandle,
    ) -> Result<(NoteHandle, NoteHandle), MoneyError> {
        let mut qubits = self.take(handle)?;
        let mut copy = Vec::with_capacity(qubits.len());
        for q in qubits.iter_mut() {
            let outcome = qubit::measure(q, Basis::Z, &mut self.rng)?;
            copy.push(qubit::prepare(Basis::Z, outcome));
        }
        let a = self.store(qubits);
        let b = self.store(copy);
        Ok((a, b))
    }

    /// Returns the untouched original plus a note of fresh random Wiesner
    /// qubits of the same length.
    pub fn attack_fresh_forgery(
        &mut self,
        handle: NoteHandle,
    ) -> Result<(NoteHandle, NoteHandle), MoneyError> {
        let n = self.qubit_count(handle)?;
        let forged: Vec<Qubit> = (0..n)
            .map(|_| {
                let basis = if self.rng.gen::<bool>() { Basis::X } else { Basis::Z };
                qubit::prepare(basis, self.rng.gen())
            })
            .collect();
        Ok((handle, self.store(forged)))
    }

    /// Simulation-only amplitude dump as `[re0, im0, re1, im1]` per qubit.
    pub fn debug_amplitudes(&self, handle: NoteHandle) -> Result<Vec<[f64; 4]>, MoneyError> {
        if self.game_mode {
            return Err(MoneyError::SimulationOnly);
        }
        let qubits = self.notes.get(&handle.0).ok_or(MoneyError::UnknownHandle(handle.0))?;
        Ok(qubits
            .iter()
            .map(|q| {
                let (a, b) = q.amplitudes();
                [a.re, a.im, b.re, b.im]
            })
            .collect())
    }

    /// Rebuilds a note from a simulation-only dump (CLI demo mode).
    pub fn import_note_sim_only(&mut self, amplitudes: &[[f64; 4]]) -> Result<NoteHandle, MoneyError> {
        if self.game_mode {
            return Err(MoneyError::SimulationOnly);
        }
        if amplitudes.is_empty() {
            return Err(MoneyError::EmptyNote);
        }
        let qubits = amplitudes
            .iter()
            .map(|[r0, i0, r1, i1]| {
                Qubit::new(num_complex::Complex64::new(*r0, *i0), num_complex::Complex64::new(*r1, *i1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.store(qubits))
    }

    /// Registry contents, sorted by serial (CLI bank persistence). The
    /// registry is the mint's secret, so this is refused in game mode.
    pub fn export_registry(&self) -> Result<Vec<(SerialNumber, Registration)>, MoneyError> {
        if self.game_mode {
            return Err(MoneyError::SimulationOnly);
        }
        let mut out: Vec<_> = self.registry.iter().map(|(s, r)| (*s, r.clone())).collect();
        out.sort_by_key(|a| a.0);
        Ok(out)
    }

    /// Adds a registration unless the serial is already known. Refused in
    /// game mode.
    pub fn import_registration(&mut self, serial: SerialNumber, reg: Registration) -> Result<(), MoneyError> {
        if self.game_mode {
            return Err(MoneyError::SimulationOnly);
        }
        self.registry.entry(serial).or_insert(reg);
        Ok(())
    }

    #[cfg(test)]
    fn insert_raw(&mut self, serial: SerialNumber, reg: Registration, qubits: Vec<Qubit>) -> NoteHandle {
        self.registry.insert(serial, reg);
        self.store(qubits)
    }
}

impl NoteVerifier for MoneyAuthority {
    fn ver(&mut self, handle: NoteHandle, serial: &SerialNumber) -> Result<bool, MoneyError> {
        MoneyAuthority::ver(self, handle, serial)
    }
}

/// Counterfeiting channels available to adversaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Attack {
    MeasureResend,
    FreshForgery,
    /// Presents the original handle twice.
    Identity,
}

impl Attack {
    pub fn name(self) -> &'static str {
        match self {
            Attack::MeasureResend => "measure-resend",
            Attack::FreshForgery => "fresh-forgery",
            Attack::Identity => "identity",
        }
    }

    pub fn apply(
        self,
        authority: &mut MoneyAuthority,
        handle: NoteHandle,
    ) -> Result<(NoteHandle, NoteHandle), MoneyError> {
        match self {
            Attack::MeasureResend => authority.attack_measure_resend(handle),
            Attack::FreshForgery => authority.attack_fresh_forgery(handle),
            Attack::Identity => Ok((handle, handle)),
        }
    }

    /// Exact probability that both outputs pass, per qubit, by Born-rule
    /// enumeration over the four equally likely Wiesner states.
    pub fn per_qubit_success(self) -> f64 {
        const STATES: [(Basis, bool); 4] =
            [(Basis::Z, false), (Basis::Z, true), (Basis::X, false), (Basis::X, true)];
        let total: f64 = STATES
            .iter()
            .map(|&(basis, bit)| {
                let state = qubit::prepare(basis, bit);
                match self {
                    Attack::MeasureResend => [false, true]
                        .iter()
                        .map(|&o| {
                            let p_outcome = qubit::born_probability(&state, Basis::Z, o);
                            let pass = qubit::born_probability(&qubit::prepare(Basis::Z, o), basis, bit);
                            p_outcome * pass * pass
                        })
                        .sum::<f64>(),
                    Attack::FreshForgery => {
                        let original = qubit::born_probability(&state, basis, bit);
                        let forged: f64 = STATES
                            .iter()
                            .map(|&(fb, fv)| qubit::born_probability(&qubit::prepare(fb, fv), basis, bit))
                            .sum::<f64>()
                            / 4.0;
                        original * forged
                    }
                    Attack::Identity => 0.0,
                }
            })
            .sum();
        total / 4.0
    }

    pub fn success_probability(self, n: usize) -> f64 {
        self.per_qubit_success().powi(n as i32)
    }
}

impl std::str::FromStr for Attack {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "measure-resend" => Ok(Attack::MeasureResend),
            "fresh-forgery" => Ok(Attack::FreshForgery),
            "identity" => Ok(Attack::Identity),
            other => Err(format!("unknown attack `{other}`")),
        }
    }
}
