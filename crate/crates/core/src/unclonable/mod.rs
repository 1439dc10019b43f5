//! Unclonable NIZK arguments for discrete log, in the CRS model and the
//! random-oracle model, with their simulators, extractors and the
//! money-from-NIZK wrappers.
//!
//! Adversaries see a scheme only through [`UnclonableScheme`]: they can
//! prove and verify like anyone else and manipulate notes through their
//! handles, but never see a trapdoor or program the oracle.

pub mod banknote;
pub mod crs;
pub mod extract;
pub mod rom;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupParams, Scalar};
use crate::money::{Attack, MoneyError, NoteHandle, SerialNumber};
use crate::nizk::simext::SimExtError;
use crate::oracle::OracleError;
use crate::sigma::SigmaError;
use crate::world::World;

pub use crs::{u_ext, u_prove, u_setup, u_sim, u_verify, UCrs, UTrapdoor, UnclonableProofCrs};
pub use extract::{amplify_extractor, clone_extractor_crs, clone_extractor_rom};
pub use rom::{rom_prove, rom_sim, rom_verify, UnclonableProofRom};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnclonableError {
    #[error("witness does not satisfy the instance")]
    WitnessMismatch,
    #[error(transparent)]
    Money(#[from] MoneyError),
    #[error("simulator collision: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

impl From<SigmaError> for UnclonableError {
    fn from(_: SigmaError) -> Self {
        UnclonableError::WitnessMismatch
    }
}

impl From<SimExtError> for UnclonableError {
    fn from(e: SimExtError) -> Self {
        match e {
            SimExtError::WitnessMismatch => UnclonableError::WitnessMismatch,
            SimExtError::Group(g) => UnclonableError::Group(g),
            SimExtError::Oracle(o) => UnclonableError::Oracle(o),
        }
    }
}

/// The public face of an unclonable proof system.
pub trait UnclonableScheme: Sync {
    type Proof: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn params(&self) -> &'static GroupParams;

    fn prove(
        &self,
        world: &mut dyn World,
        x: &GroupElement,
        w: &Scalar,
        rng: &mut ChaCha20Rng,
    ) -> Result<Self::Proof, UnclonableError>;

    fn verify(&self, world: &mut dyn World, x: &GroupElement, proof: &Self::Proof) -> bool;

    fn note(proof: &Self::Proof) -> (NoteHandle, SerialNumber);

    /// The same classical parts carried by a different note.
    fn with_note(proof: &Self::Proof, note: NoteHandle) -> Self::Proof;

    /// Verifies proofs presented together. A note handle that appears more
    /// than once is one physical note claimed twice, and every proof
    /// carrying it is rejected.
    fn verify_all(&self, world: &mut dyn World, items: &[(GroupElement, Self::Proof)]) -> Vec<bool> {
        let mut uses: HashMap<NoteHandle, usize> = HashMap::new();
        for (_, p) in items {
            *uses.entry(Self::note(p).0).or_default() += 1;
        }
        items.iter().map(|(x, p)| uses[&Self::note(p).0] == 1 && self.verify(world, x, p)).collect()
    }
}

/// CRS-model scheme. `label` is bound into every statement; it is empty for
/// plain proofs and carries the message for signatures of knowledge.
#[derive(Clone, Debug)]
pub struct CrsScheme {
    pub crs: UCrs,
    pub label: Vec<u8>,
}

impl CrsScheme {
    pub fn new(crs: UCrs) -> Self {
        CrsScheme { crs, label: Vec::new() }
    }
}

impl UnclonableScheme for CrsScheme {
    type Proof = UnclonableProofCrs;

    fn params(&self) -> &'static GroupParams {
        self.crs.simext.profile.params()
    }

    fn prove(
        &self,
        world: &mut dyn World,
        x: &GroupElement,
        w: &Scalar,
        rng: &mut ChaCha20Rng,
    ) -> Result<UnclonableProofCrs, UnclonableError> {
        crs::u_prove_labeled(self.params(), world, &self.crs, x, w, &self.label, rng)
    }

    fn verify(&self, world: &mut dyn World, x: &GroupElement, proof: &UnclonableProofCrs) -> bool {
        crs::u_verify_labeled(self.params(), world, &self.crs, x, &self.label, proof)
    }

    fn note(proof: &UnclonableProofCrs) -> (NoteHandle, SerialNumber) {
        (proof.note, proof.serial)
    }

    fn with_note(proof: &UnclonableProofCrs, note: NoteHandle) -> UnclonableProofCrs {
        UnclonableProofCrs { note, ..proof.clone() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RomScheme {
    pub params: &'static GroupParams,
}

impl UnclonableScheme for RomScheme {
    type Proof = UnclonableProofRom;

    fn params(&self) -> &'static GroupParams {
        self.params
    }

    fn prove(
        &self,
        world: &mut dyn World,
        x: &GroupElement,
        w: &Scalar,
        rng: &mut ChaCha20Rng,
    ) -> Result<UnclonableProofRom, UnclonableError> {
        rom_prove(self.params, world, x, w, rng)
    }

    fn verify(&self, world: &mut dyn World, x: &GroupElement, proof: &UnclonableProofRom) -> bool {
        rom_verify(self.params, world, x, proof)
    }

    fn note(proof: &UnclonableProofRom) -> (NoteHandle, SerialNumber) {
        (proof.note, proof.serial)
    }

    fn with_note(proof: &UnclonableProofRom, note: NoteHandle) -> UnclonableProofRom {
        UnclonableProofRom { note, ..proof.clone() }
    }
}

/// Which construction a game or extractor runs against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Crs,
    Rom,
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "crs" => Ok(Protocol::Crs),
            "rom" => Ok(Protocol::Rom),
            other => Err(format!("unknown protocol `{other}`")),
        }
    }
}

/// A cloning adversary. It receives `k - 1` proofs and must return `k`
/// claimed `(instance, proof)` pairs. Runs must be deterministic in `rng`
/// (given the same world state) so that rewinding extractors can replay them.
pub trait Adversary<S: UnclonableScheme>: Sync {
    fn run(
        &self,
        world: &mut dyn World,
        scheme: &S,
        inputs: &[(GroupElement, S::Proof)],
        k: usize,
        rng: &mut ChaCha20Rng,
    ) -> Vec<(GroupElement, S::Proof)>;
}

/// Returns `k` copies of its first input, all on the same note.
#[derive(Clone, Copy, Debug, Default)]
pub struct NullAdversary;

impl<S: UnclonableScheme> Adversary<S> for NullAdversary {
    fn run(
        &self,
        _: &mut dyn World,
        _: &S,
        inputs: &[(GroupElement, S::Proof)],
        k: usize,
        _: &mut ChaCha20Rng,
    ) -> Vec<(GroupElement, S::Proof)> {
        inputs.first().map(|first| vec![first.clone(); k]).unwrap_or_default()
    }
}

/// Knows a witness for `x` as advice. Passes its inputs through and adds
/// one fresh honest proof on `x`.
#[derive(Clone, Debug)]
pub struct HonestReprover {
    pub x: GroupElement,
    pub w: Scalar,
}

impl<S: UnclonableScheme> Adversary<S> for HonestReprover {
    fn run(
        &self,
        world: &mut dyn World,
        scheme: &S,
        inputs: &[(GroupElement, S::Proof)],
        k: usize,
        rng: &mut ChaCha20Rng,
    ) -> Vec<(GroupElement, S::Proof)> {
        let mut out: Vec<_> = inputs.iter().take(k.saturating_sub(1)).cloned().collect();
        if let Ok(p) = scheme.prove(world, &self.x, &self.w, rng) {
            out.push((self.x.clone(), p));
        }
        out
    }
}

/// Clones the first input's classical parts and runs a money attack on its
/// note, splitting it into two notes under the same serial.
#[derive(Clone, Copy, Debug)]
pub struct ClassicalCopier {
    pub attack: Attack,
}

impl ClassicalCopier {
    pub fn measure_resend() -> Self {
        ClassicalCopier { attack: Attack::MeasureResend }
    }

    pub fn fresh_forgery() -> Self {
        ClassicalCopier { attack: Attack::FreshForgery }
    }
}

impl<S: UnclonableScheme> Adversary<S> for ClassicalCopier {
    fn run(
        &self,
        world: &mut dyn World,
        _: &S,
        inputs: &[(GroupElement, S::Proof)],
        k: usize,
        _: &mut ChaCha20Rng,
    ) -> Vec<(GroupElement, S::Proof)> {
        let Some((x, first)) = inputs.first() else { return Vec::new() };
        let Ok((a, b)) = self.attack.apply(world.authority(), S::note(first).0) else { return Vec::new() };
        let mut out = vec![(x.clone(), S::with_note(first, a))];
        out.extend(inputs.iter().skip(1).cloned());
        out.push((x.clone(), S::with_note(first, b)));
        out.truncate(k);
        out
    }
}

/// The built-in adversary family, by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuiltinAdversary {
    Null,
    HonestReprover,
    ClassicalCopier,
    FreshForger,
}

impl BuiltinAdversary {
    pub const ALL: [BuiltinAdversary; 4] = [
        BuiltinAdversary::Null,
        BuiltinAdversary::HonestReprover,
        BuiltinAdversary::ClassicalCopier,
        BuiltinAdversary::FreshForger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinAdversary::Null => "null",
            BuiltinAdversary::HonestReprover => "honest-reprover",
            BuiltinAdversary::ClassicalCopier => "classical-copier",
            BuiltinAdversary::FreshForger => "fresh-forger",
        }
    }

    /// Instantiates the adversary. Only the honest reprover uses the advice
    /// `(x, w)`.
    pub fn build<S: UnclonableScheme>(self, x: &GroupElement, w: &Scalar) -> Box<dyn Adversary<S>> {
        match self {
            BuiltinAdversary::Null => Box::new(NullAdversary),
            BuiltinAdversary::HonestReprover => Box::new(HonestReprover { x: x.clone(), w: w.clone() }),
            BuiltinAdversary::ClassicalCopier => Box::new(ClassicalCopier::measure_resend()),
            BuiltinAdversary::FreshForger => Box::new(ClassicalCopier::fresh_forgery()),
        }
    }
}

impl FromStr for BuiltinAdversary {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinAdversary::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown adversary `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::Env;
    use rand::SeedableRng;

    fn fx() -> &'static GroupParams {
        GroupParams::fixture()
    }

    #[test]
    fn verify_all_rejects_shared_handles() {
        let scheme = RomScheme { params: fx() };
        let mut env = Env::seeded(1);
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let w = fx().scalar_from_u64(5);
        let x = fx().g_exp(&w);
        let p = scheme.prove(&mut env, &x, &w, &mut rng).unwrap();
        let q = scheme.prove(&mut env, &x, &w, &mut rng).unwrap();
        let items = vec![(x.clone(), p.clone()), (x.clone(), p), (x.clone(), q)];
        assert_eq!(scheme.verify_all(&mut env, &items), vec![false, false, true]);
    }

    #[test]
    fn adversaries_return_k_outputs() {
        let scheme = RomScheme { params: fx() };
        let w = fx().scalar_from_u64(5);
        let x = fx().g_exp(&w);
        for k in 2..=5 {
            let mut env = Env::seeded(k as u64);
            let mut rng = ChaCha20Rng::seed_from_u64(k as u64);
            for adv in BuiltinAdversary::ALL {
                let inputs: Vec<_> =
                    (1..k).map(|_| (x.clone(), scheme.prove(&mut env, &x, &w, &mut rng).unwrap())).collect();
                let a = adv.build::<RomScheme>(&x, &w);
                let out = a.run(&mut env.view(), &scheme, &inputs, k, &mut rng);
                assert_eq!(out.len(), k, "{} at k={k}", adv.name());
            }
        }
    }

    #[test]
    fn adversary_names_parse() {
        for a in BuiltinAdversary::ALL {
            assert_eq!(a.name().parse::<BuiltinAdversary>().unwrap(), a);
        }
        assert!("nobody".parse::<BuiltinAdversary>().is_err());
        assert_eq!("rom".parse::<Protocol>().unwrap(), Protocol::Rom);
    }
}
