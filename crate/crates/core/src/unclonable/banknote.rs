//! Quantum money from unclonable proofs: the banknote is a proof on a
//! freshly sampled hard instance and the serial is the instance (with the
//! crs, in the CRS model).

use rand::{CryptoRng, RngCore};

use crate::encoding::Canonical;
use crate::games::HardDistribution;
use crate::group::{GroupElement, GroupParams};
use crate::unclonable::crs::{u_prove, u_verify, UCrs, UnclonableProofCrs};
use crate::unclonable::rom::{rom_prove, rom_verify, UnclonableProofRom};
use crate::unclonable::UnclonableError;
use crate::world::World;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrsBanknoteSerial {
    pub crs: Vec<u8>,
    pub x: GroupElement,
}

pub fn money_from_nizk_gen_crs<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    dist: &HardDistribution,
    rng: &mut R,
) -> Result<(UnclonableProofCrs, CrsBanknoteSerial), UnclonableError> {
    let (x, w) = dist.sample(params, rng);
    let proof = u_prove(params, world, crs, &x, &w, rng)?;
    Ok((proof, CrsBanknoteSerial { crs: crs.to_canonical_bytes(), x }))
}

pub fn money_from_nizk_ver_crs(
    params: &GroupParams,
    world: &mut dyn World,
    crs: &UCrs,
    note: &UnclonableProofCrs,
    serial: &CrsBanknoteSerial,
) -> bool {
    serial.crs == crs.to_canonical_bytes() && u_verify(params, world, crs, &serial.x, note)
}

pub fn money_from_nizk_gen_rom<R: RngCore + CryptoRng + ?Sized>(
    params: &GroupParams,
    world: &mut dyn World,
    dist: &HardDistribution,
    rng: &mut R,
) -> Result<(UnclonableProofRom, GroupElement), UnclonableError> {
    let (x, w) = dist.sample(params, rng);
    let proof = rom_prove(params, world, &x, &w, rng)?;
    Ok((proof, x))
}

pub fn money_from_nizk_ver_rom(
    params: &GroupParams,
    world: &mut dyn World,
    note: &UnclonableProofRom,
    serial: &GroupElement,
) -> bool {
    rom_verify(params, world, serial, note)
}
