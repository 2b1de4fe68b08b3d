//! PSL(2, p) over prime fields with p ≡ 3 (mod 4): characters, signatures of
//! surface actions, and word growth of finite quotients against polygon
//! Fuchsian groups.

pub mod chartab;
pub mod ffield;
pub mod growth;
pub mod psl2;
pub mod signatures;

pub use chartab::{build_character_table, CharacterTable};
pub use ffield::PrimeField;
pub use psl2::PSL2Elem;
pub use signatures::Signature;
