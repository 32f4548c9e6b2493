pub mod error;
pub mod exact;
pub mod linalg;
pub mod clifford;
pub mod unrep;
pub mod heisenberg;
pub mod lowenergy;
pub mod halfline;
pub mod cusps_index;
pub mod verify;
