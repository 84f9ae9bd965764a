pub mod bits;
pub mod cipher;
pub mod error;
pub mod io;
pub mod laserdyn;
pub mod phy;
pub mod scenario;
pub mod stats;
pub mod trng;
pub mod waveform;

pub use bits::BitStream;
pub use error::{Error, Result};
pub use scenario::Scenario;
pub use waveform::Waveform;
