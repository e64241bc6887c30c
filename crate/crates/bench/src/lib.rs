pub use fano_core;
