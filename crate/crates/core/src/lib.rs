pub mod ball;
pub mod bounds;
pub mod cases;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod finale;
pub mod lmn;
pub mod localfield;
pub mod modp;
pub mod numfield;
pub mod oracles;
pub mod poly;
pub mod quadforms;
pub mod ratrec;
pub mod roots;

pub use error::{Error, Result, Stage};
